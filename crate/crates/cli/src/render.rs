use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use serde_json::{json, Value as Json};

use fairdiv::arith::to_decimal;
use fairdiv::generators::trial_seed;
use fairdiv::model::{Criterion, FairRatio, FairnessReport, Witness};
use fairdiv::reproduce::ReproduceReport;
use fairdiv::stress::{Counterexample, StressReport};
use fairdiv::{Instance, Value};

const DIGITS: u32 = 12;

fn decimal(r: &FairRatio) -> String {
    match r {
        FairRatio::Finite(v) => to_decimal(v, DIGITS),
        FairRatio::Infinite => "inf".to_string(),
    }
}

fn witness_text(inst: &Instance, c: Criterion, w: &Witness) -> String {
    let mut s = format!("agent {}", w.agent);
    match c {
        Criterion::Mms => s.push_str(" vs own share"),
        Criterion::Gmms => {
            let group: Vec<String> = w.against.iter().map(|a| a.to_string()).collect();
            let _ = write!(s, " in group {{{}}}", group.join(","));
        }
        _ => {
            let others: Vec<String> = w.against.iter().map(|a| a.to_string()).collect();
            let _ = write!(s, " vs agent {}", others.join(","));
        }
    }
    if let Some(g) = w.removed_good {
        let _ = write!(s, " without {}", inst.label(g));
    }
    s
}

fn witness_json(inst: &Instance, w: &Witness) -> Json {
    json!({
        "agent": w.agent,
        "against": w.against,
        "removed_good": w.removed_good.map(|g| inst.label(g).to_string()),
    })
}

fn report_json(inst: &Instance, r: &FairnessReport) -> Json {
    json!({
        "criterion": r.criterion.name(),
        "ratio": r.ratio.to_string(),
        "decimal": decimal(&r.ratio),
        "witness": r.witness.as_ref().map(|w| witness_json(inst, w)),
    })
}

pub fn reports_table(inst: &Instance, reports: &[FairnessReport]) -> String {
    let mut out = format!("{:<6} {:<28} {:<16} witness\n", "crit", "exact", "decimal");
    for r in reports {
        let witness = r
            .witness
            .as_ref()
            .map(|w| witness_text(inst, r.criterion, w))
            .unwrap_or_else(|| "-".to_string());
        let _ = writeln!(
            out,
            "{:<6} {:<28} {:<16} {}",
            r.criterion.name(),
            r.ratio.to_string(),
            decimal(&r.ratio),
            witness
        );
    }
    out
}

pub fn reports_json(
    inst: &Instance,
    reports: &[FairnessReport],
    bounds: &[(Criterion, Value)],
    violated: &[String],
) -> Json {
    json!({
        "reports": reports.iter().map(|r| report_json(inst, r)).collect::<Vec<_>>(),
        "guarantees": bounds
            .iter()
            .map(|(c, b)| json!({ "criterion": c.name(), "bound": b.to_string() }))
            .collect::<Vec<_>>(),
        "violations": violated,
    })
}

pub fn counterexample_json(cex: &Counterexample, base_seed: u64) -> Result<Json> {
    let inst = &cex.instance;
    Ok(json!({
        "trial": cex.trial,
        "instance_seed": trial_seed(base_seed, cex.trial),
        "criterion": cex.report.criterion.name(),
        "bound": cex.bound.to_string(),
        "ratio": cex.report.ratio.to_string(),
        "witness": cex.report.witness.as_ref().map(|w| witness_json(inst, w)),
        "instance": serde_json::from_str::<Json>(&inst.to_json()?)?,
        "allocation": serde_json::to_value(cex.allocation.to_file(inst))?,
    }))
}

fn artifact_str(artifact: Option<&Path>) -> Option<String> {
    artifact.map(|p| p.display().to_string())
}

pub fn stress_json(report: &StressReport, base_seed: u64, artifact: Option<&Path>) -> Json {
    json!({
        "trials_run": report.trials_run,
        "passed": report.passed(),
        "minima": report
            .minima
            .iter()
            .map(|m| json!({
                "criterion": m.criterion.name(),
                "bound": m.bound.to_string(),
                "min": m.min.to_string(),
                "decimal": decimal(&m.min),
                "trial": m.trial,
                "instance_seed": m.trial.map(|t| trial_seed(base_seed, t)),
            }))
            .collect::<Vec<_>>(),
        "violation": report.violation.as_ref().map(|c| json!({
            "trial": c.trial,
            "criterion": c.report.criterion.name(),
            "ratio": c.report.ratio.to_string(),
            "bound": c.bound.to_string(),
        })),
        "counterexample": artifact_str(artifact),
    })
}

pub fn stress_text(report: &StressReport, base_seed: u64, artifact: Option<&Path>) -> String {
    let mut out = format!("trials run: {}\n", report.trials_run);
    for m in &report.minima {
        let at = m
            .trial
            .map(|t| format!(" (trial {t}, instance seed {})", trial_seed(base_seed, t)))
            .unwrap_or_default();
        let _ = writeln!(
            out,
            "{:<5} min {} ~ {} bound {}{}",
            m.criterion.name(),
            m.min,
            decimal(&m.min),
            m.bound,
            at
        );
    }
    match &report.violation {
        None => out.push_str("PASS\n"),
        Some(c) => {
            let _ = writeln!(
                out,
                "FAIL: trial {} {} ratio {} below {}",
                c.trial,
                c.report.criterion.name(),
                c.report.ratio,
                c.bound
            );
            if let Some(p) = artifact_str(artifact) {
                let _ = writeln!(out, "counterexample written to {p}");
            }
        }
    }
    out
}

pub fn reproduce_json(report: &ReproduceReport) -> Json {
    json!({
        "ok": report.ok(),
        "trials": report.trials,
        "seed": report.seed,
        "fixture": report
            .fixture
            .iter()
            .map(|f| json!({ "name": f.name, "expected": f.expected, "actual": f.actual, "ok": f.ok }))
            .collect::<Vec<_>>(),
        "bounds": report
            .bounds
            .iter()
            .map(|b| json!({
                "configuration": b.configuration,
                "criterion": b.criterion.name(),
                "bound": b.bound.to_string(),
                "observed_min": b.observed_min.to_string(),
                "ok": b.ok,
            }))
            .collect::<Vec<_>>(),
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISMATCH"
    }
}

pub fn reproduce_text(report: &ReproduceReport) -> String {
    let mut out = String::from("worked example\n");
    for f in &report.fixture {
        let _ = writeln!(out, "  {:<8} {:<28} expected {:<12} got {}", mark(f.ok), f.name, f.expected, f.actual);
    }
    let _ = writeln!(out, "guarantees ({} trials per row, seed {})", report.trials, report.seed);
    for b in &report.bounds {
        let _ = writeln!(
            out,
            "  {:<8} {:<36} {:<5} >= {:<22} min {} ~ {}",
            mark(b.ok),
            b.configuration,
            b.criterion.name(),
            b.bound.to_string(),
            b.observed_min,
            decimal(&b.observed_min)
        );
    }
    out.push_str(if report.ok() { "all checks passed\n" } else { "some checks failed\n" });
    out
}
