//! `fairdiv`: allocate, check, shares, gen, stress, reproduce.
//!
//! Exit status: 0 on success, 1 when an asserted bound is violated, 2 on
//! usage errors, bad input or exceeded oracle limits.

mod args;
mod render;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Parser;

use fairdiv::allocators::{
    draft_and_eliminate, envy_cycle_elimination, round_robin, theta_has_guarantee, DraftConfig, EnvyGraphMode,
    GraphKind,
};
use fairdiv::criteria::check;
use fairdiv::generators::{appendix_a, gen_adversarial, gen_random, AdversarialSpec, RandomSpec};
use fairdiv::model::{AllocationFile, Criterion, Provenance};
use fairdiv::reproduce::run_reproduce;
use fairdiv::shares::{maximin_share, OracleLimits};
use fairdiv::stress::{guarantee_table, run_stress, Algorithm, GoodsRange, StressConfig};
use fairdiv::{GoodSet, Instance, Ordering, PartialAllocation, Value};

use args::{AlgoName, AllocateArgs, CheckArgs, Cli, Command, GenCommand, GraphName, SharesArgs, StressArgs};

const ORACLE_LIMIT_VAR: &str = "FAIRDIV_ORACLE_LIMIT";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    let limits = oracle_limits()?;
    match cli.command {
        Command::Allocate(a) => allocate(a),
        Command::Check(a) => check_cmd(a, &limits),
        Command::Shares(a) => shares(a, &limits),
        Command::Gen(g) => gen(g),
        Command::Stress(a) => stress(a, &limits),
        Command::Reproduce(a) => {
            let report = run_reproduce(a.trials, a.seed, &limits)?;
            if a.json {
                println!("{}", serde_json::to_string_pretty(&render::reproduce_json(&report))?);
            } else {
                print!("{}", render::reproduce_text(&report));
            }
            Ok(if report.ok() { 0 } else { 1 })
        }
    }
}

fn oracle_limits() -> Result<OracleLimits> {
    match std::env::var(ORACLE_LIMIT_VAR) {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{ORACLE_LIMIT_VAR} must be a nonnegative integer, got {v:?}"))?;
            Ok(OracleLimits::with_max_goods(n))
        }
        Err(_) => Ok(OracleLimits::default()),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Instance::from_json(&text).with_context(|| format!("parsing instance {}", path.display()))
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn draft_config(theta: &Value, graph: GraphName) -> DraftConfig {
    DraftConfig {
        theta: theta.clone(),
        graph: match graph {
            GraphName::Standard => GraphKind::Standard,
            GraphName::Adjusted => GraphKind::adjusted_default(),
        },
    }
}

/// Proven bounds of a configuration, if it is one of the theorem-backed ones.
fn guarantees(algorithm: &Algorithm) -> Option<Vec<(Criterion, Value)>> {
    guarantee_table()
        .into_iter()
        .find(|row| &row.algorithm == algorithm)
        .map(|row| row.bounds)
}

fn allocate(a: AllocateArgs) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let n = inst.agents();
    let m = inst.num_goods();
    let mut parameters = BTreeMap::new();
    let (alloc, algorithm) = match a.algo {
        AlgoName::DraftEliminate => {
            let config = draft_config(&a.theta, a.envy_graph);
            parameters.insert("theta".to_string(), a.theta.to_string());
            parameters.insert("envy_graph".to_string(), a.envy_graph.to_string());
            let alloc = draft_and_eliminate(&inst, &config)?;
            (alloc, Some(Algorithm::DraftAndEliminate(config)))
        }
        AlgoName::FewGoods => (fairdiv::allocators::allocate_few_goods(&inst)?, Some(Algorithm::FewGoods)),
        AlgoName::RoundRobin => {
            let (alloc, _) = round_robin(&inst, PartialAllocation::empty(n, m), &inst.all_goods(), &Ordering::identity(n), m)?;
            (alloc, None)
        }
        AlgoName::Ece => {
            let alloc = envy_cycle_elimination(&inst, PartialAllocation::empty(n, m), &inst.all_goods(), &EnvyGraphMode::Standard);
            (alloc, None)
        }
    };
    if let Some(algorithm) = &algorithm {
        let backed = guarantees(algorithm).is_some();
        if !backed {
            let why = if theta_has_guarantee(&a.theta) { "envy graph" } else { "theta" };
            eprintln!("note: no theorem-backed guarantee for this {why} (theta = {}, envy graph {})", a.theta, a.envy_graph);
            parameters.insert("guarantee".to_string(), "no theorem-backed guarantee".to_string());
        }
    }
    let file = AllocationFile {
        provenance: Some(Provenance {
            algorithm: a.algo.to_string(),
            parameters,
            instance_hash: inst.content_hash()?,
        }),
        bundles: alloc.to_file(&inst).bundles,
    };
    write_or_print(a.out.as_ref(), &serde_json::to_string_pretty(&file)?)?;
    Ok(0)
}

/// Rebuilds the configuration named in a provenance header.
fn algorithm_from(provenance: &Provenance) -> Result<Option<Algorithm>> {
    let algo: AlgoName = provenance.algorithm.parse().map_err(anyhow::Error::msg)?;
    Ok(match algo {
        AlgoName::DraftEliminate => {
            let theta = provenance
                .parameters
                .get("theta")
                .and_then(|t| fairdiv::arith::parse_value(t))
                .context("provenance lacks a readable theta")?;
            let graph: GraphName = provenance
                .parameters
                .get("envy_graph")
                .map(|g| g.parse().map_err(anyhow::Error::msg))
                .transpose()?
                .unwrap_or(GraphName::Standard);
            Some(Algorithm::DraftAndEliminate(draft_config(&theta, graph)))
        }
        AlgoName::FewGoods => Some(Algorithm::FewGoods),
        AlgoName::RoundRobin | AlgoName::Ece => None,
    })
}

fn check_cmd(a: CheckArgs, limits: &OracleLimits) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let text = fs::read_to_string(&a.allocation).with_context(|| format!("reading {}", a.allocation.display()))?;
    let file: AllocationFile = serde_json::from_str(&text).context("parsing allocation")?;
    if let Some(p) = &file.provenance {
        if p.instance_hash != inst.content_hash()? {
            bail!("allocation was produced for a different instance (hash {})", p.instance_hash);
        }
    }
    let alloc = PartialAllocation::from_file(&file, &inst)?;
    let criteria = if a.criteria.is_empty() {
        Criterion::ALL.to_vec()
    } else {
        a.criteria.clone()
    };
    let reports = criteria
        .iter()
        .map(|&c| check(&inst, &alloc, c, limits))
        .collect::<fairdiv::Result<Vec<_>>>()?;

    let mut bounds: Vec<(Criterion, Value)> = Vec::new();
    if a.assert_guarantees {
        let provenance = file.provenance.as_ref().context("--assert-guarantees needs a provenance header")?;
        let algorithm = algorithm_from(provenance)?;
        match algorithm.as_ref().and_then(guarantees) {
            Some(b) => bounds = b,
            None => bail!("{} with these parameters has no theorem-backed guarantee", provenance.algorithm),
        }
    }
    let mut violated = Vec::new();
    for (c, bound) in &bounds {
        let report = match reports.iter().find(|r| r.criterion == *c) {
            Some(r) => r.clone(),
            None => check(&inst, &alloc, *c, limits)?,
        };
        if !report.ratio.meets(bound) {
            violated.push(format!("{c} ratio {} below guaranteed {bound}", report.ratio));
        }
    }

    if a.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&render::reports_json(&inst, &reports, &bounds, &violated))?
        );
    } else {
        print!("{}", render::reports_table(&inst, &reports));
        for (c, bound) in &bounds {
            println!("guarantee {c} >= {bound}");
        }
    }
    for v in &violated {
        eprintln!("violation: {v}");
    }
    Ok(if violated.is_empty() { 0 } else { 1 })
}

fn shares(a: SharesArgs, limits: &OracleLimits) -> Result<u8> {
    let inst = read_instance(&a.instance)?;
    let subset: GoodSet = match &a.goods {
        None => inst.all_goods(),
        Some(labels) => labels
            .iter()
            .map(|l| inst.good_index(l).with_context(|| format!("unknown good {l:?}")))
            .collect::<Result<_>>()?,
    };
    let parts = a.parts.unwrap_or(inst.agents());
    let (share, partition) = maximin_share(&inst, a.agent, parts, &subset, limits)?;
    let json = serde_json::json!({
        "agent": a.agent,
        "parts": parts,
        "value": share.to_string(),
        "partition": partition
            .parts
            .iter()
            .map(|p| p.iter().map(|&g| inst.label(g).to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&json)?);
    Ok(0)
}

fn gen(g: GenCommand) -> Result<u8> {
    match g {
        GenCommand::Random { n, m, model, seed, out } => {
            let inst = gen_random(&RandomSpec {
                n,
                m,
                value_model: model.0,
                seed,
            })?;
            write_or_print(out.as_ref(), &inst.to_json_pretty()?)?;
        }
        GenCommand::AppendixA {
            out,
            allocation_out,
            variant,
        } => {
            let (inst, a, a_prime) = appendix_a();
            write_or_print(out.as_ref(), &inst.to_json_pretty()?)?;
            if let Some(path) = allocation_out {
                let alloc = if variant.is_prime() { a_prime } else { a };
                write_or_print(Some(&path), &serde_json::to_string_pretty(&alloc.to_file(&inst))?)?;
            }
        }
        GenCommand::Adversarial {
            n,
            k,
            alpha,
            beta,
            out,
            allocation_out,
        } => {
            let (inst, alloc) = gen_adversarial(&AdversarialSpec {
                n,
                k,
                alpha: alpha.0,
                beta: beta.0,
            })?;
            write_or_print(out.as_ref(), &inst.to_json_pretty()?)?;
            if let Some(path) = allocation_out {
                write_or_print(Some(&path), &serde_json::to_string_pretty(&alloc.to_file(&inst))?)?;
            }
        }
    }
    Ok(0)
}

fn stress(a: StressArgs, limits: &OracleLimits) -> Result<u8> {
    let algorithm = match a.algo {
        AlgoName::DraftEliminate => Algorithm::DraftAndEliminate(draft_config(&a.theta, a.envy_graph)),
        AlgoName::FewGoods => Algorithm::FewGoods,
        other => bail!("stress supports draft-eliminate and few-goods, not {other}"),
    };
    let asserts = if a.asserts.is_empty() {
        guarantees(&algorithm).context("configuration has no theorem-backed guarantee; pass --assert CRITERION>=BOUND")?
    } else {
        a.asserts.iter().map(|b| (b.0, b.1.clone())).collect()
    };
    let m_range = match (a.m_min, a.m_max, &algorithm) {
        (None, None, Algorithm::FewGoods) => GoodsRange::AroundAgents { below: 1, above: 2 },
        (min, max, _) => GoodsRange::Absolute {
            min: min.unwrap_or(2),
            max: max.unwrap_or(10),
        },
    };
    let cfg = StressConfig {
        trials: a.trials,
        n_range: (a.n_min, a.n_max),
        m_range,
        value_model: a.model.0.clone(),
        seed: a.seed,
        algorithm,
        asserts,
        limits: limits.clone(),
    };
    let report = run_stress(&cfg)?;
    let mut artifact = None;
    if let Some(cex) = &report.violation {
        let json = render::counterexample_json(cex, a.seed)?;
        fs::write(&a.counterexample_out, serde_json::to_string_pretty(&json)? + "\n")
            .with_context(|| format!("writing {}", a.counterexample_out.display()))?;
        artifact = Some(a.counterexample_out.clone());
    }
    if a.json {
        println!("{}", serde_json::to_string_pretty(&render::stress_json(&report, a.seed, artifact.as_deref()))?);
    } else {
        print!("{}", render::stress_text(&report, a.seed, artifact.as_deref()));
    }
    Ok(if report.passed() { 0 } else { 1 })
}
