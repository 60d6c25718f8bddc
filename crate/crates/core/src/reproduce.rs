//! Recomputes the worked example's published numbers and the guarantee
//! matrix against a fixed seeded batch.

use crate::arith::rational;
use crate::criteria::check;
use crate::generators::appendix_a;
use crate::model::{Criterion, FairRatio};
use crate::shares::{maximin_share, OracleLimits};
use crate::stress::{default_batch, guarantee_table, run_stress};
use crate::{Result, Value};

/// One recomputed number from the worked example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

/// One cell of the guarantee matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundCheck {
    pub configuration: &'static str,
    pub criterion: Criterion,
    pub bound: Value,
    pub observed_min: FairRatio,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReproduceReport {
    pub fixture: Vec<FixtureCheck>,
    pub bounds: Vec<BoundCheck>,
    pub trials: u64,
    pub seed: u64,
}

impl ReproduceReport {
    pub fn ok(&self) -> bool {
        self.fixture.iter().all(|c| c.ok) && self.bounds.iter().all(|c| c.ok)
    }
}

pub const DEFAULT_TRIALS: u64 = 200;
pub const DEFAULT_SEED: u64 = 2020;

fn fixture_checks(limits: &OracleLimits) -> Result<Vec<FixtureCheck>> {
    let (inst, good, weak) = appendix_a();
    let mut out = Vec::new();
    for (agent, expected) in [(0, 10), (1, 12), (2, 10)] {
        let (mu, _) = maximin_share(&inst, agent, 3, &inst.all_goods(), limits)?;
        out.push(FixtureCheck {
            name: format!("mu_{}(3, M)", agent + 1),
            expected: expected.to_string(),
            actual: mu.to_string(),
            ok: mu == rational(expected, 1),
        });
    }
    let one = Value::from(1);
    for c in [Criterion::Efx, Criterion::Mms, Criterion::Pmms, Criterion::Gmms] {
        let ratio = check(&inst, &good, c, limits)?.ratio;
        out.push(FixtureCheck {
            name: format!("{c}(A)"),
            expected: ">= 1".into(),
            actual: ratio.to_string(),
            ok: ratio.meets(&one),
        });
    }
    let three_fifths = FairRatio::Finite(Value::from(rational(3, 5)));
    let six_fifths = FairRatio::Finite(Value::from(rational(6, 5)));
    for (c, expected) in [
        (Criterion::Efx, &three_fifths),
        (Criterion::Mms, &three_fifths),
        (Criterion::Pmms, &three_fifths),
        (Criterion::Gmms, &three_fifths),
        (Criterion::Ef1, &six_fifths),
    ] {
        let ratio = check(&inst, &weak, c, limits)?.ratio;
        out.push(FixtureCheck {
            name: format!("{c}(A')"),
            expected: expected.to_string(),
            ok: &ratio == expected,
            actual: ratio.to_string(),
        });
    }
    Ok(out)
}

pub fn run_reproduce(trials: u64, seed: u64, limits: &OracleLimits) -> Result<ReproduceReport> {
    let fixture = fixture_checks(limits)?;
    let mut bounds = Vec::new();
    for row in guarantee_table() {
        let mut cfg = default_batch(&row, trials, seed);
        cfg.limits = limits.clone();
        let report = run_stress(&cfg)?;
        for (min, (criterion, bound)) in report.minima.into_iter().zip(row.bounds) {
            bounds.push(BoundCheck {
                configuration: row.name,
                criterion,
                ok: min.min.meets(&bound),
                bound,
                observed_min: min.min,
            });
        }
    }
    Ok(ReproduceReport {
        fixture,
        bounds,
        trials,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_reproduces() {
        let checks = fixture_checks(&OracleLimits::default()).unwrap();
        for c in &checks {
            assert!(c.ok, "{c:?}");
        }
        assert_eq!(checks.len(), 12);
    }

    #[test]
    fn small_batch_is_consistent() {
        let report = run_reproduce(10, 1, &OracleLimits::default()).unwrap();
        assert!(report.ok());
        assert_eq!(report.bounds.len(), 14);
    }
}
