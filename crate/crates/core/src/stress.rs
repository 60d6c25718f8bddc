//! Seeded batches of random instances: allocate, check, and compare every
//! asserted ratio against its exact bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::allocators::{allocate_few_goods, draft_and_eliminate, DraftConfig, GraphKind};
use crate::arith::{golden_constants, phi, rational};
use crate::criteria::check;
use crate::generators::{gen_random, trial_seed, RandomSpec, ValueModel};
use crate::model::{Criterion, FairRatio};
use crate::shares::OracleLimits;
use crate::{Error, FairnessReport, Instance, PartialAllocation, Result, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Algorithm {
    DraftAndEliminate(DraftConfig),
    FewGoods,
}

impl Algorithm {
    pub fn run(&self, inst: &Instance) -> Result<PartialAllocation> {
        match self {
            Algorithm::DraftAndEliminate(config) => draft_and_eliminate(inst, config),
            Algorithm::FewGoods => allocate_few_goods(inst),
        }
    }
}

/// Number of goods per trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GoodsRange {
    Absolute { min: usize, max: usize },
    /// From `n - below` (at least 0) to `n + above`.
    AroundAgents { below: usize, above: usize },
}

impl GoodsRange {
    fn bounds(&self, n: usize) -> (usize, usize) {
        match *self {
            GoodsRange::Absolute { min, max } => (min, max),
            GoodsRange::AroundAgents { below, above } => (n.saturating_sub(below), n + above),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StressConfig {
    pub trials: u64,
    pub n_range: (usize, usize),
    pub m_range: GoodsRange,
    pub value_model: ValueModel,
    pub seed: u64,
    pub algorithm: Algorithm,
    pub asserts: Vec<(Criterion, Value)>,
    pub limits: OracleLimits,
}

impl StressConfig {
    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.n_range;
        if lo == 0 || lo > hi {
            return Err(Error::InvalidParameter(format!("bad agent range [{lo}, {hi}]")));
        }
        let (_, m_hi) = self.m_range.bounds(hi);
        if self.m_range.bounds(lo).0 > m_hi {
            return Err(Error::InvalidParameter("empty goods range".into()));
        }
        if let GoodsRange::Absolute { min, max } = self.m_range {
            if min > max {
                return Err(Error::InvalidParameter(format!("bad goods range [{min}, {max}]")));
            }
        }
        let oracle = self.asserts.iter().any(|(c, _)| c.needs_oracle());
        if oracle && m_hi > self.limits.max_goods {
            return Err(Error::OracleLimit {
                size: m_hi,
                limit: self.limits.max_goods,
            });
        }
        if self.asserts.iter().any(|(c, _)| *c == Criterion::Gmms) && hi > self.limits.max_group_agents {
            return Err(Error::GroupLimit {
                agents: hi,
                limit: self.limits.max_group_agents,
            });
        }
        Ok(())
    }

    /// The instance of trial `index`.
    pub fn instance(&self, index: u64) -> Result<Instance> {
        let seed = trial_seed(self.seed, index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(self.n_range.0..=self.n_range.1);
        let (m_lo, m_hi) = self.m_range.bounds(n);
        let m = rng.gen_range(m_lo..=m_hi);
        gen_random(&RandomSpec {
            n,
            m,
            value_model: self.value_model.clone(),
            seed: rng.gen(),
        })
    }
}

/// Smallest ratio seen for one asserted criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionMinimum {
    pub criterion: Criterion,
    pub bound: Value,
    pub min: FairRatio,
    /// Trial attaining `min` (first one on ties); `None` when no trial ran.
    pub trial: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct Counterexample {
    pub trial: u64,
    pub instance: Instance,
    pub allocation: PartialAllocation,
    pub bound: Value,
    pub report: FairnessReport,
}

#[derive(Clone, Debug)]
pub struct StressReport {
    pub trials_run: u64,
    pub minima: Vec<CriterionMinimum>,
    /// The lowest-index violating trial, if any. The batch stops there.
    pub violation: Option<Counterexample>,
}

impl StressReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

struct TrialResult {
    instance: Instance,
    allocation: PartialAllocation,
    reports: Vec<FairnessReport>,
}

fn run_trial(cfg: &StressConfig, index: u64) -> Result<TrialResult> {
    let instance = cfg.instance(index)?;
    let allocation = cfg.algorithm.run(&instance)?;
    let reports = cfg
        .asserts
        .iter()
        .map(|(c, _)| check(&instance, &allocation, *c, &cfg.limits))
        .collect::<Result<_>>()?;
    Ok(TrialResult {
        instance,
        allocation,
        reports,
    })
}

const CHUNK: u64 = 64;

/// Trials run in parallel chunks; results are reduced in trial order, so the
/// report does not depend on scheduling.
pub fn run_stress(cfg: &StressConfig) -> Result<StressReport> {
    cfg.validate()?;
    let mut minima: Vec<CriterionMinimum> = cfg
        .asserts
        .iter()
        .map(|(c, b)| CriterionMinimum {
            criterion: *c,
            bound: b.clone(),
            min: FairRatio::Infinite,
            trial: None,
        })
        .collect();
    let mut start = 0;
    while start < cfg.trials {
        let end = (start + CHUNK).min(cfg.trials);
        let results: Vec<Result<TrialResult>> = (start..end).into_par_iter().map(|t| run_trial(cfg, t)).collect();
        for (t, result) in (start..end).zip(results) {
            let result = result?;
            for (slot, report) in minima.iter_mut().zip(&result.reports) {
                if slot.trial.is_none() || report.ratio < slot.min {
                    slot.min = report.ratio.clone();
                    slot.trial = Some(t);
                }
            }
            let failed = cfg
                .asserts
                .iter()
                .zip(&result.reports)
                .find(|((_, bound), report)| !report.ratio.meets(bound));
            if let Some(((_, bound), report)) = failed {
                return Ok(StressReport {
                    trials_run: t + 1,
                    minima,
                    violation: Some(Counterexample {
                        trial: t,
                        bound: bound.clone(),
                        report: report.clone(),
                        instance: result.instance,
                        allocation: result.allocation,
                    }),
                });
            }
        }
        start = end;
    }
    Ok(StressReport {
        trials_run: cfg.trials,
        minima,
        violation: None,
    })
}

/// One proven configuration and its guaranteed ratios.
#[derive(Clone, Debug)]
pub struct BoundRow {
    pub name: &'static str,
    pub algorithm: Algorithm,
    pub bounds: Vec<(Criterion, Value)>,
}

/// The guarantee matrix: Draft-and-Eliminate under its three proven
/// configurations and the exact algorithm for few goods.
pub fn guarantee_table() -> Vec<BoundRow> {
    let c = golden_constants();
    let one = Value::from(1);
    let three_halves = Value::from(rational(3, 2));
    vec![
        BoundRow {
            name: "draft-eliminate theta=phi",
            algorithm: Algorithm::DraftAndEliminate(DraftConfig {
                theta: phi(),
                graph: GraphKind::Standard,
            }),
            bounds: vec![
                (Criterion::Ef1, one.clone()),
                (Criterion::Efx, c.phi_minus_one.clone()),
                (Criterion::Pmms, c.two_thirds.clone()),
                (Criterion::Gmms, c.two_over_phi_plus_two.clone()),
            ],
        },
        BoundRow {
            name: "draft-eliminate theta=3/2",
            algorithm: Algorithm::DraftAndEliminate(DraftConfig {
                theta: three_halves,
                graph: GraphKind::Standard,
            }),
            bounds: vec![
                (Criterion::Ef1, one.clone()),
                (Criterion::Efx, c.three_fifths.clone()),
                (Criterion::Pmms, c.two_thirds.clone()),
                (Criterion::Gmms, c.four_sevenths.clone()),
            ],
        },
        BoundRow {
            name: "draft-eliminate theta=phi adjusted",
            algorithm: Algorithm::DraftAndEliminate(DraftConfig {
                theta: phi(),
                graph: GraphKind::Adjusted(c.phi_minus_half.clone()),
            }),
            bounds: vec![
                (Criterion::Ef1, c.ef1_adjusted.clone()),
                (Criterion::Efx, c.phi_minus_one.clone()),
                (Criterion::Pmms, c.pmms_adjusted.clone()),
                (Criterion::Gmms, c.two_over_phi_plus_two.clone()),
            ],
        },
        BoundRow {
            name: "few-goods",
            algorithm: Algorithm::FewGoods,
            bounds: vec![(Criterion::Efx, one.clone()), (Criterion::Gmms, one)],
        },
    ]
}

/// Batch shape used for a guarantee row: small random integer instances, or
/// `m` within two of `n` for the few-goods algorithm.
pub fn default_batch(row: &BoundRow, trials: u64, seed: u64) -> StressConfig {
    let (n_range, m_range) = match row.algorithm {
        Algorithm::FewGoods => ((2, 6), GoodsRange::AroundAgents { below: 1, above: 2 }),
        Algorithm::DraftAndEliminate(_) => ((2, 5), GoodsRange::Absolute { min: 2, max: 10 }),
    };
    StressConfig {
        trials,
        n_range,
        m_range,
        value_model: ValueModel::UniformInteger(20),
        seed,
        algorithm: row.algorithm.clone(),
        asserts: row.bounds.clone(),
        limits: OracleLimits::default(),
    }
}
