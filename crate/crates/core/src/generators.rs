//! Instance construction: seeded random families, the small worked example
//! with its two discussed allocations, and an adversarial family on which
//! envy-freeness and maximin guarantees are hard to meet simultaneously.

use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::rational;
use crate::{Error, GoodSet, Instance, PartialAllocation, Rational, Result};

/// How valuation entries are drawn.
#[derive(Clone, Debug, PartialEq)]
pub enum ValueModel {
    /// Integers uniform in `[0, max]`.
    UniformInteger(u64),
    /// `a / b` with `b` uniform in `[1, max_den]` and `a` uniform in `[0, max_den]`.
    UniformRational(u64),
    /// Uniform choice from a fixed list.
    FewDistinct(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    pub m: usize,
    pub value_model: ValueModel,
    pub seed: u64,
}

/// Deterministic: the ChaCha8 stream seeded by `spec.seed` fills the matrix
/// row by row.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("at least one agent is required".into()));
    }
    match &spec.value_model {
        ValueModel::UniformRational(0) => {
            return Err(Error::InvalidParameter("max_den must be positive".into()))
        }
        ValueModel::FewDistinct(values) if values.is_empty() => {
            return Err(Error::InvalidParameter("few-distinct needs at least one value".into()))
        }
        ValueModel::FewDistinct(values) if values.iter().any(|v| *v < Rational::zero()) => {
            return Err(Error::InvalidParameter("values must be nonnegative".into()))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut draw = || -> Rational {
        match &spec.value_model {
            ValueModel::UniformInteger(max) => Rational::from_integer(rng.gen_range(0..=*max).into()),
            ValueModel::UniformRational(max_den) => {
                let den = rng.gen_range(1..=*max_den);
                let num = rng.gen_range(0..=*max_den);
                Rational::new(num.into(), den.into())
            }
            ValueModel::FewDistinct(values) => values[rng.gen_range(0..values.len())].clone(),
        }
    };
    let valuations = (0..spec.n)
        .map(|_| (0..spec.m).map(|_| draw()).collect())
        .collect();
    Instance::new(default_labels(spec.m), valuations)
}

/// Labels `g1, ..., gm`.
pub fn default_labels(m: usize) -> Vec<String> {
    (1..=m).map(|g| format!("g{g}")).collect()
}

/// Seed for trial `index` of a batch, independent of how many trials run.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(index);
    rng.next_u64()
}

/// The three-agent, five-good worked example, with an allocation satisfying
/// every relaxed criterion and one that is only 3/5-fair.
pub fn appendix_a() -> (Instance, PartialAllocation, PartialAllocation) {
    let goods = ["a", "b", "c", "d", "e"].map(String::from).to_vec();
    let rows: [[i64; 5]; 3] = [[10, 6, 7, 5, 3], [6, 8, 12, 7, 5], [10, 11, 3, 2, 7]];
    let valuations = rows
        .iter()
        .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
        .collect();
    let inst = Instance::new(goods, valuations).expect("fixture is valid");
    let good = PartialAllocation::from_lists(&[&[0, 3], &[2], &[1, 4]], 5).expect("fixture is valid");
    let weak = PartialAllocation::from_lists(&[&[1], &[2, 4], &[0, 3]], 5).expect("fixture is valid");
    (inst, good, weak)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdversarialSpec {
    pub n: usize,
    pub k: usize,
    pub alpha: Rational,
    pub beta: Rational,
}

/// Instance with `4k + n` goods and its prescribed allocation. Agent 0 holds
/// `2k` goods worth `alpha` in total while the `2k` goods of agent 1's bundle
/// are worth `2 - alpha` to her; agents `1..n` value exactly the goods of
/// their own bundle, at 1 each, and so envy nobody.
pub fn gen_adversarial(spec: &AdversarialSpec) -> Result<(Instance, PartialAllocation)> {
    let AdversarialSpec { n, k, alpha, beta } = spec;
    let (n, k) = (*n, *k);
    let open_unit = |x: &Rational| *x > Rational::zero() && *x < Rational::one();
    if n < 3 {
        return Err(Error::InvalidParameter(format!("adversarial family needs n >= 3, got {n}")));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("adversarial family needs k >= 1".into()));
    }
    if !open_unit(alpha) || !open_unit(beta) {
        return Err(Error::InvalidParameter(format!(
            "alpha and beta must lie in (0, 1), got {alpha} and {beta}"
        )));
    }
    let m = 4 * k + n;
    let two_k = Rational::from_integer((2 * k).into());
    let two = Rational::from_integer(2.into());

    let mut bundles: Vec<GoodSet> = vec![GoodSet::new(); n];
    bundles[0] = (0..2 * k).collect();
    bundles[1] = (2 * k..=4 * k).collect();
    bundles[2] = GoodSet::from([4 * k + 1, 4 * k + 2]);
    for (j, bundle) in bundles.iter_mut().enumerate().skip(3) {
        bundle.insert(4 * k + j);
    }

    let mut first = Vec::with_capacity(m);
    first.extend((0..2 * k).map(|_| alpha / &two_k));
    first.extend((0..2 * k).map(|_| (&two - alpha) / &two_k));
    first.extend([rational(1, 100), rational(1, 100), &two / beta]);
    first.extend((4 * k + 3..m).map(|_| Rational::one()));

    let mut valuations = vec![first];
    for bundle in &bundles[1..] {
        valuations.push(
            (0..m)
                .map(|g| if bundle.contains(&g) { Rational::one() } else { Rational::zero() })
                .collect(),
        );
    }
    let inst = Instance::new(default_labels(m), valuations)?;
    let alloc = PartialAllocation::from_bundles(bundles, m)?;
    Ok((inst, alloc))
}
