//! Exact maximin shares by exhaustive partition enumeration.
//!
//! `mu_i(k, S)` is the best value agent `i` can guarantee herself by cutting
//! `S` into `k` (possibly empty) parts and keeping the worst one. Partitions
//! are enumerated as restricted growth strings with at most `k` blocks, so
//! every set partition is visited once. A water-filling bound prunes subtrees
//! that cannot beat the incumbent.

use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::{Error, GoodSet, Instance, Rational, Result};

/// Default cap on `|S|` for the exact oracle.
pub const DEFAULT_MAX_GOODS: usize = 14;
/// Default cap on the number of agents for group enumeration.
pub const DEFAULT_MAX_GROUP_AGENTS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_goods: usize,
    pub max_group_agents: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            max_goods: DEFAULT_MAX_GOODS,
            max_group_agents: DEFAULT_MAX_GROUP_AGENTS,
        }
    }
}

impl OracleLimits {
    pub fn with_max_goods(max_goods: usize) -> Self {
        OracleLimits {
            max_goods,
            ..Default::default()
        }
    }
}

/// Scalars the enumeration can run on. Anything ordered and additive works;
/// the library uses machine integers when scaled values fit and `BigInt`
/// otherwise, and `f64` is accepted for quick approximate use.
pub trait ShareScalar: Clone + PartialOrd + Zero + Add<Output = Self> + Sub<Output = Self> {}

impl<T> ShareScalar for T where T: Clone + PartialOrd + Zero + Add<Output = T> + Sub<Output = T> {}

struct Search<'a, T> {
    values: &'a [T],
    suffix: Vec<T>,
    parts: usize,
    sums: Vec<T>,
    labels: Vec<usize>,
    best: Option<(T, Vec<usize>)>,
    exhausted: bool,
}

impl<T: ShareScalar> Search<'_, T> {
    /// Whether some completion of the current prefix could end with every
    /// block strictly above the incumbent.
    fn can_improve(&self, sums: &[T], idx: usize) -> bool {
        let Some((best, _)) = &self.best else {
            return true;
        };
        let remaining = &self.suffix[idx];
        let items_left = self.values.len() - idx;
        let mut deficit = T::zero();
        let mut needy = 0usize;
        for s in sums {
            if s <= best {
                needy += 1;
                deficit = deficit + (best.clone() - s.clone());
            }
        }
        needy <= items_left && (needy == 0 || deficit < *remaining)
    }

    fn descend(&mut self, idx: usize, used: usize) {
        if self.exhausted {
            return;
        }
        if idx == self.values.len() {
            let floor = self
                .sums
                .iter()
                .cloned()
                .reduce(|a, b| if b < a { b } else { a })
                .unwrap_or_else(T::zero);
            let better = match &self.best {
                None => true,
                Some((b, _)) => floor > *b,
            };
            if better {
                self.best = Some((floor, self.labels.clone()));
                // Nothing can beat total/parts; stop once it is reached.
                let empty = vec![T::zero(); self.parts];
                if !self.can_improve(&empty, 0) {
                    self.exhausted = true;
                }
            }
            return;
        }
        if !self.can_improve(&self.sums, idx) {
            return;
        }
        let limit = if used < self.parts { used + 1 } else { used };
        for block in 0..limit {
            let v = self.values[idx].clone();
            let before = self.sums[block].clone();
            self.sums[block] = before.clone() + v;
            self.labels.push(block);
            self.descend(idx + 1, used.max(block + 1));
            self.labels.pop();
            self.sums[block] = before;
            if self.exhausted {
                return;
            }
        }
    }
}

/// Maximizes the minimum block sum over partitions of `values` into at most
/// `parts` blocks. Returns the optimum and the block label of each element
/// for the first maximizer in restricted-growth-string order.
pub fn max_min_partition<T: ShareScalar>(values: &[T], parts: usize) -> (T, Vec<usize>) {
    assert!(parts >= 1, "at least one part");
    let mut suffix = vec![T::zero(); values.len() + 1];
    for i in (0..values.len()).rev() {
        suffix[i] = suffix[i + 1].clone() + values[i].clone();
    }
    let mut search = Search {
        values,
        suffix,
        parts,
        sums: vec![T::zero(); parts],
        labels: Vec::with_capacity(values.len()),
        best: None,
        exhausted: false,
    };
    search.descend(0, 0);
    search.best.expect("enumeration visits at least one partition")
}

/// A partition attaining the maximin share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningPartition {
    pub parts: Vec<GoodSet>,
    pub floor: Rational,
}

fn check_query(inst: &Instance, agent: usize, parts: usize, subset: &GoodSet) -> Result<()> {
    if parts == 0 {
        return Err(Error::InvalidParameter("maximin share needs k >= 1".into()));
    }
    if agent >= inst.agents() {
        return Err(Error::IndexOutOfRange {
            what: "agent",
            index: agent,
            size: inst.agents(),
        });
    }
    if let Some(&g) = subset.iter().find(|&&g| g >= inst.num_goods()) {
        return Err(Error::IndexOutOfRange {
            what: "good",
            index: g,
            size: inst.num_goods(),
        });
    }
    Ok(())
}

/// `mu_agent(parts, subset)` with one defining partition.
pub fn maximin_share(
    inst: &Instance,
    agent: usize,
    parts: usize,
    subset: &GoodSet,
    limits: &OracleLimits,
) -> Result<(Rational, DefiningPartition)> {
    check_query(inst, agent, parts, subset)?;
    if subset.len() > limits.max_goods {
        return Err(Error::OracleLimit {
            size: subset.len(),
            limit: limits.max_goods,
        });
    }
    let row = inst.row(agent);
    // Larger goods first: the bound bites earlier.
    let mut order: Vec<usize> = subset.iter().copied().collect();
    order.sort_by(|&a, &b| row[b].cmp(&row[a]).then(a.cmp(&b)));

    let scale = order
        .iter()
        .fold(BigInt::one(), |acc, &g| acc.lcm(row[g].denom()));
    let scaled: Vec<BigInt> = order
        .iter()
        .map(|&g| row[g].numer() * (&scale / row[g].denom()))
        .collect();
    let total: BigInt = scaled.iter().sum();

    let (floor, labels) = if total.to_i64().is_some() {
        let vals: Vec<i64> = scaled.iter().map(|v| v.to_i64().unwrap()).collect();
        let (f, l) = max_min_partition(&vals, parts);
        (BigInt::from(f), l)
    } else if total.to_i128().is_some() {
        let vals: Vec<i128> = scaled.iter().map(|v| v.to_i128().unwrap()).collect();
        let (f, l) = max_min_partition(&vals, parts);
        (BigInt::from(f), l)
    } else {
        max_min_partition(&scaled, parts)
    };

    let mut blocks = vec![GoodSet::new(); parts];
    for (&g, &b) in order.iter().zip(&labels) {
        blocks[b].insert(g);
    }
    let floor = Rational::new(floor, scale);
    Ok((
        floor.clone(),
        DefiningPartition {
            parts: blocks,
            floor,
        },
    ))
}

/// `v_agent(subset) / parts`, an upper bound on the share.
pub fn share_upper_bound(
    inst: &Instance,
    agent: usize,
    parts: usize,
    subset: &GoodSet,
) -> Result<Rational> {
    check_query(inst, agent, parts, subset)?;
    Ok(inst.bundle_value_unchecked(agent, subset.iter().copied())
        / Rational::from_integer(BigInt::from(parts)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::appendix_a;

    fn set(goods: &[usize]) -> GoodSet {
        goods.iter().copied().collect()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    /// Every assignment of elements to `parts` labelled blocks.
    fn brute_force(values: &[i64], parts: usize) -> i64 {
        let n = values.len() as u32;
        let mut best = i64::MIN;
        for code in 0..(parts as u64).pow(n) {
            let mut sums = vec![0; parts];
            let mut c = code;
            for v in values {
                sums[(c % parts as u64) as usize] += v;
                c /= parts as u64;
            }
            best = best.max(*sums.iter().min().unwrap());
        }
        best
    }

    #[test]
    fn worked_example_shares() {
        let (inst, _, _) = appendix_a();
        let lim = OracleLimits::default();
        let all = inst.all_goods();
        assert_eq!(maximin_share(&inst, 0, 3, &all, &lim).unwrap().0, int(10));
        assert_eq!(maximin_share(&inst, 1, 3, &all, &lim).unwrap().0, int(12));
        assert_eq!(maximin_share(&inst, 2, 3, &all, &lim).unwrap().0, int(10));
        assert_eq!(maximin_share(&inst, 0, 1, &all, &lim).unwrap().0, int(31));
        assert_eq!(maximin_share(&inst, 0, 2, &set(&[0, 3, 2]), &lim).unwrap().0, int(10));
        assert_eq!(maximin_share(&inst, 1, 4, &set(&[0, 1, 2]), &lim).unwrap().0, int(0));
    }

    #[test]
    fn defining_partition_is_consistent() {
        let (inst, _, _) = appendix_a();
        let (mu, part) = maximin_share(&inst, 1, 3, &inst.all_goods(), &OracleLimits::default()).unwrap();
        assert_eq!(part.floor, mu);
        let union: GoodSet = part.parts.iter().flatten().copied().collect();
        assert_eq!(union, inst.all_goods());
        let min = part.parts.iter().map(|p| inst.bundle_value(1, p).unwrap()).min().unwrap();
        assert_eq!(min, mu);
    }

    #[test]
    fn upper_bound() {
        let (inst, _, _) = appendix_a();
        let all = inst.all_goods();
        assert_eq!(share_upper_bound(&inst, 0, 3, &all).unwrap(), Rational::new(31.into(), 3.into()));
        assert_eq!(share_upper_bound(&inst, 0, 1, &all).unwrap(), int(31));
        assert_eq!(share_upper_bound(&inst, 0, 2, &GoodSet::new()).unwrap(), int(0));
        assert!(share_upper_bound(&inst, 0, 0, &all).is_err());
    }

    #[test]
    fn limit_and_parameter_errors() {
        let inst = Instance::from_integers(&[vec![1; 6]]).unwrap();
        let all = inst.all_goods();
        assert!(matches!(
            maximin_share(&inst, 0, 2, &all, &OracleLimits::with_max_goods(5)),
            Err(Error::OracleLimit { size: 6, limit: 5 })
        ));
        assert!(maximin_share(&inst, 0, 0, &all, &OracleLimits::default()).is_err());
        assert!(maximin_share(&inst, 1, 1, &all, &OracleLimits::default()).is_err());
    }

    #[test]
    fn rational_values_are_scaled_exactly() {
        let inst = Instance::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![vec![Rational::new(1.into(), 3.into()), Rational::new(1.into(), 6.into()), Rational::new(1.into(), 6.into())]],
        )
        .unwrap();
        let (mu, _) = maximin_share(&inst, 0, 2, &inst.all_goods(), &OracleLimits::default()).unwrap();
        assert_eq!(mu, Rational::new(1.into(), 3.into()));
    }

    #[test]
    fn engine_matches_labelled_brute_force() {
        let cases: &[(&[i64], usize)] = &[
            (&[7, 5, 4, 3, 3, 1], 2),
            (&[7, 5, 4, 3, 3, 1], 3),
            (&[9, 8, 1, 1, 1], 4),
            (&[0, 0, 0], 2),
            (&[5], 3),
            (&[], 2),
            (&[6, 6, 6, 1, 2], 3),
        ];
        for (vals, k) in cases {
            assert_eq!(max_min_partition(vals, *k).0, brute_force(vals, *k), "{vals:?} k={k}");
        }
    }

    #[test]
    fn first_maximizer_in_rgs_order() {
        // 000 is visited first and already optimal for k = 1.
        assert_eq!(max_min_partition(&[1i64, 2, 3], 1), (6, vec![0, 0, 0]));
        // {3},{2,1}: labels 0,1,1 precede 0,1,0 etc.
        let (v, labels) = max_min_partition(&[3i64, 2, 1], 2);
        assert_eq!(v, 3);
        assert_eq!(labels, vec![0, 1, 1]);
    }

    #[test]
    fn float_scalars_work() {
        let (v, _) = max_min_partition(&[0.5f64, 0.25, 0.25], 2);
        assert_eq!(v, 0.5);
    }
}
