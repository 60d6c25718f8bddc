use std::collections::BTreeSet;

use num_traits::Zero;

use crate::model::Ordering;
use crate::{Error, GoodSet, Instance, Rational, Result, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreprocessResult {
    /// Agents of `l_set` first (in the order they joined), then the rest by
    /// increasing timestamp.
    pub ordering: Ordering,
    pub n_prime: usize,
    pub l_set: Vec<usize>,
    /// Associated good per agent; `None` only when the pool ran dry (`m < n`).
    pub h: Vec<Option<usize>>,
    /// Draft step at which each agent last picked from the pool.
    pub timestamps: Vec<usize>,
}

impl PreprocessResult {
    /// The set of associated goods.
    pub fn associated_goods(&self) -> GoodSet {
        self.h.iter().flatten().copied().collect()
    }

    pub fn in_l(&self, agent: usize) -> bool {
        self.ordering.as_slice()[..self.n_prime].contains(&agent)
    }
}

fn value_of(inst: &Instance, agent: usize, good: Option<usize>) -> Rational {
    good.map_or_else(Rational::zero, |g| inst.value(agent, g).clone())
}

/// Simulates a draft in which an agent may instead take over a good already
/// drafted by someone else when she values it more than `theta` times her
/// own pick; such agents are settled for good and the displaced agent drafts
/// again.
pub fn preprocessing(inst: &Instance, theta: &Value) -> Result<PreprocessResult> {
    if *theta <= Value::from(1) {
        return Err(Error::InvalidParameter(format!(
            "preprocessing threshold must exceed 1, got {theta}"
        )));
    }
    let n = inst.agents();
    let m = inst.num_goods();
    let mut pool = inst.all_goods();
    let mut active: BTreeSet<usize> = (0..n).collect();
    let mut l_set: Vec<usize> = Vec::new();
    let mut h: Vec<Option<usize>> = vec![None; n];
    let mut timestamps = vec![0; n];

    while let Some(&i) = active.iter().next() {
        h[i] = inst.favorite_unchecked(i, pool.iter().copied());
        timestamps[i] = m - pool.len() + 1;
        // Ties go to the smaller good index, as in every draft pick.
        let good_rank = |a: usize| h[a].unwrap_or(usize::MAX);
        let mut best = i;
        let mut best_value = value_of(inst, i, h[i]);
        for r in (0..n).filter(|r| !active.contains(r) && !l_set.contains(r)) {
            let v = value_of(inst, i, h[r]);
            if v > best_value || (v == best_value && good_rank(r) < good_rank(best)) {
                best = r;
                best_value = v;
            }
        }
        let own = theta.clone() * Value::from(value_of(inst, i, h[i]));
        active.remove(&i);
        if own < Value::from(best_value) {
            h[i] = h[best];
            l_set.push(i);
            active.insert(best);
        } else if let Some(g) = h[i] {
            pool.remove(&g);
        }
    }

    let mut rest: Vec<usize> = (0..n).filter(|a| !l_set.contains(a)).collect();
    rest.sort_by_key(|&a| timestamps[a]);
    debug_assert!(
        rest.windows(2)
            .filter(|w| h[w[0]].is_some() && h[w[1]].is_some())
            .all(|w| timestamps[w[0]] < timestamps[w[1]]),
        "agents outside L holding goods have distinct timestamps"
    );
    let n_prime = l_set.len();
    let ordering = Ordering::new(l_set.iter().chain(&rest).copied().collect())?;
    Ok(PreprocessResult {
        ordering,
        n_prime,
        l_set,
        h,
        timestamps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{phi, rational};
    use crate::generators::appendix_a;

    #[test]
    fn worked_example_keeps_everyone_outside_l() {
        let (inst, _, _) = appendix_a();
        let r = preprocessing(&inst, &phi()).unwrap();
        assert_eq!(r.ordering.as_slice(), &[0, 1, 2]);
        assert_eq!(r.n_prime, 0);
        assert_eq!(r.h, vec![Some(0), Some(2), Some(1)]);
        assert_eq!(r.timestamps, vec![1, 2, 3]);
    }

    #[test]
    fn identical_agents_with_one_big_good() {
        let inst = Instance::from_integers(&[vec![10, 1, 1, 1], vec![10, 1, 1, 1]]).unwrap();
        let r = preprocessing(&inst, &phi()).unwrap();
        assert_eq!(r.l_set, vec![1]);
        assert_eq!(r.ordering.as_slice(), &[1, 0]);
        assert_eq!(r.h, vec![Some(1), Some(0)]);
    }

    #[test]
    fn single_agent() {
        let inst = Instance::from_integers(&[vec![1, 3, 2]]).unwrap();
        let r = preprocessing(&inst, &phi()).unwrap();
        assert_eq!(r.ordering.as_slice(), &[0]);
        assert_eq!(r.h, vec![Some(1)]);
    }

    #[test]
    fn fewer_goods_than_agents() {
        let inst = Instance::from_integers(&[vec![1], vec![1], vec![1]]).unwrap();
        let r = preprocessing(&inst, &Value::from(rational(3, 2))).unwrap();
        assert_eq!(r.associated_goods().len(), 1);
        assert_eq!(r.ordering.len(), 3);
    }

    #[test]
    fn rejects_threshold_at_most_one() {
        let inst = Instance::from_integers(&[vec![1]]).unwrap();
        assert!(preprocessing(&inst, &Value::from(1)).is_err());
    }
}
