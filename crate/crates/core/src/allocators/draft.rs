use crate::allocators::envy_cycle::{envy_cycle_elimination, EnvyGraphMode};
use crate::allocators::preprocess::{preprocessing, PreprocessResult};
use crate::allocators::round_robin::round_robin;
use crate::allocators::GraphKind;
use crate::{Instance, PartialAllocation, Result, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DraftConfig {
    pub theta: Value,
    pub graph: GraphKind,
}

impl Default for DraftConfig {
    fn default() -> Self {
        DraftConfig {
            theta: crate::arith::phi(),
            graph: GraphKind::Standard,
        }
    }
}

/// Intermediate states of one Draft-and-Eliminate run.
#[derive(Clone, Debug)]
pub struct DraftOutcome {
    pub preprocess: PreprocessResult,
    pub after_first_pass: PartialAllocation,
    pub after_second_pass: PartialAllocation,
    pub allocation: PartialAllocation,
}

pub fn draft_and_eliminate(inst: &Instance, config: &DraftConfig) -> Result<PartialAllocation> {
    Ok(draft_and_eliminate_detailed(inst, config)?.allocation)
}

pub fn draft_and_eliminate_detailed(inst: &Instance, config: &DraftConfig) -> Result<DraftOutcome> {
    let n = inst.agents();
    let prep = preprocessing(inst, &config.theta)?;
    let empty = PartialAllocation::empty(n, inst.num_goods());
    let (first, pool) = round_robin(inst, empty, &inst.all_goods(), &prep.ordering, n)?;
    let (second, pool) = round_robin(
        inst,
        first.clone(),
        &pool,
        &prep.ordering.reversed(),
        n - prep.n_prime,
    )?;
    let mode = match &config.graph {
        GraphKind::Standard => EnvyGraphMode::Standard,
        GraphKind::Adjusted(alpha) => EnvyGraphMode::Adjusted {
            alpha: alpha.clone(),
            protected: (0..n)
                .map(|a| (!prep.in_l(a)).then(|| second.bundle(a).clone()))
                .collect(),
        },
    };
    let allocation = envy_cycle_elimination(inst, second.clone(), &pool, &mode);
    debug_assert!(allocation.is_complete());
    Ok(DraftOutcome {
        preprocess: prep,
        after_first_pass: first,
        after_second_pass: second,
        allocation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;
    use crate::criteria::ef1_ratio;
    use crate::generators::appendix_a;
    use crate::GoodSet;

    fn set(goods: &[usize]) -> GoodSet {
        goods.iter().copied().collect()
    }

    #[test]
    fn worked_example() {
        let (inst, _, _) = appendix_a();
        let out = draft_and_eliminate(&inst, &DraftConfig::default()).unwrap();
        assert_eq!(out.bundles(), &[set(&[0]), set(&[2, 3]), set(&[1, 4])]);
    }

    #[test]
    fn big_good_goes_to_l_agent() {
        let inst = Instance::from_integers(&[vec![10, 1, 1, 1], vec![10, 1, 1, 1]]).unwrap();
        let out = draft_and_eliminate_detailed(&inst, &DraftConfig::default()).unwrap();
        assert_eq!(out.after_first_pass.bundles(), &[set(&[1]), set(&[0])]);
        assert_eq!(out.allocation.bundles(), &[set(&[1, 2, 3]), set(&[0])]);
    }

    #[test]
    fn first_pass_hands_out_associated_goods() {
        let inst = Instance::from_integers(&[
            vec![9, 8, 1, 1, 0, 2],
            vec![9, 2, 2, 7, 1, 1],
            vec![3, 3, 3, 3, 3, 3],
        ])
        .unwrap();
        let out = draft_and_eliminate_detailed(&inst, &DraftConfig::default()).unwrap();
        for a in 0..3 {
            let h: GoodSet = out.preprocess.h[a].into_iter().collect();
            assert_eq!(out.after_first_pass.bundle(a), &h);
        }
    }

    #[test]
    fn takeover_ties_follow_good_order() {
        // Agents 2, 3 and 4 all take over goods; several takeovers tie in
        // value and must pick the good the first draft would pick.
        let inst = Instance::from_integers(&[
            vec![17, 0, 19],
            vec![12, 20, 17],
            vec![2, 15, 15],
            vec![14, 12, 20],
            vec![8, 7, 14],
        ])
        .unwrap();
        let config = DraftConfig {
            theta: Value::from(rational(3, 2)),
            graph: GraphKind::Standard,
        };
        let out = draft_and_eliminate_detailed(&inst, &config).unwrap();
        for a in 0..5 {
            let h: GoodSet = out.preprocess.h[a].into_iter().collect();
            assert_eq!(out.after_first_pass.bundle(a), &h);
        }
    }

    #[test]
    fn fewer_goods_than_agents_is_ef1() {
        let inst = Instance::from_integers(&[vec![4, 1], vec![4, 2], vec![1, 1]]).unwrap();
        let config = DraftConfig {
            theta: Value::from(rational(3, 2)),
            graph: GraphKind::Standard,
        };
        let out = draft_and_eliminate(&inst, &config).unwrap();
        assert!(out.bundles().iter().all(|b| b.len() <= 1));
        assert!(ef1_ratio(&inst, &out).unwrap().ratio.meets(&Value::from(1)));
    }

    #[test]
    fn adjusted_graph_runs_to_completion() {
        let (inst, _, _) = appendix_a();
        let config = DraftConfig {
            theta: crate::arith::phi(),
            graph: GraphKind::adjusted_default(),
        };
        assert!(draft_and_eliminate(&inst, &config).unwrap().is_complete());
    }
}
