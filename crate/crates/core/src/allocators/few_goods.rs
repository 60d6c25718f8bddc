use crate::allocators::envy_cycle::{envy_cycle_elimination, EnvyGraphMode};
use crate::allocators::round_robin::round_robin;
use crate::allocators::ItemValues;
use crate::model::Ordering;
use crate::{Error, GoodSet, Instance, PartialAllocation, Rational, Result};

/// The instance plus two virtual goods at indices `m` (p) and `m + 1` (q).
struct Packed<'a> {
    inst: &'a Instance,
    p: Vec<Rational>,
    q: Vec<Rational>,
}

impl ItemValues for Packed<'_> {
    fn agents(&self) -> usize {
        self.inst.agents()
    }

    fn item_value(&self, agent: usize, item: usize) -> &Rational {
        let m = self.inst.num_goods();
        match item {
            g if g < m => self.inst.value(agent, g),
            g if g == m => &self.p[agent],
            _ => &self.q[agent],
        }
    }
}

/// Exact GMMS allocation for `m = n + 2`: draft `n - 1` goods, pack the three
/// leftovers into two virtual goods and settle those with envy-cycle
/// elimination.
pub fn draft_pack_and_eliminate(inst: &Instance) -> Result<PartialAllocation> {
    let n = inst.agents();
    let m = inst.num_goods();
    if m != n + 2 {
        return Err(Error::InvalidInstance(format!(
            "draft-pack-and-eliminate needs m = n + 2 goods, got n = {n}, m = {m}"
        )));
    }
    let empty = PartialAllocation::empty(n, m);
    let (drafted, leftover) = round_robin(inst, empty, &inst.all_goods(), &Ordering::identity(n), n - 1)?;
    debug_assert_eq!(leftover.len(), 3);

    let mut q = Vec::with_capacity(n);
    let mut p = Vec::with_capacity(n);
    for i in 0..n {
        let min = leftover.iter().map(|&g| inst.value(i, g)).min().expect("three leftovers").clone();
        p.push(inst.bundle_value_unchecked(i, leftover.iter().copied()) - &min);
        q.push(min);
    }
    let packed = Packed { inst, p, q };
    let (p_good, q_good) = (m, m + 1);

    let mut bundles: Vec<GoodSet> = drafted.bundles().to_vec();
    bundles[n - 1].insert(p_good);
    let extended = PartialAllocation::from_bundles(bundles, m + 2)?;
    let settled = envy_cycle_elimination(
        &packed,
        extended,
        &GoodSet::from([q_good]),
        &EnvyGraphMode::Standard,
    );

    let owner = |virt: usize| (0..n).find(|&a| settled.bundle(a).contains(&virt)).expect("virtual good placed");
    let (p_owner, q_owner) = (owner(p_good), owner(q_good));
    let mut ranked: Vec<usize> = leftover.iter().copied().collect();
    ranked.sort_by(|&a, &b| inst.value(p_owner, b).cmp(inst.value(p_owner, a)).then(a.cmp(&b)));

    let mut bundles: Vec<GoodSet> = settled
        .bundles()
        .iter()
        .map(|b| b.iter().copied().filter(|&g| g < m).collect())
        .collect();
    bundles[p_owner].extend(&ranked[..2]);
    bundles[q_owner].insert(ranked[2]);
    PartialAllocation::from_bundles(bundles, m)
}

/// Exact GMMS (and EFX) allocation for instances with at most two more
/// goods than agents.
pub fn allocate_few_goods(inst: &Instance) -> Result<PartialAllocation> {
    let n = inst.agents();
    let m = inst.num_goods();
    if m <= n {
        let bundles = (0..n)
            .map(|a| if a < m { GoodSet::from([a]) } else { GoodSet::new() })
            .collect();
        PartialAllocation::from_bundles(bundles, m)
    } else if m == n + 1 {
        let empty = PartialAllocation::empty(n, m);
        let (mut alloc, leftover) = round_robin(inst, empty, &inst.all_goods(), &Ordering::identity(n), n)?;
        for g in leftover {
            alloc.assign(n - 1, g);
        }
        Ok(alloc)
    } else if m == n + 2 {
        draft_pack_and_eliminate(inst)
    } else {
        Err(Error::InvalidInstance(format!(
            "few-goods allocation needs m <= n + 2, got n = {n}, m = {m}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::criteria::{efx_ratio, gmms_ratio};
    use crate::shares::OracleLimits;
    use crate::Value;

    fn set(goods: &[usize]) -> GoodSet {
        goods.iter().copied().collect()
    }

    fn exact_gmms_and_efx(inst: &Instance, alloc: &PartialAllocation) {
        let one = Value::from(1);
        assert!(gmms_ratio(inst, alloc, &OracleLimits::default()).unwrap().ratio.meets(&one));
        assert!(efx_ratio(inst, alloc).unwrap().ratio.meets(&one));
    }

    #[test]
    fn two_agents_four_goods() {
        let inst = Instance::from_integers(&[vec![10, 6, 7, 5], vec![6, 8, 12, 7]]).unwrap();
        let out = draft_pack_and_eliminate(&inst).unwrap();
        assert_eq!(out.bundles(), &[set(&[0, 3]), set(&[1, 2])]);
        exact_gmms_and_efx(&inst, &out);
    }

    #[test]
    fn last_agent_can_keep_both_virtual_goods() {
        // Agent 1 holds p but envies agent 0, so agent 1 is the only source
        // and q joins p.
        let inst = Instance::from_integers(&[vec![20, 1, 1, 1], vec![12, 5, 5, 5]]).unwrap();
        let out = draft_pack_and_eliminate(&inst).unwrap();
        assert_eq!(out.bundles(), &[set(&[0]), set(&[1, 2, 3])]);
        exact_gmms_and_efx(&inst, &out);
    }

    #[test]
    fn fewer_goods_than_agents() {
        let inst = Instance::from_integers(&[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let out = allocate_few_goods(&inst).unwrap();
        assert_eq!(out.bundles(), &[set(&[0]), set(&[1]), set(&[])]);
        exact_gmms_and_efx(&inst, &out);
    }

    #[test]
    fn one_extra_good() {
        let inst = Instance::from_integers(&[vec![10, 6, 7], vec![6, 8, 12]]).unwrap();
        let out = allocate_few_goods(&inst).unwrap();
        assert_eq!(out.bundles(), &[set(&[0]), set(&[1, 2])]);
        exact_gmms_and_efx(&inst, &out);
    }

    #[test]
    fn symmetric_instance() {
        let inst = Instance::from_integers(&[vec![1; 5], vec![1; 5], vec![1; 5]]).unwrap();
        exact_gmms_and_efx(&inst, &allocate_few_goods(&inst).unwrap());
    }

    #[test]
    fn too_many_goods() {
        let inst = Instance::from_integers(&[vec![1; 4]]).unwrap();
        assert!(allocate_few_goods(&inst).is_err());
        assert!(draft_pack_and_eliminate(&Instance::from_integers(&[vec![1; 2]]).unwrap()).is_err());
    }
}
