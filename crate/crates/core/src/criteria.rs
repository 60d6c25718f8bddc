//! Exact worst-case ratios for EF, EF1, EFX, MMS, PMMS and GMMS.
//!
//! Each checker returns the largest `alpha` for which the allocation is
//! `alpha`-fair under the notion, i.e. the minimum over all of the notion's
//! comparisons of `v_i(A_i) / (compared value)`. A comparison whose compared
//! value is zero is vacuous and contributes `+inf`. The witness is the first
//! minimizing comparison in enumeration order.

use num_traits::Zero;

use crate::model::{Criterion, FairRatio, Witness};
use crate::shares::{maximin_share, share_upper_bound, OracleLimits};
use crate::{Error, FairnessReport, GoodSet, Instance, PartialAllocation, Rational, Result};

fn own_values(inst: &Instance, alloc: &PartialAllocation) -> Vec<Rational> {
    (0..inst.agents())
        .map(|i| inst.bundle_value_unchecked(i, alloc.bundle(i).iter().copied()))
        .collect()
}

pub fn ef_ratio(inst: &Instance, alloc: &PartialAllocation) -> Result<FairnessReport> {
    alloc.check_complete(inst)?;
    let own = own_values(inst, alloc);
    let mut report = FairnessReport::vacuous(Criterion::Ef);
    for i in 0..inst.agents() {
        for j in (0..inst.agents()).filter(|&j| j != i) {
            let other = inst.bundle_value_unchecked(i, alloc.bundle(j).iter().copied());
            report.offer(FairRatio::of(&own[i], &other), || Witness {
                agent: i,
                against: vec![j],
                removed_good: None,
            });
        }
    }
    Ok(report)
}

/// Shared body of EF1 and EFX: remove the good `pick` selects from the other
/// bundle and compare.
fn up_to_one_good(
    inst: &Instance,
    alloc: &PartialAllocation,
    criterion: Criterion,
    pick: impl Fn(usize, &GoodSet) -> usize,
) -> Result<FairnessReport> {
    alloc.check_complete(inst)?;
    let own = own_values(inst, alloc);
    let mut report = FairnessReport::vacuous(criterion);
    for i in 0..inst.agents() {
        for j in (0..inst.agents()).filter(|&j| j != i) {
            let bundle = alloc.bundle(j);
            if bundle.is_empty() {
                continue;
            }
            let removed = pick(i, bundle);
            let rest = inst.bundle_value_unchecked(i, bundle.iter().copied()) - inst.value(i, removed);
            report.offer(FairRatio::of(&own[i], &rest), || Witness {
                agent: i,
                against: vec![j],
                removed_good: Some(removed),
            });
        }
    }
    Ok(report)
}

/// Removing agent `i`'s most valued good of the other bundle.
pub fn ef1_ratio(inst: &Instance, alloc: &PartialAllocation) -> Result<FairnessReport> {
    up_to_one_good(inst, alloc, Criterion::Ef1, |i, bundle| {
        inst.favorite_unchecked(i, bundle.iter().copied())
            .expect("nonempty bundle")
    })
}

/// Removing agent `i`'s least valued good of the other bundle (ties to the
/// smallest index); zero-valued goods count, the stronger convention.
pub fn efx_ratio(inst: &Instance, alloc: &PartialAllocation) -> Result<FairnessReport> {
    up_to_one_good(inst, alloc, Criterion::Efx, |i, bundle| {
        let row = inst.row(i);
        let mut worst = *bundle.iter().next().expect("nonempty bundle");
        for &g in bundle {
            if row[g] < row[worst] {
                worst = g;
            }
        }
        worst
    })
}

/// Offers `own / mu_i(parts, goods)` unless the upper bound `v_i(goods)/parts`
/// already shows the comparison cannot lower the current ratio.
#[allow(clippy::too_many_arguments)]
fn offer_share(
    report: &mut FairnessReport,
    inst: &Instance,
    agent: usize,
    own: &Rational,
    parts: usize,
    goods: &GoodSet,
    against: &[usize],
    limits: &OracleLimits,
) -> Result<()> {
    if goods.len() > limits.max_goods {
        return Err(Error::OracleLimit {
            size: goods.len(),
            limit: limits.max_goods,
        });
    }
    let bound = share_upper_bound(inst, agent, parts, goods)?;
    if FairRatio::of(own, &bound) >= report.ratio {
        return Ok(());
    }
    let (mu, _) = maximin_share(inst, agent, parts, goods, limits)?;
    report.offer(FairRatio::of(own, &mu), || Witness {
        agent,
        against: against.to_vec(),
        removed_good: None,
    });
    Ok(())
}

pub fn mms_ratio(
    inst: &Instance,
    alloc: &PartialAllocation,
    limits: &OracleLimits,
) -> Result<FairnessReport> {
    alloc.check_complete(inst)?;
    let own = own_values(inst, alloc);
    let everyone: Vec<usize> = (0..inst.agents()).collect();
    let all = inst.all_goods();
    let mut report = FairnessReport::vacuous(Criterion::Mms);
    for i in 0..inst.agents() {
        offer_share(&mut report, inst, i, &own[i], inst.agents(), &all, &everyone, limits)?;
    }
    Ok(report)
}

pub fn pmms_ratio(
    inst: &Instance,
    alloc: &PartialAllocation,
    limits: &OracleLimits,
) -> Result<FairnessReport> {
    alloc.check_complete(inst)?;
    let own = own_values(inst, alloc);
    let mut report = FairnessReport::vacuous(Criterion::Pmms);
    for i in 0..inst.agents() {
        for j in (0..inst.agents()).filter(|&j| j != i) {
            let union: GoodSet = alloc.bundle(i).union(alloc.bundle(j)).copied().collect();
            offer_share(&mut report, inst, i, &own[i], 2, &union, &[j], limits)?;
        }
    }
    Ok(report)
}

/// Subsets of `0..n` of the given size in lexicographic order.
fn subsets_of_size(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = (size <= n).then(|| (0..size).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = {
            let mut c = out.clone();
            let mut k = size;
            loop {
                if k == 0 {
                    break None;
                }
                k -= 1;
                if c[k] < n - size + k {
                    c[k] += 1;
                    for t in k + 1..size {
                        c[t] = c[t - 1] + 1;
                    }
                    break Some(c);
                }
            }
        };
        current = next;
        Some(out)
    })
}

/// Groups of every size from 2 to n, smaller groups first, each size in
/// lexicographic order. Stops early once a zero ratio is found.
pub fn gmms_ratio(
    inst: &Instance,
    alloc: &PartialAllocation,
    limits: &OracleLimits,
) -> Result<FairnessReport> {
    alloc.check_complete(inst)?;
    let n = inst.agents();
    if n > limits.max_group_agents {
        return Err(Error::GroupLimit {
            agents: n,
            limit: limits.max_group_agents,
        });
    }
    let own = own_values(inst, alloc);
    let mut report = FairnessReport::vacuous(Criterion::Gmms);
    for size in 2..=n {
        for group in subsets_of_size(n, size) {
            let goods: GoodSet = group
                .iter()
                .flat_map(|&j| alloc.bundle(j).iter().copied())
                .collect();
            for &i in &group {
                offer_share(&mut report, inst, i, &own[i], size, &goods, &group, limits)?;
                if report.ratio.finite().is_some_and(Zero::is_zero) {
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

pub fn check(
    inst: &Instance,
    alloc: &PartialAllocation,
    criterion: Criterion,
    limits: &OracleLimits,
) -> Result<FairnessReport> {
    match criterion {
        Criterion::Ef => ef_ratio(inst, alloc),
        Criterion::Ef1 => ef1_ratio(inst, alloc),
        Criterion::Efx => efx_ratio(inst, alloc),
        Criterion::Mms => mms_ratio(inst, alloc, limits),
        Criterion::Pmms => pmms_ratio(inst, alloc, limits),
        Criterion::Gmms => gmms_ratio(inst, alloc, limits),
    }
}

/// Reports for every criterion in [`Criterion::ALL`] order.
pub fn check_all(
    inst: &Instance,
    alloc: &PartialAllocation,
    limits: &OracleLimits,
) -> Result<Vec<FairnessReport>> {
    Criterion::ALL
        .into_iter()
        .map(|c| check(inst, alloc, c, limits))
        .collect()
}
