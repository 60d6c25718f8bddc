use crate::model::Ordering;
use crate::{Error, GoodSet, Instance, PartialAllocation, Result};

/// Agents pick in `ordering`, cycling, each taking her favorite good from the
/// shrinking pool `available`, for at most `steps` picks.
///
/// Returns the extended allocation and the goods still in the pool.
pub fn round_robin(
    inst: &Instance,
    partial: PartialAllocation,
    available: &GoodSet,
    ordering: &Ordering,
    steps: usize,
) -> Result<(PartialAllocation, GoodSet)> {
    if ordering.len() != inst.agents() || partial.agents() != inst.agents() {
        return Err(Error::InvalidParameter(format!(
            "ordering of {} agents for an instance with {}",
            ordering.len(),
            inst.agents()
        )));
    }
    if let Some(g) = available.iter().find(|g| !partial.unallocated().contains(g)) {
        return Err(Error::InvalidAllocation(format!(
            "good {g} offered to the draft is already allocated"
        )));
    }
    let mut alloc = partial;
    let mut pool = available.clone();
    for &agent in ordering.as_slice().iter().cycle().take(steps) {
        let Some(g) = inst.favorite_unchecked(agent, pool.iter().copied()) else {
            break;
        };
        pool.remove(&g);
        alloc.assign(agent, g);
    }
    Ok((alloc, pool))
}
