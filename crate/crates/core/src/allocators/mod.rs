//! The allocation algorithms.
//!
//! Round-robin drafting and envy-cycle elimination are the building blocks;
//! [`draft_and_eliminate`] combines them behind a preprocessing step that
//! fixes the drafting order, and [`allocate_few_goods`] handles instances
//! with at most two more goods than agents exactly.

mod draft;
mod envy_cycle;
mod few_goods;
mod preprocess;
mod round_robin;

pub use draft::{draft_and_eliminate, draft_and_eliminate_detailed, DraftConfig, DraftOutcome};
pub use envy_cycle::{
    envy_cycle_elimination, envy_cycle_elimination_traced, EnvyGraph, EnvyGraphMode,
};
pub use few_goods::{allocate_few_goods, draft_pack_and_eliminate};
pub use preprocess::{preprocessing, PreprocessResult};
pub use round_robin::round_robin;

use crate::{Instance, Rational, Value};

/// Per-agent additive values over item indices. Implemented by [`Instance`]
/// and by the instance extended with the packed virtual goods used for the
/// `m = n + 2` case.
pub trait ItemValues {
    fn agents(&self) -> usize;
    fn item_value(&self, agent: usize, item: usize) -> &Rational;

    fn set_value<'a>(&self, agent: usize, items: impl IntoIterator<Item = &'a usize>) -> Rational {
        items
            .into_iter()
            .fold(Rational::default(), |acc, &g| acc + self.item_value(agent, g))
    }
}

impl ItemValues for Instance {
    fn agents(&self) -> usize {
        Instance::agents(self)
    }

    fn item_value(&self, agent: usize, item: usize) -> &Rational {
        self.value(agent, item)
    }
}

/// Which envy graph envy-cycle elimination consults.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphKind {
    Standard,
    /// Agents outside the preprocessing set keep their post-draft bundle
    /// unless envy exceeds the given factor.
    Adjusted(Value),
}

impl GraphKind {
    /// The variant with factor `phi - 1/2`.
    pub fn adjusted_default() -> Self {
        GraphKind::Adjusted(crate::golden_constants().phi_minus_half)
    }
}

/// Whether a preprocessing threshold is one the approximation guarantees
/// are proven for (`phi` or `3/2`).
pub fn theta_has_guarantee(theta: &Value) -> bool {
    *theta == crate::arith::phi() || *theta == Value::from(crate::arith::rational(3, 2))
}
