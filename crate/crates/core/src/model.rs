//! Instances, allocations, fairness reports and their JSON forms.
//!
//! Tie-breaking is fixed everywhere: among equally valued goods the one with
//! the smallest index wins, among agents the smallest index wins. Good labels
//! are display names only; their input order defines the index order.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, GoodSet, Rational, Result, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    goods: Vec<String>,
    valuations: Vec<Vec<Rational>>,
}

impl Instance {
    pub fn new(goods: Vec<String>, valuations: Vec<Vec<Rational>>) -> Result<Self> {
        if valuations.is_empty() {
            return Err(Error::InvalidInstance("at least one agent is required".into()));
        }
        let mut seen = HashMap::new();
        for (idx, label) in goods.iter().enumerate() {
            if let Some(prev) = seen.insert(label.as_str(), idx) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate good label {label:?} at positions {prev} and {idx}"
                )));
            }
        }
        for (agent, row) in valuations.iter().enumerate() {
            if row.len() != goods.len() {
                return Err(Error::InvalidInstance(format!(
                    "agent {agent} has {} values for {} goods",
                    row.len(),
                    goods.len()
                )));
            }
            if let Some(g) = row.iter().position(|v| v.is_negative()) {
                return Err(Error::InvalidInstance(format!(
                    "agent {agent} has negative value for good {:?}",
                    goods[g]
                )));
            }
        }
        Ok(Instance { goods, valuations })
    }

    /// Instance with goods labelled `g1..gm` from an integer matrix.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let m = rows.first().map_or(0, Vec::len);
        let goods = (1..=m).map(|i| format!("g{i}")).collect();
        let valuations = rows
            .iter()
            .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
            .collect();
        Instance::new(goods, valuations)
    }

    pub fn agents(&self) -> usize {
        self.valuations.len()
    }

    pub fn num_goods(&self) -> usize {
        self.goods.len()
    }

    pub fn goods(&self) -> &[String] {
        &self.goods
    }

    pub fn label(&self, good: usize) -> &str {
        &self.goods[good]
    }

    pub fn good_index(&self, label: &str) -> Option<usize> {
        self.goods.iter().position(|g| g == label)
    }

    pub fn all_goods(&self) -> GoodSet {
        (0..self.num_goods()).collect()
    }

    pub fn row(&self, agent: usize) -> &[Rational] {
        &self.valuations[agent]
    }

    /// Value of a single good; panics on out-of-range indices.
    pub fn value(&self, agent: usize, good: usize) -> &Rational {
        &self.valuations[agent][good]
    }

    fn check_agent(&self, agent: usize) -> Result<()> {
        if agent >= self.agents() {
            return Err(Error::IndexOutOfRange {
                what: "agent",
                index: agent,
                size: self.agents(),
            });
        }
        Ok(())
    }

    fn check_goods<'a>(&self, goods: impl IntoIterator<Item = &'a usize>) -> Result<()> {
        for &g in goods {
            if g >= self.num_goods() {
                return Err(Error::IndexOutOfRange {
                    what: "good",
                    index: g,
                    size: self.num_goods(),
                });
            }
        }
        Ok(())
    }

    /// Additive value `v_agent(S)`.
    pub fn bundle_value(&self, agent: usize, set: &GoodSet) -> Result<Rational> {
        self.check_agent(agent)?;
        self.check_goods(set)?;
        Ok(self.bundle_value_unchecked(agent, set.iter().copied()))
    }

    pub(crate) fn bundle_value_unchecked(
        &self,
        agent: usize,
        goods: impl IntoIterator<Item = usize>,
    ) -> Rational {
        let row = &self.valuations[agent];
        goods
            .into_iter()
            .fold(Rational::zero(), |acc, g| acc + &row[g])
    }

    /// The agent's most valued good in `set`; ties go to the smallest index.
    pub fn favorite_good(&self, agent: usize, set: &GoodSet) -> Result<usize> {
        self.check_agent(agent)?;
        self.check_goods(set)?;
        self.favorite_unchecked(agent, set.iter().copied())
            .ok_or(Error::EmptySet)
    }

    pub(crate) fn favorite_unchecked(
        &self,
        agent: usize,
        goods: impl IntoIterator<Item = usize>,
    ) -> Option<usize> {
        let row = &self.valuations[agent];
        let mut best: Option<usize> = None;
        for g in goods {
            match best {
                Some(b) if row[g] < row[b] || (row[g] == row[b] && g > b) => {}
                _ => best = Some(g),
            }
        }
        best
    }

    /// Copy of the instance with one agent's row multiplied by `factor`.
    pub fn with_scaled_row(&self, agent: usize, factor: &Rational) -> Result<Self> {
        self.check_agent(agent)?;
        let mut valuations = self.valuations.clone();
        for v in &mut valuations[agent] {
            *v = &*v * factor;
        }
        Instance::new(self.goods.clone(), valuations)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&InstanceFile::try_from(self)?)?)
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceFile::try_from(self)?)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.try_into()
    }

    /// SHA-256 of the compact canonical JSON, hex encoded.
    pub fn content_hash(&self) -> Result<String> {
        let canonical = self.to_json()?;
        Ok(hex::encode(Sha256::digest(canonical.as_bytes())))
    }
}

/// Valuation entry on the wire: an integer or a `[num, den]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonRational {
    Int(i64),
    Frac([i64; 2]),
}

impl JsonRational {
    fn to_rational(&self) -> Result<Rational> {
        match *self {
            JsonRational::Int(v) => Ok(Rational::from_integer(v.into())),
            JsonRational::Frac([_, 0]) => {
                Err(Error::InvalidInstance("zero denominator in valuation".into()))
            }
            JsonRational::Frac([n, d]) => Ok(Rational::new(n.into(), d.into())),
        }
    }

    fn from_rational(r: &Rational) -> Result<Self> {
        let fit = |b: &BigInt| {
            b.to_i64()
                .ok_or_else(|| Error::InvalidInstance(format!("value {r} does not fit in i64")))
        };
        if r.is_integer() {
            Ok(JsonRational::Int(fit(r.numer())?))
        } else {
            Ok(JsonRational::Frac([fit(r.numer())?, fit(r.denom())?]))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceFile {
    pub goods: Vec<String>,
    pub valuations: Vec<Vec<JsonRational>>,
}

impl TryFrom<&Instance> for InstanceFile {
    type Error = Error;
    fn try_from(inst: &Instance) -> Result<Self> {
        let valuations = inst
            .valuations
            .iter()
            .map(|row| row.iter().map(JsonRational::from_rational).collect())
            .collect::<Result<_>>()?;
        Ok(InstanceFile {
            goods: inst.goods.clone(),
            valuations,
        })
    }
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;
    fn try_from(file: InstanceFile) -> Result<Self> {
        let valuations = file
            .valuations
            .iter()
            .map(|row| row.iter().map(JsonRational::to_rational).collect())
            .collect::<Result<_>>()?;
        Instance::new(file.goods, valuations)
    }
}

/// Disjoint bundles per agent plus the goods nobody holds yet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartialAllocation {
    bundles: Vec<GoodSet>,
    unallocated: GoodSet,
}

impl PartialAllocation {
    /// Nothing allocated: every good of `0..num_goods` is free.
    pub fn empty(agents: usize, num_goods: usize) -> Self {
        PartialAllocation {
            bundles: vec![GoodSet::new(); agents],
            unallocated: (0..num_goods).collect(),
        }
    }

    /// Builds an allocation from bundles; goods missing from every bundle
    /// become unallocated.
    pub fn from_bundles(bundles: Vec<GoodSet>, num_goods: usize) -> Result<Self> {
        let mut unallocated: GoodSet = (0..num_goods).collect();
        for (agent, bundle) in bundles.iter().enumerate() {
            for &g in bundle {
                if g >= num_goods {
                    return Err(Error::IndexOutOfRange {
                        what: "good",
                        index: g,
                        size: num_goods,
                    });
                }
                if !unallocated.remove(&g) {
                    return Err(Error::InvalidAllocation(format!(
                        "good {g} appears twice (again in bundle of agent {agent})"
                    )));
                }
            }
        }
        Ok(PartialAllocation {
            bundles,
            unallocated,
        })
    }

    /// Convenience for tests and fixtures: bundles as index lists.
    pub fn from_lists(lists: &[&[usize]], num_goods: usize) -> Result<Self> {
        Self::from_bundles(
            lists.iter().map(|l| l.iter().copied().collect()).collect(),
            num_goods,
        )
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundles(&self) -> &[GoodSet] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &GoodSet {
        &self.bundles[agent]
    }

    pub fn unallocated(&self) -> &GoodSet {
        &self.unallocated
    }

    pub fn is_complete(&self) -> bool {
        self.unallocated.is_empty()
    }

    pub fn num_goods(&self) -> usize {
        self.unallocated.len() + self.bundles.iter().map(GoodSet::len).sum::<usize>()
    }

    /// Moves a free good into an agent's bundle.
    pub fn assign(&mut self, agent: usize, good: usize) {
        let was_free = self.unallocated.remove(&good);
        debug_assert!(was_free, "good {good} was not free");
        self.bundles[agent].insert(good);
    }

    /// Shifts bundles along a cycle: `cycle[k]` receives the bundle of
    /// `cycle[k+1]`, the last agent receives the first agent's bundle.
    pub fn rotate(&mut self, cycle: &[usize]) {
        if cycle.len() < 2 {
            return;
        }
        let first = std::mem::take(&mut self.bundles[cycle[0]]);
        for w in cycle.windows(2) {
            self.bundles[w[0]] = std::mem::take(&mut self.bundles[w[1]]);
        }
        self.bundles[cycle[cycle.len() - 1]] = first;
    }

    /// Bundles pairwise disjoint and, with the free goods, covering
    /// `0..num_goods` exactly once.
    pub fn is_valid(&self, num_goods: usize) -> bool {
        let mut seen = vec![false; num_goods];
        for g in self.bundles.iter().flatten().chain(self.unallocated.iter()) {
            if *g >= num_goods || seen[*g] {
                return false;
            }
            seen[*g] = true;
        }
        seen.into_iter().all(|s| s)
    }

    pub(crate) fn check_against(&self, inst: &Instance) -> Result<()> {
        if self.agents() != inst.agents() {
            return Err(Error::InvalidAllocation(format!(
                "{} bundles for {} agents",
                self.agents(),
                inst.agents()
            )));
        }
        if !self.is_valid(inst.num_goods()) {
            return Err(Error::InvalidAllocation(
                "bundles do not partition the goods".into(),
            ));
        }
        Ok(())
    }

    pub(crate) fn check_complete(&self, inst: &Instance) -> Result<()> {
        self.check_against(inst)?;
        if !self.is_complete() {
            return Err(Error::InvalidAllocation(format!(
                "{} goods left unallocated",
                self.unallocated.len()
            )));
        }
        Ok(())
    }

    pub fn to_file(&self, inst: &Instance) -> AllocationFile {
        AllocationFile {
            provenance: None,
            bundles: self
                .bundles
                .iter()
                .map(|b| b.iter().map(|&g| inst.label(g).to_string()).collect())
                .collect(),
        }
    }

    pub fn to_json(&self, inst: &Instance) -> Result<String> {
        Ok(serde_json::to_string(&self.to_file(inst))?)
    }

    pub fn from_file(file: &AllocationFile, inst: &Instance) -> Result<Self> {
        let bundles = file
            .bundles
            .iter()
            .map(|labels| {
                labels
                    .iter()
                    .map(|l| {
                        inst.good_index(l).ok_or_else(|| {
                            Error::InvalidAllocation(format!("unknown good label {l:?}"))
                        })
                    })
                    .collect::<Result<GoodSet>>()
                    .and_then(|set| {
                        if set.len() == labels.len() {
                            Ok(set)
                        } else {
                            Err(Error::InvalidAllocation("a good is listed twice in one bundle".into()))
                        }
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let alloc = Self::from_bundles(bundles, inst.num_goods())?;
        alloc.check_against(inst)?;
        Ok(alloc)
    }

    pub fn from_json(text: &str, inst: &Instance) -> Result<Self> {
        let file: AllocationFile = serde_json::from_str(text)?;
        Self::from_file(&file, inst)
    }
}

/// Who produced an allocation, with which knobs, for which instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub parameters: std::collections::BTreeMap<String, String>,
    pub instance_hash: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllocationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub bundles: Vec<Vec<String>>,
}

/// A permutation of agent indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordering(Vec<usize>);

impl Ordering {
    pub fn new(sequence: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; sequence.len()];
        for &a in &sequence {
            if a >= sequence.len() || seen[a] {
                return Err(Error::InvalidParameter(format!(
                    "ordering {sequence:?} is not a permutation"
                )));
            }
            seen[a] = true;
        }
        Ok(Ordering(sequence))
    }

    pub fn identity(agents: usize) -> Self {
        Ordering((0..agents).collect())
    }

    pub fn reversed(&self) -> Self {
        Ordering(self.0.iter().rev().copied().collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of each agent in the sequence.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.0.len()];
        for (k, &a) in self.0.iter().enumerate() {
            pos[a] = k;
        }
        pos
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "EF")]
    Ef,
    #[serde(rename = "EF1")]
    Ef1,
    #[serde(rename = "EFX")]
    Efx,
    #[serde(rename = "MMS")]
    Mms,
    #[serde(rename = "PMMS")]
    Pmms,
    #[serde(rename = "GMMS")]
    Gmms,
}

impl Criterion {
    pub const ALL: [Criterion; 6] = [
        Criterion::Ef,
        Criterion::Ef1,
        Criterion::Efx,
        Criterion::Mms,
        Criterion::Pmms,
        Criterion::Gmms,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Ef => "EF",
            Criterion::Ef1 => "EF1",
            Criterion::Efx => "EFX",
            Criterion::Mms => "MMS",
            Criterion::Pmms => "PMMS",
            Criterion::Gmms => "GMMS",
        }
    }

    /// Whether checking needs the exponential share oracle.
    pub fn needs_oracle(self) -> bool {
        matches!(self, Criterion::Mms | Criterion::Pmms | Criterion::Gmms)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown criterion {s:?}")))
    }
}

/// A fairness ratio: exact, or unbounded when every comparison is vacuous.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FairRatio {
    Finite(Value),
    Infinite,
}

impl FairRatio {
    /// Ratio `num / den` with zero denominators mapping to +inf.
    pub fn of(num: &Rational, den: &Rational) -> Self {
        if den.is_zero() {
            FairRatio::Infinite
        } else {
            FairRatio::Finite(Value::from(num / den))
        }
    }

    /// The allocation is `bound`-fair for this criterion.
    pub fn meets(&self, bound: &Value) -> bool {
        match self {
            FairRatio::Infinite => true,
            FairRatio::Finite(v) => v >= bound,
        }
    }

    pub fn finite(&self) -> Option<&Value> {
        match self {
            FairRatio::Finite(v) => Some(v),
            FairRatio::Infinite => None,
        }
    }
}

impl fmt::Display for FairRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FairRatio::Finite(v) => write!(f, "{v}"),
            FairRatio::Infinite => f.write_str("inf"),
        }
    }
}

/// Comparison attaining the reported ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub agent: usize,
    /// The other agent (EF, EF1, EFX, PMMS), the whole agent set (MMS) or the
    /// group (GMMS).
    pub against: Vec<usize>,
    pub removed_good: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairnessReport {
    pub criterion: Criterion,
    pub ratio: FairRatio,
    pub witness: Option<Witness>,
}

impl FairnessReport {
    pub(crate) fn vacuous(criterion: Criterion) -> Self {
        FairnessReport {
            criterion,
            ratio: FairRatio::Infinite,
            witness: None,
        }
    }

    /// Keeps the first strictly smaller ratio seen, so the witness is the
    /// first minimizer in enumeration order.
    pub(crate) fn offer(&mut self, ratio: FairRatio, witness: impl FnOnce() -> Witness) {
        if ratio < self.ratio {
            self.ratio = ratio;
            self.witness = Some(witness());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::appendix_a;

    fn set(goods: &[usize]) -> GoodSet {
        goods.iter().copied().collect()
    }

    #[test]
    fn bundle_values_on_worked_example() {
        let (inst, _, _) = appendix_a();
        assert_eq!(inst.bundle_value(0, &set(&[0, 3])).unwrap(), Rational::from_integer(15.into()));
        assert_eq!(inst.bundle_value(1, &set(&[])).unwrap(), Rational::zero());
        assert_eq!(inst.bundle_value(2, &set(&[1, 4])).unwrap(), Rational::from_integer(18.into()));
        assert!(matches!(
            inst.bundle_value(3, &set(&[0])),
            Err(Error::IndexOutOfRange { what: "agent", .. })
        ));
        assert!(inst.bundle_value(0, &set(&[5])).is_err());
    }

    #[test]
    fn favorite_goods() {
        let (inst, _, _) = appendix_a();
        assert_eq!(inst.favorite_good(1, &inst.all_goods()).unwrap(), 2);
        assert_eq!(inst.favorite_good(0, &set(&[1, 2, 3, 4])).unwrap(), 2);
        assert!(matches!(inst.favorite_good(0, &set(&[])), Err(Error::EmptySet)));
        let tie = Instance::from_integers(&[vec![5, 5, 1]]).unwrap();
        assert_eq!(tie.favorite_good(0, &tie.all_goods()).unwrap(), 0);
    }

    #[test]
    fn instance_validation() {
        assert!(Instance::from_integers(&[vec![1, -1]]).is_err());
        assert!(Instance::new(vec!["a".into(), "a".into()], vec![vec![Rational::zero(), Rational::zero()]]).is_err());
        assert!(Instance::new(vec!["a".into()], vec![vec![]]).is_err());
        assert!(Instance::new(vec![], vec![]).is_err());
        assert!(Instance::new(vec![], vec![vec![]]).is_ok());
    }

    #[test]
    fn instance_json_forms() {
        let text = r#"{"goods":["a","b"],"valuations":[[3,[1,2]],[0,[4,6]]]}"#;
        let inst = Instance::from_json(text).unwrap();
        assert_eq!(inst.value(0, 1), &Rational::new(1.into(), 2.into()));
        assert_eq!(inst.to_json().unwrap(), r#"{"goods":["a","b"],"valuations":[[3,[1,2]],[0,[2,3]]]}"#);
        assert!(Instance::from_json(r#"{"goods":["a"],"valuations":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn allocation_json_uses_labels() {
        let (inst, a, _) = appendix_a();
        let text = a.to_json(&inst).unwrap();
        assert_eq!(text, r#"{"bundles":[["a","d"],["c"],["b","e"]]}"#);
        assert_eq!(PartialAllocation::from_json(&text, &inst).unwrap(), a);
        assert!(PartialAllocation::from_json(r#"{"bundles":[["a","a"],[],[]]}"#, &inst).is_err());
        assert!(PartialAllocation::from_json(r#"{"bundles":[["z"],[],[]]}"#, &inst).is_err());
        assert!(PartialAllocation::from_json(r#"{"bundles":[["a"]]}"#, &inst).is_err());
    }

    #[test]
    fn rotate_shifts_bundles() {
        let mut p = PartialAllocation::from_lists(&[&[0], &[1], &[2]], 3).unwrap();
        p.rotate(&[0, 2]);
        assert_eq!(p.bundles(), &[set(&[2]), set(&[1]), set(&[0])]);
        assert!(p.is_valid(3));
    }

    #[test]
    fn orderings() {
        assert!(Ordering::new(vec![0, 0]).is_err());
        assert!(Ordering::new(vec![1, 2]).is_err());
        let o = Ordering::new(vec![2, 0, 1]).unwrap();
        assert_eq!(o.reversed().as_slice(), &[1, 0, 2]);
        assert_eq!(o.positions(), vec![1, 2, 0]);
    }

    #[test]
    fn ratio_convention() {
        let zero = Rational::zero();
        let one = Rational::from_integer(1.into());
        assert_eq!(FairRatio::of(&zero, &zero), FairRatio::Infinite);
        assert_eq!(FairRatio::of(&one, &zero), FairRatio::Infinite);
        assert!(FairRatio::Finite(Value::from(5)) < FairRatio::Infinite);
        assert!(FairRatio::Infinite.meets(&Value::from(1000)));
    }
}
