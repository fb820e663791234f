//! Labels, the represented set family A_P, reductions built from
//! homomorphisms and homomorphisms recovered from reductions, all on the
//! finite subset lattice 𝒫(N) with N = |P|.
//!
//! The point ω (and the map value ω) is modeled by [`Value::Top`]. It is
//! never a member of a family, contains every finite set, and is contained
//! only in itself.

use std::collections::{BTreeSet, HashSet};

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::classes::{is_embeddable, one_neighbors};
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::hom::{verify_hom, Homomorphism, Mode};
use crate::poset::ColoredPoset;

/// Largest universe for which the whole lattice 𝒫(N) is tabulated.
pub const MAX_LATTICE_UNIVERSE: usize = 20;

fn lattice_guard(n: usize) -> Result<()> {
    if n > MAX_LATTICE_UNIVERSE {
        Err(Error::UniverseTooLarge(n, MAX_LATTICE_UNIVERSE))
    } else {
        Ok(())
    }
}

fn mask_set(mask: u32) -> FinSet {
    FinSet::from_mask(u64::from(mask))
}

/// A finite set or the point ω.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Set(FinSet),
    Top,
}

impl Value {
    pub fn is_subset(&self, other: &Value) -> bool {
        match (self, other) {
            (_, Value::Top) => true,
            (Value::Top, Value::Set(_)) => false,
            (Value::Set(a), Value::Set(b)) => a.is_subset(b),
        }
    }

    pub fn as_set(&self) -> Option<&FinSet> {
        match self {
            Value::Set(s) => Some(s),
            Value::Top => None,
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Value::Set(s) => s.serialize(serializer),
            Value::Top => serializer.serialize_str("TOP"),
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Set(Vec<usize>),
            Word(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Set(v) => Ok(Value::Set(v.into_iter().collect())),
            Raw::Word(w) if w == "TOP" => Ok(Value::Top),
            Raw::Word(w) => Err(de::Error::custom(format!(
                "expected a set or \"TOP\", got \"{w}\""
            ))),
        }
    }
}

/// Labels of a poset with a bottom: the bottom gets ∅, every other element
/// the set of its predecessors (itself and the bottom included).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Labeling {
    pub table: Vec<FinSet>,
}

impl Labeling {
    pub fn get(&self, p: usize) -> &FinSet {
        &self.table[p]
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn is_injective(&self) -> bool {
        self.table.iter().collect::<HashSet<_>>().len() == self.table.len()
    }

    /// `p ≤ q` implies `l(p) ⊆ l(q)` for every pair.
    pub fn is_monotone(&self, poset: &ColoredPoset) -> bool {
        (0..poset.len()).all(|p| {
            poset
                .up_set(p)
                .iter()
                .all(|q| self.table[p].is_subset(&self.table[q]))
        })
    }
}

pub fn label(p: &ColoredPoset) -> Result<Labeling> {
    let bottom = p.bottom().ok_or(Error::NoBottom)?;
    let table = (0..p.len())
        .map(|i| {
            if i == bottom {
                FinSet::new()
            } else {
                p.down_set(i).clone()
            }
        })
        .collect();
    Ok(Labeling { table })
}

/// A finite family of finite sets over a declared universe `{0..U-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFamily {
    universe: usize,
    members: BTreeSet<FinSet>,
    /// Maximal members. A set is in the downward closure iff it lies below
    /// one of them, so they stand in for the closure without expanding it.
    closure_cache: Option<Vec<FinSet>>,
}

#[derive(Serialize, Deserialize)]
struct SetFamilyJson {
    universe: usize,
    members: Vec<Vec<usize>>,
}

impl SetFamily {
    pub fn new(universe: usize, members: impl IntoIterator<Item = FinSet>) -> Result<Self> {
        let members: BTreeSet<FinSet> = members.into_iter().collect();
        if let Some(bad) = members
            .iter()
            .find(|m| m.max_element().is_some_and(|x| x >= universe))
        {
            return Err(Error::Invalid(format!(
                "member {bad:?} is not within universe {universe}"
            )));
        }
        Ok(SetFamily {
            universe,
            members,
            closure_cache: None,
        })
    }

    /// Populates the closure cache.
    pub fn with_closure_cache(mut self) -> Self {
        let maximal = self
            .members
            .iter()
            .filter(|m| !self.members.iter().any(|o| m.is_proper_subset(o)))
            .cloned()
            .collect();
        self.closure_cache = Some(maximal);
        self
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn members(&self) -> &BTreeSet<FinSet> {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &FinSet) -> bool {
        self.members.contains(f)
    }

    /// Membership of a lattice point; ω is never a member.
    pub fn contains_value(&self, v: &Value) -> bool {
        v.as_set().is_some_and(|s| self.contains(s))
    }

    /// Whether `f` lies below some member.
    pub fn in_closure(&self, f: &FinSet) -> bool {
        match &self.closure_cache {
            Some(maximal) => maximal.iter().any(|m| f.is_subset(m)),
            None => self.members.iter().any(|m| f.is_subset(m)),
        }
    }

    /// Every set below some member, in lattice order.
    pub fn closure(&self) -> Result<Vec<FinSet>> {
        lattice_guard(self.universe)?;
        Ok((0u32..1 << self.universe)
            .map(mask_set)
            .filter(|f| self.in_closure(f))
            .collect())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SetFamilyJson {
            universe: self.universe,
            members: self.members.iter().map(FinSet::to_vec).collect(),
        })
        .expect("set families serialize")
    }

    pub fn from_json(v: serde_json::Value) -> Result<Self> {
        let raw: SetFamilyJson = serde_json::from_value(v)?;
        Ok(
            SetFamily::new(raw.universe, raw.members.into_iter().map(FinSet::from_iter))?
                .with_closure_cache(),
        )
    }
}

/// The family of labels of color-1 elements of an embeddable poset.
pub fn build_a(p: &ColoredPoset) -> Result<SetFamily> {
    let report = is_embeddable(p);
    if !report.holds {
        return Err(Error::NotEmbeddable(
            report.failed_condition.unwrap_or_default(),
        ));
    }
    let lab = label(p)?;
    let members = (0..p.len())
        .filter(|&i| p.color(i) == 1)
        .map(|i| lab.get(i).clone());
    Ok(SetFamily::new(p.len(), members)?.with_closure_cache())
}

/// Whether `f` lies below some label.
fn in_label_closure(lab: &Labeling, f: &FinSet) -> bool {
    lab.table.iter().any(|l| f.is_subset(l))
}

/// The supremum `s_F` of the elements whose labels lie inside `f`.
pub fn sup_label(p: &ColoredPoset, lab: &Labeling, f: &FinSet) -> Result<usize> {
    if !in_label_closure(lab, f) {
        return Err(Error::NotInClosure(f.to_vec()));
    }
    let below: FinSet = (0..p.len()).filter(|&i| lab.get(i).is_subset(f)).collect();
    let s = p.supremum(&below)?.ok_or_else(|| {
        Error::Supremum(format!("elements labelled inside {f:?} have no supremum"))
    })?;
    Ok(s)
}

/// A total inclusion-monotone table on 𝒫(N), indexed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    domain_universe: usize,
    table: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    #[serde(rename = "in")]
    input: Vec<usize>,
    out: Value,
}

#[derive(Serialize, Deserialize)]
struct MonotoneMapJson {
    universe: usize,
    entries: Vec<EntryJson>,
}

impl MonotoneMap {
    /// Tabulates `f` over 𝒫(N). Monotonicity is not checked here.
    pub fn from_fn(n: usize, mut f: impl FnMut(&FinSet) -> Result<Value>) -> Result<Self> {
        lattice_guard(n)?;
        let table = (0u32..1 << n)
            .map(|m| f(&mask_set(m)))
            .collect::<Result<_>>()?;
        Ok(MonotoneMap {
            domain_universe: n,
            table,
        })
    }

    pub fn constant(n: usize, v: Value) -> Result<Self> {
        MonotoneMap::from_fn(n, |_| Ok(v.clone()))
    }

    pub fn domain_universe(&self) -> usize {
        self.domain_universe
    }

    pub fn get_mask(&self, mask: u32) -> &Value {
        &self.table[mask as usize]
    }

    /// The value at `f`, if `f` lies in the domain lattice.
    pub fn get(&self, f: &FinSet) -> Option<&Value> {
        let m = f.to_mask()?;
        self.table.get(usize::try_from(m).ok()?)
    }

    pub fn entries(&self) -> impl Iterator<Item = (FinSet, &Value)> {
        self.table
            .iter()
            .enumerate()
            .map(|(m, v)| (mask_set(m as u32), v))
    }

    /// First pair `F ⊂ F ∪ {i}` whose values are not included.
    pub fn monotonicity_violation(&self) -> Option<(FinSet, FinSet)> {
        for m in 0u32..self.table.len() as u32 {
            for i in 0..self.domain_universe {
                let up = m | 1 << i;
                if up != m && !self.get_mask(m).is_subset(self.get_mask(up)) {
                    return Some((mask_set(m), mask_set(up)));
                }
            }
        }
        None
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .entries()
            .map(|(f, v)| EntryJson {
                input: f.to_vec(),
                out: v.clone(),
            })
            .collect();
        serde_json::to_value(MonotoneMapJson {
            universe: self.domain_universe,
            entries,
        })
        .expect("maps serialize")
    }

    /// Parses a map and checks totality and monotonicity.
    pub fn from_json(v: serde_json::Value) -> Result<Self> {
        let raw: MonotoneMapJson = serde_json::from_value(v)?;
        lattice_guard(raw.universe)?;
        let mut table: Vec<Option<Value>> = vec![None; 1 << raw.universe];
        for e in raw.entries {
            let f: FinSet = e.input.into_iter().collect();
            let m = f
                .to_mask()
                .filter(|&m| (m as usize) < table.len())
                .ok_or_else(|| Error::Invalid(format!("entry {f:?} is outside the domain")))?;
            if table[m as usize].replace(e.out).is_some() {
                return Err(Error::Invalid(format!("duplicate entry for {f:?}")));
            }
        }
        let table = table
            .into_iter()
            .enumerate()
            .map(|(m, v)| {
                v.ok_or_else(|| Error::Invalid(format!("no entry for {:?}", mask_set(m as u32))))
            })
            .collect::<Result<_>>()?;
        let map = MonotoneMap {
            domain_universe: raw.universe,
            table,
        };
        if let Some((lower, upper)) = map.monotonicity_violation() {
            return Err(Error::Monotonicity {
                lower: lower.to_vec(),
                upper: upper.to_vec(),
            });
        }
        Ok(map)
    }
}

/// The reduction `f_φ` induced by a homomorphism `φ: P → Q`.
pub fn build_reduction(
    p: &ColoredPoset,
    q: &ColoredPoset,
    phi: &Homomorphism,
) -> Result<MonotoneMap> {
    let check = verify_hom(
        p,
        q,
        &Homomorphism {
            mode: Mode::Plain,
            map: phi.map.clone(),
        },
    );
    if !check.ok {
        return Err(Error::NotReduction(format!(
            "input map is not a homomorphism: {:?}",
            check.violations
        )));
    }
    let report = is_embeddable(p);
    if !report.holds {
        return Err(Error::NotEmbeddable(
            report.failed_condition.unwrap_or_default(),
        ));
    }
    let lp = label(p)?;
    let lq = label(q)?;
    let image = |s: usize| Value::Set(lq.get(phi.map[s]).clone());
    let f = MonotoneMap::from_fn(p.len(), |f| {
        if !in_label_closure(&lp, f) {
            return Ok(Value::Top);
        }
        let s = sup_label(p, &lp, f)?;
        if p.color(s) == 0 || f == lp.get(s) {
            return Ok(image(s));
        }
        let (minus, plus) = one_neighbors(p, s)?;
        if f.is_subset(lp.get(s)) {
            Ok(image(minus))
        } else {
            Ok(plus.map_or(Value::Top, image))
        }
    })?;
    if let Some((lower, upper)) = f.monotonicity_violation() {
        return Err(Error::Monotonicity {
            lower: lower.to_vec(),
            upper: upper.to_vec(),
        });
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionCheck {
    pub ok: bool,
    /// First set whose membership is not preserved.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<FinSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotonicity_violation: Option<(FinSet, FinSet)>,
}

/// Checks `F ∈ A_P ⟺ f(F) ∈ A_Q` over the whole domain lattice, and that
/// `f` is monotone.
pub fn verify_reduction(
    p: &ColoredPoset,
    q: &ColoredPoset,
    f: &MonotoneMap,
) -> Result<ReductionCheck> {
    let a = build_a(p)?;
    let b = build_a(q)?;
    if f.domain_universe() != p.len() {
        return Err(Error::Arity(format!(
            "map over 𝒫({}) for a poset of size {}",
            f.domain_universe(),
            p.len()
        )));
    }
    let monotonicity_violation = f.monotonicity_violation();
    let counterexample = f
        .entries()
        .find(|(set, v)| a.contains(set) != b.contains_value(v))
        .map(|(set, _)| set);
    Ok(ReductionCheck {
        ok: counterexample.is_none() && monotonicity_violation.is_none(),
        counterexample,
        monotonicity_violation,
    })
}

/// Recovers a homomorphism `P → Q` from a reduction of A_P to A_Q.
pub fn extract_hom(p: &ColoredPoset, q: &ColoredPoset, f: &MonotoneMap) -> Result<Homomorphism> {
    let check = verify_reduction(p, q, f)?;
    if !check.ok {
        return Err(Error::NotReduction(
            match (check.counterexample, check.monotonicity_violation) {
                (Some(c), _) => format!("membership differs at {c:?}"),
                (None, Some((a, b))) => format!("not monotone between {a:?} and {b:?}"),
                (None, None) => unreachable!(),
            },
        ));
    }
    let b = build_a(q)?;
    let lp = label(p)?;
    let lq = label(q)?;
    let mut map = Vec::with_capacity(p.len());
    for i in 0..p.len() {
        let image = f.get(lp.get(i)).expect("labels lie in the domain lattice");
        let image = image
            .as_set()
            .ok_or_else(|| Error::Supremum(format!("f(l({i})) is the top point")))?;
        let t = sup_label(q, &lq, image).map_err(|e| match e {
            Error::NotInClosure(s) => {
                Error::Supremum(format!("f(l({i})) = {s:?} lies below no label"))
            }
            other => other,
        })?;
        let target = if b.contains(image) || q.color(t) == 0 {
            t
        } else {
            let (minus, plus) = one_neighbors(q, t)?;
            if lq.get(t).is_subset(image) {
                minus
            } else {
                plus.ok_or_else(|| {
                    Error::Supremum(format!(
                        "t_{i} is maximal but its label is not inside f(l({i}))"
                    ))
                })?
            }
        };
        map.push(target);
    }
    Ok(Homomorphism {
        mode: Mode::Plain,
        map,
    })
}

/// Outcome of the approximability check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Approximability {
    pub holds: bool,
    /// A point for which no finite approximation exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
    /// The finite set used for the point ω in complement mode. The element
    /// `U` (outside the declared universe) stands for any fresh natural.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top_witness: Option<FinSet>,
}

/// Checks that every point `x` of the set (or of its complement) has a
/// finite `F ⊆ x` with the whole interval `[F, x]` on the same side.
///
/// Points are all of 𝒫(U) plus ω. For a finite `x` the interval shrinks as
/// `F` grows, so `F = x` is the best candidate and decides the point. For ω
/// the interval `[F, ω]` meets the family in the members containing `F`.
pub fn is_approximable(a: &SetFamily, check_complement: bool) -> Approximability {
    // Finite points on the checked side are settled by F = x: the interval
    // [x, x] is {x} itself. Only ω needs a search, and only in complement
    // mode, since ω is never a member.
    if !check_complement {
        return Approximability {
            holds: true,
            counterexample: None,
            top_witness: None,
        };
    }
    // A finite F with no member above it. The full universe works unless it
    // is itself below a member; otherwise a fresh element outside the
    // universe does.
    let full = FinSet::full(a.universe());
    let witness = if a.in_closure(&full) {
        FinSet::singleton(a.universe())
    } else {
        full
    };
    let holds = !a.members().iter().any(|m| witness.is_subset(m));
    Approximability {
        holds,
        counterexample: (!holds).then_some(Value::Top),
        top_witness: holds.then_some(witness),
    }
}

/// Longest strictly increasing chain in 𝒫(U) that starts inside the family
/// and alternates membership at every step, counted in steps; −1 if no
/// subset of the universe is a member. Tabulates the lattice, so U ≤ 20.
pub fn alternation_rank(a: &SetFamily) -> Result<i64> {
    let u = a.universe();
    lattice_guard(u)?;
    if a.is_empty() {
        return Ok(-1);
    }
    let size = 1usize << u;
    let mut mem = vec![false; size];
    for m in a.members() {
        mem[m.to_mask().expect("members fit the lattice") as usize] = true;
    }
    // best[c][F]: longest chain from any G ⊇ F with membership c, or −1.
    let mut best = [vec![-1i32; size], vec![-1i32; size]];
    let mut rank = -1i32;
    for f in (0..size).rev() {
        let c = usize::from(mem[f]);
        let mut up = [-1i32, -1i32];
        for i in 0..u {
            let g = f | 1 << i;
            if g != f {
                up[0] = up[0].max(best[0][g]);
                up[1] = up[1].max(best[1][g]);
            }
        }
        // A superset with the other membership is automatically proper.
        let h = if up[1 - c] >= 0 { 1 + up[1 - c] } else { 0 };
        best[c][f] = up[c].max(h);
        best[1 - c][f] = up[1 - c];
        if mem[f] {
            rank = rank.max(h);
        }
    }
    Ok(i64::from(rank))
}

/// The same rank computed from the members alone, for any universe size.
///
/// An alternating chain visits members at even positions. Consecutive
/// members `m ⊂ m'` can be bridged by a non-member iff the sets strictly
/// between them outnumber the members strictly between them; the chain may
/// end with one non-member above its last member.
pub fn alternation_rank_sparse(a: &SetFamily) -> i64 {
    let members: Vec<&FinSet> = {
        let mut v: Vec<_> = a.members().iter().collect();
        v.sort_by_key(|m| m.len());
        v
    };
    if members.is_empty() {
        return -1;
    }
    let exceeds = |bits: usize, count: usize, minus: u128| -> bool {
        bits >= 100 || (1u128 << bits) - minus > count as u128
    };
    let k = members.len();
    // steps[i]: longest member chain ending at members[i], in member steps.
    let mut steps = vec![0i64; k];
    let mut rank = -1i64;
    for i in 0..k {
        for j in 0..i {
            let (lo, hi) = (members[j], members[i]);
            if !lo.is_proper_subset(hi) {
                continue;
            }
            let between = members
                .iter()
                .filter(|m| lo.is_proper_subset(m) && m.is_proper_subset(hi))
                .count();
            if exceeds(hi.len() - lo.len(), between, 2) {
                steps[i] = steps[i].max(steps[j] + 1);
            }
        }
        let above = members
            .iter()
            .filter(|m| members[i].is_proper_subset(m))
            .count();
        let tail = exceeds(a.universe() - members[i].len(), above, 1);
        rank = rank.max(2 * steps[i] + i64::from(tail));
    }
    rank
}

/// Exhaustive search for a monotone reduction of A_P to A_Q.
///
/// Values are drawn from the labels of Q plus ω, which suffices because the
/// reductions built from homomorphisms only take such values. With
/// `unrestricted` every subset of Q's universe is a candidate value.
pub fn brute_force_reduction_exists(
    p: &ColoredPoset,
    q: &ColoredPoset,
    budget: Option<u64>,
    unrestricted: bool,
) -> Result<Option<MonotoneMap>> {
    let a = build_a(p)?;
    let b = build_a(q)?;
    lattice_guard(p.len())?;
    let mut values: Vec<Value> = if unrestricted {
        lattice_guard(q.len())?;
        (0u32..1 << q.len())
            .map(|m| Value::Set(mask_set(m)))
            .collect()
    } else {
        let lq = label(q)?;
        let set: BTreeSet<_> = lq.table.iter().cloned().collect();
        set.into_iter().map(Value::Set).collect()
    };
    values.push(Value::Top);
    let leq: Vec<Vec<bool>> = values
        .iter()
        .map(|v| values.iter().map(|w| v.is_subset(w)).collect())
        .collect();
    let member: Vec<bool> = values.iter().map(|v| b.contains_value(v)).collect();
    let n = p.len();
    let size = 1usize << n;
    let want: Vec<bool> = (0..size).map(|m| a.contains(&mask_set(m as u32))).collect();
    let mut search = OracleSearch {
        n,
        leq,
        member,
        want,
        choice: vec![usize::MAX; size],
        nodes: 0,
        budget,
    };
    if !search.go(0)? {
        return Ok(None);
    }
    let choice = search.choice;
    let table: Vec<Value> = choice.iter().map(|&c| values[c].clone()).collect();
    Ok(Some(MonotoneMap {
        domain_universe: n,
        table,
    }))
}

struct OracleSearch {
    n: usize,
    leq: Vec<Vec<bool>>,
    member: Vec<bool>,
    want: Vec<bool>,
    choice: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl OracleSearch {
    // Masks are assigned in increasing numeric order, so every subset of a
    // mask already has a value when the mask is reached.
    fn go(&mut self, m: usize) -> Result<bool> {
        if m == self.choice.len() {
            return Ok(true);
        }
        for v in 0..self.member.len() {
            if self.member[v] != self.want[m] {
                continue;
            }
            if (0..self.n).any(|i| m >> i & 1 == 1 && !self.leq[self.choice[m & !(1 << i)]][v]) {
                continue;
            }
            self.nodes += 1;
            if let Some(b) = self.budget.filter(|&b| self.nodes > b) {
                return Err(Error::BudgetExceeded(b));
            }
            self.choice[m] = v;
            if self.go(m + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fixture, gen_p};
    use crate::hom::{find_hom, SearchOptions};

    fn set(v: &[usize]) -> FinSet {
        v.iter().copied().collect()
    }

    #[test]
    fn label_examples() {
        let c = fixture("chain2").unwrap();
        assert_eq!(label(&c).unwrap().table, vec![set(&[]), set(&[0, 1])]);
        assert_eq!(
            label(&fixture("singleton").unwrap()).unwrap().table,
            vec![set(&[])]
        );
        let p = gen_p(1, 2).unwrap();
        let l = label(&p).unwrap();
        let i = |s: &str| p.index_of(s).unwrap();
        let expected: FinSet = ["bot", "w:0", "x:0", "w:1", "x:1", "y:0"]
            .iter()
            .map(|s| i(s))
            .collect();
        assert_eq!(l.get(i("y:0")), &expected);
        assert!(l.is_injective() && l.is_monotone(&p));
        let two = ColoredPoset::from_relation(2, &[], &[0, 1], None).unwrap();
        assert!(matches!(label(&two), Err(Error::NoBottom)));
    }

    #[test]
    fn build_a_examples() {
        let a = build_a(&fixture("chain2").unwrap()).unwrap();
        assert_eq!(
            a.members().iter().cloned().collect::<Vec<_>>(),
            vec![set(&[0, 1])]
        );
        assert!(matches!(
            build_a(&fixture("singleton").unwrap()),
            Err(Error::NotEmbeddable(_))
        ));
        let p = gen_p(1, 2).unwrap();
        let l = label(&p).unwrap();
        let a = build_a(&p).unwrap();
        let expected: BTreeSet<FinSet> = ["w:0", "w:1", "w:2", "z:0:0", "z:1:0", "z:1:2"]
            .iter()
            .map(|s| l.get(p.index_of(s).unwrap()).clone())
            .collect();
        assert_eq!(a.members(), &expected);
    }

    #[test]
    fn sup_label_examples() {
        let c = fixture("chain2").unwrap();
        let l = label(&c).unwrap();
        assert_eq!(sup_label(&c, &l, &set(&[0, 1])).unwrap(), 1);
        assert_eq!(sup_label(&c, &l, &set(&[0])).unwrap(), 0);
        assert_eq!(sup_label(&c, &l, &set(&[1])).unwrap(), 0);
        assert!(matches!(
            sup_label(&c, &l, &set(&[2])),
            Err(Error::NotInClosure(_))
        ));
    }

    #[test]
    fn reduction_from_identity_on_chain2() {
        let c = fixture("chain2").unwrap();
        let f = build_reduction(&c, &c, &Homomorphism::identity(2)).unwrap();
        let expected = [set(&[]), set(&[]), set(&[]), set(&[0, 1])];
        for (m, e) in expected.iter().enumerate() {
            assert_eq!(f.get_mask(m as u32), &Value::Set(e.clone()));
        }
        assert!(verify_reduction(&c, &c, &f).unwrap().ok);
        assert_eq!(extract_hom(&c, &c, &f).unwrap().map, vec![0, 1]);
    }

    #[test]
    fn reduction_into_p_family() {
        let c = fixture("chain2").unwrap();
        let p = gen_p(1, 2).unwrap();
        let w0 = p.index_of("w:0").unwrap();
        let phi = Homomorphism {
            mode: Mode::Plain,
            map: vec![0, w0],
        };
        let f = build_reduction(&c, &p, &phi).unwrap();
        let lq = label(&p).unwrap();
        assert_eq!(f.get_mask(0b11), &Value::Set(lq.get(w0).clone()));
        assert!(verify_reduction(&c, &p, &f).unwrap().ok);
        let back = extract_hom(&c, &p, &f).unwrap();
        assert_eq!(back.map, vec![0, w0]);
    }

    #[test]
    fn top_values_appear_outside_the_closure() {
        // Two maximal elements, so some sets lie below no label.
        let p = gen_p(1, 2).unwrap();
        let f = build_reduction(&p, &p, &Homomorphism::identity(p.len())).unwrap();
        assert!(f.entries().any(|(_, v)| *v == Value::Top));
        assert!(verify_reduction(&p, &p, &f).unwrap().ok);
        // chain2 has a maximum, so its closure is the whole lattice.
        let c = fixture("chain2").unwrap();
        let g = build_reduction(&c, &c, &Homomorphism::identity(2)).unwrap();
        assert!(g.entries().all(|(_, v)| *v != Value::Top));
    }

    #[test]
    fn constant_maps_are_not_reductions() {
        let c = fixture("chain2").unwrap();
        for v in [Value::Set(FinSet::new()), Value::Top] {
            let f = MonotoneMap::constant(2, v).unwrap();
            let check = verify_reduction(&c, &c, &f).unwrap();
            assert!(!check.ok);
            assert_eq!(check.counterexample, Some(set(&[0, 1])));
            assert!(matches!(
                extract_hom(&c, &c, &f),
                Err(Error::NotReduction(_))
            ));
        }
    }

    #[test]
    fn approximability_examples() {
        let a = SetFamily::new(2, [set(&[0])]).unwrap();
        assert!(is_approximable(&a, false).holds);
        let a = build_a(&fixture("chain2").unwrap()).unwrap();
        let r = is_approximable(&a, true);
        assert!(r.holds);
        // {0, 1} is itself a member, so the fresh element is needed.
        assert_eq!(r.top_witness, Some(set(&[2])));
        let all = SetFamily::new(1, [set(&[]), set(&[0])]).unwrap();
        assert!(is_approximable(&all, false).holds);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            alternation_rank(&SetFamily::new(3, []).unwrap()).unwrap(),
            -1
        );
        let a = SetFamily::new(1, [set(&[])]).unwrap();
        assert_eq!(alternation_rank(&a).unwrap(), 1);
        assert_eq!(alternation_rank_sparse(&a), 1);
        let big = SetFamily::new(21, [set(&[])]).unwrap();
        assert!(matches!(
            alternation_rank(&big),
            Err(Error::UniverseTooLarge(21, 20))
        ));
        assert_eq!(alternation_rank_sparse(&big), 1);
    }

    #[test]
    fn map_json_round_trip() {
        let c = fixture("chain2").unwrap();
        let f = build_reduction(&c, &c, &Homomorphism::identity(2)).unwrap();
        assert_eq!(MonotoneMap::from_json(f.to_json()).unwrap(), f);
        let mut v = f.to_json();
        v["entries"].as_array_mut().unwrap().pop();
        assert!(matches!(MonotoneMap::from_json(v), Err(Error::Invalid(_))));
        let top = serde_json::json!({"universe": 1, "entries": [
            {"in": [], "out": "TOP"}, {"in": [0], "out": []}
        ]});
        assert!(matches!(
            MonotoneMap::from_json(top),
            Err(Error::Monotonicity { .. })
        ));
        let a = build_a(&c).unwrap();
        assert_eq!(SetFamily::from_json(a.to_json()).unwrap(), a);
    }

    #[test]
    fn brute_force_examples() {
        let c = fixture("chain2").unwrap();
        assert!(brute_force_reduction_exists(&c, &c, None, false)
            .unwrap()
            .is_some());
        let q =
            ColoredPoset::from_relation(4, &[(0, 1), (1, 2), (2, 3)], &[0, 1, 0, 1], None).unwrap();
        let f = brute_force_reduction_exists(&c, &q, None, false)
            .unwrap()
            .unwrap();
        assert!(verify_reduction(&c, &q, &f).unwrap().ok);
        // Two color-1 leaves fold onto one; a longer alternating chain cannot.
        let v = ColoredPoset::from_relation(3, &[(0, 1), (0, 2)], &[0, 1, 1], None).unwrap();
        assert!(find_hom(&v, &c, Mode::Plain, &SearchOptions::default())
            .unwrap()
            .is_found());
        let tall =
            ColoredPoset::from_relation(4, &[(0, 1), (1, 2), (2, 3)], &[0, 1, 0, 1], None).unwrap();
        assert!(!find_hom(&tall, &c, Mode::Plain, &SearchOptions::default())
            .unwrap()
            .is_found());
        assert!(brute_force_reduction_exists(&tall, &c, None, false)
            .unwrap()
            .is_none());
        assert!(brute_force_reduction_exists(&tall, &c, None, true)
            .unwrap()
            .is_none());
    }
}
