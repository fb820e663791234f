//! Homomorphism search between finite 2-colored posets.
//!
//! The search is a depth-first backtracking over the source elements in a
//! fixed linear extension (smallest index first among ready elements).
//! Candidate sets start from color equality and, optionally, strength
//! dominance: a homomorphism maps a color-alternating chain to a
//! color-alternating chain, so neither strength can decrease along it.
//! Domains are made arc consistent at the root and forward-checked after
//! every assignment.

use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classes::Strengths;
use crate::error::{Error, Result};
use crate::poset::ColoredPoset;

/// Default node budget per query.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Order- and color-preserving.
    Plain,
    /// Plain and injective.
    Injective,
    /// Injective, and covering pairs go to covering pairs.
    ImmPred,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Plain => "plain",
            Mode::Injective => "injective",
            Mode::ImmPred => "imm_pred",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Mode::Plain),
            "injective" => Ok(Mode::Injective),
            "imm_pred" | "imm-pred" => Ok(Mode::ImmPred),
            other => Err(Error::Param(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    pub mode: Mode,
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn identity(n: usize) -> Self {
        Homomorphism {
            mode: Mode::Plain,
            map: (0..n).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Homomorphism) -> Homomorphism {
        Homomorphism {
            mode: Mode::Plain,
            map: self.map.iter().map(|&q| other.map[q]).collect(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Maximum number of search-tree nodes; `None` searches to exhaustion.
    pub budget: Option<u64>,
    pub strength_pruning: bool,
    /// Worker count for root fan-out. With more than one worker the witness
    /// may differ between runs; the existence answer does not.
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: Some(DEFAULT_BUDGET),
            strength_pruning: true,
            threads: 1,
        }
    }
}

/// Result of a completed search. `Exhausted` is the certificate that the
/// whole search tree was visited without finding a map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { hom: Homomorphism, nodes: u64 },
    Exhausted { nodes: u64 },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::Exhausted { nodes } => *nodes,
        }
    }

    pub fn hom(&self) -> Option<&Homomorphism> {
        match self {
            SearchOutcome::Found { hom, .. } => Some(hom),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn into_hom(self) -> Option<Homomorphism> {
        match self {
            SearchOutcome::Found { hom, .. } => Some(hom),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Fixed-width rows of bits over the target's elements.
struct Rows {
    words: usize,
    bits: Vec<u64>,
}

impl Rows {
    fn new(rows: usize, width: usize) -> Self {
        let words = width.div_ceil(64).max(1);
        Rows {
            words,
            bits: vec![0; rows * words],
        }
    }

    fn from_sets<'a>(sets: impl Iterator<Item = &'a crate::FinSet>, width: usize) -> Self {
        let sets: Vec<_> = sets.collect();
        let mut r = Rows::new(sets.len(), width);
        for (i, s) in sets.iter().enumerate() {
            for q in s.iter() {
                r.set(i, q);
            }
        }
        r
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.bits[i * self.words..(i + 1) * self.words]
    }

    fn set(&mut self, i: usize, q: usize) {
        self.row_mut(i)[q / 64] |= 1 << (q % 64);
    }

    fn clear(&mut self, i: usize, q: usize) {
        self.row_mut(i)[q / 64] &= !(1 << (q % 64));
    }

    fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
        row.iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + t)
            })
        })
    }

    fn is_empty_row(row: &[u64]) -> bool {
        row.iter().all(|&w| w == 0)
    }
}

/// Constraint between two source variables, stored on the earlier one.
#[derive(Clone, Copy)]
enum Link {
    /// The later variable lies above: its image must lie above.
    Above(usize),
    Below(usize),
    /// The later variable covers the earlier one (imm_pred mode).
    CoverAbove(usize),
    CoverBelow(usize),
}

struct Engine {
    mode: Mode,
    order: Vec<usize>,
    /// Constraints toward variables later in `order`.
    links: Vec<Vec<Link>>,
    up: Rows,
    down: Rows,
    succ: Rows,
    pred: Rows,
    budget: Option<u64>,
}

struct Shared {
    nodes: AtomicU64,
    stop: AtomicBool,
}

enum Step {
    Found(Vec<usize>),
    Exhausted,
    Budget,
    Cancelled,
}

impl Engine {
    fn new(source: &ColoredPoset, target: &ColoredPoset, mode: Mode, budget: Option<u64>) -> Self {
        let order = source.topological_order();
        let mut pos = vec![0; source.len()];
        for (i, &p) in order.iter().enumerate() {
            pos[p] = i;
        }
        let mut links = vec![Vec::new(); source.len()];
        for a in 0..source.len() {
            for b in 0..source.len() {
                if a == b || pos[b] < pos[a] {
                    continue;
                }
                if source.leq(a, b) {
                    links[a].push(Link::Above(b));
                } else if source.leq(b, a) {
                    links[a].push(Link::Below(b));
                }
                if mode == Mode::ImmPred {
                    if source.imm_preds(b).contains(a) {
                        links[a].push(Link::CoverAbove(b));
                    } else if source.imm_preds(a).contains(b) {
                        links[a].push(Link::CoverBelow(b));
                    }
                }
            }
        }
        let m = target.len();
        Engine {
            mode,
            order,
            links,
            up: Rows::from_sets((0..m).map(|q| target.up_set(q)), m),
            down: Rows::from_sets((0..m).map(|q| target.down_set(q)), m),
            succ: Rows::from_sets((0..m).map(|q| target.imm_succs(q)), m),
            pred: Rows::from_sets((0..m).map(|q| target.imm_preds(q)), m),
            budget,
        }
    }

    fn filter_row(&self, link: Link, q: usize) -> (usize, &[u64]) {
        match link {
            Link::Above(b) => (b, self.up.row(q)),
            Link::Below(b) => (b, self.down.row(q)),
            Link::CoverAbove(b) => (b, self.succ.row(q)),
            Link::CoverBelow(b) => (b, self.pred.row(q)),
        }
    }

    /// Removes unsupported values until every comparable pair of variables
    /// is arc consistent. Returns false if a domain empties.
    fn arc_consistency(&self, dom: &mut Rows) -> bool {
        let n = dom.bits.len() / dom.words;
        let mut changed = true;
        let mut support = vec![0u64; dom.words];
        while changed {
            changed = false;
            for a in 0..n {
                for &link in &self.links[a] {
                    let (b, rows_a, rows_b) = match link {
                        Link::Above(b) => (b, &self.up, &self.down),
                        Link::Below(b) => (b, &self.down, &self.up),
                        Link::CoverAbove(b) => (b, &self.succ, &self.pred),
                        Link::CoverBelow(b) => (b, &self.pred, &self.succ),
                    };
                    // D(b) must meet the neighborhood of some value of D(a), and back.
                    for (x, y, rows) in [(a, b, rows_a), (b, a, rows_b)] {
                        support.iter_mut().for_each(|w| *w = 0);
                        for q in Rows::ones(dom.row(x)).collect::<Vec<_>>() {
                            for (s, r) in support.iter_mut().zip(rows.row(q)) {
                                *s |= r;
                            }
                        }
                        let row = dom.row_mut(y);
                        for (d, s) in row.iter_mut().zip(&support) {
                            let next = *d & s;
                            if next != *d {
                                *d = next;
                                changed = true;
                            }
                        }
                        if Rows::is_empty_row(row) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&self, depth: usize, dom: &mut Rows, assign: &mut [usize], shared: &Shared) -> Step {
        if depth == self.order.len() {
            return Step::Found(assign.to_vec());
        }
        let p = self.order[depth];
        let candidates: Vec<usize> = Rows::ones(dom.row(p)).collect();
        for q in candidates {
            if shared.stop.load(Ordering::Relaxed) {
                return Step::Cancelled;
            }
            let nodes = shared.nodes.fetch_add(1, Ordering::Relaxed) + 1;
            if self.budget.is_some_and(|b| nodes > b) {
                return Step::Budget;
            }
            let saved = dom.bits.clone();
            assign[p] = q;
            if self.propagate(p, q, depth, dom) {
                match self.search(depth + 1, dom, assign, shared) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
            dom.bits = saved;
        }
        Step::Exhausted
    }

    fn propagate(&self, p: usize, q: usize, depth: usize, dom: &mut Rows) -> bool {
        dom.row_mut(p).iter_mut().for_each(|w| *w = 0);
        dom.set(p, q);
        for &link in &self.links[p] {
            let (b, filter) = self.filter_row(link, q);
            let row = dom.row_mut(b);
            for (d, f) in row.iter_mut().zip(filter) {
                *d &= f;
            }
            if Rows::is_empty_row(row) {
                return false;
            }
        }
        if self.mode != Mode::Plain {
            for &b in &self.order[depth + 1..] {
                dom.clear(b, q);
                if Rows::is_empty_row(dom.row(b)) {
                    return false;
                }
            }
        }
        true
    }
}

/// Searches for a homomorphism from `p` to `q` in the given mode.
///
/// Returns the first map found in the fixed variable and candidate order,
/// or an exhaustion certificate. Fails with [`Error::BudgetExceeded`] when
/// the node budget runs out first.
pub fn find_hom(
    p: &ColoredPoset,
    q: &ColoredPoset,
    mode: Mode,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let engine = Engine::new(p, q, mode, opts.budget);
    let mut dom = Rows::new(p.len(), q.len());
    let (sp, sq) = if opts.strength_pruning {
        (Some(Strengths::compute(p)), Some(Strengths::compute(q)))
    } else {
        (None, None)
    };
    for a in 0..p.len() {
        for b in 0..q.len() {
            if p.color(a) != q.color(b) {
                continue;
            }
            if let (Some(sp), Some(sq)) = (&sp, &sq) {
                if sq.incr[b] < sp.incr[a] || sq.decr[b] < sp.decr[a] {
                    continue;
                }
            }
            dom.set(a, b);
        }
    }
    let shared = Shared {
        nodes: AtomicU64::new(0),
        stop: AtomicBool::new(false),
    };
    if (0..p.len()).any(|a| Rows::is_empty_row(dom.row(a))) || !engine.arc_consistency(&mut dom) {
        return Ok(SearchOutcome::Exhausted { nodes: 0 });
    }
    let step = if opts.threads > 1 && !engine.order.is_empty() {
        search_parallel(&engine, dom, p.len(), &shared, opts.threads)
    } else {
        let mut assign = vec![usize::MAX; p.len()];
        engine.search(0, &mut dom, &mut assign, &shared)
    };
    let nodes = shared.nodes.load(Ordering::Relaxed);
    match step {
        Step::Found(map) => {
            let hom = Homomorphism { mode, map };
            debug_assert!(verify_hom(p, q, &hom).ok);
            Ok(SearchOutcome::Found { hom, nodes })
        }
        Step::Exhausted => Ok(SearchOutcome::Exhausted { nodes }),
        Step::Budget => Err(Error::BudgetExceeded(opts.budget.unwrap_or(0))),
        Step::Cancelled => unreachable!("cancellation only happens inside parallel search"),
    }
}

fn search_parallel(engine: &Engine, dom: Rows, n: usize, shared: &Shared, threads: usize) -> Step {
    let root = engine.order[0];
    let candidates: Vec<usize> = Rows::ones(dom.row(root)).collect();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool,
        Err(_) => {
            let mut dom = dom;
            let mut assign = vec![usize::MAX; n];
            return engine.search(0, &mut dom, &mut assign, shared);
        }
    };
    let steps: Vec<Step> = pool.install(|| {
        candidates
            .par_iter()
            .map(|&q| {
                let mut local = Rows {
                    words: dom.words,
                    bits: dom.bits.clone(),
                };
                let mut assign = vec![usize::MAX; n];
                assign[root] = q;
                shared.nodes.fetch_add(1, Ordering::Relaxed);
                if !engine.propagate(root, q, 0, &mut local) {
                    return Step::Exhausted;
                }
                let step = engine.search(1, &mut local, &mut assign, shared);
                if matches!(step, Step::Found(_) | Step::Budget) {
                    shared.stop.store(true, Ordering::Relaxed);
                }
                step
            })
            .collect()
    });
    let mut result = Step::Exhausted;
    for step in steps {
        match step {
            Step::Found(map) => return Step::Found(map),
            Step::Budget => result = Step::Budget,
            Step::Exhausted | Step::Cancelled => {}
        }
    }
    result
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Arity { expected: usize, got: usize },
    OutOfRange { element: usize },
    Color { element: usize },
    Order { lower: usize, upper: usize },
    NotInjective { a: usize, b: usize },
    Cover { lower: usize, upper: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomCheck {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Checks every condition of the homomorphism's mode and lists each
/// violating element or pair.
pub fn verify_hom(p: &ColoredPoset, q: &ColoredPoset, h: &Homomorphism) -> HomCheck {
    let mut violations = Vec::new();
    if h.map.len() != p.len() {
        violations.push(Violation::Arity {
            expected: p.len(),
            got: h.map.len(),
        });
        return HomCheck {
            ok: false,
            violations,
        };
    }
    for (a, &qa) in h.map.iter().enumerate() {
        if qa >= q.len() {
            violations.push(Violation::OutOfRange { element: a });
        }
    }
    if !violations.is_empty() {
        return HomCheck {
            ok: false,
            violations,
        };
    }
    for a in 0..p.len() {
        if p.color(a) != q.color(h.map[a]) {
            violations.push(Violation::Color { element: a });
        }
    }
    for a in 0..p.len() {
        for b in 0..p.len() {
            if a != b && p.leq(a, b) && !q.leq(h.map[a], h.map[b]) {
                violations.push(Violation::Order { lower: a, upper: b });
            }
        }
    }
    if h.mode != Mode::Plain {
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if h.map[a] == h.map[b] {
                    violations.push(Violation::NotInjective { a, b });
                }
            }
        }
    }
    if h.mode == Mode::ImmPred {
        for (lower, upper) in p.hasse_edges() {
            if !q.imm_preds(h.map[upper]).contains(h.map[lower]) {
                violations.push(Violation::Cover { lower, upper });
            }
        }
    }
    HomCheck {
        ok: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    StrictlyLess,
    StrictlyGreater,
    Incomparable,
}

impl Verdict {
    pub fn from_directions(forward: bool, backward: bool) -> Self {
        match (forward, backward) {
            (true, true) => Verdict::Equivalent,
            (true, false) => Verdict::StrictlyLess,
            (false, true) => Verdict::StrictlyGreater,
            (false, false) => Verdict::Incomparable,
        }
    }

    pub fn converse(self) -> Self {
        match self {
            Verdict::StrictlyLess => Verdict::StrictlyGreater,
            Verdict::StrictlyGreater => Verdict::StrictlyLess,
            v => v,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Verdict::Equivalent => "≡",
            Verdict::StrictlyLess => "<",
            Verdict::StrictlyGreater => ">",
            Verdict::Incomparable => "⊥",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::StrictlyLess => "strictly_less",
            Verdict::StrictlyGreater => "strictly_greater",
            Verdict::Incomparable => "incomparable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonVerdict {
    pub verdict: Verdict,
    /// Search from the first poset into the second.
    pub forward: SearchOutcome,
    pub backward: SearchOutcome,
}

pub fn compare(
    p: &ColoredPoset,
    q: &ColoredPoset,
    opts: &SearchOptions,
) -> Result<ComparisonVerdict> {
    let forward = find_hom(p, q, Mode::Plain, opts)?;
    let backward = find_hom(q, p, Mode::Plain, opts)?;
    Ok(ComparisonVerdict {
        verdict: Verdict::from_directions(forward.is_found(), backward.is_found()),
        forward,
        backward,
    })
}

/// Pairwise comparison table. Cell `(i, j)` compares poset `i` with poset `j`.
#[derive(Clone, Debug)]
pub struct ComparisonMatrix {
    pub names: Vec<String>,
    /// `outcomes[i][j]` is the search from `i` into `j`.
    pub outcomes: Vec<Vec<SearchOutcome>>,
}

impl ComparisonMatrix {
    pub fn verdict(&self, i: usize, j: usize) -> Verdict {
        Verdict::from_directions(
            self.outcomes[i][j].is_found(),
            self.outcomes[j][i].is_found(),
        )
    }

    pub fn verdicts(&self) -> Vec<Vec<Verdict>> {
        let n = self.names.len();
        (0..n)
            .map(|i| (0..n).map(|j| self.verdict(i, j)).collect())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.names.len();
        let cells: Vec<Vec<serde_json::Value>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let o = &self.outcomes[i][j];
                        serde_json::json!({
                            "verdict": self.verdict(i, j).to_string(),
                            "hom_found": o.is_found(),
                            "nodes": o.nodes(),
                        })
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({ "names": self.names, "cells": cells })
    }

    /// Aligned text rendering with one symbol per cell.
    pub fn to_table(&self) -> String {
        let width = self
            .names
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1)
            .max(1);
        let mut out = format!("{:width$}", "");
        for name in &self.names {
            out.push_str(&format!(" {name:>width$}"));
        }
        out.push('\n');
        for (i, name) in self.names.iter().enumerate() {
            out.push_str(&format!("{name:width$}"));
            for j in 0..self.names.len() {
                out.push_str(&format!(" {:>width$}", self.verdict(i, j).symbol()));
            }
            out.push('\n');
        }
        out
    }
}

/// Runs every ordered search, fanning cells out over `threads` workers.
/// Diagonal cells use the identity map.
pub fn matrix(
    posets: &[ColoredPoset],
    opts: &SearchOptions,
    threads: usize,
) -> Result<ComparisonMatrix> {
    let n = posets.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let run = |&(i, j): &(usize, usize)| -> Result<SearchOutcome> {
        if i == j {
            return Ok(SearchOutcome::Found {
                hom: Homomorphism::identity(posets[i].len()),
                nodes: 0,
            });
        }
        find_hom(&posets[i], &posets[j], Mode::Plain, opts)
    };
    let results: Vec<Result<SearchOutcome>> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Param(e.to_string()))?;
        pool.install(|| cells.par_iter().map(run).collect())
    } else {
        cells.iter().map(run).collect()
    };
    let mut outcomes: Vec<Vec<SearchOutcome>> = Vec::with_capacity(n);
    let mut it = results.into_iter();
    for _ in 0..n {
        outcomes.push(
            (0..n)
                .map(|_| it.next().expect("one result per cell"))
                .collect::<Result<_>>()?,
        );
    }
    let names = posets
        .iter()
        .enumerate()
        .map(|(i, p)| {
            p.name()
                .map(str::to_string)
                .unwrap_or_else(|| format!("#{i}"))
        })
        .collect();
    Ok(ComparisonMatrix { names, outcomes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{fixture, gen_p, gen_q};

    fn exhaustive() -> SearchOptions {
        SearchOptions {
            budget: None,
            ..SearchOptions::default()
        }
    }

    #[test]
    fn singleton_into_chain2() {
        let s = fixture("singleton").unwrap();
        let c = fixture("chain2").unwrap();
        let h = find_hom(&s, &c, Mode::Plain, &exhaustive())
            .unwrap()
            .into_hom()
            .unwrap();
        assert_eq!(h.map, vec![0]);
        let back = find_hom(&c, &s, Mode::Plain, &exhaustive()).unwrap();
        assert!(matches!(back, SearchOutcome::Exhausted { .. }));
    }

    #[test]
    fn ideal_inclusion_found() {
        let p2 = gen_p(2, 6).unwrap();
        let p1 = gen_p(1, 6).unwrap();
        let h = find_hom(&p2, &p1, Mode::Plain, &exhaustive())
            .unwrap()
            .into_hom()
            .unwrap();
        assert!(verify_hom(&p2, &p1, &h).ok);
    }

    #[test]
    fn verify_examples() {
        let c = fixture("chain2").unwrap();
        assert!(verify_hom(&c, &c, &Homomorphism::identity(2)).ok);
        let constant = Homomorphism {
            mode: Mode::Plain,
            map: vec![0, 0],
        };
        let check = verify_hom(&c, &c, &constant);
        assert!(!check.ok);
        assert_eq!(check.violations, vec![Violation::Color { element: 1 }]);
    }

    #[test]
    fn compare_examples() {
        let c = fixture("chain2").unwrap();
        assert_eq!(
            compare(&c, &c, &exhaustive()).unwrap().verdict,
            Verdict::Equivalent
        );
        let v = compare(&gen_p(2, 6).unwrap(), &gen_p(1, 10).unwrap(), &exhaustive()).unwrap();
        assert_eq!(v.verdict, Verdict::StrictlyLess);
    }

    #[test]
    fn q_family_first_direction_refused() {
        // Strength alone rules out Q_1 -> Q_2 at this truncation.
        let q1 = gen_q(1, 8).unwrap();
        let q2 = gen_q(2, 8).unwrap();
        let out = find_hom(&q1, &q2, Mode::Plain, &exhaustive()).unwrap();
        assert!(!out.is_found());
    }

    #[test]
    fn q_family_truncations_collapse_onto_tallest_branch() {
        // Bounded tower heights let Q_2 fold into one branch of Q_1.
        let q1 = gen_q(1, 8).unwrap();
        let q2 = gen_q(2, 8).unwrap();
        let h = find_hom(&q2, &q1, Mode::Plain, &exhaustive())
            .unwrap()
            .into_hom()
            .unwrap();
        assert!(verify_hom(&q2, &q1, &h).ok);
        let v = compare(&q1, &q2, &exhaustive()).unwrap();
        assert_eq!(v.verdict, Verdict::StrictlyGreater);
    }

    #[test]
    fn matrix_examples() {
        let c = fixture("chain2").unwrap().with_name("chain2");
        let m = matrix(&[c], &exhaustive(), 1).unwrap();
        assert_eq!(m.verdicts(), vec![vec![Verdict::Equivalent]]);

        let ps: Vec<_> = (1..=3).map(|n| gen_p(n, 6).unwrap()).collect();
        let m = matrix(&ps, &exhaustive(), 2).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => Verdict::Equivalent,
                    std::cmp::Ordering::Less => Verdict::StrictlyGreater,
                    std::cmp::Ordering::Greater => Verdict::StrictlyLess,
                };
                assert_eq!(m.verdict(i, j), expected, "cell ({i}, {j})");
            }
        }
        assert!(m.to_table().lines().count() == 4);
    }

    #[test]
    fn budget_is_reported() {
        let p = gen_p(3, 6).unwrap();
        let q = gen_p(1, 6).unwrap();
        let opts = SearchOptions {
            budget: Some(1),
            ..SearchOptions::default()
        };
        assert!(matches!(
            find_hom(&p, &q, Mode::Plain, &opts),
            Err(Error::BudgetExceeded(1))
        ));
    }

    #[test]
    fn parallel_agrees_on_existence() {
        let p = gen_p(2, 4).unwrap();
        let q = gen_p(1, 4).unwrap();
        let opts = SearchOptions {
            budget: None,
            threads: 4,
            ..SearchOptions::default()
        };
        let h = find_hom(&p, &q, Mode::Plain, &opts)
            .unwrap()
            .into_hom()
            .unwrap();
        assert!(verify_hom(&p, &q, &h).ok);
        let back = find_hom(&q, &p, Mode::Plain, &opts).unwrap();
        assert!(!back.is_found());
    }
}
