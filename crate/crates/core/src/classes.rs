//! Class membership (shrubs, embeddable and finite-branching posets),
//! forbidden-pattern detection and the alternating-chain strengths.

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::hom::{self, Mode, SearchOptions};
use crate::poset::ColoredPoset;

/// Quantified conditions that hold trivially for finite posets. They are
/// listed in every report rather than dropped.
const SHRUB_VACUOUS: [&str; 2] = [
    "no infinite increasing chain (finite input)",
    "finite predecessor sets (finite input)",
];
const BRANCHING_VACUOUS: &str = "finitely many successors (finite input)";

pub const NO_BOTTOM: &str = "no bottom element";
pub const NOT_BOUNDED_COMPLETE: &str = "not bounded complete";
pub const BOTTOM_COLORED_1: &str = "bottom colored 1";
pub const MAXIMAL_COLORED_0: &str = "maximal element colored 0";

/// The three forbidden patterns, in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// A color-1 node with two color-0 covers.
    Vee,
    /// A color-1 node covering two color-0 nodes.
    Wedge,
    /// Two color-1 nodes in a covering pair.
    Bar,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::Vee, Pattern::Wedge, Pattern::Bar];

    pub fn poset(self) -> ColoredPoset {
        let (n, pairs, colors, name): (usize, &[(usize, usize)], &[u8], &str) = match self {
            Pattern::Vee => (3, &[(0, 1), (0, 2)], &[1, 0, 0], "vee"),
            Pattern::Wedge => (3, &[(0, 2), (1, 2)], &[0, 0, 1], "wedge"),
            Pattern::Bar => (2, &[(0, 1)], &[1, 1], "bar"),
        };
        ColoredPoset::from_relation(n, pairs, colors, None)
            .expect("pattern posets are well formed")
            .with_name(name)
    }

    pub fn failure(self) -> &'static str {
        match self {
            Pattern::Vee => "pattern vee embeds",
            Pattern::Wedge => "pattern wedge embeds",
            Pattern::Bar => "pattern bar embeds",
        }
    }
}

#[derive(Clone, Debug)]
pub struct PatternMatch<'a> {
    pub pattern: &'a ColoredPoset,
    pub target: &'a ColoredPoset,
    pub map: Vec<usize>,
}

/// Finds an injective, color- and order-preserving map from `pat` into `p`
/// that sends covering pairs to covering pairs.
pub fn pattern_embeds<'a>(pat: &'a ColoredPoset, p: &'a ColoredPoset) -> Option<PatternMatch<'a>> {
    let opts = SearchOptions {
        budget: None,
        ..SearchOptions::default()
    };
    let found = hom::find_hom(pat, p, Mode::ImmPred, &opts)
        .expect("unbudgeted search cannot run out")
        .into_hom()?;
    let m = PatternMatch {
        pattern: pat,
        target: p,
        map: found.map,
    };
    debug_assert!(verify_pattern_match(&m));
    Some(m)
}

/// Checks a pattern match from scratch: injectivity, colors, order, and
/// covering pairs mapped to covering pairs.
pub fn verify_pattern_match(m: &PatternMatch<'_>) -> bool {
    let (pat, tgt, map) = (m.pattern, m.target, &m.map);
    if map.len() != pat.len() || map.iter().any(|&q| q >= tgt.len()) {
        return false;
    }
    for i in 0..map.len() {
        for j in 0..map.len() {
            if i != j && map[i] == map[j] {
                return false;
            }
            if pat.leq(i, j) && !tgt.leq(map[i], map[j]) {
                return false;
            }
            if pat.imm_preds(j).contains(i) && !tgt.imm_preds(map[j]).contains(map[i]) {
                return false;
            }
        }
        if pat.color(i) != tgt.color(map[i]) {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_condition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Vec<usize>>,
    #[serde(rename = "vacuous_conditions", default)]
    pub vacuous: Vec<String>,
}

impl ClassReport {
    fn new(class: &str, vacuous: &[&str]) -> Self {
        ClassReport {
            class: class.to_string(),
            holds: true,
            failed_condition: None,
            witness: None,
            vacuous: vacuous.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn fail(mut self, condition: &str, witness: Vec<usize>) -> Self {
        self.holds = false;
        self.failed_condition = Some(condition.to_string());
        self.witness = Some(witness);
        self
    }

    fn relabel(mut self, class: &str, extra_vacuous: &[&str]) -> Self {
        self.class = class.to_string();
        self.vacuous
            .extend(extra_vacuous.iter().map(|s| s.to_string()));
        self
    }
}

pub fn is_shrub(p: &ColoredPoset) -> ClassReport {
    let report = ClassReport::new("shrub", &SHRUB_VACUOUS);
    if p.bottom().is_none() {
        let minimal = (0..p.len()).filter(|&i| p.is_minimal(i)).collect();
        return report.fail(NO_BOTTOM, minimal);
    }
    match p.bounded_completeness_witness() {
        Some((a, b)) => report.fail(NOT_BOUNDED_COMPLETE, vec![a, b]),
        None => report,
    }
}

pub fn is_embeddable(p: &ColoredPoset) -> ClassReport {
    let shrub = is_shrub(p);
    if !shrub.holds {
        return shrub.relabel("embeddable", &[]);
    }
    let report = shrub.relabel("embeddable", &[]);
    let bottom = p.bottom().expect("shrubs have a bottom");
    if p.color(bottom) != 0 {
        return report.fail(BOTTOM_COLORED_1, vec![bottom]);
    }
    if let Some(k) = (0..p.len()).find(|&k| p.is_maximal(k) && p.color(k) != 1) {
        return report.fail(MAXIMAL_COLORED_0, vec![k]);
    }
    for pattern in Pattern::ALL {
        let pat = pattern.poset();
        if let Some(m) = pattern_embeds(&pat, p) {
            return report.fail(pattern.failure(), m.map);
        }
    }
    report
}

pub fn is_finite_branching(p: &ColoredPoset) -> ClassReport {
    is_embeddable(p).relabel("finite_branching", &[BRANCHING_VACUOUS])
}

/// The unique immediate predecessor of a color-1 node and its immediate
/// successor, if the node is not maximal.
pub fn one_neighbors(p: &ColoredPoset, node: usize) -> Result<(usize, Option<usize>)> {
    check_index(node, p.len())?;
    if p.color(node) != 1 {
        return Err(Error::NotEmbeddable(format!("node {node} has color 0")));
    }
    let preds = p.imm_preds(node);
    let succs = p.imm_succs(node);
    if preds.len() != 1 || succs.len() > 1 {
        return Err(Error::NotEmbeddable(format!(
            "node {node} has {} immediate predecessors and {} immediate successors",
            preds.len(),
            succs.len()
        )));
    }
    let minus = preds.min_element().expect("one element");
    let plus = succs.min_element();
    if p.color(minus) != 0 || plus.is_some_and(|q| p.color(q) != 0) {
        return Err(Error::NotEmbeddable(format!(
            "a neighbor of node {node} has color 1"
        )));
    }
    Ok((minus, plus))
}

/// Increasing and decreasing strengths of every node: the length of the
/// longest strictly increasing (decreasing) chain starting at the node whose
/// colors alternate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strengths {
    pub incr: Vec<usize>,
    pub decr: Vec<usize>,
}

impl Strengths {
    pub fn compute(p: &ColoredPoset) -> Self {
        let n = p.len();
        let order = p.topological_order();
        let mut incr = vec![1; n];
        for &a in order.iter().rev() {
            incr[a] = 1 + p
                .up_set(a)
                .iter()
                .filter(|&b| b != a && p.color(b) != p.color(a))
                .map(|b| incr[b])
                .max()
                .unwrap_or(0);
        }
        let mut decr = vec![1; n];
        for &a in &order {
            decr[a] = 1 + p
                .down_set(a)
                .iter()
                .filter(|&b| b != a && p.color(b) != p.color(a))
                .map(|b| decr[b])
                .max()
                .unwrap_or(0);
        }
        Strengths { incr, decr }
    }
}

pub fn str_incr(p: &ColoredPoset, node: usize) -> Result<usize> {
    check_index(node, p.len())?;
    Ok(Strengths::compute(p).incr[node])
}

pub fn str_decr(p: &ColoredPoset, node: usize) -> Result<usize> {
    check_index(node, p.len())?;
    Ok(Strengths::compute(p).decr[node])
}
