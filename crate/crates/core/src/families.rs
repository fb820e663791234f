//! Finite truncations of the P_n and Q_n families, small named fixtures, and
//! an enumerated corpus of small embeddable posets.
//!
//! Truncations keep branches `0..M` and add the stub column of branch `M`,
//! so that every truncation is downward closed in the next one.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::classes::{is_embeddable, Pattern};
use crate::error::{Error, Result};
use crate::poset::ColoredPoset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub branches: usize,
}

impl FamilySpec {
    pub fn build(&self) -> Result<ColoredPoset> {
        match self.family {
            Family::P => gen_p(self.n, self.branches),
            Family::Q => gen_q(self.n, self.branches),
        }
    }
}

/// Accumulates named nodes and generating pairs.
struct Builder {
    names: Vec<String>,
    colors: Vec<u8>,
    index: HashMap<String, usize>,
    pairs: Vec<(usize, usize)>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            names: Vec::new(),
            colors: Vec::new(),
            index: HashMap::new(),
            pairs: Vec::new(),
        }
    }

    fn node(&mut self, name: String, color: u8) -> usize {
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        self.colors.push(color);
        i
    }

    fn edge(&mut self, lower: &str, upper: &str) {
        self.pairs.push((self.index[lower], self.index[upper]));
    }

    fn build(self, name: String) -> ColoredPoset {
        ColoredPoset::from_relation(self.names.len(), &self.pairs, &self.colors, Some(0))
            .and_then(|p| p.with_names(self.names))
            .expect("generated posets are well formed")
            .with_name(name)
    }
}

fn check_params(n: usize, m: usize) -> Result<()> {
    if n < 1 || m < 1 {
        return Err(Error::Param(format!(
            "family parameters must be at least 1 (got n={n}, M={m})"
        )));
    }
    Ok(())
}

/// Adds the z-tower of branch `m` on top of `y:m`.
fn z_tower(b: &mut Builder, n: usize, m: usize) {
    let height = 2 * (m / n);
    for k in 0..=height {
        b.node(format!("z:{m}:{k}"), u8::from(k % 2 == 0));
    }
    b.edge(&format!("y:{m}"), &format!("z:{m}:0"));
    for k in 0..height {
        b.edge(&format!("z:{m}:{k}"), &format!("z:{m}:{}", k + 1));
    }
}

/// Truncation of P_n to branches `0..branches`, plus stubs `w:M`, `x:M`.
pub fn gen_p(n: usize, branches: usize) -> Result<ColoredPoset> {
    check_params(n, branches)?;
    let mut b = Builder::new();
    b.node("bot".into(), 0);
    for m in 0..=branches {
        b.node(format!("w:{m}"), 1);
        b.node(format!("x:{m}"), 0);
        b.edge("bot", &format!("w:{m}"));
        b.edge(&format!("w:{m}"), &format!("x:{m}"));
        if m == branches {
            break;
        }
        b.node(format!("y:{m}"), 0);
        z_tower(&mut b, n, m);
    }
    for m in 0..branches {
        b.edge(&format!("x:{m}"), &format!("y:{m}"));
        b.edge(&format!("x:{}", m + 1), &format!("y:{m}"));
    }
    Ok(b.build(format!("P({n},{branches})")))
}

/// Truncation of Q_n to branches `0..branches`, plus the stub column
/// `x:M:0..x:M:{2n-1}`.
pub fn gen_q(n: usize, branches: usize) -> Result<ColoredPoset> {
    check_params(n, branches)?;
    let top = 2 * n - 1;
    let mut b = Builder::new();
    b.node("bot".into(), 0);
    for m in 0..=branches {
        for k in 0..=top {
            b.node(format!("x:{m}:{k}"), u8::from(k % 2 == 0));
        }
        b.edge("bot", &format!("x:{m}:0"));
        for k in 0..top {
            b.edge(&format!("x:{m}:{k}"), &format!("x:{m}:{}", k + 1));
        }
        if m == branches {
            break;
        }
        b.node(format!("y:{m}"), 0);
        z_tower(&mut b, n, m);
    }
    for m in 0..branches {
        b.edge(&format!("x:{m}:{top}"), &format!("y:{m}"));
        b.edge(&format!("x:{}:{top}", m + 1), &format!("y:{m}"));
    }
    Ok(b.build(format!("Q({n},{branches})")))
}

/// Names accepted by [`fixture`]. `nbotK` works for any K ≥ 1.
pub const FIXTURES: [&str; 13] = [
    "singleton",
    "chain2",
    "chain3",
    "antichain2",
    "vee",
    "wedge",
    "bar",
    "p4",
    "p4_bot",
    "nbot3",
    "vee_host",
    "wedge_host",
    "bar_host",
];

fn plain(n: usize, pairs: &[(usize, usize)], colors: &[u8], names: &[&str]) -> ColoredPoset {
    ColoredPoset::from_relation(n, pairs, colors, None)
        .and_then(|p| p.with_names(names.iter().map(|s| s.to_string()).collect()))
        .expect("fixtures are well formed")
}

pub fn fixture(name: &str) -> Result<ColoredPoset> {
    let p = match name {
        "singleton" => plain(1, &[], &[0], &["bot"]),
        "chain2" => plain(2, &[(0, 1)], &[0, 1], &["bot", "a"]),
        "chain3" => plain(3, &[(0, 1), (1, 2)], &[0, 1, 0], &["bot", "a", "b"]),
        "antichain2" => plain(2, &[], &[0, 0], &["a", "b"]),
        "vee" => Pattern::Vee.poset(),
        "wedge" => Pattern::Wedge.poset(),
        "bar" => Pattern::Bar.poset(),
        "p4" => plain(
            4,
            &[(0, 2), (0, 3), (1, 2), (1, 3)],
            &[0; 4],
            &["0", "1", "2", "3"],
        ),
        "p4_bot" => plain(
            5,
            &[(4, 0), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3)],
            &[0; 5],
            &["0", "1", "2", "3", "bot"],
        ),
        "vee_host" => plain(
            6,
            &[(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)],
            &[0, 1, 0, 1, 0, 1],
            &["bot", "r", "u", "u'", "v", "v'"],
        ),
        "wedge_host" => plain(
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            &[0, 0, 0, 1],
            &["bot", "a", "b", "c"],
        ),
        "bar_host" => plain(3, &[(0, 1), (1, 2)], &[0, 1, 1], &["bot", "a", "b"]),
        other => match other
            .strip_prefix("nbot")
            .and_then(|k| k.parse::<usize>().ok())
        {
            Some(k) if k >= 1 => {
                let pairs: Vec<_> = (1..=k).map(|i| (0, i)).collect();
                let names: Vec<String> = std::iter::once("bot".to_string())
                    .chain((1..=k).map(|i| format!("l{i}")))
                    .collect();
                ColoredPoset::from_relation(k + 1, &pairs, &vec![0; k + 1], Some(0))?
                    .with_names(names)?
            }
            _ => return Err(Error::UnknownFixture(other.to_string())),
        },
    };
    Ok(p.with_name(name))
}

/// Canonical form up to isomorphism: the lexicographically least
/// (order matrix, colors) over all relabelings.
fn canonical(p: &ColoredPoset) -> (Vec<bool>, Vec<u8>) {
    let n = p.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<bool>, Vec<u8>)> = None;
    loop {
        // perm[new] = old
        let key = (
            (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| p.leq(perm[i], perm[j]))
                .collect(),
            perm.iter().map(|&o| p.color(o)).collect(),
        );
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every embeddable poset with at most `max_n` elements, one per
/// isomorphism class, in order of size and then canonical form.
pub fn embeddable_corpus(max_n: usize) -> Result<Vec<ColoredPoset>> {
    if max_n > 5 {
        return Err(Error::Param(format!(
            "corpus enumeration is limited to 5 elements (got {max_n})"
        )));
    }
    let mut out = Vec::new();
    for n in 1..=max_n {
        // Every order has a linear extension, so generating pairs with i < j suffice.
        let slots: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        let mut seen = BTreeSet::new();
        let mut found = Vec::new();
        for rel in 0u32..(1 << slots.len()) {
            let pairs: Vec<_> = (0..slots.len())
                .filter(|&k| rel >> k & 1 == 1)
                .map(|k| slots[k])
                .collect();
            for col in 0u32..(1 << n) {
                let colors: Vec<u8> = (0..n).map(|i| (col >> i & 1) as u8).collect();
                let p = ColoredPoset::from_relation(n, &pairs, &colors, None)?;
                if !is_embeddable(&p).holds {
                    continue;
                }
                let key = canonical(&p);
                if seen.insert(key.clone()) {
                    found.push((key, p));
                }
            }
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        for (k, (_, p)) in found.into_iter().enumerate() {
            let name = format!("e{n}_{k}");
            out.push(p.with_name(name));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::{is_embeddable, str_decr};

    #[test]
    fn p_family_counts() {
        assert_eq!(gen_p(1, 1).unwrap().len(), 7);
        assert_eq!(gen_p(1, 2).unwrap().len(), 13);
        assert_eq!(gen_p(2, 2).unwrap().len(), 11);
    }

    #[test]
    fn q_family_counts() {
        assert_eq!(gen_q(1, 1).unwrap().len(), 7);
        assert_eq!(gen_q(2, 1).unwrap().len(), 11);
    }

    #[test]
    fn parameters_checked() {
        assert!(matches!(gen_p(0, 3), Err(Error::Param(_))));
        assert!(matches!(gen_q(2, 0), Err(Error::Param(_))));
    }

    #[test]
    fn predecessor_and_supremum_examples() {
        let p = gen_p(1, 2).unwrap();
        let i = |s: &str| p.index_of(s).unwrap();
        let expected: crate::FinSet = ["bot", "w:0", "x:0", "w:1", "x:1", "y:0"]
            .iter()
            .map(|s| i(s))
            .collect();
        assert_eq!(p.predecessors(i("y:0")).unwrap(), expected);
        let imm: crate::FinSet = [i("x:0"), i("x:1")].into_iter().collect();
        assert_eq!(p.immediate_predecessors(i("y:0")).unwrap(), imm);
        assert_eq!(p.supremum(&imm).unwrap(), Some(i("y:0")));
        assert!(gen_p(2, 4).unwrap().is_bounded_complete());
    }

    #[test]
    fn q_decreasing_strength_anchor() {
        for n in 1..=5 {
            let q = gen_q(n, 1).unwrap();
            let x = q.index_of(&format!("x:0:{}", 2 * n - 2)).unwrap();
            assert_eq!(str_decr(&q, x).unwrap(), 2 * n);
        }
    }

    #[test]
    fn fixtures_resolve() {
        for name in FIXTURES {
            assert_eq!(fixture(name).unwrap().name(), Some(name));
        }
        assert_eq!(fixture("nbot3").unwrap().len(), 4);
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
        let vee = fixture("vee").unwrap();
        assert_eq!(vee.colors(), &[1, 0, 0]);
    }

    #[test]
    fn failing_hosts_fail_for_the_right_reason() {
        for (name, reason) in [
            ("vee_host", "pattern vee embeds"),
            ("wedge_host", "pattern wedge embeds"),
            ("bar_host", "pattern bar embeds"),
        ] {
            let r = is_embeddable(&fixture(name).unwrap());
            assert_eq!(r.failed_condition.as_deref(), Some(reason), "{name}");
        }
    }

    #[test]
    fn small_corpus() {
        let corpus = embeddable_corpus(4).unwrap();
        let sizes: Vec<usize> = (1..=4)
            .map(|n| corpus.iter().filter(|p| p.len() == n).count())
            .collect();
        assert_eq!(sizes, vec![0, 1, 2, 5]);
    }
}
