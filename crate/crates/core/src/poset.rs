//! Finite 2-colored posets.
//!
//! Elements are dense indices `0..n`. The order is stored as its
//! reflexive-transitive closure, one up-set and one down-set per element,
//! together with the covering relation.

use crate::error::{check_index, Error, Result};
use crate::finset::FinSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredPoset {
    name: Option<String>,
    names: Vec<String>,
    colors: Vec<u8>,
    bottom: Option<usize>,
    /// `up[i]` holds every `j` with `i <= j`.
    up: Vec<FinSet>,
    /// `down[i]` holds every `j` with `j <= i`.
    down: Vec<FinSet>,
    imm_pred: Vec<FinSet>,
    imm_succ: Vec<FinSet>,
}

/// Reflexive-transitive closure of a generating relation, as up-sets.
pub fn closure(n: usize, pairs: &[(usize, usize)]) -> Vec<FinSet> {
    let mut up: Vec<FinSet> = (0..n).map(FinSet::singleton).collect();
    for &(i, j) in pairs {
        up[i].insert(j);
    }
    // Warshall over bit rows.
    for k in 0..n {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                row.union_with(&row_k);
            }
        }
    }
    up
}

impl ColoredPoset {
    /// Builds a poset from a generating relation; the order is its
    /// reflexive-transitive closure. A missing `bottom` is filled in when the
    /// poset has a least element.
    pub fn from_relation(
        n: usize,
        pairs: &[(usize, usize)],
        colors: &[u8],
        bottom: Option<usize>,
    ) -> Result<Self> {
        if colors.len() != n {
            return Err(Error::Arity(format!(
                "{} colors for {} elements",
                colors.len(),
                n
            )));
        }
        if let Some(&c) = colors.iter().find(|&&c| c > 1) {
            return Err(Error::Arity(format!("color {c} is not 0 or 1")));
        }
        for &(i, j) in pairs {
            check_index(i, n)?;
            check_index(j, n)?;
        }
        let up = closure(n, pairs);
        let mut down = vec![FinSet::new(); n];
        for (i, row) in up.iter().enumerate() {
            for j in row {
                if j != i && up[j].contains(i) {
                    return Err(Error::Cycle(i.min(j), i.max(j)));
                }
                down[j].insert(i);
            }
        }
        let least = (0..n).find(|&i| up[i].len() == n);
        let bottom = match bottom {
            Some(b) => {
                check_index(b, n)?;
                if up[b].len() != n {
                    return Err(Error::NotBottom(b));
                }
                Some(b)
            }
            None => least,
        };
        let mut imm_pred = vec![FinSet::new(); n];
        let mut imm_succ = vec![FinSet::new(); n];
        for p in 0..n {
            let mut strict = down[p].clone();
            strict.remove(p);
            let mut covered = FinSet::new();
            for r in &strict {
                let mut below_r = down[r].clone();
                below_r.remove(r);
                covered.union_with(&below_r);
            }
            for q in strict.difference(&covered).iter() {
                imm_pred[p].insert(q);
                imm_succ[q].insert(p);
            }
        }
        Ok(ColoredPoset {
            name: None,
            names: (0..n).map(|i| i.to_string()).collect(),
            colors: colors.to_vec(),
            bottom,
            up,
            down,
            imm_pred,
            imm_succ,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::Arity(format!(
                "{} names for {} elements",
                names.len(),
                self.len()
            )));
        }
        self.names = names;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn color(&self, p: usize) -> u8 {
        self.colors[p]
    }

    pub fn bottom(&self) -> Option<usize> {
        self.bottom
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_name(&self, p: usize) -> &str {
        &self.names[p]
    }

    /// Resolves a display name, falling back to a numeric index.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .or_else(|| name.parse::<usize>().ok().filter(|&i| i < self.len()))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    pub fn up_set(&self, p: usize) -> &FinSet {
        &self.up[p]
    }

    pub fn down_set(&self, p: usize) -> &FinSet {
        &self.down[p]
    }

    pub fn imm_preds(&self, p: usize) -> &FinSet {
        &self.imm_pred[p]
    }

    pub fn imm_succs(&self, p: usize) -> &FinSet {
        &self.imm_succ[p]
    }

    pub fn is_maximal(&self, p: usize) -> bool {
        self.up[p].len() == 1
    }

    pub fn is_minimal(&self, p: usize) -> bool {
        self.down[p].len() == 1
    }

    /// `{q : q <= p}`, including `p`.
    pub fn predecessors(&self, p: usize) -> Result<FinSet> {
        check_index(p, self.len())?;
        Ok(self.down[p].clone())
    }

    pub fn immediate_predecessors(&self, p: usize) -> Result<FinSet> {
        check_index(p, self.len())?;
        Ok(self.imm_pred[p].clone())
    }

    pub fn immediate_successors(&self, p: usize) -> Result<FinSet> {
        check_index(p, self.len())?;
        Ok(self.imm_succ[p].clone())
    }

    /// Covering pairs `(lower, upper)` in index order.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|p| self.imm_succ[p].iter().map(move |q| (p, q)))
            .collect()
    }

    /// Common upper bounds of `s`; every element when `s` is empty.
    pub fn upper_bounds(&self, s: &FinSet) -> FinSet {
        let mut ub = FinSet::full(self.len());
        for x in s {
            ub.intersect_with(&self.up[x]);
        }
        ub
    }

    /// Least upper bound of `s`, if the upper bounds have a unique minimal
    /// element. On a finite poset a unique minimal upper bound is the least one.
    pub fn supremum(&self, s: &FinSet) -> Result<Option<usize>> {
        if let Some(m) = s.max_element() {
            check_index(m, self.len())?;
        }
        if s.is_empty() {
            return Ok(self.bottom);
        }
        Ok(self.least_of(&self.upper_bounds(s)))
    }

    /// The unique minimal element of `set`, if there is exactly one.
    pub(crate) fn least_of(&self, set: &FinSet) -> Option<usize> {
        let mut minimal = set
            .iter()
            .filter(|&u| self.down[u].intersection(set).len() == 1);
        let first = minimal.next()?;
        if minimal.next().is_some() {
            None
        } else {
            Some(first)
        }
    }

    /// Pairwise criterion: every bounded pair has a supremum. Returns the
    /// first failing pair in lexicographic index order.
    pub fn bounded_completeness_witness(&self) -> Option<(usize, usize)> {
        let n = self.len();
        for a in 0..n {
            for b in a + 1..n {
                let pair = FinSet::from_iter([a, b]);
                let ub = self.upper_bounds(&pair);
                if !ub.is_empty() && self.least_of(&ub).is_none() {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_bounded_complete(&self) -> bool {
        self.bounded_completeness_witness().is_none()
    }

    /// Checks every non-empty subset directly. Exponential; used as an
    /// independent oracle for [`Self::is_bounded_complete`] on small posets.
    pub fn bounded_completeness_exhaustive(&self) -> Result<Option<FinSet>> {
        let n = self.len();
        if n > 20 {
            return Err(Error::UniverseTooLarge(n, 20));
        }
        for mask in 1u64..(1u64 << n) {
            let s = FinSet::from_mask(mask);
            let ub = self.upper_bounds(&s);
            if !ub.is_empty() && self.least_of(&ub).is_none() {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }

    /// Linear extension chosen by Kahn's algorithm with the smallest ready
    /// index first.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut remaining: Vec<usize> = (0..n).map(|p| self.imm_pred[p].len()).collect();
        let mut ready: std::collections::BTreeSet<usize> =
            (0..n).filter(|&p| remaining[p] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(p) = ready.pop_first() {
            order.push(p);
            for q in &self.imm_succ[p] {
                remaining[q] -= 1;
                if remaining[q] == 0 {
                    ready.insert(q);
                }
            }
        }
        order
    }

    /// Decides whether the image of `self` under `inj` is a down-set of
    /// `target`. The map must be an injective, color-preserving order
    /// embedding.
    pub fn is_ideal_of(&self, target: &ColoredPoset, inj: &[usize]) -> Result<bool> {
        if inj.len() != self.len() {
            return Err(Error::NotEmbedding(format!(
                "map has {} entries for {} elements",
                inj.len(),
                self.len()
            )));
        }
        let mut image = FinSet::new();
        for (p, &q) in inj.iter().enumerate() {
            check_index(q, target.len())?;
            if !image.insert(q) {
                return Err(Error::NotEmbedding(format!("element {q} is hit twice")));
            }
            if self.color(p) != target.color(q) {
                return Err(Error::NotEmbedding(format!("color differs at {p}")));
            }
        }
        for a in 0..self.len() {
            for b in 0..self.len() {
                if self.leq(a, b) != target.leq(inj[a], inj[b]) {
                    return Err(Error::NotEmbedding(format!("order differs on ({a}, {b})")));
                }
            }
        }
        Ok(inj.iter().all(|&q| target.down[q].is_subset(&image)))
    }

    /// Identification of elements by display name, as used for truncations
    /// of the same infinite family.
    pub fn inclusion_by_names(&self, target: &ColoredPoset) -> Option<Vec<usize>> {
        self.names
            .iter()
            .map(|n| target.names.iter().position(|m| m == n))
            .collect()
    }

    /// Relabels elements: element `i` of the result is element `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<ColoredPoset> {
        let n = self.len();
        let mut inv = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            check_index(p, n)?;
            inv[p] = i;
        }
        if perm.len() != n || inv.contains(&usize::MAX) {
            return Err(Error::Arity("permutation is not a bijection".into()));
        }
        let pairs: Vec<(usize, usize)> = self
            .hasse_edges()
            .into_iter()
            .map(|(a, b)| (inv[a], inv[b]))
            .collect();
        let colors: Vec<u8> = perm.iter().map(|&p| self.colors[p]).collect();
        let names = perm.iter().map(|&p| self.names[p].clone()).collect();
        let mut out = ColoredPoset::from_relation(n, &pairs, &colors, None)?.with_names(names)?;
        out.name = self.name.clone();
        Ok(out)
    }

    /// Generating pairs that reproduce the order (its covering relation).
    pub fn generating_pairs(&self) -> Vec<(usize, usize)> {
        self.hasse_edges()
    }
}
