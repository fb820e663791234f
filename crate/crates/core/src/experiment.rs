//! Batch drivers comparing the first members of the P and Q families.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{gen_p, gen_q};
use crate::hom::{find_hom, Mode, SearchOptions, SearchOutcome, Verdict};
use crate::poset::ColoredPoset;

/// One ordered search of the experiment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Cell {
    Found { nodes: u64 },
    Exhausted { nodes: u64 },
    BudgetExceeded { budget: u64 },
}

impl Cell {
    fn known(&self) -> Option<bool> {
        match self {
            Cell::Found { .. } => Some(true),
            Cell::Exhausted { .. } => Some(false),
            Cell::BudgetExceeded { .. } => None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub posets: Vec<String>,
    pub sizes: Vec<usize>,
    /// `searches[i][j]` is the search from poset `i` into poset `j`.
    pub searches: Vec<Vec<Cell>>,
    /// `None` where a budget cutoff leaves the verdict open.
    pub verdicts: Vec<Vec<Option<Verdict>>>,
    pub expected: Vec<Vec<Verdict>>,
    pub pass: bool,
}

impl ExperimentReport {
    pub fn to_table(&self) -> String {
        let width = self
            .posets
            .iter()
            .map(|s| s.chars().count())
            .max()
            .unwrap_or(1);
        let mut out = format!("{:width$}", "");
        for name in &self.posets {
            out.push_str(&format!(" {name:>width$}"));
        }
        out.push('\n');
        for (i, name) in self.posets.iter().enumerate() {
            out.push_str(&format!("{name:width$}"));
            for v in &self.verdicts[i] {
                out.push_str(&format!(" {:>width$}", v.map_or("?", Verdict::symbol)));
            }
            out.push('\n');
        }
        out.push_str(if self.pass {
            "pattern: as expected\n"
        } else {
            "pattern: NOT as expected\n"
        });
        out
    }
}

fn run(
    experiment: &str,
    posets: Vec<ColoredPoset>,
    expected: Vec<Vec<Verdict>>,
    opts: &SearchOptions,
    threads: usize,
) -> Result<ExperimentReport> {
    let n = posets.len();
    let cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let search = |&(i, j): &(usize, usize)| -> Result<Cell> {
        match find_hom(&posets[i], &posets[j], Mode::Plain, opts) {
            Ok(SearchOutcome::Found { nodes, .. }) => Ok(Cell::Found { nodes }),
            Ok(SearchOutcome::Exhausted { nodes }) => Ok(Cell::Exhausted { nodes }),
            Err(Error::BudgetExceeded(budget)) => Ok(Cell::BudgetExceeded { budget }),
            Err(e) => Err(e),
        }
    };
    let flat: Vec<Cell> = if threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Param(e.to_string()))?;
        pool.install(|| cells.par_iter().map(search).collect::<Result<_>>())?
    } else {
        cells.iter().map(search).collect::<Result<_>>()?
    };
    let searches: Vec<Vec<Cell>> = flat.chunks(n.max(1)).map(<[Cell]>::to_vec).collect();
    let verdicts: Vec<Vec<Option<Verdict>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    Some(Verdict::from_directions(
                        searches[i][j].known()?,
                        searches[j][i].known()?,
                    ))
                })
                .collect()
        })
        .collect();
    let pass = (0..n).all(|i| (0..n).all(|j| verdicts[i][j] == Some(expected[i][j])));
    Ok(ExperimentReport {
        experiment: experiment.to_string(),
        posets: posets
            .iter()
            .map(|p| p.name().unwrap_or("?").to_string())
            .collect(),
        sizes: posets.iter().map(ColoredPoset::len).collect(),
        searches,
        verdicts,
        expected,
        pass,
    })
}

/// Compares `P(i, branches − step·(i−1))` for `i = 1..=nmax`, expecting a
/// strictly decreasing chain.
pub fn experiment_illfounded(
    nmax: usize,
    branches: usize,
    step: usize,
    opts: &SearchOptions,
    threads: usize,
) -> Result<ExperimentReport> {
    if nmax < 1 {
        return Err(Error::Param("nmax must be at least 1".into()));
    }
    let sizes: Vec<usize> = (0..nmax)
        .map(|i| {
            branches
                .checked_sub(step * i)
                .filter(|&m| m >= 1)
                .ok_or_else(|| Error::Param(format!("branch count for n={} drops below 1", i + 1)))
        })
        .collect::<Result<_>>()?;
    let posets = (0..nmax)
        .map(|i| gen_p(i + 1, sizes[i]))
        .collect::<Result<Vec<_>>>()?;
    let expected = (0..nmax)
        .map(|i| {
            (0..nmax)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => Verdict::Equivalent,
                    std::cmp::Ordering::Less => Verdict::StrictlyGreater,
                    std::cmp::Ordering::Greater => Verdict::StrictlyLess,
                })
                .collect()
        })
        .collect();
    run("illfounded", posets, expected, opts, threads)
}

/// Compares `Q(i, branches)` for `i = 1..=nmax`, expecting pairwise
/// incomparability off the diagonal.
pub fn experiment_antichain(
    nmax: usize,
    branches: usize,
    opts: &SearchOptions,
    threads: usize,
) -> Result<ExperimentReport> {
    if nmax < 1 {
        return Err(Error::Param("nmax must be at least 1".into()));
    }
    let posets = (1..=nmax)
        .map(|i| gen_q(i, branches))
        .collect::<Result<Vec<_>>>()?;
    let expected = (0..nmax)
        .map(|i| {
            (0..nmax)
                .map(|j| {
                    if i == j {
                        Verdict::Equivalent
                    } else {
                        Verdict::Incomparable
                    }
                })
                .collect()
        })
        .collect();
    run("antichain", posets, expected, opts, threads)
}
