//! `wadge`: command-line driver for 2-colored poset comparison and the
//! Scott-domain reductions they induce.
//!
//! Exit codes: 0 found/true, 1 none/false, 2 error.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use wadge_core::experiment::{experiment_antichain, experiment_illfounded};
use wadge_core::game::{self, Opponent, Player, Strategy};
use wadge_core::hom::DEFAULT_BUDGET;
use wadge_core::io::{poset_from_json, poset_to_json, to_dot};
use wadge_core::scott::{
    alternation_rank_sparse, brute_force_reduction_exists, MAX_LATTICE_UNIVERSE,
};
use wadge_core::{
    alternation_rank, build_a, build_reduction, compare, extract_hom, find_hom, fixture, gen_p,
    gen_q, is_approximable, is_embeddable, is_finite_branching, is_shrub, matrix, verify_hom,
    verify_reduction, ColoredPoset, Homomorphism, Mode, MonotoneMap, SearchOptions, SearchOutcome,
    SetFamily,
};

const THREADS_ENV: &str = "WADGE_POSET_THREADS";

#[derive(Parser)]
#[command(
    name = "wadge",
    version,
    about = "Compare finite 2-colored posets and the sets they represent"
)]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Human-readable output where available.
    #[arg(long, global = true)]
    pretty: bool,
    /// Search-node budget per homomorphism query.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Reserved; no command uses randomness.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

/// Posets are given as a JSON file path, `gen:P:<n>:<M>`, `gen:Q:<n>:<M>`
/// or `fixture:<name>`.
#[derive(Subcommand)]
enum Command {
    /// Check a class membership and print the report.
    Validate {
        poset: String,
        #[arg(long, value_enum, default_value_t = Class::Embeddable)]
        class: Class,
    },
    /// Search for a homomorphism from P to Q.
    Hom {
        p: String,
        q: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        /// Disable strength-based candidate filtering.
        #[arg(long)]
        no_strength_pruning: bool,
        /// Workers for the root fan-out (default: 1).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Check a homomorphism file against P and Q.
    VerifyHom { p: String, q: String, hom: PathBuf },
    /// Classify P against Q under the homomorphism preorder.
    Compare { p: String, q: String },
    /// Pairwise comparison table.
    Matrix {
        #[arg(required = true)]
        posets: Vec<String>,
        /// Worker count (default: $WADGE_POSET_THREADS, else all cores).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the set family represented by an embeddable poset.
    BuildSet { poset: String },
    /// Build the reduction induced by a homomorphism (searched if not given).
    Reduce {
        p: String,
        q: String,
        #[arg(long)]
        hom: Option<PathBuf>,
    },
    /// Check a monotone map file as a reduction from A_P to A_Q.
    VerifyReduction { p: String, q: String, map: PathBuf },
    /// Recover a homomorphism from a reduction file.
    ExtractHom { p: String, q: String, map: PathBuf },
    /// Alternation rank of a set family (family JSON or poset).
    Rank { input: String },
    /// Approximability of a set family (family JSON or poset).
    Approx {
        input: String,
        #[arg(long)]
        complement: bool,
    },
    /// Generate a family truncation.
    Gen {
        #[arg(value_enum)]
        family: FamilyArg,
        n: usize,
        #[arg(long)]
        branches: usize,
    },
    /// Print a named fixture.
    Fixture {
        /// One of: singleton, chain2, chain3, antichain2, vee, wedge, bar,
        /// p4, p4_bot, nbotK (K ≥ 1), vee_host, wedge_host, bar_host.
        name: String,
    },
    /// Play the reduction game interactively on stdin/stdout.
    Play {
        p: String,
        q: String,
        /// Which player the human takes.
        #[arg(long = "as", value_enum, default_value_t = Role::I)]
        role: Role,
        /// Strategy file ({"map": [...]}) for the machine as II; searched if absent.
        #[arg(long)]
        strategy: Option<PathBuf>,
        /// Element names the machine plays as I before passing.
        #[arg(long, num_args = 1..)]
        script: Vec<String>,
    },
    /// Graphviz DOT of the Hasse diagram.
    ExportDot { poset: String },
    /// Exhaustive search for a reduction between small posets.
    Oracle {
        p: String,
        q: String,
        /// Allow every subset of Q's universe as a value.
        #[arg(long)]
        unrestricted: bool,
    },
    /// Run a family comparison experiment.
    Experiment {
        #[arg(value_enum)]
        kind: ExperimentKind,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
        #[arg(long, default_value_t = 10)]
        branches: usize,
        /// Branches dropped per step of n (illfounded only).
        #[arg(long, default_value_t = 2)]
        step: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    Shrub,
    Embeddable,
    FiniteBranching,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Injective,
    ImmPred,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Injective => Mode::Injective,
            ModeArg::ImmPred => Mode::ImmPred,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Q", alias = "q")]
    Q,
}

#[derive(Clone, Copy, ValueEnum)]
enum Role {
    #[value(name = "I", alias = "i")]
    I,
    #[value(name = "II", alias = "ii")]
    Ii,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Illfounded,
    Antichain,
}

/// What a command prints and how it exits.
struct Output {
    json: Json,
    text: Option<String>,
    success: bool,
}

impl Output {
    fn json(json: Json, success: bool) -> Self {
        Output {
            json,
            text: None,
            success,
        }
    }
}

fn load_poset(spec: &str) -> anyhow::Result<ColoredPoset> {
    if let Some(rest) = spec.strip_prefix("gen:") {
        let parts: Vec<&str> = rest.split(':').collect();
        let [family, n, m] = parts[..] else {
            bail!("expected gen:<P|Q>:<n>:<M>, got `{spec}`");
        };
        let n: usize = n.parse().with_context(|| format!("bad n in `{spec}`"))?;
        let m: usize = m.parse().with_context(|| format!("bad M in `{spec}`"))?;
        return Ok(match family {
            "P" | "p" => gen_p(n, m)?,
            "Q" | "q" => gen_q(n, m)?,
            other => bail!("unknown family `{other}`"),
        });
    }
    if let Some(name) = spec.strip_prefix("fixture:") {
        return Ok(fixture(name)?);
    }
    let text = fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    poset_from_json(&text).with_context(|| format!("parsing {spec}"))
}

fn load_json(path: &PathBuf) -> anyhow::Result<Json> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_family(spec: &str) -> anyhow::Result<SetFamily> {
    if !spec.starts_with("gen:") && !spec.starts_with("fixture:") {
        let json = load_json(&PathBuf::from(spec))?;
        if json.get("members").is_some() {
            return Ok(SetFamily::from_json(json)?);
        }
    }
    Ok(build_a(&load_poset(spec)?)?)
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n >= 1)
}

fn default_threads() -> usize {
    threads_from_env()
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, usize::from))
}

fn outcome_json(p: &ColoredPoset, q: &ColoredPoset, o: &SearchOutcome) -> Json {
    match o {
        SearchOutcome::Found { hom, nodes } => json!({
            "found": true,
            "nodes": nodes,
            "hom": hom,
            "named": hom.map.iter().enumerate()
                .map(|(i, &j)| (p.element_name(i).to_string(), Json::from(q.element_name(j))))
                .collect::<serde_json::Map<_, _>>(),
        }),
        SearchOutcome::Exhausted { nodes } => {
            json!({ "found": false, "exhausted": true, "nodes": nodes })
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let opts = SearchOptions {
        budget: Some(cli.budget),
        ..SearchOptions::default()
    };
    Ok(match &cli.command {
        Command::Validate { poset, class } => {
            let p = load_poset(poset)?;
            let report = match class {
                Class::Shrub => is_shrub(&p),
                Class::Embeddable => is_embeddable(&p),
                Class::FiniteBranching => is_finite_branching(&p),
            };
            let text = match &report.failed_condition {
                None => format!("{}: holds", report.class),
                Some(c) => format!("{}: fails ({c})", report.class),
            };
            Output {
                success: report.holds,
                json: serde_json::to_value(&report)?,
                text: Some(text),
            }
        }
        Command::Hom {
            p,
            q,
            mode,
            no_strength_pruning,
            threads,
        } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let opts = SearchOptions {
                strength_pruning: !no_strength_pruning,
                threads: threads.unwrap_or(1),
                ..opts
            };
            let out = find_hom(&p, &q, (*mode).into(), &opts)?;
            Output::json(outcome_json(&p, &q, &out), out.is_found())
        }
        Command::VerifyHom { p, q, hom } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let h: Homomorphism = serde_json::from_value(load_json(hom)?)?;
            let check = verify_hom(&p, &q, &h);
            Output::json(serde_json::to_value(&check)?, check.ok)
        }
        Command::Compare { p, q } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let v = compare(&p, &q, &opts)?;
            let json = json!({
                "verdict": v.verdict.to_string(),
                "forward": outcome_json(&p, &q, &v.forward),
                "backward": outcome_json(&q, &p, &v.backward),
            });
            Output {
                json,
                text: Some(v.verdict.to_string()),
                success: true,
            }
        }
        Command::Matrix { posets, threads } => {
            let ps = posets
                .iter()
                .map(|s| load_poset(s))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let m = matrix(&ps, &opts, threads.unwrap_or_else(default_threads))?;
            Output {
                json: m.to_json(),
                text: Some(m.to_table()),
                success: true,
            }
        }
        Command::BuildSet { poset } => {
            let a = build_a(&load_poset(poset)?)?;
            Output::json(a.to_json(), true)
        }
        Command::Reduce { p, q, hom } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let h = match hom {
                Some(path) => serde_json::from_value(load_json(path)?)?,
                None => match find_hom(&p, &q, Mode::Plain, &opts)? {
                    SearchOutcome::Found { hom, .. } => hom,
                    SearchOutcome::Exhausted { nodes } => {
                        return Ok(Output::json(
                            json!({ "found": false, "exhausted": true, "nodes": nodes }),
                            false,
                        ))
                    }
                },
            };
            let f = build_reduction(&p, &q, &h)?;
            Output::json(f.to_json(), true)
        }
        Command::VerifyReduction { p, q, map } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let f = MonotoneMap::from_json(load_json(map)?)?;
            let check = verify_reduction(&p, &q, &f)?;
            Output::json(serde_json::to_value(&check)?, check.ok)
        }
        Command::ExtractHom { p, q, map } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let f = MonotoneMap::from_json(load_json(map)?)?;
            let h = extract_hom(&p, &q, &f)?;
            let ok = verify_hom(&p, &q, &h).ok;
            Output::json(json!({ "hom": h, "verified": ok }), ok)
        }
        Command::Rank { input } => {
            let a = load_family(input)?;
            let (rank, method) = if a.universe() <= MAX_LATTICE_UNIVERSE {
                (alternation_rank(&a)?, "lattice")
            } else {
                (alternation_rank_sparse(&a), "member_chains")
            };
            Output {
                json: json!({ "rank": rank, "universe": a.universe(), "method": method }),
                text: Some(rank.to_string()),
                success: true,
            }
        }
        Command::Approx { input, complement } => {
            let a = load_family(input)?;
            let r = is_approximable(&a, *complement);
            Output::json(serde_json::to_value(&r)?, r.holds)
        }
        Command::Gen {
            family,
            n,
            branches,
        } => {
            let p = match family {
                FamilyArg::P => gen_p(*n, *branches)?,
                FamilyArg::Q => gen_q(*n, *branches)?,
            };
            Output::json(poset_to_json(&p), true)
        }
        Command::Fixture { name } => Output::json(poset_to_json(&fixture(name)?), true),
        Command::ExportDot { poset } => {
            let dot = to_dot(&load_poset(poset)?);
            Output {
                json: Json::String(dot.clone()),
                text: Some(dot),
                success: true,
            }
        }
        Command::Oracle { p, q, unrestricted } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            match brute_force_reduction_exists(&p, &q, Some(cli.budget), *unrestricted)? {
                Some(f) => Output::json(json!({ "found": true, "map": f.to_json() }), true),
                None => Output::json(json!({ "found": false }), false),
            }
        }
        Command::Experiment {
            kind,
            nmax,
            branches,
            step,
            threads,
        } => {
            let threads = threads.unwrap_or_else(default_threads);
            let r = match kind {
                ExperimentKind::Illfounded => {
                    experiment_illfounded(*nmax, *branches, *step, &opts, threads)?
                }
                ExperimentKind::Antichain => {
                    experiment_antichain(*nmax, *branches, &opts, threads)?
                }
            };
            Output {
                text: Some(r.to_table()),
                json: serde_json::to_value(&r)?,
                success: r.pass,
            }
        }
        Command::Play {
            p,
            q,
            role,
            strategy,
            script,
        } => {
            let (p, q) = (load_poset(p)?, load_poset(q)?);
            let opponent = match role {
                Role::I => {
                    let tau = match strategy {
                        Some(path) => {
                            let raw: Strategy = serde_json::from_value(load_json(path)?)?;
                            Strategy::new(raw.map, &p, &q)?
                        }
                        None => {
                            let hom = find_hom(&p, &q, Mode::Plain, &opts)?.into_hom();
                            // Without a homomorphism II answers with the bottom.
                            let map = hom
                                .map(|h| h.map)
                                .unwrap_or_else(|| vec![q.bottom().unwrap_or(0); p.len()]);
                            Strategy::new(map, &p, &q)?
                        }
                    };
                    Opponent::Strategy(tau)
                }
                Role::Ii => {
                    let moves = script
                        .iter()
                        .map(|s| {
                            p.index_of(s)
                                .ok_or_else(|| anyhow!("unknown element `{s}` of P"))
                        })
                        .collect::<anyhow::Result<Vec<_>>>()?;
                    let moves = if moves.is_empty() {
                        p.topological_order()
                    } else {
                        moves
                    };
                    Opponent::Script(moves)
                }
            };
            let stdin = io::stdin();
            let winner = game::repl(
                &p,
                &q,
                &opponent,
                BufReader::new(stdin.lock()),
                io::stderr(),
            )?;
            let verdict = winner.map(|w| match w {
                Player::I => "I",
                Player::II => "II",
            });
            Output::json(json!({ "winner": verdict }), winner.is_some())
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let rendered = match (&out.text, cli.pretty) {
                (Some(text), true) => text.clone(),
                _ => serde_json::to_string_pretty(&out.json).expect("JSON values serialize") + "\n",
            };
            let written = match &cli.out {
                Some(path) => fs::write(path, &rendered)
                    .with_context(|| format!("writing {}", path.display())),
                None => io::stdout()
                    .write_all(rendered.as_bytes())
                    .context("writing stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if out.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
