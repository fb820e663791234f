//! The reduction game between two colored posets.
//!
//! Player I picks elements of P, player II answers with elements of Q. I
//! ends the run by passing (the run is then constant from that point on).
//! II wins iff the answers preserve colors and every order relation among
//! I's moves.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{check_index, Error, Result};
use crate::poset::ColoredPoset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    AwaitingI,
    AwaitingII,
    Finished,
}

impl Phase {
    fn name(self) -> &'static str {
        match self {
            Phase::AwaitingI => "awaiting_I",
            Phase::AwaitingII => "awaiting_II",
            Phase::Finished => "finished",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Player {
    I,
    II,
}

#[derive(Clone, Debug)]
pub struct GameState<'a> {
    p: &'a ColoredPoset,
    q: &'a ColoredPoset,
    rounds: Vec<(usize, usize)>,
    pending: Option<usize>,
    phase: Phase,
}

impl<'a> GameState<'a> {
    pub fn new(p: &'a ColoredPoset, q: &'a ColoredPoset) -> Self {
        GameState {
            p,
            q,
            rounds: Vec::new(),
            pending: None,
            phase: Phase::AwaitingI,
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn rounds(&self) -> &[(usize, usize)] {
        &self.rounds
    }

    /// I's move of the current round, if II has yet to answer.
    pub fn pending(&self) -> Option<usize> {
        self.pending
    }

    pub fn passed(&self) -> bool {
        self.phase == Phase::Finished
    }

    fn expect(&self, phase: Phase) -> Result<()> {
        if self.phase == phase {
            Ok(())
        } else {
            Err(Error::Phase(self.phase.name()))
        }
    }

    pub fn move_i(mut self, p: usize) -> Result<Self> {
        self.expect(Phase::AwaitingI)?;
        check_index(p, self.p.len())?;
        self.pending = Some(p);
        self.phase = Phase::AwaitingII;
        Ok(self)
    }

    pub fn move_ii(mut self, q: usize) -> Result<Self> {
        self.expect(Phase::AwaitingII)?;
        check_index(q, self.q.len())?;
        let p = self
            .pending
            .take()
            .expect("a pending move in phase awaiting_II");
        self.rounds.push((p, q));
        self.phase = Phase::AwaitingI;
        Ok(self)
    }

    /// I repeats the last move forever, ending the run.
    pub fn pass_i(mut self) -> Result<Self> {
        self.expect(Phase::AwaitingI)?;
        if self.rounds.is_empty() {
            return Err(Error::Phase("awaiting_I (no completed round to repeat)"));
        }
        self.phase = Phase::Finished;
        Ok(self)
    }

    pub fn judge(&self) -> Result<Player> {
        if self.phase != Phase::Finished {
            return Err(Error::NotFinished);
        }
        Ok(judge_rounds(self.p, self.q, &self.rounds))
    }

    pub fn to_record(&self) -> RunRecord {
        RunRecord {
            p: self.p.name().unwrap_or("P").to_string(),
            q: self.q.name().unwrap_or("Q").to_string(),
            rounds: self
                .rounds
                .iter()
                .map(|&(a, b)| {
                    [
                        self.p.element_name(a).to_string(),
                        self.q.element_name(b).to_string(),
                    ]
                })
                .collect(),
            passed: self.passed(),
        }
    }
}

/// The winning condition for II on a finished run.
pub fn judge_rounds(p: &ColoredPoset, q: &ColoredPoset, rounds: &[(usize, usize)]) -> Player {
    let colors = rounds.iter().all(|&(a, b)| p.color(a) == q.color(b));
    let order = rounds
        .iter()
        .all(|&(a, b)| rounds.iter().all(|&(c, d)| !p.leq(a, c) || q.leq(b, d)));
    if colors && order {
        Player::II
    } else {
        Player::I
    }
}

/// Serialized run: element names per round.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub rounds: Vec<[String; 2]>,
    pub passed: bool,
}

impl RunRecord {
    /// Replays the run through the state machine.
    pub fn replay<'a>(&self, p: &'a ColoredPoset, q: &'a ColoredPoset) -> Result<GameState<'a>> {
        let mut s = GameState::new(p, q);
        for [a, b] in &self.rounds {
            let a = p
                .index_of(a)
                .ok_or_else(|| Error::UnknownElement(a.clone()))?;
            let b = q
                .index_of(b)
                .ok_or_else(|| Error::UnknownElement(b.clone()))?;
            s = s.move_i(a)?.move_ii(b)?;
        }
        if self.passed {
            s = s.pass_i()?;
        }
        Ok(s)
    }
}

/// A positional strategy for II: a total map from P to Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Strategy {
    pub map: Vec<usize>,
}

impl Strategy {
    pub fn new(map: Vec<usize>, p: &ColoredPoset, q: &ColoredPoset) -> Result<Self> {
        if map.len() != p.len() {
            return Err(Error::Strategy(format!(
                "defined on {} of {} elements",
                map.len(),
                p.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= q.len()) {
            return Err(Error::Strategy(format!(
                "answer {bad} is not an element of the target"
            )));
        }
        Ok(Strategy { map })
    }

    pub fn respond(&self, p: usize) -> usize {
        self.map[p]
    }
}

/// Plays the script for I against `tau`, then passes.
pub fn play_vs_strategy<'a>(
    p: &'a ColoredPoset,
    q: &'a ColoredPoset,
    tau: &Strategy,
    script: &[usize],
) -> Result<GameState<'a>> {
    let mut s = GameState::new(p, q);
    for &a in script {
        s = s.move_i(a)?;
        s = s.move_ii(tau.respond(a))?;
    }
    s.pass_i()
}

/// Searches all I-scripts of length 1..=`max_len` for one that beats `tau`
/// and returns a shortest one, lexicographically first among those.
pub fn refuting_script(
    p: &ColoredPoset,
    q: &ColoredPoset,
    tau: &Strategy,
    max_len: usize,
) -> Option<Vec<usize>> {
    // Depth-first search below `len`, reporting a losing run of exactly `len` moves.
    fn go(
        p: &ColoredPoset,
        q: &ColoredPoset,
        tau: &Strategy,
        len: usize,
        script: &mut Vec<usize>,
    ) -> bool {
        for a in 0..p.len() {
            let b = tau.respond(a);
            // The new round must agree with itself and with every earlier one.
            let ok = p.color(a) == q.color(b)
                && script.iter().all(|&c| {
                    let d = tau.respond(c);
                    (!p.leq(a, c) || q.leq(b, d)) && (!p.leq(c, a) || q.leq(d, b))
                });
            if ok == (script.len() + 1 < len) {
                script.push(a);
                if !ok || go(p, q, tau, len, script) {
                    return true;
                }
                script.pop();
            }
        }
        false
    }
    (1..=max_len).find_map(|len| {
        let mut script = Vec::new();
        go(p, q, tau, len, &mut script).then_some(script)
    })
}

/// Enumerates every total map `P → Q` in lexicographic order and returns
/// the first one that no I-script of length at most `max_len` beats.
pub fn winning_strategy_exhaustive(
    p: &ColoredPoset,
    q: &ColoredPoset,
    max_len: usize,
) -> Option<Strategy> {
    if q.is_empty() {
        return p.is_empty().then(|| Strategy { map: Vec::new() });
    }
    let mut map = vec![0; p.len()];
    loop {
        let tau = Strategy { map: map.clone() };
        if refuting_script(p, q, &tau, max_len).is_none() {
            return Some(tau);
        }
        // Next map in lexicographic order.
        let mut i = p.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            map[i] += 1;
            if map[i] < q.len() {
                break;
            }
            map[i] = 0;
        }
    }
}

/// Which side the human plays in [`repl`].
#[derive(Clone, Debug)]
pub enum Opponent {
    /// The human plays I against this strategy.
    Strategy(Strategy),
    /// The human plays II; the machine plays this script for I and passes.
    Script(Vec<usize>),
}

const HELP: &str = "commands: move <node>, pass, moves, show, help, quit";

fn show(out: &mut impl Write, s: &GameState<'_>) -> std::io::Result<()> {
    if s.rounds().is_empty() {
        writeln!(out, "no rounds yet")?;
    }
    for (i, &(a, b)) in s.rounds().iter().enumerate() {
        writeln!(
            out,
            "round {}: I {} / II {}",
            i + 1,
            s.p.element_name(a),
            s.q.element_name(b)
        )?;
    }
    if let Some(a) = s.pending() {
        writeln!(out, "I played {}", s.p.element_name(a))?;
    }
    Ok(())
}

fn list_moves(out: &mut impl Write, poset: &ColoredPoset) -> std::io::Result<()> {
    let names: Vec<String> = (0..poset.len())
        .map(|i| format!("{}({})", poset.element_name(i), poset.color(i)))
        .collect();
    writeln!(out, "legal moves: {}", names.join(" "))
}

/// Interactive session over generic input and output. Returns the winner,
/// or `None` when the session is quit or input ends before a verdict.
pub fn repl<R: BufRead, W: Write>(
    p: &ColoredPoset,
    q: &ColoredPoset,
    opponent: &Opponent,
    input: R,
    mut out: W,
) -> Result<Option<Player>> {
    let io = |e: std::io::Error| Error::Invalid(e.to_string());
    let mut state = GameState::new(p, q);
    let mut script = match opponent {
        Opponent::Script(s) => s.clone().into_iter(),
        Opponent::Strategy(_) => Vec::new().into_iter(),
    };
    let human = match opponent {
        Opponent::Strategy(_) => Player::I,
        Opponent::Script(_) => Player::II,
    };
    writeln!(out, "you play {human:?}. {HELP}").map_err(io)?;
    let mut lines = input.lines();
    loop {
        if human == Player::II && state.phase() == Phase::AwaitingI {
            match script.next() {
                Some(a) => {
                    state = state.move_i(a)?;
                    writeln!(out, "I plays {}", p.element_name(a)).map_err(io)?;
                }
                None if !state.rounds().is_empty() => {
                    state = state.pass_i()?;
                    writeln!(out, "I passes").map_err(io)?;
                }
                None => return Err(Error::Invalid("empty script for I".into())),
            }
        }
        if state.phase() == Phase::Finished {
            let winner = state.judge()?;
            writeln!(out, "winner: {winner:?}").map_err(io)?;
            return Ok(Some(winner));
        }
        write!(out, "> ").map_err(io)?;
        out.flush().map_err(io)?;
        let Some(line) = lines.next() else {
            return Ok(None);
        };
        let line = line.map_err(io)?;
        let mut words = line.split_whitespace();
        match (words.next(), words.next()) {
            (Some("quit"), _) => {
                writeln!(out, "aborted").map_err(io)?;
                return Ok(None);
            }
            (Some("help"), _) | (None, _) => writeln!(out, "{HELP}").map_err(io)?,
            (Some("show"), _) => show(&mut out, &state).map_err(io)?,
            (Some("moves"), _) => {
                list_moves(&mut out, if human == Player::I { p } else { q }).map_err(io)?
            }
            (Some("pass"), _) if human == Player::I => match state.clone().pass_i() {
                Ok(s) => state = s,
                Err(e) => writeln!(out, "{e}").map_err(io)?,
            },
            (Some("move"), Some(name)) => {
                let poset = if human == Player::I { p } else { q };
                let Some(x) = poset.index_of(name) else {
                    writeln!(out, "unknown node `{name}`").map_err(io)?;
                    continue;
                };
                if let Opponent::Strategy(tau) = opponent {
                    let answer = tau.respond(x);
                    state = state.move_i(x)?.move_ii(answer)?;
                    writeln!(out, "II answers {}", q.element_name(answer)).map_err(io)?;
                } else {
                    state = state.move_ii(x)?;
                }
            }
            _ => writeln!(out, "unrecognized command. {HELP}").map_err(io)?,
        }
    }
}
