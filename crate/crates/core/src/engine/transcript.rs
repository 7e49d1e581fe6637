use std::fmt::Write as _;

use crate::graphs::{ProductGraph, Vertex};

use super::EngineError;

/// Round number, non-pass cop moves and robber move of one transcript line.
type ParsedRound = (usize, Vec<(usize, Vertex)>, Option<Vertex>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Captured { round: usize, by_cop: usize },
    Survived { rounds_played: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: usize,
    /// Cops that left their vertex this round; absent cops passed.
    pub cop_moves: Vec<(usize, Vertex)>,
    /// `None` when the cop phase already captured.
    pub robber_move: Option<Vertex>,
}

/// Full move history of one game.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub graph: String,
    pub cops: usize,
    pub seed: u64,
    pub cop_start: Vec<Vertex>,
    pub robber_start: Vertex,
    pub rounds: Vec<RoundRecord>,
    pub outcome: Outcome,
}

impl Transcript {
    /// Rounds played, not counting placement.
    pub fn length(&self) -> usize {
        match self.outcome {
            Outcome::Captured { round, .. } => round,
            Outcome::Survived { rounds_played } => rounds_played,
        }
    }

    pub fn is_captured(&self) -> bool {
        matches!(self.outcome, Outcome::Captured { .. })
    }

    /// Cop positions after every cop phase, starting with the placement.
    pub fn cop_positions(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![self.cop_start.clone()];
        let mut cur = self.cop_start.clone();
        for r in &self.rounds {
            for (i, v) in &r.cop_moves {
                cur[*i] = v.clone();
            }
            out.push(cur.clone());
        }
        out
    }

    /// Robber position before each round's cop phase (index 0 is the placement).
    pub fn robber_positions(&self) -> Vec<Vertex> {
        let mut out = vec![self.robber_start.clone()];
        for r in &self.rounds {
            if let Some(v) = &r.robber_move {
                out.push(v.clone());
            }
        }
        out
    }

    /// Re-referees the transcript: every move must be a pass or an edge and the
    /// recorded outcome must be the first coincidence of a cop and the robber.
    pub fn replay(&self, graph: &ProductGraph) -> Result<(), EngineError> {
        let bad = |line: usize, detail: String| EngineError::Transcript { line, detail };
        if self.cop_start.len() != self.cops {
            return Err(bad(0, format!("{} start positions for {} cops", self.cop_start.len(), self.cops)));
        }
        let all_valid = self.cop_start.iter().chain(std::iter::once(&self.robber_start)).all(|v| graph.contains(v));
        if !all_valid {
            return Err(bad(0, "placement outside the graph".into()));
        }
        let mut cops = self.cop_start.clone();
        let mut robber = self.robber_start.clone();
        let hit = |cops: &[Vertex], r: &Vertex| cops.iter().position(|c| c == r);
        let mut captured = hit(&cops, &robber).map(|c| (0, c));
        for (idx, rec) in self.rounds.iter().enumerate() {
            let line = idx + 1;
            if captured.is_some() {
                return Err(bad(line, "moves recorded after capture".into()));
            }
            if rec.round != line {
                return Err(bad(line, format!("round {} out of sequence", rec.round)));
            }
            for (i, v) in &rec.cop_moves {
                let from = cops.get(*i).ok_or_else(|| bad(line, format!("no cop {i}")))?;
                if !graph.contains(v) || !graph.is_move(from, v) {
                    return Err(bad(line, format!("illegal move by cop {i}")));
                }
                cops[*i] = v.clone();
            }
            if let Some(c) = hit(&cops, &robber) {
                captured = Some((rec.round, c));
                if rec.robber_move.is_some() {
                    return Err(bad(line, "robber moved after being captured".into()));
                }
                continue;
            }
            let Some(next) = &rec.robber_move else {
                return Err(bad(line, "robber move missing".into()));
            };
            if !graph.contains(next) || !graph.is_move(&robber, next) {
                return Err(bad(line, "illegal robber move".into()));
            }
            robber = next.clone();
            captured = hit(&cops, &robber).map(|c| (rec.round, c));
        }
        let expected = match captured {
            Some((round, by_cop)) => Outcome::Captured { round, by_cop },
            None => Outcome::Survived { rounds_played: self.rounds.len() },
        };
        if expected != self.outcome {
            return Err(bad(
                self.rounds.len() + 1,
                format!("outcome {:?} but replay gives {expected:?}", self.outcome),
            ));
        }
        Ok(())
    }

    /// Line-oriented text form:
    ///
    /// ```text
    /// graph=Q3 k=2 seed=0
    /// 0: C 0->000 1->000 ; R ->111
    /// 1: C 0->100 ; R ->011
    /// 2: C 0->110 1->001
    /// captured round=2 cop=0
    /// ```
    pub fn to_text(&self, graph: &ProductGraph) -> String {
        let mut out = String::new();
        let v = |x: &Vertex| graph.format_vertex(x);
        let _ = writeln!(out, "graph={} k={} seed={}", self.graph, self.cops, self.seed);
        let _ = write!(out, "0: C");
        for (i, c) in self.cop_start.iter().enumerate() {
            let _ = write!(out, " {i}->{}", v(c));
        }
        let _ = writeln!(out, " ; R ->{}", v(&self.robber_start));
        for rec in &self.rounds {
            let _ = write!(out, "{}: C", rec.round);
            for (i, c) in &rec.cop_moves {
                let _ = write!(out, " {i}->{}", v(c));
            }
            if let Some(r) = &rec.robber_move {
                let _ = write!(out, " ; R ->{}", v(r));
            }
            out.push('\n');
        }
        match self.outcome {
            Outcome::Captured { round, by_cop } => {
                let _ = writeln!(out, "captured round={round} cop={by_cop}");
            }
            Outcome::Survived { rounds_played } => {
                let _ = writeln!(out, "survived rounds={rounds_played}");
            }
        }
        out
    }

    pub fn parse(text: &str, graph: &ProductGraph) -> Result<Self, EngineError> {
        let bad = |line: usize, detail: &str| EngineError::Transcript { line, detail: detail.to_string() };
        let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
        if lines.len() < 3 {
            return Err(bad(0, "need header, placement and outcome lines"));
        }
        let header: Vec<(&str, &str)> = lines[0].split_whitespace().filter_map(|kv| kv.split_once('=')).collect();
        let field = |key: &str| {
            header.iter().find(|(k, _)| *k == key).map(|(_, v)| *v).ok_or_else(|| bad(0, "incomplete header"))
        };
        let graph_name = field("graph")?.to_string();
        let cops: usize = field("k")?.parse().map_err(|_| bad(0, "bad k"))?;
        let seed: u64 = field("seed")?.parse().map_err(|_| bad(0, "bad seed"))?;

        let parse_round = |no: usize, line: &str| -> Result<ParsedRound, EngineError> {
            let (round, rest) = line.split_once(':').ok_or_else(|| bad(no, "missing `r:`"))?;
            let round: usize = round.trim().parse().map_err(|_| bad(no, "bad round number"))?;
            let (cop_part, robber_part) = match rest.split_once(';') {
                Some((c, r)) => (c, Some(r)),
                None => (rest, None),
            };
            let mut words = cop_part.split_whitespace();
            if words.next() != Some("C") {
                return Err(bad(no, "expected `C`"));
            }
            let moves = words
                .map(|w| {
                    let (i, v) = w.split_once("->").ok_or_else(|| bad(no, "expected `i->v`"))?;
                    let i: usize = i.parse().map_err(|_| bad(no, "bad cop index"))?;
                    let v = graph.parse_vertex(v).map_err(|e| bad(no, &e.to_string()))?;
                    Ok((i, v))
                })
                .collect::<Result<Vec<_>, EngineError>>()?;
            let robber = robber_part
                .map(|r| {
                    let v = r.trim().strip_prefix("R ->").ok_or_else(|| bad(no, "expected `R ->v`"))?;
                    graph.parse_vertex(v.trim()).map_err(|e| bad(no, &e.to_string()))
                })
                .transpose()?;
            Ok((round, moves, robber))
        };

        let (r0, start, robber_start) = parse_round(1, lines[1])?;
        if r0 != 0 {
            return Err(bad(1, "first move line must be round 0"));
        }
        let robber_start = robber_start.ok_or_else(|| bad(1, "robber placement missing"))?;
        let mut cop_start = vec![None; cops];
        for (i, v) in start {
            *cop_start.get_mut(i).ok_or_else(|| bad(1, "cop index out of range"))? = Some(v);
        }
        let cop_start =
            cop_start.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| bad(1, "some cop has no placement"))?;

        let last = lines.len() - 1;
        let mut rounds = Vec::new();
        for (no, line) in lines.iter().enumerate().take(last).skip(2) {
            let (round, cop_moves, robber_move) = parse_round(no, line)?;
            rounds.push(RoundRecord { round, cop_moves, robber_move });
        }
        let footer: Vec<(&str, &str)> = lines[last].split_whitespace().filter_map(|kv| kv.split_once('=')).collect();
        let num = |key: &str| -> Result<usize, EngineError> {
            footer
                .iter()
                .find(|(k, _)| *k == key)
                .and_then(|(_, v)| v.parse().ok())
                .ok_or_else(|| bad(last, "bad outcome line"))
        };
        let outcome = if lines[last].starts_with("captured") {
            Outcome::Captured { round: num("round")?, by_cop: num("cop")? }
        } else if lines[last].starts_with("survived") {
            Outcome::Survived { rounds_played: num("rounds")? }
        } else {
            return Err(bad(last, "expected `captured` or `survived`"));
        };
        Ok(Self { graph: graph_name, cops, seed, cop_start, robber_start, rounds, outcome })
    }
}
