//! Replayable move traces in JSON-lines form.

use std::collections::BTreeSet;

use serde_json::{json, Map, Value};

use super::{apply, Correspondence, Move, MoveError, MoveKind};
use crate::diagram::{parse, CrossingId, Diagram, DiagramError, Mark, Sign};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: Move,
    pub corr: Correspondence,
    pub result: Diagram,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveTrace {
    pub start: Diagram,
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TraceError {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Diagram { line: usize, source: DiagramError },
    #[error("line {line}: {source}")]
    Move { line: usize, source: MoveError },
    #[error("line {line}: replay does not reproduce the recorded {what}")]
    Mismatch { line: usize, what: &'static str },
}

impl MoveTrace {
    pub fn new(start: Diagram) -> Self {
        Self { start, steps: Vec::new() }
    }

    pub fn last(&self) -> &Diagram {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    /// Applies `mv` to the current diagram and records the step.
    pub fn push(&mut self, mv: Move) -> Result<&TraceStep, MoveError> {
        let (result, corr) = apply(self.last(), &mv)?;
        self.steps.push(TraceStep { mv, corr, result });
        Ok(self.steps.last().expect("just pushed"))
    }

    /// Diagram `i`: 0 is the start, `i` the result of step `i - 1`.
    pub fn diagram(&self, i: usize) -> &Diagram {
        if i == 0 {
            &self.start
        } else {
            &self.steps[i - 1].result
        }
    }

    pub fn diagrams(&self) -> impl Iterator<Item = &Diagram> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = json!({ "start": self.start.to_string() }).to_string();
        for s in &self.steps {
            out.push('\n');
            out.push_str(&step_json(s).to_string());
        }
        out.push('\n');
        out
    }

    /// Parses and replays a trace; every recorded result and correspondence
    /// must match the replay exactly.
    pub fn from_jsonl(text: &str) -> Result<Self, TraceError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (k, first) = lines.next().ok_or(TraceError::Format { line: 0, msg: "empty trace".into() })?;
        let fmt = |line: usize, msg: String| TraceError::Format { line, msg };
        let head: Value = serde_json::from_str(first).map_err(|e| fmt(k + 1, e.to_string()))?;
        let start_text = head.get("start").and_then(Value::as_str).ok_or_else(|| fmt(k + 1, "missing \"start\"".into()))?;
        let start = parse(start_text).map_err(|source| TraceError::Diagram { line: k + 1, source })?;
        let mut trace = MoveTrace::new(start);
        for (k, raw) in lines {
            let line = k + 1;
            let v: Value = serde_json::from_str(raw).map_err(|e| fmt(line, e.to_string()))?;
            let mv = move_from_json(v.get("move").ok_or_else(|| fmt(line, "missing \"move\"".into()))?)
                .map_err(|msg| fmt(line, msg))?;
            let recorded = v.get("result").and_then(Value::as_str).ok_or_else(|| fmt(line, "missing \"result\"".into()))?;
            let step = trace.push(mv).map_err(|source| TraceError::Move { line, source })?;
            if step.result.to_string() != recorded {
                return Err(TraceError::Mismatch { line, what: "result" });
            }
            let expect = step_json(step);
            for key in ["surviving", "created", "destroyed", "r3_roles", "m4_target"] {
                if v.get(key) != expect.get(key) {
                    return Err(TraceError::Mismatch { line, what: "correspondence" });
                }
            }
        }
        Ok(trace)
    }
}

fn ids_json(s: &BTreeSet<CrossingId>) -> Value {
    Value::from(s.iter().copied().collect::<Vec<_>>())
}

fn step_json(s: &TraceStep) -> Value {
    let surviving: Map<String, Value> = s.corr.surviving.iter().map(|(a, b)| (a.to_string(), Value::from(*b))).collect();
    let mut obj = Map::new();
    obj.insert("move".into(), MoveRecord::from(&s.mv).to_json());
    obj.insert("surviving".into(), Value::Object(surviving));
    obj.insert("created".into(), ids_json(&s.corr.created));
    obj.insert("destroyed".into(), ids_json(&s.corr.destroyed));
    if let Some(r) = s.corr.r3_roles {
        obj.insert("r3_roles".into(), Value::from(r.to_vec()));
    }
    if let Some(c) = s.corr.m4_target {
        obj.insert("m4_target".into(), Value::from(c));
    }
    obj.insert("result".into(), Value::from(s.result.to_string()));
    Value::Object(obj)
}

/// The `{kind, site, params}` view of a move.
pub(crate) struct MoveRecord {
    pub kind: MoveKind,
    pub site: Vec<u64>,
    pub params: Map<String, Value>,
}

impl MoveRecord {
    fn to_json(&self) -> Value {
        json!({ "kind": self.kind.name(), "site": self.site, "params": self.params })
    }
}

fn sign_json(s: Sign) -> Value {
    Value::from(s.value())
}

impl From<&Move> for MoveRecord {
    fn from(m: &Move) -> Self {
        let mut params = Map::new();
        let site: Vec<u64> = match m {
            Move::R1Add { pos, id, over_first, sign, trailing } => {
                params.insert("id".into(), Value::from(*id));
                params.insert("over_first".into(), Value::from(*over_first));
                params.insert("sign".into(), sign_json(*sign));
                params.insert("trailing".into(), Value::from(trailing.clone()));
                vec![*pos as u64]
            }
            Move::R1Remove { pos } | Move::JcancelRemove { pos } => vec![*pos as u64],
            Move::R2Add { over_pos, under_pos, ids, first_sign, parallel, over_trailing, under_trailing } => {
                params.insert("ids".into(), Value::from(ids.to_vec()));
                params.insert("first_sign".into(), sign_json(*first_sign));
                params.insert("parallel".into(), Value::from(*parallel));
                params.insert("over_trailing".into(), Value::from(over_trailing.clone()));
                params.insert("under_trailing".into(), Value::from(under_trailing.clone()));
                vec![*over_pos as u64, *under_pos as u64]
            }
            Move::R2Remove { over_pos, under_pos } => vec![*over_pos as u64, *under_pos as u64],
            Move::R3 { pairs } => pairs.iter().map(|&p| p as u64).collect(),
            Move::M4Prime { crossing } => vec![u64::from(*crossing)],
            Move::JcancelAdd { pos, first, trailing } => {
                params.insert("first".into(), sign_json(*first));
                params.insert("trailing".into(), Value::from(trailing.clone()));
                vec![*pos as u64]
            }
            Move::Jslide { crossing, forward } => {
                params.insert("forward".into(), Value::from(*forward));
                vec![u64::from(*crossing)]
            }
        };
        MoveRecord { kind: m.kind(), site, params }
    }
}

/// Reads a move from its `{kind, site, params}` object.
pub fn move_from_json(v: &Value) -> Result<Move, String> {
    let kind_name = v.get("kind").and_then(Value::as_str).ok_or("move lacks \"kind\"")?;
    let kind = MoveKind::from_name(kind_name).ok_or_else(|| format!("unknown move kind {kind_name:?}"))?;
    let site: Vec<u64> = v
        .get("site")
        .and_then(Value::as_array)
        .ok_or("move lacks \"site\"")?
        .iter()
        .map(|x| x.as_u64().ok_or_else(|| format!("bad site entry {x}")))
        .collect::<Result<_, _>>()?;
    let empty = Map::new();
    let params = v.get("params").and_then(Value::as_object).unwrap_or(&empty);
    move_from_parts(kind, &site, params)
}

pub fn move_from_parts(kind: MoveKind, site: &[u64], params: &Map<String, Value>) -> Result<Move, String> {
    let want = match kind {
        MoveKind::R2Add | MoveKind::R2Remove => 2,
        MoveKind::R3 => 3,
        _ => 1,
    };
    if site.len() != want {
        return Err(format!("{kind} takes {want} site entries, got {}", site.len()));
    }
    let pos = |i: usize| site[i] as usize;
    let id = |i: usize| CrossingId::try_from(site[i]).map_err(|_| format!("crossing id {} out of range", site[i]));
    let get = |key: &str| params.get(key).ok_or_else(|| format!("{kind} needs param {key:?}"));
    let sign = |key: &str| -> Result<Sign, String> {
        get(key)?.as_i64().and_then(Sign::from_value).ok_or_else(|| format!("param {key:?} must be 1 or -1"))
    };
    let flag = |key: &str| -> Result<bool, String> { get(key)?.as_bool().ok_or_else(|| format!("param {key:?} must be a boolean")) };
    let mark = |key: &str| -> Result<Mark, String> {
        match params.get(key) {
            None => Ok(Vec::new()),
            Some(Value::Array(xs)) => xs.iter().map(|x| x.as_i64().ok_or_else(|| format!("bad mark entry {x}"))).collect(),
            Some(_) => Err(format!("param {key:?} must be an integer array")),
        }
    };
    let cid = |x: &Value| x.as_u64().and_then(|x| CrossingId::try_from(x).ok()).ok_or_else(|| format!("bad crossing id {x}"));
    Ok(match kind {
        MoveKind::R1Add => Move::R1Add {
            pos: pos(0),
            id: cid(get("id")?)?,
            over_first: flag("over_first")?,
            sign: sign("sign")?,
            trailing: mark("trailing")?,
        },
        MoveKind::R1Remove => Move::R1Remove { pos: pos(0) },
        MoveKind::R2Add => {
            let ids = get("ids")?.as_array().filter(|a| a.len() == 2).ok_or("param \"ids\" must hold two ids")?;
            Move::R2Add {
                over_pos: pos(0),
                under_pos: pos(1),
                ids: [cid(&ids[0])?, cid(&ids[1])?],
                first_sign: sign("first_sign")?,
                parallel: flag("parallel")?,
                over_trailing: mark("over_trailing")?,
                under_trailing: mark("under_trailing")?,
            }
        }
        MoveKind::R2Remove => Move::R2Remove { over_pos: pos(0), under_pos: pos(1) },
        MoveKind::R3 => Move::R3 { pairs: [pos(0), pos(1), pos(2)] },
        MoveKind::M4Prime => Move::M4Prime { crossing: id(0)? },
        MoveKind::JcancelAdd => Move::JcancelAdd { pos: pos(0), first: sign("first")?, trailing: mark("trailing")? },
        MoveKind::JcancelRemove => Move::JcancelRemove { pos: pos(0) },
        MoveKind::Jslide => Move::Jslide { crossing: id(0)?, forward: flag("forward")? },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::list_moves;

    #[test]
    fn jsonl_round_trip() {
        let mut t = MoveTrace::new(parse("genus 1\ncode O1+ U1+\nmark 1 1 -1").unwrap());
        t.push(Move::M4Prime { crossing: 1 }).unwrap();
        t.push(Move::R1Add { pos: 5, id: 2, over_first: false, sign: Sign::Minus, trailing: vec![2, 0] }).unwrap();
        let text = t.to_jsonl();
        assert!(text.starts_with("{\"start\":\"genus 1\\ncode O1+ U1+\\nmark 1 1 -1\"}\n"));
        assert!(text.contains("\"m4_target\":1"));
        assert_eq!(MoveTrace::from_jsonl(&text).unwrap(), t);
    }

    #[test]
    fn every_listed_move_serializes() {
        let d = parse("genus 1\ncode J+ O1+ O2- J+ U1+ U2- J-\nmark 0 1 0").unwrap();
        for m in list_moves(&d) {
            let rec = MoveRecord::from(&m).to_json();
            assert_eq!(move_from_json(&rec).unwrap(), m);
        }
    }

    #[test]
    fn tampered_result_rejected() {
        let mut t = MoveTrace::new(parse("genus 0\ncode O1+ U1+").unwrap());
        t.push(Move::M4Prime { crossing: 1 }).unwrap();
        let text = t.to_jsonl().replace("J+ U1- J- O1-", "J+ U1- J- O1+");
        assert!(matches!(MoveTrace::from_jsonl(&text), Err(TraceError::Mismatch { what: "result", .. })));
        let text = t.to_jsonl().replace("\"m4_target\":1", "\"m4_target\":2");
        assert!(matches!(MoveTrace::from_jsonl(&text), Err(TraceError::Mismatch { what: "correspondence", .. })));
    }
}
