//! Line-oriented text format.
//!
//! ```text
//! # comment
//! genus 1
//! code O1+ U1+ J- J+
//! mark 0 1 0
//! ```

use std::collections::BTreeMap;
use std::str::FromStr;

use super::{CrossingId, Diagram, DiagramError, Mark, Role, Sign, Symbol};

impl FromStr for Symbol {
    type Err = String;

    fn from_str(tok: &str) -> Result<Self, String> {
        let sign_of = |c: char| match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        };
        let mut chars = tok.chars();
        let head = chars.next().ok_or("empty symbol")?;
        let tail = chars.as_str();
        let last = tail.chars().last().ok_or_else(|| format!("symbol {tok:?} lacks a sign"))?;
        let sign = sign_of(last).ok_or_else(|| format!("symbol {tok:?} must end with + or -"))?;
        let body = &tail[..tail.len() - 1];
        match head {
            'J' if body.is_empty() => Ok(Symbol::Jump(sign)),
            'O' | 'U' => {
                if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(format!("bad crossing id in {tok:?}"));
                }
                let id: CrossingId = body.parse().map_err(|_| format!("crossing id out of range in {tok:?}"))?;
                if id == 0 {
                    return Err(format!("crossing ids must be positive: {tok:?}"));
                }
                let role = if head == 'O' { Role::Over } else { Role::Under };
                Ok(Symbol::Passage { id, role, sign })
            }
            _ => Err(format!("unknown symbol {tok:?}")),
        }
    }
}

pub fn parse(text: &str) -> Result<Diagram, DiagramError> {
    let syntax = |line: usize, msg: String| DiagramError::Syntax { line, msg };
    let mut genus: Option<usize> = None;
    let mut code: Option<Vec<Symbol>> = None;
    let mut marks: BTreeMap<usize, Mark> = BTreeMap::new();

    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let keyword = tokens.next().expect("nonempty line");
        if genus.is_none() && keyword != "genus" {
            return Err(syntax(line, "first line must be `genus <g>`".into()));
        }
        match keyword {
            "genus" => {
                if genus.is_some() {
                    return Err(syntax(line, "duplicate genus line".into()));
                }
                let value = tokens.next().ok_or_else(|| syntax(line, "missing genus value".into()))?;
                let g = value.parse().map_err(|_| syntax(line, format!("bad genus {value:?}")))?;
                if tokens.next().is_some() {
                    return Err(syntax(line, "trailing tokens after genus".into()));
                }
                genus = Some(g);
            }
            "code" => {
                if code.is_some() {
                    return Err(syntax(line, "duplicate code line".into()));
                }
                let symbols = tokens.map(|t| t.parse::<Symbol>().map_err(|e| syntax(line, e))).collect::<Result<_, _>>()?;
                code = Some(symbols);
            }
            "mark" => {
                let edge_tok = tokens.next().ok_or_else(|| syntax(line, "missing edge index".into()))?;
                let edge: usize = edge_tok.parse().map_err(|_| syntax(line, format!("bad edge index {edge_tok:?}")))?;
                let vector: Mark = tokens
                    .map(|t| t.parse::<i64>().map_err(|_| syntax(line, format!("bad mark entry {t:?}"))))
                    .collect::<Result<_, _>>()?;
                if marks.insert(edge, vector).is_some() {
                    return Err(DiagramError::Mark(format!("edge {edge} marked twice")));
                }
            }
            other => return Err(syntax(line, format!("unknown keyword {other:?}"))),
        }
    }

    let genus = genus.ok_or_else(|| syntax(0, "missing `genus` line".into()))?;
    let code = code.ok_or_else(|| syntax(0, "missing `code` line".into()))?;
    let g2 = 2 * genus;
    if let Some((e, m)) = marks.iter().find(|(_, m)| m.len() != g2) {
        return Err(DiagramError::Mark(format!("edge {e}: expected {g2} entries, found {}", m.len())));
    }
    Diagram::new(genus, code, marks)
}

/// Canonical text; zero marks are omitted and there is no trailing newline.
pub fn serialize(d: &Diagram) -> String {
    let mut out = format!("genus {}\ncode", d.genus());
    for s in d.code() {
        out.push(' ');
        out.push_str(&s.to_string());
    }
    for (e, m) in d.marks().iter().enumerate() {
        if m.iter().any(|&x| x != 0) {
            out.push_str(&format!("\nmark {e}"));
            for x in m {
                out.push_str(&format!(" {x}"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let d = parse("genus 0\ncode J+ J+").unwrap();
        assert_eq!(d.code(), &[Symbol::Jump(Sign::Plus), Symbol::Jump(Sign::Plus)]);
        assert_eq!(d.edge_count(), 2);
        assert_eq!(serialize(&d), "genus 0\ncode J+ J+");

        let e = parse("genus 0\ncode").unwrap();
        assert!(e.is_empty());
        assert_eq!(e.edge_count(), 1);
        assert_eq!(serialize(&e), "genus 0\ncode");

        let k = parse("genus 1\ncode O1+ U1+\nmark 0 1 0").unwrap();
        assert_eq!(k.mark(0), &vec![1, 0]);
        assert_eq!(k.mark(1), &vec![0, 0]);
        assert_eq!(serialize(&k), "genus 1\ncode O1+ U1+\nmark 0 1 0");
    }

    #[test]
    fn comments_blank_lines_and_zero_marks() {
        let text = "# kink\n\ngenus 1\n  code O1+ U1+  \n# edge marks\nmark 1 0 0\nmark 0 -2 3\n";
        let d = parse(text).unwrap();
        assert_eq!(serialize(&d), "genus 1\ncode O1+ U1+\nmark 0 -2 3");
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "code J+",
            "genus x\ncode",
            "genus 0",
            "genus 0\ncode X1+",
            "genus 0\ncode O1",
            "genus 0\ncode O0+ U0+",
            "genus 0\ncode J",
            "genus 0\ncode J2+",
            "genus 0\ncode Oa+ Ua+",
            "genus 0\ncode\ncode",
            "genus 0\ngenus 0\ncode",
            "genus 0\ncode\nmark x",
            "genus 0\ncode\nfoo",
        ] {
            assert!(matches!(parse(bad), Err(DiagramError::Syntax { .. })), "{bad:?}");
        }
    }

    #[test]
    fn structure_and_mark_errors() {
        assert!(matches!(parse("genus 0\ncode O1+"), Err(DiagramError::Structure(_))));
        assert!(matches!(parse("genus 0\ncode O1+ O1+"), Err(DiagramError::Structure(_))));
        assert!(matches!(parse("genus 0\ncode O1+ U1-"), Err(DiagramError::Structure(_))));
        assert!(matches!(parse("genus 0\ncode O1+ U1+ O1+ U1+"), Err(DiagramError::Structure(_))));
        assert!(matches!(parse("genus 1\ncode O1+ U1+\nmark 2 1 0"), Err(DiagramError::Mark(_))));
        assert!(matches!(parse("genus 1\ncode O1+ U1+\nmark 0 1"), Err(DiagramError::Mark(_))));
        assert!(matches!(parse("genus 1\ncode\nmark 0 1 0\nmark 0 1 0"), Err(DiagramError::Mark(_))));
    }
}
