//! Line-by-line verification of relation files.

use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::imset::verify_relation;
use crate::relation_lang::{parse_relation_text, CIRelation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "VALID")]
    Valid,
    #[serde(rename = "INVALID")]
    Invalid,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineVerdict {
    pub line: usize,
    pub text: String,
    pub verdict: Verdict,
    /// why the line is invalid
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// side imsets (JSON subset maps), only for invalid lines that parsed
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub side_imsets: Vec<std::collections::BTreeMap<String, i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recognized: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub n: u8,
    pub total: usize,
    pub valid: usize,
    pub invalid: usize,
    pub lines: Vec<LineVerdict>,
}

impl VerifySummary {
    pub fn invalid_lines(&self) -> Vec<usize> {
        self.lines.iter().filter(|l| l.verdict == Verdict::Invalid).map(|l| l.line).collect()
    }
}

/// Order-insensitive identity of a relation: sorted sides of sorted terms.
fn relation_key(r: &CIRelation) -> (Vec<Vec<String>>, Option<String>) {
    let mut sides: Vec<Vec<String>> = r
        .sides()
        .iter()
        .map(|s| {
            let mut t: Vec<String> = s.terms().iter().map(|x| x.to_string()).collect();
            t.sort();
            t
        })
        .collect();
    sides.sort();
    (sides, r.target().map(|t| t.to_string()))
}

/// Verdict per non-comment line. A line is INVALID when it fails to parse,
/// when its sides differ as imsets, when the declared target is not the
/// statement the sides sum to, or when it repeats an earlier line.
pub fn verify_text(text: &str, n: u8) -> VerifySummary {
    let file = parse_relation_text(text);
    let mut lines = Vec::new();
    let mut seen: Vec<((Vec<Vec<String>>, Option<String>), usize)> = Vec::new();
    for (lineno, raw) in &file.lines {
        let invalid = |reason: String| LineVerdict {
            line: *lineno,
            text: raw.clone(),
            verdict: Verdict::Invalid,
            reason: Some(reason),
            side_imsets: Vec::new(),
            recognized: None,
        };
        if let Some((_, e)) = file.errors.iter().find(|(l, _)| l == lineno) {
            lines.push(invalid(format!("does not parse: {e}")));
            continue;
        }
        let rel = &file.relations.iter().find(|(l, _)| l == lineno).expect("parsed line").1;
        let report = match verify_relation(rel, n) {
            Ok(r) => r,
            Err(e) => {
                lines.push(invalid(e.to_string()));
                continue;
            }
        };
        let key = relation_key(rel);
        let dup = seen.iter().find(|(k, _)| *k == key).map(|(_, l)| *l);
        seen.push((key, *lineno));
        let recognized = report.recognized.map(|s| s.to_string());
        let reason = if !report.all_sides_equal() {
            Some("sides have different imsets".to_string())
        } else if report.target_matches == Some(false) {
            Some(format!(
                "sides sum to {} but the declared target is {}",
                recognized.as_deref().unwrap_or("a non-semi-elementary imset"),
                report.declared.map(|d| d.to_string()).unwrap_or_default()
            ))
        } else {
            dup.map(|l| format!("repeats line {l}"))
        };
        match reason {
            None => lines.push(LineVerdict {
                line: *lineno,
                text: raw.clone(),
                verdict: Verdict::Valid,
                reason: None,
                side_imsets: Vec::new(),
                recognized,
            }),
            Some(reason) => {
                let mut v = invalid(reason);
                v.side_imsets = report.side_imsets.iter().map(|u| u.to_json_map()).collect();
                v.recognized = recognized;
                lines.push(v);
            }
        }
    }
    let invalid = lines.iter().filter(|l| l.verdict == Verdict::Invalid).count();
    VerifySummary { n, total: lines.len(), valid: lines.len() - invalid, invalid, lines }
}

pub fn verify_file(path: impl AsRef<Path>, n: u8) -> Result<VerifySummary> {
    let text = std::fs::read_to_string(path)?;
    Ok(verify_text(&text, n))
}

pub fn render_text(s: &VerifySummary) -> String {
    let mut out = String::new();
    for l in &s.lines {
        match l.verdict {
            Verdict::Valid => out.push_str(&format!("line {:>3}: VALID\n", l.line)),
            Verdict::Invalid => {
                out.push_str(&format!("line {:>3}: INVALID  {}\n", l.line, l.reason.as_deref().unwrap_or("")));
                out.push_str(&format!("          {}\n", l.text));
                for (i, u) in l.side_imsets.iter().enumerate() {
                    let terms: Vec<String> = u.iter().map(|(k, v)| format!("{}:{v}", if k.is_empty() { "∅" } else { k })).collect();
                    out.push_str(&format!("          side {}: {{{}}}\n", i + 1, terms.join(", ")));
                }
            }
        }
    }
    out.push_str(&format!("summary: {} lines, {} VALID, {} INVALID\n", s.total, s.valid, s.invalid));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_comments() {
        let s = verify_text("# nothing\n\n", 3);
        assert_eq!((s.total, s.valid, s.invalid), (0, 0, 0));
    }

    #[test]
    fn eq1_forms() {
        let bad = verify_text("[1 _||_ 2|3 + 1 _||_ 2|e] = [1 _||_ 3|2 + 1 _||_ 2|e] = [1 _||_ 23|e]", 3);
        assert_eq!(bad.invalid_lines(), vec![1]);
        assert_eq!(bad.lines[0].side_imsets.len(), 2);
        let good = verify_text("[1 _||_ 2|3 + 1 _||_ 3|e] = [1 _||_ 3|2 + 1 _||_ 2|e] = [1 _||_ 23|e]", 3);
        assert_eq!(good.invalid, 0);
        assert_eq!(good.lines[0].recognized.as_deref(), Some("1 _||_ 23 | e"));
    }

    #[test]
    fn duplicates_and_parse_errors() {
        let line = "[1 _||_ 2|3 + 1 _||_ 3|e] = [1 _||_ 3|2 + 1 _||_ 2|e] = [1 _||_ 23|e]";
        let s = verify_text(&format!("{line}\n[1 _||_ 3|e + 1 _||_ 2|3] = [1 _||_ 2|e + 1 _||_ 3|2] = [1 _||_ 23|e]\n[1 _||_ 1|e] = [2 _||_ 3|e]\n"), 3);
        assert_eq!(s.invalid_lines(), vec![2, 3]);
        assert!(s.lines[1].reason.as_ref().unwrap().contains("repeats line 1"));
        assert!(s.lines[2].reason.as_ref().unwrap().contains("parse"));
    }
}
