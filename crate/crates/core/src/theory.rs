//! Propositional domain theories for the DNA tasks, reduced to rule-mention
//! counts per sequence position.
//!
//! Rules use the `@<position> "<pattern>"` notation of the original theories:
//! the pattern starts at the given position and runs rightwards, skipping the
//! nonexistent position 0. `x` and `-` are don't-care symbols and do not count
//! as antecedents. Every other pattern letter (including IUPAC classes such as
//! `Y` or `M`) counts once for its position in that rule.

use std::sync::OnceLock;

use regex::Regex;

use crate::error::{Error, Result};
use crate::fri::{fri_from_rule_counts, FriVector, RuleCountTable};

/// Labels of a sequence window, e.g. -50..-1, +1..+7 for promoters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PositionFrame {
    pub first: i32,
    pub len: usize,
}

impl PositionFrame {
    pub const PROMOTER: PositionFrame = PositionFrame {
        first: -50,
        len: 57,
    };
    pub const SPLICE: PositionFrame = PositionFrame {
        first: -30,
        len: 60,
    };

    /// Zero-based index of a position label, if inside the window.
    pub fn index_of(&self, label: i32) -> Option<usize> {
        if label == 0 || label < self.first {
            return None;
        }
        let offset = if label < 0 || self.first > 0 {
            label - self.first
        } else {
            label - self.first - 1
        };
        usize::try_from(offset).ok().filter(|&i| i < self.len)
    }

    pub fn label_of(&self, index: usize) -> i32 {
        let label = self.first + index as i32;
        if self.first < 0 && label >= 0 {
            label + 1
        } else {
            label
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: String,
    pub line: usize,
    /// (start label, pattern) for every positional antecedent.
    pub patterns: Vec<(i32, String)>,
}

#[derive(Debug, Clone)]
pub struct DomainTheory {
    pub rules: Vec<Rule>,
    pub frame: PositionFrame,
}

fn pattern_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r#"@\s*([+-]?\d+)\s*["'`]([A-Za-z-]+)["'`]"#).unwrap())
}

impl DomainTheory {
    /// Parses rule text. Statements end with `.`; `;` and `%` start comments.
    pub fn parse(text: &str, frame: PositionFrame) -> Result<Self> {
        let mut rules = Vec::new();
        let mut pending = String::new();
        let mut start_line = 0;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split([';', '%']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if pending.is_empty() {
                start_line = n + 1;
            }
            pending.push_str(line);
            pending.push(' ');
            if line.ends_with('.') {
                rules.push(parse_rule(&pending, start_line, frame)?);
                pending.clear();
            }
        }
        if !pending.trim().is_empty() {
            return Err(Error::Parse {
                line: start_line,
                message: "rule is missing its terminating `.`".into(),
            });
        }
        Ok(DomainTheory { rules, frame })
    }

    pub fn promoter() -> Self {
        Self::parse(PROMOTER_THEORY, PositionFrame::PROMOTER).expect("built-in promoter theory")
    }

    pub fn splice() -> Self {
        Self::parse(SPLICE_THEORY, PositionFrame::SPLICE).expect("built-in splice theory")
    }

    /// Per position, the number of rules using it as an antecedent.
    pub fn rule_counts(&self) -> RuleCountTable {
        let mut counts = vec![0u32; self.frame.len];
        for rule in &self.rules {
            let mut used = vec![false; self.frame.len];
            for (start, pattern) in &rule.patterns {
                for (k, ch) in pattern.chars().enumerate() {
                    if matches!(ch, 'x' | 'X' | '-') {
                        continue;
                    }
                    let idx = self
                        .frame
                        .index_of(*start)
                        .map(|s| s + k)
                        .filter(|&i| i < self.frame.len);
                    if let Some(i) = idx {
                        used[i] = true;
                    }
                }
            }
            for (c, u) in counts.iter_mut().zip(used) {
                *c += u32::from(u);
            }
        }
        RuleCountTable::new(counts)
    }

    /// Per-position importance derived from [`Self::rule_counts`].
    pub fn fri(&self) -> FriVector {
        fri_from_rule_counts(&self.rule_counts())
    }
}

fn parse_rule(statement: &str, line: usize, frame: PositionFrame) -> Result<Rule> {
    let (head, body) = statement.split_once(":-").ok_or_else(|| Error::Parse {
        line,
        message: "expected `head :- body.`".into(),
    })?;
    let head = head.trim().trim_end_matches(':').trim().to_string();
    let mut patterns = Vec::new();
    for cap in pattern_re().captures_iter(body) {
        let start: i32 = cap[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("bad position {:?}", &cap[1]),
        })?;
        if frame.index_of(start).is_none() {
            return Err(Error::Parse {
                line,
                message: format!("position {start} is outside the sequence window"),
            });
        }
        patterns.push((start, cap[2].to_string()));
    }
    Ok(Rule {
        head,
        line,
        patterns,
    })
}

/// E. coli promoter theory over positions -50..+7.
pub const PROMOTER_THEORY: &str = r#"
promoter     :- contact, conformation.
contact      :- minus_35, minus_10.
minus_35     :- @-37 "cttgac".
minus_35     :- @-36 "ttgxca".
minus_35     :- @-36 "ttgaca".
minus_35     :- @-36 "ttgac".
minus_10     :- @-14 "tataat".
minus_10     :- @-13 "taxaxt".
minus_10     :- @-13 "tataat".
minus_10     :- @-12 "taxxxt".
conformation :- @-45 "aaxxa".
conformation :- @-45 "axxxa", @-4 "t", @-28 "txxxtxaaxxtx".
conformation :- @-49 "axxxxt", @-1 "a", @-27 "txxxxaxxtxtg".
conformation :- @-47 "caaxttxac", @-22 "gxxxtxc", @-8 "gcgccxcc".
"#;

/// Primate splice-junction theory over positions -30..+30.
/// Y = C or T, M = A or C, R = A or G.
pub const SPLICE_THEORY: &str = r#"
EI :- @-3 `MAGGTRAGT', not(EI-stop).
EI-stop ::- @-3 `TAA'.
EI-stop ::- @-3 `TAG'.
EI-stop ::- @-3 `TGA'.
EI-stop ::- @-4 `TAA'.
EI-stop ::- @-4 `TAG'.
EI-stop ::- @-4 `TGA'.
EI-stop ::- @-5 `TAA'.
EI-stop ::- @-5 `TAG'.
EI-stop ::- @-5 `TGA'.

IE :- pyramidine-rich, @-3 `YAGG', not(IE-stop).
pyramidine-rich :- 6 of (@-15 `YYYYYYYYYY').
IE-stop ::- @1 `TAA'.
IE-stop ::- @1 `TAG'.
IE-stop ::- @1 `TGA'.
IE-stop ::- @2 `TAA'.
IE-stop ::- @2 `TAG'.
IE-stop ::- @2 `TGA'.
IE-stop ::- @3 `TAA'.
IE-stop ::- @3 `TAG'.
IE-stop ::- @3 `TGA'.
"#;
