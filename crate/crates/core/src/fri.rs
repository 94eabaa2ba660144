//! Feature relative importance (FRI): one expert-supplied weight in `[0, 1]`
//! per feature. Only the ratios between entries carry meaning.
//!
//! Text format, one feature per line:
//!
//! ```text
//! # comment
//! 0 0.9
//! 1 0.3
//! ```
//!
//! Index and value are separated by a tab or other whitespace. Indices must
//! cover `0..n` exactly once, in any order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Importance assigned to features that no domain rule mentions.
pub const UNMENTIONED_FRI: f64 = 0.3;
/// Importance given to the most frequently mentioned features.
pub const LADDER_TOP: f64 = 0.9;
pub const LADDER_STEP: f64 = 0.1;
/// Lowest rung for mentioned features, kept above [`UNMENTIONED_FRI`].
pub const LADDER_FLOOR: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct FriVector(Vec<f64>);

impl FriVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        validate_fri(values)
    }

    /// Every feature at importance 1; the update rule then reduces to plain backprop.
    pub fn ones(n: usize) -> Self {
        FriVector(vec![1.0; n])
    }

    pub fn uniform(n: usize, value: f64) -> Result<Self> {
        validate_fri(vec![value; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Repeats every entry `width` times, e.g. for one-hot encoded positions.
    pub fn expand(&self, width: usize) -> FriVector {
        FriVector(
            self.0
                .iter()
                .flat_map(|&v| std::iter::repeat_n(v, width))
                .collect(),
        )
    }

    pub fn check_len(&self, expected: usize, what: &'static str) -> Result<()> {
        if self.0.len() != expected {
            return Err(Error::Dimension {
                what,
                expected,
                actual: self.0.len(),
            });
        }
        Ok(())
    }
}

impl Deref for FriVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for FriVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        validate_fri(values)
    }
}

impl From<FriVector> for Vec<f64> {
    fn from(f: FriVector) -> Self {
        f.0
    }
}

pub fn validate_fri(raw: Vec<f64>) -> Result<FriVector> {
    if let Some((index, &value)) = raw
        .iter()
        .enumerate()
        .find(|(_, v)| !(v.is_finite() && (0.0..=1.0).contains(*v)))
    {
        return Err(Error::FriRange { index, value });
    }
    Ok(FriVector(raw))
}

/// Number of domain rules in which each feature appears as an antecedent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCountTable {
    pub counts: Vec<u32>,
}

impl RuleCountTable {
    pub fn new(counts: Vec<u32>) -> Self {
        RuleCountTable { counts }
    }
}

/// Turns rule-mention counts into importance values.
///
/// Unmentioned features get [`UNMENTIONED_FRI`]. Mentioned features are
/// ranked by distinct count, highest first, and take 0.9, 0.8, 0.7, ...
/// down to [`LADDER_FLOOR`], which every further rank shares.
pub fn fri_from_rule_counts(table: &RuleCountTable) -> FriVector {
    let mut distinct: Vec<u32> = table.counts.iter().copied().filter(|&c| c > 0).collect();
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.dedup();
    let values = table
        .counts
        .iter()
        .map(|&c| {
            if c == 0 {
                return UNMENTIONED_FRI;
            }
            let rank = distinct.iter().position(|&d| d == c).unwrap_or(0);
            // computed in tenths so rungs are the exact decimal literals 0.9, 0.8, ...
            let tenths = (LADDER_TOP / LADDER_STEP).round() as i64 - rank as i64;
            let floor = (LADDER_FLOOR / LADDER_STEP).round() as i64;
            tenths.max(floor) as f64 / 10.0
        })
        .collect();
    FriVector(values)
}

pub fn parse_fri_file(text: &str) -> Result<FriVector> {
    let mut entries: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [index, value] = fields[..] else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `index<TAB>value`, found {line:?}"),
            });
        };
        let index: usize = index.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad feature index {index:?}"),
        })?;
        let value: f64 = value.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad importance value {value:?}"),
        })?;
        if let Some((_, first)) = entries.insert(index, (value, line_no)) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("feature index {index} already given on line {first}"),
            });
        }
    }
    let mut values = Vec::with_capacity(entries.len());
    for (expected, (index, (value, line))) in entries.into_iter().enumerate() {
        if index != expected {
            return Err(Error::Parse {
                line,
                message: format!("feature index {expected} is missing"),
            });
        }
        values.push(value);
    }
    validate_fri(values)
}

pub fn emit_fri_file(fri: &FriVector) -> String {
    let mut out = String::from("# feature_index\tfri\n");
    for (i, v) in fri.iter().enumerate() {
        // `{}` on f64 prints the shortest string that parses back to the same value
        let _ = writeln!(out, "{i}\t{v}");
    }
    out
}

/// Parses a comma-separated list such as `0.9,0.3,1`.
pub fn parse_fri_list(text: &str) -> Result<FriVector> {
    let values = text
        .split(',')
        .enumerate()
        .map(|(i, s)| {
            s.trim().parse::<f64>().map_err(|_| {
                Error::Config(format!(
                    "FRI list entry {i} ({:?}) is not a number",
                    s.trim()
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    validate_fri(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PLAYING: [f64; 7] = [0.7, 1.0, 1.0, 0.7, 0.0, 0.0, 0.3];

    #[test]
    fn playing_conditions_vector_is_valid() {
        assert_eq!(validate_fri(PLAYING.to_vec()).unwrap().values(), &PLAYING);
        assert!(validate_fri(vec![0.0; 5]).is_ok());
    }

    #[test]
    fn out_of_range_entry_is_named() {
        match validate_fri(vec![0.5, 1.2]) {
            Err(Error::FriRange { index, value }) => {
                assert_eq!(index, 1);
                assert_eq!(value, 1.2);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            validate_fri(vec![f64::NAN]),
            Err(Error::FriRange { index: 0, .. })
        ));
        assert!(validate_fri(vec![-0.01]).is_err());
    }

    #[test]
    fn ladder_from_counts() {
        let f = fri_from_rule_counts(&RuleCountTable::new(vec![5, 3, 3, 0]));
        assert_eq!(f.values(), &[0.9, 0.8, 0.8, 0.3]);
        let f = fri_from_rule_counts(&RuleCountTable::new(vec![0, 0, 0]));
        assert_eq!(f.values(), &[0.3, 0.3, 0.3]);
        let f = fri_from_rule_counts(&RuleCountTable::new(vec![1, 1, 1]));
        assert_eq!(f.values(), &[0.9, 0.9, 0.9]);
    }

    #[test]
    fn ladder_clamps_at_floor() {
        let counts: Vec<u32> = (1..=9).rev().chain([0]).collect();
        let f = fri_from_rule_counts(&RuleCountTable::new(counts));
        assert_eq!(
            f.values(),
            &[0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.4, 0.4, 0.4, 0.3]
        );
    }

    #[test]
    fn parse_two_lines() {
        let f = parse_fri_file("0 0.9\n1 0.3\n").unwrap();
        assert_eq!(f.values(), &[0.9, 0.3]);
        let f = parse_fri_file("# header\n1\t0.3\n\n0\t0.9  # trailing\n").unwrap();
        assert_eq!(f.values(), &[0.9, 0.3]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_fri_file("0 0.9\n1 0.3 7\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_fri_file("0 0.9\n0 0.3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_fri_file("0 0.9\n2 0.3\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_fri_file("0 0.9\n1 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_fri_file("0 0.1\n1 0.2\n2 1.5\n"),
            Err(Error::FriRange { index: 2, .. })
        ));
    }

    #[test]
    fn emit_then_parse_is_identity() {
        let f = FriVector::new(PLAYING.to_vec()).unwrap();
        assert_eq!(parse_fri_file(&emit_fri_file(&f)).unwrap(), f);
    }

    #[test]
    fn inline_list() {
        assert_eq!(
            parse_fri_list("0.9, 0.3,1").unwrap().values(),
            &[0.9, 0.3, 1.0]
        );
        assert!(parse_fri_list("0.9,,1").is_err());
        assert!(parse_fri_list("0.9,2").is_err());
    }

    #[test]
    fn expand_replicates() {
        let f = FriVector::new(vec![0.9, 0.3]).unwrap().expand(4);
        assert_eq!(f.values(), &[0.9, 0.9, 0.9, 0.9, 0.3, 0.3, 0.3, 0.3]);
    }

    #[test]
    fn serde_rejects_out_of_range() {
        assert!(serde_json::from_str::<FriVector>("[0.2, 1.5]").is_err());
        let f: FriVector = serde_json::from_str("[0.2, 1.0]").unwrap();
        assert_eq!(serde_json::to_string(&f).unwrap(), "[0.2,1.0]");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn ladder_is_valid_and_monotone(counts in proptest::collection::vec(0u32..12, 1..40)) {
                let f = fri_from_rule_counts(&RuleCountTable::new(counts.clone()));
                prop_assert!(validate_fri(f.values().to_vec()).is_ok());
                for a in 0..counts.len() {
                    for b in 0..counts.len() {
                        if counts[a] > counts[b] {
                            prop_assert!(f[a] >= f[b]);
                            // strict while both sit above the clamp
                            if f[b] > LADDER_FLOOR || counts[b] == 0 {
                                prop_assert!(f[a] > f[b]);
                            }
                        } else if counts[a] == counts[b] {
                            prop_assert_eq!(f[a], f[b]);
                        }
                    }
                }
            }

            #[test]
            fn ladder_commutes_with_permutation(
                counts in proptest::collection::vec(0u32..12, 1..30),
                seed in any::<u64>(),
            ) {
                use rand::{seq::SliceRandom, SeedableRng};
                let mut perm: Vec<usize> = (0..counts.len()).collect();
                perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
                let permuted: Vec<u32> = perm.iter().map(|&i| counts[i]).collect();
                let f = fri_from_rule_counts(&RuleCountTable::new(counts));
                let g = fri_from_rule_counts(&RuleCountTable::new(permuted));
                for (k, &i) in perm.iter().enumerate() {
                    prop_assert_eq!(g[k], f[i]);
                }
            }

            #[test]
            fn file_round_trip(values in proptest::collection::vec(0.0f64..=1.0, 0..50)) {
                let f = FriVector::new(values).unwrap();
                prop_assert_eq!(parse_fri_file(&emit_fri_file(&f)).unwrap(), f);
            }
        }
    }
}
