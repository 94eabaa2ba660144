//! DNA datasets: record parsing, one-hot encoding, FRI expansion and splits.
//!
//! Records are the comma-separated `label, id, sequence` lines used by the
//! published promoter and splice-junction files. Each sequence position
//! becomes four inputs in the order A, C, G, T.

use std::collections::BTreeSet;

use rand::seq::{index, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fri::FriVector;

pub const ALPHABET: [char; 4] = ['A', 'C', 'G', 'T'];
/// Encoded inputs per sequence position.
pub const BLOCK: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawInstance {
    pub label: String,
    pub id: String,
    pub sequence: String,
}

pub fn parse_dna_dataset(text: &str) -> Result<Vec<RawInstance>> {
    let mut out: Vec<RawInstance> = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, ',');
        let (Some(label), Some(id), Some(seq)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse {
                line: n + 1,
                message: "expected `label, id, sequence`".into(),
            });
        };
        let sequence: String = seq
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        if let Some(first) = out.first() {
            if first.sequence.len() != sequence.len() {
                return Err(Error::Record {
                    record: out.len(),
                    message: format!(
                        "sequence {:?} has {} positions, expected {}",
                        id.trim(),
                        sequence.len(),
                        first.sequence.len()
                    ),
                });
            }
        }
        out.push(RawInstance {
            label: label.trim().to_string(),
            id: id.trim().to_string(),
            sequence,
        });
    }
    Ok(out)
}

fn code_mass(code: char) -> Option<[f64; 4]> {
    const THIRD: f64 = 1.0 / 3.0;
    Some(match code {
        'A' => [1.0, 0.0, 0.0, 0.0],
        'C' => [0.0, 1.0, 0.0, 0.0],
        'G' => [0.0, 0.0, 1.0, 0.0],
        'T' => [0.0, 0.0, 0.0, 1.0],
        'N' => [0.25; 4],
        // D = A/G/T, S = C/G, R = A/G
        'D' => [THIRD, 0.0, THIRD, THIRD],
        'S' => [0.0, 0.5, 0.5, 0.0],
        'R' => [0.5, 0.0, 0.5, 0.0],
        _ => return None,
    })
}

/// Four inputs per position; ambiguity codes spread their mass evenly.
pub fn one_hot_encode(sequence: &str) -> Result<Vec<f64>> {
    let mut x = Vec::with_capacity(sequence.len() * BLOCK);
    for (position, code) in sequence.chars().enumerate() {
        let block =
            code_mass(code.to_ascii_uppercase()).ok_or(Error::Encoding { position, code })?;
        x.extend_from_slice(&block);
    }
    Ok(x)
}

/// Inverse of [`one_hot_encode`] for unambiguous blocks (per-block argmax).
pub fn decode(x: &[f64]) -> String {
    x.chunks(BLOCK)
        .map(|b| {
            let best = (1..b.len()).fold(0, |best, k| if b[k] > b[best] { k } else { best });
            ALPHABET[best]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub x: Vec<f64>,
    pub class: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub class_names: Vec<String>,
    /// Number of raw features (sequence positions) before encoding.
    pub positions: usize,
    pub encoding: String,
    pub instances: Vec<Instance>,
}

impl Dataset {
    /// Encodes parsed records. Classes are ordered by label, except that a
    /// `+`/`-` pair puts `+` second so it is the positive class.
    pub fn from_raw(raw: &[RawInstance]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Data("no records".into()));
        }
        let labels: BTreeSet<&str> = raw.iter().map(|r| r.label.as_str()).collect();
        let mut class_names: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
        if class_names == ["+", "-"] {
            class_names.reverse();
        }
        let instances = raw
            .iter()
            .enumerate()
            .map(|(n, r)| {
                let x = one_hot_encode(&r.sequence).map_err(|e| Error::Record {
                    record: n,
                    message: format!("{}: {e}", r.id),
                })?;
                let class = class_names.iter().position(|c| *c == r.label).unwrap();
                Ok(Instance { x, class })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            class_names,
            positions: raw[0].sequence.len(),
            encoding: "one-hot A,C,G,T".into(),
            instances,
        })
    }

    /// Wraps already-numeric instances; every input is its own feature.
    pub fn from_instances(instances: Vec<Instance>, class_names: Vec<String>) -> Result<Self> {
        let positions = instances.first().map_or(0, |i| i.x.len());
        let data = Dataset {
            class_names,
            positions,
            encoding: "identity".into(),
            instances,
        };
        data.validate()?;
        Ok(data)
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances.is_empty() {
            return Err(Error::Data("dataset has no instances".into()));
        }
        if self.class_names.len() < 2 {
            return Err(Error::Data("need at least two classes".into()));
        }
        let n = self.n_inputs();
        if n == 0 || self.positions == 0 || !n.is_multiple_of(self.positions) {
            return Err(Error::Data(format!(
                "{n} inputs do not divide into {} positions",
                self.positions
            )));
        }
        for (k, inst) in self.instances.iter().enumerate() {
            if inst.x.len() != n {
                return Err(Error::Record {
                    record: k,
                    message: format!("{} inputs, expected {n}", inst.x.len()),
                });
            }
            if inst.class >= self.class_names.len() {
                return Err(Error::Record {
                    record: k,
                    message: format!("class index {} out of range", inst.class),
                });
            }
            if inst.x.iter().any(|v| !v.is_finite()) {
                return Err(Error::Record {
                    record: k,
                    message: "non-finite input".into(),
                });
            }
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Dataset::from_raw(&parse_dna_dataset(&text)?)
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    pub fn n_inputs(&self) -> usize {
        self.instances.first().map_or(0, |i| i.x.len())
    }

    /// Encoded inputs per raw feature.
    pub fn block_width(&self) -> usize {
        self.n_inputs() / self.positions.max(1)
    }

    /// One output unit for two classes, otherwise one per class.
    pub fn output_units(&self) -> usize {
        match self.class_names.len() {
            2 => 1,
            k => k,
        }
    }

    /// Target for `class` with the default [`Self::output_units`] encoding.
    pub fn target(&self, class: usize) -> Vec<f64> {
        self.target_for(class, self.output_units())
    }

    /// Target for a network with `n_outputs` units: a 0/1 scalar for one
    /// unit, otherwise one-hot.
    pub fn target_for(&self, class: usize, n_outputs: usize) -> Vec<f64> {
        if n_outputs == 1 {
            vec![class as f64]
        } else {
            let mut t = vec![0.0; n_outputs];
            t[class] = 1.0;
            t
        }
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_names.len()];
        for inst in &self.instances {
            counts[inst.class] += 1;
        }
        counts
    }

    /// Per-feature FRI replicated across each feature's encoded inputs.
    pub fn expand_fri(&self, per_position: &FriVector) -> Result<FriVector> {
        expand_fri(per_position, self.positions, self.block_width())
    }

    /// Seeded uniform sample of `n` instances, kept in original order.
    pub fn random_subset(&self, n: usize, seed: u64) -> Result<Dataset> {
        if n == 0 || n > self.len() {
            return Err(Error::Config(format!(
                "subset size {n} must be in 1..={}",
                self.len()
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked = index::sample(&mut rng, self.len(), n).into_vec();
        picked.sort_unstable();
        Ok(self.select(&picked))
    }

    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            class_names: self.class_names.clone(),
            positions: self.positions,
            encoding: self.encoding.clone(),
            instances: indices.iter().map(|&i| self.instances[i].clone()).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: Dataset = serde_json::from_str(text)?;
        data.validate()?;
        Ok(data)
    }
}

pub fn expand_fri(per_position: &FriVector, positions: usize, width: usize) -> Result<FriVector> {
    per_position.check_len(positions, "per-position FRI")?;
    Ok(per_position.expand(width))
}

/// Disjoint folds covering every instance index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitPlan {
    pub folds: Vec<Vec<usize>>,
    pub seed: u64,
}

impl SplitPlan {
    /// Every index outside fold `k`, ascending.
    pub fn training_indices(&self, k: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = self
            .folds
            .iter()
            .enumerate()
            .filter(|(f, _)| *f != k)
            .flat_map(|(_, fold)| fold.iter().copied())
            .collect();
        idx.sort_unstable();
        idx
    }
}

/// Stratified k-fold assignment.
///
/// Each class is shuffled, the classes are laid end to end and the sequence
/// is dealt round-robin into the folds, so every fold's class counts and
/// total size differ from the others by at most one.
pub fn stratified_kfold(data: &Dataset, k: usize, seed: u64) -> Result<SplitPlan> {
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    // k equal to the dataset size is leave-one-out, whatever the class sizes
    let counts = data.class_counts();
    if k > data.len() {
        return Err(Error::Config(format!(
            "{k} folds for {} instances",
            data.len()
        )));
    }
    if k == data.len() {
        return Ok(SplitPlan {
            folds: (0..k).map(|i| vec![i]).collect(),
            seed,
        });
    }
    if let Some((c, &n)) = counts.iter().enumerate().find(|(_, &n)| n > 0 && n < k) {
        return Err(Error::Config(format!(
            "class {:?} has {n} instances, fewer than {k} folds",
            data.class_names[c]
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dealt = Vec::with_capacity(data.len());
    for class in 0..data.class_names.len() {
        let mut members: Vec<usize> = (0..data.len())
            .filter(|&i| data.instances[i].class == class)
            .collect();
        members.shuffle(&mut rng);
        dealt.extend(members);
    }
    let mut folds = vec![Vec::new(); k];
    for (pos, idx) in dealt.into_iter().enumerate() {
        folds[pos % k].push(idx);
    }
    for fold in &mut folds {
        fold.sort_unstable();
    }
    Ok(SplitPlan { folds, seed })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
}

/// Seeded sample of `train_size` training instances; the rest are test instances.
pub fn learning_curve_split(data: &Dataset, train_size: usize, seed: u64) -> Result<CurveSplit> {
    if train_size == 0 || train_size >= data.len() {
        return Err(Error::Config(format!(
            "train size {train_size} must be in 1..{}",
            data.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = index::sample(&mut rng, data.len(), train_size).into_vec();
    train.sort_unstable();
    let mut in_train = vec![false; data.len()];
    for &i in &train {
        in_train[i] = true;
    }
    let test = (0..data.len()).filter(|&i| !in_train[i]).collect();
    Ok(CurveSplit { train, test, seed })
}
