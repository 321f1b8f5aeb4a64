use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::ErrorString;
use crate::code::{codeword_index, CodeSpec};
use crate::error::{Error, Result};
use crate::qla::{basis_bit, StateVector, C64, ZERO};

/// Z-stabilizer outcomes, block-major; `1` marks a `-1` eigenvalue.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syndrome(Vec<u8>);

impl Syndrome {
    pub fn trivial(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::InvalidConfig(format!("bad syndrome {text:?}"))),
            })
            .collect::<Result<_>>()
            .map(Self)
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl Serialize for Syndrome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Syndrome {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Syndrome::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Syndrome of an outer-register basis index.
pub fn syndrome_of_index(spec: &CodeSpec, index: usize) -> Syndrome {
    let n = spec.n_outer();
    let len = spec.block_len();
    let mut bits = Vec::with_capacity(spec.n_syndrome_bits());
    for i in 0..spec.n_blocks() {
        for j in 0..spec.w {
            let q = len * i + j;
            bits.push(basis_bit(n, index, q) ^ basis_bit(n, index, q + 1));
        }
    }
    Syndrome(bits)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyndromeBranch {
    pub syndrome: Syndrome,
    /// Weight relative to the input's squared norm.
    pub probability: f64,
    /// Projected, un-renormalized branch.
    pub state: StateVector,
}

/// Splits a state by its Z-stabilizer outcomes. Branches come out in syndrome
/// order and zero-weight outcomes are omitted.
pub fn extract_syndrome(state: &StateVector, spec: &CodeSpec) -> Result<Vec<SyndromeBranch>> {
    if spec.dual_rail {
        return Err(Error::UnsupportedCode(
            "syndrome extraction acts on the outer code only".into(),
        ));
    }
    if state.n_qubits() != spec.n_outer() {
        return Err(Error::DimensionMismatch {
            left: spec.n_outer(),
            right: state.n_qubits(),
        });
    }
    let total = state.norm_sqr();
    let mut groups: BTreeMap<Syndrome, Vec<(usize, C64)>> = BTreeMap::new();
    for (idx, a) in state.amps().iter().enumerate() {
        if *a != ZERO {
            groups
                .entry(syndrome_of_index(spec, idx))
                .or_default()
                .push((idx, *a));
        }
    }
    groups
        .into_iter()
        .map(|(syndrome, entries)| {
            let s = StateVector::from_sparse(state.n_qubits(), &entries)?;
            let probability = if total > 0.0 { s.norm_sqr() / total } else { 0.0 };
            Ok(SyndromeBranch {
                syndrome,
                probability,
                state: s,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeEntry {
    pub syndrome: Syndrome,
    /// Position set used for recovery: minimum weight, then lowest indices.
    pub positions: Vec<usize>,
    /// Every minimum-weight position set producing this syndrome.
    pub candidates: Vec<Vec<usize>>,
}

impl SyndromeEntry {
    pub fn is_collision(&self) -> bool {
        self.candidates.len() > 1
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyndromeTable {
    pub spec: CodeSpec,
    pub entries: BTreeMap<Syndrome, SyndromeEntry>,
}

impl SyndromeTable {
    pub fn lookup(&self, syndrome: &Syndrome) -> Option<&SyndromeEntry> {
        self.entries.get(syndrome)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn collisions(&self) -> impl Iterator<Item = &SyndromeEntry> {
        self.entries.values().filter(|e| e.is_collision())
    }
}

/// Enumerates every damping pattern of weight `<= w` on `|0...0>_code` and
/// records which positions produce each syndrome.
pub fn build_table(spec: &CodeSpec) -> Result<SyndromeTable> {
    let outer = spec.outer();
    let zero = codeword_index(&outer, 0)?;
    let n = outer.n_outer();
    let errors = ErrorString::up_to_weight(n, spec.w);
    let observed: Vec<(Syndrome, Vec<usize>)> = errors
        .par_iter()
        .map(|e| -> Result<Option<(Syndrome, Vec<usize>)>> {
            // gamma only scales amplitudes; the support pattern is what matters
            let damped = e.apply(&zero, 0.5)?;
            let branches = extract_syndrome(&damped, &outer)?;
            match branches.as_slice() {
                [] => Ok(None),
                [b] => Ok(Some((b.syndrome.clone(), e.positions()))),
                _ => Err(Error::UncorrectableSyndrome(format!(
                    "error {e} yields {} syndrome branches",
                    branches.len()
                ))),
            }
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut entries: BTreeMap<Syndrome, SyndromeEntry> = BTreeMap::new();
    for (syndrome, positions) in observed {
        let entry = entries
            .entry(syndrome.clone())
            .or_insert_with(|| SyndromeEntry {
                syndrome,
                positions: positions.clone(),
                candidates: Vec::new(),
            });
        let best = entry.candidates.first().map(|c| c.len()).unwrap_or(usize::MAX);
        if positions.len() < best {
            entry.candidates = vec![positions];
        } else if positions.len() == best {
            entry.candidates.push(positions);
        }
    }
    for entry in entries.values_mut() {
        entry.candidates = entry.candidates.iter().cloned().sorted().dedup().collect();
        entry.positions = entry.candidates[0].clone();
    }
    Ok(SyndromeTable {
        spec: outer,
        entries,
    })
}
