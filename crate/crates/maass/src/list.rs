//! The verified-eigenvalue list: the unit of persistence and audit.
//!
//! File format (one record per line, `#` header lines first):
//!
//! ```text
//! # maass-list v1
//! # config_hash=0123456789abcdef
//! # verdict t=29.871234 T=31.204199
//! # note=perturbed: removed r=12.173008
//! odd 9.533695261354 7.717e-15 3.214e-13
//! even 13.779751351891 2.715e-13 8.881e-13
//! ```
//!
//! Symmetry tag, r to 12 decimal places, the Phase-1 residual and the
//! y-independence residual to 3 significant digits. Diff-able, append-
//! merge-able, parseable from anything.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::hejhal::{CuspFormCandidate, SymmetryClass};

#[derive(Debug, Error)]
pub enum ListError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("entry r={r} not present (tolerance {tol})")]
    NotPresent { r: f64, tol: f64 },
    #[error("entry r={r} already present within tolerance {tol}")]
    AlreadyPresent { r: f64, tol: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One verified (or deliberately faked) eigenvalue record.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueEntry {
    pub symmetry: SymmetryClass,
    pub r: f64,
    pub residual_phase1: f64,
    pub residual_y_independence: f64,
}

impl EigenvalueEntry {
    pub fn lambda(&self) -> f64 {
        self.r * self.r + 0.25
    }
}

impl From<&CuspFormCandidate> for EigenvalueEntry {
    fn from(c: &CuspFormCandidate) -> Self {
        EigenvalueEntry {
            symmetry: c.symmetry,
            r: c.r,
            residual_phase1: c.residual_phase1,
            residual_y_independence: c.residual_y_independence,
        }
    }
}

/// Sorted list of eigenvalue records with provenance header notes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EigenvalueList {
    entries: Vec<EigenvalueEntry>,
    pub notes: Vec<String>,
}

impl EigenvalueList {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(mut entries: Vec<EigenvalueEntry>) -> Self {
        entries.sort_by(|a, b| {
            (a.r, a.symmetry.tag())
                .partial_cmp(&(b.r, b.symmetry.tag()))
                .unwrap()
        });
        EigenvalueList {
            entries,
            notes: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[EigenvalueEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Combined count N(t): entries with r ≤ t, both symmetry classes.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.entries.partition_point(|e| e.r <= t)
    }

    /// Σ r_j over entries with r_j ≤ t (prefix-sum free; lists stay small
    /// enough that the direct scan never shows up in profiles).
    pub fn sum_up_to(&self, t: f64) -> f64 {
        self.entries
            .iter()
            .take_while(|e| e.r <= t)
            .map(|e| e.r)
            .sum()
    }

    /// Merge candidates, dropping duplicates within `tol` of an existing
    /// entry of the same symmetry; keeps whichever has the smaller Phase-1
    /// residual. Returns how many genuinely new entries were added.
    pub fn merge(&mut self, incoming: &[EigenvalueEntry], tol: f64) -> usize {
        let mut added = 0;
        for entry in incoming {
            match self.position_of(entry.r, entry.symmetry, tol) {
                Some(i) => {
                    if entry.residual_phase1 < self.entries[i].residual_phase1 {
                        self.entries[i] = entry.clone();
                    }
                }
                None => {
                    self.entries.push(entry.clone());
                    added += 1;
                }
            }
        }
        self.entries
            .sort_by(|a, b| (a.r, a.symmetry.tag()).partial_cmp(&(b.r, b.symmetry.tag())).unwrap());
        added
    }

    fn position_of(&self, r: f64, symmetry: SymmetryClass, tol: f64) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.symmetry == symmetry && (e.r - r).abs() <= tol)
    }

    /// Remove the entry nearest `r` within `tol` (any symmetry unless given).
    pub fn remove(&mut self, r: f64, tol: f64) -> Result<EigenvalueEntry, ListError> {
        let best = self
            .entries
            .iter()
            .enumerate()
            .filter(|(_, e)| (e.r - r).abs() <= tol)
            .min_by(|a, b| {
                (a.1.r - r)
                    .abs()
                    .partial_cmp(&(b.1.r - r).abs())
                    .unwrap()
            })
            .map(|(i, _)| i);
        match best {
            Some(i) => Ok(self.entries.remove(i)),
            None => Err(ListError::NotPresent { r, tol }),
        }
    }

    /// Insert an entry, refusing values already present within `tol`.
    pub fn insert(&mut self, entry: EigenvalueEntry, tol: f64) -> Result<(), ListError> {
        if self.position_of(entry.r, entry.symmetry, tol).is_some() {
            return Err(ListError::AlreadyPresent { r: entry.r, tol });
        }
        self.entries.push(entry);
        self.entries
            .sort_by(|a, b| (a.r, a.symmetry.tag()).partial_cmp(&(b.r, b.symmetry.tag())).unwrap());
        Ok(())
    }

    /// Serialise; `header` lines are emitted as `# key=value` style comments
    /// verbatim after the format tag.
    pub fn serialize(&self, header: &[String]) -> String {
        let mut out = String::new();
        out.push_str("# maass-list v1\n");
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        for note in &self.notes {
            let _ = writeln!(out, "# note={note}");
        }
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{} {:.12} {:.3e} {:.3e}",
                e.symmetry, e.r, e.residual_phase1, e.residual_y_independence
            );
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ListError> {
        let mut entries = Vec::new();
        let mut notes = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(note) = comment.trim().strip_prefix("note=") {
                    notes.push(note.to_string());
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let sym = parts
                .next()
                .and_then(SymmetryClass::parse)
                .ok_or_else(|| ListError::Parse {
                    line: idx + 1,
                    message: format!("bad symmetry tag in {line:?}"),
                })?;
            let mut field = |name: &str| -> Result<f64, ListError> {
                parts
                    .next()
                    .and_then(|tok| tok.parse::<f64>().ok())
                    .ok_or_else(|| ListError::Parse {
                        line: idx + 1,
                        message: format!("bad or missing {name} in {line:?}"),
                    })
            };
            let r = field("r")?;
            let residual_phase1 = field("phase-1 residual")?;
            let residual_y_independence = field("y-independence residual")?;
            if !(r > 0.0) {
                return Err(ListError::Parse {
                    line: idx + 1,
                    message: format!("spectral parameter must be positive, got {r}"),
                });
            }
            entries.push(EigenvalueEntry {
                symmetry: sym,
                r,
                residual_phase1,
                residual_y_independence,
            });
        }
        let mut list = EigenvalueList::from_entries(entries);
        list.notes = notes;
        Ok(list)
    }

    /// Atomic write: temp file in the same directory, then rename.
    pub fn write_atomic(&self, path: &Path, header: &[String]) -> Result<(), ListError> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, self.serialize(header))?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read_from(path: &Path) -> Result<Self, ListError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}
