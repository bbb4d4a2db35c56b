//! Ordered tensor-factor layouts.
//!
//! The computational product basis is enumerated with the first label as the
//! most significant digit, so for `[A, B]` the basis order is
//! `|00⟩, |01⟩, |10⟩, |11⟩` with the A index on the left.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemLayout {
    pub fn new<S: AsRef<str>>(entries: &[(S, usize)]) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Shape("layout needs at least one subsystem"));
        }
        let mut dims = Vec::with_capacity(entries.len());
        let mut labels: Vec<String> = Vec::with_capacity(entries.len());
        for (label, dim) in entries {
            let label = label.as_ref();
            if *dim < 2 {
                return Err(Error::Shape("local dimensions must be at least 2"));
            }
            if labels.iter().any(|l| l == label) {
                return Err(Error::DuplicateLabel(label.to_string()));
            }
            labels.push(label.to_string());
            dims.push(*dim);
        }
        Ok(Self { dims, labels })
    }

    /// All-qubit layout.
    pub fn qubits<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let entries: Vec<(&str, usize)> = labels.iter().map(|l| (l.as_ref(), 2)).collect();
        Self::new(&entries)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.position(label)?])
    }

    /// Layout with `other` appended after `self`.
    pub fn extend(&self, other: &SubsystemLayout) -> Result<Self> {
        let entries: Vec<(&str, usize)> = self
            .labels
            .iter()
            .chain(&other.labels)
            .map(String::as_str)
            .zip(self.dims.iter().chain(&other.dims).copied())
            .collect();
        Self::new(&entries)
    }

    /// Sub-layout keeping the named labels, in this layout's order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let positions = self.positions_of(keep)?;
        let entries: Vec<(&str, usize)> = positions
            .iter()
            .map(|&p| (self.labels[p].as_str(), self.dims[p]))
            .collect();
        Self::new(&entries)
    }

    /// Sorted, deduplicated positions of `labels`.
    pub(crate) fn positions_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            out.push(self.position(l.as_ref())?);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    /// Mixed-radix digits of a flat basis index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = alloc::vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn flat_index(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.dims)
            .fold(0, |acc, (&digit, &d)| acc * d + digit)
    }
}
