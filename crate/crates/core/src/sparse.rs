use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

/// Sparse coordinate vector with exact entries; zero entries are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn unit(index: usize, field: Field) -> Self {
        let mut v = SparseVec::new();
        v.entries.insert(index, field.one());
        v
    }

    pub fn from_dense(values: &[Scalar]) -> Self {
        SparseVec {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(i, s)| (i, s.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize, field: Field) -> Vec<Scalar> {
        let mut out = vec![field.zero(); len];
        for (&i, s) in &self.entries {
            out[i] = s.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(&i, s)| (i, s))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    /// `self += coeff · e_index`.
    pub fn add_term(&mut self, index: usize, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(e) => {
                *e += coeff;
                if e.is_zero() {
                    self.entries.remove(&index);
                }
            }
            None => {
                self.entries.insert(index, coeff.clone());
            }
        }
    }

    /// `self += coeff · other`.
    pub fn add_scaled(&mut self, other: &SparseVec, coeff: &Scalar) {
        if coeff.is_zero() {
            return;
        }
        for (i, s) in other.iter() {
            self.add_term(i, &(coeff * s));
        }
    }

    pub fn scaled(&self, coeff: &Scalar) -> SparseVec {
        let mut out = SparseVec::new();
        out.add_scaled(self, coeff);
        out
    }

    /// Applies `f` to indices, summing collisions.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, s) in self.iter() {
            out.add_term(f(i), s);
        }
        out
    }
}

impl FromIterator<(usize, Scalar)> for SparseVec {
    fn from_iter<T: IntoIterator<Item = (usize, Scalar)>>(iter: T) -> Self {
        let mut v = SparseVec::new();
        for (i, s) in iter {
            v.add_term(i, &s);
        }
        v
    }
}
