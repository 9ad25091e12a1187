//! Sparse exact-rational linear combinations over an ordered key type.
//!
//! `SparseVec<K>` stores no zero coefficients; all arithmetic normalizes on
//! the fly. Keys are kept in a `BTreeMap` so iteration order — and therefore
//! every report built from one — is canonical.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::rat::{format_rat, Rat};

/// A finite ℚ-linear combination of basis keys.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct SparseVec<K: Ord + Clone = usize> {
    terms: BTreeMap<K, Rat>,
}

/// Element of a tensor power: keys are tuples of basis indices.
pub type Tensor = SparseVec<Vec<usize>>;

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        SparseVec { terms: BTreeMap::new() }
    }

    /// The basis vector `k` with coefficient one.
    pub fn single(k: K) -> Self {
        Self::term(k, Rat::from_integer(1.into()))
    }

    pub fn term(k: K, c: Rat) -> Self {
        let mut v = Self::new();
        v.add_term(k, c);
        v
    }

    pub fn from_terms<I: IntoIterator<Item = (K, Rat)>>(it: I) -> Self {
        let mut v = Self::new();
        for (k, c) in it {
            v.add_term(k, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &K) -> Rat {
        self.terms.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn get(&self, k: &K) -> Option<&Rat> {
        self.terms.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &Rat)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    /// Adds `c` to the coefficient of `k`, dropping the entry if it cancels.
    pub fn add_term(&mut self, k: K, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Self, s: &Rat) {
        if s.is_zero() {
            return;
        }
        for (k, c) in other.iter() {
            self.add_term(k.clone(), c * s);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &crate::rat::rat(-1));
        out
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::new();
        }
        SparseVec {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * s)).collect(),
        }
    }

    pub fn map_keys<K2: Ord + Clone>(&self, f: impl Fn(&K) -> K2) -> SparseVec<K2> {
        let mut out = SparseVec::new();
        for (k, c) in self.iter() {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Smallest key with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&K, &Rat)> {
        self.terms.iter().next()
    }
}

impl<K: Ord + Clone + std::fmt::Display> SparseVec<K> {
    pub fn display_with(&self, zero: &str) -> String {
        if self.is_zero() {
            return zero.to_string();
        }
        self.iter()
            .map(|(k, c)| format!("{}*{}", format_rat(c), k))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Tensor product of sparse vectors over tuple keys: concatenates keys.
pub fn tensor_concat(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (ka, ca) in a.iter() {
        for (kb, cb) in b.iter() {
            let mut k = ka.clone();
            k.extend_from_slice(kb);
            out.add_term(k, ca * cb);
        }
    }
    out
}

/// Lifts a vector to a one-factor tensor.
pub fn to_tensor(v: &SparseVec<usize>) -> Tensor {
    v.map_keys(|&k| vec![k])
}

/// Expands a list of single-factor vectors into the tensor over all slots.
pub fn tensor_of_factors(factors: &[SparseVec<usize>]) -> Tensor {
    let mut out = Tensor::single(Vec::new());
    for f in factors {
        out = tensor_concat(&out, &to_tensor(f));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn zero_terms_are_never_stored() {
        let mut v: SparseVec<usize> = SparseVec::new();
        v.add_term(3, rat(2));
        v.add_term(3, rat(-2));
        assert!(v.is_zero());
        v.add_term(1, rat(0));
        assert!(v.is_zero());
    }

    #[test]
    fn tensor_concat_distributes() {
        let a = Tensor::from_terms([(vec![0], rat(1)), (vec![1], rat(2))]);
        let b = Tensor::from_terms([(vec![5], rat(3))]);
        let t = tensor_concat(&a, &b);
        assert_eq!(t.coeff(&vec![0, 5]), rat(3));
        assert_eq!(t.coeff(&vec![1, 5]), rat(6));
        assert_eq!(t.len(), 2);
    }
}
