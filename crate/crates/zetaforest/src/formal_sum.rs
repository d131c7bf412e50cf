//! Normalized formal linear combinations with exact rational coefficients.
//!
//! A [`FormalSum`] maps terms to `BigRational` coefficients and never stores a
//! zero coefficient, so structural equality coincides with mathematical
//! equality. Terms are kept in a `BTreeMap`, which fixes a deterministic
//! iteration order (the term type's `Ord`).

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalSum<T: Ord> {
    terms: BTreeMap<T, BigRational>,
}

impl<T: Ord> Default for FormalSum<T> {
    fn default() -> Self {
        FormalSum {
            terms: BTreeMap::new(),
        }
    }
}

impl<T: Ord + Clone> FormalSum<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The sum consisting of a single term with coefficient 1.
    pub fn term(t: T) -> Self {
        Self::with_coefficient(t, BigRational::from_integer(1.into()))
    }

    pub fn with_coefficient(t: T, c: BigRational) -> Self {
        let mut s = Self::zero();
        s.add_term(t, c);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (T, BigRational)>) -> Self {
        let mut s = Self::zero();
        for (t, c) in terms {
            s.add_term(t, c);
        }
        s
    }

    /// Adds `c * t`, dropping the entry if the total coefficient cancels.
    pub fn add_term(&mut self, t: T, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(t);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let new = o.get() + c;
                if new.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = new;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FormalSum {
            terms: self.terms.iter().map(|(t, v)| (t.clone(), v * c)).collect(),
        }
    }

    /// Pushes every term through `f`, merging collisions.
    pub fn map_terms<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> FormalSum<U> {
        let mut out = FormalSum::zero();
        for (t, c) in &self.terms {
            out.add_term(f(t), c.clone());
        }
        out
    }

    pub fn coefficient(&self, t: &T) -> BigRational {
        self.terms.get(t).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of all coefficients (the "mass" of the sum).
    pub fn coefficient_mass(&self) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.terms.values() {
            acc += c;
        }
        acc
    }
}

impl<T: Ord + Clone> FromIterator<(T, BigRational)> for FormalSum<T> {
    fn from_iter<I: IntoIterator<Item = (T, BigRational)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}
