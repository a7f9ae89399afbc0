//! Sparse exterior algebra over exact rational scalars.
//!
//! A [`Form`] is a finite sum of wedge monomials `e_{i1} ∧ ... ∧ e_{ik}`
//! indexed by strictly increasing [`MultiIndex`]es. Products carry the
//! Koszul sign of the merging permutation, so graded commutativity
//! `a ∧ b = (-1)^{|a||b|} b ∧ a` holds on the nose.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::Zero;

use crate::scalar::{self, Scalar};

/// Strictly increasing list of 1-based generator labels.
///
/// The empty index denotes the constant monomial `1`. Ordering is
/// lexicographic, which fixes the monomial order used everywhere a
/// deterministic basis is needed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u8>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Builds a multi-index, checking strict monotonicity. Labels are
    /// 1-based; an upper bound is enforced by model-level entry points.
    pub fn new(indices: Vec<u8>) -> Option<Self> {
        if indices.windows(2).all(|w| w[0] < w[1]) && indices.iter().all(|&i| i >= 1) {
            Some(MultiIndex(indices))
        } else {
            None
        }
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.0
    }

    pub fn contains(&self, label: u8) -> bool {
        self.0.binary_search(&label).is_ok()
    }

    pub fn max_label(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// Merges two disjoint increasing lists, returning the merged index and
    /// the Koszul sign (parity of the number of transpositions needed).
    /// Returns `None` when a label repeats.
    pub fn merge(&self, other: &MultiIndex) -> Option<(MultiIndex, i8)> {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut inversions = 0usize;
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            if a[i] == b[j] {
                return None;
            }
            if a[i] < b[j] {
                out.push(a[i]);
                i += 1;
            } else {
                // b[j] jumps over the remaining entries of a
                inversions += a.len() - i;
                out.push(b[j]);
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((MultiIndex(out), sign))
    }

    /// Removes `label`, returning the reduced index and the sign
    /// `(-1)^pos` where `pos` is the position of the label.
    pub fn remove(&self, label: u8) -> Option<(MultiIndex, i8)> {
        let pos = self.0.binary_search(&label).ok()?;
        let mut rest = self.0.clone();
        rest.remove(pos);
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        Some((MultiIndex(rest), sign))
    }

    /// All degree-`k` monomials on labels `1..=dim`, in lexicographic order.
    pub fn all(dim: usize, k: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(k);
        fn rec(dim: usize, k: usize, start: u8, current: &mut Vec<u8>, out: &mut Vec<MultiIndex>) {
            if current.len() == k {
                out.push(MultiIndex(current.clone()));
                return;
            }
            let remaining = k - current.len();
            for label in start..=(dim as u8) {
                if (dim as u8 - label + 1) as usize >= remaining {
                    current.push(label);
                    rec(dim, k, label + 1, current, out);
                    current.pop();
                }
            }
        }
        if k <= dim {
            rec(dim, k, 1, &mut current, &mut out);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        if self.0.iter().all(|&i| i <= 9) {
            write!(f, "e")?;
            for i in &self.0 {
                write!(f, "{i}")?;
            }
            Ok(())
        } else {
            let labels: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
            write!(f, "e{{{}}}", labels.join(","))
        }
    }
}

/// Sparse exterior-algebra element: monomial -> nonzero coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Form {
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl Form {
    pub fn zero() -> Self {
        Form::default()
    }

    pub fn one() -> Self {
        Form::monomial(MultiIndex::empty(), scalar::one())
    }

    pub fn monomial(index: MultiIndex, coeff: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(index, coeff);
        }
        Form { terms }
    }

    /// Basis generator `e_label` (degree 1).
    pub fn generator(label: u8) -> Self {
        Form::monomial(MultiIndex(vec![label]), scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, index: &MultiIndex) -> Scalar {
        self.terms.get(index).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Degree when homogeneous; `None` for 0 or mixed-degree sums.
    pub fn degree(&self) -> Option<usize> {
        let mut degrees = self.terms.keys().map(|ix| ix.degree());
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Largest generator label occurring in the form.
    pub fn max_label(&self) -> u8 {
        self.terms
            .keys()
            .filter_map(|ix| ix.max_label())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, index: MultiIndex, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + coeff;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Form {
        if c.is_zero() {
            return Form::zero();
        }
        Form {
            terms: self
                .terms
                .iter()
                .map(|(ix, v)| (ix.clone(), v.clone() * c))
                .collect(),
        }
    }

    /// Exterior product with Koszul signs. Bilinear, associative, and
    /// graded-commutative; repeated generators annihilate.
    pub fn wedge(&self, other: &Form) -> Form {
        let mut out = Form::zero();
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if let Some((merged, sign)) = ia.merge(ib) {
                    let mut c = ca.clone() * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(merged, c);
                }
            }
        }
        out
    }

    pub fn wedge_pow(&self, exp: usize) -> Form {
        let mut out = Form::one();
        for _ in 0..exp {
            out = out.wedge(self);
        }
        out
    }

    /// Interior product with the generator dual to `label`.
    pub fn contract(&self, label: u8) -> Form {
        let mut out = Form::zero();
        for (ix, c) in &self.terms {
            if let Some((rest, sign)) = ix.remove(label) {
                let mut v = c.clone();
                if sign < 0 {
                    v = -v;
                }
                out.add_term(rest, v);
            }
        }
        out
    }

    /// Projects onto the degree-`k` part.
    pub fn homogeneous_part(&self, k: usize) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(ix, _)| ix.degree() == k)
                .map(|(ix, c)| (ix.clone(), c.clone()))
                .collect(),
        }
    }
}

impl Add<&Form> for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (ix, c) in &rhs.terms {
            out.add_term(ix.clone(), c.clone());
        }
        out
    }
}

impl Sub<&Form> for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        let mut out = self.clone();
        for (ix, c) in &rhs.terms {
            out.add_term(ix.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form {
            terms: self
                .terms
                .iter()
                .map(|(ix, c)| (ix.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul<&Form> for &Form {
    type Output = Form;
    fn mul(self, rhs: &Form) -> Form {
        self.wedge(rhs)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (pos, (ix, c)) in self.terms.iter().enumerate() {
            let unit_ok = ix.degree() > 0;
            let (negative, body) = scalar::signed_coeff(c, unit_ok);
            if pos == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if body.is_empty() {
                write!(f, "{ix}")?;
            } else if ix.degree() == 0 {
                write!(f, "{body}")?;
            } else {
                write!(f, "{body} {ix}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn mono(labels: &[u8]) -> Form {
        Form::monomial(MultiIndex::new(labels.to_vec()).unwrap(), int(1))
    }

    #[test]
    fn wedge_of_adjacent_generators() {
        let e1 = Form::generator(1);
        let e2 = Form::generator(2);
        assert_eq!(e1.wedge(&e2), mono(&[1, 2]));
    }

    #[test]
    fn wedge_with_repeated_generator_vanishes() {
        let e12 = mono(&[1, 2]);
        assert!(e12.wedge(&e12).is_zero());
    }

    #[test]
    fn koszul_sign_from_inversion_count() {
        // merging (1,4) with (2,3) takes two transpositions, so the sign is +1
        let e14 = mono(&[1, 4]);
        let e23 = mono(&[2, 3]);
        assert_eq!(e14.wedge(&e23), mono(&[1, 2, 3, 4]));
        // a single inversion flips the sign
        let e2 = Form::generator(2);
        let e1 = Form::generator(1);
        assert_eq!(e2.wedge(&e1), -&mono(&[1, 2]));
    }

    #[test]
    fn contraction_signs() {
        let e12 = mono(&[1, 2]);
        assert_eq!(e12.contract(1), Form::generator(2));
        assert_eq!(e12.contract(2), -&Form::generator(1));
        assert!(e12.contract(3).is_zero());
    }

    #[test]
    fn monomial_enumeration_is_lexicographic() {
        let all = MultiIndex::all(4, 2);
        assert_eq!(all.len(), 6);
        let rendered: Vec<String> = all.iter().map(|ix| ix.to_string()).collect();
        assert_eq!(rendered, ["e12", "e13", "e14", "e23", "e24", "e34"]);
    }

    #[test]
    fn degree_detection() {
        assert_eq!(Form::one().degree(), Some(0));
        assert_eq!(mono(&[1, 2]).degree(), Some(2));
        assert_eq!(Form::zero().degree(), None);
        let mixed = &Form::one() + &mono(&[1, 2]);
        assert_eq!(mixed.degree(), None);
    }
}
