use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dictionary::PairingTable;
use crate::CcrError;

/// One word of an element in serialized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub word: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

/// Complex combination of words in the field generators; the empty word is
/// the unit. Elements produced by [`CcrAlgebra`] are normal ordered
/// (non-decreasing indices in every word).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Term>", into = "Vec<Term>")]
pub struct AlgebraElement {
    terms: BTreeMap<Vec<usize>, Complex64>,
}

impl From<Vec<Term>> for AlgebraElement {
    fn from(terms: Vec<Term>) -> Self {
        let mut out = Self::zero();
        for t in terms {
            out.accumulate(t.word, Complex64::new(t.re, t.im));
        }
        out
    }
}

impl From<AlgebraElement> for Vec<Term> {
    fn from(a: AlgebraElement) -> Self {
        a.terms.into_iter().map(|(word, c)| Term { word, re: c.re, im: c.im }).collect()
    }
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    /// `c 𝕀`.
    pub fn scalar(c: Complex64) -> Self {
        Self::monomial(Vec::new(), c)
    }

    pub fn unit() -> Self {
        Self::scalar(Complex64::new(1.0, 0.0))
    }

    /// `c Φ_{w_1} ⋯ Φ_{w_k}` as written, not normal ordered.
    pub fn monomial(word: Vec<usize>, c: Complex64) -> Self {
        let mut out = Self::zero();
        out.accumulate(word, c);
        out
    }

    fn accumulate(&mut self, word: Vec<usize>, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        match self.terms.entry(word) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if *e.get() == Complex64::new(0.0, 0.0) {
                    e.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize], Complex64)> {
        self.terms.iter().map(|(w, c)| (w.as_slice(), *c))
    }

    pub fn coefficient(&self, word: &[usize]) -> Complex64 {
        self.terms.get(word).copied().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Longest word, 0 for scalars and for zero.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_normal_ordered(&self) -> bool {
        self.terms.keys().all(|w| w.windows(2).all(|p| p[0] <= p[1]))
    }

    /// Largest index used, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().flat_map(|w| w.iter().copied()).max()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Largest coefficient difference.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).max_abs()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.accumulate(w.clone(), v * c);
        }
        out
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.accumulate(w.clone(), *c);
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<Complex64> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, c: Complex64) -> AlgebraElement {
        self.scale(c)
    }
}

/// CCR algebra of `D` generators with `Φ_i Φ_j − Φ_j Φ_i = i G_ij 𝕀`,
/// represented by normal-ordered words.
#[derive(Debug, Clone, PartialEq)]
pub struct CcrAlgebra {
    table: PairingTable,
}

impl CcrAlgebra {
    pub fn new(table: PairingTable) -> Self {
        Self { table }
    }

    pub fn generators(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &PairingTable {
        &self.table
    }

    fn check(&self, index: usize) -> Result<(), CcrError> {
        if index >= self.generators() {
            return Err(CcrError::IndexOutOfRange { index, len: self.generators() });
        }
        Ok(())
    }

    /// `Φ_i`.
    pub fn field(&self, i: usize) -> Result<AlgebraElement, CcrError> {
        self.check(i)?;
        Ok(AlgebraElement::monomial(vec![i], Complex64::new(1.0, 0.0)))
    }

    /// Normal form of the product `Φ_{w_1} ⋯ Φ_{w_k}`.
    pub fn word(&self, word: &[usize]) -> Result<AlgebraElement, CcrError> {
        for &i in word {
            self.check(i)?;
        }
        let mut out = AlgebraElement::zero();
        self.reduce_into(word.to_vec(), Complex64::new(1.0, 0.0), &mut out);
        Ok(out)
    }

    /// Rewrites `c·word` by `Φ_j Φ_i → Φ_i Φ_j − i G_ij 𝕀` (`i < j`) until
    /// every word is non-decreasing.
    fn reduce_into(&self, word: Vec<usize>, c: Complex64, out: &mut AlgebraElement) {
        let mut stack = vec![(word, c)];
        while let Some((w, c)) = stack.pop() {
            match w.windows(2).position(|p| p[0] > p[1]) {
                None => out.accumulate(w, c),
                Some(k) => {
                    let (j, i) = (w[k], w[k + 1]);
                    let g = self.table.get(i, j);
                    if g != 0.0 {
                        let mut shorter = w.clone();
                        shorter.drain(k..k + 2);
                        stack.push((shorter, c * Complex64::new(0.0, -g)));
                    }
                    let mut swapped = w;
                    swapped.swap(k, k + 1);
                    stack.push((swapped, c));
                }
            }
        }
    }

    /// Normal form of an arbitrary element.
    pub fn normal_form(&self, a: &AlgebraElement) -> Result<AlgebraElement, CcrError> {
        if let Some(i) = a.max_index() {
            self.check(i)?;
        }
        let mut out = AlgebraElement::zero();
        for (w, c) in a.terms() {
            self.reduce_into(w.to_vec(), c, &mut out);
        }
        Ok(out)
    }

    pub fn multiply(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, CcrError> {
        for i in a.max_index().into_iter().chain(b.max_index()) {
            self.check(i)?;
        }
        let mut out = AlgebraElement::zero();
        for (u, x) in a.terms() {
            for (v, y) in b.terms() {
                let mut w = u.to_vec();
                w.extend_from_slice(v);
                self.reduce_into(w, x * y, &mut out);
            }
        }
        Ok(out)
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(&self, a: &AlgebraElement, b: &AlgebraElement) -> Result<AlgebraElement, CcrError> {
        Ok(&self.multiply(a, b)? - &self.multiply(b, a)?)
    }

    /// `a*`: conjugated coefficients, reversed words, normal ordered.
    pub fn star(&self, a: &AlgebraElement) -> Result<AlgebraElement, CcrError> {
        let mut out = AlgebraElement::zero();
        for (w, c) in a.terms() {
            if let Some(&i) = w.iter().max() {
                self.check(i)?;
            }
            self.reduce_into(w.iter().rev().copied().collect(), c.conj(), &mut out);
        }
        Ok(out)
    }

    /// Image of `a` under the homomorphism sending generator `k` of the
    /// domain algebra to `images[k]` in this one.
    pub fn substitute(&self, a: &AlgebraElement, images: &[AlgebraElement]) -> Result<AlgebraElement, CcrError> {
        let mut out = AlgebraElement::zero();
        for (w, c) in a.terms() {
            let mut term = AlgebraElement::scalar(c);
            for &k in w {
                let image = images.get(k).ok_or(CcrError::IndexOutOfRange { index: k, len: images.len() })?;
                term = self.multiply(&term, image)?;
            }
            out = &out + &term;
        }
        Ok(out)
    }
}
