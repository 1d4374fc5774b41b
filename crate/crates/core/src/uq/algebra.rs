//! Generators, words and noncommutative polynomials.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use super::qscalar::QScalar;

/// Generator alphabet. The derived order puts every `k`-type letter after
/// the others, as in a normal form.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    E(usize),
    F(usize),
    Ed,
    H(usize),
    K(usize),
    KInv(usize),
    Kd,
    KdInv,
}

impl Gen {
    pub fn is_k(self) -> bool {
        matches!(self, Gen::K(_) | Gen::KInv(_) | Gen::Kd | Gen::KdInv)
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::E(i) => write!(f, "e{}", i + 1),
            Gen::F(i) => write!(f, "f{}", i + 1),
            Gen::Ed => write!(f, "ed"),
            Gen::H(i) => write!(f, "h{}", i + 1),
            Gen::K(i) => write!(f, "k{}", i + 1),
            Gen::KInv(i) => write!(f, "k{}^-1", i + 1),
            Gen::Kd => write!(f, "kd"),
            Gen::KdInv => write!(f, "kd^-1"),
        }
    }
}

pub type Word = Vec<Gen>;

pub fn word_string(w: &[Gen]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(Gen::to_string).collect::<Vec<_>>().join(" ")
}

/// Coefficient ring operations needed by [`NcPoly`].
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(n: i64) -> Self;
}

impl Coeff for QScalar {
    fn zero() -> Self {
        QScalar::zero()
    }
    fn is_zero(&self) -> bool {
        QScalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        QScalar::from_int(n)
    }
}

impl Coeff for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
}

/// Element of the free algebra: a finite sum of coefficient times word.
#[derive(Clone, PartialEq, Debug)]
pub struct NcPoly<C: Coeff> {
    terms: BTreeMap<Word, C>,
}

impl<C: Coeff> Default for NcPoly<C> {
    fn default() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }
}

impl<C: Coeff> NcPoly<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(C::from_int(1), vec![])
    }

    pub fn term(c: C, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, &c);
        p
    }

    pub fn gen(g: Gen) -> Self {
        Self::term(C::from_int(1), vec![g])
    }

    pub fn word(w: &[Gen]) -> Self {
        Self::term(C::from_int(1), w.to_vec())
    }

    pub fn add_term(&mut self, w: Word, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e = e.add(c);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.plus(&o.scaled(&C::from_int(-1)))
    }

    pub fn scaled(&self, c: &C) -> Self {
        let mut out = Self::zero();
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &x.mul(c));
        }
        out
    }

    pub fn times(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, &x.mul(y));
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> NcPoly<D> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    /// Linear extension of a map on words.
    pub fn map_words(&self, f: impl Fn(&[Gen]) -> NcPoly<C>) -> NcPoly<C> {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out = out.plus(&f(w).scaled(c));
        }
        out
    }
}

impl<C: Coeff + fmt::Display> fmt::Display for NcPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) {}", word_string(w)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub coeff: String,
    pub word: String,
}

impl<C: Coeff + fmt::Display> NcPoly<C> {
    pub fn monomials(&self) -> Vec<Monomial> {
        self.terms
            .iter()
            .map(|(w, c)| Monomial {
                coeff: c.to_string(),
                word: word_string(w),
            })
            .collect()
    }
}

/// Element of the `n`-fold tensor power of the free algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct NcTensor<C: Coeff> {
    terms: BTreeMap<Vec<Word>, C>,
}

impl<C: Coeff> NcTensor<C> {
    pub fn zero() -> Self {
        NcTensor { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, w: Vec<Word>, c: &C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                *e = e.add(c);
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Factorwise product.
    pub fn times(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                let w = a
                    .iter()
                    .zip(b)
                    .map(|(p, q)| {
                        let mut r = p.clone();
                        r.extend_from_slice(q);
                        r
                    })
                    .collect();
                out.add_term(w, &x.mul(y));
            }
        }
        out
    }

    pub fn plus(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}
