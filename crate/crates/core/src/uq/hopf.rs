//! Coproduct, counit and antipode on generators, with axiom checks carried
//! out in normal form.

use serde::Serialize;

use super::algebra::{Gen, NcTensor, Word};
use super::presentation::{Mode, Presentation};
use super::qscalar::QScalar;
use super::rewrite::{kd_letters, normal_word_direct};
use crate::roots::RootSystem;

type QPoly = super::algebra::NcPoly<QScalar>;
type QTensor = NcTensor<QScalar>;

fn t2(a: &[Gen], b: &[Gen]) -> QTensor {
    let mut t = QTensor::zero();
    t.add_term(vec![a.to_vec(), b.to_vec()], &QScalar::one());
    t
}

pub fn coproduct_gen(rs: &RootSystem, g: Gen) -> QTensor {
    match g {
        Gen::K(_) | Gen::KInv(_) | Gen::Kd | Gen::KdInv => t2(&[g], &[g]),
        Gen::E(i) => t2(&[g], &[]).plus(&t2(&[Gen::KInv(i)], &[g])),
        Gen::F(i) => t2(&[g], &[Gen::K(i)]).plus(&t2(&[], &[g])),
        Gen::Ed => t2(&[g], &[]).plus(&t2(&kd_letters(rs, true), &[g])),
        Gen::H(_) => t2(&[g], &[]).plus(&t2(&[], &[g])),
    }
}

fn unit_tensor(n: usize) -> QTensor {
    let mut t = QTensor::zero();
    t.add_term(vec![vec![]; n], &QScalar::one());
    t
}

/// `Delta` extended multiplicatively to a word.
pub fn coproduct_word(rs: &RootSystem, w: &[Gen]) -> QTensor {
    w.iter().fold(unit_tensor(2), |acc, g| acc.times(&coproduct_gen(rs, *g)))
}

/// Apply `Delta` to factor `slot` of every term, producing one more factor.
fn coproduct_at(rs: &RootSystem, t: &QTensor, slot: usize) -> QTensor {
    let mut out = QTensor::zero();
    for (words, c) in t.terms() {
        for (pair, d) in coproduct_word(rs, &words[slot]).terms() {
            let mut nw = words[..slot].to_vec();
            nw.extend(pair.iter().cloned());
            nw.extend(words[slot + 1..].iter().cloned());
            out.add_term(nw, &(c * d));
        }
    }
    out
}

pub fn counit_word(w: &[Gen]) -> QScalar {
    if w.iter().all(|g| g.is_k()) {
        QScalar::one()
    } else {
        QScalar::zero()
    }
}

pub fn antipode_gen(rs: &RootSystem, g: Gen) -> QPoly {
    let neg = QScalar::from_int(-1);
    match g {
        Gen::K(i) => QPoly::gen(Gen::KInv(i)),
        Gen::KInv(i) => QPoly::gen(Gen::K(i)),
        Gen::Kd => QPoly::word(&kd_letters(rs, true)),
        Gen::KdInv => QPoly::word(&kd_letters(rs, false)),
        Gen::E(i) => QPoly::term(neg, vec![Gen::K(i), g]),
        Gen::F(i) => QPoly::term(neg, vec![g, Gen::KInv(i)]),
        Gen::Ed => {
            let mut w = kd_letters(rs, false);
            w.push(g);
            QPoly::term(neg, w)
        }
        Gen::H(_) => QPoly::term(neg, vec![g]),
    }
}

/// Anti-multiplicative extension of the antipode.
pub fn antipode_word(rs: &RootSystem, w: &[Gen]) -> QPoly {
    w.iter().rev().fold(QPoly::one(), |acc, g| acc.times(&antipode_gen(rs, *g)))
}

pub fn normalize_tensor(rs: &RootSystem, t: &QTensor) -> QTensor {
    let mut out = QTensor::zero();
    for (words, c) in t.terms() {
        let mut coeff = c.clone();
        let mut nw = Vec::with_capacity(words.len());
        for w in words {
            let (q, x) = normal_word_direct(rs, w);
            coeff = &coeff * &q;
            nw.push(x);
        }
        out.add_term(nw, &coeff);
    }
    out
}

fn normalize(rs: &RootSystem, p: &QPoly) -> QPoly {
    super::rewrite::normal_form(rs, p)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorCheck {
    pub generator: String,
    pub coassociative: bool,
    pub counit: bool,
    pub antipode: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HopfReport {
    pub generators: Vec<GeneratorCheck>,
    pub counit_kills_relations: bool,
}

impl HopfReport {
    pub fn passed(&self) -> bool {
        self.counit_kills_relations && self.generators.iter().all(|g| g.coassociative && g.counit && g.antipode)
    }
}

fn check_generator(rs: &RootSystem, g: Gen) -> GeneratorCheck {
    let x: Word = vec![g];
    let x_nf = normalize(rs, &QPoly::word(&x));
    let delta = coproduct_word(rs, &x);
    let left = normalize_tensor(rs, &coproduct_at(rs, &delta, 0));
    let right = normalize_tensor(rs, &coproduct_at(rs, &delta, 1));

    let mut eps_left = QPoly::zero();
    let mut eps_right = QPoly::zero();
    let mut s_left = QPoly::zero();
    let mut s_right = QPoly::zero();
    for (pair, c) in delta.terms() {
        eps_left.add_term(pair[1].clone(), &(c * &counit_word(&pair[0])));
        eps_right.add_term(pair[0].clone(), &(c * &counit_word(&pair[1])));
        s_left = s_left.plus(&antipode_word(rs, &pair[0]).times(&QPoly::word(&pair[1])).scaled(c));
        s_right = s_right.plus(&QPoly::word(&pair[0]).times(&antipode_word(rs, &pair[1])).scaled(c));
    }
    let eps_x = normalize(rs, &QPoly::one().scaled(&counit_word(&x)));
    GeneratorCheck {
        generator: g.to_string(),
        coassociative: left == right,
        counit: normalize(rs, &eps_left) == x_nf && normalize(rs, &eps_right) == x_nf,
        antipode: normalize(rs, &s_left) == eps_x && normalize(rs, &s_right) == eps_x,
    }
}

/// Hopf axioms on every quantum generator, plus `epsilon(R) = 0` for every
/// defining relation `R`.
pub fn check_hopf(rs: &RootSystem) -> HopfReport {
    let pres = Presentation::generate(rs, Mode::Quantum);
    let generators = pres.generators().iter().map(|g| check_generator(rs, *g)).collect();
    let counit_kills_relations = pres.quantum_relations().iter().all(|r| {
        r.poly
            .terms()
            .fold(QScalar::zero(), |acc, (w, c)| &acc + &(c * &counit_word(w)))
            .is_zero()
    });
    HopfReport {
        generators,
        counit_kills_relations,
    }
}
