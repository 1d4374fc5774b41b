//! Normal forms in `U_q(g[u])` modulo the torus relations: every `k` letter
//! is moved to the right, exponents are collected and `k_d` is expanded.
//!
//! Two independent strategies are provided. The direct one reads off the
//! final `q` power in a single pass; the stepwise one applies adjacent
//! rewrite rules until none applies. They must agree.

use serde::Serialize;

use super::algebra::{Gen, NcPoly, Word};
use super::presentation::{kd_exponents, weight};
use super::qscalar::QScalar;
use crate::roots::{Root, RootSystem};

type QPoly = NcPoly<QScalar>;

fn repeat(g: Gen, n: i64) -> impl Iterator<Item = Gen> {
    std::iter::repeat_n(g, n.unsigned_abs() as usize)
}

/// Letters of `k_d^{sign}` as a product of `k_i^{+-1}`.
pub fn kd_letters(rs: &RootSystem, inverse: bool) -> Word {
    let mut w = Vec::new();
    for (i, e) in kd_exponents(rs).into_iter().enumerate() {
        let e = if inverse { -e } else { e };
        let g = if e > 0 { Gen::K(i) } else { Gen::KInv(i) };
        w.extend(repeat(g, e));
    }
    w
}

fn k_sign(g: Gen) -> Option<(usize, i64)> {
    match g {
        Gen::K(i) => Some((i, 1)),
        Gen::KInv(i) => Some((i, -1)),
        _ => None,
    }
}

/// Order of `k` letters in a normal form: by index, then `k_i` before `k_i^{-1}`.
fn k_key(g: Gen) -> (usize, i64) {
    k_sign(g).map_or((usize::MAX, 0), |(i, s)| (i, -s))
}

fn substitute_kd(rs: &RootSystem, w: &[Gen]) -> Word {
    let mut out = Vec::with_capacity(w.len());
    for &g in w {
        match g {
            Gen::Kd => out.extend(kd_letters(rs, false)),
            Gen::KdInv => out.extend(kd_letters(rs, true)),
            _ => out.push(g),
        }
    }
    out
}

fn k_suffix(exps: &[i64]) -> Word {
    let mut w: Word = exps
        .iter()
        .enumerate()
        .flat_map(|(i, &e)| repeat(if e > 0 { Gen::K(i) } else { Gen::KInv(i) }, e))
        .collect();
    w.sort_by_key(|g| k_key(*g));
    w
}

/// Single-pass normal form of a word.
pub fn normal_word_direct(rs: &RootSystem, w: &[Gen]) -> (QScalar, Word) {
    let w = substitute_kd(rs, w);
    let l = rs.rank();
    let mut exps = vec![0i64; l];
    let mut q = 0i64;
    let mut trailing: Root = vec![0; l];
    let mut head = Vec::new();
    for &g in w.iter().rev() {
        match k_sign(g) {
            Some((i, s)) => {
                exps[i] += s;
                q += s * rs.inner(&rs.simple_root(i), &trailing);
            }
            None => {
                head.push(g);
                for (t, x) in trailing.iter_mut().zip(weight(rs, g)) {
                    *t += x;
                }
            }
        }
    }
    head.reverse();
    head.extend(k_suffix(&exps));
    (QScalar::q_pow(q), head)
}

/// One rewrite at the leftmost position where a rule applies.
pub fn rewrite_step(rs: &RootSystem, w: &[Gen]) -> Option<(QScalar, Word)> {
    (0..w.len()).find_map(|p| rewrite_at(rs, w, p))
}

/// Apply the rule whose left side starts at position `p`, if any.
pub fn rewrite_at(rs: &RootSystem, w: &[Gen], p: usize) -> Option<(QScalar, Word)> {
    let splice = |mid: &[Gen], len: usize| {
        let mut out = w[..p].to_vec();
        out.extend_from_slice(mid);
        out.extend_from_slice(&w[p + len..]);
        out
    };
    match w[p] {
        Gen::Kd => return Some((QScalar::one(), splice(&kd_letters(rs, false), 1))),
        Gen::KdInv => return Some((QScalar::one(), splice(&kd_letters(rs, true), 1))),
        _ => {}
    }
    let (a, b) = (w[p], *w.get(p + 1)?);
    let (i, s) = k_sign(a)?;
    if !b.is_k() {
        let c = QScalar::q_pow(s * rs.inner(&rs.simple_root(i), &weight(rs, b)));
        return Some((c, splice(&[b, a], 2)));
    }
    if let Some((j, t)) = k_sign(b) {
        if i == j && s == -t {
            return Some((QScalar::one(), splice(&[], 2)));
        }
        if k_key(a) > k_key(b) {
            return Some((QScalar::one(), splice(&[b, a], 2)));
        }
    }
    None
}

/// Lexicographic termination measure; every rewrite step strictly lowers it.
pub fn measure(w: &[Gen]) -> (usize, usize, usize, usize) {
    let kd = w.iter().filter(|g| matches!(g, Gen::Kd | Gen::KdInv)).count();
    let mut crossings = 0;
    let mut k_count = 0;
    let mut inversions = 0;
    for (p, &g) in w.iter().enumerate() {
        if g.is_k() {
            k_count += 1;
            let rest = &w[p + 1..];
            crossings += rest.iter().filter(|x| !x.is_k()).count();
            inversions += rest.iter().filter(|x| x.is_k() && k_key(**x) < k_key(g)).count();
        }
    }
    (kd, crossings, k_count, inversions)
}

pub fn normal_word_stepwise(rs: &RootSystem, w: &[Gen]) -> (QScalar, Word) {
    let mut coeff = QScalar::one();
    let mut cur = w.to_vec();
    while let Some((c, next)) = rewrite_step(rs, &cur) {
        coeff = &coeff * &c;
        cur = next;
    }
    (coeff, cur)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Direct,
    Stepwise,
}

pub fn normal_form_with(rs: &RootSystem, p: &QPoly, strategy: Strategy) -> QPoly {
    let mut out = QPoly::zero();
    for (w, c) in p.terms() {
        let (q, nw) = match strategy {
            Strategy::Direct => normal_word_direct(rs, w),
            Strategy::Stepwise => normal_word_stepwise(rs, w),
        };
        out.add_term(nw, &(c * &q));
    }
    out
}

pub fn normal_form(rs: &RootSystem, p: &QPoly) -> QPoly {
    normal_form_with(rs, p, Strategy::Direct)
}

pub fn is_normal(w: &[Gen]) -> bool {
    let first_k = w.iter().position(|g| g.is_k()).unwrap_or(w.len());
    let tail = &w[first_k..];
    tail.iter().all(|g| k_sign(*g).is_some())
        && tail.windows(2).all(|p| k_key(p[0]) <= k_key(p[1]))
        && tail.windows(2).all(|p| !(k_sign(p[0]).unwrap().0 == k_sign(p[1]).unwrap().0 && p[0] != p[1]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub words_checked: usize,
    pub strategies_agree: bool,
    pub locally_confluent: bool,
    pub measure_decreases: bool,
}

impl ConfluenceReport {
    pub fn passed(&self) -> bool {
        self.strategies_agree && self.locally_confluent && self.measure_decreases
    }
}

/// Exhaustive check on every word of length at most `max_len` over the
/// quantum alphabet: both strategies agree, every one-step branching rejoins,
/// and each step lowers [`measure`].
pub fn check_confluence(rs: &RootSystem, alphabet: &[Gen], max_len: usize) -> ConfluenceReport {
    let mut words: Vec<Word> = vec![vec![]];
    let mut frontier: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        frontier = frontier
            .iter()
            .flat_map(|w| {
                alphabet.iter().map(move |g| {
                    let mut x = w.clone();
                    x.push(*g);
                    x
                })
            })
            .collect();
        words.extend(frontier.iter().cloned());
    }
    let mut report = ConfluenceReport {
        words_checked: words.len(),
        strategies_agree: true,
        locally_confluent: true,
        measure_decreases: true,
    };
    for w in &words {
        let direct = normal_word_direct(rs, w);
        let step = normal_word_stepwise(rs, w);
        if direct != step || !is_normal(&direct.1) {
            report.strategies_agree = false;
        }
        for p in 0..w.len() {
            if let Some((c, next)) = rewrite_at(rs, w, p) {
                if measure(&next) >= measure(w) {
                    report.measure_decreases = false;
                }
                let (c2, nf) = normal_word_stepwise(rs, &next);
                if (&c * &c2, nf) != step {
                    report.locally_confluent = false;
                }
            }
        }
    }
    report
}
