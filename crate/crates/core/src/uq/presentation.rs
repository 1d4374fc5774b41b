//! Defining relations of `U(g[u])` and `U_q(g[u])` generated from root data.

use num_rational::BigRational;
use serde::Serialize;

use super::algebra::{Coeff, Gen, Monomial, NcPoly};
use super::qscalar::QScalar;
use crate::roots::{CartanType, Root, RootSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Relation<C: Coeff> {
    pub tag: &'static str,
    pub indices: Vec<usize>,
    pub poly: NcPoly<C>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationRecord {
    pub tag: String,
    pub indices: Vec<usize>,
    pub monomials: Vec<Monomial>,
}

impl<C: Coeff + std::fmt::Display> Relation<C> {
    pub fn record(&self) -> RelationRecord {
        RelationRecord {
            tag: self.tag.to_string(),
            indices: self.indices.clone(),
            monomials: self.poly.monomials(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Presentation {
    rs: RootSystem,
    mode: Mode,
    generators: Vec<Gen>,
    quantum: Vec<Relation<QScalar>>,
    classical: Vec<Relation<BigRational>>,
}

/// Weight of a letter in root coordinates; `e_d` has weight `-theta`.
pub fn weight(rs: &RootSystem, g: Gen) -> Root {
    let l = rs.rank();
    let mut w = vec![0; l];
    match g {
        Gen::E(i) => w[i] = 1,
        Gen::F(i) => w[i] = -1,
        Gen::Ed => {
            for (x, t) in w.iter_mut().zip(rs.theta()) {
                *x = -t;
            }
        }
        _ => {}
    }
    w
}

fn add_roots(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `n_ij = 1 - 2 (alpha_i, alpha_j)/(alpha_i, alpha_i)`.
pub fn serre_exponent(rs: &RootSystem, i: usize, j: usize) -> i64 {
    let ai = rs.simple_root(i);
    1 - 2 * rs.inner(&ai, &rs.simple_root(j)) / rs.inner(&ai, &ai)
}

/// `n_i0 = 1 + 2 (alpha_i, theta)/(alpha_i, alpha_i)`.
pub fn affine_exponent(rs: &RootSystem, i: usize) -> i64 {
    let ai = rs.simple_root(i);
    1 + 2 * rs.inner(&ai, rs.theta()) / rs.inner(&ai, &ai)
}

/// Exponents of `k_{delta-theta} = prod k_i^{e_i}`, namely `e_i = -n_i`.
pub fn kd_exponents(rs: &RootSystem) -> Vec<i64> {
    rs.theta().iter().map(|n| -n).collect()
}

pub fn kd_expression(rs: &RootSystem) -> String {
    kd_exponents(rs)
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, e)| if *e == 1 { format!("k{}", i + 1) } else { format!("k{}^{}", i + 1, e) })
        .collect::<Vec<_>>()
        .join(" ")
}

fn is_sl2(rs: &RootSystem) -> bool {
    let label = rs.label();
    label.kind == CartanType::A && label.rank == 1
}

/// Element together with its weight, for building nested q-commutators.
struct Weighted<C: Coeff> {
    poly: NcPoly<C>,
    wt: Root,
}

fn letter<C: Coeff>(rs: &RootSystem, g: Gen) -> Weighted<C> {
    Weighted {
        poly: NcPoly::gen(g),
        wt: weight(rs, g),
    }
}

/// `[x, y]_c = x y - c y x` with `c` a function of the two weights.
fn bracket<C: Coeff>(x: &Weighted<C>, y: &Weighted<C>, c: impl Fn(&[i64], &[i64]) -> C) -> Weighted<C> {
    let coeff = c(&x.wt, &y.wt);
    Weighted {
        poly: x.poly.times(&y.poly).minus(&y.poly.times(&x.poly).scaled(&coeff)),
        wt: add_roots(&x.wt, &y.wt),
    }
}

impl Presentation {
    pub fn generate(rs: &RootSystem, mode: Mode) -> Presentation {
        let l = rs.rank();
        let mut generators = Vec::new();
        for i in 0..l {
            match mode {
                Mode::Quantum => generators.extend([Gen::K(i), Gen::KInv(i)]),
                Mode::Classical => generators.push(Gen::H(i)),
            }
        }
        for i in 0..l {
            generators.extend([Gen::E(i), Gen::F(i)]);
        }
        generators.push(Gen::Ed);
        if mode == Mode::Quantum {
            generators.extend([Gen::Kd, Gen::KdInv]);
        }
        let (quantum, classical) = match mode {
            Mode::Quantum => (quantum_relations(rs), Vec::new()),
            Mode::Classical => (Vec::new(), classical_relations(rs)),
        };
        Presentation {
            rs: rs.clone(),
            mode,
            generators,
            quantum,
            classical,
        }
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn generators(&self) -> &[Gen] {
        &self.generators
    }

    pub fn quantum_relations(&self) -> &[Relation<QScalar>] {
        &self.quantum
    }

    pub fn classical_relations(&self) -> &[Relation<BigRational>] {
        &self.classical
    }

    pub fn relation_count(&self) -> usize {
        self.quantum.len() + self.classical.len()
    }

    pub fn records(&self) -> Vec<RelationRecord> {
        self.quantum
            .iter()
            .map(Relation::record)
            .chain(self.classical.iter().map(Relation::record))
            .collect()
    }

    pub fn tags(&self) -> Vec<&'static str> {
        let mut t: Vec<&'static str> = self.quantum.iter().map(|r| r.tag).chain(self.classical.iter().map(|r| r.tag)).collect();
        t.dedup();
        t
    }
}

fn e_pm(i: usize, sign: usize) -> Gen {
    if sign == 0 {
        Gen::E(i)
    } else {
        Gen::F(i)
    }
}

fn quantum_relations(rs: &RootSystem) -> Vec<Relation<QScalar>> {
    let l = rs.rank();
    let theta = rs.theta().clone();
    let qb = |a: &[i64], b: &[i64]| QScalar::q_pow(rs.inner(a, b));
    let mut out = Vec::new();
    let mut push = |tag: &'static str, indices: Vec<usize>, poly: NcPoly<QScalar>| out.push(Relation { tag, indices, poly });
    let kk = |i: usize, s: usize| if s == 0 { Gen::K(i) } else { Gen::KInv(i) };
    for i in 0..l {
        for j in i + 1..l {
            for s in 0..2 {
                for t in 0..2 {
                    let p = NcPoly::word(&[kk(i, s), kk(j, t)]).minus(&NcPoly::word(&[kk(j, t), kk(i, s)]));
                    push("k-commute", vec![i, j, s, t], p);
                }
            }
        }
    }
    for i in 0..l {
        push("k-inverse", vec![i, 0], NcPoly::word(&[Gen::K(i), Gen::KInv(i)]).minus(&NcPoly::one()));
        push("k-inverse", vec![i, 1], NcPoly::word(&[Gen::KInv(i), Gen::K(i)]).minus(&NcPoly::one()));
    }
    for i in 0..l {
        for j in 0..l {
            for s in 0..2 {
                let x = e_pm(j, s);
                let sign = if s == 0 { 1 } else { -1 };
                let c = QScalar::q_pow(sign * rs.inner(&rs.simple_root(i), &rs.simple_root(j)));
                let p = NcPoly::word(&[Gen::K(i), x, Gen::KInv(i)]).minus(&NcPoly::term(c, vec![x]));
                push("k-action", vec![i, j, s], p);
            }
        }
    }
    let q_minus_qinv = &QScalar::q_pow(1) - &QScalar::q_pow(-1);
    for i in 0..l {
        for j in 0..l {
            let mut p = NcPoly::word(&[Gen::E(i), Gen::F(j)]).minus(&NcPoly::word(&[Gen::F(j), Gen::E(i)]));
            if i == j {
                let k = NcPoly::gen(Gen::K(i)).minus(&NcPoly::gen(Gen::KInv(i)));
                p = p.minus(&k.scaled(&q_minus_qinv.inv()));
            }
            push("e-f", vec![i, j], p);
        }
    }
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            for s in 0..2 {
                let xi = letter(rs, e_pm(i, s));
                let mut acc = letter(rs, e_pm(j, s));
                for _ in 0..serre_exponent(rs, i, j) {
                    acc = bracket(&xi, &acc, qb);
                }
                push("q-serre", vec![i, j, s], acc.poly);
            }
        }
    }
    for i in 0..l {
        let c = QScalar::q_pow(-rs.inner(&rs.simple_root(i), &theta));
        let p = NcPoly::word(&[Gen::K(i), Gen::Ed, Gen::KInv(i)]).minus(&NcPoly::term(c, vec![Gen::Ed]));
        push("k-affine", vec![i], p);
    }
    for i in 0..l {
        let p = NcPoly::word(&[Gen::F(i), Gen::Ed]).minus(&NcPoly::word(&[Gen::Ed, Gen::F(i)]));
        push("f-affine", vec![i], p);
    }
    for i in 0..l {
        let ei = letter(rs, Gen::E(i));
        let mut acc = letter(rs, Gen::Ed);
        for _ in 0..affine_exponent(rs, i) {
            acc = bracket(&ei, &acc, qb);
        }
        push("affine-serre", vec![i], acc.poly);
    }
    let ed = letter::<QScalar>(rs, Gen::Ed);
    if !is_sl2(rs) {
        for i in 0..l {
            if rs.inner(&rs.simple_root(i), &theta) != 0 {
                let inner = bracket(&letter(rs, Gen::E(i)), &ed, qb);
                push("affine-cubic", vec![i], bracket(&inner, &ed, qb).poly);
            }
        }
    } else {
        let mut acc = letter(rs, Gen::E(0));
        for _ in 0..3 {
            acc = bracket(&acc, &ed, qb);
        }
        push("sl2-quartic", vec![0], acc.poly);
    }
    out
}

fn classical_relations(rs: &RootSystem) -> Vec<Relation<BigRational>> {
    let l = rs.rank();
    let theta = rs.theta().clone();
    let one = |_: &[i64], _: &[i64]| BigRational::from_int(1);
    let int = |n: i64| BigRational::from_integer(n.into());
    let comm = |a: &[Gen], b: &[Gen]| -> NcPoly<BigRational> {
        let mut ab = a.to_vec();
        ab.extend_from_slice(b);
        let mut ba = b.to_vec();
        ba.extend_from_slice(a);
        NcPoly::word(&ab).minus(&NcPoly::word(&ba))
    };
    let mut out = Vec::new();
    let mut push = |tag: &'static str, indices: Vec<usize>, poly: NcPoly<BigRational>| out.push(Relation { tag, indices, poly });
    for i in 0..l {
        for j in i + 1..l {
            push("h-commute", vec![i, j], comm(&[Gen::H(i)], &[Gen::H(j)]));
        }
    }
    for i in 0..l {
        for j in 0..l {
            for s in 0..2 {
                let x = e_pm(j, s);
                let sign = if s == 0 { 1 } else { -1 };
                let c = int(sign * rs.inner(&rs.simple_root(i), &rs.simple_root(j)));
                push("h-action", vec![i, j, s], comm(&[Gen::H(i)], &[x]).minus(&NcPoly::term(c, vec![x])));
            }
        }
    }
    for i in 0..l {
        for j in 0..l {
            let mut p = comm(&[Gen::E(i)], &[Gen::F(j)]);
            if i == j {
                p = p.minus(&NcPoly::gen(Gen::H(i)));
            }
            push("e-f", vec![i, j], p);
        }
    }
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            for s in 0..2 {
                let xi = letter(rs, e_pm(i, s));
                let mut acc = letter(rs, e_pm(j, s));
                for _ in 0..serre_exponent(rs, i, j) {
                    acc = bracket(&xi, &acc, one);
                }
                push("serre", vec![i, j, s], acc.poly);
            }
        }
    }
    for i in 0..l {
        let c = int(rs.inner(&rs.simple_root(i), &theta));
        let p = comm(&[Gen::H(i)], &[Gen::Ed]).plus(&NcPoly::term(c, vec![Gen::Ed]));
        push("h-affine", vec![i], p);
    }
    for i in 0..l {
        push("f-affine", vec![i], comm(&[Gen::F(i)], &[Gen::Ed]));
    }
    for i in 0..l {
        let ei = letter(rs, Gen::E(i));
        let mut acc = letter(rs, Gen::Ed);
        for _ in 0..affine_exponent(rs, i) {
            acc = bracket(&ei, &acc, one);
        }
        push("affine-serre", vec![i], acc.poly);
    }
    let ed = letter::<BigRational>(rs, Gen::Ed);
    if !is_sl2(rs) {
        for i in 0..l {
            if rs.inner(&rs.simple_root(i), &theta) != 0 {
                let inner = bracket(&letter(rs, Gen::E(i)), &ed, one);
                push("affine-cubic", vec![i], bracket(&inner, &ed, one).poly);
            }
        }
    } else {
        let mut acc = letter(rs, Gen::E(0));
        for _ in 0..3 {
            acc = bracket(&acc, &ed, one);
        }
        push("sl2-quartic", vec![0], acc.poly);
    }
    out
}

/// Classical counterpart tag of a quantum relation tag (`None` for the
/// inverse relations, which have no classical analogue).
pub fn classical_tag(quantum_tag: &str) -> Option<&'static str> {
    Some(match quantum_tag {
        "k-commute" => "h-commute",
        "k-action" => "h-action",
        "e-f" => "e-f",
        "q-serre" => "serre",
        "k-affine" => "h-affine",
        "f-affine" => "f-affine",
        "affine-serre" => "affine-serre",
        "affine-cubic" => "affine-cubic",
        "sl2-quartic" => "sl2-quartic",
        _ => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::build_root_system;

    fn rs(kind: CartanType, n: usize) -> RootSystem {
        build_root_system(kind, n).unwrap()
    }

    /// Length of the `alpha_i`-string through `beta` above it, plus one.
    /// With `affine` set, the zero vector counts as the finite part of the
    /// imaginary root `delta`.
    fn string_oracle(r: &RootSystem, i: usize, beta: &[i64], affine: bool) -> i64 {
        let mut k = 0;
        let mut cur = beta.to_vec();
        loop {
            cur[i] += 1;
            let zero = cur.iter().all(|x| *x == 0);
            if !(r.is_root(&cur) || affine && zero) {
                return k + 1;
            }
            k += 1;
        }
    }

    #[test]
    fn exponents_match_root_strings() {
        for (kind, n) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::C, 3), (CartanType::G, 2)] {
            let r = rs(kind, n);
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        assert_eq!(serre_exponent(&r, i, j), string_oracle(&r, i, &r.simple_root(j), false));
                    }
                }
                let minus_theta: Vec<i64> = r.theta().iter().map(|x| -x).collect();
                assert_eq!(affine_exponent(&r, i), string_oracle(&r, i, &minus_theta, true));
            }
        }
    }

    #[test]
    fn b2_kd_and_affine_cubic() {
        let r = rs(CartanType::B, 2);
        assert_eq!(kd_exponents(&r), vec![-2, -1]);
        assert_eq!(kd_expression(&r), "k1^-2 k2^-1");
        let p = Presentation::generate(&r, Mode::Quantum);
        let cubic: Vec<_> = p.quantum_relations().iter().filter(|x| x.tag == "affine-cubic").collect();
        assert_eq!(cubic.len(), 1);
        assert_eq!(cubic[0].indices, vec![0]);
        assert!(!p.tags().contains(&"sl2-quartic"));
    }

    #[test]
    fn sl2_quartic_present() {
        let r = rs(CartanType::A, 1);
        let p = Presentation::generate(&r, Mode::Quantum);
        let quartic: Vec<_> = p.quantum_relations().iter().filter(|x| x.tag == "sl2-quartic").collect();
        assert_eq!(quartic.len(), 1);
        assert!(quartic[0].poly.terms().all(|(w, _)| w.len() == 4));
        assert!(!p.tags().contains(&"affine-cubic"));
        let c = Presentation::generate(&r, Mode::Classical);
        assert!(c.tags().contains(&"sl2-quartic"));
    }

    #[test]
    fn serre_word_lengths() {
        let r = rs(CartanType::B, 2);
        let p = Presentation::generate(&r, Mode::Quantum);
        for rel in p.quantum_relations() {
            let expected = match rel.tag {
                "q-serre" => serre_exponent(&r, rel.indices[0], rel.indices[1]) + 1,
                "affine-serre" => affine_exponent(&r, rel.indices[0]) + 1,
                _ => continue,
            };
            assert!(rel.poly.terms().all(|(w, _)| w.len() as i64 == expected));
            assert!(!rel.poly.is_zero());
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let r = rs(CartanType::A, 2);
        let a = Presentation::generate(&r, Mode::Quantum).records();
        let b = Presentation::generate(&r, Mode::Quantum).records();
        assert_eq!(a, b);
    }

    #[test]
    fn q_commutator_at_one_is_commutator() {
        let r = rs(CartanType::A, 2);
        let x = letter::<QScalar>(&r, Gen::E(0));
        let y = letter::<QScalar>(&r, Gen::E(1));
        let qc = bracket(&x, &y, |a, b| QScalar::q_pow(r.inner(a, b)));
        let at_one = qc.poly.map_coeffs(|c| c.at_one().unwrap());
        let plain = NcPoly::<BigRational>::word(&[Gen::E(0), Gen::E(1)]).minus(&NcPoly::word(&[Gen::E(1), Gen::E(0)]));
        assert_eq!(at_one, plain);
    }
}
