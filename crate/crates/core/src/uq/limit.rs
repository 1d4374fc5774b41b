//! Classical limit: substitute `q = e^hbar`, `k_i = e^{hbar h_i}`, truncate
//! after `hbar^2`, and compare the leading coefficient of each quantum
//! relation with its classical counterpart.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::algebra::{Coeff, Gen, NcPoly};
use super::presentation::{classical_tag, Mode, Presentation, Relation};
use super::qscalar::QScalar;
use super::rewrite::kd_letters;
use crate::roots::RootSystem;

/// Number of retained orders, `hbar^0 .. hbar^2`.
pub const ORDERS: usize = 3;

/// Power series in `hbar` truncated after `hbar^2`.
#[derive(Clone, PartialEq, Debug)]
pub struct Series(pub [BigRational; ORDERS]);

impl Series {
    fn constant(c: BigRational) -> Self {
        let mut s = Self::zero();
        s.0[0] = c;
        s
    }

    /// `c e^{n hbar}` truncated.
    fn exp(c: &BigRational, n: i64) -> Self {
        let n = BigRational::from_integer(n.into());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        Series([c.clone(), c * &n, c * &n * &n * half])
    }
}

impl Coeff for Series {
    fn zero() -> Self {
        Series(std::array::from_fn(|_| <BigRational as Zero>::zero()))
    }
    fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
    fn add(&self, o: &Self) -> Self {
        Series(std::array::from_fn(|i| &self.0[i] + &o.0[i]))
    }
    fn mul(&self, o: &Self) -> Self {
        Series(std::array::from_fn(|n| (0..=n).map(|i| &self.0[i] * &o.0[n - i]).sum()))
    }
    fn neg(&self) -> Self {
        Series(std::array::from_fn(|i| -&self.0[i]))
    }
    fn from_int(n: i64) -> Self {
        Series::constant(BigRational::from_integer(n.into()))
    }
}

fn laurent_series(c: &QScalar) -> Series {
    assert!(c.is_laurent(), "coefficient still has a denominator");
    let den: BigInt = c.denominator().terms().map(|(_, x)| x.clone()).sum();
    c.numerator()
        .terms()
        .map(|(n, x)| Series::exp(&BigRational::new(x.clone(), den.clone()), n))
        .fold(Series::zero(), |a, b| a.add(&b))
}

/// Multiply a relation by the product of its distinct coefficient
/// denominators, so every coefficient becomes a Laurent polynomial.
pub fn clear_denominators(p: &NcPoly<QScalar>) -> NcPoly<QScalar> {
    let mut dens = Vec::new();
    for (_, c) in p.terms() {
        let d = QScalar::from_laurent(c.denominator().clone());
        if !dens.contains(&d) {
            dens.push(d);
        }
    }
    let l = dens.iter().fold(QScalar::one(), |a, d| &a * d);
    p.scaled(&l)
}

fn letter_series(rs: &RootSystem, g: Gen) -> NcPoly<Series> {
    let exp_h = |i: usize, s: i64| {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut p = NcPoly::one();
        let mut lin = Series::zero();
        lin.0[1] = BigRational::from_integer(s.into());
        let mut quad = Series::zero();
        quad.0[2] = half;
        p.add_term(vec![Gen::H(i)], &lin);
        p.add_term(vec![Gen::H(i), Gen::H(i)], &quad);
        p
    };
    match g {
        Gen::K(i) => exp_h(i, 1),
        Gen::KInv(i) => exp_h(i, -1),
        Gen::Kd | Gen::KdInv => kd_letters(rs, g == Gen::KdInv)
            .into_iter()
            .fold(NcPoly::one(), |acc, x| acc.times(&letter_series(rs, x))),
        _ => NcPoly::gen(g),
    }
}

/// The relation expanded to second order; entry `m` is the `hbar^m`
/// coefficient as a classical polynomial.
pub fn expand(rs: &RootSystem, p: &NcPoly<QScalar>) -> [NcPoly<BigRational>; ORDERS] {
    let cleared = clear_denominators(p);
    let mut total = NcPoly::<Series>::zero();
    for (w, c) in cleared.terms() {
        let word = w
            .iter()
            .fold(NcPoly::one(), |acc, g| acc.times(&letter_series(rs, *g)));
        total = total.plus(&word.scaled(&laurent_series(c)));
    }
    std::array::from_fn(|m| total.map_coeffs(|s| s.0[m].clone()))
}

/// `Some(lambda)` if `a = lambda b` with `lambda != 0`.
pub fn proportional(a: &NcPoly<BigRational>, b: &NcPoly<BigRational>) -> Option<BigRational> {
    let (w, cb) = b.terms().next()?;
    let ca = a.terms().find(|(x, _)| *x == w).map(|(_, c)| c.clone())?;
    let lambda = ca / cb;
    (*a == b.scaled(&lambda)).then_some(lambda)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitEntry {
    pub tag: String,
    pub indices: Vec<usize>,
    pub classical_tag: Option<String>,
    /// Lowest nonvanishing order in `hbar`, if any below the truncation.
    pub order: Option<usize>,
    pub scale: Option<String>,
    pub matches: bool,
}

fn counterpart<'a>(classical: &'a [Relation<BigRational>], tag: &str, indices: &[usize]) -> Option<&'a Relation<BigRational>> {
    let ctag = classical_tag(tag)?;
    classical.iter().find(|r| r.tag == ctag && indices.starts_with(&r.indices))
}

pub fn check_limit(rs: &RootSystem) -> Vec<LimitEntry> {
    let quantum = Presentation::generate(rs, Mode::Quantum);
    let classical = Presentation::generate(rs, Mode::Classical);
    quantum
        .quantum_relations()
        .iter()
        .map(|rel| {
            let orders = expand(rs, &rel.poly);
            let order = orders.iter().position(|p| !p.is_zero());
            let target = counterpart(classical.classical_relations(), rel.tag, &rel.indices);
            let (matches, scale) = match (order, target) {
                (Some(m), Some(t)) => match proportional(&orders[m], &t.poly) {
                    Some(l) => (true, Some(l.to_string())),
                    None => (false, None),
                },
                (None, None) => (classical_tag(rel.tag).is_none(), None),
                _ => (false, None),
            };
            LimitEntry {
                tag: rel.tag.to_string(),
                indices: rel.indices.clone(),
                classical_tag: target.map(|t| t.tag.to_string()),
                order,
                scale,
                matches,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, CartanType};

    #[test]
    fn every_relation_degenerates_correctly() {
        for (kind, n) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2)] {
            let rs = build_root_system(kind, n).unwrap();
            for e in check_limit(&rs) {
                assert!(e.matches, "{kind:?}{n}: {e:?}");
            }
        }
    }

    #[test]
    fn orders_by_relation_kind() {
        let rs = build_root_system(CartanType::A, 1).unwrap();
        let entries = check_limit(&rs);
        let order_of = |tag: &str| entries.iter().find(|e| e.tag == tag).unwrap().order;
        assert_eq!(order_of("k-inverse"), None);
        assert_eq!(order_of("k-action"), Some(1));
        assert_eq!(order_of("affine-serre"), Some(0));
        let rs2 = build_root_system(CartanType::A, 2).unwrap();
        let entries2 = check_limit(&rs2);
        assert!(entries2.iter().filter(|e| e.tag == "k-commute").all(|e| e.order == Some(2)));
        let diag = entries.iter().find(|e| e.tag == "e-f" && e.indices == [0, 0]).unwrap();
        assert_eq!(diag.order, Some(1));
    }

    #[test]
    fn series_exp_is_truncated() {
        let s = Series::exp(&BigRational::one(), 2);
        let t = Series::exp(&BigRational::one(), -2);
        assert_eq!(s.mul(&t), Series::from_int(1));
    }
}
