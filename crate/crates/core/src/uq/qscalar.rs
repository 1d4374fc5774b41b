//! Rational functions in `q` with integer coefficients, kept as reduced
//! ratios of Laurent polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Laurent polynomial `sum c_n q^n`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Laurent(BTreeMap<i64, BigInt>);

impl Laurent {
    pub fn zero() -> Self {
        Laurent(BTreeMap::new())
    }

    pub fn monomial(c: BigInt, n: i64) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(n, c);
        }
        Laurent(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.0.iter().map(|(n, c)| (*n, c))
    }

    fn min_exp(&self) -> i64 {
        *self.0.keys().next().unwrap_or(&0)
    }

    fn add(&self, other: &Laurent) -> Laurent {
        let mut m = self.0.clone();
        for (n, c) in &other.0 {
            let e = m.entry(*n).or_insert_with(BigInt::zero);
            *e += c;
            if e.is_zero() {
                m.remove(n);
            }
        }
        Laurent(m)
    }

    fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out = out.add(&Laurent::monomial(x * y, a + b));
            }
        }
        out
    }

    fn neg(&self) -> Laurent {
        Laurent(self.0.iter().map(|(n, c)| (*n, -c)).collect())
    }


    /// Dense coefficients after shifting the lowest exponent to 0.
    fn dense(&self) -> Vec<BigRational> {
        let lo = self.min_exp();
        let hi = *self.0.keys().next_back().unwrap_or(&0);
        let mut v = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for (n, c) in &self.0 {
            v[(n - lo) as usize] = BigRational::from_integer(c.clone());
        }
        v
    }
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let c = &r[r.len() - 1] / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = &r[k + i] - &(&c * bi);
        }
        q[k] = c;
        trim(&mut r);
    }
    (q, r)
}

fn poly_gcd(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = r;
    }
    x
}

/// Rescales a rational-coefficient polynomial to a primitive integer one,
/// returning it with the factor removed (`p = factor * primitive`).
fn to_integer(p: &[BigRational]) -> (BigRational, Vec<BigInt>) {
    let den = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let g = if g.is_zero() { BigInt::one() } else { g };
    let prim = ints.iter().map(|c| c / &g).collect();
    (BigRational::new(g, den), prim)
}

fn from_dense(v: &[BigInt], shift: i64) -> Laurent {
    let mut out = Laurent::zero();
    for (i, c) in v.iter().enumerate() {
        out = out.add(&Laurent::monomial(c.clone(), i as i64 + shift));
    }
    out
}

/// `num / den` in lowest terms: the denominator has lowest exponent 0 and
/// positive leading coefficient, and the two share no common factor.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QScalar {
    num: Laurent,
    den: Laurent,
}

impl QScalar {
    pub fn zero() -> Self {
        QScalar {
            num: Laurent::zero(),
            den: Laurent::monomial(BigInt::one(), 0),
        }
    }

    pub fn one() -> Self {
        QScalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        QScalar::q_pow_scaled(n, 0)
    }

    /// `q^n`.
    pub fn q_pow(n: i64) -> Self {
        QScalar::q_pow_scaled(1, n)
    }

    /// `c q^n`.
    pub fn q_pow_scaled(c: i64, n: i64) -> Self {
        QScalar::from_laurent(Laurent::monomial(BigInt::from(c), n))
    }

    pub fn from_laurent(num: Laurent) -> Self {
        QScalar::new(num, Laurent::monomial(BigInt::one(), 0))
    }

    pub fn new(num: Laurent, den: Laurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return QScalar::zero();
        }
        let shift_n = num.min_exp();
        let shift_d = den.min_exp();
        let (a, b) = (num.dense(), den.dense());
        let g = poly_gcd(&a, &b);
        let (qa, _) = divrem(&a, &g);
        let (qb, _) = divrem(&b, &g);
        let (fa, pa) = to_integer(&qa);
        let (fb, pb) = to_integer(&qb);
        let ratio = fa / fb;
        let mut sign = BigInt::one();
        if pb.last().is_some_and(|c| c.is_negative()) {
            sign = -sign;
        }
        let numer: Vec<BigInt> = pa.iter().map(|c| c * ratio.numer() * &sign).collect();
        let denom: Vec<BigInt> = pb.iter().map(|c| c * ratio.denom() * &sign).collect();
        QScalar {
            num: from_dense(&numer, shift_n - shift_d),
            den: from_dense(&denom, 0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    /// Whether the value is a Laurent polynomial (denominator a constant).
    pub fn is_laurent(&self) -> bool {
        self.den.0.len() == 1 && self.den.0.contains_key(&0)
    }

    pub fn inv(&self) -> QScalar {
        assert!(!self.is_zero(), "division by zero");
        QScalar::new(self.den.clone(), self.num.clone())
    }

    /// Value at `q = 1`, if defined.
    pub fn at_one(&self) -> Option<BigRational> {
        let eval = |p: &Laurent| p.0.values().fold(BigInt::zero(), |a, c| a + c);
        let d = eval(&self.den);
        (!d.is_zero()).then(|| BigRational::new(eval(&self.num), d))
    }
}

impl Default for QScalar {
    fn default() -> Self {
        QScalar::zero()
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, o: &QScalar) -> QScalar {
        if self.den == o.den {
            return QScalar::new(self.num.add(&o.num), self.den.clone());
        }
        QScalar::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, o: &QScalar) -> QScalar {
        self + &(-o)
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, o: &QScalar) -> QScalar {
        if self.is_zero() || o.is_zero() {
            return QScalar::zero();
        }
        QScalar::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

fn fmt_laurent(p: &Laurent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    for (i, (n, c)) in p.0.iter().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i > 0 {
            write!(f, "{}", if neg { "-" } else { "+" })?;
        } else if neg {
            write!(f, "-")?;
        }
        match *n {
            0 => write!(f, "{a}")?,
            _ => {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if *n == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{n}")?;
                }
            }
        }
    }
    Ok(())
}

impl fmt::Display for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Laurent::monomial(BigInt::one(), 0) {
            return fmt_laurent(&self.num, f);
        }
        write!(f, "(")?;
        fmt_laurent(&self.num, f)?;
        write!(f, ")/(")?;
        fmt_laurent(&self.den, f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for QScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q_minus_qinv() -> QScalar {
        &QScalar::q_pow(1) - &QScalar::q_pow(-1)
    }

    #[test]
    fn reduces_common_factors() {
        // (q^2 - q^-2)/(q - q^-1) = q + q^-1
        let a = &QScalar::q_pow(2) - &QScalar::q_pow(-2);
        let r = &a * &q_minus_qinv().inv();
        assert_eq!(r, &QScalar::q_pow(1) + &QScalar::q_pow(-1));
        assert!(r.is_laurent());
        assert_eq!(r.to_string(), "q+q^-1");
    }

    #[test]
    fn display_of_fraction() {
        let r = q_minus_qinv().inv();
        assert_eq!(r.to_string(), "(q)/(q^2-1)");
        assert_eq!(r.at_one(), None);
        assert_eq!(QScalar::q_pow_scaled(3, 2).at_one(), Some(BigRational::from_integer(3.into())));
    }

    fn small() -> impl Strategy<Value = QScalar> {
        prop::collection::vec((-3i64..=3, -2i64..=2), 1..4).prop_map(|terms| {
            terms
                .into_iter()
                .fold(QScalar::zero(), |acc, (c, n)| &acc + &QScalar::q_pow_scaled(c, n))
        })
    }

    proptest! {
        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a - &a, QScalar::zero());
            if !b.is_zero() {
                let x = &a * &b.inv();
                prop_assert_eq!(&x * &b, a.clone());
                let denom_ok = x.denominator().terms().next().map(|(n, _)| n) == Some(0);
                prop_assert!(denom_ok);
            }
        }
    }
}
