//! Quasi-trigonometric solutions `X(u,v) = v Omega/(u-v) + p(u,v)`, the
//! classical Yang-Baxter check, the correspondence with Lagrangian
//! subalgebras `W` of `g((u^-1)) x g`, and the gauge action of `g[u]`
//! automorphisms.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::grading::{order_model_perp, sigma_lift, DoubleWindow, VertexData};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Subspace, Vector};
use crate::manin::{verify_manin, LagrangianSubalgebra};
use crate::scalar::Scalar;
use crate::tensor::{casimir, dual_basis};

/// `(left index, right index, deg u, deg v)`.
pub type TermKey = (usize, usize, u32, u32);

/// Polynomial part `p(u,v) = sum c u^du v^dv x_i (x) x_j`; the singular part
/// `v Omega/(u-v)` is implied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiTrigSolution {
    dim: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionTerm {
    pub left_basis_index: usize,
    pub right_basis_index: usize,
    pub deg_u: u32,
    pub deg_v: u32,
    pub scalar: Scalar,
}

fn add_to(map: &mut BTreeMap<TermKey, Scalar>, key: TermKey, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = map.entry(key).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        map.remove(&key);
    }
}

impl QuasiTrigSolution {
    pub fn zero(dim: usize) -> Self {
        QuasiTrigSolution {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn add_term(&mut self, key: TermKey, c: &Scalar) {
        assert!(key.0 < self.dim && key.1 < self.dim);
        add_to(&mut self.terms, key, c);
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, Scalar> {
        &self.terms
    }

    pub fn get(&self, key: TermKey) -> Scalar {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn deg_u(&self) -> u32 {
        self.terms.keys().map(|k| k.2).max().unwrap_or(0)
    }

    pub fn deg_v(&self) -> u32 {
        self.terms.keys().map(|k| k.3).max().unwrap_or(0)
    }

    pub fn plus(&self, other: &QuasiTrigSolution) -> QuasiTrigSolution {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn minus(&self, other: &QuasiTrigSolution) -> QuasiTrigSolution {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &-c);
        }
        out
    }

    /// `p^{21}(v,u)`.
    pub fn flipped(&self) -> QuasiTrigSolution {
        let mut out = QuasiTrigSolution::zero(self.dim);
        for (&(i, j, du, dv), c) in &self.terms {
            out.add_term((j, i, dv, du), c);
        }
        out
    }

    /// Whether the polynomial part vanishes except for constant terms.
    pub fn is_constant(&self) -> bool {
        self.deg_u() == 0 && self.deg_v() == 0
    }

    /// Radicand used by the coefficients (1 when all are rational).
    pub fn radicand(&self) -> u64 {
        self.terms.values().map(Scalar::radicand).find(|&d| d > 1).unwrap_or(1)
    }

    pub fn to_records(&self) -> Vec<SolutionTerm> {
        self.terms
            .iter()
            .map(|(&(i, j, du, dv), c)| SolutionTerm {
                left_basis_index: i,
                right_basis_index: j,
                deg_u: du,
                deg_v: dv,
                scalar: c.clone(),
            })
            .collect()
    }

    pub fn from_records(dim: usize, records: &[SolutionTerm]) -> Result<Self, CoreError> {
        let mut out = QuasiTrigSolution::zero(dim);
        for r in records {
            if r.left_basis_index >= dim || r.right_basis_index >= dim {
                return Err(CoreError::Parse(format!(
                    "basis index out of range in term ({}, {})",
                    r.left_basis_index, r.right_basis_index
                )));
            }
            out.add_term((r.left_basis_index, r.right_basis_index, r.deg_u, r.deg_v), &r.scalar);
        }
        Ok(out)
    }
}

/// `p = sum_{alpha>0} e_alpha (x) f_alpha + Omega_0 / 2`.
pub fn standard_r3(g: &LieAlgebra) -> QuasiTrigSolution {
    let c = casimir(g);
    let mut out = QuasiTrigSolution::zero(g.dim());
    for (k, v) in c.positive_part.terms() {
        out.add_term((k[0], k[1], 0, 0), v);
    }
    let half = Scalar::from_frac(1, 2);
    for (k, v) in c.cartan_part.terms() {
        out.add_term((k[0], k[1], 0, 0), &(v * &half));
    }
    out
}

fn omega_terms(g: &LieAlgebra) -> QuasiTrigSolution {
    let mut out = QuasiTrigSolution::zero(g.dim());
    for (k, v) in casimir(g).omega.terms() {
        out.add_term((k[0], k[1], 0, 0), v);
    }
    out
}

/// `X(u,v) + X^{21}(v,u) = 0`, i.e. `p(u,v) + p^{21}(v,u) = Omega`.
pub fn is_unitary(g: &LieAlgebra, x: &QuasiTrigSolution) -> bool {
    x.plus(&x.flipped()) == omega_terms(g)
}

type Key3 = (usize, usize, usize, u32, u32, u32);
type Poly3 = HashMap<Key3, Scalar>;

fn acc3(map: &mut Poly3, key: Key3, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&key) {
        Some(e) => *e += &c,
        None => {
            map.insert(key, c);
        }
    }
}

/// Numerator `N(x,y) = y Omega + (x - y) p(x,y)` with `X = N/(x-y)`.
fn numerator(g: &LieAlgebra, x: &QuasiTrigSolution) -> Vec<(usize, usize, u32, u32, Scalar)> {
    let mut n = BTreeMap::new();
    for (&(i, j, _, _), c) in omega_terms(g).terms() {
        add_to(&mut n, (i, j, 0, 1), c);
    }
    for (&(i, j, du, dv), c) in x.terms() {
        add_to(&mut n, (i, j, du + 1, dv), c);
        add_to(&mut n, (i, j, du, dv + 1), &-c);
    }
    n.into_iter().map(|((i, j, a, b), c)| (i, j, a, b, c)).collect()
}

/// `(u-v)(u-w)(v-w) CYB(X)` as a polynomial in `u, v, w` with values in
/// `g (x) g (x) g`; zero entries are removed.
pub fn cybe_residual(g: &LieAlgebra, x: &QuasiTrigSolution) -> BTreeMap<Key3, Scalar> {
    let n = numerator(g, x);
    let total = n
        .par_iter()
        .fold(Poly3::new, |mut acc, (a, b, p, q, c1)| {
            for (c, d, r, s, c2) in &n {
                let c12 = c1 * c2;
                // [N12(u,v), N13(u,w)] (v - w)
                for (k, sc) in g.basis_bracket(*a, *c) {
                    let coef = &c12 * sc;
                    acc3(&mut acc, (*k, *b, *d, p + r, q + 1, *s), coef.clone());
                    acc3(&mut acc, (*k, *b, *d, p + r, *q, s + 1), -coef);
                }
                // [N12(u,v), N23(v,w)] (u - w)
                for (k, sc) in g.basis_bracket(*b, *c) {
                    let coef = &c12 * sc;
                    acc3(&mut acc, (*a, *k, *d, p + 1, q + r, *s), coef.clone());
                    acc3(&mut acc, (*a, *k, *d, *p, q + r, s + 1), -coef);
                }
                // [N13(u,w), N23(v,w)] (u - v)
                for (k, sc) in g.basis_bracket(*b, *d) {
                    let coef = &c12 * sc;
                    acc3(&mut acc, (*a, *c, *k, p + 1, *r, q + s), coef.clone());
                    acc3(&mut acc, (*a, *c, *k, *p, r + 1, q + s), -coef);
                }
            }
            acc
        })
        .reduce(Poly3::new, |mut a, b| {
            for (k, v) in b {
                acc3(&mut a, k, v);
            }
            a
        });
    total.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn verify_cybe(g: &LieAlgebra, x: &QuasiTrigSolution) -> bool {
    cybe_residual(g, x).is_empty()
}

/// A subspace of the window model representing `W` modulo
/// `u^-N g[[u^-1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WSubalgebra {
    pub window: DoubleWindow,
    pub space: Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WReport {
    pub isotropic: bool,
    pub half_dimensional: bool,
    pub transversal: bool,
    pub subalgebra_closed: bool,
}

impl WReport {
    pub fn all(&self) -> bool {
        self.isotropic && self.half_dimensional && self.transversal && self.subalgebra_closed
    }
}

/// Window depth large enough for a solution.
pub fn window_for(g: &LieAlgebra, x: &QuasiTrigSolution) -> DoubleWindow {
    let depth = (x.deg_u().max(x.deg_v()) as usize + 1).max(2);
    DoubleWindow::new(depth, g.dim())
}

pub fn subalgebra_from_solution(g: &LieAlgebra, x: &QuasiTrigSolution) -> Result<WSubalgebra, CoreError> {
    subalgebra_from_solution_in(g, x, window_for(g, x))
}

/// `W` spanned by the `Q`-dual basis of `u^m x_b` read off from `X`, plus
/// `u^-N g[[u^-1]]` (zero in the window).
pub fn subalgebra_from_solution_in(
    g: &LieAlgebra,
    x: &QuasiTrigSolution,
    window: DoubleWindow,
) -> Result<WSubalgebra, CoreError> {
    if !is_unitary(g, x) {
        return Err(CoreError::NotUnitary);
    }
    let depth = window.depth() as u32;
    if x.deg_u() >= depth || x.deg_v() >= depth {
        return Err(CoreError::WindowTooNarrow {
            required: (x.deg_u().max(x.deg_v()) + 1) as usize,
            given: window.depth(),
        });
    }
    let vecs = dual_vectors(g, x, window);
    Ok(WSubalgebra {
        window,
        space: Subspace::span(window.len(), vecs),
    })
}

/// The elements `w_{m,b}` dual to `u^m x_b`, ordered like
/// [`DoubleWindow::polynomial_basis`].
fn dual_vectors(g: &LieAlgebra, x: &QuasiTrigSolution, window: DoubleWindow) -> Vec<Vector> {
    let n = g.dim();
    let dual = dual_basis(g);
    let mut by_right: BTreeMap<(usize, u32), Vec<(usize, u32, &Scalar)>> = BTreeMap::new();
    for (&(a, b, du, dv), c) in x.terms() {
        by_right.entry((b, dv)).or_default().push((a, du, c));
    }
    let mut out = Vec::with_capacity(window.depth() * n);
    for m in 0..window.depth() as u32 {
        for b in 0..n {
            let mut w = linalg::zero_vector(window.len());
            if m >= 1 {
                for (j, c) in dual[b].iter().enumerate() {
                    w[window.loop_index(-(m as i64), j)] = c.clone();
                }
            } else {
                for (j, c) in dual[b].iter().enumerate() {
                    w[window.const_index(j)] = -c;
                }
            }
            for &(a, du, c) in by_right.get(&(b, m)).map(Vec::as_slice).unwrap_or(&[]) {
                w[window.loop_index(du as i64, a)] += c;
                if du == 0 {
                    w[window.const_index(a)] += c;
                }
            }
            out.push(w);
        }
    }
    out
}

/// Conditions for `W` in the window: Lagrangian, complementary to `g[u]`,
/// and closed under the bracket (including brackets with the implicit tail
/// `u^-N g[[u^-1]]`).
pub fn check_w(g: &LieAlgebra, w: &WSubalgebra) -> WReport {
    let win = &w.window;
    let gram = win.gram(g);
    let poly = win.polynomial_subspace();
    let basis = w.space.basis();
    let mut closed = true;
    'outer: for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (z, escaped) = win.bracket(g, &basis[i], &basis[j]);
            if escaped || !w.space.contains(&z) {
                closed = false;
                break 'outer;
            }
        }
    }
    if closed {
        closed = tail_brackets(g, w).iter().all(|z| w.space.contains(z));
    }
    WReport {
        isotropic: w.space.is_isotropic(&gram),
        half_dimensional: 2 * w.space.dim() == win.len(),
        transversal: w.space.intersection_dim(&poly) == 0 && w.space.sum(&poly).dim() == win.len(),
        subalgebra_closed: closed,
    }
}

/// `[u^-m x_k, w]` for `N <= m <= 2N-2`, reduced modulo the tail.
fn tail_brackets(g: &LieAlgebra, w: &WSubalgebra) -> Vec<Vector> {
    let win = &w.window;
    let n = g.dim();
    let depth = win.depth() as i64;
    let mut out = Vec::new();
    for m in depth..=2 * depth - 2 {
        for k in 0..n {
            for b in w.space.basis() {
                let mut z = linalg::zero_vector(win.len());
                for d in win.degrees() {
                    let deg = d - m;
                    if deg < win.min_degree() {
                        continue;
                    }
                    for j in 0..n {
                        let c = &b[win.loop_index(d, j)];
                        if c.is_zero() {
                            continue;
                        }
                        for (t, s) in g.basis_bracket(k, j) {
                            z[win.loop_index(deg, *t)] += &(c * s);
                        }
                    }
                }
                if !linalg::is_zero_vector(&z) {
                    out.push(z);
                }
            }
        }
    }
    out
}

/// `X = r_3 + s`, where `W` is the graph of `phi: W_3 -> g[u]` over the
/// standard complement `W_3` and `s = sum_i phi(w_i) (x) g_i` for the
/// `Q`-dual bases `w_i` of `W_3` and `g_i` of `g[u]`.
pub fn solution_from_subalgebra(g: &LieAlgebra, w: &WSubalgebra) -> Result<QuasiTrigSolution, CoreError> {
    let win = w.window;
    let r3 = standard_r3(g);
    let w3 = subalgebra_from_solution_in(g, &r3, win)?;
    let l0 = win.polynomial_basis();
    let poly = Subspace::span(win.len(), l0.clone());
    if w.space.dim() + poly.dim() != win.len() || w.space.intersection_dim(&poly) != 0 {
        return Err(CoreError::NoSolution);
    }
    // Q-dual basis of W_3 relative to l0
    let b3 = w3.space.basis();
    let pairing: Vec<Vector> = b3.iter().map(|x| l0.iter().map(|y| win.q(g, x, y)).collect()).collect();
    let inv = linalg::inverse(&pairing).ok_or_else(|| CoreError::Internal("W_3 does not pair with g[u]".into()))?;
    // inv is the inverse of P with P_ij = Q(b3_i, l0_j); the dual of l0_j is sum_i inv_ji b3_i
    let mut stacked = w.space.basis().to_vec();
    stacked.extend(l0.iter().cloned());
    let nw = w.space.dim();
    let depth = win.depth() as u32;
    let n = g.dim();
    let mut s = QuasiTrigSolution::zero(n);
    for (j, lj) in l0.iter().enumerate() {
        let mut dual = linalg::zero_vector(win.len());
        for (i, bi) in b3.iter().enumerate() {
            linalg::add_scaled(&mut dual, &inv[j][i], bi);
        }
        let coeffs = linalg::solve_combination(&stacked, &dual).ok_or(CoreError::NoSolution)?;
        let mut l0_part = linalg::zero_vector(win.len());
        for (k, c) in coeffs[nw..].iter().enumerate() {
            linalg::add_scaled(&mut l0_part, c, &l0[k]);
        }
        // phi(dual) = -l0_part, a polynomial element; read its coefficients
        let right_deg = (j / n) as u32;
        let right_idx = lj
            .iter()
            .position(|c| !c.is_zero())
            .map(|p| p % n)
            .expect("basis vector is nonzero");
        for du in 0..depth {
            for a in 0..n {
                let c = &l0_part[win.loop_index(du as i64, a)];
                if !c.is_zero() {
                    s.add_term((a, right_idx, du, right_deg), &-c);
                }
            }
        }
    }
    if s.plus(&s.flipped()) != QuasiTrigSolution::zero(n) {
        return Err(CoreError::Internal("twist is not antisymmetric: W is not Lagrangian".into()));
    }
    Ok(r3.plus(&s))
}

/// `W` as the preimage of `i'` under `sigma`: the window image of the
/// perpendicular of the order plus lifts of a basis of `i'`.
pub fn lift_i_prime_to_w(
    v: &VertexData,
    l: &LagrangianSubalgebra,
    window: DoubleWindow,
) -> Result<WSubalgebra, CoreError> {
    let report = verify_manin(v, l);
    if !report.all() {
        return Err(CoreError::VerificationFailed(format!("{report:?}")));
    }
    let mut vecs = order_model_perp(v, &window)?.basis().to_vec();
    for x in l.space.basis() {
        vecs.push(sigma_lift(v, &window, x)?);
    }
    Ok(WSubalgebra {
        window,
        space: Subspace::span(window.len(), vecs),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GaugeFactor {
    /// `exp(ad(coeff * u^degree * x_basis_index))` for a root vector.
    Exp {
        coeff: Scalar,
        degree: u32,
        basis_index: usize,
    },
    /// `e_beta -> prod t_i^{beta_i} e_beta`, one nonzero `t_i` per simple root.
    Torus(Vec<Scalar>),
}

/// A matrix polynomial `sigma(u) = sum_k M_k u^k` acting on `g`;
/// `M_k[i][j]` is the `x_i` coefficient of `M_k x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyAutomorphism {
    coeffs: Vec<Vec<Vector>>,
}

fn identity(n: usize) -> Vec<Vector> {
    (0..n).map(|i| linalg::unit_vector(n, i)).collect()
}

fn mat_mul(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let n = a.len();
    let mut out = vec![linalg::zero_vector(n); n];
    for i in 0..n {
        for (k, aik) in a[i].iter().enumerate() {
            if !aik.is_zero() {
                linalg::add_scaled(&mut out[i], aik, &b[k]);
            }
        }
    }
    out
}

impl PolyAutomorphism {
    pub fn identity(n: usize) -> Self {
        PolyAutomorphism {
            coeffs: vec![identity(n)],
        }
    }

    pub fn from_factors(g: &LieAlgebra, factors: &[GaugeFactor]) -> Result<Self, CoreError> {
        let mut out = PolyAutomorphism::identity(g.dim());
        for f in factors {
            out = out.compose(&Self::factor(g, f)?);
        }
        Ok(out)
    }

    fn factor(g: &LieAlgebra, f: &GaugeFactor) -> Result<Self, CoreError> {
        let n = g.dim();
        match f {
            GaugeFactor::Exp {
                coeff,
                degree,
                basis_index,
            } => {
                let idx = *basis_index;
                if idx >= n || g.is_cartan(idx) {
                    return Err(CoreError::NotNilpotent(idx));
                }
                // ad(x) as a matrix
                let mut ad = vec![linalg::zero_vector(n); n];
                for j in 0..n {
                    for (i, c) in g.basis_bracket(idx, j) {
                        ad[*i][j] = c.clone();
                    }
                }
                let deg = *degree as usize;
                let mut coeffs = Vec::new();
                let mut power = identity(n);
                let mut k = 0usize;
                let mut factorial = Scalar::one();
                let mut cpow = Scalar::one();
                while power.iter().any(|r| !linalg::is_zero_vector(r)) {
                    if k > n {
                        return Err(CoreError::NotNilpotent(idx));
                    }
                    let scale = &cpow / &factorial;
                    let target = k * deg;
                    if coeffs.len() <= target {
                        coeffs.resize(target + 1, vec![linalg::zero_vector(n); n]);
                    }
                    for i in 0..n {
                        linalg::add_scaled(&mut coeffs[target][i], &scale, &power[i]);
                    }
                    power = mat_mul(&ad, &power);
                    k += 1;
                    factorial = &factorial * &Scalar::from_int(k as i64);
                    cpow = &cpow * coeff;
                }
                Ok(PolyAutomorphism { coeffs })
            }
            GaugeFactor::Torus(t) => {
                if t.len() != g.rank() || t.iter().any(Scalar::is_zero) {
                    return Err(CoreError::Internal("torus needs one nonzero scalar per simple root".into()));
                }
                let mut m = identity(n);
                for (idx, row) in m.iter_mut().enumerate() {
                    if let Some(beta) = g.basis_root(idx) {
                        let mut c = Scalar::one();
                        for (ti, &e) in t.iter().zip(beta.iter()) {
                            let base = if e < 0 { ti.inv() } else { ti.clone() };
                            for _ in 0..e.unsigned_abs() {
                                c = &c * &base;
                            }
                        }
                        row[idx] = c;
                    }
                }
                Ok(PolyAutomorphism { coeffs: vec![m] })
            }
        }
    }

    /// `self(u) * other(u)`.
    pub fn compose(&self, other: &PolyAutomorphism) -> PolyAutomorphism {
        let n = self.coeffs[0].len();
        let mut coeffs = vec![vec![linalg::zero_vector(n); n]; self.coeffs.len() + other.coeffs.len() - 1];
        for (a, ma) in self.coeffs.iter().enumerate() {
            for (b, mb) in other.coeffs.iter().enumerate() {
                let prod = mat_mul(ma, mb);
                for i in 0..n {
                    let row = prod[i].clone();
                    linalg::add_scaled(&mut coeffs[a + b][i], &Scalar::one(), &row);
                }
            }
        }
        PolyAutomorphism { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Nonzero entries `(deg, i, c)` of the image of `x_j`.
    fn column(&self, j: usize) -> Vec<(u32, usize, Scalar)> {
        let mut out = Vec::new();
        for (k, m) in self.coeffs.iter().enumerate() {
            for (i, row) in m.iter().enumerate() {
                if !row[j].is_zero() {
                    out.push((k as u32, i, row[j].clone()));
                }
            }
        }
        out
    }

    /// `(sigma(u) (x) sigma(v)) t(u,v)` on a polynomial 2-tensor.
    fn apply2(&self, t: &QuasiTrigSolution) -> QuasiTrigSolution {
        let mut out = QuasiTrigSolution::zero(t.dim());
        let cols: Vec<_> = (0..t.dim()).map(|j| self.column(j)).collect();
        for (&(a, b, du, dv), c) in t.terms() {
            for (ku, i, ci) in &cols[a] {
                for (kv, j, cj) in &cols[b] {
                    out.add_term((*i, *j, du + ku, dv + kv), &(c * &(ci * cj)));
                }
            }
        }
        out
    }

    /// `sigma(u) (+) sigma(0)` acting on a window element. Components of
    /// degree below the window are dropped; `None` if the image leaves the
    /// window at the top.
    pub fn act_on_window(&self, win: &DoubleWindow, x: &[Scalar]) -> Option<Vector> {
        let n = win.dim_g();
        let mut out = linalg::zero_vector(win.len());
        for d in win.degrees() {
            for j in 0..n {
                let c = &x[win.loop_index(d, j)];
                if c.is_zero() {
                    continue;
                }
                for (k, i, s) in self.column(j) {
                    let deg = d + k as i64;
                    if deg < win.min_degree() {
                        continue;
                    }
                    if deg > win.max_degree() {
                        return None;
                    }
                    out[win.loop_index(deg, i)] += &(c * &s);
                }
            }
        }
        for j in 0..n {
            let c = &x[win.const_index(j)];
            if c.is_zero() {
                continue;
            }
            for (i, row) in self.coeffs[0].iter().enumerate() {
                if !row[j].is_zero() {
                    out[win.const_index(i)] += &(c * &row[j]);
                }
            }
        }
        Some(out)
    }
}

/// Exact division of a polynomial 2-tensor by `(u - v)`.
fn divide_by_u_minus_v(t: &QuasiTrigSolution) -> Result<QuasiTrigSolution, CoreError> {
    // group as sum_a C_a(v) u^a per tensor index
    let mut groups: BTreeMap<(usize, usize), BTreeMap<u32, BTreeMap<u32, Scalar>>> = BTreeMap::new();
    for (&(i, j, du, dv), c) in t.terms() {
        groups.entry((i, j)).or_default().entry(du).or_default().insert(dv, c.clone());
    }
    let mut out = QuasiTrigSolution::zero(t.dim());
    for ((i, j), poly) in groups {
        let top = *poly.keys().next_back().expect("nonempty group");
        // q_{a-1} = C_a + v q_a, from the top down
        let mut q: BTreeMap<u32, Scalar> = BTreeMap::new();
        for a in (1..=top).rev() {
            let mut next: BTreeMap<u32, Scalar> = poly.get(&a).cloned().unwrap_or_default();
            for (dv, c) in &q {
                let e = next.entry(dv + 1).or_insert_with(Scalar::zero);
                *e += c;
            }
            next.retain(|_, c| !c.is_zero());
            for (dv, c) in &next {
                out.add_term((i, j, a - 1, *dv), c);
            }
            q = next;
        }
        // remainder C_0 + v q_0
        let mut rem: BTreeMap<u32, Scalar> = poly.get(&0).cloned().unwrap_or_default();
        for (dv, c) in &q {
            let e = rem.entry(dv + 1).or_insert_with(Scalar::zero);
            *e += c;
        }
        if rem.values().any(|c| !c.is_zero()) {
            return Err(CoreError::Internal("gauge image is not divisible by (u - v)".into()));
        }
    }
    Ok(out)
}

/// `Y(u,v) = (sigma(u) (x) sigma(v)) X(u,v)`, rewritten as
/// `v Omega/(u-v) + p_Y(u,v)`.
pub fn apply_gauge(g: &LieAlgebra, x: &QuasiTrigSolution, factors: &[GaugeFactor]) -> Result<QuasiTrigSolution, CoreError> {
    let sigma = PolyAutomorphism::from_factors(g, factors)?;
    apply_automorphism(g, x, &sigma)
}

pub fn apply_automorphism(
    g: &LieAlgebra,
    x: &QuasiTrigSolution,
    sigma: &PolyAutomorphism,
) -> Result<QuasiTrigSolution, CoreError> {
    let omega = omega_terms(g);
    let moved = sigma.apply2(&omega).minus(&omega);
    // v * (moved) / (u - v)
    let mut shifted = QuasiTrigSolution::zero(g.dim());
    for (&(i, j, du, dv), c) in moved.terms() {
        shifted.add_term((i, j, du, dv + 1), c);
    }
    let singular = divide_by_u_minus_v(&shifted)?;
    Ok(singular.plus(&sigma.apply2(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_lie_algebra;
    use crate::roots::{build_root_system, CartanType};

    fn alg(kind: CartanType, n: usize) -> LieAlgebra {
        build_lie_algebra(&build_root_system(kind, n).unwrap()).unwrap()
    }

    #[test]
    fn sl2_standard_solution() {
        let g = alg(CartanType::A, 1);
        let r = standard_r3(&g);
        let mut expect = QuasiTrigSolution::zero(3);
        expect.add_term((1, 2, 0, 0), &Scalar::one());
        expect.add_term((0, 0, 0, 0), &Scalar::from_frac(1, 4));
        assert_eq!(r, expect);
        assert!(is_unitary(&g, &r));
        assert!(verify_cybe(&g, &r));
    }

    #[test]
    fn zero_polynomial_part_fails_cybe() {
        for (kind, n) in [(CartanType::A, 1), (CartanType::B, 2)] {
            let g = alg(kind, n);
            assert!(!verify_cybe(&g, &QuasiTrigSolution::zero(g.dim())));
        }
    }

    #[test]
    fn standard_solution_for_rank_two() {
        for (kind, n) in [(CartanType::A, 2), (CartanType::B, 2)] {
            let g = alg(kind, n);
            let r = standard_r3(&g);
            assert!(is_unitary(&g, &r));
            assert!(verify_cybe(&g, &r));
        }
    }

    #[test]
    fn perturbed_standard_solution_fails() {
        let g = alg(CartanType::A, 2);
        let mut r = standard_r3(&g);
        r.add_term((3, 4, 0, 0), &Scalar::one());
        assert!(!verify_cybe(&g, &r));
    }

    #[test]
    fn w3_for_sl2_matches_hand_computation() {
        let g = alg(CartanType::A, 1);
        let w = subalgebra_from_solution(&g, &standard_r3(&g)).unwrap();
        let win = w.window;
        assert_eq!(win.depth(), 2);
        let mut e0 = linalg::zero_vector(win.len());
        e0[win.loop_index(0, 1)] = Scalar::one();
        let mut f1 = linalg::zero_vector(win.len());
        f1[win.const_index(2)] = Scalar::one();
        let mut h = linalg::zero_vector(win.len());
        h[win.loop_index(0, 0)] = Scalar::one();
        h[win.const_index(0)] = Scalar::from_int(-1);
        let mut vecs = vec![e0, f1, h];
        for i in 0..3 {
            vecs.push(win.loop_element(-1, &g.basis_vector(i)).unwrap());
        }
        assert_eq!(w.space, Subspace::span(win.len(), vecs));
        assert!(check_w(&g, &w).all());
    }

    #[test]
    fn standard_round_trip() {
        for (kind, n) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2)] {
            let g = alg(kind, n);
            let r = standard_r3(&g);
            let w = subalgebra_from_solution(&g, &r).unwrap();
            assert!(check_w(&g, &w).all());
            assert_eq!(solution_from_subalgebra(&g, &w).unwrap(), r);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let g = alg(CartanType::A, 1);
        assert_eq!(
            subalgebra_from_solution(&g, &QuasiTrigSolution::zero(3)),
            Err(CoreError::NotUnitary)
        );
    }

    #[test]
    fn polynomial_loop_algebra_is_not_a_solution() {
        let g = alg(CartanType::A, 1);
        let win = DoubleWindow::new(2, 3);
        let w = WSubalgebra {
            window: win,
            space: win.polynomial_subspace(),
        };
        assert_eq!(solution_from_subalgebra(&g, &w), Err(CoreError::NoSolution));
    }

    #[test]
    fn identity_gauge_is_trivial() {
        let g = alg(CartanType::A, 2);
        let r = standard_r3(&g);
        assert_eq!(apply_gauge(&g, &r, &[]).unwrap(), r);
    }

    #[test]
    fn sl2_polynomial_gauge() {
        let g = alg(CartanType::A, 1);
        let r = standard_r3(&g);
        let f = GaugeFactor::Exp {
            coeff: Scalar::one(),
            degree: 1,
            basis_index: 1,
        };
        let y = apply_gauge(&g, &r, &[f]).unwrap();
        assert!(!y.is_constant());
        assert!(is_unitary(&g, &y));
        assert!(verify_cybe(&g, &y));
    }

    #[test]
    fn cartan_exponent_rejected() {
        let g = alg(CartanType::A, 1);
        let f = GaugeFactor::Exp {
            coeff: Scalar::one(),
            degree: 0,
            basis_index: 0,
        };
        assert_eq!(apply_gauge(&g, &standard_r3(&g), &[f]), Err(CoreError::NotNilpotent(0)));
    }

    #[test]
    fn gauge_commutes_with_correspondence_on_sl2() {
        let g = alg(CartanType::A, 1);
        let r = standard_r3(&g);
        let sigma = PolyAutomorphism::from_factors(
            &g,
            &[
                GaugeFactor::Exp {
                    coeff: Scalar::from_int(2),
                    degree: 1,
                    basis_index: 2,
                },
                GaugeFactor::Torus(vec![Scalar::from_int(3)]),
            ],
        )
        .unwrap();
        let y = apply_automorphism(&g, &r, &sigma).unwrap();
        let depth = (y.deg_u().max(y.deg_v()) as usize + sigma.degree() + 1).max(2);
        let win = DoubleWindow::new(depth, g.dim());
        let wy = subalgebra_from_solution_in(&g, &y, win).unwrap();
        let wx = subalgebra_from_solution_in(&g, &r, win).unwrap();
        for x in wx.space.basis() {
            let img = sigma.act_on_window(&win, x).expect("image stays in the window");
            assert!(wy.space.contains(&img));
        }
    }
}
