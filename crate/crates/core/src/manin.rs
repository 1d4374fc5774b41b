//! Cartan data of a triple, the Lagrangian Cartan piece `i_a'`, the
//! subalgebra `i' = k' + i_a' + n'` of `L_alpha x g`, and the Manin-triple
//! checks against `Delta_alpha`.
//!
//! Cartan elements of `h x h` are vectors of length `2 l` holding simple
//! coroot coordinates of both factors.

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::bdtriples::BDTriple;
use crate::error::CoreError;
use crate::grading::{delta_alpha, VertexData};
use crate::lie::LieAlgebra;
use crate::linalg::{self, Subspace, Vector};
use crate::roots::{self, Root};
use crate::scalar::{square_free_part, Scalar};

#[derive(Debug, Clone)]
pub struct CartanSpaces {
    rank: usize,
    /// Gram matrix of `Q'` restricted to `h x h`.
    gram: Vec<Vector>,
    pub left_annihilator: Subspace,
    pub right_annihilator: Subspace,
    pub a_prime: Subspace,
    pub f_prime: Subspace,
    pub f: Subspace,
    pub i_a: Subspace,
    pub a: Subspace,
}

impl CartanSpaces {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &[Vector] {
        &self.gram
    }

    /// `(f' + i_a') ∩ (f + i_a) = 0`, with `f' + i_a'` direct.
    pub fn condf(&self, i_a_prime: &Subspace) -> bool {
        let left = self.f_prime.sum(i_a_prime);
        let right = self.f.sum(&self.i_a);
        left.dim() == self.f_prime.dim() + i_a_prime.dim() && left.intersection_dim(&right) == 0
    }
}

fn cartan_form(g: &LieAlgebra) -> Vec<Vector> {
    let l = g.rank();
    (0..l).map(|i| g.form()[i][..l].to_vec()).collect()
}

fn coroot_h(g: &LieAlgebra, beta: &[i64]) -> Vector {
    g.coroot(beta)[..g.rank()].to_vec()
}

fn annihilator(g: &LieAlgebra, roots: &[Root]) -> Subspace {
    let l = g.rank();
    let rs = g.root_system();
    let eqs = roots
        .iter()
        .map(|b| (0..l).map(|i| Scalar::from_int(rs.coroot_pairing(b, i))).collect())
        .collect();
    Subspace::span(l, linalg::nullspace(eqs, l))
}

fn join(a: &[Scalar], b: &[Scalar]) -> Vector {
    let mut v = a.to_vec();
    v.extend_from_slice(b);
    v
}

fn product(l: usize, left: &Subspace, right: &Subspace) -> Subspace {
    let zero = linalg::zero_vector(l);
    let vecs = left
        .basis()
        .iter()
        .map(|x| join(x, &zero))
        .chain(right.basis().iter().map(|y| join(&zero, y)))
        .collect();
    Subspace::span(2 * l, vecs)
}

pub fn cartan_spaces(v: &VertexData, t: &BDTriple) -> CartanSpaces {
    let g = v.algebra();
    let rs = g.root_system();
    let l = g.rank();
    let form = cartan_form(g);
    let mut gram = vec![linalg::zero_vector(2 * l); 2 * l];
    for i in 0..l {
        for j in 0..l {
            gram[i][j] = form[i][j].clone();
            gram[l + i][l + j] = -&form[i][j];
        }
    }
    let g1: Vec<Root> = t.gamma1.iter().map(|&n| rs.node_root(n)).collect();
    let g2: Vec<Root> = t.gamma2.iter().map(|&n| rs.node_root(n)).collect();
    let left = annihilator(g, &g1);
    let right = annihilator(g, &g2);
    let a_prime = product(l, &left, &right);
    let f_prime = Subspace::span(
        2 * l,
        t.map
            .iter()
            .map(|&(s, d)| join(&coroot_h(g, &rs.node_root(s)), &coroot_h(g, &rs.node_root(d))))
            .collect(),
    );
    let f = Subspace::span(
        2 * l,
        v.s_nodes()
            .iter()
            .map(|&n| {
                let h = coroot_h(g, &rs.node_root(n));
                join(&h, &h)
            })
            .collect(),
    );
    let zeta = v.zeta_s();
    let i_a = Subspace::span(2 * l, zeta.basis().iter().map(|h| join(h, h)).collect());
    let a = product(l, &zeta, &zeta);
    CartanSpaces {
        rank: l,
        gram,
        left_annihilator: left,
        right_annihilator: right,
        a_prime,
        f_prime,
        f,
        i_a,
        a,
    }
}

fn gram_schmidt(form: &[Vector], vecs: &[Vector]) -> Option<Vec<Vector>> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vecs {
        let mut w = v.clone();
        for u in &out {
            let c = &linalg::bilinear(form, v, u) / &linalg::bilinear(form, u, u);
            linalg::add_scaled(&mut w, &-c, u);
        }
        if linalg::is_zero_vector(&w) {
            return None;
        }
        if linalg::bilinear(form, &w, &w).is_zero() {
            return None;
        }
        out.push(w);
    }
    Some(out)
}

fn norms(form: &[Vector], basis: &[Vector]) -> Vec<BigRational> {
    basis
        .iter()
        .map(|b| {
            linalg::bilinear(form, b, b)
                .to_rational()
                .expect("Cartan form is rational on rational vectors")
        })
        .collect()
}

/// Square class of a positive rational as a square-free integer.
fn square_class(r: &BigRational) -> Option<u64> {
    let n = (r.numer() * r.denom()).abs().to_u64()?;
    Some(square_free_part(n).0)
}

/// Candidate spanning lists for the right annihilator: permutations of the
/// basis, then basis lists with the first vector replaced by small integer
/// combinations.
fn right_candidates(basis: &[Vector]) -> Vec<Vec<Vector>> {
    use itertools::Itertools;
    let m = basis.len();
    let mut out: Vec<Vec<Vector>> = (0..m)
        .permutations(m)
        .take(120)
        .map(|p| p.into_iter().map(|i| basis[i].clone()).collect())
        .collect();
    if m >= 2 {
        for c in [1, -1, 2, -2, 3, -3] {
            for i in 0..m {
                for j in 0..m {
                    if i == j {
                        continue;
                    }
                    let mut list = basis.to_vec();
                    let mut w = basis[i].clone();
                    linalg::add_scaled(&mut w, &Scalar::from_int(c), &basis[j]);
                    list[i] = w;
                    list.swap(0, i);
                    out.push(list);
                }
            }
        }
    }
    out
}

/// An isometry between the two annihilators, as matching orthogonal bases
/// `(u_i, c_i u'_i)` with `B(u_i, u_i) = B(c_i u'_i, c_i u'_i)`.
fn base_isometry(form: &[Vector], left: &Subspace, right: &Subspace) -> Result<(Vec<Vector>, Vec<Vector>), CoreError> {
    let ub = gram_schmidt(form, left.basis())
        .ok_or_else(|| CoreError::Internal("degenerate Cartan form on annihilator".into()))?;
    let p = norms(form, &ub);
    let mut fallback = None;
    for cand in right_candidates(right.basis()) {
        let Some(vb) = gram_schmidt(form, &cand) else {
            continue;
        };
        let q = norms(form, &vb);
        let ratios: Vec<BigRational> = p.iter().zip(&q).map(|(a, b)| a / b).collect();
        let classes: Option<Vec<u64>> = ratios.iter().map(square_class).collect();
        let Some(classes) = classes else { continue };
        let mut radicals: Vec<u64> = classes.iter().copied().filter(|&d| d != 1).collect();
        radicals.sort_unstable();
        radicals.dedup();
        if radicals.len() > 1 {
            continue;
        }
        let image = || -> Vec<Vector> {
            vb.iter()
                .zip(&ratios)
                .map(|(w, r)| linalg::scale(w, &Scalar::sqrt_rational(r).expect("positive ratio")))
                .collect()
        };
        if radicals.is_empty() {
            return Ok((ub, image()));
        }
        if fallback.is_none() {
            fallback = Some((ub.clone(), image()));
        }
    }
    fallback.ok_or_else(|| CoreError::NoCartanLagrangian("annihilators are not isometric over a single quadratic field".into()))
}

/// Orthogonal transformations of the left annihilator in the coordinates of
/// its orthogonal basis (norms `p`): sign patterns composed with Cayley
/// transforms of single-entry skew parameters `t = 0, 1, -1, 2, -2, ...`.
fn orthogonal_candidates(p: &[Scalar]) -> Vec<Vec<Vector>> {
    let m = p.len();
    let signs: Vec<Vec<i64>> = (0..1usize << m.min(6))
        .map(|mask| (0..m).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect())
        .collect();
    let mut cayleys: Vec<Vec<Vector>> = vec![identity(m)];
    for t in [1, -1, 2, -2, 3, -3] {
        for i in 0..m {
            for j in i + 1..m {
                // K = P^-1 S with S_ij = t, S_ji = -t
                let mut k = vec![linalg::zero_vector(m); m];
                k[i][j] = &Scalar::from_int(t) / &p[i];
                k[j][i] = &Scalar::from_int(-t) / &p[j];
                let mut plus = identity(m);
                let mut minus = identity(m);
                for a in 0..m {
                    for b in 0..m {
                        plus[a][b] += &k[a][b];
                        minus[a][b] -= &k[a][b];
                    }
                }
                let inv = linalg::inverse(&plus).expect("I + K invertible for P-skew K");
                cayleys.push(mat_mul(&minus, &inv));
            }
        }
    }
    let mut out = Vec::new();
    for c in &cayleys {
        for s in &signs {
            let mut r = c.clone();
            for row in r.iter_mut() {
                for (b, x) in row.iter_mut().enumerate() {
                    *x = &*x * &Scalar::from_int(s[b]);
                }
            }
            out.push(r);
        }
    }
    out
}

fn identity(m: usize) -> Vec<Vector> {
    (0..m).map(|i| linalg::unit_vector(m, i)).collect()
}

fn mat_mul(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let m = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            let mut out = linalg::zero_vector(m);
            for (k, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    linalg::add_scaled(&mut out, x, &b[k]);
                }
            }
            out
        })
        .collect()
}

/// A Lagrangian subspace of `a'` (the graph of an isometry between the two
/// annihilators) satisfying the transversality condition `condf`.
pub fn construct_i_a_prime(c: &CartanSpaces) -> Result<Subspace, CoreError> {
    let l = c.rank;
    let form: Vec<Vector> = (0..l).map(|i| c.gram[i][..l].to_vec()).collect();
    if c.left_annihilator.dim() != c.right_annihilator.dim() {
        return Err(CoreError::NoCartanLagrangian("annihilators differ in dimension".into()));
    }
    let m = c.left_annihilator.dim();
    if m == 0 {
        let zero = Subspace::zero(2 * l);
        return if c.condf(&zero) {
            Ok(zero)
        } else {
            Err(CoreError::NoCartanLagrangian("f' meets f + i_a".into()))
        };
    }
    let (ub, vb) = base_isometry(&form, &c.left_annihilator, &c.right_annihilator)?;
    let p: Vec<Scalar> = ub.iter().map(|u| linalg::bilinear(&form, u, u)).collect();
    for r in orthogonal_candidates(&p) {
        // column j of R gives the image coordinates of u_j
        let vecs: Vec<Vector> = (0..m)
            .map(|j| {
                let mut img = linalg::zero_vector(l);
                for (i, w) in vb.iter().enumerate() {
                    linalg::add_scaled(&mut img, &r[i][j], w);
                }
                join(&ub[j], &img)
            })
            .collect();
        let cand = Subspace::span(2 * l, vecs);
        if c.condf(&cand) {
            debug_assert!(cand.is_isotropic(&c.gram));
            return Ok(cand);
        }
    }
    Err(CoreError::NoCartanLagrangian(format!(
        "no candidate among the searched isometries (dim a' = {})",
        c.a_prime.dim()
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub in_a_prime: bool,
    pub isotropic: bool,
    pub half_dimensional: bool,
    pub condf: bool,
}

/// Checks a user-supplied Cartan piece against the data of a triple.
pub fn check_cartan_candidate(c: &CartanSpaces, candidate: &Subspace) -> CandidateReport {
    CandidateReport {
        in_a_prime: c.a_prime.contains_subspace(candidate),
        isotropic: candidate.is_isotropic(&c.gram),
        half_dimensional: 2 * candidate.dim() == c.a_prime.dim(),
        condf: c.condf(candidate),
    }
}

#[derive(Debug, Clone)]
pub struct LagrangianSubalgebra {
    pub triple: BDTriple,
    pub space: Subspace,
    pub k_prime: Subspace,
    pub i_a_prime: Subspace,
    pub n_prime: Subspace,
    /// The Cartan piece in `h x h` coordinates.
    pub cartan_piece: Subspace,
}

/// Lift of a Cartan vector of `h x h` to `L_alpha x g`.
pub fn embed_cartan(v: &VertexData, h: &[Scalar]) -> Vector {
    let n = v.dim_g();
    let l = v.algebra().rank();
    let mut out = linalg::zero_vector(2 * n);
    out[..l].clone_from_slice(&h[..l]);
    out[n..n + l].clone_from_slice(&h[l..2 * l]);
    out
}

fn raising(g: &LieAlgebra, node: usize) -> usize {
    let beta = g.root_system().node_root(node);
    g.root_index(&beta).expect("node roots are roots")
}

fn lowering(g: &LieAlgebra, node: usize) -> usize {
    let beta = roots::negate(&g.root_system().node_root(node));
    g.root_index(&beta).expect("node roots are roots")
}

fn generated_subalgebra(v: &VertexData, gens: Vec<Vector>) -> Subspace {
    let ambient = v.product_dim();
    let mut space = Subspace::span(ambient, gens.clone());
    loop {
        let mut vecs = space.basis().to_vec();
        for x in &gens {
            for y in space.basis() {
                let z = v.product_bracket(x, y);
                if !space.contains(&z) {
                    vecs.push(z);
                }
            }
        }
        let next = Subspace::span(ambient, vecs);
        if next.dim() == space.dim() {
            return space;
        }
        space = next;
    }
}

fn support_within(coords: impl Iterator<Item = (usize, i64)>, nodes: &[usize]) -> bool {
    coords.filter(|&(_, c)| c != 0).all(|(n, _)| nodes.contains(&n))
}

pub fn build_i_prime(v: &VertexData, t: &BDTriple, i_a_prime: &Subspace) -> LagrangianSubalgebra {
    let g = v.algebra();
    let n = v.dim_g();
    let mut gens = Vec::new();
    for &(s, d) in &t.map {
        let mut x = linalg::unit_vector(2 * n, raising(g, s));
        x[n + raising(g, d)] = Scalar::one();
        let mut y = linalg::unit_vector(2 * n, lowering(g, s));
        y[n + lowering(g, d)] = Scalar::one();
        gens.push(x);
        gens.push(y);
    }
    let k_prime = generated_subalgebra(v, gens);
    let i_a = Subspace::span(
        2 * n,
        i_a_prime.basis().iter().map(|h| embed_cartan(v, h)).collect(),
    );
    let mut nvecs = Vec::new();
    for &idx in v.l_alpha_basis() {
        if let Some(gamma) = g.basis_root(idx) {
            let coords = v.l_alpha_coordinates(gamma);
            if !v.is_l_alpha_positive(gamma) && !support_within(coords.into_iter(), &t.gamma1) {
                nvecs.push(linalg::unit_vector(2 * n, idx));
            }
        }
    }
    for gamma in g.root_system().positive_roots() {
        let coords = gamma.iter().enumerate().map(|(i, &c)| (i + 1, c));
        if !support_within(coords, &t.gamma2) {
            nvecs.push(linalg::unit_vector(2 * n, n + g.root_index(gamma).unwrap()));
        }
    }
    let n_prime = Subspace::span(2 * n, nvecs);
    let space = k_prime.sum(&i_a).sum(&n_prime);
    LagrangianSubalgebra {
        triple: t.clone(),
        space,
        k_prime,
        i_a_prime: i_a,
        n_prime,
        cartan_piece: i_a_prime.clone(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ManinReport {
    pub isotropic: bool,
    pub half_dimensional: bool,
    pub subalgebra_closed: bool,
    pub intersection_with_delta_trivial: bool,
    pub sum_with_delta_full: bool,
}

impl ManinReport {
    pub fn all(&self) -> bool {
        self.isotropic
            && self.half_dimensional
            && self.subalgebra_closed
            && self.intersection_with_delta_trivial
            && self.sum_with_delta_full
    }
}

pub fn is_bracket_closed(v: &VertexData, s: &Subspace) -> bool {
    let b = s.basis();
    (0..b.len()).all(|i| (i + 1..b.len()).all(|j| s.contains(&v.product_bracket(&b[i], &b[j]))))
}

pub fn verify_manin(v: &VertexData, l: &LagrangianSubalgebra) -> ManinReport {
    verify_subspace(v, &l.space)
}

/// The Manin-triple checks for an arbitrary subspace of `L_alpha x g`.
pub fn verify_subspace(v: &VertexData, s: &Subspace) -> ManinReport {
    let delta = delta_alpha(v);
    let total = v.dim_l_alpha() + v.dim_g();
    ManinReport {
        isotropic: s.is_isotropic(&v.q_prime_gram()) && s.basis().iter().all(|x| v.in_l_alpha_times_g(x)),
        half_dimensional: 2 * s.dim() == total,
        subalgebra_closed: is_bracket_closed(v, s),
        intersection_with_delta_trivial: s.intersection_dim(&delta) == 0,
        sum_with_delta_full: s.sum(&delta).dim() == total,
    }
}

/// The whole construction for one triple.
pub fn lagrangian_for_triple(v: &VertexData, t: &BDTriple) -> Result<LagrangianSubalgebra, CoreError> {
    let c = cartan_spaces(v, t);
    let ia = construct_i_a_prime(&c)?;
    Ok(build_i_prime(v, t, &ia))
}

/// Radicand adjoined by a Cartan piece (1 when rational).
pub fn radicand_of(s: &Subspace) -> u64 {
    s.basis()
        .iter()
        .flatten()
        .map(Scalar::radicand)
        .find(|&d| d > 1)
        .unwrap_or(1)
}
