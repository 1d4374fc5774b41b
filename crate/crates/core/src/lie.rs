//! Classical simple Lie algebras in a Chevalley-type basis.
//!
//! The basis is `h_1..h_l` (simple coroots) followed by one root vector per
//! root, in the order of [`RootSystem::roots`]. Root vectors are read off an
//! explicit matrix realization (traceless matrices for `A_n`, matrices
//! skew with respect to an anti-diagonal form for `B_n`, `C_n`, `D_n`), so
//! Cartan elements are diagonal. They are normalized so that
//! `[e_beta, e_-beta] = h_beta` with `beta(h_beta) = 2`. The invariant form is
//! the trace form of the defining representation.

use std::collections::HashMap;

use crate::error::CoreError;
use crate::linalg::{self, Vector};
use crate::roots::{epsilon_simple_roots, CartanType, Root, RootSystem};
use crate::scalar::Scalar;

/// Sparse square matrix given by its nonzero entries.
type SparseMatrix = Vec<(usize, usize, Scalar)>;

type Sparse = Vec<(usize, Scalar)>;

#[derive(Debug, Clone)]
pub struct LieAlgebra {
    rs: RootSystem,
    roots: Vec<Root>,
    root_lookup: HashMap<Root, usize>,
    size: usize,
    matrices: Vec<SparseMatrix>,
    brackets: Vec<Vec<Sparse>>,
    form: Vec<Vector>,
}

fn mat_mul(a: &SparseMatrix, b: &SparseMatrix) -> HashMap<(usize, usize), Scalar> {
    let mut out: HashMap<(usize, usize), Scalar> = HashMap::new();
    for (i, k, x) in a {
        for (k2, j, y) in b {
            if k == k2 {
                *out.entry((*i, *j)).or_default() += &(x * y);
            }
        }
    }
    out
}

fn commutator(a: &SparseMatrix, b: &SparseMatrix) -> HashMap<(usize, usize), Scalar> {
    let mut ab = mat_mul(a, b);
    for (key, v) in mat_mul(b, a) {
        *ab.entry(key).or_default() -= &v;
    }
    ab.retain(|_, v| !v.is_zero());
    ab
}

fn trace_of_product(a: &SparseMatrix, b: &SparseMatrix) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, k, x) in a {
        for (k2, j, y) in b {
            if k == k2 && i == j {
                acc += &(x * y);
            }
        }
    }
    acc
}

/// Weights (epsilon coordinates) of the standard basis vectors and the
/// invariant bilinear form `J` of the defining representation (`None` for
/// `sl`).
fn defining_representation(kind: CartanType, n: usize) -> (Vec<Vec<i64>>, Option<Vec<Vec<i64>>>) {
    let e = |i: usize, sign: i64| {
        let mut v = vec![0i64; n];
        v[i] = sign;
        v
    };
    match kind {
        CartanType::A => {
            let weights = (0..=n)
                .map(|a| {
                    let mut v = vec![0; n + 1];
                    v[a] = 1;
                    v
                })
                .collect();
            (weights, None)
        }
        CartanType::B => {
            let size = 2 * n + 1;
            let mut weights: Vec<Vec<i64>> = (0..n).map(|a| e(a, 1)).collect();
            weights.push(vec![0; n]);
            weights.extend((0..n).rev().map(|a| e(a, -1)));
            let mut j = vec![vec![0; size]; size];
            for a in 0..size {
                j[a][size - 1 - a] = 1;
            }
            (weights, Some(j))
        }
        CartanType::C | CartanType::D => {
            let size = 2 * n;
            let mut weights: Vec<Vec<i64>> = (0..n).map(|a| e(a, 1)).collect();
            weights.extend((0..n).rev().map(|a| e(a, -1)));
            let mut j = vec![vec![0; size]; size];
            for a in 0..size {
                let sign = if kind == CartanType::C && a >= n { -1 } else { 1 };
                j[a][size - 1 - a] = sign;
            }
            (weights, Some(j))
        }
        _ => unreachable!("exceptional types have no defining matrix realization here"),
    }
}

/// Builds the Lie algebra of a classical root system.
pub fn build_lie_algebra(rs: &RootSystem) -> Result<LieAlgebra, CoreError> {
    LieAlgebra::new(rs.clone())
}

impl LieAlgebra {
    pub fn new(rs: RootSystem) -> Result<Self, CoreError> {
        let label = rs.label();
        if !label.kind.is_classical() {
            return Err(CoreError::DiagramOnly(label.to_string()));
        }
        let l = rs.rank();
        let eps = epsilon_simple_roots(label.kind, l).expect("classical");
        let eps_dim = eps[0].len();
        let (weights, form_j) = defining_representation(label.kind, l);
        let size = weights.len();
        let to_eps = |r: &[i64]| -> Vec<i64> {
            (0..eps_dim)
                .map(|k| r.iter().zip(&eps).map(|(c, a)| c * a[k]).sum())
                .collect()
        };
        let eps_inner = |a: &[i64], b: &[i64]| -> i64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

        let roots = rs.roots();
        let npos = rs.positive_roots().len();
        let dim = l + roots.len();

        // Cartan elements: simple coroots as diagonal matrices
        let mut matrices: Vec<SparseMatrix> = Vec::with_capacity(dim);
        for alpha in &eps {
            let aa = eps_inner(alpha, alpha);
            let diag: SparseMatrix = weights
                .iter()
                .enumerate()
                .filter_map(|(p, w)| {
                    let v = 2 * eps_inner(w, alpha);
                    (v != 0).then(|| (p, p, Scalar::from_frac(v, aa)))
                })
                .collect();
            matrices.push(diag);
        }

        // root spaces
        let mut root_mats: Vec<SparseMatrix> = Vec::with_capacity(roots.len());
        for r in &roots {
            let target = to_eps(r);
            let units: Vec<(usize, usize)> = (0..size)
                .flat_map(|a| (0..size).map(move |b| (a, b)))
                .filter(|&(a, b)| {
                    a != b && weights[a].iter().zip(&weights[b]).map(|(x, y)| x - y).eq(target.iter().copied())
                })
                .collect();
            let mat = match &form_j {
                None => {
                    assert_eq!(units.len(), 1);
                    vec![(units[0].0, units[0].1, Scalar::one())]
                }
                Some(j) => {
                    // columns: M^T J + J M for each matrix unit, flattened
                    let cols: Vec<Vec<i64>> = units
                        .iter()
                        .map(|&(a, b)| {
                            let mut c = vec![0i64; size * size];
                            // (E_ab)^T J: row b, entries J[a][*]
                            for k in 0..size {
                                c[b * size + k] += j[a][k];
                                // J E_ab: column b, entries J[*][a]
                                c[k * size + b] += j[k][a];
                            }
                            c
                        })
                        .collect();
                    let rows: Vec<Vector> = (0..size * size)
                        .map(|i| cols.iter().map(|c| Scalar::from_int(c[i])).collect())
                        .collect();
                    let kernel = linalg::nullspace(rows, units.len());
                    if kernel.len() != 1 {
                        return Err(CoreError::Internal(format!(
                            "root space of {r:?} has dimension {}",
                            kernel.len()
                        )));
                    }
                    let v = &kernel[0];
                    let lead = v.iter().find(|x| !x.is_zero()).unwrap().inv();
                    units
                        .iter()
                        .zip(v)
                        .filter(|(_, x)| !x.is_zero())
                        .map(|(&(a, b), x)| (a, b, x * &lead))
                        .collect()
                }
            };
            root_mats.push(mat);
        }
        // normalize negative root vectors: [e_beta, e_-beta] = h_beta, beta(h_beta) = 2
        for i in 0..npos {
            let c = commutator(&root_mats[i], &root_mats[npos + i]);
            let (a, b, _) = root_mats[i][0].clone();
            let da = c.get(&(a, a)).cloned().unwrap_or_default();
            let db = c.get(&(b, b)).cloned().unwrap_or_default();
            let beta_c = &da - &db;
            let factor = &Scalar::from_int(2) / &beta_c;
            for entry in root_mats[npos + i].iter_mut() {
                entry.2 = &entry.2 * &factor;
            }
        }
        matrices.extend(root_mats);

        let root_lookup = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), l + i))
            .collect();

        let mut alg = LieAlgebra {
            rs,
            roots,
            root_lookup,
            size,
            matrices,
            brackets: Vec::new(),
            form: Vec::new(),
        };
        alg.brackets = alg.compute_brackets()?;
        alg.form = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| trace_of_product(&alg.matrices[i], &alg.matrices[j]))
                    .collect()
            })
            .collect();
        Ok(alg)
    }

    fn compute_brackets(&self) -> Result<Vec<Vec<Sparse>>, CoreError> {
        let dim = self.dim();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in (i + 1)..dim {
                let c = commutator(&self.matrices[i], &self.matrices[j]);
                let coords = self.decompose(&c)?;
                let sparse: Sparse = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .collect();
                table[j][i] = sparse.iter().map(|(k, x)| (*k, -x)).collect();
                table[i][j] = sparse;
            }
        }
        Ok(table)
    }

    /// Coordinates of a matrix in the basis; errors if it is not in the algebra.
    fn decompose(&self, m: &HashMap<(usize, usize), Scalar>) -> Result<Vector, CoreError> {
        let l = self.rank();
        let dim = self.dim();
        let mut coords = linalg::zero_vector(dim);
        for (idx, _) in self.roots.iter().enumerate() {
            let (a, b, x) = &self.matrices[l + idx][0];
            if let Some(v) = m.get(&(*a, *b)) {
                coords[l + idx] = v / x;
            }
        }
        let diag: Vector = (0..self.size)
            .map(|p| m.get(&(p, p)).cloned().unwrap_or_default())
            .collect();
        if !linalg::is_zero_vector(&diag) {
            coords[..l].clone_from_slice(&self.cartan_from_diagonal(&diag)?);
        }
        // verify
        let mut rebuilt: HashMap<(usize, usize), Scalar> = HashMap::new();
        for (k, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (a, b, x) in &self.matrices[k] {
                *rebuilt.entry((*a, *b)).or_default() += &(c * x);
            }
        }
        rebuilt.retain(|_, v| !v.is_zero());
        let mut orig = m.clone();
        orig.retain(|_, v| !v.is_zero());
        if rebuilt != orig {
            return Err(CoreError::Internal("matrix not in the algebra".into()));
        }
        Ok(coords)
    }

    /// Coordinates (in `h_1..h_l`) of a diagonal matrix of the defining
    /// representation.
    pub fn cartan_from_diagonal(&self, diag: &[Scalar]) -> Result<Vector, CoreError> {
        let l = self.rank();
        if diag.len() != self.size {
            return Err(CoreError::Parse(format!(
                "diagonal has length {}, expected {}",
                diag.len(),
                self.size
            )));
        }
        let columns: Vec<Vector> = (0..l)
            .map(|i| {
                let mut v = linalg::zero_vector(self.size);
                for (a, _, x) in &self.matrices[i] {
                    v[*a] = x.clone();
                }
                v
            })
            .collect();
        linalg::solve_combination(&columns, diag)
            .ok_or_else(|| CoreError::Parse("diagonal matrix is not in the Cartan subalgebra".into()))
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn dim(&self) -> usize {
        self.rank() + self.roots.len()
    }

    /// Size of the defining representation.
    pub fn representation_size(&self) -> usize {
        self.size
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    /// Basis index of the root vector `e_beta`.
    pub fn root_index(&self, beta: &[i64]) -> Option<usize> {
        self.root_lookup.get(beta).copied()
    }

    /// Root of a basis element, `None` for Cartan elements.
    pub fn basis_root(&self, idx: usize) -> Option<&Root> {
        idx.checked_sub(self.rank()).map(|i| &self.roots[i])
    }

    pub fn is_cartan(&self, idx: usize) -> bool {
        idx < self.rank()
    }

    /// Dense matrix of a basis element in the defining representation.
    pub fn matrix(&self, idx: usize) -> Vec<Vec<Scalar>> {
        let mut m = vec![linalg::zero_vector(self.size); self.size];
        for (a, b, x) in &self.matrices[idx] {
            m[*a][*b] = x.clone();
        }
        m
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.brackets[i][j]
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let mut out = linalg::zero_vector(self.dim());
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (k, s) in &self.brackets[i][j] {
                    out[*k] += &(&c * s);
                }
            }
        }
        out
    }

    /// Gram matrix of the trace form.
    pub fn form(&self) -> &[Vector] {
        &self.form
    }

    pub fn form_value(&self, x: &[Scalar], y: &[Scalar]) -> Scalar {
        linalg::bilinear(&self.form, x, y)
    }

    pub fn basis_vector(&self, idx: usize) -> Vector {
        linalg::unit_vector(self.dim(), idx)
    }

    /// Coroot `h_beta` in basis coordinates.
    pub fn coroot(&self, beta: &[i64]) -> Vector {
        let mut v = linalg::zero_vector(self.dim());
        for (i, c) in self.rs.coroot_coordinates(beta).into_iter().enumerate() {
            v[i] = Scalar::from_int(c);
        }
        v
    }

    /// `beta(h)` for a Cartan element `h` given in basis coordinates.
    pub fn root_value(&self, beta: &[i64], h: &[Scalar]) -> Scalar {
        let mut acc = Scalar::zero();
        for i in 0..self.rank() {
            if h[i].is_zero() {
                continue;
            }
            let p = self.rs.coroot_pairing(beta, i);
            acc += &(&h[i] * &Scalar::from_int(p));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::build_root_system;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alg(kind: CartanType, n: usize) -> LieAlgebra {
        build_lie_algebra(&build_root_system(kind, n).unwrap()).unwrap()
    }

    fn jacobi_holds(g: &LieAlgebra, i: usize, j: usize, k: usize) -> bool {
        let (x, y, z) = (g.basis_vector(i), g.basis_vector(j), g.basis_vector(k));
        let a = g.bracket(&x, &g.bracket(&y, &z));
        let b = g.bracket(&y, &g.bracket(&z, &x));
        let c = g.bracket(&z, &g.bracket(&x, &y));
        a.iter().zip(&b).zip(&c).all(|((p, q), r)| (&(p + q) + r).is_zero())
    }

    fn invariance_holds(g: &LieAlgebra, i: usize, j: usize, k: usize) -> bool {
        let (x, y, z) = (g.basis_vector(i), g.basis_vector(j), g.basis_vector(k));
        g.form_value(&g.bracket(&x, &y), &z) == g.form_value(&x, &g.bracket(&y, &z))
    }

    #[test]
    fn sl2_relations() {
        let g = alg(CartanType::A, 1);
        let (h, e, f) = (g.basis_vector(0), g.basis_vector(1), g.basis_vector(2));
        assert_eq!(g.bracket(&h, &e), linalg::scale(&e, &Scalar::from_int(2)));
        assert_eq!(g.bracket(&e, &f), h);
        assert_eq!(g.form_value(&e, &f), Scalar::one());
        assert_eq!(g.form_value(&h, &h), Scalar::from_int(2));
    }

    #[test]
    fn o5_dimension() {
        let g = alg(CartanType::B, 2);
        assert_eq!(g.dim(), 10);
        assert_eq!(g.representation_size(), 5);
    }

    #[test]
    fn exceptional_is_diagram_only() {
        let rs = build_root_system(CartanType::G, 2).unwrap();
        assert!(matches!(build_lie_algebra(&rs), Err(CoreError::DiagramOnly(_))));
    }

    #[test]
    fn chevalley_normalization() {
        for (kind, n) in [(CartanType::A, 3), (CartanType::B, 3), (CartanType::C, 3), (CartanType::D, 4)] {
            let g = alg(kind, n);
            let rs = g.root_system().clone();
            for beta in rs.roots() {
                let e = g.basis_vector(g.root_index(&beta).unwrap());
                let f = g.basis_vector(g.root_index(&crate::roots::negate(&beta)).unwrap());
                let h = g.coroot(&beta);
                assert_eq!(g.bracket(&e, &f), h, "{kind:?}{n} {beta:?}");
                assert_eq!(g.root_value(&beta, &h), Scalar::from_int(2));
                for i in 0..n {
                    let hi = g.basis_vector(i);
                    let expect = linalg::scale(&e, &g.root_value(&beta, &hi));
                    assert_eq!(g.bracket(&hi, &e), expect);
                }
            }
        }
    }

    #[test]
    fn jacobi_and_invariance_exhaustive_rank_two() {
        for (kind, n) in [(CartanType::A, 1), (CartanType::A, 2), (CartanType::B, 2), (CartanType::C, 2)] {
            let g = alg(kind, n);
            let d = g.dim();
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        assert!(jacobi_holds(&g, i, j, k));
                        assert!(invariance_holds(&g, i, j, k));
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_random_rank_up_to_four() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (kind, n) in [(CartanType::A, 3), (CartanType::A, 4), (CartanType::B, 3), (CartanType::C, 3), (CartanType::D, 4)] {
            let g = alg(kind, n);
            let d = g.dim();
            for _ in 0..1000 {
                let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
                assert!(jacobi_holds(&g, i, j, k), "{kind:?}{n}");
            }
            for _ in 0..50 {
                let (i, j, k) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
                assert!(invariance_holds(&g, i, j, k));
            }
        }
    }

    #[test]
    fn form_symmetric_and_nondegenerate() {
        let g = alg(CartanType::C, 3);
        let f = g.form();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert_eq!(f[i][j], f[j][i]);
            }
        }
        assert!(linalg::inverse(f).is_some());
    }

    #[test]
    fn cartan_from_diagonal_o5() {
        let g = alg(CartanType::B, 2);
        let d: Vec<Scalar> = [-2, 1, 0, -1, 2].iter().map(|&x| Scalar::from_int(x)).collect();
        let h = g.cartan_from_diagonal(&d).unwrap();
        // diag(x1, x2, 0, -x2, -x1): eps_2 = alpha_1 (short), eps_1 - eps_2 = alpha_2
        assert_eq!(g.root_value(&[1, 0], &h), Scalar::from_int(1));
        assert_eq!(g.root_value(&[0, 1], &h), Scalar::from_int(-3));
        let bad: Vec<Scalar> = [1, 0, 0, 0, 0].iter().map(|&x| Scalar::from_int(x)).collect();
        assert!(g.cartan_from_diagonal(&bad).is_err());
    }
}
