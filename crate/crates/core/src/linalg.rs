//! Dense exact linear algebra over [`Scalar`]: reduced row echelon form,
//! null spaces and canonical subspaces.

use std::fmt;

use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Scalar::one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += &(c * x);
        }
    }
}

pub fn scale(v: &[Scalar], c: &Scalar) -> Vector {
    v.iter().map(|x| c * x).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `x^T G y`.
pub fn bilinear(gram: &[Vector], x: &[Scalar], y: &[Scalar]) -> Scalar {
    let mut acc = Scalar::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        let mut row = Scalar::zero();
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() && !gram[i][j].is_zero() {
                row += &(&gram[i][j] * yj);
            }
        }
        if !row.is_zero() {
            acc += &(xi * &row);
        }
    }
    acc
}

pub fn mat_vec(m: &[Vector], v: &[Scalar]) -> Vector {
    m.iter()
        .map(|row| {
            let mut acc = Scalar::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        })
        .collect()
}

/// Reduced row echelon form. Zero rows are dropped; returns rows and pivot
/// columns.
pub fn rref(mut rows: Vec<Vector>, ncols: usize) -> (Vec<Vector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let c = -&row[col];
            add_scaled(row, &c, &pivot_row);
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vector>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : A x = 0}` for `A` given by rows.
pub fn nullspace(rows: Vec<Vector>, ncols: usize) -> Vec<Vector> {
    let (reduced, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = unit_vector(ncols, f);
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -&row[f];
            }
            v
        })
        .collect()
}

/// Coefficients `c` with `sum c_i vectors[i] = target`, if any exist.
pub fn solve_combination(vectors: &[Vector], target: &[Scalar]) -> Option<Vector> {
    let n = target.len();
    let k = vectors.len();
    // columns: the vectors, augmented with target; rows: coordinates
    let rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut row: Vector = vectors.iter().map(|v| v[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let (reduced, pivots) = rref(rows, k + 1);
    if pivots.contains(&k) {
        return None;
    }
    let mut c = zero_vector(k);
    for (row, &p) in reduced.iter().zip(&pivots) {
        c[p] = row[k].clone();
    }
    Some(c)
}

/// Inverse of a square matrix, if invertible.
pub fn inverse(m: &[Vector]) -> Option<Vec<Vector>> {
    let n = m.len();
    let rows: Vec<Vector> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend(unit_vector(n, i));
            r
        })
        .collect();
    let (reduced, pivots) = rref(rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A linear subspace stored in canonical reduced echelon form, so equal
/// subspaces compare equal.
#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit_vector(ambient, i)).collect())
    }

    pub fn span(ambient: usize, vectors: Vec<Vector>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        let (rows, pivots) = rref(vectors, ambient);
        Subspace {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after elimination against the echelon basis.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let c = -&v[p];
                add_scaled(&mut v, &c, row);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        Subspace::span(self.ambient, vs)
    }

    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(other).dim()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // x = sum a_i u_i = sum b_j w_j
        let k = self.dim();
        let cols: Vec<Vector> = self
            .rows
            .iter()
            .cloned()
            .chain(other.rows.iter().map(|w| w.iter().map(|x| -x).collect()))
            .collect();
        let eqs: Vec<Vector> = (0..self.ambient)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let kernel = nullspace(eqs, cols.len());
        let vecs = kernel
            .iter()
            .map(|coef| {
                let mut v = zero_vector(self.ambient);
                for (c, u) in coef[..k].iter().zip(&self.rows) {
                    add_scaled(&mut v, c, u);
                }
                v
            })
            .collect();
        Subspace::span(self.ambient, vecs)
    }

    /// `{x : B(v, x) = 0 for all v in self}` for the bilinear form with Gram
    /// matrix `gram`.
    pub fn orthogonal(&self, gram: &[Vector]) -> Subspace {
        let eqs: Vec<Vector> = self
            .rows
            .iter()
            .map(|v| {
                (0..self.ambient)
                    .map(|j| {
                        let mut acc = Scalar::zero();
                        for (i, vi) in v.iter().enumerate() {
                            if !vi.is_zero() && !gram[i][j].is_zero() {
                                acc += &(vi * &gram[i][j]);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        Subspace::span(self.ambient, nullspace(eqs, self.ambient))
    }

    pub fn is_isotropic(&self, gram: &[Vector]) -> bool {
        self.rows
            .iter()
            .enumerate()
            .all(|(i, x)| self.rows[i..].iter().all(|y| bilinear(gram, x, y).is_zero()))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Subspace(dim {} in {}) [", self.dim(), self.ambient)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}
