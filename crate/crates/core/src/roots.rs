//! Root systems of simple Lie algebras, built by reflection closure from the
//! Gram matrix of the simple roots.
//!
//! Numbering follows Bourbaki except for `B_n`, which is numbered so that the
//! short simple root is `alpha_1` (the chain reads short -> long). For `B_2`
//! this gives `theta = 2 alpha_1 + alpha_2`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;

/// Root coordinates in the basis of simple roots.
pub type Root = Vec<i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }

    pub fn is_classical(self) -> bool {
        matches!(self, CartanType::A | CartanType::B | CartanType::C | CartanType::D)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraLabel {
    pub kind: CartanType,
    pub rank: usize,
}

impl fmt::Display for AlgebraLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.letter(), self.rank)
    }
}

impl FromStr for AlgebraLabel {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut chars = s.chars();
        let kind = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => CartanType::A,
            Some('B') => CartanType::B,
            Some('C') => CartanType::C,
            Some('D') => CartanType::D,
            Some('E') => CartanType::E,
            Some('F') => CartanType::F,
            Some('G') => CartanType::G,
            _ => return Err(CoreError::Parse(format!("unknown algebra `{s}`"))),
        };
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| CoreError::Parse(format!("unknown algebra `{s}`")))?;
        Ok(AlgebraLabel { kind, rank })
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    label: AlgebraLabel,
    gram: Vec<Vec<i64>>,
    cartan: Vec<Vec<i64>>,
    positive: Vec<Root>,
    theta: Root,
}

/// Simple roots in orthonormal `epsilon` coordinates for the classical series.
pub fn epsilon_simple_roots(kind: CartanType, rank: usize) -> Option<Vec<Vec<i64>>> {
    let n = rank;
    let e = |dim: usize, i: usize| -> Vec<i64> {
        let mut v = vec![0; dim];
        v[i] = 1;
        v
    };
    let diff = |dim: usize, i: usize, j: usize, sign: i64| -> Vec<i64> {
        let mut v = e(dim, i);
        v[j] += sign;
        v
    };
    match kind {
        CartanType::A => Some((0..n).map(|i| diff(n + 1, i, i + 1, -1)).collect()),
        CartanType::B => {
            // alpha_1 = eps_n (short), alpha_j = eps_{n-j+1} - eps_{n-j+2}
            let mut v = vec![e(n, n - 1)];
            for j in 2..=n {
                v.push(diff(n, n - j, n - j + 1, -1));
            }
            Some(v)
        }
        CartanType::C => {
            let mut v: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1, -1)).collect();
            let mut last = vec![0; n];
            last[n - 1] = 2;
            v.push(last);
            Some(v)
        }
        CartanType::D => {
            let mut v: Vec<_> = (0..n - 1).map(|i| diff(n, i, i + 1, -1)).collect();
            v.push(diff(n, n - 2, n - 1, 1));
            Some(v)
        }
        _ => None,
    }
}

fn exceptional_gram(kind: CartanType, rank: usize) -> Option<Vec<Vec<i64>>> {
    let mut g = vec![vec![0i64; rank]; rank];
    let mut link = |i: usize, j: usize, v: i64| {
        g[i][j] = v;
        g[j][i] = v;
    };
    let diag: Vec<i64>;
    match (kind, rank) {
        (CartanType::G, 2) => {
            diag = vec![2, 6];
            link(0, 1, -3);
        }
        (CartanType::F, 4) => {
            diag = vec![4, 4, 2, 2];
            link(0, 1, -2);
            link(1, 2, -2);
            link(2, 3, -1);
        }
        (CartanType::E, 6..=8) => {
            diag = vec![2; rank];
            link(0, 2, -1);
            link(1, 3, -1);
            link(2, 3, -1);
            for i in 3..rank - 1 {
                link(i, i + 1, -1);
            }
        }
        _ => return None,
    }
    for (i, d) in diag.into_iter().enumerate() {
        g[i][i] = d;
    }
    Some(g)
}

fn validate(kind: CartanType, rank: usize) -> Result<(), String> {
    let ok = match kind {
        CartanType::A => rank >= 1,
        CartanType::B | CartanType::C => rank >= 2,
        CartanType::D => rank >= 3,
        CartanType::E => (6..=8).contains(&rank),
        CartanType::F => rank == 4,
        CartanType::G => rank == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(format!("rank {rank} is not valid for type {}", kind.letter()))
    }
}

/// Builds the root system for the given type and rank.
pub fn build_root_system(kind: CartanType, rank: usize) -> Result<RootSystem, CoreError> {
    validate(kind, rank).map_err(|reason| CoreError::UnsupportedRootSystem {
        label: kind.letter().to_string(),
        rank,
        reason,
    })?;
    let gram = match epsilon_simple_roots(kind, rank) {
        Some(eps) => eps
            .iter()
            .map(|a| eps.iter().map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum()).collect())
            .collect(),
        None => exceptional_gram(kind, rank).expect("validated exceptional type"),
    };
    Ok(RootSystem::from_gram(AlgebraLabel { kind, rank }, gram))
}

impl RootSystem {
    pub fn from_label(label: AlgebraLabel) -> Result<Self, CoreError> {
        build_root_system(label.kind, label.rank)
    }

    fn from_gram(label: AlgebraLabel, gram: Vec<Vec<i64>>) -> Self {
        let l = gram.len();
        let cartan: Vec<Vec<i64>> = (0..l)
            .map(|i| (0..l).map(|j| 2 * gram[i][j] / gram[j][j]).collect())
            .collect();
        let simple: Vec<Root> = (0..l)
            .map(|i| {
                let mut r = vec![0; l];
                r[i] = 1;
                r
            })
            .collect();
        // closure under simple reflections
        let mut seen: BTreeSet<Root> = simple.iter().cloned().collect();
        let mut queue: VecDeque<Root> = simple.into_iter().collect();
        while let Some(beta) = queue.pop_front() {
            for i in 0..l {
                let pairing: i64 = (0..l).map(|j| beta[j] * cartan[j][i]).sum();
                let mut image = beta.clone();
                image[i] -= pairing;
                if seen.insert(image.clone()) {
                    queue.push_back(image);
                }
            }
        }
        let mut positive: Vec<Root> = seen
            .into_iter()
            .filter(|r| r.iter().all(|&c| c >= 0))
            .collect();
        positive.sort_by(|a, b| height(a).cmp(&height(b)).then_with(|| b.cmp(a)));
        let theta = positive.last().cloned().expect("nonempty root system");
        RootSystem {
            label,
            gram,
            cartan,
            positive,
            theta,
        }
    }

    pub fn label(&self) -> AlgebraLabel {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    /// Positive roots followed by their negatives, in matching order.
    pub fn roots(&self) -> Vec<Root> {
        let mut all = self.positive.clone();
        all.extend(self.positive.iter().map(|r| negate(r)));
        all
    }

    pub fn is_root(&self, r: &[i64]) -> bool {
        let pos = if r.iter().all(|&c| c >= 0) {
            r.to_vec()
        } else if r.iter().all(|&c| c <= 0) {
            negate(r)
        } else {
            return false;
        };
        self.positive.binary_search_by(|p| {
            height(p)
                .cmp(&height(&pos))
                .then_with(|| pos.as_slice().cmp(p.as_slice()))
        })
        .is_ok()
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut r = vec![0; self.rank()];
        r[i] = 1;
        r
    }

    pub fn theta(&self) -> &Root {
        &self.theta
    }

    /// Coefficients `k_j` with `sum k_j alpha_j = theta`.
    pub fn marks(&self) -> &[i64] {
        &self.theta
    }

    /// Root attached to a node of the extended diagram: node 0 is
    /// `alpha_0 = -theta`, node `i >= 1` is `alpha_i`.
    pub fn node_root(&self, node: usize) -> Root {
        if node == 0 {
            negate(&self.theta)
        } else {
            self.simple_root(node - 1)
        }
    }

    pub fn inner(&self, a: &[i64], b: &[i64]) -> i64 {
        let l = self.rank();
        let mut acc = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                acc += a[i] * self.gram[i][j] * b[j];
            }
        }
        acc
    }

    /// `<beta, alpha_i^vee> = 2 (beta, alpha_i) / (alpha_i, alpha_i)`.
    pub fn coroot_pairing(&self, beta: &[i64], i: usize) -> i64 {
        2 * self.inner(beta, &self.simple_root(i)) / self.gram[i][i]
    }

    /// Reflection of `beta` in the simple root `alpha_i`.
    pub fn reflect(&self, beta: &[i64], i: usize) -> Root {
        let mut r = beta.to_vec();
        r[i] -= self.coroot_pairing(beta, i);
        r
    }

    /// Coordinates of the coroot `beta^vee` in the basis of simple coroots:
    /// `c_i = n_i (alpha_i, alpha_i) / (beta, beta)`.
    pub fn coroot_coordinates(&self, beta: &[i64]) -> Vec<i64> {
        let bb = self.inner(beta, beta);
        (0..self.rank())
            .map(|i| {
                let num = beta[i] * self.gram[i][i];
                debug_assert_eq!(num % bb, 0);
                num / bb
            })
            .collect()
    }

    /// Number of roots predicted by the closed-form count for the type.
    pub fn expected_root_count(&self) -> usize {
        let n = self.rank();
        match self.label.kind {
            CartanType::A => n * (n + 1),
            CartanType::B | CartanType::C => 2 * n * n,
            CartanType::D => 2 * n * (n - 1),
            CartanType::G => 12,
            CartanType::F => 48,
            CartanType::E => match n {
                6 => 72,
                7 => 126,
                _ => 240,
            },
        }
    }
}

pub fn height(r: &[i64]) -> i64 {
    r.iter().sum()
}

pub fn negate(r: &[i64]) -> Root {
    r.iter().map(|c| -c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_types() -> Vec<(CartanType, usize)> {
        use CartanType::*;
        vec![
            (A, 1), (A, 2), (A, 3), (A, 4), (B, 2), (B, 3), (B, 4), (C, 2), (C, 3),
            (C, 4), (D, 3), (D, 4), (D, 5), (G, 2), (F, 4), (E, 6), (E, 7), (E, 8),
        ]
    }

    #[test]
    fn rank_one() {
        let rs = build_root_system(CartanType::A, 1).unwrap();
        assert_eq!(rs.roots(), vec![vec![1], vec![-1]]);
    }

    #[test]
    fn b2_highest_root_and_marks() {
        let rs = build_root_system(CartanType::B, 2).unwrap();
        assert_eq!(rs.theta(), &vec![2, 1]);
        assert_eq!(rs.marks(), &[2, 1]);
        assert_eq!(rs.node_root(0), vec![-2, -1]);
        // alpha_1 short
        assert_eq!(rs.gram()[0][0], 1);
        assert_eq!(rs.gram()[1][1], 2);
    }

    #[test]
    fn a2_matches_brute_force_oracle() {
        // oracle: every integer vector in a box whose squared length is 2
        let rs = build_root_system(CartanType::A, 2).unwrap();
        let mut oracle = BTreeSet::new();
        for a in -3..=3 {
            for b in -3..=3 {
                let v = vec![a, b];
                if (a, b) != (0, 0) && rs.inner(&v, &v) == 2 {
                    oracle.insert(v);
                }
            }
        }
        let got: BTreeSet<Root> = rs.roots().into_iter().collect();
        assert_eq!(got, oracle);
        assert_eq!(rs.positive_roots(), &[vec![1, 0], vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn counts_symmetry_and_closure() {
        for (kind, rank) in all_types() {
            let rs = build_root_system(kind, rank).unwrap();
            let roots = rs.roots();
            assert_eq!(roots.len(), rs.expected_root_count(), "{kind:?}{rank}");
            let set: BTreeSet<Root> = roots.iter().cloned().collect();
            for r in &roots {
                assert!(set.contains(&negate(r)));
                for i in 0..rank {
                    assert!(set.contains(&rs.reflect(r, i)));
                }
            }
            for i in 0..rank {
                assert!(rs.inner(rs.theta(), &rs.simple_root(i)) >= 0);
                for j in 0..rank {
                    let a = rs.cartan_matrix()[i][j];
                    assert_eq!(a * rs.gram()[j][j], 2 * rs.gram()[i][j]);
                }
            }
            // theta is the unique maximal root
            for r in rs.positive_roots() {
                let diff: Root = rs.theta().iter().zip(r).map(|(a, b)| a - b).collect();
                assert!(diff.iter().all(|&c| c >= 0));
            }
        }
    }

    #[test]
    fn invalid_ranks_rejected() {
        assert!(build_root_system(CartanType::B, 1).is_err());
        assert!(build_root_system(CartanType::G, 3).is_err());
        assert!(build_root_system(CartanType::E, 5).is_err());
        assert!("X3".parse::<AlgebraLabel>().is_err());
        assert_eq!("b2".parse::<AlgebraLabel>().unwrap().to_string(), "B2");
    }

    #[test]
    fn is_root_lookup() {
        let rs = build_root_system(CartanType::C, 3).unwrap();
        for r in rs.roots() {
            assert!(rs.is_root(&r));
        }
        assert!(!rs.is_root(&[1, -1, 0]));
        assert!(!rs.is_root(&[0, 0, 0]));
    }
}
