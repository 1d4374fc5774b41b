//! Sparse tensors over the basis of a Lie algebra, and the Casimir element.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::lie::LieAlgebra;
use crate::linalg::{self, Vector};
use crate::scalar::Scalar;

/// Sparse element of `g^{(x) order}`; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    order: usize,
    terms: BTreeMap<Vec<usize>, Scalar>,
}

impl TensorElement {
    pub fn zero(order: usize) -> Self {
        TensorElement {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn add_term(&mut self, index: Vec<usize>, c: &Scalar) {
        debug_assert_eq!(index.len(), self.order);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(index) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `c * x (x) y` for dense `x`, `y`.
    pub fn add_product(&mut self, c: &Scalar, x: &[Scalar], y: &[Scalar]) {
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    self.add_term(vec![i, j], &(c * &(xi * yj)));
                }
            }
        }
    }

    pub fn get(&self, index: &[usize]) -> Scalar {
        self.terms.get(index).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Swap of the two factors of an order-2 tensor.
    pub fn flip(&self) -> TensorElement {
        assert_eq!(self.order, 2);
        TensorElement {
            order: 2,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (vec![k[1], k[0]], v.clone()))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero(self.order);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &(v * c));
        }
        out
    }

    pub fn plus(&self, other: &TensorElement) -> TensorElement {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    /// `[x (x) 1 + 1 (x) x, t]` for an order-2 tensor.
    pub fn adjoint_action(&self, g: &LieAlgebra, x: &[Scalar]) -> TensorElement {
        assert_eq!(self.order, 2);
        let mut out = TensorElement::zero(2);
        for (k, v) in &self.terms {
            let a = g.basis_vector(k[0]);
            let b = g.basis_vector(k[1]);
            out.add_product(v, &g.bracket(x, &a), &b);
            out.add_product(v, &a, &g.bracket(x, &b));
        }
        out
    }
}

/// The quadratic Casimir `Omega = sum x_i (x) x^i` together with its Cartan
/// block and the positive-root splitting `sum_{alpha>0} e_alpha (x) f_alpha`,
/// where `f_alpha` is the form-dual of `e_alpha`.
#[derive(Debug, Clone)]
pub struct Casimir {
    pub omega: TensorElement,
    pub cartan_part: TensorElement,
    pub positive_part: TensorElement,
}

/// Dual basis `x^i` with `B(x_i, x^j) = delta_ij`.
pub fn dual_basis(g: &LieAlgebra) -> Vec<Vector> {
    // x^i = sum_j (G^{-1})_{ij} x_j
    linalg::inverse(g.form()).expect("invariant form of a simple algebra is nondegenerate")
}

pub fn casimir(g: &LieAlgebra) -> Casimir {
    let dual = dual_basis(g);
    let mut omega = TensorElement::zero(2);
    let mut cartan_part = TensorElement::zero(2);
    for (i, xi) in dual.iter().enumerate() {
        for (j, c) in xi.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            omega.add_term(vec![i, j], c);
            if g.is_cartan(i) && g.is_cartan(j) {
                cartan_part.add_term(vec![i, j], c);
            }
        }
    }
    let mut positive_part = TensorElement::zero(2);
    let rs = g.root_system();
    for beta in rs.positive_roots() {
        let e = g.root_index(beta).unwrap();
        let f = g.root_index(&crate::roots::negate(beta)).unwrap();
        let pairing = g.form()[e][f].clone();
        positive_part.add_term(vec![e, f], &pairing.inv());
    }
    Casimir {
        omega,
        cartan_part,
        positive_part,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_lie_algebra;
    use crate::roots::{build_root_system, CartanType};

    #[test]
    fn sl2_casimir_matches_dual_basis_oracle() {
        let g = build_lie_algebra(&build_root_system(CartanType::A, 1).unwrap()).unwrap();
        let c = casimir(&g);
        // basis: h=0, e=1, f=2; trace form B(h,h)=2, B(e,f)=1
        let mut expect = TensorElement::zero(2);
        expect.add_term(vec![1, 2], &Scalar::one());
        expect.add_term(vec![2, 1], &Scalar::one());
        expect.add_term(vec![0, 0], &Scalar::from_frac(1, 2));
        assert_eq!(c.omega, expect);
        let mut pos = TensorElement::zero(2);
        pos.add_term(vec![1, 2], &Scalar::one());
        assert_eq!(c.positive_part, pos);
    }

    #[test]
    fn casimir_invariant_and_symmetric() {
        for (kind, n) in [(CartanType::A, 2), (CartanType::B, 2), (CartanType::C, 3), (CartanType::D, 4)] {
            let g = build_lie_algebra(&build_root_system(kind, n).unwrap()).unwrap();
            let c = casimir(&g);
            assert_eq!(c.omega.flip(), c.omega);
            for i in 0..g.dim() {
                assert!(c.omega.adjoint_action(&g, &g.basis_vector(i)).is_empty());
            }
            // Omega = positive + flipped positive + Cartan part
            let rebuilt = c.positive_part.plus(&c.positive_part.flip()).plus(&c.cartan_part);
            assert_eq!(rebuilt, c.omega);
        }
    }

    #[test]
    fn dual_pairing_is_identity() {
        let g = build_lie_algebra(&build_root_system(CartanType::B, 2).unwrap()).unwrap();
        let dual = dual_basis(&g);
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let v = g.form_value(&g.basis_vector(i), &dual[j]);
                assert_eq!(v, if i == j { Scalar::one() } else { Scalar::zero() });
            }
        }
    }
}
