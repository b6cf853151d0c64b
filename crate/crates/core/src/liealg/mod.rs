mod module;
mod roots;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, Bilinear};
use crate::linalg::{axpy, scaled, unit_svec, ExactMatrix, SVec};
use crate::scalar::ExactScalar;

pub use module::{highest_weight_module, sl2_decompose, weyl_dimension, Sl2Component, WeightModule};
pub use roots::{positive_roots, CartanType, RootData, WeightConditions};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LieError {
    #[error("unsupported Cartan type {0:?}; only A, D, E are handled")]
    UnsupportedType(String),
    #[error("invalid rank for {0}")]
    InvalidRank(String),
    #[error("weight {0:?} is not dominant integral")]
    NotDominantIntegral(Vec<String>),
    #[error("weight has {got} labels, rank is {expected}")]
    WeightLength { expected: usize, got: usize },
    #[error("elements do not form an sl2-triple: {0}")]
    NotSl2Triple(String),
    #[error("bracket fails antisymmetry at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails at ({0}, {1}, {2})")]
    JacobiFails(usize, usize, usize),
    #[error("representation property fails at ({0}, {1})")]
    NotRepresentation(usize, usize),
}

/// Lie algebra by structure constants over a named basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieAlgebra {
    pub algebra: AlgebraPresentation,
}

impl LieAlgebra {
    /// Wraps a presentation after checking antisymmetry and Jacobi.
    pub fn new(algebra: AlgebraPresentation) -> Result<Self, LieError> {
        let g = LieAlgebra { algebra };
        g.verify()?;
        Ok(g)
    }

    pub(crate) fn new_unchecked(algebra: AlgebraPresentation) -> Self {
        LieAlgebra { algebra }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn basis(&self) -> &[String] {
        &self.algebra.basis
    }

    pub fn bracket(&self, x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
        self.algebra.mul(x, y)
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &SVec<usize> {
        self.algebra.mul_basis(i, j)
    }

    pub fn ad(&self, x: &SVec<usize>) -> ExactMatrix {
        self.algebra.left_matrix(x)
    }

    pub fn verify(&self) -> Result<(), LieError> {
        let n = self.dim();
        for i in 0..n {
            if !self.bracket_basis(i, i).is_empty() {
                return Err(LieError::NotAntisymmetric(i, i));
            }
            for j in i + 1..n {
                let mut s = self.bracket_basis(i, j).clone();
                axpy(&mut s, &ExactScalar::one(), self.bracket_basis(j, i));
                if !s.is_empty() {
                    return Err(LieError::NotAntisymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.jacobiator(i, j, k).is_empty() {
                        return Err(LieError::JacobiFails(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    fn jacobiator(&self, i: usize, j: usize, k: usize) -> SVec<usize> {
        let one = ExactScalar::one();
        let mut s = self.algebra.product.apply_basis_left(i, self.bracket_basis(j, k));
        axpy(&mut s, &one, &self.algebra.product.apply_basis_left(j, self.bracket_basis(k, i)));
        axpy(&mut s, &one, &self.algebra.product.apply_basis_left(k, self.bracket_basis(i, j)));
        s
    }

    /// Trace form of the adjoint representation.
    pub fn killing_form(&self) -> ExactMatrix {
        self.algebra.trace_form()
    }
}

/// Symmetric bilinear form on a Lie algebra, by Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantForm {
    pub gram: ExactMatrix,
}

impl InvariantForm {
    pub fn eval(&self, x: &SVec<usize>, y: &SVec<usize>) -> ExactScalar {
        let gy = self.gram.mul_svec(y);
        x.iter().filter_map(|(i, a)| gy.get(i).map(|b| a * b)).sum()
    }

    pub fn eval_basis(&self, i: usize, j: usize) -> ExactScalar {
        self.gram.get(i, j)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub symmetric: bool,
    /// Basis triples (x, y, z) with `([x,y], z) != (x, [y,z])`.
    pub violations: Vec<(usize, usize, usize)>,
    pub gram_rank: usize,
    pub nondegenerate: bool,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_invariance(g: &LieAlgebra, form: &InvariantForm) -> InvarianceReport {
    let n = g.dim();
    let gram = &form.gram;
    let symmetric = *gram == gram.transpose();
    let mut violations = Vec::new();
    for x in 0..n {
        for y in 0..n {
            let xy = g.bracket_basis(x, y);
            for z in 0..n {
                let lhs = form.eval(xy, &unit_svec(z));
                let rhs = form.eval(&unit_svec(x), g.bracket_basis(y, z));
                if lhs != rhs {
                    violations.push((x, y, z));
                }
            }
        }
    }
    let gram_rank = gram.rank();
    InvarianceReport { symmetric, violations, gram_rank, nondegenerate: gram_rank == n }
}

/// Sign of the bimultiplicative cocycle on the root lattice.
fn cocycle(cartan: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let n = cartan.len();
    let mut parity = 0i64;
    for i in 0..n {
        for j in 0..n {
            if i == j || (i < j && cartan[i][j] == -1) {
                parity += a[i] * b[j];
            }
        }
    }
    if parity.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Chevalley basis of a simply-laced simple Lie algebra, its root data and
/// the invariant form normalized so the highest root has squared length 2.
///
/// Basis order: `e_alpha` for positive roots, then `f_alpha`, then the
/// simple coroots.
pub fn chevalley_basis(
    cartan_type: CartanType,
) -> Result<(LieAlgebra, RootData, InvariantForm), LieError> {
    let cartan = cartan_type.cartan_matrix();
    let r = cartan.len();
    let pos = positive_roots(&cartan);
    let np = pos.len();
    let dim = 2 * np + r;
    let index_of_pos: std::collections::HashMap<Vec<i64>, usize> =
        pos.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();

    let names: Vec<String> = if cartan_type == CartanType::A(1) {
        vec!["e".into(), "f".into(), "h".into()]
    } else {
        let mut v: Vec<String> = (1..=np).map(|i| format!("e{i}")).collect();
        v.extend((1..=np).map(|i| format!("f{i}")));
        v.extend((1..=r).map(|i| format!("h{i}")));
        v
    };

    // E_root as a basis vector: e_a = E_a, f_a = -E_{-a}.
    let e_of = |root: &[i64]| -> Option<SVec<usize>> {
        if root.iter().all(|&c| c >= 0) {
            index_of_pos.get(root).map(|&k| unit_svec(k))
        } else {
            let neg: Vec<i64> = root.iter().map(|c| -c).collect();
            index_of_pos
                .get(&neg)
                .map(|&k| scaled(&unit_svec(np + k), &-ExactScalar::one()))
        }
    };
    let pairing = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..r {
            for j in 0..r {
                s += a[i] * cartan[i][j] * b[j];
            }
        }
        s
    };
    // basis element as (root, scale) with x = scale * E_root, or None for Cartan
    let root_of = |k: usize| -> Option<(Vec<i64>, i64)> {
        if k < np {
            Some((pos[k].clone(), 1))
        } else if k < 2 * np {
            Some((pos[k - np].iter().map(|c| -c).collect(), -1))
        } else {
            None
        }
    };
    let coroot_vec = |root: &[i64]| -> SVec<usize> {
        let mut v = SVec::new();
        for (i, c) in root.iter().enumerate() {
            if *c != 0 {
                v.insert(2 * np + i, ExactScalar::from_int(*c));
            }
        }
        v
    };

    let mut table = Bilinear::zero(dim, dim, dim);
    for x in 0..dim {
        for y in 0..dim {
            let val: SVec<usize> = match (root_of(x), root_of(y)) {
                (None, None) => SVec::new(),
                (None, Some((b, _))) => {
                    let mut h = vec![0; r];
                    h[x - 2 * np] = 1;
                    scaled(&unit_svec(y), &ExactScalar::from_int(pairing(&h, &b)))
                }
                (Some((a, _)), None) => {
                    let mut h = vec![0; r];
                    h[y - 2 * np] = 1;
                    scaled(&unit_svec(x), &ExactScalar::from_int(-pairing(&h, &a)))
                }
                (Some((a, sa)), Some((b, sb))) => {
                    let sum: Vec<i64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
                    let scale = ExactScalar::from_int(sa * sb);
                    if sum.iter().all(|&c| c == 0) {
                        // [E_a, E_-a] = -a as a coroot
                        scaled(&coroot_vec(&a), &(-scale))
                    } else if let Some(e) = e_of(&sum) {
                        let eps = cocycle(&cartan, &a, &b);
                        scaled(&e, &(scale * ExactScalar::from_int(eps)))
                    } else {
                        SVec::new()
                    }
                }
            };
            table.set(x, y, val);
        }
    }
    let g = LieAlgebra::new_unchecked(AlgebraPresentation::new(names, table));

    let mut gram = ExactMatrix::zero(dim, dim);
    for k in 0..np {
        gram.set(k, np + k, ExactScalar::one());
        gram.set(np + k, k, ExactScalar::one());
    }
    for i in 0..r {
        for j in 0..r {
            if cartan[i][j] != 0 {
                gram.set(2 * np + i, 2 * np + j, ExactScalar::from_int(cartan[i][j]));
            }
        }
    }
    let form = InvariantForm { gram };
    let rd = RootData {
        cartan_type,
        rank: r,
        cartan_matrix: cartan.clone(),
        positive_roots: pos.clone(),
        e_index: (0..np).collect(),
        f_index: (np..2 * np).collect(),
        cartan_indices: (2 * np..dim).collect(),
        coroots: pos.clone(),
        theta: np - 1,
    };
    Ok((g, rd, form))
}

/// Chevalley basis with the Lie axioms checked on every basis triple.
pub fn chevalley_basis_verified(
    cartan_type: CartanType,
) -> Result<(LieAlgebra, RootData, InvariantForm), LieError> {
    let out = chevalley_basis(cartan_type)?;
    out.0.verify()?;
    Ok(out)
}

/// Coroot `h_alpha` as an element of the algebra.
pub fn coroot_element(rd: &RootData, root: usize) -> SVec<usize> {
    let mut v = SVec::new();
    for (i, c) in rd.coroots[root].iter().enumerate() {
        if *c != 0 {
            v.insert(rd.cartan_indices[i], ExactScalar::from_int(*c));
        }
    }
    v
}

/// Serializable `lie-algebra.json` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LieAlgebraDocument {
    pub schema_version: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub antisymmetric: bool,
    pub brackets: Bilinear,
    pub form: Option<ExactMatrix>,
    pub killing: Option<ExactMatrix>,
    pub root_data: Option<RootData>,
}

impl LieAlgebraDocument {
    pub fn new(g: &LieAlgebra, form: Option<&InvariantForm>, rd: Option<&RootData>) -> Self {
        LieAlgebraDocument {
            schema_version: crate::SCHEMA_VERSION,
            dim: g.dim(),
            basis: g.basis().to_vec(),
            antisymmetric: true,
            brackets: g.algebra.product.clone(),
            form: form.map(|f| f.gram.clone()),
            killing: (g.dim() <= 80).then(|| g.killing_form()),
            root_data: rd.cloned(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idx(g: &LieAlgebra, name: &str) -> usize {
        g.basis().iter().position(|b| b == name).unwrap()
    }

    #[test]
    fn a1_chevalley() {
        let (g, rd, form) = chevalley_basis_verified(CartanType::A(1)).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.basis(), &["e", "f", "h"]);
        let (e, f, h) = (idx(&g, "e"), idx(&g, "f"), idx(&g, "h"));
        assert_eq!(form.eval_basis(e, f), ExactScalar::one());
        assert_eq!(form.eval_basis(h, h), ExactScalar::from_int(2));
        assert_eq!(g.bracket_basis(e, f), &unit_svec(h));
        assert_eq!(g.bracket_basis(h, e), &scaled(&unit_svec(e), &ExactScalar::from_int(2)));
        assert_eq!(g.bracket_basis(h, f), &scaled(&unit_svec(f), &ExactScalar::from_int(-2)));
        assert_eq!(rd.theta, 0);
    }

    #[test]
    fn root_relations_hold_for_every_positive_root() {
        for t in [CartanType::A(2), CartanType::A(3), CartanType::D(4)] {
            let (g, rd, form) = chevalley_basis_verified(t).unwrap();
            for a in 0..rd.positive_roots.len() {
                let (e, f) = (rd.e_index[a], rd.f_index[a]);
                let h = coroot_element(&rd, a);
                assert_eq!(g.bracket_basis(e, f), &h);
                assert_eq!(g.bracket(&h, &unit_svec(e)), scaled(&unit_svec(e), &ExactScalar::from_int(2)));
                assert_eq!(g.bracket(&h, &unit_svec(f)), scaled(&unit_svec(f), &ExactScalar::from_int(-2)));
            }
            let th = coroot_element(&rd, rd.theta);
            assert_eq!(form.eval(&th, &th), ExactScalar::from_int(2));
        }
    }

    #[test]
    fn normalized_form_is_invariant() {
        let (g, _, form) = chevalley_basis(CartanType::A(1)).unwrap();
        let rep = verify_invariance(&g, &form);
        assert!(rep.invariant() && rep.symmetric);
        assert_eq!(rep.gram_rank, 3);
        let zero = InvariantForm { gram: ExactMatrix::zero(3, 3) };
        let rep = verify_invariance(&g, &zero);
        assert!(rep.invariant());
        assert_eq!(rep.gram_rank, 0);
        let mut bad = ExactMatrix::zero(3, 3);
        bad.set(0, 0, ExactScalar::one());
        let rep = verify_invariance(&g, &InvariantForm { gram: bad });
        assert!(!rep.invariant());
        // ([h,e], e) = 2 while (h, [e,e]) = 0
        assert!(rep.violations.contains(&(2, 0, 0)));
    }

    #[test]
    fn killing_is_multiple_of_normalized_form() {
        // trace form of ad equals 2 h^vee times the normalized form
        for t in [CartanType::A(1), CartanType::A(2), CartanType::D(4)] {
            let (g, rd, form) = chevalley_basis(t).unwrap();
            let k = g.killing_form();
            let scale = ExactScalar::from_int(2 * rd.dual_coxeter());
            assert_eq!(k, form.gram.scale(&scale), "{t}");
        }
    }

    #[test]
    fn dims_and_roots() {
        let (g, rd, _) = chevalley_basis(CartanType::A(2)).unwrap();
        assert_eq!((g.dim(), rd.positive_roots.len()), (8, 3));
        let (g, rd, _) = chevalley_basis(CartanType::D(4)).unwrap();
        assert_eq!((g.dim(), rd.positive_roots.len()), (28, 12));
    }
}
