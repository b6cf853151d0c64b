use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraPresentation, Bilinear};
use crate::liealg::{LieAlgebra, WeightModule};
use crate::linalg::{axpy, dense_to_svec, kernel, minimal_polynomial, rational_roots, unit_svec, ExactMatrix, SVec, Subspace};
use crate::scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LeibnizError {
    #[error("left Leibniz identity fails at basis triple ({0}, {1}, {2})")]
    NotLeibniz(usize, usize, usize),
    #[error("subspace is not closed under the bracket: [{0}, {1}] leaves it")]
    NotSubalgebra(usize, usize),
    #[error("subspace lives in dimension {got}, algebra has dimension {expected}")]
    AmbientMismatch { expected: usize, got: usize },
}

/// Basis triples violating `[a,[b,c]] = [[a,b],c] + [b,[a,c]]`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LeibnizReport {
    pub violations: Vec<(usize, usize, usize)>,
}

impl LeibnizReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_leibniz(alg: &AlgebraPresentation) -> LeibnizReport {
    let n = alg.dim();
    let p = &alg.product;
    let mut violations = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let ab = p.get(a, b);
            for c in 0..n {
                let mut r = p.apply_basis_left(a, p.get(b, c));
                let one = ExactScalar::one();
                let mut rhs = SVec::new();
                for (k, x) in ab {
                    axpy(&mut rhs, x, p.get(*k, c));
                }
                axpy(&mut rhs, &one, &p.apply_basis_left(b, p.get(a, c)));
                axpy(&mut r, &-one, &rhs);
                if !r.is_empty() {
                    violations.push((a, b, c));
                }
            }
        }
    }
    LeibnizReport { violations }
}

/// Left Leibniz algebra by structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeibnizAlgebra {
    pub algebra: AlgebraPresentation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Simple Leibniz algebra with nonzero Leib ideal.
    Simple,
    /// Leib is zero and the algebra is a simple Lie algebra.
    LieSimple,
    /// `rad = Leib` without being simple.
    Semisimple,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityVerdict {
    pub verdict: Verdict,
    pub reason: String,
    /// Offending ideal or submodule, in the algebra's coordinates.
    pub witness: Option<Subspace>,
    pub leib_dim: usize,
    pub radical_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeviReport {
    pub antisymmetric: bool,
    pub killing_nondegenerate: bool,
    pub radical_dim: usize,
    pub complementary: bool,
}

impl LeviReport {
    pub fn holds(&self) -> bool {
        self.antisymmetric && self.killing_nondegenerate && self.complementary
    }
}

impl LeibnizAlgebra {
    pub fn new(algebra: AlgebraPresentation) -> Result<Self, LeibnizError> {
        let rep = verify_leibniz(&algebra);
        if let Some(&(a, b, c)) = rep.violations.first() {
            return Err(LeibnizError::NotLeibniz(a, b, c));
        }
        Ok(LeibnizAlgebra { algebra })
    }

    pub fn from_lie(g: &LieAlgebra) -> Self {
        LeibnizAlgebra { algebra: g.algebra.clone() }
    }

    /// `g + M` with `[x, m] = x.m`, `[m, x] = 0` and `[m, m'] = 0`.
    pub fn hemisemidirect(g: &LieAlgebra, m: &WeightModule) -> Self {
        let (n, d) = (g.dim(), m.dim());
        let mut p = Bilinear::zero(n + d, n + d, n + d);
        for i in 0..n {
            for j in 0..n {
                p.set(i, j, g.bracket_basis(i, j).clone());
            }
            for j in 0..d {
                let v = m.act_basis(i, &unit_svec(j));
                p.set(i, n + j, v.into_iter().map(|(k, c)| (n + k, c)).collect());
            }
        }
        let mut names = g.basis().to_vec();
        names.extend(m.basis.iter().cloned());
        LeibnizAlgebra { algebra: AlgebraPresentation::new(names, p) }
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }

    pub fn bracket(&self, x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
        self.algebra.mul(x, y)
    }

    pub fn is_lie(&self) -> bool {
        self.leib_ideal().is_zero()
    }

    /// `span{[u,v] + [v,u]}` over basis pairs.
    pub fn leib_ideal(&self) -> Subspace {
        let n = self.dim();
        let one = ExactScalar::one();
        let mut vecs = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut s = self.algebra.mul_basis(i, j).clone();
                if i != j {
                    axpy(&mut s, &one, self.algebra.mul_basis(j, i));
                }
                vecs.push(s);
            }
        }
        Subspace::from_vectors(n, vecs)
    }

    /// `span{[u,v] : u in U, v in V}`.
    pub fn bracket_span(&self, u: &Subspace, v: &Subspace) -> Subspace {
        let ub = u.basis_vectors();
        let vb = v.basis_vectors();
        let mut vecs = Vec::new();
        for x in &ub {
            for y in &vb {
                vecs.push(self.bracket(x, y));
            }
        }
        Subspace::from_vectors(self.dim(), vecs)
    }

    pub fn is_two_sided_ideal(&self, s: &Subspace) -> bool {
        let full = Subspace::full(self.dim());
        let inside = |t: &Subspace| s.contains_subspace(t).unwrap_or(false);
        inside(&self.bracket_span(&full, s)) && inside(&self.bracket_span(s, &full))
    }

    /// Chain `L^(1) = [L,L]`, `L^(i+1) = [L^(i), L^(i)]` starting from `start`,
    /// stopped once it stabilizes.
    pub fn derived_series_of(&self, start: &Subspace) -> Vec<Subspace> {
        let mut out = Vec::new();
        let mut cur = start.clone();
        loop {
            let next = self.bracket_span(&cur, &cur);
            let stable = next == cur;
            out.push(next.clone());
            if stable || next.is_zero() {
                break;
            }
            cur = next;
        }
        out
    }

    pub fn derived_series(&self) -> Vec<Subspace> {
        self.derived_series_of(&Subspace::full(self.dim()))
    }

    pub fn is_solvable_subalgebra(&self, s: &Subspace) -> bool {
        self.derived_series_of(s).last().is_none_or(Subspace::is_zero)
    }

    pub fn is_solvable(&self) -> bool {
        self.is_solvable_subalgebra(&Subspace::full(self.dim()))
    }

    /// Structure constants of a subalgebra against its RREF basis.
    pub fn restrict(&self, s: &Subspace) -> Result<AlgebraPresentation, LeibnizError> {
        if s.ambient_dim() != self.dim() {
            return Err(LeibnizError::AmbientMismatch { expected: self.dim(), got: s.ambient_dim() });
        }
        let b = s.basis_vectors();
        let k = b.len();
        let mut p = Bilinear::zero(k, k, k);
        for i in 0..k {
            for j in 0..k {
                let v = self.bracket(&b[i], &b[j]);
                let c = s.coordinates(&v).ok_or(LeibnizError::NotSubalgebra(i, j))?;
                p.set(i, j, dense_to_svec(&c));
            }
        }
        let names = (0..k).map(|i| format!("s{i}")).collect();
        Ok(AlgebraPresentation::new(names, p))
    }

    /// The Lie algebra `L / Leib(L)` on the complement of the Leib pivots,
    /// with the projection from `L`.
    fn lie_quotient(&self, leib: &Subspace) -> (AlgebraPresentation, Vec<usize>) {
        let keep = leib.complement_indices();
        let pos = |k: usize| keep.iter().position(|&c| c == k);
        let q = keep.len();
        let mut p = Bilinear::zero(q, q, q);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                let r = leib.reduce(self.algebra.mul_basis(i, j));
                p.set(a, b, r.into_iter().map(|(k, c)| (pos(k).expect("reduced"), c)).collect());
            }
        }
        let names = keep.iter().map(|&k| self.algebra.basis[k].clone()).collect();
        (AlgebraPresentation::new(names, p), keep)
    }

    /// Maximal solvable ideal, as the preimage of the Killing-orthogonal
    /// complement of the derived algebra of `L / Leib(L)`.
    pub fn radical(&self) -> Subspace {
        let leib = self.leib_ideal();
        let (q, keep) = self.lie_quotient(&leib);
        let qd = q.dim();
        let killing = q.trace_form();
        let derived = Subspace::from_vectors(
            qd,
            (0..qd).flat_map(|i| (0..qd).map(move |j| (i, j))).map(|(i, j)| q.mul_basis(i, j).clone()).collect::<Vec<_>>(),
        );
        // x is orthogonal to the derived algebra iff K d . x = 0 for its basis rows d
        let rows: Vec<SVec<usize>> = derived.basis_vectors().iter().map(|d| killing.transpose().mul_svec(d)).collect();
        let perp = kernel(&ExactMatrix::from_sparse_rows(qd, rows));
        let lifted = perp
            .basis_vectors()
            .into_iter()
            .map(|v| v.into_iter().map(|(k, c)| (keep[k], c)).collect::<SVec<usize>>());
        Subspace::from_vectors(self.dim(), lifted.chain(leib.basis_vectors()).collect::<Vec<_>>())
    }

    pub fn simplicity_verdict(&self) -> SimplicityVerdict {
        let n = self.dim();
        let leib = self.leib_ideal();
        let rad = self.radical();
        let (q, keep) = self.lie_quotient(&leib);
        let derived = self.bracket_span(&Subspace::full(n), &Subspace::full(n));
        let make = |verdict, reason: &str, witness| SimplicityVerdict {
            verdict,
            reason: reason.to_string(),
            witness,
            leib_dim: leib.dim(),
            radical_dim: rad.dim(),
        };
        let semisimple = rad == leib;
        let fallback = |reason: &str, witness| {
            if semisimple {
                make(Verdict::Semisimple, reason, witness)
            } else {
                make(Verdict::Neither, reason, witness)
            }
        };
        if derived == leib {
            return fallback("[L,L] equals Leib(L)", None);
        }
        // simplicity of the Lie quotient: semisimple with irreducible adjoint action
        let lift = |s: Subspace| {
            let vecs: Vec<SVec<usize>> = s
                .basis_vectors()
                .into_iter()
                .map(|v| v.into_iter().map(|(k, c)| (keep[k], c)).collect())
                .collect();
            Subspace::from_vectors(n, vecs.into_iter().chain(leib.basis_vectors()).collect::<Vec<_>>())
        };
        if q.trace_form().rank() != q.dim() {
            return fallback("Lie quotient has degenerate Killing form", Some(rad.clone()));
        }
        let ad: Vec<ExactMatrix> = (0..q.dim()).map(|i| q.left_matrix(&unit_svec(i))).collect();
        if let Some(ideal) = invariant_subspace(&ad, q.dim()) {
            return fallback("Lie quotient is not simple", Some(lift(ideal)));
        }
        if leib.is_zero() {
            return make(Verdict::LieSimple, "Leib(L) is zero; L is a simple Lie algebra", None);
        }
        // Leib as a module over the quotient via left multiplication
        let lb = leib.basis_vectors();
        let ops: Vec<ExactMatrix> = keep
            .iter()
            .map(|&k| {
                let cols: Vec<SVec<usize>> = lb
                    .iter()
                    .map(|v| {
                        let img = self.bracket(&unit_svec(k), v);
                        dense_to_svec(&leib.coordinates(&img).expect("Leib is an ideal"))
                    })
                    .collect();
                ExactMatrix::from_columns(lb.len(), &cols)
            })
            .collect();
        if let Some(sub) = invariant_subspace(&ops, lb.len()) {
            let vecs: Vec<SVec<usize>> = sub
                .basis_vectors()
                .iter()
                .map(|c| {
                    let mut v = SVec::new();
                    for (i, x) in c {
                        axpy(&mut v, x, &lb[*i]);
                    }
                    v
                })
                .collect();
            return fallback("Leib(L) is a reducible module", Some(Subspace::from_vectors(n, vecs)));
        }
        make(Verdict::Simple, "simple Leibniz algebra with nonzero Leib(L)", None)
    }

    /// Checks that `s` is a semisimple Lie subalgebra complementary to the radical.
    pub fn levi_check(&self, s: &Subspace) -> Result<LeviReport, LeibnizError> {
        let sub = self.restrict(s)?;
        let k = sub.dim();
        let mut antisymmetric = true;
        for i in 0..k {
            for j in i..k {
                let mut x = sub.mul_basis(i, j).clone();
                if i != j {
                    axpy(&mut x, &ExactScalar::one(), sub.mul_basis(j, i));
                }
                antisymmetric &= x.is_empty();
            }
        }
        let killing_nondegenerate = k > 0 && sub.trace_form().rank() == k;
        let rad = self.radical();
        let complementary = s.dim() + rad.dim() == self.dim()
            && s.intersection(&rad).map(|x| x.is_zero()).unwrap_or(false);
        Ok(LeviReport { antisymmetric, killing_nondegenerate, radical_dim: rad.dim(), complementary })
    }
}

/// Smallest invariant subspace containing `v` under the given operators.
pub fn invariant_closure(ops: &[ExactMatrix], dim: usize, v: &SVec<usize>) -> Subspace {
    let mut span = Subspace::from_vectors(dim, vec![v.clone()]);
    let mut frontier = vec![v.clone()];
    while let Some(x) = frontier.pop() {
        for op in ops {
            let y = op.mul_svec(&x);
            if !span.contains(&y) {
                span = Subspace::from_vectors(dim, span.basis_vectors().into_iter().chain([y.clone()]).collect::<Vec<_>>());
                frontier.push(y);
            }
        }
    }
    span
}

/// Dimension of the associative algebra generated by the operators and the identity.
fn generated_algebra_dim(ops: &[ExactMatrix], dim: usize) -> usize {
    let flat = |m: &ExactMatrix| -> SVec<usize> {
        let mut v = SVec::new();
        for (r, row) in m.sparse_rows().into_iter().enumerate() {
            for (c, x) in row {
                v.insert(r * dim + c, x);
            }
        }
        v
    };
    let id = ExactMatrix::identity(dim);
    let mut span = Subspace::from_vectors(dim * dim, vec![flat(&id)]);
    let mut found = vec![id];
    let mut frontier = found.clone();
    while let Some(m) = frontier.pop() {
        for op in ops {
            let p = op.matmul(&m).expect("square");
            let f = flat(&p);
            if !span.contains(&f) {
                span = Subspace::from_vectors(dim * dim, span.basis_vectors().into_iter().chain([f]).collect::<Vec<_>>());
                found.push(p.clone());
                frontier.push(p);
            }
        }
    }
    span.dim()
}

/// A proper nonzero invariant subspace, when the operators act reducibly.
///
/// Reducibility is decided by Burnside's theorem; the witness is searched
/// among closures of basis vectors and of rational eigenvectors.
pub fn invariant_subspace(ops: &[ExactMatrix], dim: usize) -> Option<Subspace> {
    if dim == 0 {
        return None;
    }
    let proper = |s: &Subspace| !s.is_zero() && s.dim() < dim;
    for i in 0..dim {
        let c = invariant_closure(ops, dim, &unit_svec(i));
        if proper(&c) {
            return Some(c);
        }
    }
    if generated_algebra_dim(ops, dim) == dim * dim {
        return None;
    }
    // common kernels and rational eigenspaces of generators and simple products
    let mut candidates: Vec<ExactMatrix> = ops.to_vec();
    for a in ops {
        for b in ops {
            candidates.push(a.matmul(b).expect("square"));
        }
    }
    for m in &candidates {
        for root in rational_roots(&minimal_polynomial(m)) {
            let shifted = m.sub(&ExactMatrix::identity(dim).scale(&root));
            for v in kernel(&shifted).basis_vectors() {
                let c = invariant_closure(ops, dim, &v);
                if proper(&c) {
                    return Some(c);
                }
            }
        }
    }
    // common kernel of all operators is invariant
    let stacked: Vec<SVec<usize>> = ops.iter().flat_map(|m| m.sparse_rows()).collect();
    let common = kernel(&ExactMatrix::from_sparse_rows(dim, stacked));
    if proper(&common) {
        return Some(common);
    }
    None
}

/// Serializable Leibniz algebra document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LeibnizDocument {
    pub schema_version: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub antisymmetric: bool,
    pub brackets: Bilinear,
}

impl From<&LeibnizAlgebra> for LeibnizDocument {
    fn from(l: &LeibnizAlgebra) -> Self {
        LeibnizDocument {
            schema_version: crate::SCHEMA_VERSION,
            dim: l.dim(),
            basis: l.algebra.basis.clone(),
            antisymmetric: l.is_lie(),
            brackets: l.algebra.product.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{chevalley_basis, highest_weight_module, CartanType};

    fn sl2() -> LieAlgebra {
        chevalley_basis(CartanType::A(1)).unwrap().0
    }

    fn b_lambda_like(m: i64) -> LeibnizAlgebra {
        let (g, rd, _) = chevalley_basis(CartanType::A(1)).unwrap();
        let v = highest_weight_module(&g, &rd, &[m]).unwrap();
        LeibnizAlgebra::hemisemidirect(&g, &v)
    }

    #[test]
    fn lie_algebra_is_leibniz_with_zero_leib() {
        let l = LeibnizAlgebra::from_lie(&sl2());
        assert!(verify_leibniz(&l.algebra).holds());
        assert!(l.leib_ideal().is_zero());
        let v = l.simplicity_verdict();
        assert_eq!(v.verdict, Verdict::LieSimple);
        assert!(!l.is_solvable());
        assert_eq!(l.derived_series().last().unwrap().dim(), 3);
    }

    #[test]
    fn one_dim_square_is_leib() {
        let mut p = Bilinear::zero(1, 1, 1);
        p.set(0, 0, unit_svec(0));
        let alg = AlgebraPresentation::new(vec!["x".into()], p);
        // [x,[x,x]] = x but [[x,x],x] + [x,[x,x]] = 2x
        let rep = verify_leibniz(&alg);
        assert_eq!(rep.violations, vec![(0, 0, 0)]);
        let l = LeibnizAlgebra { algebra: alg };
        assert_eq!(l.leib_ideal().dim(), 1);
    }

    #[test]
    fn planted_violation_is_reported() {
        let mut p = Bilinear::zero(2, 2, 2);
        p.set(0, 0, unit_svec(1));
        p.set(0, 1, unit_svec(0));
        let alg = AlgebraPresentation::new(vec!["x".into(), "y".into()], p);
        let rep = verify_leibniz(&alg);
        assert!(!rep.holds());
        assert!(matches!(LeibnizAlgebra::new(alg), Err(LeibnizError::NotLeibniz(..))));
    }

    #[test]
    fn hemisemidirect_sl2_fundamental() {
        let l = b_lambda_like(1);
        assert!(verify_leibniz(&l.algebra).holds());
        let leib = l.leib_ideal();
        assert_eq!(leib.dim(), 2);
        assert!(l.is_two_sided_ideal(&leib));
        assert!(l.bracket_span(&leib, &leib).is_zero());
        assert!(l.is_solvable_subalgebra(&leib));
        let v = l.simplicity_verdict();
        assert_eq!(v.verdict, Verdict::Simple, "{}", v.reason);
        let s = Subspace::from_vectors(5, (0..3).map(unit_svec).collect::<Vec<_>>());
        assert!(l.levi_check(&s).unwrap().holds());
        let e_only = Subspace::from_vectors(5, vec![unit_svec(0)]);
        assert!(!l.levi_check(&e_only).unwrap().holds());
        let not_closed = Subspace::from_vectors(5, vec![unit_svec(0), unit_svec(1)]);
        assert!(matches!(l.levi_check(&not_closed), Err(LeibnizError::NotSubalgebra(..))));
    }

    #[test]
    fn reducible_leib_is_not_simple() {
        let (g, rd, _) = chevalley_basis(CartanType::A(1)).unwrap();
        let v = highest_weight_module(&g, &rd, &[1]).unwrap();
        let l = LeibnizAlgebra::hemisemidirect(&g, &v.direct_sum(&v));
        let verdict = l.simplicity_verdict();
        assert_eq!(verdict.verdict, Verdict::Semisimple);
        let w = verdict.witness.unwrap();
        assert_eq!(w.dim(), 2);
        assert!(l.is_two_sided_ideal(&w));
    }

    #[test]
    fn lie_sl2_levi_is_itself() {
        let l = LeibnizAlgebra::from_lie(&sl2());
        let rep = l.levi_check(&Subspace::full(3)).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.radical_dim, 0);
    }

    #[test]
    fn abelian_is_solvable_in_one_step() {
        let alg = AlgebraPresentation::new(vec!["x".into(), "y".into()], Bilinear::zero(2, 2, 2));
        let l = LeibnizAlgebra::new(alg).unwrap();
        assert_eq!(l.derived_series().len(), 1);
        assert!(l.is_solvable());
        assert_eq!(l.simplicity_verdict().verdict, Verdict::Neither);
    }
}
