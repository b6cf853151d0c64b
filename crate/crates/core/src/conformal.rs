use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{axpy, kernel, minimal_polynomial, rational_roots, scaled, unit_svec, ExactMatrix, SVec, Subspace};
use crate::scalar::ExactScalar;
use crate::va::{single, FormulaStats, Generator, State, VaError, VertexAlgebra, Word};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConformalError {
    #[error("the bundle carries no Lie algebra with root data")]
    NoLieAlgebra,
    #[error("the invariant form is degenerate on the Lie algebra")]
    DegenerateForm,
    #[error("conformal checks need states up to degree 2, computed only to {0}")]
    DegreeTooLow(i64),
    #[error(transparent)]
    Va(#[from] VaError),
}

/// Shift data for `ω~ = ω + h(-2)1 + 2 Σ a_i(-3)1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct ConformalData {
    /// Element of the Lie algebra, in its basis.
    pub h: SVec<usize>,
    /// Elements of A.
    pub a_list: Vec<SVec<usize>>,
}

/// Eigen-data of `L(0)` and `h(0)` on one `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftVectorCheck {
    pub a: String,
    pub l0_eigenvalue: Option<ExactScalar>,
    pub h0_eigenvalue: Option<ExactScalar>,
    pub l_minus1_is_translation: bool,
}

impl ShiftVectorCheck {
    pub fn holds(&self) -> bool {
        self.l0_eigenvalue.is_some() && self.l0_eigenvalue == self.h0_eigenvalue && self.l_minus1_is_translation
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub l1_h_zero: bool,
    pub shift_vectors: Vec<ShiftVectorCheck>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.l1_h_zero && self.shift_vectors.iter().all(ShiftVectorCheck::holds)
    }
}

/// `L~(n) ω~` for one `n`, compared with its expected value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeOnConformal {
    pub n: i64,
    pub expected: String,
    pub value: String,
    pub holds: bool,
    /// Whether the short list of conditions names this `n`.
    pub listed: bool,
}

/// How the shift vectors `a_i` sit inside N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShiftMode {
    Empty,
    /// Linearly independent in N without spanning it.
    Independent,
    BasisOfN,
    /// Dependent, or not contained in N.
    Degenerate,
}

impl ShiftMode {
    pub fn classify(a_dim: usize, n_indices: &[usize], a_list: &[SVec<usize>]) -> Self {
        if a_list.is_empty() {
            return ShiftMode::Empty;
        }
        let n = Subspace::from_vectors(a_dim, n_indices.iter().map(|&i| unit_svec(i)));
        let a = Subspace::from_vectors(a_dim, a_list.iter().cloned());
        let inside = n.sum(&a).map(|s| s.dim() == n.dim()).unwrap_or(false);
        match (inside && a.dim() == a_list.len(), a.dim() == n.dim()) {
            (false, _) => ShiftMode::Degenerate,
            (true, true) => ShiftMode::BasisOfN,
            (true, false) => ShiftMode::Independent,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformalReport {
    pub shift_mode: ShiftMode,
    pub sugawara_central_charge: Option<ExactScalar>,
    pub h_norm: ExactScalar,
    /// `c - 12 <h, h>`.
    pub expected_rank: Option<ExactScalar>,
    /// Read off from `L~(2) ω~ = (c~/2) 1`, if it lies on the vacuum line.
    pub measured_rank: Option<ExactScalar>,
    pub hypotheses: HypothesisReport,
    pub virasoro: FormulaStats,
    pub translation: FormulaStats,
    pub mode_formula: FormulaStats,
    pub l0_eigenvalues: Vec<Vec<ExactScalar>>,
    pub l0_diagonalizable: bool,
    pub modes_on_vector: Vec<ModeOnConformal>,
    /// The listed conditions hold but an unlisted `n` fails.
    pub unlisted_condition_fails: bool,
}

impl ConformalReport {
    pub fn is_conformal(&self) -> bool {
        self.measured_rank.is_some()
            && self.measured_rank == self.expected_rank
            && self.virasoro.passes()
            && self.translation.passes()
            && self.mode_formula.passes()
            && self.l0_diagonalizable
            && self.modes_on_vector.iter().all(|m| m.holds)
    }
}

struct LieView {
    g_in_b: Vec<usize>,
    gram: ExactMatrix,
    dual_coxeter: i64,
}

fn lie_view(va: &VertexAlgebra) -> Result<LieView, ConformalError> {
    let lie = va.bundle.lie.as_ref().ok_or(ConformalError::NoLieAlgebra)?;
    let rd = lie.root_data.as_ref().ok_or(ConformalError::NoLieAlgebra)?;
    let n = lie.g_in_b.len();
    let mut gram = ExactMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            gram.set(i, j, lie.form.eval_basis(i, j));
        }
    }
    Ok(LieView { g_in_b: lie.g_in_b.clone(), gram, dual_coxeter: rd.dual_coxeter() })
}

fn g_generator(view: &LieView, x: &SVec<usize>) -> Generator {
    Generator::B(x.iter().map(|(i, c)| (view.g_in_b[*i], c.clone())).collect())
}

/// Sugawara vector `(1/(2(1 + h∨))) Σ u_i(-1) u^i(-1) 1` at level 1.
pub fn sugawara_vector(va: &mut VertexAlgebra) -> Result<State, ConformalError> {
    if va.space.max_degree() < 2 {
        return Err(ConformalError::DegreeTooLow(va.space.max_degree()));
    }
    let view = lie_view(va)?;
    let inv = view.gram.inverse().ok_or(ConformalError::DegenerateForm)?;
    let n = view.g_in_b.len();
    let mut omega = State::new();
    for i in 0..n {
        let dual: SVec<usize> = inv.column(i);
        let ui = va.state_of(&g_generator(&view, &dual))?;
        let t = va.mode_action(&g_generator(&view, &unit_svec(i)), -1, &ui)?;
        axpy(&mut omega, &ExactScalar::one(), &t);
    }
    let k = ExactScalar::from_int(2 * (1 + view.dual_coxeter));
    Ok(scaled(&omega, &k.recip()))
}

/// `x = c 1` for some scalar `c`.
fn vacuum_multiple(va: &VertexAlgebra, x: &State) -> Option<ExactScalar> {
    let vac = va.vacuum();
    match x.len() {
        0 => Some(ExactScalar::zero()),
        1 => x.get(vac.keys().next().unwrap()).cloned(),
        _ => None,
    }
}

/// Central charge of the Sugawara vector from `L(2) ω = (c/2) 1`.
pub fn measure_central_charge(va: &mut VertexAlgebra) -> Result<Option<ExactScalar>, ConformalError> {
    let omega = sugawara_vector(va)?;
    let l2 = va.y_product(&omega, 3, &omega)?;
    Ok(vacuum_multiple(va, &l2).map(|c| c * ExactScalar::from_int(2)))
}

fn eigenvalue(x: &State, y: &State) -> Option<ExactScalar> {
    // y = c x
    let (w, c0) = x.iter().next()?;
    let c = y.get(w).cloned().unwrap_or_default() / c0.clone();
    (scaled(x, &c) == *y).then_some(c)
}

/// `L(1) h = 0`, and for each `a_i`: `L(0) a_i = h(0) a_i` on an eigenvector and
/// `L(-1) a_i = a_i(-2) 1`.
pub fn check_hypotheses(va: &mut VertexAlgebra, data: &ConformalData) -> Result<HypothesisReport, ConformalError> {
    let view = lie_view(va)?;
    let omega = sugawara_vector(va)?;
    let h = g_generator(&view, &data.h);
    let hs = va.state_of(&h)?;
    let l1_h_zero = va.y_product(&omega, 2, &hs)?.is_empty();
    let mut shift_vectors = Vec::new();
    for a in &data.a_list {
        let ast = va.state_of(&Generator::A(a.clone()))?;
        let l0 = va.y_product(&omega, 1, &ast)?;
        let h0 = va.mode_action(&h, 0, &ast)?;
        let lm1 = va.y_product(&omega, 0, &ast)?;
        let shifted = va.mode_action(&Generator::A(a.clone()), -2, &va.vacuum())?;
        shift_vectors.push(ShiftVectorCheck {
            a: va.bundle.render_a(a),
            l0_eigenvalue: eigenvalue(&ast, &l0),
            h0_eigenvalue: eigenvalue(&ast, &h0),
            l_minus1_is_translation: lm1 == shifted,
        });
    }
    Ok(HypothesisReport { l1_h_zero, shift_vectors })
}

/// The shifted vector `ω~ = ω + h(-2)1 + 2 Σ a_i(-3)1`.
pub fn shifted_vector(va: &mut VertexAlgebra, data: &ConformalData) -> Result<State, ConformalError> {
    let view = lie_view(va)?;
    let mut w = sugawara_vector(va)?;
    let vac = va.vacuum();
    let h = va.mode_action(&g_generator(&view, &data.h), -2, &vac)?;
    axpy(&mut w, &ExactScalar::one(), &h);
    for a in &data.a_list {
        let t = va.mode_action(&Generator::A(a.clone()), -3, &vac)?;
        axpy(&mut w, &ExactScalar::from_int(2), &t);
    }
    Ok(w)
}

fn matrix_on_degree(
    va: &mut VertexAlgebra,
    basis: &[Word],
    mut op: impl FnMut(&mut VertexAlgebra, &State) -> Result<State, VaError>,
) -> Result<ExactMatrix, VaError> {
    let index: HashMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut cols = Vec::with_capacity(basis.len());
    for w in basis {
        let r = op(va, &single(w.clone()))?;
        cols.push(r.iter().map(|(k, c)| (index[k], c.clone())).collect());
    }
    Ok(ExactMatrix::from_columns(basis.len(), &cols))
}

/// Eigenvalues if the matrix is diagonalizable over the rationals.
fn rational_eigenbasis(m: &ExactMatrix) -> Option<Vec<ExactScalar>> {
    if m.rows() == 0 {
        return Some(Vec::new());
    }
    let poly = minimal_polynomial(m);
    let roots = rational_roots(&poly);
    if roots.len() + 1 != poly.len() {
        return None;
    }
    let n = m.rows();
    let total: usize = roots.iter().map(|r| kernel(&m.sub(&ExactMatrix::identity(n).scale(r))).dim()).sum();
    (total == n).then_some(roots)
}

/// Checks that `ω~` is a conformal vector on the computed degrees.
pub fn check_conformal(va: &mut VertexAlgebra, data: &ConformalData) -> Result<ConformalReport, ConformalError> {
    let top = va.space.max_degree();
    let view = lie_view(va)?;
    let c = measure_central_charge(va)?;
    let lie = va.bundle.lie.as_ref().ok_or(ConformalError::NoLieAlgebra)?;
    let h_norm = lie.form.eval(&data.h, &data.h);
    let expected_rank = c.clone().map(|c| c - ExactScalar::from_int(12) * h_norm.clone());
    let hypotheses = check_hypotheses(va, data)?;
    let wt = shifted_vector(va, data)?;
    let h = g_generator(&view, &data.h);

    let l_tilde = |va: &mut VertexAlgebra, n: i64, s: &State| va.y_product(&wt, n + 1, s);
    let measured_rank = {
        let l2 = l_tilde(va, 2, &wt)?;
        vacuum_multiple(va, &l2).map(|x| x * ExactScalar::from_int(2))
    };
    let ct = expected_rank.clone().unwrap_or_default();

    let mut virasoro = FormulaStats::default();
    let mut translation = FormulaStats::default();
    let mut mode_formula = FormulaStats::default();
    let mut l0_eigenvalues = Vec::new();
    let mut l0_diagonalizable = true;
    let omega = sugawara_vector(va)?;
    for d in 0..=top {
        let basis = va.space.basis(d as usize).to_vec();
        for w in &basis {
            let s = single(w.clone());
            let name = va.space.engine.render_word(w);
            // L~(n) = L(n) - (n+1) h(n) + n(n+1) Σ a_i(n-1)
            for n in -1..=2i64 {
                if d - n > top {
                    continue;
                }
                let lhs = l_tilde(va, n, &s)?;
                let mut rhs = va.y_product(&omega, n + 1, &s)?;
                let hn = va.mode_action(&h, n as i32, &s)?;
                axpy(&mut rhs, &ExactScalar::from_int(-(n + 1)), &hn);
                for a in &data.a_list {
                    let t = va.mode_action(&Generator::A(a.clone()), (n - 1) as i32, &s)?;
                    axpy(&mut rhs, &ExactScalar::from_int(n * (n + 1)), &t);
                }
                mode_formula.record(&lhs, &rhs, || format!("n={n}, v={name}"));
            }
            if d < top {
                let lhs = l_tilde(va, -1, &s)?;
                let rhs = va.derivative(&s)?;
                translation.record(&lhs, &rhs, || format!("v={name}"));
            }
            // [L~(m), L~(n)] = (m-n) L~(m+n) + (m^3-m)/12 δ c~
            for m in -2..=2i64 {
                for n in -2..=2i64 {
                    let (mid1, mid2, fin) = (d - n, d - m, d - m - n);
                    if mid1 > top || mid2 > top || fin > top || fin < 0 {
                        continue;
                    }
                    let ln = l_tilde(va, n, &s)?;
                    let lmln = l_tilde(va, m, &ln)?;
                    let lm = l_tilde(va, m, &s)?;
                    let lnlm = l_tilde(va, n, &lm)?;
                    let mut lhs = lmln;
                    axpy(&mut lhs, &-ExactScalar::one(), &lnlm);
                    let mut rhs = scaled(&l_tilde(va, m + n, &s)?, &ExactScalar::from_int(m - n));
                    if m + n == 0 {
                        let k = ExactScalar::new(m * m * m - m, 12) * ct.clone();
                        axpy(&mut rhs, &k, &s);
                    }
                    virasoro.record(&lhs, &rhs, || format!("m={m}, n={n}, v={name}"));
                }
            }
        }
        let l0 = matrix_on_degree(va, &basis, |va, s| va.y_product(&wt, 1, s))?;
        match rational_eigenbasis(&l0) {
            Some(ev) => l0_eigenvalues.push(ev),
            None => {
                l0_diagonalizable = false;
                l0_eigenvalues.push(Vec::new());
            }
        }
    }

    // L~(n) ω~: 0 for n >= 3 and n = 1, (c~/2) 1 for n = 2, 2 ω~ for n = 0
    let mut modes_on_vector = Vec::new();
    for n in 0..=4i64 {
        let val = l_tilde(va, n, &wt)?;
        let expected_state = match n {
            0 => scaled(&wt, &ExactScalar::from_int(2)),
            2 => scaled(&va.vacuum(), &(ct.clone() / ExactScalar::from_int(2))),
            _ => State::new(),
        };
        let expected = if n == 0 { "2ω~".to_string() } else { va.render(&expected_state) };
        modes_on_vector.push(ModeOnConformal {
            n,
            expected,
            value: va.render(&val),
            holds: val == expected_state,
            listed: !matches!(n, 1 | 3),
        });
    }
    let listed_hold = modes_on_vector.iter().filter(|m| m.listed).all(|m| m.holds);
    let unlisted_condition_fails = listed_hold && modes_on_vector.iter().any(|m| !m.listed && !m.holds);
    Ok(ConformalReport {
        shift_mode: ShiftMode::classify(va.bundle.a_dim(), &va.bundle.n_indices, &data.a_list),
        sugawara_central_charge: c,
        h_norm,
        expected_rank,
        measured_rank,
        hypotheses,
        virasoro,
        translation,
        mode_formula,
        l0_eigenvalues,
        l0_diagonalizable,
        modes_on_vector,
        unlisted_condition_fails,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{construct_blambda, construct_bg, trivial_module_input};
    use crate::liealg::CartanType;
    use crate::va::SaturationConfig;

    fn sl2_quotient() -> VertexAlgebra {
        let b = construct_blambda(CartanType::A(1), &[1]).unwrap();
        VertexAlgebra::simple(&b, SaturationConfig { max_degree: 3, ..Default::default() }).unwrap()
    }

    fn h_theta(scale: i64) -> SVec<usize> {
        [(2usize, ExactScalar::new(1, scale))].into_iter().collect()
    }

    // k dim g / (k + h∨) at level 1
    fn level_one_charge(dim_g: i64, dual_coxeter: i64) -> ExactScalar {
        ExactScalar::new(dim_g, 1 + dual_coxeter)
    }

    #[test]
    fn sl2_charge_matches_level_one() {
        let mut va = sl2_quotient();
        assert_eq!(measure_central_charge(&mut va).unwrap(), Some(level_one_charge(3, 2)));
        let rep = check_conformal(&mut va, &ConformalData::default()).unwrap();
        assert!(rep.is_conformal());
        assert_eq!(rep.measured_rank, Some(ExactScalar::one()));
        assert_eq!(rep.l0_eigenvalues[1], vec![ExactScalar::one(), ExactScalar::new(5, 4)]);
    }

    #[test]
    fn sl3_charge_matches_level_one() {
        let b = construct_bg(&trivial_module_input(CartanType::A(2), 0).unwrap()).unwrap();
        let mut va = VertexAlgebra::simple(&b, SaturationConfig { max_degree: 2, ..Default::default() }).unwrap();
        assert_eq!(measure_central_charge(&mut va).unwrap(), Some(level_one_charge(8, 3)));
    }

    #[test]
    fn shifted_rank_is_c_minus_twelve_norm() {
        let mut va = sl2_quotient();
        let rep = check_conformal(&mut va, &ConformalData { h: h_theta(2), a_list: vec![] }).unwrap();
        assert!(rep.is_conformal());
        // <h, h> = 1/2 for h = h_θ/2
        assert_eq!(rep.h_norm, ExactScalar::new(1, 2));
        assert_eq!(rep.measured_rank, Some(ExactScalar::from_int(-5)));

        let data = ConformalData { h: h_theta(4), a_list: vec![unit_svec(1)] };
        let rep = check_conformal(&mut va, &data).unwrap();
        assert!(rep.hypotheses.holds());
        assert_eq!(rep.hypotheses.shift_vectors[0].h0_eigenvalue, Some(ExactScalar::new(1, 4)));
        assert!(rep.is_conformal());
        assert_eq!(rep.measured_rank, Some(ExactScalar::new(-1, 2)));
        assert_eq!(rep.shift_mode, ShiftMode::Independent);
    }

    #[test]
    fn shift_mode_classification() {
        let n = [1, 2];
        assert_eq!(ShiftMode::classify(3, &n, &[]), ShiftMode::Empty);
        assert_eq!(ShiftMode::classify(3, &n, &[unit_svec(2)]), ShiftMode::Independent);
        assert_eq!(ShiftMode::classify(3, &n, &[unit_svec(1), unit_svec(2)]), ShiftMode::BasisOfN);
        assert_eq!(ShiftMode::classify(3, &n, &[unit_svec(1), unit_svec(1)]), ShiftMode::Degenerate);
        assert_eq!(ShiftMode::classify(3, &n, &[unit_svec(0)]), ShiftMode::Degenerate);
    }

    #[test]
    fn mismatched_weight_breaks_conformality() {
        let mut va = sl2_quotient();
        let rep = check_conformal(&mut va, &ConformalData { h: h_theta(2), a_list: vec![unit_svec(1)] }).unwrap();
        assert!(!rep.hypotheses.holds());
        assert!(!rep.is_conformal());
        assert_eq!(rep.measured_rank, None);
        let l2 = rep.modes_on_vector.iter().find(|m| m.n == 2).unwrap();
        assert!(!l2.holds);
    }

    #[test]
    fn root_vector_shift_fails_hypotheses() {
        let mut va = sl2_quotient();
        let rep = check_hypotheses(&mut va, &ConformalData { h: unit_svec(0), a_list: vec![unit_svec(1)] }).unwrap();
        assert!(!rep.holds());
    }
}
