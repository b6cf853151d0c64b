use serde::{Deserialize, Serialize};

use super::engine::{single, Engine, Floor, State, Word};
use super::space::{GradedSpace, SaturationConfig, SaturationStats};
use super::{Alphabet, LetterKind, QuotientKind, VaError, VertexAlgebra};
use crate::algebroid::{AxiomReport, VertexAlgebroid};
use crate::liealg::WeightModule;
use crate::leibniz::invariant_subspace;
use crate::linalg::{unit_svec, ExactMatrix, SVec, Subspace};
use crate::scalar::ExactScalar;

/// A module over the Lie algebroid `(A, B/A∂A)`, given by the action of
/// each basis element of A and of B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebroidModule {
    pub names: Vec<String>,
    pub a_action: Vec<ExactMatrix>,
    pub b_action: Vec<ExactMatrix>,
}

impl AlgebroidModule {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    fn unit_only(bundle: &VertexAlgebroid, names: Vec<String>) -> Self {
        let n = names.len();
        let mut a_action = vec![ExactMatrix::zero(n, n); bundle.a_dim()];
        a_action[bundle.unit] = ExactMatrix::identity(n);
        AlgebroidModule { names, a_action, b_action: vec![ExactMatrix::zero(n, n); bundle.b_dim()] }
    }

    /// One-dimensional module: the unit acts as 1, everything else as 0.
    pub fn trivial(bundle: &VertexAlgebroid) -> Self {
        Self::unit_only(bundle, vec!["u".into()])
    }

    /// A module of the Lie algebra inside B, with N and `∂N` acting as 0.
    pub fn from_lie_module(bundle: &VertexAlgebroid, module: &WeightModule) -> Result<Self, VaError> {
        let lie = bundle.lie.as_ref().ok_or(VaError::MissingRootData)?;
        if module.action.len() != lie.g_in_b.len() {
            return Err(VaError::ModuleShape(format!(
                "{} action matrices for a Lie algebra of dimension {}",
                module.action.len(),
                lie.g_in_b.len()
            )));
        }
        let mut m = Self::unit_only(bundle, module.basis.clone());
        for (i, &j) in lie.g_in_b.iter().enumerate() {
            m.b_action[j] = module.action[i].clone();
        }
        Ok(m)
    }

    /// A acting on itself by multiplication, B by `b_0`.
    pub fn regular(bundle: &VertexAlgebroid) -> Self {
        let alg = bundle.a_algebra();
        AlgebroidModule {
            names: bundle.a_names.clone(),
            a_action: (0..bundle.a_dim()).map(|i| alg.left_matrix(&unit_svec(i))).collect(),
            b_action: (0..bundle.b_dim()).map(|j| bundle.action_matrix(&unit_svec(j))).collect(),
        }
    }

    /// A proper nonzero subspace stable under every action matrix, if one is found.
    pub fn invariant_submodule(&self) -> Option<Subspace> {
        let ops: Vec<ExactMatrix> = self.a_action.iter().chain(&self.b_action).cloned().collect();
        invariant_subspace(&ops, self.dim())
    }

    fn a_of(&self, x: &SVec<usize>) -> ExactMatrix {
        combine(&self.a_action, x, self.dim())
    }

    fn b_of(&self, x: &SVec<usize>) -> ExactMatrix {
        combine(&self.b_action, x, self.dim())
    }

    fn check_shape(&self, bundle: &VertexAlgebroid) -> Result<(), VaError> {
        let n = self.dim();
        let ok = self.a_action.len() == bundle.a_dim()
            && self.b_action.len() == bundle.b_dim()
            && self.a_action.iter().chain(&self.b_action).all(|m| m.rows() == n && m.cols() == n);
        if ok {
            Ok(())
        } else {
            Err(VaError::ModuleShape("action matrices do not match dim A, dim B and the module".into()))
        }
    }
}

fn combine(ms: &[ExactMatrix], x: &SVec<usize>, n: usize) -> ExactMatrix {
    let mut out = ExactMatrix::zero(n, n);
    for (i, c) in x {
        out = out.lin_comb(c, &ms[*i]);
    }
    out
}

fn mm(x: &ExactMatrix, y: &ExactMatrix) -> ExactMatrix {
    x.matmul(y).expect("square matrices of equal size")
}

/// Checks the Lie algebroid module axioms, including that `A∂A` and
/// `Leib(B)` act as zero.
pub fn lie_algebroid_module_check(bundle: &VertexAlgebroid, u: &AlgebroidModule) -> Result<AxiomReport, VaError> {
    u.check_shape(bundle)?;
    let (na, nb) = (bundle.a_dim(), bundle.b_dim());
    let (an, bn) = (&bundle.a_names, &bundle.b_names);
    let mut rep = AxiomReport::default();
    let ids = [
        "1·w = w",
        "(a*a')·w = a·(a'·w)",
        "(a·b)·w = a·(b·w)",
        "[b, b']·w = b·(b'·w) - b'·(b·w)",
        "b·(a·w) - a·(b·w) = (b_0 a)·w",
        "A∂A acts as zero",
        "Leib(B) acts as zero",
    ];
    for id in ids {
        rep.declare("module", id);
    }
    let id_n = ExactMatrix::identity(u.dim());
    rep.record("module", ids[0], u.a_action[bundle.unit] == id_n, Vec::new);
    for i in 0..na {
        for j in 0..na {
            let lhs = u.a_of(&bundle.mul(&unit_svec(i), &unit_svec(j)));
            let ok = lhs == mm(&u.a_action[i], &u.a_action[j]);
            rep.record("module", ids[1], ok, || vec![an[i].clone(), an[j].clone()]);
            let p = bundle.dot(&unit_svec(i), &bundle.d(&unit_svec(j)));
            rep.record("module", ids[5], u.b_of(&p).is_zero(), || vec![an[i].clone(), format!("∂{}", an[j])]);
        }
        for j in 0..nb {
            let lhs = u.b_of(&bundle.dot(&unit_svec(i), &unit_svec(j)));
            let ok = lhs == mm(&u.a_action[i], &u.b_action[j]);
            rep.record("module", ids[2], ok, || vec![an[i].clone(), bn[j].clone()]);
            let comm = mm(&u.b_action[j], &u.a_action[i]).sub(&mm(&u.a_action[i], &u.b_action[j]));
            let ok = comm == u.a_of(&bundle.act(&unit_svec(j), &unit_svec(i)));
            rep.record("module", ids[4], ok, || vec![bn[j].clone(), an[i].clone()]);
        }
    }
    for i in 0..nb {
        for j in 0..nb {
            let lhs = u.b_of(&bundle.bracket(&unit_svec(i), &unit_svec(j)));
            let ok = lhs == u.b_action[i].commutator(&u.b_action[j]);
            rep.record("module", ids[3], ok, || vec![bn[i].clone(), bn[j].clone()]);
            let mut sym = bundle.bracket(&unit_svec(i), &unit_svec(j));
            crate::linalg::axpy(&mut sym, &ExactScalar::one(), &bundle.bracket(&unit_svec(j), &unit_svec(i)));
            rep.record("module", ids[6], u.b_of(&sym).is_zero(), || vec![bn[i].clone(), bn[j].clone()]);
        }
    }
    Ok(rep)
}

/// Degree-0 part of `M(U)/U(L)W(U)` compared with U.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleFloorReport {
    pub module_dim: usize,
    pub floor_dim: usize,
    pub dims: Vec<usize>,
    pub stats: SaturationStats,
}

impl ModuleFloorReport {
    pub fn floor_preserved(&self) -> bool {
        self.floor_dim == self.module_dim
    }
}

/// Builds the induced module of U truncated at the configured degree,
/// quotients by the submodule generated by `v_n u` for `v` in `E`, and
/// reports the surviving degree-0 part.
pub fn induced_module_floor(
    bundle: &VertexAlgebroid,
    u: &AlgebroidModule,
    config: SaturationConfig,
) -> Result<ModuleFloorReport, VaError> {
    u.check_shape(bundle)?;
    let alphabet = Alphabet::new(bundle);
    let zero_modes = alphabet
        .letters
        .iter()
        .map(|l| match l.kind {
            LetterKind::Kernel | LetterKind::Algebra => u.a_of(&l.vector),
            LetterKind::Vector => u.b_of(&l.vector),
        })
        .collect();
    let floor = Floor::Module { names: u.names.clone(), zero_modes };
    let mut space = GradedSpace::new(Engine::new(alphabet, config.order, floor), config);

    let mut vacuum_side = VertexAlgebra::empty(bundle, config, QuotientKind::Free);
    let relations = vacuum_side.defining_relations()?;
    let vdeg = |s: &State| s.keys().map(|w: &Word| vacuum_side.space.engine.degree(w)).max().unwrap_or(0);
    let top = space.max_degree();
    let mut seeds = Vec::new();
    for v in &relations {
        let dv = vdeg(v);
        for f in 0..u.dim() as u32 {
            // v_n u has degree dv - n - 1
            for n in (dv - 1 - top)..=(dv - 1) {
                let s = space.y_product(v, n, &single(Word::floor(f)))?;
                if !s.is_empty() {
                    seeds.push(s);
                }
            }
        }
    }
    space.saturate(seeds)?;
    Ok(ModuleFloorReport { module_dim: u.dim(), floor_dim: space.dim(0), dims: space.dims(), stats: space.stats.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::construct_blambda;
    use crate::liealg::{chevalley_basis, highest_weight_module, CartanType};

    fn bundle() -> VertexAlgebroid {
        construct_blambda(CartanType::A(1), &[1]).unwrap()
    }

    fn fundamental(b: &VertexAlgebroid) -> AlgebroidModule {
        let (g, rd, _) = chevalley_basis(CartanType::A(1)).unwrap();
        AlgebroidModule::from_lie_module(b, &highest_weight_module(&g, &rd, &[1]).unwrap()).unwrap()
    }

    #[test]
    fn standard_modules_pass() {
        let b = bundle();
        for m in [AlgebroidModule::trivial(&b), fundamental(&b), AlgebroidModule::regular(&b)] {
            let rep = lie_algebroid_module_check(&b, &m).unwrap();
            assert!(rep.passes(), "{:?}", rep.failing().collect::<Vec<_>>());
        }
    }

    #[test]
    fn nontrivial_n_action_fails() {
        let b = bundle();
        let mut m = fundamental(&b);
        m.a_action[1] = ExactMatrix::from_ints(&[&[0, 1], &[0, 0]]);
        let rep = lie_algebroid_module_check(&b, &m).unwrap();
        assert!(!rep.passes());
        assert!(rep.failing().next().unwrap().witness.is_some());
    }

    #[test]
    fn regular_module_is_not_simple() {
        let b = bundle();
        let sub = AlgebroidModule::regular(&b).invariant_submodule().expect("N is invariant");
        assert_eq!(sub.dim(), 2);
        assert!(!sub.contains(&unit_svec(b.unit)));
        assert!(fundamental(&b).invariant_submodule().is_none());
    }

    #[test]
    fn floors_survive() {
        let b = bundle();
        let cfg = SaturationConfig { max_degree: 1, ..Default::default() };
        for (m, want) in [(AlgebroidModule::trivial(&b), 1), (fundamental(&b), 2), (AlgebroidModule::regular(&b), 3)] {
            let rep = induced_module_floor(&b, &m, cfg).unwrap();
            assert_eq!(rep.floor_dim, want);
            assert!(rep.floor_preserved());
        }
    }
}
