mod analysis;
mod checks;
mod construct;
mod tca;

use serde::{Deserialize, Serialize};

use crate::algebra::{render, AlgebraPresentation, Bilinear};
use crate::leibniz::LeibnizAlgebra;
use crate::liealg::{coroot_element, InvariantForm, LieAlgebra, LieError, RootData, WeightConditions, WeightModule};
use crate::linalg::{kernel, unit_svec, ExactMatrix, SVec, Subspace};

pub use analysis::{
    analyze_sl2_embedding, analyze_sl2_triple, check_hom, ker_partial_report, module_isomorphism_map, HomReport,
    KerReport, Sl2EmbeddingReport, TableLine,
};
pub use checks::{check_vertex_algebroid, criterion_check, CriterionReport, CriterionWitness, VertexAlgebroidReport};
pub use construct::{construct_bg, construct_blambda, trivial_module_input, BgInput};
pub use tca::{check_tca, TruncatedConformalAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebroidError {
    #[error("{g} does not act as a derivation on ({a}, {b})")]
    NotDerivation { g: String, a: String, b: String },
    #[error("the map to the derivative space is not injective on N")]
    DMapNotInjectiveOnN,
    #[error("N * N is nonzero at ({0}, {1})")]
    NSquareNonzero(String, String),
    #[error("the derivative of the unit is nonzero")]
    UnitNotKilled,
    #[error("N is not invariant under the acting elements")]
    NNotInvariant,
    #[error("elements do not form an sl2-triple: {0}")]
    NotSl2Triple(String),
    #[error("{0}·{1} does not lie in the image of the derivative")]
    NBNotInPartialA(String, String),
    #[error("map does not send A into A' and B into B'")]
    ImageNotContained,
    #[error("idempotents are only enumerated for a unit plus a square-zero ideal")]
    IdempotentEnumerationUnsupported,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// How the Lie algebra sits inside a constructed bundle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LieEmbedding {
    pub g: LieAlgebra,
    pub root_data: Option<RootData>,
    pub form: InvariantForm,
    /// Index in B of each basis element of the Lie algebra.
    pub g_in_b: Vec<usize>,
    /// Index in B of the derivative of each basis element of N.
    pub dn_in_b: Vec<usize>,
    /// Action of the Lie algebra on N.
    pub module: WeightModule,
    pub highest_weight: Option<Vec<i64>>,
}

/// Vertex algebroid candidate: every structure map stored as exact tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexAlgebroid {
    pub a_names: Vec<String>,
    pub b_names: Vec<String>,
    pub unit: usize,
    /// Basis indices of A spanning the complement N of the unit line.
    pub n_indices: Vec<usize>,
    /// `a * a'` on A.
    pub a_mul: Bilinear,
    /// `a · v` from A x B to B.
    pub dot: Bilinear,
    /// `[u, v] = u_0 v` on B.
    pub bracket: Bilinear,
    /// `<u, v> = u_1 v` from B x B to A.
    pub pairing: Bilinear,
    /// `∂` from A to B, as a `dim B x dim A` matrix.
    pub d_map: ExactMatrix,
    /// `u_0 a` from B x A to A.
    pub b_on_a: Bilinear,
    pub lie: Option<LieEmbedding>,
}

impl VertexAlgebroid {
    pub fn a_dim(&self) -> usize {
        self.a_names.len()
    }

    pub fn b_dim(&self) -> usize {
        self.b_names.len()
    }

    pub fn mul(&self, a: &SVec<usize>, b: &SVec<usize>) -> SVec<usize> {
        self.a_mul.apply(a, b)
    }

    pub fn dot(&self, a: &SVec<usize>, v: &SVec<usize>) -> SVec<usize> {
        self.dot.apply(a, v)
    }

    pub fn bracket(&self, u: &SVec<usize>, v: &SVec<usize>) -> SVec<usize> {
        self.bracket.apply(u, v)
    }

    pub fn pair(&self, u: &SVec<usize>, v: &SVec<usize>) -> SVec<usize> {
        self.pairing.apply(u, v)
    }

    pub fn d(&self, a: &SVec<usize>) -> SVec<usize> {
        self.d_map.mul_svec(a)
    }

    /// `u_0 a`, the derivation of A attached to `u`.
    pub fn act(&self, u: &SVec<usize>, a: &SVec<usize>) -> SVec<usize> {
        self.b_on_a.apply(u, a)
    }

    pub fn unit_vec(&self) -> SVec<usize> {
        unit_svec(self.unit)
    }

    pub fn a_algebra(&self) -> AlgebraPresentation {
        AlgebraPresentation::new(self.a_names.clone(), self.a_mul.clone())
    }

    pub fn leibniz(&self) -> LeibnizAlgebra {
        LeibnizAlgebra { algebra: AlgebraPresentation::new(self.b_names.clone(), self.bracket.clone()) }
    }

    pub fn ker_d(&self) -> Subspace {
        kernel(&self.d_map)
    }

    pub fn image_d(&self) -> Subspace {
        Subspace::from_vectors(self.b_dim(), (0..self.a_dim()).map(|i| self.d_map.column(i)).collect::<Vec<_>>())
    }

    pub fn render_a(&self, a: &SVec<usize>) -> String {
        render(a, &self.a_names)
    }

    pub fn render_b(&self, v: &SVec<usize>) -> String {
        render(v, &self.b_names)
    }

    /// Matrix of `a -> u_0 a` on A.
    pub fn action_matrix(&self, u: &SVec<usize>) -> ExactMatrix {
        self.b_on_a.left_mult_matrix(u)
    }

    pub fn weight_conditions(&self) -> Option<WeightConditions> {
        let lie = self.lie.as_ref()?;
        Some(lie.root_data.as_ref()?.weight_conditions(lie.highest_weight.as_ref()?))
    }

    /// `(e_θ, f_θ, h_θ)` as elements of B.
    pub fn theta_triple(&self) -> Option<[SVec<usize>; 3]> {
        let lie = self.lie.as_ref()?;
        let rd = lie.root_data.as_ref()?;
        let in_b = |x: SVec<usize>| x.into_iter().map(|(i, c)| (lie.g_in_b[i], c)).collect();
        Some([
            unit_svec(lie.g_in_b[rd.e_index[rd.theta]]),
            unit_svec(lie.g_in_b[rd.f_index[rd.theta]]),
            in_b(coroot_element(rd, rd.theta)),
        ])
    }

    pub fn to_tca(&self) -> TruncatedConformalAlgebra {
        TruncatedConformalAlgebra::from_algebroid(self)
    }
}

/// Outcome of one identity evaluated over all basis tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub family: String,
    pub identity: String,
    pub checked: usize,
    pub violations: usize,
    /// Basis tuple of the first violation.
    pub witness: Option<Vec<String>>,
}

/// Collection of identity checks.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct AxiomReport {
    pub checks: Vec<IdentityCheck>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn family_passes(&self, family: &str) -> bool {
        self.checks.iter().filter(|c| c.family == family).all(|c| c.violations == 0)
    }

    pub fn failing(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| c.violations > 0)
    }

    pub fn get(&self, identity: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.identity == identity)
    }

    /// Registers an identity so it appears in the report even when vacuous.
    pub(crate) fn declare(&mut self, family: &str, identity: &str) {
        if self.get(identity).is_none() {
            self.checks.push(IdentityCheck {
                family: family.into(),
                identity: identity.into(),
                checked: 0,
                violations: 0,
                witness: None,
            });
        }
    }

    pub(crate) fn record(&mut self, family: &str, identity: &str, ok: bool, witness: impl FnOnce() -> Vec<String>) {
        self.declare(family, identity);
        let entry = self.checks.iter_mut().find(|c| c.identity == identity).expect("declared");
        entry.checked += 1;
        if !ok {
            entry.violations += 1;
            if entry.witness.is_none() {
                entry.witness = Some(witness());
            }
        }
    }

    pub fn merge(&mut self, other: AxiomReport) {
        self.checks.extend(other.checks);
    }
}

/// Serializable `algebroid.json` document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebroidDocument {
    pub schema_version: u32,
    pub valid: bool,
    pub dims: (usize, usize),
    pub bundle: VertexAlgebroid,
    pub criterion: Option<CriterionReport>,
    #[serde(default)]
    pub weight_conditions: Option<WeightConditions>,
}

impl AlgebroidDocument {
    pub fn new(bundle: VertexAlgebroid, criterion: Option<CriterionReport>) -> Self {
        let valid = criterion.as_ref().is_none_or(|c| c.passes());
        let weight_conditions = bundle.weight_conditions();
        AlgebroidDocument {
            schema_version: crate::SCHEMA_VERSION,
            valid,
            dims: (bundle.a_dim(), bundle.b_dim()),
            bundle,
            criterion,
            weight_conditions,
        }
    }
}
