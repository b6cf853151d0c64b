mod alphabet;
mod checks;
mod engine;
mod module;
mod space;

use serde::{Deserialize, Serialize};

use crate::algebroid::VertexAlgebroid;
use crate::linalg::{axpy, unit_svec, SVec};
use crate::scalar::ExactScalar;

pub use alphabet::{Alphabet, Letter, LetterKind, Mode};
pub use checks::{borcherds_check, c2_report, BorcherdsReport, C2Report, FormulaStats, SquareZeroReport};
pub use engine::{single, Engine, Floor, PbwOrder, State, Word};
pub use module::{induced_module_floor, lie_algebroid_module_check, AlgebroidModule, ModuleFloorReport};
pub use space::{GradedSpace, SaturationConfig, SaturationStats, Schedule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VaError {
    #[error("result has degree {degree}, above the computed maximum {max}")]
    DegreeOverflow { degree: i64, max: i64 },
    #[error("word {word} exceeds the word cap {cap}")]
    WordCapExceeded { word: String, cap: usize },
    #[error("saturation did not stabilize within {rounds} rounds (dimensions {dims:?})")]
    SaturationBudgetExceeded { rounds: usize, dims: Vec<usize> },
    #[error("the ideal meets degree {degree}: dimension {found} instead of {expected}")]
    IdealMeetsLowDegree { degree: usize, expected: usize, found: usize },
    #[error("the bundle carries no root data")]
    MissingRootData,
    #[error("module data does not match the bundle: {0}")]
    ModuleShape(String),
}

/// Element of `A + B` whose modes act on a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    A(SVec<usize>),
    B(SVec<usize>),
}

/// Which quotient of the vacuum module a [`VertexAlgebra`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientKind {
    /// `V_L`, no relations.
    Free,
    /// `V_B = V_L / I_B`.
    Enveloping,
    /// `V_B` modulo the ideal generated by `e_theta(-1) e_theta(-1) 1`.
    Simple,
}

/// A truncated graded model of a vertex algebra attached to a bundle.
#[derive(Debug, Clone)]
pub struct VertexAlgebra {
    pub bundle: VertexAlgebroid,
    pub kind: QuotientKind,
    pub space: GradedSpace,
}

/// One family of identities checked on the low-degree part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityTally {
    pub identity: String,
    pub checked: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

impl IdentityTally {
    fn new(identity: &str) -> Self {
        IdentityTally { identity: identity.into(), checked: 0, violations: 0, witness: None }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

/// Degree 0 and 1 of the quotient compared with A and B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowDegreeReport {
    pub dims: Vec<usize>,
    pub word_counts: Vec<usize>,
    pub a_dim: usize,
    pub b_dim: usize,
    pub identities: Vec<IdentityTally>,
    pub stats: SaturationStats,
}

impl LowDegreeReport {
    pub fn passes(&self) -> bool {
        self.dims.first() == Some(&self.a_dim)
            && self.dims.get(1).is_none_or(|d| *d == self.b_dim)
            && self.identities.iter().all(IdentityTally::passes)
    }
}

fn sub(x: &State, y: &State) -> State {
    let mut r = x.clone();
    axpy(&mut r, &-ExactScalar::one(), y);
    r
}

impl VertexAlgebra {
    pub(crate) fn empty(bundle: &VertexAlgebroid, config: SaturationConfig, kind: QuotientKind) -> Self {
        let engine = Engine::new(Alphabet::new(bundle), config.order, Floor::Vacuum);
        VertexAlgebra { bundle: bundle.clone(), kind, space: GradedSpace::new(engine, config) }
    }

    /// `V_L` truncated at the configured degree and word cap.
    pub fn free(bundle: &VertexAlgebroid, config: SaturationConfig) -> Result<Self, VaError> {
        let mut va = Self::empty(bundle, config, QuotientKind::Free);
        va.space.saturate(Vec::new())?;
        Ok(va)
    }

    /// `V_B`.
    pub fn enveloping(bundle: &VertexAlgebroid, config: SaturationConfig) -> Result<Self, VaError> {
        let mut va = Self::empty(bundle, config, QuotientKind::Enveloping);
        let seeds = va.defining_relations()?;
        let seeds = va.with_derivatives(seeds)?;
        va.space.saturate(seeds)?;
        Ok(va)
    }

    /// `V_B` modulo the ideal generated by `e_theta(-1) e_theta(-1) 1`;
    /// fails if that ideal meets degree 0 or 1.
    pub fn simple(bundle: &VertexAlgebroid, config: SaturationConfig) -> Result<Self, VaError> {
        let mut va = Self::empty(bundle, config, QuotientKind::Simple);
        let mut seeds = va.defining_relations()?;
        seeds.push(va.theta_square()?);
        let seeds = va.with_derivatives(seeds)?;
        va.space.saturate(seeds)?;
        let (a, b) = (bundle.a_dim(), bundle.b_dim());
        for (degree, expected) in [(0, a), (1, b)] {
            if degree <= config.max_degree as usize && va.space.dim(degree) != expected {
                return Err(VaError::IdealMeetsLowDegree { degree, expected, found: va.space.dim(degree) });
            }
        }
        Ok(va)
    }

    pub fn vacuum(&self) -> State {
        single(Word::floor(0))
    }

    pub fn modes_of(&self, x: &Generator, level: i32) -> SVec<Mode> {
        let al = &self.space.engine.alphabet;
        match x {
            Generator::A(v) => al.a_element_mode(v, level),
            Generator::B(v) => al.b_element_mode(v, level),
        }
    }

    /// `x(n) s` for `x` in `A + B`.
    pub fn mode_action(&mut self, x: &Generator, n: i32, s: &State) -> Result<State, VaError> {
        let modes = self.modes_of(x, n);
        self.space.combo_on_state(&modes, s)
    }

    /// The state `x(-1) 1`.
    pub fn state_of(&mut self, x: &Generator) -> Result<State, VaError> {
        let vac = self.vacuum();
        self.mode_action(x, -1, &vac)
    }

    pub fn y_product(&mut self, u: &State, n: i64, v: &State) -> Result<State, VaError> {
        self.space.y_product(u, n, v)
    }

    pub fn derivative(&mut self, s: &State) -> Result<State, VaError> {
        self.space.derivative(s)
    }

    fn raw_state(&mut self, modes: &[SVec<Mode>]) -> State {
        let mut cur = self.vacuum();
        for m in modes.iter().rev() {
            cur = self.space.engine.apply_combo(m, &cur);
        }
        cur
    }

    /// Spanning set of `E`: unit, product and module relations.
    pub(crate) fn defining_relations(&mut self) -> Result<Vec<State>, VaError> {
        let (na, nb) = (self.bundle.a_dim(), self.bundle.b_dim());
        let am = |va: &Self, i: usize| va.modes_of(&Generator::A(unit_svec(i)), -1);
        let mut out = Vec::new();
        let unit = am(self, self.bundle.unit);
        out.push(sub(&self.raw_state(&[unit]), &self.vacuum()));
        for i in 0..na {
            for j in i..na {
                let lhs = self.raw_state(&[am(self, i), am(self, j)]);
                let prod = self.bundle.mul(&unit_svec(i), &unit_svec(j));
                let rhs = self.raw_state(&[self.modes_of(&Generator::A(prod), -1)]);
                out.push(sub(&lhs, &rhs));
            }
        }
        if self.space.max_degree() >= 1 {
            for i in 0..na {
                for j in 0..nb {
                    let bj = self.modes_of(&Generator::B(unit_svec(j)), -1);
                    let lhs = self.raw_state(&[am(self, i), bj]);
                    let prod = self.bundle.dot(&unit_svec(i), &unit_svec(j));
                    let rhs = self.raw_state(&[self.modes_of(&Generator::B(prod), -1)]);
                    out.push(sub(&lhs, &rhs));
                }
            }
        }
        Ok(out)
    }

    pub(crate) fn theta_index(&self) -> Result<usize, VaError> {
        let lie = self.bundle.lie.as_ref().ok_or(VaError::MissingRootData)?;
        let rd = lie.root_data.as_ref().ok_or(VaError::MissingRootData)?;
        Ok(lie.g_in_b[rd.e_index[rd.theta]])
    }

    /// `e_theta(-1) e_theta(-1) 1`.
    pub fn theta_square(&mut self) -> Result<State, VaError> {
        let e = self.modes_of(&Generator::B(unit_svec(self.theta_index()?)), -1);
        Ok(self.raw_state(&[e.clone(), e]))
    }

    fn with_derivatives(&mut self, seeds: Vec<State>) -> Result<Vec<State>, VaError> {
        let top = self.space.max_degree();
        let mut out = Vec::new();
        for s in seeds {
            let mut cur = s;
            loop {
                let d = self.space.state_degree(&cur);
                out.push(cur.clone());
                match d {
                    Some(d) if d < top => cur = self.space.derivative(&cur)?,
                    _ => break,
                }
            }
        }
        Ok(out)
    }

    /// Degree 0 and 1 against A and B, with the product identities.
    pub fn low_degree_report(&mut self) -> Result<LowDegreeReport, VaError> {
        let (na, nb) = (self.bundle.a_dim(), self.bundle.b_dim());
        let b = self.bundle.clone();
        let mut prod = IdentityTally::new("a(-1)a' = a*a'");
        let mut dot = IdentityTally::new("a(-1)b = a·b");
        let mut bra = IdentityTally::new("b(0)b' = [b, b']");
        let mut pair = IdentityTally::new("b(1)b' = <b, b'>");
        let mut act = IdentityTally::new("b(0)a = b_0 a");
        let a_st: Vec<State> = (0..na).map(|i| self.state_of(&Generator::A(unit_svec(i)))).collect::<Result<_, _>>()?;
        for i in 0..na {
            for j in 0..na {
                let lhs = self.mode_action(&Generator::A(unit_svec(i)), -1, &a_st[j])?;
                let rhs = self.state_of(&Generator::A(b.mul(&unit_svec(i), &unit_svec(j))))?;
                prod.record(lhs == rhs, || format!("({}, {})", b.a_names[i], b.a_names[j]));
            }
        }
        if self.space.max_degree() >= 1 {
            let b_st: Vec<State> =
                (0..nb).map(|j| self.state_of(&Generator::B(unit_svec(j)))).collect::<Result<_, _>>()?;
            for i in 0..na {
                for j in 0..nb {
                    let lhs = self.mode_action(&Generator::A(unit_svec(i)), -1, &b_st[j])?;
                    let rhs = self.state_of(&Generator::B(b.dot(&unit_svec(i), &unit_svec(j))))?;
                    dot.record(lhs == rhs, || format!("({}, {})", b.a_names[i], b.b_names[j]));
                }
            }
            for i in 0..nb {
                let bi = Generator::B(unit_svec(i));
                for j in 0..nb {
                    let lhs = self.mode_action(&bi, 0, &b_st[j])?;
                    let rhs = self.state_of(&Generator::B(b.bracket(&unit_svec(i), &unit_svec(j))))?;
                    bra.record(lhs == rhs, || format!("({}, {})", b.b_names[i], b.b_names[j]));
                    let lhs = self.mode_action(&bi, 1, &b_st[j])?;
                    let rhs = self.state_of(&Generator::A(b.pair(&unit_svec(i), &unit_svec(j))))?;
                    pair.record(lhs == rhs, || format!("({}, {})", b.b_names[i], b.b_names[j]));
                }
                for j in 0..na {
                    let lhs = self.mode_action(&bi, 0, &a_st[j])?;
                    let rhs = self.state_of(&Generator::A(b.act(&unit_svec(i), &unit_svec(j))))?;
                    act.record(lhs == rhs, || format!("({}, {})", b.b_names[i], b.a_names[j]));
                }
            }
        }
        Ok(LowDegreeReport {
            dims: self.space.dims(),
            word_counts: self.space.word_counts(),
            a_dim: na,
            b_dim: nb,
            identities: vec![prod, dot, bra, pair, act],
            stats: self.space.stats.clone(),
        })
    }

    /// Quotient basis of the given degree, rendered.
    pub fn basis_names(&self, degree: usize) -> Vec<String> {
        self.space.basis(degree).iter().map(|w| self.space.engine.render_word(w)).collect()
    }

    pub fn render(&self, s: &State) -> String {
        self.space.render(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::construct_blambda;
    use crate::liealg::CartanType;

    fn config(max_degree: u32) -> SaturationConfig {
        SaturationConfig { max_degree, ..Default::default() }
    }

    #[test]
    fn enveloping_low_degrees_for_a1() {
        let b = construct_blambda(CartanType::A(1), &[1]).unwrap();
        let mut va = VertexAlgebra::enveloping(&b, config(1)).unwrap();
        let rep = va.low_degree_report().unwrap();
        assert_eq!(&rep.dims[..2], &[3, 5]);
        assert!(rep.passes(), "{rep:?}");
    }

    #[test]
    fn free_module_has_no_relations() {
        let b = construct_blambda(CartanType::A(1), &[1]).unwrap();
        let va = VertexAlgebra::free(&b, SaturationConfig { max_degree: 1, word_cap: 3, ..Default::default() }).unwrap();
        assert_eq!(va.space.dims(), va.space.word_counts());
    }
}
