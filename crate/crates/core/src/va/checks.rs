use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::engine::{single, State, Word};
use super::{LetterKind, VaError, VertexAlgebra};
use crate::linalg::{axpy, scaled, unit_svec, Echelon, SVec};
use crate::scalar::{binomial, ExactScalar};

/// Tally for one sampled identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct FormulaStats {
    pub tested: usize,
    /// Samples whose two sides were not both zero.
    pub nonzero: usize,
    pub violations: usize,
    pub witness: Option<String>,
}

impl FormulaStats {
    pub(crate) fn record(&mut self, lhs: &State, rhs: &State, witness: impl FnOnce() -> String) {
        let ok = lhs == rhs;
        self.tested += 1;
        if !lhs.is_empty() || !rhs.is_empty() {
            self.nonzero += 1;
        }
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

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BorcherdsReport {
    pub seed: u64,
    pub samples: usize,
    pub commutator: FormulaStats,
    pub iterate: FormulaStats,
    pub skew_symmetry: FormulaStats,
    pub translation: FormulaStats,
}

impl BorcherdsReport {
    pub fn passes(&self) -> bool {
        [&self.commutator, &self.iterate, &self.skew_symmetry, &self.translation].iter().all(|f| f.passes())
    }
}

fn diff(x: &State, y: &State) -> State {
    let mut r = x.clone();
    axpy(&mut r, &-ExactScalar::one(), y);
    r
}

fn sign(k: i64) -> ExactScalar {
    if k.rem_euclid(2) == 0 {
        ExactScalar::one()
    } else {
        -ExactScalar::one()
    }
}

struct Sampler {
    bases: Vec<Vec<Word>>,
    rng: ChaCha8Rng,
    attempts: usize,
    budget: usize,
}

impl Sampler {
    fn word(&mut self, max_degree: i64) -> Word {
        self.attempts += 1;
        let top = max_degree.min(self.bases.len() as i64 - 1).max(0);
        loop {
            let d = self.rng.gen_range(0..=top) as usize;
            let basis = &self.bases[d];
            if !basis.is_empty() {
                return basis[self.rng.gen_range(0..basis.len())].clone();
            }
        }
    }

    fn exhausted(&self) -> bool {
        self.attempts > self.budget
    }

    fn level(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}

/// Samples quotient basis states until `samples` non-vacuous cases of each
/// identity are found (within an attempt budget) and checks the commutator formula, the
/// iterate formula, skew-symmetry and `[D, v_n] = -n v_(n-1)`.
pub fn borcherds_check(va: &mut VertexAlgebra, samples: usize, seed: u64) -> Result<BorcherdsReport, VaError> {
    let top = va.space.max_degree();
    let bases: Vec<Vec<Word>> = (0..=top as usize).map(|d| va.space.basis(d).to_vec()).collect();
    let budget = 400 * samples + 1000;
    let mut s = Sampler { bases, rng: ChaCha8Rng::seed_from_u64(seed), attempts: 0, budget };
    let engine = va.space.engine.fresh();
    let deg = |w: &Word| engine.degree(w);
    let name = |w: &Word| engine.render_word(w);
    let mut rep = BorcherdsReport {
        seed,
        samples,
        commutator: FormulaStats::default(),
        iterate: FormulaStats::default(),
        skew_symmetry: FormulaStats::default(),
        translation: FormulaStats::default(),
    };

    // [u_m, v_n] w = sum_i C(m, i) (u_i v)_(m+n-i) w
    s.attempts = 0;
    while rep.commutator.nonzero < samples && !s.exhausted() {
        let (u, v, w) = (s.word(top), s.word(top), s.word(top));
        let (du, dv, dw) = (deg(&u), deg(&v), deg(&w));
        let m = s.level(-2, 2);
        let n = s.level(-2, 2);
        let fin = du + dv + dw - m - n - 2;
        if du + dv - 1 > top || dv + dw - n - 1 > top || du + dw - m - 1 > top || fin > top || fin < 0 {
            continue;
        }
        let (su, sv, sw) = (single(u.clone()), single(v.clone()), single(w.clone()));
        let vw = va.y_product(&sv, n, &sw)?;
        let uw = va.y_product(&su, m, &sw)?;
        let lhs = diff(&va.y_product(&su, m, &vw)?, &va.y_product(&sv, n, &uw)?);
        let mut rhs = State::new();
        for i in 0..=(du + dv - 1).max(0) {
            let c = binomial(m, i as u32);
            if c.is_zero() {
                continue;
            }
            let uiv = va.y_product(&su, i, &sv)?;
            let t = va.y_product(&uiv, m + n - i, &sw)?;
            axpy(&mut rhs, &c, &t);
        }
        rep.commutator.record(&lhs, &rhs, || format!("u={}, v={}, w={}, m={m}, n={n}", name(&u), name(&v), name(&w)));
    }

    // (u_m v)_n w = sum_i (-1)^i C(m, i) (u_(m-i) v_(n+i) w - (-1)^m v_(m+n-i) u_i w)
    s.attempts = 0;
    while rep.iterate.nonzero < samples && !s.exhausted() {
        let (u, v, w) = (s.word(top), s.word(top), s.word(top));
        let (du, dv, dw) = (deg(&u), deg(&v), deg(&w));
        let m = s.level(-2, 2);
        let n = s.level(-2, 2);
        let fin = du + dv + dw - m - n - 2;
        if du + dv - m - 1 > top || du + dv - m - 1 < 0 || fin > top || fin < 0 || dv + dw - n - 1 > top || du + dw - 1 > top {
            continue;
        }
        let (su, sv, sw) = (single(u.clone()), single(v.clone()), single(w.clone()));
        let umv = va.y_product(&su, m, &sv)?;
        let lhs = va.y_product(&umv, n, &sw)?;
        let mut rhs = State::new();
        for i in 0..=(dv + dw - n - 1).max(du + dw).max(0) {
            let c = binomial(m, i as u32);
            if c.is_zero() {
                continue;
            }
            let c = &sign(i) * &c;
            let vw = va.y_product(&sv, n + i, &sw)?;
            let t1 = va.y_product(&su, m - i, &vw)?;
            let uw = va.y_product(&su, i, &sw)?;
            let t2 = va.y_product(&sv, m + n - i, &uw)?;
            axpy(&mut rhs, &c, &t1);
            axpy(&mut rhs, &-(&c * &sign(m)), &t2);
        }
        rep.iterate.record(&lhs, &rhs, || format!("u={}, v={}, w={}, m={m}, n={n}", name(&u), name(&v), name(&w)));
    }

    // u_n v = sum_j (-1)^(n+j+1) D^(j) (v_(n+j) u)
    s.attempts = 0;
    while rep.skew_symmetry.nonzero < samples && !s.exhausted() {
        let (u, v) = (s.word(top), s.word(top));
        let (du, dv) = (deg(&u), deg(&v));
        let n = s.level(-2, 3);
        let fin = du + dv - n - 1;
        if fin > top || fin < 0 {
            continue;
        }
        let (su, sv) = (single(u.clone()), single(v.clone()));
        let lhs = va.y_product(&su, n, &sv)?;
        let mut rhs = State::new();
        let mut j = 0;
        while du + dv - n - j > 0 {
            let vu = va.y_product(&sv, n + j, &su)?;
            let t = va.space.divided_derivative(&vu, j as u32)?;
            axpy(&mut rhs, &sign(n + j + 1), &t);
            j += 1;
        }
        rep.skew_symmetry.record(&lhs, &rhs, || format!("u={}, v={}, n={n}", name(&u), name(&v)));
    }

    // D(v_n w) - v_n D w = -n v_(n-1) w
    s.attempts = 0;
    while rep.translation.nonzero < samples && !s.exhausted() {
        let (v, w) = (s.word(top), s.word(top - 1));
        let (dv, dw) = (deg(&v), deg(&w));
        let n = s.level(-2, 3);
        let fin = dv + dw - n;
        if fin > top || fin < 0 || dw + 1 > top {
            continue;
        }
        let (sv, sw) = (single(v.clone()), single(w.clone()));
        let vw = va.y_product(&sv, n, &sw)?;
        let dw_state = va.derivative(&sw)?;
        let lhs = diff(&va.derivative(&vw)?, &va.y_product(&sv, n, &dw_state)?);
        let rhs = scaled(&va.y_product(&sv, n - 1, &sw)?, &ExactScalar::from_int(-n));
        rep.translation.record(&lhs, &rhs, || format!("v={}, w={}, n={n}", name(&v), name(&w)));
    }
    Ok(rep)
}

/// `C_2(V)` per degree and a complement spanned by the expected classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct C2Report {
    pub c2_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    /// Complement representatives per degree.
    pub complement: Vec<Vec<String>>,
    /// Degree-0 states, degree-1 generators and products of `b(-1)` span a
    /// complement.
    pub covered_by_classes: bool,
    pub derivatives_in_c2: bool,
}

impl C2Report {
    pub fn passes(&self) -> bool {
        self.covered_by_classes && self.derivatives_in_c2
    }
}

/// Computes `C_2(V) = span{u_(-2) v}` in each degree.
pub fn c2_report(va: &mut VertexAlgebra) -> Result<C2Report, VaError> {
    let top = va.space.max_degree() as usize;
    let mut spans: Vec<Echelon<Word>> = vec![Echelon::new(); top + 1];
    for du in 0..=top {
        for dv in 0..=top {
            // u_(-2) v has degree du + dv + 1
            let d = du + dv + 1;
            if d > top {
                continue;
            }
            let us = va.space.basis(du).to_vec();
            let vs = va.space.basis(dv).to_vec();
            for u in &us {
                for v in &vs {
                    let r = va.y_product(&single(u.clone()), -2, &single(v.clone()))?;
                    spans[d].insert(r);
                }
            }
        }
    }
    let mut derivatives_in_c2 = true;
    for d in 0..top {
        for w in va.space.basis(d).to_vec() {
            let dw = va.derivative(&single(w))?;
            derivatives_in_c2 &= spans[d + 1].contains(&dw);
        }
    }
    let mut complement = Vec::new();
    let mut quotient_dims = Vec::new();
    let mut covered = true;
    for (d, span) in spans.iter().enumerate() {
        let basis = va.space.basis(d).to_vec();
        let reps: Vec<Word> = basis.iter().filter(|w| !span.is_pivot(w)).cloned().collect();
        quotient_dims.push(basis.len() - span.len());
        complement.push(reps.iter().map(|w| va.space.engine.render_word(w)).collect());
        // classes: A in degree 0, otherwise products of b(-1) for b in B
        let mut classes = span.clone();
        for w in &basis {
            let is_class = d == 0
                || w.modes.iter().all(|m| {
                    let al = &va.space.engine.alphabet;
                    al.kind(m.letter) == LetterKind::Vector && m.level == -1
                        || al.kind(m.letter) == LetterKind::Algebra && m.level == -2
                });
            if is_class {
                classes.insert(single(w.clone()));
            }
        }
        covered &= classes.len() == basis.len();
    }
    Ok(C2Report {
        c2_dims: spans.iter().map(Echelon::len).collect(),
        quotient_dims,
        complement,
        covered_by_classes: covered,
        derivatives_in_c2,
    })
}

/// Checks `Y(e_theta, z)^2 = 0` through the modes of `e_theta(-1) e_theta`
/// expanded by the iterate formula, on every basis state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareZeroReport {
    pub per_degree: Vec<FormulaStats>,
}

impl SquareZeroReport {
    pub fn passes(&self) -> bool {
        self.per_degree.iter().all(FormulaStats::passes)
    }
}

impl VertexAlgebra {
    /// `sum_i e(-1-i) e(k+i) v + e(k-1-i) e(i) v = 0` for all basis `v`
    /// and all `k` keeping the result within the computed degrees.
    pub fn theta_square_zero(&mut self) -> Result<SquareZeroReport, VaError> {
        let top = self.space.max_degree();
        let theta = self.theta_modes()?;
        let mut per_degree = vec![FormulaStats::default(); top as usize + 1];
        for d in 0..=top {
            for v in self.space.basis(d as usize).to_vec() {
                // result degree d - k + 1 (e_theta has degree 1, the square degree 2)
                for k in (d + 1 - top)..=(d + 1) {
                    let mut acc = State::new();
                    let sv = single(v.clone());
                    for i in 0..=(d - k).max(0) {
                        let inner = self.space.combo_on_state(&theta(k + i), &sv)?;
                        let t = self.space.combo_on_state(&theta(-1 - i), &inner)?;
                        axpy(&mut acc, &ExactScalar::one(), &t);
                    }
                    for i in 0..=d {
                        let inner = self.space.combo_on_state(&theta(i), &sv)?;
                        let t = self.space.combo_on_state(&theta(k - 1 - i), &inner)?;
                        axpy(&mut acc, &ExactScalar::one(), &t);
                    }
                    let name = self.space.engine.render_word(&v);
                    per_degree[d as usize].record(&acc, &State::new(), || format!("v={name}, k={k}"));
                }
            }
        }
        Ok(SquareZeroReport { per_degree })
    }

    fn theta_modes(&self) -> Result<impl Fn(i64) -> SVec<super::Mode>, VaError> {
        let e = unit_svec(self.theta_index()?);
        let al = self.space.engine.alphabet.clone();
        Ok(move |n: i64| al.b_element_mode(&e, n as i32))
    }
}
