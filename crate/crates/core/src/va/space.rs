use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::alphabet::Mode;
use super::engine::{single, Engine, State, Word};
use super::VaError;
use crate::linalg::{axpy, Echelon, SVec};
use crate::scalar::{binomial, ExactScalar};

/// Order in which relations are propagated during saturation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Schedule {
    /// Close under annihilation modes, then under creation modes, repeated.
    #[default]
    TwoPhase,
    /// Apply every mode to every new relation, one round at a time.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationConfig {
    pub max_degree: u32,
    pub word_cap: usize,
    pub max_rounds: usize,
    pub schedule: Schedule,
    pub order: super::PbwOrder,
}

impl Default for SaturationConfig {
    fn default() -> Self {
        SaturationConfig {
            max_degree: 3,
            word_cap: 6,
            max_rounds: 64,
            schedule: Schedule::TwoPhase,
            order: super::PbwOrder::LevelAscending,
        }
    }
}

/// How a saturation run ended.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturationStats {
    pub rounds: usize,
    pub generators: usize,
    /// Relations discarded because a word exceeded the word cap.
    pub truncated: usize,
    pub stabilized: bool,
    /// Quotient dimensions after each round.
    pub history: Vec<Vec<usize>>,
}

/// A graded quotient of a PBW module by a submodule, truncated at a maximal
/// degree and a maximal word length.
#[derive(Debug, Clone)]
pub struct GradedSpace {
    pub engine: Engine,
    pub config: SaturationConfig,
    words: Vec<Vec<Word>>,
    relations: Vec<Echelon<Word>>,
    normal_forms: Vec<HashMap<Word, State>>,
    standard: Vec<Vec<Word>>,
    standard_set: HashSet<Word>,
    saturated: bool,
    pub stats: SaturationStats,
    vertex_memo: HashMap<(Vec<Mode>, i64, Word), State>,
}

fn split_by_degree(engine: &Engine, s: &State) -> Vec<(i64, State)> {
    let mut parts: Vec<(i64, State)> = Vec::new();
    for (w, c) in s {
        let d = engine.degree(w);
        match parts.iter_mut().find(|(e, _)| *e == d) {
            Some((_, p)) => {
                p.insert(w.clone(), c.clone());
            }
            None => parts.push((d, single_with(w.clone(), c.clone()))),
        }
    }
    parts
}

fn single_with(w: Word, c: ExactScalar) -> State {
    [(w, c)].into_iter().collect()
}

impl GradedSpace {
    /// The free module with no relations yet.
    pub fn new(engine: Engine, config: SaturationConfig) -> Self {
        let top = config.max_degree as usize;
        let words: Vec<Vec<Word>> = (0..=top).map(|d| engine.enumerate_words(d as i64, config.word_cap)).collect();
        let standard = words.clone();
        let standard_set = words.iter().flatten().cloned().collect();
        GradedSpace {
            engine,
            config,
            relations: vec![Echelon::new(); top + 1],
            normal_forms: vec![HashMap::new(); top + 1],
            words,
            standard,
            standard_set,
            saturated: false,
            stats: SaturationStats { rounds: 0, generators: 0, truncated: 0, stabilized: true, history: Vec::new() },
            vertex_memo: HashMap::new(),
        }
    }

    pub fn max_degree(&self) -> i64 {
        self.config.max_degree as i64
    }

    pub fn floor_state(&self, f: u32) -> State {
        single(Word::floor(f))
    }

    /// Number of PBW monomials per degree within the word cap.
    pub fn word_counts(&self) -> Vec<usize> {
        self.words.iter().map(Vec::len).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.standard.iter().map(Vec::len).collect()
    }

    pub fn dim(&self, degree: usize) -> usize {
        self.standard.get(degree).map_or(0, Vec::len)
    }

    /// Quotient basis in the given degree.
    pub fn basis(&self, degree: usize) -> &[Word] {
        &self.standard[degree]
    }

    pub fn relation_rank(&self, degree: usize) -> usize {
        self.relations[degree].len()
    }

    fn check_degree(&self, d: i64) -> Result<(), VaError> {
        if d > self.max_degree() {
            Err(VaError::DegreeOverflow { degree: d, max: self.max_degree() })
        } else {
            Ok(())
        }
    }

    /// Normal form in the quotient basis.
    pub fn reduce(&self, s: &State) -> Result<State, VaError> {
        let mut out = State::new();
        for (w, c) in s {
            let d = self.engine.degree(w);
            if d < 0 {
                continue;
            }
            self.check_degree(d)?;
            if !self.saturated {
                axpy(&mut out, c, &single(w.clone()));
            } else if let Some(nf) = self.normal_forms[d as usize].get(w) {
                axpy(&mut out, c, nf);
            } else if self.standard_set.contains(w) {
                axpy(&mut out, c, &single(w.clone()));
            } else {
                return Err(VaError::WordCapExceeded { word: self.engine.render_word(w), cap: self.config.word_cap });
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, s: &State) -> Result<bool, VaError> {
        Ok(self.reduce(s)?.is_empty())
    }

    /// `x · s` in the quotient.
    pub fn mode_on_state(&mut self, x: Mode, s: &State) -> Result<State, VaError> {
        if s.is_empty() {
            return Ok(State::new());
        }
        let raw = self.engine.apply_state(x, s);
        self.reduce(&raw)
    }

    pub fn combo_on_state(&mut self, combo: &SVec<Mode>, s: &State) -> Result<State, VaError> {
        let raw = self.engine.apply_combo(combo, s);
        self.reduce(&raw)
    }

    /// Applies `modes[0] modes[1] ... ` to `s`, rightmost first.
    pub fn modes_on_state(&mut self, modes: &[Mode], s: &State) -> Result<State, VaError> {
        let mut cur = s.clone();
        for &m in modes.iter().rev() {
            cur = self.mode_on_state(m, &cur)?;
        }
        Ok(cur)
    }

    /// The translation operator `D`.
    pub fn derivative(&mut self, s: &State) -> Result<State, VaError> {
        let mut out = State::new();
        for (w, c) in s {
            let r = self.engine.derivative(w);
            axpy(&mut out, c, &r);
        }
        self.reduce(&out)
    }

    /// `D^j s / j!`.
    pub fn divided_derivative(&mut self, s: &State, j: u32) -> Result<State, VaError> {
        let mut cur = s.clone();
        for k in 1..=j {
            cur = self.derivative(&cur)?;
            cur = cur.into_iter().map(|(w, c)| (w, c * ExactScalar::new(1, k as i64))).collect();
        }
        Ok(cur)
    }

    pub fn state_degree(&self, s: &State) -> Option<i64> {
        s.keys().next().map(|w| self.engine.degree(w))
    }

    /// `u_n w` for a vacuum-module monomial `u`, via the iterate formula
    /// on `u = x(m) u'`.
    pub fn vertex_op_word(&mut self, u: &[Mode], n: i64, w: &Word) -> Result<State, VaError> {
        if u.is_empty() {
            return Ok(if n == -1 { self.reduce(&single(w.clone()))? } else { State::new() });
        }
        let key = (u.to_vec(), n, w.clone());
        if let Some(s) = self.vertex_memo.get(&key) {
            return Ok(s.clone());
        }
        let x = u[0];
        let rest = &u[1..];
        let m = x.level as i64;
        let dw = self.engine.degree(w);
        let db: i64 = rest.iter().map(|r| self.engine.degree_of_mode(*r)).sum();
        let mut out = State::new();
        // sum_i (-1)^i C(m, i) x(m-i) u'_{n+i} w
        let mut i: i64 = 0;
        while db + dw - (n + i) > 0 {
            let c = binomial(m, i as u32);
            if !c.is_zero() {
                let inner = self.vertex_op_word(rest, n + i, w)?;
                if !inner.is_empty() {
                    let t = self.mode_on_state(Mode::new(x.letter, (m - i) as i32), &inner)?;
                    let sign = if i % 2 == 0 { c } else { -c };
                    axpy(&mut out, &sign, &t);
                }
            }
            i += 1;
        }
        // - sum_i (-1)^(i+m) C(m, i) u'_{m+n-i} x(i) w
        let mut i: i64 = 0;
        loop {
            let xi = Mode::new(x.letter, i as i32);
            if self.engine.degree_of_mode(xi) + dw < 0 {
                break;
            }
            let c = binomial(m, i as u32);
            if !c.is_zero() {
                let t = self.mode_on_state(xi, &single(w.clone()))?;
                if !t.is_empty() {
                    let inner = self.vertex_op(rest, m + n - i, &t)?;
                    let sign = if (i + m) % 2 == 0 { -c } else { c };
                    axpy(&mut out, &sign, &inner);
                }
            }
            i += 1;
        }
        let out = self.reduce(&out)?;
        self.vertex_memo.insert(key, out.clone());
        Ok(out)
    }

    pub fn vertex_op(&mut self, u: &[Mode], n: i64, s: &State) -> Result<State, VaError> {
        let mut out = State::new();
        for (w, c) in s {
            let r = self.vertex_op_word(u, n, w)?;
            axpy(&mut out, c, &r);
        }
        Ok(out)
    }

    /// `u_n v` for a vacuum-module state `u`.
    pub fn y_product(&mut self, u: &State, n: i64, v: &State) -> Result<State, VaError> {
        let mut out = State::new();
        for (w, c) in u {
            let r = self.vertex_op(&w.modes, n, v)?;
            axpy(&mut out, c, &r);
        }
        Ok(out)
    }

    fn try_insert(&mut self, s: State, queue: &mut Vec<(usize, State)>) {
        for (d, part) in split_by_degree(&self.engine, &s) {
            if d < 0 || d > self.max_degree() {
                continue;
            }
            if part.keys().any(|w| w.len() > self.config.word_cap) {
                self.stats.truncated += 1;
                continue;
            }
            if self.relations[d as usize].insert(part.clone()) {
                queue.push((d as usize, part));
            }
        }
    }

    fn propagate(&mut self, d: usize, s: &State, creation: Option<bool>, queue: &mut Vec<(usize, State)>) {
        let d = d as i64;
        let modes = self.engine.modes_in_degree_range(-d, self.max_degree() - d);
        for x in modes {
            if creation.is_some_and(|c| c != self.engine.is_creation(x)) {
                continue;
            }
            let r = self.engine.apply_state(x, s);
            if !r.is_empty() {
                self.try_insert(r, queue);
            }
        }
    }

    fn current_dims(&self) -> Vec<usize> {
        self.words.iter().zip(&self.relations).map(|(w, r)| w.len() - r.len()).collect()
    }

    /// Closes the seeds under the loop algebra and fixes the quotient basis.
    pub fn saturate(&mut self, seeds: Vec<State>) -> Result<(), VaError> {
        let mut gens: Vec<(usize, State)> = Vec::new();
        for s in seeds {
            self.try_insert(s, &mut gens);
        }
        let mut rounds = 0;
        let mut stabilized = false;
        match self.config.schedule {
            Schedule::TwoPhase => {
                let (mut ann, mut cre) = (0, 0);
                while rounds < self.config.max_rounds {
                    rounds += 1;
                    while ann < gens.len() {
                        let (d, s) = gens[ann].clone();
                        self.propagate(d, &s, Some(false), &mut gens);
                        ann += 1;
                    }
                    while cre < gens.len() {
                        let (d, s) = gens[cre].clone();
                        self.propagate(d, &s, Some(true), &mut gens);
                        cre += 1;
                    }
                    self.stats.history.push(self.current_dims());
                    if ann == gens.len() {
                        stabilized = true;
                        break;
                    }
                }
            }
            Schedule::Sweep => {
                let mut start = 0;
                while rounds < self.config.max_rounds {
                    rounds += 1;
                    let end = gens.len();
                    for k in start..end {
                        let (d, s) = gens[k].clone();
                        self.propagate(d, &s, None, &mut gens);
                    }
                    start = end;
                    self.stats.history.push(self.current_dims());
                    if start == gens.len() {
                        stabilized = true;
                        break;
                    }
                }
            }
        }
        self.stats.rounds = rounds;
        self.stats.generators = gens.len();
        self.stats.stabilized = stabilized;
        if !stabilized {
            return Err(VaError::SaturationBudgetExceeded { rounds, dims: self.current_dims() });
        }
        self.finish();
        Ok(())
    }

    fn finish(&mut self) {
        self.normal_forms = self.relations.iter().map(Echelon::resolved).collect();
        self.standard = self
            .words
            .iter()
            .zip(&self.relations)
            .map(|(ws, r)| ws.iter().filter(|w| !r.is_pivot(w)).cloned().collect())
            .collect();
        self.standard_set = self.standard.iter().flatten().cloned().collect();
        self.saturated = true;
        self.vertex_memo.clear();
    }

    pub fn render(&self, s: &State) -> String {
        self.engine.render_state(s)
    }
}
