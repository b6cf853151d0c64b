use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, LetterKind, Mode};
use crate::linalg::{axpy, ExactMatrix, SVec};
use crate::scalar::ExactScalar;

/// Total order used to sort creation modes inside a PBW monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum PbwOrder {
    /// Most negative level first, ties by letter.
    #[default]
    LevelAscending,
    /// The reverse order.
    LevelDescending,
}

impl PbwOrder {
    fn key(self, m: Mode) -> (i32, i32) {
        match self {
            PbwOrder::LevelAscending => (m.level, m.letter as i32),
            PbwOrder::LevelDescending => (-m.level, -(m.letter as i32)),
        }
    }

    fn le(self, x: Mode, y: Mode) -> bool {
        self.key(x) <= self.key(y)
    }
}

/// PBW monomial `x_1 ... x_k` applied to a floor basis vector.
///
/// Ordered so that longer words come first: an echelon form then eliminates
/// long words and keeps short ones as quotient representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word {
    pub modes: Vec<Mode>,
    pub floor: u32,
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .modes
            .len()
            .cmp(&self.modes.len())
            .then_with(|| self.modes.cmp(&other.modes))
            .then_with(|| self.floor.cmp(&other.floor))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn floor(floor: u32) -> Self {
        Word { modes: Vec::new(), floor }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    fn tail(&self) -> Word {
        Word { modes: self.modes[1..].to_vec(), floor: self.floor }
    }

    fn prepend(&self, m: Mode) -> Word {
        let mut modes = Vec::with_capacity(self.modes.len() + 1);
        modes.push(m);
        modes.extend_from_slice(&self.modes);
        Word { modes, floor: self.floor }
    }
}

pub type State = SVec<Word>;

pub fn single(w: Word) -> State {
    [(w, ExactScalar::one())].into_iter().collect()
}

/// Bottom of the PBW filtration: the vacuum line or a module for the
/// degree-zero part of the loop algebra.
#[derive(Debug, Clone)]
pub enum Floor {
    Vacuum,
    /// Modes of degree zero act on the floor by these matrices (indexed by
    /// letter); modes of negative degree kill it.
    Module { names: Vec<String>, zero_modes: Vec<ExactMatrix> },
}

impl Floor {
    pub fn dim(&self) -> usize {
        match self {
            Floor::Vacuum => 1,
            Floor::Module { names, .. } => names.len(),
        }
    }
}

/// PBW straightening in `U(L)` acting on an induced module.
#[derive(Debug, Clone)]
pub struct Engine {
    pub alphabet: Alphabet,
    pub order: PbwOrder,
    pub floor: Floor,
    memo: HashMap<(Mode, Word), State>,
}

impl Engine {
    pub fn new(alphabet: Alphabet, order: PbwOrder, floor: Floor) -> Self {
        Engine { alphabet, order, floor, memo: HashMap::new() }
    }

    /// Same engine with an empty cache.
    pub fn fresh(&self) -> Self {
        Engine::new(self.alphabet.clone(), self.order, self.floor.clone())
    }

    pub fn degree_of_mode(&self, m: Mode) -> i64 {
        self.alphabet.degree(m)
    }

    pub fn degree(&self, w: &Word) -> i64 {
        w.modes.iter().map(|m| self.alphabet.degree(*m)).sum()
    }

    /// Modes that build PBW monomials rather than acting through them.
    pub fn is_creation(&self, m: Mode) -> bool {
        match self.floor {
            Floor::Vacuum => m.level < 0,
            Floor::Module { .. } => self.alphabet.degree(m) > 0,
        }
    }

    fn floor_action(&self, m: Mode, f: u32) -> State {
        match &self.floor {
            Floor::Vacuum => State::new(),
            Floor::Module { zero_modes, .. } => {
                if self.alphabet.degree(m) != 0 {
                    return State::new();
                }
                zero_modes[m.letter as usize]
                    .column(f as usize)
                    .into_iter()
                    .map(|(k, c)| (Word::floor(k as u32), c))
                    .collect()
            }
        }
    }

    /// `x · w` in normal form.
    pub fn apply(&mut self, x: Mode, w: &Word) -> State {
        if !self.alphabet.is_valid(x) {
            return State::new();
        }
        let key = (x, w.clone());
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let creation = self.is_creation(x);
        let result = match w.modes.first().copied() {
            None if creation => single(w.prepend(x)),
            None => self.floor_action(x, w.floor),
            Some(y) if creation && self.order.le(x, y) => single(w.prepend(x)),
            Some(y) => {
                // x y w' = y (x w') + [x, y] w'
                let rest = w.tail();
                let inner = self.apply(x, &rest);
                let mut out = self.apply_state(y, &inner);
                let br = self.alphabet.bracket_modes(x, y);
                axpy(&mut out, &ExactScalar::one(), &self.apply_combo(&br, &single(rest)));
                out
            }
        };
        self.memo.insert(key, result.clone());
        result
    }

    pub fn apply_state(&mut self, x: Mode, s: &State) -> State {
        let mut out = State::new();
        for (w, c) in s {
            let r = self.apply(x, w);
            axpy(&mut out, c, &r);
        }
        out
    }

    pub fn apply_combo(&mut self, combo: &SVec<Mode>, s: &State) -> State {
        let mut out = State::new();
        for (x, c) in combo {
            let r = self.apply_state(*x, s);
            axpy(&mut out, c, &r);
        }
        out
    }

    /// Creation modes with degree in `lo..=hi`.
    pub fn creation_modes(&self, lo: i64, hi: i64) -> Vec<Mode> {
        self.modes_in_degree_range(lo, hi).into_iter().filter(|m| self.is_creation(*m)).collect()
    }

    /// All valid modes with degree in `lo..=hi`.
    pub fn modes_in_degree_range(&self, lo: i64, hi: i64) -> Vec<Mode> {
        let mut out = Vec::new();
        for (l, letter) in self.alphabet.letters.iter().enumerate() {
            let l = l as u16;
            let levels: Vec<i32> = match letter.kind {
                LetterKind::Kernel => vec![-1],
                // degree -n-1
                LetterKind::Algebra => ((-hi - 1) as i32..=(-lo - 1) as i32).collect(),
                // degree -n
                LetterKind::Vector => ((-hi) as i32..=(-lo) as i32).collect(),
            };
            for n in levels {
                let m = Mode::new(l, n);
                let d = self.alphabet.degree(m);
                if d >= lo && d <= hi {
                    out.push(m);
                }
            }
        }
        out
    }

    /// PBW monomials of the given degree with at most `cap` modes.
    pub fn enumerate_words(&self, degree: i64, cap: usize) -> Vec<Word> {
        let mut modes = self.creation_modes(0, degree);
        modes.sort_by_key(|m| self.order.key(*m));
        let degs: Vec<i64> = modes.iter().map(|m| self.alphabet.degree(*m)).collect();
        let mut out = Vec::new();
        let mut stack = Vec::new();
        fn rec(
            start: usize,
            remaining: i64,
            cap: usize,
            modes: &[Mode],
            degs: &[i64],
            stack: &mut Vec<Mode>,
            out: &mut Vec<Vec<Mode>>,
        ) {
            if remaining == 0 {
                out.push(stack.clone());
            }
            if stack.len() == cap {
                return;
            }
            for i in start..modes.len() {
                if degs[i] <= remaining {
                    stack.push(modes[i]);
                    rec(i, remaining - degs[i], cap, modes, degs, stack, out);
                    stack.pop();
                }
            }
        }
        let mut seqs = Vec::new();
        rec(0, degree, cap, &modes, &degs, &mut stack, &mut seqs);
        for seq in seqs {
            for f in 0..self.floor.dim() as u32 {
                out.push(Word { modes: seq.clone(), floor: f });
            }
        }
        out
    }

    /// `D` as the derivation `[D, u(n)] = -n u(n-1)` killing the floor.
    pub fn derivative(&mut self, w: &Word) -> State {
        let mut out = State::new();
        for i in 0..w.modes.len() {
            let m = w.modes[i];
            if m.level == 0 || self.alphabet.kind(m.letter) == LetterKind::Kernel {
                continue;
            }
            let c = ExactScalar::from_int(-(m.level as i64));
            // rebuild left to right so that the result is straightened
            let mut s = single(Word { modes: w.modes[i + 1..].to_vec(), floor: w.floor });
            s = self.apply_state(Mode::new(m.letter, m.level - 1), &s);
            for j in (0..i).rev() {
                s = self.apply_state(w.modes[j], &s);
            }
            axpy(&mut out, &c, &s);
        }
        out
    }

    pub fn render_word(&self, w: &Word) -> String {
        let mut s: String = w.modes.iter().map(|m| self.alphabet.render_mode(*m)).collect::<Vec<_>>().join(" ");
        let base = match &self.floor {
            Floor::Vacuum => "1".to_string(),
            Floor::Module { names, .. } => names[w.floor as usize].clone(),
        };
        if !s.is_empty() {
            s.push(' ');
        }
        s + &base
    }

    pub fn render_state(&self, s: &State) -> String {
        if s.is_empty() {
            return "0".into();
        }
        s.iter()
            .map(|(w, c)| {
                let body = self.render_word(w);
                if c.is_one() {
                    body
                } else {
                    format!("({c})*{body}")
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::construct_blambda;
    use crate::liealg::CartanType;

    fn engine(order: PbwOrder) -> Engine {
        let v = construct_blambda(CartanType::A(1), &[1]).unwrap();
        Engine::new(Alphabet::new(&v), order, Floor::Vacuum)
    }

    #[test]
    fn annihilator_kills_vacuum_and_creation_sorts() {
        let mut e = engine(PbwOrder::LevelAscending);
        let vac = Word::floor(0);
        assert!(e.apply(Mode::new(3, 0), &vac).is_empty());
        let s = e.apply(Mode::new(3, -1), &vac);
        let s = e.apply_state(Mode::new(4, -2), &s);
        let (w, _) = s.iter().next().unwrap();
        assert_eq!(w.modes, vec![Mode::new(4, -2), Mode::new(3, -1)]);
    }

    #[test]
    fn e_one_on_f_minus_one_vacuum() {
        // e(1) f(-1) 1 = [e(1), f(-1)] 1 = h(0) 1 + 1̂(-1) 1 = 1̂(-1) 1
        let mut e = engine(PbwOrder::LevelAscending);
        let s = e.apply(Mode::new(4, -1), &Word::floor(0));
        let r = e.apply_state(Mode::new(3, 1), &s);
        assert_eq!(r, single(Word { modes: vec![Mode::new(0, -1)], floor: 0 }));
    }

    #[test]
    fn word_counts_match_between_orders() {
        let a = engine(PbwOrder::LevelAscending);
        let b = engine(PbwOrder::LevelDescending);
        for d in 0..3 {
            assert_eq!(a.enumerate_words(d, 4).len(), b.enumerate_words(d, 4).len());
        }
        // degree 0: monomials of length <= 2 in three degree-zero letters
        assert_eq!(a.enumerate_words(0, 2).len(), 1 + 3 + 6);
    }

    #[test]
    fn longer_words_sort_first() {
        let long = Word { modes: vec![Mode::new(1, -1), Mode::new(1, -1)], floor: 0 };
        let short = Word { modes: vec![Mode::new(0, -1)], floor: 0 };
        assert!(long < short);
    }
}
