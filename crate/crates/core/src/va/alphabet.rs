use serde::{Deserialize, Serialize};

use crate::algebra::render;
use crate::algebroid::VertexAlgebroid;
use crate::linalg::{axpy, add_term, dense_to_svec, solve, svec_to_dense, unit_svec, ExactMatrix, SVec};
use crate::scalar::ExactScalar;

/// Generator mode `u(level)` in the loop algebra; `letter` indexes the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Mode {
    pub level: i32,
    pub letter: u16,
}

impl Mode {
    pub fn new(letter: u16, level: i32) -> Self {
        Mode { level, letter }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LetterKind {
    /// Element of `Ker ∂`; its modes vanish except at level -1.
    Kernel,
    /// Basis vector of A outside `Ker ∂`.
    Algebra,
    /// Basis vector of B outside `∂(A)`.
    Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Letter {
    pub kind: LetterKind,
    pub name: String,
    /// Coordinates in A (for kernel and algebra letters) or in B.
    pub vector: SVec<usize>,
}

/// Split of a vector of B into alphabet letters plus a `∂`-part.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct BSplit {
    vector: SVec<u16>,
    /// Coefficients of `∂ã` on algebra letters.
    derivative: SVec<u16>,
}

/// Generating alphabet of the loop Lie algebra of a vertex algebroid, with
/// bracket tables between letters.
#[derive(Debug, Clone)]
pub struct Alphabet {
    pub letters: Vec<Letter>,
    a_split: Vec<SVec<u16>>,
    b_split: Vec<BSplit>,
    /// `b_0 a` for (A-type letter, vector letter), as A-type letters.
    vec_on_alg: Vec<Vec<SVec<u16>>>,
    /// `b_0 b'` and `b_1 b'` for vector letters.
    vec_bracket: Vec<Vec<BSplit>>,
    vec_pairing: Vec<Vec<SVec<u16>>>,
    pub unit_letter: Option<u16>,
}

fn to_letters(v: &SVec<usize>, offset: usize) -> SVec<u16> {
    v.iter().map(|(k, c)| ((k + offset) as u16, c.clone())).collect()
}

impl Alphabet {
    pub fn new(v: &VertexAlgebroid) -> Self {
        let ker = v.ker_d();
        let image = v.image_d();
        let a_comp = ker.complement_indices();
        let b_comp = image.complement_indices();
        let mut letters = Vec::new();
        for kv in ker.basis_vectors() {
            let name = match kv.iter().collect::<Vec<_>>().as_slice() {
                [(k, c)] if c.is_one() => v.a_names[**k].clone(),
                _ => format!("({})", render(&kv, &v.a_names)),
            };
            letters.push(Letter { kind: LetterKind::Kernel, name, vector: kv });
        }
        let nk = letters.len();
        for &i in &a_comp {
            letters.push(Letter { kind: LetterKind::Algebra, name: v.a_names[i].clone(), vector: unit_svec(i) });
        }
        let na_letters = letters.len();
        for &j in &b_comp {
            letters.push(Letter { kind: LetterKind::Vector, name: v.b_names[j].clone(), vector: unit_svec(j) });
        }

        // A = Ker ∂ + span(a_comp)
        let a_pos: Vec<Option<usize>> = {
            let mut p = vec![None; v.a_dim()];
            for (k, &i) in a_comp.iter().enumerate() {
                p[i] = Some(k);
            }
            p
        };
        let split_a = |x: &SVec<usize>| -> SVec<u16> {
            let rem = ker.reduce(x);
            let mut kpart = x.clone();
            axpy(&mut kpart, &-ExactScalar::one(), &rem);
            let mut out = SVec::new();
            if let Some(coords) = ker.coordinates(&kpart) {
                for (k, c) in coords.into_iter().enumerate() {
                    if !c.is_zero() {
                        out.insert(k as u16, c);
                    }
                }
            }
            for (i, c) in rem {
                out.insert((nk + a_pos[i].expect("remainder on complement")) as u16, c);
            }
            out
        };
        let a_split: Vec<SVec<u16>> = (0..v.a_dim()).map(|i| split_a(&unit_svec(i))).collect();

        // preimages under ∂ of the image basis, in complement coordinates
        let d_restricted = ExactMatrix::from_columns(v.b_dim(), &a_comp.iter().map(|&i| v.d_map.column(i)).collect::<Vec<_>>());
        let preimages: Vec<SVec<usize>> = image
            .basis_vectors()
            .iter()
            .map(|r| {
                let x = solve(&d_restricted, &svec_to_dense(r, v.b_dim()))
                    .expect("dimensions agree")
                    .expect("image vector has a preimage");
                dense_to_svec(&x)
            })
            .collect();
        let b_pos: Vec<Option<usize>> = {
            let mut p = vec![None; v.b_dim()];
            for (k, &j) in b_comp.iter().enumerate() {
                p[j] = Some(k);
            }
            p
        };
        let split_b = |x: &SVec<usize>| -> BSplit {
            let rem = image.reduce(x);
            let mut dpart = x.clone();
            axpy(&mut dpart, &-ExactScalar::one(), &rem);
            let mut derivative = SVec::new();
            if let Some(coords) = image.coordinates(&dpart) {
                for (c, pre) in coords.iter().zip(&preimages) {
                    if !c.is_zero() {
                        axpy(&mut derivative, c, &to_letters(pre, nk));
                    }
                }
            }
            let vector = rem
                .into_iter()
                .map(|(j, c)| ((na_letters + b_pos[j].expect("remainder on complement")) as u16, c))
                .collect();
            BSplit { vector, derivative }
        };
        let b_split: Vec<BSplit> = (0..v.b_dim()).map(|j| split_b(&unit_svec(j))).collect();

        let expand_a = |x: &SVec<usize>| {
            let mut out = SVec::new();
            for (i, c) in x {
                axpy(&mut out, c, &a_split[*i]);
            }
            out
        };
        let expand_b = |x: &SVec<usize>| {
            let mut out = BSplit::default();
            for (j, c) in x {
                axpy(&mut out.vector, c, &b_split[*j].vector);
                axpy(&mut out.derivative, c, &b_split[*j].derivative);
            }
            out
        };
        let n = letters.len();
        let mut vec_on_alg = vec![vec![SVec::new(); n]; n];
        let mut vec_bracket = vec![vec![BSplit::default(); n]; n];
        let mut vec_pairing = vec![vec![SVec::new(); n]; n];
        for (i, li) in letters.iter().enumerate() {
            for (j, lj) in letters.iter().enumerate() {
                match (li.kind, lj.kind) {
                    (LetterKind::Vector, LetterKind::Vector) => {
                        vec_bracket[i][j] = expand_b(&v.bracket(&li.vector, &lj.vector));
                        vec_pairing[i][j] = expand_a(&v.pair(&li.vector, &lj.vector));
                    }
                    (LetterKind::Vector, _) => {}
                    (_, LetterKind::Vector) => vec_on_alg[i][j] = expand_a(&v.act(&lj.vector, &li.vector)),
                    _ => {}
                }
            }
        }
        let unit_letter = a_split[v.unit].iter().next().and_then(|(l, c)| {
            (a_split[v.unit].len() == 1 && c.is_one() && letters[*l as usize].kind == LetterKind::Kernel).then_some(*l)
        });
        Alphabet { letters, a_split, b_split, vec_on_alg, vec_bracket, vec_pairing, unit_letter }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn kind(&self, letter: u16) -> LetterKind {
        self.letters[letter as usize].kind
    }

    pub fn is_valid(&self, m: Mode) -> bool {
        self.kind(m.letter) != LetterKind::Kernel || m.level == -1
    }

    /// Degree of a mode: `-n-1` for A-type letters, `-n` for vector letters.
    pub fn degree(&self, m: Mode) -> i64 {
        match self.kind(m.letter) {
            LetterKind::Vector => -(m.level as i64),
            _ => -(m.level as i64) - 1,
        }
    }

    fn a_modes(&self, x: &SVec<u16>, level: i32) -> SVec<Mode> {
        let mut out = SVec::new();
        for (l, c) in x {
            let m = Mode::new(*l, level);
            if self.is_valid(m) {
                add_term(&mut out, m, c.clone());
            }
        }
        out
    }

    fn b_modes(&self, x: &BSplit, level: i32) -> SVec<Mode> {
        let mut out = SVec::new();
        for (l, c) in &x.vector {
            add_term(&mut out, Mode::new(*l, level), c.clone());
        }
        // (∂ã)(n) = -n ã(n-1)
        if level != 0 {
            let f = ExactScalar::from_int(-(level as i64));
            for (l, c) in &x.derivative {
                add_term(&mut out, Mode::new(*l, level - 1), c * &f);
            }
        }
        out
    }

    /// Mode `x(level)` of an element of A, in normal form.
    pub fn a_element_mode(&self, x: &SVec<usize>, level: i32) -> SVec<Mode> {
        let mut letters = SVec::new();
        for (i, c) in x {
            axpy(&mut letters, c, &self.a_split[*i]);
        }
        self.a_modes(&letters, level)
    }

    /// Mode `x(level)` of an element of B, in normal form.
    pub fn b_element_mode(&self, x: &SVec<usize>, level: i32) -> SVec<Mode> {
        let mut split = BSplit::default();
        for (j, c) in x {
            axpy(&mut split.vector, c, &self.b_split[*j].vector);
            axpy(&mut split.derivative, c, &self.b_split[*j].derivative);
        }
        self.b_modes(&split, level)
    }

    /// Bracket of two modes in the loop Lie algebra, in normal form.
    pub fn bracket_modes(&self, x: Mode, y: Mode) -> SVec<Mode> {
        if !self.is_valid(x) || !self.is_valid(y) {
            return SVec::new();
        }
        let (i, j) = (x.letter as usize, y.letter as usize);
        let level = x.level + y.level;
        match (self.kind(x.letter), self.kind(y.letter)) {
            (LetterKind::Vector, LetterKind::Vector) => {
                let mut out = self.b_modes(&self.vec_bracket[i][j], level);
                if x.level != 0 {
                    let m = ExactScalar::from_int(x.level as i64);
                    axpy(&mut out, &m, &self.a_modes(&self.vec_pairing[i][j], level - 1));
                }
                out
            }
            (LetterKind::Vector, _) => self.a_modes(&self.vec_on_alg[j][i], level),
            (_, LetterKind::Vector) => {
                let r = self.a_modes(&self.vec_on_alg[i][j], level);
                r.into_iter().map(|(m, c)| (m, -c)).collect()
            }
            _ => SVec::new(),
        }
    }

    /// Bilinear extension of [`Alphabet::bracket_modes`].
    pub fn bracket_combos(&self, x: &SVec<Mode>, y: &SVec<Mode>) -> SVec<Mode> {
        let mut out = SVec::new();
        for (a, ca) in x {
            for (b, cb) in y {
                axpy(&mut out, &(ca * cb), &self.bracket_modes(*a, *b));
            }
        }
        out
    }

    pub fn render_mode(&self, m: Mode) -> String {
        format!("{}({})", self.letters[m.letter as usize].name, m.level)
    }

    /// Letters of B outside `∂(A)` and their indices in B.
    pub fn vector_letters(&self) -> impl Iterator<Item = (u16, &Letter)> {
        self.letters.iter().enumerate().filter(|(_, l)| l.kind == LetterKind::Vector).map(|(i, l)| (i as u16, l))
    }

    /// Letter index of the given basis vector of B, if it is a letter.
    pub fn letter_of_b(&self, j: usize) -> Option<u16> {
        let s = &self.b_split[j];
        match (s.vector.iter().collect::<Vec<_>>().as_slice(), s.derivative.is_empty()) {
            ([(l, c)], true) if c.is_one() => Some(**l),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::construct_blambda;
    use crate::liealg::CartanType;

    fn a1() -> Alphabet {
        Alphabet::new(&construct_blambda(CartanType::A(1), &[1]).unwrap())
    }

    #[test]
    fn alphabet_of_a1_bundle() {
        let al = a1();
        let names: Vec<_> = al.letters.iter().map(|l| l.name.as_str()).collect();
        assert_eq!(names, ["1̂", "a0", "a1", "e", "f", "h"]);
        assert_eq!(al.unit_letter, Some(0));
    }

    #[test]
    fn e_one_f_minus_one() {
        let al = a1();
        let r = al.bracket_modes(Mode::new(3, 1), Mode::new(4, -1));
        let want: SVec<Mode> =
            [(Mode::new(5, 0), ExactScalar::one()), (Mode::new(0, -1), ExactScalar::one())].into_iter().collect();
        assert_eq!(r, want);
    }

    #[test]
    fn derivative_modes_normalize() {
        let al = a1();
        // ∂a0 is B basis index 3
        let zero = al.b_element_mode(&unit_svec(3), 0);
        assert!(zero.is_empty());
        let m = al.b_element_mode(&unit_svec(3), -2);
        assert_eq!(m, [(Mode::new(1, -3), ExactScalar::from_int(2))].into_iter().collect());
    }

    #[test]
    fn kernel_modes_vanish_off_minus_one() {
        let al = a1();
        assert!(al.a_element_mode(&unit_svec(0), 0).is_empty());
        assert_eq!(al.a_element_mode(&unit_svec(0), -1).len(), 1);
    }

    #[test]
    fn antisymmetry_and_jacobi_small_levels() {
        let al = a1();
        let modes: Vec<Mode> = (0..al.len() as u16)
            .flat_map(|l| (-3..=3).map(move |n| Mode::new(l, n)))
            .filter(|m| al.is_valid(*m))
            .collect();
        let one = |m: Mode| -> SVec<Mode> { [(m, ExactScalar::one())].into_iter().collect() };
        for &x in &modes {
            for &y in &modes {
                let mut s = al.bracket_modes(x, y);
                axpy(&mut s, &ExactScalar::one(), &al.bracket_modes(y, x));
                assert!(s.is_empty(), "{x:?} {y:?}");
            }
        }
        for &x in modes.iter().step_by(3) {
            for &y in &modes {
                for &z in modes.iter().step_by(2) {
                    let lhs = al.bracket_combos(&one(x), &al.bracket_modes(y, z));
                    let mut rhs = al.bracket_combos(&al.bracket_modes(x, y), &one(z));
                    axpy(&mut rhs, &ExactScalar::one(), &al.bracket_combos(&one(y), &al.bracket_modes(x, z)));
                    assert_eq!(lhs, rhs, "{x:?} {y:?} {z:?}");
                }
            }
        }
    }
}
