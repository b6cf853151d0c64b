use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{axpy, ExactMatrix, SVec};
use crate::scalar::ExactScalar;

/// Bilinear map between finite-dimensional spaces stored as structure
/// constants: `table[i * right + j]` is the image of the basis pair (i, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bilinear {
    left: usize,
    right: usize,
    out: usize,
    table: Vec<SVec<usize>>,
}

impl Bilinear {
    pub fn zero(left: usize, right: usize, out: usize) -> Self {
        Bilinear { left, right, out, table: vec![SVec::new(); left * right] }
    }

    pub fn left_dim(&self) -> usize {
        self.left
    }

    pub fn right_dim(&self) -> usize {
        self.right
    }

    pub fn out_dim(&self) -> usize {
        self.out
    }

    pub fn get(&self, i: usize, j: usize) -> &SVec<usize> {
        &self.table[i * self.right + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SVec<usize>) {
        debug_assert!(v.keys().all(|&k| k < self.out));
        let v = v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        self.table[i * self.right + j] = v;
    }

    pub fn apply(&self, x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
        let mut out = SVec::new();
        for (i, a) in x {
            for (j, b) in y {
                let t = self.get(*i, *j);
                if !t.is_empty() {
                    axpy(&mut out, &(a * b), t);
                }
            }
        }
        out
    }

    pub fn apply_basis_left(&self, i: usize, y: &SVec<usize>) -> SVec<usize> {
        let mut out = SVec::new();
        for (j, b) in y {
            axpy(&mut out, b, self.get(i, *j));
        }
        out
    }

    /// Matrix of `y -> x * y` for a fixed left argument `x`.
    pub fn left_mult_matrix(&self, x: &SVec<usize>) -> ExactMatrix {
        let cols: Vec<SVec<usize>> = (0..self.right)
            .map(|j| {
                let mut out = SVec::new();
                for (i, a) in x {
                    axpy(&mut out, a, self.get(*i, j));
                }
                out
            })
            .collect();
        ExactMatrix::from_columns(self.out, &cols)
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &SVec<usize>)> {
        self.table
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty())
            .map(move |(k, v)| (k / self.right, k % self.right, v))
    }
}

/// `(i, j, image)` with the image as sparse `(index, coefficient)` pairs.
type BilinearEntry = (usize, usize, Vec<(usize, ExactScalar)>);

#[derive(Serialize, Deserialize)]
struct BilinearRepr {
    left: usize,
    right: usize,
    out: usize,
    entries: Vec<BilinearEntry>,
}

impl Serialize for Bilinear {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        BilinearRepr {
            left: self.left,
            right: self.right,
            out: self.out,
            entries: self
                .nonzero_entries()
                .map(|(i, j, v)| (i, j, v.iter().map(|(k, x)| (*k, x.clone())).collect()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Bilinear {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = BilinearRepr::deserialize(d)?;
        let mut b = Bilinear::zero(r.left, r.right, r.out);
        for (i, j, v) in r.entries {
            if i >= r.left || j >= r.right || v.iter().any(|(k, _)| *k >= r.out) {
                return Err(D::Error::custom(format!("entry ({i},{j}) out of range")));
            }
            b.set(i, j, v.into_iter().collect());
        }
        Ok(b)
    }
}

/// Finite-dimensional algebra given by named basis and structure constants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraPresentation {
    pub basis: Vec<String>,
    pub product: Bilinear,
}

impl AlgebraPresentation {
    pub fn new(basis: Vec<String>, product: Bilinear) -> Self {
        assert_eq!(basis.len(), product.out_dim());
        AlgebraPresentation { basis, product }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn mul(&self, x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
        self.product.apply(x, y)
    }

    pub fn mul_basis(&self, i: usize, j: usize) -> &SVec<usize> {
        self.product.get(i, j)
    }

    /// Left multiplication operator `L_x`.
    pub fn left_matrix(&self, x: &SVec<usize>) -> ExactMatrix {
        self.product.left_mult_matrix(x)
    }

    /// Trace form `tr(L_x L_y)` on basis pairs.
    pub fn trace_form(&self) -> ExactMatrix {
        let n = self.dim();
        let mats: Vec<ExactMatrix> =
            (0..n).map(|i| self.left_matrix(&crate::linalg::unit_svec(i))).collect();
        let mut rows = vec![vec![ExactScalar::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let t = mats[i].matmul(&mats[j]).unwrap().trace();
                rows[i][j] = t.clone();
                rows[j][i] = t;
            }
        }
        ExactMatrix::from_dense(rows)
    }

    pub fn name_of(&self, i: usize) -> &str {
        &self.basis[i]
    }
}

/// Human-readable rendering of a vector against named basis elements.
pub fn render(v: &SVec<usize>, names: &[String]) -> String {
    if v.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in v {
        let name = &names[*k];
        if c.is_one() {
            parts.push(name.clone());
        } else if *c == -ExactScalar::one() {
            parts.push(format!("-{name}"));
        } else {
            parts.push(format!("{c}*{name}"));
        }
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit_svec;

    #[test]
    fn bilinear_round_trip_json() {
        let mut b = Bilinear::zero(2, 2, 2);
        b.set(0, 1, unit_svec(1));
        b.set(1, 0, crate::linalg::scaled(&unit_svec(1), &ExactScalar::new(-1, 2)));
        let s = serde_json::to_string(&b).unwrap();
        let back: Bilinear = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        assert!(s.contains("\"-1/2\""));
    }

    #[test]
    fn apply_is_bilinear() {
        let mut b = Bilinear::zero(2, 2, 1);
        b.set(0, 0, unit_svec(0));
        b.set(1, 1, unit_svec(0));
        let x: SVec<usize> = [(0, ExactScalar::from_int(2)), (1, ExactScalar::from_int(3))].into();
        let y: SVec<usize> = [(0, ExactScalar::from_int(5)), (1, ExactScalar::from_int(7))].into();
        assert_eq!(b.apply(&x, &y), [(0, ExactScalar::from_int(31))].into());
    }

    #[test]
    fn render_signs() {
        let names = vec!["e".to_string(), "f".to_string()];
        let v: SVec<usize> = [(0, ExactScalar::one()), (1, ExactScalar::from_int(-2))].into();
        assert_eq!(render(&v, &names), "e - 2*f");
    }
}
