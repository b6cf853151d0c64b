use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LieError;

/// Simply-laced Cartan types supported by the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A(usize),
    D(usize),
    E(usize),
}

impl CartanType {
    pub fn new(letter: &str, rank: usize) -> Result<Self, LieError> {
        let t = match letter.trim().to_ascii_uppercase().as_str() {
            "A" => CartanType::A(rank),
            "D" => CartanType::D(rank),
            "E" => CartanType::E(rank),
            other => return Err(LieError::UnsupportedType(other.to_string())),
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(self) -> Result<(), LieError> {
        let ok = match self {
            CartanType::A(n) => n >= 1,
            CartanType::D(n) => n >= 4,
            CartanType::E(n) => (6..=8).contains(&n),
        };
        if ok {
            Ok(())
        } else {
            Err(LieError::InvalidRank(self.to_string()))
        }
    }

    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::D(n) | CartanType::E(n) => n,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            CartanType::A(_) => "A",
            CartanType::D(_) => "D",
            CartanType::E(_) => "E",
        }
    }

    /// Edges of the Dynkin diagram, 0-based, Bourbaki numbering.
    fn edges(self) -> Vec<(usize, usize)> {
        match self {
            CartanType::A(n) => (1..n).map(|i| (i - 1, i)).collect(),
            CartanType::D(n) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            CartanType::E(n) => {
                let mut e = vec![(0, 2), (1, 3), (2, 3)];
                e.extend((4..n).map(|i| (i - 1, i)));
                e
            }
        }
    }

    pub fn cartan_matrix(self) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in self.edges() {
            a[i][j] = -1;
            a[j][i] = -1;
        }
        a
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter(), self.rank())
    }
}

impl FromStr for CartanType {
    type Err = LieError;

    /// Parses labels such as `A1`, `D4`, `E8`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let split = s.find(|c: char| c.is_ascii_digit()).unwrap_or(s.len());
        let (letter, digits) = s.split_at(split);
        let letter = letter.trim_end_matches('_');
        if !matches!(letter.to_ascii_uppercase().as_str(), "A" | "D" | "E") {
            return Err(LieError::UnsupportedType(s.to_string()));
        }
        let rank = digits.parse().map_err(|_| LieError::InvalidRank(s.to_string()))?;
        CartanType::new(letter, rank)
    }
}

/// Positive roots as coefficient vectors over simple roots, ordered by
/// height and then lexicographically.
pub fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let pair = |a: &[i64], b: &[i64]| -> i64 {
        let mut s = 0;
        for i in 0..n {
            for j in 0..n {
                s += a[i] * cartan[i][j] * b[j];
            }
        }
        s
    };
    let mut layers: Vec<Vec<Vec<i64>>> = vec![(0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect()];
    loop {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in layers.last().unwrap() {
            for i in 0..n {
                let mut simple = vec![0; n];
                simple[i] = 1;
                if beta != &simple && pair(beta, &simple) == -1 {
                    let mut r = beta.clone();
                    r[i] += 1;
                    if !next.contains(&r) {
                        next.push(r);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        layers.push(next);
    }
    layers.into_iter().flatten().collect()
}

/// Pairings of a highest weight with the positive coroots. The criterion is
/// decided by direct computation; these are reported alongside it because
/// `λ(h_θ) = 1` and `λ(h_α) = 1` for every positive α disagree once the rank
/// exceeds one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightConditions {
    pub on_theta: i64,
    pub one_on_every_positive_coroot: bool,
    /// Positive roots (simple-root coordinates) where the pairing is not 1.
    pub roots_off_one: Vec<Vec<i64>>,
}

/// Root system data attached to a Chevalley basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootData {
    pub cartan_type: CartanType,
    pub rank: usize,
    pub cartan_matrix: Vec<Vec<i64>>,
    pub positive_roots: Vec<Vec<i64>>,
    /// Basis index of `e_alpha` for each positive root.
    pub e_index: Vec<usize>,
    /// Basis index of `f_alpha` for each positive root.
    pub f_index: Vec<usize>,
    /// Basis indices of the simple coroots `h_i`.
    pub cartan_indices: Vec<usize>,
    /// Coroot `h_alpha` for each positive root, in simple-coroot coordinates.
    pub coroots: Vec<Vec<i64>>,
    /// Index of the highest root in `positive_roots`.
    pub theta: usize,
}

impl RootData {
    pub fn height(&self, root: usize) -> i64 {
        self.positive_roots[root].iter().sum()
    }

    pub fn theta_root(&self) -> &[i64] {
        &self.positive_roots[self.theta]
    }

    /// Dual Coxeter number; for simply-laced types this is `ht(theta) + 1`.
    pub fn dual_coxeter(&self) -> i64 {
        self.height(self.theta) + 1
    }

    pub fn root_position(&self, root: &[i64]) -> Option<usize> {
        self.positive_roots.iter().position(|r| r == root)
    }

    /// Pairing of an integral weight (Dynkin labels) with the coroot of a
    /// positive root.
    pub fn weight_on_coroot(&self, weight: &[i64], root: usize) -> i64 {
        self.coroots[root].iter().zip(weight).map(|(c, w)| c * w).sum()
    }

    pub fn weight_conditions(&self, weight: &[i64]) -> WeightConditions {
        let roots_off_one: Vec<Vec<i64>> = (0..self.positive_roots.len())
            .filter(|&r| self.weight_on_coroot(weight, r) != 1)
            .map(|r| self.positive_roots[r].clone())
            .collect();
        WeightConditions {
            on_theta: self.weight_on_coroot(weight, self.theta),
            one_on_every_positive_coroot: roots_off_one.is_empty(),
            roots_off_one,
        }
    }

    /// Dynkin labels of the highest root.
    pub fn theta_weight(&self) -> Vec<i64> {
        let th = self.theta_root();
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.cartan_matrix[i][j] * th[j]).sum())
            .collect()
    }

    /// Fundamental weights `w_i` with `w_i(h_theta) = 1`.
    pub fn unit_level_fundamentals(&self) -> Vec<usize> {
        let th = self.theta_root();
        (0..self.rank).filter(|&i| th[i] == 1).collect()
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        let counts = [
            (CartanType::A(1), 1),
            (CartanType::A(2), 3),
            (CartanType::A(4), 10),
            (CartanType::D(4), 12),
            (CartanType::D(5), 20),
            (CartanType::E(6), 36),
            (CartanType::E(7), 63),
            (CartanType::E(8), 120),
        ];
        for (t, n) in counts {
            assert_eq!(positive_roots(&t.cartan_matrix()).len(), n, "{t}");
        }
    }

    #[test]
    fn parse_labels() {
        assert_eq!("A1".parse::<CartanType>().unwrap(), CartanType::A(1));
        assert_eq!("e8".parse::<CartanType>().unwrap(), CartanType::E(8));
        assert!(matches!("B2".parse::<CartanType>(), Err(LieError::UnsupportedType(_))));
        assert!(matches!("G2".parse::<CartanType>(), Err(LieError::UnsupportedType(_))));
        assert!(matches!("D3".parse::<CartanType>(), Err(LieError::InvalidRank(_))));
        assert!(matches!("E9".parse::<CartanType>(), Err(LieError::InvalidRank(_))));
    }

    #[test]
    fn e8_highest_root_marks() {
        let roots = positive_roots(&CartanType::E(8).cartan_matrix());
        assert_eq!(roots.last().unwrap(), &vec![2, 3, 4, 6, 5, 4, 3, 2]);
    }
}
