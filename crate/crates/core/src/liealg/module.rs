use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{LieAlgebra, LieError, RootData};
use crate::linalg::{axpy, kernel, unit_svec, ExactMatrix, SVec};
use crate::scalar::{factorial, ExactScalar};

/// Finite-dimensional module of a Lie algebra given by one matrix per basis
/// element of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightModule {
    pub highest_weight: Vec<i64>,
    pub basis: Vec<String>,
    /// Dynkin labels of the weight of each basis vector.
    pub weights: Vec<Vec<i64>>,
    pub action: Vec<ExactMatrix>,
}

impl WeightModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Trivial module of the given dimension.
    pub fn trivial(g: &LieAlgebra, rank: usize, dim: usize) -> Self {
        WeightModule {
            highest_weight: vec![0; rank],
            basis: (0..dim).map(|i| format!("v{i}")).collect(),
            weights: vec![vec![0; rank]; dim],
            action: vec![ExactMatrix::zero(dim, dim); g.dim()],
        }
    }

    pub fn matrix_of(&self, x: &SVec<usize>) -> ExactMatrix {
        let n = self.dim();
        let mut m = ExactMatrix::zero(n, n);
        for (i, c) in x {
            m = m.lin_comb(c, &self.action[*i]);
        }
        m
    }

    pub fn act(&self, x: &SVec<usize>, v: &SVec<usize>) -> SVec<usize> {
        let mut out = SVec::new();
        for (i, c) in x {
            axpy(&mut out, c, &self.action[*i].mul_svec(v));
        }
        out
    }

    pub fn act_basis(&self, gi: usize, v: &SVec<usize>) -> SVec<usize> {
        self.action[gi].mul_svec(v)
    }

    /// Checks `rho([x,y]) = [rho(x), rho(y)]` on all basis pairs.
    pub fn verify(&self, g: &LieAlgebra) -> Result<(), LieError> {
        for x in 0..g.dim() {
            for y in x + 1..g.dim() {
                let lhs = self.matrix_of(g.bracket_basis(x, y));
                if lhs != self.action[x].commutator(&self.action[y]) {
                    return Err(LieError::NotRepresentation(x, y));
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &WeightModule) -> WeightModule {
        let (n, m) = (self.dim(), other.dim());
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| {
                let mut rows = a.sparse_rows();
                for row in b.sparse_rows() {
                    rows.push(row.into_iter().map(|(k, v)| (k + n, v)).collect());
                }
                ExactMatrix::from_sparse_rows(n + m, rows)
            })
            .collect();
        let mut basis = self.basis.clone();
        basis.extend(other.basis.iter().map(|b| format!("{b}'")));
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        WeightModule { highest_weight: self.highest_weight.clone(), basis, weights, action }
    }
}

/// Weyl dimension formula for a dominant integral weight.
pub fn weyl_dimension(rd: &RootData, lambda: &[i64]) -> ExactScalar {
    rd.positive_roots
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let num: i64 = rd.coroots[k].iter().zip(lambda).map(|(c, l)| c * (l + 1)).sum();
            ExactScalar::new(num, rd.height(k))
        })
        .product()
}

type Word = Vec<u8>;

/// Verma-module words `f_{w0} f_{w1} ... v` and their contravariant pairing.
struct VermaWords<'a> {
    cartan: &'a [Vec<i64>],
    lambda: &'a [i64],
    memo: HashMap<(Word, Word), ExactScalar>,
}

impl<'a> VermaWords<'a> {
    fn counts(&self, w: &[u8]) -> Vec<i64> {
        let mut c = vec![0; self.cartan.len()];
        for &i in w {
            c[i as usize] += 1;
        }
        c
    }

    fn weight(&self, w: &[u8]) -> Vec<i64> {
        let c = self.counts(w);
        (0..self.cartan.len())
            .map(|i| self.lambda[i] - (0..c.len()).map(|l| self.cartan[i][l] * c[l]).sum::<i64>())
            .collect()
    }

    /// `e_i` applied to a word, as a combination of shorter words.
    fn raise(&self, i: u8, w: &[u8]) -> Vec<(Word, ExactScalar)> {
        let mut out = Vec::new();
        for p in 0..w.len() {
            if w[p] != i {
                continue;
            }
            let tail: i64 = w[p + 1..].iter().map(|&l| self.cartan[i as usize][l as usize]).sum();
            let c = self.lambda[i as usize] - tail;
            if c != 0 {
                let mut nw = w[..p].to_vec();
                nw.extend_from_slice(&w[p + 1..]);
                out.push((nw, ExactScalar::from_int(c)));
            }
        }
        out
    }

    fn pairing(&mut self, a: &[u8], b: &[u8]) -> ExactScalar {
        if a.len() != b.len() {
            return ExactScalar::zero();
        }
        if a.is_empty() {
            return ExactScalar::one();
        }
        if self.counts(a) != self.counts(b) {
            return ExactScalar::zero();
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut total = ExactScalar::zero();
        for (w, c) in self.raise(a[0], b) {
            let p = self.pairing(&a[1..], &w);
            if !p.is_zero() {
                total += c * p;
            }
        }
        self.memo.insert(key, total.clone());
        total
    }
}

struct WeightSpace {
    members: Vec<usize>,
    gram_inverse: ExactMatrix,
}

fn gram(words: &mut VermaWords, list: &[&Word]) -> ExactMatrix {
    let rows = list
        .iter()
        .map(|a| list.iter().map(|b| words.pairing(a, b)).collect())
        .collect();
    ExactMatrix::from_dense(rows)
}

/// Finite irreducible module `L(lambda)` for a dominant integral weight.
pub fn highest_weight_module(
    g: &LieAlgebra,
    rd: &RootData,
    lambda: &[i64],
) -> Result<WeightModule, LieError> {
    if lambda.len() != rd.rank {
        return Err(LieError::WeightLength { expected: rd.rank, got: lambda.len() });
    }
    if lambda.iter().any(|&l| l < 0) {
        return Err(LieError::NotDominantIntegral(lambda.iter().map(|l| l.to_string()).collect()));
    }
    let module = if rd.rank > 1 && lambda == rd.theta_weight().as_slice() {
        adjoint_module(g, rd)
    } else {
        build_irreducible(g, rd, lambda)
    };
    module.verify(g)?;
    Ok(module)
}

fn adjoint_module(g: &LieAlgebra, rd: &RootData) -> WeightModule {
    let r = rd.rank;
    let root_labels = |root: &[i64]| -> Vec<i64> {
        (0..r).map(|i| (0..r).map(|j| rd.cartan_matrix[i][j] * root[j]).sum()).collect()
    };
    let mut weights = vec![vec![0; r]; g.dim()];
    for (k, root) in rd.positive_roots.iter().enumerate() {
        let w = root_labels(root);
        weights[rd.f_index[k]] = w.iter().map(|x| -x).collect();
        weights[rd.e_index[k]] = w;
    }
    WeightModule {
        highest_weight: rd.theta_weight(),
        basis: g.basis().to_vec(),
        weights,
        action: (0..g.dim()).map(|i| g.ad(&unit_svec(i))).collect(),
    }
}

fn build_irreducible(g: &LieAlgebra, rd: &RootData, lambda: &[i64]) -> WeightModule {
    let r = rd.rank;
    let mut words = VermaWords { cartan: &rd.cartan_matrix, lambda, memo: HashMap::new() };
    let mut basis: Vec<Word> = vec![Vec::new()];
    let mut by_weight: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    by_weight.insert(words.counts(&[]), vec![0]);
    let mut level = vec![0usize];
    while !level.is_empty() {
        let mut next = Vec::new();
        for &b in &level {
            for i in 0..r as u8 {
                let mut cand = vec![i];
                cand.extend_from_slice(&basis[b]);
                let key = words.counts(&cand);
                let existing = by_weight.get(&key).cloned().unwrap_or_default();
                let mut list: Vec<&Word> = existing.iter().map(|&k| &basis[k]).collect();
                list.push(&cand);
                let rank = gram(&mut words, &list).rank();
                if rank == list.len() {
                    basis.push(cand);
                    let idx = basis.len() - 1;
                    by_weight.entry(key).or_default().push(idx);
                    next.push(idx);
                }
            }
        }
        level = next;
    }

    let spaces: HashMap<Vec<i64>, WeightSpace> = by_weight
        .iter()
        .map(|(k, members)| {
            let list: Vec<&Word> = members.iter().map(|&m| &basis[m]).collect();
            let inv = gram(&mut words, &list).inverse().expect("Gram matrix is nondegenerate");
            (k.clone(), WeightSpace { members: members.clone(), gram_inverse: inv })
        })
        .collect();
    let express = |words: &mut VermaWords, w: &[u8]| -> SVec<usize> {
        let Some(space) = spaces.get(&words.counts(w)) else {
            return SVec::new();
        };
        let rhs: Vec<ExactScalar> =
            space.members.iter().map(|&m| words.pairing(&basis[m], w)).collect();
        let coords = space.gram_inverse.mul_vec(&rhs).expect("sizes agree");
        space
            .members
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&m, c)| (m, c))
            .collect()
    };

    let n = basis.len();
    let mut f_cols: Vec<Vec<SVec<usize>>> = vec![Vec::with_capacity(n); r];
    let mut e_cols: Vec<Vec<SVec<usize>>> = vec![Vec::with_capacity(n); r];
    for j in 0..n {
        let w = basis[j].clone();
        for i in 0..r {
            let mut cand = vec![i as u8];
            cand.extend_from_slice(&w);
            f_cols[i].push(express(&mut words, &cand));
            let mut col = SVec::new();
            for (lower, c) in words.raise(i as u8, &w) {
                axpy(&mut col, &c, &express(&mut words, &lower));
            }
            e_cols[i].push(col);
        }
    }

    // divided-power rescaling: new basis vector j is basis[j] / prod(run lengths!)
    let scale: Vec<ExactScalar> = basis
        .iter()
        .map(|w| {
            let mut s = ExactScalar::one();
            let mut k = 0;
            while k < w.len() {
                let mut run = 1;
                while k + run < w.len() && w[k + run] == w[k] {
                    run += 1;
                }
                s *= &factorial(run as u32);
                k += run;
            }
            s.recip()
        })
        .collect();
    let rescale = |cols: &[SVec<usize>]| -> ExactMatrix {
        let cols: Vec<SVec<usize>> = cols
            .iter()
            .enumerate()
            .map(|(j, col)| col.iter().map(|(k, v)| (*k, v * &scale[j] / &scale[*k])).collect())
            .collect();
        ExactMatrix::from_columns(n, &cols)
    };

    let weights: Vec<Vec<i64>> = basis.iter().map(|w| words.weight(w)).collect();
    let mut action = vec![ExactMatrix::zero(n, n); g.dim()];
    for i in 0..r {
        action[rd.f_index[i]] = rescale(&f_cols[i]);
        action[rd.e_index[i]] = rescale(&e_cols[i]);
        let mut h = ExactMatrix::zero(n, n);
        for (j, w) in weights.iter().enumerate() {
            if w[i] != 0 {
                h.set(j, j, ExactScalar::from_int(w[i]));
            }
        }
        action[rd.cartan_indices[i]] = h;
    }
    for a in r..rd.positive_roots.len() {
        let root = &rd.positive_roots[a];
        let (i, b) = (0..r)
            .find_map(|i| {
                let mut beta = root.clone();
                beta[i] -= 1;
                rd.root_position(&beta).map(|b| (i, b))
            })
            .expect("non-simple root has a simple predecessor");
        for (idx, simple, prev) in [
            (&rd.e_index, rd.e_index[i], rd.e_index[b]),
            (&rd.f_index, rd.f_index[i], rd.f_index[b]),
        ] {
            let c = g.bracket_basis(simple, prev).get(&idx[a]).cloned().expect("root string");
            action[idx[a]] = action[simple].commutator(&action[prev]).scale(&c.recip());
        }
    }

    let names = if rd.rank == 1 {
        (0..n).map(|j| format!("a{j}")).collect()
    } else {
        (0..n).map(|j| format!("v{j}")).collect()
    };
    WeightModule { highest_weight: lambda.to_vec(), basis: names, weights, action }
}

/// One irreducible summand of a module restricted to an sl2-triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2Component {
    pub highest_weight: i64,
    pub highest_vector: SVec<usize>,
}

/// Splits a module into irreducible sl2-summands for the triple (e, f, h).
pub fn sl2_decompose(
    e: &ExactMatrix,
    f: &ExactMatrix,
    h: &ExactMatrix,
) -> Result<Vec<Sl2Component>, LieError> {
    let two = ExactScalar::from_int(2);
    if h.commutator(e) != e.scale(&two) {
        return Err(LieError::NotSl2Triple("[h,e] != 2e".into()));
    }
    if h.commutator(f) != f.scale(&-two) {
        return Err(LieError::NotSl2Triple("[h,f] != -2f".into()));
    }
    if e.commutator(f) != *h {
        return Err(LieError::NotSl2Triple("[e,f] != h".into()));
    }
    let n = h.rows();
    let ker_e = kernel(e);
    let mut out = Vec::new();
    for m in (0..n as i64).rev() {
        let shifted = h.sub(&ExactMatrix::identity(n).scale(&ExactScalar::from_int(m)));
        let top = kernel(&shifted).intersection(&ker_e).expect("same ambient");
        for v in top.basis_vectors() {
            out.push(Sl2Component { highest_weight: m, highest_vector: v });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{chevalley_basis, CartanType};
    use crate::linalg::{scaled, Subspace};

    fn a1() -> (LieAlgebra, RootData) {
        let (g, rd, _) = chevalley_basis(CartanType::A(1)).unwrap();
        (g, rd)
    }

    #[test]
    fn a1_divided_power_basis() {
        let (g, rd) = a1();
        for m in 0..=5i64 {
            let v = highest_weight_module(&g, &rd, &[m]).unwrap();
            assert_eq!(v.dim() as i64, m + 1);
            for j in 0..=m {
                let aj = unit_svec(j as usize);
                let h = v.act_basis(2, &aj);
                assert_eq!(h, scaled(&aj, &ExactScalar::from_int(m - 2 * j)));
                let f = v.act_basis(1, &aj);
                let want = if j < m { scaled(&unit_svec(j as usize + 1), &ExactScalar::from_int(j + 1)) } else { SVec::new() };
                assert_eq!(f, want);
                let e = v.act_basis(0, &aj);
                let want = if j > 0 { scaled(&unit_svec(j as usize - 1), &ExactScalar::from_int(m - j + 1)) } else { SVec::new() };
                assert_eq!(e, want);
            }
        }
    }

    #[test]
    fn dimensions_match_weyl_formula() {
        let cases: [(CartanType, &[i64]); 6] = [
            (CartanType::A(2), &[1, 0]),
            (CartanType::A(2), &[0, 1]),
            (CartanType::A(2), &[1, 1]),
            (CartanType::A(2), &[2, 0]),
            (CartanType::A(3), &[0, 1, 0]),
            (CartanType::D(4), &[1, 0, 0, 0]),
        ];
        for (t, lambda) in cases {
            let (g, rd, _) = chevalley_basis(t).unwrap();
            let v = highest_weight_module(&g, &rd, lambda).unwrap();
            let w = weyl_dimension(&rd, lambda);
            assert_eq!(ExactScalar::from_int(v.dim() as i64), w, "{t} {lambda:?}");
        }
        // independent values: 3, 3, 8, 6, 6, 8
        let (_, rd, _) = chevalley_basis(CartanType::A(2)).unwrap();
        assert_eq!(weyl_dimension(&rd, &[1, 1]), ExactScalar::from_int(8));
    }

    #[test]
    fn theta_weight_gives_adjoint() {
        let (g, rd, _) = chevalley_basis(CartanType::A(2)).unwrap();
        let v = highest_weight_module(&g, &rd, &[1, 1]).unwrap();
        assert_eq!(v.dim(), 8);
    }

    #[test]
    fn rejects_negative_weight() {
        let (g, rd) = a1();
        assert!(matches!(highest_weight_module(&g, &rd, &[-1]), Err(LieError::NotDominantIntegral(_))));
        assert!(matches!(highest_weight_module(&g, &rd, &[1, 0]), Err(LieError::WeightLength { .. })));
    }

    fn decompose(v: &WeightModule) -> Vec<Sl2Component> {
        sl2_decompose(&v.action[0], &v.action[1], &v.action[2]).unwrap()
    }

    #[test]
    fn sl2_components() {
        let (g, rd) = a1();
        let adj = highest_weight_module(&g, &rd, &[2]).unwrap();
        let c = decompose(&adj);
        assert_eq!(c.iter().map(|c| c.highest_weight).collect::<Vec<_>>(), vec![2]);
        let l1 = highest_weight_module(&g, &rd, &[1]).unwrap();
        let c = decompose(&l1.direct_sum(&l1));
        assert_eq!(c.iter().map(|c| c.highest_weight).collect::<Vec<_>>(), vec![1, 1]);
        let bad = sl2_decompose(&l1.action[0], &l1.action[0], &l1.action[2]);
        assert!(matches!(bad, Err(LieError::NotSl2Triple(_))));
    }

    #[test]
    fn components_reassemble_module() {
        let (g, rd) = a1();
        let v = highest_weight_module(&g, &rd, &[3])
            .unwrap()
            .direct_sum(&highest_weight_module(&g, &rd, &[1]).unwrap());
        let comps = decompose(&v);
        let mut vecs = Vec::new();
        for c in &comps {
            let mut x = c.highest_vector.clone();
            for _ in 0..=c.highest_weight {
                vecs.push(x.clone());
                x = v.action[1].mul_svec(&x);
            }
        }
        assert_eq!(vecs.len(), v.dim());
        assert_eq!(Subspace::from_vectors(v.dim(), vecs).dim(), v.dim());
    }
}
