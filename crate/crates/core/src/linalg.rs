use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::scalar::ExactScalar;

/// Sparse vector keyed by an ordered index; absent keys are zero.
pub type SVec<K> = BTreeMap<K, ExactScalar>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// `target += coeff * src`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(target: &mut SVec<K>, coeff: &ExactScalar, src: &SVec<K>) {
    if coeff.is_zero() {
        return;
    }
    for (k, v) in src {
        let term = coeff * v;
        match target.get_mut(k) {
            Some(x) => {
                *x += &term;
                if x.is_zero() {
                    target.remove(k);
                }
            }
            None => {
                target.insert(k.clone(), term);
            }
        }
    }
}

pub fn add_term<K: Ord + Clone>(target: &mut SVec<K>, key: K, coeff: ExactScalar) {
    if coeff.is_zero() {
        return;
    }
    match target.get_mut(&key) {
        Some(x) => {
            *x += &coeff;
            if x.is_zero() {
                target.remove(&key);
            }
        }
        None => {
            target.insert(key, coeff);
        }
    }
}

pub fn scaled<K: Ord + Clone>(v: &SVec<K>, c: &ExactScalar) -> SVec<K> {
    if c.is_zero() {
        return SVec::new();
    }
    v.iter().map(|(k, x)| (k.clone(), x * c)).collect()
}

pub fn dense_to_svec(v: &[ExactScalar]) -> SVec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn svec_to_dense(v: &SVec<usize>, n: usize) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); n];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

pub fn unit_svec(i: usize) -> SVec<usize> {
    let mut v = SVec::new();
    v.insert(i, ExactScalar::one());
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Sparse(Vec<SVec<usize>>),
    Dense(Vec<Vec<ExactScalar>>),
}

/// Exact rational matrix; sparse rows that switch to dense storage once
/// more than half the entries are nonzero.
#[derive(Debug, Clone)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl PartialEq for ExactMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|r| self.row(r) == other.row(r))
    }
}

impl Eq for ExactMatrix {}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, storage: Storage::Sparse(vec![SVec::new(); rows]) }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sparse_rows(n, (0..n).map(unit_svec).collect())
    }

    pub fn from_sparse_rows(cols: usize, rows: Vec<SVec<usize>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.keys().all(|&c| c < cols)));
        let mut m = ExactMatrix { rows: rows.len(), cols, storage: Storage::Sparse(rows) };
        m.rebalance();
        m
    }

    pub fn from_dense(rows: Vec<Vec<ExactScalar>>) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_sparse_rows(cols, rows.iter().map(|r| dense_to_svec(r)).collect())
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_dense(
            rows.iter()
                .map(|r| r.iter().map(|&x| ExactScalar::from_int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[SVec<usize>]) -> Self {
        let mut out = vec![SVec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, x) in col {
                out[*i].insert(j, x.clone());
            }
        }
        Self::from_sparse_rows(columns.len(), out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Sparse(r) => r.iter().map(|x| x.len()).sum(),
            Storage::Dense(r) => r.iter().flatten().filter(|x| !x.is_zero()).count(),
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    fn rebalance(&mut self) {
        let total = self.rows * self.cols;
        if total == 0 {
            return;
        }
        let dense_wanted = self.nnz() * 2 > total;
        match (&self.storage, dense_wanted) {
            (Storage::Sparse(r), true) => {
                let d = r.iter().map(|x| svec_to_dense(x, self.cols)).collect();
                self.storage = Storage::Dense(d);
            }
            (Storage::Dense(r), false) => {
                let s = r.iter().map(|x| dense_to_svec(x)).collect();
                self.storage = Storage::Sparse(s);
            }
            _ => {}
        }
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        match &self.storage {
            Storage::Sparse(rows) => rows[r].get(&c).cloned().unwrap_or_default(),
            Storage::Dense(rows) => rows[r][c].clone(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        assert!(r < self.rows && c < self.cols);
        match &mut self.storage {
            Storage::Sparse(rows) => {
                if v.is_zero() {
                    rows[r].remove(&c);
                } else {
                    rows[r].insert(c, v);
                }
            }
            Storage::Dense(rows) => rows[r][c] = v,
        }
        self.rebalance();
    }

    pub fn row(&self, r: usize) -> SVec<usize> {
        match &self.storage {
            Storage::Sparse(rows) => rows[r].clone(),
            Storage::Dense(rows) => dense_to_svec(&rows[r]),
        }
    }

    pub fn sparse_rows(&self) -> Vec<SVec<usize>> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> SVec<usize> {
        (0..self.rows)
            .filter_map(|r| {
                let x = self.get(r, c);
                (!x.is_zero()).then_some((r, x))
            })
            .collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.rows).map(|r| svec_to_dense(&self.row(r), self.cols)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = vec![SVec::new(); self.cols];
        for r in 0..self.rows {
            for (c, x) in self.row(r) {
                out[c].insert(r, x);
            }
        }
        Self::from_sparse_rows(self.rows, out)
    }

    pub fn mul_svec(&self, v: &SVec<usize>) -> SVec<usize> {
        let mut out = SVec::new();
        for r in 0..self.rows {
            let row = self.row(r);
            let mut acc = ExactScalar::zero();
            for (c, x) in v {
                if let Some(y) = row.get(c) {
                    acc += x * y;
                }
            }
            if !acc.is_zero() {
                out.insert(r, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok(svec_to_dense(&self.mul_svec(&dense_to_svec(v)), self.rows))
    }

    pub fn matmul(&self, other: &ExactMatrix) -> Result<ExactMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let other_rows = other.sparse_rows();
        let rows = (0..self.rows)
            .map(|r| {
                let mut acc = SVec::new();
                for (k, x) in self.row(r) {
                    axpy(&mut acc, &x, &other_rows[k]);
                }
                acc
            })
            .collect();
        Ok(Self::from_sparse_rows(other.cols, rows))
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        self.lin_comb(&ExactScalar::one(), other)
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.lin_comb(&-ExactScalar::one(), other)
    }

    /// `self + c * other`.
    pub fn lin_comb(&self, c: &ExactScalar, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let rows = (0..self.rows)
            .map(|r| {
                let mut acc = self.row(r);
                axpy(&mut acc, c, &other.row(r));
                acc
            })
            .collect();
        Self::from_sparse_rows(self.cols, rows)
    }

    pub fn scale(&self, c: &ExactScalar) -> ExactMatrix {
        Self::from_sparse_rows(self.cols, self.sparse_rows().iter().map(|r| scaled(r, c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn trace(&self) -> ExactScalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }

    /// Commutator `self*other - other*self`.
    pub fn commutator(&self, other: &ExactMatrix) -> ExactMatrix {
        self.matmul(other).unwrap().sub(&other.matmul(self).unwrap())
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<SVec<usize>> = (0..n)
            .map(|r| {
                let mut row = self.row(r);
                row.insert(n + r, ExactScalar::one());
                row
            })
            .collect();
        let (red, piv) = rref(&ExactMatrix::from_sparse_rows(2 * n, aug));
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let rows = (0..n)
            .map(|r| red.row(r).into_iter().filter(|(c, _)| *c >= n).map(|(c, x)| (c - n, x)).collect())
            .collect();
        Some(ExactMatrix::from_sparse_rows(n, rows))
    }
}

/// Incremental row echelon basis over arbitrary ordered keys. Each row is
/// normalized so its leading (smallest) key has coefficient one, and
/// leading keys are distinct.
#[derive(Debug, Clone)]
pub struct Echelon<K: Ord + Clone + Hash> {
    rows: Vec<SVec<K>>,
    pivot_of: HashMap<K, usize>,
}

impl<K: Ord + Clone + Hash> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: Vec::new(), pivot_of: HashMap::new() }
    }
}

impl<K: Ord + Clone + Hash> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[SVec<K>] {
        &self.rows
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.pivot_of.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.pivot_of.keys()
    }

    /// Eliminate leading terms until the leader is not a pivot.
    pub fn reduce_leading(&self, mut v: SVec<K>) -> SVec<K> {
        while let Some((k, c)) = v.iter().next() {
            match self.pivot_of.get(k) {
                Some(&r) => {
                    let c = -c.clone();
                    axpy(&mut v, &c, &self.rows[r]);
                }
                None => break,
            }
        }
        v
    }

    /// Eliminate every pivot key from `v`.
    pub fn reduce_full(&self, v: SVec<K>) -> SVec<K> {
        let mut v = self.reduce_leading(v);
        let mut done: Vec<(K, ExactScalar)> = Vec::new();
        while let Some((k, c)) = v.pop_first() {
            match self.pivot_of.get(&k) {
                Some(&r) => {
                    let row = &self.rows[r];
                    let c = -c;
                    for (rk, rx) in row.iter().skip(1) {
                        add_term(&mut v, rk.clone(), &c * rx);
                    }
                }
                None => done.push((k, c)),
            }
        }
        done.into_iter().collect()
    }

    pub fn contains(&self, v: &SVec<K>) -> bool {
        self.reduce_leading(v.clone()).is_empty()
    }

    /// Insert `v`; returns whether the span grew.
    pub fn insert(&mut self, v: SVec<K>) -> bool {
        let v = self.reduce_leading(v);
        let Some((k, c)) = v.iter().next() else {
            return false;
        };
        let k = k.clone();
        let inv = c.recip();
        let v = scaled(&v, &inv);
        self.pivot_of.insert(k, self.rows.len());
        self.rows.push(v);
        true
    }

    /// Fully reduced form of every row: pivot key mapped to its tail, with
    /// no pivot keys in the tail.
    pub fn resolved(&self) -> HashMap<K, SVec<K>> {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| {
            let ka = self.rows[a].keys().next().unwrap();
            let kb = self.rows[b].keys().next().unwrap();
            kb.cmp(ka)
        });
        let mut out: HashMap<K, SVec<K>> = HashMap::new();
        for r in order {
            let row = &self.rows[r];
            let mut it = row.iter();
            let (lead, _) = it.next().unwrap();
            let mut tail = SVec::new();
            for (k, x) in it {
                match out.get(k) {
                    Some(sub) => axpy(&mut tail, x, sub),
                    None => add_term(&mut tail, k.clone(), x.clone()),
                }
            }
            // tail holds v - lead, so lead = -tail modulo the span
            let tail = scaled(&tail, &-ExactScalar::one());
            out.insert(lead.clone(), tail);
        }
        out
    }
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &ExactMatrix) -> (ExactMatrix, Vec<usize>) {
    let mut ech = Echelon::new();
    for r in 0..m.rows() {
        ech.insert(m.row(r));
    }
    let resolved = ech.resolved();
    let mut pivots: Vec<usize> = resolved.keys().copied().collect();
    pivots.sort_unstable();
    let mut rows: Vec<SVec<usize>> = pivots
        .iter()
        .map(|p| {
            let mut row = scaled(&resolved[p], &-ExactScalar::one());
            row.insert(*p, ExactScalar::one());
            row
        })
        .collect();
    rows.resize(m.rows(), SVec::new());
    (ExactMatrix::from_sparse_rows(m.cols(), rows), pivots)
}

/// Subspace of `Q^n` held as the nonzero rows of its reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: ExactMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: ExactMatrix::zero(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_vectors(ambient_dim, (0..ambient_dim).map(unit_svec))
    }

    pub fn from_vectors<I: IntoIterator<Item = SVec<usize>>>(ambient_dim: usize, vecs: I) -> Self {
        let rows: Vec<SVec<usize>> = vecs.into_iter().collect();
        let m = ExactMatrix::from_sparse_rows(ambient_dim, rows);
        let (red, pivots) = rref(&m);
        let basis = ExactMatrix::from_sparse_rows(
            ambient_dim,
            (0..pivots.len()).map(|r| red.row(r)).collect(),
        );
        Subspace { ambient_dim, basis, pivots }
    }

    pub fn from_dense_vectors(ambient_dim: usize, vecs: &[Vec<ExactScalar>]) -> Self {
        Self::from_vectors(ambient_dim, vecs.iter().map(|v| dense_to_svec(v)))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<SVec<usize>> {
        self.basis.sparse_rows()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Standard basis indices that complete this subspace to the ambient space.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|i| !self.pivots.contains(i)).collect()
    }

    /// Remainder of `v` modulo the subspace, supported off the pivot columns.
    pub fn reduce(&self, v: &SVec<usize>) -> SVec<usize> {
        let mut rest = v.clone();
        for (i, p) in self.pivots.iter().enumerate() {
            if let Some(c) = rest.get(p).cloned() {
                axpy(&mut rest, &-c, &self.basis.row(i));
            }
        }
        rest
    }

    /// Exact membership test.
    pub fn contains(&self, v: &SVec<usize>) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` against the RREF basis rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &SVec<usize>) -> Option<Vec<ExactScalar>> {
        let coords: Vec<ExactScalar> =
            self.pivots.iter().map(|p| v.get(p).cloned().unwrap_or_default()).collect();
        let mut rest = v.clone();
        for (i, c) in coords.iter().enumerate() {
            axpy(&mut rest, &-c, &self.basis.row(i));
        }
        rest.is_empty().then_some(coords)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(LinalgError::AmbientMismatch(self.ambient_dim, other.ambient_dim));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Self::from_vectors(
            self.ambient_dim,
            self.basis_vectors().into_iter().chain(other.basis_vectors()),
        ))
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        let u = self.basis_vectors();
        let v = other.basis_vectors();
        let mut cols: Vec<SVec<usize>> = u.clone();
        cols.extend(v.iter().map(|x| scaled(x, &-ExactScalar::one())));
        let m = ExactMatrix::from_columns(self.ambient_dim, &cols);
        let ker = kernel(&m);
        let vecs = ker.basis_vectors().into_iter().map(|k| {
            let mut acc = SVec::new();
            for (i, c) in k.iter().filter(|(i, _)| **i < u.len()) {
                axpy(&mut acc, c, &u[*i]);
            }
            acc
        });
        Ok(Self::from_vectors(self.ambient_dim, vecs))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool, LinalgError> {
        self.check_ambient(other)?;
        Ok(other.basis_vectors().iter().all(|v| self.contains(v)))
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image_under(&self, m: &ExactMatrix) -> Subspace {
        Self::from_vectors(m.rows(), self.basis_vectors().iter().map(|v| m.mul_svec(v)))
    }
}

/// Null space `{v : m v = 0}`.
pub fn kernel(m: &ExactMatrix) -> Subspace {
    let (red, pivots) = rref(m);
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let vecs = free.iter().map(|&f| {
        let mut v = unit_svec(f);
        for (r, &p) in pivots.iter().enumerate() {
            let x = red.get(r, f);
            if !x.is_zero() {
                v.insert(p, -x);
            }
        }
        v
    });
    Subspace::from_vectors(m.cols(), vecs)
}

pub fn image(m: &ExactMatrix) -> Subspace {
    Subspace::from_vectors(m.rows(), (0..m.cols()).map(|c| m.column(c)))
}

/// Some `x` with `m x = b`, or `None` when `b` is outside the column space.
pub fn solve(m: &ExactMatrix, b: &[ExactScalar]) -> Result<Option<Vec<ExactScalar>>, LinalgError> {
    if b.len() != m.rows() {
        return Err(LinalgError::DimensionMismatch { expected: m.rows(), got: b.len() });
    }
    let n = m.cols();
    let aug: Vec<SVec<usize>> = (0..m.rows())
        .map(|r| {
            let mut row = m.row(r);
            if !b[r].is_zero() {
                row.insert(n, b[r].clone());
            }
            row
        })
        .collect();
    let (red, pivots) = rref(&ExactMatrix::from_sparse_rows(n + 1, aug));
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![ExactScalar::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = red.get(r, n);
    }
    Ok(Some(x))
}

/// Minimal polynomial of a square matrix, monic, lowest degree first.
pub fn minimal_polynomial(m: &ExactMatrix) -> Vec<ExactScalar> {
    let n = m.rows();
    let flat = |x: &ExactMatrix| -> SVec<usize> {
        let mut v = SVec::new();
        for r in 0..n {
            for (c, val) in x.row(r) {
                v.insert(r * n + c, val);
            }
        }
        v
    };
    let mut powers = vec![ExactMatrix::identity(n)];
    loop {
        let next = powers.last().unwrap().matmul(m).unwrap();
        let cols: Vec<SVec<usize>> = powers.iter().map(flat).collect();
        let a = ExactMatrix::from_columns(n * n, &cols);
        let target = svec_to_dense(&flat(&next), n * n);
        if let Some(coeffs) = solve(&a, &target).unwrap() {
            let mut poly: Vec<ExactScalar> = coeffs.into_iter().map(|c| -c).collect();
            poly.push(ExactScalar::one());
            return poly;
        }
        powers.push(next);
    }
}

/// Rational roots of a polynomial given lowest degree first.
pub fn rational_roots(poly: &[ExactScalar]) -> Vec<ExactScalar> {
    use num_bigint::BigInt;
    use num_traits::{One, Zero};
    let mut p: Vec<ExactScalar> = poly.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        p.remove(0);
        if !roots.contains(&ExactScalar::zero()) {
            roots.push(ExactScalar::zero());
        }
    }
    if p.len() <= 1 {
        return roots;
    }
    let mut lcm = BigInt::one();
    for c in &p {
        let d = c.denom();
        lcm = num_integer::Integer::lcm(&lcm, &d);
    }
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    if a0.is_zero() {
        return roots;
    }
    let eval = |x: &ExactScalar| -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in p.iter().rev() {
            acc = &acc * x + c;
        }
        acc
    };
    for num in crate::scalar::divisors(&a0) {
        for den in crate::scalar::divisors(&an) {
            for sign in [1i64, -1] {
                let cand = ExactScalar::from_bigint(num.clone()) * ExactScalar::from_int(sign)
                    / ExactScalar::from_bigint(den.clone());
                if !roots.contains(&cand) && eval(&cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Serializable dense view used by JSON reports.
/// JSON form of a matrix: its shape and the nonzero entries as `[row, col, value]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrixRepr {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, ExactScalar)>,
}

impl From<&ExactMatrix> for SparseMatrixRepr {
    fn from(m: &ExactMatrix) -> Self {
        let entries = (0..m.rows).flat_map(|r| m.row(r).into_iter().map(move |(c, v)| (r, c, v))).collect();
        SparseMatrixRepr { rows: m.rows, cols: m.cols, entries }
    }
}

impl Serialize for ExactMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SparseMatrixRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SparseMatrixRepr::deserialize(d)?;
        let mut rows = vec![SVec::new(); r.rows];
        for (i, j, v) in r.entries {
            if i >= r.rows || j >= r.cols {
                return Err(serde::de::Error::custom(format!("entry ({i}, {j}) outside a {}x{} matrix", r.rows, r.cols)));
            }
            if !v.is_zero() {
                rows[i].insert(j, v);
            }
        }
        Ok(ExactMatrix::from_sparse_rows(r.cols, rows))
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    basis: Vec<Vec<ExactScalar>>,
}

impl Serialize for Subspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let basis = self.basis_vectors().iter().map(|v| svec_to_dense(v, self.ambient_dim)).collect();
        SubspaceRepr { ambient_dim: self.ambient_dim, basis }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SubspaceRepr::deserialize(d)?;
        if r.basis.iter().any(|v| v.len() != r.ambient_dim) {
            return Err(serde::de::Error::custom("basis vector length differs from ambient_dim"));
        }
        Ok(Subspace::from_dense_vectors(r.ambient_dim, &r.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> ExactScalar {
        ExactScalar::from_int(n)
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]));
        assert_eq!(r, ExactMatrix::from_ints(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
        let (r, p) = rref(&ExactMatrix::identity(3));
        assert_eq!(r, ExactMatrix::identity(3));
        assert_eq!(p, vec![0, 1, 2]);
        let (r, p) = rref(&ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]));
        assert_eq!(r, ExactMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]));
        assert_eq!(k, Subspace::from_dense_vectors(2, &[vec![q(-2), q(1)]]));
        assert!(kernel(&ExactMatrix::identity(4)).is_zero());
        assert!(kernel(&ExactMatrix::zero(2, 3)).is_full());
    }

    #[test]
    fn subspace_examples() {
        let e1 = Subspace::from_dense_vectors(2, &[vec![q(1), q(0)]]);
        let e2 = Subspace::from_dense_vectors(2, &[vec![q(0), q(1)]]);
        assert_eq!(e1.sum(&e2).unwrap().dim(), 2);
        assert_eq!(e1.intersection(&e2).unwrap().dim(), 0);
        assert_eq!(e1.sum(&e1).unwrap(), e1);
        assert_eq!(e1.intersection(&e1).unwrap(), e1);
        // (1,1) and (1,-1): determinant -2, so independent
        let u = Subspace::from_dense_vectors(2, &[vec![q(1), q(1)]]);
        let v = Subspace::from_dense_vectors(2, &[vec![q(1), q(-1)]]);
        assert!(u.sum(&v).unwrap().is_full());
        assert!(u.intersection(&v).unwrap().is_zero());
        let w = Subspace::zero(3);
        assert_eq!(u.sum(&w), Err(LinalgError::AmbientMismatch(2, 3)));
    }

    #[test]
    fn solve_examples() {
        let x = solve(&ExactMatrix::identity(2), &[q(3), q(5)]).unwrap().unwrap();
        assert_eq!(x, vec![q(3), q(5)]);
        let m = ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(solve(&m, &[q(1), q(3)]).unwrap().is_none());
        let x = solve(&m, &[q(1), q(2)]).unwrap().unwrap();
        assert_eq!(&x[0] + &(q(2) * &x[1]), q(1));
        assert!(matches!(solve(&m, &[q(1)]), Err(LinalgError::DimensionMismatch { .. })));
    }

    #[test]
    fn dense_fallback_switches() {
        let mut m = ExactMatrix::zero(2, 2);
        assert!(!m.is_dense());
        m.set(0, 0, q(1));
        m.set(1, 1, q(1));
        assert!(!m.is_dense());
        m.set(0, 1, q(3));
        assert!(m.is_dense());
        m.set(0, 1, q(0));
        assert!(!m.is_dense());
    }

    #[test]
    fn inverse_and_minpoly() {
        let m = ExactMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv).unwrap(), ExactMatrix::identity(2));
        assert!(ExactMatrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let d = ExactMatrix::from_ints(&[&[2, 0, 0], &[0, 2, 0], &[0, 0, -1]]);
        let p = minimal_polynomial(&d);
        // (x-2)(x+1) = x^2 - x - 2
        assert_eq!(p, vec![q(-2), q(-1), q(1)]);
        assert_eq!(rational_roots(&p), vec![q(-1), q(2)]);
    }

    #[test]
    fn echelon_resolved_matches_rref() {
        let mut e: Echelon<usize> = Echelon::new();
        e.insert(dense_to_svec(&[q(1), q(2), q(3)]));
        e.insert(dense_to_svec(&[q(0), q(1), q(1)]));
        let res = e.resolved();
        // rows: x0 = -x2, x1 = -x2 (mod span)
        assert_eq!(res[&0], dense_to_svec(&[q(0), q(0), q(-1)]));
        assert_eq!(res[&1], dense_to_svec(&[q(0), q(0), q(-1)]));
        assert_eq!(e.reduce_full(unit_svec(0)), dense_to_svec(&[q(0), q(0), q(-1)]));
    }

    #[test]
    fn matrix_json_is_sparse_and_round_trips() {
        let m = ExactMatrix::from_ints(&[&[0, 2], &[0, 0], &[1, 0]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":3,"cols":2,"entries":[[0,1,"2"],[2,0,"1"]]}"#);
        assert_eq!(serde_json::from_str::<ExactMatrix>(&s).unwrap(), m);
        assert!(serde_json::from_str::<ExactMatrix>(r#"{"rows":1,"cols":1,"entries":[[1,0,"1"]]}"#).is_err());
    }
}
