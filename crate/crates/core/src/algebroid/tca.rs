use serde::{Deserialize, Serialize};

use super::{AxiomReport, VertexAlgebroid};
use crate::algebra::{render, Bilinear};
use crate::linalg::{axpy, scaled, unit_svec, ExactMatrix, SVec};
use crate::scalar::ExactScalar;

/// 1-truncated conformal algebra on `C0 + C1`, with products stored on the
/// total space (indices `0..n0` for C0, `n0..n0+n1` for C1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncatedConformalAlgebra {
    pub c0_names: Vec<String>,
    pub c1_names: Vec<String>,
    /// `∂: C0 -> C1` as a `n1 x n0` matrix.
    pub d_map: ExactMatrix,
    pub product0: Bilinear,
    pub product1: Bilinear,
}

impl TruncatedConformalAlgebra {
    pub fn zero(c0_names: Vec<String>, c1_names: Vec<String>) -> Self {
        let n = c0_names.len() + c1_names.len();
        TruncatedConformalAlgebra {
            d_map: ExactMatrix::zero(c1_names.len(), c0_names.len()),
            c0_names,
            c1_names,
            product0: Bilinear::zero(n, n, n),
            product1: Bilinear::zero(n, n, n),
        }
    }

    pub(crate) fn from_algebroid(v: &VertexAlgebroid) -> Self {
        let (na, nb) = (v.a_dim(), v.b_dim());
        let mut t = Self::zero(v.a_names.clone(), v.b_names.clone());
        t.d_map = v.d_map.clone();
        let shift = |x: &SVec<usize>, by: usize| -> SVec<usize> { x.iter().map(|(k, c)| (k + by, c.clone())).collect() };
        for i in 0..nb {
            for j in 0..nb {
                t.product0.set(na + i, na + j, shift(v.bracket.get(i, j), na));
                t.product1.set(na + i, na + j, v.pairing.get(i, j).clone());
            }
            for a in 0..na {
                let ua = v.b_on_a.get(i, a).clone();
                t.product0.set(a, na + i, scaled(&ua, &-ExactScalar::one()));
                t.product0.set(na + i, a, ua);
            }
        }
        t
    }

    pub fn n0(&self) -> usize {
        self.c0_names.len()
    }

    pub fn n1(&self) -> usize {
        self.c1_names.len()
    }

    fn names(&self) -> Vec<String> {
        self.c0_names.iter().chain(&self.c1_names).cloned().collect()
    }

    /// `∂` extended by zero to the total space.
    fn d_total(&self, x: &SVec<usize>) -> SVec<usize> {
        let n0 = self.n0();
        let c0: SVec<usize> = x.iter().filter(|(k, _)| **k < n0).map(|(k, c)| (*k, c.clone())).collect();
        self.d_map.mul_svec(&c0).into_iter().map(|(k, c)| (k + n0, c)).collect()
    }

    fn product(&self, i: usize) -> &Bilinear {
        if i == 0 {
            &self.product0
        } else {
            &self.product1
        }
    }
}

fn sub(x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
    let mut r = x.clone();
    axpy(&mut r, &-ExactScalar::one(), y);
    r
}

/// Derivation, commutativity, associativity and grading checks on basis tuples.
pub fn check_tca(c: &TruncatedConformalAlgebra) -> AxiomReport {
    let (n0, n1) = (c.n0(), c.n1());
    let n = n0 + n1;
    let names = c.names();
    let nm = |k: usize| names[k].clone();
    let mut rep = AxiomReport::default();
    let p0 = |x: &SVec<usize>, y: &SVec<usize>| c.product0.apply(x, y);
    let p1 = |x: &SVec<usize>, y: &SVec<usize>| c.product1.apply(x, y);

    for id in ["(∂a)_0 = 0", "(∂a)_1 = -a_0", "∂(u_0 a) = u_0 ∂a"] {
        rep.declare("derivation", id);
    }
    for id in ["u_0 a = -a_0 u", "u_0 v = -v_0 u + ∂(u_1 v)", "u_1 v = v_1 u"] {
        rep.declare("commutativity", id);
    }
    for id in ["x_0 y_0 z = y_0 x_0 z + (x_0 y)_0 z", "x_0 y_1 z = y_1 x_0 z + (x_0 y)_1 z"] {
        rep.declare("associativity", id);
    }
    rep.declare("grading", "x_i y has degree deg x + deg y - i - 1");

    let deg = |k: usize| if k < n0 { 0i64 } else { 1 };
    for x in 0..n {
        for y in 0..n {
            for i in 0..2 {
                let target = deg(x) + deg(y) - i as i64 - 1;
                let ok = c.product(i).get(x, y).keys().all(|&k| target >= 0 && deg(k) == target);
                rep.record("grading", "x_i y has degree deg x + deg y - i - 1", ok, || {
                    vec![nm(x), format!("{i}"), nm(y)]
                });
            }
        }
    }

    for a in 0..n0 {
        let da = c.d_total(&unit_svec(a));
        for x in 0..n {
            let ex = unit_svec(x);
            rep.record("derivation", "(∂a)_0 = 0", p0(&da, &ex).is_empty(), || vec![nm(a), nm(x)]);
            let lhs = p1(&da, &ex);
            let rhs = scaled(&p0(&unit_svec(a), &ex), &-ExactScalar::one());
            rep.record("derivation", "(∂a)_1 = -a_0", lhs == rhs, || vec![nm(a), nm(x)]);
        }
        for u in n0..n {
            let eu = unit_svec(u);
            let lhs = c.d_total(&p0(&eu, &unit_svec(a)));
            let rhs = p0(&eu, &da);
            rep.record("derivation", "∂(u_0 a) = u_0 ∂a", lhs == rhs, || vec![nm(u), nm(a)]);
            let ua = p0(&eu, &unit_svec(a));
            let au = p0(&unit_svec(a), &eu);
            rep.record("commutativity", "u_0 a = -a_0 u", sub(&ua, &scaled(&au, &-ExactScalar::one())).is_empty(), || {
                vec![nm(u), nm(a)]
            });
        }
    }
    for u in n0..n {
        for v in n0..n {
            let (eu, ev) = (unit_svec(u), unit_svec(v));
            let mut rhs = scaled(&p0(&ev, &eu), &-ExactScalar::one());
            axpy(&mut rhs, &ExactScalar::one(), &c.d_total(&p1(&eu, &ev)));
            rep.record("commutativity", "u_0 v = -v_0 u + ∂(u_1 v)", p0(&eu, &ev) == rhs, || vec![nm(u), nm(v)]);
            rep.record("commutativity", "u_1 v = v_1 u", p1(&eu, &ev) == p1(&ev, &eu), || vec![nm(u), nm(v)]);
        }
    }
    let ids = ["x_0 y_0 z = y_0 x_0 z + (x_0 y)_0 z", "x_0 y_1 z = y_1 x_0 z + (x_0 y)_1 z"];
    for x in 0..n {
        let ex = unit_svec(x);
        for y in 0..n {
            let ey = unit_svec(y);
            let xy = p0(&ex, &ey);
            for z in 0..n {
                let ez = unit_svec(z);
                let xz = p0(&ex, &ez);
                for (i, id) in ids.iter().enumerate() {
                    let pi = c.product(i);
                    let lhs = p0(&ex, &pi.apply(&ey, &ez));
                    let mut rhs = pi.apply(&ey, &xz);
                    axpy(&mut rhs, &ExactScalar::one(), &pi.apply(&xy, &ez));
                    rep.record("associativity", id, lhs == rhs, || vec![nm(x), nm(y), nm(z)]);
                }
            }
        }
    }
    rep
}

impl TruncatedConformalAlgebra {
    pub fn render_total(&self, v: &SVec<usize>) -> String {
        render(v, &self.names())
    }
}
