use serde::{Deserialize, Serialize};

use super::{check_tca, AxiomReport, VertexAlgebroid};
use crate::algebra::render;
use crate::liealg::{InvariantForm, LieAlgebra, WeightModule};
use crate::linalg::{axpy, scaled, unit_svec, SVec};
use crate::scalar::ExactScalar;

/// Both axiom formulations of a vertex algebroid, evaluated on basis tuples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexAlgebroidReport {
    /// Identities in terms of `(*, ·, [,], <,>, ∂, π)`.
    pub axioms: AxiomReport,
    /// Conditions on the 1-truncated conformal algebra plus the module data.
    pub conditions: AxiomReport,
    pub formulations_agree: bool,
}

impl VertexAlgebroidReport {
    pub fn passes(&self) -> bool {
        self.axioms.passes() && self.conditions.passes()
    }
}

fn minus(x: &SVec<usize>) -> SVec<usize> {
    scaled(x, &-ExactScalar::one())
}

fn add(x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
    let mut r = x.clone();
    axpy(&mut r, &ExactScalar::one(), y);
    r
}

fn sub(x: &SVec<usize>, y: &SVec<usize>) -> SVec<usize> {
    add(x, &minus(y))
}

fn algebra_checks(v: &VertexAlgebroid) -> AxiomReport {
    let (na, nb) = (v.a_dim(), v.b_dim());
    let an = |i: usize| v.a_names[i].clone();
    let mut rep = AxiomReport::default();
    let one = v.unit_vec();
    for a in 0..na {
        let ea = unit_svec(a);
        rep.record("algebra", "1*a = a", v.mul(&one, &ea) == ea, || vec![an(a)]);
        for b in 0..na {
            let eb = unit_svec(b);
            let ab = v.mul(&ea, &eb);
            rep.record("algebra", "a*b = b*a", ab == v.mul(&eb, &ea), || vec![an(a), an(b)]);
            for c in 0..na {
                let ec = unit_svec(c);
                let lhs = v.mul(&ab, &ec);
                let rhs = v.mul(&ea, &v.mul(&eb, &ec));
                rep.record("algebra", "(a*b)*c = a*(b*c)", lhs == rhs, || vec![an(a), an(b), an(c)]);
            }
        }
    }
    for j in 0..nb {
        let ej = unit_svec(j);
        rep.record("algebra", "1·v = v", v.dot(&one, &ej) == ej, || vec![v.b_names[j].clone()]);
    }
    rep
}

fn axiom_checks(v: &VertexAlgebroid) -> AxiomReport {
    let (na, nb) = (v.a_dim(), v.b_dim());
    let an = |i: usize| v.a_names[i].clone();
    let bn = |i: usize| v.b_names[i].clone();
    let mut rep = AxiomReport::default();
    let ids = [
        "a·(a'·v) - (a*a')·v = (v_0 a)·∂a' + (v_0 a')·∂a",
        "[u, a·v] = (u_0 a)·v + a·[u, v]",
        "[u, v] + [v, u] = ∂<u, v>",
        "(a·v)_0 a' = a*(v_0 a')",
        "<a·u, v> = a*<u, v> - u_0 v_0 a",
        "v_0 <v1, v2> = <[v, v1], v2> + <v1, [v, v2]>",
        "∂(a*a') = a·∂a' + a'·∂a",
        "[v, ∂a] = ∂(v_0 a)",
        "<v, ∂a> = v_0 a",
    ];
    for id in ids {
        rep.declare("algebroid", id);
    }
    let structure = [
        "[u, [v, w]] = [[u, v], w] + [v, [u, w]]",
        "[u, v]_0 a = u_0 v_0 a - v_0 u_0 a",
        "v_0 (a*a') = (v_0 a)*a' + a*(v_0 a')",
        "(∂a)_0 a' = 0",
        "<u, v> = <v, u>",
    ];
    for id in structure {
        rep.declare("structure", id);
    }

    for a in 0..na {
        let ea = unit_svec(a);
        let da = v.d(&ea);
        for a2 in 0..na {
            let eb = unit_svec(a2);
            let db = v.d(&eb);
            let ab = v.mul(&ea, &eb);
            let lhs = v.d(&ab);
            let rhs = add(&v.dot(&ea, &db), &v.dot(&eb, &da));
            rep.record("algebroid", ids[6], lhs == rhs, || vec![an(a), an(a2)]);
            rep.record("structure", structure[3], v.act(&da, &eb).is_empty(), || vec![an(a), an(a2)]);
            for j in 0..nb {
                let ej = unit_svec(j);
                let lhs = sub(&v.dot(&ea, &v.dot(&eb, &ej)), &v.dot(&ab, &ej));
                let rhs = add(&v.dot(&v.act(&ej, &ea), &db), &v.dot(&v.act(&ej, &eb), &da));
                rep.record("algebroid", ids[0], lhs == rhs, || vec![an(a), an(a2), bn(j)]);
                let lhs = v.act(&v.dot(&ea, &ej), &eb);
                let rhs = v.mul(&ea, &v.act(&ej, &eb));
                rep.record("algebroid", ids[3], lhs == rhs, || vec![an(a), bn(j), an(a2)]);
                let lhs = v.act(&ej, &ab);
                let rhs = add(&v.mul(&v.act(&ej, &ea), &eb), &v.mul(&ea, &v.act(&ej, &eb)));
                rep.record("structure", structure[2], lhs == rhs, || vec![bn(j), an(a), an(a2)]);
            }
        }
        for j in 0..nb {
            let ej = unit_svec(j);
            let lhs = v.bracket(&ej, &da);
            let rhs = v.d(&v.act(&ej, &ea));
            rep.record("algebroid", ids[7], lhs == rhs, || vec![bn(j), an(a)]);
            rep.record("algebroid", ids[8], v.pair(&ej, &da) == v.act(&ej, &ea), || vec![bn(j), an(a)]);
            for k in 0..nb {
                let ek = unit_svec(k);
                let lhs = v.bracket(&ej, &v.dot(&ea, &ek));
                let rhs = add(&v.dot(&v.act(&ej, &ea), &ek), &v.dot(&ea, &v.bracket(&ej, &ek)));
                rep.record("algebroid", ids[1], lhs == rhs, || vec![bn(j), an(a), bn(k)]);
                let lhs = v.pair(&v.dot(&ea, &ej), &ek);
                let rhs = sub(&v.mul(&ea, &v.pair(&ej, &ek)), &v.act(&ej, &v.act(&ek, &ea)));
                rep.record("algebroid", ids[4], lhs == rhs, || vec![an(a), bn(j), bn(k)]);
                let lhs = v.act(&v.bracket(&ej, &ek), &ea);
                let rhs = sub(&v.act(&ej, &v.act(&ek, &ea)), &v.act(&ek, &v.act(&ej, &ea)));
                rep.record("structure", structure[1], lhs == rhs, || vec![bn(j), bn(k), an(a)]);
            }
        }
    }
    for j in 0..nb {
        let ej = unit_svec(j);
        for k in 0..nb {
            let ek = unit_svec(k);
            let jk = v.bracket(&ej, &ek);
            let lhs = add(&jk, &v.bracket(&ek, &ej));
            rep.record("algebroid", ids[2], lhs == v.d(&v.pair(&ej, &ek)), || vec![bn(j), bn(k)]);
            rep.record("structure", structure[4], v.pair(&ej, &ek) == v.pair(&ek, &ej), || vec![bn(j), bn(k)]);
            for l in 0..nb {
                let el = unit_svec(l);
                let lhs = v.act(&ej, &v.pair(&ek, &el));
                let rhs = add(&v.pair(&jk, &el), &v.pair(&ek, &v.bracket(&ej, &el)));
                rep.record("algebroid", ids[5], lhs == rhs, || vec![bn(j), bn(k), bn(l)]);
                let lhs = v.bracket(&ej, &v.bracket(&ek, &el));
                let rhs = add(&v.bracket(&jk, &el), &v.bracket(&ek, &v.bracket(&ej, &el)));
                rep.record("structure", structure[0], lhs == rhs, || vec![bn(j), bn(k), bn(l)]);
            }
        }
    }
    rep
}

/// Conditions expressed through the `0`- and `1`-products of the associated
/// truncated conformal algebra rather than the bundle maps.
fn condition_checks(v: &VertexAlgebroid) -> AxiomReport {
    let t = v.to_tca();
    let (na, nb) = (v.a_dim(), v.b_dim());
    let an = |i: usize| v.a_names[i].clone();
    let bn = |i: usize| v.b_names[i].clone();
    // lift to and from the total space
    let b_up = |x: &SVec<usize>| -> SVec<usize> { x.iter().map(|(k, c)| (k + na, c.clone())).collect() };
    let down = |x: &SVec<usize>| -> SVec<usize> { x.iter().map(|(k, c)| (k - na, c.clone())).collect() };
    let p0 = |x: &SVec<usize>, y: &SVec<usize>| t.product0.apply(x, y);
    let p1 = |x: &SVec<usize>, y: &SVec<usize>| t.product1.apply(x, y);
    let d = |a: &SVec<usize>| b_up(&t.d_map.mul_svec(a));
    let dot = |a: &SVec<usize>, u: &SVec<usize>| b_up(&v.dot(a, &down(u)));
    let ids = [
        "a·(a'·u) - (a*a')·u = (u_0 a)·∂a' + (u_0 a')·∂a",
        "u_0 (a·v) - a·(u_0 v) = (u_0 a)·v",
        "u_0 (a*a') = a*(u_0 a') + (u_0 a)*a'",
        "a_0 (a'·v) = a'*(a_0 v)",
        "(a·u)_1 v = a*(u_1 v) - u_0 v_0 a",
        "∂(a*a') = a·∂a' + a'·∂a",
    ];
    let mut rep = AxiomReport::default();
    for id in ids {
        rep.declare("conditions", id);
    }
    for a in 0..na {
        let ea = unit_svec(a);
        for a2 in 0..na {
            let eb = unit_svec(a2);
            let ab = v.mul(&ea, &eb);
            let rhs = add(&dot(&ea, &d(&eb)), &dot(&eb, &d(&ea)));
            rep.record("conditions", ids[5], d(&ab) == rhs, || vec![an(a), an(a2)]);
            for j in 0..nb {
                let u = unit_svec(na + j);
                let lhs = sub(&dot(&ea, &dot(&eb, &u)), &dot(&ab, &u));
                let rhs = add(&dot(&p0(&u, &ea), &d(&eb)), &dot(&p0(&u, &eb), &d(&ea)));
                rep.record("conditions", ids[0], lhs == rhs, || vec![an(a), an(a2), bn(j)]);
                let lhs = p0(&u, &ab);
                let rhs = add(&v.mul(&ea, &p0(&u, &eb)), &v.mul(&p0(&u, &ea), &eb));
                rep.record("conditions", ids[2], lhs == rhs, || vec![bn(j), an(a), an(a2)]);
                let lhs = p0(&ea, &dot(&eb, &u));
                let rhs = v.mul(&eb, &p0(&ea, &u));
                rep.record("conditions", ids[3], lhs == rhs, || vec![an(a), an(a2), bn(j)]);
            }
        }
        for j in 0..nb {
            let u = unit_svec(na + j);
            for k in 0..nb {
                let w = unit_svec(na + k);
                let lhs = sub(&p0(&u, &dot(&ea, &w)), &dot(&ea, &p0(&u, &w)));
                rep.record("conditions", ids[1], lhs == dot(&p0(&u, &ea), &w), || vec![bn(j), an(a), bn(k)]);
                let lhs = p1(&dot(&ea, &u), &w);
                let rhs = sub(&v.mul(&ea, &p1(&u, &w)), &p0(&u, &p0(&w, &ea)));
                rep.record("conditions", ids[4], lhs == rhs, || vec![an(a), bn(j), bn(k)]);
            }
        }
    }
    rep.merge(check_tca(&t));
    rep
}

/// Evaluates both formulations and records whether their verdicts agree.
pub fn check_vertex_algebroid(v: &VertexAlgebroid) -> VertexAlgebroidReport {
    let algebra = algebra_checks(v);
    let mut axioms = axiom_checks(v);
    let mut conditions = condition_checks(v);
    axioms.merge(algebra.clone());
    conditions.merge(algebra);
    let formulations_agree = axioms.passes() == conditions.passes();
    VertexAlgebroidReport { axioms, conditions, formulations_agree }
}

/// One failure of `g_0 g'_0 a + g'_0 g_0 a = <g, g'> a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionWitness {
    pub g: String,
    pub g_prime: String,
    pub a: String,
    /// Left side minus right side.
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub checked: usize,
    pub violation_count: usize,
    pub violations: Vec<CriterionWitness>,
    /// False when the scan stopped at the witness limit.
    pub exhaustive: bool,
}

impl CriterionReport {
    pub fn passes(&self) -> bool {
        self.violation_count == 0
    }

    pub fn contains(&self, g: &str, g_prime: &str, a: &str) -> bool {
        self.violations.iter().any(|w| w.g == g && w.g_prime == g_prime && w.a == a)
    }
}

/// Tests the anticommutator condition on unordered basis pairs of g and
/// basis vectors of N, stopping after `limit` witnesses when given.
pub fn criterion_check(
    g: &LieAlgebra,
    form: &InvariantForm,
    module: &WeightModule,
    limit: Option<usize>,
) -> CriterionReport {
    let n = module.dim();
    let dg = g.dim();
    let mut rep = CriterionReport { checked: 0, violation_count: 0, violations: Vec::new(), exhaustive: true };
    let columns: Vec<Vec<SVec<usize>>> = module.action.iter().map(|m| (0..n).map(|k| m.column(k)).collect()).collect();
    for i in 0..dg {
        for j in i..dg {
            let c = form.eval_basis(i, j);
            for k in 0..n {
                rep.checked += 1;
                let mut r = module.action[i].mul_svec(&columns[j][k]);
                axpy(&mut r, &ExactScalar::one(), &module.action[j].mul_svec(&columns[i][k]));
                if !c.is_zero() {
                    axpy(&mut r, &-c.clone(), &unit_svec(k));
                }
                if r.is_empty() {
                    continue;
                }
                rep.violation_count += 1;
                rep.violations.push(CriterionWitness {
                    g: g.basis()[i].clone(),
                    g_prime: g.basis()[j].clone(),
                    a: module.basis[k].clone(),
                    residual: render(&r, &module.basis),
                });
                if limit.is_some_and(|l| rep.violations.len() >= l) {
                    rep.exhaustive = false;
                    return rep;
                }
            }
        }
    }
    rep
}

impl VertexAlgebroid {
    /// Criterion for the embedded Lie algebra acting on N.
    pub fn criterion(&self, limit: Option<usize>) -> Option<CriterionReport> {
        self.lie.as_ref().map(|l| criterion_check(&l.g, &l.form, &l.module, limit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{construct_bg, construct_blambda, trivial_module_input};
    use crate::liealg::CartanType;

    #[test]
    fn a1_lambda_one_is_a_vertex_algebroid() {
        let vab = construct_blambda(CartanType::A(1), &[1]).unwrap();
        assert!(vab.criterion(None).unwrap().passes());
        let rep = check_vertex_algebroid(&vab);
        assert!(rep.passes(), "{:?}", rep.axioms.failing().chain(rep.conditions.failing()).collect::<Vec<_>>());
        assert!(rep.formulations_agree);
    }

    #[test]
    fn a1_lambda_two_fails_with_expected_witness() {
        let vab = construct_blambda(CartanType::A(1), &[2]).unwrap();
        let crit = vab.criterion(None).unwrap();
        assert!(!crit.passes());
        assert!(crit.contains("f", "h", "a0"));
        let w = crit.violations.iter().find(|w| w.g == "f" && w.g_prime == "h" && w.a == "a0").unwrap();
        assert_eq!(w.residual, "2*a1");
        let rep = check_vertex_algebroid(&vab);
        assert!(!rep.axioms.passes() && !rep.conditions.passes());
        assert!(rep.formulations_agree);
    }

    #[test]
    fn trivial_n_fails_criterion() {
        let vab = construct_bg(&trivial_module_input(CartanType::A(1), 1).unwrap()).unwrap();
        let crit = vab.criterion(None).unwrap();
        assert!(crit.contains("e", "f", "a0"));
        assert!(!check_vertex_algebroid(&vab).passes());
    }

    #[test]
    fn tca_of_valid_bundle_passes_and_detects_sign_flip() {
        let vab = construct_blambda(CartanType::A(1), &[1]).unwrap();
        let mut t = vab.to_tca();
        assert!(check_tca(&t).passes());
        let na = vab.a_dim();
        let (e, f) = (na, na + 1);
        let flipped = minus(t.product0.get(e, f));
        t.product0.set(e, f, flipped);
        let rep = check_tca(&t);
        assert!(!rep.family_passes("commutativity"));
    }

    #[test]
    fn witness_limit_stops_scan() {
        let vab = construct_blambda(CartanType::A(1), &[2]).unwrap();
        let crit = vab.criterion(Some(1)).unwrap();
        assert_eq!(crit.violations.len(), 1);
        assert!(!crit.exhaustive);
    }
}
