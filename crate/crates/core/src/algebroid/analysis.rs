use serde::{Deserialize, Serialize};

use super::{AlgebroidError, AxiomReport, VertexAlgebroid};
use crate::liealg::sl2_decompose;
use crate::linalg::{axpy, scaled, unit_svec, ExactMatrix, SVec, Subspace};
use crate::scalar::{factorial, ExactScalar};

/// One line of the structure table of an sl2-embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableLine {
    pub line: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sl2EmbeddingReport {
    /// The analysis presumes B is not a Lie algebra.
    pub b_is_lie: bool,
    pub ker_d_is_unit_line: bool,
    /// Highest weights of the irreducible summands of N.
    pub components: Vec<i64>,
    pub all_two_dimensional: bool,
    /// `<e, f>` as a multiple of the unit, if it is one.
    pub level: Option<ExactScalar>,
    pub table: Vec<TableLine>,
}

impl Sl2EmbeddingReport {
    pub fn table_holds(&self) -> bool {
        self.table.iter().all(|l| l.holds)
    }
}

fn restrict_to_n(v: &VertexAlgebroid, u: usize) -> Result<ExactMatrix, AlgebroidError> {
    let mut pos = vec![None; v.a_dim()];
    for (k, &i) in v.n_indices.iter().enumerate() {
        pos[i] = Some(k);
    }
    let cols = v
        .n_indices
        .iter()
        .map(|&i| {
            v.b_on_a
                .get(u, i)
                .iter()
                .map(|(q, c)| pos[*q].map(|k| (k, c.clone())).ok_or(AlgebroidError::NNotInvariant))
                .collect::<Result<SVec<usize>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExactMatrix::from_columns(v.n_indices.len(), &cols))
}

fn restrict_comb(v: &VertexAlgebroid, x: &SVec<usize>) -> Result<ExactMatrix, AlgebroidError> {
    let n = v.n_indices.len();
    let mut out = ExactMatrix::zero(n, n);
    for (u, c) in x {
        out = out.lin_comb(c, &restrict_to_n(v, *u)?);
    }
    Ok(out)
}

/// Decomposes N under the triple `(e, f, h)` of B and evaluates the
/// structure table each 2-dimensional summand must satisfy.
pub fn analyze_sl2_embedding(
    v: &VertexAlgebroid,
    e: usize,
    f: usize,
    h: usize,
) -> Result<Sl2EmbeddingReport, AlgebroidError> {
    analyze_sl2_triple(v, &unit_svec(e), &unit_svec(f), &unit_svec(h))
}

/// Same analysis for a triple given as elements of B.
pub fn analyze_sl2_triple(
    v: &VertexAlgebroid,
    e: &SVec<usize>,
    f: &SVec<usize>,
    h: &SVec<usize>,
) -> Result<Sl2EmbeddingReport, AlgebroidError> {
    let (ee, ef, eh) = (e.clone(), f.clone(), h.clone());
    let two = ExactScalar::from_int(2);
    if v.bracket(&ee, &ef) != eh {
        return Err(AlgebroidError::NotSl2Triple("[e,f] != h".into()));
    }
    if v.bracket(&eh, &ee) != scaled(&ee, &two) {
        return Err(AlgebroidError::NotSl2Triple("[h,e] != 2e".into()));
    }
    if v.bracket(&eh, &ef) != scaled(&ef, &-two) {
        return Err(AlgebroidError::NotSl2Triple("[h,f] != -2f".into()));
    }
    let image = v.image_d();
    for &n in &v.n_indices {
        for j in 0..v.b_dim() {
            if !image.contains(&v.dot(&unit_svec(n), &unit_svec(j))) {
                return Err(AlgebroidError::NBNotInPartialA(v.a_names[n].clone(), v.b_names[j].clone()));
            }
        }
    }
    let (me, mf, mh) = (restrict_comb(v, e)?, restrict_comb(v, f)?, restrict_comb(v, h)?);
    let comps = sl2_decompose(&me, &mf, &mh).map_err(|err| AlgebroidError::NotSl2Triple(err.to_string()))?;

    let ker = v.ker_d();
    let ker_d_is_unit_line = ker.dim() == 1 && ker.contains(&v.unit_vec());
    let ef_pair = v.pair(&ee, &ef);
    let level = if ef_pair.keys().all(|&k| k == v.unit) {
        Some(ef_pair.get(&v.unit).cloned().unwrap_or_else(ExactScalar::zero))
    } else {
        None
    };

    let to_a = |x: &SVec<usize>| -> SVec<usize> { x.iter().map(|(k, c)| (v.n_indices[*k], c.clone())).collect() };
    // a_s = f^s a_0 / s! for each summand
    let strings: Vec<Vec<SVec<usize>>> = comps
        .iter()
        .map(|c| {
            let mut out = vec![c.highest_vector.clone()];
            for s in 1..=c.highest_weight as u32 {
                let next = mf.mul_svec(out.last().expect("nonempty"));
                out.push(scaled(&next, &(factorial(s - 1) / factorial(s))));
            }
            out.iter().map(to_a).collect()
        })
        .collect();

    let mut table = Vec::new();
    let mut line = |text: String, holds: bool| table.push(TableLine { line: text, holds });
    for (i, (c, a)) in comps.iter().zip(&strings).enumerate() {
        if c.highest_weight != 1 {
            line(format!("summand {i} is 2-dimensional"), false);
            continue;
        }
        let d = |x: &SVec<usize>| v.d(x);
        let neg = |x: SVec<usize>| scaled(&x, &-ExactScalar::one());
        line(format!("a{i}_0·e = 0"), v.dot(&a[0], &ee).is_empty());
        line(format!("a{i}_1·e = ∂a{i}_0"), v.dot(&a[1], &ee) == d(&a[0]));
        line(format!("a{i}_0·f = ∂a{i}_1"), v.dot(&a[0], &ef) == d(&a[1]));
        line(format!("a{i}_1·f = 0"), v.dot(&a[1], &ef).is_empty());
        line(format!("a{i}_0·h = ∂a{i}_0"), v.dot(&a[0], &eh) == d(&a[0]));
        line(format!("a{i}_1·h = -∂a{i}_1"), v.dot(&a[1], &eh) == neg(d(&a[1])));
        for s in 0..2usize {
            let ds = d(&a[s]);
            let e_want = if s == 1 { a[0].clone() } else { SVec::new() };
            let f_want = if s == 0 { a[1].clone() } else { SVec::new() };
            let h_want = scaled(&a[s], &ExactScalar::from_int(1 - 2 * s as i64));
            for (name, x, want) in [("e", &ee, e_want), ("f", &ef, f_want), ("h", &eh, h_want)] {
                let ok = v.pair(&ds, x) == v.act(x, &a[s]) && v.act(x, &a[s]) == want;
                line(format!("∂(a{i}_{s})_1 {name} = {name}_0 a{i}_{s}"), ok);
            }
        }
        for (j, b) in strings.iter().enumerate() {
            for (s, x) in a.iter().enumerate() {
                for (t, y) in b.iter().enumerate() {
                    line(format!("a{i}_{s}·∂a{j}_{t} = 0"), v.dot(x, &v.d(y)).is_empty());
                    line(format!("a{i}_{s}*a{j}_{t} = 0"), v.mul(x, y).is_empty());
                }
            }
        }
    }
    line("<e, f> = 1".into(), level.as_ref().is_some_and(ExactScalar::is_one));

    Ok(Sl2EmbeddingReport {
        b_is_lie: v.leibniz().is_lie(),
        ker_d_is_unit_line,
        all_two_dimensional: comps.iter().all(|c| c.highest_weight == 1),
        components: comps.iter().map(|c| c.highest_weight).collect(),
        level,
        table,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomReport {
    pub conditions: AxiomReport,
}

impl HomReport {
    pub fn holds(&self) -> bool {
        self.conditions.passes()
    }
}

/// Checks whether `tau` (on `A + B`, block-diagonal) is a homomorphism of
/// vertex algebroids.
pub fn check_hom(tau: &ExactMatrix, src: &VertexAlgebroid, dst: &VertexAlgebroid) -> Result<HomReport, AlgebroidError> {
    let (na, nb, ma, mb) = (src.a_dim(), src.b_dim(), dst.a_dim(), dst.b_dim());
    if tau.rows() != ma + mb || tau.cols() != na + nb {
        return Err(AlgebroidError::DimensionMismatch(format!(
            "map is {}x{}, expected {}x{}",
            tau.rows(),
            tau.cols(),
            ma + mb,
            na + nb
        )));
    }
    let mut ta = Vec::with_capacity(na);
    let mut tb = Vec::with_capacity(nb);
    for c in 0..na + nb {
        let col = tau.column(c);
        if c < na {
            if col.keys().any(|&r| r >= ma) {
                return Err(AlgebroidError::ImageNotContained);
            }
            ta.push(col);
        } else {
            if col.keys().any(|&r| r < ma) {
                return Err(AlgebroidError::ImageNotContained);
            }
            tb.push(col.into_iter().map(|(r, x)| (r - ma, x)).collect::<SVec<usize>>());
        }
    }
    let lin = |images: &[SVec<usize>], x: &SVec<usize>| {
        let mut out = SVec::new();
        for (k, c) in x {
            axpy(&mut out, c, &images[*k]);
        }
        out
    };
    let tau_a = |x: &SVec<usize>| lin(&ta, x);
    let tau_b = |x: &SVec<usize>| lin(&tb, x);
    let an = |i: usize| src.a_names[i].clone();
    let bn = |i: usize| src.b_names[i].clone();
    let ids = [
        "τ(a*a') = τa*τa'",
        "τ[u, v] = [τu, τv]",
        "τ(a·u) = τa·τu",
        "<τu, τv> = τ<u, v>",
        "τ∂a = ∂τa",
        "τ(u_0 a) = (τu)_0 τa",
    ];
    let mut rep = AxiomReport::default();
    for id in ids {
        rep.declare("homomorphism", id);
    }
    for a in 0..na {
        let ea = unit_svec(a);
        rep.record("homomorphism", ids[4], tau_b(&src.d(&ea)) == dst.d(&tau_a(&ea)), || vec![an(a)]);
        for b in 0..na {
            let eb = unit_svec(b);
            let ok = tau_a(&src.mul(&ea, &eb)) == dst.mul(&tau_a(&ea), &tau_a(&eb));
            rep.record("homomorphism", ids[0], ok, || vec![an(a), an(b)]);
        }
        for u in 0..nb {
            let eu = unit_svec(u);
            let ok = tau_b(&src.dot(&ea, &eu)) == dst.dot(&tau_a(&ea), &tau_b(&eu));
            rep.record("homomorphism", ids[2], ok, || vec![an(a), bn(u)]);
            let ok = tau_a(&src.act(&eu, &ea)) == dst.act(&tau_b(&eu), &tau_a(&ea));
            rep.record("homomorphism", ids[5], ok, || vec![bn(u), an(a)]);
        }
    }
    for u in 0..nb {
        let eu = unit_svec(u);
        for w in 0..nb {
            let ew = unit_svec(w);
            let ok = tau_b(&src.bracket(&eu, &ew)) == dst.bracket(&tau_b(&eu), &tau_b(&ew));
            rep.record("homomorphism", ids[1], ok, || vec![bn(u), bn(w)]);
            let ok = dst.pair(&tau_b(&eu), &tau_b(&ew)) == tau_a(&src.pair(&eu, &ew));
            rep.record("homomorphism", ids[3], ok, || vec![bn(u), bn(w)]);
        }
    }
    Ok(HomReport { conditions: rep })
}

/// Map `1 -> 1, a -> phi(a)` on A and `g -> g, ∂a -> ∂phi(a)` on B induced
/// by a linear map `phi` between the N-parts of two constructed bundles.
pub fn module_isomorphism_map(
    src: &VertexAlgebroid,
    dst: &VertexAlgebroid,
    phi: &ExactMatrix,
) -> Result<ExactMatrix, AlgebroidError> {
    let (sl, dl) = match (&src.lie, &dst.lie) {
        (Some(s), Some(d)) if s.g_in_b.len() == d.g_in_b.len() => (s, d),
        _ => return Err(AlgebroidError::DimensionMismatch("bundles must embed the same Lie algebra".into())),
    };
    if phi.rows() != dst.n_indices.len() || phi.cols() != src.n_indices.len() {
        return Err(AlgebroidError::DimensionMismatch("phi does not map N to N'".into()));
    }
    let ma = dst.a_dim();
    let mut tau = ExactMatrix::zero(ma + dst.b_dim(), src.a_dim() + src.b_dim());
    tau.set(dst.unit, src.unit, ExactScalar::one());
    for (k, &i) in src.n_indices.iter().enumerate() {
        for (l, c) in phi.column(k) {
            tau.set(dst.n_indices[l], i, c.clone());
            tau.set(ma + dl.dn_in_b[l], src.a_dim() + sl.dn_in_b[k], c);
        }
    }
    for (i, j) in sl.g_in_b.iter().zip(&dl.g_in_b) {
        tau.set(ma + j, src.a_dim() + i, ExactScalar::one());
    }
    Ok(tau)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KerReport {
    pub kernel: Subspace,
    pub kernel_is_unit_line: bool,
    /// Idempotents of A, as vectors.
    pub idempotents: Vec<SVec<usize>>,
    pub kernel_contains_idempotents: bool,
    pub kernel_is_subalgebra: bool,
    pub b_acts_trivially_on_kernel: bool,
    pub image_is_kernel_module: bool,
}

/// Structure of `Ker ∂` for A a unit plus a square-zero ideal.
pub fn ker_partial_report(v: &VertexAlgebroid) -> Result<KerReport, AlgebroidError> {
    let one = v.unit_vec();
    let local = v.n_indices.iter().all(|&a| {
        v.mul(&one, &unit_svec(a)) == unit_svec(a)
            && v.n_indices.iter().all(|&b| v.mul(&unit_svec(a), &unit_svec(b)).is_empty())
    });
    if !local || v.n_indices.len() + 1 != v.a_dim() {
        return Err(AlgebroidError::IdempotentEnumerationUnsupported);
    }
    // (t + n)^2 = t + n forces t in {0, 1} and n = 0
    let idempotents = vec![SVec::new(), one.clone()];
    let kernel = v.ker_d();
    let basis = kernel.basis_vectors();
    let image = v.image_d();
    let kernel_is_subalgebra = basis.iter().all(|x| basis.iter().all(|y| kernel.contains(&v.mul(x, y))));
    let b_acts_trivially_on_kernel =
        (0..v.b_dim()).all(|j| basis.iter().all(|k| v.act(&unit_svec(j), k).is_empty()));
    let image_is_kernel_module =
        basis.iter().all(|k| image.basis_vectors().iter().all(|x| image.contains(&v.dot(k, x))));
    Ok(KerReport {
        kernel_is_unit_line: kernel.dim() == 1 && kernel.contains(&one),
        kernel_contains_idempotents: idempotents.iter().all(|e| kernel.contains(e)),
        idempotents,
        kernel,
        kernel_is_subalgebra,
        b_acts_trivially_on_kernel,
        image_is_kernel_module,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{construct_bg, construct_blambda, trivial_module_input};
    use crate::liealg::CartanType;

    fn a1_bundle() -> VertexAlgebroid {
        construct_blambda(CartanType::A(1), &[1]).unwrap()
    }

    #[test]
    fn a1_table_holds() {
        let rep = analyze_sl2_embedding(&a1_bundle(), 0, 1, 2).unwrap();
        assert!(rep.ker_d_is_unit_line && !rep.b_is_lie);
        assert_eq!(rep.components, vec![1]);
        assert_eq!(rep.level, Some(ExactScalar::one()));
        assert!(rep.table_holds(), "{:?}", rep.table.iter().filter(|l| !l.holds).collect::<Vec<_>>());
    }

    #[test]
    fn theta_triple_matches_basis_triple_and_splits_a2() {
        let v = a1_bundle();
        let [e, f, h] = v.theta_triple().unwrap();
        assert_eq!(analyze_sl2_triple(&v, &e, &f, &h).unwrap(), analyze_sl2_embedding(&v, 0, 1, 2).unwrap());
        let w = construct_blambda(CartanType::A(2), &[1, 0]).unwrap();
        let [e, f, h] = w.theta_triple().unwrap();
        let rep = analyze_sl2_triple(&w, &e, &f, &h).unwrap();
        let mut comps = rep.components.clone();
        comps.sort();
        assert_eq!(comps, vec![0, 1]);
        assert!(!rep.all_two_dimensional);
    }

    #[test]
    fn weight_conditions_separate_theta_from_all_coroots() {
        let a1 = a1_bundle().weight_conditions().unwrap();
        assert!(a1.on_theta == 1 && a1.one_on_every_positive_coroot);
        // ω1 of A2 pairs to 1 with h_θ and h_α1 but to 0 with h_α2
        let w = construct_blambda(CartanType::A(2), &[1, 0]).unwrap().weight_conditions().unwrap();
        assert_eq!(w.on_theta, 1);
        assert!(!w.one_on_every_positive_coroot);
        assert_eq!(w.roots_off_one, vec![vec![0, 1]]);
    }

    #[test]
    fn swapped_triple_rejected() {
        let err = analyze_sl2_embedding(&a1_bundle(), 1, 0, 2).unwrap_err();
        assert!(matches!(err, AlgebroidError::NotSl2Triple(_)));
    }

    #[test]
    fn scaled_identity_is_hom_and_swap_is_not() {
        let v = a1_bundle();
        let two = ExactMatrix::identity(2).scale(&ExactScalar::from_int(2));
        let tau = module_isomorphism_map(&v, &v, &two).unwrap();
        let id = module_isomorphism_map(&v, &v, &ExactMatrix::identity(2)).unwrap();
        assert!(check_hom(&id, &v, &v).unwrap().holds());
        assert!(check_hom(&tau, &v, &v).unwrap().holds());
        let swap = ExactMatrix::from_ints(&[&[0, 1], &[1, 0]]);
        let tau = module_isomorphism_map(&v, &v, &swap).unwrap();
        assert!(!check_hom(&tau, &v, &v).unwrap().holds());
    }

    #[test]
    fn off_block_map_rejected() {
        let v = a1_bundle();
        let mut tau = ExactMatrix::identity(8);
        tau.set(3, 0, ExactScalar::one());
        assert_eq!(check_hom(&tau, &v, &v), Err(AlgebroidError::ImageNotContained));
    }

    #[test]
    fn kernel_report_for_local_algebra() {
        let v = construct_bg(&trivial_module_input(CartanType::A(1), 1).unwrap()).unwrap();
        let rep = ker_partial_report(&v).unwrap();
        assert!(rep.kernel_is_unit_line && rep.kernel_contains_idempotents);
        assert!(rep.kernel_is_subalgebra && rep.b_acts_trivially_on_kernel && rep.image_is_kernel_module);
        let mut bad = v.clone();
        bad.a_mul.set(1, 1, unit_svec(1));
        assert_eq!(ker_partial_report(&bad), Err(AlgebroidError::IdempotentEnumerationUnsupported));
    }
}
