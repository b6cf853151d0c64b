use super::{AlgebroidError, LieEmbedding, VertexAlgebroid};
use crate::algebra::{AlgebraPresentation, Bilinear};
use crate::liealg::{chevalley_basis, highest_weight_module, CartanType, InvariantForm, LieAlgebra, RootData, WeightModule};
use crate::linalg::{axpy, unit_svec, ExactMatrix, SVec, Subspace};
use crate::scalar::ExactScalar;

/// Input data for the bundle `B_g = g + ∂(A)` over `A = C1 + N`.
#[derive(Debug, Clone)]
pub struct BgInput {
    pub algebra: AlgebraPresentation,
    pub unit: usize,
    /// Basis indices of A spanning N.
    pub n_indices: Vec<usize>,
    pub g: LieAlgebra,
    pub root_data: Option<RootData>,
    pub form: InvariantForm,
    /// Action of each basis element of g on A.
    pub action: Vec<ExactMatrix>,
    /// Map from A to the derivative space, one column per basis element of A.
    pub d_map: ExactMatrix,
    pub highest_weight: Option<Vec<i64>>,
}

impl BgInput {
    /// `A = C1 + N` with square-zero N carrying the given module structure.
    pub fn from_module(
        g: LieAlgebra,
        root_data: Option<RootData>,
        form: InvariantForm,
        module: &WeightModule,
        highest_weight: Option<Vec<i64>>,
    ) -> Self {
        let n = module.dim();
        let mut names = vec!["1̂".to_string()];
        names.extend(module.basis.iter().cloned());
        let mut product = Bilinear::zero(n + 1, n + 1, n + 1);
        for j in 0..=n {
            product.set(0, j, unit_svec(j));
            product.set(j, 0, unit_svec(j));
        }
        let action = module
            .action
            .iter()
            .map(|m| {
                let mut full = ExactMatrix::zero(n + 1, n + 1);
                for (r, row) in m.sparse_rows().iter().enumerate() {
                    for (c, v) in row {
                        full.set(r + 1, c + 1, v.clone());
                    }
                }
                full
            })
            .collect();
        let mut d_map = ExactMatrix::zero(n, n + 1);
        for k in 0..n {
            d_map.set(k, k + 1, ExactScalar::one());
        }
        BgInput {
            algebra: AlgebraPresentation::new(names, product),
            unit: 0,
            n_indices: (1..=n).collect(),
            g,
            root_data,
            form,
            action,
            d_map,
            highest_weight,
        }
    }
}

/// Input with a trivially acted-upon square-zero N of the given dimension.
pub fn trivial_module_input(cartan_type: CartanType, n_dim: usize) -> Result<BgInput, AlgebroidError> {
    let (g, rd, form) = chevalley_basis(cartan_type)?;
    let mut module = WeightModule::trivial(&g, rd.rank, n_dim);
    module.basis = (0..n_dim).map(|i| format!("a{i}")).collect();
    Ok(BgInput::from_module(g, Some(rd), form, &module, None))
}

/// Builds `B_g = g + ∂(A)` with all structure maps.
pub fn construct_bg(input: &BgInput) -> Result<VertexAlgebroid, AlgebroidError> {
    let alg = &input.algebra;
    let na = alg.dim();
    let dg = input.g.dim();
    let nm = |i: usize| alg.basis[i].clone();
    if input.action.len() != dg {
        return Err(AlgebroidError::DimensionMismatch(format!("{} action matrices for dim g = {dg}", input.action.len())));
    }
    if input.d_map.cols() != na || input.action.iter().any(|m| m.rows() != na || m.cols() != na) {
        return Err(AlgebroidError::DimensionMismatch("maps do not match dim A".into()));
    }
    let mut covered: Vec<usize> = input.n_indices.iter().copied().chain([input.unit]).collect();
    covered.sort_unstable();
    if covered != (0..na).collect::<Vec<_>>() {
        return Err(AlgebroidError::DimensionMismatch("unit and N must partition the basis of A".into()));
    }

    for (gi, rho) in input.action.iter().enumerate() {
        let cols: Vec<SVec<usize>> = (0..na).map(|a| rho.column(a)).collect();
        let apply = |v: &SVec<usize>| {
            let mut out = SVec::new();
            for (k, c) in v {
                axpy(&mut out, c, &cols[*k]);
            }
            out
        };
        for a in 0..na {
            for b in 0..na {
                let lhs = apply(alg.mul_basis(a, b));
                let mut rhs = alg.mul(&cols[a], &unit_svec(b));
                axpy(&mut rhs, &ExactScalar::one(), &alg.mul(&unit_svec(a), &cols[b]));
                if lhs != rhs {
                    return Err(AlgebroidError::NotDerivation { g: input.g.basis()[gi].clone(), a: nm(a), b: nm(b) });
                }
            }
        }
    }
    if !input.d_map.column(input.unit).is_empty() {
        return Err(AlgebroidError::UnitNotKilled);
    }
    let dn = Subspace::from_vectors(input.d_map.rows(), input.n_indices.iter().map(|&i| input.d_map.column(i)));
    if dn.dim() != input.n_indices.len() {
        return Err(AlgebroidError::DMapNotInjectiveOnN);
    }
    for &a in &input.n_indices {
        for &b in &input.n_indices {
            if !alg.mul_basis(a, b).is_empty() {
                return Err(AlgebroidError::NSquareNonzero(nm(a), nm(b)));
            }
        }
    }

    // N coordinates: position k of n_indices
    let pos: Vec<Option<usize>> = {
        let mut p = vec![None; na];
        for (k, &i) in input.n_indices.iter().enumerate() {
            p[i] = Some(k);
        }
        p
    };
    let to_n = |v: &SVec<usize>| -> Result<SVec<usize>, AlgebroidError> {
        v.iter().map(|(i, c)| pos[*i].map(|k| (k, c.clone())).ok_or(AlgebroidError::NNotInvariant)).collect()
    };
    let nn = input.n_indices.len();
    let mut n_action = Vec::with_capacity(dg);
    for rho in &input.action {
        let cols = input.n_indices.iter().map(|&i| to_n(&rho.column(i))).collect::<Result<Vec<_>, _>>()?;
        n_action.push(ExactMatrix::from_columns(nn, &cols));
    }

    let nb = dg + nn;
    let d_of = |k: usize| dg + k;
    let shift = |v: &SVec<usize>| -> SVec<usize> { v.iter().map(|(k, c)| (d_of(*k), c.clone())).collect() };
    let mut b_names: Vec<String> = input.g.basis().to_vec();
    b_names.extend(input.n_indices.iter().map(|&i| format!("∂{}", nm(i))));

    let mut bracket = Bilinear::zero(nb, nb, nb);
    let mut pairing = Bilinear::zero(nb, nb, na);
    let mut b_on_a = Bilinear::zero(nb, na, na);
    for i in 0..dg {
        for j in 0..dg {
            bracket.set(i, j, input.g.bracket_basis(i, j).clone());
            let c = input.form.eval_basis(i, j);
            if !c.is_zero() {
                pairing.set(i, j, [(input.unit, c)].into_iter().collect());
            }
        }
        for k in 0..nn {
            let gn = n_action[i].column(k);
            bracket.set(i, d_of(k), shift(&gn));
            let in_a: SVec<usize> = gn.iter().map(|(q, c)| (input.n_indices[*q], c.clone())).collect();
            pairing.set(i, d_of(k), in_a.clone());
            pairing.set(d_of(k), i, in_a);
        }
        for a in 0..na {
            b_on_a.set(i, a, input.action[i].column(a));
        }
    }

    let mut dot = Bilinear::zero(na, nb, nb);
    for j in 0..nb {
        dot.set(input.unit, j, unit_svec(j));
    }
    for (k, &a) in input.n_indices.iter().enumerate() {
        for (i, rho) in n_action.iter().enumerate() {
            dot.set(a, i, shift(&rho.column(k)));
        }
    }

    let mut d_map = ExactMatrix::zero(nb, na);
    for (k, &a) in input.n_indices.iter().enumerate() {
        d_map.set(d_of(k), a, ExactScalar::one());
    }

    let module = WeightModule {
        highest_weight: input.highest_weight.clone().unwrap_or_default(),
        basis: input.n_indices.iter().map(|&i| nm(i)).collect(),
        weights: vec![Vec::new(); nn],
        action: n_action,
    };
    Ok(VertexAlgebroid {
        a_names: alg.basis.clone(),
        b_names,
        unit: input.unit,
        n_indices: input.n_indices.clone(),
        a_mul: alg.product.clone(),
        dot,
        bracket,
        pairing,
        d_map,
        b_on_a,
        lie: Some(LieEmbedding {
            g: input.g.clone(),
            root_data: input.root_data.clone(),
            form: input.form.clone(),
            g_in_b: (0..dg).collect(),
            dn_in_b: (0..nn).map(d_of).collect(),
            module,
            highest_weight: input.highest_weight.clone(),
        }),
    })
}

/// `B_lambda`: the bundle over `A_lambda = C1 + L(lambda)`.
pub fn construct_blambda(cartan_type: CartanType, lambda: &[i64]) -> Result<VertexAlgebroid, AlgebroidError> {
    let (g, rd, form) = chevalley_basis(cartan_type)?;
    let mut module = highest_weight_module(&g, &rd, lambda)?;
    let weights = module.weights.clone();
    if module.basis.iter().any(|n| g.basis().contains(n)) {
        module.basis = (0..module.dim()).map(|j| format!("v{j}")).collect();
    }
    let input = BgInput::from_module(g, Some(rd), form, &module, Some(lambda.to_vec()));
    let mut vab = construct_bg(&input)?;
    if let Some(lie) = vab.lie.as_mut() {
        lie.module.weights = weights;
    }
    Ok(vab)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_lambda_one_dimensions() {
        let vab = construct_blambda(CartanType::A(1), &[1]).unwrap();
        assert_eq!((vab.a_dim(), vab.b_dim()), (3, 5));
        assert_eq!(vab.b_names, ["e", "f", "h", "∂a0", "∂a1"]);
        assert_eq!(vab.image_d().dim(), 2);
        assert_eq!(vab.ker_d().basis_vectors(), vec![unit_svec(0)]);
    }

    #[test]
    fn trivial_n_dimensions() {
        let vab = construct_bg(&trivial_module_input(CartanType::A(1), 1).unwrap()).unwrap();
        assert_eq!((vab.a_dim(), vab.b_dim()), (2, 4));
    }

    #[test]
    fn rejects_non_derivation() {
        let mut input = trivial_module_input(CartanType::A(1), 1).unwrap();
        input.action[0].set(0, 0, ExactScalar::one());
        assert!(matches!(construct_bg(&input), Err(AlgebroidError::NotDerivation { .. })));
    }

    #[test]
    fn rejects_non_injective_d() {
        let mut input = trivial_module_input(CartanType::A(1), 2).unwrap();
        input.d_map = ExactMatrix::from_ints(&[&[0, 1, 1]]);
        assert_eq!(construct_bg(&input), Err(AlgebroidError::DMapNotInjectiveOnN));
    }

    #[test]
    fn rejects_nonzero_square() {
        let mut input = trivial_module_input(CartanType::A(1), 1).unwrap();
        input.algebra.product.set(1, 1, unit_svec(1));
        assert!(matches!(construct_bg(&input), Err(AlgebroidError::NSquareNonzero(..))));
    }

    #[test]
    fn rejects_unit_with_derivative() {
        let mut input = trivial_module_input(CartanType::A(1), 1).unwrap();
        input.d_map = ExactMatrix::from_ints(&[&[1, 1]]);
        assert_eq!(construct_bg(&input), Err(AlgebroidError::UnitNotKilled));
    }
}
