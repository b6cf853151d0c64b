use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use algebroid_forge::algebroid::{check_vertex_algebroid, construct_blambda, AlgebroidDocument, VertexAlgebroid};
use algebroid_forge::conformal::measure_central_charge;
use algebroid_forge::liealg::CartanType;
use algebroid_forge::va::{borcherds_check, SaturationConfig, VertexAlgebra};

type Outcome<T> = Result<T, String>;

fn bundle(cartan_type: &str, lambda: &[i64]) -> Outcome<VertexAlgebroid> {
    let t: CartanType = cartan_type.parse().map_err(|e| format!("{e}"))?;
    construct_blambda(t, lambda).map_err(|e| e.to_string())
}

fn build(b: &VertexAlgebroid, max_degree: u32, quotient: bool) -> Outcome<VertexAlgebra> {
    let cfg = SaturationConfig { max_degree, ..Default::default() };
    let va = if quotient { VertexAlgebra::simple(b, cfg) } else { VertexAlgebra::enveloping(b, cfg) };
    va.map_err(|e| e.to_string())
}

fn construct_json(cartan_type: &str, lambda: &[i64]) -> Outcome<String> {
    let b = bundle(cartan_type, lambda)?;
    let criterion = b.criterion(None);
    serde_json::to_string(&AlgebroidDocument::new(b, criterion)).map_err(|e| e.to_string())
}

fn check_json(document: &str) -> Outcome<String> {
    let doc: AlgebroidDocument = serde_json::from_str(document).map_err(|e| e.to_string())?;
    serde_json::to_string(&check_vertex_algebroid(&doc.bundle)).map_err(|e| e.to_string())
}

fn graded_dims(cartan_type: &str, lambda: &[i64], max_degree: u32, quotient: bool) -> Outcome<Vec<usize>> {
    Ok(build(&bundle(cartan_type, lambda)?, max_degree, quotient)?.space.dims())
}

fn charge(cartan_type: &str, lambda: &[i64], max_degree: u32) -> Outcome<Option<String>> {
    let mut va = build(&bundle(cartan_type, lambda)?, max_degree, true)?;
    let c = measure_central_charge(&mut va).map_err(|e| e.to_string())?;
    Ok(c.map(|c| c.to_string()))
}

fn borcherds_json(cartan_type: &str, lambda: &[i64], samples: usize, seed: u64, max_degree: u32) -> Outcome<String> {
    let mut va = build(&bundle(cartan_type, lambda)?, max_degree, true)?;
    let rep = borcherds_check(&mut va, samples, seed).map_err(|e| e.to_string())?;
    serde_json::to_string(&rep).map_err(|e| e.to_string())
}

fn py<T>(r: Outcome<T>) -> PyResult<T> {
    r.map_err(PyValueError::new_err)
}

/// Bundle document for B_λ as JSON, including its criterion report.
#[pyfunction]
fn construct(cartan_type: &str, lam: Vec<i64>) -> PyResult<String> {
    py(construct_json(cartan_type, &lam))
}

/// Axiom report for a bundle document, as JSON.
#[pyfunction]
fn check(document: &str) -> PyResult<String> {
    py(check_json(document))
}

/// Graded dimensions of V_B, or of its simple quotient.
#[pyfunction]
#[pyo3(signature = (cartan_type, lam, max_degree = 3, quotient = true))]
fn dims(cartan_type: &str, lam: Vec<i64>, max_degree: u32, quotient: bool) -> PyResult<Vec<usize>> {
    py(graded_dims(cartan_type, &lam, max_degree, quotient))
}

/// Central charge of the Sugawara vector as a fraction string.
#[pyfunction]
#[pyo3(signature = (cartan_type, lam, max_degree = 2))]
fn central_charge(cartan_type: &str, lam: Vec<i64>, max_degree: u32) -> PyResult<Option<String>> {
    py(charge(cartan_type, &lam, max_degree))
}

/// Seeded Borcherds report on the simple quotient, as JSON.
#[pyfunction]
#[pyo3(signature = (cartan_type, lam, samples = 100, seed = 42, max_degree = 3))]
fn borcherds(cartan_type: &str, lam: Vec<i64>, samples: usize, seed: u64, max_degree: u32) -> PyResult<String> {
    py(borcherds_json(cartan_type, &lam, samples, seed, max_degree))
}

#[pymodule]
fn algebroid_forge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SCHEMA_VERSION", algebroid_forge::SCHEMA_VERSION)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(dims, m)?)?;
    m.add_function(wrap_pyfunction!(central_charge, m)?)?;
    m.add_function(wrap_pyfunction!(borcherds, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn document_round_trips_through_check() {
        let doc = construct_json("A1", &[1]).unwrap();
        let rep: serde_json::Value = serde_json::from_str(&check_json(&doc).unwrap()).unwrap();
        assert_eq!(rep["formulations_agree"], true);
    }

    #[test]
    fn quotient_dims_and_charge() {
        assert_eq!(graded_dims("A1", &[1], 3, true).unwrap(), vec![3, 5, 10, 15]);
        assert_eq!(charge("A1", &[1], 2).unwrap().as_deref(), Some("1"));
    }

    #[test]
    fn bad_type_is_an_error() {
        assert!(construct_json("Q7", &[1]).is_err());
        assert!(check_json("{").is_err());
    }
}
