//! Python bindings for the zetaforest pipeline.
//!
//! Exposes the main types (`Forest`, `Cone`, `MzvCombination`) and the
//! Mordell-Tornheim and numeric entry points. Errors surface as
//! `ValueError` with the library's diagnostic message (including the
//! machine-readable reason codes such as `NOT_POSET_COMPATIBLE`).

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use zetaforest::forests::{
    branched_binarize, linear_extension_count, parse_nat_forest, render_forest,
};
use zetaforest::mordell_tornheim::MtIndex;
use zetaforest::numeric;
use zetaforest::words::Composition;

fn value_error(e: zetaforest::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn composition(index: Vec<u32>) -> PyResult<Composition> {
    Composition::new(index).map_err(value_error)
}

fn mt_index(args: Vec<u32>, s: u32) -> PyResult<MtIndex> {
    MtIndex::new(args, s).map_err(value_error)
}

/// A decorated rooted forest over positive integers, held canonically.
#[pyclass(module = "zetaforest_py", skip_from_py_object)]
#[derive(Clone)]
struct Forest {
    inner: zetaforest::forests::NatForest,
}

#[pymethods]
impl Forest {
    /// Parse the forest grammar, e.g. "2(1,1)" or "2(1);3".
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Forest {
            inner: parse_nat_forest(text).map_err(value_error)?,
        })
    }

    fn __str__(&self) -> String {
        render_forest(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Forest({:?})", render_forest(&self.inner))
    }

    fn __eq__(&self, other: &Forest) -> bool {
        self.inner == other.inner
    }

    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    /// Sum of the decorations (the weight of the reduction).
    fn weight(&self) -> u32 {
        self.inner.decorations().iter().sum()
    }

    fn is_convergent(&self) -> bool {
        zetaforest::forests::is_convergent_nat(&self.inner)
    }

    /// The {x,y}-forest obtained by branched binarisation, as text.
    fn binarized(&self) -> String {
        render_forest(&branched_binarize(&self.inner))
    }

    /// Number of linear extensions of the binarized forest (the coefficient
    /// mass of the reduction).
    fn linear_extensions(&self) -> String {
        linear_extension_count(&branched_binarize(&self.inner)).to_string()
    }

    /// Exact reduction to an MZV combination.
    fn reduce(&self) -> PyResult<MzvCombination> {
        Ok(MzvCombination {
            inner: zetaforest::reduction::reduce_forest(&self.inner).map_err(value_error)?,
        })
    }

    /// The path-matrix cone of this forest.
    fn to_cone(&self) -> Cone {
        Cone {
            inner: zetaforest::cones::forest_to_cone(&self.inner),
        }
    }

    /// Truncated tree-series value: returns (value, tail_estimate).
    fn tzv(&self, n: usize) -> PyResult<(f64, f64)> {
        let r = numeric::tzv_numeric(&self.inner, n).map_err(value_error)?;
        Ok((r.value, r.tail_estimate))
    }
}

/// A decorated cone: square integer matrix plus one exponent per row.
#[pyclass(module = "zetaforest_py", skip_from_py_object)]
#[derive(Clone)]
struct Cone {
    inner: zetaforest::cones::Cone,
}

#[pymethods]
impl Cone {
    #[new]
    fn new(matrix: Vec<Vec<i64>>, exponents: Vec<u32>) -> PyResult<Self> {
        Ok(Cone {
            inner: zetaforest::cones::Cone::new(matrix, exponents).map_err(value_error)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Cone {
            inner: serde_json::from_str(text)
                .map_err(|e| PyValueError::new_err(format!("invalid cone JSON: {e}")))?,
        })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("cones serialize")
    }

    fn __repr__(&self) -> String {
        format!("Cone.from_json({:?})", self.to_json())
    }

    fn __eq__(&self, other: &Cone) -> bool {
        self.inner == other.inner
    }

    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn matrix(&self) -> Vec<Vec<i64>> {
        self.inner.matrix().to_vec()
    }

    fn exponents(&self) -> Vec<u32> {
        self.inner.exponents().to_vec()
    }

    fn is_unimodular(&self) -> bool {
        self.inner.is_unimodular()
    }

    fn is_tree_like(&self) -> bool {
        self.inner.is_tree_like()
    }

    /// None when tree-like, otherwise the failing clause (e.g.
    /// "NOT_POSET_COMPATIBLE: ...").
    fn tree_like_reason(&self) -> Option<String> {
        self.inner.tree_like_verdict().err().map(|e| e.to_string())
    }

    /// Hasse-diagram incidence matrix of the row poset.
    fn second_matrix(&self) -> PyResult<Vec<Vec<u8>>> {
        Ok(self
            .inner
            .second_representing_matrix()
            .map_err(value_error)?
            .into_iter()
            .map(|row| row.into_iter().map(u8::from).collect())
            .collect())
    }

    /// Column relabeling to the poset's path matrix, when one exists.
    fn align(&self) -> PyResult<Option<Cone>> {
        Ok(self
            .inner
            .align_columns()
            .map_err(value_error)?
            .map(|inner| Cone { inner }))
    }

    fn to_forest(&self) -> PyResult<Forest> {
        Ok(Forest {
            inner: self.inner.to_forest().map_err(value_error)?,
        })
    }

    /// Exact reduction to an MZV combination.
    #[pyo3(signature = (align = false))]
    fn reduce(&self, align: bool) -> PyResult<MzvCombination> {
        Ok(MzvCombination {
            inner: zetaforest::reduction::reduce_cone(&self.inner, align).map_err(value_error)?,
        })
    }

    /// Truncated conical-series value: returns (value, tail_estimate).
    fn czv(&self, n: usize) -> PyResult<(f64, f64)> {
        let r = numeric::czv_numeric(&self.inner, n).map_err(value_error)?;
        Ok((r.value, r.tail_estimate))
    }
}

/// An exact rational combination of convergent MZV indices.
#[pyclass(module = "zetaforest_py", skip_from_py_object)]
#[derive(Clone)]
struct MzvCombination {
    inner: zetaforest::reduction::MzvCombination,
}

#[pymethods]
impl MzvCombination {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!(
            "MzvCombination.from_json({:?})",
            self.inner.to_json_string()
        )
    }

    fn __eq__(&self, other: &MzvCombination) -> bool {
        self.inner == other.inner
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(MzvCombination {
            inner: zetaforest::reduction::MzvCombination::from_json_str(text)
                .map_err(value_error)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json_string()
    }

    /// List of (index, coefficient) pairs; coefficients are exact decimal
    /// strings ("p/q" when not integer).
    fn terms(&self) -> Vec<(Vec<u32>, String)> {
        self.inner
            .iter()
            .map(|(c, v)| {
                (
                    c.parts().to_vec(),
                    zetaforest::reduction::coefficient_string(v),
                )
            })
            .collect()
    }

    /// (weight, depth, coefficient_sum) of the combination.
    fn stats(&self) -> PyResult<(u32, usize, String)> {
        let s = self.inner.stats().map_err(value_error)?;
        Ok((s.weight, s.depth, s.coefficient_sum.to_string()))
    }

    /// Truncated numerical value: returns (value, tail_estimate).
    #[pyo3(signature = (n = numeric::DEFAULT_MZV_TRUNCATION))]
    fn numeric(&self, n: usize) -> PyResult<(f64, f64)> {
        let r = numeric::combination_numeric(&self.inner, n).map_err(value_error)?;
        Ok((r.value, r.tail_estimate))
    }
}

/// Reduce MT(args | s) by the decomposition recursion.
#[pyfunction]
fn mt_reduce(args: Vec<u32>, s: u32) -> PyResult<MzvCombination> {
    Ok(MzvCombination {
        inner: zetaforest::mordell_tornheim::mt_reduce(&mt_index(args, s)?).map_err(value_error)?,
    })
}

/// Reduce MT(args | s) by the closed form; equals `mt_reduce` exactly.
#[pyfunction]
fn mt_closed_form(args: Vec<u32>, s: u32) -> PyResult<MzvCombination> {
    Ok(MzvCombination {
        inner: zetaforest::mordell_tornheim::mt_closed_form(&mt_index(args, s)?)
            .map_err(value_error)?,
    })
}

/// Sufficient convergence test for MT(args | s).
#[pyfunction]
fn mt_convergent(args: Vec<u32>, s: u32) -> PyResult<bool> {
    Ok(zetaforest::mordell_tornheim::mt_convergent(&mt_index(
        args, s,
    )?))
}

/// Direct truncated Mordell-Tornheim sum (depth <= 3): (value, tail).
#[pyfunction]
fn mt_numeric(args: Vec<u32>, s: u32, n: usize) -> PyResult<(f64, f64)> {
    let r = numeric::mt_numeric(&mt_index(args, s)?, n).map_err(value_error)?;
    Ok((r.value, r.tail_estimate))
}

/// Truncated MZV partial sum for a convergent index: (value, tail).
#[pyfunction]
#[pyo3(signature = (index, n = numeric::DEFAULT_MZV_TRUNCATION))]
fn mzv_numeric(index: Vec<u32>, n: usize) -> PyResult<(f64, f64)> {
    let r = numeric::mzv_numeric(&composition(index)?, n).map_err(value_error)?;
    Ok((r.value, r.tail_estimate))
}

/// Shuffle product of two words over {x, y}: list of (word, coefficient).
#[pyfunction]
fn shuffle(w1: &str, w2: &str) -> PyResult<Vec<(String, String)>> {
    let w1: zetaforest::words::Word = w1.parse().map_err(value_error)?;
    let w2: zetaforest::words::Word = w2.parse().map_err(value_error)?;
    Ok(zetaforest::words::shuffle(&w1, &w2)
        .iter()
        .map(|(w, c)| (w.to_string(), c.to_string()))
        .collect())
}

/// Compare a combination's numeric value against a target value with tail:
/// returns (pass, gap, budget) for `gap <= tol + both tails`.
#[pyfunction]
fn cross_check(
    combination: &MzvCombination,
    target_value: f64,
    target_tail: f64,
    tol: f64,
) -> PyResult<(bool, f64, f64)> {
    let target = numeric::NumericResult {
        value: target_value,
        tail_estimate: target_tail,
        truncation: 0,
    };
    let report = numeric::cross_check(&combination.inner, &target, tol).map_err(value_error)?;
    Ok((report.pass, report.gap, report.budget))
}

#[pymodule]
fn zetaforest_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Forest>()?;
    m.add_class::<Cone>()?;
    m.add_class::<MzvCombination>()?;
    m.add_function(wrap_pyfunction!(mt_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(mt_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(mt_convergent, m)?)?;
    m.add_function(wrap_pyfunction!(mt_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(mzv_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(shuffle, m)?)?;
    m.add_function(wrap_pyfunction!(cross_check, m)?)?;
    Ok(())
}
