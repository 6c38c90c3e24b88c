//! Python bindings. Points are `(x, y)` tuples of ints; every failure from
//! the core library surfaces as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyType;

use tropfactor::descent::SegmentDecomposer;
use tropfactor::geometry::{self as geo, Direction, LatticePoint};
use tropfactor::maxplus::{self as mp};
use tropfactor::partition::unimodular_triangulation;
use tropfactor::pipeline::{decompose_with, DecompositionReport, VerifyMode};
use tropfactor::signed;

type Point = (i64, i64);

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn pt((x, y): Point) -> LatticePoint {
    LatticePoint::new(x, y)
}

fn tup(p: LatticePoint) -> Point {
    (p.x, p.y)
}

fn mode(name: &str) -> PyResult<VerifyMode> {
    name.parse().map_err(err)
}

/// Convex lattice body: a point, a segment or a polygon.
#[pyclass(module = "tropfactor", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct LatticeBody(geo::LatticeBody);

#[pymethods]
impl LatticeBody {
    /// Body from vertices in convex position (either orientation).
    #[new]
    fn new(vertices: Vec<Point>) -> PyResult<Self> {
        let v: Vec<_> = vertices.into_iter().map(pt).collect();
        geo::LatticeBody::from_vertices(&v).map(Self).map_err(err)
    }

    #[classmethod]
    fn hull(_cls: &Bound<'_, PyType>, points: Vec<Point>) -> PyResult<Self> {
        let v: Vec<_> = points.into_iter().map(pt).collect();
        geo::convex_hull(&v).map(Self).map_err(err)
    }

    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(err)
    }

    #[getter]
    fn vertices(&self) -> Vec<Point> {
        self.0.vertices().iter().copied().map(tup).collect()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind().name()
    }

    fn twice_area(&self) -> i64 {
        geo::twice_area(&self.0)
    }

    fn lattice_points(&self) -> Vec<Point> {
        geo::lattice_points(&self.0).into_iter().map(tup).collect()
    }

    fn contains(&self, p: Point) -> bool {
        self.0.contains(pt(p))
    }

    fn support(&self, d: Point) -> i64 {
        geo::support_vec(&self.0, pt(d))
    }

    fn translate(&self, v: Point) -> Self {
        Self(self.0.translate(pt(v)))
    }

    fn dilate(&self, k: i64) -> PyResult<Self> {
        if k <= 0 {
            return Err(err("positive scaling only"));
        }
        Ok(Self(self.0.dilate(k)))
    }

    /// Minkowski difference, or None when it does not exist.
    fn minkowski_diff(&self, other: &LatticeBody) -> Option<Self> {
        geo::minkowski_diff(&self.0, &other.0).map(Self)
    }

    fn __add__(&self, other: &LatticeBody) -> Self {
        Self(geo::minkowski_sum(&self.0, &other.0))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap()
    }

    fn __repr__(&self) -> String {
        format!("LatticeBody({})", self.0)
    }
}

/// `t + kx·I_x + ky·I_y + Σ k_T·T` over unit triangles `T`.
#[pyclass(module = "tropfactor", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct NormalForm(signed::NormalForm);

#[pymethods]
impl NormalForm {
    #[classmethod]
    fn from_json(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        serde_json::from_str(text).map(Self).map_err(err)
    }

    #[getter]
    fn t(&self) -> Point {
        tup(self.0.t)
    }

    #[getter]
    fn kx(&self) -> i64 {
        self.0.kx
    }

    #[getter]
    fn ky(&self) -> i64 {
        self.0.ky
    }

    /// `[(vertices, k), ...]` in canonical order.
    #[getter]
    fn triangles(&self) -> Vec<(Vec<Point>, i64)> {
        self.0.triangles().map(|(t, k)| (t.vertices().iter().copied().map(tup).collect(), k)).collect()
    }

    fn max_abs_coefficient(&self) -> i64 {
        self.0.max_abs_coefficient()
    }

    /// Exact check by Minkowski sums on both sides.
    fn verify(&self, target: &LatticeBody) -> bool {
        self.0.verify(&target.0)
    }

    /// Signed support sums on sixteen fixed directions.
    fn support_check(&self, target: &LatticeBody) -> bool {
        self.0.support_check(&target.0, &Direction::standard16())
    }

    fn scale(&self, k: i64) -> Self {
        Self(self.0.scale(k))
    }

    fn __add__(&self, other: &NormalForm) -> Self {
        Self(self.0.add(&other.0))
    }

    fn __sub__(&self, other: &NormalForm) -> Self {
        Self(self.0.add(&other.0.negate()))
    }

    fn __neg__(&self) -> Self {
        Self(self.0.negate())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap()
    }

    fn __repr__(&self) -> String {
        format!("NormalForm({})", self.0)
    }
}

#[pyclass(module = "tropfactor", frozen)]
struct Decomposition(DecompositionReport);

#[pymethods]
impl Decomposition {
    #[getter]
    fn input(&self) -> LatticeBody {
        LatticeBody(self.0.input.clone())
    }

    #[getter]
    fn normal_form(&self) -> NormalForm {
        NormalForm(self.0.normal_form.clone())
    }

    #[getter]
    fn cells(&self) -> usize {
        self.0.cells
    }

    #[getter]
    fn dividing(&self) -> usize {
        self.0.dividing
    }

    #[getter]
    fn verified(&self) -> bool {
        self.0.verified
    }

    #[getter]
    fn distinct_triangles(&self) -> usize {
        self.0.stats.distinct_triangles
    }

    fn svg(&self) -> String {
        tropfactor::svg::render_svg(&self.0)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap()
    }
}

/// Max-plus function `max⟨P⟩` given by its term set.
#[pyclass(module = "tropfactor", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct MaxPlusFunction(mp::MaxPlusFunction);

#[pymethods]
impl MaxPlusFunction {
    #[new]
    fn new(terms: Vec<Point>) -> PyResult<Self> {
        mp::MaxPlusFunction::new(terms.into_iter().map(pt)).map(Self).map_err(err)
    }

    #[getter]
    fn terms(&self) -> Vec<Point> {
        self.0.terms().map(tup).collect()
    }

    fn __call__(&self, x: i64, y: i64) -> i64 {
        self.0.evaluate(x, y)
    }

    fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.0.evaluate(x, y)
    }

    fn simplify(&self) -> Self {
        Self(self.0.simplify())
    }

    fn equivalent(&self, other: &MaxPlusFunction) -> bool {
        self.0.equivalent(&other.0)
    }

    fn combine_max(&self, other: &MaxPlusFunction) -> Self {
        Self(self.0.combine_max(&other.0))
    }

    fn combine_sum(&self, other: &MaxPlusFunction) -> Self {
        Self(self.0.combine_sum(&other.0))
    }

    fn hull(&self) -> LatticeBody {
        LatticeBody(self.0.hull())
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap()
    }

    fn __repr__(&self) -> String {
        format!("MaxPlusFunction({})", self.0)
    }
}

/// Parsed max-plus expression.
#[pyclass(module = "tropfactor", frozen)]
struct MaxPlusExpr(mp::MaxPlusExpr);

#[pymethods]
impl MaxPlusExpr {
    fn __call__(&self, x: i64, y: i64) -> i64 {
        self.0.evaluate(x, y)
    }

    fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.0.evaluate(x, y)
    }

    /// `(plus, minus)` with the expression equal to `plus - minus`.
    fn flatten(&self) -> PyResult<(MaxPlusFunction, MaxPlusFunction)> {
        let (p, m) = mp::flatten(&self.0).map_err(err)?;
        Ok((MaxPlusFunction(p), MaxPlusFunction(m)))
    }

    fn as_function(&self) -> Option<MaxPlusFunction> {
        self.0.as_function().map(MaxPlusFunction)
    }

    fn __repr__(&self) -> String {
        format!("MaxPlusExpr({})", self.0)
    }
}

#[pyclass(module = "tropfactor", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct MaxPlusFactorization(mp::MaxPlusFactorization);

#[pymethods]
impl MaxPlusFactorization {
    #[getter]
    fn a0(&self) -> i64 {
        self.0.a0()
    }

    #[getter]
    fn b0(&self) -> i64 {
        self.0.b0()
    }

    #[getter]
    fn kx(&self) -> i64 {
        self.0.kx()
    }

    #[getter]
    fn ky(&self) -> i64 {
        self.0.ky()
    }

    #[getter]
    fn triangles(&self) -> Vec<(Vec<Point>, i64)> {
        NormalForm(self.0.normal_form().clone()).triangles()
    }

    #[getter]
    fn normal_form(&self) -> NormalForm {
        NormalForm(self.0.normal_form().clone())
    }

    fn __call__(&self, x: i64, y: i64) -> i64 {
        self.0.evaluate(x, y)
    }

    fn evaluate(&self, x: i64, y: i64) -> i64 {
        self.0.evaluate(x, y)
    }

    fn to_expression_string(&self) -> String {
        self.0.to_expression_string()
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap()
    }

    fn __repr__(&self) -> String {
        format!("MaxPlusFactorization({})", self.0)
    }
}

#[pyfunction]
#[pyo3(signature = (body, verify = "full"))]
fn decompose(body: &LatticeBody, verify: &str) -> PyResult<Decomposition> {
    decompose_with(&body.0, mode(verify)?, &mut SegmentDecomposer::new()).map(Decomposition).map_err(err)
}

#[pyfunction]
fn decompose_segment(p1: Point, p2: Point) -> PyResult<NormalForm> {
    tropfactor::descent::decompose_segment(pt(p1), pt(p2)).map(NormalForm).map_err(err)
}

/// Partition JSON of the unimodular triangulation.
#[pyfunction]
fn triangulate(body: &LatticeBody) -> PyResult<String> {
    let part = unimodular_triangulation(&body.0).map_err(err)?;
    Ok(serde_json::to_string(&part.to_json()).unwrap())
}

#[pyfunction]
fn parse_expression(src: &str) -> PyResult<MaxPlusExpr> {
    tropfactor::parser::parse_expression(src).map(MaxPlusExpr).map_err(err)
}

#[pyfunction]
fn factorize(f: &MaxPlusFunction) -> PyResult<MaxPlusFactorization> {
    mp::factorize(&f.0).map(MaxPlusFactorization).map_err(err)
}

#[pyfunction]
fn factorize_difference(f: &MaxPlusFunction, g: &MaxPlusFunction) -> PyResult<MaxPlusFactorization> {
    mp::factorize_difference(&f.0, &g.0).map(MaxPlusFactorization).map_err(err)
}

#[pymodule]
#[pyo3(name = "tropfactor")]
fn tropfactor_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<LatticeBody>()?;
    m.add_class::<NormalForm>()?;
    m.add_class::<Decomposition>()?;
    m.add_class::<MaxPlusFunction>()?;
    m.add_class::<MaxPlusExpr>()?;
    m.add_class::<MaxPlusFactorization>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(decompose_segment, m)?)?;
    m.add_function(wrap_pyfunction!(triangulate, m)?)?;
    m.add_function(wrap_pyfunction!(parse_expression, m)?)?;
    m.add_function(wrap_pyfunction!(factorize, m)?)?;
    m.add_function(wrap_pyfunction!(factorize_difference, m)?)?;
    Ok(())
}
