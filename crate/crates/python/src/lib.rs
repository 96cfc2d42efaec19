//! Python bindings: `import ifs_affine`.

use pyo3::create_exception;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;

use ::ifs_affine as engine;
use ::ifs_affine::{AffineBasis, AffineMap2, BaryCoord, ChaosParams, Point2, PointSet, VertexId};

create_exception!(ifs_affine, DegenerateBasisError, PyValueError);

type Pair = (f64, f64);
type Triangle = (Pair, Pair, Pair);

fn engine_err(e: engine::Error) -> PyErr {
    match e {
        engine::Error::DegenerateBasis { .. } => DegenerateBasisError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn point_set(points: Vec<Pair>) -> PyResult<PointSet> {
    PointSet::new(points.into_iter().map(Point2::from).collect()).map_err(engine_err)
}

fn pairs(s: &PointSet) -> Vec<Pair> {
    s.iter().map(|p| (p.x, p.y)).collect()
}

fn basis_of(t: Triangle) -> AffineBasis {
    AffineBasis::new(t.0.into(), t.1.into(), t.2.into())
}

fn triangle(b: &AffineBasis) -> Triangle {
    ((b.a.x, b.a.y), (b.b.x, b.b.y), (b.c.x, b.c.y))
}

fn vertex_id(name: &str) -> PyResult<VertexId> {
    name.parse().map_err(PyValueError::new_err)
}

fn params(n_points: usize, seed: u64, burn_in: usize, start: Pair) -> ChaosParams {
    ChaosParams::new(n_points)
        .seed(seed)
        .burn_in(burn_in)
        .start(start.into())
}

/// `x -> A x + b` with `A = [[a11, a12], [a21, a22]]`, `b = (b1, b2)`.
#[pyclass(name = "AffineMap", module = "ifs_affine", frozen, from_py_object)]
#[derive(Clone)]
struct PyAffineMap {
    inner: AffineMap2,
}

#[pymethods]
impl PyAffineMap {
    #[new]
    fn new(a11: f64, a12: f64, a21: f64, a22: f64, b1: f64, b2: f64) -> PyResult<Self> {
        AffineMap2::new(a11, a12, a21, a22, b1, b2)
            .map(|inner| Self { inner })
            .map_err(engine_err)
    }

    #[staticmethod]
    fn identity() -> Self {
        Self {
            inner: AffineMap2::IDENTITY,
        }
    }

    /// `(a11, a12, a21, a22, b1, b2)`.
    #[getter]
    fn coefficients(&self) -> [f64; 6] {
        self.inner.coefficients()
    }

    fn apply(&self, p: Pair) -> Pair {
        let q = self.inner.apply(p.into());
        (q.x, q.y)
    }

    fn determinant(&self) -> f64 {
        self.inner.determinant()
    }

    /// Spectral norm of the linear part.
    fn contractivity(&self) -> f64 {
        self.inner.contractivity()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let c = self.inner.coefficients();
        format!(
            "AffineMap({:?}, {:?}, {:?}, {:?}, {:?}, {:?})",
            c[0], c[1], c[2], c[3], c[4], c[5]
        )
    }
}

#[pyclass(name = "IfsSystem", module = "ifs_affine", frozen, from_py_object)]
#[derive(Clone)]
struct PyIfsSystem {
    inner: engine::IfsSystem,
}

#[pymethods]
impl PyIfsSystem {
    /// Uniform map selection unless `weights` is given.
    #[new]
    #[pyo3(signature = (maps, weights=None))]
    fn new(maps: Vec<PyAffineMap>, weights: Option<Vec<f64>>) -> PyResult<Self> {
        let maps = maps.into_iter().map(|m| m.inner).collect();
        let inner = match weights {
            Some(w) => engine::IfsSystem::with_weights(maps, w),
            None => engine::IfsSystem::new(maps),
        };
        inner.map(|inner| Self { inner }).map_err(engine_err)
    }

    /// Weights proportional to `max(|det A|, 0.01)`.
    #[staticmethod]
    fn with_det_weights(maps: Vec<PyAffineMap>) -> PyResult<Self> {
        engine::IfsSystem::with_det_weights(maps.into_iter().map(|m| m.inner).collect())
            .map(|inner| Self { inner })
            .map_err(engine_err)
    }

    /// One of the bundled systems: `flower`, `maple`, `sierpinski`.
    #[staticmethod]
    fn bundled(name: &str) -> PyResult<Self> {
        let doc = engine::datasets::bundled(name)
            .ok_or_else(|| PyValueError::new_err(format!("no bundled system named {name:?}")))?;
        doc.system().map(|inner| Self { inner }).map_err(engine_err)
    }

    #[getter]
    fn maps(&self) -> Vec<PyAffineMap> {
        self.inner
            .maps()
            .iter()
            .map(|&inner| PyAffineMap { inner })
            .collect()
    }

    #[getter]
    fn weights(&self) -> Option<Vec<f64>> {
        self.inner.weights().map(<[f64]>::to_vec)
    }

    fn contractivity(&self) -> f64 {
        self.inner.contractivity()
    }

    fn is_contractive(&self) -> bool {
        self.inner.is_contractive()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("IfsSystem({} maps)", self.inner.len())
    }
}

/// A parsed IFS code file.
#[pyclass(name = "IfsDocument", module = "ifs_affine", from_py_object)]
#[derive(Clone)]
struct PyIfsDocument {
    inner: engine::IfsDocument,
}

#[pymethods]
impl PyIfsDocument {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[setter]
    fn set_name(&mut self, name: String) {
        self.inner.name = name;
    }

    #[getter]
    fn maps(&self) -> Vec<PyAffineMap> {
        self.inner
            .maps
            .iter()
            .map(|e| PyAffineMap { inner: e.map })
            .collect()
    }

    #[getter]
    fn weights(&self) -> Option<Vec<f64>> {
        self.inner.maps.iter().map(|e| e.weight).collect()
    }

    #[getter]
    fn basis(&self) -> Option<Triangle> {
        self.inner.basis.as_ref().map(triangle)
    }

    /// `(points, burn_in, seed)` from the `@render` line.
    #[getter]
    fn render(&self) -> Option<(usize, usize, u64)> {
        self.inner.render.map(|r| (r.n_points, r.burn_in, r.seed))
    }

    fn system(&self) -> PyResult<PyIfsSystem> {
        self.inner
            .system()
            .map(|inner| PyIfsSystem { inner })
            .map_err(engine_err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

#[pyfunction]
fn parse_ifs(text: &str) -> PyResult<PyIfsDocument> {
    engine::parse_ifs(text)
        .map(|inner| PyIfsDocument { inner })
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyfunction]
fn serialize_ifs(doc: &PyIfsDocument) -> String {
    engine::serialize_ifs(&doc.inner)
}

#[pyfunction]
fn bundled_text(name: &str) -> PyResult<&'static str> {
    engine::datasets::ALL
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| PyValueError::new_err(format!("no bundled system named {name:?}")))
}

#[pyfunction]
#[pyo3(signature = (system, n_points, seed=0, burn_in=engine::DEFAULT_BURN_IN, start=(0.0, 0.0)))]
fn chaos_game(
    py: Python<'_>,
    system: &PyIfsSystem,
    n_points: usize,
    seed: u64,
    burn_in: usize,
    start: Pair,
) -> PyResult<Vec<Pair>> {
    let p = params(n_points, seed, burn_in, start);
    let s = py
        .detach(|| engine::chaos_game(&system.inner, &p))
        .map_err(engine_err)?;
    Ok(pairs(&s))
}

#[pyfunction]
fn hutchinson_step(system: &PyIfsSystem, points: Vec<Pair>) -> PyResult<Vec<Pair>> {
    Ok(pairs(&engine::hutchinson_step(
        &system.inner,
        &point_set(points)?,
    )))
}

#[pyfunction]
fn map_contractivity(map: &PyAffineMap) -> f64 {
    engine::map_contractivity(&map.inner)
}

#[pyfunction]
fn system_contractivity(system: &PyIfsSystem) -> f64 {
    engine::system_contractivity(&system.inner)
}

#[pyfunction]
fn hausdorff_distance(py: Python<'_>, a: Vec<Pair>, b: Vec<Pair>) -> PyResult<f64> {
    let (a, b) = (point_set(a)?, point_set(b)?);
    py.detach(|| engine::hausdorff_distance_indexed(&a, &b))
        .map_err(engine_err)
}

#[pyfunction]
fn basis_determinant(basis: Triangle) -> f64 {
    engine::basis_determinant(&basis_of(basis))
}

#[pyfunction]
fn to_barycentric(basis: Triangle, p: Pair) -> PyResult<(f64, f64, f64)> {
    let q = engine::to_barycentric(&basis_of(basis), p.into()).map_err(engine_err)?;
    Ok((q.a, q.b, q.c))
}

#[pyfunction]
fn from_barycentric(basis: Triangle, q: (f64, f64, f64)) -> PyResult<Pair> {
    let q = BaryCoord::new(q.0, q.1, q.2).map_err(engine_err)?;
    let p = engine::from_barycentric(&basis_of(basis), q);
    Ok((p.x, p.y))
}

/// The affine map carrying `old` onto `new` vertex by vertex.
#[pyfunction]
fn retarget_map(old: Triangle, new: Triangle) -> PyResult<PyAffineMap> {
    engine::retarget_map(&basis_of(old), &basis_of(new))
        .map(|inner| PyAffineMap { inner })
        .map_err(engine_err)
}

#[pyfunction]
fn minimal_canonical_simplex(points: Vec<Pair>) -> PyResult<Triangle> {
    let b = engine::minimal_canonical_simplex(&point_set(points)?).map_err(engine_err)?;
    Ok(triangle(&b))
}

#[pyfunction]
#[pyo3(signature = (system, n_points, seed=0, burn_in=engine::DEFAULT_BURN_IN))]
fn simplex_for_ifs(
    py: Python<'_>,
    system: &PyIfsSystem,
    n_points: usize,
    seed: u64,
    burn_in: usize,
) -> PyResult<Triangle> {
    let p = params(n_points, seed, burn_in, (0.0, 0.0));
    let b = py
        .detach(|| engine::simplex_for_ifs(&system.inner, &p))
        .map_err(engine_err)?;
    Ok(triangle(&b))
}

/// Binary PPM of the points, fitted to the image, with an optional triangle overlay.
#[pyfunction]
#[pyo3(signature = (points, basis=None, width=800, height=800))]
fn render_ppm<'py>(
    py: Python<'py>,
    points: Vec<Pair>,
    basis: Option<Triangle>,
    width: u32,
    height: u32,
) -> PyResult<Bound<'py, PyBytes>> {
    let s = point_set(points)?;
    let basis = basis.map(basis_of);
    let vp = engine::Viewport::fit(&s, basis.as_ref(), width, height);
    Ok(PyBytes::new(
        py,
        &engine::rasterize(&s, basis.as_ref(), &vp).to_ppm(),
    ))
}

/// Snapshot returned by `ModelingSession.get_frame`.
#[pyclass(name = "Frame", module = "ifs_affine", frozen)]
struct PyFrame {
    inner: std::sync::Arc<engine::Frame>,
}

#[pymethods]
impl PyFrame {
    #[getter]
    fn points(&self) -> Vec<Pair> {
        pairs(&self.inner.points)
    }

    /// Interleaved `x0, y0, x1, y1, ...` as little-endian float32 bytes.
    fn points_f32<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        let bytes: Vec<u8> = self
            .inner
            .points
            .to_flat_f32()
            .iter()
            .flat_map(|v| v.to_le_bytes())
            .collect();
        PyBytes::new(py, &bytes)
    }

    #[getter]
    fn basis(&self) -> Triangle {
        triangle(&self.inner.basis)
    }

    #[getter]
    fn det(&self) -> f64 {
        self.inner.telemetry.det
    }

    #[getter]
    fn point_count(&self) -> usize {
        self.inner.telemetry.point_count
    }

    #[getter]
    fn last_update_s(&self) -> f64 {
        self.inner.telemetry.last_update.as_secs_f64()
    }

    #[getter]
    fn contractivity(&self) -> f64 {
        self.inner.telemetry.contractivity
    }

    #[getter]
    fn non_contractive(&self) -> bool {
        self.inner.telemetry.non_contractive
    }

    fn __len__(&self) -> usize {
        self.inner.points.len()
    }

    fn __getitem__(&self, i: usize) -> PyResult<Pair> {
        self.inner
            .points
            .as_slice()
            .get(i)
            .map(|p| (p.x, p.y))
            .ok_or_else(|| PyIndexError::new_err(i))
    }
}

/// A sampled attractor bound to a control triangle. `basis=None` uses the
/// minimal canonical simplex.
#[pyclass(name = "ModelingSession", module = "ifs_affine")]
struct PyModelingSession {
    inner: engine::ModelingSession,
    camera: engine::Viewport,
    size: (u32, u32),
}

#[pymethods]
impl PyModelingSession {
    #[new]
    #[allow(clippy::too_many_arguments)]
    #[pyo3(signature = (system, n_points=100_000, seed=0, burn_in=engine::DEFAULT_BURN_IN, basis=None, width=800, height=800))]
    fn new(
        py: Python<'_>,
        system: PyIfsSystem,
        n_points: usize,
        seed: u64,
        burn_in: usize,
        basis: Option<Triangle>,
        width: u32,
        height: u32,
    ) -> PyResult<Self> {
        let mode = match basis {
            Some(t) => engine::BasisMode::UserTriangle(basis_of(t)),
            None => engine::BasisMode::MinimalSimplex,
        };
        let p = params(n_points, seed, burn_in, (0.0, 0.0));
        let inner = py
            .detach(|| engine::ModelingSession::init(system.inner, p, mode))
            .map_err(engine_err)?;
        let frame = inner.get_frame();
        let camera = engine::Viewport::fit(&frame.points, Some(&frame.basis), width, height);
        Ok(Self {
            inner,
            camera,
            size: (width, height),
        })
    }

    /// Moves vertex `"A"`, `"B"` or `"C"`; raises `DegenerateBasisError`
    /// and keeps the previous state when the triangle would collapse.
    fn move_vertex(&mut self, py: Python<'_>, vertex: &str, x: f64, y: f64) -> PyResult<PyFrame> {
        let v = vertex_id(vertex)?;
        let session = &mut self.inner;
        let inner = py
            .detach(|| session.move_vertex(v, Point2::new(x, y)))
            .map_err(engine_err)?;
        Ok(PyFrame { inner })
    }

    #[pyo3(signature = (x, y, radius))]
    fn hit_test(&self, x: f64, y: f64, radius: f64) -> Option<String> {
        self.inner
            .hit_test(Point2::new(x, y), radius)
            .map(|v| v.to_string())
    }

    fn get_frame(&self) -> PyFrame {
        PyFrame {
            inner: self.inner.get_frame(),
        }
    }

    #[getter]
    fn base_basis(&self) -> Triangle {
        triangle(self.inner.base_basis())
    }

    #[getter]
    fn current_basis(&self) -> Triangle {
        triangle(self.inner.current_basis())
    }

    /// Current frame as PPM, framed by the camera fixed at construction.
    #[pyo3(signature = (overlay=true))]
    fn render_ppm<'py>(&self, py: Python<'py>, overlay: bool) -> Bound<'py, PyBytes> {
        let frame = self.inner.get_frame();
        let image = engine::rasterize(&frame.points, overlay.then_some(&frame.basis), &self.camera);
        debug_assert_eq!((image.width(), image.height()), self.size);
        PyBytes::new(py, &image.to_ppm())
    }

    /// World coordinates of a window position, for mapping clicks.
    fn window_to_world(&self, u: f64, v: f64) -> Pair {
        let p = self.camera.window_to_world(Point2::new(u, v));
        (p.x, p.y)
    }

    fn world_to_window(&self, x: f64, y: f64) -> Pair {
        let p = self.camera.world_to_window(Point2::new(x, y));
        (p.x, p.y)
    }
}

#[pymodule]
#[pyo3(name = "ifs_affine")]
fn ifs_affine_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DegenerateBasisError", m.py().get_type::<DegenerateBasisError>())?;
    m.add("DEFAULT_BURN_IN", engine::DEFAULT_BURN_IN)?;
    m.add_class::<PyAffineMap>()?;
    m.add_class::<PyIfsSystem>()?;
    m.add_class::<PyIfsDocument>()?;
    m.add_class::<PyFrame>()?;
    m.add_class::<PyModelingSession>()?;
    m.add_function(wrap_pyfunction!(parse_ifs, m)?)?;
    m.add_function(wrap_pyfunction!(serialize_ifs, m)?)?;
    m.add_function(wrap_pyfunction!(bundled_text, m)?)?;
    m.add_function(wrap_pyfunction!(chaos_game, m)?)?;
    m.add_function(wrap_pyfunction!(hutchinson_step, m)?)?;
    m.add_function(wrap_pyfunction!(map_contractivity, m)?)?;
    m.add_function(wrap_pyfunction!(system_contractivity, m)?)?;
    m.add_function(wrap_pyfunction!(hausdorff_distance, m)?)?;
    m.add_function(wrap_pyfunction!(basis_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(to_barycentric, m)?)?;
    m.add_function(wrap_pyfunction!(from_barycentric, m)?)?;
    m.add_function(wrap_pyfunction!(retarget_map, m)?)?;
    m.add_function(wrap_pyfunction!(minimal_canonical_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(simplex_for_ifs, m)?)?;
    m.add_function(wrap_pyfunction!(render_ppm, m)?)?;
    Ok(())
}
