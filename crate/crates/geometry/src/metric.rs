use std::io::Write;

use moellerlab_lattice::{Range, ScalarField, SpacetimeGrid};
use serde::Serialize;

use crate::tensor::{Arc, Covector, SymTensor2, TangentVector};
use crate::GeometryError;

/// Metrics with `|det g|` below this are rejected as degenerate.
pub const MIN_ABS_DET: f64 = 1e-10;

/// Per-point tangent vectors on a lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: SpacetimeGrid,
    values: Vec<TangentVector>,
}

impl VectorField {
    pub fn new(grid: &SpacetimeGrid, values: Vec<TangentVector>) -> Result<Self, GeometryError> {
        if values.len() != grid.points() {
            return Err(GeometryError::ShapeMismatch { expected: grid.points(), found: values.len() });
        }
        Ok(Self { grid: *grid, values })
    }

    pub fn constant(grid: &SpacetimeGrid, v: TangentVector) -> Self {
        Self { grid: *grid, values: vec![v; grid.points()] }
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[TangentVector] {
        &self.values
    }

    pub fn get(&self, n: usize, j: usize) -> TangentVector {
        self.values[n * self.grid.nx + j]
    }
}

/// Causal character of a tangent vector relative to a time-oriented metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CausalClass {
    Spacelike,
    TimelikeFuture,
    TimelikePast,
    NullFuture,
    NullPast,
}

/// Where the future cone sits relative to the coordinate axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FutureSide {
    /// Inside `v_t > 0`; both null slopes finite.
    ForwardInTime,
    /// Inside `v_t < 0`.
    BackwardInTime,
    /// Reaches the spatial axis; the slope interval passes through infinity.
    AroundSpatialAxis,
}

/// Null slopes `dx/dt` of the cone boundary at one point, plus the
/// angular description of its future half.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeData {
    pub n: usize,
    pub j: usize,
    pub slope_lo: f64,
    pub slope_hi: f64,
    pub future: FutureSide,
    pub future_arc: Arc,
}

/// Lorentzian metric in orthogonal splitting form `−β² dt² + h dx²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitForm {
    pub lapse: ScalarField,
    pub spatial: ScalarField,
}

/// Time-oriented Lorentzian metric on every lattice point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricField {
    grid: SpacetimeGrid,
    components: Vec<SymTensor2>,
    orientation: Vec<TangentVector>,
}

fn validate(n: usize, j: usize, g: &SymTensor2, x: TangentVector) -> Result<(), GeometryError> {
    let det = g.det();
    if !det.is_finite() || det.abs() < MIN_ABS_DET {
        return Err(GeometryError::Degenerate { n, j, det });
    }
    if det > 0.0 {
        return Err(GeometryError::NotLorentzian { n, j, det });
    }
    if !(g.norm2(x) < 0.0) {
        return Err(GeometryError::OrientationNotTimelike { n, j });
    }
    Ok(())
}

impl MetricField {
    pub fn new(
        grid: &SpacetimeGrid,
        components: Vec<SymTensor2>,
        orientation: Vec<TangentVector>,
    ) -> Result<Self, GeometryError> {
        let np = grid.points();
        for len in [components.len(), orientation.len()] {
            if len != np {
                return Err(GeometryError::ShapeMismatch { expected: np, found: len });
            }
        }
        for (p, (g, x)) in components.iter().zip(&orientation).enumerate() {
            validate(p / grid.nx, p % grid.nx, g, *x)?;
        }
        Ok(Self { grid: *grid, components, orientation })
    }

    pub fn from_fn(
        grid: &SpacetimeGrid,
        mut f: impl FnMut(f64, f64) -> (SymTensor2, TangentVector),
    ) -> Result<Self, GeometryError> {
        let mut comps = Vec::with_capacity(grid.points());
        let mut orient = Vec::with_capacity(grid.points());
        for n in 0..grid.nt {
            for j in 0..grid.nx {
                let (g, x) = f(grid.t(n), grid.x(j));
                comps.push(g);
                orient.push(x);
            }
        }
        Self::new(grid, comps, orient)
    }

    pub fn constant(grid: &SpacetimeGrid, g: SymTensor2, future: TangentVector) -> Result<Self, GeometryError> {
        Self::new(grid, vec![g; grid.points()], vec![future; grid.points()])
    }

    /// `−dt² + dx²` oriented by `∂_t`.
    pub fn minkowski(grid: &SpacetimeGrid) -> Self {
        Self::constant(grid, SymTensor2::minkowski(), TangentVector::new(1.0, 0.0)).expect("minkowski is valid")
    }

    /// `−β² dt² + h dx²` oriented by `∂_t`.
    pub fn from_split(lapse: &ScalarField, spatial: &ScalarField) -> Result<Self, GeometryError> {
        let grid = *lapse.grid();
        if !grid.same_lattice(spatial.grid()) {
            return Err(GeometryError::GridMismatch);
        }
        let comps = lapse
            .values()
            .iter()
            .zip(spatial.values())
            .map(|(&b, &h)| SymTensor2::new(-b * b, 0.0, h))
            .collect();
        Self::new(&grid, comps, vec![TangentVector::new(1.0, 0.0); grid.points()])
    }

    pub fn grid(&self) -> &SpacetimeGrid {
        &self.grid
    }

    pub fn components(&self) -> &[SymTensor2] {
        &self.components
    }

    pub fn orientation(&self) -> &[TangentVector] {
        &self.orientation
    }

    pub fn at(&self, n: usize, j: usize) -> SymTensor2 {
        self.components[n * self.grid.nx + j]
    }

    pub fn future_at(&self, n: usize, j: usize) -> TangentVector {
        self.orientation[n * self.grid.nx + j]
    }

    pub fn future_arc(&self, p: usize) -> Arc {
        self.components[p].future_arc(self.orientation[p])
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.grid.same_lattice(&other.grid)
    }

    /// Same cones, opposite time orientation.
    pub fn time_reversed(&self) -> Self {
        Self {
            grid: self.grid,
            components: self.components.clone(),
            orientation: self.orientation.iter().map(|&x| -x).collect(),
        }
    }

    /// Same orientation, a new vector field `X` (must be timelike).
    pub fn with_orientation(&self, future: &VectorField) -> Result<Self, GeometryError> {
        Self::new(&self.grid, self.components.clone(), future.values.clone())
    }

    /// `μ·g` for a positive scalar `μ`.
    pub fn conformal(&self, factor: &ScalarField) -> Result<Self, GeometryError> {
        if !self.grid.same_lattice(factor.grid()) {
            return Err(GeometryError::GridMismatch);
        }
        let comps = self.components.iter().zip(factor.values()).map(|(g, &m)| g.scale(m)).collect();
        Self::new(&self.grid, comps, self.orientation.clone())
    }

    /// Lapse and spatial metric when `g_tx ≡ 0`, `g_tt < 0 < g_xx`.
    pub fn orthogonal_split(&self) -> Result<SplitForm, GeometryError> {
        let nx = self.grid.nx;
        for (p, g) in self.components.iter().enumerate() {
            if g.tx != 0.0 || !(g.tt < 0.0) || !(g.xx > 0.0) {
                return Err(GeometryError::NotSplitting { n: p / nx, j: p % nx });
            }
        }
        let lapse = self.components.iter().map(|g| (-g.tt).sqrt()).collect();
        let spatial = self.components.iter().map(|g| g.xx).collect();
        let grid = self.grid.with_rank(1)?;
        Ok(SplitForm {
            lapse: ScalarField::new(&grid, lapse, Range::Positive)?,
            spatial: ScalarField::new(&grid, spatial, Range::Positive)?,
        })
    }

    /// `√|det g|`.
    pub fn volume_density(&self) -> Result<ScalarField, GeometryError> {
        let grid = self.grid.with_rank(1)?;
        let v = self.components.iter().map(|g| g.det().abs().sqrt()).collect();
        Ok(ScalarField::new(&grid, v, Range::Positive)?)
    }

    /// Largest `|dx/dt|` over all null directions; infinite if some cone
    /// reaches the spatial axis.
    pub fn max_abs_slope(&self) -> f64 {
        (0..self.grid.points())
            .map(|p| {
                let c = cone_data(self, p / self.grid.nx, p % self.grid.nx);
                c.slope_lo.abs().max(c.slope_hi.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Whether constant-`t` slices are spacelike everywhere (`g^{tt} < 0`).
    pub fn slices_spacelike(&self) -> bool {
        self.components.iter().all(|g| g.inverse().tt < 0.0)
    }

    /// One CSV row per point: `n, j, t, x, g_tt, g_tx, g_xx, future_t, future_x`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), GeometryError> {
        #[derive(Serialize)]
        struct Row {
            n: usize,
            j: usize,
            t: f64,
            x: f64,
            g_tt: f64,
            g_tx: f64,
            g_xx: f64,
            future_t: f64,
            future_x: f64,
        }
        let mut w = csv::Writer::from_writer(out);
        for n in 0..self.grid.nt {
            for j in 0..self.grid.nx {
                let g = self.at(n, j);
                let x = self.future_at(n, j);
                w.serialize(Row {
                    n,
                    j,
                    t: self.grid.t(n),
                    x: self.grid.x(j),
                    g_tt: g.tt,
                    g_tx: g.tx,
                    g_xx: g.xx,
                    future_t: x.t,
                    future_x: x.x,
                })
                .map_err(|e| GeometryError::Io(e.to_string()))?;
            }
        }
        w.flush().map_err(|e| GeometryError::Io(e.to_string()))
    }
}

/// Classifies `v` at `(n, j)`; exact float comparisons, zero is spacelike.
pub fn classify_vector(g: &MetricField, n: usize, j: usize, v: TangentVector) -> CausalClass {
    let m = g.at(n, j);
    let q = m.norm2(v);
    if v.is_zero() || q > 0.0 {
        return CausalClass::Spacelike;
    }
    let future = m.eval(g.future_at(n, j), v) < 0.0;
    match (q < 0.0, future) {
        (true, true) => CausalClass::TimelikeFuture,
        (true, false) => CausalClass::TimelikePast,
        (false, true) => CausalClass::NullFuture,
        (false, false) => CausalClass::NullPast,
    }
}

pub fn musical_flat(g: &MetricField, n: usize, j: usize, v: TangentVector) -> Covector {
    g.at(n, j).flat(v)
}

pub fn musical_sharp(g: &MetricField, n: usize, j: usize, w: Covector) -> TangentVector {
    g.at(n, j).inverse().raise(w)
}

/// `g♯` as a Lorentzian field on covectors, oriented by `X♭`.
pub fn inverse_metric(g: &MetricField) -> MetricField {
    MetricField {
        grid: g.grid,
        components: g.components.iter().map(SymTensor2::inverse).collect(),
        orientation: g
            .components
            .iter()
            .zip(&g.orientation)
            .map(|(m, x)| {
                let w = m.flat(*x);
                TangentVector::new(w.t, w.x)
            })
            .collect(),
    }
}

fn cot(theta: f64) -> f64 {
    let s = theta.sin();
    if s == 0.0 {
        if theta.cos() > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    } else {
        theta.cos() / s
    }
}

pub fn cone_data(g: &MetricField, n: usize, j: usize) -> ConeData {
    let arc = g.future_arc(n * g.grid.nx + j);
    let (a, b) = (cot(arc.lo()), cot(arc.hi()));
    let lo = arc.lo().sin();
    let hi = arc.hi().sin();
    let future = if lo > 0.0 && hi > 0.0 && arc.center.sin() > 0.0 {
        FutureSide::ForwardInTime
    } else if lo < 0.0 && hi < 0.0 && arc.center.sin() < 0.0 {
        FutureSide::BackwardInTime
    } else {
        FutureSide::AroundSpatialAxis
    };
    ConeData { n, j, slope_lo: a.min(b), slope_hi: a.max(b), future, future_arc: arc }
}
