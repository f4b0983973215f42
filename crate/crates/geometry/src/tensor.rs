use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// Rounding floor for angle comparisons, in radians.
pub const ANGLE_EPS: f64 = 1e-12;

/// Tangent vector `v_t ∂_t + v_x ∂_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub t: f64,
    pub x: f64,
}

/// Covector `ω_t dt + ω_x dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Covector {
    pub t: f64,
    pub x: f64,
}

impl TangentVector {
    pub const fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    /// Unit direction at angle `θ` measured from `∂_x` towards `∂_t`.
    pub fn from_angle(theta: f64) -> Self {
        Self { t: theta.sin(), x: theta.cos() }
    }

    pub fn angle(&self) -> f64 {
        self.t.atan2(self.x)
    }

    pub fn is_zero(&self) -> bool {
        self.t == 0.0 && self.x == 0.0
    }
}

impl std::ops::Neg for TangentVector {
    type Output = Self;

    fn neg(self) -> Self {
        Self { t: -self.t, x: -self.x }
    }
}

impl Covector {
    pub const fn new(t: f64, x: f64) -> Self {
        Self { t, x }
    }

    pub fn apply(&self, v: TangentVector) -> f64 {
        self.t * v.t + self.x * v.x
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let w = a - TAU * (a / TAU).round();
    if w <= -PI {
        w + TAU
    } else {
        w
    }
}

/// Closed arc of directions `center ± half_width`, with `half_width < π/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub center: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn opposite(&self) -> Self {
        Self { center: wrap_angle(self.center + PI), half_width: self.half_width }
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        wrap_angle(theta - self.center).abs() <= self.half_width + ANGLE_EPS
    }

    /// Closed-arc inclusion `self ⊂ other`.
    pub fn within(&self, other: &Arc) -> bool {
        wrap_angle(self.center - other.center).abs() + self.half_width <= other.half_width + ANGLE_EPS
    }

    /// Overlap of the open arcs, if nonempty.
    pub fn overlap(&self, other: &Arc) -> Option<Arc> {
        let d = wrap_angle(other.center - self.center);
        if d.abs() >= self.half_width + other.half_width {
            return None;
        }
        let lo = (-self.half_width).max(d - other.half_width);
        let hi = self.half_width.min(d + other.half_width);
        Some(Arc { center: wrap_angle(self.center + 0.5 * (lo + hi)), half_width: 0.5 * (hi - lo) })
    }
}

/// Symmetric 2×2 tensor with components in the `(t, x)` basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymTensor2 {
    pub tt: f64,
    pub tx: f64,
    pub xx: f64,
}

impl SymTensor2 {
    pub const fn new(tt: f64, tx: f64, xx: f64) -> Self {
        Self { tt, tx, xx }
    }

    pub const fn minkowski() -> Self {
        Self { tt: -1.0, tx: 0.0, xx: 1.0 }
    }

    pub fn det(&self) -> f64 {
        self.tt * self.xx - self.tx * self.tx
    }

    pub fn eval(&self, u: TangentVector, v: TangentVector) -> f64 {
        self.tt * u.t * v.t + self.tx * (u.t * v.x + u.x * v.t) + self.xx * u.x * v.x
    }

    pub fn norm2(&self, v: TangentVector) -> f64 {
        self.eval(v, v)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { tt: s * self.tt, tx: s * self.tx, xx: s * self.xx }
    }

    pub fn lerp(&self, other: &Self, s: f64) -> Self {
        Self {
            tt: (1.0 - s) * self.tt + s * other.tt,
            tx: (1.0 - s) * self.tx + s * other.tx,
            xx: (1.0 - s) * self.xx + s * other.xx,
        }
    }

    /// Componentwise inverse via the adjugate.
    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self { tt: self.xx / d, tx: -self.tx / d, xx: self.tt / d }
    }

    pub fn flat(&self, v: TangentVector) -> Covector {
        Covector { t: self.tt * v.t + self.tx * v.x, x: self.tx * v.t + self.xx * v.x }
    }

    /// Raises an index; `self` must be the inverse metric.
    pub fn raise(&self, w: Covector) -> TangentVector {
        TangentVector { t: self.tt * w.t + self.tx * w.x, x: self.tx * w.t + self.xx * w.x }
    }

    /// One of the two timelike arcs of a Lorentzian form, in angle
    /// coordinates where `v(θ) = (sin θ, cos θ)`.
    ///
    /// Writes `g(v(θ), v(θ)) = A + R cos(2θ − φ)`; the form is negative
    /// on `|2θ − φ − π| < π − arccos(−A/R)`.
    pub fn timelike_arc(&self) -> Arc {
        let a = 0.5 * (self.tt + self.xx);
        let b = 0.5 * (self.xx - self.tt);
        let c = self.tx;
        let r = b.hypot(c);
        let phi = c.atan2(b);
        let alpha = (-a / r).clamp(-1.0, 1.0).acos();
        Arc { center: wrap_angle(0.5 * (phi + PI)), half_width: 0.5 * (PI - alpha) }
    }

    /// Timelike arc on the side of `future`.
    pub fn future_arc(&self, future: TangentVector) -> Arc {
        let arc = self.timelike_arc();
        if self.eval(future, TangentVector::from_angle(arc.center)) < 0.0 {
            arc
        } else {
            arc.opposite()
        }
    }

    /// Lorentzian form whose null directions are `θa`, `θb` and which is
    /// timelike at `inside`, normalized to `|det| = 1`.
    pub fn from_null_angles(theta_a: f64, theta_b: f64, inside: f64) -> Self {
        let n1 = TangentVector::from_angle(theta_a);
        let n2 = TangentVector::from_angle(theta_b);
        // ℓ_i annihilates n_i; ℓ1 ⊗ ℓ2 symmetrized vanishes on both.
        let l1 = Covector::new(-n1.x, n1.t);
        let l2 = Covector::new(-n2.x, n2.t);
        let mut q = Self::new(l1.t * l2.t, 0.5 * (l1.t * l2.x + l1.x * l2.t), l1.x * l2.x);
        if q.norm2(TangentVector::from_angle(inside)) > 0.0 {
            q = q.scale(-1.0);
        }
        q.scale(1.0 / q.det().abs().sqrt())
    }

    /// Lorentzian form with the given timelike arc.
    pub fn from_arc(arc: Arc) -> Self {
        Self::from_null_angles(arc.lo(), arc.hi(), arc.center)
    }
}
