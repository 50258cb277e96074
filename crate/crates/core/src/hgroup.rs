//! Coordinate model of the Heisenberg group `H^m`.
//!
//! Points are `(x, y, t)` with `x, y` in `R^m` and `t` in `R`.  The group law
//!
//! ```text
//! (x, y, t) * (x', y', t') = (x + x', y + y', t + t' - 2 x.y' + 2 y.x')
//! ```
//!
//! is polynomial, the inverse is coordinatewise negation, and the homogeneous
//! structure is carried by the anisotropic dilations
//! `delta_lambda (x, y, t) = (lambda x, lambda y, lambda^2 t)` together with
//! the Koranyi gauge.  The contact form
//! `theta = dt + 2 sum_i (x_i dy_i - y_i dx_i)` annihilates the horizontal
//! left-invariant frame returned by [`left_frame_x`] / [`left_frame_y`].
//!
//! Everything here is exact coordinate arithmetic; the dimension `m` is a
//! runtime value so the same code serves `H^1` (the case used by the curve
//! solvers) and perfunctory higher-dimensional uses.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A point of `H^m` in exponential coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
}

/// A tangent vector at a point, in the coordinate frame `(dx, dy, dt)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub dx: Vec<f64>,
    pub dy: Vec<f64>,
    pub dt: f64,
}

impl Point {
    /// Builds a point, validating dimensions and finiteness.
    pub fn new(x: Vec<f64>, y: Vec<f64>, t: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "x has {} components, y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.is_empty() {
            return Err(Error::InvalidArgument("m must be at least 1".into()));
        }
        if !(x.iter().all(|v| v.is_finite()) && y.iter().all(|v| v.is_finite()) && t.is_finite()) {
            return Err(Error::InvalidArgument("coordinates must be finite".into()));
        }
        Ok(Point { x, y, t })
    }

    /// Convenience constructor for `H^1`.
    pub fn h1(x: f64, y: f64, t: f64) -> Self {
        Point {
            x: vec![x],
            y: vec![y],
            t,
        }
    }

    pub fn m(&self) -> usize {
        self.x.len()
    }

    /// The group identity of the same dimension.
    pub fn identity(m: usize) -> Self {
        Point {
            x: vec![0.0; m],
            y: vec![0.0; m],
            t: 0.0,
        }
    }
}

impl TangentVector {
    pub fn new(dx: Vec<f64>, dy: Vec<f64>, dt: f64) -> Result<Self> {
        if dx.len() != dy.len() {
            return Err(Error::DimensionMismatch(format!(
                "dx has {} components, dy has {}",
                dx.len(),
                dy.len()
            )));
        }
        Ok(TangentVector { dx, dy, dt })
    }

    pub fn m(&self) -> usize {
        self.dx.len()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

/// Group product `p * q`.
pub fn group_mul(p: &Point, q: &Point) -> Result<Point> {
    if p.m() != q.m() {
        return Err(Error::DimensionMismatch(format!(
            "cannot multiply points of dimension {} and {}",
            p.m(),
            q.m()
        )));
    }
    let x = p.x.iter().zip(&q.x).map(|(a, b)| a + b).collect();
    let y = p.y.iter().zip(&q.y).map(|(a, b)| a + b).collect();
    let t = p.t + q.t - 2.0 * dot(&p.x, &q.y) + 2.0 * dot(&p.y, &q.x);
    Ok(Point { x, y, t })
}

/// Group inverse: coordinatewise negation.
pub fn group_inv(p: &Point) -> Point {
    Point {
        x: p.x.iter().map(|v| -v).collect(),
        y: p.y.iter().map(|v| -v).collect(),
        t: -p.t,
    }
}

/// Koranyi gauge `((|x|^2 + |y|^2)^2 + t^2)^(1/4)`.
pub fn koranyi_norm(p: &Point) -> f64 {
    let h = dot(&p.x, &p.x) + dot(&p.y, &p.y);
    (h * h + p.t * p.t).sqrt().sqrt()
}

/// Left-invariant gauge distance `d(p, q) = ||p^{-1} * q||`.
pub fn koranyi_dist(p: &Point, q: &Point) -> Result<f64> {
    Ok(koranyi_norm(&group_mul(&group_inv(p), q)?))
}

/// Anisotropic dilation `delta_lambda`; requires `lambda > 0`.
pub fn dilate(p: &Point, lambda: f64) -> Result<Point> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "dilation factor must be positive and finite, got {lambda}"
        )));
    }
    Ok(Point {
        x: p.x.iter().map(|v| lambda * v).collect(),
        y: p.y.iter().map(|v| lambda * v).collect(),
        t: lambda * lambda * p.t,
    })
}

/// Contact form `theta = dt + 2 sum_i (x_i dy_i - y_i dx_i)` paired with a
/// tangent vector at `p`.
pub fn contact_theta(p: &Point, v: &TangentVector) -> Result<f64> {
    if p.m() != v.m() {
        return Err(Error::DimensionMismatch(format!(
            "point dimension {} vs tangent dimension {}",
            p.m(),
            v.m()
        )));
    }
    Ok(v.dt + 2.0 * (dot(&p.x, &v.dy) - dot(&p.y, &v.dx)))
}

/// The `i`-th horizontal frame vector `X_i = d/dx_i + 2 y_i d/dt` at `p`.
pub fn left_frame_x(p: &Point, i: usize) -> Result<TangentVector> {
    if i >= p.m() {
        return Err(Error::InvalidArgument(format!(
            "frame index {i} out of range for m = {}",
            p.m()
        )));
    }
    let mut dx = vec![0.0; p.m()];
    dx[i] = 1.0;
    Ok(TangentVector {
        dx,
        dy: vec![0.0; p.m()],
        dt: 2.0 * p.y[i],
    })
}

/// The `i`-th horizontal frame vector `Y_i = d/dy_i - 2 x_i d/dt` at `p`.
pub fn left_frame_y(p: &Point, i: usize) -> Result<TangentVector> {
    if i >= p.m() {
        return Err(Error::InvalidArgument(format!(
            "frame index {i} out of range for m = {}",
            p.m()
        )));
    }
    let mut dy = vec![0.0; p.m()];
    dy[i] = 1.0;
    Ok(TangentVector {
        dx: vec![0.0; p.m()],
        dy,
        dt: -2.0 * p.x[i],
    })
}
