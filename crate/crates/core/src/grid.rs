//! Structured finite-difference grids over masked domains.
//!
//! A [`Grid`] is a tensor lattice on a bounding box in 1-3 dimensions with a
//! node mask.  Nodes are `Interior` (the PDE unknowns), `Boundary` (Dirichlet
//! data lives here) or `Outside` (ignored).  For non-rectangular domains the
//! boundary is the outermost layer of nodes satisfying the domain predicate,
//! so boundary data are taken at node coordinates (first-order geometric
//! snap).  Interior nodes always have all `2 n` face neighbours inside, which
//! keeps every stencil below well defined without ghost nodes.
//!
//! All traversals run in row-major node order, so reductions (integrals,
//! norms) are bitwise deterministic.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::sync::Arc;

/// Shape of the masked domain carved out of the bounding box.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DomainKind {
    Rectangle,
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Annulus {
        center: Vec<f64>,
        r_inner: f64,
        r_outer: f64,
    },
    /// Intersection of a ball with the half-space `x[axis] >= center[axis]`.
    HalfBall {
        center: Vec<f64>,
        radius: f64,
        axis: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Interior,
    Boundary,
    Outside,
}

/// A structured grid with node mask.
#[derive(Debug)]
pub struct Grid {
    dim: usize,
    bbox: Vec<[f64; 2]>,
    shape: Vec<usize>,
    h: Vec<f64>,
    strides: Vec<usize>,
    mask: Vec<NodeKind>,
    domain: DomainKind,
    n_interior: usize,
    n_boundary: usize,
}

/// Builds a grid and classifies its nodes.
///
/// Requires a nondegenerate box and at least three nodes per axis (so that a
/// grid has at least one interior candidate per axis).
pub fn build_grid(domain: DomainKind, bbox: &[[f64; 2]], shape: &[usize]) -> Result<Arc<Grid>> {
    let dim = bbox.len();
    if dim == 0 || dim > 3 {
        return Err(Error::InvalidArgument(format!(
            "grids support 1 to 3 dimensions, got {dim}"
        )));
    }
    if shape.len() != dim {
        return Err(Error::DimensionMismatch(format!(
            "bbox has {dim} axes but shape has {}",
            shape.len()
        )));
    }
    for (a, (b, n)) in bbox.iter().zip(shape).enumerate() {
        if !(b[1] > b[0]) || !b[0].is_finite() || !b[1].is_finite() {
            return Err(Error::DegenerateBbox(format!(
                "axis {a}: [{}, {}]",
                b[0], b[1]
            )));
        }
        if *n < 3 {
            return Err(Error::InvalidArgument(format!(
                "axis {a}: shape must be at least 3, got {n}"
            )));
        }
    }
    validate_domain(&domain, dim)?;

    let h: Vec<f64> = bbox
        .iter()
        .zip(shape)
        .map(|(b, n)| (b[1] - b[0]) / (*n as f64 - 1.0))
        .collect();
    let mut strides = vec![1usize; dim];
    for a in (0..dim.saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * shape[a + 1];
    }
    let len: usize = shape.iter().product();

    let mut grid = Grid {
        dim,
        bbox: bbox.to_vec(),
        shape: shape.to_vec(),
        h,
        strides,
        mask: vec![NodeKind::Outside; len],
        domain,
        n_interior: 0,
        n_boundary: 0,
    };

    let inside: Vec<bool> = (0..len)
        .map(|idx| domain_contains(&grid.domain, &grid.coords(idx)[..dim]))
        .collect();
    for idx in 0..len {
        if !inside[idx] {
            continue;
        }
        let mut all_neighbors_inside = true;
        'axes: for a in 0..dim {
            for dir in [-1i64, 1] {
                match grid.neighbor(idx, a, dir) {
                    Some(nb) if inside[nb] => {}
                    _ => {
                        all_neighbors_inside = false;
                        break 'axes;
                    }
                }
            }
        }
        grid.mask[idx] = if all_neighbors_inside {
            NodeKind::Interior
        } else {
            NodeKind::Boundary
        };
    }
    grid.n_interior = grid.mask.iter().filter(|m| **m == NodeKind::Interior).count();
    grid.n_boundary = grid.mask.iter().filter(|m| **m == NodeKind::Boundary).count();
    Ok(Arc::new(grid))
}

fn validate_domain(domain: &DomainKind, dim: usize) -> Result<()> {
    let check_center = |c: &Vec<f64>| -> Result<()> {
        if c.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "domain center has {} components on a {dim}-d grid",
                c.len()
            )));
        }
        Ok(())
    };
    match domain {
        DomainKind::Rectangle => Ok(()),
        DomainKind::Ball { center, radius } => {
            check_center(center)?;
            if !(*radius > 0.0) {
                return Err(Error::InvalidArgument("ball radius must be positive".into()));
            }
            Ok(())
        }
        DomainKind::Annulus {
            center,
            r_inner,
            r_outer,
        } => {
            check_center(center)?;
            if !(*r_inner > 0.0 && r_outer > r_inner) {
                return Err(Error::InvalidArgument(
                    "annulus radii must satisfy 0 < r_inner < r_outer".into(),
                ));
            }
            Ok(())
        }
        DomainKind::HalfBall {
            center,
            radius,
            axis,
        } => {
            check_center(center)?;
            if !(*radius > 0.0) {
                return Err(Error::InvalidArgument("ball radius must be positive".into()));
            }
            if *axis >= dim {
                return Err(Error::InvalidArgument(format!(
                    "half-ball axis {axis} out of range for dimension {dim}"
                )));
            }
            Ok(())
        }
    }
}

fn dist(x: &[f64], c: &[f64]) -> f64 {
    x.iter()
        .zip(c)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn domain_contains(domain: &DomainKind, x: &[f64]) -> bool {
    // small slack keeps nodes that lie exactly on a sphere inside
    match domain {
        DomainKind::Rectangle => true,
        DomainKind::Ball { center, radius } => {
            dist(x, center) <= radius + 1e-12 * (1.0 + radius)
        }
        DomainKind::Annulus {
            center,
            r_inner,
            r_outer,
        } => {
            let d = dist(x, center);
            d >= r_inner - 1e-12 * (1.0 + r_inner) && d <= r_outer + 1e-12 * (1.0 + r_outer)
        }
        DomainKind::HalfBall {
            center,
            radius,
            axis,
        } => {
            dist(x, center) <= radius + 1e-12 * (1.0 + radius)
                && x[*axis] >= center[*axis] - 1e-12 * (1.0 + radius)
        }
    }
}

impl Grid {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn bbox(&self) -> &[[f64; 2]] {
        &self.bbox
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn h_max(&self) -> f64 {
        self.h.iter().cloned().fold(0.0, f64::max)
    }

    pub fn domain(&self) -> &DomainKind {
        &self.domain
    }

    /// Total number of lattice nodes (including outside ones).
    pub fn len(&self) -> usize {
        self.mask.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }

    pub fn mask(&self, idx: usize) -> NodeKind {
        self.mask[idx]
    }

    pub fn is_interior(&self, idx: usize) -> bool {
        self.mask[idx] == NodeKind::Interior
    }

    pub fn is_inside(&self, idx: usize) -> bool {
        self.mask[idx] != NodeKind::Outside
    }

    pub fn interior_count(&self) -> usize {
        self.n_interior
    }

    pub fn boundary_count(&self) -> usize {
        self.n_boundary
    }

    /// Multi-index of a node, padded with zeros beyond `dim`.
    pub fn unravel(&self, idx: usize) -> [usize; 3] {
        let mut out = [0usize; 3];
        let mut rest = idx;
        for a in 0..self.dim {
            out[a] = rest / self.strides[a];
            rest %= self.strides[a];
        }
        out
    }

    pub fn ravel(&self, ijk: &[usize]) -> Result<usize> {
        if ijk.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "index has {} components on a {}-d grid",
                ijk.len(),
                self.dim
            )));
        }
        let mut idx = 0;
        for a in 0..self.dim {
            if ijk[a] >= self.shape[a] {
                return Err(Error::InvalidArgument(format!(
                    "index {} out of range on axis {a} (shape {})",
                    ijk[a], self.shape[a]
                )));
            }
            idx += ijk[a] * self.strides[a];
        }
        Ok(idx)
    }

    /// Physical coordinates of a node, padded with zeros beyond `dim`.
    pub fn coords(&self, idx: usize) -> [f64; 3] {
        let ijk = self.unravel(idx);
        let mut out = [0.0f64; 3];
        for a in 0..self.dim {
            out[a] = self.bbox[a][0] + ijk[a] as f64 * self.h[a];
        }
        out
    }

    /// Face neighbour along `axis` in direction `dir` (+1/-1), if on-grid.
    pub fn neighbor(&self, idx: usize, axis: usize, dir: i64) -> Option<usize> {
        let ijk = self.unravel(idx);
        let i = ijk[axis] as i64 + dir;
        if i < 0 || i >= self.shape[axis] as i64 {
            None
        } else {
            Some((idx as i64 + dir * self.strides[axis] as i64) as usize)
        }
    }

    /// Indices of all interior nodes in row-major order.
    pub fn interior_nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|i| self.is_interior(*i)).collect()
    }

    /// Nearest inside node to a physical point (used to snap anchors).
    pub fn nearest_inside_node(&self, x: &[f64]) -> Result<usize> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "point has {} components on a {}-d grid",
                x.len(),
                self.dim
            )));
        }
        let mut ijk = vec![0usize; self.dim];
        for a in 0..self.dim {
            let i = ((x[a] - self.bbox[a][0]) / self.h[a]).round();
            ijk[a] = i.clamp(0.0, (self.shape[a] - 1) as f64) as usize;
        }
        let idx = self.ravel(&ijk)?;
        if self.is_inside(idx) {
            return Ok(idx);
        }
        // fall back to a deterministic scan
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for idx in 0..self.len() {
            if !self.is_inside(idx) {
                continue;
            }
            let c = self.coords(idx);
            let d = dist(&c[..self.dim], x);
            if d < best_d {
                best_d = d;
                best = Some(idx);
            }
        }
        best.ok_or_else(|| Error::InvalidArgument("grid has no inside nodes".into()))
    }
}

/// A scalar field sampled at grid nodes.  Values at `Outside` nodes are
/// carried as zeros and never consulted.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Arc<Grid>) -> Self {
        ScalarField {
            grid: Arc::clone(grid),
            values: vec![0.0; grid.len()],
        }
    }

    /// Evaluates `f` at the coordinates of every inside node.
    pub fn from_fn<F: Fn(&[f64]) -> f64>(grid: &Arc<Grid>, f: F) -> Self {
        let mut field = ScalarField::zeros(grid);
        for idx in 0..grid.len() {
            if grid.is_inside(idx) {
                let c = grid.coords(idx);
                field.values[idx] = f(&c[..grid.dim()]);
            }
        }
        field
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, idx: usize) -> f64 {
        self.values[idx]
    }

    pub fn set(&mut self, idx: usize, v: f64) {
        self.values[idx] = v;
    }

    /// Minimum and maximum over inside nodes.
    pub fn inside_min_max(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for idx in 0..self.grid.len() {
            if self.grid.is_inside(idx) {
                lo = lo.min(self.values[idx]);
                hi = hi.max(self.values[idx]);
            }
        }
        (lo, hi)
    }

    pub fn interior_max(&self) -> f64 {
        let mut hi = f64::NEG_INFINITY;
        for idx in 0..self.grid.len() {
            if self.grid.is_interior(idx) {
                hi = hi.max(self.values[idx]);
            }
        }
        hi
    }

    pub fn boundary_max(&self) -> f64 {
        let mut hi = f64::NEG_INFINITY;
        for idx in 0..self.grid.len() {
            if self.grid.mask(idx) == NodeKind::Boundary {
                hi = hi.max(self.values[idx]);
            }
        }
        hi
    }

    pub fn max_abs_interior(&self) -> f64 {
        let mut hi = 0.0f64;
        for idx in 0..self.grid.len() {
            if self.grid.is_interior(idx) {
                hi = hi.max(self.values[idx].abs());
            }
        }
        hi
    }
}

fn assert_same_grid(a: &ScalarField, b: &ScalarField) {
    debug_assert!(
        Arc::ptr_eq(a.grid(), b.grid()),
        "fields live on different grids"
    );
}

/// Maximum norm of the difference of two fields over inside nodes.
pub fn max_diff_inside(a: &ScalarField, b: &ScalarField) -> f64 {
    assert_same_grid(a, b);
    let mut hi = 0.0f64;
    for idx in 0..a.grid.len() {
        if a.grid.is_inside(idx) {
            hi = hi.max((a.values[idx] - b.values[idx]).abs());
        }
    }
    hi
}

/// Five/seven-point discrete Laplacian.  Defined on interior nodes (zero
/// elsewhere); every interior stencil only touches inside nodes.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let grid = f.grid();
    let mut out = ScalarField::zeros(grid);
    for idx in 0..grid.len() {
        if !grid.is_interior(idx) {
            continue;
        }
        let mut acc = 0.0;
        for a in 0..grid.dim() {
            let hm = grid.h()[a];
            let m = grid.neighbor(idx, a, -1).expect("interior");
            let p = grid.neighbor(idx, a, 1).expect("interior");
            acc += (f.values[m] - 2.0 * f.values[idx] + f.values[p]) / (hm * hm);
        }
        out.values[idx] = acc;
    }
    out
}

/// Discrete gradient: central differences at interior nodes, one-sided
/// (second-order where two inward neighbours exist, first-order otherwise)
/// at boundary nodes.  Component fields are zero outside the mask.
pub fn gradient(f: &ScalarField) -> Vec<ScalarField> {
    let grid = f.grid();
    let mut out: Vec<ScalarField> = (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect();
    for idx in 0..grid.len() {
        if !grid.is_inside(idx) {
            continue;
        }
        for a in 0..grid.dim() {
            let h = grid.h()[a];
            let m = grid.neighbor(idx, a, -1).filter(|i| grid.is_inside(*i));
            let p = grid.neighbor(idx, a, 1).filter(|i| grid.is_inside(*i));
            let v = f.values[idx];
            out[a].values[idx] = match (m, p) {
                (Some(m), Some(p)) => (f.values[p] - f.values[m]) / (2.0 * h),
                (None, Some(p)) => {
                    match grid.neighbor(p, a, 1).filter(|i| grid.is_inside(*i)) {
                        Some(p2) => (-3.0 * v + 4.0 * f.values[p] - f.values[p2]) / (2.0 * h),
                        None => (f.values[p] - v) / h,
                    }
                }
                (Some(m), None) => {
                    match grid.neighbor(m, a, -1).filter(|i| grid.is_inside(*i)) {
                        Some(m2) => (3.0 * v - 4.0 * f.values[m] + f.values[m2]) / (2.0 * h),
                        None => (v - f.values[m]) / h,
                    }
                }
                (None, None) => 0.0,
            };
        }
    }
    out
}

/// Trapezoid weight of a node: product over axes of `h_a`, halved at each
/// axis where the node ends its run of inside nodes.  Exact for multilinear
/// integrands on rectangles.
fn node_weight(grid: &Grid, idx: usize) -> f64 {
    let mut w = 1.0;
    for a in 0..grid.dim() {
        let before = grid.neighbor(idx, a, -1).map(|i| grid.is_inside(i)).unwrap_or(false);
        let after = grid.neighbor(idx, a, 1).map(|i| grid.is_inside(i)).unwrap_or(false);
        let mut wa = grid.h()[a];
        if !before || !after {
            wa *= 0.5;
        }
        w *= wa;
    }
    w
}

/// Composite trapezoid integral over the masked domain.
pub fn integrate(f: &ScalarField) -> f64 {
    let grid = f.grid();
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        if grid.is_inside(idx) {
            acc += node_weight(grid, idx) * f.values[idx];
        }
    }
    acc
}

/// Trapezoid integral restricted to the ball `|x - center| <= radius`.
pub fn integrate_ball(f: &ScalarField, center: &[f64], radius: f64) -> Result<f64> {
    let grid = f.grid();
    if center.len() != grid.dim() {
        return Err(Error::DimensionMismatch(format!(
            "ball center has {} components on a {}-d grid",
            center.len(),
            grid.dim()
        )));
    }
    let mut acc = 0.0;
    for idx in 0..grid.len() {
        if !grid.is_inside(idx) {
            continue;
        }
        let c = grid.coords(idx);
        if dist(&c[..grid.dim()], center) <= radius + 1e-12 * (1.0 + radius) {
            acc += node_weight(grid, idx) * f.values[idx];
        }
    }
    Ok(acc)
}

/// Radial piecewise-linear cutoff: `1` on `B_rho(center)`, `0` outside
/// `B_{2 rho}(center)`, linear ramp in between.  The doubled ball must fit
/// inside the bounding box.
pub fn cutoff_eta(grid: &Arc<Grid>, rho: f64, center: &[f64]) -> Result<ScalarField> {
    if center.len() != grid.dim() {
        return Err(Error::DimensionMismatch(format!(
            "cutoff center has {} components on a {}-d grid",
            center.len(),
            grid.dim()
        )));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument("cutoff radius must be positive".into()));
    }
    for a in 0..grid.dim() {
        let slack = 1e-12 * (1.0 + rho);
        if center[a] - 2.0 * rho < grid.bbox()[a][0] - slack
            || center[a] + 2.0 * rho > grid.bbox()[a][1] + slack
        {
            return Err(Error::BallExceedsBbox {
                radius: 2.0 * rho,
                center: center.to_vec(),
            });
        }
    }
    Ok(ScalarField::from_fn(grid, |x| {
        let d = dist(x, center);
        if d <= rho {
            1.0
        } else if d >= 2.0 * rho {
            0.0
        } else {
            (2.0 * rho - d) / rho
        }
    }))
}

/// Writes a field as CSV with header `i,j,k,x1,x2,x3,value`; outside nodes
/// are omitted and missing axes are reported as zeros.
pub fn write_csv<W: Write>(f: &ScalarField, mut w: W) -> Result<()> {
    let grid = f.grid();
    writeln!(w, "i,j,k,x1,x2,x3,value")?;
    for idx in 0..grid.len() {
        if !grid.is_inside(idx) {
            continue;
        }
        let ijk = grid.unravel(idx);
        let c = grid.coords(idx);
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            ijk[0], ijk[1], ijk[2], c[0], c[1], c[2], f.values[idx]
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::observed_order;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_square(n: usize) -> Arc<Grid> {
        build_grid(DomainKind::Rectangle, &[[0.0, 1.0], [0.0, 1.0]], &[n, n]).unwrap()
    }

    #[test]
    fn rectangle_mask_counts() {
        let g = unit_square(5);
        assert_eq!(g.interior_count(), 9);
        assert_eq!(g.boundary_count(), 16);
    }

    #[test]
    fn ball_mask_classification() {
        let g = build_grid(
            DomainKind::Ball {
                center: vec![0.0, 0.0],
                radius: 1.0,
            },
            &[[-1.0, 1.0], [-1.0, 1.0]],
            &[5, 5],
        )
        .unwrap();
        // corners lie outside, the centre is interior, the axis extremes are
        // boundary (their outward neighbour leaves the grid)
        assert_eq!(g.mask(g.ravel(&[0, 0]).unwrap()), NodeKind::Outside);
        assert_eq!(g.mask(g.ravel(&[2, 2]).unwrap()), NodeKind::Interior);
        assert_eq!(g.mask(g.ravel(&[0, 2]).unwrap()), NodeKind::Boundary);
        assert_eq!(g.mask(g.ravel(&[2, 4]).unwrap()), NodeKind::Boundary);
        // interior nodes keep all face neighbours inside
        for idx in g.interior_nodes() {
            for a in 0..2 {
                for dir in [-1, 1] {
                    let nb = g.neighbor(idx, a, dir).unwrap();
                    assert!(g.is_inside(nb));
                }
            }
        }
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(build_grid(DomainKind::Rectangle, &[[0.0, 1.0], [1.0, 1.0]], &[5, 5]).is_err());
        assert!(build_grid(DomainKind::Rectangle, &[[0.0, 1.0], [0.0, 1.0]], &[5, 2]).is_err());
        assert!(build_grid(
            DomainKind::Ball {
                center: vec![0.0],
                radius: 1.0
            },
            &[[-1.0, 1.0], [-1.0, 1.0]],
            &[5, 5],
        )
        .is_err());
    }

    #[test]
    fn laplacian_exact_on_quadratics() {
        let g = unit_square(9);
        let f = ScalarField::from_fn(&g, |x| x[0] * x[0]);
        let lap = laplacian(&f);
        for idx in g.interior_nodes() {
            assert_relative_eq!(lap.get(idx), 2.0, epsilon = 1e-11);
        }
    }

    #[test]
    fn gradient_exact_on_linear_everywhere() {
        let g = unit_square(7);
        let f = ScalarField::from_fn(&g, |x| 3.0 * x[0] - 2.0 * x[1] + 1.0);
        let grad = gradient(&f);
        for idx in 0..g.len() {
            if g.is_inside(idx) {
                assert_relative_eq!(grad[0].get(idx), 3.0, epsilon = 1e-12);
                assert_relative_eq!(grad[1].get(idx), -2.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn one_sided_gradient_is_second_order_at_boundary() {
        let g = unit_square(17);
        let f = ScalarField::from_fn(&g, |x| x[0] * x[0] + 0.5 * x[1] * x[1]);
        let grad = gradient(&f);
        let idx = g.ravel(&[0, 8]).unwrap(); // x = 0 boundary
        assert_relative_eq!(grad[0].get(idx), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn laplacian_second_order_convergence() {
        let mut hs = Vec::new();
        let mut errs = Vec::new();
        for n in [17usize, 33, 65] {
            let g = unit_square(n);
            let f = ScalarField::from_fn(&g, |x| (PI * x[0]).sin() * (PI * x[1]).sin());
            let lap = laplacian(&f);
            let mut err = 0.0f64;
            for idx in g.interior_nodes() {
                let c = g.coords(idx);
                let exact = -2.0 * PI * PI * (PI * c[0]).sin() * (PI * c[1]).sin();
                err = err.max((lap.get(idx) - exact).abs());
            }
            hs.push(g.h_max());
            errs.push(err);
        }
        let order = observed_order(&hs, &errs);
        assert!((order - 2.0).abs() <= 0.1, "observed order {order}");
    }

    #[test]
    fn integrate_examples() {
        let g = unit_square(5);
        let f = ScalarField::from_fn(&g, |x| x[0]);
        assert_relative_eq!(integrate(&f), 0.5, epsilon = 1e-14);

        let gb = build_grid(
            DomainKind::Ball {
                center: vec![0.0, 0.0],
                radius: 1.0,
            },
            &[[-1.0, 1.0], [-1.0, 1.0]],
            &[65, 65],
        )
        .unwrap();
        let one = ScalarField::from_fn(&gb, |_| 1.0);
        let area = integrate(&one);
        assert!(
            (area - PI).abs() / PI <= 0.02,
            "ball area {area} vs pi, relative error {}",
            (area - PI).abs() / PI
        );
    }

    #[test]
    fn integrate_ball_restriction() {
        let g = unit_square(33);
        let one = ScalarField::from_fn(&g, |_| 1.0);
        let v = integrate_ball(&one, &[0.5, 0.5], 0.25).unwrap();
        let exact = PI * 0.25 * 0.25;
        assert!((v - exact).abs() <= 0.05 * exact + 2.0 * g.h_max() * g.h_max());
    }

    #[test]
    fn cutoff_profile_values() {
        let g = build_grid(DomainKind::Rectangle, &[[-1.0, 1.0], [-1.0, 1.0]], &[81, 81]).unwrap();
        let eta = cutoff_eta(&g, 0.4, &[0.0, 0.0]).unwrap();
        let at = |x: f64, y: f64| {
            let idx = g.nearest_inside_node(&[x, y]).unwrap();
            eta.get(idx)
        };
        assert_eq!(at(0.0, 0.0), 1.0);
        assert_eq!(at(0.95, 0.0), 0.0);
        assert_relative_eq!(at(0.6, 0.0), 0.5, epsilon = 1e-12);
        assert!(cutoff_eta(&g, 0.6, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn csv_dump_shape() {
        let g = build_grid(
            DomainKind::Ball {
                center: vec![0.0, 0.0],
                radius: 1.0,
            },
            &[[-1.0, 1.0], [-1.0, 1.0]],
            &[5, 5],
        )
        .unwrap();
        let f = ScalarField::from_fn(&g, |x| x[0] + x[1]);
        let mut buf = Vec::new();
        write_csv(&f, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "i,j,k,x1,x2,x3,value");
        // 25 nodes, 4 corners and 8 near-corner nodes outside -> 13 rows
        let rows: Vec<&str> = lines.collect();
        assert_eq!(rows.len(), g.interior_count() + g.boundary_count());
        assert!(rows.iter().all(|r| r.split(',').count() == 7));
    }

    #[test]
    fn anchor_snap_prefers_inside_nodes() {
        let g = build_grid(
            DomainKind::Annulus {
                center: vec![0.0, 0.0],
                r_inner: 0.5,
                r_outer: 1.0,
            },
            &[[-1.0, 1.0], [-1.0, 1.0]],
            &[33, 33],
        )
        .unwrap();
        let idx = g.nearest_inside_node(&[0.0, 0.0]).unwrap();
        assert!(g.is_inside(idx));
        let c = g.coords(idx);
        let d = (c[0] * c[0] + c[1] * c[1]).sqrt();
        assert!(d >= 0.5 - 1e-9);
    }
}
