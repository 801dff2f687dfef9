//! Discretization of radially symmetric functions on R^N (N = 1..4) and of
//! general functions on a 1-D line.
//!
//! A [`Grid`] stores node coordinates together with composite-trapezoid
//! quadrature weights that carry the full measure, including the radial
//! surface factor `omega_{N-1} r^{N-1}`, so that
//!
//! ```text
//!   ∫_{R^N} f dx  ≈  Σ_i w_i f(r_i)
//! ```
//!
//! for radial `f`. The Dirichlet form `∫ |∇u|²` is evaluated from staggered
//! (interval) differences with the measure sampled at interval midpoints;
//! this makes the form an exact positive-semidefinite quadratic `uᵀA u`,
//! whose induced operator is the conservative finite-volume Laplacian used
//! by the gradient flow. Weight positivity is what the rearrangement
//! invariants below rely on.

use crate::error::{Error, Result};
use std::fmt;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Arc;

/// Domain geometry: radial half-line `[0, R]` in dimension N, or the full
/// line `[-R, R]` (N = 1 only).
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GridKind {
    RadialHalfLine,
    FullLine1D,
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridKind::RadialHalfLine => write!(f, "radial"),
            GridKind::FullLine1D => write!(f, "line"),
        }
    }
}

/// Parameters of a grid; `spacing` is derived.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct GridSpec {
    /// Ambient dimension N in {1, 2, 3, 4}.
    pub dim: u32,
    pub kind: GridKind,
    /// Domain extent R: the domain is `[0, R]` (radial) or `[-R, R]` (line).
    pub extent: f64,
    /// Node count M (at least 16).
    pub nodes: usize,
}

impl GridSpec {
    pub fn radial(dim: u32, extent: f64, nodes: usize) -> Self {
        GridSpec { dim, kind: GridKind::RadialHalfLine, extent, nodes }
    }

    pub fn line(extent: f64, nodes: usize) -> Self {
        GridSpec { dim: 1, kind: GridKind::FullLine1D, extent, nodes }
    }

    /// Node spacing: `R/(M-1)` radial, `2R/(M-1)` line.
    pub fn spacing(&self) -> f64 {
        let span = match self.kind {
            GridKind::RadialHalfLine => self.extent,
            GridKind::FullLine1D => 2.0 * self.extent,
        };
        span / (self.nodes as f64 - 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=4).contains(&self.dim) {
            return Err(Error::Config(format!("dimension must be 1..=4, got {}", self.dim)));
        }
        if self.kind == GridKind::FullLine1D && self.dim != 1 {
            return Err(Error::Config(format!(
                "FullLine1D grids require dimension 1, got {}",
                self.dim
            )));
        }
        if !(self.extent.is_finite() && self.extent > 0.0) {
            return Err(Error::Config(format!("extent must be positive, got {}", self.extent)));
        }
        if self.nodes < 16 {
            return Err(Error::Config(format!("need at least 16 nodes, got {}", self.nodes)));
        }
        Ok(())
    }
}

/// Surface area of the unit sphere S^{N-1}: 2, 2π, 4π, 2π².
pub fn unit_sphere_area(dim: u32) -> f64 {
    use std::f64::consts::PI;
    match dim {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => unreachable!("dimension validated on grid construction"),
    }
}

/// Volume of the N-ball of radius r: `omega_{N-1} r^N / N`.
pub fn ball_volume(dim: u32, r: f64) -> f64 {
    unit_sphere_area(dim) * r.powi(dim as i32) / dim as f64
}

/// Immutable discretization: nodes, quadrature weights, interval measures.
#[derive(Debug, Clone)]
pub struct Grid {
    spec: GridSpec,
    nodes: Vec<f64>,
    /// Node quadrature weights (trapezoid, measure folded in); all >= 0.
    weights: Vec<f64>,
    /// Measure of each inter-node interval, sampled at its midpoint; used by
    /// the Dirichlet form and the flow matrix.
    interval_weights: Vec<f64>,
}

impl Grid {
    /// Build a grid from its spec (the spec's invariants are checked here).
    pub fn new(spec: GridSpec) -> Result<Arc<Grid>> {
        spec.validate()?;
        let m = spec.nodes;
        let h = spec.spacing();
        let start = match spec.kind {
            GridKind::RadialHalfLine => 0.0,
            GridKind::FullLine1D => -spec.extent,
        };
        let nodes: Vec<f64> = (0..m).map(|i| start + h * i as f64).collect();

        let measure = |x: f64| -> f64 {
            match spec.kind {
                GridKind::RadialHalfLine => {
                    unit_sphere_area(spec.dim) * x.abs().powi(spec.dim as i32 - 1)
                }
                GridKind::FullLine1D => 1.0,
            }
        };
        let mut weights: Vec<f64> = nodes.iter().map(|&x| h * measure(x)).collect();
        weights[0] *= 0.5;
        weights[m - 1] *= 0.5;
        let mut interval_weights: Vec<f64> =
            (0..m - 1).map(|i| h * measure(0.5 * (nodes[i] + nodes[i + 1]))).collect();
        // For N >= 2 the origin node carries zero quadrature weight, so its
        // value must not enter the Dirichlet form either: drop the first
        // interval (an O(h^N) contribution for fields regular at r = 0).
        // This keeps the energy and its discrete gradient exactly dual.
        if spec.kind == GridKind::RadialHalfLine && spec.dim >= 2 {
            interval_weights[0] = 0.0;
        }

        Ok(Arc::new(Grid { spec, nodes, weights, interval_weights }))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.spec.spacing()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn interval_weights(&self) -> &[f64] {
        &self.interval_weights
    }

    /// Total measure of the discrete domain, `Σ w_i`.
    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Real-valued samples of a function on a shared grid.
#[derive(Debug, Clone)]
pub struct Field {
    grid: Arc<Grid>,
    values: Vec<f64>,
}

impl Field {
    /// Wrap sample values; rejects NaN/infinite entries and length mismatch.
    pub fn new(grid: Arc<Grid>, values: Vec<f64>) -> Result<Field> {
        if values.len() != grid.len() {
            return Err(Error::Usage(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "non-finite field value {} at node {}",
                values[bad], bad
            )));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: &Arc<Grid>) -> Field {
        Field { grid: Arc::clone(grid), values: vec![0.0; grid.len()] }
    }

    /// Sample a closure at the grid nodes.
    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Result<Field> {
        let values: Vec<f64> = grid.nodes().iter().map(|&x| f(x)).collect();
        Field::new(Arc::clone(grid), values)
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub(crate) fn same_grid(&self, other: &Field) -> Result<()> {
        if self.grid.spec() != other.grid.spec() {
            return Err(Error::Usage(format!(
                "grid mismatch: {:?} vs {:?}",
                self.grid.spec(),
                other.grid.spec()
            )));
        }
        Ok(())
    }

    /// `∫ u dx = Σ w_i u_i`; linear in the field.
    pub fn integrate(&self) -> f64 {
        dot(&self.values, self.grid.weights())
    }

    /// `∫ f(u) dx` without materializing an intermediate field.
    pub fn integrate_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(&u, &w)| w * f(u))
            .sum()
    }

    /// `∫ u² dx`.
    pub fn norm_sq(&self) -> f64 {
        self.integrate_of(|u| u * u)
    }

    /// Weighted inner product `∫ u v dx`; errors on mismatched grids.
    pub fn inner(&self, other: &Field) -> Result<f64> {
        self.same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((&u, &v), &w)| w * u * v)
            .sum())
    }

    /// `‖u - v‖_{L²}`.
    pub fn l2_distance(&self, other: &Field) -> Result<f64> {
        self.same_grid(other)?;
        let d: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.weights())
            .map(|((&u, &v), &w)| w * (u - v) * (u - v))
            .sum();
        Ok(d.sqrt())
    }

    /// Dirichlet energy `∫ |∇u|² dx` from staggered differences:
    /// `Σ_k ŵ_k ((u_{k+1}-u_k)/h)²` with `ŵ_k` the interval measure.
    /// Nonnegative and exactly quadratically homogeneous.
    pub fn grad_sq(&self) -> f64 {
        let h = self.grid.spacing();
        let mut acc = 0.0;
        for (pair, iwk) in self.values.windows(2).zip(self.grid.interval_weights()) {
            let d = (pair[1] - pair[0]) / h;
            acc += iwk * d * d;
        }
        acc
    }

    /// Pointwise radial Laplacian `u'' + (N-1)u'/r`, centered second-order
    /// stencil with one-sided closures; the r→0 limit uses the regularized
    /// form `N·u''(0)` valid for radial functions with `u'(0) = 0`.
    pub fn laplacian(&self) -> Field {
        let u = &self.values;
        let m = u.len();
        let h = self.grid.spacing();
        let h2 = h * h;
        let dim = self.grid.spec().dim as f64;
        let mut out = vec![0.0; m];

        let one_sided_second = |a: f64, b: f64, c: f64, d: f64| (2.0 * a - 5.0 * b + 4.0 * c - d) / h2;
        match self.grid.spec().kind {
            GridKind::RadialHalfLine => {
                // u'(0)=0 gives the ghost value u_{-1}=u_1, so u''(0)=2(u_1-u_0)/h².
                out[0] = dim * 2.0 * (u[1] - u[0]) / h2;
                for i in 1..m - 1 {
                    let r = self.grid.nodes()[i];
                    let upp = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
                    let up = (u[i + 1] - u[i - 1]) / (2.0 * h);
                    out[i] = upp + (dim - 1.0) / r * up;
                }
                let r = self.grid.nodes()[m - 1];
                let upp = one_sided_second(u[m - 1], u[m - 2], u[m - 3], u[m - 4]);
                let up = (3.0 * u[m - 1] - 4.0 * u[m - 2] + u[m - 3]) / (2.0 * h);
                out[m - 1] = upp + (dim - 1.0) / r * up;
            }
            GridKind::FullLine1D => {
                out[0] = one_sided_second(u[0], u[1], u[2], u[3]);
                for i in 1..m - 1 {
                    out[i] = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / h2;
                }
                out[m - 1] = one_sided_second(u[m - 1], u[m - 2], u[m - 3], u[m - 4]);
            }
        }
        Field { grid: Arc::clone(&self.grid), values: out }
    }

    /// Equimeasurable radially non-increasing (Schwarz) rearrangement of a
    /// nonnegative field.
    ///
    /// Sample values are sorted into a decreasing quantile function of the
    /// accumulated measure, which is then averaged over each node's own
    /// measure cell (its quadrature weight, taken outward in |x|). Already
    /// rearranged inputs are returned value-identical; all `L^q` norms are
    /// preserved up to quadrature tolerance, and the Dirichlet energy never
    /// increases beyond tolerance.
    pub fn rearrange_decreasing(&self) -> Result<Field> {
        let m = self.values.len();
        let peak = self.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let tol = 1e-12 * peak.max(1.0);
        for (i, &v) in self.values.iter().enumerate() {
            if v < -tol {
                return Err(Error::Domain(format!(
                    "rearrangement requires a nonnegative field, found {} at node {}",
                    v, i
                )));
            }
        }

        match self.grid.spec().kind {
            // Uniform-weight line grid: place the sorted sample multiset
            // outward from the center, alternating left/right. Preserves all
            // L^q norms exactly and fixes already-rearranged inputs.
            GridKind::FullLine1D => {
                let mut sorted: Vec<f64> = self.values.iter().map(|&v| v.max(0.0)).collect();
                sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite values"));
                let mut out = vec![0.0; m];
                let c_lo = (m - 1) / 2;
                let c_hi = m / 2;
                let mut next = sorted.into_iter();
                out[c_lo] = next.next().expect("nonempty");
                if c_hi != c_lo {
                    out[c_hi] = next.next().expect("nonempty");
                }
                for k in 1..=c_lo {
                    out[c_lo - k] = next.next().expect("left of center");
                    out[c_hi + k] = next.next().expect("right of center");
                }
                Field::new(Arc::clone(&self.grid), out)
            }
            // Radial grid, nonuniform weights: build the decreasing quantile
            // function of accumulated measure and average it over each node's
            // own measure cell (taken in increasing r).
            GridKind::RadialHalfLine => {
                let mut samples: Vec<(f64, f64)> = self
                    .values
                    .iter()
                    .map(|&v| v.max(0.0))
                    .zip(self.grid.weights().iter().copied())
                    .collect();
                samples.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite values"));
                let mut run_end = Vec::with_capacity(m);
                let mut acc = 0.0;
                for &(_, w) in &samples {
                    acc += w;
                    run_end.push(acc);
                }

                let w = self.grid.weights();
                let mut out = vec![0.0; m];
                let mut cell_start = 0.0;
                let mut run = 0usize;
                for (i, out_i) in out.iter_mut().enumerate() {
                    let cell_stop = cell_start + w[i];
                    let mut integral = 0.0;
                    let mut pos = cell_start;
                    let mut contributors = 0usize;
                    let mut last_value = 0.0;
                    while run < samples.len() && pos < cell_stop {
                        let stop = run_end[run].min(cell_stop);
                        if stop > pos {
                            integral += samples[run].0 * (stop - pos);
                            last_value = samples[run].0;
                            contributors += 1;
                            pos = stop;
                        }
                        if run_end[run] <= cell_stop {
                            run += 1;
                        } else {
                            break;
                        }
                    }
                    *out_i = match contributors {
                        // Zero-measure cell (the radial origin): the quantile
                        // value at this depth.
                        0 => samples[run.min(samples.len() - 1)].0,
                        // Cell contained in a single run: copy the value
                        // exactly, so rearranged inputs come back identical.
                        1 => last_value,
                        _ => integral / w[i],
                    };
                    cell_start = cell_stop;
                }
                Field::new(Arc::clone(&self.grid), out)
            }
        }
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |a, &v| a.min(v))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().fold(f64::NEG_INFINITY, |a, &v| a.max(v))
    }

    /// Write `(coordinate, value)` rows as CSV with a header, 17 significant
    /// digits (exact f64 round-trip).
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "coordinate,value")?;
        for (x, v) in self.grid.nodes().iter().zip(&self.values) {
            writeln!(out, "{:.16e},{:.16e}", x, v)?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Read a `(coordinate, value)` CSV written by [`Field::write_csv`]; the
    /// coordinates must match the grid nodes. Lines starting with `#` are
    /// metadata and skipped.
    pub fn read_csv<R: BufRead>(grid: &Arc<Grid>, input: R) -> Result<Field> {
        let mut values = Vec::with_capacity(grid.len());
        let mut node = 0usize;
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("coordinate") {
                continue;
            }
            let mut parts = trimmed.split(',');
            let (Some(xs), Some(vs)) = (parts.next(), parts.next()) else {
                return Err(Error::Usage(format!("malformed CSV line {}", lineno + 1)));
            };
            let x: f64 = xs
                .trim()
                .parse()
                .map_err(|e| Error::Usage(format!("bad coordinate on line {}: {}", lineno + 1, e)))?;
            let v: f64 = vs
                .trim()
                .parse()
                .map_err(|e| Error::Usage(format!("bad value on line {}: {}", lineno + 1, e)))?;
            if node >= grid.len() || (x - grid.nodes()[node]).abs() > 1e-9 * (1.0 + x.abs()) {
                return Err(Error::Usage(format!(
                    "CSV coordinate {} does not match grid node {}",
                    x, node
                )));
            }
            values.push(v);
            node += 1;
        }
        Field::new(Arc::clone(grid), values)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use std::f64::consts::PI;

    fn radial(dim: u32, extent: f64, nodes: usize) -> Arc<Grid> {
        Grid::new(GridSpec::radial(dim, extent, nodes)).unwrap()
    }

    fn line(extent: f64, nodes: usize) -> Arc<Grid> {
        Grid::new(GridSpec::line(extent, nodes)).unwrap()
    }

    #[test]
    fn three_node_line_weights_are_trapezoid() {
        let g = Grid::new(GridSpec { dim: 1, kind: GridKind::FullLine1D, extent: 10.0, nodes: 3 });
        // nodes < 16 is rejected; relax through a direct check of the rule instead
        assert!(g.is_err());
        let g = line(10.0, 17); // h = 20/16 = 1.25
        let h = g.spacing();
        assert_abs_diff_eq!(h, 1.25);
        assert_abs_diff_eq!(g.weights()[0], h / 2.0);
        assert_abs_diff_eq!(g.weights()[1], h);
        assert_abs_diff_eq!(g.weights()[16], h / 2.0);
        assert_abs_diff_eq!(g.nodes()[0], -10.0);
        assert_abs_diff_eq!(g.nodes()[16], 10.0);
    }

    #[test]
    fn line_grid_requires_dim_one() {
        let err = Grid::new(GridSpec { dim: 2, kind: GridKind::FullLine1D, extent: 5.0, nodes: 64 });
        assert!(matches!(err, Err(Error::Config(_))));
    }

    #[test]
    fn radial_weight_vanishes_at_origin_for_n2() {
        let g = radial(2, 8.0, 128);
        assert_eq!(g.weights()[0], 0.0);
        // interior weight proportional to 2π r
        let i = 40;
        assert_relative_eq!(
            g.weights()[i],
            2.0 * PI * g.nodes()[i] * g.spacing(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn linear_integrands_are_exact() {
        // trapezoid weights are exact whenever integrand × measure is
        // affine: a linear function on the line grid
        let g = line(10.0, 641);
        let f = Field::from_fn(&g, |x| 2.0 + 3.0 * x).unwrap();
        assert_relative_eq!(f.integrate(), 40.0, max_relative = 1e-12);
        // ... and the constant 1 against the 2πr measure of a disc
        let g2 = radial(2, 7.0, 321);
        let one = Field::from_fn(&g2, |_| 1.0).unwrap();
        assert_relative_eq!(one.integrate(), PI * 49.0, max_relative = 1e-13);
    }

    #[test]
    fn ball_volume_reproduced_n3() {
        let g = radial(3, 5.0, 2048);
        let one = Field::from_fn(&g, |_| 1.0).unwrap();
        let vol = one.integrate();
        assert_relative_eq!(vol, 4.0 / 3.0 * PI * 125.0, max_relative = 1e-6);
    }

    #[test]
    fn gaussian_integral_n3() {
        let g = radial(3, 8.0, 2048);
        let f = Field::from_fn(&g, |r| (-r * r).exp()).unwrap();
        // ∫ e^{-|x|²} dx over R³ = π^{3/2}
        assert_relative_eq!(f.integrate(), 5.568327996831708, max_relative = 1e-6);
    }

    #[test]
    fn hat_function_has_unit_area() {
        // h = 32/4096 divides 1 exactly, so the kinks sit on nodes and the
        // trapezoid rule is exact for the piecewise-linear hat.
        let g = line(16.0, 4097);
        let f = Field::from_fn(&g, |x| (1.0 - x.abs()).max(0.0)).unwrap();
        assert_relative_eq!(f.integrate(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn zero_integrand_integrates_to_zero() {
        let g = radial(2, 4.0, 64);
        assert_eq!(Field::zeros(&g).integrate(), 0.0);
    }

    #[test]
    fn grad_sq_of_constant_vanishes_and_scales_quadratically() {
        let g = radial(3, 6.0, 256);
        let c = Field::from_fn(&g, |_| 3.25).unwrap();
        assert_eq!(c.grad_sq(), 0.0);
        let u = Field::from_fn(&g, |r| (-r * r / 2.0).exp()).unwrap();
        let u2 = Field::from_fn(&g, |r| 2.0 * (-r * r / 2.0).exp()).unwrap();
        assert_relative_eq!(u2.grad_sq(), 4.0 * u.grad_sq(), max_relative = 1e-14);
    }

    #[test]
    fn grad_sq_matches_soliton_closed_form() {
        // u = √3 sech(√3 x) on the line: ∫ u'² = 2√3.
        let g = line(12.0, 4097);
        let s3 = 3.0f64.sqrt();
        let u = Field::from_fn(&g, |x| s3 / (s3 * x).cosh()).unwrap();
        assert_relative_eq!(u.grad_sq(), 2.0 * s3, max_relative = 1e-4);
    }

    #[test]
    fn laplacian_of_constant_is_zero() {
        let g = radial(2, 4.0, 128);
        let c = Field::from_fn(&g, |_| 1.7).unwrap();
        for &v in c.laplacian().values() {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn laplacian_of_gaussian_matches_symbolic() {
        for dim in 1..=4u32 {
            let g = radial(dim, 8.0, 2048);
            let u = Field::from_fn(&g, |r| (-r * r / 2.0).exp()).unwrap();
            let lap = u.laplacian();
            let h2 = g.spacing() * g.spacing();
            for i in 0..g.len() - 1 {
                let r = g.nodes()[i];
                let expect = (r * r - dim as f64) * (-r * r / 2.0).exp();
                assert_abs_diff_eq!(lap.values()[i], expect, epsilon = 200.0 * h2);
            }
        }
    }

    #[test]
    fn laplacian_exact_for_quadratic_on_line() {
        let g = line(5.0, 64);
        let u = Field::from_fn(&g, |x| x * x).unwrap();
        for &v in u.laplacian().values() {
            assert_relative_eq!(v, 2.0, max_relative = 1e-9);
        }
    }

    #[test]
    fn discrete_self_adjointness_up_to_boundary() {
        let g = radial(3, 10.0, 2048);
        let u = Field::from_fn(&g, |r| (-r * r).exp()).unwrap();
        let v = Field::from_fn(&g, |r| r * r * (-r * r / 0.8).exp()).unwrap();
        let lhs = u.laplacian().inner(&v).unwrap();
        let rhs = v.laplacian().inner(&u).unwrap();
        let h2 = g.spacing() * g.spacing();
        assert_abs_diff_eq!(lhs, rhs, epsilon = 50.0 * h2);
    }

    #[test]
    fn rearrangement_fixes_decreasing_input() {
        let g = radial(2, 6.0, 512);
        let u = Field::from_fn(&g, |r| (-r * r / 2.0).exp()).unwrap();
        let r = u.rearrange_decreasing().unwrap();
        assert_eq!(u.values(), r.values());
    }

    #[test]
    fn rearrangement_merges_two_bumps_on_line() {
        let g = line(14.0, 4097);
        let u = Field::from_fn(&g, |x| {
            (-(x - 3.0) * (x - 3.0)).exp() + 0.8 * (-(x + 4.0) * (x + 4.0) / 0.5).exp()
        })
        .unwrap();
        let r = u.rearrange_decreasing().unwrap();
        // equimeasurable: L² and L⁴ preserved (sample multiset is permuted,
        // so this is exact up to the half-weight endpoints carrying ~0)
        assert_relative_eq!(r.norm_sq(), u.norm_sq(), max_relative = 1e-10);
        assert_relative_eq!(
            r.integrate_of(|v| v.powi(4)),
            u.integrate_of(|v| v.powi(4)),
            max_relative = 1e-10
        );
        // single centered bump: non-increasing along each outward ray,
        // symmetric up to one order statistic
        let vals = r.values();
        let mid = vals.len() / 2;
        for i in mid..vals.len() - 1 {
            assert!(vals[i + 1] <= vals[i] + 1e-14);
        }
        for i in (1..=mid).rev() {
            assert!(vals[i - 1] <= vals[i] + 1e-14);
        }
        for i in 0..vals.len() {
            assert_abs_diff_eq!(vals[i], vals[vals.len() - 1 - i], epsilon = 5e-3);
        }
        // Dirichlet energy does not increase
        assert!(r.grad_sq() <= u.grad_sq() + 1e-8);
    }

    #[test]
    fn rearrangement_preserves_norms_on_radial_grid() {
        // non-monotone radial field: ring profile
        let g = radial(3, 10.0, 8192);
        let u = Field::from_fn(&g, |r| r * r * (-r * r / 2.0).exp()).unwrap();
        let re = u.rearrange_decreasing().unwrap();
        assert_relative_eq!(re.norm_sq(), u.norm_sq(), max_relative = 1e-6);
        assert_relative_eq!(
            re.integrate_of(|v| v.powi(4)),
            u.integrate_of(|v| v.powi(4)),
            max_relative = 1e-6
        );
        assert!(re.grad_sq() <= u.grad_sq() + 1e-8);
        // non-increasing in r
        let vals = re.values();
        for i in 0..vals.len() - 1 {
            assert!(vals[i + 1] <= vals[i] + 1e-14);
        }
    }

    #[test]
    fn rearrangement_rejects_negative_values() {
        let g = line(5.0, 64);
        let u = Field::from_fn(&g, |x| x).unwrap();
        assert!(matches!(u.rearrange_decreasing(), Err(Error::Domain(_))));
    }

    #[test]
    fn field_rejects_nan() {
        let g = line(5.0, 64);
        let mut vals = vec![0.0; 64];
        vals[3] = f64::NAN;
        assert!(matches!(Field::new(g, vals), Err(Error::Domain(_))));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let g = radial(3, 7.0, 128);
        let u = Field::from_fn(&g, |r| (-r).exp() * (1.0 + r)).unwrap();
        let mut buf = Vec::new();
        u.write_csv(&mut buf).unwrap();
        let back = Field::read_csv(&g, std::io::Cursor::new(buf)).unwrap();
        assert_eq!(u.values(), back.values());
    }

    #[test]
    fn inner_product_rejects_mismatched_grids() {
        let a = Field::zeros(&radial(2, 4.0, 64));
        let b = Field::zeros(&radial(2, 4.0, 128));
        assert!(matches!(a.inner(&b), Err(Error::Usage(_))));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            /// Rearrangement preserves L² and never increases the Dirichlet
            /// form for smooth nonnegative bump mixtures.
            #[test]
            fn rearrangement_invariants(
                c1 in -6.0..6.0f64, c2 in -6.0..6.0f64,
                a1 in 0.1..2.0f64, a2 in 0.0..2.0f64,
                s1 in 0.4..2.0f64, s2 in 0.4..2.0f64,
            ) {
                let g = line(16.0, 1025);
                let u = Field::from_fn(&g, |x| {
                    a1 * (-(x - c1) * (x - c1) / (2.0 * s1 * s1)).exp()
                        + a2 * (-(x - c2) * (x - c2) / (2.0 * s2 * s2)).exp()
                }).unwrap();
                let r = u.rearrange_decreasing().unwrap();
                prop_assert!((r.norm_sq() - u.norm_sq()).abs() <= 1e-6 * u.norm_sq().max(1e-12));
                prop_assert!(r.grad_sq() <= u.grad_sq() + 1e-8);
            }

            /// grad_sq is exactly quadratically homogeneous.
            #[test]
            fn grad_sq_homogeneity(c in 0.1..8.0f64, s in 0.3..3.0f64) {
                let g = radial(3, 10.0, 257);
                let u = Field::from_fn(&g, |r| (-r * r / (2.0 * s * s)).exp()).unwrap();
                let cu = Field::from_fn(&g, |r| c * (-r * r / (2.0 * s * s)).exp()).unwrap();
                let t = u.grad_sq();
                prop_assert!((cu.grad_sq() - c * c * t).abs() <= 1e-12 * c * c * t.max(1e-30));
            }
        }
    }
}
