//! Minimization of the Kirchhoff energy over the unit L² sphere by a
//! normalized, semi-implicit gradient flow.
//!
//! One step freezes the nonlocal coefficient `c_n = a + b∫|∇u_n|²`, solves
//!
//! ```text
//!   (I - dt·c_n Δ + dt·V) u* = u_n + dt·β|u_n|^p u_n
//! ```
//!
//! with the conservative Laplacian of the grid (a symmetric positive
//! definite tridiagonal solve), and projects back to the sphere. The step is
//! accepted only if the energy did not increase beyond rounding; otherwise
//! dt is halved and retried, and dt grows again after ten accepted steps.
//! With a nonnegative start the system matrix is an M-matrix, so iterates
//! stay nonnegative.
//!
//! Besides convergence (projected gradient below tolerance), the driver
//! recognizes the two nonexistence signatures of the free problem: an
//! unbounded concentration plunge (energy below a floor while ∫|∇u|²
//! exceeds a cap) and indefinite spreading (the iterate degenerates to the
//! domain-scale mode with vanishing energy; on a finite domain this is the
//! numerical signature of an infimum 0 attained only in the width → ∞
//! limit).

use crate::energy::{
    energy_with_sampled, gradient_with_sampled, multiplier_with_sampled, EnergyBreakdown,
    ModelParams, Potential,
};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, GridKind};
use rayon::prelude::*;
use std::sync::Arc;

/// Stopping, step-control, and detection parameters of the flow.
#[derive(Debug, Clone)]
pub struct FlowConfig {
    /// Initial time step.
    pub dt: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub max_iters: u64,
    /// Relative energy-decrease stop.
    pub energy_tol: f64,
    /// Projected-gradient L² norm stop.
    pub grad_tol: f64,
    /// Cap on ∫|∇u|² for divergence detection; `None` picks
    /// `min(1e8, 0.25/h²)` (profiles narrower than a few cells are beyond
    /// the grid anyway).
    pub divergence_t_max: Option<f64>,
    /// Energy floor for divergence detection; `None` picks
    /// `-1e3·max(1, a²/b)`.
    pub divergence_energy_floor: Option<f64>,
    /// Number of deterministic starts for [`multistart_minimize`].
    pub multistart: usize,
    /// Record an (iteration, energy, ∫|∇u|²) trace of accepted steps.
    pub record_trace: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            dt: 0.1,
            dt_min: 1e-13,
            dt_max: 1e5,
            max_iters: 200_000,
            energy_tol: 1e-10,
            grad_tol: 1e-8,
            divergence_t_max: None,
            divergence_energy_floor: None,
            multistart: 6,
            record_trace: false,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt_min > 0.0 && self.dt_min <= self.dt && self.dt <= self.dt_max)
        {
            return Err(Error::Config(format!(
                "need 0 < dt_min <= dt <= dt_max, got {} / {} / {}",
                self.dt_min, self.dt, self.dt_max
            )));
        }
        if !(self.energy_tol > 0.0 && self.grad_tol > 0.0) {
            return Err(Error::Config("tolerances must be positive".to_string()));
        }
        Ok(())
    }
}

/// Outcome classification of a flow run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FlowStatus {
    Converged,
    /// Energy plunged below the floor with the Dirichlet norm past the cap:
    /// the infimum is -∞ (concentration).
    DivergedUnbounded,
    /// The iterate flattened to the domain mode with energy → 0⁺: the
    /// infimum is 0 and not attained (spreading).
    VanishingSpreading,
    MaxIters,
}

/// One accepted-step sample of the flow trace.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct TraceSample {
    pub iter: u64,
    pub energy: f64,
    pub grad_sq: f64,
}

/// Converged (or diagnosed) state of one flow run.
#[derive(Debug, Clone)]
pub struct MinimizeResult {
    pub u_final: Field,
    pub energy: EnergyBreakdown,
    pub lambda: f64,
    /// L² norm of g - λu at the final iterate, over the flow's degrees of
    /// freedom (the Dirichlet-pinned boundary rows are not dof).
    pub grad_residual: f64,
    pub iterations: u64,
    pub status: FlowStatus,
    /// Largest |∫u² - 1| seen over accepted steps.
    pub mass_dev_max: f64,
    pub trace: Vec<TraceSample>,
}

/// Projected-gradient residual ‖g - λu‖_{L²} over the unpinned nodes.
pub(crate) fn residual_sampled(params: &ModelParams, v: &[f64], u: &Field, lambda: f64) -> f64 {
    let grid = u.grid();
    let g = gradient_with_sampled(params, v, u);
    let m = grid.len();
    let skip_first = grid.spec().kind == GridKind::FullLine1D;
    let mut acc = 0.0;
    for i in 0..m {
        if i == m - 1 || (i == 0 && skip_first) {
            continue;
        }
        let d = g.values()[i] - lambda * u.values()[i];
        acc += grid.weights()[i] * d * d;
    }
    acc.sqrt()
}

/// Normalize to the unit L² sphere; idempotent.
pub fn project_sphere(u: &Field) -> Result<Field> {
    let mass = u.norm_sq();
    if !(mass > 0.0) {
        return Err(Error::Domain("cannot project the zero field to the sphere".to_string()));
    }
    let s = 1.0 / mass.sqrt();
    let vals: Vec<f64> = u.values().iter().map(|&v| s * v).collect();
    Field::new(Arc::clone(u.grid()), vals)
}

/// Thomas solve of the tridiagonal system (in place on `rhs`).
fn solve_tridiag(sub: &[f64], diag: &mut [f64], sup: &[f64], rhs: &mut [f64]) -> Result<()> {
    let n = diag.len();
    for i in 1..n {
        let denom = diag[i - 1];
        if denom.abs() < 1e-300 {
            return Err(Error::Numerical("singular pivot in tridiagonal solve".to_string()));
        }
        let m = sub[i] / denom;
        diag[i] -= m * sup[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    if diag[n - 1].abs() < 1e-300 {
        return Err(Error::Numerical("singular pivot in tridiagonal solve".to_string()));
    }
    rhs[n - 1] /= diag[n - 1];
    for i in (0..n - 1).rev() {
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
    }
    Ok(())
}

/// One semi-implicit step with the frozen Kirchhoff coefficient, then
/// projection; the mass after the step is 1 to rounding.
///
/// The step carries the lagged multiplier λ_n of the sphere constraint,
/// its negative part implicitly (added to the diagonal) and its positive
/// part explicitly on the right-hand side. Without the multiplier term the
/// fixed point of step-then-project is biased O(dt) away from the discrete
/// stationary state and the projected-gradient residual stalls far above
/// `grad_tol`; with this splitting, solutions of g = λu are exact fixed
/// points for every dt, the system stays an M-matrix, and the right-hand
/// side keeps the sign of u, so nonnegativity is unconditional.
pub fn flow_step(params: &ModelParams, potential: &Potential, u: &Field, dt: f64) -> Result<Field> {
    let v = potential.sample(u.grid())?;
    let lambda = multiplier_with_sampled(params, &v, u);
    step_sampled(params, &v, u, dt, lambda)
}

pub(crate) fn step_sampled(
    params: &ModelParams,
    v: &[f64],
    u: &Field,
    dt: f64,
    lambda: f64,
) -> Result<Field> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::Config(format!("dt must be positive, got {}", dt)));
    }
    let grid = u.grid();
    let m = grid.len();
    let w = grid.weights();
    let iw = grid.interval_weights();
    let h2 = grid.spacing() * grid.spacing();
    let coeff = params.a + params.b * u.grad_sq();
    let p = params.p;
    let lam_neg = lambda.min(0.0);
    let lam_pos = lambda.max(0.0);

    // W-weighted system:
    // (W + dt·c·A + dt·W·(V - λ⁻)) u* = W·(u + dt·(β|u|^p + λ⁺) u),
    // with Dirichlet rows pinned at the outer boundary.
    let mut sub = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut sup = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for i in 0..m {
        let ui = u.values()[i];
        let left = if i > 0 { dt * coeff * iw[i - 1] / h2 } else { 0.0 };
        let right = if i + 1 < m { dt * coeff * iw[i] / h2 } else { 0.0 };
        sub[i] = -left;
        sup[i] = -right;
        diag[i] = w[i] + left + right + dt * w[i] * (v[i] - lam_neg);
        rhs[i] = w[i] * (ui + dt * (params.beta * ui.abs().powf(p) + lam_pos) * ui);
    }
    // outer Dirichlet row(s)
    let pin = |i: usize, sub: &mut [f64], diag: &mut [f64], sup: &mut [f64], rhs: &mut [f64]| {
        sub[i] = 0.0;
        sup[i] = 0.0;
        diag[i] = 1.0;
        rhs[i] = 0.0;
    };
    pin(m - 1, &mut sub, &mut diag, &mut sup, &mut rhs);
    match grid.spec().kind {
        GridKind::FullLine1D => pin(0, &mut sub, &mut diag, &mut sup, &mut rhs),
        GridKind::RadialHalfLine => {
            if grid.spec().dim >= 2 {
                // zero-measure origin: tie it to its neighbor (regularity)
                diag[0] = 1.0;
                sup[0] = -1.0;
                rhs[0] = 0.0;
            }
        }
    }
    solve_tridiag(&sub, &mut diag, &sup, &mut rhs)?;
    let star = Field::new(Arc::clone(grid), rhs)?;
    project_sphere(&star)
}

fn spreading_scales(params: &ModelParams, grid: &Grid) -> (f64, f64) {
    // First Dirichlet mode of the domain: T ~ (π/(2R))² in the flat case.
    let t_box = (std::f64::consts::PI / (2.0 * grid.spec().extent)).powi(2);
    let t_spread = (8.0 * t_box).max(1e-6);
    let e_spread = (2.0 * params.a * t_box).max(1e-4);
    (t_spread, e_spread)
}

/// Flow to a minimizer (or a nonexistence diagnosis) from `init`.
pub fn minimize(
    params: &ModelParams,
    potential: &Potential,
    init: &Field,
    cfg: &FlowConfig,
) -> Result<MinimizeResult> {
    cfg.validate()?;
    let grid = init.grid();
    if init.norm_sq() <= 0.0 {
        return Err(Error::Usage("minimize needs a nonzero initial field".to_string()));
    }
    let v = potential.sample(grid)?;

    // outer boundary values are pinned to zero by the flow; clear them in
    // the seed so the first projection already satisfies the convention
    let mut seed = init.clone();
    {
        let m = seed.values().len();
        let vals = seed.values_mut();
        vals[m - 1] = 0.0;
        if grid.spec().kind == GridKind::FullLine1D {
            vals[0] = 0.0;
        }
    }
    let mut u = project_sphere(&seed)?;

    let h = grid.spacing();
    let t_cap = cfg.divergence_t_max.unwrap_or_else(|| (0.25 / (h * h)).min(1e8));
    let e_floor = cfg
        .divergence_energy_floor
        .unwrap_or_else(|| -1e3 * (params.a * params.a / params.b.max(1e-12)).max(1.0));
    let (t_spread, e_spread) = spreading_scales(params, grid);

    let mut dt = cfg.dt;
    let mut e = energy_with_sampled(params, &v, &u);
    let mut mass_dev_max = (u.norm_sq() - 1.0).abs();
    let mut trace = Vec::new();
    let mut spread_run = 0u32;
    let mut accepted_since_grow = 0u32;
    let mut status = FlowStatus::MaxIters;
    let mut iterations = cfg.max_iters;

    for iter in 0..cfg.max_iters {
        let t = u.grad_sq();
        let lambda = multiplier_with_sampled(params, &v, &u);
        let residual = residual_sampled(params, &v, &u, lambda);
        if cfg.record_trace {
            trace.push(TraceSample { iter, energy: e.total, grad_sq: t });
        }

        // nonexistence signatures
        if e.total < e_floor && t > t_cap {
            status = FlowStatus::DivergedUnbounded;
            iterations = iter;
            break;
        }
        let spreading_now =
            potential.is_zero() && t < t_spread && e.total > -1e-8 && e.total < e_spread;
        spread_run = if spreading_now { spread_run + 1 } else { 0 };
        if spread_run >= 500 {
            status = FlowStatus::VanishingSpreading;
            iterations = iter;
            break;
        }

        // step with backtracking; the acceptance threshold scales with the
        // cancellation magnitude of the energy terms (near blow-up the
        // total is a tiny difference of huge terms and 1e-12 absolute would
        // reject pure rounding noise forever)
        let mut stepped = None;
        loop {
            let trial = step_sampled(params, &v, &u, dt, lambda)?;
            let e_trial = energy_with_sampled(params, &v, &trial);
            if e_trial.total <= e.total + 1e-12 + 1e-15 * e.magnitude() {
                stepped = Some((trial, e_trial));
                break;
            }
            if dt <= cfg.dt_min {
                break;
            }
            dt = (0.5 * dt).max(cfg.dt_min);
            accepted_since_grow = 0;
        }
        let Some((next, e_next)) = stepped else {
            // cannot decrease the energy at the smallest step: numerical floor
            status = if residual <= 10.0 * cfg.grad_tol {
                if spreading_now {
                    FlowStatus::VanishingSpreading
                } else {
                    FlowStatus::Converged
                }
            } else {
                FlowStatus::MaxIters
            };
            iterations = iter;
            break;
        };

        let e_drop = e.total - e_next.total;
        u = next;
        mass_dev_max = mass_dev_max.max((u.norm_sq() - 1.0).abs());
        e = e_next;
        accepted_since_grow += 1;
        if accepted_since_grow >= 10 {
            dt = (dt * 1.1).min(cfg.dt_max);
            accepted_since_grow = 0;
        }

        // converged when the energy has plateaued and the projected
        // gradient is small (the plateau test allows rounding chatter at
        // the term-magnitude scale)
        if residual <= cfg.grad_tol
            && e_drop.abs() <= cfg.energy_tol * e.total.abs().max(1.0) + 1e-14 * e.magnitude()
        {
            status = if spreading_now {
                FlowStatus::VanishingSpreading
            } else {
                FlowStatus::Converged
            };
            iterations = iter + 1;
            break;
        }
    }

    let lambda = multiplier_with_sampled(params, &v, &u);
    let grad_residual = residual_sampled(params, &v, &u, lambda);
    Ok(MinimizeResult {
        energy: e,
        lambda,
        grad_residual,
        iterations,
        status,
        mass_dev_max,
        trace,
        u_final: u,
    })
}

/// Normalized Gaussian bump, the standard deterministic seed.
pub fn gaussian_seed(grid: &Arc<Grid>, center: f64, sigma: f64) -> Result<Field> {
    let f = Field::from_fn(grid, |x| (-(x - center) * (x - center) / (2.0 * sigma * sigma)).exp())?;
    project_sphere(&f)
}

/// Run [`minimize`] from a deterministic family of starts (Gaussians of
/// several widths at the potential minimum, plus a ground-state seed dilated
/// to the predicted blow-up scale when p is near critical) and merge:
/// lowest converged energy wins, ties broken by gradient residual, then
/// start index; with no converged start, the most frequent failure status
/// is reported.
pub fn multistart_minimize(
    params: &ModelParams,
    potential: &Potential,
    grid: &Arc<Grid>,
    cfg: &FlowConfig,
) -> Result<MinimizeResult> {
    if cfg.multistart < 1 {
        return Err(Error::Config("multistart must be at least 1".to_string()));
    }
    let center = match grid.spec().kind {
        GridKind::FullLine1D => potential.argmin_on(grid)?,
        GridKind::RadialHalfLine => 0.0,
    };
    let base = grid.spec().extent / 16.0;
    let mut seeds = Vec::new();
    for k in 0..cfg.multistart {
        let sigma = base * 2f64.powi(k as i32 - (cfg.multistart as i32 - 1) / 2);
        seeds.push(gaussian_seed(grid, center, sigma)?);
    }
    // near-critical dilation seed at the predicted scale t = r_p^{1/4}
    if params.p > 0.75 * params.p_star() && !params.is_critical() && params.b > 0.0 {
        if let Ok(gs) = crate::groundstate::shoot_ground_state(params.dim, params.p, 1e-3) {
            let bp = crate::thresholds::beta_p(params.b, &gs);
            if let Ok(rp) = crate::blowup::r_p(params.beta, bp, params.p, params.dim) {
                if rp > 1.0 {
                    if let Ok(seeded) = dilated_profile_seed(grid, &gs, rp.powf(0.25), center) {
                        seeds.push(seeded);
                    }
                }
            }
        }
    }

    let runs: Vec<(usize, Result<MinimizeResult>)> = seeds
        .par_iter()
        .enumerate()
        .map(|(k, s)| (k, minimize(params, potential, s, cfg)))
        .collect();

    let mut ok: Vec<(usize, MinimizeResult)> = Vec::new();
    let mut first_err = None;
    for (k, r) in runs {
        match r {
            Ok(res) => ok.push((k, res)),
            Err(e) => {
                if first_err.is_none() {
                    first_err = Some(e);
                }
            }
        }
    }
    if ok.is_empty() {
        return Err(first_err.unwrap_or_else(|| Error::Solver("no start produced a result".into())));
    }

    let converged: Vec<&(usize, MinimizeResult)> =
        ok.iter().filter(|(_, r)| r.status == FlowStatus::Converged).collect();
    if !converged.is_empty() {
        let mut best = converged[0];
        for cand in &converged[1..] {
            let (bi, br) = best;
            let (ci, cr) = cand;
            let better = cr.energy.total < br.energy.total - 1e-10
                || ((cr.energy.total - br.energy.total).abs() <= 1e-10
                    && (cr.grad_residual < br.grad_residual
                        || (cr.grad_residual == br.grad_residual && ci < bi)));
            if better {
                best = cand;
            }
        }
        return Ok(best.1.clone());
    }

    // consensus failure status: majority, ties broken by severity
    let count = |s: FlowStatus| ok.iter().filter(|(_, r)| r.status == s).count();
    let order =
        [FlowStatus::DivergedUnbounded, FlowStatus::VanishingSpreading, FlowStatus::MaxIters];
    let winner = *order
        .iter()
        .max_by_key(|&&s| (count(s), order.len() - order.iter().position(|&o| o == s).unwrap()))
        .expect("nonempty candidate list");
    let rep = ok.iter().find(|(_, r)| r.status == winner).expect("winner status present");
    Ok(rep.1.clone())
}

/// Translate and dilate a normalized ground-state profile onto `grid`.
fn dilated_profile_seed(
    grid: &Arc<Grid>,
    gs: &crate::groundstate::GroundStateProfile,
    t: f64,
    center: f64,
) -> Result<Field> {
    use crate::interp::MonotoneCubic;
    let src = gs.profile.grid();
    let itp = MonotoneCubic::new(src.nodes()[0], src.spacing(), gs.profile.values());
    let n_half = gs.dim as f64 / 2.0;
    let scale = t.powf(n_half) / gs.l2_norm_sq.sqrt();
    let f = Field::from_fn(grid, |x| scale * itp.eval_or_zero(t * (x - center).abs()))?;
    let seeded = project_sphere(&f)?;
    if seeded.grad_sq() > 0.5 / (grid.spacing() * grid.spacing()) {
        return Err(Error::Resolution(format!(
            "dilated seed at t = {} is narrower than the grid can resolve",
            t
        )));
    }
    Ok(seeded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn radial1(extent: f64, nodes: usize) -> Arc<Grid> {
        Grid::new(GridSpec::radial(1, extent, nodes)).unwrap()
    }

    fn line(extent: f64, nodes: usize) -> Arc<Grid> {
        Grid::new(GridSpec::line(extent, nodes)).unwrap()
    }

    #[test]
    fn project_sphere_properties() {
        let g = line(10.0, 257);
        let u = Field::from_fn(&g, |x| (-x * x).exp()).unwrap();
        let pu = project_sphere(&u).unwrap();
        assert_abs_diff_eq!(pu.norm_sq(), 1.0, epsilon = 1e-12);
        let again = project_sphere(&pu).unwrap();
        for (a, b) in pu.values().iter().zip(again.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let doubled = Field::from_fn(&g, |x| 2.0 * (-x * x).exp()).unwrap();
        let pd = project_sphere(&doubled).unwrap();
        for (a, b) in pu.values().iter().zip(pd.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
        assert!(matches!(project_sphere(&Field::zeros(&g)), Err(Error::Domain(_))));
    }

    #[test]
    fn flow_step_preserves_mass_and_nonnegativity() {
        let g = radial1(30.0, 513);
        let params = ModelParams::new(1.0, 1.0, 1.0, 2.0, 1).unwrap();
        let u = gaussian_seed(&g, 0.0, 2.0).unwrap();
        let next = flow_step(&params, &Potential::Zero, &u, 0.5).unwrap();
        assert_abs_diff_eq!(next.norm_sq(), 1.0, epsilon = 1e-12);
        assert!(next.min_value() >= -1e-12);
    }

    #[test]
    fn harmonic_oscillator_ground_state_in_the_b_to_zero_limit() {
        // a=1, b=0, β=0, V=x²: the sphere-constrained minimizer is the
        // oscillator ground state π^{-1/4} e^{-x²/2}.
        let g = line(12.0, 4097);
        let params = ModelParams::new(1.0, 0.0, 0.0, 2.0, 1).unwrap();
        let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
        let init = gaussian_seed(&g, 1.5, 2.5).unwrap();
        let res = minimize(&params, &pot, &init, &FlowConfig::default()).unwrap();
        assert_eq!(res.status, FlowStatus::Converged);
        let exact =
            Field::from_fn(&g, |x| (-x * x / 2.0).exp() / std::f64::consts::PI.powf(0.25)).unwrap();
        let dist = res.u_final.l2_distance(&exact).unwrap();
        assert!(dist <= 1e-4, "L² distance to oscillator ground state: {}", dist);
        // E = (1/2)(T + ∫x²u²) = λ/2 with ground eigenvalue λ = 1
        assert_relative_eq!(res.energy.total, 0.5, max_relative = 1e-4);
        assert_relative_eq!(res.lambda, 1.0, max_relative = 1e-4);
        assert!(res.mass_dev_max <= 1e-12);
    }

    #[test]
    fn converged_minimizer_is_a_flow_fixed_point() {
        let g = radial1(150.0, 1025);
        let params = ModelParams::new(1.0, 1.0, 1.0, 2.0, 1).unwrap();
        let init = gaussian_seed(&g, 0.0, 4.0).unwrap();
        let cfg = FlowConfig::default();
        let res = minimize(&params, &Potential::Zero, &init, &cfg).unwrap();
        assert_eq!(res.status, FlowStatus::Converged);
        assert!(res.energy.total < 0.0);
        let dt = 0.1;
        let stepped = flow_step(&params, &Potential::Zero, &res.u_final, dt).unwrap();
        let moved = stepped.l2_distance(&res.u_final).unwrap();
        assert!(moved <= 10.0 * cfg.grad_tol * dt, "fixed-point drift {}", moved);
    }

    #[test]
    fn lambda_routes_agree_at_free_minimizer() {
        let g = radial1(150.0, 2049);
        let params = ModelParams::new(1.0, 1.0, 1.0, 2.0, 1).unwrap();
        let init = gaussian_seed(&g, 0.0, 4.0).unwrap();
        let res = minimize(&params, &Potential::Zero, &init, &FlowConfig::default()).unwrap();
        assert_eq!(res.status, FlowStatus::Converged);
        assert!(res.lambda < 0.0);
        let lp = crate::energy::lambda_pohozaev(&params, &Potential::Zero, &res.u_final).unwrap();
        assert_relative_eq!(res.lambda, lp, max_relative = 1e-3);
    }

    #[test]
    fn energy_decreases_along_accepted_steps() {
        let g = line(40.0, 1025);
        let params = ModelParams::new(1.0, 1.0, 2.0, 3.0, 1).unwrap();
        let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
        let init = gaussian_seed(&g, 0.5, 3.0).unwrap();
        let cfg = FlowConfig { record_trace: true, ..FlowConfig::default() };
        let res = minimize(&params, &pot, &init, &cfg).unwrap();
        assert_eq!(res.status, FlowStatus::Converged);
        for pair in res.trace.windows(2) {
            assert!(pair[1].energy <= pair[0].energy + 1e-12 + 1e-15 * pair[0].energy.abs());
        }
        assert!(res.mass_dev_max <= 1e-12);
    }

    #[test]
    fn vanishing_regime_detected_below_threshold() {
        // N=1, p=4 = 4/N, β = 0.5·β̃: the infimum is 0 and the flow spreads.
        let g = radial1(60.0, 1025);
        // β̃ = a·m(4)² with m(4) = π√3/2
        let beta_tilde = (std::f64::consts::PI * 3f64.sqrt() / 2.0).powi(2);
        let params = ModelParams::new(1.0, 1.0, 0.5 * beta_tilde, 4.0, 1).unwrap();
        let init = gaussian_seed(&g, 0.0, 2.0).unwrap();
        let res = minimize(&params, &Potential::Zero, &init, &FlowConfig::default()).unwrap();
        assert_eq!(res.status, FlowStatus::VanishingSpreading);
        assert!(res.energy.total >= -1e-8, "energy {}", res.energy.total);
        assert!(res.energy.total < 1e-3);
    }

    #[test]
    fn critical_trapped_overdose_diverges() {
        // trapped p = p* = 8 with β = 2β_{p*}: infimum -∞.
        let g = radial1(20.0, 1025);
        let beta_star = 9.84753750673093; // (1/2)·m(8)⁴ frozen from the closed form
        let params = ModelParams::new(1.0, 1.0, 2.0 * beta_star, 8.0, 1).unwrap();
        let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
        let init = gaussian_seed(&g, 0.0, 0.5).unwrap();
        let res = minimize(&params, &pot, &init, &FlowConfig::default()).unwrap();
        assert_eq!(res.status, FlowStatus::DivergedUnbounded);
        assert!(res.energy.total < -1e3);
    }

    #[test]
    fn multistart_consistency_and_determinism() {
        let g = radial1(150.0, 513);
        let params = ModelParams::new(1.0, 1.0, 1.0, 2.0, 1).unwrap();
        let cfg = FlowConfig { multistart: 4, ..FlowConfig::default() };
        let a = multistart_minimize(&params, &Potential::Zero, &g, &cfg).unwrap();
        let b = multistart_minimize(&params, &Potential::Zero, &g, &cfg).unwrap();
        assert_eq!(a.status, FlowStatus::Converged);
        // bitwise deterministic
        assert_eq!(a.energy.total.to_bits(), b.energy.total.to_bits());
        for (x, y) in a.u_final.values().iter().zip(b.u_final.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        // each individual converged start lands on the same energy
        for k in 0..4usize {
            let sigma = 150.0 / 16.0 * 2f64.powi(k as i32 - 1);
            let init = gaussian_seed(&g, 0.0, sigma).unwrap();
            let solo = minimize(&params, &Potential::Zero, &init, &cfg).unwrap();
            if solo.status == FlowStatus::Converged {
                assert_abs_diff_eq!(solo.energy.total, a.energy.total, epsilon = 1e-6);
            }
        }
        // multistart = 1 reduces to plain minimize from the middle seed
        let cfg1 = FlowConfig { multistart: 1, ..FlowConfig::default() };
        let single = multistart_minimize(&params, &Potential::Zero, &g, &cfg1).unwrap();
        let direct = minimize(
            &params,
            &Potential::Zero,
            &gaussian_seed(&g, 0.0, 150.0 / 16.0).unwrap(),
            &cfg1,
        )
        .unwrap();
        assert_eq!(single.energy.total.to_bits(), direct.energy.total.to_bits());
    }

    #[test]
    fn minimize_rejects_zero_init() {
        let g = radial1(10.0, 64);
        let params = ModelParams::new(1.0, 1.0, 1.0, 2.0, 1).unwrap();
        let zero = Field::zeros(&g);
        assert!(matches!(
            minimize(&params, &Potential::Zero, &zero, &FlowConfig::default()),
            Err(Error::Usage(_))
        ));
    }
}
