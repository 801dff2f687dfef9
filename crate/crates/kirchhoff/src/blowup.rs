//! p ↗ p* = 8/N sweeps that exhibit the blow-up laws of the minimizers.
//!
//! For fixed β the natural scale of the problem is
//!
//! ```text
//!   r_p = (β p / (β_p p*))^{p*/(p*-p)},          ε_p = r_p^{-1/4},
//! ```
//!
//! which blows up as p ↗ p* whenever β > β_{p*}. Along that limit the
//! minimizer satisfies the asymptotic laws
//!
//! ```text
//!   d(p) ≈ -(b(p*-p)/4p) r_p,      (∫|∇u_p|²)² ≈ (4β/(b(p+2)))∫u_p^{p+2} ≈ r_p,
//!   λ_p ε_p⁴ → -b(4-N)/(2N),       ∫V u_p² → 0,
//! ```
//!
//! and the rescaled profile `ε_p^{N/2} u_p(ε_p x + center)` converges to the
//! normalized critical ground state, concentrating at a minimum point of V.
//!
//! Once ε_p drops below a few grid cells the fixed-frame problem is
//! unresolvable, so the sweep switches to the rescaled frame: minimizing the
//! energy of w(y) = ε^{N/2} u(εy + c) over the sphere is the same problem
//! with coefficients (aε², b, β_p p*/p) and potential ε⁴V(c + εy), all O(1)
//! or smaller, and the physical energy is recovered as `r_p · E_w` (every
//! record field maps back by an exact power of ε). The center c is an outer
//! variational parameter, optimized against V after each flow.

use crate::energy::{dilate, ModelParams, Potential};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, GridKind, GridSpec};
use crate::groundstate::{shoot_ground_state, GroundStateProfile};
use crate::interp::MonotoneCubic;
use crate::minimize::{minimize, multistart_minimize, FlowConfig, FlowStatus, MinimizeResult};
use crate::thresholds::beta_p;
use std::sync::Arc;

/// Scale parameter `r_p = (βp/(β_p p*))^{p*/(p*-p)}`; strictly increasing
/// and unbounded as p ↗ p* when the base exceeds 1.
pub fn r_p(beta: f64, beta_p_val: f64, p: f64, dim: u32) -> Result<f64> {
    if !(1..=4).contains(&dim) {
        return Err(Error::Config(format!("dimension must be 1..=4, got {}", dim)));
    }
    if !(beta > 0.0 && beta_p_val > 0.0) {
        return Err(Error::Config("beta and beta_p must be positive".to_string()));
    }
    let p_star = 8.0 / dim as f64;
    if !(p > 0.0 && p < p_star - 1e-12) {
        return Err(Error::Range(format!("r_p needs 0 < p < p* = {}, got {}", p_star, p)));
    }
    let base = beta * p / (beta_p_val * p_star);
    Ok(base.powf(p_star / (p_star - p)))
}

/// Leading asymptotic value of the free infimum,
/// `d ≈ -(b(p*-p)/(4p)) r_p`; always negative.
pub fn d_asymptotic(b: f64, beta: f64, beta_p_val: f64, p: f64, dim: u32) -> Result<f64> {
    let rp = r_p(beta, beta_p_val, p, dim)?;
    let p_star = 8.0 / dim as f64;
    Ok(-(b * (p_star - p) / (4.0 * p)) * rp)
}

/// Blow-up frame change `w(x) = eps^{N/2} u_p(eps·x + center)` resampled on
/// `reference`; preserves the L² mass up to interpolation error and errors
/// out when the rescaled support cannot be represented.
pub fn rescale_minimizer(
    reference: &Arc<Grid>,
    u_p: &Field,
    eps: f64,
    center: f64,
) -> Result<Field> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {}", eps)));
    }
    let src = u_p.grid();
    let itp = MonotoneCubic::new(src.nodes()[0], src.spacing(), u_p.values());
    let n_half = src.spec().dim as f64 / 2.0;
    let scale = eps.powf(n_half);
    let eval = |x: f64| {
        let arg = eps * x + center;
        let arg = match src.spec().kind {
            GridKind::RadialHalfLine => arg.abs(),
            GridKind::FullLine1D => arg,
        };
        scale * itp.eval_or_zero(arg)
    };
    let w = Field::from_fn(reference, eval)?;
    let m0 = u_p.norm_sq();
    let m1 = w.norm_sq();
    if m0 > 0.0 && (m1 - m0).abs() > 1e-3 * m0 {
        return Err(Error::Resolution(format!(
            "rescaled support exceeds the reference grid (mass {:.6e} -> {:.6e} at eps = {:.3e})",
            m0, m1, eps
        )));
    }
    Ok(w)
}

/// |u|²-mass centroid on line grids; identically 0 on radial grids.
pub fn concentration_center(u: &Field) -> Result<f64> {
    let mass = u.norm_sq();
    if !(mass > 0.0) {
        return Err(Error::Domain("concentration center of the zero field".to_string()));
    }
    match u.grid().spec().kind {
        GridKind::RadialHalfLine => Ok(0.0),
        GridKind::FullLine1D => {
            let mut first = 0.0;
            for ((&ui, &wi), &xi) in
                u.values().iter().zip(u.grid().weights()).zip(u.grid().nodes())
            {
                first += wi * xi * ui * ui;
            }
            Ok(first / mass)
        }
    }
}

/// L² distance between the re-centered profile `w` and the normalized
/// critical ground state.
pub fn profile_distance(w: &Field, reference_gs: &GroundStateProfile) -> Result<f64> {
    let mass = w.norm_sq();
    if (mass - 1.0).abs() > 1e-3 {
        return Err(Error::Usage(format!(
            "profile_distance expects a normalized field, got ∫w² = {}",
            mass
        )));
    }
    let center = concentration_center(w)?;
    let phi_hat = reference_gs.normalized();
    let src = phi_hat.grid();
    let itp = MonotoneCubic::new(src.nodes()[0], src.spacing(), phi_hat.values());
    let mut acc = 0.0;
    for ((&wi, &xi), &qi) in w.values().iter().zip(w.grid().nodes()).zip(w.grid().weights()) {
        let d = wi - itp.eval_or_zero((xi - center).abs());
        acc += qi * d * d;
    }
    Ok(acc.sqrt())
}

/// Frame selection rule for the sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum FrameRule {
    /// Rescaled solve once ε_p < 8h (fixed-frame resolution collapse).
    Auto,
    /// Fixed frame only (for subcritical-β sweeps and diagnostics).
    Never,
}

/// Specification of one p ↗ p* sweep.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub a: f64,
    pub b: f64,
    pub dim: u32,
    /// Fixed coupling β (absolute value).
    pub beta: f64,
    pub potential: Potential,
    /// Decreasing gaps δ_k; the schedule runs p_k = p* - δ_k.
    pub deltas: Vec<f64>,
    /// Fixed (physical) frame grid.
    pub grid: GridSpec,
    pub frame: FrameRule,
    pub flow: FlowConfig,
    /// Shooting tolerance for the per-point ground states.
    pub shoot_tol: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.dim != self.grid.dim {
            return Err(Error::Config("sweep dimension disagrees with the grid".to_string()));
        }
        if self.dim == 4 {
            return Err(Error::Unsupported(
                "sweeps run the asymptotic regime, established for N <= 3".to_string(),
            ));
        }
        if !(self.a > 0.0 && self.b > 0.0 && self.beta > 0.0) {
            return Err(Error::Config("sweeps need a, b, beta > 0".to_string()));
        }
        if self.deltas.is_empty() {
            return Err(Error::Config("empty sweep schedule".to_string()));
        }
        let p_star = 8.0 / self.dim as f64;
        let mass_gap = p_star - 4.0 / self.dim as f64;
        for pair in self.deltas.windows(2) {
            if pair[1] >= pair[0] {
                return Err(Error::Config("sweep gaps must decrease strictly".to_string()));
            }
        }
        for &d in &self.deltas {
            if !(d > 0.0 && d < mass_gap) {
                return Err(Error::Config(format!(
                    "every gap must satisfy 0 < δ < 4/N so that p ∈ (4/N, p*); got {}",
                    d
                )));
            }
        }
        Ok(())
    }
}

/// One row of a sweep: every asymptotic observable at p = p* - δ.
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepRecord {
    pub p: f64,
    pub delta: f64,
    /// Converged energy E(u_p) (the measured d_β(p)).
    pub d_measured: f64,
    /// Closed-form asymptote -(b(p*-p)/4p)·r_p.
    pub d_asym: f64,
    pub r_p: f64,
    pub eps_p: f64,
    /// ∫|∇u_p|² in the physical frame.
    pub grad_sq: f64,
    /// (4β/(b(p+2)))·∫|u_p|^{p+2}; ≈ r_p in the blow-up limit.
    pub interaction_scaled: f64,
    /// λ_p·ε_p⁴; → -b(4-N)/(2N).
    pub lambda_eps4: f64,
    /// ∫V u_p².
    pub v_term: f64,
    /// L² distance of the rescaled, re-centered profile to the critical
    /// ground state (NaN when the frame change is not representable).
    pub profile_dist: f64,
    /// Concentration center in physical coordinates.
    pub center: f64,
    pub converged: bool,
    /// Whether this point was solved in the rescaled frame.
    pub rescaled_frame: bool,
}

enum SweepState {
    Fixed { u: Field, center: f64 },
    Rescaled { w: Field, center: f64 },
}

/// Run the sweep: warm-started minimization at each schedule point, with the
/// mandatory change to the rescaled frame once ε_p < 8h, and an outer
/// optimization of the concentration center against the potential.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let p_star = 8.0 / spec.dim as f64;
    let gs_star = shoot_ground_state(spec.dim, p_star, spec.shoot_tol)?;
    let fixed_grid = Grid::new(spec.grid)?;
    let h = fixed_grid.spacing();
    // Rescaled-frame grid: the profile has unit scale and decays at a rate
    // bounded below by sqrt((4-N)/(4N)). The resolution must be generous:
    // the energy valley along the dilation mode flattens like p* - p, so an
    // O(h²) quadrature bias shifts the converged scale by O(h²/(p*-p)) —
    // at the smallest scheduled gaps this grid keeps that shift below the
    // asymptotic tolerances.
    let w_spec = match spec.grid.kind {
        GridKind::FullLine1D => GridSpec::line(24.0, 49_153),
        GridKind::RadialHalfLine => GridSpec::radial(spec.dim, 24.0, 49_153),
    };
    let w_grid = Grid::new(w_spec)?;

    let mut records = Vec::with_capacity(spec.deltas.len());
    let mut state: Option<SweepState> = None;

    for &delta in &spec.deltas {
        let p = p_star - delta;
        let gs = shoot_ground_state(spec.dim, p, spec.shoot_tol)?;
        let bp = beta_p(spec.b, &gs);
        let rp = r_p(spec.beta, bp, p, spec.dim)?;
        let q = rp.powf(0.25);
        let eps = q.recip();
        let d_asym = -(spec.b * (p_star - p) / (4.0 * p)) * rp;
        let use_rescaled = spec.frame == FrameRule::Auto && eps < 8.0 * h;

        let record = if use_rescaled {
            solve_rescaled_point(spec, &w_grid, &fixed_grid, &gs_star, p, delta, rp, eps, bp, &mut state, d_asym)?
        } else {
            solve_fixed_point(spec, &fixed_grid, &w_grid, &gs_star, p, delta, rp, eps, &mut state, d_asym)?
        };
        records.push(record);
    }
    Ok(records)
}

#[allow(clippy::too_many_arguments)]
fn solve_fixed_point(
    spec: &SweepSpec,
    fixed_grid: &Arc<Grid>,
    w_grid: &Arc<Grid>,
    gs_star: &GroundStateProfile,
    p: f64,
    delta: f64,
    rp: f64,
    eps: f64,
    state: &mut Option<SweepState>,
    d_asym: f64,
) -> Result<SweepRecord> {
    let params = ModelParams::new(spec.a, spec.b, spec.beta, p, spec.dim)?;
    let res = match state {
        Some(SweepState::Fixed { u, .. }) => {
            // warm start from the previous minimizer, dilated to the new
            // predicted scale when the scales are meaningful (r_p > 1)
            let seeded = if rp > 1.0 {
                let t_prev = u.grad_sq().sqrt().max(1e-12);
                let t_new = rp.sqrt().sqrt(); // predicted sqrt(T) = r_p^{1/4}
                dilate(u, (t_new / t_prev).clamp(0.25, 4.0)).unwrap_or_else(|_| u.clone())
            } else {
                u.clone()
            };
            minimize(&params, &spec.potential, &seeded, &spec.flow)?
        }
        _ => multistart_minimize(&params, &spec.potential, fixed_grid, &spec.flow)?,
    };
    let u = res.u_final.clone();
    let center = concentration_center(&u)?;
    let t = u.grad_sq();
    let inter = u.integrate_of(|v| v.abs().powf(p + 2.0));
    let profile_dist = if eps < 2.0 {
        rescale_minimizer(w_grid, &u, eps, center)
            .and_then(|w| {
                let wn = crate::minimize::project_sphere(&w)?;
                profile_distance(&wn, gs_star)
            })
            .unwrap_or(f64::NAN)
    } else {
        f64::NAN
    };
    let record = SweepRecord {
        p,
        delta,
        d_measured: res.energy.total,
        d_asym,
        r_p: rp,
        eps_p: eps,
        grad_sq: t,
        interaction_scaled: 4.0 * spec.beta / (spec.b * (p + 2.0)) * inter,
        lambda_eps4: res.lambda * eps.powi(4),
        v_term: 2.0 * res.energy.potential,
        profile_dist,
        center,
        converged: res.status == FlowStatus::Converged,
        rescaled_frame: false,
    };
    *state = Some(SweepState::Fixed { u, center });
    Ok(record)
}

/// Potential term of the w-frame as a tabulated field: ε⁴·V(c + εy).
fn rescaled_potential(
    potential: &Potential,
    w_grid: &Arc<Grid>,
    eps: f64,
    center: f64,
) -> Result<Potential> {
    if potential.is_zero() {
        return Ok(Potential::Zero);
    }
    let e4 = eps.powi(4);
    let vals: Result<Vec<f64>> = match potential {
        Potential::HarmonicShifted { strength, center: c0 } => Ok(w_grid
            .nodes()
            .iter()
            .map(|&y| {
                let x = center + eps * y - c0;
                e4 * strength * x * x
            })
            .collect()),
        Potential::PowerRadial { exponent } => Ok(w_grid
            .nodes()
            .iter()
            .map(|&y| e4 * (center + eps * y).abs().powf(*exponent))
            .collect()),
        Potential::Tabulated(f) => {
            let src = f.grid();
            let itp = MonotoneCubic::new(src.nodes()[0], src.spacing(), f.values());
            Ok(w_grid
                .nodes()
                .iter()
                .map(|&y| {
                    let x = center + eps * y;
                    let x = match src.spec().kind {
                        GridKind::RadialHalfLine => x.abs(),
                        GridKind::FullLine1D => x,
                    };
                    e4 * itp.eval_or_zero(x)
                })
                .collect())
        }
        Potential::Zero => unreachable!(),
    };
    Ok(Potential::Tabulated(Field::new(Arc::clone(w_grid), vals?)?))
}

/// Optimal concentration center: minimize c ↦ ∫V(c + εy) w²(y) dy by golden
/// section around the current estimate.
fn optimize_center(
    potential: &Potential,
    w: &Field,
    eps: f64,
    c0: f64,
    halfwidth: f64,
) -> Result<f64> {
    if potential.is_zero() {
        return Ok(c0);
    }
    let value = |c: f64| -> Result<f64> {
        let vw = rescaled_potential(potential, w.grid(), eps, c)?;
        let v = vw.sample(w.grid())?;
        let mut acc = 0.0;
        for ((&wi, &qi), &vi) in w.values().iter().zip(w.grid().weights()).zip(&v) {
            acc += qi * vi * wi * wi;
        }
        Ok(acc)
    };
    let (mut lo, mut hi) = (c0 - halfwidth, c0 + halfwidth);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = value(x1)?;
    let mut f2 = value(x2)?;
    for _ in 0..80 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = value(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = value(x2)?;
        }
        if hi - lo < 1e-12 * (1.0 + c0.abs()) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[allow(clippy::too_many_arguments)]
fn solve_rescaled_point(
    spec: &SweepSpec,
    w_grid: &Arc<Grid>,
    fixed_grid: &Arc<Grid>,
    gs_star: &GroundStateProfile,
    p: f64,
    delta: f64,
    rp: f64,
    eps: f64,
    bp: f64,
    state: &mut Option<SweepState>,
    d_asym: f64,
) -> Result<SweepRecord> {
    let p_star = 8.0 / spec.dim as f64;
    // exact algebraic form of β ε^{4-Np/2}: avoids the huge intermediate power
    let beta_w = bp * p_star / p;
    let params_w = ModelParams::new(spec.a * eps * eps, spec.b, beta_w, p, spec.dim)?;

    // center and seed
    let (mut center, seed) = match state {
        Some(SweepState::Rescaled { w, center }) => (*center, Some(w.clone())),
        Some(SweepState::Fixed { u, center }) => {
            let seed = rescale_minimizer(w_grid, u, eps, *center)
                .and_then(|w| crate::minimize::project_sphere(&w))
                .ok();
            (*center, seed)
        }
        None => {
            // no previous point: localize the trap minimum in the fixed
            // frame when the scale is at all representable, otherwise start
            // from the sampled potential minimum
            if eps >= 0.25 * fixed_grid.spacing() {
                let params = ModelParams::new(spec.a, spec.b, spec.beta, p, spec.dim)?;
                let res = multistart_minimize(&params, &spec.potential, fixed_grid, &spec.flow)?;
                let c = concentration_center(&res.u_final)?;
                let seed = rescale_minimizer(w_grid, &res.u_final, eps, c)
                    .and_then(|w| crate::minimize::project_sphere(&w))
                    .ok();
                (c, seed)
            } else {
                (spec.potential.argmin_on(fixed_grid)?, None)
            }
        }
    };

    // alternate flow and center optimization; the coupling is O(ε⁴) so two
    // passes settle it
    let mut result: Option<MinimizeResult> = None;
    let mut w_cur = seed;
    for _ in 0..2 {
        let pot_w = rescaled_potential(&spec.potential, w_grid, eps, center)?;
        let res = match &w_cur {
            Some(w) => minimize(&params_w, &pot_w, w, &spec.flow)?,
            None => multistart_minimize(&params_w, &pot_w, w_grid, &spec.flow)?,
        };
        w_cur = Some(res.u_final.clone());
        let halfwidth = (1.0 + 4.0 * eps).min(fixed_grid.spec().extent / 4.0);
        center = optimize_center(&spec.potential, &res.u_final, eps, center, halfwidth)?;
        result = Some(res);
        if spec.potential.is_zero() {
            break;
        }
    }
    let res = result.expect("at least one rescaled solve ran");
    let w = res.u_final.clone();

    // map the w-frame quantities back to the physical frame
    let t_w = w.grad_sq();
    let p_w = w.integrate_of(|v| v.abs().powf(p + 2.0));
    let d_measured = rp * res.energy.total;
    let grad_sq_u = rp.sqrt() * t_w;
    let interaction_scaled = 4.0 / (spec.b * (p + 2.0)) * rp * beta_w * p_w;
    let lambda_eps4 = res.lambda; // λ_u ε⁴ = λ_w exactly
    let v_term = 2.0 * rp * res.energy.potential;
    let centroid_w = concentration_center(&w)?;
    let center_u = center + eps * centroid_w;
    let profile_dist = profile_distance(&w, gs_star).unwrap_or(f64::NAN);

    let record = SweepRecord {
        p,
        delta,
        d_measured,
        d_asym,
        r_p: rp,
        eps_p: eps,
        grad_sq: grad_sq_u,
        interaction_scaled,
        lambda_eps4,
        v_term,
        profile_dist,
        center: center_u,
        converged: res.status == FlowStatus::Converged,
        rescaled_frame: true,
    };
    *state = Some(SweepState::Rescaled { w, center });
    Ok(record)
}
