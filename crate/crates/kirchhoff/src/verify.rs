//! The acceptance battery: every verification criterion of the laboratory as
//! a named, self-contained check with pinned tolerances.
//!
//! `run(quick, seed)` executes the battery (or the fast 1-D closed-form
//! subset) and returns one outcome per criterion; the CLI `verify`
//! subcommand and the `acceptance` integration test are both thin wrappers
//! around it. Checks never panic: a failed tolerance or an unexpected
//! solver status produces a failed outcome carrying the measured numbers.
//!
//! The brute-force reference optimizer used by the equivalence check lives
//! here as well: a limited-memory BFGS with finite-difference gradients on
//! the penalized objective `E(v) + μ(∫v² - 1)²`, sharing the quadrature with
//! the flow but none of its machinery.

use crate::blowup::{self, FrameRule, SweepRecord, SweepSpec};
use crate::energy::{dilate, energy, energy_gradient, lagrange_multiplier, ModelParams, Potential};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid, GridKind, GridSpec};
use crate::groundstate::{closed_form_1d, decay_rate, gn_ratio, shoot_ground_state};
use crate::minimize::{
    gaussian_seed, minimize, multistart_minimize, FlowConfig, FlowStatus, MinimizeResult,
};
use crate::thresholds::{beta_p, beta_tilde, classify_existence, compute_report, Regime};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Result of one acceptance check.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckOutcome {
    pub id: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Collects labeled assertions for one check.
struct Probe {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Probe {
    fn new() -> Probe {
        Probe { failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, cond: bool, label: impl Into<String>) {
        let label = label.into();
        if cond {
            self.notes.push(label);
        } else {
            self.failures.push(label);
        }
    }

    fn finish(self, id: &'static str, name: &'static str) -> CheckOutcome {
        if self.failures.is_empty() {
            CheckOutcome { id, name, passed: true, detail: self.notes.join("; ") }
        } else {
            CheckOutcome { id, name, passed: false, detail: self.failures.join("; ") }
        }
    }
}

/// Trend assertion: `max(v_k, floor)` non-increasing over the window.
fn trend_non_increasing(values: &[f64], floor: f64) -> bool {
    values.windows(2).all(|p| p[1].max(floor) <= p[0].max(floor) + 1e-15)
}

struct CheckDef {
    id: &'static str,
    name: &'static str,
    in_quick: bool,
    run: fn(quick: bool, seed: u64) -> Result<CheckOutcome>,
}

const CHECKS: &[CheckDef] = &[
    CheckDef { id: "C1", name: "ground-state shooting vs closed form", in_quick: true, run: c1_ground_state },
    CheckDef { id: "C2", name: "Pohozaev residuals and h2 refinement", in_quick: true, run: c2_pohozaev },
    CheckDef { id: "C3", name: "Gagliardo-Nirenberg sharpness", in_quick: true, run: c3_gn_sharpness },
    CheckDef { id: "C4", name: "free-problem existence trichotomy", in_quick: false, run: c4_trichotomy },
    CheckDef { id: "C5", name: "Sobolev constant of R4", in_quick: true, run: c5_sobolev },
    CheckDef { id: "C6", name: "critical nonexistence", in_quick: false, run: c6_critical_nonexistence },
    CheckDef { id: "C7", name: "trapped existence incl. critical boundary", in_quick: false, run: c7_trapped_existence },
    CheckDef { id: "C8", name: "blow-up scaling laws and concentration", in_quick: false, run: c8_blowup_sweep },
    CheckDef { id: "C9", name: "subcritical sweep convergence to p*", in_quick: false, run: c9_subcritical },
    CheckDef { id: "C10", name: "brute-force optimizer equivalence", in_quick: false, run: c10_brute_force },
    CheckDef { id: "C11", name: "gradient consistency and mass invariant", in_quick: true, run: c11_gradient_mass },
];

/// Run the battery; `quick` restricts to the fast 1-D closed-form subset.
pub fn run(quick: bool, seed: u64) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .filter(|c| !quick || c.in_quick)
        .map(|c| match (c.run)(quick, seed) {
            Ok(outcome) => outcome,
            Err(e) => CheckOutcome {
                id: c.id,
                name: c.name,
                passed: false,
                detail: format!("aborted: {}", e),
            },
        })
        .collect()
}

/// Ids of all checks in execution order.
pub fn check_ids(quick: bool) -> Vec<&'static str> {
    CHECKS.iter().filter(|c| !quick || c.in_quick).map(|c| c.id).collect()
}

/// Run a single check by id (full, non-quick workload).
pub fn run_check(id: &str, seed: u64) -> Result<CheckOutcome> {
    let def = CHECKS
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| Error::Usage(format!("unknown check id {}", id)))?;
    (def.run)(false, seed)
}

// ---------------------------------------------------------------------------
// C1 — shooting vs the 1-D closed form
// ---------------------------------------------------------------------------

fn c1_ground_state(quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let ps: &[f64] = if quick { &[2.0] } else { &[1.0, 2.0, 4.0, 6.0] };
    for &p in ps {
        let gs = shoot_ground_state(1, p, 1e-4)?;
        let oracle = closed_form_1d(p, gs.profile.grid())?;
        let max_err = gs
            .profile
            .values()
            .iter()
            .zip(oracle.profile.values())
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        probe.check(max_err <= 1e-5, format!("p={}: max-norm error {:.2e} <= 1e-5", p, max_err));
        if p == 2.0 {
            let target = 2.0 * 3f64.sqrt();
            let rel = (gs.l2_norm_sq - target).abs() / target;
            probe.check(rel <= 1e-5, format!("p=2: mass off 2sqrt3 by {:.2e} rel <= 1e-5", rel));
        }
    }
    Ok(probe.finish("C1", "ground-state shooting vs closed form"))
}

// ---------------------------------------------------------------------------
// C2 — Pohozaev residuals, with h² shrink under refinement
// ---------------------------------------------------------------------------

fn c2_pohozaev(quick: bool, _seed: u64) -> Result<CheckOutcome> {
    use crate::groundstate::{shoot_ground_state_with, ShootOptions};
    let mut probe = Probe::new();
    let dims: &[u32] = if quick { &[1] } else { &[1, 2, 3] };
    for &dim in dims {
        let n = dim as f64;
        let mut ps = vec![1.0, 4.0 / n, 2.0, 6.0 / n];
        ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ps.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        for p in ps {
            let coarse = shoot_ground_state_with(
                dim,
                p,
                1.0,
                &ShootOptions { nodes: 4096, extent: None, max_refinements: 0 },
            )?;
            let res = coarse.pohozaev_res1.max(coarse.pohozaev_res2);
            probe.check(
                res <= 1e-4,
                format!(
                    "N={}, p={:.3}: residuals ({:.2e},{:.2e}) <= 1e-4",
                    dim, p, coarse.pohozaev_res1, coarse.pohozaev_res2
                ),
            );
            let fine = shoot_ground_state_with(
                dim,
                p,
                1.0,
                &ShootOptions { nodes: 8192, extent: None, max_refinements: 0 },
            )?;
            let shrink = coarse.pohozaev_res1 / fine.pohozaev_res1.max(1e-300);
            probe.check(
                shrink >= 3.0,
                format!("N={}, p={:.3}: doubling M shrinks res1 by {:.2}x >= 3x", dim, p, shrink),
            );
        }
    }
    Ok(probe.finish("C2", "Pohozaev residuals and h2 refinement"))
}

// ---------------------------------------------------------------------------
// C3 — GN sharpness at the ground state, inequality over random fields
// ---------------------------------------------------------------------------

fn random_smooth_field(grid: &Arc<Grid>, rng: &mut ChaCha8Rng) -> Result<Field> {
    let radial = grid.spec().kind == GridKind::RadialHalfLine;
    let span = grid.spec().extent;
    let mut terms = Vec::new();
    for _ in 0..3 {
        let amp: f64 = rng.gen_range(0.2..1.5);
        let center: f64 = if radial { 0.0 } else { rng.gen_range(-0.2 * span..0.2 * span) };
        let sigma: f64 = rng.gen_range(0.5..2.5);
        let bump: f64 = rng.gen_range(0.0..0.5);
        terms.push((amp, center, sigma, bump));
    }
    Field::from_fn(grid, move |x| {
        terms
            .iter()
            .map(|&(a, c, s, b)| {
                let d = (x - c) / s;
                a * (1.0 + b * d * d) * (-0.5 * d * d).exp()
            })
            .sum()
    })
}

fn c3_gn_sharpness(quick: bool, seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let configs: &[(u32, f64)] = if quick { &[(1, 2.0)] } else { &[(1, 2.0), (2, 2.0), (3, 1.0)] };
    for &(dim, p) in configs {
        let gs = shoot_ground_state(dim, p, 1e-5)?;
        let at_gs = gn_ratio(&gs.profile, &gs)?;
        probe.check(
            (at_gs - 1.0).abs() <= 1e-4,
            format!("N={}, p={}: quotient at the ground state = 1{:+.2e}", dim, p, at_gs - 1.0),
        );
        let grid = Grid::new(GridSpec::radial(dim, 16.0, 4096))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((dim as u64) << 8));
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let u = random_smooth_field(&grid, &mut rng)?;
            worst = worst.max(gn_ratio(&u, &gs)?);
        }
        probe.check(
            worst <= 1.0 + 1e-6,
            format!("N={}, p={}: max quotient over 100 random fields {:.6}", dim, p, worst),
        );
    }
    Ok(probe.finish("C3", "Gagliardo-Nirenberg sharpness"))
}

// ---------------------------------------------------------------------------
// C4 — existence trichotomy of the free problem at N = 1
// ---------------------------------------------------------------------------

/// Scale minimizing the dilation trial energy
/// `(a/2)t² + (b/4)t⁴ - (β/(2‖φ‖^p)) t^{Np/2}` (golden section in ln t).
fn free_trial_scale(a: f64, b: f64, beta: f64, p: f64, dim: u32, norm_p: f64) -> f64 {
    let np2 = dim as f64 * p / 2.0;
    let f = |lt: f64| {
        let t: f64 = lt.exp();
        0.5 * a * t * t + 0.25 * b * t.powi(4) - beta / (2.0 * norm_p) * t.powf(np2)
    };
    let (mut lo, mut hi) = (-9.0f64, 7.0f64);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    (0.5 * (lo + hi)).exp()
}

fn c4_trichotomy(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let (a, b) = (1.0, 1.0);
    let flow = FlowConfig { multistart: 3, ..FlowConfig::default() };

    // twelve (p, β-factor) points spanning p < 4/N, p = 4/N, 4/N < p < 8/N
    // and both sides of the threshold where it is positive
    let cases: &[(f64, f64)] = &[
        (1.0, 0.3),
        (1.0, 1.0),
        (2.0, 0.5),
        (2.0, 1.0),
        (4.0, 0.5),
        (4.0, 2.0),
        (5.0, 0.5),
        (5.0, 2.0),
        (6.0, 0.5),
        (6.0, 2.0),
        (7.0, 0.5),
        (7.0, 2.0),
    ];
    for &(p, factor) in cases {
        let gs = shoot_ground_state(1, p, 1e-5)?;
        let bt = beta_tilde(1, p, a, b, &gs)?;
        // below 4/N the threshold is 0 and the factor is the β value itself
        let beta = if bt == 0.0 { factor } else { factor * bt };
        let report = compute_report(1, p, a, b, 1e-5)?;
        let expect = classify_existence(p, beta, false, &report)?.regime;
        let params = ModelParams::new(a, b, beta, p, 1)?;

        let grid = match expect {
            Regime::MinimizerExists => {
                let t_star = free_trial_scale(a, b, beta, p, 1, gs.l2_norm_pow_p());
                let kappa_eff = t_star * decay_rate(1, p);
                let extent = (30.0 / kappa_eff).clamp(40.0, 400.0);
                Grid::new(GridSpec::radial(1, extent, 4096))?
            }
            _ => Grid::new(GridSpec::radial(1, 100.0, 2048))?,
        };
        let res = multistart_minimize(&params, &Potential::Zero, &grid, &flow)?;

        match expect {
            Regime::MinimizerExists => {
                probe.check(
                    res.status == FlowStatus::Converged && res.energy.total < 0.0,
                    format!(
                        "p={}, beta={:.4}: negative minimizer (got {:?} at E={:.3e})",
                        p, beta, res.status, res.energy.total
                    ),
                );
                // scaling-law lower bound d >= -(b(p*-p)/4p)·r_p on the
                // well-resolved supercritical points (at p = 7 the minimizer
                // is only ~8 cells wide and discretization undercuts it)
                if p > 4.0 && p < 7.0 && factor > 1.0 {
                    let bp = beta_p(b, &gs);
                    let d_lower = crate::blowup::d_asymptotic(b, beta, bp, p, 1)?;
                    probe.check(
                        res.energy.total >= d_lower - 1e-6,
                        format!(
                            "p={}: E={:.6e} respects the lower bound {:.6e}",
                            p, res.energy.total, d_lower
                        ),
                    );
                }
                if (p - 4.0).abs() < 1e-12 && factor > 1.0 {
                    // the dilation family is exact at p = 4/N:
                    // d = -(a²/4b)(β/β̃ - 1)²
                    let bound = -(a * a / (4.0 * b)) * (factor - 1.0).powi(2);
                    probe.check(
                        res.energy.total <= bound + 1e-6,
                        format!(
                            "p=4: E={:.8} <= closed-form bound {:.8}+1e-6",
                            res.energy.total, bound
                        ),
                    );
                    probe.check(
                        (res.energy.total - bound).abs() <= 0.1 * bound.abs(),
                        format!("p=4: E={:.8} within 10% of {:.8}", res.energy.total, bound),
                    );
                }
            }
            Regime::NoMinimizerEnergyZero => {
                probe.check(
                    res.status == FlowStatus::VanishingSpreading,
                    format!(
                        "p={}, beta={:.4}: spreading (got {:?} at E={:.3e})",
                        p, beta, res.status, res.energy.total
                    ),
                );
            }
            other => probe.check(false, format!("unexpected regime {:?} in the C4 grid", other)),
        }
    }
    Ok(probe.finish("C4", "free-problem existence trichotomy"))
}

// ---------------------------------------------------------------------------
// C5 — Sobolev constant of R⁴ from the explicit bubble
// ---------------------------------------------------------------------------

fn c5_sobolev(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let s = crate::thresholds::sobolev_constant_4d()?;
    // re-derived: ∫r³/(1+r²)⁴ = B(2,2)/2 = 1/12, so ∫U⁴ = 64·2π²/12 = 32π²/3
    let s2_exact = 32.0 * std::f64::consts::PI.powi(2) / 3.0;
    let rel = (s.s * s.s - s2_exact).abs() / s2_exact;
    probe.check(rel <= 1e-4, format!("S2 = {:.6} off 32pi2/3 by {:.2e} rel <= 1e-4", s.s * s.s, rel));
    let ratio = s.grad_integral / s.quartic_integral;
    probe.check((ratio - 1.0).abs() <= 1e-4, format!("gradient/quartic integral = 1{:+.2e}", ratio - 1.0));
    Ok(probe.finish("C5", "Sobolev constant of R4"))
}

// ---------------------------------------------------------------------------
// C6 — critical nonexistence, free and trapped
// ---------------------------------------------------------------------------

fn c6_critical_nonexistence(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let gs_star = shoot_ground_state(1, 8.0, 1e-5)?;
    let beta_star = beta_p(1.0, &gs_star); // equals the free critical threshold for N <= 3
    let flow = FlowConfig::default();

    for &factor in &[0.5, 2.0] {
        let params = ModelParams::new(1.0, 1.0, factor * beta_star, 8.0, 1)?;
        let grid = if factor < 1.0 {
            Grid::new(GridSpec::radial(1, 100.0, 2048))?
        } else {
            Grid::new(GridSpec::radial(1, 40.0, 4096))?
        };
        let init = gaussian_seed(&grid, 0.0, 1.0)?;
        let res = minimize(&params, &Potential::Zero, &init, &flow)?;
        let converged_negative = res.status == FlowStatus::Converged && res.energy.total < -1e-9;
        probe.check(
            !converged_negative,
            format!(
                "free p=8, beta={:.1}x: no negative minimizer (got {:?}, E={:.3e})",
                factor, res.status, res.energy.total
            ),
        );
    }

    let params = ModelParams::new(1.0, 1.0, 2.0 * beta_star, 8.0, 1)?;
    let grid = Grid::new(GridSpec::radial(1, 20.0, 4096))?;
    let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
    let init = gaussian_seed(&grid, 0.0, 0.5)?;
    let res = minimize(&params, &pot, &init, &flow)?;
    probe.check(
        res.status == FlowStatus::DivergedUnbounded,
        format!("trapped p=8, beta=2x: diverges (got {:?})", res.status),
    );
    probe.check(
        res.energy.total < -1e3,
        format!("trapped p=8, beta=2x: energy passed below -1e3 (got {:.3e})", res.energy.total),
    );
    Ok(probe.finish("C6", "critical nonexistence"))
}

// ---------------------------------------------------------------------------
// C7 — trapped existence, including the critical boundary case
// ---------------------------------------------------------------------------

fn c7_trapped_existence(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let gs_star = shoot_ground_state(1, 8.0, 1e-5)?;
    let beta_star = beta_p(1.0, &gs_star);
    let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
    let flow = FlowConfig { multistart: 3, ..FlowConfig::default() };
    let grid = Grid::new(GridSpec::radial(1, 20.0, 4096))?;

    for &p in &[2.0, 6.0, 7.5] {
        for &factor in &[0.5, 2.0] {
            let params = ModelParams::new(1.0, 1.0, factor * beta_star, p, 1)?;
            let res = multistart_minimize(&params, &pot, &grid, &flow)?;
            probe.check(
                res.status == FlowStatus::Converged,
                format!(
                    "trapped p={}, beta={:.1}x: converged (got {:?}, E={:.4e}, residual {:.1e})",
                    p, factor, res.status, res.energy.total, res.grad_residual
                ),
            );
        }
    }
    // critical boundary: 0 < β ≤ β_{p*} keeps a positive-infimum minimizer
    let params = ModelParams::new(1.0, 1.0, 0.5 * beta_star, 8.0, 1)?;
    let res = multistart_minimize(&params, &pot, &grid, &flow)?;
    probe.check(
        res.status == FlowStatus::Converged && res.energy.total > 0.0,
        format!(
            "trapped p=8, beta=0.5x: positive-energy minimizer (got {:?}, E={:.4e})",
            res.status, res.energy.total
        ),
    );
    Ok(probe.finish("C7", "trapped existence incl. critical boundary"))
}

// ---------------------------------------------------------------------------
// C8 — blow-up sweep: scaling laws, multiplier limit, concentration
// ---------------------------------------------------------------------------

fn sweep_records(
    beta_factor: f64,
    potential: Potential,
    grid: GridSpec,
) -> Result<(Vec<SweepRecord>, f64)> {
    let gs_star = shoot_ground_state(1, 8.0, 1e-5)?;
    let beta = beta_factor * beta_p(1.0, &gs_star);
    let spec = SweepSpec {
        a: 1.0,
        b: 1.0,
        dim: 1,
        beta,
        potential,
        deltas: vec![0.5, 0.3, 0.2, 0.1, 0.05, 0.02],
        grid,
        frame: FrameRule::Auto,
        flow: FlowConfig::default(),
        shoot_tol: 1e-5,
    };
    Ok((blowup::run_sweep(&spec)?, beta))
}

fn c8_blowup_sweep(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let (recs, _) = sweep_records(
        2.0,
        Potential::HarmonicShifted { strength: 1.0, center: 1.0 },
        GridSpec::line(40.0, 4096),
    )?;
    probe.check(recs.iter().all(|r| r.converged), "all sweep points converged");

    let last = recs.last().expect("nonempty schedule");
    let tail: Vec<&SweepRecord> = recs.iter().rev().take(3).rev().collect();
    let floor = 1e-3;

    // final 15% bands at δ = 0.02
    let ratio_d = last.d_measured / last.d_asym;
    probe.check((ratio_d - 1.0).abs() <= 0.15, format!("d/d_asym = {:.4}", ratio_d));
    let t_ratio = (last.grad_sq / last.r_p.sqrt()).powi(2);
    probe.check((t_ratio - 1.0).abs() <= 0.15, format!("T2/r_p = {:.4}", t_ratio));
    let i_ratio = last.interaction_scaled / last.r_p;
    probe.check((i_ratio - 1.0).abs() <= 0.15, format!("interaction/r_p = {:.4}", i_ratio));
    // λ_p ε_p⁴ → -b(4-N)/(2N) = -3b/2 at N = 1
    let lambda_limit = -1.5;
    probe.check(
        (last.lambda_eps4 - lambda_limit).abs() <= 0.15 * lambda_limit.abs(),
        format!("lambda*eps4 = {:.4} vs limit {:.2}", last.lambda_eps4, lambda_limit),
    );
    probe.check(last.profile_dist <= 0.1, format!("profile distance {:.4} <= 0.1", last.profile_dist));
    probe.check(
        (last.center - 1.0).abs() <= 0.5,
        format!("center {:.6} within 0.5 of the trap minimum", last.center),
    );

    // monotone approach over the last three schedule points, down to the
    // numerical noise floor
    let dev_d: Vec<f64> = tail.iter().map(|r| (r.d_measured / r.d_asym - 1.0).abs()).collect();
    probe.check(trend_non_increasing(&dev_d, floor), format!("d/d_asym deviations {:?}", dev_d));
    let dev_t: Vec<f64> =
        tail.iter().map(|r| ((r.grad_sq / r.r_p.sqrt()).powi(2) - 1.0).abs()).collect();
    probe.check(trend_non_increasing(&dev_t, floor), format!("T2/r_p deviations {:?}", dev_t));
    let dev_i: Vec<f64> =
        tail.iter().map(|r| (r.interaction_scaled / r.r_p - 1.0).abs()).collect();
    probe.check(trend_non_increasing(&dev_i, floor), format!("interaction deviations {:?}", dev_i));
    let dists: Vec<f64> = tail.iter().map(|r| r.profile_dist).collect();
    probe.check(trend_non_increasing(&dists, 2e-3), format!("profile distances {:?}", dists));
    let centers: Vec<f64> = tail.iter().map(|r| (r.center - 1.0).abs()).collect();
    probe.check(trend_non_increasing(&centers, 1e-6), format!("center gaps {:?}", centers));
    let vterms: Vec<f64> = tail.iter().map(|r| r.v_term).collect();
    probe.check(
        trend_non_increasing(&vterms, 0.0) && vterms[2] < 1e-6,
        format!("trap energy decreasing toward 0: {:?}", vterms),
    );

    // trapped-vs-free energy gap: nonnegative and fading along the schedule
    // (up to the flat-mode convergence noise of two independent runs; the
    // free sweep runs on the same line geometry so quadrature biases cancel)
    let (free_recs, _) = sweep_records(2.0, Potential::Zero, GridSpec::line(40.0, 4096))?;
    let gaps: Vec<f64> = recs
        .iter()
        .zip(&free_recs)
        .map(|(t, f)| (t.d_measured - f.d_measured) / f.d_measured.abs())
        .collect();
    probe.check(gaps.iter().all(|&g| g >= -2e-4), format!("relative trapped-free gaps {:?}", gaps));
    let tail_gaps: Vec<f64> = gaps.iter().rev().take(3).rev().map(|&g| g.abs()).collect();
    probe.check(trend_non_increasing(&tail_gaps, 2e-4), format!("gap fade {:?}", tail_gaps));
    Ok(probe.finish("C8", "blow-up scaling laws and concentration"))
}

// ---------------------------------------------------------------------------
// C9 — subcritical β: convergence to the critical trapped minimizer
// ---------------------------------------------------------------------------

fn c9_subcritical(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let gs_star = shoot_ground_state(1, 8.0, 1e-5)?;
    let beta = 0.5 * beta_p(1.0, &gs_star);
    let pot = Potential::HarmonicShifted { strength: 1.0, center: 1.0 };
    let grid = Grid::new(GridSpec::line(40.0, 4096))?;
    let flow = FlowConfig { multistart: 3, ..FlowConfig::default() };

    let star_params = ModelParams::new(1.0, 1.0, beta, 8.0, 1)?;
    let star = multistart_minimize(&star_params, &pot, &grid, &flow)?;
    probe.check(
        star.status == FlowStatus::Converged && star.energy.total > 0.0,
        format!("p*: converged positive (got {:?}, E={:.4e})", star.status, star.energy.total),
    );

    let mut prev: Option<MinimizeResult> = None;
    let mut d_gaps = Vec::new();
    let mut u_dists = Vec::new();
    for &delta in &[0.5, 0.3, 0.2, 0.1, 0.05, 0.02] {
        let p = 8.0 - delta;
        let params = ModelParams::new(1.0, 1.0, beta, p, 1)?;
        let res = match &prev {
            Some(r) => minimize(&params, &pot, &r.u_final, &flow)?,
            None => multistart_minimize(&params, &pot, &grid, &flow)?,
        };
        probe.check(
            res.status == FlowStatus::Converged,
            format!("delta={}: converged (got {:?})", delta, res.status),
        );
        d_gaps.push((res.energy.total - star.energy.total).abs());
        u_dists.push(res.u_final.l2_distance(&star.u_final)?);
        prev = Some(res);
    }
    probe.check(
        *d_gaps.last().unwrap() <= 1e-2,
        format!("|d(p) - d(p*)| = {:.3e} <= 1e-2 at delta=0.02", d_gaps.last().unwrap()),
    );
    let d_tail: Vec<f64> = d_gaps.iter().rev().take(3).rev().copied().collect();
    probe.check(trend_non_increasing(&d_tail, 1e-5), format!("d-gap trend {:?}", d_tail));
    probe.check(
        *u_dists.last().unwrap() <= 1e-2,
        format!("L2 distance to the p* minimizer = {:.3e} <= 1e-2", u_dists.last().unwrap()),
    );
    Ok(probe.finish("C9", "subcritical sweep convergence to p*"))
}

// ---------------------------------------------------------------------------
// C10 — brute-force equivalence on a coarse grid
// ---------------------------------------------------------------------------

/// Limited-memory BFGS with finite-difference gradients on the penalized
/// objective; shares the quadrature but none of the flow machinery.
fn lbfgs_penalized(
    params: &ModelParams,
    potential: &Potential,
    grid: &Arc<Grid>,
    start: &Field,
) -> Result<f64> {
    let m_mem = 10;
    let grid_m = grid.len();
    let skip_first = grid.spec().kind == GridKind::FullLine1D;
    let free: Vec<usize> =
        (0..grid_m).filter(|&i| i != grid_m - 1 && !(skip_first && i == 0)).collect();
    let vpot = potential.sample(grid)?;

    let mut x: Vec<f64> = free.iter().map(|&i| start.values()[i]).collect();
    // The penalty weight must dominate the |u|^{p+2} growth of the energy,
    // otherwise the penalized objective is unbounded below along inflation;
    // scaling by the starting |E| keeps the spurious region far away.
    let e_scale = {
        let f = crate::minimize::project_sphere(start)?;
        crate::energy::energy_with_sampled(params, &vpot, &f).total.abs().max(1.0)
    };
    let mu = 1e6 * e_scale;
    let objective = |x: &[f64]| -> Result<f64> {
        let mut vals = vec![0.0; grid_m];
        for (k, &i) in free.iter().enumerate() {
            vals[i] = x[k];
        }
        let f = Field::new(Arc::clone(grid), vals)?;
        let e = crate::energy::energy_with_sampled(params, &vpot, &f);
        let c = f.norm_sq() - 1.0;
        Ok(e.total + mu * c * c)
    };
    let gradient = |x: &[f64]| -> Result<Vec<f64>> {
        let mut g = vec![0.0; x.len()];
        let mut xp = x.to_vec();
        for k in 0..x.len() {
            let h = 1e-6 * (1.0 + x[k].abs());
            xp[k] = x[k] + h;
            let fp = objective(&xp)?;
            xp[k] = x[k] - h;
            let fm = objective(&xp)?;
            xp[k] = x[k];
            g[k] = (fp - fm) / (2.0 * h);
        }
        Ok(g)
    };

    let mut fx = objective(&x)?;
    let mut g = gradient(&x)?;
    let mut s_hist: Vec<Vec<f64>> = Vec::new();
    let mut y_hist: Vec<Vec<f64>> = Vec::new();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let mut retried = false;

    for _ in 0..20_000 {
        let gnorm = dot(&g, &g).sqrt();
        if gnorm <= 1e-8 * fx.abs().max(1.0) {
            break;
        }
        // two-loop recursion for the search direction
        let mut q = g.clone();
        let mut alphas = Vec::with_capacity(s_hist.len());
        for (s, y) in s_hist.iter().zip(&y_hist).rev() {
            let rho = 1.0 / dot(y, s);
            let alpha = rho * dot(s, &q);
            for (qi, yi) in q.iter_mut().zip(y) {
                *qi -= alpha * yi;
            }
            alphas.push((alpha, rho));
        }
        let scale = if let (Some(s), Some(y)) = (s_hist.last(), y_hist.last()) {
            dot(s, y) / dot(y, y)
        } else {
            1e-6
        };
        for qi in q.iter_mut() {
            *qi *= scale;
        }
        for ((s, y), &(alpha, rho)) in s_hist.iter().zip(&y_hist).zip(alphas.iter().rev()) {
            let beta = rho * dot(y, &q);
            for (qi, si) in q.iter_mut().zip(s) {
                *qi += (alpha - beta) * si;
            }
        }
        // stale-memory guard: fall back to scaled steepest descent
        let mut descent = dot(&g, &q);
        if !(descent > 1e-18 * gnorm * dot(&q, &q).sqrt()) {
            s_hist.clear();
            y_hist.clear();
            q = g.iter().map(|v| v * 1e-6).collect();
            descent = dot(&g, &q);
        }
        // Armijo backtracking along -q
        let dir: Vec<f64> = q.iter().map(|v| -v).collect();
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let xn: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            let fn_ = objective(&xn)?;
            if fn_ <= fx - 1e-4 * step * descent {
                let gn = gradient(&xn)?;
                let s: Vec<f64> = xn.iter().zip(&x).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
                if dot(&s, &y) > 1e-14 {
                    s_hist.push(s);
                    y_hist.push(y);
                    if s_hist.len() > m_mem {
                        s_hist.remove(0);
                        y_hist.remove(0);
                    }
                }
                x = xn;
                fx = fn_;
                g = gn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            if retried || s_hist.is_empty() {
                break;
            }
            // one fresh start with cleared curvature memory
            s_hist.clear();
            y_hist.clear();
            retried = true;
        }
    }

    // project the penalized optimum back to the sphere and report its energy
    let mut vals = vec![0.0; grid_m];
    for (k, &i) in free.iter().enumerate() {
        vals[i] = x[k];
    }
    let f = crate::minimize::project_sphere(&Field::new(Arc::clone(grid), vals)?)?;
    Ok(crate::energy::energy_with_sampled(params, &vpot, &f).total)
}

fn c10_brute_force(_quick: bool, _seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let m6 = 2.3399866454989773f64; // 1-D ∫φ₆², frozen closed form
    let configs: &[(&str, ModelParams, Potential, GridSpec)] = &[
        (
            "free p=2",
            ModelParams::new(1.0, 1.0, 6.0, 2.0, 1)?,
            Potential::Zero,
            GridSpec::radial(1, 22.0, 64),
        ),
        (
            "trapped p=3",
            ModelParams::new(1.0, 1.0, 2.0, 3.0, 1)?,
            Potential::HarmonicShifted { strength: 1.0, center: 0.0 },
            GridSpec::line(12.0, 64),
        ),
        (
            "free p=6",
            ModelParams::new(1.0, 1.0, 1.2 * 2f64.sqrt() * m6 * m6 * m6, 6.0, 1)?,
            Potential::Zero,
            GridSpec::radial(1, 10.0, 64),
        ),
    ];
    for (label, params, pot, gspec) in configs {
        let grid = Grid::new(*gspec)?;
        let flow = FlowConfig { multistart: 3, ..FlowConfig::default() };
        let res = multistart_minimize(params, pot, &grid, &flow)?;
        probe.check(
            res.status == FlowStatus::Converged,
            format!("{}: flow converged (got {:?})", label, res.status),
        );
        let oracle = lbfgs_penalized(params, pot, &grid, &res.u_final)?;
        // also run the oracle from a generic start and keep the better optimum
        let generic = gaussian_seed(&grid, pot.argmin_on(&grid)?, grid.spec().extent / 6.0)?;
        let oracle2 = lbfgs_penalized(params, pot, &grid, &generic)?;
        let best = oracle.min(oracle2);
        probe.check(
            (res.energy.total - best).abs() <= 1e-5,
            format!(
                "{}: flow E={:.9e} vs brute-force E={:.9e} (diff {:.1e})",
                label,
                res.energy.total,
                best,
                (res.energy.total - best).abs()
            ),
        );
    }
    Ok(probe.finish("C10", "brute-force optimizer equivalence"))
}

// ---------------------------------------------------------------------------
// C11 — gradient consistency and the flow mass invariant
// ---------------------------------------------------------------------------

fn c11_gradient_mass(_quick: bool, seed: u64) -> Result<CheckOutcome> {
    let mut probe = Probe::new();
    let configs: &[(&str, ModelParams, Potential, GridSpec)] = &[
        (
            "line N=1 p=2.5",
            ModelParams::new(1.0, 0.7, 1.2, 2.5, 1)?,
            Potential::HarmonicShifted { strength: 0.5, center: 0.0 },
            GridSpec::line(10.0, 797),
        ),
        (
            "radial N=1 p=6",
            ModelParams::new(2.0, 1.0, 0.8, 6.0, 1)?,
            Potential::Zero,
            GridSpec::radial(1, 10.0, 613),
        ),
        (
            "radial N=2 p=2",
            ModelParams::new(1.0, 1.0, 1.0, 2.0, 2)?,
            Potential::HarmonicShifted { strength: 1.0, center: 0.0 },
            GridSpec::radial(2, 10.0, 513),
        ),
    ];
    for (label, params, pot, gspec) in configs {
        let grid = Grid::new(*gspec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51a7);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let u = random_smooth_field(&grid, &mut rng)?;
            let hdir = random_smooth_field(&grid, &mut rng)?;
            let g = energy_gradient(params, pot, &u)?;
            let eps = 1e-5;
            let shift = |s: f64| -> Result<Field> {
                Field::new(
                    Arc::clone(&grid),
                    u.values().iter().zip(hdir.values()).map(|(&a, &b)| a + s * b).collect(),
                )
            };
            let fd = (energy(params, pot, &shift(eps)?)?.total
                - energy(params, pot, &shift(-eps)?)?.total)
                / (2.0 * eps);
            let gh = g.inner(&hdir)?;
            let scale = (g.norm_sq().sqrt() * hdir.norm_sq().sqrt()).max(1e-12);
            worst = worst.max((fd - gh).abs() / scale);
        }
        probe.check(
            worst <= 1e-5,
            format!("{}: worst FD-vs-gradient relative error {:.2e} <= 1e-5", label, worst),
        );
    }

    // mass invariant along an accepted-step trajectory
    let grid = Grid::new(GridSpec::line(20.0, 1025))?;
    let params = ModelParams::new(1.0, 1.0, 2.0, 3.0, 1)?;
    let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
    let init = gaussian_seed(&grid, 0.3, 2.0)?;
    let res = minimize(&params, &pot, &init, &FlowConfig::default())?;
    probe.check(
        res.mass_dev_max <= 1e-12,
        format!("max |mass - 1| over accepted steps = {:.2e} <= 1e-12", res.mass_dev_max),
    );

    // multiplier recomputation at the converged trapped minimizer
    let lam = lagrange_multiplier(&params, &pot, &res.u_final)?;
    probe.check(
        (lam - res.lambda).abs() <= 1e-9 * lam.abs().max(1.0),
        format!("multiplier recomputation agrees: {:.6e} vs {:.6e}", lam, res.lambda),
    );

    // dilation sanity: mass preserved, Dirichlet energy scales by t²
    let gs = shoot_ground_state(1, 2.0, 1e-5)?;
    let phi_hat = gs.normalized();
    let ut = dilate(&phi_hat, 2.0)?;
    probe.check(
        (ut.norm_sq() - 1.0).abs() <= 1e-4,
        format!("dilation mass defect {:.2e} <= 1e-4", (ut.norm_sq() - 1.0).abs()),
    );
    probe.check(
        (ut.grad_sq() / (4.0 * phi_hat.grad_sq()) - 1.0).abs() <= 1e-3,
        "dilation scales the Dirichlet energy by t^2",
    );
    Ok(probe.finish("C11", "gradient consistency and mass invariant"))
}
