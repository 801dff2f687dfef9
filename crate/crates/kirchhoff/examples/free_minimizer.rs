//! Minimize the free (V = 0) energy on the unit L² sphere and cross-check
//! the converged state: negative energy below the dilation upper bound, and
//! the Lagrange multiplier by two independent routes.
//!
//! ```text
//! cargo run --release --example free_minimizer
//! ```

use kirchhoff::energy::{lambda_pohozaev, ModelParams, Potential};
use kirchhoff::grid::{Grid, GridSpec};
use kirchhoff::minimize::{multistart_minimize, FlowConfig};
use kirchhoff::thresholds::compute_report;

fn main() -> kirchhoff::Result<()> {
    let params = ModelParams::new(1.0, 1.0, 1.0, 2.0, 1)?;
    let grid = Grid::new(GridSpec::radial(1, 150.0, 4096))?;
    let report = compute_report(1, params.p, params.a, params.b, 1e-5)?;
    println!(
        "p = {}, beta = {} > beta_tilde = {}: a negative minimizer exists",
        params.p,
        params.beta,
        report.beta_tilde.unwrap()
    );

    let res = multistart_minimize(&params, &Potential::Zero, &grid, &FlowConfig::default())?;
    println!("status      : {:?}", res.status);
    println!("energy      : {:.10e}", res.energy.total);
    println!("  kinetic   : {:.6e}", res.energy.kinetic);
    println!("  kirchhoff : {:.6e}", res.energy.kirchhoff);
    println!("  interaction {:.6e}", res.energy.interaction);
    println!("iterations  : {}", res.iterations);
    println!("residual    : {:.3e}", res.grad_residual);

    // multiplier by the constraint formula and by the virial identity
    let lam_pohozaev = lambda_pohozaev(&params, &Potential::Zero, &res.u_final)?;
    println!("lambda      : {:.8e} (constraint)  {:.8e} (virial route)", res.lambda, lam_pohozaev);

    // the dilation family gives an explicit upper bound for the infimum
    let gs = kirchhoff::groundstate::shoot_ground_state(1, params.p, 1e-5)?;
    let norm_p = gs.l2_norm_pow_p();
    let trial = |t: f64| {
        0.5 * params.a * t * t + 0.25 * params.b * t.powi(4)
            - params.beta / (2.0 * norm_p) * t.powf(params.dim as f64 * params.p / 2.0)
    };
    let best_trial = (1..4000).map(|k| trial(k as f64 * 1e-3)).fold(f64::INFINITY, f64::min);
    println!("dilation-family upper bound: {:.10e} >= measured {:.10e}", best_trial, res.energy.total);
    Ok(())
}
