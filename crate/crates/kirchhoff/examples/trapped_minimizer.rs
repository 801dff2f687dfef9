//! Trapped minimization: with a confining potential the subcritical problem
//! always has a minimizer, while at the critical exponent p* = 8/N the
//! threshold β_{p*} = (b/2)‖φ_{p*}‖^{p*} separates a positive-infimum
//! minimizer from collapse to -∞.
//!
//! ```text
//! cargo run --release --example trapped_minimizer
//! ```

use kirchhoff::energy::{ModelParams, Potential};
use kirchhoff::grid::{Grid, GridSpec};
use kirchhoff::groundstate::shoot_ground_state;
use kirchhoff::minimize::{multistart_minimize, FlowConfig};
use kirchhoff::thresholds::beta_p;

fn main() -> kirchhoff::Result<()> {
    let gs_star = shoot_ground_state(1, 8.0, 1e-5)?;
    let beta_star = beta_p(1.0, &gs_star);
    println!("critical threshold beta_p* = {:.6}\n", beta_star);

    let pot = Potential::HarmonicShifted { strength: 1.0, center: 0.0 };
    let grid = Grid::new(GridSpec::radial(1, 20.0, 4096))?;
    let flow = FlowConfig { multistart: 3, ..FlowConfig::default() };

    println!("{:<8} {:>10} {:>22} {:>14}", "p", "beta", "status", "energy");
    for (p, factor) in [(2.0, 0.5), (2.0, 2.0), (6.0, 2.0), (7.5, 2.0), (8.0, 0.5), (8.0, 2.0)] {
        let beta = factor * beta_star;
        let params = ModelParams::new(1.0, 1.0, beta, p, 1)?;
        let res = multistart_minimize(&params, &pot, &grid, &flow)?;
        println!(
            "{:<8} {:>10.4} {:>22} {:>14.6e}",
            p,
            beta,
            format!("{:?}", res.status),
            res.energy.total
        );
    }
    println!("\nAt p = 8 the sign of beta - beta_p* decides between a positive-energy");
    println!("bound state and an unbounded concentration plunge.");
    Ok(())
}
