//! The sharp interpolation inequality
//! `∫|u|^{p+2} <= C(p,N) (∫|∇u|²)^{Np/4} (∫u²)^{1+(p/4)(2-N)}`
//! with `C = (p+2)/(2‖φ_p‖^p)`: saturated exactly by the ground state,
//! strict for everything else, invariant under rescaling and dilation.
//!
//! ```text
//! cargo run --release --example gn_inequality
//! ```

use kirchhoff::energy::dilate;
use kirchhoff::grid::Field;
use kirchhoff::groundstate::{gn_constant, gn_ratio, shoot_ground_state};

fn main() -> kirchhoff::Result<()> {
    let gs = shoot_ground_state(1, 2.0, 1e-5)?;
    println!("N=1, p=2: sharp constant C = {:.8} (closed form 1/sqrt(3) = {:.8})", gn_constant(&gs), 1.0 / 3f64.sqrt());

    let grid = gs.profile.grid();
    let quotient = |label: &str, u: &Field| -> kirchhoff::Result<()> {
        println!("  quotient at {:<28} = {:.8}", label, gn_ratio(u, &gs)?);
        Ok(())
    };

    quotient("the ground state", &gs.profile)?;
    quotient("3x the ground state", &Field::from_fn(grid, {
        let amp = 3.0;
        move |x| amp * (3f64.sqrt() / (3f64.sqrt() * x).cosh())
    })?)?;
    let phi_hat = gs.normalized();
    quotient("the dilated ground state t=2", &dilate(&phi_hat, 2.0)?)?;
    quotient("a unit-width Gaussian", &Field::from_fn(grid, |x| (-x * x / 2.0).exp())?)?;
    quotient("a wide Gaussian", &Field::from_fn(grid, |x| (-x * x / 18.0).exp())?)?;
    quotient("a two-bump field", &Field::from_fn(grid, |x| {
        (-(x - 2.0) * (x - 2.0)).exp() + 0.7 * (-(x + 1.0) * (x + 1.0) / 0.5).exp()
    })?)?;

    println!("\nEvery quotient is <= 1, with equality only on the ground-state orbit.");
    Ok(())
}
