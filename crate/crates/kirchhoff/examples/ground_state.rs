//! Shoot for the ground state of the scalar field equation in several
//! dimensions, verify the Pohozaev identities, and (in 1-D) compare against
//! the closed-form solution.
//!
//! ```text
//! cargo run --release --example ground_state
//! ```

use kirchhoff::groundstate::{closed_form_1d, decay_rate, shoot_ground_state};

fn main() -> kirchhoff::Result<()> {
    println!("{:<10} {:>10} {:>12} {:>12} {:>10} {:>10}", "(N, p)", "phi(0)", "mass", "dirichlet", "res1", "res2");
    for (dim, p) in [(1u32, 1.0), (1, 2.0), (1, 6.0), (2, 2.0), (3, 2.0)] {
        let gs = shoot_ground_state(dim, p, 1e-4)?;
        println!(
            "({}, {:<4}) {:>10.6} {:>12.8} {:>12.8} {:>10.2e} {:>10.2e}",
            dim, p, gs.shoot_height, gs.l2_norm_sq, gs.dirichlet, gs.pohozaev_res1, gs.pohozaev_res2
        );
    }

    // 1-D oracle: u = ((p+2)(4+p)/8)^{1/p} sech^{2/p}(x sqrt((4+p)/p) p/2)
    println!("\n1-D shooting vs closed form:");
    for p in [1.0, 2.0, 4.0, 6.0] {
        let gs = shoot_ground_state(1, p, 1e-4)?;
        let oracle = closed_form_1d(p, gs.profile.grid())?;
        let max_err = gs
            .profile
            .values()
            .iter()
            .zip(oracle.profile.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        println!("  p = {:<3}  max-norm error {:.2e}   decay rate {:.4}", p, max_err, decay_rate(1, p));
    }

    // N = 2, p = 2 is the classical critical-mass case: mass ≈ 11.70
    let townes = shoot_ground_state(2, 2.0, 1e-4)?;
    println!("\nN=2, p=2 critical mass: {:.4} (expected ≈ 11.7009)", townes.l2_norm_sq);
    Ok(())
}
