//! The best constant of the embedding D^{1,2}(R⁴) ⊂ L⁴(R⁴) from its
//! explicit extremal bubble U = 2√2/(1+|x|²), which satisfies
//! ∫|∇U|² = ∫U⁴ = S². The slow algebraic tails are integrated analytically
//! beyond the grid.
//!
//! ```text
//! cargo run --release --example sobolev_bubble
//! ```

use kirchhoff::thresholds::sobolev_constant_4d;

fn main() -> kirchhoff::Result<()> {
    let s = sobolev_constant_4d()?;
    let exact = 32.0 * std::f64::consts::PI.powi(2) / 3.0;
    println!("gradient integral : {:.10}", s.grad_integral);
    println!("quartic integral  : {:.10}", s.quartic_integral);
    println!("identity defect   : {:.3e}", (s.grad_integral / s.quartic_integral - 1.0).abs());
    println!("S²                : {:.10}  (32π²/3 = {:.10})", s.s * s.s, exact);
    println!("S                 : {:.10}", s.s);
    println!("relative error    : {:.3e}", (s.s * s.s - exact).abs() / exact);
    Ok(())
}
