//! The existence trichotomy: for each exponent regime, where minimizers
//! exist as β crosses the explicit thresholds.
//!
//! ```text
//! cargo run --release --example threshold_map
//! ```

use kirchhoff::thresholds::{classify_existence, compute_report};

fn main() -> kirchhoff::Result<()> {
    let (a, b) = (1.0, 1.0);

    println!("free problem (V = 0), N = 1, a = b = 1:");
    println!("{:<6} {:>14} {:>14}", "p", "beta_tilde", "beta_p");
    for p in [1.0, 2.0, 4.0, 5.0, 6.0, 7.0, 7.9] {
        let rep = compute_report(1, p, a, b, 1e-4)?;
        println!(
            "{:<6} {:>14.6} {:>14.6}",
            p,
            rep.beta_tilde.unwrap_or(f64::NAN),
            rep.beta_p.unwrap_or(f64::NAN)
        );
    }
    let crit = compute_report(1, 8.0, a, b, 1e-4)?;
    println!("critical threshold at p* = 8: {:.6}", crit.beta_star_critical);

    println!("\nverdicts over a (p, beta) grid:");
    for (p, factors) in [(2.0, [0.5, 2.0]), (4.0, [0.5, 2.0]), (6.0, [0.5, 2.0]), (8.0, [0.5, 2.0])] {
        let rep = compute_report(1, p, a, b, 1e-4)?;
        let reference = rep.beta_tilde.filter(|&bt| bt > 0.0).unwrap_or(rep.beta_star_critical);
        for factor in factors {
            let beta = factor * reference;
            for trapped in [false, true] {
                match classify_existence(p, beta, trapped, &rep) {
                    Ok(v) => println!(
                        "  p={:<4} beta={:<9.4} {:<8} -> {:?}",
                        p,
                        beta,
                        if trapped { "trapped" } else { "free" },
                        v.regime
                    ),
                    Err(e) => println!("  p={:<4} beta={:<9.4} trapped  -> {}", p, beta, e),
                }
            }
        }
    }

    // N = 4 needs the Sobolev constant in place of the critical ground state
    let rep4 = compute_report(4, 2.0, a, b, 1e-4)?;
    println!(
        "\nN=4 critical: beta* = b·S² = {:.6} with S = {:.6}",
        rep4.beta_star_critical,
        rep4.sobolev_s.unwrap()
    );
    Ok(())
}
