//! Explicit existence thresholds for the constrained minimization and the
//! resulting existence/nonexistence classification.
//!
//! Three constants organize the theory:
//!
//! * `β̃_p` — free-problem (V ≡ 0) threshold: the infimum is negative iff
//!   β > β̃_p. It is 0 below the exponent 4/N, jumps to `a‖φ_p‖^{4/N}` at
//!   4/N, and for 4/N < p < 8/N has the closed form
//!   `2‖φ_p‖^p (2a/(8-Np))^{(8-Np)/4} (b/(Np-4))^{(Np-4)/4}`.
//! * `β_p = (b/2)‖φ_p‖_{L²}^p` — the threshold that controls the trapped
//!   problem at the critical exponent p* = 8/N and all of the blow-up
//!   scaling laws.
//! * At p = p* the free threshold becomes `(b/2)‖φ_{p*}‖^{8/N}` for N ≤ 3
//!   and `bS²` for N = 4, where S is the best constant of the embedding
//!   D^{1,2}(R⁴) ⊂ L⁴(R⁴), computed here from its explicit extremal bubble
//!   `U(x) = 2√2/(1+|x|²)` with `∫|∇U|² = ∫U⁴ = S²`.

use crate::error::{Error, Result};
use crate::grid::{unit_sphere_area, Field, Grid, GridSpec};
use crate::groundstate::{shoot_ground_state, GroundStateProfile};

const P_BRANCH_TOL: f64 = 1e-12;

/// All threshold constants for one (N, p, a, b) configuration.
#[derive(Debug, Clone, serde::Serialize)]
pub struct ThresholdReport {
    pub dim: u32,
    pub p: f64,
    pub a: f64,
    pub b: f64,
    /// Free-problem threshold β̃_p; `None` at the critical exponent, where
    /// `beta_star_critical` applies instead.
    pub beta_tilde: Option<f64>,
    /// β_p = (b/2)‖φ_p‖^p; `None` only for N = 4 at p = p* = 2, where the
    /// ground state is not square integrable.
    pub beta_p: Option<f64>,
    /// β̃_{p*}: (b/2)‖φ_{p*}‖^{8/N} for N ≤ 3, bS² for N = 4.
    pub beta_star_critical: f64,
    /// Sobolev constant of R⁴ (N = 4 configurations only).
    pub sobolev_s: Option<f64>,
}

/// Free-problem threshold β̃_p for 0 < p < 8/N; the branch split on 4/N is
/// exact up to an absolute tolerance of 1e-12 on p.
pub fn beta_tilde(dim: u32, p: f64, a: f64, b: f64, gs: &GroundStateProfile) -> Result<f64> {
    if gs.dim != dim || (gs.p - p).abs() > P_BRANCH_TOL {
        return Err(Error::Usage(format!(
            "ground state is for (N,p) = ({},{}), requested ({},{})",
            gs.dim, gs.p, dim, p
        )));
    }
    if !(a > 0.0 && b >= 0.0) {
        return Err(Error::Config("need a > 0 and b >= 0".to_string()));
    }
    let n = dim as f64;
    let p_star = 8.0 / n;
    if p >= p_star - P_BRANCH_TOL {
        return Err(Error::Range(format!(
            "beta_tilde is defined for p < 8/N = {}; use the critical threshold instead",
            p_star
        )));
    }
    let mass_crit = 4.0 / n;
    if p < mass_crit - P_BRANCH_TOL {
        Ok(0.0)
    } else if p <= mass_crit + P_BRANCH_TOL {
        Ok(a * gs.l2_norm_sq.powf(2.0 / n))
    } else {
        let np = n * p;
        Ok(2.0
            * gs.l2_norm_pow_p()
            * (2.0 * a / (8.0 - np)).powf((8.0 - np) / 4.0)
            * (b / (np - 4.0)).powf((np - 4.0) / 4.0))
    }
}

/// β_p = (b/2) ‖φ_p‖_{L²}^p; linear in b.
pub fn beta_p(b: f64, gs: &GroundStateProfile) -> f64 {
    0.5 * b * gs.l2_norm_pow_p()
}

/// The Sobolev bubble computation for N = 4.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SobolevConstant {
    /// S = (∫|∇U|²)^{1/2}.
    pub s: f64,
    /// ∫_{R⁴} |∇U|² dx.
    pub grad_integral: f64,
    /// ∫_{R⁴} U⁴ dx.
    pub quartic_integral: f64,
}

/// Compute S from the extremal bubble `U = 2√2/(1+r²)` by radial quadrature
/// on [0, R] plus analytic leading-order tails (against the surface measure
/// the integrands decay only like r⁻³ and r⁻⁵, too slowly to truncate).
/// Cross-checks ∫|∇U|² = ∫U⁴ to 1e-4 and errors out if the identity fails.
pub fn sobolev_constant_4d() -> Result<SobolevConstant> {
    let extent = 100.0;
    let grid = Grid::new(GridSpec::radial(4, extent, 65_537))?;
    // |∇U|² = 32 r²/(1+r²)⁴,  U⁴ = 64/(1+r²)⁴
    let grad_density = Field::from_fn(&grid, |r| 32.0 * r * r / (1.0 + r * r).powi(4))?;
    let quart_density = Field::from_fn(&grid, |r| 64.0 / (1.0 + r * r).powi(4))?;
    let omega = unit_sphere_area(4);
    // tails: ∫_R^∞ 32 r⁵(1+r²)⁻⁴ dr ≈ 32(1/(2R²) - 1/R⁴),
    //        ∫_R^∞ 64 r³(1+r²)⁻⁴ dr ≈ 64(1/(4R⁴) - 2/(3R⁶)), both × ω₃
    let r2 = extent * extent;
    let grad_tail = omega * 32.0 * (0.5 / r2 - 1.0 / (r2 * r2));
    let quart_tail = omega * 64.0 * (0.25 / (r2 * r2) - 2.0 / (3.0 * r2 * r2 * r2));
    let grad_integral = grad_density.integrate() + grad_tail;
    let quartic_integral = quart_density.integrate() + quart_tail;
    let defect = (grad_integral - quartic_integral).abs() / quartic_integral;
    if defect > 1e-4 {
        return Err(Error::Accuracy(format!(
            "bubble identity ∫|∇U|² = ∫U⁴ violated at relative level {:.2e}",
            defect
        )));
    }
    Ok(SobolevConstant { s: grad_integral.sqrt(), grad_integral, quartic_integral })
}

/// Shoot the needed ground states and assemble the full report.
pub fn compute_report(dim: u32, p: f64, a: f64, b: f64, shoot_tol: f64) -> Result<ThresholdReport> {
    if !(1..=4).contains(&dim) {
        return Err(Error::Config(format!("dimension must be 1..=4, got {}", dim)));
    }
    if !(a.is_finite() && a > 0.0 && b.is_finite() && b > 0.0) {
        return Err(Error::Config("thresholds require a > 0 and b > 0".to_string()));
    }
    let n = dim as f64;
    let p_star = 8.0 / n;
    if !(p.is_finite() && p > 0.0 && p <= p_star + P_BRANCH_TOL) {
        return Err(Error::Config(format!("p must lie in (0, {}]", p_star)));
    }
    let critical = (p - p_star).abs() <= P_BRANCH_TOL;

    let subcritical_gs = if critical { None } else { Some(shoot_ground_state(dim, p, shoot_tol)?) };

    let (beta_star_critical, sobolev_s, beta_p_here) = if dim == 4 {
        let s = sobolev_constant_4d()?;
        let bp = subcritical_gs.as_ref().map(|gs| beta_p(b, gs));
        (b * s.s * s.s, Some(s.s), bp)
    } else {
        let gs_star = shoot_ground_state(dim, p_star, shoot_tol)?;
        let bp = match &subcritical_gs {
            Some(gs) => Some(beta_p(b, gs)),
            None => Some(beta_p(b, &gs_star)),
        };
        (beta_p(b, &gs_star), None, bp)
    };

    let beta_tilde_here = match &subcritical_gs {
        Some(gs) => Some(beta_tilde(dim, p, a, b, gs)?),
        None => None,
    };

    Ok(ThresholdReport {
        dim,
        p,
        a,
        b,
        beta_tilde: beta_tilde_here,
        beta_p: beta_p_here,
        beta_star_critical,
        sobolev_s,
    })
}

/// Existence classification of the constrained minimization problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Regime {
    MinimizerExists,
    /// Exists exactly on the threshold β = β̃_p, 4/N < p < 8/N; numerically
    /// ill-conditioned (the infimum is 0, attained at a finite scale).
    MinimizerExistsBoundaryCase,
    /// Infimum 0, approached by indefinite spreading, never attained.
    NoMinimizerEnergyZero,
    /// Infimum -∞ through concentration.
    NoMinimizerEnergyMinusInfinity,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ExistenceVerdict {
    pub regime: Regime,
    pub reason: String,
}

fn verdict(regime: Regime, reason: impl Into<String>) -> ExistenceVerdict {
    ExistenceVerdict { regime, reason: reason.into() }
}

/// The existence trichotomy over (p, β, V-kind), given the thresholds.
///
/// Free problem (V ≡ 0), p < 8/N: a minimizer exists iff β > β̃_p when
/// p ≤ 4/N, or β ≥ β̃_p when 4/N < p < 8/N. Free, p = 8/N: never. Trapped,
/// p < 8/N: always. Trapped, p = 8/N (N ≤ 3): iff 0 < β ≤ β_{p*}, with
/// infimum -∞ above.
pub fn classify_existence(
    p: f64,
    beta: f64,
    trapped: bool,
    report: &ThresholdReport,
) -> Result<ExistenceVerdict> {
    if (p - report.p).abs() > P_BRANCH_TOL {
        return Err(Error::Usage(format!(
            "report was computed for p = {}, requested {}",
            report.p, p
        )));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::Config(format!("beta must be positive, got {}", beta)));
    }
    let n = report.dim as f64;
    let p_star = 8.0 / n;
    let critical = (p - p_star).abs() <= P_BRANCH_TOL;

    if trapped {
        if !critical {
            return Ok(verdict(
                Regime::MinimizerExists,
                "confining potential, subcritical exponent: a minimizer exists for every beta > 0",
            ));
        }
        if report.dim == 4 {
            return Err(Error::Unsupported(
                "trapped critical classification is established for N <= 3 only".to_string(),
            ));
        }
        let bstar = report.beta_star_critical;
        return if beta <= bstar {
            Ok(verdict(
                Regime::MinimizerExists,
                format!(
                    "confining potential at the critical exponent with beta <= beta_p* = {:.6}: \
                     the infimum is positive and attained",
                    bstar
                ),
            ))
        } else {
            Ok(verdict(
                Regime::NoMinimizerEnergyMinusInfinity,
                format!(
                    "confining potential at the critical exponent with beta > beta_p* = {:.6}: \
                     concentration drives the energy to -infinity",
                    bstar
                ),
            ))
        };
    }

    // free problem
    if critical {
        let bstar = report.beta_star_critical;
        return if beta > bstar {
            Ok(verdict(
                Regime::NoMinimizerEnergyMinusInfinity,
                format!(
                    "free problem at the critical exponent with beta > {:.6}: infimum -infinity",
                    bstar
                ),
            ))
        } else {
            Ok(verdict(
                Regime::NoMinimizerEnergyZero,
                "free problem at the critical exponent: infimum 0, attained by no function",
            ))
        };
    }

    let bt = report
        .beta_tilde
        .ok_or_else(|| Error::Usage("report lacks beta_tilde for a subcritical p".to_string()))?;
    let mass_crit = 4.0 / n;
    if p < mass_crit + P_BRANCH_TOL {
        // p <= 4/N: existence iff beta strictly above the threshold
        if beta > bt {
            Ok(verdict(
                Regime::MinimizerExists,
                format!(
                    "free problem, p <= 4/N, beta > beta_tilde = {:.6}: negative infimum attained",
                    bt
                ),
            ))
        } else {
            Ok(verdict(
                Regime::NoMinimizerEnergyZero,
                format!(
                    "free problem, p <= 4/N, beta <= beta_tilde = {:.6}: infimum 0 unattained",
                    bt
                ),
            ))
        }
    } else if (beta - bt).abs() <= P_BRANCH_TOL * bt.max(1.0) {
        Ok(verdict(
            Regime::MinimizerExistsBoundaryCase,
            format!(
                "free problem, 4/N < p < 8/N, beta = beta_tilde = {:.6}: zero infimum attained \
                 at a finite scale (threshold case)",
                bt
            ),
        ))
    } else if beta > bt {
        Ok(verdict(
            Regime::MinimizerExists,
            format!(
                "free problem, 4/N < p < 8/N, beta > beta_tilde = {:.6}: negative infimum attained",
                bt
            ),
        ))
    } else {
        Ok(verdict(
            Regime::NoMinimizerEnergyZero,
            format!(
                "free problem, 4/N < p < 8/N, beta < beta_tilde = {:.6}: infimum 0 unattained",
                bt
            ),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    // Frozen 1-D masses m(p) = ∫φ_p² from the closed form
    // (A²/B)·√π·Γ(2/p)/Γ(2/p + 1/2).
    const M1_P2: f64 = 3.4641016151377546; // = 2√3
    const M1_P4: f64 = 2.720699046351327; // = π√3/2
    const M1_P6: f64 = 2.3399866454989773;

    #[test]
    fn beta_tilde_vanishes_below_mass_critical() {
        let gs = shoot_ground_state(2, 1.0, 1e-4).unwrap();
        assert_eq!(beta_tilde(2, 1.0, 3.0, 5.0, &gs).unwrap(), 0.0);
    }

    #[test]
    fn beta_tilde_middle_branch_matches_closed_form() {
        // N=1, p=4 = 4/N: β̃ = a‖φ₄‖⁴ = a·m(4)²
        let gs = shoot_ground_state(1, 4.0, 1e-5).unwrap();
        let bt = beta_tilde(1, 4.0, 1.7, 1.0, &gs).unwrap();
        assert_relative_eq!(bt, 1.7 * M1_P4 * M1_P4, max_relative = 1e-4);
    }

    #[test]
    fn beta_tilde_upper_branch_exponents() {
        // N=1, p=6, a=b=1: exponents both 1/2, value √2·m(6)³
        let gs = shoot_ground_state(1, 6.0, 1e-5).unwrap();
        let bt = beta_tilde(1, 6.0, 1.0, 1.0, &gs).unwrap();
        assert_relative_eq!(bt, 2.0f64.sqrt() * M1_P6.powi(3), max_relative = 1e-4);
        assert_relative_eq!(bt, 18.119872373497074, max_relative = 1e-4);
    }

    #[test]
    fn beta_tilde_rejects_critical_p() {
        let gs = shoot_ground_state(1, 6.0, 1e-4).unwrap();
        assert!(matches!(beta_tilde(1, 8.0, 1.0, 1.0, &gs), Err(Error::Usage(_))));
    }

    #[test]
    fn beta_p_closed_form_and_linearity() {
        let g = Grid::new(GridSpec::radial(1, 14.0, 8192)).unwrap();
        let gs = crate::groundstate::closed_form_1d(2.0, &g).unwrap();
        assert_relative_eq!(beta_p(2.0, &gs), M1_P2, max_relative = 1e-6);
        assert_eq!(beta_p(0.0, &gs), 0.0);
    }

    #[test]
    fn beta_tilde_continuous_across_the_mass_critical_split() {
        // evaluate the product branch just above 4/N and compare to the
        // middle branch: the (b/(Np-4))^{(Np-4)/4} factor tends to 1.
        let eps = 1e-6;
        let gs_mid = shoot_ground_state(1, 4.0, 1e-5).unwrap();
        let gs_up = shoot_ground_state(1, 4.0 + eps, 1e-5).unwrap();
        let mid = beta_tilde(1, 4.0, 1.0, 1.0, &gs_mid).unwrap();
        let up = beta_tilde(1, 4.0 + eps, 1.0, 1.0, &gs_up).unwrap();
        assert_relative_eq!(up, mid, max_relative = 1e-3);
    }

    #[test]
    fn beta_tilde_converges_to_critical_threshold() {
        // β̃_p → (b/2)‖φ_{p*}‖^{8/N} monotonically along δ ∈ {0.1, 0.05, 0.02}
        let target = {
            let gs = shoot_ground_state(1, 8.0, 1e-5).unwrap();
            beta_p(1.0, &gs)
        };
        let mut gaps = Vec::new();
        for &delta in &[0.1, 0.05, 0.02] {
            let p = 8.0 - delta;
            let gs = shoot_ground_state(1, p, 1e-5).unwrap();
            let bt = beta_tilde(1, p, 1.0, 1.0, &gs).unwrap();
            gaps.push((bt - target).abs());
        }
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "gaps {:?}", gaps);
        assert!(gaps[2] / target < 0.05);
    }

    #[test]
    fn sobolev_bubble_value_and_identity() {
        // Frozen oracle: ∫U⁴ = 64·2π²·(1/12) = 32π²/3 (beta-function
        // evaluation of ∫r³/(1+r²)⁴ = 1/12), so S² = 32π²/3, S ≈ 10.26040.
        let s = sobolev_constant_4d().unwrap();
        let s2 = 32.0 * PI * PI / 3.0;
        assert_relative_eq!(s.s * s.s, s2, max_relative = 1e-4);
        assert_relative_eq!(s.grad_integral / s.quartic_integral, 1.0, max_relative = 1e-4);
        assert_relative_eq!(s.s, 10.260398641294913, max_relative = 1e-4);
    }

    #[test]
    fn report_critical_n4_uses_sobolev() {
        let rep = compute_report(4, 2.0, 1.0, 3.0, 1e-4).unwrap();
        assert!(rep.beta_tilde.is_none());
        let s2 = 32.0 * PI * PI / 3.0;
        assert_relative_eq!(rep.beta_star_critical, 3.0 * s2, max_relative = 1e-4);
    }

    #[test]
    fn report_critical_n1_matches_beta_p_star() {
        let rep = compute_report(1, 8.0, 1.0, 1.0, 1e-4).unwrap();
        assert!(rep.beta_tilde.is_none());
        let bp = rep.beta_p.unwrap();
        assert_relative_eq!(rep.beta_star_critical, bp, max_relative = 1e-10);
    }

    #[test]
    fn classification_table() {
        use Regime::*;
        let rep = |dim, p| compute_report(dim, p, 1.0, 1.0, 1e-4).unwrap();

        // free, p < 4/N: exists iff beta > 0 = beta_tilde
        let r = rep(1, 2.0);
        assert_eq!(classify_existence(2.0, 0.5, false, &r).unwrap().regime, MinimizerExists);

        // free, p = 4/N: both sides of the threshold
        let r = rep(1, 4.0);
        let bt = r.beta_tilde.unwrap();
        assert_eq!(classify_existence(4.0, 1.5 * bt, false, &r).unwrap().regime, MinimizerExists);
        assert_eq!(classify_existence(4.0, bt, false, &r).unwrap().regime, NoMinimizerEnergyZero);

        // free, 4/N < p < 8/N: strict, boundary, below
        let r = rep(1, 6.0);
        let bt = r.beta_tilde.unwrap();
        assert_eq!(classify_existence(6.0, 2.0 * bt, false, &r).unwrap().regime, MinimizerExists);
        assert_eq!(
            classify_existence(6.0, bt, false, &r).unwrap().regime,
            MinimizerExistsBoundaryCase
        );
        assert_eq!(
            classify_existence(6.0, 0.5 * bt, false, &r).unwrap().regime,
            NoMinimizerEnergyZero
        );

        // free critical: no minimizer either way
        let r = rep(1, 8.0);
        let bs = r.beta_star_critical;
        assert_eq!(
            classify_existence(8.0, 0.5 * bs, false, &r).unwrap().regime,
            NoMinimizerEnergyZero
        );
        assert_eq!(
            classify_existence(8.0, 2.0 * bs, false, &r).unwrap().regime,
            NoMinimizerEnergyMinusInfinity
        );

        // trapped: subcritical always exists; critical splits at beta_p*
        let r = rep(2, 2.0);
        assert_eq!(classify_existence(2.0, 7.0, true, &r).unwrap().regime, MinimizerExists);
        let r = rep(2, 4.0);
        let bs = r.beta_star_critical;
        assert_eq!(classify_existence(4.0, bs, true, &r).unwrap().regime, MinimizerExists);
        assert_eq!(
            classify_existence(4.0, 2.0 * bs, true, &r).unwrap().regime,
            NoMinimizerEnergyMinusInfinity
        );

        // trapped critical in N = 4 is out of scope
        let r = rep(4, 2.0);
        assert!(matches!(classify_existence(2.0, 1.0, true, &r), Err(Error::Unsupported(_))));

        // mismatched p is a usage error
        let r = rep(1, 2.0);
        assert!(matches!(classify_existence(3.0, 1.0, false, &r), Err(Error::Usage(_))));
    }
}
