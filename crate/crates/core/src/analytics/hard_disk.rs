//! Hard-disk (unit disk graph) reference results for the 2-hop degree.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_density, DegreeEstimate};
use crate::error::{Error, Result};
use crate::quadrature;
use crate::specfun::gamma;

/// Intersection area of two disks of radius `r0` whose centres are `r`
/// apart.
pub fn hard_disk_lens_area(r0: f64, r: f64) -> f64 {
    if r >= 2.0 * r0 {
        return 0.0;
    }
    let r = r.max(0.0);
    // 2r0²·acos(r/2r0) − (r/2)√(4r0² − r²) written as r0²(x − sin x) with
    // x = 2·acos(r/2r0), which stays accurate near tangency.
    let half_angle = ((2.0 * r0 - r) * (2.0 * r0 + r)).sqrt().atan2(r);
    let x = 2.0 * half_angle;
    r0 * r0 * x_minus_sin(x)
}

fn x_minus_sin(x: f64) -> f64 {
    if x > 0.5 {
        return x - x.sin();
    }
    // x³/3! − x⁵/5! + …
    let x2 = x * x;
    let mut term = x * x2 / 6.0;
    let mut sum = term;
    let mut k = 2.0;
    while term.abs() > 1e-18 * sum.abs() {
        term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
        sum += term;
        k += 1.0;
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HardDiskMode {
    /// Adaptive quadrature of `2πρ ∫_{r0}^{2r0} r (1 − e^{−ρA(r)}) dr`.
    NumericIntegral,
    /// `3ρπr0² − 2π(2r0)^{2/3} Γ(2/3) (ρ/3)^{1/3}`.
    Asymptotic2D,
    /// `28/3 πρr0³ − 8π r0^{3/2} √(2ρ)`.
    Asymptotic3D,
}

/// Mean 2-hop degree of the hard-disk model.
///
/// For the asymptotic modes `error_bound` is the nominal size of the first
/// neglected term, `(ρ r0²)^{-1/3}` in the plane and `1` in space; it is a
/// scale, not a rigorous bound.
pub fn mu2_hard_disk(density: f64, r0: f64, mode: HardDiskMode) -> Result<DegreeEstimate> {
    check_density(density)?;
    if !(r0 > 0.0 && r0.is_finite()) {
        return Err(Error::config(format!("hard disk radius must be positive, got {r0}")));
    }
    let rho = density;
    Ok(match mode {
        HardDiskMode::NumericIntegral => {
            let f = |r: f64| r * -(-rho * hard_disk_lens_area(r0, r)).exp_m1();
            // boundary layer of width ~(ρ r0²)^{-2/3} r0 below 2r0
            let layer = r0 * (rho * r0 * r0).powf(-2.0 / 3.0);
            let breaks: Vec<f64> = [1.0, 4.0, 16.0, 64.0].iter().map(|k| 2.0 * r0 - k * layer).collect();
            let res = quadrature::integrate(f, r0, 2.0 * r0, &breaks, 1e-14 * r0 * r0, 1e-12)?;
            let scale = 2.0 * PI * rho;
            DegreeEstimate {
                value: scale * res.value,
                error_bound: scale * res.abs_error,
            }
        }
        HardDiskMode::Asymptotic2D => DegreeEstimate {
            value: 3.0 * rho * PI * r0 * r0
                - 2.0 * PI * (2.0 * r0).powf(2.0 / 3.0) * gamma(2.0 / 3.0)? * (rho / 3.0).cbrt(),
            error_bound: (rho * r0 * r0).powf(-1.0 / 3.0),
        },
        HardDiskMode::Asymptotic3D => DegreeEstimate {
            value: 28.0 / 3.0 * PI * rho * r0.powi(3) - 8.0 * PI * r0.powf(1.5) * (2.0 * rho).sqrt(),
            error_bound: 1.0,
        },
    })
}
