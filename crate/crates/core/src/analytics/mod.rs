//! Infinite-plane mean degrees: the closed-form 1-hop degree, the nested
//! quadrature for the 2-hop degree, path probabilities on fixed node sets,
//! and the hard-disk reference model.

mod fixed;
mod hard_disk;
mod mu2;

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

pub use fixed::{h2_exact_fixed, hm_approx_fixed};
pub use hard_disk::{hard_disk_lens_area, mu2_hard_disk, HardDiskMode};
pub use mu2::{mu2_quadrature, Mu2Integrator};

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::specfun::gamma;

/// A mean degree together with an estimate of its numerical error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeEstimate {
    pub value: f64,
    pub error_bound: f64,
}

impl DegreeEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }
}

/// Integration rule for the outer (node j) integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OuterMethod {
    TensorGauss,
    QuasiMonteCarlo,
}

/// Resolution and truncation settings for the nested 2-hop quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    /// Radial integrals stop where the best-case link probability drops
    /// below this value.
    pub tail_tolerance: f64,
    /// Points per dimension of the outer tensor rule.
    pub outer_points: usize,
    /// Points per dimension of the inner tensor rule.
    pub inner_points: usize,
    pub method: OuterMethod,
    /// Number of outer samples for the quasi-Monte Carlo rule.
    pub qmc_samples: usize,
    /// Refuse to run when the estimated number of integrand evaluations
    /// exceeds this.
    pub max_evaluations: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            tail_tolerance: 1e-8,
            outer_points: 24,
            inner_points: 32,
            method: OuterMethod::QuasiMonteCarlo,
            qmc_samples: 16384,
            max_evaluations: 4_000_000_000,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.tail_tolerance > 0.0 && self.tail_tolerance < 1.0) {
            return Err(Error::config(format!(
                "tail tolerance must lie in (0, 1), got {}",
                self.tail_tolerance
            )));
        }
        if self.outer_points < 8 || self.inner_points < 8 {
            return Err(Error::config("quadrature resolutions must be at least 8 points per dimension"));
        }
        if self.qmc_samples < 1000 {
            return Err(Error::config("quasi-Monte Carlo rule needs at least 1000 samples"));
        }
        Ok(())
    }

    /// Same rule with every resolution doubled.
    pub fn doubled(&self) -> Self {
        Self {
            outer_points: self.outer_points * 2,
            inner_points: self.inner_points * 2,
            qmc_samples: self.qmc_samples * 2,
            ..*self
        }
    }
}

fn rayleigh_params(channel: &ChannelModel) -> Result<(f64, f64, crate::antenna::GainModel)> {
    channel.validate()?;
    match *channel {
        ChannelModel::RayleighDirectional { beta, eta, gain } => Ok((beta, eta, gain)),
        ChannelModel::HardDisk { .. } => Err(Error::config(
            "this analytic result applies to the Rayleigh directional channel only",
        )),
    }
}

fn check_density(density: f64) -> Result<()> {
    if density > 0.0 && density.is_finite() {
        Ok(())
    } else {
        Err(Error::config(format!("density must be positive, got {density}")))
    }
}

/// Mean 1-hop degree on the infinite plane:
/// `ρ Γ(2/η) / (2π η β^(2/η)) · (∮ G^(2/η) dθ)²`.
pub fn mu1_closed_form(density: f64, channel: &ChannelModel) -> Result<DegreeEstimate> {
    check_density(density)?;
    let (beta, eta, gain) = rayleigh_params(channel)?;
    let s = 2.0 / eta;
    let integral = gain.gain_power_integral(s)?;
    let value = density * gamma(s)? / (TAU * eta * beta.powf(s)) * integral * integral;
    Ok(DegreeEstimate {
        value,
        error_bound: value * 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use std::f64::consts::PI;

    /// ρ/(2π) ∫∫∫ H r dr dθ dϑ with the radial integral
    /// ∫ r e^{−q r^η} dr = Γ(2/η)/(η q^{2/η}) done exactly and both angles
    /// by nested adaptive quadrature of the raw link probability exponent.
    fn mu1_by_quadrature(density: f64, channel: &ChannelModel) -> f64 {
        let ChannelModel::RayleighDirectional { beta, eta, gain } = *channel else {
            unreachable!()
        };
        let radial = |q: f64| gamma(2.0 / eta).unwrap() / (eta * q.powf(2.0 / eta));
        let breaks = [PI];
        let inner = |th: f64| {
            let ga = gain.gain(th);
            let f = |o: f64| {
                // node j sees node i at angle π + θ − ϑ
                let gb = gain.gain(PI + th - o);
                if ga * gb == 0.0 {
                    0.0
                } else {
                    radial(beta / (ga * gb))
                }
            };
            integrate(f, th, th + TAU, &[th + PI], 1e-14, 1e-13).unwrap().value
        };
        let total = integrate(inner, 0.0, TAU, &breaks, 1e-13, 1e-12).unwrap().value;
        density / TAU * total
    }

    #[test]
    fn eta_two_gives_rho_pi() {
        for eps in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let ch = ChannelModel::cardioid(1.0, 2.0, eps).unwrap();
            let v = mu1_closed_form(1.0, &ch).unwrap().value;
            assert!((v - PI).abs() < 1e-10, "eps={eps}: {v}");
        }
        let ch = ChannelModel::cardioid(1.0, 2.0, 0.0).unwrap();
        assert!((mu1_closed_form(2.0, &ch).unwrap().value - TAU).abs() < 1e-12);
    }

    #[test]
    fn isotropic_eta_three() {
        let ch = ChannelModel::cardioid(1.0, 3.0, 0.0).unwrap();
        let v = mu1_closed_form(1.0, &ch).unwrap().value;
        let expect = gamma(2.0 / 3.0).unwrap() * TAU / 3.0;
        assert!((v - expect).abs() < 1e-12);
        assert!((v - 2.836).abs() < 1e-3);
    }

    #[test]
    fn matches_direct_quadrature_on_grid() {
        for &rho in &[0.5, 2.0] {
            for &eta in &[2.0, 3.0, 4.5] {
                for &eps in &[0.0, 0.5, 1.0] {
                    let ch = ChannelModel::cardioid(1.0, eta, eps).unwrap();
                    let closed = mu1_closed_form(rho, &ch).unwrap().value;
                    let quad = mu1_by_quadrature(rho, &ch);
                    assert!((closed - quad).abs() < 1e-6, "rho={rho} eta={eta} eps={eps}: {closed} vs {quad}");
                }
            }
        }
    }

    #[test]
    fn decreasing_in_epsilon() {
        for eta in [2.5, 3.0, 5.0] {
            let vals: Vec<f64> = (0..=10)
                .map(|i| {
                    let ch = ChannelModel::cardioid(1.0, eta, i as f64 / 10.0).unwrap();
                    mu1_closed_form(1.0, &ch).unwrap().value
                })
                .collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]));
        }
    }

    #[test]
    fn rejects_hard_disk_and_bad_density() {
        let disk = ChannelModel::hard_disk(1.0).unwrap();
        assert!(matches!(mu1_closed_form(1.0, &disk), Err(Error::Config(_))));
        let ch = ChannelModel::cardioid(1.0, 3.0, 0.0).unwrap();
        assert!(mu1_closed_form(0.0, &ch).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec { inner_points: 4, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = QuadratureSpec { tail_tolerance: 1.5, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
