//! Antenna gain patterns `G(θ) = 1 + ε cos(nθ)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::specfun::{hyp2f1, Hyp2F1Params};

/// Multi-lobe cardioid gain. `epsilon = 0` is isotropic; `epsilon = 1` has
/// nulls of zero gain. Every pattern integrates to 2π over a full turn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainModel {
    epsilon: f64,
    lobes: u32,
}

impl GainModel {
    pub fn new(epsilon: f64, lobes: u32) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::config(format!("gain deformation epsilon must lie in [0, 1], got {epsilon}")));
        }
        if lobes == 0 {
            return Err(Error::config("gain pattern needs at least one lobe"));
        }
        Ok(Self { epsilon, lobes })
    }

    /// Single-lobe cardioid.
    pub fn cardioid(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, 1)
    }

    pub fn isotropic() -> Self {
        Self { epsilon: 0.0, lobes: 1 }
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lobes(&self) -> u32 {
        self.lobes
    }

    /// Largest gain over all directions.
    pub fn max_gain(&self) -> f64 {
        1.0 + self.epsilon
    }

    /// Gain in direction `theta` (radians, relative to boresight).
    pub fn gain(&self, theta: f64) -> f64 {
        let theta = theta.rem_euclid(TAU);
        1.0 + self.epsilon * (self.lobes as f64 * theta).cos()
    }

    /// Gain given the cosine of the off-boresight angle, avoiding the
    /// trigonometric round trip in hot loops. cos(nθ) = T_n(cos θ).
    pub(crate) fn gain_from_cos(&self, cos_theta: f64) -> f64 {
        let c = cos_theta.clamp(-1.0, 1.0);
        let cn = match self.lobes {
            1 => c,
            2 => 2.0 * c * c - 1.0,
            n => {
                let (mut t0, mut t1) = (1.0, c);
                for _ in 1..n {
                    let t2 = 2.0 * c * t1 - t0;
                    t0 = t1;
                    t1 = t2;
                }
                t1
            }
        };
        1.0 + self.epsilon * cn
    }

    /// ∮ G(θ)^exponent dθ over a full turn.
    ///
    /// Single-lobe patterns use the hypergeometric closed form; multi-lobe
    /// ones fall back to quadrature. The value does not depend on the lobe
    /// count because cos(nθ) over a full turn is a rearrangement of cos θ.
    pub fn gain_power_integral(&self, exponent: f64) -> Result<f64> {
        check_exponent(exponent)?;
        if self.lobes == 1 {
            self.gain_power_closed_form(exponent)
        } else {
            self.gain_power_quadrature(exponent)
        }
    }

    /// Closed form:
    /// π[(1−ε)^s ₂F₁(½, −s; 1; 2ε/(ε−1)) + (1+ε)^s ₂F₁(½, −s; 1; 2ε/(ε+1))].
    pub fn gain_power_closed_form(&self, exponent: f64) -> Result<f64> {
        check_exponent(exponent)?;
        let (eps, s) = (self.epsilon, exponent);
        if eps == 0.0 {
            return Ok(TAU);
        }
        let upper = (1.0 + eps).powf(s) * hyp2f1(Hyp2F1Params::new(0.5, -s, 1.0, 2.0 * eps / (eps + 1.0)))?;
        let lower = if eps < 1.0 {
            (1.0 - eps).powf(s) * hyp2f1(Hyp2F1Params::new(0.5, -s, 1.0, 2.0 * eps / (eps - 1.0)))?
        } else {
            // 0 · ₂F₁(…; −∞): the limit equals the upper term by the Pfaff identity
            upper
        };
        Ok(PI * (lower + upper))
    }

    /// Adaptive quadrature of ∮ G^s dθ, split at the gain extrema.
    pub fn gain_power_quadrature(&self, exponent: f64) -> Result<f64> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::domain("gain_power_quadrature", format!("exponent must be positive, got {exponent}")));
        }
        let n = self.lobes as f64;
        let breaks: Vec<f64> = (1..2 * self.lobes).map(|k| k as f64 * PI / n).collect();
        let r = quadrature::integrate(|t| self.gain(t).max(0.0).powf(exponent), 0.0, TAU, &breaks, 1e-14, 1e-13)?;
        Ok(r.value)
    }
}

fn check_exponent(exponent: f64) -> Result<()> {
    if exponent > 0.0 && exponent <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(
            "gain_power_integral",
            format!("exponent 2/eta must lie in (0, 1] (eta >= 2), got {exponent}"),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gain_examples() {
        assert_eq!(GainModel::isotropic().gain(1.234), 1.0);
        let c = GainModel::cardioid(1.0).unwrap();
        assert_eq!(c.gain(0.0), 2.0);
        assert!(c.gain(PI).abs() < 1e-15);
        let half = GainModel::cardioid(0.5).unwrap();
        assert!((half.gain(PI / 3.0) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(GainModel::new(-0.1, 1).is_err());
        assert!(GainModel::new(1.1, 1).is_err());
        assert!(GainModel::new(0.5, 0).is_err());
        let g = GainModel::cardioid(0.3).unwrap();
        assert!(g.gain_power_integral(0.0).is_err());
        assert!(g.gain_power_integral(1.2).is_err());
    }

    #[test]
    fn trivial_integrals() {
        for eta in [2.0, 3.0, 5.5] {
            let v = GainModel::isotropic().gain_power_integral(2.0 / eta).unwrap();
            assert!((v - TAU).abs() < 1e-14);
        }
        for eps in [0.0, 0.2, 0.7, 1.0] {
            let v = GainModel::cardioid(eps).unwrap().gain_power_integral(1.0).unwrap();
            assert!((v - TAU).abs() < 1e-12, "eps={eps}: {v}");
        }
    }

    #[test]
    fn full_cardioid_square_root() {
        // ∮ (1+cos θ)^½ dθ = √2 ∮ |cos(θ/2)| dθ = 4√2
        let g = GainModel::cardioid(1.0).unwrap();
        let closed = g.gain_power_closed_form(0.5).unwrap();
        let quad = g.gain_power_quadrature(0.5).unwrap();
        assert!((quad - 4.0 * 2f64.sqrt()).abs() < 1e-10);
        assert!((closed - quad).abs() < 1e-10, "{closed} vs {quad}");
    }

    #[test]
    fn closed_form_matches_quadrature_on_grid() {
        for i in 0..=10 {
            let eps = i as f64 / 10.0;
            let g = GainModel::cardioid(eps).unwrap();
            for j in 0..=8 {
                let eta = 2.0 + 0.5 * j as f64;
                let closed = g.gain_power_closed_form(2.0 / eta).unwrap();
                let quad = g.gain_power_quadrature(2.0 / eta).unwrap();
                assert!((closed - quad).abs() < 1e-8, "eps={eps} eta={eta}: {closed} vs {quad}");
            }
        }
    }

    #[test]
    fn strictly_decreasing_in_epsilon_for_eta_above_two() {
        for eta in [2.5, 3.0, 4.0, 6.0] {
            let vals: Vec<f64> = (0..=20)
                .map(|i| GainModel::cardioid(i as f64 / 20.0).unwrap().gain_power_integral(2.0 / eta).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] < w[0]), "eta={eta}: {vals:?}");
        }
    }

    #[test]
    fn lobe_count_does_not_change_integral() {
        for eps in [0.3, 0.8, 1.0] {
            for eta in [2.5, 3.0, 5.0] {
                let s = 2.0 / eta;
                let one = GainModel::new(eps, 1).unwrap().gain_power_quadrature(s).unwrap();
                for n in [2, 3] {
                    let v = GainModel::new(eps, n).unwrap().gain_power_integral(s).unwrap();
                    assert!((v - one).abs() < 1e-10, "eps={eps} eta={eta} n={n}");
                }
            }
        }
    }

    #[test]
    fn normalization_on_random_patterns() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let g = GainModel::new(rng.random_range(0.0..=1.0), rng.random_range(1..=6)).unwrap();
            let mean = g.gain_power_quadrature(1.0).unwrap() / TAU;
            assert!((mean - 1.0).abs() < 1e-10);
        }
    }

    proptest! {
        #[test]
        fn gain_stays_in_band(eps in 0.0f64..=1.0, n in 1u32..6, theta in -50.0f64..50.0) {
            let g = GainModel::new(eps, n).unwrap();
            let v = g.gain(theta);
            prop_assert!(v >= 1.0 - eps - 1e-12 && v <= 1.0 + eps + 1e-12);
            prop_assert!((g.gain_from_cos(theta.cos()) - v).abs() < 1e-9);
        }
    }
}
