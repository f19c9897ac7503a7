//! Nested quadrature for the mean 2-hop degree.
//!
//! Node i sits at the origin with its boresight on the x axis. For every
//! outer sample (position and orientation of node j) the inner integral
//!
//! ```text
//! J(j) = ∫ dϑ_k ∫ dA_k  H_ik H_kj
//! ```
//!
//! is evaluated with a tensor rule (Gauss–Legendre in radius, trapezoid in
//! both angles, which is spectrally accurate for periodic integrands). The
//! 2-hop degree is then
//!
//! ```text
//! μ₂ = ρ/2π ∫ dϑ_j ∫ dA_j (1 − H_ij)(1 − exp(−ρ J(j) / 2π))
//! ```
//!
//! J does not depend on ρ, so an integrator built once can be evaluated at
//! many densities.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{check_density, rayleigh_params, DegreeEstimate, OuterMethod, QuadratureSpec};
use crate::antenna::GainModel;
use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre_on;

/// Exponents above this contribute less than e^-50 and are skipped.
const NEGLIGIBLE_EXPONENT: f64 = 50.0;

/// Independently shifted copies of the quasi-Monte Carlo point set.
const QMC_REPLICATES: usize = 8;

/// Two-sided 99% Student-t quantile with `QMC_REPLICATES − 1` degrees of
/// freedom.
const QMC_T_QUANTILE: f64 = 3.499;

#[derive(Debug, Clone, Copy)]
struct InnerNode {
    x: f64,
    y: f64,
    r: f64,
    /// β r^η / G_i(θ_k); infinite where node i's gain vanishes.
    a: f64,
    weight: f64,
}

struct InnerRule {
    nodes: Vec<InnerNode>,
    /// (cos ϑ_k, sin ϑ_k, weight)
    orientations: Vec<(f64, f64, f64)>,
    /// β r_ik^η / (G_i G_k) for every (node, orientation), row-major; the
    /// i–k exponent does not depend on node j.
    ik_exponent: Vec<f64>,
}

impl InnerRule {
    fn new(beta: f64, eta: f64, gain: &GainModel, radius: f64, points: usize) -> Self {
        let n_theta = points;
        let n_orient = if gain.epsilon() == 0.0 { 1 } else { points };
        let h_theta = TAU / n_theta as f64;
        let mut nodes = Vec::with_capacity(points * n_theta);
        for (r, w) in gauss_legendre_on(points, 0.0, radius) {
            for t in 0..n_theta {
                let (s, c) = (t as f64 * h_theta).sin_cos();
                let gi = gain.gain_from_cos(c);
                let a = if gi > 0.0 { beta * r.powf(eta) / gi } else { f64::INFINITY };
                nodes.push(InnerNode {
                    x: r * c,
                    y: r * s,
                    r,
                    a,
                    weight: w * r * h_theta,
                });
            }
        }
        let h_orient = TAU / n_orient as f64;
        let orientations = (0..n_orient)
            .map(|o| {
                let (s, c) = (o as f64 * h_orient).sin_cos();
                (c, s, TAU / n_orient as f64)
            })
            .collect::<Vec<_>>();
        let gmax = gain.max_gain();
        let mut ik_exponent = Vec::with_capacity(nodes.len() * orientations.len());
        for node in &nodes {
            for &(ck, sk, _) in &orientations {
                let gk = if node.r == 0.0 { gmax } else { gain.gain_from_cos((-node.x * ck - node.y * sk) / node.r) };
                ik_exponent.push(if node.a == 0.0 {
                    0.0
                } else if gk > 0.0 {
                    node.a / gk
                } else {
                    f64::INFINITY
                });
            }
        }
        Self { nodes, orientations, ik_exponent }
    }

    fn len(&self) -> usize {
        self.nodes.len() * self.orientations.len()
    }

    /// J for node j at `(xj, yj)` with boresight `(cj, sj)`.
    fn integrate(&self, beta: f64, eta: f64, gain: &GainModel, xj: f64, yj: f64, cj: f64, sj: f64) -> f64 {
        let gmax = gain.max_gain();
        let n_orient = self.orientations.len();
        let mut total = 0.0;
        for (idx, node) in self.nodes.iter().enumerate() {
            let dx = xj - node.x;
            let dy = yj - node.y;
            let d = dx.hypot(dy);
            let b = if d == 0.0 {
                0.0
            } else {
                let gj = gain.gain_from_cos((-dx * cj - dy * sj) / d);
                if gj > 0.0 {
                    beta * d.powf(eta) / gj
                } else {
                    f64::INFINITY
                }
            };
            // the k-side gains are at most gmax, so this bounds the exponent from below
            if (node.a + b) / gmax > NEGLIGIBLE_EXPONENT {
                continue;
            }
            let row = &self.ik_exponent[idx * n_orient..(idx + 1) * n_orient];
            let mut acc = 0.0;
            for (&(ck, sk, w), &ik) in self.orientations.iter().zip(row) {
                let kj = if b == 0.0 {
                    0.0
                } else {
                    let gk = gain.gain_from_cos((dx * ck + dy * sk) / d);
                    if gk <= 0.0 {
                        continue;
                    }
                    b / gk
                };
                acc += w * (-(ik + kj)).exp();
            }
            total += node.weight * acc;
        }
        total
    }
}

#[derive(Debug, Clone, Copy)]
struct OuterSample {
    weight: f64,
    /// 1 − H_ij
    unlinked: f64,
    inner: f64,
}

/// Precomputed ρ-independent part of the 2-hop quadrature.
pub struct Mu2Integrator {
    fine: Vec<OuterSample>,
    /// Same outer points as `fine`, inner integral at half resolution.
    inner_coarse: Vec<f64>,
    /// Outer rule at half resolution (inner at full resolution); tensor
    /// rule only.
    outer_coarse: Vec<OuterSample>,
    outer_area: f64,
    /// ∫∫ H dA dϑ / 2π for a single node, i.e. μ₁ at unit density.
    unit_degree: f64,
    spec: QuadratureSpec,
    evaluations: u64,
}

impl Mu2Integrator {
    pub fn new(channel: &ChannelModel, spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let (beta, eta, gain) = rayleigh_params(channel)?;
        let reach = channel.effective_range(spec.tail_tolerance);
        let inner_fine = InnerRule::new(beta, eta, &gain, reach, spec.inner_points);
        let inner_half = InnerRule::new(beta, eta, &gain, reach, (spec.inner_points / 2).max(4));
        let outer_radius = 2.0 * reach;

        let (outer_fine_pts, outer_coarse_pts) = outer_points(&spec, &gain, outer_radius);
        let estimated = outer_fine_pts.len() as u64 * (inner_fine.len() + inner_half.len()) as u64
            + outer_coarse_pts.len() as u64 * inner_fine.len() as u64;
        if estimated > spec.max_evaluations {
            return Err(Error::Budget {
                estimated,
                cap: spec.max_evaluations,
                hint: "lower inner_points / qmc_samples / outer_points or raise max_evaluations".into(),
            });
        }

        let eval = |pts: &[OuterPoint], rule: &InnerRule| -> Vec<OuterSample> {
            pts.par_iter()
                .map(|p| {
                    let (s, c) = p.orientation.sin_cos();
                    let (xj, yj) = (p.r * p.theta.cos(), p.r * p.theta.sin());
                    let h_ij = channel.link_probability(xj, yj, p.r, 1.0, 0.0, c, s);
                    OuterSample {
                        weight: p.weight,
                        unlinked: 1.0 - h_ij,
                        inner: rule.integrate(beta, eta, &gain, xj, yj, c, s),
                    }
                })
                .collect()
        };
        let fine = eval(&outer_fine_pts, &inner_fine);
        let inner_coarse = eval(&outer_fine_pts, &inner_half).into_iter().map(|s| s.inner).collect();
        let outer_coarse = match spec.method {
            OuterMethod::QuasiMonteCarlo => Vec::new(),
            OuterMethod::TensorGauss => eval(&outer_coarse_pts, &inner_fine),
        };

        Ok(Self {
            fine,
            inner_coarse,
            outer_coarse,
            outer_area: std::f64::consts::PI * outer_radius * outer_radius,
            unit_degree: super::mu1_closed_form(1.0, channel)?.value,
            spec,
            evaluations: estimated,
        })
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// Number of inner-integrand evaluations performed during setup.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    fn sum(samples: &[OuterSample], inner: impl Fn(usize) -> f64, density: f64) -> f64 {
        let c = density / TAU;
        let mut total = 0.0;
        for (i, s) in samples.iter().enumerate() {
            total += s.weight * s.unlinked * -(-c * inner(i)).exp_m1();
        }
        c * total
    }

    /// Mean 2-hop degree at `density`.
    pub fn evaluate(&self, density: f64) -> Result<DegreeEstimate> {
        check_density(density)?;
        let value = Self::sum(&self.fine, |i| self.fine[i].inner, density);
        let inner_coarse = Self::sum(&self.fine, |i| self.inner_coarse[i], density);
        let outer_error = match self.spec.method {
            OuterMethod::QuasiMonteCarlo => {
                // spread of the independently shifted replicates
                let block = self.fine.len() / QMC_REPLICATES;
                let reps: Vec<f64> = self
                    .fine
                    .chunks(block)
                    .map(|c| QMC_REPLICATES as f64 * Self::sum(c, |i| c[i].inner, density))
                    .collect();
                let m = reps.len() as f64;
                let var = reps.iter().map(|r| (r - value).powi(2)).sum::<f64>() / (m - 1.0);
                QMC_T_QUANTILE * (var / m).sqrt()
            }
            OuterMethod::TensorGauss => {
                (value - Self::sum(&self.outer_coarse, |i| self.outer_coarse[i].inner, density)).abs()
            }
        };
        let tau = self.spec.tail_tolerance;
        // Dropping |k| > r_eff changes <H2> by at most tau·mu1 at every outer
        // point; the outer region |j| > 2 r_eff contributes at most 2·tau·mu1².
        let mu1 = density * self.unit_degree;
        let tail = tau * mu1 * density * self.outer_area + 2.0 * tau * mu1 * mu1;
        let error_bound = (value - inner_coarse).abs() + outer_error + tail;
        if !value.is_finite() {
            return Err(Error::numerical("mu2_quadrature", format!("non-finite result at density {density}")));
        }
        Ok(DegreeEstimate {
            value: value.max(0.0),
            error_bound,
        })
    }
}

struct OuterPoint {
    r: f64,
    theta: f64,
    orientation: f64,
    weight: f64,
}

fn outer_points(spec: &QuadratureSpec, gain: &GainModel, radius: f64) -> (Vec<OuterPoint>, Vec<OuterPoint>) {
    match spec.method {
        OuterMethod::QuasiMonteCarlo => (qmc_points(spec.qmc_samples, gain, radius), Vec::new()),
        OuterMethod::TensorGauss => (
            tensor_points(spec.outer_points, gain, radius),
            tensor_points((spec.outer_points / 2).max(4), gain, radius),
        ),
    }
}

fn tensor_points(n: usize, gain: &GainModel, radius: f64) -> Vec<OuterPoint> {
    let n_orient = if gain.epsilon() == 0.0 { 1 } else { n };
    let ht = TAU / n as f64;
    let ho = TAU / n_orient as f64;
    let mut pts = Vec::with_capacity(n * n * n_orient);
    for (r, w) in gauss_legendre_on(n, 0.0, radius) {
        for t in 0..n {
            for o in 0..n_orient {
                pts.push(OuterPoint {
                    r,
                    theta: t as f64 * ht,
                    orientation: o as f64 * ho,
                    weight: w * r * ht * ho,
                });
            }
        }
    }
    pts
}

/// Additive recurrence with the generalized golden ratio in three
/// dimensions (plastic-number family), in `QMC_REPLICATES` contiguous
/// blocks, each under its own fixed random shift. The blocks are
/// independent estimates, so their spread gives an error bar.
fn qmc_points(n: usize, gain: &GainModel, radius: f64) -> Vec<OuterPoint> {
    // root of x^4 = x + 1
    let phi: f64 = 1.220_744_084_605_759_5;
    let alpha = [1.0 / phi, 1.0 / (phi * phi), 1.0 / (phi * phi * phi)];
    let block = n / QMC_REPLICATES;
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_5eed);
    let shifts: Vec<[f64; 3]> = (0..QMC_REPLICATES).map(|_| rng.random()).collect();
    let volume = radius * TAU * TAU;
    let w = volume / (block * QMC_REPLICATES) as f64;
    (0..block * QMC_REPLICATES)
        .map(|idx| {
            let (shift, i) = (&shifts[idx / block], idx % block);
            let u: Vec<f64> = alpha
                .iter()
                .zip(shift)
                .map(|(a, s)| (s + a * (i + 1) as f64).fract())
                .collect();
            let r = radius * u[0];
            let orientation = if gain.epsilon() == 0.0 { 0.0 } else { TAU * u[2] };
            OuterPoint {
                r,
                theta: TAU * u[1],
                orientation,
                weight: w * r,
            }
        })
        .collect()
}

/// Mean 2-hop degree by nested quadrature.
pub fn mu2_quadrature(density: f64, channel: &ChannelModel, spec: &QuadratureSpec) -> Result<DegreeEstimate> {
    check_density(density)?;
    Mu2Integrator::new(channel, *spec)?.evaluate(density)
}
