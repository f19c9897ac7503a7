//! Pairwise connection probabilities between oriented nodes.

use serde::{Deserialize, Serialize};

use crate::antenna::GainModel;
use crate::error::{Error, Result};

/// A node position together with the boresight direction of its antenna.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientedNode {
    pub x: f64,
    pub y: f64,
    /// Boresight angle in radians, measured from the x axis.
    pub orientation: f64,
}

impl OrientedNode {
    pub fn new(x: f64, y: f64, orientation: f64) -> Self {
        Self { x, y, orientation }
    }
}

/// Link model between two nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChannelModel {
    /// Rayleigh fading with directional gains:
    /// `H = exp(−β r^η / (G_ab G_ba))`.
    RayleighDirectional { beta: f64, eta: f64, gain: GainModel },
    /// Deterministic disk: connected iff `r < r0`.
    HardDisk { r0: f64 },
}

impl ChannelModel {
    pub fn rayleigh(beta: f64, eta: f64, gain: GainModel) -> Result<Self> {
        let m = ChannelModel::RayleighDirectional { beta, eta, gain };
        m.validate()?;
        Ok(m)
    }

    /// Rayleigh channel with a single-lobe cardioid and the given deformation.
    pub fn cardioid(beta: f64, eta: f64, epsilon: f64) -> Result<Self> {
        Self::rayleigh(beta, eta, GainModel::cardioid(epsilon)?)
    }

    pub fn hard_disk(r0: f64) -> Result<Self> {
        let m = ChannelModel::HardDisk { r0 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ChannelModel::RayleighDirectional { beta, eta, gain } => {
                if !(beta > 0.0 && beta.is_finite()) {
                    return Err(Error::config(format!("beta must be positive, got {beta}")));
                }
                if !(eta >= 2.0 && eta.is_finite()) {
                    return Err(Error::config(format!("path loss exponent must be >= 2, got {eta}")));
                }
                // re-run the gain checks in case the value was deserialized
                GainModel::new(gain.epsilon(), gain.lobes())?;
                Ok(())
            }
            ChannelModel::HardDisk { r0 } => {
                if r0 > 0.0 && r0.is_finite() {
                    Ok(())
                } else {
                    Err(Error::config(format!("hard disk radius must be positive, got {r0}")))
                }
            }
        }
    }

    /// Radius beyond which the connection probability is below `tau` for
    /// every pair of orientations. For the hard disk this is `r0`.
    pub fn effective_range(&self, tau: f64) -> f64 {
        match *self {
            ChannelModel::RayleighDirectional { beta, eta, gain } => {
                let g = gain.max_gain();
                ((1.0 / tau).ln() * g * g / beta).powf(1.0 / eta)
            }
            ChannelModel::HardDisk { r0 } => r0,
        }
    }

    /// Probability that nodes `a` and `b` are linked. Symmetric in its
    /// arguments.
    pub fn connection_probability(&self, a: &OrientedNode, b: &OrientedNode) -> f64 {
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let r = dx.hypot(dy);
        let (sa, ca) = a.orientation.sin_cos();
        let (sb, cb) = b.orientation.sin_cos();
        self.link_probability(dx, dy, r, ca, sa, cb, sb)
    }

    /// Core of [`connection_probability`] with the displacement `b − a`,
    /// its length, and the orientation cosines/sines precomputed.
    #[allow(clippy::too_many_arguments)]
    #[inline]
    pub(crate) fn link_probability(&self, dx: f64, dy: f64, r: f64, ca: f64, sa: f64, cb: f64, sb: f64) -> f64 {
        match *self {
            ChannelModel::HardDisk { r0 } => {
                if r < r0 {
                    1.0
                } else {
                    0.0
                }
            }
            ChannelModel::RayleighDirectional { beta, eta, gain } => {
                if r == 0.0 {
                    return 1.0;
                }
                let g_ab = gain.gain_from_cos((dx * ca + dy * sa) / r);
                let g_ba = gain.gain_from_cos(((-dx) * cb + (-dy) * sb) / r);
                let g = g_ab * g_ba;
                if g <= 0.0 {
                    return 0.0;
                }
                (-beta * r.powf(eta) / g).exp()
            }
        }
    }

    pub fn eta(&self) -> Option<f64> {
        match *self {
            ChannelModel::RayleighDirectional { eta, .. } => Some(eta),
            ChannelModel::HardDisk { .. } => None,
        }
    }

    pub fn gain(&self) -> Option<GainModel> {
        match *self {
            ChannelModel::RayleighDirectional { gain, .. } => Some(gain),
            ChannelModel::HardDisk { .. } => None,
        }
    }
}
