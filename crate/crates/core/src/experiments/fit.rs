use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// `a − b ρ^{1/3} + c ρ`
    CubeRootLaw,
    /// `c ρ^p`, fitted as a line in log-log space
    PowerLaw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    pub coefficients: Vec<Coefficient>,
    /// Euclidean norm of the residuals in the space the fit was done in.
    pub residual_norm: f64,
    pub residuals: Vec<f64>,
    /// Smallest and largest density used.
    pub window: (f64, f64),
    pub n_points: usize,
    /// Coefficients that break the model's sign constraints.
    pub constraint_violations: Vec<String>,
}

impl FitResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    pub fn value(&self, name: &str) -> f64 {
        self.coefficient(name).map_or(f64::NAN, |c| c.value)
    }
}

/// Ordinary least squares `y ≈ X β` with coefficient standard errors
/// `√(σ² diag((XᵀX)⁻¹))`, `σ² = RSS/(n − p)`.
fn least_squares(x: DMatrix<f64>, y: DVector<f64>) -> Result<(DVector<f64>, DVector<f64>, DVector<f64>)> {
    let (n, p) = x.shape();
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::numerical(
            "least_squares",
            format!("design matrix is rank deficient (singular values {smin:e} .. {smax:e})"),
        ));
    }
    let beta = svd
        .solve(&y, 0.0)
        .map_err(|e| Error::numerical("least_squares", e.to_string()))?;
    let residuals = &y - &x * &beta;
    let stderr = if n > p {
        let sigma2 = residuals.norm_squared() / (n - p) as f64;
        let xtx = x.transpose() * &x;
        let inv = xtx
            .try_inverse()
            .ok_or_else(|| Error::numerical("least_squares", "normal matrix is singular"))?;
        DVector::from_iterator(p, (0..p).map(|i| (sigma2 * inv[(i, i)]).sqrt()))
    } else {
        DVector::from_element(p, f64::NAN)
    };
    Ok((beta, stderr, residuals))
}

fn check_data(rho: &[f64], y: &[f64], min_points: usize) -> Result<()> {
    if rho.len() != y.len() {
        return Err(Error::config("density and value arrays differ in length"));
    }
    if rho.len() < min_points {
        return Err(Error::config(format!(
            "need at least {min_points} points for this fit, got {}",
            rho.len()
        )));
    }
    if rho.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::config("fit data contains non-finite values"));
    }
    Ok(())
}

fn window(rho: &[f64]) -> (f64, f64) {
    let lo = rho.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = rho.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Fits `a − b ρ^{1/3} + c ρ`. Needs at least three points; standard
/// errors need four.
pub fn fit_cube_root_law(rho: &[f64], y: &[f64]) -> Result<FitResult> {
    check_data(rho, y, 3)?;
    let n = rho.len();
    let x = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => 1.0,
        1 => -rho[i].cbrt(),
        _ => rho[i],
    });
    let (beta, se, res) = least_squares(x, DVector::from_column_slice(y))?;
    let names = ["a", "b", "c"];
    let coefficients: Vec<Coefficient> = names
        .iter()
        .enumerate()
        .map(|(i, name)| Coefficient {
            name: name.to_string(),
            value: beta[i],
            stderr: se[i],
        })
        .collect();
    let constraint_violations = coefficients
        .iter()
        .filter(|c| !(c.value > 0.0))
        .map(|c| format!("{} = {:e} is not positive", c.name, c.value))
        .collect();
    Ok(FitResult {
        model: FitModel::CubeRootLaw,
        coefficients,
        residual_norm: res.norm(),
        residuals: res.iter().copied().collect(),
        window: window(rho),
        n_points: n,
        constraint_violations,
    })
}

/// Fits `c ρ^p` by least squares on `ln y = ln c + p ln ρ`. The standard
/// error of `c` follows from that of `ln c` to first order.
pub fn fit_power_law(rho: &[f64], y: &[f64]) -> Result<FitResult> {
    check_data(rho, y, 2)?;
    if rho.iter().chain(y).any(|&v| v <= 0.0) {
        return Err(Error::config("power law fit needs positive densities and values"));
    }
    let n = rho.len();
    let x = DMatrix::from_fn(n, 2, |i, j| if j == 0 { 1.0 } else { rho[i].ln() });
    let ly = DVector::from_iterator(n, y.iter().map(|v| v.ln()));
    let (beta, se, res) = least_squares(x, ly)?;
    let c = beta[0].exp();
    Ok(FitResult {
        model: FitModel::PowerLaw,
        coefficients: vec![
            Coefficient {
                name: "c".into(),
                value: c,
                stderr: c * se[0],
            },
            Coefficient {
                name: "p".into(),
                value: beta[1],
                stderr: se[1],
            },
        ],
        residual_norm: res.norm(),
        residuals: res.iter().copied().collect(),
        window: window(rho),
        n_points: n,
        constraint_violations: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_power_law() {
        let rho: Vec<f64> = (1..=8).map(|i| i as f64 * 1.7).collect();
        let y: Vec<f64> = rho.iter().map(|r| 2.0 * r.powf(-0.5)).collect();
        let f = fit_power_law(&rho, &y).unwrap();
        assert!((f.value("c") - 2.0).abs() < 1e-6);
        assert!((f.value("p") + 0.5).abs() < 1e-6);
        assert!(f.residual_norm < 1e-12);
    }

    #[test]
    fn recovers_exact_cube_root_law() {
        let rho: Vec<f64> = (1..=8).map(|i| 0.5 * i as f64).collect();
        let y: Vec<f64> = rho.iter().map(|r| 1.5 - 2.25 * r.cbrt() + 7.0 * r).collect();
        let f = fit_cube_root_law(&rho, &y).unwrap();
        for (name, want) in [("a", 1.5), ("b", 2.25), ("c", 7.0)] {
            assert!((f.value(name) - want).abs() < 1e-8, "{name}");
        }
        assert!(f.constraint_violations.is_empty());
        assert_eq!(f.window, (0.5, 4.0));
    }

    #[test]
    fn flags_negative_coefficients() {
        let rho = [1.0f64, 2.0, 3.0, 4.0, 5.0];
        let y: Vec<f64> = rho.iter().map(|r| -1.0 + 0.5 * r.cbrt() + r).collect();
        let f = fit_cube_root_law(&rho, &y).unwrap();
        assert_eq!(f.constraint_violations.len(), 2);
    }

    #[test]
    fn standard_errors_scale_with_noise() {
        let rho: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let noisy: Vec<f64> = rho
            .iter()
            .enumerate()
            .map(|(i, r)| 3.0 * r.powf(-0.4) * (1.0 + 0.01 * if i % 2 == 0 { 1.0 } else { -1.0 }))
            .collect();
        let f = fit_power_law(&rho, &noisy).unwrap();
        let p = f.coefficient("p").unwrap();
        assert!((p.value + 0.4).abs() < 3.0 * p.stderr + 1e-3);
        assert!(p.stderr > 0.0 && p.stderr < 0.01);
    }

    #[test]
    fn rank_deficient_and_bad_input() {
        let rho = [2.0, 2.0, 2.0, 2.0];
        let y = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(fit_cube_root_law(&rho, &y), Err(Error::Numerical { .. })));
        assert!(fit_cube_root_law(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0], &[1.0, -2.0]).is_err());
        assert!(fit_power_law(&[1.0, 2.0], &[1.0]).is_err());
    }
}
