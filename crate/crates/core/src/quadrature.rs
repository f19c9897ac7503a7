//! One-dimensional quadrature building blocks: adaptive Gauss–Kronrod and
//! fixed Gauss–Legendre rules.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// G7/K15 abscissae and weights on [-1, 1]; index 7 is the centre.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd-index Kronrod nodes (1, 3, 5) and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive G7K15 integration of `f` over `[a, b]`, optionally
/// pre-split at `breaks` (points where the integrand has kinks).
///
/// Stops when the summed error estimate is below
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    const MAX_PANELS: usize = 20_000;
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&x| x > a && x < b));
    points.push(b);
    points.sort_by(f64::total_cmp);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        let (value, error) = gk15(&f, w[0], w[1]);
        evaluations += 15;
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    loop {
        let (total, err): (f64, f64) = heap.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.value, acc.1 + p.error));
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Integral {
                value: total,
                abs_error: err,
                evaluations,
            });
        }
        if heap.len() >= MAX_PANELS {
            return Err(Error::numerical(
                "integrate",
                format!("no convergence after {MAX_PANELS} panels: value {total:e}, error {err:e}"),
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine precision; keep its estimate
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, lo, hi);
            evaluations += 15;
            heap.push(Panel { a: lo, b: hi, value, error });
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.into_iter().zip(w).map(|(x, w)| (mid + half * x, w * half)).collect()
}
