//! Shapiro-Wilk normality test, Royston's AS R94 algorithm.
//!
//! Supports 3 <= n <= 5000 like the reference implementation in R. The W
//! statistic is the squared correlation between the order statistics and the
//! expected normal scores; the p-value comes from Royston's normalizing
//! transformations (exact arcsine form at n = 3).

use super::distributions::{normal_quantile, normal_sf};
use super::TestResult;
use crate::error::{Error, Result};

fn poly(coef: &[f64], x: f64) -> f64 {
    let mut acc = coef[0];
    if coef.len() > 1 {
        let mut p = x * coef[coef.len() - 1];
        for j in (1..coef.len() - 1).rev() {
            p = (p + coef[j]) * x;
        }
        acc += p;
    }
    acc
}

/// Weights a[1..=n/2]; a[0] unused (1-based like the published algorithm).
fn coefficients(n: usize) -> Vec<f64> {
    let nn2 = n / 2;
    let mut a = vec![0.0; nn2 + 1];
    if n == 3 {
        a[1] = std::f64::consts::FRAC_1_SQRT_2;
        return a;
    }
    let an = n as f64;
    let mut summ2 = 0.0;
    for (i, slot) in a.iter_mut().enumerate().skip(1) {
        *slot = normal_quantile((i as f64 - 0.375) / (an + 0.25));
        summ2 += *slot * *slot;
    }
    summ2 *= 2.0;
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / an.sqrt();

    const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056];
    const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];

    let a1 = poly(&C1, rsn) - a[1] / ssumm2;
    let (i1, fac) = if n > 5 {
        let a2 = -a[2] / ssumm2 + poly(&C2, rsn);
        let fac = ((summ2 - 2.0 * a[1] * a[1] - 2.0 * a[2] * a[2])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        a[2] = a2;
        (3, fac)
    } else {
        let fac = ((summ2 - 2.0 * a[1] * a[1]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (2, fac)
    };
    a[1] = a1;
    for v in a.iter_mut().skip(i1) {
        *v /= -fac;
    }
    a
}

fn p_value(w: f64, n: usize) -> f64 {
    if w >= 1.0 {
        return 1.0;
    }
    if n == 3 {
        let pi6 = 6.0 / std::f64::consts::PI;
        let stqr = std::f64::consts::FRAC_PI_3; // asin(sqrt(3/4))
        return (pi6 * (w.sqrt().asin() - stqr)).clamp(0.0, 1.0);
    }
    let an = n as f64;
    let y = (1.0 - w).ln();

    const G: [f64; 2] = [-2.273, 0.459];
    const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -0.0006714];
    const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
    const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
    const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];

    let (y_std, m, s) = if n <= 11 {
        let gamma = poly(&G, an);
        if y >= gamma {
            return 1e-99;
        }
        (-(gamma - y).ln(), poly(&C3, an), poly(&C4, an).exp())
    } else {
        (y, poly(&C5, an.ln()), poly(&C6, an.ln()).exp())
    };
    normal_sf((y_std - m) / s).clamp(0.0, 1.0)
}

/// Shapiro-Wilk W test of normality.
pub fn shapiro_wilk(samples: &[f64]) -> Result<TestResult> {
    let n = samples.len();
    if !(3..=5000).contains(&n) {
        return Err(Error::Argument(format!(
            "shapiro_wilk supports 3 <= n <= 5000, got {n}"
        )));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("shapiro_wilk: non-finite sample".into()));
    }
    let mut x = samples.to_vec();
    x.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let range = x[n - 1] - x[0];
    if range == 0.0 {
        return Err(Error::Degenerate("shapiro_wilk: constant sample".into()));
    }

    let a = coefficients(n);
    // Full antisymmetric coefficient vector: -a for the lower half, +a
    // mirrored for the upper half, 0 at an odd middle.
    let coef = |i: usize| -> f64 {
        let j = n - 1 - i;
        if i == j {
            0.0
        } else if i < j {
            -a[i + 1]
        } else {
            a[j + 1]
        }
    };

    // W as squared correlation, data scaled by range for stability.
    let sa: f64 = (0..n).map(coef).sum::<f64>() / n as f64;
    let sx: f64 = x.iter().map(|v| v / range).sum::<f64>() / n as f64;
    let mut ssa = 0.0;
    let mut ssx = 0.0;
    let mut sax = 0.0;
    for (i, v) in x.iter().enumerate() {
        let asa = coef(i) - sa;
        let xsx = v / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = (1.0 - w1).clamp(0.0, 1.0);

    Ok(TestResult {
        name: "shapiro_wilk",
        statistic: w,
        p_value: Some(p_value(w, n)),
        effect_size: None,
        n,
    })
}
