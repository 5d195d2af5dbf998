//! Rank-based tests, the exact McNemar test, multiplicity adjustment, and
//! agreement/uniformity statistics.

use super::distributions::{binom_half_cdf, chi2_sf, kolmogorov_sf, normal_sf};
use super::TestResult;
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Midranks for a value slice: ties share the average of their rank range.
fn midranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // ranks are 1-based; tied block [i, j] gets the average rank
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Sum of t^3 - t over tie groups.
fn tie_term(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        term += t * t * t - t;
        i = j + 1;
    }
    term
}

/// Two-sided exact McNemar test on the discordant counts.
///
/// p = min(1, 2 * P(X <= min(b, c))) with X ~ Binomial(b + c, 1/2);
/// zero discordance yields p = 1.
pub fn mcnemar_exact(b: u64, c: u64) -> TestResult {
    let n = b + c;
    let p = if n == 0 {
        1.0
    } else {
        (2.0 * binom_half_cdf(b.min(c), n)).min(1.0)
    };
    TestResult {
        name: "mcnemar_exact",
        statistic: b.min(c) as f64,
        p_value: Some(p),
        effect_size: None,
        n: n as usize,
    }
}

/// Kruskal-Wallis H test with midrank ties and tie correction.
///
/// All observations identical across all groups is reported as H = 0, p = 1.
pub fn kruskal_wallis(groups: &[Vec<f64>]) -> Result<TestResult> {
    if groups.len() < 2 {
        return Err(Error::Argument("kruskal_wallis needs >= 2 groups".into()));
    }
    if groups.iter().any(|g| g.is_empty()) {
        return Err(Error::Argument("kruskal_wallis groups must be non-empty".into()));
    }
    let pooled: Vec<f64> = groups.iter().flatten().copied().collect();
    let n = pooled.len();
    let n_f = n as f64;

    let first = pooled[0];
    if pooled.iter().all(|&v| v == first) {
        return Ok(TestResult {
            name: "kruskal_wallis",
            statistic: 0.0,
            p_value: Some(1.0),
            effect_size: None,
            n,
        });
    }

    let ranks = midranks(&pooled);
    let mut h = 0.0;
    let mut offset = 0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        h += r * r / g.len() as f64;
        offset += g.len();
    }
    h = 12.0 / (n_f * (n_f + 1.0)) * h - 3.0 * (n_f + 1.0);

    let correction = 1.0 - tie_term(&pooled) / (n_f * n_f * n_f - n_f);
    h /= correction;

    let df = groups.len() - 1;
    Ok(TestResult {
        name: "kruskal_wallis",
        statistic: h,
        p_value: Some(chi2_sf(h, df)),
        effect_size: None,
        n,
    })
}

/// Exact null distribution of the rank sum: ways[s] = number of n1-subsets of
/// ranks 1..n with sum s.
fn rank_sum_counts(n: usize, n1: usize) -> Vec<f64> {
    let max_sum = (n - n1 + 1..=n).sum::<usize>();
    let mut ways = vec![vec![0.0f64; max_sum + 1]; n1 + 1];
    ways[0][0] = 1.0;
    for rank in 1..=n {
        for k in (1..=n1.min(rank)).rev() {
            for s in (rank..=max_sum).rev() {
                let add = ways[k - 1][s - rank];
                if add > 0.0 {
                    ways[k][s] += add;
                }
            }
        }
    }
    ways.pop().unwrap()
}

/// Two-sided Wilcoxon rank-sum (Mann-Whitney U) test.
///
/// Exact by enumeration when the combined size is at most 12 and there are no
/// ties; otherwise the normal approximation with tie-corrected variance and a
/// 0.5 continuity correction. Effect size r = |Z|/sqrt(n_a + n_b).
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<TestResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Argument("wilcoxon_rank_sum needs non-empty groups".into()));
    }
    let n1 = a.len();
    let n2 = b.len();
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    let ranks = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let u1 = r1 - (n1 * (n1 + 1)) as f64 / 2.0;
    let u2 = (n1 * n2) as f64 - u1;

    let ties = tie_term(&pooled);
    let mean_u = (n1 * n2) as f64 / 2.0;
    let var_u =
        (n1 * n2) as f64 / 12.0 * ((n as f64 + 1.0) - ties / (n as f64 * (n as f64 - 1.0)));
    // z from the larger U with continuity correction; used for the effect size
    // in both branches.
    let z = if var_u > 0.0 {
        (u1.max(u2) - mean_u - 0.5) / var_u.sqrt()
    } else {
        0.0
    };
    let r_effect = z.abs() / (n as f64).sqrt();

    let p = if n <= 12 && ties == 0.0 {
        // Exact: P(rank sum <= observed) from the DP-enumerated distribution.
        let counts = rank_sum_counts(n, n1);
        let total: f64 = counts.iter().sum();
        let u_min = u1.min(u2);
        let s_max = u_min + (n1 * (n1 + 1)) as f64 / 2.0;
        let below: f64 = counts
            .iter()
            .enumerate()
            .filter(|(s, _)| (*s as f64) <= s_max + 1e-9)
            .map(|(_, w)| *w)
            .sum();
        // U2 <= u_min covers the upper tail; symmetric under the null.
        (2.0 * below / total).min(1.0)
    } else {
        (2.0 * normal_sf(z)).min(1.0)
    };

    Ok(TestResult {
        name: "wilcoxon_rank_sum",
        statistic: u1.min(u2),
        p_value: Some(p),
        effect_size: Some(r_effect),
        n,
    })
}

/// Holm-Bonferroni step-down adjustment, returned in the input order.
pub fn holm_bonferroni(pvals: &[f64]) -> Result<Vec<f64>> {
    if pvals.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
        return Err(Error::Argument("p-values must lie in [0, 1]".into()));
    }
    let m = pvals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| pvals[i].partial_cmp(&pvals[j]).unwrap());
    let mut adjusted = vec![0.0; m];
    let mut running_max = 0.0f64;
    for (rank, &idx) in order.iter().enumerate() {
        let adj = ((m - rank) as f64 * pvals[idx]).min(1.0);
        running_max = running_max.max(adj);
        adjusted[idx] = running_max;
    }
    Ok(adjusted)
}

/// Cohen's kappa for two raters over a shared category set.
pub fn cohens_kappa<T: Eq + std::hash::Hash>(labels_a: &[T], labels_b: &[T]) -> Result<TestResult> {
    if labels_a.len() != labels_b.len() {
        return Err(Error::Argument("label lists must have equal length".into()));
    }
    if labels_a.is_empty() {
        return Err(Error::Argument("label lists must be non-empty".into()));
    }
    let n = labels_a.len() as f64;
    let mut marg_a: HashMap<&T, f64> = HashMap::new();
    let mut marg_b: HashMap<&T, f64> = HashMap::new();
    let mut agree = 0.0;
    for (x, y) in labels_a.iter().zip(labels_b) {
        *marg_a.entry(x).or_default() += 1.0;
        *marg_b.entry(y).or_default() += 1.0;
        if x == y {
            agree += 1.0;
        }
    }
    let p_o = agree / n;
    let p_e: f64 = marg_a
        .iter()
        .map(|(cat, ca)| ca / n * marg_b.get(cat).copied().unwrap_or(0.0) / n)
        .sum();
    if (1.0 - p_e).abs() < 1e-12 {
        return Err(Error::Degenerate(
            "expected agreement is 1; kappa undefined".into(),
        ));
    }
    Ok(TestResult {
        name: "cohens_kappa",
        statistic: (p_o - p_e) / (1.0 - p_e),
        p_value: None,
        effect_size: None,
        n: labels_a.len(),
    })
}

/// One-sample Kolmogorov-Smirnov test against Uniform(lo, hi).
///
/// Uses the asymptotic Kolmogorov distribution with Stephens' small-sample
/// correction factor.
pub fn ks_test_uniform(samples: &[f64], lo: f64, hi: f64) -> Result<TestResult> {
    if samples.is_empty() {
        return Err(Error::Argument("ks_test_uniform needs samples".into()));
    }
    if !(hi > lo) {
        return Err(Error::Argument("ks_test_uniform needs hi > lo".into()));
    }
    let n = samples.len();
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n_f = n as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        let d_plus = (i + 1) as f64 / n_f - f;
        let d_minus = f - i as f64 / n_f;
        d = d.max(d_plus).max(d_minus);
    }
    let lambda = (n_f.sqrt() + 0.12 + 0.11 / n_f.sqrt()) * d;
    Ok(TestResult {
        name: "ks_uniform",
        statistic: d,
        p_value: Some(kolmogorov_sf(lambda)),
        effect_size: None,
        n,
    })
}

/// Chi-squared test of independence on a contingency table (rows x cols).
pub fn chi2_independence(table: &[Vec<u64>]) -> Result<TestResult> {
    let rows = table.len();
    if rows < 2 || table[0].len() < 2 {
        return Err(Error::Argument("contingency table must be at least 2x2".into()));
    }
    let cols = table[0].len();
    if table.iter().any(|r| r.len() != cols) {
        return Err(Error::Argument("ragged contingency table".into()));
    }
    let row_sums: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let col_sums: Vec<f64> = (0..cols)
        .map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64)
        .collect();
    let total: f64 = row_sums.iter().sum();
    if total == 0.0 {
        return Err(Error::Argument("empty contingency table".into()));
    }
    let mut chi2 = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &obs) in row.iter().enumerate() {
            let expected = row_sums[i] * col_sums[j] / total;
            if expected > 0.0 {
                let diff = obs as f64 - expected;
                chi2 += diff * diff / expected;
            }
        }
    }
    let df = (rows - 1) * (cols - 1);
    Ok(TestResult {
        name: "chi2_independence",
        statistic: chi2,
        p_value: Some(chi2_sf(chi2, df)),
        effect_size: None,
        n: total as usize,
    })
}

/// Pearson correlation coefficient; 0 when either side has zero variance.
pub fn pearson_r(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "pearson_r length mismatch");
    let n = a.len() as f64;
    if n == 0.0 {
        return 0.0;
    }
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        sxy += (x - ma) * (y - mb);
        sxx += (x - ma) * (x - ma);
        syy += (y - mb) * (y - mb);
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}
