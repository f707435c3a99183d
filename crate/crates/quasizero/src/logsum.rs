//! Log-domain summation utilities: stable `log(e^a + e^b)`, direct
//! log-sum-exp over short term lists, and a peak-centered windowed
//! summation for unimodal term sequences whose peak values overflow
//! any linear-domain representation.

use crate::error::{Error, Result};

/// Terms smaller than `exp(-WINDOW_DROP)` relative to the peak are outside
/// the summation window.
pub const WINDOW_DROP: f64 = 45.0;

/// Consecutive below-threshold terms required before the window edge walk
/// stops (guards against integer plateaus in nearly flat stretches).
const EDGE_RUN: usize = 64;

/// Windows wider than this switch to strided summation.
pub const STRIDE_THRESHOLD: f64 = 1e7;

/// Strided sums at stride `s` and `s/2` must agree to this relative error.
pub const STRIDE_RTOL: f64 = 1e-9;

/// Peak searches abandon the sum as divergent beyond this index.
const PEAK_CAP: f64 = 1e18;

/// Stable `ln(e^a + e^b)`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a >= b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// `ln Σ exp(t_i)` over a slice, two-pass.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let peak = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum: f64 = terms.iter().map(|t| (t - peak).exp()).sum();
    peak + sum.ln()
}

/// Peak location and summation window actually used for one moment.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WindowInfo {
    /// Index of the largest term.
    pub peak: f64,
    /// Left edge of the window.
    pub lo: f64,
    /// Right edge of the window.
    pub hi: f64,
    /// Stride used for the sum (1 when the window was summed directly).
    pub stride: f64,
    /// Relative error estimate (stride disagreement, or the window cutoff
    /// bound for direct sums).
    pub rel_err: f64,
}

/// `ln Σ_{n=start}^{∞} exp(t(n))` for a unimodal term function `t`,
/// summed over a window centered at the peak.
///
/// The caller guarantees `t` is unimodal on `[start, ∞)` and tends to
/// `-∞`; if the terms are still growing at the index cap the sum is
/// reported divergent.
pub fn unimodal_tail_log_sum<F: Fn(f64) -> f64>(t: F, start: f64) -> Result<(f64, WindowInfo)> {
    let (peak_n, peak_t) = find_peak(&t, start)?;
    if peak_t == f64::NEG_INFINITY {
        return Ok((
            f64::NEG_INFINITY,
            WindowInfo { peak: peak_n, lo: peak_n, hi: peak_n, stride: 1.0, rel_err: 0.0 },
        ));
    }
    let threshold = peak_t - WINDOW_DROP;
    let lo = walk_edge(&t, peak_n, start, threshold, -1.0).floor().max(start);
    let hi = walk_edge(&t, peak_n, PEAK_CAP, threshold, 1.0).ceil();
    let width = hi - lo;

    if width <= STRIDE_THRESHOLD {
        let mut sum = 0.0;
        let mut n = lo;
        while n <= hi {
            sum += (t(n) - peak_t).exp();
            n += 1.0;
        }
        // every excluded term is below exp(-WINDOW_DROP) relative to the peak
        let rel_err = 2.0 * (EDGE_RUN as f64) * (-WINDOW_DROP).exp();
        return Ok((
            peak_t + sum.ln(),
            WindowInfo { peak: peak_n, lo, hi, stride: 1.0, rel_err },
        ));
    }

    // Strided Riemann sums, halving the stride until two consecutive
    // resolutions agree.
    let mut stride = 2f64.powi((width / 1e6).log2().ceil() as i32).max(2.0);
    let mut coarse = strided_sum(&t, peak_n, lo, hi, peak_t, stride);
    loop {
        let fine = strided_sum(&t, peak_n, lo, hi, peak_t, stride / 2.0);
        let rel = ((coarse - fine) / fine).abs();
        if rel <= STRIDE_RTOL || stride / 2.0 <= 1.0 {
            return Ok((
                peak_t + fine.ln(),
                WindowInfo { peak: peak_n, lo, hi, stride: stride / 2.0, rel_err: rel },
            ));
        }
        stride /= 2.0;
        coarse = fine;
    }
}

/// One strided Riemann sum of `exp(t(n) - peak_t)` over `[lo, hi]`,
/// anchored at the peak so that refining the stride keeps nodes nested.
fn strided_sum<F: Fn(f64) -> f64>(t: &F, anchor: f64, lo: f64, hi: f64, peak_t: f64, stride: f64) -> f64 {
    let j_lo = ((lo - anchor) / stride).floor() as i64;
    let j_hi = ((hi - anchor) / stride).ceil() as i64;
    let mut sum = 0.0;
    for j in j_lo..=j_hi {
        let n = anchor + (j as f64) * stride;
        if n >= lo.max(1.0) {
            sum += (t(n) - peak_t).exp();
        }
    }
    sum * stride
}

/// Bracket the peak by doubling, then golden-section to unit resolution.
fn find_peak<F: Fn(f64) -> f64>(t: &F, start: f64) -> Result<(f64, f64)> {
    let mut lo = start;
    let mut hi = (start * 2.0 + 1.0).max(start + 1.0);
    let mut t_lo = t(lo);
    let mut t_hi = t(hi);
    // climb until the terms turn over
    while t_hi >= t_lo {
        if hi >= PEAK_CAP {
            return Err(Error::Divergence(format!(
                "terms still growing at index {hi:.3e} with no admissible tail"
            )));
        }
        lo = hi;
        t_lo = t_hi;
        hi = hi * 2.0;
        t_hi = t(hi);
    }
    // peak is in [lo/2, hi] (or [start, hi] on immediate turnover)
    let mut a = (lo / 2.0).max(start);
    let mut b = hi;
    const PHI: f64 = 0.618_033_988_749_894_9;
    while b - a > 1.0 {
        let m1 = b - (b - a) * PHI;
        let m2 = a + (b - a) * PHI;
        if t(m1) < t(m2) {
            a = m1;
        } else {
            b = m2;
        }
    }
    let c = 0.5 * (a + b);
    let candidates = [c.floor().max(start), c.ceil().max(start), a.floor().max(start), b.ceil()];
    let mut best = (candidates[0], t(candidates[0]));
    for &n in &candidates[1..] {
        let v = t(n);
        if v > best.1 {
            best = (n, v);
        }
    }
    Ok(best)
}

/// Walk from the peak in direction `dir` until `EDGE_RUN` consecutive terms
/// fall below `threshold`. Within a few thousand indices of the peak the walk
/// is term by term; past that the terms are monotone away from the peak, so
/// the edge is located by doubling and bisection.
fn walk_edge<F: Fn(f64) -> f64>(t: &F, peak: f64, limit: f64, threshold: f64, dir: f64) -> f64 {
    let past_limit = |n: f64| if dir < 0.0 { n < limit } else { n > limit };

    let mut n = peak;
    let mut run = 0usize;
    let mut steps = 0u64;
    loop {
        let next = n + dir;
        if past_limit(next) {
            return limit;
        }
        if t(next) < threshold {
            run += 1;
            if run >= EDGE_RUN {
                return next;
            }
        } else {
            run = 0;
        }
        n = next;
        if run == 0 && steps >= 4096 {
            break;
        }
        steps += 1;
    }

    // accelerated phase: double the step until a below-threshold term appears
    let mut good = n;
    let mut step = 1024.0;
    let mut bad;
    loop {
        let next = good + dir * step;
        if past_limit(next) {
            if t(limit) >= threshold {
                return limit;
            }
            bad = limit;
            break;
        }
        if t(next) >= threshold {
            good = next;
            step *= 2.0;
        } else {
            bad = next;
            break;
        }
    }
    while (bad - good).abs() > 1.0 {
        let mid = 0.5 * (bad + good);
        if t(mid) >= threshold {
            good = mid;
        } else {
            bad = mid;
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_naive_in_range() {
        let a = 0.5f64;
        let b = 2.0f64;
        let naive = (a.exp() + b.exp()).ln();
        assert!((log_add_exp(a, b) - naive).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
        assert_eq!(log_add_exp(3.0, f64::NEG_INFINITY), 3.0);
    }

    #[test]
    fn log_add_exp_survives_large_arguments() {
        let v = log_add_exp(1234.0, 1232.0);
        // 1234 + ln(1 + e^{-2})
        assert!((v - (1234.0 + (1.0 + (-2.0f64).exp()).ln())).abs() < 1e-12);
    }

    #[test]
    fn log_sum_exp_short_list() {
        let v = log_sum_exp(&[0.0, 0.0, 0.0]);
        assert!((v - 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    #[test]
    fn tail_sum_matches_geometric_series() {
        // t(n) = -n: sum_{n>=1} e^{-n} = 1/(e-1)
        let (v, info) = unimodal_tail_log_sum(|n| -n, 1.0).unwrap();
        let exact = (1.0 / (std::f64::consts::E - 1.0)).ln();
        assert!((v - exact).abs() < 1e-13, "got {v}, want {exact}");
        assert_eq!(info.stride, 1.0);
        assert_eq!(info.peak, 1.0);
    }

    #[test]
    fn tail_sum_with_interior_peak() {
        // t(n) = 20 ln n - n peaks at n = 20
        let (v, info) = unimodal_tail_log_sum(|n| 20.0 * n.ln() - n, 1.0).unwrap();
        let direct: f64 = (1..400).map(|n| ((n as f64).ln() * 20.0 - n as f64).exp()).sum();
        assert!((v - direct.ln()).abs() < 1e-12);
        assert!((info.peak - 20.0).abs() <= 1.0);
    }

    #[test]
    fn divergent_terms_detected() {
        let err = unimodal_tail_log_sum(|n| n.sqrt(), 1.0).unwrap_err();
        assert!(matches!(err, Error::Divergence(_)));
    }

    #[test]
    fn strided_sum_agrees_with_direct_on_wide_window() {
        // Gaussian-like bump wide enough to trigger striding.
        let sigma = 4e6f64;
        let center = 3e7f64;
        let t = |n: f64| -((n - center) / sigma).powi(2);
        let (v, info) = unimodal_tail_log_sum(t, 1.0).unwrap();
        // integral approximation: sum ≈ sigma * sqrt(pi)
        let expect = (sigma * std::f64::consts::PI.sqrt()).ln();
        assert!(info.stride > 1.0, "expected strided path, got {info:?}");
        assert!((v - expect).abs() < 1e-6, "got {v}, want {expect}");
    }
}
