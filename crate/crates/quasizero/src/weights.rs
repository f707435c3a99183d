//! Admissible weight sequences: `w_n >= 1`, normalized so that
//! `sum 1/w_n = 1`, with superpolynomially decaying mass `1/w_n`.
//!
//! Three families are supported: the Gevrey family `w_n = exp(a n^alpha + c)`,
//! user tables (optionally spliced into a Gevrey tail), and weights derived
//! from a derivative-bound sequence `M` via the falling-factorial maximum.
//! All weights are handled in the log domain throughout; `ln w_n = +inf`
//! marks indices carrying no mass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logsum;

/// Relative term size at which the Gevrey normalization sum is truncated.
pub const GEVREY_TAIL_RTOL: f64 = 1e-18;

/// Hard cap on the number of terms summed for the Gevrey normalization
/// constant; reaching it means alpha is too small for direct summation.
const GEVREY_TERM_CAP: u64 = 30_000_000;

/// Residual tolerance for `|sum 1/w_n - 1|` after construction.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Tail behaviour of a table weight beyond its listed entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableTail {
    /// `w_n = +inf` beyond the table: finite support.
    InfiniteWeight,
    /// `ln w_n = a n^alpha` beyond the table. The table is expected to
    /// splice continuously into this formula at the boundary; only
    /// finiteness is checked.
    Gevrey { alpha: f64, a: f64 },
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Gevrey { alpha: f64, a: f64, c: f64 },
    /// Rescaled table entries, plus the tail rule and the log of the
    /// rescaling factor applied to tail values.
    Table { log_w: Vec<f64>, tail: TableTail, log_scale: f64 },
    /// Falling-factorial weight derived from a derivative-bound sequence,
    /// truncated at `horizon` (weights beyond are +inf).
    DerivedFromM { log_w: Vec<f64> },
}

/// A normalized admissible weight sequence.
#[derive(Debug, Clone)]
pub struct WeightSequence {
    family: Family,
    support_max: Option<u64>,
    normalization_residual: f64,
}

/// Regularity scan result: monotonicity of `w_n` and the root condition
/// `w_{2n} <= sqrt(w_n w_{4n})`.
#[derive(Debug, Clone, Serialize)]
pub struct RegularityReport {
    pub monotone: bool,
    pub root_condition: bool,
    pub first_monotone_violation: Option<u64>,
    pub first_root_violation: Option<u64>,
}

/// Derivative-bound sequence for the uniform-derivative class, in log domain.
#[derive(Debug, Clone, PartialEq)]
pub struct MSequence {
    log_m: Vec<f64>,
}

impl MSequence {
    pub fn new(log_m: Vec<f64>) -> Result<Self> {
        if log_m.len() < 2 {
            return Err(Error::ParameterDomain(format!(
                "derivative-bound sequence needs at least 2 entries, got {}",
                log_m.len()
            )));
        }
        if let Some(bad) = log_m.iter().find(|v| !v.is_finite()) {
            return Err(Error::ParameterDomain(format!(
                "derivative-bound entries must be finite, got {bad}"
            )));
        }
        Ok(Self { log_m })
    }

    pub fn len(&self) -> usize {
        self.log_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_m.is_empty()
    }

    pub fn log_m(&self) -> &[f64] {
        &self.log_m
    }

    /// Greatest log-convex minorant: lower convex hull of `(k, ln M_k)`.
    pub fn log_convex_minorant(&self) -> MSequence {
        let pts: Vec<(f64, f64)> = self
            .log_m
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as f64, v))
            .collect();
        // lower hull by monotone chain (x already sorted)
        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let a = hull[hull.len() - 2];
                let b = hull[hull.len() - 1];
                // keep b only if it lies strictly below segment a-p
                let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
                if cross <= 0.0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        // evaluate the hull at every integer k
        let mut out = vec![0.0; self.log_m.len()];
        let mut seg = 0usize;
        for (k, slot) in out.iter_mut().enumerate() {
            let x = k as f64;
            while seg + 1 < hull.len() && hull[seg + 1].0 < x {
                seg += 1;
            }
            if seg + 1 >= hull.len() {
                *slot = hull[hull.len() - 1].1;
            } else {
                let (x0, y0) = hull[seg];
                let (x1, y1) = hull[seg + 1];
                *slot = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        MSequence { log_m: out }
    }

    /// Whether the interior satisfies `2 ln M_k <= ln M_{k-1} + ln M_{k+1}`.
    pub fn is_log_convex(&self, slack: f64) -> bool {
        self.log_m
            .windows(3)
            .all(|w| 2.0 * w[1] <= w[0] + w[2] + slack)
    }
}

impl WeightSequence {
    /// `ln w_n`; `+inf` for indices with no mass.
    pub fn log_w(&self, n: u64) -> f64 {
        self.log_w_f(n as f64)
    }

    /// Same evaluator on a real index, used by the windowed moment sums.
    pub(crate) fn log_w_f(&self, n: f64) -> f64 {
        match &self.family {
            Family::Gevrey { alpha, a, c } => a * n.powf(*alpha) + c,
            Family::Table { log_w, tail, log_scale } => {
                if n < log_w.len() as f64 {
                    log_w[n as usize]
                } else {
                    match tail {
                        TableTail::InfiniteWeight => f64::INFINITY,
                        TableTail::Gevrey { alpha, a } => a * n.powf(*alpha) + log_scale,
                    }
                }
            }
            Family::DerivedFromM { log_w } => {
                if n < log_w.len() as f64 {
                    log_w[n as usize]
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    /// Largest index carrying mass, when the support is finite.
    pub fn support_max(&self) -> Option<u64> {
        self.support_max
    }

    /// `|sum 1/w_n - 1|` as computed at construction time.
    pub fn normalization_residual(&self) -> f64 {
        self.normalization_residual
    }

    /// Index from which the log-weight follows a smooth closed-form tail
    /// (table entries before it must be summed directly).
    pub(crate) fn smooth_tail_start(&self) -> Option<u64> {
        match &self.family {
            Family::Gevrey { .. } => Some(0),
            Family::Table { tail: TableTail::Gevrey { .. }, log_w, .. } => Some(log_w.len() as u64),
            _ => None,
        }
    }

    /// Gevrey exponent when the weight is (or tails into) the Gevrey family.
    pub fn gevrey_alpha(&self) -> Option<f64> {
        match &self.family {
            Family::Gevrey { alpha, .. } => Some(*alpha),
            Family::Table { tail: TableTail::Gevrey { alpha, .. }, .. } => Some(*alpha),
            _ => None,
        }
    }

    /// Spot check that `n^j / w_n` decays over the computed horizon for a
    /// few fixed powers; trivially true for finite support.
    pub fn superpolynomial_decay_ok(&self, horizon: u64) -> bool {
        if self.support_max.is_some() {
            return true;
        }
        [1u32, 5, 10].iter().all(|&j| {
            let at = |n: u64| f64::from(j) * (n as f64).ln() - self.log_w(n);
            at(horizon) < at(horizon / 2) && at(horizon) < -20.0
        })
    }

    /// Scan the two regularity conditions up to `horizon`.
    pub fn check_regularity(&self, horizon: u64) -> Result<RegularityReport> {
        if horizon < 4 {
            return Err(Error::ParameterDomain(format!(
                "regularity horizon must be at least 4, got {horizon}"
            )));
        }
        let mut first_monotone = None;
        for n in 1..=horizon {
            if self.log_w(n - 1) > self.log_w(n) + 1e-9 {
                first_monotone = Some(n);
                break;
            }
        }
        let mut first_root = None;
        for n in 1..=horizon / 4 {
            let lhs = 2.0 * self.log_w(2 * n);
            let rhs = self.log_w(n) + self.log_w(4 * n);
            // inf <= inf counts as satisfied
            if lhs > rhs + 1e-9 && !(lhs.is_infinite() && rhs.is_infinite()) {
                first_root = Some(n);
                break;
            }
        }
        Ok(RegularityReport {
            monotone: first_monotone.is_none(),
            root_condition: first_root.is_none(),
            first_monotone_violation: first_monotone,
            first_root_violation: first_root,
        })
    }
}

/// Normalization constant `c(alpha, a) = ln sum_{n>=0} exp(-a n^alpha)`.
pub fn gevrey_c(alpha: f64, a: f64) -> Result<f64> {
    check_gevrey_params(alpha, a)?;
    let mut sum = 0.0f64;
    let mut n = 0u64;
    loop {
        let term = (-a * (n as f64).powf(alpha)).exp();
        sum += term;
        if term < GEVREY_TAIL_RTOL * sum {
            return Ok(sum.ln());
        }
        n += 1;
        if n > GEVREY_TERM_CAP {
            return Err(Error::ParameterDomain(format!(
                "gevrey normalization needs more than {GEVREY_TERM_CAP} terms \
                 (alpha = {alpha} too small for direct summation)"
            )));
        }
    }
}

fn check_gevrey_params(alpha: f64, a: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::ParameterDomain(format!(
            "gevrey exponent must lie in (0, 1], got {alpha}"
        )));
    }
    if !(a > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "gevrey scale must be positive, got {a}"
        )));
    }
    Ok(())
}

/// The Gevrey weight `ln w_n = a n^alpha + c(alpha, a)`.
pub fn gevrey_weight(alpha: f64, a: f64) -> Result<WeightSequence> {
    let c = gevrey_c(alpha, a)?;
    let w = WeightSequence {
        family: Family::Gevrey { alpha, a, c },
        support_max: None,
        normalization_residual: 0.0,
    };
    let residual = (mass_sum(&w)? - 1.0).abs();
    Ok(WeightSequence { normalization_residual: residual, ..w })
}

/// A user table of log-weights, rescaled so that `sum 1/w_n = 1`.
///
/// Rescaling multiplies every weight by `s = sum 1/w_n`; the construction
/// fails if that pushes any weight below 1.
pub fn table_weight(log_w_table: &[f64], tail: TableTail) -> Result<WeightSequence> {
    if log_w_table.is_empty() {
        return Err(Error::ParameterDomain("weight table is empty".into()));
    }
    if let Some(bad) = log_w_table.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
        return Err(Error::ParameterDomain(format!(
            "table log-weights must be finite and nonnegative, got {bad}"
        )));
    }
    if let TableTail::Gevrey { alpha, a } = tail {
        check_gevrey_params(alpha, a)?;
    }

    // ln s = ln sum exp(-ln w_n) over table and tail
    let table_mass = logsum::log_sum_exp(&log_w_table.iter().map(|v| -v).collect::<Vec<_>>());
    let log_s = match tail {
        TableTail::InfiniteWeight => table_mass,
        TableTail::Gevrey { alpha, a } => {
            let start = log_w_table.len() as f64;
            let (tail_mass, _) =
                logsum::unimodal_tail_log_sum(|n| -a * n.powf(alpha), start)?;
            logsum::log_add_exp(table_mass, tail_mass)
        }
    };

    let rescaled: Vec<f64> = log_w_table.iter().map(|v| v + log_s).collect();
    let min_after = rescaled.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_after < -NORMALIZATION_TOL {
        return Err(Error::NormalizationInfeasible(format!(
            "rescaling by ln s = {log_s:.6} drives min ln w to {min_after:.6} < 0"
        )));
    }
    if let TableTail::Gevrey { alpha, a } = tail {
        // smallest rescaled tail weight sits at the table boundary
        let tail_min = a * (log_w_table.len() as f64).powf(alpha) + log_s;
        if tail_min < -NORMALIZATION_TOL {
            return Err(Error::NormalizationInfeasible(format!(
                "rescaling by ln s = {log_s:.6} drives tail weights below 1"
            )));
        }
    }

    let support_max = match tail {
        TableTail::InfiniteWeight => Some(log_w_table.len() as u64 - 1),
        TableTail::Gevrey { .. } => None,
    };
    let w = WeightSequence {
        family: Family::Table { log_w: rescaled, tail, log_scale: log_s },
        support_max,
        normalization_residual: 0.0,
    };
    let residual = (mass_sum(&w)? - 1.0).abs();
    Ok(WeightSequence { normalization_residual: residual, ..w })
}

/// Pre-normalization log-weight of the derived family:
/// `ln w~_m = max_{0<=k<=m} [ ln(m (m-1) ... (m-k+1)) - ln M_{2k} ]`.
///
/// `M` must already be log-convex so the maximand is concave in `k`; the
/// maximum is certified by the first downward step. Errors if the sequence
/// is exhausted while the maximand is still climbing.
pub fn raw_log_w_tilde(m_seq: &MSequence, m: u64) -> Result<f64> {
    let log_m = m_seq.log_m();
    let k_avail = ((log_m.len() - 1) / 2) as u64;
    let k_cap = m.min(k_avail);
    let mut log_falling = 0.0f64;
    let mut best = -log_m[0];
    let mut rising_at_cap = true;
    for k in 1..=k_cap {
        log_falling += ((m - k + 1) as f64).ln();
        let val = log_falling - log_m[2 * k as usize];
        if val >= best {
            best = val;
        } else {
            rising_at_cap = false;
        }
    }
    if k_cap < m && rising_at_cap {
        return Err(Error::ParameterDomain(format!(
            "derivative-bound sequence too short: maximand still rising at \
             k = {k_cap} < m = {m} (need entries up to index {})",
            2 * m
        )));
    }
    Ok(best)
}

/// Weight derived from a derivative-bound sequence, truncated at `horizon`.
///
/// The sequence is first replaced by its greatest log-convex minorant, the
/// falling-factorial maximum is evaluated for `m <= horizon`, and the result
/// is normalized like a table weight.
pub fn weight_from_m(m_seq: &MSequence, horizon: u64) -> Result<WeightSequence> {
    let convexified = m_seq.log_convex_minorant();
    let mut raw = Vec::with_capacity(horizon as usize + 1);
    for m in 0..=horizon {
        raw.push(raw_log_w_tilde(&convexified, m)?);
    }
    let log_s = logsum::log_sum_exp(&raw.iter().map(|v| -v).collect::<Vec<_>>());
    let rescaled: Vec<f64> = raw.iter().map(|v| v + log_s).collect();
    let min_after = rescaled.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_after < -NORMALIZATION_TOL {
        return Err(Error::NormalizationInfeasible(format!(
            "derived weight rescaling drives min ln w to {min_after:.6} < 0"
        )));
    }
    let w = WeightSequence {
        family: Family::DerivedFromM { log_w: rescaled },
        support_max: Some(horizon),
        normalization_residual: 0.0,
    };
    let residual = (mass_sum(&w)? - 1.0).abs();
    Ok(WeightSequence { normalization_residual: residual, ..w })
}

/// Recompute `sum 1/w_n` over the effective support.
fn mass_sum(w: &WeightSequence) -> Result<f64> {
    match (w.support_max, w.smooth_tail_start()) {
        (Some(s), _) => {
            let terms: Vec<f64> = (0..=s).map(|n| -w.log_w(n)).collect();
            Ok(logsum::log_sum_exp(&terms).exp())
        }
        (None, Some(tail_start)) => {
            let prefix: Vec<f64> = (0..tail_start).map(|n| -w.log_w(n)).collect();
            let prefix_mass = logsum::log_sum_exp(&prefix);
            let (tail_mass, _) = logsum::unimodal_tail_log_sum(
                |n| -w.log_w_f(n),
                tail_start as f64,
            )?;
            Ok(logsum::log_add_exp(prefix_mass, tail_mass).exp())
        }
        (None, None) => unreachable!("infinite support always has a smooth tail"),
    }
}

/// JSON weight descriptor accepted by the CLI and file interfaces.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightDescriptor {
    Gevrey { alpha: f64, a: f64 },
    Table { log_w: Vec<f64>, tail: TableTail },
    #[serde(rename = "from_M")]
    FromM {
        #[serde(rename = "log_M")]
        log_m: Vec<f64>,
        horizon: u64,
    },
}

impl WeightDescriptor {
    pub fn build(&self) -> Result<WeightSequence> {
        match self {
            WeightDescriptor::Gevrey { alpha, a } => gevrey_weight(*alpha, *a),
            WeightDescriptor::Table { log_w, tail } => table_weight(log_w, *tail),
            WeightDescriptor::FromM { log_m, horizon } => {
                weight_from_m(&MSequence::new(log_m.clone())?, *horizon)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn gevrey_normalization_constant_geometric_case() {
        // alpha = 1, a = 1: sum e^{-n} = 1/(1 - e^{-1}), c = -ln(1 - e^{-1})
        let c = gevrey_c(1.0, 1.0).unwrap();
        let exact = -(-1.0f64).exp().ln_1p() - 0.0; // -ln(1 - e^{-1}) = -ln_1p(-e^{-1})
        let closed = -(1.0 - (-1.0f64).exp()).ln();
        assert!((c - closed).abs() < 1e-14, "c = {c}, closed form = {closed}");
        assert!((closed - 0.45867514538708193).abs() < 1e-15);
        let _ = exact;
    }

    #[test]
    fn gevrey_weight_is_normalized() {
        let w = gevrey_weight(1.0, 1.0).unwrap();
        assert!((w.log_w(0).exp() - 1.5819767068693265).abs() < 1e-12);
        assert!(w.normalization_residual() <= NORMALIZATION_TOL);
        assert!(w.support_max().is_none());

        let w = gevrey_weight(0.5, 1.0).unwrap();
        assert!(w.normalization_residual() <= NORMALIZATION_TOL);
    }

    #[test]
    fn gevrey_rejects_bad_parameters() {
        assert!(gevrey_weight(0.0, 1.0).is_err());
        assert!(gevrey_weight(1.5, 1.0).is_err());
        assert!(gevrey_weight(1.0, 0.0).is_err());
        assert!(gevrey_weight(1.0, -2.0).is_err());
    }

    #[test]
    fn table_already_normalized_two_point() {
        let w = table_weight(&[LN2, LN2], TableTail::InfiniteWeight).unwrap();
        assert!((w.log_w(0) - LN2).abs() < 1e-15);
        assert!((w.log_w(1) - LN2).abs() < 1e-15);
        assert_eq!(w.log_w(2), f64::INFINITY);
        assert_eq!(w.support_max(), Some(1));
        assert!(w.normalization_residual() <= NORMALIZATION_TOL);
    }

    #[test]
    fn table_rescaling_unit_entries() {
        // (1, 1) has mass 2, so s = 2 and w' = (2, 2)
        let w = table_weight(&[0.0, 0.0], TableTail::InfiniteWeight).unwrap();
        assert!((w.log_w(0) - LN2).abs() < 1e-14);
        assert!((w.log_w(1) - LN2).abs() < 1e-14);
    }

    #[test]
    fn table_rescaling_uneven_entries() {
        // (1, 10): s = 1.1, w' = (1.1, 11)
        let w = table_weight(&[0.0, 10f64.ln()], TableTail::InfiniteWeight).unwrap();
        assert!((w.log_w(0).exp() - 1.1).abs() < 1e-12);
        assert!((w.log_w(1).exp() - 11.0).abs() < 1e-10);
        assert!(w.normalization_residual() <= NORMALIZATION_TOL);
    }

    #[test]
    fn table_rescaling_preserves_ratios() {
        // rescaling adds one constant in the log domain, so pairwise ratios
        // survive up to a single rounding of that addition
        let table = [0.3, 1.7, 0.9, 2.4];
        let w = table_weight(&table, TableTail::InfiniteWeight).unwrap();
        for i in 0..table.len() as u64 {
            for j in 0..table.len() as u64 {
                let got = w.log_w(i) - w.log_w(j);
                let want = table[i as usize] - table[j as usize];
                assert!((got - want).abs() <= 1e-15, "ratio drift at ({i}, {j})");
            }
        }
    }

    #[test]
    fn table_rescaling_boundary_hits_unit_weight() {
        // rescaling a single entry lands it exactly on w = 1; the guard
        // against sub-unit weights must accept this boundary case
        let w = table_weight(&[3.0], TableTail::InfiniteWeight).unwrap();
        assert!(w.log_w(0).abs() <= 1e-12);
    }

    #[test]
    fn table_rejects_empty_and_negative() {
        assert!(table_weight(&[], TableTail::InfiniteWeight).is_err());
        assert!(table_weight(&[-0.1], TableTail::InfiniteWeight).is_err());
    }

    #[test]
    fn table_with_gevrey_tail_normalizes() {
        // splice a short table into the alpha = 1 tail
        let tail = TableTail::Gevrey { alpha: 1.0, a: 1.0 };
        let w = table_weight(&[0.0, 1.0, 2.0], tail).unwrap();
        assert!(w.support_max().is_none());
        assert!(w.normalization_residual() <= NORMALIZATION_TOL);
        // tail values carry the same rescaling
        assert!(w.log_w(10) > 10.0);
    }

    #[test]
    fn gevrey_regularity_holds() {
        let w = gevrey_weight(1.0, 1.0).unwrap();
        let rep = w.check_regularity(1000).unwrap();
        assert!(rep.monotone && rep.root_condition, "{rep:?}");

        let w = gevrey_weight(0.5, 2.0).unwrap();
        let rep = w.check_regularity(1000).unwrap();
        assert!(rep.monotone && rep.root_condition, "{rep:?}");
    }

    #[test]
    fn table_regularity_with_infinite_tail() {
        let w = table_weight(&[LN2, LN2], TableTail::InfiniteWeight).unwrap();
        let rep = w.check_regularity(16).unwrap();
        assert!(rep.monotone, "{rep:?}");

        let w = table_weight(&[0.0, 10f64.ln()], TableTail::InfiniteWeight).unwrap();
        let rep = w.check_regularity(16).unwrap();
        assert!(rep.monotone, "{rep:?}");
    }

    #[test]
    fn regularity_rejects_tiny_horizon() {
        let w = gevrey_weight(1.0, 1.0).unwrap();
        assert!(w.check_regularity(3).is_err());
    }

    #[test]
    fn regularity_flags_decreasing_table() {
        let w = table_weight(&[1.0, 0.5, 2.0], TableTail::InfiniteWeight).unwrap();
        let rep = w.check_regularity(8).unwrap();
        assert!(!rep.monotone);
        assert_eq!(rep.first_monotone_violation, Some(1));
    }

    #[test]
    fn superpolynomial_decay_spot_check() {
        let w = gevrey_weight(0.5, 1.0).unwrap();
        assert!(w.superpolynomial_decay_ok(100_000));
        let w = table_weight(&[LN2, LN2], TableTail::InfiniteWeight).unwrap();
        assert!(w.superpolynomial_decay_ok(100));
    }

    #[test]
    fn log_convex_minorant_flattens_bumps() {
        let m = MSequence::new(vec![0.0, 5.0, 0.0, 0.0]).unwrap();
        let hull = m.log_convex_minorant();
        assert!(hull.is_log_convex(1e-12));
        assert!((hull.log_m()[1] - 0.0).abs() < 1e-12);
        // convex input is unchanged
        let m = MSequence::new(vec![0.0, 0.0, 1.0, 3.0]).unwrap();
        assert_eq!(m.log_convex_minorant(), m);
    }

    #[test]
    fn w_tilde_constant_m() {
        // M_k = 1: w~_2 = max(1, 2, 2) = 2, w~_0 = 1/M_0 = 1
        let m = MSequence::new(vec![0.0; 7]).unwrap();
        assert!((raw_log_w_tilde(&m, 2).unwrap() - LN2).abs() < 1e-15);
        assert_eq!(raw_log_w_tilde(&m, 0).unwrap(), 0.0);
    }

    #[test]
    fn w_tilde_factorial_m() {
        // M_j = j! up to j = 6, m = 4: max_k falling(4,k)/(2k)! = 4/2 at k = 1
        let log_m: Vec<f64> = (0..7u64)
            .map(|j| (1..=j).map(|i| (i as f64).ln()).sum())
            .collect();
        let m = MSequence::new(log_m).unwrap();
        let got = raw_log_w_tilde(&m, 4).unwrap();
        assert!((got - LN2).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn w_tilde_errors_when_sequence_exhausted_mid_climb() {
        // M_k = 1 keeps the maximand climbing to k = m; a short list cannot
        // certify the peak for m = 4
        let m = MSequence::new(vec![0.0; 5]).unwrap();
        assert!(raw_log_w_tilde(&m, 4).is_err());
        assert!(raw_log_w_tilde(&m, 2).is_ok());
    }

    #[test]
    fn weight_from_m_normalizes_and_grows() {
        // M_k = 1 gives w~_m = m!, a rapidly growing weight
        let m = MSequence::new(vec![0.0; 101]).unwrap();
        let w = weight_from_m(&m, 50).unwrap();
        assert_eq!(w.support_max(), Some(50));
        assert!(w.normalization_residual() <= NORMALIZATION_TOL);
        // nondecreasing for log-convex M
        for n in 1..=50 {
            assert!(w.log_w(n) >= w.log_w(n - 1) - 1e-12);
        }
        // all weights at least 1
        for n in 0..=50 {
            assert!(w.log_w(n) >= -1e-12);
        }
    }

    #[test]
    fn weight_from_m_rejects_degenerate_length() {
        assert!(MSequence::new(vec![0.0]).is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        let d: WeightDescriptor =
            serde_json::from_str(r#"{"family":"gevrey","alpha":1.0,"a":1.0}"#).unwrap();
        let w = d.build().unwrap();
        assert!(w.support_max().is_none());

        let d: WeightDescriptor = serde_json::from_str(
            r#"{"family":"table","log_w":[0.0,0.0],"tail":"infinite-weight"}"#,
        )
        .unwrap();
        let w = d.build().unwrap();
        assert_eq!(w.support_max(), Some(1));

        let d: WeightDescriptor = serde_json::from_str(
            r#"{"family":"from_M","log_M":[0.0,0.0,0.0,0.0,0.0],"horizon":2}"#,
        )
        .unwrap();
        let w = d.build().unwrap();
        assert_eq!(w.support_max(), Some(2));

        let text = serde_json::to_string(&d).unwrap();
        assert!(text.contains("from_M"), "{text}");
    }
}
