//! Evaluators for uniform-convergence bounds on loss classes.
//!
//! Every evaluator works in log space: the polynomial covering factors and
//! the exponential tails are combined as logarithms, and the linear value is
//! only materialized at the end. When that final exponentiation overflows the
//! linear value is `+inf` while the logarithm stays exact and is reported
//! alongside it.

use std::f64::consts::{E, LN_2};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{extended_real, LossKind};

/// Parameters shared by the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    /// Sample size.
    pub n: u64,
    pub epsilon: f64,
    /// Uniform bound on `|g|` over the model class.
    pub b_g: f64,
    /// Upper bound on `|Y|` (absolute and squared losses).
    pub b_y: Option<f64>,
    /// Lower bound on `|Y|` (percentage loss).
    pub lambda: Option<f64>,
    /// VC dimension of the loss class subgraphs.
    pub vc: u32,
    /// Norm order of the covering number.
    pub p: u32,
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidBoundInput(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

fn required(name: &str, value: Option<f64>) -> Result<f64> {
    positive(
        name,
        value.ok_or_else(|| Error::InvalidBoundInput(format!("{name} is required")))?,
    )
}

/// Uniform upper bound `B` on the loss class:
///
/// * absolute loss: `B_G + B_Y`
/// * squared loss: `(B_G + B_Y)^2`
/// * percentage loss: `1 + B_G / lambda`
pub fn envelope_bound(
    loss: LossKind,
    b_g: f64,
    b_y: Option<f64>,
    lambda: Option<f64>,
) -> Result<f64> {
    let b_g = positive("b_g", b_g)?;
    Ok(match loss {
        LossKind::Mae => b_g + required("b_y", b_y)?,
        LossKind::Mse => (b_g + required("b_y", b_y)?).powi(2),
        LossKind::Mape => 1.0 + b_g / required("lambda", lambda)?,
    })
}

/// A nonnegative quantity carried as its natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogValue {
    #[serde(with = "extended_real")]
    pub value: f64,
    #[serde(with = "extended_real")]
    pub log_value: f64,
    /// The linear value overflowed; `log_value` is the authoritative result.
    pub log_space_fallback: bool,
}

impl LogValue {
    pub fn from_log(log_value: f64) -> Self {
        let value = log_value.exp();
        Self {
            value,
            log_value,
            log_space_fallback: value.is_infinite() && log_value.is_finite(),
        }
    }

    /// Wraps a value computed directly, keeping it bit-for-bit.
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            log_value: value.ln(),
            log_space_fallback: false,
        }
    }
}

/// `ln(3 * ((2e B^p / eps^p) * ln(3e B^p / eps^p))^V)`.
fn log_vc_covering(envelope: f64, epsilon: f64, p: u32, vc: u32) -> f64 {
    let log_ratio = p as f64 * (envelope.ln() - epsilon.ln());
    let inner = (2.0 * E).ln() + log_ratio + ((3.0 * E).ln() + log_ratio).ln();
    3f64.ln() + vc as f64 * inner
}

fn check_structure(inputs: &BoundInputs) -> Result<()> {
    if inputs.vc < 2 {
        return Err(Error::InvalidBoundInput(format!(
            "vc must be at least 2, got {}",
            inputs.vc
        )));
    }
    if inputs.p < 1 {
        return Err(Error::InvalidBoundInput("p must be at least 1".into()));
    }
    if inputs.n == 0 {
        return Err(Error::InvalidBoundInput("n must be positive".into()));
    }
    positive("epsilon", inputs.epsilon)?;
    Ok(())
}

fn check_covering_hypothesis(epsilon: f64, envelope: f64) -> Result<()> {
    if epsilon >= envelope / 4.0 {
        return Err(Error::HypothesisViolated { epsilon, envelope });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Envelope,
    Covering,
    Ulln,
}

/// Result of one bound evaluation, with everything needed to reproduce it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub formula: Formula,
    pub loss: LossKind,
    pub inputs: BoundInputs,
    /// The loss-class envelope `B` the formula was evaluated with.
    pub envelope: f64,
    #[serde(flatten)]
    pub result: LogValue,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

pub fn envelope_report(inputs: &BoundInputs, loss: LossKind) -> Result<BoundReport> {
    let envelope = envelope_bound(loss, inputs.b_g, inputs.b_y, inputs.lambda)?;
    Ok(BoundReport {
        formula: Formula::Envelope,
        loss,
        inputs: *inputs,
        envelope,
        result: LogValue::exact(envelope),
        note: None,
    })
}

/// VC-dimension bound on the `L_p` covering number of the loss class:
/// `3 * ((2e B^p / eps^p) * ln(3e B^p / eps^p))^V`, valid for `0 < eps < B/4`.
pub fn vc_covering_bound(inputs: &BoundInputs, loss: LossKind) -> Result<BoundReport> {
    check_structure(inputs)?;
    let envelope = envelope_bound(loss, inputs.b_g, inputs.b_y, inputs.lambda)?;
    check_covering_hypothesis(inputs.epsilon, envelope)?;
    Ok(BoundReport {
        formula: Formula::Covering,
        loss,
        inputs: *inputs,
        envelope,
        result: LogValue::from_log(log_vc_covering(
            envelope,
            inputs.epsilon,
            inputs.p,
            inputs.vc,
        )),
        note: None,
    })
}

/// Probability bound on the uniform deviation between empirical and true risk:
/// `8 * N_p(eps/8) * exp(-n eps^2 / (128 B^2))`.
///
/// The expected covering number is replaced by its data-free VC bound.
pub fn ulln_bound(inputs: &BoundInputs, loss: LossKind) -> Result<BoundReport> {
    check_structure(inputs)?;
    let envelope = envelope_bound(loss, inputs.b_g, inputs.b_y, inputs.lambda)?;
    let eps = inputs.epsilon;
    check_covering_hypothesis(eps / 8.0, envelope)?;
    let log_value = 8f64.ln() + log_vc_covering(envelope, eps / 8.0, inputs.p, inputs.vc)
        - inputs.n as f64 * eps * eps / (128.0 * envelope * envelope);
    Ok(BoundReport {
        formula: Formula::Ulln,
        loss,
        inputs: *inputs,
        envelope,
        result: LogValue::from_log(log_value),
        note: Some("expected covering number replaced by its uniform VC-dimension bound".into()),
    })
}

/// `ln K(n, eps)` for `K = 24 ((16e B/eps) ln(24e B/eps))^v exp(-n eps^2 / (128 B^2))`
/// with `B = 1 + b_g / lambda`.
fn log_k_term(n: f64, epsilon: f64, v: f64, b_g: f64, lambda: f64) -> Result<f64> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::InvalidBoundInput(format!("n must be >= 1, got {n}")));
    }
    positive("epsilon", epsilon)?;
    positive("b_g", b_g)?;
    positive("lambda", lambda)?;
    if !(v.is_finite() && v >= 2.0) {
        return Err(Error::InvalidBoundInput(format!("v must be >= 2, got {v}")));
    }
    let b = 1.0 + b_g / lambda;
    let log_ratio = b.ln() - epsilon.ln();
    let inner_log = (24.0 * E).ln() + log_ratio;
    if inner_log <= 0.0 {
        return Err(Error::InvalidBoundInput(format!(
            "epsilon = {epsilon} too large: ln(24e B / eps) must be positive"
        )));
    }
    let poly = (16.0 * E).ln() + log_ratio + inner_log.ln();
    Ok(24f64.ln() + v * poly - n * epsilon * epsilon / (128.0 * b * b))
}

pub fn k_term(n: u64, epsilon: f64, v: f64, b_g: f64, lambda: f64) -> Result<LogValue> {
    log_k_term(n as f64, epsilon, v, b_g, lambda).map(LogValue::from_log)
}

/// Growth rate `coef * n^power * ln(n)^log_power`.
///
/// Parses from products such as `n^(1/3)`, `2*n^0.5`, `log(n)`, `ln(n)^2`
/// or a bare constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub coef: f64,
    pub power: f64,
    pub log_power: f64,
}

impl Rate {
    pub fn constant(c: f64) -> Self {
        Self {
            coef: c,
            power: 0.0,
            log_power: 0.0,
        }
    }

    pub fn power(p: f64) -> Self {
        Self {
            coef: 1.0,
            power: p,
            log_power: 0.0,
        }
    }

    pub fn eval(&self, n: f64) -> f64 {
        let mut v = self.coef;
        if self.power != 0.0 {
            v *= n.powf(self.power);
        }
        if self.log_power != 0.0 {
            v *= n.ln().powf(self.log_power);
        }
        v
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        if self.coef != 1.0 || (self.power == 0.0 && self.log_power == 0.0) {
            factors.push(self.coef.to_string());
        }
        match self.power {
            0.0 => {}
            1.0 => factors.push("n".into()),
            p => factors.push(format!("n^{p}")),
        }
        match self.log_power {
            0.0 => {}
            1.0 => factors.push("ln(n)".into()),
            p => factors.push(format!("ln(n)^{p}")),
        }
        f.write_str(&factors.join("*"))
    }
}

fn parse_exponent(s: &str) -> Option<f64> {
    let s = s.trim();
    let s = s
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(s);
    match s.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => s.parse().ok(),
    }
}

impl FromStr for Rate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::RateSyntax(s.to_owned());
        let mut rate = Rate::constant(1.0);
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        for factor in compact.split('*') {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, parse_exponent(e).ok_or_else(bad)?),
                None => (factor, 1.0),
            };
            match base {
                "n" => rate.power += exp,
                "log(n)" | "ln(n)" => rate.log_power += exp,
                num => rate.coef *= num.parse::<f64>().map_err(|_| bad())?.powf(exp),
            }
        }
        if !rate.coef.is_finite() || !rate.power.is_finite() || !rate.log_power.is_finite() {
            return Err(bad());
        }
        Ok(rate)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    /// Grid exponent: the point sits at `n = 2^j`.
    pub j: u32,
    pub n: f64,
    pub v: f64,
    pub b_g: f64,
    /// `ln K(2^j, eps)`.
    pub log_term: f64,
    /// `ln(2^j K(2^j, eps))`, the Cauchy-condensed term.
    pub log_condensed: f64,
}

/// Summability check for `sum_n K(n, eps)` under growth rates for `v_n` and
/// `B_{G_n}`.
///
/// Terms are sampled at `n = 2^j`. Once `K` is decreasing along the grid the
/// condensation test applies: `sum_{n >= 2^s} K(n) <= sum_{j >= s} 2^j K(2^j)`,
/// and the condensed partial sums are tracked until they stop moving.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KTermSeries {
    pub epsilon: f64,
    pub lambda: f64,
    pub v_rate: String,
    pub b_g_rate: String,
    pub points: Vec<SeriesPoint>,
    /// Grid exponent from which the terms decrease monotonically and the
    /// condensed terms are below one.
    pub tail_start: Option<u32>,
    /// Partial sums of the condensed tail, one per grid point from `tail_start`.
    pub tail_partial_sums: Vec<f64>,
    /// Grid exponent after which every later partial sum moves by at most
    /// `stability_tolerance`.
    pub stabilized_at: Option<u32>,
    pub stability_tolerance: f64,
    /// Upper bound on `sum_{n >= 2^tail_start} K(n, eps)`.
    #[serde(with = "extended_real")]
    pub tail_upper_bound: f64,
    /// `ln` of the same bound, computed without underflow.
    #[serde(with = "extended_real")]
    pub log_tail_upper_bound: f64,
    pub summable: bool,
}

pub const SERIES_STABILITY_TOLERANCE: f64 = 1e-12;

pub fn kterm_series(
    v_rate: &Rate,
    b_g_rate: &Rate,
    lambda: f64,
    epsilon: f64,
    j_max: u32,
) -> Result<KTermSeries> {
    positive("lambda", lambda)?;
    positive("epsilon", epsilon)?;
    if !(1..=1000).contains(&j_max) {
        return Err(Error::InvalidBoundInput(format!(
            "j_max must lie in 1..=1000, got {j_max}"
        )));
    }
    let mut points = Vec::new();
    for j in 0..=j_max {
        let n = 2f64.powi(j as i32);
        let v = v_rate.eval(n);
        let b_g = b_g_rate.eval(n);
        if v < 2.0 {
            continue;
        }
        if !(b_g.is_finite() && b_g > 0.0) {
            return Err(Error::InvalidBoundInput(format!(
                "B_G rate must be positive, got {b_g} at n = {n}"
            )));
        }
        let log_term = log_k_term(n, epsilon, v, b_g, lambda)?;
        points.push(SeriesPoint {
            j,
            n,
            v,
            b_g,
            log_term,
            log_condensed: j as f64 * LN_2 + log_term,
        });
    }

    // Latest index from which log K strictly decreases and condensed terms < 1.
    let mut start = None;
    for idx in (0..points.len()).rev() {
        let p = &points[idx];
        let decreasing = points.get(idx + 1).is_none_or(|q| q.log_term < p.log_term);
        if decreasing && p.log_condensed < 0.0 {
            start = Some(idx);
        } else {
            break;
        }
    }
    // A tail of fewer than two grid points is not evidence of anything.
    let start = start.filter(|&s| points.len() - s >= 2);

    let mut tail_partial_sums = Vec::new();
    let mut stabilized_at = None;
    let mut tail_upper_bound = f64::INFINITY;
    let mut log_tail_upper_bound = f64::INFINITY;
    if let Some(s) = start {
        let tail = &points[s..];
        let top = tail
            .iter()
            .map(|p| p.log_condensed)
            .fold(f64::NEG_INFINITY, f64::max);
        log_tail_upper_bound = top
            + tail
                .iter()
                .map(|p| (p.log_condensed - top).exp())
                .sum::<f64>()
                .ln();
        let mut sum = 0.0;
        for p in &points[s..] {
            sum += p.log_condensed.exp();
            tail_partial_sums.push(sum);
        }
        tail_upper_bound = sum;
        let last = *tail_partial_sums.last().unwrap();
        let stable_from = tail_partial_sums
            .iter()
            .position(|&t| last - t <= SERIES_STABILITY_TOLERANCE)
            .unwrap();
        // Require the stabilized stretch to cover some grid points beyond it.
        if stable_from + 1 < tail_partial_sums.len() {
            stabilized_at = Some(points[s + stable_from].j);
        }
    }
    let summable = stabilized_at.is_some();

    let tail_start = start.map(|s| points[s].j);
    Ok(KTermSeries {
        epsilon,
        lambda,
        v_rate: v_rate.to_string(),
        b_g_rate: b_g_rate.to_string(),
        points,
        tail_start,
        tail_partial_sums,
        stabilized_at,
        stability_tolerance: SERIES_STABILITY_TOLERANCE,
        tail_upper_bound,
        log_tail_upper_bound,
        summable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PlausiblyVanishing,
    NotVanishing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    /// `(n, v_n * B_n^2 * ln(B_n) / n)` on a log-spaced grid.
    pub ratios: Vec<(u64, f64)>,
    pub verdict: Verdict,
    /// The verdict rule: `|ratio|` nonincreasing over the last decade of the
    /// grid and the final value at most 1% of the first. A heuristic, not a
    /// proof.
    pub rule: String,
}

/// Tabulates `v_n B_n^2 ln(B_n) / n` up to `n_max` (ten points per decade,
/// starting at n = 10) and judges whether it plausibly tends to zero.
pub fn consistency_condition(
    v_rate: impl Fn(f64) -> f64,
    b_rate: impl Fn(f64) -> f64,
    n_max: u64,
) -> Result<ConsistencyReport> {
    if n_max < 10 {
        return Err(Error::InvalidBoundInput(format!(
            "n_max must be at least 10, got {n_max}"
        )));
    }
    let mut grid: Vec<u64> = Vec::new();
    let top = (n_max as f64).log10();
    let mut k = 0;
    loop {
        let e = 1.0 + k as f64 / 10.0;
        if e > top {
            break;
        }
        let n = 10f64.powf(e).round() as u64;
        if grid.last() != Some(&n) {
            grid.push(n);
        }
        k += 1;
    }
    if grid.last() != Some(&n_max) {
        grid.push(n_max);
    }

    let mut ratios = Vec::with_capacity(grid.len());
    for &n in &grid {
        let nf = n as f64;
        let v = v_rate(nf);
        let b = b_rate(nf);
        if !(v.is_finite() && v > 0.0 && b.is_finite() && b > 0.0) {
            return Err(Error::InvalidBoundInput(format!(
                "sequences must be positive: v = {v}, B = {b} at n = {n}"
            )));
        }
        ratios.push((n, v * b * b * b.ln() / nf));
    }

    let first = ratios[0].1.abs();
    let last = ratios.last().unwrap().1.abs();
    let decade_start = n_max as f64 / 10.0;
    let last_decade: Vec<f64> = ratios
        .iter()
        .filter(|(n, _)| *n as f64 >= decade_start)
        .map(|(_, r)| r.abs())
        .collect();
    let monotone = last_decade.windows(2).all(|w| w[1] <= w[0]);
    let verdict = if monotone && last <= 0.01 * first {
        Verdict::PlausiblyVanishing
    } else {
        Verdict::NotVanishing
    };
    Ok(ConsistencyReport {
        ratios,
        verdict,
        rule: "heuristic: |ratio| nonincreasing over the last decade and final <= 0.01 * first"
            .into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inputs(b_g: f64, b_y: f64, epsilon: f64, vc: u32) -> BoundInputs {
        BoundInputs {
            n: 1000,
            epsilon,
            b_g,
            b_y: Some(b_y),
            lambda: None,
            vc,
            p: 1,
        }
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(
            envelope_bound(LossKind::Mape, 9.0, None, Some(1.0)).unwrap(),
            10.0
        );
        assert_eq!(
            envelope_bound(LossKind::Mae, 9.0, Some(1.0), None).unwrap(),
            10.0
        );
        assert_eq!(
            envelope_bound(LossKind::Mape, 9.0, None, Some(0.5)).unwrap(),
            19.0
        );
        assert_eq!(
            envelope_bound(LossKind::Mse, 9.0, Some(1.0), None).unwrap(),
            100.0
        );
        assert!(envelope_bound(LossKind::Mape, 9.0, Some(1.0), None).is_err());
        assert!(envelope_bound(LossKind::Mae, 0.0, Some(1.0), None).is_err());
        assert!(envelope_bound(LossKind::Mape, 1.0, None, Some(-1.0)).is_err());
    }

    #[test]
    fn covering_reference_value() {
        // 3 * (10e * ln(15e))^2 evaluated with mpmath at 50 digits.
        let r = vc_covering_bound(&inputs(0.5, 0.5, 0.2, 2), LossKind::Mae).unwrap();
        assert_eq!(r.envelope, 1.0);
        assert!((r.result.value - 30479.050174643016).abs() < 1e-8);
        assert!(!r.result.log_space_fallback);
    }

    #[test]
    fn covering_hypothesis_enforced() {
        let err = vc_covering_bound(&inputs(0.5, 0.5, 1.0 / 3.0, 2), LossKind::Mae).unwrap_err();
        assert!(matches!(err, Error::HypothesisViolated { .. }));
        assert!(vc_covering_bound(&inputs(0.5, 0.5, 0.25, 2), LossKind::Mae).is_err());
        assert!(vc_covering_bound(&inputs(0.5, 0.5, 0.1, 1), LossKind::Mae).is_err());
    }

    #[test]
    fn covering_decreasing_towards_quarter_envelope() {
        let mut prev = f64::INFINITY;
        for k in 1..50 {
            let eps = 0.25 * k as f64 / 50.0;
            let v = vc_covering_bound(&inputs(0.5, 0.5, eps, 2), LossKind::Mae)
                .unwrap()
                .result
                .value;
            assert!(v.is_finite() && v < prev);
            prev = v;
        }
    }

    #[test]
    fn ulln_decreases_with_n() {
        let mut i = inputs(0.5, 0.5, 0.5, 2);
        i.n = 1_000_000;
        let a = ulln_bound(&i, LossKind::Mae).unwrap().result;
        i.n = 2_000_000;
        let b = ulln_bound(&i, LossKind::Mae).unwrap().result;
        assert!(b.log_value < a.log_value);
        assert!(a.value >= 0.0 && b.value >= 0.0);
    }

    #[test]
    fn ulln_target_bounds_enter_through_envelope() {
        let mae = BoundInputs {
            n: 10_000,
            epsilon: 1.0,
            b_g: 4.0,
            b_y: Some(1.0),
            lambda: None,
            vc: 3,
            p: 1,
        };
        let mape = BoundInputs {
            b_y: None,
            lambda: Some(1.0),
            ..mae
        };
        let a = ulln_bound(&mae, LossKind::Mae).unwrap();
        let b = ulln_bound(&mape, LossKind::Mape).unwrap();
        assert_eq!(a.envelope, 5.0);
        assert_eq!(b.envelope, 5.0);
        assert_eq!(a.result, b.result);

        let a = ulln_bound(
            &BoundInputs {
                b_y: Some(2.0),
                ..mae
            },
            LossKind::Mae,
        )
        .unwrap();
        let b = ulln_bound(
            &BoundInputs {
                lambda: Some(0.5),
                ..mape
            },
            LossKind::Mape,
        )
        .unwrap();
        assert_eq!(a.envelope, 6.0);
        assert_eq!(b.envelope, 9.0);
        assert!(b.result.log_value > a.result.log_value);
    }

    #[test]
    fn overflow_falls_back_to_log() {
        let i = BoundInputs {
            n: 10,
            epsilon: 1e-3,
            b_g: 1e3,
            b_y: Some(1e3),
            lambda: None,
            vc: 500,
            p: 2,
        };
        let r = vc_covering_bound(&i, LossKind::Mae).unwrap();
        assert!(r.result.value.is_infinite());
        assert!(r.result.log_value.is_finite());
        assert!(r.result.log_space_fallback);
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["value"], "inf");
        assert_eq!(json["log_space_fallback"], true);
    }

    #[test]
    fn k_term_large_arguments_stay_finite_in_log() {
        let k = k_term(1_000_000_000, 0.1, 1000.0, 999.0, 1.0).unwrap();
        assert!(k.log_value.is_finite());
    }

    #[test]
    fn k_term_vanishes_for_large_n() {
        let mut prev = f64::INFINITY;
        for e in 6..16 {
            let k = k_term(10u64.pow(e), 0.5, 3.0, 2.0, 1.0).unwrap();
            assert!(k.log_value < prev);
            prev = k.log_value;
        }
        assert_eq!(
            k_term(10u64.pow(15), 0.5, 3.0, 2.0, 1.0).unwrap().value,
            0.0
        );
    }

    #[test]
    fn k_term_preconditions() {
        assert!(k_term(0, 0.5, 3.0, 2.0, 1.0).is_err());
        assert!(k_term(10, 0.5, 1.5, 2.0, 1.0).is_err());
        assert!(k_term(10, 1e6, 3.0, 2.0, 1.0).is_err());
        assert!(k_term(10, 0.5, 3.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn rate_parsing() {
        let r: Rate = "n^(1/3)".parse().unwrap();
        assert!((r.power - 1.0 / 3.0).abs() < 1e-15);
        let r: Rate = "2 * n^0.5 * log(n)^2".parse().unwrap();
        assert_eq!((r.coef, r.power, r.log_power), (2.0, 0.5, 2.0));
        let r: Rate = "ln(n)".parse().unwrap();
        assert_eq!(r.log_power, 1.0);
        assert_eq!("3".parse::<Rate>().unwrap(), Rate::constant(3.0));
        assert!("m^2".parse::<Rate>().is_err());
        assert!("".parse::<Rate>().is_err());
        assert!("n^x".parse::<Rate>().is_err());
    }

    #[test]
    fn rate_display_round_trips() {
        for text in ["n^(1/3)", "2*n^0.5*log(n)^2", "ln(n)", "3", "n", "0.5*n^-1"] {
            let r: Rate = text.parse().unwrap();
            assert_eq!(r.to_string().parse::<Rate>().unwrap(), r, "{text} -> {r}");
        }
        assert_eq!("1*n^0.25".parse::<Rate>().unwrap().to_string(), "n^0.25");
        assert_eq!("2*ln(n)".parse::<Rate>().unwrap().to_string(), "2*ln(n)");
    }

    #[test]
    fn series_summable_for_slow_rates() {
        let s = kterm_series(&Rate::power(1.0 / 3.0), &Rate::power(0.25), 1.0, 0.5, 200).unwrap();
        assert!(s.summable, "{s:?}");
        assert!(s.tail_upper_bound.is_finite());
    }

    #[test]
    fn series_not_summable_for_fast_rates() {
        let s = kterm_series(&Rate::power(2.0), &Rate::constant(2.0), 1.0, 0.5, 200).unwrap();
        assert!(!s.summable);
        assert!(s.tail_start.is_none());
    }

    #[test]
    fn consistency_examples() {
        let r = consistency_condition(|n| n.powf(1.0 / 3.0), |n| n.ln(), 100_000_000).unwrap();
        assert_eq!(r.verdict, Verdict::PlausiblyVanishing);

        let r = consistency_condition(|n| n, |_| 1.0, 1_000_000).unwrap();
        assert!(r.ratios.iter().all(|(_, v)| *v == 0.0));
        assert_eq!(r.verdict, Verdict::PlausiblyVanishing);

        let r = consistency_condition(|n| n * n, |_| 2.0, 1_000_000).unwrap();
        assert_eq!(r.verdict, Verdict::NotVanishing);
        assert!(r.ratios.last().unwrap().1 > r.ratios[0].1);

        assert!(consistency_condition(|n| n, |_| 2.0, 5).is_err());
        assert!(consistency_condition(|_| -1.0, |_| 2.0, 100).is_err());
    }

    #[test]
    fn consistency_grid_is_log_spaced() {
        let r = consistency_condition(|n| n, |_| 2.0, 1000).unwrap();
        let ns: Vec<u64> = r.ratios.iter().map(|(n, _)| *n).collect();
        assert_eq!(ns.first(), Some(&10));
        assert_eq!(ns.last(), Some(&1000));
        assert_eq!(ns.len(), 21);
    }
}
