//! Pointwise losses, empirical risks and normalized risk reports.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::DatasetSummary;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LossKind {
    Mse,
    Mae,
    Mape,
}

impl LossKind {
    pub const ALL: [LossKind; 3] = [LossKind::Mse, LossKind::Mae, LossKind::Mape];

    pub fn name(self) -> &'static str {
        match self {
            LossKind::Mse => "mse",
            LossKind::Mae => "mae",
            LossKind::Mape => "mape",
        }
    }
}

impl fmt::Display for LossKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_uppercase())
    }
}

impl FromStr for LossKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mse" => Ok(LossKind::Mse),
            "mae" => Ok(LossKind::Mae),
            "mape" => Ok(LossKind::Mape),
            other => Err(format!(
                "unknown loss {other:?} (expected mse, mae or mape)"
            )),
        }
    }
}

/// Pointwise loss of prediction `p` against target `y`.
///
/// The percentage error follows `a / 0 = +inf` for `a != 0` and `0 / 0 = 1`,
/// which makes it total on finite inputs.
pub fn loss(kind: LossKind, p: f64, y: f64) -> f64 {
    let diff = p - y;
    match kind {
        LossKind::Mse => diff * diff,
        LossKind::Mae => diff.abs(),
        LossKind::Mape => {
            if y == 0.0 {
                if p == 0.0 {
                    1.0
                } else {
                    f64::INFINITY
                }
            } else {
                diff.abs() / y.abs()
            }
        }
    }
}

fn check_lengths(predictions: &[f64], targets: &[f64]) -> Result<()> {
    if predictions.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            found: predictions.len(),
        });
    }
    if targets.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(())
}

/// Mean pointwise loss; an infinite term makes the mean infinite.
pub fn empirical_risk(kind: LossKind, predictions: &[f64], targets: &[f64]) -> Result<f64> {
    check_lengths(predictions, targets)?;
    let total: f64 = predictions
        .iter()
        .zip(targets)
        .map(|(&p, &y)| loss(kind, p, y))
        .sum();
    Ok(total / targets.len() as f64)
}

/// `(1/N) * sum_i w_i |p_i - y_i|`.
pub fn weighted_mae(predictions: &[f64], targets: &[f64], weights: &[f64]) -> Result<f64> {
    check_lengths(predictions, targets)?;
    if weights.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: targets.len(),
            found: weights.len(),
        });
    }
    let total: f64 = predictions
        .iter()
        .zip(targets)
        .zip(weights)
        .map(|((&p, &y), &w)| w * (p - y).abs())
        .sum();
    Ok(total / targets.len() as f64)
}

/// Normalized risks of one model: root MSE over the target standard
/// deviation, MAE over the target median, and the plain MAPE.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskReport {
    #[serde(with = "extended_real")]
    pub nrmse: f64,
    #[serde(with = "extended_real")]
    pub nmae: f64,
    #[serde(with = "extended_real")]
    pub mape: f64,
}

impl RiskReport {
    pub fn get(&self, kind: LossKind) -> f64 {
        match kind {
            LossKind::Mse => self.nrmse,
            LossKind::Mae => self.nmae,
            LossKind::Mape => self.mape,
        }
    }
}

pub fn risk_report(
    predictions: &[f64],
    summary: &DatasetSummary,
    targets: &[f64],
) -> Result<RiskReport> {
    if summary.target_std == 0.0 {
        return Err(Error::NormalizationUndefined("standard deviation"));
    }
    if summary.target_median == 0.0 {
        return Err(Error::NormalizationUndefined("median"));
    }
    Ok(RiskReport {
        nrmse: empirical_risk(LossKind::Mse, predictions, targets)?.sqrt() / summary.target_std,
        nmae: empirical_risk(LossKind::Mae, predictions, targets)? / summary.target_median,
        mape: empirical_risk(LossKind::Mape, predictions, targets)?,
    })
}

/// Rounds to `decimals` places, resolving exact ties to the even neighbour.
pub fn round_half_even(x: f64, decimals: i32) -> f64 {
    if !x.is_finite() {
        return x;
    }
    let scale = 10f64.powi(decimals);
    (x * scale).round_ties_even() / scale
}

/// Serializes `f64` as a JSON number, or as the strings `"inf"` / `"-inf"`
/// when infinite.
pub mod extended_real {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(value: &f64, serializer: S) -> Result<S::Ok, S::Error> {
        if value.is_infinite() {
            serializer.serialize_str(if *value > 0.0 { "inf" } else { "-inf" })
        } else {
            serializer.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<f64, D::Error> {
        struct ExtendedReal;

        impl Visitor<'_> for ExtendedReal {
            type Value = f64;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }

        deserializer.deserialize_any(ExtendedReal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::summarize_target;
    use proptest::prelude::*;

    #[test]
    fn zero_target_conventions() {
        assert_eq!(loss(LossKind::Mape, 3.0, 0.0), f64::INFINITY);
        assert_eq!(loss(LossKind::Mape, -3.0, 0.0), f64::INFINITY);
        assert_eq!(loss(LossKind::Mape, 0.0, 0.0), 1.0);
    }

    #[test]
    fn unit_deviation() {
        for kind in LossKind::ALL {
            assert_eq!(loss(kind, 2.0, 1.0), 1.0);
        }
    }

    #[test]
    fn empirical_risk_examples() {
        let y = [1.0, 2.0, 10.0];
        assert_eq!(empirical_risk(LossKind::Mae, &y, &y).unwrap(), 0.0);
        let r = empirical_risk(LossKind::Mape, &[1.0, 1.0, 1.0], &y).unwrap();
        assert!((r - 1.4 / 3.0).abs() < 1e-15);
        assert_eq!(
            empirical_risk(LossKind::Mse, &[0.0, 0.0], &[1.0, -1.0]).unwrap(),
            1.0
        );
        assert_eq!(
            empirical_risk(LossKind::Mape, &[1.0, 1.0], &[0.0, 1.0]).unwrap(),
            f64::INFINITY
        );
    }

    #[test]
    fn empirical_risk_errors() {
        assert!(matches!(
            empirical_risk(LossKind::Mse, &[1.0], &[1.0, 2.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            empirical_risk(LossKind::Mse, &[], &[]),
            Err(Error::EmptyDataset)
        ));
    }

    #[test]
    fn report_examples() {
        let y = [1.0, 2.0, 3.0];
        let s = summarize_target(&y).unwrap();
        let r = risk_report(&y, &s, &y).unwrap();
        assert_eq!((r.nrmse, r.nmae, r.mape), (0.0, 0.0, 0.0));

        let r = risk_report(&[2.0; 3], &s, &y).unwrap();
        assert!((r.nrmse - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((r.nrmse - 0.816).abs() < 5e-4);

        let flat = summarize_target(&[5.0, 5.0]).unwrap();
        assert!(matches!(
            risk_report(&[5.0, 5.0], &flat, &[5.0, 5.0]),
            Err(Error::NormalizationUndefined(_))
        ));
        let zero_median = summarize_target(&[-1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            risk_report(&[0.0; 3], &zero_median, &[-1.0, 0.0, 1.0]),
            Err(Error::NormalizationUndefined("median"))
        ));
    }

    #[test]
    fn report_json() {
        let r = RiskReport {
            nrmse: 0.5,
            nmae: 1.0,
            mape: f64::INFINITY,
        };
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"nrmse":0.5,"nmae":1.0,"mape":"inf"}"#);
        let back: RiskReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rounding_ties_to_even() {
        assert_eq!(round_half_even(0.5848, 3), 0.585);
        assert_eq!(round_half_even(2.5, 0), 2.0);
        assert_eq!(round_half_even(3.5, 0), 4.0);
        assert_eq!(round_half_even(f64::INFINITY, 3), f64::INFINITY);
    }

    #[test]
    fn parse_loss_names() {
        assert_eq!("MAPE".parse::<LossKind>().unwrap(), LossKind::Mape);
        assert_eq!("mse".parse::<LossKind>().unwrap(), LossKind::Mse);
        assert!("rmse".parse::<LossKind>().is_err());
    }

    proptest! {
        #[test]
        fn mape_is_mae_over_abs_target(p in -1e6f64..1e6, y in -1e6f64..1e6) {
            prop_assume!(y != 0.0);
            prop_assert_eq!(loss(LossKind::Mape, p, y), loss(LossKind::Mae, p, y) / y.abs());
        }

        #[test]
        fn mape_scale_invariant(p in -1e3f64..1e3, y in 0.01f64..1e3, c in 0.01f64..1e3, neg in any::<bool>()) {
            let c = if neg { -c } else { c };
            let a = loss(LossKind::Mape, c * p, c * y);
            let b = loss(LossKind::Mape, p, y);
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + b));
        }

        #[test]
        fn losses_nonnegative_and_zero_iff_equal(p in -1e3f64..1e3, y in -1e3f64..1e3) {
            for kind in LossKind::ALL {
                let l = loss(kind, p, y);
                prop_assert!(l >= 0.0);
                if y != 0.0 || kind != LossKind::Mape {
                    prop_assert_eq!(l == 0.0, p == y);
                }
            }
        }

        #[test]
        fn risk_permutation_invariant(pairs in prop::collection::vec((-100f64..100.0, 0.5f64..100.0), 1..20), seed in any::<u64>()) {
            let (p, y): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
            let mut idx: Vec<usize> = (0..p.len()).collect();
            // cheap deterministic shuffle
            idx.sort_by_key(|&i| (i as u64).wrapping_mul(seed | 1).rotate_left(17));
            let pp: Vec<f64> = idx.iter().map(|&i| p[i]).collect();
            let yy: Vec<f64> = idx.iter().map(|&i| y[i]).collect();
            for kind in LossKind::ALL {
                let a = empirical_risk(kind, &p, &y).unwrap();
                let b = empirical_risk(kind, &pp, &yy).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
            }
        }
    }
}
