//! Exhaustive VC-dimension search on small, explicitly tabulated model classes.
//!
//! A model is given by its values `g(x_j)` at a fixed list of probe points
//! `(x_j, y_j, t_j)`. The indicator attached to a model and a loss is
//! `1[t_j <= loss(g(x_j), y_j)]`, and a subset of probes is shattered when
//! every 0/1 pattern on it is produced by some model.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{loss, LossKind};

pub const MAX_MODELS: usize = 4096;
pub const MAX_PROBES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub y: f64,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawClass")]
pub struct FiniteModelClass {
    /// `models[k][j]` is the prediction of model `k` at probe `j`.
    models: Vec<Vec<f64>>,
    probes: Vec<Probe>,
}

#[derive(Deserialize)]
struct RawClass {
    models: Vec<Vec<f64>>,
    probes: Vec<Probe>,
}

impl TryFrom<RawClass> for FiniteModelClass {
    type Error = Error;

    fn try_from(raw: RawClass) -> Result<Self> {
        Self::new(raw.models, raw.probes)
    }
}

impl FiniteModelClass {
    pub fn new(models: Vec<Vec<f64>>, probes: Vec<Probe>) -> Result<Self> {
        if models.is_empty() || models.len() > MAX_MODELS {
            return Err(Error::GuardExceeded(format!(
                "model count must lie in 1..={MAX_MODELS}, got {}",
                models.len()
            )));
        }
        if probes.len() > MAX_PROBES {
            return Err(Error::GuardExceeded(format!(
                "at most {MAX_PROBES} probes are supported, got {}",
                probes.len()
            )));
        }
        if let Some(m) = models.iter().find(|m| m.len() != probes.len()) {
            return Err(Error::DimensionMismatch {
                expected: probes.len(),
                found: m.len(),
            });
        }
        let finite = models.iter().flatten().all(|v| v.is_finite())
            && probes.iter().all(|p| p.y.is_finite() && p.t.is_finite());
        if !finite {
            return Err(Error::GuardExceeded(
                "class contains non-finite values".into(),
            ));
        }
        Ok(Self { models, probes })
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn models(&self) -> &[Vec<f64>] {
        &self.models
    }

    pub fn probes(&self) -> &[Probe] {
        &self.probes
    }

    /// Same models, with every threshold `t_j` replaced by `|y_j| t_j`.
    ///
    /// A pattern realized under the percentage loss at the original probes is
    /// realized under the absolute loss at the rescaled ones.
    pub fn with_thresholds_scaled_by_abs_target(&self) -> Self {
        Self {
            models: self.models.clone(),
            probes: self
                .probes
                .iter()
                .map(|p| Probe {
                    y: p.y,
                    t: p.y.abs() * p.t,
                })
                .collect(),
        }
    }

    fn patterns(&self, kind: LossKind) -> Vec<u8> {
        self.models
            .iter()
            .map(|g| {
                g.iter()
                    .zip(&self.probes)
                    .enumerate()
                    .fold(0u8, |bits, (j, (&pred, probe))| {
                        if probe.t <= loss(kind, pred, probe.y) {
                            bits | (1 << j)
                        } else {
                            bits
                        }
                    })
            })
            .collect()
    }
}

/// Packs the bits of `pattern` selected by `mask` into the low bits.
fn extract_bits(pattern: u8, mask: u8) -> u8 {
    let mut out = 0u8;
    let mut k = 0;
    for j in 0..8 {
        if mask & (1 << j) != 0 {
            if pattern & (1 << j) != 0 {
                out |= 1 << k;
            }
            k += 1;
        }
    }
    out
}

fn shatters(patterns: &[u8], mask: u8) -> bool {
    let k = mask.count_ones();
    let needed = 1usize << k;
    let mut seen = [false; 256];
    let mut count = 0;
    for &p in patterns {
        let d = extract_bits(p, mask) as usize;
        if !seen[d] {
            seen[d] = true;
            count += 1;
            if count == needed {
                return true;
            }
        }
    }
    false
}

/// Size of the largest shattered subset of probes.
///
/// All subset sizes are searched; the percentage loss requires nonzero probe
/// targets.
pub fn shattering_vc(cls: &FiniteModelClass, kind: LossKind) -> Result<usize> {
    if kind == LossKind::Mape {
        let rows: Vec<usize> = cls
            .probes
            .iter()
            .enumerate()
            .filter(|(_, p)| p.y == 0.0)
            .map(|(j, _)| j + 1)
            .collect();
        if !rows.is_empty() {
            return Err(Error::ZeroTargets { rows });
        }
    }
    let patterns = cls.patterns(kind);
    let n_probes = cls.probes.len();
    let best = (0u16..(1u16 << n_probes))
        .map(|m| m as u8)
        .filter(|&mask| shatters(&patterns, mask))
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0);
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterComparison {
    pub mape: usize,
    pub mae_scaled: usize,
    /// `mape <= mae_scaled`.
    pub pass: bool,
}

/// VC dimension under the percentage loss versus the absolute loss on the
/// threshold-rescaled probes.
pub fn compare_mape_mae(cls: &FiniteModelClass) -> Result<ShatterComparison> {
    let mape = shattering_vc(cls, LossKind::Mape)?;
    let mae_scaled = shattering_vc(&cls.with_thresholds_scaled_by_abs_target(), LossKind::Mae)?;
    Ok(ShatterComparison {
        mape,
        mae_scaled,
        pass: mape <= mae_scaled,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class(models: Vec<Vec<f64>>, probes: &[(f64, f64)]) -> FiniteModelClass {
        FiniteModelClass::new(
            models,
            probes.iter().map(|&(y, t)| Probe { y, t }).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_probe_both_patterns() {
        // losses 0.1 and 0.9 against threshold 0.5
        let c = class(vec![vec![1.1], vec![1.9]], &[(1.0, 0.5)]);
        assert_eq!(shattering_vc(&c, LossKind::Mae).unwrap(), 1);
        assert_eq!(shattering_vc(&c, LossKind::Mape).unwrap(), 1);
    }

    #[test]
    fn threshold_below_every_loss() {
        let c = class(vec![vec![1.1], vec![1.9]], &[(1.0, 0.05)]);
        assert_eq!(shattering_vc(&c, LossKind::Mae).unwrap(), 0);
        let same = class(
            vec![vec![1.5, 2.0], vec![1.5, 2.0]],
            &[(1.0, 0.2), (1.0, 0.2)],
        );
        assert_eq!(shattering_vc(&same, LossKind::Mae).unwrap(), 0);
    }

    #[test]
    fn two_probes_fully_shattered() {
        // losses at (y=1, t=0.5): near -> 0, far -> 1
        let near = 1.0;
        let far = 3.0;
        let c = class(
            vec![
                vec![near, near],
                vec![near, far],
                vec![far, near],
                vec![far, far],
            ],
            &[(1.0, 0.5), (1.0, 0.5)],
        );
        assert_eq!(shattering_vc(&c, LossKind::Mae).unwrap(), 2);
    }

    #[test]
    fn zero_target_rejected_under_mape() {
        let c = class(vec![vec![1.0, 2.0]], &[(1.0, 0.5), (0.0, 0.5)]);
        assert!(matches!(
            shattering_vc(&c, LossKind::Mape),
            Err(Error::ZeroTargets { rows }) if rows == vec![2]
        ));
        assert!(shattering_vc(&c, LossKind::Mae).is_ok());
    }

    #[test]
    fn guards() {
        let probes = vec![Probe { y: 1.0, t: 0.1 }; 9];
        assert!(matches!(
            FiniteModelClass::new(vec![vec![0.0; 9]], probes),
            Err(Error::GuardExceeded(_))
        ));
        assert!(FiniteModelClass::new(vec![], vec![]).is_err());
        assert!(
            FiniteModelClass::new(vec![vec![0.0; 1]; 4097], vec![Probe { y: 1.0, t: 0.0 }])
                .is_err()
        );
        assert!(
            FiniteModelClass::new(vec![vec![0.0, 1.0]], vec![Probe { y: 1.0, t: 0.0 }]).is_err()
        );
    }

    #[test]
    fn json_format() {
        let c: FiniteModelClass =
            serde_json::from_str(r#"{"models": [[1.1], [1.9]], "probes": [{"y": 1.0, "t": 0.5}]}"#)
                .unwrap();
        assert_eq!(compare_mape_mae(&c).unwrap().mape, 1);
        let bad = serde_json::from_str::<FiniteModelClass>(
            r#"{"models": [[1.1, 2.0]], "probes": [{"y": 1.0, "t": 0.5}]}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn bit_extraction() {
        assert_eq!(extract_bits(0b1010_1010, 0b1111_0000), 0b1010);
        assert_eq!(extract_bits(0b0000_0101, 0b0000_0101), 0b11);
        assert_eq!(extract_bits(0xff, 0), 0);
    }

    fn arb_class() -> impl Strategy<Value = FiniteModelClass> {
        (1usize..=5).prop_flat_map(|p| {
            (
                prop::collection::vec(prop::collection::vec(-2.0f64..4.0, p), 1..=16),
                prop::collection::vec((0.5f64..2.0, 0.0f64..1.5), p),
            )
                .prop_map(|(models, probes)| {
                    let probes = probes.into_iter().map(|(y, t)| Probe { y, t }).collect();
                    FiniteModelClass::new(models, probes).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn mape_dimension_never_exceeds_scaled_mae(cls in arb_class()) {
            let cmp = compare_mape_mae(&cls).unwrap();
            prop_assert!(cmp.pass, "{:?}", cmp);
        }

        #[test]
        fn adding_models_never_lowers_dimension(cls in arb_class(), extra in prop::collection::vec(-2.0f64..4.0, 8)) {
            let before = shattering_vc(&cls, LossKind::Mae).unwrap();
            let mut models = cls.models().to_vec();
            models.push(extra[..cls.probes().len()].to_vec());
            let bigger = FiniteModelClass::new(models, cls.probes().to_vec()).unwrap();
            prop_assert!(shattering_vc(&bigger, LossKind::Mae).unwrap() >= before);
        }
    }
}
