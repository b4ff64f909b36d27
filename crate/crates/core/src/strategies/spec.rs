//! `StrategySpec` and its JSON form:
//! `{"family": "...", "params": {"name": number, ...}}` or
//! `{"family": "Explicit", "steps": [[distance, ray], ...], "params": {"lambda": .., "m": ..}}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Result, SearchError};
use crate::model::{CostModel, SearchProblem, Step, StepSequence};
use crate::scalar::{lit, to_f64, Scalar};

use super::families;
use super::StrategyHandle;

/// Catalog entry naming a strategy family and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
#[serde(bound = "T: Scalar")]
pub enum StrategySpec<T> {
    Doubling { lambda: T },
    DemaineTurnCost { t: T },
    Theorem2 { gamma: T, t: T },
    MinTotalCost { distance: T, t: T },
    Lemma1 { lambda: T, t: T },
    Theorem4 { lambda: T, t: T },
    Theorem5 { lambda: T, cost: CostModel<T> },
    Theorem6 { m: usize, lambda: T, t: T },
    Explicit(StepSequence<T>),
}

impl<T: Scalar> StrategySpec<T> {
    pub fn family(&self) -> &'static str {
        match self {
            StrategySpec::Doubling { .. } => "Doubling",
            StrategySpec::DemaineTurnCost { .. } => "DemaineTurnCost",
            StrategySpec::Theorem2 { .. } => "Theorem2",
            StrategySpec::MinTotalCost { .. } => "MinTotalCost",
            StrategySpec::Lemma1 { .. } => "Lemma1",
            StrategySpec::Theorem4 { .. } => "Theorem4",
            StrategySpec::Theorem5 { .. } => "Theorem5",
            StrategySpec::Theorem6 { .. } => "Theorem6",
            StrategySpec::Explicit(_) => "Explicit",
        }
    }

    /// Constructs the strategy, validating family parameter domains.
    pub fn build(&self) -> Result<StrategyHandle<T>> {
        match self {
            StrategySpec::Doubling { lambda } => families::doubling(*lambda),
            StrategySpec::DemaineTurnCost { t } => families::demaine_turn_cost(*t),
            StrategySpec::Theorem2 { gamma, t } => families::theorem2(*gamma, *t),
            StrategySpec::MinTotalCost { distance, t } => families::min_total_cost(*distance, *t),
            StrategySpec::Lemma1 { lambda, t } => families::lemma1(*lambda, *t),
            StrategySpec::Theorem4 { lambda, t } => families::theorem4(*lambda, *t),
            StrategySpec::Theorem5 { lambda, cost } => {
                families::theorem5(&SearchProblem::new(2, *lambda, *cost)?)
            }
            StrategySpec::Theorem6 { m, lambda, t } => families::theorem6(*m, *lambda, *t),
            StrategySpec::Explicit(seq) => Ok(families::explicit(seq.clone())),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| SearchError::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serializes")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    family: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    steps: Option<Vec<(f64, usize)>>,
}

struct Params {
    family: String,
    values: BTreeMap<String, f64>,
}

impl Params {
    fn take(&mut self, name: &str) -> Result<f64> {
        self.values.remove(name).ok_or_else(|| {
            SearchError::InvalidSpec(format!("{} needs parameter `{name}`", self.family))
        })
    }

    fn take_or(&mut self, name: &str, default: f64) -> f64 {
        self.values.remove(name).unwrap_or(default)
    }

    fn scalar<T: Scalar>(&mut self, name: &str) -> Result<T> {
        Ok(lit(self.take(name)?))
    }

    fn finish(self) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(extra) => Err(SearchError::InvalidSpec(format!(
                "unknown parameter `{extra}` for {}",
                self.family
            ))),
        }
    }
}

fn count(value: f64, name: &str) -> Result<usize> {
    if value.fract() == 0.0 && value >= 0.0 && value <= u32::MAX as f64 {
        Ok(value as usize)
    } else {
        Err(SearchError::InvalidSpec(format!(
            "`{name}` must be a non-negative integer, got {value}"
        )))
    }
}

impl<T: Scalar> TryFrom<RawSpec> for StrategySpec<T> {
    type Error = SearchError;

    fn try_from(raw: RawSpec) -> Result<Self> {
        let mut p = Params {
            family: raw.family.clone(),
            values: raw.params,
        };
        if raw.steps.is_some() && raw.family != "Explicit" {
            return Err(SearchError::InvalidSpec(format!(
                "`steps` is only allowed for Explicit, not {}",
                raw.family
            )));
        }
        let spec = match raw.family.as_str() {
            "Doubling" => StrategySpec::Doubling {
                lambda: p.scalar("lambda")?,
            },
            "DemaineTurnCost" => StrategySpec::DemaineTurnCost { t: p.scalar("t")? },
            "Theorem2" => StrategySpec::Theorem2 {
                gamma: p.scalar("gamma")?,
                t: p.scalar("t")?,
            },
            "MinTotalCost" => StrategySpec::MinTotalCost {
                distance: p.scalar("D")?,
                t: p.scalar("t")?,
            },
            "Lemma1" => StrategySpec::Lemma1 {
                lambda: p.scalar("lambda")?,
                t: p.scalar("t")?,
            },
            "Theorem4" => StrategySpec::Theorem4 {
                lambda: p.scalar("lambda")?,
                t: p.scalar("t")?,
            },
            "Theorem5" => {
                let lambda = p.scalar("lambda")?;
                let cost = CostModel::new(
                    p.scalar("alpha1")?,
                    p.scalar("beta1")?,
                    p.scalar("alpha2")?,
                    p.scalar("beta2")?,
                )
                .map_err(|e| SearchError::InvalidSpec(e.to_string()))?;
                StrategySpec::Theorem5 { lambda, cost }
            }
            "Theorem6" => StrategySpec::Theorem6 {
                m: count(p.take("m")?, "m")?,
                lambda: p.scalar("lambda")?,
                t: p.scalar("t")?,
            },
            "Explicit" => {
                let steps = raw.steps.ok_or_else(|| {
                    SearchError::InvalidSpec("Explicit needs `steps`".to_string())
                })?;
                let lambda = p.take_or("lambda", 1.0);
                let inferred = steps.iter().map(|s| s.1 + 1).max().unwrap_or(2).max(2);
                let m = match p.values.remove("m") {
                    Some(v) => count(v, "m")?,
                    None => inferred,
                };
                let steps = steps
                    .into_iter()
                    .map(|(d, r)| Step::new(lit(d), r))
                    .collect();
                let seq = StepSequence::new(steps, lit(lambda), m)
                    .map_err(|e| SearchError::InvalidSpec(e.to_string()))?;
                StrategySpec::Explicit(seq)
            }
            other => {
                return Err(SearchError::InvalidSpec(format!(
                    "unknown family `{other}`"
                )))
            }
        };
        p.finish()?;
        Ok(spec)
    }
}

impl<T: Scalar> From<StrategySpec<T>> for RawSpec {
    fn from(spec: StrategySpec<T>) -> Self {
        let family = spec.family().to_string();
        let mut params = BTreeMap::new();
        let mut put = |k: &str, v: T| {
            params.insert(k.to_string(), to_f64(v));
        };
        let mut steps = None;
        match spec {
            StrategySpec::Doubling { lambda } => put("lambda", lambda),
            StrategySpec::DemaineTurnCost { t } => put("t", t),
            StrategySpec::Theorem2 { gamma, t } => {
                put("gamma", gamma);
                put("t", t);
            }
            StrategySpec::MinTotalCost { distance, t } => {
                put("D", distance);
                put("t", t);
            }
            StrategySpec::Lemma1 { lambda, t } | StrategySpec::Theorem4 { lambda, t } => {
                put("lambda", lambda);
                put("t", t);
            }
            StrategySpec::Theorem5 { lambda, cost } => {
                put("lambda", lambda);
                put("alpha1", cost.alpha1());
                put("beta1", cost.beta1());
                put("alpha2", cost.alpha2());
                put("beta2", cost.beta2());
            }
            StrategySpec::Theorem6 { m, lambda, t } => {
                put("lambda", lambda);
                put("t", t);
                params.insert("m".to_string(), m as f64);
            }
            StrategySpec::Explicit(seq) => {
                put("lambda", seq.origin_distance());
                params.insert("m".to_string(), seq.rays() as f64);
                steps = Some(
                    seq.steps()
                        .iter()
                        .map(|s| (to_f64(s.distance), s.ray))
                        .collect(),
                );
            }
        }
        RawSpec {
            family,
            params,
            steps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::StepOracle;

    #[test]
    fn parses_families() {
        let s: StrategySpec<f64> =
            StrategySpec::from_json(r#"{"family":"Lemma1","params":{"lambda":1,"t":0}}"#).unwrap();
        assert_eq!(
            s,
            StrategySpec::Lemma1 {
                lambda: 1.0,
                t: 0.0
            }
        );
        let h = s.build().unwrap();
        assert_eq!(h.x(1), Some(4.0));

        let s: StrategySpec<f64> =
            StrategySpec::from_json(r#"{"family":"Theorem6","params":{"m":3,"lambda":1,"t":0}}"#)
                .unwrap();
        assert_eq!(s.build().unwrap().rays(), 3);
    }

    #[test]
    fn explicit_with_defaults() {
        let s: StrategySpec<f64> = StrategySpec::from_json(
            r#"{"family":"Explicit","steps":[[6,0],[3,1],[2,0],[4,1],[5,1],[3,0]]}"#,
        )
        .unwrap();
        let StrategySpec::Explicit(seq) = &s else {
            panic!("expected explicit")
        };
        assert_eq!(seq.len(), 6);
        assert_eq!(seq.origin_distance(), 1.0);
        assert_eq!(seq.rays(), 2);
    }

    #[test]
    fn rejects_unknown_fields_and_params() {
        let bad = [
            r#"{"family":"Doubling","params":{"lambda":1},"extra":1}"#,
            r#"{"family":"Doubling","params":{"lambda":1,"t":2}}"#,
            r#"{"family":"doubling","params":{"lambda":1}}"#,
            r#"{"family":"Doubling","params":{}}"#,
            r#"{"family":"Doubling","params":{"lambda":1},"steps":[[1,0]]}"#,
            r#"{"family":"Theorem6","params":{"m":2.5,"lambda":1,"t":0}}"#,
            r#"{"family":"Explicit","steps":[[0,0]]}"#,
            r#"{"family":"Explicit""#,
        ];
        for text in bad {
            assert!(
                StrategySpec::<f64>::from_json(text).is_err(),
                "accepted {text}"
            );
        }
    }

    #[test]
    fn json_round_trip() {
        let specs: Vec<StrategySpec<f64>> = vec![
            StrategySpec::Doubling { lambda: 1.0 },
            StrategySpec::MinTotalCost {
                distance: 1.0,
                t: 2.0,
            },
            StrategySpec::Theorem5 {
                lambda: 1.0,
                cost: CostModel::new(1.0, 0.5, 2.0, 0.0).unwrap(),
            },
            StrategySpec::Theorem6 {
                m: 4,
                lambda: 2.0,
                t: 1.0,
            },
            StrategySpec::Explicit(StepSequence::from_pairs(&[(2.0, 0), (3.0, 2)], 0.5).unwrap()),
        ];
        for spec in specs {
            let back = StrategySpec::<f64>::from_json(&spec.to_json()).unwrap();
            assert_eq!(back, spec);
        }
    }
}
