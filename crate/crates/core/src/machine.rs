//! Machine configurations, per-action time/energy cost tables and
//! reconfiguration constants.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::json;
use crate::num::Fixed;

/// Index into [`CostModel::configs`]; configurations are kept sorted by name,
/// so `ConfigId` order is lexicographic name order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConfigId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigCosts {
    pub name: String,
    pub tau: BTreeMap<String, Fixed>,
    pub gamma: BTreeMap<String, Fixed>,
}

impl ConfigCosts {
    pub fn new(name: impl Into<String>) -> Self {
        ConfigCosts { name: name.into(), tau: BTreeMap::new(), gamma: BTreeMap::new() }
    }

    /// Sets `τ(self, label)` and `γ(self, label)`.
    pub fn with(mut self, label: impl Into<String>, time: Fixed, energy: Fixed) -> Self {
        let label = label.into();
        self.tau.insert(label.clone(), time);
        self.gamma.insert(label, energy);
        self
    }
}

/// Construction is permissive; [`CostModel::validate`] reports invariant
/// violations as data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostModel {
    configs: Vec<ConfigCosts>,
    rmax: String,
    delta: Fixed,
    theta: Fixed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoConfigs,
    EmptyName,
    DuplicateConfig { config: String },
    UnknownRmax { rmax: String },
    NegativeDelta(Fixed),
    NegativeTheta(Fixed),
    NegativeTime { config: String, label: String, value: Fixed },
    NegativeEnergy { config: String, label: String, value: Fixed },
    MissingTime { config: String, label: String },
    MissingEnergy { config: String, label: String },
    /// `τ(rmax, a) > τ(config, a)`: `rmax` is not elementarily maximal.
    NotDominatedByRmax { config: String, label: String, rmax_time: Fixed, time: Fixed },
}

impl Violation {
    /// Everything except the elementary-maximality check breaks the model's
    /// basic contract.
    pub fn is_structural(&self) -> bool {
        !matches!(self, Violation::NotDominatedByRmax { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoConfigs => write!(f, "model has no configurations"),
            Violation::EmptyName => write!(f, "configuration with empty name"),
            Violation::DuplicateConfig { config } => write!(f, "duplicate configuration `{config}`"),
            Violation::UnknownRmax { rmax } => write!(f, "rmax `{rmax}` is not a configuration"),
            Violation::NegativeDelta(v) => write!(f, "delta {v} is negative"),
            Violation::NegativeTheta(v) => write!(f, "theta {v} is negative"),
            Violation::NegativeTime { config, label, value } => write!(f, "tau({config}, {label}) = {value} is negative"),
            Violation::NegativeEnergy { config, label, value } => {
                write!(f, "gamma({config}, {label}) = {value} is negative")
            }
            Violation::MissingTime { config, label } => write!(f, "tau({config}, {label}) is missing"),
            Violation::MissingEnergy { config, label } => write!(f, "gamma({config}, {label}) is missing"),
            Violation::NotDominatedByRmax { config, label, rmax_time, time } => write!(
                f,
                "rmax is slower than `{config}` on `{label}` ({rmax_time} > {time})"
            ),
        }
    }
}

impl CostModel {
    pub fn new(mut configs: Vec<ConfigCosts>, rmax: impl Into<String>, delta: Fixed, theta: Fixed) -> Self {
        configs.sort_by(|a, b| a.name.cmp(&b.name));
        CostModel { configs, rmax: rmax.into(), delta, theta }
    }

    pub fn configs(&self) -> &[ConfigCosts] {
        &self.configs
    }

    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = ConfigId> + '_ {
        (0..self.configs.len()).map(ConfigId)
    }

    pub fn name(&self, id: ConfigId) -> &str {
        &self.configs[id.0].name
    }

    pub fn config_id(&self, name: &str) -> Result<ConfigId> {
        self.configs
            .binary_search_by(|c| c.name.as_str().cmp(name))
            .map(ConfigId)
            .map_err(|_| Error::UnknownConfig(name.to_string()))
    }

    pub fn rmax_name(&self) -> &str {
        &self.rmax
    }

    pub fn rmax(&self) -> Result<ConfigId> {
        self.config_id(&self.rmax)
    }

    pub fn delta(&self) -> Fixed {
        self.delta
    }

    pub fn theta(&self) -> Fixed {
        self.theta
    }

    pub fn tau(&self, r: ConfigId, label: &str) -> Result<Fixed> {
        let c = &self.configs[r.0];
        c.tau.get(label).copied().ok_or_else(|| Error::MissingCost {
            config: c.name.clone(),
            label: label.to_string(),
            table: "tau",
        })
    }

    pub fn gamma(&self, r: ConfigId, label: &str) -> Result<Fixed> {
        let c = &self.configs[r.0];
        c.gamma.get(label).copied().ok_or_else(|| Error::MissingCost {
            config: c.name.clone(),
            label: label.to_string(),
            table: "gamma",
        })
    }

    /// `δ_{r,r′}`: zero for `r = r′`, else `δ`.
    pub fn reconfig_time_between(&self, r: ConfigId, r2: ConfigId) -> Fixed {
        if r == r2 {
            Fixed::ZERO
        } else {
            self.delta
        }
    }

    /// `θ_{r,r′}`: zero for `r = r′`, else `θ`.
    pub fn reconfig_energy_between(&self, r: ConfigId, r2: ConfigId) -> Fixed {
        if r == r2 {
            Fixed::ZERO
        } else {
            self.theta
        }
    }

    pub fn reconfig_time(&self, r: &str, r2: &str) -> Result<Fixed> {
        Ok(self.reconfig_time_between(self.config_id(r)?, self.config_id(r2)?))
    }

    pub fn reconfig_energy(&self, r: &str, r2: &str) -> Result<Fixed> {
        Ok(self.reconfig_energy_between(self.config_id(r)?, self.config_id(r2)?))
    }

    /// `r` is elementarily at least as capable as `r2`: `τ(r,a) ≤ τ(r2,a)` for
    /// every `a` in `alphabet`.
    pub fn elementary_leq(&self, r2: &str, r: &str, alphabet: &[String]) -> Result<bool> {
        let (r2, r) = (self.config_id(r2)?, self.config_id(r)?);
        for a in alphabet {
            if self.tau(r, a)? > self.tau(r2, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Empty iff the model is well formed over `alphabet` and `rmax` is
    /// elementarily at least as capable as every configuration.
    pub fn validate(&self, alphabet: &[String]) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.configs.is_empty() {
            out.push(Violation::NoConfigs);
        }
        for w in self.configs.windows(2) {
            if w[0].name == w[1].name {
                out.push(Violation::DuplicateConfig { config: w[0].name.clone() });
            }
        }
        if self.configs.iter().any(|c| c.name.is_empty()) {
            out.push(Violation::EmptyName);
        }
        if self.delta.is_negative() {
            out.push(Violation::NegativeDelta(self.delta));
        }
        if self.theta.is_negative() {
            out.push(Violation::NegativeTheta(self.theta));
        }
        for c in &self.configs {
            for (label, v) in &c.tau {
                if v.is_negative() {
                    out.push(Violation::NegativeTime { config: c.name.clone(), label: label.clone(), value: *v });
                }
            }
            for (label, v) in &c.gamma {
                if v.is_negative() {
                    out.push(Violation::NegativeEnergy { config: c.name.clone(), label: label.clone(), value: *v });
                }
            }
            for a in alphabet {
                if !c.tau.contains_key(a) {
                    out.push(Violation::MissingTime { config: c.name.clone(), label: a.clone() });
                }
                if !c.gamma.contains_key(a) {
                    out.push(Violation::MissingEnergy { config: c.name.clone(), label: a.clone() });
                }
            }
        }
        match self.configs.iter().find(|c| c.name == self.rmax) {
            None => out.push(Violation::UnknownRmax { rmax: self.rmax.clone() }),
            Some(top) => {
                for c in &self.configs {
                    for a in alphabet {
                        if let (Some(&rt), Some(&t)) = (top.tau.get(a), c.tau.get(a)) {
                            if rt > t {
                                out.push(Violation::NotDominatedByRmax {
                                    config: c.name.clone(),
                                    label: a.clone(),
                                    rmax_time: rt,
                                    time: t,
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let table = |m: &BTreeMap<String, Fixed>| {
            Value::Object(m.iter().map(|(k, v)| (k.clone(), json::number(*v))).collect::<Map<_, _>>())
        };
        let configs = self
            .configs
            .iter()
            .map(|c| {
                json::object([
                    ("name", Value::String(c.name.clone())),
                    ("tau", table(&c.tau)),
                    ("gamma", table(&c.gamma)),
                ])
            })
            .collect();
        json::object([
            ("configs", Value::Array(configs)),
            ("rmax", Value::String(self.rmax.clone())),
            ("delta", json::number(self.delta)),
            ("theta", json::number(self.theta)),
        ])
    }
}

/// `validate_model(m, alphabet)`.
pub fn validate_model(m: &CostModel, alphabet: &[String]) -> Vec<Violation> {
    m.validate(alphabet)
}

/// `{"configs":[{"name", "tau":{label: n}, "gamma":{label: n}}, …], "rmax", "delta", "theta"}`
pub fn parse_model(text: &str) -> Result<CostModel> {
    let root = json::parse_document(text)?;
    let obj = json::as_object(&root, "model")?;
    let configs = json::field(obj, "configs", "model")?
        .as_array()
        .ok_or_else(|| Error::parse("model.configs", "expected an array"))?;
    let mut out = Vec::with_capacity(configs.len());
    for (i, c) in configs.iter().enumerate() {
        let ctx = format!("configs[{i}]");
        let co = json::as_object(c, &ctx)?;
        let name = json::field(co, "name", &ctx)?
            .as_str()
            .ok_or_else(|| Error::parse(format!("{ctx}.name"), "expected a string"))?;
        if name.is_empty() {
            return Err(Error::parse(format!("{ctx}.name"), "name must be non-empty"));
        }
        let mut costs = ConfigCosts::new(name);
        costs.tau = parse_table(json::field(co, "tau", &ctx)?, &format!("{ctx}.tau"))?;
        costs.gamma = parse_table(json::field(co, "gamma", &ctx)?, &format!("{ctx}.gamma"))?;
        out.push(costs);
    }
    let rmax = json::field(obj, "rmax", "model")?
        .as_str()
        .ok_or_else(|| Error::parse("model.rmax", "expected a string"))?;
    let delta = json::fixed(json::field(obj, "delta", "model")?, "model.delta")?;
    let theta = json::fixed(json::field(obj, "theta", "model")?, "model.theta")?;
    Ok(CostModel::new(out, rmax, delta, theta))
}

fn parse_table(v: &Value, ctx: &str) -> Result<BTreeMap<String, Fixed>> {
    let obj = json::as_object(v, ctx)?;
    obj.iter()
        .map(|(k, v)| Ok((k.clone(), json::fixed(v, &format!("{ctx}.{k}"))?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::desk;
    use proptest::prelude::*;

    fn fx(v: i64) -> Fixed {
        Fixed::from_int(v)
    }

    fn f() -> Vec<String> {
        vec!["f".to_string()]
    }

    #[test]
    fn reconfig_time_examples() {
        let m = desk::m1();
        assert_eq!(m.reconfig_time("big", "big").unwrap(), fx(0));
        assert_eq!(m.reconfig_time("big", "little").unwrap(), fx(1));
        assert_eq!(m.reconfig_time("little", "big").unwrap(), fx(1));
        assert_eq!(m.reconfig_energy("little", "big").unwrap(), fx(2));
        assert!(matches!(m.reconfig_time("big", "medium"), Err(Error::UnknownConfig(_))));
    }

    #[test]
    fn elementary_examples() {
        let m = desk::m1();
        assert!(m.elementary_leq("little", "big", &f()).unwrap());
        assert!(!m.elementary_leq("big", "little", &f()).unwrap());
        assert!(m.elementary_leq("little", "little", &f()).unwrap());
        assert!(matches!(m.elementary_leq("big", "little", &["g".to_string()]), Err(Error::MissingCost { .. })));
    }

    #[test]
    fn validate_examples() {
        assert!(validate_model(&desk::m1(), &f()).is_empty());

        let m = desk::m1();
        let flipped = CostModel::new(m.configs().to_vec(), "little", m.delta(), m.theta());
        let v = validate_model(&flipped, &f());
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::NotDominatedByRmax { config, label, .. } if config == "big" && label == "f"));
        assert!(!v[0].is_structural());

        let neg = CostModel::new(
            vec![ConfigCosts::new("a").with("f", fx(-1), fx(1))],
            "a",
            fx(0),
            fx(0),
        );
        let v = validate_model(&neg, &f());
        assert!(v.iter().any(|x| matches!(x, Violation::NegativeTime { config, label, .. } if config == "a" && label == "f")));
        assert!(v[0].is_structural());

        let missing = validate_model(&desk::m1(), &["g".to_string()]);
        assert!(missing.iter().any(|x| matches!(x, Violation::MissingTime { .. })));
        let empty = CostModel::new(vec![], "x", fx(0), fx(0));
        let v = validate_model(&empty, &[]);
        assert!(v.contains(&Violation::NoConfigs));
        assert!(v.contains(&Violation::UnknownRmax { rmax: "x".into() }));
    }

    #[test]
    fn model_json_roundtrip() {
        let m = desk::m1();
        let text = m.to_json().to_string();
        assert_eq!(parse_model(&text).unwrap(), m);
    }

    #[test]
    fn model_parse_errors() {
        assert!(parse_model("{}").is_err());
        assert!(parse_model(r#"{"configs":[{"name":"a","tau":{"f":1}}],"rmax":"a","delta":0,"theta":0}"#).is_err());
        let err = parse_model(r#"{"configs":[{"name":"a","tau":{"f":"x"},"gamma":{}}],"rmax":"a","delta":0,"theta":0}"#)
            .unwrap_err();
        assert!(err.to_string().contains("configs[0].tau.f"), "{err}");
    }

    fn model_strategy() -> impl Strategy<Value = CostModel> {
        (1usize..5, prop::collection::vec(0i64..6, 12)).prop_map(|(n, ts)| {
            let configs = (0..n)
                .map(|i| {
                    ConfigCosts::new(format!("c{i}"))
                        .with("f", fx(ts[i * 3]), fx(1))
                        .with("g", fx(ts[i * 3 + 1]), fx(1))
                        .with("h", fx(ts[i * 3 + 2]), fx(1))
                })
                .collect();
            CostModel::new(configs, "c0", fx(1), fx(1))
        })
    }

    proptest! {
        #[test]
        fn elementary_leq_is_preorder(m in model_strategy()) {
            let alphabet: Vec<String> = ["f", "g", "h"].iter().map(|s| s.to_string()).collect();
            let names: Vec<String> = m.configs().iter().map(|c| c.name.clone()).collect();
            for a in &names {
                prop_assert!(m.elementary_leq(a, a, &alphabet).unwrap());
                for b in &names {
                    for c in &names {
                        if m.elementary_leq(a, b, &alphabet).unwrap() && m.elementary_leq(b, c, &alphabet).unwrap() {
                            prop_assert!(m.elementary_leq(a, c, &alphabet).unwrap());
                        }
                    }
                }
            }
        }
    }
}
