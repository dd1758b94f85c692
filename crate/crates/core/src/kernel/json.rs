use serde::{Deserialize, Serialize};

use super::config::{kc_validate, DefaultValue, ExtNat, KernelConfig};
use crate::error::{Error, Result};
use crate::poly::{FieldSpec, Poly};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ExtJson {
    Num(u32),
    Text(String),
}

impl ExtJson {
    fn to_ext(&self) -> Result<ExtNat> {
        match self {
            ExtJson::Num(n) => Ok(ExtNat::Fin(*n)),
            ExtJson::Text(s) if s == "inf" || s == "infinity" => Ok(ExtNat::Inf),
            ExtJson::Text(s) => Err(Error::Config(format!("expected a number or \"inf\", got {s:?}"))),
        }
    }

    fn from_ext(v: ExtNat) -> Self {
        match v {
            ExtNat::Fin(n) => ExtJson::Num(n),
            ExtNat::Inf => ExtJson::Text("inf".into()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    f: String,
    c: ExtJson,
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    field: FieldSpec,
    default: String,
    entries: Vec<EntryJson>,
    degree: ExtJson,
}

impl KernelConfig {
    /// Reads the JSON configuration format and validates it.
    pub fn from_json(src: &str) -> Result<Self> {
        let raw: ConfigJson = serde_json::from_str(src)?;
        if let FieldSpec::Prime { p } = raw.field {
            FieldSpec::prime(p)?;
        }
        let default = match raw.default.as_str() {
            "zero" => DefaultValue::Zero,
            "infinity" => DefaultValue::Infinity,
            other => return Err(Error::Config(format!("unknown default {other:?}"))),
        };
        let mut entries = std::collections::BTreeMap::new();
        for e in &raw.entries {
            let f = Poly::parse(raw.field, &e.f)?;
            if entries.insert(f, e.c.to_ext()?).is_some() {
                return Err(Error::Config(format!("duplicate entry {}", e.f)));
            }
        }
        let cfg = KernelConfig::from_parts(raw.field, entries, default, raw.degree.to_ext()?);
        let v = kc_validate(&cfg);
        if !v.ok {
            return Err(Error::Config(v.diagnostics.join("; ")));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let raw = ConfigJson {
            field: self.field(),
            default: match self.default_value() {
                DefaultValue::Zero => "zero".into(),
                DefaultValue::Infinity => "infinity".into(),
            },
            entries: self
                .entries()
                .iter()
                .map(|(f, c)| EntryJson { f: f.to_string(), c: ExtJson::from_ext(*c) })
                .collect(),
            degree: ExtJson::from_ext(self.degree()),
        };
        serde_json::to_string(&raw).expect("config json")
    }
}
