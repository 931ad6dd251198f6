//! JSON instance configuration and a family-erased instance handle.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{AffineInstance, BorelInstance, LampInstance, WreathInstance};
use crate::error::{Error, Result};
use crate::ring::{validate_config, ValidationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Borel,
    Affine,
    Lamplighter,
    Wreath,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Self::Borel => "borel",
            Self::Affine => "affine",
            Self::Lamplighter => "lamplighter",
            Self::Wreath => "wreath",
        }
    }
}

/// `{"family", "p", "m"|"n"|"d", "polys", "g", "localized", "ideal"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub family: Family,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// f_0 = x, f_1, … as ascending coefficient arrays.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polys: Option<Vec<Vec<i64>>>,
    /// Localizing polynomial for the wreath family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub localized: Option<bool>,
    /// Replacement for x − 1 in the Borel family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<Vec<i64>>,
}

impl InstanceConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    fn polys(&self) -> Vec<Vec<i64>> {
        self.polys.clone().unwrap_or_else(|| vec![vec![0, 1]])
    }

    fn require(&self, value: Option<usize>, key: &str) -> Result<usize> {
        value.ok_or_else(|| Error::Parse(format!("{} config needs \"{key}\"", self.family.name())))
    }

    /// Hypothesis report for the families built on A; `None` otherwise.
    pub fn validation(&self) -> Option<ValidationReport> {
        match self.family {
            Family::Borel | Family::Lamplighter => Some(validate_config(self.p, &self.polys())),
            _ => None,
        }
    }

    /// Whether the family-specific hypotheses hold.
    pub fn hypotheses_hold(&self) -> bool {
        match (self.family, self.validation()) {
            (Family::Lamplighter, Some(r)) => r.is_valid_for_lamplighter(),
            (_, Some(r)) => r.is_valid(),
            (_, None) => true,
        }
    }

    pub fn build(&self) -> Result<AnyInstance> {
        Ok(match self.family {
            Family::Borel => {
                let m = self.require(self.m, "m")?;
                AnyInstance::Borel(BorelInstance::with_ideal(
                    self.p,
                    m,
                    &self.polys(),
                    self.ideal.as_deref(),
                )?)
            }
            Family::Affine => AnyInstance::Affine(AffineInstance::new(self.p, self.require(self.n, "n")?)?),
            Family::Lamplighter => {
                let polys = self.polys();
                if let Some(n) = self.n {
                    if n != polys.len() {
                        return Err(Error::InvalidConfig(format!(
                            "\"n\" = {n} but {} polynomials were given",
                            polys.len()
                        )));
                    }
                }
                AnyInstance::Lamplighter(LampInstance::new(self.p, &polys)?)
            }
            Family::Wreath => {
                let d = self.require(self.d, "d")?;
                let localized = self.localized.unwrap_or(self.g.is_some());
                match (localized, &self.g) {
                    (true, Some(g)) => AnyInstance::Wreath(WreathInstance::localized(self.p, d, g)?),
                    (true, None) => return Err(Error::InvalidConfig("localized wreath config needs \"g\"".into())),
                    (false, _) => AnyInstance::Wreath(WreathInstance::base(self.p, d)?),
                }
            }
        })
    }
}

/// Any of the four families.
#[derive(Clone, Debug)]
pub enum AnyInstance {
    Borel(BorelInstance),
    Affine(AffineInstance),
    Lamplighter(LampInstance),
    Wreath(WreathInstance),
}

/// Runs `$body` with `$inst` bound to the concrete instance.
#[macro_export]
macro_rules! with_instance {
    ($any:expr, $inst:ident => $body:expr) => {
        match $any {
            $crate::instances::AnyInstance::Borel($inst) => $body,
            $crate::instances::AnyInstance::Affine($inst) => $body,
            $crate::instances::AnyInstance::Lamplighter($inst) => $body,
            $crate::instances::AnyInstance::Wreath($inst) => $body,
        }
    };
}

impl AnyInstance {
    pub fn family(&self) -> Family {
        match self {
            Self::Borel(_) => Family::Borel,
            Self::Affine(_) => Family::Affine,
            Self::Lamplighter(_) => Family::Lamplighter,
            Self::Wreath(_) => Family::Wreath,
        }
    }

    pub fn degree(&self) -> usize {
        use crate::engine::SelfSimilar;
        with_instance!(self, inst => inst.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_builds() {
        let c = InstanceConfig::from_json(r#"{"family":"lamplighter","p":2,"polys":[[0,1]]}"#).unwrap();
        assert_eq!(c.build().unwrap().degree(), 2);
        let c = InstanceConfig::from_json(r#"{"family":"borel","p":2,"m":3,"polys":[[0,1],[1,1,1]]}"#).unwrap();
        assert_eq!(c.build().unwrap().degree(), 16);
        let c = InstanceConfig::from_json(r#"{"family":"wreath","p":2,"d":2,"g":[1,1,1]}"#).unwrap();
        assert_eq!(c.build().unwrap().degree(), 8);
        let c = InstanceConfig::from_json(r#"{"family":"affine","p":2,"n":3}"#).unwrap();
        assert_eq!(c.build().unwrap().degree(), 2);
    }

    #[test]
    fn rejects_bad_hypotheses() {
        let c = InstanceConfig::from_json(r#"{"family":"lamplighter","p":2,"polys":[[0,1],[1,1]]}"#).unwrap();
        assert!(!c.hypotheses_hold());
        assert!(matches!(c.build(), Err(Error::InvalidConfig(_))));
        assert!(InstanceConfig::from_json(r#"{"family":"nope","p":2}"#).is_err());
    }
}
