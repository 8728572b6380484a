//! JSON configuration files.
//!
//! ```json
//! {
//!   "points": {"p": [1, "1/2", 1]},
//!   "lines": {"l": [0, 2, -1]},
//!   "incidences": [["p", "l"]],
//!   "groups": {"mirror": [{"matrix": [[-1,0,0],[0,1,0],[0,0,1]], "polarity": false}]},
//!   "pins": [],
//!   "mode": "exact"
//! }
//! ```
//!
//! Scalars are JSON integers, `"num/den"` strings, or JSON floats. Floats
//! are refused in exact mode.

use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::catalog::{CatalogEntry, Entry, EntryData, NamedGroup};
use crate::error::{Error, Result};
use crate::geometry::IncidenceGeometry;
use crate::matrix::Matrix;
use crate::realization::{Realization, Vec3};
use crate::scalar::{parse_rational, Rational, Scalar};
use crate::symmetry::Correlation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            _ => Err(Error::Invalid(format!("unknown mode `{s}`"))),
        }
    }
}

/// A scalar as written in a file.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(Rational),
    Float(f64),
}

impl Num {
    pub fn from_value(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Num::Exact(Rational::from_i64(i)))
                } else if let Some(u) = n.as_u64() {
                    Ok(Num::Exact(Rational::from_integer(u.into())))
                } else {
                    Ok(Num::Float(n.as_f64().unwrap_or(f64::NAN)))
                }
            }
            Value::String(s) => parse_rational(s)
                .map(Num::Exact)
                .ok_or_else(|| Error::Invalid(format!("bad rational `{s}`"))),
            other => Err(Error::Invalid(format!("expected a number, found {other}"))),
        }
    }

    pub fn from_scalar<S: Scalar>(x: &S) -> Self {
        Num::from_value(&x.to_json()).unwrap_or(Num::Float(x.to_f64()))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    pub fn to_scalar<S: Scalar>(&self) -> Result<S> {
        match self {
            Num::Exact(q) => Ok(S::from_rational(q)),
            Num::Float(x) => S::from_f64(*x).ok_or(Error::InexactInput(*x)),
        }
    }
}

impl Serialize for Num {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            Num::Exact(q) if q.is_integer() => match i64::try_from(q.numer()) {
                Ok(i) => s.serialize_i64(i),
                Err(_) => s.serialize_str(&q.numer().to_string()),
            },
            Num::Exact(q) => s.serialize_str(&format!("{}/{}", q.numer(), q.denom())),
            Num::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Num::from_value(&v).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupElement {
    pub matrix: [[Num; 3]; 3],
    #[serde(default)]
    pub polarity: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub points: IndexMap<String, [Num; 3]>,
    pub lines: IndexMap<String, [Num; 3]>,
    pub incidences: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "IndexMap::is_empty")]
    pub groups: IndexMap<String, Vec<GroupElement>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pins: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

/// A parsed file in one arithmetic.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<S> {
    pub realization: Realization<S>,
    pub groups: Vec<NamedGroup<S>>,
    pub pins: Vec<String>,
}

impl<S: Scalar> Configuration<S> {
    pub fn group(&self, name: &str) -> Result<crate::symmetry::CorrelationGroup<S>> {
        self.groups
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::Invalid(format!("no group `{name}`")))?
            .group()
    }

    pub fn pin_indices(&self, pins: &[String]) -> Result<Vec<usize>> {
        pins.iter().map(|p| self.realization.geometry().point_index(p)).collect()
    }
}

fn vec3<S: Scalar>(v: &[Num; 3]) -> Result<Vec3<S>> {
    Ok([v[0].to_scalar()?, v[1].to_scalar()?, v[2].to_scalar()?])
}

fn nums<S: Scalar>(v: &Vec3<S>) -> [Num; 3] {
    [Num::from_scalar(&v[0]), Num::from_scalar(&v[1]), Num::from_scalar(&v[2])]
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("configuration: {e}")))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }

    fn all_nums(&self) -> impl Iterator<Item = &Num> {
        self.points
            .values()
            .chain(self.lines.values())
            .flatten()
            .chain(self.groups.values().flatten().flat_map(|g| g.matrix.iter().flatten()))
    }

    /// The file's mode, or exact when every scalar is rational.
    pub fn default_mode(&self) -> Mode {
        self.mode.unwrap_or(if self.all_nums().all(Num::is_exact) {
            Mode::Exact
        } else {
            Mode::Float
        })
    }

    pub fn configuration<S: Scalar>(&self) -> Result<Configuration<S>> {
        let incidences: Vec<(String, String)> = self
            .incidences
            .iter()
            .map(|[p, l]| (p.clone(), l.clone()))
            .collect();
        let g = IncidenceGeometry::new(self.points.keys().cloned(), self.lines.keys().cloned(), &incidences)?;
        let points = self.points.values().map(vec3).collect::<Result<Vec<_>>>()?;
        let lines = self.lines.values().map(vec3).collect::<Result<Vec<_>>>()?;
        let realization = Realization::new(g, points, lines)?;
        let mut groups = Vec::new();
        for (name, elems) in &self.groups {
            let generators = elems
                .iter()
                .map(|e| {
                    let rows = e
                        .matrix
                        .iter()
                        .map(|r| r.iter().map(Num::to_scalar).collect::<Result<Vec<S>>>())
                        .collect::<Result<Vec<_>>>()?;
                    let m = Matrix::from_rows(3, &rows);
                    if e.polarity {
                        Correlation::polarity(m)
                    } else {
                        Correlation::collineation(m)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            groups.push(NamedGroup {
                name: name.clone(),
                generators,
            });
        }
        for p in &self.pins {
            realization.geometry().point_index(p)?;
        }
        Ok(Configuration {
            realization,
            groups,
            pins: self.pins.clone(),
        })
    }

    pub fn from_parts<S: Scalar>(
        realization: &Realization<S>,
        groups: &[NamedGroup<S>],
        pins: &[String],
        mode: Mode,
    ) -> Self {
        let g = realization.geometry();
        let points = g
            .points()
            .iter()
            .zip(realization.points())
            .map(|(n, v)| (n.clone(), nums(v)))
            .collect();
        let lines = g
            .lines()
            .iter()
            .zip(realization.lines())
            .map(|(n, v)| (n.clone(), nums(v)))
            .collect();
        let incidences = (0..g.num_incidences())
            .map(|k| {
                let (p, l) = g.incidence_label(k);
                [p, l]
            })
            .collect();
        let groups = groups
            .iter()
            .map(|ng| {
                let elems = ng
                    .generators
                    .iter()
                    .map(|c| {
                        // A polarity stores the transpose of its matrix.
                        let m = if c.polarity { c.matrix.transpose() } else { c.matrix.clone() };
                        let row = |i: usize| [0, 1, 2].map(|j| Num::from_scalar(&m[(i, j)]));
                        GroupElement {
                            matrix: [row(0), row(1), row(2)],
                            polarity: c.polarity,
                        }
                    })
                    .collect();
                (ng.name.clone(), elems)
            })
            .collect();
        ConfigFile {
            points,
            lines,
            incidences,
            groups,
            pins: pins.to_vec(),
            mode: Some(mode),
        }
    }

    pub fn from_entry(entry: &CatalogEntry) -> Self {
        fn go<S: Scalar>(e: &Entry<S>, mode: Mode) -> ConfigFile {
            ConfigFile::from_parts(&e.realization, &e.groups, &e.pins, mode)
        }
        match &entry.data {
            EntryData::Exact(e) => go(e, Mode::Exact),
            EntryData::Float(e) => go(e, Mode::Float),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = r#"{
        "points": {"p": [1, "1/2", 1]},
        "lines": {"l": [0, 2, -1]},
        "incidences": [["p", "l"]],
        "groups": {"mirror": [{"matrix": [[-1,0,0],[0,1,0],[0,0,1]], "polarity": false}]}
    }"#;

    #[test]
    fn parses_rationals() {
        let f = ConfigFile::from_json(TEXT).unwrap();
        assert_eq!(f.default_mode(), Mode::Exact);
        let c = f.configuration::<Rational>().unwrap();
        assert_eq!(c.realization.point(0)[1], Rational::from_ratio(1, 2));
        assert!(c.realization.verify().is_empty());
        assert_eq!(c.group("mirror").unwrap().len(), 2);
    }

    #[test]
    fn unknown_key_rejected() {
        let t = TEXT.replacen("\"points\"", "\"extra\": 1, \"points\"", 1);
        assert!(ConfigFile::from_json(&t).is_err());
    }

    #[test]
    fn float_refused_in_exact_mode() {
        let t = TEXT.replace("\"1/2\"", "0.5");
        let f = ConfigFile::from_json(&t).unwrap();
        assert_eq!(f.default_mode(), Mode::Float);
        assert_eq!(f.configuration::<Rational>().unwrap_err(), Error::InexactInput(0.5));
        assert!(f.configuration::<f64>().is_ok());
    }

    #[test]
    fn round_trip_is_lossless() {
        let f = ConfigFile::from_json(TEXT).unwrap();
        let c = f.configuration::<Rational>().unwrap();
        let back = ConfigFile::from_parts(&c.realization, &c.groups, &c.pins, Mode::Exact);
        let again = ConfigFile::from_json(&back.to_json_pretty()).unwrap();
        assert_eq!(again.configuration::<Rational>().unwrap(), c);
    }
}
