//! Text serialization. Rationals are strings `"p/q"` (or `"p"`), and JSON
//! integers are accepted on input. Vectors are arrays of rationals.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::fixtures::{parse_subset, subset_label, Capacity};
use crate::lattice::{IdealSpec, SubspaceSpec, Vector};
use crate::ops::{Form, MaxLinOperator, PosPartForm};
use crate::rational::{self, Rational};

/// `#[serde(with = "sublinext::serde_rational")]` for bare rationals.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        rational::parse(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(rational::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v.into()))
    }
}

#[derive(Serialize, Deserialize)]
struct Q(#[serde(with = "serde_rational")] Rational);

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(rational::format))
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let entries = Vec::<Q>::deserialize(d)?;
        Ok(Vector::new(entries.into_iter().map(|q| q.0).collect()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FormRepr {
    Maxlin { components: Vec<Vec<Vector>> },
    Pospart { inner: Box<FormRepr> },
}

impl FormRepr {
    fn of_maxlin(t: &MaxLinOperator) -> Self {
        FormRepr::Maxlin {
            components: t.components().to_vec(),
        }
    }

    fn into_maxlin(self) -> crate::Result<MaxLinOperator> {
        match self {
            FormRepr::Maxlin { components } => {
                let n = components
                    .first()
                    .and_then(|c| c.first())
                    .map(Vector::len)
                    .ok_or_else(|| crate::Error::Invalid("operator has no generators".into()))?;
                MaxLinOperator::new(n, components)
            }
            FormRepr::Pospart { .. } => Err(crate::Error::Invalid(
                "the inner operator of a pospart must be a maxlin".into(),
            )),
        }
    }

    fn into_form(self) -> crate::Result<Form> {
        match self {
            FormRepr::Maxlin { .. } => self.into_maxlin().map(Form::MaxLin),
            FormRepr::Pospart { inner } => PosPartForm::new(inner.into_maxlin()?).map(Form::PosPart),
        }
    }
}

impl Serialize for MaxLinOperator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        FormRepr::of_maxlin(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MaxLinOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FormRepr::deserialize(d)?.into_maxlin().map_err(de::Error::custom)
    }
}

impl Serialize for Form {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Form::MaxLin(t) => FormRepr::of_maxlin(t),
            Form::PosPart(p) => FormRepr::Pospart {
                inner: Box::new(FormRepr::of_maxlin(p.inner())),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        FormRepr::deserialize(d)?.into_form().map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubspaceRepr {
    dim: usize,
    basis: Vec<Vector>,
}

impl Serialize for SubspaceSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            dim: self.dim(),
            basis: self.basis().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubspaceSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SubspaceRepr::deserialize(d)?;
        SubspaceSpec::new(r.dim, r.basis).map_err(de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealRepr {
    dim: usize,
    coords: Vec<usize>,
}

impl Serialize for IdealSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        IdealRepr {
            dim: self.dim(),
            coords: self.coords().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IdealSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = IdealRepr::deserialize(d)?;
        IdealSpec::new(r.dim, r.coords).map_err(de::Error::custom)
    }
}

struct CapacityValues<'a>(&'a Capacity);

impl Serialize for CapacityValues<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let c = self.0;
        let mut map = s.serialize_map(Some(c.values().len() - 1))?;
        for (mask, v) in c.values().iter().enumerate().skip(1) {
            map.serialize_entry(&subset_label(mask as u32, c.n()), &rational::format(v))?;
        }
        map.end()
    }
}

impl Serialize for Capacity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("n", &self.n())?;
        map.serialize_entry("values", &CapacityValues(self))?;
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CapacityRepr {
    n: usize,
    values: BTreeMap<String, Q>,
}

/// Every nonempty subset needs a value; `{}` may be given and must be 0.
impl<'de> Deserialize<'de> for Capacity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = CapacityRepr::deserialize(d)?;
        if r.n > crate::fixtures::CAPACITY_BOUND {
            return Err(de::Error::custom(format!("capacity on {} elements is too large", r.n)));
        }
        let mut values: Vec<Option<Rational>> = vec![None; 1 << r.n];
        values[0] = Some(rational::zero());
        for (label, q) in r.values {
            let mask = parse_subset(&label, r.n).map_err(de::Error::custom)? as usize;
            if mask != 0 && values[mask].is_some() {
                return Err(de::Error::custom(format!("subset {label} given twice")));
            }
            values[mask] = Some(q.0);
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(mask, v)| {
                v.ok_or_else(|| {
                    de::Error::custom(format!("missing value for {}", subset_label(mask as u32, r.n)))
                })
            })
            .collect::<Result<Vec<_>, D::Error>>()?;
        Capacity::new(r.n, values).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_and_vectors() {
        let v: Vector = serde_json::from_str(r#"["1/2", 3, "-4/8", "0"]"#).unwrap();
        assert_eq!(v, Vector::new(vec![rational::ratio(1, 2), rational::int(3), rational::ratio(-1, 2), rational::zero()]));
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1/2","3","-1/2","0"]"#);
        assert!(serde_json::from_str::<Vector>(r#"["1/0"]"#).is_err());
        assert!(serde_json::from_str::<Vector>(r#"[0.5]"#).is_err());
    }

    #[test]
    fn operators_round_trip() {
        let text = r#"{"kind":"pospart","inner":{"kind":"maxlin","components":[[["1","0"],["0","1"]]]}}"#;
        let f: Form = serde_json::from_str(text).unwrap();
        assert!(matches!(f, Form::PosPart(_)));
        assert_eq!(serde_json::to_string(&f).unwrap(), text);
        let non_monotone = r#"{"kind":"pospart","inner":{"kind":"maxlin","components":[[["-1","0"]]]}}"#;
        assert!(serde_json::from_str::<Form>(non_monotone).is_err());
        assert!(serde_json::from_str::<Form>(r#"{"kind":"maxlin","components":[]}"#).is_err());
    }

    #[test]
    fn capacity_format() {
        let text = r#"{"n":2,"values":{"{0}":"1","{1}":"1","{0,1}":"1"}}"#;
        let c: Capacity = serde_json::from_str(text).unwrap();
        assert_eq!(c.value(3), &rational::one());
        assert_eq!(serde_json::to_string(&c).unwrap(), text);
        assert!(serde_json::from_str::<Capacity>(r#"{"n":2,"values":{"{0}":"1"}}"#).is_err());
    }

    #[test]
    fn subspaces_and_ideals() {
        let g: SubspaceSpec = serde_json::from_str(r#"{"dim":2,"basis":[["1","1"]]}"#).unwrap();
        assert_eq!(g.rank(), 1);
        assert!(serde_json::from_str::<SubspaceSpec>(r#"{"dim":2,"basis":[[1,1],[2,2]]}"#).is_err());
        let a: IdealSpec = serde_json::from_str(r#"{"dim":3,"coords":[1,0]}"#).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), r#"{"dim":3,"coords":[0,1]}"#);
    }
}
