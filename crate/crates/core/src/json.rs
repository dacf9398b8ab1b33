//! JSON helpers. Rationals are written as `"p/q"` strings.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::Serializer;

use crate::direction::Direction;
use crate::rational::{format_rational, RVec, Rational};

pub fn ser_rational<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn ser_rvec<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for q in v {
        seq.serialize_element(&format_rational(q))?;
    }
    seq.end()
}

pub fn rvec_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn ser_rational_pair<S: Serializer>(p: &Option<(Rational, Rational)>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        None => s.serialize_none(),
        Some((a, b)) => {
            let mut seq = s.serialize_seq(Some(2))?;
            seq.serialize_element(&format_rational(a))?;
            seq.serialize_element(&format_rational(b))?;
            seq.end()
        }
    }
}

fn scale_map(m: &BTreeMap<Direction, Rational>) -> BTreeMap<String, String> {
    m.iter().map(|(d, q)| (d.to_string(), format_rational(q))).collect()
}

pub fn ser_scale_map_pair<S: Serializer>(
    p: &(BTreeMap<Direction, Rational>, BTreeMap<Direction, Rational>),
    s: S,
) -> Result<S::Ok, S::Error> {
    let mut map = s.serialize_map(Some(2))?;
    map.serialize_entry("lhs", &scale_map(&p.0))?;
    map.serialize_entry("rhs", &scale_map(&p.1))?;
    map.end()
}

pub fn ser_segments<S: Serializer>(w: &Option<Vec<(RVec, Direction)>>, s: S) -> Result<S::Ok, S::Error> {
    match w {
        None => s.serialize_none(),
        Some(segs) => {
            let mut seq = s.serialize_seq(Some(segs.len()))?;
            for (p, d) in segs {
                let mut entry = BTreeMap::new();
                entry.insert("start", serde_json::to_value(rvec_strings(p)).map_err(serde::ser::Error::custom)?);
                entry.insert("dir", serde_json::to_value(d).map_err(serde::ser::Error::custom)?);
                seq.serialize_element(&entry)?;
            }
            seq.end()
        }
    }
}

pub fn ser_rvecs<S: Serializer>(vs: &[RVec], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for v in vs {
        seq.serialize_element(&rvec_strings(v))?;
    }
    seq.end()
}

pub fn ser_point_values<S: Serializer>(vs: &[(RVec, Rational)], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(vs.len()))?;
    for (p, q) in vs {
        let mut entry = BTreeMap::new();
        entry.insert("point", serde_json::to_value(rvec_strings(p)).map_err(serde::ser::Error::custom)?);
        entry.insert("value", serde_json::Value::String(format_rational(q)));
        seq.serialize_element(&entry)?;
    }
    seq.end()
}
