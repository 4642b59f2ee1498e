//! Serde adapter writing rationals as `"p/q"` strings in lowest terms.
//! Integers keep their `/1`, so every value has one shape.

use serde::{de::Error, Deserialize, Deserializer, Serializer};

use crate::goeritz::Rational;

pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<Rational> {
    let (p, q) = s.split_once('/')?;
    let (p, q): (i128, i128) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
    (q != 0).then(|| Rational::new(p, q))
}

pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format(r))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}")))
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&format(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        match Option::<String>::deserialize(d)? {
            Some(s) => parse(&s).map(Some).ok_or_else(|| D::Error::custom(format!("bad rational {s:?}"))),
            None => Ok(None),
        }
    }
}
