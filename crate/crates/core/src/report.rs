//! Serialization helpers shared by reports: points as `[x, y]` and reals with an `"inf"` sentinel.

use crate::geom::Point;
use serde::Serializer;

/// Finite reals as numbers, infinities as `"inf"` / `"-inf"`. NaN is a bug and is written as `"nan"`
/// only so that the document stays parseable.
pub fn real<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn opt_real<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => real(x, s),
        None => s.serialize_none(),
    }
}

pub fn point<S: Serializer>(p: &Point, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&p.re)?;
    t.serialize_element(&p.im)?;
    t.end()
}

pub fn points<S: Serializer>(ps: &[Point], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(ps.len()))?;
    for p in ps {
        seq.serialize_element(&[p.re, p.im])?;
    }
    seq.end()
}

pub fn to_json_value<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report serialization")
}

/// JSON object for an annulus.
pub fn annulus_json(a: &crate::geom::Annulus) -> serde_json::Value {
    use crate::geom::AnnulusKind;
    use serde_json::json;
    let c = [a.center().re, a.center().im];
    match a.kind() {
        AnnulusKind::Proper => json!({
            "type": "proper",
            "center": c,
            "center_radius": a.center_radius().unwrap(),
            "half_modulus": a.half_modulus(),
            "inner_radius": a.inner_radius(),
            "outer_radius": a.outer_radius(),
        }),
        AnnulusKind::PuncturedDisk => json!({
            "type": "punctured_disk",
            "center": c,
            "radius": a.outer_radius(),
            "half_modulus": "inf",
        }),
        AnnulusKind::DiskComplement => json!({
            "type": "disk_complement",
            "center": c,
            "radius": a.inner_radius(),
            "half_modulus": "inf",
        }),
    }
}

pub fn annulus<S: Serializer>(a: &crate::geom::Annulus, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    annulus_json(a).serialize(s)
}

pub fn opt_annulus<S: Serializer>(a: &Option<crate::geom::Annulus>, s: S) -> Result<S::Ok, S::Error> {
    match a {
        Some(a) => annulus(a, s),
        None => s.serialize_none(),
    }
}

pub fn annuli<S: Serializer>(v: &[crate::geom::Annulus], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for a in v {
        seq.serialize_element(&annulus_json(a))?;
    }
    seq.end()
}
