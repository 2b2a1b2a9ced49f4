//! Small instances shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use sbw_core::{BlowupInstance, Degree, IdealData, InstanceData, RingData, StringyRing};

fn ring(gens: &[(&str, i64)], rels: &[&str]) -> RingData {
    RingData {
        generators: gens.iter().map(|(n, d)| (n.to_string(), Degree::from(*d))).collect(),
        relations: rels.iter().map(|r| r.to_string()).collect(),
    }
}

fn ideal(name: &str, weight: i64, codim: usize, chern: &[&str], class: &str) -> IdealData {
    IdealData {
        name: name.into(),
        weight,
        codim,
        chern: chern.iter().map(|c| c.to_string()).collect(),
        class: class.into(),
    }
}

fn push(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

/// `((x), b)` on the affine line.
pub fn rootstack(b: i64, d_max: i64) -> InstanceData {
    InstanceData {
        x: ring(&[], &[]),
        y: ring(&[], &[]),
        pull: vec![],
        push: push(&[("1", "0")]),
        ideals: vec![ideal("x", b, 1, &["0"], "0")],
        y_class: "0".into(),
        d_max: Degree::from(d_max),
        denominator: b,
    }
}

/// A point in the plane, center `(x, b1) + (y, b2)`.
pub fn point_plane(b1: i64, b2: i64, d_max: i64) -> InstanceData {
    InstanceData {
        x: ring(&[("H", 1)], &["H^3"]),
        y: ring(&[], &[]),
        pull: vec!["0".into()],
        push: push(&[("1", "H^2")]),
        ideals: vec![ideal("x", b1, 1, &["0"], "H"), ideal("y", b2, 1, &["0"], "H")],
        y_class: "H^2".into(),
        d_max: Degree::from(d_max),
        denominator: b1 * b2,
    }
}

/// A line in the plane with weight `b`.
pub fn line_plane(b: i64, d_max: i64) -> InstanceData {
    InstanceData {
        x: ring(&[("H", 1)], &["H^3"]),
        y: ring(&[("h", 1)], &["h^2"]),
        pull: vec!["h".into()],
        push: push(&[("1", "H"), ("h", "H^2")]),
        ideals: vec![ideal("x", b, 1, &["h"], "H")],
        y_class: "H".into(),
        d_max: Degree::from(d_max),
        denominator: b,
    }
}

/// A smooth conic in the plane with weight `b`.
pub fn conic_plane(b: i64, d_max: i64) -> InstanceData {
    InstanceData {
        x: ring(&[("H", 1)], &["H^3"]),
        y: ring(&[("p", 1)], &["p^2"]),
        pull: vec!["2*p".into()],
        push: push(&[("1", "2*H"), ("p", "H^2")]),
        ideals: vec![ideal("q", b, 1, &["4*p"], "2*H")],
        y_class: "2*H".into(),
        d_max: Degree::from(d_max),
        denominator: b,
    }
}

pub fn instance(data: &InstanceData) -> Arc<BlowupInstance> {
    Arc::new(data.build().expect("valid instance"))
}

pub fn stringy(data: &InstanceData) -> StringyRing {
    StringyRing::new(instance(data)).expect("stringy ring")
}

/// Every fixture used by the law checks.
pub fn all() -> Vec<(&'static str, InstanceData)> {
    vec![
        ("rootstack_b2", rootstack(2, 3)),
        ("rootstack_b3", rootstack(3, 3)),
        ("point_plane_11", point_plane(1, 1, 3)),
        ("point_plane_12", point_plane(1, 2, 3)),
        ("line_plane_w2", line_plane(2, 4)),
        ("conic_plane_w2", conic_plane(2, 3)),
    ]
}
