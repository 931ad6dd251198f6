#![allow(dead_code)]

use std::path::PathBuf;

use selfsim::instances::{AnyInstance, InstanceConfig};
use selfsim::session;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> AnyInstance {
    let config = InstanceConfig::from_path(&fixture_path(name)).unwrap();
    session::build_instance(&config).unwrap()
}

pub fn from_json(json: &str) -> AnyInstance {
    session::build_instance(&InstanceConfig::from_json(json).unwrap()).unwrap()
}

/// Every fixture whose hypotheses hold.
pub const SHIPPED: &[&str] = &[
    "lamplighter_p2_n1",
    "lamplighter_p3_n1",
    "lamplighter_p2_n2",
    "lamplighter_p3_n2",
    "lamplighter_p2_n3",
    "lamplighter_p2_n4",
    "borel_m2_p2",
    "borel_m2_p3",
    "borel_m3_p2",
    "affine_n3_p2",
    "wreath_p2_d2",
    "wreath_p2_d2_localized",
];
