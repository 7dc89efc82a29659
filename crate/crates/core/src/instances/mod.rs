//! Problem families: noise dosage (binary and integer), covering designs,
//! and a seeded random generator for noise dosage data.

mod covering;
mod ndb;
mod noise;
mod rng;

pub use covering::{build_covering, subsets, CoveringParams, COVERING_VAR_CAP};
pub use ndb::{build_ndb, ndb_shell, sherali_smith_shc, NdbData, ShcRows, COEF_WARN_THRESHOLD};
pub use noise::{generate_noise, MuMode, NoiseParams};
pub use rng::Rng;

use crate::instance::Instance;

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["ndb_shell", "ndb_toy", "infeasible_toy", "nd_toy", "nd_toy2", "ndb_toy_2x4"];

/// Small named instances used in tests and examples.
pub fn builtin(name: &str) -> Option<Instance> {
    let inst = match name {
        "ndb_shell" => ndb_shell(3, 5),
        "ndb_toy" => ndb_toy(),
        "infeasible_toy" => infeasible_toy(),
        "nd_toy" => nd_toy(),
        "nd_toy2" => build_ndb(&NdbData {
            name: "nd_toy2".into(),
            p: 3,
            q: 3,
            d: vec![2, 2, 1],
            t: vec![1.0, 1.5, 2.0],
            alpha: vec![3.0, 2.0, 4.0],
            h: 4.0,
            integer: true,
        })
        .ok()?,
        "ndb_toy_2x4" => build_ndb(&NdbData {
            name: "ndb_toy_2x4".into(),
            p: 2,
            q: 4,
            d: vec![2, 3],
            t: vec![2.0, 1.0],
            alpha: vec![5.0, 3.0],
            h: 3.0,
            integer: false,
        })
        .ok()?,
        _ => return parse_covering_name(name).and_then(|p| build_covering(&p).ok()),
    };
    Some(inst)
}

/// `covering_T_V_K_L`, e.g. `covering_2_4_3_2`.
fn parse_covering_name(name: &str) -> Option<CoveringParams> {
    let rest = name.strip_prefix("covering_")?;
    let nums: Vec<usize> = rest.split('_').map(|s| s.parse().ok()).collect::<Option<_>>()?;
    match nums[..] {
        [t, v, k, lambda] => Some(CoveringParams { t, v, k, lambda }),
        _ => None,
    }
}

/// The 3×5 binary noise dosage toy: one task per machine, unit times.
pub fn ndb_toy() -> Instance {
    build_ndb(&NdbData {
        name: "ndb_toy".into(),
        p: 3,
        q: 5,
        d: vec![1, 1, 1],
        t: vec![1.0; 3],
        alpha: vec![1.0, 2.0, 3.0],
        h: 3.0,
        integer: false,
    })
    .expect("consistent toy data")
}

/// More work than the workers have hours.
pub fn infeasible_toy() -> Instance {
    build_ndb(&NdbData {
        name: "infeasible_toy".into(),
        p: 2,
        q: 2,
        d: vec![2, 2],
        t: vec![1.0, 1.0],
        alpha: vec![1.0, 1.0],
        h: 1.0,
        integer: false,
    })
    .expect("consistent toy data")
}

/// Integer noise dosage toy (`θ_ij ∈ {0..d_i}`).
pub fn nd_toy() -> Instance {
    build_ndb(&NdbData {
        name: "nd_toy".into(),
        p: 2,
        q: 3,
        d: vec![3, 2],
        t: vec![1.0, 2.0],
        alpha: vec![1.0, 2.0],
        h: 4.0,
        integer: true,
    })
    .expect("consistent toy data")
}

/// Covering designs small enough for exhaustive enumeration.
pub fn covering_toys() -> Vec<CoveringParams> {
    [
        (1, 4, 3, 2),
        (1, 4, 3, 3),
        (2, 4, 3, 2),
        (2, 4, 3, 3),
        (2, 5, 4, 2),
        (2, 5, 4, 3),
        (2, 5, 3, 2),
        (2, 6, 5, 2),
        (2, 6, 5, 3),
        (3, 6, 5, 2),
        (3, 6, 5, 3),
    ]
    .into_iter()
    .map(|(t, v, k, lambda)| CoveringParams { t, v, k, lambda })
    .collect()
}

/// Every shipped toy instance: noise dosage toys and [`covering_toys`].
pub fn toy_suite() -> Vec<Instance> {
    let mut out: Vec<Instance> =
        ["ndb_toy", "ndb_toy_2x4", "nd_toy", "nd_toy2", "infeasible_toy"].iter().filter_map(|n| builtin(n)).collect();
    out.extend(covering_toys().iter().map(|p| build_covering(p).expect("toy sizes are small")));
    out
}
