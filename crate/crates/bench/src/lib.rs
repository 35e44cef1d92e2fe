//! Shared fixtures for the criterion benchmarks.

use polytrope_sound::{regime_params, PolytropeParams, Regime};

pub fn bcs() -> PolytropeParams {
    regime_params(Regime::Bcs, 1.0).expect("BCS parameters")
}

pub fn bec() -> PolytropeParams {
    regime_params(Regime::Bec { nu: 1.0 }, 1.0).expect("BEC parameters")
}
