//! Wire formats of the `eszeta` binary's JSON reports, importable by
//! consumers that need to re-parse them with full type fidelity.

pub mod wire;
