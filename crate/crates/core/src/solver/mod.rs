//! The operators `K` and `P` and the computations built on them.

mod assembly;
mod compact;
mod moment;
mod probe;
mod verify;

pub use assembly::{
    ball_rule, dbar_of_k, dbar_of_p, disc_rule, koppelman_k, projection_p, Carrier, ChartForm,
    KernelAssembly, Operator,
};
pub use compact::{
    compact_support_solve, hartogs_extend, AmbientFn, CompactOptions, CompactReport, HartogsCase,
    HartogsReport, Obstruction, PointValue,
};
pub use moment::{
    classify_monomials, default_family, moment_check, pairing_contour, pairing_cutoff,
    pairing_exact, MomentReport, MonomialClass, PairingTest,
};
pub use probe::{asymptotic_probe, ProbeReport};
pub use verify::{annulus_grid, square_grid, verify_koppelman, GridPoint, SolveReport};
