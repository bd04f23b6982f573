//! Numeric tolerances shared across the crate.

/// Algebraic identities evaluated in double precision (closed form vs. closed form).
pub const IDENTITY: f64 = 1e-12;

/// Comparisons of derived quantities: deviation-loss ties, phase membership,
/// mixing denominators.
pub const TIE_EPS: f64 = 1e-9;

/// Default slack for the unilateral-deviation test of a mixed profile.
pub const NE_CHECK: f64 = 1e-9;

/// Angle distance at which a quantum NE report snaps to a Table-5 threshold.
pub const THRESHOLD_MEMBERSHIP: f64 = 1e-12;
