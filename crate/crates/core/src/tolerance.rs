use log::warn;

/// Equality invariants are checked to this absolute tolerance.
pub const EXACT_TOL: f64 = 1e-12;

/// Inputs off by more than [`EXACT_TOL`] but no more than this are
/// renormalized (with a warning); anything worse is rejected.
pub const RENORM_TOL: f64 = 1e-9;

/// Outcome of comparing a quantity against its required value.
pub(crate) enum Check {
    Exact,
    Renormalize,
    Reject,
}

pub(crate) fn check(deviation: f64) -> Check {
    let d = deviation.abs();
    if !d.is_finite() {
        Check::Reject
    } else if d <= EXACT_TOL {
        Check::Exact
    } else if d <= RENORM_TOL {
        Check::Renormalize
    } else {
        Check::Reject
    }
}

pub(crate) fn renorm_warning(what: &str, deviation: f64) {
    warn!("{what} off by {deviation:e}; renormalizing");
}
