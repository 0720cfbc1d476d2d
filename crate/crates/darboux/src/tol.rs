//! Numerical thresholds used across the kernel.
//!
//! Inputs are analytic, so identities that hold exactly are spoiled only by
//! rounding; the zero/divisor thresholds absorb that, while the constancy and
//! verdict tolerances are the single relative knob exposed to callers.

/// A curvature is "identically zero" iff its max |.| over the grid stays
/// below this.  Jets make analytic zeros exact to machine precision; 1e-9
/// absorbs rounding.
pub const ZERO_CURVATURE: f64 = 1e-9;

/// A divisor is "nonvanishing" iff its min |.| over the grid stays above this.
pub const DIVISOR_MIN: f64 = 1e-9;

/// The designated frame component of an associated curve's derivative must
/// stay above this in magnitude (the nonvanishing clause of each system).
pub const REGULARITY_MIN: f64 = 1e-9;

/// Unit-speed, normality and unit-normal deviations must stay below this for
/// a surface curve to validate.
pub const VALIDATION: f64 = 1e-6;

/// Default relative tolerance for constancy verdicts (Lancret and the
/// slant-helix/isophote invariants).
pub const CONSTANCY_REL: f64 = 1e-6;

/// Default angular-spread bound (radians) for an axis fit to count as a
/// constant-angle verdict.
pub const AXIS_ANGLE_STD: f64 = 1e-6;

/// Max allowed 1 - |<T_gamma, X>| for the tangent-alignment check.
pub const ALIGNMENT_MAX: f64 = 1e-8;

/// Max allowed 1 - |<B_gamma, unit Darboux field>| for the binormal check.
pub const BINORMAL_MAX: f64 = 1e-6;

/// Below this curvature the Frenet frame is reported undefined.
pub const FRAME_UNDEFINED: f64 = 1e-12;

/// Tolerance knobs a caller may override (`--tol` in the CLI).
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub constancy_rel: f64,
    pub axis_angle_std: f64,
    pub alignment_max: f64,
    pub binormal_max: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            constancy_rel: CONSTANCY_REL,
            axis_angle_std: AXIS_ANGLE_STD,
            alignment_max: ALIGNMENT_MAX,
            binormal_max: BINORMAL_MAX,
        }
    }
}

impl Tolerances {
    /// Scale the relative knobs shared by classification and helix verdicts.
    pub fn with_rel(rel: f64) -> Self {
        Tolerances {
            constancy_rel: rel,
            axis_angle_std: rel,
            ..Tolerances::default()
        }
    }
}
