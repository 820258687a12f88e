//! Coincidence strata of `ℂⁿ`, the map `θ` restricted to a stratum, and
//! numerical lifting of critical-value paths inside a fixed stratum.

mod lift;
mod partition;

pub use lift::{lift_path, LiftOptions, LiftReport, Lifter};
pub use partition::{multiplicities_of, part_of, phi, phi_inverse, refines, SetPartition};

use serde::Serialize;

use crate::critical_map::ThetaMap;
use crate::error::{Error, Result};
use crate::numeric::{Complex64, ComplexPoint};

/// Default tolerance for deciding that two coordinates coincide.
pub const COINCIDENCE_TOL: f64 = 1e-9;

fn check_stratum(lambda: &SetPartition, z: &ComplexPoint, tol: f64) -> Result<ComplexPoint> {
    partition::check_dim(lambda, z)?;
    if part_of(z, tol) != *lambda {
        return Err(Error::StratumMismatch);
    }
    phi(lambda, z, tol)
}

/// `θ` on the stratum `λ`, computed as `φ⁻¹ ∘ θ_a ∘ φ` with `a` the block
/// sizes of `λ`.
pub fn theta_lambda(lambda: &SetPartition, z: &ComplexPoint, tol: f64) -> Result<ComplexPoint> {
    let y = check_stratum(lambda, z, tol)?;
    let map = ThetaMap::new(&multiplicities_of(lambda));
    phi_inverse(lambda, &ComplexPoint::new(map.eval(y.coords())?)?)
}

/// Thresholds for [`certify_local_homeo`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyOptions {
    pub coincidence: f64,
    /// `|det| > singular_rel · scale^{mn}` with `scale = max |y_i|`.
    pub singular_rel: f64,
    pub max_condition: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            coincidence: COINCIDENCE_TOL,
            singular_rel: 1e-12,
            max_condition: 1e12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub certified: bool,
    /// Factored closed form of `det J_a` at `φ(z)`.
    pub det: Complex64,
    /// Determinant of the numerically evaluated symbolic Jacobian.
    pub jacobian_det: Complex64,
    /// 1-norm condition number of the Jacobian.
    pub condition_estimate: f64,
}

/// Whether `θ_λ` is numerically a local homeomorphism at `z`.
///
/// The threshold uses the closed form, which is exactly zero whenever a
/// coordinate vanishes or two blocks share a value, so such points are never
/// certified.
pub fn certify_local_homeo(
    lambda: &SetPartition,
    z: &ComplexPoint,
    opts: &CertifyOptions,
) -> Result<Certificate> {
    let y = check_stratum(lambda, z, opts.coincidence)?;
    let a = multiplicities_of(lambda);
    let map = ThetaMap::new(&a);
    let jac = map.jacobian(y.coords())?;
    let det = map.closed_form_det(y.coords())?;
    let condition_estimate = jac.condition_1();
    let degree = (a.m() as i32) * (a.n() as i32);
    let threshold = opts.singular_rel * y.max_abs().powi(degree);
    Ok(Certificate {
        certified: det.norm() > threshold && condition_estimate < opts.max_condition,
        det,
        jacobian_det: jac.det(),
        condition_estimate,
    })
}
