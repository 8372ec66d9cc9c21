//! Extremality functionals.
//!
//! * [`xi_downward_cone`]: a point is extremal iff its downward cone holds no other
//!   point. This coincides with the overlap functional for power laws with `α <= 1`.
//! * [`xi_envelope`]: the overlap functional for any profile. A point is extremal iff
//!   the graph `u ↦ h_i + ψ(|u − x_i|)` dips strictly below the lower envelope of the
//!   other graphs somewhere; the search is a branch-and-bound over spatial cells.
//! * [`xi_restricted`], [`xi_finite_range`], [`localization_radius`]: the same test
//!   restricted to a space-time box or a cylinder.
//! * [`birth_growth_accept`]: the classical birth–growth acceptance without overlap.

mod birth_growth;
mod cone;
pub(crate) mod envelope;
mod localization;

use alloc::vec::Vec;

pub use birth_growth::birth_growth_accept;
pub use cone::{xi_downward_cone, xi_downward_cone_brute, xi_downward_cone_with};
pub use envelope::{default_search_radius, xi_envelope, xi_envelope_with, EnvelopeParams};
pub use localization::{localization_radius, xi_finite_range, xi_restricted, xi_restricted_with, SpaceTimeBox};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::geometry::{PointConfiguration, PsiSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    DownwardCone,
    Envelope { grid_step: f64, max_refine: u32 },
    BirthGrowth,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExtremalityResult {
    pub flags: Vec<bool>,
    pub method: Method,
    /// Points whose envelope search ended without a certificate either way.
    pub unresolved: Vec<usize>,
}

impl ExtremalityResult {
    pub fn count(&self) -> usize {
        self.flags.iter().filter(|f| **f).count()
    }
}

/// Cone test where it is exact, envelope search otherwise.
pub fn xi_auto(
    config: &PointConfiguration,
    psi: &PsiSpec,
    params: &EnvelopeParams,
    exec: &impl Executor,
) -> Result<ExtremalityResult> {
    match psi {
        PsiSpec::PowerLaw { alpha } if *alpha <= 1.0 => xi_downward_cone_with(config, psi, exec),
        _ => xi_envelope_with(config, psi, params, exec),
    }
}

pub(crate) fn require_space_time(config: &PointConfiguration) -> Result<()> {
    if config.stride + 1 != config.d {
        return Err(Error::arg("config", "expected a space-time configuration"));
    }
    Ok(())
}
