//! Deliberately broken closed forms used as a negative control for `verify`.

use jamregion::linalg::project_complement;
use jamregion::oracle::{ClosedForms, Reference};
use jamregion::rates::{suspicious_rate_bf, Link, RatePair};
use jamregion::{Beamformer, Result, Scenario};

/// Reflects the lower-boundary beamformer across the Bob-1 channel direction,
/// which keeps the Bob-1 rate but flips the sign of the orthogonal part.
pub struct SignFlip;

impl ClosedForms for SignFlip {
    fn f_max(&self, s: &Scenario, r1: f64) -> Result<f64> {
        Reference.f_max(s, r1)
    }

    fn f_min(&self, s: &Scenario, r1: f64) -> Result<f64> {
        let w = jamregion::jammer::lower_boundary_beamformer(s, r1)?.w;
        let orth = project_complement(&w, s.jam_channel(Link::One))?;
        let flipped = &w - &orth.scale_real(2.0);
        suspicious_rate_bf(s, &flipped, Link::Two)
    }

    fn min_power_beamformer(&self, s: &Scenario, target: RatePair) -> Result<Beamformer> {
        Reference.min_power_beamformer(s, target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use jamregion::scenario::{generate, GenParams, Geometry};

    #[test]
    fn sign_flip_departs_from_reference_somewhere() {
        let s = generate(&Geometry::default(), &GenParams::default(), 1).unwrap();
        let j = jamregion::Jammer::new(&s, Default::default());
        let worst = j
            .r1_grid(16)
            .into_iter()
            .map(|r1| (SignFlip.f_min(&s, r1).unwrap() - Reference.f_min(&s, r1).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(worst > 1e-3, "{worst}");
    }
}
