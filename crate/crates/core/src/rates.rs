//! Rate formulas for the suspicious links and the monitor's receivers.
//!
//! All rates are in bits/s/Hz.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};
use crate::scenario::{effective_noise, Scenario};

/// Relative tolerance on the most negative eigenvalue accepted for a
/// jamming covariance.
pub const PSD_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Link {
    One,
    Two,
}

impl Link {
    pub fn other(self) -> Link {
        match self {
            Link::One => Link::Two,
            Link::Two => Link::One,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Link::One => 1,
            Link::Two => 2,
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

/// A point in rate space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub const ORIGIN: RatePair = RatePair { r1: 0.0, r2: 0.0 };

    pub fn new(r1: f64, r2: f64) -> Self {
        RatePair { r1, r2 }
    }

    pub fn get(&self, link: Link) -> f64 {
        match link {
            Link::One => self.r1,
            Link::Two => self.r2,
        }
    }

    /// `tau · self + (1 − tau) · other`.
    pub fn lerp(&self, other: &RatePair, tau: f64) -> RatePair {
        RatePair {
            r1: tau * self.r1 + (1.0 - tau) * other.r1,
            r2: tau * self.r2 + (1.0 - tau) * other.r2,
        }
    }

    /// Componentwise `self >= other − tol`.
    pub fn dominates(&self, other: &RatePair, tol: f64) -> bool {
        self.r1 >= other.r1 - tol && self.r2 >= other.r2 - tol
    }
}

/// SIC decoding order; `first` is decoded first and then cancelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodingOrder {
    pub first: Link,
}

impl DecodingOrder {
    pub const ONE_FIRST: DecodingOrder = DecodingOrder { first: Link::One };
    pub const TWO_FIRST: DecodingOrder = DecodingOrder { first: Link::Two };

    pub fn second(&self) -> Link {
        self.first.other()
    }
}

/// `log2(1 + x)` accurate for small `x`.
pub fn log2_1p(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Rejects covariances that are non-square, of the wrong size or not PSD.
pub fn check_covariance(q: &CMat, nt: usize) -> Result<()> {
    if q.rows() != nt {
        return Err(Error::DimensionMismatch { expected: nt, found: q.rows() });
    }
    if q.cols() != nt {
        return Err(Error::DimensionMismatch { expected: nt, found: q.cols() });
    }
    let trace = q.trace().re;
    let min_eigenvalue = q.min_hermitian_eigenvalue();
    if min_eigenvalue < -PSD_TOL * trace.abs() || !trace.is_finite() {
        return Err(Error::NotPsd { min_eigenvalue, trace });
    }
    Ok(())
}

/// Bob `link`'s rate when jamming arrives with received power `jam_power`.
pub fn rate_under_jamming(s: &Scenario, link: Link, jam_power: f64) -> f64 {
    log2_1p(s.signal_power(link) / (jam_power + effective_noise(s, link)))
}

/// Rate of suspicious link `link` under jamming covariance `q`.
pub fn suspicious_rate(s: &Scenario, q: &CMat, link: Link) -> Result<f64> {
    check_covariance(q, s.nt())?;
    let jam = q.quad_form(s.jam_channel(link))?.max(0.0);
    Ok(rate_under_jamming(s, link, jam))
}

/// Rate of suspicious link `link` under rank-one jamming `w`.
pub fn suspicious_rate_bf(s: &Scenario, w: &CVec, link: Link) -> Result<f64> {
    let proj = crate::linalg::inner(s.jam_channel(link), w)?;
    Ok(rate_under_jamming(s, link, proj.norm_sqr()))
}

/// `log2(1 + P_i h_iᴴ R⁻¹ h_i)` with `R = P_j h_j h_jᴴ + σ_m² I + extra`.
fn mmse_rate_with(s: &Scenario, link: Link, extra: Option<&CMat>) -> f64 {
    let hi = s.eaves_channel(link);
    let hj = s.eaves_channel(link.other());
    let pj = s.power(link.other());
    let nr = s.nr();
    let mut cov = &hj.outer().scale_real(pj) + &CMat::identity(nr).scale_real(s.sigma_m_sq);
    if let Some(extra) = extra {
        cov = &cov + extra;
    }
    let x = cov.solve_hpd(hi).expect("noise keeps the covariance positive definite");
    let sinr = s.power(link) * crate::linalg::inner(hi, &x).expect("matching dims").re;
    log2_1p(sinr.max(0.0))
}

/// MMSE eavesdropping rate of link `link` with the other link as interference.
pub fn mmse_eaves_rate(s: &Scenario, link: Link) -> f64 {
    mmse_rate_with(s, link, None)
}

/// Interference-free eavesdropping rate `log2(1 + P_i ‖h_{i,m}‖² / σ_m²)`.
pub fn interference_free_rate(s: &Scenario, link: Link) -> f64 {
    log2_1p(s.power(link) * s.eaves_channel(link).norm_sq() / s.sigma_m_sq)
}

/// MMSE-SIC rates for one decoding order.
pub fn sic_rates(s: &Scenario, order: DecodingOrder) -> RatePair {
    let first = mmse_eaves_rate(s, order.first);
    let second = interference_free_rate(s, order.second());
    match order.first {
        Link::One => RatePair::new(first, second),
        Link::Two => RatePair::new(second, first),
    }
}

/// MMSE eavesdropping rate with residual self-interference `ρ H_ee Q H_eeᴴ`
/// added to the interference-plus-noise covariance.
pub fn si_eaves_rate(s: &Scenario, q: &CMat, link: Link) -> Result<f64> {
    check_covariance(q, s.nt())?;
    if s.rho == 0.0 {
        return Ok(mmse_eaves_rate(s, link));
    }
    // H_ee F with Q = F Fᴴ keeps null-space jamming leak-free to round-off
    let hf = s.hee.matmul(&q.psd_factor())?;
    let leak = hf.matmul(&hf.adjoint())?.scale_real(s.rho);
    let leak = (&leak + &leak.adjoint()).scale_real(0.5);
    Ok(mmse_rate_with(s, link, Some(&leak)))
}
