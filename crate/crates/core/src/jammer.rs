//! Closed-form jamming beamformers.
//!
//! For a target Bob-1 rate `r1` the monitor must deliver exactly
//! `φ(r1) = P₁|h₁₁|² / (2^r1 − 1) − σ̃₁²` of jamming power at Bob 1. Among all
//! beamformers meeting that equality within the budget `P_max`:
//!
//! * [`Jammer::upper_boundary_beamformer`] leaks the least power to Bob 2,
//!   written in the orthonormal pair `(ĝ₂, ĝ₂⊥)` where `ĝ₂⊥` is the unit
//!   complement of `g₁` against `ĝ₂`;
//! * [`Jammer::lower_boundary_beamformer`] leaks the most, written in
//!   `(ĝ₁, ĝ₁⊥)` with `ĝ₁⊥` the unit complement of `g₂` against `ĝ₁`;
//! * [`Jammer::min_power_beamformer`] hits an arbitrary pair `(r1, r2)`
//!   between the two with the least transmit power.
//!
//! Both bases span `{g₁, g₂}`, which is where every optimal beamformer lives.
//! When `g₁ ∥ g₂` the complement directions vanish and every beamformer
//! meeting the Bob-1 constraint induces the same Bob-2 rate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, null_space_basis, CMat, CVec, C64};
use crate::rates::{log2_1p, rate_under_jamming, Link, RatePair};
use crate::scenario::{effective_noise, Scenario};

/// Discretization and tolerance settings shared by sweeps and oracles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    /// Boundary sample count, at least 2.
    pub n_samples: usize,
    /// Absolute rate tolerance in bits/s/Hz.
    pub tol_rate: f64,
    /// Relative power tolerance.
    pub tol_power: f64,
    /// Complement norms below `collinear_eps · ‖target‖` count as zero.
    pub collinear_eps: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { n_samples: 128, tol_rate: 1e-6, tol_power: 1e-9, collinear_eps: 1e-9 }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 2 {
            return Err(Error::InvalidParameter("n_samples must be >= 2".into()));
        }
        for (name, v) in [
            ("tol_rate", self.tol_rate),
            ("tol_power", self.tol_power),
            ("collinear_eps", self.collinear_eps),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0")));
            }
        }
        Ok(())
    }
}

/// A rank-one jamming strategy `Q = w wᴴ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Beamformer {
    pub w: CVec,
}

impl Beamformer {
    pub fn new(w: CVec) -> Self {
        Beamformer { w }
    }

    pub fn silent(nt: usize) -> Self {
        Beamformer { w: CVec::zeros(nt) }
    }

    pub fn power(&self) -> f64 {
        self.w.norm_sq()
    }

    pub fn covariance(&self) -> CMat {
        self.w.outer()
    }

    /// Received jamming power `|gᴴw|²`.
    pub fn delivered(&self, g: &CVec) -> f64 {
        linalg::inner(g, &self.w).expect("matching dims").norm_sqr()
    }

    /// Suspicious rate pair induced by this beamformer.
    pub fn rates(&self, s: &Scenario) -> RatePair {
        RatePair::new(
            rate_under_jamming(s, Link::One, self.delivered(&s.g1)),
            rate_under_jamming(s, Link::Two, self.delivered(&s.g2)),
        )
    }
}

/// Extreme rates of one link.
#[derive(Clone, Debug, PartialEq)]
pub struct RateExtremes {
    pub r_min: f64,
    pub r_max: f64,
    /// Full-power MRT toward the link's receiver; zero if unjammable.
    pub w_min: Beamformer,
    /// `g_i = 0`: no beamformer can affect this link.
    pub unjammable: bool,
}

fn unit_phase(z: C64) -> C64 {
    // e^{-j∠z}; the phase of 0 is taken as 0
    if z.norm() > 0.0 {
        (z / z.norm()).conj()
    } else {
        C64::new(1.0, 0.0)
    }
}

/// Unit complement of `target` against the unit vector `anchor`, with the
/// projection coefficient `targetᴴ·complement`.
struct Complement {
    dir: Option<CVec>,
}

fn complement(target: &CVec, anchor: Option<&CVec>, eps: f64) -> Complement {
    let Some(anchor) = anchor else {
        return Complement { dir: target.normalized() };
    };
    let p = linalg::project_complement(target, anchor).expect("unit anchor");
    if p.norm() <= eps * target.norm() {
        Complement { dir: None }
    } else {
        Complement { dir: p.normalized() }
    }
}

/// Per-scenario precomputation for beamformer synthesis.
#[derive(Clone, Debug)]
pub struct Jammer<'a> {
    s: &'a Scenario,
    cfg: SweepConfig,
    sig: [f64; 2],
    noise: [f64; 2],
    g1_norm: f64,
    g2_norm: f64,
    g1_hat: Option<CVec>,
    g2_hat: Option<CVec>,
    /// ĝ₂⊥: complement of g₁ against ĝ₂.
    g2_perp: Option<CVec>,
    /// ĝ₁⊥: complement of g₂ against ĝ₁.
    g1_perp: Option<CVec>,
    /// g₁ᴴĝ₂ and g₁ᴴĝ₂⊥.
    g1_on_g2: C64,
    g1_on_g2_perp: C64,
    /// g₂ᴴĝ₁ and g₂ᴴĝ₁⊥.
    g2_on_g1: C64,
    g2_on_g1_perp: C64,
    collinear: bool,
}

fn proj(g: &CVec, dir: Option<&CVec>) -> C64 {
    dir.map_or(C64::new(0.0, 0.0), |d| linalg::inner(g, d).expect("matching dims"))
}

impl<'a> Jammer<'a> {
    pub fn new(s: &'a Scenario, cfg: SweepConfig) -> Self {
        let g1_hat = s.g1.normalized();
        let g2_hat = s.g2.normalized();
        let eps = cfg.collinear_eps;
        let g2_perp = complement(&s.g1, g2_hat.as_ref(), eps).dir;
        let g1_perp = complement(&s.g2, g1_hat.as_ref(), eps).dir;
        let collinear = g1_hat.is_some() && g2_hat.is_some() && (g2_perp.is_none() || g1_perp.is_none());
        let (g2_perp, g1_perp) = if collinear { (None, None) } else { (g2_perp, g1_perp) };
        Jammer {
            s,
            cfg,
            sig: [s.signal_power(Link::One), s.signal_power(Link::Two)],
            noise: [effective_noise(s, Link::One), effective_noise(s, Link::Two)],
            g1_norm: s.g1.norm(),
            g2_norm: s.g2.norm(),
            g1_on_g2: proj(&s.g1, g2_hat.as_ref()),
            g1_on_g2_perp: proj(&s.g1, g2_perp.as_ref()),
            g2_on_g1: proj(&s.g2, g1_hat.as_ref()),
            g2_on_g1_perp: proj(&s.g2, g1_perp.as_ref()),
            g1_hat,
            g2_hat,
            g2_perp,
            g1_perp,
            collinear,
        }
    }

    pub fn scenario(&self) -> &Scenario {
        self.s
    }

    pub fn config(&self) -> &SweepConfig {
        &self.cfg
    }

    /// `g₁ ∥ g₂` within `collinear_eps`.
    pub fn is_collinear(&self) -> bool {
        self.collinear
    }

    fn idx(link: Link) -> usize {
        link.index() - 1
    }

    fn g_norm(&self, link: Link) -> f64 {
        match link {
            Link::One => self.g1_norm,
            Link::Two => self.g2_norm,
        }
    }

    pub fn r_max(&self, link: Link) -> f64 {
        let i = Self::idx(link);
        log2_1p(self.sig[i] / self.noise[i])
    }

    pub fn r_min(&self, link: Link) -> f64 {
        let i = Self::idx(link);
        let jam = self.s.p_max * self.g_norm(link).powi(2);
        log2_1p(self.sig[i] / (jam + self.noise[i]))
    }

    pub fn rate_extremes(&self, link: Link) -> RateExtremes {
        let hat = match link {
            Link::One => self.g1_hat.as_ref(),
            Link::Two => self.g2_hat.as_ref(),
        };
        let w_min = match hat {
            Some(h) => Beamformer::new(h.scale_real(self.s.p_max.sqrt())),
            None => Beamformer::silent(self.s.nt()),
        };
        RateExtremes {
            r_min: self.r_min(link),
            r_max: self.r_max(link),
            w_min,
            unjammable: hat.is_none(),
        }
    }

    /// Clamps `r` into `[r_min, r_max]` when it is at most `tol_rate` outside.
    pub fn clamp_rate(&self, link: Link, r: f64) -> Result<f64> {
        let (lo, hi) = (self.r_min(link), self.r_max(link));
        let tol = self.cfg.tol_rate;
        if !r.is_finite() || r < lo - tol || r > hi + tol {
            return Err(Error::RateOutOfRange { link, rate: r, min: lo, max: hi });
        }
        Ok(r.clamp(lo, hi))
    }

    /// Jamming power that must arrive at Bob `link` to pin his rate to `r`,
    /// without a range check.
    fn phi_raw(&self, link: Link, r: f64) -> f64 {
        let i = Self::idx(link);
        if self.sig[i] == 0.0 {
            return 0.0;
        }
        let denom = (r * std::f64::consts::LN_2).exp_m1();
        let v = self.sig[i] / denom - self.noise[i];
        if v < 1e-12 * self.noise[i] {
            0.0
        } else {
            v
        }
    }

    /// Required received jamming power `φ(r)`, in `[0, P_max‖g_i‖²]`.
    pub fn phi(&self, link: Link, r: f64) -> Result<f64> {
        let r = self.clamp_rate(link, r)?;
        let cap = self.s.p_max * self.g_norm(link).powi(2);
        Ok(self.phi_raw(link, r).min(cap))
    }

    /// Smallest Bob-1 rate reachable without lowering Bob 2's rate.
    pub fn zf_threshold(&self) -> f64 {
        let b = self.g1_on_g2_perp.norm();
        log2_1p(self.sig[0] / (self.s.p_max * b * b + self.noise[0]))
    }

    /// Coefficients `(κ*, ι*)` of the upper-boundary solution: magnitudes
    /// along `ĝ₂` and `ĝ₂⊥`.
    pub fn upper_coefficients(&self, r1: f64) -> Result<(f64, f64)> {
        let phi = self.phi(Link::One, r1)?;
        let p = self.s.p_max;
        let a = self.g1_on_g2.norm();
        let b = self.g1_on_g2_perp.norm();

        if self.g1_hat.is_none() || phi == 0.0 {
            return Ok((0.0, 0.0));
        }
        if self.g2_hat.is_none() {
            // Bob 2 cannot be reached; any direction works, take MRT on g₁
            return Ok((0.0, (phi / (self.g1_norm * self.g1_norm)).sqrt()));
        }
        if self.collinear {
            let kappa = (phi.sqrt() / a).min(p.sqrt());
            return Ok((kappa, 0.0));
        }
        if phi <= p * b * b {
            return Ok((0.0, (phi / (b * b)).sqrt()));
        }
        let a0 = a * a + b * b;
        let disc = (a0 * p - phi).max(0.0);
        let big = (a * phi.sqrt() + b * disc.sqrt()) / a0;
        let kappa = if big > 0.0 { ((phi - b * b * p) / (a0 * big)).max(0.0) } else { 0.0 };
        let iota = (p - kappa * kappa).max(0.0).sqrt();
        Ok((kappa, iota))
    }

    /// Beamformer attaining the upper boundary point `(r1, f_max(r1))`.
    pub fn upper_boundary_beamformer(&self, r1: f64) -> Result<Beamformer> {
        let (kappa, iota) = self.upper_coefficients(r1)?;
        let nt = self.s.nt();
        let mut w = CVec::zeros(nt);
        if kappa > 0.0 {
            let dir = self.g2_hat.as_ref().expect("κ > 0 needs ĝ₂");
            w = &w + &dir.scale(unit_phase(self.g1_on_g2) * kappa);
        }
        if iota > 0.0 {
            if let Some(dir) = self.g2_perp.as_ref() {
                w = &w + &dir.scale(unit_phase(self.g1_on_g2_perp) * iota);
            } else if let Some(dir) = self.g1_hat.as_ref() {
                // only reached when g₂ = 0
                w = &w + &dir.scale_real(iota);
            }
        }
        Ok(Beamformer::new(w))
    }

    /// Upper boundary `f_max(r1)` from the closed form.
    pub fn f_max(&self, r1: f64) -> Result<f64> {
        let (kappa, _) = self.upper_coefficients(r1)?;
        Ok(rate_under_jamming(self.s, Link::Two, kappa * kappa * self.g2_norm * self.g2_norm))
    }

    /// Magnitudes `(|μ*|, |ν*|)` of the lower-boundary solution along `ĝ₁`
    /// and `ĝ₁⊥`.
    pub fn lower_coefficients(&self, r1: f64) -> Result<(f64, f64)> {
        let phi = self.phi(Link::One, r1)?;
        let p = self.s.p_max;
        if self.g1_hat.is_none() {
            // unjammable Bob 1: spend everything on Bob 2
            return Ok((0.0, p.sqrt()));
        }
        let mu = (phi / (self.g1_norm * self.g1_norm)).min(p).sqrt();
        let nu = if self.g1_perp.is_some() { (p - mu * mu).max(0.0).sqrt() } else { 0.0 };
        Ok((mu, nu))
    }

    /// Beamformer attaining the lower boundary point `(r1, f_min(r1))`.
    pub fn lower_boundary_beamformer(&self, r1: f64) -> Result<Beamformer> {
        let (mu, nu) = self.lower_coefficients(r1)?;
        let nt = self.s.nt();
        let Some(g1_hat) = self.g1_hat.as_ref() else {
            let w = self.g2_hat.as_ref().map_or_else(|| CVec::zeros(nt), |h| h.scale_real(nu));
            return Ok(Beamformer::new(w));
        };
        let mut w = g1_hat.scale(unit_phase(self.g2_on_g1) * mu);
        if let Some(perp) = self.g1_perp.as_ref() {
            w = &w + &perp.scale(unit_phase(self.g2_on_g1_perp) * nu);
        }
        Ok(Beamformer::new(w))
    }

    /// Lower boundary `f_min(r1)` from the closed form.
    pub fn f_min(&self, r1: f64) -> Result<f64> {
        let (mu, nu) = self.lower_coefficients(r1)?;
        let leak = mu * self.g2_on_g1.norm() + nu * self.g2_on_g1_perp.norm();
        Ok(rate_under_jamming(self.s, Link::Two, leak * leak))
    }

    /// Least-power beamformer achieving `target` exactly.
    ///
    /// The component along `ĝ₁⊥` is a signed magnitude: when the `ĝ₁` part
    /// alone already delivers more than `φ₂(r2)` at Bob 2, it points opposite
    /// to `g₂ᴴĝ₁⊥` to cancel the excess.
    pub fn min_power_beamformer(&self, target: RatePair) -> Result<Beamformer> {
        let r1 = self.clamp_rate(Link::One, target.r1).map_err(|_| Error::OutsideRegion {
            r1: target.r1,
            r2: target.r2,
            boundary: format!(
                "r1 outside [{}, {}]",
                self.r_min(Link::One),
                self.r_max(Link::One)
            ),
        })?;
        let lo = self.f_min(r1)?;
        let hi = self.f_max(r1)?;
        let tol = self.cfg.tol_rate;
        if !(target.r2.is_finite() && target.r2 >= lo - tol) {
            return Err(Error::OutsideRegion {
                r1: target.r1,
                r2: target.r2,
                boundary: format!("below lower boundary f_min = {lo}"),
            });
        }
        if target.r2 > hi + tol {
            return Err(Error::OutsideRegion {
                r1: target.r1,
                r2: target.r2,
                boundary: format!("above upper boundary f_max = {hi}"),
            });
        }
        let r2 = target.r2.clamp(lo, hi.max(lo));
        let nt = self.s.nt();
        let phi1 = self.phi(Link::One, r1)?;
        let phi2 = self.phi_raw(Link::Two, r2);

        let Some(g1_hat) = self.g1_hat.as_ref() else {
            let w = match self.g2_hat.as_ref() {
                Some(h) => h.scale_real(phi2.sqrt() / self.g2_norm),
                None => CVec::zeros(nt),
            };
            return Ok(Beamformer::new(w));
        };
        let e1 = (phi1 / (self.g1_norm * self.g1_norm)).sqrt();
        let mut w = g1_hat.scale(unit_phase(self.g2_on_g1) * e1);
        if let Some(perp) = self.g1_perp.as_ref() {
            let c = self.g2_on_g1.norm();
            let d = self.g2_on_g1_perp.norm();
            let e2 = (phi2.sqrt() - e1 * c) / d;
            w = &w + &perp.scale(unit_phase(self.g2_on_g1_perp) * e2);
        }
        Ok(Beamformer::new(w))
    }

    /// Bob-1 rate grid for boundary sweeps: `n` uniform samples of
    /// `[r1_min, r1_max]` plus the ZF kink when it lies strictly inside.
    pub fn r1_grid(&self, n: usize) -> Vec<f64> {
        let lo = self.r_min(Link::One);
        let hi = self.r_max(Link::One);
        if hi - lo <= 0.0 {
            return vec![hi];
        }
        let mut grid: Vec<f64> = (0..n)
            .map(|k| if k + 1 == n { hi } else { lo + (hi - lo) * k as f64 / (n - 1) as f64 })
            .collect();
        let zf = self.zf_threshold();
        if zf > lo && zf < hi && !grid.contains(&zf) {
            grid.push(zf);
            grid.sort_by(f64::total_cmp);
        }
        grid
    }
}

/// Extreme rates of `link` (see [`Jammer::rate_extremes`]).
pub fn rate_extremes(s: &Scenario, link: Link) -> RateExtremes {
    Jammer::new(s, SweepConfig::default()).rate_extremes(link)
}

pub fn phi(s: &Scenario, link: Link, r: f64) -> Result<f64> {
    Jammer::new(s, SweepConfig::default()).phi(link, r)
}

pub fn zf_threshold(s: &Scenario) -> f64 {
    Jammer::new(s, SweepConfig::default()).zf_threshold()
}

pub fn upper_boundary_beamformer(s: &Scenario, r1: f64) -> Result<Beamformer> {
    Jammer::new(s, SweepConfig::default()).upper_boundary_beamformer(r1)
}

pub fn lower_boundary_beamformer(s: &Scenario, r1: f64) -> Result<Beamformer> {
    Jammer::new(s, SweepConfig::default()).lower_boundary_beamformer(r1)
}

pub fn min_power_beamformer(s: &Scenario, target: RatePair) -> Result<Beamformer> {
    Jammer::new(s, SweepConfig::default()).min_power_beamformer(target)
}

/// Jamming restricted to the null space of the loopback channel `H_ee`.
#[derive(Clone, Debug)]
pub struct NullSpaceJammer {
    /// Scenario with `g̃_i = Vᴴ g_i` and a zero loopback of matching width.
    pub reduced: Scenario,
    /// Orthonormal null-space basis `V` (`N_t × (N_t − rank)`).
    pub basis: CMat,
}

impl NullSpaceJammer {
    /// Maps a reduced-space beamformer `w̄` to `w = V w̄`.
    pub fn lift(&self, reduced: &Beamformer) -> Result<Beamformer> {
        Ok(Beamformer::new(self.basis.mul_vec(&reduced.w)?))
    }
}

pub fn null_space_jammer_transform(s: &Scenario) -> Result<NullSpaceJammer> {
    let nt = s.nt();
    let basis = if s.hee.frobenius() == 0.0 {
        CMat::identity(nt)
    } else {
        null_space_basis(&s.hee)
    };
    if basis.cols() == 0 {
        return Err(Error::NullSpaceUnavailable { nt, rank: linalg::rank(&s.hee) });
    }
    let vh = basis.adjoint();
    let reduced = s.with_jam_channels(vh.mul_vec(&s.g1)?, vh.mul_vec(&s.g2)?)?;
    Ok(NullSpaceJammer { reduced, basis })
}
