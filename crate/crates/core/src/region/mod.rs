//! Rate regions: the suspicious region traced by jamming, the monitor's
//! eavesdropping regions for each receiver type, and their intersections.
//!
//! The suspicious region is stored as paired upper/lower boundary samples
//! over a shared Bob-1 rate grid; every vertical segment between them is
//! achievable. Hulls, rectangles and clipped regions carry a polygon.

pub mod csv;
pub mod polygon;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jammer::{null_space_jammer_transform, Beamformer, Jammer, NullSpaceJammer, SweepConfig};
use crate::rates::{mmse_eaves_rate, si_eaves_rate, sic_rates, DecodingOrder, Link, RatePair};
use crate::scenario::Scenario;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    SuspiciousRaw,
    SuspiciousHulled,
    EavesMmse,
    EavesSic,
    EavesSicHulled,
    Intersection,
    SuspiciousNullspace,
    EavesSiLowerbound,
}

impl RegionKind {
    pub const ALL: [RegionKind; 8] = [
        RegionKind::SuspiciousRaw,
        RegionKind::SuspiciousHulled,
        RegionKind::EavesMmse,
        RegionKind::EavesSic,
        RegionKind::EavesSicHulled,
        RegionKind::Intersection,
        RegionKind::SuspiciousNullspace,
        RegionKind::EavesSiLowerbound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RegionKind::SuspiciousRaw => "suspicious_raw",
            RegionKind::SuspiciousHulled => "suspicious_hulled",
            RegionKind::EavesMmse => "eaves_mmse",
            RegionKind::EavesSic => "eaves_sic",
            RegionKind::EavesSicHulled => "eaves_sic_hulled",
            RegionKind::Intersection => "intersection",
            RegionKind::SuspiciousNullspace => "suspicious_nullspace",
            RegionKind::EavesSiLowerbound => "eaves_si_lowerbound",
        }
    }

    pub fn parse(name: &str) -> Option<RegionKind> {
        RegionKind::ALL.into_iter().find(|k| k.as_str() == name)
    }

    /// Regions traced by jamming (as opposed to receiver capability).
    pub fn is_suspicious(self) -> bool {
        matches!(
            self,
            RegionKind::SuspiciousRaw | RegionKind::SuspiciousHulled | RegionKind::SuspiciousNullspace
        )
    }
}

impl std::fmt::Display for RegionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sampled rate region.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    pub kind: RegionKind,
    /// Upper boundary samples, `r1` strictly increasing.
    pub upper: Vec<RatePair>,
    /// Lower boundary samples on the same grid as `upper`.
    pub lower: Vec<RatePair>,
    /// Counterclockwise polygon for hulled, rectangular and clipped regions.
    pub vertices: Option<Vec<RatePair>>,
}

impl RateRegion {
    fn from_boundaries(kind: RegionKind, upper: Vec<RatePair>, lower: Vec<RatePair>) -> Self {
        RateRegion { kind, upper, lower, vertices: None }
    }

    pub fn from_polygon(kind: RegionKind, mut vertices: Vec<RatePair>) -> Self {
        if polygon::signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        RateRegion { kind, upper: Vec::new(), lower: Vec::new(), vertices: Some(vertices) }
    }

    fn rectangle(kind: RegionKind, corner: RatePair) -> Self {
        let vertices = vec![
            RatePair::ORIGIN,
            RatePair::new(corner.r1, 0.0),
            corner,
            RatePair::new(0.0, corner.r2),
        ];
        RateRegion { kind, upper: Vec::new(), lower: Vec::new(), vertices: Some(vertices) }
    }

    pub fn is_empty(&self) -> bool {
        match &self.vertices {
            Some(v) => v.is_empty(),
            None => self.upper.is_empty(),
        }
    }

    /// Closed outline: the polygon if present, otherwise the upper boundary
    /// forward followed by the lower boundary reversed.
    pub fn outline(&self) -> Vec<RatePair> {
        if let Some(v) = &self.vertices {
            return v.clone();
        }
        let mut out: Vec<RatePair> = self.upper.clone();
        out.extend(self.lower.iter().rev().copied());
        out.dedup();
        while out.len() > 1 && out[0] == out[out.len() - 1] {
            out.pop();
        }
        out
    }

    /// Shoelace area of the outline.
    pub fn area(&self) -> f64 {
        polygon::area(&self.outline())
    }

    /// Every point the region is built from: boundary samples or vertices.
    pub fn points(&self) -> Vec<RatePair> {
        match &self.vertices {
            Some(v) => v.clone(),
            None => self.upper.iter().chain(self.lower.iter()).copied().collect(),
        }
    }

    /// Membership within `tol`. Boundary-sampled regions interpolate both
    /// boundaries linearly in `r1`.
    pub fn contains(&self, p: &RatePair, tol: f64) -> bool {
        if let Some(v) = &self.vertices {
            return polygon::contains(v, p, tol);
        }
        let (up, lo) = (&self.upper, &self.lower);
        if up.is_empty() {
            return false;
        }
        let (first, last) = (up[0].r1, up[up.len() - 1].r1);
        if p.r1 < first - tol || p.r1 > last + tol {
            return false;
        }
        if up.len() == 1 {
            return p.r2 >= lo[0].r2 - tol && p.r2 <= up[0].r2 + tol;
        }
        let x = p.r1.clamp(first, last);
        let hi = interpolate(up, x);
        let low = interpolate(lo, x);
        if p.r2 >= low - tol && p.r2 <= hi + tol {
            return true;
        }
        // a steep boundary can pass within tol of p horizontally
        polygon::boundary_distance(&self.outline(), p) <= tol
    }

    /// Smallest axis-aligned box `(min, max)` containing the region.
    pub fn bounding_box(&self) -> Option<(RatePair, RatePair)> {
        let pts = self.points();
        let first = *pts.first()?;
        Some(pts.iter().fold((first, first), |(lo, hi), p| {
            (
                RatePair::new(lo.r1.min(p.r1), lo.r2.min(p.r2)),
                RatePair::new(hi.r1.max(p.r1), hi.r2.max(p.r2)),
            )
        }))
    }
}

fn interpolate(samples: &[RatePair], x: f64) -> f64 {
    let k = samples.partition_point(|p| p.r1 < x);
    if k == 0 {
        return samples[0].r2;
    }
    if k == samples.len() {
        return samples[k - 1].r2;
    }
    let (a, b) = (samples[k - 1], samples[k]);
    if b.r1 == a.r1 {
        return a.r2.max(b.r2);
    }
    let t = (x - a.r1) / (b.r1 - a.r1);
    a.r2 + t * (b.r2 - a.r2)
}

/// A point reached by splitting the block between two beamformers.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSharePoint {
    pub tau: f64,
    pub endpoints: [(RatePair, Beamformer); 2],
}

impl TimeSharePoint {
    pub fn new(tau: f64, a: (RatePair, Beamformer), b: (RatePair, Beamformer)) -> Result<Self> {
        if !(0.0..=1.0).contains(&tau) {
            return Err(Error::OutsideBracket(tau));
        }
        Ok(TimeSharePoint { tau, endpoints: [a, b] })
    }

    /// `τ·A + (1 − τ)·B`.
    pub fn achieved(&self) -> RatePair {
        self.endpoints[0].0.lerp(&self.endpoints[1].0, self.tau)
    }
}

/// Boundary sweep: the raw region plus the beamformers tracing it.
#[derive(Clone, Debug)]
pub struct SuspiciousSweep {
    pub region: RateRegion,
    pub upper_beamformers: Vec<Beamformer>,
    pub lower_beamformers: Vec<Beamformer>,
}

pub fn suspicious_sweep(s: &Scenario, cfg: &SweepConfig) -> Result<SuspiciousSweep> {
    cfg.validate()?;
    s.validate()?;
    sweep_kind(s, cfg, RegionKind::SuspiciousRaw)
}

fn sweep_kind(s: &Scenario, cfg: &SweepConfig, kind: RegionKind) -> Result<SuspiciousSweep> {
    let jammer = Jammer::new(s, *cfg);
    let grid = jammer.r1_grid(cfg.n_samples);
    let samples: Vec<(RatePair, Beamformer, RatePair, Beamformer)> = grid
        .par_iter()
        .map(|&r1| {
            let up = jammer.upper_boundary_beamformer(r1)?;
            let lo = jammer.lower_boundary_beamformer(r1)?;
            Ok((
                RatePair::new(r1, jammer.f_max(r1)?),
                up,
                RatePair::new(r1, jammer.f_min(r1)?),
                lo,
            ))
        })
        .collect::<Result<_>>()?;
    let mut upper = Vec::with_capacity(samples.len());
    let mut lower = Vec::with_capacity(samples.len());
    let mut upper_bf = Vec::with_capacity(samples.len());
    let mut lower_bf = Vec::with_capacity(samples.len());
    for (u, ub, l, lb) in samples {
        upper.push(u);
        upper_bf.push(ub);
        lower.push(l);
        lower_bf.push(lb);
    }
    Ok(SuspiciousSweep {
        region: RateRegion::from_boundaries(kind, upper, lower),
        upper_beamformers: upper_bf,
        lower_beamformers: lower_bf,
    })
}

/// Suspicious rate region without time-sharing.
pub fn suspicious_region(s: &Scenario, cfg: &SweepConfig) -> Result<RateRegion> {
    Ok(suspicious_sweep(s, cfg)?.region)
}

/// Convex hull of every boundary sample (time-sharing between beamformers).
pub fn convex_hull_region(r: &RateRegion) -> RateRegion {
    let kind = match r.kind {
        RegionKind::EavesSic | RegionKind::EavesSicHulled => RegionKind::EavesSicHulled,
        _ => RegionKind::SuspiciousHulled,
    };
    RateRegion::from_polygon(kind, polygon::convex_hull(&r.points()))
}

/// `[0, R₁ᴱ] × [0, R₂ᴱ]` for a linear MMSE receiver.
pub fn mmse_rectangle(s: &Scenario) -> RateRegion {
    let corner = RatePair::new(mmse_eaves_rate(s, Link::One), mmse_eaves_rate(s, Link::Two));
    RateRegion::rectangle(RegionKind::EavesMmse, corner)
}

/// SIC corner points `(A, B)`: A decodes link 2 first, B decodes link 1 first.
pub fn sic_corners(s: &Scenario) -> (RatePair, RatePair) {
    (sic_rates(s, DecodingOrder::TWO_FIRST), sic_rates(s, DecodingOrder::ONE_FIRST))
}

/// Eavesdropping rectangle for one fixed SIC decoding order.
pub fn sic_order_rectangle(s: &Scenario, order: DecodingOrder) -> RateRegion {
    RateRegion::rectangle(RegionKind::EavesSic, sic_rates(s, order))
}

/// Convex hull of both SIC decoding-order rectangles.
pub fn sic_region(s: &Scenario) -> RateRegion {
    let (a, b) = sic_corners(s);
    let pts = [
        RatePair::ORIGIN,
        RatePair::new(a.r1, 0.0),
        a,
        b,
        RatePair::new(0.0, b.r2),
        RatePair::new(b.r1, 0.0),
        RatePair::new(0.0, a.r2),
    ];
    let hull = polygon::convex_hull(&pts);
    RateRegion::from_polygon(RegionKind::EavesSicHulled, hull)
}

/// Fraction `ς` of the slot decoded link-1-first that reaches Bob-1 rate
/// `r1e` on segment AB; `ς = 0` at A and `ς = 1` at B.
pub fn sic_time_share(s: &Scenario, r1e: f64) -> Result<f64> {
    let (a, b) = sic_corners(s);
    let width = a.r1 - b.r1;
    let slack = 1e-12 * a.r1.abs().max(1.0);
    if !r1e.is_finite() || r1e < b.r1.min(a.r1) - slack || r1e > a.r1.max(b.r1) + slack {
        return Err(Error::OutsideBracket(r1e));
    }
    if width <= f64::EPSILON * a.r1.abs().max(1.0) {
        return Ok(0.0);
    }
    Ok(((a.r1 - r1e) / width).clamp(0.0, 1.0))
}

/// Decoding-order factor for an eavesdropping target `z`: 0 inside the
/// link-1-first rectangle, `ς(z.r1)` in the triangle under segment AB,
/// 1 in the remaining part of the link-2-first rectangle.
pub fn decode_order_factor(s: &Scenario, z: RatePair) -> Result<f64> {
    const TOL: f64 = 1e-9;
    if !sic_region(s).contains(&z, TOL) {
        return Err(Error::OutsideEavesRegion { r1: z.r1, r2: z.r2 });
    }
    let (a, b) = sic_corners(s);
    let in_rect = |c: &RatePair| z.r1 <= c.r1 + TOL && z.r2 <= c.r2 + TOL;
    if in_rect(&b) {
        return Ok(0.0);
    }
    let triangle = [b, RatePair::new(b.r1, a.r2), a];
    if polygon::contains(&triangle, &z, TOL) {
        return sic_time_share(s, z.r1.clamp(b.r1.min(a.r1), a.r1.max(b.r1)));
    }
    Ok(1.0)
}

/// Clips suspicious region `a` against eavesdropping polygon `b`.
pub fn intersect(a: &RateRegion, b: &RateRegion) -> RateRegion {
    let subject = a.outline();
    let clip = match &b.vertices {
        Some(v) => v.clone(),
        None => polygon::convex_hull(&b.points()),
    };
    RateRegion::from_polygon(RegionKind::Intersection, polygon::clip_convex(&subject, &clip))
}

/// Rectangle of the least eavesdropping rates over an achieving set when
/// self-interference leaks into the monitor's receiver.
pub fn si_lowerbound_rectangle(s: &Scenario, achieving_set: &[Beamformer]) -> Result<RateRegion> {
    if achieving_set.is_empty() {
        return Err(Error::EmptyAchievingSet);
    }
    let rates: Vec<RatePair> = achieving_set
        .par_iter()
        .map(|w| {
            let q = w.covariance();
            Ok(RatePair::new(si_eaves_rate(s, &q, Link::One)?, si_eaves_rate(s, &q, Link::Two)?))
        })
        .collect::<Result<_>>()?;
    let corner = rates.iter().fold(RatePair::new(f64::INFINITY, f64::INFINITY), |m, r| {
        RatePair::new(m.r1.min(r.r1), m.r2.min(r.r2))
    });
    Ok(RateRegion::rectangle(RegionKind::EavesSiLowerbound, corner))
}

/// Beamformers tracing the region: both boundary sweeps plus the
/// minimum-power solver at `interior × interior` grid points between them.
pub fn achieving_set(s: &Scenario, cfg: &SweepConfig, interior: usize) -> Result<Vec<Beamformer>> {
    let sweep = suspicious_sweep(s, cfg)?;
    let jammer = Jammer::new(s, *cfg);
    let mut set = sweep.upper_beamformers;
    set.extend(sweep.lower_beamformers);
    if interior > 0 {
        let coarse = jammer.r1_grid(interior.max(2));
        let inner: Vec<Beamformer> = coarse
            .par_iter()
            .flat_map_iter(|&r1| {
                let lo = jammer.f_min(r1).unwrap_or(f64::NAN);
                let hi = jammer.f_max(r1).unwrap_or(f64::NAN);
                let jammer = &jammer;
                (1..=interior).filter_map(move |k| {
                    let r2 = lo + (hi - lo) * k as f64 / (interior + 1) as f64;
                    jammer.min_power_beamformer(RatePair::new(r1, r2)).ok()
                })
            })
            .collect();
        set.extend(inner);
    }
    Ok(set)
}

/// Suspicious region reachable with jamming confined to the null space of
/// the loopback channel.
#[derive(Clone, Debug)]
pub struct NullSpaceRegion {
    pub region: RateRegion,
    pub transform: NullSpaceJammer,
    /// Lifted full-dimension beamformers tracing the region.
    pub achieving_set: Vec<Beamformer>,
}

pub fn suspicious_nullspace_region(s: &Scenario, cfg: &SweepConfig, interior: usize) -> Result<NullSpaceRegion> {
    cfg.validate()?;
    s.validate()?;
    let transform = null_space_jammer_transform(s)?;
    let region = sweep_kind(&transform.reduced, cfg, RegionKind::SuspiciousNullspace)?.region;
    let reduced_set = achieving_set(&transform.reduced, cfg, interior)?;
    let achieving_set = reduced_set.iter().map(|w| transform.lift(w)).collect::<Result<_>>()?;
    Ok(NullSpaceRegion { region, transform, achieving_set })
}
