//! Region computation shared by `region` and `montecarlo`.

use jamregion::rates::{mmse_eaves_rate, Link, RatePair};
use jamregion::region::{
    achieving_set, convex_hull_region, intersect, mmse_rectangle, si_lowerbound_rectangle, sic_corners, sic_region,
    suspicious_nullspace_region, suspicious_region, RateRegion,
};
use jamregion::{Result, Scenario, SweepConfig};
use serde::Serialize;

use crate::args::{Receiver, RegionOpts, Toggle};

/// Interior min-power targets added to boundary sweeps when building the
/// self-interference achieving set.
const SI_INTERIOR: usize = 4;

pub struct Regions {
    pub raw: RateRegion,
    pub hull: Option<RateRegion>,
    pub eaves: RateRegion,
    pub intersection: RateRegion,
    pub summary: Summary,
}

impl Regions {
    pub fn all(&self) -> Vec<&RateRegion> {
        let mut out = vec![&self.raw];
        out.extend(&self.hull);
        out.push(&self.eaves);
        out.push(&self.intersection);
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub area_suspicious: f64,
    pub area_eaves: f64,
    pub area_intersection: f64,
    pub intersection_empty: bool,
    pub r1e_mmse: f64,
    pub r2e_mmse: f64,
    pub sic_a_r1: f64,
    pub sic_a_r2: f64,
    pub sic_b_r1: f64,
    pub sic_b_r2: f64,
    /// Mean gain of the two SIC corners over the MMSE corner.
    pub sic_gap: f64,
}

impl Summary {
    pub const FIELDS: [&'static str; 11] = [
        "area_suspicious",
        "area_eaves",
        "area_intersection",
        "intersection_empty",
        "r1e_mmse",
        "r2e_mmse",
        "sic_a_r1",
        "sic_a_r2",
        "sic_b_r1",
        "sic_b_r2",
        "sic_gap",
    ];

    pub fn values(&self) -> [f64; 11] {
        [
            self.area_suspicious,
            self.area_eaves,
            self.area_intersection,
            if self.intersection_empty { 1.0 } else { 0.0 },
            self.r1e_mmse,
            self.r2e_mmse,
            self.sic_a_r1,
            self.sic_a_r2,
            self.sic_b_r1,
            self.sic_b_r2,
            self.sic_gap,
        ]
    }
}

pub fn compute(s: &Scenario, opts: &RegionOpts) -> Result<Regions> {
    let cfg = SweepConfig { n_samples: opts.samples, ..SweepConfig::default() };
    let mut s = s.clone();
    if let Some(rho) = opts.si {
        s.rho = rho;
    }
    s.validate()?;

    let (raw, set) = if opts.null_space {
        let ns = suspicious_nullspace_region(&s, &cfg, SI_INTERIOR)?;
        (ns.region, Some(ns.achieving_set))
    } else {
        (suspicious_region(&s, &cfg)?, None)
    };
    let hull = (opts.time_sharing == Toggle::On).then(|| convex_hull_region(&raw));

    let eaves = match (opts.si, opts.receiver) {
        (Some(_), _) => {
            let set = match set {
                Some(set) => set,
                None => achieving_set(&s, &cfg, SI_INTERIOR)?,
            };
            si_lowerbound_rectangle(&s, &set)?
        }
        (None, Receiver::Mmse) => mmse_rectangle(&s),
        (None, Receiver::MmseSic) => sic_region(&s),
    };

    let suspicious = hull.as_ref().unwrap_or(&raw);
    let intersection = intersect(suspicious, &eaves);
    let summary = summarize(&s, suspicious, &eaves, &intersection);
    Ok(Regions { raw, hull, eaves, intersection, summary })
}

fn summarize(s: &Scenario, suspicious: &RateRegion, eaves: &RateRegion, x: &RateRegion) -> Summary {
    let mmse = RatePair::new(mmse_eaves_rate(s, Link::One), mmse_eaves_rate(s, Link::Two));
    let (a, b) = sic_corners(s);
    Summary {
        area_suspicious: suspicious.area(),
        area_eaves: eaves.area(),
        area_intersection: x.area(),
        intersection_empty: x.is_empty(),
        r1e_mmse: mmse.r1,
        r2e_mmse: mmse.r2,
        sic_a_r1: a.r1,
        sic_a_r2: a.r2,
        sic_b_r1: b.r1,
        sic_b_r2: b.r2,
        sic_gap: 0.5 * ((a.r1 - mmse.r1) + (b.r2 - mmse.r2)),
    }
}
