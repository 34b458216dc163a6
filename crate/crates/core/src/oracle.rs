//! Brute-force searches that re-derive each closed form.
//!
//! The searches share no code with [`crate::jammer`]: they recompute the
//! required jamming power, parametrize beamformers by magnitudes and a
//! relative phase in the span of the two jamming channels, and scan grids
//! refined by bisection. [`oracle_rank1_check`] additionally probes
//! rank-two covariances in the full transmit space.

use std::f64::consts::{LN_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jammer::{Beamformer, Jammer, SweepConfig};
use crate::linalg::{inner, project_complement, CMat, CVec, C64};
use crate::rates::{suspicious_rate, Link, RatePair};
use crate::scenario::Scenario;

/// Default rate gap in bits/s/Hz.
pub const TOL_RATE: f64 = 1e-4;
/// Default relative power gap.
pub const TOL_POWER: f64 = 0.01;
/// Phase grid size for the boundary searches; includes 0 and π.
const PHASES: usize = 16;
const BISECT_STEPS: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_gap: f64,
    pub tolerance: f64,
    pub n_probes: usize,
    pub verdict: Verdict,
    /// Factor vectors (`[re, im]` entries) of the worst probe, on failure.
    pub counterexample: Option<Vec<Vec<[f64; 2]>>>,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, closed_form: f64, oracle: f64, abs_gap: f64, tolerance: f64, n_probes: usize) -> Self {
        let verdict = if abs_gap <= tolerance { Verdict::Pass } else { Verdict::Fail };
        OracleReport {
            quantity: quantity.into(),
            closed_form,
            oracle,
            abs_gap,
            tolerance,
            n_probes,
            verdict,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

fn encode(vectors: &[CVec]) -> Vec<Vec<[f64; 2]>> {
    vectors.iter().map(|v| v.entries().iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// Signal power, effective noise and jamming-channel norm of one link.
struct LinkTerms {
    sig: f64,
    noise: f64,
}

impl LinkTerms {
    fn of(s: &Scenario, link: Link) -> Self {
        let (hii, hji, p, pj, n) = match link {
            Link::One => (s.h11, s.h21, s.p1, s.p2, s.sigma1_sq),
            Link::Two => (s.h22, s.h12, s.p2, s.p1, s.sigma2_sq),
        };
        LinkTerms { sig: p * hii.norm_sqr(), noise: pj * hji.norm_sqr() + n }
    }

    fn rate(&self, jam: f64) -> f64 {
        (1.0 + self.sig / (jam + self.noise)).log2()
    }

    /// Jamming power pinning the rate to `r`, or `None` above the
    /// jamming-free rate.
    fn required_jam(&self, r: f64) -> Option<f64> {
        if self.sig == 0.0 {
            return Some(0.0);
        }
        let v = self.sig / (r * LN_2).exp_m1() - self.noise;
        if v >= 0.0 {
            Some(v)
        } else if v >= -1e-9 * self.noise {
            Some(0.0)
        } else {
            None
        }
    }
}

/// Required Bob-1 jamming power for `r1`, checked against the budget.
fn bob1_constraint(s: &Scenario, r1: f64) -> Result<f64> {
    let bob1 = LinkTerms::of(s, Link::One);
    let cap = s.p_max * s.g1.norm_sq();
    let infeasible = || Error::RateOutOfRange {
        link: Link::One,
        rate: r1,
        min: bob1.rate(cap),
        max: bob1.rate(0.0),
    };
    if !r1.is_finite() {
        return Err(infeasible());
    }
    let phi = bob1.required_jam(r1).ok_or_else(infeasible)?;
    if phi > cap * (1.0 + 1e-9) + 1e-300 {
        return Err(infeasible());
    }
    Ok(phi.min(cap))
}

fn check_grid(n_grid: usize) -> Result<()> {
    if n_grid < 100 {
        return Err(Error::InvalidParameter(format!("n_grid must be >= 100, got {n_grid}")));
    }
    Ok(())
}

/// Geometry of the reduced search: `w = κ ĝ₂ + ι e^{jδ} u` with `u` the
/// unit complement of `g₁` against `ĝ₂`, so that Bob 1 receives
/// `κ²a² + ι²b² + 2κιab·cos δ` and Bob 2 receives `κ²‖g₂‖²`.
struct ReducedBoundary {
    a: f64,
    b: f64,
    phi: f64,
    p: f64,
}

impl ReducedBoundary {
    /// Smallest `ι ≥ 0` meeting the Bob-1 equality, ignoring the budget.
    fn iota(&self, kappa: f64, cos_d: f64) -> Option<f64> {
        let (a, b, phi) = (self.a, self.b, self.phi);
        let sin2 = (1.0 - cos_d * cos_d).max(0.0);
        let disc = phi - kappa * kappa * a * a * sin2;
        let slack = 1e-12 * phi.max(kappa * kappa * a * a);
        if disc < -slack {
            return None;
        }
        let root = disc.max(0.0).sqrt();
        let lo = (-kappa * a * cos_d - root) / b;
        let hi = (-kappa * a * cos_d + root) / b;
        if lo >= 0.0 {
            Some(lo)
        } else if hi >= -1e-12 * (kappa + 1.0) {
            Some(hi.max(0.0))
        } else {
            None
        }
    }

    fn feasible(&self, kappa: f64, cos_d: f64) -> bool {
        self.iota(kappa, cos_d)
            .is_some_and(|iota| kappa * kappa + iota * iota <= self.p * (1.0 + 1e-12))
    }

    /// `κ` of least transmit power along the constraint curve, by golden
    /// section over the interval where a nonnegative `ι` exists.
    fn least_power_kappa(&self, cos_d: f64) -> f64 {
        let sin = (1.0 - cos_d * cos_d).max(0.0).sqrt();
        let reach = if cos_d >= 0.0 { 1.0 } else { sin };
        let mut hi = self.p.sqrt();
        if self.a * reach > 0.0 {
            hi = hi.min(self.phi.sqrt() / (self.a * reach));
        }
        let power = |k: f64| self.iota(k, cos_d).map_or(f64::INFINITY, |i| k * k + i * i);
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let mut lo = 0.0;
        for _ in 0..200 {
            let m1 = hi - ratio * (hi - lo);
            let m2 = lo + ratio * (hi - lo);
            if power(m1) <= power(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        0.5 * (lo + hi)
    }

    fn bisect(&self, mut bad: f64, mut good: f64, cos_d: f64) -> f64 {
        for _ in 0..BISECT_STEPS {
            let mid = 0.5 * (bad + good);
            if self.feasible(mid, cos_d) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    }

    /// Extreme feasible `κ` along a fixed phase: smallest if `minimize`.
    fn extreme_kappa(&self, cos_d: f64, n_grid: usize, minimize: bool) -> Option<f64> {
        let top = self.p.sqrt();
        let at = |k: usize| top * k as f64 / (n_grid - 1) as f64;
        let order: Box<dyn Iterator<Item = usize>> =
            if minimize { Box::new(0..n_grid) } else { Box::new((0..n_grid).rev()) };
        let mut prev: Option<usize> = None;
        for k in order {
            if self.feasible(at(k), cos_d) {
                return Some(match prev {
                    None => at(k),
                    Some(outside) => self.bisect(at(outside), at(k), cos_d),
                });
            }
            prev = Some(k);
        }
        // feasible set narrower than the grid step: start from its centre
        let centre = self.least_power_kappa(cos_d);
        if !self.feasible(centre, cos_d) {
            return None;
        }
        Some(self.bisect(if minimize { 0.0 } else { top }, centre, cos_d))
    }
}

fn boundary_search(s: &Scenario, r1: f64, n_grid: usize, minimize_kappa: bool) -> Result<f64> {
    check_grid(n_grid)?;
    s.validate()?;
    let phi = bob1_constraint(s, r1)?;
    let bob2 = LinkTerms::of(s, Link::Two);
    let g2_sq = s.g2.norm_sq();
    let p = s.p_max;
    if g2_sq == 0.0 {
        return Ok(bob2.rate(0.0));
    }
    let g1_norm = s.g1.norm();
    if g1_norm == 0.0 {
        let kappa_sq = if minimize_kappa { 0.0 } else { p };
        return Ok(bob2.rate(kappa_sq * g2_sq));
    }
    let g2_hat = s.g2.scale_real(1.0 / g2_sq.sqrt());
    let a = inner(&s.g1, &g2_hat)?.norm();
    let b = project_complement(&s.g1, &g2_hat)?.norm();
    if b <= 1e-9 * g1_norm {
        // g₁ ∥ g₂: the Bob-1 equality fixes κ
        let kappa_sq = phi / (a * a);
        if kappa_sq > p * (1.0 + 1e-9) {
            return Err(Error::RateOutOfRange { link: Link::One, rate: r1, min: f64::NAN, max: f64::NAN });
        }
        return Ok(bob2.rate(kappa_sq.min(p) * g2_sq));
    }
    let reduced = ReducedBoundary { a, b, phi, p };
    let mut best: Option<f64> = None;
    for k in 0..PHASES {
        let cos_d = (TAU * k as f64 / PHASES as f64).cos();
        if let Some(kappa) = reduced.extreme_kappa(cos_d, n_grid, minimize_kappa) {
            best = Some(match best {
                None => kappa,
                Some(b) if minimize_kappa => b.min(kappa),
                Some(b) => b.max(kappa),
            });
        }
    }
    let kappa = best.ok_or(Error::RateOutOfRange { link: Link::One, rate: r1, min: f64::NAN, max: f64::NAN })?;
    Ok(bob2.rate(kappa * kappa * g2_sq))
}

/// Largest Bob-2 rate compatible with Bob-1 rate `r1`, by search.
pub fn oracle_f_max(s: &Scenario, r1: f64, n_grid: usize) -> Result<f64> {
    boundary_search(s, r1, n_grid, true)
}

/// Smallest Bob-2 rate compatible with Bob-1 rate `r1`, by search.
pub fn oracle_f_min(s: &Scenario, r1: f64, n_grid: usize) -> Result<f64> {
    boundary_search(s, r1, n_grid, false)
}

/// Least transmit power meeting both target rates, by search over the
/// magnitude along `ĝ₁` (fixed by Bob 1) and a relative phase grid for the
/// component orthogonal to it.
pub fn oracle_min_power(s: &Scenario, target: RatePair, n_grid: usize) -> Result<f64> {
    check_grid(n_grid)?;
    s.validate()?;
    let infeasible = || Error::OutsideRegion { r1: target.r1, r2: target.r2, boundary: "no feasible beamformer".into() };
    let phi1 = bob1_constraint(s, target.r1)?;
    let phi2 = LinkTerms::of(s, Link::Two).required_jam(target.r2).ok_or_else(infeasible)?;
    let p = s.p_max;
    let budget = p * (1.0 + 1e-6) + 1e-300;
    let (g1_sq, g2_sq) = (s.g1.norm_sq(), s.g2.norm_sq());

    let power = if g1_sq == 0.0 {
        if g2_sq == 0.0 {
            if phi2 > 0.0 {
                return Err(infeasible());
            }
            0.0
        } else {
            phi2 / g2_sq
        }
    } else {
        let g1_hat = s.g1.scale_real(1.0 / g1_sq.sqrt());
        let x = (phi1 / g1_sq).sqrt();
        let c = inner(&s.g2, &g1_hat)?.norm();
        let d = project_complement(&s.g2, &g1_hat)?.norm();
        let tol2 = 1e-9 * phi2.max(x * x * c * c).max(1e-300);
        if d <= 1e-9 * g2_sq.sqrt() {
            if (x * x * c * c - phi2).abs() > tol2.max(1e-6 * phi2) {
                return Err(infeasible());
            }
            x * x
        } else {
            let n = n_grid + n_grid % 2;
            let mut best = f64::INFINITY;
            for k in 0..n {
                let cos_psi = (TAU * k as f64 / n as f64).cos();
                let sin2 = (1.0 - cos_psi * cos_psi).max(0.0);
                // y²d² + 2xycd·cosψ + x²c² − φ₂ = 0
                let disc = phi2 - x * x * c * c * sin2;
                if disc < -tol2 {
                    continue;
                }
                let root = disc.max(0.0).sqrt();
                let lo = (-x * c * cos_psi - root) / d;
                let hi = (-x * c * cos_psi + root) / d;
                let y = if lo >= 0.0 {
                    lo
                } else if hi >= 0.0 {
                    hi
                } else {
                    continue;
                };
                best = best.min(x * x + y * y);
            }
            best
        }
    };
    if power.is_nan() || power > budget {
        return Err(infeasible());
    }
    Ok(power)
}

/// Random rank-two covariance meeting `Tr(Q g₁g₁ᴴ) = φ` within budget,
/// with its two factor vectors (`Q = f₀f₀ᴴ + f₁f₁ᴴ`).
fn rank2_probe(s: &Scenario, phi: f64, rng: &mut ChaCha8Rng, structured: bool) -> Option<(CMat, [CVec; 2])> {
    let nt = s.nt();
    let gaussian = |rng: &mut ChaCha8Rng| {
        let v: Vec<C64> = (0..nt)
            .map(|_| C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
            .collect();
        CVec::new(v).expect("finite draws")
    };
    let g1_sq = s.g1.norm_sq();
    let p = s.p_max;

    let factors = if structured {
        // mixture of two beamformers, each meeting the equality within budget
        let t: f64 = rng.random();
        let pick = |rng: &mut ChaCha8Rng| -> CVec {
            let raw = gaussian(rng);
            if g1_sq == 0.0 {
                let u: f64 = rng.random();
                return raw.normalized().map_or(raw.clone(), |d| d.scale_real((u * p).sqrt()));
            }
            let g1_hat = s.g1.scale_real(1.0 / g1_sq.sqrt());
            let x_sq = (phi / g1_sq).min(p);
            let theta = TAU * rng.random::<f64>();
            let along = g1_hat.scale(C64::from_polar(x_sq.sqrt(), theta));
            let perp = project_complement(&raw, &g1_hat).expect("unit anchor");
            let u: f64 = rng.random();
            let rest = perp.normalized().map_or(CVec::zeros(nt), |d| d.scale_real((u * (p - x_sq)).max(0.0).sqrt()));
            &along + &rest
        };
        let (wa, wb) = (pick(rng), pick(rng));
        [wa.scale_real(t.sqrt()), wb.scale_real((1.0 - t).sqrt())]
    } else {
        [gaussian(rng), gaussian(rng)]
    };
    let q = &factors[0].outer() + &factors[1].outer();
    let delivered = q.quad_form(&s.g1).ok()?;
    let (q, factors) = if structured {
        (q, factors)
    } else {
        if delivered <= 0.0 {
            return None;
        }
        let k = phi / delivered;
        let f = [factors[0].scale_real(k.sqrt()), factors[1].scale_real(k.sqrt())];
        (q.scale_real(k), f)
    };
    if q.trace().re > p * (1.0 + 1e-12) {
        return None;
    }
    Some((q, factors))
}

/// Probes `n_trials` random rank-two covariances on the Bob-1 constraint
/// and reports the largest excursion outside `[f_min(r1), f_max(r1)]`.
pub fn oracle_rank1_check(s: &Scenario, r1: f64, n_trials: usize, seed: u64, tol: f64) -> Result<OracleReport> {
    let jammer = Jammer::new(s, SweepConfig::default());
    let closed_hi = jammer.f_max(r1)?;
    let closed_lo = jammer.f_min(r1)?;
    let phi = bob1_constraint(s, r1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n_probes = 0;
    let mut worst_gap = 0.0f64;
    let mut extreme = closed_hi;
    let mut worst: Option<[CVec; 2]> = None;
    let mut attempts = 0;
    while n_probes < n_trials && attempts < 20 * n_trials.max(1) {
        attempts += 1;
        let structured = attempts % 2 == 1;
        let Some((q, factors)) = rank2_probe(s, phi, &mut rng, structured) else { continue };
        n_probes += 1;
        let r2 = suspicious_rate(s, &q, Link::Two)?;
        let gap = (r2 - closed_hi).max(closed_lo - r2);
        if gap > worst_gap {
            worst_gap = gap;
            extreme = r2;
            worst = Some(factors);
        }
    }
    let mut report = OracleReport::new("rank1_check", closed_hi, extreme, worst_gap, tol, n_probes);
    if !report.passed() {
        report.counterexample = worst.map(|f| encode(&f));
    }
    Ok(report)
}

/// Closed forms under verification.
pub trait ClosedForms: Sync {
    fn f_max(&self, s: &Scenario, r1: f64) -> Result<f64>;
    fn f_min(&self, s: &Scenario, r1: f64) -> Result<f64>;
    fn min_power_beamformer(&self, s: &Scenario, target: RatePair) -> Result<Beamformer>;
}

/// The library's own closed forms.
pub struct Reference;

impl ClosedForms for Reference {
    fn f_max(&self, s: &Scenario, r1: f64) -> Result<f64> {
        Jammer::new(s, SweepConfig::default()).f_max(r1)
    }

    fn f_min(&self, s: &Scenario, r1: f64) -> Result<f64> {
        Jammer::new(s, SweepConfig::default()).f_min(r1)
    }

    fn min_power_beamformer(&self, s: &Scenario, target: RatePair) -> Result<Beamformer> {
        Jammer::new(s, SweepConfig::default()).min_power_beamformer(target)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyOptions {
    pub n_grid: usize,
    pub r1_samples: usize,
    pub interior_targets: usize,
    pub rank1_trials: usize,
    pub rank1_r1_samples: usize,
    pub tol_rate: f64,
    pub tol_power: f64,
    /// Tolerance on the rates actually achieved by interior beamformers.
    pub tol_target: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            n_grid: 10_000,
            r1_samples: 16,
            interior_targets: 8,
            rank1_trials: 1_000,
            rank1_r1_samples: 4,
            tol_rate: TOL_RATE,
            tol_power: TOL_POWER,
            tol_target: 1e-6,
        }
    }
}

/// Runs every oracle on one scenario; one report per checked quantity with
/// the worst gap over its probes.
pub fn verify_scenario(s: &Scenario, opts: &VerifyOptions, closed: &dyn ClosedForms, seed: u64) -> Result<Vec<OracleReport>> {
    let jammer = Jammer::new(s, SweepConfig::default());
    let grid = jammer.r1_grid(opts.r1_samples.max(2));
    let grid = if opts.r1_samples == 0 { Vec::new() } else { grid };

    let mut reports = Vec::new();
    for (name, minimize) in [("f_max", false), ("f_min", true)] {
        let mut worst = OracleReport::new(name, f64::NAN, f64::NAN, 0.0, opts.tol_rate, 0);
        for &r1 in &grid {
            let (c, o) = if minimize {
                (closed.f_min(s, r1)?, oracle_f_min(s, r1, opts.n_grid)?)
            } else {
                (closed.f_max(s, r1)?, oracle_f_max(s, r1, opts.n_grid)?)
            };
            let gap = (c - o).abs();
            if worst.n_probes == 0 || gap > worst.abs_gap || gap.is_nan() {
                worst = OracleReport::new(name, c, o, gap, opts.tol_rate, 0);
            }
            worst.n_probes += 1;
        }
        finish(&mut worst);
        reports.push(worst);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut power = OracleReport::new("min_power", f64::NAN, f64::NAN, 0.0, opts.tol_power, 0);
    let mut rates = OracleReport::new("target_rates", f64::NAN, f64::NAN, 0.0, opts.tol_target, 0);
    let (lo1, hi1) = (jammer.r_min(Link::One), jammer.r_max(Link::One));
    for _ in 0..opts.interior_targets {
        let r1 = lo1 + (hi1 - lo1) * rng.random::<f64>();
        let (lo2, hi2) = (jammer.f_min(r1)?, jammer.f_max(r1)?);
        let target = RatePair::new(r1, lo2 + (hi2 - lo2) * rng.random::<f64>());
        let w = closed.min_power_beamformer(s, target)?;
        let oracle = oracle_min_power(s, target, opts.n_grid)?;
        let got = w.power();
        let rel = (got - oracle).abs() / oracle.max(1e-12 * s.p_max.max(1e-300));
        if power.n_probes == 0 || rel > power.abs_gap || rel.is_nan() {
            power = OracleReport::new("min_power", got, oracle, rel, opts.tol_power, 0);
            power.counterexample = Some(encode(std::slice::from_ref(&w.w)));
        }
        power.n_probes += 1;

        let achieved = w.rates(s);
        let miss = (achieved.r1 - target.r1).abs().max((achieved.r2 - target.r2).abs());
        if rates.n_probes == 0 || miss > rates.abs_gap || miss.is_nan() {
            rates = OracleReport::new("target_rates", achieved.r2, target.r2, miss, opts.tol_target, 0);
            rates.counterexample = Some(encode(std::slice::from_ref(&w.w)));
        }
        rates.n_probes += 1;
    }
    for r in [&mut power, &mut rates] {
        finish(r);
        if r.passed() {
            r.counterexample = None;
        }
    }
    reports.push(power);
    reports.push(rates);

    if opts.rank1_r1_samples > 0 {
        let mut worst: Option<OracleReport> = None;
        for (k, &r1) in jammer.r1_grid(opts.rank1_r1_samples.max(2)).iter().enumerate() {
            let r = oracle_rank1_check(s, r1, opts.rank1_trials, seed.wrapping_add(k as u64 + 1), opts.tol_rate)?;
            let total = worst.as_ref().map_or(0, |w| w.n_probes) + r.n_probes;
            let mut keep = match worst {
                Some(w) if w.abs_gap >= r.abs_gap => w,
                _ => r,
            };
            keep.n_probes = total;
            worst = Some(keep);
        }
        reports.extend(worst);
    }
    Ok(reports)
}

fn finish(r: &mut OracleReport) {
    r.verdict = if r.abs_gap <= r.tolerance { Verdict::Pass } else { Verdict::Fail };
}
