//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the summary lines are
//! always printed; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use jamregion::jammer::{Jammer, SweepConfig};
use jamregion::linalg::{CVec, C64};
use jamregion::oracle::{oracle_f_max, oracle_f_min, oracle_min_power, oracle_rank1_check, TOL_POWER, TOL_RATE};
use jamregion::rates::{mmse_eaves_rate, si_eaves_rate, suspicious_rate_bf, Link, RatePair};
use jamregion::region::{
    convex_hull_region, decode_order_factor, intersect, mmse_rectangle, sic_corners, sic_region, sic_time_share,
    suspicious_nullspace_region, suspicious_region, RateRegion,
};
use jamregion::scenario::{dbm_to_watts, generate, GenParams, Geometry, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

const SUITE: u64 = 100;
const N_GRID: usize = 10_000;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome { pass, detail: detail.into() }
    }
}

fn scenario_at(seed: u64, monitor: [f64; 2], params: &GenParams) -> Scenario {
    generate(&Geometry::reference(monitor), params, seed).expect("valid parameters")
}

fn suite() -> Vec<Scenario> {
    (0..SUITE).map(|seed| scenario_at(seed, [100.0, 100.0], &GenParams::default())).collect()
}

fn random_beamformer(rng: &mut ChaCha8Rng, nt: usize, budget: f64) -> CVec {
    let v: Vec<C64> = (0..nt)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let v = CVec::new(v).expect("finite");
    let u: f64 = rng.random();
    v.normalized().expect("nonzero draw").scale_real((u * budget).sqrt())
}

fn fmax_all(xs: impl Iterator<Item = f64>) -> f64 {
    xs.fold(0.0, f64::max)
}

fn oracle_boundaries(suite: &[Scenario]) -> Outcome {
    let gaps: Vec<(f64, f64)> = suite
        .par_iter()
        .map(|s| {
            let j = Jammer::new(s, SweepConfig::default());
            let mut worst = (0.0f64, 0.0f64);
            for r1 in j.r1_grid(16) {
                let up = (j.f_max(r1).unwrap() - oracle_f_max(s, r1, N_GRID).unwrap()).abs();
                let lo = (j.f_min(r1).unwrap() - oracle_f_min(s, r1, N_GRID).unwrap()).abs();
                worst = (worst.0.max(up), worst.1.max(lo));
            }
            worst
        })
        .collect();
    let up = fmax_all(gaps.iter().map(|g| g.0));
    let lo = fmax_all(gaps.iter().map(|g| g.1));
    Outcome::new(up <= TOL_RATE && lo <= TOL_RATE, format!("max |f_max gap| {up:.2e}, max |f_min gap| {lo:.2e}"))
}

fn oracle_interior_power(suite: &[Scenario]) -> Outcome {
    let res: Vec<(f64, f64)> = suite
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let j = Jammer::new(s, SweepConfig::default());
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + k as u64);
            let (lo1, hi1) = (j.r_min(Link::One), j.r_max(Link::One));
            let mut worst = (0.0f64, 0.0f64);
            for _ in 0..8 {
                let r1 = lo1 + (hi1 - lo1) * rng.random::<f64>();
                let (lo2, hi2) = (j.f_min(r1).unwrap(), j.f_max(r1).unwrap());
                let target = RatePair::new(r1, lo2 + (hi2 - lo2) * rng.random::<f64>());
                let w = j.min_power_beamformer(target).unwrap();
                let oracle = oracle_min_power(s, target, N_GRID).unwrap();
                let rel = (w.power() - oracle).abs() / oracle.max(1e-12 * s.p_max);
                let got = w.rates(s);
                let miss = (got.r1 - target.r1).abs().max((got.r2 - target.r2).abs());
                worst = (worst.0.max(rel), worst.1.max(miss));
            }
            worst
        })
        .collect();
    let rel = fmax_all(res.iter().map(|r| r.0));
    let miss = fmax_all(res.iter().map(|r| r.1));
    Outcome::new(rel <= TOL_POWER && miss <= 1e-6, format!("max relative power gap {rel:.2e}, max rate miss {miss:.2e}"))
}

fn extremes_bracket(suite: &[Scenario]) -> Outcome {
    let violations: usize = suite
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let j = Jammer::new(s, SweepConfig::default());
            let mut rng = ChaCha8Rng::seed_from_u64(2000 + k as u64);
            let mut bad = 0;
            for _ in 0..10_000 {
                let w = random_beamformer(&mut rng, s.nt(), s.p_max);
                for link in [Link::One, Link::Two] {
                    let r = suspicious_rate_bf(s, &w, link).unwrap();
                    if r < j.r_min(link) - 1e-9 || r > j.r_max(link) + 1e-9 {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .sum();
    Outcome::new(violations == 0, format!("{violations} violations over {} probes", SUITE * 10_000))
}

fn sign_changes(values: &[f64], slack: f64) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        let sign = if d > slack {
            1
        } else if d < -slack {
            -1
        } else {
            0
        };
        if sign != 0 {
            if last != 0 && sign != last {
                changes += 1;
            }
            last = sign;
        }
    }
    changes
}

fn monotonicity(suite: &[Scenario]) -> Outcome {
    let failures: Vec<String> = suite
        .par_iter()
        .enumerate()
        .filter_map(|(k, s)| {
            let j = Jammer::new(s, SweepConfig::default());
            let zf = j.zf_threshold();
            let r2_max = j.r_max(Link::Two);
            let grid = j.r1_grid(128);
            let upper: Vec<f64> = grid.iter().map(|&r| j.f_max(r).unwrap()).collect();
            let lower: Vec<f64> = grid.iter().map(|&r| j.f_min(r).unwrap()).collect();
            for (i, &r1) in grid.iter().enumerate() {
                if r1 >= zf && (upper[i] - r2_max).abs() > 1e-9 {
                    return Some(format!("seed {k}: f_max not flat above threshold"));
                }
                if i > 0 && r1 <= zf && upper[i] < upper[i - 1] - 1e-9 {
                    return Some(format!("seed {k}: f_max decreasing below threshold"));
                }
            }
            (sign_changes(&lower, 1e-9) > 1).then(|| format!("seed {k}: f_min not unimodal"))
        })
        .collect();
    Outcome::new(
        failures.is_empty(),
        match failures.first() {
            None => "upper boundary monotone then flat, lower boundary unimodal on all grids".to_string(),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        },
    )
}

fn rank1_sufficiency(suite: &[Scenario]) -> Outcome {
    let res: Vec<(f64, usize)> = suite
        .par_iter()
        .enumerate()
        .map(|(k, s)| {
            let j = Jammer::new(s, SweepConfig::default());
            let mut worst = 0.0f64;
            let mut probes = 0;
            for (i, r1) in j.r1_grid(4).into_iter().enumerate() {
                let seed = 3000 + 10 * k as u64 + i as u64;
                let report = oracle_rank1_check(s, r1, 2_500, seed, TOL_RATE).unwrap();
                worst = worst.max(report.abs_gap);
                probes += report.n_probes;
            }
            (worst, probes)
        })
        .collect();
    let worst = fmax_all(res.iter().map(|r| r.0));
    let probes: usize = res.iter().map(|r| r.1).sum();
    let min_probes = res.iter().map(|r| r.1).min().unwrap_or(0);
    Outcome::new(
        worst <= TOL_RATE && min_probes >= 10_000,
        format!("{probes} rank-2 probes, worst boundary excursion {worst:.2e}"),
    )
}

fn all_inside(points: &[RatePair], region: &RateRegion, tol: f64) -> bool {
    points.iter().all(|p| region.contains(p, tol))
}

fn containment(suite: &[Scenario]) -> Outcome {
    const TOL: f64 = 1e-9;
    let failures: Vec<String> = suite
        .par_iter()
        .enumerate()
        .filter_map(|(k, s)| {
            let raw = suspicious_region(s, &SweepConfig::default()).unwrap();
            let hull = convex_hull_region(&raw);
            let rect = mmse_rectangle(s);
            let sic = sic_region(s);
            let mmse_raw = intersect(&raw, &rect);
            let mmse_ts = intersect(&hull, &rect);
            let sic_raw = intersect(&raw, &sic);
            let checks = [
                ("S raw in hull", all_inside(&raw.points(), &hull, TOL)),
                ("MMSE raw in MMSE TS", all_inside(&mmse_raw.points(), &mmse_ts, TOL)),
                ("MMSE raw in SIC raw", all_inside(&mmse_raw.points(), &sic_raw, TOL)),
                ("E MMSE in E SIC", all_inside(&rect.points(), &sic, TOL)),
            ];
            checks.iter().find(|c| !c.1).map(|c| format!("seed {k}: {}", c.0))
        })
        .collect();
    Outcome::new(
        failures.is_empty(),
        match failures.first() {
            None => format!("4 containments hold on {SUITE} scenarios"),
            Some(f) => format!("{} failures, first: {f}", failures.len()),
        },
    )
}

/// One-sided exact sign test on discordant pairs: P(X ≥ wins), X ~ Bin(n, 1/2).
fn sign_test_p(wins: usize, losses: usize) -> f64 {
    let n = wins + losses;
    if n == 0 {
        return 1.0;
    }
    let ln_half_n = -(n as f64) * std::f64::consts::LN_2;
    let mut ln_binom = 0.0f64; // ln C(n, 0)
    let mut tail = 0.0;
    for x in 0..=n {
        if x > 0 {
            ln_binom += ((n - x + 1) as f64).ln() - (x as f64).ln();
        }
        if x >= wins {
            tail += (ln_binom + ln_half_n).exp();
        }
    }
    tail.min(1.0)
}

fn budget_ordering() -> Outcome {
    const SEEDS: u64 = 500;
    let pairs: Vec<(bool, bool)> = (0..SEEDS)
        .into_par_iter()
        .map(|seed| {
            let nonempty = |pmax_dbm: f64| {
                let params = GenParams { p_max: dbm_to_watts(pmax_dbm), ..GenParams::default() };
                let s = scenario_at(seed, [100.0, 100.0], &params);
                let raw = suspicious_region(&s, &SweepConfig::default()).unwrap();
                !intersect(&raw, &mmse_rectangle(&s)).is_empty()
            };
            (nonempty(4.0), nonempty(20.0))
        })
        .collect();
    let low = pairs.iter().filter(|p| p.0).count();
    let high = pairs.iter().filter(|p| p.1).count();
    let wins = pairs.iter().filter(|p| p.1 && !p.0).count();
    let losses = pairs.iter().filter(|p| p.0 && !p.1).count();
    let p = sign_test_p(wins, losses);
    Outcome::new(
        high > low && p < 0.01,
        format!(
            "nonempty fraction {:.3} at 4 dBm vs {:.3} at 20 dBm over {SEEDS} seeds, one-sided p = {p:.1e}",
            low as f64 / SEEDS as f64,
            high as f64 / SEEDS as f64
        ),
    )
}

fn antenna_scaling() -> Outcome {
    const SEEDS: u64 = 200;
    let mean_area = |nt: usize| {
        let params = GenParams { nt, ..GenParams::default() };
        let total: f64 = (0..SEEDS)
            .into_par_iter()
            .map(|seed| {
                let s = scenario_at(seed, [100.0, 100.0], &params);
                suspicious_region(&s, &SweepConfig::default()).unwrap().area()
            })
            .sum();
        total / SEEDS as f64
    };
    let (two, five) = (mean_area(2), mean_area(5));
    Outcome::new(five > two, format!("mean area {two:.4} at N_t = 2 vs {five:.4} at N_t = 5 over {SEEDS} seeds"))
}

/// Mean SIC corner gain over the MMSE corner, averaged over both links.
fn sic_gap(s: &Scenario) -> f64 {
    let (a, b) = sic_corners(s);
    let e1 = mmse_eaves_rate(s, Link::One);
    let e2 = mmse_eaves_rate(s, Link::Two);
    0.5 * ((a.r1 - e1) + (b.r2 - e2))
}

fn sic_gap_geometry() -> Outcome {
    const SEEDS: u64 = 200;
    let mean_gap = |monitor: [f64; 2]| {
        let total: f64 = (0..SEEDS)
            .into_par_iter()
            .map(|seed| sic_gap(&scenario_at(seed, monitor, &GenParams::default())))
            .sum();
        total / SEEDS as f64
    };
    let (near, far) = (mean_gap([0.0, 100.0]), mean_gap([100.0, 100.0]));
    Outcome::new(near > far, format!("mean corner gap {near:.3} at (0,100) vs {far:.3} at (100,100)"))
}

fn self_interference(suite: &[Scenario]) -> Outcome {
    let mut worst_rho0 = 0.0f64;
    for (k, s) in suite.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + k as u64);
        let q = random_beamformer(&mut rng, s.nt(), s.p_max).outer();
        for link in [Link::One, Link::Two] {
            let base = mmse_eaves_rate(s, link);
            let got = si_eaves_rate(s, &q, link).unwrap();
            worst_rho0 = worst_rho0.max((got - base).abs() / base.abs().max(f64::MIN_POSITIVE));
        }
    }

    let res: Vec<(f64, f64)> = (0..SUITE)
        .into_par_iter()
        .map(|seed| {
            let params = GenParams { nt: 5, nr: 2, ..GenParams::default() };
            let mut s = scenario_at(seed, [100.0, 100.0], &params);
            let cfg = SweepConfig { n_samples: 32, ..SweepConfig::default() };
            let ns = suspicious_nullspace_region(&s, &cfg, 3).unwrap();
            let hee_f = s.hee.frobenius();
            let mut leak = 0.0f64;
            for w in &ns.achieving_set {
                let hw = s.hee.mul_vec(&w.w).unwrap().norm();
                let scale = hee_f * w.w.norm();
                if scale > 0.0 {
                    leak = leak.max(hw / scale);
                }
            }
            let base = [mmse_eaves_rate(&s, Link::One), mmse_eaves_rate(&s, Link::Two)];
            let mut drift = 0.0f64;
            for rho in [0.25, 0.5, 1.0] {
                s.rho = rho;
                for w in &ns.achieving_set {
                    let q = w.covariance();
                    for (i, link) in [Link::One, Link::Two].into_iter().enumerate() {
                        drift = drift.max((si_eaves_rate(&s, &q, link).unwrap() - base[i]).abs());
                    }
                }
            }
            (leak, drift)
        })
        .collect();
    let leak = fmax_all(res.iter().map(|r| r.0));
    let drift = fmax_all(res.iter().map(|r| r.1));
    Outcome::new(
        worst_rho0 <= 1e-12 && leak <= 1e-9 && drift <= 1e-9,
        format!("rho = 0 gap {worst_rho0:.1e}, null-space leak ratio {leak:.1e}, rate drift {drift:.1e}"),
    )
}

fn sic_time_sharing(suite: &[Scenario]) -> Outcome {
    let mut endpoint_ok = true;
    let mut worst_shortfall = 0.0f64;
    let mut triangle_points = 0usize;
    let mut mismatched = 0usize;
    for (k, s) in suite.iter().enumerate() {
        let (a, b) = sic_corners(s);
        endpoint_ok &= sic_time_share(s, a.r1).unwrap() == 0.0 && sic_time_share(s, b.r1).unwrap() == 1.0;
        if a.r1 - b.r1 <= 1e-12 || b.r2 - a.r2 <= 1e-12 {
            continue;
        }
        let c = RatePair::new(b.r1, a.r2);
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + k as u64);
        for _ in 0..100 {
            let (mut u, mut v): (f64, f64) = (rng.random(), rng.random());
            if u + v > 1.0 {
                (u, v) = (1.0 - u, 1.0 - v);
            }
            let z = RatePair::new(
                c.r1 + u * (a.r1 - c.r1) + v * (b.r1 - c.r1),
                c.r2 + u * (a.r2 - c.r2) + v * (b.r2 - c.r2),
            );
            let tau = decode_order_factor(s, z).unwrap();
            let beyond_both = z.r1 > b.r1 + 1e-9 && z.r2 > a.r2 + 1e-9;
            if beyond_both {
                triangle_points += 1;
                if tau != sic_time_share(s, z.r1).unwrap() {
                    mismatched += 1;
                }
                let rebuilt = b.lerp(&a, tau);
                worst_shortfall = worst_shortfall.max(z.r1 - rebuilt.r1).max(z.r2 - rebuilt.r2);
            }
        }
    }
    Outcome::new(
        endpoint_ok && mismatched == 0 && worst_shortfall <= 1e-9 && triangle_points > 0,
        format!(
            "endpoints exact: {endpoint_ok}, {triangle_points} triangle points, worst shortfall {worst_shortfall:.1e}"
        ),
    )
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let suite = suite();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        ("oracle equivalence, boundaries", Box::new(|| oracle_boundaries(&suite))),
        ("oracle equivalence, interior power", Box::new(|| oracle_interior_power(&suite))),
        ("rate extremes bracket random jamming", Box::new(|| extremes_bracket(&suite))),
        ("boundary monotonicity", Box::new(|| monotonicity(&suite))),
        ("rank-one sufficiency", Box::new(|| rank1_sufficiency(&suite))),
        ("region containment chain", Box::new(|| containment(&suite))),
        ("jamming budget widens eavesdropping", Box::new(budget_ordering)),
        ("antenna scaling of the suspicious region", Box::new(antenna_scaling)),
        ("SIC gap versus monitor position", Box::new(sic_gap_geometry)),
        ("self-interference limits", Box::new(|| self_interference(&suite))),
        ("SIC time-sharing endpoints", Box::new(|| sic_time_sharing(&suite))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "{verdict} [{:>2}] {name}: {} ({:.1}s)",
            i + 1,
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
