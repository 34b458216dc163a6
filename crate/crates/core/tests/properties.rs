//! Cross-module property tests over randomly generated scenarios.

use jamregion::jammer::{Jammer, SweepConfig};
use jamregion::oracle::{oracle_f_max, oracle_f_min};
use jamregion::rates::{Link, RatePair};
use jamregion::region::csv::{parse_regions, write_regions};
use jamregion::region::polygon;
use jamregion::region::{
    convex_hull_region, intersect, mmse_rectangle, sic_region, suspicious_region, RateRegion,
};
use jamregion::scenario::{dbm_to_watts, generate, GenParams, Geometry, Scenario, ScenarioFile};
use proptest::prelude::*;

fn scenario(seed: u64, nt: usize, nr: usize, pmax_dbm: f64, monitor: (f64, f64)) -> Scenario {
    let params = GenParams { nt, nr, p_max: dbm_to_watts(pmax_dbm), ..GenParams::default() };
    generate(&Geometry::reference([monitor.0, monitor.1]), &params, seed).unwrap()
}

fn arb_scenario() -> impl Strategy<Value = Scenario> {
    (0u64..1_000_000, 1usize..=5, 1usize..=4, -10.0f64..30.0, (-50.0f64..150.0, 10.0f64..190.0))
        .prop_map(|(seed, nt, nr, pmax, monitor)| scenario(seed, nt, nr, pmax, monitor))
}

fn cfg() -> SweepConfig {
    SweepConfig { n_samples: 48, ..SweepConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_beamformers_meet_constraints(s in arb_scenario(), t in 0.0f64..=1.0) {
        let j = Jammer::new(&s, cfg());
        let r1 = j.r_min(Link::One) + t * (j.r_max(Link::One) - j.r_min(Link::One));
        let up = j.upper_boundary_beamformer(r1).unwrap();
        let lo = j.lower_boundary_beamformer(r1).unwrap();
        for w in [&up, &lo] {
            prop_assert!(w.power() <= s.p_max * (1.0 + 1e-9));
            prop_assert!((w.rates(&s).r1 - r1).abs() <= 1e-9);
        }
        prop_assert!((up.rates(&s).r2 - j.f_max(r1).unwrap()).abs() <= 1e-9);
        prop_assert!((lo.rates(&s).r2 - j.f_min(r1).unwrap()).abs() <= 1e-9);
        prop_assert!(j.f_min(r1).unwrap() <= j.f_max(r1).unwrap() + 1e-9);
    }

    #[test]
    fn closed_forms_agree_with_search(s in arb_scenario(), t in 0.0f64..=1.0) {
        let j = Jammer::new(&s, cfg());
        let r1 = j.r_min(Link::One) + t * (j.r_max(Link::One) - j.r_min(Link::One));
        prop_assert!((j.f_max(r1).unwrap() - oracle_f_max(&s, r1, 2_000).unwrap()).abs() <= 1e-4);
        prop_assert!((j.f_min(r1).unwrap() - oracle_f_min(&s, r1, 2_000).unwrap()).abs() <= 1e-4);
    }

    #[test]
    fn suspicious_region_invariants(s in arb_scenario()) {
        let j = Jammer::new(&s, cfg());
        let r = suspicious_region(&s, &cfg()).unwrap();
        let peak = RatePair::new(j.r_max(Link::One), j.r_max(Link::Two));
        prop_assert!(r.upper.contains(&peak));
        prop_assert!(r.upper.windows(2).all(|w| w[0].r1 < w[1].r1));
        for (u, l) in r.upper.iter().zip(&r.lower) {
            prop_assert_eq!(u.r1, l.r1);
            prop_assert!(l.r2 <= u.r2 + cfg().tol_rate);
        }
        for p in r.points() {
            prop_assert!(p.r1 >= j.r_min(Link::One) - 1e-12 && p.r1 <= j.r_max(Link::One) + 1e-12);
            prop_assert!(p.r2 >= j.r_min(Link::Two) - 1e-12 && p.r2 <= j.r_max(Link::Two) + 1e-12);
        }
        let hull = convex_hull_region(&r);
        prop_assert!(polygon::is_convex(hull.vertices.as_ref().unwrap()));
        prop_assert!(hull.area() + 1e-12 >= r.area());
    }

    #[test]
    fn intersection_points_are_in_both_inputs(s in arb_scenario()) {
        let raw = suspicious_region(&s, &cfg()).unwrap();
        let hull = convex_hull_region(&raw);
        for eaves in [mmse_rectangle(&s), sic_region(&s)] {
            for a in [&raw, &hull] {
                let x = intersect(a, &eaves);
                for v in x.points() {
                    prop_assert!(a.contains(&v, 1e-9) && eaves.contains(&v, 1e-9));
                }
            }
        }
    }

    #[test]
    fn region_csv_round_trips(s in arb_scenario()) {
        let raw = suspicious_region(&s, &cfg()).unwrap();
        let hull = convex_hull_region(&raw);
        let x = intersect(&raw, &mmse_rectangle(&s));
        let text = write_regions(&[&raw, &hull, &x]);
        let back = parse_regions(&text).unwrap();
        let refs: Vec<&RateRegion> = back.iter().collect();
        prop_assert_eq!(write_regions(&refs), text);
        prop_assert_eq!(back[2].is_empty(), x.is_empty());
    }

    #[test]
    fn scenario_file_round_trips(s in arb_scenario()) {
        let file = ScenarioFile::from_scenario(&s, None, None).unwrap();
        let text = file.to_json().unwrap();
        let back = ScenarioFile::from_json(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(back.to_scenario().unwrap(), s);
    }
}
