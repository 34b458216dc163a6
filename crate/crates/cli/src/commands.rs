use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use jamregion::oracle::{verify_scenario, ClosedForms, Reference, VerifyOptions};
use jamregion::region::csv::write_regions;
use jamregion::scenario::{dbm_to_watts, generate, GenParams, Geometry, ScenarioFile};
use jamregion::Scenario;
use rayon::prelude::*;

use crate::args::{GenArgs, MonteCarloArgs, Receiver, RegionArgs, RegionOpts, SetupArgs, Tamper, VerifyArgs};
use crate::manifest::ManifestBuilder;
use crate::pipeline::{self, Summary};
use crate::{svg, tamper, EXIT_VERIFY_FAILED};

impl SetupArgs {
    fn geometry(&self) -> Geometry {
        Geometry::reference(self.monitor)
    }

    fn params(&self) -> GenParams {
        let noise = dbm_to_watts(self.noise_dbm);
        GenParams {
            nt: self.nt,
            nr: self.nr,
            p1: dbm_to_watts(self.p1_dbm),
            p2: dbm_to_watts(self.p2_dbm),
            sigma1_sq: noise,
            sigma2_sq: noise,
            sigma_m_sq: noise,
            p_max: dbm_to_watts(self.pmax_dbm),
            rho: self.rho,
            ..GenParams::default()
        }
    }

    fn generate(&self, seed: u64) -> Result<Scenario> {
        generate(&self.geometry(), &self.params(), seed).with_context(|| format!("generating scenario for seed {seed}"))
    }
}

impl RegionOpts {
    fn check(&self) -> Result<()> {
        if self.si.is_some() && self.receiver == Receiver::MmseSic {
            bail!("--si models an MMSE receiver and cannot be combined with --receiver mmse-sic");
        }
        if self.samples < 2 {
            bail!("--samples must be at least 2");
        }
        Ok(())
    }
}

/// Writes `text` to `path`, or to stdout when no path is given.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn read_scenario(path: &Path, manifest: &mut ManifestBuilder) -> Result<Scenario> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    manifest.input(path, &bytes);
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let file = ScenarioFile::from_json(text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.to_scenario()?)
}

pub fn gen(a: GenArgs) -> Result<ExitCode> {
    let mut manifest = ManifestBuilder::new("gen", &a, Some(a.seed))?;
    let s = a.setup.generate(a.seed)?;
    let text = ScenarioFile::from_scenario(&s, Some(a.setup.geometry()), Some(a.seed))?.to_json()?;
    emit(a.out.as_deref(), &text)?;
    if let Some(out) = &a.out {
        manifest.output(out);
    }
    manifest.finish(a.manifest.as_deref(), a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn region(a: RegionArgs) -> Result<ExitCode> {
    a.opts.check()?;
    let mut manifest = ManifestBuilder::new("region", &a, None)?;
    let mut s = read_scenario(&a.scenario, &mut manifest)?;
    if let Some(dbm) = a.pmax_dbm {
        s.p_max = dbm_to_watts(dbm);
    }
    let regions = pipeline::compute(&s, &a.opts)?;

    emit(a.out.as_deref(), &write_regions(&regions.all()))?;
    if let Some(out) = &a.out {
        manifest.output(out);
    }
    if let Some(path) = &a.svg {
        std::fs::write(path, svg::render(&regions.all())).with_context(|| format!("writing {}", path.display()))?;
        manifest.output(path);
    }
    manifest.summary(&regions.summary)?;
    manifest.finish(a.manifest.as_deref(), a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(a: VerifyArgs) -> Result<ExitCode> {
    let mut manifest = ManifestBuilder::new("verify", &a, Some(a.seed))?;
    if a.n_grid < 100 {
        bail!("--n-grid must be at least 100");
    }
    if a.trials == 0 {
        eprintln!("warning: --trials 0 makes the rank-one check vacuous");
    }
    let scenarios: Vec<(u64, Scenario)> = match (&a.scenario, a.random) {
        (Some(path), _) => vec![(a.seed, read_scenario(path, &mut manifest)?)],
        (None, Some(0)) => bail!("--random must be at least 1"),
        (None, Some(n)) => (0..n as u64)
            .map(|k| Ok((a.seed.wrapping_add(k), a.setup.generate(a.seed.wrapping_add(k))?)))
            .collect::<Result<_>>()?,
        (None, None) => bail!("either --scenario or --random is required"),
    };

    let opts = VerifyOptions {
        n_grid: a.n_grid,
        r1_samples: a.samples,
        interior_targets: a.targets,
        rank1_trials: a.trials,
        ..VerifyOptions::default()
    };
    let closed: &dyn ClosedForms = match a.tamper {
        None => &Reference,
        Some(Tamper::SignFlip) => &tamper::SignFlip,
    };
    let results: Vec<_> = scenarios
        .par_iter()
        .enumerate()
        .map(|(k, (seed, s))| verify_scenario(s, &opts, closed, *seed).map(|r| (k, *seed, r)))
        .collect::<jamregion::Result<_>>()?;

    let mut text = String::new();
    let (mut passed, mut total) = (0, 0);
    for (k, seed, reports) in &results {
        for r in reports {
            let mut line = serde_json::to_value(r)?;
            if let serde_json::Value::Object(map) = &mut line {
                map.insert("scenario".into(), (*k).into());
                map.insert("seed".into(), (*seed).into());
            }
            text.push_str(&serde_json::to_string(&line)?);
            text.push('\n');
            total += 1;
            passed += usize::from(r.passed());
        }
    }
    emit(a.out.as_deref(), &text)?;
    if let Some(out) = &a.out {
        manifest.output(out);
    }
    eprintln!("verify: {passed} of {total} checks passed");
    manifest.summary(&serde_json::json!({ "passed": passed, "total": total }))?;
    manifest.finish(a.manifest.as_deref(), a.out.as_deref())?;
    Ok(if passed == total { ExitCode::SUCCESS } else { ExitCode::from(EXIT_VERIFY_FAILED) })
}

pub fn montecarlo(a: MonteCarloArgs) -> Result<ExitCode> {
    a.opts.check()?;
    if a.realizations == 0 {
        bail!("--realizations must be at least 1");
    }
    let mut manifest = ManifestBuilder::new("montecarlo", &a, Some(a.seed))?;
    let rows: Vec<(u64, Summary)> = (0..a.realizations as u64)
        .into_par_iter()
        .map(|k| {
            let seed = a.seed.wrapping_add(k);
            let s = a.setup.generate(seed)?;
            let regions = pipeline::compute(&s, &a.opts).with_context(|| format!("realization {k} (seed {seed})"))?;
            Ok((seed, regions.summary))
        })
        .collect::<Result<_>>()?;

    let mut text = format!("realization,seed,{}\n", Summary::FIELDS.join(","));
    let mut sums = [0.0; Summary::FIELDS.len()];
    for (k, (seed, summary)) in rows.iter().enumerate() {
        let values = summary.values();
        for (acc, v) in sums.iter_mut().zip(values) {
            *acc += v;
        }
        text.push_str(&format!("{k},{seed},{}\n", join(&values)));
    }
    let means = sums.map(|v| v / rows.len() as f64);
    text.push_str(&format!("mean,,{}\n", join(&means)));

    emit(a.out.as_deref(), &text)?;
    if let Some(out) = &a.out {
        manifest.output(out);
    }
    let mean_summary: serde_json::Map<_, _> =
        Summary::FIELDS.iter().zip(means).map(|(k, v)| (k.to_string(), v.into())).collect();
    manifest.summary(&mean_summary)?;
    manifest.finish(a.manifest.as_deref(), a.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn join(values: &[f64]) -> String {
    values.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}
