//! Problem instances: channels, powers and the random generator behind them.
//!
//! A [`Scenario`] is stored in watts. The JSON file format carries powers in
//! dBm; conversion happens in [`ScenarioFile`] only.
//!
//! Random generation uses `ChaCha8Rng::seed_from_u64(seed)` and draws one
//! standard normal for the real part and then one for the imaginary part of
//! each coefficient, in this order: `h11, h12, h21, h22, h1m[0..nr],
//! h2m[0..nr], g1[0..nt], g2[0..nt], hee` (row-major). Every coefficient is
//! scaled by `sqrt(var / 2)` so that `E|h|² = var`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::rates::Link;

/// Full problem instance in linear units (watts, amplitude gains).
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub h11: C64,
    pub h22: C64,
    /// Alice 1 → Bob 2.
    pub h12: C64,
    /// Alice 2 → Bob 1.
    pub h21: C64,
    pub h1m: CVec,
    pub h2m: CVec,
    pub g1: CVec,
    pub g2: CVec,
    pub hee: CMat,
    pub p1: f64,
    pub p2: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub sigma_m_sq: f64,
    pub p_max: f64,
    pub rho: f64,
}

impl Scenario {
    /// Checks the power, noise, coefficient and dimension invariants.
    pub fn validate(&self) -> Result<()> {
        let nonneg = [("p1", self.p1), ("p2", self.p2), ("p_max", self.p_max)];
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        let positive = [
            ("sigma1_sq", self.sigma1_sq),
            ("sigma2_sq", self.sigma2_sq),
            ("sigma_m_sq", self.sigma_m_sq),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be > 0, got {v}")));
            }
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::InvalidParameter(format!("rho must lie in [0, 1], got {}", self.rho)));
        }
        for z in [self.h11, self.h22, self.h12, self.h21] {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite("scalar channel"));
            }
        }
        if !(self.h1m.is_finite() && self.h2m.is_finite() && self.g1.is_finite() && self.g2.is_finite()) {
            return Err(Error::NonFinite("channel vector"));
        }
        let (nr, nt) = (self.hee.rows(), self.hee.cols());
        for d in [self.h1m.dim(), self.h2m.dim()] {
            if d != nr {
                return Err(Error::DimensionMismatch { expected: nr, found: d });
            }
        }
        for d in [self.g1.dim(), self.g2.dim()] {
            if d != nt {
                return Err(Error::DimensionMismatch { expected: nt, found: d });
            }
        }
        Ok(())
    }

    pub fn nt(&self) -> usize {
        self.g1.dim()
    }

    pub fn nr(&self) -> usize {
        self.h1m.dim()
    }

    /// Transmit power of a suspicious transmitter.
    pub fn power(&self, link: Link) -> f64 {
        match link {
            Link::One => self.p1,
            Link::Two => self.p2,
        }
    }

    /// Direct channel `h_{i,i}`.
    pub fn direct(&self, link: Link) -> C64 {
        match link {
            Link::One => self.h11,
            Link::Two => self.h22,
        }
    }

    /// Jamming channel `g_i` toward Bob `i`.
    pub fn jam_channel(&self, link: Link) -> &CVec {
        match link {
            Link::One => &self.g1,
            Link::Two => &self.g2,
        }
    }

    /// Eavesdropping channel `h_{i,m}`.
    pub fn eaves_channel(&self, link: Link) -> &CVec {
        match link {
            Link::One => &self.h1m,
            Link::Two => &self.h2m,
        }
    }

    pub fn noise(&self, link: Link) -> f64 {
        match link {
            Link::One => self.sigma1_sq,
            Link::Two => self.sigma2_sq,
        }
    }

    /// Received signal power `P_i |h_{i,i}|²` at Bob `i`.
    pub fn signal_power(&self, link: Link) -> f64 {
        self.power(link) * self.direct(link).norm_sqr()
    }

    /// Replaces the jamming channels, resizing `hee` to a zero loopback of
    /// matching width. Used for reduced (null-space) scenarios.
    pub fn with_jam_channels(&self, g1: CVec, g2: CVec) -> Result<Scenario> {
        if g1.dim() != g2.dim() {
            return Err(Error::DimensionMismatch { expected: g1.dim(), found: g2.dim() });
        }
        let mut s = self.clone();
        s.hee = CMat::zeros(self.nr(), g1.dim());
        s.g1 = g1;
        s.g2 = g2;
        Ok(s)
    }
}

/// Interference-plus-noise power `σ̃_i² = P_j |h_{j,i}|² + σ_i²` at Bob `i`.
pub fn effective_noise(s: &Scenario, link: Link) -> f64 {
    match link {
        Link::One => s.p2 * s.h21.norm_sqr() + s.sigma1_sq,
        Link::Two => s.p1 * s.h12.norm_sqr() + s.sigma2_sq,
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

/// Inverse of [`dbm_to_watts`], nudged by a few ulps so that converting the
/// result back reproduces `watts` exactly whenever such a value exists.
pub fn watts_to_dbm(watts: f64) -> f64 {
    let guess = 10.0 * (watts / 1e-3).log10();
    if !guess.is_finite() || dbm_to_watts(guess) == watts {
        return guess;
    }
    let mut lo = guess;
    let mut hi = guess;
    for _ in 0..8 {
        lo = next_down(lo);
        hi = next_up(hi);
        if dbm_to_watts(lo) == watts {
            return lo;
        }
        if dbm_to_watts(hi) == watts {
            return hi;
        }
    }
    guess
}

fn next_up(x: f64) -> f64 {
    let bits = x.to_bits();
    if x >= 0.0 {
        f64::from_bits(bits + 1)
    } else {
        f64::from_bits(bits - 1)
    }
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

/// Distance-dependent power gain `a0 · (d / d0)^(−alpha_pl)`.
///
/// Distances below `d0` are clamped to `d0`.
pub fn path_loss(distance: f64, a0: f64, d0: f64, alpha_pl: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::InvalidParameter(format!("distance must be > 0, got {distance}")));
    }
    if !(d0 > 0.0 && alpha_pl > 0.0 && a0 > 0.0) {
        return Err(Error::InvalidParameter("a0, d0 and alpha_pl must be > 0".into()));
    }
    Ok(a0 * (distance.max(d0) / d0).powf(-alpha_pl))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub a0: f64,
    pub d0: f64,
    pub alpha_pl: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        PathLossModel { a0: 1e-3, d0: 1.0, alpha_pl: 2.5 }
    }
}

impl PathLossModel {
    /// Gain for a link between two points, clamping coincident nodes to `d0`.
    pub fn gain(&self, from: [f64; 2], to: [f64; 2]) -> f64 {
        let d = ((from[0] - to[0]).powi(2) + (from[1] - to[1]).powi(2)).sqrt();
        let d = d.max(self.d0);
        path_loss(d, self.a0, self.d0, self.alpha_pl).expect("validated model")
    }
}

/// Node positions in meters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub alice1: [f64; 2],
    pub alice2: [f64; 2],
    pub bob1: [f64; 2],
    pub bob2: [f64; 2],
    pub monitor: [f64; 2],
}

impl Geometry {
    /// Suspicious nodes at the reference layout with the monitor at `monitor`.
    pub fn reference(monitor: [f64; 2]) -> Self {
        Geometry {
            alice1: [0.0, 0.0],
            alice2: [0.0, 200.0],
            bob1: [100.0, 0.0],
            bob2: [100.0, 200.0],
            monitor,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [self.alice1, self.alice2, self.bob1, self.bob2, self.monitor];
        if all.iter().flatten().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite("geometry"))
        }
    }
}

impl Default for Geometry {
    fn default() -> Self {
        Geometry::reference([100.0, 100.0])
    }
}

/// Non-channel parameters of a generated scenario (watts).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenParams {
    pub nt: usize,
    pub nr: usize,
    pub p1: f64,
    pub p2: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    pub sigma_m_sq: f64,
    pub p_max: f64,
    pub rho: f64,
    pub path_loss: PathLossModel,
    /// Variance of each loopback coefficient in `hee`.
    pub hee_variance: f64,
}

impl Default for GenParams {
    /// 2×2 monitor, 10 dBm transmitters, −70 dBm noise, 20 dBm jamming budget.
    fn default() -> Self {
        GenParams {
            nt: 2,
            nr: 2,
            p1: dbm_to_watts(10.0),
            p2: dbm_to_watts(10.0),
            sigma1_sq: dbm_to_watts(-70.0),
            sigma2_sq: dbm_to_watts(-70.0),
            sigma_m_sq: dbm_to_watts(-70.0),
            p_max: dbm_to_watts(20.0),
            rho: 0.0,
            path_loss: PathLossModel::default(),
            hee_variance: 1.0,
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, variance: f64) -> C64 {
    let scale = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re * scale, im * scale)
}

fn draw_vec(rng: &mut ChaCha8Rng, n: usize, variance: f64) -> CVec {
    CVec::new((0..n).map(|_| draw(rng, variance)).collect()).expect("finite draws")
}

/// Draws one Rayleigh-fading realization for `geometry`.
pub fn generate(geometry: &Geometry, params: &GenParams, seed: u64) -> Result<Scenario> {
    if params.nt == 0 || params.nr == 0 {
        return Err(Error::InvalidParameter(format!(
            "antenna counts must be >= 1, got nt = {}, nr = {}",
            params.nt, params.nr
        )));
    }
    geometry.validate()?;
    let pl = &params.path_loss;
    path_loss(pl.d0, pl.a0, pl.d0, pl.alpha_pl)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h11 = draw(&mut rng, pl.gain(geometry.alice1, geometry.bob1));
    let h12 = draw(&mut rng, pl.gain(geometry.alice1, geometry.bob2));
    let h21 = draw(&mut rng, pl.gain(geometry.alice2, geometry.bob1));
    let h22 = draw(&mut rng, pl.gain(geometry.alice2, geometry.bob2));
    let h1m = draw_vec(&mut rng, params.nr, pl.gain(geometry.alice1, geometry.monitor));
    let h2m = draw_vec(&mut rng, params.nr, pl.gain(geometry.alice2, geometry.monitor));
    let g1 = draw_vec(&mut rng, params.nt, pl.gain(geometry.monitor, geometry.bob1));
    let g2 = draw_vec(&mut rng, params.nt, pl.gain(geometry.monitor, geometry.bob2));
    let rows: Vec<Vec<C64>> = (0..params.nr)
        .map(|_| (0..params.nt).map(|_| draw(&mut rng, params.hee_variance)).collect())
        .collect();
    let hee = CMat::from_rows(&rows)?;

    let s = Scenario {
        h11,
        h22,
        h12,
        h21,
        h1m,
        h2m,
        g1,
        g2,
        hee,
        p1: params.p1,
        p2: params.p2,
        sigma1_sq: params.sigma1_sq,
        sigma2_sq: params.sigma2_sq,
        sigma_m_sq: params.sigma_m_sq,
        p_max: params.p_max,
        rho: params.rho,
    };
    s.validate()?;
    Ok(s)
}

// ---------------------------------------------------------------------------
// JSON file format
// ---------------------------------------------------------------------------

pub const SCENARIO_FILE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelsJson {
    pub h11: [f64; 2],
    pub h12: [f64; 2],
    pub h21: [f64; 2],
    pub h22: [f64; 2],
    pub h1m: Vec<[f64; 2]>,
    pub h2m: Vec<[f64; 2]>,
    pub g1: Vec<[f64; 2]>,
    pub g2: Vec<[f64; 2]>,
    pub hee: Vec<Vec<[f64; 2]>>,
}

/// Transmit powers in dBm. `pmax = null` encodes a zero jamming budget.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowersDbm {
    pub p1: f64,
    pub p2: f64,
    pub pmax: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseDbm {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigmam: f64,
}

/// On-disk representation of a [`Scenario`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub version: u32,
    pub nt: usize,
    pub nr: usize,
    pub channels: ChannelsJson,
    pub powers_dbm: PowersDbm,
    pub noise_dbm: NoiseDbm,
    pub rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn pair(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

fn unpair(p: [f64; 2]) -> C64 {
    C64::new(p[0], p[1])
}

fn vec_pairs(v: &CVec) -> Vec<[f64; 2]> {
    v.entries().iter().copied().map(pair).collect()
}

fn pairs_vec(p: &[[f64; 2]]) -> Result<CVec> {
    CVec::new(p.iter().copied().map(unpair).collect())
}

fn power_dbm(watts: f64) -> Result<f64> {
    if watts > 0.0 {
        Ok(watts_to_dbm(watts))
    } else {
        Err(Error::InvalidParameter("powers stored in dBm must be > 0 W".into()))
    }
}

impl ScenarioFile {
    pub fn from_scenario(s: &Scenario, geometry: Option<Geometry>, seed: Option<u64>) -> Result<Self> {
        s.validate()?;
        let hee = (0..s.hee.rows())
            .map(|i| s.hee.row(i).into_iter().map(pair).collect())
            .collect();
        Ok(ScenarioFile {
            version: SCENARIO_FILE_VERSION,
            nt: s.nt(),
            nr: s.nr(),
            channels: ChannelsJson {
                h11: pair(s.h11),
                h12: pair(s.h12),
                h21: pair(s.h21),
                h22: pair(s.h22),
                h1m: vec_pairs(&s.h1m),
                h2m: vec_pairs(&s.h2m),
                g1: vec_pairs(&s.g1),
                g2: vec_pairs(&s.g2),
                hee,
            },
            powers_dbm: PowersDbm {
                p1: power_dbm(s.p1)?,
                p2: power_dbm(s.p2)?,
                pmax: if s.p_max > 0.0 { Some(watts_to_dbm(s.p_max)) } else { None },
            },
            noise_dbm: NoiseDbm {
                sigma1: power_dbm(s.sigma1_sq)?,
                sigma2: power_dbm(s.sigma2_sq)?,
                sigmam: power_dbm(s.sigma_m_sq)?,
            },
            rho: s.rho,
            geometry,
            seed,
        })
    }

    pub fn to_scenario(&self) -> Result<Scenario> {
        if self.version != SCENARIO_FILE_VERSION {
            return Err(Error::Parse(format!("unsupported scenario version {}", self.version)));
        }
        let c = &self.channels;
        let hee_rows: Vec<Vec<C64>> = c
            .hee
            .iter()
            .map(|row| row.iter().copied().map(unpair).collect())
            .collect();
        let hee = if hee_rows.is_empty() {
            CMat::zeros(0, self.nt)
        } else {
            CMat::from_rows(&hee_rows)?
        };
        if hee.rows() != self.nr || hee.cols() != self.nt {
            return Err(Error::Parse(format!(
                "hee is {}x{}, expected {}x{}",
                hee.rows(),
                hee.cols(),
                self.nr,
                self.nt
            )));
        }
        let s = Scenario {
            h11: unpair(c.h11),
            h22: unpair(c.h22),
            h12: unpair(c.h12),
            h21: unpair(c.h21),
            h1m: pairs_vec(&c.h1m)?,
            h2m: pairs_vec(&c.h2m)?,
            g1: pairs_vec(&c.g1)?,
            g2: pairs_vec(&c.g2)?,
            hee,
            p1: dbm_to_watts(self.powers_dbm.p1),
            p2: dbm_to_watts(self.powers_dbm.p2),
            sigma1_sq: dbm_to_watts(self.noise_dbm.sigma1),
            sigma2_sq: dbm_to_watts(self.noise_dbm.sigma2),
            sigma_m_sq: dbm_to_watts(self.noise_dbm.sigmam),
            p_max: self.powers_dbm.pmax.map_or(0.0, dbm_to_watts),
            rho: self.rho,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn save(path: &std::path::Path, file: &ScenarioFile) -> Result<()> {
    let mut text = file.to_json()?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

pub fn load(path: &std::path::Path) -> Result<ScenarioFile> {
    let text = std::fs::read_to_string(path)?;
    ScenarioFile::from_json(&text)
}
