//! Run configuration: JSON or TOML, selected by file extension. Every report
//! embeds the resolved configuration so runs are reproducible byte for byte
//! from the report alone.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use phasegrid::lattice::{standard_cs, LatticeSpec};
use phasegrid::sampling::BandSpec;
use phasegrid::{fiducial, io, GridSpec, Signal};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridConfig {
    pub l: usize,
    pub m: usize,
    /// Position spacing; give either `dq` or `q0` (cell length).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q0: Option<f64>,
}

impl GridConfig {
    pub fn build(&self) -> Result<GridSpec> {
        let g = match (self.dq, self.q0) {
            (Some(dq), None) => GridSpec::new(self.l, self.m, dq)?,
            (None, Some(q0)) => GridSpec::with_cell(self.l, self.m, q0)?,
            (None, None) => bail!("grid needs dq or q0"),
            (Some(_), Some(_)) => bail!("grid takes dq or q0, not both"),
        };
        Ok(g)
    }
}

/// Built-in signal factories and file sources.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalSource {
    Gaussian {
        #[serde(default = "one")]
        sigma: f64,
    },
    Coherent {
        q: f64,
        p: f64,
    },
    Comb {},
    SmoothedComb {
        /// Tooth width as a fraction of q₀.
        epsilon_cells: f64,
    },
    Boxcar {},
    Sech {},
    Bandlimited {
        /// Momentum half-width as a fraction of π/q₀.
        half_width_cells: f64,
    },
    PurePhase {
        #[serde(default)]
        a1: f64,
        #[serde(default)]
        a2: f64,
        #[serde(default)]
        a12: f64,
    },
    Random {},
    FileJson {
        path: PathBuf,
    },
    FileCsv {
        path: PathBuf,
    },
}

fn one() -> f64 {
    1.0
}

impl SignalSource {
    pub fn build(&self, g: GridSpec, rng: &mut ChaCha8Rng) -> Result<Signal> {
        let s = match self {
            SignalSource::Gaussian { sigma } => fiducial::gaussian_width(g, *sigma),
            SignalSource::Coherent { q, p } => standard_cs(g, *q, *p),
            SignalSource::Comb {} => fiducial::comb(g),
            SignalSource::SmoothedComb { epsilon_cells } => {
                fiducial::smoothed_comb(g, epsilon_cells * g.q0())
            }
            SignalSource::Boxcar {} => fiducial::boxcar(g),
            SignalSource::Sech {} => fiducial::sech_momentum(g),
            SignalSource::Bandlimited { half_width_cells } => {
                fiducial::bandlimited(g, half_width_cells * g.p_cell() / 2.0)
            }
            SignalSource::PurePhase { a1, a2, a12 } => fiducial::pure_phase(g, *a1, *a2, *a12),
            SignalSource::Random {} => phasegrid::random_signal(g, rng),
            SignalSource::FileJson { path } => {
                let s = io::read_signal_json(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                s.grid.same_as(&g).context("signal file grid mismatch")?;
                s
            }
            SignalSource::FileCsv { path } => io::read_signal_csv(path, g)
                .with_context(|| format!("reading {}", path.display()))?,
        };
        Ok(s)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeConfig {
    pub q0: f64,
    pub p0: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub m_min: i64,
    pub m_max: i64,
    pub fiducial: SignalSource,
}

impl LatticeConfig {
    pub fn spec(&self) -> LatticeSpec {
        LatticeSpec {
            q0: self.q0,
            p0: self.p0,
            n_range: (self.n_min, self.n_max),
            m_range: (self.m_min, self.m_max),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BandConfig {
    pub p0: f64,
    #[serde(default)]
    pub m: i64,
}

impl BandConfig {
    pub fn spec(&self) -> BandSpec {
        BandSpec::new(self.p0, self.m)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SampleConfig {
    #[serde(default)]
    pub q_offset: f64,
    /// Read the sample row from a CSV file instead of extracting it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WignerConfig {
    /// Smoothing width for the comb checks, as a fraction of q₀.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comb_epsilon_cells: Option<f64>,
    /// Skip writing the (large) Wigner matrix CSV.
    #[serde(default)]
    pub skip_matrix: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PoissonConfig {
    #[serde(default = "default_points")]
    pub points: usize,
}

fn default_points() -> usize {
    100
}

/// Verification tolerances; `--tol` overrides all of them at once.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Tolerances {
    #[serde(default = "tol_identity")]
    pub zak: f64,
    #[serde(default = "tol_poisson")]
    pub poisson: f64,
    #[serde(default = "tol_reconstruction")]
    pub reconstruction: f64,
    #[serde(default = "tol_wigner")]
    pub wigner: f64,
}

fn tol_identity() -> f64 {
    1e-10
}
fn tol_poisson() -> f64 {
    1e-10
}
fn tol_reconstruction() -> f64 {
    1e-8
}
fn tol_wigner() -> f64 {
    1e-8
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zak: tol_identity(),
            poisson: tol_poisson(),
            reconstruction: tol_reconstruction(),
            wigner: tol_wigner(),
        }
    }
}

impl Tolerances {
    pub fn override_all(&mut self, tol: f64) {
        self.zak = tol;
        self.poisson = tol;
        self.reconstruction = tol;
        self.wigner = tol;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signal: Option<SignalSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<LatticeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band: Option<BandConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample: Option<SampleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wigner: Option<WignerConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poisson: Option<PoissonConfig>,
    /// Output directory when `--out` is not given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg = if path.extension().and_then(|e| e.to_str()) == Some("toml") {
            toml::from_str(&text).with_context(|| format!("parsing TOML {}", path.display()))?
        } else {
            serde_json::from_str(&text)
                .with_context(|| format!("parsing JSON {}", path.display()))?
        };
        Ok(cfg)
    }

    pub fn signal_source(&self) -> Result<&SignalSource> {
        self.signal
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("config is missing a `signal` section"))
    }
}
