//! The five pipeline commands. Each writes machine-readable artifacts into
//! the output directory, embeds the resolved config and library version in
//! its report, and returns whether every checked residual stayed inside its
//! tolerance (false ⇒ exit code 2).

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use phasegrid::io::{self, ReconstructionReport};
use phasegrid::lattice::{
    build_lattice, gram_analysis, lattice_inner_products, orthonormality_test,
    projected_reconstruct, totality_test,
};
use phasegrid::sampling::{
    bandlimit_project, consistency_residual, dependence_residual, extract_samples,
    reconstruct_cauchy, reconstruct_sinc,
};
use phasegrid::zak::{
    locate_zero, quasiperiodicity_residual, zak_forward, zak_forward_round, Convention, ZeroReport,
};
use phasegrid::{comb_wigner_check, wigner_transform, FiducialVector, Signal};

use crate::config::RunConfig;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a RunConfig,
    results: T,
}

fn write_report<T: Serialize>(
    out: &Path,
    name: &'static str,
    seed: u64,
    cfg: &RunConfig,
    results: T,
) -> Result<PathBuf> {
    let path = out.join(format!("{name}_report.json"));
    io::write_json(
        &path,
        &Report {
            version: VERSION,
            command: name,
            seed,
            config: cfg,
            results,
        },
    )?;
    Ok(path)
}

#[derive(Serialize)]
struct ZakResults {
    unitarity_residual: f64,
    convention_residual: f64,
    quasiperiodicity_angular: f64,
    quasiperiodicity_round: f64,
    zero: ZeroReport,
    tolerance: f64,
    pass: bool,
}

pub fn cmd_zak(cfg: &RunConfig, out: &Path, seed: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = cfg.grid.build()?;
    let s = cfg.signal_source()?.build(g, rng)?;
    io::write_signal_json(&out.join("signal.json"), &s)?;
    let za = zak_forward(&s);
    let zr = zak_forward_round(&s);
    io::write_zak_json(&out.join("zak_angular.json"), &za)?;
    io::write_zak_json(&out.join("zak_round.json"), &zr)?;

    let unitarity_residual = (za.norm_sq() - s.norm_sq()).abs();
    let convention_residual = zr.max_abs_diff(&za.with_convention(Convention::Round));
    let quasiperiodicity_angular = quasiperiodicity_residual(&za)?;
    let quasiperiodicity_round = quasiperiodicity_residual(&zr)?;
    let zero = locate_zero(&za);
    io::write_json(&out.join("zero_report.json"), &zero)?;

    let tol = cfg.tolerances.zak;
    let pass = unitarity_residual <= tol
        && convention_residual <= tol
        && quasiperiodicity_angular <= tol
        && quasiperiodicity_round <= tol;
    write_report(
        out,
        "zak",
        seed,
        cfg,
        ZakResults {
            unitarity_residual,
            convention_residual,
            quasiperiodicity_angular,
            quasiperiodicity_round,
            zero,
            tolerance: tol,
            pass,
        },
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct SampleResults {
    sinc: ReconstructionReport,
    cauchy: ReconstructionReport,
    formulas_agreement: f64,
    consistency_residual: f64,
    dependence_residual_const: f64,
    dependence_residual_linear: f64,
    tolerance: f64,
    pass: bool,
}

fn reconstruction_errors(rec: &Signal, reference: &Signal) -> (f64, f64) {
    let max = rec.max_abs_diff(reference) / reference.grid.dq().sqrt();
    (max, rec.relative_error(reference))
}

pub fn cmd_sample(cfg: &RunConfig, out: &Path, seed: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = cfg.grid.build()?;
    let band_cfg = cfg
        .band
        .as_ref()
        .ok_or_else(|| anyhow!("sample command needs a `band` section"))?;
    let band = band_cfg.spec();
    let sample_cfg = cfg.sample.clone().unwrap_or(crate::config::SampleConfig {
        q_offset: 0.0,
        file: None,
    });

    let s = cfg.signal_source()?.build(g, rng)?;
    io::write_signal_json(&out.join("signal.json"), &s)?;
    let reference = bandlimit_project(&s, &band)?;
    let samples = match &sample_cfg.file {
        Some(path) => io::read_samples_csv(path, g)
            .with_context(|| format!("reading samples {}", path.display()))?,
        None => extract_samples(&reference, sample_cfg.q_offset)?,
    };
    io::write_samples_csv(&out.join("samples.csv"), &samples)?;

    let sinc = reconstruct_sinc(&samples, &band, g)?;
    let cauchy = reconstruct_cauchy(&samples, g)?;
    io::write_signal_csv(&out.join("reconstruction_sinc.csv"), &sinc)?;
    io::write_signal_csv(&out.join("reconstruction_cauchy.csv"), &cauchy)?;

    let (sinc_max, sinc_l2) = reconstruction_errors(&sinc, &reference);
    let (cauchy_max, cauchy_l2) = reconstruction_errors(&cauchy, &reference);
    let formulas_agreement = sinc.max_abs_diff(&cauchy) / g.dq().sqrt();
    let consistency = consistency_residual(&samples, &band)?;
    let dep_const = dependence_residual(&samples, &[1.0])?;
    let dep_linear = dependence_residual(&samples, &[0.0, 1.0])?;

    let tol = cfg.tolerances.reconstruction;
    let pass = sinc_l2 <= tol && cauchy_l2 <= tol;
    write_report(
        out,
        "sample",
        seed,
        cfg,
        SampleResults {
            sinc: ReconstructionReport {
                formula: "sinc".into(),
                p0: band.p0,
                q0: g.q0(),
                q_offset: samples.q_offset,
                max_error: sinc_max,
                l2_error: sinc_l2,
            },
            cauchy: ReconstructionReport {
                formula: "cauchy".into(),
                p0: band.p0,
                q0: g.q0(),
                q_offset: samples.q_offset,
                max_error: cauchy_max,
                l2_error: cauchy_l2,
            },
            formulas_agreement,
            consistency_residual: consistency,
            dependence_residual_const: dep_const,
            dependence_residual_linear: dep_linear,
            tolerance: tol,
            pass,
        },
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct LatticeResults {
    states: usize,
    totality: (bool, f64),
    orthonormality: (bool, f64),
    numerical_rank: usize,
    frame_bounds: (f64, f64),
    condition: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    recovery: Option<RecoveryResults>,
    pass: bool,
}

#[derive(Serialize)]
struct RecoveryResults {
    relative_error: f64,
    ill_conditioned_bands: Vec<i64>,
    band_conditions: Vec<(i64, f64)>,
}

pub fn cmd_lattice(cfg: &RunConfig, out: &Path, seed: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = cfg.grid.build()?;
    let lattice_cfg = cfg
        .lattice
        .as_ref()
        .ok_or_else(|| anyhow!("lattice command needs a `lattice` section"))?;
    let spec = lattice_cfg.spec();
    spec.validate(&g)?;
    let fid = FiducialVector::new(&lattice_cfg.fiducial.build(g, rng)?);
    io::write_signal_json(&out.join("fiducial.json"), fid.signal())?;
    let lat = build_lattice(&fid, &spec)?;
    let totality = totality_test(&fid);
    let orthonormality = orthonormality_test(&fid);
    let gram = gram_analysis(&lat);
    io::write_gram_json(&out.join("gram.json"), &gram)?;
    io::write_singular_values_csv(&out.join("singular_values.csv"), &gram)?;

    let mut pass = true;
    let recovery = match &cfg.signal {
        None => None,
        Some(src) => {
            let psi = src.build(g, rng)?;
            let inner = lattice_inner_products(&lat, &psi)?;
            let rec = projected_reconstruct(&lat, &inner)?;
            // recovery is judged against the band-projected part of ψ the
            // lattice can see
            let mut seen = Signal::zero(g);
            for m in spec.m_range.0..=spec.m_range.1 {
                let part =
                    bandlimit_project(&psi, &phasegrid::sampling::BandSpec::new(spec.p0, m))?;
                seen = seen.add(&part)?;
            }
            let relative_error = rec.signal.relative_error(&seen);
            let ill: Vec<i64> = rec
                .bands
                .iter()
                .filter(|b| b.ill_conditioned)
                .map(|b| b.m)
                .collect();
            pass = ill.is_empty() && relative_error <= cfg.tolerances.reconstruction;
            Some(RecoveryResults {
                relative_error,
                ill_conditioned_bands: ill,
                band_conditions: rec.bands.iter().map(|b| (b.m, b.condition)).collect(),
            })
        }
    };

    write_report(
        out,
        "lattice",
        seed,
        cfg,
        LatticeResults {
            states: lat.states.len(),
            totality,
            orthonormality,
            numerical_rank: gram.numerical_rank,
            frame_bounds: gram.frame_bounds,
            condition: gram.condition,
            recovery,
            pass,
        },
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct WignerResults {
    imag_residue: f64,
    marginal_position_residual: f64,
    marginal_momentum_residual: f64,
    total_mass_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    comb: Option<phasegrid::CombWignerReport>,
    tolerance: f64,
    pass: bool,
}

pub fn cmd_wigner(cfg: &RunConfig, out: &Path, seed: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = cfg.grid.build()?;
    let s = cfg.signal_source()?.build(g, rng)?;
    io::write_signal_json(&out.join("signal.json"), &s)?;
    let w = wigner_transform(&s);
    let wigner_cfg = cfg.wigner.clone().unwrap_or(crate::config::WignerConfig {
        comb_epsilon_cells: None,
        skip_matrix: false,
    });
    if !wigner_cfg.skip_matrix {
        io::write_wigner_csv(
            &out.join("wigner.csv"),
            &out.join("wigner_sidecar.json"),
            &w,
        )?;
    }

    let mom = s.to_momentum();
    let mq = w.marginal_position();
    let mp = w.marginal_momentum();
    let mut marginal_position_residual = 0.0f64;
    let mut marginal_momentum_residual = 0.0f64;
    for j in 0..g.n() {
        marginal_position_residual =
            marginal_position_residual.max((mq[j] - s.values[j].norm_sqr() / g.dq()).abs());
        marginal_momentum_residual =
            marginal_momentum_residual.max((mp[j] - mom.values[j].norm_sqr() / g.dp()).abs());
    }
    let total_mass_residual = (w.total_mass() - s.norm_sq()).abs();

    let tol = cfg.tolerances.wigner;
    let mut pass = w.imag_residue <= tol
        && marginal_position_residual <= tol
        && marginal_momentum_residual <= tol
        && total_mass_residual <= tol;

    let comb = match wigner_cfg.comb_epsilon_cells {
        None => None,
        Some(eps_cells) => {
            let report = comb_wigner_check(g, eps_cells * g.q0())?;
            pass = pass && report.passes(tol);
            Some(report)
        }
    };

    write_report(
        out,
        "wigner",
        seed,
        cfg,
        WignerResults {
            imag_residue: w.imag_residue,
            marginal_position_residual,
            marginal_momentum_residual,
            total_mass_residual,
            comb,
            tolerance: tol,
            pass,
        },
    )?;
    Ok(pass)
}

#[derive(Serialize)]
struct PoissonResults {
    points: usize,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

pub fn cmd_poisson(cfg: &RunConfig, out: &Path, seed: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    let g = cfg.grid.build()?;
    let s = cfg.signal_source()?.build(g, rng)?;
    io::write_signal_json(&out.join("signal.json"), &s)?;
    let points = cfg.poisson.as_ref().map(|p| p.points).unwrap_or(100);
    let mut max_residual = phasegrid::sampling::poisson_residual(&s, 0.0, 0.0)?;
    for _ in 0..points {
        let tq = rng.random_range(-(g.l() as i64) / 2..=(g.l() as i64) / 2);
        let tp = rng.random_range(-(g.m() as i64) / 2..=(g.m() as i64) / 2);
        let r = phasegrid::sampling::poisson_residual(&s, tq as f64 * g.dq(), tp as f64 * g.dp())?;
        max_residual = max_residual.max(r);
    }
    let tol = cfg.tolerances.poisson;
    let pass = max_residual <= tol;
    write_report(
        out,
        "poisson",
        seed,
        cfg,
        PoissonResults {
            points,
            max_residual,
            tolerance: tol,
            pass,
        },
    )?;
    Ok(pass)
}
