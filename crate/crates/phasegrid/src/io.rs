//! File formats: signals as CSV (`index,q,re,im`) or self-describing JSON,
//! Zak arrays as JSON (row-major in j), sample sets as CSV (`n,q,re,im`),
//! Wigner arrays as CSV matrices with a JSON sidecar, reconstruction and
//! Gram reports as JSON. Values are the stored (√dq-embedded) samples.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::lattice::GramReport;
use crate::sampling::SampleSet;
use crate::signal::Signal;
use crate::wigner::WignerArray;
use crate::zak::{Convention, ZakArray};

#[derive(Serialize, Deserialize)]
struct GridDims {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    dq: f64,
}

#[derive(Serialize, Deserialize)]
struct SignalFile {
    grid: GridDims,
    values: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ZakFile {
    convention: Convention,
    #[serde(rename = "L")]
    l: usize,
    #[serde(rename = "M")]
    m: usize,
    q0: f64,
    values: Vec<[f64; 2]>,
}

/// Reconstruction summary emitted by the sampling pipelines.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub formula: String,
    pub p0: f64,
    pub q0: f64,
    pub q_offset: f64,
    pub max_error: f64,
    pub l2_error: f64,
}

pub fn write_signal_json(path: &Path, s: &Signal) -> Result<()> {
    let file = SignalFile {
        grid: GridDims {
            n: s.grid.n(),
            l: s.grid.l(),
            dq: s.grid.dq(),
        },
        values: s.values.iter().map(|v| [v.re, v.im]).collect(),
    };
    write_json(path, &file)
}

pub fn read_signal_json(path: &Path) -> Result<Signal> {
    let file: SignalFile = serde_json::from_reader(File::open(path)?)?;
    if file.grid.l == 0 || !file.grid.n.is_multiple_of(file.grid.l) {
        return Err(Error::MalformedFile(format!(
            "N = {} is not a multiple of L = {}",
            file.grid.n, file.grid.l
        )));
    }
    let grid = GridSpec::new(file.grid.l, file.grid.n / file.grid.l, file.grid.dq)?;
    if file.values.len() != grid.n() {
        return Err(Error::MalformedFile(format!(
            "expected {} values, found {}",
            grid.n(),
            file.values.len()
        )));
    }
    Ok(Signal {
        grid,
        values: file
            .values
            .iter()
            .map(|v| Complex64::new(v[0], v[1]))
            .collect(),
    })
}

pub fn write_signal_csv(path: &Path, s: &Signal) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "q", "re", "im"])?;
    for (j, v) in s.values.iter().enumerate() {
        w.write_record(&[
            j.to_string(),
            format!("{:.17e}", s.grid.position(j)),
            format!("{:.17e}", v.re),
            format!("{:.17e}", v.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal_csv(path: &Path, grid: GridSpec) -> Result<Signal> {
    let mut r = csv::Reader::from_path(path)?;
    let mut values = vec![Complex64::ZERO; grid.n()];
    let mut seen = 0usize;
    for record in r.records() {
        let record = record?;
        if record.len() < 4 {
            return Err(Error::MalformedFile("expected index,q,re,im rows".into()));
        }
        let j: usize = record[0]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad index: {e}")))?;
        if j >= grid.n() {
            return Err(Error::MalformedFile(format!("index {j} out of range")));
        }
        let re: f64 = record[2]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad re: {e}")))?;
        let im: f64 = record[3]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad im: {e}")))?;
        values[j] = Complex64::new(re, im);
        seen += 1;
    }
    if seen != grid.n() {
        return Err(Error::MalformedFile(format!(
            "expected {} rows, found {seen}",
            grid.n()
        )));
    }
    Ok(Signal { grid, values })
}

pub fn write_zak_json(path: &Path, z: &ZakArray) -> Result<()> {
    let file = ZakFile {
        convention: z.convention,
        l: z.grid.l(),
        m: z.grid.m(),
        q0: z.grid.q0(),
        values: z.values.iter().map(|v| [v.re, v.im]).collect(),
    };
    write_json(path, &file)
}

pub fn read_zak_json(path: &Path) -> Result<ZakArray> {
    let file: ZakFile = serde_json::from_reader(File::open(path)?)?;
    if file.l == 0 {
        return Err(Error::MalformedFile("L must be positive".into()));
    }
    let grid = GridSpec::with_cell(file.l, file.m, file.q0)?;
    if file.values.len() != file.l * file.m {
        return Err(Error::MalformedFile(format!(
            "expected {} values, found {}",
            file.l * file.m,
            file.values.len()
        )));
    }
    Ok(ZakArray {
        grid,
        convention: file.convention,
        values: file
            .values
            .iter()
            .map(|v| Complex64::new(v[0], v[1]))
            .collect(),
    })
}

pub fn write_samples_csv(path: &Path, set: &SampleSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["n", "q", "re", "im"])?;
    for (i, v) in set.values.iter().enumerate() {
        w.write_record(&[
            set.signed_index(i).to_string(),
            format!("{:.17e}", set.coordinate(i)),
            format!("{:.17e}", v.re),
            format!("{:.17e}", v.im),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_samples_csv(path: &Path, grid: GridSpec) -> Result<SampleSet> {
    let mut r = csv::Reader::from_path(path)?;
    let m = grid.m();
    let mut values = vec![Complex64::ZERO; m];
    let mut q_offset: Option<f64> = None;
    let mut seen = 0usize;
    for record in r.records() {
        let record = record?;
        if record.len() < 4 {
            return Err(Error::MalformedFile("expected n,q,re,im rows".into()));
        }
        let n: i64 = record[0]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad n: {e}")))?;
        let q: f64 = record[1]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad q: {e}")))?;
        let re: f64 = record[2]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad re: {e}")))?;
        let im: f64 = record[3]
            .parse()
            .map_err(|e| Error::MalformedFile(format!("bad im: {e}")))?;
        let i = n + m as i64 / 2;
        if i < 0 || i >= m as i64 {
            return Err(Error::MalformedFile(format!(
                "sample index {n} out of range"
            )));
        }
        values[i as usize] = Complex64::new(re, im);
        if n == 0 {
            q_offset = Some(q);
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::MalformedFile(format!(
            "expected {m} rows, found {seen}"
        )));
    }
    let q_offset = q_offset.ok_or_else(|| Error::MalformedFile("missing n = 0 row".into()))?;
    Ok(SampleSet {
        grid,
        q_offset,
        values,
    })
}

#[derive(Serialize)]
struct GramFile<'a> {
    states: usize,
    numerical_rank: usize,
    frame_bounds: (f64, f64),
    condition: f64,
    singular_values: &'a [f64],
    /// Row-major Gram entries as [re, im].
    gram: Vec<[f64; 2]>,
}

pub fn write_gram_json(path: &Path, report: &GramReport) -> Result<()> {
    let file = GramFile {
        states: report.gram.nrows(),
        numerical_rank: report.numerical_rank,
        frame_bounds: report.frame_bounds,
        condition: report.condition,
        singular_values: &report.singular_values,
        gram: report.gram.iter().map(|v| [v.re, v.im]).collect(),
    };
    write_json(path, &file)
}

/// Singular-value spectrum as a two-column CSV for plotting.
pub fn write_singular_values_csv(path: &Path, report: &GramReport) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "sigma"])?;
    for (i, s) in report.singular_values.iter().enumerate() {
        w.write_record(&[i.to_string(), format!("{s:.17e}")])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct WignerSidecar {
    #[serde(rename = "N")]
    n: usize,
    dq: f64,
    dp: f64,
}

/// Wigner matrix as CSV (row-major in the position index) plus a JSON
/// sidecar carrying {N, dq, dp} of the underlying grid.
pub fn write_wigner_csv(path: &Path, sidecar_path: &Path, w: &WignerArray) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    let side = w.side();
    for a in 0..side {
        let mut line = String::with_capacity(side * 12);
        for b in 0..side {
            if b > 0 {
                line.push(',');
            }
            line.push_str(&format!("{:.12e}", w.get(a, b)));
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    out.flush()?;
    write_json(
        sidecar_path,
        &WignerSidecar {
            n: w.grid.n(),
            dq: w.grid.dq(),
            dp: w.grid.dp(),
        },
    )
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::self_dual_grid;
    use crate::sampling::extract_samples;
    use crate::signal::random_signal;
    use crate::zak::zak_forward;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn signal_round_trips() {
        let dir = std::env::temp_dir().join("phasegrid-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let g = self_dual_grid(4, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        let s = random_signal(g, &mut rng);

        let json = dir.join("signal.json");
        write_signal_json(&json, &s).unwrap();
        let back = read_signal_json(&json).unwrap();
        assert_eq!(back.grid, g);
        assert!(s.max_abs_diff(&back) < 1e-15);

        let csv = dir.join("signal.csv");
        write_signal_csv(&csv, &s).unwrap();
        let back = read_signal_csv(&csv, g).unwrap();
        assert!(s.max_abs_diff(&back) < 1e-15);
    }

    #[test]
    fn zak_and_samples_round_trip() {
        let dir = std::env::temp_dir().join("phasegrid-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let g = self_dual_grid(4, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        let s = random_signal(g, &mut rng);

        let z = zak_forward(&s);
        let path = dir.join("zak.json");
        write_zak_json(&path, &z).unwrap();
        let back = read_zak_json(&path).unwrap();
        assert_eq!(back.convention, Convention::Angular);
        assert!(z.max_abs_diff(&back) < 1e-15);

        let set = extract_samples(&s, g.dq()).unwrap();
        let path = dir.join("samples.csv");
        write_samples_csv(&path, &set).unwrap();
        let back = read_samples_csv(&path, g).unwrap();
        assert!((back.q_offset - set.q_offset).abs() < 1e-15);
        for (a, b) in back.values.iter().zip(&set.values) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        let dir = std::env::temp_dir().join("phasegrid-io-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("broken.json");
        std::fs::write(&path, "{\"grid\": {\"N\": 4}").unwrap();
        assert!(read_signal_json(&path).is_err());
        let path = dir.join("empty.csv");
        std::fs::write(&path, "n,q,re,im\n").unwrap();
        let g = self_dual_grid(4, 4);
        assert!(matches!(
            read_samples_csv(&path, g),
            Err(Error::MalformedFile(_))
        ));
    }
}
