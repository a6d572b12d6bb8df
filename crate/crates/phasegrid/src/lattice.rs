//! Standard and generalized coherent states, smoothing operators, von
//! Neumann and finer lattices, totality / orthonormality criteria, Gram and
//! frame diagnostics, and the projected-lattice sampling reconstruction.
//!
//! Totality of a lattice on the finite grid is probed two independent ways:
//! the Zak zero criterion (min |χ₀| over R(q₀), exact at grid resolution) and
//! the SVD numerical rank of a truncated lattice's synthesis map. Truncation
//! makes the second only indicative, so reports carry both.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fiducial::FiducialVector;
use crate::fourier::{apply_momentum_multiplier, fourier_forward, fourier_inverse};
use crate::grid::GridSpec;
use crate::sampling::{reconstruct_sinc, BandSpec, SampleSet};
use crate::signal::{displace, MomentumSignal, PhasePoint, Signal};

/// Truncated-SVD cutoff for least-squares inversions: the von Neumann
/// lattice is marginally complete (overcomplete by exactly one vector), so
/// naive inversion is unstable.
pub const SVD_CUTOFF: f64 = 1e-8;

/// Per-band condition cap beyond which a reconstruction band is flagged.
pub const CONDITION_CAP: f64 = 1e10;

/// A von Neumann (p₀ = 2π/q₀) or finer (p₀ < 2π/q₀) lattice of displaced
/// fiducial states, with inclusive index ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    pub q0: f64,
    pub p0: f64,
    pub n_range: (i64, i64),
    pub m_range: (i64, i64),
}

impl LatticeSpec {
    /// Full-period von Neumann lattice for the grid: n over all M cells,
    /// a single m row.
    pub fn von_neumann_row(g: &GridSpec) -> LatticeSpec {
        LatticeSpec {
            q0: g.q0(),
            p0: g.p_cell(),
            n_range: (-(g.m() as i64) / 2, g.m() as i64 / 2 - 1),
            m_range: (0, 0),
        }
    }

    pub fn validate(&self, g: &GridSpec) -> Result<()> {
        if !(self.q0 > 0.0 && self.p0 > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "lattice steps must be positive: q0 = {}, p0 = {}",
                self.q0, self.p0
            )));
        }
        if self.q0 * self.p0 > TAU * (1.0 + 1e-12) {
            return Err(Error::InvalidGrid(format!(
                "q0*p0 = {} exceeds 2*pi: lattice coarser than von Neumann",
                self.q0 * self.p0
            )));
        }
        if self.n_range.0 > self.n_range.1 || self.m_range.0 > self.m_range.1 {
            return Err(Error::InvalidGrid("empty lattice index range".into()));
        }
        g.position_steps(self.q0)?;
        g.momentum_steps(self.p0)?;
        Ok(())
    }

    pub fn n_count(&self) -> usize {
        (self.n_range.1 - self.n_range.0 + 1) as usize
    }

    pub fn m_count(&self) -> usize {
        (self.m_range.1 - self.m_range.0 + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.n_count() * self.m_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Lattice points in storage order: n outer, m inner.
    pub fn points(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.len());
        for n in self.n_range.0..=self.n_range.1 {
            for m in self.m_range.0..=self.m_range.1 {
                out.push((n, m));
            }
        }
        out
    }
}

/// The states D(nq₀, mp₀)|ψ₀⟩ of a lattice, each exactly unit norm.
#[derive(Debug, Clone)]
pub struct GcsLattice {
    pub spec: LatticeSpec,
    pub fiducial: FiducialVector,
    pub states: Vec<Signal>,
}

impl GcsLattice {
    pub fn state(&self, n: i64, m: i64) -> &Signal {
        let ni = (n - self.spec.n_range.0) as usize;
        let mi = (m - self.spec.m_range.0) as usize;
        &self.states[ni * self.spec.m_count() + mi]
    }
}

/// Gram and synthesis-map diagnostics for a family of states.
#[derive(Debug, Clone)]
pub struct GramReport {
    pub gram: DMatrix<Complex64>,
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    /// Frame bounds on the spanned subspace: (σ_r², σ_1²) over kept values.
    pub frame_bounds: (f64, f64),
    pub condition: f64,
}

/// Per-band outcome of the projected reconstruction.
#[derive(Debug, Clone)]
pub struct BandReport {
    pub m: i64,
    pub condition: f64,
    pub rank: usize,
    pub ill_conditioned: bool,
}

/// Reconstruction result; ill-conditioned bands are reported rather than
/// fatal, and their regularized partial solution is included.
#[derive(Debug, Clone)]
pub struct ProjectedReconstruction {
    pub signal: Signal,
    pub bands: Vec<BandReport>,
}

impl ProjectedReconstruction {
    pub fn any_ill_conditioned(&self) -> bool {
        self.bands.iter().any(|b| b.ill_conditioned)
    }
}

/// Normalized coherent state sampled from the closed form
/// ⟨q'|z⟩ = π^{-1/4} exp{-iqp/2 + ipq' − (q'−q)²/2}, z = (q+ip)/√2.
/// Unlike `displace` this accepts arbitrary (q,p); a warning is logged when
/// the Gaussian does not fit the periodic window.
pub fn standard_cs(g: GridSpec, q: f64, p: f64) -> Signal {
    let s = Signal::from_wavefunction(g, |x| {
        Complex64::from_polar(
            PI.powf(-0.25) * (-(x - q) * (x - q) / 2.0).exp(),
            p * (x - q / 2.0),
        )
    });
    let half = g.period() / 2.0;
    let tail = s.values[0].norm().max(s.values[g.n() - 1].norm());
    if tail > 1e-8 {
        log::warn!(
            "coherent state at q = {q} has boundary amplitude {tail:.3e}; \
             window [-{half}, {half}) too small"
        );
    }
    s
}

/// Which smoothing operator to apply.
#[derive(Debug, Clone, Copy)]
pub enum Smoothing<'a> {
    /// S₁ = e^{-q̂²/2}: multiply by a Gaussian in position.
    S1,
    /// S₂ = e^{-p̂²/2}: multiply by a Gaussian in momentum.
    S2,
    /// S = φ₀(p̂) for the given fiducial momentum wavefunction, which must be
    /// pointwise nonvanishing on the grid.
    Fiducial(&'a MomentumSignal),
}

/// Apply one of the smoothing operators. All three are diagonal (in q or in
/// p), hence normal, and the momentum-diagonal ones commute with every band
/// projector P_m.
pub fn smoothing_apply(s: &Signal, which: Smoothing<'_>) -> Result<Signal> {
    match which {
        Smoothing::S1 => {
            let mut out = s.clone();
            for (j, v) in out.values.iter_mut().enumerate() {
                let q = s.grid.position(j);
                *v *= (-q * q / 2.0).exp();
            }
            Ok(out)
        }
        Smoothing::S2 => Ok(apply_momentum_multiplier(s, |p| {
            Complex64::new((-p * p / 2.0).exp(), 0.0)
        })),
        Smoothing::Fiducial(phi0) => {
            s.grid.same_as(&phi0.grid)?;
            let root = phi0.grid.dp().sqrt();
            let min_abs = phi0
                .values
                .iter()
                .map(|v| v.norm())
                .fold(f64::INFINITY, f64::min)
                / root;
            if min_abs < 1e-13 {
                return Err(Error::NonvanishingViolated { min_abs });
            }
            let mut m = fourier_forward(s);
            for (k, v) in m.values.iter_mut().enumerate() {
                *v *= phi0.values[k] / root;
            }
            Ok(fourier_inverse(&m))
        }
    }
}

/// Build the lattice states D(nq₀, mp₀)|ψ₀⟩. For p₀ = 2π/q₀ the group phases
/// reproduce the (−1)^{mn} of the von Neumann lattice automatically.
pub fn build_lattice(f: &FiducialVector, spec: &LatticeSpec) -> Result<GcsLattice> {
    let g = f.grid();
    spec.validate(&g)?;
    let mut states = Vec::with_capacity(spec.len());
    for (n, m) in spec.points() {
        states.push(displace(
            f.signal(),
            PhasePoint::new(n as f64 * spec.q0, m as f64 * spec.p0),
        )?);
    }
    Ok(GcsLattice {
        spec: *spec,
        fiducial: f.clone(),
        states,
    })
}

/// Von Neumann lattice totality criterion: χ₀(q,p) ≠ 0 on R(q₀).
/// Returns (total at grid resolution, min |χ₀|), with the zero threshold
/// 1e-6·max |χ₀|.
pub fn totality_test(f: &FiducialVector) -> (bool, f64) {
    let min = f.chi0().min_abs();
    let max = f.chi0().max_abs();
    (min > 1e-6 * max, min)
}

/// Von Neumann lattice orthonormality criterion: |χ₀(q,p)| constant on
/// R(q₀). With the unitarity normalization the constant is (2π)^{-1/2}, so
/// the deviation reported is max | √(2π)·|χ₀| − 1 |.
pub fn orthonormality_test(f: &FiducialVector) -> (bool, f64) {
    let dev = f
        .chi0()
        .values
        .iter()
        .map(|v| (TAU.sqrt() * v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    (dev < 1e-8, dev)
}

/// Gram matrix, synthesis-map SVD, numerical rank and frame bounds for an
/// arbitrary family of states (dense linear algebra; keep families modest).
pub fn gram_analysis_states(states: &[Signal]) -> GramReport {
    let k = states.len();
    let n = if k == 0 { 0 } else { states[0].grid.n() };
    let synthesis = DMatrix::from_fn(n, k, |r, c| states[c].values[r]);
    let gram = synthesis.adjoint() * &synthesis;
    let svd = synthesis.svd(false, false);
    let mut singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    singular_values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let rank = singular_values
        .iter()
        .filter(|&&s| s > SVD_CUTOFF * smax)
        .count();
    let smin_kept = if rank > 0 {
        singular_values[rank - 1]
    } else {
        0.0
    };
    let frame_bounds = (smin_kept * smin_kept, smax * smax);
    let condition = if frame_bounds.0 > 0.0 {
        frame_bounds.1 / frame_bounds.0
    } else {
        f64::INFINITY
    };
    GramReport {
        gram,
        singular_values,
        numerical_rank: rank,
        frame_bounds,
        condition,
    }
}

/// Gram/frame diagnostics of a built lattice.
pub fn gram_analysis(lat: &GcsLattice) -> GramReport {
    gram_analysis_states(&lat.states)
}

/// Truncated-SVD least squares: returns (solution, condition of the full
/// system before truncation, kept rank). The full condition is what flags a
/// band as ill-posed; the truncation only stabilizes the returned solution.
fn tsvd_solve(a: &DMatrix<Complex64>, b: &DVector<Complex64>) -> (DVector<Complex64>, f64, usize) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let vt = svd.v_t.as_ref().expect("svd with v_t");
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin_all = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let mut rank = 0usize;
    let r = svd.singular_values.len();
    let mut coeff = DVector::<Complex64>::zeros(r);
    let utb = u.adjoint() * b;
    for i in 0..r {
        let s = svd.singular_values[i];
        if s > SVD_CUTOFF * smax {
            coeff[i] = utb[i] / s;
            rank += 1;
        }
    }
    let x = vt.adjoint() * coeff;
    let condition = if smin_all > 0.0 {
        smax / smin_all
    } else {
        f64::INFINITY
    };
    (x, condition, rank)
}

/// Recover ψ from the inner products `c[n][m] = ⟨D(nq₀,mp₀)ψ₀, P_m(p₀)ψ⟩`,
/// band by band: within each m the unknown is P_mψ restricted to its band
/// bins, solved by truncated-SVD least squares, and the bands are summed
/// (H = ⊕_m H_m). Bands whose condition exceeds [`CONDITION_CAP`] are
/// flagged in the report; their regularized solution is still included.
pub fn projected_reconstruct(
    lat: &GcsLattice,
    inner_products: &DMatrix<Complex64>,
) -> Result<ProjectedReconstruction> {
    let g = lat.fiducial.grid();
    let spec = &lat.spec;
    if inner_products.nrows() != spec.n_count() || inner_products.ncols() != spec.m_count() {
        return Err(Error::GridMismatch(format!(
            "inner-product matrix is {}x{}, lattice is {}x{}",
            inner_products.nrows(),
            inner_products.ncols(),
            spec.n_count(),
            spec.m_count()
        )));
    }
    let mut momentum = MomentumSignal::zero(g);
    let mut bands = Vec::with_capacity(spec.m_count());
    for (mi, m) in (spec.m_range.0..=spec.m_range.1).enumerate() {
        let band = BandSpec::new(spec.p0, m);
        let bins = band.bins(&g)?;
        let rows = spec.n_count();
        let mut a = DMatrix::<Complex64>::zeros(rows, bins.len());
        for (r, n) in (spec.n_range.0..=spec.n_range.1).enumerate() {
            let state_m = fourier_forward(lat.state(n, m));
            for (c, &bin) in bins.iter().enumerate() {
                a[(r, c)] = state_m.values[bin].conj();
            }
        }
        let b = DVector::from_fn(rows, |r, _| inner_products[(r, mi)]);
        let (x, condition, rank) = tsvd_solve(&a, &b);
        for (c, &bin) in bins.iter().enumerate() {
            momentum.values[bin] += x[c];
        }
        bands.push(BandReport {
            m,
            condition,
            rank,
            ill_conditioned: condition > CONDITION_CAP,
        });
    }
    Ok(ProjectedReconstruction {
        signal: fourier_inverse(&momentum),
        bands,
    })
}

/// Sampling theorem in coherent-state form: reconstruct a band-limited
/// signal s ∈ H₀(p₀) from the single row of inner products
/// ⟨nq₀, 0; ψ₀ | s⟩ = √(2π)·(S†s)(nq₀), by sinc-reconstructing S†s from its
/// samples and then deconvolving by φ₀ on the band. Returns the relative
/// reconstruction error. Band bins where |φ₀| < 1e-13 are dropped, so a
/// fiducial violating the nonvanishing hypothesis shows up as a large error
/// rather than a NaN.
pub fn st_equivalence_check(f: &FiducialVector, s: &Signal, band: &BandSpec) -> Result<f64> {
    let g = f.grid();
    g.same_as(&s.grid)?;
    if band.m != 0 {
        return Err(Error::InvalidBand("expected the base band (m = 0)".into()));
    }
    let m_cells = g.m() as i64;
    let mut values = Vec::with_capacity(g.m());
    for i in 0..g.m() {
        let n = i as i64 - m_cells / 2;
        let state = displace(f.signal(), PhasePoint::new(n as f64 * g.q0(), 0.0))?;
        values.push(state.inner(s) / TAU.sqrt());
    }
    let samples = SampleSet {
        grid: g,
        q_offset: 0.0,
        values,
    };
    let sds = reconstruct_sinc(&samples, band, g)?;
    let mut mom = fourier_forward(&sds);
    let root = g.dp().sqrt();
    let bins = band.bins(&g)?;
    let mut keep = vec![false; g.n()];
    for &k in &bins {
        keep[k] = true;
    }
    for (k, v) in mom.values.iter_mut().enumerate() {
        if !keep[k] {
            *v = Complex64::ZERO;
            continue;
        }
        let phi0 = f.momentum().values[k] / root;
        if phi0.norm() < 1e-13 {
            *v = Complex64::ZERO;
        } else {
            *v /= phi0.conj();
        }
    }
    let rec = fourier_inverse(&mom);
    Ok(rec.relative_error(s))
}

/// Convenience: inner products ⟨state_{nm}, P_m ψ⟩ for a signal, arranged to
/// feed [`projected_reconstruct`].
pub fn lattice_inner_products(lat: &GcsLattice, psi: &Signal) -> Result<DMatrix<Complex64>> {
    let spec = &lat.spec;
    let mut out = DMatrix::<Complex64>::zeros(spec.n_count(), spec.m_count());
    for (c, m) in (spec.m_range.0..=spec.m_range.1).enumerate() {
        let band = BandSpec::new(spec.p0, m);
        let projected = crate::sampling::bandlimit_project(psi, &band)?;
        for (r, n) in (spec.n_range.0..=spec.n_range.1).enumerate() {
            out[(r, c)] = lat.state(n, m).inner(&projected);
        }
    }
    Ok(out)
}
