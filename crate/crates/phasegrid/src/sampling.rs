//! Poisson summation, band limiting, and sampling-theorem reconstruction.
//!
//! Band limiting uses the half-open convention: band m of width p₀ is
//! [(m−½)p₀, (m+½)p₀), lower edge in, upper edge out, so the projectors tile
//! the momentum axis without double counting.
//!
//! Reconstruction evaluates the two interpolation formulas
//!
//! ```text
//! sinc form:   ψ(q) = (q₀/π) Σ_n sin{p₀(q−q'−nq₀)/2} / (q−q'−nq₀) · ψ(q'+nq₀)
//! Cauchy form: ψ(q) = (q₀/π) sin{π(q−q')/q₀} Σ_n (−1)ⁿ ψ(q'+nq₀) / (q−q'−nq₀)
//! ```
//!
//! with the n-sum periodized over the grid. The symmetric sum over image
//! shifts ℓ·Q has an exact closed form (the grid is periodic, the line is
//! not, and the mismatch is bounded exactly rather than truncated):
//!
//! ```text
//! Σ_ℓ K(x − ℓQ) = (1/M) sin(p₀x/2) · cot(πx/Q)   (β = p₀/dp even)
//!               = (1/M) sin(p₀x/2) / sin(πx/Q)    (β odd)
//! ```
//!
//! the Dirichlet kernel of the band. At x ≡ 0 mod Q the removable singularity
//! is branched to the analytic limit β/M = q₀p₀/2π. Kernel angles at
//! grid-commensurate points are reduced in exact integer arithmetic, so the
//! kernels vanish identically where they should: at p₀ = 2π/q₀ the Cauchy and
//! sinc forms are the same expression term by term, and evaluation at a
//! sample point returns the sample exactly.

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fourier::{fourier_forward, fourier_inverse};
use crate::grid::GridSpec;
use crate::signal::Signal;

/// A momentum band [(m−½)p₀, (m+½)p₀), half-open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandSpec {
    /// Bandwidth p₀ > 0; must be an integer multiple of the grid dp.
    pub p0: f64,
    /// Band center index; band m is centered at m·p₀.
    pub m: i64,
}

impl BandSpec {
    pub fn new(p0: f64, m: i64) -> Self {
        BandSpec { p0, m }
    }

    pub fn base(p0: f64) -> Self {
        BandSpec { p0, m: 0 }
    }

    /// Number of dp-steps in the bandwidth, or an error when incommensurate.
    pub fn steps(&self, g: &GridSpec) -> Result<i64> {
        if !(self.p0 > 0.0 && self.p0.is_finite()) {
            return Err(Error::InvalidBand(format!(
                "p0 must be positive, got {}",
                self.p0
            )));
        }
        let r = self.p0 / g.dp();
        let beta = r.round();
        if (r - beta).abs() > 1e-9 * (1.0 + r) {
            return Err(Error::InvalidBand(format!(
                "p0 = {} is not a multiple of dp = {}",
                self.p0,
                g.dp()
            )));
        }
        Ok(beta as i64)
    }

    /// Momentum-grid indices of the band bins (half-open), or BandOutOfRange.
    pub fn bins(&self, g: &GridSpec) -> Result<Vec<usize>> {
        let beta = self.steps(g)?;
        let n = g.n() as i64;
        // bin κ is in band iff (2m−1)β ≤ 2(κ − N/2) < (2m+1)β
        let lo2 = (2 * self.m - 1) * beta;
        let hi2 = (2 * self.m + 1) * beta;
        if lo2 < -n || hi2 > n {
            return Err(Error::BandOutOfRange {
                lo: lo2 as f64 / 2.0 * g.dp(),
                hi: hi2 as f64 / 2.0 * g.dp(),
                min: -(n as f64) / 2.0 * g.dp(),
                max: n as f64 / 2.0 * g.dp(),
            });
        }
        Ok((0..g.n())
            .filter(|&k| {
                let two_steps = 2 * (k as i64 - n / 2);
                two_steps >= lo2 && two_steps < hi2
            })
            .collect())
    }
}

/// Equispaced samples ψ(q' + n·q₀); `values[i]` holds the wavefunction value
/// at n = i − M/2 (signed, centered), read cyclically on the periodic grid.
#[derive(Debug, Clone)]
pub struct SampleSet {
    pub grid: GridSpec,
    pub q_offset: f64,
    pub values: Vec<Complex64>,
}

impl SampleSet {
    /// Signed cell index of slot `i`.
    pub fn signed_index(&self, i: usize) -> i64 {
        i as i64 - self.grid.m() as i64 / 2
    }

    /// Coordinate q' + n·q₀ of slot `i` (unwrapped).
    pub fn coordinate(&self, i: usize) -> f64 {
        self.q_offset + self.signed_index(i) as f64 * self.grid.q0()
    }
}

/// Residual of the Poisson Summation Formula at a grid point (q,p) ∈ R(q₀):
///
/// ```text
/// q₀ Σ_n e^{-inq₀p} ψ(q+nq₀)  vs  √(2π) e^{iqp} Σ_n e^{2πinq/q₀} φ(p+2πn/q₀)
/// ```
///
/// with both sums running over the full periodic grid. Both sides are
/// evaluated literally from the position and momentum samples.
pub fn poisson_residual(s: &Signal, q: f64, p: f64) -> Result<f64> {
    let g = s.grid;
    let (half_q, half_p) = (g.q0() / 2.0, g.p_cell() / 2.0);
    if q.abs() > half_q * (1.0 + 1e-12) + 1e-12 || p.abs() > half_p * (1.0 + 1e-12) + 1e-12 {
        return Err(Error::OutOfRectangle {
            q,
            p,
            half_q,
            half_p,
        });
    }
    let t = g.position_steps(q)?;
    let y = g.momentum_steps(p)?;
    let n = g.n() as i64;

    let mut lhs = Complex64::ZERO;
    for cell in 0..g.m() {
        let idx = (t + (cell * g.l()) as i64 + n / 2).rem_euclid(n) as usize;
        let psi = s.values[idx] / g.dq().sqrt();
        lhs += psi * Complex64::from_polar(1.0, -(cell as f64) * g.q0() * p);
    }
    lhs *= g.q0();

    let mom = fourier_forward(s);
    let mut rhs = Complex64::ZERO;
    for cell in 0..g.l() {
        let idx = (y + (cell * g.m()) as i64 + n / 2).rem_euclid(n) as usize;
        let phi = mom.values[idx] / g.dp().sqrt();
        rhs += phi * Complex64::from_polar(1.0, TAU * cell as f64 * q / g.q0());
    }
    rhs *= TAU.sqrt() * Complex64::from_polar(1.0, q * p);

    Ok((lhs - rhs).norm())
}

/// Project onto the band: zero φ outside [(m−½)p₀, (m+½)p₀). Idempotent and
/// hermitian (a real 0/1 multiplier in momentum).
pub fn bandlimit_project(s: &Signal, b: &BandSpec) -> Result<Signal> {
    let bins = b.bins(&s.grid)?;
    let mut keep = vec![false; s.grid.n()];
    for k in bins {
        keep[k] = true;
    }
    let mut m = fourier_forward(s);
    for (k, v) in m.values.iter_mut().enumerate() {
        if !keep[k] {
            *v = Complex64::ZERO;
        }
    }
    Ok(fourier_inverse(&m))
}

/// Read the stride-L subsequence ψ(q' + n·q₀), n = -M/2 .. M/2 - 1.
pub fn extract_samples(s: &Signal, q_offset: f64) -> Result<SampleSet> {
    let g = s.grid;
    let steps = g
        .position_steps(q_offset)
        .map_err(|_| Error::NonCommensurateOffset {
            offset: q_offset,
            dq: g.dq(),
        })?;
    if q_offset.abs() > g.q0() / 2.0 + 1e-12 {
        return Err(Error::OutOfRectangle {
            q: q_offset,
            p: 0.0,
            half_q: g.q0() / 2.0,
            half_p: g.p_cell() / 2.0,
        });
    }
    let n = g.n() as i64;
    let values = (0..g.m())
        .map(|i| {
            let signed = i as i64 - g.m() as i64 / 2;
            let idx = (steps + signed * g.l() as i64 + n / 2).rem_euclid(n) as usize;
            s.values[idx] / g.dq().sqrt()
        })
        .collect();
    Ok(SampleSet {
        grid: g,
        q_offset,
        values,
    })
}

/// sin(π·num/den) with the angle reduced in integer arithmetic; exact zeros
/// at integer multiples of π.
fn sin_pi_frac(num: i64, den: i64) -> f64 {
    let r = num.rem_euclid(2 * den);
    if r % den == 0 {
        return 0.0;
    }
    (PI * r as f64 / den as f64).sin()
}

fn cos_pi_frac(num: i64, den: i64) -> f64 {
    let r = num.rem_euclid(2 * den);
    if 2 * r % den == 0 && (2 * r / den) % 2 == 1 {
        return 0.0; // odd multiples of π/2
    }
    (PI * r as f64 / den as f64).cos()
}

/// Angles (p₀x/2, πx/Q) as exact fractions of π when x is grid-commensurate.
struct KernelAngle {
    /// x / dq when commensurate, carried as an integer.
    steps: Option<i64>,
    x: f64,
}

impl KernelAngle {
    fn new(x: f64, g: &GridSpec) -> Self {
        let r = x / g.dq();
        let t = r.round();
        if (r - t).abs() < 1e-9 * (1.0 + r.abs()) {
            KernelAngle {
                steps: Some(t as i64),
                x,
            }
        } else {
            KernelAngle { steps: None, x }
        }
    }

    fn sin_band(&self, beta: i64, g: &GridSpec) -> f64 {
        // sin(p₀x/2) = sin(π·βt/N)
        match self.steps {
            Some(t) => sin_pi_frac(beta * t, g.n() as i64),
            None => (PI * beta as f64 * self.x / g.period()).sin(),
        }
    }

    fn sin_period(&self, g: &GridSpec) -> f64 {
        match self.steps {
            Some(t) => sin_pi_frac(t, g.n() as i64),
            None => (PI * self.x / g.period()).sin(),
        }
    }

    fn cos_period(&self, g: &GridSpec) -> f64 {
        match self.steps {
            Some(t) => cos_pi_frac(t, g.n() as i64),
            None => (PI * self.x / g.period()).cos(),
        }
    }

    fn at_singularity(&self, g: &GridSpec) -> bool {
        match self.steps {
            Some(t) => t.rem_euclid(g.n() as i64) == 0,
            None => {
                let d = self.x / g.period();
                (d - d.round()).abs() * g.period() < 1e-9 * g.q0()
            }
        }
    }
}

/// Periodized band-limited interpolation kernel Σ_ℓ K(x − ℓQ).
fn sinc_kernel_periodized(x: f64, beta: i64, g: &GridSpec) -> f64 {
    let angle = KernelAngle::new(x, g);
    let m = g.m() as f64;
    if angle.at_singularity(g) {
        return beta as f64 / m;
    }
    let num = angle.sin_band(beta, g);
    let den = angle.sin_period(g);
    if beta % 2 == 0 {
        num * angle.cos_period(g) / (den * m)
    } else {
        num / (den * m)
    }
}

/// Sinc-form reconstruction from samples at spacing q₀, band [(−½)p₀, ½p₀).
/// Refuses p₀ > 2π/q₀ rather than alias silently. Exact on the grid for
/// signals supported in the band (away from the edge bins when β = M).
pub fn reconstruct_sinc(samples: &SampleSet, b: &BandSpec, target: GridSpec) -> Result<Signal> {
    if b.m != 0 {
        return Err(Error::InvalidBand(format!(
            "sinc reconstruction expects the base band (m = 0), got m = {}",
            b.m
        )));
    }
    let src = samples.grid;
    let beta = b.steps(&src)?;
    if beta > src.m() as i64 {
        return Err(Error::BandwidthTooLarge {
            p0: b.p0,
            limit: src.p_cell(),
        });
    }
    let mut out = Signal::zero(target);
    let root = target.dq().sqrt();
    for j in 0..target.n() {
        let q = target.position(j);
        let mut acc = Complex64::ZERO;
        for (i, &s) in samples.values.iter().enumerate() {
            let x = q - samples.coordinate(i);
            acc += s * sinc_kernel_periodized(x, beta, &src);
        }
        out.values[j] = acc * root;
    }
    Ok(out)
}

/// Cauchy-form reconstruction. The bandwidth does not appear; the formula is
/// valid for signals band-limited with p₀ < 2π/q₀ (garbage in, garbage out
/// otherwise). At sample points the kernel is exactly the Kronecker delta, so
/// samples are returned unchanged.
pub fn reconstruct_cauchy(samples: &SampleSet, target: GridSpec) -> Result<Signal> {
    let src = samples.grid;
    let mut out = Signal::zero(target);
    let root = target.dq().sqrt();
    for j in 0..target.n() {
        let q = target.position(j);
        let mut acc = Complex64::ZERO;
        for (i, &s) in samples.values.iter().enumerate() {
            let x = q - samples.coordinate(i);
            let angle = KernelAngle::new(x, &src);
            let k = if angle.at_singularity(&src) {
                1.0
            } else {
                // sin(π(q−q')/q₀)·(−1)ⁿ = sin(π·(x/q₀ + n))·... carried via
                // the same reduced angle: sin(π(q−q')/q₀) (−1)ⁿ = sin(πx/q₀)
                let sin_cell = match angle.steps {
                    Some(t) => sin_pi_frac(t, src.l() as i64),
                    None => (PI * x / src.q0()).sin(),
                };
                sin_cell * angle.cos_period(&src) / (angle.sin_period(&src) * src.m() as f64)
            };
            acc += s * k;
        }
        out.values[j] = acc * root;
    }
    Ok(out)
}

/// Max over m of the residual of the sample consistency relation
///
/// ```text
/// ψ(q'+mq₀) = (q₀/π)[ (p₀/2)ψ(q'+mq₀) + Σ_{n≠m} sin{(m−n)q₀p₀/2}/((m−n)q₀) ψ(q'+nq₀) ]
/// ```
///
/// evaluated literally over the signed sample window. The coefficients are
/// reduced in integer arithmetic: at p₀ = 2π/q₀ every sine is exactly zero
/// and the prefactor exactly one, so the relation degenerates to an identity
/// with residual exactly 0.
pub fn consistency_residual(samples: &SampleSet, b: &BandSpec) -> Result<f64> {
    if b.m != 0 {
        return Err(Error::InvalidBand(format!(
            "consistency relation expects the base band (m = 0), got m = {}",
            b.m
        )));
    }
    let g = samples.grid;
    let beta = b.steps(&g)?;
    let m_cells = g.m() as i64;
    let mut worst = 0.0f64;
    for mi in 0..samples.values.len() {
        let mut rhs = samples.values[mi] * (beta as f64 / m_cells as f64);
        for (ni, &s) in samples.values.iter().enumerate() {
            if ni == mi {
                continue;
            }
            let d = samples.signed_index(mi) - samples.signed_index(ni);
            // (q₀/π)·sin((m−n)q₀p₀/2)/((m−n)q₀) = sin(π·dβ/M)/(πd)
            let coef = sin_pi_frac(d * beta, m_cells) / (PI * d as f64);
            rhs += s * coef;
        }
        worst = worst.max((samples.values[mi] - rhs).norm());
    }
    Ok(worst)
}

const DEPENDENCE_DEGREE_CAP: usize = 4;

/// Normalized residual of the linear dependence relation
/// Σ_n (−1)ⁿ P(nq₀) ψ(q'+nq₀) = 0, for a polynomial P given by coefficients
/// (constant first, degree ≤ 4), taken over the signed sample window.
pub fn dependence_residual(samples: &SampleSet, poly_coeffs: &[f64]) -> Result<f64> {
    let degree = poly_coeffs.len().saturating_sub(1);
    if degree > DEPENDENCE_DEGREE_CAP {
        return Err(Error::PolynomialDegreeTooHigh {
            degree,
            cap: DEPENDENCE_DEGREE_CAP,
        });
    }
    let eval = |z: f64| -> f64 { poly_coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c) };
    let mut num = Complex64::ZERO;
    let mut den = 0.0f64;
    for (i, &s) in samples.values.iter().enumerate() {
        let n = samples.signed_index(i);
        let w = eval(n as f64 * samples.grid.q0());
        let term = s * w;
        let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        num += term * sign;
        den += term.norm();
    }
    if den == 0.0 {
        Ok(0.0)
    } else {
        Ok(num.norm() / den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fiducial;
    use crate::fourier::self_dual_grid;
    use crate::signal::{random_signal, MomentumSignal};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian(g: GridSpec) -> Signal {
        fiducial::gaussian(g)
    }

    // ---- Poisson summation -------------------------------------------------

    #[test]
    fn poisson_gaussian_at_origin() {
        let g = self_dual_grid(16, 16);
        let s = Signal::from_wavefunction(g, |q| {
            Complex64::new(PI.powf(-0.25) * (-q * q / 2.0).exp(), 0.0)
        });
        assert!(poisson_residual(&s, 0.0, 0.0).unwrap() < 1e-12);

        // theta-function oracle: at (0,0) the left side is q₀ Σ_n ψ(nq₀),
        // summed here directly from the closed form
        let mut theta = 0.0;
        for n in -30i64..=30 {
            let x = n as f64 * g.q0();
            theta += PI.powf(-0.25) * (-x * x / 2.0).exp();
        }
        theta *= g.q0();
        let mut lhs = Complex64::ZERO;
        for cell in 0..g.m() {
            let idx = (g.n() / 2 + cell * g.l()) % g.n();
            lhs += s.values[idx] / g.dq().sqrt();
        }
        lhs *= g.q0();
        assert!((lhs - Complex64::new(theta, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn poisson_zero_signal() {
        let g = self_dual_grid(8, 8);
        assert_eq!(poisson_residual(&Signal::zero(g), 0.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn poisson_random_signals_random_points() {
        let g = self_dual_grid(8, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..5 {
            let s = random_signal(g, &mut rng);
            for _ in 0..20 {
                let tq = rng.random_range(-(g.l() as i64) / 2..=(g.l() as i64) / 2);
                let tp = rng.random_range(-(g.m() as i64) / 2..=(g.m() as i64) / 2);
                let r = poisson_residual(&s, tq as f64 * g.dq(), tp as f64 * g.dp()).unwrap();
                assert!(r < 1e-10, "residual {r}");
            }
        }
    }

    #[test]
    fn poisson_rejects_outside_rectangle() {
        let g = self_dual_grid(8, 8);
        let s = gaussian(g);
        assert!(matches!(
            poisson_residual(&s, g.q0(), 0.0),
            Err(Error::OutOfRectangle { .. })
        ));
    }

    // ---- band projection ---------------------------------------------------

    #[test]
    fn projector_is_idempotent_and_hermitian() {
        let g = self_dual_grid(8, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let b = BandSpec::base(8.0 * g.dp());
        let u = random_signal(g, &mut rng);
        let v = random_signal(g, &mut rng);
        let pu = bandlimit_project(&u, &b).unwrap();
        let ppu = bandlimit_project(&pu, &b).unwrap();
        assert!(pu.max_abs_diff(&ppu) < 1e-14);
        let pv = bandlimit_project(&v, &b).unwrap();
        let lhs = u.inner(&pv);
        let rhs = pu.inner(&v);
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn projectors_are_orthogonal_family() {
        let g = self_dual_grid(8, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let s = random_signal(g, &mut rng);
        let p0 = 4.0 * g.dp();
        let p_a = bandlimit_project(&s, &BandSpec::new(p0, 0)).unwrap();
        let p_ba = bandlimit_project(&p_a, &BandSpec::new(p0, 1)).unwrap();
        assert!(p_ba.norm() < 1e-14);
        // and a band-limited signal is a fixed point of its own band
        let again = bandlimit_project(&p_a, &BandSpec::new(p0, 0)).unwrap();
        assert!(p_a.max_abs_diff(&again) < 1e-14);
    }

    #[test]
    fn projected_norm_matches_quadrature_oracle() {
        // oracle: the closed-form momentum density summed over the band bins
        // (no FFT involved); erf(p₀/2) is the continuum value, checked loosely
        let g = GridSpec::new(16, 32, 0.08).unwrap();
        let s = Signal::from_wavefunction(g, |q| {
            Complex64::new(PI.powf(-0.25) * (-q * q / 2.0).exp(), 0.0)
        });
        let b = BandSpec::base((PI / g.dp()).round() * g.dp());
        let projected = bandlimit_project(&s, &b).unwrap();
        assert!(projected.norm() < s.norm());

        let mut oracle = 0.0;
        for k in b.bins(&g).unwrap() {
            let p = g.momentum(k);
            oracle += PI.powf(-0.5) * (-p * p).exp() * g.dp();
        }
        assert!((projected.norm_sq() - oracle).abs() < 1e-8);

        let erf_cont = erf(b.p0 / 2.0);
        assert!((projected.norm_sq() - erf_cont).abs() < 1e-2);
    }

    /// Abramowitz–Stegun 7.1.26 rational approximation, |error| < 1.5e-7.
    fn erf(x: f64) -> f64 {
        let sign = x.signum();
        let x = x.abs();
        let t = 1.0 / (1.0 + 0.3275911 * x);
        let y = 1.0
            - (((((1.061405429 * t - 1.453152027) * t) + 1.421413741) * t - 0.284496736) * t
                + 0.254829592)
                * t
                * (-x * x).exp();
        sign * y
    }

    #[test]
    fn band_out_of_range_rejected() {
        let g = self_dual_grid(8, 8);
        let b = BandSpec::new(4.0 * g.dp(), 40);
        assert!(matches!(b.bins(&g), Err(Error::BandOutOfRange { .. })));
        let bad = BandSpec::base(1.37 * g.dp());
        assert!(matches!(bad.steps(&g), Err(Error::InvalidBand(_))));
    }

    // ---- sample extraction -------------------------------------------------

    #[test]
    fn extract_comb_is_constant() {
        let g = self_dual_grid(8, 8);
        let comb = fiducial::comb(g);
        let set = extract_samples(&comb, 0.0).unwrap();
        let want = comb.values[g.n() / 2] / g.dq().sqrt();
        for v in &set.values {
            assert!((v - want).norm() < 1e-14);
        }
    }

    #[test]
    fn extract_gaussian_decimation() {
        let g = self_dual_grid(8, 16);
        let s = gaussian(g);
        let set = extract_samples(&s, 2.0 * g.dq()).unwrap();
        for i in 0..set.values.len() {
            let idx = (g.n() as i64 / 2 + 2 + set.signed_index(i) * g.l() as i64)
                .rem_euclid(g.n() as i64) as usize;
            let direct = s.values[idx] / g.dq().sqrt();
            assert!((set.values[i] - direct).norm() < 1e-14);
        }
        assert!((set.coordinate(g.m() / 2) - 2.0 * g.dq()).abs() < 1e-15);
    }

    #[test]
    fn extract_rejects_bad_offsets() {
        let g = self_dual_grid(8, 8);
        let s = gaussian(g);
        assert!(matches!(
            extract_samples(&s, 0.4 * g.dq()),
            Err(Error::NonCommensurateOffset { .. })
        ));
        assert!(extract_samples(&s, g.q0()).is_err());
    }

    // ---- reconstruction ----------------------------------------------------

    /// Band-limited test family: a projected Gaussian with the width chosen
    /// so both the momentum band-edge content and the position boundary tail
    /// are negligible; panics if the construction fails its own premises.
    fn test_band_signal(g: GridSpec, beta: i64, sigma: f64) -> (Signal, BandSpec) {
        let b = BandSpec::base(beta as f64 * g.dp());
        let raw = fiducial::gaussian_width(g, sigma);
        let s = bandlimit_project(&raw, &b).unwrap().normalized();
        let mom = fourier_forward(&s);
        let edge = b.p0 / 2.0;
        for k in 0..g.n() {
            let p = g.momentum(k);
            if (p.abs() - edge).abs() < 1.5 * g.dp() {
                assert!(
                    mom.values[k].norm() < 1e-12,
                    "band-edge content {} at p = {p}",
                    mom.values[k].norm()
                );
            }
        }
        let boundary = s.values[0].norm().max(s.values[g.n() - 1].norm());
        assert!(boundary < 1e-10, "boundary tail {boundary}");
        (s, b)
    }

    /// Geometry with q₀ small enough that σ = 1..4 Gaussians decay inside the
    /// requested band fractions.
    fn narrow_cell_grid() -> GridSpec {
        // q₀ = 0.4, M = 160 cells: Q = 64, p_cell = 2π/0.4 ≈ 15.7
        GridSpec::with_cell(8, 160, 0.4).unwrap()
    }

    #[test]
    fn sinc_reconstructs_critical_rate() {
        let g = narrow_cell_grid();
        let (s, b) = test_band_signal(g, g.m() as i64, 1.0);
        let set = extract_samples(&s, 0.0).unwrap();
        let rec = reconstruct_sinc(&set, &b, g).unwrap();
        let err = rec.relative_error(&s);
        assert!(err < 1e-8, "relative error {err}");
    }

    #[test]
    fn sinc_reconstructs_oversampled() {
        let g = narrow_cell_grid();
        for (beta, sigma) in [(g.m() as i64 / 2, 2.0), (g.m() as i64 / 4, 4.0)] {
            let (s, b) = test_band_signal(g, beta, sigma);
            for offset_steps in [0i64, 3, -2] {
                let set = extract_samples(&s, offset_steps as f64 * g.dq()).unwrap();
                let rec = reconstruct_sinc(&set, &b, g).unwrap();
                let err = rec.relative_error(&s);
                assert!(err < 1e-8, "beta {beta} offset {offset_steps}: error {err}");
            }
        }
    }

    #[test]
    fn sinc_odd_beta() {
        let g = narrow_cell_grid();
        let (s, b) = test_band_signal(g, 79, 2.0);
        let set = extract_samples(&s, -g.dq()).unwrap();
        let rec = reconstruct_sinc(&set, &b, g).unwrap();
        assert!(rec.relative_error(&s) < 1e-8);
    }

    #[test]
    fn reconstruction_quality_independent_of_offset() {
        // errors at machine level are floored so the max/min ratio measures
        // genuine offset dependence rather than rounding noise
        let g = narrow_cell_grid();
        let (s, b) = test_band_signal(g, g.m() as i64 / 2, 2.0);
        let floor = 1e-14;
        let errs: Vec<f64> = (-(g.l() as i64) / 2..=(g.l() as i64) / 2)
            .map(|steps| {
                let set = extract_samples(&s, steps as f64 * g.dq()).unwrap();
                let rec = reconstruct_sinc(&set, &b, g).unwrap();
                rec.relative_error(&s).max(floor)
            })
            .collect();
        let max = errs.iter().cloned().fold(0.0f64, f64::max);
        let min = errs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min < 10.0, "offset error spread {max:.2e}/{min:.2e}");
    }

    #[test]
    fn singleton_sample_reads_out_kernel() {
        let g = self_dual_grid(8, 16);
        let mut set = SampleSet {
            grid: g,
            q_offset: 0.0,
            values: vec![Complex64::ZERO; g.m()],
        };
        set.values[g.m() / 2] = Complex64::ONE;
        let b = BandSpec::base(g.p_cell());
        let rec = reconstruct_sinc(&set, &b, g).unwrap();
        let beta = g.m() as i64;
        for j in 0..g.n() {
            let x = g.position(j);
            let want = sinc_kernel_periodized(x, beta, &g);
            assert!((rec.values[j] / g.dq().sqrt() - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn periodized_kernel_matches_image_sum_oracle() {
        // symmetric partial sums of (q₀/π)·sin(p₀(x−ℓQ)/2)/(x−ℓQ) converge to
        // the closed form; pairs decay like 1/ℓ²
        let g = self_dual_grid(8, 16);
        for beta in [g.m() as i64, g.m() as i64 / 2, 5] {
            let p0 = beta as f64 * g.dp();
            for &x in &[0.37 * g.q0(), -1.93 * g.q0(), 3.1 * g.dq()] {
                let single = |y: f64| -> f64 {
                    if y.abs() < 1e-12 {
                        p0 / 2.0 * g.q0() / PI
                    } else {
                        g.q0() / PI * (p0 * y / 2.0).sin() / y
                    }
                };
                let mut oracle = single(x);
                for l in 1..200_000i64 {
                    let shift = l as f64 * g.period();
                    oracle += single(x - shift) + single(x + shift);
                }
                let closed = sinc_kernel_periodized(x, beta, &g);
                assert!(
                    (closed - oracle).abs() < 1e-7,
                    "beta {beta}, x {x}: closed {closed} vs oracle {oracle}"
                );
            }
        }
    }

    #[test]
    fn sinc_refuses_too_large_band() {
        let g = self_dual_grid(8, 8);
        let s = gaussian(g);
        let set = extract_samples(&s, 0.0).unwrap();
        let b = BandSpec::base(g.p_cell() + g.dp());
        assert!(matches!(
            reconstruct_sinc(&set, &b, g),
            Err(Error::BandwidthTooLarge { .. })
        ));
    }

    #[test]
    fn cauchy_matches_sinc_at_critical_rate() {
        let g = narrow_cell_grid();
        let (s, b) = test_band_signal(g, g.m() as i64, 1.0);
        let set = extract_samples(&s, 2.0 * g.dq()).unwrap();
        let sinc = reconstruct_sinc(&set, &b, g).unwrap();
        let cauchy = reconstruct_cauchy(&set, g).unwrap();
        // identical closed forms: agreement to rounding
        assert!(sinc.max_abs_diff(&cauchy) < 1e-12);
        assert!(cauchy.relative_error(&s) < 1e-8);
    }

    #[test]
    fn cauchy_reconstructs_oversampled() {
        let g = narrow_cell_grid();
        let (s, _) = test_band_signal(g, g.m() as i64 / 2, 2.0);
        let set = extract_samples(&s, 0.0).unwrap();
        let rec = reconstruct_cauchy(&set, g).unwrap();
        assert!(rec.relative_error(&s) < 1e-8);
    }

    #[test]
    fn cauchy_is_identity_at_sample_points() {
        let g = self_dual_grid(8, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        let s = random_signal(g, &mut rng);
        let set = extract_samples(&s, 3.0 * g.dq()).unwrap();
        let rec = reconstruct_cauchy(&set, g).unwrap();
        for i in 0..set.values.len() {
            let x = set.coordinate(i);
            let steps = g.position_steps(x).unwrap();
            let idx = g.index_of_steps(steps);
            let got = rec.values[idx] / g.dq().sqrt();
            // kernel is the exact Kronecker delta at sample points
            assert_eq!(got, set.values[i]);
        }
    }

    // ---- consistency relation ----------------------------------------------

    #[test]
    fn consistency_band_limited() {
        let g = narrow_cell_grid();
        let (s, b) = test_band_signal(g, g.m() as i64 / 2, 2.0);
        let set = extract_samples(&s, 0.0).unwrap();
        assert!(consistency_residual(&set, &b).unwrap() < 1e-8);
    }

    #[test]
    fn consistency_exact_identity_at_critical_rate() {
        let g = self_dual_grid(8, 16);
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        let s = random_signal(g, &mut rng);
        let set = extract_samples(&s, 0.0).unwrap();
        let b = BandSpec::base(g.p_cell());
        assert_eq!(consistency_residual(&set, &b).unwrap(), 0.0);
    }

    #[test]
    fn consistency_detects_violation() {
        // a broad-momentum Gaussian is not band-limited to p₀ = π/q₀
        let g = narrow_cell_grid();
        let s = fiducial::gaussian_width(g, 0.2);
        let set = extract_samples(&s, 0.0).unwrap();
        let b = BandSpec::base((g.m() / 2) as i64 as f64 * g.dp());
        assert!(consistency_residual(&set, &b).unwrap() > 1e-3);
    }

    // ---- dependence relations ----------------------------------------------

    #[test]
    fn dependence_relations_hold() {
        let g = narrow_cell_grid();
        let (s, _) = test_band_signal(g, g.m() as i64 / 2, 2.0);
        let set = extract_samples(&s, 0.0).unwrap();
        assert!(dependence_residual(&set, &[1.0]).unwrap() < 1e-6);
        assert!(dependence_residual(&set, &[0.0, 1.0]).unwrap() < 1e-6);
    }

    #[test]
    fn dependence_fails_at_band_edge() {
        // φ supported right up to the edge bins ±π/q₀: the alias points carry
        // mass and the alternating sum no longer cancels
        let g = self_dual_grid(8, 16);
        let mom = MomentumSignal::from_wavefunction(g, |p| {
            let edge = g.p_cell() / 2.0;
            if (p.abs() - edge).abs() < 0.5 * g.dp() {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        });
        let s = fourier_inverse(&mom).normalized();
        let set = extract_samples(&s, 0.0).unwrap();
        assert!(dependence_residual(&set, &[1.0]).unwrap() > 1e-3);
    }

    #[test]
    fn dependence_degree_cap() {
        let g = self_dual_grid(8, 8);
        let set = extract_samples(&gaussian(g), 0.0).unwrap();
        assert!(matches!(
            dependence_residual(&set, &[1.0; 6]),
            Err(Error::PolynomialDegreeTooHigh { .. })
        ));
    }

    // ---- aliasing failure --------------------------------------------------

    #[test]
    fn aliasing_breaks_naive_reconstruction() {
        // two tones at ±0.7·(2π/q₀): true band 1.4–1.5× the critical width
        let g = narrow_cell_grid();
        let tone = 0.7 * g.p_cell();
        let mom = MomentumSignal::from_wavefunction(g, |p| {
            let a = (-(p - tone) * (p - tone) / 0.08).exp();
            let b = (-(p + tone) * (p + tone) / 0.08).exp();
            Complex64::new(a + b, 0.0)
        });
        let s = fourier_inverse(&mom).normalized();
        let set = extract_samples(&s, 0.0).unwrap();
        let naive = reconstruct_sinc(&set, &BandSpec::base(g.p_cell()), g).unwrap();
        let err = naive.relative_error(&s);
        assert!(err > 0.1, "aliased error only {err}");
    }
}
