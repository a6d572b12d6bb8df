//! Discrete Zak transform on the L×M phase-space rectangle R(q₀).
//!
//! Two phase conventions are carried explicitly:
//!
//! ```text
//! angular:  χ(q,p)  = √(q₀/2π) Σ_n e^{-i n q₀ p} ψ(q + n q₀)
//! round:    χ̃(q,p) = q₀^{-1/2} Σ_n e^{2πi n q/q₀} φ(p + 2πn/q₀) = e^{-iqp} χ(q,p)
//! ```
//!
//! The angular sum runs over the M position cells, the round sum over the L
//! momentum cells of the periodic grid; the n = 0 term is anchored at the
//! cell containing coordinate 0. Because the grid is periodic both sums are
//! finite and every identity in this module (unitarity, the e^{-iqp}
//! geometric-phase relation between the conventions, quasi-periodicity, the
//! inverses) holds to rounding error; there is no truncation.
//!
//! Arrays are L×M, row-major in j, with q_j = (j − L/2)·dq ∈ [-q₀/2, q₀/2)
//! and p_k = (k − M/2)·dp, dp = 2π/(q₀M), so M steps span [-π/q₀, π/q₀).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fourier::{
    apply_momentum_multiplier, fft_unnormalized, fourier_forward, fourier_inverse,
    ifft_unnormalized,
};
use crate::grid::GridSpec;
use crate::signal::{MomentumSignal, Signal};

/// Which phase convention a Zak array is stored in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// χ of the angular-ket construction (built from position eigenkets).
    Angular,
    /// χ̃ = e^{-iqp} χ (built from momentum eigenkets).
    Round,
}

/// Zak wavefunction sampled on the rectangle R(q₀).
#[derive(Debug, Clone, PartialEq)]
pub struct ZakArray {
    pub grid: GridSpec,
    pub convention: Convention,
    /// L×M values, row-major in j: `values[j*M + k]` ↔ (q_j, p_k).
    pub values: Vec<Complex64>,
}

impl ZakArray {
    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[j * self.grid.m() + k]
    }

    /// ∬ |χ|² dq dp over R(q₀); equals ‖ψ‖² (Zak unitarity).
    pub fn norm_sq(&self) -> f64 {
        let cell = self.grid.dq() * self.grid.dp();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * cell
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn min_abs(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Convert between the two conventions by the geometric phase e^{∓iqp}.
    pub fn with_convention(&self, target: Convention) -> ZakArray {
        if self.convention == target {
            return self.clone();
        }
        let g = &self.grid;
        let sign = match target {
            Convention::Round => -1.0,  // χ̃ = e^{-iqp} χ
            Convention::Angular => 1.0, // χ = e^{+iqp} χ̃
        };
        let mut values = self.values.clone();
        for j in 0..g.l() {
            for k in 0..g.m() {
                let phase = sign * g.cell_position(j) * g.cell_momentum(k);
                values[j * g.m() + k] *= Complex64::from_polar(1.0, phase);
            }
        }
        ZakArray {
            grid: self.grid,
            convention: target,
            values,
        }
    }

    pub fn max_abs_diff(&self, other: &ZakArray) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Location and strength of the minimum of |χ|, plus the phase winding of χ
/// around the boundary of R(q₀). For signals with continuous Zak
/// wavefunctions the quasi-periodic boundary phases force |winding| = 1, so a
/// zero must exist inside the rectangle; min_abs then shrinks under grid
/// refinement. Discontinuous cases (the comb) carry no such guarantee.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroReport {
    pub location: (f64, f64),
    pub min_abs: f64,
    pub winding: i64,
}

fn angular_scale(g: &GridSpec) -> f64 {
    (g.l() as f64 / TAU).sqrt()
}

fn round_scale(g: &GridSpec) -> f64 {
    (g.m() as f64 / TAU).sqrt()
}

/// Full-grid index of the position q_j + n·q₀ (cyclic).
fn cell_index(g: &GridSpec, j: usize, n: usize) -> usize {
    let ln = g.n() as i64;
    (j as i64 - g.l() as i64 / 2 + n as i64 * g.l() as i64 + ln / 2).rem_euclid(ln) as usize
}

/// Full-grid index of the momentum p_k + n·2π/q₀ (cyclic).
fn momentum_cell_index(g: &GridSpec, k: usize, n: usize) -> usize {
    let ln = g.n() as i64;
    (k as i64 - g.m() as i64 / 2 + n as i64 * g.m() as i64 + ln / 2).rem_euclid(ln) as usize
}

/// Angular Zak transform χ(q_j, p_k) of a position-space signal.
pub fn zak_forward(s: &Signal) -> ZakArray {
    let g = s.grid;
    let (l, m) = (g.l(), g.m());
    let scale = angular_scale(&g);
    let mut values = vec![Complex64::ZERO; l * m];
    let mut row = vec![Complex64::ZERO; m];
    for j in 0..l {
        for (n, slot) in row.iter_mut().enumerate() {
            let u = s.values[cell_index(&g, j, n)] / g.dq().sqrt();
            *slot = if n % 2 == 0 { u } else { -u };
        }
        fft_unnormalized(&mut row);
        for k in 0..m {
            values[j * m + k] = row[k] * scale * g.dq().sqrt();
        }
    }
    // stored values are χ(q_j,p_k) itself: the √dq embedding cancels between
    // reading ψ and the q₀^{1/2} prefactor, folded into the two lines above
    ZakArray {
        grid: g,
        convention: Convention::Angular,
        values,
    }
}

/// Round Zak transform χ̃(q_j, p_k), computed from the momentum
/// representation. Comparing against e^{-iqp}·zak_forward is the discrete
/// Poisson-summation / geometric-phase consistency test.
pub fn zak_forward_round(s: &Signal) -> ZakArray {
    let g = s.grid;
    let (l, m) = (g.l(), g.m());
    let mom = fourier_forward(s);
    let scale = round_scale(&g);
    let mut values = vec![Complex64::ZERO; l * m];
    let mut col = vec![Complex64::ZERO; l];
    for k in 0..m {
        for (n, slot) in col.iter_mut().enumerate() {
            let v = mom.values[momentum_cell_index(&g, k, n)];
            *slot = if n % 2 == 0 { v } else { -v };
        }
        ifft_unnormalized(&mut col);
        for j in 0..l {
            values[j * m + k] = col[j] * scale;
        }
    }
    // φ = v/√dp and the q₀^{-1/2} prefactor combine into
    // 1/√(q₀·dp) = √(M/2π) = scale
    ZakArray {
        grid: g,
        convention: Convention::Round,
        values,
    }
}

/// Inverse of the round Zak transform:
/// `ψ(q) = √(q₀/2π) ∫_{-π/q₀}^{π/q₀} dp e^{iqp} χ̃([q], p)`, `q = [q] mod q₀`.
pub fn zak_inverse_position(z: &ZakArray) -> Result<Signal> {
    if z.convention != Convention::Round {
        return Err(Error::ConventionMismatch {
            expected: Convention::Round,
            found: z.convention,
        });
    }
    let g = z.grid;
    let (l, m) = (g.l(), g.m());
    let c = (TAU / l as f64).sqrt() / m as f64;
    let mut values = vec![Complex64::ZERO; g.n()];
    let mut buf = vec![Complex64::ZERO; m];
    for j in 0..l {
        let qj = g.cell_position(j);
        for (k, slot) in buf.iter_mut().enumerate() {
            *slot = z.get(j, k) * Complex64::from_polar(1.0, qj * g.cell_momentum(k));
        }
        ifft_unnormalized(&mut buf);
        for n in 0..m {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            values[cell_index(&g, j, n)] = buf[n] * (c * sign);
        }
    }
    Ok(Signal { grid: g, values })
}

/// Inverse of the angular Zak transform on the momentum side:
/// `φ(p) = q₀^{-1/2} ∫_{-q₀/2}^{q₀/2} dq e^{-iqp} χ(q, [p])`, `p = [p] mod 2π/q₀`.
pub fn zak_inverse_momentum(z: &ZakArray) -> Result<MomentumSignal> {
    if z.convention != Convention::Angular {
        return Err(Error::ConventionMismatch {
            expected: Convention::Angular,
            found: z.convention,
        });
    }
    let g = z.grid;
    let (l, m) = (g.l(), g.m());
    let c = (TAU / (g.n() * l) as f64).sqrt();
    let mut values = vec![Complex64::ZERO; g.n()];
    let mut buf = vec![Complex64::ZERO; l];
    for k in 0..m {
        let pk = g.cell_momentum(k);
        for (j, slot) in buf.iter_mut().enumerate() {
            *slot = z.get(j, k) * Complex64::from_polar(1.0, -g.cell_position(j) * pk);
        }
        fft_unnormalized(&mut buf);
        for n in 0..l {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            values[momentum_cell_index(&g, k, n)] = buf[n] * (c * sign);
        }
    }
    Ok(MomentumSignal { grid: g, values })
}

/// Evaluate the angular defining sum at an arbitrary point: q must be
/// grid-commensurate (ψ is read there), p must be a multiple of dp so the
/// cyclic wrap of the n-sum is phase-consistent.
pub fn zak_point_angular(s: &Signal, q: f64, p: f64) -> Result<Complex64> {
    let g = s.grid;
    let t = g.position_steps(q)?;
    g.momentum_steps(p)?;
    let scale = (g.q0() / TAU).sqrt() / g.dq().sqrt();
    let ln = g.n() as i64;
    let mut acc = Complex64::ZERO;
    for n in 0..g.m() {
        let idx = (t + (n * g.l()) as i64 + ln / 2).rem_euclid(ln) as usize;
        acc += s.values[idx] * Complex64::from_polar(1.0, -(n as f64) * g.q0() * p);
    }
    Ok(acc * scale)
}

/// Evaluate the round defining sum; p must be grid-commensurate, q a multiple
/// of dq.
pub fn zak_point_round(mom: &MomentumSignal, q: f64, p: f64) -> Result<Complex64> {
    let g = mom.grid;
    let y = g.momentum_steps(p)?;
    g.position_steps(q)?;
    let scale = 1.0 / (g.q0() * g.dp()).sqrt();
    let ln = g.n() as i64;
    let mut acc = Complex64::ZERO;
    for n in 0..g.l() {
        let idx = (y + (n * g.m()) as i64 + ln / 2).rem_euclid(ln) as usize;
        acc += mom.values[idx] * Complex64::from_polar(1.0, TAU * n as f64 * q / g.q0());
    }
    Ok(acc * scale)
}

/// Extend the array one cell in q and in p by re-evaluating the defining sum
/// on the reconstructed signal, and return the maximum deviation from the
/// quasi-periodicity phase laws:
///
/// ```text
/// angular: χ(q+q₀,p) = e^{iq₀p} χ(q,p),    χ(q,p+2π/q₀) = χ(q,p)
/// round:   χ̃(q+q₀,p) = χ̃(q,p),            χ̃(q,p+2π/q₀) = e^{-2πiq/q₀} χ̃(q,p)
/// ```
pub fn quasiperiodicity_residual(z: &ZakArray) -> Result<f64> {
    let g = z.grid;
    let (l, m) = (g.l(), g.m());
    let mut worst = 0.0f64;
    match z.convention {
        Convention::Angular => {
            let s = fourier_inverse(&zak_inverse_momentum(z)?);
            for j in 0..l {
                let qj = g.cell_position(j);
                for k in 0..m {
                    let pk = g.cell_momentum(k);
                    let v = z.get(j, k);
                    let ext_q = zak_point_angular(&s, qj + g.q0(), pk)?;
                    let law_q = Complex64::from_polar(1.0, g.q0() * pk) * v;
                    let ext_p = zak_point_angular(&s, qj, pk + g.p_cell())?;
                    worst = worst.max((ext_q - law_q).norm()).max((ext_p - v).norm());
                }
            }
        }
        Convention::Round => {
            let mom = fourier_forward(&zak_inverse_position(z)?);
            for j in 0..l {
                let qj = g.cell_position(j);
                for k in 0..m {
                    let pk = g.cell_momentum(k);
                    let v = z.get(j, k);
                    let ext_q = zak_point_round(&mom, qj + g.q0(), pk)?;
                    let ext_p = zak_point_round(&mom, qj, pk + g.p_cell())?;
                    let law_p = Complex64::from_polar(1.0, -TAU * qj / g.q0()) * v;
                    worst = worst.max((ext_q - v).norm()).max((ext_p - law_p).norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Value of the array extended by the exact phase laws; valid for
/// j ∈ 0..=L, k ∈ 0..=M (one reduction per axis).
fn extended_value(z: &ZakArray, j: usize, k: usize) -> Complex64 {
    let g = &z.grid;
    let (l, m) = (g.l(), g.m());
    let p = (k as f64 - (m / 2) as f64) * g.dp();
    let q = (j as f64 - (l / 2) as f64) * g.dq();
    let base = z.get(j % l, k % m);
    match z.convention {
        Convention::Angular => {
            if j >= l {
                Complex64::from_polar(1.0, g.q0() * p) * base
            } else {
                base
            }
        }
        Convention::Round => {
            if k >= m {
                Complex64::from_polar(1.0, -TAU * q / g.q0()) * base
            } else {
                base
            }
        }
    }
}

/// Grid argmin of |χ| together with the boundary phase winding.
///
/// The winding loop is the boundary of the cell shifted one grid step, so the
/// rectangle corner (the zero site of every even-symmetric signal) lies in
/// its interior rather than on the path.
pub fn locate_zero(z: &ZakArray) -> ZeroReport {
    let g = &z.grid;
    let (l, m) = (g.l(), g.m());

    let mut min_abs = f64::INFINITY;
    let mut arg = (0usize, 0usize);
    for j in 0..l {
        for k in 0..m {
            let a = z.get(j, k).norm();
            if a < min_abs {
                min_abs = a;
                arg = (j, k);
            }
        }
    }

    // loop over the boundary of [1, L+1] × [1, M+1] in index space, CCW
    let mut path: Vec<(usize, usize)> = Vec::with_capacity(2 * (l + m) + 1);
    for j in 1..=l {
        path.push((j, 1));
    }
    for k in 1..=m {
        path.push((l + 1 - 1, k)); // j = L stays within one reduction
    }
    // close the rectangle [1,L]×[1,M]
    let mut top: Vec<(usize, usize)> = (1..=l).rev().map(|j| (j, m)).collect();
    let mut left: Vec<(usize, usize)> = (1..=m).rev().map(|k| (1, k)).collect();
    path.append(&mut top);
    path.append(&mut left);
    path.push((1, 1));

    let mut winding = 0.0f64;
    let mut prev = extended_value(z, 1, 1).arg();
    for &(j, k) in path.iter().skip(1) {
        let cur = extended_value(z, j, k).arg();
        let mut d = cur - prev;
        while d > std::f64::consts::PI {
            d -= TAU;
        }
        while d <= -std::f64::consts::PI {
            d += TAU;
        }
        winding += d;
        prev = cur;
    }

    ZeroReport {
        location: (g.cell_position(arg.0), g.cell_momentum(arg.1)),
        min_abs,
        winding: (winding / TAU).round() as i64,
    }
}

fn spectral_dp(z: &ZakArray) -> Vec<Complex64> {
    // exact differentiation along the periodic p direction: the row j is a
    // trigonometric polynomial Σ_f a_f e^{ifq₀p}
    let g = &z.grid;
    let (l, m) = (g.l(), g.m());
    let q0 = g.q0();
    let mut out = vec![Complex64::ZERO; l * m];
    let mut buf = vec![Complex64::ZERO; m];
    for j in 0..l {
        buf.copy_from_slice(&z.values[j * m..(j + 1) * m]);
        fft_unnormalized(&mut buf);
        for (f, v) in buf.iter_mut().enumerate() {
            let signed = if f < m / 2 {
                f as f64
            } else {
                f as f64 - m as f64
            };
            // Nyquist mode dropped
            let freq = if f == m / 2 { 0.0 } else { signed * q0 };
            *v *= Complex64::new(0.0, freq);
        }
        ifft_unnormalized(&mut buf);
        for k in 0..m {
            out[j * m + k] = buf[k] / m as f64;
        }
    }
    out
}

fn fd4_dq(z: &ZakArray) -> Vec<Complex64> {
    // 4th-order central differences in the quasi-periodic q direction with
    // ghost cells phase-corrected by the edge conditions
    let g = &z.grid;
    let (l, m) = (g.l(), g.m());
    let q0 = g.q0();
    let mut out = vec![Complex64::ZERO; l * m];
    for k in 0..m {
        let pk = g.cell_momentum(k);
        let up = Complex64::from_polar(1.0, q0 * pk);
        let down = up.conj();
        let at = |j: i64| -> Complex64 {
            if j < 0 {
                down * z.get((j + l as i64) as usize, k)
            } else if j >= l as i64 {
                up * z.get((j - l as i64) as usize, k)
            } else {
                z.get(j as usize, k)
            }
        };
        for j in 0..l as i64 {
            let d = -at(j + 2) + at(j + 1) * 8.0 - at(j - 1) * 8.0 + at(j - 2);
            out[j as usize * m + k] = d / (12.0 * g.dq());
        }
    }
    out
}

/// Residuals of the operator actions in the Zak representation
/// (q̂ ↔ q + i∂/∂p, p̂ ↔ -i∂/∂q on the angular χ): returns
/// `(max |Z[q̂ψ] − (q + i∂_p)Z[ψ]|, max |Z[p̂ψ] − (-i∂_q)Z[ψ]|)`.
///
/// ∂_p is spectral (the p direction is exactly periodic); ∂_q uses 4th-order
/// central differences with phase-corrected ghost cells, so the second
/// residual converges like dq⁴ for smooth decaying signals.
pub fn zak_operator_check(s: &Signal) -> (f64, f64) {
    let g = s.grid;
    let chi = zak_forward(s);

    let mut qs = s.clone();
    for (j, v) in qs.values.iter_mut().enumerate() {
        *v *= g.position(j);
    }
    let lhs_q = zak_forward(&qs);
    let dpchi = spectral_dp(&chi);
    let mut res_q = 0.0f64;
    for j in 0..g.l() {
        let qj = g.cell_position(j);
        for k in 0..g.m() {
            let idx = j * g.m() + k;
            let rhs = chi.values[idx] * qj + Complex64::i() * dpchi[idx];
            res_q = res_q.max((lhs_q.values[idx] - rhs).norm());
        }
    }

    let ps = apply_momentum_multiplier(s, |p| Complex64::new(p, 0.0));
    let lhs_p = zak_forward(&ps);
    let dqchi = fd4_dq(&chi);
    let mut res_p = 0.0f64;
    for (lhs, d) in lhs_p.values.iter().zip(&dqchi) {
        let rhs = -Complex64::i() * d;
        res_p = res_p.max((lhs - rhs).norm());
    }

    (res_q, res_p)
}
