//! The unitary Fourier pair in the convention
//!
//! ```text
//! φ(p) = (2π)^{-1/2} ∫ dq ψ(q) e^{-iqp},   ψ(q) = (2π)^{-1/2} ∫ dp φ(p) e^{ipq}
//! ```
//!
//! discretized on the centered grid. With samples stored as ψ(q_j)·√dq and
//! φ(p_k)·√dp the pair becomes the centered unitary DFT
//!
//! ```text
//! v_k = N^{-1/2} Σ_j u_j e^{-i q_j p_k},  q_j = (j-N/2)dq, p_k = (k-N/2)dp,
//! ```
//!
//! which reduces to a plain FFT after (−1)^j / (−1)^k twiddles and a global
//! sign (−1)^{N/2}. Parseval holds exactly and a real even signal maps to a
//! real even spectrum.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::grid::GridSpec;
use crate::signal::{MomentumSignal, Signal};

/// In-place unnormalized FFT, kernel e^{-2πi jk/n}.
pub(crate) fn fft_unnormalized(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

/// In-place unnormalized inverse FFT, kernel e^{+2πi jk/n}.
pub(crate) fn ifft_unnormalized(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(buf.len()).process(buf);
}

fn center_sign(n: usize) -> f64 {
    // e^{-iπN/2} for even N
    if (n / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Position → momentum representation (unitary).
pub fn fourier_forward(s: &Signal) -> MomentumSignal {
    let n = s.grid.n();
    let mut buf: Vec<Complex64> = s
        .values
        .iter()
        .enumerate()
        .map(|(j, &u)| if j % 2 == 0 { u } else { -u })
        .collect();
    fft_unnormalized(&mut buf);
    let scale = center_sign(n) / (n as f64).sqrt();
    for (k, v) in buf.iter_mut().enumerate() {
        let sign = if k % 2 == 0 { scale } else { -scale };
        *v *= sign;
    }
    MomentumSignal {
        grid: s.grid,
        values: buf,
    }
}

/// Momentum → position representation; exact inverse of [`fourier_forward`].
pub fn fourier_inverse(m: &MomentumSignal) -> Signal {
    let n = m.grid.n();
    let mut buf: Vec<Complex64> = m
        .values
        .iter()
        .enumerate()
        .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
        .collect();
    ifft_unnormalized(&mut buf);
    let scale = center_sign(n) / (n as f64).sqrt();
    for (j, u) in buf.iter_mut().enumerate() {
        let sign = if j % 2 == 0 { scale } else { -scale };
        *u *= sign;
    }
    Signal {
        grid: m.grid,
        values: buf,
    }
}

/// Apply a diagonal-in-momentum multiplier to a position-space signal.
pub(crate) fn apply_momentum_multiplier<F>(s: &Signal, f: F) -> Signal
where
    F: Fn(f64) -> Complex64,
{
    let mut m = fourier_forward(s);
    for (k, v) in m.values.iter_mut().enumerate() {
        *v *= f(m.grid.momentum(k));
    }
    fourier_inverse(&m)
}

/// Standard grid for tests: q₀ = √(2π) so the Zak cell is square.
pub fn self_dual_grid(l: usize, m: usize) -> GridSpec {
    GridSpec::with_cell(l, m, std::f64::consts::TAU.sqrt()).expect("valid grid")
}
