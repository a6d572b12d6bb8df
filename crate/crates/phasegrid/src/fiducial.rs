//! Fiducial vectors for coherent-state systems, plus the stock of test
//! states used throughout: Gaussian, exact and smoothed combs, the unit cell
//! indicator (boxcar), a sech-momentum state, band-limited states and
//! pure-phase-Zak states.
//!
//! Two of these are Zak-transform extremes worth keeping apart: the comb
//! Σ_n δ(q − nq₀) has χ concentrated in a single point mass at the cell
//! center (its lattice orbit is Dirac-orthonormal), while the boxcar has
//! constant |χ| = (2π)^{-1/2} (its von Neumann lattice is the orthonormal
//! Gabor basis).

use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

use crate::fourier::{fourier_forward, fourier_inverse};
use crate::grid::GridSpec;
use crate::signal::{MomentumSignal, Signal};
use crate::zak::{zak_forward, zak_inverse_position, Convention, ZakArray};

/// A normalized fiducial vector with its momentum form and angular Zak
/// wavefunction cached.
#[derive(Debug, Clone)]
pub struct FiducialVector {
    signal: Signal,
    momentum: MomentumSignal,
    chi0: ZakArray,
}

impl FiducialVector {
    /// Normalize `s` and cache its momentum and Zak forms.
    pub fn new(s: &Signal) -> FiducialVector {
        let signal = s.normalized();
        let momentum = fourier_forward(&signal);
        let chi0 = zak_forward(&signal);
        FiducialVector {
            signal,
            momentum,
            chi0,
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.signal.grid
    }

    pub fn signal(&self) -> &Signal {
        &self.signal
    }

    pub fn momentum(&self) -> &MomentumSignal {
        &self.momentum
    }

    /// Angular Zak wavefunction χ₀.
    pub fn chi0(&self) -> &ZakArray {
        &self.chi0
    }
}

/// Ground-state Gaussian π^{-1/4} e^{-q²/2}, normalized on the grid.
pub fn gaussian(g: GridSpec) -> Signal {
    Signal::from_wavefunction(g, |q| {
        Complex64::new(PI.powf(-0.25) * (-q * q / 2.0).exp(), 0.0)
    })
    .normalized()
}

/// Gaussian of width σ, (σ²π)^{-1/4} e^{-q²/(2σ²)}.
pub fn gaussian_width(g: GridSpec, sigma: f64) -> Signal {
    Signal::from_wavefunction(g, |q| {
        Complex64::new(
            (sigma * sigma * PI).powf(-0.25) * (-q * q / (2.0 * sigma * sigma)).exp(),
            0.0,
        )
    })
    .normalized()
}

/// Exact discrete comb: unit mass on every grid point q = n·q₀.
pub fn comb(g: GridSpec) -> Signal {
    let mut s = Signal::zero(g);
    let amp = 1.0 / (g.m() as f64).sqrt();
    for n in 0..g.m() {
        let idx = (g.n() / 2 + n * g.l()) % g.n();
        s.values[idx] = Complex64::new(amp, 0.0);
    }
    s
}

/// Comb with Gaussian teeth of width ε (periodized over the grid), normalized.
/// One tooth per cell, distances wrapped, so q₀-translation symmetry is exact.
pub fn smoothed_comb(g: GridSpec, epsilon: f64) -> Signal {
    let q0 = g.q0();
    let period = g.period();
    let s = Signal::from_wavefunction(g, |q| {
        let mut acc = 0.0;
        for n in 0..g.m() as i64 {
            let mut d = q - n as f64 * q0;
            d -= (d / period).round() * period;
            acc += (-d * d / (2.0 * epsilon * epsilon)).exp();
        }
        Complex64::new(acc, 0.0)
    });
    s.normalized()
}

/// Indicator of the central cell [-q₀/2, q₀/2), normalized: the constant-χ
/// state.
pub fn boxcar(g: GridSpec) -> Signal {
    let mut s = Signal::zero(g);
    let amp = 1.0 / (g.l() as f64).sqrt();
    for j in 0..g.l() {
        s.values[g.n() / 2 - g.l() / 2 + j] = Complex64::new(amp, 0.0);
    }
    s
}

/// State with momentum wavefunction ∝ sech(p): bounded and pointwise
/// nonvanishing, the workhorse for the extended sampling hypotheses.
pub fn sech_momentum(g: GridSpec) -> Signal {
    let m = MomentumSignal::from_wavefunction(g, |p| Complex64::new(1.0 / p.cosh(), 0.0));
    fourier_inverse(&m).normalized()
}

/// Band-limited state: Gaussian hard-cut to |p| < half_width, normalized.
pub fn bandlimited(g: GridSpec, half_width: f64) -> Signal {
    let m = MomentumSignal::from_wavefunction(g, |p| {
        if p.abs() < half_width {
            Complex64::new((-p * p / 2.0).exp(), 0.0)
        } else {
            Complex64::ZERO
        }
    });
    fourier_inverse(&m).normalized()
}

/// State built by inverse Zak transform of a pure-phase array
/// χ₀ = e^{iθ(q,p)} / √(2π); exactly unit norm, |χ₀| exactly constant.
/// θ is a fixed smooth two-mode pattern scaled by (a1, a2, a12).
pub fn pure_phase(g: GridSpec, a1: f64, a2: f64, a12: f64) -> Signal {
    let (l, m) = (g.l(), g.m());
    let amp = 1.0 / TAU.sqrt();
    let mut values = vec![Complex64::ZERO; l * m];
    for j in 0..l {
        let x = TAU * j as f64 / l as f64;
        for k in 0..m {
            let y = TAU * k as f64 / m as f64;
            let theta = a1 * x.sin() + a2 * y.cos() + a12 * x.sin() * y.sin();
            values[j * m + k] = Complex64::from_polar(amp, theta);
        }
    }
    let chi = ZakArray {
        grid: g,
        convention: Convention::Angular,
        values,
    };
    zak_inverse_position(&chi.with_convention(Convention::Round)).expect("round array")
}

/// Mixture of displaced Gaussians with the given (weight, center_q, width)
/// components; used by tests needing generic smooth signals.
pub fn gaussian_mixture(g: GridSpec, parts: &[(f64, f64, f64)]) -> Signal {
    let s = Signal::from_wavefunction(g, |q| {
        let mut acc = Complex64::ZERO;
        for &(w, c, sigma) in parts {
            acc += Complex64::new(w * (-(q - c) * (q - c) / (2.0 * sigma * sigma)).exp(), 0.0);
        }
        acc
    });
    s.normalized()
}
