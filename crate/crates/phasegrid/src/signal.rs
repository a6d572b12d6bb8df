//! Signals on the grid and the Heisenberg–Weyl displacement operators.
//!
//! Samples are stored with the √dq (resp. √dp) embedding, so the discrete ℓ²
//! norm of the stored vector equals the continuum L² norm and inner products
//! need no extra measure factors.
//!
//! The displacement operator D(q,p) = exp{ipq̂ − iqp̂} acts on wavefunctions as
//! (D(q,p)ψ)(x) = e^{ip(x−q/2)} ψ(x−q); on the periodic grid the index shift
//! is cyclic and the operator is exactly unitary, provided (q,p) lies on the
//! displacement lattice dq·Z × dp·Z. Phases are tracked as computed scalars;
//! the group's central coordinate has no dedicated representation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{fourier_forward, fourier_inverse};
use crate::grid::GridSpec;

/// Position-representation signal; `values[j]` holds ψ(q_j)·√dq.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

/// Momentum-representation signal; `values[k]` holds φ(p_k)·√dp.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumSignal {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
}

/// A point (q, p) of the classical phase plane, used as a displacement label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

impl PhasePoint {
    pub fn new(q: f64, p: f64) -> Self {
        PhasePoint { q, p }
    }
}

impl Signal {
    pub fn zero(grid: GridSpec) -> Self {
        Signal {
            grid,
            values: vec![Complex64::ZERO; grid.n()],
        }
    }

    /// Sample a continuum wavefunction ψ(q) on the grid (√dq embedding).
    pub fn from_wavefunction<F>(grid: GridSpec, psi: F) -> Self
    where
        F: Fn(f64) -> Complex64,
    {
        let root = grid.dq().sqrt();
        let values = (0..grid.n())
            .map(|j| psi(grid.position(j)) * root)
            .collect();
        Signal { grid, values }
    }

    /// Wavefunction value ψ(q_j) (undoes the √dq embedding).
    pub fn wavefunction(&self, j: usize) -> Complex64 {
        self.values[j] / self.grid.dq().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// ⟨self, other⟩, antilinear in the first slot.
    pub fn inner(&self, other: &Signal) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn normalized(&self) -> Signal {
        let n = self.norm();
        let mut out = self.clone();
        if n > 0.0 {
            for v in &mut out.values {
                *v /= n;
            }
        }
        out
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.grid.same_as(&other.grid)?;
        Ok(Signal {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Signal) -> Result<Signal> {
        self.grid.same_as(&other.grid)?;
        Ok(Signal {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// max_j |self_j − other_j| over the stored samples.
    pub fn max_abs_diff(&self, other: &Signal) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// ‖self − other‖ / ‖other‖ (plain norm difference when `other` is zero).
    pub fn relative_error(&self, other: &Signal) -> f64 {
        let denom = other.norm();
        let diff: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if denom > 0.0 {
            diff / denom
        } else {
            diff
        }
    }

    pub fn to_momentum(&self) -> MomentumSignal {
        fourier_forward(self)
    }
}

impl MomentumSignal {
    pub fn zero(grid: GridSpec) -> Self {
        MomentumSignal {
            grid,
            values: vec![Complex64::ZERO; grid.n()],
        }
    }

    /// Sample a continuum momentum wavefunction φ(p) on the grid (√dp embedding).
    pub fn from_wavefunction<F>(grid: GridSpec, phi: F) -> Self
    where
        F: Fn(f64) -> Complex64,
    {
        let root = grid.dp().sqrt();
        let values = (0..grid.n())
            .map(|k| phi(grid.momentum(k)) * root)
            .collect();
        MomentumSignal { grid, values }
    }

    /// Wavefunction value φ(p_k) (undoes the √dp embedding).
    pub fn wavefunction(&self, k: usize) -> Complex64 {
        self.values[k] / self.grid.dp().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn to_position(&self) -> Signal {
        fourier_inverse(self)
    }
}

/// D(q,p)ψ for a grid-commensurate displacement: e^{ip(x−q/2)} ψ(x−q) with a
/// cyclic index shift over the period Q. Exactly unitary.
pub fn displace(s: &Signal, d: PhasePoint) -> Result<Signal> {
    let g = &s.grid;
    let a = g
        .position_steps(d.q)
        .map_err(|_| Error::NonCommensurateDisplacement {
            q: d.q,
            p: d.p,
            dq: g.dq(),
            dp: g.dp(),
        })?;
    let b = g
        .momentum_steps(d.p)
        .map_err(|_| Error::NonCommensurateDisplacement {
            q: d.q,
            p: d.p,
            dq: g.dq(),
            dp: g.dp(),
        })?;
    let n = g.n() as i64;
    let qd = a as f64 * g.dq();
    let pd = b as f64 * g.dp();
    let mut values = vec![Complex64::ZERO; g.n()];
    for (j, slot) in values.iter_mut().enumerate() {
        let src = (j as i64 - a).rem_euclid(n) as usize;
        let phase = pd * (g.position(j) - qd / 2.0);
        *slot = s.values[src] * Complex64::from_polar(1.0, phase);
    }
    Ok(Signal {
        grid: s.grid,
        values,
    })
}

/// U(p) = D(0,p): multiplication by e^{ipx}.
pub fn momentum_boost(s: &Signal, p: f64) -> Result<Signal> {
    displace(s, PhasePoint::new(0.0, p))
}

/// V(q) = D(q,0): translation by q.
pub fn translate(s: &Signal, q: f64) -> Result<Signal> {
    displace(s, PhasePoint::new(q, 0.0))
}

/// Residual of the Weyl relation U(p)V(q) = e^{iqp} V(q)U(p) applied to `s`:
/// max_j |(U(p)V(q)s)_j − e^{iqp}(V(q)U(p)s)_j|.
pub fn weyl_phase_check(s: &Signal, q: f64, p: f64) -> Result<f64> {
    let uv = momentum_boost(&translate(s, q)?, p)?;
    let vu = translate(&momentum_boost(s, p)?, q)?;
    let twist = Complex64::from_polar(1.0, q * p);
    Ok(uv
        .values
        .iter()
        .zip(&vu.values)
        .map(|(a, b)| (a - twist * b).norm())
        .fold(0.0, f64::max))
}

/// Nearest grid-commensurate phase point. Logs a warning when the input had
/// to move.
pub fn snap_to_grid(g: &GridSpec, x: PhasePoint) -> PhasePoint {
    let q = (x.q / g.dq()).round() * g.dq();
    let p = (x.p / g.dp()).round() * g.dp();
    let shift = ((q - x.q).powi(2) + (p - x.p).powi(2)).sqrt();
    if shift > 0.0 {
        log::warn!(
            "snapped phase point ({}, {}) to grid point ({q}, {p}), |shift| = {shift:.3e}",
            x.q,
            x.p
        );
    }
    PhasePoint { q, p }
}

/// Random complex signal with unit norm (i.i.d. uniform box components).
pub fn random_signal<R: rand::Rng>(grid: GridSpec, rng: &mut R) -> Signal {
    let values: Vec<Complex64> = (0..grid.n())
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    Signal { grid, values }.normalized()
}
