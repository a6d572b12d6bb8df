//! Finite periodic discretization of the line.
//!
//! The grid carries N = L·M points at spacing dq, centered so that index N/2
//! sits at coordinate 0. One position cell has length q₀ = L·dq; the total
//! period is Q = N·dq = M·q₀. The conjugate momentum grid has spacing
//! dp = 2π/Q, so dq·dp·N = 2π exactly and the unitary Fourier pair maps the
//! grid onto itself. The phase-space rectangle R(q₀) = [-q₀/2, q₀/2] ×
//! [-π/q₀, π/q₀] is sampled by L points in q and M points in p, both with the
//! half-open convention (boundary assigned to the negative edge).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization parameters: `N = L·M` samples at spacing `dq`, centered.
///
/// `L` samples per q₀-cell, `M` cells; both must be even so that the cell and
/// rectangle centers land on grid points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    l: usize,
    m: usize,
    dq: f64,
}

impl GridSpec {
    pub fn new(l: usize, m: usize, dq: f64) -> Result<Self> {
        if l == 0 || m == 0 || !l.is_multiple_of(2) || !m.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "L and M must be positive and even, got L = {l}, M = {m}"
            )));
        }
        if !(dq > 0.0 && dq.is_finite()) {
            return Err(Error::InvalidGrid(format!("dq must be positive, got {dq}")));
        }
        Ok(GridSpec { l, m, dq })
    }

    /// Convenience constructor fixing the cell length q₀ instead of dq.
    pub fn with_cell(l: usize, m: usize, q0: f64) -> Result<Self> {
        if !(q0 > 0.0 && q0.is_finite()) {
            return Err(Error::InvalidGrid(format!("q0 must be positive, got {q0}")));
        }
        Self::new(l, m, q0 / l as f64)
    }

    /// Total number of samples N = L·M.
    pub fn n(&self) -> usize {
        self.l * self.m
    }

    /// Samples per q₀-cell.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Number of cells (equivalently, momentum samples per Zak cell).
    pub fn m(&self) -> usize {
        self.m
    }

    /// Position spacing.
    pub fn dq(&self) -> f64 {
        self.dq
    }

    /// Cell length q₀ = L·dq.
    pub fn q0(&self) -> f64 {
        self.l as f64 * self.dq
    }

    /// Total period Q = N·dq.
    pub fn period(&self) -> f64 {
        self.n() as f64 * self.dq
    }

    /// Momentum spacing dp = 2π/Q.
    pub fn dp(&self) -> f64 {
        std::f64::consts::TAU / self.period()
    }

    /// Momentum period of one Zak cell, 2π/q₀ = M·dp.
    pub fn p_cell(&self) -> f64 {
        std::f64::consts::TAU / self.q0()
    }

    /// Position of sample `j`: q_j = (j − N/2)·dq.
    pub fn position(&self, j: usize) -> f64 {
        (j as f64 - (self.n() / 2) as f64) * self.dq
    }

    /// Momentum of sample `k`: p_k = (k − N/2)·dp.
    pub fn momentum(&self, k: usize) -> f64 {
        (k as f64 - (self.n() / 2) as f64) * self.dp()
    }

    /// Position inside the Zak cell for row `j` of an L×M Zak array:
    /// q_j = (j − L/2)·dq ∈ [-q₀/2, q₀/2).
    pub fn cell_position(&self, j: usize) -> f64 {
        (j as f64 - (self.l / 2) as f64) * self.dq
    }

    /// Momentum inside the Zak cell for column `k`: p_k = (k − M/2)·dp,
    /// stepping M times across [-π/q₀, π/q₀).
    pub fn cell_momentum(&self, k: usize) -> f64 {
        (k as f64 - (self.m / 2) as f64) * self.dp()
    }

    /// Nearest integer i with x ≈ i·dq, or an error when x is off-grid.
    pub fn position_steps(&self, x: f64) -> Result<i64> {
        let r = x / self.dq;
        let i = r.round();
        if (r - i).abs() > 1e-9 * (1.0 + r.abs()) {
            return Err(Error::NonCommensurateDisplacement {
                q: x,
                p: 0.0,
                dq: self.dq,
                dp: self.dp(),
            });
        }
        Ok(i as i64)
    }

    /// Nearest integer i with y ≈ i·dp, or an error when y is off-grid.
    pub fn momentum_steps(&self, y: f64) -> Result<i64> {
        let r = y / self.dp();
        let i = r.round();
        if (r - i).abs() > 1e-9 * (1.0 + r.abs()) {
            return Err(Error::NonCommensurateDisplacement {
                q: 0.0,
                p: y,
                dq: self.dq,
                dp: self.dp(),
            });
        }
        Ok(i as i64)
    }

    /// Grid index of the coordinate `steps·dq` (cyclic).
    pub fn index_of_steps(&self, steps: i64) -> usize {
        let n = self.n() as i64;
        (steps + n / 2).rem_euclid(n) as usize
    }

    /// Fractional part reduced to the half-open cell [-q₀/2, q₀/2); the
    /// companion integer is the cell number, q = cell·q₀ + frac. Ties at the
    /// upper edge go to -q₀/2.
    pub fn reduce_to_cell(&self, q: f64) -> (i64, f64) {
        let q0 = self.q0();
        let cell = (q / q0 + 0.5).floor();
        (cell as i64, q - cell * q0)
    }

    /// Same reduction for momentum, to [-π/q₀, π/q₀).
    pub fn reduce_to_momentum_cell(&self, p: f64) -> (i64, f64) {
        let pc = self.p_cell();
        let cell = (p / pc + 0.5).floor();
        (cell as i64, p - cell * pc)
    }

    pub fn same_as(&self, other: &GridSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }
}
