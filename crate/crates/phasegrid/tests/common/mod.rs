//! Shared helpers for the integration suites.

use phasegrid::sampling::{bandlimit_project, BandSpec};
use phasegrid::{fiducial, fourier_forward, GridSpec, Signal};

/// Band-limited test family: a projected Gaussian of width σ whose momentum
/// band-edge content and position boundary tail are both negligible, so the
/// symmetric periodized kernels reconstruct it at full precision. Panics if
/// the requested geometry violates its own premises.
pub fn band_signal(g: GridSpec, beta: i64, sigma: f64) -> (Signal, BandSpec) {
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

/// Geometry used by the sampling criteria: q₀ = 0.4, Q = 64, so σ = 1..4
/// Gaussians decay inside every band fraction down to p₀ = π/(2q₀).
pub fn sampling_grid() -> GridSpec {
    GridSpec::with_cell(8, 160, 0.4).unwrap()
}
