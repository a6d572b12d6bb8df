//! Benchmark-only crate; see the `benches/` targets.

use phasegrid::{self_dual_grid, GridSpec};

/// Grids the benchmarks sweep over.
pub fn bench_grids() -> Vec<GridSpec> {
    vec![
        self_dual_grid(8, 8),
        self_dual_grid(16, 16),
        self_dual_grid(32, 32),
    ]
}
