//! Exact isoperimetry on weighted trees.

mod bisection;
mod decide;
mod functional;
pub(crate) mod scaled;

pub use bisection::{search_bounds, solve_miso, MisoSolution, SearchBounds};
pub use decide::{decide_iso, decide_iso_instrumented, DecideStats, Decision};
pub use functional::{ff_functional, indicator_functions};
