//! Suzuki product formulas for `e^{t (H1 + H2)}` with `H1 = -i H_0` and
//! `H2 = -i alpha* H_x`, their grouping into alternating QAOA layers, and
//! exact simulation of the resulting circuits.

mod angles;
mod formula;
mod step;

pub use angles::{qaoa_angles, QaoaAngles};
pub(crate) use formula::check_order;
pub use formula::{
    block_times, group_sequence, stage_count, suzuki_coefficients, suzuki_weight, Factor,
    Generator, ProductFormula,
};
pub use step::{
    formula_operator, overlap_trace, step_operator, trace_steps, trotterized_state, MixerFrame,
    TracePoint, TrotterStep,
};
