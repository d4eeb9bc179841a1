//! Inputs shared by the benchmarks in `benches/`.

use x3ent_core::sampling::Sampler;
use x3ent_core::xcore::XState;

/// `n` exact psd X-states from a fixed seed.
pub fn states(n: usize) -> Vec<XState> {
    let mut s = Sampler::new(42);
    (0..n).map(|_| s.exact_state()).collect()
}

/// `n` float-sampled psd X-states from a fixed seed.
pub fn float_states(n: usize) -> Vec<XState> {
    let mut s = Sampler::new(43);
    (0..n).map(|_| s.float_state()).collect()
}
