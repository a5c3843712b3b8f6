/// Golden-ratio increment of splitmix64.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The splitmix64 output finalizer.
pub fn splitmix_finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial starting state: `finalize(master ^ trial * GOLDEN_GAMMA)`.
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    splitmix_finalize(master_seed ^ trial_index.wrapping_mul(GOLDEN_GAMMA))
}

/// splitmix64 generator. Every trial owns its own instance derived with
/// [`SeededRng::for_trial`], so results do not depend on scheduling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeededRng {
    state: u64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn for_trial(master_seed: u64, trial_index: u64) -> Self {
        Self::new(trial_seed(master_seed, trial_index))
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        splitmix_finalize(self.state)
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    pub fn next_f64_open0(&mut self) -> f64 {
        1.0 - self.next_f64()
    }
}
