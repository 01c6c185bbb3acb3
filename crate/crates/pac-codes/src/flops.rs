//! Floating-point operation accounting for the decoders.
//!
//! Counts cover the LLR recursions and the path-metric updates; list
//! management (sorting, selection) is excluded. Each primitive carries a
//! fixed nominal cost, so counts depend only on the work schedule, never on
//! the data:
//!
//! | primitive            | adds | compares | mults | exp/log |
//! |----------------------|------|----------|-------|---------|
//! | box-plus (exact f)   | 4    | 3        | 1     | 4       |
//! | g update             | 1    | 0        | 1     | 0       |
//! | metric update        | 2    | 1        | 1     | 2       |

/// Per-decode operation counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlopCounter {
    pub f_evals: u64,
    pub g_evals: u64,
    pub metric_updates: u64,
}

impl FlopCounter {
    pub fn adds(&self) -> u64 {
        4 * self.f_evals + self.g_evals + 2 * self.metric_updates
    }

    pub fn compares(&self) -> u64 {
        3 * self.f_evals + self.metric_updates
    }

    pub fn mults(&self) -> u64 {
        self.f_evals + self.g_evals + self.metric_updates
    }

    pub fn transcendentals(&self) -> u64 {
        4 * self.f_evals + 2 * self.metric_updates
    }

    /// Total floating-point operations under the convention above.
    pub fn total(&self) -> u64 {
        self.adds() + self.compares() + self.mults() + self.transcendentals()
    }

    pub fn reset(&mut self) {
        *self = FlopCounter::default();
    }

    pub fn merge(&mut self, other: &FlopCounter) {
        self.f_evals += other.f_evals;
        self.g_evals += other.g_evals;
        self.metric_updates += other.metric_updates;
    }
}
