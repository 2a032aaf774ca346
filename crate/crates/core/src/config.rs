/// Run-wide tolerances. `slack_c` is the constant in the `c / ln X` slack
/// allowed on every asymptotic inequality checked at finite height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub slack_c: f64,
    pub max_precision_bits: u32,
    pub enum_budget: u64,
    /// Fraction of a scan (taken from the end) used for limit estimates.
    pub estimator_window: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            slack_c: 3.0,
            max_precision_bits: 65536,
            enum_budget: 100_000_000,
            estimator_window: 0.5,
        }
    }
}

impl Tolerances {
    pub fn slack(&self, x: f64) -> f64 {
        self.slack_c / libm::log(x)
    }
}
