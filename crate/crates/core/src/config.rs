use std::env;

/// Environment variable overriding [`Options::fuel`].
pub const FUEL_ENV: &str = "INHCALC_FUEL";
/// Environment variable overriding [`Options::max_depth`].
pub const MAX_DEPTH_ENV: &str = "INHCALC_MAX_DEPTH";

pub const DEFAULT_FUEL: u64 = 1_000_000;
pub const DEFAULT_MAX_DEPTH: usize = 64;

/// Order in which the transitive base closure is explored. The result does
/// not depend on it; it exists so tests can check that.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ClosureOrder {
    #[default]
    DepthFirst,
    BreadthFirst,
}

#[derive(Debug, Clone)]
pub struct Options {
    /// Upper bound on equation applications per evaluator.
    pub fuel: u64,
    /// Deepest `result` chain tried by convergence checks.
    pub max_depth: usize,
    /// Record every scope walk that does not track exactly one path.
    pub assert_single_path: bool,
    pub closure_order: ClosureOrder,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fuel: DEFAULT_FUEL,
            max_depth: DEFAULT_MAX_DEPTH,
            assert_single_path: false,
            closure_order: ClosureOrder::default(),
        }
    }
}

impl Options {
    /// Defaults, then any valid numeric overrides from the environment.
    pub fn from_env() -> Self {
        let mut options = Options::default();
        if let Some(fuel) = env::var(FUEL_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            options.fuel = fuel;
        }
        if let Some(depth) = env::var(MAX_DEPTH_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            options.max_depth = depth;
        }
        options
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        self.fuel = fuel;
        self
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn single_path(mut self, on: bool) -> Self {
        self.assert_single_path = on;
        self
    }
}
