/// Shared knobs for the exact searches.
///
/// `exhaustive_bound` is the vertex count up to which the enumerative
/// searches are guaranteed to finish under the default budget; larger
/// instances still run but may come back flagged incomplete.
#[derive(Debug, Clone)]
pub struct Config {
    /// Guaranteed-exact instance size for the enumerative searches.
    pub exhaustive_bound: usize,
    /// Node budget per search call.
    pub max_nodes: u64,
    /// Worker threads for the branch-set fan-out (1 = sequential).
    /// Outputs are reduced in canonical order and do not depend on this.
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            exhaustive_bound: 12,
            max_nodes: 50_000_000,
            workers: 1,
        }
    }
}

impl Config {
    /// Reads `TOPOGRAD_WORKERS` for the default worker count.
    pub fn from_env() -> Self {
        let mut cfg = Config::default();
        if let Ok(w) = std::env::var("TOPOGRAD_WORKERS") {
            if let Ok(w) = w.parse::<usize>() {
                if w >= 1 {
                    cfg.workers = w;
                }
            }
        }
        cfg
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }

    pub fn with_budget(mut self, max_nodes: u64) -> Self {
        self.max_nodes = max_nodes;
        self
    }
}

/// Mutable node counter threaded through a single search call.
#[derive(Debug)]
pub struct Budget {
    pub max_nodes: u64,
    pub used: u64,
}

impl Budget {
    pub fn new(max_nodes: u64) -> Self {
        Budget { max_nodes, used: 0 }
    }

    /// Counts one search node; returns false once the budget is gone.
    #[inline]
    pub fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.max_nodes
    }

    #[inline]
    pub fn exhausted(&self) -> bool {
        self.used > self.max_nodes
    }
}
