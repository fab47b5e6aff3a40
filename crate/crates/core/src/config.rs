//! Run-time budgets, loadable from a TOML file.
//!
//! ```toml
//! sieve_bound = 10000000
//! bit_budget = 1048576
//!
//! [depth_caps]
//! omega_anti = 5
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::arithfun::OracleBudget;
use crate::dynamics::DepthCaps;
use crate::error::{Error, Result};
use crate::factorint::{DEFAULT_BIT_BUDGET, DEFAULT_PRIME_INDEX_BUDGET, DEFAULT_SIEVE_BOUND};
use crate::preimage::DEFAULT_INVERSE_PHI_BUDGET;
use crate::topology::DEFAULT_ORBIT_STEP_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Largest `--bound` accepted by sweeps.
    pub sieve_bound: u32,
    pub oracle_budget: OracleBudget,
    pub depth_caps: DepthCaps,
    /// Largest explicit integer, in bits, a factored value may be expanded to.
    pub bit_budget: u64,
    pub prime_index_budget: u64,
    pub inverse_phi_budget: u64,
    pub orbit_step_cap: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            sieve_bound: DEFAULT_SIEVE_BOUND,
            oracle_budget: OracleBudget::default(),
            depth_caps: DepthCaps::default(),
            bit_budget: DEFAULT_BIT_BUDGET,
            prime_index_budget: DEFAULT_PRIME_INDEX_BUDGET,
            inverse_phi_budget: DEFAULT_INVERSE_PHI_BUDGET as u64,
            orbit_step_cap: DEFAULT_ORBIT_STEP_CAP,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Config> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        text.parse()
    }
}

impl std::str::FromStr for Config {
    type Err = Error;

    fn from_str(s: &str) -> Result<Config> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }
}
