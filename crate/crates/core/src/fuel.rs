use thiserror::Error;

pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("step budget of {limit} exhausted")]
pub struct OutOfFuel {
    pub limit: u64,
}

/// Step budget for long-running constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fuel {
    limit: u64,
    used: u64,
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_FUEL)
    }
}

impl Fuel {
    pub fn new(limit: u64) -> Self {
        Fuel { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn spend(&mut self, n: u64) -> Result<(), OutOfFuel> {
        self.check(n)?;
        self.used += n;
        Ok(())
    }

    /// Fails if `n` more units would exceed the budget; spends nothing.
    pub fn check(&self, n: u64) -> Result<(), OutOfFuel> {
        if n > self.remaining() {
            Err(OutOfFuel { limit: self.limit })
        } else {
            Ok(())
        }
    }
}
