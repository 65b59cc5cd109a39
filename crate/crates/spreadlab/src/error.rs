use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity exceeded: {what} needs {required} states but the cap is {cap}")]
    Capacity {
        what: String,
        required: u128,
        cap: u64,
    },
    #[error("index out of range: {0}")]
    Index(String),
    #[error("symbol {symbol} is not in an alphabet of size {size}")]
    Symbol { symbol: u32, size: usize },
    #[error("domain violation: {0}")]
    Domain(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operation needs a boolean alphabet, model has {0} symbols")]
    NonBoolean(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Enumeration budget shared by every exhaustive walk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub cap: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { cap: 1 << 26 }
    }
}

impl Limits {
    pub fn new(cap: u64) -> Self {
        Limits { cap }
    }

    pub fn check(&self, what: impl Into<String>, required: u128) -> Result<()> {
        if required > self.cap as u128 {
            return Err(Error::Capacity {
                what: what.into(),
                required,
                cap: self.cap,
            });
        }
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`, for capacity checks.
pub fn pow_sat(base: u128, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}
