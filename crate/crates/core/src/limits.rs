//! Memory guard for operations that materialize very large polynomials.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default ceiling on the number of coefficient bits a single operation may allocate.
pub const DEFAULT_BIT_CAP: u64 = 1 << 28;

/// Environment variable overriding [`DEFAULT_BIT_CAP`].
pub const BIT_CAP_ENV: &str = "F2REP_BIT_CAP";

/// The active bit cap, read once from the environment.
pub fn bit_cap() -> u64 {
    static CAP: OnceLock<u64> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(BIT_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BIT_CAP)
    })
}

/// Fails fast when `bits` exceeds the active cap.
pub fn ensure_bits(bits: u64) -> Result<()> {
    let cap = bit_cap();
    if bits > cap {
        return Err(Error::BitCapExceeded { bits, cap });
    }
    Ok(())
}
