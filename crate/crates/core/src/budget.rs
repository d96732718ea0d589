//! Memory budgeting for whole-graph sweeps.

use thiserror::Error;

pub const DEFAULT_BUDGET: u64 = 4 << 30;

/// Environment variable overriding [`DEFAULT_BUDGET`], in bytes.
pub const BUDGET_ENV: &str = "ADG_MEM_BUDGET";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{what} needs about {needed} bytes, over the {budget}-byte memory budget")]
pub struct OverBudget {
    pub what: String,
    pub needed: u64,
    pub budget: u64,
}

/// Upper bound on the working memory an algorithm may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::from_env()
    }
}

impl Budget {
    pub fn new(bytes: u64) -> Self {
        Budget { bytes }
    }

    pub fn unlimited() -> Self {
        Budget { bytes: u64::MAX }
    }

    /// `ADG_MEM_BUDGET` if set and parseable, otherwise 4 GiB.
    pub fn from_env() -> Self {
        let bytes = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| parse_bytes(&s))
            .unwrap_or(DEFAULT_BUDGET);
        Budget { bytes }
    }

    pub fn bytes(&self) -> u64 {
        self.bytes
    }

    /// `count * per_item` bytes, saturating.
    pub fn check(&self, what: &str, count: u64, per_item: u64) -> Result<(), OverBudget> {
        let needed = count.saturating_mul(per_item);
        if needed > self.bytes {
            return Err(OverBudget {
                what: what.to_string(),
                needed,
                budget: self.bytes,
            });
        }
        Ok(())
    }
}

/// Parses `123`, `512M`, `4G`, `4GiB` and similar.
pub fn parse_bytes(s: &str) -> Option<u64> {
    let s = s.trim();
    let split = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    let (digits, unit) = s.split_at(split);
    let n: u64 = digits.parse().ok()?;
    let shift = match unit.trim().to_ascii_uppercase().as_str() {
        "" | "B" => 0,
        "K" | "KB" | "KIB" => 10,
        "M" | "MB" | "MIB" => 20,
        "G" | "GB" | "GIB" => 30,
        "T" | "TB" | "TIB" => 40,
        _ => return None,
    };
    n.checked_mul(1 << shift)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn byte_strings() {
        assert_eq!(parse_bytes("4096"), Some(4096));
        assert_eq!(parse_bytes("4G"), Some(4 << 30));
        assert_eq!(parse_bytes("512MiB"), Some(512 << 20));
        assert_eq!(parse_bytes("lots"), None);
    }

    #[test]
    fn refusal() {
        let b = Budget::new(1000);
        assert!(b.check("bfs", 100, 10).is_ok());
        let err = b.check("bfs", 101, 10).unwrap_err();
        assert_eq!(err.needed, 1010);
        assert!(Budget::unlimited().check("x", u64::MAX, 8).is_ok());
    }
}
