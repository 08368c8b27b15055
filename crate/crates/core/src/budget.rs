use crate::error::{Error, Result};

/// Limits applied before any enumeration-based search starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_ring_order: u64,
    pub max_membership_tuples: u64,
}

impl SearchBudget {
    pub const DEFAULT_RING_ORDER: u64 = 65_536;
    pub const DEFAULT_MEMBERSHIP_TUPLES: u64 = 1 << 24;

    pub fn new(max_ring_order: u64, max_membership_tuples: u64) -> Self {
        assert!(max_ring_order > 0 && max_membership_tuples > 0);
        Self {
            max_ring_order,
            max_membership_tuples,
        }
    }

    pub fn check_order(&self, what: &'static str, order: u64) -> Result<()> {
        if order > self.max_ring_order {
            return Err(Error::BudgetExceeded {
                what,
                required: order as u128,
                limit: self.max_ring_order,
            });
        }
        Ok(())
    }

    /// Checks `order^count` against the tuple budget without overflowing.
    pub fn check_tuples(&self, what: &'static str, order: u64, count: usize) -> Result<()> {
        let mut required: u128 = 1;
        for _ in 0..count {
            required = required.saturating_mul(order as u128);
        }
        if required > self.max_membership_tuples as u128 {
            return Err(Error::BudgetExceeded {
                what,
                required,
                limit: self.max_membership_tuples,
            });
        }
        Ok(())
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self::new(Self::DEFAULT_RING_ORDER, Self::DEFAULT_MEMBERSHIP_TUPLES)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let b = SearchBudget::default();
        assert_eq!(b.max_ring_order, 65_536);
        assert_eq!(b.max_membership_tuples, 16_777_216);
    }

    #[test]
    fn tuple_check_saturates() {
        let b = SearchBudget::default();
        assert!(b.check_tuples("t", 4096, 2).is_ok());
        assert!(b.check_tuples("t", 4097, 2).is_err());
        assert!(b.check_tuples("t", u64::MAX, 40).is_err());
        assert!(b.check_tuples("t", 7, 0).is_ok());
    }
}
