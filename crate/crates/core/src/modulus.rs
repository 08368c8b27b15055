//! Barrett reduction for moduli below 2^32.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Modulus {
    m: u64,
    r: u64,
}

impl Modulus {
    pub(crate) fn new(m: u64) -> Self {
        assert!((1..=u32::MAX as u64).contains(&m));
        Self { m, r: u64::MAX / m }
    }

    #[inline]
    pub(crate) fn get(self) -> u64 {
        self.m
    }

    /// `x mod m` for any `x < 2^64`.
    #[inline]
    pub(crate) fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.r as u128) >> 64) as u64;
        let mut t = x - q * self.m;
        while t >= self.m {
            t -= self.m;
        }
        t
    }

    /// `a·b mod m` for reduced `a`, `b`.
    #[inline]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_remainder(m in 1u64..=u32::MAX as u64, x in any::<u64>()) {
            prop_assert_eq!(Modulus::new(m).reduce(x), x % m);
        }
    }

    #[test]
    fn edges() {
        for m in [1u64, 2, 3, 65_536, u32::MAX as u64] {
            let md = Modulus::new(m);
            for x in [0, 1, m - 1, m, u64::MAX, u64::MAX - 1] {
                assert_eq!(md.reduce(x), x % m);
            }
        }
    }
}
