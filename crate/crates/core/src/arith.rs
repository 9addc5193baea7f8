//! Checked 128-bit helpers. Every overflow is reported, never wrapped.

use num_integer::Integer;

use crate::error::{Error, Result};

#[inline]
pub fn add(a: u128, b: u128, ctx: &'static str) -> Result<u128> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

#[inline]
pub fn mul(a: u128, b: u128, ctx: &'static str) -> Result<u128> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

pub fn lcm(a: u128, b: u128) -> Result<u128> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    mul(a / a.gcd(&b), b, "lcm")
}

pub fn lcm_all(values: &[u128]) -> Result<u128> {
    values.iter().try_fold(1u128, |acc, &v| lcm(acc, v))
}

/// `x * y <= z` without overflowing.
#[inline]
pub fn mul_le(x: u128, y: u128, z: u128) -> bool {
    match x.checked_mul(y) {
        Some(p) => p <= z,
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_all(&[1, 3, 5]).unwrap(), 15);
        assert_eq!(lcm_all(&[4, 6]).unwrap(), 12);
        assert_eq!(lcm_all(&[]).unwrap(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(mul(u128::MAX, 2, "t"), Err(Error::Overflow("t"))));
        assert!(lcm(u128::MAX, u128::MAX - 1).is_err());
        assert!(!mul_le(u128::MAX, 2, u128::MAX));
        assert!(mul_le(3, 4, 12));
    }
}
