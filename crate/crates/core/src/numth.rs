//! Exact integer number theory: gcd, deterministic primality, prime search in
//! an interval, and consecutive-integer windows with no element coprime to all
//! the others.
//!
//! Everything here works on `u64` and refuses to wrap: any intermediate value
//! that would leave the type is reported as [`NumthError::Overflow`].

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumthError {
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("malformed interval ({lo}, {hi}]: need lo >= 1 and hi > lo")]
    BadInterval { lo: u64, hi: u64 },
    #[error("window length must be at least 2, got {0}")]
    WindowTooShort(u64),
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
}

/// Greatest common divisor by the Euclidean algorithm.
pub fn gcd(a: u64, b: u64) -> Result<u64, NumthError> {
    if a == 0 && b == 0 {
        return Err(NumthError::BothZero);
    }
    Ok(gcd_unchecked(a, b))
}

/// Euclid without the zero check; `gcd_unchecked(0, 0) == 0`.
#[inline]
pub(crate) fn gcd_unchecked(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Deterministic primality by trial division up to the square root.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    // 6k ± 1 wheel. `d <= n / d` avoids squaring past u64::MAX.
    let mut d = 5u64;
    while d <= n / d {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Largest prime `p` with `lo_exclusive < p <= hi_inclusive`.
///
/// Scans downward from the top of the interval, so for the doubling blocks
/// used by the Bertrand weed labeler the answer is found after a handful of
/// primality tests.
pub fn largest_prime_in_range(lo_exclusive: u64, hi_inclusive: u64) -> Result<Option<u64>, NumthError> {
    if lo_exclusive < 1 || hi_inclusive <= lo_exclusive {
        return Err(NumthError::BadInterval {
            lo: lo_exclusive,
            hi: hi_inclusive,
        });
    }
    Ok((lo_exclusive + 1..=hi_inclusive).rev().find(|&p| is_prime(p)))
}

/// A run of consecutive integers in which every element shares a factor > 1
/// with some other element of the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PillaiRun {
    pub start: u64,
    pub length: u64,
}

impl PillaiRun {
    pub fn end_inclusive(&self) -> u64 {
        self.start + self.length - 1
    }
}

/// True iff no element of `{start, .., start + m - 1}` is coprime to all the
/// others. Pairwise gcd over the window.
pub fn window_is_pillai(start: u64, m: u64) -> Result<bool, NumthError> {
    if m < 2 {
        return Err(NumthError::WindowTooShort(m));
    }
    let end = start
        .checked_add(m - 1)
        .ok_or(NumthError::Overflow("window end exceeds u64"))?;
    let window = start..=end;
    Ok(window.clone().all(|x| {
        window
            .clone()
            .any(|y| y != x && gcd_unchecked(x, y) > 1)
    }))
}

/// Smallest `start` in `1..=limit` whose window of length `m` is a Pillai
/// window. `None` only means nothing was found up to `limit`.
pub fn find_pillai_run(m: u64, limit: u64) -> Result<Option<PillaiRun>, NumthError> {
    if m < 2 {
        return Err(NumthError::WindowTooShort(m));
    }
    limit
        .checked_add(m - 1)
        .ok_or(NumthError::Overflow("search window end exceeds u64"))?;
    for start in 1..=limit {
        if window_is_pillai(start, m)? {
            return Ok(Some(PillaiRun { start, length: m }));
        }
    }
    Ok(None)
}
