//! Scalar arithmetic in Z/pZ and quadratic residues.
//!
//! Residues are `u32` values in `[0, p)`; products go through `u64`.

use crate::error::{Error, Result};

/// Trial division. Intended for the small moduli used throughout the crate.
pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut k = 3u32;
    while k.saturating_mul(k) <= n {
        if n % k == 0 {
            return false;
        }
        k += 2;
    }
    true
}

#[inline]
pub fn reduce(x: i64, p: u32) -> u32 {
    x.rem_euclid(i64::from(p)) as u32
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    ((u64::from(a) + u64::from(b)) % u64::from(p)) as u32
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    ((u64::from(a) + u64::from(p) - u64::from(b)) % u64::from(p)) as u32
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((u64::from(a) * u64::from(b)) % u64::from(p)) as u32
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    sub(0, a, p)
}

pub fn pow(mut base: u32, mut exp: u64, p: u32) -> u32 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Multiplicative inverse for prime `p`; `None` for zero.
pub fn inv(a: u32, p: u32) -> Option<u32> {
    if a % p == 0 {
        None
    } else {
        Some(pow(a, u64::from(p) - 2, p))
    }
}

/// `sum a_k x_k mod p` over reduced coordinates.
#[inline]
pub fn dot(a: &[u32], x: &[u32], p: u32) -> u32 {
    let p = u64::from(p);
    let mut acc = 0u64;
    for (&ak, &xk) in a.iter().zip(x) {
        acc += u64::from(ak) * u64::from(xk);
        if acc >= 1 << 62 {
            acc %= p;
        }
    }
    (acc % p) as u32
}

fn ensure_odd_prime(p: u32) -> Result<()> {
    if p == 2 {
        return Err(Error::Unsupported(
            "quadratic residues mod 2: every residue is a square".into(),
        ));
    }
    if !is_prime(p) {
        return Err(Error::Parameter(format!("modulus {p} is not prime")));
    }
    Ok(())
}

/// Whether `c` is a square mod the odd prime `p` (0 counts as a square).
///
/// Uses Euler's criterion `c^((p-1)/2) = 1`.
pub fn is_square(c: u32, p: u32) -> Result<bool> {
    ensure_odd_prime(p)?;
    let c = c % p;
    Ok(c == 0 || pow(c, u64::from(p - 1) / 2, p) == 1)
}

/// Least non-square in `[2, p)`.
pub fn smallest_nonsquare(p: u32) -> Result<u32> {
    ensure_odd_prime(p)?;
    for n in 2..p {
        if !is_square(n, p)? {
            return Ok(n);
        }
    }
    Err(Error::Consistency(format!("no non-square mod {p}")))
}

/// All non-squares in `[1, p)`, ascending.
pub fn nonsquares(p: u32) -> Result<Vec<u32>> {
    ensure_odd_prime(p)?;
    let mut out = Vec::with_capacity((p as usize - 1) / 2);
    for n in 1..p {
        if !is_square(n, p)? {
            out.push(n);
        }
    }
    Ok(out)
}

/// Lookup table `table[c] == is_square(c, p)` for odd prime `p`.
pub fn square_table(p: u32) -> Result<Vec<bool>> {
    ensure_odd_prime(p)?;
    let mut table = vec![false; p as usize];
    for t in 0..p {
        table[mul(t, t, p) as usize] = true;
    }
    Ok(table)
}
