//! Integer factorization and modular helpers on `u128`.
//!
//! Trial division by the primes below 10⁶ is followed by Brent's variant of
//! Pollard rho on whatever cofactor remains. Primality is Miller–Rabin,
//! deterministic below 2⁶⁴ and with a fixed base set above.

use std::sync::OnceLock;

use num_integer::Roots;

use crate::error::{Error, Result};

/// Trial division covers every prime below this limit.
pub const TRIAL_LIMIT: u32 = 1_000_000;

/// Effort cap for the Pollard rho stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Total number of rho iterations spent over all cofactors.
    pub rho_iterations: u64,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            rho_iterations: 50_000_000,
        }
    }
}

pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::with_capacity(80_000);
        for i in 2..n {
            if !composite[i] {
                primes.push(i as u32);
                let mut j = i * i;
                while j < n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

pub(crate) fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

pub(crate) fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller–Rabin. Deterministic for n < 2⁶⁴; above that the first 20 prime
/// bases are used.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &small_primes()[..20] {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let bases: &[u32] = if n <= u64::MAX as u128 {
        &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    } else {
        &small_primes()[..20]
    };
    'witness: for &a in bases {
        let mut x = pow_mod(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Brent's cycle finding on x ↦ x² + c. Returns a nontrivial factor of the
/// composite `n`, charging iterations against `budget`.
fn pollard_brent(n: u128, budget: &mut u64) -> Option<u128> {
    if n % 2 == 0 {
        return Some(2);
    }
    for c in 1..u128::MAX {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c % n, n);
        let (mut y, mut r, mut q) = (2u128, 1u64, 1u128);
        let (mut x, mut ys) = (0u128, 0u128);
        let mut g = 1u128;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BLOCK.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += steps;
                if *budget < steps {
                    return None;
                }
                *budget -= steps;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

/// Prime factorization as sorted `(prime, exponent)` pairs. `factorize(1)`
/// is empty; `factorize(0)` is rejected.
pub fn factorize(n: u128) -> Result<Vec<(u128, u32)>> {
    factorize_with(n, FactorConfig::default())
}

pub fn factorize_with(n: u128, config: FactorConfig) -> Result<Vec<(u128, u32)>> {
    if n == 0 {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut out: Vec<(u128, u32)> = Vec::new();
    let mut m = n;
    for &p in small_primes() {
        let p = p as u128;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
    }
    if m > 1 {
        let mut budget = config.rho_iterations;
        let mut stack = vec![m];
        let mut large = Vec::new();
        while let Some(c) = stack.pop() {
            if c < (TRIAL_LIMIT as u128) * (TRIAL_LIMIT as u128) || is_prime(c) {
                large.push(c);
                continue;
            }
            let f = pollard_brent(c, &mut budget).ok_or(Error::FactorizationTimeout { n })?;
            stack.push(f);
            stack.push(c / f);
        }
        large.sort_unstable();
        for p in large {
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of distinct prime factors.
pub fn omega(n: u128) -> Result<usize> {
    Ok(factorize(n)?.len())
}

/// Square root of `a` modulo an odd prime `p` (Tonelli–Shanks), if one exists.
pub fn sqrt_mod_prime(a: u128, p: u128) -> Option<u128> {
    let a = a % p;
    if p == 2 || a == 0 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    if s == 1 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut z = 2u128;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 1;
        let mut t2 = mul_mod(t, t, p);
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

pub fn isqrt(n: u128) -> u128 {
    n.sqrt()
}

pub fn is_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// Hall divisors of `n`: the divisors `e` with gcd(e, n/e) = 1, ascending.
pub fn hall_divisors(n: u128) -> Result<Vec<u128>> {
    let mut out = vec![1u128];
    for (p, e) in factorize(n)? {
        let pe = p.pow(e);
        let mut next: Vec<u128> = out.iter().map(|&x| x * pe).collect();
        out.append(&mut next);
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_mixed() {
        assert_eq!(factorize(1).unwrap(), vec![]);
        assert_eq!(factorize(12).unwrap(), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(999_983).unwrap(), vec![(999_983, 1)]);
        // two primes beyond the trial-division range
        let p = 1_000_003u128;
        let q = 1_000_000_007u128;
        assert_eq!(factorize(p * q).unwrap(), vec![(p, 1), (q, 1)]);
        assert_eq!(factorize(p * p * q).unwrap(), vec![(p, 2), (q, 1)]);
    }

    #[test]
    fn factors_beyond_64_bits() {
        let p = 18_446_744_073_709_551_557u128; // largest prime below 2^64
        let q = 1_000_000_007u128;
        assert!(is_prime(p));
        assert_eq!(factorize(p * q).unwrap(), vec![(q, 1), (p, 1)]);
    }

    #[test]
    fn rho_budget_is_enforced() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let err = factorize_with(p * q, FactorConfig { rho_iterations: 1 }).unwrap_err();
        assert_eq!(err, Error::FactorizationTimeout { n: p * q });
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for n in 0..5000u128 {
            let naive = n >= 2 && (2..n).take_while(|k| k * k <= n).all(|k| n % k != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
    }

    #[test]
    fn modular_square_roots() {
        for &p in &small_primes()[1..300] {
            let p = p as u128;
            let target = (p - 3) % p;
            match sqrt_mod_prime(target, p) {
                Some(t) => assert_eq!(t * t % p, target),
                None => assert!(p % 3 == 2, "p = {p}"),
            }
        }
    }

    #[test]
    fn hall_divisors_of_40() {
        assert_eq!(hall_divisors(40).unwrap(), vec![1, 5, 8, 40]);
        assert_eq!(hall_divisors(1).unwrap(), vec![1]);
    }
}
