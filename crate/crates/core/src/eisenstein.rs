//! Exact arithmetic in Z[ω], ω² + ω + 1 = 0, and Loeschian numbers.
//!
//! A Loeschian number is a norm `a² − ab + b²` of some `a + bω`. A
//! nonnegative integer is Loeschian exactly when every prime `p ≡ 2 (mod 3)`
//! divides it to an even power.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::factor::{self, small_primes};

/// The element `a + bω` of Z[ω].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EisensteinInt {
    pub a: i128,
    pub b: i128,
}

fn ck(v: Option<i128>, what: &'static str) -> Result<i128> {
    v.ok_or(Error::Overflow(what))
}

impl EisensteinInt {
    pub const ZERO: EisensteinInt = EisensteinInt { a: 0, b: 0 };
    pub const ONE: EisensteinInt = EisensteinInt { a: 1, b: 0 };
    pub const OMEGA: EisensteinInt = EisensteinInt { a: 0, b: 1 };
    /// `1 − ω`, of norm 3.
    pub const THETA: EisensteinInt = EisensteinInt { a: 1, b: -1 };

    pub const fn new(a: i128, b: i128) -> Self {
        EisensteinInt { a, b }
    }

    /// `a² − ab + b²`, computed as `((a − b)² + a² + b²) / 2`.
    pub fn norm(&self) -> Result<u128> {
        let (a, b) = (self.a, self.b);
        let diff = ck(a.checked_sub(b), "norm")?;
        let sq = |x: i128| -> Result<u128> {
            let u = x.unsigned_abs();
            u.checked_mul(u).ok_or(Error::Overflow("norm"))
        };
        let total = sq(diff)?
            .checked_add(sq(a)?)
            .and_then(|s| s.checked_add(sq(b).ok()?))
            .ok_or(Error::Overflow("norm"))?;
        Ok(total / 2)
    }

    /// Complex conjugate: `(a − b) − bω`.
    pub fn conj(&self) -> Result<Self> {
        Ok(EisensteinInt::new(
            ck(self.a.checked_sub(self.b), "conj")?,
            ck(self.b.checked_neg(), "conj")?,
        ))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let ac = ck(self.a.checked_mul(other.a), "mul")?;
        let bd = ck(self.b.checked_mul(other.b), "mul")?;
        let ad = ck(self.a.checked_mul(other.b), "mul")?;
        let bc = ck(self.b.checked_mul(other.a), "mul")?;
        Ok(EisensteinInt::new(
            ck(ac.checked_sub(bd), "mul")?,
            ck(ad.checked_add(bc).and_then(|s| s.checked_sub(bd)), "mul")?,
        ))
    }

    pub fn checked_scale(&self, k: i128) -> Result<Self> {
        Ok(EisensteinInt::new(
            ck(self.a.checked_mul(k), "scale")?,
            ck(self.b.checked_mul(k), "scale")?,
        ))
    }

    pub fn checked_pow(&self, mut e: u32) -> Result<Self> {
        let mut acc = EisensteinInt::ONE;
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// The six units ±1, ±ω, ±ω².
    pub const fn units() -> [EisensteinInt; 6] {
        [
            EisensteinInt::new(1, 0),
            EisensteinInt::new(0, 1),
            EisensteinInt::new(-1, -1),
            EisensteinInt::new(-1, 0),
            EisensteinInt::new(0, -1),
            EisensteinInt::new(1, 1),
        ]
    }

    /// Associates of `self` and of its conjugate (twelve entries, possibly
    /// repeated).
    pub fn orbit(&self) -> Result<Vec<EisensteinInt>> {
        let conj = self.conj()?;
        let mut out = Vec::with_capacity(12);
        for u in EisensteinInt::units() {
            out.push(u.checked_mul(self)?);
            out.push(u.checked_mul(&conj)?);
        }
        Ok(out)
    }

    /// Representative of the orbit with `a ≥ b ≥ 0`, lexicographically
    /// smallest among those.
    pub fn canonical(&self) -> Result<Self> {
        Ok(self
            .orbit()?
            .into_iter()
            .filter(|z| z.a >= z.b && z.b >= 0)
            .min()
            .unwrap_or(EisensteinInt::ZERO))
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) => write!(f, "{b}ω"),
            (a, b) if b < 0 => write!(f, "{a}-{}ω", b.unsigned_abs()),
            (a, b) => write!(f, "{a}+{b}ω"),
        }
    }
}

pub fn multiply(x: &EisensteinInt, y: &EisensteinInt) -> Result<EisensteinInt> {
    x.checked_mul(y)
}

pub fn norm(x: &EisensteinInt) -> Result<u128> {
    x.norm()
}

/// Shape `n = 3^three_exp · ∏ p^e · inert_root²` of a Loeschian number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoeschianFactorization {
    pub n: u128,
    pub three_exp: u32,
    /// Primes `p ≡ 1 (mod 3)` with their exponents, ascending.
    pub split_part: Vec<(u128, u32)>,
    /// Product of `p^(k/2)` over the inert primes `p ≡ 2 (mod 3)`.
    pub inert_root: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LoeschianClass {
    Loeschian(LoeschianFactorization),
    /// `prime ≡ 2 (mod 3)` divides `n` to the odd power `exponent`.
    NotLoeschian { prime: u128, exponent: u32 },
}

impl LoeschianClass {
    pub fn is_loeschian(&self) -> bool {
        matches!(self, LoeschianClass::Loeschian(_))
    }
}

pub fn classify_loeschian(n: u128) -> Result<LoeschianClass> {
    if n == 0 {
        return Ok(LoeschianClass::Loeschian(LoeschianFactorization {
            n: 0,
            three_exp: 0,
            split_part: vec![],
            inert_root: 0,
        }));
    }
    let mut shape = LoeschianFactorization {
        n,
        three_exp: 0,
        split_part: vec![],
        inert_root: 1,
    };
    for (p, e) in factor::factorize(n)? {
        match p % 3 {
            0 => shape.three_exp = e,
            1 => shape.split_part.push((p, e)),
            _ if e % 2 == 1 => return Ok(LoeschianClass::NotLoeschian { prime: p, exponent: e }),
            _ => shape.inert_root *= p.pow(e / 2),
        }
    }
    Ok(LoeschianClass::Loeschian(shape))
}

/// Membership test that bails out at the first inert prime with odd
/// exponent, without finishing the factorization.
pub fn is_loeschian(n: u128) -> Result<bool> {
    if n == 0 {
        return Ok(true);
    }
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
            if p % 3 == 2 && e % 2 == 1 {
                return Ok(false);
            }
        }
    }
    if m == 1 {
        return Ok(true);
    }
    let limit = factor::TRIAL_LIMIT as u128;
    if m < limit * limit {
        return Ok(m % 3 != 2);
    }
    Ok(classify_loeschian(m)?.is_loeschian())
}

/// Element of norm `p` for a prime `p = 3` or `p ≡ 1 (mod 3)`, found by
/// Cornacchia's algorithm on `x² + 3y² = 4p`.
pub fn prime_representation(p: u128) -> Result<EisensteinInt> {
    if p == 3 {
        return Ok(EisensteinInt::new(2, 1));
    }
    if p % 3 != 1 || !factor::is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not a prime ≡ 1 (mod 3)")));
    }
    let mut t = factor::sqrt_mod_prime(p - 3, p).ok_or(Error::NotLoeschian { n: p })?;
    // t must share the parity of the discriminant −3
    if t % 2 == 0 {
        t = p - t;
    }
    let bound = factor::isqrt(4 * p);
    let (mut r0, mut r1) = (2 * p, t);
    while r1 > bound {
        let r = r0 % r1;
        r0 = r1;
        r1 = r;
    }
    let x = r1;
    let rest = 4 * p - x * x;
    if rest % 3 != 0 || !factor::is_square(rest / 3) {
        return Err(Error::InvalidInput(format!("Cornacchia failed for {p}")));
    }
    let y = factor::isqrt(rest / 3);
    let z = EisensteinInt::new(((x + y) / 2) as i128, y as i128);
    debug_assert_eq!(z.norm().ok(), Some(p));
    Ok(z)
}

/// Canonical element of norm `n`.
pub fn represent(n: u128) -> Result<EisensteinInt> {
    match classify_loeschian(n)? {
        LoeschianClass::NotLoeschian { .. } => Err(Error::NotLoeschian { n }),
        LoeschianClass::Loeschian(shape) => represent_factored(&shape),
    }
}

pub fn represent_factored(shape: &LoeschianFactorization) -> Result<EisensteinInt> {
    if shape.n == 0 {
        return Ok(EisensteinInt::ZERO);
    }
    let root = i128::try_from(shape.inert_root).map_err(|_| Error::Overflow("represent"))?;
    let mut z = EisensteinInt::new(2, 1)
        .checked_pow(shape.three_exp)?
        .checked_scale(root)?;
    for &(p, e) in &shape.split_part {
        z = z.checked_mul(&prime_representation(p)?.checked_pow(e)?)?;
    }
    let z = z.canonical()?;
    debug_assert_eq!(z.norm().ok(), Some(shape.n));
    Ok(z)
}

/// Every orbit representative of norm `n`: the elements `a + bω` with
/// `a ≥ 2b ≥ 0` and `a² − ab + b² = n`, by increasing `b`.
pub fn orbit_representatives(n: u128) -> Vec<EisensteinInt> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(EisensteinInt::ZERO);
        return out;
    }
    // a ≥ 2b forces n ≥ 3b²
    let bmax = factor::isqrt(n / 3);
    for b in 0..=bmax {
        // a = (b + sqrt(4n − 3b²)) / 2
        let disc = 4 * n - 3 * b * b;
        let s = factor::isqrt(disc);
        if s * s != disc || (b + s) % 2 != 0 {
            continue;
        }
        let a = (b + s) / 2;
        if a >= 2 * b {
            out.push(EisensteinInt::new(a as i128, b as i128));
        }
    }
    out
}

/// Bitset of the Loeschian numbers up to a fixed limit.
#[derive(Debug, Clone)]
pub struct LoeschianSieve {
    limit: u64,
    bits: Vec<u64>,
}

impl LoeschianSieve {
    /// Marks every norm `a² − ab + b² ≤ limit` with `a ≥ b ≥ 0`.
    pub fn new(limit: u64) -> Self {
        let mut bits = vec![0u64; (limit / 64 + 1) as usize];
        let mut b: u64 = 0;
        while 3 * b * b <= 4 * limit && b * b <= limit {
            let mut a = b;
            loop {
                let n = a * a - a * b + b * b;
                if n > limit {
                    break;
                }
                bits[(n / 64) as usize] |= 1 << (n % 64);
                a += 1;
            }
            b += 1;
        }
        LoeschianSieve { limit, bits }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// `None` when `n` lies beyond the sieve.
    pub fn get(&self, n: u128) -> Option<bool> {
        (n <= self.limit as u128).then(|| self.bits[(n / 64) as usize] >> (n % 64) & 1 == 1)
    }

    /// Sieve lookup with a factorization fallback above the limit.
    pub fn contains(&self, n: u128) -> Result<bool> {
        match self.get(n) {
            Some(v) => Ok(v),
            None => is_loeschian(n),
        }
    }
}

/// Limit of the process-wide shared sieve.
pub const SHARED_SIEVE_LIMIT: u64 = 1 << 24;

/// A lazily built sieve up to [`SHARED_SIEVE_LIMIT`], shared read-only.
pub fn shared_sieve() -> Arc<LoeschianSieve> {
    static SIEVE: OnceLock<Arc<LoeschianSieve>> = OnceLock::new();
    SIEVE
        .get_or_init(|| Arc::new(LoeschianSieve::new(SHARED_SIEVE_LIMIT)))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_norm(a: i128, b: i128) -> i128 {
        a * a - a * b + b * b
    }

    /// Exhaustive search over 0 ≤ b ≤ a ≤ ceil(2√n).
    fn brute_loeschian(n: u128) -> bool {
        let top = 2 * factor::isqrt(n) as i128 + 2;
        (0..=top).any(|a| (0..=a).any(|b| brute_norm(a, b) == n as i128))
    }

    #[test]
    fn multiply_examples() {
        let x = EisensteinInt::new(3, -7);
        assert_eq!(multiply(&EisensteinInt::ONE, &x).unwrap(), x);
        // (1 + ω)² = 1 + 2ω + ω² = ω
        let one_plus = EisensteinInt::new(1, 1);
        assert_eq!(multiply(&one_plus, &one_plus).unwrap(), EisensteinInt::new(0, 1));
        // ω · ω² = 1
        assert_eq!(
            multiply(&EisensteinInt::OMEGA, &EisensteinInt::new(-1, -1)).unwrap(),
            EisensteinInt::ONE
        );
    }

    #[test]
    fn norm_examples() {
        assert_eq!(EisensteinInt::new(1, 5).norm().unwrap(), 21);
        assert_eq!(EisensteinInt::new(1, -3).norm().unwrap(), 13);
        assert_eq!(EisensteinInt::ZERO.norm().unwrap(), 0);
    }

    #[test]
    fn overflow_is_reported() {
        let big = EisensteinInt::new(i128::MAX / 2, 3);
        assert_eq!(big.checked_mul(&big), Err(Error::Overflow("mul")));
        let huge = EisensteinInt::new(i128::MAX, i128::MIN);
        assert!(huge.norm().is_err());
    }

    #[test]
    fn classify_examples() {
        match classify_loeschian(7).unwrap() {
            LoeschianClass::Loeschian(s) => {
                assert_eq!((s.three_exp, s.split_part, s.inert_root), (0, vec![(7, 1)], 1))
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            classify_loeschian(2).unwrap(),
            LoeschianClass::NotLoeschian { prime: 2, exponent: 1 }
        );
        match classify_loeschian(12).unwrap() {
            LoeschianClass::Loeschian(s) => {
                assert_eq!((s.three_exp, s.split_part, s.inert_root), (1, vec![], 2))
            }
            other => panic!("{other:?}"),
        }
        assert!(classify_loeschian(0).unwrap().is_loeschian());
        assert!(classify_loeschian(1).unwrap().is_loeschian());
    }

    #[test]
    fn represent_examples() {
        assert_eq!(represent(21).unwrap(), EisensteinInt::new(5, 1));
        assert_eq!(represent(1).unwrap(), EisensteinInt::new(1, 0));
        assert_eq!(represent(3).unwrap(), EisensteinInt::new(2, 1));
        assert_eq!(represent(12).unwrap(), EisensteinInt::new(4, 2));
        assert_eq!(represent(0).unwrap(), EisensteinInt::ZERO);
        assert_eq!(represent(2), Err(Error::NotLoeschian { n: 2 }));
        // the associate 1 + 5ω has the same norm
        assert_eq!(EisensteinInt::new(1, 5).canonical().unwrap(), EisensteinInt::new(5, 1));
    }

    #[test]
    fn classification_matches_brute_force_to_1e5() {
        let sieve = LoeschianSieve::new(100_000);
        let mut brute = vec![false; 100_001];
        for a in 0..=400i128 {
            for b in 0..=a {
                let n = brute_norm(a, b);
                if n <= 100_000 {
                    brute[n as usize] = true;
                }
            }
        }
        for n in 0..=100_000u128 {
            let want = brute[n as usize];
            let class = classify_loeschian(n).unwrap();
            assert_eq!(class.is_loeschian(), want, "n = {n}");
            assert_eq!(is_loeschian(n).unwrap(), want, "n = {n}");
            assert_eq!(sieve.get(n), Some(want), "n = {n}");
            if want {
                let z = represent(n).unwrap();
                assert_eq!(z.norm().unwrap(), n);
                assert!(z.a >= z.b && z.b >= 0);
            }
        }
        assert!(brute_loeschian(12) && !brute_loeschian(2));
    }

    #[test]
    fn orbit_representatives_cover_all_representations() {
        for n in [0u128, 1, 3, 7, 21, 49, 91, 147, 1729, 4515] {
            let reps = orbit_representatives(n);
            let top = 2 * factor::isqrt(n) as i128 + 2;
            for a in -top..=top {
                for b in -top..=top {
                    if brute_norm(a, b) == n as i128 {
                        let c = EisensteinInt::new(a, b).canonical().unwrap();
                        assert!(reps.contains(&c), "n = {n}, ({a}, {b})");
                    }
                }
            }
            for r in &reps {
                assert_eq!(r.canonical().unwrap(), *r);
            }
        }
    }

    #[test]
    fn large_prime_representation() {
        let p = 1_000_000_000_039u128; // prime, ≡ 1 (mod 3)
        assert!(factor::is_prime(p) && p % 3 == 1);
        assert_eq!(prime_representation(p).unwrap().norm().unwrap(), p);
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in -10_000i128..10_000, b in -10_000i128..10_000,
                                  c in -10_000i128..10_000, e in -10_000i128..10_000) {
            let x = EisensteinInt::new(a, b);
            let y = EisensteinInt::new(c, e);
            let p = multiply(&x, &y).unwrap();
            prop_assert_eq!(p.norm().unwrap(), x.norm().unwrap() * y.norm().unwrap());
            prop_assert!(x.norm().unwrap() % 3 != 2);
            prop_assert_eq!(x.norm().unwrap() == 0, a == 0 && b == 0);
        }

        #[test]
        fn products_stay_loeschian(u in 0u128..50_000, v in 0u128..50_000) {
            if is_loeschian(u).unwrap() && is_loeschian(v).unwrap() {
                prop_assert!(is_loeschian(u * v).unwrap());
                prop_assert_eq!(represent(u * v).unwrap().norm().unwrap(), u * v);
            }
        }

        #[test]
        fn conjugate_has_equal_norm(a in -1000i128..1000, b in -1000i128..1000) {
            let x = EisensteinInt::new(a, b);
            let xbar = x.conj().unwrap();
            prop_assert_eq!(x.norm().unwrap(), xbar.norm().unwrap());
            // x · x̄ is the rational integer norm
            prop_assert_eq!(x.checked_mul(&xbar).unwrap(),
                            EisensteinInt::new(x.norm().unwrap() as i128, 0));
        }
    }
}
