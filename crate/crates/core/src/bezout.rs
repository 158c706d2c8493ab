//! Bézout relations between Loeschian numbers: for coprime `d'`, `d''` find
//! `u, v ∈ L` with `d'u − d''v = ±1`, optionally with `3 ∤ uv` or with the
//! sign pinned to `+1`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_integer::Integer;

use crate::eisenstein::{self, EisensteinInt, LoeschianSieve};
use crate::error::{Error, Result};

pub const DEFAULT_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `d'u − d''v = ±1`, either orientation.
    Any,
    /// As `Any`, additionally `3 ∤ uv`.
    NoThree,
    /// `d'u − d''v = 1` in the given orientation.
    ExactOne,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "any" => Ok(Mode::Any),
            "no-three" => Ok(Mode::NoThree),
            "exact-one" => Ok(Mode::ExactOne),
            other => Err(Error::InvalidInput(format!("unknown mode {other:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Any => "any",
            Mode::NoThree => "no-three",
            Mode::ExactOne => "exact-one",
        })
    }
}

/// `d'·u − d''·v = ε` with `u = N(x)`, `v = N(y)`; when `swapped` the
/// roles are exchanged and the relation reads `d''·u − d'·v = ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BezoutCertificate {
    pub d_prime: u64,
    pub d_dprime: u64,
    pub swapped: bool,
    pub epsilon: i8,
    pub x: EisensteinInt,
    pub y: EisensteinInt,
    pub u: u128,
    pub v: u128,
}

impl BezoutCertificate {
    /// Rewrites a swapped certificate in the unswapped orientation by
    /// exchanging `u` and `v` and negating `ε`.
    pub fn orient(&self) -> BezoutCertificate {
        if !self.swapped {
            return self.clone();
        }
        BezoutCertificate {
            swapped: false,
            epsilon: -self.epsilon,
            x: self.y,
            y: self.x,
            u: self.v,
            v: self.u,
            ..*self
        }
    }

    pub fn verify(&self) -> bool {
        verify(self)
    }

    pub fn has_no_three(&self) -> bool {
        self.u % 3 != 0 && self.v % 3 != 0
    }
}

pub fn verify(cert: &BezoutCertificate) -> bool {
    if cert.epsilon.abs() != 1 || cert.d_prime == 0 || cert.d_dprime == 0 {
        return false;
    }
    if cert.x.norm().ok() != Some(cert.u) || cert.y.norm().ok() != Some(cert.v) {
        return false;
    }
    let (p, q) = if cert.swapped {
        (cert.d_dprime, cert.d_prime)
    } else {
        (cert.d_prime, cert.d_dprime)
    };
    let lhs = (p as i128).checked_mul(cert.u as i128);
    let rhs = (q as i128).checked_mul(cert.v as i128);
    match (lhs, rhs) {
        (Some(l), Some(r)) => l - r == cert.epsilon as i128,
        _ => false,
    }
}

/// Searches with a shared Loeschian sieve; cheap to clone.
#[derive(Debug, Clone)]
pub struct Solver {
    sieve: Arc<LoeschianSieve>,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            sieve: eisenstein::shared_sieve(),
        }
    }
}

impl Solver {
    pub fn with_sieve(sieve: Arc<LoeschianSieve>) -> Self {
        Solver { sieve }
    }

    pub fn sieve(&self) -> &LoeschianSieve {
        &self.sieve
    }

    pub fn solve(&self, d_prime: u64, d_dprime: u64, mode: Mode, bound: u64) -> Result<BezoutCertificate> {
        if d_prime == 0 || d_dprime == 0 || bound == 0 {
            return Err(Error::InvalidInput("d', d'' and bound must be positive".into()));
        }
        if d_prime.gcd(&d_dprime) != 1 {
            return Err(Error::InvalidInput(format!("gcd({d_prime}, {d_dprime}) ≠ 1")));
        }
        let cert = match mode {
            Mode::Any => self.search(d_prime, d_dprime, false, true, bound)?,
            Mode::NoThree => {
                if (d_prime as u128 * d_dprime as u128) % 3 == 1 {
                    return Err(Error::InvalidInput(format!(
                        "d'd'' ≡ 1 (mod 3) for ({d_prime}, {d_dprime}): ±1 with 3 ∤ uv is impossible"
                    )));
                }
                self.search(d_prime, d_dprime, true, true, bound)?
            }
            Mode::ExactOne => {
                if (d_prime as u128 * d_dprime as u128) % 3 == 0 {
                    return Err(Error::InvalidInput(format!(
                        "exact-one needs 3 ∤ d'd'', got ({d_prime}, {d_dprime})"
                    )));
                }
                self.exact_one(d_prime, d_dprime, bound)?
            }
        };
        debug_assert!(cert.verify());
        Ok(cert)
    }

    fn member(&self, n: u128) -> Result<bool> {
        self.sieve.contains(n)
    }

    /// Ascending `v`; at each `v` the unswapped orientation precedes the
    /// swapped one and `ε = +1` precedes `ε = −1`.
    fn search(
        &self,
        d_prime: u64,
        d_dprime: u64,
        no_three: bool,
        allow_swap: bool,
        bound: u64,
    ) -> Result<BezoutCertificate> {
        let orientations: &[bool] = if allow_swap { &[false, true] } else { &[false] };
        for v in 0..=bound as u128 {
            if no_three && v % 3 == 0 {
                continue;
            }
            if !self.member(v)? {
                continue;
            }
            for &swapped in orientations {
                let (p, q) = if swapped {
                    (d_dprime as u128, d_prime as u128)
                } else {
                    (d_prime as u128, d_dprime as u128)
                };
                let qv = q.checked_mul(v).ok_or(Error::Overflow("bezout search"))?;
                for epsilon in [1i8, -1] {
                    let num = if epsilon == 1 {
                        qv + 1
                    } else if qv == 0 {
                        continue;
                    } else {
                        qv - 1
                    };
                    if num % p != 0 {
                        continue;
                    }
                    let u = num / p;
                    if no_three && u % 3 == 0 {
                        continue;
                    }
                    if self.member(u)? {
                        return certificate(d_prime, d_dprime, swapped, epsilon, u, v);
                    }
                }
            }
        }
        Err(Error::Exhausted { bound })
    }

    fn exact_one(&self, d_prime: u64, d_dprime: u64, bound: u64) -> Result<BezoutCertificate> {
        let theta = EisensteinInt::THETA;
        let reduced = match (d_prime % 3, d_dprime % 3) {
            // d'u − 3d''v = 1, then v ↦ 3v
            (1, _) => d_dprime
                .checked_mul(3)
                .map(|q| (d_prime, q, false)),
            // 3d'u − d''v = 1, then u ↦ 3u
            (2, 2) => d_prime.checked_mul(3).map(|p| (p, d_dprime, true)),
            _ => None,
        };
        let attempt = match reduced {
            Some((p, q, absorb_into_u)) => self
                .search(p, q, false, true, bound)
                .map(|c| c.orient())
                .ok()
                .filter(|c| c.epsilon == 1)
                .map(|c| -> Result<BezoutCertificate> {
                    let (x, y, u, v) = if absorb_into_u {
                        (c.x.checked_mul(&theta)?, c.y, 3 * c.u, c.v)
                    } else {
                        (c.x, c.y.checked_mul(&theta)?, c.u, 3 * c.v)
                    };
                    Ok(BezoutCertificate {
                        d_prime,
                        d_dprime,
                        swapped: false,
                        epsilon: 1,
                        x,
                        y,
                        u,
                        v,
                    })
                })
                .transpose()?,
            None if d_prime % 3 == 2 => self
                .search(d_prime, d_dprime, true, true, bound)
                .map(|c| c.orient())
                .ok()
                .filter(|c| c.epsilon == 1),
            None => None,
        };
        if let Some(cert) = attempt.filter(|c| c.verify()) {
            return Ok(cert);
        }
        self.search_exact(d_prime, d_dprime, bound)
    }

    /// Blind search for `d'u − d''v = 1` in the given orientation.
    fn search_exact(&self, d_prime: u64, d_dprime: u64, bound: u64) -> Result<BezoutCertificate> {
        let (p, q) = (d_prime as u128, d_dprime as u128);
        for v in 0..=bound as u128 {
            if !self.member(v)? {
                continue;
            }
            let num = q.checked_mul(v).ok_or(Error::Overflow("bezout search"))? + 1;
            if num % p == 0 && self.member(num / p)? {
                return certificate(d_prime, d_dprime, false, 1, num / p, v);
            }
        }
        Err(Error::Exhausted { bound })
    }
}

fn certificate(
    d_prime: u64,
    d_dprime: u64,
    swapped: bool,
    epsilon: i8,
    u: u128,
    v: u128,
) -> Result<BezoutCertificate> {
    Ok(BezoutCertificate {
        d_prime,
        d_dprime,
        swapped,
        epsilon,
        x: eisenstein::represent(u)?,
        y: eisenstein::represent(v)?,
        u,
        v,
    })
}

/// [`Solver::solve`] with the shared sieve.
pub fn solve(d_prime: u64, d_dprime: u64, mode: Mode, bound: u64) -> Result<BezoutCertificate> {
    Solver::default().solve(d_prime, d_dprime, mode, bound)
}
