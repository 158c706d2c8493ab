//! Integral binary quadratic forms `Ax² + Bxy + Cy²` and Pell's equation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factor;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryQF {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl BinaryQF {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        BinaryQF {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    /// The form `v ↦ f(T v)`.
    pub fn compose(&self, t: &Transform) -> BinaryQF {
        let [[p, q], [r, s]] = &t.0;
        let (a, b, c) = (&self.a, &self.b, &self.c);
        BinaryQF {
            a: a * p * p + b * p * r + c * r * r,
            b: BigInt::from(2) * a * p * q + b * (p * s + q * r) + BigInt::from(2) * c * r * s,
            c: a * q * q + b * q * s + c * s * s,
        }
    }

    pub fn neg(&self) -> BinaryQF {
        BinaryQF {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
        }
    }

    /// Reduced in the usual sense: `|B| ≤ A ≤ C`, with `B ≥ 0` when
    /// `|B| = A` or `A = C`.
    pub fn is_reduced(&self) -> bool {
        let babs = self.b.abs();
        self.a.is_positive()
            && babs <= self.a
            && self.a <= self.c
            && !((babs == self.a || self.a == self.c) && self.b.is_negative())
    }

    fn not_definite(&self) -> Error {
        Error::NotDefinite {
            a: self.a.to_string(),
            b: self.b.to_string(),
            c: self.c.to_string(),
        }
    }
}

impl fmt::Display for BinaryQF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// A 2×2 integer matrix of determinant ±1, acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transform(pub [[BigInt; 2]; 2]);

impl Transform {
    pub fn identity() -> Self {
        Transform([
            [BigInt::one(), BigInt::zero()],
            [BigInt::zero(), BigInt::one()],
        ])
    }

    pub fn det(&self) -> BigInt {
        let [[p, q], [r, s]] = &self.0;
        p * s - q * r
    }

    pub fn mul(&self, other: &Transform) -> Transform {
        let [[a, b], [c, d]] = &self.0;
        let [[e, f], [g, h]] = &other.0;
        Transform([
            [a * e + b * g, a * f + b * h],
            [c * e + d * g, c * f + d * h],
        ])
    }

    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        let [[p, q], [r, s]] = &self.0;
        (p * x + q * y, r * x + s * y)
    }
}

/// Output of [`reduce`]: `form = sign · (f ∘ transform)` with `form` reduced
/// and positive definite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub form: BinaryQF,
    pub transform: Transform,
    /// +1 for positive definite input, −1 for negative definite.
    pub sign: i8,
}

/// Gauss reduction of a definite form. Negative definite forms are reduced
/// through `−f`.
pub fn reduce(f: &BinaryQF) -> Result<Reduction> {
    if !f.disc().is_negative() {
        return Err(f.not_definite());
    }
    let (mut g, sign) = if f.a.is_positive() {
        (f.clone(), 1)
    } else {
        (f.neg(), -1)
    };
    let mut t = Transform::identity();
    let two = BigInt::from(2);
    loop {
        // translate so that −A < B ≤ A
        let two_a = &two * &g.a;
        if g.b > g.a || -&g.b >= g.a {
            let s = (&g.a - &g.b).div_floor(&two_a);
            let step = Transform([[BigInt::one(), s], [BigInt::zero(), BigInt::one()]]);
            g = g.compose(&step);
            t = t.mul(&step);
        }
        if g.a > g.c || (g.a == g.c && g.b.is_negative()) {
            let step = Transform([
                [BigInt::zero(), BigInt::from(-1)],
                [BigInt::one(), BigInt::zero()],
            ]);
            g = g.compose(&step);
            t = t.mul(&step);
            continue;
        }
        break;
    }
    debug_assert!(g.is_reduced());
    Ok(Reduction {
        form: g,
        transform: t,
        sign,
    })
}

/// A representation `f(k, ℓ) = ε` of `ε ∈ {±1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitRepresentation {
    pub k: BigInt,
    pub l: BigInt,
    pub epsilon: i8,
}

/// Finds `(k, ℓ)` with `f(k, ℓ) = ±1` for a definite form, or `None` when the
/// form does not represent ±1. The minimum of a reduced positive form is its
/// first coefficient, so ±1 is represented iff the reduced form has `A = 1`,
/// realized at `(1, 0)` and pulled back through the transform.
pub fn represent_unit(f: &BinaryQF) -> Result<Option<UnitRepresentation>> {
    let red = reduce(f)?;
    if !red.form.a.is_one() {
        return Ok(None);
    }
    let (k, l) = red.transform.apply(&BigInt::one(), &BigInt::zero());
    let rep = UnitRepresentation {
        k,
        l,
        epsilon: red.sign,
    };
    debug_assert_eq!(f.eval(&rep.k, &rep.l), BigInt::from(rep.epsilon));
    Ok(Some(rep))
}

/// Least positive solution of `x² − n y² = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub n: u128,
    pub x0: BigInt,
    pub y0: BigInt,
}

pub const PELL_STEP_LIMIT: u64 = 10_000_000;

/// Minimal Pell solution from the continued fraction of √n.
pub fn pell_min_solution(n: u128) -> Result<PellSolution> {
    if n < 2 || factor::is_square(n) {
        return Err(Error::InvalidInput(format!(
            "Pell equation needs a nonsquare n ≥ 2, got {n}"
        )));
    }
    let a0 = factor::isqrt(n);
    let nn = BigInt::from(n);
    let (mut m, mut q, mut a) = (0u128, 1u128, a0);
    // convergents h/k
    let (mut h_prev, mut h) = (BigInt::one(), BigInt::from(a0));
    let (mut k_prev, mut k) = (BigInt::zero(), BigInt::one());
    for _ in 0..PELL_STEP_LIMIT {
        if &h * &h - &nn * &k * &k == BigInt::one() {
            return Ok(PellSolution { n, x0: h, y0: k });
        }
        m = q * a - m;
        q = (n - m * m) / q;
        a = (a0 + m) / q;
        let ab = BigInt::from(a);
        let h_next = &ab * &h + &h_prev;
        let k_next = &ab * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    Err(Error::PellPeriodExceeded {
        n,
        steps: PELL_STEP_LIMIT,
    })
}
