//! Atkin–Lehner elements `w = d'x + yφ ∈ O` for Hall divisors `d' ∥ d`,
//! built from Bézout certificates `d'N(x) − d''N(y) = ε`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::bezout::{self, BezoutCertificate, Mode};
use crate::eisenstein::EisensteinInt;
use crate::error::{Error, Result};
use crate::quaternion::{OrderElement, QuatElement};

/// `w` with `Nr(w) = ε·d'` and `w² = d'·q`, `q ∈ O^×`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtkinLehnerElement {
    pub d: u64,
    pub d_prime: u64,
    pub w: OrderElement,
    pub q: OrderElement,
    pub epsilon: i8,
}

fn check_hall(d: u64, d_prime: u64) -> Result<()> {
    if d == 0 || d_prime == 0 || d % d_prime != 0 || d_prime.gcd(&(d / d_prime)) != 1 {
        return Err(Error::InvalidInput(format!(
            "{d_prime} is not a Hall divisor of {d}"
        )));
    }
    Ok(())
}

impl AtkinLehnerElement {
    /// Solves `(d', d/d')` in mode `Any`; a swapped certificate is oriented
    /// rather than discarded.
    pub fn build(d: u64, d_prime: u64, bound: u64) -> Result<Self> {
        check_hall(d, d_prime)?;
        let cert = bezout::solve(d_prime, d / d_prime, Mode::Any, bound)?;
        Self::from_certificate(d, &cert)
    }

    pub fn from_certificate(d: u64, cert: &BezoutCertificate) -> Result<Self> {
        if !cert.verify() || (cert.d_prime as u128) * (cert.d_dprime as u128) != d as u128 {
            return Err(Error::InvalidInput(format!(
                "certificate does not match d = {d}"
            )));
        }
        let c = cert.orient();
        let x = c.x.checked_scale(c.d_prime as i128)?;
        Self::from_parts(d, c.d_prime, &x, &c.y)
    }

    /// `w = x + yφ`, validated against both defining identities.
    pub fn from_parts(d: u64, d_prime: u64, x: &EisensteinInt, y: &EisensteinInt) -> Result<Self> {
        Self::from_element(d_prime, OrderElement::from_parts(d, x, y))
    }

    pub fn from_element(d_prime: u64, w: OrderElement) -> Result<Self> {
        check_hall(w.d, d_prime)?;
        let dp = BigInt::from(d_prime);
        let nr = w.nr();
        let epsilon: i8 = if nr == dp {
            1
        } else if nr == -&dp {
            -1
        } else {
            return Err(Error::InvalidInput(format!(
                "Nr({w}) = {nr} is not ±{d_prime}"
            )));
        };
        let q = w
            .mul(&w)?
            .div_exact(&dp)
            .ok_or_else(|| Error::NotInOrder(format!("w²/{d_prime} for w = {w}")))?;
        if !q.nr().is_one() {
            return Err(Error::InvalidInput(format!("w²/d' has norm {}", q.nr())));
        }
        Ok(AtkinLehnerElement {
            d: w.d,
            d_prime,
            w,
            q,
            epsilon,
        })
    }

    pub fn check_normalizes(&self) -> bool {
        check_normalizes(&self.w)
    }

    /// `w·ξ·w⁻¹`, which lies in O.
    pub fn conjugate(&self, xi: &OrderElement) -> Result<OrderElement> {
        self.w.conjugate(xi)?.to_order()
    }

    /// `α·w` for a unit `α`, again an Atkin–Lehner element at `d'`.
    pub fn absorb_unit(&self, alpha: &OrderElement) -> Result<Self> {
        if !alpha.is_unit() {
            return Err(Error::InvalidInput(format!("{alpha} is not a unit")));
        }
        Self::from_element(self.d_prime, alpha.mul(&self.w)?)
    }

    /// The x-part of `w` is divisible by `d'`.
    pub fn x_divisible(&self) -> bool {
        let dp = BigInt::from(self.d_prime);
        self.w.c[..2].iter().all(|c| c.is_multiple_of(&dp))
    }
}

/// True iff conjugation by `w` sends 1, ω, φ, ωφ into O.
pub fn check_normalizes(w: &OrderElement) -> bool {
    let Ok(inv) = w.to_quat().inverse() else {
        return false;
    };
    let wq = w.to_quat();
    OrderElement::basis(w.d).iter().all(|b| {
        wq.mul(&b.to_quat())
            .and_then(|t| t.mul(&inv))
            .map(|t| t.is_integral())
            .unwrap_or(false)
    })
}

/// Units of O with every coordinate in `[-radius, radius]`.
pub fn small_units(d: u64, radius: i64) -> Vec<OrderElement> {
    let mut out = Vec::new();
    for a in -radius..=radius {
        for b in -radius..=radius {
            for c in -radius..=radius {
                for e in -radius..=radius {
                    let x = OrderElement::from_ints(d, [a, b, c, e]);
                    if x.nr().abs().is_one() {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

/// Conjugate of an element in H(d) by `w`, kept rational for probes that
/// may leave O.
pub fn conjugate_rational(w: &OrderElement, xi: &OrderElement) -> Result<QuatElement> {
    w.conjugate(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor;

    fn d40_pair() -> (EisensteinInt, EisensteinInt) {
        (EisensteinInt::new(1, 5), EisensteinInt::new(1, -3))
    }

    fn w5() -> AtkinLehnerElement {
        let (x, y) = d40_pair();
        AtkinLehnerElement::from_parts(40, 5, &x.checked_scale(5).unwrap(), &y.conj().unwrap()).unwrap()
    }

    fn w8() -> AtkinLehnerElement {
        let (x, y) = d40_pair();
        AtkinLehnerElement::from_parts(40, 8, &y.checked_scale(8).unwrap(), &x.checked_scale(-1).unwrap())
            .unwrap()
    }

    #[test]
    fn d40_elements() {
        let (a, b) = (w5(), w8());
        assert_eq!(a.w.nr(), BigInt::from(5));
        assert_eq!(b.w.nr(), BigInt::from(-8));
        let one = OrderElement::one(40);
        assert_eq!(a.q, a.w.scale(&BigInt::from(-3)).sub(&one).unwrap());
        assert_eq!(b.q, b.w.scale(&BigInt::from(5)).add(&one).unwrap());
        assert!(a.check_normalizes() && b.check_normalizes());
        assert_eq!(b.w.mul(&a.w).unwrap(), OrderElement::phi(40).neg());
    }

    #[test]
    fn built_elements_satisfy_the_identities() {
        for d in 1..=120u64 {
            for e in factor::hall_divisors(d as u128).unwrap() {
                let w = AtkinLehnerElement::build(d, e as u64, bezout::DEFAULT_BOUND).unwrap();
                assert_eq!(w.w.nr(), BigInt::from(w.epsilon) * BigInt::from(e), "d={d} e={e}");
                assert_eq!(w.w.mul(&w.w).unwrap(), w.q.scale(&BigInt::from(e)));
                assert!(w.q.is_unit() && w.check_normalizes() && w.x_divisible());
            }
        }
    }

    #[test]
    fn trivial_divisor_gives_a_unit() {
        let w = AtkinLehnerElement::build(40, 1, 100).unwrap();
        assert!(w.w.is_unit());
    }

    #[test]
    fn phi_is_the_full_element() {
        let w = AtkinLehnerElement::from_element(40, OrderElement::phi(40)).unwrap();
        assert_eq!(w.epsilon, -1);
        assert!(w.q.is_one());
        assert!(w.check_normalizes());
    }

    #[test]
    fn non_normalizing_probe() {
        let probe = OrderElement::from_ints(40, [1, 0, 1, 0]);
        assert_eq!(probe.nr(), BigInt::from(-39));
        let c = conjugate_rational(&probe, &OrderElement::omega(40)).unwrap();
        assert!(!c.is_integral());
        assert!(!check_normalizes(&probe));
        assert!(AtkinLehnerElement::from_element(5, probe).is_err());
    }

    #[test]
    fn rejects_non_hall_divisors() {
        assert!(AtkinLehnerElement::build(40, 2, 100).is_err());
        assert!(AtkinLehnerElement::build(40, 3, 100).is_err());
    }

    #[test]
    fn independent_builds_differ_by_units() {
        let solver = bezout::Solver::default();
        for d in [40u64, 21, 35, 91, 110] {
            for e in factor::hall_divisors(d as u128).unwrap() {
                let e = e as u64;
                let a = AtkinLehnerElement::build(d, e, 10_000).unwrap();
                let b = match solver.solve(e, d / e, Mode::ExactOne, 10_000) {
                    Ok(c) => AtkinLehnerElement::from_certificate(d, &c).unwrap(),
                    Err(_) => continue,
                };
                let ainv = a.w.to_quat().inverse().unwrap();
                let l = b.w.to_quat().mul(&ainv).unwrap().to_order().unwrap();
                let r = ainv.mul(&b.w.to_quat()).unwrap().to_order().unwrap();
                assert!(l.is_unit() && r.is_unit(), "d={d} e={e}");
            }
        }
    }

    #[test]
    fn unit_absorption() {
        let units = small_units(40, 7);
        assert!(units.len() > 6);
        let base = [w5(), w8()];
        for w in &base {
            for a in &units {
                let aw = w.absorb_unit(a).unwrap();
                assert!(aw.x_divisible() && aw.check_normalizes());
            }
        }
    }

    #[test]
    fn conjugation_moves_invariants_by_hall_divisor() {
        for d in [9u64, 12, 40, 63, 90] {
            let xs = crate::order3::enumerate(d, 3 * d as i64).unwrap();
            for e in factor::hall_divisors(d as u128).unwrap() {
                let e = e as u64;
                let w = AtkinLehnerElement::build(d, e, bezout::DEFAULT_BOUND).unwrap();
                for xi in &xs {
                    let c = w.conjugate(&xi.elem).unwrap();
                    let eta = crate::order3::Order3Element::from_element(c).unwrap();
                    let x1 = &xi.elem.c[0];
                    let ee = BigInt::from(d / e);
                    let expected = BigInt::from(e).gcd(&(x1 + 1)) * ee.gcd(x1);
                    assert_eq!(BigInt::from(eta.d_prime_inv), expected, "d={d} e={e} xi={}", xi.elem);
                }
            }
        }
    }
}
