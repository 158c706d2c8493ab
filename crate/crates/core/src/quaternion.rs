//! The algebra H(d) = {x + yφ : x, y ∈ Q(ω)} with φ² = d and φx = x̄φ, and
//! its order O = {x + yφ : x, y ∈ Z[ω]}.
//!
//! Elements are stored by their four coordinates in the basis
//! {1, ω, φ, ωφ}. For ξ = x + yφ and η = u + vφ the product is
//! `ξη = (xu + d·y·v̄) + (xv + y·ū)φ`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::eisenstein::EisensteinInt;
use crate::error::{Error, Result};
use crate::factor;

/// `re + om·ω` with coefficients in any commutative ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycloPair<T> {
    pub re: T,
    pub om: T,
}

impl<T> CycloPair<T>
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    pub fn new(re: T, om: T) -> Self {
        CycloPair { re, om }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let bd = self.om.clone() * other.om.clone();
        CycloPair {
            re: self.re.clone() * other.re.clone() - bd.clone(),
            om: self.re.clone() * other.om.clone() + self.om.clone() * other.re.clone() - bd,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        CycloPair::new(
            self.re.clone() + other.re.clone(),
            self.om.clone() + other.om.clone(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        CycloPair::new(
            self.re.clone() - other.re.clone(),
            self.om.clone() - other.om.clone(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        CycloPair::new(self.re.clone() * k.clone(), self.om.clone() * k.clone())
    }

    pub fn conj(&self) -> Self {
        CycloPair::new(self.re.clone() - self.om.clone(), -self.om.clone())
    }

    /// `re² − re·om + om²`.
    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() - self.re.clone() * self.om.clone()
            + self.om.clone() * self.om.clone()
    }
}

/// Product of coordinate vectors in H(d), generic over the coefficient ring.
pub(crate) fn mul_coords<T>(d: &T, l: &[T; 4], r: &[T; 4]) -> [T; 4]
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let x = CycloPair::new(l[0].clone(), l[1].clone());
    let y = CycloPair::new(l[2].clone(), l[3].clone());
    let u = CycloPair::new(r[0].clone(), r[1].clone());
    let v = CycloPair::new(r[2].clone(), r[3].clone());
    let first = x.mul(&u).add(&y.mul(&v.conj()).scale(d));
    let second = x.mul(&v).add(&y.mul(&u.conj()));
    [first.re, first.om, second.re, second.om]
}

fn nr_coords<T>(d: &T, c: &[T; 4]) -> T
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>,
{
    let x = CycloPair::new(c[0].clone(), c[1].clone());
    let y = CycloPair::new(c[2].clone(), c[3].clone());
    x.norm() - d.clone() * y.norm()
}

fn tr_coords<T>(c: &[T; 4]) -> T
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    c[0].clone() + c[0].clone() - c[1].clone()
}

/// An element of H(d) with exact rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuatElement {
    pub d: u64,
    pub c: [BigRational; 4],
}

/// An element of the order O ⊂ H(d): all four coordinates are integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderElement {
    pub d: u64,
    pub c: [BigInt; 4],
}

fn same_algebra(l: u64, r: u64) -> Result<()> {
    if l == r {
        Ok(())
    } else {
        Err(Error::AlgebraMismatch { left: l, right: r })
    }
}

impl QuatElement {
    pub fn new(d: u64, c: [BigRational; 4]) -> Self {
        QuatElement { d, c }
    }

    pub fn from_ints(d: u64, c: [i64; 4]) -> Self {
        QuatElement::new(d, c.map(|v| BigRational::from_integer(v.into())))
    }

    pub fn one(d: u64) -> Self {
        QuatElement::from_ints(d, [1, 0, 0, 0])
    }

    pub fn zero(d: u64) -> Self {
        QuatElement::from_ints(d, [0, 0, 0, 0])
    }

    fn d_rat(&self) -> BigRational {
        BigRational::from_integer(self.d.into())
    }

    pub fn mul(&self, other: &QuatElement) -> Result<QuatElement> {
        same_algebra(self.d, other.d)?;
        Ok(QuatElement::new(self.d, mul_coords(&self.d_rat(), &self.c, &other.c)))
    }

    pub fn add(&self, other: &QuatElement) -> Result<QuatElement> {
        same_algebra(self.d, other.d)?;
        Ok(QuatElement::new(
            self.d,
            std::array::from_fn(|i| &self.c[i] + &other.c[i]),
        ))
    }

    pub fn sub(&self, other: &QuatElement) -> Result<QuatElement> {
        same_algebra(self.d, other.d)?;
        Ok(QuatElement::new(
            self.d,
            std::array::from_fn(|i| &self.c[i] - &other.c[i]),
        ))
    }

    pub fn scale(&self, k: &BigRational) -> QuatElement {
        QuatElement::new(self.d, self.c.clone().map(|v| v * k))
    }

    pub fn nr(&self) -> BigRational {
        nr_coords(&self.d_rat(), &self.c)
    }

    pub fn tr(&self) -> BigRational {
        tr_coords(&self.c)
    }

    /// `(x̄ − yφ) / Nr`.
    pub fn inverse(&self) -> Result<QuatElement> {
        let n = self.nr();
        if n.is_zero() {
            return Err(Error::NotInvertible);
        }
        let c = &self.c;
        Ok(QuatElement::new(
            self.d,
            [&c[0] - &c[1], -&c[1], -&c[2], -&c[3]].map(|v| v / &n),
        ))
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|v| v.is_integer())
    }

    pub fn to_order(&self) -> Result<OrderElement> {
        if !self.is_integral() {
            return Err(Error::NotInOrder(self.to_string()));
        }
        Ok(OrderElement::new(self.d, self.c.clone().map(|v| v.to_integer())))
    }

    pub fn x_part(&self) -> CycloPair<BigRational> {
        CycloPair::new(self.c[0].clone(), self.c[1].clone())
    }

    pub fn y_part(&self) -> CycloPair<BigRational> {
        CycloPair::new(self.c[2].clone(), self.c[3].clone())
    }
}

pub fn mul(xi: &QuatElement, eta: &QuatElement) -> Result<QuatElement> {
    xi.mul(eta)
}

pub fn nr_tr(xi: &QuatElement) -> (BigRational, BigRational) {
    (xi.nr(), xi.tr())
}

pub fn inverse(xi: &QuatElement) -> Result<QuatElement> {
    xi.inverse()
}

/// 2×2 matrix over Q(ω), rows first.
pub type OmegaMatrix = [[CycloPair<BigRational>; 2]; 2];

/// The embedding `x + yφ ↦ [[x, y], [d·ȳ, x̄]]`.
pub fn psi_matrix(xi: &QuatElement) -> OmegaMatrix {
    let x = xi.x_part();
    let y = xi.y_part();
    let d = BigRational::from_integer(xi.d.into());
    [[x.clone(), y.clone()], [y.conj().scale(&d), x.conj()]]
}

pub fn matrix_mul(l: &OmegaMatrix, r: &OmegaMatrix) -> OmegaMatrix {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| l[i][0].mul(&r[0][j]).add(&l[i][1].mul(&r[1][j])))
    })
}

pub fn matrix_det(m: &OmegaMatrix) -> CycloPair<BigRational> {
    m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]))
}

pub fn matrix_trace(m: &OmegaMatrix) -> CycloPair<BigRational> {
    m[0][0].add(&m[1][1])
}

/// The isomorphism H(3d) → H(d), `x + yφ₃d ↦ x + (1 − ω)yφ_d`.
pub fn embed_3d_to_d(xi: &QuatElement) -> Result<QuatElement> {
    if xi.d % 3 != 0 {
        return Err(Error::InvalidInput(format!(
            "embedding expects an element of H(3d), got d = {}",
            xi.d
        )));
    }
    let theta = CycloPair::new(BigRational::one(), -BigRational::one());
    let ty = theta.mul(&xi.y_part());
    Ok(QuatElement::new(
        xi.d / 3,
        [xi.c[0].clone(), xi.c[1].clone(), ty.re, ty.om],
    ))
}

impl OrderElement {
    pub fn new(d: u64, c: [BigInt; 4]) -> Self {
        OrderElement { d, c }
    }

    pub fn from_ints(d: u64, c: [i64; 4]) -> Self {
        OrderElement::new(d, c.map(BigInt::from))
    }

    pub fn one(d: u64) -> Self {
        OrderElement::from_ints(d, [1, 0, 0, 0])
    }

    pub fn omega(d: u64) -> Self {
        OrderElement::from_ints(d, [0, 1, 0, 0])
    }

    pub fn phi(d: u64) -> Self {
        OrderElement::from_ints(d, [0, 0, 1, 0])
    }

    /// `x + yφ` from two Eisenstein integers.
    pub fn from_parts(d: u64, x: &EisensteinInt, y: &EisensteinInt) -> Self {
        OrderElement::new(d, [x.a, x.b, y.a, y.b].map(BigInt::from))
    }

    /// The four basis elements 1, ω, φ, ωφ.
    pub fn basis(d: u64) -> [OrderElement; 4] {
        [
            OrderElement::from_ints(d, [1, 0, 0, 0]),
            OrderElement::from_ints(d, [0, 1, 0, 0]),
            OrderElement::from_ints(d, [0, 0, 1, 0]),
            OrderElement::from_ints(d, [0, 0, 0, 1]),
        ]
    }

    fn d_int(&self) -> BigInt {
        BigInt::from(self.d)
    }

    pub fn mul(&self, other: &OrderElement) -> Result<OrderElement> {
        same_algebra(self.d, other.d)?;
        Ok(OrderElement::new(self.d, mul_coords(&self.d_int(), &self.c, &other.c)))
    }

    pub fn add(&self, other: &OrderElement) -> Result<OrderElement> {
        same_algebra(self.d, other.d)?;
        Ok(OrderElement::new(
            self.d,
            std::array::from_fn(|i| &self.c[i] + &other.c[i]),
        ))
    }

    pub fn sub(&self, other: &OrderElement) -> Result<OrderElement> {
        same_algebra(self.d, other.d)?;
        Ok(OrderElement::new(
            self.d,
            std::array::from_fn(|i| &self.c[i] - &other.c[i]),
        ))
    }

    pub fn neg(&self) -> OrderElement {
        OrderElement::new(self.d, self.c.clone().map(|v| -v))
    }

    pub fn scale(&self, k: &BigInt) -> OrderElement {
        OrderElement::new(self.d, self.c.clone().map(|v| v * k))
    }

    /// Exact division of every coordinate by `k`, if possible.
    pub fn div_exact(&self, k: &BigInt) -> Option<OrderElement> {
        if k.is_zero() || self.c.iter().any(|v| !v.is_multiple_of(k)) {
            return None;
        }
        Some(OrderElement::new(self.d, self.c.clone().map(|v| v / k)))
    }

    pub fn pow(&self, e: u32) -> Result<OrderElement> {
        let mut acc = OrderElement::one(self.d);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn nr(&self) -> BigInt {
        nr_coords(&self.d_int(), &self.c)
    }

    pub fn tr(&self) -> BigInt {
        tr_coords(&self.c)
    }

    /// O^× is exactly the set of elements of reduced norm ±1.
    pub fn is_unit(&self) -> bool {
        self.nr().abs().is_one()
    }

    /// Inverse inside O; only units have one.
    pub fn unit_inverse(&self) -> Result<OrderElement> {
        if !self.is_unit() {
            return Err(Error::NotInvertible);
        }
        self.to_quat().inverse()?.to_order()
    }

    pub fn is_one(&self) -> bool {
        *self == OrderElement::one(self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|v| v.is_zero())
    }

    pub fn to_quat(&self) -> QuatElement {
        QuatElement::new(self.d, self.c.clone().map(BigRational::from_integer))
    }

    /// `self · ξ · self⁻¹` in H(d).
    pub fn conjugate(&self, xi: &OrderElement) -> Result<QuatElement> {
        let w = self.to_quat();
        w.mul(&xi.to_quat())?.mul(&w.inverse()?)
    }

    pub fn x_part(&self) -> CycloPair<BigInt> {
        CycloPair::new(self.c[0].clone(), self.c[1].clone())
    }

    pub fn y_part(&self) -> CycloPair<BigInt> {
        CycloPair::new(self.c[2].clone(), self.c[3].clone())
    }
}

impl fmt::Display for QuatElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, e] = &self.c;
        write!(f, "[{a}, {b}, {c}, {e}] in H({})", self.d)
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coef, unit) in self.c.iter().zip(["", "ω", "φ", "ωφ"]) {
            if coef.is_zero() {
                continue;
            }
            let mag = coef.abs();
            let sign = match (first, coef.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            first = false;
            if mag.is_one() && !unit.is_empty() {
                write!(f, "{sign}{unit}")?;
            } else {
                write!(f, "{sign}{mag}{unit}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Metadata: the discriminant of H(d). With d_H the product of the primes
/// `p ≡ 2 (mod 3)` dividing `d` to an odd power, this is `d_H` when
/// `d_H ≡ 1 (mod 3)` and `3·d_H` otherwise.
pub fn algebra_discriminant(d: u64) -> Result<u128> {
    let d_h: u128 = factor::factorize(d as u128)?
        .into_iter()
        .filter(|&(p, e)| p % 3 == 2 && e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    Ok(if d_h % 3 == 1 { d_h } else { 3 * d_h })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(d: u64, c: [i64; 4]) -> QuatElement {
        QuatElement::from_ints(d, c)
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    /// w5 = 5x + ȳφ and w8 = 8y − xφ for x = 1 + 5ω, y = 1 − 3ω.
    fn w5_w8() -> (QuatElement, QuatElement) {
        let x = EisensteinInt::new(1, 5);
        let y = EisensteinInt::new(1, -3);
        let ybar = y.conj().unwrap();
        let w5 = q(40, [5 * x.a as i64, 5 * x.b as i64, ybar.a as i64, ybar.b as i64]);
        let w8 = q(40, [8 * y.a as i64, 8 * y.b as i64, -x.a as i64, -x.b as i64]);
        (w5, w8)
    }

    #[test]
    fn worked_example_d40() {
        let (w5, w8) = w5_w8();
        assert_eq!(w5.nr(), rat(5));
        assert_eq!(w8.nr(), rat(-8));
        assert_eq!(w8.mul(&w5).unwrap(), q(40, [0, 0, -1, 0]));
        let w3 = q(40, [1, 2, 0, 0]);
        assert_eq!(w3.mul(&w3).unwrap(), q(40, [-3, 0, 0, 0]));
        assert_eq!(w5.inverse().unwrap().mul(&w5).unwrap(), QuatElement::one(40));
    }

    #[test]
    fn norm_trace_examples() {
        let omega = q(7, [0, 1, 0, 0]);
        assert_eq!(nr_tr(&omega), (rat(1), rat(-1)));
        assert_eq!(QuatElement::one(3).mul(&omega.clone()).err(), Some(Error::AlgebraMismatch { left: 3, right: 7 }));
    }

    #[test]
    fn inverse_examples() {
        let d = 11;
        let phi = q(d, [0, 0, 1, 0]);
        let inv = phi.inverse().unwrap();
        assert_eq!(inv, phi.scale(&BigRational::new(1.into(), 11.into())));
        assert_eq!(phi.mul(&inv).unwrap(), QuatElement::one(d));
        let omega = q(d, [0, 1, 0, 0]);
        assert_eq!(omega.inverse().unwrap(), q(d, [-1, -1, 0, 0]));
        // 1 + φ in H(1) has norm 0
        assert_eq!(q(1, [1, 0, 1, 0]).inverse(), Err(Error::NotInvertible));
    }

    #[test]
    fn psi_examples() {
        let one = psi_matrix(&QuatElement::one(5));
        let zero = CycloPair::new(rat(0), rat(0));
        let unit = CycloPair::new(rat(1), rat(0));
        assert_eq!(one, [[unit.clone(), zero.clone()], [zero.clone(), unit.clone()]]);
        let phi = psi_matrix(&q(5, [0, 0, 1, 0]));
        assert_eq!(phi, [[zero.clone(), unit], [CycloPair::new(rat(5), rat(0)), zero]]);
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed_3d_to_d(&QuatElement::one(21)).unwrap(), QuatElement::one(7));
        let image = embed_3d_to_d(&q(21, [0, 0, 1, 0])).unwrap();
        assert_eq!(image, q(7, [0, 0, 1, -1]));
        assert_eq!(image.nr(), rat(-21));
        assert!(embed_3d_to_d(&QuatElement::one(7)).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(OrderElement::from_ints(9, [3, 7, 0, 2]).to_string(), "3 + 7ω + 2ωφ");
        assert_eq!(OrderElement::from_ints(9, [-1, -1, 0, 0]).to_string(), "-1 - ω");
        assert_eq!(OrderElement::from_ints(9, [0, 0, -1, 0]).to_string(), "-φ");
        assert_eq!(OrderElement::from_ints(9, [0, 0, 0, 0]).to_string(), "0");
    }

    #[test]
    fn discriminant_metadata() {
        assert_eq!(algebra_discriminant(40).unwrap(), 10);
        assert_eq!(algebra_discriminant(1).unwrap(), 1);
        assert_eq!(algebra_discriminant(7).unwrap(), 1);
        assert_eq!(algebra_discriminant(2).unwrap(), 6);
        assert_eq!(algebra_discriminant(50).unwrap(), 6);
    }

    fn coords() -> impl Strategy<Value = [i64; 4]> {
        prop::array::uniform4(-30i64..30)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative_and_psi_is_a_homomorphism(
            d in 1u64..200, a in coords(), b in coords()
        ) {
            let (x, y) = (q(d, a), q(d, b));
            let xy = x.mul(&y).unwrap();
            prop_assert_eq!(xy.nr(), x.nr() * y.nr());
            let (px, py, pxy) = (psi_matrix(&x), psi_matrix(&y), psi_matrix(&xy));
            prop_assert_eq!(matrix_mul(&px, &py), pxy);
            prop_assert_eq!(matrix_det(&px), CycloPair::new(x.nr(), rat(0)));
            prop_assert_eq!(matrix_trace(&px), CycloPair::new(x.tr(), rat(0)));
        }

        #[test]
        fn cayley_hamilton(d in 1u64..200, a in coords()) {
            let x = q(d, a);
            let lhs = x.mul(&x).unwrap()
                .sub(&x.scale(&x.tr())).unwrap()
                .add(&QuatElement::one(d).scale(&x.nr())).unwrap();
            prop_assert_eq!(lhs, QuatElement::zero(d));
        }

        #[test]
        fn inverse_is_two_sided(d in 1u64..200, a in coords()) {
            let x = q(d, a);
            prop_assume!(!x.nr().is_zero());
            let inv = x.inverse().unwrap();
            prop_assert_eq!(x.mul(&inv).unwrap(), QuatElement::one(d));
            prop_assert_eq!(inv.mul(&x).unwrap(), QuatElement::one(d));
        }

        #[test]
        fn embedding_is_multiplicative(d in 1u64..70, a in coords(), b in coords()) {
            let (x, y) = (q(3 * d, a), q(3 * d, b));
            let fx = embed_3d_to_d(&x).unwrap();
            let fy = embed_3d_to_d(&y).unwrap();
            prop_assert_eq!(embed_3d_to_d(&x.mul(&y).unwrap()).unwrap(), fx.mul(&fy).unwrap());
            prop_assert_eq!(fx.nr(), x.nr());
            prop_assert!(fx.is_integral());
        }

        #[test]
        fn order_and_units_are_closed(d in 1u64..50, a in coords(), b in coords()) {
            let (x, y) = (OrderElement::from_ints(d, a), OrderElement::from_ints(d, b));
            let p = x.mul(&y).unwrap();
            prop_assert_eq!(p.to_quat(), x.to_quat().mul(&y.to_quat()).unwrap());
            prop_assert_eq!(p.nr(), x.nr() * y.nr());
            if x.is_unit() {
                let inv = x.unit_inverse().unwrap();
                prop_assert!(inv.is_unit());
                prop_assert!(x.mul(&inv).unwrap().is_one());
            }
        }
    }

    #[test]
    fn small_units_are_closed_under_products() {
        let d = 40;
        let mut units = Vec::new();
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in -1i64..=1 {
                    for e in -1i64..=1 {
                        let x = OrderElement::from_ints(d, [a, b, c, e]);
                        if x.is_unit() {
                            units.push(x);
                        }
                    }
                }
            }
        }
        assert!(units.iter().any(|u| u.nr() == BigInt::from(-1)));
        for u in &units {
            for v in &units {
                assert!(u.mul(v).unwrap().is_unit());
            }
            assert!(u.unit_inverse().unwrap().is_unit());
        }
    }
}
