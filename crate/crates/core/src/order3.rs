//! Elements of order 3 in O, their invariants `(d'_ξ, d''_ξ)`, the twist
//! `ξ* = φξ²φ⁻¹` and the conjugacy decision via intertwiner lattices.
//!
//! An order-3 element has coordinates `(x1, 2x1 + 1, x3, x4)` with
//! `3x1(x1 + 1) = d·N(x3 + x4ω)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bezout::{self, Mode};
use crate::eisenstein::{self, EisensteinInt};
use crate::error::{Error, Result};
use crate::qforms::{self, BinaryQF};
use crate::quaternion::OrderElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    /// `d'_ξ·d''_ξ = d`.
    Full,
    /// `d'_ξ·d''_ξ = d/3`.
    Third,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::Full => "full",
            CaseTag::Third => "third",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Order3Element {
    pub elem: OrderElement,
    pub d_prime_inv: u64,
    pub d_dprime_inv: u64,
    pub case: CaseTag,
}

fn gcd_with(x: &BigInt, d: u64) -> u64 {
    x.gcd(&BigInt::from(d))
        .to_u64()
        .expect("gcd with d fits in u64")
}

impl Order3Element {
    pub fn d(&self) -> u64 {
        self.elem.d
    }

    pub fn x1(&self) -> &BigInt {
        &self.elem.c[0]
    }

    /// `x3² − x3x4 + x4²`.
    pub fn y_norm(&self) -> BigInt {
        self.elem.y_part().norm()
    }

    pub fn invariants(&self) -> (u64, u64) {
        (self.d_prime_inv, self.d_dprime_inv)
    }

    /// Validates the defining identities and caches the invariants.
    pub fn from_element(elem: OrderElement) -> Result<Self> {
        let d = elem.d;
        if d == 0 {
            return Err(Error::InvalidInput("d must be positive".into()));
        }
        let [x1, x2, _, _] = &elem.c;
        if *x2 != BigInt::from(2) * x1 + 1 {
            return Err(Error::EquationViolated(format!("x2 = 2x1 + 1 fails for {elem}")));
        }
        let n = elem.y_part().norm();
        if BigInt::from(3) * x1 * (x1 + 1) != BigInt::from(d) * &n {
            return Err(Error::EquationViolated(format!(
                "3x1(x1 + 1) = d(x3² − x3x4 + x4²) fails for {elem} with d = {d}"
            )));
        }
        let sq = elem.mul(&elem)?;
        let one = OrderElement::one(d);
        if !sq.add(&elem)?.add(&one)?.is_zero() || !sq.mul(&elem)?.is_one() || elem.is_one() {
            return Err(Error::EquationViolated(format!("{elem} does not have order 3")));
        }
        let (dp, ddp) = (gcd_with(x1, d), gcd_with(&(x1 + 1), d));
        let case = if dp as u128 * ddp as u128 == d as u128 {
            CaseTag::Full
        } else {
            CaseTag::Third
        };
        let xi = Order3Element {
            elem,
            d_prime_inv: dp,
            d_dprime_inv: ddp,
            case,
        };
        debug_assert_eq!(xi.case == CaseTag::Full, xi.y_norm().is_multiple_of(&BigInt::from(3)));
        Ok(xi)
    }

    /// `ξ* = (x1, x2, x4 − x3, x4)`.
    pub fn star(&self) -> Order3Element {
        let [x1, x2, x3, x4] = self.elem.c.clone();
        Order3Element {
            elem: OrderElement::new(self.d(), [x1, x2, &x4 - x3, x4]),
            ..self.clone()
        }
    }

    /// `ξ² = −1 − ξ`; the invariants trade places.
    pub fn square(&self) -> Order3Element {
        let one = OrderElement::one(self.d());
        Order3Element {
            elem: one.add(&self.elem).expect("same algebra").neg(),
            d_prime_inv: self.d_dprime_inv,
            d_dprime_inv: self.d_prime_inv,
            case: self.case,
        }
    }

    /// `(x1, x2, x4, x3)`, always conjugate to `ξ`.
    pub fn swap_y(&self) -> Order3Element {
        let [x1, x2, x3, x4] = self.elem.c.clone();
        Order3Element {
            elem: OrderElement::new(self.d(), [x1, x2, x4, x3]),
            ..self.clone()
        }
    }
}

impl fmt::Display for Order3Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (d' = {}, d'' = {}, {})",
            self.elem, self.d_prime_inv, self.d_dprime_inv, self.case
        )
    }
}

pub fn make(d: u64, x1: impl Into<BigInt>, x3: impl Into<BigInt>, x4: impl Into<BigInt>) -> Result<Order3Element> {
    let x1 = x1.into();
    let x2 = BigInt::from(2) * &x1 + 1;
    Order3Element::from_element(OrderElement::new(d, [x1, x2, x3.into(), x4.into()]))
}

pub fn star(xi: &Order3Element) -> Order3Element {
    xi.star()
}

pub fn square(xi: &Order3Element) -> Order3Element {
    xi.square()
}

/// `3c² + (6c² + 1)ω + (c − 1)φ + 2cωφ` in O(9c²), invariants `(3c², 1)`.
pub fn square_family(c: u64) -> Result<Order3Element> {
    if c == 0 {
        return Err(Error::InvalidInput("c must be positive".into()));
    }
    let d = 9u64
        .checked_mul(c)
        .and_then(|v| v.checked_mul(c))
        .ok_or(Error::Overflow("square_family"))?;
    let c = BigInt::from(c);
    make(d, BigInt::from(3) * &c * &c, &c - 1, BigInt::from(2) * &c)
}

/// Order-3 elements with `−1 − x1_bound ≤ x1 ≤ x1_bound` (a range closed
/// under squaring): one `(x3, x4)` per unit orbit of the norm equation plus
/// its star partner, ordered by `x1`.
pub fn enumerate(d: u64, x1_bound: i64) -> Result<Vec<Order3Element>> {
    if x1_bound < 0 {
        return Err(Error::InvalidInput("x1_bound must be nonnegative".into()));
    }
    let sieve = eisenstein::shared_sieve();
    let mut out = Vec::new();
    for x1 in -(x1_bound as i128) - 1..=x1_bound as i128 {
        let t = 3 * x1 * (x1 + 1);
        if t % d as i128 != 0 {
            continue;
        }
        let k = (t / d as i128) as u128;
        if !sieve.contains(k)? {
            continue;
        }
        for y in eisenstein::orbit_representatives(k) {
            let xi = make(d, x1, y.a, y.b)?;
            let s = xi.star();
            let distinct = s.elem != xi.elem;
            out.push(xi);
            if distinct {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Integer solutions of `ηα = αξ`: a rank-2 lattice with the norm form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntertwinerLattice {
    pub xi: Order3Element,
    pub eta: Order3Element,
    pub basis: [OrderElement; 2],
    pub form: BinaryQF,
}

impl IntertwinerLattice {
    pub fn element(&self, k: &BigInt, l: &BigInt) -> OrderElement {
        self.basis[0]
            .scale(k)
            .add(&self.basis[1].scale(l))
            .expect("same algebra")
    }
}

type Mat = Vec<Vec<BigInt>>;

fn col_sub(m: &mut Mat, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

fn col_swap(m: &mut Mat, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Z-basis of `{a ∈ Z^n : M a = 0}` by unimodular column reduction.
fn integer_kernel(mut m: Mat) -> Vec<Vec<BigInt>> {
    let n = m[0].len();
    let mut u: Mat = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from((i == j) as i32)).collect())
        .collect();
    let mut pivot = 0;
    for i in 0..m.len() {
        if pivot == n {
            break;
        }
        loop {
            let best = (pivot..n)
                .filter(|&c| !m[i][c].is_zero())
                .min_by_key(|&c| m[i][c].abs());
            let Some(best) = best else { break };
            col_swap(&mut m, pivot, best);
            col_swap(&mut u, pivot, best);
            let mut done = true;
            for c in pivot + 1..n {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = &m[i][c] / &m[i][pivot];
                col_sub(&mut m, c, pivot, &q);
                col_sub(&mut u, c, pivot, &q);
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot += 1;
                break;
            }
        }
    }
    (pivot..n)
        .map(|c| (0..n).map(|r| u[r][c].clone()).collect())
        .collect()
}

/// Row Hermite normal form of two integer vectors.
fn hermite_pair(mut a: Vec<BigInt>, mut b: Vec<BigInt>) -> [Vec<BigInt>; 2] {
    let n = a.len();
    let sub = |x: &mut Vec<BigInt>, y: &[BigInt], q: &BigInt| {
        for (xi, yi) in x.iter_mut().zip(y) {
            *xi -= yi * q;
        }
    };
    let Some(j) = (0..n).find(|&j| !a[j].is_zero() || !b[j].is_zero()) else {
        return [a, b];
    };
    while !b[j].is_zero() {
        let q = a[j].div_floor(&b[j]);
        sub(&mut a, &b, &q);
        std::mem::swap(&mut a, &mut b);
    }
    if a[j].is_negative() {
        a.iter_mut().for_each(|v| *v = -&*v);
    }
    if let Some(k) = (j + 1..n).find(|&k| !b[k].is_zero()) {
        if b[k].is_negative() {
            b.iter_mut().for_each(|v| *v = -&*v);
        }
        let q = a[k].div_floor(&b[k]);
        sub(&mut a, &b, &q);
    }
    [a, b]
}

pub fn intertwiner(xi: &Order3Element, eta: &Order3Element) -> Result<IntertwinerLattice> {
    if xi.d() != eta.d() {
        return Err(Error::AlgebraMismatch {
            left: xi.d(),
            right: eta.d(),
        });
    }
    let d = xi.d();
    let basis = OrderElement::basis(d);
    let mut m: Mat = vec![Vec::with_capacity(4); 4];
    for e in &basis {
        let col = eta.elem.mul(e)?.sub(&e.mul(&xi.elem)?)?;
        for (r, v) in col.c.into_iter().enumerate() {
            m[r].push(v);
        }
    }
    let kernel = integer_kernel(m);
    if kernel.len() != 2 {
        return Err(Error::DegenerateIntertwiner { dim: kernel.len() });
    }
    let mut it = kernel.into_iter();
    let [b1, b2] = hermite_pair(it.next().unwrap(), it.next().unwrap());
    let to_elem = |v: Vec<BigInt>| OrderElement::new(d, <[BigInt; 4]>::try_from(v).expect("four coordinates"));
    let (b1, b2) = (to_elem(b1), to_elem(b2));
    let a = b1.nr();
    let c = b2.nr();
    let b = b1.add(&b2)?.nr() - &a - &c;
    let lattice = IntertwinerLattice {
        xi: xi.clone(),
        eta: eta.clone(),
        basis: [b1, b2],
        form: BinaryQF { a, b, c },
    };
    for beta in &lattice.basis {
        debug_assert_eq!(eta.elem.mul(beta)?, beta.mul(&xi.elem)?);
    }
    Ok(lattice)
}

/// A unit `α` with `ηα = αξ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyWitness {
    pub alpha: OrderElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Conjugacy {
    Conjugate(ConjugacyWitness),
    NotConjugate,
}

impl Conjugacy {
    pub fn is_conjugate(&self) -> bool {
        matches!(self, Conjugacy::Conjugate(_))
    }
}

/// Recomputes `ηα`, `αξ` and `Nr(α)` from scratch.
pub fn verify_witness(xi: &OrderElement, eta: &OrderElement, alpha: &OrderElement) -> bool {
    let lhs = eta.to_quat().mul(&alpha.to_quat());
    let rhs = alpha.to_quat().mul(&xi.to_quat());
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => l == r && alpha.nr().abs().is_one(),
        _ => false,
    }
}

pub fn conjugacy_witness(xi: &Order3Element, eta: &Order3Element) -> Result<Conjugacy> {
    if xi.d() != eta.d() {
        return Err(Error::AlgebraMismatch {
            left: xi.d(),
            right: eta.d(),
        });
    }
    if xi.invariants() != eta.invariants() {
        return Ok(Conjugacy::NotConjugate);
    }
    let lattice = intertwiner(xi, eta)?;
    let Some(rep) = qforms::represent_unit(&lattice.form)? else {
        return Ok(Conjugacy::NotConjugate);
    };
    let alpha = lattice.element(&rep.k, &rep.l);
    if !verify_witness(&xi.elem, &eta.elem, &alpha) {
        return Err(Error::EquationViolated(format!(
            "witness {alpha} fails to intertwine {} and {}",
            xi.elem, eta.elem
        )));
    }
    Ok(Conjugacy::Conjugate(ConjugacyWitness { alpha }))
}

/// Element with `x1 = p·u`, `x1 + 1 = q·v` and y-part `y`, where the
/// relation `p·u − q·v = −1` holds.
fn from_relation(d: u64, p: u64, u: u128, y: EisensteinInt) -> Result<Order3Element> {
    let x1 = BigInt::from(p) * BigInt::from(u);
    make(d, x1, y.a, y.b)
}

/// An order-3 element with the prescribed invariants, built from a Bézout
/// certificate for `(d', d'')`.
pub fn construct_with_invariants(d: u64, d_prime: u64, d_dprime: u64, bound: u64) -> Result<Order3Element> {
    if d_prime.gcd(&d_dprime) != 1 {
        return Err(Error::InvalidInput(format!("gcd({d_prime}, {d_dprime}) ≠ 1")));
    }
    let prod = d_prime as u128 * d_dprime as u128;
    let case = if prod == d as u128 {
        CaseTag::Full
    } else if 3 * prod == d as u128 {
        CaseTag::Third
    } else {
        return Err(Error::InvalidInput(format!(
            "d'd'' = {prod} is neither {d} nor {d}/3"
        )));
    };
    let mode = match case {
        CaseTag::Full => Mode::Any,
        CaseTag::Third => Mode::NoThree,
    };
    let cert = bezout::solve(d_prime, d_dprime, mode, bound)?.orient();
    let mut y = cert.x.checked_mul(&cert.y)?;
    if case == CaseTag::Full {
        y = y.checked_mul(&EisensteinInt::THETA)?;
    }
    let xi = if cert.epsilon == -1 {
        from_relation(d, d_prime, cert.u, y)?
    } else {
        // d''v − d'u = −1: build at (d'', d') and square
        let eta = from_relation(d, d_dprime, cert.v, y)?;
        if d_prime == d_dprime {
            eta
        } else {
            eta.square()
        }
    };
    if xi.invariants() != (d_prime, d_dprime) || xi.case != case {
        return Err(Error::EquationViolated(format!(
            "constructed {xi} misses invariants ({d_prime}, {d_dprime})"
        )));
    }
    Ok(xi)
}
