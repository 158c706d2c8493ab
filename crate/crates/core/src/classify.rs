//! Conjugacy-class counts `C_d` of order-3 elements in O, with explicit
//! representatives, plus the search harnesses for the `9 | d` case.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::atkin_lehner::AtkinLehnerElement;
use crate::bezout::{self, BezoutCertificate, Mode};
use crate::eisenstein::{self, EisensteinInt, LoeschianSieve};
use crate::error::{Error, Result};
use crate::factor;
use crate::order3::{self, CaseTag, Order3Element};
use crate::qforms::{self, PellSolution};

pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassCase {
    /// `3 ∤ d`.
    A,
    /// `9 | d`.
    B,
    /// `d = 3d̃` with `d̃ ≡ 1 (mod 3)`.
    CI,
    /// `d = 3d̃` with `d̃ ≡ 2 (mod 3)`.
    CII,
}

impl fmt::Display for ClassCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassCase::A => "A",
            ClassCase::B => "B",
            ClassCase::CI => "C_i",
            ClassCase::CII => "C_ii",
        })
    }
}

/// Case and number of distinct prime factors of `d`.
pub fn classify_case(d: u64) -> Result<(ClassCase, u32)> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    let f = factor::factorize(d as u128)?;
    let r = f.len() as u32;
    let v3 = f.iter().find(|&&(p, _)| p == 3).map_or(0, |&(_, e)| e);
    let case = match v3 {
        0 => ClassCase::A,
        1 if (d / 3) % 3 == 1 => ClassCase::CI,
        1 => ClassCase::CII,
        _ => ClassCase::B,
    };
    Ok((case, r))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThirdCaseStatus {
    Realized { witness: Order3Element },
    NotRealized,
    Unknown { bound: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    pub element: Order3Element,
    /// True for the `ξ*` member of a third-stratum pair.
    pub star: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub d: u64,
    pub r: u32,
    pub case: ClassCase,
    /// `None` while the third stratum is undecided.
    pub c_d: Option<u64>,
    pub c_d_subgroups: Option<u64>,
    pub representatives: Vec<Representative>,
    pub third_case_status: ThirdCaseStatus,
}

/// The closed-form count; case B needs to know whether the third stratum
/// is realized.
pub fn formula_count(case: ClassCase, r: u32, third_realized: bool) -> u64 {
    let base = 1u64 << r;
    match case {
        ClassCase::A | ClassCase::CI => base,
        ClassCase::CII => 2 * base,
        ClassCase::B if third_realized => 3 * base,
        ClassCase::B => base,
    }
}

pub fn subgroup_count(d: u64, c_d: u64) -> u64 {
    if d == 1 {
        1
    } else {
        c_d / 2
    }
}

fn hall_pairs(n: u64) -> Result<Vec<(u64, u64)>> {
    Ok(factor::hall_divisors(n as u128)?
        .into_iter()
        .map(|e| (e as u64, n / e as u64))
        .collect())
}

fn integer_sqrt_exact(n: u64) -> Option<u64> {
    let r = factor::isqrt(n as u128) as u64;
    (r * r == n).then_some(r)
}

/// Third-stratum element built from `x0² − d̃·y0² = 1` read as a
/// certificate for `(d̃, 1)` with `3 ∤ uv`.
fn pell_seed(d: u64) -> Option<Order3Element> {
    let PellCriterion::Holds(sol) = pell_criterion(d).ok()? else {
        return None;
    };
    let x0 = sol.x0.to_i128()?;
    let y0 = sol.y0.to_i128()?;
    let y = EisensteinInt::new(x0, 0).checked_mul(&EisensteinInt::new(y0, 0)).ok()?;
    // x1 = d̃·y0² and x1 + 1 = x0², so the invariants are (d̃, 1)
    let x1 = BigInt::from(x0.checked_mul(x0)?) - 1;
    order3::make(d, x1, y.a, y.b).ok()
}

/// One element per Hall pair `(d', d'')` of `d/3`, or `None` if some pair
/// stays out of reach within `bound`.
fn realize_third_stratum(d: u64, bound: u64) -> Result<Option<Vec<Order3Element>>> {
    let pairs = hall_pairs(d / 3)?;
    let mut found: BTreeMap<(u64, u64), Order3Element> = BTreeMap::new();
    for &(p, q) in &pairs {
        match order3::construct_with_invariants(d, p, q, bound) {
            Ok(xi) => {
                found.insert((p, q), xi);
            }
            Err(Error::Exhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if found.len() == pairs.len() {
        return Ok(Some(found.into_values().collect()));
    }
    let mut seeds: Vec<Order3Element> = found.values().cloned().collect();
    if d % 9 == 0 {
        if let Some(c) = integer_sqrt_exact(d / 9) {
            seeds.push(order3::square_family(c)?);
        }
    }
    seeds.extend(pell_seed(d));
    if seeds.is_empty() {
        return Ok(None);
    }
    // Atkin–Lehner conjugation and squaring move between the pairs
    let mut walls = Vec::new();
    for e in factor::hall_divisors(d as u128)? {
        match AtkinLehnerElement::build(d, e as u64, bound) {
            Ok(w) => walls.push(w),
            Err(Error::Exhausted { .. }) => {}
            Err(err) => return Err(err),
        }
    }
    let mut frontier = seeds;
    while let Some(xi) = frontier.pop() {
        let mut images = vec![xi.square()];
        for w in &walls {
            images.push(Order3Element::from_element(w.conjugate(&xi.elem)?)?);
        }
        images.push(xi);
        for img in images {
            if img.case == CaseTag::Third && !found.contains_key(&img.invariants()) {
                found.insert(img.invariants(), img.clone());
                frontier.push(img);
            }
        }
    }
    Ok((found.len() == pairs.len()).then(|| found.into_values().collect()))
}

pub fn count_classes(d: u64, bound: u64) -> Result<ClassReport> {
    let (case, r) = classify_case(d)?;
    let mut reps = Vec::new();
    for (p, q) in hall_pairs(d)? {
        reps.push(Representative {
            element: order3::construct_with_invariants(d, p, q, bound)?,
            star: false,
        });
    }
    let third = match case {
        ClassCase::A | ClassCase::CI => ThirdCaseStatus::NotRealized,
        ClassCase::CII | ClassCase::B => match realize_third_stratum(d, bound)? {
            Some(elems) => {
                let witness = elems[0].clone();
                for xi in elems {
                    let s = xi.star();
                    reps.push(Representative { element: xi, star: false });
                    reps.push(Representative { element: s, star: true });
                }
                ThirdCaseStatus::Realized { witness }
            }
            None => ThirdCaseStatus::Unknown { bound },
        },
    };
    reps.sort_by_key(|r| (r.element.d_prime_inv, r.element.d_dprime_inv, r.star));
    let c_d = match &third {
        ThirdCaseStatus::Unknown { .. } => None,
        status => {
            let found = reps.len() as u64;
            let expected = formula_count(case, r, matches!(status, ThirdCaseStatus::Realized { .. }));
            if found != expected {
                return Err(Error::FormulaMismatch { d, found, expected });
            }
            Some(found)
        }
    };
    Ok(ClassReport {
        d,
        r,
        case,
        c_d,
        c_d_subgroups: c_d.map(|c| subgroup_count(d, c)),
        representatives: reps,
        third_case_status: third,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    DirectSearch,
    Pell,
    Corollary,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::DirectSearch => "direct-search",
            Method::Pell => "pell",
            Method::Corollary => "corollary",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureStatus {
    pub d_star: u64,
    pub verified: bool,
    /// `(u, v)` with `u − 3d*·v = 1`, both Loeschian and `3 ∤ uv`.
    pub witness: Option<(u128, u128)>,
    pub method: Method,
    pub bound: u64,
}

pub fn verify_conjecture2(d_star: u64, bound: u64) -> Result<ConjectureStatus> {
    verify_conjecture2_with(&eisenstein::shared_sieve(), d_star, bound)
}

pub fn verify_conjecture2_with(sieve: &LoeschianSieve, d_star: u64, bound: u64) -> Result<ConjectureStatus> {
    if d_star % 3 != 1 {
        return Err(Error::InvalidInput(format!("d* = {d_star} is not ≡ 1 (mod 3)")));
    }
    let step = 3 * d_star as u128;
    let mut witness = None;
    for v in 1..=bound as u128 {
        if v % 3 == 0 || !sieve.contains(v)? {
            continue;
        }
        let u = step.checked_mul(v).ok_or(Error::Overflow("verify_conjecture2"))? + 1;
        if sieve.contains(u)? {
            witness = Some((u, v));
            break;
        }
    }
    Ok(ConjectureStatus {
        d_star,
        verified: witness.is_some(),
        witness,
        method: Method::DirectSearch,
        bound,
    })
}

/// Independent check of a conjecture witness.
pub fn check_conjecture2_witness(d_star: u64, u: u128, v: u128) -> Result<bool> {
    Ok(u == 3 * d_star as u128 * v + 1
        && u % 3 != 0
        && v % 3 != 0
        && eisenstein::is_loeschian(u)?
        && eisenstein::is_loeschian(v)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PellCriterion {
    /// The minimal solution has `3 ∤ y0`.
    Holds(PellSolution),
    Inapplicable,
}

pub fn pell_criterion(d: u64) -> Result<PellCriterion> {
    if d == 0 || d % 9 != 0 {
        return Err(Error::InvalidInput(format!("{d} is not divisible by 9")));
    }
    let n = (d / 3) as u128;
    if factor::is_square(n) {
        return Ok(PellCriterion::Inapplicable);
    }
    let sol = qforms::pell_min_solution(n)?;
    Ok(if sol.y0.is_multiple_of(&BigInt::from(3)) {
        PellCriterion::Inapplicable
    } else {
        PellCriterion::Holds(sol)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GWitness {
    NotDivisibleByNine,
    Loeschian(EisensteinInt),
    /// `d = 3^k·d*` with `d* ≡ 2 (mod 3)`.
    ThreePower { k: u32, d_star: u64 },
    Pell(PellSolution),
    /// Membership of `d/3`, which is divisible by 9.
    Lift { from: u64 },
    /// A Bézout certificate with `3 ∤ uv` for a Hall pair of `d/3`.
    Direct(BezoutCertificate),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GMembership {
    InG(GWitness),
    Unknown { bound: u64 },
}

pub fn g_membership(d: u64, bound: u64) -> Result<GMembership> {
    if d == 0 {
        return Err(Error::InvalidInput("d must be positive".into()));
    }
    if d % 9 != 0 {
        return Ok(GMembership::InG(GWitness::NotDivisibleByNine));
    }
    if let eisenstein::LoeschianClass::Loeschian(shape) = eisenstein::classify_loeschian(d as u128)? {
        return Ok(GMembership::InG(GWitness::Loeschian(eisenstein::represent_factored(&shape)?)));
    }
    let (mut k, mut rest) = (0u32, d);
    while rest % 3 == 0 {
        rest /= 3;
        k += 1;
    }
    if rest % 3 == 2 {
        return Ok(GMembership::InG(GWitness::ThreePower { k, d_star: rest }));
    }
    if let PellCriterion::Holds(sol) = pell_criterion(d)? {
        return Ok(GMembership::InG(GWitness::Pell(sol)));
    }
    if (d / 3) % 9 == 0 {
        if let GMembership::InG(_) = g_membership(d / 3, bound)? {
            return Ok(GMembership::InG(GWitness::Lift { from: d / 3 }));
        }
    }
    for (p, q) in hall_pairs(d / 3)? {
        match bezout::solve(p, q, Mode::NoThree, bound) {
            Ok(cert) => return Ok(GMembership::InG(GWitness::Direct(cert))),
            Err(Error::Exhausted { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(GMembership::Unknown { bound })
}

/// Parameters of a witness sweep over `d* ≡ 1 (mod 3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepConfig {
    pub dstar_min: u64,
    pub dstar_max: u64,
    pub jobs: usize,
    pub bound: u64,
    /// Resume file holding the last completed `d*`.
    pub checkpoint: Option<PathBuf>,
    /// Number of `d*` values handed out per round.
    pub chunk: usize,
}

impl SweepConfig {
    pub fn new(dstar_min: u64, dstar_max: u64) -> Self {
        SweepConfig {
            dstar_min,
            dstar_max,
            jobs: 1,
            bound: DEFAULT_SEARCH_BOUND,
            checkpoint: None,
            chunk: 20_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub checked: u64,
    pub verified: u64,
    pub unknown: Vec<u64>,
    pub resumed_after: Option<u64>,
    pub last_completed: Option<u64>,
}

pub fn read_checkpoint(path: &Path) -> Result<Option<u64>> {
    match fs::read_to_string(path) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidInput(format!("malformed checkpoint {}", path.display()))),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
        Err(e) => Err(Error::InvalidInput(format!("{}: {e}", path.display()))),
    }
}

fn write_checkpoint(path: &Path, last: u64) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let io = |e: std::io::Error| Error::InvalidInput(format!("{}: {e}", path.display()));
    fs::write(&tmp, format!("{last}\n")).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

/// Runs the sweep chunk by chunk, handing each chunk's statuses to
/// `on_chunk` in `d*` order and advancing the checkpoint after it returns.
pub fn sweep_conjecture2<F>(cfg: &SweepConfig, mut on_chunk: F) -> Result<SweepSummary>
where
    F: FnMut(&[ConjectureStatus]) -> Result<()>,
{
    if cfg.jobs == 0 || cfg.bound == 0 || cfg.chunk == 0 {
        return Err(Error::InvalidInput("jobs, bound and chunk must be positive".into()));
    }
    let mut summary = SweepSummary::default();
    let mut start = cfg.dstar_min;
    if let Some(path) = &cfg.checkpoint {
        if let Some(last) = read_checkpoint(path)? {
            summary.resumed_after = Some(last);
            start = start.max(last.saturating_add(1));
        }
    }
    // first value ≡ 1 (mod 3) at or after start
    let mut next = start + (3 - (start % 3 + 2) % 3) % 3;
    let sieve = eisenstein::shared_sieve();
    while next <= cfg.dstar_max {
        let values: Vec<u64> = (next..=cfg.dstar_max).step_by(3).take(cfg.chunk).collect();
        let per = values.len().div_ceil(cfg.jobs);
        let results: Vec<Result<Vec<ConjectureStatus>>> = std::thread::scope(|s| {
            let handles: Vec<_> = values
                .chunks(per)
                .map(|part| {
                    let sieve = &sieve;
                    s.spawn(move || {
                        part.iter()
                            .map(|&ds| verify_conjecture2_with(sieve, ds, cfg.bound))
                            .collect::<Result<Vec<_>>>()
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
        });
        let mut statuses = Vec::with_capacity(values.len());
        for r in results {
            statuses.extend(r?);
        }
        for st in &statuses {
            summary.checked += 1;
            if st.verified {
                summary.verified += 1;
            } else {
                summary.unknown.push(st.d_star);
            }
        }
        on_chunk(&statuses)?;
        let last = *values.last().expect("nonempty chunk");
        summary.last_completed = Some(last);
        if let Some(path) = &cfg.checkpoint {
            write_checkpoint(path, last)?;
        }
        next = match last.checked_add(3) {
            Some(n) => n,
            None => break,
        };
    }
    Ok(summary)
}
