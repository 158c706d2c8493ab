//! JSON and CSV renderings. Every integer is written as a decimal string so
//! that consumers limited to 53-bit numbers do not truncate it.

use serde_json::{json, Value};

use crate::atkin_lehner::AtkinLehnerElement;
use crate::bezout::BezoutCertificate;
use crate::classify::{ClassReport, ConjectureStatus, GMembership, GWitness, PellCriterion, ThirdCaseStatus};
use crate::eisenstein::{EisensteinInt, LoeschianClass};
use crate::order3::{Conjugacy, Order3Element};
use crate::qforms::PellSolution;
use crate::quaternion::OrderElement;

fn s(v: impl ToString) -> Value {
    Value::String(v.to_string())
}

pub fn eisenstein(x: &EisensteinInt) -> Value {
    json!({ "a": s(x.a), "b": s(x.b) })
}

pub fn order_element(e: &OrderElement) -> Value {
    json!({ "d": s(e.d), "coords": e.c.iter().map(s).collect::<Vec<_>>() })
}

pub fn order3(xi: &Order3Element) -> Value {
    json!({
        "elem": order_element(&xi.elem),
        "d_prime_inv": s(xi.d_prime_inv),
        "d_dprime_inv": s(xi.d_dprime_inv),
        "case_tag": xi.case.to_string(),
    })
}

pub fn certificate(c: &BezoutCertificate) -> Value {
    json!({
        "d_prime": s(c.d_prime),
        "d_dprime": s(c.d_dprime),
        "swapped": c.swapped,
        "epsilon": s(c.epsilon),
        "x": eisenstein(&c.x),
        "y": eisenstein(&c.y),
        "u": s(c.u),
        "v": s(c.v),
    })
}

pub fn loeschian(n: u128, class: &LoeschianClass, rep: Option<&EisensteinInt>) -> Value {
    match class {
        LoeschianClass::Loeschian(f) => json!({
            "n": s(n),
            "loeschian": true,
            "three_exp": s(f.three_exp),
            "split_part": f.split_part.iter().map(|(p, e)| json!({ "prime": s(p), "exponent": s(e) })).collect::<Vec<_>>(),
            "inert_root": s(f.inert_root),
            "representation": rep.map(eisenstein),
        }),
        LoeschianClass::NotLoeschian { prime, exponent } => json!({
            "n": s(n),
            "loeschian": false,
            "obstruction": { "prime": s(prime), "exponent": s(exponent) },
        }),
    }
}

pub fn atkin_lehner(w: &AtkinLehnerElement, normalizes: bool) -> Value {
    json!({
        "d": s(w.d),
        "d_prime": s(w.d_prime),
        "w": order_element(&w.w),
        "q": order_element(&w.q),
        "epsilon": s(w.epsilon),
        "normalizes": normalizes,
    })
}

pub fn conjugacy(c: &Conjugacy) -> Value {
    match c {
        Conjugacy::Conjugate(w) => json!({ "conjugate": true, "alpha": order_element(&w.alpha) }),
        Conjugacy::NotConjugate => json!({ "conjugate": false }),
    }
}

pub fn class_report(r: &ClassReport) -> Value {
    let status = match &r.third_case_status {
        ThirdCaseStatus::Realized { witness } => json!({ "status": "Realized", "witness": order3(witness) }),
        ThirdCaseStatus::NotRealized => json!({ "status": "NotRealized" }),
        ThirdCaseStatus::Unknown { bound } => json!({ "status": "Unknown", "bound": s(bound) }),
    };
    json!({
        "d": s(r.d),
        "r": s(r.r),
        "case": r.case.to_string(),
        "C_d": r.c_d.map(s),
        "C_d_subgroups": r.c_d_subgroups.map(s),
        "representatives": r.representatives.iter().map(|rep| json!({
            "element": order3(&rep.element),
            "star": rep.star,
        })).collect::<Vec<_>>(),
        "third_case_status": status,
    })
}

pub fn status_label(r: &ClassReport) -> &'static str {
    match r.third_case_status {
        ThirdCaseStatus::Realized { .. } => "Realized",
        ThirdCaseStatus::NotRealized => "NotRealized",
        ThirdCaseStatus::Unknown { .. } => "Unknown",
    }
}

pub const CLASS_CSV_HEADER: &str = "d,r,case,C_d,status";

pub fn class_report_csv(r: &ClassReport) -> String {
    format!(
        "{},{},{},{},{}",
        r.d,
        r.r,
        r.case,
        r.c_d.map_or(String::new(), |c| c.to_string()),
        status_label(r)
    )
}

pub fn conjecture_status(st: &ConjectureStatus) -> Value {
    json!({
        "d_star": s(st.d_star),
        "verified": st.verified,
        "witness": st.witness.map(|(u, v)| json!({ "u": s(u), "v": s(v) })),
        "method": st.method.to_string(),
        "bound": s(st.bound),
    })
}

pub const CONJECTURE_CSV_HEADER: &str = "d_star,verified,u,v,method";

pub fn conjecture_status_csv(st: &ConjectureStatus) -> String {
    let (u, v) = st
        .witness
        .map_or((String::new(), String::new()), |(u, v)| (u.to_string(), v.to_string()));
    format!("{},{},{},{},{}", st.d_star, st.verified, u, v, st.method)
}

pub fn pell(sol: &PellSolution) -> Value {
    json!({ "n": s(sol.n), "x0": s(&sol.x0), "y0": s(&sol.y0) })
}

pub fn pell_criterion(d: u64, c: &PellCriterion) -> Value {
    match c {
        PellCriterion::Holds(sol) => json!({ "d": s(d), "criterion": "True", "solution": pell(sol) }),
        PellCriterion::Inapplicable => json!({ "d": s(d), "criterion": "Inapplicable" }),
    }
}

pub fn g_membership(d: u64, g: &GMembership) -> Value {
    match g {
        GMembership::InG(w) => {
            let witness = match w {
                GWitness::NotDivisibleByNine => json!({ "route": "not-divisible-by-9" }),
                GWitness::Loeschian(x) => json!({ "route": "loeschian", "representation": eisenstein(x) }),
                GWitness::ThreePower { k, d_star } => {
                    json!({ "route": "three-power", "k": s(k), "d_star": s(d_star) })
                }
                GWitness::Pell(sol) => json!({ "route": "pell", "solution": pell(sol) }),
                GWitness::Lift { from } => json!({ "route": "lift", "from": s(from) }),
                GWitness::Direct(c) => json!({ "route": "direct", "certificate": certificate(c) }),
            };
            json!({ "d": s(d), "membership": "InG", "witness": witness })
        }
        GMembership::Unknown { bound } => json!({ "d": s(d), "membership": "Unknown", "bound": s(bound) }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify;

    #[test]
    fn integers_are_strings() {
        let c = crate::bezout::solve(3, 5, crate::bezout::Mode::Any, 100).unwrap();
        let v = certificate(&c);
        assert_eq!(v["u"], json!("7"));
        assert_eq!(v["v"], json!("4"));
        assert_eq!(v["epsilon"], json!("1"));
        assert_eq!(v["swapped"], json!(false));
    }

    #[test]
    fn class_report_shape() {
        let r = classify::count_classes(40, 1000).unwrap();
        let v = class_report(&r);
        assert_eq!(v["C_d"], json!("4"));
        assert_eq!(v["case"], json!("A"));
        assert_eq!(v["representatives"].as_array().unwrap().len(), 4);
        assert_eq!(class_report_csv(&r), "40,2,A,4,NotRealized");
    }
}
