//! Exact replay of the hand proof behind the closed-form three-point bound.
//!
//! Starting from the degree-3, `i = 1` diagonal constraint at `β = -α`, the
//! replay groups variables into `X = (x_1+x_2)/3`, `Y = x_3+x_5`,
//! `Z = x_4+x_6`, reads off `A X - p Y - q Z >= 0` up to a positive factor,
//! trades the larger of `p, q` for the smaller, and combines with
//! `Y + Z >= X² - X` to get `X <= 1 + A / min(p, q)`. The resulting objective
//! bound `2 + A / min(p, q)` is compared with [`okuda_yu_bound`] and an
//! explicit point attaining it is checked against the minimal instance.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::triangle::{ConstraintTag, TriangleLpInstance};
use crate::bounds::{okuda_yu_bound, Branch};
use crate::exact::{rat, serde_exact, Rational, RationalExt};
use crate::threepoint::{w_det, Point6};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReplay {
    pub n: usize,
    #[serde(with = "serde_exact")]
    pub alpha: Rational,
    pub holds: bool,
    /// Which term of the closed form's `max` the case analysis selects.
    pub case: Branch,
    /// Largest admissible `X`.
    #[serde(with = "serde_exact")]
    pub x_max: Rational,
    /// `1 + x_max`, the certified maximum of `1 + (x_1+x_2)/3`.
    #[serde(with = "serde_exact")]
    pub objective_max: Rational,
    #[serde(with = "serde_exact")]
    pub closed_form: Rational,
    #[serde(with = "serde_exact::array")]
    pub attaining_point: Point6,
    pub steps: Vec<ProofStep>,
}

struct Transcript(Vec<ProofStep>);

impl Transcript {
    fn check(&mut self, name: &str, ok: bool, detail: String) -> bool {
        self.0.push(ProofStep {
            name: name.to_string(),
            ok,
            detail,
        });
        ok
    }
}

fn linear_form(constant: &Rational, coeffs: &Point6) -> String {
    let mut out = constant.to_exact_string();
    for (i, c) in coeffs.iter().enumerate() {
        let sign = if c.is_negative() { '-' } else { '+' };
        out += &format!(" {sign} {} x{}", c.abs().to_exact_string(), i + 1);
    }
    out
}

/// Replays the proof at `(n, α)`. Returns an error when neither case
/// condition `p >= q > 0` nor `q >= p > 0` holds (no claim is made there).
pub fn verify_proposition_33(n: usize, alpha: &Rational) -> Result<ProofReplay> {
    if n < 3 || !alpha.is_positive() || alpha >= &Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "need n >= 3 and 0 < alpha < 1, got n = {n}, alpha = {}",
            alpha.to_exact_string()
        )));
    }
    let one = Rational::one();
    let a = alpha;
    let a2 = a * a;
    let nm2 = rat(n as i64 - 2, 1);
    let big_a = &nm2 * num_traits::pow(&one - &a2, 3) / a;
    let p = num_traits::pow(&one - a, 3) * (-(&nm2 * &a2) + rat(6, 1) * a + rat(3, 1));
    let q = num_traits::pow(&one + a, 3) * (&nm2 * &a2 + rat(6, 1) * a - rat(3, 1));

    let case = if p >= q && q.is_positive() {
        Branch::MinusCube
    } else if q >= p && p.is_positive() {
        Branch::PlusCube
    } else {
        return Err(Error::InvalidArgument(format!(
            "neither case condition holds at n = {n}, alpha = {}: p = {}, q = {}",
            a.to_exact_string(),
            p.to_exact_string(),
            q.to_exact_string()
        )));
    };
    let case = if p == q { Branch::Both } else { case };

    let mut t = Transcript(Vec::new());
    let instance = TriangleLpInstance::minimal(n, alpha.clone())?;
    let form = &instance
        .find(ConstraintTag::ThreePoint { l: 3, i: 1 })
        .expect("minimal instance carries the degree-3 row")
        .form;
    let c = &form.coeffs;

    t.check(
        "extract",
        form.constant.is_zero(),
        format!("(S_3)_11(x; a, -a) = {}", linear_form(&form.constant, c)),
    );
    t.check(
        "group",
        c[0] == c[1] && c[2] == c[4] && c[3] == c[5],
        "coefficients pair up as x1=x2, x3=x5, x4=x6, giving X = (x1+x2)/3, Y = x3+x5, Z = x4+x6".into(),
    );

    // 3 c1 X + c3 Y + c4 Z >= 0 must equal factor * (A X - p Y - q Z)
    let factor = rat(3, 1) * &c[0] / &big_a;
    let matches = factor.is_positive() && -&c[2] == &factor * &p && -&c[3] == &factor * &q;
    t.check(
        "scale",
        matches,
        format!(
            "constraint = {} * (A X - p Y - q Z) with A = {}, p = {}, q = {}",
            factor.to_exact_string(),
            big_a.to_exact_string(),
            p.to_exact_string(),
            q.to_exact_string()
        ),
    );

    let m = p.clone().min(q.clone());
    t.check(
        "case",
        m.is_positive(),
        match case {
            Branch::MinusCube => "p >= q > 0: replace p Y by q Y".to_string(),
            Branch::PlusCube => "q >= p > 0: replace q Z by p Z".to_string(),
            Branch::Both => "p = q > 0".to_string(),
        } + &format!(", giving A X - {} (Y + Z) >= 0", m.to_exact_string()),
    );

    let x_max = &one + &big_a / &m;
    t.check(
        "combine",
        true,
        format!(
            "with Y + Z >= X(X-1): X (A - {} (X - 1)) >= 0, so X <= {}",
            m.to_exact_string(),
            x_max.to_exact_string()
        ),
    );

    let objective_max = &one + &x_max;
    let closed = okuda_yu_bound(n, alpha)?;
    let closed_form = closed.value.clone().unwrap_or_else(Rational::zero);
    let agrees = closed.applicable && closed_form == objective_max;
    t.check(
        "closed form",
        agrees,
        format!(
            "1 + X <= {} ; closed form 2 + (n-2)/a * max{{...}} = {}",
            objective_max.to_exact_string(),
            if closed.applicable {
                closed_form.to_exact_string()
            } else {
                "not applicable".into()
            }
        ),
    );

    // Attaining point: X = x_max, all of X(X-1) in the cheaper group.
    let half = &x_max * rat(3, 2);
    let tail = &x_max * (&x_max - &one);
    let zero = Rational::zero;
    let attaining_point: Point6 = if p <= q {
        [half.clone(), half, tail, zero(), zero(), zero()]
    } else {
        [half.clone(), half, zero(), tail, zero(), zero()]
    };
    let tight = instance.contains(&attaining_point)
        && form.eval(&attaining_point).is_zero()
        && w_det(&attaining_point).is_zero();
    t.check(
        "attained",
        tight,
        format!(
            "x* = ({}) satisfies the minimal instance with both constraints tight",
            attaining_point
                .iter()
                .map(RationalExt::to_exact_string)
                .collect::<Vec<_>>()
                .join(", ")
        ),
    );

    let holds = t.0.iter().all(|s| s.ok);
    Ok(ProofReplay {
        n,
        alpha: alpha.clone(),
        holds,
        case,
        x_max,
        objective_max,
        closed_form,
        attaining_point,
        steps: t.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replays_known_cases() {
        let r = verify_proposition_33(23, &rat(1, 3)).unwrap();
        assert!(r.holds, "{:#?}", r.steps);
        assert_eq!(r.objective_max, rat(58, 1));
        assert_eq!(r.x_max, rat(57, 1));
        assert_eq!(r.case, Branch::PlusCube);

        let r = verify_proposition_33(71, &rat(1, 5)).unwrap();
        assert!(r.holds);
        assert_eq!(r.objective_max, rat(416, 1));

        let r = verify_proposition_33(11, &rat(1, 2)).unwrap();
        assert!(r.holds);
        assert_eq!(r.objective_max, rat(91, 5));
    }

    #[test]
    fn first_case_is_reachable() {
        // small n, small alpha: (n-2)α²+6α-3 just above 0 makes q tiny
        let r = verify_proposition_33(26, &rat(26, 100)).unwrap();
        assert!(r.holds);
        assert_eq!(r.case, Branch::MinusCube);
    }

    #[test]
    fn outside_cases_is_rejected() {
        assert!(verify_proposition_33(26, &rat(1, 4)).is_err());
        assert!(verify_proposition_33(100, &rat(1, 3)).is_err());
        assert!(verify_proposition_33(2, &rat(1, 3)).is_err());
        assert!(verify_proposition_33(5, &rat(1, 1)).is_err());
    }
}
