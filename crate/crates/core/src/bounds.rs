//! Closed-form upper bounds on `M_α(n)` and the per-`k` nonexistence
//! certificate for tight harmonic index 4 designs.
//!
//! Every value is an exact rational. Inapplicability (outside a bound's
//! window) is a normal result, not an error; violated preconditions such as
//! `n < 3` for the three-point bound are errors.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::serde_exact;
use crate::exact::{rat, Rational, RationalExt};
use crate::{Error, Exec, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    Gerzon,
    LemmensSeidel,
    OkudaYu,
    OkudaYuIntegerL,
    CorollaryK,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::Gerzon => "gerzon",
            BoundMethod::LemmensSeidel => "lemmens_seidel",
            BoundMethod::OkudaYu => "okuda_yu",
            BoundMethod::OkudaYuIntegerL => "okuda_yu_integer_l",
            BoundMethod::CorollaryK => "corollary_k",
        })
    }
}

/// Which term of the three-point bound's `max` is attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `(1-α)^3 / ((n-2)α² + 6α - 3)`
    MinusCube,
    /// `(1+α)^3 / (-(n-2)α² + 6α + 3)`
    PlusCube,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    #[serde(with = "serde_exact::option")]
    pub alpha: Option<Rational>,
    pub method: BoundMethod,
    pub applicable: bool,
    pub reason: String,
    /// Exact bound; `None` when not applicable.
    #[serde(with = "serde_exact::option")]
    pub value: Option<Rational>,
    /// `⌊value⌋`, the usable integer bound on a cardinality.
    pub floor_value: Option<i64>,
    pub branch: Option<Branch>,
    /// Quantity whose sign decided applicability, when there is one.
    #[serde(with = "serde_exact::option")]
    pub witness: Option<Rational>,
}

impl BoundReport {
    fn applicable(n: usize, alpha: Option<Rational>, method: BoundMethod, value: Rational) -> Self {
        let floor_value = i64::try_from(value.floor_int()).ok();
        Self {
            n,
            alpha,
            method,
            applicable: true,
            reason: "applicable".to_string(),
            value: Some(value),
            floor_value,
            branch: None,
            witness: None,
        }
    }

    fn inapplicable(
        n: usize,
        alpha: Option<Rational>,
        method: BoundMethod,
        reason: String,
        witness: Option<Rational>,
    ) -> Self {
        Self {
            n,
            alpha,
            method,
            applicable: false,
            reason,
            value: None,
            floor_value: None,
            branch: None,
            witness,
        }
    }
}

/// Gerzon's absolute bound `n(n+1)/2`.
pub fn gerzon_bound(n: usize) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let n_i = n as i64;
    Ok(BoundReport::applicable(
        n,
        None,
        BoundMethod::Gerzon,
        rat(n_i * (n_i + 1), 2),
    ))
}

/// Lemmens–Seidel relative bound `n(1-α²)/(1-nα²)`, valid when `1 - nα² > 0`.
pub fn lemmens_seidel_bound(n: usize, alpha: &Rational) -> Result<BoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    check_alpha(alpha, true)?;
    let one = Rational::one();
    let nr = rat(n as i64, 1);
    let a2 = alpha * alpha;
    let witness = &one - &nr * &a2;
    if !witness.is_positive() {
        return Ok(BoundReport::inapplicable(
            n,
            Some(alpha.clone()),
            BoundMethod::LemmensSeidel,
            format!("1 - n*alpha^2 = {} <= 0", witness.to_exact_string()),
            Some(witness),
        ));
    }
    let value = nr * (one - a2) / &witness;
    let mut report = BoundReport::applicable(n, Some(alpha.clone()), BoundMethod::LemmensSeidel, value);
    report.witness = Some(witness);
    Ok(report)
}

fn check_alpha(alpha: &Rational, allow_zero: bool) -> Result<()> {
    let ok = alpha < &Rational::one() && (alpha.is_positive() || (allow_zero && alpha.is_zero()));
    if !ok {
        let range = if allow_zero { "[0, 1)" } else { "(0, 1)" };
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in {range}, got {}",
            alpha.to_exact_string()
        )));
    }
    Ok(())
}

fn check_three_point_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "the three-point bound needs n >= 3, got {n}"
        )));
    }
    Ok(())
}

/// The two denominators `(n-2)α² + 6α - 3` and `-(n-2)α² + 6α + 3`.
/// Both positive is exactly the open window
/// `2 - (6α-3)/α² < n < 2 + (6α+3)/α²`.
pub fn window_denominators(n: usize, alpha: &Rational) -> (Rational, Rational) {
    let m = rat(n as i64 - 2, 1) * alpha * alpha;
    let six_a = rat(6, 1) * alpha;
    (&m + &six_a - rat(3, 1), -m + six_a + rat(3, 1))
}

fn pick_branch(first: Rational, second: Rational) -> (Rational, Branch) {
    match first.cmp(&second) {
        std::cmp::Ordering::Greater => (first, Branch::MinusCube),
        std::cmp::Ordering::Less => (second, Branch::PlusCube),
        std::cmp::Ordering::Equal => (first, Branch::Both),
    }
}

/// The three-point relative bound
/// `2 + ((n-2)/α) max{(1-α)³/((n-2)α²+6α-3), (1+α)³/(-(n-2)α²+6α+3)}`.
pub fn okuda_yu_bound(n: usize, alpha: &Rational) -> Result<BoundReport> {
    check_three_point_dimension(n)?;
    check_alpha(alpha, false)?;
    let (d_minus, d_plus) = window_denominators(n, alpha);
    let method = BoundMethod::OkudaYu;
    if !d_minus.is_positive() || !d_plus.is_positive() {
        let (reason, witness) = if !d_minus.is_positive() {
            ("(n-2)alpha^2 + 6alpha - 3", d_minus)
        } else {
            ("-(n-2)alpha^2 + 6alpha + 3", d_plus)
        };
        return Ok(BoundReport::inapplicable(
            n,
            Some(alpha.clone()),
            method,
            format!("outside window: {reason} = {} <= 0", witness.to_exact_string()),
            Some(witness),
        ));
    }
    let one = Rational::one();
    let first = num_traits::pow(&one - alpha, 3) / d_minus;
    let second = num_traits::pow(&one + alpha, 3) / d_plus;
    let (best, branch) = pick_branch(first, second);
    let value = rat(2, 1) + rat(n as i64 - 2, 1) / alpha * best;
    let mut report = BoundReport::applicable(n, Some(alpha.clone()), method, value);
    report.branch = Some(branch);
    Ok(report)
}

/// The same bound at `α = 1/l`, written with integer arithmetic:
/// `2 + (n-2) max{(l-1)³/(-3l²+6l+(n-2)), (l+1)³/(3l²+6l-(n-2))}` on the
/// window `3l²-6l+2 < n < 3l²+6l+2`.
pub fn okuda_yu_integer_l_bound(n: usize, l: usize) -> Result<BoundReport> {
    check_three_point_dimension(n)?;
    if l < 2 {
        return Err(Error::InvalidArgument(format!("l must be at least 2, got {l}")));
    }
    let (ni, li) = (n as i64, l as i64);
    let alpha = Some(rat(1, li));
    let method = BoundMethod::OkudaYuIntegerL;
    let lower = 3 * li * li - 6 * li + 2;
    let upper = 3 * li * li + 6 * li + 2;
    if !(lower < ni && ni < upper) {
        return Ok(BoundReport::inapplicable(
            n,
            alpha,
            method,
            format!("outside window {lower} < n < {upper}"),
            None,
        ));
    }
    let first = rat((li - 1).pow(3), -3 * li * li + 6 * li + (ni - 2));
    let second = rat((li + 1).pow(3), 3 * li * li + 6 * li - (ni - 2));
    let (best, branch) = pick_branch(first, second);
    let value = rat(2, 1) + rat(ni - 2, 1) * best;
    let mut report = BoundReport::applicable(n, alpha, method, value);
    report.branch = Some(branch);
    Ok(report)
}

/// `n_k = 3(2k-1)² - 4`, the only dimensions `n >= 3` where a tight harmonic
/// index 4 design could live.
pub fn corollary_dimension(k: usize) -> usize {
    3 * (2 * k - 1).pow(2) - 4
}

/// `(n+1)(n+2)/6` when it is an integer.
pub fn tight_design_cardinality(n: usize) -> Option<u64> {
    let prod = (n as u64 + 1) * (n as u64 + 2);
    (prod % 6 == 0).then_some(prod / 6)
}

/// Per-`k` comparison of the corollary bound with the cardinality a tight
/// harmonic index 4 design on `S^{n_k - 1}` would need.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    pub k: usize,
    pub n_k: usize,
    #[serde(with = "serde_exact")]
    pub alpha_k: Rational,
    /// `2(k-1)(4k³-k-1)`.
    #[serde(with = "serde_exact")]
    pub bound: Rational,
    /// The general bound evaluated at `(n_k, α_k)`; equal to `bound`.
    #[serde(with = "serde_exact")]
    pub general_bound: Rational,
    #[serde(with = "serde_exact::bigint")]
    pub tight_cardinality: BigInt,
    /// True when `bound < tight_cardinality`, i.e. no tight design exists.
    pub verdict: bool,
    /// `1 - n_k α_k²`, negative so the Lemmens–Seidel bound does not apply.
    #[serde(with = "serde_exact")]
    pub lemmens_seidel_witness: Rational,
    #[serde(with = "serde_exact")]
    pub gerzon: Rational,
    /// Both window denominators at `(n_k, α_k)` are strictly positive.
    pub window_strict: bool,
    pub note: String,
}

const COROLLARY_NOTE: &str = "bound form 2 + (n-2)/alpha * max{...}; \
the first case of the underlying proposition prints an extra '2 +' which is treated as a typo";

/// Builds and cross-checks the certificate for one `k >= 2`.
pub fn corollary_bound(k: usize) -> Result<NonexistenceCertificate> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be at least 2, got {k}")));
    }
    let ki = k as i64;
    let n_k = corollary_dimension(k);
    let alpha_k = rat(1, 2 * ki - 1);
    let bound = Rational::from_integer(
        BigInt::from(2 * (ki - 1)) * BigInt::from(4 * ki * ki * ki - ki - 1),
    );
    let general = okuda_yu_bound(n_k, &alpha_k)?;
    let general_bound = general.value.clone().ok_or_else(|| {
        Error::Verification(format!("k={k}: ({n_k}, {}) is outside the window", alpha_k.to_exact_string()))
    })?;
    if general_bound != bound {
        return Err(Error::Verification(format!(
            "k={k}: general bound {} differs from 2(k-1)(4k^3-k-1) = {}",
            general_bound.to_exact_string(),
            bound.to_exact_string()
        )));
    }
    let (d_minus, d_plus) = window_denominators(n_k, &alpha_k);
    let window_strict = d_minus.is_positive() && d_plus.is_positive();

    let nb = BigInt::from(n_k);
    let tight_cardinality = (&nb + 1u8) * (&nb + 2u8) / BigInt::from(6u8);
    let verdict = bound < Rational::from_integer(tight_cardinality.clone());

    let ls = lemmens_seidel_bound(n_k, &alpha_k)?;
    let lemmens_seidel_witness = ls.witness.clone().unwrap_or_else(Rational::zero);
    let printed = rat(-2 * (4 * ki * ki - 4 * ki - 1), (2 * ki - 1).pow(2));
    if ls.applicable || lemmens_seidel_witness != printed {
        return Err(Error::Verification(format!(
            "k={k}: Lemmens-Seidel witness {} differs from -2(4k^2-4k-1)/(2k-1)^2 = {}",
            lemmens_seidel_witness.to_exact_string(),
            printed.to_exact_string()
        )));
    }
    let gerzon = gerzon_bound(n_k)?.value.unwrap_or_else(Rational::zero);

    Ok(NonexistenceCertificate {
        k,
        n_k,
        alpha_k,
        bound,
        general_bound,
        tight_cardinality,
        verdict,
        lemmens_seidel_witness,
        gerzon,
        window_strict,
        note: COROLLARY_NOTE.to_string(),
    })
}

/// Certificates for `k_min..=k_max`, in order.
pub fn corollary_table(k_min: usize, k_max: usize, exec: Exec) -> Result<Vec<NonexistenceCertificate>> {
    if k_min < 2 || k_min > k_max {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= k-min <= k-max, got {k_min}..{k_max}"
        )));
    }
    exec.map_range(k_min..k_max + 1, corollary_bound)
        .into_iter()
        .collect()
}
