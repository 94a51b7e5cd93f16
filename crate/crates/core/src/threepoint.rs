//! Entries of the three-point matrices `S^n_k(u, v, t)` and the 2x2 matrix
//! `W(x)` that together describe the triangle LP.
//!
//! The `(i, j)` entry of the unsymmetrized kernel at `(a, b, c)` is
//!
//! ```text
//! a^i b^j ((1-a²)(1-b²))^{k/2} Q((c - ab) / sqrt((1-a²)(1-b²)))
//! ```
//!
//! with `Q = P^{n-1}_k`. Since `Q` has the parity of `k`, writing
//! `Q(s) = Σ_m q_m s^{k-2m}` turns this into the polynomial
//! `a^i b^j Σ_m q_m (c-ab)^{k-2m} ((1-a²)(1-b²))^m`, so no square roots are
//! needed. `S` is the average of that polynomial over the six permutations of
//! `(u, v, t)`.
//!
//! Normalizations of `S` differ across the literature by a positive factor
//! per `(n, k, i)`; this module fixes the plain average above and exposes the
//! factor [`lemma32_scale`] relating it to the published degree-3 closed
//! forms.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{rat, Polynomial, Rational};
use crate::gegenbauer::{check_unit_interval, GegenbauerTable};
use crate::{Error, Result};

/// A point `x = (x_1, ..., x_6)` of the triangle LP.
pub type Point6 = [Rational; 6];

/// Evaluator for the degree-`k` three-point kernel in dimension `n`.
#[derive(Clone, Debug)]
pub struct ThreePointKernel {
    n: usize,
    k: usize,
    /// `P^{n-1}_k`.
    q: Polynomial,
}

impl ThreePointKernel {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "three-point kernels need n >= 3, got {n}"
            )));
        }
        let mut table = GegenbauerTable::new(n - 1)?;
        Ok(Self {
            n,
            k,
            q: table.poly(k).clone(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// Unsymmetrized entry at `(a, b, c)`.
    fn kernel(&self, i: usize, j: usize, a: &Rational, b: &Rational, c: &Rational) -> Rational {
        let one = Rational::one();
        let ab = a * b;
        let shifted = c - &ab;
        let radial = (&one - a * a) * (&one - b * b);
        let mut sum = Rational::zero();
        let mut radial_pow = Rational::one();
        for m in 0..=self.k / 2 {
            let q = self.q.coeff(self.k - 2 * m);
            if !q.is_zero() {
                sum += q * num_traits::pow(shifted.clone(), self.k - 2 * m) * &radial_pow;
            }
            radial_pow *= &radial;
        }
        num_traits::pow(a.clone(), i) * num_traits::pow(b.clone(), j) * sum
    }

    /// `(S^n_k)_{i,j}(u, v, t)`, averaged over the six argument permutations.
    pub fn entry(
        &self,
        i: usize,
        j: usize,
        u: &Rational,
        v: &Rational,
        t: &Rational,
    ) -> Result<Rational> {
        check_unit_interval("u", u)?;
        check_unit_interval("v", v)?;
        check_unit_interval("t", t)?;
        let perms = [(u, v, t), (u, t, v), (v, u, t), (v, t, u), (t, u, v), (t, v, u)];
        let total: Rational = perms
            .iter()
            .map(|(a, b, c)| self.kernel(i, j, a, b, c))
            .sum();
        Ok(total / rat(6, 1))
    }

    /// Constant term and `x`-coefficients of `(S^n_k)_{i,i}(x; α, β)`.
    pub fn diagonal(&self, i: usize, alpha: &Rational, beta: &Rational) -> Result<DiagonalForm> {
        let one = Rational::one();
        let e = |u: &Rational, v: &Rational, t: &Rational| self.entry(i, i, u, v, t);
        Ok(DiagonalForm {
            constant: e(&one, &one, &one)?,
            coeffs: [
                e(alpha, alpha, &one)?,
                e(beta, beta, &one)?,
                e(alpha, alpha, alpha)?,
                e(alpha, alpha, beta)?,
                e(alpha, beta, beta)?,
                e(beta, beta, beta)?,
            ],
        })
    }
}

/// Validates that `α, β ∈ [-1, 1)`.
pub(crate) fn check_angle_pair(alpha: &Rational, beta: &Rational) -> Result<()> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        check_unit_interval(name, v)?;
        if v == &Rational::one() {
            return Err(Error::InvalidArgument(format!("{name} must be < 1")));
        }
    }
    Ok(())
}

/// `(S^n_k)_{i,j}(u, v, t)` in the plain averaged normalization.
pub fn unnormalized_entry(
    n: usize,
    k: usize,
    i: usize,
    j: usize,
    u: &Rational,
    v: &Rational,
    t: &Rational,
) -> Result<Rational> {
    ThreePointKernel::new(n, k)?.entry(i, j, u, v, t)
}

/// An affine function `constant + coeffs · x` of the LP variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalForm {
    #[serde(with = "crate::exact::serde_exact")]
    pub constant: Rational,
    #[serde(with = "crate::exact::serde_exact::array")]
    pub coeffs: Point6,
}

impl DiagonalForm {
    pub fn eval(&self, x: &Point6) -> Rational {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (c, xi)| acc + c * xi)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            constant: &self.constant * factor,
            coeffs: self.coeffs.clone().map(|c| c * factor),
        }
    }
}

/// `(S^n_l)_{i,i}(x; α, β)`.
pub fn s_combination_diagonal(
    n: usize,
    l: usize,
    i: usize,
    x: &Point6,
    alpha: &Rational,
    beta: &Rational,
) -> Result<Rational> {
    check_angle_pair(alpha, beta)?;
    Ok(ThreePointKernel::new(n, l)?.diagonal(i, alpha, beta)?.eval(x))
}

/// The argument triples appearing in the degree-3 closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lemma32Pattern {
    /// `(1, 1, 1)`
    Ones,
    /// `(α, α, 1)`
    AlphaAlphaOne,
    /// `(α, α, α)`
    AlphaAlphaAlpha,
    /// `(α, α, -α)`
    AlphaAlphaNegAlpha,
}

impl Lemma32Pattern {
    pub const ALL: [Lemma32Pattern; 4] = [
        Lemma32Pattern::Ones,
        Lemma32Pattern::AlphaAlphaOne,
        Lemma32Pattern::AlphaAlphaAlpha,
        Lemma32Pattern::AlphaAlphaNegAlpha,
    ];

    pub fn args(self, alpha: &Rational) -> [Rational; 3] {
        let one = Rational::one();
        match self {
            Lemma32Pattern::Ones => [one.clone(), one.clone(), one],
            Lemma32Pattern::AlphaAlphaOne => [alpha.clone(), alpha.clone(), one],
            Lemma32Pattern::AlphaAlphaAlpha => [alpha.clone(), alpha.clone(), alpha.clone()],
            Lemma32Pattern::AlphaAlphaNegAlpha => [alpha.clone(), alpha.clone(), -alpha],
        }
    }
}

/// The published closed forms for `(S^n_3)_{1,1}` at the four patterns.
pub fn lemma32_reference(n: usize, pattern: Lemma32Pattern, alpha: &Rational) -> Result<Rational> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "closed forms need n >= 3, got {n}"
        )));
    }
    let ni = n as i64;
    let one = Rational::one();
    let a = alpha;
    let a2 = a * a;
    let prefactor = rat(ni * (ni + 2) * (ni + 4) * (ni + 6), 1);
    let nm2 = rat(ni - 2, 1);
    Ok(match pattern {
        Lemma32Pattern::Ones => Rational::zero(),
        Lemma32Pattern::AlphaAlphaOne => {
            prefactor / rat(3 * (ni - 1) * (ni + 1) * (ni + 3), 1)
                * &a2
                * num_traits::pow(&one - &a2, 3)
        }
        Lemma32Pattern::AlphaAlphaAlpha => {
            -prefactor / rat((ni - 2) * (ni - 1) * (ni + 1) * (ni + 3), 1)
                * num_traits::pow(a - &one, 3)
                * num_traits::pow(a.clone(), 3)
                * (&nm2 * &a2 - rat(6, 1) * a - rat(3, 1))
        }
        Lemma32Pattern::AlphaAlphaNegAlpha => {
            -prefactor / rat((ni - 2) * (ni - 1) * (ni + 1) * (ni + 3), 1)
                * num_traits::pow(a.clone(), 3)
                * num_traits::pow(a + &one, 3)
                * (&nm2 * &a2 + rat(6, 1) * a - rat(3, 1))
        }
    })
}

/// Ratio between the closed forms and the averaged entries:
/// `n(n+2)(n+4)(n+6) / ((n-1)(n+1)(n+3))`.
pub fn lemma32_scale(n: usize) -> Rational {
    let n = n as i64;
    rat(n * (n + 2) * (n + 4) * (n + 6), (n - 1) * (n + 1) * (n + 3))
}

/// The symmetric 2x2 matrix `W(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WMatrix {
    #[serde(with = "crate::exact::serde_exact::array")]
    pub x: Point6,
    #[serde(skip)]
    pub entries: [[Rational; 2]; 2],
}

impl WMatrix {
    pub fn new(x: Point6) -> Self {
        let big_x = (&x[0] + &x[1]) / rat(3, 1);
        let tail: Rational = x[2..].iter().sum();
        let entries = [
            [Rational::one(), big_x.clone()],
            [big_x.clone(), &big_x + tail],
        ];
        Self { x, entries }
    }

    pub fn det(&self) -> Rational {
        let [[a, b], [c, d]] = &self.entries;
        a * d - b * c
    }
}

/// `det W(x) = -X(X-1) + Y + Z` with `X = (x_1+x_2)/3`, `Y = x_3+x_5`,
/// `Z = x_4+x_6`.
pub fn w_det(x: &Point6) -> Rational {
    let big_x = (&x[0] + &x[1]) / rat(3, 1);
    let y = &x[2] + &x[4];
    let z = &x[3] + &x[5];
    -(&big_x * &big_x) + big_x + y + z
}
