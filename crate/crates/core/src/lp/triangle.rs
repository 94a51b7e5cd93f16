//! The triangle LP: maximize `1 + (x_1 + x_2)/3` over
//!
//! * `x_i >= 0`,
//! * `det W(x) >= 0`,
//! * `3 + P^n_l(α) x_1 + P^n_l(β) x_2 >= 0` for `l = 1..=l_max_p`,
//! * `(S^n_l)_{i,i}(x; α, β) >= 0` for `l <= l_max_s`, `i <= i_max_s`.
//!
//! The determinant condition reads `x_3+x_4+x_5+x_6 >= X² - X` with
//! `X = (x_1+x_2)/3`. Fixing `X = X0` makes it linear, so each level is an
//! exact LP. The region is convex (a concave quadratic plus linear
//! constraints) and contains `x = 0`, so feasible levels form an interval
//! starting at 0 and bisection on `X0` is sound.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{Feasibility, FarkasCertificate, LinearSystem, Sense, Simplex};
use crate::exact::{rat, serde_exact, simplest_between, Rational, RationalExt};
use crate::gegenbauer::GegenbauerTable;
use crate::threepoint::{check_angle_pair, DiagonalForm, Point6, ThreePointKernel};
use crate::{Error, Exec, Result};

/// Where a constraint of the instance comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintTag {
    /// `x_{index+1} >= 0`
    Nonnegative { index: usize },
    /// `3 + P_l(α) x_1 + P_l(β) x_2 >= 0`
    Gegenbauer { l: usize },
    /// `(S_l)_{i,i}(x; α, β) >= 0`
    ThreePoint { l: usize, i: usize },
}

impl fmt::Display for ConstraintTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintTag::Nonnegative { index } => write!(f, "x{} >= 0", index + 1),
            ConstraintTag::Gegenbauer { l } => write!(f, "gegenbauer l={l}"),
            ConstraintTag::ThreePoint { l, i } => write!(f, "three-point l={l} i={i}"),
        }
    }
}

/// `form(x) >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaggedConstraint {
    pub tag: ConstraintTag,
    pub form: DiagonalForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleLpInstance {
    pub n: usize,
    #[serde(with = "serde_exact")]
    pub alpha: Rational,
    #[serde(with = "serde_exact")]
    pub beta: Rational,
    pub l_max_p: usize,
    pub l_max_s: usize,
    pub i_max_s: usize,
    /// Linear constraints; the determinant condition is implicit and applied
    /// per level.
    pub constraints: Vec<TaggedConstraint>,
}

fn unit(j: usize) -> Point6 {
    std::array::from_fn(|k| if k == j { Rational::one() } else { Rational::zero() })
}

fn nonnegativity() -> impl Iterator<Item = TaggedConstraint> {
    (0..6).map(|index| TaggedConstraint {
        tag: ConstraintTag::Nonnegative { index },
        form: DiagonalForm {
            constant: Rational::zero(),
            coeffs: unit(index),
        },
    })
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "the triangle LP needs n >= 3, got {n}"
        )));
    }
    Ok(())
}

impl TriangleLpInstance {
    /// Materializes every constraint up to the given truncation levels.
    pub fn build(
        n: usize,
        alpha: Rational,
        beta: Rational,
        l_max_p: usize,
        l_max_s: usize,
        i_max_s: usize,
        exec: Exec,
    ) -> Result<Self> {
        check_dimension(n)?;
        check_angle_pair(&alpha, &beta)?;
        let mut constraints: Vec<TaggedConstraint> = nonnegativity().collect();

        let mut table = GegenbauerTable::new(n)?;
        for l in 1..=l_max_p {
            let poly = table.poly(l);
            constraints.push(TaggedConstraint {
                tag: ConstraintTag::Gegenbauer { l },
                form: DiagonalForm {
                    constant: rat(3, 1),
                    coeffs: [
                        poly.eval(&alpha),
                        poly.eval(&beta),
                        Rational::zero(),
                        Rational::zero(),
                        Rational::zero(),
                        Rational::zero(),
                    ],
                },
            });
        }

        let pairs: Vec<(usize, usize)> = (0..=l_max_s)
            .flat_map(|l| (0..=i_max_s).map(move |i| (l, i)))
            .collect();
        let three_point = exec.try_map(&pairs, |&(l, i)| {
            let form = ThreePointKernel::new(n, l)?.diagonal(i, &alpha, &beta)?;
            Ok::<_, Error>(TaggedConstraint {
                tag: ConstraintTag::ThreePoint { l, i },
                form,
            })
        })?;
        constraints.extend(three_point);

        Ok(Self {
            n,
            alpha,
            beta,
            l_max_p,
            l_max_s,
            i_max_s,
            constraints,
        })
    }

    /// Defaults `l_max_p = 10`, `l_max_s = 6`, `i_max_s = 3` at `β = -α`.
    pub fn with_defaults(n: usize, alpha: Rational, exec: Exec) -> Result<Self> {
        let beta = -&alpha;
        Self::build(n, alpha, beta, 10, 6, 3, exec)
    }

    /// Only `x >= 0`, the determinant condition and `(S^n_3)_{1,1} >= 0` at
    /// `β = -α`: the constraint set the closed-form bound is derived from.
    pub fn minimal(n: usize, alpha: Rational) -> Result<Self> {
        check_dimension(n)?;
        let beta = -&alpha;
        check_angle_pair(&alpha, &beta)?;
        let mut constraints: Vec<TaggedConstraint> = nonnegativity().collect();
        constraints.push(TaggedConstraint {
            tag: ConstraintTag::ThreePoint { l: 3, i: 1 },
            form: ThreePointKernel::new(n, 3)?.diagonal(1, &alpha, &beta)?,
        });
        Ok(Self {
            n,
            alpha,
            beta,
            l_max_p: 0,
            l_max_s: 3,
            i_max_s: 1,
            constraints,
        })
    }

    pub fn find(&self, tag: ConstraintTag) -> Option<&TaggedConstraint> {
        self.constraints.iter().find(|c| c.tag == tag)
    }

    /// Multiplies one constraint by a positive factor; the feasible region
    /// is unchanged.
    pub fn rescale(&mut self, index: usize, factor: &Rational) -> Result<()> {
        if !factor.is_positive() {
            return Err(Error::InvalidArgument("rescaling factor must be positive".into()));
        }
        let c = self
            .constraints
            .get_mut(index)
            .ok_or_else(|| Error::InvalidArgument(format!("no constraint {index}")))?;
        c.form = c.form.scale(factor);
        Ok(())
    }

    /// Whether `x` satisfies every linear constraint and `det W(x) >= 0`.
    pub fn contains(&self, x: &Point6) -> bool {
        self.constraints.iter().all(|c| !c.form.eval(x).is_negative())
            && !crate::threepoint::w_det(x).is_negative()
    }

    /// Exact LP for level `X0`: the instance's rows, `(x_1+x_2)/3 = X0` and
    /// `x_3+x_4+x_5+x_6 >= X0² - X0`. Non-negativity is left to the simplex
    /// (variables are non-negative there), trivially zero rows are dropped.
    /// Rows are scaled to primitive integer form to keep the tableau small.
    /// Returns the system plus, per row, the index of its instance
    /// constraint (`None` for the two level rows) and the scale applied.
    fn level_system(&self, level: &Rational) -> (LinearSystem, Vec<(Option<usize>, Rational)>) {
        let mut sys = LinearSystem::new(6);
        let mut origin = Vec::new();
        for (idx, c) in self.constraints.iter().enumerate() {
            if matches!(c.tag, ConstraintTag::Nonnegative { .. }) {
                continue;
            }
            if c.form.coeffs.iter().all(Zero::is_zero) && !c.form.constant.is_negative() {
                continue;
            }
            let f = primitive_scale(c.form.coeffs.iter().chain([&c.form.constant]));
            sys.push(
                c.form.coeffs.iter().map(|a| a * &f).collect(),
                Sense::Ge,
                -&c.form.constant * &f,
            );
            origin.push((Some(idx), f));
        }
        let zero = Rational::zero;
        let one = Rational::one;
        sys.push(
            vec![one(), one(), zero(), zero(), zero(), zero()],
            Sense::Eq,
            level * rat(3, 1),
        );
        origin.push((None, rat(3, 1)));
        sys.push(
            vec![zero(), zero(), one(), one(), one(), one()],
            Sense::Ge,
            level * level - level,
        );
        origin.push((None, one()));
        (sys, origin)
    }
}

/// Positive factor turning the entries into coprime integers.
fn primitive_scale<'a>(entries: impl Iterator<Item = &'a Rational>) -> Rational {
    let (mut num_gcd, mut den_lcm) = (BigInt::zero(), BigInt::one());
    for e in entries.filter(|e| !e.is_zero()) {
        num_gcd = num_gcd.gcd(e.numer());
        den_lcm = den_lcm.lcm(e.denom());
    }
    if num_gcd.is_zero() {
        return Rational::one();
    }
    Rational::new(den_lcm, num_gcd)
}

/// Multipliers ruling out objective levels.
///
/// With `y_c >= 0` on the instance constraints (including non-negativity),
/// `level` free on `(x_1+x_2)/3 - X0 = 0` and `w >= 0` on
/// `x_3+..+x_6 - (X0² - X0) >= 0`, the combination has every `x`-coefficient
/// exactly zero, leaving `q(X0) = Σ y_c const_c - level·X0 - w·(X0² - X0)`.
/// Any level with `q(X0) < 0` is infeasible. The `x`-part does not depend on
/// `X0`, so one certificate rules out a whole range of levels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCertificate {
    #[serde(with = "serde_exact::vec")]
    pub constraint_multipliers: Vec<Rational>,
    #[serde(with = "serde_exact")]
    pub level_multiplier: Rational,
    #[serde(with = "serde_exact")]
    pub w_multiplier: Rational,
}

impl LevelCertificate {
    fn from_farkas(
        instance: &TriangleLpInstance,
        sys: &LinearSystem,
        origin: &[(Option<usize>, Rational)],
        farkas: &FarkasCertificate,
    ) -> Self {
        let mut constraint_multipliers = vec![Rational::zero(); instance.constraints.len()];
        // scaled row = f * original row, so the original multiplier is y f
        let ys: Vec<Rational> = farkas
            .multipliers
            .iter()
            .zip(origin)
            .map(|(y, (_, f))| y * f)
            .collect();
        for (y, (o, _)) in ys.iter().zip(origin) {
            if let Some(idx) = o {
                constraint_multipliers[*idx] = y.clone();
            }
        }
        let m = ys.len();
        let level_multiplier = ys[m - 2].clone();
        let w_multiplier = ys[m - 1].clone();
        // Σ y a <= 0 componentwise; the slack is absorbed by x_j >= 0.
        let combined = farkas.combined_coeffs(sys);
        for (idx, c) in instance.constraints.iter().enumerate() {
            if let ConstraintTag::Nonnegative { index } = c.tag {
                constraint_multipliers[idx] = -&combined[index] / &c.form.coeffs[index];
            }
        }
        Self {
            constraint_multipliers,
            level_multiplier,
            w_multiplier,
        }
    }

    /// Coefficients `(c0, c1, c2)` of `q(X0) = c0 + c1 X0 + c2 X0²`.
    pub fn residual(&self, instance: &TriangleLpInstance) -> [Rational; 3] {
        let c0: Rational = self
            .constraint_multipliers
            .iter()
            .zip(&instance.constraints)
            .map(|(y, c)| y * &c.form.constant)
            .sum();
        let c1 = &self.w_multiplier - &self.level_multiplier;
        let c2 = -&self.w_multiplier;
        [c0, c1, c2]
    }

    pub fn residual_at(&self, instance: &TriangleLpInstance, level: &Rational) -> Rational {
        let [c0, c1, c2] = self.residual(instance);
        c0 + c1 * level + c2 * level * level
    }

    /// Checks signs, that the `x`-part cancels exactly, and that `q(level) < 0`.
    pub fn verify(&self, instance: &TriangleLpInstance, level: &Rational) -> Result<()> {
        if self.constraint_multipliers.len() != instance.constraints.len() {
            return Err(Error::Verification("multiplier count mismatch".into()));
        }
        if self.constraint_multipliers.iter().any(Signed::is_negative) || self.w_multiplier.is_negative() {
            return Err(Error::Verification("negative multiplier on an inequality".into()));
        }
        let mut combined: Point6 = std::array::from_fn(|_| Rational::zero());
        for (y, c) in self.constraint_multipliers.iter().zip(&instance.constraints) {
            for (acc, a) in combined.iter_mut().zip(&c.form.coeffs) {
                *acc += y * a;
            }
        }
        let third = &self.level_multiplier / rat(3, 1);
        combined[0] += &third;
        combined[1] += &third;
        for acc in combined[2..].iter_mut() {
            *acc += &self.w_multiplier;
        }
        if let Some(j) = combined.iter().position(|c| !c.is_zero()) {
            return Err(Error::Verification(format!(
                "combined coefficient of x{} is {} instead of 0",
                j + 1,
                combined[j].to_exact_string()
            )));
        }
        let q = self.residual_at(instance, level);
        if !q.is_negative() {
            return Err(Error::Verification(format!(
                "residual {} at level {} is not negative",
                q.to_exact_string(),
                level.to_exact_string()
            )));
        }
        Ok(())
    }

    /// Least upper bound on feasible levels implied by this certificate,
    /// given a feasible level `lo` (so `q(lo) >= 0`) and a level `hi` it
    /// rules out. Exact when the relevant root of `q` is rational; otherwise
    /// a rational within `precision` above it.
    pub fn level_supremum(
        &self,
        instance: &TriangleLpInstance,
        lo: &Rational,
        hi: &Rational,
        precision: &Rational,
    ) -> Rational {
        let [c0, c1, c2] = self.residual(instance);
        if c2.is_zero() {
            // linear: q = c0 + c1 X0 with c1 < 0 beyond the root
            if c1.is_negative() {
                return -c0 / c1;
            }
            return hi.clone();
        }
        // c2 < 0: q is concave, negative beyond its larger root
        let disc = &c1 * &c1 - rat(4, 1) * &c0 * &c2;
        if let Some(s) = disc.exact_sqrt() {
            return (-&c1 - s) / (rat(2, 1) * &c2);
        }
        let q = |x: &Rational| &c0 + &c1 * x + &c2 * x * x;
        let half = precision / rat(2, 1);
        let (mut a, mut b) = (lo.clone(), hi.clone());
        while &b - &a > half {
            let width = &b - &a;
            let mid = simplest_between(&(&a + &width * rat(2, 5)), &(&a + &width * rat(3, 5)));
            if q(&mid).is_negative() {
                b = mid;
            } else {
                a = mid;
            }
        }
        // everything above the root is ruled out
        simplest_between(&b, &(a + precision))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LevelResult {
    Feasible(Point6),
    Infeasible(LevelCertificate),
}

impl LevelResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LevelResult::Feasible(_))
    }
}

/// Decides whether some point of the region has `(x_1+x_2)/3 = level`.
pub fn feasibility_at_level(
    instance: &TriangleLpInstance,
    level: &Rational,
    solver: &Simplex,
) -> Result<LevelResult> {
    if level.is_negative() {
        return Err(Error::InvalidArgument("level must be non-negative".into()));
    }
    let (sys, origin) = instance.level_system(level);
    match solver.feasibility(&sys)? {
        Feasibility::Feasible(x) => {
            let point: Point6 = x
                .try_into()
                .map_err(|_| Error::Verification("solver returned a point of the wrong size".into()))?;
            let at_level = (&point[0] + &point[1]) / rat(3, 1) == *level;
            if !instance.contains(&point) || !at_level {
                return Err(Error::Verification("level point violates the instance".into()));
            }
            Ok(LevelResult::Feasible(point))
        }
        Feasibility::Infeasible(farkas) => {
            let cert = LevelCertificate::from_farkas(instance, &sys, &origin, &farkas);
            cert.verify(instance, level)?;
            Ok(LevelResult::Infeasible(cert))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionStep {
    #[serde(with = "serde_exact")]
    pub level: Rational,
    pub feasible: bool,
}

/// Certified enclosure of `max 1 + (x_1+x_2)/3` over the instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleBound {
    /// `1 + lo` for the best feasible level found.
    #[serde(with = "serde_exact")]
    pub lower: Rational,
    /// `1 + hi` for a level proven infeasible.
    #[serde(with = "serde_exact")]
    pub upper: Rational,
    /// `1 +` the supremum of levels not ruled out by the final certificate;
    /// `lower <= certified_upper <= upper`.
    #[serde(with = "serde_exact")]
    pub certified_upper: Rational,
    #[serde(with = "serde_exact")]
    pub gap: Rational,
    #[serde(with = "serde_exact::array")]
    pub lower_point: Point6,
    pub upper_certificate: LevelCertificate,
    #[serde(with = "serde_exact")]
    pub upper_level: Rational,
    pub transcript: Vec<BisectionStep>,
}

/// Levels beyond `2^MAX_DOUBLINGS` are treated as an unbounded objective.
const MAX_DOUBLINGS: usize = 64;

/// Bisection on the objective level until the bracket is at most `tol` wide.
pub fn triangle_bound(
    instance: &TriangleLpInstance,
    tol: &Rational,
    solver: &Simplex,
) -> Result<TriangleBound> {
    if !tol.is_positive() {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let mut transcript = Vec::new();
    let mut lo = Rational::zero();
    let mut lo_point = match feasibility_at_level(instance, &lo, solver)? {
        LevelResult::Feasible(p) => p,
        LevelResult::Infeasible(_) => {
            return Err(Error::Verification("level 0 should always be feasible".into()))
        }
    };
    transcript.push(BisectionStep {
        level: lo.clone(),
        feasible: true,
    });

    let mut probe = Rational::one();
    let mut bracket = None;
    for _ in 0..MAX_DOUBLINGS {
        let res = feasibility_at_level(instance, &probe, solver)?;
        transcript.push(BisectionStep {
            level: probe.clone(),
            feasible: res.is_feasible(),
        });
        match res {
            LevelResult::Feasible(p) => {
                lo = probe.clone();
                lo_point = p;
                probe *= rat(2, 1);
            }
            LevelResult::Infeasible(cert) => {
                bracket = Some((probe.clone(), cert));
                break;
            }
        }
    }
    let Some((mut hi, mut hi_cert)) = bracket else {
        return Err(Error::InvalidArgument(format!(
            "objective is unbounded up to level 2^{MAX_DOUBLINGS}; add a degree-3 three-point constraint"
        )));
    };

    // Steps alternate between the midpoint and the supremum implied by the
    // current certificate; when that supremum is feasible it is the optimum
    // and the bracket closes at once.
    let precision = tol / rat(1024, 1);
    let mut from_certificate = true;
    while &hi - &lo > *tol {
        let width = &hi - &lo;
        let mut probe = simplest_between(&(&lo + &width * rat(2, 5)), &(&lo + &width * rat(3, 5)));
        let mut at_root = false;
        if from_certificate {
            let sup = hi_cert.level_supremum(instance, &lo, &hi, &precision);
            if sup > lo && sup < hi {
                probe = sup;
                at_root = true;
            }
        }
        from_certificate = !from_certificate;
        let res = feasibility_at_level(instance, &probe, solver)?;
        transcript.push(BisectionStep {
            level: probe.clone(),
            feasible: res.is_feasible(),
        });
        match res {
            LevelResult::Feasible(p) => {
                lo = probe;
                lo_point = p;
                let closer = &lo + tol;
                if at_root && closer < hi && hi_cert.verify(instance, &closer).is_ok() {
                    hi = closer;
                }
            }
            LevelResult::Infeasible(cert) => {
                hi = probe;
                hi_cert = cert;
            }
        }
    }

    let sup = hi_cert.level_supremum(instance, &lo, &hi, &precision);
    let one = Rational::one();
    Ok(TriangleBound {
        lower: &one + &lo,
        upper: &one + &hi,
        certified_upper: &one + sup.clone().max(lo.clone()).min(hi.clone()),
        gap: &hi - &lo,
        lower_point: lo_point,
        upper_certificate: hi_cert,
        upper_level: hi,
        transcript,
    })
}
