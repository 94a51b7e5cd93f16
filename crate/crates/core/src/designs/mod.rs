//! Checks on explicit configurations of unit vectors.
//!
//! Everything routes through the Gram matrix, so configurations with
//! irrational coordinates but rational inner products stay exact. The
//! harmonic index `t` test uses the addition formula: for the Gegenbauer
//! kernel `P^n_t`,
//!
//! ```text
//! Σ_{x, y ∈ X} P^n_t(⟨x, y⟩) = c · Σ_k |Σ_{x ∈ X} Y_k(x)|²
//! ```
//!
//! for an orthonormal basis `Y_k` of degree-`t` harmonics and some `c > 0`,
//! so the double sum is non-negative and vanishes exactly when every
//! degree-`t` harmonic sums to zero over `X`.

mod input;

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::bounds::tight_design_cardinality;
use crate::exact::{Rational, RationalExt};
use crate::gegenbauer::{gegenbauer_eval_f64, GegenbauerTable};
use crate::{Error, Exec, Result};

pub use input::{parse_configuration, ConfigurationFile};

/// Default tolerance for approximate (floating point) configurations.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Either an exact rational or a double, serialized as `"p/q"` or a number.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64_lossy(),
            Scalar::Approx(v) => *v,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => s.serialize_str(&r.to_exact_string()),
            Scalar::Approx(v) => s.serialize_f64(*v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Entries {
    Exact(Vec<Vec<Rational>>),
    Approx(Vec<Vec<f64>>),
}

/// A validated finite subset of `S^{n-1}`, held by its Gram matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    dimension: usize,
    gram: Entries,
    tolerance: f64,
    /// Rank of the Gram matrix when it was computed exactly.
    rank: Option<usize>,
}

fn dot_exact(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dot_f64(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn check_shape<T>(dimension: usize, points: &[Vec<T>]) -> Result<()> {
    if dimension == 0 {
        return Err(Error::Configuration("dimension must be positive".into()));
    }
    if points.is_empty() {
        return Err(Error::Configuration("configuration has no points".into()));
    }
    if let Some(i) = points.iter().position(|p| p.len() != dimension) {
        return Err(Error::Configuration(format!(
            "point {i} has {} coordinates, expected {dimension}",
            points[i].len()
        )));
    }
    Ok(())
}

impl Configuration {
    /// Rational points that must have squared norm exactly 1.
    pub fn exact_points(dimension: usize, points: Vec<Vec<Rational>>, exec: Exec) -> Result<Self> {
        check_shape(dimension, &points)?;
        let one = Rational::one();
        if let Some(i) = points.iter().position(|p| dot_exact(p, p) != one) {
            return Err(Error::Configuration(format!(
                "point {i} has squared norm {}, not 1",
                dot_exact(&points[i], &points[i]).to_exact_string()
            )));
        }
        let gram = exec.map_range(0..points.len(), |i| {
            points.iter().map(|q| dot_exact(&points[i], q)).collect()
        });
        Ok(Self {
            dimension,
            rank: Some(exact_rank(&gram).expect("Gram matrices of real vectors are PSD")),
            gram: Entries::Exact(gram),
            tolerance: 0.0,
        })
    }

    /// Rational directions scaled to unit length. Requires every normalized
    /// inner product `⟨x,y⟩/(|x||y|)` to be rational, e.g. when all vectors
    /// share one squared norm.
    pub fn exact_directions(dimension: usize, points: Vec<Vec<Rational>>, exec: Exec) -> Result<Self> {
        check_shape(dimension, &points)?;
        let norms: Vec<Rational> = points.iter().map(|p| dot_exact(p, p)).collect();
        if let Some(i) = norms.iter().position(Zero::is_zero) {
            return Err(Error::Configuration(format!("point {i} is the zero vector")));
        }
        let rows: Vec<Result<Vec<Rational>>> = exec.map_range(0..points.len(), |i| {
            (0..points.len())
                .map(|j| {
                    let scale = (&norms[i] * &norms[j]).exact_sqrt().ok_or_else(|| {
                        Error::Configuration(format!(
                            "points {i} and {j}: normalized inner product is irrational; supply a Gram matrix"
                        ))
                    })?;
                    Ok(dot_exact(&points[i], &points[j]) / scale)
                })
                .collect()
        });
        let gram = rows.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dimension,
            rank: Some(exact_rank(&gram).expect("Gram matrices of real vectors are PSD")),
            gram: Entries::Exact(gram),
            tolerance: 0.0,
        })
    }

    /// Floating point points with `| |x|² - 1 | <= tolerance`.
    pub fn approximate_points(
        dimension: usize,
        points: Vec<Vec<f64>>,
        tolerance: f64,
        exec: Exec,
    ) -> Result<Self> {
        check_shape(dimension, &points)?;
        if !(tolerance >= 0.0) {
            return Err(Error::Configuration("tolerance must be non-negative".into()));
        }
        if let Some(i) = points.iter().position(|p| (dot_f64(p, p) - 1.0).abs() > tolerance) {
            return Err(Error::Configuration(format!(
                "point {i} has squared norm {}, not 1 within {tolerance:e}",
                dot_f64(&points[i], &points[i])
            )));
        }
        let gram = exec.map_range(0..points.len(), |i| {
            points.iter().map(|q| dot_f64(&points[i], q)).collect()
        });
        Ok(Self {
            dimension,
            gram: Entries::Approx(gram),
            tolerance,
            rank: None,
        })
    }

    /// An exact Gram matrix: symmetric, unit diagonal and positive
    /// semidefinite, with rank at most `dimension` when one is claimed
    /// (otherwise the rank is taken as the dimension).
    pub fn exact_gram(gram: Vec<Vec<Rational>>, dimension: Option<usize>) -> Result<Self> {
        let m = gram.len();
        if m == 0 {
            return Err(Error::Configuration("empty Gram matrix".into()));
        }
        if let Some(i) = gram.iter().position(|r| r.len() != m) {
            return Err(Error::Configuration(format!("Gram row {i} has the wrong length")));
        }
        for i in 0..m {
            if !gram[i][i].is_one() {
                return Err(Error::Configuration(format!(
                    "Gram diagonal entry {i} is {}, not 1",
                    gram[i][i].to_exact_string()
                )));
            }
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Configuration(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        let rank = exact_rank(&gram).map_err(|w| Error::Configuration(w.to_string()))?;
        let dimension = dimension.unwrap_or(rank);
        if rank > dimension {
            return Err(Error::Configuration(format!(
                "Gram matrix has rank {rank}, larger than the claimed dimension {dimension}"
            )));
        }
        Ok(Self {
            dimension,
            gram: Entries::Exact(gram),
            tolerance: 0.0,
            rank: Some(rank),
        })
    }

    /// A floating point Gram matrix (symmetry and unit diagonal within
    /// tolerance; semidefiniteness is not checked).
    pub fn approximate_gram(gram: Vec<Vec<f64>>, dimension: usize, tolerance: f64) -> Result<Self> {
        let m = gram.len();
        if m == 0 || gram.iter().any(|r| r.len() != m) {
            return Err(Error::Configuration("Gram matrix must be square and non-empty".into()));
        }
        for i in 0..m {
            if (gram[i][i] - 1.0).abs() > tolerance {
                return Err(Error::Configuration(format!("Gram diagonal entry {i} is not 1")));
            }
            for j in 0..i {
                if (gram[i][j] - gram[j][i]).abs() > tolerance {
                    return Err(Error::Configuration(format!(
                        "Gram matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            dimension,
            gram: Entries::Approx(gram),
            tolerance,
            rank: None,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        match &self.gram {
            Entries::Exact(g) => g.len(),
            Entries::Approx(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.gram, Entries::Exact(_))
    }

    pub fn rank(&self) -> Option<usize> {
        self.rank
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Negates point `i`, flipping the signs of its inner products.
    pub fn negate(&mut self, i: usize) {
        fn flip<T: Clone + std::ops::Neg<Output = T>>(g: &mut [Vec<T>], i: usize) {
            for j in 0..g.len() {
                if i != j {
                    g[i][j] = -g[i][j].clone();
                    g[j][i] = -g[j][i].clone();
                }
            }
        }
        match &mut self.gram {
            Entries::Exact(g) => flip(g, i),
            Entries::Approx(g) => flip(g, i),
        }
    }
}

/// Why a matrix failed the semidefiniteness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PsdWitness {
    /// Elimination produced a negative pivot at this index.
    NegativePivot { index: usize, pivot: Rational },
    /// A zero pivot with a non-zero off-diagonal entry: the 2x2 minor on
    /// `(i, j)` is negative.
    ZeroPivot { i: usize, j: usize },
}

impl std::fmt::Display for PsdWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PsdWitness::NegativePivot { index, pivot } => write!(
                f,
                "matrix is not positive semidefinite: pivot {} at index {index}",
                pivot.to_exact_string()
            ),
            PsdWitness::ZeroPivot { i, j } => write!(
                f,
                "matrix is not positive semidefinite: zero pivot with non-zero coupling at ({i}, {j})"
            ),
        }
    }
}

/// Rank of a symmetric positive semidefinite matrix by exact symmetric
/// elimination with diagonal pivoting.
pub fn exact_rank(matrix: &[Vec<Rational>]) -> std::result::Result<usize, PsdWitness> {
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut active: Vec<usize> = (0..a.len()).collect();
    let mut rank = 0;
    loop {
        if let Some(&k) = active.iter().find(|&&k| a[k][k].is_negative()) {
            return Err(PsdWitness::NegativePivot {
                index: k,
                pivot: a[k][k].clone(),
            });
        }
        let Some(pos) = active.iter().position(|&k| a[k][k].is_positive()) else {
            for &i in &active {
                if let Some(&j) = active.iter().find(|&&j| j != i && !a[i][j].is_zero()) {
                    return Err(PsdWitness::ZeroPivot { i, j });
                }
            }
            return Ok(rank);
        };
        let k = active.remove(pos);
        rank += 1;
        let pivot = a[k][k].clone();
        for &i in &active {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &pivot;
            for &j in &active {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
}

/// The set `I(X)` of inner products of distinct points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerProductProfile {
    pub size: usize,
    pub dimension: usize,
    pub exact: bool,
    /// Distinct values, ascending. Approximate values are cluster midpoints.
    pub values: Vec<Scalar>,
    pub is_two_distance: bool,
    /// `α` with `I(X) ⊆ {±α}`, `0 <= α < 1`.
    pub equiangular_with: Option<Scalar>,
    pub rank: Option<usize>,
}

/// Computes `I(X)` and flags equiangularity.
pub fn profile(config: &Configuration) -> InnerProductProfile {
    let (values, equiangular_with): (Vec<Scalar>, _) = match &config.gram {
        Entries::Exact(g) => {
            let mut vals: Vec<Rational> = off_diagonal(g).cloned().collect();
            vals.sort();
            vals.dedup();
            let alpha = vals.first().map(Signed::abs);
            let equi = alpha.filter(|a| a < &Rational::one() && vals.iter().all(|v| &v.abs() == a));
            (
                vals.into_iter().map(Scalar::Exact).collect(),
                equi.map(Scalar::Exact),
            )
        }
        Entries::Approx(g) => {
            let tol = config.tolerance;
            let mut vals: Vec<f64> = off_diagonal(g).copied().collect();
            vals.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
            let clusters = cluster(&vals, tol);
            let abs: Vec<f64> = vals.iter().map(|v| v.abs()).collect();
            let (lo, hi) = abs
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            let alpha = (lo + hi) / 2.0;
            let equi = (!abs.is_empty() && hi - lo <= 2.0 * tol && alpha < 1.0 - tol).then_some(alpha);
            (
                clusters.into_iter().map(Scalar::Approx).collect(),
                equi.map(Scalar::Approx),
            )
        }
    };
    InnerProductProfile {
        size: config.len(),
        dimension: config.dimension,
        exact: config.is_exact(),
        is_two_distance: values.len() <= 2,
        values,
        equiangular_with,
        rank: config.rank,
    }
}

/// [`profile`] of an exact Gram matrix, validated first.
pub fn gram_profile(gram: Vec<Vec<Rational>>, dimension: Option<usize>) -> Result<InnerProductProfile> {
    Configuration::exact_gram(gram, dimension).map(|c| profile(&c))
}

fn off_diagonal<T>(g: &[Vec<T>]) -> impl Iterator<Item = &T> {
    g.iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().take(i))
}

/// Groups sorted values whose spread from the group's first member is at
/// most `tol`; returns each group's midpoint.
fn cluster(sorted: &[f64], tol: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[start] > tol {
            if start < sorted.len() {
                out.push((sorted[start] + sorted[i - 1]) / 2.0);
            }
            start = i;
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DesignTest {
    pub t: usize,
    /// `Σ_{x,y} P^n_t(⟨x,y⟩)`.
    pub sum: Scalar,
    pub is_design: bool,
}

/// Harmonic index `t` test through the Gegenbauer double sum.
pub fn harmonic_index_design_test(config: &Configuration, t: usize) -> Result<DesignTest> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be at least 1".into()));
    }
    let n = config.dimension;
    if n < 2 {
        return Err(Error::InvalidArgument("design tests need dimension >= 2".into()));
    }
    Ok(match &config.gram {
        Entries::Exact(g) => {
            let mut table = GegenbauerTable::new(n)?;
            let poly = table.poly(t);
            let sum: Rational = g.iter().flatten().map(|v| poly.eval(v)).sum();
            DesignTest {
                t,
                is_design: sum.is_zero(),
                sum: Scalar::Exact(sum),
            }
        }
        Entries::Approx(g) => {
            let mut sum = 0.0;
            for v in g.iter().flatten() {
                sum += gegenbauer_eval_f64(n, t, v.clamp(-1.0, 1.0))?;
            }
            let m = g.len() as f64;
            DesignTest {
                t,
                is_design: sum.abs() <= m * m * config.tolerance,
                sum: Scalar::Approx(sum),
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TightnessReport {
    pub dimension: usize,
    pub size: usize,
    /// `(n+1)(n+2)/6` when it is an integer.
    pub required_size: Option<u64>,
    pub design: DesignTest,
    pub tight: bool,
    /// Set when a tight harmonic index 4 design is claimed for `n >= 3`,
    /// which is impossible.
    pub contradiction: bool,
    pub message: String,
}

/// Whether the configuration is a tight harmonic index 4 design.
pub fn tightness_check(config: &Configuration) -> Result<TightnessReport> {
    let n = config.dimension;
    let design = harmonic_index_design_test(config, 4)?;
    let required_size = tight_design_cardinality(n);
    let size = config.len();
    let tight = design.is_design && required_size == Some(size as u64);
    let contradiction = tight && n >= 3;
    let message = if contradiction {
        "CONTRADICTION: tight harmonic index 4 designs do not exist for n >= 3; check the input".into()
    } else if tight {
        format!("tight harmonic index 4 design on S^{}", n - 1)
    } else {
        match required_size {
            Some(r) => format!("not tight: size {size}, tight size {r}, design {}", design.is_design),
            None => format!("not tight: (n+1)(n+2)/6 is not an integer for n = {n}"),
        }
    };
    Ok(TightnessReport {
        dimension: n,
        size,
        required_size,
        design,
        tight,
        contradiction,
        message,
    })
}
