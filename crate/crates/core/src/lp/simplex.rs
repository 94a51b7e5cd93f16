//! Dense two-phase simplex over exact rationals.
//!
//! Variables are implicitly non-negative. Pricing is Dantzig's rule with a
//! fall back to Bland's least-index rule after degenerate pivots, so the
//! method terminates without cycling. Every answer
//! is re-verified against the original system before it is returned: a
//! feasible point is substituted into each row, and an infeasibility
//! certificate is recombined into an explicit contradiction.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exact::{serde_exact, Rational, RationalExt};
use crate::{Error, Result};

/// Default cap on pivots per solve.
pub const DEFAULT_MAX_PIVOTS: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    /// `a·x >= b`
    Ge,
    /// `a·x <= b`
    Le,
    /// `a·x = b`
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    #[serde(with = "serde_exact::vec")]
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    #[serde(with = "serde_exact")]
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Self {
        Self { coeffs, sense, rhs }
    }

    fn lhs(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().zip(x).map(|(a, v)| a * v).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.sense {
            Sense::Ge => lhs >= self.rhs,
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// `rows` over `num_vars` non-negative variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub rows: Vec<Row>,
}

impl LinearSystem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars, "row width must match num_vars");
        self.rows.push(Row::new(coeffs, sense, rhs));
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|r| r.is_satisfied(x))
    }
}

/// Multipliers proving a [`LinearSystem`] has no non-negative solution.
///
/// `y_i >= 0` on `>=` rows, `y_i <= 0` on `<=` rows, free on equalities.
/// Every feasible `x` would satisfy `Σ y_i (a_i·x) >= Σ y_i b_i`; the
/// certificate has `Σ y_i a_i <= 0` componentwise and `Σ y_i b_i > 0`, which
/// is impossible for `x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FarkasCertificate {
    #[serde(with = "serde_exact::vec")]
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// `Σ y_i a_i`, one entry per variable.
    pub fn combined_coeffs(&self, system: &LinearSystem) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); system.num_vars];
        for (y, row) in self.multipliers.iter().zip(&system.rows) {
            if y.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(&row.coeffs) {
                *o += y * a;
            }
        }
        out
    }

    /// `Σ y_i b_i`.
    pub fn combined_rhs(&self, system: &LinearSystem) -> Rational {
        self.multipliers
            .iter()
            .zip(&system.rows)
            .map(|(y, row)| y * &row.rhs)
            .sum()
    }

    pub fn verify(&self, system: &LinearSystem) -> Result<()> {
        if self.multipliers.len() != system.rows.len() {
            return Err(Error::Verification(format!(
                "certificate has {} multipliers for {} rows",
                self.multipliers.len(),
                system.rows.len()
            )));
        }
        for (i, (y, row)) in self.multipliers.iter().zip(&system.rows).enumerate() {
            let ok = match row.sense {
                Sense::Ge => !y.is_negative(),
                Sense::Le => !y.is_positive(),
                Sense::Eq => true,
            };
            if !ok {
                return Err(Error::Verification(format!(
                    "multiplier {i} = {} has the wrong sign for a {:?} row",
                    y.to_exact_string(),
                    row.sense
                )));
            }
        }
        if let Some((j, c)) = self
            .combined_coeffs(system)
            .iter()
            .enumerate()
            .find(|(_, c)| c.is_positive())
        {
            return Err(Error::Verification(format!(
                "combined coefficient of x_{j} is {} > 0",
                c.to_exact_string()
            )));
        }
        let rhs = self.combined_rhs(system);
        if !rhs.is_positive() {
            return Err(Error::Verification(format!(
                "combined right-hand side {} is not positive",
                rhs.to_exact_string()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(FarkasCertificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(Optimum),
    Infeasible(FarkasCertificate),
    /// The objective grows without bound along `ray` from `point`.
    Unbounded { point: Vec<Rational>, ray: Vec<Rational> },
}

/// An optimal vertex together with a dual solution proving optimality.
///
/// The duals satisfy `y_i <= 0` on `>=` rows, `y_i >= 0` on `<=` rows,
/// `Σ y_i a_i >= c` componentwise and `Σ y_i b_i = value`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub point: Vec<Rational>,
    pub value: Rational,
    pub duals: Vec<Rational>,
}

impl Optimum {
    pub fn verify(&self, system: &LinearSystem, objective: &[Rational]) -> Result<()> {
        if !system.is_feasible_point(&self.point) {
            return Err(Error::Verification("optimal point violates a row".into()));
        }
        let primal: Rational = objective.iter().zip(&self.point).map(|(c, x)| c * x).sum();
        if primal != self.value {
            return Err(Error::Verification("objective value mismatch".into()));
        }
        for (i, (y, row)) in self.duals.iter().zip(&system.rows).enumerate() {
            let ok = match row.sense {
                Sense::Ge => !y.is_positive(),
                Sense::Le => !y.is_negative(),
                Sense::Eq => true,
            };
            if !ok {
                return Err(Error::Verification(format!("dual {i} has the wrong sign")));
            }
        }
        let cert = FarkasCertificate {
            multipliers: self.duals.clone(),
        };
        let combined = cert.combined_coeffs(system);
        if combined.iter().zip(objective).any(|(a, c)| a < c) {
            return Err(Error::Verification("dual solution is not dual feasible".into()));
        }
        if cert.combined_rhs(system) != self.value {
            return Err(Error::Verification("duality gap is not zero".into()));
        }
        Ok(())
    }
}

/// Exact simplex solver with a pivot budget.
#[derive(Clone, Copy, Debug)]
pub struct Simplex {
    pub max_pivots: usize,
}

impl Default for Simplex {
    fn default() -> Self {
        Self {
            max_pivots: DEFAULT_MAX_PIVOTS,
        }
    }
}

impl Simplex {
    pub fn with_max_pivots(max_pivots: usize) -> Self {
        Self { max_pivots }
    }

    /// Decides whether the system has a non-negative solution.
    pub fn feasibility(&self, system: &LinearSystem) -> Result<Feasibility> {
        let mut tableau = Tableau::new(system);
        let mut pivots = 0;
        match tableau.phase_one(&mut pivots, self.max_pivots)? {
            PhaseOne::Infeasible(cert) => {
                cert.verify(system)?;
                Ok(Feasibility::Infeasible(cert))
            }
            PhaseOne::Feasible => {
                let x = tableau.primal();
                if !system.is_feasible_point(&x) {
                    return Err(Error::Verification(
                        "phase one returned a point violating the system".into(),
                    ));
                }
                Ok(Feasibility::Feasible(x))
            }
        }
    }

    /// Maximizes `objective · x` over the system.
    pub fn maximize(&self, system: &LinearSystem, objective: &[Rational]) -> Result<LpOutcome> {
        assert_eq!(objective.len(), system.num_vars);
        let mut tableau = Tableau::new(system);
        let mut pivots = 0;
        if let PhaseOne::Infeasible(cert) = tableau.phase_one(&mut pivots, self.max_pivots)? {
            cert.verify(system)?;
            return Ok(LpOutcome::Infeasible(cert));
        }
        tableau.drive_out_artificials();
        let outcome = tableau.phase_two(objective, &mut pivots, self.max_pivots)?;
        match &outcome {
            LpOutcome::Optimal(opt) => opt.verify(system, objective)?,
            LpOutcome::Unbounded { point, ray } => {
                let homogeneous = LinearSystem {
                    num_vars: system.num_vars,
                    rows: system
                        .rows
                        .iter()
                        .map(|r| Row::new(r.coeffs.clone(), r.sense, Rational::zero()))
                        .collect(),
                };
                let gain: Rational = objective.iter().zip(ray).map(|(c, r)| c * r).sum();
                if !system.is_feasible_point(point)
                    || !homogeneous.is_feasible_point(ray)
                    || !gain.is_positive()
                {
                    return Err(Error::Verification("unboundedness ray failed to verify".into()));
                }
            }
            LpOutcome::Infeasible(_) => unreachable!("phase two never reports infeasibility"),
        }
        Ok(outcome)
    }
}

enum PhaseOne {
    Feasible,
    Infeasible(FarkasCertificate),
}

/// Column layout: `[vars | slacks | artificials]`, one artificial per row.
/// The artificial block of the tableau always holds `B^{-1}`.
struct Tableau {
    num_vars: usize,
    num_rows: usize,
    art_start: usize,
    num_cols: usize,
    /// `num_rows` rows of `num_cols + 1` entries; the last entry is the rhs.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Rows that were multiplied by -1 to make the rhs non-negative.
    flipped: Vec<bool>,
}

impl Tableau {
    fn new(system: &LinearSystem) -> Self {
        let m = system.rows.len();
        let nv = system.num_vars;
        let mut slack_col = Vec::with_capacity(m);
        let mut next = nv;
        for row in &system.rows {
            if row.sense == Sense::Eq {
                slack_col.push(None);
            } else {
                slack_col.push(Some(next));
                next += 1;
            }
        }
        let art_start = next;
        let num_cols = art_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut flipped = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, row) in system.rows.iter().enumerate() {
            // flipping `a·x >= 0` too lets it start on its slack
            let flip = row.rhs.is_negative() || (row.rhs.is_zero() && row.sense == Sense::Ge);
            let sign = if flip { -Rational::one() } else { Rational::one() };
            let sense = match (row.sense, flip) {
                (Sense::Ge, true) => Sense::Le,
                (Sense::Le, true) => Sense::Ge,
                (s, _) => s,
            };
            let mut t = vec![Rational::zero(); num_cols + 1];
            for (j, a) in row.coeffs.iter().enumerate() {
                t[j] = a * &sign;
            }
            if let Some(s) = slack_col[i] {
                t[s] = if sense == Sense::Ge {
                    -Rational::one()
                } else {
                    Rational::one()
                };
            }
            t[art_start + i] = Rational::one();
            t[num_cols] = &row.rhs * &sign;
            rows.push(t);
            flipped.push(flip);
            // a `<=` row with non-negative rhs starts feasible on its slack,
            // whose column equals the artificial one
            basis.push(match (sense, slack_col[i]) {
                (Sense::Le, Some(s)) => s,
                _ => art_start + i,
            });
        }
        Self {
            num_vars: nv,
            num_rows: m,
            art_start,
            num_cols,
            rows,
            basis,
            flipped,
        }
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.art_start
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rational::one() / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` for a cost vector over all columns.
    fn reduced_costs(&self, costs: &[Rational]) -> Vec<Rational> {
        let mut red = costs.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (r, v) in red.iter_mut().zip(row.iter()) {
                if !v.is_zero() {
                    *r -= cb * v;
                }
            }
        }
        red
    }

    /// Minimizes `costs · columns`. Entering columns follow Dantzig's
    /// most-negative rule, except right after a degenerate pivot, where
    /// Bland's least-index rule takes over. Every pivot of a would-be cycle is
    /// degenerate and so follows a degenerate pivot, hence is a Bland pivot,
    /// and Bland's rule does not cycle. Returns the entering column of an
    /// unbounded direction, if any.
    fn minimize(
        &mut self,
        costs: &[Rational],
        allow_artificial: bool,
        pivots: &mut usize,
        max_pivots: usize,
    ) -> Result<Option<usize>> {
        let mut red = self.reduced_costs(costs);
        let mut degenerate = false;
        loop {
            let candidates = (0..self.num_cols)
                .filter(|&j| allow_artificial || !self.is_artificial(j))
                .filter(|&j| red[j].is_negative());
            let entering = if degenerate {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| red[a].cmp(&red[b]).then(a.cmp(&b)))
            };
            let Some(c) = entering else {
                return Ok(None);
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.num_rows {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[i][self.num_cols] / a;
                let better = match &leave {
                    None => true,
                    Some((best_i, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*best_i])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(Some(c));
            };
            if *pivots >= max_pivots {
                return Err(Error::PivotLimit(*pivots));
            }
            *pivots += 1;
            degenerate = ratio.is_zero();
            self.pivot(r, c);
            let rc = red[c].clone();
            for (v, p) in red.iter_mut().zip(&self.rows[r]) {
                if !p.is_zero() {
                    *v -= &rc * p;
                }
            }
        }
    }

    fn phase_one(&mut self, pivots: &mut usize, max_pivots: usize) -> Result<PhaseOne> {
        let mut costs = vec![Rational::zero(); self.num_cols + 1];
        for c in costs[self.art_start..self.num_cols].iter_mut() {
            *c = Rational::one();
        }
        costs[self.num_cols] = Rational::zero();
        self.minimize(&costs[..self.num_cols + 1], true, pivots, max_pivots)?;
        let infeasibility: Rational = self
            .rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| self.is_artificial(b))
            .map(|(row, _)| row[self.num_cols].clone())
            .sum();
        if infeasibility.is_zero() {
            return Ok(PhaseOne::Feasible);
        }
        // Simplex multipliers pi = c_B B^{-1}; the artificial block holds B^{-1}.
        let red = self.reduced_costs(&costs);
        let multipliers = (0..self.num_rows)
            .map(|i| {
                let pi = Rational::one() - &red[self.art_start + i];
                if self.flipped[i] {
                    -pi
                } else {
                    pi
                }
            })
            .collect();
        Ok(PhaseOne::Infeasible(FarkasCertificate { multipliers }))
    }

    /// Pivots zero-valued artificials out of the basis where possible. Rows
    /// where that is impossible are redundant and stay pinned at zero.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.num_rows {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            if let Some(c) = (0..self.art_start).find(|&j| !self.rows[r][j].is_zero()) {
                self.pivot(r, c);
            }
        }
    }

    fn phase_two(
        &mut self,
        objective: &[Rational],
        pivots: &mut usize,
        max_pivots: usize,
    ) -> Result<LpOutcome> {
        let mut costs = vec![Rational::zero(); self.num_cols + 1];
        for (c, o) in costs.iter_mut().zip(objective) {
            *c = -o;
        }
        if let Some(entering) = self.minimize(&costs, false, pivots, max_pivots)? {
            let point = self.primal();
            let mut ray = vec![Rational::zero(); self.num_vars];
            if entering < self.num_vars {
                ray[entering] = Rational::one();
            }
            for (row, &b) in self.rows.iter().zip(&self.basis) {
                if b < self.num_vars {
                    ray[b] = -&row[entering];
                }
            }
            return Ok(LpOutcome::Unbounded { point, ray });
        }
        let point = self.primal();
        let value = objective.iter().zip(&point).map(|(c, x)| c * x).sum();
        let red = self.reduced_costs(&costs);
        // Minimizing -c: pi_i = -(reduced cost of artificial i); max duals are -pi.
        let duals = (0..self.num_rows)
            .map(|i| {
                let y = red[self.art_start + i].clone();
                if self.flipped[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        Ok(LpOutcome::Optimal(Optimum {
            point,
            value,
            duals,
        }))
    }

    fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.num_vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.num_vars {
                x[b] = row[self.num_cols].clone();
            }
        }
        x
    }
}
