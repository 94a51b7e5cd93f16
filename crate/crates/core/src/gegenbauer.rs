//! Gegenbauer polynomials `P^n_l` for the sphere `S^{n-1}`, normalized so
//! that `P^n_l(1) = 1`.
//!
//! They are generated by
//!
//! ```text
//! P_0 = 1,  P_1 = u,
//! (l + n - 3) P_l = (2l + n - 4) u P_{l-1} - (l - 1) P_{l-2}.
//! ```
//!
//! For `n = 2` these are the Chebyshev polynomials of the first kind and for
//! `n = 3` the Legendre polynomials.

use num_traits::{One, Signed};

use crate::exact::{rat, Polynomial, Rational};
use crate::{Error, Result};

/// Lazily extended cache of `P^n_0, P^n_1, ...` for one dimension.
#[derive(Clone, Debug)]
pub struct GegenbauerTable {
    dimension: usize,
    polys: Vec<Polynomial>,
}

impl GegenbauerTable {
    pub fn new(dimension: usize) -> Result<Self> {
        check_dimension(dimension)?;
        Ok(Self {
            dimension,
            polys: vec![Polynomial::one(), Polynomial::x()],
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Highest degree currently cached.
    pub fn max_degree(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn extend_to(&mut self, degree: usize) {
        let n = self.dimension as i64;
        while self.polys.len() <= degree {
            let l = self.polys.len() as i64;
            let prev = &self.polys[self.polys.len() - 1];
            let prev2 = &self.polys[self.polys.len() - 2];
            let a = prev.shift().scale(&rat(2 * l + n - 4, l + n - 3));
            let b = prev2.scale(&rat(l - 1, l + n - 3));
            self.polys.push(&a - &b);
        }
    }

    /// Cached polynomial, if already built.
    pub fn get(&self, degree: usize) -> Option<&Polynomial> {
        self.polys.get(degree)
    }

    pub fn poly(&mut self, degree: usize) -> &Polynomial {
        self.extend_to(degree);
        &self.polys[degree]
    }

    pub fn eval(&mut self, degree: usize, u: &Rational) -> Result<Rational> {
        check_unit_interval("u", u)?;
        Ok(self.poly(degree).eval(u))
    }
}

fn check_dimension(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Gegenbauer dimension must be at least 2, got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn check_unit_interval(name: &'static str, u: &Rational) -> Result<()> {
    if u.abs() > Rational::one() {
        return Err(Error::OutOfDomain {
            name,
            value: crate::RationalExt::to_exact_string(u),
        });
    }
    Ok(())
}

/// `P^n_l` as an exact polynomial.
pub fn gegenbauer(n: usize, l: usize) -> Result<Polynomial> {
    let mut table = GegenbauerTable::new(n)?;
    Ok(table.poly(l).clone())
}

/// `P^n_l(u)` for `u ∈ [-1, 1]`.
pub fn gegenbauer_eval(n: usize, l: usize, u: &Rational) -> Result<Rational> {
    GegenbauerTable::new(n)?.eval(l, u)
}

/// Double-precision `P^n_l(u)` by running the recurrence on values.
pub fn gegenbauer_eval_f64(n: usize, l: usize, u: f64) -> Result<f64> {
    check_dimension(n)?;
    if l == 0 {
        return Ok(1.0);
    }
    let n = n as f64;
    let (mut p0, mut p1) = (1.0, u);
    for l in 2..=l {
        let l = l as f64;
        let next = ((2.0 * l + n - 4.0) * u * p1 - (l - 1.0) * p0) / (l + n - 3.0);
        p0 = p1;
        p1 = next;
    }
    Ok(p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn poly(cs: &[(i64, i64)]) -> Polynomial {
        Polynomial::from_coeffs(cs.iter().map(|&(p, q)| rat(p, q)).collect())
    }

    #[test]
    fn degree_two_closed_form() {
        for n in 2..12i64 {
            let expected = poly(&[(-1, n - 1), (0, 1), (n, n - 1)]);
            assert_eq!(gegenbauer(n as usize, 2).unwrap(), expected);
        }
        assert_eq!(gegenbauer_eval(3, 2, &rat(1, 2)).unwrap(), rat(-1, 8));
    }

    #[test]
    fn degree_three_closed_form() {
        // u((n+2)u^2 - 3)/(n-1)
        for n in 2..12i64 {
            let expected = poly(&[(0, 1), (-3, n - 1), (0, 1), (n + 2, n - 1)]);
            assert_eq!(gegenbauer(n as usize, 3).unwrap(), expected);
        }
        assert_eq!(gegenbauer_eval(7, 3, &rat(1, 3)).unwrap(), rat(-1, 9));
    }

    #[test]
    fn low_degree_values() {
        assert_eq!(gegenbauer_eval(23, 1, &rat(1, 3)).unwrap(), rat(1, 3));
        assert_eq!(gegenbauer_eval(5, 0, &rat(-2, 3)).unwrap(), rat(1, 1));
    }

    #[test]
    fn normalized_at_one() {
        for n in 2..=12 {
            let mut t = GegenbauerTable::new(n).unwrap();
            for l in 0..=10 {
                assert_eq!(t.eval(l, &rat(1, 1)).unwrap(), rat(1, 1), "n={n} l={l}");
            }
        }
    }

    #[test]
    fn legendre_and_chebyshev_cases() {
        assert_eq!(gegenbauer(3, 2).unwrap(), poly(&[(-1, 2), (0, 1), (3, 2)]));
        assert_eq!(
            gegenbauer(3, 4).unwrap(),
            poly(&[(3, 8), (0, 1), (-30, 8), (0, 1), (35, 8)])
        );
        assert_eq!(
            gegenbauer(2, 4).unwrap(),
            poly(&[(1, 1), (0, 1), (-8, 1), (0, 1), (8, 1)])
        );
    }

    #[test]
    fn bounded_on_rational_grid() {
        for n in 2..=8 {
            let mut t = GegenbauerTable::new(n).unwrap();
            for l in 0..=8 {
                for k in -20..=20 {
                    let v = t.eval(l, &rat(k, 20)).unwrap();
                    assert!(v.abs() <= rat(1, 1), "n={n} l={l} u={k}/20");
                }
            }
        }
    }

    #[test]
    fn parity_matches_degree() {
        let p = gegenbauer(9, 7).unwrap();
        for i in (0..=7).step_by(2) {
            assert!(p.coeff(i).is_zero());
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(gegenbauer(1, 3).is_err());
        assert!(gegenbauer_eval(5, 2, &rat(3, 2)).is_err());
        assert!(gegenbauer_eval_f64(0, 2, 0.3).is_err());
    }

    #[test]
    fn float_path_matches_exact() {
        for n in 2..8 {
            for l in 0..9 {
                let exact = gegenbauer_eval(n, l, &rat(3, 7)).unwrap();
                let approx = gegenbauer_eval_f64(n, l, 3.0 / 7.0).unwrap();
                assert!((crate::RationalExt::to_f64_lossy(&exact) - approx).abs() < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn recurrence_holds_as_polynomials(n in 3usize..=12, l in 2usize..=10) {
            let mut t = GegenbauerTable::new(n).unwrap();
            t.extend_to(l);
            let (n, li) = (n as i64, l as i64);
            let lhs = t.get(l).unwrap().scale(&rat(li + n - 3, 1));
            let rhs = &t.get(l - 1).unwrap().shift().scale(&rat(2 * li + n - 4, 1))
                - &t.get(l - 2).unwrap().scale(&rat(li - 1, 1));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(t.get(l).unwrap().degree(), Some(l));
        }
    }
}
