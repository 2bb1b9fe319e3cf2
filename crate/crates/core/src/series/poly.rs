//! Sparse multivariate polynomials over Q.
//!
//! Monomials are exponent vectors with trailing zeros trimmed, so a
//! polynomial does not carry its number of variables: `x_0` and `x_0 * x_3^0`
//! are the same key. This lets the constant `1` live in every ring `Q[x_0..]`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::ring::rational_to_f64;
use crate::ratlinalg::Rational;

pub type Monomial = Vec<u32>;

fn trim(mut m: Monomial) -> Monomial {
    while m.last() == Some(&0) {
        m.pop();
    }
    m
}

fn mono_mul(a: &[u32], b: &[u32]) -> Monomial {
    let n = a.len().max(b.len());
    let m = (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect();
    trim(m)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

/// Polynomial in the symbol `t`; the coefficient ring of constant terms.
pub type TPolynomial = Polynomial;

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::monomial(Vec::new(), c)
    }

    /// The variable `x_i`.
    pub fn variable(i: usize) -> Self {
        let mut m = vec![0; i + 1];
        m[i] = 1;
        Polynomial::monomial(m, Rational::one())
    }

    pub fn monomial(exponents: Monomial, coeff: Rational) -> Self {
        let mut p = Polynomial::zero();
        if !coeff.is_zero() {
            p.terms.insert(trim(exponents), coeff);
        }
        p
    }

    /// `sum_i c_i x_i`
    pub fn linear(coeffs: &[Rational]) -> Self {
        let mut p = Polynomial::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(
                {
                    let mut m = vec![0; i + 1];
                    m[i] = 1;
                    m
                },
                c.clone(),
            );
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let m = trim(m);
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &[u32]) -> Rational {
        self.terms
            .get(&trim(m.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&[])
    }

    /// Number of variables actually used.
    pub fn num_vars(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    /// Degree if every term has the same total degree.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| m.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// `(min, max)` exponent of variable `var` over all terms.
    pub fn degree_range(&self, var: usize) -> Option<(u32, u32)> {
        let mut it = self.terms.keys().map(|m| m.get(var).copied().unwrap_or(0));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut p = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                p.add_term(mono_mul(ma, mb), ca * cb);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Polynomial::one(), |acc, _| acc.mul(self))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().enumerate().fold(c.clone(), |acc, (i, &e)| {
                    let x = point.get(i).cloned().unwrap_or_else(Rational::zero);
                    acc * num_traits::pow(x, e as usize)
                })
            })
            .sum()
    }

    pub fn evaluate_complex(&self, point: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter().enumerate().fold(
                    Complex64::new(rational_to_f64(c), 0.0),
                    |acc, (i, &e)| {
                        let x = point.get(i).copied().unwrap_or_default();
                        acc * x.powu(e)
                    },
                )
            })
            .sum()
    }

    /// Substitutes `x_j -> images[j]`.
    pub fn substitute(&self, images: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(c.clone());
            for (j, &e) in m.iter().enumerate() {
                if e > 0 {
                    let img = images.get(j).cloned().unwrap_or_else(Polynomial::zero);
                    term = term.mul(&img.pow(e));
                }
            }
            out.add_assign(&term);
        }
        out
    }

    /// `p(x + offset)`
    pub fn shift(&self, offset: &[Rational]) -> Polynomial {
        let n = self.num_vars().max(offset.len());
        let images: Vec<Polynomial> = (0..n)
            .map(|j| {
                Polynomial::variable(j).add(&Polynomial::constant(
                    offset.get(j).cloned().unwrap_or_else(Rational::zero),
                ))
            })
            .collect();
        self.substitute(&images)
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.get(var).copied().unwrap_or(0);
            if e > 0 {
                let mut m2 = m.clone();
                m2[var] -= 1;
                p.add_term(m2, c * Rational::from_integer(e.into()));
            }
        }
        p
    }

    /// Directional derivative `sum_j v_j d/dx_j`.
    pub fn directional_derivative(&self, v: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (j, vj) in v.iter().enumerate() {
            if !vj.is_zero() {
                p.add_assign(&self.derivative(j).scale(vj));
            }
        }
        p
    }

    /// Applies the constant-coefficient operator `op(d/dx)` to `self`.
    pub fn apply_operator(&self, op: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &op.terms {
            let mut d = self.clone();
            for (j, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    d = d.derivative(j);
                }
            }
            out.add_assign(&d.scale(c));
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for (i, &e) in m.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*t{}", i + 1)?,
                    _ => write!(f, "*t{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rat;

    #[test]
    fn trailing_zeros_do_not_matter() {
        let a = Polynomial::monomial(vec![1, 0, 0], rat(1, 1));
        let b = Polynomial::variable(0);
        assert_eq!(a, b);
    }

    #[test]
    fn shift_and_derivative() {
        // (t - 1)^2 = t^2 - 2t + 1
        let t = Polynomial::variable(0);
        let p = t.mul(&t).shift(&[rat(-1, 1)]);
        assert_eq!(p.coefficient(&[2]), rat(1, 1));
        assert_eq!(p.coefficient(&[1]), rat(-2, 1));
        assert_eq!(p.constant_term(), rat(1, 1));
        assert_eq!(p.derivative(0).coefficient(&[1]), rat(2, 1));
    }

    #[test]
    fn operator_application() {
        // (d/dx)(d/dy) applied to x^2 y = 2x
        let p = Polynomial::monomial(vec![2, 1], rat(1, 1));
        let op = Polynomial::monomial(vec![1, 1], rat(1, 1));
        assert_eq!(p.apply_operator(&op), Polynomial::monomial(vec![1], rat(2, 1)));
    }
}
