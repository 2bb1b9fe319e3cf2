//! Rational functions with poles on the arrangement, iterated residues and
//! the Jeffrey-Kirwan residue.

mod decompose;
mod engine;

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use decompose::{decompose_to_basis_fractions, BasisFraction};
pub use engine::{iterated_residue, Factor, TaylorCoeffs, WindowPolicy};

use crate::arrangement::{diagonal_basis, Arrangement, DiagonalBasis, OrderedBasis};
use crate::error::{Error, Result};
use crate::ratlinalg::Rational;
use crate::series::{rational_to_f64, Polynomial};

/// `numerator / prod_k alpha_k^{m_k}`, numerator in lattice coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Polynomial,
    /// Sorted by form index; multiplicities positive.
    denominator: Vec<(usize, u32)>,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Vec<(usize, u32)>) -> Self {
        let mut merged: BTreeMap<usize, u32> = BTreeMap::new();
        for (i, m) in denominator {
            if m > 0 {
                *merged.entry(i).or_insert(0) += m;
            }
        }
        RationalFunction {
            numerator,
            denominator: merged.into_iter().collect(),
        }
    }

    /// `1 / prod alpha_k^{m_k}`
    pub fn inverse_product(denominator: Vec<(usize, u32)>) -> Self {
        RationalFunction::new(Polynomial::one(), denominator)
    }

    /// The simple fraction of a basis.
    pub fn simple_fraction(sigma: &[usize]) -> Self {
        RationalFunction::inverse_product(sigma.iter().map(|&i| (i, 1)).collect())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &[(usize, u32)] {
        &self.denominator
    }

    pub fn pole_order(&self) -> u32 {
        self.denominator.iter().map(|(_, m)| m).sum()
    }

    /// Homogeneous degree, if the numerator is homogeneous and non-zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.numerator.homogeneous_degree()? as i64 - self.pole_order() as i64)
    }

    pub fn validate(&self, arr: &Arrangement) -> Result<()> {
        if let Some(&(i, _)) = self.denominator.iter().find(|(i, _)| *i >= arr.len()) {
            return Err(Error::InvalidInput(format!(
                "denominator refers to form {i}, arrangement has {}",
                arr.len()
            )));
        }
        if self.numerator.num_vars() > arr.rank() {
            return Err(Error::RankMismatch {
                expected: arr.rank(),
                found: self.numerator.num_vars(),
            });
        }
        Ok(())
    }

    /// True if the denominator forms span the ambient space.
    pub fn is_generating(&self, arr: &Arrangement) -> bool {
        let idx: Vec<usize> = self.denominator.iter().map(|(i, _)| *i).collect();
        arr.rank_of(&idx) == arr.rank()
    }

    /// Smallest value over flats `U` (spans of denominator forms, `dim U < r`)
    /// of `sum_{alpha not in U} m_alpha - deg P - (r - dim U)`, with the
    /// minimizing flat and its dimension. The lattice sum of `f` converges
    /// absolutely iff this is positive.
    pub fn convergence_margin(&self, arr: &Arrangement) -> (i64, Vec<usize>, usize) {
        let r = arr.rank();
        let deg_p = self.numerator.total_degree().unwrap_or(0) as i64;
        let support: Vec<usize> = self.denominator.iter().map(|(i, _)| *i).collect();
        let mut seen: Vec<Vec<usize>> = Vec::new();
        let mut worst: Option<(i64, Vec<usize>, usize)> = None;
        for mask in 0u64..(1u64 << support.len()) {
            let gens: Vec<usize> = (0..support.len())
                .filter(|k| mask & (1 << k) != 0)
                .map(|k| support[k])
                .collect();
            let dim = arr.rank_of(&gens);
            if dim >= r {
                continue;
            }
            let flat: Vec<usize> = support
                .iter()
                .copied()
                .filter(|&a| {
                    let mut g = gens.clone();
                    g.push(a);
                    arr.rank_of(&g) == dim
                })
                .collect();
            if seen.contains(&flat) {
                continue;
            }
            let outside: i64 = self
                .denominator
                .iter()
                .filter(|(i, _)| !flat.contains(i))
                .map(|(_, m)| *m as i64)
                .sum();
            let margin = outside - deg_p - (r - dim) as i64;
            if worst.as_ref().is_none_or(|(w, _, _)| margin < *w) {
                worst = Some((margin, flat.clone(), dim));
            }
            seen.push(flat);
        }
        worst.expect("the empty flat is always present")
    }

    pub fn mul_polynomial(&self, p: &Polynomial) -> Self {
        RationalFunction {
            numerator: self.numerator.mul(p),
            denominator: self.denominator.clone(),
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        RationalFunction {
            numerator: self.numerator.scale(q),
            denominator: self.denominator.clone(),
        }
    }

    /// `d/dv` as a single fraction: each multiplicity grows by one.
    pub fn derivative(&self, arr: &Arrangement, v: &[Rational]) -> Self {
        let forms: Vec<Polynomial> = self
            .denominator
            .iter()
            .map(|&(i, _)| Polynomial::linear(&arr.form(i).to_rational()))
            .collect();
        let all: Polynomial = forms.iter().fold(Polynomial::one(), |acc, f| acc.mul(f));
        let mut num = self.numerator.directional_derivative(v).mul(&all);
        for (k, &(i, m)) in self.denominator.iter().enumerate() {
            let dv = arr.form(i).pair(v);
            if dv.is_zero() {
                continue;
            }
            let others = forms
                .iter()
                .enumerate()
                .filter(|(l, _)| *l != k)
                .fold(Polynomial::one(), |acc, (_, f)| acc.mul(f));
            let c = -(dv * Rational::from_integer(m.into()));
            num = num.add(&self.numerator.mul(&others).scale(&c));
        }
        RationalFunction::new(
            num,
            self.denominator.iter().map(|&(i, m)| (i, m + 1)).collect(),
        )
    }

    pub fn evaluate(&self, arr: &Arrangement, y: &[Rational]) -> Result<Rational> {
        let mut den = Rational::one();
        for &(i, m) in &self.denominator {
            let v = arr.form(i).pair(y);
            if v.is_zero() {
                return Err(Error::NonRegularPoint(format!(
                    "form {:?} vanishes at the point",
                    arr.form(i).coords()
                )));
            }
            den *= num_traits::pow(v, m as usize);
        }
        Ok(self.numerator.evaluate(y) / den)
    }

    pub fn evaluate_complex(&self, arr: &Arrangement, y: &[Complex64]) -> Complex64 {
        let mut den = Complex64::one();
        for &(i, m) in &self.denominator {
            let v: Complex64 = arr
                .form(i)
                .coords()
                .iter()
                .zip(y)
                .map(|(&a, b)| b * a as f64)
                .sum();
            den *= v.powu(m);
        }
        self.numerator.evaluate_complex(y) / den
    }

    /// The factor list of this function for the residue engine.
    pub fn factors<R: crate::series::CoefficientRing>(&self, arr: &Arrangement) -> Vec<Factor<R>> {
        let mut out: Vec<Factor<R>> = self
            .denominator
            .iter()
            .map(|&(i, m)| Factor::InverseForm {
                form: arr.form(i).to_rational(),
                power: m,
            })
            .collect();
        if self.numerator != Polynomial::one() {
            out.push(Factor::Polynomial(self.numerator.clone()));
        }
        out
    }
}

/// An element of the span of the simple fractions of a diagonal basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimpleElement {
    pub terms: BTreeMap<Vec<usize>, Rational>,
}

impl SimpleElement {
    pub fn coefficient(&self, sigma: &[usize]) -> Rational {
        self.terms.get(sigma).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, q: &Rational) -> SimpleElement {
        SimpleElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * q))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// `sum_sigma c_sigma phi_sigma(y)`
    pub fn evaluate(&self, arr: &Arrangement, y: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (sigma, c) in &self.terms {
            acc += c * RationalFunction::simple_fraction(sigma).evaluate(arr, y)?;
        }
        Ok(acc)
    }

    pub fn evaluate_complex(&self, arr: &Arrangement, y: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(sigma, c)| {
                RationalFunction::simple_fraction(sigma).evaluate_complex(arr, y) * rational_to_f64(c)
            })
            .sum()
    }
}

/// Jeffrey-Kirwan residue over the diagonal basis of the list order.
pub fn jk_residue(f: &RationalFunction, arr: &Arrangement) -> Result<SimpleElement> {
    let db = diagonal_basis(arr)?;
    jk_residue_with(f, arr, &db, &WindowPolicy::default())
}

/// `sum_{o sigma} Res^{o sigma}(f) phi_sigma` over a given diagonal basis.
pub fn jk_residue_with(
    f: &RationalFunction,
    arr: &Arrangement,
    db: &DiagonalBasis,
    policy: &WindowPolicy,
) -> Result<SimpleElement> {
    f.validate(arr)?;
    let factors = f.factors::<Rational>(arr);
    let values = db
        .members
        .par_iter()
        .map(|ob| iterated_residue(arr, ob, &factors, policy))
        .collect::<Result<Vec<_>>>()?;
    let terms = db
        .members
        .iter()
        .zip(values)
        .filter(|(_, v)| !v.is_zero())
        .map(|(ob, v)| (ob.indices.clone(), v))
        .collect();
    Ok(SimpleElement { terms })
}

/// `[Res^{o tau}(phi_sigma)]` over the members of `db`, rows indexed by `tau`.
pub fn duality_matrix(arr: &Arrangement, db: &DiagonalBasis) -> Result<Vec<Vec<Rational>>> {
    duality_matrix_with(arr, db, &WindowPolicy::default())
}

pub fn duality_matrix_with(
    arr: &Arrangement,
    db: &DiagonalBasis,
    policy: &WindowPolicy,
) -> Result<Vec<Vec<Rational>>> {
    db.members
        .par_iter()
        .map(|tau| {
            db.members
                .iter()
                .map(|sigma| {
                    let f = RationalFunction::simple_fraction(&sigma.indices);
                    iterated_residue(arr, tau, &f.factors::<Rational>(arr), policy)
                })
                .collect()
        })
        .collect()
}

/// Iterated residue of a rational function along one ordered basis.
pub fn iterated_residue_of(
    f: &RationalFunction,
    arr: &Arrangement,
    osigma: &OrderedBasis,
) -> Result<Rational> {
    f.validate(arr)?;
    iterated_residue(arr, osigma, &f.factors::<Rational>(arr), &WindowPolicy::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::{int, rat};

    fn a2() -> Arrangement {
        Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn jk_of_simple_fractions() {
        let arr = a2();
        let f = RationalFunction::simple_fraction(&[0, 1]);
        let s = jk_residue(&f, &arr).unwrap();
        assert_eq!(s.coefficient(&[0, 1]), rat(1, 1));
        assert_eq!(s.coefficient(&[0, 2]), rat(0, 1));
        // phi_{z2, z1+z2} = phi_{z1,z2} - phi_{z1,z1+z2}
        let g = RationalFunction::simple_fraction(&[1, 2]);
        let s = jk_residue(&g, &arr).unwrap();
        assert_eq!(s.coefficient(&[0, 1]), rat(1, 1));
        assert_eq!(s.coefficient(&[0, 2]), rat(-1, 1));
    }

    #[test]
    fn jk_vanishes_off_degree() {
        let f = RationalFunction::inverse_product(vec![(0, 1), (1, 1), (2, 1)]);
        assert!(jk_residue(&f, &a2()).unwrap().is_zero());
    }

    #[test]
    fn derivative_matches_difference_quotient_shape() {
        let arr = a2();
        let f = RationalFunction::inverse_product(vec![(0, 1), (2, 2)]);
        let d = f.derivative(&arr, &[int(1), int(0)]);
        // d/dz1 of 1/(z1 (z1+z2)^2) at (1, 1): -1/(z1^2 s^2) - 2/(z1 s^3) = -1/4 - 1/4
        assert_eq!(d.evaluate(&arr, &[int(1), int(1)]).unwrap(), rat(-1, 2));
    }

    #[test]
    fn evaluation_on_hyperplane_is_an_error() {
        let f = RationalFunction::simple_fraction(&[0, 1]);
        assert!(f.evaluate(&a2(), &[int(0), int(1)]).is_err());
    }
}
