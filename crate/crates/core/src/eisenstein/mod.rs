//! Constant terms of Eisenstein series attached to an arrangement.
//!
//! For `f` with poles on the arrangement and `t` in an alcove, the constant
//! term is
//!
//! ```text
//! CT(f)(t) = sum_{o sigma} Res^{o sigma}( e^{<t,z>} f(z) F_sigma(-z) )
//! ```
//!
//! where `F_sigma` is the alcove kernel of `sigma`. It is a polynomial in `t`
//! on each alcove and equals the regularized sum
//! `sum_{n regular} e^{2 i pi <t,n>} f(2 i pi n)`.

mod kernel;
mod one_d;

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

pub use kernel::kernel_eval;
pub use one_d::{one_d_eisenstein, OneDEisenstein};

use crate::arrangement::{
    diagonal_basis, floor_and_box_reps, is_alcove_regular, Arrangement, AlcovePoint,
};
use crate::error::{Error, Result};
use crate::ratlinalg::{rat, Rational};
use crate::residues::{iterated_residue, Factor, RationalFunction, WindowPolicy};
use crate::series::{rational_to_f64, Polynomial, TPolynomial};

/// `index^{-1} sum_{m in R} e^m / prod_{alpha in sigma} (1 - e^{-alpha})`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcoveKernel {
    pub sigma: Vec<usize>,
    pub index: BigInt,
    pub numerator_exponents: Vec<Vec<BigInt>>,
}

pub fn alcove_kernel(arr: &Arrangement, sigma: &[usize], t: &AlcovePoint) -> Result<AlcoveKernel> {
    let (_, reps) = floor_and_box_reps(t.coords(), arr, sigma)?;
    Ok(AlcoveKernel {
        sigma: sigma.to_vec(),
        index: reps.index,
        numerator_exponents: reps.representatives,
    })
}

/// `coefficient * (2 i pi)^two_i_pi_exponent`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPower {
    pub coefficient: Rational,
    pub two_i_pi_exponent: i64,
}

impl PiPower {
    /// For even exponents `k`, the rational `q'` with value `q' (2 pi)^k`.
    pub fn real_two_pi_multiple(&self) -> Option<Rational> {
        if self.two_i_pi_exponent % 2 != 0 {
            return None;
        }
        let sign_flip = (self.two_i_pi_exponent / 2) % 2 != 0;
        Some(if sign_flip {
            -self.coefficient.clone()
        } else {
            self.coefficient.clone()
        })
    }

    pub fn to_complex(&self) -> Complex64 {
        let two_i_pi = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        two_i_pi.powi(self.two_i_pi_exponent as i32) * rational_to_f64(&self.coefficient)
    }
}

impl fmt::Display for PiPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) * (2 i pi)^{}", self.coefficient, self.two_i_pi_exponent)
    }
}

/// Outcome of the window-doubling check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stability {
    /// Unchanged under one doubling.
    Stable,
    /// Changed once, then unchanged under a second doubling.
    StableAfterSecondDoubling,
}

impl Stability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stability::Stable => "stable",
            Stability::StableAfterSecondDoubling => "stable-after-second-doubling",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstantTerm {
    /// Polynomial in `t_1, ..., t_r` (variables `0..r`).
    pub polynomial: TPolynomial,
    pub witness: AlcovePoint,
    pub window_scale: u32,
    pub stability: Stability,
}

impl ConstantTerm {
    pub fn evaluate(&self, t: &[Rational]) -> Rational {
        self.polynomial.evaluate(t)
    }

    pub fn degree(&self) -> Option<u32> {
        self.polynomial.total_degree()
    }
}

/// `sum_{o sigma} index^{-1} sum_{m in R(t, sigma)} P_sigma(t - m)` where
/// `P_sigma(s) = Res^{o sigma}(e^{<s,z>} f(z) / prod_{alpha in sigma}(1 - e^{alpha}))`.
fn constant_term_at_scale(
    f: &RationalFunction,
    arr: &Arrangement,
    t: &AlcovePoint,
    scale: u32,
) -> Result<TPolynomial> {
    let r = arr.rank();
    let db = diagonal_basis(arr)?;
    let policy = WindowPolicy::Scaled(scale);
    let exp = Factor::Exponential {
        linear: (0..r).map(Polynomial::variable).collect(),
    };
    let base: Vec<Factor<TPolynomial>> = f.factors(arr);
    let parts = db
        .members
        .par_iter()
        .map(|ob| -> Result<TPolynomial> {
            let (_, reps) = floor_and_box_reps(t.coords(), arr, &ob.indices)?;
            let mut factors = vec![exp.clone()];
            factors.extend(base.iter().cloned());
            factors.extend(ob.indices.iter().map(|&i| Factor::Todd {
                form: arr.form(i).to_rational(),
                sign: 1,
            }));
            let p = iterated_residue(arr, ob, &factors, &policy)?;
            let mut acc = Polynomial::zero();
            for m in &reps.representatives {
                let shift: Vec<Rational> = m.iter().map(|x| -Rational::from_integer(x.clone())).collect();
                acc.add_assign(&p.shift(&shift));
            }
            Ok(acc.scale(&Rational::new(One::one(), reps.index)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parts.iter().fold(Polynomial::zero(), |acc, p| acc.add(p)))
}

/// The constant-term polynomial of `f` on the alcove of `t`, checked for
/// stability under window doubling.
pub fn constant_term(
    f: &RationalFunction,
    arr: &Arrangement,
    t: &AlcovePoint,
    window_scale: u32,
) -> Result<ConstantTerm> {
    f.validate(arr)?;
    let s = window_scale.max(1);
    let first = constant_term_at_scale(f, arr, t, s)?;
    let second = constant_term_at_scale(f, arr, t, 2 * s)?;
    let (polynomial, stability) = if first == second {
        (first, Stability::Stable)
    } else {
        let third = constant_term_at_scale(f, arr, t, 4 * s)?;
        if third != second {
            return Err(Error::StabilityFailure);
        }
        (third, Stability::StableAfterSecondDoubling)
    };
    Ok(ConstantTerm {
        polynomial,
        witness: t.clone(),
        window_scale: s,
        stability,
    })
}

/// Where a normalized sum is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SumPoint {
    At(Vec<Rational>),
    /// Limit `t -> 0` through the alcove of the given point, or through a
    /// default alcove adjacent to the origin.
    LimitZero(Option<Vec<Rational>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedSum {
    pub value: PiPower,
    pub constant_term: ConstantTerm,
    pub limit_zero: bool,
}

/// `sum_{n regular} e^{2 i pi <t, n>} f(n)` as an exact multiple of a power
/// of `2 i pi`.
pub fn normalized_sum(
    f: &RationalFunction,
    arr: &Arrangement,
    point: &SumPoint,
    window_scale: u32,
) -> Result<NormalizedSum> {
    f.validate(arr)?;
    let degree = f.degree().ok_or_else(|| {
        Error::InvalidInput("numerator must be a non-zero homogeneous polynomial".into())
    })?;
    let (witness, limit_zero) = match point {
        SumPoint::At(t) => (AlcovePoint::new(t.clone(), arr)?, false),
        SumPoint::LimitZero(choice) => {
            check_convergence(f, arr)?;
            let w = match choice {
                Some(t) => AlcovePoint::new(t.clone(), arr)?,
                None => default_limit_point(arr)?,
            };
            w.check_adjacent_to_origin(arr)?;
            (w, true)
        }
    };
    let ct = constant_term(f, arr, &witness, window_scale)?;
    let at = if limit_zero {
        vec![Rational::zero(); arr.rank()]
    } else {
        witness.coords().to_vec()
    };
    Ok(NormalizedSum {
        value: PiPower {
            coefficient: ct.evaluate(&at),
            two_i_pi_exponent: -degree,
        },
        constant_term: ct,
        limit_zero,
    })
}

/// Absolute convergence of `sum' P(n) / prod <alpha, n>^m`: for every flat
/// `U` spanned by denominator forms with `dim U < r`, the forms outside `U`
/// must carry total multiplicity above `deg P + r - dim U`.
pub fn check_convergence(f: &RationalFunction, arr: &Arrangement) -> Result<()> {
    let (margin, flat, dim) = f.convergence_margin(arr);
    if margin <= 0 {
        return Err(Error::NonConvergent(format!(
            "forms outside the flat spanned by {flat:?} (dimension {dim}) carry too little multiplicity (margin {margin})"
        )));
    }
    Ok(())
}

/// `t = eps (1, 1/2, ..., 1/r)` with `eps = 1/1000`, perturbed
/// deterministically until it is regular and adjacent to the origin.
pub fn default_limit_point(arr: &Arrangement) -> Result<AlcovePoint> {
    let r = arr.rank() as i64;
    for attempt in 0..200i64 {
        let t: Vec<Rational> = (1..=r)
            .map(|j| rat(1, 1000) / (Rational::from_integer(j.into()) + rat(attempt * j, 7 * j * j + 3)))
            .collect();
        if !is_alcove_regular(&t, arr) {
            continue;
        }
        let p = AlcovePoint::new(t, arr)?;
        if p.check_adjacent_to_origin(arr).is_ok() {
            return Ok(p);
        }
    }
    Err(Error::NonRegularPoint(
        "no regular point adjacent to the origin found".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::int;

    fn line() -> Arrangement {
        Arrangement::from_coords(1, &[vec![1]]).unwrap()
    }

    fn a2() -> Arrangement {
        Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    fn t(v: f64) -> Polynomial {
        Polynomial::constant(Rational::from_float(v).unwrap())
    }

    #[test]
    fn kernel_examples() {
        let arr = line();
        let k = alcove_kernel(&arr, &[0], &AlcovePoint::new(vec![rat(1, 2)], &arr).unwrap()).unwrap();
        assert_eq!(k.numerator_exponents, vec![vec![BigInt::zero()]]);
        let k = alcove_kernel(&arr, &[0], &AlcovePoint::new(vec![rat(-1, 2)], &arr).unwrap()).unwrap();
        assert_eq!(k.numerator_exponents, vec![vec![BigInt::from(-1)]]);
    }

    #[test]
    fn constant_term_of_inverse() {
        let arr = line();
        let p = AlcovePoint::new(vec![rat(1, 3)], &arr).unwrap();
        let ct = constant_term(&RationalFunction::inverse_product(vec![(0, 1)]), &arr, &p, 1).unwrap();
        assert_eq!(ct.polynomial, t(0.5).sub(&Polynomial::variable(0)));
        assert_eq!(ct.stability, Stability::Stable);
    }

    #[test]
    fn constant_term_of_inverse_square() {
        let arr = line();
        let p = AlcovePoint::new(vec![rat(1, 3)], &arr).unwrap();
        let ct = constant_term(&RationalFunction::inverse_product(vec![(0, 2)]), &arr, &p, 1).unwrap();
        let x = Polynomial::variable(0);
        let b2 = x.mul(&x).sub(&x).add(&Polynomial::constant(rat(1, 6)));
        assert_eq!(ct.polynomial, b2.scale(&rat(-1, 2)));
    }

    #[test]
    fn constant_term_is_periodic() {
        // the alcove (1, 2) gives the shifted polynomial
        let arr = line();
        let f = RationalFunction::inverse_product(vec![(0, 2)]);
        let a = constant_term(&f, &arr, &AlcovePoint::new(vec![rat(1, 3)], &arr).unwrap(), 1).unwrap();
        let b = constant_term(&f, &arr, &AlcovePoint::new(vec![rat(4, 3)], &arr).unwrap(), 1).unwrap();
        assert_eq!(a.evaluate(&[rat(1, 3)]), b.evaluate(&[rat(4, 3)]));
        assert_ne!(a.polynomial, b.polynomial);
    }

    #[test]
    fn zagier_sum() {
        let f = RationalFunction::inverse_product(vec![(0, 2), (1, 2), (2, 2)]);
        let s = normalized_sum(&f, &a2(), &SumPoint::LimitZero(None), 1).unwrap();
        assert_eq!(s.value.coefficient, rat(-1, 30240));
        assert_eq!(s.value.two_i_pi_exponent, 6);
        assert_eq!(s.value.real_two_pi_multiple(), Some(rat(1, 30240)));
    }

    #[test]
    fn zeta_two() {
        let f = RationalFunction::inverse_product(vec![(0, 2)]);
        let s = normalized_sum(&f, &line(), &SumPoint::LimitZero(None), 1).unwrap();
        assert_eq!(s.value.coefficient, rat(-1, 12));
        assert_eq!(s.value.real_two_pi_multiple(), Some(rat(1, 12)));
    }

    #[test]
    fn divergent_limit_rejected() {
        let f = RationalFunction::inverse_product(vec![(0, 2), (1, 1)]);
        assert!(matches!(
            normalized_sum(&f, &a2(), &SumPoint::LimitZero(None), 1),
            Err(Error::NonConvergent(_))
        ));
        // total multiplicity 4 > 3 but the line through z1 carries only 1
        let g = RationalFunction::inverse_product(vec![(0, 3), (1, 1)]);
        assert!(matches!(
            normalized_sum(&g, &a2(), &SumPoint::LimitZero(None), 1),
            Err(Error::NonConvergent(_))
        ));
    }

    #[test]
    fn odd_convergent_sum_vanishes() {
        // sum' 1/(n1 n2 (n1 + n2)) converges absolutely and is odd in n
        let f = RationalFunction::inverse_product(vec![(0, 1), (1, 1), (2, 1)]);
        let s = normalized_sum(&f, &a2(), &SumPoint::LimitZero(None), 1).unwrap();
        assert_eq!(s.value.coefficient, rat(0, 1));
    }

    #[test]
    fn far_limit_point_rejected() {
        let f = RationalFunction::inverse_product(vec![(0, 2)]);
        assert!(matches!(
            normalized_sum(&f, &line(), &SumPoint::LimitZero(Some(vec![rat(3, 2)])), 1),
            Err(Error::NotAdjacentToOrigin { .. })
        ));
        let ok = normalized_sum(&f, &line(), &SumPoint::LimitZero(Some(vec![rat(-1, 2)])), 1).unwrap();
        assert_eq!(ok.value.coefficient, rat(-1, 12));
    }

    #[test]
    fn wall_point_rejected() {
        let f = RationalFunction::inverse_product(vec![(0, 2)]);
        assert!(matches!(
            normalized_sum(&f, &line(), &SumPoint::At(vec![int(1)]), 1),
            Err(Error::OnWall { .. })
        ));
    }
}
