use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::ratlinalg::Rational;
use crate::series::Polynomial;

/// `E_k(t, z) = e^{[t] z} P(t, u)` with `u = 1 / (1 - e^{-z})`, valid on the
/// unit interval containing `t`. `P` uses variable 0 for `t`, 1 for `u`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneDEisenstein {
    pub k: i64,
    pub floor: BigInt,
    pub polynomial: Polynomial,
}

impl OneDEisenstein {
    pub fn evaluate(&self, t: f64, z: Complex64) -> Complex64 {
        let u = 1.0 / (1.0 - (-z).exp());
        let fl = self.floor.to_f64().unwrap_or(f64::NAN);
        (z * fl).exp() * self.polynomial.evaluate_complex(&[Complex64::new(t, 0.0), u])
    }

    /// Exact evaluation of `P` at a rational `t`, as a polynomial in `u`.
    pub fn at(&self, t: &Rational) -> Polynomial {
        self.polynomial.substitute(&[Polynomial::constant(t.clone()), Polynomial::variable(0)])
    }
}

/// Closed form of `sum_n e^{t (z + 2 i pi n)} (z + 2 i pi n)^k` for `k <= -1`,
/// from `E_{-1} = e^{[t] z} / (1 - e^{-z})` and
/// `d/dz E_k = t E_k + k E_{k-1}`.
pub fn one_d_eisenstein(k: i64, t: &Rational) -> Result<OneDEisenstein> {
    if k > -1 {
        return Err(Error::InvalidInput(format!("k must be at most -1, got {k}")));
    }
    if t.is_integer() {
        return Err(Error::OnWall {
            normal: vec![BigInt::from(1)],
            value: t.clone(),
        });
    }
    let floor = t.floor().to_integer();
    let fl = Polynomial::constant(Rational::from_integer(floor.clone()));
    let tv = Polynomial::variable(0);
    let u = Polynomial::variable(1);
    // d/dz acting through u: u' = u - u^2
    let du = u.sub(&u.mul(&u));
    let mut p = u.clone();
    for j in (k + 1..=-1).rev() {
        // E_{j-1} = (dE_j/dz - t E_j) / j
        let next = fl.sub(&tv).mul(&p).add(&du.mul(&p.derivative(1)));
        p = next.scale(&Rational::new((1).into(), j.into()));
    }
    Ok(OneDEisenstein { k, floor, polynomial: p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rat;

    #[test]
    fn minus_two_closed_form() {
        // (t - [t]) u - u + u^2
        let e = one_d_eisenstein(-2, &rat(1, 4)).unwrap();
        let t = Polynomial::variable(0);
        let u = Polynomial::variable(1);
        let expected = t.mul(&u).sub(&u).add(&u.mul(&u));
        assert_eq!(e.polynomial, expected);
        let e = one_d_eisenstein(-2, &rat(-3, 4)).unwrap();
        assert_eq!(e.floor, BigInt::from(-1));
        assert_eq!(e.polynomial, t.add(&Polynomial::constant(rat(1, 1))).mul(&u).sub(&u).add(&u.mul(&u)));
    }

    #[test]
    fn integer_t_rejected() {
        assert!(one_d_eisenstein(-2, &rat(2, 1)).is_err());
        assert!(one_d_eisenstein(0, &rat(1, 2)).is_err());
    }

    #[test]
    fn minus_two_matches_direct_sum() {
        let t = 0.25;
        let z = Complex64::new(1.0, 0.0);
        let e = one_d_eisenstein(-2, &rat(1, 4)).unwrap().evaluate(t, z);
        let mut s = Complex64::new(0.0, 0.0);
        for n in -20000i64..=20000 {
            let w = z + Complex64::new(0.0, 2.0 * std::f64::consts::PI * n as f64);
            s += (w * t).exp() / (w * w);
        }
        assert!((s - e).norm() < 1e-5, "{s} vs {e}");
    }
}
