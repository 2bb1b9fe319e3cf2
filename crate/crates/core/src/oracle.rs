//! Brute-force evaluation of Eisenstein sums over a truncated lattice box.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::ratlinalg::Rational;
use crate::residues::RationalFunction;
use crate::series::rational_to_f64;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSum {
    pub value: Complex64,
    pub radius: u64,
    /// Estimated size of the omitted terms; infinite when no estimate applies.
    pub tail_bound: f64,
    pub terms: u64,
}

/// Neumaier-compensated accumulator.
#[derive(Clone, Copy, Debug, Default)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct RowSum {
    re: Compensated,
    im: Compensated,
    outer_shell: f64,
    inner_shell: f64,
    terms: u64,
}

/// `sum_{max |n_j| <= R} e^{<t, z + 2 i pi n>} f(z + 2 i pi n)`.
///
/// With `z = 0` only regular `n` (no denominator form vanishing) are summed.
/// The tail estimate extrapolates the outermost shell sums of `|summand|`
/// with the decay rate implied by the convergence margin of `f`.
pub fn lattice_sum(
    f: &RationalFunction,
    arr: &Arrangement,
    t: &[Rational],
    z: &[Complex64],
    radius: u64,
    tail: bool,
) -> Result<TruncatedSum> {
    f.validate(arr)?;
    let r = arr.rank();
    if t.len() != r || z.len() != r {
        return Err(Error::RankMismatch {
            expected: r,
            found: if t.len() != r { t.len() } else { z.len() },
        });
    }
    let at_origin = z.iter().all(|c| c.re == 0.0 && c.im == 0.0);
    let (margin, _, _) = f.convergence_margin(arr);
    if tail && at_origin && margin <= 0 {
        return Err(Error::NonConvergent(format!(
            "convergence margin {margin} is not positive"
        )));
    }
    let big_r = radius as i64;
    // fractional parts keep the phases accurate for large n
    let t_frac: Vec<f64> = t
        .iter()
        .map(|x| rational_to_f64(&(x - x.floor())))
        .collect();
    let t_f: Vec<f64> = t.iter().map(rational_to_f64).collect();
    let prefactor: Complex64 = t_f.iter().zip(z).map(|(a, b)| b * a).sum::<Complex64>().exp();
    let forms: Vec<&[i64]> = f.denominator().iter().map(|(i, _)| arr.form(*i).coords()).collect();

    let rows: Vec<Result<RowSum>> = (-big_r..=big_r)
        .into_par_iter()
        .map(|n0| {
            let mut row = RowSum::default();
            let mut n = vec![0i64; r];
            n[0] = n0;
            let inner = if r > 1 { (2 * big_r + 1).pow(r as u32 - 1) } else { 1 };
            for idx in 0..inner {
                let mut rest = idx;
                let span = 2 * big_r + 1;
                for nj in n.iter_mut().skip(1) {
                    *nj = (rest % span) - big_r;
                    rest /= span;
                }
                if at_origin
                    && forms
                        .iter()
                        .any(|a| a.iter().zip(&n).map(|(x, y)| x * y).sum::<i64>() == 0)
                {
                    continue;
                }
                let w: Vec<Complex64> = z
                    .iter()
                    .zip(&n)
                    .map(|(zj, &nj)| zj + Complex64::new(0.0, 2.0 * PI * nj as f64))
                    .collect();
                let fv = f.evaluate_complex(arr, &w);
                if !fv.is_finite() {
                    return Err(Error::NonRegularPoint(format!(
                        "f has a pole at z + 2 i pi n for n = {n:?}"
                    )));
                }
                let phase: f64 = t_frac.iter().zip(&n).map(|(a, &b)| a * b as f64).sum();
                let frac = phase - phase.floor();
                let term = prefactor * Complex64::from_polar(1.0, 2.0 * PI * frac) * fv;
                row.re.add(term.re);
                row.im.add(term.im);
                row.terms += 1;
                let shell = n.iter().map(|x| x.abs()).max().unwrap_or(0);
                if shell == big_r {
                    row.outer_shell += term.norm();
                } else if shell == big_r - 1 {
                    row.inner_shell += term.norm();
                }
            }
            Ok(row)
        })
        .collect();

    let mut re = Compensated::default();
    let mut im = Compensated::default();
    let (mut outer, mut inner, mut terms) = (0.0, 0.0, 0u64);
    for row in rows {
        let row = row?;
        re.add(row.re.value());
        im.add(row.im.value());
        outer += row.outer_shell;
        inner += row.inner_shell;
        terms += row.terms;
    }
    let tail_bound = if margin > 0 && radius > 0 {
        2.0 * radius as f64 * outer.max(inner) / margin as f64
    } else {
        f64::INFINITY
    };
    Ok(TruncatedSum {
        value: Complex64::new(re.value(), im.value()),
        radius,
        tail_bound,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rat;

    fn line() -> Arrangement {
        Arrangement::from_coords(1, &[vec![1]]).unwrap()
    }

    #[test]
    fn zeta_two_partial_sum() {
        let f = RationalFunction::inverse_product(vec![(0, 2)]);
        let s = lattice_sum(&f, &line(), &[rat(0, 1)], &[Complex64::default()], 100_000, true).unwrap();
        assert!((s.value.re + 1.0 / 12.0).abs() < 1e-5);
        assert!(s.value.im.abs() < 1e-12);
        assert!(s.tail_bound > 0.0 && s.tail_bound < 1e-5);
    }

    #[test]
    fn bernoulli_polynomial_value() {
        let f = RationalFunction::inverse_product(vec![(0, 2)]);
        let s = lattice_sum(&f, &line(), &[rat(3, 10)], &[Complex64::default()], 100_000, true).unwrap();
        let expected = -(0.09 - 0.3 + 1.0 / 6.0) / 2.0;
        assert!((s.value.re - expected).abs() < 1e-5);
    }

    #[test]
    fn divergent_request_rejected() {
        let f = RationalFunction::inverse_product(vec![(0, 1)]);
        assert!(matches!(
            lattice_sum(&f, &line(), &[rat(1, 3)], &[Complex64::default()], 10, true),
            Err(Error::NonConvergent(_))
        ));
        assert!(lattice_sum(&f, &line(), &[rat(1, 3)], &[Complex64::default()], 10, false).is_ok());
    }

    #[test]
    fn refinement_within_tail_bound() {
        let arr = Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        let f = RationalFunction::inverse_product(vec![(0, 2), (1, 2), (2, 2)]);
        let t = [rat(0, 1), rat(0, 1)];
        let z = [Complex64::default(); 2];
        let a = lattice_sum(&f, &arr, &t, &z, 20, true).unwrap();
        let b = lattice_sum(&f, &arr, &t, &z, 40, true).unwrap();
        assert!((a.value - b.value).norm() <= a.tail_bound);
        assert!((b.value.re + 1.0 / 30240.0).abs() < 1e-6);
    }
}
