use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::arrangement::{diagonal_basis, floor_and_box_reps, Arrangement, AlcovePoint};
use crate::error::{Error, Result};
use crate::residues::{iterated_residue, Factor, RationalFunction, WindowPolicy};
use crate::series::{rational_to_f64, Polynomial};

/// Values `g^{(n)}(a)` for `n = 0..=upto`, where `g(x) = 1 / (1 - e^{-x})`.
///
/// Uses `g' = g - g^2`, so every derivative is a polynomial in `g`.
fn g_derivatives(a: Complex64, upto: u64) -> Vec<Complex64> {
    let g = 1.0 / (1.0 - (-a).exp());
    let step = Polynomial::variable(0).sub(&Polynomial::variable(0).pow(2));
    let mut p = Polynomial::variable(0);
    let mut out = Vec::with_capacity(upto as usize + 1);
    for n in 0..=upto {
        out.push(p.evaluate_complex(&[g]));
        if n < upto {
            p = p.derivative(0).mul(&step);
        }
    }
    out
}

/// Coefficients of `w^n` in `g(a - w)`.
fn shifted_kernel_coeffs(a: Complex64, upto: u64) -> Arc<dyn Fn(u64) -> Complex64 + Send + Sync> {
    let cached = g_derivatives(a, upto);
    Arc::new(move |n| {
        let d = if (n as usize) < cached.len() {
            cached[n as usize]
        } else {
            g_derivatives(a, n)[n as usize]
        };
        let mut fact = 1.0;
        for k in 2..=n {
            fact *= k as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        d * (sign / fact)
    })
}

fn pair(coords: &[i64], y: &[Complex64]) -> Complex64 {
    coords.iter().zip(y).map(|(&a, b)| b * a as f64).sum()
}

/// Checks `<alpha, y> not in 2 i pi Z` for every form of the arrangement.
fn check_regular(arr: &Arrangement, y: &[Complex64]) -> Result<()> {
    for form in arr.forms() {
        let a = pair(form.coords(), y);
        let n = (a.im / (2.0 * PI)).round();
        let d = a - Complex64::new(0.0, 2.0 * PI * n);
        if d.norm() < 1e-9 {
            return Err(Error::NonRegularPoint(format!(
                "<{:?}, y> = {a} lies in 2 i pi Z",
                form.coords()
            )));
        }
    }
    Ok(())
}

/// Numeric value of `E^t(f)(y) = sum_n e^{<t, y + 2 i pi n>} f(y + 2 i pi n)`
/// through the kernel formula
/// `sum_{o sigma} Res^{o sigma}(e^{<t,z>} f(z) F_sigma(y - z))`.
///
/// `f` must have a constant numerator and a spanning denominator.
pub fn kernel_eval(
    f: &RationalFunction,
    arr: &Arrangement,
    t: &AlcovePoint,
    y: &[Complex64],
) -> Result<Complex64> {
    f.validate(arr)?;
    if y.len() != arr.rank() {
        return Err(Error::RankMismatch { expected: arr.rank(), found: y.len() });
    }
    if f.numerator().num_vars() > 0 {
        return Err(Error::InvalidInput(
            "kernel evaluation requires a constant numerator".into(),
        ));
    }
    if !f.is_generating(arr) {
        return Err(Error::NotGenerating);
    }
    check_regular(arr, y)?;
    let db = diagonal_basis(arr)?;
    let base: Vec<Factor<Complex64>> = f.factors(arr);
    let upto = f.pole_order() as u64;
    let mut total = Complex64::new(0.0, 0.0);
    for ob in &db.members {
        let (_, reps) = floor_and_box_reps(t.coords(), arr, &ob.indices)?;
        let taylor: Vec<Factor<Complex64>> = ob
            .indices
            .iter()
            .map(|&i| {
                let a = pair(arr.form(i).coords(), y);
                Factor::Taylor {
                    form: arr.form(i).to_rational(),
                    coeffs: shifted_kernel_coeffs(a, upto),
                }
            })
            .collect();
        let mut part = Complex64::new(0.0, 0.0);
        for m in &reps.representatives {
            let mf: Vec<f64> = m.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect();
            let linear: Vec<Complex64> = t
                .coords()
                .iter()
                .zip(&mf)
                .map(|(tj, mj)| Complex64::new(rational_to_f64(tj) - mj, 0.0))
                .collect();
            let mut factors = vec![Factor::Exponential { linear }];
            factors.extend(base.iter().cloned());
            factors.extend(taylor.iter().cloned());
            let res = iterated_residue(arr, ob, &factors, &WindowPolicy::default())?;
            let em: Complex64 = mf.iter().zip(y).map(|(a, b)| b * a).sum::<Complex64>().exp();
            part += res * em;
        }
        let index = reps.index.to_f64().unwrap_or(f64::NAN);
        total += part / index;
    }
    Ok(total)
}
