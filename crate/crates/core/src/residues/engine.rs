//! Iterated residues of products of expandable factors.
//!
//! Every factor is rewritten in the coordinates `w_i = <alpha_i, z>` of the
//! ordered basis and expanded as a nested Laurent series. The exponent
//! windows are derived from the factor shapes, innermost variable first, so
//! that the truncated product is exact at `w^(-1, ..., -1)`.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::arrangement::{Arrangement, OrderedBasis};
use crate::error::{Error, Result};
use crate::ratlinalg::{rational_inverse, Rational};
use crate::series::{
    expand_exponential, expand_form_series, polynomial_series, todd_coefficient, CoefficientRing,
    FormInCoords, NestedSeries, Polynomial, Window,
};

pub type TaylorCoeffs<R> = Arc<dyn Fn(u64) -> R + Send + Sync>;

/// One factor of an integrand. Forms, linear parts and polynomials are given
/// in lattice coordinates.
#[derive(Clone)]
pub enum Factor<R> {
    /// `<form, z>^(-power)`
    InverseForm { form: Vec<Rational>, power: u32 },
    /// `1 / (1 - e^{sign <form, z>})`
    Todd { form: Vec<Rational>, sign: i8 },
    /// `e^{sum_j linear_j z_j}`
    Exponential { linear: Vec<R> },
    Polynomial(Polynomial),
    /// `sum_{n >= 0} coeffs(n) <form, z>^n`
    Taylor { form: Vec<Rational>, coeffs: TaylorCoeffs<R> },
}

impl<R: fmt::Debug> fmt::Debug for Factor<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::InverseForm { form, power } => write!(f, "InverseForm({form:?}, {power})"),
            Factor::Todd { form, sign } => write!(f, "Todd({form:?}, {sign})"),
            Factor::Exponential { linear } => write!(f, "Exponential({linear:?})"),
            Factor::Polynomial(p) => write!(f, "Polynomial({p})"),
            Factor::Taylor { form, .. } => write!(f, "Taylor({form:?})"),
        }
    }
}

/// How series windows are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowPolicy {
    /// Derived windows, each widened to `scale` times its width.
    Scaled(u32),
    /// A caller-supplied window used for every factor and partial product.
    Fixed(Window),
}

impl Default for WindowPolicy {
    fn default() -> Self {
        WindowPolicy::Scaled(1)
    }
}

enum FormKind<R> {
    Inverse(u32),
    Todd(i8),
    Taylor(TaylorCoeffs<R>),
}

enum Local<R> {
    Form { form: FormInCoords, kind: FormKind<R> },
    Exp(Vec<R>),
    Poly(Polynomial),
}

impl<R> Local<R> {
    fn min_power(&self) -> i64 {
        match self {
            Local::Form { kind: FormKind::Inverse(p), .. } => -(*p as i64),
            Local::Form { kind: FormKind::Todd(_), .. } => -1,
            _ => 0,
        }
    }
}

struct Plan {
    lo: Vec<Vec<i64>>,
    hi: Vec<Vec<i64>>,
    fixed: Vec<Vec<bool>>,
}

const UNBOUNDED: i64 = i64::MAX / 4;

/// Per-factor exponent boxes that contain every term able to reach
/// `w^(-1, ..., -1)`. `None` when no term can.
fn plan_windows<R: CoefficientRing>(locals: &[Local<R>], rank: usize, scale: i64) -> Option<Plan> {
    let n = locals.len();
    let mut lo = vec![vec![0i64; rank]; n];
    let mut hi = vec![vec![0i64; rank]; n];
    let mut fixed = vec![vec![false; rank]; n];
    for j in (0..rank).rev() {
        let mut cap = vec![UNBOUNDED; n];
        for (i, f) in locals.iter().enumerate() {
            match f {
                Local::Form { form, .. } => {
                    if !form.involves(j) {
                        fixed[i][j] = true;
                    } else if j == form.lead() && f.min_power() < 0 {
                        let inner: i64 = (j + 1..rank)
                            .filter(|&k| form.involves(k))
                            .map(|k| hi[i][k])
                            .sum();
                        lo[i][j] = f.min_power() - inner;
                    }
                }
                Local::Exp(lin) => fixed[i][j] = lin[j].is_ring_zero(),
                Local::Poly(p) => {
                    let (a, b) = p.degree_range(j).unwrap_or((0, 0));
                    if b == 0 {
                        fixed[i][j] = true;
                    } else {
                        lo[i][j] = a as i64;
                        cap[i] = b as i64;
                    }
                }
            }
        }
        let total: i64 = (0..n).map(|i| lo[i][j]).sum();
        if total > -1 {
            return None;
        }
        for i in 0..n {
            if fixed[i][j] {
                continue;
            }
            let h = cap[i].min(-1 - (total - lo[i][j]));
            if h < lo[i][j] {
                return None;
            }
            let widen = (scale - 1) * (h - lo[i][j] + 1);
            lo[i][j] -= widen;
            hi[i][j] = h + widen;
        }
    }
    Some(Plan { lo, hi, fixed })
}

/// `<form, z>` rewritten in ordered-basis coordinates, using the inverse of
/// the basis matrix.
fn to_basis_coords(form: &[Rational], ainv: &[Vec<Rational>]) -> Vec<Rational> {
    let r = ainv.len();
    (0..r)
        .map(|i| (0..r).map(|j| &form[j] * &ainv[j][i]).sum())
        .collect()
}

fn localize<R: CoefficientRing>(
    factor: &Factor<R>,
    ainv: &[Vec<Rational>],
    rank: usize,
) -> Result<Local<R>> {
    let check = |len: usize| {
        if len != rank {
            Err(Error::RankMismatch { expected: rank, found: len })
        } else {
            Ok(())
        }
    };
    Ok(match factor {
        Factor::InverseForm { form, power } => {
            check(form.len())?;
            Local::Form {
                form: FormInCoords::new(to_basis_coords(form, ainv))?,
                kind: FormKind::Inverse(*power),
            }
        }
        Factor::Todd { form, sign } => {
            check(form.len())?;
            if *sign != 1 && *sign != -1 {
                return Err(Error::InvalidInput(format!("Todd sign must be +1 or -1, got {sign}")));
            }
            Local::Form {
                form: FormInCoords::new(to_basis_coords(form, ainv))?,
                kind: FormKind::Todd(*sign),
            }
        }
        Factor::Taylor { form, coeffs } => {
            check(form.len())?;
            Local::Form {
                form: FormInCoords::new(to_basis_coords(form, ainv))?,
                kind: FormKind::Taylor(coeffs.clone()),
            }
        }
        Factor::Exponential { linear } => {
            check(linear.len())?;
            let w = (0..rank)
                .map(|i| {
                    let mut acc = R::ring_zero();
                    for (j, c) in linear.iter().enumerate() {
                        if !ainv[j][i].is_zero() && !c.is_ring_zero() {
                            acc.add_assign(&c.scale(&ainv[j][i]));
                        }
                    }
                    acc
                })
                .collect();
            Local::Exp(w)
        }
        Factor::Polynomial(p) => {
            if p.num_vars() > rank {
                return Err(Error::RankMismatch { expected: rank, found: p.num_vars() });
            }
            let images: Vec<Polynomial> = (0..rank)
                .map(|j| Polynomial::linear(&ainv[j]))
                .collect();
            Local::Poly(p.substitute(&images))
        }
    })
}

fn expand<R: CoefficientRing>(local: &Local<R>, window: &Window) -> NestedSeries<R> {
    match local {
        Local::Form { form, kind } => match kind {
            FormKind::Inverse(p) => {
                let p = -(*p as i64);
                expand_form_series(form, p, |n| (n == p).then(R::ring_one), window)
            }
            FormKind::Todd(sign) => expand_form_series(
                form,
                -1,
                |m| {
                    let c = todd_coefficient(*sign, m);
                    (!c.is_zero()).then(|| R::from_rational(&c))
                },
                window,
            ),
            FormKind::Taylor(coeffs) => expand_form_series(
                form,
                0,
                |n| {
                    let c = coeffs(n as u64);
                    (!c.is_ring_zero()).then_some(c)
                },
                window,
            ),
        },
        Local::Exp(lin) => expand_exponential(lin, window),
        Local::Poly(p) => polynomial_series(p, window),
    }
}

/// `Res_{w_1=0}(... Res_{w_r=0}(prod factors))` in the coordinates of `osigma`.
pub fn iterated_residue<R: CoefficientRing>(
    arr: &Arrangement,
    osigma: &OrderedBasis,
    factors: &[Factor<R>],
    policy: &WindowPolicy,
) -> Result<R> {
    let rank = arr.rank();
    let a = arr.rational_rows(&osigma.indices);
    let ainv = rational_inverse(&a).ok_or(Error::Singular)?;
    let locals = factors
        .iter()
        .map(|f| localize(f, &ainv, rank))
        .collect::<Result<Vec<_>>>()?;
    if locals.iter().any(|l| matches!(l, Local::Poly(p) if p.is_zero())) {
        return Ok(R::ring_zero());
    }
    let scale = match policy {
        WindowPolicy::Scaled(s) => (*s).max(1) as i64,
        WindowPolicy::Fixed(_) => 1,
    };
    let Some(plan) = plan_windows(&locals, rank, scale) else {
        return Ok(R::ring_zero());
    };
    let n = locals.len();
    let target = vec![-1i64; rank];
    if n == 0 {
        return Ok(R::ring_zero());
    }

    let factor_window = |i: usize| -> Window {
        match policy {
            WindowPolicy::Fixed(w) => Window::new(
                (0..rank).map(|j| if plan.fixed[i][j] { 0 } else { w.lo[j] }).collect(),
                (0..rank).map(|j| if plan.fixed[i][j] { 0 } else { w.hi[j] }).collect(),
            ),
            WindowPolicy::Scaled(_) => Window::new(plan.lo[i].clone(), plan.hi[i].clone()),
        }
    };
    let partial_window = |m: usize| -> Window {
        let lo: Vec<i64> = (0..rank).map(|j| (0..=m).map(|i| plan.lo[i][j]).sum()).collect();
        let hi: Vec<i64> = (0..rank)
            .map(|j| {
                let sum_hi: i64 = (0..=m).map(|i| plan.hi[i][j]).sum();
                let rest: i64 = (m + 1..n).map(|i| plan.lo[i][j]).sum();
                sum_hi.min(-1 - rest)
            })
            .collect();
        Window::new(lo, hi)
    };

    if let WindowPolicy::Fixed(w) = policy {
        if w.rank() != rank {
            return Err(Error::RankMismatch { expected: rank, found: w.rank() });
        }
        for m in 0..n {
            let need = partial_window(m);
            let own = Window::new(plan.lo[m].clone(), plan.hi[m].clone());
            for needed in [own, need] {
                for j in 0..rank {
                    if needed.lo[j] <= needed.hi[j]
                        && (needed.lo[j] < w.lo[j] || needed.hi[j] > w.hi[j])
                    {
                        return Err(Error::WindowOverflow {
                            variable: j,
                            needed_lo: needed.lo[j],
                            needed_hi: needed.hi[j],
                        });
                    }
                }
            }
        }
    }

    let mut acc = expand(&locals[0], &factor_window(0));
    for (m, local) in locals.iter().enumerate().skip(1) {
        if acc.is_empty() {
            return Ok(R::ring_zero());
        }
        let next = expand(local, &factor_window(m));
        let window = match policy {
            WindowPolicy::Fixed(w) => w.clone(),
            WindowPolicy::Scaled(_) => partial_window(m),
        };
        acc = acc.mul_into(&next, &window)?;
    }
    Ok(acc.coefficient(&target))
}
