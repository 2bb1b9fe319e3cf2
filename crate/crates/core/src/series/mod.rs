//! Truncated multivariate Laurent series in ordered-basis coordinates
//! `(z_1, ..., z_r)`.
//!
//! Expansions follow the iterated-residue nesting: `z_j` dominates `z_k` for
//! `j < k`, so `z_r` is the innermost (smallest) variable and a linear form is
//! expanded as a geometric series around its first non-zero coordinate.
//! Every series carries a rectangular exponent window; terms outside it are
//! dropped.

mod poly;
mod ring;

use std::collections::BTreeMap;

use num_traits::{One, Zero};

pub use poly::{Monomial, Polynomial, TPolynomial};
pub use ring::{rational_to_f64, CoefficientRing};

use crate::error::{Error, Result};
use crate::ratlinalg::{bernoulli, binomial, factorial, Rational};

pub type Exponents = Vec<i64>;

/// Per-variable inclusive exponent bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Self {
        debug_assert_eq!(lo.len(), hi.len());
        Window { lo, hi }
    }

    /// Same bounds `[lo, hi]` for each of `rank` variables.
    pub fn uniform(rank: usize, lo: i64, hi: i64) -> Self {
        Window::new(vec![lo; rank], vec![hi; rank])
    }

    pub fn rank(&self) -> usize {
        self.lo.len()
    }

    pub fn contains(&self, e: &[i64]) -> bool {
        e.iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| lo <= x && x <= hi)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        (0..self.rank()).all(|j| self.lo[j] <= other.lo[j] && other.hi[j] <= self.hi[j])
    }

    pub fn intersect(&self, other: &Window) -> Window {
        Window::new(
            self.lo.iter().zip(&other.lo).map(|(a, b)| *a.max(b)).collect(),
            self.hi.iter().zip(&other.hi).map(|(a, b)| *a.min(b)).collect(),
        )
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(lo, hi)| lo > hi)
    }
}

/// A linear form `sum_j c_j z_j` written in ordered-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInCoords {
    coeffs: Vec<Rational>,
    lead: usize,
}

impl FormInCoords {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        let lead = coeffs
            .iter()
            .position(|c| !c.is_zero())
            .ok_or(Error::ZeroForm)?;
        Ok(FormInCoords { coeffs, lead })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Index of the dominant variable.
    pub fn lead(&self) -> usize {
        self.lead
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn involves(&self, var: usize) -> bool {
        !self.coeffs[var].is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NestedSeries<R> {
    rank: usize,
    window: Window,
    terms: BTreeMap<Exponents, R>,
}

impl<R: CoefficientRing> NestedSeries<R> {
    pub fn zero(window: Window) -> Self {
        NestedSeries {
            rank: window.rank(),
            window,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(window: Window) -> Self {
        let mut s = NestedSeries::zero(window);
        s.add_term(vec![0; s.rank], R::ring_one());
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, R)>>(window: Window, terms: I) -> Self {
        let mut s = NestedSeries::zero(window);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &R)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[i64]) -> R {
        self.terms.get(e).cloned().unwrap_or_else(R::ring_zero)
    }

    /// Adds `c z^e`; silently dropped if `e` is outside the window.
    pub fn add_term(&mut self, e: Exponents, c: R) {
        if c.is_ring_zero() || !self.window.contains(&e) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                v.add_assign(&c);
                if v.is_ring_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = NestedSeries::zero(self.window.intersect(&other.window));
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product truncated to the intersection of both windows.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let w = self.window.intersect(&other.window);
        self.mul_into(other, &w)
    }

    /// Product truncated to an explicit window.
    pub fn mul_into(&self, other: &Self, window: &Window) -> Result<Self> {
        self.check_rank(other)?;
        if window.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: window.rank(),
            });
        }
        let mut out = NestedSeries::zero(window.clone());
        if window.is_empty() {
            return Ok(out);
        }
        let mut e = vec![0i64; self.rank];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for j in 0..self.rank {
                    e[j] = ea[j] + eb[j];
                }
                if window.contains(&e) {
                    out.add_term(e.clone(), ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        NestedSeries::from_terms(
            self.window.clone(),
            self.terms.iter().map(|(e, c)| (e.clone(), c.scale(q))),
        )
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: other.rank,
            });
        }
        Ok(())
    }
}

/// All integer vectors in the box `prod [lo_k, hi_k]`.
fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for p in &out {
            for x in *l..=*h {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Expands `sum_{n >= min_power} a_n <beta, z>^n` within `window`, where
/// `coeff(n)` returns `a_n` (or `None` for zero).
///
/// Each power is expanded as `c_l^n z_l^n (1 + u)^n` with
/// `u = sum_{k > l} (c_k / c_l) z_k / z_l` and `l` the lead variable.
pub fn expand_form_series<R, F>(
    beta: &FormInCoords,
    min_power: i64,
    coeff: F,
    window: &Window,
) -> NestedSeries<R>
where
    R: CoefficientRing,
    F: Fn(i64) -> Option<R>,
{
    let rank = beta.rank();
    let mut out = NestedSeries::zero(window.clone());
    let lead = beta.lead();
    let later: Vec<usize> = (lead + 1..rank).filter(|&k| beta.involves(k)).collect();
    // variables the form does not touch sit at exponent 0
    for j in 0..rank {
        if j != lead && !later.contains(&j) && !(window.lo[j] <= 0 && 0 <= window.hi[j]) {
            return out;
        }
    }
    let lo: Vec<i64> = later.iter().map(|&k| window.lo[k].max(0)).collect();
    let hi: Vec<i64> = later.iter().map(|&k| window.hi[k]).collect();
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return out;
    }
    let c_lead = &beta.coeffs()[lead];
    let ratios: Vec<Rational> = later.iter().map(|&k| &beta.coeffs()[k] / c_lead).collect();
    let mut ratio_pows: Vec<Vec<Rational>> = Vec::with_capacity(later.len());
    for (i, r) in ratios.iter().enumerate() {
        let mut pows = vec![Rational::one()];
        for _ in 0..hi[i].max(0) {
            let next = pows.last().unwrap() * r;
            pows.push(next);
        }
        ratio_pows.push(pows);
    }
    let mut coeff_cache: BTreeMap<i64, Option<R>> = BTreeMap::new();
    for a in box_points(&lo, &hi) {
        let s: i64 = a.iter().sum();
        // multinomial(s; a) * prod (c_k/c_l)^{a_k}
        let mut base = Rational::from_integer(factorial(s as u64));
        for (i, &ak) in a.iter().enumerate() {
            base = base / Rational::from_integer(factorial(ak as u64)) * &ratio_pows[i][ak as usize];
        }
        for e_lead in window.lo[lead]..=window.hi[lead] {
            let n = e_lead + s;
            if n < min_power {
                continue;
            }
            if n >= 0 && s > n {
                continue;
            }
            let an = coeff_cache.entry(n).or_insert_with(|| coeff(n)).clone();
            let Some(an) = an else { continue };
            let q = &base * binomial(n, s as u64) * c_lead.pow(n as i32);
            let mut e = vec![0i64; rank];
            e[lead] = e_lead;
            for (i, &k) in later.iter().enumerate() {
                e[k] = a[i];
            }
            out.add_term(e, an.scale(&q));
        }
    }
    out
}

/// `<beta, z>^(-power)`
pub fn expand_inverse_form<R: CoefficientRing>(
    beta: &FormInCoords,
    power: u32,
    window: &Window,
) -> NestedSeries<R> {
    let p = -(power as i64);
    expand_form_series(beta, p, |n| (n == p).then(R::ring_one), window)
}

/// `<beta, z>^k` for `k >= 0`, as a series.
pub fn expand_form_power<R: CoefficientRing>(
    beta: &FormInCoords,
    k: u32,
    window: &Window,
) -> NestedSeries<R> {
    let p = k as i64;
    expand_form_series(beta, p, |n| (n == p).then(R::ring_one), window)
}

/// Coefficient of `w^m` in the Laurent expansion of `1/(1 - e^{sign * w})`.
pub fn todd_coefficient(sign: i8, m: i64) -> Rational {
    if m < -1 {
        return Rational::zero();
    }
    // 1/(1 - e^{-x}) = sum_n B_n (-1)^n x^{n-1} / n!  with x = -sign * w
    let n = (m + 1) as usize;
    let mut c = bernoulli(n) / Rational::from_integer(factorial(n as u64));
    if n % 2 == 1 {
        c = -c;
    }
    if sign > 0 && m.rem_euclid(2) == 1 {
        c = -c;
    }
    c
}

/// `1 / (1 - e^{sign * <beta, z>})` with `sign = +1` or `-1`.
pub fn expand_todd<R: CoefficientRing>(
    beta: &FormInCoords,
    sign: i8,
    window: &Window,
) -> NestedSeries<R> {
    expand_form_series(
        beta,
        -1,
        |m| {
            let c = todd_coefficient(sign, m);
            (!c.is_zero()).then(|| R::from_rational(&c))
        },
        window,
    )
}

/// `sum_{n >= 0} a_n <beta, z>^n` for a holomorphic factor.
pub fn expand_taylor<R, F>(beta: &FormInCoords, coeff: F, window: &Window) -> NestedSeries<R>
where
    R: CoefficientRing,
    F: Fn(u64) -> R,
{
    expand_form_series(
        beta,
        0,
        |n| {
            let c = coeff(n as u64);
            (!c.is_ring_zero()).then_some(c)
        },
        window,
    )
}

/// `exp(sum_j c_j z_j)` with ring-valued `c_j`.
pub fn expand_exponential<R: CoefficientRing>(linear: &[R], window: &Window) -> NestedSeries<R> {
    let rank = window.rank();
    let mut out = NestedSeries::zero(window.clone());
    let mut lo = Vec::with_capacity(rank);
    let mut hi = Vec::with_capacity(rank);
    for j in 0..rank {
        let present = linear.get(j).is_some_and(|c| !c.is_ring_zero());
        if present {
            lo.push(window.lo[j].max(0));
            hi.push(window.hi[j]);
        } else {
            if !(window.lo[j] <= 0 && 0 <= window.hi[j]) {
                return out;
            }
            lo.push(0);
            hi.push(0);
        }
    }
    if lo.iter().zip(&hi).any(|(l, h)| l > h) {
        return out;
    }
    // c_j^a / a!
    let pows: Vec<Vec<R>> = (0..rank)
        .map(|j| {
            let mut v = vec![R::ring_one()];
            for a in 1..=hi[j].max(0) {
                let prev: &R = v.last().unwrap();
                let next = prev
                    .mul(&linear[j])
                    .scale(&Rational::new(One::one(), a.into()));
                v.push(next);
            }
            v
        })
        .collect();
    for a in box_points(&lo, &hi) {
        let mut c = R::ring_one();
        for (j, &aj) in a.iter().enumerate() {
            if aj > 0 {
                c = c.mul(&pows[j][aj as usize]);
            }
        }
        out.add_term(a, c);
    }
    out
}

/// A polynomial in the ordered-basis coordinates as a series.
pub fn polynomial_series<R: CoefficientRing>(p: &Polynomial, window: &Window) -> NestedSeries<R> {
    let rank = window.rank();
    NestedSeries::from_terms(
        window.clone(),
        p.terms().map(|(m, c)| {
            let e: Exponents = (0..rank)
                .map(|j| m.get(j).copied().unwrap_or(0) as i64)
                .collect();
            (e, R::from_rational(c))
        }),
    )
}
