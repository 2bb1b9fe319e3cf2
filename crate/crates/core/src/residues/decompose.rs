use std::collections::BTreeMap;

use num_traits::Zero;

use super::RationalFunction;
use crate::arrangement::{subsets, Arrangement};
use crate::error::{Error, Result};
use crate::ratlinalg::{nullspace, Rational};

/// `coefficient / prod alpha_k^{m_k}` with independent support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisFraction {
    pub coefficient: Rational,
    pub denominator: Vec<(usize, u32)>,
}

impl BasisFraction {
    pub fn to_function(&self) -> RationalFunction {
        RationalFunction::inverse_product(self.denominator.clone()).scale(&self.coefficient)
    }
}

/// Circuit support with the coefficients of its linear relation.
type Circuit = (Vec<usize>, Vec<Rational>);

/// First circuit inside `support` (smallest size, then lexicographic), with
/// the coefficients of its linear relation.
fn find_circuit(arr: &Arrangement, support: &[usize]) -> Option<Circuit> {
    for size in 2..=support.len() {
        for combo in subsets(support.len(), size) {
            let set: Vec<usize> = combo.iter().map(|&k| support[k]).collect();
            if arr.rank_of(&set) != size - 1 {
                continue;
            }
            let minimal = (0..size).all(|k| {
                let rest: Vec<usize> = (0..size).filter(|&l| l != k).map(|l| set[l]).collect();
                arr.is_independent(&rest)
            });
            if minimal {
                // coefficients of the relation: kernel of the transpose
                let rows = arr.rational_rows(&set);
                let cols: Vec<Vec<Rational>> = (0..arr.rank())
                    .map(|j| rows.iter().map(|row| row[j].clone()).collect())
                    .collect();
                let ns = nullspace(&cols, size);
                return Some((set, ns[0].clone()));
            }
        }
    }
    None
}

/// Rewrites `f = c / prod alpha^m` with a spanning denominator as a sum of
/// fractions whose denominators are supported on bases.
///
/// While the support is dependent, take its first circuit `C` with relation
/// `sum lambda_c alpha_c = 0` and solve for the smallest form `p` of `C`;
/// `1 = sum_{c != p} mu_c alpha_c / alpha_p` trades one power of each other
/// circuit element for one power of `alpha_p`.
pub fn decompose_to_basis_fractions(
    f: &RationalFunction,
    arr: &Arrangement,
) -> Result<Vec<BasisFraction>> {
    f.validate(arr)?;
    if !f.is_generating(arr) {
        return Err(Error::NotGenerating);
    }
    let num = f.numerator();
    if num.num_vars() > 0 {
        return Err(Error::InvalidInput(
            "decomposition requires a constant numerator".into(),
        ));
    }
    let c0 = num.constant_term();
    let mut done: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    if c0.is_zero() {
        return Ok(Vec::new());
    }
    let mut start = vec![0u32; arr.len()];
    for &(i, m) in f.denominator() {
        start[i] = m;
    }
    let mut pending: BTreeMap<Vec<u32>, Rational> = BTreeMap::new();
    pending.insert(start, c0);
    let mut circuits: BTreeMap<Vec<usize>, Option<Circuit>> = BTreeMap::new();

    while let Some((mults, coeff)) = pending.pop_first() {
        if coeff.is_zero() {
            continue;
        }
        let support: Vec<usize> = (0..mults.len()).filter(|&i| mults[i] > 0).collect();
        let circuit = circuits
            .entry(support.clone())
            .or_insert_with(|| find_circuit(arr, &support))
            .clone();
        let Some((set, lambda)) = circuit else {
            *done.entry(mults).or_insert_with(Rational::zero) += coeff;
            continue;
        };
        // set is sorted, so the pivot is its first element
        let p = set[0];
        let lp = &lambda[0];
        for (k, &c) in set.iter().enumerate().skip(1) {
            let mu = -&lambda[k] / lp;
            if mu.is_zero() {
                continue;
            }
            let mut next = mults.clone();
            next[p] += 1;
            next[c] -= 1;
            *pending.entry(next).or_insert_with(Rational::zero) += &coeff * mu;
        }
    }

    Ok(done
        .into_iter()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(mults, coefficient)| BasisFraction {
            coefficient,
            denominator: mults
                .iter()
                .enumerate()
                .filter(|(_, &m)| m > 0)
                .map(|(i, &m)| (i, m))
                .collect(),
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlinalg::rat;

    fn a2() -> Arrangement {
        Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn three_lines() {
        let f = RationalFunction::inverse_product(vec![(0, 1), (1, 1), (2, 1)]);
        let d = decompose_to_basis_fractions(&f, &a2()).unwrap();
        assert_eq!(
            d,
            vec![
                BasisFraction { coefficient: rat(1, 1), denominator: vec![(0, 2), (1, 1)] },
                BasisFraction { coefficient: rat(-1, 1), denominator: vec![(0, 2), (2, 1)] },
            ]
        );
    }

    #[test]
    fn basis_fraction_is_unchanged() {
        let f = RationalFunction::inverse_product(vec![(0, 1), (1, 1)]);
        let d = decompose_to_basis_fractions(&f, &a2()).unwrap();
        assert_eq!(d, vec![BasisFraction { coefficient: rat(1, 1), denominator: vec![(0, 1), (1, 1)] }]);
    }

    #[test]
    fn non_generating_rejected() {
        let f = RationalFunction::inverse_product(vec![(0, 3)]);
        assert_eq!(decompose_to_basis_fractions(&f, &a2()), Err(Error::NotGenerating));
    }
}
