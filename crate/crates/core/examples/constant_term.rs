//! Piecewise polynomial constant term: Bernoulli polynomials and a rank-two case.

use jkres::arrangement::{AlcovePoint, Arrangement};
use jkres::eisenstein::constant_term;
use jkres::ratlinalg::rat;
use jkres::RationalFunction;

fn main() -> jkres::Result<()> {
    let line = Arrangement::from_coords(1, &[vec![1]])?;
    for k in 2..=4 {
        let f = RationalFunction::inverse_product(vec![(0, k)]);
        let ct = constant_term(&f, &line, &AlcovePoint::new(vec![rat(1, 3)], &line)?, 1)?;
        println!("1/z^{k} on (0,1): {}", ct.polynomial);
    }
    let a2 = Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]])?;
    let f = RationalFunction::inverse_product(vec![(0, 1), (1, 1), (2, 1)]);
    for t in [[rat(1, 3), rat(1, 7)], [rat(1, 7), rat(1, 3)], [rat(4, 3), rat(1, 7)]] {
        let p = AlcovePoint::new(t.to_vec(), &a2)?;
        let ct = constant_term(&f, &a2, &p, 1)?;
        println!("alcove of ({}, {}): {}  [{}]", t[0], t[1], ct.polynomial, ct.stability.as_str());
    }
    Ok(())
}
