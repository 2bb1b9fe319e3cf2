//! Even zeta values from the constant term of 1/z^(2l) at the origin.

use jkres::arrangement::Arrangement;
use jkres::eisenstein::{normalized_sum, SumPoint};
use jkres::{Rational, RationalFunction};

fn main() -> jkres::Result<()> {
    let line = Arrangement::from_coords(1, &[vec![1]])?;
    for l in 1..=6u32 {
        let f = RationalFunction::inverse_product(vec![(0, 2 * l)]);
        let s = normalized_sum(&f, &line, &SumPoint::LimitZero(None), 1)?;
        // 2 zeta(2l) = c (2 pi)^(2l)
        let c = s.value.real_two_pi_multiple().expect("even power is real");
        let over_pi = c * Rational::from_integer(num_traits::pow(2.into(), 2 * l as usize))
            / Rational::from_integer(2.into());
        println!("zeta({}) = {} pi^{}", 2 * l, over_pi, 2 * l);
    }
    Ok(())
}
