//! Sum of 1/(m^2 n^2 (m+n)^2) over nonzero terms of Z^2, exactly.

use jkres::arrangement::Arrangement;
use jkres::eisenstein::{normalized_sum, SumPoint};
use jkres::RationalFunction;

fn main() -> jkres::Result<()> {
    let a2 = Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]])?;
    let f = RationalFunction::inverse_product(vec![(0, 2), (1, 2), (2, 2)]);
    let s = normalized_sum(&f, &a2, &SumPoint::LimitZero(None), 1)?;
    println!("sum' f(2 i pi n) = {}", s.value);
    if let Some(c) = s.value.real_two_pi_multiple() {
        println!("sum' 1/(m n (m+n))^2 = {c} (2 pi)^{}", s.value.two_i_pi_exponent);
    }
    println!("constant term near 0: {}", s.constant_term.polynomial);
    Ok(())
}
