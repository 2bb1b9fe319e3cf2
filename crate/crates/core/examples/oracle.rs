//! Brute-force truncated lattice sums with a tail estimate.

use jkres::arrangement::Arrangement;
use jkres::oracle::lattice_sum;
use jkres::ratlinalg::rat;
use jkres::RationalFunction;
use num_complex::Complex64;

fn main() -> jkres::Result<()> {
    let line = Arrangement::from_coords(1, &[vec![1]])?;
    let f = RationalFunction::inverse_product(vec![(0, 2)]);
    for radius in [10, 100, 1000, 10000] {
        let s = lattice_sum(&f, &line, &[rat(0, 1)], &[Complex64::default()], radius, true)?;
        println!("R = {radius:>5}: {:.12} (tail <= {:.1e}, exact -1/12)", s.value.re, s.tail_bound);
    }
    Ok(())
}
