//! Evaluates a twisted lattice sum at a point away from 0 through residues.

use jkres::arrangement::{AlcovePoint, Arrangement};
use jkres::eisenstein::kernel_eval;
use jkres::oracle::lattice_sum;
use jkres::ratlinalg::rat;
use jkres::RationalFunction;
use num_complex::Complex64;

fn main() -> jkres::Result<()> {
    let a2 = Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]])?;
    let f = RationalFunction::inverse_product(vec![(0, 2), (1, 2), (2, 2)]);
    let t = vec![rat(1, 3), rat(1, 7)];
    let y = [Complex64::new(0.4, 0.1), Complex64::new(0.3, -0.2)];
    let v = kernel_eval(&f, &a2, &AlcovePoint::new(t.clone(), &a2)?, &y)?;
    let o = lattice_sum(&f, &a2, &t, &y, 200, true)?;
    println!("residue formula: {v}");
    println!("direct sum R=200: {} (tail bound {:.1e})", o.value, o.tail_bound);
    Ok(())
}
