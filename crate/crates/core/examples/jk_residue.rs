//! Jeffrey-Kirwan residue of a rational function on B2.

use jkres::arrangement::Arrangement;
use jkres::ratlinalg::rat;
use jkres::residues::jk_residue;
use jkres::series::Polynomial;
use jkres::RationalFunction;

fn main() -> jkres::Result<()> {
    let b2 = Arrangement::from_coords(2, &[vec![1, -1], vec![0, 1], vec![1, 0], vec![1, 1]])?;
    // (z1 + 3 z2) / (z1 (z1 - z2) (z1 + z2))
    let num = Polynomial::linear(&[rat(1, 1), rat(3, 1)]);
    let f = RationalFunction::new(num, vec![(0, 1), (2, 1), (3, 1)]);
    let res = jk_residue(&f, &b2)?;
    for (sigma, c) in &res.terms {
        println!("{c} * phi{sigma:?}");
    }
    println!("value at (2, 5): {}", res.evaluate(&b2, &[rat(2, 1), rat(5, 1)])?);
    Ok(())
}
