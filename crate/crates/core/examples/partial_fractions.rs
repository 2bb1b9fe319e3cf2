//! Rewrites a function as fractions whose denominators are bases.

use jkres::arrangement::Arrangement;
use jkres::residues::decompose_to_basis_fractions;
use jkres::RationalFunction;

fn main() -> jkres::Result<()> {
    let a2 = Arrangement::from_coords(2, &[vec![1, 0], vec![0, 1], vec![1, 1]])?;
    let f = RationalFunction::inverse_product(vec![(0, 2), (1, 1), (2, 1)]);
    for part in decompose_to_basis_fractions(&f, &a2)? {
        let den: Vec<String> = part
            .denominator
            .iter()
            .map(|&(i, m)| format!("<{:?},z>^{m}", a2.form(i).coords()))
            .collect();
        println!("{} / ({})", part.coefficient, den.join(" "));
    }
    Ok(())
}
