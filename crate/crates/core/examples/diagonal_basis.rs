//! No-broken-circuit diagonal basis of A3 and its duality matrix.

use jkres::arrangement::{diagonal_basis, enumerate_bases, Arrangement};
use jkres::residues::duality_matrix;

fn main() -> jkres::Result<()> {
    let a3 = Arrangement::from_coords(
        3,
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]],
    )?;
    println!("{} bases", enumerate_bases(&a3).len());
    let db = diagonal_basis(&a3)?;
    for m in &db.members {
        println!("ordered basis {:?}", m.indices);
    }
    for row in duality_matrix(&a3, &db)? {
        let cells: Vec<String> = row.iter().map(|q| q.to_string()).collect();
        println!("[{}]", cells.join(" "));
    }
    Ok(())
}
