//! Closed forms of sum_n e^{t(z + 2 i pi n)} (z + 2 i pi n)^k in one variable.

use jkres::eisenstein::one_d_eisenstein;
use jkres::ratlinalg::rat;
use num_complex::Complex64;

fn main() -> jkres::Result<()> {
    let t = rat(1, 4);
    let z = Complex64::new(0.5, 0.25);
    for k in [-1, -2, -3, -4] {
        let e = one_d_eisenstein(k, &t)?;
        println!("E_{k}: e^({} z) * [{}]  with t1 = t, t2 = 1/(1 - e^-z)", e.floor, e.polynomial);
        println!("    at z = {z}: {}", e.evaluate(0.25, z));
    }
    Ok(())
}
