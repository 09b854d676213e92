//! `h_a` on the flag spaces `P_n`: triangular matrices, characteristic
//! polynomials and eigenpolynomials.

use opcalc::coulomb2d::h_a;
use opcalc::flagrep::{char_poly, eigenpolynomials, generic_point, matrix_of, verify_spectrum};

fn main() -> opcalc::Result<()> {
    let m = matrix_of(&h_a(), 2)?;
    let e = m.to_export();
    println!("basis of P_2: {}", e.basis.join(", "));
    for row in &e.entries {
        println!("  [{}]", row.join(", "));
    }
    println!("char poly on P_2: {}", char_poly(&m));
    let point = generic_point();
    for k in 0..=3 {
        let ps = eigenpolynomials(3, k, &point)?;
        let shown: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
        println!("P_3, level {k}: {}", shown.join(" ; "));
    }
    for n in 0..=8 {
        println!("{}", verify_spectrum(n));
    }
    Ok(())
}
