//! The integrals `l_a`, `b_a` and `c = [b_a, l_a]` and their commutators
//! with `h_a`.

use opcalc::coulomb2d::{c, compute_c_and_verify_leading, integral_commutators, verify_integrals};
use opcalc::coulomb2d::parity::op_modulo_parity;

fn main() -> opcalc::Result<()> {
    for (label, comm) in integral_commutators()? {
        println!("{label}: {} terms, {} modulo p^2 = p", comm.len(), op_modulo_parity(&comm)?.len());
    }
    println!("{}", verify_integrals());
    let cc = c();
    println!("c has order {} and {} terms", cc.order(), cc.len());
    println!("{}", compute_c_and_verify_leading());
    Ok(())
}
