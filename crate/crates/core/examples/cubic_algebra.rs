//! Commutators `[c, l_a]` and `[c, b_a]` as cubic polynomials in the
//! integrals, compared with the printed right-hand sides.
//!
//! Takes about 15 s in release mode.

use opcalc::coulomb2d::cubic::{decompose_cubic, table_discrepancies, verify_cubic, CubicTarget, ParityMode, DEFAULT_DEGREE};

fn main() -> opcalc::Result<()> {
    for t in [CubicTarget::L, CubicTarget::B] {
        let d = decompose_cubic(t, DEFAULT_DEGREE, ParityMode::Ring)?;
        println!("{} on the parity ring: exists = {}", t.label(), d.exists());
        for (m, coeff) in d.table() {
            println!("  {m:>8}: {coeff}");
        }
        for (m, diff) in table_discrepancies(&d)? {
            println!("  computed - printed at {m}: {diff}");
        }
        println!("{}", verify_cubic(t));
    }
    Ok(())
}
