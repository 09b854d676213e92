//! From the Sturm operator in `(r, rho, phi)` to the algebraic operator
//! `h_a` on `(r, u = rho^2)`.

use opcalc::coulomb2d::{derive_h, derive_h_pipeline, h_a, relate_h_ha, sturm_gauge, tampered_pipeline};

fn main() -> opcalc::Result<()> {
    println!("gauge-rotated operator at parity 0:\n  {}", derive_h(&sturm_gauge(0, true)?)?);
    for p in [0, 1] {
        println!("{}", derive_h_pipeline(p));
    }
    println!("{}", relate_h_ha());
    println!("h_a = {}", h_a());
    println!("without exp(-beta r) the residual is\n  {}", tampered_pipeline()?);
    Ok(())
}
