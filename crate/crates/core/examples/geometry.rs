//! The cometric read off `h_a`: determinant, curvature, the
//! Laplace-Beltrami operator and the Schrodinger form.

use opcalc::diffgeo::{
    invert_and_det, laplace_beltrami, scalar_curvature, verify_curvature, verify_det, verify_schrodinger_form,
    verify_self_adjoint, CoMetric,
};

fn main() -> opcalc::Result<()> {
    let g = CoMetric::coulomb_ru();
    let (metric, det) = invert_and_det(&g)?;
    println!("det g^(mu nu) = {det}");
    println!("R of the inverse matrix g_(mu nu) = {}", scalar_curvature(&metric, g.spec())?);
    println!("R with the displayed matrix taken as the metric = {}", scalar_curvature(g.entries(), g.spec())?);
    println!("Laplace-Beltrami: {}", laplace_beltrami(&g)?);
    for rep in [verify_det(), verify_curvature(), verify_schrodinger_form(), verify_self_adjoint()] {
        println!("{rep}");
    }

    let custom = CoMetric::from_json(r#"{"chart":"r-u","entries":[["1","0"],["0","u"]]}"#)?;
    println!("custom cometric, Laplace-Beltrami: {}", laplace_beltrami(&custom)?);
    Ok(())
}
