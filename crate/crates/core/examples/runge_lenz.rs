//! Angular momentum, the Runge-Lenz vector and the Sturm-form vector `B`
//! in Cartesian coordinates, with the so(4) closure on the energy shell.

use opcalc::coulomb3d::{self, BOrdering};

fn main() {
    for rep in coulomb3d::all_reports() {
        println!("{rep}");
    }
    let ok: Vec<&str> = BOrdering::ALL
        .iter()
        .zip(coulomb3d::verify_b_relations())
        .filter(|(_, r)| r.passed())
        .map(|(o, _)| o.label())
        .collect();
    println!("orderings of B satisfying every identity: {ok:?}");
    println!("{}", coulomb3d::verify_so4());
}
