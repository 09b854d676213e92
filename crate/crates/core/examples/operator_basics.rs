//! Parsing, normal ordering and commutators in the operator grammar.

use opcalc::opexpr::{parse_operator, print_operator};
use opcalc::weyl::VariableSpec;

fn main() -> opcalc::Result<()> {
    let s = VariableSpec::r_u();
    let a = parse_operator("D[r]*r^2*D[u]", &s)?;
    println!("D[r] r^2 D[u]    = {}", print_operator(&a));

    let x = parse_operator("r*D[r]", &s)?;
    let y = parse_operator("u*D[r]^2", &s)?;
    println!("[r D_r, u D_r^2] = {}", x.commutator(&y)?);

    // canonical text reparses to the same operator
    let back = parse_operator(&print_operator(&a), &s)?;
    assert_eq!(back, a);

    match parse_operator("D[q]", &s) {
        Err(e) => println!("D[q]             -> {e}"),
        Ok(op) => println!("unexpected: {op}"),
    }
    Ok(())
}
