//! The g(2) generators: flag invariance, structure tables, the Lie-algebraic
//! forms of `h_a` and `l_a`, and enveloping-algebra decompositions.

use opcalc::g2algebra::{self, Mark, Subset};

fn main() -> opcalc::Result<()> {
    let g = g2algebra::build_generators(Mark::Symbolic)?;
    for (name, op) in g2algebra::GENERATOR_NAMES.iter().zip(&g.ops) {
        println!("{name:>4} = {op}");
    }
    for n in g2algebra::FLAG_MARKS {
        println!("{}", g2algebra::verify_flag_invariance(n));
    }
    println!("{}", g2algebra::mismatched_mark_control());

    print!("{}", g2algebra::generator_table(Subset::LoweringGl2, Mark::Symbolic)?);
    println!("{}", g2algebra::verify_sl2());
    println!("{}", g2algebra::verify_lie_forms());

    for name in ["b_a", "c"] {
        let target = g2algebra::named_target(name).expect("known");
        let low = g2algebra::decompose(name, &target, Subset::LoweringGl2, 4, 4, None)?;
        println!("{name} over lowering+gl2: residual {} terms", low.residual.len());
        for n in &low.notes {
            println!("  {n}");
        }
        let all = g2algebra::decompose(name, &target, Subset::All, 4, 4, None)?;
        println!("{name} over all eleven: {}", serde_json::to_string(&all.to_export()).expect("serializable"));
    }
    Ok(())
}
