//! Builds the complex amplitude for a two-outcome context and checks that
//! it reproduces the input probabilities.

use qlgame::prob::ContextData;
use qlgame::qlra::{build_representation, reconstruct_data};

fn main() -> qlgame::Result<()> {
    let text = include_str!("data/d1.json");
    let data: ContextData = serde_json::from_str(text).expect("fixture parses");
    let rep = build_representation(&data)?;
    let profile = rep.profile();
    println!("classification: {:?}", profile.classification);
    println!("lambda: {:?}", profile.lambda);
    println!("theta: {:?}", rep.theta());
    for (k, z) in rep.psi().entries().iter().enumerate() {
        println!("psi[{k}] = {:.6} {:+.6}i", z.re, z.im);
    }
    let back = reconstruct_data(&rep)?;
    println!("max reconstruction error: {:e}", back.max_abs_diff(&data));

    let hyperbolic: ContextData = serde_json::from_str(include_str!("data/hyperbolic.json")).expect("fixture parses");
    match build_representation(&hyperbolic) {
        Ok(_) => println!("hyperbolic context unexpectedly represented"),
        Err(e) => println!("hyperbolic: {e}"),
    }
    Ok(())
}
