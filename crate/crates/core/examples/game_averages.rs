//! Expected payoffs of a symmetric zero-sum game, computed from the joint
//! tables and again from the Hilbert-space representation.

use qlgame::game::{
    interference_form_average, ql_averages, total_averages, zero_sum_factored_average, GameContexts, GameSpec,
    PayoffMatrix,
};
use qlgame::prob::{ContextData, Distribution, TransitionMatrix};
use qlgame::qlra::build_representation;

fn main() -> qlgame::Result<()> {
    // b wins 2 on a match of F, 1 on a match of I, and pays 1 otherwise.
    let h = PayoffMatrix::new(vec![vec![2.0, -1.0], vec![-1.0, 1.0]])?;
    let spec = GameSpec::two_player_symmetric(h.clone());
    let data = ContextData::symmetric(
        Distribution::binary(0.3)?,
        Distribution::binary(0.55)?,
        TransitionMatrix::binary_symmetric(0.8)?,
    )?;

    let classical = total_averages(&spec, &GameContexts::for_spec(&spec, data.clone()))?;
    for part in &classical.parts {
        println!("{} chooses, {} tests: {:?}", part.chooser, part.tester, part.averages);
    }
    println!("totals: {:?}", classical.totals);

    let rep = build_representation(&data)?;
    let ql = ql_averages(&rep, &spec)?;
    println!("hilbert-space totals: {:?}", ql.totals);
    println!("largest gap: {:e}", ql.max_abs_diff(&classical));
    println!("factored form: {}", zero_sum_factored_average(&rep, &h)?);
    println!("interference form: {}", interference_form_average(&rep, &h)?);
    Ok(())
}
