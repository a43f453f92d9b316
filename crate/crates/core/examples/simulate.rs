//! Plays a game many times with seeded generators and compares empirical
//! payoffs with the analytic ones.

use qlgame::game::{GameContexts, GameSpec};
use qlgame::montecarlo::simulate_game;
use qlgame::prob::ContextData;

fn main() -> qlgame::Result<()> {
    let spec: GameSpec = serde_json::from_str(include_str!("data/zero_sum_game.json")).expect("fixture parses");
    let data: ContextData = serde_json::from_str(include_str!("data/d1.json")).expect("fixture parses");
    let contexts = GameContexts::for_spec(&spec, data);
    for trials in [1_000, 100_000, 1_000_000] {
        let r = simulate_game(&spec, &contexts, trials, 7, 4)?;
        println!(
            "{trials:>9} trials: empirical b={:+.5} analytic b={:+.5} max deviation {:.2e}",
            r.empirical_averages.total("b").unwrap_or(f64::NAN),
            r.analytic_averages.total("b").unwrap_or(f64::NAN),
            r.max_deviation
        );
    }
    Ok(())
}
