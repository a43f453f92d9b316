//! Three players in a cycle: each pair gets its own representation, and
//! the shared player is identified across neighbouring Hilbert spaces.

use qlgame::game::{three_player_representations, total_averages, GameContexts, GameSpec};

fn main() -> qlgame::Result<()> {
    let spec: GameSpec = serde_json::from_str(include_str!("data/three_player_game.json")).expect("fixture parses");
    let contexts: GameContexts = serde_json::from_str(include_str!("data/spin_pairs.json")).expect("fixture parses");
    let averages = total_averages(&spec, &contexts)?;
    println!("totals: {:?}", averages.totals);

    let [ab, bc, ca] = [
        &contexts.pairs[0].data,
        &contexts.pairs[1].data,
        &contexts.pairs[2].data,
    ];
    let r = three_player_representations(ab, bc, ca)?;
    println!(
        "b identified with discrepancy {:e} (literal map {:.4})",
        r.discrepancy_ab_bc, r.raw_discrepancy_ab_bc
    );
    println!(
        "c identified with discrepancy {:e} (literal map {:.4})",
        r.discrepancy_bc_ca, r.raw_discrepancy_bc_ca
    );
    Ok(())
}
