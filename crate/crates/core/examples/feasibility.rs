//! Looks for a joint distribution of three binary observables with given
//! pairwise correlations, and prints the witness when one exists.

use qlgame::classicality::{correlation_facets, joint_feasibility, PairwiseSystem};

fn main() -> qlgame::Result<()> {
    for cov in [
        [0.0, 0.0, 0.0],
        [0.5, 0.5, 0.5],
        [-0.5, -0.5, -0.5],
        [-0.5, 0.5, 0.5],
        [0.9, 0.9, -0.5],
    ] {
        let f = joint_feasibility(&PairwiseSystem::from_covariances(cov)?)?;
        println!("correlations {cov:?}: facets {:?}", correlation_facets(cov));
        match f.witness {
            Some(w) => {
                let atoms: Vec<String> = (0..w.probs.len())
                    .map(|k| format!("{}={:.4}", w.atom_label(k), w.probs[k]))
                    .collect();
                println!("  joint exists: {}", atoms.join(" "));
            }
            None => println!("  no joint (phase-one residual {:.4})", f.infeasibility),
        }
    }
    Ok(())
}
