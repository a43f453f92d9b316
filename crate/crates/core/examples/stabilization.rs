//! Relative frequencies of a simulated sequence settle down as it grows.

use qlgame::frequency::{stabilization_report, DEFAULT_STABILIZATION_TOL, DEFAULT_WINDOW_FRACTION};
use qlgame::montecarlo::{sample_sequence, GeneratorSpec};
use qlgame::prob::Distribution;

fn main() -> qlgame::Result<()> {
    let g = GeneratorSpec::new(Distribution::binary(0.3)?, "g_a");
    for n in [100, 10_000, 1_000_000] {
        let seq = sample_sequence(&g, n, 99, "C");
        let r = stabilization_report(&seq, DEFAULT_WINDOW_FRACTION, DEFAULT_STABILIZATION_TOL)?;
        println!(
            "N={n:>8}: ν(F)={:.5} tail oscillation {:.5} stabilized={}",
            r.final_frequencies.probs()[0],
            r.max_tail_oscillation,
            r.stabilized
        );
    }
    Ok(())
}
