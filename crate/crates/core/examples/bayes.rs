//! Whether the two orders of play share one joint table, for uniform and
//! skewed marginals under the same symmetric transitions.

use qlgame::classicality::bayes_consistency;
use qlgame::prob::{ContextData, Distribution, TransitionMatrix};

fn main() -> qlgame::Result<()> {
    let t = TransitionMatrix::binary_symmetric(0.7)?;
    for (pa, pb) in [(0.5, 0.5), (0.5, 0.4), (0.3, 0.3), (0.2, 0.6)] {
        let data = ContextData::symmetric(Distribution::binary(pa)?, Distribution::binary(pb)?, t.clone())?;
        let r = bayes_consistency(&data);
        println!(
            "p_a(F)={pa} p_b(F)={pb}: consistent={} uniform={} discrepancy={:.4}",
            r.consistent, r.uniform_marginals, r.max_discrepancy
        );
    }
    Ok(())
}
