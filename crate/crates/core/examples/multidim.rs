//! A four-outcome game played in random orthonormal bases, evaluated by
//! the Born rule and by simulation.

use qlgame::game::{multidim_part_averages, PayoffMatrix};
use qlgame::hilbert::{ComplexVector, OrthonormalBasis};
use qlgame::montecarlo::simulate_multidim;
use rand::SeedableRng;
use rand_pcg::Pcg64;

fn main() -> qlgame::Result<()> {
    let mut rng = Pcg64::seed_from_u64(4);
    let n = 4;
    let a = OrthonormalBasis::random(n, &mut rng);
    let b = OrthonormalBasis::random(n, &mut rng);
    let psi = ComplexVector::random_unit(n, &mut rng);
    let h1 = PayoffMatrix::matching(n, 3.0, -1.0);
    let h2 = h1.negated();

    let (e1, e2) = multidim_part_averages(&psi, &a, &b, &h1, &h2)?;
    println!("analytic: part 1 {e1:+.5}, part 2 {e2:+.5}, total {:+.5}", e1 + e2);
    let r = simulate_multidim(&psi, &a, &b, (&h1, &h2), 1_000_000, 1, 4)?;
    println!(
        "simulated: total {:+.5} (max deviation {:.2e})",
        r.empirical_averages.total("b").unwrap_or(f64::NAN),
        r.max_deviation
    );
    Ok(())
}
