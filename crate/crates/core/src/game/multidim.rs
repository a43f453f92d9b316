//! Expected payoff of `b` for `n`-outcome observables given by arbitrary
//! orthonormal eigenbases.

use super::PayoffMatrix;
use crate::error::{Error, Result};
use crate::hilbert::{born_probability, ComplexVector, OrthonormalBasis};

/// Part averages `(E_1^b, E_2^b)` with
/// `E_1^b = Σ_{i,j} h1[j][i] |⟨ψ, e_j^a⟩|² |⟨e_i^b, e_j^a⟩|²` (`a` chooses `j`)
/// and `E_2^b = Σ_{i,j} h2[i][j] |⟨ψ, e_i^b⟩|² |⟨e_i^b, e_j^a⟩|²` (`b` chooses `i`).
pub fn multidim_part_averages(
    psi: &ComplexVector,
    a_basis: &OrthonormalBasis,
    b_basis: &OrthonormalBasis,
    h1: &PayoffMatrix,
    h2: &PayoffMatrix,
) -> Result<(f64, f64)> {
    let n = psi.dim();
    if a_basis.dim() != n || b_basis.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {n}, bases of dimension {} and {}",
            a_basis.dim(),
            b_basis.dim()
        )));
    }
    for h in [h1, h2] {
        if h.n_rows() != n || h.n_cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "payoff is {}×{}, expected {n}×{n}",
                h.n_rows(),
                h.n_cols()
            )));
        }
    }
    let pa: Vec<f64> = a_basis
        .vectors()
        .iter()
        .map(|e| born_probability(psi, e))
        .collect::<Result<_>>()?;
    let pb: Vec<f64> = b_basis
        .vectors()
        .iter()
        .map(|e| born_probability(psi, e))
        .collect::<Result<_>>()?;
    // tr[i][j] = |⟨e_i^b, e_j^a⟩|²
    let tr = b_basis.transition_probabilities(a_basis);
    let mut e1 = 0.0;
    let mut e2 = 0.0;
    for i in 0..n {
        for j in 0..n {
            e1 += h1.get(j, i) * pa[j] * tr[i][j];
            e2 += h2.get(i, j) * pb[i] * tr[i][j];
        }
    }
    Ok((e1, e2))
}

/// `E^b = E_1^b + E_2^b`, see [`multidim_part_averages`].
pub fn multidim_average(
    psi: &ComplexVector,
    a_basis: &OrthonormalBasis,
    b_basis: &OrthonormalBasis,
    h1: &PayoffMatrix,
    h2: &PayoffMatrix,
) -> Result<f64> {
    let (e1, e2) = multidim_part_averages(psi, a_basis, b_basis, h1, h2)?;
    Ok(e1 + e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{ql_averages, GameSpec};
    use crate::prob::{ContextData, Distribution, TransitionMatrix};
    use crate::qlra::build_representation;
    use rand::SeedableRng;
    use rand_pcg::Pcg64;

    #[test]
    fn reduces_to_two_outcome_game() {
        let data = ContextData::symmetric(
            Distribution::binary(1.0 / 3.0).unwrap(),
            Distribution::uniform(2),
            TransitionMatrix::binary_symmetric(0.75).unwrap(),
        )
        .unwrap();
        let rep = build_representation(&data).unwrap();
        let h = PayoffMatrix::matching(2, 1.0, 1.0);
        let spec = GameSpec::two_player_symmetric(h.clone());
        let ql = ql_averages(&rep, &spec).unwrap();
        let (e1, e2) = multidim_part_averages(rep.psi(), rep.a_basis(), rep.b_basis(), &h, &h.negated()).unwrap();
        assert!((e1 - ql.part(0, "b").unwrap()).abs() < 1e-12);
        assert!((e2 - ql.part(1, "b").unwrap()).abs() < 1e-12);
        assert!((e1 + e2).abs() < 1e-12);
    }

    #[test]
    fn same_basis_gives_diagonal_payoffs() {
        let mut rng = Pcg64::seed_from_u64(7);
        let basis = OrthonormalBasis::random(4, &mut rng);
        let psi = ComplexVector::random_unit(4, &mut rng);
        let h = PayoffMatrix::matching(4, 2.0, 1.0);
        // identical bases: b always answers correctly, both parts pay 2
        let (e1, e2) = multidim_part_averages(&psi, &basis, &basis, &h, &h).unwrap();
        assert!((e1 - 2.0).abs() < 1e-10);
        assert!((e2 - 2.0).abs() < 1e-10);
    }

    #[test]
    fn non_unit_state_rejected() {
        let basis = OrthonormalBasis::delta(3);
        let psi = ComplexVector::from_real(&[1.0, 1.0, 0.0]);
        let h = PayoffMatrix::zeros(3);
        assert!(multidim_average(&psi, &basis, &basis, &h, &h).is_err());
        assert!(multidim_average(&ComplexVector::delta(3, 0), &basis, &basis, &PayoffMatrix::zeros(2), &h).is_err());
    }
}
