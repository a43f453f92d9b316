//! Expected payoffs computed from a quantum-like representation through the
//! Born rule instead of the classical joint tables.

use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{GameAverages, GameSpec, PartAverages, PayoffMatrix};
use crate::error::{Error, Result};
use crate::hilbert::{born_probability, expand_in_basis, inner_product};
use crate::qlra::QLRepresentation;

fn born_all(rep: &QLRepresentation, a_side: bool) -> Result<Vec<f64>> {
    let basis = if a_side { rep.a_basis() } else { rep.b_basis() };
    basis.vectors().iter().map(|e| born_probability(rep.psi(), e)).collect()
}

fn check_payoff(h: &PayoffMatrix) -> Result<()> {
    if h.n_rows() != 2 || h.n_cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "alphabet mismatch: representation is 2×2, payoff is {}×{}",
            h.n_rows(),
            h.n_cols()
        )));
    }
    Ok(())
}

/// Per-part averages of a two-player game. When `a` chooses, the weight of
/// `(α, β)` is `|⟨ψ, e_α^a⟩|² |⟨e_β^b, e_α^a⟩|²`; when `b` chooses it is
/// `|⟨ψ, e_β^b⟩|² |⟨e_β^b, e_α^a⟩|²`.
pub fn ql_averages(rep: &QLRepresentation, spec: &GameSpec) -> Result<GameAverages> {
    let [a, b] = spec.players() else {
        return Err(Error::InvalidGame(
            "a single representation covers exactly two players".into(),
        ));
    };
    let pa = born_all(rep, true)?;
    let pb = born_all(rep, false)?;
    let tr = rep.a_basis().transition_probabilities(rep.b_basis());

    let mut parts = Vec::with_capacity(spec.parts().len());
    for part in spec.parts() {
        // weights indexed [chooser][tester]
        let w: Vec<Vec<f64>> = if part.chooser == *a && part.tester == *b {
            (0..2)
                .map(|al| (0..2).map(|be| pa[al] * tr[al][be]).collect())
                .collect()
        } else {
            (0..2)
                .map(|be| (0..2).map(|al| pb[be] * tr[al][be]).collect())
                .collect()
        };
        let mut averages = BTreeMap::new();
        for (player, h) in &part.payoffs {
            check_payoff(h)?;
            let v = (0..2)
                .flat_map(|i| (0..2).map(move |j| (i, j)))
                .map(|(i, j)| h.get(i, j) * w[i][j])
                .sum();
            averages.insert(player.clone(), v);
        }
        parts.push(PartAverages {
            chooser: part.chooser.clone(),
            tester: part.tester.clone(),
            averages,
        });
    }
    Ok(GameAverages::from_parts(spec.players(), parts))
}

/// Per-player totals of [`ql_averages`].
pub fn ql_average(rep: &QLRepresentation, spec: &GameSpec) -> Result<BTreeMap<String, f64>> {
    Ok(ql_averages(rep, spec)?.totals)
}

/// Total of the tester-payoff player `b` in the zero-sum symmetric game,
/// written as `Σ_α (|⟨ψ, e_α^a⟩|² − |⟨ψ, e_α^b⟩|²) Σ_β h[α][β] |⟨e_β^b, e_α^a⟩|²`.
/// `tester_payoff` is what the tester earns in each part.
pub fn zero_sum_factored_average(rep: &QLRepresentation, tester_payoff: &PayoffMatrix) -> Result<f64> {
    check_payoff(tester_payoff)?;
    let pa = born_all(rep, true)?;
    let pb = born_all(rep, false)?;
    let tr = rep.a_basis().transition_probabilities(rep.b_basis());
    Ok((0..2)
        .map(|al| {
            let row: f64 = (0..2).map(|be| tester_payoff.get(al, be) * tr[al][be]).sum();
            (pa[al] - pb[al]) * row
        })
        .sum())
}

/// Same total as [`zero_sum_factored_average`], with `|⟨ψ, e_α^b⟩|²`
/// expanded over the `a`-eigenbasis so that the interference term
/// `2 cos φ |c̄_{α1} x_1 c_{α2} x̄_2|` appears explicitly. Here
/// `e_α^b = Σ_k c_{αk} e_k^a` and `x_k = ⟨ψ, e_k^a⟩`.
pub fn interference_form_average(rep: &QLRepresentation, tester_payoff: &PayoffMatrix) -> Result<f64> {
    check_payoff(tester_payoff)?;
    let x: Vec<Complex64> = rep
        .a_basis()
        .vectors()
        .iter()
        .map(|e| inner_product(rep.psi(), e))
        .collect::<Result<_>>()?;
    // c[β][k] with e_β^b = Σ_k c[β][k] e_k^a
    let c: Vec<Vec<Complex64>> = rep
        .b_basis()
        .vectors()
        .iter()
        .map(|e| expand_in_basis(e, rep.a_basis()))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for al in 0..2 {
        let t1 = c[al][0].conj() * x[0];
        let t2 = c[al][1].conj() * x[1];
        let cross = t1 * t2.conj();
        let pb = t1.norm_sqr() + t2.norm_sqr() + 2.0 * cross.arg().cos() * cross.norm();
        let row: f64 = (0..2).map(|be| tester_payoff.get(al, be) * c[be][al].norm_sqr()).sum();
        total += (x[al].norm_sqr() - pb) * row;
    }
    Ok(total)
}
