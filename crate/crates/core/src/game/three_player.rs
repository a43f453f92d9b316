//! Three players `a`, `b`, `c` with one representation per pair context and
//! unitary identifications between the shared observables.
//!
//! Player `b` appears as the second observable of `H_ab` and as the first of
//! `H_bc`. `U_ab,bc` sends the `b`-eigenvectors of `H_ab` to those of `H_bc`.
//! Eigenvectors are only fixed up to a phase, so the target vectors are
//! rephased to line up with the coefficients of `ψ_bc`; the remaining
//! mismatch `‖U ψ_ab − ψ_bc‖` then depends only on the two `b` marginals.
//! The literal map without rephasing is reported as well.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::hilbert::{expand_in_basis, BasisMap, OrthonormalBasis};
use crate::prob::ContextData;
use crate::qlra::{build_representation, QLRepresentation};

#[derive(Debug, Clone, Serialize)]
pub struct ThreePlayerReport {
    pub ab: QLRepresentation,
    pub bc: QLRepresentation,
    pub ca: QLRepresentation,
    /// Identification of `b` between `H_ab` and `H_bc`.
    #[serde(skip)]
    pub u_ab_bc: BasisMap,
    /// Identification of `c` between `H_bc` and `H_ca`.
    #[serde(skip)]
    pub u_bc_ca: BasisMap,
    pub discrepancy_ab_bc: f64,
    pub discrepancy_bc_ca: f64,
    pub raw_discrepancy_ab_bc: f64,
    pub raw_discrepancy_bc_ca: f64,
}

fn unit_phase(z: Complex64) -> Option<Complex64> {
    let r = z.norm();
    (r > 1e-14).then(|| z / r)
}

/// Returns the phase-aligned map, its discrepancy, and the raw discrepancy.
fn identify(
    from_state: &QLRepresentation,
    from: &OrthonormalBasis,
    to_state: &QLRepresentation,
    to: &OrthonormalBasis,
) -> Result<(BasisMap, f64, f64)> {
    let c_from = expand_in_basis(from_state.psi(), from)?;
    let c_to = expand_in_basis(to_state.psi(), to)?;
    let omega: Vec<Complex64> = c_from
        .iter()
        .zip(&c_to)
        .map(|(&f, &t)| match (unit_phase(f), unit_phase(t)) {
            (Some(pf), Some(pt)) => pt * pf.conj(),
            _ => Complex64::new(1.0, 0.0),
        })
        .collect();
    let raw = BasisMap::new(from.clone(), to.clone())?;
    let raw_gap = raw.apply(from_state.psi())?.sub(to_state.psi()).norm();
    let aligned = BasisMap::new(from.clone(), to.rephased(&omega))?;
    let gap = aligned.apply(from_state.psi())?.sub(to_state.psi()).norm();
    Ok((aligned, gap, raw_gap))
}

/// Builds the three pair representations and the identifications of `b`
/// and `c`. Errors name the pair that failed.
pub fn three_player_representations(ab: &ContextData, bc: &ContextData, ca: &ContextData) -> Result<ThreePlayerReport> {
    let ab = build_representation(ab).map_err(|e| e.in_pair("ab"))?;
    let bc = build_representation(bc).map_err(|e| e.in_pair("bc"))?;
    let ca = build_representation(ca).map_err(|e| e.in_pair("ca"))?;
    let (u_ab_bc, discrepancy_ab_bc, raw_discrepancy_ab_bc) = identify(&ab, ab.b_basis(), &bc, bc.a_basis())?;
    let (u_bc_ca, discrepancy_bc_ca, raw_discrepancy_bc_ca) = identify(&bc, bc.b_basis(), &ca, ca.a_basis())?;
    Ok(ThreePlayerReport {
        ab,
        bc,
        ca,
        u_ab_bc,
        u_bc_ca,
        discrepancy_ab_bc,
        discrepancy_bc_ca,
        raw_discrepancy_ab_bc,
        raw_discrepancy_bc_ca,
    })
}
