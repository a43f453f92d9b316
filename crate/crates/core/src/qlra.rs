//! Quantum-like representation of two-outcome contextual data.
//!
//! Starting from the marginals of `a` and `b` and the transition matrix
//! `p(b | a)`, the interference coefficient of each `b` outcome measures how
//! far `p_b(β)` deviates from the total-probability prediction
//! `Σ_α p_a(α) p(β | α)`. When every coefficient lies in `[-1, 1]` the context
//! is trigonometric: the coefficients are cosines of phases and the data is
//! reproduced by a complex amplitude `ψ` through the Born rule, together
//! with an orthonormal eigenbasis for `a` in which `ψ` has the real
//! coordinates `√p_a(α)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{
    born_probability, inner_product, ComplexVector, DiagonalObservable, OrthonormalBasis, HILBERT_TOLERANCE,
};
use crate::prob::{ContextData, Distribution, TransitionMatrix, TOLERANCE};

/// Tolerance on the phase-difference constraint `θ₂ − θ₁ = π (mod 2π)`.
pub const PHASE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Trigonometric,
    Hyperbolic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceProfile {
    pub lambda: Vec<f64>,
    pub classification: Classification,
    /// Relative phases per `b` outcome; `None` for hyperbolic contexts.
    pub theta: Option<Vec<f64>>,
}

fn require_dichotomous(data: &ContextData) -> Result<()> {
    for n in [data.marginal_a().len(), data.marginal_b().len()] {
        if n != 2 {
            return Err(Error::NotDichotomous(n));
        }
    }
    Ok(())
}

/// `λ(β) = [p_b(β) − Σ_α p_a(α) p(β|α)] / [2 √(Π_α p_a(α) p(β|α))]`.
pub fn interference_coefficients(data: &ContextData) -> Result<Vec<f64>> {
    require_dichotomous(data)?;
    if let Some(entry) = data.first_zero_entry() {
        return Err(Error::ZeroProbability(entry));
    }
    let pa = data.marginal_a().probs();
    let pb = data.marginal_b().probs();
    let t = data.trans_b_given_a().rows();
    Ok((0..pb.len())
        .map(|b| {
            let terms: Vec<f64> = (0..pa.len()).map(|a| pa[a] * t[a][b]).collect();
            let classical: f64 = terms.iter().sum();
            let product: f64 = terms.iter().product();
            (pb[b] - classical) / (2.0 * product.sqrt())
        })
        .collect())
}

/// Trigonometric iff every `|λ| ≤ 1`; the boundary counts as trigonometric.
pub fn classify_context(lambdas: &[f64]) -> Classification {
    if lambdas.iter().all(|l| l.abs() <= 1.0) {
        Classification::Trigonometric
    } else {
        Classification::Hyperbolic
    }
}

/// Wraps an angle into `(-π, π]`.
fn wrap(angle: f64) -> f64 {
    let r = angle.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Phases with `cos θ(β) = λ(β)` and `θ₂ − θ₁ = π (mod 2π)`.
///
/// `θ₁ = arccos λ₁`; `θ₂` is taken from whichever arccos branch meets the
/// difference constraint. Near `|λ| = 1` the arccos is ill-conditioned, so
/// when neither branch meets the constraint the snapped value `θ₁ + π` is
/// accepted provided its cosine still reproduces `λ₂`.
pub fn select_phases(lambdas: &[f64]) -> Result<Vec<f64>> {
    if lambdas.len() != 2 {
        return Err(Error::NotDichotomous(lambdas.len()));
    }
    let clamp = |l: f64| l.clamp(-1.0, 1.0);
    let theta1 = clamp(lambdas[0]).acos();
    let base = clamp(lambdas[1]).acos();
    for theta2 in [base, TAU - base] {
        if wrap(theta2 - theta1 - PI).abs() <= PHASE_TOLERANCE {
            return Ok(vec![theta1, theta2]);
        }
    }
    let snapped = theta1 + PI;
    if (snapped.cos() - lambdas[1]).abs() <= TOLERANCE {
        return Ok(vec![theta1, snapped]);
    }
    Err(Error::PhaseConstraint)
}

/// Interference coefficients, classification and (when defined) phases.
pub fn interference_profile(data: &ContextData) -> Result<InterferenceProfile> {
    let lambda = interference_coefficients(data)?;
    let classification = classify_context(&lambda);
    let theta = match classification {
        Classification::Trigonometric if data.is_symmetrically_conditioned() => select_phases(&lambda).ok(),
        _ => None,
    };
    Ok(InterferenceProfile {
        lambda,
        classification,
        theta,
    })
}

/// Complex amplitude, eigenbases and phases reproducing a context.
#[derive(Debug, Clone, PartialEq)]
pub struct QLRepresentation {
    psi: ComplexVector,
    b_basis: OrthonormalBasis,
    a_basis: OrthonormalBasis,
    profile: InterferenceProfile,
    source: ContextData,
}

impl QLRepresentation {
    pub fn psi(&self) -> &ComplexVector {
        &self.psi
    }

    /// Delta functions `e_β^b`.
    pub fn b_basis(&self) -> &OrthonormalBasis {
        &self.b_basis
    }

    /// Eigenvectors `e_α^a`.
    pub fn a_basis(&self) -> &OrthonormalBasis {
        &self.a_basis
    }

    pub fn profile(&self) -> &InterferenceProfile {
        &self.profile
    }

    pub fn source(&self) -> &ContextData {
        &self.source
    }

    pub fn theta(&self) -> &[f64] {
        self.profile.theta.as_deref().unwrap_or(&[])
    }

    /// `â` with eigenvalues `F = +1`, `I = -1`.
    pub fn observable_a(&self) -> DiagonalObservable {
        DiagonalObservable::spin(self.a_basis.clone()).expect("two eigenvalues for a 2-d basis")
    }

    /// `b̂` with eigenvalues `F = +1`, `I = -1`.
    pub fn observable_b(&self) -> DiagonalObservable {
        DiagonalObservable::spin(self.b_basis.clone()).expect("two eigenvalues for a 2-d basis")
    }

    /// Largest deviation across the Born-rule invariants (unit norm, both
    /// marginals and the transition probabilities between the bases).
    pub fn invariant_residual(&self) -> f64 {
        let src = &self.source;
        let mut worst = (self.psi.norm_sqr() - 1.0).abs();
        let tr = self.a_basis.transition_probabilities(&self.b_basis);
        for (k, row) in tr.iter().enumerate() {
            let pb = inner_product(&self.psi, self.b_basis.vector(k)).map(|z| z.norm_sqr());
            let pa = inner_product(&self.psi, self.a_basis.vector(k)).map(|z| z.norm_sqr());
            worst = worst
                .max((pb.unwrap_or(f64::INFINITY) - src.marginal_b().probs()[k]).abs())
                .max((pa.unwrap_or(f64::INFINITY) - src.marginal_a().probs()[k]).abs());
            for (t, s) in row.iter().zip(&src.trans_b_given_a().rows()[k]) {
                worst = worst.max((t - s).abs());
            }
        }
        worst
    }

    pub fn check_invariants(&self) -> Result<()> {
        let r = self.invariant_residual();
        if r.is_nan() || r > HILBERT_TOLERANCE {
            return Err(Error::Representation(format!("Born-rule residual {r:e}")));
        }
        Ok(())
    }
}

impl Serialize for QLRepresentation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct View<'a> {
            lambda: &'a [f64],
            theta: &'a [f64],
            classification: Classification,
            psi: &'a ComplexVector,
            a_basis: &'a OrthonormalBasis,
            b_basis: &'a OrthonormalBasis,
            source: &'a ContextData,
        }
        View {
            lambda: &self.profile.lambda,
            theta: self.theta(),
            classification: self.profile.classification,
            psi: &self.psi,
            a_basis: &self.a_basis,
            b_basis: &self.b_basis,
            source: &self.source,
        }
        .serialize(s)
    }
}

/// Builds `ψ(β) = √(p_a(α₁) p(β|α₁)) + e^{iθ(β)} √(p_a(α₂) p(β|α₂))` and the
/// `a`-eigenbasis `e₁ = (u₁₁, u₁₂)`, `e₂ = (e^{iθ₁} u₂₁, e^{iθ₂} u₂₂)` with
/// `u_ij = √p(β_j | α_i)`.
pub fn build_representation(data: &ContextData) -> Result<QLRepresentation> {
    let lambda = interference_coefficients(data)?;
    if !data.is_symmetrically_conditioned() {
        return Err(Error::NotSymmetricallyConditioned);
    }
    let classification = classify_context(&lambda);
    if classification == Classification::Hyperbolic {
        return Err(Error::Hyperbolic);
    }
    let theta = select_phases(&lambda)?;

    let pa = data.marginal_a().probs();
    let t = data.trans_b_given_a().rows();
    let u: Vec<Vec<f64>> = t.iter().map(|row| row.iter().map(|p| p.sqrt()).collect()).collect();
    let phase: Vec<Complex64> = theta.iter().map(|&th| Complex64::from_polar(1.0, th)).collect();

    let psi = ComplexVector::new(
        (0..2)
            .map(|b| Complex64::new((pa[0] * t[0][b]).sqrt(), 0.0) + phase[b] * (pa[1] * t[1][b]).sqrt())
            .collect(),
    );
    let e1 = ComplexVector::from_real(&u[0]);
    let e2 = ComplexVector::new(vec![phase[0] * u[1][0], phase[1] * u[1][1]]);
    let a_basis = OrthonormalBasis::new(vec![e1, e2])?;

    let rep = QLRepresentation {
        psi,
        b_basis: OrthonormalBasis::delta(2),
        a_basis,
        profile: InterferenceProfile {
            lambda,
            classification,
            theta: Some(theta),
        },
        source: data.clone(),
    };
    rep.check_invariants()?;
    Ok(rep)
}

/// Recovers the probabilistic data from a representation via the Born rule.
pub fn reconstruct_data(rep: &QLRepresentation) -> Result<ContextData> {
    let born_all = |basis: &OrthonormalBasis| -> Result<Vec<f64>> {
        basis.vectors().iter().map(|e| born_probability(&rep.psi, e)).collect()
    };
    let marginal_a = Distribution::new(born_all(&rep.a_basis)?)?;
    let marginal_b = Distribution::new(born_all(&rep.b_basis)?)?;
    let b_given_a = TransitionMatrix::new(rep.a_basis.transition_probabilities(&rep.b_basis))?;
    let a_given_b = TransitionMatrix::new(rep.b_basis.transition_probabilities(&rep.a_basis))?;
    ContextData::new(marginal_a, marginal_b, b_given_a, a_given_b)
}
