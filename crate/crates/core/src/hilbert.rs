//! Finite-dimensional complex Hilbert space kernel: inner products, the Born
//! rule, diagonal observables and basis expansions.
//!
//! The inner product is linear in the first argument and conjugate-linear in
//! the second, `⟨φ, ψ⟩ = Σ φ(k) conj(ψ(k))`.

use num_complex::Complex64;
use rand::Rng;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::format::format_sig;

/// Tolerance for unit norm and orthonormality checks.
pub const HILBERT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Delta function concentrated at index `k`.
    pub fn delta(n: usize, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[k] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n])
    }

    /// Uniformly random unit vector direction (not Haar, but full support).
    pub fn random_unit<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let v = Self::random_raw(n, rng);
            let norm = v.norm();
            if norm > 1e-3 {
                return v.scale(Complex64::new(1.0 / norm, 0.0));
            }
        }
    }

    fn random_raw<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self(
            (0..n)
                .map(|_| Complex64::new(rng.random::<f64>() * 2.0 - 1.0, rng.random::<f64>() * 2.0 - 1.0))
                .collect(),
        )
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_unit(&self) -> bool {
        self.is_finite() && (self.norm_sqr() - 1.0).abs() <= HILBERT_TOLERANCE
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self(self.0.iter().map(|z| z * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(x, y)| x - y).collect())
    }

    /// Adds `c · v` in place.
    pub fn axpy(&mut self, c: Complex64, v: &Self) {
        for (x, y) in self.0.iter_mut().zip(&v.0) {
            *x += c * y;
        }
    }
}

impl Serialize for ComplexVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for z in &self.0 {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

fn check_dims(v: &ComplexVector, w: &ComplexVector) -> Result<()> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vectors of dimension {} and {}",
            v.dim(),
            w.dim()
        )));
    }
    Ok(())
}

fn dot(v: &[Complex64], w: &[Complex64]) -> Complex64 {
    v.iter().zip(w).map(|(x, y)| x * y.conj()).sum()
}

/// `⟨v, w⟩ = Σ v(k) conj(w(k))`.
pub fn inner_product(v: &ComplexVector, w: &ComplexVector) -> Result<Complex64> {
    check_dims(v, w)?;
    Ok(dot(&v.0, &w.0))
}

/// `|⟨state, basis_vector⟩|²` for unit vectors.
pub fn born_probability(state: &ComplexVector, basis_vector: &ComplexVector) -> Result<f64> {
    check_dims(state, basis_vector)?;
    for v in [state, basis_vector] {
        if !v.is_unit() {
            return Err(Error::NotUnitNorm(v.norm_sqr()));
        }
    }
    Ok(dot(&state.0, &basis_vector.0).norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis {
    vectors: Vec<ComplexVector>,
}

impl OrthonormalBasis {
    /// Validates pairwise inner products against the Kronecker delta.
    pub fn new(vectors: Vec<ComplexVector>) -> Result<Self> {
        let n = vectors.len();
        if n == 0 {
            return Err(Error::AlphabetTooSmall(0));
        }
        for v in &vectors {
            if v.dim() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{n} basis vectors of dimension {}",
                    v.dim()
                )));
            }
            if !v.is_finite() {
                return Err(Error::NotUnitNorm(f64::NAN));
            }
        }
        for i in 0..n {
            for j in 0..=i {
                let ip = dot(&vectors[i].0, &vectors[j].0);
                let target = if i == j { 1.0 } else { 0.0 };
                if (ip - Complex64::new(target, 0.0)).norm() > HILBERT_TOLERANCE {
                    return Err(Error::NotOrthonormal {
                        i,
                        j,
                        value: format!("{}{:+}i", format_sig(ip.re), format_sig(ip.im)),
                    });
                }
            }
        }
        Ok(Self { vectors })
    }

    /// Delta functions `e_k(·) = δ(k - ·)`.
    pub fn delta(n: usize) -> Self {
        Self {
            vectors: (0..n).map(|k| ComplexVector::delta(n, k)).collect(),
        }
    }

    /// Classical Gram–Schmidt with one re-orthogonalization pass.
    pub fn gram_schmidt(vectors: Vec<ComplexVector>) -> Result<Self> {
        let mut out: Vec<ComplexVector> = Vec::with_capacity(vectors.len());
        for v in vectors {
            let mut w = v;
            for _ in 0..2 {
                for q in &out {
                    let c = dot(&w.0, &q.0);
                    w.axpy(-c, q);
                }
            }
            let norm = w.norm();
            if norm < 1e-8 {
                return Err(Error::Representation("linearly dependent input to Gram–Schmidt".into()));
            }
            out.push(w.scale(Complex64::new(1.0 / norm, 0.0)));
        }
        Self::new(out)
    }

    /// Random orthonormal basis from seeded complex vectors.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let vs = (0..n).map(|_| ComplexVector::random_raw(n, rng)).collect();
            if let Ok(b) = Self::gram_schmidt(vs) {
                return b;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &ComplexVector {
        &self.vectors[k]
    }

    /// Basis with vector `k` multiplied by the unit phase `phases[k]`.
    pub fn rephased(&self, phases: &[Complex64]) -> Self {
        Self {
            vectors: self.vectors.iter().zip(phases).map(|(v, &p)| v.scale(p)).collect(),
        }
    }

    /// `|⟨self_i, other_j⟩|²` for all `i`, `j`.
    pub fn transition_probabilities(&self, other: &OrthonormalBasis) -> Vec<Vec<f64>> {
        self.vectors
            .iter()
            .map(|u| other.vectors.iter().map(|w| dot(&u.0, &w.0).norm_sqr()).collect())
            .collect()
    }
}

impl Serialize for OrthonormalBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.vectors.serialize(s)
    }
}

/// Coefficients `c_k = ⟨v, e_k⟩`, so that `v = Σ c_k e_k`.
pub fn expand_in_basis(v: &ComplexVector, basis: &OrthonormalBasis) -> Result<Vec<Complex64>> {
    if v.dim() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of dimension {} against basis of dimension {}",
            v.dim(),
            basis.dim()
        )));
    }
    Ok(basis.vectors.iter().map(|e| dot(&v.0, &e.0)).collect())
}

/// `Σ c_k e_k`.
pub fn combine(coefficients: &[Complex64], basis: &OrthonormalBasis) -> ComplexVector {
    let mut out = ComplexVector::zeros(basis.dim());
    for (c, e) in coefficients.iter().zip(&basis.vectors) {
        out.axpy(*c, e);
    }
    out
}

/// Self-adjoint operator given by its eigenbasis and real eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalObservable {
    basis: OrthonormalBasis,
    eigenvalues: Vec<f64>,
}

impl DiagonalObservable {
    pub fn new(basis: OrthonormalBasis, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues for a basis of dimension {}",
                eigenvalues.len(),
                basis.dim()
            )));
        }
        if let Some((index, &value)) = eigenvalues.iter().enumerate().find(|(_, x)| !x.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(Self { basis, eigenvalues })
    }

    /// Dichotomous observable with eigenvalues `F = +1`, `I = -1`.
    pub fn spin(basis: OrthonormalBasis) -> Result<Self> {
        Self::new(basis, vec![1.0, -1.0])
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `Â v = Σ λ_k ⟨v, e_k⟩ e_k`.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        let coeffs = expand_in_basis(v, &self.basis)?;
        let scaled: Vec<_> = coeffs.iter().zip(&self.eigenvalues).map(|(c, &l)| c * l).collect();
        Ok(combine(&scaled, &self.basis))
    }
}

/// `Σ_k λ_k |⟨state, e_k⟩|²`.
pub fn expectation(observable: &DiagonalObservable, state: &ComplexVector) -> Result<f64> {
    if !state.is_unit() {
        return Err(Error::NotUnitNorm(state.norm_sqr()));
    }
    observable
        .basis
        .vectors
        .iter()
        .zip(&observable.eigenvalues)
        .map(|(e, &l)| born_probability(state, e).map(|p| l * p))
        .sum()
}

/// Unitary sending `from_k` to `to_k` for every basis index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisMap {
    from: OrthonormalBasis,
    to: OrthonormalBasis,
}

impl BasisMap {
    pub fn new(from: OrthonormalBasis, to: OrthonormalBasis) -> Result<Self> {
        if from.dim() != to.dim() {
            return Err(Error::DimensionMismatch(format!(
                "basis map from dimension {} to {}",
                from.dim(),
                to.dim()
            )));
        }
        Ok(Self { from, to })
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        let coeffs = expand_in_basis(v, &self.from)?;
        Ok(combine(&coeffs, &self.to))
    }

    /// Matrix `U[r][c]` in the standard basis.
    pub fn matrix(&self) -> Vec<Vec<Complex64>> {
        let n = self.from.dim();
        let cols: Vec<ComplexVector> = (0..n)
            .map(|c| {
                self.apply(&ComplexVector::delta(n, c))
                    .expect("dimensions checked at construction")
            })
            .collect();
        (0..n).map(|r| cols.iter().map(|col| col.0[r]).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_pcg::Pcg64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inner_product_examples() {
        let e1 = ComplexVector::delta(2, 0);
        let e2 = ComplexVector::delta(2, 1);
        assert_eq!(inner_product(&e1, &e2).unwrap(), c(0.0, 0.0));
        let v = ComplexVector::new(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        assert!((inner_product(&v, &v).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(inner_product(&e1, &ComplexVector::delta(3, 0)).is_err());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_second_argument() {
        let v = ComplexVector::new(vec![c(1.0, 0.0), c(0.0, 0.0)]);
        let w = ComplexVector::new(vec![c(0.0, 1.0), c(0.0, 0.0)]);
        assert_eq!(inner_product(&v, &w).unwrap(), c(0.0, -1.0));
    }

    #[test]
    fn born_probability_examples() {
        let e1 = ComplexVector::delta(2, 0);
        let e2 = ComplexVector::delta(2, 1);
        assert_eq!(born_probability(&e1, &e1).unwrap(), 1.0);
        assert_eq!(born_probability(&e1, &e2).unwrap(), 0.0);
        let not_unit = ComplexVector::from_real(&[1.0, 1.0]);
        assert!(matches!(born_probability(&not_unit, &e1), Err(Error::NotUnitNorm(_))));
    }

    #[test]
    fn expectation_examples() {
        let obs = DiagonalObservable::spin(OrthonormalBasis::delta(2)).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let balanced = ComplexVector::new(vec![c(h, 0.0), c(0.0, h)]);
        assert!(expectation(&obs, &balanced).unwrap().abs() < 1e-15);
        assert_eq!(expectation(&obs, &ComplexVector::delta(2, 0)).unwrap(), 1.0);
    }

    #[test]
    fn expansion_in_delta_basis_is_identity() {
        let v = ComplexVector::new(vec![c(0.3, -0.1), c(0.2, 0.9)]);
        let coeffs = expand_in_basis(&v, &OrthonormalBasis::delta(2)).unwrap();
        assert_eq!(coeffs, v.entries());
    }

    #[test]
    fn basis_vector_expands_to_unit_coefficients() {
        let mut rng = Pcg64::seed_from_u64(3);
        let b = OrthonormalBasis::random(3, &mut rng);
        let coeffs = expand_in_basis(b.vector(1), &b).unwrap();
        for (k, z) in coeffs.iter().enumerate() {
            let target = if k == 1 { 1.0 } else { 0.0 };
            assert!((z - c(target, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let v = ComplexVector::from_real(&[1.0, 0.0]);
        let w = ComplexVector::from_real(&[0.6, 0.8]);
        assert!(matches!(
            OrthonormalBasis::new(vec![v, w]),
            Err(Error::NotOrthonormal { i: 1, j: 0, .. })
        ));
    }

    #[test]
    fn operator_form_matches_born_form() {
        let mut rng = Pcg64::seed_from_u64(11);
        let b = OrthonormalBasis::random(4, &mut rng);
        let obs = DiagonalObservable::new(b, vec![2.0, -1.0, 0.5, 3.0]).unwrap();
        let psi = ComplexVector::random_unit(4, &mut rng);
        let via_born = expectation(&obs, &psi).unwrap();
        let via_op = inner_product(&obs.apply(&psi).unwrap(), &psi).unwrap();
        assert!(via_op.im.abs() < 1e-12);
        assert!((via_op.re - via_born).abs() < 1e-12);
    }

    #[test]
    fn basis_map_is_unitary() {
        let mut rng = Pcg64::seed_from_u64(5);
        let u = BasisMap::new(
            OrthonormalBasis::random(3, &mut rng),
            OrthonormalBasis::random(3, &mut rng),
        )
        .unwrap();
        let m = u.matrix();
        for i in 0..3 {
            for j in 0..3 {
                let ip: Complex64 = (0..3).map(|r| m[r][i] * m[r][j].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c(target, 0.0)).norm() < 1e-12);
            }
        }
    }
}
