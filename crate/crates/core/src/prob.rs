//! Contextual probability data: outcomes, marginal distributions, transition
//! matrices and the order-dependent joint tables built from them.
//!
//! All vectors and matrices use the fixed outcome order of the alphabet
//! (index 0 is `F`, index 1 is `I` for dichotomous observables), so the JSON
//! layouts are stable.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::format_sig;

/// Tolerance for every stochasticity and consistency check on probability data.
pub const TOLERANCE: f64 = 1e-12;

/// Index into an ordered outcome alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Outcome(pub usize);

impl Outcome {
    pub const F: Outcome = Outcome(0);
    pub const I: Outcome = Outcome(1);

    pub fn index(self) -> usize {
        self.0
    }

    pub fn label(self) -> String {
        match self.0 {
            0 => "F".to_string(),
            1 => "I".to_string(),
            k => k.to_string(),
        }
    }

    /// Parses `F`, `I` or a bare index.
    pub fn parse(label: &str) -> Result<Outcome> {
        match label.trim() {
            "F" | "f" => Ok(Outcome::F),
            "I" | "i" => Ok(Outcome::I),
            other => other
                .parse::<usize>()
                .map(Outcome)
                .map_err(|_| Error::UnknownOutcome(other.to_string())),
        }
    }

    /// Numeric encoding of a dichotomous outcome: `F = +1`, `I = -1`.
    pub fn spin(self) -> Option<f64> {
        match self.0 {
            0 => Some(1.0),
            1 => Some(-1.0),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

fn check_probability_vector(probs: &[f64]) -> Result<f64> {
    if probs.len() < 2 {
        return Err(Error::AlphabetTooSmall(probs.len()));
    }
    for (index, &value) in probs.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
        if value < 0.0 {
            return Err(Error::NegativeEntry { index, value });
        }
        if value > 1.0 + TOLERANCE {
            return Err(Error::EntryAboveOne { index, value });
        }
    }
    Ok(probs.iter().sum())
}

/// Probability vector over an ordered alphabet.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum = check_probability_vector(&probs)?;
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(Error::SumNotOne { sum: format_sig(sum) });
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on outcome `k`.
    pub fn point(n: usize, k: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[k] = 1.0;
        Self { probs }
    }

    /// Two-outcome distribution `(p, 1 - p)`.
    pub fn binary(p_f: f64) -> Result<Self> {
        Self::new(vec![p_f, 1.0 - p_f])
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, outcome: Outcome) -> f64 {
        self.probs[outcome.0]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }

    pub fn is_uniform(&self, tol: f64) -> bool {
        let u = 1.0 / self.len() as f64;
        self.probs.iter().all(|&p| (p - u).abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl<'de> Deserialize<'de> for Distribution {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let probs = Vec::<f64>::deserialize(d)?;
        Distribution::new(probs).map_err(serde::de::Error::custom)
    }
}

/// Row-stochastic matrix: `rows[α][β] = p(β | α)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct TransitionMatrix {
    rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::AlphabetTooSmall(rows.len()));
        }
        let width = rows[0].len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {width}",
                    row.len()
                )));
            }
            let sum = check_probability_vector(row).map_err(|e| e.in_component(format!("row {r}")))?;
            if (sum - 1.0).abs() > TOLERANCE {
                return Err(Error::RowSumNotOne {
                    row: r,
                    sum: format_sig(sum),
                });
            }
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self { rows }
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            rows: vec![vec![1.0 / n as f64; n]; n],
        }
    }

    /// The 2×2 symmetric matrix `[[p, 1-p], [1-p, p]]`.
    pub fn binary_symmetric(p_same: f64) -> Result<Self> {
        Self::new(vec![vec![p_same, 1.0 - p_same], vec![1.0 - p_same, p_same]])
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.rows[0].len()
    }

    /// `p(result | given)`.
    pub fn get(&self, given: Outcome, result: Outcome) -> f64 {
        self.rows[given.0][result.0]
    }

    pub fn row(&self, given: Outcome) -> Distribution {
        Distribution {
            probs: self.rows[given.0].clone(),
        }
    }

    pub fn has_zero_entry(&self) -> bool {
        self.rows.iter().flatten().any(|&p| p <= 0.0)
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.n_rows() == self.n_cols()
            && (0..self.n_cols()).all(|j| {
                let s: f64 = self.rows.iter().map(|r| r[j]).sum();
                (s - 1.0).abs() <= tol
            })
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.n_rows() == self.n_cols()
            && (0..self.n_rows()).all(|i| (0..i).all(|j| (self.rows[i][j] - self.rows[j][i]).abs() <= tol))
    }

    /// Transposed matrix, validated as row-stochastic.
    pub fn transpose(&self) -> Result<Self> {
        let rows = (0..self.n_cols())
            .map(|j| self.rows.iter().map(|r| r[j]).collect())
            .collect();
        Self::new(rows)
    }
}

impl<'de> Deserialize<'de> for TransitionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        TransitionMatrix::new(rows).map_err(serde::de::Error::custom)
    }
}

/// Wire format of [`ContextData`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContextDataRaw {
    pub marginal_a: Vec<f64>,
    pub marginal_b: Vec<f64>,
    pub trans_b_given_a: Vec<Vec<f64>>,
    pub trans_a_given_b: Vec<Vec<f64>>,
}

/// Validated probabilistic data for a pair of observables `a`, `b` under one
/// context: both marginals and both transition matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ContextDataRaw", into = "ContextDataRaw")]
pub struct ContextData {
    marginal_a: Distribution,
    marginal_b: Distribution,
    trans_b_given_a: TransitionMatrix,
    trans_a_given_b: TransitionMatrix,
    symmetric: bool,
    positive: bool,
}

impl ContextData {
    pub fn new(
        marginal_a: Distribution,
        marginal_b: Distribution,
        trans_b_given_a: TransitionMatrix,
        trans_a_given_b: TransitionMatrix,
    ) -> Result<Self> {
        let (na, nb) = (marginal_a.len(), marginal_b.len());
        if trans_b_given_a.n_rows() != na || trans_b_given_a.n_cols() != nb {
            return Err(Error::DimensionMismatch(format!(
                "trans_b_given_a must be {na}×{nb}, got {}×{}",
                trans_b_given_a.n_rows(),
                trans_b_given_a.n_cols()
            )));
        }
        if trans_a_given_b.n_rows() != nb || trans_a_given_b.n_cols() != na {
            return Err(Error::DimensionMismatch(format!(
                "trans_a_given_b must be {nb}×{na}, got {}×{}",
                trans_a_given_b.n_rows(),
                trans_a_given_b.n_cols()
            )));
        }
        let symmetric = (0..na)
            .all(|a| (0..nb).all(|b| (trans_b_given_a.rows[a][b] - trans_a_given_b.rows[b][a]).abs() <= TOLERANCE));
        let positive = marginal_a.is_strictly_positive()
            && marginal_b.is_strictly_positive()
            && !trans_b_given_a.has_zero_entry()
            && !trans_a_given_b.has_zero_entry();
        Ok(Self {
            marginal_a,
            marginal_b,
            trans_b_given_a,
            trans_a_given_b,
            symmetric,
            positive,
        })
    }

    /// Symmetrically conditioned data: `p(a|b)` is the transpose of `p(b|a)`,
    /// which therefore has to be doubly stochastic.
    pub fn symmetric(
        marginal_a: Distribution,
        marginal_b: Distribution,
        trans_b_given_a: TransitionMatrix,
    ) -> Result<Self> {
        let back = trans_b_given_a
            .transpose()
            .map_err(|e| e.in_component("trans_a_given_b"))?;
        Self::new(marginal_a, marginal_b, trans_b_given_a, back)
    }

    pub fn marginal_a(&self) -> &Distribution {
        &self.marginal_a
    }

    pub fn marginal_b(&self) -> &Distribution {
        &self.marginal_b
    }

    pub fn trans_b_given_a(&self) -> &TransitionMatrix {
        &self.trans_b_given_a
    }

    pub fn trans_a_given_b(&self) -> &TransitionMatrix {
        &self.trans_a_given_b
    }

    /// R1: `p(b=β | a=α) = p(a=α | b=β)` for all α, β.
    pub fn is_symmetrically_conditioned(&self) -> bool {
        self.symmetric
    }

    /// R2: every marginal and transition probability is strictly positive.
    pub fn is_strictly_positive(&self) -> bool {
        self.positive
    }

    /// Name of the first zero entry, used by R2 error messages.
    pub fn first_zero_entry(&self) -> Option<String> {
        let in_vec = |name: &str, d: &Distribution| {
            d.probs
                .iter()
                .position(|&p| p <= 0.0)
                .map(|k| format!("{name}[{}]", Outcome(k)))
        };
        let in_mat = |name: &str, m: &TransitionMatrix| {
            m.rows.iter().enumerate().find_map(|(i, row)| {
                row.iter()
                    .position(|&p| p <= 0.0)
                    .map(|j| format!("{name}[{}][{}]", Outcome(i), Outcome(j)))
            })
        };
        in_vec("marginal_a", &self.marginal_a)
            .or_else(|| in_vec("marginal_b", &self.marginal_b))
            .or_else(|| in_mat("trans_b_given_a", &self.trans_b_given_a))
            .or_else(|| in_mat("trans_a_given_b", &self.trans_a_given_b))
    }

    /// `p^{ab}(α, β) = p_a(α) p(β | α)`: `a` acts first.
    pub fn joint_ab(&self) -> JointTable {
        joint_distribution(&self.marginal_a, &self.trans_b_given_a)
            .expect("dimensions checked at construction")
            .relabel("a", "b")
    }

    /// `p^{ba}(β, α) = p_b(β) p(α | β)`: `b` acts first.
    pub fn joint_ba(&self) -> JointTable {
        joint_distribution(&self.marginal_b, &self.trans_a_given_b)
            .expect("dimensions checked at construction")
            .relabel("b", "a")
    }

    /// The same data with the roles of `a` and `b` exchanged.
    pub fn swapped(&self) -> ContextData {
        ContextData {
            marginal_a: self.marginal_b.clone(),
            marginal_b: self.marginal_a.clone(),
            trans_b_given_a: self.trans_a_given_b.clone(),
            trans_a_given_b: self.trans_b_given_a.clone(),
            symmetric: self.symmetric,
            positive: self.positive,
        }
    }

    /// Largest componentwise difference between two data sets of equal shape.
    pub fn max_abs_diff(&self, other: &ContextData) -> f64 {
        let mat = |x: &TransitionMatrix, y: &TransitionMatrix| {
            x.rows
                .iter()
                .flatten()
                .zip(y.rows.iter().flatten())
                .map(|(p, q)| (p - q).abs())
                .fold(0.0, f64::max)
        };
        self.marginal_a
            .max_abs_diff(&other.marginal_a)
            .max(self.marginal_b.max_abs_diff(&other.marginal_b))
            .max(mat(&self.trans_b_given_a, &other.trans_b_given_a))
            .max(mat(&self.trans_a_given_b, &other.trans_a_given_b))
    }
}

impl TryFrom<ContextDataRaw> for ContextData {
    type Error = Error;

    fn try_from(raw: ContextDataRaw) -> Result<Self> {
        let marginal_a = Distribution::new(raw.marginal_a).map_err(|e| e.in_component("marginal_a"))?;
        let marginal_b = Distribution::new(raw.marginal_b).map_err(|e| e.in_component("marginal_b"))?;
        let trans_b_given_a =
            TransitionMatrix::new(raw.trans_b_given_a).map_err(|e| e.in_component("trans_b_given_a"))?;
        let trans_a_given_b =
            TransitionMatrix::new(raw.trans_a_given_b).map_err(|e| e.in_component("trans_a_given_b"))?;
        ContextData::new(marginal_a, marginal_b, trans_b_given_a, trans_a_given_b)
    }
}

impl From<ContextData> for ContextDataRaw {
    fn from(d: ContextData) -> Self {
        ContextDataRaw {
            marginal_a: d.marginal_a.probs,
            marginal_b: d.marginal_b.probs,
            trans_b_given_a: d.trans_b_given_a.rows,
            trans_a_given_b: d.trans_a_given_b.rows,
        }
    }
}

/// Validates candidate data, naming the offending component on failure.
pub fn validate_context_data(raw: ContextDataRaw) -> Result<ContextData> {
    ContextData::try_from(raw)
}

/// Joint distribution of an ordered pair of observables:
/// `entries[α][β] = p(first = α, second = β)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointTableRaw", into = "JointTableRaw")]
pub struct JointTable {
    pub first: String,
    pub second: String,
    entries: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JointTableRaw {
    first: String,
    second: String,
    entries: Vec<Vec<f64>>,
}

impl TryFrom<JointTableRaw> for JointTable {
    type Error = Error;

    fn try_from(raw: JointTableRaw) -> Result<Self> {
        JointTable::new(raw.first, raw.second, raw.entries)
    }
}

impl From<JointTable> for JointTableRaw {
    fn from(j: JointTable) -> Self {
        JointTableRaw {
            first: j.first,
            second: j.second,
            entries: j.entries,
        }
    }
}

impl JointTable {
    pub fn new(first: impl Into<String>, second: impl Into<String>, entries: Vec<Vec<f64>>) -> Result<Self> {
        if entries.is_empty() || entries[0].is_empty() {
            return Err(Error::AlphabetTooSmall(0));
        }
        let width = entries[0].len();
        let mut sum = 0.0;
        for (r, row) in entries.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "joint row {r} has {} entries, expected {width}",
                    row.len()
                )));
            }
            for (c, &value) in row.iter().enumerate() {
                let index = r * width + c;
                if !value.is_finite() {
                    return Err(Error::NonFinite { index, value });
                }
                if value < 0.0 {
                    return Err(Error::NegativeEntry { index, value });
                }
                if value > 1.0 + TOLERANCE {
                    return Err(Error::EntryAboveOne { index, value });
                }
                sum += value;
            }
        }
        if (sum - 1.0).abs() > TOLERANCE {
            return Err(Error::SumNotOne { sum: format_sig(sum) });
        }
        Ok(Self {
            first: first.into(),
            second: second.into(),
            entries,
        })
    }

    /// Empirical table `counts / total`.
    pub fn from_counts(first: impl Into<String>, second: impl Into<String>, counts: &[Vec<u64>]) -> Result<Self> {
        let total: u64 = counts.iter().flatten().sum();
        if total == 0 {
            return Err(Error::EmptySequence);
        }
        let n = total as f64;
        let entries = counts
            .iter()
            .map(|row| row.iter().map(|&c| c as f64 / n).collect())
            .collect();
        Self::new(first, second, entries)
    }

    pub fn relabel(mut self, first: impl Into<String>, second: impl Into<String>) -> Self {
        self.first = first.into();
        self.second = second.into();
        self
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, first: Outcome, second: Outcome) -> f64 {
        self.entries[first.0][second.0]
    }

    pub fn n_first(&self) -> usize {
        self.entries.len()
    }

    pub fn n_second(&self) -> usize {
        self.entries[0].len()
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().flatten().sum()
    }

    pub fn first_marginal(&self) -> Vec<f64> {
        self.entries.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn second_marginal(&self) -> Vec<f64> {
        (0..self.n_second())
            .map(|j| self.entries.iter().map(|r| r[j]).sum())
            .collect()
    }

    /// The same joint viewed with the order of observables exchanged.
    pub fn transposed(&self) -> JointTable {
        JointTable {
            first: self.second.clone(),
            second: self.first.clone(),
            entries: (0..self.n_second())
                .map(|j| self.entries.iter().map(|r| r[j]).collect())
                .collect(),
        }
    }
}

/// `p(first = α, second = β) = p_first(α) · p(β | α)`.
pub fn joint_distribution(first_marginal: &Distribution, trans: &TransitionMatrix) -> Result<JointTable> {
    if trans.n_rows() != first_marginal.len() {
        return Err(Error::DimensionMismatch(format!(
            "marginal has {} outcomes but transition matrix has {} rows",
            first_marginal.len(),
            trans.n_rows()
        )));
    }
    let entries = first_marginal
        .probs
        .iter()
        .zip(&trans.rows)
        .map(|(&p, row)| row.iter().map(|&q| p * q).collect())
        .collect();
    JointTable::new("first", "second", entries)
}

/// Outcome of comparing `p^{ab}(α, β)` with `p^{ba}(β, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReversibilityReport {
    pub consistent: bool,
    pub max_discrepancy: f64,
}

/// Checks whether the two orders of play induce the same joint distribution.
pub fn check_reversibility(data: &ContextData) -> ReversibilityReport {
    let ab = data.joint_ab();
    let ba = data.joint_ba();
    let mut max_discrepancy = 0.0_f64;
    for a in 0..ab.n_first() {
        for b in 0..ab.n_second() {
            max_discrepancy = max_discrepancy.max((ab.entries[a][b] - ba.entries[b][a]).abs());
        }
    }
    ReversibilityReport {
        consistent: max_discrepancy <= TOLERANCE,
        max_discrepancy,
    }
}
