//! Relative frequencies of trial sequences and a tail-oscillation test of
//! statistical stabilization.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Distribution, Outcome, TransitionMatrix};

pub const DEFAULT_WINDOW_FRACTION: f64 = 0.1;
pub const DEFAULT_STABILIZATION_TOL: f64 = 0.01;

/// Outcomes of repeated trials in one context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSequence {
    pub outcomes: Vec<Outcome>,
    pub context_tag: String,
}

impl TrialSequence {
    pub fn new(outcomes: Vec<Outcome>, context_tag: impl Into<String>) -> Self {
        Self {
            outcomes,
            context_tag: context_tag.into(),
        }
    }

    pub fn from_labels(labels: &[&str], context_tag: impl Into<String>) -> Result<Self> {
        let outcomes = labels.iter().map(|l| Outcome::parse(l)).collect::<Result<_>>()?;
        Ok(Self::new(outcomes, context_tag))
    }

    /// One label per line; blank lines are skipped.
    pub fn parse(text: &str, context_tag: impl Into<String>) -> Result<Self> {
        let outcomes = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(Outcome::parse)
            .collect::<Result<_>>()?;
        Ok(Self::new(outcomes, context_tag))
    }

    pub fn to_text(&self) -> String {
        self.outcomes.iter().map(|o| format!("{o}\n")).collect()
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// At least two outcomes, more if larger indices occur.
    pub fn alphabet_size(&self) -> usize {
        self.outcomes.iter().map(|o| o.0 + 1).max().unwrap_or(0).max(2)
    }
}

/// Occurrences of each outcome over an alphabet of `n` outcomes.
pub fn count_outcomes(outcomes: &[Outcome], n: usize) -> Vec<u64> {
    let mut counts = vec![0u64; n];
    for o in outcomes {
        counts[o.0] += 1;
    }
    counts
}

fn from_counts(counts: &[u64]) -> Result<Distribution> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptySequence);
    }
    Distribution::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
}

/// `ν_N(β) = #{k ≤ N : x_k = β} / N` for the whole sequence.
pub fn estimate_frequencies(seq: &TrialSequence) -> Result<Distribution> {
    from_counts(&count_outcomes(&seq.outcomes, seq.alphabet_size()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilizationReport {
    pub final_frequencies: Distribution,
    pub max_tail_oscillation: f64,
    pub stabilized: bool,
    pub window_fraction: f64,
    pub tolerance: f64,
}

/// Largest distance `|ν_N(β) − ν_final(β)|` over the trailing
/// `window_fraction` of prefix lengths `N` and all outcomes `β`.
pub fn stabilization_report(seq: &TrialSequence, window_fraction: f64, tol: f64) -> Result<StabilizationReport> {
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(Error::BadWindowFraction(window_fraction));
    }
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let len = seq.len();
    let needed = (2.0 / window_fraction).ceil() as usize;
    if len < needed {
        return Err(Error::SequenceTooShort {
            len,
            window_fraction,
            needed,
        });
    }
    let n = seq.alphabet_size();
    let final_counts = count_outcomes(&seq.outcomes, n);
    let final_frequencies = from_counts(&final_counts)?;
    let window = ((window_fraction * len as f64).floor() as usize).max(1);
    let start = len - window + 1;

    let mut running = count_outcomes(&seq.outcomes[..start - 1], n);
    let mut worst = 0.0_f64;
    for (k, o) in seq.outcomes[start - 1..].iter().enumerate() {
        running[o.0] += 1;
        let big_n = (start + k) as f64;
        for (c, p) in running.iter().zip(final_frequencies.probs()) {
            worst = worst.max((*c as f64 / big_n - p).abs());
        }
    }
    Ok(StabilizationReport {
        final_frequencies,
        max_tail_oscillation: worst,
        stabilized: worst <= tol,
        window_fraction,
        tolerance: tol,
    })
}

/// Frequencies of the second outcome among pairs whose first outcome is
/// `given`, i.e. estimates of `p(second | first = given)`.
pub fn conditional_frequencies(pairs: &[(Outcome, Outcome)], given: Outcome) -> Result<Distribution> {
    let n = pairs.iter().map(|(_, s)| s.0 + 1).max().unwrap_or(0).max(2);
    let selected: Vec<Outcome> = pairs.iter().filter(|(f, _)| *f == given).map(|(_, s)| *s).collect();
    from_counts(&count_outcomes(&selected, n))
}

/// Row-by-row conditional frequencies over every first outcome.
pub fn estimate_transition_matrix(pairs: &[(Outcome, Outcome)]) -> Result<TransitionMatrix> {
    let n_first = pairs.iter().map(|(f, _)| f.0 + 1).max().unwrap_or(0).max(2);
    let rows = (0..n_first)
        .map(|k| conditional_frequencies(pairs, Outcome(k)).map(|d| d.probs().to_vec()))
        .collect::<Result<_>>()?;
    TransitionMatrix::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{sample_sequence, GeneratorSpec};

    fn seq(labels: &str) -> TrialSequence {
        TrialSequence::new(
            labels
                .chars()
                .map(|c| Outcome::parse(&c.to_string()).unwrap())
                .collect(),
            "C",
        )
    }

    #[test]
    fn counting() {
        assert_eq!(estimate_frequencies(&seq("FFIF")).unwrap().probs(), &[0.75, 0.25]);
        let alt = seq(&"FI".repeat(500));
        assert_eq!(estimate_frequencies(&alt).unwrap().probs(), &[0.5, 0.5]);
        let err = estimate_frequencies(&seq("")).unwrap_err();
        assert_eq!(err.to_string(), "empty sequence");
    }

    #[test]
    fn constant_sequence_is_stable() {
        let r = stabilization_report(&seq(&"F".repeat(1000)), 0.5, 0.01).unwrap();
        assert!(r.stabilized);
        assert_eq!(r.max_tail_oscillation, 0.0);
    }

    #[test]
    fn drift_is_not_stable() {
        let s = seq(&("F".repeat(500) + &"I".repeat(500)));
        let r = stabilization_report(&s, 0.5, 0.01).unwrap();
        assert!(!r.stabilized);
        // ν_501(F) = 500/501 against the final 1/2
        assert!((r.max_tail_oscillation - (500.0 / 501.0 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn window_checks() {
        let s = seq("FIFIFIFIF");
        assert!(matches!(
            stabilization_report(&s, 0.1, 0.01),
            Err(Error::SequenceTooShort { needed: 20, .. })
        ));
        assert!(matches!(
            stabilization_report(&s, 1.0, 0.01),
            Err(Error::BadWindowFraction(_))
        ));
        assert!(matches!(
            stabilization_report(&s, 0.0, 0.01),
            Err(Error::BadWindowFraction(_))
        ));
    }

    #[test]
    fn fair_coin_stabilizes() {
        let g = GeneratorSpec::new(Distribution::uniform(2), "g_a");
        let s = sample_sequence(&g, 1_000_000, 2024, "C");
        let r = stabilization_report(&s, DEFAULT_WINDOW_FRACTION, DEFAULT_STABILIZATION_TOL).unwrap();
        assert!(r.stabilized, "{}", r.max_tail_oscillation);
        let p = r.final_frequencies.probs()[0];
        assert!((p - 0.5).abs() <= 4.0 * (0.25f64 / 1e6).sqrt());
    }

    #[test]
    fn conditional_estimates() {
        let pairs: Vec<(Outcome, Outcome)> = [("F", "F"), ("F", "I"), ("F", "F"), ("I", "I"), ("I", "F"), ("F", "F")]
            .iter()
            .map(|(a, b)| (Outcome::parse(a).unwrap(), Outcome::parse(b).unwrap()))
            .collect();
        assert_eq!(
            conditional_frequencies(&pairs, Outcome::F).unwrap().probs(),
            &[0.75, 0.25]
        );
        let t = estimate_transition_matrix(&pairs).unwrap();
        assert_eq!(t.rows(), &[vec![0.75, 0.25], vec![0.5, 0.5]]);
        assert_eq!(
            conditional_frequencies(&pairs[..3], Outcome::I),
            Err(Error::EmptySequence)
        );
    }

    #[test]
    fn text_format() {
        let s = TrialSequence::parse("F\nI\n\n  i \n2\n", "C").unwrap();
        assert_eq!(s.outcomes, vec![Outcome::F, Outcome::I, Outcome::I, Outcome(2)]);
        assert_eq!(s.alphabet_size(), 3);
        assert_eq!(TrialSequence::parse(&s.to_text(), "C").unwrap(), s);
        assert!(TrialSequence::parse("F\nX\n", "C").is_err());
    }
}
