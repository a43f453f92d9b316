//! Game simulation by sequentially applied random generators.
//!
//! Every part of a game uses one generator for the chooser and one
//! conditional generator per chooser outcome for the tester. Each generator
//! owns a PCG-64 stream seeded from a hash of `(seed, stream id, partition)`,
//! so results depend only on the seed, the trial count and the number of
//! partitions. Partitions run in parallel; their integer counts are merged
//! in partition order.

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::TrialSequence;
use crate::game::{
    multidim_part_averages, total_averages, GameAverages, GameContexts, GamePart, GameSpec, PartAverages, PayoffMatrix,
};
use crate::hilbert::{born_probability, ComplexVector, OrthonormalBasis};
use crate::prob::{Distribution, JointTable, Outcome};

/// A random source for one distribution, identified by its stream id
/// (for example `"g_a"` or `"g_b|a(F)"`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub distribution: Distribution,
    pub stream_id: String,
}

impl GeneratorSpec {
    pub fn new(distribution: Distribution, stream_id: impl Into<String>) -> Self {
        Self {
            distribution,
            stream_id: stream_id.into(),
        }
    }
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: impl IntoIterator<Item = u8>, mut h: u64) -> u64 {
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Independent stream for `stream_id` within `partition`.
pub fn stream_rng(seed: u64, stream_id: &str, partition: usize) -> Pcg64 {
    let mut h = fnv1a(seed.to_le_bytes(), 0xcbf2_9ce4_8422_2325);
    h = fnv1a(stream_id.bytes().chain([0xff]), h);
    h = fnv1a((partition as u64).to_le_bytes(), h);
    Pcg64::seed_from_u64(h)
}

/// Inverse-CDF draw over the fixed outcome order.
pub fn sample_outcome<R: Rng + ?Sized>(generator: &GeneratorSpec, rng: &mut R) -> Outcome {
    let u: f64 = rng.random();
    let probs = generator.distribution.probs();
    let mut cum = 0.0;
    for (k, &p) in probs.iter().enumerate() {
        cum += p;
        if u < cum {
            return Outcome(k);
        }
    }
    // rounding left the cumulative sum just below u
    Outcome(probs.iter().rposition(|&p| p > 0.0).unwrap_or(0))
}

/// `n` draws from a single generator (partition 0).
pub fn sample_sequence(generator: &GeneratorSpec, n: usize, seed: u64, context_tag: &str) -> TrialSequence {
    let mut rng = stream_rng(seed, &generator.stream_id, 0);
    TrialSequence::new(
        (0..n).map(|_| sample_outcome(generator, &mut rng)).collect(),
        context_tag,
    )
}

/// Generators of one choose-then-test part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartGenerators {
    pub chooser: GeneratorSpec,
    /// Tester generator selected by the chooser's outcome.
    pub conditional: Vec<GeneratorSpec>,
    pub n_tester: usize,
}

impl PartGenerators {
    fn new(chooser_name: &str, tester_name: &str, marginal: Distribution, rows: Vec<Distribution>) -> Result<Self> {
        if rows.len() != marginal.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} conditional generators for {} chooser outcomes",
                rows.len(),
                marginal.len()
            )));
        }
        let n_tester = rows.first().map_or(0, Distribution::len);
        Ok(Self {
            chooser: GeneratorSpec::new(marginal, format!("g_{chooser_name}")),
            conditional: rows
                .into_iter()
                .enumerate()
                .map(|(k, d)| GeneratorSpec::new(d, format!("g_{tester_name}|{chooser_name}({})", Outcome(k))))
                .collect(),
            n_tester,
        })
    }
}

fn partition_sizes(trials: u64, partitions: usize) -> Vec<u64> {
    let p = partitions as u64;
    (0..p).map(|k| trials / p + u64::from(k < trials % p)).collect()
}

/// Counts `[part][chooser][tester]` over all trials.
pub fn run_trials(parts: &[PartGenerators], trials: u64, seed: u64, partitions: usize) -> Result<Vec<Vec<Vec<u64>>>> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    if partitions == 0 {
        return Err(Error::NoPartitions);
    }
    let sizes = partition_sizes(trials, partitions);
    let per_partition: Vec<Vec<Vec<Vec<u64>>>> = sizes
        .par_iter()
        .enumerate()
        .map(|(pi, &n)| {
            parts
                .iter()
                .enumerate()
                .map(|(k, part)| {
                    let tag = |g: &GeneratorSpec| format!("part{}/{}", k + 1, g.stream_id);
                    let mut chooser_rng = stream_rng(seed, &tag(&part.chooser), pi);
                    let mut tester_rngs: Vec<Pcg64> =
                        part.conditional.iter().map(|g| stream_rng(seed, &tag(g), pi)).collect();
                    let mut counts = vec![vec![0u64; part.n_tester]; part.chooser.distribution.len()];
                    for _ in 0..n {
                        let a = sample_outcome(&part.chooser, &mut chooser_rng).0;
                        let b = sample_outcome(&part.conditional[a], &mut tester_rngs[a]).0;
                        counts[a][b] += 1;
                    }
                    counts
                })
                .collect()
        })
        .collect();
    let mut total = per_partition[0].clone();
    for partition in &per_partition[1..] {
        for (acc, part) in total.iter_mut().zip(partition) {
            for (ar, pr) in acc.iter_mut().zip(part) {
                for (a, p) in ar.iter_mut().zip(pr) {
                    *a += p;
                }
            }
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartCounts {
    pub chooser: String,
    pub tester: String,
    /// `counts[α][β]`: chooser outcome `α`, tester answer `β`.
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationReport {
    pub trials: u64,
    pub seed: u64,
    pub partitions: usize,
    pub empirical_counts: Vec<PartCounts>,
    pub empirical_joints: Vec<JointTable>,
    pub empirical_averages: GameAverages,
    pub analytic_averages: GameAverages,
    pub max_deviation: f64,
}

/// Empirical payoff average. Counts are pooled by payoff value first, so a
/// payoff that is constant on the observed cells is reproduced exactly.
fn average_from_counts(counts: &[Vec<u64>], h: &PayoffMatrix) -> f64 {
    let n: u64 = counts.iter().flatten().sum();
    let mut pooled: Vec<(f64, u64)> = Vec::new();
    for (i, row) in counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let v = h.get(i, j);
            match pooled.iter_mut().find(|(w, _)| w.to_bits() == v.to_bits()) {
                Some((_, total)) => *total += c,
                None => pooled.push((v, c)),
            }
        }
    }
    pooled.iter().map(|&(v, c)| v * (c as f64 / n as f64)).sum()
}

fn report(
    spec: &GameSpec,
    counts: Vec<Vec<Vec<u64>>>,
    analytic: GameAverages,
    trials: u64,
    seed: u64,
    partitions: usize,
) -> Result<SimulationReport> {
    let joints = spec
        .parts()
        .iter()
        .zip(&counts)
        .map(|(part, c)| JointTable::from_counts(part.chooser.clone(), part.tester.clone(), c))
        .collect::<Result<Vec<_>>>()?;
    let parts = spec
        .parts()
        .iter()
        .zip(&counts)
        .map(|(part, c)| PartAverages {
            chooser: part.chooser.clone(),
            tester: part.tester.clone(),
            averages: part
                .payoffs
                .iter()
                .map(|(player, h)| (player.clone(), average_from_counts(c, h)))
                .collect(),
        })
        .collect();
    let empirical = GameAverages::from_parts(spec.players(), parts);
    let max_deviation = empirical.max_abs_diff(&analytic);
    Ok(SimulationReport {
        trials,
        seed,
        partitions,
        empirical_counts: spec
            .parts()
            .iter()
            .zip(counts)
            .map(|(part, counts)| PartCounts {
                chooser: part.chooser.clone(),
                tester: part.tester.clone(),
                counts,
            })
            .collect(),
        empirical_joints: joints,
        empirical_averages: empirical,
        analytic_averages: analytic,
        max_deviation,
    })
}

/// Plays every part of `spec` `trials` times.
pub fn simulate_game(
    spec: &GameSpec,
    contexts: &GameContexts,
    trials: u64,
    seed: u64,
    partitions: usize,
) -> Result<SimulationReport> {
    let generators = spec
        .parts()
        .iter()
        .map(|part| {
            let (marginal, trans) = contexts.lookup(&part.chooser, &part.tester)?;
            let rows = (0..trans.n_rows()).map(|k| trans.row(Outcome(k))).collect();
            PartGenerators::new(&part.chooser, &part.tester, marginal.clone(), rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let analytic = total_averages(spec, contexts)?;
    let counts = run_trials(&generators, trials, seed, partitions)?;
    report(spec, counts, analytic, trials, seed, partitions)
}

fn born_distribution(state: &ComplexVector, basis: &OrthonormalBasis) -> Result<Distribution> {
    Distribution::new(
        basis
            .vectors()
            .iter()
            .map(|e| born_probability(state, e))
            .collect::<Result<_>>()?,
    )
}

/// Two-part game on `n`-outcome observables whose generators come from the
/// Born rule: `a` chooses `j` with `|⟨ψ, e_j^a⟩|²` and `b` answers `i` with
/// `|⟨e_i^b, e_j^a⟩|²`, then the roles swap. Only `b`'s payoffs are
/// simulated: `h1[j][i]` in part 1 and `h2[i][j]` in part 2.
pub fn simulate_multidim(
    psi: &ComplexVector,
    a_basis: &OrthonormalBasis,
    b_basis: &OrthonormalBasis,
    payoffs: (&PayoffMatrix, &PayoffMatrix),
    trials: u64,
    seed: u64,
    partitions: usize,
) -> Result<SimulationReport> {
    let (h1, h2) = payoffs;
    let (e1, e2) = multidim_part_averages(psi, a_basis, b_basis, h1, h2)?;
    let pa = born_distribution(psi, a_basis)?;
    let pb = born_distribution(psi, b_basis)?;
    let b_given_a = a_basis
        .vectors()
        .iter()
        .map(|ej| born_distribution(ej, b_basis))
        .collect::<Result<Vec<_>>>()?;
    let a_given_b = b_basis
        .vectors()
        .iter()
        .map(|ei| born_distribution(ei, a_basis))
        .collect::<Result<Vec<_>>>()?;
    let generators = vec![
        PartGenerators::new("a", "b", pa, b_given_a)?,
        PartGenerators::new("b", "a", pb, a_given_b)?,
    ];
    let spec = GameSpec::new(
        vec!["a".into(), "b".into()],
        vec![
            GamePart::new("a", "b").with_payoff("b", h1.clone()),
            GamePart::new("b", "a").with_payoff("b", h2.clone()),
        ],
        false,
    )?;
    let part = |c: &str, t: &str, v: f64| PartAverages {
        chooser: c.into(),
        tester: t.into(),
        averages: [("b".to_string(), v)].into_iter().collect(),
    };
    let analytic = GameAverages::from_parts(spec.players(), vec![part("a", "b", e1), part("b", "a", e2)]);
    let counts = run_trials(&generators, trials, seed, partitions)?;
    report(&spec, counts, analytic, trials, seed, partitions)
}
