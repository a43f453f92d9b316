//! Kolmogorov embeddability: the Bayes criterion for two observables, the
//! spin-1/2 correlation model, Bell's inequality and the marginal problem
//! for three (or more) observables.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::format_sig;
use crate::lp::{feasible_point, minimize, LpSolution, LP_TOLERANCE};
use crate::prob::{
    check_reversibility, ContextData, Distribution, JointTable, Outcome, ReversibilityReport, TransitionMatrix,
    TOLERANCE,
};

/// Distance from uniform accepted by the theorem check.
pub const UNIFORM_TOLERANCE: f64 = 1e-10;

/// Slack in `|cov_ab − cov_bc| ≤ 1 − cov_ca` before a violation is reported.
pub const BELL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesReport {
    pub consistent: bool,
    pub max_discrepancy: f64,
    pub symmetric_conditioning: bool,
    pub uniform_marginals: bool,
    /// Whether `consistent ⇔ uniform_marginals` held. Only evaluated for
    /// symmetrically conditioned data with strictly positive transitions;
    /// with zero transitions the equivalence can fail (identity matrices
    /// with equal marginals are consistent but need not be uniform).
    pub theorem_check: Option<bool>,
}

/// Whether the Bayes formula links `p(b|a)` and `p(a|b)` through the
/// marginals, i.e. whether both orders of play share one joint table.
pub fn bayes_consistency(data: &ContextData) -> BayesReport {
    let ReversibilityReport {
        consistent,
        max_discrepancy,
    } = check_reversibility(data);
    let symmetric_conditioning = data.is_symmetrically_conditioned();
    let uniform_marginals =
        data.marginal_a().is_uniform(UNIFORM_TOLERANCE) && data.marginal_b().is_uniform(UNIFORM_TOLERANCE);
    let theorem_check =
        (symmetric_conditioning && data.is_strictly_positive()).then_some(consistent == uniform_marginals);
    BayesReport {
        consistent,
        max_discrepancy,
        symmetric_conditioning,
        uniform_marginals,
        theorem_check,
    }
}

/// `cos²((θ_i − θ_j)/2)` on the diagonal and `sin²((θ_i − θ_j)/2)` off it.
pub fn spin_transition_matrix(theta_i: f64, theta_j: f64) -> TransitionMatrix {
    let half = (theta_i - theta_j) / 2.0;
    let (s, c) = half.sin_cos();
    let (same, flip) = (c * c, s * s);
    TransitionMatrix::new(vec![vec![same, flip], vec![flip, same]]).expect("cos² + sin² = 1")
}

/// `E[xy]` under the encoding `F = +1`, `I = −1`:
/// `p(FF) + p(II) − p(FI) − p(IF)`.
pub fn covariance(joint: &JointTable) -> Result<f64> {
    for n in [joint.n_first(), joint.n_second()] {
        if n != 2 {
            return Err(Error::NotDichotomous(n));
        }
    }
    let e = joint.entries();
    Ok(e[0][0] + e[1][1] - e[0][1] - e[1][0])
}

/// Marginals of three observables `a`, `b`, `c` and their pairwise joints
/// in the order `ab`, `bc`, `ca`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PairwiseSystemRaw", into = "PairwiseSystemRaw")]
pub struct PairwiseSystem {
    marginals: [Distribution; 3],
    joints: [JointTable; 3],
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairwiseSystemRaw {
    marginals: [Distribution; 3],
    joints: [JointTable; 3],
}

impl TryFrom<PairwiseSystemRaw> for PairwiseSystem {
    type Error = Error;

    fn try_from(raw: PairwiseSystemRaw) -> Result<Self> {
        PairwiseSystem::new(raw.marginals, raw.joints)
    }
}

impl From<PairwiseSystem> for PairwiseSystemRaw {
    fn from(s: PairwiseSystem) -> Self {
        PairwiseSystemRaw {
            marginals: s.marginals,
            joints: s.joints,
        }
    }
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];
const NAMES: [&str; 3] = ["a", "b", "c"];

impl PairwiseSystem {
    pub fn new(marginals: [Distribution; 3], joints: [JointTable; 3]) -> Result<Self> {
        for ((i, j), joint) in PAIRS.iter().zip(&joints) {
            for (k, side) in [(*i, joint.first_marginal()), (*j, joint.second_marginal())] {
                let m = marginals[k].probs();
                let gap = if m.len() == side.len() {
                    m.iter().zip(&side).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
                } else {
                    f64::INFINITY
                };
                if gap > TOLERANCE {
                    return Err(Error::InconsistentMarginals(format!(
                        "joint {}{} disagrees with the marginal of {} by {}",
                        NAMES[*i],
                        NAMES[*j],
                        NAMES[k],
                        format_sig(gap)
                    )));
                }
            }
        }
        Ok(Self { marginals, joints })
    }

    /// Spin-1/2 system with uniform marginals: `p(x, y) = ½ p(y | x)` with
    /// transitions from [`spin_transition_matrix`].
    pub fn spin(thetas: [f64; 3]) -> Self {
        let joints = PAIRS.map(|(i, j)| {
            let t = spin_transition_matrix(thetas[i], thetas[j]);
            let e = t.rows().iter().map(|r| r.iter().map(|p| 0.5 * p).collect()).collect();
            JointTable::new(NAMES[i], NAMES[j], e).expect("half a stochastic matrix")
        });
        Self::new(std::array::from_fn(|_| Distribution::uniform(2)), joints)
            .expect("spin joints have uniform marginals")
    }

    /// Uniform marginals and prescribed correlations `E[ab]`, `E[bc]`, `E[ca]`.
    pub fn from_covariances(cov: [f64; 3]) -> Result<Self> {
        let mut joints = Vec::with_capacity(3);
        for ((i, j), c) in PAIRS.into_iter().zip(cov) {
            let (same, flip) = ((1.0 + c) / 4.0, (1.0 - c) / 4.0);
            joints.push(JointTable::new(
                NAMES[i],
                NAMES[j],
                vec![vec![same, flip], vec![flip, same]],
            )?);
        }
        let joints: [JointTable; 3] = joints.try_into().expect("three pairs");
        Self::new(std::array::from_fn(|_| Distribution::uniform(2)), joints)
    }

    pub fn marginals(&self) -> &[Distribution; 3] {
        &self.marginals
    }

    pub fn joints(&self) -> &[JointTable; 3] {
        &self.joints
    }

    pub fn covariances(&self) -> Result<[f64; 3]> {
        Ok([
            covariance(&self.joints[0])?,
            covariance(&self.joints[1])?,
            covariance(&self.joints[2])?,
        ])
    }

    fn constraints(&self) -> Vec<PairConstraint> {
        PAIRS
            .iter()
            .zip(&self.joints)
            .map(|(&(first, second), joint)| PairConstraint {
                first,
                second,
                joint: joint.clone(),
            })
            .collect()
    }
}

/// A probability assignment to the atoms of a product alphabet. Atoms are
/// ordered lexicographically with observable 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub alphabet_sizes: Vec<usize>,
    pub probs: Vec<f64>,
}

impl Witness {
    pub fn atom(&self, index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.alphabet_sizes.len()];
        let mut rest = index;
        for (d, &n) in digits.iter_mut().zip(&self.alphabet_sizes).rev() {
            *d = rest % n;
            rest /= n;
        }
        digits
    }

    /// Label such as `"FIF"`; outcomes beyond `I` are separated by dots.
    pub fn atom_label(&self, index: usize) -> String {
        let digits = self.atom(index);
        if self.alphabet_sizes.iter().all(|&n| n <= 2) {
            digits.iter().map(|&d| Outcome(d).label()).collect()
        } else {
            digits.iter().map(|&d| Outcome(d).label()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        (0..self.probs.len())
            .find(|&k| self.atom_label(k) == label)
            .map(|k| self.probs[k])
    }

    /// Marginal of the witness on observables `(i, j)`.
    pub fn pair_marginal(&self, i: usize, j: usize) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.alphabet_sizes[j]]; self.alphabet_sizes[i]];
        for (k, p) in self.probs.iter().enumerate() {
            let d = self.atom(k);
            out[d[i]][d[j]] += p;
        }
        out
    }

    /// Largest deviation from the prescribed pairwise joints.
    pub fn max_error(&self, constraints: &[PairConstraint]) -> f64 {
        let mut worst = 0.0_f64;
        for c in constraints {
            let m = self.pair_marginal(c.first, c.second);
            for (row, jrow) in m.iter().zip(c.joint.entries()) {
                for (x, y) in row.iter().zip(jrow) {
                    worst = worst.max((x - y).abs());
                }
            }
        }
        worst
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.probs.len()))?;
        for (k, p) in self.probs.iter().enumerate() {
            map.serialize_entry(&self.atom_label(k), p)?;
        }
        map.end()
    }
}

/// Prescribed joint of observables `first` and `second`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairConstraint {
    pub first: usize,
    pub second: usize,
    pub joint: JointTable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Phase-one residual; zero up to rounding when feasible.
    pub infeasibility: f64,
    pub witness: Option<Witness>,
}

fn check_constraints(alphabet_sizes: &[usize], constraints: &[PairConstraint]) -> Result<()> {
    let mut seen: Vec<Option<(Vec<f64>, usize)>> = vec![None; alphabet_sizes.len()];
    for (k, c) in constraints.iter().enumerate() {
        let (i, j) = (c.first, c.second);
        if i >= alphabet_sizes.len() || j >= alphabet_sizes.len() || i == j {
            return Err(Error::InvalidGame(format!(
                "constraint {k} refers to observables ({i}, {j})"
            )));
        }
        if c.joint.n_first() != alphabet_sizes[i] || c.joint.n_second() != alphabet_sizes[j] {
            return Err(Error::DimensionMismatch(format!(
                "constraint {k}: joint is {}×{}, alphabets are {}×{}",
                c.joint.n_first(),
                c.joint.n_second(),
                alphabet_sizes[i],
                alphabet_sizes[j]
            )));
        }
        for (obs, m) in [(i, c.joint.first_marginal()), (j, c.joint.second_marginal())] {
            match &seen[obs] {
                None => seen[obs] = Some((m, k)),
                Some((prev, pk)) => {
                    let gap = prev.iter().zip(&m).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                    if gap > TOLERANCE {
                        return Err(Error::InconsistentMarginals(format!(
                            "observable {obs} has different marginals in constraints {pk} and {k} (gap {})",
                            format_sig(gap)
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Decides whether one distribution on the product alphabet reproduces all
/// prescribed pairwise joints. The number of atoms is the product of the
/// alphabet sizes, so cost grows exponentially with the number of
/// observables; three dichotomous observables give 8 atoms.
///
/// The witness is the centroid of the vertices that minimize and maximize
/// each atom, which picks a symmetric point when the feasible set has
/// symmetries (the uniform measure for independent uniform joints).
pub fn marginal_feasibility(
    alphabet_sizes: &[usize],
    constraints: &[PairConstraint],
    want_witness: bool,
) -> Result<Feasibility> {
    if alphabet_sizes.is_empty() || alphabet_sizes.contains(&0) {
        return Err(Error::AlphabetTooSmall(0));
    }
    check_constraints(alphabet_sizes, constraints)?;
    let n_atoms: usize = alphabet_sizes.iter().product();
    let probe = Witness {
        alphabet_sizes: alphabet_sizes.to_vec(),
        probs: Vec::new(),
    };
    let atoms: Vec<Vec<usize>> = (0..n_atoms).map(|k| probe.atom(k)).collect();

    let mut a = vec![vec![1.0; n_atoms]];
    let mut b = vec![1.0];
    for c in constraints {
        for (x, row) in c.joint.entries().iter().enumerate() {
            for (y, &p) in row.iter().enumerate() {
                a.push(
                    atoms
                        .iter()
                        .map(|d| f64::from(d[c.first] == x && d[c.second] == y))
                        .collect(),
                );
                b.push(p);
            }
        }
    }

    if let Err(infeasibility) = feasible_point(&a, &b)? {
        return Ok(Feasibility {
            feasible: false,
            infeasibility,
            witness: None,
        });
    }
    let witness = if want_witness {
        let mut sum = vec![0.0; n_atoms];
        let mut count = 0.0;
        for k in 0..n_atoms {
            for sign in [1.0, -1.0] {
                let mut cost = vec![0.0; n_atoms];
                cost[k] = sign;
                match minimize(&cost, &a, &b)? {
                    LpSolution::Optimal { x, .. } => {
                        sum.iter_mut().zip(&x).for_each(|(s, v)| *s += v);
                        count += 1.0;
                    }
                    other => {
                        return Err(Error::LinearProgram(format!(
                            "vertex search failed on a feasible system: {other:?}"
                        )))
                    }
                }
            }
        }
        Some(Witness {
            alphabet_sizes: alphabet_sizes.to_vec(),
            probs: sum.iter().map(|s| (s / count).max(0.0)).collect(),
        })
    } else {
        None
    };
    if let Some(w) = &witness {
        let err = w.max_error(constraints);
        if err > LP_TOLERANCE {
            return Err(Error::LinearProgram(format!("witness misses the joints by {err:e}")));
        }
    }
    Ok(Feasibility {
        feasible: true,
        infeasibility: 0.0,
        witness,
    })
}

/// Joint-distribution feasibility for the three pairwise joints of `system`.
pub fn joint_feasibility(system: &PairwiseSystem) -> Result<Feasibility> {
    marginal_feasibility(&[2, 2, 2], &system.constraints(), true)
}

/// Left and right sides of `|cov_ab − cov_bc| ≤ 1 − cov_ca`.
pub fn bell_sides(cov: [f64; 3]) -> (f64, f64) {
    ((cov[0] - cov[1]).abs(), 1.0 - cov[2])
}

/// Bell's inequality applied to the cyclic relabelings `(ab, bc, ca)`,
/// `(bc, ca, ab)` and `(ca, ab, bc)`.
pub fn cyclic_bell_violated(cov: [f64; 3]) -> bool {
    (0..3).any(|r| {
        let (l, rr) = bell_sides([cov[r], cov[(r + 1) % 3], cov[(r + 2) % 3]]);
        l > rr + BELL_TOLERANCE
    })
}

/// Slacks of the four facets `1 ± ab ± bc ± ca ≥ 0` (even number of minus
/// signs) bounding the correlations of three ±1 variables. They are the
/// Bell inequality closed under relabeling and under flipping the sign of
/// one variable. The cyclic relabelings alone give only the three facets
/// with two minus signs and miss `1 + ab + bc + ca ≥ 0`.
pub fn correlation_facets(cov: [f64; 3]) -> [f64; 4] {
    let [ab, bc, ca] = cov;
    [
        1.0 + ab + bc + ca,
        1.0 + ab - bc - ca,
        1.0 - ab + bc - ca,
        1.0 - ab - bc + ca,
    ]
}

pub fn bell_family_violated(cov: [f64; 3]) -> bool {
    correlation_facets(cov).iter().any(|&s| s < -BELL_TOLERANCE)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellReport {
    pub cov_ab: f64,
    pub cov_bc: f64,
    pub cov_ca: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    pub cyclic_violated: bool,
    pub family_violated: bool,
    pub lp_feasible: bool,
    pub witness: Option<Witness>,
}

pub fn bell_check(system: &PairwiseSystem) -> Result<BellReport> {
    let cov = system.covariances()?;
    let (lhs, rhs) = bell_sides(cov);
    let feasibility = joint_feasibility(system)?;
    Ok(BellReport {
        cov_ab: cov[0],
        cov_bc: cov[1],
        cov_ca: cov[2],
        lhs,
        rhs,
        violated: lhs > rhs + BELL_TOLERANCE,
        cyclic_violated: cyclic_bell_violated(cov),
        family_violated: bell_family_violated(cov),
        lp_feasible: feasibility.feasible,
        witness: feasibility.witness,
    })
}

/// One row of a Bell scan; field order matches the CSV columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellScanRow {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub cov_ab: f64,
    pub cov_bc: f64,
    pub cov_ca: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub violated: bool,
    pub lp_feasible: bool,
}

pub const BELL_CSV_HEADER: [&str; 10] = [
    "theta1",
    "theta2",
    "theta3",
    "cov_ab",
    "cov_bc",
    "cov_ca",
    "lhs",
    "rhs",
    "violated",
    "lp_feasible",
];

/// Bell check of the spin system at `thetas`, without a witness.
pub fn bell_scan_row(thetas: [f64; 3]) -> Result<BellScanRow> {
    let system = PairwiseSystem::spin(thetas);
    let cov = system.covariances()?;
    let (lhs, rhs) = bell_sides(cov);
    let feasible = marginal_feasibility(&[2, 2, 2], &system.constraints(), false)?.feasible;
    Ok(BellScanRow {
        theta1: thetas[0],
        theta2: thetas[1],
        theta3: thetas[2],
        cov_ab: cov[0],
        cov_bc: cov[1],
        cov_ca: cov[2],
        lhs,
        rhs,
        violated: lhs > rhs + BELL_TOLERANCE,
        lp_feasible: feasible,
    })
}

/// Default grid step, `π/12`.
pub const DEFAULT_GRID_STEP: f64 = PI / 12.0;

/// Angles `k · step` covering `[0, 2π)`.
pub fn grid_angles(step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidGame(format!("grid step must be positive, got {step}")));
    }
    let n = (TAU / step - 1e-9).ceil() as usize;
    Ok((0..n).map(|k| k as f64 * step).collect())
}

/// Spin Bell scan over every triple of grid angles, in lexicographic order.
pub fn bell_grid_scan(step: f64) -> Result<Vec<BellScanRow>> {
    let angles = grid_angles(step)?;
    let n = angles.len();
    (0..n * n * n)
        .into_par_iter()
        .map(|k| bell_scan_row([angles[k / (n * n)], angles[(k / n) % n], angles[k % n]]))
        .collect()
}

pub fn write_bell_csv<W: Write>(rows: &[BellScanRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(BELL_CSV_HEADER)?;
    for r in rows {
        let nums = [r.theta1, r.theta2, r.theta3, r.cov_ab, r.cov_bc, r.cov_ca, r.lhs, r.rhs];
        let mut rec: Vec<String> = nums.iter().map(|&x| format_sig(x)).collect();
        rec.push(r.violated.to_string());
        rec.push(r.lp_feasible.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn d1_is_inconsistent() {
        let d = ContextData::symmetric(
            Distribution::binary(1.0 / 3.0).unwrap(),
            Distribution::uniform(2),
            TransitionMatrix::binary_symmetric(0.75).unwrap(),
        )
        .unwrap();
        let r = bayes_consistency(&d);
        assert!(!r.consistent);
        assert!((r.max_discrepancy - 0.125).abs() < 1e-15);
        assert_eq!(r.theorem_check, Some(true));
    }

    #[test]
    fn uniform_is_consistent() {
        let d = ContextData::symmetric(
            Distribution::uniform(2),
            Distribution::uniform(2),
            TransitionMatrix::binary_symmetric(0.3).unwrap(),
        )
        .unwrap();
        let r = bayes_consistency(&d);
        assert!(r.consistent && r.uniform_marginals);
        assert_eq!(r.theorem_check, Some(true));
    }

    #[test]
    fn bayes_built_data_is_consistent_without_r1() {
        let pa = [0.3, 0.7];
        let tba = [[0.8, 0.2], [0.4, 0.6]];
        let pb: Vec<f64> = (0..2).map(|b| (0..2).map(|a| pa[a] * tba[a][b]).sum()).collect();
        let tab: Vec<Vec<f64>> = (0..2)
            .map(|b| (0..2).map(|a| pa[a] * tba[a][b] / pb[b]).collect())
            .collect();
        let d = ContextData::new(
            Distribution::new(pa.to_vec()).unwrap(),
            Distribution::new(pb).unwrap(),
            TransitionMatrix::new(tba.iter().map(|r| r.to_vec()).collect()).unwrap(),
            TransitionMatrix::new(tab).unwrap(),
        )
        .unwrap();
        let r = bayes_consistency(&d);
        assert!(r.consistent && !r.uniform_marginals && !r.symmetric_conditioning);
        assert_eq!(r.theorem_check, None);
    }

    #[test]
    fn spin_matrices() {
        assert_eq!(spin_transition_matrix(0.7, 0.7), TransitionMatrix::identity(2));
        let anti = spin_transition_matrix(PI, 0.0);
        assert!(anti.get(Outcome::F, Outcome::F).abs() < 1e-15 && close(anti.get(Outcome::F, Outcome::I), 1.0));
        let half = spin_transition_matrix(PI / 2.0, 0.0);
        assert!(half.rows().iter().flatten().all(|&p| close(p, 0.5)));
    }

    #[test]
    fn covariances() {
        let perfect = JointTable::new("a", "b", vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(covariance(&perfect).unwrap(), 1.0);
        let uniform = JointTable::new("a", "b", vec![vec![0.25; 2]; 2]).unwrap();
        assert_eq!(covariance(&uniform).unwrap(), 0.0);
        let d1 = JointTable::new("a", "b", vec![vec![0.25, 1.0 / 12.0], vec![1.0 / 6.0, 0.5]]).unwrap();
        assert!(close(covariance(&d1).unwrap(), 0.5));
        let three = JointTable::new("a", "b", vec![vec![1.0 / 3.0; 3]]).unwrap();
        assert_eq!(covariance(&three), Err(Error::NotDichotomous(1)));
    }

    #[test]
    fn violating_spin_triple() {
        let r = bell_check(&PairwiseSystem::spin([0.0, 2.0 * PI / 3.0, PI / 3.0])).unwrap();
        assert!(close(r.cov_ab, -0.5) && close(r.cov_bc, 0.5) && close(r.cov_ca, 0.5));
        assert!(close(r.lhs, 1.0) && close(r.rhs, 0.5));
        assert!(r.violated && !r.lp_feasible && r.witness.is_none());
    }

    #[test]
    fn equality_case_is_feasible() {
        let r = bell_check(&PairwiseSystem::spin([0.0; 3])).unwrap();
        assert_eq!((r.lhs, r.rhs, r.violated, r.lp_feasible), (0.0, 0.0, false, true));
        let w = r.witness.unwrap();
        assert!(close(w.get("FFF").unwrap(), 0.5) && close(w.get("III").unwrap(), 0.5));
        assert!(w.probs.iter().sum::<f64>() - 1.0 < 1e-12);
    }

    #[test]
    fn non_violating_spin_triple() {
        let r = bell_check(&PairwiseSystem::spin([0.0, PI / 3.0, 2.0 * PI / 3.0])).unwrap();
        assert!(close(r.cov_ab, 0.5) && close(r.cov_bc, 0.5) && close(r.cov_ca, -0.5));
        assert!(close(r.lhs, 0.0) && close(r.rhs, 1.5));
        // the stated form holds but |cov_bc − cov_ca| ≤ 1 − cov_ab fails
        assert!(!r.violated && r.cyclic_violated && !r.lp_feasible);
    }

    #[test]
    fn independent_joints_give_uniform_witness() {
        let r = bell_check(&PairwiseSystem::from_covariances([0.0; 3]).unwrap()).unwrap();
        let w = r.witness.unwrap();
        assert!(w.probs.iter().all(|&p| (p - 0.125).abs() < 1e-12), "{:?}", w.probs);
    }

    #[test]
    fn cyclic_forms_miss_one_facet() {
        // all correlations −1/2: every cyclic Bell form holds, yet no joint
        // distribution exists
        let s = PairwiseSystem::spin([0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0]);
        let cov = s.covariances().unwrap();
        assert!(cov.iter().all(|&c| close(c, -0.5)));
        assert!(!cyclic_bell_violated(cov));
        assert!(bell_family_violated(cov));
        assert!(!joint_feasibility(&s).unwrap().feasible);
    }

    #[test]
    fn inconsistent_marginals_rejected() {
        let j = |f: &str, s: &str, e: Vec<Vec<f64>>| JointTable::new(f, s, e).unwrap();
        let u = || vec![vec![0.25; 2]; 2];
        let skew = vec![vec![0.5, 0.1], vec![0.2, 0.2]];
        let err = PairwiseSystem::new(
            std::array::from_fn(|_| Distribution::uniform(2)),
            [j("a", "b", skew.clone()), j("b", "c", u()), j("c", "a", u())],
        )
        .unwrap_err();
        assert!(matches!(err, Error::InconsistentMarginals(_)));
        let constraints = vec![
            PairConstraint {
                first: 0,
                second: 1,
                joint: j("a", "b", skew),
            },
            PairConstraint {
                first: 1,
                second: 2,
                joint: j("b", "c", u()),
            },
        ];
        assert!(matches!(
            marginal_feasibility(&[2, 2, 2], &constraints, false),
            Err(Error::InconsistentMarginals(_))
        ));
    }

    #[test]
    fn system_json_round_trip() {
        let s = PairwiseSystem::spin([0.0, 1.0, 2.0]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<PairwiseSystem>(&text).unwrap(), s);
        let bad = text.replacen("0.5", "0.7", 1);
        assert!(serde_json::from_str::<PairwiseSystem>(&bad).is_err());
    }

    #[test]
    fn ternary_marginal_problem() {
        let e = vec![vec![1.0 / 9.0; 3]; 3];
        let c = |f, s| PairConstraint {
            first: f,
            second: s,
            joint: JointTable::new("x", "y", e.clone()).unwrap(),
        };
        let r = marginal_feasibility(&[3, 3, 3], &[c(0, 1), c(1, 2), c(2, 0)], true).unwrap();
        assert!(r.feasible);
        let w = r.witness.unwrap();
        assert_eq!(w.probs.len(), 27);
        assert_eq!(w.atom_label(5), "F.I.2");
    }

    #[test]
    fn grid_has_expected_size_and_csv_header() {
        assert_eq!(grid_angles(DEFAULT_GRID_STEP).unwrap().len(), 24);
        assert!(grid_angles(0.0).is_err());
        let rows = bell_grid_scan(PI / 2.0).unwrap();
        assert_eq!(rows.len(), 64);
        let mut buf = Vec::new();
        write_bell_csv(&rows[..1], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "theta1,theta2,theta3,cov_ab,cov_bc,cov_ca,lhs,rhs,violated,lp_feasible\n0,0,0,1,1,1,0,0,false,true\n"
        );
    }
}
