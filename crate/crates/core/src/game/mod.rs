//! Wine testing game: payoff matrices, game specifications and expected
//! payoffs.
//!
//! Each part of a game is a choose-then-test round. The chooser draws an
//! outcome from their own preferences, the tester announces an outcome
//! according to the transition probabilities conditioned on the chooser's
//! (hidden) outcome. Part averages therefore always use the chooser-first
//! joint table `p(chooser = α, tester = β) = p_chooser(α) p(tester = β | α)`.

mod multidim;
mod ql;
mod three_player;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{joint_distribution, ContextData, Distribution, JointTable, TransitionMatrix, TOLERANCE};

pub use multidim::{multidim_average, multidim_part_averages};
pub use ql::{interference_form_average, ql_average, ql_averages, zero_sum_factored_average};
pub use three_player::{three_player_representations, ThreePlayerReport};

/// Payoff of one player in one part, `h[α][β]` for chooser outcome `α` and
/// tester answer `β`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PayoffMatrix(Vec<Vec<f64>>);

impl PayoffMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidGame("empty payoff matrix".into()));
        }
        let width = rows[0].len();
        for row in &rows {
            if row.len() != width {
                return Err(Error::InvalidGame("ragged payoff matrix".into()));
            }
            if let Some(&value) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::InvalidGame(format!("non-finite payoff {value}")));
            }
        }
        Ok(Self(rows))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![vec![0.0; n]; n])
    }

    /// `reward` on the diagonal (correct answer), `-penalty` elsewhere.
    pub fn matching(n: usize, reward: f64, penalty: f64) -> Self {
        Self(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { reward } else { -penalty }).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn get(&self, chooser: usize, tester: usize) -> f64 {
        self.0[chooser][tester]
    }

    pub fn n_rows(&self) -> usize {
        self.0.len()
    }

    pub fn n_cols(&self) -> usize {
        self.0[0].len()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|r| r.iter().map(|x| -x).collect()).collect())
    }

    pub fn range(&self) -> f64 {
        let (lo, hi) = self
            .0
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        hi - lo
    }
}

impl<'de> Deserialize<'de> for PayoffMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PayoffMatrix::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GamePart {
    pub chooser: String,
    pub tester: String,
    pub payoffs: BTreeMap<String, PayoffMatrix>,
}

impl GamePart {
    pub fn new(chooser: &str, tester: &str) -> Self {
        Self {
            chooser: chooser.to_string(),
            tester: tester.to_string(),
            payoffs: BTreeMap::new(),
        }
    }

    pub fn with_payoff(mut self, player: &str, payoff: PayoffMatrix) -> Self {
        self.payoffs.insert(player.to_string(), payoff);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameSpecRaw {
    players: Vec<String>,
    parts: Vec<GamePart>,
    #[serde(default)]
    zero_sum: bool,
}

/// Roster, ordered parts and payoffs of a game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameSpecRaw", into = "GameSpecRaw")]
pub struct GameSpec {
    players: Vec<String>,
    parts: Vec<GamePart>,
    zero_sum: bool,
}

impl GameSpec {
    pub fn new(players: Vec<String>, parts: Vec<GamePart>, zero_sum: bool) -> Result<Self> {
        if !(2..=3).contains(&players.len()) {
            return Err(Error::InvalidGame(format!(
                "a game has 2 or 3 players, got {}",
                players.len()
            )));
        }
        let roster: BTreeSet<&str> = players.iter().map(String::as_str).collect();
        if roster.len() != players.len() {
            return Err(Error::InvalidGame("duplicate player name".into()));
        }
        if parts.is_empty() {
            return Err(Error::InvalidGame("a game needs at least one part".into()));
        }
        let mut shape = None;
        for (k, part) in parts.iter().enumerate() {
            if part.chooser == part.tester {
                return Err(Error::InvalidGame(format!(
                    "part {}: chooser and tester are both {:?}",
                    k + 1,
                    part.chooser
                )));
            }
            for name in [&part.chooser, &part.tester].into_iter().chain(part.payoffs.keys()) {
                if !roster.contains(name.as_str()) {
                    return Err(Error::InvalidGame(format!(
                        "part {}: {name:?} is not in the roster",
                        k + 1
                    )));
                }
            }
            for h in part.payoffs.values() {
                let s = (h.n_rows(), h.n_cols());
                if *shape.get_or_insert(s) != s {
                    return Err(Error::InvalidGame("payoff matrices differ in shape".into()));
                }
            }
            if zero_sum {
                if let Some((r, c)) = shape {
                    for i in 0..r {
                        for j in 0..c {
                            let s: f64 = part.payoffs.values().map(|h| h.get(i, j)).sum();
                            if s.abs() > TOLERANCE {
                                return Err(Error::InvalidGame(format!(
                                    "part {}: payoffs in cell ({i}, {j}) sum to {s}, not zero",
                                    k + 1
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(Self {
            players,
            parts,
            zero_sum,
        })
    }

    /// Two-player zero-sum game with symmetric parts: `a` chooses and `b`
    /// tests, then the roles swap. The tester earns `tester_payoff` and the
    /// chooser pays it.
    pub fn two_player_symmetric(tester_payoff: PayoffMatrix) -> Self {
        let neg = tester_payoff.negated();
        Self::new(
            vec!["a".into(), "b".into()],
            vec![
                GamePart::new("a", "b")
                    .with_payoff("b", tester_payoff.clone())
                    .with_payoff("a", neg.clone()),
                GamePart::new("b", "a")
                    .with_payoff("a", tester_payoff)
                    .with_payoff("b", neg),
            ],
            true,
        )
        .expect("symmetric construction is valid")
    }

    /// Three-player cycle: `a → b`, `b → c`, `c → a`, zero-sum in each part.
    pub fn three_player_cycle(tester_payoff: PayoffMatrix) -> Self {
        let neg = tester_payoff.negated();
        let parts = [("a", "b"), ("b", "c"), ("c", "a")]
            .into_iter()
            .map(|(ch, te)| {
                GamePart::new(ch, te)
                    .with_payoff(te, tester_payoff.clone())
                    .with_payoff(ch, neg.clone())
            })
            .collect();
        Self::new(vec!["a".into(), "b".into(), "c".into()], parts, true).expect("cycle construction is valid")
    }

    pub fn players(&self) -> &[String] {
        &self.players
    }

    pub fn parts(&self) -> &[GamePart] {
        &self.parts
    }

    pub fn is_zero_sum(&self) -> bool {
        self.zero_sum
    }

    /// Largest payoff range over all matrices.
    pub fn payoff_range(&self) -> f64 {
        self.parts
            .iter()
            .flat_map(|p| p.payoffs.values())
            .map(PayoffMatrix::range)
            .fold(0.0, f64::max)
    }

    /// Departures from the usual sign pattern of a 2×2 testing part: the
    /// tester gains on a correct answer and loses otherwise, and the chooser
    /// the reverse. These are advisory only.
    pub fn sign_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, part) in self.parts.iter().enumerate() {
            for (player, h) in &part.payoffs {
                if h.n_rows() != 2 || h.n_cols() != 2 {
                    continue;
                }
                let sign = if *player == part.tester {
                    1.0
                } else if *player == part.chooser {
                    -1.0
                } else {
                    continue;
                };
                for i in 0..2 {
                    for j in 0..2 {
                        let expected = if i == j { sign } else { -sign };
                        if h.get(i, j) * expected <= 0.0 {
                            out.push(format!(
                                "part {}: payoff of {player} in cell ({i}, {j}) is {} (expected {})",
                                k + 1,
                                h.get(i, j),
                                if expected > 0.0 { "> 0" } else { "< 0" }
                            ));
                        }
                    }
                }
            }
        }
        out
    }
}

impl TryFrom<GameSpecRaw> for GameSpec {
    type Error = Error;

    fn try_from(raw: GameSpecRaw) -> Result<Self> {
        GameSpec::new(raw.players, raw.parts, raw.zero_sum)
    }
}

impl From<GameSpec> for GameSpecRaw {
    fn from(s: GameSpec) -> Self {
        GameSpecRaw {
            players: s.players,
            parts: s.parts,
            zero_sum: s.zero_sum,
        }
    }
}

/// Contextual data for one ordered pair of players; `first` plays the role
/// of `a` and `second` of `b` in [`ContextData`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairContext {
    pub first: String,
    pub second: String,
    pub data: ContextData,
}

/// All pairwise contexts a game may draw on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameContexts {
    pub pairs: Vec<PairContext>,
}

impl GameContexts {
    pub fn new(pairs: Vec<PairContext>) -> Self {
        Self { pairs }
    }

    /// A single context shared by two players.
    pub fn pair(first: &str, second: &str, data: ContextData) -> Self {
        Self::new(vec![PairContext {
            first: first.into(),
            second: second.into(),
            data,
        }])
    }

    /// A single context for the first two players of `spec`.
    pub fn for_spec(spec: &GameSpec, data: ContextData) -> Self {
        Self::pair(&spec.players[0], &spec.players[1], data)
    }

    /// Chooser marginal and tester-given-chooser transitions for a part.
    pub fn lookup(&self, chooser: &str, tester: &str) -> Result<(&Distribution, &TransitionMatrix)> {
        for p in &self.pairs {
            if p.first == chooser && p.second == tester {
                return Ok((p.data.marginal_a(), p.data.trans_b_given_a()));
            }
            if p.first == tester && p.second == chooser {
                return Ok((p.data.marginal_b(), p.data.trans_a_given_b()));
            }
        }
        Err(Error::MissingPair {
            chooser: chooser.into(),
            tester: tester.into(),
        })
    }

    /// Chooser-first joint table of a part.
    pub fn part_joint(&self, part: &GamePart) -> Result<JointTable> {
        let (marginal, trans) = self.lookup(&part.chooser, &part.tester)?;
        Ok(joint_distribution(marginal, trans)?.relabel(part.chooser.clone(), part.tester.clone()))
    }
}

/// Expected payoffs of every participant of one part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartAverages {
    pub chooser: String,
    pub tester: String,
    pub averages: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameAverages {
    pub parts: Vec<PartAverages>,
    pub totals: BTreeMap<String, f64>,
}

impl GameAverages {
    /// Sums part averages into per-player totals over the roster.
    pub fn from_parts(players: &[String], parts: Vec<PartAverages>) -> Self {
        let mut totals: BTreeMap<String, f64> = players.iter().map(|p| (p.clone(), 0.0)).collect();
        for part in &parts {
            for (player, v) in &part.averages {
                *totals.entry(player.clone()).or_insert(0.0) += v;
            }
        }
        Self { parts, totals }
    }

    pub fn total(&self, player: &str) -> Option<f64> {
        self.totals.get(player).copied()
    }

    /// Part `k` (0-based) average of `player`.
    pub fn part(&self, k: usize, player: &str) -> Option<f64> {
        self.parts.get(k)?.averages.get(player).copied()
    }

    /// Largest absolute difference over all part averages and totals.
    pub fn max_abs_diff(&self, other: &GameAverages) -> f64 {
        let mut worst = 0.0_f64;
        for (p, q) in self.parts.iter().zip(&other.parts) {
            for (player, v) in &p.averages {
                if let Some(w) = q.averages.get(player) {
                    worst = worst.max((v - w).abs());
                }
            }
        }
        for (player, v) in &self.totals {
            if let Some(w) = other.totals.get(player) {
                worst = worst.max((v - w).abs());
            }
        }
        worst
    }
}

/// `Σ_{α,β} h[α][β] · p(α, β)`.
pub fn part_average(joint: &JointTable, payoff: &PayoffMatrix) -> Result<f64> {
    if joint.n_first() != payoff.n_rows() || joint.n_second() != payoff.n_cols() {
        return Err(Error::DimensionMismatch(format!(
            "alphabet mismatch: joint is {}×{}, payoff is {}×{}",
            joint.n_first(),
            joint.n_second(),
            payoff.n_rows(),
            payoff.n_cols()
        )));
    }
    Ok(joint
        .entries()
        .iter()
        .zip(payoff.rows())
        .flat_map(|(jr, hr)| jr.iter().zip(hr).map(|(p, h)| p * h))
        .sum())
}

/// Averages of every part given one joint table per part.
pub fn averages_from_joints(spec: &GameSpec, joints: &[JointTable]) -> Result<GameAverages> {
    let parts = spec
        .parts
        .iter()
        .zip(joints)
        .map(|(part, joint)| {
            let averages = part
                .payoffs
                .iter()
                .map(|(player, h)| Ok((player.clone(), part_average(joint, h)?)))
                .collect::<Result<_>>()?;
            Ok(PartAverages {
                chooser: part.chooser.clone(),
                tester: part.tester.clone(),
                averages,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GameAverages::from_parts(&spec.players, parts))
}

/// Per-part and total expected payoffs under the given contexts.
pub fn total_averages(spec: &GameSpec, contexts: &GameContexts) -> Result<GameAverages> {
    let joints = spec
        .parts
        .iter()
        .map(|part| contexts.part_joint(part))
        .collect::<Result<Vec<_>>>()?;
    averages_from_joints(spec, &joints)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classicality::spin_transition_matrix;

    fn d1() -> ContextData {
        ContextData::symmetric(
            Distribution::binary(1.0 / 3.0).unwrap(),
            Distribution::uniform(2),
            TransitionMatrix::binary_symmetric(0.75).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn d1_part_average() {
        let j = d1().joint_ab();
        let h = PayoffMatrix::matching(2, 1.0, 1.0);
        assert!((part_average(&j, &h).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn uniform_joint_gives_mean_payoff() {
        let j = JointTable::new("a", "b", vec![vec![0.25; 2]; 2]).unwrap();
        let h = PayoffMatrix::new(vec![vec![3.0, -1.0], vec![2.0, 0.5]]).unwrap();
        assert!((part_average(&j, &h).unwrap() - 4.5 / 4.0).abs() < 1e-15);
        assert_eq!(part_average(&j, &PayoffMatrix::zeros(2)).unwrap(), 0.0);
        assert!(part_average(&j, &PayoffMatrix::zeros(3)).is_err());
    }

    #[test]
    fn d1_totals() {
        let spec = GameSpec::two_player_symmetric(PayoffMatrix::matching(2, 1.0, 1.0));
        let avg = total_averages(&spec, &GameContexts::for_spec(&spec, d1())).unwrap();
        assert!((avg.part(0, "b").unwrap() - 0.5).abs() < 1e-15);
        assert!((avg.part(1, "b").unwrap() + 0.5).abs() < 1e-15);
        assert!(avg.total("b").unwrap().abs() < 1e-15);
        assert!(avg.total("a").unwrap().abs() < 1e-15);
        let d = d1();
        let j2 = d.joint_ba();
        let expect = [[0.375, 0.125], [0.125, 0.375]];
        for (row, erow) in j2.entries().iter().zip(expect) {
            for (p, e) in row.iter().zip(erow) {
                assert!((p - e).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn uniform_symmetric_game_is_fair() {
        let u = ContextData::symmetric(
            Distribution::uniform(2),
            Distribution::uniform(2),
            TransitionMatrix::binary_symmetric(0.8).unwrap(),
        )
        .unwrap();
        let spec = GameSpec::two_player_symmetric(PayoffMatrix::matching(2, 2.0, 1.0));
        let avg = total_averages(&spec, &GameContexts::for_spec(&spec, u)).unwrap();
        assert!(avg.total("a").unwrap().abs() < 1e-15);
        assert!(avg.total("b").unwrap().abs() < 1e-15);
    }

    #[test]
    fn three_player_spin_averages() {
        use std::f64::consts::PI;
        let thetas = [0.0, 2.0 * PI / 3.0, PI / 3.0];
        let ctx = |i: usize, j: usize, f: &str, s: &str| PairContext {
            first: f.into(),
            second: s.into(),
            data: ContextData::symmetric(
                Distribution::uniform(2),
                Distribution::uniform(2),
                spin_transition_matrix(thetas[i], thetas[j]),
            )
            .unwrap(),
        };
        let contexts = GameContexts::new(vec![ctx(0, 1, "a", "b"), ctx(1, 2, "b", "c"), ctx(2, 0, "c", "a")]);
        let spec = GameSpec::three_player_cycle(PayoffMatrix::matching(2, 1.0, 1.0));
        let avg = total_averages(&spec, &contexts).unwrap();
        assert!((avg.part(0, "b").unwrap() + 0.5).abs() < 1e-12);
        assert!((avg.part(1, "c").unwrap() - 0.5).abs() < 1e-12);
        assert!((avg.part(2, "a").unwrap() - 0.5).abs() < 1e-12);
        for part in &avg.parts {
            assert!(part.averages.values().sum::<f64>().abs() < 1e-12);
        }
    }

    #[test]
    fn missing_pair_is_an_error() {
        let spec = GameSpec::three_player_cycle(PayoffMatrix::matching(2, 1.0, 1.0));
        let err = total_averages(&spec, &GameContexts::pair("a", "b", d1())).unwrap_err();
        assert_eq!(
            err,
            Error::MissingPair {
                chooser: "b".into(),
                tester: "c".into()
            }
        );
    }

    #[test]
    fn zero_sum_is_checked() {
        let h = PayoffMatrix::matching(2, 1.0, 1.0);
        let part = GamePart::new("a", "b").with_payoff("b", h.clone()).with_payoff("a", h);
        let err = GameSpec::new(vec!["a".into(), "b".into()], vec![part], true).unwrap_err();
        assert!(err.to_string().contains("sum to 2"), "{err}");
    }

    #[test]
    fn spec_shape_errors() {
        let p = |c: &str, t: &str| GamePart::new(c, t);
        let two = || vec!["a".to_string(), "b".to_string()];
        assert!(GameSpec::new(vec!["a".into()], vec![p("a", "b")], false).is_err());
        assert!(GameSpec::new(two(), vec![p("a", "a")], false).is_err());
        assert!(GameSpec::new(two(), vec![p("a", "z")], false).is_err());
        assert!(GameSpec::new(two(), vec![], false).is_err());
    }

    #[test]
    fn sign_conventions_warn_only() {
        let spec = GameSpec::two_player_symmetric(PayoffMatrix::matching(2, 1.0, 1.0));
        assert!(spec.sign_warnings().is_empty());
        let odd = GameSpec::two_player_symmetric(PayoffMatrix::matching(2, 1.0, -1.0));
        assert_eq!(odd.sign_warnings().len(), 8);
    }

    #[test]
    fn game_json_round_trip() {
        let json = r#"{
            "players": ["a", "b"],
            "parts": [
                {"chooser": "a", "tester": "b", "payoffs": {"b": [[1, -1], [-1, 1]], "a": [[-1, 1], [1, -1]]}},
                {"chooser": "b", "tester": "a", "payoffs": {"a": [[1, -1], [-1, 1]], "b": [[-1, 1], [1, -1]]}}
            ],
            "zero_sum": true
        }"#;
        let spec: GameSpec = serde_json::from_str(json).unwrap();
        assert_eq!(
            spec,
            GameSpec::two_player_symmetric(PayoffMatrix::matching(2, 1.0, 1.0))
        );
        let bad = json.replace(
            "[[-1, 1], [1, -1]]}},\n                {\"chooser\": \"b\"",
            "[[1, 1], [1, -1]]}},\n                {\"chooser\": \"b\"",
        );
        assert!(serde_json::from_str::<GameSpec>(&bad).is_err());
    }
}
