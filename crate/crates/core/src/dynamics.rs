//! Regret-minimizing dynamics: multiplicative weights (discrete) and
//! replicator dynamics (continuous, fixed-step RK4), with convergence
//! diagnostics against equilibrium predictions.
//!
//! Exact games cross into floating point here and nowhere else. The
//! multiplicative-weights update assumes payoffs in `[-1, 1]`, so
//! [`mwua_run`] first rescales both players' tables by the largest absolute
//! player payoff; the scale is a positive factor, leaves best responses and
//! equilibria untouched, and is surfaced in the trajectory's
//! `payoff_normalizer`. The replicator field is integrated on raw payoffs.

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equilibria::{split_offeree_action, split_plan_action, Decision, TwoStageGame};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, BimatrixGame, Player};
use crate::rational::{max_abs, to_f64, Rational};

/// How a trajectory was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    MwuaExpected,
    MwuaSampled,
    Replicator,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::MwuaExpected => "mwua-expected",
            Method::MwuaSampled => "mwua-sampled",
            Method::Replicator => "replicator",
        }
    }
}

/// Whether multiplicative weights observes expected payoffs against the
/// opponent's mixture or the payoff against a sampled opponent action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpdateMode {
    Expected,
    Sampled,
}

/// Floating-point view of a game's player payoffs. `row[i][j]` is Row's
/// payoff; `col_t[j][i]` is Col's, stored transposed so its rows index Col
/// actions.
#[derive(Debug, Clone)]
pub struct NumericGame {
    pub row: Vec<Vec<f64>>,
    pub col_t: Vec<Vec<f64>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
}

impl NumericGame {
    pub fn from_game(game: &BimatrixGame) -> NumericGame {
        let (rows, cols) = game.shape();
        let row = game
            .row_payoffs()
            .iter()
            .map(|r| r.iter().map(to_f64).collect())
            .collect();
        let col_t = (0..cols)
            .map(|j| (0..rows).map(|i| to_f64(&game.col_payoffs()[i][j])).collect())
            .collect();
        NumericGame {
            row,
            col_t,
            row_labels: game.row_actions().to_vec(),
            col_labels: game.col_actions().to_vec(),
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.row_labels.len(), self.col_labels.len())
    }

    fn max_abs(&self) -> f64 {
        self.row
            .iter()
            .chain(self.col_t.iter())
            .flatten()
            .fold(0.0, |acc: f64, &v| acc.max(v.abs()))
    }

    /// Row's expected payoff per row action against the column mixture.
    fn row_payoffs_vs(&self, y: &[f64]) -> Vec<f64> {
        self.row
            .iter()
            .map(|r| r.iter().zip(y).map(|(a, ay)| a * ay).sum())
            .collect()
    }

    /// Col's expected payoff per column action against the row mixture.
    fn col_payoffs_vs(&self, x: &[f64]) -> Vec<f64> {
        self.col_t
            .iter()
            .map(|c| c.iter().zip(x).map(|(b, bx)| b * bx).sum())
            .collect()
    }
}

/// Rescales both players' tables into `[-1, 1]` by dividing through the
/// maximum absolute player payoff, exactly. Externals are untouched. Returns
/// the scaled game and the scale; an all-zero game comes back unchanged with
/// scale 1.
pub fn normalize_for_dynamics(game: &BimatrixGame) -> (BimatrixGame, Rational) {
    let m = max_abs(
        game.row_payoffs()
            .iter()
            .chain(game.col_payoffs().iter())
            .flatten(),
    );
    if m.is_zero() || m.is_one() {
        return (game.clone(), Rational::one());
    }
    let inv = Rational::one() / &m;
    let scaled = game
        .affine_rescale(&crate::game::AgentId::Row, &inv, &Rational::zero())
        .and_then(|g| g.affine_rescale(&crate::game::AgentId::Col, &inv, &Rational::zero()))
        .expect("positive scale");
    (scaled, m)
}

/// Multiplicative-weights learner state for both players.
#[derive(Debug, Clone, PartialEq)]
pub struct MwuaState {
    pub weights_row: Vec<f64>,
    pub weights_col: Vec<f64>,
    /// 1-based round counter; 1 means "about to play the first round".
    pub step: u64,
    pub eta: f64,
}

impl MwuaState {
    /// All-ones weights, the uniform start.
    pub fn uniform(rows: usize, cols: usize, eta: f64) -> Result<MwuaState> {
        if !(eta > 0.0 && eta <= 0.5) {
            return Err(Error::input(format!("eta must lie in (0, 1/2], got {eta}")));
        }
        if rows == 0 || cols == 0 {
            return Err(Error::input("players need at least one action"));
        }
        Ok(MwuaState {
            weights_row: vec![1.0; rows],
            weights_col: vec![1.0; cols],
            step: 1,
            eta,
        })
    }

    pub fn row_distribution(&self) -> Vec<f64> {
        distribution(&self.weights_row)
    }

    pub fn col_distribution(&self) -> Vec<f64> {
        distribution(&self.weights_col)
    }
}

fn distribution(weights: &[f64]) -> Vec<f64> {
    let total: f64 = weights.iter().sum();
    weights.iter().map(|w| w / total).collect()
}

fn sample_index(dist: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in dist.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    dist.len() - 1
}

/// One multiplicative-weights round: `w_i <- w_i * (1 + eta * m_i)` for every
/// action of both players simultaneously. Returns the successor state and,
/// in sampled mode, the realized action pair.
pub fn mwua_step(
    state: &MwuaState,
    game: &NumericGame,
    mode: UpdateMode,
    rng: &mut ChaCha8Rng,
) -> Result<(MwuaState, Option<(usize, usize)>)> {
    if game.max_abs() > 1.0 {
        return Err(Error::input(
            "multiplicative weights needs payoffs in [-1, 1]; normalize the game first",
        ));
    }
    let p_row = state.row_distribution();
    let p_col = state.col_distribution();
    let (m_row, m_col, realized) = match mode {
        UpdateMode::Expected => (
            game.row_payoffs_vs(&p_col),
            game.col_payoffs_vs(&p_row),
            None,
        ),
        UpdateMode::Sampled => {
            let r = sample_index(&p_row, rng);
            let c = sample_index(&p_col, rng);
            let m_row = game.row.iter().map(|row| row[c]).collect();
            let m_col = game.col_t.iter().map(|col| col[r]).collect();
            (m_row, m_col, Some((r, c)))
        }
    };
    let update = |weights: &[f64], m: &[f64]| -> Result<Vec<f64>> {
        let next: Vec<f64> = weights
            .iter()
            .zip(m)
            .map(|(w, mi)| w * (1.0 + state.eta * mi))
            .collect();
        if next.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Numerical {
                reason: "weight left the positive range".to_string(),
                time: state.step as f64,
            });
        }
        Ok(next)
    };
    Ok((
        MwuaState {
            weights_row: update(&state.weights_row, &m_row)?,
            weights_col: update(&state.weights_col, &m_col)?,
            step: state.step + 1,
            eta: state.eta,
        },
        realized,
    ))
}

/// Runs multiplicative weights from the uniform start for `steps` rounds,
/// recording the played distribution at every round. The game is normalized
/// internally; the scale lands in `payoff_normalizer`. Deterministic for a
/// given seed.
pub fn mwua_run(
    game: &BimatrixGame,
    eta: f64,
    steps: u64,
    mode: UpdateMode,
    seed: u64,
) -> Result<Trajectory> {
    if steps < 1 {
        return Err(Error::input("steps must be at least 1"));
    }
    let (scaled, normalizer) = normalize_for_dynamics(game);
    let numeric = NumericGame::from_game(&scaled);
    let (rows, cols) = numeric.shape();
    let mut state = MwuaState::uniform(rows, cols, eta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(steps as usize);
    let mut realized_log = (mode == UpdateMode::Sampled).then(Vec::new);
    for t in 1..=steps {
        let (next, realized) = mwua_step(&state, &numeric, mode, &mut rng)?;
        samples.push(Sample {
            time: t as f64,
            row: state.row_distribution(),
            col: state.col_distribution(),
        });
        if let (Some(log), Some(pair)) = (realized_log.as_mut(), realized) {
            log.push(pair);
        }
        state = next;
        // Rescale weights to sum 1 so long runs cannot overflow; the
        // distribution is unchanged. Weights of hopeless actions then decay
        // toward zero, so floor them at the smallest normal float: denormal
        // rounding could otherwise produce an exact zero and break the
        // positivity invariant.
        state.weights_row = distribution(&state.weights_row);
        state.weights_col = distribution(&state.weights_col);
        for w in state
            .weights_row
            .iter_mut()
            .chain(state.weights_col.iter_mut())
        {
            if *w < f64::MIN_POSITIVE {
                *w = f64::MIN_POSITIVE;
            }
        }
    }
    Ok(Trajectory {
        method: match mode {
            UpdateMode::Expected => Method::MwuaExpected,
            UpdateMode::Sampled => Method::MwuaSampled,
        },
        row_labels: numeric.row_labels.clone(),
        col_labels: numeric.col_labels.clone(),
        samples,
        realized: realized_log,
        payoff_normalizer: normalizer,
    })
}

/// Replicator vector field at `(x, y)`:
/// `dx_i = x_i[(Ay)_i - x'Ay]`, `dy_j = y_j[(Bx)_j - y'Bx]`
/// where `A` is Row's table and `B` is Col's table transposed.
pub fn replicator_field(
    x: &[f64],
    y: &[f64],
    game: &NumericGame,
) -> Result<(Vec<f64>, Vec<f64>)> {
    for (name, v) in [("x", x), ("y", y)] {
        let sum: f64 = v.iter().sum();
        if (sum - 1.0).abs() > 1e-7 || v.iter().any(|&p| p < -1e-7) {
            return Err(Error::input(format!(
                "{name} is not on the probability simplex (sum {sum})"
            )));
        }
    }
    Ok(field_unchecked(x, y, game))
}

fn field_unchecked(x: &[f64], y: &[f64], game: &NumericGame) -> (Vec<f64>, Vec<f64>) {
    let ay = game.row_payoffs_vs(y);
    let bx = game.col_payoffs_vs(x);
    let mean_row: f64 = x.iter().zip(&ay).map(|(xi, a)| xi * a).sum();
    let mean_col: f64 = y.iter().zip(&bx).map(|(yj, b)| yj * b).sum();
    (
        x.iter().zip(&ay).map(|(xi, a)| xi * (a - mean_row)).collect(),
        y.iter().zip(&bx).map(|(yj, b)| yj * (b - mean_col)).collect(),
    )
}

/// Starting point for the replicator flow.
#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    Uniform,
    Explicit { x: Vec<f64>, y: Vec<f64> },
}

/// Integrates the replicator dynamics with classical fixed-step RK4,
/// renormalizing onto the simplex after every step (negatives clamped to
/// zero, then divided by the sum). Samples are recorded at `stride` steps,
/// the initial point included.
pub fn replicator_run(
    game: &BimatrixGame,
    initial: Initial,
    step_size: f64,
    horizon: f64,
    stride: usize,
) -> Result<Trajectory> {
    if !(step_size.is_finite() && step_size > 0.0 && horizon.is_finite() && horizon > 0.0) {
        return Err(Error::input("step_size and horizon must be positive"));
    }
    let stride = stride.max(1);
    let numeric = NumericGame::from_game(game);
    let (rows, cols) = numeric.shape();
    let (mut x, mut y) = match initial {
        Initial::Uniform => (vec![1.0 / rows as f64; rows], vec![1.0 / cols as f64; cols]),
        Initial::Explicit { x, y } => {
            if x.len() != rows || y.len() != cols {
                return Err(Error::input("initial vectors must match the game shape"));
            }
            replicator_field(&x, &y, &numeric)?;
            (x, y)
        }
    };
    let n_steps = (horizon / step_size).round() as usize;
    let mut samples = Vec::with_capacity(n_steps / stride + 2);
    samples.push(Sample { time: 0.0, row: x.clone(), col: y.clone() });
    for k in 1..=n_steps {
        let t = k as f64 * step_size;
        rk4_step(&mut x, &mut y, step_size, &numeric);
        let finite = x.iter().chain(y.iter()).all(|v| v.is_finite());
        if !finite {
            let last = samples.last().expect("at least the initial sample");
            return Err(Error::Numerical {
                reason: format!(
                    "state left the finite range; last good state x={:?} y={:?}",
                    last.row, last.col
                ),
                time: last.time,
            });
        }
        let worst = renormalize(&mut x).min(renormalize(&mut y));
        if worst < -1e-12 {
            return Err(Error::Numerical {
                reason: format!("component drifted to {worst} before clamping"),
                time: t,
            });
        }
        if k % stride == 0 || k == n_steps {
            samples.push(Sample { time: t, row: x.clone(), col: y.clone() });
        }
    }
    Ok(Trajectory {
        method: Method::Replicator,
        row_labels: numeric.row_labels.clone(),
        col_labels: numeric.col_labels.clone(),
        samples,
        realized: None,
        payoff_normalizer: Rational::one(),
    })
}

fn rk4_step(x: &mut [f64], y: &mut [f64], h: f64, game: &NumericGame) {
    let shift = |v: &[f64], k: &[f64], f: f64| -> Vec<f64> {
        v.iter().zip(k).map(|(a, b)| a + f * b).collect()
    };
    let (kx1, ky1) = field_unchecked(x, y, game);
    let (kx2, ky2) = field_unchecked(&shift(x, &kx1, h / 2.0), &shift(y, &ky1, h / 2.0), game);
    let (kx3, ky3) = field_unchecked(&shift(x, &kx2, h / 2.0), &shift(y, &ky2, h / 2.0), game);
    let (kx4, ky4) = field_unchecked(&shift(x, &kx3, h), &shift(y, &ky3, h), game);
    let fold = |v: &mut [f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| {
        for (i, slot) in v.iter_mut().enumerate() {
            *slot += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    };
    fold(x, &kx1, &kx2, &kx3, &kx4);
    fold(y, &ky1, &ky2, &ky3, &ky4);
}

/// Clamps negatives to zero and rescales to sum 1. Returns the smallest
/// component seen before clamping so drift stays observable.
fn renormalize(v: &mut [f64]) -> f64 {
    let mut min = f64::INFINITY;
    for p in v.iter_mut() {
        min = min.min(*p);
        if *p < 0.0 {
            *p = 0.0;
        }
    }
    let sum: f64 = v.iter().sum();
    for p in v.iter_mut() {
        *p /= sum;
    }
    min
}

/// One recorded point of a run: the time and both mixed strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub time: f64,
    pub row: Vec<f64>,
    pub col: Vec<f64>,
}

/// Time series of mixed strategies produced by a dynamic.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub method: Method,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub samples: Vec<Sample>,
    /// Realized action pairs, sampled mode only; aligned with `samples`.
    pub realized: Option<Vec<(usize, usize)>>,
    /// Positive scale divided out of the player payoffs before simulating.
    pub payoff_normalizer: Rational,
}

/// What a converged trajectory plays, mapped back to a subgame when the run
/// was over a reduced normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InducedPlay {
    /// Accept/Decline when diagnosed against a two-stage game; `None` for a
    /// plain game.
    pub decision: Option<Decision>,
    /// Profile in the realized (sub)game.
    pub profile: ActionProfile,
}

/// Convergence summary over the final window of a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceVerdict {
    pub converged: bool,
    pub row_support: Vec<usize>,
    pub col_support: Vec<usize>,
    pub induced_play: Option<InducedPlay>,
    /// Index of the first recorded sample from which both supports already
    /// equal their final values.
    pub steps_to_converge: Option<usize>,
}

/// What the trajectory's actions mean: a plain game, or contingent plans over
/// a two-stage game's reduced normal form.
#[derive(Debug, Clone, Copy)]
pub enum PlayTarget<'a> {
    Plain(&'a BimatrixGame),
    Staged(&'a TwoStageGame),
}

/// Smallest set of indices whose mass reaches `1 - epsilon`, greedily by
/// descending mass (ties by index). Returned sorted.
fn minimal_support(dist: &[f64], epsilon: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..dist.len()).collect();
    order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    let mut mass = 0.0;
    let mut support = Vec::new();
    for i in order {
        support.push(i);
        mass += dist[i];
        if mass >= 1.0 - epsilon {
            break;
        }
    }
    support.sort_unstable();
    support
}

/// Judges convergence: over the final `window` recorded samples, the minimal
/// support carrying `1 - epsilon` mass must be the same set at every sample,
/// for both players. When the target is a two-stage game, the supported
/// contingent strategies are mapped to the subgame profile they induce.
pub fn diagnose_convergence(
    trajectory: &Trajectory,
    target: PlayTarget<'_>,
    epsilon: f64,
    window: usize,
) -> ConvergenceVerdict {
    if trajectory.samples.is_empty() {
        return ConvergenceVerdict {
            converged: false,
            row_support: Vec::new(),
            col_support: Vec::new(),
            induced_play: None,
            steps_to_converge: None,
        };
    }
    let window = window.clamp(1, trajectory.samples.len());
    let supports: Vec<(Vec<usize>, Vec<usize>)> = trajectory
        .samples
        .iter()
        .map(|s| (minimal_support(&s.row, epsilon), minimal_support(&s.col, epsilon)))
        .collect();
    let last = supports.last().expect("non-empty");
    let start = supports.len() - window;
    let stable = supports[start..].iter().all(|s| s == last);
    // A support spanning every action is no concentration at all; a player
    // with a single action is concentrated by construction.
    let concentrated = |support: &[usize], n: usize| support.len() < n || n == 1;
    let converged = stable
        && concentrated(&last.0, trajectory.row_labels.len())
        && concentrated(&last.1, trajectory.col_labels.len());
    let steps_to_converge = converged.then(|| {
        let mut first = supports.len() - 1;
        while first > 0 && supports[first - 1] == *last {
            first -= 1;
        }
        first
    });
    let induced_play = if converged {
        induced_play(&last.0, &last.1, target)
    } else {
        None
    };
    ConvergenceVerdict {
        converged,
        row_support: last.0.clone(),
        col_support: last.1.clone(),
        induced_play,
        steps_to_converge,
    }
}

fn induced_play(
    row_support: &[usize],
    col_support: &[usize],
    target: PlayTarget<'_>,
) -> Option<InducedPlay> {
    match target {
        PlayTarget::Plain(_) => match (row_support, col_support) {
            ([r], [c]) => Some(InducedPlay {
                decision: None,
                profile: ActionProfile::new(*r, *c),
            }),
            _ => None,
        },
        PlayTarget::Staged(stage) => {
            let (offeree_support, plan_support) = match stage.offeree() {
                Player::Row => (row_support, col_support),
                Player::Col => (col_support, row_support),
            };
            // The offeree's support must pin a single decision-action pair.
            let &[offeree_action] = offeree_support else {
                return None;
            };
            let (decision, own) = split_offeree_action(stage, offeree_action);
            // Every supported plan must answer that decision the same way.
            let mut agreed: Option<usize> = None;
            for &plan in plan_support {
                let (if_accept, if_decline) = split_plan_action(stage, plan);
                let chosen = match decision {
                    Decision::Accept => if_accept,
                    Decision::Decline => if_decline,
                };
                if agreed.is_some_and(|a| a != chosen) {
                    return None;
                }
                agreed = Some(chosen);
            }
            let other = agreed?;
            let profile = match stage.offeree() {
                Player::Row => ActionProfile::new(own, other),
                Player::Col => ActionProfile::new(other, own),
            };
            Some(InducedPlay {
                decision: Some(decision),
                profile,
            })
        }
    }
}

/// Run parameters shared by the command-line front end and the scenario
/// runner. Defaults match the acceptance setup.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsParams {
    pub eta: f64,
    pub steps: u64,
    pub mode: UpdateMode,
    pub seed: u64,
    pub step_size: f64,
    pub horizon: f64,
    pub stride: usize,
    pub epsilon_conv: f64,
    pub window: usize,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        DynamicsParams {
            eta: 0.5,
            steps: 100_000,
            mode: UpdateMode::Expected,
            seed: 42,
            step_size: 0.01,
            horizon: 1000.0,
            stride: 1,
            epsilon_conv: 0.01,
            window: 100,
        }
    }
}

impl DynamicsParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0 && self.eta <= 0.5) {
            return Err(Error::input(format!("eta must lie in (0, 1/2], got {}", self.eta)));
        }
        if self.steps < 1 {
            return Err(Error::input("steps must be at least 1"));
        }
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::input("step_size must be positive"));
        }
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::input("horizon must be positive"));
        }
        if !(self.epsilon_conv > 0.0 && self.epsilon_conv < 1.0) {
            return Err(Error::input("epsilon_conv must lie in (0, 1)"));
        }
        if self.window == 0 {
            return Err(Error::input("window must be at least 1"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};
    use crate::scenarios::base_game;

    #[test]
    fn normalization_divides_by_max_player_payoff() {
        let (scaled, m) = normalize_for_dynamics(&base_game());
        assert_eq!(m, rat(14));
        assert_eq!(scaled.row_payoffs()[0][0], ratio(4, 14));
        assert_eq!(scaled.col_payoffs()[0][0], rat(1));
    }

    #[test]
    fn normalization_scales_reduced_forms() {
        let stage = crate::scenarios::build_scenario(crate::scenarios::ScenarioId::PlayerToPlayer)
            .stage()
            .unwrap();
        let nf = crate::equilibria::reduced_normal_form(&stage).unwrap();
        let (scaled, m) = normalize_for_dynamics(&nf);
        assert_eq!(m, rat(17));
        // Decline-top against the always-left plan.
        assert_eq!(scaled.row_payoffs()[2][0], ratio(6, 17));
        for (a, b) in nf
            .row_payoffs()
            .iter()
            .flatten()
            .zip(scaled.row_payoffs().iter().flatten())
        {
            assert_eq!(a, &(b.clone() * rat(17)));
        }
    }

    #[test]
    fn normalization_is_identity_inside_unit_range() {
        let g = BimatrixGame::from_ints(&["a", "b"], &["x", "y"], &[&[1, 0], &[0, 1]], &[
            &[0, 1],
            &[1, 0],
        ]);
        let (scaled, m) = normalize_for_dynamics(&g);
        assert_eq!(scaled, g);
        assert_eq!(m, rat(1));
        let zero = BimatrixGame::from_ints(&["a"], &["x"], &[&[0]], &[&[0]]);
        let (scaled, m) = normalize_for_dynamics(&zero);
        assert_eq!(scaled, zero);
        assert_eq!(m, rat(1));
    }

    #[test]
    fn mwua_step_matches_hand_update() {
        // Two row actions earning (1, 0) against a single opposing action.
        let g = BimatrixGame::from_ints(&["a", "b"], &["only"], &[&[1], &[0]], &[&[0], &[0]]);
        let numeric = NumericGame::from_game(&g);
        let state = MwuaState::uniform(2, 1, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let (next, realized) =
            mwua_step(&state, &numeric, UpdateMode::Expected, &mut rng).unwrap();
        assert!(realized.is_none());
        assert_eq!(next.weights_row, vec![1.5, 1.0]);
        assert_eq!(next.row_distribution(), vec![0.6, 0.4]);
        // The single-action opponent stays put.
        assert_eq!(next.col_distribution(), vec![1.0]);
        assert_eq!(next.step, 2);
    }

    #[test]
    fn mwua_rejects_unnormalized_games() {
        let numeric = NumericGame::from_game(&base_game());
        let state = MwuaState::uniform(2, 2, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(mwua_step(&state, &numeric, UpdateMode::Expected, &mut rng).is_err());
    }

    #[test]
    fn mwua_run_single_step_is_uniform() {
        let traj = mwua_run(&base_game(), 0.5, 1, UpdateMode::Expected, 42).unwrap();
        assert_eq!(traj.samples.len(), 1);
        assert_eq!(traj.samples[0].row, vec![0.5, 0.5]);
        assert_eq!(traj.samples[0].col, vec![0.5, 0.5]);
        assert_eq!(traj.payoff_normalizer, rat(14));
    }

    #[test]
    fn mwua_invalid_parameters() {
        assert!(mwua_run(&base_game(), 0.0, 10, UpdateMode::Expected, 0).is_err());
        assert!(mwua_run(&base_game(), 0.7, 10, UpdateMode::Expected, 0).is_err());
        assert!(mwua_run(&base_game(), 0.5, 0, UpdateMode::Expected, 0).is_err());
    }

    #[test]
    fn sampled_runs_reproduce_bitwise() {
        let a = mwua_run(&base_game(), 0.5, 500, UpdateMode::Sampled, 42).unwrap();
        let b = mwua_run(&base_game(), 0.5, 500, UpdateMode::Sampled, 42).unwrap();
        assert_eq!(a, b);
        let c = mwua_run(&base_game(), 0.5, 500, UpdateMode::Sampled, 43).unwrap();
        assert_ne!(a.realized, c.realized);
    }

    #[test]
    fn replicator_field_matches_hand_values() {
        let numeric = NumericGame::from_game(&base_game());
        let (dx, dy) = replicator_field(&[0.5, 0.5], &[0.5, 0.5], &numeric).unwrap();
        assert_eq!(dx, vec![-0.25, 0.25]);
        assert_eq!(dy, vec![-0.375, 0.375]);
    }

    #[test]
    fn replicator_field_vanishes_at_vertices_and_uniform_constant() {
        let numeric = NumericGame::from_game(&base_game());
        for (x, y) in [
            (vec![1.0, 0.0], vec![1.0, 0.0]),
            (vec![1.0, 0.0], vec![0.0, 1.0]),
            (vec![0.0, 1.0], vec![1.0, 0.0]),
            (vec![0.0, 1.0], vec![0.0, 1.0]),
        ] {
            let (dx, dy) = replicator_field(&x, &y, &numeric).unwrap();
            assert!(dx.iter().chain(dy.iter()).all(|&v| v == 0.0));
        }
        let constant = BimatrixGame::from_ints(&["a", "b"], &["x", "y"], &[&[7, 7], &[7, 7]], &[
            &[7, 7],
            &[7, 7],
        ]);
        let numeric = NumericGame::from_game(&constant);
        let (dx, dy) = replicator_field(&[0.5, 0.5], &[0.5, 0.5], &numeric).unwrap();
        assert!(dx.iter().chain(dy.iter()).all(|&v| v == 0.0));
    }

    #[test]
    fn replicator_field_rejects_off_simplex() {
        let numeric = NumericGame::from_game(&base_game());
        assert!(replicator_field(&[0.9, 0.3], &[0.5, 0.5], &numeric).is_err());
    }

    #[test]
    fn replicator_stays_at_vertices() {
        let traj = replicator_run(
            &base_game(),
            Initial::Explicit { x: vec![1.0, 0.0], y: vec![0.0, 1.0] },
            0.01,
            5.0,
            10,
        )
        .unwrap();
        for s in &traj.samples {
            assert_eq!(s.row, vec![1.0, 0.0]);
            assert_eq!(s.col, vec![0.0, 1.0]);
        }
    }

    #[test]
    fn replicator_rejects_bad_parameters() {
        assert!(replicator_run(&base_game(), Initial::Uniform, 0.0, 1.0, 1).is_err());
        assert!(replicator_run(&base_game(), Initial::Uniform, 0.01, -1.0, 1).is_err());
        let bad = Initial::Explicit { x: vec![1.0], y: vec![0.5, 0.5] };
        assert!(replicator_run(&base_game(), bad, 0.01, 1.0, 1).is_err());
    }

    #[test]
    fn constant_trajectory_at_uniform_is_not_converged() {
        let constant = BimatrixGame::from_ints(&["a", "b"], &["x", "y"], &[&[7, 7], &[7, 7]], &[
            &[7, 7],
            &[7, 7],
        ]);
        let traj = replicator_run(&constant, Initial::Uniform, 0.01, 10.0, 10).unwrap();
        let verdict = diagnose_convergence(&traj, PlayTarget::Plain(&constant), 0.01, 50);
        assert!(!verdict.converged);
        assert_eq!(verdict.row_support, vec![0, 1]);
        assert!(verdict.induced_play.is_none());
    }

    #[test]
    fn staged_diagnosis_handles_a_col_offeree() {
        use crate::contracts::{offer_stage, BindingOffer};
        use crate::game::AgentId;

        let base = crate::scenarios::base_game().transposed();
        let offer = BindingOffer::new(AgentId::Row, Player::Col, rat(3), rat(2), "T").unwrap();
        let stage = offer_stage(&base, &offer, None).unwrap();
        let nf = crate::equilibria::reduced_normal_form(&stage).unwrap();
        let traj = mwua_run(&nf, 0.5, 5_000, UpdateMode::Expected, 42).unwrap();
        let verdict = diagnose_convergence(&traj, PlayTarget::Staged(&stage), 0.01, 100);
        assert!(verdict.converged);
        // Mirror of the row case: the offeree declines and plays T, the
        // co-player answers L; on the transposed axes that profile is (L, T).
        assert_eq!(
            verdict.induced_play,
            Some(InducedPlay {
                decision: Some(Decision::Decline),
                profile: ActionProfile::new(0, 0),
            })
        );
        assert_eq!(verdict.col_support, vec![2]);
        assert_eq!(verdict.row_support, vec![0, 2]);
    }

    #[test]
    fn plain_convergence_on_base_game() {
        let traj = replicator_run(&base_game(), Initial::Uniform, 0.01, 200.0, 10).unwrap();
        let g = base_game();
        let verdict = diagnose_convergence(&traj, PlayTarget::Plain(&g), 0.01, 100);
        assert!(verdict.converged);
        assert_eq!(verdict.row_support, vec![1]);
        assert_eq!(verdict.col_support, vec![1]);
        assert_eq!(
            verdict.induced_play,
            Some(InducedPlay { decision: None, profile: ActionProfile::new(1, 1) })
        );
        assert!(verdict.steps_to_converge.is_some());
    }
}
