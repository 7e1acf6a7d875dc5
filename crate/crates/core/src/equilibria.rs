//! Exact equilibrium analysis: best responses, pure Nash enumeration, strict
//! dominance, iterated elimination, reduced normal forms and backward
//! induction over the Accept/Decline stage.
//!
//! Everything here works on exact rationals; mixed equilibria are out of
//! scope and operations that would need them fail with
//! [`Error::UnsupportedStructure`].

use std::collections::BTreeSet;
use std::fmt;

use crate::contracts::{apply_second_order, BindingOffer, SecondOrderOffer};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, AgentId, BimatrixGame, Player};
use crate::rational::Rational;

/// The offeree's move in the contract stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    Accept,
    Decline,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Accept => "Accept",
            Decision::Decline => "Decline",
        }
    }

    /// Single-letter prefix used in reduced-normal-form row labels.
    fn prefix(self) -> char {
        match self {
            Decision::Accept => 'A',
            Decision::Decline => 'D',
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The pair of games an offer induces: the subgame played after Accept and
/// the one played after Decline, plus who makes that call.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoStageGame {
    accept_game: BimatrixGame,
    decline_game: BimatrixGame,
    offeree: Player,
}

impl TwoStageGame {
    pub fn new(
        accept_game: BimatrixGame,
        decline_game: BimatrixGame,
        offeree: Player,
    ) -> Result<TwoStageGame> {
        if accept_game.row_actions() != decline_game.row_actions()
            || accept_game.col_actions() != decline_game.col_actions()
        {
            return Err(Error::input(
                "accept and decline subgames must share action labels",
            ));
        }
        let accept_labels: Vec<&str> = accept_game.external_labels().collect();
        let decline_labels: Vec<&str> = decline_game.external_labels().collect();
        if accept_labels != decline_labels {
            return Err(Error::input(
                "accept and decline subgames must share external agents",
            ));
        }
        Ok(TwoStageGame {
            accept_game,
            decline_game,
            offeree,
        })
    }

    pub fn accept_game(&self) -> &BimatrixGame {
        &self.accept_game
    }

    pub fn decline_game(&self) -> &BimatrixGame {
        &self.decline_game
    }

    pub fn subgame(&self, decision: Decision) -> &BimatrixGame {
        match decision {
            Decision::Accept => &self.accept_game,
            Decision::Decline => &self.decline_game,
        }
    }

    pub fn offeree(&self) -> Player {
        self.offeree
    }
}

/// Backward-induction solution of a [`TwoStageGame`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpePath {
    pub decision: Decision,
    /// Pure Nash profile of the chosen subgame.
    pub profile: ActionProfile,
    /// Every agent's payoff on the path, in the game's agent order.
    pub payoffs: Vec<(AgentId, Rational)>,
}

impl SpePath {
    pub fn payoff_of(&self, agent: &AgentId) -> Option<&Rational> {
        self.payoffs.iter().find(|(a, _)| a == agent).map(|(_, v)| v)
    }
}

/// Solution of the chained scenario where an external agent first decides on
/// a second-order offer and the offeree then decides on the original one.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainPath {
    /// The first manipulator's move on the second-order offer.
    pub first_decision: Decision,
    /// The offeree's stage solved inside the chosen branch.
    pub inner: SpePath,
}

/// One step of iterated elimination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elimination {
    pub round: usize,
    pub player: Player,
    pub action: String,
}

/// The argmax set of `player`'s actions against a fixed opposing action.
/// Never empty for a well-formed game.
pub fn best_responses(
    game: &BimatrixGame,
    player: Player,
    opponent_action: usize,
) -> Result<BTreeSet<usize>> {
    let n_opp = game.actions(player.other()).len();
    if opponent_action >= n_opp {
        return Err(Error::input(format!(
            "opponent action {opponent_action} out of bounds ({n_opp} actions)"
        )));
    }
    let table = game.player_payoffs(player);
    let value = |own: usize| -> &Rational {
        match player {
            Player::Row => &table[own][opponent_action],
            Player::Col => &table[opponent_action][own],
        }
    };
    let n_own = game.actions(player).len();
    let mut best: Option<&Rational> = None;
    for i in 0..n_own {
        let v = value(i);
        if best.is_none_or(|b| v > b) {
            best = Some(v);
        }
    }
    let best = best.ok_or_else(|| Error::input("player has no actions"))?;
    Ok((0..n_own).filter(|&i| value(i) == best).collect())
}

/// Enumerates pure Nash equilibria in row-major order: exactly the profiles
/// where both actions are mutual best responses. External tables are
/// bookkeeping only and never influence the result.
pub fn pure_nash(game: &BimatrixGame) -> Vec<ActionProfile> {
    let (rows, cols) = game.shape();
    let row_best: Vec<BTreeSet<usize>> = (0..cols)
        .map(|c| best_responses(game, Player::Row, c).expect("in bounds"))
        .collect();
    let col_best: Vec<BTreeSet<usize>> = (0..rows)
        .map(|r| best_responses(game, Player::Col, r).expect("in bounds"))
        .collect();
    game.profiles()
        .filter(|p| row_best[p.col].contains(&p.row) && col_best[p.row].contains(&p.col))
        .collect()
}

/// Actions of `player` strictly dominated by some other pure action of the
/// same player. Dominance by mixtures is out of scope.
pub fn strictly_dominated(game: &BimatrixGame, player: Player) -> BTreeSet<usize> {
    let n_own = game.actions(player).len();
    let n_opp = game.actions(player.other()).len();
    let table = game.player_payoffs(player);
    let value = |own: usize, opp: usize| -> &Rational {
        match player {
            Player::Row => &table[own][opp],
            Player::Col => &table[opp][own],
        }
    };
    let dominates = |a: usize, b: usize| (0..n_opp).all(|opp| value(a, opp) > value(b, opp));
    (0..n_own)
        .filter(|&b| (0..n_own).any(|a| a != b && dominates(a, b)))
        .collect()
}

/// Repeatedly removes strictly dominated pure actions, alternating players
/// starting with Row, until neither player has one left. Returns the reduced
/// game and the ordered elimination log.
pub fn iterated_elimination(game: &BimatrixGame) -> (BimatrixGame, Vec<Elimination>) {
    let mut current = game.clone();
    let mut log = Vec::new();
    let mut round = 0;
    let mut player = Player::Row;
    let mut idle_passes = 0;
    while idle_passes < 2 {
        let doomed = strictly_dominated(&current, player);
        if doomed.is_empty() {
            idle_passes += 1;
        } else {
            idle_passes = 0;
            round += 1;
            for &idx in &doomed {
                log.push(Elimination {
                    round,
                    player,
                    action: current.actions(player)[idx].clone(),
                });
            }
            current = remove_actions(&current, player, &doomed);
        }
        player = player.other();
    }
    (current, log)
}

fn remove_actions(game: &BimatrixGame, player: Player, doomed: &BTreeSet<usize>) -> BimatrixGame {
    let keep: Vec<usize> = (0..game.actions(player).len())
        .filter(|i| !doomed.contains(i))
        .collect();
    let pick_labels = |labels: &[String]| keep.iter().map(|&i| labels[i].clone()).collect();
    let pick = |m: &Vec<Vec<Rational>>| -> Vec<Vec<Rational>> {
        match player {
            Player::Row => keep.iter().map(|&i| m[i].clone()).collect(),
            Player::Col => m
                .iter()
                .map(|row| keep.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        }
    };
    let (row_actions, col_actions) = match player {
        Player::Row => (pick_labels(game.row_actions()), game.col_actions().to_vec()),
        Player::Col => (game.row_actions().to_vec(), pick_labels(game.col_actions())),
    };
    let mut out = BimatrixGame::new(
        row_actions,
        col_actions,
        pick(game.row_payoffs()),
        pick(game.col_payoffs()),
    );
    for (label, m) in game.externals() {
        out = out.with_external(label.clone(), pick(m));
    }
    out
}

/// Strategic form of a two-stage game. The offeree's actions pair the
/// Accept/Decline call with a subgame action (labels like `"A T"`, `"D B"`);
/// the co-player's actions are decision-contingent plans (label `"L,R"`
/// reads "L if Accept, R if Decline"). Externals are carried through.
pub fn reduced_normal_form(stage: &TwoStageGame) -> Result<BimatrixGame> {
    match stage.offeree {
        Player::Row => reduced_normal_form_row(stage),
        Player::Col => {
            let flipped = TwoStageGame::new(
                stage.accept_game.transposed(),
                stage.decline_game.transposed(),
                Player::Row,
            )?;
            Ok(reduced_normal_form_row(&flipped)?.transposed())
        }
    }
}

fn reduced_normal_form_row(stage: &TwoStageGame) -> Result<BimatrixGame> {
    let accept = &stage.accept_game;
    let decline = &stage.decline_game;
    let (rows, cols) = accept.shape();

    let mut row_labels = Vec::with_capacity(2 * rows);
    for decision in [Decision::Accept, Decision::Decline] {
        for a in accept.row_actions() {
            row_labels.push(format!("{} {a}", decision.prefix()));
        }
    }
    let mut col_labels = Vec::with_capacity(cols * cols);
    for ca in accept.col_actions() {
        for cd in accept.col_actions() {
            col_labels.push(format!("{ca},{cd}"));
        }
    }

    // Cell source: Accept rows read the accept subgame at the plan's first
    // component, Decline rows the decline subgame at the second.
    let source = |m_accept: &Vec<Vec<Rational>>,
                  m_decline: &Vec<Vec<Rational>>|
     -> Vec<Vec<Rational>> {
        let mut out = Vec::with_capacity(2 * rows);
        for (decision, m) in [(Decision::Accept, m_accept), (Decision::Decline, m_decline)] {
            for source_row in m.iter() {
                let mut row = Vec::with_capacity(cols * cols);
                for ca in 0..cols {
                    for cd in 0..cols {
                        let j = match decision {
                            Decision::Accept => ca,
                            Decision::Decline => cd,
                        };
                        row.push(source_row[j].clone());
                    }
                }
                out.push(row);
            }
        }
        out
    };

    let mut out = BimatrixGame::new(
        row_labels,
        col_labels,
        source(accept.row_payoffs(), decline.row_payoffs()),
        source(accept.col_payoffs(), decline.col_payoffs()),
    );
    for ((label, m_accept), (_, m_decline)) in accept.externals().iter().zip(decline.externals()) {
        out = out.with_external(label.clone(), source(m_accept, m_decline));
    }
    Ok(out)
}

/// Decomposed index of a reduced-normal-form action on the offeree axis.
pub fn split_offeree_action(stage: &TwoStageGame, index: usize) -> (Decision, usize) {
    let n = stage.accept_game.actions(stage.offeree).len();
    if index < n {
        (Decision::Accept, index)
    } else {
        (Decision::Decline, index - n)
    }
}

/// Decomposed index of a contingent plan on the co-player axis:
/// (action if Accept, action if Decline).
pub fn split_plan_action(stage: &TwoStageGame, index: usize) -> (usize, usize) {
    let n = stage.accept_game.actions(stage.offeree.other()).len();
    (index / n, index % n)
}

fn unique_nash(game: &BimatrixGame, which: Decision) -> Result<ActionProfile> {
    let found = pure_nash(game);
    match found.as_slice() {
        [only] => Ok(*only),
        _ => Err(Error::unsupported(
            format!(
                "{} subgame has {} pure Nash equilibria, need exactly one",
                which.as_str().to_lowercase(),
                found.len()
            ),
            found,
        )),
    }
}

/// Backward induction over the Accept/Decline stage: each subgame must have
/// exactly one pure Nash equilibrium; the offeree picks the decision with
/// the larger continuation payoff, declining when indifferent.
pub fn subgame_perfect(stage: &TwoStageGame) -> Result<SpePath> {
    let offeree: AgentId = stage.offeree.into();
    let mut candidates = Vec::new();
    for decision in [Decision::Accept, Decision::Decline] {
        let game = stage.subgame(decision);
        let profile = unique_nash(game, decision)?;
        let continuation = game.payoff(profile, &offeree)?.clone();
        candidates.push((decision, profile, continuation));
    }
    let (accept, decline) = (&candidates[0], &candidates[1]);
    let (decision, profile) = if accept.2 > decline.2 {
        (Decision::Accept, accept.1)
    } else {
        (Decision::Decline, decline.1)
    };
    let game = stage.subgame(decision);
    let payoffs = game
        .agents()
        .into_iter()
        .map(|agent| {
            let v = game.payoff(profile, &agent).expect("agent exists").clone();
            (agent, v)
        })
        .collect();
    Ok(SpePath {
        decision,
        profile,
        payoffs,
    })
}

/// Solves the chained scenario: the first manipulator decides on the
/// second-order offer, anticipating the offeree's backward-induction play in
/// each branch, and maximizes its own bookkeeping payoff (declining when
/// indifferent). Returns the manipulator's decision and the inner path.
pub fn backward_induction_chain(
    base: &BimatrixGame,
    first: &BindingOffer,
    second: &SecondOrderOffer,
) -> Result<ChainPath> {
    let m1 = AgentId::external(second.offeree());
    let mut branches = Vec::new();
    for m1_accepts in [true, false] {
        let (accept_game, decline_game) = apply_second_order(base, first, second, m1_accepts)?;
        let stage = TwoStageGame::new(accept_game, decline_game, first.offeree())?;
        let inner = subgame_perfect(&stage)?;
        let m1_payoff = inner
            .payoff_of(&m1)
            .cloned()
            .ok_or_else(|| Error::input(format!("no payoff table for {m1}")))?;
        branches.push((m1_accepts, inner, m1_payoff));
    }
    let (accept_branch, decline_branch) = (branches.remove(0), branches.remove(0));
    let chosen = if accept_branch.2 > decline_branch.2 {
        accept_branch
    } else {
        decline_branch
    };
    Ok(ChainPath {
        first_decision: if chosen.0 {
            Decision::Accept
        } else {
            Decision::Decline
        },
        inner: chosen.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scenarios::base_game;

    fn constant_game(value: i64) -> BimatrixGame {
        let m = vec![vec![rat(value); 2]; 2];
        BimatrixGame::new(
            vec!["a".into(), "b".into()],
            vec!["x".into(), "y".into()],
            m.clone(),
            m,
        )
    }

    #[test]
    fn best_responses_base_game() {
        let g = base_game();
        assert_eq!(
            best_responses(&g, Player::Row, 0).unwrap(),
            BTreeSet::from([1])
        );
        assert_eq!(
            best_responses(&g, Player::Col, 1).unwrap(),
            BTreeSet::from([1])
        );
        assert!(best_responses(&g, Player::Row, 5).is_err());
    }

    #[test]
    fn best_responses_ties() {
        let g = constant_game(7);
        assert_eq!(
            best_responses(&g, Player::Row, 0).unwrap(),
            BTreeSet::from([0, 1])
        );
    }

    #[test]
    fn base_game_unique_nash() {
        assert_eq!(pure_nash(&base_game()), vec![ActionProfile::new(1, 1)]);
    }

    #[test]
    fn base_game_dominance() {
        let g = base_game();
        assert_eq!(strictly_dominated(&g, Player::Row), BTreeSet::from([0]));
        assert_eq!(strictly_dominated(&g, Player::Col), BTreeSet::new());
    }

    #[test]
    fn equal_rows_are_not_strictly_dominated() {
        let g = BimatrixGame::from_ints(
            &["a", "b"],
            &["x", "y"],
            &[&[3, 4], &[3, 4]],
            &[&[1, 1], &[1, 1]],
        );
        assert_eq!(strictly_dominated(&g, Player::Row), BTreeSet::new());
    }

    #[test]
    fn base_game_iterated_elimination() {
        let (reduced, log) = iterated_elimination(&base_game());
        assert_eq!(reduced.shape(), (1, 1));
        assert_eq!(reduced.row_actions(), ["B"]);
        assert_eq!(reduced.col_actions(), ["R"]);
        assert_eq!(
            log,
            vec![
                Elimination { round: 1, player: Player::Row, action: "T".into() },
                Elimination { round: 2, player: Player::Col, action: "L".into() },
            ]
        );
    }

    #[test]
    fn constant_game_has_no_eliminations() {
        let g = constant_game(7);
        let (reduced, log) = iterated_elimination(&g);
        assert_eq!(reduced, g);
        assert!(log.is_empty());
    }

    #[test]
    fn degenerate_stage_ties_break_to_decline() {
        let stage = TwoStageGame::new(base_game(), base_game(), Player::Row).unwrap();
        let path = subgame_perfect(&stage).unwrap();
        assert_eq!(path.decision, Decision::Decline);
        assert_eq!(path.profile, ActionProfile::new(1, 1));
        assert_eq!(path.payoff_of(&AgentId::Row), Some(&rat(10)));
    }

    #[test]
    fn duplicated_subgame_duplicates_accept_columns() {
        let stage = TwoStageGame::new(base_game(), base_game(), Player::Row).unwrap();
        let nf = reduced_normal_form(&stage).unwrap();
        assert_eq!(nf.shape(), (4, 4));
        // Accept rows ignore the decline component of the plan.
        for r in 0..2 {
            for agent in [AgentId::Row, AgentId::Col] {
                assert_eq!(
                    nf.payoff(ActionProfile::new(r, 0), &agent).unwrap(),
                    nf.payoff(ActionProfile::new(r, 1), &agent).unwrap(),
                );
            }
        }
    }

    #[test]
    fn col_offeree_stage_mirrors_the_row_case() {
        use crate::contracts::{offer_stage, BindingOffer};

        // The same offer stated from Row to Col on the transposed game must
        // produce the mirrored stage, normal form, and solution.
        let row_spec = crate::scenarios::build_scenario(crate::scenarios::ScenarioId::PlayerToPlayer);
        let row_stage = row_spec.stage().unwrap();
        let mirrored_offer =
            BindingOffer::new(AgentId::Row, Player::Col, rat(3), rat(2), "T").unwrap();
        let col_stage =
            offer_stage(&row_spec.base.transposed(), &mirrored_offer, None).unwrap();
        assert_eq!(col_stage.offeree(), Player::Col);
        assert_eq!(*col_stage.accept_game(), row_stage.accept_game().transposed());
        assert_eq!(*col_stage.decline_game(), row_stage.decline_game().transposed());

        let nf_row = reduced_normal_form(&row_stage).unwrap();
        let nf_col = reduced_normal_form(&col_stage).unwrap();
        assert_eq!(nf_col, nf_row.transposed());
        assert_eq!(nf_col.col_actions()[2], "D T");
        assert_eq!(nf_col.row_actions()[1], "L,R");

        let spe_row = subgame_perfect(&row_stage).unwrap();
        let spe_col = subgame_perfect(&col_stage).unwrap();
        assert_eq!(spe_col.decision, spe_row.decision);
        assert_eq!(spe_col.profile.row, spe_row.profile.col);
        assert_eq!(spe_col.profile.col, spe_row.profile.row);
        assert_eq!(
            spe_col.payoff_of(&AgentId::Col),
            spe_row.payoff_of(&AgentId::Row)
        );
    }

    #[test]
    fn multiple_nash_is_unsupported() {
        // Pure coordination game: two pure equilibria.
        let coord = BimatrixGame::from_ints(
            &["a", "b"],
            &["x", "y"],
            &[&[1, 0], &[0, 1]],
            &[&[1, 0], &[0, 1]],
        );
        let stage = TwoStageGame::new(coord.clone(), coord, Player::Row).unwrap();
        match subgame_perfect(&stage) {
            Err(Error::UnsupportedStructure { equilibria, .. }) => {
                assert_eq!(
                    equilibria,
                    vec![ActionProfile::new(0, 0), ActionProfile::new(1, 1)]
                );
            }
            other => panic!("expected unsupported structure, got {other:?}"),
        }
    }
}
