//! Built-in manipulation scenarios, end to end: the 2x2 base game, the four
//! offer stacks, reference tables for verification, and a runner that
//! compares exact predictions against simulated play.

use std::collections::BTreeSet;

use crate::contracts::{
    apply_second_order, offer_stage, BindingOffer, ContingentPayment, CounterOffer,
    SecondOrderOffer,
};
use crate::dynamics::{
    diagnose_convergence, mwua_run, replicator_run, ConvergenceVerdict, DynamicsParams, Initial,
    PlayTarget, Trajectory,
};
use crate::equilibria::{
    backward_induction_chain, iterated_elimination, pure_nash, reduced_normal_form,
    strictly_dominated, subgame_perfect, ChainPath, Decision, Elimination, SpePath, TwoStageGame,
};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, AgentId, BimatrixGame, Player};
use crate::rational::rat;

/// The 2x2 asymmetric base game every scenario starts from. Its unique Nash
/// equilibrium is (B, R) with payoffs (10, 10); Bottom strictly dominates Top
/// and Right is iterated dominant.
pub fn base_game() -> BimatrixGame {
    BimatrixGame::from_ints(
        &["T", "B"],
        &["L", "R"],
        &[&[4, 9], &[5, 10]],
        &[&[14, 13], &[6, 10]],
    )
}

/// Reference payoff tables the transformations must reproduce. These exist
/// for verification only; the analysis pipeline always runs on transformed
/// games, never on these.
pub mod tables {
    use super::*;

    fn with_m1(game: BimatrixGame, m1: &[&[i64]]) -> BimatrixGame {
        let matrix = m1
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        game.with_external("M1", matrix)
    }

    fn with_m2(game: BimatrixGame, m2: &[&[i64]]) -> BimatrixGame {
        let matrix = m2
            .iter()
            .map(|r| r.iter().map(|&v| rat(v)).collect())
            .collect();
        game.with_external("M2", matrix)
    }

    /// Accept subgame when Col offers Row "pay 3 or get 2 per T".
    pub fn s1_accept() -> BimatrixGame {
        BimatrixGame::from_ints(
            &["T", "B"],
            &["L", "R"],
            &[&[1, 6], &[2, 7]],
            &[&[17, 16], &[9, 13]],
        )
    }

    /// Decline subgame of the same offer: Row pockets 2 per T from Col.
    pub fn s1_decline() -> BimatrixGame {
        BimatrixGame::from_ints(
            &["T", "B"],
            &["L", "R"],
            &[&[6, 11], &[5, 10]],
            &[&[12, 11], &[6, 10]],
        )
    }

    /// Accept subgame when the external manipulator M1 makes the same offer.
    pub fn s2_accept() -> BimatrixGame {
        with_m1(
            BimatrixGame::from_ints(
                &["T", "B"],
                &["L", "R"],
                &[&[1, 6], &[2, 7]],
                &[&[14, 13], &[6, 10]],
            ),
            &[&[3, 3], &[3, 3]],
        )
    }

    /// Decline subgame with M1 paying 2 per T.
    pub fn s2_decline() -> BimatrixGame {
        with_m1(
            BimatrixGame::from_ints(
                &["T", "B"],
                &["L", "R"],
                &[&[6, 11], &[5, 10]],
                &[&[14, 13], &[6, 10]],
            ),
            &[&[-2, -2], &[0, 0]],
        )
    }

    /// Accept subgame of the counter-offer scenario (same as [`s2_accept`]).
    pub fn s3_accept() -> BimatrixGame {
        s2_accept()
    }

    /// Decline subgame after Row's counter-offer: 2 to Col per R on top of
    /// M1's decline reward.
    pub fn s3_decline() -> BimatrixGame {
        with_m1(
            BimatrixGame::from_ints(
                &["T", "B"],
                &["L", "R"],
                &[&[6, 9], &[5, 8]],
                &[&[14, 15], &[6, 12]],
            ),
            &[&[-2, -2], &[0, 0]],
        )
    }

    /// Accept-branch subgame once M1 accepts M2's fee of 2.
    pub fn s4_accept() -> BimatrixGame {
        with_m2(
            with_m1(
                BimatrixGame::from_ints(
                    &["T", "B"],
                    &["L", "R"],
                    &[&[1, 6], &[2, 7]],
                    &[&[14, 13], &[6, 10]],
                ),
                &[&[1, 1], &[1, 1]],
            ),
            &[&[2, 2], &[2, 2]],
        )
    }

    /// Decline subgame once both M1 and Row decline: M2 pays Col 2 per R.
    pub fn s4_decline() -> BimatrixGame {
        with_m2(
            with_m1(
                BimatrixGame::from_ints(
                    &["T", "B"],
                    &["L", "R"],
                    &[&[6, 11], &[5, 10]],
                    &[&[14, 15], &[6, 12]],
                ),
                &[&[-2, -2], &[0, 0]],
            ),
            &[&[0, -2], &[0, -2]],
        )
    }

    fn normal_labels() -> (Vec<String>, Vec<String>) {
        (
            vec!["A T".into(), "A B".into(), "D T".into(), "D B".into()],
            vec!["L,L".into(), "L,R".into(), "R,L".into(), "R,R".into()],
        )
    }

    fn normal_form(
        row: &[&[i64]],
        col: &[&[i64]],
        m1: Option<&[&[i64]]>,
        m2: Option<&[&[i64]]>,
    ) -> BimatrixGame {
        let (rows, cols) = normal_labels();
        let to_matrix = |m: &[&[i64]]| {
            m.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect()
        };
        let mut game = BimatrixGame::new(rows, cols, to_matrix(row), to_matrix(col));
        if let Some(m1) = m1 {
            game = game.with_external("M1", to_matrix(m1));
        }
        if let Some(m2) = m2 {
            game = game.with_external("M2", to_matrix(m2));
        }
        game
    }

    /// Reduced normal form of the player-to-player scenario.
    pub fn s1_normal_form() -> BimatrixGame {
        normal_form(
            &[&[1, 1, 6, 6], &[2, 2, 7, 7], &[6, 11, 6, 11], &[5, 10, 5, 10]],
            &[
                &[17, 17, 16, 16],
                &[9, 9, 13, 13],
                &[12, 11, 12, 11],
                &[6, 10, 6, 10],
            ],
            None,
            None,
        )
    }

    /// Reduced normal form of the first-manipulator scenario.
    pub fn s2_normal_form() -> BimatrixGame {
        normal_form(
            &[&[1, 1, 6, 6], &[2, 2, 7, 7], &[6, 11, 6, 11], &[5, 10, 5, 10]],
            &[
                &[14, 14, 13, 13],
                &[6, 6, 10, 10],
                &[14, 13, 14, 13],
                &[6, 10, 6, 10],
            ],
            Some(&[&[3, 3, 3, 3], &[3, 3, 3, 3], &[-2, -2, -2, -2], &[0, 0, 0, 0]]),
            None,
        )
    }

    /// Reduced normal form of the counter-offer scenario.
    pub fn s3_normal_form() -> BimatrixGame {
        normal_form(
            &[&[1, 1, 6, 6], &[2, 2, 7, 7], &[6, 9, 6, 9], &[5, 8, 5, 8]],
            &[
                &[14, 14, 13, 13],
                &[6, 6, 10, 10],
                &[14, 15, 14, 15],
                &[6, 12, 6, 12],
            ],
            Some(&[&[3, 3, 3, 3], &[3, 3, 3, 3], &[-2, -2, -2, -2], &[0, 0, 0, 0]]),
            None,
        )
    }

    /// Reduced normal form of the second-manipulator scenario (the branch
    /// pair the first manipulator's decision selects between).
    pub fn s4_normal_form() -> BimatrixGame {
        normal_form(
            &[&[1, 1, 6, 6], &[2, 2, 7, 7], &[6, 11, 6, 11], &[5, 10, 5, 10]],
            &[
                &[14, 14, 13, 13],
                &[6, 6, 10, 10],
                &[14, 15, 14, 15],
                &[6, 12, 6, 12],
            ],
            Some(&[&[1, 1, 1, 1], &[1, 1, 1, 1], &[-2, -2, -2, -2], &[0, 0, 0, 0]]),
            Some(&[&[2, 2, 2, 2], &[2, 2, 2, 2], &[0, -2, 0, -2], &[0, -2, 0, -2]]),
        )
    }
}

/// The four built-in manipulation scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioId {
    /// Col offers Row "pay 3 or get 2 per T".
    PlayerToPlayer,
    /// External manipulator M1 makes the same offer.
    FirstManipulator,
    /// As above, plus Row's counter-offer of 2 to Col per R.
    CounterOffer,
    /// As the first manipulator, plus M2's offer to M1: "pay 2 or, if Row
    /// declines you, I pay Col 2 per R".
    SecondManipulator,
}

impl ScenarioId {
    pub fn from_number(n: u8) -> Result<ScenarioId> {
        match n {
            1 => Ok(ScenarioId::PlayerToPlayer),
            2 => Ok(ScenarioId::FirstManipulator),
            3 => Ok(ScenarioId::CounterOffer),
            4 => Ok(ScenarioId::SecondManipulator),
            other => Err(Error::input(format!("unknown scenario id {other}, expected 1-4"))),
        }
    }

    pub fn number(self) -> u8 {
        match self {
            ScenarioId::PlayerToPlayer => 1,
            ScenarioId::FirstManipulator => 2,
            ScenarioId::CounterOffer => 3,
            ScenarioId::SecondManipulator => 4,
        }
    }

    pub fn all() -> [ScenarioId; 4] {
        [
            ScenarioId::PlayerToPlayer,
            ScenarioId::FirstManipulator,
            ScenarioId::CounterOffer,
            ScenarioId::SecondManipulator,
        ]
    }
}

/// Expected outcomes a scenario is verified against.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioExpected {
    pub accept_table: BimatrixGame,
    pub decline_table: BimatrixGame,
    pub normal_form: BimatrixGame,
    pub accept_nash: Vec<ActionProfile>,
    pub decline_nash: Vec<ActionProfile>,
    pub normal_form_nash: Vec<ActionProfile>,
    pub spe_decision: Decision,
    pub spe_profile: ActionProfile,
    pub induced_decision: Decision,
    pub induced_profile: ActionProfile,
    /// Reduced-form action sets expected to carry the final mass.
    pub row_support: Vec<usize>,
    pub col_support: Vec<usize>,
}

/// A scenario's inputs (base game and offer stack) plus its expectations.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub id: ScenarioId,
    pub base: BimatrixGame,
    pub offer: BindingOffer,
    pub counter: Option<CounterOffer>,
    pub second: Option<SecondOrderOffer>,
    pub expected: ScenarioExpected,
}

impl ScenarioSpec {
    /// Builds the Accept/Decline stage from the offer stack. For the
    /// second-manipulator scenario this is the displayed branch pair:
    /// accept assuming M1 paid M2, decline assuming both offers declined.
    pub fn stage(&self) -> Result<TwoStageGame> {
        match (&self.counter, &self.second) {
            (None, None) => offer_stage(&self.base, &self.offer, None),
            (Some(counter), None) => offer_stage(&self.base, &self.offer, Some(counter)),
            (None, Some(second)) => {
                let (accept, _) = apply_second_order(&self.base, &self.offer, second, true)?;
                let (_, decline) = apply_second_order(&self.base, &self.offer, second, false)?;
                TwoStageGame::new(accept, decline, self.offer.offeree())
            }
            (Some(_), Some(_)) => Err(Error::input(
                "a scenario cannot carry both a counter-offer and a second-order offer",
            )),
        }
    }
}

const BR: ActionProfile = ActionProfile { row: 1, col: 1 };
const TL: ActionProfile = ActionProfile { row: 0, col: 0 };
const TR: ActionProfile = ActionProfile { row: 0, col: 1 };
// Reduced-form profiles, rows (AT, AB, DT, DB) x plans (LL, LR, RL, RR).
const AB_RL: ActionProfile = ActionProfile { row: 1, col: 2 };
const DT_LL: ActionProfile = ActionProfile { row: 2, col: 0 };
const DT_LR: ActionProfile = ActionProfile { row: 2, col: 1 };
const DT_RR: ActionProfile = ActionProfile { row: 2, col: 3 };

/// Constructs a built-in scenario with the standard fees: accept fee 3,
/// decline reward 2 per T, counter transfer 2 per R, second-order fee 2.
pub fn build_scenario(id: ScenarioId) -> ScenarioSpec {
    let base = base_game();
    let m1 = AgentId::external("M1");
    let offer_from = |offeror: AgentId| {
        BindingOffer::new(offeror, Player::Row, rat(3), rat(2), "T").expect("valid offer")
    };
    match id {
        ScenarioId::PlayerToPlayer => ScenarioSpec {
            id,
            base,
            offer: offer_from(AgentId::Col),
            counter: None,
            second: None,
            expected: ScenarioExpected {
                accept_table: tables::s1_accept(),
                decline_table: tables::s1_decline(),
                normal_form: tables::s1_normal_form(),
                accept_nash: vec![BR],
                decline_nash: vec![TL],
                normal_form_nash: vec![AB_RL, DT_LL],
                spe_decision: Decision::Accept,
                spe_profile: BR,
                induced_decision: Decision::Decline,
                induced_profile: TL,
                row_support: vec![2],
                col_support: vec![0, 2],
            },
        },
        ScenarioId::FirstManipulator => ScenarioSpec {
            id,
            base,
            offer: offer_from(m1),
            counter: None,
            second: None,
            expected: ScenarioExpected {
                accept_table: tables::s2_accept(),
                decline_table: tables::s2_decline(),
                normal_form: tables::s2_normal_form(),
                accept_nash: vec![BR],
                decline_nash: vec![TL],
                normal_form_nash: vec![AB_RL, DT_LL],
                spe_decision: Decision::Accept,
                spe_profile: BR,
                induced_decision: Decision::Decline,
                induced_profile: TL,
                row_support: vec![2],
                col_support: vec![0, 2],
            },
        },
        ScenarioId::CounterOffer => ScenarioSpec {
            id,
            base,
            offer: offer_from(m1),
            counter: Some(CounterOffer::new(Player::Row, rat(2), "R").expect("valid counter")),
            second: None,
            expected: ScenarioExpected {
                accept_table: tables::s3_accept(),
                decline_table: tables::s3_decline(),
                normal_form: tables::s3_normal_form(),
                accept_nash: vec![BR],
                decline_nash: vec![TR],
                normal_form_nash: vec![AB_RL, DT_LR, DT_RR],
                spe_decision: Decision::Decline,
                spe_profile: TR,
                induced_decision: Decision::Decline,
                induced_profile: TR,
                row_support: vec![2],
                col_support: vec![1, 3],
            },
        },
        ScenarioId::SecondManipulator => ScenarioSpec {
            id,
            base,
            offer: offer_from(m1),
            counter: None,
            second: Some(
                SecondOrderOffer::new(
                    "M2",
                    "M1",
                    rat(2),
                    ContingentPayment { action: "R".into(), amount: rat(2) },
                )
                .expect("valid second-order offer"),
            ),
            expected: ScenarioExpected {
                accept_table: tables::s4_accept(),
                decline_table: tables::s4_decline(),
                normal_form: tables::s4_normal_form(),
                accept_nash: vec![BR],
                decline_nash: vec![TR],
                normal_form_nash: vec![AB_RL, DT_LR, DT_RR],
                spe_decision: Decision::Decline,
                spe_profile: TR,
                induced_decision: Decision::Decline,
                induced_profile: TR,
                row_support: vec![2],
                col_support: vec![1, 3],
            },
        },
    }
}

/// Whether simulated play landed on the backward-induction path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    Disagree,
}

impl Agreement {
    pub fn as_str(self) -> &'static str {
        match self {
            Agreement::Agree => "agree",
            Agreement::Disagree => "disagree",
        }
    }
}

/// Everything a scenario run produces: table verification, exact analysis,
/// both dynamics with verdicts, and (for the second-manipulator scenario)
/// the consistent full-tree induction alongside the displayed-pair solution.
#[derive(Debug, Clone)]
pub struct ScenarioReport {
    pub id: ScenarioId,
    pub tables_match: bool,
    pub stage: TwoStageGame,
    pub normal_form: BimatrixGame,
    pub normal_form_nash: Vec<ActionProfile>,
    pub dominated_row: BTreeSet<usize>,
    pub dominated_col: BTreeSet<usize>,
    pub elimination_log: Vec<Elimination>,
    pub spe: SpePath,
    pub mwua_trajectory: Trajectory,
    pub mwua_verdict: ConvergenceVerdict,
    pub replicator_trajectory: Trajectory,
    pub replicator_verdict: ConvergenceVerdict,
    pub spe_vs_dynamics: Agreement,
    /// Backward induction over the consistent full tree (second-manipulator
    /// scenario only): M1 decides first, then Row.
    pub backward_induction: Option<ChainPath>,
}

/// Runs a scenario end to end: verifies table identity, analyzes the reduced
/// normal form exactly, simulates both dynamics on it, and compares the
/// induced play against the backward-induction path.
pub fn run_scenario(spec: &ScenarioSpec, params: &DynamicsParams) -> Result<ScenarioReport> {
    params.validate()?;
    let stage = spec.stage()?;
    let normal_form = reduced_normal_form(&stage)?;
    let tables_match = *stage.accept_game() == spec.expected.accept_table
        && *stage.decline_game() == spec.expected.decline_table
        && normal_form == spec.expected.normal_form;

    let normal_form_nash = pure_nash(&normal_form);
    let dominated_row = strictly_dominated(&normal_form, Player::Row);
    let dominated_col = strictly_dominated(&normal_form, Player::Col);
    let (_, elimination_log) = iterated_elimination(&normal_form);
    let spe = subgame_perfect(&stage)?;

    let mwua_trajectory = mwua_run(
        &normal_form,
        params.eta,
        params.steps,
        params.mode,
        params.seed,
    )?;
    let mwua_verdict = diagnose_convergence(
        &mwua_trajectory,
        PlayTarget::Staged(&stage),
        params.epsilon_conv,
        params.window,
    );
    let replicator_trajectory = replicator_run(
        &normal_form,
        Initial::Uniform,
        params.step_size,
        params.horizon,
        params.stride,
    )?;
    let replicator_verdict = diagnose_convergence(
        &replicator_trajectory,
        PlayTarget::Staged(&stage),
        params.epsilon_conv,
        params.window,
    );

    let spe_play = crate::dynamics::InducedPlay {
        decision: Some(spe.decision),
        profile: spe.profile,
    };
    let matches_spe = |v: &ConvergenceVerdict| v.induced_play == Some(spe_play);
    let spe_vs_dynamics = if matches_spe(&mwua_verdict) && matches_spe(&replicator_verdict) {
        Agreement::Agree
    } else {
        Agreement::Disagree
    };

    let backward_induction = match &spec.second {
        Some(second) => Some(backward_induction_chain(&spec.base, &spec.offer, second)?),
        None => None,
    };

    Ok(ScenarioReport {
        id: spec.id,
        tables_match,
        stage,
        normal_form,
        normal_form_nash,
        dominated_row,
        dominated_col,
        elimination_log,
        spe,
        mwua_trajectory,
        mwua_verdict,
        replicator_trajectory,
        replicator_verdict,
        spe_vs_dynamics,
        backward_induction,
    })
}
