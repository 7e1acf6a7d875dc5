//! JSON report documents emitted by the command line and the bindings.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::contracts::{CounterConditions, ManipulationClass, PrimaryConditions};
use crate::dynamics::{ConvergenceVerdict, Method, Trajectory};
use crate::equilibria::{
    iterated_elimination, pure_nash, strictly_dominated, ChainPath, SpePath, TwoStageGame,
};
use crate::game::{ActionProfile, BimatrixGame, Player};
use crate::rational::{format_rational, rational_to_json};
use crate::scenarios::ScenarioReport;

fn payoff_map(game: &BimatrixGame, profile: ActionProfile) -> BTreeMap<String, serde_json::Value> {
    game.agents()
        .into_iter()
        .map(|agent| {
            let value = game.payoff(profile, &agent).expect("agent exists");
            (agent.to_string(), rational_to_json(value))
        })
        .collect()
}

/// A pure profile with every agent's payoff.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileEntry {
    pub row: String,
    pub col: String,
    pub payoffs: BTreeMap<String, serde_json::Value>,
}

impl ProfileEntry {
    fn new(game: &BimatrixGame, profile: ActionProfile) -> ProfileEntry {
        ProfileEntry {
            row: game.row_actions()[profile.row].clone(),
            col: game.col_actions()[profile.col].clone(),
            payoffs: payoff_map(game, profile),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DominatedEntry {
    pub row: Vec<String>,
    pub col: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EliminationEntry {
    pub round: usize,
    pub player: String,
    pub action: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpeEntry {
    pub decision: String,
    pub row: String,
    pub col: String,
    pub payoffs: BTreeMap<String, serde_json::Value>,
}

impl SpeEntry {
    pub fn new(stage: &TwoStageGame, path: &SpePath) -> SpeEntry {
        let game = stage.subgame(path.decision);
        SpeEntry {
            decision: path.decision.as_str().to_string(),
            row: game.row_actions()[path.profile.row].clone(),
            col: game.col_actions()[path.profile.col].clone(),
            payoffs: path
                .payoffs
                .iter()
                .map(|(agent, value)| (agent.to_string(), rational_to_json(value)))
                .collect(),
        }
    }
}

/// The analysis document: pure Nash profiles with payoffs, dominated actions
/// per player, the elimination log, and the stage solution when one exists.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub pure_nash: Vec<ProfileEntry>,
    pub dominated: DominatedEntry,
    pub elimination_log: Vec<EliminationEntry>,
    pub spe: Option<SpeEntry>,
}

impl AnalysisReport {
    /// Full exact analysis of a single game; `spe` stays empty.
    pub fn for_game(game: &BimatrixGame) -> AnalysisReport {
        let labels = |player: Player, indices: &std::collections::BTreeSet<usize>| {
            indices
                .iter()
                .map(|&i| game.actions(player)[i].clone())
                .collect()
        };
        let (_, log) = iterated_elimination(game);
        AnalysisReport {
            pure_nash: pure_nash(game)
                .into_iter()
                .map(|p| ProfileEntry::new(game, p))
                .collect(),
            dominated: DominatedEntry {
                row: labels(Player::Row, &strictly_dominated(game, Player::Row)),
                col: labels(Player::Col, &strictly_dominated(game, Player::Col)),
            },
            elimination_log: log
                .into_iter()
                .map(|e| EliminationEntry {
                    round: e.round,
                    player: e.player.as_str().to_string(),
                    action: e.action,
                })
                .collect(),
            spe: None,
        }
    }

    pub fn with_spe(mut self, stage: &TwoStageGame, path: &SpePath) -> AnalysisReport {
        self.spe = Some(SpeEntry::new(stage, path));
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InducedPlayEntry {
    pub decision: Option<String>,
    pub row: String,
    pub col: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictEntry {
    pub converged: bool,
    pub row_support: Vec<String>,
    pub col_support: Vec<String>,
    pub induced_play: Option<InducedPlayEntry>,
    pub steps_to_converge: Option<usize>,
}

impl VerdictEntry {
    /// `played_game` is the game the trajectory ran on (for support labels);
    /// `realized_game` resolves the induced profile's labels, which live in
    /// the chosen subgame for staged runs.
    pub fn new(
        verdict: &ConvergenceVerdict,
        played_game: &BimatrixGame,
        realized_game: impl Fn(&crate::dynamics::InducedPlay) -> (String, String),
    ) -> VerdictEntry {
        VerdictEntry {
            converged: verdict.converged,
            row_support: verdict
                .row_support
                .iter()
                .map(|&i| played_game.row_actions()[i].clone())
                .collect(),
            col_support: verdict
                .col_support
                .iter()
                .map(|&i| played_game.col_actions()[i].clone())
                .collect(),
            induced_play: verdict.induced_play.as_ref().map(|play| {
                let (row, col) = realized_game(play);
                InducedPlayEntry {
                    decision: play.decision.map(|d| d.as_str().to_string()),
                    row,
                    col,
                }
            }),
            steps_to_converge: verdict.steps_to_converge,
        }
    }

    pub fn for_stage(
        verdict: &ConvergenceVerdict,
        normal_form: &BimatrixGame,
        stage: &TwoStageGame,
    ) -> VerdictEntry {
        VerdictEntry::new(verdict, normal_form, |play| {
            let game = stage.subgame(play.decision.expect("staged verdicts carry a decision"));
            (
                game.row_actions()[play.profile.row].clone(),
                game.col_actions()[play.profile.col].clone(),
            )
        })
    }

    pub fn for_plain(verdict: &ConvergenceVerdict, game: &BimatrixGame) -> VerdictEntry {
        VerdictEntry::new(verdict, game, |play| {
            (
                game.row_actions()[play.profile.row].clone(),
                game.col_actions()[play.profile.col].clone(),
            )
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainEntry {
    pub first_decision: String,
    pub decision: String,
    pub row: String,
    pub col: String,
    pub payoffs: BTreeMap<String, serde_json::Value>,
}

impl ChainEntry {
    pub fn new(chain: &ChainPath, stage: &TwoStageGame) -> ChainEntry {
        let spe = SpeEntry::new(stage, &chain.inner);
        ChainEntry {
            first_decision: chain.first_decision.as_str().to_string(),
            decision: spe.decision,
            row: spe.row,
            col: spe.col,
            payoffs: spe.payoffs,
        }
    }
}

/// The scenario document, mirroring [`ScenarioReport`].
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReportEntry {
    pub scenario: u8,
    pub tables_match: bool,
    pub equilibria: AnalysisReport,
    pub spe: SpeEntry,
    pub mwua_verdict: VerdictEntry,
    pub replicator_verdict: VerdictEntry,
    pub spe_vs_dynamics: String,
    pub backward_induction: Option<ChainEntry>,
}

impl ScenarioReportEntry {
    pub fn new(report: &ScenarioReport) -> ScenarioReportEntry {
        let analysis =
            AnalysisReport::for_game(&report.normal_form).with_spe(&report.stage, &report.spe);
        let chain_stage = report.backward_induction.as_ref().map(|chain| {
            // Label lookup for the chain path reuses the displayed stage: the
            // branch subgames share action labels with it.
            ChainEntry::new(chain, &report.stage)
        });
        ScenarioReportEntry {
            scenario: report.id.number(),
            tables_match: report.tables_match,
            equilibria: analysis,
            spe: SpeEntry::new(&report.stage, &report.spe),
            mwua_verdict: VerdictEntry::for_stage(
                &report.mwua_verdict,
                &report.normal_form,
                &report.stage,
            ),
            replicator_verdict: VerdictEntry::for_stage(
                &report.replicator_verdict,
                &report.normal_form,
                &report.stage,
            ),
            spe_vs_dynamics: report.spe_vs_dynamics.as_str().to_string(),
            backward_induction: chain_stage,
        }
    }
}

/// Stage-solution document: the backward-induction path, with the
/// manipulation classification and the chained induction when applicable.
#[derive(Debug, Clone, Serialize)]
pub struct StageSolution {
    pub spe: SpeEntry,
    pub classification: Option<ClassificationEntry>,
    pub backward_induction: Option<ChainEntry>,
}

/// Condition-check document: each inequality by name, plus the conjunction.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub primary: PrimaryEntry,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counter: Option<CounterEntry>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimaryEntry {
    pub decline_tempts: bool,
    pub accept_preferred: bool,
    pub co_player_answers_first: bool,
    pub reward_covers_first_column: bool,
    pub all: bool,
}

impl From<&PrimaryConditions> for PrimaryEntry {
    fn from(c: &PrimaryConditions) -> PrimaryEntry {
        PrimaryEntry {
            decline_tempts: c.decline_tempts,
            accept_preferred: c.accept_preferred,
            co_player_answers_first: c.co_player_answers_first,
            reward_covers_first_column: c.reward_covers_first_column,
            all: c.all(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterEntry {
    pub transfer_flips_co_player: bool,
    pub flipped_column_preferred: bool,
    pub all: bool,
}

impl From<&CounterConditions> for CounterEntry {
    fn from(c: &CounterConditions) -> CounterEntry {
        CounterEntry {
            transfer_flips_co_player: c.transfer_flips_co_player,
            flipped_column_preferred: c.flipped_column_preferred,
            all: c.all(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationEntry {
    pub t1: String,
    pub t2: String,
    pub w: String,
}

impl From<&ManipulationClass> for ClassificationEntry {
    fn from(c: &ManipulationClass) -> ClassificationEntry {
        ClassificationEntry {
            t1: c.t1.as_str().to_string(),
            t2: c.t2.as_str().to_string(),
            w: c.w.as_str().to_string(),
        }
    }
}

/// Simulation document: run metadata plus the convergence verdict.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationReport {
    pub method: String,
    pub payoff_normalizer: String,
    pub samples: usize,
    pub verdict: VerdictEntry,
}

impl SimulationReport {
    pub fn new(trajectory: &Trajectory, verdict: VerdictEntry) -> SimulationReport {
        SimulationReport {
            method: match trajectory.method {
                Method::MwuaExpected => "mwua-expected",
                Method::MwuaSampled => "mwua-sampled",
                Method::Replicator => "replicator",
            }
            .to_string(),
            payoff_normalizer: format_rational(&trajectory.payoff_normalizer),
            samples: trajectory.samples.len(),
            verdict,
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::base_game;

    #[test]
    fn analysis_report_field_names() {
        let report = AnalysisReport::for_game(&base_game());
        let v: serde_json::Value = serde_json::from_str(&to_json_string(&report)).unwrap();
        assert_eq!(v["pure_nash"][0]["row"], "B");
        assert_eq!(v["pure_nash"][0]["col"], "R");
        assert_eq!(v["pure_nash"][0]["payoffs"]["Row"], 10);
        assert_eq!(v["dominated"]["row"], serde_json::json!(["T"]));
        assert_eq!(v["dominated"]["col"], serde_json::json!([]));
        assert_eq!(v["elimination_log"][0]["player"], "Row");
        assert_eq!(v["elimination_log"][0]["action"], "T");
        assert!(v["spe"].is_null());
    }
}
