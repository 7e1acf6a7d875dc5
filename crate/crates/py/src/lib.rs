//! Python bindings for the game manipulation engine.
//!
//! Exposes exact game analysis and the learning-dynamics simulators as an
//! in-process extension module:
//!
//!     from gamemanip_py import Game, Offer, scenario_report
//!     g = Game(["T", "B"], ["L", "R"], [[4, 9], [5, 10]], [[14, 13], [6, 10]])
//!     g.pure_nash()                  # [("B", "R")]
//!     g.apply_decline(offer).pure_nash()
//!
//! Payoffs cross the boundary as ints or "p/q" strings, so exactness is
//! preserved; reports and trajectories travel as JSON/CSV text.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use gamemanip::csv_io::trajectory_to_csv;
use gamemanip::rational::{format_rational, parse_rational, rat, Rational};
use gamemanip::report::{
    AnalysisReport, CheckReport, ClassificationEntry, CounterEntry, PrimaryEntry,
    ScenarioReportEntry, SimulationReport, SpeEntry, StageSolution, VerdictEntry,
};
use gamemanip::{
    check_counter_conditions, check_primary_conditions, classify_manipulation,
    diagnose_convergence, mwua_run, offer_stage, replicator_run, run_scenario, subgame_perfect,
    AgentId, BimatrixGame, BindingOffer, CounterOffer, DynamicsParams, Error, Initial, Player,
    PlayTarget, ScenarioId, UpdateMode,
};

fn to_py_err(err: Error) -> PyErr {
    match err {
        Error::Input(_) => PyValueError::new_err(err.to_string()),
        _ => PyRuntimeError::new_err(err.to_string()),
    }
}

/// Payoff cell coming in from Python: an int or a "p/q" string.
#[derive(FromPyObject)]
enum CellIn {
    Int(i64),
    Text(String),
}

impl CellIn {
    fn into_rational(self) -> PyResult<Rational> {
        match self {
            CellIn::Int(v) => Ok(rat(v)),
            CellIn::Text(s) => parse_rational(&s).map_err(to_py_err),
        }
    }
}

fn matrix_in(rows: Vec<Vec<CellIn>>) -> PyResult<Vec<Vec<Rational>>> {
    rows.into_iter()
        .map(|r| r.into_iter().map(CellIn::into_rational).collect())
        .collect()
}

fn parse_player(s: &str) -> PyResult<Player> {
    match s {
        "Row" => Ok(Player::Row),
        "Col" => Ok(Player::Col),
        other => Err(PyValueError::new_err(format!(
            "expected \"Row\" or \"Col\", got {other:?}"
        ))),
    }
}

/// A finite two-player game with exact payoffs and optional external
/// bookkeeping agents.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Game {
    inner: BimatrixGame,
}

#[pymethods]
impl Game {
    /// Build a game from action labels and payoff tables. Payoff entries are
    /// ints or "p/q" strings. `externals` maps agent labels to tables.
    #[new]
    #[pyo3(signature = (row_actions, col_actions, row_payoffs, col_payoffs, externals=None))]
    fn new(
        row_actions: Vec<String>,
        col_actions: Vec<String>,
        row_payoffs: Vec<Vec<CellIn>>,
        col_payoffs: Vec<Vec<CellIn>>,
        externals: Option<Vec<(String, Vec<Vec<CellIn>>)>>,
    ) -> PyResult<Self> {
        let mut game = BimatrixGame::new(
            row_actions,
            col_actions,
            matrix_in(row_payoffs)?,
            matrix_in(col_payoffs)?,
        );
        for (label, table) in externals.unwrap_or_default() {
            game = game.with_external(label, matrix_in(table)?);
        }
        match game.checked() {
            Ok(game) => Ok(Game { inner: game }),
            Err(violations) => {
                let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                Err(PyValueError::new_err(format!("invalid game: {}", listed.join("; "))))
            }
        }
    }

    /// Parse a game JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        gamemanip::json::game_from_json(text)
            .map(|inner| Game { inner })
            .map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        gamemanip::json::game_to_json(&self.inner)
    }

    fn row_actions(&self) -> Vec<String> {
        self.inner.row_actions().to_vec()
    }

    fn col_actions(&self) -> Vec<String> {
        self.inner.col_actions().to_vec()
    }

    /// Payoff to "Row", "Col", or an external agent label, as an exact
    /// decimal-free string.
    fn payoff(&self, row: &str, col: &str, agent: &str) -> PyResult<String> {
        let profile = gamemanip::ActionProfile::new(
            self.inner.action_index(Player::Row, row).map_err(to_py_err)?,
            self.inner.action_index(Player::Col, col).map_err(to_py_err)?,
        );
        let agent = AgentId::parse(agent).map_err(to_py_err)?;
        let value = self.inner.payoff(profile, &agent).map_err(to_py_err)?;
        Ok(format_rational(value))
    }

    /// Pure Nash equilibria as (row label, col label) pairs, row-major.
    fn pure_nash(&self) -> Vec<(String, String)> {
        gamemanip::pure_nash(&self.inner)
            .into_iter()
            .map(|p| {
                (
                    self.inner.row_actions()[p.row].clone(),
                    self.inner.col_actions()[p.col].clone(),
                )
            })
            .collect()
    }

    /// Strictly dominated action labels of "Row" or "Col".
    fn dominated(&self, player: &str) -> PyResult<Vec<String>> {
        let player = parse_player(player)?;
        Ok(gamemanip::strictly_dominated(&self.inner, player)
            .into_iter()
            .map(|i| self.inner.actions(player)[i].clone())
            .collect())
    }

    /// Full analysis document (pure Nash, dominance, elimination) as JSON.
    fn analyze_json(&self) -> String {
        gamemanip::report::to_json_string(&AnalysisReport::for_game(&self.inner))
    }

    fn apply_accept(&self, offer: &Offer) -> PyResult<Game> {
        gamemanip::apply_accept(&self.inner, &offer.inner)
            .map(|inner| Game { inner })
            .map_err(to_py_err)
    }

    fn apply_decline(&self, offer: &Offer) -> PyResult<Game> {
        gamemanip::apply_decline(&self.inner, &offer.inner)
            .map(|inner| Game { inner })
            .map_err(to_py_err)
    }

    fn __repr__(&self) -> String {
        let (rows, cols) = self.inner.shape();
        format!(
            "Game({}x{}, externals={:?})",
            rows,
            cols,
            self.inner.external_labels().collect::<Vec<_>>()
        )
    }
}

/// "Either you pay me the accept fee, or I pay you the decline reward
/// whenever you play the contingent action."
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Offer {
    inner: BindingOffer,
}

#[pymethods]
impl Offer {
    #[new]
    fn new(
        offeror: &str,
        offeree: &str,
        accept_fee: CellIn,
        decline_reward: CellIn,
        contingent_action: &str,
    ) -> PyResult<Self> {
        let offer = BindingOffer::new(
            AgentId::parse(offeror).map_err(to_py_err)?,
            parse_player(offeree)?,
            accept_fee.into_rational()?,
            decline_reward.into_rational()?,
            contingent_action,
        )
        .map_err(to_py_err)?;
        Ok(Offer { inner: offer })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        gamemanip::json::offer_from_json(text)
            .map(|inner| Offer { inner })
            .map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        gamemanip::json::offer_to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Offer({})", self.inner)
    }
}

/// Truth of the four offer inequalities (and the counter-offer pair when a
/// counter transfer and action are given), as JSON.
#[pyfunction]
#[pyo3(signature = (game, offer, counter_transfer=None, counter_action=None))]
fn check_report(
    game: &Game,
    offer: &Offer,
    counter_transfer: Option<CellIn>,
    counter_action: Option<String>,
) -> PyResult<String> {
    let primary = check_primary_conditions(&game.inner, &offer.inner).map_err(to_py_err)?;
    let counter = match (counter_transfer, counter_action) {
        (Some(transfer), Some(action)) => {
            let counter =
                CounterOffer::new(offer.inner.offeree(), transfer.into_rational()?, action)
                    .map_err(to_py_err)?;
            Some(
                check_counter_conditions(&game.inner, &offer.inner, &counter)
                    .map_err(to_py_err)?,
            )
        }
        (None, None) => None,
        _ => {
            return Err(PyValueError::new_err(
                "counter_transfer and counter_action go together",
            ))
        }
    };
    let report = CheckReport {
        primary: PrimaryEntry::from(&primary),
        counter: counter.as_ref().map(CounterEntry::from),
    };
    Ok(gamemanip::report::to_json_string(&report))
}

/// Backward-induction solution of the offer stage as JSON, including the
/// manipulation classification when the base game supports it.
#[pyfunction]
fn stage_solution(game: &Game, offer: &Offer) -> PyResult<String> {
    let stage = offer_stage(&game.inner, &offer.inner, None).map_err(to_py_err)?;
    let path = subgame_perfect(&stage).map_err(to_py_err)?;
    let classification = classify_manipulation(&game.inner, &offer.inner)
        .ok()
        .map(|c| ClassificationEntry::from(&c));
    let solution = StageSolution {
        spe: SpeEntry::new(&stage, &path),
        classification,
        backward_induction: None,
    };
    Ok(gamemanip::report::to_json_string(&solution))
}

/// Run a built-in scenario (1-4) and return its JSON report.
#[pyfunction]
#[pyo3(signature = (id, steps=100_000, horizon=1000.0, seed=42))]
fn scenario_report(id: u8, steps: u64, horizon: f64, seed: u64) -> PyResult<String> {
    let id = ScenarioId::from_number(id).map_err(to_py_err)?;
    let params = DynamicsParams {
        steps,
        horizon,
        seed,
        ..DynamicsParams::default()
    };
    let report = run_scenario(&gamemanip::build_scenario(id), &params).map_err(to_py_err)?;
    Ok(gamemanip::report::to_json_string(&ScenarioReportEntry::new(&report)))
}

/// Simulate learning dynamics on a game; returns (trajectory CSV, report JSON).
#[pyfunction]
#[pyo3(signature = (game, method, eta=0.5, steps=100_000, mode="expected", seed=42,
                    step_size=0.01, horizon=1000.0, stride=1,
                    epsilon_conv=0.01, window=100))]
#[allow(clippy::too_many_arguments)]
fn simulate(
    game: &Game,
    method: &str,
    eta: f64,
    steps: u64,
    mode: &str,
    seed: u64,
    step_size: f64,
    horizon: f64,
    stride: usize,
    epsilon_conv: f64,
    window: usize,
) -> PyResult<(String, String)> {
    let mode = match mode {
        "expected" => UpdateMode::Expected,
        "sampled" => UpdateMode::Sampled,
        other => {
            return Err(PyValueError::new_err(format!(
                "mode must be \"expected\" or \"sampled\", got {other:?}"
            )))
        }
    };
    let trajectory = match method {
        "mwua" => mwua_run(&game.inner, eta, steps, mode, seed).map_err(to_py_err)?,
        "replicator" => replicator_run(&game.inner, Initial::Uniform, step_size, horizon, stride)
            .map_err(to_py_err)?,
        other => {
            return Err(PyValueError::new_err(format!(
                "method must be \"mwua\" or \"replicator\", got {other:?}"
            )))
        }
    };
    let verdict = diagnose_convergence(
        &trajectory,
        PlayTarget::Plain(&game.inner),
        epsilon_conv,
        window,
    );
    let report = SimulationReport::new(&trajectory, VerdictEntry::for_plain(&verdict, &game.inner));
    Ok((
        trajectory_to_csv(&trajectory),
        gamemanip::report::to_json_string(&report),
    ))
}

#[pymodule]
fn gamemanip_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Game>()?;
    m.add_class::<Offer>()?;
    m.add_function(wrap_pyfunction!(check_report, m)?)?;
    m.add_function(wrap_pyfunction!(stage_solution, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_report, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
