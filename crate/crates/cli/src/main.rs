//! Command-line front end: load games and offers from JSON, run exact
//! analyses, condition checks and simulations, and emit JSON reports plus
//! CSV trajectories.
//!
//! Exit codes: 0 success, 1 input error, 2 unsupported structure or
//! numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gamemanip::csv_io::trajectory_to_csv;
use gamemanip::json::{counter_from_json, game_from_json, offer_from_json, second_offer_from_json};
use gamemanip::report::{
    AnalysisReport, ChainEntry, CheckReport, ClassificationEntry, CounterEntry, PrimaryEntry,
    ScenarioReportEntry, SimulationReport, SpeEntry, StageSolution, VerdictEntry,
};
use gamemanip::{
    backward_induction_chain, build_scenario, check_counter_conditions, check_primary_conditions,
    classify_manipulation, diagnose_convergence, mwua_run, offer_stage, replicator_run,
    run_scenario, second_order_stage, subgame_perfect, BimatrixGame, BindingOffer, CounterOffer,
    DynamicsParams, Error, Initial, PlayTarget, ScenarioId, SecondOrderOffer, Trajectory,
    UpdateMode,
};

#[derive(Parser)]
#[command(
    name = "gamemanip",
    about = "Binding-contract game manipulation: exact analysis and learning dynamics",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact analysis of a game: pure Nash, dominance, iterated elimination.
    Analyze {
        /// Game JSON document.
        #[arg(long)]
        game: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the offer inequalities (and counter-offer inequalities).
    Check {
        #[arg(long)]
        game: PathBuf,
        /// Binding offer JSON document.
        #[arg(long)]
        offer: PathBuf,
        /// Counter-offer JSON document.
        #[arg(long)]
        counter: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the Accept/Decline stage by backward induction.
    Spe {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        offer: PathBuf,
        #[arg(long)]
        counter: Option<PathBuf>,
        /// Second-order offer JSON document (offer between external agents).
        #[arg(long)]
        second: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate learning dynamics on a game.
    Simulate {
        #[arg(long)]
        game: PathBuf,
        #[arg(long, value_enum)]
        method: MethodArg,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        /// Write the trajectory CSV here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Reproduce a built-in manipulation scenario end to end.
    Scenario {
        /// Scenario number (1-4).
        #[arg(long)]
        id: u8,
        /// Which trajectory to write to --out.
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[command(flatten)]
        dynamics: DynamicsArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mwua,
    Replicator,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Expected,
    Sampled,
}

#[derive(Args)]
struct DynamicsArgs {
    /// Multiplicative-weights learning rate, in (0, 1/2].
    #[arg(long, default_value_t = 0.5)]
    eta: f64,
    /// Multiplicative-weights rounds.
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    /// Payoff observation mode for multiplicative weights.
    #[arg(long, value_enum, default_value_t = ModeArg::Expected)]
    mode: ModeArg,
    /// Seed for sampled mode (GM_SEED overrides).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Replicator integration step.
    #[arg(long, default_value_t = 0.01)]
    step_size: f64,
    /// Replicator time horizon.
    #[arg(long, default_value_t = 1000.0)]
    horizon: f64,
    /// Record every n-th replicator step.
    #[arg(long, default_value_t = 1)]
    stride: usize,
    /// Convergence mass tolerance.
    #[arg(long, default_value_t = 0.01)]
    epsilon_conv: f64,
    /// Convergence window, in recorded samples.
    #[arg(long, default_value_t = 100)]
    window: usize,
}

impl DynamicsArgs {
    fn to_params(&self) -> Result<DynamicsParams, Error> {
        let seed = match std::env::var("GM_SEED") {
            Ok(text) => text
                .parse::<u64>()
                .map_err(|_| Error::input(format!("GM_SEED must be an integer, got {text:?}")))?,
            Err(_) => self.seed,
        };
        let params = DynamicsParams {
            eta: self.eta,
            steps: self.steps,
            mode: match self.mode {
                ModeArg::Expected => UpdateMode::Expected,
                ModeArg::Sampled => UpdateMode::Sampled,
            },
            seed,
            step_size: self.step_size,
            horizon: self.horizon,
            stride: self.stride,
            epsilon_conv: self.epsilon_conv,
            window: self.window,
        };
        params.validate()?;
        Ok(params)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("gamemanip: {err}");
            match err {
                Error::Input(_) => ExitCode::from(1),
                Error::UnsupportedStructure { .. } | Error::Numerical { .. } => ExitCode::from(2),
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::input(format!("cannot read {}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<BimatrixGame, Error> {
    game_from_json(&read_file(path)?)
}

fn load_offer(path: &Path) -> Result<BindingOffer, Error> {
    offer_from_json(&read_file(path)?)
}

fn load_counter(path: Option<&PathBuf>) -> Result<Option<CounterOffer>, Error> {
    path.map(|p| counter_from_json(&read_file(p)?)).transpose()
}

fn load_second(path: Option<&PathBuf>) -> Result<Option<SecondOrderOffer>, Error> {
    path.map(|p| second_offer_from_json(&read_file(p)?)).transpose()
}

fn emit(text: String, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_csv(trajectory: &Trajectory, out: &PathBuf) -> Result<(), Error> {
    std::fs::write(out, trajectory_to_csv(trajectory))
        .map_err(|e| Error::input(format!("cannot write {}: {e}", out.display())))
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Analyze { game, out } => {
            let game = load_game(&game)?;
            let report = AnalysisReport::for_game(&game);
            emit(gamemanip::report::to_json_string(&report), out.as_ref())
        }
        Command::Check { game, offer, counter, out } => {
            let game = load_game(&game)?;
            let offer = load_offer(&offer)?;
            let primary = check_primary_conditions(&game, &offer)?;
            let counter = load_counter(counter.as_ref())?
                .map(|c| check_counter_conditions(&game, &offer, &c))
                .transpose()?;
            let report = CheckReport {
                primary: PrimaryEntry::from(&primary),
                counter: counter.as_ref().map(CounterEntry::from),
            };
            emit(gamemanip::report::to_json_string(&report), out.as_ref())
        }
        Command::Spe { game, offer, counter, second, out } => {
            let game = load_game(&game)?;
            let offer = load_offer(&offer)?;
            let counter = load_counter(counter.as_ref())?;
            let second = load_second(second.as_ref())?;
            if counter.is_some() && second.is_some() {
                return Err(Error::input(
                    "--counter and --second cannot be combined in one stage",
                ));
            }
            let solution = match &second {
                Some(second) => {
                    let chain = backward_induction_chain(&game, &offer, second)?;
                    let branch = second_order_stage(
                        &game,
                        &offer,
                        second,
                        chain.first_decision == gamemanip::Decision::Accept,
                    )?;
                    StageSolution {
                        spe: SpeEntry::new(&branch, &chain.inner),
                        classification: None,
                        backward_induction: Some(ChainEntry::new(&chain, &branch)),
                    }
                }
                None => {
                    let stage = offer_stage(&game, &offer, counter.as_ref())?;
                    let path = subgame_perfect(&stage)?;
                    let classification = if counter.is_none() {
                        classify_manipulation(&game, &offer)
                            .ok()
                            .map(|c| ClassificationEntry::from(&c))
                    } else {
                        None
                    };
                    StageSolution {
                        spe: SpeEntry::new(&stage, &path),
                        classification,
                        backward_induction: None,
                    }
                }
            };
            emit(gamemanip::report::to_json_string(&solution), out.as_ref())
        }
        Command::Simulate { game, method, dynamics, out, report } => {
            let game = load_game(&game)?;
            let params = dynamics.to_params()?;
            let trajectory = match method {
                MethodArg::Mwua => {
                    mwua_run(&game, params.eta, params.steps, params.mode, params.seed)?
                }
                MethodArg::Replicator => replicator_run(
                    &game,
                    Initial::Uniform,
                    params.step_size,
                    params.horizon,
                    params.stride,
                )?,
            };
            let verdict = diagnose_convergence(
                &trajectory,
                PlayTarget::Plain(&game),
                params.epsilon_conv,
                params.window,
            );
            if let Some(out) = &out {
                write_csv(&trajectory, out)?;
            }
            let doc = SimulationReport::new(
                &trajectory,
                VerdictEntry::for_plain(&verdict, &game),
            );
            emit(gamemanip::report::to_json_string(&doc), report.as_ref())
        }
        Command::Scenario { id, method, dynamics, out, report } => {
            let id = ScenarioId::from_number(id)?;
            let params = dynamics.to_params()?;
            let spec = build_scenario(id);
            let result = run_scenario(&spec, &params)?;
            if let Some(out) = &out {
                let trajectory = match method {
                    Some(MethodArg::Mwua) => &result.mwua_trajectory,
                    Some(MethodArg::Replicator) => &result.replicator_trajectory,
                    None => {
                        return Err(Error::input(
                            "--out needs --method to pick which trajectory to write",
                        ))
                    }
                };
                write_csv(trajectory, out)?;
            }
            let doc = ScenarioReportEntry::new(&result);
            emit(gamemanip::report::to_json_string(&doc), report.as_ref())
        }
    }
}
