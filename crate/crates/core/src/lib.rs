//! Engine for manipulating finite two-player games with binding contracts.
//!
//! A *binding offer* has the shape "either you pay me a fee, or I commit to
//! paying you a reward whenever you play a designated action". Accepting or
//! declining such an offer yields two different payoff tables, so the offer
//! turns a one-shot bimatrix game into a two-stage game. This crate provides:
//!
//! - exact (rational-arithmetic) representation of bimatrix games with any
//!   number of external bookkeeping agents ([`game`]),
//! - contract transformations: offers, counter-offers and second-order offers
//!   between external agents, plus the profitability inequalities that make
//!   them work ([`contracts`]),
//! - exact equilibrium analysis: pure Nash enumeration, strict dominance,
//!   iterated elimination, reduced normal forms and backward induction over
//!   the Accept/Decline stage ([`equilibria`]),
//! - regret-minimizing dynamics: multiplicative weights and replicator
//!   dynamics with convergence diagnostics ([`dynamics`]),
//! - four built-in end-to-end manipulation scenarios ([`scenarios`]).

pub mod contracts;
pub mod csv_io;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod game;
pub mod json;
pub mod rational;
pub mod report;
pub mod scenarios;

pub use contracts::{
    apply_accept, apply_counter_decline, apply_decline, apply_second_order,
    check_counter_conditions, check_primary_conditions, classify_manipulation, offer_stage,
    second_order_stage, BindingOffer, ContingentPayment, CounterConditions, CounterOffer,
    ManipulationClass, Outcome, PrimaryConditions, SecondOrderOffer,
};
pub use dynamics::{
    diagnose_convergence, mwua_run, normalize_for_dynamics, replicator_field, replicator_run,
    ConvergenceVerdict, DynamicsParams, InducedPlay, Initial, Method, MwuaState, NumericGame,
    PlayTarget, Sample, Trajectory, UpdateMode,
};
pub use equilibria::{
    backward_induction_chain, best_responses, iterated_elimination, pure_nash,
    reduced_normal_form, strictly_dominated, subgame_perfect, ChainPath, Decision, Elimination,
    SpePath, TwoStageGame,
};
pub use error::{Error, Result};
pub use game::{ActionProfile, AgentId, BimatrixGame, Player, Violation};
pub use rational::Rational;
pub use scenarios::{
    base_game, build_scenario, run_scenario, Agreement, ScenarioId, ScenarioReport, ScenarioSpec,
};
