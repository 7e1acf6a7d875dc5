//! Exact bimatrix games with external bookkeeping agents.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// One of the two strategic players.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Row,
    Col,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Row => Player::Col,
            Player::Col => Player::Row,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Player::Row => "Row",
            Player::Col => "Col",
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Any agent with a payoff table: a player or an external agent addressed by
/// label (e.g. `M1`). Externals never act; they only collect payoffs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum AgentId {
    Row,
    Col,
    External(String),
}

impl AgentId {
    pub fn external<S: Into<String>>(label: S) -> AgentId {
        AgentId::External(label.into())
    }

    pub fn as_player(&self) -> Option<Player> {
        match self {
            AgentId::Row => Some(Player::Row),
            AgentId::Col => Some(Player::Col),
            AgentId::External(_) => None,
        }
    }

    /// Parses `"Row"`, `"Col"`, or any other non-empty string as an external
    /// agent label.
    pub fn parse(s: &str) -> Result<AgentId> {
        match s {
            "Row" => Ok(AgentId::Row),
            "Col" => Ok(AgentId::Col),
            "" => Err(Error::input("empty agent label")),
            other => Ok(AgentId::External(other.to_string())),
        }
    }
}

impl From<Player> for AgentId {
    fn from(p: Player) -> AgentId {
        match p {
            Player::Row => AgentId::Row,
            Player::Col => AgentId::Col,
        }
    }
}

impl fmt::Display for AgentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentId::Row => f.write_str("Row"),
            AgentId::Col => f.write_str("Col"),
            AgentId::External(label) => f.write_str(label),
        }
    }
}

/// A pure action pair, indices into the game's action lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ActionProfile {
    pub row: usize,
    pub col: usize,
}

impl ActionProfile {
    pub fn new(row: usize, col: usize) -> Self {
        ActionProfile { row, col }
    }
}

/// Payoff matrix stored row-major; `m[i][j]` is the payoff at row action `i`
/// against column action `j`.
pub type Matrix = Vec<Vec<Rational>>;

/// A finite two-player game in strategic form, with optional payoff tables
/// for external agents. Immutable after construction; every contract
/// transformation returns a fresh game.
#[derive(Debug, Clone, PartialEq)]
pub struct BimatrixGame {
    row_actions: Vec<String>,
    col_actions: Vec<String>,
    row_payoffs: Matrix,
    col_payoffs: Matrix,
    externals: Vec<(String, Matrix)>,
}

/// A single invariant violation found by [`BimatrixGame::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DimensionMismatch { table: String, expected: (usize, usize), found: (usize, usize) },
    DuplicateAction { player: Player, label: String },
    EmptyActionLabel { player: Player },
    EmptyAxis { player: Player },
    DuplicateExternal { label: String },
    EmptyExternalLabel,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { table, expected, found } => {
                if found.1 == usize::MAX {
                    write!(f, "table {table} is ragged, expected {}x{}", expected.0, expected.1)
                } else {
                    write!(
                        f,
                        "table {table} is {}x{}, expected {}x{}",
                        found.0, found.1, expected.0, expected.1
                    )
                }
            }
            Violation::DuplicateAction { player, label } => {
                write!(f, "{player} action label {label:?} repeats")
            }
            Violation::EmptyActionLabel { player } => write!(f, "{player} has an empty action label"),
            Violation::EmptyAxis { player } => write!(f, "{player} has no actions"),
            Violation::DuplicateExternal { label } => {
                write!(f, "external agent label {label:?} repeats")
            }
            Violation::EmptyExternalLabel => f.write_str("external agent with empty label"),
        }
    }
}

impl BimatrixGame {
    /// Assembles a game without checking invariants; run [`validate`] or use
    /// [`checked`] when the tables come from outside.
    ///
    /// [`validate`]: BimatrixGame::validate
    /// [`checked`]: BimatrixGame::checked
    pub fn new(
        row_actions: Vec<String>,
        col_actions: Vec<String>,
        row_payoffs: Matrix,
        col_payoffs: Matrix,
    ) -> Self {
        BimatrixGame {
            row_actions,
            col_actions,
            row_payoffs,
            col_payoffs,
            externals: Vec::new(),
        }
    }

    /// Convenience constructor from integer payoff tables.
    pub fn from_ints(
        row_actions: &[&str],
        col_actions: &[&str],
        row_payoffs: &[&[i64]],
        col_payoffs: &[&[i64]],
    ) -> Self {
        let to_matrix = |rows: &[&[i64]]| -> Matrix {
            rows.iter()
                .map(|r| r.iter().map(|&v| crate::rational::rat(v)).collect())
                .collect()
        };
        BimatrixGame::new(
            row_actions.iter().map(|s| s.to_string()).collect(),
            col_actions.iter().map(|s| s.to_string()).collect(),
            to_matrix(row_payoffs),
            to_matrix(col_payoffs),
        )
    }

    /// Adds an external agent's payoff table, consuming and returning the game.
    pub fn with_external<S: Into<String>>(mut self, label: S, payoffs: Matrix) -> Self {
        self.externals.push((label.into(), payoffs));
        self
    }

    /// Validates and returns the game, or the first-class list of violations.
    pub fn checked(self) -> std::result::Result<Self, Vec<Violation>> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(violations)
        }
    }

    /// Reports every invariant violation; an empty report means the game is
    /// well-formed. Pure and idempotent.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let shape = (self.row_actions.len(), self.col_actions.len());
        if shape.0 == 0 {
            out.push(Violation::EmptyAxis { player: Player::Row });
        }
        if shape.1 == 0 {
            out.push(Violation::EmptyAxis { player: Player::Col });
        }
        for (player, labels) in [(Player::Row, &self.row_actions), (Player::Col, &self.col_actions)] {
            let mut seen = std::collections::HashSet::new();
            for label in labels {
                if label.is_empty() {
                    out.push(Violation::EmptyActionLabel { player });
                } else if !seen.insert(label) {
                    out.push(Violation::DuplicateAction { player, label: label.clone() });
                }
            }
        }
        let mut check_table = |name: String, m: &Matrix| {
            let found = (m.len(), m.first().map_or(0, |r| r.len()));
            let rectangular = m.iter().all(|r| r.len() == found.1);
            if found != shape || !rectangular {
                let found = if rectangular { found } else { (m.len(), usize::MAX) };
                out.push(Violation::DimensionMismatch { table: name, expected: shape, found });
            }
        };
        check_table("Row".to_string(), &self.row_payoffs);
        check_table("Col".to_string(), &self.col_payoffs);
        for (label, m) in &self.externals {
            check_table(label.clone(), m);
        }
        let mut seen = std::collections::HashSet::new();
        for (label, _) in &self.externals {
            if label.is_empty() {
                out.push(Violation::EmptyExternalLabel);
            } else if !seen.insert(label) {
                out.push(Violation::DuplicateExternal { label: label.clone() });
            }
        }
        out
    }

    pub fn row_actions(&self) -> &[String] {
        &self.row_actions
    }

    pub fn col_actions(&self) -> &[String] {
        &self.col_actions
    }

    pub fn actions(&self, player: Player) -> &[String] {
        match player {
            Player::Row => &self.row_actions,
            Player::Col => &self.col_actions,
        }
    }

    /// (rows, cols) shape.
    pub fn shape(&self) -> (usize, usize) {
        (self.row_actions.len(), self.col_actions.len())
    }

    pub fn row_payoffs(&self) -> &Matrix {
        &self.row_payoffs
    }

    pub fn col_payoffs(&self) -> &Matrix {
        &self.col_payoffs
    }

    pub fn player_payoffs(&self, player: Player) -> &Matrix {
        match player {
            Player::Row => &self.row_payoffs,
            Player::Col => &self.col_payoffs,
        }
    }

    /// External agents in declaration order.
    pub fn externals(&self) -> &[(String, Matrix)] {
        &self.externals
    }

    pub fn external_labels(&self) -> impl Iterator<Item = &str> {
        self.externals.iter().map(|(l, _)| l.as_str())
    }

    pub fn external_table(&self, label: &str) -> Option<&Matrix> {
        self.externals
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m)
    }

    /// All agents in display order: Row, Col, then externals.
    pub fn agents(&self) -> Vec<AgentId> {
        let mut out = vec![AgentId::Row, AgentId::Col];
        out.extend(self.externals.iter().map(|(l, _)| AgentId::External(l.clone())));
        out
    }

    /// Index of an action label on the given axis.
    pub fn action_index(&self, player: Player, label: &str) -> Result<usize> {
        self.actions(player)
            .iter()
            .position(|a| a == label)
            .ok_or_else(|| Error::input(format!("{player} has no action {label:?}")))
    }

    pub fn profile_in_bounds(&self, profile: ActionProfile) -> bool {
        profile.row < self.row_actions.len() && profile.col < self.col_actions.len()
    }

    /// Exact payoff to `agent` at `profile`.
    pub fn payoff(&self, profile: ActionProfile, agent: &AgentId) -> Result<&Rational> {
        if !self.profile_in_bounds(profile) {
            return Err(Error::input(format!(
                "profile ({}, {}) out of bounds for a {}x{} game",
                profile.row,
                profile.col,
                self.row_actions.len(),
                self.col_actions.len()
            )));
        }
        let table = match agent {
            AgentId::Row => &self.row_payoffs,
            AgentId::Col => &self.col_payoffs,
            AgentId::External(label) => self
                .external_table(label)
                .ok_or_else(|| Error::input(format!("no external agent {label:?}")))?,
        };
        Ok(&table[profile.row][profile.col])
    }

    /// Per-profile sum over every agent's payoff; contract transformations
    /// must preserve this cellwise.
    pub fn total_payoff(&self, profile: ActionProfile) -> Rational {
        let mut sum = self.row_payoffs[profile.row][profile.col].clone()
            + &self.col_payoffs[profile.row][profile.col];
        for (_, m) in &self.externals {
            sum += &m[profile.row][profile.col];
        }
        sum
    }

    /// Iterates all profiles in row-major order.
    pub fn profiles(&self) -> impl Iterator<Item = ActionProfile> + '_ {
        let (rows, cols) = self.shape();
        (0..rows).flat_map(move |r| (0..cols).map(move |c| ActionProfile::new(r, c)))
    }

    /// Returns a game where the selected agent's every payoff `p` becomes
    /// `scale * p + shift`; other tables are untouched.
    pub fn affine_rescale(
        &self,
        agent: &AgentId,
        scale: &Rational,
        shift: &Rational,
    ) -> Result<BimatrixGame> {
        if *scale <= Rational::zero() {
            return Err(Error::input(format!(
                "scale must be positive, got {}",
                format_rational(scale)
            )));
        }
        let mut out = self.clone();
        let table = match agent {
            AgentId::Row => &mut out.row_payoffs,
            AgentId::Col => &mut out.col_payoffs,
            AgentId::External(label) => {
                let found = out.externals.iter_mut().find(|(l, _)| l == label);
                match found {
                    Some((_, m)) => m,
                    None => return Err(Error::input(format!("no external agent {label:?}"))),
                }
            }
        };
        for row in table.iter_mut() {
            for cell in row.iter_mut() {
                *cell = cell.clone() * scale + shift;
            }
        }
        Ok(out)
    }

    /// Applies `delta` to one agent's payoff on every profile where
    /// `condition` holds. Internal building block for contract transforms.
    pub(crate) fn add_where<F: Fn(ActionProfile) -> bool>(
        &mut self,
        agent: &AgentId,
        delta: &Rational,
        condition: F,
    ) -> Result<()> {
        let (rows, cols) = self.shape();
        let table = match agent {
            AgentId::Row => &mut self.row_payoffs,
            AgentId::Col => &mut self.col_payoffs,
            AgentId::External(label) => {
                if self.externals.iter().all(|(l, _)| l != label) {
                    let zeros = vec![vec![Rational::zero(); cols]; rows];
                    self.externals.push((label.clone(), zeros));
                }
                &mut self
                    .externals
                    .iter_mut()
                    .find(|(l, _)| l == label)
                    .expect("just ensured present")
                    .1
            }
        };
        for (r, row) in table.iter_mut().enumerate().take(rows) {
            for (c, cell) in row.iter_mut().enumerate().take(cols) {
                if condition(ActionProfile::new(r, c)) {
                    *cell += delta;
                }
            }
        }
        Ok(())
    }

    /// Ensures an external table exists (all zeros if freshly created).
    pub(crate) fn ensure_external(&mut self, label: &str) {
        if self.externals.iter().all(|(l, _)| l != label) {
            let (rows, cols) = self.shape();
            self.externals
                .push((label.to_string(), vec![vec![Rational::zero(); cols]; rows]));
        }
    }

    /// Role-swapped view: rows become columns. Externals transpose with it.
    pub fn transposed(&self) -> BimatrixGame {
        let (rows, cols) = self.shape();
        let transpose = |m: &Matrix| -> Matrix {
            (0..cols)
                .map(|c| (0..rows).map(|r| m[r][c].clone()).collect())
                .collect()
        };
        BimatrixGame {
            row_actions: self.col_actions.clone(),
            col_actions: self.row_actions.clone(),
            row_payoffs: transpose(&self.col_payoffs),
            col_payoffs: transpose(&self.row_payoffs),
            externals: self
                .externals
                .iter()
                .map(|(l, m)| (l.clone(), transpose(m)))
                .collect(),
        }
    }

    /// Game with two of the given player's actions swapped (labels and the
    /// matching payoff rows/columns in every table).
    pub fn with_actions_swapped(&self, player: Player, a: usize, b: usize) -> BimatrixGame {
        let mut out = self.clone();
        match player {
            Player::Row => {
                out.row_actions.swap(a, b);
                out.row_payoffs.swap(a, b);
                out.col_payoffs.swap(a, b);
                for (_, m) in &mut out.externals {
                    m.swap(a, b);
                }
            }
            Player::Col => {
                out.col_actions.swap(a, b);
                for m in std::iter::once(&mut out.row_payoffs)
                    .chain(std::iter::once(&mut out.col_payoffs))
                    .chain(out.externals.iter_mut().map(|(_, m)| m))
                {
                    for row in m.iter_mut() {
                        row.swap(a, b);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for BimatrixGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, row_label) in self.row_actions.iter().enumerate() {
            write!(f, "{row_label}:")?;
            for c in 0..self.col_actions.len() {
                write!(
                    f,
                    " ({},{}",
                    format_rational(&self.row_payoffs[r][c]),
                    format_rational(&self.col_payoffs[r][c])
                )?;
                for (_, m) in &self.externals {
                    write!(f, ",{}", format_rational(&m[r][c]))?;
                }
                write!(f, ")")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
