//! Shared helpers for integration tests: seeded random games/offers and an
//! independent brute-force Nash oracle.
#![allow(dead_code)]

use gamemanip::rational::Rational;
use gamemanip::{ActionProfile, AgentId, BimatrixGame, BindingOffer, Player};
use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let numer = rng.random_range(-20..=20i64);
    let denom = rng.random_range(1..=6i64);
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| random_rational(rng)).collect())
        .collect()
}

/// A well-formed random game, up to 4x4, optionally with one external table.
pub fn random_game(rng: &mut ChaCha8Rng, with_external: bool) -> BimatrixGame {
    let rows = rng.random_range(1..=4usize);
    let cols = rng.random_range(1..=4usize);
    let labels = |prefix: &str, n: usize| -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    };
    let mut game = BimatrixGame::new(
        labels("r", rows),
        labels("c", cols),
        random_matrix(rng, rows, cols),
        random_matrix(rng, rows, cols),
    );
    if with_external {
        game = game.with_external("M1", random_matrix(rng, rows, cols));
    }
    game
}

/// A random binding offer that is valid for the game.
pub fn random_offer(rng: &mut ChaCha8Rng, game: &BimatrixGame) -> BindingOffer {
    let offeree = if rng.random_bool(0.5) { Player::Row } else { Player::Col };
    let offeror = match rng.random_range(0..3) {
        0 => AgentId::from(offeree.other()),
        1 => AgentId::external("M1"),
        _ => AgentId::external("M2"),
    };
    let actions = game.actions(offeree);
    let action = actions[rng.random_range(0..actions.len())].clone();
    let nonneg = |rng: &mut ChaCha8Rng| {
        let r = random_rational(rng);
        if r < Rational::new(BigInt::from(0), BigInt::from(1)) {
            -r
        } else {
            r
        }
    };
    BindingOffer::new(offeror, offeree, nonneg(rng), nonneg(rng), action).expect("valid offer")
}

/// Brute-force pure Nash check: a profile is an equilibrium iff no player
/// has a strictly improving unilateral deviation. Kept deliberately separate
/// from the library's best-response path.
pub fn naive_pure_nash(game: &BimatrixGame) -> Vec<ActionProfile> {
    let (rows, cols) = game.shape();
    let mut out = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let row_value = &game.row_payoffs()[r][c];
            let row_ok = (0..rows).all(|alt| &game.row_payoffs()[alt][c] <= row_value);
            let col_value = &game.col_payoffs()[r][c];
            let col_ok = (0..cols).all(|alt| &game.col_payoffs()[r][alt] <= col_value);
            if row_ok && col_ok {
                out.push(ActionProfile::new(r, c));
            }
        }
    }
    out
}
