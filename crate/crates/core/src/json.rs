//! JSON documents for games and offers.
//!
//! Payoff entries are JSON numbers when integral and `"p/q"` strings
//! otherwise; the `externals` object keeps its document order on both
//! serialization and parsing, so a round trip preserves every field exactly.

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::contracts::{BindingOffer, ContingentPayment, CounterOffer, SecondOrderOffer};
use crate::error::{Error, Result};
use crate::game::{AgentId, BimatrixGame, Matrix, Player};
use crate::rational::{format_rational, parse_rational, rat, Rational};

/// One payoff cell on the wire.
#[derive(Debug, Clone, PartialEq)]
struct RatCell(Rational);

impl Serialize for RatCell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use num_traits::ToPrimitive;
        if self.0.denom() == &num_bigint::BigInt::from(1) {
            if let Some(i) = self.0.numer().to_i64() {
                return serializer.serialize_i64(i);
            }
        }
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatCell {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct CellVisitor;
        impl Visitor<'_> for CellVisitor {
            type Value = RatCell;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<RatCell, E> {
                Ok(RatCell(rat(v)))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<RatCell, E> {
                Ok(RatCell(Rational::from_integer(num_bigint::BigInt::from(v))))
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<RatCell, E> {
                if v.fract() == 0.0 && v.abs() < 2f64.powi(53) {
                    Ok(RatCell(rat(v as i64)))
                } else {
                    Err(E::custom(format!(
                        "non-integer number {v}; write exact values as \"p/q\" strings"
                    )))
                }
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<RatCell, E> {
                parse_rational(v)
                    .map(RatCell)
                    .map_err(|e| E::custom(e.to_string()))
            }
        }
        deserializer.deserialize_any(CellVisitor)
    }
}

/// `externals` object: agent label -> matrix, document order preserved.
#[derive(Debug, Clone, PartialEq, Default)]
struct ExternalsWire(Vec<(String, Vec<Vec<RatCell>>)>);

impl ExternalsWire {
    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Serialize for ExternalsWire {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.0.len()))?;
        for (label, matrix) in &self.0 {
            map.serialize_entry(label, matrix)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for ExternalsWire {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExternalsVisitor;
        impl<'de> Visitor<'de> for ExternalsVisitor {
            type Value = ExternalsWire;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an object mapping agent labels to payoff matrices")
            }

            fn visit_map<A: MapAccess<'de>>(
                self,
                mut access: A,
            ) -> std::result::Result<ExternalsWire, A::Error> {
                let mut entries = Vec::new();
                while let Some((label, matrix)) =
                    access.next_entry::<String, Vec<Vec<RatCell>>>()?
                {
                    entries.push((label, matrix));
                }
                Ok(ExternalsWire(entries))
            }
        }
        deserializer.deserialize_map(ExternalsVisitor)
    }
}

#[derive(Serialize, Deserialize)]
struct GameWire {
    row_actions: Vec<String>,
    col_actions: Vec<String>,
    row_payoffs: Vec<Vec<RatCell>>,
    col_payoffs: Vec<Vec<RatCell>>,
    #[serde(default, skip_serializing_if = "ExternalsWire::is_empty")]
    externals: ExternalsWire,
}

fn wrap_matrix(m: &Matrix) -> Vec<Vec<RatCell>> {
    m.iter()
        .map(|r| r.iter().map(|v| RatCell(v.clone())).collect())
        .collect()
}

fn unwrap_matrix(m: Vec<Vec<RatCell>>) -> Matrix {
    m.into_iter()
        .map(|r| r.into_iter().map(|c| c.0).collect())
        .collect()
}

/// Serializes a game as a pretty-printed JSON document.
pub fn game_to_json(game: &BimatrixGame) -> String {
    let wire = GameWire {
        row_actions: game.row_actions().to_vec(),
        col_actions: game.col_actions().to_vec(),
        row_payoffs: wrap_matrix(game.row_payoffs()),
        col_payoffs: wrap_matrix(game.col_payoffs()),
        externals: ExternalsWire(
            game.externals()
                .iter()
                .map(|(l, m)| (l.clone(), wrap_matrix(m)))
                .collect(),
        ),
    };
    serde_json::to_string_pretty(&wire).expect("game serialization cannot fail")
}

/// Parses and validates a game document.
pub fn game_from_json(text: &str) -> Result<BimatrixGame> {
    let wire: GameWire =
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad game document: {e}")))?;
    let mut game = BimatrixGame::new(
        wire.row_actions,
        wire.col_actions,
        unwrap_matrix(wire.row_payoffs),
        unwrap_matrix(wire.col_payoffs),
    );
    for (label, matrix) in wire.externals.0 {
        game = game.with_external(label, unwrap_matrix(matrix));
    }
    let violations = game.validate();
    if violations.is_empty() {
        Ok(game)
    } else {
        let listed: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        Err(Error::input(format!("invalid game: {}", listed.join("; "))))
    }
}

#[derive(Serialize, Deserialize)]
struct OfferWire {
    offeror: String,
    offeree: String,
    accept_fee: RatCell,
    decline_reward: RatCell,
    contingent_action: String,
}

fn parse_player(s: &str) -> Result<Player> {
    match s {
        "Row" => Ok(Player::Row),
        "Col" => Ok(Player::Col),
        other => Err(Error::input(format!(
            "expected \"Row\" or \"Col\", got {other:?}"
        ))),
    }
}

pub fn offer_to_json(offer: &BindingOffer) -> String {
    let wire = OfferWire {
        offeror: offer.offeror().to_string(),
        offeree: offer.offeree().to_string(),
        accept_fee: RatCell(offer.accept_fee().clone()),
        decline_reward: RatCell(offer.decline_reward().clone()),
        contingent_action: offer.contingent_action().to_string(),
    };
    serde_json::to_string_pretty(&wire).expect("offer serialization cannot fail")
}

pub fn offer_from_json(text: &str) -> Result<BindingOffer> {
    let wire: OfferWire =
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad offer document: {e}")))?;
    BindingOffer::new(
        AgentId::parse(&wire.offeror)?,
        parse_player(&wire.offeree)?,
        wire.accept_fee.0,
        wire.decline_reward.0,
        wire.contingent_action,
    )
}

#[derive(Serialize, Deserialize)]
struct CounterWire {
    proposer: String,
    transfer: RatCell,
    co_player_action: String,
}

pub fn counter_to_json(counter: &CounterOffer) -> String {
    let wire = CounterWire {
        proposer: counter.proposer().to_string(),
        transfer: RatCell(counter.transfer().clone()),
        co_player_action: counter.co_player_action().to_string(),
    };
    serde_json::to_string_pretty(&wire).expect("counter serialization cannot fail")
}

pub fn counter_from_json(text: &str) -> Result<CounterOffer> {
    let wire: CounterWire = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("bad counter-offer document: {e}")))?;
    CounterOffer::new(
        parse_player(&wire.proposer)?,
        wire.transfer.0,
        wire.co_player_action,
    )
}

#[derive(Serialize, Deserialize)]
struct DistortionWire {
    transfer: RatCell,
    co_player_action: String,
}

#[derive(Serialize, Deserialize)]
struct SecondWire {
    offeror: String,
    offeree: String,
    accept_fee: RatCell,
    decline_distortion: DistortionWire,
}

pub fn second_offer_to_json(second: &SecondOrderOffer) -> String {
    let wire = SecondWire {
        offeror: second.offeror().to_string(),
        offeree: second.offeree().to_string(),
        accept_fee: RatCell(second.accept_fee().clone()),
        decline_distortion: DistortionWire {
            transfer: RatCell(second.decline_distortion().amount.clone()),
            co_player_action: second.decline_distortion().action.clone(),
        },
    };
    serde_json::to_string_pretty(&wire).expect("second-order offer serialization cannot fail")
}

pub fn second_offer_from_json(text: &str) -> Result<SecondOrderOffer> {
    let wire: SecondWire = serde_json::from_str(text)
        .map_err(|e| Error::input(format!("bad second-order offer document: {e}")))?;
    SecondOrderOffer::new(
        wire.offeror,
        wire.offeree,
        wire.accept_fee.0,
        ContingentPayment {
            action: wire.decline_distortion.co_player_action,
            amount: wire.decline_distortion.transfer.0,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::scenarios::{base_game, tables};

    #[test]
    fn base_game_document_shape() {
        let text = game_to_json(&base_game());
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["row_payoffs"], serde_json::json!([[4, 9], [5, 10]]));
        assert_eq!(v["col_payoffs"], serde_json::json!([[14, 13], [6, 10]]));
        assert!(v.get("externals").is_none());
    }

    #[test]
    fn round_trip_preserves_everything() {
        let game = tables::s4_decline();
        let parsed = game_from_json(&game_to_json(&game)).unwrap();
        assert_eq!(parsed, game);
    }

    #[test]
    fn externals_keep_document_order() {
        // Deliberately not alphabetical.
        let zeros = vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]];
        let game = base_game()
            .with_external("Z", zeros.clone())
            .with_external("A", zeros);
        let text = game_to_json(&game);
        let parsed = game_from_json(&text).unwrap();
        assert_eq!(parsed, game);
        let labels: Vec<&str> = parsed.external_labels().collect();
        assert_eq!(labels, ["Z", "A"]);
    }

    #[test]
    fn fractional_payoffs_use_strings() {
        let game = base_game()
            .affine_rescale(&AgentId::Row, &ratio(1, 10), &rat(0))
            .unwrap();
        let text = game_to_json(&game);
        assert!(text.contains("\"2/5\""));
        assert_eq!(game_from_json(&text).unwrap(), game);
    }

    #[test]
    fn invalid_documents_are_rejected() {
        assert!(game_from_json("{").is_err());
        assert!(game_from_json("{\"row_actions\":[]}").is_err());
        // Fractional floats are rejected rather than approximated.
        let text = r#"{
            "row_actions": ["T","B"], "col_actions": ["L","R"],
            "row_payoffs": [[0.5, 9],[5, 10]],
            "col_payoffs": [[14, 13],[6, 10]]
        }"#;
        assert!(game_from_json(text).is_err());
        // Mismatched shapes fail validation.
        let text = r#"{
            "row_actions": ["T","B"], "col_actions": ["L","R"],
            "row_payoffs": [[4, 9],[5, 10]],
            "col_payoffs": [[14, 13, 1],[6, 10, 1]]
        }"#;
        assert!(game_from_json(text).is_err());
    }

    #[test]
    fn offer_documents_round_trip() {
        let offer = BindingOffer::new(
            AgentId::external("M1"),
            Player::Row,
            rat(3),
            ratio(5, 2),
            "T",
        )
        .unwrap();
        let parsed = offer_from_json(&offer_to_json(&offer)).unwrap();
        assert_eq!(parsed, offer);

        let counter = CounterOffer::new(Player::Row, rat(2), "R").unwrap();
        assert_eq!(counter_from_json(&counter_to_json(&counter)).unwrap(), counter);

        let second = SecondOrderOffer::new(
            "M2",
            "M1",
            rat(2),
            ContingentPayment { action: "R".into(), amount: rat(2) },
        )
        .unwrap();
        assert_eq!(
            second_offer_from_json(&second_offer_to_json(&second)).unwrap(),
            second
        );
    }

    #[test]
    fn offer_rejects_bad_players() {
        let text = r#"{"offeror":"Col","offeree":"Diagonal","accept_fee":3,
                       "decline_reward":2,"contingent_action":"T"}"#;
        assert!(offer_from_json(text).is_err());
        let text = r#"{"offeror":"Row","offeree":"Row","accept_fee":3,
                       "decline_reward":2,"contingent_action":"T"}"#;
        assert!(offer_from_json(text).is_err());
    }
}
