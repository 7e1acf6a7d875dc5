//! Binding offers, counter-offers and second-order offers, the game
//! transformations they induce, and the inequalities under which they pay.
//!
//! Every transformation is a pure conditional transfer: per profile, the sum
//! of all agents' payoffs (players plus externals) is preserved. Offers made
//! by a player move value inside that player's strategic table; offers made
//! by an external agent touch only its bookkeeping table, so the players'
//! equilibrium structure is unchanged by who the offeror is.

use num_traits::Zero;

use crate::equilibria::{pure_nash, subgame_perfect, Decision, TwoStageGame};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, AgentId, BimatrixGame, Player};
use crate::rational::{format_rational, Rational};

/// "Either you pay me `accept_fee`, or I give you `decline_reward` whenever
/// you play `contingent_action`."
#[derive(Debug, Clone, PartialEq)]
pub struct BindingOffer {
    offeror: AgentId,
    offeree: Player,
    accept_fee: Rational,
    decline_reward: Rational,
    contingent_action: String,
}

impl BindingOffer {
    pub fn new(
        offeror: AgentId,
        offeree: Player,
        accept_fee: Rational,
        decline_reward: Rational,
        contingent_action: impl Into<String>,
    ) -> Result<BindingOffer> {
        if offeror.as_player() == Some(offeree) {
            return Err(Error::input("offeror and offeree must differ"));
        }
        if accept_fee < Rational::zero() || decline_reward < Rational::zero() {
            return Err(Error::input("fees must be nonnegative"));
        }
        Ok(BindingOffer {
            offeror,
            offeree,
            accept_fee,
            decline_reward,
            contingent_action: contingent_action.into(),
        })
    }

    pub fn offeror(&self) -> &AgentId {
        &self.offeror
    }

    pub fn offeree(&self) -> Player {
        self.offeree
    }

    pub fn accept_fee(&self) -> &Rational {
        &self.accept_fee
    }

    pub fn decline_reward(&self) -> &Rational {
        &self.decline_reward
    }

    pub fn contingent_action(&self) -> &str {
        &self.contingent_action
    }
}

/// The offeree's reply: "I shall decline, and give you `transfer` whenever
/// you play `co_player_action`."
#[derive(Debug, Clone, PartialEq)]
pub struct CounterOffer {
    proposer: Player,
    transfer: Rational,
    co_player_action: String,
}

impl CounterOffer {
    pub fn new(
        proposer: Player,
        transfer: Rational,
        co_player_action: impl Into<String>,
    ) -> Result<CounterOffer> {
        if transfer < Rational::zero() {
            return Err(Error::input("transfer must be nonnegative"));
        }
        Ok(CounterOffer {
            proposer,
            transfer,
            co_player_action: co_player_action.into(),
        })
    }

    pub fn proposer(&self) -> Player {
        self.proposer
    }

    pub fn transfer(&self) -> &Rational {
        &self.transfer
    }

    pub fn co_player_action(&self) -> &str {
        &self.co_player_action
    }
}

/// A conditional payment to one player: `amount` whenever they play `action`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingentPayment {
    pub action: String,
    pub amount: Rational,
}

/// An offer from one external manipulator to another: "either you pay me
/// `accept_fee`, or once your own offer is declined I pay your offeree's
/// co-player `decline_distortion`."
#[derive(Debug, Clone, PartialEq)]
pub struct SecondOrderOffer {
    offeror: String,
    offeree: String,
    accept_fee: Rational,
    decline_distortion: ContingentPayment,
}

impl SecondOrderOffer {
    pub fn new(
        offeror: impl Into<String>,
        offeree: impl Into<String>,
        accept_fee: Rational,
        decline_distortion: ContingentPayment,
    ) -> Result<SecondOrderOffer> {
        let offeror = offeror.into();
        let offeree = offeree.into();
        if offeror == offeree {
            return Err(Error::input("offeror and offeree must differ"));
        }
        if offeror.is_empty() || offeree.is_empty() {
            return Err(Error::input("external agent labels must be non-empty"));
        }
        if accept_fee < Rational::zero() || decline_distortion.amount < Rational::zero() {
            return Err(Error::input("fees must be nonnegative"));
        }
        Ok(SecondOrderOffer {
            offeror,
            offeree,
            accept_fee,
            decline_distortion,
        })
    }

    pub fn offeror(&self) -> &str {
        &self.offeror
    }

    pub fn offeree(&self) -> &str {
        &self.offeree
    }

    pub fn accept_fee(&self) -> &Rational {
        &self.accept_fee
    }

    pub fn decline_distortion(&self) -> &ContingentPayment {
        &self.decline_distortion
    }
}

/// Who is asked to pay, who would receive the contingent reward, and whether
/// the targeted player ends up better or worse off than in the base game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManipulationClass {
    pub t1: Player,
    pub t2: Player,
    pub w: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Win,
    Lose,
    Neutral,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Win => "win",
            Outcome::Lose => "lose",
            Outcome::Neutral => "neutral",
        }
    }
}

fn offeree_plays(offeree: Player, action: usize) -> impl Fn(ActionProfile) -> bool {
    move |p| match offeree {
        Player::Row => p.row == action,
        Player::Col => p.col == action,
    }
}

/// The game played when the offeree accepts: the fee moves unconditionally
/// from the offeree to the offeror on every profile. An external offeror's
/// table is created (all zeros) when absent.
pub fn apply_accept(base: &BimatrixGame, offer: &BindingOffer) -> Result<BimatrixGame> {
    // Resolve the label early so a bad offer fails even with a zero fee.
    base.action_index(offer.offeree, &offer.contingent_action)?;
    let mut out = base.clone();
    let offeree: AgentId = offer.offeree.into();
    out.add_where(&offeree, &-offer.accept_fee.clone(), |_| true)?;
    out.add_where(&offer.offeror, &offer.accept_fee, |_| true)?;
    Ok(out)
}

/// The game played when the offeree declines: on every profile where the
/// offeree plays the contingent action, the reward moves from the offeror to
/// the offeree. With an external offeror this leaves the players' strategic
/// tables distorted on the offeree side only.
pub fn apply_decline(base: &BimatrixGame, offer: &BindingOffer) -> Result<BimatrixGame> {
    let action = base.action_index(offer.offeree, &offer.contingent_action)?;
    let mut out = base.clone();
    if let AgentId::External(label) = &offer.offeror {
        out.ensure_external(label);
    }
    let offeree: AgentId = offer.offeree.into();
    let hit = offeree_plays(offer.offeree, action);
    out.add_where(&offeree, &offer.decline_reward, &hit)?;
    out.add_where(&offer.offeror, &-offer.decline_reward.clone(), &hit)?;
    Ok(out)
}

/// Decline game under the offeree's counter-offer: on top of
/// [`apply_decline`], the proposer pays the co-player `transfer` on every
/// profile where the co-player plays `co_player_action`.
pub fn apply_counter_decline(
    base: &BimatrixGame,
    offer: &BindingOffer,
    counter: &CounterOffer,
) -> Result<BimatrixGame> {
    if counter.proposer != offer.offeree {
        return Err(Error::input(format!(
            "counter-offer proposer {} must be the original offeree {}",
            counter.proposer, offer.offeree
        )));
    }
    let co_player = counter.proposer.other();
    let action = base.action_index(co_player, &counter.co_player_action)?;
    let mut out = apply_decline(base, offer)?;
    let hit = offeree_plays(co_player, action);
    out.add_where(&counter.proposer.into(), &-counter.transfer.clone(), &hit)?;
    out.add_where(&co_player.into(), &counter.transfer, &hit)?;
    Ok(out)
}

/// Both subgames of the first offer under the second-order offer.
///
/// If the first manipulator accepts, it pays the second one the fee on every
/// profile of both subgames and no distortion happens. If it declines, the
/// second manipulator's threat binds in the decline subgame only: the
/// co-player of the first offer receives the distortion payment, funded by
/// the second manipulator; the accept subgame carries no distortion.
pub fn apply_second_order(
    base: &BimatrixGame,
    first: &BindingOffer,
    second: &SecondOrderOffer,
    m1_accepts: bool,
) -> Result<(BimatrixGame, BimatrixGame)> {
    let m1 = match first.offeror() {
        AgentId::External(label) => label.clone(),
        other => {
            return Err(Error::input(format!(
                "first offeror must be an external agent, got {other}"
            )))
        }
    };
    if m1 != second.offeree {
        return Err(Error::input(format!(
            "second-order offeree {:?} is not the first offeror {m1:?}",
            second.offeree
        )));
    }
    let mut accept_game = apply_accept(base, first)?;
    let mut decline_game = apply_decline(base, first)?;
    let m1_agent = AgentId::external(&m1);
    let m2_agent = AgentId::external(&second.offeror);
    if m1_accepts {
        for game in [&mut accept_game, &mut decline_game] {
            game.add_where(&m1_agent, &-second.accept_fee.clone(), |_| true)?;
            game.add_where(&m2_agent, &second.accept_fee, |_| true)?;
        }
    } else {
        // M2's table exists in both branches so they stay comparable.
        accept_game.ensure_external(&second.offeror);
        let co_player = first.offeree.other();
        let action = base.action_index(co_player, &second.decline_distortion.action)?;
        let hit = offeree_plays(co_player, action);
        decline_game.add_where(&co_player.into(), &second.decline_distortion.amount, &hit)?;
        decline_game.add_where(&m2_agent, &-second.decline_distortion.amount.clone(), &hit)?;
    }
    Ok((accept_game, decline_game))
}

/// Truth values of the four inequalities that make a primary offer work,
/// evaluated on the canonical orientation (offer to Row, contingent on the
/// first row action).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimaryConditions {
    /// Declining makes the contingent action tempting against the base
    /// equilibrium column, where it was not before:
    /// `a12 + c2 > a22 > a12`.
    pub decline_tempts: bool,
    /// Paying the fee and keeping the base equilibrium beats the decline
    /// equilibrium: `a22 - c1 > a11 + c2`.
    pub accept_preferred: bool,
    /// The co-player answers the contingent action with its first action:
    /// `b11 > b12`.
    pub co_player_answers_first: bool,
    /// The reward lifts the contingent action over the alternative against
    /// the co-player's first action: `a11 + c2 >= a21`.
    pub reward_covers_first_column: bool,
}

impl PrimaryConditions {
    pub fn all(&self) -> bool {
        self.decline_tempts
            && self.accept_preferred
            && self.co_player_answers_first
            && self.reward_covers_first_column
    }
}

/// Truth values of the two extra inequalities a counter-offer needs:
/// the transfer flips the co-player's reply (`b12 < b11 < b12 + d2`) and the
/// flipped column still beats the decline equilibrium for the offeree
/// (`a11 + c2 < a12 - d2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterConditions {
    pub transfer_flips_co_player: bool,
    pub flipped_column_preferred: bool,
}

impl CounterConditions {
    pub fn all(&self) -> bool {
        self.transfer_flips_co_player && self.flipped_column_preferred
    }
}

/// Reorients a 2x2 game so the offer targets Row with the first row action
/// contingent. Offers to Col transpose the game; a contingent second action
/// swaps the offeree's actions.
fn canonical_orientation(base: &BimatrixGame, offer: &BindingOffer) -> Result<BimatrixGame> {
    if base.shape() != (2, 2) {
        return Err(Error::input(format!(
            "condition checks need a 2x2 game, got {}x{}",
            base.shape().0,
            base.shape().1
        )));
    }
    let oriented = match offer.offeree {
        Player::Row => base.clone(),
        Player::Col => base.transposed(),
    };
    let x = oriented.action_index(Player::Row, &offer.contingent_action)?;
    Ok(match x {
        0 => oriented,
        _ => oriented.with_actions_swapped(Player::Row, 0, 1),
    })
}

/// Evaluates the four primary-offer inequalities for a 2x2 base game.
pub fn check_primary_conditions(
    base: &BimatrixGame,
    offer: &BindingOffer,
) -> Result<PrimaryConditions> {
    let g = canonical_orientation(base, offer)?;
    let a = g.row_payoffs();
    let b = g.col_payoffs();
    let c1 = &offer.accept_fee;
    let c2 = &offer.decline_reward;
    let a11 = &a[0][0];
    let a12 = &a[0][1];
    let a21 = &a[1][0];
    let a22 = &a[1][1];
    Ok(PrimaryConditions {
        decline_tempts: &(a12 + c2) > a22 && a22 > a12,
        accept_preferred: (a22 - c1) > (a11 + c2),
        co_player_answers_first: b[0][0] > b[0][1],
        reward_covers_first_column: &(a11 + c2) >= a21,
    })
}

/// Evaluates the two counter-offer inequalities for a 2x2 base game. The
/// counter must target the co-player's second action in the canonical
/// orientation.
pub fn check_counter_conditions(
    base: &BimatrixGame,
    offer: &BindingOffer,
    counter: &CounterOffer,
) -> Result<CounterConditions> {
    if counter.proposer != offer.offeree {
        return Err(Error::input(
            "counter-offer proposer must be the original offeree",
        ));
    }
    let g = canonical_orientation(base, offer)?;
    let co_index = g.action_index(Player::Col, &counter.co_player_action)?;
    if co_index != 1 {
        return Err(Error::input(
            "counter-offer must target the co-player's second action in canonical orientation",
        ));
    }
    let a = g.row_payoffs();
    let b = g.col_payoffs();
    let c2 = &offer.decline_reward;
    let d2 = &counter.transfer;
    Ok(CounterConditions {
        transfer_flips_co_player: b[0][1] < b[0][0] && b[0][0] < (&b[0][1] + d2),
        flipped_column_preferred: (&a[0][0] + c2) < (&a[0][1] - d2),
    })
}

/// Classifies a manipulation: `t1` is the player asked to pay, `t2` the
/// contingent-reward recipient, and `w` compares the targeted player's
/// backward-induction payoff against its base-game Nash payoff.
pub fn classify_manipulation(
    base: &BimatrixGame,
    offer: &BindingOffer,
) -> Result<ManipulationClass> {
    let base_nash = pure_nash(base);
    let base_profile = match base_nash.as_slice() {
        [only] => *only,
        _ => {
            return Err(Error::unsupported(
                format!(
                    "base game has {} pure Nash equilibria, need exactly one",
                    base_nash.len()
                ),
                base_nash,
            ))
        }
    };
    let t1: AgentId = offer.offeree.into();
    let baseline = base.payoff(base_profile, &t1)?.clone();
    let stage = TwoStageGame::new(
        apply_accept(base, offer)?,
        apply_decline(base, offer)?,
        offer.offeree,
    )?;
    let spe = subgame_perfect(&stage)?;
    let achieved = spe
        .payoff_of(&t1)
        .cloned()
        .expect("offeree always has a payoff");
    let w = match achieved.cmp(&baseline) {
        std::cmp::Ordering::Less => Outcome::Lose,
        std::cmp::Ordering::Greater => Outcome::Win,
        std::cmp::Ordering::Equal => Outcome::Neutral,
    };
    Ok(ManipulationClass {
        t1: offer.offeree,
        t2: offer.offeree,
        w,
    })
}

/// Builds the Accept/Decline stage a binding offer induces on a base game,
/// with an optional counter-offer folded into the decline branch.
pub fn offer_stage(
    base: &BimatrixGame,
    offer: &BindingOffer,
    counter: Option<&CounterOffer>,
) -> Result<TwoStageGame> {
    let accept = apply_accept(base, offer)?;
    let decline = match counter {
        Some(c) => apply_counter_decline(base, offer, c)?,
        None => apply_decline(base, offer)?,
    };
    TwoStageGame::new(accept, decline, offer.offeree())
}

/// Second-order stage: which branch pair the first manipulator's decision
/// selects, solved by [`crate::equilibria::backward_induction_chain`].
pub fn second_order_stage(
    base: &BimatrixGame,
    first: &BindingOffer,
    second: &SecondOrderOffer,
    m1_accepts: bool,
) -> Result<TwoStageGame> {
    let (accept, decline) = apply_second_order(base, first, second, m1_accepts)?;
    TwoStageGame::new(accept, decline, first.offeree())
}

/// Displayable name of a decision pair, used by reports.
pub fn decision_label(decision: Decision) -> &'static str {
    decision.as_str()
}

impl std::fmt::Display for PrimaryConditions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "decline_tempts={} accept_preferred={} co_player_answers_first={} reward_covers_first_column={}",
            self.decline_tempts,
            self.accept_preferred,
            self.co_player_answers_first,
            self.reward_covers_first_column
        )
    }
}

impl std::fmt::Display for BindingOffer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} to {}: pay {} or receive {} per {}",
            self.offeror,
            self.offeree,
            format_rational(&self.accept_fee),
            format_rational(&self.decline_reward),
            self.contingent_action
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::scenarios::{base_game, tables};

    fn col_offer(c1: i64, c2: i64) -> BindingOffer {
        BindingOffer::new(AgentId::Col, Player::Row, rat(c1), rat(c2), "T").unwrap()
    }

    fn m1_offer(c1: i64, c2: i64) -> BindingOffer {
        BindingOffer::new(AgentId::external("M1"), Player::Row, rat(c1), rat(c2), "T").unwrap()
    }

    #[test]
    fn offer_construction_rules() {
        assert!(BindingOffer::new(AgentId::Row, Player::Row, rat(1), rat(1), "T").is_err());
        assert!(BindingOffer::new(AgentId::Col, Player::Row, rat(-1), rat(1), "T").is_err());
    }

    #[test]
    fn accept_reproduces_player_to_player_table() {
        let got = apply_accept(&base_game(), &col_offer(3, 2)).unwrap();
        assert_eq!(got, tables::s1_accept());
    }

    #[test]
    fn accept_with_zero_fee_is_identity_on_players() {
        let base = base_game();
        assert_eq!(apply_accept(&base, &col_offer(0, 2)).unwrap(), base);
        // External offeror: a zero-fee accept still materializes the
        // bookkeeping table, as all zeros.
        let got = apply_accept(&base, &m1_offer(0, 2)).unwrap();
        assert_eq!(got.row_payoffs(), base.row_payoffs());
        assert_eq!(got.col_payoffs(), base.col_payoffs());
        assert_eq!(
            got.external_table("M1").unwrap(),
            &vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]]
        );
    }

    #[test]
    fn accept_reproduces_first_manipulator_table() {
        let got = apply_accept(&base_game(), &m1_offer(3, 2)).unwrap();
        assert_eq!(got, tables::s2_accept());
    }

    #[test]
    fn decline_reproduces_player_to_player_table() {
        let got = apply_decline(&base_game(), &col_offer(3, 2)).unwrap();
        assert_eq!(got, tables::s1_decline());
    }

    #[test]
    fn decline_with_zero_reward_is_identity() {
        let base = base_game();
        assert_eq!(apply_decline(&base, &col_offer(3, 0)).unwrap(), base);
    }

    #[test]
    fn decline_reproduces_first_manipulator_table() {
        let got = apply_decline(&base_game(), &m1_offer(3, 2)).unwrap();
        assert_eq!(got, tables::s2_decline());
    }

    #[test]
    fn unknown_contingent_action_is_rejected() {
        let offer = BindingOffer::new(AgentId::Col, Player::Row, rat(3), rat(2), "Q").unwrap();
        assert!(apply_accept(&base_game(), &offer).is_err());
        assert!(apply_decline(&base_game(), &offer).is_err());
    }

    #[test]
    fn counter_decline_reproduces_counter_offer_table() {
        let counter = CounterOffer::new(Player::Row, rat(2), "R").unwrap();
        let got = apply_counter_decline(&base_game(), &m1_offer(3, 2), &counter).unwrap();
        assert_eq!(got, tables::s3_decline());
    }

    #[test]
    fn counter_with_zero_transfer_matches_decline() {
        let counter = CounterOffer::new(Player::Row, rat(0), "R").unwrap();
        let offer = m1_offer(3, 2);
        assert_eq!(
            apply_counter_decline(&base_game(), &offer, &counter).unwrap(),
            apply_decline(&base_game(), &offer).unwrap()
        );
    }

    #[test]
    fn counter_on_left_column() {
        let counter = CounterOffer::new(Player::Row, rat(2), "L").unwrap();
        let got = apply_counter_decline(&base_game(), &m1_offer(3, 2), &counter).unwrap();
        let tl = ActionProfile::new(0, 0);
        let tr = ActionProfile::new(0, 1);
        assert_eq!(got.payoff(tl, &AgentId::Row).unwrap(), &rat(4));
        assert_eq!(got.payoff(tl, &AgentId::Col).unwrap(), &rat(16));
        assert_eq!(got.payoff(tl, &AgentId::external("M1")).unwrap(), &rat(-2));
        assert_eq!(got.payoff(tr, &AgentId::Row).unwrap(), &rat(11));
        assert_eq!(got.payoff(tr, &AgentId::Col).unwrap(), &rat(13));
        assert_eq!(got.payoff(tr, &AgentId::external("M1")).unwrap(), &rat(-2));
    }

    #[test]
    fn counter_proposer_must_match_offeree() {
        let counter = CounterOffer::new(Player::Col, rat(2), "T").unwrap();
        assert!(apply_counter_decline(&base_game(), &m1_offer(3, 2), &counter).is_err());
    }

    fn m2_offer(fee: i64, distortion: i64) -> SecondOrderOffer {
        SecondOrderOffer::new(
            "M2",
            "M1",
            rat(fee),
            ContingentPayment { action: "R".into(), amount: rat(distortion) },
        )
        .unwrap()
    }

    #[test]
    fn second_order_accept_branch() {
        let (accept, _) = apply_second_order(&base_game(), &m1_offer(3, 2), &m2_offer(2, 2), true)
            .unwrap();
        assert_eq!(accept, tables::s4_accept());
    }

    #[test]
    fn second_order_decline_branch() {
        let (accept, decline) =
            apply_second_order(&base_game(), &m1_offer(3, 2), &m2_offer(2, 2), false).unwrap();
        assert_eq!(decline, tables::s4_decline());
        // The accept branch of the declined offer carries no distortion.
        assert_eq!(accept.row_payoffs(), tables::s2_accept().row_payoffs());
        assert_eq!(
            accept.external_table("M2").unwrap(),
            &vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]]
        );
    }

    #[test]
    fn neutral_second_order_offer() {
        let (accept, decline) =
            apply_second_order(&base_game(), &m1_offer(3, 2), &m2_offer(0, 0), false).unwrap();
        let zeros = vec![vec![rat(0), rat(0)], vec![rat(0), rat(0)]];
        assert_eq!(accept.external_table("M2").unwrap(), &zeros);
        assert_eq!(decline.external_table("M2").unwrap(), &zeros);
        let s2a = tables::s2_accept();
        let s2d = tables::s2_decline();
        assert_eq!(accept.row_payoffs(), s2a.row_payoffs());
        assert_eq!(accept.col_payoffs(), s2a.col_payoffs());
        assert_eq!(accept.external_table("M1"), s2a.external_table("M1"));
        assert_eq!(decline.row_payoffs(), s2d.row_payoffs());
        assert_eq!(decline.external_table("M1"), s2d.external_table("M1"));
    }

    #[test]
    fn second_order_agent_mismatch() {
        let second = SecondOrderOffer::new(
            "M2",
            "M7",
            rat(2),
            ContingentPayment { action: "R".into(), amount: rat(2) },
        )
        .unwrap();
        assert!(apply_second_order(&base_game(), &m1_offer(3, 2), &second, true).is_err());
        assert!(apply_second_order(&base_game(), &col_offer(3, 2), &m2_offer(2, 2), true).is_err());
    }

    #[test]
    fn primary_conditions_hold_for_standard_fees() {
        let got = check_primary_conditions(&base_game(), &col_offer(3, 2)).unwrap();
        assert!(got.all(), "{got}");
    }

    #[test]
    fn oversized_reward_breaks_accept_preference() {
        let got = check_primary_conditions(&base_game(), &col_offer(3, 10)).unwrap();
        assert!(got.decline_tempts);
        assert!(!got.accept_preferred);
        assert!(got.co_player_answers_first);
        assert!(got.reward_covers_first_column);
    }

    #[test]
    fn zero_fees_break_temptation() {
        let got = check_primary_conditions(&base_game(), &col_offer(0, 0)).unwrap();
        assert!(!got.decline_tempts);
        assert!(got.accept_preferred);
        assert!(got.co_player_answers_first);
        // With no reward the contingent action stays strictly worse against
        // the first column (4 < 5).
        assert!(!got.reward_covers_first_column);
    }

    #[test]
    fn conditions_reject_non_2x2() {
        let g = BimatrixGame::from_ints(
            &["a", "b", "c"],
            &["x", "y"],
            &[&[1, 2], &[3, 4], &[5, 6]],
            &[&[1, 2], &[3, 4], &[5, 6]],
        );
        assert!(check_primary_conditions(&g, &col_offer(1, 1)).is_err());
    }

    #[test]
    fn conditions_are_orientation_invariant() {
        let canonical = check_primary_conditions(&base_game(), &col_offer(3, 2)).unwrap();
        // Same offer stated against the transposed game, targeting Col.
        let transposed = base_game().transposed();
        let offer = BindingOffer::new(AgentId::Row, Player::Col, rat(3), rat(2), "T").unwrap();
        assert_eq!(
            check_primary_conditions(&transposed, &offer).unwrap(),
            canonical
        );
        // Same offer with the action axis flipped, targeting the second row.
        let flipped = base_game().with_actions_swapped(Player::Row, 0, 1);
        let offer = col_offer(3, 2);
        assert_eq!(check_primary_conditions(&flipped, &offer).unwrap(), canonical);
    }

    #[test]
    fn counter_conditions_hold_for_standard_transfer() {
        let counter = CounterOffer::new(Player::Row, rat(2), "R").unwrap();
        let got = check_counter_conditions(&base_game(), &m1_offer(3, 2), &counter).unwrap();
        assert!(got.transfer_flips_co_player);
        assert!(got.flipped_column_preferred);
    }

    #[test]
    fn small_transfer_fails_to_flip() {
        let counter = CounterOffer::new(Player::Row, rat(1), "R").unwrap();
        let got = check_counter_conditions(&base_game(), &m1_offer(3, 2), &counter).unwrap();
        assert!(!got.transfer_flips_co_player);
        assert!(got.flipped_column_preferred);
    }

    #[test]
    fn large_transfer_stops_paying() {
        let counter = CounterOffer::new(Player::Row, rat(3), "R").unwrap();
        let got = check_counter_conditions(&base_game(), &m1_offer(3, 2), &counter).unwrap();
        assert!(got.transfer_flips_co_player);
        assert!(!got.flipped_column_preferred);
    }

    #[test]
    fn classify_standard_offer_as_losing() {
        let got = classify_manipulation(&base_game(), &m1_offer(3, 2)).unwrap();
        assert_eq!(
            got,
            ManipulationClass { t1: Player::Row, t2: Player::Row, w: Outcome::Lose }
        );
    }

    #[test]
    fn classify_zero_fee_as_neutral() {
        let got = classify_manipulation(&base_game(), &m1_offer(0, 2)).unwrap();
        assert_eq!(got.w, Outcome::Neutral);
    }

    #[test]
    fn classify_cheap_fee_still_loses() {
        let got = classify_manipulation(&base_game(), &m1_offer(2, 2)).unwrap();
        assert_eq!(got.w, Outcome::Lose);
    }

    #[test]
    fn classify_generous_reward_as_win() {
        // A free offer with a large reward flips the decline game in the
        // offeree's favor: declining earns 14 > 10.
        let got = classify_manipulation(&base_game(), &m1_offer(0, 10)).unwrap();
        assert_eq!(got.w, Outcome::Win);
    }

    #[test]
    fn classify_rejects_multi_nash_base() {
        let coord = BimatrixGame::from_ints(
            &["a", "b"],
            &["x", "y"],
            &[&[1, 0], &[0, 1]],
            &[&[1, 0], &[0, 1]],
        );
        let offer = BindingOffer::new(AgentId::external("M1"), Player::Row, rat(1), rat(1), "a")
            .unwrap();
        assert!(matches!(
            classify_manipulation(&coord, &offer),
            Err(crate::error::Error::UnsupportedStructure { .. })
        ));
    }
}
