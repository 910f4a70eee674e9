//! Stage 1: with both hand layouts fully known, exact (win, tie, loss)
//! probabilities and EVs for stand and for hit.
//!
//! Probabilities are computed by direct enumeration over the deck state;
//! the coefficient path exists to express the same quantities as rational
//! functions of the number of decks and their with-replacement limits.

use crate::cards::{
    add_card, CardValue, DeckMode, DeckState, DealerPolicy, HandLayout, HandState, HitOutcome,
};
use crate::error::Result;
use crate::rational::{int, rat, Rational};
use num_traits::One;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Outcome {
    Win,
    Tie,
    Loss,
}

/// Exact (win, tie, loss) probabilities summing to 1.
#[derive(Clone, PartialEq, Debug)]
pub struct OutcomeTriple {
    pub win: Rational,
    pub tie: Rational,
    pub loss: Rational,
}

impl OutcomeTriple {
    pub fn zero() -> OutcomeTriple {
        OutcomeTriple { win: int(0), tie: int(0), loss: int(0) }
    }

    pub fn certain(outcome: Outcome) -> OutcomeTriple {
        let mut t = OutcomeTriple::zero();
        *t.component_mut(outcome) = int(1);
        t
    }

    pub fn component_mut(&mut self, outcome: Outcome) -> &mut Rational {
        match outcome {
            Outcome::Win => &mut self.win,
            Outcome::Tie => &mut self.tie,
            Outcome::Loss => &mut self.loss,
        }
    }

    pub fn add_scaled(&mut self, other: &OutcomeTriple, weight: &Rational) {
        self.win += weight * &other.win;
        self.tie += weight * &other.tie;
        self.loss += weight * &other.loss;
    }

    /// EV of a unit bet: win - loss (natural multipliers live in stage 3).
    pub fn ev(&self) -> Rational {
        &self.win - &self.loss
    }

    pub fn sum(&self) -> Rational {
        &self.win + &self.tie + &self.loss
    }

    pub fn is_normalized(&self) -> bool {
        self.sum().is_one()
    }
}

fn compare_totals(player: u8, dealer: u8) -> Outcome {
    match player.cmp(&dealer) {
        std::cmp::Ordering::Greater => Outcome::Win,
        std::cmp::Ordering::Equal => Outcome::Tie,
        std::cmp::Ordering::Less => Outcome::Loss,
    }
}

/// Outcome distribution when the player stands on `player` against the
/// dealer's known layout. `deck` must already reflect all dealt cards.
pub fn resolve_stand(
    player: HandState,
    dealer_layout: HandLayout,
    deck: &DeckState,
    policy: DealerPolicy,
) -> Result<OutcomeTriple> {
    let dealer = dealer_layout.evaluate();
    debug_assert!(!player.is_natural() && !dealer.is_natural(), "naturals are resolved upstream");
    if !policy.must_hit(dealer) {
        return Ok(OutcomeTriple::certain(compare_totals(player.total(), dealer.total())));
    }
    let mut triple = OutcomeTriple::zero();
    for (card, p) in deck.draw_distribution() {
        let outcome = match add_card(dealer, card) {
            HitOutcome::Bust => Outcome::Win,
            HitOutcome::Hand(h) => compare_totals(player.total(), h.total()),
        };
        *triple.component_mut(outcome) += p;
    }
    Ok(triple)
}

/// Outcome distribution when the player hits once. A player bust loses
/// immediately; the dealer never plays.
pub fn resolve_hit(
    player_layout: HandLayout,
    dealer_layout: HandLayout,
    deck: &DeckState,
    policy: DealerPolicy,
) -> Result<OutcomeTriple> {
    let player = player_layout.evaluate();
    let mut triple = OutcomeTriple::zero();
    for (card, p) in deck.draw_distribution() {
        match add_card(player, card) {
            HitOutcome::Bust => triple.loss += p,
            HitOutcome::Hand(h) => {
                let after_hit = deck.remove(card)?;
                let sub = resolve_stand(h, dealer_layout, &after_hit, policy)?;
                triple.add_scaled(&sub, &p);
            }
        }
    }
    Ok(triple)
}

/// Stand and hit triples with their EVs for one layout pair.
#[derive(Clone, PartialEq, Debug)]
pub struct Stage1Result {
    pub stand: OutcomeTriple,
    pub hit: OutcomeTriple,
    pub ev_stand: Rational,
    pub ev_hit: Rational,
}

/// Evaluate one fully-known deal. `deck` is the shoe *before* any cards
/// are dealt; the four dealt cards are removed here.
pub fn stage1_evs(
    player_layout: HandLayout,
    dealer_layout: HandLayout,
    deck: &DeckState,
    policy: DealerPolicy,
) -> Result<Stage1Result> {
    let [p1, p2] = player_layout.cards();
    let [d1, d2] = dealer_layout.cards();
    let live = deck.remove_all(&[p1, p2, d1, d2])?;
    stage1_evs_dealt(player_layout, dealer_layout, &live, policy)
}

/// As `stage1_evs`, but `deck` already reflects the four dealt cards.
pub fn stage1_evs_dealt(
    player_layout: HandLayout,
    dealer_layout: HandLayout,
    deck: &DeckState,
    policy: DealerPolicy,
) -> Result<Stage1Result> {
    let stand = resolve_stand(player_layout.evaluate(), dealer_layout, deck, policy)?;
    let hit = resolve_hit(player_layout, dealer_layout, deck, policy)?;
    let ev_stand = stand.ev();
    let ev_hit = hit.ev();
    Ok(Stage1Result { stand, hit, ev_stand, ev_hit })
}

/// Per-outcome rank counts: how many of the 13 ranks lead to each result.
#[derive(Clone, Copy, PartialEq, Eq, Default, Debug)]
pub struct OutcomeCounts {
    pub win: u8,
    pub tie: u8,
    pub loss: u8,
}

impl OutcomeCounts {
    fn bump(&mut self, outcome: Outcome, by: u8) {
        match outcome {
            Outcome::Win => self.win += by,
            Outcome::Tie => self.tie += by,
            Outcome::Loss => self.loss += by,
        }
    }

    pub fn total(self) -> u8 {
        self.win + self.tie + self.loss
    }
}

/// Coefficients for one hit-card rank: the cards of this rank already
/// removed, plus rank/removal counts for the dealer's response.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct HitRankCoefficients {
    pub removed_of_rank: u8,
    pub ranks: OutcomeCounts,
    pub removed: OutcomeCounts,
}

/// Closed-form stage-1 coefficients for the two up-card variant: rank
/// counts (a, b, c) and removed-card counts (w, t, l) for stand, and the
/// per-hit-rank analogues. The ten class is expanded to its four ranks
/// with the dealt ten-class cards spread one per rank.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stage1Coefficients {
    pub stand_ranks: OutcomeCounts,
    pub stand_removed: OutcomeCounts,
    pub hit: [HitRankCoefficients; 13],
}

const RANKS: usize = 13;

fn rank_value(rank: usize) -> CardValue {
    let v = if rank < 9 { rank as u8 + 1 } else { 10 };
    CardValue::new(v).expect("rank value in range")
}

/// Cards removed per rank: each dealt card occupies its own rank, so a
/// dealt ten-class card takes the next free ten rank.
fn removed_per_rank(cards: &[CardValue]) -> [u8; RANKS] {
    let mut removed = [0u8; RANKS];
    for &card in cards {
        if card == CardValue::TEN {
            let slot = (9..RANKS).find(|&r| removed[r] < 4).expect("at most 16 tens dealt");
            removed[slot] += 1;
        } else {
            removed[(card.value() - 1) as usize] += 1;
        }
    }
    removed
}

fn dealer_response(
    player_total: u8,
    dealer: HandState,
    policy: DealerPolicy,
    removed: &[u8; RANKS],
    cards_out: u8,
) -> (OutcomeCounts, OutcomeCounts) {
    let mut ranks = OutcomeCounts::default();
    let mut taken = OutcomeCounts::default();
    if !policy.must_hit(dealer) {
        let outcome = compare_totals(player_total, dealer.total());
        ranks.bump(outcome, RANKS as u8);
        taken.bump(outcome, cards_out);
        return (ranks, taken);
    }
    for s in 0..RANKS {
        let outcome = match add_card(dealer, rank_value(s)) {
            HitOutcome::Bust => Outcome::Win,
            HitOutcome::Hand(h) => compare_totals(player_total, h.total()),
        };
        ranks.bump(outcome, 1);
        taken.bump(outcome, removed[s]);
    }
    (ranks, taken)
}

/// Extract the rational-function coefficients for a two up-card deal
/// under the default H17 dealer rule.
pub fn extract_stage1_coefficients(
    player_layout: HandLayout,
    dealer_layout: HandLayout,
) -> Stage1Coefficients {
    extract_stage1_coefficients_for(player_layout, dealer_layout, DealerPolicy::H17)
}

/// As `extract_stage1_coefficients` with an explicit dealer policy.
pub fn extract_stage1_coefficients_for(
    player_layout: HandLayout,
    dealer_layout: HandLayout,
    policy: DealerPolicy,
) -> Stage1Coefficients {
    let player = player_layout.evaluate();
    let dealer = dealer_layout.evaluate();
    let [p1, p2] = player_layout.cards();
    let [d1, d2] = dealer_layout.cards();
    let removed = removed_per_rank(&[p1, p2, d1, d2]);
    extract_with_policy(player, dealer, &removed, policy)
}

fn extract_with_policy(
    player: HandState,
    dealer: HandState,
    removed: &[u8; RANKS],
    policy: DealerPolicy,
) -> Stage1Coefficients {
    let (stand_ranks, stand_removed) = dealer_response(player.total(), dealer, policy, removed, 4);

    let hit = std::array::from_fn(|r| {
        let hit_card = rank_value(r);
        let mut removed_after = *removed;
        removed_after[r] += 1;
        let coeffs = match add_card(player, hit_card) {
            HitOutcome::Bust => {
                let mut ranks = OutcomeCounts::default();
                let mut taken = OutcomeCounts::default();
                ranks.bump(Outcome::Loss, RANKS as u8);
                taken.bump(Outcome::Loss, 5);
                (ranks, taken)
            }
            HitOutcome::Hand(h) => dealer_response(h.total(), dealer, policy, &removed_after, 5),
        };
        HitRankCoefficients { removed_of_rank: removed[r], ranks: coeffs.0, removed: coeffs.1 }
    });

    Stage1Coefficients { stand_ranks, stand_removed, hit }
}

fn stand_component(ranks: u8, taken: u8, mode: DeckMode) -> Result<Rational> {
    match mode.validate()? {
        DeckMode::FiniteDecks(n) => {
            let n = n as i64;
            Ok(rat(ranks as i64 * 4 * n - taken as i64, 52 * n - 4))
        }
        DeckMode::WithReplacement => Ok(rat(ranks as i64 * 4, 52)),
    }
}

/// Evaluate the coefficient form at a finite deck count or at the
/// with-replacement limit.
pub fn evaluate_coefficients_at(
    coeffs: &Stage1Coefficients,
    mode: DeckMode,
) -> Result<Stage1Result> {
    mode.validate()?;
    let stand = OutcomeTriple {
        win: stand_component(coeffs.stand_ranks.win, coeffs.stand_removed.win, mode)?,
        tie: stand_component(coeffs.stand_ranks.tie, coeffs.stand_removed.tie, mode)?,
        loss: stand_component(coeffs.stand_ranks.loss, coeffs.stand_removed.loss, mode)?,
    };

    let mut hit = OutcomeTriple::zero();
    for hc in &coeffs.hit {
        let draw = match mode {
            DeckMode::FiniteDecks(n) => {
                let n = n as i64;
                rat(4 * n - hc.removed_of_rank as i64, 52 * n - 4)
            }
            DeckMode::WithReplacement => rat(4, 52),
        };
        let component = |ranks: u8, taken: u8| -> Rational {
            match mode {
                DeckMode::FiniteDecks(n) => {
                    let n = n as i64;
                    rat(ranks as i64 * 4 * n - taken as i64, 52 * n - 5)
                }
                DeckMode::WithReplacement => rat(ranks as i64 * 4, 52),
            }
        };
        hit.win += &draw * component(hc.ranks.win, hc.removed.win);
        hit.tie += &draw * component(hc.ranks.tie, hc.removed.tie);
        hit.loss += &draw * component(hc.ranks.loss, hc.removed.loss);
    }

    let ev_stand = stand.ev();
    let ev_hit = hit.ev();
    Ok(Stage1Result { stand, hit, ev_stand, ev_hit })
}

/// Feasibility of a layout pair in a fresh shoe (the pair deal removes
/// up to four cards of one value).
pub fn pair_feasible(player: HandLayout, dealer: HandLayout, deck: &DeckState) -> bool {
    let [p1, p2] = player.cards();
    let [d1, d2] = dealer.cards();
    deck.remove_all(&[p1, p2, d1, d2]).is_ok()
}

/// Convenience used by tests and the verification report: exact equality
/// of enumeration and coefficient form for a layout pair at `mode`.
pub fn coefficient_form_matches(
    player: HandLayout,
    dealer: HandLayout,
    mode: DeckMode,
    policy: DealerPolicy,
) -> Result<bool> {
    let coeffs = extract_stage1_coefficients_for(player, dealer, policy);
    let by_formula = evaluate_coefficients_at(&coeffs, mode)?;
    let deck = DeckState::fresh(mode)?;
    let direct = stage1_evs(player, dealer, &deck, policy)?;
    Ok(by_formula == direct)
}
