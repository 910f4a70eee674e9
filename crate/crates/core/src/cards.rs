//! Core vocabulary: card values, deck states, hand evaluation, dealer
//! policies, payout schedules, and variant configuration.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

/// A card value class: 1 = ace, 2..=9 face value, 10 = the ten class
/// (ten, jack, queen, king merged — all tables distinguish only values).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CardValue(u8);

impl CardValue {
    pub const ACE: CardValue = CardValue(1);
    pub const TEN: CardValue = CardValue(10);

    pub fn new(value: u8) -> Result<CardValue> {
        if (1..=10).contains(&value) {
            Ok(CardValue(value))
        } else {
            Err(Error::InvalidCardValue(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = CardValue> {
        (1..=10).map(CardValue)
    }

    /// Cards of this value in a single 52-card deck (16 for the ten class).
    pub fn per_deck(self) -> u64 {
        if self.0 == 10 {
            16
        } else {
            4
        }
    }

    /// Distinct 4-card ranks sharing this value (4 for the ten class).
    pub fn rank_count(self) -> u8 {
        if self.0 == 10 {
            4
        } else {
            1
        }
    }
}

impl fmt::Display for CardValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            1 => write!(f, "A"),
            v => write!(f, "{v}"),
        }
    }
}

/// Deck sampling semantics.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DeckMode {
    /// A shoe of `n` physical decks; draws deplete it.
    FiniteDecks(u32),
    /// One deck with replacement: every draw sees the fresh-deck
    /// distribution (4/52 per non-ten value, 16/52 for the ten class).
    WithReplacement,
}

impl DeckMode {
    pub fn validate(self) -> Result<Self> {
        match self {
            DeckMode::FiniteDecks(0) => Err(Error::ZeroDecks),
            other => Ok(other),
        }
    }
}

impl fmt::Display for DeckMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeckMode::FiniteDecks(n) => write!(f, "{n}-deck"),
            DeckMode::WithReplacement => write!(f, "with-replacement"),
        }
    }
}

/// Multiset of remaining cards by value class. Immutable: removals
/// produce a new state, so enumeration branches never alias.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeckState {
    mode: DeckMode,
    counts: [u64; 10],
}

impl DeckState {
    pub fn fresh(mode: DeckMode) -> Result<DeckState> {
        mode.validate()?;
        let mut counts = [0u64; 10];
        for v in CardValue::all() {
            let n = match mode {
                DeckMode::FiniteDecks(n) => n as u64,
                DeckMode::WithReplacement => 1,
            };
            counts[(v.value() - 1) as usize] = v.per_deck() * n;
        }
        Ok(DeckState { mode, counts })
    }

    pub fn mode(&self) -> DeckMode {
        self.mode
    }

    pub fn count(&self, v: CardValue) -> u64 {
        self.counts[(v.value() - 1) as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Remove one card. A no-op in `WithReplacement` mode; errors rather
    /// than underflowing in finite mode.
    pub fn remove(&self, card: CardValue) -> Result<DeckState> {
        match self.mode {
            DeckMode::WithReplacement => Ok(self.clone()),
            DeckMode::FiniteDecks(_) => {
                let idx = (card.value() - 1) as usize;
                if self.counts[idx] == 0 {
                    return Err(Error::RemovalUnderflow(card));
                }
                let mut next = self.clone();
                next.counts[idx] -= 1;
                Ok(next)
            }
        }
    }

    pub fn remove_all(&self, cards: &[CardValue]) -> Result<DeckState> {
        cards.iter().try_fold(self.clone(), |d, &c| d.remove(c))
    }

    /// Exact draw distribution over the remaining cards. Zero-count
    /// values are omitted; the probabilities sum to exactly 1.
    pub fn draw_distribution(&self) -> Vec<(CardValue, Rational)> {
        match self.mode {
            DeckMode::WithReplacement => CardValue::all()
                .map(|v| (v, rat(v.per_deck() as i64, 52)))
                .collect(),
            DeckMode::FiniteDecks(_) => {
                let total = self.total() as i64;
                CardValue::all()
                    .filter(|&v| self.count(v) > 0)
                    .map(|v| (v, rat(self.count(v) as i64, total)))
                    .collect()
            }
        }
    }
}

/// Draw distribution after removing `removed` from a fresh `deck`.
pub fn draw_distribution(
    deck: &DeckState,
    removed: &[CardValue],
) -> Result<Vec<(CardValue, Rational)>> {
    Ok(deck.remove_all(removed)?.draw_distribution())
}

/// An evaluated hand: best-treatment total, softness, natural marker.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HandState {
    total: u8,
    soft: bool,
    natural: bool,
}

impl HandState {
    pub fn hard(total: u8) -> Result<HandState> {
        if (4..=20).contains(&total) {
            Ok(HandState { total, soft: false, natural: false })
        } else {
            Err(Error::InvalidHand(format!("hard {total} is not a two-card state")))
        }
    }

    pub fn soft(total: u8) -> Result<HandState> {
        if (12..=20).contains(&total) {
            Ok(HandState { total, soft: true, natural: false })
        } else {
            Err(Error::InvalidHand(format!("soft {total} is not a non-natural state")))
        }
    }

    pub fn total(self) -> u8 {
        self.total
    }

    pub fn is_soft(self) -> bool {
        self.soft
    }

    pub fn is_natural(self) -> bool {
        self.natural
    }
}

impl fmt::Display for HandState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.natural {
            write!(f, "natural")
        } else if self.soft {
            write!(f, "soft {}", self.total)
        } else {
            write!(f, "hard {}", self.total)
        }
    }
}

/// Result of adding a card to a live hand.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HitOutcome {
    Hand(HandState),
    Bust,
}

/// Add one card with ace demotion: a soft hand exceeding 21 converts its
/// ace from 11 to 1 before busting. A hit result is never natural.
pub fn add_card(hand: HandState, card: CardValue) -> HitOutcome {
    let mut total = hand.total;
    let mut soft = hand.soft;
    if card == CardValue::ACE && total + 11 <= 21 {
        total += 11;
        soft = true;
    } else {
        total += card.value();
    }
    if total > 21 && soft {
        total -= 10;
        soft = false;
    }
    if total > 21 {
        HitOutcome::Bust
    } else {
        HitOutcome::Hand(HandState { total, soft, natural: false })
    }
}

/// The four layout categories of the 55 distinct two-card layouts.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LayoutCategory {
    DistinctNoTen,
    PairNoTen,
    DistinctOneTen,
    BothTen,
}

/// An unordered two-card layout; permutation multiplicity is tracked by
/// the weight computations, not the layout itself.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HandLayout {
    lo: CardValue,
    hi: CardValue,
}

impl HandLayout {
    pub fn new(a: CardValue, b: CardValue) -> HandLayout {
        if a <= b {
            HandLayout { lo: a, hi: b }
        } else {
            HandLayout { lo: b, hi: a }
        }
    }

    pub fn cards(self) -> [CardValue; 2] {
        [self.lo, self.hi]
    }

    pub fn category(self) -> LayoutCategory {
        match (self.lo == self.hi, self.hi == CardValue::TEN) {
            (false, false) => LayoutCategory::DistinctNoTen,
            (true, false) => LayoutCategory::PairNoTen,
            (false, true) => LayoutCategory::DistinctOneTen,
            (true, true) => LayoutCategory::BothTen,
        }
    }

    /// All 55 distinct layouts.
    pub fn all() -> Vec<HandLayout> {
        let mut out = Vec::with_capacity(55);
        for a in CardValue::all() {
            for b in CardValue::all().filter(|&b| b >= a) {
                out.push(HandLayout { lo: a, hi: b });
            }
        }
        out
    }

    /// Ordered two-card draws of this layout from `deck`.
    pub fn permutations(self, deck: &DeckState) -> u64 {
        let a = deck.count(self.lo);
        if self.lo == self.hi {
            match deck.mode() {
                DeckMode::FiniteDecks(_) => a * a.saturating_sub(1),
                DeckMode::WithReplacement => a * a,
            }
        } else {
            2 * a * deck.count(self.hi)
        }
    }

    /// Whether the layout can be dealt from `deck`.
    pub fn feasible(self, deck: &DeckState) -> bool {
        self.permutations(deck) > 0
    }

    pub fn evaluate(self) -> HandState {
        evaluate_layout(self)
    }
}

impl fmt::Display for HandLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// Evaluate a two-card layout with best ace treatment; the natural flag
/// is set exactly for the (ace, ten) layout.
pub fn evaluate_layout(layout: HandLayout) -> HandState {
    let [a, b] = layout.cards();
    let mut total = a.value() + b.value();
    let soft = a == CardValue::ACE || b == CardValue::ACE;
    if soft {
        // Two-card totals with an ace never exceed 21 when the ace is 11.
        total += 10;
    }
    HandState { total, soft, natural: soft && total == 21 }
}

/// When the dealer must take their single hit.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum DealerPolicy {
    /// Hit below `stand_at`; at exactly `stand_at` hit soft hands iff
    /// `hit_soft_at_threshold` (H17 vs S17 and friends).
    Threshold { stand_at: u8, hit_soft_at_threshold: bool },
    AlwaysHit,
    AlwaysStand,
}

impl DealerPolicy {
    pub const H17: DealerPolicy = DealerPolicy::Threshold { stand_at: 17, hit_soft_at_threshold: true };
    pub const S17: DealerPolicy = DealerPolicy::Threshold { stand_at: 17, hit_soft_at_threshold: false };

    pub fn threshold(stand_at: u8, hit_soft_at_threshold: bool) -> Result<DealerPolicy> {
        if (15..=18).contains(&stand_at) {
            Ok(DealerPolicy::Threshold { stand_at, hit_soft_at_threshold })
        } else {
            Err(Error::Parse(format!("dealer threshold {stand_at} outside 15..=18")))
        }
    }

    pub fn must_hit(self, hand: HandState) -> bool {
        match self {
            DealerPolicy::AlwaysHit => true,
            DealerPolicy::AlwaysStand => false,
            DealerPolicy::Threshold { stand_at, hit_soft_at_threshold } => {
                hand.total() < stand_at
                    || (hand.total() == stand_at && hand.is_soft() && hit_soft_at_threshold)
            }
        }
    }
}

/// Shorthand wrapper so `dealer_must_hit(policy, hand)` reads like prose.
pub fn dealer_must_hit(policy: DealerPolicy, hand: HandState) -> bool {
    policy.must_hit(hand)
}

impl fmt::Display for DealerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DealerPolicy::AlwaysHit => write!(f, "always-hit"),
            DealerPolicy::AlwaysStand => write!(f, "always-stand"),
            DealerPolicy::Threshold { stand_at, hit_soft_at_threshold } => {
                write!(f, "{}{stand_at}", if *hit_soft_at_threshold { "H" } else { "S" })
            }
        }
    }
}

/// Per-unit-bet payouts. Win +1, loss -1, push 0; a natural pays the
/// multiplier instead of +1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PayoutSchedule {
    natural_multiplier: Rational,
}

impl PayoutSchedule {
    pub fn three_to_two() -> PayoutSchedule {
        PayoutSchedule { natural_multiplier: rat(3, 2) }
    }

    pub fn six_to_five() -> PayoutSchedule {
        PayoutSchedule { natural_multiplier: rat(6, 5) }
    }

    pub fn natural_multiplier(&self) -> &Rational {
        &self.natural_multiplier
    }
}

/// Which part of the dealer's starting hand the player sees.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Visibility {
    TwoUp,
    OneUp,
    NoUp,
}

impl fmt::Display for Visibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Visibility::TwoUp => write!(f, "two-up"),
            Visibility::OneUp => write!(f, "one-up"),
            Visibility::NoUp => write!(f, "no-up"),
        }
    }
}

/// A full game variant: visibility x deck model x dealer policy x payout.
///
/// `peek_on_natural` controls whether, with hidden dealer cards, the
/// strategy EVs condition the unseen-card distribution on "dealer checked,
/// no natural".
#[derive(Clone, PartialEq, Debug)]
pub struct VariantConfig {
    pub visibility: Visibility,
    pub deck: DeckMode,
    pub dealer_policy: DealerPolicy,
    pub payout: PayoutSchedule,
    pub peek_on_natural: bool,
}

impl Default for VariantConfig {
    fn default() -> Self {
        VariantConfig {
            visibility: Visibility::TwoUp,
            deck: DeckMode::FiniteDecks(1),
            dealer_policy: DealerPolicy::H17,
            payout: PayoutSchedule::three_to_two(),
            peek_on_natural: true,
        }
    }
}

impl VariantConfig {
    pub fn with_visibility(mut self, visibility: Visibility) -> Self {
        self.visibility = visibility;
        self
    }

    pub fn with_deck(mut self, deck: DeckMode) -> Self {
        self.deck = deck;
        self
    }

    pub fn with_policy(mut self, policy: DealerPolicy) -> Self {
        self.dealer_policy = policy;
        self
    }

    pub fn with_payout(mut self, payout: PayoutSchedule) -> Self {
        self.payout = payout;
        self
    }
}
