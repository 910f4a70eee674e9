//! Stage 2: aggregate stage-1 results over every deal consistent with
//! what the player can observe, producing conditional EVs, the basic
//! strategy decision, and the asterisk flag for cells whose per-layout
//! optimum disagrees with the aggregate optimum.

use std::collections::BTreeMap;
use std::fmt;

use crate::cards::{
    CardValue, DeckMode, DeckState, HandLayout, HandState, VariantConfig, Visibility,
};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};
use crate::stage1::{stage1_evs_dealt, OutcomeTriple};

/// What the player knows about the dealer's starting hand.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DealerInfo {
    BothCards(HandState),
    UpCard(CardValue),
    Nothing,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ObservableState {
    pub player: HandState,
    pub dealer_info: DealerInfo,
}

impl fmt::Display for ObservableState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vs ", self.player)?;
        match self.dealer_info {
            DealerInfo::BothCards(d) => write!(f, "{d}"),
            DealerInfo::UpCard(u) => write!(f, "up-card {}", up_card_column(u)),
            DealerInfo::Nothing => write!(f, "unknown dealer hand"),
        }
    }
}

/// One deal consistent with an observable state, with its exact
/// conditional probability.
#[derive(Clone, Debug)]
pub struct LayoutWeight {
    pub player_layout: HandLayout,
    pub dealer_layout: HandLayout,
    pub weight: Rational,
}

/// The consistent deals for an observable state. `weights` are
/// normalized to sum exactly to 1; `mass` is the probability of the
/// observable (and of the applied natural filter) under the full
/// four-card deal measure.
#[derive(Clone, Debug)]
pub struct WeightedLayouts {
    pub entries: Vec<LayoutWeight>,
    pub mass: Rational,
}

/// All distinct layouts evaluating to exactly this hand state.
pub fn layouts_for(hand: HandState) -> Vec<HandLayout> {
    HandLayout::all().into_iter().filter(|l| l.evaluate() == hand).collect()
}

/// Layouts for a hand value with their permutation counts in `deck`.
pub fn enumerate_layouts(hand: HandState, deck: &DeckState) -> Vec<(HandLayout, u64)> {
    layouts_for(hand).into_iter().map(|l| (l, l.permutations(deck))).collect()
}

/// Ordered four-card deal denominator for a fresh deck.
fn deal_denominator(deck: &DeckState) -> i64 {
    match deck.mode() {
        DeckMode::FiniteDecks(_) => {
            let t = deck.total() as i64;
            t * (t - 1) * (t - 2) * (t - 3)
        }
        DeckMode::WithReplacement => 2704 * 2704,
    }
}

/// Exact conditional deal weights for an observable state. `deck` must
/// be fresh. With `exclude_dealer_naturals`, deals where the hidden
/// dealer hand is a natural are dropped before renormalizing (the
/// "dealer checked, no natural" conditioning).
pub fn layout_weights(
    observable: &ObservableState,
    deck: &DeckState,
    exclude_dealer_naturals: bool,
) -> Result<WeightedLayouts> {
    let mut raw: Vec<(HandLayout, HandLayout, i64)> = Vec::new();

    for player_layout in layouts_for(observable.player) {
        let pe = player_layout.permutations(deck) as i64;
        if pe == 0 {
            continue;
        }
        let [p1, p2] = player_layout.cards();
        let deck1 = deck.remove(p1)?.remove(p2)?;

        match observable.dealer_info {
            DealerInfo::BothCards(dealer) => {
                for dealer_layout in layouts_for(dealer) {
                    let pf = dealer_layout.permutations(&deck1) as i64;
                    if pf > 0 {
                        raw.push((player_layout, dealer_layout, pe * pf));
                    }
                }
            }
            DealerInfo::UpCard(up) => {
                let cu = deck1.count(up) as i64;
                if cu == 0 {
                    continue;
                }
                let deck2 = deck1.remove(up)?;
                for down in CardValue::all() {
                    let cd = deck2.count(down) as i64;
                    if cd == 0 {
                        continue;
                    }
                    let dealer_layout = HandLayout::new(up, down);
                    if exclude_dealer_naturals && dealer_layout.evaluate().is_natural() {
                        continue;
                    }
                    raw.push((player_layout, dealer_layout, pe * cu * cd));
                }
            }
            DealerInfo::Nothing => {
                for dealer_layout in HandLayout::all() {
                    if exclude_dealer_naturals && dealer_layout.evaluate().is_natural() {
                        continue;
                    }
                    let pf = dealer_layout.permutations(&deck1) as i64;
                    if pf > 0 {
                        raw.push((player_layout, dealer_layout, pe * pf));
                    }
                }
            }
        }
    }

    let total: i64 = raw.iter().map(|(_, _, w)| w).sum();
    if total == 0 {
        return Err(Error::EmptyObservable(observable.to_string()));
    }
    let entries = raw
        .into_iter()
        .map(|(player_layout, dealer_layout, w)| LayoutWeight {
            player_layout,
            dealer_layout,
            weight: rat(w, total),
        })
        .collect();
    let mass = rat(total, deal_denominator(deck));
    Ok(WeightedLayouts { entries, mass })
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Decision {
    Hit,
    Stand,
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Hit => write!(f, "H"),
            Decision::Stand => write!(f, "S"),
        }
    }
}

/// A solved strategy cell.
#[derive(Clone, Debug)]
pub struct CellResult {
    pub observable: ObservableState,
    pub ev_hit: Rational,
    pub ev_stand: Rational,
    pub decision: Decision,
    /// The optimum depends on detail the player can see but the cell
    /// key hides: their own specific layout, plus the dealer's specific
    /// layout when both dealer cards are shown.
    pub asterisk: bool,
    pub hit_triple: OutcomeTriple,
    pub stand_triple: OutcomeTriple,
    /// Probability of this observable (dealer naturals excluded) under
    /// the unconditional deal measure; consumed by stage 3.
    pub mass: Rational,
}

impl CellResult {
    pub fn triple(&self, decision: Decision) -> &OutcomeTriple {
        match decision {
            Decision::Hit => &self.hit_triple,
            Decision::Stand => &self.stand_triple,
        }
    }

    pub fn optimal_ev(&self) -> &Rational {
        match self.decision {
            Decision::Hit => &self.ev_hit,
            Decision::Stand => &self.ev_stand,
        }
    }
}

fn strict_preference(ev_hit: &Rational, ev_stand: &Rational) -> Option<Decision> {
    match ev_hit.cmp(ev_stand) {
        std::cmp::Ordering::Greater => Some(Decision::Hit),
        std::cmp::Ordering::Less => Some(Decision::Stand),
        std::cmp::Ordering::Equal => None,
    }
}

/// Solve one strategy cell: weighted stage-1 aggregation, decision by
/// EV comparison (stand on an exact tie), asterisk by scanning every
/// refinement of the cell the player could actually observe.
pub fn cell_evaluate(observable: &ObservableState, config: &VariantConfig) -> Result<CellResult> {
    let deck = DeckState::fresh(config.deck)?;
    let weights = layout_weights(&observable_checked(observable)?, &deck, config.peek_on_natural)?;

    // The player always sees their own layout; the dealer layout is an
    // observable refinement only when both dealer cards are shown.
    let refine_dealer = matches!(observable.dealer_info, DealerInfo::BothCards(_));
    let mut hit_triple = OutcomeTriple::zero();
    let mut stand_triple = OutcomeTriple::zero();
    let mut groups: BTreeMap<(HandLayout, Option<HandLayout>), (Rational, Rational)> =
        BTreeMap::new();
    for entry in &weights.entries {
        let [p1, p2] = entry.player_layout.cards();
        let [d1, d2] = entry.dealer_layout.cards();
        let live = deck.remove_all(&[p1, p2, d1, d2])?;
        let s1 = stage1_evs_dealt(entry.player_layout, entry.dealer_layout, &live, config.dealer_policy)?;
        hit_triple.add_scaled(&s1.hit, &entry.weight);
        stand_triple.add_scaled(&s1.stand, &entry.weight);
        let key = (entry.player_layout, refine_dealer.then_some(entry.dealer_layout));
        let slot = groups.entry(key).or_insert_with(|| (int(0), int(0)));
        slot.0 += &entry.weight * &s1.ev_hit;
        slot.1 += &entry.weight * &s1.ev_stand;
    }

    let ev_hit = hit_triple.ev();
    let ev_stand = stand_triple.ev();
    let decision = if ev_hit > ev_stand { Decision::Hit } else { Decision::Stand };
    let asterisk = groups.values().any(|(group_hit, group_stand)| {
        strict_preference(group_hit, group_stand).is_some_and(|pref| pref != decision)
    });

    Ok(CellResult {
        observable: *observable,
        ev_hit,
        ev_stand,
        decision,
        asterisk,
        hit_triple,
        stand_triple,
        mass: weights.mass,
    })
}

fn observable_checked(observable: &ObservableState) -> Result<ObservableState> {
    if observable.player.is_natural() {
        return Err(Error::InvalidHand("naturals make no decision".into()));
    }
    if let DealerInfo::BothCards(d) = observable.dealer_info {
        if d.is_natural() {
            return Err(Error::InvalidHand("dealer natural is resolved before play".into()));
        }
    }
    Ok(*observable)
}

/// Player-side strategy key: hard 4-20, soft 12-20.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PlayerKey {
    pub soft: bool,
    pub total: u8,
}

impl From<HandState> for PlayerKey {
    fn from(h: HandState) -> PlayerKey {
        PlayerKey { soft: h.is_soft(), total: h.total() }
    }
}

impl fmt::Display for PlayerKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.soft { "soft" } else { "hard" }, self.total)
    }
}

/// Dealer-side strategy key. The one up-card ace is reported as
/// column 11, matching how the up-card tables are laid out.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum InfoKey {
    Both { soft: bool, total: u8 },
    Up(u8),
    Unseen,
}

impl fmt::Display for InfoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoKey::Both { soft, total } => {
                write!(f, "{} {}", if *soft { "soft" } else { "hard" }, total)
            }
            InfoKey::Up(col) => write!(f, "{col}"),
            InfoKey::Unseen => write!(f, "-"),
        }
    }
}

/// Column value for an up-card: ace is 11, others face value.
pub fn up_card_column(up: CardValue) -> u8 {
    if up == CardValue::ACE {
        11
    } else {
        up.value()
    }
}

pub type CellKey = (PlayerKey, InfoKey);

pub fn cell_key(observable: &ObservableState) -> CellKey {
    let player = PlayerKey::from(observable.player);
    let info = match observable.dealer_info {
        DealerInfo::BothCards(d) => InfoKey::Both { soft: d.is_soft(), total: d.total() },
        DealerInfo::UpCard(u) => InfoKey::Up(up_card_column(u)),
        DealerInfo::Nothing => InfoKey::Unseen,
    };
    (player, info)
}

/// Every non-natural two-card player state, in table order.
pub fn player_states() -> Vec<HandState> {
    let mut out = Vec::new();
    for t in 4..=20 {
        out.push(HandState::hard(t).expect("valid hard total"));
    }
    for t in 12..=20 {
        out.push(HandState::soft(t).expect("valid soft total"));
    }
    out
}

fn dealer_infos(visibility: Visibility) -> Vec<DealerInfo> {
    match visibility {
        Visibility::TwoUp => player_states().into_iter().map(DealerInfo::BothCards).collect(),
        Visibility::OneUp => {
            let mut ups: Vec<CardValue> = CardValue::all().collect();
            // column order 2..=10 then ace-as-11
            ups.rotate_left(1);
            ups.into_iter().map(DealerInfo::UpCard).collect()
        }
        Visibility::NoUp => vec![DealerInfo::Nothing],
    }
}

/// The complete basic-strategy table for a variant.
#[derive(Clone, Debug)]
pub struct StrategyTable {
    config: VariantConfig,
    cells: BTreeMap<CellKey, CellResult>,
}

impl StrategyTable {
    pub fn config(&self) -> &VariantConfig {
        &self.config
    }

    pub fn get(&self, key: &CellKey) -> Option<&CellResult> {
        self.cells.get(key)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellKey, &CellResult)> {
        self.cells.iter()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn decision(&self, observable: &ObservableState) -> Result<Decision> {
        self.cells
            .get(&cell_key(observable))
            .map(|c| c.decision)
            .ok_or_else(|| Error::EmptyObservable(observable.to_string()))
    }

    /// Decision-level equality (EVs and asterisks ignored).
    pub fn decisions_match(&self, other: &StrategyTable) -> bool {
        self.diff_decisions(other).is_empty() && self.cells.len() == other.cells.len()
    }

    /// Cells whose decisions differ, with (self, other) decisions.
    pub fn diff_decisions(&self, other: &StrategyTable) -> Vec<(CellKey, Decision, Decision)> {
        self.cells
            .iter()
            .filter_map(|(key, cell)| {
                other.get(key).and_then(|o| {
                    (o.decision != cell.decision).then_some((*key, cell.decision, o.decision))
                })
            })
            .collect()
    }
}

/// Solve every reachable cell of the variant. Cells are independent;
/// output ordering is canonical regardless of evaluation order.
pub fn build_strategy_table(config: &VariantConfig) -> Result<StrategyTable> {
    let mut cells = BTreeMap::new();
    let infos = dealer_infos(config.visibility);
    for player in player_states() {
        for &dealer_info in &infos {
            let observable = ObservableState { player, dealer_info };
            let cell = cell_evaluate(&observable, config)?;
            cells.insert(cell_key(&observable), cell);
        }
    }
    Ok(StrategyTable { config: config.clone(), cells })
}
