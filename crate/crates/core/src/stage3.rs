//! Stage 3: the unconditional game. Enumerate every initial deal,
//! resolve naturals, apply the strategy table's decision everywhere
//! else, and accumulate exact overall win/tie/loss probabilities and
//! expected value.

use std::collections::BTreeMap;

use crate::cards::{
    CardValue, DealerPolicy, DeckMode, DeckState, HandLayout, HandState, PayoutSchedule,
    VariantConfig, Visibility,
};
use crate::error::{Error, Result};
use crate::rational::{int, rat, Rational};
use crate::stage1::{stage1_evs_dealt, OutcomeTriple};
use crate::stage2::{build_strategy_table, DealerInfo, ObservableState, StrategyTable};

/// One (player value, dealer value) cell of the initial-deal
/// distribution, naturals included.
#[derive(Clone, PartialEq, Debug)]
pub struct DealCell {
    pub player_value: HandState,
    pub dealer_value: HandState,
    pub probability: Rational,
}

fn deal_denominator(deck: &DeckState) -> i64 {
    match deck.mode() {
        DeckMode::FiniteDecks(_) => {
            let t = deck.total() as i64;
            t * (t - 1) * (t - 2) * (t - 3)
        }
        DeckMode::WithReplacement => 2704 * 2704,
    }
}

/// Exact joint distribution of (player value, dealer value) over all
/// initial deals from a fresh deck. Sums to exactly 1.
pub fn deal_distribution(deck: &DeckState) -> Result<Vec<DealCell>> {
    let denominator = deal_denominator(deck);
    let mut cells: BTreeMap<(HandState, HandState), i64> = BTreeMap::new();
    for player_layout in HandLayout::all() {
        let pe = player_layout.permutations(deck) as i64;
        if pe == 0 {
            continue;
        }
        let [p1, p2] = player_layout.cards();
        let deck1 = deck.remove(p1)?.remove(p2)?;
        for dealer_layout in HandLayout::all() {
            let pf = dealer_layout.permutations(&deck1) as i64;
            if pf == 0 {
                continue;
            }
            let key = (player_layout.evaluate(), dealer_layout.evaluate());
            *cells.entry(key).or_insert(0) += pe * pf;
        }
    }
    Ok(cells
        .into_iter()
        .map(|((player_value, dealer_value), count)| DealCell {
            player_value,
            dealer_value,
            probability: rat(count, denominator),
        })
        .collect())
}

/// Overall game metrics: full-probability triple plus expected value
/// (the natural multiplier makes `ev` differ from `win − loss`).
#[derive(Clone, PartialEq, Debug)]
pub struct OverallResult {
    pub win: Rational,
    pub tie: Rational,
    pub loss: Rational,
    pub ev: Rational,
    /// Deals resolved before play: player natural only / dealer natural
    /// only / both natural.
    pub player_natural: Rational,
    pub dealer_natural: Rational,
    pub both_natural: Rational,
}

impl OverallResult {
    pub fn total(&self) -> Rational {
        &self.win + &self.tie + &self.loss
    }
}

/// Compute overall metrics for `config` playing by `table`.
///
/// Walks every initial deal at the layout level (ordered dealer cards
/// when only the up-card is shown, since the decision depends on which
/// card is up), so the result is exact whether or not the table was
/// built with peeking.
pub fn overall_metrics(config: &VariantConfig, table: &StrategyTable) -> Result<OverallResult> {
    if table.config() != config {
        return Err(Error::ConfigMismatch(format!(
            "table built for a different variant: {:?}",
            table.config()
        )));
    }
    let deck = DeckState::fresh(config.deck)?;
    let denominator = deal_denominator(&deck);

    let mut triple = OutcomeTriple::zero();
    let mut ev = int(0);
    let mut player_natural = int(0);
    let mut dealer_natural = int(0);
    let mut both_natural = int(0);

    for player_layout in HandLayout::all() {
        let pe = player_layout.permutations(&deck) as i64;
        if pe == 0 {
            continue;
        }
        let [p1, p2] = player_layout.cards();
        let deck1 = deck.remove(p1)?.remove(p2)?;
        let player = player_layout.evaluate();

        // (dealer layout, ordered count, what the player sees)
        let mut dealer_deals: Vec<(HandLayout, i64, DealerInfo)> = Vec::new();
        match config.visibility {
            Visibility::TwoUp | Visibility::NoUp => {
                for dealer_layout in HandLayout::all() {
                    let pf = dealer_layout.permutations(&deck1) as i64;
                    if pf == 0 {
                        continue;
                    }
                    let info = match config.visibility {
                        Visibility::TwoUp => DealerInfo::BothCards(dealer_layout.evaluate()),
                        _ => DealerInfo::Nothing,
                    };
                    dealer_deals.push((dealer_layout, pf, info));
                }
            }
            Visibility::OneUp => {
                for up in CardValue::all() {
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
                        let layout = HandLayout::new(up, down);
                        dealer_deals.push((layout, cu * cd, DealerInfo::UpCard(up)));
                    }
                }
            }
        }

        for (dealer_layout, count, info) in dealer_deals {
            let p = rat(pe * count, denominator);
            let dealer = dealer_layout.evaluate();

            // Naturals end the round before any decision. Even without a
            // peek this is outcome-exact: nothing the player does beats
            // a dealer natural or loses with their own.
            match (player.is_natural(), dealer.is_natural()) {
                (true, true) => {
                    triple.tie += &p;
                    both_natural += p;
                    continue;
                }
                (true, false) => {
                    triple.win += &p;
                    ev += &p * config.payout.natural_multiplier();
                    player_natural += p;
                    continue;
                }
                (false, true) => {
                    triple.loss += &p;
                    ev -= &p;
                    dealer_natural += p;
                    continue;
                }
                (false, false) => {}
            }

            let observable = ObservableState { player, dealer_info: info };
            let decision = table.decision(&observable)?;
            let [d1, d2] = dealer_layout.cards();
            let live = deck1.remove(d1)?.remove(d2)?;
            let s1 = stage1_evs_dealt(player_layout, dealer_layout, &live, config.dealer_policy)?;
            let outcome = match decision {
                crate::stage2::Decision::Hit => &s1.hit,
                crate::stage2::Decision::Stand => &s1.stand,
            };
            triple.add_scaled(outcome, &p);
            ev += &p * outcome.ev();
        }
    }

    Ok(OverallResult {
        win: triple.win,
        tie: triple.tie,
        loss: triple.loss,
        ev,
        player_natural,
        dealer_natural,
        both_natural,
    })
}

/// Build the table and compute overall metrics in one step.
pub fn solve_overall(config: &VariantConfig) -> Result<(StrategyTable, OverallResult)> {
    let table = build_strategy_table(config)?;
    let overall = overall_metrics(config, &table)?;
    Ok((table, overall))
}

/// The dealer-rule grid: thresholds S15..H18 plus the two degenerate
/// rules, strategy re-derived for each.
pub fn sweep_policies() -> Vec<DealerPolicy> {
    let mut out = Vec::new();
    for stand_at in 15..=18 {
        for hit_soft in [false, true] {
            out.push(DealerPolicy::Threshold { stand_at, hit_soft_at_threshold: hit_soft });
        }
    }
    out.push(DealerPolicy::AlwaysHit);
    out.push(DealerPolicy::AlwaysStand);
    out
}

/// Overall E[X] (with full metrics) for every dealer rule in the grid.
pub fn dealer_rule_sweep(
    visibility: Visibility,
    deck: DeckMode,
    payout: PayoutSchedule,
) -> Result<Vec<(DealerPolicy, OverallResult)>> {
    sweep_policies()
        .into_iter()
        .map(|policy| {
            let config = VariantConfig {
                visibility,
                deck,
                dealer_policy: policy,
                payout: payout.clone(),
                ..VariantConfig::default()
            };
            let (_, overall) = solve_overall(&config)?;
            Ok((policy, overall))
        })
        .collect()
}
