//! Monte-Carlo cross-check of the exact pipeline: play full rounds with
//! a seeded RNG, following a strategy table, and report empirical
//! outcome frequencies with standard errors.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cards::{
    add_card, CardValue, DeckMode, DeckState, HandLayout, HitOutcome, VariantConfig, Visibility,
};
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::stage2::{Decision, DealerInfo, ObservableState, StrategyTable};

/// Empirical results of a seeded simulation run.
#[derive(Clone, Debug)]
pub struct SimReport {
    pub trials: u64,
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
    pub mean_payout: f64,
    /// Standard error of the mean payout.
    pub std_error: f64,
    pub seed: u64,
    pub rng: &'static str,
}

impl SimReport {
    pub fn win_rate(&self) -> f64 {
        self.wins as f64 / self.trials as f64
    }

    pub fn tie_rate(&self) -> f64 {
        self.ties as f64 / self.trials as f64
    }

    pub fn loss_rate(&self) -> f64 {
        self.losses as f64 / self.trials as f64
    }
}

/// Draw one card. Finite shoes sample without replacement; the
/// replacement model always samples the fixed fresh-deck distribution.
fn draw(deck: &mut DeckState, rng: &mut ChaCha8Rng) -> CardValue {
    let (counts, total): (Vec<u64>, u64) = match deck.mode() {
        DeckMode::WithReplacement => {
            (CardValue::all().map(|v| v.per_deck()).collect(), 52)
        }
        DeckMode::FiniteDecks(_) => {
            (CardValue::all().map(|v| deck.count(v)).collect(), deck.total())
        }
    };
    let mut pick = rng.random_range(0..total);
    for (value, count) in CardValue::all().zip(counts) {
        if pick < count {
            if let DeckMode::FiniteDecks(_) = deck.mode() {
                *deck = deck.remove(value).expect("drew a card that was counted present");
            }
            return value;
        }
        pick -= count;
    }
    unreachable!("card totals exhausted before a draw")
}

/// Play one round from a fresh shoe; returns the player's payout.
fn play_round(config: &VariantConfig, table: &StrategyTable, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut deck = DeckState::fresh(config.deck)?;
    let p1 = draw(&mut deck, rng);
    let p2 = draw(&mut deck, rng);
    let d_up = draw(&mut deck, rng);
    let d_down = draw(&mut deck, rng);

    let player = HandLayout::new(p1, p2).evaluate();
    let dealer = HandLayout::new(d_up, d_down).evaluate();

    // Naturals settle before any decision, whatever the peek rule.
    match (player.is_natural(), dealer.is_natural()) {
        (true, true) => return Ok(0.0),
        (true, false) => return Ok(to_f64(config.payout.natural_multiplier())),
        (false, true) => return Ok(-1.0),
        (false, false) => {}
    }

    let observable = ObservableState {
        player,
        dealer_info: match config.visibility {
            Visibility::TwoUp => DealerInfo::BothCards(dealer),
            Visibility::OneUp => DealerInfo::UpCard(d_up),
            Visibility::NoUp => DealerInfo::Nothing,
        },
    };
    let player_final = match table.decision(&observable)? {
        Decision::Stand => player,
        Decision::Hit => match add_card(player, draw(&mut deck, rng)) {
            HitOutcome::Bust => return Ok(-1.0),
            HitOutcome::Hand(h) => h,
        },
    };

    let dealer_final = if config.dealer_policy.must_hit(dealer) {
        match add_card(dealer, draw(&mut deck, rng)) {
            HitOutcome::Bust => return Ok(1.0),
            HitOutcome::Hand(h) => h,
        }
    } else {
        dealer
    };

    Ok(match player_final.total().cmp(&dealer_final.total()) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Equal => 0.0,
        std::cmp::Ordering::Less => -1.0,
    })
}

/// Simulate `trials` independent rounds, each from a fresh shoe, playing
/// the given strategy table. Deterministic for a fixed seed.
pub fn simulate(
    config: &VariantConfig,
    table: &StrategyTable,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    if table.config() != config {
        return Err(Error::ConfigMismatch(
            "simulation config differs from the strategy table's".into(),
        ));
    }
    if trials == 0 {
        return Err(Error::Parse("simulation needs at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut wins, mut ties, mut losses) = (0u64, 0u64, 0u64);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let payout = play_round(config, table, &mut rng)?;
        if payout > 0.0 {
            wins += 1;
        } else if payout < 0.0 {
            losses += 1;
        } else {
            ties += 1;
        }
        sum += payout;
        sum_sq += payout * payout;
    }
    let n = trials as f64;
    let mean = sum / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    let std_error = (variance / n).sqrt();
    Ok(SimReport {
        trials,
        wins,
        ties,
        losses,
        mean_payout: mean,
        std_error,
        seed,
        rng: "chacha8",
    })
}
