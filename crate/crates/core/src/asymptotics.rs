//! Convergence of the n-deck game to the one-deck-with-replacement
//! model: rerun the full pipeline at each shoe size, measure gaps to
//! the replacement limit, and find where the strategy stabilizes.

use num_traits::{Signed, Zero};

use crate::cards::{DeckMode, DeckState, HandLayout, HandState, VariantConfig};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::stage1::{extract_stage1_coefficients_for, evaluate_coefficients_at, stage1_evs};
use crate::stage2::{layout_weights, ObservableState};
use crate::stage3::{deal_distribution, solve_overall, OverallResult};

/// Convergence record for one scalar quantity: exact value at each
/// swept shoe size plus the replacement-model limit.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub quantity: String,
    /// (n, value, |value − limit|), strictly increasing in n.
    pub samples: Vec<(u32, Rational, Rational)>,
    pub limit: Rational,
    /// Gap at the largest swept n.
    pub max_n_gap: Rational,
}

impl ConvergenceReport {
    fn build(quantity: &str, samples: Vec<(u32, Rational)>, limit: Rational) -> ConvergenceReport {
        let samples: Vec<(u32, Rational, Rational)> = samples
            .into_iter()
            .map(|(n, v)| {
                let gap = (&v - &limit).abs();
                (n, v, gap)
            })
            .collect();
        let max_n_gap = samples.last().map(|(_, _, g)| g.clone()).unwrap_or_else(|| limit.clone());
        ConvergenceReport { quantity: quantity.into(), samples, limit, max_n_gap }
    }

    /// Gap ratios between consecutive samples: (n_prev, n_next, ratio).
    /// Ratios are omitted where the earlier gap is exactly zero.
    pub fn gap_ratios(&self) -> Vec<(u32, u32, Rational)> {
        self.samples
            .windows(2)
            .filter(|w| !w[0].2.numer().is_zero())
            .map(|w| (w[0].0, w[1].0, &w[1].2 / &w[0].2))
            .collect()
    }
}

/// Full-pipeline deck sweep: overall metrics per shoe size, gaps to the
/// replacement model, and the first swept n whose strategy table equals
/// the replacement table.
#[derive(Clone, Debug)]
pub struct DeckSweep {
    pub config: VariantConfig,
    pub n_list: Vec<u32>,
    pub per_n: Vec<(u32, OverallResult)>,
    pub limit: OverallResult,
    pub reports: Vec<ConvergenceReport>,
    pub strategy_stabilized_at: Option<u32>,
}

/// Run the pipeline (strategy rebuilt from scratch) at every n in
/// `n_list` and at the replacement limit. `config.deck` is ignored.
pub fn sweep_decks(config: &VariantConfig, n_list: &[u32]) -> Result<DeckSweep> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parse("deck sweep needs a sorted, nonempty n list".into()));
    }
    let limit_config = VariantConfig { deck: DeckMode::WithReplacement, ..config.clone() };
    let (limit_table, limit) = solve_overall(&limit_config)?;

    let mut per_n = Vec::new();
    let mut strategy_stabilized_at = None;
    for &n in n_list {
        let n_config = VariantConfig { deck: DeckMode::FiniteDecks(n), ..config.clone() };
        let (table, overall) = solve_overall(&n_config)?;
        if strategy_stabilized_at.is_none() && table.diff_decisions(&limit_table).is_empty() {
            strategy_stabilized_at = Some(n);
        } else if strategy_stabilized_at.is_some() && !table.diff_decisions(&limit_table).is_empty()
        {
            // stabilization must be final, not a transient agreement
            strategy_stabilized_at = None;
        }
        per_n.push((n, overall));
    }

    let metric = |f: fn(&OverallResult) -> &Rational| -> Vec<(u32, Rational)> {
        per_n.iter().map(|(n, o)| (*n, f(o).clone())).collect()
    };
    let reports = vec![
        ConvergenceReport::build("P(W)", metric(|o| &o.win), limit.win.clone()),
        ConvergenceReport::build("P(L)", metric(|o| &o.loss), limit.loss.clone()),
        ConvergenceReport::build("P(T)", metric(|o| &o.tie), limit.tie.clone()),
        ConvergenceReport::build("E[X]", metric(|o| &o.ev), limit.ev.clone()),
    ];

    Ok(DeckSweep {
        config: config.clone(),
        n_list: n_list.to_vec(),
        per_n,
        limit,
        reports,
        strategy_stabilized_at,
    })
}

/// One verified limiting quantity from the finite-n formulas.
#[derive(Clone, Debug)]
pub struct LimitCheck {
    pub quantity: String,
    pub report: ConvergenceReport,
    /// Gaps never increase along the sweep.
    pub monotone: bool,
    /// For stage-1 quantities: the closed-form coefficient evaluation
    /// agrees with direct enumeration at every n (and at the limit).
    pub coefficient_match: bool,
}

impl LimitCheck {
    pub fn passed(&self) -> bool {
        self.monotone && self.coefficient_match
    }
}

fn monotone_nonincreasing(report: &ConvergenceReport) -> bool {
    report.samples.windows(2).all(|w| w[1].2 <= w[0].2)
}

/// Spot-check the limiting statements behind the sweep: stage-1 EVs,
/// stage-2 weights, and deal-cell probabilities all converge to their
/// replacement-model values, with closed forms matching enumeration.
pub fn verify_proposition_limits(
    config: &VariantConfig,
    pairs: &[(HandLayout, HandLayout)],
    observables: &[ObservableState],
    cells: &[(HandState, HandState)],
    n_list: &[u32],
) -> Result<Vec<LimitCheck>> {
    let mut out = Vec::new();
    let policy = config.dealer_policy;

    for &(player, dealer) in pairs {
        let coeffs = extract_stage1_coefficients_for(player, dealer, policy);
        let limit = evaluate_coefficients_at(&coeffs, DeckMode::WithReplacement)?;
        let mut samples = Vec::new();
        let mut coefficient_match = true;
        for &n in n_list {
            let mode = DeckMode::FiniteDecks(n);
            let deck = DeckState::fresh(mode)?;
            let direct = stage1_evs(player, dealer, &deck, policy)?;
            let closed = evaluate_coefficients_at(&coeffs, mode)?;
            coefficient_match &= closed == direct;
            samples.push((n, direct.ev_stand));
        }
        let report = ConvergenceReport::build(
            &format!("stage1 stand EV {player} v {dealer}"),
            samples,
            limit.ev_stand.clone(),
        );
        out.push(LimitCheck {
            quantity: report.quantity.clone(),
            monotone: monotone_nonincreasing(&report),
            coefficient_match,
            report,
        });
    }

    for observable in observables {
        let limit_weights =
            layout_weights(observable, &DeckState::fresh(DeckMode::WithReplacement)?, true)?;
        let limit_first = limit_weights.entries[0].weight.clone();
        let mut samples = Vec::new();
        for &n in n_list {
            let deck = DeckState::fresh(DeckMode::FiniteDecks(n))?;
            let weights = layout_weights(observable, &deck, true)?;
            samples.push((n, weights.entries[0].weight.clone()));
        }
        let report = ConvergenceReport::build(
            &format!("layout weight {observable}"),
            samples,
            limit_first,
        );
        out.push(LimitCheck {
            quantity: report.quantity.clone(),
            monotone: monotone_nonincreasing(&report),
            coefficient_match: true,
            report,
        });
    }

    for &(player_value, dealer_value) in cells {
        let probe = |mode: DeckMode| -> Result<Rational> {
            let cells = deal_distribution(&DeckState::fresh(mode)?)?;
            cells
                .iter()
                .find(|c| c.player_value == player_value && c.dealer_value == dealer_value)
                .map(|c| c.probability.clone())
                .ok_or_else(|| {
                    Error::EmptyObservable(format!("deal cell {player_value} v {dealer_value}"))
                })
        };
        let limit = probe(DeckMode::WithReplacement)?;
        let mut samples = Vec::new();
        for &n in n_list {
            samples.push((n, probe(DeckMode::FiniteDecks(n))?));
        }
        let report = ConvergenceReport::build(
            &format!("deal cell {player_value} v {dealer_value}"),
            samples,
            limit,
        );
        out.push(LimitCheck {
            quantity: report.quantity.clone(),
            monotone: monotone_nonincreasing(&report),
            coefficient_match: true,
            report,
        });
    }

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::{CardValue, Visibility};
    use crate::rational::rat;
    use crate::stage2::DealerInfo;

    fn layout(a: u8, b: u8) -> HandLayout {
        HandLayout::new(CardValue::new(a).unwrap(), CardValue::new(b).unwrap())
    }

    #[test]
    fn no_up_sweep_converges_and_stabilizes_early() {
        let config = VariantConfig {
            visibility: Visibility::NoUp,
            ..VariantConfig::default()
        };
        let sweep = sweep_decks(&config, &[1, 2, 4, 8]).unwrap();
        assert_eq!(sweep.per_n.len(), 4);
        for report in &sweep.reports {
            let first = &report.samples[0].2;
            assert!(&report.max_n_gap < first, "{} gap should shrink", report.quantity);
        }
        // the flat hit-to-14 / stand-at-15 strategy already matches the
        // replacement table at one deck
        assert_eq!(sweep.strategy_stabilized_at, Some(1));
        // one-deck values match the direct pipeline
        assert_eq!(sweep.per_n[0].1.ev, solve_overall(&config).unwrap().1.ev);
    }

    #[test]
    fn unsorted_or_empty_n_list_is_rejected() {
        let config = VariantConfig::default();
        assert!(sweep_decks(&config, &[]).is_err());
        assert!(sweep_decks(&config, &[2, 1]).is_err());
        assert!(sweep_decks(&config, &[1, 1]).is_err());
    }

    #[test]
    fn proposition_limit_spot_checks() {
        let config = VariantConfig::default();
        let pairs = [(layout(1, 2), layout(6, 8))];
        let observables = [ObservableState {
            player: HandState::soft(13).unwrap(),
            dealer_info: DealerInfo::BothCards(HandState::hard(14).unwrap()),
        }];
        let cells = [(HandState::soft(13).unwrap(), HandState::hard(14).unwrap())];
        let checks =
            verify_proposition_limits(&config, &pairs, &observables, &cells, &[1, 2, 4, 8])
                .unwrap();
        assert_eq!(checks.len(), 3);
        for check in &checks {
            assert!(check.passed(), "{} failed", check.quantity);
        }
        // published anchors: stand EV at n=1 and the replacement limit
        let stand = &checks[0].report;
        assert_eq!(stand.samples[0].1, rat(23, 48) - rat(25, 48));
        assert_eq!(stand.limit, rat(24, 52) - rat(28, 52));
        // first-layout weight 32/51 → 128/208
        let weight = &checks[1].report;
        assert_eq!(weight.samples[0].1, rat(32, 51));
        assert_eq!(weight.limit, rat(128, 208));
        // deal-cell probability → product of the replacement masses
        let cell = &checks[2].report;
        assert_eq!(cell.samples[0].1, rat(816, 812175));
        assert_eq!(cell.limit, rat(32, 2704) * rat(208, 2704));
    }
}
