//! Exact solver for single-decision Blackjack variants.
//!
//! Both player and dealer may hit at most once. The crate derives basic
//! strategy, win/tie/loss probabilities, and expected value for every
//! combination of dealer-card visibility, deck model, dealer hit rule,
//! and natural payout — all by full enumeration over exact rationals —
//! and verifies that finite-shoe results converge to the one-deck
//! with-replacement model as the number of decks grows.

pub mod asymptotics;
pub mod cards;
pub mod error;
pub mod export;
pub mod fixtures;
pub mod parse;
pub mod rational;
pub mod simulate;
pub mod stage1;
pub mod stage2;
pub mod stage3;

pub use cards::{
    add_card, dealer_must_hit, draw_distribution, evaluate_layout, CardValue, DealerPolicy,
    DeckMode, DeckState, HandLayout, HandState, HitOutcome, LayoutCategory, PayoutSchedule,
    VariantConfig, Visibility,
};
pub use error::{Error, Result};
pub use export::{
    config_summary, deck_sweep_csv, deck_sweep_json_lines, deck_sweep_markdown, overall_csv,
    overall_json_line, overall_markdown, parse_strategy_csv, payout_text, policy_sweep_csv,
    policy_sweep_json_lines, policy_sweep_markdown, sim_json_line, sim_markdown, strategy_csv,
    strategy_json_lines, strategy_markdown, CsvCell,
};
pub use fixtures::{run_all as run_reference_fixtures, FixtureCheck, FixtureSuite};
pub use parse::{
    parse_bool, parse_card, parse_deck, parse_hand, parse_layout, parse_payout, parse_policy,
    parse_up_card, parse_visibility,
};
pub use rational::{rational_round, Rational};
pub use simulate::{simulate, SimReport};
pub use stage1::{
    evaluate_coefficients_at, extract_stage1_coefficients, resolve_hit, resolve_stand, stage1_evs,
    Outcome, OutcomeTriple, Stage1Coefficients, Stage1Result,
};
pub use stage2::{
    build_strategy_table, cell_evaluate, cell_key, enumerate_layouts, layout_weights, layouts_for,
    player_states, up_card_column, CellKey, CellResult, Decision, DealerInfo, InfoKey,
    LayoutWeight, ObservableState, PlayerKey, StrategyTable, WeightedLayouts,
};
pub use asymptotics::{
    sweep_decks, verify_proposition_limits, ConvergenceReport, DeckSweep, LimitCheck,
};
pub use stage3::{
    deal_distribution, dealer_rule_sweep, overall_metrics, solve_overall, sweep_policies,
    DealCell, OverallResult,
};
