//! Built-in reference fixtures: published values for the three
//! variants, checked against the exact pipeline.
//!
//! Where the published source and the exact computation are known to
//! disagree, the deviation is deliberate and encoded here:
//!
//! * The published single-deck two-up and one-up overall metrics carry
//!   roughly 1e-5 arithmetic error; the published no-up and every
//!   with-replacement figure reproduce exactly, so those two columns
//!   use a widened tolerance.
//! * Two published expectations are digit typos (the one-up 6:5
//!   expectation is shifted a decimal place; the with-replacement
//!   one-up expectation transposes a digit); fixtures pin the corrected
//!   values, which follow from payout linearity and the published
//!   win/loss probabilities.
//! * Strategy cells whose hit and stand expectations tie exactly accept
//!   either mark, and a short whitelist of composition-sensitive cells
//!   the published charts fail to star is allowed as engine extras.

use crate::cards::{
    DealerPolicy, DeckMode, HandState, PayoutSchedule, VariantConfig, Visibility,
};
use crate::error::{Error, Result};
use crate::rational::{rat, rational_round, to_f64, Rational};
use crate::stage1::stage1_evs;
use crate::stage2::{
    build_strategy_table, cell_evaluate, layout_weights, Decision, DealerInfo, InfoKey,
    ObservableState, PlayerKey,
};
use crate::stage3::{deal_distribution, dealer_rule_sweep, solve_overall};
use crate::cards::{CardValue, DeckState, HandLayout};

/// One reference comparison: a named quantity, the published value, the
/// computed value, and the tolerance that judged it.
#[derive(Clone, Debug)]
pub struct FixtureCheck {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub tolerance: f64,
    pub passed: bool,
}

impl FixtureCheck {
    fn close(name: &str, actual: &Rational, expected: &str, tolerance: f64) -> FixtureCheck {
        let value = to_f64(actual);
        let target: f64 = expected.parse().expect("fixture literals are valid decimals");
        FixtureCheck {
            name: name.into(),
            expected: expected.into(),
            actual: rational_round(actual, 7),
            tolerance,
            passed: (value - target).abs() <= tolerance,
        }
    }

    fn exact(name: &str, actual: &Rational, expected: &Rational) -> FixtureCheck {
        FixtureCheck {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            tolerance: 0.0,
            passed: actual == expected,
        }
    }

    fn flag(name: &str, detail: String, passed: bool) -> FixtureCheck {
        FixtureCheck {
            name: name.into(),
            expected: "no mismatches".into(),
            actual: if detail.is_empty() { "none".into() } else { detail },
            tolerance: 0.0,
            passed,
        }
    }
}

/// A named group of reference comparisons.
#[derive(Clone, Debug)]
pub struct FixtureSuite {
    pub name: &'static str,
    pub checks: Vec<FixtureCheck>,
}

impl FixtureSuite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&FixtureCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Tolerance from the printed precision of `expected` plus a per-column
/// `allowance` for known source error.
fn tol_for(expected: &str, allowance: f64) -> f64 {
    let dp = expected.split('.').nth(1).map_or(0, str::len) as i32;
    0.6 * 10f64.powi(-dp) + allowance
}

/// Published single-deck two-up/one-up figures carry ~1e-5 source
/// error; no-up and with-replacement figures reproduce exactly.
const FINITE_ALLOWANCE: f64 = 2.0e-5;
/// The published dealer-rule grid's two-up column drifts slightly
/// further from the exact values at low thresholds.
const GRID_ALLOWANCE: f64 = 4.0e-5;
const EXACT_ALLOWANCE: f64 = 1.0e-6;

fn config(visibility: Visibility, deck: DeckMode, payout: PayoutSchedule) -> VariantConfig {
    VariantConfig { visibility, deck, payout, ..VariantConfig::default() }
}

/// The worked single-layout and single-cell example: soft 13 against a
/// known hard 14, one deck.
pub fn suite_worked_example() -> Result<FixtureSuite> {
    let mut checks = Vec::new();
    let deck = DeckState::fresh(DeckMode::FiniteDecks(1))?;
    let player = HandLayout::new(CardValue::ACE, CardValue::new(2)?);
    let dealer = HandLayout::new(CardValue::new(6)?, CardValue::new(8)?);
    let s1 = stage1_evs(player, dealer, &deck, DealerPolicy::H17)?;
    checks.push(FixtureCheck::exact("stand EV, (A,2) v (6,8)", &s1.ev_stand, &rat(-2, 48)));

    let observable = ObservableState {
        player: HandState::soft(13)?,
        dealer_info: DealerInfo::BothCards(HandState::hard(14)?),
    };
    let weights = layout_weights(&observable, &deck, true)?;
    let expected_weights = [rat(32, 51), rat(8, 51), rat(8, 51), rat(3, 51)];
    for (entry, expected) in weights.entries.iter().zip(&expected_weights) {
        checks.push(FixtureCheck::exact(
            &format!("layout weight {} v {}", entry.player_layout, entry.dealer_layout),
            &entry.weight,
            expected,
        ));
    }

    let cfg = VariantConfig::default();
    let cell = cell_evaluate(&observable, &cfg)?;
    // the published stand expectation, -128/2448, contradicts its own
    // displayed sum; the correct value is -96/2448 = -2/51
    checks.push(FixtureCheck::exact("cell stand EV, soft 13 v hard 14", &cell.ev_stand, &rat(-2, 51)));
    checks.push(FixtureCheck::exact("cell hit EV, soft 13 v hard 14", &cell.ev_hit, &rat(27679, 115056)));
    checks.push(FixtureCheck::flag(
        "cell decision, soft 13 v hard 14",
        format!("{}{}", cell.decision, if cell.asterisk { "*" } else { "" }),
        cell.decision == Decision::Hit && !cell.asterisk,
    ));

    let deal = deal_distribution(&deck)?;
    let prob = deal
        .iter()
        .find(|c| c.player_value == HandState::soft(13).unwrap() && c.dealer_value == HandState::hard(14).unwrap())
        .map(|c| c.probability.clone())
        .ok_or_else(|| Error::EmptyObservable("soft 13 v hard 14 deal cell".into()))?;
    checks.push(FixtureCheck::exact("deal probability, soft 13 ∩ hard 14", &prob, &rat(816, 812175)));
    let contribution = &prob * &cell.ev_hit;
    checks.push(FixtureCheck::flag(
        "expectation contribution, soft 13 ∩ hard 14",
        rational_round(&contribution, 7),
        rational_round(&contribution, 7) == "0.0002417",
    ));

    Ok(FixtureSuite { name: "worked-example", checks })
}

struct OverallRow {
    visibility: Visibility,
    win: &'static str,
    loss: &'static str,
    tie: &'static str,
    ev: &'static str,
    allowance: f64,
}

fn overall_suite(
    name: &'static str,
    deck: DeckMode,
    payout: PayoutSchedule,
    rows: &[OverallRow],
) -> Result<FixtureSuite> {
    let mut checks = Vec::new();
    for row in rows {
        let cfg = config(row.visibility, deck, payout.clone());
        let (_, overall) = solve_overall(&cfg)?;
        let label = |metric: &str| format!("{} {}", cfg.visibility, metric);
        checks.push(FixtureCheck::close(&label("P(win)"), &overall.win, row.win, tol_for(row.win, row.allowance)));
        checks.push(FixtureCheck::close(&label("P(loss)"), &overall.loss, row.loss, tol_for(row.loss, row.allowance)));
        checks.push(FixtureCheck::close(&label("P(tie)"), &overall.tie, row.tie, tol_for(row.tie, row.allowance)));
        checks.push(FixtureCheck::close(&label("E[payout]"), &overall.ev, row.ev, tol_for(row.ev, row.allowance)));
    }
    Ok(FixtureSuite { name, checks })
}

/// Published single-deck overall metrics at the 3:2 natural payout.
pub fn suite_overall_three_to_two() -> Result<FixtureSuite> {
    overall_suite(
        "overall-three-to-two",
        DeckMode::FiniteDecks(1),
        PayoutSchedule::three_to_two(),
        &[
            OverallRow { visibility: Visibility::TwoUp, win: "0.470912", loss: "0.446386", tie: "0.082702", ev: "0.047771", allowance: FINITE_ALLOWANCE },
            OverallRow { visibility: Visibility::OneUp, win: "0.455694", loss: "0.464616", tie: "0.0797", ev: "0.014324", allowance: FINITE_ALLOWANCE },
            OverallRow { visibility: Visibility::NoUp, win: "0.454128", loss: "0.468471", tie: "0.077401", ev: "0.008902", allowance: EXACT_ALLOWANCE },
        ],
    )
}

/// Published single-deck overall metrics at the 6:5 natural payout.
/// The published one-up tie probability transposes a digit (0.07797
/// for 0.0797) and its expectation is shifted a decimal place (0.003761
/// for 0.0003761); both corrections follow from the 3:2 column and
/// payout linearity.
pub fn suite_overall_six_to_five() -> Result<FixtureSuite> {
    overall_suite(
        "overall-six-to-five",
        DeckMode::FiniteDecks(1),
        PayoutSchedule::six_to_five(),
        &[
            OverallRow { visibility: Visibility::TwoUp, win: "0.470912", loss: "0.446386", tie: "0.082702", ev: "0.033824", allowance: FINITE_ALLOWANCE },
            OverallRow { visibility: Visibility::OneUp, win: "0.455694", loss: "0.464616", tie: "0.0797", ev: "0.0003761", allowance: FINITE_ALLOWANCE },
            OverallRow { visibility: Visibility::NoUp, win: "0.454128", loss: "0.468472", tie: "0.0774", ev: "-0.005046", allowance: EXACT_ALLOWANCE },
        ],
    )
}

/// Published one-deck-with-replacement overall metrics (3:2). The
/// published one-up expectation, 0.012959, transposes a digit; the
/// corrected 0.012759 is consistent with the published win/loss column.
pub fn suite_overall_replacement() -> Result<FixtureSuite> {
    overall_suite(
        "overall-with-replacement",
        DeckMode::WithReplacement,
        PayoutSchedule::three_to_two(),
        &[
            OverallRow { visibility: Visibility::TwoUp, win: "0.46935", loss: "0.44543", tie: "0.08522", ev: "0.046467", allowance: 0.0 },
            OverallRow { visibility: Visibility::OneUp, win: "0.45413", loss: "0.46392", tie: "0.08195", ev: "0.012759", allowance: 0.0 },
            OverallRow { visibility: Visibility::NoUp, win: "0.45282", loss: "0.46698", tie: "0.08020", ev: "0.008384", allowance: 0.0 },
        ],
    )
}

/// Published dealer-rule sweep: overall expectation for thresholds 15
/// through 18 in both soft flavors, single deck, 3:2, plus the no-up
/// always-hit / always-stand extremes and the "H16 is the dealer's
/// optimum" observation.
pub fn suite_dealer_rules() -> Result<FixtureSuite> {
    let grid: [(Visibility, [&str; 8], f64); 3] = [
        (Visibility::TwoUp, ["0.05718", "0.05337", "0.04428", "0.04217", "0.04858", "0.04777", "0.07095", "0.07202"], GRID_ALLOWANCE),
        (Visibility::OneUp, ["0.03038", "0.02663", "0.01523", "0.01365", "0.01421", "0.01432", "0.03493", "0.03724"], FINITE_ALLOWANCE),
        (Visibility::NoUp, ["0.02504", "0.0213", "0.00816", "0.0061", "0.00871", "0.0089", "0.03183", "0.03413"], EXACT_ALLOWANCE),
    ];
    let policies: Vec<DealerPolicy> = (15..=18)
        .flat_map(|t| {
            [DealerPolicy::threshold(t, false).unwrap(), DealerPolicy::threshold(t, true).unwrap()]
        })
        .collect();

    let mut checks = Vec::new();
    for (visibility, expected, allowance) in &grid {
        let rows = dealer_rule_sweep(
            *visibility,
            DeckMode::FiniteDecks(1),
            PayoutSchedule::three_to_two(),
        )?;
        let mut threshold_evs = Vec::new();
        for (policy, value) in policies.iter().zip(expected) {
            let overall = rows
                .iter()
                .find(|(p, _)| p == policy)
                .map(|(_, o)| o)
                .ok_or_else(|| Error::ConfigMismatch(format!("sweep lacks {policy}")))?;
            checks.push(FixtureCheck::close(
                &format!("{visibility} E[payout], dealer {policy}"),
                &overall.ev,
                value,
                tol_for(value, *allowance),
            ));
            threshold_evs.push((policy, overall.ev.clone()));
        }
        let h16 = DealerPolicy::threshold(16, true).unwrap();
        let minimum = threshold_evs.iter().all(|(p, ev)| {
            **p == h16 || ev > &threshold_evs.iter().find(|(q, _)| **q == h16).unwrap().1
        });
        checks.push(FixtureCheck::flag(
            &format!("{visibility}: H16 is the unique row minimum"),
            String::new(),
            minimum,
        ));
        if *visibility == Visibility::NoUp {
            let hit = rows.iter().find(|(p, _)| *p == DealerPolicy::AlwaysHit).unwrap();
            let stand = rows.iter().find(|(p, _)| *p == DealerPolicy::AlwaysStand).unwrap();
            checks.push(FixtureCheck::close("no-up E[payout], dealer always-hit", &hit.1.ev, "0.273143", 5.0e-7));
            checks.push(FixtureCheck::close("no-up E[payout], dealer always-stand", &stand.1.ev, "0.289466", 5.0e-7));
        }
    }
    Ok(FixtureSuite { name: "dealer-rules", checks })
}

// Published strategy charts. Rows follow player order (hard 4-20 then
// soft 12-20); two-up columns are dealer hard 4-20 then soft 12-20,
// one-up columns are up-card 2-10 then ace (as 11).

#[rustfmt::skip]
const TWO_UP_SINGLE_DECK: [&str; 26] = [
    // hard 4-11: hit everything
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    // hard 12
    "H H H H H H H H H H H* S S H H H H  H H H H H H H H H",
    // hard 13
    "H H H H H H H H H H S S S H H H H  H H H H H H H H H",
    // hard 14
    "S S S H H H H H S S S S S H H H H  S S H H H H H H H",
    // hard 15
    "S S S S S S S* S S S S S S H H H H  S S S S H H H H H",
    // hard 16
    "S S S S S S S S S S S S S H H H H  S S S S S S* H H H",
    // hard 17
    "S S S S S S S S S S S S S S H H H  S S S S S S H H H",
    // hard 18
    "S S S S S S S S S S S S S S S H H  S S S S S S S H H",
    // hard 19
    "S S S S S S S S S S S S S S S S H  S S S S S S S S H",
    // hard 20
    "S S S S S S S S S S S S S S S S S  S S S S S S S S S",
    // soft 12-14
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    "H H H H H H H H H H H H H H H H H  H H H H H H H H H",
    // soft 15
    "S H H H H H H H H H H H H H H H H  H H H H H H H H H",
    // soft 16
    "S S S H H H H H H H H H H H H H H  H S S S H H H H H",
    // soft 17
    "S S S S H H H S S S S H H S H H H  S S S S S S H H H",
    // soft 18
    "S S S S S S S S S S S S S S S H H  S S S S S S S H H",
    // soft 19
    "S S S S S S S S S S S S S S S S H  S S S S S S S S H",
    // soft 20
    "S S S S S S S S S S S S S S S S S  S S S S S S S S S",
];

#[rustfmt::skip]
const ONE_UP_SINGLE_DECK: [&str; 26] = [
    "H H H H H H H H H H", // hard 4
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H", // hard 12
    "H H H H H* H H H H H", // hard 13
    "S* H* H* S S H H H H H", // hard 14
    "S S S S S H H H H H", // hard 15
    "S S S S S H H H* H* S", // hard 16
    "S S S S S S S S S S", // hard 17
    "S S S S S S S S S S",
    "S S S S S S S S S S",
    "S S S S S S S S S S", // hard 20
    "H H H H H H H H H H", // soft 12
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H",
    "H H H H H H H H H H", // soft 16
    "S S S H H H H H H H", // soft 17
    "S S S S S S S H S S", // soft 18
    "S S S S S S S S S S",
    "S S S S S S S S S S", // soft 20
];

#[rustfmt::skip]
const NO_UP: [&str; 26] = [
    "H", "H", "H", "H", "H", "H", "H", "H", "H", "H", "H", // hard 4-14
    "S", "S", "S", "S", "S", "S",                          // hard 15-20
    "H", "H", "H", "H", "H", "H",                          // soft 12-17
    "S", "S", "S",                                         // soft 18-20
];

/// Cells the published single-deck charts print without an asterisk but
/// which are composition-sensitive (verified by per-layout enumeration).
const TWO_UP_EXTRA_ASTERISKS: &[(&str, &str)] = &[
    ("hard 13", "hard 13"),
    ("soft 17", "hard 11"),
    ("soft 17", "hard 14"),
];
const ONE_UP_EXTRA_ASTERISKS: &[(&str, &str)] = &[];

fn player_order() -> Vec<PlayerKey> {
    crate::stage2::player_states().into_iter().map(PlayerKey::from).collect()
}

fn info_order(visibility: Visibility) -> Vec<InfoKey> {
    match visibility {
        Visibility::TwoUp => player_order()
            .into_iter()
            .map(|p| InfoKey::Both { soft: p.soft, total: p.total })
            .collect(),
        Visibility::OneUp => (2..=11).map(InfoKey::Up).collect(),
        Visibility::NoUp => vec![InfoKey::Unseen],
    }
}

fn apply_chart_edits(rows: &[&str], edits: &[(usize, usize, &str)]) -> Vec<Vec<String>> {
    let mut grid: Vec<Vec<String>> = rows
        .iter()
        .map(|r| r.split_whitespace().map(|t| t.trim_end_matches('*').to_string()).collect())
        .collect();
    for &(row, col, token) in edits {
        grid[row][col] = token.into();
    }
    grid
}

fn chart_checks(
    label: &str,
    cfg: &VariantConfig,
    grid: &[Vec<String>],
    starred: &[(usize, usize)],
    extra_allowed: &[(&str, &str)],
) -> Result<Vec<FixtureCheck>> {
    let table = build_strategy_table(cfg)?;
    let players = player_order();
    let infos = info_order(cfg.visibility);
    let mut decision_mismatches = Vec::new();
    let mut missing_stars = Vec::new();
    let mut extra_stars = Vec::new();

    for (r, player) in players.iter().enumerate() {
        for (c, info) in infos.iter().enumerate() {
            let cell = table
                .get(&(*player, *info))
                .ok_or_else(|| Error::EmptyObservable(format!("{player} v {info}")))?;
            let expected = match grid[r][c].as_str() {
                "H" => Decision::Hit,
                "S" => Decision::Stand,
                other => return Err(Error::Parse(format!("bad chart token {other:?}"))),
            };
            // exact hit/stand EV ties accept either mark
            if cell.ev_hit != cell.ev_stand && cell.decision != expected {
                decision_mismatches.push(format!("{player} v {info}: {} (chart {expected})", cell.decision));
            }
            let expect_star = starred.contains(&(r, c));
            if expect_star && !cell.asterisk {
                missing_stars.push(format!("{player} v {info}"));
            }
            if !expect_star && cell.asterisk {
                let key = (player.to_string(), info_label(cfg.visibility, info));
                if !extra_allowed.iter().any(|(p, i)| *p == key.0 && *i == key.1) {
                    extra_stars.push(format!("{player} v {info}"));
                }
            }
        }
    }

    Ok(vec![
        FixtureCheck::flag(&format!("{label}: decisions"), decision_mismatches.join("; "), decision_mismatches.is_empty()),
        FixtureCheck::flag(&format!("{label}: charted asterisks present"), missing_stars.join("; "), missing_stars.is_empty()),
        FixtureCheck::flag(&format!("{label}: no undocumented extra asterisks"), extra_stars.join("; "), extra_stars.is_empty()),
    ])
}

fn info_label(visibility: Visibility, info: &InfoKey) -> String {
    match (visibility, info) {
        (Visibility::OneUp, InfoKey::Up(col)) => format!("up {col}"),
        _ => info.to_string(),
    }
}

fn starred_cells(rows: &[&str]) -> Vec<(usize, usize)> {
    rows.iter()
        .enumerate()
        .flat_map(|(r, row)| {
            row.split_whitespace()
                .enumerate()
                .filter(|(_, t)| t.ends_with('*'))
                .map(move |(c, _)| (r, c))
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Published basic-strategy charts, single deck and with replacement,
/// all three visibilities.
pub fn suite_strategy_charts() -> Result<FixtureSuite> {
    let mut checks = Vec::new();
    let single = DeckMode::FiniteDecks(1);
    let replacement = DeckMode::WithReplacement;
    let payout = PayoutSchedule::three_to_two;

    let two_up = config(Visibility::TwoUp, single, payout());
    checks.extend(chart_checks(
        "two-up, single deck",
        &two_up,
        &apply_chart_edits(&TWO_UP_SINGLE_DECK, &[]),
        &starred_cells(&TWO_UP_SINGLE_DECK),
        TWO_UP_EXTRA_ASTERISKS,
    )?);

    // with replacement: hard 15 v hard 10 hits, soft 17 v hard 10
    // stands, soft 16 v soft 13 hits; all asterisks drop
    let two_up_repl_edits = [(11usize, 6usize, "H"), (22, 6, "S"), (21, 18, "H")];
    let two_up_r = config(Visibility::TwoUp, replacement, payout());
    checks.extend(chart_checks(
        "two-up, with replacement",
        &two_up_r,
        &apply_chart_edits(&TWO_UP_SINGLE_DECK, &two_up_repl_edits),
        &[],
        &[],
    )?);

    let one_up = config(Visibility::OneUp, single, payout());
    checks.extend(chart_checks(
        "one-up, single deck",
        &one_up,
        &apply_chart_edits(&ONE_UP_SINGLE_DECK, &[]),
        &starred_cells(&ONE_UP_SINGLE_DECK),
        ONE_UP_EXTRA_ASTERISKS,
    )?);

    // with replacement: hard 16 v 7 and v 10 stand, soft 17 v 5 stands,
    // soft 18 v 9 stands; all asterisks drop
    let one_up_repl_edits = [(12usize, 5usize, "S"), (12, 8, "S"), (22, 3, "S"), (23, 7, "S")];
    let one_up_r = config(Visibility::OneUp, replacement, payout());
    checks.extend(chart_checks(
        "one-up, with replacement",
        &one_up_r,
        &apply_chart_edits(&ONE_UP_SINGLE_DECK, &one_up_repl_edits),
        &[],
        &[],
    )?);

    for deck in [single, replacement] {
        let no_up = config(Visibility::NoUp, deck, payout());
        checks.extend(chart_checks(
            &format!("no-up, {deck}"),
            &no_up,
            &apply_chart_edits(&NO_UP, &[]),
            &[],
            &[],
        )?);
    }

    Ok(FixtureSuite { name: "strategy-charts", checks })
}

/// Run every built-in reference suite.
pub fn run_all() -> Result<Vec<FixtureSuite>> {
    Ok(vec![
        suite_worked_example()?,
        suite_overall_three_to_two()?,
        suite_overall_six_to_five()?,
        suite_overall_replacement()?,
        suite_dealer_rules()?,
        suite_strategy_charts()?,
    ])
}
