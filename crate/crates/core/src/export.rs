//! Renderers for the pipeline's outputs: strategy tables and overall
//! metrics as markdown, CSV, or JSON lines, plus a CSV reader for
//! round-tripping strategy tables.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::json;

use crate::asymptotics::DeckSweep;
use crate::cards::{DealerPolicy, PayoutSchedule, VariantConfig};
use crate::error::{Error, Result};
use crate::rational::{rational_round, to_f64, Rational};
use crate::simulate::SimReport;
use crate::stage2::{CellKey, Decision, InfoKey, PlayerKey, StrategyTable};
use crate::stage3::OverallResult;

/// "3:2"-style payout text.
pub fn payout_text(payout: &PayoutSchedule) -> String {
    let m = payout.natural_multiplier();
    format!("{}:{}", m.numer(), m.denom())
}

/// One-line variant description used in headers.
pub fn config_summary(config: &VariantConfig) -> String {
    format!(
        "{}, {}, dealer {}, naturals {}, peek {}",
        config.visibility,
        config.deck,
        config.dealer_policy,
        payout_text(&config.payout),
        if config.peek_on_natural { "on" } else { "off" }
    )
}

fn mark(decision: Decision, asterisk: bool) -> String {
    if asterisk {
        format!("{decision}*")
    } else {
        decision.to_string()
    }
}

fn compact_player(key: &PlayerKey) -> String {
    format!("{}{}", if key.soft { "soft" } else { "hard" }, key.total)
}

fn compact_info(key: &InfoKey) -> String {
    match key {
        InfoKey::Both { soft, total } => {
            format!("{}{total}", if *soft { "soft" } else { "hard" })
        }
        InfoKey::Up(col) => format!("up{col}"),
        InfoKey::Unseen => "-".into(),
    }
}

fn column_keys(table: &StrategyTable) -> Vec<InfoKey> {
    let mut cols: Vec<InfoKey> = Vec::new();
    for ((_, info), _) in table.cells() {
        if !cols.contains(info) {
            cols.push(*info);
        }
    }
    cols.sort();
    cols
}

fn row_keys(table: &StrategyTable) -> Vec<PlayerKey> {
    let mut rows: Vec<PlayerKey> = Vec::new();
    for ((player, _), _) in table.cells() {
        if !rows.contains(player) {
            rows.push(*player);
        }
    }
    rows.sort_by_key(|k| (k.soft, k.total));
    rows
}

/// Strategy grid as a markdown table: player states down, dealer
/// information across, H/S decisions with `*` marking composition-
/// sensitive cells.
pub fn strategy_markdown(table: &StrategyTable) -> String {
    let cols = column_keys(table);
    let rows = row_keys(table);
    let mut out = String::new();
    let _ = writeln!(out, "Basic strategy ({})", config_summary(table.config()));
    let _ = writeln!(out);
    let mut header = String::from("| player |");
    let mut rule = String::from("| --- |");
    for col in &cols {
        let _ = write!(header, " {col} |");
        rule.push_str(" --- |");
    }
    out.push_str(&header);
    out.push('\n');
    out.push_str(&rule);
    out.push('\n');
    for row in &rows {
        let _ = write!(out, "| {row} |");
        for col in &cols {
            match table.get(&(*row, *col)) {
                Some(cell) => {
                    let _ = write!(out, " {} |", mark(cell.decision, cell.asterisk));
                }
                None => out.push_str("  |"),
            }
        }
        out.push('\n');
    }
    out
}

/// Strategy table as CSV with exact rational EVs. Parsed back by
/// [`parse_strategy_csv`].
pub fn strategy_csv(table: &StrategyTable) -> String {
    let mut out = String::from("player,dealer,decision,asterisk,ev_hit,ev_stand\n");
    for ((player, info), cell) in table.cells() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            compact_player(player),
            compact_info(info),
            cell.decision,
            cell.asterisk,
            cell.ev_hit,
            cell.ev_stand
        );
    }
    out
}

/// One parsed strategy-CSV row.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvCell {
    pub key: CellKey,
    pub decision: Decision,
    pub asterisk: bool,
    pub ev_hit: Rational,
    pub ev_stand: Rational,
}

fn parse_player_key(s: &str) -> Result<PlayerKey> {
    let hand = crate::parse::parse_hand(s)?;
    Ok(PlayerKey::from(hand))
}

fn parse_info_key(s: &str) -> Result<InfoKey> {
    if s == "-" {
        return Ok(InfoKey::Unseen);
    }
    if let Some(rest) = s.strip_prefix("up") {
        let col: u8 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad up-card column {s:?}")))?;
        if !(2..=11).contains(&col) {
            return Err(Error::Parse(format!("bad up-card column {s:?}")));
        }
        return Ok(InfoKey::Up(col));
    }
    let hand = crate::parse::parse_hand(s)?;
    Ok(InfoKey::Both { soft: hand.is_soft(), total: hand.total() })
}

fn parse_rational(s: &str) -> Result<Rational> {
    Rational::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
}

/// Read back [`strategy_csv`] output.
pub fn parse_strategy_csv(text: &str) -> Result<Vec<CsvCell>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("player,dealer,decision,asterisk,ev_hit,ev_stand") => {}
        other => {
            return Err(Error::Parse(format!("bad strategy CSV header {other:?}")));
        }
    }
    let mut out = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse(format!("bad strategy CSV row {line:?}")));
        }
        let decision = match fields[2] {
            "H" => Decision::Hit,
            "S" => Decision::Stand,
            other => return Err(Error::Parse(format!("bad decision {other:?}"))),
        };
        let asterisk = crate::parse::parse_bool(fields[3])?;
        out.push(CsvCell {
            key: (parse_player_key(fields[0])?, parse_info_key(fields[1])?),
            decision,
            asterisk,
            ev_hit: parse_rational(fields[4])?,
            ev_stand: parse_rational(fields[5])?,
        });
    }
    Ok(out)
}

/// Strategy table as JSON lines, one object per cell, with both exact
/// rationals and rounded decimals.
pub fn strategy_json_lines(table: &StrategyTable) -> String {
    let mut out = String::new();
    for ((player, info), cell) in table.cells() {
        let line = json!({
            "player": compact_player(player),
            "dealer": compact_info(info),
            "decision": cell.decision.to_string(),
            "asterisk": cell.asterisk,
            "ev_hit": cell.ev_hit.to_string(),
            "ev_stand": cell.ev_stand.to_string(),
            "ev_hit_decimal": to_f64(&cell.ev_hit),
            "ev_stand_decimal": to_f64(&cell.ev_stand),
            "mass": cell.mass.to_string(),
        });
        let _ = writeln!(out, "{line}");
    }
    out
}

fn overall_fields(overall: &OverallResult) -> [(&'static str, &Rational); 7] {
    [
        ("P(win)", &overall.win),
        ("P(tie)", &overall.tie),
        ("P(loss)", &overall.loss),
        ("E[payout]", &overall.ev),
        ("P(player natural only)", &overall.player_natural),
        ("P(dealer natural only)", &overall.dealer_natural),
        ("P(both natural)", &overall.both_natural),
    ]
}

/// Overall metrics as a small markdown table.
pub fn overall_markdown(config: &VariantConfig, overall: &OverallResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Overall metrics ({})", config_summary(config));
    let _ = writeln!(out);
    let _ = writeln!(out, "| quantity | exact | decimal |");
    let _ = writeln!(out, "| --- | --- | --- |");
    for (name, value) in overall_fields(overall) {
        let _ = writeln!(out, "| {name} | {value} | {} |", rational_round(value, 6));
    }
    out
}

/// Overall metrics as a single CSV record.
pub fn overall_csv(config: &VariantConfig, overall: &OverallResult) -> String {
    let mut out = String::from(
        "visibility,deck,dealer,payout,peek,p_win,p_tie,p_loss,ev,p_player_natural,p_dealer_natural,p_both_natural\n",
    );
    let _ = writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        config.visibility,
        config.deck,
        config.dealer_policy,
        payout_text(&config.payout),
        config.peek_on_natural,
        rational_round(&overall.win, 6),
        rational_round(&overall.tie, 6),
        rational_round(&overall.loss, 6),
        rational_round(&overall.ev, 6),
        rational_round(&overall.player_natural, 6),
        rational_round(&overall.dealer_natural, 6),
        rational_round(&overall.both_natural, 6),
    );
    out
}

fn overall_json(config: &VariantConfig, overall: &OverallResult) -> serde_json::Value {
    json!({
        "visibility": config.visibility.to_string(),
        "deck": config.deck.to_string(),
        "dealer": config.dealer_policy.to_string(),
        "payout": payout_text(&config.payout),
        "peek": config.peek_on_natural,
        "p_win": overall.win.to_string(),
        "p_tie": overall.tie.to_string(),
        "p_loss": overall.loss.to_string(),
        "ev": overall.ev.to_string(),
        "p_win_decimal": to_f64(&overall.win),
        "p_tie_decimal": to_f64(&overall.tie),
        "p_loss_decimal": to_f64(&overall.loss),
        "ev_decimal": to_f64(&overall.ev),
    })
}

/// Overall metrics as one JSON line.
pub fn overall_json_line(config: &VariantConfig, overall: &OverallResult) -> String {
    format!("{}\n", overall_json(config, overall))
}

/// Dealer-rule sweep as a markdown table, one row per rule.
pub fn policy_sweep_markdown(
    config: &VariantConfig,
    rows: &[(DealerPolicy, OverallResult)],
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Dealer-rule sweep ({})", config_summary(config));
    let _ = writeln!(out);
    let _ = writeln!(out, "| dealer rule | P(win) | P(tie) | P(loss) | E[payout] |");
    let _ = writeln!(out, "| --- | --- | --- | --- | --- |");
    for (policy, overall) in rows {
        let _ = writeln!(
            out,
            "| {policy} | {} | {} | {} | {} |",
            rational_round(&overall.win, 6),
            rational_round(&overall.tie, 6),
            rational_round(&overall.loss, 6),
            rational_round(&overall.ev, 6),
        );
    }
    out
}

/// Dealer-rule sweep as CSV.
pub fn policy_sweep_csv(rows: &[(DealerPolicy, OverallResult)]) -> String {
    let mut out = String::from("dealer,p_win,p_tie,p_loss,ev\n");
    for (policy, overall) in rows {
        let _ = writeln!(
            out,
            "{policy},{},{},{},{}",
            rational_round(&overall.win, 6),
            rational_round(&overall.tie, 6),
            rational_round(&overall.loss, 6),
            rational_round(&overall.ev, 6),
        );
    }
    out
}

/// Dealer-rule sweep as JSON lines.
pub fn policy_sweep_json_lines(rows: &[(DealerPolicy, OverallResult)]) -> String {
    let mut out = String::new();
    for (policy, overall) in rows {
        let line = json!({
            "dealer": policy.to_string(),
            "p_win": overall.win.to_string(),
            "p_tie": overall.tie.to_string(),
            "p_loss": overall.loss.to_string(),
            "ev": overall.ev.to_string(),
            "ev_decimal": to_f64(&overall.ev),
        });
        let _ = writeln!(out, "{line}");
    }
    out
}

/// Deck-count sweep as markdown: metrics per shoe size, the replacement
/// limit, and gap sizes.
pub fn deck_sweep_markdown(sweep: &DeckSweep) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Deck sweep ({}, {}, naturals {}, peek {})",
        sweep.config.visibility,
        sweep.config.dealer_policy,
        payout_text(&sweep.config.payout),
        if sweep.config.peek_on_natural { "on" } else { "off" }
    );
    let _ = writeln!(out);
    let _ = writeln!(out, "| decks | P(win) | P(tie) | P(loss) | E[payout] | |E[payout] gap| |");
    let _ = writeln!(out, "| --- | --- | --- | --- | --- | --- |");
    let ev_report = &sweep.reports[3];
    for (i, (n, overall)) in sweep.per_n.iter().enumerate() {
        let _ = writeln!(
            out,
            "| {n} | {} | {} | {} | {} | {} |",
            rational_round(&overall.win, 6),
            rational_round(&overall.tie, 6),
            rational_round(&overall.loss, 6),
            rational_round(&overall.ev, 6),
            rational_round(&ev_report.samples[i].2, 8),
        );
    }
    let _ = writeln!(
        out,
        "| limit | {} | {} | {} | {} | 0 |",
        rational_round(&sweep.limit.win, 6),
        rational_round(&sweep.limit.tie, 6),
        rational_round(&sweep.limit.loss, 6),
        rational_round(&sweep.limit.ev, 6),
    );
    let _ = writeln!(out);
    match sweep.strategy_stabilized_at {
        Some(n) => {
            let _ = writeln!(out, "Strategy matches the with-replacement table from {n} deck(s) on.");
        }
        None => {
            let _ = writeln!(out, "Strategy still differs from the with-replacement table at the largest swept size.");
        }
    }
    out
}

/// Deck-count sweep as CSV (the final row is the replacement limit).
pub fn deck_sweep_csv(sweep: &DeckSweep) -> String {
    let mut out = String::from("decks,p_win,p_tie,p_loss,ev\n");
    for (n, overall) in &sweep.per_n {
        let _ = writeln!(
            out,
            "{n},{},{},{},{}",
            rational_round(&overall.win, 6),
            rational_round(&overall.tie, 6),
            rational_round(&overall.loss, 6),
            rational_round(&overall.ev, 6),
        );
    }
    let _ = writeln!(
        out,
        "limit,{},{},{},{}",
        rational_round(&sweep.limit.win, 6),
        rational_round(&sweep.limit.tie, 6),
        rational_round(&sweep.limit.loss, 6),
        rational_round(&sweep.limit.ev, 6),
    );
    out
}

/// Deck-count sweep as JSON lines (the final line is the limit).
pub fn deck_sweep_json_lines(sweep: &DeckSweep) -> String {
    let mut out = String::new();
    let ev_report = &sweep.reports[3];
    for (i, (n, overall)) in sweep.per_n.iter().enumerate() {
        let line = json!({
            "decks": n,
            "p_win": overall.win.to_string(),
            "p_tie": overall.tie.to_string(),
            "p_loss": overall.loss.to_string(),
            "ev": overall.ev.to_string(),
            "ev_decimal": to_f64(&overall.ev),
            "ev_gap_decimal": to_f64(&ev_report.samples[i].2),
        });
        let _ = writeln!(out, "{line}");
    }
    let line = json!({
        "decks": "limit",
        "p_win": sweep.limit.win.to_string(),
        "p_tie": sweep.limit.tie.to_string(),
        "p_loss": sweep.limit.loss.to_string(),
        "ev": sweep.limit.ev.to_string(),
        "ev_decimal": to_f64(&sweep.limit.ev),
        "ev_gap_decimal": 0.0,
    });
    let _ = writeln!(out, "{line}");
    out
}

/// Simulation report as markdown.
pub fn sim_markdown(config: &VariantConfig, report: &SimReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Simulation ({})", config_summary(config));
    let _ = writeln!(out);
    let _ = writeln!(out, "| quantity | value |");
    let _ = writeln!(out, "| --- | --- |");
    let _ = writeln!(out, "| trials | {} |", report.trials);
    let _ = writeln!(out, "| seed | {} ({}) |", report.seed, report.rng);
    let _ = writeln!(out, "| wins | {} ({:.6}) |", report.wins, report.win_rate());
    let _ = writeln!(out, "| ties | {} ({:.6}) |", report.ties, report.tie_rate());
    let _ = writeln!(out, "| losses | {} ({:.6}) |", report.losses, report.loss_rate());
    let _ = writeln!(out, "| mean payout | {:.6} |", report.mean_payout);
    let _ = writeln!(out, "| std error | {:.6} |", report.std_error);
    out
}

/// Simulation report as one JSON line.
pub fn sim_json_line(config: &VariantConfig, report: &SimReport) -> String {
    let line = json!({
        "visibility": config.visibility.to_string(),
        "deck": config.deck.to_string(),
        "dealer": config.dealer_policy.to_string(),
        "payout": payout_text(&config.payout),
        "trials": report.trials,
        "seed": report.seed,
        "rng": report.rng,
        "wins": report.wins,
        "ties": report.ties,
        "losses": report.losses,
        "mean_payout": report.mean_payout,
        "std_error": report.std_error,
    });
    format!("{line}\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::sweep_decks;
    use crate::cards::Visibility;
    use crate::stage2::build_strategy_table;
    use crate::stage3::{dealer_rule_sweep, solve_overall};

    #[test]
    fn strategy_csv_round_trips() {
        let config = VariantConfig {
            visibility: Visibility::OneUp,
            ..VariantConfig::default()
        };
        let table = build_strategy_table(&config).unwrap();
        let csv = strategy_csv(&table);
        let cells = parse_strategy_csv(&csv).unwrap();
        assert_eq!(cells.len(), table.len());
        for parsed in &cells {
            let cell = table.get(&parsed.key).unwrap();
            assert_eq!(parsed.decision, cell.decision);
            assert_eq!(parsed.asterisk, cell.asterisk);
            assert_eq!(parsed.ev_hit, cell.ev_hit);
            assert_eq!(parsed.ev_stand, cell.ev_stand);
        }
        assert!(parse_strategy_csv("nope\n").is_err());
        assert!(parse_strategy_csv(
            "player,dealer,decision,asterisk,ev_hit,ev_stand\nhard14,up2,X,false,0,0\n"
        )
        .is_err());
    }

    #[test]
    fn markdown_grid_has_all_rows_and_columns() {
        let config = VariantConfig::default();
        let table = build_strategy_table(&config).unwrap();
        let md = strategy_markdown(&table);
        let lines: Vec<&str> = md.lines().collect();
        // title, blank, header, rule, 26 rows
        assert_eq!(lines.len(), 4 + 26);
        assert!(lines[2].starts_with("| player | hard 4 |"));
        assert!(lines[2].contains("| soft 20 |"));
        assert!(md.contains("| hard 12 |"));
        // the composition-sensitive hard 12 v hard 14 cell keeps its star
        let hard12 = lines.iter().find(|l| l.starts_with("| hard 12 |")).unwrap();
        assert!(hard12.contains(" H* |"));
    }

    #[test]
    fn overall_renderers_agree_on_the_numbers() {
        let config = VariantConfig::default();
        let (_, overall) = solve_overall(&config).unwrap();
        let md = overall_markdown(&config, &overall);
        assert!(md.contains("0.047781"));
        assert!(md.contains("two-up, 1-deck, dealer H17, naturals 3:2, peek on"));
        let csv = overall_csv(&config, &overall);
        assert!(csv.lines().nth(1).unwrap().contains("0.047781"));
        let line = overall_json_line(&config, &overall);
        let parsed: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(parsed["payout"], "3:2");
        assert_eq!(rational_round(&overall.ev, 6), "0.047781");
    }

    #[test]
    fn sweep_renderers_cover_all_rows() {
        let config = VariantConfig {
            visibility: Visibility::NoUp,
            ..VariantConfig::default()
        };
        let rows = dealer_rule_sweep(config.visibility, config.deck, config.payout.clone()).unwrap();
        let md = policy_sweep_markdown(&config, &rows);
        assert_eq!(md.lines().count(), 4 + rows.len());
        assert!(md.contains("| always-hit |"));
        let csv = policy_sweep_csv(&rows);
        assert_eq!(csv.lines().count(), 1 + rows.len());
        let jsonl = policy_sweep_json_lines(&rows);
        assert_eq!(jsonl.lines().count(), rows.len());

        let sweep = sweep_decks(&config, &[1, 2]).unwrap();
        let md = deck_sweep_markdown(&sweep);
        assert!(md.contains("| limit |"));
        assert!(md.contains("from 1 deck(s) on"));
        let csv = deck_sweep_csv(&sweep);
        assert_eq!(csv.lines().count(), 1 + 2 + 1);
        let jsonl = deck_sweep_json_lines(&sweep);
        assert_eq!(jsonl.lines().count(), 3);
        let last: serde_json::Value =
            serde_json::from_str(jsonl.lines().last().unwrap()).unwrap();
        assert_eq!(last["decks"], "limit");
    }

    #[test]
    fn sim_renderers_are_well_formed() {
        let config = VariantConfig::default();
        let table = build_strategy_table(&config).unwrap();
        let report = crate::simulate::simulate(&config, &table, 500, 1).unwrap();
        let md = sim_markdown(&config, &report);
        assert!(md.contains("| trials | 500 |"));
        assert!(md.contains("chacha8"));
        let line = sim_json_line(&config, &report);
        let parsed: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
        assert_eq!(parsed["trials"], 500);
        assert_eq!(parsed["rng"], "chacha8");
    }
}
