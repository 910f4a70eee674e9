//! `hitstand` — exact solver for single-decision Blackjack variants.
//!
//! Exit codes: 0 on success, 1 when `verify-published` finds a fixture
//! mismatch, 2 on usage or configuration errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hitstand::{
    build_strategy_table, cell_evaluate, dealer_rule_sweep, fixtures, parse_bool, parse_deck,
    parse_hand, parse_layout, parse_payout, parse_policy, parse_up_card, parse_visibility,
    rational_round, simulate, solve_overall, stage1_evs, sweep_decks, DealerInfo, DeckMode,
    DeckState, Error, ObservableState, VariantConfig, Visibility,
};
use hitstand::{
    config_summary, deck_sweep_csv, deck_sweep_json_lines, deck_sweep_markdown, overall_csv,
    overall_json_line, overall_markdown, policy_sweep_csv, policy_sweep_json_lines,
    policy_sweep_markdown, sim_json_line, sim_markdown, strategy_csv, strategy_json_lines,
    strategy_markdown,
};

#[derive(Parser)]
#[command(
    name = "hitstand",
    version,
    about = "Exact basic strategy and odds for single-decision Blackjack variants"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Markdown,
    Csv,
    JsonLines,
}

/// Variant selection, shared by every computing subcommand. Flags win
/// over the config file; unset fields fall back to the defaults
/// (two-up, 1 deck, dealer H17, naturals 3:2, peek on).
#[derive(Args)]
struct VariantArgs {
    /// Dealer-card visibility: two-up, one-up, or no-up
    #[arg(long)]
    visibility: Option<String>,

    /// Deck model: a deck count such as 1 or 6, or "replacement"
    #[arg(long)]
    decks: Option<String>,

    /// Dealer rule: h15..h18, s15..s18, always-hit, or always-stand
    #[arg(long)]
    dealer: Option<String>,

    /// Natural payout: 3:2 or 6:5
    #[arg(long)]
    payout: Option<String>,

    /// Resolve dealer naturals before the player acts: true or false
    #[arg(long)]
    peek: Option<String>,

    /// Key=value config file (keys: visibility, decks, dealer, payout, peek)
    #[arg(long, value_name = "PATH")]
    config_file: Option<PathBuf>,
}

/// Same variant selection for subcommands where --dealer already names
/// the dealer's hand; the rule flag is spelled --dealer-rule instead.
#[derive(Args)]
struct VariantArgsRuleFlag {
    /// Dealer-card visibility: two-up, one-up, or no-up
    #[arg(long)]
    visibility: Option<String>,

    /// Deck model: a deck count such as 1 or 6, or "replacement"
    #[arg(long)]
    decks: Option<String>,

    /// Dealer rule: h15..h18, s15..s18, always-hit, or always-stand
    #[arg(long = "dealer-rule")]
    dealer_rule: Option<String>,

    /// Natural payout: 3:2 or 6:5
    #[arg(long)]
    payout: Option<String>,

    /// Resolve dealer naturals before the player acts: true or false
    #[arg(long)]
    peek: Option<String>,

    /// Key=value config file (keys: visibility, decks, dealer, payout, peek)
    #[arg(long, value_name = "PATH")]
    config_file: Option<PathBuf>,
}

impl VariantArgsRuleFlag {
    fn resolve(&self) -> Result<VariantConfig, Error> {
        VariantArgs {
            visibility: self.visibility.clone(),
            decks: self.decks.clone(),
            dealer: self.dealer_rule.clone(),
            payout: self.payout.clone(),
            peek: self.peek.clone(),
            config_file: self.config_file.clone(),
        }
        .resolve()
    }
}

impl VariantArgs {
    fn resolve(&self) -> Result<VariantConfig, Error> {
        let mut from_file: BTreeMap<String, String> = BTreeMap::new();
        if let Some(path) = &self.config_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("{}:{}: expected key=value", path.display(), lineno + 1))
                })?;
                let key = key.trim();
                if !["visibility", "decks", "dealer", "payout", "peek"].contains(&key) {
                    return Err(Error::Parse(format!(
                        "{}:{}: unknown key {key:?}",
                        path.display(),
                        lineno + 1
                    )));
                }
                from_file.insert(key.to_string(), value.trim().to_string());
            }
        }
        let pick = |flag: &Option<String>, key: &str| -> Option<String> {
            flag.clone().or_else(|| from_file.get(key).cloned())
        };

        let mut config = VariantConfig::default();
        if let Some(v) = pick(&self.visibility, "visibility") {
            config.visibility = parse_visibility(&v)?;
        }
        if let Some(v) = pick(&self.decks, "decks") {
            config.deck = parse_deck(&v)?;
        }
        if let Some(v) = pick(&self.dealer, "dealer") {
            config.dealer_policy = parse_policy(&v)?;
        }
        if let Some(v) = pick(&self.payout, "payout") {
            config.payout = parse_payout(&v)?;
        }
        if let Some(v) = pick(&self.peek, "peek") {
            config.peek_on_natural = parse_bool(&v)?;
        }
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the full basic-strategy table for a variant
    Strategy {
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Overall win/tie/loss probabilities and expected payout
    Overall {
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Overall results across every supported dealer rule
    SweepRules {
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Overall results across deck counts, with the with-replacement limit
    SweepDecks {
        #[command(flatten)]
        variant: VariantArgs,
        /// Comma-separated increasing deck counts
        #[arg(long, default_value = "1,2,4,8,16")]
        n_list: String,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Check the pipeline against the built-in published reference values
    #[command(name = "verify-paper", alias = "verify-published")]
    VerifyPublished {
        /// Run a single suite (worked-example, overall-three-to-two,
        /// overall-six-to-five, overall-with-replacement, dealer-rules,
        /// strategy-charts); default runs all
        #[arg(long)]
        suite: Option<String>,
    },
    /// Monte-Carlo cross-check with a seeded RNG
    Simulate {
        #[command(flatten)]
        variant: VariantArgs,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
    /// Exact outcome distribution for one fully known deal
    Stage1 {
        #[command(flatten)]
        variant: VariantArgsRuleFlag,
        /// Player layout, e.g. A,2
        #[arg(long)]
        player: String,
        /// Dealer layout, e.g. 6,8
        #[arg(long)]
        dealer: String,
        /// Decimal places for rounded output
        #[arg(long, default_value_t = 6)]
        precision: usize,
    },
    /// Solve one strategy cell from observable information
    Cell {
        #[command(flatten)]
        variant: VariantArgsRuleFlag,
        /// Player hand, e.g. soft13 or hard14
        #[arg(long)]
        player: String,
        /// Dealer hand for two-up (e.g. hard14) or up card for one-up
        /// (e.g. up6); omit for no-up
        #[arg(long)]
        dealer: Option<String>,
        /// Decimal places for rounded output
        #[arg(long, default_value_t = 6)]
        precision: usize,
    },
}

fn run(cli: Cli) -> Result<i32, Error> {
    match cli.command {
        Command::Strategy { variant, format } => {
            let config = variant.resolve()?;
            let table = build_strategy_table(&config)?;
            print!(
                "{}",
                match format {
                    Format::Markdown => strategy_markdown(&table),
                    Format::Csv => strategy_csv(&table),
                    Format::JsonLines => strategy_json_lines(&table),
                }
            );
        }
        Command::Overall { variant, format } => {
            let config = variant.resolve()?;
            let (_, overall) = solve_overall(&config)?;
            print!(
                "{}",
                match format {
                    Format::Markdown => overall_markdown(&config, &overall),
                    Format::Csv => overall_csv(&config, &overall),
                    Format::JsonLines => overall_json_line(&config, &overall),
                }
            );
        }
        Command::SweepRules { variant, format } => {
            let config = variant.resolve()?;
            let rows = dealer_rule_sweep(config.visibility, config.deck, config.payout.clone())?;
            print!(
                "{}",
                match format {
                    Format::Markdown => policy_sweep_markdown(&config, &rows),
                    Format::Csv => policy_sweep_csv(&rows),
                    Format::JsonLines => policy_sweep_json_lines(&rows),
                }
            );
        }
        Command::SweepDecks { variant, n_list, format } => {
            let config = variant.resolve()?;
            if config.deck == DeckMode::WithReplacement {
                return Err(Error::Parse(
                    "sweep-decks varies finite deck counts; --decks replacement is the \
                     limit itself"
                        .into(),
                ));
            }
            let counts = n_list
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad deck count {t:?} in --n-list")))
                })
                .collect::<Result<Vec<u32>, Error>>()?;
            let sweep = sweep_decks(&config, &counts)?;
            print!(
                "{}",
                match format {
                    Format::Markdown => deck_sweep_markdown(&sweep),
                    Format::Csv => deck_sweep_csv(&sweep),
                    Format::JsonLines => deck_sweep_json_lines(&sweep),
                }
            );
        }
        Command::VerifyPublished { suite } => {
            let suites = fixtures::run_all()?;
            let selected: Vec<_> = match &suite {
                Some(name) => {
                    let found: Vec<_> = suites.into_iter().filter(|s| s.name == name).collect();
                    if found.is_empty() {
                        return Err(Error::Parse(format!("unknown suite {name:?}")));
                    }
                    found
                }
                None => suites,
            };
            let mut failures = 0usize;
            let mut total = 0usize;
            for suite in &selected {
                println!("suite {}", suite.name);
                for check in &suite.checks {
                    total += 1;
                    if check.passed {
                        println!("  pass  {}", check.name);
                    } else {
                        failures += 1;
                        println!(
                            "  FAIL  {}: expected {}, got {} (tolerance {})",
                            check.name, check.expected, check.actual, check.tolerance
                        );
                    }
                }
            }
            println!(
                "{} checks, {} failed",
                total, failures
            );
            if failures > 0 {
                return Ok(1);
            }
        }
        Command::Simulate { variant, trials, seed, format } => {
            let config = variant.resolve()?;
            let table = build_strategy_table(&config)?;
            let report = simulate(&config, &table, trials, seed)?;
            print!(
                "{}",
                match format {
                    Format::Markdown | Format::Csv => sim_markdown(&config, &report),
                    Format::JsonLines => sim_json_line(&config, &report),
                }
            );
        }
        Command::Stage1 { variant, player, dealer, precision } => {
            let config = variant.resolve()?;
            let player = parse_layout(&player)?;
            let dealer = parse_layout(&dealer)?;
            let deck = DeckState::fresh(config.deck)?;
            let result = stage1_evs(player, dealer, &deck, config.dealer_policy)?;
            let mut out = String::new();
            let _ = writeln!(out, "Stage 1: player {player} v dealer {dealer} ({})", config_summary(&config));
            let _ = writeln!(out);
            let _ = writeln!(out, "| action | P(win) | P(tie) | P(loss) | EV exact | EV decimal |");
            let _ = writeln!(out, "| --- | --- | --- | --- | --- | --- |");
            for (name, triple, ev) in [
                ("stand", &result.stand, &result.ev_stand),
                ("hit", &result.hit, &result.ev_hit),
            ] {
                let _ = writeln!(
                    out,
                    "| {name} | {} | {} | {} | {} | {} |",
                    triple.win, triple.tie, triple.loss, ev,
                    rational_round(ev, precision as u32),
                );
            }
            print!("{out}");
        }
        Command::Cell { variant, player, dealer, precision } => {
            let config = variant.resolve()?;
            let player = parse_hand(&player)?;
            let dealer_info = match (config.visibility, dealer.as_deref()) {
                (Visibility::TwoUp, Some(d)) => DealerInfo::BothCards(parse_hand(d)?),
                (Visibility::OneUp, Some(d)) => DealerInfo::UpCard(parse_up_card(d)?),
                (Visibility::NoUp, None) => DealerInfo::Nothing,
                (Visibility::NoUp, Some(_)) => {
                    return Err(Error::Parse("no-up cells take no --dealer".into()))
                }
                (v, None) => {
                    return Err(Error::Parse(format!("{v} cells need --dealer")))
                }
            };
            let observable = ObservableState { player, dealer_info };
            let cell = cell_evaluate(&observable, &config)?;
            let mut out = String::new();
            let _ = writeln!(out, "Cell {observable} ({})", config_summary(&config));
            let _ = writeln!(out);
            let _ = writeln!(out, "| quantity | exact | decimal |");
            let _ = writeln!(out, "| --- | --- | --- |");
            let _ = writeln!(out, "| EV(hit) | {} | {} |", cell.ev_hit, rational_round(&cell.ev_hit, precision as u32));
            let _ = writeln!(out, "| EV(stand) | {} | {} |", cell.ev_stand, rational_round(&cell.ev_stand, precision as u32));
            let _ = writeln!(out, "| decision | {}{} | |", cell.decision, if cell.asterisk { "*" } else { "" });
            let _ = writeln!(out, "| P(observable) | {} | {} |", cell.mass, rational_round(&cell.mass, precision as u32));
            let _ = writeln!(
                out,
                "| hit W/T/L | {} / {} / {} | {} / {} / {} |",
                cell.hit_triple.win, cell.hit_triple.tie, cell.hit_triple.loss,
                rational_round(&cell.hit_triple.win, precision as u32),
                rational_round(&cell.hit_triple.tie, precision as u32),
                rational_round(&cell.hit_triple.loss, precision as u32),
            );
            let _ = writeln!(
                out,
                "| stand W/T/L | {} / {} / {} | {} / {} / {} |",
                cell.stand_triple.win, cell.stand_triple.tie, cell.stand_triple.loss,
                rational_round(&cell.stand_triple.win, precision as u32),
                rational_round(&cell.stand_triple.tie, precision as u32),
                rational_round(&cell.stand_triple.loss, precision as u32),
            );
            print!("{out}");
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
