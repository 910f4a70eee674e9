//! Python bindings for the exact single-decision Blackjack solver.
//!
//! Every entry point takes the variant as keyword strings matching the
//! CLI flags (visibility, decks, dealer, payout, peek) and returns
//! plain dicts with exact fraction strings alongside float decimals.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use hitstand::rational::to_f64;
use hitstand::stage2::cell_key;
use hitstand::{
    build_strategy_table as core_build_table, cell_evaluate, config_summary, parse_deck, parse_hand, parse_layout, parse_payout, parse_policy, parse_up_card,
    parse_visibility, simulate as core_simulate, solve_overall, stage1_evs,
    strategy_csv, strategy_json_lines, strategy_markdown, sweep_decks as core_sweep_decks,
    DealerInfo, DeckState, Error, ObservableState, OverallResult, Rational,
    StrategyTable as CoreTable, VariantConfig, Visibility,
};

fn py_err(err: Error) -> PyErr {
    PyValueError::new_err(err.to_string())
}

fn config_from(
    visibility: &str,
    decks: &str,
    dealer: &str,
    payout: &str,
    peek: bool,
) -> PyResult<VariantConfig> {
    Ok(VariantConfig {
        visibility: parse_visibility(visibility).map_err(py_err)?,
        deck: parse_deck(decks).map_err(py_err)?,
        dealer_policy: parse_policy(dealer).map_err(py_err)?,
        payout: parse_payout(payout).map_err(py_err)?,
        peek_on_natural: peek,
    })
}

fn set_rational(dict: &Bound<'_, PyDict>, key: &str, value: &Rational) -> PyResult<()> {
    dict.set_item(key, value.to_string())?;
    dict.set_item(format!("{key}_decimal"), to_f64(value))
}

fn observable_from(
    config: &VariantConfig,
    player: &str,
    dealer: Option<&str>,
) -> PyResult<ObservableState> {
    let player = parse_hand(player).map_err(py_err)?;
    let dealer_info = match (config.visibility, dealer) {
        (Visibility::TwoUp, Some(d)) => DealerInfo::BothCards(parse_hand(d).map_err(py_err)?),
        (Visibility::OneUp, Some(d)) => DealerInfo::UpCard(parse_up_card(d).map_err(py_err)?),
        (Visibility::NoUp, None) => DealerInfo::Nothing,
        (Visibility::NoUp, Some(_)) => {
            return Err(PyValueError::new_err("no-up cells take no dealer argument"))
        }
        (v, None) => return Err(PyValueError::new_err(format!("{v} cells need a dealer"))),
    };
    Ok(ObservableState { player, dealer_info })
}

fn overall_dict<'py>(
    py: Python<'py>,
    config: &VariantConfig,
    overall: &OverallResult,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("variant", config_summary(config))?;
    set_rational(&d, "p_win", &overall.win)?;
    set_rational(&d, "p_tie", &overall.tie)?;
    set_rational(&d, "p_loss", &overall.loss)?;
    set_rational(&d, "ev", &overall.ev)?;
    set_rational(&d, "p_player_natural", &overall.player_natural)?;
    set_rational(&d, "p_dealer_natural", &overall.dealer_natural)?;
    set_rational(&d, "p_both_natural", &overall.both_natural)?;
    Ok(d)
}

/// A solved basic-strategy table.
#[pyclass(name = "StrategyTable", frozen)]
struct PyStrategyTable {
    inner: CoreTable,
}

#[pymethods]
impl PyStrategyTable {
    /// One-line description of the variant this table solves.
    fn variant(&self) -> String {
        config_summary(self.inner.config())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// "H" or "S" for an observable state (dealer: hand like "hard14"
    /// for two-up, up-card like "up6" for one-up, omitted for no-up).
    #[pyo3(signature = (player, dealer=None))]
    fn decision(&self, player: &str, dealer: Option<&str>) -> PyResult<String> {
        let observable = observable_from(self.inner.config(), player, dealer)?;
        Ok(self.inner.decision(&observable).map_err(py_err)?.to_string())
    }

    /// Full cell detail for an observable state.
    #[pyo3(signature = (player, dealer=None))]
    fn cell<'py>(
        &self,
        py: Python<'py>,
        player: &str,
        dealer: Option<&str>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let observable = observable_from(self.inner.config(), player, dealer)?;
        let key = cell_key(&observable);
        let cell = self
            .inner
            .get(&key)
            .ok_or_else(|| PyValueError::new_err(format!("no cell for {observable}")))?;
        let d = PyDict::new(py);
        d.set_item("player", key.0.to_string())?;
        d.set_item("dealer", key.1.to_string())?;
        d.set_item("decision", cell.decision.to_string())?;
        d.set_item("asterisk", cell.asterisk)?;
        set_rational(&d, "ev_hit", &cell.ev_hit)?;
        set_rational(&d, "ev_stand", &cell.ev_stand)?;
        set_rational(&d, "mass", &cell.mass)?;
        Ok(d)
    }

    /// Every cell as a list of dicts, in canonical order.
    fn cells<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let out = PyList::empty(py);
        for ((player, info), cell) in self.inner.cells() {
            let d = PyDict::new(py);
            d.set_item("player", player.to_string())?;
            d.set_item("dealer", info.to_string())?;
            d.set_item("decision", cell.decision.to_string())?;
            d.set_item("asterisk", cell.asterisk)?;
            set_rational(&d, "ev_hit", &cell.ev_hit)?;
            set_rational(&d, "ev_stand", &cell.ev_stand)?;
            out.append(d)?;
        }
        Ok(out)
    }

    fn markdown(&self) -> String {
        strategy_markdown(&self.inner)
    }

    fn csv(&self) -> String {
        strategy_csv(&self.inner)
    }

    fn json_lines(&self) -> String {
        strategy_json_lines(&self.inner)
    }
}

/// Solve the full basic-strategy table for a variant.
#[pyfunction]
#[pyo3(signature = (visibility="two-up", decks="1", dealer="h17", payout="3:2", peek=true))]
fn build_strategy_table(
    visibility: &str,
    decks: &str,
    dealer: &str,
    payout: &str,
    peek: bool,
) -> PyResult<PyStrategyTable> {
    let config = config_from(visibility, decks, dealer, payout, peek)?;
    Ok(PyStrategyTable { inner: core_build_table(&config).map_err(py_err)? })
}

/// Exact stand/hit outcome distribution for one fully known deal.
#[pyfunction]
#[pyo3(signature = (player, dealer, decks="1", dealer_rule="h17"))]
fn stage1<'py>(
    py: Python<'py>,
    player: &str,
    dealer: &str,
    decks: &str,
    dealer_rule: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let player = parse_layout(player).map_err(py_err)?;
    let dealer = parse_layout(dealer).map_err(py_err)?;
    let deck = DeckState::fresh(parse_deck(decks).map_err(py_err)?).map_err(py_err)?;
    let policy = parse_policy(dealer_rule).map_err(py_err)?;
    let result = stage1_evs(player, dealer, &deck, policy).map_err(py_err)?;
    let d = PyDict::new(py);
    for (action, triple, ev) in [
        ("stand", &result.stand, &result.ev_stand),
        ("hit", &result.hit, &result.ev_hit),
    ] {
        let a = PyDict::new(py);
        set_rational(&a, "p_win", &triple.win)?;
        set_rational(&a, "p_tie", &triple.tie)?;
        set_rational(&a, "p_loss", &triple.loss)?;
        set_rational(&a, "ev", ev)?;
        d.set_item(action, a)?;
    }
    Ok(d)
}

/// Solve one strategy cell from observable information.
#[pyfunction]
#[pyo3(signature = (player, dealer=None, visibility="two-up", decks="1", dealer_rule="h17", payout="3:2", peek=true))]
#[allow(clippy::too_many_arguments)]
fn cell<'py>(
    py: Python<'py>,
    player: &str,
    dealer: Option<&str>,
    visibility: &str,
    decks: &str,
    dealer_rule: &str,
    payout: &str,
    peek: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = config_from(visibility, decks, dealer_rule, payout, peek)?;
    let observable = observable_from(&config, player, dealer)?;
    let result = cell_evaluate(&observable, &config).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("observable", observable.to_string())?;
    d.set_item("decision", result.decision.to_string())?;
    d.set_item("asterisk", result.asterisk)?;
    set_rational(&d, "ev_hit", &result.ev_hit)?;
    set_rational(&d, "ev_stand", &result.ev_stand)?;
    set_rational(&d, "mass", &result.mass)?;
    Ok(d)
}

/// Overall win/tie/loss probabilities and expected payout.
#[pyfunction]
#[pyo3(signature = (visibility="two-up", decks="1", dealer="h17", payout="3:2", peek=true))]
fn overall<'py>(
    py: Python<'py>,
    visibility: &str,
    decks: &str,
    dealer: &str,
    payout: &str,
    peek: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = config_from(visibility, decks, dealer, payout, peek)?;
    let (_, result) = solve_overall(&config).map_err(py_err)?;
    overall_dict(py, &config, &result)
}

/// Seeded Monte-Carlo cross-check playing the derived basic strategy.
#[pyfunction]
#[pyo3(signature = (trials=100_000, seed=0, visibility="two-up", decks="1", dealer="h17", payout="3:2", peek=true))]
#[allow(clippy::too_many_arguments)]
fn simulate<'py>(
    py: Python<'py>,
    trials: u64,
    seed: u64,
    visibility: &str,
    decks: &str,
    dealer: &str,
    payout: &str,
    peek: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = config_from(visibility, decks, dealer, payout, peek)?;
    let table = core_build_table(&config).map_err(py_err)?;
    let report = core_simulate(&config, &table, trials, seed).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("trials", report.trials)?;
    d.set_item("seed", report.seed)?;
    d.set_item("rng", report.rng)?;
    d.set_item("wins", report.wins)?;
    d.set_item("ties", report.ties)?;
    d.set_item("losses", report.losses)?;
    d.set_item("mean_payout", report.mean_payout)?;
    d.set_item("std_error", report.std_error)?;
    Ok(d)
}

/// Overall metrics across deck counts plus the with-replacement limit.
#[pyfunction]
#[pyo3(signature = (n_list, visibility="two-up", dealer="h17", payout="3:2", peek=true))]
fn sweep_decks<'py>(
    py: Python<'py>,
    n_list: Vec<u32>,
    visibility: &str,
    dealer: &str,
    payout: &str,
    peek: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let config = config_from(visibility, "1", dealer, payout, peek)?;
    let sweep = core_sweep_decks(&config, &n_list).map_err(py_err)?;
    let d = PyDict::new(py);
    let rows = PyList::empty(py);
    for (n, result) in &sweep.per_n {
        let row = overall_dict(py, &config, result)?;
        row.set_item("decks", n)?;
        rows.append(row)?;
    }
    d.set_item("per_n", rows)?;
    let limit_config = VariantConfig {
        deck: hitstand::DeckMode::WithReplacement,
        ..config.clone()
    };
    d.set_item("limit", overall_dict(py, &limit_config, &sweep.limit)?)?;
    d.set_item("strategy_stabilized_at", sweep.strategy_stabilized_at)?;
    Ok(d)
}

#[pymodule]
fn hitstand_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyStrategyTable>()?;
    m.add_function(wrap_pyfunction!(build_strategy_table, m)?)?;
    m.add_function(wrap_pyfunction!(stage1, m)?)?;
    m.add_function(wrap_pyfunction!(cell, m)?)?;
    m.add_function(wrap_pyfunction!(overall, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_decks, m)?)?;
    Ok(())
}
