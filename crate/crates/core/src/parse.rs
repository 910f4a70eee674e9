//! Text forms shared by the command line and bindings: hand states
//! ("hard14", "soft13"), cards ("A", "10"), layouts ("A,2"), up cards
//! ("up10", "upA"), dealer rules ("h17", "always-stand"), deck models
//! ("1", "replacement"), payouts ("3:2"), and visibility ("one-up").

use crate::cards::{
    CardValue, DealerPolicy, DeckMode, HandLayout, HandState, PayoutSchedule, Visibility,
};
use crate::error::{Error, Result};

fn parse_err(what: &str, input: &str, expected: &str) -> Error {
    Error::Parse(format!("bad {what} {input:?}: expected {expected}"))
}

/// Parse a card value: "A"/"a"/"1" for the ace, "2".."10" otherwise
/// (face cards are all value ten and written "10").
pub fn parse_card(input: &str) -> Result<CardValue> {
    let s = input.trim();
    if s.eq_ignore_ascii_case("a") {
        return Ok(CardValue::ACE);
    }
    s.parse::<u8>()
        .ok()
        .and_then(|v| CardValue::new(v).ok())
        .ok_or_else(|| parse_err("card", input, "A or 2..10"))
}

/// Parse a two-card layout such as "A,2" or "10,6".
pub fn parse_layout(input: &str) -> Result<HandLayout> {
    let (a, b) = input
        .split_once(',')
        .ok_or_else(|| parse_err("layout", input, "two cards such as A,2"))?;
    Ok(HandLayout::new(parse_card(a)?, parse_card(b)?))
}

/// Parse a two-card hand state: "hard4".."hard20" or "soft12".."soft20".
pub fn parse_hand(input: &str) -> Result<HandState> {
    let s = input.trim().to_ascii_lowercase();
    let build: fn(u8) -> Result<HandState>;
    let digits = if let Some(rest) = s.strip_prefix("hard") {
        build = HandState::hard;
        rest
    } else if let Some(rest) = s.strip_prefix("soft") {
        build = HandState::soft;
        rest
    } else {
        return Err(parse_err("hand", input, "hard4..hard20 or soft12..soft20"));
    };
    let total = digits
        .parse::<u8>()
        .map_err(|_| parse_err("hand", input, "hard4..hard20 or soft12..soft20"))?;
    build(total)
}

/// Parse a dealer up card: "up2".."up10" or "upA".
pub fn parse_up_card(input: &str) -> Result<CardValue> {
    let s = input.trim();
    let rest = s
        .strip_prefix("up")
        .or_else(|| s.strip_prefix("UP"))
        .or_else(|| s.strip_prefix("Up"))
        .ok_or_else(|| parse_err("up card", input, "up2..up10 or upA"))?;
    parse_card(rest)
}

/// Parse a dealer rule: "h15".."h18" (hit soft totals at the threshold),
/// "s15".."s18" (stand on them), "always-hit", or "always-stand".
pub fn parse_policy(input: &str) -> Result<DealerPolicy> {
    let s = input.trim().to_ascii_lowercase();
    match s.as_str() {
        "always-hit" | "alwayshit" => return Ok(DealerPolicy::AlwaysHit),
        "always-stand" | "alwaysstand" => return Ok(DealerPolicy::AlwaysStand),
        _ => {}
    }
    let (hit_soft, digits) = if let Some(rest) = s.strip_prefix('h') {
        (true, rest)
    } else if let Some(rest) = s.strip_prefix('s') {
        (false, rest)
    } else {
        return Err(parse_err("dealer rule", input, "h15..h18, s15..s18, always-hit, or always-stand"));
    };
    let stand_at = digits
        .parse::<u8>()
        .map_err(|_| parse_err("dealer rule", input, "h15..h18, s15..s18, always-hit, or always-stand"))?;
    DealerPolicy::threshold(stand_at, hit_soft)
}

/// Parse a deck model: a positive deck count such as "1" or "6", or
/// "replacement" for the one-deck with-replacement model.
pub fn parse_deck(input: &str) -> Result<DeckMode> {
    let s = input.trim().to_ascii_lowercase();
    if s == "replacement" || s == "with-replacement" {
        return Ok(DeckMode::WithReplacement);
    }
    let n = s
        .parse::<u32>()
        .map_err(|_| parse_err("deck model", input, "a deck count or \"replacement\""))?;
    DeckMode::FiniteDecks(n).validate()
}

/// Parse a natural payout: "3:2" or "6:5".
pub fn parse_payout(input: &str) -> Result<PayoutSchedule> {
    match input.trim() {
        "3:2" | "3/2" => Ok(PayoutSchedule::three_to_two()),
        "6:5" | "6/5" => Ok(PayoutSchedule::six_to_five()),
        _ => Err(parse_err("payout", input, "3:2 or 6:5")),
    }
}

/// Parse dealer-card visibility: "two-up", "one-up", or "no-up".
pub fn parse_visibility(input: &str) -> Result<Visibility> {
    match input.trim().to_ascii_lowercase().as_str() {
        "two-up" | "twoup" => Ok(Visibility::TwoUp),
        "one-up" | "oneup" => Ok(Visibility::OneUp),
        "no-up" | "noup" => Ok(Visibility::NoUp),
        _ => Err(parse_err("visibility", input, "two-up, one-up, or no-up")),
    }
}

/// Parse a boolean flag value: "true"/"false", "yes"/"no", "1"/"0".
pub fn parse_bool(input: &str) -> Result<bool> {
    match input.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(parse_err("flag", input, "true or false")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cards::{HandLayout, Visibility};

    #[test]
    fn cards_layouts_and_hands() {
        assert_eq!(parse_card("A").unwrap(), CardValue::ACE);
        assert_eq!(parse_card("10").unwrap(), CardValue::TEN);
        assert!(parse_card("11").is_err());
        assert!(parse_card("0").is_err());
        assert_eq!(
            parse_layout("A,2").unwrap(),
            HandLayout::new(CardValue::ACE, CardValue::new(2).unwrap())
        );
        assert_eq!(parse_layout("10 , 6").unwrap().evaluate().total(), 16);
        assert!(parse_layout("A").is_err());
        assert_eq!(parse_hand("hard14").unwrap(), HandState::hard(14).unwrap());
        assert_eq!(parse_hand("Soft13").unwrap(), HandState::soft(13).unwrap());
        assert!(parse_hand("hard21").is_err());
        assert!(parse_hand("soft11").is_err());
        assert!(parse_hand("14").is_err());
        assert_eq!(parse_up_card("upA").unwrap(), CardValue::ACE);
        assert_eq!(parse_up_card("up10").unwrap(), CardValue::TEN);
        assert!(parse_up_card("A").is_err());
    }

    #[test]
    fn rules_decks_payouts_visibility() {
        assert_eq!(parse_policy("h17").unwrap(), DealerPolicy::H17);
        assert_eq!(parse_policy("s17").unwrap(), DealerPolicy::S17);
        assert_eq!(parse_policy("always-hit").unwrap(), DealerPolicy::AlwaysHit);
        assert_eq!(parse_policy("Always-Stand").unwrap(), DealerPolicy::AlwaysStand);
        assert!(parse_policy("h14").is_err());
        assert!(parse_policy("h19").is_err());
        assert_eq!(parse_deck("1").unwrap(), DeckMode::FiniteDecks(1));
        assert_eq!(parse_deck("6").unwrap(), DeckMode::FiniteDecks(6));
        assert_eq!(parse_deck("replacement").unwrap(), DeckMode::WithReplacement);
        assert!(parse_deck("0").is_err());
        assert_eq!(parse_payout("3:2").unwrap(), PayoutSchedule::three_to_two());
        assert_eq!(parse_payout("6:5").unwrap(), PayoutSchedule::six_to_five());
        assert!(parse_payout("2:1").is_err());
        assert_eq!(parse_visibility("two-up").unwrap(), Visibility::TwoUp);
        assert_eq!(parse_visibility("ONE-UP").unwrap(), Visibility::OneUp);
        assert_eq!(parse_visibility("no-up").unwrap(), Visibility::NoUp);
        assert!(parse_visibility("half-up").is_err());
        assert!(parse_bool("yes").unwrap());
        assert!(!parse_bool("off").unwrap());
        assert!(parse_bool("maybe").is_err());
    }
}
