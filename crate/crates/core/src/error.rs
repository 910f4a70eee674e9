use crate::cards::CardValue;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid card value {0}, expected 1..=10")]
    InvalidCardValue(u8),
    #[error("a finite shoe needs at least one deck")]
    ZeroDecks,
    #[error("cannot remove {0}: none left in deck")]
    RemovalUnderflow(CardValue),
    #[error("invalid hand: {0}")]
    InvalidHand(String),
    #[error("no deal is consistent with the observable state: {0}")]
    EmptyObservable(String),
    #[error("strategy table was built for a different variant: {0}")]
    ConfigMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
