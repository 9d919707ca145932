//! Mid-price walk, order-book dynamics and trade detection.

pub mod book;
pub mod excursion;
pub mod lemmas;
pub mod walk;

pub use book::{
    detect_trades, detect_trades_audited, simplified_trading_times, AskTracker, BookError,
    BookState, InitMode, SpreadParam, TradeEvent, TradeKind,
};
pub use excursion::{
    decompose_type2_excursion, first_trading_excursion, in_class_a, in_class_b, in_class_c,
    ExcursionError, Type2Decomposition,
};
pub use lemmas::{check_structural_lemmas, LemmaReport};
pub use walk::{generate_walk, PathError, RngStream, StepSource, WalkPath};
