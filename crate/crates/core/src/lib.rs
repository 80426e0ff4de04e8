//! Mining correlated high-utility sequential rules.
//!
//! A sequential rule `X => Y` holds in a sequence when every item of `X`
//! appears in some itemset strictly before every item of `Y`. [`mine`]
//! returns each rule whose utility, confidence, lift and the bond of both
//! sides reach the configured thresholds. [`oracle`] computes the same
//! answer by exhaustive enumeration on small databases.

pub mod bitvector;
pub mod measures;
pub mod miner;
pub mod oracle;
pub mod report;
pub mod rulecore;
pub mod seqdb;
pub mod synthetic;
pub mod units;

pub use measures::Rule;
pub use miner::{mine, MineError, MinedRule, MinerConfig, MiningResult, MiningStats, Variant};
pub use seqdb::{Item, SequenceDatabase, UtilityTable};
pub use units::{Fraction, Utility};
