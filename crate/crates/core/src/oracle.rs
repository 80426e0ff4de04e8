//! Brute-force reference miner for small databases.
//!
//! Every pair of disjoint non-empty itemsets is scored straight from the
//! definitions: a rule occurs in a sequence when some split point puts all
//! of `X` before it and all of `Y` after it. Nothing here shares code with
//! the search beyond the input and output types.

use thiserror::Error;

use crate::measures::Rule;
use crate::miner::{MinedRule, MinerConfig};
use crate::seqdb::{Item, SequenceDatabase};
use crate::units::{ratio_at_least, Fraction, Utility};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_items: usize,
    pub max_sequences: usize,
    pub max_side: Option<usize>,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_items: 12, max_sequences: 16, max_side: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("database too large for exhaustive enumeration: {items} items (max {max_items}), {sequences} sequences (max {max_sequences})")]
    LimitExceeded {
        items: usize,
        sequences: usize,
        max_items: usize,
        max_sequences: usize,
    },
}

/// One candidate rule and its measures. Ratios are `None` when undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRule {
    pub rule: Rule,
    pub utility: Utility,
    pub support: usize,
    pub confidence: Option<Fraction>,
    pub lift: Option<Fraction>,
    pub bond_x: Option<Fraction>,
    pub bond_y: Option<Fraction>,
}

struct SeqMasks {
    /// `prefix[k]`: items in the first `k + 1` itemsets.
    prefix: Vec<u32>,
    /// `suffix[k]`: items from itemset `k + 1` on.
    suffix: Vec<u32>,
    all: u32,
    /// Utility of each item (by bit), zero if absent.
    utility: Vec<Utility>,
}

impl SeqMasks {
    fn occurs(&self, x: u32, y: u32) -> bool {
        self.prefix
            .iter()
            .zip(&self.suffix)
            .any(|(&p, &s)| p & x == x && s & y == y)
    }
}

fn ratio(numer: usize, denom: usize) -> Option<Fraction> {
    (denom > 0).then(|| Fraction::new(numer as u64, denom as u64))
}

fn items_of(mask: u32, universe: &[Item]) -> Vec<Item> {
    (0..universe.len()).filter(|b| mask >> b & 1 == 1).map(|b| universe[b]).collect()
}

/// Scores every rule over the database's items, including rules that never
/// occur (support zero).
pub fn enumerate_all_rules(db: &SequenceDatabase, limits: &OracleLimits) -> Result<Vec<OracleRule>, OracleError> {
    let universe: Vec<Item> = db.items().into_iter().collect();
    let m = universe.len();
    if m > limits.max_items || db.size() > limits.max_sequences || m > 31 {
        return Err(OracleError::LimitExceeded {
            items: m,
            sequences: db.size(),
            max_items: limits.max_items,
            max_sequences: limits.max_sequences,
        });
    }
    let bit = |item: Item| universe.binary_search(&item).unwrap();
    let seqs: Vec<SeqMasks> = db
        .sequences
        .iter()
        .map(|seq| {
            let sets: Vec<u32> = seq
                .itemsets
                .iter()
                .map(|is| is.iter().fold(0u32, |acc, &(i, _)| acc | 1 << bit(i)))
                .collect();
            let mut prefix = Vec::new();
            let mut acc = 0;
            for &s in &sets[..sets.len() - 1] {
                acc |= s;
                prefix.push(acc);
            }
            let mut suffix = vec![0; prefix.len()];
            let mut acc = 0;
            for k in (0..prefix.len()).rev() {
                acc |= sets[k + 1];
                suffix[k] = acc;
            }
            let mut utility = vec![Utility::ZERO; m];
            for (i, q) in seq.items() {
                let price = db.utilities.price(i).expect("validated database");
                utility[bit(i)] = price.times(q);
            }
            SeqMasks { prefix, suffix, all: sets.iter().fold(0, |a, s| a | s), utility }
        })
        .collect();

    let n = db.size();
    let full = (1u32 << m) - 1;
    let containing_all = |mask: u32| seqs.iter().filter(|s| s.all & mask == mask).count();
    let containing_any = |mask: u32| seqs.iter().filter(|s| s.all & mask != 0).count();
    let side_ok = |mask: u32| limits.max_side.is_none_or(|cap| mask.count_ones() as usize <= cap);

    let mut out = Vec::new();
    for x in 1..=full {
        if !side_ok(x) {
            continue;
        }
        let sup_x = containing_all(x);
        let bond_x = ratio(sup_x, containing_any(x));
        let rest = full & !x;
        // all non-empty subsets of `rest`
        let mut y = rest;
        while y != 0 {
            if side_ok(y) {
                let sup_y = containing_all(y);
                let mut support = 0;
                let mut utility = Utility::ZERO;
                for s in seqs.iter().filter(|s| s.occurs(x, y)) {
                    support += 1;
                    utility += (0..m).filter(|b| (x | y) >> b & 1 == 1).map(|b| s.utility[b]).sum::<Utility>();
                }
                let rule = Rule::new(items_of(x, &universe), items_of(y, &universe)).expect("disjoint non-empty sides");
                out.push(OracleRule {
                    rule,
                    utility,
                    support,
                    confidence: ratio(support, sup_x),
                    lift: ratio(n * support, sup_x * sup_y),
                    bond_x,
                    bond_y: ratio(sup_y, containing_any(y)),
                });
            }
            y = (y - 1) & rest;
        }
    }
    out.sort_by(|a, b| a.rule.cmp(&b.rule));
    Ok(out)
}

fn at_least(value: Option<Fraction>, threshold: &Fraction) -> bool {
    value.is_some_and(|v| ratio_at_least(*v.numer(), *v.denom(), threshold))
}

/// Whether a scored rule meets every threshold of `cfg`.
pub fn qualifies(r: &OracleRule, cfg: &MinerConfig) -> bool {
    r.support >= 1
        && r.utility >= cfg.min_util
        && at_least(r.confidence, &cfg.min_conf)
        && at_least(r.lift, &cfg.min_lift)
        && at_least(r.bond_x, &cfg.min_bond)
        && at_least(r.bond_y, &cfg.min_bond)
}

/// The exact answer set for `cfg`, canonically ordered. Honors
/// `cfg.max_side`.
pub fn oracle_chusrs(
    db: &SequenceDatabase,
    cfg: &MinerConfig,
    limits: &OracleLimits,
) -> Result<Vec<MinedRule>, OracleError> {
    let limits = OracleLimits { max_side: cfg.max_side.or(limits.max_side), ..*limits };
    let mut rules: Vec<MinedRule> = enumerate_all_rules(db, &limits)?
        .into_iter()
        .filter(|r| qualifies(r, cfg))
        .map(|r| MinedRule {
            rule: r.rule,
            utility: r.utility,
            support: r.support,
            confidence: r.confidence.unwrap(),
            lift: r.lift.unwrap(),
            bond_x: r.bond_x.unwrap(),
            bond_y: r.bond_y.unwrap(),
        })
        .collect();
    rules.sort();
    Ok(rules)
}
