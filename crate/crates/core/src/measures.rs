//! Rule and itemset measures: support, disjunctive support, bond,
//! confidence, lift, utility and sequence-estimated utility (SEU).
//!
//! Itemset support is sequence-level containment (itemset boundaries are
//! ignored); rule occurrence is order-sensitive: every antecedent item must
//! sit in a strictly earlier itemset than every consequent item.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use crate::bitvector::BitVector;
use crate::seqdb::{item_positions, Item, Sequence, SequenceDatabase};
use crate::units::{Fraction, Utility};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("antecedent and consequent must be non-empty")]
    EmptySide,
    #[error("item {0} appears on both sides of the rule")]
    Overlap(Item),
    #[error("invalid item id 0")]
    InvalidItem,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("confidence is undefined: the antecedent never occurs")]
    UndefinedConfidence,
    #[error("lift is undefined: antecedent or consequent never occurs")]
    UndefinedLift,
}

/// A sequential rule `X => Y` over disjoint, non-empty item sets, each kept
/// in ascending order. Rules order lexicographically by antecedent, then
/// consequent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    antecedent: Vec<Item>,
    consequent: Vec<Item>,
}

impl Rule {
    pub fn new(
        antecedent: impl IntoIterator<Item = Item>,
        consequent: impl IntoIterator<Item = Item>,
    ) -> Result<Rule, RuleError> {
        let mut x: Vec<Item> = antecedent.into_iter().collect();
        let mut y: Vec<Item> = consequent.into_iter().collect();
        x.sort_unstable();
        x.dedup();
        y.sort_unstable();
        y.dedup();
        if x.is_empty() || y.is_empty() {
            return Err(RuleError::EmptySide);
        }
        if let Some(&shared) = x.iter().find(|i| y.binary_search(i).is_ok()) {
            return Err(RuleError::Overlap(shared));
        }
        Ok(Rule { antecedent: x, consequent: y })
    }

    /// Convenience constructor from raw ids.
    pub fn from_ids(antecedent: &[u32], consequent: &[u32]) -> Result<Rule, RuleError> {
        let to_items = |ids: &[u32]| {
            ids.iter()
                .map(|&id| Item::new(id).ok_or(RuleError::InvalidItem))
                .collect::<Result<Vec<_>, _>>()
        };
        Rule::new(to_items(antecedent)?, to_items(consequent)?)
    }

    pub fn antecedent(&self) -> &[Item] {
        &self.antecedent
    }

    pub fn consequent(&self) -> &[Item] {
        &self.consequent
    }

    /// Greatest antecedent item.
    pub fn last_antecedent(&self) -> Item {
        *self.antecedent.last().expect("non-empty antecedent")
    }

    /// Greatest consequent item.
    pub fn last_consequent(&self) -> Item {
        *self.consequent.last().expect("non-empty consequent")
    }

    /// `(|X|, |Y|)`, reported as `k*m`.
    pub fn size(&self) -> (usize, usize) {
        (self.antecedent.len(), self.consequent.len())
    }

    pub fn contains(&self, item: Item) -> bool {
        self.antecedent.binary_search(&item).is_ok() || self.consequent.binary_search(&item).is_ok()
    }

    pub fn items(&self) -> impl Iterator<Item = Item> + '_ {
        self.antecedent.iter().chain(&self.consequent).copied()
    }

    /// Appends an item greater than every antecedent item. Callers uphold
    /// ordering and disjointness.
    pub(crate) fn push_antecedent(&self, item: Item) -> Rule {
        debug_assert!(item > self.last_antecedent() && !self.contains(item));
        let mut rule = self.clone();
        rule.antecedent.push(item);
        rule
    }

    pub(crate) fn push_consequent(&self, item: Item) -> Rule {
        debug_assert!(item > self.last_consequent() && !self.contains(item));
        let mut rule = self.clone();
        rule.consequent.push(item);
        rule
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |items: &[Item]| items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}} => {{{}}}", join(&self.antecedent), join(&self.consequent))
    }
}

/// Per-item occurrence bit vectors of one database.
#[derive(Debug, Clone)]
pub struct ItemBitVectors {
    size: usize,
    vectors: HashMap<Item, BitVector>,
}

impl ItemBitVectors {
    /// Number of sequences (`|SD|`), the length of every vector.
    pub fn size(&self) -> usize {
        self.size
    }

    /// `bv(i)`; an all-zero vector for items absent from the database.
    pub fn get(&self, item: Item) -> BitVector {
        self.vectors.get(&item).cloned().unwrap_or_else(|| BitVector::zeros(self.size))
    }

    pub fn get_ref(&self, item: Item) -> Option<&BitVector> {
        self.vectors.get(&item)
    }

    /// `sids(X)`: intersection of the member vectors.
    pub fn all_of(&self, items: &[Item]) -> BitVector {
        let mut acc = BitVector::ones(self.size);
        for &item in items {
            match self.vectors.get(&item) {
                Some(bv) => acc.intersect_with(bv),
                None => return BitVector::zeros(self.size),
            }
        }
        acc
    }

    /// Sequences containing any item of `items`.
    pub fn any_of(&self, items: &[Item]) -> BitVector {
        let mut acc = BitVector::zeros(self.size);
        for bv in items.iter().filter_map(|i| self.vectors.get(i)) {
            acc.union_with(bv);
        }
        acc
    }
}

pub fn build_item_bitvectors(db: &SequenceDatabase) -> ItemBitVectors {
    let size = db.size();
    let mut vectors: HashMap<Item, BitVector> = HashMap::new();
    for seq in &db.sequences {
        for (item, _) in seq.items() {
            vectors
                .entry(item)
                .or_insert_with(|| BitVector::zeros(size))
                .set(seq.sid as usize - 1);
        }
    }
    ItemBitVectors { size, vectors }
}

/// `sup(X)`.
pub fn itemset_support(items: &[Item], bvs: &ItemBitVectors) -> usize {
    bvs.all_of(items).count()
}

/// `dissup(X)`.
pub fn itemset_dissup(items: &[Item], bvs: &ItemBitVectors) -> usize {
    bvs.any_of(items).count()
}

/// `bond(X) = sup(X) / dissup(X)`, kept as its two counts.
///
/// When no item of `X` occurs anywhere the bond is undefined; it then
/// reports a value of 0 and `is_defined() == false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    pub support: usize,
    pub dissup: usize,
}

impl Bond {
    pub fn is_defined(&self) -> bool {
        self.dissup > 0
    }

    pub fn value(&self) -> Fraction {
        if self.dissup == 0 {
            Fraction::from_integer(0)
        } else {
            Fraction::new(self.support as u64, self.dissup as u64)
        }
    }
}

pub fn bond(items: &[Item], bvs: &ItemBitVectors) -> Bond {
    Bond {
        support: itemset_support(items, bvs),
        dissup: itemset_dissup(items, bvs),
    }
}

/// Whether `rule` occurs in `seq`: all of its items are present and every
/// antecedent item precedes every consequent item.
pub fn rule_occurs(rule: &Rule, seq: &Sequence) -> bool {
    let positions = item_positions(seq);
    let pos = |items: &[Item]| items.iter().map(|i| positions.get(i).copied()).collect::<Option<Vec<_>>>();
    match (pos(rule.antecedent()), pos(rule.consequent())) {
        (Some(x), Some(y)) => x.iter().max() < y.iter().min(),
        _ => false,
    }
}

/// `sids(r)` as a bit vector over the database.
pub fn rule_sids(rule: &Rule, db: &SequenceDatabase) -> BitVector {
    let mut bv = BitVector::zeros(db.size());
    for seq in db.sequences.iter().filter(|s| rule_occurs(rule, s)) {
        bv.set(seq.sid as usize - 1);
    }
    bv
}

/// `conf(r) = |sids(r)| / |sids(X)|`.
pub fn confidence(sids_rule: &BitVector, sids_antecedent: &BitVector) -> Result<Fraction, MeasureError> {
    confidence_from_counts(sids_rule.count(), sids_antecedent.count())
}

pub fn confidence_from_counts(rule_support: usize, antecedent_support: usize) -> Result<Fraction, MeasureError> {
    if antecedent_support == 0 {
        return Err(MeasureError::UndefinedConfidence);
    }
    Ok(Fraction::new(rule_support as u64, antecedent_support as u64))
}

/// `lift(r) = |SD| * sup(r) / (sup(X) * sup(Y))`.
pub fn lift(
    sids_rule: &BitVector,
    sids_antecedent: &BitVector,
    sids_consequent: &BitVector,
    size: usize,
) -> Result<Fraction, MeasureError> {
    lift_from_counts(sids_rule.count(), sids_antecedent.count(), sids_consequent.count(), size)
}

pub fn lift_from_counts(
    rule_support: usize,
    antecedent_support: usize,
    consequent_support: usize,
    size: usize,
) -> Result<Fraction, MeasureError> {
    if antecedent_support == 0 || consequent_support == 0 {
        return Err(MeasureError::UndefinedLift);
    }
    Ok(Fraction::new(
        (size * rule_support) as u64,
        (antecedent_support * consequent_support) as u64,
    ))
}

/// `u(r)`: over supporting sequences, the utilities of all rule items.
pub fn rule_utility(rule: &Rule, db: &SequenceDatabase) -> Utility {
    db.sequences
        .iter()
        .filter(|s| rule_occurs(rule, s))
        .flat_map(|s| {
            s.items()
                .filter(|&(i, _)| rule.contains(i))
                .map(|(i, q)| db.utilities.price(i).unwrap_or_default().times(q))
        })
        .sum()
}

/// `SEU(i)`: sum of `SU(S)` over sequences containing `item`.
pub fn seu_of_item(item: Item, db: &SequenceDatabase) -> Utility {
    db.sequences
        .iter()
        .filter(|s| s.contains(item))
        .map(|s| crate::seqdb::sequence_utility(s, &db.utilities))
        .sum()
}

/// `SEU(r)`: sum of `SU(S)` over the sequences in `sids_rule`.
pub fn seu_of_rule(sids_rule: &BitVector, db: &SequenceDatabase) -> Utility {
    db.sequences
        .iter()
        .filter(|s| sids_rule.get(s.sid as usize - 1))
        .map(|s| crate::seqdb::sequence_utility(s, &db.utilities))
        .sum()
}
