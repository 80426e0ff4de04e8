//! Quantitative sequence databases: data model, text formats and the
//! resolved per-sequence index the mining code works on.
//!
//! Database file: one sequence per line, `item:qty` tokens, `-1` closes an
//! itemset, `-2` closes the sequence, `#` starts a comment. Utility file:
//! one `item utility` pair per line. An item may occur in at most one
//! itemset of a sequence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::num::NonZeroU32;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::units::{NumberError, Utility};

/// An item identifier. Items are totally ordered by their numeric id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Item(NonZeroU32);

impl Item {
    /// Returns `None` for id 0.
    pub fn new(id: u32) -> Option<Item> {
        NonZeroU32::new(id).map(Item)
    }

    pub fn id(self) -> u32 {
        self.0.get()
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for Item {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u32(self.id())
    }
}

/// External utility (unit price) of every item.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UtilityTable {
    prices: BTreeMap<Item, Utility>,
}

impl UtilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, item: Item, price: Utility) -> Option<Utility> {
        self.prices.insert(item, price)
    }

    pub fn price(&self, item: Item) -> Option<Utility> {
        self.prices.get(&item).copied()
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Item, Utility)> + '_ {
        self.prices.iter().map(|(&i, &p)| (i, p))
    }
}

impl FromIterator<(Item, Utility)> for UtilityTable {
    fn from_iter<T: IntoIterator<Item = (Item, Utility)>>(iter: T) -> Self {
        UtilityTable {
            prices: iter.into_iter().collect(),
        }
    }
}

/// One itemset: `(item, quantity)` pairs sorted by item.
pub type Itemset = Vec<(Item, u32)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    pub sid: u32,
    pub itemsets: Vec<Itemset>,
}

impl Sequence {
    /// Builds a sequence, sorting each itemset and enforcing the model
    /// invariants (non-empty itemsets, positive quantities, each item at
    /// most once in the whole sequence).
    pub fn new(sid: u32, itemsets: Vec<Itemset>) -> Result<Sequence, DbError> {
        let mut seen = BTreeSet::new();
        let mut sorted = Vec::with_capacity(itemsets.len());
        for mut itemset in itemsets {
            if itemset.is_empty() {
                return Err(DbError::EmptyItemset { sid });
            }
            for &(item, qty) in &itemset {
                if qty == 0 {
                    return Err(DbError::ZeroQuantity { sid, item });
                }
                if !seen.insert(item) {
                    return Err(DbError::DuplicateItem { sid, item });
                }
            }
            itemset.sort_unstable_by_key(|&(i, _)| i);
            sorted.push(itemset);
        }
        Ok(Sequence { sid, itemsets: sorted })
    }

    pub fn items(&self) -> impl Iterator<Item = (Item, u32)> + '_ {
        self.itemsets.iter().flatten().copied()
    }

    pub fn quantity(&self, item: Item) -> Option<u32> {
        self.items().find(|&(i, _)| i == item).map(|(_, q)| q)
    }

    pub fn contains(&self, item: Item) -> bool {
        self.quantity(item).is_some()
    }
}

/// An immutable sequence database plus its utility table.
///
/// `size` is `|SD|`, the number of sequences of the original database.
/// After item filtering, sequences that became empty are dropped but keep
/// their sids, so `size` may exceed `sequences.len()`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SequenceDatabase {
    pub sequences: Vec<Sequence>,
    pub utilities: UtilityTable,
    size: usize,
}

impl SequenceDatabase {
    /// Sequences get sids `1..=n` in the given order.
    pub fn from_sequences(
        itemsets_per_sequence: Vec<Vec<Itemset>>,
        utilities: UtilityTable,
    ) -> Result<Self, DbError> {
        let sequences = itemsets_per_sequence
            .into_iter()
            .enumerate()
            .map(|(k, itemsets)| Sequence::new(k as u32 + 1, itemsets))
            .collect::<Result<Vec<_>, _>>()?;
        let size = sequences.len();
        SequenceDatabase { sequences, utilities: UtilityTable::new(), size }.with_utilities(utilities)
    }

    /// Reads a database and its utility table from their text forms.
    pub fn from_text(db_text: &str, utility_text: &str) -> Result<Self, DbError> {
        let table = parse_utility_table(utility_text)?;
        parse_database(db_text)?.with_utilities(table)
    }

    /// Attaches a utility table, checking that it prices every item.
    pub fn with_utilities(mut self, utilities: UtilityTable) -> Result<Self, DbError> {
        self.utilities = utilities;
        self.validate()?;
        Ok(self)
    }

    /// Builds a database whose sids need not be dense (filtered views).
    pub(crate) fn from_parts(sequences: Vec<Sequence>, utilities: UtilityTable, size: usize) -> Self {
        SequenceDatabase { sequences, utilities, size }
    }

    pub fn validate(&self) -> Result<(), DbError> {
        for seq in &self.sequences {
            if seq.sid == 0 || seq.sid as usize > self.size {
                return Err(DbError::InvalidSid(seq.sid));
            }
            for (item, _) in seq.items() {
                if self.utilities.price(item).is_none() {
                    return Err(DbError::MissingUtility(item));
                }
            }
        }
        Ok(())
    }

    /// `|SD|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// All items occurring in some sequence, ascending.
    pub fn items(&self) -> BTreeSet<Item> {
        self.sequences.iter().flat_map(|s| s.items().map(|(i, _)| i)).collect()
    }

    pub fn sequence(&self, sid: u32) -> Option<&Sequence> {
        self.sequences.iter().find(|s| s.sid == sid)
    }

    /// Sum of all sequence utilities.
    pub fn total_utility(&self) -> Utility {
        self.sequences.iter().map(|s| sequence_utility(s, &self.utilities)).sum()
    }

    /// Canonical text form (items ascending within itemsets).
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for seq in &self.sequences {
            for itemset in &seq.itemsets {
                for (item, qty) in itemset {
                    out.push_str(&format!("{item}:{qty} "));
                }
                out.push_str("-1 ");
            }
            out.push_str("-2\n");
        }
        out
    }

    /// Resolves every item to its position and utility, one slot per sid.
    pub fn index(&self) -> IndexedDatabase {
        IndexedDatabase::new(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("item {0} occurs more than once in the sequence")]
    DuplicateItem(u32),
    #[error("empty itemset")]
    EmptyItemset,
    #[error("sequence has no itemsets")]
    EmptySequence,
    #[error("itemset not closed by -1 before -2")]
    UnterminatedItemset,
    #[error("missing -2 sequence terminator")]
    MissingTerminator,
    #[error("tokens after -2 terminator")]
    TrailingTokens,
    #[error("item {item} listed with conflicting utilities {first} and {second}")]
    ConflictingDuplicate { item: u32, first: Utility, second: Utility },
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DbError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("item {0} has no entry in the utility table")]
    MissingUtility(Item),
    #[error("item {item} does not occur in sequence {sid}")]
    ItemAbsent { sid: u32, item: Item },
    #[error("item {item} occurs more than once in sequence {sid}")]
    DuplicateItem { sid: u32, item: Item },
    #[error("sequence {sid} has an empty itemset")]
    EmptyItemset { sid: u32 },
    #[error("item {item} has quantity 0 in sequence {sid}")]
    ZeroQuantity { sid: u32, item: Item },
    #[error("sid {0} is outside the database")]
    InvalidSid(u32),
}

/// Splits a line into `(1-based column, token)` pairs, dropping comments.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let content = line.split('#').next().unwrap_or("");
    let mut column = 0;
    content.split(' ').filter_map(move |tok| {
        let start = column + 1;
        column += tok.chars().count() + 1;
        let tok = tok.trim();
        (!tok.is_empty()).then_some((start, tok))
    })
}

fn parse_item(tok: &str) -> Option<Item> {
    tok.parse::<u32>().ok().and_then(Item::new)
}

/// Parses the database text format. Sids are assigned `1..=n` in line
/// order; blank and comment-only lines are skipped.
pub fn parse_database(text: &str) -> Result<SequenceDatabase, ParseError> {
    let mut sequences = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let mut toks = tokens(line).peekable();
        if toks.peek().is_none() {
            continue;
        }
        let err = |column, kind| ParseError { line: line_no, column, kind };
        let mut itemsets: Vec<Itemset> = Vec::new();
        let mut current: Itemset = Vec::new();
        let mut seen = BTreeSet::new();
        let mut terminated = false;
        let mut last_column = 1;
        for (column, tok) in toks {
            last_column = column;
            if terminated {
                return Err(err(column, ParseErrorKind::TrailingTokens));
            }
            match tok {
                "-1" => {
                    if current.is_empty() {
                        return Err(err(column, ParseErrorKind::EmptyItemset));
                    }
                    current.sort_unstable_by_key(|&(i, _)| i);
                    itemsets.push(std::mem::take(&mut current));
                }
                "-2" => {
                    if !current.is_empty() {
                        return Err(err(column, ParseErrorKind::UnterminatedItemset));
                    }
                    if itemsets.is_empty() {
                        return Err(err(column, ParseErrorKind::EmptySequence));
                    }
                    terminated = true;
                }
                _ => {
                    let malformed = || err(column, ParseErrorKind::MalformedToken(tok.to_string()));
                    let (item, qty) = tok.split_once(':').ok_or_else(malformed)?;
                    let item = parse_item(item).ok_or_else(malformed)?;
                    let qty: u32 = qty.parse().ok().filter(|&q| q > 0).ok_or_else(malformed)?;
                    if !seen.insert(item) {
                        return Err(err(column, ParseErrorKind::DuplicateItem(item.id())));
                    }
                    current.push((item, qty));
                }
            }
        }
        if !terminated {
            return Err(err(last_column, ParseErrorKind::MissingTerminator));
        }
        let sid = sequences.len() as u32 + 1;
        sequences.push(Sequence { sid, itemsets });
    }
    let size = sequences.len();
    Ok(SequenceDatabase { sequences, utilities: UtilityTable::new(), size })
}

/// Parses `item utility` lines. Repeating an item with the same utility is
/// tolerated; a conflicting value is an error.
pub fn parse_utility_table(text: &str) -> Result<UtilityTable, ParseError> {
    let mut table = UtilityTable::new();
    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let toks: Vec<_> = tokens(line).collect();
        if toks.is_empty() {
            continue;
        }
        let err = |column, kind| ParseError { line: line_no, column, kind };
        let malformed = |(column, tok): (usize, &str)| err(column, ParseErrorKind::MalformedToken(tok.to_string()));
        if toks.len() != 2 {
            return Err(malformed(toks[toks.len().min(2) - 1]));
        }
        let item = parse_item(toks[0].1).ok_or_else(|| malformed(toks[0]))?;
        let price: Utility = toks[1]
            .1
            .parse()
            .map_err(|e| err(toks[1].0, ParseErrorKind::Number(e)))?;
        if let Some(first) = table.insert(item, price) {
            if first != price {
                return Err(err(
                    toks[0].0,
                    ParseErrorKind::ConflictingDuplicate { item: item.id(), first, second: price },
                ));
            }
        }
    }
    Ok(table)
}

/// Parses `item label` lines mapping ids to display labels.
pub fn parse_aliases(text: &str) -> Result<BTreeMap<Item, String>, ParseError> {
    let mut aliases = BTreeMap::new();
    for (line_idx, line) in text.lines().enumerate() {
        let toks: Vec<_> = tokens(line).collect();
        if toks.is_empty() {
            continue;
        }
        let malformed = |(column, tok): (usize, &str)| ParseError {
            line: line_idx + 1,
            column,
            kind: ParseErrorKind::MalformedToken(tok.to_string()),
        };
        if toks.len() != 2 {
            return Err(malformed(toks[toks.len().min(2) - 1]));
        }
        let item = parse_item(toks[0].1).ok_or_else(|| malformed(toks[0]))?;
        aliases.insert(item, toks[1].1.to_string());
    }
    Ok(aliases)
}

/// `u(i, S) = q(i, S) * p(i)`.
pub fn item_utility(item: Item, seq: &Sequence, table: &UtilityTable) -> Result<Utility, DbError> {
    let absent = || DbError::ItemAbsent { sid: seq.sid, item };
    let qty = seq.quantity(item).ok_or_else(absent)?;
    let price = table.price(item).ok_or(DbError::MissingUtility(item))?;
    Ok(price.times(qty))
}

/// `SU(S)`: total utility of all items of the sequence. Unpriced items
/// contribute nothing.
pub fn sequence_utility(seq: &Sequence, table: &UtilityTable) -> Utility {
    seq.items()
        .map(|(item, qty)| table.price(item).unwrap_or_default().times(qty))
        .sum()
}

/// 1-based index of the itemset holding each item.
pub fn item_positions(seq: &Sequence) -> BTreeMap<Item, usize> {
    seq.itemsets
        .iter()
        .enumerate()
        .flat_map(|(k, itemset)| itemset.iter().map(move |&(item, _)| (item, k + 1)))
        .collect()
}

/// An item of an [`IndexedSequence`] with its itemset position and utility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub item: Item,
    pub pos: u32,
    pub utility: Utility,
}

/// A sequence resolved for mining: entries sorted by item.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndexedSequence {
    pub sid: u32,
    pub entries: Vec<Entry>,
    pub utility: Utility,
}

impl IndexedSequence {
    pub fn from_sequence(seq: &Sequence, table: &UtilityTable) -> Self {
        let mut entries: Vec<Entry> = seq
            .itemsets
            .iter()
            .enumerate()
            .flat_map(|(k, itemset)| {
                itemset.iter().map(move |&(item, qty)| Entry {
                    item,
                    pos: k as u32 + 1,
                    utility: table.price(item).unwrap_or_default().times(qty),
                })
            })
            .collect();
        entries.sort_unstable_by_key(|e| e.item);
        let utility = entries.iter().map(|e| e.utility).sum();
        IndexedSequence { sid: seq.sid, entries, utility }
    }

    pub fn get(&self, item: Item) -> Option<&Entry> {
        self.entries
            .binary_search_by_key(&item, |e| e.item)
            .ok()
            .map(|k| &self.entries[k])
    }
}

/// Every sequence of a database resolved, addressable by sid. Sids missing
/// from a filtered database resolve to an empty sequence.
#[derive(Debug, Clone, Default)]
pub struct IndexedDatabase {
    sequences: Vec<IndexedSequence>,
}

impl IndexedDatabase {
    pub fn new(db: &SequenceDatabase) -> Self {
        let mut sequences: Vec<IndexedSequence> = (1..=db.size() as u32)
            .map(|sid| IndexedSequence { sid, ..Default::default() })
            .collect();
        for seq in &db.sequences {
            sequences[seq.sid as usize - 1] = IndexedSequence::from_sequence(seq, &db.utilities);
        }
        IndexedDatabase { sequences }
    }

    pub fn size(&self) -> usize {
        self.sequences.len()
    }

    /// Panics if `sid` is outside `1..=size`.
    pub fn get(&self, sid: u32) -> &IndexedSequence {
        &self.sequences[sid as usize - 1]
    }

    pub fn iter(&self) -> impl Iterator<Item = &IndexedSequence> {
        self.sequences.iter()
    }
}
