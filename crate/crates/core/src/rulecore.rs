//! Utility-lists, expansion-item classes and the pairwise pruning tables.
//!
//! An item `i` of a sequence `S` supporting `X => Y` can extend the rule
//! on the left when `i` is greater than every item of `X`, is not in the
//! rule, and sits in an itemset before the first consequent itemset. It can
//! extend on the right when `i` is greater than every item of `Y`, is not in
//! the rule, and sits after the last antecedent itemset. Items that can go
//! either way are `leftRight`; the rest are `onlyLeft` / `onlyRight`.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::measures::{BitVector, Bond, ItemBitVectors, Rule};
use crate::seqdb::{item_positions, Entry, IndexedDatabase, IndexedSequence, Item, Sequence};
use crate::units::{Fraction, Utility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleCoreError {
    #[error("rule {rule} does not occur in sequence {sid}")]
    NotOccurring { rule: String, sid: u32 },
    #[error("item {item} cannot extend {rule} on the {direction:?}: it must be greater than that side's items and not in the rule")]
    OrderViolation { rule: String, item: Item, direction: Direction },
    #[error("initial utility-lists are for 1*1 rules, got {0}")]
    NotInitial(String),
}

/// Expansion items of a rule in one sequence, each set ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExpansionClasses {
    pub only_left: Vec<Item>,
    pub only_right: Vec<Item>,
    pub left_right: Vec<Item>,
}

/// Classifies the items of `seq` with respect to `rule`. Works from the
/// item-position map of the plain sequence.
pub fn classify_expansion_items(rule: &Rule, seq: &Sequence) -> Result<ExpansionClasses, RuleCoreError> {
    let positions = item_positions(seq);
    let not_occurring = || RuleCoreError::NotOccurring { rule: rule.to_string(), sid: seq.sid };
    let lookup = |items: &[Item]| items.iter().map(|i| positions.get(i).copied()).collect::<Option<Vec<usize>>>();
    let x_pos = lookup(rule.antecedent()).ok_or_else(not_occurring)?;
    let y_pos = lookup(rule.consequent()).ok_or_else(not_occurring)?;
    let x_end = *x_pos.iter().max().unwrap();
    let y_start = *y_pos.iter().min().unwrap();
    if x_end >= y_start {
        return Err(not_occurring());
    }
    let mut classes = ExpansionClasses::default();
    for (&item, &pos) in &positions {
        if rule.contains(item) {
            continue;
        }
        let can_left = rule.antecedent().iter().all(|&j| item > j) && pos < y_start;
        let can_right = rule.consequent().iter().all(|&j| item > j) && pos > x_end;
        match (can_left, can_right) {
            (true, true) => classes.left_right.push(item),
            (true, false) => classes.only_left.push(item),
            (false, true) => classes.only_right.push(item),
            (false, false) => {}
        }
    }
    Ok(classes)
}

/// One row of a utility-list. `x_end` / `y_start` are the itemset
/// positions of the last antecedent item and the first consequent item in
/// the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UtilityListRow {
    pub sid: u32,
    pub iutil: Utility,
    pub lutil: Utility,
    pub rutil: Utility,
    pub lrutil: Utility,
    pub x_end: u32,
    pub y_start: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtilityList {
    pub rule: Rule,
    /// Ordered by sid.
    pub rows: Vec<UtilityListRow>,
}

impl UtilityList {
    /// `u(r)`.
    pub fn utility(&self) -> Utility {
        self.rows.iter().map(|r| r.iutil).sum()
    }

    /// `sup(r)`.
    pub fn support(&self) -> usize {
        self.rows.len()
    }

    pub fn sids(&self, size: usize) -> BitVector {
        let mut bv = BitVector::zeros(size);
        self.rows.iter().for_each(|r| bv.set(r.sid as usize - 1));
        bv
    }

    pub fn total(&self) -> Utility {
        ul_total(self)
    }

    pub fn left_total(&self) -> Utility {
        ul_left_total(self)
    }

    /// Tab-separated dump: `sid iutil lutil rutil lrutil`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("sid\tiutil\tlutil\trutil\tlrutil\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", r.sid, r.iutil, r.lutil, r.rutil, r.lrutil);
        }
        out
    }
}

/// Bound on the utility of the rule and of all its expansions.
pub fn ul_total(ul: &UtilityList) -> Utility {
    ul.rows.iter().map(|r| r.iutil + r.lutil + r.rutil + r.lrutil).sum()
}

/// Bound on the utility of the rule and of its left-only expansions.
pub fn ul_left_total(ul: &UtilityList) -> Utility {
    ul.rows.iter().map(|r| r.iutil + r.lutil + r.lrutil).sum()
}

/// Builds the utility-list of an arbitrary rule by scanning every sequence.
pub fn build_utility_list(rule: &Rule, db: &IndexedDatabase) -> UtilityList {
    build_utility_list_on(rule, db, db.iter().map(|s| s.sid))
}

/// Builds the utility-list of a 1*1 rule.
pub fn build_initial_utility_list(rule: &Rule, db: &IndexedDatabase) -> Result<UtilityList, RuleCoreError> {
    if rule.size() != (1, 1) {
        return Err(RuleCoreError::NotInitial(rule.to_string()));
    }
    Ok(build_utility_list(rule, db))
}

/// Like [`build_utility_list`], restricted to the candidate `sids`
/// (ascending).
pub fn build_utility_list_on(rule: &Rule, db: &IndexedDatabase, sids: impl IntoIterator<Item = u32>) -> UtilityList {
    let rows = sids.into_iter().filter_map(|sid| row_from_scratch(rule, db.get(sid))).collect();
    UtilityList { rule: rule.clone(), rows }
}

fn row_from_scratch(rule: &Rule, seq: &IndexedSequence) -> Option<UtilityListRow> {
    let mut iutil = Utility::ZERO;
    let mut x_end = 0;
    for &item in rule.antecedent() {
        let e = seq.get(item)?;
        x_end = x_end.max(e.pos);
        iutil += e.utility;
    }
    let mut y_start = u32::MAX;
    for &item in rule.consequent() {
        let e = seq.get(item)?;
        y_start = y_start.min(e.pos);
        iutil += e.utility;
    }
    if x_end >= y_start {
        return None;
    }
    let (max_x, max_y) = (rule.last_antecedent(), rule.last_consequent());
    let mut row = UtilityListRow {
        sid: seq.sid,
        iutil,
        lutil: Utility::ZERO,
        rutil: Utility::ZERO,
        lrutil: Utility::ZERO,
        x_end,
        y_start,
    };
    for e in seq.entries.iter().filter(|e| !rule.contains(e.item)) {
        let can_left = e.item > max_x && e.pos < y_start;
        let can_right = e.item > max_y && e.pos > x_end;
        match (can_left, can_right) {
            (true, true) => row.lrutil += e.utility,
            (true, false) => row.lutil += e.utility,
            (false, true) => row.rutil += e.utility,
            (false, false) => {}
        }
    }
    Some(row)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    Neither,
    OnlyLeft,
    OnlyRight,
    LeftRight,
}

/// Shape of a rule inside one sequence. Members of the rule always fall in
/// [`Class::Neither`]: an antecedent item is neither greater than `max_x`
/// nor after `x_end`, and symmetrically for the consequent.
#[derive(Debug, Clone, Copy)]
struct Frame {
    max_x: Item,
    max_y: Item,
    x_end: u32,
    y_start: u32,
}

impl Frame {
    fn class(&self, e: &Entry) -> Class {
        let can_left = e.item > self.max_x && e.pos < self.y_start;
        let can_right = e.item > self.max_y && e.pos > self.x_end;
        match (can_left, can_right) {
            (true, true) => Class::LeftRight,
            (true, false) => Class::OnlyLeft,
            (false, true) => Class::OnlyRight,
            (false, false) => Class::Neither,
        }
    }
}

fn field(row: &mut UtilityListRow, class: Class) -> Option<&mut Utility> {
    match class {
        Class::Neither => None,
        Class::OnlyLeft => Some(&mut row.lutil),
        Class::OnlyRight => Some(&mut row.rutil),
        Class::LeftRight => Some(&mut row.lrutil),
    }
}

/// Derives the utility-list of `parent.rule` extended with `item` on the
/// given side from the parent's rows, without rescanning the database.
///
/// Per surviving row: `iutil' = iutil + u(i)`, and every item whose class
/// changes is moved out of its old field (and into its new one, when an
/// item of `leftRight` becomes `onlyLeft` or `onlyRight`). `i` itself
/// leaves its class.
pub fn expand_utility_list(
    parent: &UtilityList,
    item: Item,
    direction: Direction,
    db: &IndexedDatabase,
) -> Result<UtilityList, RuleCoreError> {
    let rule = &parent.rule;
    let (max_x, max_y) = (rule.last_antecedent(), rule.last_consequent());
    let ordered = match direction {
        Direction::Left => item > max_x,
        Direction::Right => item > max_y,
    };
    if !ordered || rule.contains(item) {
        return Err(RuleCoreError::OrderViolation { rule: rule.to_string(), item, direction });
    }
    let expanded = match direction {
        Direction::Left => rule.push_antecedent(item),
        Direction::Right => rule.push_consequent(item),
    };
    // Only items above min(max_x, max_y) can belong to any class.
    let floor = max_x.min(max_y);

    let mut rows = Vec::with_capacity(parent.rows.len());
    for parent_row in &parent.rows {
        let seq = db.get(parent_row.sid);
        let Some(added) = seq.get(item) else { continue };
        let old = Frame { max_x, max_y, x_end: parent_row.x_end, y_start: parent_row.y_start };
        let new = match direction {
            Direction::Right if added.pos > old.x_end => Frame {
                max_y: item,
                y_start: old.y_start.min(added.pos),
                ..old
            },
            Direction::Left if added.pos < old.y_start => Frame {
                max_x: item,
                x_end: old.x_end.max(added.pos),
                ..old
            },
            _ => continue,
        };
        let mut row = UtilityListRow {
            iutil: parent_row.iutil + added.utility,
            x_end: new.x_end,
            y_start: new.y_start,
            ..*parent_row
        };
        let start = seq.entries.partition_point(|e| e.item <= floor);
        for e in &seq.entries[start..] {
            let (was, now) = (old.class(e), new.class(e));
            if was == now {
                continue;
            }
            if let Some(f) = field(&mut row, was) {
                *f -= e.utility;
            }
            if let Some(f) = field(&mut row, now) {
                *f += e.utility;
            }
        }
        rows.push(row);
    }
    Ok(UtilityList { rule: expanded, rows })
}

/// Whether any supporting sequence still offers a left-expansion item.
pub(crate) fn has_left_candidates(ul: &UtilityList, db: &IndexedDatabase) -> bool {
    let max_x = ul.rule.last_antecedent();
    ul.rows.iter().any(|row| {
        let seq = db.get(row.sid);
        let start = seq.entries.partition_point(|e| e.item <= max_x);
        seq.entries[start..]
            .iter()
            .any(|e| e.pos < row.y_start && !ul.rule.contains(e.item))
    })
}

/// Candidate items for extending `ul.rule` in `direction`, ascending and
/// deduplicated over all supporting sequences.
pub(crate) fn expansion_candidates(ul: &UtilityList, direction: Direction, db: &IndexedDatabase) -> Vec<Item> {
    let rule = &ul.rule;
    let mut out = Vec::new();
    for row in &ul.rows {
        let seq = db.get(row.sid);
        match direction {
            Direction::Left => {
                let start = seq.entries.partition_point(|e| e.item <= rule.last_antecedent());
                out.extend(
                    seq.entries[start..]
                        .iter()
                        .filter(|e| e.pos < row.y_start && !rule.contains(e.item))
                        .map(|e| e.item),
                );
            }
            Direction::Right => {
                let start = seq.entries.partition_point(|e| e.item <= rule.last_consequent());
                out.extend(
                    seq.entries[start..]
                        .iter()
                        .filter(|e| e.pos > row.x_end && !rule.contains(e.item))
                        .map(|e| e.item),
                );
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Bond of every co-occurring pair of items, keyed with the smaller item
/// first. A missing pair never co-occurs.
#[derive(Debug, Clone, Default)]
pub struct BondMatrix {
    entries: HashMap<(Item, Item), Bond>,
}

impl BondMatrix {
    pub fn get(&self, a: Item, b: Item) -> Option<Fraction> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.entries.get(&key).map(Bond::value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut keys: Vec<_> = self.entries.keys().copied().collect();
        keys.sort_unstable();
        let mut out = String::from("a\tb\tsup\tdissup\n");
        for (a, b) in keys {
            let bond = self.entries[&(a, b)];
            let _ = writeln!(out, "{a}\t{b}\t{}\t{}", bond.support, bond.dissup);
        }
        out
    }
}

pub fn build_bond_matrix(bvs: &ItemBitVectors, promising: &BTreeSet<Item>) -> BondMatrix {
    let items: Vec<(Item, &BitVector)> = promising
        .iter()
        .filter_map(|&i| bvs.get_ref(i).map(|bv| (i, bv)))
        .collect();
    let mut entries = HashMap::new();
    for (k, &(a, bv_a)) in items.iter().enumerate() {
        for &(b, bv_b) in &items[k + 1..] {
            let support = bv_a.and_count(bv_b);
            if support > 0 {
                entries.insert((a, b), Bond { support, dissup: bv_a.or_count(bv_b) });
            }
        }
    }
    BondMatrix { entries }
}

/// `SEU(a => b)` for every ordered pair where `a` occurs strictly before
/// `b` in some sequence. `(a, b)` and `(b, a)` are independent entries.
#[derive(Debug, Clone, Default)]
pub struct Esucs {
    entries: HashMap<(Item, Item), Utility>,
}

impl Esucs {
    pub fn get(&self, a: Item, b: Item) -> Option<Utility> {
        self.entries.get(&(a, b)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut keys: Vec<_> = self.entries.keys().copied().collect();
        keys.sort_unstable();
        let mut out = String::from("a\tb\tseu\n");
        for (a, b) in keys {
            let _ = writeln!(out, "{a}\t{b}\t{}", self.entries[&(a, b)]);
        }
        out
    }
}

/// Supporting sids of every 1*1 rule, ascending.
pub type PairSids = HashMap<(Item, Item), Vec<u32>>;

/// One pass over the database collecting, for every ordered pair of
/// promising items, the supporting sids and the ESUCS value.
pub fn scan_pair_rules(db: &IndexedDatabase, promising: &BTreeSet<Item>) -> (Esucs, PairSids) {
    let mut esucs = Esucs::default();
    let mut sids: PairSids = HashMap::new();
    for seq in db.iter() {
        let entries: Vec<&Entry> = seq.entries.iter().filter(|e| promising.contains(&e.item)).collect();
        for a in &entries {
            for b in entries.iter().filter(|b| a.pos < b.pos) {
                let key = (a.item, b.item);
                *esucs.entries.entry(key).or_default() += seq.utility;
                sids.entry(key).or_default().push(seq.sid);
            }
        }
    }
    (esucs, sids)
}

pub fn build_esucs(db: &IndexedDatabase, promising: &BTreeSet<Item>) -> Esucs {
    scan_pair_rules(db, promising).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{build_item_bitvectors, rule_sids, rule_utility, seu_of_rule};
    use crate::seqdb::SequenceDatabase;
    use crate::synthetic::{random_small_db, SmallDbParams};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn example() -> SequenceDatabase {
        SequenceDatabase::from_text(
            include_str!("../testdata/table1.db"),
            include_str!("../testdata/table1.ut"),
        )
        .unwrap()
    }

    fn items(ids: &[u32]) -> Vec<Item> {
        ids.iter().map(|&i| Item::new(i).unwrap()).collect()
    }

    fn item(id: u32) -> Item {
        Item::new(id).unwrap()
    }

    fn rule(x: &[u32], y: &[u32]) -> Rule {
        Rule::from_ids(x, y).unwrap()
    }

    fn u(units: u64) -> Utility {
        Utility::from_units(units)
    }

    fn five(row: &UtilityListRow) -> (u32, Utility, Utility, Utility, Utility) {
        (row.sid, row.iutil, row.lutil, row.rutil, row.lrutil)
    }

    // a=1 b=2 c=3 d=4 e=5 f=6 g=7
    #[test]
    fn classes_of_a_then_e() {
        let db = example();
        let r = rule(&[1], &[5]);
        let s1 = classify_expansion_items(&r, db.sequence(1).unwrap()).unwrap();
        assert_eq!(s1, ExpansionClasses { only_left: items(&[2]), only_right: items(&[7]), left_right: vec![] });
        let s2 = classify_expansion_items(&r, db.sequence(2).unwrap()).unwrap();
        assert_eq!(s2, ExpansionClasses { only_left: items(&[2, 3, 4]), only_right: items(&[7]), left_right: vec![] });

        let all = rule(&[1, 2], &[4, 5, 7]);
        assert_eq!(classify_expansion_items(&all, db.sequence(1).unwrap()).unwrap(), ExpansionClasses::default());

        assert!(matches!(
            classify_expansion_items(&rule(&[1], &[2]), db.sequence(1).unwrap()),
            Err(RuleCoreError::NotOccurring { sid: 1, .. })
        ));
    }

    #[test]
    fn initial_list_of_a_then_e() {
        let idb = example().index();
        let ul = build_initial_utility_list(&rule(&[1], &[5]), &idb).unwrap();
        assert_eq!(ul.support(), 5);
        assert_eq!(five(&ul.rows[0]), (1, u(9), u(5), u(2), u(0)));
        assert_eq!(five(&ul.rows[1]), (2, u(12), u(18), u(4), u(0)));

        let never = build_initial_utility_list(&rule(&[7], &[1]), &idb).unwrap();
        assert!(never.rows.is_empty());
        assert_eq!((ul_total(&never), ul_left_total(&never)), (Utility::ZERO, Utility::ZERO));

        assert!(matches!(
            build_initial_utility_list(&rule(&[1, 2], &[5]), &idb),
            Err(RuleCoreError::NotInitial(_))
        ));
    }

    #[test]
    fn left_expansion_with_c() {
        let idb = example().index();
        let ul = build_initial_utility_list(&rule(&[1], &[5]), &idb).unwrap();
        let expanded = expand_utility_list(&ul, item(3), Direction::Left, &idb).unwrap();
        assert_eq!(expanded.rule, rule(&[1, 3], &[5]));
        let s2 = expanded.rows.iter().find(|r| r.sid == 2).unwrap();
        assert_eq!(five(s2), (2, u(16), u(9), u(4), u(0)));
        assert_eq!(expanded, build_utility_list(&expanded.rule, &idb));
    }

    #[test]
    fn right_expansion_with_g() {
        let db = example();
        let idb = db.index();
        let ul = build_initial_utility_list(&rule(&[1], &[5]), &idb).unwrap();
        let expanded = expand_utility_list(&ul, item(7), Direction::Right, &idb).unwrap();
        assert_eq!(expanded.rows.iter().map(|r| r.sid).collect::<Vec<_>>(), vec![1, 2, 4, 5]);
        assert_eq!(expanded.utility(), rule_utility(&expanded.rule, &db));
    }

    #[test]
    fn expansion_errors_and_empty_results() {
        let idb = example().index();
        let ul = build_initial_utility_list(&rule(&[2], &[5]), &idb).unwrap();
        // 1 < 2 violates the left order constraint
        assert!(matches!(
            expand_utility_list(&ul, item(1), Direction::Left, &idb),
            Err(RuleCoreError::OrderViolation { .. })
        ));
        assert!(expand_utility_list(&ul, item(5), Direction::Right, &idb).is_err());
        // item 9 occurs nowhere
        let none = expand_utility_list(&ul, item(9), Direction::Right, &idb).unwrap();
        assert!(none.rows.is_empty());
    }

    #[test]
    fn bounds_dominate_every_expansion_of_a_then_e() {
        let db = example();
        let idb = db.index();
        let ul = build_initial_utility_list(&rule(&[1], &[5]), &idb).unwrap();
        let others = items(&[2, 3, 4, 6, 7]);
        for mask_x in 0u32..32 {
            for mask_y in 0u32..32 {
                if mask_x & mask_y != 0 {
                    continue;
                }
                let pick = |m: u32| others.iter().enumerate().filter(move |(k, _)| m >> k & 1 == 1).map(|(_, &i)| i);
                let x: Vec<Item> = pick(mask_x).chain([item(1)]).collect();
                let y: Vec<Item> = pick(mask_y).chain([item(5)]).collect();
                let r = Rule::new(x, y).unwrap();
                // only descendants reachable under the order constraint
                if r.antecedent()[0] != item(1) || r.consequent()[0] != item(5) {
                    continue;
                }
                let util = rule_utility(&r, &db);
                assert!(ul_total(&ul) >= util, "{r}");
                if mask_y == 0 {
                    assert!(ul_left_total(&ul) >= util, "{r}");
                }
            }
        }
        assert!(ul_left_total(&ul) <= ul_total(&ul));
    }

    #[test]
    fn bond_matrix_values() {
        let db = example();
        let bvs = build_item_bitvectors(&db);
        let bm = build_bond_matrix(&bvs, &db.items());
        assert_eq!(bm.get(item(1), item(2)), Some(Fraction::from_integer(1)));
        assert_eq!(bm.get(item(3), item(6)), Some(Fraction::new(1, 3)));
        assert_eq!(bm.get(item(6), item(3)), Some(Fraction::new(1, 3)));
        // pairs that never co-occur are absent
        let lone = SequenceDatabase::from_text("1:1 -1 -2\n2:1 -1 -2", "1 1\n2 1").unwrap();
        let bm = build_bond_matrix(&build_item_bitvectors(&lone), &lone.items());
        assert_eq!(bm.get(item(1), item(2)), None);
        assert!(bm.is_empty());
    }

    #[test]
    fn esucs_values() {
        let db = example();
        let esucs = build_esucs(&db.index(), &db.items());
        assert_eq!(esucs.get(item(1), item(2)), Some(u(62)));
        assert_eq!(esucs.get(item(2), item(1)), None);
        assert_eq!(esucs.get(item(1), item(1)), None);
        assert!(esucs.to_tsv().starts_with("a\tb\tseu\n"));
    }

    fn random_db(seed: u64) -> SequenceDatabase {
        random_small_db(&mut ChaCha8Rng::seed_from_u64(seed), &SmallDbParams::default())
    }

    fn random_rule(rng: &mut impl Rng, universe: &[Item]) -> Option<Rule> {
        let x: Vec<Item> = universe.iter().copied().filter(|_| rng.random_bool(0.3)).collect();
        let y: Vec<Item> = universe.iter().copied().filter(|i| !x.contains(i) && rng.random_bool(0.3)).collect();
        Rule::new(x, y).ok()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn scratch_rows_agree_with_classification(seed in any::<u64>()) {
            let db = random_db(seed);
            let idb = db.index();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let universe: Vec<Item> = db.items().into_iter().collect();
            for _ in 0..20 {
                let Some(r) = random_rule(&mut rng, &universe) else { continue };
                let ul = build_utility_list(&r, &idb);
                prop_assert_eq!(ul.utility(), rule_utility(&r, &db));
                prop_assert_eq!(ul.sids(db.size()), rule_sids(&r, &db));
                prop_assert!(ul.total() <= seu_of_rule(&rule_sids(&r, &db), &db));
                for row in &ul.rows {
                    let seq = db.sequence(row.sid).unwrap();
                    let classes = classify_expansion_items(&r, seq).unwrap();
                    let sum = |is: &[Item]| is.iter().map(|&i| idb.get(row.sid).get(i).unwrap().utility).sum::<Utility>();
                    prop_assert_eq!(row.lutil, sum(&classes.only_left));
                    prop_assert_eq!(row.rutil, sum(&classes.only_right));
                    prop_assert_eq!(row.lrutil, sum(&classes.left_right));
                }
            }
        }

        #[test]
        fn incremental_expansion_equals_rebuild(seed in any::<u64>()) {
            let db = random_db(seed);
            let idb = db.index();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let universe: Vec<Item> = db.items().into_iter().collect();
            for _ in 0..20 {
                let Some(r) = random_rule(&mut rng, &universe) else { continue };
                let parent = build_utility_list(&r, &idb);
                for &i in &universe {
                    for dir in [Direction::Left, Direction::Right] {
                        if let Ok(inc) = expand_utility_list(&parent, i, dir, &idb) {
                            prop_assert_eq!(&inc, &build_utility_list(&inc.rule, &idb));
                        }
                    }
                }
            }
        }
    }
}
