//! Depth-first search for correlated high-utility sequential rules.
//!
//! The search starts from every promising 1*1 rule and grows consequents
//! (right expansions) and antecedents (left expansions), always appending an
//! item greater than the side's current items. A left expansion is never
//! followed by a right expansion, so every rule has exactly one derivation.
//!
//! Pruning, numbered as in the strategy counters:
//!
//! 1. items whose SEU is below `min_util` are removed up front;
//! 2. 1*1 rules whose SEU is below `min_util` are never expanded;
//! 3. a candidate whose extended side has bond below `min_bond` is dropped
//!    together with all its expansions;
//! 4. right expansion requires the utility-list total to reach `min_util`;
//! 5. left expansion requires the total without `rutil` to reach `min_util`;
//! 6. (optional) a candidate is dropped when the pairwise bond of the new
//!    item with the extended side's last item is below `min_bond`;
//! 7. (optional) a candidate is dropped when the ESUCS entry of the new item
//!    with the opposite side's last item is below `min_util`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::measures::{build_item_bitvectors, seu_of_item, BitVector, ItemBitVectors, Rule};
use crate::rulecore::{
    build_bond_matrix, build_utility_list_on, expand_utility_list, expansion_candidates, has_left_candidates,
    scan_pair_rules, BondMatrix, Direction, Esucs, UtilityList,
};
use crate::seqdb::{DbError, IndexedDatabase, Item, Sequence, SequenceDatabase};
use crate::units::{fraction_from_f64, parse_fraction, ratio_at_least, Fraction, NumberError, Utility};

/// Which optional pruning strategies are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Base,
    S6,
    S7,
    S6S7,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Base, Variant::S6, Variant::S7, Variant::S6S7];

    pub fn bond_matrix(self) -> bool {
        matches!(self, Variant::S6 | Variant::S6S7)
    }

    pub fn esucs(self) -> bool {
        matches!(self, Variant::S7 | Variant::S6S7)
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "base" => Ok(Variant::Base),
            "s6" => Ok(Variant::S6),
            "s7" => Ok(Variant::S7),
            "s6s7" => Ok(Variant::S6S7),
            other => Err(format!("unknown variant `{other}` (expected base, s6, s7 or s6s7)")),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Base => "base",
            Variant::S6 => "s6",
            Variant::S7 => "s7",
            Variant::S6S7 => "s6s7",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinerConfig {
    pub min_util: Utility,
    pub min_conf: Fraction,
    pub min_bond: Fraction,
    pub min_lift: Fraction,
    /// Strategy 6.
    pub enable_bond_matrix: bool,
    /// Strategy 7.
    pub enable_esucs: bool,
    /// Stop growing a consequent once confidence is below `min_conf` and no
    /// supporting sequence leaves room to grow the antecedent.
    pub enable_conf_prune: bool,
    /// Cap on `|X|` and `|Y|`.
    pub max_side: Option<usize>,
    /// Keep a log of every pruned subtree in [`MiningResult::prunes`].
    pub record_prunes: bool,
}

impl MinerConfig {
    /// Thresholds with both optional strategies enabled.
    pub fn new(min_util: Utility, min_conf: Fraction, min_bond: Fraction, min_lift: Fraction) -> Self {
        MinerConfig {
            min_util,
            min_conf,
            min_bond,
            min_lift,
            enable_bond_matrix: true,
            enable_esucs: true,
            enable_conf_prune: false,
            max_side: None,
            record_prunes: false,
        }
    }

    /// Thresholds from decimal strings, e.g. `("50", "0.7", "0.3", "1.1")`.
    pub fn parse(min_util: &str, min_conf: &str, min_bond: &str, min_lift: &str) -> Result<Self, ConfigError> {
        let cfg = MinerConfig::new(
            Utility::parse_threshold(min_util)?,
            parse_fraction(min_conf)?,
            parse_fraction(min_bond)?,
            parse_fraction(min_lift)?,
        );
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_f64(min_util: f64, min_conf: f64, min_bond: f64, min_lift: f64) -> Result<Self, ConfigError> {
        let cfg = MinerConfig::new(
            Utility::parse_threshold(&format!("{min_util}"))?,
            fraction_from_f64(min_conf)?,
            fraction_from_f64(min_bond)?,
            fraction_from_f64(min_lift)?,
        );
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.enable_bond_matrix = variant.bond_matrix();
        self.enable_esucs = variant.esucs();
        self
    }

    pub fn variant(&self) -> Variant {
        match (self.enable_bond_matrix, self.enable_esucs) {
            (false, false) => Variant::Base,
            (true, false) => Variant::S6,
            (false, true) => Variant::S7,
            (true, true) => Variant::S6S7,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let one = Fraction::from_integer(1);
        if self.min_conf > one {
            return Err(ConfigError::ConfidenceOutOfRange(self.min_conf));
        }
        if self.min_bond > one {
            return Err(ConfigError::BondOutOfRange(self.min_bond));
        }
        if self.max_side == Some(0) {
            return Err(ConfigError::ZeroMaxSide);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("min_conf must lie in [0, 1], got {0}")]
    ConfidenceOutOfRange(Fraction),
    #[error("min_bond must lie in [0, 1], got {0}")]
    BondOutOfRange(Fraction),
    #[error("max_side must be at least 1")]
    ZeroMaxSide,
    #[error(transparent)]
    Number(#[from] NumberError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Database(#[from] DbError),
}

/// A rule under expansion with its utility-list and the sequence sets of
/// its sides: `sids_x` / `sids_y` hold sequences containing all items of a
/// side, `sids_or_x` / `sids_or_y` those containing any of them.
#[derive(Debug, Clone)]
pub struct RuleContext {
    pub ul: UtilityList,
    pub sids_x: BitVector,
    pub sids_y: BitVector,
    pub sids_or_x: BitVector,
    pub sids_or_y: BitVector,
}

impl RuleContext {
    pub fn rule(&self) -> &Rule {
        &self.ul.rule
    }
}

/// An emitted rule with its measures.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct MinedRule {
    pub rule: Rule,
    pub utility: Utility,
    pub support: usize,
    pub confidence: Fraction,
    pub lift: Fraction,
    pub bond_x: Fraction,
    pub bond_y: Fraction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Strategy {
    /// 1: item SEU below `min_util`.
    ItemSeu,
    /// 2: 1*1 rule SEU below `min_util`.
    RuleSeu,
    /// 3: bond of the extended side below `min_bond`.
    SideBond,
    /// 4: utility-list total below `min_util`.
    RightBound,
    /// 5: utility-list total without `rutil` below `min_util`.
    LeftBound,
    /// 6: pairwise bond below `min_bond`.
    BondMatrix,
    /// 7: ESUCS below `min_util`.
    Esucs,
    Confidence,
}

/// The part of the search space a pruning decision removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrunedSubtree {
    /// Every rule containing the item.
    Item(Item),
    /// The rule and all of its expansions; `left_only` when the rule was
    /// reached by a left expansion and can only grow its antecedent.
    Node { rule: Rule, left_only: bool },
    /// Every expansion of the rule that grows its consequent.
    RightBranch(Rule),
    /// Every left-only expansion of the rule.
    LeftBranch(Rule),
}

impl PrunedSubtree {
    /// Whether `candidate` lies in this subtree of the canonical search.
    pub fn covers(&self, candidate: &Rule) -> bool {
        // `extends(side, base)`: side = base plus items greater than all of base.
        fn extends(side: &[Item], base: &[Item]) -> bool {
            let max = *base.last().unwrap();
            side.len() >= base.len()
                && base.iter().all(|i| side.binary_search(i).is_ok())
                && side.iter().filter(|i| base.binary_search(i).is_err()).all(|&i| i > max)
        }
        match self {
            PrunedSubtree::Item(item) => candidate.contains(*item),
            PrunedSubtree::Node { rule, left_only } => {
                extends(candidate.antecedent(), rule.antecedent())
                    && if *left_only {
                        candidate.consequent() == rule.consequent()
                    } else {
                        extends(candidate.consequent(), rule.consequent())
                    }
            }
            PrunedSubtree::RightBranch(rule) => {
                extends(candidate.antecedent(), rule.antecedent())
                    && extends(candidate.consequent(), rule.consequent())
                    && candidate.consequent().len() > rule.consequent().len()
            }
            PrunedSubtree::LeftBranch(rule) => {
                extends(candidate.antecedent(), rule.antecedent())
                    && candidate.antecedent().len() > rule.antecedent().len()
                    && candidate.consequent() == rule.consequent()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneEvent {
    pub strategy: Strategy,
    pub subtree: PrunedSubtree,
}

/// Search counters. Every field is a plain sum, so per-subtree counters
/// merge by addition.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct MiningStats {
    pub items: usize,
    pub promising_items: usize,
    /// 1*1 rules occurring in the filtered database.
    pub initial_rules: usize,
    pub initial_rules_kept: usize,
    pub pruned_s1: usize,
    pub pruned_s2: usize,
    pub pruned_s3: usize,
    pub pruned_s4: usize,
    pub pruned_s5: usize,
    pub pruned_s6: usize,
    pub pruned_s7: usize,
    pub pruned_conf: usize,
    /// Expansion candidates examined.
    pub candidates: usize,
    pub utility_lists_built: usize,
    /// Utility-list rows allocated, a proxy for peak memory.
    pub utility_list_rows: usize,
    /// Rules emitted by the search before deduplication.
    pub emitted: usize,
    /// Rules emitted more than once (zero for a canonical enumeration).
    pub duplicate_emissions: usize,
}

impl MiningStats {
    fn merge(mut self, o: MiningStats) -> MiningStats {
        self.items += o.items;
        self.promising_items += o.promising_items;
        self.initial_rules += o.initial_rules;
        self.initial_rules_kept += o.initial_rules_kept;
        self.pruned_s1 += o.pruned_s1;
        self.pruned_s2 += o.pruned_s2;
        self.pruned_s3 += o.pruned_s3;
        self.pruned_s4 += o.pruned_s4;
        self.pruned_s5 += o.pruned_s5;
        self.pruned_s6 += o.pruned_s6;
        self.pruned_s7 += o.pruned_s7;
        self.pruned_conf += o.pruned_conf;
        self.candidates += o.candidates;
        self.utility_lists_built += o.utility_lists_built;
        self.utility_list_rows += o.utility_list_rows;
        self.emitted += o.emitted;
        self.duplicate_emissions += o.duplicate_emissions;
        self
    }
}

#[derive(Debug, Clone)]
pub struct MiningResult {
    /// Canonically ordered, no duplicates.
    pub rules: Vec<MinedRule>,
    pub stats: MiningStats,
    pub prunes: Vec<PruneEvent>,
    pub elapsed: Duration,
}

/// Removes items whose SEU is below `min_util`, returning the promising
/// items and the filtered database. Itemsets and sequences left empty are
/// dropped; surviving sequences keep their sids and `|SD|` is unchanged.
pub fn filter_unpromising_items(db: &SequenceDatabase, min_util: Utility) -> (BTreeSet<Item>, SequenceDatabase) {
    let promising: BTreeSet<Item> = db
        .items()
        .into_iter()
        .filter(|&i| seu_of_item(i, db) >= min_util)
        .collect();
    let sequences = db
        .sequences
        .iter()
        .filter_map(|seq| {
            let itemsets: Vec<_> = seq
                .itemsets
                .iter()
                .map(|is| is.iter().copied().filter(|(i, _)| promising.contains(i)).collect::<Vec<_>>())
                .filter(|is| !is.is_empty())
                .collect();
            (!itemsets.is_empty()).then_some(Sequence { sid: seq.sid, itemsets })
        })
        .collect();
    let filtered = SequenceDatabase::from_parts(sequences, db.utilities.clone(), db.size());
    (promising, filtered)
}

/// The promising 1*1 rules of a filtered database, each with its
/// utility-list, plus the ESUCS built in the same scan.
#[derive(Debug, Clone)]
pub struct InitialRules {
    pub contexts: Vec<RuleContext>,
    pub esucs: Esucs,
    /// 1*1 rules that occur but whose SEU is below `min_util`.
    pub pruned: Vec<Rule>,
}

pub fn enumerate_initial_rules(filtered: &SequenceDatabase, min_util: Utility) -> InitialRules {
    let idb = filtered.index();
    let bvs = build_item_bitvectors(filtered);
    enumerate_initial_rules_with(&idb, &bvs, &filtered.items(), min_util)
}

fn enumerate_initial_rules_with(
    idb: &IndexedDatabase,
    bvs: &ItemBitVectors,
    promising: &BTreeSet<Item>,
    min_util: Utility,
) -> InitialRules {
    let (esucs, pair_sids) = scan_pair_rules(idb, promising);
    let mut pairs: Vec<_> = pair_sids.into_iter().collect();
    pairs.sort_unstable_by_key(|&(key, _)| key);
    let mut contexts = Vec::new();
    let mut pruned = Vec::new();
    for ((a, b), sids) in pairs {
        let rule = Rule::new([a], [b]).expect("pair items differ");
        if esucs.get(a, b).unwrap_or_default() < min_util {
            pruned.push(rule);
            continue;
        }
        let ul = build_utility_list_on(&rule, idb, sids);
        let (bv_a, bv_b) = (bvs.get(a), bvs.get(b));
        contexts.push(RuleContext {
            ul,
            sids_x: bv_a.clone(),
            sids_y: bv_b.clone(),
            sids_or_x: bv_a,
            sids_or_y: bv_b,
        });
    }
    InitialRules { contexts, esucs, pruned }
}

/// Prepared search: filtered database and the read-only structures shared
/// by every subtree.
pub struct Miner {
    cfg: MinerConfig,
    idb: IndexedDatabase,
    bvs: ItemBitVectors,
    bond_matrix: Option<BondMatrix>,
    esucs: Option<Esucs>,
    initial: Vec<RuleContext>,
    size: usize,
    base_stats: MiningStats,
    base_prunes: Vec<PruneEvent>,
    started: Instant,
}

/// Per-subtree output.
#[derive(Debug, Default)]
pub struct Sink {
    pub rules: Vec<MinedRule>,
    pub stats: MiningStats,
    pub prunes: Vec<PruneEvent>,
}

impl Sink {
    fn merge(mut self, other: Sink) -> Sink {
        self.rules.extend(other.rules);
        self.prunes.extend(other.prunes);
        self.stats = self.stats.merge(other.stats);
        self
    }
}

impl Miner {
    pub fn new(db: &SequenceDatabase, cfg: &MinerConfig) -> Result<Miner, MineError> {
        let started = Instant::now();
        cfg.validate()?;
        db.validate()?;
        let mut stats = MiningStats::default();
        let mut prunes = Vec::new();

        let all_items = db.items();
        let (promising, filtered) = filter_unpromising_items(db, cfg.min_util);
        stats.items = all_items.len();
        stats.promising_items = promising.len();
        stats.pruned_s1 = all_items.len() - promising.len();
        if cfg.record_prunes {
            prunes.extend(all_items.difference(&promising).map(|&i| PruneEvent {
                strategy: Strategy::ItemSeu,
                subtree: PrunedSubtree::Item(i),
            }));
        }

        let idb = filtered.index();
        let bvs = build_item_bitvectors(&filtered);
        let bond_matrix = cfg.enable_bond_matrix.then(|| build_bond_matrix(&bvs, &promising));
        let initial = enumerate_initial_rules_with(&idb, &bvs, &promising, cfg.min_util);
        stats.initial_rules = initial.contexts.len() + initial.pruned.len();
        stats.initial_rules_kept = initial.contexts.len();
        stats.pruned_s2 = initial.pruned.len();
        stats.utility_lists_built = initial.contexts.len();
        stats.utility_list_rows = initial.contexts.iter().map(|c| c.ul.rows.len()).sum();
        if cfg.record_prunes {
            prunes.extend(initial.pruned.into_iter().map(|rule| PruneEvent {
                strategy: Strategy::RuleSeu,
                subtree: PrunedSubtree::Node { rule, left_only: false },
            }));
        }
        Ok(Miner {
            cfg: cfg.clone(),
            idb,
            bvs,
            bond_matrix,
            esucs: cfg.enable_esucs.then_some(initial.esucs),
            initial: initial.contexts,
            size: db.size(),
            base_stats: stats,
            base_prunes: prunes,
            started,
        })
    }

    /// The promising 1*1 rules the search starts from.
    pub fn initial_rules(&self) -> &[RuleContext] {
        &self.initial
    }

    pub fn run(self) -> MiningResult {
        let sink = self
            .initial
            .par_iter()
            .map(|ctx| {
                let mut sink = Sink::default();
                self.visit(ctx, false, &mut sink);
                sink
            })
            .reduce(Sink::default, Sink::merge);
        let Sink { mut rules, mut stats, prunes } = sink;
        stats = stats.merge(self.base_stats);
        rules.sort_unstable();
        stats.emitted = rules.len();
        let before = rules.len();
        rules.dedup_by(|a, b| a.rule == b.rule);
        stats.duplicate_emissions = before - rules.len();
        let mut all_prunes = self.base_prunes;
        all_prunes.extend(prunes);
        MiningResult { rules, stats, prunes: all_prunes, elapsed: self.started.elapsed() }
    }

    fn prune(&self, sink: &mut Sink, strategy: Strategy, subtree: impl FnOnce() -> PrunedSubtree) {
        match strategy {
            Strategy::ItemSeu => sink.stats.pruned_s1 += 1,
            Strategy::RuleSeu => sink.stats.pruned_s2 += 1,
            Strategy::SideBond => sink.stats.pruned_s3 += 1,
            Strategy::RightBound => sink.stats.pruned_s4 += 1,
            Strategy::LeftBound => sink.stats.pruned_s5 += 1,
            Strategy::BondMatrix => sink.stats.pruned_s6 += 1,
            Strategy::Esucs => sink.stats.pruned_s7 += 1,
            Strategy::Confidence => sink.stats.pruned_conf += 1,
        }
        if self.cfg.record_prunes {
            sink.prunes.push(PruneEvent { strategy, subtree: subtree() });
        }
    }

    /// Emits `ctx` if it qualifies, then expands it. A rule reached by a
    /// left expansion (`left_only`) is only expanded further to the left.
    fn visit(&self, ctx: &RuleContext, left_only: bool, sink: &mut Sink) {
        let cfg = &self.cfg;
        let support = ctx.ul.support();
        let sup_x = ctx.sids_x.count();
        let sup_y = ctx.sids_y.count();
        let utility = ctx.ul.utility();
        let conf_ok = ratio_at_least(support as u64, sup_x as u64, &cfg.min_conf);
        if support > 0
            && utility >= cfg.min_util
            && conf_ok
            && ratio_at_least((self.size * support) as u64, (sup_x * sup_y) as u64, &cfg.min_lift)
            && ratio_at_least(sup_x as u64, ctx.sids_or_x.count() as u64, &cfg.min_bond)
            && ratio_at_least(sup_y as u64, ctx.sids_or_y.count() as u64, &cfg.min_bond)
        {
            sink.rules.push(MinedRule {
                rule: ctx.ul.rule.clone(),
                utility,
                support,
                confidence: Fraction::new(support as u64, sup_x as u64),
                lift: Fraction::new((self.size * support) as u64, (sup_x * sup_y) as u64),
                bond_x: Fraction::new(sup_x as u64, ctx.sids_or_x.count() as u64),
                bond_y: Fraction::new(sup_y as u64, ctx.sids_or_y.count() as u64),
            });
        }

        if !left_only {
            if ctx.ul.total() < cfg.min_util {
                self.prune(sink, Strategy::RightBound, || PrunedSubtree::RightBranch(ctx.ul.rule.clone()));
            } else if cfg.enable_conf_prune && !conf_ok && !has_left_candidates(&ctx.ul, &self.idb) {
                self.prune(sink, Strategy::Confidence, || PrunedSubtree::RightBranch(ctx.ul.rule.clone()));
            } else {
                self.right_expansion(ctx, sink);
            }
        }
        if ctx.ul.left_total() < cfg.min_util {
            self.prune(sink, Strategy::LeftBound, || PrunedSubtree::LeftBranch(ctx.ul.rule.clone()));
        } else {
            self.left_expansion(ctx, sink);
        }
    }

    /// Grows the consequent of `ctx` by each candidate item in turn.
    pub fn right_expansion(&self, ctx: &RuleContext, sink: &mut Sink) {
        self.expand(ctx, Direction::Right, sink)
    }

    /// Grows the antecedent of `ctx` by each candidate item in turn; the
    /// results are only expanded further to the left.
    pub fn left_expansion(&self, ctx: &RuleContext, sink: &mut Sink) {
        self.expand(ctx, Direction::Left, sink)
    }

    fn expand(&self, ctx: &RuleContext, direction: Direction, sink: &mut Sink) {
        let cfg = &self.cfg;
        let rule = ctx.rule();
        let side_len = match direction {
            Direction::Left => rule.antecedent().len(),
            Direction::Right => rule.consequent().len(),
        };
        if cfg.max_side.is_some_and(|cap| side_len >= cap) {
            return;
        }
        let (x, y) = (rule.last_antecedent(), rule.last_consequent());
        let left_only = direction == Direction::Left;
        for item in expansion_candidates(&ctx.ul, direction, &self.idb) {
            sink.stats.candidates += 1;
            let node = || PrunedSubtree::Node {
                rule: match direction {
                    Direction::Left => rule.push_antecedent(item),
                    Direction::Right => rule.push_consequent(item),
                },
                left_only,
            };
            if let Some(esucs) = &self.esucs {
                let key = match direction {
                    Direction::Left => (item, y),
                    Direction::Right => (x, item),
                };
                if esucs.get(key.0, key.1).is_none_or(|seu| seu < cfg.min_util) {
                    self.prune(sink, Strategy::Esucs, node);
                    continue;
                }
            }
            if let Some(matrix) = &self.bond_matrix {
                let last = if left_only { x } else { y };
                if matrix.get(last, item).is_none_or(|b| b < cfg.min_bond) {
                    self.prune(sink, Strategy::BondMatrix, node);
                    continue;
                }
            }
            let bv_item = self.bvs.get_ref(item).expect("candidate items occur in the database");
            let (sids_side, sids_or_side) = match direction {
                Direction::Left => (&ctx.sids_x, &ctx.sids_or_x),
                Direction::Right => (&ctx.sids_y, &ctx.sids_or_y),
            };
            let new_sids = sids_side.and(bv_item);
            let new_or = sids_or_side.or(bv_item);
            if !ratio_at_least(new_sids.count() as u64, new_or.count() as u64, &cfg.min_bond) {
                self.prune(sink, Strategy::SideBond, node);
                continue;
            }
            let ul = expand_utility_list(&ctx.ul, item, direction, &self.idb).expect("candidates respect item order");
            sink.stats.utility_lists_built += 1;
            sink.stats.utility_list_rows += ul.rows.len();
            let child = match direction {
                Direction::Left => RuleContext {
                    ul,
                    sids_x: new_sids,
                    sids_y: ctx.sids_y.clone(),
                    sids_or_x: new_or,
                    sids_or_y: ctx.sids_or_y.clone(),
                },
                Direction::Right => RuleContext {
                    ul,
                    sids_x: ctx.sids_x.clone(),
                    sids_y: new_sids,
                    sids_or_x: ctx.sids_or_x.clone(),
                    sids_or_y: new_or,
                },
            };
            self.visit(&child, left_only, sink);
        }
    }
}

/// Mines every rule meeting all four thresholds.
pub fn mine(db: &SequenceDatabase, cfg: &MinerConfig) -> Result<MiningResult, MineError> {
    Ok(Miner::new(db, cfg)?.run())
}
