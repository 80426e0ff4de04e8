//! Seed-deterministic database generators for tests, `verify --random` and
//! `bench --synthetic`.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::{Distribution, Zipf};
use thiserror::Error;

use crate::miner::MinerConfig;
use crate::seqdb::{Item, Itemset, SequenceDatabase, UtilityTable};
use crate::units::{Fraction, Utility};

/// Shape of the small random databases used for oracle cross-checks.
#[derive(Debug, Clone)]
pub struct SmallDbParams {
    pub max_sequences: usize,
    pub max_items: usize,
    pub max_itemset_len: usize,
    /// Upper bound on the number of items drawn into one sequence.
    pub max_sequence_items: usize,
}

impl Default for SmallDbParams {
    fn default() -> Self {
        SmallDbParams {
            max_sequences: 8,
            max_items: 8,
            max_itemset_len: 3,
            max_sequence_items: 7,
        }
    }
}

/// A random database of at most `max_sequences` sequences over at most
/// `max_items` items. Unit prices are multiples of 0.5 in `[0.5, 10]`, so
/// fractional utilities are exercised too.
pub fn random_small_db(rng: &mut impl Rng, params: &SmallDbParams) -> SequenceDatabase {
    let n_items = rng.random_range(2..=params.max_items.max(2));
    let n_seq = rng.random_range(1..=params.max_sequences.max(1));
    let universe: Vec<Item> = (1..=n_items as u32).filter_map(Item::new).collect();
    let mut sequences = Vec::with_capacity(n_seq);
    for _ in 0..n_seq {
        let len = rng.random_range(1..=params.max_sequence_items.min(n_items));
        let mut chosen = universe.clone();
        chosen.shuffle(rng);
        chosen.truncate(len);
        sequences.push(group_into_itemsets(rng, &chosen, params.max_itemset_len));
    }
    let table = universe
        .iter()
        .map(|&i| (i, Utility::from_micros(rng.random_range(1..=20u128) * 500_000)))
        .collect();
    SequenceDatabase::from_sequences(sequences, table).expect("generated database is valid")
}

/// Random thresholds scaled to `db`: minutil up to half the database
/// utility, confidence and bond on a 0.1 grid, lift from a small menu.
pub fn random_config(rng: &mut impl Rng, db: &SequenceDatabase) -> MinerConfig {
    let total = db.total_utility().micros();
    let min_util = Utility::from_micros(total * rng.random_range(0..=50u128) / 100);
    let min_conf = Fraction::new(rng.random_range(0..=10), 10);
    let min_bond = Fraction::new(rng.random_range(0..=10), 10);
    let lifts = [(0, 1), (1, 2), (1, 1), (11, 10), (3, 2), (2, 1)];
    let (n, d) = lifts[rng.random_range(0..lifts.len())];
    MinerConfig::new(min_util, min_conf, min_bond, Fraction::new(n, d))
}

fn group_into_itemsets(rng: &mut impl Rng, items: &[Item], max_len: usize) -> Vec<Itemset> {
    let mut itemsets = Vec::new();
    let mut rest = items;
    while !rest.is_empty() {
        let take = rng.random_range(1..=max_len.max(1)).min(rest.len());
        let (head, tail) = rest.split_at(take);
        itemsets.push(head.iter().map(|&i| (i, rng.random_range(1..=5))).collect());
        rest = tail;
    }
    itemsets
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("synthetic spec must be `n_seq,n_items,avg_len,seed` with positive sizes, got `{0}`")]
pub struct SyntheticSpecError(String);

/// Parameters of a large synthetic database: zipf-distributed items,
/// quantities uniform in `1..=5`, unit prices uniform in `1..=10`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticSpec {
    pub sequences: usize,
    pub items: usize,
    /// Mean number of items per sequence.
    pub avg_len: usize,
    pub seed: u64,
}

impl FromStr for SyntheticSpec {
    type Err = SyntheticSpecError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = || SyntheticSpecError(text.to_string());
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        let [n_seq, n_items, avg_len, seed] = parts.as_slice() else {
            return Err(err());
        };
        let spec = SyntheticSpec {
            sequences: n_seq.parse().map_err(|_| err())?,
            items: n_items.parse().map_err(|_| err())?,
            avg_len: avg_len.parse().map_err(|_| err())?,
            seed: seed.parse().map_err(|_| err())?,
        };
        if spec.sequences == 0 || spec.items < 2 || spec.avg_len == 0 {
            return Err(err());
        }
        Ok(spec)
    }
}

pub fn synthetic_db(spec: &SyntheticSpec) -> SequenceDatabase {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let zipf = Zipf::new(spec.items as f64, 1.0).expect("at least one item");
    let table: UtilityTable = (1..=spec.items as u32)
        .filter_map(Item::new)
        .map(|i| (i, Utility::from_units(rng.random_range(1..=10))))
        .collect();
    let max_len = (2 * spec.avg_len - 1).min(spec.items);
    let mut sequences = Vec::with_capacity(spec.sequences);
    for _ in 0..spec.sequences {
        let len = rng.random_range(1..=max_len);
        let mut chosen: Vec<Item> = Vec::with_capacity(len);
        // Rejection on repeats; bounded so a skewed draw cannot spin forever.
        for _ in 0..len * 20 {
            if chosen.len() == len {
                break;
            }
            let item = Item::new(zipf.sample(&mut rng) as u32).expect("zipf samples are >= 1");
            if !chosen.contains(&item) {
                chosen.push(item);
            }
        }
        sequences.push(group_into_itemsets(&mut rng, &chosen, 3));
    }
    SequenceDatabase::from_sequences(sequences, table).expect("generated database is valid")
}
