use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cousr::measures::{build_item_bitvectors, rule_sids, rule_utility, Rule};
use cousr::miner::{mine, MinerConfig, Variant};
use cousr::oracle::{enumerate_all_rules, oracle_chusrs, qualifies, OracleLimits};
use cousr::report::{parse_rules_csv, rules_to_csv};
use cousr::synthetic::{random_config, random_small_db, SmallDbParams};
use cousr::units::{Fraction, Utility};
use cousr::SequenceDatabase;

fn case(seed: u64) -> (SequenceDatabase, MinerConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let db = random_small_db(&mut rng, &SmallDbParams::default());
    let cfg = random_config(&mut rng, &db);
    (db, cfg)
}

fn rule_set(db: &SequenceDatabase, cfg: &MinerConfig) -> BTreeSet<Rule> {
    mine(db, cfg).unwrap().rules.into_iter().map(|r| r.rule).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matches_oracle(seed in any::<u64>()) {
        let (db, cfg) = case(seed);
        let expected = oracle_chusrs(&db, &cfg, &OracleLimits::default()).unwrap();
        for v in Variant::ALL {
            let got = mine(&db, &cfg.clone().with_variant(v)).unwrap();
            prop_assert_eq!(&got.rules, &expected, "variant {}", v);
            prop_assert_eq!(got.stats.duplicate_emissions, 0);
        }
    }

    #[test]
    fn confidence_prune_and_side_cap_keep_answers(seed in any::<u64>(), cap in 1usize..4) {
        let (db, mut cfg) = case(seed);
        let plain = mine(&db, &cfg).unwrap().rules;
        cfg.enable_conf_prune = true;
        prop_assert_eq!(&mine(&db, &cfg).unwrap().rules, &plain);
        cfg.max_side = Some(cap);
        let capped = mine(&db, &cfg).unwrap().rules;
        let expected: Vec<_> = plain
            .into_iter()
            .filter(|r| r.rule.antecedent().len() <= cap && r.rule.consequent().len() <= cap)
            .collect();
        prop_assert_eq!(capped, expected);
    }

    #[test]
    fn optional_strategies_only_remove_work(seed in any::<u64>()) {
        let (db, cfg) = case(seed);
        let built = |v: Variant| mine(&db, &cfg.clone().with_variant(v)).unwrap().stats.utility_lists_built;
        let (base, s6, s7, both) = (built(Variant::Base), built(Variant::S6), built(Variant::S7), built(Variant::S6S7));
        prop_assert!(both <= s6 && s6 <= base);
        prop_assert!(both <= s7 && s7 <= base);
    }

    #[test]
    fn raising_a_threshold_shrinks_the_answer(seed in any::<u64>(), which in 0usize..4, step in 1u64..5) {
        let (db, cfg) = case(seed);
        let mut stricter = cfg.clone();
        match which {
            0 => stricter.min_util = cfg.min_util + Utility::from_units(step),
            1 => stricter.min_conf = (cfg.min_conf + Fraction::new(step, 10)).min(Fraction::from_integer(1)),
            2 => stricter.min_bond = (cfg.min_bond + Fraction::new(step, 10)).min(Fraction::from_integer(1)),
            _ => stricter.min_lift = cfg.min_lift + Fraction::new(step, 4),
        }
        prop_assert!(rule_set(&db, &stricter).is_subset(&rule_set(&db, &cfg)));
    }

    #[test]
    fn pruned_subtrees_hold_no_answers(seed in any::<u64>()) {
        let (db, mut cfg) = case(seed);
        cfg.record_prunes = true;
        cfg.enable_conf_prune = seed % 2 == 0;
        let answers: Vec<_> = enumerate_all_rules(&db, &OracleLimits::default())
            .unwrap()
            .into_iter()
            .filter(|r| qualifies(r, &cfg))
            .collect();
        for v in Variant::ALL {
            let cfg = cfg.clone().with_variant(v);
            for event in mine(&db, &cfg).unwrap().prunes {
                for a in &answers {
                    prop_assert!(!event.subtree.covers(&a.rule), "{:?} covers {}", event, a.rule);
                }
            }
        }
    }

    #[test]
    fn reported_measures_recompute(seed in any::<u64>()) {
        let (db, cfg) = case(seed);
        let result = mine(&db, &cfg).unwrap();
        let bvs = build_item_bitvectors(&db);
        let parsed = parse_rules_csv(&rules_to_csv(&result.rules, None)).unwrap();
        prop_assert_eq!(parsed.len(), result.rules.len());
        for (row, mined) in parsed.iter().zip(&result.rules) {
            prop_assert_eq!(&row.rule, &mined.rule);
            prop_assert_eq!(row.utility, rule_utility(&row.rule, &db));
            prop_assert_eq!(row.support, rule_sids(&row.rule, &db).count());
            let sup_x = bvs.all_of(row.rule.antecedent()).count() as u64;
            prop_assert_eq!(mined.confidence, Fraction::new(row.support as u64, sup_x));
        }
    }
}

#[test]
fn zero_thresholds_find_every_occurring_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let db = random_small_db(&mut rng, &SmallDbParams::default());
        let cfg = MinerConfig::new(Utility::ZERO, Fraction::from_integer(0), Fraction::from_integer(0), Fraction::from_integer(0))
            .with_variant(if rng.random_bool(0.5) { Variant::Base } else { Variant::S6S7 });
        let occurring = enumerate_all_rules(&db, &OracleLimits::default())
            .unwrap()
            .into_iter()
            .filter(|r| r.support > 0)
            .count();
        assert_eq!(mine(&db, &cfg).unwrap().rules.len(), occurring);
    }
}
