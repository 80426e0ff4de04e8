//! Rule CSV and JSON run reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::measures::Rule;
use crate::miner::{MinedRule, MinerConfig, MiningResult, MiningStats, Variant};
use crate::seqdb::Item;
use crate::units::{format_fraction, Utility};

pub const CSV_HEADER: &str = "antecedent;consequent;utility;support;confidence;lift;bond_x;bond_y";

pub type Aliases = BTreeMap<Item, String>;

fn side(items: &[Item], aliases: Option<&Aliases>) -> String {
    items
        .iter()
        .map(|i| match aliases.and_then(|a| a.get(i)) {
            Some(label) => label.clone(),
            None => i.id().to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// One rule per line in canonical order, preceded by [`CSV_HEADER`]. Items
/// are written as ids unless `aliases` supplies a label.
pub fn rules_to_csv(rules: &[MinedRule], aliases: Option<&Aliases>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rules {
        let _ = writeln!(
            out,
            "{};{};{};{};{};{};{};{}",
            side(r.rule.antecedent(), aliases),
            side(r.rule.consequent(), aliases),
            r.utility,
            r.support,
            format_fraction(&r.confidence),
            format_fraction(&r.lift),
            format_fraction(&r.bond_x),
            format_fraction(&r.bond_y),
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsvError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

/// A row read back from a rules CSV written without aliases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvRule {
    pub rule: Rule,
    pub utility: Utility,
    pub support: usize,
}

pub fn parse_rules_csv(text: &str) -> Result<Vec<CsvRule>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        _ => return Err(CsvError::Malformed { line: 1, message: "missing header".into() }),
    }
    let mut rules = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let err = |message: String| CsvError::Malformed { line: idx + 1, message };
        let fields: Vec<&str> = line.split(';').collect();
        if fields.len() != 8 {
            return Err(err(format!("expected 8 fields, got {}", fields.len())));
        }
        let ids = |s: &str| -> Result<Vec<u32>, CsvError> {
            s.split(',').map(|t| t.parse().map_err(|_| err(format!("bad item `{t}`")))).collect()
        };
        let rule = Rule::from_ids(&ids(fields[0])?, &ids(fields[1])?).map_err(|e| err(e.to_string()))?;
        let utility = fields[2].parse().map_err(|e| err(format!("{e}")))?;
        let support = fields[3].parse().map_err(|_| err(format!("bad support `{}`", fields[3])))?;
        rules.push(CsvRule { rule, utility, support });
    }
    Ok(rules)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub min_util: String,
    pub min_conf: String,
    pub min_bond: String,
    pub min_lift: String,
    pub variant: Variant,
    pub conf_prune: bool,
    pub max_side: Option<usize>,
}

impl From<&MinerConfig> for ConfigEcho {
    fn from(cfg: &MinerConfig) -> Self {
        ConfigEcho {
            min_util: cfg.min_util.to_string(),
            min_conf: format_fraction(&cfg.min_conf),
            min_bond: format_fraction(&cfg.min_bond),
            min_lift: format_fraction(&cfg.min_lift),
            variant: cfg.variant(),
            conf_prune: cfg.enable_conf_prune,
            max_side: cfg.max_side,
        }
    }
}

/// Run summary written by `mine --report`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub config: ConfigEcho,
    pub sequences: usize,
    pub rules: usize,
    pub stats: MiningStats,
    pub wall_ms: f64,
    /// Peak resident set size in KiB, where the platform reports it.
    pub peak_rss_kib: Option<u64>,
}

impl RunReport {
    pub fn new(cfg: &MinerConfig, sequences: usize, result: &MiningResult) -> Self {
        RunReport {
            config: cfg.into(),
            sequences,
            rules: result.rules.len(),
            stats: result.stats,
            wall_ms: result.elapsed.as_secs_f64() * 1e3,
            peak_rss_kib: peak_rss_kib(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `VmHWM` from `/proc/self/status`.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::miner::mine;
    use crate::seqdb::{parse_aliases, SequenceDatabase};

    fn example_result() -> MiningResult {
        let db = SequenceDatabase::from_text(
            include_str!("../testdata/table1.db"),
            include_str!("../testdata/table1.ut"),
        )
        .unwrap();
        mine(&db, &MinerConfig::parse("50", "0.7", "0.3", "1.1").unwrap()).unwrap()
    }

    #[test]
    fn csv_layout() {
        let csv = rules_to_csv(&example_result().rules, None);
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines[1], "1,2,3,4;7;55;2;1;1.25;0.4;1");
        assert_eq!(lines[2], "1,2,4;7;74;4;1;1.25;0.8;1");
        assert_eq!(lines.len(), 5);
    }

    #[test]
    fn csv_round_trip() {
        let result = example_result();
        let parsed = parse_rules_csv(&rules_to_csv(&result.rules, None)).unwrap();
        assert_eq!(parsed.len(), result.rules.len());
        for (p, r) in parsed.iter().zip(&result.rules) {
            assert_eq!((&p.rule, p.utility, p.support), (&r.rule, r.utility, r.support));
        }
        assert!(parse_rules_csv("nope").is_err());
        assert!(parse_rules_csv(&format!("{CSV_HEADER}\n1;2;3\n")).is_err());
    }

    #[test]
    fn aliases_label_items() {
        let aliases = parse_aliases(include_str!("../testdata/table1.alias")).unwrap();
        let csv = rules_to_csv(&example_result().rules, Some(&aliases));
        assert!(csv.lines().any(|l| l.starts_with("a,b,d;g;74;")));
    }

    #[test]
    fn report_json() {
        let result = example_result();
        let cfg = MinerConfig::parse("50", "0.7", "0.3", "1.1").unwrap();
        let json: serde_json::Value = serde_json::from_str(&RunReport::new(&cfg, 5, &result).to_json()).unwrap();
        assert_eq!(json["rules"], 4);
        assert_eq!(json["config"]["min_lift"], "1.1");
        assert_eq!(json["config"]["variant"], "s6s7");
        assert!(json["stats"]["utility_lists_built"].as_u64().unwrap() > 0);
    }
}
