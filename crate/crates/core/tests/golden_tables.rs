//! Full decomposition tables transcribed into `tests/data`, compared row by row.

use vplane_core::{CodecMap, NumberSystem, WeightKind};

fn load(name: &str) -> Vec<(u64, String)> {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{path}: {e}"))
        .lines()
        .map(|line| {
            let (value, bits) = line.split_once('\t').expect("tab-separated row");
            (value.parse().unwrap(), bits.to_owned())
        })
        .collect()
}

fn check(kind: WeightKind, name: &str) {
    let map = CodecMap::build(&NumberSystem::new(kind, 8).unwrap());
    let rows = load(name);
    assert!(!rows.is_empty());
    for (value, bits) in rows {
        assert_eq!(
            map.decompose(value).unwrap().to_string(),
            bits,
            "{kind} value {value}"
        );
    }
}

#[test]
fn fibonacci_table_matches() {
    check(WeightKind::FibonacciP(1), "table1_fibonacci.tsv");
}

#[test]
fn prime_table_matches() {
    check(WeightKind::Prime, "table2_prime.tsv");
}

#[test]
fn natural_table_matches() {
    check(WeightKind::Natural, "table5_natural.tsv");
}

#[test]
fn dump_lines_match_transcription() {
    let map = CodecMap::build(&NumberSystem::new(WeightKind::FibonacciP(1), 8).unwrap());
    let expected: String = load("table1_fibonacci.tsv")
        .into_iter()
        .map(|(v, b)| format!("{v}\t{b}\n"))
        .collect();
    assert_eq!(map.dump(), expected);
}
