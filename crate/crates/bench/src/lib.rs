//! Fixtures shared by the benchmarks.

use cikit::relation_lang::parse_statement;
use cikit::{Budget, CIStatement};

pub fn budget() -> Budget {
    Budget::seconds(3600.0)
}

pub fn statements(list: &[&str]) -> Vec<CIStatement> {
    list.iter().map(|s| parse_statement(s).expect("valid statement")).collect()
}

/// All six binary n = 3 elementary statements (the model M4).
pub fn full_model() -> Vec<CIStatement> {
    statements(&["1 _||_ 2 | e", "1 _||_ 3 | e", "2 _||_ 3 | e", "1 _||_ 2 | 3", "1 _||_ 3 | 2", "2 _||_ 3 | 1"])
}

pub fn appendix_corrected() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/appendix_corrected.rel")).expect("data file")
}
