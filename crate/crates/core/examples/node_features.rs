//! From a JSONL dataset to an encoded node-level feature matrix.
//!
//! Parameters are given the way the command line takes them. Rows are
//! `graph_id:vertex`; the derived columns hold the per-vertex value of
//! each parameter next to the homomorphism columns it was built from.

use std::io::stdout;

use homspasm::cli::{expand_specs, ExpandOptions};
use homspasm::features::{
    compute_features, encode, parse_jsonl, write_csv, Dataset, EncodingSpec, FeatureConfig,
};
use homspasm::spasm::Level;

const DATA: &str = r#"{"id":"bowtie","num_nodes":5,"edges":[[0,1],[1,2],[2,0],[2,3],[3,4],[4,2]]}
{"id":"square","num_nodes":4,"edges":[[0,1],[1,2],[2,3],[3,0]]}
{"id":"house","num_nodes":5,"edges":[[0,1],[1,2],[2,3],[3,0],[0,4],[1,4]]}
"#;

fn main() {
    let ds = Dataset::new("inline", parse_jsonl("inline", DATA).unwrap()).unwrap();
    let specs = ["C3@0".to_string(), "C4@0".to_string()];
    let params = expand_specs(&specs, &ExpandOptions::default()).unwrap();
    let config = FeatureConfig {
        level: Level::Node,
        include_derived: true,
        ..Default::default()
    };
    let raw = compute_features(&ds, &params, &config).unwrap();
    println!(
        "raw counts ({} rows, {} columns):",
        raw.row_count(),
        raw.column_count()
    );
    write_csv(&raw, stdout()).unwrap();

    let encoded = encode(&raw, EncodingSpec::ZScore).unwrap();
    println!("\nz-scored:");
    write_csv(&encoded, stdout()).unwrap();
}
