//! Load a typed CSV with a JSON schema, drop incomplete rows, and recode
//! everything to ±1.
//!
//! `cargo run --example csv_ingest`

use grafo::dataset::{dichotomize, ingest_reader, Schema};

const SCHEMA: &str = r#"{"columns": [
    {"name": "age", "kind": "continuous"},
    {"name": "smoker", "kind": "categorical", "levels": ["no", "yes"]},
    {"name": "region", "kind": "categorical", "levels": ["north", "south", "east"]}
]}"#;

const CSV: &str = "\
age,smoker,region
34,no,north
51,yes,south
NA,no,east
47,yes,east
29,no,north
62,yes,south
";

pub fn run() -> grafo::Result<()> {
    let schema: Schema = serde_json::from_str(SCHEMA)?;
    let ingested = ingest_reader(CSV.as_bytes(), &schema)?;
    let data = &ingested.data;
    println!("{} rows kept, {} dropped", data.n_rows(), ingested.rows_dropped);

    let binary = dichotomize(data)?;
    for (name, rule) in binary.names().iter().zip(binary.mapping()) {
        println!("{name:>8}: {rule:?}");
    }
    println!("region as ±1: {:?}", binary.values()[2]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> grafo::Result<()> {
    run()
}
