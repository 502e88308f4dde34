//! Runs acceptance criteria 1 to 10 and prints one line per criterion.
//! Exits non-zero if any criterion fails.

use ht_core::suite::{acceptance, summary_table};

fn main() {
    let seed = std::env::var("HT_ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
    let outcomes = acceptance(seed);
    print!("{}", summary_table(&outcomes));
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed (seed {seed})", outcomes.len());
    } else {
        println!("acceptance: failed criteria {failed:?} (seed {seed})");
        std::process::exit(1);
    }
}
