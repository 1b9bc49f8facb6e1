//! Reusing computed bases across runs.
//!
//! The first lookup computes the spasm of C8 and stores it; the second
//! reads it back and is verified against its checksum.

use std::time::Instant;

use homspasm::features::BasisCache;
use homspasm::graph::{canonical_form, Graph};
use homspasm::spasm::spasm_of;

fn main() {
    let dir = std::env::temp_dir().join("homspasm-example-cache");
    let cache = BasisCache::new(&dir);
    let c8 = Graph::cycle(8);
    let key = canonical_form(&c8).key;

    for attempt in ["first", "second"] {
        let start = Instant::now();
        let basis = cache.get_or_compute(&key, "sub", || spasm_of(&c8)).unwrap();
        println!(
            "{attempt} lookup: {} terms in {:.1} ms",
            basis.len(),
            start.elapsed().as_secs_f64() * 1e3
        );
    }
    println!("stored at {}", cache.path_for(&key, "sub").display());
}
