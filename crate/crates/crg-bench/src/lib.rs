//! Fixtures shared by the benchmark targets. Everything is seeded so runs
//! compare like with like across checkouts.

use crg_core::{construct, EdgeColoring};

/// A 60-vertex coloring with every color degree capped at 5: the workload
/// the counting and sampling procedures are sized for.
pub fn delta_good_k60() -> EdgeColoring {
    construct::random_delta_good(60, 5, 1).unwrap()
}

/// Self-product of the 6-vertex lexical coloring, 36 vertices.
pub fn lexical_product_k36() -> EdgeColoring {
    let base = construct::lexical_coloring(6).unwrap();
    construct::product(&base, &base).unwrap()
}
