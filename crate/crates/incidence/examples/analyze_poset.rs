//! Build a poset from covers and walk both decompositions: connected
//! components, then chain regions within each component.
//!
//! Run with: cargo run --example analyze_poset

use incidence::poset::FinitePoset;
use incidence::structure;

fn main() {
    // two components: a branching poset and a disjoint 3-chain
    let poset = FinitePoset::from_covers(
        &["a", "b", "c", "d", "e", "f", "g", "h", "i"],
        &[
            ("a", "b"),
            ("b", "d"),
            ("a", "c"),
            ("c", "e"),
            ("c", "f"),
            ("g", "h"),
            ("h", "i"),
        ],
    )
    .expect("covers are acyclic");

    println!("elements: {}", poset.elements().join(" "));
    println!("covers:   {:?}", named_pairs(&poset, poset.covers()));
    println!("minimal:  {}", poset.names(&poset.minimal_elements()).join(" "));
    println!("maximal:  {}", poset.names(&poset.maximal_elements()).join(" "));

    let b = poset.index_of("b").unwrap();
    let e = poset.index_of("e").unwrap();
    println!("b comparable to e? {}", poset.comparable(b, e));
    let g = poset.index_of("g").unwrap();
    let i = poset.index_of("i").unwrap();
    println!("interval [g, i]: {}", poset.names(&poset.interval(g, i)).join(" "));

    for c in 0..poset.components().count() {
        println!("component {c}: {}", poset.names(poset.components().members(c)).join(" "));
        for chain in poset.maximal_chains(c) {
            println!("  maximal chain: {}", poset.names(chain).join(" < "));
        }
        let regions = poset.regions(c);
        for j in 0..regions.count() {
            println!("  chain region {j}: {}", poset.names(regions.members(j)).join(" "));
        }
    }

    println!("min maximal chain size: {}", poset.min_maximal_chain_size());
    println!(
        "decomposition precondition: {}",
        if structure::check_preconditions(&poset).passed() {
            "satisfied"
        } else {
            "violated"
        }
    );
}

fn named_pairs(poset: &FinitePoset, pairs: &[(usize, usize)]) -> Vec<(String, String)> {
    pairs
        .iter()
        .map(|&(x, y)| {
            (
                poset.identifier(x).to_string(),
                poset.identifier(y).to_string(),
            )
        })
        .collect()
}
