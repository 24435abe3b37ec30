//! Randomized and exhaustive invariants that cut across modules: the
//! normalized representation, the pattern detectors against brute-force
//! oracles, counting against the degree formula, products against their
//! definition, and the search engine against plain enumeration.

use std::collections::HashSet;

use proptest::prelude::*;

use crg_core::coloring::colex_pairs;
use crg_core::construct::{self, ProductDescriptor};
use crg_core::detect::{self, PatternKind};
use crg_core::io;
use crg_core::proof;
use crg_core::search::{self, ExistsOutcome, PatternQuery, SearchLimits, SearchStatus};
use crg_core::{ColorId, EdgeColoring, Vertex, VertexSet};

fn coloring_from_raw(n: u32, raw: &[i64]) -> EdgeColoring {
    let entries: Vec<(Vertex, Vertex, i64)> =
        colex_pairs(n).zip(raw.iter().copied()).map(|((u, v), c)| (u, v, c)).collect();
    EdgeColoring::from_edge_list(n, &entries).unwrap()
}

/// Vertex count plus one raw color per colex edge.
fn raw_coloring(n_range: std::ops::Range<u32>) -> impl Strategy<Value = (u32, Vec<i64>)> {
    n_range.prop_flat_map(|n| {
        let e = (n * (n - 1) / 2) as usize;
        (Just(n), prop::collection::vec(-4i64..9, e))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalization_ignores_color_names_and_edge_order((n, raw) in raw_coloring(2..8)) {
        let a = coloring_from_raw(n, &raw);
        // Rename colors injectively and list the edges backwards.
        let mut renamed: Vec<(Vertex, Vertex, i64)> = colex_pairs(n)
            .zip(raw.iter())
            .map(|((u, v), &c)| (v, u, 1000 - 13 * c))
            .collect();
        renamed.reverse();
        let b = EdgeColoring::from_edge_list(n, &renamed).unwrap();
        prop_assert_eq!(&a, &b);
    }

    #[test]
    fn normalization_round_trips((n, raw) in raw_coloring(2..8)) {
        let chi = coloring_from_raw(n, &raw);
        let back: Vec<(Vertex, Vertex, i64)> =
            chi.edges().map(|(u, v, c)| (u, v, c as i64)).collect();
        prop_assert_eq!(&EdgeColoring::from_edge_list(n, &back).unwrap(), &chi);

        let text = io::write_crg(&chi, &[]);
        let doc = io::parse_crg(&text).unwrap();
        prop_assert_eq!(&doc.coloring, &chi);
        prop_assert!(!doc.renormalized);
        prop_assert_eq!(io::write_crg(&doc.coloring, &[]), text);
    }

    #[test]
    fn parser_tolerates_scrambled_edge_lines((n, raw) in raw_coloring(2..7)) {
        let chi = coloring_from_raw(n, &raw);
        let mut lines: Vec<String> =
            chi.edges().map(|(u, v, c)| format!("{v} {u} {c}")).collect();
        lines.reverse();
        let text = format!("crg 1\n# scrambled\nn {n}\n{}\n", lines.join("\n"));
        let doc = io::parse_crg(&text).unwrap();
        prop_assert_eq!(&doc.coloring, &chi);
        prop_assert_eq!(doc.comments, vec!["scrambled".to_string()]);
    }

    #[test]
    fn degree_sums_count_each_edge_twice((n, raw) in raw_coloring(2..9)) {
        let chi = coloring_from_raw(n, &raw);
        let full = chi.all_vertices();
        let mut total = 0;
        for c in 0..chi.color_count() {
            let degree_sum: usize = chi.vertices().map(|v| chi.color_degree(v, c)).sum();
            let edges = chi.edges_in_color(&full, c);
            prop_assert_eq!(degree_sum, 2 * edges);
            prop_assert!(edges > 0, "normalized colorings use every color id");
            total += edges;
        }
        prop_assert_eq!(total, chi.edge_count());
    }

    #[test]
    fn patterns_survive_vertex_deletion(
        (n, raw) in raw_coloring(4..8),
        pick in any::<prop::sample::Index>(),
    ) {
        let chi = coloring_from_raw(n, &raw);
        let set = chi.all_vertices();
        let doomed = set.as_slice()[pick.index(set.len())];
        let smaller = set.without(doomed);
        let before: HashSet<PatternKind> =
            detect::classify_clique(&chi, &set).unwrap().iter().map(|w| w.kind).collect();
        let after: HashSet<PatternKind> =
            detect::classify_clique(&chi, &smaller).unwrap().iter().map(|w| w.kind).collect();
        for kind in before {
            prop_assert!(after.contains(&kind), "{kind} lost on deleting {doomed}");
        }
    }

    #[test]
    fn pattern_implications_hold((n, raw) in raw_coloring(3..8), sub in prop::sample::subsequence((1u32..=7).collect::<Vec<_>>(), 2..=7)) {
        let chi = coloring_from_raw(n, &raw);
        let sub: Vec<Vertex> = sub.into_iter().filter(|&v| v <= n).collect();
        prop_assume!(sub.len() >= 2);
        let set = VertexSet::new(sub);
        let kinds: HashSet<PatternKind> =
            detect::classify_clique(&chi, &set).unwrap().iter().map(|w| w.kind).collect();

        for lex in [PatternKind::UpperLexical, PatternKind::LowerLexical] {
            if kinds.contains(&lex) {
                prop_assert!(kinds.contains(&PatternKind::Lexical));
            }
        }
        if kinds.contains(&PatternKind::Lexical) {
            prop_assert!(kinds.contains(&PatternKind::Orderable));
        }
        if kinds.contains(&PatternKind::Monochromatic) {
            prop_assert!(kinds.contains(&PatternKind::Orderable));
            if set.len() >= 3 {
                prop_assert!(!kinds.contains(&PatternKind::Lexical));
            }
        }
        if set.len() >= 3 && kinds.contains(&PatternKind::Rainbow) {
            prop_assert!(!kinds.contains(&PatternKind::Monochromatic));
        }
    }

    #[test]
    fn ordering_detectors_match_permutation_oracles((n, raw) in raw_coloring(3..7)) {
        let chi = coloring_from_raw(n, &raw);
        let set = chi.all_vertices();
        prop_assert_eq!(
            detect::is_orderable(&chi, &set).unwrap().is_some(),
            detect::brute_force_is_orderable(&chi, &set).unwrap()
        );
        prop_assert_eq!(
            detect::is_lexical(&chi, &set).unwrap().is_some(),
            detect::brute_force_is_lexical(&chi, &set).unwrap()
        );
    }

    #[test]
    fn found_witnesses_verify((n, raw) in raw_coloring(3..7), k in 2u32..6) {
        let chi = coloring_from_raw(n, &raw);
        prop_assume!(k <= n);
        for kind in PatternKind::ALL {
            if let Some(w) = detect::find_clique(&chi, kind, k).unwrap() {
                prop_assert_eq!(w.kind, kind);
                prop_assert_eq!(w.vertices.len(), k as usize);
                prop_assert!(w.verify(&chi));
            }
        }
        if let Some(w) = detect::find_ordered_canonical(&chi, k).unwrap() {
            prop_assert!(w.verify(&chi));
        }
    }

    #[test]
    fn restriction_relabels_and_lifts_faithfully(
        (n, raw) in raw_coloring(4..8),
        sub in prop::sample::subsequence((1u32..=7).collect::<Vec<_>>(), 2..=7),
    ) {
        let chi = coloring_from_raw(n, &raw);
        let members: Vec<Vertex> = sub.into_iter().filter(|&v| v <= n).collect();
        prop_assume!(members.len() >= 2);
        let set = VertexSet::new(members);
        let (sub_chi, map) = chi.restrict(&set).unwrap();
        prop_assert_eq!(sub_chi.n() as usize, set.len());
        // Colors agree pairwise through the relabeling.
        for (a, b) in set.pairs() {
            for (c, d) in set.pairs() {
                let host = chi.color(a, b) == chi.color(c, d);
                let sub = sub_chi.color(map.new_of(a).unwrap(), map.new_of(b).unwrap())
                    == sub_chi.color(map.new_of(c).unwrap(), map.new_of(d).unwrap());
                prop_assert_eq!(host, sub);
            }
        }
        for kind in PatternKind::ALL {
            if let Some(w) = detect::find_clique(&sub_chi, kind, 2).unwrap() {
                let lifted = w.lift(&map, &chi);
                prop_assert!(lifted.verify(&chi));
                for v in lifted.vertices.iter() {
                    prop_assert!(set.contains(v));
                }
            }
        }
    }

    #[test]
    fn products_follow_the_block_definition(
        (na, raw_a) in raw_coloring(2..5),
        (nb, raw_b) in raw_coloring(2..5),
    ) {
        let outer = coloring_from_raw(na, &raw_a);
        let inner = coloring_from_raw(nb, &raw_b);
        let desc = ProductDescriptor { outer: &outer, inner: &inner };
        let prod = desc.build().unwrap();
        prop_assert_eq!(prod.n() as u64, desc.size());
        prop_assert_eq!(prod.color_count(), outer.color_count() + inner.color_count());

        // Definitional color of a product edge: inner color within a block,
        // outer color (offset past the inner palette) across blocks.
        let def = |x: Vertex, y: Vertex| -> (bool, ColorId) {
            let (bx, ix) = desc.block_of(x);
            let (by, iy) = desc.block_of(y);
            if bx == by {
                (true, inner.color(ix, iy))
            } else {
                (false, outer.color(bx, by))
            }
        };
        // Normalization renames colors, so compare equality classes.
        let edges: Vec<(Vertex, Vertex)> = colex_pairs(prod.n()).collect();
        for (i, &(a, b)) in edges.iter().enumerate() {
            // Block round trip while we are here.
            let (blk, inner_label) = desc.block_of(a);
            prop_assert_eq!(desc.vertex_in_block(blk, inner_label), a);
            for &(c, d) in &edges[i + 1..] {
                prop_assert_eq!(
                    prod.color(a, b) == prod.color(c, d),
                    def(a, b) == def(c, d),
                    "edges {}-{} and {}-{}",
                    a, b, c, d
                );
            }
        }
    }

    #[test]
    fn delta_good_generator_respects_the_cap(
        n in 6u32..24,
        delta in 3usize..6,
        seed in any::<u64>(),
    ) {
        let chi = construct::random_delta_good(n, delta, seed).unwrap();
        prop_assert!(chi.is_delta_good(delta).is_good());
        for v in chi.vertices() {
            for c in 0..chi.color_count() {
                prop_assert!(chi.color_degree(v, c) <= delta);
            }
        }
    }

    #[test]
    fn structure_counts_match_direct_pair_enumeration(
        (n, raw) in raw_coloring(4..9),
        special in 0u32..6,
        sub in prop::sample::subsequence((1u32..=8).collect::<Vec<_>>(), 2..=8),
    ) {
        let chi = coloring_from_raw(n, &raw);
        let members: Vec<Vertex> = sub.into_iter().filter(|&v| v <= n).collect();
        prop_assume!(!members.is_empty());
        let set = VertexSet::new(members);
        let counts = proof::count_structures(&chi, &set, special);

        let edges: Vec<(Vertex, Vertex)> = set.pairs().collect();
        let (mut x, mut y, mut z) = (0u64, 0u64, 0u64);
        for (i, &(a, b)) in edges.iter().enumerate() {
            if chi.color(a, b) == special {
                z += 1;
                continue;
            }
            for &(c, d) in &edges[i + 1..] {
                if chi.color(c, d) != chi.color(a, b) {
                    continue;
                }
                if a == c || a == d || b == c || b == d {
                    x += 1;
                } else {
                    y += 1;
                }
            }
        }
        prop_assert_eq!((counts.x, counts.y, counts.z), (x, y, z));
    }

    #[test]
    fn pruning_always_reaches_a_rainbow_subset(
        (n, raw) in raw_coloring(4..10),
        special in 0u32..6,
    ) {
        let chi = coloring_from_raw(n, &raw);
        let set = chi.all_vertices();
        let counts = proof::count_structures(&chi, &set, special);
        let pruned = proof::prune_to_rainbow(&chi, &set, special);
        for v in pruned.iter() {
            prop_assert!(set.contains(v));
        }
        prop_assert!(
            pruned.len() as u64 >= (set.len() as u64).saturating_sub(counts.total())
        );
        for (u, v) in pruned.pairs() {
            prop_assert_ne!(chi.color(u, v), special);
        }
        if pruned.len() >= 2 {
            prop_assert!(detect::is_rainbow(&chi, &pruned).unwrap());
        }
    }

    #[test]
    fn engine_witnesses_avoid_their_query(
        n in 3u32..5,
        mono in 3u32..5,
        rainbow in 3u32..5,
    ) {
        let query = PatternQuery::default().mono(mono).rainbow(rainbow);
        let report = search::exists_avoiding(n, &query, &SearchLimits::default());
        match report.outcome {
            ExistsOutcome::Witness(chi) => {
                prop_assert_eq!(chi.n(), n);
                prop_assert!(search::verify_avoids(&chi, &query).is_none());
            }
            ExistsOutcome::ProvenAbsent => {
                // Cross-check by full enumeration.
                let mut found = false;
                search::enumerate_colorings(n, None, |chi| {
                    found |= search::verify_avoids(chi, &query).is_none();
                });
                prop_assert!(!found);
            }
            ExistsOutcome::Inconclusive(_) => prop_assert!(false, "no limits were set"),
        }
    }
}

/// Exhaustive sweep over all 203 color classes of K4: every detector verdict
/// is compared against a subset-by-subset classification oracle.
#[test]
fn detectors_agree_with_oracle_on_all_k4_classes() {
    let mut classes = 0usize;
    search::enumerate_colorings(4, None, |chi| {
        classes += 1;
        let vertices: Vec<Vertex> = chi.vertices().collect();
        for k in 2..=4u32 {
            // Which kinds does some k-subset exhibit?
            let mut oracle: HashSet<PatternKind> = HashSet::new();
            let mut natural_any = false;
            for_subsets(&vertices, k as usize, &mut |subset| {
                let set = VertexSet::new(subset.iter().copied());
                for w in detect::classify_clique(chi, &set).unwrap() {
                    oracle.insert(w.kind);
                }
                natural_any |= detect_natural(chi, &set);
            });
            for kind in PatternKind::ALL {
                let found = detect::find_clique(chi, kind, k).unwrap();
                assert_eq!(
                    found.is_some(),
                    oracle.contains(&kind),
                    "kind {kind}, k {k}, coloring {:?}",
                    chi
                );
                if let Some(w) = found {
                    assert!(w.verify(chi));
                }
            }
            let canonical = detect::find_ordered_canonical(chi, k).unwrap();
            assert_eq!(canonical.is_some(), natural_any, "k {k}, coloring {:?}", chi);
        }
    });
    assert_eq!(classes, 203, "Bell(6) color classes of the 6 edges of K4");
}

/// Monochromatic, rainbow, upper or lower lexical on the natural order.
fn detect_natural(chi: &EdgeColoring, set: &VertexSet) -> bool {
    detect::is_monochromatic(chi, set).unwrap().is_some()
        || detect::is_rainbow(chi, set).unwrap()
        || detect::is_upper_lexical(chi, set).unwrap().is_some()
        || detect::is_lower_lexical(chi, set).unwrap().is_some()
}

fn for_subsets(vertices: &[Vertex], k: usize, visit: &mut impl FnMut(&[Vertex])) {
    fn walk(
        vertices: &[Vertex],
        k: usize,
        start: usize,
        chosen: &mut Vec<Vertex>,
        visit: &mut impl FnMut(&[Vertex]),
    ) {
        if chosen.len() == k {
            visit(chosen);
            return;
        }
        for i in start..vertices.len() {
            chosen.push(vertices[i]);
            walk(vertices, k, i + 1, chosen, visit);
            chosen.pop();
        }
    }
    walk(vertices, k, 0, &mut Vec::new(), visit);
}

/// The searched numbers come with extremal witnesses one vertex below the
/// value; both sides of that contract are re-checked here.
#[test]
fn computed_numbers_carry_consistent_witnesses() {
    let queries = [
        PatternQuery::default().mono(3).lexical(3).rainbow(3),
        PatternQuery::default().orderable(3).rainbow(3),
        PatternQuery::default().mono(3).colors(2),
        PatternQuery::default().ordered_canonical(3).colors(2),
    ];
    for query in queries {
        let out = search::compute_number(&query, 8, &SearchLimits::default());
        assert_eq!(out.status, SearchStatus::Exact, "query {query}");
        assert_eq!(out.extremal_witness.n(), out.value - 1, "query {query}");
        assert!(search::verify_avoids(&out.extremal_witness, &query).is_none());
        match search::exists_avoiding(out.value, &query, &SearchLimits::default()).outcome {
            ExistsOutcome::ProvenAbsent => {}
            other => panic!("query {query}: value {} is not tight: {other:?}", out.value),
        }
    }
}

/// Node accounting is part of the engine's contract: the same query explored
/// with different worker counts reports identical node totals.
#[test]
fn parallel_search_is_deterministic() {
    let query = PatternQuery::default().mono(3).colors(2);
    for n in [5u32, 6] {
        let mut base: Option<(u64, bool)> = None;
        for jobs in [1usize, 2, 8] {
            let limits = SearchLimits { jobs, ..SearchLimits::default() };
            let report = search::exists_avoiding(n, &query, &limits);
            let summary = (report.nodes, matches!(report.outcome, ExistsOutcome::Witness(_)));
            match &base {
                None => base = Some(summary),
                Some(b) => assert_eq!(*b, summary, "n {n}, jobs {jobs}"),
            }
        }
    }
}
