//! Coloring generators: fixed families, seeded random families, and the
//! block blow-up product.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coloring::{colex_pairs, ColorId, EdgeColoring, Vertex};
use crate::detect::{find_clique, CliqueWitness, PatternKind};

/// Largest supported product size; beyond this the flat edge array stops
/// being a reasonable representation.
const MAX_PRODUCT_VERTICES: u64 = 4096;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructError {
    #[error("generator needs at least 2 vertices, got {n}")]
    TooFewVertices { n: u32 },
    #[error("color count {k} outside 1..={max}")]
    BadColorCount { k: u32, max: u32 },
    #[error("product on {0} vertices exceeds the supported {MAX_PRODUCT_VERTICES}")]
    ProductTooLarge(u64),
    #[error("iterated product base contains a {} on {}", .0.kind, .0.vertices)]
    BaseContainsPattern(Box<CliqueWitness>),
}

fn check_n(n: u32) -> Result<(), ConstructError> {
    if n < 2 {
        return Err(ConstructError::TooFewVertices { n });
    }
    Ok(())
}

/// All edges in one color.
pub fn mono_coloring(n: u32) -> Result<EdgeColoring, ConstructError> {
    check_n(n)?;
    let m = n as usize * (n as usize - 1) / 2;
    Ok(EdgeColoring::from_raw_colex(n, &vec![0; m]))
}

/// Every edge its own color.
pub fn rainbow_coloring(n: u32) -> Result<EdgeColoring, ConstructError> {
    check_n(n)?;
    let m = n as usize * (n as usize - 1) / 2;
    let raw: Vec<i64> = (0..m as i64).collect();
    Ok(EdgeColoring::from_raw_colex(n, &raw))
}

/// The canonical lexical coloring: edge `{u,v}` gets color `min(u,v) - 1`.
pub fn lexical_coloring(n: u32) -> Result<EdgeColoring, ConstructError> {
    check_n(n)?;
    let raw: Vec<i64> = colex_pairs(n).map(|(u, _)| u as i64 - 1).collect();
    Ok(EdgeColoring::from_raw_colex(n, &raw))
}

/// Independent uniform colors from a palette of `k`, then normalized. The
/// same seed always produces the same coloring.
pub fn random_coloring(n: u32, k: u32, seed: u64) -> Result<EdgeColoring, ConstructError> {
    check_n(n)?;
    let m = n as usize * (n as usize - 1) / 2;
    if k < 1 || k as usize > m {
        return Err(ConstructError::BadColorCount { k, max: m as u32 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<i64> = (0..m).map(|_| rng.random_range(0..k) as i64).collect();
    Ok(EdgeColoring::from_raw_colex(n, &raw))
}

/// Random coloring in which no vertex sees any color more than `delta`
/// times: edges are processed in a random order and each picks uniformly
/// among the already open colors still below `delta` at both endpoints,
/// opening a fresh color when none qualifies.
pub fn random_delta_good(n: u32, delta: usize, seed: u64) -> Result<EdgeColoring, ConstructError> {
    check_n(n)?;
    assert!(delta >= 1, "delta must be at least 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(Vertex, Vertex)> = colex_pairs(n).collect();
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.shuffle(&mut rng);

    let mut degree: Vec<Vec<usize>> = Vec::new(); // per color, per vertex
    let mut raw = vec![0i64; pairs.len()];
    for &idx in &order {
        let (u, v) = pairs[idx];
        let (u, v) = (u as usize - 1, v as usize - 1);
        let candidates: Vec<usize> = (0..degree.len())
            .filter(|&c| degree[c][u] < delta && degree[c][v] < delta)
            .collect();
        let color = if candidates.is_empty() {
            degree.push(vec![0; n as usize]);
            degree.len() - 1
        } else {
            candidates[rng.random_range(0..candidates.len())]
        };
        degree[color][u] += 1;
        degree[color][v] += 1;
        raw[idx] = color as i64;
    }
    Ok(EdgeColoring::from_raw_colex(n, &raw))
}

/// The blow-up of `outer` by `inner`: one copy of `inner` per outer vertex,
/// and all edges between copies `i` and `j` collapsed to the outer color of
/// `{i,j}`. Outer colors are offset past the inner palette, so the two
/// palettes stay disjoint before normalization.
pub struct ProductDescriptor<'a> {
    pub outer: &'a EdgeColoring,
    pub inner: &'a EdgeColoring,
}

impl ProductDescriptor<'_> {
    /// Amount added to outer color identifiers to clear the inner palette.
    pub fn palette_offset(&self) -> ColorId {
        self.inner.color_count()
    }

    pub fn size(&self) -> u64 {
        self.outer.n() as u64 * self.inner.n() as u64
    }

    /// Block index and within-block label of a product vertex.
    pub fn block_of(&self, v: Vertex) -> (u32, Vertex) {
        let s = self.inner.n();
        ((v - 1) / s + 1, (v - 1) % s + 1)
    }

    /// Product vertex of within-block label `u` in block `i`.
    pub fn vertex_in_block(&self, block: u32, u: Vertex) -> Vertex {
        (block - 1) * self.inner.n() + u
    }

    pub fn build(&self) -> Result<EdgeColoring, ConstructError> {
        check_n(self.outer.n())?;
        check_n(self.inner.n())?;
        if self.size() > MAX_PRODUCT_VERTICES {
            return Err(ConstructError::ProductTooLarge(self.size()));
        }
        let n = self.size() as u32;
        let offset = self.palette_offset() as i64;
        let raw: Vec<i64> = colex_pairs(n)
            .map(|(x, y)| {
                let (bi, xi) = self.block_of(x);
                let (bj, yj) = self.block_of(y);
                if bi == bj {
                    self.inner.color(xi, yj) as i64
                } else {
                    offset + self.outer.color(bi, bj) as i64
                }
            })
            .collect();
        Ok(EdgeColoring::from_raw_colex(n, &raw))
    }
}

/// Convenience wrapper over [`ProductDescriptor::build`].
pub fn product(outer: &EdgeColoring, inner: &EdgeColoring) -> Result<EdgeColoring, ConstructError> {
    ProductDescriptor { outer, inner }.build()
}

/// Left fold of [`product`] with a fixed outer factor: `times` applications
/// grow the base to `base.n()^(times+1)` vertices. The base must avoid
/// monochromatic and lexical triangles, which is what makes the fold preserve
/// those avoidances while raising the lexical clique threshold by one per
/// application.
pub fn iterated_product(base: &EdgeColoring, times: u32) -> Result<EdgeColoring, ConstructError> {
    check_n(base.n())?;
    if base.n() >= 3 {
        for kind in [PatternKind::Monochromatic, PatternKind::Lexical] {
            if let Some(w) = find_clique(base, kind, 3).expect("size checked") {
                return Err(ConstructError::BaseContainsPattern(Box::new(w)));
            }
        }
    }
    let mut current = base.clone();
    for _ in 0..times {
        current = product(base, &current)?;
    }
    Ok(current)
}
