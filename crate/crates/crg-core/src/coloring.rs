//! Normalized edge colorings of complete graphs and vertex subsets of them.
//!
//! Vertices carry 1-based labels. Edge colors are dense identifiers
//! `0..color_count`, renamed on construction so that scanning the edges in
//! colexicographic order meets colors in first-occurrence order (a restricted
//! growth string over the edge list). Two colorings that differ only by a
//! renaming of colors therefore compare equal.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// 1-based vertex label of a host coloring.
pub type Vertex = u32;

/// Dense color identifier in `0..color_count` of a host coloring.
pub type ColorId = u32;

/// Errors from constructing or slicing colorings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: Vertex, n: u32 },
    #[error("self-loop {{{vertex},{vertex}}} is not an edge")]
    SelfLoop { vertex: Vertex },
    #[error("pair {{{u},{v}}} listed more than once")]
    DuplicatePair { u: Vertex, v: Vertex },
    #[error("pair {{{u},{v}}} missing from edge list")]
    MissingPair { u: Vertex, v: Vertex },
    #[error("cannot restrict to an empty vertex set")]
    EmptyRestriction,
}

/// Position of edge `{u,v}`, `u < v`, in colexicographic order: every edge
/// inside the first `k` vertices precedes every edge touching vertex `k+1`.
#[inline]
pub(crate) fn colex_index(u: Vertex, v: Vertex) -> usize {
    debug_assert!(0 < u && u < v);
    let (u, v) = (u as usize, v as usize);
    (v - 1) * (v - 2) / 2 + (u - 1)
}

/// Edges of the complete graph on `[n]` in colexicographic order.
pub fn colex_pairs(n: u32) -> impl Iterator<Item = (Vertex, Vertex)> {
    (2..=n).flat_map(move |v| (1..v).map(move |u| (u, v)))
}

/// A sorted set of distinct vertex labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    /// Builds a set from arbitrary labels, sorting and discarding duplicates.
    pub fn new(members: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = members.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    /// Like [`VertexSet::new`] but rejects labels outside `1..=n`.
    pub fn within(n: u32, members: impl IntoIterator<Item = Vertex>) -> Result<Self, ColoringError> {
        let set = Self::new(members);
        for &v in &set.0 {
            if v < 1 || v > n {
                return Err(ColoringError::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(set)
    }

    /// The full vertex set `{1,…,n}`.
    pub fn full(n: u32) -> Self {
        VertexSet((1..=n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    /// Members common to both sets.
    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        VertexSet(out)
    }

    /// The set without one member.
    pub fn without(&self, v: Vertex) -> VertexSet {
        VertexSet(self.0.iter().copied().filter(|&w| w != v).collect())
    }

    /// Unordered pairs of members, colexicographically.
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (1..self.0.len()).flat_map(move |b| (0..b).map(move |a| (self.0[a], self.0[b])))
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = Vertex;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, Vertex>>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Verdict of a maximum-color-degree check, see [`EdgeColoring::is_delta_good`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaGoodness {
    /// Every vertex sees every color on at most `delta` incident edges.
    Good,
    /// A pair attaining the maximum color degree, which is `> delta`.
    Violation { vertex: Vertex, color: ColorId, degree: usize },
}

impl DeltaGoodness {
    pub fn is_good(&self) -> bool {
        matches!(self, DeltaGoodness::Good)
    }
}

/// Maps the 1-based labels of a restricted coloring back to the host labels.
#[derive(Debug, Clone)]
pub struct RelabelMap {
    to_original: Vec<Vertex>,
}

impl RelabelMap {
    /// Host label of restricted vertex `new` (1-based).
    pub fn original_of(&self, new: Vertex) -> Vertex {
        self.to_original[(new - 1) as usize]
    }

    /// Restricted label of host vertex `original`, if it survived.
    pub fn new_of(&self, original: Vertex) -> Option<Vertex> {
        self.to_original
            .binary_search(&original)
            .ok()
            .map(|i| (i + 1) as Vertex)
    }

    /// Maps a set of restricted labels back to host labels.
    pub fn lift_set(&self, set: &VertexSet) -> VertexSet {
        VertexSet::new(set.iter().map(|v| self.original_of(v)))
    }
}

/// A total edge coloring of the complete graph on vertices `1..=n`.
///
/// Colors are stored in a flat triangular array indexed colexicographically
/// and are always normalized (first occurrence order along that scan), so
/// structural equality coincides with equality up to color renaming.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: u32,
    colors: Vec<ColorId>,
    color_count: u32,
}

impl EdgeColoring {
    /// Builds a coloring from one entry per unordered pair. Raw colors are
    /// arbitrary integers; they are renamed to dense normalized identifiers.
    pub fn from_edge_list(n: u32, entries: &[(Vertex, Vertex, i64)]) -> Result<Self, ColoringError> {
        if n == 0 {
            return Err(ColoringError::NoVertices);
        }
        let m = n as usize * (n as usize - 1) / 2;
        let mut raw: Vec<Option<i64>> = vec![None; m];
        for &(a, b, c) in entries {
            for vertex in [a, b] {
                if vertex < 1 || vertex > n {
                    return Err(ColoringError::VertexOutOfRange { vertex, n });
                }
            }
            if a == b {
                return Err(ColoringError::SelfLoop { vertex: a });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            let idx = colex_index(u, v);
            if raw[idx].is_some() {
                return Err(ColoringError::DuplicatePair { u, v });
            }
            raw[idx] = Some(c);
        }
        if let Some(idx) = raw.iter().position(|c| c.is_none()) {
            let (u, v) = colex_pairs(n).nth(idx).expect("index within range");
            return Err(ColoringError::MissingPair { u, v });
        }
        let raw: Vec<i64> = raw.into_iter().map(|c| c.expect("checked")).collect();
        Ok(Self::from_raw_colex(n, &raw))
    }

    /// Builds from raw colors already laid out in colex order. Internal
    /// generators use this; normalization is applied here in one place.
    pub(crate) fn from_raw_colex(n: u32, raw: &[i64]) -> Self {
        debug_assert_eq!(raw.len(), n as usize * (n as usize - 1) / 2);
        let mut rename: HashMap<i64, ColorId> = HashMap::new();
        let mut colors = Vec::with_capacity(raw.len());
        for &c in raw {
            let next = rename.len() as ColorId;
            colors.push(*rename.entry(c).or_insert(next));
        }
        let color_count = rename.len() as u32;
        EdgeColoring { n, colors, color_count }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of distinct colors used.
    pub fn color_count(&self) -> u32 {
        self.color_count
    }

    pub fn edge_count(&self) -> usize {
        self.colors.len()
    }

    /// Color of edge `{u,v}`. The pair may be given in either order.
    #[inline]
    pub fn color(&self, u: Vertex, v: Vertex) -> ColorId {
        debug_assert!(u != v && u >= 1 && v >= 1 && u <= self.n && v <= self.n);
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        self.colors[colex_index(u, v)]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        1..=self.n
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Edges with their colors, in colexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, ColorId)> + '_ {
        colex_pairs(self.n).zip(self.colors.iter()).map(|((u, v), &c)| (u, v, c))
    }

    /// Number of edges at `v` with color `i`.
    pub fn color_degree(&self, v: Vertex, i: ColorId) -> usize {
        self.vertices().filter(|&u| u != v && self.color(u, v) == i).count()
    }

    /// The color-`i` neighborhood of `v`.
    pub fn neighborhood_in_color(&self, v: Vertex, i: ColorId) -> VertexSet {
        VertexSet::new(self.vertices().filter(|&u| u != v && self.color(u, v) == i))
    }

    /// Number of edges inside `set` carrying color `i`.
    pub fn edges_in_color(&self, set: &VertexSet, i: ColorId) -> usize {
        set.pairs().filter(|&(u, v)| self.color(u, v) == i).count()
    }

    /// Checks that no vertex sees any color more than `delta` times. On
    /// failure reports a pair attaining the maximum color degree (lowest
    /// vertex, then lowest color, breaks ties).
    pub fn is_delta_good(&self, delta: usize) -> DeltaGoodness {
        assert!(delta >= 1, "delta must be at least 1");
        let mut worst: Option<(usize, Vertex, ColorId)> = None;
        for v in self.vertices() {
            let mut per_color = vec![0usize; self.color_count as usize];
            for u in self.vertices() {
                if u != v {
                    per_color[self.color(u, v) as usize] += 1;
                }
            }
            for (i, &d) in per_color.iter().enumerate() {
                if worst.map_or(d > 0, |(bd, _, _)| d > bd) {
                    worst = Some((d, v, i as ColorId));
                }
            }
        }
        match worst {
            Some((degree, vertex, color)) if degree > delta => {
                DeltaGoodness::Violation { vertex, color, degree }
            }
            _ => DeltaGoodness::Good,
        }
    }

    /// The coloring induced on `set`, relabeled to `1..=set.len()` preserving
    /// order, with colors renormalized. Returns the label map alongside.
    pub fn restrict(&self, set: &VertexSet) -> Result<(EdgeColoring, RelabelMap), ColoringError> {
        if set.is_empty() {
            return Err(ColoringError::EmptyRestriction);
        }
        if let Some(vertex) = set.iter().find(|&v| v < 1 || v > self.n) {
            return Err(ColoringError::VertexOutOfRange { vertex, n: self.n });
        }
        let members: Vec<Vertex> = set.as_slice().to_vec();
        let raw: Vec<i64> = colex_pairs(members.len() as u32)
            .map(|(a, b)| {
                self.color(members[(a - 1) as usize], members[(b - 1) as usize]) as i64
            })
            .collect();
        let restricted = EdgeColoring::from_raw_colex(members.len() as u32, &raw);
        Ok((restricted, RelabelMap { to_original: members }))
    }
}
