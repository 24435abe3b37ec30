//! Canonical pattern detectors with certificates.
//!
//! A clique inside an edge coloring can be monochromatic, rainbow, lexical or
//! orderable, and under the natural label order upper or lower lexical. Every
//! positive verdict here carries a certificate that re-verifies against the
//! definitions with [`CliqueWitness::verify`].
//!
//! Definitions, for a clique `S` and an ordering `v1..vk` of it:
//! * orderable: edges from `v_i` to all later vertices share one color `c_i`
//!   (same lower end implies same color),
//! * lexical: orderable and the level colors `c_i` are pairwise distinct
//!   (same lower end if and only if same color),
//! * upper / lower lexical: the lexical condition holds under the natural
//!   label order, keyed by the higher / lower endpoint.

use std::fmt;

use thiserror::Error;

use crate::coloring::{ColorId, ColoringError, EdgeColoring, RelabelMap, Vertex, VertexSet};

/// The clique patterns this crate certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternKind {
    Monochromatic,
    Rainbow,
    Lexical,
    Orderable,
    UpperLexical,
    LowerLexical,
}

impl PatternKind {
    pub const ALL: [PatternKind; 6] = [
        PatternKind::Monochromatic,
        PatternKind::Rainbow,
        PatternKind::Lexical,
        PatternKind::Orderable,
        PatternKind::UpperLexical,
        PatternKind::LowerLexical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::Monochromatic => "monochromatic",
            PatternKind::Rainbow => "rainbow",
            PatternKind::Lexical => "lexical",
            PatternKind::Orderable => "orderable",
            PatternKind::UpperLexical => "upper-lexical",
            PatternKind::LowerLexical => "lower-lexical",
        }
    }
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for PatternKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        // `mono` is how queries spell it; accept both.
        if s == "mono" {
            return Ok(PatternKind::Monochromatic);
        }
        PatternKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown pattern kind `{s}`"))
    }
}

/// Proof attached to a positive verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// All internal edges carry this color.
    Monochromatic { color: ColorId },
    /// All internal edges carry pairwise distinct colors.
    Rainbow,
    /// An explicit ordering with its level colors; `levels[i]` is the color
    /// of every edge from `order[i]` to later vertices of the ordering.
    Ordered { order: Vec<Vertex>, levels: Vec<ColorId> },
    /// Level colors under the natural label order (no ordering search).
    NaturalLevels { levels: Vec<ColorId> },
}

/// A clique together with the pattern it exhibits and the supporting proof.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueWitness {
    pub kind: PatternKind,
    pub vertices: VertexSet,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("pattern sets need at least 2 vertices, got {len}")]
    SetTooSmall { len: usize },
    #[error("clique size {k} out of range 2..={n}")]
    SizeOutOfRange { k: u32, n: u32 },
    #[error("brute-force oracle capped at 8 vertices, got {len}")]
    BruteForceCap { len: usize },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

impl CliqueWitness {
    /// Re-checks the certificate against the coloring. Every detector in this
    /// crate returns witnesses for which this holds.
    pub fn verify(&self, chi: &EdgeColoring) -> bool {
        let s = self.vertices.as_slice();
        if s.len() < 2 || s.iter().any(|&v| v < 1 || v > chi.n()) {
            return false;
        }
        match (&self.kind, &self.certificate) {
            (PatternKind::Monochromatic, Certificate::Monochromatic { color }) => {
                self.vertices.pairs().all(|(u, v)| chi.color(u, v) == *color)
            }
            (PatternKind::Rainbow, Certificate::Rainbow) => {
                rainbow_on(&|u, v| chi.color(u, v), s)
            }
            (PatternKind::Orderable, Certificate::Ordered { order, levels }) => {
                self.ordered_cert_holds(chi, order, levels, false)
            }
            (PatternKind::Lexical, Certificate::Ordered { order, levels }) => {
                self.ordered_cert_holds(chi, order, levels, true)
            }
            (PatternKind::UpperLexical, Certificate::NaturalLevels { levels }) => {
                natural_levels_upper(&|u, v| chi.color(u, v), s).as_ref() == Some(levels)
            }
            (PatternKind::LowerLexical, Certificate::NaturalLevels { levels }) => {
                natural_levels_lower(&|u, v| chi.color(u, v), s).as_ref() == Some(levels)
            }
            _ => false,
        }
    }

    fn ordered_cert_holds(
        &self,
        chi: &EdgeColoring,
        order: &[Vertex],
        levels: &[ColorId],
        distinct: bool,
    ) -> bool {
        if VertexSet::new(order.iter().copied()) != self.vertices
            || levels.len() + 1 != order.len()
        {
            return false;
        }
        for (i, &lvl) in levels.iter().enumerate() {
            if order[i + 1..].iter().any(|&w| chi.color(order[i], w) != lvl) {
                return false;
            }
        }
        if distinct {
            for (i, &a) in levels.iter().enumerate() {
                if levels[i + 1..].contains(&a) {
                    return false;
                }
            }
        }
        true
    }

    /// Translates a witness found on a restriction back to the host coloring:
    /// vertices go through the label map and certificate colors are re-read
    /// from the host palette.
    pub fn lift(&self, map: &RelabelMap, host: &EdgeColoring) -> CliqueWitness {
        let vertices = map.lift_set(&self.vertices);
        let certificate = match &self.certificate {
            Certificate::Monochromatic { .. } => {
                let s = vertices.as_slice();
                Certificate::Monochromatic { color: host.color(s[0], s[1]) }
            }
            Certificate::Rainbow => Certificate::Rainbow,
            Certificate::Ordered { order, .. } => {
                let order: Vec<Vertex> = order.iter().map(|&v| map.original_of(v)).collect();
                let levels = (0..order.len() - 1)
                    .map(|i| host.color(order[i], order[i + 1]))
                    .collect();
                Certificate::Ordered { order, levels }
            }
            Certificate::NaturalLevels { .. } => {
                let s = vertices.as_slice();
                let levels = match self.kind {
                    PatternKind::UpperLexical => {
                        (1..s.len()).map(|j| host.color(s[0], s[j])).collect()
                    }
                    _ => (0..s.len() - 1)
                        .map(|i| host.color(s[i], s[s.len() - 1]))
                        .collect(),
                };
                Certificate::NaturalLevels { levels }
            }
        };
        let lifted = CliqueWitness { kind: self.kind, vertices, certificate };
        debug_assert!(lifted.verify(host));
        lifted
    }
}

fn check_set(chi: &EdgeColoring, set: &VertexSet) -> Result<(), DetectError> {
    if set.len() < 2 {
        return Err(DetectError::SetTooSmall { len: set.len() });
    }
    if let Some(vertex) = set.iter().find(|&v| v < 1 || v > chi.n()) {
        return Err(ColoringError::VertexOutOfRange { vertex, n: chi.n() }.into());
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Pattern predicates over a color lookup. The search engine reuses these on
// partially assigned colorings, so they take a closure rather than a concrete
// EdgeColoring; all queried pairs must be defined.

pub(crate) fn mono_color<F: Fn(Vertex, Vertex) -> ColorId>(
    col: &F,
    set: &[Vertex],
) -> Option<ColorId> {
    let c = col(set[0], set[1]);
    for b in 1..set.len() {
        for a in 0..b {
            if col(set[a], set[b]) != c {
                return None;
            }
        }
    }
    Some(c)
}

pub(crate) fn rainbow_on<F: Fn(Vertex, Vertex) -> ColorId>(col: &F, set: &[Vertex]) -> bool {
    let mut seen = Vec::with_capacity(set.len() * (set.len() - 1) / 2);
    for b in 1..set.len() {
        for a in 0..b {
            let c = col(set[a], set[b]);
            if seen.contains(&c) {
                return false;
            }
            seen.push(c);
        }
    }
    true
}

/// Greedy peel: any vertex uniform toward the rest is a safe first pick,
/// because subsets of orderable sets stay orderable and a uniform vertex
/// prepends onto any ordering of the rest.
pub(crate) fn orderable_ordering<F: Fn(Vertex, Vertex) -> ColorId>(
    col: &F,
    set: &[Vertex],
) -> Option<(Vec<Vertex>, Vec<ColorId>)> {
    let mut rest: Vec<Vertex> = set.to_vec();
    let mut order = Vec::with_capacity(set.len());
    let mut levels = Vec::with_capacity(set.len() - 1);
    while rest.len() > 1 {
        let pick = rest.iter().position(|&v| {
            let c = col(v, *rest.iter().find(|&&w| w != v).expect("len > 1"));
            rest.iter().all(|&w| w == v || col(v, w) == c)
        })?;
        let v = rest.remove(pick);
        levels.push(col(v, rest[0]));
        order.push(v);
    }
    order.push(rest[0]);
    Some((order, levels))
}

/// Backtracking peel for the lexical pattern: a valid first pick is uniform
/// in a color that is absent inside the rest. Greedy choice appears safe by
/// the same closure argument as for orderable; the tests compare both, and
/// this implementation backtracks regardless.
pub(crate) fn lexical_ordering<F: Fn(Vertex, Vertex) -> ColorId>(
    col: &F,
    set: &[Vertex],
) -> Option<(Vec<Vertex>, Vec<ColorId>)> {
    if set.len() == 1 {
        return Some((vec![set[0]], vec![]));
    }
    for (pick, &v) in set.iter().enumerate() {
        let mut rest: Vec<Vertex> = set.to_vec();
        rest.remove(pick);
        let c = col(v, rest[0]);
        if !rest.iter().all(|&w| col(v, w) == c) {
            continue;
        }
        let inside = (1..rest.len())
            .flat_map(|b| (0..b).map(move |a| (a, b)))
            .any(|(a, b)| col(rest[a], rest[b]) == c);
        if inside {
            continue;
        }
        if let Some((mut order, mut levels)) = lexical_ordering(col, &rest) {
            order.insert(0, v);
            levels.insert(0, c);
            return Some((order, levels));
        }
    }
    None
}

/// Level colors keyed by the lower endpoint under the natural order, if the
/// lower lexical condition holds.
pub(crate) fn natural_levels_lower<F: Fn(Vertex, Vertex) -> ColorId>(
    col: &F,
    set: &[Vertex],
) -> Option<Vec<ColorId>> {
    let k = set.len();
    let mut levels = Vec::with_capacity(k - 1);
    for i in 0..k - 1 {
        let c = col(set[i], set[k - 1]);
        if (i + 1..k).any(|j| col(set[i], set[j]) != c) || levels.contains(&c) {
            return None;
        }
        levels.push(c);
    }
    Some(levels)
}

/// Level colors keyed by the higher endpoint under the natural order, if the
/// upper lexical condition holds.
pub(crate) fn natural_levels_upper<F: Fn(Vertex, Vertex) -> ColorId>(
    col: &F,
    set: &[Vertex],
) -> Option<Vec<ColorId>> {
    let k = set.len();
    let mut levels = Vec::with_capacity(k - 1);
    for j in 1..k {
        let c = col(set[0], set[j]);
        if (1..j).any(|i| col(set[i], set[j]) != c) || levels.contains(&c) {
            return None;
        }
        levels.push(c);
    }
    Some(levels)
}

// ---------------------------------------------------------------------------
// Public verdicts on a given set.

/// The color shared by all internal edges, if `set` is monochromatic.
pub fn is_monochromatic(chi: &EdgeColoring, set: &VertexSet) -> Result<Option<ColorId>, DetectError> {
    check_set(chi, set)?;
    Ok(mono_color(&|u, v| chi.color(u, v), set.as_slice()))
}

/// Whether all internal edge colors of `set` are pairwise distinct.
pub fn is_rainbow(chi: &EdgeColoring, set: &VertexSet) -> Result<bool, DetectError> {
    check_set(chi, set)?;
    Ok(rainbow_on(&|u, v| chi.color(u, v), set.as_slice()))
}

/// Orderable verdict with an ordering certificate.
pub fn is_orderable(chi: &EdgeColoring, set: &VertexSet) -> Result<Option<CliqueWitness>, DetectError> {
    check_set(chi, set)?;
    Ok(orderable_ordering(&|u, v| chi.color(u, v), set.as_slice()).map(|(order, levels)| {
        CliqueWitness {
            kind: PatternKind::Orderable,
            vertices: set.clone(),
            certificate: Certificate::Ordered { order, levels },
        }
    }))
}

/// Lexical verdict with an ordering certificate.
pub fn is_lexical(chi: &EdgeColoring, set: &VertexSet) -> Result<Option<CliqueWitness>, DetectError> {
    check_set(chi, set)?;
    Ok(lexical_ordering(&|u, v| chi.color(u, v), set.as_slice()).map(|(order, levels)| {
        CliqueWitness {
            kind: PatternKind::Lexical,
            vertices: set.clone(),
            certificate: Certificate::Ordered { order, levels },
        }
    }))
}

/// Upper lexical verdict under the natural label order.
pub fn is_upper_lexical(
    chi: &EdgeColoring,
    set: &VertexSet,
) -> Result<Option<CliqueWitness>, DetectError> {
    check_set(chi, set)?;
    Ok(natural_levels_upper(&|u, v| chi.color(u, v), set.as_slice()).map(|levels| CliqueWitness {
        kind: PatternKind::UpperLexical,
        vertices: set.clone(),
        certificate: Certificate::NaturalLevels { levels },
    }))
}

/// Lower lexical verdict under the natural label order.
pub fn is_lower_lexical(
    chi: &EdgeColoring,
    set: &VertexSet,
) -> Result<Option<CliqueWitness>, DetectError> {
    check_set(chi, set)?;
    Ok(natural_levels_lower(&|u, v| chi.color(u, v), set.as_slice()).map(|levels| CliqueWitness {
        kind: PatternKind::LowerLexical,
        vertices: set.clone(),
        certificate: Certificate::NaturalLevels { levels },
    }))
}

/// Every pattern the set exhibits, in [`PatternKind::ALL`] order, each with
/// its certificate.
pub fn classify_clique(chi: &EdgeColoring, set: &VertexSet) -> Result<Vec<CliqueWitness>, DetectError> {
    check_set(chi, set)?;
    let mut out = Vec::new();
    if let Some(color) = is_monochromatic(chi, set)? {
        out.push(CliqueWitness {
            kind: PatternKind::Monochromatic,
            vertices: set.clone(),
            certificate: Certificate::Monochromatic { color },
        });
    }
    if is_rainbow(chi, set)? {
        out.push(CliqueWitness {
            kind: PatternKind::Rainbow,
            vertices: set.clone(),
            certificate: Certificate::Rainbow,
        });
    }
    if let Some(w) = is_lexical(chi, set)? {
        out.push(w);
    }
    if let Some(w) = is_orderable(chi, set)? {
        out.push(w);
    }
    if let Some(w) = is_upper_lexical(chi, set)? {
        out.push(w);
    }
    if let Some(w) = is_lower_lexical(chi, set)? {
        out.push(w);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Exact clique search, one pattern at a time.

/// Exhaustively searches for a `k`-clique of the given pattern. Returns the
/// first witness in a fixed scan order, `None` only when none exists.
pub fn find_clique(
    chi: &EdgeColoring,
    kind: PatternKind,
    k: u32,
) -> Result<Option<CliqueWitness>, DetectError> {
    if k < 2 || k > chi.n() {
        return Err(DetectError::SizeOutOfRange { k, n: chi.n() });
    }
    let k = k as usize;
    let found = match kind {
        PatternKind::Monochromatic => find_mono(chi, k),
        PatternKind::Rainbow => find_rainbow(chi, k),
        PatternKind::Orderable => {
            let cands: Vec<Vertex> = chi.vertices().collect();
            find_ordered_descent(chi, &cands, k, &mut Vec::new(), false).map(|(order, levels)| {
                CliqueWitness {
                    kind: PatternKind::Orderable,
                    vertices: VertexSet::new(order.iter().copied()),
                    certificate: Certificate::Ordered { order, levels },
                }
            })
        }
        PatternKind::Lexical => {
            let cands: Vec<Vertex> = chi.vertices().collect();
            find_ordered_descent(chi, &cands, k, &mut Vec::new(), true).map(|(order, levels)| {
                CliqueWitness {
                    kind: PatternKind::Lexical,
                    vertices: VertexSet::new(order.iter().copied()),
                    certificate: Certificate::Ordered { order, levels },
                }
            })
        }
        PatternKind::UpperLexical => find_natural(chi, k, KindMask::UPPER),
        PatternKind::LowerLexical => find_natural(chi, k, KindMask::LOWER),
    };
    debug_assert!(found.as_ref().is_none_or(|w| w.verify(chi)));
    Ok(found)
}

/// Searches `t`-subsets in colexicographic order for any of the four patterns
/// of the ordered canon: monochromatic, rainbow, upper or lower lexical under
/// the natural order. Returns the first hit.
pub fn find_ordered_canonical(
    chi: &EdgeColoring,
    t: u32,
) -> Result<Option<CliqueWitness>, DetectError> {
    if t < 2 || t > chi.n() {
        return Err(DetectError::SizeOutOfRange { k: t, n: chi.n() });
    }
    Ok(find_natural(chi, t as usize, KindMask::ALL4))
}

fn find_mono(chi: &EdgeColoring, k: usize) -> Option<CliqueWitness> {
    for color in 0..chi.color_count() {
        let mut chosen = Vec::with_capacity(k);
        let cands: Vec<Vertex> = chi.vertices().collect();
        if mono_extend(chi, color, &mut chosen, &cands, k) {
            return Some(CliqueWitness {
                kind: PatternKind::Monochromatic,
                vertices: VertexSet::new(chosen),
                certificate: Certificate::Monochromatic { color },
            });
        }
    }
    None
}

fn mono_extend(
    chi: &EdgeColoring,
    color: ColorId,
    chosen: &mut Vec<Vertex>,
    cands: &[Vertex],
    k: usize,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    if chosen.len() + cands.len() < k {
        return false;
    }
    for (i, &v) in cands.iter().enumerate() {
        chosen.push(v);
        let next: Vec<Vertex> =
            cands[i + 1..].iter().copied().filter(|&w| chi.color(v, w) == color).collect();
        if mono_extend(chi, color, chosen, &next, k) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn find_rainbow(chi: &EdgeColoring, k: usize) -> Option<CliqueWitness> {
    // Scan order: vertices seeing many distinct colors first, so conflicts
    // surface early. Lowest label breaks ties; the order is fixed, hence the
    // returned witness is deterministic.
    let mut by_spread: Vec<Vertex> = chi.vertices().collect();
    let spread = |v: Vertex| -> usize {
        let mut cs: Vec<ColorId> =
            chi.vertices().filter(|&u| u != v).map(|u| chi.color(u, v)).collect();
        cs.sort_unstable();
        cs.dedup();
        cs.len()
    };
    let spreads: Vec<usize> = (1..=chi.n()).map(|v| spread(v)).collect();
    by_spread.sort_by_key(|&v| (std::cmp::Reverse(spreads[(v - 1) as usize]), v));
    let mut chosen = Vec::with_capacity(k);
    let mut used = Vec::new();
    if rainbow_extend(chi, &by_spread, 0, &mut chosen, &mut used, k) {
        return Some(CliqueWitness {
            kind: PatternKind::Rainbow,
            vertices: VertexSet::new(chosen),
            certificate: Certificate::Rainbow,
        });
    }
    None
}

fn rainbow_extend(
    chi: &EdgeColoring,
    order: &[Vertex],
    from: usize,
    chosen: &mut Vec<Vertex>,
    used: &mut Vec<ColorId>,
    k: usize,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    if chosen.len() + (order.len() - from) < k {
        return false;
    }
    'next: for i in from..order.len() {
        let v = order[i];
        let mark = used.len();
        for &w in chosen.iter() {
            let c = chi.color(v, w);
            if used.contains(&c) {
                used.truncate(mark);
                continue 'next;
            }
            used.push(c);
        }
        chosen.push(v);
        if rainbow_extend(chi, order, i + 1, chosen, used, k) {
            return true;
        }
        chosen.pop();
        used.truncate(mark);
    }
    false
}

/// Recursive descent shared by the orderable and lexical finders: pick a
/// vertex `v` and color `c`, recurse into the color-`c` neighborhood of `v`
/// within the candidates. For the lexical variant `forbidden` carries the
/// levels picked so far, which later levels must avoid.
fn find_ordered_descent(
    chi: &EdgeColoring,
    cands: &[Vertex],
    k: usize,
    forbidden: &mut Vec<ColorId>,
    lexical: bool,
) -> Option<(Vec<Vertex>, Vec<ColorId>)> {
    if k == 1 {
        return Some((vec![cands[0]], vec![]));
    }
    for (i, &v) in cands.iter().enumerate() {
        let mut tried: Vec<ColorId> = Vec::new();
        for (j, &w) in cands.iter().enumerate() {
            if j == i {
                continue;
            }
            let c = chi.color(v, w);
            if tried.contains(&c) || (lexical && forbidden.contains(&c)) {
                continue;
            }
            tried.push(c);
            let next: Vec<Vertex> = cands
                .iter()
                .copied()
                .filter(|&x| x != v && chi.color(v, x) == c)
                .collect();
            if next.len() < k - 1 {
                continue;
            }
            if lexical {
                forbidden.push(c);
            }
            if let Some((mut order, mut levels)) =
                find_ordered_descent(chi, &next, k - 1, forbidden, lexical)
            {
                if lexical {
                    forbidden.pop();
                }
                order.insert(0, v);
                levels.insert(0, c);
                return Some((order, levels));
            }
            if lexical {
                forbidden.pop();
            }
        }
    }
    None
}

#[derive(Clone, Copy)]
struct KindMask(u8);

impl KindMask {
    const MONO: KindMask = KindMask(1);
    const RAINBOW: KindMask = KindMask(2);
    const UPPER: KindMask = KindMask(4);
    const LOWER: KindMask = KindMask(8);
    const ALL4: KindMask = KindMask(1 | 2 | 4 | 8);

    fn has(self, other: KindMask) -> bool {
        self.0 & other.0 != 0
    }
}

/// State of the colex subset scan. Members are accumulated largest first, so
/// feasibility of each pattern on the partial set can be updated per element;
/// heredity of all four patterns makes pruning on dead partials sound.
struct NaturalScan<'a> {
    chi: &'a EdgeColoring,
    t: usize,
    mask: KindMask,
}

#[derive(Clone)]
struct NaturalState {
    members: Vec<Vertex>, // decreasing
    mono: Option<Option<ColorId>>, // None = dead, Some(None) = no edge yet
    rainbow: Option<Vec<ColorId>>,
    upper: Option<(Vec<Option<ColorId>>, Vec<ColorId>)>, // per-member pin, distinct set
    lower: Option<Vec<ColorId>>, // fixed levels of non-minimal members
}

impl NaturalScan<'_> {
    fn run(&self) -> Option<CliqueWitness> {
        for top in self.t as u32..=self.chi.n() {
            let state = NaturalState {
                members: vec![top],
                mono: self.mask.has(KindMask::MONO).then_some(None),
                rainbow: self.mask.has(KindMask::RAINBOW).then(Vec::new),
                upper: self.mask.has(KindMask::UPPER).then(|| (vec![None], Vec::new())),
                lower: self.mask.has(KindMask::LOWER).then(Vec::new),
            };
            if let Some(w) = self.extend(&state, top) {
                return Some(w);
            }
        }
        None
    }

    fn extend(&self, state: &NaturalState, min: Vertex) -> Option<CliqueWitness> {
        if state.members.len() == self.t {
            return Some(self.emit(state));
        }
        let need = self.t - state.members.len();
        for w in need as u32..min {
            if let Some(next) = self.add(state, w) {
                if let Some(found) = self.extend(&next, w) {
                    return Some(found);
                }
            }
        }
        None
    }

    /// Adds `w` below all current members, updating each pattern's partial
    /// state; returns None when every tracked pattern is dead.
    fn add(&self, state: &NaturalState, w: Vertex) -> Option<NaturalState> {
        let chi = self.chi;
        let mut next = state.clone();
        next.members.push(w);

        if let Some(mono) = next.mono.take() {
            let mut pin = mono;
            let ok = state.members.iter().all(|&p| {
                let c = chi.color(w, p);
                match pin {
                    None => {
                        pin = Some(c);
                        true
                    }
                    Some(m) => c == m,
                }
            });
            if ok {
                next.mono = Some(pin);
            }
        }

        if let Some(mut used) = next.rainbow.take() {
            let mut ok = true;
            for &p in &state.members {
                let c = chi.color(w, p);
                if used.contains(&c) {
                    ok = false;
                    break;
                }
                used.push(c);
            }
            if ok {
                next.rainbow = Some(used);
            }
        }

        if let Some((mut pins, mut distinct)) = next.upper.take() {
            // w pins the incoming color of the previous minimum and must
            // match every already pinned member.
            let mut ok = true;
            let mut fresh: Option<ColorId> = None;
            for (idx, &p) in state.members.iter().enumerate() {
                let c = chi.color(w, p);
                match pins[idx] {
                    Some(d) if d != c => {
                        ok = false;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        if distinct.contains(&c) {
                            ok = false;
                            break;
                        }
                        pins[idx] = Some(c);
                        fresh = Some(c);
                    }
                }
            }
            if ok {
                if let Some(c) = fresh {
                    distinct.push(c);
                }
                pins.push(None);
                next.upper = Some((pins, distinct));
            }
        }

        if let Some(mut levels) = next.lower.take() {
            // All edges from w up share one color: w is their lower endpoint.
            let c = chi.color(w, state.members[0]);
            if state.members.iter().all(|&p| chi.color(w, p) == c) && !levels.contains(&c) {
                levels.push(c);
                next.lower = Some(levels);
            }
        }

        (next.mono.is_some()
            || next.rainbow.is_some()
            || next.upper.is_some()
            || next.lower.is_some())
        .then_some(next)
    }

    fn emit(&self, state: &NaturalState) -> CliqueWitness {
        let vertices = VertexSet::new(state.members.iter().copied());
        let s = vertices.as_slice();
        let col = |u: Vertex, v: Vertex| self.chi.color(u, v);
        if let Some(pin) = &state.mono {
            return CliqueWitness {
                kind: PatternKind::Monochromatic,
                vertices: vertices.clone(),
                certificate: Certificate::Monochromatic { color: pin.expect("t >= 2 has edges") },
            };
        }
        if state.rainbow.is_some() {
            return CliqueWitness {
                kind: PatternKind::Rainbow,
                vertices,
                certificate: Certificate::Rainbow,
            };
        }
        if state.upper.is_some() {
            let levels = natural_levels_upper(&col, s).expect("scan state matches definition");
            return CliqueWitness {
                kind: PatternKind::UpperLexical,
                vertices,
                certificate: Certificate::NaturalLevels { levels },
            };
        }
        let levels = natural_levels_lower(&col, s).expect("scan state matches definition");
        CliqueWitness {
            kind: PatternKind::LowerLexical,
            vertices,
            certificate: Certificate::NaturalLevels { levels },
        }
    }
}

fn find_natural(chi: &EdgeColoring, t: usize, mask: KindMask) -> Option<CliqueWitness> {
    let found = NaturalScan { chi, t, mask }.run();
    debug_assert!(found.as_ref().is_none_or(|w| w.verify(chi)));
    found
}

// ---------------------------------------------------------------------------
// Permutation oracles. Deliberately literal: they re-state the definitions
// over all orderings and share no code with the fast detectors above.

fn for_each_permutation<T: Clone>(items: &[T], f: &mut impl FnMut(&[T]) -> bool) -> bool {
    // Heap's algorithm; f returns true to stop.
    let mut a = items.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    if f(&a) {
        return true;
    }
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            if f(&a) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// Tries all `|S|!` orderings against the orderable definition. Capped at 8
/// vertices; the cap is an error, never a silent wrong answer.
pub fn brute_force_is_orderable(chi: &EdgeColoring, set: &VertexSet) -> Result<bool, DetectError> {
    check_set(chi, set)?;
    if set.len() > 8 {
        return Err(DetectError::BruteForceCap { len: set.len() });
    }
    Ok(for_each_permutation(set.as_slice(), &mut |perm| {
        // Same lower end implies same color.
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                for l in j + 1..perm.len() {
                    if chi.color(perm[i], perm[j]) != chi.color(perm[i], perm[l]) {
                        return false;
                    }
                }
            }
        }
        true
    }))
}

/// Tries all `|S|!` orderings against the lexical definition. Capped at 8.
pub fn brute_force_is_lexical(chi: &EdgeColoring, set: &VertexSet) -> Result<bool, DetectError> {
    check_set(chi, set)?;
    if set.len() > 8 {
        return Err(DetectError::BruteForceCap { len: set.len() });
    }
    Ok(for_each_permutation(set.as_slice(), &mut |perm| {
        // Same color if and only if same lower end, over all edge pairs.
        let k = perm.len();
        for i in 0..k {
            for j in i + 1..k {
                for a in 0..k {
                    for b in a + 1..k {
                        let same_color =
                            chi.color(perm[i], perm[j]) == chi.color(perm[a], perm[b]);
                        if same_color != (i == a) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }))
}
