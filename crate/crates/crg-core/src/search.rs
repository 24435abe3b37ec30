//! Exact decision engine: does some coloring of K_n avoid a bundle of
//! forbidden patterns, and what is the minimum n at which none does.
//!
//! Enumeration is a DFS over edges in colexicographic order. Color choices
//! follow the restricted-growth rule (a new edge may reuse any color seen so
//! far or introduce the next fresh one), so exactly one representative per
//! color-isomorphism class is visited and "proven absent" is a real proof.
//! After each assignment only pattern instances containing the newest edge
//! are checked; since colex order completes all edges among {1..u} before
//! (u,v), such an instance has all its other vertices below u, and every
//! instance in a completed coloring gets checked at its last edge.
//!
//! Determinism: outcomes and node counts depend only on (n, query, limits),
//! not on the number of worker threads, as long as no resource cap trips.
//! Work splits on the color choices of a fixed shallow edge prefix; a found
//! witness cancels only branches after the lowest witness-bearing branch, so
//! the reported witness and the node total are those of a sequential run of
//! the same branch list.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coloring::{colex_index, colex_pairs, ColorId, EdgeColoring, Vertex};
use crate::detect::{
    self, lexical_ordering, mono_color, natural_levels_lower, natural_levels_upper,
    orderable_ordering, rainbow_on, CliqueWitness, PatternKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query forbids nothing; set at least one pattern size")]
    NoForbids,
    #[error("{kind} threshold must be at least 2, got {value}")]
    ThresholdTooSmall { kind: &'static str, value: u32 },
    #[error("max_colors must be at least 1")]
    ZeroColorCap,
    #[error("unknown query item `{0}`, expected key=value with key in mono|lexical|rainbow|orderable|canonical|colors")]
    UnknownItem(String),
    #[error("bad number in query item `{0}`")]
    BadNumber(String),
}

/// A bundle of forbidden patterns, each with its clique size, plus an
/// optional cap on the number of colors (which turns the engine into a
/// classical Ramsey solver).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PatternQuery {
    pub forbid_mono: Option<u32>,
    pub forbid_lexical: Option<u32>,
    pub forbid_rainbow: Option<u32>,
    pub forbid_orderable: Option<u32>,
    /// Forbids all four patterns of the ordered canon at one size t:
    /// monochromatic, rainbow, upper lexical, lower lexical.
    pub forbid_ordered_canonical: Option<u32>,
    pub max_colors: Option<u32>,
}

impl PatternQuery {
    pub fn mono(mut self, m: u32) -> Self {
        self.forbid_mono = Some(m);
        self
    }

    pub fn lexical(mut self, l: u32) -> Self {
        self.forbid_lexical = Some(l);
        self
    }

    pub fn rainbow(mut self, r: u32) -> Self {
        self.forbid_rainbow = Some(r);
        self
    }

    pub fn orderable(mut self, o: u32) -> Self {
        self.forbid_orderable = Some(o);
        self
    }

    pub fn ordered_canonical(mut self, t: u32) -> Self {
        self.forbid_ordered_canonical = Some(t);
        self
    }

    pub fn colors(mut self, cap: u32) -> Self {
        self.max_colors = Some(cap);
        self
    }

    fn items(&self) -> impl Iterator<Item = (&'static str, u32)> + '_ {
        [
            ("mono", self.forbid_mono),
            ("lexical", self.forbid_lexical),
            ("rainbow", self.forbid_rainbow),
            ("orderable", self.forbid_orderable),
            ("canonical", self.forbid_ordered_canonical),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.map(|v| (k, v)))
    }

    pub fn validate(&self) -> Result<(), QueryError> {
        if self.items().next().is_none() {
            return Err(QueryError::NoForbids);
        }
        for (kind, value) in self.items() {
            if value < 2 {
                return Err(QueryError::ThresholdTooSmall { kind, value });
            }
        }
        if self.max_colors == Some(0) {
            return Err(QueryError::ZeroColorCap);
        }
        Ok(())
    }

    /// Smallest forbidden clique size. Below it no forbidden pattern fits,
    /// so every coloring avoids the bundle; the number being computed is
    /// therefore at least this threshold.
    pub fn smallest_threshold(&self) -> u32 {
        self.items().map(|(_, v)| v).min().unwrap_or(2)
    }
}

impl fmt::Display for PatternQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (key, value) in self
            .items()
            .chain(self.max_colors.map(|c| ("colors", c)))
        {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{key}={value}")?;
            first = false;
        }
        if first {
            f.write_str("none")?;
        }
        Ok(())
    }
}

impl FromStr for PatternQuery {
    type Err = QueryError;

    fn from_str(s: &str) -> Result<Self, QueryError> {
        let mut q = PatternQuery::default();
        for item in s.split(',').filter(|i| !i.is_empty()) {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| QueryError::UnknownItem(item.to_string()))?;
            let value: u32 = value
                .parse()
                .map_err(|_| QueryError::BadNumber(item.to_string()))?;
            let slot = match key {
                "mono" => &mut q.forbid_mono,
                "lexical" => &mut q.forbid_lexical,
                "rainbow" => &mut q.forbid_rainbow,
                "orderable" => &mut q.forbid_orderable,
                "canonical" => &mut q.forbid_ordered_canonical,
                "colors" => &mut q.max_colors,
                _ => return Err(QueryError::UnknownItem(item.to_string())),
            };
            *slot = Some(value);
        }
        q.validate()?;
        Ok(q)
    }
}

/// Resource caps for a search run. Node and time budgets turn exhaustion
/// into an explicit inconclusive outcome; `jobs` bounds worker threads.
#[derive(Debug, Clone)]
pub struct SearchLimits {
    pub node_budget: Option<u64>,
    pub time_budget: Option<Duration>,
    pub jobs: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_budget: None, time_budget: None, jobs: 1 }
    }
}

/// Which resource cap ended a run early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    NodeBudget,
    TimeBudget,
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StopReason::NodeBudget => "node-budget",
            StopReason::TimeBudget => "time-budget",
        })
    }
}

#[derive(Debug, Clone)]
pub enum ExistsOutcome {
    /// A coloring of K_n avoiding the bundle. Existence proofs are
    /// constructive and the witness re-verifies.
    Witness(EdgeColoring),
    /// The enumeration completed with every branch pruned or refuted.
    ProvenAbsent,
    /// A resource cap tripped first; never a claim in either direction.
    Inconclusive(StopReason),
}

/// Outcome of one existence run together with its cost.
///
/// `nodes` counts color-assignment attempts and is reproducible (and
/// independent of `jobs`) whenever the run ends without tripping a cap;
/// capped runs report the node budget itself or a scheduling-dependent
/// count under a time budget.
#[derive(Debug, Clone)]
pub struct ExistsReport {
    pub outcome: ExistsOutcome,
    pub nodes: u64,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Exact,
    LowerBoundOnly,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Exact => "exact",
            SearchStatus::LowerBoundOnly => "lower-bound-only",
        })
    }
}

/// Result of a minimum-n computation. When `status` is `Exact`, every
/// coloring of K_value hits the bundle and `extremal_witness` (on value−1
/// vertices) avoids it; when `LowerBoundOnly`, the true number is at least
/// `value` and the witness certifies value−1 as avoidable.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub value: u32,
    pub extremal_witness: EdgeColoring,
    pub nodes_explored: u64,
    pub wall_time: Duration,
}

/// Why a coloring fails a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    Pattern(Box<CliqueWitness>),
    TooManyColors { used: u32, cap: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Pattern(w) => {
                write!(f, "{} K_{} on {{{}}}", w.kind, w.vertices.len(), w.vertices)
            }
            Violation::TooManyColors { used, cap } => {
                write!(f, "{used} colors exceed the cap of {cap}")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Verification of a concrete coloring against a query.

/// Finds the first violation in a fixed kind order (mono, lexical, rainbow,
/// orderable, ordered-canonical, then the color cap), or `None` when the
/// coloring avoids the whole bundle. Thresholds larger than n cannot occur
/// and are skipped.
pub fn verify_avoids(chi: &EdgeColoring, query: &PatternQuery) -> Option<Violation> {
    query.validate().expect("invalid query");
    let searches = [
        (PatternKind::Monochromatic, query.forbid_mono),
        (PatternKind::Lexical, query.forbid_lexical),
        (PatternKind::Rainbow, query.forbid_rainbow),
        (PatternKind::Orderable, query.forbid_orderable),
    ];
    for (kind, size) in searches {
        if let Some(k) = size.filter(|&k| k <= chi.n()) {
            if let Some(w) = detect::find_clique(chi, kind, k).expect("size checked") {
                return Some(Violation::Pattern(Box::new(w)));
            }
        }
    }
    if let Some(t) = query.forbid_ordered_canonical.filter(|&t| t <= chi.n()) {
        if let Some(w) = detect::find_ordered_canonical(chi, t).expect("size checked") {
            return Some(Violation::Pattern(Box::new(w)));
        }
    }
    if let Some(cap) = query.max_colors {
        if chi.color_count() > cap {
            return Some(Violation::TooManyColors { used: chi.color_count(), cap });
        }
    }
    None
}

// ---------------------------------------------------------------------------
// The DFS engine.

/// Number of leading colex edges whose color choices define the parallel
/// work units. Fixed by n alone so that node counts do not depend on `jobs`.
fn prefix_depth(e_total: usize) -> usize {
    e_total.saturating_sub(1).min(6)
}

struct Engine<'q> {
    n: u32,
    e_total: usize,
    pairs: Vec<(Vertex, Vertex)>,
    query: &'q PatternQuery,
    /// Effective color cap; RGS never needs more than one color per edge.
    cap: u32,
}

struct Controls<'a> {
    nodes: &'a AtomicU64,
    node_budget: u64,
    deadline: Option<Instant>,
    stop_nodes: &'a AtomicBool,
    stop_time: &'a AtomicBool,
    /// Lowest branch index with a witness so far; branches above it abort.
    winner: &'a AtomicUsize,
}

impl Controls<'_> {
    /// Accounts one node; true means unwind (a cap tripped or a lower
    /// branch already holds the witness).
    fn tick(&self, local: &mut u64, branch: usize) -> bool {
        *local += 1;
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.node_budget {
            self.stop_nodes.store(true, Ordering::Relaxed);
            return true;
        }
        if *local % 1024 == 0 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.stop_time.store(true, Ordering::Relaxed);
                    return true;
                }
            }
            if self.winner.load(Ordering::Relaxed) < branch {
                return true;
            }
        }
        self.stop_nodes.load(Ordering::Relaxed) || self.stop_time.load(Ordering::Relaxed)
    }
}

enum Dfs {
    Exhausted,
    Found,
    Aborted,
}

struct Branch {
    prefix: Vec<ColorId>,
    used: u32,
}

impl Engine<'_> {
    fn new(n: u32, query: &PatternQuery) -> Engine<'_> {
        let e_total = (n as usize) * (n as usize - 1) / 2;
        Engine {
            n,
            e_total,
            pairs: colex_pairs(n).collect(),
            query,
            cap: query.max_colors.unwrap_or(u32::MAX).min(e_total.max(1) as u32),
        }
    }

    /// Checks whether assigning `colors[e]` completes a forbidden pattern.
    /// Instances checked are exactly those whose colex-last edge is `e`:
    /// both endpoints plus vertices below the lower endpoint.
    fn assignment_violates(&self, colors: &[ColorId], e: usize) -> bool {
        let (u, v) = self.pairs[e];
        let c = colors[e];
        let col = |a: Vertex, b: Vertex| colors[colex_index(a.min(b), a.max(b))];

        if let Some(m) = self.query.forbid_mono {
            let cands: Vec<Vertex> =
                (1..u).filter(|&w| col(w, u) == c && col(w, v) == c).collect();
            if self.mono_extend(colors, &cands, c, (m - 2) as usize) {
                return true;
            }
        }
        if let Some(r) = self.query.forbid_rainbow {
            let mut used = vec![c];
            let mut chosen = Vec::new();
            if self.rainbow_extend(colors, u, v, u, &mut chosen, &mut used, (r - 2) as usize) {
                return true;
            }
        }
        if let Some(l) = self.query.forbid_lexical {
            if self.any_subset_hits(u, v, (l - 2) as usize, |set| {
                lexical_ordering(&col, set).is_some()
            }) {
                return true;
            }
        }
        if let Some(o) = self.query.forbid_orderable {
            if self.any_subset_hits(u, v, (o - 2) as usize, |set| {
                orderable_ordering(&col, set).is_some()
            }) {
                return true;
            }
        }
        if let Some(t) = self.query.forbid_ordered_canonical {
            if self.any_subset_hits(u, v, (t - 2) as usize, |set| {
                mono_color(&col, set).is_some()
                    || rainbow_on(&col, set)
                    || natural_levels_upper(&col, set).is_some()
                    || natural_levels_lower(&col, set).is_some()
            }) {
                return true;
            }
        }
        false
    }

    fn mono_extend(&self, colors: &[ColorId], cands: &[Vertex], c: ColorId, need: usize) -> bool {
        if need == 0 {
            return true;
        }
        if cands.len() < need {
            return false;
        }
        let col = |a: Vertex, b: Vertex| colors[colex_index(a.min(b), a.max(b))];
        for (i, &w) in cands.iter().enumerate() {
            let rest: Vec<Vertex> =
                cands[i + 1..].iter().copied().filter(|&x| col(w, x) == c).collect();
            if self.mono_extend(colors, &rest, c, need - 1) {
                return true;
            }
        }
        false
    }

    /// Extends {u, v} by `need` vertices below `hi` keeping all pairwise
    /// colors distinct. `used` holds the colors of the clique so far.
    fn rainbow_extend(
        &self,
        colors: &[ColorId],
        u: Vertex,
        v: Vertex,
        hi: Vertex,
        chosen: &mut Vec<Vertex>,
        used: &mut Vec<ColorId>,
        need: usize,
    ) -> bool {
        if need == 0 {
            return true;
        }
        if (hi as usize - 1) < need {
            return false;
        }
        let col = |a: Vertex, b: Vertex| colors[colex_index(a.min(b), a.max(b))];
        for w in (1..hi).rev() {
            let before = used.len();
            let mut ok = true;
            for x in [u, v].into_iter().chain(chosen.iter().copied()) {
                let cw = col(w, x);
                if used.contains(&cw) {
                    ok = false;
                    break;
                }
                used.push(cw);
            }
            if ok {
                chosen.push(w);
                if self.rainbow_extend(colors, u, v, w, chosen, used, need - 1) {
                    return true;
                }
                chosen.pop();
            }
            used.truncate(before);
        }
        false
    }

    /// Runs `test` on every set {w_1 < … < w_k < u, u, v} with the w_i drawn
    /// from 1..u, stopping at the first hit.
    fn any_subset_hits(
        &self,
        u: Vertex,
        v: Vertex,
        k: usize,
        mut test: impl FnMut(&[Vertex]) -> bool,
    ) -> bool {
        let mut set = vec![0; k + 2];
        set[k] = u;
        set[k + 1] = v;
        fn descend(
            set: &mut Vec<Vertex>,
            pos: usize,
            lo: Vertex,
            u: Vertex,
            test: &mut impl FnMut(&[Vertex]) -> bool,
        ) -> bool {
            if pos == set.len() - 2 {
                return test(set);
            }
            // set[pos..] still needs (set.len()-2-pos) members strictly
            // between lo-1 and u, ascending.
            let remaining = (set.len() - 2 - pos) as u32;
            for w in lo..u {
                if u - w < remaining {
                    break;
                }
                set[pos] = w;
                if descend(set, pos + 1, w + 1, u, test) {
                    return true;
                }
            }
            false
        }
        descend(&mut set, 0, 1, u, &mut test)
    }

    /// DFS from edge `e` onward. `colors[..e]` is the committed prefix and
    /// `used` its distinct-color count. On `Found`, `colors` holds a full
    /// avoiding assignment.
    fn dfs(
        &self,
        colors: &mut [ColorId],
        e: usize,
        used: u32,
        branch: usize,
        ctl: &Controls<'_>,
        local: &mut u64,
    ) -> Dfs {
        if e == self.e_total {
            return Dfs::Found;
        }
        for c in 0..=used.min(self.cap - 1) {
            colors[e] = c;
            if ctl.tick(local, branch) {
                return Dfs::Aborted;
            }
            if self.assignment_violates(colors, e) {
                continue;
            }
            let next_used = used.max(c + 1);
            match self.dfs(colors, e + 1, next_used, branch, ctl, local) {
                Dfs::Exhausted => {}
                done => return done,
            }
        }
        Dfs::Exhausted
    }

    /// Enumerates the surviving color assignments of the first `depth`
    /// edges; these are the parallel work units.
    fn collect_branches(
        &self,
        colors: &mut [ColorId],
        e: usize,
        used: u32,
        depth: usize,
        out: &mut Vec<Branch>,
        ctl: &Controls<'_>,
        local: &mut u64,
    ) -> bool {
        if e == depth {
            out.push(Branch { prefix: colors[..depth].to_vec(), used });
            return false;
        }
        for c in 0..=used.min(self.cap - 1) {
            colors[e] = c;
            if ctl.tick(local, usize::MAX) {
                return true;
            }
            if self.assignment_violates(colors, e) {
                continue;
            }
            if self.collect_branches(colors, e + 1, used.max(c + 1), depth, out, ctl, local) {
                return true;
            }
        }
        false
    }
}

/// Decides whether some coloring of K_n (under the query's color cap, if
/// any) avoids every forbidden pattern. Exhaustive up to color isomorphism,
/// so `ProvenAbsent` is a proof; resource caps yield `Inconclusive`.
pub fn exists_avoiding(n: u32, query: &PatternQuery, limits: &SearchLimits) -> ExistsReport {
    query.validate().expect("invalid query");
    assert!(n >= 2, "existence needs at least one edge, got n={n}");
    let t0 = Instant::now();
    let engine = Engine::new(n, query);
    let depth = prefix_depth(engine.e_total);

    let nodes = AtomicU64::new(0);
    let stop_nodes = AtomicBool::new(false);
    let stop_time = AtomicBool::new(false);
    let winner = AtomicUsize::new(usize::MAX);
    let node_budget = limits.node_budget.unwrap_or(u64::MAX);
    let ctl = Controls {
        nodes: &nodes,
        node_budget,
        deadline: limits.time_budget.map(|b| t0 + b),
        stop_nodes: &stop_nodes,
        stop_time: &stop_time,
        winner: &winner,
    };

    let mut branches = Vec::new();
    let mut prefix_nodes = 0u64;
    let mut scratch = vec![0; engine.e_total];
    let aborted = engine.collect_branches(
        &mut scratch,
        0,
        0,
        depth,
        &mut branches,
        &ctl,
        &mut prefix_nodes,
    );
    if aborted {
        let reason = stop_reason(&stop_nodes, &stop_time);
        return ExistsReport {
            outcome: ExistsOutcome::Inconclusive(reason),
            nodes: reported_nodes(reason, node_budget, &nodes),
            wall_time: t0.elapsed(),
        };
    }

    struct BranchResult {
        nodes: u64,
        witness: Option<Vec<ColorId>>,
    }
    let results: Mutex<Vec<Option<BranchResult>>> =
        Mutex::new((0..branches.len()).map(|_| None).collect());
    let next = AtomicUsize::new(0);

    let worker = || {
        let mut colors = vec![0; engine.e_total];
        loop {
            if stop_nodes.load(Ordering::Relaxed) || stop_time.load(Ordering::Relaxed) {
                break;
            }
            let b = next.fetch_add(1, Ordering::Relaxed);
            if b >= branches.len() {
                break;
            }
            if winner.load(Ordering::Relaxed) < b {
                continue;
            }
            colors[..depth].copy_from_slice(&branches[b].prefix);
            let mut local = 0u64;
            match engine.dfs(&mut colors, depth, branches[b].used, b, &ctl, &mut local) {
                Dfs::Found => {
                    winner.fetch_min(b, Ordering::AcqRel);
                    results.lock().unwrap()[b] =
                        Some(BranchResult { nodes: local, witness: Some(colors.clone()) });
                }
                Dfs::Exhausted => {
                    results.lock().unwrap()[b] =
                        Some(BranchResult { nodes: local, witness: None });
                }
                Dfs::Aborted => {}
            }
        }
    };

    let jobs = limits.jobs.max(1).min(branches.len().max(1));
    if jobs <= 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..jobs {
                s.spawn(worker);
            }
        });
    }

    let results = results.into_inner().unwrap();
    let budget_tripped = stop_nodes.load(Ordering::Relaxed);
    let time_tripped = stop_time.load(Ordering::Relaxed);
    let w = winner.load(Ordering::Relaxed);

    if w != usize::MAX {
        let raw: Vec<i64> = results[w]
            .as_ref()
            .and_then(|r| r.witness.as_ref())
            .expect("winner stores its witness")
            .iter()
            .map(|&c| c as i64)
            .collect();
        let witness = EdgeColoring::from_raw_colex(engine.n, &raw);
        let total = if budget_tripped {
            node_budget
        } else if time_tripped {
            nodes.load(Ordering::Relaxed)
        } else {
            // All branches below the winner exhausted without a witness;
            // this sum is what a sequential run would have counted.
            prefix_nodes
                + results[..=w]
                    .iter()
                    .map(|r| r.as_ref().expect("branches below the winner complete").nodes)
                    .sum::<u64>()
        };
        return ExistsReport {
            outcome: ExistsOutcome::Witness(witness),
            nodes: total,
            wall_time: t0.elapsed(),
        };
    }

    if budget_tripped || time_tripped {
        let reason = stop_reason(&stop_nodes, &stop_time);
        return ExistsReport {
            outcome: ExistsOutcome::Inconclusive(reason),
            nodes: reported_nodes(reason, node_budget, &nodes),
            wall_time: t0.elapsed(),
        };
    }

    let total = prefix_nodes
        + results
            .iter()
            .map(|r| r.as_ref().expect("no winner, so every branch completed").nodes)
            .sum::<u64>();
    ExistsReport {
        outcome: ExistsOutcome::ProvenAbsent,
        nodes: total,
        wall_time: t0.elapsed(),
    }
}

fn stop_reason(stop_nodes: &AtomicBool, stop_time: &AtomicBool) -> StopReason {
    debug_assert!(stop_nodes.load(Ordering::Relaxed) || stop_time.load(Ordering::Relaxed));
    if stop_nodes.load(Ordering::Relaxed) {
        StopReason::NodeBudget
    } else {
        StopReason::TimeBudget
    }
}

/// Capped runs report the budget itself so that the figure does not depend
/// on thread scheduling; time-capped counts are inherently approximate.
fn reported_nodes(reason: StopReason, budget: u64, nodes: &AtomicU64) -> u64 {
    match reason {
        StopReason::NodeBudget => budget,
        StopReason::TimeBudget => nodes.load(Ordering::Relaxed),
    }
}

/// Minimum n such that every coloring of K_n hits the bundle.
///
/// Scans upward from one below the smallest forbidden threshold, where a
/// witness is trivial; by heredity (restricting a witness on n gives one on
/// n−1) the first proven-absent n is the answer and the last witness seen
/// is extremal. Hitting `n_cap` or a resource cap downgrades the status to
/// a lower bound, never a guess.
pub fn compute_number(query: &PatternQuery, n_cap: u32, limits: &SearchLimits) -> SearchOutcome {
    query.validate().expect("invalid query");
    let start = (query.smallest_threshold() - 1).max(2);
    assert!(n_cap >= start, "n_cap {n_cap} below the trivial range start {start}");
    let t0 = Instant::now();
    let mut nodes = 0;
    // Placeholder for the degenerate answer 2: the one-vertex coloring.
    let mut witness = EdgeColoring::from_raw_colex(1, &[]);
    for n in start..=n_cap {
        let report = exists_avoiding(n, query, limits);
        nodes += report.nodes;
        match report.outcome {
            ExistsOutcome::Witness(w) => witness = w,
            ExistsOutcome::ProvenAbsent => {
                debug_assert_eq!(witness.n(), n - 1);
                return SearchOutcome {
                    status: SearchStatus::Exact,
                    value: n,
                    extremal_witness: witness,
                    nodes_explored: nodes,
                    wall_time: t0.elapsed(),
                };
            }
            ExistsOutcome::Inconclusive(_) => {
                return SearchOutcome {
                    status: SearchStatus::LowerBoundOnly,
                    value: n,
                    extremal_witness: witness,
                    nodes_explored: nodes,
                    wall_time: t0.elapsed(),
                };
            }
        }
    }
    SearchOutcome {
        status: SearchStatus::LowerBoundOnly,
        value: n_cap + 1,
        extremal_witness: witness,
        nodes_explored: nodes,
        wall_time: t0.elapsed(),
    }
}

/// Classical Ramsey number: minimum n forcing a monochromatic K_k under a
/// fixed number of colors.
pub fn ramsey_number(k: u32, colors: u32, n_cap: u32, limits: &SearchLimits) -> SearchOutcome {
    compute_number(&PatternQuery::default().mono(k).colors(colors), n_cap, limits)
}

/// Visits every coloring of K_n once per color-isomorphism class (every
/// restricted-growth assignment), with no pattern pruning. The class count
/// for n vertices is the Bell number of n(n−1)/2.
pub fn enumerate_colorings(n: u32, max_colors: Option<u32>, mut visit: impl FnMut(&EdgeColoring)) {
    assert!(n >= 1);
    let e_total = (n as usize) * (n as usize - 1) / 2;
    let cap = max_colors.unwrap_or(u32::MAX).min(e_total.max(1) as u32);
    let mut raw = vec![0i64; e_total];
    fn descend(
        raw: &mut Vec<i64>,
        e: usize,
        used: u32,
        cap: u32,
        n: u32,
        visit: &mut impl FnMut(&EdgeColoring),
    ) {
        if e == raw.len() {
            visit(&EdgeColoring::from_raw_colex(n, raw));
            return;
        }
        for c in 0..=used.min(cap - 1) {
            raw[e] = c as i64;
            descend(raw, e + 1, used.max(c + 1), cap, n, visit);
        }
    }
    descend(&mut raw, 0, 0, cap, n, &mut visit);
}
