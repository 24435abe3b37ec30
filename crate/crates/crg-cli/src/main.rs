//! `crg` ties the library together for scripts and quick experiments:
//! build colorings, hunt patterns, search minimum forcing sizes, run the
//! extraction procedures, and keep verified witnesses in a store.
//!
//! Exit codes: 0 found / success, 1 proven absent / verdict false,
//! 2 inconclusive, 64 usage or input defect. Reports mix prose with
//! `key=value` machine lines; given identical arguments, seeds and input
//! files, the machine lines and output files are byte-identical (the
//! `RESULT` trailer carries wall-clock seconds and is exempt). All
//! randomness flows from `--seed`, which defaults to 0; nothing reads the
//! clock for entropy.

mod store;

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crg_core::construct;
use crg_core::detect::{self, Certificate, CliqueWitness, PatternKind};
use crg_core::io;
use crg_core::proof::{self, ExtractionOutcome, ExtractionReport, SampleOutcome};
use crg_core::search::{self, ExistsOutcome, PatternQuery, SearchLimits, SearchStatus};
use crg_core::{EdgeColoring, VertexSet};

const EXIT_FOUND: u8 = 0;
const EXIT_ABSENT: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "crg", version, about = "Pattern toolkit for edge-colored complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search a coloring for one clique pattern of a given size.
    Detect {
        /// Input crg file.
        #[arg(long = "in")]
        input: PathBuf,
        /// monochromatic, rainbow, lexical, orderable, upper-lexical,
        /// lower-lexical, or canonical (any of the four natural-order kinds).
        #[arg(long)]
        kind: String,
        /// Clique size to look for.
        #[arg(long)]
        size: u32,
    },
    /// Build a coloring and write it to a crg file.
    Construct {
        #[command(subcommand)]
        family: ConstructCmd,
    },
    /// Smallest n at which every coloring of K_n hits the forbidden bundle.
    SearchNumber {
        #[command(flatten)]
        query: QueryArgs,
        /// Largest n to scan before settling for a lower bound.
        #[arg(long)]
        cap: u32,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the extremal witness (on value-1 vertices) here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Decide whether any coloring of K_n avoids the forbidden bundle.
    Exists {
        /// Number of vertices.
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the avoiding coloring here when one exists.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Check a coloring against a forbidden bundle.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Sample 3r-subsets and prune obstructions until a rainbow K_r drops out.
    FindRainbow {
        #[arg(long = "in")]
        input: PathBuf,
        /// Rainbow clique size.
        #[arg(long)]
        r: u32,
        /// Color whose edges are deleted outright; defaults to the heaviest
        /// color of the pool.
        #[arg(long)]
        special: Option<u32>,
        /// Pool of vertices to sample from, e.g. `1,2,5,9`; defaults to all.
        #[arg(long)]
        set: Option<String>,
        /// Seed for the sampling stream (default 0, never the clock).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        tries: u64,
    },
    /// Run one of the constructive extraction procedures.
    Extract {
        #[command(subcommand)]
        procedure: ExtractCmd,
    },
    /// Count rainbow obstructions in a vertex set: same-colored cherries,
    /// same-colored disjoint pairs, and special-colored edges.
    CountStructures {
        #[arg(long = "in")]
        input: PathBuf,
        /// Defaults to the heaviest color of the set.
        #[arg(long)]
        special: Option<u32>,
        /// Vertex set, e.g. `1,2,5,9`; defaults to all vertices.
        #[arg(long)]
        set: Option<String>,
    },
    /// Manage a directory of verified witness colorings.
    Store {
        #[command(subcommand)]
        op: StoreCmd,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// One color on every edge.
    Mono(SimpleConstructArgs),
    /// Pairwise distinct colors.
    Rainbow(SimpleConstructArgs),
    /// Color of an edge is its lower endpoint.
    Lexical(SimpleConstructArgs),
    /// Uniform random colors from a fixed palette.
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        colors: u32,
        /// Seed (default 0, never the clock).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random coloring in which no vertex sees any color more than delta times.
    DeltaGood {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Blow-up: one inner copy per outer vertex, outer colors across copies.
    Product {
        #[arg(long)]
        outer: PathBuf,
        #[arg(long)]
        inner: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Left fold of the product with a fixed base, `times` applications.
    IteratedProduct {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        times: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct SimpleConstructArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum ExtractCmd {
    /// From an edge uv of color i and a second color j, pull a monochromatic
    /// K_m or a lexical K_4 out of N_j(u) meet N_i(v).
    Claim1 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        j: u32,
        #[arg(long)]
        m: u32,
    },
    /// From an edge uv, pull a monochromatic K_4, a rainbow K_r, or a
    /// lexical K_l out of the shared neighborhood in the edge's color.
    Claim2 {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        u: u32,
        #[arg(long)]
        v: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        r: u32,
    },
    /// Heavy-color descent toward an orderable K_o, falling back to the
    /// rainbow K_r finder when no color is heavy enough.
    OrderableOrRainbow {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        o: u32,
        #[arg(long)]
        r: u32,
        /// Per-level color degree demands, e.g. `6,4`; must list o-2 values.
        /// Defaults to a quarter of the current set at each level.
        #[arg(long)]
        thresholds: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        tries: u64,
    },
}

#[derive(Subcommand)]
enum StoreCmd {
    /// Verify a coloring against a query and file it with metadata.
    Add {
        #[arg(long)]
        store: PathBuf,
        /// The crg file to add.
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        query: QueryArgs,
        #[arg(long)]
        provenance: Provenance,
        /// Recorded verification timestamp (default 0; supply your own
        /// epoch seconds when you want real ones).
        #[arg(long, default_value_t = 0)]
        verified_at: u64,
        /// Entry name; defaults to a slug of the query and vertex count.
        #[arg(long)]
        name: Option<String>,
    },
    /// List entries and their metadata.
    List {
        #[arg(long)]
        store: PathBuf,
    },
    /// Re-verify every entry against its recorded query.
    Check {
        #[arg(long)]
        store: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Provenance {
    Search,
    Product,
    Manual,
}

impl Provenance {
    fn name(self) -> &'static str {
        match self {
            Provenance::Search => "search",
            Provenance::Product => "product",
            Provenance::Manual => "manual",
        }
    }
}

/// Forbidden-pattern bundle, shared by every query-taking subcommand.
#[derive(Args)]
struct QueryArgs {
    /// Forbid monochromatic cliques of this size.
    #[arg(long)]
    forbid_mono: Option<u32>,
    /// Forbid lexical cliques of this size.
    #[arg(long)]
    forbid_lexical: Option<u32>,
    /// Forbid rainbow cliques of this size.
    #[arg(long)]
    forbid_rainbow: Option<u32>,
    /// Forbid orderable cliques of this size.
    #[arg(long)]
    forbid_orderable: Option<u32>,
    /// Forbid all four natural-order patterns of this size.
    #[arg(long)]
    forbid_canonical: Option<u32>,
    /// Cap on the number of colors.
    #[arg(long)]
    colors: Option<u32>,
}

impl QueryArgs {
    fn to_query(&self) -> Result<PatternQuery> {
        let mut q = PatternQuery::default();
        if let Some(m) = self.forbid_mono {
            q = q.mono(m);
        }
        if let Some(l) = self.forbid_lexical {
            q = q.lexical(l);
        }
        if let Some(r) = self.forbid_rainbow {
            q = q.rainbow(r);
        }
        if let Some(o) = self.forbid_orderable {
            q = q.orderable(o);
        }
        if let Some(t) = self.forbid_canonical {
            q = q.ordered_canonical(t);
        }
        if let Some(c) = self.colors {
            q = q.colors(c);
        }
        q.validate()?;
        Ok(q)
    }
}

#[derive(Args)]
struct LimitArgs {
    /// Worker threads for the search.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Abort after this many explored nodes.
    #[arg(long)]
    node_budget: Option<u64>,
    /// Abort after this many seconds.
    #[arg(long)]
    time_budget_secs: Option<f64>,
}

impl LimitArgs {
    fn to_limits(&self) -> SearchLimits {
        SearchLimits {
            node_budget: self.node_budget,
            time_budget: self.time_budget_secs.map(Duration::from_secs_f64),
            jobs: self.jobs,
        }
    }
}

fn main() -> ExitCode {
    // Die quietly when the read end of a pipe goes away (`crg ... | head`),
    // like every other unix filter, instead of unwinding through println.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Detect { input, kind, size } => cmd_detect(&input, &kind, size),
        Command::Construct { family } => cmd_construct(family),
        Command::SearchNumber { query, cap, limits, witness_out } => {
            cmd_search_number(&query, cap, &limits, witness_out.as_deref())
        }
        Command::Exists { n, query, limits, witness_out } => {
            cmd_exists(n, &query, &limits, witness_out.as_deref())
        }
        Command::Verify { input, query } => cmd_verify(&input, &query),
        Command::FindRainbow { input, r, special, set, seed, tries } => {
            cmd_find_rainbow(&input, r, special, set.as_deref(), seed, tries)
        }
        Command::Extract { procedure } => cmd_extract(procedure),
        Command::CountStructures { input, special, set } => {
            cmd_count_structures(&input, special, set.as_deref())
        }
        Command::Store { op } => cmd_store(op),
    }
}

// ---------------------------------------------------------------------------
// Shared plumbing.

fn kv(key: &str, value: impl Display) {
    println!("{key}={value}");
}

fn read_coloring(path: &Path) -> Result<EdgeColoring> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let doc = io::parse_crg(&text).with_context(|| format!("{}: bad crg file", path.display()))?;
    Ok(doc.coloring)
}

fn write_coloring(path: &Path, chi: &EdgeColoring, comments: &[String]) -> Result<()> {
    fs::write(path, io::write_crg(chi, comments))
        .with_context(|| format!("cannot write {}", path.display()))
}

fn parse_vertex_set(chi: &EdgeColoring, spec: Option<&str>) -> Result<VertexSet> {
    let Some(spec) = spec else {
        return Ok(chi.all_vertices());
    };
    let members = spec
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| anyhow!("`{t}` is not a vertex label")))
        .collect::<Result<Vec<u32>>>()?;
    Ok(VertexSet::within(chi.n(), members)?)
}

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn witness_lines(w: &CliqueWitness) {
    kv("kind", w.kind);
    kv("vertices", &w.vertices);
    match &w.certificate {
        Certificate::Monochromatic { color } => kv("color", color),
        Certificate::Rainbow => {}
        Certificate::Ordered { order, levels } => {
            kv("order", join(order));
            kv("levels", join(levels));
        }
        Certificate::NaturalLevels { levels } => kv("levels", join(levels)),
    }
}

fn witness_prose(w: &CliqueWitness) -> String {
    match &w.certificate {
        Certificate::Monochromatic { color } => {
            format!("{} K_{} on {{{}}} in color {color}", w.kind, w.vertices.len(), w.vertices)
        }
        Certificate::Rainbow => {
            format!("{} K_{} on {{{}}}", w.kind, w.vertices.len(), w.vertices)
        }
        Certificate::Ordered { order, levels } => format!(
            "{} K_{} ordered {} with levels {}",
            w.kind,
            w.vertices.len(),
            join(order),
            join(levels)
        ),
        Certificate::NaturalLevels { levels } => format!(
            "{} K_{} on {{{}}} with natural levels {}",
            w.kind,
            w.vertices.len(),
            w.vertices,
            join(levels)
        ),
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn cmd_detect(input: &Path, kind: &str, size: u32) -> Result<u8> {
    let chi = read_coloring(input)?;
    let found = if kind == "canonical" {
        detect::find_ordered_canonical(&chi, size)?
    } else {
        let kind: PatternKind = kind.parse().map_err(|e: String| anyhow!(e))?;
        detect::find_clique(&chi, kind, size)?
    };
    kv("n", chi.n());
    kv("size", size);
    match found {
        Some(w) => {
            println!("{}", witness_prose(&w));
            kv("found", true);
            witness_lines(&w);
            Ok(EXIT_FOUND)
        }
        None => {
            println!("no {kind} K_{size} in any {size}-subset of K_{}", chi.n());
            kv("found", false);
            Ok(EXIT_ABSENT)
        }
    }
}

fn cmd_construct(family: ConstructCmd) -> Result<u8> {
    let (label, chi, out) = match family {
        ConstructCmd::Mono(args) => ("mono", construct::mono_coloring(args.n)?, args.out),
        ConstructCmd::Rainbow(args) => ("rainbow", construct::rainbow_coloring(args.n)?, args.out),
        ConstructCmd::Lexical(args) => ("lexical", construct::lexical_coloring(args.n)?, args.out),
        ConstructCmd::Random { n, colors, seed, out } => {
            ("random", construct::random_coloring(n, colors, seed)?, out)
        }
        ConstructCmd::DeltaGood { n, delta, seed, out } => {
            ("delta-good", construct::random_delta_good(n, delta, seed)?, out)
        }
        ConstructCmd::Product { outer, inner, out } => {
            let outer = read_coloring(&outer)?;
            let inner = read_coloring(&inner)?;
            ("product", construct::product(&outer, &inner)?, out)
        }
        ConstructCmd::IteratedProduct { base, times, out } => {
            let base = read_coloring(&base)?;
            ("iterated-product", construct::iterated_product(&base, times)?, out)
        }
    };
    write_coloring(&out, &chi, &[format!("generator={label}")])?;
    println!("wrote {label} coloring of K_{} to {}", chi.n(), out.display());
    kv("family", label);
    kv("n", chi.n());
    kv("colors", chi.color_count());
    kv("out", out.display());
    Ok(EXIT_FOUND)
}

fn cmd_search_number(
    args: &QueryArgs,
    cap: u32,
    limits: &LimitArgs,
    witness_out: Option<&Path>,
) -> Result<u8> {
    let query = args.to_query()?;
    let out = search::compute_number(&query, cap, &limits.to_limits());
    println!(
        "minimum n forcing {{{query}}}: {} ({}), witness on {} vertices",
        out.value,
        out.status,
        out.extremal_witness.n()
    );
    kv("query", &query);
    kv("status", out.status);
    kv("value", out.value);
    kv("witness_n", out.extremal_witness.n());
    kv("nodes", out.nodes_explored);
    if let Some(path) = witness_out {
        let comments = vec![
            format!("query={query}"),
            "provenance=search".to_string(),
            "verified_at=0".to_string(),
        ];
        write_coloring(path, &out.extremal_witness, &comments)?;
        kv("witness_out", path.display());
    }
    println!(
        "RESULT {query} {} {} {} {:.3}",
        out.status,
        out.value,
        out.nodes_explored,
        out.wall_time.as_secs_f64()
    );
    Ok(match out.status {
        SearchStatus::Exact => EXIT_FOUND,
        SearchStatus::LowerBoundOnly => EXIT_INCONCLUSIVE,
    })
}

fn cmd_exists(
    n: u32,
    args: &QueryArgs,
    limits: &LimitArgs,
    witness_out: Option<&Path>,
) -> Result<u8> {
    let query = args.to_query()?;
    let report = search::exists_avoiding(n, &query, &limits.to_limits());
    kv("query", &query);
    kv("n", n);
    let (word, code) = match &report.outcome {
        ExistsOutcome::Witness(chi) => {
            println!("K_{n} admits a coloring avoiding {{{query}}}");
            if let Some(path) = witness_out {
                let comments = vec![
                    format!("query={query}"),
                    "provenance=search".to_string(),
                    "verified_at=0".to_string(),
                ];
                write_coloring(path, chi, &comments)?;
                kv("witness_out", path.display());
            } else {
                print!("{}", io::write_crg(chi, &[]));
            }
            ("witness", EXIT_FOUND)
        }
        ExistsOutcome::ProvenAbsent => {
            println!("every coloring of K_{n} hits {{{query}}}: exhaustive, pruned");
            ("proven-absent", EXIT_ABSENT)
        }
        ExistsOutcome::Inconclusive(stop) => {
            println!("search stopped by its {stop} before settling K_{n}");
            kv("stop", stop);
            ("inconclusive", EXIT_INCONCLUSIVE)
        }
    };
    kv("outcome", word);
    kv("nodes", report.nodes);
    println!(
        "RESULT {query} {word} {n} {} {:.3}",
        report.nodes,
        report.wall_time.as_secs_f64()
    );
    Ok(code)
}

fn cmd_verify(input: &Path, args: &QueryArgs) -> Result<u8> {
    let query = args.to_query()?;
    let chi = read_coloring(input)?;
    kv("query", &query);
    kv("n", chi.n());
    match search::verify_avoids(&chi, &query) {
        None => {
            println!("K_{} coloring avoids {{{query}}}", chi.n());
            kv("avoids", true);
            Ok(EXIT_FOUND)
        }
        Some(violation) => {
            println!("violation: {violation}");
            kv("avoids", false);
            kv("violation", &violation);
            Ok(EXIT_ABSENT)
        }
    }
}

fn cmd_find_rainbow(
    input: &Path,
    r: u32,
    special: Option<u32>,
    set: Option<&str>,
    seed: u64,
    tries: u64,
) -> Result<u8> {
    let chi = read_coloring(input)?;
    let pool = parse_vertex_set(&chi, set)?;
    let special = match special {
        Some(c) => c,
        None => {
            proof::heaviest_color(&chi, &pool)
                .map(|(c, _)| c)
                .ok_or_else(|| anyhow!("pool has no internal edges to pick a special color from"))?
        }
    };
    kv("n", chi.n());
    kv("pool_size", pool.len());
    kv("r", r);
    kv("special", special);
    kv("seed", seed);
    match proof::sample_extract_rainbow(&chi, &pool, r, special, seed, tries)? {
        SampleOutcome::Found { witness, try_index } => {
            println!("{} after {} rejected samples", witness_prose(&witness), try_index);
            kv("outcome", "found");
            kv("try", try_index);
            witness_lines(&witness);
            Ok(EXIT_FOUND)
        }
        SampleOutcome::Exhausted { tries, best, best_try } => {
            println!(
                "no sample of {} vertices met the obstruction bounds in {tries} tries; \
                 closest was try {best_try} with {best}",
                3 * r
            );
            kv("outcome", "exhausted");
            kv("tries", tries);
            kv("best_x", best.x);
            kv("best_y", best.y);
            kv("best_z", best.z);
            kv("best_try", best_try);
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_extract(procedure: ExtractCmd) -> Result<u8> {
    let report: ExtractionReport = match procedure {
        ExtractCmd::Claim1 { input, u, v, i, j, m } => {
            let chi = read_coloring(&input)?;
            kv("n", chi.n());
            proof::claim1_extract(&chi, u, v, i, j, m)?
        }
        ExtractCmd::Claim2 { input, u, v, l, r } => {
            let chi = read_coloring(&input)?;
            kv("n", chi.n());
            proof::claim2_extract(&chi, u, v, l, r)?
        }
        ExtractCmd::OrderableOrRainbow { input, o, r, thresholds, seed, tries } => {
            let chi = read_coloring(&input)?;
            kv("n", chi.n());
            match thresholds {
                Some(spec) => {
                    let ts = spec
                        .split(',')
                        .map(|t| {
                            t.trim().parse().map_err(|_| anyhow!("`{t}` is not a threshold"))
                        })
                        .collect::<Result<Vec<u32>>>()?;
                    proof::extract_orderable_or_rainbow(&chi, o, r, &ts, seed, tries)?
                }
                None => proof::extract_orderable_or_rainbow_auto(&chi, o, r, seed, tries)?,
            }
        }
    };
    for line in &report.trace {
        println!("  {line}");
    }
    match report.outcome {
        ExtractionOutcome::Witness(w) => {
            println!("{}", witness_prose(&w));
            kv("outcome", "witness");
            witness_lines(&w);
            Ok(EXIT_FOUND)
        }
        ExtractionOutcome::PreconditionUnmet(reason) => {
            println!("precondition unmet: {reason}");
            kv("outcome", "precondition-unmet");
            kv("reason", reason);
            Ok(EXIT_INCONCLUSIVE)
        }
        ExtractionOutcome::Inconclusive(reason) => {
            println!("inconclusive: {reason}");
            kv("outcome", "inconclusive");
            kv("reason", reason);
            Ok(EXIT_INCONCLUSIVE)
        }
    }
}

fn cmd_count_structures(input: &Path, special: Option<u32>, set: Option<&str>) -> Result<u8> {
    let chi = read_coloring(input)?;
    let set = parse_vertex_set(&chi, set)?;
    if set.is_empty() {
        bail!("the vertex set is empty");
    }
    let special = match special {
        Some(c) => c,
        None => proof::heaviest_color(&chi, &set)
            .map(|(c, _)| c)
            .ok_or_else(|| anyhow!("set has no internal edges to pick a special color from"))?,
    };
    let counts = proof::count_structures(&chi, &set, special);
    println!(
        "{} same-colored cherries, {} same-colored disjoint pairs (colors != {special}), \
         {} edges of color {special}",
        counts.x, counts.y, counts.z
    );
    kv("n", chi.n());
    kv("set_size", set.len());
    kv("special", special);
    kv("x", counts.x);
    kv("y", counts.y);
    kv("z", counts.z);
    kv("total", counts.total());
    Ok(EXIT_FOUND)
}

fn cmd_store(op: StoreCmd) -> Result<u8> {
    match op {
        StoreCmd::Add { store: dir, file, query, provenance, verified_at, name } => {
            let query = query.to_query()?;
            let chi = read_coloring(&file)?;
            kv("query", &query);
            kv("n", chi.n());
            if let Some(violation) = search::verify_avoids(&chi, &query) {
                println!("refusing to store: {violation}");
                kv("stored", false);
                kv("violation", &violation);
                return Ok(EXIT_ABSENT);
            }
            let name = name.unwrap_or_else(|| store::derived_name(&query, chi.n()));
            let path =
                store::add(&dir, &name, &chi, &query, provenance.name(), verified_at)?;
            println!("stored {} as {}", file.display(), path.display());
            kv("stored", true);
            kv("name", &name);
            kv("provenance", provenance.name());
            kv("verified_at", verified_at);
            kv("path", path.display());
            Ok(EXIT_FOUND)
        }
        StoreCmd::List { store: dir } => {
            let entries = store::load(&dir)?;
            for entry in &entries {
                let meta = entry.metadata()?;
                kv("name", &entry.name);
                kv("n", entry.document.coloring.n());
                kv("query", &meta.query);
                kv("provenance", &meta.provenance);
                kv("verified_at", meta.verified_at);
            }
            println!("{} entries in {}", entries.len(), dir.display());
            kv("entries", entries.len());
            Ok(EXIT_FOUND)
        }
        StoreCmd::Check { store: dir } => {
            let entries = store::load(&dir)?;
            let mut stale = 0usize;
            for entry in &entries {
                let fresh = store::is_fresh(entry)?;
                kv("name", &entry.name);
                kv("stale", !fresh);
                if !fresh {
                    stale += 1;
                    println!("{}: no longer avoids its recorded query", entry.name);
                }
            }
            println!("{} of {} entries stale", stale, entries.len());
            kv("entries", entries.len());
            kv("stale_count", stale);
            Ok(if stale == 0 { EXIT_FOUND } else { EXIT_ABSENT })
        }
    }
}
