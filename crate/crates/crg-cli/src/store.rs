//! A witness store is a directory of crg files whose comments record what
//! each coloring avoids, where it came from, and when that was last checked:
//!
//! ```text
//! # query=mono=3,rainbow=4
//! # provenance=search
//! # verified_at=0
//! ```
//!
//! Entries are only trusted after re-verification; `check` flags any file
//! whose coloring no longer avoids its recorded query as stale.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use crg_core::io::{self, CrgDocument};
use crg_core::search::{self, PatternQuery};
use crg_core::EdgeColoring;

pub struct StoreEntry {
    pub name: String,
    pub document: CrgDocument,
}

pub struct EntryMetadata {
    pub query: PatternQuery,
    pub provenance: String,
    pub verified_at: u64,
}

impl StoreEntry {
    pub fn metadata(&self) -> Result<EntryMetadata> {
        let field = |key: &str| -> Result<&str> {
            self.document
                .comments
                .iter()
                .find_map(|c| c.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                .with_context(|| format!("{}: no `{key}=` comment", self.name))
        };
        Ok(EntryMetadata {
            query: field("query")?
                .parse()
                .map_err(|e| anyhow::anyhow!("{}: bad query comment: {e}", self.name))?,
            provenance: field("provenance")?.to_string(),
            verified_at: field("verified_at")?
                .parse()
                .with_context(|| format!("{}: bad verified_at comment", self.name))?,
        })
    }
}

/// Entry names are derived from the query and witness size when the caller
/// does not pick one: `mono=3,colors=2` on 5 vertices becomes
/// `mono3-colors2-n5`.
pub fn derived_name(query: &PatternQuery, n: u32) -> String {
    let mut name = query.to_string().replace('=', "").replace(',', "-");
    name.push_str(&format!("-n{n}"));
    name
}

/// Verifies the coloring against the query and writes it into the store.
/// Refuses (Err) when the coloring violates the query it claims to avoid.
pub fn add(
    dir: &Path,
    name: &str,
    chi: &EdgeColoring,
    query: &PatternQuery,
    provenance: &str,
    verified_at: u64,
) -> Result<PathBuf> {
    if let Some(violation) = search::verify_avoids(chi, query) {
        bail!("coloring does not avoid `{query}`: {violation}");
    }
    fs::create_dir_all(dir)
        .with_context(|| format!("cannot create store directory {}", dir.display()))?;
    let comments = vec![
        format!("query={query}"),
        format!("provenance={provenance}"),
        format!("verified_at={verified_at}"),
    ];
    let path = dir.join(format!("{name}.crg"));
    fs::write(&path, io::write_crg(chi, &comments))
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(path)
}

/// All entries in name order. Files that fail to parse are hard errors: a
/// store holds verified artifacts, not scratch space.
pub fn load(dir: &Path) -> Result<Vec<StoreEntry>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read store directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "crg"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let text = fs::read_to_string(&path)
                .with_context(|| format!("cannot read {}", path.display()))?;
            let document =
                io::parse_crg(&text).with_context(|| format!("{}: bad crg file", path.display()))?;
            Ok(StoreEntry { name, document })
        })
        .collect()
}

/// Whether the entry still avoids its recorded query.
pub fn is_fresh(entry: &StoreEntry) -> Result<bool> {
    let meta = entry.metadata()?;
    Ok(search::verify_avoids(&entry.document.coloring, &meta.query).is_none())
}
