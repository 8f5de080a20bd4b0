//! Coefficient-table cache keyed by descriptor and expansion limit.

use nonord_core::qseries::{expand_eta_quotient, load_table, save_table, CoeffTable, EtaQuotient};
use nonord_core::Result;
use std::env;
use std::path::{Path, PathBuf};

pub const CACHE_ENV_VAR: &str = "NONORD_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = ".nonord-cache";

/// Explicit flag wins, then the environment override, then `./.nonord-cache`.
pub fn resolve_cache_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| env::var_os(CACHE_ENV_VAR).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

pub struct CachedTable {
    pub table: CoeffTable,
    pub from_cache: bool,
    pub path: PathBuf,
}

fn cache_path(dir: &Path, desc: &EtaQuotient, n: usize) -> PathBuf {
    dir.join(format!("{}_N{}.etac", desc.cache_stem(), n))
}

/// Serve the table from the cache when a clean file with the exact
/// descriptor and limit exists; otherwise expand and populate the cache.
/// Unreadable or mismatched cache entries are rebuilt, never trusted.
pub fn load_or_build(desc: &EtaQuotient, n: usize, dir: &Path) -> Result<CachedTable> {
    let path = cache_path(dir, desc, n);
    if path.exists() {
        if let Ok(table) = load_table(&path) {
            if table.descriptor() == desc && table.limit() == n {
                return Ok(CachedTable { table, from_cache: true, path });
            }
        }
    }
    let table = expand_eta_quotient(desc, n)?;
    std::fs::create_dir_all(dir)?;
    save_table(&table, &path)?;
    Ok(CachedTable { table, from_cache: false, path })
}
