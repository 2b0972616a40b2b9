//! Workspace file layout: where published roots, index maps, compliance
//! exports, and snapshot copies live relative to a command's output
//! directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use bomproof_core::error::{Error, Result};
use bomproof_core::registry::RegistrySnapshot;
use bomproof_core::smt::{RootFile, TreeKind};

pub const PT_ROOT_FILE: &str = "pt.root.json";
pub const INDEX_MAP_FILE: &str = "index_map.json";
pub const REGISTRY_COPY_FILE: &str = "registry.jsonl";

pub fn st_root_file(set_id: &str) -> String {
    format!("st.{set_id}.root.json")
}

pub fn compliance_file(policy_id: &str) -> String {
    format!("compliance.{policy_id}.json")
}

pub fn write_root_file(dir: &Path, name: &str, root_file: &RootFile) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, root_file.to_json()? + "\n")?;
    Ok(path)
}

pub fn read_root_file(path: &Path, expect_kind: TreeKind) -> Result<RootFile> {
    let bytes = std::fs::read(path)?;
    let root_file = RootFile::from_json(&bytes)?;
    if root_file.tree_kind != expect_kind {
        return Err(Error::Usage(format!(
            "{} is not a {} root file",
            path.display(),
            match expect_kind {
                TreeKind::Pt => "PT",
                TreeKind::St => "ST",
            }
        )));
    }
    Ok(root_file)
}

pub fn write_index_map(dir: &Path, index_map: &BTreeMap<String, u64>) -> Result<PathBuf> {
    let path = dir.join(INDEX_MAP_FILE);
    let json = serde_json::to_string_pretty(index_map).map_err(|e| Error::Schema(e.to_string()))?;
    std::fs::write(&path, json + "\n")?;
    Ok(path)
}

pub fn read_index_map(dir: &Path) -> Result<BTreeMap<String, u64>> {
    let bytes = std::fs::read(dir.join(INDEX_MAP_FILE))?;
    serde_json::from_slice(&bytes).map_err(|e| Error::Schema(format!("bad index map: {e}")))
}

/// Persist a normalized snapshot copy so a prover can rebuild the tree from
/// the setup directory alone.
pub fn write_registry_copy(dir: &Path, snapshot: &RegistrySnapshot) -> Result<PathBuf> {
    let path = dir.join(REGISTRY_COPY_FILE);
    std::fs::write(&path, snapshot.to_jsonl()?)?;
    Ok(path)
}
