//! Reading inputs and writing artifacts.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use generic_structures::autorder::{AutCondition, AutDoc};
use generic_structures::structure::StructureDoc;
use generic_structures::{ClassTag, Elem, FinStructure};
use serde_json::Value;

use crate::Failure;

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A structure file: either a bare structure document or a build artifact
/// with `"structure"` (and `"class"`).
pub fn read_structure(path: &Path) -> Result<(Option<ClassTag>, FinStructure), Failure> {
    let v = read_json(path)?;
    let tag = match v.get("class").and_then(Value::as_str) {
        Some(name) => Some(crate::parse_class(name)?),
        None => None,
    };
    let doc = v.get("structure").cloned().unwrap_or(v);
    let doc: StructureDoc =
        serde_json::from_value(doc).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let s = FinStructure::from_doc(doc).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok((tag, s))
}

/// An automorphic-order file: a bare document or an artifact with
/// `"condition"`.
pub fn read_aut(path: &Path) -> Result<AutCondition, Failure> {
    let v = read_json(path)?;
    let doc = v.get("condition").cloned().unwrap_or(v);
    let doc: AutDoc = serde_json::from_value(doc).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let text = serde_json::to_string(&doc).expect("document serializes");
    AutCondition::from_json(&text).map_err(|e| Failure::Precondition(e.name(), e.to_string()))
}

/// `"3:5,4:7"` as a map.
pub fn parse_map(text: &str) -> Result<BTreeMap<Elem, Elem>, Failure> {
    let mut out = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (x, y) = pair
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("bad map entry {pair:?}, expected x:y")))?;
        let parse = |s: &str| s.trim().parse::<Elem>().map_err(|e| Failure::Usage(format!("{s:?}: {e}")));
        out.insert(parse(x)?, parse(y)?);
    }
    Ok(out)
}

/// `"0,1,4"` as a set.
pub fn parse_set(text: &str) -> Result<BTreeSet<Elem>, Failure> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|s| s.parse::<Elem>().map_err(|e| Failure::Usage(format!("{s:?}: {e}"))))
        .collect()
}

pub fn render_pairs(m: &BTreeMap<Elem, Elem>) -> String {
    m.iter().map(|(x, y)| format!("{x}:{y}")).collect::<Vec<_>>().join(",")
}

/// Writes through a temporary file in the same directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// To `path` when given, else stdout.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match path {
        Some(p) => write_atomic(p, text.as_bytes()).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}
