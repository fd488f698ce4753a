//! On-disk cache of tubing enumerations keyed by the canonical graph
//! encoding. An entry stores its payload as a string together with the
//! payload's SHA-256; a mismatched key, checksum or unparsable payload is
//! treated as a miss and the entry is rewritten.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tubings_core::tubing::enumerate_tubings;
use tubings_core::{Graph, NodeSet, Tubing};

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    sha256: String,
    payload: String,
}

/// `n=<n>;<a>-<b>,...` with edges ascending.
pub fn graph_key(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    format!("n={};{}", g.node_count(), edges.join(","))
}

fn digest(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join(format!("{}.json", digest(key)))
}

fn load(path: &Path, g: &Graph, key: &str) -> Option<Vec<Tubing>> {
    let entry: Entry = serde_json::from_str(&fs::read_to_string(path).ok()?).ok()?;
    if entry.key != key || entry.sha256 != digest(&entry.payload) {
        return None;
    }
    let lists: Vec<Vec<Vec<usize>>> = serde_json::from_str(&entry.payload).ok()?;
    lists
        .into_iter()
        .map(|tubes| Tubing::new(g.clone(), tubes.into_iter().map(NodeSet::from_nodes)).ok())
        .collect()
}

fn store(path: &Path, key: &str, tubings: &[Tubing]) -> std::io::Result<()> {
    let lists: Vec<Vec<Vec<usize>>> = tubings
        .iter()
        .map(|t| t.tubes().iter().map(|s| s.to_vec()).collect())
        .collect();
    let payload = serde_json::to_string(&lists).expect("tube lists serialize");
    let entry = Entry {
        key: key.to_string(),
        sha256: digest(&payload),
        payload,
    };
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(&entry).expect("entry serializes"))?;
    fs::rename(tmp, path)
}

/// Enumerates the tubings of `g`, through the cache when `dir` is set.
/// Cache I/O failures fall back to plain enumeration.
pub fn tubings(g: &Graph, dir: Option<&Path>) -> tubings_core::Result<Vec<Tubing>> {
    let Some(dir) = dir else {
        return enumerate_tubings(g);
    };
    let key = graph_key(g);
    let path = entry_path(dir, &key);
    if let Some(hit) = load(&path, g, &key) {
        return Ok(hit);
    }
    let all = enumerate_tubings(g)?;
    if fs::create_dir_all(dir).is_ok() {
        let _ = store(&path, &key, &all);
    }
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let g = Graph::cycle(4);
        let fresh = enumerate_tubings(&g).unwrap();
        assert_eq!(tubings(&g, Some(dir.path())).unwrap(), fresh);
        let path = entry_path(dir.path(), &graph_key(&g));
        assert_eq!(load(&path, &g, &graph_key(&g)).unwrap(), fresh);

        // Tamper with the payload while keeping the JSON valid.
        let mut e: Entry = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
        e.payload = "[[[1,2,3,4]]]".into();
        fs::write(&path, serde_json::to_string(&e).unwrap()).unwrap();
        assert!(load(&path, &g, &graph_key(&g)).is_none());
        assert_eq!(tubings(&g, Some(dir.path())).unwrap(), fresh);
        assert!(load(&path, &g, &graph_key(&g)).is_some());

        fs::write(&path, "not json").unwrap();
        assert_eq!(tubings(&g, Some(dir.path())).unwrap(), fresh);
    }

    #[test]
    fn keys_are_canonical() {
        let a = Graph::new(3, [(2, 1), (3, 2)]).unwrap();
        assert_eq!(graph_key(&a), "n=3;1-2,2-3");
        assert_eq!(graph_key(&a), graph_key(&Graph::linear(3)));
    }
}
