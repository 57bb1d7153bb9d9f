use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use maximin::graph::parse_edge_list;
use maximin::{Domain, Graph};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub name: String,
    /// Relative paths are resolved against the manifest's directory.
    pub path: PathBuf,
    #[serde(default)]
    pub domain: Domain,
}

/// The network corpus: a JSON array of `{name, path, domain}` objects.
#[derive(Debug, Clone)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
    base: PathBuf,
}

/// A loaded network together with the bytes it was parsed from.
pub struct LoadedNetwork {
    pub entry: ManifestEntry,
    pub graph: Graph,
    pub content: Vec<u8>,
}

impl Manifest {
    pub fn load(path: &Path) -> anyhow::Result<Manifest> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        let entries: Vec<ManifestEntry> =
            serde_json::from_str(&text).with_context(|| format!("parsing manifest {}", path.display()))?;
        if entries.is_empty() {
            bail!("manifest {} lists no networks", path.display());
        }
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.name.as_str()) {
                bail!("manifest {} names network `{}` twice", path.display(), e.name);
            }
        }
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Manifest { entries, base })
    }

    pub fn resolve(&self, entry: &ManifestEntry) -> PathBuf {
        if entry.path.is_absolute() {
            entry.path.clone()
        } else {
            self.base.join(&entry.path)
        }
    }

    pub fn load_network(&self, entry: &ManifestEntry, lcc: bool) -> anyhow::Result<LoadedNetwork> {
        let path = self.resolve(entry);
        let content = std::fs::read(&path).with_context(|| format!("reading network `{}` from {}", entry.name, path.display()))?;
        let text = std::str::from_utf8(&content).with_context(|| format!("network `{}` is not UTF-8", entry.name))?;
        let graph = parse_edge_list(text, lcc)
            .with_context(|| format!("parsing network `{}`", entry.name))?
            .with_name(entry.name.clone())
            .with_domain(entry.domain);
        Ok(LoadedNetwork { entry: entry.clone(), graph, content })
    }

    pub fn find(&self, name: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("nets")).unwrap();
        std::fs::write(dir.path().join("nets/a.txt"), "a b\nb c\nx y\n").unwrap();
        let m = dir.path().join("m.json");
        std::fs::write(&m, r#"[{"name": "a", "path": "nets/a.txt", "domain": "social"}]"#).unwrap();
        let man = Manifest::load(&m).unwrap();
        let net = man.load_network(&man.entries[0], true).unwrap();
        assert_eq!(net.graph.node_count(), 3);
        assert_eq!(net.graph.domain(), Domain::Social);
        assert_eq!(man.load_network(&man.entries[0], false).unwrap().graph.node_count(), 5);
    }

    #[test]
    fn rejects_empty_and_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let m = dir.path().join("m.json");
        std::fs::write(&m, "[]").unwrap();
        assert!(Manifest::load(&m).unwrap_err().to_string().contains("no networks"));
        std::fs::write(&m, r#"[{"name": "a", "path": "x"}, {"name": "a", "path": "y"}]"#).unwrap();
        assert!(Manifest::load(&m).is_err());
    }
}
