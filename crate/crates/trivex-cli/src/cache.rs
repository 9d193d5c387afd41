//! Content-addressed binary cache: every entry is keyed by a hash of its
//! inputs and carries a checksum of its payload. Anything that fails
//! validation is rebuilt silently.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::{Path, PathBuf};

const MAGIC: &[u8; 4] = b"TVXC";
const FORMAT_VERSION: u32 = 1;

pub fn input_hash(parts: &[&str]) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(trivex::VERSION.as_bytes());
    for p in parts {
        h.update([0u8]);
        h.update(p.as_bytes());
    }
    h.finalize().into()
}

pub fn short_hex(hash: &[u8; 32]) -> String {
    hash.iter().take(6).map(|b| format!("{b:02x}")).collect()
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: &Path) -> Cache {
        // an unusable cache directory disables caching rather than failing
        let usable = std::fs::create_dir_all(dir).is_ok();
        Cache {
            dir: usable.then(|| dir.to_path_buf()),
        }
    }

    fn path(&self, kind: &str, key: &[u8; 32]) -> Option<PathBuf> {
        self.dir
            .as_ref()
            .map(|d| d.join(format!("{kind}-{}.bin", short_hex(key))))
    }

    pub fn load(&self, kind: &str, key: &[u8; 32]) -> Option<Vec<u8>> {
        let path = self.path(kind, key)?;
        let bytes = std::fs::read(path).ok()?;
        if bytes.len() < 4 + 4 + 32 + 8 + 32 || &bytes[..4] != MAGIC {
            return None;
        }
        let ver = u32::from_le_bytes(bytes[4..8].try_into().ok()?);
        if ver != FORMAT_VERSION || &bytes[8..40] != key {
            return None;
        }
        let len = u64::from_le_bytes(bytes[40..48].try_into().ok()?) as usize;
        if bytes.len() != 48 + len + 32 {
            return None;
        }
        let payload = &bytes[48..48 + len];
        let check: [u8; 32] = Sha256::digest(payload).into();
        if check != bytes[48 + len..] {
            return None;
        }
        Some(payload.to_vec())
    }

    pub fn store(&self, kind: &str, key: &[u8; 32], payload: &[u8]) {
        let Some(path) = self.path(kind, key) else {
            return;
        };
        let mut buf = Vec::with_capacity(48 + payload.len() + 32);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        buf.extend_from_slice(key);
        buf.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        buf.extend_from_slice(payload);
        let check: [u8; 32] = Sha256::digest(payload).into();
        buf.extend_from_slice(&check);
        // ignore write failures: the cache is an accelerator, not state
        let _ = std::fs::File::create(path).and_then(|mut f| f.write_all(&buf));
    }
}

/// Compact binary form of a labelled graph for caching.
pub fn encode_graph(g: &trivex::graph::LabeledGraph) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&(g.n() as u64).to_le_bytes());
    out.extend_from_slice(&(g.num_darts() as u64).to_le_bytes());
    for d in 0..g.num_darts() as u32 {
        let dart = g.dart(d);
        out.extend_from_slice(&dart.src.to_le_bytes());
        out.extend_from_slice(&dart.rev.to_le_bytes());
        out.push(dart.label.map_or(255, |l| l));
    }
    out
}

pub fn decode_graph(bytes: &[u8]) -> Option<trivex::graph::LabeledGraph> {
    if bytes.len() < 16 {
        return None;
    }
    let n = u64::from_le_bytes(bytes[..8].try_into().ok()?) as usize;
    let ndarts = u64::from_le_bytes(bytes[8..16].try_into().ok()?) as usize;
    if ndarts % 2 != 0 || bytes.len() != 16 + ndarts * 9 {
        return None;
    }
    let mut g = trivex::graph::LabeledGraph::new(n);
    let mut i = 16;
    // darts come in add_edge pairs: (d, d+1) with rev pointing at each other
    while i < bytes.len() {
        let src1 = u32::from_le_bytes(bytes[i..i + 4].try_into().ok()?);
        let rev1 = u32::from_le_bytes(bytes[i + 4..i + 8].try_into().ok()?);
        let lab1 = bytes[i + 8];
        let src2 = u32::from_le_bytes(bytes[i + 9..i + 13].try_into().ok()?);
        let rev2 = u32::from_le_bytes(bytes[i + 13..i + 17].try_into().ok()?);
        let lab2 = bytes[i + 17];
        let d1 = (i - 16) as u32 / 9;
        if rev1 != d1 + 1 || rev2 != d1 || src1 as usize >= n || src2 as usize >= n {
            return None;
        }
        let (e1, e2) = g.add_edge(src1, src2, (lab1 != 255).then_some(lab1));
        g.set_dart_label(e1, (lab1 != 255).then_some(lab1));
        g.set_dart_label(e2, (lab2 != 255).then_some(lab2));
        i += 18;
    }
    g.compute_bipartition();
    Some(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = input_hash(&["demo", "1"]);
        cache.store("t", &key, b"payload");
        assert_eq!(cache.load("t", &key).as_deref(), Some(&b"payload"[..]));
        // corrupt the payload: load must fail (and the caller rebuilds)
        let path = dir.path().join(format!("t-{}.bin", short_hex(&key)));
        let mut bytes = std::fs::read(&path).unwrap();
        let mid = bytes.len() - 40;
        bytes[mid] ^= 0xff;
        std::fs::write(&path, bytes).unwrap();
        assert!(cache.load("t", &key).is_none());
        // wrong key
        let other = input_hash(&["demo", "2"]);
        assert!(cache.load("t", &other).is_none());
    }

    #[test]
    fn graph_codec_round_trip() {
        let mut g = trivex::graph::LabeledGraph::new(4);
        let (d1, d2) = g.add_edge(0, 1, Some(3));
        g.set_dart_label(d1, Some(3));
        g.set_dart_label(d2, Some(1));
        g.add_edge(2, 3, None);
        g.add_edge(0, 2, Some(0));
        let enc = encode_graph(&g);
        let back = decode_graph(&enc).unwrap();
        assert_eq!(back.n(), 4);
        assert_eq!(back.edge_list(), g.edge_list());
        assert_eq!(back.dart(0).label, Some(3));
        assert_eq!(back.dart(1).label, Some(1));
        assert_eq!(back.dart(2).label, None);
        assert!(decode_graph(&enc[..10]).is_none());
    }
}
