//! On-disk graph format.
//!
//! Little-endian binary: magic `LCAG`, version `u32`, then `n`, `m`, seed
//! and blueprint hash as `u64`, a flags word (`1` = cluster map present),
//! the `n + 1` CSR offsets (`u64`), `2m` neighbours (`u32`) and, if
//! flagged, one cluster id (`u32`) per vertex.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::Serialize;
use thiserror::Error;

use crate::blueprint::BpCluster;
use crate::graph::CsrGraph;
use crate::instance::InstanceGraph;

const MAGIC: &[u8; 4] = b"LCAG";
const VERSION: u32 = 1;
const HAS_CLUSTERS: u32 = 1;

#[derive(Debug, Error)]
pub enum GraphIoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("not a graph file (bad magic)")]
    BadMagic,
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("corrupt graph file: {0}")]
    Corrupt(String),
}

pub fn write_instance<W: Write>(inst: &InstanceGraph, w: W) -> Result<(), GraphIoError> {
    let mut w = BufWriter::new(w);
    let (offsets, neighbors) = inst.graph().raw();
    w.write_all(MAGIC)?;
    w.write_u32::<LittleEndian>(VERSION)?;
    w.write_u64::<LittleEndian>(inst.graph().n() as u64)?;
    w.write_u64::<LittleEndian>(inst.graph().m() as u64)?;
    w.write_u64::<LittleEndian>(inst.seed())?;
    w.write_u64::<LittleEndian>(inst.blueprint_hash())?;
    w.write_u32::<LittleEndian>(HAS_CLUSTERS)?;
    for &o in offsets {
        w.write_u64::<LittleEndian>(o)?;
    }
    for &x in neighbors {
        w.write_u32::<LittleEndian>(x)?;
    }
    for c in inst.hidden_map() {
        w.write_u32::<LittleEndian>(c.0)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_instance<R: Read>(r: R) -> Result<InstanceGraph, GraphIoError> {
    let mut r = BufReader::new(r);
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(GraphIoError::BadMagic);
    }
    let version = r.read_u32::<LittleEndian>()?;
    if version != VERSION {
        return Err(GraphIoError::Version(version));
    }
    let n = r.read_u64::<LittleEndian>()? as usize;
    let m = r.read_u64::<LittleEndian>()? as usize;
    let seed = r.read_u64::<LittleEndian>()?;
    let hash = r.read_u64::<LittleEndian>()?;
    let flags = r.read_u32::<LittleEndian>()?;
    let mut offsets = vec![0u64; n + 1];
    r.read_u64_into::<LittleEndian>(&mut offsets)?;
    if offsets[0] != 0 || offsets[n] != 2 * m as u64 || offsets.windows(2).any(|w| w[0] > w[1]) {
        return Err(GraphIoError::Corrupt("offsets".into()));
    }
    let mut neighbors = vec![0u32; 2 * m];
    r.read_u32_into::<LittleEndian>(&mut neighbors)?;
    if neighbors.iter().any(|&x| x as usize >= n) {
        return Err(GraphIoError::Corrupt("neighbour out of range".into()));
    }
    let hidden = if flags & HAS_CLUSTERS != 0 {
        let mut raw = vec![0u32; n];
        r.read_u32_into::<LittleEndian>(&mut raw)?;
        raw.into_iter().map(BpCluster).collect()
    } else {
        vec![BpCluster(0); n]
    };
    Ok(InstanceGraph::from_parts(CsrGraph::from_raw(offsets, neighbors), hidden, seed, hash))
}

pub fn save_instance(inst: &InstanceGraph, path: &Path) -> Result<(), GraphIoError> {
    write_instance(inst, File::create(path)?)
}

pub fn load_instance(path: &Path) -> Result<InstanceGraph, GraphIoError> {
    read_instance(File::open(path)?)
}

#[derive(Serialize)]
struct EdgeListJson<'a> {
    n: usize,
    seed: u64,
    blueprint_hash: String,
    edges: Vec<(u32, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    clusters: Option<&'a [BpCluster]>,
}

/// JSON edge list for small graphs; the cluster map is included only on
/// request.
pub fn edge_list_json(inst: &InstanceGraph, with_clusters: bool) -> String {
    let doc = EdgeListJson {
        n: inst.graph().n(),
        seed: inst.seed(),
        blueprint_hash: format!("{:016x}", inst.blueprint_hash()),
        edges: inst.graph().edges().collect(),
        clusters: with_clusters.then(|| inst.hidden_map()),
    };
    serde_json::to_string(&doc).expect("edge list serialises")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartite::SamplerConfig;
    use crate::blueprint::{parse_rational, Blueprint, Params, Regime};

    #[test]
    fn binary_round_trip() {
        let p = Params::derive(parse_rational("0.9").unwrap(), 1, 3, 27, Regime::Desk).unwrap();
        let bp = Blueprint::build(p, true).unwrap();
        let inst = InstanceGraph::sample(&bp, 4, &SamplerConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_instance(&inst, &mut buf).unwrap();
        let back = read_instance(buf.as_slice()).unwrap();
        assert_eq!(back, inst);
        buf[0] = b'X';
        assert!(matches!(read_instance(buf.as_slice()), Err(GraphIoError::BadMagic)));
        assert!(edge_list_json(&inst, false).contains("\"edges\""));
    }
}
