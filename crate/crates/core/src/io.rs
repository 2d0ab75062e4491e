//! Instance, solution and id-mapping file formats.
//!
//! METIS files use 1-based vertex ids; in memory vertex `i` of the file is
//! `VertexId(i - 1)`. Solution files list 1-based ids in ascending order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::FormatError;
use crate::graph::{VertexId, VertexSet, Weight, WeightedGraph};
use crate::scheduler::{KernelSize, Stats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InstanceFormat {
    #[default]
    MetisWeighted,
    EdgeList,
}

impl std::str::FromStr for InstanceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "metis" => Ok(InstanceFormat::MetisWeighted),
            "edgelist" | "edge-list" => Ok(InstanceFormat::EdgeList),
            other => Err(format!("unknown format `{other}` (expected metis or edgelist)")),
        }
    }
}

/// A parsed instance: dense graph plus the external label of each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: WeightedGraph,
    pub labels: Vec<u64>,
}

impl Instance {
    pub fn parse(text: &str, format: InstanceFormat) -> Result<Self, FormatError> {
        match format {
            InstanceFormat::MetisWeighted => {
                let graph = parse_metis(text)?;
                let labels = (1..=graph.id_bound() as u64).collect();
                Ok(Instance { graph, labels })
            }
            InstanceFormat::EdgeList => parse_edge_list(text),
        }
    }

    pub fn write(&self, format: InstanceFormat) -> String {
        match format {
            InstanceFormat::MetisWeighted => write_metis(&self.graph),
            InstanceFormat::EdgeList => write_edge_list(&self.graph, &self.labels),
        }
    }
}

fn parse_weight(tok: &str, line: usize) -> Result<Weight, FormatError> {
    tok.parse::<Weight>().map_err(|_| {
        if tok.parse::<f64>().is_ok() {
            FormatError::at(
                line,
                format!("weight `{tok}` is not a non-negative integer; scale fractional weights to integers first"),
            )
        } else {
            FormatError::at(line, format!("invalid weight `{tok}`"))
        }
    })
}

fn parse_count(tok: &str, line: usize, what: &str) -> Result<usize, FormatError> {
    tok.parse().map_err(|_| FormatError::at(line, format!("invalid {what} `{tok}`")))
}

/// Parses a METIS graph with vertex weights (`fmt` 10). A header without
/// `fmt` (or `fmt` 0) gives every vertex weight 1.
pub fn parse_metis(text: &str) -> Result<WeightedGraph, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.starts_with('%'));
    let (hline, header) = lines.next().ok_or_else(|| FormatError::at(1, "missing header"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() < 2 || head.len() > 3 {
        return Err(FormatError::at(hline, "header must be `n m [fmt]`"));
    }
    let n = parse_count(head[0], hline, "vertex count")?;
    let m = parse_count(head[1], hline, "edge count")?;
    let weighted = match head.get(2).copied() {
        None | Some("0") | Some("00") | Some("000") => false,
        Some("10") | Some("010") => true,
        Some(f) => return Err(FormatError::at(hline, format!("unsupported fmt `{f}` (expected 10)"))),
    };
    if n > u32::MAX as usize {
        return Err(FormatError::at(hline, "too many vertices"));
    }

    let mut weights = Vec::with_capacity(n);
    let mut lists: Vec<Vec<u32>> = Vec::with_capacity(n);
    let mut line_of = Vec::with_capacity(n);
    for (ln, l) in lines.by_ref() {
        if weights.len() == n {
            if l.trim().is_empty() {
                continue;
            }
            return Err(FormatError::at(ln, format!("more than {n} vertex lines")));
        }
        let mut toks = l.split_whitespace();
        let w = if weighted {
            let t = toks.next().ok_or_else(|| FormatError::at(ln, "missing vertex weight"))?;
            parse_weight(t, ln)?
        } else {
            1
        };
        let me = weights.len() as u32 + 1;
        let mut nb = Vec::new();
        for t in toks {
            let u: u64 = t.parse().map_err(|_| FormatError::at(ln, format!("invalid neighbor `{t}`")))?;
            if u == 0 || u > n as u64 {
                return Err(FormatError::at(ln, format!("neighbor {u} out of range 1..={n}")));
            }
            if u as u32 == me {
                return Err(FormatError::at(ln, format!("self-loop at vertex {me}")));
            }
            nb.push(u as u32 - 1);
        }
        nb.sort_unstable();
        nb.dedup();
        weights.push(w);
        lists.push(nb);
        line_of.push(ln);
    }
    if weights.len() < n {
        return Err(FormatError::at(text.lines().count().max(1), format!("expected {n} vertex lines, found {}", weights.len())));
    }
    let mut edges = Vec::new();
    for (i, nb) in lists.iter().enumerate() {
        for &j in nb {
            if lists[j as usize].binary_search(&(i as u32)).is_err() {
                return Err(FormatError::at(
                    line_of[i],
                    format!("edge {}-{} is not listed by vertex {}", i + 1, j + 1, j + 1),
                ));
            }
            if (i as u32) < j {
                edges.push((i as u32, j));
            }
        }
    }
    if edges.len() != m {
        return Err(FormatError::at(hline, format!("header says {m} edges, found {}", edges.len())));
    }
    Ok(WeightedGraph::from_edges(&weights, &edges)?)
}

/// METIS text of the active part of `g`, renumbered densely by ascending id.
pub fn write_metis(g: &WeightedGraph) -> String {
    write_metis_mapped(g).0
}

/// Like [`write_metis`], also returning the id behind each written vertex.
pub fn write_metis_mapped(g: &WeightedGraph) -> (String, Vec<VertexId>) {
    let (dense, mapping) = g.compacted();
    let mut out = String::new();
    let _ = writeln!(out, "{} {} 10", dense.num_vertices(), dense.num_edges());
    for v in dense.vertices() {
        let _ = write!(out, "{}", dense.weight(v));
        for u in dense.adjacency(v) {
            let _ = write!(out, " {}", u.0 + 1);
        }
        out.push('\n');
    }
    (out, mapping)
}

/// Parses `v <id> <weight>` and `e <id> <id>` lines. Ids are arbitrary
/// non-negative integers and are renumbered in order of declaration. Lines
/// starting with `#` or `%` are comments.
pub fn parse_edge_list(text: &str) -> Result<Instance, FormatError> {
    let mut index: BTreeMap<u64, u32> = BTreeMap::new();
    let mut labels = Vec::new();
    let mut weights = Vec::new();
    let mut edges = Vec::new();
    for (i, l) in text.lines().enumerate() {
        let ln = i + 1;
        let toks: Vec<&str> = l.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            [c, ..] if c.starts_with('#') || c.starts_with('%') => {}
            ["v", id, w] => {
                let id: u64 = id.parse().map_err(|_| FormatError::at(ln, format!("invalid vertex id `{id}`")))?;
                if index.contains_key(&id) {
                    return Err(FormatError::at(ln, format!("vertex {id} declared twice")));
                }
                index.insert(id, labels.len() as u32);
                labels.push(id);
                weights.push(parse_weight(w, ln)?);
            }
            ["e", a, b] => {
                let mut ends = [0u32; 2];
                for (k, t) in [a, b].into_iter().enumerate() {
                    let id: u64 = t.parse().map_err(|_| FormatError::at(ln, format!("invalid vertex id `{t}`")))?;
                    ends[k] = *index
                        .get(&id)
                        .ok_or_else(|| FormatError::at(ln, format!("edge uses undeclared vertex {id}")))?;
                }
                if ends[0] == ends[1] {
                    return Err(FormatError::at(ln, format!("self-loop at vertex {}", labels[ends[0] as usize])));
                }
                edges.push((ends[0], ends[1]));
            }
            _ => return Err(FormatError::at(ln, "expected `v <id> <weight>` or `e <id> <id>`")),
        }
    }
    let graph = WeightedGraph::from_edges(&weights, &edges)?;
    Ok(Instance { graph, labels })
}

/// Edge-list text of a dense graph whose vertex `i` carries `labels[i]`.
pub fn write_edge_list(g: &WeightedGraph, labels: &[u64]) -> String {
    let mut out = String::new();
    for v in g.vertices() {
        let _ = writeln!(out, "v {} {}", labels[v.index()], g.weight(v));
    }
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {} {}", labels[u.index()], labels[v.index()]);
    }
    out
}

/// Solution file: `% weight W` header, then 1-based ids in ascending order.
pub fn write_solution(vertices: &VertexSet, weight: Weight) -> String {
    let mut out = format!("% weight {weight}\n");
    for v in vertices {
        let _ = writeln!(out, "{}", v.0 as u64 + 1);
    }
    out
}

/// Reads a solution file; the weight header is optional.
pub fn parse_solution(text: &str) -> Result<(VertexSet, Option<Weight>), FormatError> {
    let mut set = VertexSet::new();
    let mut weight = None;
    for (i, l) in text.lines().enumerate() {
        let t = l.trim();
        if let Some(rest) = t.strip_prefix('%') {
            if let Some(w) = rest.trim().strip_prefix("weight") {
                weight = Some(parse_weight(w.trim(), i + 1)?);
            }
            continue;
        }
        if t.is_empty() {
            continue;
        }
        let id: u32 = t.parse().map_err(|_| FormatError::at(i + 1, format!("invalid vertex id `{t}`")))?;
        if id == 0 {
            return Err(FormatError::at(i + 1, "vertex ids are 1-based"));
        }
        set.insert(VertexId(id - 1));
    }
    Ok((set, weight))
}

/// Kernel id mapping: line `i` holds the internal id behind kernel vertex `i`.
pub fn write_mapping(mapping: &[VertexId]) -> String {
    let mut out = String::new();
    for v in mapping {
        let _ = writeln!(out, "{}", v.0);
    }
    out
}

pub fn parse_mapping(text: &str) -> Result<Vec<VertexId>, FormatError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim()
                .parse()
                .map(VertexId)
                .map_err(|_| FormatError::at(i + 1, format!("invalid mapping entry `{}`", l.trim())))
        })
        .collect()
}

/// Rebuilds a compacted kernel under the internal ids listed in `mapping`.
pub fn expand_ids(compact: &WeightedGraph, mapping: &[VertexId]) -> Result<WeightedGraph, FormatError> {
    if mapping.len() != compact.num_vertices() {
        return Err(FormatError::at(
            0,
            format!("mapping has {} entries for a kernel of {} vertices", mapping.len(), compact.num_vertices()),
        ));
    }
    let bound = mapping.iter().map(|v| v.index() + 1).max().unwrap_or(0);
    let mut g = WeightedGraph::new();
    for _ in 0..bound {
        g.add_vertex(1)?;
    }
    let mut keep = vec![false; bound];
    for (i, &v) in mapping.iter().enumerate() {
        if std::mem::replace(&mut keep[v.index()], true) {
            return Err(FormatError::at(i + 1, format!("internal id {} mapped twice", v.0)));
        }
        g.set_weight(v, compact.weight(VertexId(i as u32)))?;
    }
    for (i, k) in keep.iter().enumerate() {
        if !k {
            g.remove_vertex(VertexId(i as u32))?;
        }
    }
    for (a, b) in compact.edges() {
        g.add_edge(mapping[a.index()], mapping[b.index()])?;
    }
    Ok(g)
}

/// Stats document written by `kernelize`: the reducer stats plus the input size.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub input: KernelSize,
    #[serde(flatten)]
    pub stats: Stats,
}

/// Writes through a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
