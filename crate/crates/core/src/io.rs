//! Text formats: edge lists, partition and cover TSVs, hierarchy directories.
//!
//! Edge lists hold one `u v [w]` edge per line. `#` starts a comment and
//! header lines may carry `%directed`, `%signed` and `%types <path>`
//! directives. Node ids that are all non-negative integers are used as
//! given; otherwise names are numbered in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::partition::{Cover, Partition};
use crate::pipelines::Hierarchy;

/// Node names and their dense indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdMap {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl IdMap {
    /// Names `0..n`.
    pub fn numeric(n: usize) -> Self {
        let mut map = IdMap::default();
        for i in 0..n {
            map.insert(&i.to_string());
        }
        map
    }

    fn insert(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    fn resolve(&self, name: &str) -> Result<usize> {
        self.get(name)
            .ok_or_else(|| Error::UnknownNode(name.to_string()))
    }

    /// `name<TAB>index` lines.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (i, name) in self.names.iter().enumerate() {
            writeln!(out, "{name}\t{i}").unwrap();
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct EdgeList {
    pub graph: Graph,
    pub ids: IdMap,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Reads an edge list; a `%types` path is resolved against the file's directory.
pub fn read_edge_list(path: &Path) -> Result<EdgeList> {
    let text = fs::read_to_string(path)?;
    parse_edge_list(&text, path.parent())
}

/// Parses edge-list text. `base` anchors relative `%types` paths.
pub fn parse_edge_list(text: &str, base: Option<&Path>) -> Result<EdgeList> {
    let mut directed = false;
    let mut signed = false;
    let mut types_path: Option<(usize, PathBuf)> = None;
    let mut raw: Vec<(usize, &str, &str, f64)> = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let lineno = k + 1;
        let content = line.split('#').next().unwrap().trim();
        if content.is_empty() {
            continue;
        }
        if let Some(directive) = content.strip_prefix('%') {
            if !raw.is_empty() {
                return Err(parse_err(lineno, "directives must precede all edges"));
            }
            let mut parts = directive.split_whitespace();
            let (flag, arg) = (parts.next().unwrap_or(""), parts.next());
            let seen = match (flag, arg) {
                ("directed", None) => std::mem::replace(&mut directed, true),
                ("signed", None) => std::mem::replace(&mut signed, true),
                ("types", Some(p)) => {
                    let path = base.map_or_else(|| PathBuf::from(p), |b| b.join(p));
                    types_path.replace((lineno, path)).is_some()
                }
                _ => {
                    return Err(parse_err(
                        lineno,
                        format!("unknown directive '%{directive}'"),
                    ))
                }
            };
            if seen || parts.next().is_some() {
                return Err(parse_err(
                    lineno,
                    format!("repeated or malformed directive '%{directive}'"),
                ));
            }
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let w = match tokens.len() {
            2 => 1.0,
            3 => tokens[2]
                .parse::<f64>()
                .map_err(|_| parse_err(lineno, format!("bad weight '{}'", tokens[2])))?,
            _ => return Err(parse_err(lineno, "expected 'u v [w]'")),
        };
        if !w.is_finite() {
            return Err(parse_err(
                lineno,
                format!("non-finite weight '{}'", tokens[2]),
            ));
        }
        if w < 0.0 && !signed {
            return Err(parse_err(lineno, "negative weight without %signed"));
        }
        raw.push((lineno, tokens[0], tokens[1], w));
    }

    let numeric: Option<Vec<(usize, usize)>> = raw
        .iter()
        .map(|&(_, u, v, _)| Some((u.parse().ok()?, v.parse().ok()?)))
        .collect();
    let (ids, edges): (IdMap, Vec<(usize, usize, f64)>) = match numeric {
        Some(pairs) => {
            let n = pairs.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
            let edges = pairs
                .iter()
                .zip(&raw)
                .map(|(&(u, v), e)| (u, v, e.3))
                .collect();
            (IdMap::numeric(n), edges)
        }
        None => {
            let mut ids = IdMap::default();
            let edges = raw
                .iter()
                .map(|&(_, u, v, w)| (ids.insert(u), ids.insert(v), w))
                .collect();
            (ids, edges)
        }
    };
    let mut builder = GraphBuilder::new()
        .nodes(ids.len())
        .directed(directed)
        .signed(signed);
    if let Some((lineno, path)) = types_path {
        let text = fs::read_to_string(&path).map_err(|e| {
            parse_err(
                lineno,
                format!("cannot read types file {}: {e}", path.display()),
            )
        })?;
        builder = builder.node_types(parse_types(&text, &ids)?);
    }
    let graph = builder.build(&edges)?;
    Ok(EdgeList { graph, ids })
}

/// `node<TAB>type` lines covering every node.
pub fn parse_types(text: &str, ids: &IdMap) -> Result<Vec<usize>> {
    let mut types = vec![None; ids.len()];
    for (lineno, node, value) in records(text)? {
        let i = ids.resolve(node)?;
        let t = value
            .parse::<usize>()
            .map_err(|_| parse_err(lineno, format!("bad node type '{value}'")))?;
        if types[i].replace(t).is_some() {
            return Err(parse_err(lineno, format!("node '{node}' listed twice")));
        }
    }
    types
        .into_iter()
        .enumerate()
        .map(|(i, t)| {
            t.ok_or_else(|| Error::MissingNode {
                node: ids.name(i).to_string(),
                what: "type",
            })
        })
        .collect()
}

/// Non-comment `key<TAB>value` records with their line numbers.
fn records(text: &str) -> Result<Vec<(usize, &str, &str)>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('\t')
            .ok_or_else(|| parse_err(k + 1, "expected two tab-separated fields"))?;
        out.push((k + 1, key.trim(), value.trim()));
    }
    Ok(out)
}

/// Decimal with at most 12 significant digits; integers print without a point.
pub fn format_weight(w: f64) -> String {
    if w.fract() == 0.0 && w.abs() < 1e15 {
        return format!("{}", w as i64);
    }
    let rounded: f64 = format!("{w:.11e}").parse().unwrap();
    if rounded != 0.0 && !(1e-5..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

/// Edge list text; unit weights are left implicit.
pub fn write_edge_list(g: &Graph, ids: &IdMap) -> String {
    let mut out = String::new();
    if g.is_directed() {
        out.push_str("%directed\n");
    }
    if g.is_signed() {
        out.push_str("%signed\n");
    }
    for (u, v, w) in g.edges() {
        let (a, b) = (ids.name(u), ids.name(v));
        if w == 1.0 {
            writeln!(out, "{a} {b}").unwrap();
        } else {
            writeln!(out, "{a} {b} {}", format_weight(w)).unwrap();
        }
    }
    out
}

/// `node<TAB>label` lines in node order.
pub fn write_partition(p: &Partition, ids: &IdMap) -> String {
    let mut out = String::new();
    for (i, &l) in p.labels().iter().enumerate() {
        writeln!(out, "{}\t{l}", ids.name(i)).unwrap();
    }
    out
}

/// Parses a partition over the nodes of `ids`; every node must appear once.
pub fn parse_partition(text: &str, ids: &IdMap) -> Result<Partition> {
    let mut labels: Vec<Option<String>> = vec![None; ids.len()];
    for (lineno, node, label) in records(text)? {
        let i = ids.resolve(node)?;
        if labels[i].replace(label.to_string()).is_some() {
            return Err(parse_err(lineno, format!("node '{node}' listed twice")));
        }
    }
    let mut dense: HashMap<String, usize> = HashMap::new();
    let mut out = Vec::with_capacity(labels.len());
    for (i, l) in labels.into_iter().enumerate() {
        let l = l.ok_or_else(|| Error::MissingNode {
            node: ids.name(i).to_string(),
            what: "label",
        })?;
        let next = dense.len();
        out.push(*dense.entry(l).or_insert(next));
    }
    Ok(Partition::from_labels(&out))
}

/// Node names of a partition file in file order, for files read without a graph.
pub fn partition_nodes(text: &str) -> Result<IdMap> {
    let mut ids = IdMap::default();
    for (lineno, node, _) in records(text)? {
        if ids.get(node).is_some() {
            return Err(parse_err(lineno, format!("node '{node}' listed twice")));
        }
        ids.insert(node);
    }
    Ok(ids)
}

/// `node<TAB>label:weight[,label:weight...]` lines in node order.
pub fn write_cover(c: &Cover, ids: &IdMap) -> String {
    let mut out = String::new();
    for i in 0..c.len() {
        let entries: Vec<String> = c
            .node(i)
            .iter()
            .map(|&(l, w)| format!("{l}:{}", format_weight(w)))
            .collect();
        writeln!(out, "{}\t{}", ids.name(i), entries.join(",")).unwrap();
    }
    out
}

pub fn parse_cover(text: &str, ids: &IdMap) -> Result<Cover> {
    let mut affs: Vec<Option<Vec<(usize, f64)>>> = vec![None; ids.len()];
    for (lineno, node, value) in records(text)? {
        let i = ids.resolve(node)?;
        let entries = value
            .split(',')
            .map(|entry| {
                let (l, w) = entry.split_once(':')?;
                Some((l.trim().parse().ok()?, w.trim().parse().ok()?))
            })
            .collect::<Option<Vec<(usize, f64)>>>()
            .ok_or_else(|| parse_err(lineno, format!("bad cover entry '{value}'")))?;
        if affs[i].replace(entries).is_some() {
            return Err(parse_err(lineno, format!("node '{node}' listed twice")));
        }
    }
    let affs = affs
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            a.ok_or_else(|| Error::MissingNode {
                node: ids.name(i).to_string(),
                what: "affiliation",
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Cover::new(affs))
}

pub const HIERARCHY_INDEX: &str = "index.tsv";

/// Writes `level_<t>.tsv` (lifted to the original nodes) for every level
/// and an index of `level<TAB>file<TAB>groups` lines.
pub fn write_hierarchy(dir: &Path, h: &Hierarchy, ids: &IdMap) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut index = String::new();
    for (t, p) in h.lifted_levels().iter().enumerate() {
        let file = format!("level_{t}.tsv");
        fs::write(dir.join(&file), write_partition(p, ids))?;
        writeln!(index, "{t}\t{file}\t{}", p.num_groups()).unwrap();
    }
    fs::write(dir.join(HIERARCHY_INDEX), index)?;
    Ok(())
}

pub fn read_hierarchy(dir: &Path, ids: &IdMap) -> Result<Hierarchy> {
    let index = fs::read_to_string(dir.join(HIERARCHY_INDEX))?;
    let mut lifted = Vec::new();
    for (lineno, level, rest) in records(&index)? {
        if level.parse::<usize>().ok() != Some(lifted.len()) {
            return Err(parse_err(
                lineno,
                format!("expected level {}", lifted.len()),
            ));
        }
        let file = rest.split('\t').next().unwrap();
        lifted.push(parse_partition(&fs::read_to_string(dir.join(file))?, ids)?);
    }
    Hierarchy::from_lifted(&lifted)
}
