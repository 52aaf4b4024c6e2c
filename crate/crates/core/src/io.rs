//! JSON input documents and machine-readable renderings of results.
//!
//! Every rendering is deterministic: objects serialize with sorted keys or in
//! declaration order, and trees are walked kernel-first.

use std::collections::HashSet;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::decompose::{Branch, CaseTag, DecompositionTree, Leaf, LeafKind, NodeGroup};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::rorg::Rorg;
use crate::vcd::{leaf_vcd, tree_vcd, FrLeafData};
use crate::witness::{witness_for_leaf, WitnessReport};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<Vec<String>>,
    #[serde(default)]
    pub preserved: Vec<Vec<String>>,
    #[serde(default)]
    pub fixed: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Violation {
    MalformedJson(String),
    MalformedEdge(Vec<String>),
    DuplicateVertex(String),
    UnknownVertex(String),
    SelfLoop(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MalformedJson(m) => write!(f, "malformed JSON: {m}"),
            Violation::MalformedEdge(e) => write!(f, "edge {e:?} does not have exactly two endpoints"),
            Violation::DuplicateVertex(v) => write!(f, "duplicate vertex `{v}`"),
            Violation::UnknownVertex(v) => write!(f, "unknown vertex `{v}`"),
            Violation::SelfLoop(v) => write!(f, "self-loop on vertex `{v}`"),
        }
    }
}

/// Every problem found in an input document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for InputError {}

pub fn parse_input(bytes: &[u8]) -> std::result::Result<InputDocument, InputError> {
    let doc: InputDocument = serde_json::from_slice(bytes).map_err(|e| InputError {
        violations: vec![Violation::MalformedJson(e.to_string())],
    })?;
    let violations = doc.violations();
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(InputError { violations })
    }
}

impl InputDocument {
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut declared = HashSet::new();
        for v in &self.vertices {
            if !declared.insert(v.as_str()) {
                out.push(Violation::DuplicateVertex(v.clone()));
            }
        }
        let mut reported = HashSet::new();
        let mut check = |name: &String, out: &mut Vec<Violation>| {
            if !declared.contains(name.as_str()) && reported.insert(name.clone()) {
                out.push(Violation::UnknownVertex(name.clone()));
            }
        };
        for e in &self.edges {
            if e.len() != 2 {
                out.push(Violation::MalformedEdge(e.clone()));
                continue;
            }
            check(&e[0], &mut out);
            check(&e[1], &mut out);
            if e[0] == e[1] {
                out.push(Violation::SelfLoop(e[0].clone()));
            }
        }
        for set in self.preserved.iter().chain(&self.fixed) {
            for v in set {
                check(v, &mut out);
            }
        }
        out
    }

    /// Builds the group described by a valid document.
    pub fn to_rorg(&self, vertex_cap: usize) -> Result<Rorg> {
        if self.vertices.len() > vertex_cap {
            return Err(Error::TooManyVertices {
                count: self.vertices.len(),
                cap: vertex_cap,
            });
        }
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|e| match e.as_slice() {
                [a, b] => Ok((a.as_str(), b.as_str())),
                _ => Err(Error::Precondition(format!("malformed edge {e:?}"))),
            })
            .collect::<Result<_>>()?;
        let names: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let graph = Graph::new(&names, &edges)?;
        let sets =
            |colls: &[Vec<String>]| -> Result<Vec<VertexSet>> { colls.iter().map(|c| graph.vertex_set(c)).collect() };
        let preserved = sets(&self.preserved)?;
        let fixed = sets(&self.fixed)?;
        Rorg::new(Arc::new(graph), preserved, fixed)
    }

    pub fn from_rorg(rorg: &Rorg) -> Self {
        let g = rorg.graph();
        InputDocument {
            vertices: g.names().to_vec(),
            edges: g
                .edges()
                .map(|(u, v)| vec![g.name(u).to_owned(), g.name(v).to_owned()])
                .collect(),
            preserved: rorg.describe_collection(rorg.preserved()),
            fixed: rorg.describe_collection(rorg.fixed()),
        }
    }
}

fn names(g: &Graph, s: VertexSet) -> Vec<String> {
    g.set_names(s)
}

fn path_string(path: &[Branch]) -> String {
    path.iter()
        .map(|b| match b {
            Branch::Kernel => 'K',
            Branch::Image => 'I',
        })
        .collect()
}

/// Short human label such as `FR(k=1,m=1)` or `GL(2)`.
pub fn leaf_label(leaf: &Leaf) -> String {
    match &leaf.kind {
        LeafKind::FreeAbelian { rank } => format!("Z^{rank}"),
        LeafKind::GeneralLinear { n } => format!("GL({n})"),
        LeafKind::FouxeRabinovitch { factors, free } => format!("FR(k={},m={})", factors.len(), free.len()),
        LeafKind::Trivial => "1".to_owned(),
    }
}

pub fn leaf_parameters(leaf: &Leaf) -> Value {
    let g = &leaf.graph;
    match &leaf.kind {
        LeafKind::FreeAbelian { rank } => json!({ "rank": rank }),
        LeafKind::GeneralLinear { n } => json!({ "n": n }),
        LeafKind::FouxeRabinovitch { factors, free } => {
            let data = FrLeafData::new(Arc::clone(g), factors, *free);
            json!({
                "k": data.k(),
                "m": data.m(),
                "factors": factors.iter().map(|&f| names(g, f)).collect::<Vec<_>>(),
                "free": names(g, *free),
                "d": data.factors.iter().map(|f| f.d).collect::<Vec<_>>(),
                "z": data.factors.iter().map(|f| f.z).collect::<Vec<_>>(),
            })
        }
        LeafKind::Trivial => json!({}),
    }
}

pub fn leaf_record(leaf: &Leaf) -> Value {
    json!({
        "kind": leaf.kind.name(),
        "parameters": leaf_parameters(leaf),
        "vcd": leaf_vcd(leaf),
        "case": leaf.source.label(),
        "path": path_string(&leaf.path),
    })
}

fn node_fields(node: &NodeGroup, tag: &CaseTag) -> serde_json::Map<String, Value> {
    let r = &node.rorg;
    let g = r.graph();
    let mut m = serde_json::Map::new();
    m.insert("case".into(), json!(tag.label()));
    if let CaseTag::Case1(delta) = tag {
        m.insert("delta".into(), json!(names(g, *delta)));
    }
    m.insert("path".into(), json!(path_string(&node.path)));
    m.insert("vertices".into(), json!(g.names()));
    m.insert("preserved".into(), json!(r.describe_collection(r.preserved())));
    m.insert("fixed".into(), json!(r.describe_collection(r.fixed())));
    m.insert("measure".into(), json!([node.measure.0, node.measure.1]));
    m.insert("saturation_rounds".into(), json!(node.saturation_rounds));
    m
}

pub fn tree_record(tree: &DecompositionTree) -> Value {
    match tree {
        DecompositionTree::Leaf(l) => json!({ "leaf": leaf_record(l) }),
        DecompositionTree::Terminal { node, tag, leaf } => {
            let mut m = node_fields(node, tag);
            m.insert("leaf".into(), leaf_record(leaf));
            Value::Object(m)
        }
        DecompositionTree::Split {
            node,
            tag,
            kernel,
            image,
        } => {
            let mut m = node_fields(node, tag);
            m.insert("kernel".into(), tree_record(kernel));
            m.insert("image".into(), tree_record(image));
            Value::Object(m)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeafSummary {
    pub kind: &'static str,
    pub parameters: Value,
    pub vcd: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub choice_seed: u64,
    pub internal_nodes: usize,
    /// Saturation rounds per node, preorder.
    pub saturation_rounds: Vec<usize>,
    /// `(parent, child)` complexity measures along each node-to-node edge.
    pub measure_trace: Vec<[[usize; 2]; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResultDocument {
    pub vcd: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut_vcd: Option<usize>,
    pub leaves: Vec<LeafSummary>,
    pub tree: Value,
    pub diagnostics: Diagnostics,
}

impl ResultDocument {
    pub fn new(tree: &DecompositionTree, aut_vcd: Option<usize>, choice_seed: u64) -> Self {
        ResultDocument {
            vcd: tree_vcd(tree),
            aut_vcd,
            leaves: tree
                .leaves()
                .into_iter()
                .map(|l| LeafSummary {
                    kind: l.kind.name(),
                    parameters: leaf_parameters(l),
                    vcd: leaf_vcd(l),
                })
                .collect(),
            tree: tree_record(tree),
            diagnostics: Diagnostics {
                choice_seed,
                internal_nodes: tree.internal_count(),
                saturation_rounds: tree.nodes().iter().map(|n| n.saturation_rounds).collect(),
                measure_trace: tree
                    .measure_edges()
                    .into_iter()
                    .map(|(p, c)| [[p.0, p.1], [c.0, c.1]])
                    .collect(),
            },
        }
    }
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn brace_names(g: &Graph, s: VertexSet) -> String {
    let escaped: Vec<String> = names(g, s).iter().map(|n| dot_escape(n)).collect();
    format!("{{{}}}", escaped.join(","))
}

/// Graphviz rendering. Splitting nodes are ellipses labeled with the case and
/// chosen subgroup; leaves are boxes labeled with kind and vcd.
pub fn tree_dot(tree: &DecompositionTree) -> String {
    let mut out = String::from("digraph decomposition {\n  node [fontname=\"monospace\"];\n");
    let mut next = 0;
    dot_node(tree, &mut next, &mut out);
    out.push_str("}\n");
    out
}

fn dot_leaf_label(leaf: &Leaf) -> String {
    format!("{}\\nvcd {}", leaf_label(leaf), leaf_vcd(leaf))
}

fn dot_node(tree: &DecompositionTree, next: &mut usize, out: &mut String) -> usize {
    let id = *next;
    *next += 1;
    match tree {
        DecompositionTree::Leaf(l) => {
            let _ = writeln!(out, "  n{id} [shape=box, label=\"{}\"];", dot_leaf_label(l));
        }
        DecompositionTree::Terminal { tag, leaf, .. } => {
            let label = format!("{}\\ncase {}", dot_leaf_label(leaf), tag.label());
            let _ = writeln!(out, "  n{id} [shape=box, label=\"{}\"];", label);
        }
        DecompositionTree::Split {
            node,
            tag,
            kernel,
            image,
        } => {
            let g = node.graph();
            let mut label = format!("case {}", tag.label());
            if let CaseTag::Case1(delta) = tag {
                let _ = write!(label, "\\nDelta = {}", brace_names(g, *delta));
            }
            let _ = writeln!(out, "  n{id} [shape=ellipse, label=\"{}\"];", label);
            let k = dot_node(kernel, next, out);
            let _ = writeln!(out, "  n{id} -> n{k} [label=\"kernel\"];");
            let i = dot_node(image, next, out);
            let _ = writeln!(out, "  n{id} -> n{i} [label=\"image\"];");
        }
    }
    id
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessEntry {
    pub path: String,
    pub leaf: String,
    pub fr_vcd: usize,
    /// Absent when the leaf group is finite.
    pub generators: Option<Vec<String>>,
    pub aut_rank: Option<usize>,
    pub out_rank: Option<usize>,
    pub verification: Option<WitnessReport>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessDocument {
    pub leaves: Vec<WitnessEntry>,
    pub all_passed: bool,
}

pub fn witness_document(tree: &DecompositionTree) -> Result<WitnessDocument> {
    let mut leaves = Vec::new();
    for leaf in tree.leaves() {
        if !matches!(leaf.kind, LeafKind::FouxeRabinovitch { .. }) {
            continue;
        }
        let vcd = leaf_vcd(leaf);
        let entry = match witness_for_leaf(leaf)? {
            Some(w) => {
                let report = w.verify()?;
                WitnessEntry {
                    path: path_string(&leaf.path),
                    leaf: leaf_label(leaf),
                    fr_vcd: vcd,
                    generators: Some(w.describe()),
                    aut_rank: Some(w.aut_rank),
                    out_rank: Some(w.out_rank),
                    passed: report.passed() && w.out_rank == vcd,
                    verification: Some(report),
                }
            }
            None => WitnessEntry {
                path: path_string(&leaf.path),
                leaf: leaf_label(leaf),
                fr_vcd: vcd,
                generators: None,
                aut_rank: None,
                out_rank: None,
                verification: None,
                passed: vcd == 0,
            },
        };
        leaves.push(entry);
    }
    let all_passed = leaves.iter().all(|e| e.passed);
    Ok(WitnessDocument { leaves, all_passed })
}
