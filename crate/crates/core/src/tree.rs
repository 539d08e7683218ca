//! Trees of disks: the containment tree of a closed collection of disks,
//! rooted at a boundary vertex standing for the end of the open unit disk.
//! Such a tree is the combinatorial form of a semistable model of the disk.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::disks::{self, ClosedDisk, DiskJson};
use crate::error::{Error, Result};
use crate::skeleton::Skeleton;
use crate::ultrametric::{Prime, Rational};
use crate::SCHEMA_VERSION;

/// Tail of a tree edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parent {
    /// The boundary vertex `v₀`.
    Root,
    Vertex(usize),
}

impl fmt::Display for Parent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parent::Root => f.write_str("root"),
            Parent::Vertex(i) => write!(f, "{i}"),
        }
    }
}

impl Serialize for Parent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Parent::Root => s.serialize_str("root"),
            Parent::Vertex(i) => s.serialize_u64(*i as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Parent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Index(usize),
            Name(String),
        }
        match Raw::deserialize(d)? {
            Raw::Index(i) => Ok(Parent::Vertex(i)),
            Raw::Name(s) if s == "root" => Ok(Parent::Root),
            Raw::Name(s) => Err(serde::de::Error::custom(format!("unknown parent {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeEdge {
    pub parent: Parent,
    pub child: usize,
    pub thickness: Rational,
}

/// Rooted tree `Γ_S` of a closed collection `S`.
///
/// Vertices are the disks of `S`, sorted by `(radius_val, canonical center)`,
/// so every parent precedes its children. Each vertex has exactly one
/// incoming edge; the thickness of the edge into `v` is
/// `radius_val(v) - radius_val(parent)`, with the root at valuation 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskTree {
    prime: Prime,
    vertices: Vec<ClosedDisk>,
    parents: Vec<Parent>,
}

impl DiskTree {
    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn vertices(&self) -> &[ClosedDisk] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn parent(&self, v: usize) -> Parent {
        self.parents[v]
    }

    pub fn children(&self, p: Parent) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parents[v] == p).collect()
    }

    pub fn thickness(&self, v: usize) -> Rational {
        let base = match self.parents[v] {
            Parent::Root => Rational::zero(),
            Parent::Vertex(w) => self.vertices[w].radius_val().clone(),
        };
        self.vertices[v].radius_val() - &base
    }

    /// Edges in child order (edge `i` ends at vertex `i`).
    pub fn edges(&self) -> Vec<TreeEdge> {
        (0..self.len()).map(|v| TreeEdge { parent: self.parents[v], child: v, thickness: self.thickness(v) }).collect()
    }

    /// Index of the vertex equal (as a set) to `d`.
    pub fn position(&self, d: &ClosedDisk) -> Option<usize> {
        self.vertices.binary_search(d).ok()
    }

    /// Vertex path from the root down to `v`.
    pub fn path_to(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Parent::Vertex(w) = self.parents[cur] {
            path.push(w);
            cur = w;
        }
        path.reverse();
        path
    }

    /// Graphviz rendering with the boundary as a square node labeled `∂`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph disk_tree {\n  root [shape=square, label=\"∂\"];\n");
        for (i, d) in self.vertices.iter().enumerate() {
            let _ = writeln!(out, "  v{i} [label=\"{d}\"];");
        }
        for e in self.edges() {
            let tail = match e.parent {
                Parent::Root => "root".to_string(),
                Parent::Vertex(w) => format!("v{w}"),
            };
            let _ = writeln!(out, "  {tail} -> v{} [label=\"{}\"];", e.child, e.thickness);
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            schema_version: SCHEMA_VERSION,
            prime: self.prime,
            vertices: self.vertices.iter().map(ClosedDisk::to_json).collect(),
            edges: self
                .edges()
                .into_iter()
                .map(|e| TreeEdgeJson { parent: e.parent, child: e.child, thickness: e.thickness })
                .collect(),
        }
    }

    /// Rebuild from the wire form, checking that the recorded edges are the
    /// ones the vertex disks determine.
    pub fn from_json(json: &TreeJson) -> Result<Self> {
        let disks = json.vertices.iter().map(|d| ClosedDisk::from_json(d, json.prime)).collect::<Result<Vec<_>>>()?;
        let tree = build_tree(&disks)?;
        if tree.vertices.iter().map(ClosedDisk::to_json).collect::<Vec<_>>() != json.vertices {
            return Err(Error::data("tree vertices are not canonical and sorted"));
        }
        if tree.to_json().edges != json.edges {
            return Err(Error::data("tree edges do not match the containment tree of the vertices"));
        }
        Ok(tree)
    }
}

impl Serialize for DiskTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdgeJson {
    pub parent: Parent,
    pub child: usize,
    pub thickness: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub schema_version: u32,
    pub prime: Prime,
    pub vertices: Vec<DiskJson>,
    pub edges: Vec<TreeEdgeJson>,
}

/// First pair in `disks` (canonical, sorted, deduplicated) whose enclosing
/// disk is missing, or whose enclosing disk escapes the unit disk.
fn closedness_witness(disks: &[ClosedDisk]) -> Option<(usize, usize, Option<ClosedDisk>)> {
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            match disks[i].join(&disks[j]) {
                Ok(join) if disks.binary_search(&join).is_ok() => {}
                Ok(join) => return Some((i, j, Some(join))),
                Err(_) => return Some((i, j, None)),
            }
        }
    }
    None
}

/// Containment tree of a closed collection.
pub fn build_tree(disks: &[ClosedDisk]) -> Result<DiskTree> {
    let first = disks.first().ok_or_else(|| Error::invalid("tree of an empty collection"))?;
    disks::check_uniform_prime(disks)?;
    let prime = first.prime();
    let vertices = disks::canonical_set(disks);

    if let Some((i, j, join)) = closedness_witness(&vertices) {
        let (a, b) = (&vertices[i], &vertices[j]);
        return Err(match join {
            Some(join) => Error::precondition(format!(
                "collection is not closed: the subset {{{a}, {b}}} has enclosing disk {join}, which is missing"
            )),
            None => Error::precondition(format!(
                "collection is not closed and has no closure inside the open unit disk: \
                 the subset {{{a}, {b}}} is not contained in any disk of positive radius valuation"
            )),
        });
    }

    let mut parents = Vec::with_capacity(vertices.len());
    for (v, disk) in vertices.iter().enumerate() {
        // strict containers precede v in the sorted order
        let containers: Vec<usize> = (0..v).filter(|&w| vertices[w].strictly_contains(disk).unwrap_or(false)).collect();
        for pair in containers.windows(2) {
            let (outer, inner) = (&vertices[pair[0]], &vertices[pair[1]]);
            assert!(outer.contains(inner).unwrap_or(false), "containers of {disk} are not nested: {outer} and {inner}");
        }
        parents.push(containers.last().map_or(Parent::Root, |&w| Parent::Vertex(w)));
    }
    Ok(DiskTree { prime, vertices, parents })
}

/// The smallest semistable model in which every disk of `disks` appears.
pub fn minimal_supporting_model(disks: &[ClosedDisk]) -> Result<DiskTree> {
    build_tree(&disks::closure(disks)?)
}

/// Does every disk of `u` occur as a vertex of `model`?
pub fn supports(model: &DiskTree, u: &[ClosedDisk]) -> bool {
    u.iter().all(|d| model.position(d).is_some())
}

/// Dual graph of the special fiber: one rational component per disk and a
/// single leg for the end of the open disk, attached to the root's child.
pub fn tree_to_skeleton(tree: &DiskTree) -> Skeleton {
    let mut edges = Vec::new();
    let mut thickness = Vec::new();
    let mut legs = Vec::new();
    for e in tree.edges() {
        match e.parent {
            Parent::Root => legs.push(e.child),
            Parent::Vertex(w) => {
                edges.push((w, e.child));
                thickness.push(e.thickness);
            }
        }
    }
    Skeleton::new(vec![0; tree.len()], edges, legs, Some(thickness))
        .expect("tree edges are in range and have positive thickness")
}
