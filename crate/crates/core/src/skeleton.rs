//! Dual graphs of semistable curves.
//!
//! A [`Skeleton`] has one vertex per irreducible component (with its genus),
//! one edge per node or annulus (loops and multi-edges allowed) and one leg
//! per end of the open curve. All cohomological quantities are dimensions
//! over the ℓ-adic coefficient field, read off from the graph.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ultrametric::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub g: u64,
}

/// Wire form: `{"vertices":[{"g":0}], "edges":[[0,1]], "legs":[0], "thickness":[..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonJson {
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub legs: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thickness: Option<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    genera: Vec<u64>,
    edges: Vec<(usize, usize)>,
    legs: Vec<usize>,
    thickness: Option<Vec<Rational>>,
}

impl Skeleton {
    pub fn new(
        genera: Vec<u64>,
        edges: Vec<(usize, usize)>,
        legs: Vec<usize>,
        thickness: Option<Vec<Rational>>,
    ) -> Result<Self> {
        let n = genera.len();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(Error::invalid(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
        }
        if let Some(&l) = legs.iter().find(|&&l| l >= n) {
            return Err(Error::invalid(format!("leg at vertex {l} out of range for {n} vertices")));
        }
        if let Some(t) = &thickness {
            if t.len() != edges.len() {
                return Err(Error::invalid(format!("{} thickness values for {} edges", t.len(), edges.len())));
            }
            if let Some(bad) = t.iter().find(|x| !x.is_positive()) {
                return Err(Error::invalid(format!("edge thickness {bad} must be positive")));
            }
        }
        let edges = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        Ok(Skeleton { genera, edges, legs, thickness })
    }

    /// Skeleton without thickness data.
    pub fn from_parts(genera: &[u64], edges: &[(usize, usize)], legs: &[usize]) -> Result<Self> {
        Skeleton::new(genera.to_vec(), edges.to_vec(), legs.to_vec(), None)
    }

    /// The open disk: one rational component, one end.
    pub fn disk() -> Self {
        Skeleton::from_parts(&[0], &[], &[0]).unwrap()
    }

    /// The open annulus: one rational component, two ends.
    pub fn annulus() -> Self {
        Skeleton::from_parts(&[0], &[], &[0, 0]).unwrap()
    }

    pub fn from_json(json: &SkeletonJson) -> Result<Self> {
        Skeleton::new(
            json.vertices.iter().map(|v| v.g).collect(),
            json.edges.iter().map(|e| (e[0], e[1])).collect(),
            json.legs.clone(),
            json.thickness.clone(),
        )
    }

    pub fn to_json(&self) -> SkeletonJson {
        SkeletonJson {
            vertices: self.genera.iter().map(|&g| VertexJson { g }).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            legs: self.legs.clone(),
            thickness: self.thickness.clone(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn genera(&self) -> &[u64] {
        &self.genera
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn thickness(&self) -> Option<&[Rational]> {
        self.thickness.as_deref()
    }

    /// Component label per vertex; labels are numbered in order of each
    /// component's smallest vertex.
    pub fn component_labels(&self) -> Vec<usize> {
        let n = self.num_vertices();
        let mut uf = UnionFind::new(n);
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let mut label = vec![usize::MAX; n];
        let mut root_label = vec![usize::MAX; n];
        let mut next = 0;
        for (v, l) in label.iter_mut().enumerate() {
            let r = uf.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            *l = root_label[r];
        }
        label
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let labels = self.component_labels();
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut out = vec![Vec::new(); count];
        for (v, &c) in labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    pub fn num_components(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// First Betti number `|E| - |V| + #components`.
    pub fn betti1(&self) -> u64 {
        (self.edges.len() + self.num_components() - self.num_vertices()) as u64
    }

    /// `Σ g_v + b₁`, summed over all components.
    pub fn total_genus(&self) -> u64 {
        self.genera.iter().sum::<u64>() + self.betti1()
    }

    /// Per-component summary, in component order.
    pub fn component_stats(&self) -> Vec<ComponentStats> {
        let labels = self.component_labels();
        let count = labels.iter().max().map_or(0, |m| m + 1);
        let mut stats = vec![ComponentStats::default(); count];
        for (v, &c) in labels.iter().enumerate() {
            stats[c].vertices += 1;
            stats[c].genus_sum += self.genera[v];
        }
        for &(a, _) in &self.edges {
            stats[labels[a]].edges += 1;
        }
        for &l in &self.legs {
            stats[labels[l]].legs += 1;
        }
        stats
    }

    /// Genus of the smooth compactification, per component.
    pub fn component_genera(&self) -> Vec<u64> {
        self.component_stats().iter().map(ComponentStats::genus).collect()
    }

    fn open_components(&self) -> Result<Vec<ComponentStats>> {
        let stats = self.component_stats();
        if let Some(i) = stats.iter().position(|c| c.legs == 0) {
            return Err(Error::domain(format!("not an open analytic curve skeleton: component {i} has no legs")));
        }
        Ok(stats)
    }

    /// `Σ_components (2g + #legs - 1)`.
    pub fn dim_h1c(&self) -> Result<u64> {
        Ok(self.open_components()?.iter().map(|c| 2 * c.genus() + c.legs as u64 - 1).sum())
    }

    /// `#legs - #components`.
    pub fn dim_boundary_module(&self) -> Result<u64> {
        let stats = self.open_components()?;
        Ok((self.legs.len() - stats.len()) as u64)
    }

    pub fn dim_h1(&self) -> Result<u64> {
        Ok(self.dim_h1_csp()? + self.dim_boundary_module()?)
    }

    /// Dimension of the cuspidal part, `Σ_components 2g`.
    pub fn dim_h1_csp(&self) -> Result<u64> {
        Ok(self.open_components()?.iter().map(|c| 2 * c.genus()).sum())
    }

    /// `2 Σ g_v + b₁` for the proper curve; legs are ignored.
    pub fn dim_h1_proper(&self) -> u64 {
        2 * self.genera.iter().sum::<u64>() + self.betti1()
    }

    pub fn is_tree_like(&self) -> bool {
        self.betti1() == 0
    }

    /// Subgraph induced on `vertices` (renumbered in the given order), with
    /// the legs attached to them.
    pub fn induced(&self, vertices: &[usize]) -> Skeleton {
        let mut index = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let keep: Vec<usize> = (0..self.edges.len())
            .filter(|&e| {
                let (a, b) = self.edges[e];
                index[a] != usize::MAX && index[b] != usize::MAX
            })
            .collect();
        Skeleton {
            genera: vertices.iter().map(|&v| self.genera[v]).collect(),
            edges: keep
                .iter()
                .map(|&e| {
                    let (a, b) = self.edges[e];
                    (index[a].min(index[b]), index[a].max(index[b]))
                })
                .collect(),
            legs: self.legs.iter().filter(|&&l| index[l] != usize::MAX).map(|&l| index[l]).collect(),
            thickness: self.thickness.as_ref().map(|t| keep.iter().map(|&e| t[e].clone()).collect()),
        }
    }

    /// Graphviz rendering: vertices labeled by genus, legs as point stubs.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph skeleton {\n");
        for (v, g) in self.genera.iter().enumerate() {
            let _ = writeln!(out, "  v{v} [label=\"g={g}\"];");
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            match &self.thickness {
                Some(t) => {
                    let _ = writeln!(out, "  v{a} -- v{b} [label=\"{}\"];", t[i]);
                }
                None => {
                    let _ = writeln!(out, "  v{a} -- v{b};");
                }
            }
        }
        for (i, &l) in self.legs.iter().enumerate() {
            let _ = writeln!(out, "  leg{i} [shape=point, label=\"\"];");
            let _ = writeln!(out, "  v{l} -- leg{i};");
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for Skeleton {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Skeleton {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = SkeletonJson::deserialize(d)?;
        Skeleton::from_json(&json).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ComponentStats {
    pub vertices: usize,
    pub edges: usize,
    pub legs: usize,
    pub genus_sum: u64,
}

impl ComponentStats {
    pub fn betti1(&self) -> u64 {
        (self.edges + 1 - self.vertices) as u64
    }

    pub fn genus(&self) -> u64 {
        self.genus_sum + self.betti1()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// One critical point `z` of the coarse model and the fine curve `W_z`
/// blown down onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fiber {
    /// Fine vertices making up `W_z`.
    pub vertices: Vec<usize>,
    /// The coarse vertex `z` lies on.
    pub coarse_vertex: usize,
    /// True when `W_z` hangs off a single surviving component and was merged
    /// into it, i.e. `z` is a smooth point of that component.
    pub merged: bool,
    pub genus_sum: u64,
    pub betti1: u64,
}

impl Fiber {
    /// Arithmetic genus of `W_z`.
    pub fn arithmetic_genus(&self) -> u64 {
        self.genus_sum + self.betti1
    }
}

/// A blow-down `Z' -> Z` of skeletons with connected fibers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    pub fine: Skeleton,
    pub coarse: Skeleton,
    pub vertex_map: Vec<usize>,
    pub fibers: Vec<Fiber>,
}

/// Collapse each piece of `fine` to a point.
///
/// A piece all of whose outside edges run to one surviving vertex `u` is
/// merged into `u`: one of those edges is contracted and the rest become
/// loops at `u`. Any other piece becomes a new genus-0 vertex carrying the
/// outside edges and legs of the piece.
pub fn contract(fine: &Skeleton, pieces: &[Vec<usize>]) -> Result<Contraction> {
    let n = fine.num_vertices();
    let mut piece_of = vec![None; n];
    for (i, piece) in pieces.iter().enumerate() {
        if piece.is_empty() {
            return Err(Error::precondition(format!("piece {i} is empty")));
        }
        for &v in piece {
            if v >= n {
                return Err(Error::invalid(format!("piece {i}: vertex {v} out of range")));
            }
            if let Some(j) = piece_of[v] {
                return Err(Error::precondition(format!("vertex {v} appears in pieces {j} and {i}")));
            }
            piece_of[v] = Some(i);
        }
        let sorted: BTreeSet<usize> = piece.iter().copied().collect();
        let members: Vec<usize> = sorted.into_iter().collect();
        if !fine.induced(&members).is_connected() {
            return Err(Error::precondition(format!("piece {i} is not connected")));
        }
    }

    // For each piece: the unique surviving neighbour it hangs off, if any,
    // and the first outside edge (the one that gets contracted).
    let mut hang: Vec<Option<(usize, usize)>> = vec![None; pieces.len()];
    for (i, h) in hang.iter_mut().enumerate() {
        let mut target = None;
        let mut first_edge = None;
        let mut ok = true;
        for (e, &(a, b)) in fine.edges.iter().enumerate() {
            let (inside, outside) = match (piece_of[a] == Some(i), piece_of[b] == Some(i)) {
                (true, false) => (a, b),
                (false, true) => (b, a),
                _ => continue,
            };
            let _ = inside;
            if piece_of[outside].is_some() || target.is_some_and(|t| t != outside) {
                ok = false;
                break;
            }
            target = Some(outside);
            first_edge.get_or_insert(e);
        }
        if ok {
            if let (Some(u), Some(e)) = (target, first_edge) {
                *h = Some((u, e));
            }
        }
    }

    let mut vertex_map = vec![usize::MAX; n];
    let mut coarse_genera = Vec::new();
    let mut piece_vertex = vec![usize::MAX; pieces.len()];
    for v in 0..n {
        match piece_of[v] {
            None => {
                vertex_map[v] = coarse_genera.len();
                coarse_genera.push(fine.genera[v]);
            }
            Some(i) if hang[i].is_none() && piece_vertex[i] == usize::MAX => {
                piece_vertex[i] = coarse_genera.len();
                coarse_genera.push(0);
            }
            Some(_) => {}
        }
    }
    for (i, piece) in pieces.iter().enumerate() {
        if let Some((u, _)) = hang[i] {
            piece_vertex[i] = vertex_map[u];
        }
        for &v in piece {
            vertex_map[v] = piece_vertex[i];
        }
    }

    let contracted: BTreeSet<usize> = hang.iter().flatten().map(|&(_, e)| e).collect();
    let mut coarse_edges = Vec::new();
    let mut coarse_thickness = Vec::new();
    for (e, &(a, b)) in fine.edges.iter().enumerate() {
        let internal = piece_of[a].is_some() && piece_of[a] == piece_of[b];
        if internal || contracted.contains(&e) {
            continue;
        }
        coarse_edges.push((vertex_map[a], vertex_map[b]));
        if let Some(t) = &fine.thickness {
            coarse_thickness.push(t[e].clone());
        }
    }
    let coarse_legs = fine.legs.iter().map(|&l| vertex_map[l]).collect();
    let coarse =
        Skeleton::new(coarse_genera, coarse_edges, coarse_legs, fine.thickness.as_ref().map(|_| coarse_thickness))?;

    let fibers = pieces
        .iter()
        .enumerate()
        .map(|(i, piece)| {
            let mut members = piece.clone();
            members.sort_unstable();
            let w = fine.induced(&members);
            Fiber {
                coarse_vertex: piece_vertex[i],
                merged: hang[i].is_some(),
                genus_sum: w.genera.iter().sum(),
                betti1: w.betti1(),
                vertices: members,
            }
        })
        .collect();

    Ok(Contraction { fine: fine.clone(), coarse, vertex_map, fibers })
}

impl Contraction {
    pub fn identity(fine: &Skeleton) -> Self {
        contract(fine, &[]).expect("identity contraction is always valid")
    }

    /// Every blown-down curve `W_z` has arithmetic genus zero.
    pub fn is_almost_semistable(&self) -> bool {
        self.fibers.iter().all(|f| f.arithmetic_genus() == 0)
    }

    pub fn is_tree_like(&self) -> bool {
        self.fine.is_tree_like()
    }

    /// Does `H¹(Z) -> H¹(X)` identify `H¹(Z)` with the cuspidal part?
    ///
    /// The map is injective, so this compares dimensions: the proper coarse
    /// curve (collapsed fibers carry no genus) against `2·g` of the fine one.
    pub fn cohomological_test(&self) -> Result<bool> {
        let csp = self.fine.dim_h1_csp()?;
        Ok(self.coarse.dim_h1_proper() == csp)
    }
}

/// Result of stabilizing one connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stabilized {
    Stable(Skeleton),
    Disk,
    Annulus,
}

impl Stabilized {
    /// The outcome as a skeleton; disks and annuli get their one-vertex models.
    pub fn as_skeleton(&self) -> Skeleton {
        match self {
            Stabilized::Stable(s) => s.clone(),
            Stabilized::Disk => Skeleton::disk(),
            Stabilized::Annulus => Skeleton::annulus(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Stabilized::Stable(_) => "Stable",
            Stabilized::Disk => "Disk",
            Stabilized::Annulus => "Annulus",
        }
    }
}

#[derive(Clone)]
struct WorkEdge {
    a: usize,
    b: usize,
    thickness: Option<Rational>,
}

/// Blow down rational components meeting the rest of the curve (nodes and
/// ends together) in at most two points, until none is left.
///
/// A rational vertex whose only neighbour is itself through a loop is kept.
/// Outcomes are reported per connected component, in component order.
pub fn stabilize(s: &Skeleton) -> Result<Vec<Stabilized>> {
    s.open_components()?;
    let n = s.num_vertices();
    let labels = s.component_labels();
    let mut alive = vec![true; n];
    let mut edges: Vec<Option<WorkEdge>> = s
        .edges
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| Some(WorkEdge { a, b, thickness: s.thickness.as_ref().map(|t| t[i].clone()) }))
        .collect();
    let mut legs = s.legs.clone();

    'outer: loop {
        for v in (0..n).filter(|&v| alive[v] && s.genera[v] == 0) {
            let incident: Vec<usize> =
                (0..edges.len()).filter(|&e| edges[e].as_ref().is_some_and(|w| w.a == v || w.b == v)).collect();
            let has_loop = incident.iter().any(|&e| edges[e].as_ref().is_some_and(|w| w.a == w.b));
            let my_legs: Vec<usize> = (0..legs.len()).filter(|&l| legs[l] == v).collect();
            if has_loop || incident.len() + my_legs.len() > 2 || incident.is_empty() {
                continue;
            }
            let other = |e: usize| {
                let w = edges[e].as_ref().unwrap();
                if w.a == v {
                    w.b
                } else {
                    w.a
                }
            };
            match (incident.as_slice(), my_legs.as_slice()) {
                ([e], []) => {
                    edges[*e] = None;
                }
                ([e], [l]) => {
                    legs[*l] = other(*e);
                    edges[*e] = None;
                }
                ([e1, e2], []) => {
                    let (x, y) = (other(*e1), other(*e2));
                    let t = match (&edges[*e1].as_ref().unwrap().thickness, &edges[*e2].as_ref().unwrap().thickness) {
                        (Some(t1), Some(t2)) => Some(t1 + t2),
                        _ => None,
                    };
                    edges[*e1] = Some(WorkEdge { a: x.min(y), b: x.max(y), thickness: t });
                    edges[*e2] = None;
                }
                _ => unreachable!(),
            }
            alive[v] = false;
            continue 'outer;
        }
        break;
    }

    let count = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = Vec::with_capacity(count);
    for c in 0..count {
        let verts: Vec<usize> = (0..n).filter(|&v| alive[v] && labels[v] == c).collect();
        let mut index = vec![usize::MAX; n];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut comp_edges = Vec::new();
        let mut comp_thick = Vec::new();
        for w in edges.iter().flatten().filter(|w| labels[w.a] == c) {
            comp_edges.push((index[w.a], index[w.b]));
            if let Some(t) = &w.thickness {
                comp_thick.push(t.clone());
            }
        }
        let comp_legs: Vec<usize> = legs.iter().filter(|&&l| labels[l] == c).map(|&l| index[l]).collect();
        let genera: Vec<u64> = verts.iter().map(|&v| s.genera[v]).collect();
        let outcome = if verts.len() == 1 && genera[0] == 0 && comp_edges.is_empty() {
            match comp_legs.len() {
                1 => Some(Stabilized::Disk),
                2 => Some(Stabilized::Annulus),
                _ => None,
            }
        } else {
            None
        };
        out.push(match outcome {
            Some(o) => o,
            None => Stabilized::Stable(Skeleton::new(
                genera,
                comp_edges,
                comp_legs,
                s.thickness.as_ref().map(|_| comp_thick),
            )?),
        });
    }
    Ok(out)
}
