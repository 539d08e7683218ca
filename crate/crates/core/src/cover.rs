//! Étale Galois covers of the open disk, described over a tree of disks.
//!
//! A [`CoverSpec`] records, up to conjugacy, the decomposition and inertia
//! groups of every disk of the tree and of both ends of every annulus
//! between consecutive disks, together with the character data needed to
//! run the almost-semistability criterion. The cover itself is never
//! constructed; everything here is bookkeeping on the supplied data.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::disks::{ClosedDisk, DiskJson};
use crate::error::{Error, Result};
use crate::groups::{
    is_irreducible, is_p_group, is_prime_power, isotypic_dim, trivial_on, Character, CharacterJson, FiniteGroup,
    GroupJson, Subgroup, SubgroupJson,
};
use crate::skeleton::Skeleton;
use crate::tree::{build_tree, DiskTree, Parent};
use crate::ultrametric::{Prime, Rational};
use crate::SCHEMA_VERSION;

/// Vertex counts up to which every subset is searched for residual witnesses.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 12;

/// Decomposition group and its inertia subgroup at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteGroups {
    pub decomposition: Subgroup,
    pub inertia: Subgroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteJson {
    pub decomposition: SubgroupJson,
    pub inertia: SubgroupJson,
}

impl SiteGroups {
    fn from_json(group: &FiniteGroup, json: &SiteJson) -> Result<Self> {
        Ok(SiteGroups { decomposition: json.decomposition.resolve(group)?, inertia: json.inertia.resolve(group)? })
    }

    fn to_json(&self) -> SiteJson {
        SiteJson { decomposition: (&self.decomposition).into(), inertia: (&self.inertia).into() }
    }

    fn conjugated(&self, group: &FiniteGroup, g: usize) -> Self {
        SiteGroups {
            decomposition: group.conjugate_subgroup(g, &self.decomposition),
            inertia: group.conjugate_subgroup(g, &self.inertia),
        }
    }
}

/// The two ends of the annulus between a vertex and its parent: `xi1` on
/// the parent's side (the end of the disk itself for root edges), `xi2` on
/// the child's side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeEnds {
    pub xi1: SiteGroups,
    pub xi2: SiteGroups,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub xi1: SiteJson,
    pub xi2: SiteJson,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexData {
    pub disk: SiteGroups,
    pub good_reduction: bool,
    /// The edge from the parent into this vertex.
    pub edge: EdgeEnds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub disk: DiskJson,
    pub decomposition: SubgroupJson,
    pub inertia: SubgroupJson,
    #[serde(default)]
    pub good_reduction: bool,
    pub edge: EdgeJson,
}

/// A user-supplied claim that `F_τ` is resolved over the union of the given
/// disks. Only the surjectivity half is taken on trust; the residual half is
/// always rechecked.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub tau: String,
    pub vertices: BTreeSet<usize>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionJson {
    pub tau: String,
    pub vertices: Vec<DiskJson>,
    pub claim: String,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverJson {
    #[serde(default = "default_schema")]
    pub schema_version: u32,
    pub prime: Prime,
    pub group: GroupJson,
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub characters: Vec<CharacterJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_character: Option<CharacterJson>,
    #[serde(default)]
    pub assertions: Vec<AssertionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_skeleton: Option<Skeleton>,
}

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

/// Where a group datum is attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Disk(usize),
    Xi1(usize),
    Xi2(usize),
}

#[derive(Clone, Debug)]
pub struct CoverSpec {
    prime: Prime,
    group: FiniteGroup,
    base: DiskTree,
    vertices: Vec<VertexData>,
    characters: Vec<(String, Character)>,
    h1_character: Option<Character>,
    assertions: Vec<Assertion>,
    x_skeleton: Option<Skeleton>,
}

impl CoverSpec {
    pub fn from_json(json: &CoverJson) -> Result<Self> {
        if json.schema_version != SCHEMA_VERSION {
            return Err(Error::data(format!("unsupported schema_version {}", json.schema_version)));
        }
        let prime = json.prime;
        let group = FiniteGroup::from_json(&json.group)?;
        let disks = json.vertices.iter().map(|v| ClosedDisk::from_json(&v.disk, prime)).collect::<Result<Vec<_>>>()?;
        let base = build_tree(&disks)?;
        if base.len() != disks.len() {
            return Err(Error::data("two vertex entries describe the same disk"));
        }
        let mut slots: Vec<Option<VertexData>> = vec![None; base.len()];
        for (v, d) in json.vertices.iter().zip(&disks) {
            let idx = base.position(d).expect("every input disk is a tree vertex");
            slots[idx] = Some(VertexData {
                disk: SiteGroups {
                    decomposition: v.decomposition.resolve(&group)?,
                    inertia: v.inertia.resolve(&group)?,
                },
                good_reduction: v.good_reduction,
                edge: EdgeEnds {
                    xi1: SiteGroups::from_json(&group, &v.edge.xi1)?,
                    xi2: SiteGroups::from_json(&group, &v.edge.xi2)?,
                },
            });
        }
        let vertices = slots.into_iter().map(Option::unwrap).collect();

        let mut characters = Vec::new();
        for (i, c) in json.characters.iter().enumerate() {
            let id = c.id.clone().unwrap_or_else(|| format!("tau{i}"));
            if characters.iter().any(|(other, _)| other == &id) {
                return Err(Error::data(format!("duplicate character id {id:?}")));
            }
            characters.push((id, Character::from_json(&group, c)?));
        }
        let h1_character = json.h1_character.as_ref().map(|c| Character::from_json(&group, c)).transpose()?;

        let mut assertions = Vec::new();
        for a in &json.assertions {
            if a.claim != "resolved" {
                return Err(Error::data(format!("unsupported assertion claim {:?}", a.claim)));
            }
            if !characters.iter().any(|(id, _)| id == &a.tau) {
                return Err(Error::data(format!("assertion names unknown character {:?}", a.tau)));
            }
            if a.vertices.is_empty() {
                return Err(Error::data(format!("assertion for {:?} lists no disks", a.tau)));
            }
            let vertices = a
                .vertices
                .iter()
                .map(|d| {
                    let disk = ClosedDisk::from_json(d, prime)?;
                    base.position(&disk)
                        .ok_or_else(|| Error::data(format!("asserted disk {disk} is not a tree vertex")))
                })
                .collect::<Result<BTreeSet<_>>>()?;
            assertions.push(Assertion { tau: a.tau.clone(), vertices, provenance: a.provenance.clone() });
        }

        Ok(CoverSpec {
            prime,
            group,
            base,
            vertices,
            characters,
            h1_character,
            assertions,
            x_skeleton: json.x_skeleton.clone(),
        })
    }

    /// Canonical wire form: vertices in tree order, subgroups as element lists.
    pub fn to_json(&self) -> CoverJson {
        let g = &self.group;
        CoverJson {
            schema_version: SCHEMA_VERSION,
            prime: self.prime,
            group: g.to_json(),
            vertices: self
                .vertices
                .iter()
                .zip(self.base.vertices())
                .map(|(v, d)| VertexJson {
                    disk: d.to_json(),
                    decomposition: (&v.disk.decomposition).into(),
                    inertia: (&v.disk.inertia).into(),
                    good_reduction: v.good_reduction,
                    edge: EdgeJson { xi1: v.edge.xi1.to_json(), xi2: v.edge.xi2.to_json() },
                })
                .collect(),
            characters: self.characters.iter().map(|(id, c)| c.to_json(g, Some(id.clone()))).collect(),
            h1_character: self.h1_character.as_ref().map(|c| c.to_json(g, None)),
            assertions: self
                .assertions
                .iter()
                .map(|a| AssertionJson {
                    tau: a.tau.clone(),
                    vertices: a.vertices.iter().map(|&v| self.base.vertices()[v].to_json()).collect(),
                    claim: "resolved".into(),
                    provenance: a.provenance.clone(),
                })
                .collect(),
            x_skeleton: self.x_skeleton.clone(),
        }
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn base(&self) -> &DiskTree {
        &self.base
    }

    pub fn vertex(&self, v: usize) -> &VertexData {
        &self.vertices[v]
    }

    pub fn characters(&self) -> &[(String, Character)] {
        &self.characters
    }

    pub fn character(&self, id: &str) -> Option<&Character> {
        self.characters.iter().find(|(name, _)| name == id).map(|(_, c)| c)
    }

    pub fn h1_character(&self) -> Option<&Character> {
        self.h1_character.as_ref()
    }

    pub fn assertions(&self) -> &[Assertion] {
        &self.assertions
    }

    pub fn x_skeleton(&self) -> Option<&Skeleton> {
        self.x_skeleton.as_ref()
    }

    pub fn is_p_group_cover(&self) -> bool {
        is_prime_power(self.group.order(), self.prime)
    }

    pub fn site(&self, site: Site) -> &SiteGroups {
        match site {
            Site::Disk(v) => &self.vertices[v].disk,
            Site::Xi1(v) => &self.vertices[v].edge.xi1,
            Site::Xi2(v) => &self.vertices[v].edge.xi2,
        }
    }

    pub fn sites(&self) -> Vec<Site> {
        (0..self.vertices.len()).flat_map(|v| [Site::Disk(v), Site::Xi1(v), Site::Xi2(v)]).collect()
    }

    /// Replace the groups at every site by their conjugates under
    /// `conj(site)`.
    pub fn conjugated(&self, mut conj: impl FnMut(Site) -> usize) -> CoverSpec {
        let mut out = self.clone();
        for v in 0..self.vertices.len() {
            out.vertices[v].disk = self.vertices[v].disk.conjugated(&self.group, conj(Site::Disk(v)));
            out.vertices[v].edge.xi1 = self.vertices[v].edge.xi1.conjugated(&self.group, conj(Site::Xi1(v)));
            out.vertices[v].edge.xi2 = self.vertices[v].edge.xi2.conjugated(&self.group, conj(Site::Xi2(v)));
        }
        out
    }

    pub fn with_assertion(&self, assertion: Assertion) -> CoverSpec {
        let mut out = self.clone();
        out.assertions.push(assertion);
        out
    }

    /// Inertia on the parent side of the edge into `child`: the inertia of
    /// the parent disk, or of the end of the whole disk for root edges.
    fn upper_inertia(&self, child: usize) -> &Subgroup {
        match self.base.parent(child) {
            Parent::Root => &self.vertices[child].edge.xi1.inertia,
            Parent::Vertex(w) => &self.vertices[w].disk.inertia,
        }
    }

    fn edge_ref(&self, child: usize) -> EdgeRef {
        let parent = self.base.parent(child);
        let tail = match parent {
            Parent::Root => "∂".to_string(),
            Parent::Vertex(w) => self.base.vertices()[w].to_string(),
        };
        EdgeRef { parent, child, label: format!("{tail} -> {}", self.base.vertices()[child]) }
    }

    fn site_label(&self, site: Site) -> String {
        match site {
            Site::Disk(v) => format!("disk {}", self.base.vertices()[v]),
            Site::Xi1(v) => format!("end xi1 of edge {}", self.edge_ref(v).label),
            Site::Xi2(v) => format!("end xi2 of edge {}", self.edge_ref(v).label),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRef {
    pub parent: Parent,
    pub child: usize,
    pub label: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    InertiaNotPGroup,
    InertiaNotNormal,
    /// `G(ξ₂)` and `G(D_{v₂})` are not conjugate.
    EndDecompositionMismatch,
    /// `I(ξ₁)` and `I(D_{v₁})` are not conjugate.
    EndInertiaMismatch,
    /// `G(D_{v₂})` is not conjugate into the inertia above it.
    DecompositionNotInInertia,
    /// For a p-group the end of the disk must have `G = G(ξ) = I(ξ)`.
    RootEndNotWholeGroup,
    /// A connected p-group cover of the disk has exactly one end.
    SeveralEnds,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Consistency of the group data. Empty means clean.
pub fn validate_cover(c: &CoverSpec) -> Vec<Violation> {
    let g = &c.group;
    let mut out = Vec::new();
    let mut push = |kind, location: String, message: String| out.push(Violation { kind, location, message });
    for site in c.sites() {
        let s = c.site(site);
        if !is_p_group(&s.inertia, c.prime) {
            push(
                ViolationKind::InertiaNotPGroup,
                c.site_label(site),
                format!("inertia group of order {} is not a {}-group", s.inertia.order(), c.prime),
            );
        }
        if !g.is_normal_in(&s.inertia, &s.decomposition) {
            push(
                ViolationKind::InertiaNotNormal,
                c.site_label(site),
                "inertia is not a normal subgroup of the decomposition group".into(),
            );
        }
    }
    for v in 0..c.vertices.len() {
        let label = c.edge_ref(v).label;
        let data = &c.vertices[v];
        if !g.are_conjugate(&data.edge.xi2.decomposition, &data.disk.decomposition) {
            push(ViolationKind::EndDecompositionMismatch, label.clone(), "G(xi2) is not conjugate to G(D_v2)".into());
        }
        if let Parent::Vertex(w) = c.base.parent(v) {
            if !g.are_conjugate(&data.edge.xi1.inertia, &c.vertices[w].disk.inertia) {
                push(ViolationKind::EndInertiaMismatch, label.clone(), "I(xi1) is not conjugate to I(D_v1)".into());
            }
        }
        if !g.conjugate_into(&data.disk.decomposition, c.upper_inertia(v)) {
            push(
                ViolationKind::DecompositionNotInInertia,
                label.clone(),
                "G(D_v2) is not conjugate into I(D_v1)".into(),
            );
        }
        if c.is_p_group_cover() && c.base.parent(v) == Parent::Root {
            let xi1 = &data.edge.xi1;
            if xi1.decomposition.order() != g.order() || xi1.inertia.order() != g.order() {
                push(
                    ViolationKind::RootEndNotWholeGroup,
                    label,
                    format!(
                        "the end of the disk must have G = G(xi1) = I(xi1) for a p-group, \
                         got orders {}, {} and {}",
                        g.order(),
                        xi1.decomposition.order(),
                        xi1.inertia.order()
                    ),
                );
            }
        }
    }
    out
}

fn require_clean_p_group(c: &CoverSpec) -> Result<()> {
    if !c.is_p_group_cover() {
        return Err(Error::precondition(format!(
            "the Galois group (order {}) is not a {}-group",
            c.group.order(),
            c.prime
        )));
    }
    let violations = validate_cover(c);
    if let Some(v) = violations.first() {
        return Err(Error::precondition(format!(
            "cover data is inconsistent ({} violations), first: {v}",
            violations.len()
        )));
    }
    Ok(())
}

/// Is the part of the cover over the annulus of the edge into `child` a
/// disjoint union of annuli: `G(D_{v₂})` conjugate to the inertia above it.
pub fn edge_is_annulus(c: &CoverSpec, child: usize) -> Result<bool> {
    require_clean_p_group(c)?;
    if child >= c.vertices.len() {
        return Err(Error::invalid(format!("no edge into vertex {child}")));
    }
    Ok(c.group.are_conjugate(&c.vertices[child].disk.decomposition, c.upper_inertia(child)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidualStatus {
    /// Every disk has good reduction in the cover.
    ResidualByGoodReduction,
    /// `τ` is trivial on every inertia group.
    ResidualByTrivialInertia,
    Unknown,
}

impl ResidualStatus {
    pub fn is_residual(self) -> bool {
        self != ResidualStatus::Unknown
    }
}

/// Sufficient conditions for `F_τ` to be residual over `⋃_{v ∈ V'} D_v`.
/// `Unknown` does not mean "not residual".
pub fn residual_status(c: &CoverSpec, vertices: &BTreeSet<usize>, tau: &Character) -> ResidualStatus {
    if vertices.is_empty() || vertices.iter().any(|&v| v >= c.vertices.len()) {
        return ResidualStatus::Unknown;
    }
    if vertices.iter().all(|&v| c.vertices[v].good_reduction) {
        ResidualStatus::ResidualByGoodReduction
    } else if vertices.iter().all(|&v| trivial_on(&c.group, tau, &c.vertices[v].disk.inertia)) {
        ResidualStatus::ResidualByTrivialInertia
    } else {
        ResidualStatus::Unknown
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ResolvedStatus {
    Resolved { residual: ResidualStatus, assertion: usize },
    ResidualOnly { residual: ResidualStatus },
    Unknown,
}

impl ResolvedStatus {
    pub fn is_resolved(&self) -> bool {
        matches!(self, ResolvedStatus::Resolved { .. })
    }
}

/// Residual, plus an assertion record vouching for surjectivity.
pub fn resolved_status(c: &CoverSpec, vertices: &BTreeSet<usize>, tau_id: &str) -> Result<ResolvedStatus> {
    let tau = c.character(tau_id).ok_or_else(|| Error::config(format!("unknown character {tau_id:?}")))?;
    let residual = residual_status(c, vertices, tau);
    if !residual.is_residual() {
        return Ok(ResolvedStatus::Unknown);
    }
    Ok(match c.assertions.iter().position(|a| a.tau == tau_id && &a.vertices == vertices) {
        Some(assertion) => ResolvedStatus::Resolved { residual, assertion },
        None => ResolvedStatus::ResidualOnly { residual },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssertionRef {
    pub index: usize,
    pub tau: String,
    pub vertices: Vec<usize>,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauReport {
    pub tau: String,
    /// Multiplicity of `τ` in `H¹(X)`, i.e. `dim H¹(Y, F_τ)`.
    pub multiplicity: u64,
    pub status: ResolvedStatus,
    /// The vertex set the status refers to, if any.
    pub vertices: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlmostSemistableVerdict {
    /// Almost semistable with tree-like reduction, proven from the data.
    /// `false` means inconclusive, never "not almost semistable".
    pub almost_semistable_and_tree_like: bool,
    pub blocking: Vec<String>,
    pub per_tau: Vec<TauReport>,
    pub conditional_on: Vec<AssertionRef>,
}

/// Search options for [`almost_semistable_verdict`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest vertex set tried during exhaustive search (`None`: all sizes).
    pub max_subset: Option<usize>,
}

fn subsets_by_size(n: usize, max: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (1..=max.min(n)).flat_map(move |k| {
        let mut sets: Vec<BTreeSet<usize>> = (1u32..(1 << n))
            .filter(|m| m.count_ones() as usize == k)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
            .collect();
        sets.sort();
        sets
    })
}

fn check_character_table(c: &CoverSpec) -> Result<()> {
    if c.characters.is_empty() {
        return Err(Error::config("no irreducible characters supplied"));
    }
    let mut sum = Rational::zero();
    for (id, chi) in &c.characters {
        if !is_irreducible(&c.group, chi)? {
            return Err(Error::config(format!("character {id:?} is not irreducible")));
        }
        sum = sum + &chi.degree() * &chi.degree();
    }
    if sum != Rational::from(c.group.order() as i64) {
        return Err(Error::config(format!(
            "character list is incomplete: squared degrees sum to {sum}, group order is {}",
            c.group.order()
        )));
    }
    Ok(())
}

/// Run the equivariant criterion: every `τ` occurring in `H¹(X)` must be
/// resolved over some union of tree disks.
pub fn almost_semistable_verdict(c: &CoverSpec, bounds: SearchBounds) -> Result<AlmostSemistableVerdict> {
    let h1 = c.h1_character.as_ref().ok_or_else(|| Error::config("the criterion needs h1_character"))?;
    check_character_table(c)?;
    let n = c.vertices.len();
    let max = bounds.max_subset.unwrap_or(n);

    let mut per_tau = Vec::new();
    let mut blocking = Vec::new();
    let mut conditional_on = Vec::new();
    for (id, tau) in &c.characters {
        let multiplicity = isotypic_dim(&c.group, tau, h1)?;
        if multiplicity == 0 {
            continue;
        }
        let asserted = c.assertions.iter().filter(|a| &a.tau == id).map(|a| a.vertices.clone());
        let mut best: Option<(ResolvedStatus, BTreeSet<usize>)> = None;
        for candidate in asserted {
            let status = resolved_status(c, &candidate, id)?;
            if status.is_resolved() {
                best = Some((status, candidate));
                break;
            }
            if best.is_none() && status != ResolvedStatus::Unknown {
                best = Some((status, candidate));
            }
        }
        let resolved = best.as_ref().is_some_and(|(s, _)| s.is_resolved());
        if !resolved && best.is_none() && n <= EXHAUSTIVE_VERTEX_LIMIT {
            best = subsets_by_size(n, max)
                .map(|s| (resolved_status(c, &s, id), s))
                .find_map(|(status, s)| match status {
                    Ok(ResolvedStatus::Unknown) => None,
                    Ok(status) => Some(Ok((status, s))),
                    Err(e) => Some(Err(e)),
                })
                .transpose()?;
        }
        let (status, vertices) = match best {
            Some((status, set)) => (status, Some(set.into_iter().collect::<Vec<_>>())),
            None => (ResolvedStatus::Unknown, None),
        };
        if let ResolvedStatus::Resolved { assertion, .. } = &status {
            let a = &c.assertions[*assertion];
            conditional_on.push(AssertionRef {
                index: *assertion,
                tau: a.tau.clone(),
                vertices: a.vertices.iter().copied().collect(),
                provenance: a.provenance.clone(),
            });
        } else {
            blocking.push(id.clone());
        }
        per_tau.push(TauReport { tau: id.clone(), multiplicity, status, vertices });
    }
    Ok(AlmostSemistableVerdict {
        almost_semistable_and_tree_like: blocking.is_empty(),
        blocking,
        per_tau,
        conditional_on,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemistableVerdict {
    /// `false` means "not shown by this test".
    pub semistable: bool,
    pub failing_edges: Vec<EdgeRef>,
    pub conditional_on: Vec<AssertionRef>,
}

/// Per-edge annulus test over the whole tree, root edges included. Only
/// meaningful once the almost-semistable verdict holds, which `standing`
/// must certify.
pub fn check_semistable(c: &CoverSpec, standing: &AlmostSemistableVerdict) -> Result<SemistableVerdict> {
    if !standing.almost_semistable_and_tree_like {
        return Err(Error::precondition(
            "the per-edge test assumes the cover is already known to be almost semistable",
        ));
    }
    require_clean_p_group(c)?;
    let mut failing_edges = Vec::new();
    for v in 0..c.vertices.len() {
        if !edge_is_annulus(c, v)? {
            failing_edges.push(c.edge_ref(v));
        }
    }
    Ok(SemistableVerdict {
        semistable: failing_edges.is_empty(),
        failing_edges,
        conditional_on: standing.conditional_on.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexCount {
    pub vertex: usize,
    pub disk: String,
    /// Connected components of the preimage of the disk.
    pub components: usize,
    /// Ends of the cover above `xi1` and `xi2` of the edge into the disk.
    pub ends_xi1: usize,
    pub ends_xi2: usize,
}

/// Orbit counts `[G : G(D_v)]` and `[G : G(ξ)]`.
pub fn fiber_counts(c: &CoverSpec) -> Result<Vec<VertexCount>> {
    if let Some(v) = validate_cover(c).first() {
        return Err(Error::precondition(format!("cover data is inconsistent: {v}")));
    }
    let n = c.group.order();
    Ok(c.vertices
        .iter()
        .enumerate()
        .map(|(i, v)| VertexCount {
            vertex: i,
            disk: c.base.vertices()[i].to_string(),
            components: n / v.disk.decomposition.order(),
            ends_xi1: n / v.edge.xi1.decomposition.order(),
            ends_xi2: n / v.edge.xi2.decomposition.order(),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub holds: bool,
    pub violations: Vec<Violation>,
    pub h1: u64,
    pub h1c: u64,
    pub csp: u64,
}

/// For a connected p-group cover of the disk, `X` has a single end, so
/// `H¹(X) = H¹_c(X) = H¹(X)^csp`. Checks the group data and the supplied
/// skeleton of `X` against this.
pub fn pgroup_corollary_check(c: &CoverSpec, x: &Skeleton) -> Result<CorollaryReport> {
    if !c.is_p_group_cover() {
        return Err(Error::precondition(format!(
            "the Galois group (order {}) is not a {}-group",
            c.group.order(),
            c.prime
        )));
    }
    if !x.is_connected() {
        return Err(Error::data("the skeleton of X is not connected"));
    }
    let mut violations = Vec::new();
    for v in c.base.children(Parent::Root) {
        let ends = c.group.order() / c.vertices[v].edge.xi1.decomposition.order();
        if ends != 1 {
            violations.push(Violation {
                kind: ViolationKind::RootEndNotWholeGroup,
                location: c.edge_ref(v).label,
                message: format!("{ends} ends of X above the end of the disk, expected 1"),
            });
        }
    }
    if x.legs().len() != 1 {
        violations.push(Violation {
            kind: ViolationKind::SeveralEnds,
            location: "x_skeleton".into(),
            message: format!(
                "a connected p-group cover of the disk has exactly one end, the skeleton has {}",
                x.legs().len()
            ),
        });
    }
    let (h1, h1c, csp) = (x.dim_h1()?, x.dim_h1c()?, x.dim_h1_csp()?);
    Ok(CorollaryReport { holds: violations.is_empty() && h1 == h1c && h1c == csp, violations, h1, h1c, csp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::fixtures;

    /// `ℤ/4 = {e, g, g², g³}` (indices 0..4) over the tree
    /// `∂ -> D(0,1) -> {D(0,2), D(2,3)}` with p = 2.
    fn z4_cover(child_decomp: &[usize], child_inertia: &[usize]) -> CoverJson {
        let z4 = fixtures::cyclic(4);
        let site = |d: &[usize], i: &[usize]| SiteJson {
            decomposition: SubgroupJson::Elements(d.to_vec()),
            inertia: SubgroupJson::Elements(i.to_vec()),
        };
        let all = [0, 1, 2, 3];
        let vertex = |c: i64, v: i64, d: &[usize], i: &[usize]| VertexJson {
            disk: DiskJson { center: c.into(), v: v.into() },
            decomposition: SubgroupJson::Elements(d.to_vec()),
            inertia: SubgroupJson::Elements(i.to_vec()),
            good_reduction: false,
            edge: EdgeJson { xi1: site(&all, &all), xi2: site(d, d) },
        };
        CoverJson {
            schema_version: 1,
            prime: Prime::new(2).unwrap(),
            group: z4.group.to_json(),
            vertices: vec![
                vertex(0, 1, &all, &all),
                vertex(0, 2, child_decomp, child_inertia),
                vertex(2, 3, &all, &all),
            ],
            characters: z4.characters.iter().map(|(id, c)| c.to_json(&z4.group, Some(id.clone()))).collect(),
            h1_character: Some(Character::zero(&z4.group).to_json(&z4.group, None)),
            assertions: vec![],
            x_skeleton: Some(Skeleton::disk()),
        }
    }

    fn spec(json: &CoverJson) -> CoverSpec {
        CoverSpec::from_json(json).unwrap()
    }

    #[test]
    fn inert_cover_is_clean() {
        let c = spec(&z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]));
        assert!(validate_cover(&c).is_empty());
        for v in 0..3 {
            assert!(edge_is_annulus(&c, v).unwrap());
        }
        let standing = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        assert!(standing.almost_semistable_and_tree_like);
        assert!(check_semistable(&c, &standing).unwrap().semistable);
        let counts = fiber_counts(&c).unwrap();
        assert!(counts.iter().all(|k| k.components == 1 && k.ends_xi1 == 1 && k.ends_xi2 == 1));
    }

    #[test]
    fn strict_inclusion_fails_the_edge() {
        let c = spec(&z4_cover(&[0, 2], &[0, 2]));
        assert!(validate_cover(&c).is_empty());
        let d02 = c.base().position(&ClosedDisk::from_ints(0, 2, 1, 2).unwrap()).unwrap();
        assert!(!edge_is_annulus(&c, d02).unwrap());
        let standing = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        let verdict = check_semistable(&c, &standing).unwrap();
        assert!(!verdict.semistable);
        assert_eq!(verdict.failing_edges.len(), 1);
        assert_eq!(verdict.failing_edges[0].child, d02);
        assert_eq!(verdict.failing_edges[0].label, "D(0, 1) -> D(0, 2)");
    }

    #[test]
    fn equality_passes_the_edge() {
        // I(D(0,1)) = G(D(0,2)) = ⟨g²⟩
        let mut json = z4_cover(&[0, 2], &[0, 2]);
        json.vertices[0].inertia = SubgroupJson::Elements(vec![0, 2]);
        json.vertices[1].edge.xi1.inertia = SubgroupJson::Elements(vec![0, 2]);
        json.vertices[1].edge.xi1.decomposition = SubgroupJson::Elements(vec![0, 1, 2, 3]);
        json.vertices[2].edge.xi1.inertia = SubgroupJson::Elements(vec![0, 2]);
        json.vertices[2].decomposition = SubgroupJson::Elements(vec![0, 2]);
        json.vertices[2].inertia = SubgroupJson::Elements(vec![0, 2]);
        json.vertices[2].edge.xi2 =
            SiteJson { decomposition: SubgroupJson::Elements(vec![0, 2]), inertia: SubgroupJson::Elements(vec![0, 2]) };
        let c = spec(&json);
        assert_eq!(validate_cover(&c), vec![]);
        assert!(edge_is_annulus(&c, 1).unwrap());
        // root edge: G(D(0,1)) = G against I(end) = G
        assert!(edge_is_annulus(&c, 0).unwrap());
    }

    #[test]
    fn root_end_must_be_whole_group() {
        let mut json = z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        json.vertices[0].edge.xi1.inertia = SubgroupJson::Elements(vec![0, 2]);
        let c = spec(&json);
        let kinds: Vec<_> = validate_cover(&c).into_iter().map(|v| v.kind).collect();
        assert!(kinds.contains(&ViolationKind::RootEndNotWholeGroup), "{kinds:?}");
        assert!(edge_is_annulus(&c, 0).is_err());
    }

    #[test]
    fn trivial_group_passes_everything() {
        let mut json = z4_cover(&[0], &[0]);
        json.group = GroupJson { degree: 1, generators: vec![] };
        let trivial = SubgroupJson::Elements(vec![0]);
        for v in &mut json.vertices {
            v.decomposition = trivial.clone();
            v.inertia = trivial.clone();
            for s in [&mut v.edge.xi1, &mut v.edge.xi2] {
                s.decomposition = trivial.clone();
                s.inertia = trivial.clone();
            }
        }
        let g = FiniteGroup::from_json(&json.group).unwrap();
        json.characters = vec![Character::trivial(&g).to_json(&g, Some("triv".into()))];
        json.h1_character = Some(Character::zero(&g).to_json(&g, None));
        let c = spec(&json);
        assert!((0..3).all(|v| edge_is_annulus(&c, v).unwrap()));
        assert!(fiber_counts(&c).unwrap().iter().all(|k| k.components == 1 && k.ends_xi2 == 1));
        let report = pgroup_corollary_check(&c, &Skeleton::disk()).unwrap();
        assert!(report.holds);
        assert_eq!((report.h1, report.h1c, report.csp), (0, 0, 0));
    }

    #[test]
    fn non_p_group_inertia_is_flagged() {
        let s3 = fixtures::s3();
        let g = &s3.group;
        let c3: Vec<usize> = g.all_subgroups().into_iter().find(|h| h.order() == 3).unwrap().elements().to_vec();
        let full: Vec<usize> = (0..6).collect();
        let site = |d: &[usize], i: &[usize]| SiteJson {
            decomposition: SubgroupJson::Elements(d.to_vec()),
            inertia: SubgroupJson::Elements(i.to_vec()),
        };
        let json = CoverJson {
            schema_version: 1,
            prime: Prime::new(2).unwrap(),
            group: g.to_json(),
            vertices: vec![VertexJson {
                disk: DiskJson { center: 0.into(), v: 1.into() },
                decomposition: SubgroupJson::Elements(full.clone()),
                inertia: SubgroupJson::Elements(c3.clone()),
                good_reduction: false,
                edge: EdgeJson { xi1: site(&full, &full), xi2: site(&full, &c3) },
            }],
            characters: vec![],
            h1_character: None,
            assertions: vec![],
            x_skeleton: None,
        };
        let c = spec(&json);
        let v = validate_cover(&c);
        assert!(v.iter().any(|x| x.kind == ViolationKind::InertiaNotPGroup));
        assert!(matches!(edge_is_annulus(&c, 0), Err(Error::Precondition(_))));
        assert!(matches!(almost_semistable_verdict(&c, SearchBounds::default()), Err(Error::Config(_))));
    }

    fn z2_cover(inertia: &[usize], good: bool, assert_sign: bool) -> CoverSpec {
        let z2 = fixtures::cyclic(2);
        let g = &z2.group;
        let full = vec![0, 1];
        let site = |d: &[usize], i: &[usize]| SiteJson {
            decomposition: SubgroupJson::Elements(d.to_vec()),
            inertia: SubgroupJson::Elements(i.to_vec()),
        };
        let disk = DiskJson { center: 0.into(), v: 1.into() };
        let mut assertions = vec![AssertionJson {
            tau: "triv".into(),
            vertices: vec![disk.clone()],
            claim: "resolved".into(),
            provenance: "fixture".into(),
        }];
        if assert_sign {
            assertions.push(AssertionJson {
                tau: "sign".into(),
                vertices: vec![disk.clone()],
                claim: "resolved".into(),
                provenance: "fixture".into(),
            });
        }
        spec(&CoverJson {
            schema_version: 1,
            prime: Prime::new(2).unwrap(),
            group: g.to_json(),
            vertices: vec![VertexJson {
                disk,
                decomposition: SubgroupJson::Elements(full.clone()),
                inertia: SubgroupJson::Elements(inertia.to_vec()),
                good_reduction: good,
                edge: EdgeJson { xi1: site(&full, &full), xi2: site(&full, inertia) },
            }],
            characters: z2.characters.iter().map(|(id, c)| c.to_json(g, Some(id.clone()))).collect(),
            h1_character: Some(Character::regular(g).to_json(g, None)),
            assertions,
            x_skeleton: None,
        })
    }

    #[test]
    fn residual_examples() {
        let one: BTreeSet<usize> = [0].into();
        let c = z2_cover(&[0, 1], true, false);
        assert_eq!(residual_status(&c, &one, c.character("sign").unwrap()), ResidualStatus::ResidualByGoodReduction);
        let c = z2_cover(&[0, 1], false, false);
        assert_eq!(residual_status(&c, &one, c.character("triv").unwrap()), ResidualStatus::ResidualByTrivialInertia);
        assert_eq!(residual_status(&c, &one, c.character("sign").unwrap()), ResidualStatus::Unknown);
        assert_eq!(residual_status(&c, &BTreeSet::new(), c.character("triv").unwrap()), ResidualStatus::Unknown);
    }

    #[test]
    fn resolved_examples() {
        let one: BTreeSet<usize> = [0].into();
        let c = z2_cover(&[0], false, true);
        assert!(resolved_status(&c, &one, "sign").unwrap().is_resolved());
        let c = z2_cover(&[0], true, false);
        assert_eq!(
            resolved_status(&c, &one, "sign").unwrap(),
            ResolvedStatus::ResidualOnly { residual: ResidualStatus::ResidualByGoodReduction }
        );
        let c = z2_cover(&[0, 1], false, true);
        assert_eq!(resolved_status(&c, &one, "sign").unwrap(), ResolvedStatus::Unknown);
        assert!(resolved_status(&c, &one, "nope").is_err());
    }

    #[test]
    fn verdict_examples() {
        let c = z2_cover(&[0], false, true);
        let v = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        assert!(v.almost_semistable_and_tree_like);
        assert_eq!(v.conditional_on.len(), 2);

        let c = z2_cover(&[0, 1], false, true);
        let v = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        assert!(!v.almost_semistable_and_tree_like);
        assert_eq!(v.blocking, vec!["sign".to_string()]);

        // unasserted but residual: reported with a witness, still blocking
        let c = z2_cover(&[0], false, false);
        let v = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        assert_eq!(v.blocking, vec!["sign".to_string()]);
        let sign = v.per_tau.iter().find(|t| t.tau == "sign").unwrap();
        assert_eq!(sign.vertices, Some(vec![0]));
        assert!(matches!(sign.status, ResolvedStatus::ResidualOnly { .. }));
    }

    #[test]
    fn zero_h1_is_vacuous() {
        let c = spec(&z4_cover(&[0, 2], &[0, 2]));
        let v = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        assert!(v.almost_semistable_and_tree_like);
        assert!(v.per_tau.is_empty());
    }

    #[test]
    fn ordering_is_enforced() {
        let c = z2_cover(&[0, 1], false, false);
        let v = almost_semistable_verdict(&c, SearchBounds::default()).unwrap();
        assert!(matches!(check_semistable(&c, &v), Err(Error::Precondition(_))));
    }

    #[test]
    fn incomplete_table_is_rejected() {
        let mut json = z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        json.characters.pop();
        let c = spec(&json);
        assert!(matches!(almost_semistable_verdict(&c, SearchBounds::default()), Err(Error::Config(_))));
        let mut json = z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        json.h1_character = None;
        assert!(almost_semistable_verdict(&spec(&json), SearchBounds::default()).is_err());
    }

    #[test]
    fn corollary_examples() {
        let c = spec(&z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]));
        let one_leg = Skeleton::from_parts(&[1, 0], &[(0, 1)], &[1]).unwrap();
        let r = pgroup_corollary_check(&c, &one_leg).unwrap();
        assert!(r.holds);
        assert_eq!((r.h1, r.h1c, r.csp), (2, 2, 2));
        let two_legs = Skeleton::from_parts(&[1], &[], &[0, 0]).unwrap();
        let r = pgroup_corollary_check(&c, &two_legs).unwrap();
        assert!(!r.holds);
        assert_eq!(r.violations[0].kind, ViolationKind::SeveralEnds);
        let split = Skeleton::from_parts(&[0, 0], &[], &[0, 1]).unwrap();
        assert!(pgroup_corollary_check(&c, &split).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = z2_cover(&[0], false, true);
        let json = c.to_json();
        let back = CoverSpec::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        let text = serde_json::to_string(&json).unwrap();
        let reparsed: CoverJson = serde_json::from_str(&text).unwrap();
        assert_eq!(reparsed, json);
    }

    #[test]
    fn bad_inputs() {
        let mut json = z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        json.vertices[1].inertia = SubgroupJson::Elements(vec![0, 1]);
        assert!(matches!(CoverSpec::from_json(&json), Err(Error::Data(_))));
        let mut json = z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        json.vertices.remove(0);
        assert!(matches!(CoverSpec::from_json(&json), Err(Error::Precondition(_))));
        let mut json = z4_cover(&[0, 1, 2, 3], &[0, 1, 2, 3]);
        json.schema_version = 7;
        assert!(CoverSpec::from_json(&json).is_err());
    }

    #[test]
    fn subsets_enumerate_by_size() {
        let all: Vec<Vec<usize>> = subsets_by_size(3, 2).map(|s| s.into_iter().collect()).collect();
        assert_eq!(all, vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
