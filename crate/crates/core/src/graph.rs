//! Simple undirected graphs, the unicyclic families that carry constructive
//! labelings, and exhaustive generation of small unicyclic graphs.
//!
//! Vertex ids are 0-based. Role indices (`i`, `j`, `k`) are 1-based so that
//! labelers can evaluate their formulas exactly as written.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::labelings::Labeling;

/// Largest `n` accepted by [`enumerate_unicyclic`] unless overridden.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// Largest Bertrand weed cycle length [`build`] accepts (2^21 - 2 vertices).
pub const MAX_WEED_CYCLE: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("invalid {family} parameters: {reason}")]
    BadParameter { family: &'static str, reason: String },
    #[error("edge ({0}, {1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("roles: {0}")]
    BadRoles(String),
    #[error("enumeration is capped at n = {cap}, got n = {n}")]
    AboveCap { n: usize, cap: usize },
    #[error("parse error at `{field}`: {reason}")]
    Parse { field: String, reason: String },
}

/// Where a vertex sits inside a family construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexRole {
    /// Cycle vertex `c_i`.
    Cycle(usize),
    /// `j`-th pendant (or path) vertex hanging from clump `i`.
    Pendant(usize, usize),
    /// `j`-th child of the pendant vertex of clump `i`.
    Star(usize, usize),
    /// `k`-th child of `Star(i, j)`.
    Leaf(usize, usize, usize),
}

impl VertexRole {
    pub fn clump(&self) -> usize {
        match *self {
            VertexRole::Cycle(i)
            | VertexRole::Pendant(i, _)
            | VertexRole::Star(i, _)
            | VertexRole::Leaf(i, _, _) => i,
        }
    }
}

/// A family of graphs plus its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `P_n`, `n` vertices.
    Path { n: usize },
    /// `C_n`.
    Cycle { n: usize },
    /// `S_n`: a center with `n` leaves.
    Star { n: usize },
    /// `C_n ⋆ S_m`: `m` pendants on every cycle vertex.
    HairyCycle { n: usize, m: usize },
    /// `BW_n`: cycle vertex `i` carries `2^i - 1` pendants.
    BertrandWeed { n: usize },
    /// A path of `m` further vertices hanging from every cycle vertex.
    CyclePath { n: usize, m: usize },
    /// Pendant on every cycle vertex, topped by a one- or two-level complete
    /// ternary tree.
    CyclePendantStar { n: usize, levels: usize },
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Path { .. } => "path",
            FamilySpec::Cycle { .. } => "cycle",
            FamilySpec::Star { .. } => "star",
            FamilySpec::HairyCycle { .. } => "hairy",
            FamilySpec::BertrandWeed { .. } => "weed",
            FamilySpec::CyclePath { .. } => "cyclepath",
            FamilySpec::CyclePendantStar { .. } => "cps",
        }
    }

    /// The main size parameter.
    pub fn n(&self) -> usize {
        match *self {
            FamilySpec::Path { n }
            | FamilySpec::Cycle { n }
            | FamilySpec::Star { n }
            | FamilySpec::HairyCycle { n, .. }
            | FamilySpec::BertrandWeed { n }
            | FamilySpec::CyclePath { n, .. }
            | FamilySpec::CyclePendantStar { n, .. } => n,
        }
    }

    /// Same family and secondary parameters with a different `n`.
    pub fn with_n(&self, n: usize) -> FamilySpec {
        match *self {
            FamilySpec::Path { .. } => FamilySpec::Path { n },
            FamilySpec::Cycle { .. } => FamilySpec::Cycle { n },
            FamilySpec::Star { .. } => FamilySpec::Star { n },
            FamilySpec::HairyCycle { m, .. } => FamilySpec::HairyCycle { n, m },
            FamilySpec::BertrandWeed { .. } => FamilySpec::BertrandWeed { n },
            FamilySpec::CyclePath { m, .. } => FamilySpec::CyclePath { n, m },
            FamilySpec::CyclePendantStar { levels, .. } => FamilySpec::CyclePendantStar { n, levels },
        }
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let bad = |reason: String| {
            Err(GraphError::BadParameter {
                family: self.name(),
                reason,
            })
        };
        match *self {
            FamilySpec::Path { n } if n < 2 => bad(format!("need n >= 2, got {n}")),
            FamilySpec::Star { n } if n < 1 => bad(format!("need n >= 1, got {n}")),
            FamilySpec::Cycle { n }
            | FamilySpec::HairyCycle { n, .. }
            | FamilySpec::BertrandWeed { n }
            | FamilySpec::CyclePath { n, .. }
            | FamilySpec::CyclePendantStar { n, .. }
                if n < 3 =>
            {
                bad(format!("need n >= 3, got {n}"))
            }
            FamilySpec::HairyCycle { m, .. } | FamilySpec::CyclePath { m, .. } if m < 1 => {
                bad(format!("need m >= 1, got {m}"))
            }
            FamilySpec::BertrandWeed { n } if n > MAX_WEED_CYCLE => {
                bad(format!("n = {n} exceeds the supported maximum {MAX_WEED_CYCLE}"))
            }
            FamilySpec::CyclePendantStar { levels, .. } if !(1..=2).contains(&levels) => {
                bad(format!("levels must be 1 or 2, got {levels}"))
            }
            _ => Ok(()),
        }
    }

    /// Vertex count of the built graph, computed from the family formula.
    pub fn vertex_count(&self) -> usize {
        match *self {
            FamilySpec::Path { n } | FamilySpec::Cycle { n } => n,
            FamilySpec::Star { n } => n + 1,
            FamilySpec::HairyCycle { n, m } | FamilySpec::CyclePath { n, m } => (m + 1) * n,
            FamilySpec::BertrandWeed { n } => (1usize << (n + 1)) - 2,
            FamilySpec::CyclePendantStar { n, levels: 1 } => 5 * n,
            FamilySpec::CyclePendantStar { n, .. } => 14 * n,
        }
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are kept normalized (`u < v`) and sorted, so two graphs with the same
/// edge set compare equal regardless of how they were assembled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    roles: Option<Vec<VertexRole>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Graph, GraphError> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(GraphError::SelfLoop(a, b));
            }
            if a >= n || b >= n {
                return Err(GraphError::EndpointOutOfRange { u: a, v: b, n });
            }
            let e = (a.min(b), a.max(b));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<_> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
            roles: None,
        })
    }

    /// Attaches one role per vertex. Role addresses must be distinct.
    pub fn with_roles(mut self, roles: Vec<VertexRole>) -> Result<Graph, GraphError> {
        if roles.len() != self.n {
            return Err(GraphError::BadRoles(format!(
                "{} roles for {} vertices",
                roles.len(),
                self.n
            )));
        }
        let mut seen = BTreeSet::new();
        for r in &roles {
            if !seen.insert(*r) {
                return Err(GraphError::BadRoles(format!("role {r:?} assigned twice")));
            }
        }
        self.roles = Some(roles);
        Ok(self)
    }

    pub fn without_roles(mut self) -> Graph {
        self.roles = None;
        self
    }

    pub fn complete(n: usize) -> Graph {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|nb| nb.binary_search(&v).is_ok())
    }

    pub fn roles(&self) -> Option<&[VertexRole]> {
        self.roles.as_deref()
    }

    pub fn role(&self, v: usize) -> Option<VertexRole> {
        self.roles.as_ref().map(|r| r[v])
    }

    /// Inverse of the role map.
    pub fn vertex_of(&self, role: VertexRole) -> Option<usize> {
        self.roles.as_ref()?.iter().position(|&r| r == role)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }
}

/// Connected with exactly as many edges as vertices.
pub fn is_unicyclic(g: &Graph) -> bool {
    g.n > 0 && g.edge_count() == g.n && g.is_connected()
}

/// Incremental builder that allocates vertex ids in role order.
struct Assembler {
    edges: Vec<(usize, usize)>,
    roles: Vec<VertexRole>,
}

impl Assembler {
    fn new() -> Self {
        Assembler {
            edges: Vec::new(),
            roles: Vec::new(),
        }
    }

    fn add(&mut self, role: VertexRole) -> usize {
        self.roles.push(role);
        self.roles.len() - 1
    }

    fn link(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    fn close_cycle(&mut self, cycle: &[usize]) {
        for w in cycle.windows(2) {
            self.link(w[0], w[1]);
        }
        self.link(cycle[cycle.len() - 1], cycle[0]);
    }

    fn finish(self) -> Graph {
        let n = self.roles.len();
        Graph::new(n, self.edges)
            .and_then(|g| g.with_roles(self.roles))
            .expect("family constructors produce simple graphs")
    }
}

/// Builds the graph of a family, with roles populated for every family that
/// has a cycle.
///
/// Within each clump vertices are allocated cycle vertex first, then pendants,
/// then stars, then leaves, each group in `(j, k)` order.
pub fn build(spec: &FamilySpec) -> Result<Graph, GraphError> {
    spec.validate()?;
    let g = match *spec {
        FamilySpec::Path { n } => Graph::new(n, (1..n).map(|v| (v - 1, v)))?,
        FamilySpec::Star { n } => Graph::new(n + 1, (1..=n).map(|v| (0, v)))?,
        FamilySpec::Cycle { n } => {
            let mut a = Assembler::new();
            let cycle: Vec<_> = (1..=n).map(|i| a.add(VertexRole::Cycle(i))).collect();
            a.close_cycle(&cycle);
            a.finish()
        }
        FamilySpec::HairyCycle { n, m } => hairy(n, |_| m),
        FamilySpec::BertrandWeed { n } => hairy(n, |i| (1usize << i) - 1),
        FamilySpec::CyclePath { n, m } => {
            let mut a = Assembler::new();
            let mut cycle = Vec::with_capacity(n);
            for i in 1..=n {
                let c = a.add(VertexRole::Cycle(i));
                cycle.push(c);
                let mut prev = c;
                for j in 1..=m {
                    let p = a.add(VertexRole::Pendant(i, j));
                    a.link(prev, p);
                    prev = p;
                }
            }
            a.close_cycle(&cycle);
            a.finish()
        }
        FamilySpec::CyclePendantStar { n, levels } => {
            let mut a = Assembler::new();
            let mut cycle = Vec::with_capacity(n);
            for i in 1..=n {
                let c = a.add(VertexRole::Cycle(i));
                cycle.push(c);
                let p = a.add(VertexRole::Pendant(i, 1));
                a.link(c, p);
                let stars: Vec<_> = (1..=3).map(|j| a.add(VertexRole::Star(i, j))).collect();
                for &s in &stars {
                    a.link(p, s);
                }
                if levels == 2 {
                    for (j, &s) in (1..=3).zip(&stars) {
                        for k in 1..=3 {
                            let l = a.add(VertexRole::Leaf(i, j, k));
                            a.link(s, l);
                        }
                    }
                }
            }
            a.close_cycle(&cycle);
            a.finish()
        }
    };
    debug_assert_eq!(g.n(), spec.vertex_count());
    Ok(g)
}

/// Cycle of length `n` where cycle vertex `i` carries `pendants(i)` pendants.
fn hairy(n: usize, pendants: impl Fn(usize) -> usize) -> Graph {
    let mut a = Assembler::new();
    let mut cycle = Vec::with_capacity(n);
    for i in 1..=n {
        let c = a.add(VertexRole::Cycle(i));
        cycle.push(c);
        for j in 1..=pendants(i) {
            let p = a.add(VertexRole::Pendant(i, j));
            a.link(c, p);
        }
    }
    a.close_cycle(&cycle);
    a.finish()
}

/// Every connected simple graph on `n` vertices with `n` edges, as a cycle on
/// `0..k` plus trees hanging from it.
///
/// Non-cycle vertices are numbered in breadth-first order from the cycle, so
/// each vertex `v >= k` picks a parent `< v` and parents never decrease with
/// `v`. Every unicyclic graph has such a numbering, so every isomorphism class
/// is produced at least once; duplicates are not removed.
pub fn enumerate_unicyclic(n: usize) -> Result<UnicyclicIter, GraphError> {
    enumerate_unicyclic_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_unicyclic_capped(n: usize, cap: usize) -> Result<UnicyclicIter, GraphError> {
    if n > cap {
        return Err(GraphError::AboveCap { n, cap });
    }
    if n < 3 {
        return Err(GraphError::BadParameter {
            family: "unicyclic",
            reason: format!("need n >= 3, got {n}"),
        });
    }
    Ok(UnicyclicIter {
        n,
        cycle_len: n,
        parents: Vec::new(),
        fresh: true,
    })
}

/// Stream returned by [`enumerate_unicyclic`].
pub struct UnicyclicIter {
    n: usize,
    cycle_len: usize,
    /// `parents[t]` is the parent of vertex `cycle_len + t`.
    parents: Vec<usize>,
    fresh: bool,
}

impl UnicyclicIter {
    fn first_parents(k: usize, n: usize) -> Vec<usize> {
        vec![0; n - k]
    }

    /// Advances `parents` to the next non-decreasing sequence with
    /// `parents[t] < k + t`. Returns false when exhausted.
    fn advance(&mut self) -> bool {
        let k = self.cycle_len;
        let len = self.parents.len();
        for t in (0..len).rev() {
            if self.parents[t] + 1 < k + t {
                let next = self.parents[t] + 1;
                for s in t..len {
                    self.parents[s] = next;
                }
                return true;
            }
        }
        false
    }

    fn current(&self) -> Graph {
        let k = self.cycle_len;
        let cycle = (0..k).map(|v| (v, (v + 1) % k));
        let trees = self.parents.iter().enumerate().map(|(t, &p)| (p, k + t));
        Graph::new(self.n, cycle.chain(trees)).expect("enumerated graphs are simple")
    }
}

impl Iterator for UnicyclicIter {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        if self.fresh {
            self.fresh = false;
            self.parents = Self::first_parents(self.cycle_len, self.n);
            return Some(self.current());
        }
        if self.advance() {
            return Some(self.current());
        }
        if self.cycle_len == 3 {
            return None;
        }
        self.cycle_len -= 1;
        self.parents = Self::first_parents(self.cycle_len, self.n);
        Some(self.current())
    }
}

// ---------------------------------------------------------------------------
// JSON and DOT
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct RoleRepr {
    kind: String,
    i: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    j: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<usize>,
}

impl From<VertexRole> for RoleRepr {
    fn from(r: VertexRole) -> Self {
        let (kind, i, j, k) = match r {
            VertexRole::Cycle(i) => ("cycle", i, None, None),
            VertexRole::Pendant(i, j) => ("pendant", i, Some(j), None),
            VertexRole::Star(i, j) => ("star", i, Some(j), None),
            VertexRole::Leaf(i, j, k) => ("leaf", i, Some(j), Some(k)),
        };
        RoleRepr {
            kind: kind.to_string(),
            i,
            j,
            k,
        }
    }
}

impl RoleRepr {
    fn into_role(self, field: &str) -> Result<VertexRole, GraphError> {
        let need = |x: Option<usize>, name: &str| {
            x.ok_or_else(|| GraphError::Parse {
                field: format!("{field}.{name}"),
                reason: format!("required for kind \"{}\"", self.kind),
            })
        };
        Ok(match self.kind.as_str() {
            "cycle" => VertexRole::Cycle(self.i),
            "pendant" => VertexRole::Pendant(self.i, need(self.j, "j")?),
            "star" => VertexRole::Star(self.i, need(self.j, "j")?),
            "leaf" => VertexRole::Leaf(self.i, need(self.j, "j")?, need(self.k, "k")?),
            other => {
                return Err(GraphError::Parse {
                    field: format!("{field}.kind"),
                    reason: format!("unknown role kind \"{other}\""),
                })
            }
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    roles: Option<BTreeMap<String, RoleRepr>>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::{SerializeMap, SerializeStruct};

        struct Roles<'a>(&'a [VertexRole]);
        impl Serialize for Roles<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (v, &r) in self.0.iter().enumerate() {
                    map.serialize_entry(&v.to_string(), &RoleRepr::from(r))?;
                }
                map.end()
            }
        }

        let fields = if self.roles.is_some() { 3 } else { 2 };
        let mut st = s.serialize_struct("Graph", fields)?;
        st.serialize_field("n", &self.n)?;
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|&(u, v)| [u, v]).collect();
        st.serialize_field("edges", &edges)?;
        if let Some(roles) = &self.roles {
            st.serialize_field("roles", &Roles(roles))?;
        }
        st.end()
    }
}

impl TryFrom<serde_json::Value> for Graph {
    type Error = GraphError;

    fn try_from(value: serde_json::Value) -> Result<Graph, GraphError> {
        let repr: GraphRepr = serde_json::from_value(value).map_err(|e| GraphError::Parse {
            field: "graph".to_string(),
            reason: e.to_string(),
        })?;
        from_repr(repr)
    }
}

fn from_repr(repr: GraphRepr) -> Result<Graph, GraphError> {
    let n = repr.n;
    let mut edges = Vec::with_capacity(repr.edges.len());
    for (idx, [u, v]) in repr.edges.into_iter().enumerate() {
        let field = format!("edges[{idx}]");
        if u == v {
            return Err(GraphError::Parse {
                field,
                reason: format!("self-loop on vertex {u}"),
            });
        }
        if u >= n || v >= n {
            return Err(GraphError::Parse {
                field,
                reason: format!("endpoint out of range for n = {n}"),
            });
        }
        edges.push((u, v));
    }
    let g = Graph::new(n, edges).map_err(|e| GraphError::Parse {
        field: "edges".to_string(),
        reason: e.to_string(),
    })?;
    let Some(map) = repr.roles else {
        return Ok(g);
    };
    let mut roles: Vec<Option<VertexRole>> = vec![None; n];
    for (key, role) in map {
        let field = format!("roles.{key}");
        let v: usize = key.parse().map_err(|_| GraphError::Parse {
            field: field.clone(),
            reason: "key is not a vertex id".to_string(),
        })?;
        if v >= n {
            return Err(GraphError::Parse {
                field,
                reason: format!("vertex out of range for n = {n}"),
            });
        }
        if roles[v].is_some() {
            return Err(GraphError::Parse {
                field,
                reason: "vertex listed twice".to_string(),
            });
        }
        roles[v] = Some(role.into_role(&field)?);
    }
    let roles = roles
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| GraphError::Parse {
                field: format!("roles.{v}"),
                reason: "missing role (roles must cover every vertex)".to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    g.with_roles(roles).map_err(|e| GraphError::Parse {
        field: "roles".to_string(),
        reason: e.to_string(),
    })
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let repr: GraphRepr = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        field: "graph".to_string(),
        reason: e.to_string(),
    })?;
    from_repr(repr)
}

pub fn serialize_graph(g: &Graph) -> String {
    serde_json::to_string(g).expect("graph serialization cannot fail")
}

/// Undirected DOT document. With a labeling, each node is captioned with its
/// label; otherwise with its vertex id.
pub fn to_dot(g: &Graph, labeling: Option<&Labeling>) -> String {
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        let caption = match labeling {
            Some(l) => l.label(v).map_or_else(|| "?".to_string(), |x| x.to_string()),
            None => v.to_string(),
        };
        let _ = writeln!(out, "  {v} [label=\"{caption}\"];");
    }
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v};");
    }
    out.push_str("}\n");
    out
}
