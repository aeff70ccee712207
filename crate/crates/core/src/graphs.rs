//! Simple positively weighted digraphs with exact rational weights.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parses `"p/q"`, an integer, or a finite decimal such as `"1.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("`{s}` is not a rational number"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|ch| ch.is_ascii_digit()) {
            return Err(bad());
        }
        let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(digits, den));
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(p))
}

/// Canonical `p/q` (or `p` when integral) rendering.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A directed edge with positive rational weight and an optional phase.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: BigRational,
    pub phase: Option<f64>,
    pub label: Option<String>,
}

/// Simple digraph: at most one edge per unordered vertex pair, no loops, positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

/// One end of an edge in the split graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Minus => -1.0,
            Side::Plus => 1.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Plus => Side::Minus,
        }
    }
}

/// The disjoint union of one-edge subgraphs, indexed by `(edge, side)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitGraph {
    pub entries: Vec<(usize, Side)>,
}

impl SplitGraph {
    /// Position of `(e, side)` in the entry list.
    pub fn position(e: usize, side: Side) -> usize {
        2 * e + usize::from(side == Side::Plus)
    }
}

/// Result of [`WeightedDigraph::acyclicity_witness`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    /// Vertices in an order strictly increasing along every edge.
    Acyclic(Vec<usize>),
    /// A closed directed vertex path, first vertex repeated at the end.
    Cyclic(Vec<usize>),
}

/// Length of a shortest path in the undirected underlying graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Distance {
    Finite(BigRational),
    Infinite,
}

impl Distance {
    pub fn to_f64(&self) -> f64 {
        match self {
            Distance::Finite(r) => rational_to_f64(r),
            Distance::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for Distance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Distance::Finite(r) => f.write_str(&format_rational(r)),
            Distance::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A closed vertex path obtained from the spanning tree and one extra edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    /// Closed path `v₀ v₁ … v₀`.
    pub vertices: Vec<usize>,
    /// The non-tree edge closing the cycle.
    pub closing_edge: usize,
}

impl WeightedDigraph {
    /// Validates and builds a graph; `pointer`-style locations are reported in errors.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), k).is_some() {
                return Err(Error::Schema {
                    pointer: format!("/vertices/{k}"),
                    message: format!("duplicate vertex `{v}`"),
                });
            }
        }
        let mut seen = HashMap::new();
        for (k, e) in edges.iter().enumerate() {
            let at = |message: String| Error::Schema { pointer: format!("/edges/{k}"), message };
            if e.src >= vertices.len() || e.dst >= vertices.len() {
                return Err(at("edge endpoint out of range".into()));
            }
            if e.src == e.dst {
                return Err(at(format!("self-loop at `{}`", vertices[e.src])));
            }
            if !e.weight.is_positive() {
                return Err(Error::Schema {
                    pointer: format!("/edges/{k}/weight"),
                    message: "weight must be positive".into(),
                });
            }
            let key = (e.src.min(e.dst), e.src.max(e.dst));
            if let Some(prev) = seen.insert(key, k) {
                return Err(at(format!("parallel edge, duplicates /edges/{prev}")));
            }
        }
        Ok(WeightedDigraph { vertices, edges, index })
    }

    /// Convenience constructor from labels and `(src, dst, weight)` triples.
    pub fn from_labels(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Self> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx: HashMap<&str, usize> = vertices.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        let mut es = Vec::new();
        for (s, d, w) in edges {
            let src = *idx.get(s).ok_or_else(|| Error::UnknownVertex(s.to_string()))?;
            let dst = *idx.get(d).ok_or_else(|| Error::UnknownVertex(d.to_string()))?;
            es.push(Edge { src, dst, weight: parse_rational(w)?, phase: None, label: None });
        }
        Self::new(vs, es)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn edge_label(&self, e: usize) -> String {
        let edge = &self.edges[e];
        edge.label.clone().unwrap_or_else(|| format!("{}->{}", self.vertices[edge.src], self.vertices[edge.dst]))
    }

    pub fn vertex_index(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn weight(&self, e: usize) -> f64 {
        rational_to_f64(&self.edges[e].weight)
    }

    /// The edge joining `u` and `v`, with `+1` when it points from `u` to `v`.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<(usize, i8)> {
        self.edges.iter().enumerate().find_map(|(k, e)| {
            if e.src == u && e.dst == v {
                Some((k, 1))
            } else if e.src == v && e.dst == u {
                Some((k, -1))
            } else {
                None
            }
        })
    }

    /// Signed edges traversed by a vertex path.
    pub fn path_edges(&self, path: &[usize]) -> Result<Vec<(usize, i8)>> {
        path.windows(2)
            .map(|w| {
                self.edge_between(w[0], w[1]).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "vertices `{}` and `{}` are not adjacent",
                        self.vertices[w[0]], self.vertices[w[1]]
                    ))
                })
            })
            .collect()
    }

    /// Number of edges incident to each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.src] += 1;
            d[e.dst] += 1;
        }
        d
    }

    /// Copy of the graph with the listed edges reversed.
    pub fn with_reversed(&self, reversed: &[usize]) -> Self {
        let mut g = self.clone();
        for &e in reversed {
            let edge = &mut g.edges[e];
            std::mem::swap(&mut edge.src, &mut edge.dst);
        }
        g
    }

    /// Copy of the graph with every edge phase set.
    pub fn with_phases(&self, phases: &[f64]) -> Self {
        let mut g = self.clone();
        for (e, p) in g.edges.iter_mut().zip(phases) {
            e.phase = Some(*p);
        }
        g
    }

    fn undirected_neighbors(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.src].push((e.dst, k));
            adj[e.dst].push((e.src, k));
        }
        for list in &mut adj {
            list.sort_by(|a, b| self.vertices[a.0].cmp(&self.vertices[b.0]));
        }
        adj
    }

    fn out_neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.src].push(e.dst);
        }
        for list in &mut adj {
            list.sort_by(|a, b| self.vertices[*a].cmp(&self.vertices[*b]));
        }
        adj
    }

    fn label_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.vertices.len()).collect();
        order.sort_by(|a, b| self.vertices[*a].cmp(&self.vertices[*b]));
        order
    }

    /// Connected component id of each vertex, numbered in label order of their smallest vertex.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.undirected_neighbors();
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut next = 0;
        for root in self.label_order() {
            if comp[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            comp[root] = next;
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Shortest path length in the undirected underlying graph (Dijkstra, exact).
    pub fn geodesic_distance(&self, i: usize, j: usize) -> Result<Distance> {
        let n = self.vertices.len();
        if i >= n {
            return Err(Error::UnknownVertex(i.to_string()));
        }
        if j >= n {
            return Err(Error::UnknownVertex(j.to_string()));
        }
        let adj = self.undirected_neighbors();
        let mut best: Vec<Option<BigRational>> = vec![None; n];
        let mut heap = BinaryHeap::new();
        best[i] = Some(BigRational::zero());
        heap.push(Reverse((BigRational::zero(), i)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if best[u].as_ref().is_some_and(|b| *b < d) {
                continue;
            }
            if u == j {
                return Ok(Distance::Finite(d));
            }
            for &(v, e) in &adj[u] {
                let nd = &d + &self.edges[e].weight;
                if best[v].as_ref().is_none_or(|b| nd < *b) {
                    best[v] = Some(nd.clone());
                    heap.push(Reverse((nd, v)));
                }
            }
        }
        Ok(Distance::Infinite)
    }

    /// Topological order (ties broken by label) or a shortest directed cycle.
    pub fn acyclicity_witness(&self) -> Acyclicity {
        let n = self.vertices.len();
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.dst] += 1;
        }
        let out = self.out_neighbors();
        let mut ready: BTreeSet<(&str, usize)> =
            (0..n).filter(|&v| indeg[v] == 0).map(|v| (self.vertices[v].as_str(), v)).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(first) = ready.pop_first() {
            let u = first.1;
            order.push(u);
            for &v in &out[u] {
                indeg[v] -= 1;
                if indeg[v] == 0 {
                    ready.insert((self.vertices[v].as_str(), v));
                }
            }
        }
        if order.len() == n {
            Acyclicity::Acyclic(order)
        } else {
            Acyclicity::Cyclic(self.shortest_cycle(&out).expect("Kahn's algorithm stalled without a cycle"))
        }
    }

    /// Shortest directed cycle; among equal lengths the one through the smallest label.
    fn shortest_cycle(&self, out: &[Vec<usize>]) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        let mut best: Option<Vec<usize>> = None;
        for s in self.label_order() {
            let mut parent = vec![usize::MAX; n];
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut closing = None;
            'bfs: while let Some(u) = queue.pop_front() {
                for &v in &out[u] {
                    if v == s {
                        closing = Some(u);
                        break 'bfs;
                    }
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    }
                }
            }
            if let Some(last) = closing {
                let mut path = vec![last];
                while *path.last().unwrap() != s {
                    path.push(parent[*path.last().unwrap()]);
                }
                path.reverse();
                path.push(s);
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
        }
        best
    }

    /// Fundamental cycles of a DFS spanning forest rooted at the smallest label of each component.
    pub fn fundamental_cycles(&self) -> Vec<Cycle> {
        let n = self.vertices.len();
        let adj = self.undirected_neighbors();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0usize; n];
        let mut visited = vec![false; n];
        let mut tree_edge = vec![false; self.edges.len()];
        for root in self.label_order() {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(top) = stack.last_mut() {
                let (u, next) = *top;
                if next >= adj[u].len() {
                    stack.pop();
                    continue;
                }
                top.1 += 1;
                let (v, e) = adj[u][next];
                if !visited[v] {
                    visited[v] = true;
                    parent[v] = u;
                    depth[v] = depth[u] + 1;
                    tree_edge[e] = true;
                    stack.push((v, 0));
                }
            }
        }
        let mut cycles = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if tree_edge[k] {
                continue;
            }
            let (mut a, mut b) = (e.src, e.dst);
            let mut from_src = vec![a];
            let mut from_dst = vec![b];
            while a != b {
                if depth[a] >= depth[b] {
                    a = parent[a];
                    from_src.push(a);
                } else {
                    b = parent[b];
                    from_dst.push(b);
                }
            }
            from_dst.pop();
            from_dst.reverse();
            from_src.extend(from_dst);
            from_src.push(e.src);
            cycles.push(Cycle { vertices: from_src, closing_edge: k });
        }
        cycles
    }

    /// Spanning-forest tree path from the root of `v`'s component down to `v`.
    pub fn tree_path_from_root(&self, v: usize) -> Vec<usize> {
        let n = self.vertices.len();
        let adj = self.undirected_neighbors();
        let comp = self.components();
        let root = self.label_order().into_iter().find(|&r| comp[r] == comp[v]).unwrap_or(v);
        let mut parent = vec![usize::MAX; n];
        let mut visited = vec![false; n];
        visited[root] = true;
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        while let Some(top) = stack.last_mut() {
            let (u, next) = *top;
            if next >= adj[u].len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let (w, _) = adj[u][next];
            if !visited[w] {
                visited[w] = true;
                parent[w] = u;
                stack.push((w, 0));
            }
        }
        let mut path = vec![v];
        while *path.last().unwrap() != root {
            path.push(parent[*path.last().unwrap()]);
        }
        path.reverse();
        path
    }

    pub fn split_graph(&self) -> SplitGraph {
        SplitGraph {
            entries: (0..self.edges.len()).flat_map(|e| [(e, Side::Minus), (e, Side::Plus)]).collect(),
        }
    }

    /// Vertex at the `side` end of edge `e`: `e⁻` is the source, `e⁺` the target.
    pub fn endpoint(&self, e: usize, side: Side) -> usize {
        match side {
            Side::Minus => self.edges[e].src,
            Side::Plus => self.edges[e].dst,
        }
    }
}

/// JSON form of a graph: `{"vertices":[...],"edges":[{"src","dst","weight":"p/q","phase"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Label>,
    pub edges: Vec<EdgeFile>,
}

/// Vertex label given either as a string or an integer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(i64),
}

impl Label {
    pub fn text(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(k) => k.to_string(),
        }
    }
}

/// A rational written as a string or a plain JSON integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalText {
    Text(String),
    Integer(i64),
}

impl RationalText {
    pub fn parse(&self) -> Result<BigRational> {
        match self {
            RationalText::Text(s) => parse_rational(s),
            RationalText::Integer(k) => Ok(BigRational::from_integer(BigInt::from(*k))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub src: Label,
    pub dst: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<RationalText>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl GraphFile {
    pub fn into_graph(self) -> Result<WeightedDigraph> {
        let vertices: Vec<String> = self.vertices.iter().map(Label::text).collect();
        let index: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(k, v)| (v.as_str(), k)).collect();
        let mut edges = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            let lookup = |l: &Label, field: &str| {
                index.get(l.text().as_str()).copied().ok_or_else(|| Error::Schema {
                    pointer: format!("/edges/{k}/{field}"),
                    message: format!("unknown vertex `{}`", l.text()),
                })
            };
            let weight = match &e.weight {
                Some(w) => w.parse().map_err(|err| Error::Schema {
                    pointer: format!("/edges/{k}/weight"),
                    message: err.to_string(),
                })?,
                None => BigRational::from_integer(BigInt::from(1)),
            };
            edges.push(Edge {
                src: lookup(&e.src, "src")?,
                dst: lookup(&e.dst, "dst")?,
                weight,
                phase: e.phase,
                label: e.label.clone(),
            });
        }
        WeightedDigraph::new(vertices, edges)
    }

    pub fn from_graph(g: &WeightedDigraph) -> Self {
        GraphFile {
            vertices: g.vertices.iter().map(|v| Label::Text(v.clone())).collect(),
            edges: g
                .edges
                .iter()
                .map(|e| EdgeFile {
                    src: Label::Text(g.vertices[e.src].clone()),
                    dst: Label::Text(g.vertices[e.dst].clone()),
                    weight: Some(RationalText::Text(format_rational(&e.weight))),
                    phase: e.phase,
                    label: e.label.clone(),
                })
                .collect(),
        }
    }
}
