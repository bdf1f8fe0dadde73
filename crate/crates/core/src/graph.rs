//! Undirected simple graphs with a white/black coloring.
//!
//! Vertices are addressed by dense [`VertexId`] indices; each also carries a
//! unique, non-empty string name used by the JSON and DOT formats. Iteration
//! order is insertion order, so every traversal is reproducible.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense index of a vertex inside one [`ColoredGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    White,
    Black,
}

impl Color {
    pub fn is_black(self) -> bool {
        self == Color::Black
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Color::Black
        } else {
            Color::White
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ColoredGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    adjacency: Vec<Vec<VertexId>>,
    colors: Vec<Color>,
}

impl ColoredGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from `(id, color)` pairs and an edge list given by ids.
    pub fn from_parts(vertices: &[(&str, Color)], edges: &[(&str, &str)]) -> Result<Self> {
        let mut g = ColoredGraph::new();
        for (id, color) in vertices {
            g.add_vertex(*id, *color)?;
        }
        for (a, b) in edges {
            let va = g.require(a)?;
            let vb = g.require(b)?;
            g.add_edge(va, vb)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, color: Color) -> Result<VertexId> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::InvalidGraph("vertex ids must be non-empty".into()));
        }
        if self.index.contains_key(&id) {
            return Err(Error::InvalidGraph(format!("duplicate vertex id `{id}`")));
        }
        let v = VertexId(self.names.len());
        self.index.insert(id.clone(), v);
        self.names.push(id);
        self.adjacency.push(Vec::new());
        self.colors.push(color);
        Ok(v)
    }

    /// Adds the undirected edge `a`–`b`. Self-loops and repeated edges are rejected.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::InvalidGraph(format!("self-loop on `{}`", self.names[a.0])));
        }
        match self.adjacency[a.0].binary_search(&b) {
            Ok(_) => Err(Error::InvalidGraph(format!(
                "duplicate edge `{}`-`{}`",
                self.names[a.0], self.names[b.0]
            ))),
            Err(pos) => {
                self.adjacency[a.0].insert(pos, b);
                let pos_b = self.adjacency[b.0].binary_search(&a).unwrap_err();
                self.adjacency[b.0].insert(pos_b, a);
                Ok(())
            }
        }
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::InvalidGraph(format!("vertex index {} out of range", v.0)))
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> + '_ {
        (0..self.names.len()).map(VertexId)
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adjacency[v.0]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.adjacency[a.0].binary_search(&b).is_ok()
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic index order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(a, nbrs)| nbrs.iter().filter(move |b| b.0 > a).map(move |&b| (VertexId(a), b)))
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn vertex(&self, id: &str) -> Option<VertexId> {
        self.index.get(id).copied()
    }

    pub fn require(&self, id: &str) -> Result<VertexId> {
        self.vertex(id)
            .ok_or_else(|| Error::InvalidGraph(format!("unknown vertex id `{id}`")))
    }

    pub fn color(&self, v: VertexId) -> Color {
        self.colors[v.0]
    }

    pub fn is_black(&self, v: VertexId) -> bool {
        self.colors[v.0].is_black()
    }

    pub fn set_color(&mut self, v: VertexId, color: Color) {
        self.colors[v.0] = color;
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn black_set(&self) -> VertexSet {
        self.vertices().filter(|&v| self.is_black(v)).collect()
    }

    pub fn black_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_black()).count()
    }

    pub fn all_black(&self) -> bool {
        self.colors.iter().all(|c| c.is_black())
    }

    /// Same structure, with exactly `black` colored black.
    pub fn recolored(&self, black: &VertexSet) -> ColoredGraph {
        let mut g = self.clone();
        for v in self.vertices() {
            g.colors[v.0] = Color::from_bit(black.contains(&v));
        }
        g
    }

    pub fn to_json_model(&self) -> GraphJson {
        GraphJson {
            vertices: self
                .vertices()
                .map(|v| VertexJson {
                    id: self.name(v).to_owned(),
                    color: self.color(v),
                })
                .collect(),
            edges: self
                .edges()
                .map(|(a, b)| [self.name(a).to_owned(), self.name(b).to_owned()])
                .collect(),
        }
    }

    pub fn from_json_model(model: &GraphJson) -> Result<Self> {
        let mut g = ColoredGraph::new();
        for v in &model.vertices {
            g.add_vertex(v.id.clone(), v.color)?;
        }
        for [a, b] in &model.edges {
            let va = g.require(a)?;
            let vb = g.require(b)?;
            g.add_edge(va, vb)?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(&self.to_json_model())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: GraphJson = serde_json::from_str(text)?;
        Self::from_json_model(&model)
    }
}

/// Wire form of a colored graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub color: Color,
}

/// Serializes through `serde_json::Value` so object keys come out sorted.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> ColoredGraph {
        ColoredGraph::from_parts(
            &[("1", Color::Black), ("2", Color::White), ("3", Color::White)],
            &[("1", "2"), ("1", "3"), ("2", "3")],
        )
        .unwrap()
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = triangle();
        for v in g.vertices() {
            for &u in g.neighbors(v) {
                assert!(g.neighbors(u).contains(&v));
                assert_ne!(u, v);
            }
        }
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn rejects_self_loops_and_duplicates() {
        let mut g = triangle();
        let a = g.vertex("1").unwrap();
        let b = g.vertex("2").unwrap();
        assert!(matches!(g.add_edge(a, a), Err(Error::InvalidGraph(_))));
        assert!(matches!(g.add_edge(b, a), Err(Error::InvalidGraph(_))));
        assert!(g.add_vertex("1", Color::White).is_err());
        assert!(g.add_vertex("", Color::White).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = triangle();
        let text = g.to_json().unwrap();
        assert_eq!(ColoredGraph::from_json(&text).unwrap(), g);
    }

    #[test]
    fn json_rejects_bad_edges() {
        let dup = r#"{"vertices":[{"id":"a","color":"white"},{"id":"b","color":"black"}],
                      "edges":[["a","b"],["b","a"]]}"#;
        assert!(ColoredGraph::from_json(dup).is_err());
        let lp = r#"{"vertices":[{"id":"a","color":"white"}],"edges":[["a","a"]]}"#;
        assert!(ColoredGraph::from_json(lp).is_err());
        let unknown = r#"{"vertices":[{"id":"a","color":"white"}],"edges":[["a","z"]]}"#;
        assert!(ColoredGraph::from_json(unknown).is_err());
        let dup_id = r#"{"vertices":[{"id":"a","color":"white"},{"id":"a","color":"black"}],"edges":[]}"#;
        assert!(ColoredGraph::from_json(dup_id).is_err());
        let bad_color = r#"{"vertices":[{"id":"a","color":"grey"}],"edges":[]}"#;
        assert!(ColoredGraph::from_json(bad_color).is_err());
    }
}
