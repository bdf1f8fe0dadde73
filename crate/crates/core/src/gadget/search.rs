//! Exhaustive search for the smallest gadgets realizing a Boolean function.
//!
//! Every labeled graph on up to `max_vertices` vertices is tried with every
//! ordered choice of input and output ports and every pre-coloring of the
//! remaining vertices. Candidates are run through [`verify_gadget`] and
//! deduplicated up to relabeling of vertices (port order is kept).
//!
//! A candidate is accepted when its report [passes](super::TruthTableReport::passes):
//! right truth table, forward propagation on true rows, no color pushed into
//! 0-fed inputs on false rows, and one ready step for all true rows. The
//! last two conditions are what rule out the 2-edge path AND and the
//! 3-edge path OR that the truth table alone admits.

use rayon::prelude::*;

use super::harness::verify_gadget;
use super::Gadget;
use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, VertexId};

pub const MAX_SEARCH_VERTICES: usize = 6;

#[derive(Debug, Clone)]
pub struct GadgetSearch {
    /// Gadgets whose report passes, sorted by (vertex count, edge count).
    pub gadgets: Vec<Gadget>,
    /// Gadgets with the right truth table whose true rows do not all reach
    /// the next gate.
    pub non_propagating: Vec<Gadget>,
    pub candidates_examined: usize,
}

impl GadgetSearch {
    pub fn minimal(&self) -> Option<&Gadget> {
        self.gadgets.first()
    }

    pub fn min_vertices(&self) -> Option<usize> {
        self.minimal().map(|g| g.fragment.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    n: usize,
    edges: Vec<(usize, usize)>,
    black: u32,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
}

impl Candidate {
    fn gadget(&self, name: String) -> Gadget {
        let mut fragment = ColoredGraph::new();
        for i in 0..self.n {
            let color = Color::from_bit(self.black >> i & 1 == 1);
            fragment.add_vertex((i + 1).to_string(), color).expect("fresh ids");
        }
        for &(a, b) in &self.edges {
            fragment.add_edge(VertexId(a), VertexId(b)).expect("simple graph");
        }
        Gadget {
            name,
            fragment,
            input_ports: self.inputs.iter().map(|&i| VertexId(i)).collect(),
            output_ports: self.outputs.iter().map(|&i| VertexId(i)).collect(),
            latency: 0,
            output_latencies: vec![0; self.outputs.len()],
        }
    }

    fn relabeled(&self, perm: &[usize]) -> Candidate {
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|&(a, b)| {
                let (x, y) = (perm[a], perm[b]);
                (x.min(y), x.max(y))
            })
            .collect();
        edges.sort_unstable();
        let black = (0..self.n)
            .filter(|&i| self.black >> i & 1 == 1)
            .fold(0u32, |m, i| m | 1 << perm[i]);
        Candidate {
            n: self.n,
            edges,
            black,
            inputs: self.inputs.iter().map(|&i| perm[i]).collect(),
            outputs: self.outputs.iter().map(|&i| perm[i]).collect(),
        }
    }

    fn canonical(&self, perms: &[Vec<usize>]) -> Candidate {
        perms
            .iter()
            .map(|p| self.relabeled(p))
            .min()
            .expect("identity permutation")
    }
}

pub fn search_minimal_gadget(expected: &BooleanFunction, max_vertices: usize) -> Result<GadgetSearch> {
    if max_vertices > MAX_SEARCH_VERTICES {
        return Err(Error::LimitExceeded {
            what: "gadget search vertex",
            limit: MAX_SEARCH_VERTICES,
            found: max_vertices,
        });
    }
    let ports = expected.arity + expected.outputs;
    let mut found: Vec<(bool, Candidate)> = Vec::new();
    let mut examined = 0usize;
    for n in ports.max(1)..=max_vertices {
        let perms = permutations(n);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let assignments = port_assignments(n, expected);
        let results: Vec<(usize, Vec<(bool, Candidate)>)> = (0u64..1 << pairs.len())
            .into_par_iter()
            .map(|edge_mask| {
                let edges: Vec<(usize, usize)> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| edge_mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let mut hits = Vec::new();
                let mut count = 0;
                for (inputs, outputs, black) in &assignments {
                    count += 1;
                    let cand = Candidate {
                        n,
                        edges: edges.clone(),
                        black: *black,
                        inputs: inputs.clone(),
                        outputs: outputs.clone(),
                    };
                    let report =
                        verify_gadget(&cand.gadget(String::new()), expected).expect("arity matches by construction");
                    if !report.matches_function() {
                        continue;
                    }
                    if report.passes() {
                        hits.push((true, cand.canonical(&perms)));
                    } else if !report.propagates_on_true_rows() {
                        hits.push((false, cand.canonical(&perms)));
                    }
                }
                (count, hits)
            })
            .collect();
        for (count, hits) in results {
            examined += count;
            found.extend(hits);
        }
    }
    found.sort_by(|(_, a), (_, b)| (a.n, a.edges.len(), a).cmp(&(b.n, b.edges.len(), b)));
    found.dedup();

    let mut gadgets = Vec::new();
    let mut non_propagating = Vec::new();
    for (propagates, cand) in found {
        let tag = format!("{}-{}v{}e", expected.name, cand.n, cand.edges.len());
        if propagates {
            let name = format!("{tag}-{}", gadgets.len());
            let mut g = cand.gadget(name);
            measure_latencies(&mut g, expected);
            gadgets.push(g);
        } else {
            let name = format!("{tag}-nonprop-{}", non_propagating.len());
            non_propagating.push(cand.gadget(name));
        }
    }
    Ok(GadgetSearch {
        gadgets,
        non_propagating,
        candidates_examined: examined,
    })
}

fn measure_latencies(g: &mut Gadget, f: &BooleanFunction) {
    let report = verify_gadget(g, f).expect("verified before");
    let lat: Vec<u32> = report
        .measured_latencies()
        .into_iter()
        .map(|l| l.unwrap_or(0))
        .collect();
    g.latency = lat.iter().copied().max().unwrap_or(0);
    g.output_latencies = lat;
}

/// Ordered inputs, ordered outputs, and a helper coloring. Inputs always
/// start white; an output may start black only if it is constant true.
fn port_assignments(n: usize, f: &BooleanFunction) -> Vec<(Vec<usize>, Vec<usize>, u32)> {
    let mut out = Vec::new();
    for inputs in arrangements(n, f.arity, 0) {
        let input_mask = inputs.iter().fold(0u32, |m, &i| m | 1 << i);
        for outputs in arrangements(n, f.outputs, input_mask) {
            let fixed_white = outputs
                .iter()
                .enumerate()
                .filter(|&(j, _)| !f.output_is_constant_true(j))
                .fold(input_mask, |m, (_, &o)| m | 1 << o);
            for black in 0u32..1 << n {
                if black & fixed_white == 0 {
                    out.push((inputs.clone(), outputs.clone(), black));
                }
            }
        }
    }
    out
}

/// Ordered selections of `k` distinct vertices from `0..n` avoiding `taken`.
fn arrangements(n: usize, k: usize, taken: u32) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for v in 0..n {
        if taken >> v & 1 == 0 {
            for mut rest in arrangements(n, k - 1, taken | 1 << v) {
                rest.insert(0, v);
                out.push(rest);
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    arrangements(n, n, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_and_is_the_triangle() {
        let s = search_minimal_gadget(&BooleanFunction::and2(), 4).unwrap();
        let g = s.minimal().unwrap();
        assert_eq!((g.fragment.len(), g.fragment.edge_count()), (3, 3));
        assert!(g.helpers().is_empty());
        assert!(s.gadgets.iter().all(|g| g.fragment.len() >= 3));
    }

    #[test]
    fn smallest_propagating_or_has_four_vertices_and_edges() {
        let s = search_minimal_gadget(&BooleanFunction::or2(), 4).unwrap();
        let g = s.minimal().unwrap();
        assert_eq!((g.fragment.len(), g.fragment.edge_count()), (4, 4));
        assert!(s.non_propagating.iter().any(|g| g.fragment.len() == 3));
    }

    #[test]
    fn constant_true_is_a_single_precolored_vertex() {
        let s = search_minimal_gadget(&BooleanFunction::constant(true), 1).unwrap();
        let g = s.minimal().unwrap();
        assert_eq!(g.fragment.len(), 1);
        assert_eq!(g.helpers(), vec![VertexId(0)]);
    }

    #[test]
    fn limit_guard() {
        assert!(matches!(
            search_minimal_gadget(&BooleanFunction::and2(), 7),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn arrangement_counts() {
        assert_eq!(arrangements(4, 2, 0).len(), 12);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(arrangements(4, 1, 0b0011).len(), 2);
    }
}
