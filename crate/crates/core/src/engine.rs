//! The color-change rule and its fixpoint.
//!
//! A black vertex with exactly one white neighbor forces that neighbor black.
//! [`run_to_fixpoint`] applies every applicable force of a round
//! simultaneously; the initial coloring is step 1, so the first forced
//! vertices carry step 2. [`run_sequential`] applies one force at a time in a
//! seeded random order and exists to cross-check confluence.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{Color, ColoredGraph, VertexId, VertexSet};

/// Internal step at which the initial coloring is observed.
pub const INITIAL_STEP: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ForceEvent {
    pub step: u32,
    pub forcer: VertexId,
    pub forced: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepRecord {
    pub step: u32,
    pub events: Vec<ForceEvent>,
}

/// Full record of a synchronous run: every round's events plus the fixpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcingTrace {
    pub initial_black: VertexSet,
    pub steps: Vec<StepRecord>,
    pub final_coloring: Vec<Color>,
    /// Number of non-empty rounds.
    pub fixpoint_step: u32,
    /// Step at which the starting coloring is observed.
    pub start_step: u32,
    black_at: Vec<Option<u32>>,
}

impl ForcingTrace {
    /// Step at which `v` was black for the first time, if ever.
    pub fn black_step(&self, v: VertexId) -> Option<u32> {
        self.black_at[v.0]
    }

    pub fn is_black(&self, v: VertexId) -> bool {
        self.final_coloring[v.0].is_black()
    }

    pub fn final_black(&self) -> VertexSet {
        self.final_coloring
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_black())
            .map(|(i, _)| VertexId(i))
            .collect()
    }

    pub fn events(&self) -> impl Iterator<Item = &ForceEvent> {
        self.steps.iter().flat_map(|s| s.events.iter())
    }

    pub fn event_count(&self) -> usize {
        self.steps.iter().map(|s| s.events.len()).sum()
    }

    /// Step of the last round, or the starting step when nothing was forced.
    pub fn last_step(&self) -> u32 {
        self.steps.last().map_or(self.start_step, |s| s.step)
    }

    pub fn to_json_model(&self, graph: &ColoredGraph) -> TraceJson {
        TraceJson {
            steps: self
                .steps
                .iter()
                .map(|s| StepJson {
                    step: s.step,
                    events: s
                        .events
                        .iter()
                        .map(|e| EventJson {
                            forcer: graph.name(e.forcer).to_owned(),
                            forced: graph.name(e.forced).to_owned(),
                        })
                        .collect(),
                })
                .collect(),
            final_black: self
                .final_black()
                .into_iter()
                .map(|v| graph.name(v).to_owned())
                .collect(),
            fixpoint_step: self.fixpoint_step,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceJson {
    pub steps: Vec<StepJson>,
    pub final_black: Vec<String>,
    pub fixpoint_step: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepJson {
    pub step: u32,
    pub events: Vec<EventJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventJson {
    pub forcer: String,
    pub forced: String,
}

/// All `(forcer, forced)` pairs applicable under the current coloring,
/// ordered by forcer.
pub fn forcing_candidates(graph: &ColoredGraph) -> Vec<(VertexId, VertexId)> {
    let mut out = Vec::new();
    for u in graph.vertices() {
        if !graph.is_black(u) {
            continue;
        }
        let mut white = graph.neighbors(u).iter().filter(|&&w| !graph.is_black(w));
        if let (Some(&v), None) = (white.next(), white.next()) {
            out.push((u, v));
        }
    }
    out
}

/// Applies all candidates of `graph` at once and labels the events `step`.
pub fn step_synchronous(graph: &ColoredGraph, step: u32) -> (ColoredGraph, Vec<ForceEvent>) {
    let mut next = graph.clone();
    let events = apply_round(&mut next, step);
    (next, events)
}

fn apply_round(graph: &mut ColoredGraph, step: u32) -> Vec<ForceEvent> {
    let events: Vec<ForceEvent> = forcing_candidates(graph)
        .into_iter()
        .map(|(forcer, forced)| ForceEvent { step, forcer, forced })
        .collect();
    for e in &events {
        graph.set_color(e.forced, Color::Black);
    }
    events
}

/// Runs synchronous rounds until nothing changes. Initial blacks are step 1.
pub fn run_to_fixpoint(graph: &ColoredGraph) -> ForcingTrace {
    run_from_step(graph, INITIAL_STEP)
}

/// Like [`run_to_fixpoint`] but treats the given coloring as observed at
/// `start_step`; used to resume a run after an external recoloring.
pub fn run_from_step(graph: &ColoredGraph, start_step: u32) -> ForcingTrace {
    let mut g = graph.clone();
    let initial_black = g.black_set();
    let mut black_at: Vec<Option<u32>> = g.colors().iter().map(|c| c.is_black().then_some(start_step)).collect();
    let mut steps = Vec::new();
    let mut step = start_step;
    loop {
        step += 1;
        let events = apply_round(&mut g, step);
        if events.is_empty() {
            break;
        }
        for e in &events {
            black_at[e.forced.0].get_or_insert(step);
        }
        steps.push(StepRecord { step, events });
    }
    ForcingTrace {
        initial_black,
        fixpoint_step: steps.len() as u32,
        steps,
        final_coloring: g.colors().to_vec(),
        start_step,
        black_at,
    }
}

/// Applies one pseudo-randomly chosen force at a time until none applies.
pub fn run_sequential(graph: &ColoredGraph, schedule_seed: u64) -> Vec<Color> {
    let mut rng = ChaCha8Rng::seed_from_u64(schedule_seed);
    let mut g = graph.clone();
    loop {
        let candidates = forcing_candidates(&g);
        match candidates.choose(&mut rng) {
            Some(&(_, v)) => g.set_color(v, Color::Black),
            None => break,
        }
    }
    g.colors().to_vec()
}

/// True iff coloring exactly `z` black forces the whole graph.
pub fn is_zero_forcing_set(graph: &ColoredGraph, z: &VertexSet) -> bool {
    let start = graph.recolored(z);
    run_to_fixpoint(&start).final_coloring.iter().all(|c| c.is_black())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Color::{Black, White};

    fn triangle(colors: [Color; 3]) -> ColoredGraph {
        ColoredGraph::from_parts(
            &[("1", colors[0]), ("2", colors[1]), ("3", colors[2])],
            &[("1", "2"), ("1", "3"), ("2", "3")],
        )
        .unwrap()
    }

    fn or_fragment(c1: Color, c2: Color) -> ColoredGraph {
        ColoredGraph::from_parts(
            &[("1", c1), ("2", c2), ("3", Black), ("4", White)],
            &[("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")],
        )
        .unwrap()
    }

    fn names(g: &ColoredGraph, pairs: &[(VertexId, VertexId)]) -> Vec<(String, String)> {
        pairs
            .iter()
            .map(|&(a, b)| (g.name(a).to_owned(), g.name(b).to_owned()))
            .collect()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_owned(), b.to_owned())
    }

    #[test]
    fn candidates_on_and_gadget() {
        let g = triangle([Black, Black, White]);
        assert_eq!(names(&g, &forcing_candidates(&g)), vec![pair("1", "3"), pair("2", "3")]);
        let one = triangle([Black, White, White]);
        assert!(forcing_candidates(&one).is_empty());
        let all = triangle([Black, Black, Black]);
        assert!(forcing_candidates(&all).is_empty());
    }

    #[test]
    fn or_gadget_round_forces_output_and_idle_input() {
        let g = or_fragment(Black, White);
        let (next, events) = step_synchronous(&g, 2);
        let pairs: Vec<_> = events.iter().map(|e| (e.forcer, e.forced)).collect();
        assert_eq!(names(&g, &pairs), vec![pair("1", "4"), pair("3", "2")]);
        assert!(next.all_black());
    }

    #[test]
    fn double_force_is_two_events_one_change() {
        let g = triangle([Black, Black, White]);
        let (next, events) = step_synchronous(&g, 2);
        assert_eq!(events.len(), 2);
        assert_eq!(next.black_count(), 3);
    }

    #[test]
    fn path_propagates_one_vertex_per_round() {
        let g =
            ColoredGraph::from_parts(&[("a", Black), ("b", White), ("c", White)], &[("a", "b"), ("b", "c")]).unwrap();
        let (g2, e1) = step_synchronous(&g, 2);
        assert_eq!(e1.len(), 1);
        assert_eq!(g2.name(e1[0].forced), "b");
        let (g3, e2) = step_synchronous(&g2, 3);
        assert_eq!(g3.name(e2[0].forced), "c");
        let all_white = g.recolored(&VertexSet::new());
        let (same, none) = step_synchronous(&all_white, 2);
        assert_eq!(same, all_white);
        assert!(none.is_empty());
    }

    #[test]
    fn fixpoint_step_numbering() {
        let trace = run_to_fixpoint(&triangle([Black, Black, White]));
        assert_eq!(trace.fixpoint_step, 1);
        assert_eq!(trace.steps[0].step, 2);
        assert_eq!(trace.black_step(VertexId(2)), Some(2));
        assert_eq!(trace.black_step(VertexId(0)), Some(1));
        assert!(trace.final_coloring.iter().all(|c| c.is_black()));

        let idle = run_to_fixpoint(&or_fragment(White, White));
        assert_eq!(idle.fixpoint_step, 0);
        assert_eq!(idle.final_black().len(), 1);

        let k4 = ColoredGraph::from_parts(
            &[("a", Black), ("b", White), ("c", White), ("d", White)],
            &[("a", "b"), ("a", "c"), ("a", "d"), ("b", "c"), ("b", "d"), ("c", "d")],
        )
        .unwrap();
        let t = run_to_fixpoint(&k4);
        assert!(t.steps.is_empty());
        assert_eq!(t.final_black().len(), 1);
    }

    #[test]
    fn sequential_agrees_on_small_cases() {
        let g = triangle([Black, Black, White]);
        assert_eq!(run_sequential(&g, 0), run_sequential(&g, 1));
        assert_eq!(run_sequential(&g, 0), run_to_fixpoint(&g).final_coloring);
        let all = triangle([Black, Black, Black]);
        assert_eq!(run_sequential(&all, 7), all.colors().to_vec());
    }

    #[test]
    fn zero_forcing_sets_of_gadgets() {
        let tri = triangle([White, White, White]);
        let set = |ids: &[usize]| ids.iter().map(|&i| VertexId(i)).collect::<VertexSet>();
        assert!(is_zero_forcing_set(&tri, &set(&[0, 1])));
        assert!(!is_zero_forcing_set(&tri, &set(&[0])));
        let or = or_fragment(White, White);
        assert!(is_zero_forcing_set(&or, &set(&[0, 2])));
        assert!(is_zero_forcing_set(&or, &set(&[1, 2])));
        assert!(is_zero_forcing_set(&or, &set(&[0, 1, 2])));
    }

    #[test]
    fn trace_json_shape() {
        let g = triangle([Black, Black, White]);
        let t = run_to_fixpoint(&g);
        let json = serde_json::to_value(t.to_json_model(&g)).unwrap();
        assert_eq!(json["fixpoint_step"], 1);
        assert_eq!(json["steps"][0]["step"], 2);
        assert_eq!(json["steps"][0]["events"][0]["forcer"], "1");
        assert_eq!(json["final_black"].as_array().unwrap().len(), 3);
    }
}
