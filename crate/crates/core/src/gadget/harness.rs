//! The standard verification harness.
//!
//! A gadget is never judged in isolation because its ports behave according
//! to their full neighborhoods. Each input port gets a two-vertex upstream
//! stub (port - stub - companion): all black when the input is 1, all white
//! when it is 0. Each output port gets one white pendant sink standing in for
//! the next gate. Inputs are set at step 1.

use serde::Serialize;

use super::Gadget;
use crate::boolfn::BooleanFunction;
use crate::engine::{run_from_step, run_to_fixpoint, ForcingTrace, INITIAL_STEP};
use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, VertexId};

/// A gadget mounted in the harness. Fragment vertex `i` keeps index `i`.
#[derive(Debug, Clone)]
pub struct Mounted {
    pub graph: ColoredGraph,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
    pub sinks: Vec<VertexId>,
    pub stubs: Vec<[VertexId; 2]>,
}

pub fn mount(g: &Gadget, bits: &[bool]) -> Result<Mounted> {
    if bits.len() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: bits.len(),
        });
    }
    let mut graph = g.fragment.clone();
    let mut stubs = Vec::with_capacity(bits.len());
    for (i, (&port, &bit)) in g.input_ports.iter().zip(bits).enumerate() {
        let color = Color::from_bit(bit);
        graph.set_color(port, color);
        let stub = graph.add_vertex(format!("~stub{i}"), color)?;
        let companion = graph.add_vertex(format!("~stub{i}c"), color)?;
        graph.add_edge(port, stub)?;
        graph.add_edge(stub, companion)?;
        stubs.push([stub, companion]);
    }
    let mut sinks = Vec::with_capacity(g.output_ports.len());
    for (j, &port) in g.output_ports.iter().enumerate() {
        let sink = graph.add_vertex(format!("~sink{j}"), Color::White)?;
        graph.add_edge(port, sink)?;
        sinks.push(sink);
    }
    Ok(Mounted {
        graph,
        inputs: g.input_ports.clone(),
        outputs: g.output_ports.clone(),
        sinks,
        stubs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthRow {
    pub inputs: Vec<bool>,
    pub expected: Vec<bool>,
    pub outputs: Vec<bool>,
    /// Step at which the last black output turned black.
    pub ready_step: Option<u32>,
    /// Per-output step at which it turned black.
    pub output_steps: Vec<Option<u32>>,
    /// Some output is black and every black output forced its sink.
    pub propagates_forward: bool,
    /// An input port fed a 0 ended black.
    pub disturbs_inputs: bool,
}

impl TruthRow {
    pub fn matches(&self) -> bool {
        self.outputs == self.expected
    }

    pub fn any_true(&self) -> bool {
        self.expected.iter().any(|&b| b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruthTableReport {
    pub gadget: String,
    pub function: String,
    pub arity: usize,
    pub rows: Vec<TruthRow>,
}

impl TruthTableReport {
    pub fn matches_function(&self) -> bool {
        self.rows.iter().all(TruthRow::matches)
    }

    pub fn propagates_on_true_rows(&self) -> bool {
        self.rows.iter().filter(|r| r.any_true()).all(|r| r.propagates_forward)
    }

    /// Rows whose outputs are all 0 leave every 0-fed input port white, so an
    /// idle gate never pushes color into the gates feeding it.
    pub fn quiescent_on_false_rows(&self) -> bool {
        self.rows.iter().filter(|r| !r.any_true()).all(|r| !r.disturbs_inputs)
    }

    /// Every row with a true output is ready at the same step.
    pub fn uniform_latency(&self) -> bool {
        let mut steps = self.rows.iter().filter(|r| r.any_true()).map(|r| r.ready_step);
        match steps.next() {
            Some(first) => steps.all(|s| s == first),
            None => true,
        }
    }

    /// Correct on every row and usable mid-circuit: propagating, quiet when
    /// idle, and synchronous.
    pub fn passes(&self) -> bool {
        self.matches_function()
            && self.propagates_on_true_rows()
            && self.quiescent_on_false_rows()
            && self.uniform_latency()
    }

    /// Output offsets relative to the input step on the all-true row.
    pub fn measured_latencies(&self) -> Vec<Option<u32>> {
        let row = self.rows.last().expect("at least one row");
        row.output_steps.iter().map(|s| s.map(|s| s - INITIAL_STEP)).collect()
    }
}

/// Runs every input row of `g` in the harness and compares with `expected`.
pub fn verify_gadget(g: &Gadget, expected: &BooleanFunction) -> Result<TruthTableReport> {
    if expected.arity != g.arity() {
        return Err(Error::ArityMismatch {
            expected: expected.arity,
            found: g.arity(),
        });
    }
    if expected.outputs != g.output_ports.len() {
        return Err(Error::ArityMismatch {
            expected: expected.outputs,
            found: g.output_ports.len(),
        });
    }
    let rows = expected
        .rows()
        .map(|(bits, want)| {
            let mounted = mount(g, &bits)?;
            let trace = run_to_fixpoint(&mounted.graph);
            Ok(row_from_trace(&mounted, &trace, bits, want.to_vec()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TruthTableReport {
        gadget: g.name.clone(),
        function: expected.name.clone(),
        arity: g.arity(),
        rows,
    })
}

fn row_from_trace(m: &Mounted, trace: &ForcingTrace, inputs: Vec<bool>, expected: Vec<bool>) -> TruthRow {
    let outputs: Vec<bool> = m.outputs.iter().map(|&o| trace.is_black(o)).collect();
    let output_steps: Vec<Option<u32>> = m.outputs.iter().map(|&o| trace.black_step(o)).collect();
    let ready_step = output_steps.iter().flatten().copied().max();
    let propagates_forward = outputs.iter().any(|&b| b)
        && m.outputs
            .iter()
            .zip(&m.sinks)
            .all(|(&o, &s)| !trace.is_black(o) || trace.is_black(s));
    let disturbs_inputs = m.inputs.iter().zip(&inputs).any(|(&p, &bit)| !bit && trace.is_black(p));
    TruthRow {
        inputs,
        expected,
        outputs,
        ready_step,
        output_steps,
        propagates_forward,
        disturbs_inputs,
    }
}

/// Mounts `g` with `bits`, runs to the fixpoint, then blackens every output
/// port together with its sink (a downstream gate that has back-forced the
/// output) and resumes. True iff an input port that was white turns black.
pub fn transmits_back_force(g: &Gadget, bits: &[bool]) -> Result<bool> {
    let m = mount(g, bits)?;
    let settled = run_to_fixpoint(&m.graph);
    let mut graph = m.graph.clone();
    for v in graph.vertices().collect::<Vec<_>>() {
        graph.set_color(v, settled.final_coloring[v.0]);
    }
    let white_inputs: Vec<VertexId> = m.inputs.iter().copied().filter(|&p| !graph.is_black(p)).collect();
    for (&o, &s) in m.outputs.iter().zip(&m.sinks) {
        graph.set_color(o, Color::Black);
        graph.set_color(s, Color::Black);
    }
    let resumed = run_from_step(&graph, settled.last_step() + 1);
    Ok(white_inputs.iter().any(|&p| resumed.is_black(p)))
}
