//! Graphviz output. Inputs are boxes, outputs double circles, everything else
//! a circle; vertices that start black are filled.

use std::fmt::Write;

use crate::circuit::CompiledCircuit;
use crate::gadget::Gadget;
use crate::graph::{ColoredGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Input,
    Output,
    Helper,
    Internal,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_to_dot(name: &str, graph: &ColoredGraph, role: impl Fn(VertexId) -> Role) -> String {
    let mut out = format!("graph {} {{\n  node [shape=circle];\n", quote(name));
    for v in graph.vertices() {
        let shape = match role(v) {
            Role::Input => "box",
            Role::Output => "doublecircle",
            Role::Helper | Role::Internal => "circle",
        };
        let fill = if graph.is_black(v) {
            ", style=filled, fillcolor=black, fontcolor=white"
        } else {
            ""
        };
        writeln!(out, "  {} [shape={shape}{fill}];", quote(graph.name(v))).unwrap();
    }
    for (a, b) in graph.edges() {
        writeln!(out, "  {} -- {};", quote(graph.name(a)), quote(graph.name(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn gadget_to_dot(g: &Gadget) -> String {
    graph_to_dot(&g.name, &g.fragment, |v| {
        if g.input_ports.contains(&v) {
            Role::Input
        } else if g.output_ports.contains(&v) {
            Role::Output
        } else if g.fragment.is_black(v) {
            Role::Helper
        } else {
            Role::Internal
        }
    })
}

pub fn circuit_to_dot(c: &CompiledCircuit) -> String {
    let inputs = c.input_vertices();
    let outputs: Vec<VertexId> = c.outputs.iter().flat_map(|t| t.vertices()).collect();
    graph_to_dot("circuit", &c.graph, |v| {
        if inputs.contains(&v) {
            Role::Input
        } else if outputs.contains(&v) {
            Role::Output
        } else if c.graph.is_black(v) {
            Role::Helper
        } else {
            Role::Internal
        }
    })
}
