//! Gate gadgets: small pre-colored graph fragments with port vertices.
//!
//! Every constructor here is pinned by regression tests against its truth
//! table, its declared latencies and its back-forcing behavior in the
//! standard harness (see [`harness`]).

pub mod harness;
pub mod search;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{to_canonical_json, Color, ColoredGraph, GraphJson, VertexId};

pub use harness::{mount, transmits_back_force, verify_gadget, Mounted, TruthRow, TruthTableReport};
pub use search::{search_minimal_gadget, GadgetSearch, MAX_SEARCH_VERTICES};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub name: String,
    pub fragment: ColoredGraph,
    pub input_ports: Vec<VertexId>,
    pub output_ports: Vec<VertexId>,
    /// Steps from all inputs set to all outputs black on the all-true input.
    pub latency: u32,
    /// Per-output offsets on the all-true input; `latency` is their maximum.
    pub output_latencies: Vec<u32>,
}

impl Gadget {
    fn build(
        name: &str,
        vertices: &[(&str, Color)],
        edges: &[(&str, &str)],
        inputs: &[&str],
        outputs: &[(&str, u32)],
    ) -> Gadget {
        let fragment = ColoredGraph::from_parts(vertices, edges).expect("static gadget");
        let port = |id: &str| fragment.vertex(id).expect("declared port");
        let output_latencies: Vec<u32> = outputs.iter().map(|(_, l)| *l).collect();
        Gadget {
            name: name.to_owned(),
            input_ports: inputs.iter().map(|id| port(id)).collect(),
            output_ports: outputs.iter().map(|(id, _)| port(id)).collect(),
            latency: output_latencies.iter().copied().max().unwrap_or(0),
            output_latencies,
            fragment,
        }
    }

    /// Pre-colored (black) vertices.
    pub fn helpers(&self) -> Vec<VertexId> {
        self.fragment
            .vertices()
            .filter(|&v| self.fragment.is_black(v))
            .collect()
    }

    pub fn arity(&self) -> usize {
        self.input_ports.len()
    }

    pub fn is_port(&self, v: VertexId) -> bool {
        self.input_ports.contains(&v) || self.output_ports.contains(&v)
    }

    /// Checks the structural port contract.
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for &p in self.input_ports.iter().chain(&self.output_ports) {
            if p.0 >= self.fragment.len() {
                return Err(Error::InvalidGraph(format!("port {p} outside fragment")));
            }
            if !seen.insert(p) {
                return Err(Error::InvalidGraph(format!(
                    "port `{}` listed twice",
                    self.fragment.name(p)
                )));
            }
        }
        // Constant outputs of zero-input gadgets are the one place a port may start black.
        let outputs: &[VertexId] = if self.input_ports.is_empty() {
            &[]
        } else {
            &self.output_ports
        };
        for &p in self.input_ports.iter().chain(outputs) {
            if self.fragment.is_black(p) {
                return Err(Error::InvalidGraph(format!(
                    "port `{}` must start white",
                    self.fragment.name(p)
                )));
            }
        }
        if self.output_latencies.len() != self.output_ports.len() {
            return Err(Error::InvalidGraph("one latency per output port".into()));
        }
        Ok(())
    }

    pub fn to_json_model(&self) -> GadgetJson {
        let names = |ports: &[VertexId]| ports.iter().map(|&p| self.fragment.name(p).to_owned()).collect();
        GadgetJson {
            name: self.name.clone(),
            graph: self.fragment.to_json_model(),
            input_ports: names(&self.input_ports),
            output_ports: names(&self.output_ports),
            latency: self.latency,
            output_latencies: self.output_latencies.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(&self.to_json_model())
    }

    pub fn from_json(text: &str) -> Result<Gadget> {
        let model: GadgetJson = serde_json::from_str(text)?;
        let fragment = ColoredGraph::from_json_model(&model.graph)?;
        let ports = |ids: &[String]| -> Result<Vec<VertexId>> { ids.iter().map(|id| fragment.require(id)).collect() };
        let output_ports = ports(&model.output_ports)?;
        let output_latencies = if model.output_latencies.is_empty() {
            vec![model.latency; output_ports.len()]
        } else {
            model.output_latencies.clone()
        };
        let g = Gadget {
            name: model.name.clone(),
            input_ports: ports(&model.input_ports)?,
            output_ports,
            latency: model.latency,
            output_latencies,
            fragment,
        };
        g.validate()?;
        Ok(g)
    }
}

/// Graph JSON extended with port lists and latency.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetJson {
    pub name: String,
    #[serde(flatten)]
    pub graph: GraphJson,
    pub input_ports: Vec<String>,
    pub output_ports: Vec<String>,
    pub latency: u32,
    #[serde(default)]
    pub output_latencies: Vec<u32>,
}

use Color::{Black, White};

/// Triangle on {1,2,3}; inputs 1 and 2, output 3.
pub fn and_gadget() -> Gadget {
    Gadget::build(
        "AND",
        &[("1", White), ("2", White), ("3", White)],
        &[("1", "2"), ("1", "3"), ("2", "3")],
        &["1", "2"],
        &[("3", 1)],
    )
}

/// 4-cycle 1-3-2-4 with helper 3 pre-colored; inputs 1 and 2, output 4.
pub fn or_gadget() -> Gadget {
    Gadget::build(
        "OR",
        &[("1", White), ("2", White), ("3", Black), ("4", White)],
        &[("1", "3"), ("1", "4"), ("2", "3"), ("2", "4")],
        &["1", "2"],
        &[("4", 1)],
    )
}

/// Fan-out of one signal: `a`-`o1`, `b`-`o1`, `b`-`o2` with `b` pre-colored.
/// `o2` lags `o1` by one step.
pub fn copy_gadget() -> Gadget {
    Gadget::build(
        "COPY",
        &[("a", White), ("b", Black), ("o1", White), ("o2", White)],
        &[("a", "o1"), ("b", "o1"), ("b", "o2")],
        &["a"],
        &[("o1", 1), ("o2", 2)],
    )
}

/// Delay line whose output turns black exactly `k` steps after its input.
///
/// Panics when `k == 0`.
pub fn wire_gadget(k: u32) -> Gadget {
    assert!(k >= 1, "wire delay must be positive");
    let inner: Vec<String> = (1..k).map(|i| format!("w{i}")).collect();
    let mut names: Vec<&str> = vec!["in"];
    names.extend(inner.iter().map(String::as_str));
    names.push("out");
    let vertices: Vec<(&str, Color)> = names.iter().map(|n| (*n, White)).collect();
    let edges: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
    Gadget::build(&format!("WIRE({k})"), &vertices, &edges, &["in"], &[("out", k)])
}

/// One-way gadget: forward forcing passes in two steps, while a black output
/// with a white input stalls at `x` because `x` and `b` both see the white
/// pair {`i`, `t`}.
pub fn filter_gadget() -> Gadget {
    Gadget::build(
        "FILTER",
        &[("i", White), ("b", Black), ("t", White), ("x", White), ("o", White)],
        &[("i", "x"), ("i", "b"), ("b", "t"), ("x", "t"), ("x", "o")],
        &["i"],
        &[("o", 2)],
    )
}

/// Three-vertex OR (1-3-2, output 3, no helper). Correct truth table, but a
/// single true input stalls at the output instead of moving on.
pub fn or3_nonpropagating() -> Gadget {
    Gadget::build(
        "OR3",
        &[("1", White), ("2", White), ("3", White)],
        &[("1", "3"), ("2", "3")],
        &["1", "2"],
        &[("3", 1)],
    )
}

/// Looks up a shipped gadget by CLI name.
pub fn by_name(name: &str, delay: u32) -> Option<Gadget> {
    match name.to_ascii_lowercase().as_str() {
        "and" => Some(and_gadget()),
        "or" => Some(or_gadget()),
        "copy" => Some(copy_gadget()),
        "wire" => (delay >= 1).then(|| wire_gadget(delay)),
        "filter" => Some(filter_gadget()),
        "or3" => Some(or3_nonpropagating()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_gadgets_are_well_formed() {
        for g in [
            and_gadget(),
            or_gadget(),
            copy_gadget(),
            wire_gadget(1),
            wire_gadget(4),
            filter_gadget(),
            or3_nonpropagating(),
        ] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn shapes() {
        let and = and_gadget();
        assert_eq!((and.fragment.len(), and.fragment.edge_count()), (3, 3));
        assert!(and.helpers().is_empty());
        let or = or_gadget();
        assert_eq!((or.fragment.len(), or.fragment.edge_count()), (4, 4));
        assert_eq!(or.helpers(), vec![or.fragment.vertex("3").unwrap()]);
        let w = wire_gadget(3);
        assert_eq!((w.fragment.len(), w.fragment.edge_count()), (4, 3));
        assert_eq!(wire_gadget(1).fragment.len(), 2);
    }

    #[test]
    fn json_round_trip() {
        for g in [copy_gadget(), filter_gadget(), wire_gadget(2)] {
            let text = g.to_json().unwrap();
            assert_eq!(Gadget::from_json(&text).unwrap(), g);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert!(v["vertices"].is_array() && v["edges"].is_array());
            assert!(v["input_ports"].is_array() && v["latency"].is_u64());
        }
    }

    #[test]
    #[should_panic]
    fn zero_length_wire_panics() {
        wire_gadget(0);
    }
}
