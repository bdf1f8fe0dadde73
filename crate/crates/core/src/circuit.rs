//! Gadget circuits glued from a netlist.
//!
//! Every net becomes a single vertex: the driver's output port and the load's
//! input port are identified, so the merged vertex carries the neighborhoods
//! of both gadgets. Gadget interiors are named `g{id}/{local}`, primary inputs
//! keep their net names (`x1`, or `x1:0` / `x1:1` for rails).
//!
//! For layer attribution a merged vertex belongs to the instance that drives
//! it, and a primary input vertex to the instance that reads it (layer 0 when
//! it feeds a primary output directly). With this convention a force from a
//! gadget into the output port of an earlier gadget is a backward event.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::formula::{parse_formula, Formula, Mode};
use crate::graph::{to_canonical_json, Color, ColoredGraph, GraphJson, VertexId};
use crate::netlist::{
    insert_delays, lower_dual_rail, lower_monotone, splice_filters, Driver, FilterPolicy, GateKind, Load, Netlist,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions {
    pub balance_delays: bool,
    /// Splice a FILTER into every gate-to-gate net.
    pub insert_filters: bool,
    /// Splice a FILTER between each COPY output and the gate it feeds. Without
    /// it, a back-forced COPY output can blacken the COPY input and with it
    /// every other branch of the fan-out.
    pub guard_fanout: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            balance_delays: true,
            insert_filters: false,
            guard_fanout: true,
        }
    }
}

/// A logical bit as seen in the graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Terminal {
    Single(VertexId),
    Rails { zero: VertexId, one: VertexId },
}

impl Terminal {
    pub fn vertices(self) -> Vec<VertexId> {
        match self {
            Terminal::Single(v) => vec![v],
            Terminal::Rails { zero, one } => vec![zero, one],
        }
    }

    /// Logical value under `black`: the vertex itself, or the one rail.
    pub fn read(self, black: impl Fn(VertexId) -> bool) -> bool {
        match self {
            Terminal::Single(v) => black(v),
            Terminal::Rails { one, .. } => black(one),
        }
    }

    /// Single terminals are trivially exclusive; rail pairs need exactly one black rail.
    pub fn exclusive(self, black: impl Fn(VertexId) -> bool) -> bool {
        match self {
            Terminal::Single(_) => true,
            Terminal::Rails { zero, one } => black(zero) != black(one),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub gate: usize,
    pub kind: GateKind,
    pub layer: u32,
    /// All vertices of the gadget copy, in gadget-local order.
    pub vertices: Vec<VertexId>,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
    /// Logical variables this instance depends on.
    pub cone: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledCircuit {
    pub graph: ColoredGraph,
    pub mode: Mode,
    pub variables: Vec<String>,
    pub inputs: Vec<Terminal>,
    pub outputs: Vec<Terminal>,
    pub instances: Vec<Instance>,
    /// Owning instance of every vertex, per the attribution rule above.
    pub owner: Vec<Option<usize>>,
    pub layer_of: Vec<u32>,
    pub expected_output_step: Option<u32>,
    /// Source formulas, one per output, when compiled from text.
    pub formulas: Vec<String>,
}

pub fn compile_formula(text: &str, mode: Mode, options: CompileOptions) -> Result<CompiledCircuit> {
    let ast = parse_formula(text, mode)?;
    match mode {
        Mode::Monotone => {
            let mut c = compile_monotone(&crate::netlist::lower_to_netlist(&ast)?, options)?;
            c.formulas = vec![ast.to_string()];
            Ok(c)
        }
        Mode::DualRail => compile_dual_rail(&ast, options),
    }
}

pub fn compile_monotone(netlist: &Netlist, options: CompileOptions) -> Result<CompiledCircuit> {
    netlist.validate()?;
    let mut n = netlist.clone();
    if options.insert_filters {
        n = splice_filters(&n, FilterPolicy::AllInterGate)?;
    } else if options.guard_fanout {
        n = splice_filters(&n, FilterPolicy::FanOutGuard)?;
    }
    if options.balance_delays {
        n = insert_delays(&n)?;
    }
    let expected = options.balance_delays.then(|| 1 + n.max_output_arrival());
    glue(&n, expected)
}

pub fn compile_dual_rail(ast: &Formula, options: CompileOptions) -> Result<CompiledCircuit> {
    compile_dual_rail_outputs(std::slice::from_ref(ast), &ast.variables(), options)
}

pub fn compile_dual_rail_outputs(
    formulas: &[Formula],
    variables: &[String],
    options: CompileOptions,
) -> Result<CompiledCircuit> {
    let mut c = compile_monotone(&lower_dual_rail(formulas, variables)?, options)?;
    c.formulas = formulas.iter().map(ToString::to_string).collect();
    Ok(c)
}

pub fn compile_monotone_outputs(
    formulas: &[Formula],
    variables: &[String],
    options: CompileOptions,
) -> Result<CompiledCircuit> {
    let mut c = compile_monotone(&lower_monotone(formulas, variables)?, options)?;
    c.formulas = formulas.iter().map(ToString::to_string).collect();
    Ok(c)
}

/// Reversible (a, b, c) -> (a, b, c XOR (a AND b)) in dual rail.
pub fn build_toffoli() -> Result<CompiledCircuit> {
    let (a, b, c) = (Formula::var("a"), Formula::var("b"), Formula::var("c"));
    let target = Formula::xor(c, Formula::and(a.clone(), b.clone()));
    let vars = ["a", "b", "c"].map(String::from);
    compile_dual_rail_outputs(&[a, b, target], &vars, CompileOptions::default())
}

fn glue(n: &Netlist, expected_output_step: Option<u32>) -> Result<CompiledCircuit> {
    let drivers = n.drivers();
    let loads = n.loads();
    let mut graph = ColoredGraph::new();
    let mut net_vertex = Vec::with_capacity(n.net_count);
    for (net, driver) in drivers.iter().enumerate() {
        let name = match *driver {
            Some(Driver::Input(i)) => n.inputs[i].0.clone(),
            Some(Driver::Gate(g, p)) => {
                let gadget = n.gates[g].kind.gadget();
                format!("g{g}/{}", gadget.fragment.name(gadget.output_ports[p]))
            }
            None => return Err(Error::InvalidNetlist(format!("net {net} has no driver"))),
        };
        net_vertex.push(graph.add_vertex(name, Color::White)?);
    }

    let mut instances = Vec::with_capacity(n.gates.len());
    let mut input_cones: Vec<BTreeSet<String>> = vec![BTreeSet::new(); n.net_count];
    let variables = n.variables();
    for (i, (_, net)) in n.inputs.iter().enumerate() {
        let var = match n.encoding {
            Mode::Monotone => &variables[i],
            Mode::DualRail => &variables[i / 2],
        };
        input_cones[*net].insert(var.clone());
    }
    for gate in &n.gates {
        let gadget = gate.kind.gadget();
        let mut local = vec![None; gadget.fragment.len()];
        for (&p, &net) in gadget.input_ports.iter().zip(&gate.inputs) {
            local[p.0] = Some(net_vertex[net]);
        }
        for (&p, &net) in gadget.output_ports.iter().zip(&gate.outputs) {
            local[p.0] = Some(net_vertex[net]);
        }
        for v in gadget.fragment.vertices() {
            if local[v.0].is_none() {
                let name = format!("g{}/{}", gate.id, gadget.fragment.name(v));
                local[v.0] = Some(graph.add_vertex(name, gadget.fragment.color(v))?);
            }
        }
        let local: Vec<VertexId> = local.into_iter().map(|v| v.expect("all mapped")).collect();
        for (a, b) in gadget.fragment.edges() {
            graph.add_edge(local[a.0], local[b.0])?;
        }
        let cone: BTreeSet<String> = gate.inputs.iter().flat_map(|&i| input_cones[i].clone()).collect();
        for &o in &gate.outputs {
            input_cones[o] = cone.clone();
        }
        instances.push(Instance {
            gate: gate.id,
            kind: gate.kind,
            layer: gate.layer,
            vertices: local.clone(),
            inputs: gadget.input_ports.iter().map(|p| local[p.0]).collect(),
            outputs: gadget.output_ports.iter().map(|p| local[p.0]).collect(),
            cone,
        });
    }

    let pair = |nets: &[usize]| -> Vec<Terminal> {
        match n.encoding {
            Mode::Monotone => nets.iter().map(|&x| Terminal::Single(net_vertex[x])).collect(),
            Mode::DualRail => nets
                .chunks(2)
                .map(|p| Terminal::Rails {
                    zero: net_vertex[p[0]],
                    one: net_vertex[p[1]],
                })
                .collect(),
        }
    };
    let input_nets: Vec<usize> = n.inputs.iter().map(|(_, x)| *x).collect();
    let inputs = pair(&input_nets);
    let outputs = pair(&n.outputs);
    let (owner, layer_of) = attribute(graph.len(), &instances);
    debug_assert!(loads.iter().enumerate().all(|(net, l)| match l {
        Some(Load::Output(_)) | None => true,
        Some(Load::Gate(g, _)) => instances[*g].inputs.contains(&net_vertex[net]),
    }));
    Ok(CompiledCircuit {
        graph,
        mode: n.encoding,
        variables,
        inputs,
        outputs,
        instances,
        owner,
        layer_of,
        expected_output_step,
        formulas: Vec::new(),
    })
}

/// Output ports belong to their driver; any other vertex to the single
/// instance containing it; vertices outside every instance get layer 0.
fn attribute(len: usize, instances: &[Instance]) -> (Vec<Option<usize>>, Vec<u32>) {
    let mut owner = vec![None; len];
    for (i, inst) in instances.iter().enumerate() {
        for &v in &inst.vertices {
            if owner[v.0].is_none() {
                owner[v.0] = Some(i);
            }
        }
    }
    for (i, inst) in instances.iter().enumerate() {
        for &v in &inst.outputs {
            owner[v.0] = Some(i);
        }
    }
    let layer_of = owner.iter().map(|o| o.map_or(0, |i| instances[i].layer)).collect();
    (owner, layer_of)
}

impl CompiledCircuit {
    pub fn arity(&self) -> usize {
        self.variables.len()
    }

    pub fn input_vertices(&self) -> Vec<VertexId> {
        self.inputs.iter().flat_map(|t| t.vertices()).collect()
    }

    pub fn output(&self) -> Terminal {
        self.outputs[0]
    }

    pub fn parsed_formulas(&self) -> Result<Vec<Formula>> {
        self.formulas.iter().map(|f| parse_formula(f, self.mode)).collect()
    }

    /// Colors the input vertices per `assignment`: in monotone mode the vertex
    /// is black iff the bit is 1; in dual rail the zero rail is black for 0
    /// and the one rail for 1.
    pub fn apply_inputs(&self, assignment: &BTreeMap<String, bool>) -> Result<ColoredGraph> {
        if let Some(unknown) = assignment.keys().find(|k| !self.variables.contains(k)) {
            return Err(Error::UnknownVariable(unknown.clone()));
        }
        let bits = self
            .variables
            .iter()
            .map(|v| {
                assignment
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::MissingVariable(v.clone()))
            })
            .collect::<Result<Vec<bool>>>()?;
        Ok(self.apply_bits(&bits))
    }

    /// Positional form of [`apply_inputs`](Self::apply_inputs).
    ///
    /// Panics when `bits.len()` differs from the number of variables.
    pub fn apply_bits(&self, bits: &[bool]) -> ColoredGraph {
        assert_eq!(bits.len(), self.inputs.len(), "one bit per input");
        let mut g = self.graph.clone();
        for (&t, &b) in self.inputs.iter().zip(bits) {
            match t {
                Terminal::Single(v) => g.set_color(v, Color::from_bit(b)),
                Terminal::Rails { zero, one } => g.set_color(if b { one } else { zero }, Color::Black),
            }
        }
        g
    }

    pub fn to_json_model(&self) -> CircuitJson {
        let name = |v: VertexId| self.graph.name(v).to_owned();
        let term = |t: Terminal| match t {
            Terminal::Single(v) => Value::String(name(v)),
            Terminal::Rails { zero, one } => serde_json::json!([name(zero), name(one)]),
        };
        CircuitJson {
            graph: self.graph.to_json_model(),
            mode: self.mode.into(),
            inputs: self
                .variables
                .iter()
                .zip(&self.inputs)
                .map(|(v, &t)| (v.clone(), term(t)))
                .collect(),
            input_order: self.variables.clone(),
            output: term(self.outputs[0]),
            outputs: (self.outputs.len() > 1).then(|| self.outputs.iter().map(|&t| term(t)).collect()),
            layers: self.graph.vertices().map(|v| (name(v), self.layer_of[v.0])).collect(),
            expected_output_step: self.expected_output_step,
            instances: self
                .instances
                .iter()
                .map(|i| InstanceJson {
                    gate: i.gate,
                    kind: i.kind.to_string(),
                    layer: i.layer,
                    vertices: i.vertices.iter().map(|&v| name(v)).collect(),
                    inputs: i.inputs.iter().map(|&v| name(v)).collect(),
                    outputs: i.outputs.iter().map(|&v| name(v)).collect(),
                    cone: i.cone.iter().cloned().collect(),
                })
                .collect(),
            formulas: self.formulas.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(&self.to_json_model())
    }

    pub fn from_json(text: &str) -> Result<CompiledCircuit> {
        let m: CircuitJson = serde_json::from_str(text)?;
        let graph = ColoredGraph::from_json_model(&m.graph)?;
        let mode: Mode = m.mode.into();
        let bad = |msg: String| Error::InvalidCircuit(msg);
        let vertex = |id: &str| graph.require(id);
        let term = |value: &Value| -> Result<Terminal> {
            match (mode, value) {
                (Mode::Monotone, Value::String(s)) => Ok(Terminal::Single(vertex(s)?)),
                (Mode::DualRail, Value::Array(a)) if a.len() == 2 => {
                    let rail = |i: usize| a[i].as_str().ok_or_else(|| bad("rail ids are strings".into()));
                    Ok(Terminal::Rails {
                        zero: vertex(rail(0)?)?,
                        one: vertex(rail(1)?)?,
                    })
                }
                _ => Err(bad(format!("terminal {value} does not fit the encoding"))),
            }
        };
        let variables = if m.input_order.is_empty() {
            m.inputs.keys().cloned().collect()
        } else {
            m.input_order.clone()
        };
        if variables.len() != m.inputs.len() || variables.iter().any(|v| !m.inputs.contains_key(v)) {
            return Err(bad("input_order must list every input once".into()));
        }
        let inputs = variables
            .iter()
            .map(|v| term(&m.inputs[v]))
            .collect::<Result<Vec<_>>>()?;
        let outputs = match &m.outputs {
            Some(list) => list.iter().map(term).collect::<Result<Vec<_>>>()?,
            None => vec![term(&m.output)?],
        };
        let mut instances = Vec::new();
        for i in &m.instances {
            let ids = |list: &[String]| list.iter().map(|s| vertex(s)).collect::<Result<Vec<_>>>();
            instances.push(Instance {
                gate: i.gate,
                kind: i.kind.parse()?,
                layer: i.layer,
                vertices: ids(&i.vertices)?,
                inputs: ids(&i.inputs)?,
                outputs: ids(&i.outputs)?,
                cone: i.cone.iter().cloned().collect(),
            });
        }
        let (owner, mut layer_of) = attribute(graph.len(), &instances);
        for (id, &layer) in &m.layers {
            layer_of[vertex(id)?.0] = layer;
        }
        for t in &inputs {
            for v in t.vertices() {
                if graph.is_black(v) {
                    return Err(bad(format!("input vertex `{}` must start white", graph.name(v))));
                }
            }
        }
        Ok(CompiledCircuit {
            graph,
            mode,
            variables,
            inputs,
            outputs,
            instances,
            owner,
            layer_of,
            expected_output_step: m.expected_output_step,
            formulas: m.formulas,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceJson {
    pub gate: usize,
    pub kind: String,
    pub layer: u32,
    pub vertices: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub cone: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    #[serde(flatten)]
    pub graph: GraphJson,
    #[serde(default)]
    pub mode: crate::netlist::EncodingJson,
    pub inputs: BTreeMap<String, Value>,
    #[serde(default)]
    pub input_order: Vec<String>,
    pub output: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<Vec<Value>>,
    #[serde(default)]
    pub layers: BTreeMap<String, u32>,
    pub expected_output_step: Option<u32>,
    #[serde(default)]
    pub instances: Vec<InstanceJson>,
    #[serde(default)]
    pub formulas: Vec<String>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::run_to_fixpoint;
    use crate::gadget::{and_gadget, or_gadget};

    fn two_party(options: CompileOptions) -> CompiledCircuit {
        compile_formula("(x1 AND x2) OR (x3 AND x4)", Mode::Monotone, options).unwrap()
    }

    fn assign(c: &CompiledCircuit, bits: &str) -> BTreeMap<String, bool> {
        c.variables
            .iter()
            .cloned()
            .zip(bits.chars().map(|b| b == '1'))
            .collect()
    }

    #[test]
    fn two_party_circuit_shape() {
        let c = two_party(CompileOptions::default());
        // Two triangles and a 4-cycle, sharing the two AND outputs with the OR inputs.
        assert_eq!(c.graph.len(), 3 + 3 + 4 - 2);
        assert_eq!(c.graph.edge_count(), 3 + 3 + 4);
        assert_eq!(c.graph.black_count(), or_gadget().helpers().len());
        assert_eq!(c.instances.len(), 3);
        assert_eq!(c.expected_output_step, Some(3));
        let x1 = c.graph.vertex("x1").unwrap();
        assert_eq!(c.layer_of[x1.0], 1);
        let merged = c.instances[0].outputs[0];
        assert!(c.instances[2].inputs.contains(&merged));
        assert_eq!(c.layer_of[merged.0], 1);
        assert_eq!(c.graph.degree(merged), 4);
    }

    #[test]
    fn inputs_1100_give_output_1() {
        let c = two_party(CompileOptions::default());
        let g = c.apply_inputs(&assign(&c, "1100")).unwrap();
        let t = run_to_fixpoint(&g);
        let out = c.outputs[0].vertices()[0];
        assert!(t.is_black(out));
        assert_eq!(t.black_step(out), c.expected_output_step);
    }

    #[test]
    fn identity_circuit() {
        let c = compile_formula("x1", Mode::Monotone, CompileOptions::default()).unwrap();
        assert_eq!(c.graph.len(), 1);
        assert_eq!(c.inputs, c.outputs);
        assert_eq!(c.expected_output_step, Some(1));
    }

    #[test]
    fn helpers_are_the_only_precolored_vertices() {
        let c = compile_formula("(a OR b) AND (a OR c)", Mode::Monotone, CompileOptions::default()).unwrap();
        let helpers: usize = c.instances.iter().map(|i| i.kind.gadget().helpers().len()).sum();
        assert_eq!(c.graph.black_count(), helpers);
        for v in c.input_vertices() {
            assert!(!c.graph.is_black(v));
        }
    }

    #[test]
    fn glued_ports_keep_both_neighborhoods() {
        let c = two_party(CompileOptions::default());
        let and = and_gadget();
        let or = or_gadget();
        let merged = c.instances[1].outputs[0];
        assert_eq!(
            c.graph.degree(merged),
            and.fragment.degree(and.output_ports[0]) + or.fragment.degree(or.input_ports[1])
        );
    }

    #[test]
    fn apply_inputs_errors_and_rails() {
        let c = two_party(CompileOptions::default());
        let mut a = assign(&c, "1000");
        a.remove("x4");
        assert_eq!(c.apply_inputs(&a), Err(Error::MissingVariable("x4".into())));
        a.insert("x4".into(), false);
        a.insert("y".into(), true);
        assert_eq!(c.apply_inputs(&a), Err(Error::UnknownVariable("y".into())));

        let d = compile_formula("NOT x", Mode::DualRail, CompileOptions::default()).unwrap();
        let Terminal::Rails { zero, one } = d.inputs[0] else {
            panic!()
        };
        let g0 = d.apply_inputs(&assign(&d, "0")).unwrap();
        assert!(g0.is_black(zero) && !g0.is_black(one));
        let g1 = d.apply_inputs(&assign(&d, "1")).unwrap();
        assert!(!g1.is_black(zero) && g1.is_black(one));
        assert_eq!(d.outputs[0], Terminal::Rails { zero: one, one: zero });
        assert_eq!(d.graph.len(), 2);
    }

    #[test]
    fn json_round_trip() {
        for c in [
            two_party(CompileOptions {
                insert_filters: true,
                ..CompileOptions::default()
            }),
            build_toffoli().unwrap(),
        ] {
            let text = c.to_json().unwrap();
            assert_eq!(CompiledCircuit::from_json(&text).unwrap(), c);
            let v: Value = serde_json::from_str(&text).unwrap();
            assert!(v["vertices"].is_array() && v["layers"].is_object());
        }
    }

    #[test]
    fn unbalanced_compile_has_no_expected_step() {
        let c = compile_formula(
            "x1 OR (x2 AND x3)",
            Mode::Monotone,
            CompileOptions {
                balance_delays: false,
                ..CompileOptions::default()
            },
        )
        .unwrap();
        assert_eq!(c.expected_output_step, None);
    }
}
