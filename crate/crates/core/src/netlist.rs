//! Gate-level netlists.
//!
//! Every net has one driver (a primary input or a gate output) and at most one
//! load (a gate input or a primary output), so fan-out is always an explicit
//! COPY tree. Gates are kept in topological order and `gates[i].id == i`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Formula, Mode};
use crate::gadget::{and_gadget, copy_gadget, filter_gadget, or_gadget, wire_gadget, Gadget};
use crate::graph::to_canonical_json;

pub type NetId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    And,
    Or,
    Copy,
    Wire(u32),
    Filter,
}

impl GateKind {
    pub fn gadget(self) -> Gadget {
        match self {
            GateKind::And => and_gadget(),
            GateKind::Or => or_gadget(),
            GateKind::Copy => copy_gadget(),
            GateKind::Wire(k) => wire_gadget(k),
            GateKind::Filter => filter_gadget(),
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            _ => 1,
        }
    }

    pub fn output_count(self) -> usize {
        match self {
            GateKind::Copy => 2,
            _ => 1,
        }
    }

    /// Steps from the last input turning black to each output turning black.
    pub fn output_latencies(self) -> Vec<u32> {
        match self {
            GateKind::And | GateKind::Or => vec![1],
            GateKind::Copy => vec![1, 2],
            GateKind::Wire(k) => vec![k],
            GateKind::Filter => vec![2],
        }
    }

    pub fn is_logic(self) -> bool {
        matches!(self, GateKind::And | GateKind::Or)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::And => write!(f, "AND"),
            GateKind::Or => write!(f, "OR"),
            GateKind::Copy => write!(f, "COPY"),
            GateKind::Wire(k) => write!(f, "WIRE({k})"),
            GateKind::Filter => write!(f, "FILTER"),
        }
    }
}

impl std::str::FromStr for GateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        match upper.as_str() {
            "AND" => return Ok(GateKind::And),
            "OR" => return Ok(GateKind::Or),
            "COPY" => return Ok(GateKind::Copy),
            "FILTER" => return Ok(GateKind::Filter),
            "NOT" | "NAND" | "NOR" | "XOR" | "XNOR" => return Err(Error::NonMonotoneGate(s.to_owned())),
            _ => {}
        }
        upper
            .strip_prefix("WIRE(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|k| k.parse::<u32>().ok())
            .filter(|&k| k >= 1)
            .map(GateKind::Wire)
            .ok_or_else(|| Error::InvalidNetlist(format!("unknown gate kind `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: usize,
    pub kind: GateKind,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
    /// Longest path from the primary inputs; gates fed only by inputs are layer 1.
    pub layer: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Driver {
    Input(usize),
    Gate(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Load {
    Gate(usize, usize),
    Output(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Netlist {
    pub gates: Vec<Gate>,
    pub net_count: usize,
    /// Named primary inputs in evaluation order. In dual-rail encoding they
    /// come in (`v:0`, `v:1`) pairs, one pair per logical variable.
    pub inputs: Vec<(String, NetId)>,
    /// Primary outputs; (zero, one) pairs in dual-rail encoding.
    pub outputs: Vec<NetId>,
    pub encoding: Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterPolicy {
    /// Every net whose driver and load are both gates.
    AllInterGate,
    /// Nets from a COPY output into a gate other than COPY.
    FanOutGuard,
}

pub fn rail_name(variable: &str, rail: bool) -> String {
    format!("{variable}:{}", u8::from(rail))
}

impl Netlist {
    pub fn drivers(&self) -> Vec<Option<Driver>> {
        let mut d = vec![None; self.net_count];
        for (i, (_, n)) in self.inputs.iter().enumerate() {
            d[*n] = Some(Driver::Input(i));
        }
        for g in &self.gates {
            for (p, &n) in g.outputs.iter().enumerate() {
                d[n] = Some(Driver::Gate(g.id, p));
            }
        }
        d
    }

    pub fn loads(&self) -> Vec<Option<Load>> {
        let mut l = vec![None; self.net_count];
        for g in &self.gates {
            for (p, &n) in g.inputs.iter().enumerate() {
                l[n] = Some(Load::Gate(g.id, p));
            }
        }
        for (j, &n) in self.outputs.iter().enumerate() {
            l[n] = Some(Load::Output(j));
        }
        l
    }

    pub fn count(&self, kind: impl Fn(GateKind) -> bool) -> usize {
        self.gates.iter().filter(|g| kind(g.kind)).count()
    }

    pub fn variables(&self) -> Vec<String> {
        match self.encoding {
            Mode::Monotone => self.inputs.iter().map(|(n, _)| n.clone()).collect(),
            Mode::DualRail => self
                .inputs
                .chunks(2)
                .map(|p| p[0].0.strip_suffix(":0").unwrap_or(&p[0].0).to_owned())
                .collect(),
        }
    }

    /// Checks single driver / single load, arities and acyclicity.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNetlist(m));
        let mut driven = vec![0usize; self.net_count];
        let mut loaded = vec![0usize; self.net_count];
        let mut names = std::collections::BTreeSet::new();
        for (name, n) in &self.inputs {
            if !names.insert(name) {
                return bad(format!("duplicate input `{name}`"));
            }
            if *n >= self.net_count {
                return bad(format!("net {n} out of range"));
            }
            driven[*n] += 1;
        }
        for (i, g) in self.gates.iter().enumerate() {
            if g.id != i {
                return bad(format!("gate ids must be 0..n in order, found {} at {i}", g.id));
            }
            if g.inputs.len() != g.kind.arity() || g.outputs.len() != g.kind.output_count() {
                return bad(format!("gate {i} ({}) has wrong port count", g.kind));
            }
            for &n in g.inputs.iter().chain(&g.outputs) {
                if n >= self.net_count {
                    return bad(format!("net {n} out of range"));
                }
            }
            g.inputs.iter().for_each(|&n| loaded[n] += 1);
            g.outputs.iter().for_each(|&n| driven[n] += 1);
        }
        for &n in &self.outputs {
            if n >= self.net_count {
                return bad(format!("net {n} out of range"));
            }
            loaded[n] += 1;
        }
        if self.outputs.is_empty() {
            return bad("no primary output".into());
        }
        if self.encoding == Mode::DualRail
            && (!self.inputs.len().is_multiple_of(2) || !self.outputs.len().is_multiple_of(2))
        {
            return bad("dual-rail inputs and outputs come in pairs".into());
        }
        let inputs: std::collections::BTreeSet<NetId> = self.inputs.iter().map(|(_, n)| *n).collect();
        for n in 0..self.net_count {
            if driven[n] != 1 {
                return bad(format!("net {n} has {} drivers", driven[n]));
            }
            if loaded[n] > 1 || (loaded[n] == 0 && !inputs.contains(&n)) {
                return bad(format!("net {n} has {} loads", loaded[n]));
            }
        }
        self.topological_order().map(|_| ())
    }

    fn topological_order(&self) -> Result<Vec<usize>> {
        let drivers = self.drivers();
        let mut indegree: Vec<usize> = vec![0; self.gates.len()];
        let mut users: Vec<Vec<usize>> = vec![Vec::new(); self.gates.len()];
        for g in &self.gates {
            for &n in &g.inputs {
                if let Some(Driver::Gate(d, _)) = drivers[n] {
                    indegree[g.id] += 1;
                    users[d].push(g.id);
                }
            }
        }
        let mut ready: VecDeque<usize> = (0..self.gates.len()).filter(|&g| indegree[g] == 0).collect();
        let mut order = Vec::with_capacity(self.gates.len());
        while let Some(g) = ready.pop_front() {
            order.push(g);
            for &u in &users[g] {
                indegree[u] -= 1;
                if indegree[u] == 0 {
                    ready.push_back(u);
                }
            }
        }
        if order.len() != self.gates.len() {
            return Err(Error::InvalidNetlist("gate graph has a cycle".into()));
        }
        Ok(order)
    }

    /// Recomputes layers and renumbers gates in (layer, previous id) order.
    pub fn normalize(mut self) -> Result<Netlist> {
        let order = self.topological_order()?;
        let drivers = self.drivers();
        let mut layer = vec![0u32; self.gates.len()];
        for &g in &order {
            layer[g] = 1 + self.gates[g]
                .inputs
                .iter()
                .map(|&n| match drivers[n] {
                    Some(Driver::Gate(d, _)) => layer[d],
                    _ => 0,
                })
                .max()
                .unwrap_or(0);
        }
        let mut ids: Vec<usize> = (0..self.gates.len()).collect();
        ids.sort_by_key(|&g| (layer[g], g));
        let mut gates: Vec<Gate> = ids.iter().map(|&g| self.gates[g].clone()).collect();
        for (i, g) in gates.iter_mut().enumerate() {
            g.layer = layer[ids[i]];
            g.id = i;
        }
        self.gates = gates;
        Ok(self)
    }

    /// Arrival step offset of every net under the all-ones input, counting
    /// primary inputs as arriving at 0.
    pub fn arrivals(&self) -> Vec<u32> {
        let mut at = vec![0u32; self.net_count];
        for g in &self.gates {
            let ready = g.inputs.iter().map(|&n| at[n]).max().unwrap_or(0);
            for (&n, l) in g.outputs.iter().zip(g.kind.output_latencies()) {
                at[n] = ready + l;
            }
        }
        at
    }

    pub fn max_output_arrival(&self) -> u32 {
        let at = self.arrivals();
        self.outputs.iter().map(|&n| at[n]).max().unwrap_or(0)
    }

    /// Whether every multi-input gate sees all inputs at once and all outputs
    /// arrive together.
    pub fn is_balanced(&self) -> bool {
        let at = self.arrivals();
        let gates_ok = self
            .gates
            .iter()
            .all(|g| g.inputs.iter().all(|&n| at[n] == at[g.inputs[0]]));
        gates_ok && self.outputs.iter().all(|&n| at[n] == at[self.outputs[0]])
    }

    fn splice(&mut self, net: NetId, kind: GateKind) {
        let fresh = self.net_count;
        self.net_count += 1;
        match self.loads()[net] {
            Some(Load::Gate(g, p)) => self.gates[g].inputs[p] = fresh,
            Some(Load::Output(j)) => self.outputs[j] = fresh,
            None => unreachable!("only loaded nets are spliced"),
        }
        let id = self.gates.len();
        self.gates.push(Gate {
            id,
            kind,
            inputs: vec![net],
            outputs: vec![fresh],
            layer: 0,
        });
    }

    pub fn to_json_model(&self) -> NetlistJson {
        NetlistJson {
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    id: g.id,
                    kind: g.kind.to_string(),
                    inputs: g.inputs.clone(),
                    outputs: g.outputs.clone(),
                    layer: g.layer,
                })
                .collect(),
            primary_inputs: self.inputs.iter().cloned().collect(),
            input_order: self.inputs.iter().map(|(n, _)| n.clone()).collect(),
            primary_output: self.outputs[0],
            primary_outputs: (self.outputs.len() > 1).then(|| self.outputs.clone()),
            encoding: self.encoding.into(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(&self.to_json_model())
    }

    pub fn from_json(text: &str) -> Result<Netlist> {
        let m: NetlistJson = serde_json::from_str(text)?;
        let mut gates = Vec::new();
        let mut max_net = 0;
        for g in &m.gates {
            let kind: GateKind = g.kind.parse()?;
            max_net = g.inputs.iter().chain(&g.outputs).fold(max_net, |a, &n| a.max(n + 1));
            gates.push(Gate {
                id: g.id,
                kind,
                inputs: g.inputs.clone(),
                outputs: g.outputs.clone(),
                layer: g.layer,
            });
        }
        gates.sort_by_key(|g| g.id);
        let order = if m.input_order.is_empty() {
            m.primary_inputs.keys().cloned().collect()
        } else {
            m.input_order.clone()
        };
        let mut inputs = Vec::new();
        for name in order {
            let n = *m
                .primary_inputs
                .get(&name)
                .ok_or_else(|| Error::InvalidNetlist(format!("input `{name}` has no net")))?;
            max_net = max_net.max(n + 1);
            inputs.push((name, n));
        }
        if inputs.len() != m.primary_inputs.len() {
            return Err(Error::InvalidNetlist("input_order does not list every input".into()));
        }
        let outputs = m.primary_outputs.clone().unwrap_or_else(|| vec![m.primary_output]);
        max_net = outputs.iter().fold(max_net, |a, &n| a.max(n + 1));
        let n = Netlist {
            gates,
            net_count: max_net,
            inputs,
            outputs,
            encoding: m.encoding.into(),
        };
        n.validate()?;
        n.normalize()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EncodingJson {
    #[default]
    Monotone,
    DualRail,
}

impl From<Mode> for EncodingJson {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Monotone => EncodingJson::Monotone,
            Mode::DualRail => EncodingJson::DualRail,
        }
    }
}

impl From<EncodingJson> for Mode {
    fn from(m: EncodingJson) -> Self {
        match m {
            EncodingJson::Monotone => Mode::Monotone,
            EncodingJson::DualRail => Mode::DualRail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub id: usize,
    pub kind: String,
    pub inputs: Vec<NetId>,
    pub outputs: Vec<NetId>,
    #[serde(default)]
    pub layer: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetlistJson {
    pub gates: Vec<GateJson>,
    pub primary_inputs: BTreeMap<String, NetId>,
    #[serde(default)]
    pub input_order: Vec<String>,
    pub primary_output: NetId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primary_outputs: Option<Vec<NetId>>,
    #[serde(default)]
    pub encoding: EncodingJson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Src {
    Input(usize),
    Gate(usize, usize),
}

struct Builder {
    kinds: Vec<GateKind>,
    args: Vec<Vec<Src>>,
}

impl Builder {
    fn gate(&mut self, kind: GateKind, args: Vec<Src>) -> Src {
        self.kinds.push(kind);
        self.args.push(args);
        Src::Gate(self.kinds.len() - 1, 0)
    }

    fn monotone(&mut self, f: &Formula, index: &HashMap<&str, usize>) -> Src {
        match f {
            Formula::Var(v) => Src::Input(index[v.as_str()]),
            Formula::And(a, b) => {
                let args = vec![self.monotone(a, index), self.monotone(b, index)];
                self.gate(GateKind::And, args)
            }
            Formula::Or(a, b) => {
                let args = vec![self.monotone(a, index), self.monotone(b, index)];
                self.gate(GateKind::Or, args)
            }
            Formula::Not(_) | Formula::Nand(..) | Formula::Xor(..) => unreachable!("checked monotone"),
        }
    }

    /// Returns the (zero, one) rails of `f`.
    fn dual(&mut self, f: &Formula, index: &HashMap<&str, usize>) -> (Src, Src) {
        match f {
            Formula::Var(v) => {
                let i = index[v.as_str()];
                (Src::Input(2 * i), Src::Input(2 * i + 1))
            }
            Formula::Not(a) => {
                let (z, o) = self.dual(a, index);
                (o, z)
            }
            Formula::And(a, b) => self.dual_and(a, b, index),
            Formula::Nand(a, b) => {
                let (z, o) = self.dual_and(a, b, index);
                (o, z)
            }
            Formula::Or(a, b) => {
                let ((a0, a1), (b0, b1)) = (self.dual(a, index), self.dual(b, index));
                let one = self.gate(GateKind::Or, vec![a1, b1]);
                let zero = self.gate(GateKind::And, vec![a0, b0]);
                (zero, one)
            }
            Formula::Xor(a, b) => {
                let ((a0, a1), (b0, b1)) = (self.dual(a, index), self.dual(b, index));
                let p = self.gate(GateKind::And, vec![a1, b0]);
                let q = self.gate(GateKind::And, vec![a0, b1]);
                let one = self.gate(GateKind::Or, vec![p, q]);
                let r = self.gate(GateKind::And, vec![a1, b1]);
                let s = self.gate(GateKind::And, vec![a0, b0]);
                let zero = self.gate(GateKind::Or, vec![r, s]);
                (zero, one)
            }
        }
    }

    fn dual_and(&mut self, a: &Formula, b: &Formula, index: &HashMap<&str, usize>) -> (Src, Src) {
        let ((a0, a1), (b0, b1)) = (self.dual(a, index), self.dual(b, index));
        let one = self.gate(GateKind::And, vec![a1, b1]);
        let zero = self.gate(GateKind::Or, vec![a0, b0]);
        (zero, one)
    }

    /// Allocates nets, expanding every multiply-used source into a COPY tree.
    fn finish(self, input_names: Vec<String>, outputs: Vec<Src>, encoding: Mode) -> Result<Netlist> {
        let mut uses: BTreeMap<Src, usize> = BTreeMap::new();
        for s in self.args.iter().flatten().chain(&outputs) {
            *uses.entry(*s).or_default() += 1;
        }
        let mut net_count = 0;
        let mut fresh = || {
            net_count += 1;
            net_count - 1
        };
        let mut gates: Vec<Gate> = self
            .kinds
            .iter()
            .enumerate()
            .map(|(id, &kind)| Gate {
                id,
                kind,
                inputs: Vec::new(),
                outputs: Vec::new(),
                layer: 0,
            })
            .collect();
        let inputs: Vec<(String, NetId)> = input_names.into_iter().map(|n| (n, fresh())).collect();
        for g in gates.iter_mut() {
            g.outputs = (0..g.kind.output_count()).map(|_| fresh()).collect();
        }
        let root = |s: Src, gates: &[Gate]| match s {
            Src::Input(i) => inputs[i].1,
            Src::Gate(g, p) => gates[g].outputs[p],
        };
        let mut leaves: HashMap<Src, VecDeque<NetId>> = HashMap::new();
        for (&src, &k) in &uses {
            let r = root(src, &gates);
            let mut out = VecDeque::new();
            copy_tree(r, k, &mut gates, &mut fresh, &mut out);
            leaves.insert(src, out);
        }
        let mut take = |s: &Src| leaves.get_mut(s).and_then(VecDeque::pop_front).expect("counted use");
        for (g, args) in self.args.iter().enumerate() {
            gates[g].inputs = args.iter().map(&mut take).collect();
        }
        let outputs: Vec<NetId> = outputs.iter().map(&mut take).collect();
        let n = Netlist {
            gates,
            net_count,
            inputs,
            outputs,
            encoding,
        }
        .normalize()?;
        n.validate()?;
        Ok(n)
    }
}

fn copy_tree(
    net: NetId,
    k: usize,
    gates: &mut Vec<Gate>,
    fresh: &mut impl FnMut() -> NetId,
    out: &mut VecDeque<NetId>,
) {
    if k <= 1 {
        out.push_back(net);
        return;
    }
    let (o1, o2) = (fresh(), fresh());
    gates.push(Gate {
        id: gates.len(),
        kind: GateKind::Copy,
        inputs: vec![net],
        outputs: vec![o1, o2],
        layer: 0,
    });
    copy_tree(o1, k.div_ceil(2), gates, fresh, out);
    copy_tree(o2, k / 2, gates, fresh, out);
}

fn variable_index(variables: &[String], formulas: &[Formula]) -> Result<HashMap<String, usize>> {
    let index: HashMap<String, usize> = variables.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    for f in formulas {
        for v in f.variables() {
            if !index.contains_key(&v) {
                return Err(Error::UnknownVariable(v));
            }
        }
    }
    Ok(index)
}

/// Structural lowering of a monotone formula: one gate per AND/OR node and a
/// COPY tree for every variable or subterm used more than once.
pub fn lower_to_netlist(ast: &Formula) -> Result<Netlist> {
    lower_monotone(std::slice::from_ref(ast), &ast.variables())
}

pub fn lower_monotone(formulas: &[Formula], variables: &[String]) -> Result<Netlist> {
    if let Some(f) = formulas.iter().find(|f| !f.is_monotone()) {
        return Err(Error::NonMonotoneGate(f.to_string()));
    }
    let index = variable_index(variables, formulas)?;
    let index: HashMap<&str, usize> = index.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let mut b = Builder {
        kinds: Vec::new(),
        args: Vec::new(),
    };
    let outputs: Vec<Src> = formulas.iter().map(|f| b.monotone(f, &index)).collect();
    b.finish(variables.to_vec(), outputs, Mode::Monotone)
}

/// Dual-rail lowering of arbitrary formulas into a monotone netlist over
/// rail nets. Each formula contributes a (zero, one) output pair.
pub fn lower_dual_rail(formulas: &[Formula], variables: &[String]) -> Result<Netlist> {
    let index = variable_index(variables, formulas)?;
    let index: HashMap<&str, usize> = index.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    let mut b = Builder {
        kinds: Vec::new(),
        args: Vec::new(),
    };
    let mut outputs = Vec::new();
    for f in formulas {
        let (z, o) = b.dual(f, &index);
        outputs.extend([z, o]);
    }
    let names = variables
        .iter()
        .flat_map(|v| [rail_name(v, false), rail_name(v, true)])
        .collect();
    b.finish(names, outputs, Mode::DualRail)
}

/// Inserts WIRE gates so every multi-input gate receives all inputs at the
/// same step under the all-ones input, and all primary outputs arrive together.
pub fn insert_delays(netlist: &Netlist) -> Result<Netlist> {
    let mut n = netlist.clone();
    let at = n.arrivals();
    let mut splices: Vec<(NetId, u32)> = Vec::new();
    for g in &n.gates {
        if g.inputs.len() > 1 {
            let ready = g.inputs.iter().map(|&i| at[i]).max().unwrap_or(0);
            splices.extend(g.inputs.iter().filter(|&&i| at[i] < ready).map(|&i| (i, ready - at[i])));
        }
    }
    let last = n.outputs.iter().map(|&o| at[o]).max().unwrap_or(0);
    splices.extend(n.outputs.iter().filter(|&&o| at[o] < last).map(|&o| (o, last - at[o])));
    for (net, k) in splices {
        n.splice(net, GateKind::Wire(k));
    }
    n.normalize()
}

pub fn splice_filters(netlist: &Netlist, policy: FilterPolicy) -> Result<Netlist> {
    let mut n = netlist.clone();
    let drivers = n.drivers();
    let loads = n.loads();
    let kind = |g: usize| n.gates[g].kind;
    let nets: Vec<NetId> = (0..n.net_count)
        .filter(|&net| match (drivers[net], loads[net]) {
            (Some(Driver::Gate(d, _)), Some(Load::Gate(l, _))) => match policy {
                FilterPolicy::AllInterGate => true,
                FilterPolicy::FanOutGuard => kind(d) == GateKind::Copy && kind(l) != GateKind::Copy,
            },
            _ => false,
        })
        .collect();
    for net in nets {
        n.splice(net, GateKind::Filter);
    }
    n.normalize()
}
