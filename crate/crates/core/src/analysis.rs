//! Exhaustive evaluation of compiled circuits: truth tables, back-forcing
//! classification and what a party holding part of the inputs can infer
//! from the final colors it sees.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boolfn::{bits_to_string, row_bits};
use crate::circuit::{CompiledCircuit, Terminal};
use crate::engine::{run_to_fixpoint, ForceEvent, ForcingTrace};
use crate::error::{Error, Result};
use crate::graph::{to_canonical_json, VertexId};
use crate::netlist::GateKind;

pub const DEFAULT_SWEEP_LIMIT: usize = 16;

#[derive(Debug, Clone)]
pub struct Evaluation {
    pub inputs: Vec<bool>,
    pub outputs: Vec<bool>,
    /// Per output: false when a rail pair ends with both or neither rail black.
    pub exclusive: Vec<bool>,
    /// Step at which each output (or its black rail) turned black.
    pub output_steps: Vec<Option<u32>>,
    pub trace: ForcingTrace,
}

pub fn evaluate(c: &CompiledCircuit, assignment: &BTreeMap<String, bool>) -> Result<Evaluation> {
    let g = c.apply_inputs(assignment)?;
    let bits = c.variables.iter().map(|v| assignment[v]).collect();
    Ok(read(c, bits, run_to_fixpoint(&g)))
}

pub fn evaluate_bits(c: &CompiledCircuit, bits: &[bool]) -> Result<Evaluation> {
    if bits.len() != c.arity() {
        return Err(Error::ArityMismatch {
            expected: c.arity(),
            found: bits.len(),
        });
    }
    Ok(read(c, bits.to_vec(), run_to_fixpoint(&c.apply_bits(bits))))
}

fn read(c: &CompiledCircuit, inputs: Vec<bool>, trace: ForcingTrace) -> Evaluation {
    let black = |v: VertexId| trace.is_black(v);
    let step = |t: &Terminal| t.vertices().into_iter().filter_map(|v| trace.black_step(v)).min();
    Evaluation {
        outputs: c.outputs.iter().map(|t| t.read(black)).collect(),
        exclusive: c.outputs.iter().map(|t| t.exclusive(black)).collect(),
        output_steps: c.outputs.iter().map(step).collect(),
        inputs,
        trace,
    }
}

fn check_limit(c: &CompiledCircuit, limit: usize) -> Result<()> {
    if c.arity() > limit {
        return Err(Error::LimitExceeded {
            what: "input sweep",
            limit,
            found: c.arity(),
        });
    }
    Ok(())
}

/// Evaluates every assignment in binary counting order (first variable most significant).
pub fn sweep(c: &CompiledCircuit, limit: usize) -> Result<Vec<Evaluation>> {
    check_limit(c, limit)?;
    let n = c.arity();
    (0..1usize << n)
        .into_par_iter()
        .map(|row| evaluate_bits(c, &row_bits(row, n)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub input: String,
    pub outputs: Vec<u8>,
    pub exclusive: bool,
    pub output_steps: Vec<Option<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthTable {
    pub variables: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl TruthTable {
    pub fn output_bits(&self, row: usize) -> Vec<bool> {
        self.rows[row].outputs.iter().map(|&b| b == 1).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} | out | step\n", self.variables.join(" "));
        for r in &self.rows {
            let outs: Vec<String> = r.outputs.iter().map(u8::to_string).collect();
            let steps: Vec<String> = r
                .output_steps
                .iter()
                .map(|s| s.map_or("-".into(), |s| s.to_string()))
                .collect();
            s.push_str(&format!("{} | {} | {}\n", r.input, outs.join(""), steps.join(",")));
        }
        s
    }
}

pub fn truth_table(c: &CompiledCircuit) -> Result<TruthTable> {
    truth_table_with_limit(c, DEFAULT_SWEEP_LIMIT)
}

pub fn truth_table_with_limit(c: &CompiledCircuit, limit: usize) -> Result<TruthTable> {
    let rows = sweep(c, limit)?
        .into_iter()
        .map(|e| TableRow {
            input: bits_to_string(&e.inputs),
            outputs: e.outputs.iter().map(|&b| u8::from(b)).collect(),
            exclusive: e.exclusive.iter().all(|&x| x),
            output_steps: e.output_steps,
        })
        .collect();
    Ok(TruthTable {
        variables: c.variables.clone(),
        rows,
    })
}

/// Rows where the table disagrees with direct evaluation of the source formulas.
pub fn oracle_mismatches(c: &CompiledCircuit, table: &TruthTable) -> Result<Vec<String>> {
    let formulas = c.parsed_formulas()?;
    if formulas.is_empty() {
        return Err(Error::InvalidCircuit("circuit carries no source formula".into()));
    }
    let mut bad = Vec::new();
    for (i, row) in table.rows.iter().enumerate() {
        let bits = row_bits(i, c.arity());
        let asg: BTreeMap<String, bool> = c.variables.iter().cloned().zip(bits).collect();
        let expected = formulas.iter().map(|f| f.eval(&asg)).collect::<Result<Vec<bool>>>()?;
        if expected != table.output_bits(i) || !row.exclusive {
            bad.push(row.input.clone());
        }
    }
    Ok(bad)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassifiedEvent {
    pub event: ForceEvent,
    pub direction: Direction,
    pub from_layer: u32,
    pub to_layer: u32,
}

pub fn classify_forces(c: &CompiledCircuit, trace: &ForcingTrace) -> Vec<ClassifiedEvent> {
    trace
        .events()
        .map(|&event| {
            let from_layer = c.layer_of[event.forcer.0];
            let to_layer = c.layer_of[event.forced.0];
            let direction = match to_layer.cmp(&from_layer) {
                std::cmp::Ordering::Less => Direction::Backward,
                std::cmp::Ordering::Greater => Direction::Forward,
                std::cmp::Ordering::Equal => Direction::Internal,
            };
            ClassifiedEvent {
                event,
                direction,
                from_layer,
                to_layer,
            }
        })
        .collect()
}

/// Backward events leaving a filter instance: the forcer belongs to a FILTER
/// and the forced vertex is owned by something upstream of it.
pub fn filter_crossings(c: &CompiledCircuit, events: &[ClassifiedEvent]) -> Vec<ClassifiedEvent> {
    events
        .iter()
        .filter(|e| e.direction == Direction::Backward)
        .filter(|e| {
            c.owner[e.event.forcer.0]
                .is_some_and(|i| c.instances[i].kind == GateKind::Filter && c.owner[e.event.forced.0] != Some(i))
        })
        .copied()
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackForcingRow {
    pub input: String,
    pub output: u8,
    pub backward_events: usize,
    pub filter_crossings: usize,
    /// Some input vertex left white by the assignment ended black.
    pub zero_inputs_blackened: bool,
    pub inputs_all_black: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackForcingReport {
    pub variables: Vec<String>,
    pub assignments: Vec<BackForcingRow>,
    /// Exactly the inputs after which every input vertex ends black.
    pub all_inputs_black: Vec<String>,
    pub condition: String,
}

impl BackForcingReport {
    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

pub fn back_forcing_report(c: &CompiledCircuit) -> Result<BackForcingReport> {
    back_forcing_report_with_limit(c, DEFAULT_SWEEP_LIMIT)
}

pub fn back_forcing_report_with_limit(c: &CompiledCircuit, limit: usize) -> Result<BackForcingReport> {
    let inputs = c.input_vertices();
    let assignments: Vec<BackForcingRow> = sweep(c, limit)?
        .into_iter()
        .map(|e| {
            let applied = c.apply_bits(&e.inputs);
            let events = classify_forces(c, &e.trace);
            BackForcingRow {
                input: bits_to_string(&e.inputs),
                output: u8::from(e.outputs[0]),
                backward_events: events.iter().filter(|x| x.direction == Direction::Backward).count(),
                filter_crossings: filter_crossings(c, &events).len(),
                zero_inputs_blackened: inputs.iter().any(|&v| !applied.is_black(v) && e.trace.is_black(v)),
                inputs_all_black: inputs.iter().all(|&v| e.trace.is_black(v)),
            }
        })
        .collect();
    let all_inputs_black: Vec<String> = assignments
        .iter()
        .filter(|r| r.inputs_all_black)
        .map(|r| r.input.clone())
        .collect();
    let condition = describe_condition(c.arity(), &all_inputs_black);
    Ok(BackForcingReport {
        variables: c.variables.clone(),
        assignments,
        all_inputs_black,
        condition,
    })
}

/// Names the set as a weight threshold when it is one, otherwise lists it.
fn describe_condition(n: usize, rows: &[String]) -> String {
    let weight = |s: &str| s.bytes().filter(|&b| b == b'1').count();
    let set: BTreeSet<&str> = rows.iter().map(String::as_str).collect();
    if set.is_empty() {
        return "never".into();
    }
    for k in 0..=n {
        let threshold: BTreeSet<String> = (0..1usize << n)
            .map(|r| bits_to_string(&row_bits(r, n)))
            .filter(|s| weight(s) >= k)
            .collect();
        if threshold.len() == set.len() && threshold.iter().all(|s| set.contains(s.as_str())) {
            return format!("input weight >= {k}");
        }
    }
    format!("input in {{{}}}", rows.join(", "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AlwaysInferable,
    NeverInferable,
    Depends,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// Full assignment in circuit variable order.
    pub input: String,
    /// Final colors of the party's observed vertices, `1` for black.
    pub view: String,
    pub output: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceVerdict {
    pub verdict: Verdict,
    /// One completion per view when the output is always inferable,
    /// otherwise two completions with equal views and different outputs.
    pub witnesses: Vec<Witness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartyReport {
    pub inputs: Vec<String>,
    pub observed: Vec<String>,
    /// Keyed by the party's own bits in the order of `inputs`.
    pub choices: BTreeMap<String, ChoiceVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeakageReport {
    pub parties: BTreeMap<String, PartyReport>,
}

impl LeakageReport {
    pub fn verdict(&self, party: &str, choice: &str) -> Option<Verdict> {
        Some(self.parties.get(party)?.choices.get(choice)?.verdict)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }
}

pub type Partition = Vec<(String, Vec<String>)>;

fn validate_partition(c: &CompiledCircuit, partition: &Partition) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidPartition(m));
    let mut parties = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for (party, vars) in partition {
        if party.is_empty() || !parties.insert(party) {
            return bad(format!("party name `{party}` is empty or repeated"));
        }
        if vars.is_empty() {
            return bad(format!("party `{party}` owns no inputs"));
        }
        for v in vars {
            if !c.variables.contains(v) {
                return bad(format!("`{v}` is not a circuit input"));
            }
            if !seen.insert(v) {
                return bad(format!("`{v}` is owned by two parties"));
            }
        }
    }
    if let Some(v) = c.variables.iter().find(|v| !seen.contains(v)) {
        return bad(format!("`{v}` is not owned by any party"));
    }
    Ok(())
}

/// Vertices a party sees: its own input vertices and every vertex all of
/// whose gadget instances depend only on the party's inputs.
pub fn observed_vertices(c: &CompiledCircuit, own: &[String]) -> Vec<VertexId> {
    let own: BTreeSet<&String> = own.iter().collect();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); c.graph.len()];
    for (i, inst) in c.instances.iter().enumerate() {
        for &v in &inst.vertices {
            containing[v.0].push(i);
        }
    }
    let mut seen: BTreeSet<VertexId> = c
        .variables
        .iter()
        .zip(&c.inputs)
        .filter(|(v, _)| own.contains(v))
        .flat_map(|(_, t)| t.vertices())
        .collect();
    for v in c.graph.vertices() {
        let inst = &containing[v.0];
        if !inst.is_empty()
            && inst
                .iter()
                .all(|&i| c.instances[i].cone.iter().all(|x| own.contains(x)))
        {
            seen.insert(v);
        }
    }
    seen.into_iter().collect()
}

pub fn leakage_analysis(c: &CompiledCircuit, partition: &Partition) -> Result<LeakageReport> {
    leakage_analysis_with_limit(c, partition, DEFAULT_SWEEP_LIMIT)
}

pub fn leakage_analysis_with_limit(c: &CompiledCircuit, partition: &Partition, limit: usize) -> Result<LeakageReport> {
    validate_partition(c, partition)?;
    let evals = sweep(c, limit)?;
    let position: BTreeMap<&String, usize> = c.variables.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut parties = BTreeMap::new();
    for (party, own) in partition {
        let observed = observed_vertices(c, own);
        let own_pos: Vec<usize> = own.iter().map(|v| position[v]).collect();
        // choice -> view -> completions
        let mut groups: BTreeMap<String, BTreeMap<String, Vec<Witness>>> = BTreeMap::new();
        for e in &evals {
            let choice: Vec<bool> = own_pos.iter().map(|&p| e.inputs[p]).collect();
            let view: Vec<bool> = observed.iter().map(|&v| e.trace.is_black(v)).collect();
            let w = Witness {
                input: bits_to_string(&e.inputs),
                view: bits_to_string(&view),
                output: bits_to_string(&e.outputs),
            };
            groups
                .entry(bits_to_string(&choice))
                .or_default()
                .entry(w.view.clone())
                .or_default()
                .push(w);
        }
        let choices = groups
            .into_iter()
            .map(|(choice, views)| (choice, judge(views)))
            .collect();
        parties.insert(
            party.clone(),
            PartyReport {
                inputs: own.clone(),
                observed: observed.iter().map(|&v| c.graph.name(v).to_owned()).collect(),
                choices,
            },
        );
    }
    Ok(LeakageReport { parties })
}

fn judge(views: BTreeMap<String, Vec<Witness>>) -> ChoiceVerdict {
    let determined = |ws: &Vec<Witness>| ws.iter().all(|w| w.output == ws[0].output);
    let total = views.len();
    let good = views.values().filter(|ws| determined(ws)).count();
    let verdict = if good == total {
        Verdict::AlwaysInferable
    } else if good == 0 {
        Verdict::NeverInferable
    } else {
        Verdict::Depends
    };
    let witnesses = if verdict == Verdict::AlwaysInferable {
        views.into_values().map(|mut ws| ws.swap_remove(0)).collect()
    } else {
        let ws = views
            .into_values()
            .find(|ws| !determined(ws))
            .expect("some view is ambiguous");
        let other = ws.iter().find(|w| w.output != ws[0].output).expect("ambiguous").clone();
        vec![ws[0].clone(), other]
    };
    ChoiceVerdict { verdict, witnesses }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compile_formula, CompileOptions};
    use crate::formula::Mode;

    fn two_party(options: CompileOptions) -> CompiledCircuit {
        compile_formula("(x1 AND x2) OR (x3 AND x4)", Mode::Monotone, options).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn evaluate_examples() {
        let c = two_party(CompileOptions::default());
        assert_eq!(evaluate_bits(&c, &bits("1100")).unwrap().outputs, [true]);
        let zero = evaluate_bits(&c, &bits("0000")).unwrap();
        assert_eq!(zero.outputs, [false]);
        assert_eq!(zero.trace.event_count(), 0);
        assert_eq!(evaluate_bits(&c, &bits("1010")).unwrap().outputs, [false]);
        assert!(matches!(
            evaluate_bits(&c, &bits("110")),
            Err(Error::ArityMismatch { expected: 4, found: 3 })
        ));
        let mut asg: BTreeMap<String, bool> = c.variables.iter().map(|v| (v.clone(), true)).collect();
        asg.remove("x2");
        assert!(matches!(evaluate(&c, &asg), Err(Error::MissingVariable(_))));
    }

    #[test]
    fn truth_table_and_oracle() {
        let c = two_party(CompileOptions::default());
        let t = truth_table(&c).unwrap();
        assert_eq!(t.rows.len(), 16);
        assert!(oracle_mismatches(&c, &t).unwrap().is_empty());
        let id = compile_formula("x", Mode::Monotone, CompileOptions::default()).unwrap();
        let t = truth_table(&id).unwrap();
        assert_eq!(t.rows.iter().map(|r| r.outputs[0]).collect::<Vec<_>>(), [0, 1]);
        assert!(matches!(
            truth_table_with_limit(&c, 3),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn back_force_in_two_party_circuit() {
        let c = two_party(CompileOptions::default());
        let e = evaluate_bits(&c, &bits("1100")).unwrap();
        let events = classify_forces(&c, &e.trace);
        let back: Vec<_> = events.iter().filter(|x| x.direction == Direction::Backward).collect();
        assert!(!back.is_empty());
        let or = c.instances.iter().position(|i| i.kind == GateKind::Or).unwrap();
        assert!(back.iter().any(|x| c.owner[x.event.forcer.0] == Some(or)));
    }

    #[test]
    fn single_gadget_events_are_internal() {
        let c = compile_formula("a AND b", Mode::Monotone, CompileOptions::default()).unwrap();
        let e = evaluate_bits(&c, &bits("11")).unwrap();
        assert!(classify_forces(&c, &e.trace)
            .iter()
            .all(|x| x.direction == Direction::Internal));
    }

    #[test]
    fn all_black_condition_is_weight_three() {
        let r = back_forcing_report(&two_party(CompileOptions::default())).unwrap();
        assert_eq!(r.all_inputs_black, ["0111", "1011", "1101", "1110", "1111"]);
        assert_eq!(r.condition, "input weight >= 3");
        let zero = &r.assignments[0];
        assert_eq!((zero.backward_events, zero.inputs_all_black), (0, false));
    }

    #[test]
    fn filters_stop_back_forcing() {
        let c = two_party(CompileOptions {
            insert_filters: true,
            ..CompileOptions::default()
        });
        let r = back_forcing_report(&c).unwrap();
        assert!(r
            .assignments
            .iter()
            .all(|a| !a.zero_inputs_blackened && a.filter_crossings == 0));
        assert_eq!(r.all_inputs_black, ["1111"]);
    }

    #[test]
    fn leakage_verdicts() {
        let c = two_party(CompileOptions::default());
        let p: Partition = vec![
            ("A".into(), vec!["x1".into(), "x2".into()]),
            ("B".into(), vec!["x3".into(), "x4".into()]),
        ];
        let r = leakage_analysis(&c, &p).unwrap();
        assert_eq!(r.parties["A"].observed, ["x1", "x2"]);
        assert_eq!(r.verdict("A", "00"), Some(Verdict::NeverInferable));
        assert_eq!(r.verdict("A", "11"), Some(Verdict::AlwaysInferable));
        assert_eq!(r.verdict("A", "10"), Some(Verdict::AlwaysInferable));
        assert_eq!(r.verdict("B", "01"), Some(Verdict::AlwaysInferable));
        let w = &r.parties["A"].choices["00"].witnesses;
        assert_eq!(w.len(), 2);
        assert_eq!(w[0].view, w[1].view);
        assert_ne!(w[0].output, w[1].output);
    }

    #[test]
    fn partition_errors() {
        let c = two_party(CompileOptions::default());
        let p = |parts: &[(&str, &[&str])]| -> Partition {
            parts
                .iter()
                .map(|(n, v)| (n.to_string(), v.iter().map(|s| s.to_string()).collect()))
                .collect()
        };
        for bad in [
            p(&[("A", &["x1", "x2"]), ("B", &["x3"])]),
            p(&[("A", &["x1", "x2"]), ("B", &["x2", "x3", "x4"])]),
            p(&[("A", &["x1", "x2", "y"]), ("B", &["x3", "x4"])]),
            p(&[("A", &["x1", "x2"]), ("A", &["x3", "x4"])]),
        ] {
            assert!(matches!(leakage_analysis(&c, &bad), Err(Error::InvalidPartition(_))));
        }
    }
}
