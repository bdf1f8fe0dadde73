use std::collections::BTreeMap;

use zforge_core::analysis::{evaluate_bits, truth_table};
use zforge_core::boolfn::row_bits;
use zforge_core::circuit::{compile_formula, CompileOptions, CompiledCircuit};
use zforge_core::formula::Mode;
use zforge_core::netlist::GateKind;
use zforge_core::VertexId;

const FORMULAS: &[&str] = &[
    "(x1 AND x2) OR (x3 AND x4)",
    "x1 OR (x2 AND x3)",
    "(a OR b) AND (a OR c)",
    "(a AND b AND a) OR (c AND (b OR d))",
    "a AND a AND a",
    "(a OR b) AND ((c AND a) OR (b AND d))",
];

fn option_grid() -> Vec<CompileOptions> {
    let mut out = Vec::new();
    for balance_delays in [true, false] {
        for insert_filters in [true, false] {
            out.push(CompileOptions {
                balance_delays,
                insert_filters,
                guard_fanout: true,
            });
        }
    }
    out
}

#[test]
fn unguarded_fan_out_leaks_into_sibling_branches() {
    let options = CompileOptions {
        guard_fanout: false,
        ..CompileOptions::default()
    };
    let bare = compile_formula("(x OR y) AND (x OR z)", Mode::Monotone, options).unwrap();
    // y = 1 back-forces its OR's x input, the COPY hands that to the other OR.
    assert_eq!(evaluate_bits(&bare, &[false, true, false]).unwrap().outputs, [true]);
    let guarded = compile_formula("(x OR y) AND (x OR z)", Mode::Monotone, CompileOptions::default()).unwrap();
    assert_eq!(evaluate_bits(&guarded, &[false, true, false]).unwrap().outputs, [false]);
}

#[test]
fn every_option_combination_computes_the_formula() {
    for text in FORMULAS {
        for options in option_grid() {
            let c = compile_formula(text, Mode::Monotone, options).unwrap();
            let t = truth_table(&c).unwrap();
            let bad = zforge_core::analysis::oracle_mismatches(&c, &t).unwrap();
            assert!(bad.is_empty(), "{text} with {options:?}: {bad:?}");
        }
    }
}

#[test]
fn balanced_gates_see_all_inputs_at_once() {
    for text in FORMULAS {
        let c = compile_formula(text, Mode::Monotone, CompileOptions::default()).unwrap();
        let e = evaluate_bits(&c, &vec![true; c.arity()]).unwrap();
        for inst in &c.instances {
            let steps: Vec<Option<u32>> = inst.inputs.iter().map(|&v| e.trace.black_step(v)).collect();
            assert!(
                steps.iter().all(|s| s.is_some() && *s == steps[0]),
                "{text}: {inst:?} {steps:?}"
            );
        }
        assert_eq!(e.output_steps[0], c.expected_output_step, "{text}");
    }
}

fn logical_values(c: &CompiledCircuit, bits: &[bool]) -> BTreeMap<VertexId, bool> {
    let mut value = BTreeMap::new();
    for (t, &b) in c.inputs.iter().zip(bits) {
        value.insert(t.vertices()[0], b);
    }
    for inst in &c.instances {
        let ins: Vec<bool> = inst.inputs.iter().map(|v| value[v]).collect();
        let out = match inst.kind {
            GateKind::And => ins[0] && ins[1],
            GateKind::Or => ins[0] || ins[1],
            GateKind::Copy | GateKind::Wire(_) | GateKind::Filter => ins[0],
        };
        for &o in &inst.outputs {
            value.insert(o, out);
        }
    }
    value
}

#[test]
fn gluing_preserves_gadget_behavior() {
    for text in FORMULAS {
        for options in option_grid() {
            let c = compile_formula(text, Mode::Monotone, options).unwrap();
            for row in 0..1usize << c.arity() {
                let bits = row_bits(row, c.arity());
                let e = evaluate_bits(&c, &bits).unwrap();
                for (v, logical) in logical_values(&c, &bits) {
                    let black = e.trace.is_black(v);
                    if logical {
                        assert!(black, "{text} {bits:?}: 1-net {} stayed white", c.graph.name(v));
                    } else if black && !c.inputs.iter().any(|t| t.vertices()[0] == v) {
                        // A 0-net may only turn black from outside its driver.
                        let forcer = e.trace.events().find(|x| x.forced == v).unwrap().forcer;
                        assert_ne!(
                            c.owner[forcer.0],
                            c.owner[v.0],
                            "{text} {bits:?}: 0-net {} forced by its driver",
                            c.graph.name(v)
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn dual_rail_rails_stay_exclusive_at_outputs() {
    for text in ["NOT a AND b", "(a XOR b) XOR c", "a NAND (b OR NOT c)", "NOT (a XOR a)"] {
        let c = compile_formula(text, Mode::DualRail, CompileOptions::default()).unwrap();
        let t = truth_table(&c).unwrap();
        let bad = zforge_core::analysis::oracle_mismatches(&c, &t).unwrap();
        assert!(bad.is_empty(), "{text}: {bad:?}");
    }
}

#[test]
fn compiled_json_round_trips_through_analysis() {
    let c = compile_formula("(x1 AND x2) OR (x3 AND x4)", Mode::Monotone, CompileOptions::default()).unwrap();
    let back = CompiledCircuit::from_json(&c.to_json().unwrap()).unwrap();
    assert_eq!(truth_table(&back).unwrap(), truth_table(&c).unwrap());
    assert_eq!(c.to_json().unwrap(), back.to_json().unwrap());
}
