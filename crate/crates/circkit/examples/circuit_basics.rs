//! Parse a circuit from text, expand it into polynomials, substitute a
//! variable, and print everything back out.

use std::collections::BTreeMap;

use circkit::algebra::{parse_scalar, FieldTag};
use circkit::circuit::{expand, parse_circuit, serialize_circuit, substitute, DEFAULT_TERM_BUDGET};

fn main() -> circkit::Result<()> {
    // A circuit is a DAG: `input` lines declare variables, gate lines are
    // `name = + label:child ...` or `name = * label:child ...`, and one
    // `output` line lists the designated output nodes.
    let text = "\
field Q
input x
input y
sq = * 1:x 1:x
mix = * 1:x 1:y
g = + 1:sq -2:mix
h = + 1/2:sq 3:mix
output g h
";
    let c = parse_circuit(text)?;
    println!("parsed a circuit with {} nodes, size {}", c.num_nodes(), c.size());

    // Size is the edge count; syntactic degrees bound the real degrees.
    let degrees = c.syntactic_degrees()?;
    for &o in c.outputs() {
        println!("  output node {o} has syntactic degree {}", degrees[o]);
    }

    // Expansion gives the exact polynomial each output computes.
    for (i, p) in expand(&c, DEFAULT_TERM_BUDGET)?.iter().enumerate() {
        println!("  output {i} expands to {p}");
    }

    // Substitution rewrites inputs to constants, here y := 3.
    let mut assignment = BTreeMap::new();
    assignment.insert("y".to_string(), parse_scalar("3", FieldTag::Rational)?);
    let fixed = substitute(&c, &assignment)?;
    for (i, p) in expand(&fixed, DEFAULT_TERM_BUDGET)?.iter().enumerate() {
        println!("  after y := 3, output {i} is {p}");
    }

    println!("--- round trip ---");
    print!("{}", serialize_circuit(&c));
    Ok(())
}
