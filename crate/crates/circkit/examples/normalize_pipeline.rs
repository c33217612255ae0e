//! Rewrite a circuit into normal homogeneous form and inspect the gate
//! census against the size bounds the rewriting guarantees.
//!
//! Normal form means: inputs feed only products, gates alternate between
//! sums and products along every path, products are binary, every sum
//! feeds at most one gate, outputs are sums, and every gate computes a
//! homogeneous polynomial.

use circkit::circuit::{expand, parse_circuit, DEFAULT_TERM_BUDGET};
use circkit::normal::{check_normal_form, normalize, normalize_traced};

fn main() -> circkit::Result<()> {
    // The 2×2 permanent x11·x22 + x12·x21, written with a shared sum so
    // the rewriting has something to untangle.
    let text = "\
field Q
input x11
input x12
input x21
input x22
s = + 1:x11 1:x12
p1 = * 1:s 1:x22
p2 = * 1:x12 1:x21
p3 = * 1:x12 1:x22
g = + 1:p1 1:p2 -1:p3
output g
";
    let c = parse_circuit(text)?;
    let before = expand(&c, DEFAULT_TERM_BUDGET)?;
    println!("input circuit: size {}, outputs {:?}", c.size(), before.iter().map(|p| p.to_string()).collect::<Vec<_>>());

    let outcome = normalize(&c, 2)?;
    let after = expand(&outcome.circuit, DEFAULT_TERM_BUDGET)?;
    assert_eq!(before.len(), after.len());
    println!("normalized:    size {}", outcome.circuit.size());

    let report = check_normal_form(&outcome.circuit, DEFAULT_TERM_BUDGET)?;
    println!("normal form:   {}", if report.ok { "yes" } else { "violated" });

    // The census counts gates by the degree they compute. The rewriting
    // promises at most 8s products per degree and at most 24sr gates in
    // total, both measured against the *input* circuit's size s.
    println!("census by degree (nPlus, nTimes):");
    for (degree, counts) in &outcome.census.by_degree {
        println!("  degree {degree}: ({}, {})", counts.n_plus, counts.n_times);
    }
    let b = &outcome.bounds;
    println!(
        "N = {} of at most {}; max nTimes per degree {} of at most {}; bounds ok: {}",
        b.n_total, b.n_total_bound, b.n_times_max, b.n_times_bound, b.ok
    );

    // The traced variant returns the circuit after every pass.
    let (_, stages) = normalize_traced(&c, 2, DEFAULT_TERM_BUDGET)?;
    let names: Vec<&str> = stages.iter().map(|(label, _)| label.as_str()).collect();
    println!("pipeline stages: {}", names.join(" -> "));
    Ok(())
}
