//! Differentiate a single-output circuit in one reverse pass.
//!
//! The gradient circuit computes every requested partial derivative at
//! once, and its size stays below five times the size of the original —
//! far cheaper than differentiating once per variable.

use circkit::circuit::{expand, gradient_circuit, parse_circuit, DEFAULT_TERM_BUDGET};

fn main() -> circkit::Result<()> {
    // f = (x + y²)·(x·y − 2y), kept at fanin two throughout.
    let text = "\
field Q
input x
input y
ysq = * 1:y 1:y
left = + 1:x 1:ysq
xy = * 1:x 1:y
right = + 1:xy -2:y
f = * 1:left 1:right
output f
";
    let c = parse_circuit(text)?;
    let wrt = vec!["x".to_string(), "y".to_string()];
    let grad = gradient_circuit(&c, &wrt)?;

    println!(
        "size {} -> {} ({}x, bound 5x holds: {})",
        grad.size_before,
        grad.size_after,
        grad.size_after as f64 / grad.size_before as f64,
        grad.bound_ok
    );

    // Check the outputs against symbolic differentiation of the expansion.
    let f = &expand(&c, DEFAULT_TERM_BUDGET)?[0];
    let computed = expand(&grad.circuit, DEFAULT_TERM_BUDGET)?;
    for (var, got) in wrt.iter().zip(&computed) {
        let want = f.partial_derivative(var)?;
        assert_eq!(got, &want, "derivative along {var} disagrees");
        println!("d/d{var} = {got}");
    }
    println!("all partial derivatives match the symbolic ones exactly");
    Ok(())
}
