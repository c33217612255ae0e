//! One graph to hold them all: every normal-form circuit of size at most
//! s (degree r, n inputs, m outputs) embeds into the fixed universal
//! graph for those parameters by choosing edge labels alone.

use std::sync::Arc;

use circkit::circuit::{expand, parse_circuit, DEFAULT_TERM_BUDGET};
use circkit::normal::normalize;
use circkit::universal::{build_universal, embed, instantiate};

fn main() -> circkit::Result<()> {
    let text = "\
field Q
input x11
input x12
input x21
input x22
p1 = * 1:x11 1:x22
p2 = * 1:x12 1:x21
g = + 1:p1 1:p2
output g
";
    let psi = normalize(&parse_circuit(text)?, 2)?.circuit;
    let s = psi.size() as u64;
    let n = psi.input_vars().len();

    let g = build_universal(s, 2, n, 1)?;
    println!(
        "universal graph for (s={s}, r=2, n={n}, m=1): {} nodes, {} labeled edges (< {})",
        g.num_nodes(),
        g.sum_edge_count(),
        g.sum_edge_bound()
    );

    // Embedding assigns a scalar to some of the labeled edges; every node
    // of the circuit lands on a slot of the graph.
    let emb = embed(&g, &psi)?;
    println!(
        "embedded: {} of {} slots used, {} labels set",
        emb.node_map.len(),
        g.num_nodes(),
        emb.labels.len()
    );

    // Instantiating the graph at those labels gives back the circuit's
    // polynomials, with inputs renamed to the graph's z1..zn.
    let inst = instantiate(&g, psi.field(), &emb.labels)?;
    let zs: Arc<Vec<String>> = Arc::new((1..=n).map(|k| format!("z{k}")).collect());
    let original = expand(&psi, DEFAULT_TERM_BUDGET)?[0].rename_vars(zs)?;
    let recovered = &expand(&inst, DEFAULT_TERM_BUDGET)?[0];
    assert_eq!(&original, recovered);
    println!("instantiation recovers the permanent exactly: {recovered}");
    Ok(())
}
