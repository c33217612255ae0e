//! Gradient circuits by reverse-mode differentiation.
//!
//! Given a single-output circuit of fanin at most two computing f, builds a
//! circuit whose outputs are the partial derivatives ∂f/∂x for a requested
//! list of variables. The original circuit is kept intact (its intermediate
//! values appear as factors of the adjoints) and every original edge spawns
//! at most three new edges, so the result has at most four times the edges
//! of the input; the constructor records the measured sizes rather than
//! assuming the bound.

use crate::algebra::scalar::Scalar;
use crate::circuit::{fresh_name, taken_names, Circuit, NodeKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradientResult {
    pub circuit: Circuit,
    pub size_before: usize,
    pub size_after: usize,
    /// Whether the measured sizes satisfy size_after < 5·size_before.
    pub bound_ok: bool,
}

pub fn gradient_circuit(c: &Circuit, wrt: &[String]) -> Result<GradientResult> {
    c.validate()?;
    if c.outputs().len() != 1 {
        return Err(Error::MultipleOutputs(c.outputs().len()));
    }
    let max_fanin = c
        .nodes()
        .iter()
        .map(|n| n.in_edges.len())
        .max()
        .unwrap_or(0);
    if max_fanin > 2 {
        return Err(Error::FaninTooLarge(max_fanin));
    }
    let root = c.outputs()[0];
    let size_before = c.size();

    // Copy the original circuit; node indices carry over unchanged.
    let mut g = Circuit::new(c.field());
    for node in c.nodes() {
        let v = g.add_node(node.kind.clone(), node.name.clone());
        debug_assert_eq!(v, g.num_nodes() - 1);
    }
    for (v, node) in c.nodes().iter().enumerate() {
        for &(child, ref label) in &node.in_edges {
            g.add_edge(child, v, label.clone())?;
        }
    }

    let mut taken = taken_names(&g);
    let order = c.topo_order()?;
    let one = Scalar::one(c.field());

    // adjoint_of[v] computes ∂f/∂(value of v); contributions are gathered
    // while processing v's parents, which reverse topological order visits
    // first.
    let mut adjoint_of: Vec<Option<usize>> = vec![None; c.num_nodes()];
    let mut contribs: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); c.num_nodes()];
    for &u in order.iter().rev() {
        let a_u = if u == root {
            g.add_node(NodeKind::One, fresh_name(&mut taken, "adj"))
        } else {
            let name = fresh_name(&mut taken, "d");
            g.add_sum(name, std::mem::take(&mut contribs[u]))?
        };
        adjoint_of[u] = Some(a_u);

        let edges = c.nodes()[u].in_edges.clone();
        match c.nodes()[u].kind {
            NodeKind::Sum => {
                for (v, beta) in edges {
                    contribs[v].push((a_u, beta));
                }
            }
            NodeKind::Product => match edges.as_slice() {
                [] => {}
                [(v, beta)] => {
                    contribs[*v].push((a_u, beta.clone()));
                }
                [(v, beta), (w, gamma)] => {
                    let coef = beta.mul(gamma)?;
                    let p1 = g.add_product(
                        fresh_name(&mut taken, "dp"),
                        vec![(a_u, coef.clone()), (*w, one.clone())],
                    )?;
                    contribs[*v].push((p1, one.clone()));
                    let p2 = g.add_product(
                        fresh_name(&mut taken, "dp"),
                        vec![(a_u, coef), (*v, one.clone())],
                    )?;
                    contribs[*w].push((p2, one.clone()));
                }
                _ => unreachable!("fanin checked above"),
            },
            NodeKind::Input(_) | NodeKind::One => {}
        }
    }

    let mut outputs = Vec::with_capacity(wrt.len());
    for var in wrt {
        let node = c
            .nodes()
            .iter()
            .position(|n| matches!(&n.kind, NodeKind::Input(v) if v == var));
        match node {
            Some(v) => outputs.push(adjoint_of[v].expect("all nodes visited")),
            // a variable the circuit never reads: its derivative is 0
            None => outputs.push(g.add_node(NodeKind::Sum, fresh_name(&mut taken, "d"))),
        }
    }
    g.set_outputs(outputs)?;
    g.validate()?;

    let size_after = g.size();
    // A circuit with no edges computes a bare input or constant; the strict
    // inequality cannot hold at 0 and the construction added nothing, so
    // report that case as within bounds.
    let bound_ok = size_after < 5 * size_before || (size_before == 0 && size_after == 0);
    Ok(GradientResult {
        circuit: g,
        size_before,
        size_after,
        bound_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::expand::{expand, DEFAULT_TERM_BUDGET};
    use crate::circuit::parse_circuit;

    fn grad_polys(src: &str, wrt: &[&str]) -> (GradientResult, Vec<String>) {
        let c = parse_circuit(src).unwrap();
        let wrt: Vec<String> = wrt.iter().map(|s| s.to_string()).collect();
        let r = gradient_circuit(&c, &wrt).unwrap();
        let polys = expand(&r.circuit, DEFAULT_TERM_BUDGET)
            .unwrap()
            .iter()
            .map(|p| p.to_string())
            .collect();
        (r, polys)
    }

    #[test]
    fn gradient_of_product_of_two() {
        let (r, polys) = grad_polys(
            "field Q\ninput x1\ninput x2\np = * 1:x1 1:x2\noutput p\n",
            &["x1", "x2"],
        );
        assert_eq!(polys, vec!["x2", "x1"]);
        assert!(r.bound_ok);
        assert!(r.size_after < 5 * r.size_before);
    }

    #[test]
    fn gradient_of_product_of_three() {
        let (r, polys) = grad_polys(
            "field Q\ninput x1\ninput x2\ninput x3\na = * 1:x1 1:x2\np = * 1:a 1:x3\noutput p\n",
            &["x1", "x2", "x3"],
        );
        assert_eq!(polys, vec!["x2*x3", "x1*x3", "x1*x2"]);
        assert!(r.bound_ok);
    }

    #[test]
    fn gradient_handles_labels_and_squares() {
        // f = (2x - y)^2: df/dx = 8x - 4y, df/dy = -4x + 2y
        let (r, polys) = grad_polys(
            "field Q\ninput x\ninput y\ns = + 2:x -1:y\np = * 1:s 1:s\noutput p\n",
            &["x", "y"],
        );
        assert_eq!(polys, vec!["8*x + -4*y", "-4*x + 2*y"]);
        assert!(r.bound_ok);
    }

    #[test]
    fn unused_variable_has_zero_gradient() {
        let (_, polys) = grad_polys(
            "field Q\ninput x\ninput y\np = * 1:x 1:x\noutput p\n",
            &["y", "x"],
        );
        assert_eq!(polys, vec!["0", "2*x"]);
    }

    #[test]
    fn degenerate_identity_circuit() {
        let c = parse_circuit("field Q\ninput x\noutput x\n").unwrap();
        let r = gradient_circuit(&c, &["x".to_string()]).unwrap();
        assert_eq!(r.size_before, 0);
        assert_eq!(r.size_after, 0);
        assert!(r.bound_ok);
        let p = expand(&r.circuit, DEFAULT_TERM_BUDGET).unwrap().remove(0);
        assert_eq!(p.to_string(), "1");
    }

    #[test]
    fn preconditions_enforced() {
        let two_outputs =
            parse_circuit("field Q\ninput x\na = + 1:x\nb = + 2:x\noutput a b\n").unwrap();
        assert_eq!(
            gradient_circuit(&two_outputs, &["x".to_string()]),
            Err(Error::MultipleOutputs(2))
        );
        let wide = parse_circuit("field Q\ninput x\ng = + 1:x 1:x 1:x\noutput g\n").unwrap();
        assert_eq!(
            gradient_circuit(&wide, &["x".to_string()]),
            Err(Error::FaninTooLarge(3))
        );
    }

    #[test]
    fn matches_symbolic_differentiation() {
        let c = parse_circuit(
            "field Q\ninput x\ninput y\na = + 1:x 3:y\nb = * 2:a 1:y\ng = + 1:b -1:x\noutput g\n",
        )
        .unwrap();
        let f = expand(&c, DEFAULT_TERM_BUDGET).unwrap().remove(0);
        let r = gradient_circuit(&c, &["x".to_string(), "y".to_string()]).unwrap();
        let grads = expand(&r.circuit, DEFAULT_TERM_BUDGET).unwrap();
        assert_eq!(grads[0], f.partial_derivative("x").unwrap());
        assert_eq!(grads[1], f.partial_derivative("y").unwrap());
    }
}
