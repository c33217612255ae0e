//! Affine specialization of circuit inputs.
//!
//! Substituting a scalar for an input variable keeps the circuit's shape:
//! the input node becomes a one-node and the scalar is folded into the
//! labels of its outgoing edges. A zero assignment instead deletes the node,
//! and zero values propagate structurally — a product with a vanished child
//! vanishes, a sum whose children all vanished vanishes — so the result
//! never carries an edge that contributes nothing.

use std::collections::BTreeMap;

use crate::algebra::scalar::Scalar;
use crate::circuit::{fresh_name, taken_names, Circuit, NodeKind};
use crate::error::{Error, Result};

pub fn substitute(c: &Circuit, assignment: &BTreeMap<String, Scalar>) -> Result<Circuit> {
    let field = c.field();
    let input_of: BTreeMap<&str, usize> = c
        .nodes()
        .iter()
        .enumerate()
        .filter_map(|(i, n)| match &n.kind {
            NodeKind::Input(v) => Some((v.as_str(), i)),
            _ => None,
        })
        .collect();
    for (var, s) in assignment {
        if s.field() != field {
            return Err(Error::FieldMismatch);
        }
        if !input_of.contains_key(var.as_str()) {
            return Err(Error::UnknownVariable(var.clone()));
        }
    }

    // Mark nodes whose value is identically zero after the assignment.
    let order = c.topo_order()?;
    let mut zero = vec![false; c.num_nodes()];
    for &v in &order {
        let node = &c.nodes()[v];
        zero[v] = match &node.kind {
            NodeKind::Input(var) => assignment.get(var).is_some_and(|s| s.is_zero()),
            NodeKind::One => false,
            NodeKind::Sum => {
                !node.in_edges.is_empty() && node.in_edges.iter().all(|&(ch, _)| zero[ch])
            }
            NodeKind::Product => node.in_edges.iter().any(|&(ch, _)| zero[ch]),
        };
    }

    // Rebuild, dropping zero nodes and folding nonzero assignments into
    // outgoing edge labels.
    let mut out = Circuit::new(field);
    let mut new_index = vec![None; c.num_nodes()];
    let mut out_multiplier: Vec<Option<Scalar>> = vec![None; c.num_nodes()];
    for &v in &order {
        if zero[v] {
            continue;
        }
        let node = &c.nodes()[v];
        let idx = match &node.kind {
            NodeKind::Input(var) => match assignment.get(var) {
                Some(s) => {
                    out_multiplier[v] = Some(s.clone());
                    out.add_node(NodeKind::One, node.name.clone())
                }
                None => out.add_input(var.clone()),
            },
            NodeKind::One => out.add_node(NodeKind::One, node.name.clone()),
            NodeKind::Sum => out.add_node(NodeKind::Sum, node.name.clone()),
            NodeKind::Product => out.add_node(NodeKind::Product, node.name.clone()),
        };
        new_index[v] = Some(idx);
        for &(child, ref label) in &node.in_edges {
            if zero[child] {
                continue;
            }
            let mut l = label.clone();
            if let Some(m) = &out_multiplier[child] {
                l = l.mul(m)?;
            }
            out.add_edge(new_index[child].expect("topo order"), idx, l)?;
        }
    }

    let mut taken = taken_names(&out);
    let mut outputs = Vec::with_capacity(c.outputs().len());
    for &o in c.outputs() {
        if zero[o] {
            // the output vanished; stand in an empty sum, which computes 0
            let name = fresh_name(&mut taken, "z");
            outputs.push(out.add_node(NodeKind::Sum, name));
        } else {
            let idx = new_index[o].expect("kept");
            match &out_multiplier[o] {
                // an assigned input used directly as an output: the scalar
                // has no edge to live on, so wrap it in a one-edge sum
                Some(m) => {
                    let name = fresh_name(&mut taken, "w");
                    let wrap = out.add_sum(name, vec![(idx, m.clone())])?;
                    outputs.push(wrap);
                }
                None => outputs.push(idx),
            }
        }
    }
    out.set_outputs(outputs)?;
    out.validate()?;
    Ok(out)
}
