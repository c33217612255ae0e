//! Brute-force symbolic expansion: the semantic oracle for every circuit
//! transformation. Each gate's polynomial is computed bottom-up over the
//! circuit's sorted input-variable list; a per-node term-count budget guards
//! against blowup.

use std::sync::Arc;

use crate::algebra::poly::SparsePoly;
use crate::algebra::scalar::Scalar;
use crate::circuit::{Circuit, NodeKind};
use crate::error::{Error, Result};

/// Default cap on the number of terms of any single gate's polynomial.
pub const DEFAULT_TERM_BUDGET: u64 = 200_000;

/// Polynomial computed by every node, indexed like `c.nodes()`.
pub fn expand_all_nodes(c: &Circuit, budget: u64) -> Result<Vec<SparsePoly>> {
    let vars: Arc<Vec<String>> = Arc::new(c.input_vars());
    let order = c.topo_order()?;
    let field = c.field();
    let mut polys: Vec<Option<SparsePoly>> = vec![None; c.num_nodes()];
    for &v in &order {
        let node = &c.nodes()[v];
        let p = match &node.kind {
            NodeKind::One => SparsePoly::constant(Scalar::one(field), vars.clone()),
            NodeKind::Input(name) => {
                let i = vars.iter().position(|w| w == name).expect("own input");
                SparsePoly::var(field, vars.clone(), i)?
            }
            NodeKind::Sum => {
                let mut acc = SparsePoly::zero(field, vars.clone());
                for &(child, ref label) in &node.in_edges {
                    let t = polys[child].as_ref().expect("topo order").scale(label)?;
                    acc = acc.add(&t)?;
                }
                acc
            }
            NodeKind::Product => {
                let mut acc = SparsePoly::constant(Scalar::one(field), vars.clone());
                for &(child, ref label) in &node.in_edges {
                    let t = polys[child].as_ref().expect("topo order").scale(label)?;
                    acc = acc.mul(&t)?;
                    if acc.num_terms() as u64 > budget {
                        return Err(Error::BudgetExceeded {
                            what: "expansion term count".into(),
                            limit: budget,
                        });
                    }
                }
                acc
            }
        };
        if p.num_terms() as u64 > budget {
            return Err(Error::BudgetExceeded {
                what: "expansion term count".into(),
                limit: budget,
            });
        }
        polys[v] = Some(p);
    }
    Ok(polys.into_iter().map(|p| p.expect("all visited")).collect())
}

/// The polynomial computed by each output, in output order.
pub fn expand(c: &Circuit, budget: u64) -> Result<Vec<SparsePoly>> {
    let all = expand_all_nodes(c, budget)?;
    Ok(c.outputs().iter().map(|&o| all[o].clone()).collect())
}
