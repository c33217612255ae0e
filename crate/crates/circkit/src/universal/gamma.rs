//! Symbolic view of the universal graph: give every sum edge its own
//! indeterminate y_e and every input its own z_k, then expand each output.
//! The result describes all circuits the graph can instantiate at once —
//! substituting field elements for the y variables is exactly
//! [`instantiate`](super::instantiate) followed by expansion.
//!
//! Each node's polynomial is bihomogeneous: a sum of syntactic degree d has
//! y-degree 2d−1 and z-degree d, a product has y-degree 2d−2 and z-degree
//! d, so every output has y-degree 2r−1 and z-degree r. Construction checks
//! this for every node and fails loudly if it ever breaks.
//!
//! Term counts multiply along levels, so this is only feasible for small
//! graphs; the budget caps per-node term counts and the variable count.

use std::collections::BTreeMap;

use crate::algebra::{FieldTag, Monomial, Scalar, SparsePoly};
use crate::error::{Error, Result};

use super::{SlotKind, UniversalGraph};

/// Outputs of the graph as polynomials in the edge variables y_e (one per
/// sum edge, in edge-id order) followed by the input variables z_1..z_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMap {
    pub y_vars: Vec<String>,
    pub z_vars: Vec<String>,
    pub outputs: Vec<SparsePoly>,
}

const MAX_SYMBOLIC_VARS: u64 = 2000;

fn bidegree(m: &Monomial, y_count: usize) -> (u32, u32) {
    let y: u32 = m.0[..y_count].iter().sum();
    let z: u32 = m.0[y_count..].iter().sum();
    (y, z)
}

/// Expands every output of `g` over indeterminate edge labels. `budget`
/// caps the term count of any node's polynomial.
pub fn gamma_map(g: &UniversalGraph, budget: u64) -> Result<GammaMap> {
    let e = g.sum_edge_count();
    let n = g.params.n;
    if (e + n) as u64 > MAX_SYMBOLIC_VARS {
        return Err(Error::BudgetExceeded {
            what: format!("symbolic variable count {}", e + n),
            limit: MAX_SYMBOLIC_VARS,
        });
    }
    let y_vars: Vec<String> = (0..e).map(|id| format!("y{id}")).collect();
    let z_vars: Vec<String> = (1..=n).map(|k| format!("z{k}")).collect();
    let mut all = y_vars.clone();
    all.extend(z_vars.iter().cloned());
    let vars = std::sync::Arc::new(all);
    let field = FieldTag::Rational;

    // in-edges of each sum, grouped from the global edge list
    let mut in_edges: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.nodes.len()];
    for (id, &(src, dst)) in g.sum_edges.iter().enumerate() {
        in_edges[dst].push((id, src));
    }

    // node order is level-ascending, hence topological
    let mut polys: Vec<SparsePoly> = Vec::with_capacity(g.nodes.len());
    for (v, slot) in g.nodes.iter().enumerate() {
        let p = match &slot.kind {
            SlotKind::Input { ordinal } => SparsePoly::var(field, vars.clone(), e + ordinal)?,
            SlotKind::Product { .. } => {
                let a = &polys[slot.children[0]];
                let b = &polys[slot.children[1]];
                a.mul(b)?
            }
            SlotKind::Sum { .. } | SlotKind::Output { .. } => {
                let mut acc = SparsePoly::zero(field, vars.clone());
                for &(id, src) in &in_edges[v] {
                    let edge = SparsePoly::var(field, vars.clone(), id)?;
                    acc = acc.add(&edge.mul(&polys[src])?)?;
                    if acc.num_terms() as u64 > budget {
                        return Err(Error::BudgetExceeded {
                            what: format!("symbolic term count at node {v}"),
                            limit: budget,
                        });
                    }
                }
                acc
            }
        };
        if p.num_terms() as u64 > budget {
            return Err(Error::BudgetExceeded {
                what: format!("symbolic term count at node {v}"),
                limit: budget,
            });
        }
        let want = match &slot.kind {
            SlotKind::Input { .. } => (0, 1),
            SlotKind::Product { degree, .. } => (2 * degree - 2, *degree),
            SlotKind::Sum { degree, .. } => (2 * degree - 1, *degree),
            SlotKind::Output { .. } => (2 * g.params.r - 1, g.params.r),
        };
        for m in p.terms().keys() {
            let got = bidegree(m, e);
            if got != want {
                return Err(Error::Internal(format!(
                    "node {v} has a term of bidegree {got:?}, want {want:?}"
                )));
            }
        }
        polys.push(p);
    }

    Ok(GammaMap {
        y_vars,
        z_vars,
        outputs: g.outputs.iter().map(|&o| polys[o].clone()).collect(),
    })
}

/// Evaluates the symbolic outputs at a concrete label assignment by
/// substituting each y_e with its label (unassigned edges get 0), leaving
/// a polynomial in z_1..z_n alone. Agrees with instantiating and expanding.
pub fn specialize_labels(
    gm: &GammaMap,
    field: FieldTag,
    labels: &BTreeMap<usize, Scalar>,
) -> Result<Vec<SparsePoly>> {
    if field != FieldTag::Rational {
        return Err(Error::UnsupportedField(
            "label specialization is only implemented over the rationals".into(),
        ));
    }
    let e = gm.y_vars.len();
    let zvars = std::sync::Arc::new(gm.z_vars.clone());
    let mut out = Vec::with_capacity(gm.outputs.len());
    for p in &gm.outputs {
        let mut q = SparsePoly::zero(field, zvars.clone());
        for (m, c) in p.terms() {
            let mut coeff = c.clone();
            for (i, &exp) in m.0[..e].iter().enumerate() {
                for _ in 0..exp {
                    let lab = labels
                        .get(&i)
                        .cloned()
                        .unwrap_or_else(|| Scalar::zero(field));
                    coeff = coeff.mul(&lab)?;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            let zm = Monomial(m.0[e..].to_vec());
            q.add_term(zm, coeff)?;
        }
        out.push(q);
    }
    Ok(out)
}
