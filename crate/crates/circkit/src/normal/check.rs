//! Normal-form verification. Violations are returned as data, never as
//! errors: callers decide whether a violation is fatal.
//!
//! A circuit is accepted when (1) it has no constant-one gate, (2) every
//! edge leaving an input enters a sum, (3) every output is a sum, (4) gates
//! alternate — a product's children are sums, a sum's children are products
//! or inputs, (5) every product has in-degree exactly 2, (6) every sum has
//! out-degree at most 1 — and additionally every sum's children share one
//! syntactic degree (the labeled-graph homogeneity criterion) and every
//! gate's expanded polynomial is zero or homogeneous of exactly its
//! syntactic degree.

use std::fmt;

use crate::circuit::{expand_all_nodes, Circuit, NodeKind};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NormalFormViolation {
    SimpleGate { node: String },
    InputFeedsNonSum { input: String, parent: String },
    OutputNotSum { slot: usize, node: String },
    ProductChildNotSum { child: String, parent: String },
    SumChildIsSum { child: String, parent: String },
    ProductInDegree { node: String, in_degree: usize },
    SumOutDegree { node: String, out_degree: usize },
    SumChildrenDegreesDiffer { node: String },
    NotHomogeneousAtNode { node: String, syntactic: u64, found: u32 },
}

impl fmt::Display for NormalFormViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NormalFormViolation::*;
        match self {
            SimpleGate { node } => write!(f, "constant-one gate `{node}` present"),
            InputFeedsNonSum { input, parent } => {
                write!(f, "input `{input}` feeds non-sum `{parent}`")
            }
            OutputNotSum { slot, node } => {
                write!(f, "output slot {slot} is `{node}`, not a sum-gate")
            }
            ProductChildNotSum { child, parent } => {
                write!(f, "product `{parent}` has non-sum child `{child}`")
            }
            SumChildIsSum { child, parent } => {
                write!(f, "sum `{parent}` has sum child `{child}`")
            }
            ProductInDegree { node, in_degree } => {
                write!(f, "product `{node}` has in-degree {in_degree}, want 2")
            }
            SumOutDegree { node, out_degree } => {
                write!(f, "sum `{node}` has out-degree {out_degree}, want ≤ 1")
            }
            SumChildrenDegreesDiffer { node } => {
                write!(f, "sum `{node}` mixes children of different syntactic degree")
            }
            NotHomogeneousAtNode {
                node,
                syntactic,
                found,
            } => write!(
                f,
                "`{node}` computes a polynomial with a degree-{found} term, \
                 syntactic degree is {syntactic}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormReport {
    pub ok: bool,
    pub violations: Vec<NormalFormViolation>,
}

pub fn check_normal_form(c: &Circuit, budget: u64) -> Result<NormalFormReport> {
    c.validate()?;
    let mut violations = Vec::new();
    let degs = c.syntactic_degrees()?;
    let out_degrees = c.out_degrees();

    for (v, node) in c.nodes().iter().enumerate() {
        match &node.kind {
            NodeKind::One => violations.push(NormalFormViolation::SimpleGate {
                node: node.name.clone(),
            }),
            NodeKind::Input(_) => {}
            NodeKind::Sum => {
                if out_degrees[v] > 1 {
                    violations.push(NormalFormViolation::SumOutDegree {
                        node: node.name.clone(),
                        out_degree: out_degrees[v],
                    });
                }
                let mut child_degs = node.in_edges.iter().map(|&(ch, _)| degs[ch]);
                if let Some(d0) = child_degs.next() {
                    if !child_degs.all(|d| d == d0) {
                        violations.push(NormalFormViolation::SumChildrenDegreesDiffer {
                            node: node.name.clone(),
                        });
                    }
                }
                for &(ch, _) in &node.in_edges {
                    if matches!(c.nodes()[ch].kind, NodeKind::Sum) {
                        violations.push(NormalFormViolation::SumChildIsSum {
                            child: c.nodes()[ch].name.clone(),
                            parent: node.name.clone(),
                        });
                    }
                }
            }
            NodeKind::Product => {
                if node.in_edges.len() != 2 {
                    violations.push(NormalFormViolation::ProductInDegree {
                        node: node.name.clone(),
                        in_degree: node.in_edges.len(),
                    });
                }
                for &(ch, _) in &node.in_edges {
                    if !matches!(c.nodes()[ch].kind, NodeKind::Sum) {
                        violations.push(NormalFormViolation::ProductChildNotSum {
                            child: c.nodes()[ch].name.clone(),
                            parent: node.name.clone(),
                        });
                    }
                }
            }
        }
        // edges out of inputs must enter sums, checked from the child side
        for &(ch, _) in &node.in_edges {
            if matches!(c.nodes()[ch].kind, NodeKind::Input(_))
                && !matches!(node.kind, NodeKind::Sum)
            {
                violations.push(NormalFormViolation::InputFeedsNonSum {
                    input: c.nodes()[ch].name.clone(),
                    parent: node.name.clone(),
                });
            }
        }
    }

    for (slot, &o) in c.outputs().iter().enumerate() {
        if !matches!(c.nodes()[o].kind, NodeKind::Sum) {
            violations.push(NormalFormViolation::OutputNotSum {
                slot,
                node: c.nodes()[o].name.clone(),
            });
        }
    }

    // semantic homogeneity, gate by gate
    let polys = expand_all_nodes(c, budget)?;
    for (v, p) in polys.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let want = degs[v] as u32;
        let bad = p
            .terms()
            .keys()
            .map(|m| m.total_degree())
            .find(|&d| d != want);
        if let Some(found) = bad {
            violations.push(NormalFormViolation::NotHomogeneousAtNode {
                node: c.nodes()[v].name.clone(),
                syntactic: degs[v],
                found,
            });
        }
    }

    Ok(NormalFormReport {
        ok: violations.is_empty(),
        violations,
    })
}
