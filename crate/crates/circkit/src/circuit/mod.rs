//! Arithmetic circuits as labeled DAGs.
//!
//! A circuit is a vector of nodes (input, the constant one, sum, product),
//! each carrying its list of in-edges `(child index, nonzero label)`, plus an
//! ordered list of output nodes. An edge labeled α feeds α times the child's
//! value into the parent; sums add their incoming contributions and products
//! multiply them. Conventions: a sum with no in-edges computes 0, a product
//! with no in-edges computes 1. Size is the edge count.
//!
//! Invariants: the graph is acyclic; input and one nodes have in-degree 0;
//! outputs have out-degree 0; edge labels are nonzero (adding a zero-labeled
//! edge is a no-op); node names are unique, and an input node's name is its
//! variable. Parallel edges are allowed and meaningful (two product edges
//! from the same child square it).

pub mod expand;
pub mod gradient;
pub mod text;
pub mod transform;

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::scalar::{FieldTag, Scalar};
use crate::error::{Error, Result};

pub use expand::{expand, expand_all_nodes, DEFAULT_TERM_BUDGET};
pub use gradient::{gradient_circuit, GradientResult};
pub use text::{parse_circuit, serialize_circuit};
pub use transform::substitute;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Input(String),
    One,
    Sum,
    Product,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub name: String,
    /// In-edges as (child index, label); label is always nonzero.
    pub in_edges: Vec<(usize, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    field: FieldTag,
    nodes: Vec<Node>,
    outputs: Vec<usize>,
}

/// Node kinds and wiring with the labels stripped: the underlying graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitGraph {
    pub kinds: Vec<NodeKind>,
    pub in_edges: Vec<Vec<usize>>,
    pub outputs: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    /// Number of edges.
    pub size: usize,
    /// Length (in edges) of the longest directed path.
    pub depth: usize,
    /// Maximum in-degree.
    pub fanin: usize,
}

impl Circuit {
    pub fn new(field: FieldTag) -> Circuit {
        Circuit {
            field,
            nodes: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    /// Number of edges; the size measure every bound is stated in.
    pub fn size(&self) -> usize {
        self.nodes.iter().map(|n| n.in_edges.len()).sum()
    }

    pub fn add_node(&mut self, kind: NodeKind, name: impl Into<String>) -> usize {
        let name = name.into();
        debug_assert!(
            !matches!(&kind, NodeKind::Input(v) if *v != name),
            "input node must be named after its variable"
        );
        self.nodes.push(Node {
            kind,
            name,
            in_edges: Vec::new(),
        });
        self.nodes.len() - 1
    }

    pub fn add_input(&mut self, var: impl Into<String>) -> usize {
        let var = var.into();
        self.add_node(NodeKind::Input(var.clone()), var)
    }

    /// Adds an edge child → parent. Zero labels are dropped (absence encodes
    /// a zero contribution). Field mismatch and bad indices are errors.
    pub fn add_edge(&mut self, child: usize, parent: usize, label: Scalar) -> Result<()> {
        if label.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if child >= self.nodes.len() || parent >= self.nodes.len() {
            return Err(Error::DanglingReference(format!(
                "edge {child} -> {parent} out of range"
            )));
        }
        if matches!(
            self.nodes[parent].kind,
            NodeKind::Input(_) | NodeKind::One
        ) {
            return Err(Error::InvalidCircuit(format!(
                "node `{}` takes no in-edges",
                self.nodes[parent].name
            )));
        }
        if label.is_zero() {
            return Ok(());
        }
        self.nodes[parent].in_edges.push((child, label));
        Ok(())
    }

    /// Convenience: new sum gate over existing children.
    pub fn add_sum(
        &mut self,
        name: impl Into<String>,
        edges: Vec<(usize, Scalar)>,
    ) -> Result<usize> {
        let v = self.add_node(NodeKind::Sum, name);
        for (c, l) in edges {
            self.add_edge(c, v, l)?;
        }
        Ok(v)
    }

    /// Convenience: new product gate over existing children.
    pub fn add_product(
        &mut self,
        name: impl Into<String>,
        edges: Vec<(usize, Scalar)>,
    ) -> Result<usize> {
        let v = self.add_node(NodeKind::Product, name);
        for (c, l) in edges {
            self.add_edge(c, v, l)?;
        }
        Ok(v)
    }

    pub fn set_outputs(&mut self, outputs: Vec<usize>) -> Result<()> {
        for &o in &outputs {
            if o >= self.nodes.len() {
                return Err(Error::DanglingReference(format!("output {o} out of range")));
            }
        }
        self.outputs = outputs;
        Ok(())
    }

    /// Out-degree of each node (number of edges it feeds).
    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.nodes.len()];
        for n in &self.nodes {
            for &(c, _) in &n.in_edges {
                deg[c] += 1;
            }
        }
        deg
    }

    /// Topological order, smallest index first among ready nodes; fails on a
    /// cycle. On a storage order that is already topological this returns
    /// the identity permutation, which keeps serialization stable.
    pub fn topo_order(&self) -> Result<Vec<usize>> {
        let n = self.nodes.len();
        let mut remaining: Vec<usize> = self.nodes.iter().map(|nd| nd.in_edges.len()).collect();
        let mut children_of: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (v, nd) in self.nodes.iter().enumerate() {
            for &(c, _) in &nd.in_edges {
                children_of[c].push(v);
            }
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| remaining[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            order.push(v);
            for &p in &children_of[v] {
                remaining[p] -= 1;
                if remaining[p] == 0 {
                    ready.insert(p);
                }
            }
        }
        if order.len() != n {
            return Err(Error::CycleDetected);
        }
        Ok(order)
    }

    /// Full structural check: acyclicity, in-degree restrictions, unique
    /// names, input naming, and outputs with out-degree 0.
    pub fn validate(&self) -> Result<()> {
        self.topo_order()?;
        let mut names: BTreeSet<&str> = BTreeSet::new();
        for node in &self.nodes {
            if !names.insert(&node.name) {
                return Err(Error::InvalidCircuit(format!(
                    "duplicate node name `{}`",
                    node.name
                )));
            }
            match &node.kind {
                NodeKind::Input(v) => {
                    if *v != node.name {
                        return Err(Error::InvalidCircuit(format!(
                            "input node `{}` must be named after its variable `{v}`",
                            node.name
                        )));
                    }
                    if !node.in_edges.is_empty() {
                        return Err(Error::InvalidCircuit(format!(
                            "input `{}` has in-edges",
                            node.name
                        )));
                    }
                }
                NodeKind::One => {
                    if !node.in_edges.is_empty() {
                        return Err(Error::InvalidCircuit(format!(
                            "one-node `{}` has in-edges",
                            node.name
                        )));
                    }
                }
                _ => {}
            }
            for &(_, ref l) in &node.in_edges {
                if l.is_zero() {
                    return Err(Error::InvalidCircuit("zero edge label".into()));
                }
                if l.field() != self.field {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        let out_deg = self.out_degrees();
        for &o in &self.outputs {
            if out_deg[o] != 0 {
                return Err(Error::InvalidCircuit(format!(
                    "output `{}` feeds another node",
                    self.nodes[o].name
                )));
            }
        }
        Ok(())
    }

    /// Sorted list of input variables.
    pub fn input_vars(&self) -> Vec<String> {
        let mut vars: Vec<String> = self
            .nodes
            .iter()
            .filter_map(|n| match &n.kind {
                NodeKind::Input(v) => Some(v.clone()),
                _ => None,
            })
            .collect();
        vars.sort();
        vars
    }

    pub fn metrics(&self) -> Metrics {
        let order = self.topo_order().expect("valid circuit");
        let mut depth = vec![0usize; self.nodes.len()];
        let mut max_depth = 0;
        let mut max_fanin = 0;
        for &v in &order {
            let node = &self.nodes[v];
            max_fanin = max_fanin.max(node.in_edges.len());
            for &(c, _) in &node.in_edges {
                depth[v] = depth[v].max(depth[c] + 1);
            }
            max_depth = max_depth.max(depth[v]);
        }
        Metrics {
            size: self.size(),
            depth: max_depth,
            fanin: max_fanin,
        }
    }

    /// Per-node syntactic degree: one ↦ 0, input ↦ 1, sum ↦ max over
    /// children, product ↦ sum over children (empty sum/product ↦ 0).
    pub fn syntactic_degrees(&self) -> Result<Vec<u64>> {
        let order = self.topo_order()?;
        let mut deg = vec![0u64; self.nodes.len()];
        for &v in &order {
            deg[v] = match &self.nodes[v].kind {
                NodeKind::One => 0,
                NodeKind::Input(_) => 1,
                NodeKind::Sum => self.nodes[v]
                    .in_edges
                    .iter()
                    .map(|&(c, _)| deg[c])
                    .max()
                    .unwrap_or(0),
                NodeKind::Product => {
                    let mut acc: u64 = 0;
                    for &(c, _) in &self.nodes[v].in_edges {
                        acc = acc.checked_add(deg[c]).ok_or(Error::DegreeOverflow)?;
                    }
                    acc
                }
            };
        }
        Ok(deg)
    }

    /// Exact evaluation at a point covering every input variable.
    pub fn evaluate(&self, point: &BTreeMap<String, Scalar>) -> Result<Vec<Scalar>> {
        let order = self.topo_order()?;
        let mut val: Vec<Option<Scalar>> = vec![None; self.nodes.len()];
        for &v in &order {
            let node = &self.nodes[v];
            let value = match &node.kind {
                NodeKind::One => Scalar::one(self.field),
                NodeKind::Input(var) => {
                    let s = point
                        .get(var)
                        .ok_or_else(|| Error::MissingVariable(var.clone()))?;
                    if s.field() != self.field {
                        return Err(Error::FieldMismatch);
                    }
                    s.clone()
                }
                NodeKind::Sum => {
                    let mut acc = Scalar::zero(self.field);
                    for &(c, ref l) in &node.in_edges {
                        let t = l.mul(val[c].as_ref().expect("topo order"))?;
                        acc = acc.add(&t)?;
                    }
                    acc
                }
                NodeKind::Product => {
                    let mut acc = Scalar::one(self.field);
                    for &(c, ref l) in &node.in_edges {
                        let t = l.mul(val[c].as_ref().expect("topo order"))?;
                        acc = acc.mul(&t)?;
                    }
                    acc
                }
            };
            val[v] = Some(value);
        }
        Ok(self
            .outputs
            .iter()
            .map(|&o| val[o].clone().expect("topo order"))
            .collect())
    }

    pub fn underlying_graph(&self) -> CircuitGraph {
        CircuitGraph {
            kinds: self.nodes.iter().map(|n| n.kind.clone()).collect(),
            in_edges: self
                .nodes
                .iter()
                .map(|n| n.in_edges.iter().map(|&(c, _)| c).collect())
                .collect(),
            outputs: self.outputs.clone(),
        }
    }

    /// Canonical text form; two circuits are structurally interchangeable
    /// iff these agree.
    pub fn canonical_text(&self) -> String {
        serialize_circuit(self)
    }
}

/// Returns a name with the given prefix that is not yet taken, and takes it.
pub(crate) fn fresh_name(taken: &mut BTreeSet<String>, prefix: &str) -> String {
    let mut k = 0usize;
    loop {
        let cand = format!("{prefix}{k}");
        if taken.insert(cand.clone()) {
            return cand;
        }
        k += 1;
    }
}

/// Takes the wanted name if free, otherwise a numbered variant of it.
pub(crate) fn claim_name(taken: &mut BTreeSet<String>, want: impl Into<String>) -> String {
    let want = want.into();
    if taken.insert(want.clone()) {
        want
    } else {
        fresh_name(taken, &want)
    }
}

pub(crate) fn taken_names(c: &Circuit) -> BTreeSet<String> {
    c.nodes().iter().map(|n| n.name.clone()).collect()
}
