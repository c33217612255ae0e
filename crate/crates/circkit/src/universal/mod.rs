//! A fixed circuit shape into which every normal-form circuit of a given
//! size budget embeds: parameters (s, r, n, m) with n, m ≤ s and r ≥ 1
//! produce a graph whose distinguished "sum edges" — the edges leading into
//! sum-gates — act as label slots. Assigning field elements to those slots
//! yields concrete circuits; one assignment per normal-form circuit of the
//! right shape reproduces it exactly.
//!
//! Structure: nodes sit on levels 1..2r, where levels 2i−1 and 2i hold
//! gates of syntactic degree i. Level 1 has the n inputs; odd level 2i−1
//! holds product slots in types j ∈ [1, ⌊i/2⌋] of exactly 8s slots each;
//! inner even levels hold sum slots, materialized only when a product needs
//! a child there (each inner sum feeds exactly one product, so the count is
//! demand-driven and stays within the 16·s·r capacity); level 2r holds the
//! m output sums. A type-j product at level 2i−1 has exactly two children,
//! one sum at level 2j and one at level 2i−2j. Every sum receives one edge
//! from every node on the level directly below it; those are the sum edges,
//! ordered by level, then sum, then source, and their count stays below
//! 64·s²·r³.
//!
//! [`instantiate`] turns a label assignment into a circuit (unlabeled sum
//! edges are absent, product edges carry 1); [`embed`] computes such an
//! assignment for a normal-form circuit; the symbolic mapping over
//! indeterminate labels lives in [`gamma`].

mod gamma;

pub use gamma::{gamma_map, specialize_labels, GammaMap};

use std::collections::BTreeMap;

use crate::algebra::{FieldTag, Scalar};
use crate::circuit::{Circuit, NodeKind, DEFAULT_TERM_BUDGET};
use crate::error::{Error, Result};
use crate::normal::check_normal_form;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalParams {
    pub s: u64,
    pub r: u32,
    pub n: usize,
    pub m: usize,
}

/// What a slot in the graph is. Degrees are syntactic; ordinals count
/// within a (level, type) group in creation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotKind {
    Input { ordinal: usize },
    /// Inner sum at level 2·degree.
    Sum { degree: u32, ordinal: u64 },
    /// Output sum at level 2·r.
    Output { slot: usize },
    /// Product of the given degree and type at level 2·degree−1.
    Product { degree: u32, ty: u32, ordinal: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSlot {
    pub kind: SlotKind,
    pub level: u32,
    /// For products: exactly two sum children (levels 2j and 2i−2j).
    /// Empty for other kinds; sum in-edges live in `sum_edges`.
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalGraph {
    pub params: UniversalParams,
    pub nodes: Vec<GSlot>,
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
    /// Ordered (source, sum) pairs; the position is the edge's id.
    pub sum_edges: Vec<(usize, usize)>,
    edge_index: BTreeMap<(usize, usize), usize>,
    products_by_type: BTreeMap<(u32, u32), Vec<usize>>,
}

impl UniversalGraph {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn sum_edge_count(&self) -> usize {
        self.sum_edges.len()
    }

    /// The guaranteed ceiling 64·s²·r³ on the sum-edge count.
    pub fn sum_edge_bound(&self) -> u128 {
        let s = self.params.s as u128;
        let r = self.params.r as u128;
        64 * s * s * r * r * r
    }

    /// Id of the sum edge source → sum, if the graph has it.
    pub fn edge_id(&self, source: usize, sum: usize) -> Option<usize> {
        self.edge_index.get(&(source, sum)).copied()
    }

    /// Product slots of the given degree and type, in ordinal order.
    pub fn products_of_type(&self, degree: u32, ty: u32) -> &[usize] {
        self.products_by_type
            .get(&(degree, ty))
            .map_or(&[], |v| v.as_slice())
    }
}

const MAX_NODES: u64 = 5_000_000;
const MAX_SUM_EDGES: u64 = 20_000_000;

/// Builds the universal graph for parameters (s, r, n, m) with n, m ≤ s
/// and r ≥ 1. Structure and counts are deterministic in the parameters.
pub fn build_universal(s: u64, r: u32, n: usize, m: usize) -> Result<UniversalGraph> {
    if r == 0 {
        return Err(Error::ParamViolation(
            "universal graph needs a degree of at least 1".into(),
        ));
    }
    if n as u64 > s || m as u64 > s {
        return Err(Error::ParamViolation(format!(
            "inputs ({n}) and outputs ({m}) must not exceed the size parameter ({s})"
        )));
    }
    let params = UniversalParams { s, r, n, m };
    let per_type = 8 * s;
    let rr = r as usize;

    // demand[k-1]: sums needed at inner even level 2k, k in [1, r-1]
    let mut demand = vec![0u64; rr.saturating_sub(1)];
    let mut product_total = 0u64;
    for i in 2..=rr {
        for j in 1..=(i / 2) {
            product_total += per_type;
            demand[j - 1] += per_type;
            demand[(i - j) - 1] += per_type;
        }
    }
    let sum_capacity = 16 * s * r as u64;
    for (k, &d) in demand.iter().enumerate() {
        if d > sum_capacity {
            return Err(Error::Internal(format!(
                "sum demand {d} at level {} exceeds capacity {sum_capacity}",
                2 * (k + 1)
            )));
        }
    }
    let node_total = n as u64 + m as u64 + product_total + demand.iter().sum::<u64>();
    if node_total > MAX_NODES {
        return Err(Error::ParamViolation(format!(
            "graph would have {node_total} nodes; refusing to materialize"
        )));
    }

    // node count per level, to pre-compute the edge total
    let products_at = |i: usize| -> u64 { per_type * (i / 2) as u64 };
    let mut edge_total = 0u64;
    for k in 1..=rr {
        let sums = if k == rr { m as u64 } else { demand[k - 1] };
        let sources = if k == 1 { n as u64 } else { products_at(k) };
        edge_total += sums * sources;
    }
    if edge_total > MAX_SUM_EDGES {
        return Err(Error::ParamViolation(format!(
            "graph would have {edge_total} sum edges; refusing to materialize"
        )));
    }

    // materialize nodes level by level
    let mut nodes: Vec<GSlot> = Vec::with_capacity(node_total as usize);
    let mut level_nodes: Vec<Vec<usize>> = vec![Vec::new(); 2 * rr + 1];
    let mut inputs = Vec::with_capacity(n);
    let mut outputs = Vec::with_capacity(m);
    let mut inner_sums: Vec<Vec<usize>> = vec![Vec::new(); rr]; // by degree k, index k-1
    let mut products_by_type: BTreeMap<(u32, u32), Vec<usize>> = BTreeMap::new();

    for level in 1..=2 * rr {
        if level % 2 == 1 {
            let i = (level + 1) / 2;
            if i == 1 {
                for ordinal in 0..n {
                    let id = nodes.len();
                    nodes.push(GSlot {
                        kind: SlotKind::Input { ordinal },
                        level: level as u32,
                        children: Vec::new(),
                    });
                    inputs.push(id);
                    level_nodes[level].push(id);
                }
            } else {
                for j in 1..=(i / 2) {
                    let pool = products_by_type
                        .entry((i as u32, j as u32))
                        .or_default();
                    for ordinal in 0..per_type {
                        let id = nodes.len();
                        nodes.push(GSlot {
                            kind: SlotKind::Product {
                                degree: i as u32,
                                ty: j as u32,
                                ordinal,
                            },
                            level: level as u32,
                            children: Vec::new(),
                        });
                        pool.push(id);
                        level_nodes[level].push(id);
                    }
                }
            }
        } else {
            let k = level / 2;
            if k == rr {
                for slot in 0..m {
                    let id = nodes.len();
                    nodes.push(GSlot {
                        kind: SlotKind::Output { slot },
                        level: level as u32,
                        children: Vec::new(),
                    });
                    outputs.push(id);
                    level_nodes[level].push(id);
                }
            } else {
                for ordinal in 0..demand[k - 1] {
                    let id = nodes.len();
                    nodes.push(GSlot {
                        kind: SlotKind::Sum {
                            degree: k as u32,
                            ordinal,
                        },
                        level: level as u32,
                        children: Vec::new(),
                    });
                    inner_sums[k - 1].push(id);
                    level_nodes[level].push(id);
                }
            }
        }
    }

    // wire product children, consuming inner sums in creation order
    let mut next = vec![0usize; rr];
    for i in 2..=rr {
        for j in 1..=(i / 2) {
            let pool: Vec<usize> = products_by_type[&(i as u32, j as u32)].clone();
            for &p in &pool {
                let a = inner_sums[j - 1][next[j - 1]];
                next[j - 1] += 1;
                let b = inner_sums[(i - j) - 1][next[(i - j) - 1]];
                next[(i - j) - 1] += 1;
                nodes[p].children = vec![a, b];
            }
        }
    }
    for (k, used) in next.iter().enumerate() {
        if k + 1 < rr && *used != inner_sums[k].len() {
            return Err(Error::Internal(format!(
                "inner sums at level {} not fully consumed",
                2 * (k + 1)
            )));
        }
    }

    // sum edges: every sum hears from every node one level below
    let mut sum_edges = Vec::with_capacity(edge_total as usize);
    let mut edge_index = BTreeMap::new();
    for k in 1..=rr {
        let sums: &[usize] = if k == rr {
            &outputs
        } else {
            &inner_sums[k - 1]
        };
        let sources = &level_nodes[2 * k - 1];
        for &sum in sums {
            for &src in sources {
                let id = sum_edges.len();
                sum_edges.push((src, sum));
                edge_index.insert((src, sum), id);
            }
        }
    }

    Ok(UniversalGraph {
        params,
        nodes,
        inputs,
        outputs,
        sum_edges,
        edge_index,
        products_by_type,
    })
}

/// A placement of a normal-form circuit into the universal graph: which
/// slot each circuit node occupies, and which field element each sum edge
/// carries. Unassigned sum edges mean an absent edge (label zero); product
/// edges always carry 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub node_map: BTreeMap<usize, usize>,
    pub labels: BTreeMap<usize, Scalar>,
}

/// Rewrites a normal-form circuit so every edge into a product carries the
/// label 1, by scaling the in-edges of the product's child sums. Sound
/// because each sum feeds at most one product.
fn push_product_labels(c: &Circuit) -> Result<Circuit> {
    let field = c.field();
    let one = Scalar::one(field);
    let mut scale: Vec<Scalar> = vec![one.clone(); c.num_nodes()];
    for node in c.nodes() {
        if matches!(node.kind, NodeKind::Product) {
            for (ch, lab) in &node.in_edges {
                scale[*ch] = lab.clone();
            }
        }
    }
    let mut out = Circuit::new(field);
    for (v, node) in c.nodes().iter().enumerate() {
        let nv = out.add_node(node.kind.clone(), node.name.clone());
        match node.kind {
            NodeKind::Sum => {
                for (ch, lab) in &node.in_edges {
                    out.add_edge(*ch, nv, lab.mul(&scale[v])?)?;
                }
            }
            NodeKind::Product => {
                for (ch, _) in &node.in_edges {
                    out.add_edge(*ch, nv, one.clone())?;
                }
            }
            _ => {}
        }
    }
    out.set_outputs(c.outputs().to_vec())?;
    Ok(out)
}

/// Places `psi` — which must pass the normal-form check — into `g`,
/// producing a label assignment under which [`instantiate`] reproduces
/// `psi`'s polynomials exactly. Inputs are matched by sorted variable name
/// to input ordinals (variable k ↔ graph input k); output slot k goes to
/// graph output k. Dead gates (no path to an output) are not placed; they
/// compute nothing the outputs can see.
pub fn embed(g: &UniversalGraph, psi: &Circuit) -> Result<Embedding> {
    let report = check_normal_form(psi, DEFAULT_TERM_BUDGET)?;
    if !report.ok {
        return Err(Error::NotNormalForm(report.violations[0].to_string()));
    }
    let psi = push_product_labels(psi)?;
    let syn = psi.syntactic_degrees()?;
    let r = g.params.r;

    // live = on a path to an output
    let mut live = vec![false; psi.num_nodes()];
    let mut stack: Vec<usize> = Vec::new();
    for &o in psi.outputs() {
        if !live[o] {
            live[o] = true;
            stack.push(o);
        }
    }
    while let Some(v) = stack.pop() {
        for &(ch, _) in &psi.nodes()[v].in_edges {
            if !live[ch] {
                live[ch] = true;
                stack.push(ch);
            }
        }
    }

    let mut node_map: BTreeMap<usize, usize> = BTreeMap::new();

    // inputs, by sorted variable name
    let vars = psi.input_vars();
    if vars.len() > g.params.n {
        return Err(Error::CapacityExceeded { level: 1, ty: 0 });
    }
    let mut input_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (v, node) in psi.nodes().iter().enumerate() {
        if let NodeKind::Input(name) = &node.kind {
            input_of.insert(name.as_str(), v);
        }
    }
    for (k, var) in vars.iter().enumerate() {
        node_map.insert(input_of[var.as_str()], g.inputs[k]);
    }

    if psi.outputs().len() > g.params.m {
        return Err(Error::CapacityExceeded {
            level: 2 * r,
            ty: 0,
        });
    }
    for (k, &o) in psi.outputs().iter().enumerate() {
        if !psi.nodes()[o].in_edges.is_empty() && syn[o] != r as u64 {
            return Err(Error::NotNormalForm(format!(
                "output `{}` has syntactic degree {}, want {r}",
                psi.nodes()[o].name, syn[o]
            )));
        }
        node_map.entry(o).or_insert(g.outputs[k]);
    }

    // products, each pulling its two child sums into place
    let mut counters: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    for (v, node) in psi.nodes().iter().enumerate() {
        if !live[v] || !matches!(node.kind, NodeKind::Product) {
            continue;
        }
        let i = syn[v] as u32;
        let (c1, c2) = (node.in_edges[0].0, node.in_edges[1].0);
        let (d1, d2) = (syn[c1] as u32, syn[c2] as u32);
        let j = d1.min(d2);
        if j == 0 {
            return Err(Error::NotNormalForm(format!(
                "product `{}` has an identically-zero child and cannot be placed",
                node.name
            )));
        }
        if i > r {
            return Err(Error::CapacityExceeded {
                level: 2 * i - 1,
                ty: j,
            });
        }
        let pool = g.products_of_type(i, j);
        let t = counters.entry((i, j)).or_insert(0);
        if *t >= pool.len() {
            return Err(Error::CapacityExceeded {
                level: 2 * i - 1,
                ty: j,
            });
        }
        let gp = pool[*t];
        *t += 1;
        node_map.insert(v, gp);
        // child a sits at level 2j, child b at level 2(i-j)
        let (a, b) = (g.nodes[gp].children[0], g.nodes[gp].children[1]);
        let (low, high) = if d1 <= d2 { (c1, c2) } else { (c2, c1) };
        if node_map.insert(low, a).is_some() || node_map.insert(high, b).is_some() {
            return Err(Error::Internal("sum placed twice during embedding".into()));
        }
    }

    // labels: every live edge into a sum lands on the matching graph edge
    let mut labels: BTreeMap<usize, Scalar> = BTreeMap::new();
    let put = |labels: &mut BTreeMap<usize, Scalar>,
                   src: usize,
                   dst: usize,
                   val: &Scalar|
     -> Result<()> {
        let id = g
            .edge_id(src, dst)
            .ok_or_else(|| Error::Internal("embedding produced a missing edge".into()))?;
        match labels.remove(&id) {
            None => {
                labels.insert(id, val.clone());
            }
            Some(old) => {
                let merged = old.add(val)?;
                if !merged.is_zero() {
                    labels.insert(id, merged);
                }
            }
        }
        Ok(())
    };
    for (v, node) in psi.nodes().iter().enumerate() {
        if !live[v] || !matches!(node.kind, NodeKind::Sum) {
            continue;
        }
        // output slots are labeled below, one slot at a time
        if psi.outputs().contains(&v) {
            continue;
        }
        let gv = *node_map
            .get(&v)
            .ok_or_else(|| Error::Internal("live sum left unplaced".into()))?;
        for (ch, lab) in &node.in_edges {
            put(&mut labels, node_map[ch], gv, lab)?;
        }
    }
    for (k, &o) in psi.outputs().iter().enumerate() {
        let gout = g.outputs[k];
        for (ch, lab) in &psi.nodes()[o].in_edges {
            put(&mut labels, node_map[ch], gout, lab)?;
        }
    }

    Ok(Embedding { node_map, labels })
}

/// Builds the concrete circuit the graph computes under a label
/// assignment: product edges carry 1, assigned sum edges carry their
/// labels, unassigned sum edges are absent. Inputs are named z1..zn,
/// outputs out0..out{m−1}.
pub fn instantiate(
    g: &UniversalGraph,
    field: FieldTag,
    labels: &BTreeMap<usize, Scalar>,
) -> Result<Circuit> {
    for &id in labels.keys() {
        if id >= g.sum_edges.len() {
            return Err(Error::UnknownEdgeId(id));
        }
    }
    let one = Scalar::one(field);
    let mut c = Circuit::new(field);
    let mut map = vec![0usize; g.nodes.len()];
    for (v, slot) in g.nodes.iter().enumerate() {
        map[v] = match &slot.kind {
            SlotKind::Input { ordinal } => c.add_input(format!("z{}", ordinal + 1)),
            SlotKind::Sum { degree, ordinal } => {
                c.add_node(NodeKind::Sum, format!("s{}_{ordinal}", 2 * degree))
            }
            SlotKind::Output { slot } => c.add_node(NodeKind::Sum, format!("out{slot}")),
            SlotKind::Product {
                degree,
                ty,
                ordinal,
            } => c.add_node(
                NodeKind::Product,
                format!("p{}t{ty}_{ordinal}", 2 * degree - 1),
            ),
        };
    }
    for (v, slot) in g.nodes.iter().enumerate() {
        for &ch in &slot.children {
            c.add_edge(map[ch], map[v], one.clone())?;
        }
    }
    for (id, &(src, dst)) in g.sum_edges.iter().enumerate() {
        if let Some(val) = labels.get(&id) {
            c.add_edge(map[src], map[dst], val.clone())?;
        }
    }
    c.set_outputs(g.outputs.iter().map(|&o| map[o]).collect())?;
    c.validate()?;
    Ok(c)
}
