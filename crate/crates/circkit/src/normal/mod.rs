//! Rewriting circuits into a layered homogeneous form, plus the gate
//! census and bounds reporting that go with it.
//!
//! The target shape ("normal form") is: no constant-one gate, inputs feed
//! only sums, outputs are sums, sums and products alternate along every
//! path, products have in-degree exactly 2, sums have out-degree at most 1,
//! and every gate computes a polynomial that is zero or homogeneous of the
//! gate's syntactic degree.
//!
//! The pipeline reaches it in eight passes, each returning a fresh circuit
//! and each followed by a dead-node sweep:
//!
//! 1. splice single-child gates into their parents (labels multiply);
//! 2. binarize wide gates into left-leaning trees;
//! 3. split every node into per-degree components, capping at the target
//!    degree `r`;
//! 4. fold syntactic-degree-0 gates into edge labels (runs in a loop with
//!    pass 5 until neither changes anything, because merging parallel sum
//!    edges can cancel a gate to zero, which folding must then propagate);
//! 5. alternate: insert a buffering sum on every product→product edge and
//!    splice sum→sum edges, merging parallel sum in-edges;
//! 6. wrap non-sum output slots in dedicated sums;
//! 7. buffer every input→product edge through a dedicated sum;
//! 8. split sums used more than once (graph out-degree plus output-slot
//!    occupancies) into one copy per use.
//!
//! The sweep keeps input nodes even when dead so the variable list — and
//! hence the expansion — of the result stays comparable to the original.
//!
//! Size budgets: measured against s = Size of the input circuit, the result
//! is expected to satisfy max_j N_j^× ≤ 8s, total N ≤ 24·s·r, and for
//! r ≥ 2 a below-top-degree sum-gate budget Σ_{j<r} N_j^+ < 16·s·(r−1).
//! These are measured and reported, never assumed: tiny circuits (for
//! example s = 0, or n ≥ s) can miss them honestly, and the report records
//! whether the size hypothesis n, m < s held.

mod census;
mod check;

pub use census::{gate_census, DegreeCounts, GateCensus};
pub use check::{check_normal_form, NormalFormReport, NormalFormViolation};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::algebra::Scalar;
use crate::circuit::{
    claim_name, expand, fresh_name, taken_names, Circuit, NodeKind, DEFAULT_TERM_BUDGET,
};
use crate::error::{Error, Result};

/// Removes nodes with no path to an output, preserving node order. Input
/// nodes are always kept so the ambient variable list survives.
fn sweep_dead(c: &Circuit) -> Result<Circuit> {
    let n = c.num_nodes();
    let mut keep = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for &o in c.outputs() {
        if !keep[o] {
            keep[o] = true;
            stack.push(o);
        }
    }
    while let Some(v) = stack.pop() {
        for &(ch, _) in &c.nodes()[v].in_edges {
            if !keep[ch] {
                keep[ch] = true;
                stack.push(ch);
            }
        }
    }
    for (i, node) in c.nodes().iter().enumerate() {
        if matches!(node.kind, NodeKind::Input(_)) {
            keep[i] = true;
        }
    }
    let mut map = vec![usize::MAX; n];
    let mut out = Circuit::new(c.field());
    for (i, node) in c.nodes().iter().enumerate() {
        if keep[i] {
            map[i] = out.add_node(node.kind.clone(), node.name.clone());
        }
    }
    for (i, node) in c.nodes().iter().enumerate() {
        if !keep[i] {
            continue;
        }
        for (ch, lab) in &node.in_edges {
            out.add_edge(map[*ch], map[i], lab.clone())?;
        }
    }
    out.set_outputs(c.outputs().iter().map(|&o| map[o]).collect())?;
    Ok(out)
}

/// Pass 1: splices every single-child gate that does not occupy an output
/// slot, composing edge labels. Output gates are kept verbatim (a slot
/// needs a node to point at, and the slot itself cannot carry a scalar).
fn splice_unary(c: &Circuit) -> Result<Circuit> {
    let order = c.topo_order()?;
    let mut is_output = vec![false; c.num_nodes()];
    for &o in c.outputs() {
        is_output[o] = true;
    }
    let one = Scalar::one(c.field());
    let mut out = Circuit::new(c.field());
    // representative of each old node in the new circuit, with a multiplier
    let mut repr: Vec<Option<(usize, Scalar)>> = vec![None; c.num_nodes()];
    for &v in &order {
        let node = &c.nodes()[v];
        let splice = !is_output[v]
            && matches!(node.kind, NodeKind::Sum | NodeKind::Product)
            && node.in_edges.len() == 1;
        if splice {
            let (ch, lab) = node.in_edges[0].clone();
            let (u, m) = repr[ch].clone().expect("children precede parents");
            repr[v] = Some((u, lab.mul(&m)?));
        } else {
            let nv = out.add_node(node.kind.clone(), node.name.clone());
            for (ch, lab) in &node.in_edges {
                let (u, m) = repr[*ch].clone().expect("children precede parents");
                out.add_edge(u, nv, lab.mul(&m)?)?;
            }
            repr[v] = Some((nv, one.clone()));
        }
    }
    let slots = c
        .outputs()
        .iter()
        .map(|&o| repr[o].as_ref().expect("outputs visited").0)
        .collect();
    out.set_outputs(slots)?;
    Ok(out)
}

/// Pass 2: replaces every gate of in-degree > 2 by a left-leaning tree of
/// binary gates of the same kind. Leaf edges keep their labels; internal
/// tree edges are labeled 1; the tree root keeps the original gate's name.
fn binarize_fanin(c: &Circuit) -> Result<Circuit> {
    let order = c.topo_order()?;
    let one = Scalar::one(c.field());
    let mut taken = taken_names(c);
    let mut out = Circuit::new(c.field());
    let mut map = vec![0usize; c.num_nodes()];
    for &v in &order {
        let node = &c.nodes()[v];
        let k = node.in_edges.len();
        if k <= 2 {
            let nv = out.add_node(node.kind.clone(), node.name.clone());
            for (ch, lab) in &node.in_edges {
                out.add_edge(map[*ch], nv, lab.clone())?;
            }
            map[v] = nv;
            continue;
        }
        let (c0, l0) = &node.in_edges[0];
        let (c1, l1) = &node.in_edges[1];
        let mut acc = out.add_node(node.kind.clone(), fresh_name(&mut taken, "b"));
        out.add_edge(map[*c0], acc, l0.clone())?;
        out.add_edge(map[*c1], acc, l1.clone())?;
        for (idx, (ch, lab)) in node.in_edges.iter().enumerate().skip(2) {
            let name = if idx == k - 1 {
                node.name.clone()
            } else {
                fresh_name(&mut taken, "b")
            };
            let t = out.add_node(node.kind.clone(), name);
            out.add_edge(acc, t, one.clone())?;
            out.add_edge(map[*ch], t, lab.clone())?;
            acc = t;
        }
        map[v] = acc;
    }
    out.set_outputs(c.outputs().iter().map(|&o| map[o]).collect())?;
    Ok(out)
}

/// Splices single-child gates, then binarizes wide gates. The result has
/// fanin ≤ 2 everywhere and Size at most twice the input's; expansion is
/// preserved exactly.
pub fn binarize(c: &Circuit) -> Result<Circuit> {
    c.validate()?;
    let step1 = sweep_dead(&splice_unary(c)?)?;
    let out = sweep_dead(&binarize_fanin(&step1)?)?;
    out.validate()?;
    Ok(out)
}

/// Pass 3: splits every node `v` into per-degree components `v_i` for
/// i ∈ [0, r], where `v_i` computes the degree-i homogeneous part of `v`'s
/// polynomial; components of degree > r are discarded. Outputs become the
/// degree-r components (an identically-zero component becomes an empty
/// sum). Sums of any width are handled; products must be binary or
/// smaller. Every node of the result computes a polynomial that is zero
/// or homogeneous of the node's syntactic degree.
pub fn homogenize(c: &Circuit, r: u32) -> Result<Circuit> {
    c.validate()?;
    let out = homogenize_inner(c, r)?;
    let out = sweep_dead(&out)?;
    out.validate()?;
    Ok(out)
}

fn homogenize_inner(c: &Circuit, r: u32) -> Result<Circuit> {
    let order = c.topo_order()?;
    let rr = r as usize;
    let one = Scalar::one(c.field());
    let mut out = Circuit::new(c.field());
    let mut taken: BTreeSet<String> = BTreeSet::new();
    // parts[v][i]: node computing the degree-i part of v, None when that
    // part is identically zero by construction
    let mut parts: Vec<Vec<Option<usize>>> = vec![vec![None; rr + 1]; c.num_nodes()];

    // inputs first, in storage order, so the variable list is preserved
    // even for degrees where an input contributes nothing
    for (v, node) in c.nodes().iter().enumerate() {
        if let NodeKind::Input(var) = &node.kind {
            let nv = out.add_input(var.clone());
            taken.insert(var.clone());
            if rr >= 1 {
                parts[v][1] = Some(nv);
            }
        }
    }

    for &v in &order {
        let node = &c.nodes()[v];
        match &node.kind {
            NodeKind::Input(_) => {}
            NodeKind::One => {
                let name = claim_name(&mut taken, format!("{}_0", node.name));
                parts[v][0] = Some(out.add_node(NodeKind::One, name));
            }
            NodeKind::Sum => {
                for i in 0..=rr {
                    let mut edges = Vec::new();
                    for (ch, lab) in &node.in_edges {
                        if let Some(u) = parts[*ch][i] {
                            edges.push((u, lab.clone()));
                        }
                    }
                    if !edges.is_empty() {
                        let name = claim_name(&mut taken, format!("{}_{i}", node.name));
                        parts[v][i] = Some(out.add_sum(name, edges)?);
                    }
                }
            }
            NodeKind::Product => match node.in_edges.len() {
                0 => {
                    // empty product is the constant 1
                    let name = claim_name(&mut taken, format!("{}_0", node.name));
                    parts[v][0] = Some(out.add_node(NodeKind::One, name));
                }
                1 => {
                    // a single-factor product scales its child, so each
                    // part is a single-edge sum
                    let (ch, lab) = node.in_edges[0].clone();
                    for i in 0..=rr {
                        if let Some(u) = parts[ch][i] {
                            let name = claim_name(&mut taken, format!("{}_{i}", node.name));
                            parts[v][i] = Some(out.add_sum(name, vec![(u, lab.clone())])?);
                        }
                    }
                }
                2 => {
                    let (ch1, lab1) = node.in_edges[0].clone();
                    let (ch2, lab2) = node.in_edges[1].clone();
                    for i in 0..=rr {
                        let mut summands = Vec::new();
                        for j in 0..=i {
                            if let (Some(a), Some(b)) = (parts[ch1][j], parts[ch2][i - j]) {
                                let name =
                                    claim_name(&mut taken, format!("{}_{i}m{j}", node.name));
                                let p = out.add_product(
                                    name,
                                    vec![(a, lab1.clone()), (b, lab2.clone())],
                                )?;
                                summands.push((p, one.clone()));
                            }
                        }
                        if !summands.is_empty() {
                            let name = claim_name(&mut taken, format!("{}_{i}", node.name));
                            parts[v][i] = Some(out.add_sum(name, summands)?);
                        }
                    }
                }
                _ => return Err(Error::NotBinarized),
            },
        }
    }

    let mut slots = Vec::with_capacity(c.outputs().len());
    for &o in c.outputs() {
        match parts[o][rr] {
            Some(u) => slots.push(u),
            None => slots.push(out.add_node(NodeKind::Sum, fresh_name(&mut taken, "zero"))),
        }
    }
    // a node may serve several slots; wrap every occurrence of a shared
    // target so no slot node also carries out-edges
    let mut uses: BTreeMap<usize, usize> = BTreeMap::new();
    for &s in &slots {
        *uses.entry(s).or_default() += 1;
    }
    for s in slots.iter_mut() {
        if uses[s] > 1 {
            let w = out.add_sum(fresh_name(&mut taken, "w"), vec![(*s, one.clone())])?;
            *s = w;
        }
    }
    out.set_outputs(slots)?;
    Ok(out)
}

/// How a node of the old circuit is represented after constant folding.
enum Repr {
    /// The node's value is this field element; the node itself is gone.
    Const(Scalar),
    /// The node survives as `.0`, up to the scalar multiplier `.1`.
    Node(usize, Scalar),
}

/// Pass 4: evaluates every syntactic-degree-0 gate exactly and folds the
/// value into the labels of consuming edges. Zero values erase product
/// gates entirely; a product left with a single live factor is spliced
/// into its parents. Returns the rewritten circuit and whether anything
/// actually folded.
fn fold_constants(c: &Circuit) -> Result<(Circuit, bool)> {
    let order = c.topo_order()?;
    let degs = c.syntactic_degrees()?;
    let field = c.field();
    let one = Scalar::one(field);
    let zero = Scalar::zero(field);
    let mut taken = taken_names(c);
    let mut out = Circuit::new(field);
    let mut repr: Vec<Option<Repr>> = Vec::with_capacity(c.num_nodes());
    repr.resize_with(c.num_nodes(), || None);
    let mut changed = false;

    let const_of = |repr: &[Option<Repr>], ch: usize| -> Result<Scalar> {
        match repr[ch].as_ref() {
            Some(Repr::Const(v)) => Ok(v.clone()),
            _ => Err(Error::Internal(
                "degree-0 gate with a non-constant child".into(),
            )),
        }
    };

    for &v in &order {
        let node = &c.nodes()[v];
        if degs[v] == 0 {
            let val = match &node.kind {
                NodeKind::One => one.clone(),
                NodeKind::Sum => {
                    let mut acc = zero.clone();
                    for (ch, lab) in &node.in_edges {
                        acc = acc.add(&lab.mul(&const_of(&repr, *ch)?)?)?;
                    }
                    acc
                }
                NodeKind::Product => {
                    let mut acc = one.clone();
                    for (ch, lab) in &node.in_edges {
                        acc = acc.mul(&lab.mul(&const_of(&repr, *ch)?)?)?;
                    }
                    acc
                }
                NodeKind::Input(_) => {
                    return Err(Error::Internal("input of syntactic degree 0".into()))
                }
            };
            // an empty sum is the zero placeholder and folding it away is
            // not progress; anything else folded is
            if !(matches!(node.kind, NodeKind::Sum) && node.in_edges.is_empty()) {
                changed = true;
            }
            repr[v] = Some(Repr::Const(val));
            continue;
        }
        match &node.kind {
            NodeKind::Input(_) => {
                let nv = out.add_node(node.kind.clone(), node.name.clone());
                repr[v] = Some(Repr::Node(nv, one.clone()));
            }
            NodeKind::One => {
                return Err(Error::Internal("constant-one gate of positive degree".into()))
            }
            NodeKind::Sum => {
                let mut edges = Vec::new();
                for (ch, lab) in &node.in_edges {
                    match repr[*ch].as_ref().expect("children precede parents") {
                        Repr::Const(val) if val.is_zero() => changed = true,
                        Repr::Const(_) => {
                            return Err(Error::Internal(
                                "nonzero constant under a positive-degree sum".into(),
                            ))
                        }
                        Repr::Node(u, m) => edges.push((*u, lab.mul(m)?)),
                    }
                }
                if edges.is_empty() {
                    changed = true;
                    repr[v] = Some(Repr::Const(zero.clone()));
                } else {
                    let nv = out.add_sum(node.name.clone(), edges)?;
                    repr[v] = Some(Repr::Node(nv, one.clone()));
                }
            }
            NodeKind::Product => {
                let mut gamma = one.clone();
                let mut factors: Vec<(usize, Scalar)> = Vec::new();
                let mut killed = false;
                for (ch, lab) in &node.in_edges {
                    match repr[*ch].as_ref().expect("children precede parents") {
                        Repr::Const(val) => {
                            changed = true;
                            if val.is_zero() {
                                killed = true;
                                break;
                            }
                            gamma = gamma.mul(&lab.mul(val)?)?;
                        }
                        Repr::Node(u, m) => factors.push((*u, lab.mul(m)?)),
                    }
                }
                if killed {
                    repr[v] = Some(Repr::Const(zero.clone()));
                } else if factors.is_empty() {
                    changed = true;
                    repr[v] = Some(Repr::Const(gamma));
                } else if factors.len() == 1 {
                    changed = true;
                    let (u, m) = factors.pop().expect("one factor");
                    repr[v] = Some(Repr::Node(u, gamma.mul(&m)?));
                } else {
                    if !gamma.is_one() {
                        factors[0].1 = factors[0].1.mul(&gamma)?;
                    }
                    let nv = out.add_product(node.name.clone(), factors)?;
                    repr[v] = Some(Repr::Node(nv, one.clone()));
                }
            }
        }
    }

    // output slots: zero values become empty sums (reusing the slot's name
    // when it already was one, so the rewrite is idempotent there);
    // surviving nodes are used directly only when nothing else touches them
    let outdeg = out.out_degrees();
    let mut target_count: BTreeMap<usize, usize> = BTreeMap::new();
    for &o in c.outputs() {
        if let Some(Repr::Node(u, _)) = repr[o].as_ref() {
            *target_count.entry(*u).or_default() += 1;
        }
    }
    let mut readded_zeros: BTreeSet<usize> = BTreeSet::new();
    let mut slots = Vec::with_capacity(c.outputs().len());
    for &o in c.outputs() {
        match repr[o].as_ref().expect("outputs visited") {
            Repr::Const(val) => {
                if !val.is_zero() {
                    return Err(Error::Internal(
                        "output folded to a nonzero constant".into(),
                    ));
                }
                let node = &c.nodes()[o];
                let was_empty_sum =
                    matches!(node.kind, NodeKind::Sum) && node.in_edges.is_empty();
                let name = if was_empty_sum && readded_zeros.insert(o) {
                    node.name.clone()
                } else {
                    changed = true;
                    fresh_name(&mut taken, "z")
                };
                slots.push(out.add_node(NodeKind::Sum, name));
            }
            Repr::Node(u, m) => {
                if m.is_one() && outdeg[*u] == 0 && target_count[u] == 1 {
                    slots.push(*u);
                } else {
                    changed = true;
                    let w =
                        out.add_sum(fresh_name(&mut taken, "w"), vec![(*u, m.clone())])?;
                    slots.push(w);
                }
            }
        }
    }
    out.set_outputs(slots)?;
    Ok((out, changed))
}

/// Pass 5: restores sum/product alternation. Product→product edges gain a
/// buffering sum carrying the edge label; sum→sum edges are spliced (the
/// child sum's in-edges move up, labels multiplied); parallel in-edges of a
/// sum are merged by adding labels, dropping the edge when they cancel.
/// Products keep parallel edges — they encode repeated factors.
fn alternate(c: &Circuit) -> Result<(Circuit, bool)> {
    let order = c.topo_order()?;
    let one = Scalar::one(c.field());
    let mut taken = taken_names(c);
    let mut out = Circuit::new(c.field());
    let mut map = vec![0usize; c.num_nodes()];
    let mut changed = false;
    for &v in &order {
        let node = &c.nodes()[v];
        match &node.kind {
            NodeKind::Input(_) | NodeKind::One => {
                map[v] = out.add_node(node.kind.clone(), node.name.clone());
            }
            NodeKind::Product => {
                let mut edges = Vec::new();
                for (ch, lab) in &node.in_edges {
                    if matches!(c.nodes()[*ch].kind, NodeKind::Product) {
                        changed = true;
                        let d = out
                            .add_sum(fresh_name(&mut taken, "a"), vec![(map[*ch], lab.clone())])?;
                        edges.push((d, one.clone()));
                    } else {
                        edges.push((map[*ch], lab.clone()));
                    }
                }
                map[v] = out.add_product(node.name.clone(), edges)?;
            }
            NodeKind::Sum => {
                let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
                let merge = |acc: &mut BTreeMap<usize, Scalar>,
                                 key: usize,
                                 val: Scalar,
                                 changed: &mut bool|
                 -> Result<()> {
                    match acc.remove(&key) {
                        None => {
                            acc.insert(key, val);
                        }
                        Some(old) => {
                            *changed = true;
                            let sum = old.add(&val)?;
                            if !sum.is_zero() {
                                acc.insert(key, sum);
                            }
                        }
                    }
                    Ok(())
                };
                for (ch, lab) in &node.in_edges {
                    if matches!(c.nodes()[*ch].kind, NodeKind::Sum) {
                        changed = true;
                        let spliced = out.nodes()[map[*ch]].in_edges.clone();
                        for (w, mu) in spliced {
                            merge(&mut acc, w, lab.mul(&mu)?, &mut changed)?;
                        }
                    } else {
                        merge(&mut acc, map[*ch], lab.clone(), &mut changed)?;
                    }
                }
                map[v] = out.add_sum(node.name.clone(), acc.into_iter().collect::<Vec<_>>())?;
            }
        }
    }
    out.set_outputs(c.outputs().iter().map(|&o| map[o]).collect())?;
    Ok((out, changed))
}

/// Pass 6: every output slot holding a non-sum node gets its own wrapping
/// sum with label 1.
fn wrap_outputs(c: &Circuit) -> Result<Circuit> {
    let mut out = c.clone();
    let mut taken = taken_names(c);
    let one = Scalar::one(c.field());
    let mut slots = out.outputs().to_vec();
    for s in slots.iter_mut() {
        if !matches!(out.nodes()[*s].kind, NodeKind::Sum) {
            let w = out.add_sum(fresh_name(&mut taken, "o"), vec![(*s, one.clone())])?;
            *s = w;
        }
    }
    out.set_outputs(slots)?;
    Ok(out)
}

/// Pass 7: every edge from an input into a product is routed through its
/// own buffering sum carrying the edge's label.
fn buffer_input_product_edges(c: &Circuit) -> Result<Circuit> {
    let order = c.topo_order()?;
    let one = Scalar::one(c.field());
    let mut taken = taken_names(c);
    let mut out = Circuit::new(c.field());
    let mut map = vec![0usize; c.num_nodes()];
    for &v in &order {
        let node = &c.nodes()[v];
        if matches!(node.kind, NodeKind::Product) {
            let mut edges = Vec::new();
            for (ch, lab) in &node.in_edges {
                if matches!(c.nodes()[*ch].kind, NodeKind::Input(_)) {
                    let d =
                        out.add_sum(fresh_name(&mut taken, "t"), vec![(map[*ch], lab.clone())])?;
                    edges.push((d, one.clone()));
                } else {
                    edges.push((map[*ch], lab.clone()));
                }
            }
            map[v] = out.add_product(node.name.clone(), edges)?;
        } else {
            let nv = out.add_node(node.kind.clone(), node.name.clone());
            for (ch, lab) in &node.in_edges {
                out.add_edge(map[*ch], nv, lab.clone())?;
            }
            map[v] = nv;
        }
    }
    out.set_outputs(c.outputs().iter().map(|&o| map[o]).collect())?;
    Ok(out)
}

/// A node's stand-ins in the rewritten circuit: most nodes map to a single
/// index, sums being split hand out one copy per use.
enum Handle {
    Single(usize),
    Pool(VecDeque<usize>),
}

fn take_copy(handles: &mut [Handle], v: usize) -> Result<usize> {
    match &mut handles[v] {
        Handle::Single(u) => Ok(*u),
        Handle::Pool(q) => q
            .pop_front()
            .ok_or_else(|| Error::Internal("sum copy pool exhausted".into())),
    }
}

/// Pass 8: a sum used q > 1 times — counting both out-edges and output-slot
/// occupancies — is replaced by q copies sharing its children, one copy per
/// use. Consumers take copies in edge order, then output slots in slot
/// order. The first copy keeps the name.
fn split_shared_sums(c: &Circuit) -> Result<Circuit> {
    let order = c.topo_order()?;
    let out_deg = c.out_degrees();
    let mut slot_uses = vec![0usize; c.num_nodes()];
    for &o in c.outputs() {
        slot_uses[o] += 1;
    }
    let mut taken = taken_names(c);
    let mut out = Circuit::new(c.field());
    let mut handles: Vec<Handle> = (0..c.num_nodes()).map(|_| Handle::Single(usize::MAX)).collect();
    for &v in &order {
        let node = &c.nodes()[v];
        let uses = out_deg[v] + slot_uses[v];
        if matches!(node.kind, NodeKind::Sum) && uses > 1 {
            let mut pool = VecDeque::with_capacity(uses);
            for k in 0..uses {
                let name = if k == 0 {
                    node.name.clone()
                } else {
                    claim_name(&mut taken, format!("{}c{k}", node.name))
                };
                let nv = out.add_node(NodeKind::Sum, name);
                for (ch, lab) in &node.in_edges {
                    let u = take_copy(&mut handles, *ch)?;
                    out.add_edge(u, nv, lab.clone())?;
                }
                pool.push_back(nv);
            }
            handles[v] = Handle::Pool(pool);
        } else {
            let nv = out.add_node(node.kind.clone(), node.name.clone());
            for (ch, lab) in &node.in_edges {
                let u = take_copy(&mut handles, *ch)?;
                out.add_edge(u, nv, lab.clone())?;
            }
            handles[v] = Handle::Single(nv);
        }
    }
    let mut slots = Vec::with_capacity(c.outputs().len());
    for &o in c.outputs() {
        slots.push(take_copy(&mut handles, o)?);
    }
    out.set_outputs(slots)?;
    Ok(out)
}

/// Measured gate counts of a rewritten circuit against the budgets implied
/// by the original circuit's size. All counts are measured, none assumed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    /// Size (edge count) of the original circuit.
    pub s: u64,
    /// Target degree.
    pub r: u32,
    /// Number of input variables of the original circuit.
    pub n_inputs: u64,
    /// Number of output slots of the original circuit.
    pub m_outputs: u64,
    /// Budget for product/input gates of any one degree: 8·s.
    pub n_times_bound: u64,
    /// Budget for the total gate count: 24·s·r.
    pub n_total_bound: u64,
    /// Measured max over degrees j of the product/input count N_j^×.
    pub n_times_max: u64,
    /// Measured total gate count N.
    pub n_total: u64,
    /// Measured Σ_{j=1}^{r−1} N_j^+.
    pub sum_plus_below_top: u64,
    /// Budget 16·s·(r−1) for the sum above; None when r < 2.
    pub sum_plus_bound: Option<u64>,
    /// Whether N_j^+ ≤ 8·s held for every degree j ≥ 1. Recorded for
    /// inspection; not part of `ok`.
    pub n_plus_claim_ok: bool,
    /// Whether the size hypothesis n < s and m < s held for the input.
    pub hypothesis_ok: bool,
    /// n_times_max ≤ 8s, n_total ≤ 24sr, and (when r ≥ 2)
    /// sum_plus_below_top < 16s(r−1).
    pub ok: bool,
}

/// Result of the full rewriting pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizeOutcome {
    pub circuit: Circuit,
    pub census: GateCensus,
    pub bounds: BoundsReport,
}

/// Rewrites `c` — which must compute homogeneous degree-`r` polynomials,
/// r ≥ 1, identically-zero outputs permitted — into normal form, preserving
/// the expansion exactly. Uses the default expansion budget for the
/// up-front degree check.
pub fn normalize(c: &Circuit, r: u32) -> Result<NormalizeOutcome> {
    normalize_with_budget(c, r, DEFAULT_TERM_BUDGET)
}

/// As [`normalize`], with an explicit term budget for the up-front
/// expansion that verifies the outputs are homogeneous of degree `r`.
pub fn normalize_with_budget(c: &Circuit, r: u32, budget: u64) -> Result<NormalizeOutcome> {
    Ok(run_pipeline(c, r, budget, false)?.0)
}

/// As [`normalize`], additionally returning the circuit after each pass,
/// labeled "step1" … "step8"; the fold/alternate loop's later rounds are
/// labeled "step4_2", "step5_2", and so on.
pub fn normalize_traced(
    c: &Circuit,
    r: u32,
    budget: u64,
) -> Result<(NormalizeOutcome, Vec<(String, Circuit)>)> {
    run_pipeline(c, r, budget, true)
}

fn run_pipeline(
    c: &Circuit,
    r: u32,
    budget: u64,
    trace: bool,
) -> Result<(NormalizeOutcome, Vec<(String, Circuit)>)> {
    c.validate()?;
    if r == 0 {
        return Err(Error::ParamViolation(
            "normal-form rewriting needs a degree of at least 1".into(),
        ));
    }
    let polys = expand(c, budget)?;
    for (i, p) in polys.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let d = p.degree().expect("nonzero polynomial has a degree");
        if d == 0 {
            return Err(Error::DegreeZeroOutput(i));
        }
        if !p.is_homogeneous() || d != r {
            return Err(Error::NotHomogeneousOutputs {
                output: i,
                found: d as u64,
            });
        }
    }

    let mut stages: Vec<(String, Circuit)> = Vec::new();
    let record = |label: String, circ: &Circuit, stages: &mut Vec<(String, Circuit)>| {
        if trace {
            stages.push((label, circ.clone()));
        }
    };

    let mut cur = sweep_dead(&splice_unary(c)?)?;
    record("step1".into(), &cur, &mut stages);
    cur = sweep_dead(&binarize_fanin(&cur)?)?;
    record("step2".into(), &cur, &mut stages);
    cur = sweep_dead(&homogenize_inner(&cur, r)?)?;
    record("step3".into(), &cur, &mut stages);

    let mut round = 1usize;
    loop {
        let (next, ch_fold) = fold_constants(&cur)?;
        cur = sweep_dead(&next)?;
        let label4 = if round == 1 {
            "step4".to_string()
        } else {
            format!("step4_{round}")
        };
        record(label4, &cur, &mut stages);
        let (next, ch_alt) = alternate(&cur)?;
        cur = sweep_dead(&next)?;
        let label5 = if round == 1 {
            "step5".to_string()
        } else {
            format!("step5_{round}")
        };
        record(label5, &cur, &mut stages);
        if !ch_fold && !ch_alt {
            break;
        }
        round += 1;
    }

    cur = sweep_dead(&wrap_outputs(&cur)?)?;
    record("step6".into(), &cur, &mut stages);
    cur = sweep_dead(&buffer_input_product_edges(&cur)?)?;
    record("step7".into(), &cur, &mut stages);
    cur = sweep_dead(&split_shared_sums(&cur)?)?;
    record("step8".into(), &cur, &mut stages);
    cur.validate()?;

    let census = gate_census(&cur)?;
    let s = c.size() as u64;
    let r64 = r as u64;
    let n_inputs = c.input_vars().len() as u64;
    let m_outputs = c.outputs().len() as u64;
    let n_times_bound = 8 * s;
    let n_total_bound = 24 * s * r64;
    let n_times_max = census.max_n_times();
    let n_total = census.total;
    let sum_plus_below_top = census.sum_n_plus_through(r64.saturating_sub(1));
    let sum_plus_bound = if r >= 2 { Some(16 * s * (r64 - 1)) } else { None };
    let n_plus_claim_ok = census
        .by_degree
        .iter()
        .all(|(&j, counts)| j == 0 || counts.n_plus <= n_times_bound);
    let hypothesis_ok = n_inputs < s && m_outputs < s;
    let ok = n_times_max <= n_times_bound
        && n_total <= n_total_bound
        && sum_plus_bound.is_none_or(|b| sum_plus_below_top < b);
    let bounds = BoundsReport {
        s,
        r,
        n_inputs,
        m_outputs,
        n_times_bound,
        n_total_bound,
        n_times_max,
        n_total,
        sum_plus_below_top,
        sum_plus_bound,
        n_plus_claim_ok,
        hypothesis_ok,
        ok,
    };
    Ok((
        NormalizeOutcome {
            circuit: cur,
            census,
            bounds,
        },
        stages,
    ))
}
