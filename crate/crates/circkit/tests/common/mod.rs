//! Seeded random circuit corpora shared by the integration suites.
//!
//! Circuits are generated as text and fed through the parser, so the
//! corpora exercise the same entry point real inputs use. Homogeneous
//! circuits are built degree-by-degree — sums combine nodes of one
//! degree, products add degrees — which makes every node homogeneous by
//! construction and pins the output degree exactly.

// Each test target compiles this module separately and none uses every
// helper.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use circkit::circuit::{parse_circuit, Circuit};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seven nonzero rationals used for every edge label.
pub const LABEL_GRID: [&str; 7] = ["-2", "-1", "-1/2", "1/3", "1/2", "1", "2"];

pub fn corpus_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn grid_label(rng: &mut ChaCha8Rng) -> &'static str {
    LABEL_GRID[rng.gen_range(0..LABEL_GRID.len())]
}

pub struct HomogeneousSample {
    pub circuit: Circuit,
    pub degree: u32,
}

/// One random circuit whose outputs are all homogeneous of the same
/// degree (or identically zero). Returns None when the draw produced no
/// usable output gate; callers just draw again.
pub fn random_homogeneous(
    rng: &mut ChaCha8Rng,
    max_vars: usize,
    max_size: usize,
    max_degree: u32,
    max_outputs: usize,
) -> Option<HomogeneousSample> {
    let n = rng.gen_range(1..=max_vars);
    let mut text = String::from("field Q\n");
    for i in 1..=n {
        text.push_str(&format!("input x{i}\n"));
    }

    let mut pools: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    pools.insert(1, (1..=n).map(|i| format!("x{i}")).collect());
    let mut degree_of: BTreeMap<String, u32> = BTreeMap::new();
    let mut consumed: BTreeSet<String> = BTreeSet::new();
    let mut size = 0usize;
    let mut gates: Vec<String> = Vec::new();

    let target = rng.gen_range(4..=max_size.max(4));
    while size + 2 <= target {
        let name = format!("g{}", gates.len() + 1);
        let degrees: Vec<u32> = pools.keys().copied().collect();
        let make_product = max_degree >= 2 && rng.gen_bool(0.55);
        let new_degree = if make_product {
            let mut splits = Vec::new();
            for &a in &degrees {
                for &b in &degrees {
                    if a + b <= max_degree {
                        splits.push((a, b));
                    }
                }
            }
            let Some(&(a, b)) = splits.choose(rng) else { break };
            let ca = pools[&a].choose(rng).unwrap().clone();
            let cb = pools[&b].choose(rng).unwrap().clone();
            text.push_str(&format!(
                "{name} = * {}:{ca} {}:{cb}\n",
                grid_label(rng),
                grid_label(rng)
            ));
            consumed.insert(ca);
            consumed.insert(cb);
            size += 2;
            a + b
        } else {
            let d = *degrees.choose(rng).unwrap();
            let arity = if size + 3 <= target && rng.gen_bool(0.4) { 3 } else { 2 };
            let mut line = format!("{name} = +");
            for _ in 0..arity {
                let child = pools[&d].choose(rng).unwrap().clone();
                line.push_str(&format!(" {}:{child}", grid_label(rng)));
                consumed.insert(child);
            }
            text.push_str(&line);
            text.push('\n');
            size += arity;
            d
        };
        pools.entry(new_degree).or_default().push(name.clone());
        degree_of.insert(name.clone(), new_degree);
        gates.push(name);
    }

    // Outputs must be sinks; pick one degree and up to max_outputs gates.
    let mut sinks_by_degree: BTreeMap<u32, Vec<&String>> = BTreeMap::new();
    for g in &gates {
        if !consumed.contains(g) {
            sinks_by_degree.entry(degree_of[g]).or_default().push(g);
        }
    }
    let degrees: Vec<u32> = sinks_by_degree.keys().copied().collect();
    let degree = *degrees.choose(rng)?;
    let mut sinks = sinks_by_degree.remove(&degree).unwrap();
    sinks.shuffle(rng);
    let count = rng.gen_range(1..=sinks.len().min(max_outputs));
    text.push_str("output");
    for s in &sinks[..count] {
        text.push_str(&format!(" {s}"));
    }
    text.push('\n');

    let circuit = parse_circuit(&text).expect("generated text parses");
    Some(HomogeneousSample { circuit, degree })
}

/// A corpus of exactly `count` homogeneous samples.
pub fn homogeneous_corpus(
    seed: u64,
    count: usize,
    max_vars: usize,
    max_size: usize,
    max_degree: u32,
    max_outputs: usize,
) -> Vec<HomogeneousSample> {
    let mut rng = corpus_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if let Some(sample) = random_homogeneous(&mut rng, max_vars, max_size, max_degree, max_outputs)
        {
            out.push(sample);
        }
    }
    out
}

/// A random single-output circuit with fanin two everywhere, as the
/// reverse-mode differentiator requires. No homogeneity constraints.
pub fn random_binarized(rng: &mut ChaCha8Rng, max_vars: usize, max_size: usize) -> Circuit {
    let n = rng.gen_range(1..=max_vars);
    let mut text = String::from("field Q\n");
    let mut names: Vec<String> = Vec::new();
    for i in 1..=n {
        text.push_str(&format!("input x{i}\n"));
        names.push(format!("x{i}"));
    }
    if rng.gen_bool(0.3) {
        text.push_str("one c\n");
        names.push("c".into());
    }

    let mut size = 0usize;
    let mut gate = 0usize;
    let target = rng.gen_range(4..=max_size.max(4));
    while size + 2 <= target {
        gate += 1;
        let name = format!("g{gate}");
        let op = if rng.gen_bool(0.5) { '*' } else { '+' };
        let a = names.choose(rng).unwrap().clone();
        let b = names.choose(rng).unwrap().clone();
        text.push_str(&format!(
            "{name} = {op} {}:{a} {}:{b}\n",
            grid_label(rng),
            grid_label(rng)
        ));
        names.push(name);
        size += 2;
    }
    // The newest gate is referenced by nothing, so it is a valid output.
    text.push_str(&format!("output g{gate}\n"));
    parse_circuit(&text).expect("generated text parses")
}
