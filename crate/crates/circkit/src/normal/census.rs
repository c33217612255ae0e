//! Gate counts grouped by syntactic degree.
//!
//! Per degree j the census records the number of sum-gates (`n_plus`) and
//! the number of product-gates and input-gates together (`n_times`); the
//! constant-one gate is counted in neither, matching the convention that the
//! total N sums only these two columns.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, NodeKind};
use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DegreeCounts {
    pub n_plus: u64,
    pub n_times: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateCensus {
    pub by_degree: BTreeMap<u64, DegreeCounts>,
    pub total: u64,
}

impl GateCensus {
    pub fn n_plus(&self, degree: u64) -> u64 {
        self.by_degree.get(&degree).map_or(0, |c| c.n_plus)
    }

    pub fn n_times(&self, degree: u64) -> u64 {
        self.by_degree.get(&degree).map_or(0, |c| c.n_times)
    }

    pub fn max_n_times(&self) -> u64 {
        self.by_degree.values().map(|c| c.n_times).max().unwrap_or(0)
    }

    pub fn max_n_plus(&self) -> u64 {
        self.by_degree.values().map(|c| c.n_plus).max().unwrap_or(0)
    }

    /// Σ over 1 ≤ j ≤ hi of n_plus(j).
    pub fn sum_n_plus_through(&self, hi: u64) -> u64 {
        self.by_degree
            .iter()
            .filter(|&(&j, _)| j >= 1 && j <= hi)
            .map(|(_, c)| c.n_plus)
            .sum()
    }
}

pub fn gate_census(c: &Circuit) -> Result<GateCensus> {
    let degs = c.syntactic_degrees()?;
    let mut by_degree: BTreeMap<u64, DegreeCounts> = BTreeMap::new();
    let mut total = 0u64;
    for (v, node) in c.nodes().iter().enumerate() {
        let slot = by_degree.entry(degs[v]).or_default();
        match node.kind {
            NodeKind::Sum => {
                slot.n_plus += 1;
                total += 1;
            }
            NodeKind::Product | NodeKind::Input(_) => {
                slot.n_times += 1;
                total += 1;
            }
            NodeKind::One => {}
        }
    }
    by_degree.retain(|_, c| c.n_plus > 0 || c.n_times > 0);
    Ok(GateCensus { by_degree, total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn sum_of_two_inputs() {
        let c = parse_circuit("field Q\ninput x1\ninput x2\ng = + 1:x1 1:x2\noutput g\n").unwrap();
        let census = gate_census(&c).unwrap();
        assert_eq!(census.total, 3);
        assert_eq!(census.n_plus(1), 1);
        assert_eq!(census.n_times(1), 2);
    }

    #[test]
    fn one_gates_are_not_counted() {
        let c = parse_circuit("field Q\ninput x\none e\ng = + 1:x 2:e\noutput g\n").unwrap();
        let census = gate_census(&c).unwrap();
        assert_eq!(census.total, 2);
        assert_eq!(census.n_times(0), 0);
        assert_eq!(census.n_plus(1), 1);
    }

    #[test]
    fn degrees_separate_counts() {
        let c = parse_circuit(
            "field Q\ninput x\ninput y\np = * 1:x 1:y\ng = + 1:p\noutput g\n",
        )
        .unwrap();
        let census = gate_census(&c).unwrap();
        assert_eq!(census.n_times(1), 2);
        assert_eq!(census.n_times(2), 1);
        assert_eq!(census.n_plus(2), 1);
        assert_eq!(census.max_n_times(), 2);
        assert_eq!(census.sum_n_plus_through(1), 0);
        assert_eq!(census.sum_n_plus_through(2), 1);
    }
}
