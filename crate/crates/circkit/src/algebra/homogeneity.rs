//! Degree bookkeeping for variable subsets: subset-restricted homogeneity,
//! detection of partially homogeneous structure, monomial bases, and the
//! dimension count for homogeneous polynomials.
//!
//! A polynomial is homogeneous in a subset S when every term has the same
//! total degree after restricting exponents to S. Detection is a seeded
//! repair search, not an exhaustive scan over all 2^n subsets: each occurring
//! variable seeds a candidate set that grows only when some term's S-degree
//! falls short of the maximum, and each branch stops at the first subset that
//! works. The search is deterministic and bounded.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::poly::{Monomial, SparsePoly};
use crate::error::{Error, Result};

/// How many candidate subsets a single seed may visit before its branch of
/// the search is abandoned. Generous for the intended problem sizes.
const SEED_VISIT_BUDGET: usize = 4096;

/// Exact binomial coefficient C(n, k); 0 when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Dimension of the space of homogeneous degree-r polynomials in n variables:
/// C(n+r−1, r).
pub fn dim_pol_hom(n: u64, r: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::ParamViolation(
            "dim_pol_hom needs at least one variable".into(),
        ));
    }
    Ok(binomial(n + r - 1, r))
}

/// All exponent vectors of total degree exactly `r` over `nvars` variables,
/// in descending graded-lexicographic order (leading monomial first), e.g.
/// two variables at degree 2 give z1^2, z1·z2, z2^2.
pub fn monomial_basis(nvars: usize, r: u32) -> Vec<Monomial> {
    if nvars == 0 {
        return if r == 0 {
            vec![Monomial(vec![])]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; nvars];
    fill_basis(&mut out, &mut current, 0, r);
    out
}

fn fill_basis(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, remaining: u32) {
    if pos == current.len() - 1 {
        current[pos] = remaining;
        out.push(Monomial(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[pos] = e;
        fill_basis(out, current, pos + 1, remaining - e);
        current[pos] = 0;
    }
}

/// Total degree of a term after restricting exponents to the index set.
fn restricted_degree(m: &Monomial, indices: &[usize]) -> u32 {
    indices.iter().map(|&i| m.0[i]).sum()
}

/// Checks whether every term of `p` has the same total degree in the subset
/// `s`, returning that common degree if so. The zero polynomial (and any
/// polynomial, vacuously, with an empty subset) reports degree 0.
pub fn degree_in_subset(p: &SparsePoly, s: &BTreeSet<String>) -> Result<Option<u32>> {
    let indices: Vec<usize> = s.iter().map(|v| p.var_index(v)).collect::<Result<_>>()?;
    let mut degs = p.terms().keys().map(|m| restricted_degree(m, &indices));
    match degs.next() {
        None => Ok(Some(0)),
        Some(d0) => {
            if degs.all(|d| d == d0) {
                Ok(Some(d0))
            } else {
                Ok(None)
            }
        }
    }
}

/// Searches for nonempty proper variable subsets Z in which `p` is
/// homogeneous of positive degree. Each variable occurring in `p` seeds one
/// search: while some term's Z-degree is below the maximum Z-degree, the
/// candidate grows by one variable taken from such a deficient term (all
/// choices are branched); a branch stops at the first subset that works.
/// Subsets equal to the full declared variable list are discarded. The
/// returned list is deduplicated and sorted; an empty list means the search
/// found no partially homogeneous structure (it is not an exhaustive proof
/// of absence). Constant polynomials yield an empty list.
pub fn detect_partial_homogeneity(p: &SparsePoly) -> Vec<(BTreeSet<String>, u32)> {
    let nvars = p.vars().len();
    let mut occurring: BTreeSet<usize> = BTreeSet::new();
    for m in p.terms().keys() {
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                occurring.insert(i);
            }
        }
    }
    let mut found: BTreeSet<(Vec<usize>, u32)> = BTreeSet::new();
    for &seed in &occurring {
        let mut visited: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: Vec<Vec<usize>> = vec![vec![seed]];
        while let Some(z) = queue.pop() {
            if visited.len() >= SEED_VISIT_BUDGET {
                break;
            }
            if !visited.insert(z.clone()) {
                continue;
            }
            // A candidate equal to the whole variable list is never proper.
            if z.len() == nvars {
                continue;
            }
            let degs: Vec<u32> = p
                .terms()
                .keys()
                .map(|m| restricted_degree(m, &z))
                .collect();
            let max = *degs.iter().max().expect("nonconstant");
            if degs.iter().all(|&d| d == max) {
                found.insert((z, max));
                continue;
            }
            // Grow by a variable from some term whose Z-degree is deficient.
            for m in p.terms().keys() {
                if restricted_degree(m, &z) == max {
                    continue;
                }
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 && !z.contains(&i) {
                        let mut bigger = z.clone();
                        bigger.push(i);
                        bigger.sort_unstable();
                        queue.push(bigger);
                    }
                }
            }
        }
    }
    found
        .into_iter()
        .map(|(z, d)| {
            (
                z.iter().map(|&i| p.vars()[i].clone()).collect(),
                d,
            )
        })
        .collect()
}

/// A three-way split of a variable list: X (variables that appear with
/// degree exactly one), Y (free parameters), Z (the homogeneity block).
/// Z must be nonempty and must not exhaust the whole list; `r` records the
/// degree in Z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariablePartition {
    pub x: BTreeSet<String>,
    pub y: BTreeSet<String>,
    pub z: BTreeSet<String>,
    pub r: u32,
}

impl VariablePartition {
    pub fn new(
        x: BTreeSet<String>,
        y: BTreeSet<String>,
        z: BTreeSet<String>,
        r: u32,
        all_vars: &[String],
    ) -> Result<VariablePartition> {
        if z.is_empty() {
            return Err(Error::ParamViolation("Z must be nonempty".into()));
        }
        let mut union: BTreeSet<&String> = BTreeSet::new();
        let mut count = 0usize;
        for set in [&x, &y, &z] {
            for v in set {
                union.insert(v);
                count += 1;
            }
        }
        if union.len() != count {
            return Err(Error::ParamViolation(
                "X, Y, Z must be pairwise disjoint".into(),
            ));
        }
        if union.len() != all_vars.len() || !all_vars.iter().all(|v| union.contains(v)) {
            return Err(Error::ParamViolation(
                "X ∪ Y ∪ Z must cover the variable list exactly".into(),
            ));
        }
        if z.len() == all_vars.len() {
            return Err(Error::ParamViolation(
                "Z must be a proper subset of the variables".into(),
            ));
        }
        Ok(VariablePartition { x, y, z, r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::varlist;
    use crate::algebra::scalar::{FieldTag, Scalar};

    fn q() -> FieldTag {
        FieldTag::Rational
    }

    /// x11*x22 + x12*x21 over vars [x11, x12, x21, x22].
    fn per2() -> SparsePoly {
        let vars = varlist(&["x11", "x12", "x21", "x22"]);
        SparsePoly::from_terms(
            q(),
            vars,
            vec![
                (Monomial(vec![1, 0, 0, 1]), Scalar::one(q())),
                (Monomial(vec![0, 1, 1, 0]), Scalar::one(q())),
            ],
        )
        .unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(
            binomial(237, 14).to_string(),
            "13679007905650136533200"
        );
    }

    #[test]
    fn dim_counts() {
        assert_eq!(dim_pol_hom(3, 2).unwrap(), BigUint::from(6u32));
        assert_eq!(dim_pol_hom(5, 0).unwrap(), BigUint::one());
        assert_eq!(dim_pol_hom(5, 1).unwrap(), BigUint::from(5u32));
        assert!(dim_pol_hom(0, 2).is_err());
    }

    #[test]
    fn basis_descends_grlex() {
        let b = monomial_basis(2, 2);
        assert_eq!(
            b,
            vec![
                Monomial(vec![2, 0]),
                Monomial(vec![1, 1]),
                Monomial(vec![0, 2]),
            ]
        );
        assert_eq!(monomial_basis(3, 0), vec![Monomial(vec![0, 0, 0])]);
        assert_eq!(monomial_basis(1, 3), vec![Monomial(vec![3])]);
    }

    #[test]
    fn basis_length_matches_dimension() {
        for n in 1..=6u64 {
            for r in 0..=8u64 {
                let len = monomial_basis(n as usize, r as u32).len();
                assert_eq!(BigUint::from(len), dim_pol_hom(n, r).unwrap());
            }
        }
    }

    #[test]
    fn subset_degree_on_permanent_rows() {
        let p = per2();
        assert_eq!(degree_in_subset(&p, &set(&["x11", "x12"])).unwrap(), Some(1));
        assert_eq!(degree_in_subset(&p, &set(&["x11"])).unwrap(), None);
        assert_eq!(
            degree_in_subset(&p, &set(&["x11", "x12", "x21", "x22"])).unwrap(),
            Some(2)
        );
    }

    #[test]
    fn detect_finds_row_and_column_blocks() {
        let cands = detect_partial_homogeneity(&per2());
        assert!(cands.contains(&(set(&["x11", "x12"]), 1)));
        assert!(cands.contains(&(set(&["x21", "x22"]), 1)));
        for (z, d) in &cands {
            assert_eq!(degree_in_subset(&per2(), z).unwrap(), Some(*d));
        }
    }

    #[test]
    fn detect_rejects_sum_of_squares() {
        let vars = varlist(&["x", "y"]);
        let p = SparsePoly::from_terms(
            q(),
            vars,
            vec![
                (Monomial(vec![2, 0]), Scalar::one(q())),
                (Monomial(vec![0, 2]), Scalar::one(q())),
            ],
        )
        .unwrap();
        assert!(detect_partial_homogeneity(&p).is_empty());
    }

    #[test]
    fn detect_on_product_of_variables() {
        let vars = varlist(&["x", "y"]);
        let p = SparsePoly::from_terms(
            q(),
            vars,
            vec![(Monomial(vec![1, 1]), Scalar::one(q()))],
        )
        .unwrap();
        assert_eq!(
            detect_partial_homogeneity(&p),
            vec![(set(&["x"]), 1), (set(&["y"]), 1)]
        );
    }

    #[test]
    fn partition_validation() {
        let all: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
        assert!(VariablePartition::new(set(&[]), set(&["a"]), set(&["b", "c"]), 2, &all).is_ok());
        assert!(VariablePartition::new(set(&[]), set(&[]), set(&["a", "b", "c"]), 3, &all)
            .is_err());
        assert!(VariablePartition::new(set(&["a"]), set(&["a"]), set(&["b", "c"]), 1, &all)
            .is_err());
        assert!(VariablePartition::new(set(&[]), set(&[]), set(&["b"]), 1, &all).is_err());
    }
}
