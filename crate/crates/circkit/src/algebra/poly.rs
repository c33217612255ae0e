//! Sparse multivariate polynomials over an ordered variable list.
//!
//! A monomial is a dense exponent vector against the declared variable list;
//! the term map is ordered by graded lexicographic comparison (total degree
//! first, then left-to-right exponents), so iteration order is canonical.
//! Invariants: no zero coefficients are stored, every coefficient carries the
//! polynomial's field tag, and every exponent vector has the declared length.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::algebra::scalar::{FieldTag, Scalar};
use crate::error::{Error, Result};

/// Dense exponent vector. `Ord` is ascending graded-lexicographic, so
/// `BTreeMap` iteration runs from the smallest monomial up; serialization and
/// basis enumeration iterate in reverse (leading term first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    field: FieldTag,
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(field: FieldTag, vars: Arc<Vec<String>>) -> SparsePoly {
        SparsePoly {
            field,
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, vars: Arc<Vec<String>>) -> SparsePoly {
        let mut p = SparsePoly::zero(c.field(), vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(p.vars.len()), c);
        }
        p
    }

    /// The polynomial `x_i` for the i-th declared variable.
    pub fn var(field: FieldTag, vars: Arc<Vec<String>>, i: usize) -> Result<SparsePoly> {
        if i >= vars.len() {
            return Err(Error::UnknownVariable(format!("index {i}")));
        }
        let mut exp = vec![0u32; vars.len()];
        exp[i] = 1;
        let mut p = SparsePoly::zero(field, vars);
        p.terms.insert(Monomial(exp), Scalar::one(field));
        Ok(p)
    }

    pub fn from_terms<I>(field: FieldTag, vars: Arc<Vec<String>>, terms: I) -> Result<SparsePoly>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut p = SparsePoly::zero(field, vars);
        for (m, c) in terms {
            p.add_term(m, c)?;
        }
        Ok(p)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) -> Result<()> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if m.0.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} against {} variables",
                m.0.len(),
                self.vars.len()
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c).expect("same field");
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Max total degree over terms; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        // grlex order puts the highest total degree last
        self.terms.keys().next_back().map(|m| m.total_degree())
    }

    fn check_compatible(&self, other: &SparsePoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.vars != other.vars && *self.vars != *other.vars {
            return Err(Error::VariableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Result<SparsePoly> {
        if c.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        if c.is_zero() {
            return Ok(SparsePoly::zero(self.field, self.vars.clone()));
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c).expect("same field");
        }
        Ok(out)
    }

    pub fn mul(&self, other: &SparsePoly) -> Result<SparsePoly> {
        self.check_compatible(other)?;
        let mut out = SparsePoly::zero(self.field, self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb).expect("same field"))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<SparsePoly> {
        let mut acc = SparsePoly::constant(Scalar::one(self.field), self.vars.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: &str) -> Result<SparsePoly> {
        let i = self.var_index(var)?;
        let mut out = SparsePoly::zero(self.field, self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            let factor = Scalar::from_i64(e as i64, self.field);
            out.add_term(Monomial(exp), c.mul(&factor).expect("same field"))?;
        }
        Ok(out)
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> SparsePoly {
        let mut out = SparsePoly::zero(self.field, self.vars.clone());
        for (m, c) in &self.terms {
            if m.total_degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// `Some(true)` iff every term is homogeneous of the same total degree.
    /// The zero polynomial counts as homogeneous (of degree 0 by convention).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.total_degree());
        match degs.next() {
            None => true,
            Some(d0) => degs.all(|d| d == d0),
        }
    }

    pub fn var_index(&self, var: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))
    }

    pub fn evaluate(&self, point: &BTreeMap<String, Scalar>) -> Result<Scalar> {
        let mut values = Vec::with_capacity(self.vars.len());
        for v in self.vars.iter() {
            let s = point
                .get(v)
                .ok_or_else(|| Error::MissingVariable(v.clone()))?;
            if s.field() != self.field {
                return Err(Error::FieldMismatch);
            }
            values.push(s.clone());
        }
        let mut acc = Scalar::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&values[i].pow(e as u64)).expect("same field");
                }
            }
            acc = acc.add(&t).expect("same field");
        }
        Ok(acc)
    }

    /// Re-expresses the polynomial over `new_vars`, which must contain every
    /// variable that actually occurs. Dropped variables must be absent from
    /// all terms; fresh variables get exponent zero.
    pub fn project_to_vars(&self, new_vars: Arc<Vec<String>>) -> Result<SparsePoly> {
        let mapping: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = SparsePoly::zero(self.field, new_vars);
        for (m, c) in &self.terms {
            let mut exp = vec![0u32; out.vars.len()];
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match mapping[i] {
                    Some(j) => exp[j] += e,
                    None => {
                        return Err(Error::UnknownVariable(self.vars[i].clone()));
                    }
                }
            }
            out.add_term(Monomial(exp), c.clone())?;
        }
        Ok(out)
    }

    /// Renames variables positionally (same arity, fresh names).
    pub fn rename_vars(&self, new_vars: Arc<Vec<String>>) -> Result<SparsePoly> {
        if new_vars.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "rename expects {} names, got {}",
                self.vars.len(),
                new_vars.len()
            )));
        }
        Ok(SparsePoly {
            field: self.field,
            vars: new_vars,
            terms: self.terms.clone(),
        })
    }

    /// Substitutes scalars for a subset of variables, producing a polynomial
    /// over the remaining ones (in their original order).
    pub fn substitute(&self, assignment: &BTreeMap<String, Scalar>) -> Result<SparsePoly> {
        for (v, s) in assignment {
            if !self.vars.iter().any(|w| w == v) {
                return Err(Error::UnknownVariable(v.clone()));
            }
            if s.field() != self.field {
                return Err(Error::FieldMismatch);
            }
        }
        let keep: Vec<usize> = (0..self.vars.len())
            .filter(|&i| !assignment.contains_key(&self.vars[i]))
            .collect();
        let new_vars: Arc<Vec<String>> =
            Arc::new(keep.iter().map(|&i| self.vars[i].clone()).collect());
        let mut out = SparsePoly::zero(self.field, new_vars);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exp = Vec::with_capacity(keep.len());
            let mut dead = false;
            for (i, &e) in m.0.iter().enumerate() {
                match assignment.get(&self.vars[i]) {
                    Some(s) => {
                        if e > 0 {
                            if s.is_zero() {
                                dead = true;
                                break;
                            }
                            coeff = coeff.mul(&s.pow(e as u64)).expect("same field");
                        }
                    }
                    None => exp.push(e),
                }
            }
            if !dead {
                out.add_term(Monomial(exp), coeff)?;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut wrote = false;
            if !c.is_one() || m.total_degree() == 0 {
                write!(f, "{c}")?;
                wrote = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                wrote = true;
                write!(f, "{}", self.vars[i])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Convenience: shared variable list from string slices.
pub fn varlist<S: AsRef<str>>(names: &[S]) -> Arc<Vec<String>> {
    Arc::new(names.iter().map(|s| s.as_ref().to_string()).collect())
}

/// Variable subset as indices into a polynomial's variable list.
pub fn subset_indices(p: &SparsePoly, subset: &BTreeSet<String>) -> Result<Vec<usize>> {
    subset.iter().map(|v| p.var_index(v)).collect()
}
