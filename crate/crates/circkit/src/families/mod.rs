//! Coefficient families read off a partially homogeneous polynomial.
//!
//! Fix a polynomial f over variables split into three disjoint groups X, Y,
//! Z, where f is homogeneous of degree r in Z. Collecting the coefficient
//! of each degree-r Z-monomial yields polynomials in Y alone, and two
//! constructions package them:
//!
//! - **Case 1** (X empty): f itself decomposes as Σ_q c_q(Y)·h_q(Z) over
//!   the monomial basis h. The family evaluates λ ↦ Σ_q c_q(λ)·h_q, a
//!   polynomial map from F^|Y| into the homogeneous degree-r polynomials
//!   in Z.
//! - **Case 2** (X nonempty, every X-variable of degree exactly 1 in f):
//!   the partial derivatives ∂f/∂x for x ∈ X each decompose the same way,
//!   giving a |X|-row matrix of coefficient polynomials and a map into
//!   tuples of homogeneous polynomials.
//!
//! Every value of either map has small circuits whenever f does: a circuit
//! for f specialized at λ witnesses Case 1 at no size increase, and a
//! reverse-mode gradient circuit specialized at λ witnesses Case 2 within
//! a factor of five. [`specialize`] builds those witnesses when the family
//! carries a source circuit, and it checks the size bounds it promises.
//!
//! The permanent makes the worked example: [`permanent_objects`] splits
//! its matrix by rows (top row as X, the next rows as Y, the rest as Z)
//! and extracts either family at desk scale.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::{
    degree_in_subset, dim_pol_hom, monomial_basis, varlist, FieldTag, Monomial, Scalar,
    SparsePoly, VariablePartition,
};
use crate::circuit::{
    expand, gradient_circuit, substitute, Circuit, DEFAULT_TERM_BUDGET,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    /// X empty; one coefficient row describing f itself.
    Case1,
    /// X nonempty; one coefficient row per sorted X-variable derivative.
    Case2,
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CaseTag::Case1 => write!(f, "CASE1"),
            CaseTag::Case2 => write!(f, "CASE2"),
        }
    }
}

/// Coefficient polynomials of one polynomial (Case 1) or of its X-partial
/// derivatives (Case 2) along the degree-r Z-monomial basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialFamily {
    pub partition: VariablePartition,
    pub case_tag: CaseTag,
    /// Row-major coefficient matrix: `coeff_polys[row][q]` is a polynomial
    /// in the sorted Y variables; Case 1 has a single row, Case 2 one row
    /// per sorted X variable.
    pub coeff_polys: Vec<Vec<SparsePoly>>,
    /// Degree-r monomial basis over the sorted Z variables, leading
    /// monomial first; exponent vectors index `z_list()`.
    pub basis: Vec<Monomial>,
    /// Optional single-output circuit computing the decomposed polynomial,
    /// used to produce size witnesses on specialization.
    pub source_circuit: Option<Circuit>,
}

impl PolynomialFamily {
    pub fn field(&self) -> FieldTag {
        self.coeff_polys[0][0].field()
    }

    /// Sorted Y variables; specialization points follow this order.
    pub fn y_list(&self) -> Vec<String> {
        self.partition.y.iter().cloned().collect()
    }

    /// Sorted Z variables; the basis exponents index this list.
    pub fn z_list(&self) -> Vec<String> {
        self.partition.z.iter().cloned().collect()
    }

    /// Sorted X variables; Case 2 rows follow this order.
    pub fn x_list(&self) -> Vec<String> {
        self.partition.x.iter().cloned().collect()
    }

    /// Basis length: the dimension of the homogeneous degree-r space in Z.
    pub fn m_prime(&self) -> usize {
        self.basis.len()
    }

    pub fn rows(&self) -> usize {
        self.coeff_polys.len()
    }

    /// Domain dimension of the evaluation map: |Y|.
    pub fn domain_dim(&self) -> usize {
        self.partition.y.len()
    }

    /// Flattened coordinate count rows·m′ of the evaluation map's codomain.
    pub fn m_total(&self) -> usize {
        self.rows() * self.m_prime()
    }

    /// Rebuilds the polynomial a row describes — f itself for Case 1, the
    /// row's X-derivative for Case 2 — over sorted(X ∪ Y ∪ Z). Exact; the
    /// extraction is only correct if this matches the original input.
    pub fn reconstruct_row(&self, row: usize) -> Result<SparsePoly> {
        let frame = self.sorted_frame();
        let z_list = self.z_list();
        let mut acc = SparsePoly::zero(self.field(), frame.clone());
        for (q, mono) in self.basis.iter().enumerate() {
            let coeff = self.coeff_polys[row][q].project_to_vars(frame.clone())?;
            let mut zmono = SparsePoly::zero(self.field(), frame.clone());
            let mut exp = vec![0u32; frame.len()];
            for (zi, &e) in mono.0.iter().enumerate() {
                if e > 0 {
                    let pos = frame
                        .iter()
                        .position(|v| *v == z_list[zi])
                        .expect("frame covers Z");
                    exp[pos] = e;
                }
            }
            zmono.add_term(Monomial(exp), Scalar::one(self.field()))?;
            acc = acc.add(&coeff.mul(&zmono)?)?;
        }
        Ok(acc)
    }

    /// Sorted list of all partition variables, the frame reconstruction
    /// and comparison tests work over.
    pub fn sorted_frame(&self) -> Arc<Vec<String>> {
        let mut all: Vec<String> = self
            .partition
            .x
            .iter()
            .chain(self.partition.y.iter())
            .chain(self.partition.z.iter())
            .cloned()
            .collect();
        all.sort();
        Arc::new(all)
    }

    /// Attaches a single-output circuit after verifying it computes the
    /// decomposed polynomial (expansion compared against reconstruction).
    pub fn attach_source_circuit(&mut self, c: Circuit, budget: u64) -> Result<()> {
        c.validate()?;
        if c.outputs().len() != 1 {
            return Err(Error::MultipleOutputs(c.outputs().len()));
        }
        let frame = self.sorted_frame();
        let got = expand(&c, budget)?[0].project_to_vars(frame.clone())?;
        let want = match self.case_tag {
            CaseTag::Case1 => self.reconstruct_row(0)?,
            CaseTag::Case2 => {
                // rebuild f from its derivative rows: every X variable has
                // degree exactly one, so f = Σ_x x·∂f/∂x
                let mut acc = SparsePoly::zero(self.field(), frame.clone());
                for (row, xvar) in self.x_list().iter().enumerate() {
                    let d = self.reconstruct_row(row)?;
                    let xi = frame.iter().position(|v| v == xvar).expect("frame has X");
                    let xpoly = SparsePoly::var(self.field(), frame.clone(), xi)?;
                    acc = acc.add(&d.mul(&xpoly)?)?;
                }
                acc
            }
        };
        if got != want {
            return Err(Error::InvalidCircuit(
                "source circuit does not compute the decomposed polynomial".into(),
            ));
        }
        self.source_circuit = Some(c);
        Ok(())
    }
}

/// Shape summary of the evaluation map λ ↦ (Σ_q c_{j,q}(λ)·h_q)_j attached
/// to a family: domain F^k, codomain (homogeneous degree-r polynomials in
/// Z)^rows. [`specialize`] is the evaluator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociatedMapping {
    pub domain_dim: usize,
    pub rows: usize,
    pub m_prime: usize,
    pub z_vars: Vec<String>,
    pub r: u32,
}

pub fn associated_mapping(fam: &PolynomialFamily) -> AssociatedMapping {
    AssociatedMapping {
        domain_dim: fam.domain_dim(),
        rows: fam.rows(),
        m_prime: fam.m_prime(),
        z_vars: fam.z_list(),
        r: fam.partition.r,
    }
}

/// Variable classification used during coefficient extraction.
enum Role {
    Y(usize),
    Z(usize),
    Forbidden,
}

/// Splits one polynomial into its coefficient vector along the basis.
/// `f` may declare extra variables (e.g. the X block in a derivative), but
/// any term actually touching one is an error reported via `forbidden_ctx`.
fn coeff_vector(
    f: &SparsePoly,
    y_list: &[String],
    z_list: &[String],
    basis_pos: &BTreeMap<Vec<u32>, usize>,
    m_prime: usize,
    forbidden_ctx: Option<&str>,
) -> Result<Vec<SparsePoly>> {
    let yvars = varlist(y_list);
    let roles: Vec<Role> = f
        .vars()
        .iter()
        .map(|v| {
            if let Some(i) = y_list.iter().position(|w| w == v) {
                Role::Y(i)
            } else if let Some(i) = z_list.iter().position(|w| w == v) {
                Role::Z(i)
            } else {
                Role::Forbidden
            }
        })
        .collect();
    let mut out = vec![SparsePoly::zero(f.field(), yvars); m_prime];
    for (m, c) in f.terms() {
        let mut zexp = vec![0u32; z_list.len()];
        let mut yexp = vec![0u32; y_list.len()];
        for (i, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            match roles[i] {
                Role::Y(k) => yexp[k] = e,
                Role::Z(k) => zexp[k] = e,
                Role::Forbidden => {
                    return Err(Error::DerivativeContainsX {
                        x: forbidden_ctx.unwrap_or("?").to_string(),
                        offending: f.vars()[i].clone(),
                    })
                }
            }
        }
        let q = *basis_pos
            .get(&zexp)
            .ok_or_else(|| Error::Internal("Z-part missing from the basis".into()))?;
        out[q].add_term(Monomial(yexp), c.clone())?;
    }
    Ok(out)
}

fn z_degree_of(f: &SparsePoly, z: &BTreeSet<String>) -> Result<u32> {
    degree_in_subset(f, z)?.ok_or(Error::NotHomogeneousInZ)
}

fn basis_for(z_len: usize, r: u32) -> (Vec<Monomial>, BTreeMap<Vec<u32>, usize>) {
    let basis = monomial_basis(z_len, r);
    let pos = basis
        .iter()
        .enumerate()
        .map(|(q, m)| (m.0.clone(), q))
        .collect();
    (basis, pos)
}

/// Case 1 extraction: X empty, `f` over Y ∪ Z and homogeneous in Z. The
/// single coefficient row satisfies Σ_q row[q](Y)·h_q(Z) = f exactly.
pub fn decompose_case1(
    f: &SparsePoly,
    y: &BTreeSet<String>,
    z: &BTreeSet<String>,
) -> Result<PolynomialFamily> {
    let r = z_degree_of(f, z)?;
    let partition =
        VariablePartition::new(BTreeSet::new(), y.clone(), z.clone(), r, f.vars())?;
    let y_list: Vec<String> = y.iter().cloned().collect();
    let z_list: Vec<String> = z.iter().cloned().collect();
    let (basis, pos) = basis_for(z_list.len(), r);
    let row = coeff_vector(f, &y_list, &z_list, &pos, basis.len(), None)?;
    Ok(PolynomialFamily {
        partition,
        case_tag: CaseTag::Case1,
        coeff_polys: vec![row],
        basis,
        source_circuit: None,
    })
}

/// Case 2 extraction: every x ∈ X has degree exactly 1 in `f`, and `f` is
/// homogeneous in Z. Row j holds the coefficients of ∂f/∂x_j (sorted X
/// order); each derivative must involve Y ∪ Z only once x is gone.
pub fn decompose_case2(
    f: &SparsePoly,
    x: &BTreeSet<String>,
    y: &BTreeSet<String>,
    z: &BTreeSet<String>,
) -> Result<PolynomialFamily> {
    if x.is_empty() {
        return Err(Error::ParamViolation(
            "Case 2 needs a nonempty X; use Case 1 instead".into(),
        ));
    }
    let r = z_degree_of(f, z)?;
    let partition = VariablePartition::new(x.clone(), y.clone(), z.clone(), r, f.vars())?;
    let y_list: Vec<String> = y.iter().cloned().collect();
    let z_list: Vec<String> = z.iter().cloned().collect();
    for xv in x {
        let i = f.var_index(xv)?;
        let maxdeg = f.terms().keys().map(|m| m.0[i]).max().unwrap_or(0);
        if maxdeg != 1 {
            return Err(Error::DegreeNotOneInX(xv.clone()));
        }
    }
    let (basis, pos) = basis_for(z_list.len(), r);
    let mut rowsv = Vec::with_capacity(x.len());
    for xv in x {
        let d = f.partial_derivative(xv)?;
        rowsv.push(coeff_vector(
            &d,
            &y_list,
            &z_list,
            &pos,
            basis.len(),
            Some(xv),
        )?);
    }
    Ok(PolynomialFamily {
        partition,
        case_tag: CaseTag::Case2,
        coeff_polys: rowsv,
        basis,
        source_circuit: None,
    })
}

/// One evaluation of a family's map, with the size witness when the family
/// carries a source circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialization {
    /// One homogeneous degree-r polynomial in the sorted Z variables per
    /// coefficient row.
    pub components: Vec<SparsePoly>,
    pub witness: Option<Circuit>,
    pub source_size: Option<usize>,
    pub witness_size: Option<usize>,
}

/// Evaluates the family's map at λ (sorted-Y order) and, when a source
/// circuit is attached, produces a circuit computing the same tuple:
/// Case 1 specializes the circuit directly (size never grows), Case 2
/// specializes its gradient circuit (size stays under five times the
/// source). The bounds are checked, not assumed.
pub fn specialize(fam: &PolynomialFamily, lambda: &[Scalar]) -> Result<Specialization> {
    let y_list = fam.y_list();
    if lambda.len() != y_list.len() {
        return Err(Error::DimensionMismatch(format!(
            "expected {} specialization values, got {}",
            y_list.len(),
            lambda.len()
        )));
    }
    let point: BTreeMap<String, Scalar> = y_list
        .iter()
        .cloned()
        .zip(lambda.iter().cloned())
        .collect();
    let zvars = varlist(&fam.z_list());
    let mut components = Vec::with_capacity(fam.rows());
    for row in &fam.coeff_polys {
        let mut p = SparsePoly::zero(fam.field(), zvars.clone());
        for (q, coeff) in row.iter().enumerate() {
            let c = coeff.evaluate(&point)?;
            p.add_term(fam.basis[q].clone(), c)?;
        }
        components.push(p);
    }

    let mut witness = None;
    let mut source_size = None;
    let mut witness_size = None;
    if let Some(src) = &fam.source_circuit {
        let circuit_inputs: BTreeSet<String> = src.input_vars().into_iter().collect();
        let filtered: BTreeMap<String, Scalar> = point
            .iter()
            .filter(|(v, _)| circuit_inputs.contains(*v))
            .map(|(v, s)| (v.clone(), s.clone()))
            .collect();
        let w = match fam.case_tag {
            CaseTag::Case1 => substitute(src, &filtered)?,
            CaseTag::Case2 => {
                let grad = gradient_circuit(src, &fam.x_list())?;
                substitute(&grad.circuit, &filtered)?
            }
        };
        let ok = match fam.case_tag {
            CaseTag::Case1 => w.size() <= src.size(),
            CaseTag::Case2 => w.size() < 5 * src.size(),
        };
        if !ok {
            return Err(Error::Internal(format!(
                "witness size {} breaks the promised bound against source size {}",
                w.size(),
                src.size()
            )));
        }
        source_size = Some(src.size());
        witness_size = Some(w.size());
        witness = Some(w);
    }

    Ok(Specialization {
        components,
        witness,
        source_size,
        witness_size,
    })
}

/// The permanent of an n×n matrix of variables x11..xnn as an expanded
/// polynomial: one term per permutation, all coefficients 1.
pub fn permanent_poly(n: usize, field: FieldTag) -> Result<SparsePoly> {
    if n == 0 || n > 6 {
        return Err(Error::ParamViolation(
            "permanent is materialized only for 1 <= n <= 6".into(),
        ));
    }
    let names: Vec<String> = matrix_names(n);
    let vars = varlist(&names);
    let mut p = SparsePoly::zero(field, vars);
    for sigma in permutations(n) {
        let mut exp = vec![0u32; n * n];
        for (i, &j) in sigma.iter().enumerate() {
            exp[i * n + j] = 1;
        }
        p.add_term(Monomial(exp), Scalar::one(field))?;
    }
    Ok(p)
}

/// A fanin-two circuit computing the permanent by expansion: a left-leaning
/// product chain per permutation, summed pairwise. Not minimal — it is the
/// plain witness-producing construction.
pub fn permanent_circuit(n: usize, field: FieldTag) -> Result<Circuit> {
    if n == 0 || n > 6 {
        return Err(Error::ParamViolation(
            "permanent circuits are materialized only for 1 <= n <= 6".into(),
        ));
    }
    let one = Scalar::one(field);
    let mut c = Circuit::new(field);
    let mut inputs = vec![0usize; n * n];
    for (k, name) in matrix_names(n).iter().enumerate() {
        inputs[k] = c.add_input(name.clone());
    }
    let mut terms = Vec::new();
    for (k, sigma) in permutations(n).into_iter().enumerate() {
        let mut acc = inputs[sigma[0]];
        for (i, &j) in sigma.iter().enumerate().skip(1) {
            acc = c.add_product(
                format!("m{k}_{i}"),
                vec![(acc, one.clone()), (inputs[i * n + j], one.clone())],
            )?;
        }
        terms.push(acc);
    }
    let mut acc = terms[0];
    if terms.len() == 1 {
        acc = c.add_sum("per", vec![(acc, one.clone())])?;
    } else {
        for (k, &t) in terms.iter().enumerate().skip(1) {
            let name = if k + 1 == terms.len() {
                "per".to_string()
            } else {
                format!("a{k}")
            };
            acc = c.add_sum(name, vec![(acc, one.clone()), (t, one.clone())])?;
        }
    }
    c.set_outputs(vec![acc])?;
    c.validate()?;
    Ok(c)
}

fn matrix_names(n: usize) -> Vec<String> {
    let mut names = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            names.push(format!("x{i}{j}"));
        }
    }
    names
}

/// All permutations of 0..n in lexicographic order, as column choices.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    loop {
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PermanentVariant {
    /// X empty, Y = rows 1..=t, Z = rows t+1..=n.
    Case1YZ,
    /// X = row 1, Y = rows 2..=t, Z = rows t+1..=n.
    Case2XYZ,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermanentObjects {
    pub poly: SparsePoly,
    pub partition: VariablePartition,
    pub family: PolynomialFamily,
}

/// Builds the permanent, the row-block partition for parameter t, and the
/// extracted family with the expansion circuit attached as size witness.
pub fn permanent_objects(
    n: usize,
    t: usize,
    variant: PermanentVariant,
) -> Result<PermanentObjects> {
    if n > 5 {
        return Err(Error::ParamViolation(
            "permanent families are materialized only for n <= 5".into(),
        ));
    }
    if t < 2 || t + 2 > n {
        return Err(Error::ParamViolation(format!(
            "need 2 <= t <= n-2, got t={t}, n={n}"
        )));
    }
    let field = FieldTag::Rational;
    let poly = permanent_poly(n, field)?;
    let rows = |lo: usize, hi: usize| -> BTreeSet<String> {
        let mut s = BTreeSet::new();
        for u in lo..=hi {
            for i in 1..=n {
                s.insert(format!("x{u}{i}"));
            }
        }
        s
    };
    let z = rows(t + 1, n);
    let mut family = match variant {
        PermanentVariant::Case1YZ => decompose_case1(&poly, &rows(1, t), &z)?,
        PermanentVariant::Case2XYZ => {
            decompose_case2(&poly, &rows(1, 1), &rows(2, t), &z)?
        }
    };
    family.attach_source_circuit(permanent_circuit(n, field)?, DEFAULT_TERM_BUDGET)?;
    let partition = family.partition.clone();
    // sanity: the basis length matches the dimension formula
    let want = dim_pol_hom(z.len() as u64, partition.r as u64)?;
    if num_bigint::BigUint::from(family.m_prime()) != want {
        return Err(Error::Internal("basis length disagrees with dimension".into()));
    }
    Ok(PermanentObjects {
        poly,
        partition,
        family,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldTag {
        FieldTag::Rational
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn poly(vars: &[&str], terms: &[(i64, &[u32])]) -> SparsePoly {
        let mut p = SparsePoly::zero(q(), varlist(vars));
        for (c, e) in terms {
            p.add_term(Monomial(e.to_vec()), Scalar::from_i64(*c, q()))
                .unwrap();
        }
        p
    }

    #[test]
    fn case1_reads_coefficients_off_the_basis() {
        // y1*z1^2 + y1*y2*z2^2
        let f = poly(
            &["y1", "y2", "z1", "z2"],
            &[(1, &[1, 0, 2, 0]), (1, &[1, 1, 0, 2])],
        );
        let fam = decompose_case1(&f, &set(&["y1", "y2"]), &set(&["z1", "z2"])).unwrap();
        assert_eq!(fam.partition.r, 2);
        assert_eq!(fam.m_prime(), 3); // z1^2, z1*z2, z2^2
        let row = &fam.coeff_polys[0];
        assert_eq!(format!("{}", row[0]), "y1");
        assert!(row[1].is_zero());
        assert_eq!(format!("{}", row[2]), "y1*y2");
        let rebuilt = fam.reconstruct_row(0).unwrap();
        assert_eq!(rebuilt, f.project_to_vars(fam.sorted_frame()).unwrap());
    }

    #[test]
    fn case1_on_the_two_by_two_permanent_reads_the_other_row() {
        let f = permanent_poly(2, q()).unwrap();
        let fam =
            decompose_case1(&f, &set(&["x11", "x12"]), &set(&["x21", "x22"])).unwrap();
        // basis over (x21, x22) is (x21, x22); coefficients come from row 1
        let row = &fam.coeff_polys[0];
        assert_eq!(format!("{}", row[0]), "x12");
        assert_eq!(format!("{}", row[1]), "x11");
    }

    #[test]
    fn mixed_z_degree_is_rejected() {
        // y1*z1 + z1^2
        let f = poly(&["y1", "z1"], &[(1, &[1, 1]), (1, &[0, 2])]);
        assert!(matches!(
            decompose_case1(&f, &set(&["y1"]), &set(&["z1"])),
            Err(Error::NotHomogeneousInZ)
        ));
    }

    #[test]
    fn case2_single_linear_variable() {
        // w1*z1 + w1*z2
        let f = poly(&["w1", "z1", "z2"], &[(1, &[1, 1, 0]), (1, &[1, 0, 1])]);
        let fam =
            decompose_case2(&f, &set(&["w1"]), &BTreeSet::new(), &set(&["z1", "z2"]))
                .unwrap();
        assert_eq!(fam.rows(), 1);
        assert_eq!(fam.m_prime(), 2);
        // derivative is z1 + z2: constant coefficients (1, 1) in zero Y variables
        for c in &fam.coeff_polys[0] {
            assert_eq!(format!("{c}"), "1");
        }
        // with no Y variables the map is constant
        let spec = specialize(&fam, &[]).unwrap();
        assert_eq!(format!("{}", spec.components[0]), "z1 + z2");
    }

    #[test]
    fn case2_on_the_two_by_two_permanent_gives_minor_rows() {
        let f = permanent_poly(2, q()).unwrap();
        let fam = decompose_case2(
            &f,
            &set(&["x11", "x12"]),
            &BTreeSet::new(),
            &set(&["x21", "x22"]),
        )
        .unwrap();
        // ∂/∂x11 = x22 → (0, 1); ∂/∂x12 = x21 → (1, 0)
        assert_eq!(format!("{}", fam.coeff_polys[0][1]), "1");
        assert!(fam.coeff_polys[0][0].is_zero());
        assert_eq!(format!("{}", fam.coeff_polys[1][0]), "1");
        assert!(fam.coeff_polys[1][1].is_zero());
    }

    #[test]
    fn case2_rejects_higher_degree_and_entangled_derivatives() {
        // x1^2*z1
        let f = poly(&["x1", "z1"], &[(1, &[2, 1])]);
        assert!(matches!(
            decompose_case2(&f, &set(&["x1"]), &BTreeSet::new(), &set(&["z1"])),
            Err(Error::DegreeNotOneInX(v)) if v == "x1"
        ));
        // x1*x2*z1
        let g = poly(&["x1", "x2", "z1"], &[(1, &[1, 1, 1])]);
        assert!(matches!(
            decompose_case2(&g, &set(&["x1", "x2"]), &BTreeSet::new(), &set(&["z1"])),
            Err(Error::DerivativeContainsX { .. })
        ));
    }

    #[test]
    fn specializing_the_permanent_family_at_ones() {
        let f = permanent_poly(2, q()).unwrap();
        let mut fam =
            decompose_case1(&f, &set(&["x11", "x12"]), &set(&["x21", "x22"])).unwrap();
        fam.attach_source_circuit(
            permanent_circuit(2, q()).unwrap(),
            DEFAULT_TERM_BUDGET,
        )
        .unwrap();
        let onev = vec![Scalar::one(q()), Scalar::one(q())];
        let spec = specialize(&fam, &onev).unwrap();
        assert_eq!(format!("{}", spec.components[0]), "x21 + x22");
        // witness: specialized circuit computes the same polynomial
        let w = spec.witness.as_ref().unwrap();
        assert!(spec.witness_size.unwrap() <= spec.source_size.unwrap());
        let got = expand(w, DEFAULT_TERM_BUDGET).unwrap()[0]
            .project_to_vars(varlist(&fam.z_list()))
            .unwrap();
        assert_eq!(got, spec.components[0]);
    }

    #[test]
    fn specializing_at_zero_keeps_only_constant_coefficients() {
        let f = permanent_poly(2, q()).unwrap();
        let fam =
            decompose_case1(&f, &set(&["x11", "x12"]), &set(&["x21", "x22"])).unwrap();
        let spec = specialize(&fam, &[Scalar::zero(q()), Scalar::zero(q())]).unwrap();
        assert!(spec.components[0].is_zero());
    }

    #[test]
    fn gradient_witness_stays_under_five_times_the_source() {
        let f = permanent_poly(3, q()).unwrap();
        let mut fam = decompose_case2(
            &f,
            &set(&["x11", "x12", "x13"]),
            &set(&["x21", "x22", "x23"]),
            &set(&["x31", "x32", "x33"]),
        )
        .unwrap();
        let src = permanent_circuit(3, q()).unwrap();
        let src_size = src.size();
        fam.attach_source_circuit(src, DEFAULT_TERM_BUDGET).unwrap();
        let lambda: Vec<Scalar> = (0..3).map(|k| Scalar::from_i64(k + 1, q())).collect();
        let spec = specialize(&fam, &lambda).unwrap();
        assert!(spec.witness_size.unwrap() < 5 * src_size);
        // witness rows equal the specialized derivatives
        let w = spec.witness.as_ref().unwrap();
        let got = expand(w, DEFAULT_TERM_BUDGET).unwrap();
        for (row, want) in got.iter().zip(spec.components.iter()) {
            let projected = row.project_to_vars(varlist(&fam.z_list())).unwrap();
            assert_eq!(&projected, want);
        }
    }

    #[test]
    fn specialization_components_stay_homogeneous_in_z() {
        let objs = permanent_objects(4, 2, PermanentVariant::Case2XYZ).unwrap();
        let fam = &objs.family;
        for seed in 0..5i64 {
            let lambda: Vec<Scalar> = (0..fam.domain_dim())
                .map(|k| Scalar::from_i64((seed * 31 + k as i64 * 7) % 5 - 2, q()))
                .collect();
            let spec = specialize(fam, &lambda).unwrap();
            for p in &spec.components {
                if !p.is_zero() {
                    assert!(p.is_homogeneous());
                    assert_eq!(p.degree(), Some(fam.partition.r));
                }
            }
        }
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let f = permanent_poly(2, q()).unwrap();
        let fam =
            decompose_case1(&f, &set(&["x11", "x12"]), &set(&["x21", "x22"])).unwrap();
        assert!(matches!(
            specialize(&fam, &[Scalar::one(q())]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn permanent_objects_match_the_catalog_numbers() {
        let objs = permanent_objects(4, 2, PermanentVariant::Case2XYZ).unwrap();
        assert_eq!(objs.family.rows(), 4);
        assert_eq!(objs.family.partition.r, 2);
        assert_eq!(objs.family.m_prime(), 36);
        assert_eq!(objs.family.domain_dim(), 4); // (t-1)·n
        let objs1 = permanent_objects(4, 2, PermanentVariant::Case1YZ).unwrap();
        assert_eq!(objs1.family.rows(), 1);
        assert_eq!(objs1.family.domain_dim(), 8); // t·n
        assert_eq!(objs1.family.partition.r, 2);
        assert!(matches!(
            permanent_objects(4, 3, PermanentVariant::Case1YZ),
            Err(Error::ParamViolation(_))
        ));
    }

    #[test]
    fn permanent_reconstruction_per_row_is_exact() {
        let objs = permanent_objects(4, 2, PermanentVariant::Case2XYZ).unwrap();
        let frame = objs.family.sorted_frame();
        for (row, xvar) in objs.family.x_list().iter().enumerate() {
            let want = objs
                .poly
                .partial_derivative(xvar)
                .unwrap()
                .project_to_vars(frame.clone())
                .unwrap();
            assert_eq!(objs.family.reconstruct_row(row).unwrap(), want);
        }
    }

    #[test]
    fn expanded_permanent_matches_its_circuit() {
        for n in 1..=4 {
            let p = permanent_poly(n, q()).unwrap();
            let c = permanent_circuit(n, q()).unwrap();
            let e = expand(&c, DEFAULT_TERM_BUDGET).unwrap();
            assert_eq!(e[0], p);
        }
        let p2 = permanent_poly(2, q()).unwrap();
        assert_eq!(format!("{p2}"), "x11*x22 + x12*x21");
    }
}
