//! Certifying that a polynomial mapping is weakly elusive, and turning such
//! certificates into circuit-size lower bounds.
//!
//! A mapping f: F^n → F^m is (s, r)-weakly elusive when its image is not
//! contained in the image of any homogeneous polynomial mapping F^s → F^m of
//! degree r. Deciding this outright is intractable, so everything here is a
//! one-sided test: a certificate is either CERTIFIED — the cited criterion's
//! inequality verifiably holds in exact arithmetic — or INCONCLUSIVE. No
//! operation ever claims non-elusiveness.
//!
//! Three criteria are implemented:
//! * dimension counting — compare the number of degree-d polynomial
//!   conditions that vanish on the image against the dimension of the space
//!   any degree-r image could be cut from ([`certify_by_dimension`]);
//! * rank of point tuples — for degree 1 the reachable tuples are exactly
//!   the matrices of rank at most s ([`rank_criterion`]);
//! * counting inequalities — exact binomial arithmetic showing that generic
//!   mappings of a given shape contain elusive tuples ([`inequality_check`]).
//!
//! All certification runs over the rationals. Prime fields are refused where
//! ideal membership matters: a polynomial vanishing on every F_p-point of an
//! image need not lie in the image's ideal, so a kernel computed over F_p
//! certifies nothing.
//!
//! Bound reports keep every comparison exact: √s is irrational in general,
//! so a report carries the exact square of the bound next to a fixed
//! 12-digit decimal rendering, and the duality with the size threshold
//! 64·L²·r³ is checked on the squares, never on floats.

mod linalg;

pub use linalg::Matrix;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use crate::algebra::{
    binomial, dim_pol_hom, monomial_basis, varlist, FieldTag, Monomial, Scalar, SparsePoly,
};
use crate::error::{Error, Result};
use crate::families::{decompose_case1, permanent_poly};

/// Default cap on the dimension of the polynomial space a dimension-count
/// certification is allowed to build (the number of matrix rows).
pub const DEFAULT_DIM_BUDGET: u64 = 5000;

/// Cap on the monomial-basis size when enumerating relations among the
/// coordinates of a degree-r monomial embedding.
const MAX_VERONESE_BASIS: usize = 200;

/// A tuple of polynomials sharing one variable list, read as a mapping
/// F^n → F^m with one component per coordinate of the target.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMap {
    components: Vec<SparsePoly>,
    homogeneous_degree: Option<u32>,
}

impl PolyMap {
    pub fn components(&self) -> &[SparsePoly] {
        &self.components
    }

    /// Target dimension m.
    pub fn m(&self) -> usize {
        self.components.len()
    }

    /// Source dimension n (the shared variable count).
    pub fn n(&self) -> usize {
        self.components[0].vars().len()
    }

    pub fn vars(&self) -> &Arc<Vec<String>> {
        self.components[0].vars()
    }

    pub fn field(&self) -> FieldTag {
        self.components[0].field()
    }

    /// `Some(d)` when every nonzero component is homogeneous of degree d
    /// (an all-zero mapping reports `Some(0)`), `None` otherwise.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        self.homogeneous_degree
    }
}

/// Validates a component list into a mapping: nonempty, one field, one
/// variable list. The homogeneity flag is computed, not declared.
pub fn poly_map(components: Vec<SparsePoly>) -> Result<PolyMap> {
    let Some(first) = components.first() else {
        return Err(Error::DimensionMismatch(
            "a polynomial mapping needs at least one component".into(),
        ));
    };
    let field = first.field();
    let vars = first.vars().clone();
    for c in &components {
        if c.field() != field {
            return Err(Error::FieldMismatch);
        }
        if c.vars().as_slice() != vars.as_slice() {
            return Err(Error::VariableMismatch);
        }
    }
    let mut degree = None;
    let mut uniform = true;
    for c in &components {
        if c.is_zero() {
            continue;
        }
        if !c.is_homogeneous() {
            uniform = false;
            break;
        }
        let d = c.degree().expect("nonzero polynomial has a degree");
        match degree {
            None => degree = Some(d),
            Some(seen) if seen != d => {
                uniform = false;
                break;
            }
            Some(_) => {}
        }
    }
    let homogeneous_degree = if uniform { degree.or(Some(0)) } else { None };
    Ok(PolyMap {
        components,
        homogeneous_degree,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    CertifiedWeaklyElusive,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::CertifiedWeaklyElusive => write!(f, "CERTIFIED_WEAKLY_ELUSIVE"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateKind {
    /// Dimension counting; `witness` is the degree d at which the count
    /// succeeded, absent when every tried degree fell short.
    Dimension { witness: Option<u64> },
    /// Exact rank of a point tuple (degree-1 criterion).
    Rank,
    /// A named counting inequality about generic mappings of a shape.
    Inequality { name: &'static str },
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::Dimension { witness: Some(d) } => write!(f, "DIMENSION({d})"),
            CertificateKind::Dimension { witness: None } => write!(f, "DIMENSION"),
            CertificateKind::Rank => write!(f, "RANK"),
            CertificateKind::Inequality { name } => write!(f, "INEQUALITY({name})"),
        }
    }
}

/// Outcome of one certification attempt. `evidence` is an ordered list of
/// labelled exact integers (rendered in decimal) so the full arithmetic
/// trail survives serialization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElusivenessCertificate {
    pub kind: CertificateKind,
    pub s: u64,
    /// Degree parameter of the elusiveness claim.
    pub r: u64,
    pub verdict: Verdict,
    pub evidence: Vec<(String, String)>,
}

impl ElusivenessCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::CertifiedWeaklyElusive
    }
}

// ---------------------------------------------------------------------------
// Dimension counting
// ---------------------------------------------------------------------------

/// Rows: the degree-d monomial basis in m fresh coordinates. Columns: the
/// monomials occurring in the compositions. Entry (α, μ): the coefficient
/// of μ in the composition ∏ fᵢ^{αᵢ}.
fn pullback_matrix(f: &PolyMap, d: u32, budget: u64) -> Result<(Matrix, Vec<Monomial>)> {
    if f.field() != FieldTag::Rational {
        return Err(Error::UnsupportedField(
            "vanishing-ideal dimensions are only meaningful over the rationals".into(),
        ));
    }
    if d == 0 {
        return Err(Error::ParamViolation(
            "the counting degree must be at least 1".into(),
        ));
    }
    let m = f.m();
    let dim = dim_pol_hom(m as u64, d as u64)?;
    if dim > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            what: format!("degree-{d} basis over {m} coordinates has dimension {dim}"),
            limit: budget,
        });
    }
    let domain_basis = monomial_basis(m, d);
    let mut compositions = Vec::with_capacity(domain_basis.len());
    let mut columns: BTreeMap<Monomial, usize> = BTreeMap::new();
    for mono in &domain_basis {
        let mut acc = SparsePoly::constant(Scalar::one(f.field()), f.vars().clone());
        for (i, &e) in mono.0.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&f.components[i].pow(e)?)?;
            }
        }
        for key in acc.terms().keys() {
            let next = columns.len();
            columns.entry(key.clone()).or_insert(next);
        }
        compositions.push(acc);
    }
    let mut matrix = Matrix::new(f.field(), domain_basis.len(), columns.len());
    for (row, comp) in compositions.iter().enumerate() {
        for (mono, coeff) in comp.terms() {
            matrix.set(row, columns[mono], coeff.clone())?;
        }
    }
    Ok((matrix, domain_basis))
}

/// Dimension of the degree-d regular functions on the image, and of the
/// degree-d part of the image's vanishing ideal. The second number is the
/// nullity of the exact linear map g ↦ g∘f on the degree-d monomial basis
/// in m coordinates; the first is its rank, and they sum to C(m+d−1, d).
pub fn hilbert_value(f: &PolyMap, d: u32, budget: u64) -> Result<(usize, usize)> {
    let (matrix, domain_basis) = pullback_matrix(f, d, budget)?;
    let rank = matrix.rank()?;
    Ok((rank, domain_basis.len() - rank))
}

/// A basis of the degree-d polynomials vanishing on the image of `f`,
/// written in fresh coordinates u0, u1, … (one per component of `f`).
/// Every returned g satisfies g∘f = 0 identically.
pub fn vanishing_kernel(f: &PolyMap, d: u32, budget: u64) -> Result<Vec<SparsePoly>> {
    let (matrix, domain_basis) = pullback_matrix(f, d, budget)?;
    let names: Vec<String> = (0..f.m()).map(|i| format!("u{i}")).collect();
    let uvars = varlist(&names);
    // The map sends a coefficient vector over the rows to a polynomial in
    // the columns, so its kernel is the left kernel of the matrix.
    let left_kernel = matrix.transpose().kernel_basis()?;
    let mut out = Vec::with_capacity(left_kernel.len());
    for vector in left_kernel {
        let mut g = SparsePoly::zero(f.field(), uvars.clone());
        for (row, coeff) in vector.into_iter().enumerate() {
            if !coeff.is_zero() {
                g.add_term(domain_basis[row].clone(), coeff)?;
            }
        }
        out.push(g);
    }
    Ok(out)
}

/// Tries counting degrees d = 1, 2, … up to `d_max`: the mapping is
/// certified (s, r)-weakly elusive as soon as the image supports at least
/// C(s+rd−1, rd) independent degree-d conditions — more regular functions
/// than any degree-r image of F^s could carry. The evidence records both
/// sides for every degree tried.
pub fn certify_by_dimension(
    f: &PolyMap,
    s: u64,
    r: u64,
    d_max: u64,
    budget: u64,
) -> Result<ElusivenessCertificate> {
    if r == 0 || d_max == 0 {
        return Err(Error::ParamViolation(
            "certification needs r >= 1 and at least one counting degree".into(),
        ));
    }
    let mut evidence = Vec::new();
    let mut witness = None;
    for d in 1..=d_max {
        let (dim_a, _) = hilbert_value(f, d as u32, budget)?;
        let rd = r
            .checked_mul(d)
            .ok_or(Error::DegreeOverflow)?;
        let top = s.checked_add(rd).and_then(|v| v.checked_sub(1));
        let required = match top {
            Some(t) => binomial(t, rd),
            None => return Err(Error::DegreeOverflow),
        };
        evidence.push((format!("dimA(d={d})"), dim_a.to_string()));
        evidence.push((format!("required(d={d})"), required.to_string()));
        if BigUint::from(dim_a as u64) >= required {
            witness = Some(d);
            break;
        }
    }
    Ok(ElusivenessCertificate {
        kind: CertificateKind::Dimension { witness },
        s,
        r,
        verdict: if witness.is_some() {
            Verdict::CertifiedWeaklyElusive
        } else {
            Verdict::Inconclusive
        },
        evidence,
    })
}

// ---------------------------------------------------------------------------
// Evaluation maps and the rank criterion
// ---------------------------------------------------------------------------

/// All degree-r monomials of a point, in the same descending graded-lex
/// order used to index coefficient vectors.
pub fn veronese_point(a: &[Scalar], r: u32) -> Result<Vec<Scalar>> {
    let Some(first) = a.first() else {
        return Err(Error::DimensionMismatch("empty point".into()));
    };
    let field = first.field();
    let mut out = Vec::new();
    for mono in monomial_basis(a.len(), r) {
        let mut acc = Scalar::one(field);
        for (p, &e) in mono.0.iter().enumerate() {
            if e > 0 {
                acc = acc.mul(&a[p].pow(e as u64))?;
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Stacks [`veronese_point`] of every column of an s×k point matrix into an
/// S×k matrix, S = C(s+r−1, r).
pub fn veronese_matrix(points: &Matrix, r: u32) -> Result<Matrix> {
    let s = points.rows();
    let basis_len = monomial_basis(s, r).len();
    let mut out = Matrix::new(points.field(), basis_len, points.cols());
    for j in 0..points.cols() {
        let column: Vec<Scalar> = (0..s).map(|p| points.get(p, j).clone()).collect();
        for (row, value) in veronese_point(&column, r)?.into_iter().enumerate() {
            out.set(row, j, value)?;
        }
    }
    Ok(out)
}

/// Applies an m-tuple of degree-r forms, given by their coefficient rows
/// over the degree-r monomial basis of F^s, to k points (the columns of an
/// s×k matrix). Entry (i, j) is the i-th form evaluated at the j-th point,
/// computed term by term; the result agrees with first sending every point
/// through [`veronese_point`] and then taking one matrix product.
pub fn evaluation_map_apply(fstars: &Matrix, points: &Matrix, r: u32) -> Result<Matrix> {
    if fstars.field() != points.field() {
        return Err(Error::FieldMismatch);
    }
    if r == 0 {
        return Err(Error::ParamViolation(
            "evaluation needs degree at least 1".into(),
        ));
    }
    let s = points.rows();
    let basis = monomial_basis(s, r);
    if fstars.cols() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient rows of width {} against a degree-{r} basis of size {} over {s} variables",
            fstars.cols(),
            basis.len()
        )));
    }
    let field = fstars.field();
    let mut out = Matrix::new(field, fstars.rows(), points.cols());
    for i in 0..fstars.rows() {
        for j in 0..points.cols() {
            let mut acc = Scalar::zero(field);
            for (alpha, mono) in basis.iter().enumerate() {
                let coeff = fstars.get(i, alpha);
                if coeff.is_zero() {
                    continue;
                }
                let mut value = coeff.clone();
                for (p, &e) in mono.0.iter().enumerate() {
                    if e > 0 {
                        value = value.mul(&points.get(p, j).pow(e as u64))?;
                    }
                }
                acc = acc.add(&value)?;
            }
            out.set(i, j, acc)?;
        }
    }
    Ok(out)
}

/// Degree-1 criterion on a tuple of k points in F^m, stacked as an m×k
/// matrix: the tuples reachable by linear images of F^s are exactly the
/// matrices of rank at most s, so exact rank > s certifies the tuple —
/// and any mapping whose image contains it — as (s, 1)-weakly elusive.
/// When s ≥ min(m, k) every tuple is reachable and the verdict is always
/// INCONCLUSIVE.
pub fn rank_criterion(tuple: &Matrix, s: u64) -> Result<ElusivenessCertificate> {
    let rank = tuple.rank()?;
    let min_dim = tuple.rows().min(tuple.cols());
    let certified = (rank as u64) > s;
    Ok(ElusivenessCertificate {
        kind: CertificateKind::Rank,
        s,
        r: 1,
        verdict: if certified {
            Verdict::CertifiedWeaklyElusive
        } else {
            Verdict::Inconclusive
        },
        evidence: vec![
            ("rank".into(), rank.to_string()),
            ("s".into(), s.to_string()),
            ("min(rows,cols)".into(), min_dim.to_string()),
        ],
    })
}

// ---------------------------------------------------------------------------
// Relations among the coordinates of a monomial embedding
// ---------------------------------------------------------------------------

/// The quadratic binomial relations satisfied by the degree-r monomials of
/// s variables: one generator u_a·u_b − u_c·u_d per unordered pair of
/// distinct unordered index pairs whose exponent vectors have equal sums.
/// Coordinates are named u0, u1, … in descending graded-lex basis order.
/// Every generator is checked to vanish on a sample point of the embedding
/// before it is returned.
pub fn veronese_ideal_generators(s: usize, r: u32) -> Result<Vec<SparsePoly>> {
    if s == 0 {
        return Err(Error::ParamViolation(
            "the embedding needs at least one variable".into(),
        ));
    }
    let basis = monomial_basis(s, r);
    let count = basis.len();
    if count > MAX_VERONESE_BASIS {
        return Err(Error::BudgetExceeded {
            what: format!("degree-{r} basis over {s} variables has {count} monomials"),
            limit: MAX_VERONESE_BASIS as u64,
        });
    }
    let names: Vec<String> = (0..count).map(|i| format!("u{i}")).collect();
    let uvars = varlist(&names);
    let mut by_sum: BTreeMap<Vec<u32>, Vec<(usize, usize)>> = BTreeMap::new();
    for i in 0..count {
        for j in i..count {
            let sum: Vec<u32> = basis[i]
                .0
                .iter()
                .zip(basis[j].0.iter())
                .map(|(a, b)| a + b)
                .collect();
            by_sum.entry(sum).or_default().push((i, j));
        }
    }
    let pair_monomial = |a: usize, b: usize| {
        let mut exps = vec![0u32; count];
        exps[a] += 1;
        exps[b] += 1;
        Monomial(exps)
    };
    // One sample of the embedding suffices as a smoke test: the relations
    // are identities, so a single generic-looking point catches any slip
    // in the index bookkeeping.
    let sample: Vec<Scalar> = (0..s)
        .map(|p| Scalar::from_i64(p as i64 + 2, FieldTag::Rational))
        .collect();
    let embedded = veronese_point(&sample, r)?;
    let point: BTreeMap<String, Scalar> = names
        .iter()
        .cloned()
        .zip(embedded.into_iter())
        .collect();
    let mut out = Vec::new();
    for pairs in by_sum.values() {
        for q in 0..pairs.len() {
            for q2 in q + 1..pairs.len() {
                let mut g = SparsePoly::zero(FieldTag::Rational, uvars.clone());
                g.add_term(
                    pair_monomial(pairs[q].0, pairs[q].1),
                    Scalar::one(FieldTag::Rational),
                )?;
                g.add_term(
                    pair_monomial(pairs[q2].0, pairs[q2].1),
                    Scalar::from_i64(-1, FieldTag::Rational),
                )?;
                if !g.evaluate(&point)?.is_zero() {
                    return Err(Error::Internal(
                        "relation fails to vanish on the embedding".into(),
                    ));
                }
                out.push(g);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Counting inequalities
// ---------------------------------------------------------------------------

/// The three counting inequalities, each named by what it counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InequalityQuery {
    /// Generic density in the space of degree-p mappings F^n → F^m:
    /// C(n+p−1, p) ≥ m·C(s+r−1, r) / (m−s). Requires s ≤ m−1.
    Codi2 { n: u64, p: u64, m: u64, s: u64, r: u64 },
    /// Bi-homogeneous specialization with X-degree p and Y-degree q; the
    /// target dimension is C(n_y+q−1, q) and the elusiveness degree 2q−1:
    /// C(n_x+p−1, p) ≥ C(n_y+q−1, q)·C(s+2q−2, 2q−1) / (C(n_y+q−1, q) − s).
    Bih { n_x: u64, p: u64, n_y: u64, q: u64, s: u64 },
    /// Minor-permanent family of an n×n matrix split after row t; the
    /// target dimension is C(n, n−t):
    /// C(nt+t−1, t) ≥ C(n, n−t)·C(s+2(n−t)−2, 2(n−t)) / (C(n, n−t) − s).
    Per { n: u64, t: u64, s: u64 },
}

impl InequalityQuery {
    pub fn name(&self) -> &'static str {
        match self {
            InequalityQuery::Codi2 { .. } => "CODI2",
            InequalityQuery::Bih { .. } => "BIH",
            InequalityQuery::Per { .. } => "PER",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityOutcome {
    pub name: &'static str,
    pub holds: bool,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

fn big(u: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(u))
}

/// Evaluates both sides of a named counting inequality exactly and reports
/// whether lhs ≥ rhs. Denominators must be positive; a shape that zeroes or
/// flips one is a domain error, not a false result.
pub fn inequality_check(query: &InequalityQuery) -> Result<InequalityOutcome> {
    let name = query.name();
    let (lhs, rhs) = match *query {
        InequalityQuery::Codi2 { n, p, m, s, r } => {
            if n == 0 || r == 0 {
                return Err(Error::ParamViolation(
                    "CODI2 needs n >= 1 and r >= 1".into(),
                ));
            }
            if m == 0 || s + 1 > m {
                return Err(Error::DomainViolation(format!(
                    "CODI2 needs s <= m-1, got s={s}, m={m}"
                )));
            }
            let lhs = big(binomial(n + p - 1, p));
            let numer = big(BigUint::from(m) * binomial(s + r - 1, r));
            let rhs = numer / big(BigUint::from(m - s));
            (lhs, rhs)
        }
        InequalityQuery::Bih { n_x, p, n_y, q, s } => {
            if n_x == 0 || n_y == 0 || q == 0 {
                return Err(Error::ParamViolation(
                    "BIH needs n_x, n_y and q all >= 1".into(),
                ));
            }
            let target = binomial(n_y + q - 1, q);
            if target <= BigUint::from(s) {
                return Err(Error::DomainViolation(format!(
                    "BIH needs s+1 <= C(n_y+q-1, q) = {target}, got s={s}"
                )));
            }
            let lhs = big(binomial(n_x + p - 1, p));
            let numer = big(target.clone() * binomial(s + 2 * q - 2, 2 * q - 1));
            let rhs = numer / big(target - BigUint::from(s));
            (lhs, rhs)
        }
        InequalityQuery::Per { n, t, s } => {
            if t == 0 || t + 1 > n {
                return Err(Error::ParamViolation(format!(
                    "PER needs 1 <= t <= n-1, got n={n}, t={t}"
                )));
            }
            let nt = n.checked_mul(t).ok_or(Error::DegreeOverflow)?;
            let minors = binomial(n, n - t);
            if minors <= BigUint::from(s) {
                return Err(Error::DomainViolation(format!(
                    "PER needs s+1 <= C(n, n-t) = {minors}, got s={s}"
                )));
            }
            let lhs = big(binomial(nt + t - 1, t));
            let numer = big(minors.clone() * binomial(s + 2 * (n - t) - 2, 2 * (n - t)));
            let rhs = numer / big(minors - BigUint::from(s));
            (lhs, rhs)
        }
    };
    Ok(InequalityOutcome {
        name,
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Wraps an inequality outcome as a certificate. The claim is about
/// generic mappings of the queried shape — almost every such mapping
/// contains an (s, r)-weakly elusive tuple — never about one particular
/// mapping, so the caller supplies the (s, r) the inequality was built for.
pub fn certificate_from_inequality(
    outcome: &InequalityOutcome,
    s: u64,
    r: u64,
) -> ElusivenessCertificate {
    ElusivenessCertificate {
        kind: CertificateKind::Inequality { name: outcome.name },
        s,
        r,
        verdict: if outcome.holds {
            Verdict::CertifiedWeaklyElusive
        } else {
            Verdict::Inconclusive
        },
        evidence: vec![
            ("lhs".into(), outcome.lhs.to_string()),
            ("rhs".into(), outcome.rhs.to_string()),
        ],
    }
}

// ---------------------------------------------------------------------------
// Minor permanents
// ---------------------------------------------------------------------------

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(current.clone());
        // Advance to the next subset in lexicographic order.
        let mut i = k;
        while i > 0 && current[i - 1] == n - (k - i) {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Splits the n×n permanent after row t and specializes the top block to
/// every 0/1 pattern that selects t of the n columns. Each specialization
/// is the permanent of the complementary (n−t)×(n−t) minor of the bottom
/// rows, so the span of the family's image is the full space of minor
/// permanents. Its dimension C(n, n−t) is computed as an exact rank and
/// asserted; the certificate then claims (C(n, n−t)−1, 1)-weak elusiveness.
pub fn span_minor_permanents(n: usize, t: usize) -> Result<ElusivenessCertificate> {
    if n > 5 {
        return Err(Error::ParamViolation(format!(
            "permanent span is desk-scale only, n={n} exceeds 5"
        )));
    }
    if t < 1 || t + 2 > n {
        return Err(Error::ParamViolation(format!(
            "row split needs 1 <= t <= n-2, got n={n}, t={t}"
        )));
    }
    let per = permanent_poly(n, FieldTag::Rational)?;
    let mut y: BTreeSet<String> = BTreeSet::new();
    let mut z: BTreeSet<String> = BTreeSet::new();
    for u in 1..=n {
        for i in 1..=n {
            let name = format!("x{u}{i}");
            if u <= t {
                y.insert(name);
            } else {
                z.insert(name);
            }
        }
    }
    let fam = decompose_case1(&per, &y, &z)?;
    let subsets = k_subsets(n, t);
    let mut rows = Vec::with_capacity(subsets.len());
    for subset in &subsets {
        let mut point: BTreeMap<String, Scalar> = BTreeMap::new();
        for u in 1..=t {
            for i in 1..=n {
                let hit = subset[u - 1] == i;
                point.insert(
                    format!("x{u}{i}"),
                    Scalar::from_i64(hit as i64, FieldTag::Rational),
                );
            }
        }
        // Coefficient vector of the specialization over the family's basis.
        let mut row = Vec::with_capacity(fam.m_prime());
        for coeff in &fam.coeff_polys[0] {
            row.push(coeff.evaluate(&point)?);
        }
        rows.push(row);
    }
    let matrix = Matrix::from_rows(rows)?;
    let rank = matrix.rank()?;
    let minors = binomial(n as u64, (n - t) as u64);
    if BigUint::from(rank as u64) != minors {
        return Err(Error::Internal(format!(
            "minor permanents span dimension {rank}, expected {minors}"
        )));
    }
    let s = rank as u64 - 1;
    Ok(ElusivenessCertificate {
        kind: CertificateKind::Rank,
        s,
        r: 1,
        verdict: Verdict::CertifiedWeaklyElusive,
        evidence: vec![
            ("minor count".into(), minors.to_string()),
            ("span dimension".into(), rank.to_string()),
            ("s".into(), s.to_string()),
        ],
    })
}

/// Span of the image and a coordinate-aligned reduction: keeps the first
/// maximal set of linearly independent components (in component order) and
/// drops the rest. Projecting onto the kept coordinates is injective on
/// the image's span, so elusiveness questions transfer between the mapping
/// and its reduction unchanged. An all-zero mapping keeps a single zero
/// component so the result is still a mapping.
pub fn project_reduce(f: &PolyMap) -> Result<(PolyMap, usize)> {
    if f.field() != FieldTag::Rational {
        return Err(Error::UnsupportedField(
            "span reduction is only supported over the rationals".into(),
        ));
    }
    let mut columns: BTreeMap<Monomial, usize> = BTreeMap::new();
    for c in &f.components {
        for key in c.terms().keys() {
            let next = columns.len();
            columns.entry(key.clone()).or_insert(next);
        }
    }
    if columns.is_empty() {
        // Zero mapping: trivial span.
        let reduced = poly_map(vec![f.components[0].clone()])?;
        return Ok((reduced, 0));
    }
    let mut matrix = Matrix::new(f.field(), f.m(), columns.len());
    for (row, c) in f.components.iter().enumerate() {
        for (mono, coeff) in c.terms() {
            matrix.set(row, columns[mono], coeff.clone())?;
        }
    }
    // Pivot columns of the transpose are exactly the first component
    // indices that are linearly independent of everything before them.
    let (_, pivots) = matrix.transpose().rref()?;
    let keep: Vec<SparsePoly> = pivots.iter().map(|&i| f.components[i].clone()).collect();
    let span_dim = keep.len();
    let reduced = poly_map(keep)?;
    Ok((reduced, span_dim))
}

// ---------------------------------------------------------------------------
// Lower-bound reports
// ---------------------------------------------------------------------------

/// Which specialization produced the certified mapping. The tags differ
/// only in the witness-size factor they must absorb: direct substitution
/// keeps the witness within the source size, while gradient-derived
/// witnesses may be up to five times larger, which divides the bound by a
/// further factor of 5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundCase {
    General,
    Pt1,
    Pt2,
}

impl fmt::Display for BoundCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundCase::General => write!(f, "GENERAL"),
            BoundCase::Pt1 => write!(f, "PT1"),
            BoundCase::Pt2 => write!(f, "PT2"),
        }
    }
}

/// A circuit-size lower bound distilled from a certificate. The bound is
/// √s/(8·r^{3/2}) for GENERAL and PT1, √s/(40·r^{3/2}) for PT2; since the
/// square root is irrational in general, the report stores the exact
/// square together with a floor rendering to twelve decimal digits.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub s: u64,
    /// Degree of the polynomial tuples the certified family produces (the
    /// certificate's own degree parameter is 2r−1).
    pub r: u64,
    pub case_tag: BoundCase,
    pub bound_squared: BigRational,
    pub bound_decimal: String,
    pub formula: &'static str,
}

/// The size threshold dual to the bound formula: a family computed by
/// circuits of size at most l cannot yield a certified mapping once
/// s ≥ 64·l²·r³, so certifying at some s bounds l from below.
pub fn size_threshold(l: u64, r: u64) -> BigUint {
    let rb = BigUint::from(r);
    BigUint::from(64u32) * BigUint::from(l) * BigUint::from(l) * rb.clone() * rb.clone() * rb
}

/// Floor of √x rendered with exactly `digits` decimal places. Exact: the
/// answer F is the largest integer with F²·den ≤ num·10^(2·digits).
fn sqrt_decimal(x: &BigRational, digits: u32) -> String {
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    let scale = (0..digits).fold(BigUint::one(), |acc, _| acc * BigUint::from(10u32));
    let target = num * scale.clone() * scale.clone();
    let mut f = (target.clone() / den.clone()).sqrt();
    while (f.clone() + BigUint::one()) * (f.clone() + BigUint::one()) * den.clone() <= target {
        f += BigUint::one();
    }
    while f.clone() * f.clone() * den.clone() > target {
        f -= BigUint::one();
    }
    let int_part = f.clone() / scale.clone();
    let frac_part = f % scale;
    format!("{}.{:0>width$}", int_part, frac_part.to_string(), width = digits as usize)
}

/// Turns a certificate for degree parameter 2r−1 into the circuit-size
/// bound it implies. The duality with [`size_threshold`] is re-checked on
/// the exact squares before the report is issued.
pub fn lower_bound_report(
    cert: &ElusivenessCertificate,
    case_tag: BoundCase,
) -> Result<BoundReport> {
    if !cert.is_certified() {
        return Err(Error::NotCertified);
    }
    if cert.r == 0 || cert.r % 2 == 0 {
        return Err(Error::WrongDegreeParameter(format!(
            "bounds need an elusiveness degree of the form 2r-1, got {}",
            cert.r
        )));
    }
    let r = (cert.r + 1) / 2;
    let (factor, formula) = match case_tag {
        BoundCase::General | BoundCase::Pt1 => (64u32, "sqrt(s)/(8*r^(3/2))"),
        BoundCase::Pt2 => (1600u32, "sqrt(s)/(40*r^(3/2))"),
    };
    let rb = BigUint::from(r);
    let denom = BigUint::from(factor) * rb.clone() * rb.clone() * rb;
    let bound_squared = BigRational::new(BigInt::from(cert.s), BigInt::from(denom.clone()));
    // Duality check, exact: factor · bound² · r³ must reproduce s.
    let back = bound_squared.clone() * big(denom);
    if back != BigRational::from_integer(BigInt::from(cert.s)) {
        return Err(Error::Internal(
            "bound/threshold duality failed to close".into(),
        ));
    }
    let bound_decimal = sqrt_decimal(&bound_squared, 12);
    Ok(BoundReport {
        s: cert.s,
        r,
        case_tag,
        bound_squared,
        bound_decimal,
        formula,
    })
}
