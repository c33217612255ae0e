//! Cheap certificates: exact rank for degree one, counting inequalities
//! for everything else, and the circuit-size bounds they imply.

use circkit::algebra::{parse_scalar, FieldTag};
use circkit::elusive::{
    certificate_from_inequality, inequality_check, lower_bound_report, rank_criterion,
    size_threshold, BoundCase, InequalityQuery, Matrix,
};

fn rational_rows(rows: &[&[&str]]) -> circkit::Result<Matrix> {
    let mut out = Vec::new();
    for row in rows {
        let mut r = Vec::new();
        for w in *row {
            r.push(parse_scalar(w, FieldTag::Rational)?);
        }
        out.push(r);
    }
    Matrix::from_rows(out)
}

fn main() -> circkit::Result<()> {
    // Three points of F³ stacked as columns. Their rank is 3, so no
    // linear image of F² (rank at most 2) contains all of them.
    let tuple = rational_rows(&[&["1", "0", "1"], &["0", "1", "1"], &["0", "0", "1"]])?;
    let cert = rank_criterion(&tuple, 2)?;
    println!("rank criterion at s=2: {} ({:?})", cert.verdict, cert.evidence);

    // The same tuple is reachable from F³, and the criterion says only
    // that it cannot tell.
    let cert = rank_criterion(&tuple, 3)?;
    println!("rank criterion at s=3: {}", cert.verdict);

    // Counting inequalities certify generic mappings of a given shape.
    // Exact binomial arithmetic decides each instance outright.
    let queries = [
        InequalityQuery::Codi2 { n: 4, p: 2, m: 6, s: 2, r: 2 },
        InequalityQuery::Bih { n_x: 6, p: 4, n_y: 3, q: 2, s: 3 },
        InequalityQuery::Per { n: 4, t: 2, s: 5 },
    ];
    for q in &queries {
        let outcome = inequality_check(q)?;
        println!(
            "{}: lhs {} {} rhs {}",
            outcome.name,
            outcome.lhs,
            if outcome.holds { ">=" } else { "<" },
            outcome.rhs
        );
    }

    // A certificate of (s, r)-weak elusiveness with odd r converts into a
    // lower bound on circuit size: sqrt(s) / (8 ((r+1)/2)^{3/2}) when the
    // witnesses are direct, with 40 in place of 8 for gradient witnesses.
    let outcome = inequality_check(&InequalityQuery::Per { n: 5, t: 2, s: 3 })?;
    let cert = certificate_from_inequality(&outcome, 6400, 7);
    for case in [BoundCase::Pt1, BoundCase::Pt2] {
        let bound = lower_bound_report(&cert, case)?;
        println!(
            "s=6400, r=4, {}: bound^2 = {}, about {} ({})",
            bound.case_tag, bound.bound_squared, bound.bound_decimal, bound.formula
        );
    }

    // And the threshold where the universal-graph count 64·l²·r³ stops
    // being the bottleneck for a target size l.
    println!("size threshold for l=2, r=1: {}", size_threshold(2, 1));
    Ok(())
}
