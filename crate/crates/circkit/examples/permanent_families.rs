//! Slice the permanent into a parametrized family of homogeneous
//! polynomials and evaluate the family at a concrete parameter point.
//!
//! Splitting the n×n variable matrix after row t leaves the top t rows
//! as parameters Y and the bottom rows as variables Z. Collecting the
//! coefficient of every degree-(n−t) Z-monomial yields one coefficient
//! row (the polynomial itself), or one row per first-row derivative in
//! the derivative variant.

use circkit::algebra::{FieldTag, Scalar};
use circkit::circuit::{expand, DEFAULT_TERM_BUDGET};
use circkit::families::{permanent_objects, specialize, PermanentVariant};

fn main() -> circkit::Result<()> {
    let objs = permanent_objects(4, 2, PermanentVariant::Case1YZ)?;
    let fam = &objs.family;
    println!(
        "permanent n=4 split at t=2: case {}, |Y|={}, |Z|={}, basis of {} Z-monomials",
        fam.case_tag,
        fam.y_list().len(),
        fam.z_list().len(),
        fam.m_prime()
    );

    // Row 0 of the coefficient matrix times the monomial basis gives the
    // permanent back, exactly.
    let rebuilt = fam.reconstruct_row(0)?;
    let target = objs.poly.project_to_vars(fam.sorted_frame())?;
    assert_eq!(rebuilt, target);
    println!("row 0 reconstructs the permanent: {} terms", rebuilt.num_terms());

    // Fixing the parameters gives a tuple of homogeneous polynomials in Z
    // alone, together with a witness circuit of controlled size.
    let ones = vec![Scalar::one(FieldTag::Rational); fam.domain_dim()];
    let spec = specialize(fam, &ones)?;
    let comp = &spec.components[0];
    println!(
        "at Y = all ones: {} terms of degree {:?}",
        comp.num_terms(),
        comp.degree()
    );
    if let (Some(w), Some(src), Some(wsz)) = (&spec.witness, spec.source_size, spec.witness_size) {
        println!("witness circuit size {wsz} from source size {src} (bound: at most the source)");
        assert_eq!(&expand(w, DEFAULT_TERM_BUDGET)?[0], comp);
    }

    // The derivative variant produces one row per entry of the first row
    // of the matrix, and its witness bound is five source sizes.
    let objs2 = permanent_objects(4, 2, PermanentVariant::Case2XYZ)?;
    let fam2 = &objs2.family;
    println!(
        "derivative variant: case {}, {} rows over the same basis",
        fam2.case_tag,
        fam2.rows()
    );
    let target2 = objs2.poly.project_to_vars(fam2.sorted_frame())?;
    for (row, xv) in fam2.x_list().iter().enumerate() {
        assert_eq!(fam2.reconstruct_row(row)?, target2.partial_derivative(xv)?);
    }
    println!("every row reconstructs the matching first-row derivative");
    Ok(())
}
