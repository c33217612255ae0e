//! Count what the image of a polynomial mapping can and cannot satisfy.
//!
//! For the map listing all degree-k monomials of n variables, the
//! degree-d functions on its image form a space of dimension exactly
//! C(dk+n−1, dk) — everything else vanishes on the image. When that
//! leftover vanishing space is large enough, no small-domain mapping of
//! bounded degree can cover the image, and we get a certificate saying
//! so.

use circkit::algebra::{binomial, monomial_basis, varlist, FieldTag, Scalar, SparsePoly};
use circkit::elusive::{
    certify_by_dimension, hilbert_value, poly_map, vanishing_kernel, veronese_ideal_generators,
    PolyMap, DEFAULT_DIM_BUDGET,
};

/// The mapping whose components are all degree-k monomials of n variables.
fn veronese(n: usize, k: u32) -> circkit::Result<PolyMap> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let vars = varlist(&names);
    let mut components = Vec::new();
    for mono in monomial_basis(n, k) {
        let mut p = SparsePoly::zero(FieldTag::Rational, vars.clone());
        p.add_term(mono, Scalar::one(FieldTag::Rational))?;
        components.push(p);
    }
    poly_map(components)
}

fn main() -> circkit::Result<()> {
    let nu = veronese(3, 2)?;
    println!("degree-2 monomial map on 3 variables: {} components", nu.m());

    for d in 1..=2u32 {
        let (dim_a, dim_b) = hilbert_value(&nu, d, DEFAULT_DIM_BUDGET)?;
        let expected = binomial(u64::from(2 * d) + 2, u64::from(2 * d));
        println!(
            "degree {d}: {dim_a} functions live on the image (expected {expected}), {dim_b} vanish"
        );
        assert_eq!(expected.to_string(), dim_a.to_string());
    }

    // The vanishing polynomials are explicit: for d = 2 they include the
    // classical binomial relations u_a·u_b = u_c·u_d among the monomials.
    let kernel = vanishing_kernel(&nu, 2, DEFAULT_DIM_BUDGET)?;
    println!("a degree-2 vanishing basis has {} elements, e.g. {}", kernel.len(), kernel[0]);
    let generators = veronese_ideal_generators(3, 2)?;
    println!("the binomial relations alone give {} generators", generators.len());

    // Certification: the image of this map supports more independent
    // degree-1 conditions than any degree-2 image of a 2-dimensional
    // domain could, so nothing of that shape covers it.
    let cert = certify_by_dimension(&nu, 2, 2, 3, DEFAULT_DIM_BUDGET)?;
    println!("certify s=2, r=2: {}", cert.verdict);
    for (key, value) in &cert.evidence {
        println!("  {key} = {value}");
    }

    // Against a large domain the counting argument gives up honestly.
    let cert = certify_by_dimension(&nu, 100, 2, 2, DEFAULT_DIM_BUDGET)?;
    println!("certify s=100, r=2: {}", cert.verdict);
    Ok(())
}
