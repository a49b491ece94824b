//! Exact arithmetic in the incidence algebra: convolution products,
//! Lie brackets, and the projection operators.
//!
//! Run with: cargo run --example algebra_ops

use std::sync::Arc;

use incidence::algebra::IncidenceAlgebra;
use incidence::fixtures;
use incidence::ring::RingDescriptor;

fn main() {
    let poset = Arc::new(fixtures::branching());
    let alg = IncidenceAlgebra::new(poset, RingDescriptor::Rational);
    let one = alg.ring().one();
    let p = alg.poset();
    let unit = |x: &str, y: &str| {
        alg.basis(p.index_of(x).unwrap(), p.index_of(y).unwrap(), one.clone())
            .unwrap()
    };

    // basis products collapse along shared endpoints
    let eab = unit("a", "b");
    let ebd = unit("b", "d");
    println!("e[a,b] * e[b,d]           = {}", alg.format_element(&alg.mul(&eab, &ebd)));
    println!("e[b,d] * e[a,b]           = {}", alg.format_element(&alg.mul(&ebd, &eab)));
    println!("[e[a,b], e[b,d]]          = {}", alg.format_element(&alg.bracket(&eab, &ebd)));

    // the delta function is the two-sided identity
    let delta = alg.unit_delta();
    let half_ab = alg.scale(&alg.ring().parse("1/2").unwrap(), &eab);
    let mixed = alg.add(&half_ab, &unit("a", "d"));
    println!("delta                     = {}", alg.format_element(&delta));
    println!("f                         = {}", alg.format_element(&mixed));
    println!("delta * f == f            : {}", alg.mul(&delta, &mixed) == mixed);

    // sandwich: e_xy f e_uv = f(y, u) e_xv
    let eaa = unit("a", "a");
    let edd = unit("d", "d");
    let sandwich = alg.mul(&alg.mul(&eaa, &mixed), &edd);
    println!("e[a,a] f e[d,d]           = {}", alg.format_element(&sandwich));

    // projections: strict region parts plus the diagonal partition f
    let f = alg.add(&mixed, &alg.add(&unit("a", "c"), &unit("c", "c")));
    println!("f                         = {}", alg.format_element(&f));
    println!("diagonal part             = {}", alg.format_element(&alg.diagonal_part(&f)));
    for j in 0..p.regions(0).count() {
        println!(
            "strict part of region {j}   = {}",
            alg.format_element(&alg.strict_region_part(&f, 0, j))
        );
    }
    println!("hat part (extreme diag.)  = {}", alg.format_element(&alg.hat_part(&f, 0)));

    // strict parts of different regions annihilate
    let left = alg.strict_region_part(&f, 0, 0);
    let right = alg.strict_region_part(&f, 0, 1);
    println!("region0 * region1         = {}", alg.format_element(&alg.mul(&left, &right)));
}
