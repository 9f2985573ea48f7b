//! Tour of the exact base rings: integers, modular integers, and sparse
//! multivariate polynomials over either, with parsing, arithmetic, and
//! JSON round trips.

use num_bigint::{BigInt, BigUint};
use wittvec::ring::{exact_div_int, RingDescriptor, RingElem};

fn main() {
    // The three ring shapes. Polynomial rings take their variable names
    // and a scalar coefficient ring.
    let z = RingDescriptor::Integers;
    let z9 = RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap();
    let poly = RingDescriptor::polynomials(
        vec!["t".into()],
        RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
    )
    .unwrap();
    println!("rings: {z}, {z9}, {poly}");

    // Arithmetic is exact; modular elements stay reduced.
    let a = z9.from_int(BigInt::from(7));
    let b = z9.from_int(BigInt::from(5));
    println!("in {z9}: 7 + 5 = {}, 7 * 5 = {}", a.add(&b), a.mul(&b));

    // Elements parse from the same text grammar they display in.
    let f = RingElem::parse(&poly, "4 + 5*t").unwrap();
    let g = RingElem::parse(&poly, "2*t^2 - t").unwrap();
    let product = f.mul(&g);
    println!("({f}) * ({g}) = {product} over {poly}");
    let reparsed = RingElem::parse(&poly, &product.to_string()).unwrap();
    assert_eq!(reparsed, product);

    // Powers of one- and two-term polynomials stay cheap even at the
    // large exponents ghost components need.
    let t = poly.var_elem(0);
    let binomial = t.add(&poly.one());
    println!("(t + 1)^27 has {} terms over {poly}", binomial.pow(27).term_count());

    // Exact integer division is total only when it divides; the failure
    // is an error, not a rounding.
    let six = RingElem::parse(&z, "6").unwrap();
    println!("6 / 3 = {}", exact_div_int(&six, &BigInt::from(3)).unwrap());
    println!("6 / 4 -> {}", exact_div_int(&six, &BigInt::from(4)).unwrap_err());

    // JSON carries both the descriptor and elements losslessly.
    let json = product.to_json();
    assert_eq!(RingElem::from_json(&json).unwrap(), product);
    println!("element JSON: {json}");
}
