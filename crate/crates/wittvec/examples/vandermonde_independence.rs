//! Vandermonde-with-p-powers matrices: exact determinants, the two
//! hypotheses under which the columns are provably independent, and the
//! search for integer points that turn polynomial tuples into valid inputs.

use num_bigint::BigInt;
use wittvec::ring::{poly_eval_int, RingDescriptor, RingElem};
use wittvec::vandermonde::{find_nonvanishing_point, independence_check, PVandermonde};

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn main() {
    // M(c) has rows (c_i^(p^0), c_i^(p^1), ..., c_i^(p^(n-1))): an ordinary
    // Vandermonde matrix with p-th power columns instead of consecutive ones.
    let m = PVandermonde::new(3, &ints(&[1, 2])).unwrap();
    for row in m.rows() {
        println!("{row:?}");
    }
    println!("det M(1,2) = {}", m.det());
    assert_eq!(m.det(), BigInt::from(6));

    // Determinants are computed exactly by fraction-free elimination, so
    // nonzero means nonzero -- no tolerance involved.
    let big = PVandermonde::new(5, &ints(&[2, 3, 7, 11])).unwrap();
    println!("det M(2,3,7,11) at p=5 has {} digits", big.det().to_string().len());

    // Hypothesis (1): all entries positive.
    let case1 = independence_check(3, &ints(&[1, 2, 3])).unwrap();
    println!("c = (1, 2, 3):   {case1}");
    assert!(case1.is_independent());

    // Hypothesis (2): p odd and pairwise distinct absolute values; signs
    // are then free.
    let case2 = independence_check(3, &ints(&[1, -2, 3])).unwrap();
    println!("c = (1, -2, 3):  {case2}");
    assert!(case2.is_independent());

    // Outside both hypotheses the check refuses to conclude but still
    // reports the determinant it computed.
    let outside = independence_check(3, &ints(&[1, -1])).unwrap();
    println!("c = (1, -1):     {outside}");
    assert!(!outside.is_independent());

    // Polynomial tuples reduce to the scalar case by specialization: find
    // an integer point where no f_i, f_i - f_j, or f_i + f_j vanishes, and
    // the evaluated tuple has distinct absolute values by construction.
    let ring = RingDescriptor::polynomials(
        vec!["a".into(), "b".into()],
        RingDescriptor::Integers,
    )
    .unwrap();
    let f = vec![
        RingElem::parse(&ring, "a").unwrap(),
        RingElem::parse(&ring, "a + b").unwrap(),
        RingElem::parse(&ring, "a*b - 1").unwrap(),
    ];
    let point = find_nonvanishing_point(&f).unwrap();
    println!("point: {point:?}");

    let values: Vec<BigInt> = f
        .iter()
        .map(|fi| poly_eval_int(fi, &point).unwrap())
        .collect();
    println!("values: {values:?}");
    let specialized = independence_check(3, &values).unwrap();
    println!("specialized tuple: {specialized}");
    assert!(specialized.is_independent());
}
