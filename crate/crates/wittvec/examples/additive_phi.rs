//! The additive map phi(x) = V<x^p> − p<x>: its ghost shape, exact
//! additivity over torsion rings, and the interaction with truncation.

use num_bigint::{BigInt, BigUint};
use wittvec::ring::RingDescriptor;
use wittvec::witt::{ghost_map, phi, witt_add, WittContext};

fn main() {
    // Over the integers the ghost components make additivity transparent:
    // ghost(phi(x)) = (-p*x, 0, ..., 0).
    let ctx = WittContext::new(3, 3, RingDescriptor::Integers).unwrap();
    let one = ctx.ring().one();
    let p1 = phi(&ctx, &one).unwrap();
    println!("phi(1)        = {p1}");
    println!("ghost(phi(1)) = {}", ghost_map(&p1));

    // Additivity phi(x + y) = phi(x) + phi(y) holds exactly — including
    // over rings with torsion, where no ghost argument is available and
    // the universal polynomials do the work.
    let z6 = WittContext::new(3, 4, RingDescriptor::integers_mod(BigUint::from(6u32)).unwrap())
        .unwrap();
    for (a, b) in [(2i64, 3i64), (4, 5), (1, 1)] {
        let x = z6.ring().from_int(BigInt::from(a));
        let y = z6.ring().from_int(BigInt::from(b));
        let lhs = phi(&z6, &x.add(&y)).unwrap();
        let rhs = witt_add(&phi(&z6, &x).unwrap(), &phi(&z6, &y).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        println!("over Z/6: phi({a} + {b}) = phi({a}) + phi({b}) = {lhs}");
    }

    // Polynomial coefficients work the same way.
    let poly = RingDescriptor::polynomials(
        vec!["t".into()],
        RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
    )
    .unwrap();
    let pctx = WittContext::new(3, 3, poly.clone()).unwrap();
    let t = poly.var_elem(0);
    let u = t.scale(&BigInt::from(2));
    let lhs = phi(&pctx, &t.add(&u)).unwrap();
    let rhs = witt_add(&phi(&pctx, &t).unwrap(), &phi(&pctx, &u).unwrap()).unwrap();
    assert_eq!(lhs, rhs);
    println!("over {poly}: phi(t + 2*t) = phi(t) + phi(2*t) = {lhs}");

    // Truncation commutes with phi, so the family is compatible along
    // W_{n+1} -> W_n.
    let x = ctx.ring().from_int(BigInt::from(5));
    let long = phi(&ctx, &x).unwrap();
    let short = phi(&ctx.with_len(2).unwrap(), &x).unwrap();
    assert_eq!(long.truncate(2).unwrap(), short);
    println!("truncate(phi(5), 2) = {short}");
}
