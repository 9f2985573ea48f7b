//! The truncated Witt group: contexts, Teichmüller lifts, exact addition
//! through ghost components, the shift and Frobenius operators, and the
//! decomposition of a vector into shifted Teichmüller lifts.

use num_bigint::{BigInt, BigUint};
use wittvec::ring::RingDescriptor;
use wittvec::witt::{
    frobenius, ghost_map, int_scale, teich_v_decompose, teichmuller, verschiebung, witt_add,
    witt_neg, WittContext,
};

fn main() {
    // A context fixes the odd prime p, the truncation length n, and the
    // base ring.
    let ctx = WittContext::new(3, 3, RingDescriptor::Integers).unwrap();

    // Teichmüller lift of 2: coordinates (2, 0, 0), ghost (2, 8, 512).
    let two = ctx.ring().from_int(BigInt::from(2));
    let t2 = teichmuller(&ctx, &two).unwrap();
    println!("<2>       = {t2}");
    println!("ghost<2>  = {}", ghost_map(&t2));

    // Addition is NOT coordinatewise: (1,0) + (1,0) = (2,-2) at p = 3.
    let short = ctx.with_len(2).unwrap();
    let one = short.from_coords(vec![short.ring().one(), short.ring().zero()]).unwrap();
    let sum = witt_add(&one, &one).unwrap();
    println!("(1,0) + (1,0) = {sum}");
    assert_eq!(sum.coords()[1], short.ring().from_int(BigInt::from(-2)));

    // The same sum over Z/9 reduces the universal result.
    let z9 = WittContext::new(3, 2, RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap())
        .unwrap();
    let one9 = z9.from_coords(vec![z9.ring().one(), z9.ring().zero()]).unwrap();
    println!("(1,0) + (1,0) = {} over Z/9", witt_add(&one9, &one9).unwrap());

    // Negation and integer multiples.
    println!("-(1,0)  = {}", witt_neg(&one));
    println!("3 * <1> = {}", int_scale(&BigInt::from(3), &teichmuller(&short, &short.ring().one()).unwrap()));

    // The shift V moves coordinates right; Frobenius F satisfies
    // F<x> = <x^p> and F(V(x)) = p * x.
    let v2 = verschiebung(&t2);
    println!("V<2>      = {v2}, ghost {}", ghost_map(&v2));
    let f_t2 = frobenius(&t2).unwrap();
    println!("F<2>      = {f_t2}");
    assert_eq!(f_t2, teichmuller(&ctx.with_len(2).unwrap(), &two.pow(3)).unwrap());
    let fv = frobenius(&verschiebung(&t2)).unwrap();
    assert_eq!(fv, int_scale(&BigInt::from(3), &t2.truncate(2).unwrap()));
    println!("F(V<2>)   = {fv} = 3 * <2> truncated");

    // Every vector decomposes as sum_k V^k <a_k> with a_k its coordinates'
    // "slopes"; recomposing gives the vector back.
    let x = ctx.from_coords(vec![
        ctx.ring().from_int(BigInt::from(2)),
        ctx.ring().from_int(BigInt::from(5)),
        ctx.ring().from_int(BigInt::from(-1)),
    ])
    .unwrap();
    let parts = teich_v_decompose(&x);
    let shown: Vec<String> = parts.iter().map(|a| a.to_string()).collect();
    println!("decompose {x} -> ({})", shown.join(", "));
    let mut acc = ctx.zero();
    for (k, part) in parts.iter().enumerate() {
        let mut w = teichmuller(&ctx, part).unwrap();
        for _ in 0..k {
            w = verschiebung(&w);
        }
        acc = witt_add(&acc, &w).unwrap();
    }
    assert_eq!(acc, x);
    println!("recomposition matches");
}
