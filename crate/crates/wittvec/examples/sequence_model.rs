//! The shifted-sequence model: the subgroup of the sequence space `R^n`
//! generated by `V^k⟨r⟩ = p^k·(0,…,0, r, r^p, r^{p^2}, …)`, its exact
//! membership test over torsion-free rings, and the projection that turns
//! generator combinations over a polynomial lift into honest Witt vectors
//! over a quotient ring.

use num_bigint::{BigInt, BigUint};
use wittvec::ring::{RingDescriptor, RingElem};
use wittvec::witt::WittContext;
use wittvec::xmodel::{
    generator_sum_seq, project_to_w, x_generator, x_membership, GeneratorTerm, Presentation,
    XError,
};

fn main() {
    let ctx = WittContext::new(3, 3, RingDescriptor::Integers).unwrap();
    let z = ctx.ring().clone();

    // The generator V^1<2> is the sequence 3 * (0, 2, 8) = (0, 6, 24).
    let g = x_generator(&ctx, 1, &z.from_int(BigInt::from(2))).unwrap();
    println!("V^1<2> = {}", g.seq());

    // Members are built by the ambient group operations: componentwise
    // addition, negation, and integer scaling.
    let h = x_generator(&ctx, 0, &z.one()).unwrap();
    let member = h.add(&g.scale(&BigInt::from(2))).unwrap();
    println!("<1> + 2*V^1<2> = {}", member.seq());

    // Over a torsion-free ring membership is decidable, and a member has a
    // unique decomposition seq = sum_k V^k<a_k>.
    let parts = x_membership(member.seq()).unwrap();
    let shown: Vec<String> = parts.iter().map(|a| a.to_string()).collect();
    println!("decomposition: ({})", shown.join(", "));
    assert_eq!(parts[0], z.one());
    assert_eq!(parts[1], z.from_int(BigInt::from(4)));

    // Rebuilding from the decomposition returns the same sequence.
    let rebuilt = parts
        .iter()
        .enumerate()
        .map(|(k, a)| x_generator(&ctx, k, a).unwrap())
        .reduce(|acc, t| acc.add(&t).unwrap())
        .unwrap();
    assert_eq!(rebuilt.seq(), member.seq());

    // Non-members are rejected with the first index whose divisibility
    // requirement fails: (0, 1, 0) would need 3 | 1 at index 1.
    let bad = ctx
        .ghost_from_comps(vec![z.zero(), z.one(), z.zero()])
        .unwrap();
    match x_membership(&bad) {
        Err(XError::NotMember { index }) => println!("(0, 1, 0) rejected at index {index}"),
        other => panic!("expected a rejection, got {other:?}"),
    }

    // A presentation Z[u,v] -> Z/9 with u -> 1 and v -> 4. Generator
    // combinations over the lift push down to Witt vectors over the target.
    let lift = RingDescriptor::polynomials(
        vec!["u".into(), "v".into()],
        RingDescriptor::Integers,
    )
    .unwrap();
    let target = RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap();
    let images = vec![
        target.from_int(BigInt::from(1)),
        target.from_int(BigInt::from(4)),
    ];
    let pres = Presentation::new(lift.clone(), target, images).unwrap();

    let u = RingElem::parse(&lift, "u").unwrap();
    let v = RingElem::parse(&lift, "v").unwrap();
    println!("u*v + 2 |-> {}", pres.project(&RingElem::parse(&lift, "u*v + 2").unwrap()).unwrap());

    let terms = vec![
        GeneratorTerm { level: 0, elem: v.clone(), coeff: BigInt::from(2) },
        GeneratorTerm { level: 1, elem: u.clone(), coeff: BigInt::from(-1) },
    ];
    let w = project_to_w(&pres, 3, 3, &terms).unwrap();
    println!("2*V^0<v> - V^1<u> |-> {w} over W_3(Z/9)");

    // Elements of the presentation kernel die under projection: u - 1 and
    // 9*v both map to 0 in Z/9, so combinations built from them project to
    // the zero Witt vector even though they are nonzero upstairs.
    let kernel_terms = vec![
        GeneratorTerm {
            level: 0,
            elem: u.sub(&lift.one()),
            coeff: BigInt::from(5),
        },
        GeneratorTerm {
            level: 1,
            elem: v.scale(&BigInt::from(9)),
            coeff: BigInt::from(-2),
        },
    ];
    let lift_ctx = WittContext::new(3, 3, lift).unwrap();
    let upstairs = generator_sum_seq(&lift_ctx, &kernel_terms).unwrap();
    println!("upstairs: {}", upstairs.seq());
    assert!(!upstairs.seq().is_zero());
    let downstairs = project_to_w(&pres, 3, 3, &kernel_terms).unwrap();
    println!("projected: {downstairs}");
    assert!(downstairs.coords().iter().all(RingElem::is_zero));
}
