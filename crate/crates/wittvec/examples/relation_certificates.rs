//! Formal sums of shift symbols, the relation generators (sign pairs and
//! the additivity defect), the evaluation map into sequence space, and the
//! membership decision that returns a checkable certificate or a concrete
//! non-membership witness.

use num_bigint::BigInt;
use wittvec::relations::{
    eta_evaluate, normalize_signs_with_cert, reduce, v_shift, verify_certificate, FormalSum,
    HGenerator, Reduction,
};
use wittvec::ring::{RingDescriptor, RingElem};

fn main() {
    let zt = RingDescriptor::polynomials(vec!["t".into()], RingDescriptor::Integers).unwrap();
    let t = RingElem::parse(&zt, "t").unwrap();

    // Formal sums are written as integer combinations of symbols V[k]{elem}.
    let alpha = FormalSum::parse(&zt, "V[0]{t} + V[0]{-t} + 3*V[1]{t^2}").unwrap();
    println!("alpha = {alpha}");

    // Sign normalization rewrites V[k]{-a} as -V[k]{a} and records the sign
    // generators consumed, so the rewrite is itself certified:
    // alpha = normalized + sum coeff * expand(gen).
    let (normalized, consumed) = normalize_signs_with_cert(&alpha);
    println!("normalized = {normalized}");
    let mut recon = normalized.clone();
    for (c, g) in &consumed {
        recon = recon.add(&g.expand(3).unwrap().scale(c)).unwrap();
    }
    assert_eq!(recon, alpha);

    // Evaluation sends V[k]{a} to the sequence p^k * (0,...,0, a, a^p, ...):
    // the symbol contributes p^k * a^(p^(i-k)) to component i >= k.
    let beta = FormalSum::parse(&zt, "V[1]{t}").unwrap();
    println!("eta(V[1]{{t}}) = {}", eta_evaluate(&beta, 3, 3).unwrap());

    // The relation generators evaluate to zero: a sign pair because
    // (-a)^(3^i) = -a^(3^i) for odd exponents, the additivity defect
    // because the evaluated phi is additive.
    let sign = HGenerator::Sign { level: 0, r: t.clone() };
    let addv = HGenerator::Additivity {
        level: 1,
        x: t.clone(),
        y: t.scale(&BigInt::from(2)),
    };
    for g in [&sign, &addv] {
        let expanded = g.expand(3).unwrap();
        let eta = eta_evaluate(&expanded, 3, 4).unwrap();
        println!("{g} expands to {expanded}");
        assert!(eta.is_zero());
    }

    // Membership in the saturated relation subgroup is decidable. A member
    // comes back with a certificate: a combination of generators and an
    // exponent k with sum c * expand(gen) = 3^k * alpha.
    let member = addv.expand(3).unwrap().add(&v_shift(&sign.expand(3).unwrap(), 2)).unwrap();
    match reduce(&member, 3).unwrap() {
        Reduction::InSaturation(cert) => {
            println!("member reduces with k = {}, {} generators", cert.k(), cert.combo().len());
            assert!(verify_certificate(&member, &cert, 3));
        }
        Reduction::NotIn { level, witness } => {
            panic!("expected membership, got witness {witness} at component {level}")
        }
    }

    // Certificates survive JSON round trips, so they can be checked by a
    // separate process.
    if let Reduction::InSaturation(cert) = reduce(&member, 3).unwrap() {
        let json = cert.to_json();
        let back = wittvec::relations::RelationCertificate::from_json(&zt, &json).unwrap();
        assert!(verify_certificate(&member, &back, 3));
        println!("certificate round-trips through JSON");
    }

    // Non-members yield a witness: a nonzero component of the evaluated
    // sequence, stable under any sufficiently long truncation.
    let s_t = RingDescriptor::polynomials(
        vec!["s".into(), "t".into()],
        RingDescriptor::Integers,
    )
    .unwrap();
    let gamma = FormalSum::parse(&s_t, "V[0]{t} + V[0]{s}").unwrap();
    match reduce(&gamma, 3).unwrap() {
        Reduction::NotIn { level, witness } => {
            println!("V[0]{{t}} + V[0]{{s}} is not a relation: component {level} = {witness}");
            let eta = eta_evaluate(&gamma, 3, level + 1).unwrap();
            assert_eq!(eta.comps()[level], witness);
        }
        Reduction::InSaturation(_) => panic!("t + s should not evaluate to zero"),
    }
}
