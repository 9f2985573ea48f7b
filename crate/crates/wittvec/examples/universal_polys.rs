//! Universal addition and Frobenius polynomials: generation by exact
//! division in the ghost algebra, self-verification, evaluation, and the
//! on-disk cache.

use wittvec::ring::RingDescriptor;
use wittvec::univ::{generate_universal_polys, universal_polys_cached_in};
use wittvec::witt::{witt_add, WittContext};

fn main() {
    // S_k in Z[X0..X{n-1}, Y0..Y{n-1}] gives the k-th coordinate of a sum.
    let set = generate_universal_polys(3, 2).unwrap();
    for (k, s) in set.sums().iter().enumerate() {
        println!("S_{k} = {s}");
    }
    for (k, f) in set.frobs().iter().enumerate() {
        println!("F_{k} = {f}");
    }

    // The set re-verifies its defining ghost identities.
    set.verify().unwrap();
    println!("ghost identities verified for p=3, n=2");

    // Evaluating S at concrete coordinates agrees with the engine.
    let ctx = WittContext::new(3, 2, RingDescriptor::Integers).unwrap();
    let one = ctx.from_coords(vec![ctx.ring().one(), ctx.ring().zero()]).unwrap();
    let via_polys = set
        .evaluate_sum(one.coords(), one.coords())
        .unwrap();
    let via_engine = witt_add(&one, &one).unwrap();
    assert_eq!(via_polys, via_engine.coords());
    println!("S(1,0; 1,0) = {:?}", via_polys.iter().map(|c| c.to_string()).collect::<Vec<_>>());

    // Larger truncations get expensive fast, so generated sets are cached
    // (the CLI honors WITT_CACHE_DIR for the same purpose). A cache hit
    // still verifies before being trusted.
    let dir = tempfile_dir();
    let first = universal_polys_cached_in(&dir, 3, 3).unwrap();
    let second = universal_polys_cached_in(&dir, 3, 3).unwrap();
    assert_eq!(first.sums(), second.sums());
    println!(
        "cached p=3, n=3 set: S_2 has {} terms",
        first.sums()[2].term_count()
    );
    let _ = std::fs::remove_dir_all(&dir);

    // Coefficients are exact integers throughout, built by exact division
    // in the ghost algebra — never floating point.
    let p5 = generate_universal_polys(5, 2).unwrap();
    let s1 = &p5.sums()[1];
    println!("p=5: S_1 has {} terms, e.g. {}", s1.term_count(), s1);
    assert!(s1.to_string().contains("X0^4*Y0"));
}

fn tempfile_dir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("witt-univ-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
