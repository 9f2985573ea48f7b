//! Seeded randomized verification suites.
//!
//! Each suite checks a family of exact algebraic invariants on randomized
//! inputs and produces a deterministic report: one line per invariant with
//! its trial count and PASS/FAIL, sorted by invariant name, plus a
//! reproduction command for any failure.  All sampling is driven by
//! ChaCha8 streams derived from the user seed and the invariant name, so a
//! report is byte-identical across runs with the same flags.

use crate::relations::{
    eta_evaluate, normalize_signs, normalize_signs_with_cert, reduce, v_shift, verify_certificate,
    FormalSum, HGenerator, Reduction,
};
use crate::ring::{RingDescriptor, RingElem};
use crate::vandermonde::{find_nonvanishing_point, independence_check, Independence, PVandermonde};
use crate::witt::{
    frobenius, ghost_map, int_scale, phi, teich_v_decompose, teichmuller, verschiebung, witt_add,
    witt_neg, WittContext, WittError,
};
use crate::xmodel::{x_generator, x_membership, GeneratorTerm, Presentation, XError};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use std::collections::BTreeSet;
use std::fmt;

/// Errors from suite dispatch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuiteError {
    UnknownSuite(String),
}

impl fmt::Display for SuiteError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteError::UnknownSuite(name) => write!(
                f,
                "unknown suite `{name}` (expected properties, cd, c-functor, vandermonde, or all)"
            ),
        }
    }
}

impl std::error::Error for SuiteError {}

/// Result of checking one invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantOutcome {
    /// Invariant name, e.g. `phi additivity over Z/9`.
    pub name: String,
    /// The suite the invariant belongs to (used in reproduction commands).
    pub suite: &'static str,
    /// Number of randomized trials run.
    pub trials: u64,
    pub passed: bool,
    /// Extra information shown on the report line (e.g. counts).
    pub detail: Option<String>,
    /// Description of the first failing trial, when any.
    pub failure: Option<String>,
}

/// A deterministic suite report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    suite: String,
    seed: u64,
    trials: u64,
    outcomes: Vec<InvariantOutcome>,
}

impl SuiteReport {
    pub fn suite(&self) -> &str {
        &self.suite
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Outcomes sorted by invariant name.
    pub fn outcomes(&self) -> &[InvariantOutcome] {
        &self.outcomes
    }

    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    /// The outcome for an exact invariant name, if present.
    pub fn outcome(&self, name: &str) -> Option<&InvariantOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.all_passed(),
            "invariants": Value::Array(
                self.outcomes
                    .iter()
                    .map(|o| {
                        serde_json::json!({
                            "name": o.name,
                            "suite": o.suite,
                            "trials": o.trials,
                            "passed": o.passed,
                            "detail": o.detail,
                            "failure": o.failure,
                        })
                    })
                    .collect(),
            ),
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            let verdict = if o.passed { "PASS" } else { "FAIL" };
            let extra = o.detail.as_ref().map(|d| format!(", {d}")).unwrap_or_default();
            writeln!(f, "{}: {} ({} trials{})", o.name, verdict, o.trials, extra)?;
            if let Some(failure) = &o.failure {
                writeln!(f, "  counterexample: {failure}")?;
                writeln!(
                    f,
                    "  reproduce: witt verify {} --seed {} --trials {}",
                    o.suite, self.seed, self.trials
                )?;
            }
        }
        let verdict = if self.all_passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "suite {}: {} ({} invariants)",
            self.suite,
            verdict,
            self.outcomes.len()
        )
    }
}

/// Runs one named suite (`properties`, `cd`, `c-functor`, `vandermonde`)
/// or `all`, with `trials` randomized trials per invariant.
pub fn run_suite(name: &str, seed: u64, trials: u64) -> Result<SuiteReport, SuiteError> {
    let mut outcomes = match name {
        "properties" => properties_suite(seed, trials),
        "cd" => cd_suite(seed, trials),
        "c-functor" => c_functor_suite(seed, trials),
        "vandermonde" => vandermonde_suite(seed, trials),
        "all" => {
            let mut v = properties_suite(seed, trials);
            v.extend(cd_suite(seed, trials));
            v.extend(c_functor_suite(seed, trials));
            v.extend(vandermonde_suite(seed, trials));
            v
        }
        other => return Err(SuiteError::UnknownSuite(other.to_string())),
    };
    outcomes.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(SuiteReport { suite: name.to_string(), seed, trials, outcomes })
}

/// Mixes the user seed with the invariant name so every invariant draws an
/// independent, reproducible random stream.
fn derive_seed(seed: u64, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed.rotate_left(17)
}

fn per_trial<F>(
    suite: &'static str,
    name: String,
    seed: u64,
    trials: u64,
    mut f: F,
) -> InvariantOutcome
where
    F: FnMut(&mut ChaCha8Rng) -> Result<(), String>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &name));
    let mut failure = None;
    for i in 0..trials {
        if let Err(e) = f(&mut rng) {
            failure = Some(format!("trial {i}: {e}"));
            break;
        }
    }
    InvariantOutcome {
        name,
        suite,
        trials,
        passed: failure.is_none(),
        detail: None,
        failure,
    }
}

// ---------------------------------------------------------------------------
// Random input generation
// ---------------------------------------------------------------------------

/// A random element of a ring, kept small enough for exact arithmetic at
/// the exponents the suites reach: scalar rings draw bounded integers,
/// polynomial rings draw one- or two-term polynomials (so that high powers
/// stay on the sparse fast paths).
pub fn random_elem(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElem {
    random_poly_elem(rng, ring, 2)
}

/// Like [`random_elem`] but polynomial elements use a single term.
pub fn random_monomial(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElem {
    random_poly_elem(rng, ring, 1)
}

fn random_poly_elem(rng: &mut ChaCha8Rng, ring: &RingDescriptor, max_terms: usize) -> RingElem {
    match ring {
        RingDescriptor::Integers => ring.from_int(BigInt::from(rng.gen_range(-50i64..=50))),
        RingDescriptor::IntegersMod(_) => ring.from_int(BigInt::from(rng.gen_range(0i64..=1000))),
        RingDescriptor::Polynomials { vars, .. } => {
            let nterms = rng.gen_range(1..=max_terms);
            let mut acc = ring.zero();
            for _ in 0..nterms {
                let coeff = loop {
                    let c = rng.gen_range(-8i64..=8);
                    if c != 0 {
                        break c;
                    }
                };
                let mut term = ring.from_int(BigInt::from(coeff));
                for i in 0..vars.len() {
                    let e = rng.gen_range(0..=2u32);
                    for _ in 0..e {
                        term = term.mul(&ring.var_elem(i));
                    }
                }
                acc = acc.add(&term);
            }
            acc
        }
    }
}

/// A random nonzero element.
pub fn random_nonzero_elem(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElem {
    loop {
        let e = random_elem(rng, ring);
        if !e.is_zero() {
            return e;
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, ctx: &WittContext) -> crate::witt::WittVector {
    let coords = (0..ctx.len()).map(|_| random_elem(rng, ctx.ring())).collect();
    ctx.from_coords(coords).expect("sampled coordinates match the context")
}

fn scalar_rings() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::Integers,
        RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
        RingDescriptor::integers_mod(BigUint::from(6u32)).unwrap(),
    ]
}

fn poly_z_t() -> RingDescriptor {
    RingDescriptor::polynomials(vec!["t".into()], RingDescriptor::Integers).unwrap()
}

fn poly_z9_t() -> RingDescriptor {
    RingDescriptor::polynomials(
        vec!["t".into()],
        RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
    )
    .unwrap()
}

fn poly_z_xy() -> RingDescriptor {
    RingDescriptor::polynomials(vec!["x".into(), "y".into()], RingDescriptor::Integers).unwrap()
}

fn all_rings() -> Vec<RingDescriptor> {
    let mut v = scalar_rings();
    v.push(poly_z_t());
    v.push(poly_z9_t());
    v
}

/// `(p, n)` choices that keep polynomial coefficient growth on the sparse
/// fast paths; scalar rings can afford larger truncations.
fn sample_p_n(rng: &mut ChaCha8Rng, ring: &RingDescriptor, max_len: usize) -> (u64, usize) {
    let p = *[3u64, 5].choose(rng).unwrap();
    let cap = if matches!(ring, RingDescriptor::Polynomials { .. }) && p == 5 {
        3.min(max_len)
    } else {
        max_len
    };
    (p, rng.gen_range(2..=cap.max(2)))
}

fn err_witt(e: WittError) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// properties suite: operator laws of the truncated group
// ---------------------------------------------------------------------------

fn properties_suite(seed: u64, trials: u64) -> Vec<InvariantOutcome> {
    let mut out = Vec::new();
    const SUITE: &str = "properties";

    // Additivity of phi(x) = V<x^p> − p<x> over the four sample rings.
    let phi_rings = vec![
        RingDescriptor::Integers,
        RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
        RingDescriptor::integers_mod(BigUint::from(6u32)).unwrap(),
        poly_z9_t(),
    ];
    for ring in &phi_rings {
        let ring = ring.clone();
        out.push(per_trial(
            SUITE,
            format!("phi additivity over {ring}"),
            seed,
            trials,
            move |rng| {
                let (p, n) = sample_p_n(rng, &ring, 4);
                let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
                let (x, y) = if matches!(ring, RingDescriptor::Polynomials { .. }) {
                    (random_monomial(rng, &ring), random_monomial(rng, &ring))
                } else {
                    (random_elem(rng, &ring), random_elem(rng, &ring))
                };
                let lhs = phi(&ctx, &x.add(&y)).map_err(err_witt)?;
                let rhs = witt_add(
                    &phi(&ctx, &x).map_err(err_witt)?,
                    &phi(&ctx, &y).map_err(err_witt)?,
                )
                .map_err(err_witt)?;
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(format!("phi({x} + {y}) != phi({x}) + phi({y}) at p={p}, n={n}"))
                }
            },
        ));
    }

    // Teichmüller negation: <−x> = −<x>.
    for ring in &phi_rings {
        let ring = ring.clone();
        out.push(per_trial(
            SUITE,
            format!("teichmuller negation over {ring}"),
            seed,
            trials,
            move |rng| {
                let (p, n) = sample_p_n(rng, &ring, 4);
                let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
                let x = random_elem(rng, &ring);
                let lhs = teichmuller(&ctx, &x.neg()).map_err(err_witt)?;
                let rhs = witt_neg(&teichmuller(&ctx, &x).map_err(err_witt)?);
                if lhs == rhs {
                    Ok(())
                } else {
                    Err(format!("teich(-({x})) != -teich({x}) at p={p}, n={n}"))
                }
            },
        ));
    }

    // Frobenius on Teichmüller elements: F<x> = <x^p>.
    for ring in all_rings() {
        out.push(per_trial(
            SUITE,
            format!("frobenius of teichmuller over {ring}"),
            seed,
            trials,
            {
                let ring = ring.clone();
                move |rng| {
                    let (p, n) = sample_p_n(rng, &ring, 5);
                    let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
                    let x = random_elem(rng, &ring);
                    let lhs = frobenius(&teichmuller(&ctx, &x).map_err(err_witt)?)
                        .map_err(err_witt)?;
                    let short = ctx.with_len(n - 1).map_err(err_witt)?;
                    let rhs = teichmuller(&short, &x.pow(p)).map_err(err_witt)?;
                    if lhs == rhs {
                        Ok(())
                    } else {
                        Err(format!("F<{x}> != <({x})^{p}> at p={p}, n={n}"))
                    }
                }
            },
        ));

        // Frobenius after the shift is multiplication by p.
        out.push(per_trial(
            SUITE,
            format!("frobenius after verschiebung over {ring}"),
            seed,
            trials,
            {
                let ring = ring.clone();
                move |rng| {
                    let (p, n) = sample_p_n(rng, &ring, 5);
                    let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
                    let x = random_vector(rng, &ctx);
                    let lhs = frobenius(&verschiebung(&x)).map_err(err_witt)?;
                    let rhs = int_scale(
                        &BigInt::from(p),
                        &x.truncate(n - 1).map_err(err_witt)?,
                    );
                    if lhs == rhs {
                        Ok(())
                    } else {
                        Err(format!("F(V(x)) != p*x for x = {x} at p={p}, n={n}"))
                    }
                }
            },
        ));
    }

    // The coordinate-to-sequence map turns addition componentwise.
    out.push(per_trial(
        SUITE,
        "ghost additivity over Z".to_string(),
        seed,
        trials,
        |rng| {
            let ring = RingDescriptor::Integers;
            let (p, n) = sample_p_n(rng, &ring, 5);
            let ctx = WittContext::new(p, n, ring).map_err(err_witt)?;
            let x = random_vector(rng, &ctx);
            let y = random_vector(rng, &ctx);
            let lhs = ghost_map(&witt_add(&x, &y).map_err(err_witt)?);
            let rhs = ghost_map(&x).add(&ghost_map(&y)).map_err(err_witt)?;
            if lhs == rhs {
                Ok(())
            } else {
                Err(format!("ghost(x+y) != ghost(x)+ghost(y) for x={x}, y={y}"))
            }
        },
    ));

    // No p-torsion over the integers: p·x = 0 forces x = 0.
    out.push(per_trial(
        SUITE,
        "p-torsion freeness over Z".to_string(),
        seed,
        trials,
        |rng| {
            let ring = RingDescriptor::Integers;
            let (p, n) = sample_p_n(rng, &ring, 5);
            let ctx = WittContext::new(p, n, ring).map_err(err_witt)?;
            let x = loop {
                let v = random_vector(rng, &ctx);
                if !v.is_zero() {
                    break v;
                }
            };
            if int_scale(&BigInt::from(p), &x).is_zero() {
                Err(format!("p*x = 0 for nonzero x = {x} at p={p}, n={n}"))
            } else {
                Ok(())
            }
        },
    ));

    // Dropping the last coordinate commutes with every operation.
    for ring in all_rings() {
        out.push(per_trial(
            SUITE,
            format!("truncation compatibility over {ring}"),
            seed,
            trials,
            {
                let ring = ring.clone();
                move |rng| {
                    let p = 3u64;
                    let n = rng.gen_range(1..=4usize);
                    let ctx = WittContext::new(p, n + 1, ring.clone()).map_err(err_witt)?;
                    let x = random_vector(rng, &ctx);
                    let y = random_vector(rng, &ctx);
                    let r = random_elem(rng, &ring);
                    let cut =
                        |v: &crate::witt::WittVector| v.truncate(n).map_err(err_witt);
                    let short = ctx.with_len(n).map_err(err_witt)?;

                    let sum = witt_add(&x, &y).map_err(err_witt)?;
                    if cut(&sum)? != witt_add(&cut(&x)?, &cut(&y)?).map_err(err_witt)? {
                        return Err(format!("truncation vs add at x={x}, y={y}"));
                    }
                    if cut(&witt_neg(&x))? != witt_neg(&cut(&x)?) {
                        return Err(format!("truncation vs neg at x={x}"));
                    }
                    if cut(&verschiebung(&x))? != verschiebung(&cut(&x)?) {
                        return Err(format!("truncation vs shift at x={x}"));
                    }
                    if cut(&teichmuller(&ctx, &r).map_err(err_witt)?)?
                        != teichmuller(&short, &r).map_err(err_witt)?
                    {
                        return Err(format!("truncation vs teichmuller at r={r}"));
                    }
                    if cut(&phi(&ctx, &r).map_err(err_witt)?)?
                        != phi(&short, &r).map_err(err_witt)?
                    {
                        return Err(format!("truncation vs phi at r={r}"));
                    }
                    Ok(())
                }
            },
        ));
    }

    out
}

// ---------------------------------------------------------------------------
// cd suite: the sequence model and its projection to Witt vectors
// ---------------------------------------------------------------------------

fn cd_suite(seed: u64, trials: u64) -> Vec<InvariantOutcome> {
    let mut out = Vec::new();
    const SUITE: &str = "cd";

    // Combinations of shifted Teichmüller sequences pass membership and
    // decompose back to the same sequence.
    out.push(per_trial(
        SUITE,
        "membership decomposition round trip over Z[x]".to_string(),
        seed,
        trials,
        |rng| {
            let ring =
                RingDescriptor::polynomials(vec!["x".into()], RingDescriptor::Integers).unwrap();
            let (p, n) = sample_p_n(rng, &ring, 4);
            let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
            let mut acc = crate::xmodel::XElement::from_seq(
                ctx.ghost_from_comps(vec![ring.zero(); n]).map_err(err_witt)?,
            );
            for _ in 0..rng.gen_range(1..=3usize) {
                let k = rng.gen_range(0..n);
                let r = random_elem(rng, &ring);
                let c = BigInt::from(rng.gen_range(-4i64..=4));
                let g = x_generator(&ctx, k, &r).map_err(|e| e.to_string())?;
                acc = acc.add(&g.scale(&c)).map_err(|e| e.to_string())?;
            }
            let parts = x_membership(acc.seq()).map_err(|e| e.to_string())?;
            let mut recomposed = ctx.zero();
            for (k, part) in parts.iter().enumerate() {
                let mut w = teichmuller(&ctx, part).map_err(err_witt)?;
                for _ in 0..k {
                    w = verschiebung(&w);
                }
                recomposed = witt_add(&recomposed, &w).map_err(err_witt)?;
            }
            if &ghost_map(&recomposed) == acc.seq() {
                Ok(())
            } else {
                Err(format!("decomposition does not recompose for {:?}", acc.seq()))
            }
        },
    ));

    // Bumping a later component by less than its p-power breaks the
    // divisibility requirement.
    out.push(per_trial(
        SUITE,
        "membership rejects non-divisible sequences over Z".to_string(),
        seed,
        trials,
        |rng| {
            let ring = RingDescriptor::Integers;
            let p = *[3u64, 5].choose(rng).unwrap();
            let n = rng.gen_range(2..=4usize);
            let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
            let member = ghost_map(&random_vector(rng, &ctx));
            let j = rng.gen_range(1..n);
            let bump = BigInt::from(rng.gen_range(1..p as i64));
            let comps: Vec<RingElem> = member
                .comps()
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if i == j {
                        c.add(&ring.from_int(bump.clone()))
                    } else {
                        c.clone()
                    }
                })
                .collect();
            let seq = ctx.ghost_from_comps(comps).map_err(err_witt)?;
            match x_membership(&seq) {
                Err(XError::NotMember { index }) if index == j => Ok(()),
                Err(XError::NotMember { index }) => {
                    Err(format!("rejection at index {index}, expected {j}"))
                }
                Ok(_) => Err(format!("perturbed sequence accepted at index {j}")),
                Err(e) => Err(e.to_string()),
            }
        },
    ));

    // Every vector is a sum of shifted Teichmüller lifts of its slope
    // coordinates, torsion rings included.
    for ring in scalar_rings() {
        out.push(per_trial(
            SUITE,
            format!("shift decomposition over {ring}"),
            seed,
            trials,
            {
                let ring = ring.clone();
                move |rng| {
                    let (p, n) = sample_p_n(rng, &ring, 4);
                    let ctx = WittContext::new(p, n, ring.clone()).map_err(err_witt)?;
                    let x = random_vector(rng, &ctx);
                    let parts = teich_v_decompose(&x);
                    let mut acc = ctx.zero();
                    for (k, part) in parts.iter().enumerate() {
                        let mut w = teichmuller(&ctx, part).map_err(err_witt)?;
                        for _ in 0..k {
                            w = verschiebung(&w);
                        }
                        acc = witt_add(&acc, &w).map_err(err_witt)?;
                    }
                    if acc == x {
                        Ok(())
                    } else {
                        Err(format!("recomposition mismatch for {x}"))
                    }
                }
            },
        ));
    }

    // Projection of generator combinations is additive.
    out.push(per_trial(
        SUITE,
        "projection additivity over Z/6".to_string(),
        seed,
        trials,
        |rng| {
            let target = RingDescriptor::integers_mod(BigUint::from(6u32)).unwrap();
            let lift =
                RingDescriptor::polynomials(vec!["u".into(), "v".into()], RingDescriptor::Integers)
                    .unwrap();
            let images = vec![random_elem(rng, &target), random_elem(rng, &target)];
            let pres = Presentation::new(lift.clone(), target, images)
                .map_err(|e| e.to_string())?;
            let mut terms_a = Vec::new();
            let mut terms_b = Vec::new();
            for terms in [&mut terms_a, &mut terms_b] {
                for _ in 0..rng.gen_range(1..=2usize) {
                    terms.push(GeneratorTerm {
                        level: rng.gen_range(0..3usize),
                        elem: random_elem(rng, &lift),
                        coeff: BigInt::from(rng.gen_range(-3i64..=3)),
                    });
                }
            }
            let separate = witt_add(
                &crate::xmodel::project_to_w(&pres, 3, 3, &terms_a).map_err(|e| e.to_string())?,
                &crate::xmodel::project_to_w(&pres, 3, 3, &terms_b).map_err(|e| e.to_string())?,
            )
            .map_err(err_witt)?;
            let mut all = terms_a;
            all.extend(terms_b);
            let together =
                crate::xmodel::project_to_w(&pres, 3, 3, &all).map_err(|e| e.to_string())?;
            if together == separate {
                Ok(())
            } else {
                Err("projection is not additive on a sampled combination".to_string())
            }
        },
    ));

    // Generator combinations built inside the kernel ideal project to the
    // zero vector.
    for modulus in [9u32, 6, 5] {
        let target = RingDescriptor::integers_mod(BigUint::from(modulus)).unwrap();
        out.push(per_trial(
            SUITE,
            format!("projection kills kernel combinations over {target}"),
            seed,
            trials,
            {
                let target = target.clone();
                move |rng| {
                    let lift = RingDescriptor::polynomials(
                        vec!["u".into(), "v".into()],
                        RingDescriptor::Integers,
                    )
                    .unwrap();
                    let cu = rng.gen_range(0..i64::from(modulus));
                    let cv = rng.gen_range(0..i64::from(modulus));
                    let images = vec![
                        target.from_int(BigInt::from(cu)),
                        target.from_int(BigInt::from(cv)),
                    ];
                    let pres = Presentation::new(lift.clone(), target.clone(), images)
                        .map_err(|e| e.to_string())?;
                    // Kernel elements: multiples of (u − cu), (v − cv), and
                    // the modulus itself.
                    let kernel_elem = |rng: &mut ChaCha8Rng| {
                        let g = random_elem(rng, &lift);
                        let h = random_elem(rng, &lift);
                        let e = random_elem(rng, &lift);
                        let u_rel = lift.var_elem(0).sub(&lift.from_int(BigInt::from(cu)));
                        let v_rel = lift.var_elem(1).sub(&lift.from_int(BigInt::from(cv)));
                        g.mul(&u_rel)
                            .add(&h.mul(&v_rel))
                            .add(&e.scale(&BigInt::from(modulus)))
                    };
                    let terms: Vec<GeneratorTerm> = (0..rng.gen_range(1..=3usize))
                        .map(|_| GeneratorTerm {
                            level: rng.gen_range(0..3usize),
                            elem: kernel_elem(rng),
                            coeff: BigInt::from(rng.gen_range(-3i64..=3)),
                        })
                        .collect();
                    let w = crate::xmodel::project_to_w(&pres, 3, 3, &terms)
                        .map_err(|e| e.to_string())?;
                    if w.is_zero() {
                        Ok(())
                    } else {
                        Err(format!("kernel combination projected to {w}"))
                    }
                }
            },
        ));
    }

    // Every Witt vector over the target is hit by a projected generator
    // sum (decompose, lift the slopes as constants, add kernel noise).
    out.push(per_trial(
        SUITE,
        "projection surjectivity over Z/9".to_string(),
        seed,
        trials,
        |rng| {
            let target = RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap();
            let ctx = WittContext::new(3, 3, target.clone()).map_err(err_witt)?;
            let w = random_vector(rng, &ctx);
            let parts = teich_v_decompose(&w);
            let lift =
                RingDescriptor::polynomials(vec!["u".into(), "v".into()], RingDescriptor::Integers)
                    .unwrap();
            let cu = rng.gen_range(0..9i64);
            let images = vec![
                target.from_int(BigInt::from(cu)),
                random_elem(rng, &target),
            ];
            let pres = Presentation::new(lift.clone(), target.clone(), images)
                .map_err(|e| e.to_string())?;
            let mut terms: Vec<GeneratorTerm> = parts
                .iter()
                .enumerate()
                .map(|(k, part)| GeneratorTerm {
                    level: k,
                    elem: lift.from_int(
                        part.as_scalar().expect("scalar target").clone(),
                    ),
                    coeff: BigInt::one(),
                })
                .collect();
            // Kernel noise: adding (u − cu)-multiples must not change the
            // projection.
            terms.push(GeneratorTerm {
                level: rng.gen_range(0..3usize),
                elem: random_elem(rng, &lift)
                    .mul(&lift.var_elem(0).sub(&lift.from_int(BigInt::from(cu)))),
                coeff: BigInt::from(rng.gen_range(-2i64..=2)),
            });
            let hit = crate::xmodel::project_to_w(&pres, 3, 3, &terms)
                .map_err(|e| e.to_string())?;
            if hit == w {
                Ok(())
            } else {
                Err(format!("projected sum {hit} missed target {w}"))
            }
        },
    ));

    out
}

// ---------------------------------------------------------------------------
// c-functor suite: relation certificates and the decision procedure
// ---------------------------------------------------------------------------

fn random_generator(
    rng: &mut ChaCha8Rng,
    ring: &RingDescriptor,
    max_level: usize,
    monomials_only: bool,
) -> HGenerator {
    if rng.gen_bool(0.5) {
        let level = rng.gen_range(1..=max_level.max(1));
        if monomials_only {
            // Parallel monomial arguments keep every element of the
            // expansion a monomial, so sequence evaluation at large
            // truncations stays on the single-term power fast path.
            let x = random_nonzero_monomial(rng, ring);
            let c = *[1i64, 2, 3, -2, -3].choose(rng).unwrap();
            let y = x.scale(&BigInt::from(c));
            HGenerator::Additivity { level, x, y }
        } else {
            HGenerator::Additivity {
                level,
                x: random_nonzero_elem(rng, ring),
                y: random_nonzero_elem(rng, ring),
            }
        }
    } else {
        let r = if monomials_only {
            random_nonzero_monomial(rng, ring)
        } else {
            random_nonzero_elem(rng, ring)
        };
        HGenerator::Sign { level: rng.gen_range(0..=max_level), r }
    }
}

fn random_nonzero_monomial(rng: &mut ChaCha8Rng, ring: &RingDescriptor) -> RingElem {
    loop {
        let e = random_monomial(rng, ring);
        if !e.is_zero() {
            return e;
        }
    }
}

/// Builds a random combination of expanded generators; always a relation
/// subgroup member by construction.
fn random_relation_member(
    rng: &mut ChaCha8Rng,
    ring: &RingDescriptor,
    p: u64,
    max_level: usize,
    max_gens: usize,
    monomials_only: bool,
) -> FormalSum {
    let mut acc = FormalSum::new(ring.clone()).unwrap();
    for _ in 0..rng.gen_range(1..=max_gens) {
        let gen = random_generator(rng, ring, max_level, monomials_only);
        let c = loop {
            let c = rng.gen_range(-3i64..=3);
            if c != 0 {
                break BigInt::from(c);
            }
        };
        acc = acc
            .add(&gen.expand(p).expect("sampled generators are well-formed").scale(&c))
            .expect("same ring");
    }
    acc
}

fn check_certified(alpha: &FormalSum, p: u64, eta_len: usize) -> Result<(), String> {
    match reduce(alpha, p).map_err(|e| e.to_string())? {
        Reduction::InSaturation(cert) => {
            if !verify_certificate(alpha, &cert, p) {
                return Err(format!("certificate fails verification for {alpha}"));
            }
            let g = eta_evaluate(alpha, p, eta_len).map_err(|e| e.to_string())?;
            if !g.is_zero() {
                return Err(format!("certified element evaluates nonzero: {alpha}"));
            }
            Ok(())
        }
        Reduction::NotIn { level, witness } => Err(format!(
            "member reported NotIn (component {level} = {witness}): {alpha}"
        )),
    }
}

fn c_functor_suite(seed: u64, trials: u64) -> Vec<InvariantOutcome> {
    let mut out = Vec::new();
    const SUITE: &str = "c-functor";
    let p = 3u64;

    out.push(per_trial(
        SUITE,
        "certificate soundness over Z[x,y]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_xy();
            let alpha = random_relation_member(rng, &ring, p, 3, 4, true);
            let eta_len = alpha.max_level().unwrap_or(0) + 6;
            check_certified(&alpha, p, eta_len)
        },
    ));

    out.push(per_trial(
        SUITE,
        "certificate completeness with p-division over Z[x,y]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_xy();
            // Scale a member by p so the division is always admissible,
            // then divide the whole sum back down: the quotient stays in
            // the saturation and must be certified.
            let member = random_relation_member(rng, &ring, p, 2, 3, true);
            let scaled = member.scale(&BigInt::from(p));
            let admissible = scaled
                .iter()
                .all(|(_, _, c)| (c % BigInt::from(p)).is_zero());
            if !admissible {
                return Err("p-multiple lost divisibility".to_string());
            }
            let divided = FormalSum::from_terms(
                ring,
                scaled
                    .iter()
                    .map(|(l, e, c)| (l, e.clone(), c / BigInt::from(p)))
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| e.to_string())?;
            let eta_len = divided.max_level().unwrap_or(0) + 6;
            check_certified(&divided, p, eta_len)
        },
    ));

    out.push(per_trial(
        SUITE,
        "mixed-element certificates over Z[t]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_t();
            let alpha = random_relation_member(rng, &ring, p, 1, 3, false);
            let eta_len = alpha.max_level().unwrap_or(0) + 3;
            check_certified(&alpha, p, eta_len)
        },
    ));

    out.push(per_trial(
        SUITE,
        "non-membership witness over Z[t]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_t();
            let member = random_relation_member(rng, &ring, p, 2, 2, true);
            // A single extra symbol can never be absorbed by relations.
            let d = loop {
                let d = rng.gen_range(-3i64..=3);
                if d != 0 {
                    break BigInt::from(d);
                }
            };
            let extra_level = rng.gen_range(0..=3usize);
            let extra_elem = random_nonzero_monomial(rng, &ring);
            let mut alpha = member;
            alpha.add_term(extra_level, extra_elem, &d);
            match reduce(&alpha, p).map_err(|e| e.to_string())? {
                Reduction::NotIn { level, witness } => {
                    if witness.is_zero() {
                        return Err("zero witness".to_string());
                    }
                    let g = eta_evaluate(&alpha, p, level + 1).map_err(|e| e.to_string())?;
                    if g.comps()[level] != witness {
                        return Err(format!(
                            "witness mismatch at component {level}: {witness} vs {}",
                            g.comps()[level]
                        ));
                    }
                    Ok(())
                }
                Reduction::InSaturation(_) => {
                    Err(format!("perturbed element certified as member: {alpha}"))
                }
            }
        },
    ));

    out.push(per_trial(
        SUITE,
        "sign normalization exactness over Z[t]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_t();
            let mut alpha = FormalSum::new(ring.clone()).unwrap();
            for _ in 0..rng.gen_range(1..=5usize) {
                alpha.add_term(
                    rng.gen_range(0..=3usize),
                    random_nonzero_elem(rng, &ring),
                    &BigInt::from(rng.gen_range(-5i64..=5)),
                );
            }
            let (norm, combo) = normalize_signs_with_cert(&alpha);
            let mut recon = norm.clone();
            for (c, g) in &combo {
                recon = recon
                    .add(&g.expand(p).map_err(|e| e.to_string())?.scale(c))
                    .map_err(|e| e.to_string())?;
            }
            if recon != alpha {
                return Err(format!("rewrite not exact for {alpha}"));
            }
            if normalize_signs(&norm) != norm {
                return Err(format!("normalization not idempotent for {alpha}"));
            }
            Ok(())
        },
    ));

    out.push(per_trial(
        SUITE,
        "generator sequences vanish over Z[x,y]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_xy();
            let gen = random_generator(rng, &ring, 3, false);
            let expansion = gen.expand(p).map_err(|e| e.to_string())?;
            let len = expansion.max_level().unwrap_or(0) + 3;
            let g = eta_evaluate(&expansion, p, len).map_err(|e| e.to_string())?;
            if g.is_zero() {
                Ok(())
            } else {
                Err(format!("generator {gen} evaluates to a nonzero sequence"))
            }
        },
    ));

    // Shifting a certified element keeps it certified.
    out.push(per_trial(
        SUITE,
        "shift stability over Z[t]".to_string(),
        seed,
        trials,
        move |rng| {
            let ring = poly_z_t();
            let member = random_relation_member(rng, &ring, p, 1, 2, true);
            let shifted = v_shift(&member, rng.gen_range(1..=2usize));
            let eta_len = shifted.max_level().unwrap_or(0) + 6;
            check_certified(&shifted, p, eta_len)
        },
    ));

    out
}

// ---------------------------------------------------------------------------
// vandermonde suite: exact determinants and the point search
// ---------------------------------------------------------------------------

fn distinct_magnitudes(rng: &mut ChaCha8Rng, n: usize) -> Vec<i64> {
    let mut set = BTreeSet::new();
    while set.len() < n {
        set.insert(rng.gen_range(1..=50i64));
    }
    let mut v: Vec<i64> = set.into_iter().collect();
    v.shuffle(rng);
    v
}

fn vandermonde_suite(seed: u64, trials: u64) -> Vec<InvariantOutcome> {
    let mut out = Vec::new();
    const SUITE: &str = "vandermonde";

    // Case (1): all entries positive.
    out.push(counted_det_check(
        SUITE,
        "case(1) determinants nonzero".to_string(),
        seed,
        trials,
        |rng| {
            let n = rng.gen_range(2..=6usize);
            let p = *[3u64, 5, 7].choose(rng).unwrap();
            let c: Vec<BigInt> = distinct_magnitudes(rng, n).into_iter().map(BigInt::from).collect();
            (p, c)
        },
    ));

    // Case (2): mixed signs with pairwise distinct absolute values.
    out.push(counted_det_check(
        SUITE,
        "case(2) determinants nonzero".to_string(),
        seed,
        trials,
        |rng| {
            let n = rng.gen_range(2..=6usize);
            let p = *[3u64, 5, 7].choose(rng).unwrap();
            let c: Vec<BigInt> = distinct_magnitudes(rng, n)
                .into_iter()
                .map(|m| BigInt::from(if rng.gen_bool(0.5) { m } else { -m }))
                .collect();
            (p, c)
        },
    ));

    // Fixed small determinant: M(1,2) at p = 3 has determinant 6.
    out.push({
        let m = PVandermonde::new(3, &[BigInt::one(), BigInt::from(2)]);
        let passed = m
            .as_ref()
            .map(|m| m.det() == BigInt::from(6))
            .unwrap_or(false);
        InvariantOutcome {
            name: "determinant of M(1,2) at p=3 equals 6".to_string(),
            suite: SUITE,
            trials: 1,
            passed,
            detail: None,
            failure: if passed {
                None
            } else {
                Some("det M(1,2) != 6".to_string())
            },
        }
    });

    // Point search: distinct non-opposite polynomials evaluate to an
    // independent integer tuple at the found point.
    out.push(per_trial(
        SUITE,
        "point search yields independent tuples".to_string(),
        seed,
        trials,
        |rng| {
            let nvars = rng.gen_range(1..=3usize);
            let vars: Vec<String> = ["a", "b", "c"][..nvars]
                .iter()
                .map(|s| s.to_string())
                .collect();
            let ring = RingDescriptor::polynomials(vars, RingDescriptor::Integers).unwrap();
            let nf = rng.gen_range(1..=3usize);
            let mut fs: Vec<RingElem> = Vec::new();
            'outer: for _ in 0..200 {
                let f = random_nonzero_elem(rng, &ring);
                for g in &fs {
                    if f == *g || f == g.neg() {
                        continue 'outer;
                    }
                }
                fs.push(f);
                if fs.len() == nf {
                    break;
                }
            }
            if fs.len() != nf {
                return Err("could not sample distinct non-opposite polynomials".to_string());
            }
            let point = find_nonvanishing_point(&fs).map_err(|e| e.to_string())?;
            let values: Vec<BigInt> = fs
                .iter()
                .map(|f| crate::ring::poly_eval_int(f, &point))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            match independence_check(3, &values).map_err(|e| e.to_string())? {
                Independence::Independent { .. } => Ok(()),
                other => Err(format!(
                    "evaluated tuple {values:?} not independent: {other}"
                )),
            }
        },
    ));

    out
}

fn counted_det_check<F>(
    suite: &'static str,
    name: String,
    seed: u64,
    trials: u64,
    mut sample: F,
) -> InvariantOutcome
where
    F: FnMut(&mut ChaCha8Rng) -> (u64, Vec<BigInt>),
{
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &name));
    let mut nonzero = 0u64;
    let mut failure = None;
    for i in 0..trials {
        let (p, c) = sample(&mut rng);
        match independence_check(p, &c) {
            Ok(Independence::Independent { det }) if !det.is_zero() => nonzero += 1,
            Ok(other) => {
                failure = Some(format!("trial {i}: tuple {c:?} at p={p} gave {other}"));
                break;
            }
            Err(e) => {
                failure = Some(format!("trial {i}: tuple {c:?} at p={p} errored: {e}"));
                break;
            }
        }
    }
    let passed = failure.is_none() && nonzero == trials;
    InvariantOutcome {
        name,
        suite,
        trials,
        passed,
        detail: Some(format!("{nonzero} nonzero determinants")),
        failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_rejected() {
        assert!(matches!(
            run_suite("bogus", 1, 1),
            Err(SuiteError::UnknownSuite(_))
        ));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite("vandermonde", 11, 5).unwrap();
        let b = run_suite("vandermonde", 11, 5).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        let c = run_suite("vandermonde", 12, 5).unwrap();
        assert!(c.all_passed());
    }

    #[test]
    fn outcomes_sorted_by_name() {
        let report = run_suite("all", 3, 2).unwrap();
        let names: Vec<&str> = report.outcomes().iter().map(|o| o.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(report.all_passed(), "smoke run failed:\n{report}");
    }

    #[test]
    fn properties_report_contains_expected_line() {
        let report = run_suite("properties", 7, 3).unwrap();
        let text = report.to_string();
        assert!(
            text.contains("phi additivity over Z/9: PASS"),
            "missing line in:\n{text}"
        );
    }

    #[test]
    fn vandermonde_report_shows_counts() {
        let report = run_suite("vandermonde", 5, 4).unwrap();
        let text = report.to_string();
        assert!(text.contains("case(1) determinants nonzero: PASS (4 trials, 4 nonzero determinants)"));
        assert!(text.contains("case(2) determinants nonzero: PASS (4 trials, 4 nonzero determinants)"));
    }

    #[test]
    fn failure_lines_include_reproduction_command() {
        // Force a failing outcome through the report printer.
        let report = SuiteReport {
            suite: "properties".into(),
            seed: 9,
            trials: 10,
            outcomes: vec![InvariantOutcome {
                name: "example invariant".into(),
                suite: "properties",
                trials: 10,
                passed: false,
                detail: None,
                failure: Some("trial 3: mismatch".into()),
            }],
        };
        let text = report.to_string();
        assert!(text.contains("example invariant: FAIL (10 trials)"));
        assert!(text.contains("counterexample: trial 3: mismatch"));
        assert!(text.contains("reproduce: witt verify properties --seed 9 --trials 10"));
    }
}
