//! Explicit universal polynomials for Witt-vector arithmetic, with symbolic
//! verification of their ghost identities and a small on-disk cache.
//!
//! The sum polynomials `S_0, …, S_{n−1}` in `Z[X_0…X_{n−1}, Y_0…Y_{n−1}]`
//! are determined by the ghost identities
//! `w_k(S_0,…,S_k) = w_k(X) + w_k(Y)`, which unwind to the exact-division
//! recursion `S_k = (w_k(X) + w_k(Y) − Σ_{i<k} p^i·S_i^{p^{k−i}}) / p^k`.
//! The Frobenius polynomials `F_0, …, F_{n−2}` in `Z[X_0…X_{n−1}]` satisfy
//! `w_k(F_0,…,F_k) = w_{k+1}(X)` and unwind the same way.
//!
//! The polynomials grow like iterated p-th powers, so explicit generation
//! is only offered where the result stays small (see
//! [`WittError::GenerationTooLarge`]); the group operations in
//! [`crate::witt`] never need them.

use crate::ring::{exact_div_int, poly_eval_in, RingDescriptor, RingElem};
use crate::witt::{ghost_component, is_prime, WittError};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::Value;
use std::path::{Path, PathBuf};

/// The universal sum and Frobenius polynomials for one `(p, n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalPolySet {
    p: u64,
    n: usize,
    /// `S_0 … S_{n−1}` over `Z[X_0…X_{n−1}, Y_0…Y_{n−1}]`.
    sums: Vec<RingElem>,
    /// `F_0 … F_{n−2}` over `Z[X_0…X_{n−1}]`.
    frobs: Vec<RingElem>,
}

fn sum_ring(n: usize) -> RingDescriptor {
    let vars: Vec<String> = (0..n)
        .map(|i| format!("X{i}"))
        .chain((0..n).map(|i| format!("Y{i}")))
        .collect();
    RingDescriptor::polynomials(vars, RingDescriptor::Integers).expect("valid variable list")
}

fn frob_ring(n: usize) -> RingDescriptor {
    let vars: Vec<String> = (0..n).map(|i| format!("X{i}")).collect();
    RingDescriptor::polynomials(vars, RingDescriptor::Integers).expect("valid variable list")
}

fn check_generation_size(p: u64, n: usize) -> Result<(), WittError> {
    // The top polynomial has on the order of (size of S_{n−2})^p terms; past
    // p^{n−1} = 27 that stops fitting in memory.
    if n > 2 && p.saturating_pow(n as u32 - 1) > 27 {
        return Err(WittError::GenerationTooLarge { p, n });
    }
    Ok(())
}

/// Generates `S_0…S_{n−1}` and `F_0…F_{n−2}` by the exact-division
/// recursion and verifies the ghost identities before returning.
pub fn generate_universal_polys(p: u64, n: usize) -> Result<UniversalPolySet, WittError> {
    if !is_prime(p) || p == 2 {
        return Err(WittError::InvalidContext(format!("p = {p} is not an odd prime")));
    }
    if n == 0 {
        return Err(WittError::InvalidContext("length 0".into()));
    }
    check_generation_size(p, n)?;

    let sring = sum_ring(n);
    let xs: Vec<RingElem> = (0..n).map(|i| sring.var_elem(i)).collect();
    let ys: Vec<RingElem> = (0..n).map(|i| sring.var_elem(n + i)).collect();
    let sums = solve_ghost_recursion(p, n, |k| {
        ghost_component(p, &xs[..=k]).add(&ghost_component(p, &ys[..=k]))
    })?;

    let fring = frob_ring(n);
    let fxs: Vec<RingElem> = (0..n).map(|i| fring.var_elem(i)).collect();
    let frobs = solve_ghost_recursion(p, n - 1, |k| ghost_component(p, &fxs[..=k + 1]))?;

    let set = UniversalPolySet { p, n, sums, frobs };
    set.verify()?;
    Ok(set)
}

/// Solves `w_k(out_0,…,out_k) = target(k)` for `k < count`:
/// `out_k = (target(k) − Σ_{i<k} p^i·out_i^{p^{k−i}}) / p^k`.
fn solve_ghost_recursion<F>(p: u64, count: usize, target: F) -> Result<Vec<RingElem>, WittError>
where
    F: Fn(usize) -> RingElem,
{
    let mut out: Vec<RingElem> = Vec::with_capacity(count);
    let mut p_pow_k = BigInt::one();
    for k in 0..count {
        let mut rest = target(k);
        let mut p_pow_i = BigInt::one();
        for (i, prev) in out.iter().enumerate() {
            let e = p.checked_pow((k - i) as u32).expect("exponent fits in u64");
            rest = rest.sub(&prev.pow(e).scale(&p_pow_i));
            p_pow_i *= p;
        }
        let poly = exact_div_int(&rest, &p_pow_k)
            .map_err(|e| WittError::InternalDivisionFailure(e.to_string()))?;
        out.push(poly);
        p_pow_k *= p;
    }
    Ok(out)
}

impl UniversalPolySet {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.n
    }

    /// `S_0 … S_{n−1}`.
    pub fn sums(&self) -> &[RingElem] {
        &self.sums
    }

    /// `F_0 … F_{n−2}`.
    pub fn frobs(&self) -> &[RingElem] {
        &self.frobs
    }

    /// Re-checks both ghost identities symbolically:
    /// `w_k(S_0,…,S_k) = w_k(X) + w_k(Y)` and `w_k(F_0,…,F_k) = w_{k+1}(X)`.
    pub fn verify(&self) -> Result<(), WittError> {
        let p = self.p;
        let n = self.n;
        if self.sums.len() != n || self.frobs.len() != n - 1 {
            return Err(WittError::InvalidContext(format!(
                "{} sum and {} Frobenius polynomials for length {n}",
                self.sums.len(),
                self.frobs.len()
            )));
        }
        let sring = sum_ring(n);
        let xs: Vec<RingElem> = (0..n).map(|i| sring.var_elem(i)).collect();
        let ys: Vec<RingElem> = (0..n).map(|i| sring.var_elem(n + i)).collect();
        for k in 0..n {
            if *self.sums[k].ring() != sring {
                return Err(WittError::InvalidContext(format!(
                    "S_{k} lives in {}, expected {sring}",
                    self.sums[k].ring()
                )));
            }
            let lhs = ghost_component(p, &self.sums[..=k]);
            let rhs = ghost_component(p, &xs[..=k]).add(&ghost_component(p, &ys[..=k]));
            if lhs != rhs {
                return Err(WittError::InvalidContext(format!(
                    "sum ghost identity fails at k = {k}"
                )));
            }
        }
        let fring = frob_ring(n);
        let fxs: Vec<RingElem> = (0..n).map(|i| fring.var_elem(i)).collect();
        for k in 0..n - 1 {
            if *self.frobs[k].ring() != fring {
                return Err(WittError::InvalidContext(format!(
                    "F_{k} lives in {}, expected {fring}",
                    self.frobs[k].ring()
                )));
            }
            let lhs = ghost_component(p, &self.frobs[..=k]);
            let rhs = ghost_component(p, &fxs[..=k + 1]);
            if lhs != rhs {
                return Err(WittError::InvalidContext(format!(
                    "Frobenius ghost identity fails at k = {k}"
                )));
            }
        }
        Ok(())
    }

    /// Evaluates every `S_k` at concrete coordinates `(x, y)` in an
    /// arbitrary ring — the polynomial route to the Witt sum.
    pub fn evaluate_sum(&self, x: &[RingElem], y: &[RingElem]) -> Result<Vec<RingElem>, WittError> {
        if x.len() != self.n || y.len() != self.n {
            return Err(WittError::InvalidContext(format!(
                "expected {} coordinates each, got {} and {}",
                self.n,
                x.len(),
                y.len()
            )));
        }
        let point: Vec<RingElem> = x.iter().chain(y).cloned().collect();
        self.sums
            .iter()
            .map(|s| poly_eval_in(s, &point).map_err(|e| WittError::InvalidContext(e.to_string())))
            .collect()
    }

    /// Evaluates every `F_k` at concrete coordinates — the polynomial route
    /// to the Frobenius.
    pub fn evaluate_frob(&self, x: &[RingElem]) -> Result<Vec<RingElem>, WittError> {
        if x.len() != self.n {
            return Err(WittError::InvalidContext(format!(
                "expected {} coordinates, got {}",
                self.n,
                x.len()
            )));
        }
        self.frobs
            .iter()
            .map(|f| poly_eval_in(f, x).map_err(|e| WittError::InvalidContext(e.to_string())))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Disk cache
// ---------------------------------------------------------------------------

/// Cache directory: `$WITT_CACHE_DIR`, or `.witt-cache/` under the working
/// directory.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("WITT_CACHE_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => PathBuf::from(".witt-cache"),
    }
}

fn cache_file(dir: &Path) -> PathBuf {
    dir.join("universal-polys.json")
}

fn cache_key(p: u64, n: usize) -> String {
    format!("{p},{n}")
}

/// Loads one `(p, n)` entry from the cache file and verifies its ghost
/// identities; any parse or verification failure reads as a miss.
fn load_from_cache(dir: &Path, p: u64, n: usize) -> Option<UniversalPolySet> {
    let text = std::fs::read_to_string(cache_file(dir)).ok()?;
    let root: Value = serde_json::from_str(&text).ok()?;
    let entry = root.get(cache_key(p, n))?;
    let parse_list = |key: &str, ring: &RingDescriptor| -> Option<Vec<RingElem>> {
        entry
            .get(key)?
            .as_array()?
            .iter()
            .map(|v| RingElem::parse(ring, v.as_str()?).ok())
            .collect()
    };
    let sums = parse_list("sums", &sum_ring(n))?;
    let frobs = parse_list("frobs", &frob_ring(n))?;
    let set = UniversalPolySet { p, n, sums, frobs };
    set.verify().ok()?;
    Some(set)
}

/// Merges one entry into the cache file (read, update, write a sibling temp
/// file, rename over). Serialization uses the element text grammar.
fn store_in_cache(dir: &Path, set: &UniversalPolySet) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = cache_file(dir);
    let mut root: serde_json::Map<String, Value> = std::fs::read_to_string(&path)
        .ok()
        .and_then(|text| serde_json::from_str(&text).ok())
        .unwrap_or_default();
    let to_strings = |polys: &[RingElem]| -> Value {
        Value::Array(polys.iter().map(|s| Value::String(s.to_string())).collect())
    };
    root.insert(
        cache_key(set.p, set.n),
        serde_json::json!({"sums": to_strings(&set.sums), "frobs": to_strings(&set.frobs)}),
    );
    let tmp = dir.join(format!(".universal-polys.{}.tmp", std::process::id()));
    std::fs::write(&tmp, serde_json::to_string_pretty(&Value::Object(root))?)?;
    std::fs::rename(&tmp, &path)
}

/// Returns the polynomials for `(p, n)`, from the given cache directory
/// when a verified entry exists, regenerating (and re-caching, best-effort)
/// otherwise.
pub fn universal_polys_cached_in(dir: &Path, p: u64, n: usize) -> Result<UniversalPolySet, WittError> {
    if let Some(set) = load_from_cache(dir, p, n) {
        return Ok(set);
    }
    let set = generate_universal_polys(p, n)?;
    let _ = store_in_cache(dir, &set); // cache write failure is not an error
    Ok(set)
}

/// [`universal_polys_cached_in`] at the default cache directory.
pub fn universal_polys_cached(p: u64, n: usize) -> Result<UniversalPolySet, WittError> {
    universal_polys_cached_in(&default_cache_dir(), p, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::{frobenius, ghost_map, witt_add, WittContext};
    use num_bigint::BigUint;
    use rand::{Rng, SeedableRng};

    #[test]
    fn small_polynomials_have_expected_shape() {
        let set = generate_universal_polys(3, 2).unwrap();
        assert_eq!(set.sums()[0].to_string(), "X0 + Y0");
        assert_eq!(set.sums()[1].to_string(), "X1 + Y1 - X0^2*Y0 - X0*Y0^2");
        let f0 = RingElem::parse(set.frobs()[0].ring(), "X0^3 + 3*X1").unwrap();
        assert_eq!(set.frobs()[0], f0);
        assert_eq!(set.frobs()[0].to_string(), "3*X1 + X0^3"); // canonical order
    }

    #[test]
    fn generation_sizes() {
        assert!(generate_universal_polys(3, 4).is_ok());
        assert!(generate_universal_polys(5, 3).is_ok());
        assert!(generate_universal_polys(7, 2).is_ok());
        assert!(matches!(
            generate_universal_polys(3, 5),
            Err(WittError::GenerationTooLarge { .. })
        ));
        assert!(matches!(
            generate_universal_polys(7, 3),
            Err(WittError::GenerationTooLarge { .. })
        ));
        assert!(generate_universal_polys(2, 2).is_err());
        assert!(generate_universal_polys(3, 0).is_err());
    }

    #[test]
    fn verify_rejects_tampering() {
        let mut set = generate_universal_polys(3, 2).unwrap();
        assert!(set.verify().is_ok());
        set.sums[1] = set.sums[1].add(&set.sums[1].ring().one());
        assert!(set.verify().is_err());
    }

    fn random_coords(
        ring: &RingDescriptor,
        n: usize,
        rng: &mut impl Rng,
    ) -> Vec<RingElem> {
        (0..n).map(|_| ring.from_int(BigInt::from(rng.gen_range(-20i64..=20)))).collect()
    }

    #[test]
    fn polynomial_route_matches_group_operations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &(p, n) in &[(3u64, 2usize), (3, 3), (3, 4), (5, 2), (5, 3)] {
            let set = generate_universal_polys(p, n).unwrap();
            for ring in [
                RingDescriptor::Integers,
                RingDescriptor::integers_mod(BigUint::from(6u32)).unwrap(),
                RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
            ] {
                let ctx = WittContext::new(p, n, ring.clone()).unwrap();
                for _ in 0..5 {
                    let xs = random_coords(&ring, n, &mut rng);
                    let ys = random_coords(&ring, n, &mut rng);
                    let x = ctx.from_coords(xs.clone()).unwrap();
                    let y = ctx.from_coords(ys.clone()).unwrap();
                    let via_polys = set.evaluate_sum(&xs, &ys).unwrap();
                    assert_eq!(
                        witt_add(&x, &y).unwrap().coords(),
                        via_polys.as_slice(),
                        "sum disagreement at p = {p}, n = {n} over {ring}"
                    );
                    let via_frob = set.evaluate_frob(&xs).unwrap();
                    assert_eq!(
                        frobenius(&x).unwrap().coords(),
                        via_frob.as_slice(),
                        "Frobenius disagreement at p = {p}, n = {n} over {ring}"
                    );
                }
            }
        }
    }

    #[test]
    fn evaluated_sums_satisfy_ghost_identity_symbolically() {
        // Apply S over the polynomial ring to its own variables: the ghost
        // of the result must be the componentwise ghost sum.
        let set = generate_universal_polys(3, 3).unwrap();
        let sring = set.sums()[0].ring().clone();
        let ctx = WittContext::new(3, 3, sring.clone()).unwrap();
        let xs: Vec<RingElem> = (0..3).map(|i| sring.var_elem(i)).collect();
        let ys: Vec<RingElem> = (0..3).map(|i| sring.var_elem(3 + i)).collect();
        let x = ctx.from_coords(xs.clone()).unwrap();
        let y = ctx.from_coords(ys.clone()).unwrap();
        let sum = ctx.from_coords(set.evaluate_sum(&xs, &ys).unwrap()).unwrap();
        let lhs = ghost_map(&sum);
        let rhs = ghost_map(&x).add(&ghost_map(&y)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cache_round_trip_and_corruption_recovery() {
        let dir = tempfile::tempdir().unwrap();
        let fresh = universal_polys_cached_in(dir.path(), 3, 3).unwrap();
        assert!(cache_file(dir.path()).exists());
        let cached = universal_polys_cached_in(dir.path(), 3, 3).unwrap();
        assert_eq!(fresh, cached);

        // A corrupt entry is ignored and regenerated.
        std::fs::write(cache_file(dir.path()), "{\"3,3\": {\"sums\": [\"oops\"]}}").unwrap();
        let recovered = universal_polys_cached_in(dir.path(), 3, 3).unwrap();
        assert_eq!(fresh, recovered);

        // A tampered-but-parseable entry fails verification and is replaced.
        let mut set = generate_universal_polys(3, 2).unwrap();
        set.sums[0] = set.sums[0].ring().var_elem(0); // claims S_0 = X0
        store_in_cache(dir.path(), &set).unwrap();
        let regenerated = universal_polys_cached_in(dir.path(), 3, 2).unwrap();
        assert_eq!(regenerated.sums()[0].to_string(), "X0 + Y0");
    }
}
