//! Truncated p-typical Witt vectors `W_n(R)` for odd `p`: the abelian group
//! law, ghost coordinates, Verschiebung, Frobenius, the Teichmüller map, the
//! additive map `phi(x) = V⟨x^p⟩ − p⟨x⟩`, and the greedy
//! Teichmüller–Verschiebung decomposition.
//!
//! Arithmetic is computed through the ghost model on a torsion-free cover:
//! an operand over `Z/m` (or `(Z/m)[t…]`) is lifted coefficientwise to `Z`
//! (resp. `Z[t…]`), the operation is carried out there by inverting the
//! ghost map — every division is exact because the result coincides with an
//! integer-coefficient universal polynomial evaluated at the lifts — and the
//! result is mapped back down. Since those universal polynomials commute
//! with any coefficient ring map, this yields exactly the same coordinates
//! as evaluating them directly, at any truncation length, without ever
//! materializing the polynomials themselves. [`crate::univ`] generates the
//! polynomials explicitly (at sizes where that is tractable) and the tests
//! check the two routes against each other.

use crate::ring::{exact_div_int, lift_to_cover, project_from_cover, RingDescriptor, RingElem};
use crate::ring::{int_to_json, json_to_int};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::Value;
use std::fmt;

/// Errors from Witt vector construction and operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WittError {
    /// Two operands belong to different contexts (p, length, or ring).
    ContextMismatch(String, String),
    /// The operation needs a longer truncation (e.g. Frobenius at length 1).
    TooShort { len: usize },
    /// `ghost_inverse` hit a non-exact division at the given index; the
    /// sequence is not a ghost vector.
    NotInImage { index: usize },
    /// The operation is undefined over the given ring.
    UnsupportedRing(String),
    /// A context invariant is violated (even p, composite p, zero length,
    /// coordinate from the wrong ring, …).
    InvalidContext(String),
    /// Explicit universal polynomial generation was requested at a size
    /// where the result would not fit in memory.
    GenerationTooLarge { p: u64, n: usize },
    /// A division that is mathematically guaranteed to be exact failed;
    /// indicates an implementation bug, never expected input.
    InternalDivisionFailure(String),
}

impl fmt::Display for WittError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WittError::ContextMismatch(a, b) => write!(f, "context mismatch: {a} vs {b}"),
            WittError::TooShort { len } => {
                write!(f, "truncation length {len} too short (need at least 2)")
            }
            WittError::NotInImage { index } => {
                write!(f, "not a ghost vector: division fails at component {index}")
            }
            WittError::UnsupportedRing(what) => write!(f, "unsupported ring: {what}"),
            WittError::InvalidContext(what) => write!(f, "invalid context: {what}"),
            WittError::GenerationTooLarge { p, n } => write!(
                f,
                "universal polynomials for p = {p}, n = {n} are too large to generate; \
                 the group operations themselves have no such limit"
            ),
            WittError::InternalDivisionFailure(what) => {
                write!(f, "internal error: exact division failed unexpectedly ({what})")
            }
        }
    }
}

impl std::error::Error for WittError {}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Fixes the prime, the truncation length, and the base ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittContext {
    p: u64,
    n: usize,
    ring: RingDescriptor,
}

impl WittContext {
    /// Validates `p` (odd prime, so `p ≥ 3`) and `n ≥ 1`.
    pub fn new(p: u64, n: usize, ring: RingDescriptor) -> Result<Self, WittError> {
        if !is_prime(p) || p == 2 {
            return Err(WittError::InvalidContext(format!("p = {p} is not an odd prime")));
        }
        if n == 0 {
            return Err(WittError::InvalidContext("truncation length 0".into()));
        }
        Ok(WittContext { p, n, ring })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Truncation length `n`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    /// Same prime and ring at a different truncation length.
    pub fn with_len(&self, n: usize) -> Result<WittContext, WittError> {
        WittContext::new(self.p, n, self.ring.clone())
    }

    /// Context over the torsion-free cover of the base ring.
    fn cover(&self) -> WittContext {
        WittContext { p: self.p, n: self.n, ring: self.ring.cover() }
    }

    /// The zero vector.
    pub fn zero(&self) -> WittVector {
        WittVector { ctx: self.clone(), coords: vec![self.ring.zero(); self.n] }
    }

    /// Builds a vector from coordinates, checking ring membership.
    pub fn from_coords(&self, coords: Vec<RingElem>) -> Result<WittVector, WittError> {
        if coords.len() != self.n {
            return Err(WittError::InvalidContext(format!(
                "{} coordinates for truncation length {}",
                coords.len(),
                self.n
            )));
        }
        for c in &coords {
            if *c.ring() != self.ring {
                return Err(WittError::InvalidContext(format!(
                    "coordinate from {} in a context over {}",
                    c.ring(),
                    self.ring
                )));
            }
        }
        Ok(WittVector { ctx: self.clone(), coords })
    }

    /// Builds a ghost vector from components, checking ring membership.
    pub fn ghost_from_comps(&self, comps: Vec<RingElem>) -> Result<GhostVector, WittError> {
        let v = self.from_coords(comps)?;
        Ok(GhostVector { ctx: v.ctx, comps: v.coords })
    }
}

impl fmt::Display for WittContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({}) at p = {}", self.n, self.ring, self.p)
    }
}

/// An element of `W_n(R)` in Witt coordinates `(x_0, …, x_{n−1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittVector {
    ctx: WittContext,
    coords: Vec<RingElem>,
}

/// An element of the sequence space `R^n` in ghost coordinates
/// `(w_0, …, w_{n−1})`; the ambient space the shifted-sequence model
/// lives in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhostVector {
    ctx: WittContext,
    comps: Vec<RingElem>,
}

impl WittVector {
    pub fn ctx(&self) -> &WittContext {
        &self.ctx
    }

    pub fn coords(&self) -> &[RingElem] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(RingElem::is_zero)
    }

    /// Drops trailing coordinates down to length `len` (the canonical
    /// projection `W_n(R) → W_len(R)` of the truncation tower).
    pub fn truncate(&self, len: usize) -> Result<WittVector, WittError> {
        if len == 0 || len > self.ctx.n {
            return Err(WittError::InvalidContext(format!(
                "cannot truncate length {} to {len}",
                self.ctx.n
            )));
        }
        Ok(WittVector {
            ctx: self.ctx.with_len(len)?,
            coords: self.coords[..len].to_vec(),
        })
    }
}

impl GhostVector {
    pub fn ctx(&self) -> &WittContext {
        &self.ctx
    }

    pub fn comps(&self) -> &[RingElem] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RingElem::is_zero)
    }

    /// Componentwise sum (the group law of the ambient sequence space).
    pub fn add(&self, other: &GhostVector) -> Result<GhostVector, WittError> {
        check_ctx(&self.ctx, &other.ctx)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(GhostVector { ctx: self.ctx.clone(), comps })
    }

    /// Componentwise negation.
    pub fn neg(&self) -> GhostVector {
        GhostVector {
            ctx: self.ctx.clone(),
            comps: self.comps.iter().map(RingElem::neg).collect(),
        }
    }

    /// Componentwise integer scaling.
    pub fn scale(&self, c: &BigInt) -> GhostVector {
        GhostVector {
            ctx: self.ctx.clone(),
            comps: self.comps.iter().map(|w| w.scale(c)).collect(),
        }
    }
}

fn check_ctx(a: &WittContext, b: &WittContext) -> Result<(), WittError> {
    if a != b {
        return Err(WittError::ContextMismatch(a.to_string(), b.to_string()));
    }
    Ok(())
}

/// The `k`-th ghost polynomial evaluated at `coords[0..=k]`:
/// `w_k = Σ_{i=0}^{k} p^i · x_i^{p^{k−i}}`.
pub(crate) fn ghost_component(p: u64, coords: &[RingElem]) -> RingElem {
    let k = coords.len() - 1;
    let ring = coords[0].ring().clone();
    let mut acc = ring.zero();
    let mut p_pow_i = BigInt::from(1);
    for (i, x) in coords.iter().enumerate() {
        let e = p
            .checked_pow((k - i) as u32)
            .expect("ghost exponent fits in u64");
        acc = acc.add(&x.pow(e).scale(&p_pow_i));
        p_pow_i *= p;
    }
    acc
}

/// Ghost coordinates of a Witt vector: `w_k = Σ_{i≤k} p^i · x_i^{p^{k−i}}`,
/// evaluated exactly in the base ring.
pub fn ghost_map(x: &WittVector) -> GhostVector {
    let comps = (0..x.ctx.n)
        .map(|k| ghost_component(x.ctx.p, &x.coords[..=k]))
        .collect();
    GhostVector { ctx: x.ctx.clone(), comps }
}

/// Inverts the ghost map over a torsion-free ring by the exact-division
/// recursion `x_k = (g_k − Σ_{i<k} p^i · x_i^{p^{k−i}}) / p^k`; fails with
/// [`WittError::NotInImage`] at the first non-exact division.
pub fn ghost_inverse(g: &GhostVector) -> Result<WittVector, WittError> {
    if !g.ctx.ring.is_torsion_free() {
        return Err(WittError::UnsupportedRing(format!(
            "ghost inversion over {} (not torsion-free)",
            g.ctx.ring
        )));
    }
    let p = g.ctx.p;
    let mut coords: Vec<RingElem> = Vec::with_capacity(g.ctx.n);
    let mut p_pow_k = BigInt::from(1);
    for (k, gk) in g.comps.iter().enumerate() {
        let mut rest = gk.clone();
        let mut p_pow_i = BigInt::from(1);
        for (i, x) in coords.iter().enumerate() {
            let e = p.checked_pow((k - i) as u32).expect("ghost exponent fits in u64");
            rest = rest.sub(&x.pow(e).scale(&p_pow_i));
            p_pow_i *= p;
        }
        let xk = exact_div_int(&rest, &p_pow_k)
            .map_err(|_| WittError::NotInImage { index: k })?;
        coords.push(xk);
        p_pow_k *= p;
    }
    Ok(WittVector { ctx: g.ctx.clone(), coords })
}

/// Lifts a vector to the torsion-free cover of its base ring.
fn lift_vector(x: &WittVector) -> WittVector {
    WittVector {
        ctx: x.ctx.cover(),
        coords: x.coords.iter().map(lift_to_cover).collect(),
    }
}

/// Projects a vector over the cover back onto the original context.
fn project_vector(ctx: &WittContext, x: &WittVector) -> WittVector {
    WittVector {
        ctx: ctx.clone(),
        coords: x
            .coords
            .iter()
            .map(|c| project_from_cover(&ctx.ring, c))
            .collect(),
    }
}

/// Runs `f` on the ghost side over the torsion-free cover and projects the
/// result back. The inversion cannot fail: the result is the evaluation of
/// integer-coefficient universal polynomials at the lifted coordinates.
fn via_ghost<F>(ctx: &WittContext, inputs: &[&WittVector], f: F) -> WittVector
where
    F: FnOnce(&[GhostVector]) -> Vec<RingElem>,
{
    let lifted: Vec<GhostVector> = inputs.iter().map(|x| ghost_map(&lift_vector(x))).collect();
    let comps = f(&lifted);
    let cover = GhostVector { ctx: ctx.cover(), comps };
    let result = ghost_inverse(&cover).expect("universal polynomial values are integral");
    project_vector(ctx, &result)
}

/// Group law of `W_n(R)`: the coordinates of the sum are the universal sum
/// polynomials evaluated at `(x, y)`, here obtained through the ghost model
/// over the torsion-free cover.
pub fn witt_add(x: &WittVector, y: &WittVector) -> Result<WittVector, WittError> {
    check_ctx(&x.ctx, &y.ctx)?;
    Ok(via_ghost(&x.ctx, &[x, y], |g| {
        g[0].comps
            .iter()
            .zip(&g[1].comps)
            .map(|(a, b)| a.add(b))
            .collect()
    }))
}

/// Additive inverse; coordinatewise negation for odd `p`.
pub fn witt_neg(x: &WittVector) -> WittVector {
    WittVector {
        ctx: x.ctx.clone(),
        coords: x.coords.iter().map(RingElem::neg).collect(),
    }
}

/// `c·x` in the group, by double-and-add on [`witt_add`].
pub fn int_scale(c: &BigInt, x: &WittVector) -> WittVector {
    let mut c = c.clone();
    let negate = c.is_negative();
    if negate {
        c = -c;
    }
    let mut acc = x.ctx.zero();
    let mut base = x.clone();
    while !c.is_zero() {
        if c.bit(0) {
            acc = witt_add(&acc, &base).expect("same context");
        }
        c >>= 1;
        if !c.is_zero() {
            base = witt_add(&base, &base).expect("same context");
        }
    }
    if negate {
        witt_neg(&acc)
    } else {
        acc
    }
}

/// Verschiebung: the right shift `(0, x_0, …, x_{n−2})` on Witt
/// coordinates; on ghost components it is `p·(0, w_0, …, w_{n−2})`.
pub fn verschiebung(x: &WittVector) -> WittVector {
    let mut coords = Vec::with_capacity(x.ctx.n);
    coords.push(x.ctx.ring.zero());
    coords.extend_from_slice(&x.coords[..x.ctx.n - 1]);
    WittVector { ctx: x.ctx.clone(), coords }
}

/// Frobenius `W_n(R) → W_{n−1}(R)`: shifts the ghost components left by
/// one. Characterized by `F⟨x⟩ = ⟨x^p⟩` and `FV = p`.
pub fn frobenius(x: &WittVector) -> Result<WittVector, WittError> {
    if x.ctx.n < 2 {
        return Err(WittError::TooShort { len: x.ctx.n });
    }
    let out_ctx = x.ctx.with_len(x.ctx.n - 1)?;
    Ok(via_ghost(&out_ctx, &[x], |g| g[0].comps[1..].to_vec()))
}

/// Teichmüller representative `⟨r⟩ = (r, 0, …, 0)`; its ghost vector is
/// `(r, r^p, r^{p^2}, …)`.
pub fn teichmuller(ctx: &WittContext, r: &RingElem) -> Result<WittVector, WittError> {
    if *r.ring() != ctx.ring {
        return Err(WittError::InvalidContext(format!(
            "element of {} in a context over {}",
            r.ring(),
            ctx.ring
        )));
    }
    let mut coords = vec![ctx.ring.zero(); ctx.n];
    coords[0] = r.clone();
    Ok(WittVector { ctx: ctx.clone(), coords })
}

/// The additive map `phi(x) = V⟨x^p⟩ − p⟨x⟩`; its ghost vector is
/// `(−p·x, 0, …, 0)`, which is why `phi(x+y) = phi(x) + phi(y)` over every
/// ring.
pub fn phi(ctx: &WittContext, x: &RingElem) -> Result<WittVector, WittError> {
    let tx = teichmuller(ctx, x)?;
    let txp = teichmuller(ctx, &x.pow(ctx.p))?;
    witt_add(
        &verschiebung(&txp),
        &witt_neg(&int_scale(&BigInt::from(ctx.p), &tx)),
    )
}

/// Greedy Teichmüller–Verschiebung decomposition: returns `(b_0, …,
/// b_{n−1})` with `x = Σ_k V^k⟨b_k⟩`. Works over any base ring: after
/// subtracting `⟨x_0⟩` the first coordinate vanishes identically (the
/// universal sum polynomial `S_0` is `X_0 + Y_0`), so one `V` can be
/// stripped and the tail recursed on.
pub fn teich_v_decompose(x: &WittVector) -> Vec<RingElem> {
    let mut out = Vec::with_capacity(x.ctx.n);
    let mut rest = x.clone();
    loop {
        let b = rest.coords[0].clone();
        let n = rest.ctx.n;
        out.push(b.clone());
        if n == 1 {
            break;
        }
        let t = teichmuller(&rest.ctx, &b).expect("same ring");
        let reduced = witt_add(&rest, &witt_neg(&t)).expect("same context");
        debug_assert!(reduced.coords[0].is_zero(), "S_0 = X_0 + Y_0 clears coordinate 0");
        let tail_ctx = rest.ctx.with_len(n - 1).expect("n ≥ 2");
        rest = WittVector { ctx: tail_ctx, coords: reduced.coords[1..].to_vec() };
    }
    out
}

/// Recomposes a decomposition: `Σ_k V^k⟨b_k⟩` in the given context.
pub fn recompose(ctx: &WittContext, parts: &[RingElem]) -> Result<WittVector, WittError> {
    let mut acc = ctx.zero();
    for (k, b) in parts.iter().enumerate() {
        if k >= ctx.n {
            break;
        }
        let mut v = teichmuller(ctx, b)?;
        for _ in 0..k {
            v = verschiebung(&v);
        }
        acc = witt_add(&acc, &v)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

pub(crate) fn coord_to_json(c: &RingElem) -> Value {
    match c.as_scalar() {
        Some(v) => int_to_json(v),
        None => Value::String(c.to_string()),
    }
}

pub(crate) fn coord_from_json(ring: &RingDescriptor, v: &Value) -> Result<RingElem, WittError> {
    let as_ring_err = |e: crate::ring::RingError| WittError::InvalidContext(e.to_string());
    match v {
        Value::String(s) => RingElem::parse(ring, s).map_err(as_ring_err),
        Value::Object(_) => {
            let e = RingElem::from_json(v).map_err(as_ring_err)?;
            if e.ring() != ring {
                return Err(WittError::InvalidContext(format!(
                    "coordinate from {} in a vector over {}",
                    e.ring(),
                    ring
                )));
            }
            Ok(e)
        }
        _ => {
            let n = json_to_int(v).map_err(as_ring_err)?;
            Ok(ring.from_int(n))
        }
    }
}

fn vector_json(ctx: &WittContext, coords: &[RingElem], model: Option<&str>) -> Value {
    let mut obj = serde_json::Map::new();
    if let Some(m) = model {
        obj.insert("model".into(), Value::String(m.into()));
    }
    obj.insert("p".into(), serde_json::json!(ctx.p));
    obj.insert("len".into(), serde_json::json!(ctx.n));
    obj.insert("ring".into(), ctx.ring.to_json());
    obj.insert("coords".into(), Value::Array(coords.iter().map(coord_to_json).collect()));
    Value::Object(obj)
}

fn vector_from_json(v: &Value, expect_model: Option<&str>) -> Result<(WittContext, Vec<RingElem>), WittError> {
    let obj = v
        .as_object()
        .ok_or_else(|| WittError::InvalidContext("vector JSON must be an object".into()))?;
    let model = obj.get("model").and_then(Value::as_str);
    match (model, expect_model) {
        (Some(m), Some(e)) if m == e => {}
        (None, None) => {}
        (got, want) => {
            return Err(WittError::InvalidContext(format!(
                "model tag {got:?} where {want:?} was expected"
            )))
        }
    }
    let p = obj
        .get("p")
        .and_then(Value::as_u64)
        .ok_or_else(|| WittError::InvalidContext("vector JSON needs `p`".into()))?;
    let n = obj
        .get("len")
        .and_then(Value::as_u64)
        .ok_or_else(|| WittError::InvalidContext("vector JSON needs `len`".into()))?;
    let ring = RingDescriptor::from_json(
        obj.get("ring")
            .ok_or_else(|| WittError::InvalidContext("vector JSON needs `ring`".into()))?,
    )
    .map_err(|e| WittError::InvalidContext(e.to_string()))?;
    let ctx = WittContext::new(p, n as usize, ring)?;
    let coords = obj
        .get("coords")
        .and_then(Value::as_array)
        .ok_or_else(|| WittError::InvalidContext("vector JSON needs `coords`".into()))?
        .iter()
        .map(|c| coord_from_json(&ctx.ring, c))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != ctx.n {
        return Err(WittError::InvalidContext(format!(
            "{} coordinates for length {}",
            coords.len(),
            ctx.n
        )));
    }
    Ok((ctx, coords))
}

impl WittVector {
    /// JSON encoding `{"p": …, "len": …, "ring": …, "coords": […]}`; scalar
    /// coordinates are numbers, polynomial coordinates text-grammar strings.
    pub fn to_json(&self) -> Value {
        vector_json(&self.ctx, &self.coords, None)
    }

    /// Just the coordinate array (`[2,-2]`), without the context envelope.
    pub fn coords_to_json(&self) -> Value {
        Value::Array(self.coords.iter().map(coord_to_json).collect())
    }

    /// Inverse of [`WittVector::to_json`].
    pub fn from_json(v: &Value) -> Result<WittVector, WittError> {
        let (ctx, coords) = vector_from_json(v, None)?;
        Ok(WittVector { ctx, coords })
    }
}

impl GhostVector {
    /// Like the Witt vector encoding, tagged with `"model": "ghost"`.
    pub fn to_json(&self) -> Value {
        vector_json(&self.ctx, &self.comps, Some("ghost"))
    }

    /// Just the component array, without the context envelope.
    pub fn comps_to_json(&self) -> Value {
        Value::Array(self.comps.iter().map(coord_to_json).collect())
    }

    /// Inverse of [`GhostVector::to_json`].
    pub fn from_json(v: &Value) -> Result<GhostVector, WittError> {
        let (ctx, comps) = vector_from_json(v, Some("ghost"))?;
        Ok(GhostVector { ctx, comps })
    }
}

/// Parses a coordinate array (`[1,0]`, entries numbers or element text)
/// into a vector in the given context.
pub fn coords_from_arg(ctx: &WittContext, arg: &str) -> Result<WittVector, WittError> {
    let v: Value = serde_json::from_str(arg)
        .map_err(|e| WittError::InvalidContext(format!("bad coordinate array: {e}")))?;
    match &v {
        Value::Array(items) => {
            let coords = items
                .iter()
                .map(|c| coord_from_json(&ctx.ring, c))
                .collect::<Result<Vec<_>, _>>()?;
            ctx.from_coords(coords)
        }
        Value::Object(_) => {
            let w = WittVector::from_json(&v)?;
            check_ctx(ctx, &w.ctx)?;
            Ok(w)
        }
        _ => Err(WittError::InvalidContext("expected a coordinate array".into())),
    }
}

/// Parses a component array (entries numbers or element text) into a
/// ghost-side sequence in the given context.
pub fn ghost_from_arg(ctx: &WittContext, arg: &str) -> Result<GhostVector, WittError> {
    let v: Value = serde_json::from_str(arg)
        .map_err(|e| WittError::InvalidContext(format!("bad component array: {e}")))?;
    match &v {
        Value::Array(items) => {
            let comps = items
                .iter()
                .map(|c| coord_from_json(&ctx.ring, c))
                .collect::<Result<Vec<_>, _>>()?;
            ctx.ghost_from_comps(comps)
        }
        Value::Object(_) => {
            let g = GhostVector::from_json(&v)?;
            check_ctx(ctx, &g.ctx)?;
            Ok(g)
        }
        _ => Err(WittError::InvalidContext("expected a component array".into())),
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for GhostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ghost[")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn zz() -> RingDescriptor {
        RingDescriptor::Integers
    }

    fn zmod(m: u32) -> RingDescriptor {
        RingDescriptor::integers_mod(BigUint::from(m)).unwrap()
    }

    fn ctx(p: u64, n: usize, ring: RingDescriptor) -> WittContext {
        WittContext::new(p, n, ring).unwrap()
    }

    fn wvec(c: &WittContext, coords: &[i64]) -> WittVector {
        c.from_coords(coords.iter().map(|&v| c.ring().from_int(BigInt::from(v))).collect())
            .unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(WittContext::new(2, 3, zz()).is_err());
        assert!(WittContext::new(9, 3, zz()).is_err());
        assert!(WittContext::new(3, 0, zz()).is_err());
        assert!(WittContext::new(3, 1, zz()).is_ok());
    }

    #[test]
    fn ghost_of_teichmuller() {
        let c = ctx(3, 3, zz());
        let r = c.ring().from_int(BigInt::from(2));
        let t = teichmuller(&c, &r).unwrap();
        let g = ghost_map(&t);
        let expect: Vec<BigInt> = vec![2.into(), 8.into(), 512.into()];
        let got: Vec<BigInt> = g.comps().iter().map(|w| w.as_scalar().unwrap().clone()).collect();
        assert_eq!(got, expect); // (r, r^3, r^9) at r = 2
    }

    #[test]
    fn ghost_small_values() {
        let c = ctx(3, 2, zz());
        let g = ghost_map(&wvec(&c, &[0, 1]));
        assert_eq!(g.comps()[1].as_scalar().unwrap(), &BigInt::from(3));
        let g = ghost_map(&wvec(&c, &[2, -2]));
        let got: Vec<BigInt> = g.comps().iter().map(|w| w.as_scalar().unwrap().clone()).collect();
        assert_eq!(got, vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn ghost_inverse_round_trip_and_failure() {
        let c = ctx(3, 2, zz());
        let g = c
            .ghost_from_comps(vec![c.ring().from_int(2.into()), c.ring().from_int(2.into())])
            .unwrap();
        assert_eq!(ghost_inverse(&g).unwrap(), wvec(&c, &[2, -2]));

        let bad = c
            .ghost_from_comps(vec![c.ring().from_int(0.into()), c.ring().from_int(1.into())])
            .unwrap();
        assert_eq!(ghost_inverse(&bad), Err(WittError::NotInImage { index: 1 }));

        let torsion = ctx(3, 2, zmod(9));
        let g = torsion
            .ghost_from_comps(vec![torsion.ring().zero(), torsion.ring().zero()])
            .unwrap();
        assert!(matches!(ghost_inverse(&g), Err(WittError::UnsupportedRing(_))));
    }

    #[test]
    fn addition_over_integers_and_mod9() {
        let c = ctx(3, 2, zz());
        let one = wvec(&c, &[1, 0]);
        assert_eq!(witt_add(&one, &one).unwrap(), wvec(&c, &[2, -2]));

        let c9 = ctx(3, 2, zmod(9));
        let one9 = wvec(&c9, &[1, 0]);
        assert_eq!(witt_add(&one9, &one9).unwrap(), wvec(&c9, &[2, 7]));
    }

    #[test]
    fn identity_and_inverse() {
        let c = ctx(3, 3, zmod(6));
        let x = wvec(&c, &[4, 1, 5]);
        assert_eq!(witt_add(&x, &c.zero()).unwrap(), x);
        assert!(witt_add(&x, &witt_neg(&x)).unwrap().is_zero());
    }

    #[test]
    fn negation_example() {
        let c = ctx(3, 2, zz());
        let x = wvec(&c, &[1, 2]);
        assert_eq!(witt_neg(&x), wvec(&c, &[-1, -2]));
        assert!(witt_add(&x, &witt_neg(&x)).unwrap().is_zero());
    }

    #[test]
    fn scaling_examples() {
        let c = ctx(3, 2, zz());
        let t1 = teichmuller(&c, &c.ring().one()).unwrap();
        assert_eq!(int_scale(&BigInt::from(3), &t1), wvec(&c, &[3, -8]));
        assert_eq!(int_scale(&BigInt::from(0), &t1), c.zero());
        assert_eq!(int_scale(&BigInt::from(-1), &t1), witt_neg(&t1));
        assert_eq!(int_scale(&BigInt::from(1), &t1), t1);
    }

    #[test]
    fn verschiebung_shape_and_ghost() {
        let c = ctx(3, 3, zz());
        let r = c.ring().from_int(2.into());
        let v = verschiebung(&teichmuller(&c, &r).unwrap());
        assert_eq!(v, wvec(&c, &[0, 2, 0]));
        let g = ghost_map(&v);
        let got: Vec<BigInt> = g.comps().iter().map(|w| w.as_scalar().unwrap().clone()).collect();
        assert_eq!(got, vec![BigInt::from(0), BigInt::from(6), BigInt::from(24)]); // (0, 3r, 3r^3)
    }

    #[test]
    fn frobenius_on_teichmuller_and_fv() {
        let c = ctx(3, 3, zmod(9));
        let r = c.ring().from_int(5.into());
        let f = frobenius(&teichmuller(&c, &r).unwrap()).unwrap();
        let expect = teichmuller(&c.with_len(2).unwrap(), &r.pow(3)).unwrap();
        assert_eq!(f, expect);

        let x = wvec(&c, &[2, 7, 3]);
        let fv = frobenius(&verschiebung(&x)).unwrap();
        let px = int_scale(&BigInt::from(3), &x.truncate(2).unwrap());
        assert_eq!(fv, px);

        let short = ctx(3, 1, zz());
        assert!(matches!(
            frobenius(&short.zero()),
            Err(WittError::TooShort { len: 1 })
        ));
    }

    #[test]
    fn phi_examples() {
        let c = ctx(3, 2, zz());
        assert!(phi(&c, &c.ring().zero()).unwrap().is_zero());
        let p1 = phi(&c, &c.ring().one()).unwrap();
        assert_eq!(p1, wvec(&c, &[-3, 9]));
        let g: Vec<BigInt> = ghost_map(&p1)
            .comps()
            .iter()
            .map(|w| w.as_scalar().unwrap().clone())
            .collect();
        assert_eq!(g, vec![BigInt::from(-3), BigInt::from(0)]);
    }

    #[test]
    fn phi_ghost_shape_symbolically() {
        // Over Z[x] the ghost of phi(x) is (−p·x, 0, …, 0) as polynomials.
        let ring = RingDescriptor::polynomials(vec!["x".into()], zz()).unwrap();
        let c = ctx(3, 3, ring.clone());
        let x = ring.var_elem(0);
        let g = ghost_map(&phi(&c, &x).unwrap());
        assert_eq!(g.comps()[0], x.scale(&BigInt::from(-3)));
        assert!(g.comps()[1].is_zero());
        assert!(g.comps()[2].is_zero());
    }

    #[test]
    fn phi_additive_over_torsion_ring() {
        let c = ctx(3, 3, zmod(6));
        for (a, b) in [(2i64, 5i64), (3, 3), (1, 4)] {
            let a = c.ring().from_int(a.into());
            let b = c.ring().from_int(b.into());
            let lhs = phi(&c, &a.add(&b)).unwrap();
            let rhs = witt_add(&phi(&c, &a).unwrap(), &phi(&c, &b).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn decomposition_round_trip() {
        let c = ctx(3, 2, zz());
        let x = wvec(&c, &[2, -2]);
        let parts = teich_v_decompose(&x);
        assert_eq!(parts[0].as_scalar().unwrap(), &BigInt::from(2));
        assert_eq!(recompose(&c, &parts).unwrap(), x);

        let c6 = ctx(3, 4, zmod(6));
        let y = wvec(&c6, &[5, 0, 3, 2]);
        assert_eq!(recompose(&c6, &teich_v_decompose(&y)).unwrap(), y);

        let t = teichmuller(&c, &c.ring().from_int(7.into())).unwrap();
        let parts = teich_v_decompose(&t);
        assert_eq!(parts[0].as_scalar().unwrap(), &BigInt::from(7));
        assert!(parts[1].is_zero());
    }

    #[test]
    fn json_round_trips() {
        let c = ctx(3, 2, RingDescriptor::polynomials(vec!["t".into()], zmod(9)).unwrap());
        let t = c.ring().var_elem(0);
        let x = c.from_coords(vec![t.clone(), t.pow(2).scale(&BigInt::from(5))]).unwrap();
        let back = WittVector::from_json(&x.to_json()).unwrap();
        assert_eq!(x, back);

        let g = ghost_map(&x);
        let back = GhostVector::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
        assert!(WittVector::from_json(&g.to_json()).is_err()); // model tag is checked
    }

    #[test]
    fn coordinate_argument_parsing() {
        let c = ctx(3, 2, zz());
        assert_eq!(coords_from_arg(&c, "[1,0]").unwrap(), wvec(&c, &[1, 0]));
        let cp = ctx(3, 2, RingDescriptor::polynomials(vec!["t".into()], zz()).unwrap());
        let w = coords_from_arg(&cp, "[\"2*t\", \"t^2 - 1\"]").unwrap();
        assert_eq!(w.coords()[0].to_string(), "2*t");
        assert!(coords_from_arg(&c, "[1]").is_err());
    }

    #[test]
    fn truncation_commutes_with_operations() {
        let c = ctx(5, 4, zmod(9));
        let x = wvec(&c, &[7, 2, 8, 1]);
        let y = wvec(&c, &[3, 5, 0, 6]);
        let t = |w: &WittVector| w.truncate(3).unwrap();
        assert_eq!(t(&witt_add(&x, &y).unwrap()), witt_add(&t(&x), &t(&y)).unwrap());
        assert_eq!(t(&witt_neg(&x)), witt_neg(&t(&x)));
        assert_eq!(t(&verschiebung(&x)), verschiebung(&t(&x)));
    }
}
