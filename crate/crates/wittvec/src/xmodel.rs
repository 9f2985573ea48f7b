//! The shifted-sequence model of the Witt group: the subgroup `X(R)` of the
//! sequence space `R^n` generated by the shifted Teichmüller sequences
//! `V^k⟨r⟩ = p^k·(0,…,0, r, r^p, r^{p^2}, …)`, together with an exact
//! membership/decomposition test over torsion-free rings and the projection
//! that realizes quotients of `X(A)` as honest Witt vectors over a quotient
//! ring of `A`.

use crate::ring::{json_to_int, RingDescriptor, RingElem};
use crate::witt::{
    coord_from_json, coord_to_json, ghost_inverse, int_scale, teich_v_decompose, teichmuller,
    verschiebung, witt_add, GhostVector, WittContext, WittError, WittVector,
};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::Value;
use std::fmt;

/// Errors from sequence-model operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum XError {
    /// A generator level at or past the truncation length.
    LevelOutOfRange { level: usize, len: usize },
    /// The sequence is not in the generated subgroup; carries the smallest
    /// index whose divisibility requirement fails.
    NotMember { index: usize },
    /// The operation is undefined over the given ring.
    UnsupportedRing(String),
    /// Malformed inputs (ring mismatches, bad JSON, arity errors, …).
    InvalidInput(String),
}

impl fmt::Display for XError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XError::LevelOutOfRange { level, len } => {
                write!(f, "level {level} out of range for truncation length {len}")
            }
            XError::NotMember { index } => {
                write!(f, "not a member: divisibility fails at index {index}")
            }
            XError::UnsupportedRing(what) => write!(f, "unsupported ring: {what}"),
            XError::InvalidInput(what) => write!(f, "invalid input: {what}"),
        }
    }
}

impl std::error::Error for XError {}

impl From<WittError> for XError {
    fn from(e: WittError) -> Self {
        match e {
            WittError::NotInImage { index } => XError::NotMember { index },
            WittError::UnsupportedRing(w) => XError::UnsupportedRing(w),
            other => XError::InvalidInput(other.to_string()),
        }
    }
}

/// One symbol `c·V^level⟨elem⟩` of a generator combination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorTerm {
    pub level: usize,
    pub elem: RingElem,
    pub coeff: BigInt,
}

impl GeneratorTerm {
    /// JSON form `{"level": k, "elem": …, "coeff": c}`; the element uses the
    /// text grammar.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "level": self.level,
            "elem": self.elem.to_string(),
            "coeff": crate::ring::int_to_json(&self.coeff),
        })
    }

    /// Inverse of [`GeneratorTerm::to_json`]; the element is read into
    /// `ring` (text string, number, or full element object).
    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<GeneratorTerm, XError> {
        let obj = v
            .as_object()
            .ok_or_else(|| XError::InvalidInput("generator term must be an object".into()))?;
        let level = obj
            .get("level")
            .and_then(Value::as_u64)
            .ok_or_else(|| XError::InvalidInput("generator term needs `level`".into()))?
            as usize;
        let elem = coord_from_json(
            ring,
            obj.get("elem")
                .ok_or_else(|| XError::InvalidInput("generator term needs `elem`".into()))?,
        )
        .map_err(XError::from)?;
        let coeff = match obj.get("coeff") {
            Some(c) => json_to_int(c).map_err(|e| XError::InvalidInput(e.to_string()))?,
            None => BigInt::one(),
        };
        Ok(GeneratorTerm { level, elem, coeff })
    }
}

/// Serializes a generator combination as `[{"level","elem","coeff"}, …]`.
pub fn generator_terms_to_json(terms: &[GeneratorTerm]) -> Value {
    Value::Array(terms.iter().map(GeneratorTerm::to_json).collect())
}

/// Inverse of [`generator_terms_to_json`].
pub fn generator_terms_from_json(
    ring: &RingDescriptor,
    v: &Value,
) -> Result<Vec<GeneratorTerm>, XError> {
    v.as_array()
        .ok_or_else(|| XError::InvalidInput("generator list must be an array".into()))?
        .iter()
        .map(|t| GeneratorTerm::from_json(ring, t))
        .collect()
}

/// An element of the sequence space known to lie in (or be built inside)
/// the generated subgroup, with the generator combination that produced it
/// when one is known.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XElement {
    seq: GhostVector,
    witness: Option<Vec<GeneratorTerm>>,
}

impl XElement {
    pub fn ctx(&self) -> &WittContext {
        self.seq.ctx()
    }

    /// The underlying sequence.
    pub fn seq(&self) -> &GhostVector {
        &self.seq
    }

    /// The generator combination this element was built from, if tracked.
    pub fn witness(&self) -> Option<&[GeneratorTerm]> {
        self.witness.as_deref()
    }

    /// Wraps a raw sequence with no witness.
    pub fn from_seq(seq: GhostVector) -> XElement {
        XElement { seq, witness: None }
    }

    /// Sum in the ambient sequence space; witnesses concatenate.
    pub fn add(&self, other: &XElement) -> Result<XElement, XError> {
        let seq = self.seq.add(&other.seq)?;
        let witness = match (&self.witness, &other.witness) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(XElement { seq, witness })
    }

    /// Negation in the ambient sequence space.
    pub fn neg(&self) -> XElement {
        XElement {
            seq: self.seq.neg(),
            witness: self.witness.as_ref().map(|w| {
                w.iter()
                    .map(|t| GeneratorTerm { coeff: -&t.coeff, ..t.clone() })
                    .collect()
            }),
        }
    }

    /// Integer scaling in the ambient sequence space.
    pub fn scale(&self, c: &BigInt) -> XElement {
        XElement {
            seq: self.seq.scale(c),
            witness: self.witness.as_ref().map(|w| {
                w.iter()
                    .map(|t| GeneratorTerm { coeff: c * &t.coeff, ..t.clone() })
                    .collect()
            }),
        }
    }

    /// Sequence JSON (ghost-tagged).
    pub fn to_json(&self) -> Value {
        self.seq.to_json()
    }
}

/// The generator `V^k⟨r⟩` as a sequence:
/// `p^k · (0^k, r, r^p, …, r^{p^{n−1−k}})`.
pub fn x_generator(ctx: &WittContext, k: usize, r: &RingElem) -> Result<XElement, XError> {
    let n = ctx.len();
    if k >= n {
        return Err(XError::LevelOutOfRange { level: k, len: n });
    }
    if r.ring() != ctx.ring() {
        return Err(XError::InvalidInput(format!(
            "element of {} in a context over {}",
            r.ring(),
            ctx.ring()
        )));
    }
    let pk = num_traits::pow::pow(BigInt::from(ctx.p()), k);
    let mut comps = vec![ctx.ring().zero(); n];
    for (j, comp) in comps.iter_mut().enumerate().skip(k) {
        let e = ctx
            .p()
            .checked_pow((j - k) as u32)
            .expect("ghost exponent fits in u64");
        *comp = r.pow(e).scale(&pk);
    }
    let seq = ctx.ghost_from_comps(comps)?;
    let witness = vec![GeneratorTerm { level: k, elem: r.clone(), coeff: BigInt::one() }];
    Ok(XElement { seq, witness: Some(witness) })
}

/// Decides membership of a sequence in the generated subgroup over a
/// torsion-free ring, returning the unique decomposition `(a_0, …, a_{n−1})`
/// with `seq = Σ_k V^k⟨a_k⟩`, or the smallest index whose divisibility
/// requirement fails.
///
/// The sequence is a member precisely when it is the ghost vector of a Witt
/// vector, so the algorithm inverts the ghost map and reads the
/// decomposition off the Teichmüller–Verschiebung expansion.
pub fn x_membership(seq: &GhostVector) -> Result<Vec<RingElem>, XError> {
    let w = ghost_inverse(seq)?;
    Ok(teich_v_decompose(&w))
}

/// A finitely generated stand-in for the free presentation of a quotient
/// ring: a polynomial ring `A = Z[vars]` (the lift), a target ring `R`, and
/// the ring map `A → R` fixed by the images of the variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    lift: RingDescriptor,
    target: RingDescriptor,
    images: Vec<RingElem>,
}

impl Presentation {
    /// Validates that `lift` is a polynomial ring over the integers and that
    /// there is one target image per variable.
    pub fn new(
        lift: RingDescriptor,
        target: RingDescriptor,
        images: Vec<RingElem>,
    ) -> Result<Presentation, XError> {
        match &lift {
            RingDescriptor::Polynomials { coeff, .. }
                if **coeff == RingDescriptor::Integers => {}
            other => {
                return Err(XError::InvalidInput(format!(
                    "lift must be a polynomial ring over Z, got {other}"
                )))
            }
        }
        if images.len() != lift.nvars() {
            return Err(XError::InvalidInput(format!(
                "{} images for {} variables",
                images.len(),
                lift.nvars()
            )));
        }
        for img in &images {
            if *img.ring() != target {
                return Err(XError::InvalidInput(format!(
                    "image in {} for target {}",
                    img.ring(),
                    target
                )));
            }
        }
        Ok(Presentation { lift, target, images })
    }

    pub fn lift(&self) -> &RingDescriptor {
        &self.lift
    }

    pub fn target(&self) -> &RingDescriptor {
        &self.target
    }

    pub fn images(&self) -> &[RingElem] {
        &self.images
    }

    /// Applies the presentation map `A → R` to a lift element.
    pub fn project(&self, a: &RingElem) -> Result<RingElem, XError> {
        if *a.ring() != self.lift {
            return Err(XError::InvalidInput(format!(
                "element of {} under a presentation lifting {}",
                a.ring(),
                self.lift
            )));
        }
        crate::ring::poly_eval_in(a, &self.images)
            .map_err(|e| XError::InvalidInput(e.to_string()))
    }
}

/// Pushes a generator combination `Σ c_j·V^{k_j}⟨a_j⟩` over the lift down
/// to an honest Witt vector over the target:
/// `Σ c_j·V^{k_j}⟨project(a_j)⟩` computed in `W_n(target)`.
pub fn project_to_w(
    pres: &Presentation,
    p: u64,
    len: usize,
    terms: &[GeneratorTerm],
) -> Result<WittVector, XError> {
    let ctx = WittContext::new(p, len, pres.target.clone())?;
    let mut acc = ctx.zero();
    for t in terms {
        if t.level >= len {
            return Err(XError::LevelOutOfRange { level: t.level, len });
        }
        let image = pres.project(&t.elem)?;
        let mut w = teichmuller(&ctx, &image)?;
        for _ in 0..t.level {
            w = verschiebung(&w);
        }
        acc = witt_add(&acc, &int_scale(&t.coeff, &w))?;
    }
    Ok(acc)
}

/// Evaluates a generator combination inside the ambient sequence space of
/// the lift (no projection): `Σ c_j·x_generator(k_j, a_j)`.
pub fn generator_sum_seq(
    ctx: &WittContext,
    terms: &[GeneratorTerm],
) -> Result<XElement, XError> {
    let zero = XElement {
        seq: ctx.ghost_from_comps(vec![ctx.ring().zero(); ctx.len()])?,
        witness: Some(Vec::new()),
    };
    let mut acc = zero;
    for t in terms {
        let g = x_generator(ctx, t.level, &t.elem)?.scale(&t.coeff);
        acc = acc.add(&g)?;
    }
    Ok(acc)
}

/// Reads a decomposition `(a_0, …, a_{n−1})` as a JSON array (scalar
/// entries as numbers, polynomial entries as text).
pub fn decomposition_to_json(parts: &[RingElem]) -> Value {
    Value::Array(parts.iter().map(coord_to_json).collect())
}
