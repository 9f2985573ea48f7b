//! Free abelian combinations of shift symbols `V^n_a` over a polynomial
//! ring, the relation subgroup cut out by additivity and sign generators,
//! and a decision procedure for membership in its p-saturation.
//!
//! The additive theory is generated by two families of relations among the
//! symbols: for every `r` the sign relation `V^n_r + V^n_{−r}`, and for
//! every pair `x, y` the additivity relation of the map
//! `φ(a) = V^1_{a^p} − p·V^0_a`, shifted to level `n ≥ 1`.  A
//! [`RelationCertificate`] exhibits `p^k·α` as an explicit integer
//! combination of expanded generators, so any third party can re-expand and
//! confirm membership without trusting this crate's algebra.  [`reduce`]
//! either produces such a certificate or a nonzero component of the
//! evaluated sequence that no relation combination can produce.

use crate::ring::{int_to_json, json_to_int, RingDescriptor, RingElem};
use crate::witt::{coord_from_json, GhostVector, WittContext, WittError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;
use std::collections::BTreeMap;
use std::fmt;

/// Errors from formal-sum and certificate operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationError {
    /// The operation needs a polynomial ring over the integers.
    UnsupportedRing(String),
    /// A generator that violates its own well-formedness conditions.
    InvalidGenerator(String),
    /// Malformed user input (bad prime, ring mismatch, …).
    InvalidInput(String),
    /// Text or JSON that does not follow the grammar.
    Parse(String),
    /// An internal invariant failed; never expected on valid inputs.
    Internal(String),
}

impl fmt::Display for RelationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationError::UnsupportedRing(what) => write!(f, "unsupported ring: {what}"),
            RelationError::InvalidGenerator(what) => write!(f, "invalid generator: {what}"),
            RelationError::InvalidInput(what) => write!(f, "invalid input: {what}"),
            RelationError::Parse(what) => write!(f, "parse error: {what}"),
            RelationError::Internal(what) => write!(f, "internal error: {what}"),
        }
    }
}

impl std::error::Error for RelationError {}

impl From<WittError> for RelationError {
    fn from(e: WittError) -> Self {
        match e {
            WittError::UnsupportedRing(w) => RelationError::UnsupportedRing(w),
            other => RelationError::InvalidInput(other.to_string()),
        }
    }
}

fn require_poly_over_z(ring: &RingDescriptor) -> Result<(), RelationError> {
    match ring {
        RingDescriptor::Polynomials { coeff, .. } if **coeff == RingDescriptor::Integers => Ok(()),
        other => Err(RelationError::UnsupportedRing(format!(
            "formal sums need a polynomial ring over Z, got {other}"
        ))),
    }
}

fn require_odd_prime(p: u64) -> Result<(), RelationError> {
    if p >= 3 && p % 2 == 1 && crate::witt::is_prime(p) {
        Ok(())
    } else {
        Err(RelationError::InvalidInput(format!("p = {p} is not an odd prime")))
    }
}

/// Coefficient of the graded-lexicographically largest monomial.  Used to
/// pick the canonical representative of each `{a, −a}` pair: the one whose
/// leading coefficient is positive.
fn leading_coeff(e: &RingElem) -> BigInt {
    if let Some(s) = e.as_scalar() {
        return s.clone();
    }
    e.terms()
        .max_by(|(ea, _), (eb, _)| {
            let da: u64 = ea.iter().map(|&x| u64::from(x)).sum();
            let db: u64 = eb.iter().map(|&x| u64::from(x)).sum();
            da.cmp(&db).then_with(|| ea.cmp(eb))
        })
        .map(|(_, c)| c.clone())
        .unwrap_or_else(BigInt::zero)
}

/// An integer-linear combination of symbols `V^level_elem` over a fixed
/// polynomial ring.  `V^n_0` is identified with zero, so no term with a
/// zero element is ever stored; zero coefficients are dropped as well.
///
/// No sign identification happens on its own: `V^n_r` and `V^n_{−r}` are
/// distinct symbols until [`normalize_signs`] merges them, so the
/// expansions of the relation generators are represented faithfully.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSum {
    ring: RingDescriptor,
    terms: BTreeMap<(usize, RingElem), BigInt>,
}

impl FormalSum {
    /// The empty sum over `ring`, which must be a polynomial ring over the
    /// integers.
    pub fn new(ring: RingDescriptor) -> Result<FormalSum, RelationError> {
        require_poly_over_z(&ring)?;
        Ok(FormalSum { ring, terms: BTreeMap::new() })
    }

    /// Builds a sum from `(level, elem, coeff)` triples.
    pub fn from_terms<I>(ring: RingDescriptor, terms: I) -> Result<FormalSum, RelationError>
    where
        I: IntoIterator<Item = (usize, RingElem, BigInt)>,
    {
        let mut sum = FormalSum::new(ring)?;
        for (level, elem, coeff) in terms {
            if *elem.ring() != sum.ring {
                return Err(RelationError::InvalidInput(format!(
                    "term element in {} for a sum over {}",
                    elem.ring(),
                    sum.ring
                )));
            }
            sum.add_term(level, elem, &coeff);
        }
        Ok(sum)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms (distinct `(level, elem)` symbols).
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates stored terms in `(level, elem)` key order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &RingElem, &BigInt)> {
        self.terms.iter().map(|((l, e), c)| (*l, e, c))
    }

    /// Coefficient of the symbol `V^level_elem` (zero when absent).
    pub fn coeff(&self, level: usize, elem: &RingElem) -> BigInt {
        self.terms
            .get(&(level, elem.clone()))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// Adds `coeff·V^level_elem`, identifying `V^level_0` with zero and
    /// dropping terms whose accumulated coefficient vanishes.
    pub fn add_term(&mut self, level: usize, elem: RingElem, coeff: &BigInt) {
        assert_eq!(
            elem.ring(),
            &self.ring,
            "formal-sum term from a different ring"
        );
        if elem.is_zero() || coeff.is_zero() {
            return;
        }
        let key = (level, elem);
        let entry = self.terms.entry(key).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            let key = self
                .terms
                .iter()
                .find(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .expect("zero entry present");
            self.terms.remove(&key);
        }
    }

    /// Sum of two combinations over the same ring.
    pub fn add(&self, other: &FormalSum) -> Result<FormalSum, RelationError> {
        if self.ring != other.ring {
            return Err(RelationError::InvalidInput(format!(
                "sum over {} added to a sum over {}",
                self.ring, other.ring
            )));
        }
        let mut out = self.clone();
        for ((level, elem), c) in &other.terms {
            out.add_term(*level, elem.clone(), c);
        }
        Ok(out)
    }

    /// Negation.
    pub fn neg(&self) -> FormalSum {
        FormalSum {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    /// Integer scaling; scaling by zero empties the sum.
    pub fn scale(&self, c: &BigInt) -> FormalSum {
        if c.is_zero() {
            return FormalSum { ring: self.ring.clone(), terms: BTreeMap::new() };
        }
        FormalSum {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, cc)| (k.clone(), c * cc)).collect(),
        }
    }

    /// Smallest level with a term, if any.
    pub fn min_level(&self) -> Option<usize> {
        self.terms.keys().map(|(l, _)| *l).min()
    }

    /// Largest level with a term, if any.
    pub fn max_level(&self) -> Option<usize> {
        self.terms.keys().map(|(l, _)| *l).max()
    }

    /// The terms at one level, in element order.
    pub fn level_terms(&self, level: usize) -> Vec<(RingElem, BigInt)> {
        self.terms
            .iter()
            .filter(|((l, _), _)| *l == level)
            .map(|((_, e), c)| (e.clone(), c.clone()))
            .collect()
    }

    /// Shifts every level down by `m`; requires every level ≥ `m`.
    fn shift_down(&self, m: usize) -> FormalSum {
        FormalSum {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|((l, e), c)| {
                    debug_assert!(*l >= m, "shift below level zero");
                    ((*l - m, e.clone()), c.clone())
                })
                .collect(),
        }
    }

    /// Terms sorted for display and serialization: levels ascending, and
    /// within one level elements in descending order.
    fn sorted_terms(&self) -> Vec<(usize, &RingElem, &BigInt)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|(la, ea, _), (lb, eb, _)| la.cmp(lb).then_with(|| eb.cmp(ea)));
        v
    }

    /// JSON form `[{"level": n, "elem": "…", "coeff": c}, …]` with elements
    /// in the text grammar.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.sorted_terms()
                .into_iter()
                .map(|(level, elem, coeff)| {
                    serde_json::json!({
                        "level": level,
                        "elem": elem.to_string(),
                        "coeff": int_to_json(coeff),
                    })
                })
                .collect(),
        )
    }

    /// Inverse of [`FormalSum::to_json`]; elements are accepted as text
    /// strings, plain numbers, or full element objects.
    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<FormalSum, RelationError> {
        let arr = v
            .as_array()
            .ok_or_else(|| RelationError::Parse("formal sum JSON must be an array".into()))?;
        let mut sum = FormalSum::new(ring.clone())?;
        for item in arr {
            let obj = item
                .as_object()
                .ok_or_else(|| RelationError::Parse("formal sum entry must be an object".into()))?;
            let level = obj
                .get("level")
                .and_then(Value::as_u64)
                .ok_or_else(|| RelationError::Parse("formal sum entry needs `level`".into()))?
                as usize;
            let elem = obj
                .get("elem")
                .ok_or_else(|| RelationError::Parse("formal sum entry needs `elem`".into()))
                .and_then(|e| coord_from_json(ring, e).map_err(|e| RelationError::Parse(e.to_string())))?;
            let coeff = match obj.get("coeff") {
                Some(c) => json_to_int(c).map_err(|e| RelationError::Parse(e.to_string()))?,
                None => BigInt::one(),
            };
            sum.add_term(level, elem, &coeff);
        }
        Ok(sum)
    }

    /// Parses the text grammar `3*V[0]{2*t} - 6*V[0]{t}` (whitespace is
    /// ignored; `0` denotes the empty sum).
    pub fn parse(ring: &RingDescriptor, input: &str) -> Result<FormalSum, RelationError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        let mut sum = FormalSum::new(ring.clone())?;
        if s.is_empty() || s == "0" {
            return Ok(sum);
        }
        let bytes = s.as_bytes();
        let mut i = 0usize;
        let mut sign = BigInt::one();
        if bytes[i] == b'-' {
            sign = -sign;
            i += 1;
        } else if bytes[i] == b'+' {
            i += 1;
        }
        loop {
            // Optional integer coefficient followed by '*'.
            let digits_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coeff = BigInt::one();
            if i > digits_start {
                if i < bytes.len() && bytes[i] == b'*' {
                    coeff = s[digits_start..i]
                        .parse::<BigInt>()
                        .map_err(|_| RelationError::Parse(format!("bad coefficient in `{input}`")))?;
                    i += 1;
                } else {
                    return Err(RelationError::Parse(format!(
                        "expected `*` after coefficient in `{input}`"
                    )));
                }
            }
            if i >= bytes.len() || bytes[i] != b'V' {
                return Err(RelationError::Parse(format!("expected `V[...]` in `{input}`")));
            }
            i += 1;
            if i >= bytes.len() || bytes[i] != b'[' {
                return Err(RelationError::Parse(format!("expected `[` after `V` in `{input}`")));
            }
            i += 1;
            let lvl_start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i == lvl_start || i >= bytes.len() || bytes[i] != b']' {
                return Err(RelationError::Parse(format!("bad level in `{input}`")));
            }
            let level: usize = s[lvl_start..i]
                .parse()
                .map_err(|_| RelationError::Parse(format!("bad level in `{input}`")))?;
            i += 1;
            if i >= bytes.len() || bytes[i] != b'{' {
                return Err(RelationError::Parse(format!("expected `{{` in `{input}`")));
            }
            i += 1;
            let elem_start = i;
            while i < bytes.len() && bytes[i] != b'}' {
                i += 1;
            }
            if i >= bytes.len() {
                return Err(RelationError::Parse(format!("unclosed `{{` in `{input}`")));
            }
            let elem = RingElem::parse(ring, &s[elem_start..i])
                .map_err(|e| RelationError::Parse(e.to_string()))?;
            i += 1;
            sum.add_term(level, elem, &(&sign * &coeff));
            if i == bytes.len() {
                return Ok(sum);
            }
            sign = match bytes[i] {
                b'+' => BigInt::one(),
                b'-' => -BigInt::one(),
                other => {
                    return Err(RelationError::Parse(format!(
                        "unexpected `{}` in `{input}`",
                        other as char
                    )))
                }
            };
            i += 1;
        }
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (level, elem, coeff)) in terms.iter().enumerate() {
            let mag = coeff.magnitude();
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            write!(f, "V[{level}]{{{elem}}}")?;
        }
        Ok(())
    }
}

/// One relation generator.
///
/// `Sign` expands to `V^n_r + V^n_{−r}`.  `Additivity` is the additivity of
/// `φ(a) = V^1_{a^p} − p·V^0_a` shifted up to level `n`, expanding to
/// `(V^n_{(x+y)^p} − p·V^{n−1}_{x+y}) − (V^n_{x^p} − p·V^{n−1}_x) −
/// (V^n_{y^p} − p·V^{n−1}_y)`; its level must be ≥ 1 so that the lower
/// level `n−1` is well-formed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HGenerator {
    Additivity { level: usize, x: RingElem, y: RingElem },
    Sign { level: usize, r: RingElem },
}

impl HGenerator {
    /// The ring the generator's elements live in.
    pub fn ring(&self) -> &RingDescriptor {
        match self {
            HGenerator::Additivity { x, .. } => x.ring(),
            HGenerator::Sign { r, .. } => r.ring(),
        }
    }

    fn validate(&self) -> Result<(), RelationError> {
        match self {
            HGenerator::Additivity { level, x, y } => {
                if *level == 0 {
                    return Err(RelationError::InvalidGenerator(
                        "additivity generators need level >= 1".into(),
                    ));
                }
                if x.ring() != y.ring() {
                    return Err(RelationError::InvalidGenerator(format!(
                        "additivity arguments in different rings {} and {}",
                        x.ring(),
                        y.ring()
                    )));
                }
                require_poly_over_z(x.ring())
            }
            HGenerator::Sign { r, .. } => require_poly_over_z(r.ring()),
        }
    }

    /// The generator's defining combination of symbols.
    pub fn expand(&self, p: u64) -> Result<FormalSum, RelationError> {
        self.validate()?;
        require_odd_prime(p)?;
        let mut sum = FormalSum::new(self.ring().clone())?;
        let pbig = BigInt::from(p);
        match self {
            HGenerator::Additivity { level, x, y } => {
                let n = *level;
                let one = BigInt::one();
                let s = x.add(y);
                sum.add_term(n, s.pow(p), &one);
                sum.add_term(n - 1, s, &-&pbig);
                sum.add_term(n, x.pow(p), &-&one);
                sum.add_term(n - 1, x.clone(), &pbig);
                sum.add_term(n, y.pow(p), &-&one);
                sum.add_term(n - 1, y.clone(), &pbig);
            }
            HGenerator::Sign { level, r } => {
                let one = BigInt::one();
                sum.add_term(*level, r.clone(), &one);
                sum.add_term(*level, r.neg(), &one);
            }
        }
        Ok(sum)
    }

    /// The same generator with every level raised by `m`.
    pub fn shift_up(&self, m: usize) -> HGenerator {
        match self {
            HGenerator::Additivity { level, x, y } => HGenerator::Additivity {
                level: level + m,
                x: x.clone(),
                y: y.clone(),
            },
            HGenerator::Sign { level, r } => {
                HGenerator::Sign { level: level + m, r: r.clone() }
            }
        }
    }

    /// JSON form with the variant spelled out:
    /// `{"kind": "additivity", "level": n, "x": "…", "y": "…"}` or
    /// `{"kind": "sign", "level": n, "r": "…"}`.
    pub fn to_json(&self) -> Value {
        match self {
            HGenerator::Additivity { level, x, y } => serde_json::json!({
                "kind": "additivity",
                "level": level,
                "x": x.to_string(),
                "y": y.to_string(),
            }),
            HGenerator::Sign { level, r } => serde_json::json!({
                "kind": "sign",
                "level": level,
                "r": r.to_string(),
            }),
        }
    }

    /// Inverse of [`HGenerator::to_json`].
    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<HGenerator, RelationError> {
        let obj = v
            .as_object()
            .ok_or_else(|| RelationError::Parse("generator must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| RelationError::Parse("generator needs `kind`".into()))?;
        let level = obj
            .get("level")
            .and_then(Value::as_u64)
            .ok_or_else(|| RelationError::Parse("generator needs `level`".into()))?
            as usize;
        let elem = |key: &str| -> Result<RingElem, RelationError> {
            let v = obj
                .get(key)
                .ok_or_else(|| RelationError::Parse(format!("generator needs `{key}`")))?;
            coord_from_json(ring, v).map_err(|e| RelationError::Parse(e.to_string()))
        };
        let gen = match kind {
            "additivity" => HGenerator::Additivity { level, x: elem("x")?, y: elem("y")? },
            "sign" => HGenerator::Sign { level, r: elem("r")? },
            other => {
                return Err(RelationError::Parse(format!("unknown generator kind `{other}`")))
            }
        };
        gen.validate()?;
        Ok(gen)
    }
}

impl fmt::Display for HGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HGenerator::Additivity { level, x, y } => {
                write!(f, "Additivity[{level}]{{{x}; {y}}}")
            }
            HGenerator::Sign { level, r } => write!(f, "Sign[{level}]{{{r}}}"),
        }
    }
}

/// A verifiable membership witness: `combo` is an integer combination of
/// relation generators whose expansions sum to exactly `p^k` times the
/// certified element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCertificate {
    k: usize,
    combo: Vec<(BigInt, HGenerator)>,
}

impl RelationCertificate {
    pub fn new(k: usize, combo: Vec<(BigInt, HGenerator)>) -> RelationCertificate {
        RelationCertificate { k, combo }
    }

    /// The p-power exponent: the certified identity is
    /// `p^k·α = Σ coeff·expand(gen)`.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn combo(&self) -> &[(BigInt, HGenerator)] {
        &self.combo
    }

    /// JSON form `{"k": k, "combo": [{"coeff": c, "gen": {…}}, …]}`.
    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "k": self.k,
            "combo": Value::Array(
                self.combo
                    .iter()
                    .map(|(c, g)| serde_json::json!({"coeff": int_to_json(c), "gen": g.to_json()}))
                    .collect(),
            ),
        })
    }

    /// Inverse of [`RelationCertificate::to_json`].
    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<RelationCertificate, RelationError> {
        let obj = v
            .as_object()
            .ok_or_else(|| RelationError::Parse("certificate must be an object".into()))?;
        let k = obj
            .get("k")
            .and_then(Value::as_u64)
            .ok_or_else(|| RelationError::Parse("certificate needs `k`".into()))? as usize;
        let combo_v = obj
            .get("combo")
            .and_then(Value::as_array)
            .ok_or_else(|| RelationError::Parse("certificate needs `combo` array".into()))?;
        let mut combo = Vec::with_capacity(combo_v.len());
        for entry in combo_v {
            let e = entry
                .as_object()
                .ok_or_else(|| RelationError::Parse("combo entry must be an object".into()))?;
            let coeff = e
                .get("coeff")
                .ok_or_else(|| RelationError::Parse("combo entry needs `coeff`".into()))
                .and_then(|c| json_to_int(c).map_err(|e| RelationError::Parse(e.to_string())))?;
            let gen = e
                .get("gen")
                .ok_or_else(|| RelationError::Parse("combo entry needs `gen`".into()))
                .and_then(|g| HGenerator::from_json(ring, g))?;
            combo.push((coeff, gen));
        }
        Ok(RelationCertificate { k, combo })
    }
}

impl fmt::Display for RelationCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k = {}", self.k)?;
        for (c, g) in &self.combo {
            write!(f, "\n  {c} * {g}")?;
        }
        Ok(())
    }
}

/// Outcome of the membership decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// The element lies in the saturation; the certificate proves it.
    InSaturation(RelationCertificate),
    /// The element does not: the evaluated sequence of the input has the
    /// nonzero value `witness` at component `level` (for any truncation
    /// long enough to contain that component).
    NotIn { level: usize, witness: RingElem },
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reduction::InSaturation(cert) => {
                write!(f, "InSaturation k={}", cert.k())?;
                for (c, g) in cert.combo() {
                    write!(f, "\n  {c} * {g}")?;
                }
                Ok(())
            }
            Reduction::NotIn { level, witness } => {
                write!(f, "NotIn witness: component {level} = {witness}")
            }
        }
    }
}

/// Raises every term's level by `k`.
pub fn v_shift(alpha: &FormalSum, k: usize) -> FormalSum {
    FormalSum {
        ring: alpha.ring.clone(),
        terms: alpha
            .terms
            .iter()
            .map(|((l, e), c)| ((l + k, e.clone()), c.clone()))
            .collect(),
    }
}

/// Replaces every element by its canonical sign representative (positive
/// leading coefficient), negating the term's coefficient when flipped, and
/// merges like terms.  The result's support has pairwise distinct elements,
/// none the negative of another.
pub fn normalize_signs(alpha: &FormalSum) -> FormalSum {
    normalize_signs_with_cert(alpha).0
}

/// Like [`normalize_signs`], also returning the sign-generator combination
/// consumed by the rewrite: `α = normalized + Σ coeff·expand(gen)`.
pub fn normalize_signs_with_cert(
    alpha: &FormalSum,
) -> (FormalSum, Vec<(BigInt, HGenerator)>) {
    let mut out = FormalSum { ring: alpha.ring.clone(), terms: BTreeMap::new() };
    let mut combo = Vec::new();
    for (level, elem, c) in alpha.iter() {
        if leading_coeff(elem).is_negative() {
            let canon = elem.neg();
            combo.push((c.clone(), HGenerator::Sign { level, r: canon.clone() }));
            out.add_term(level, canon, &-c);
        } else {
            out.add_term(level, elem.clone(), c);
        }
    }
    (out, combo)
}

/// Evaluates a formal sum as a length-`len` sequence: the symbol `V^k_a`
/// contributes `p^k·a^{p^{t−k}}` to component `t ≥ k` and nothing below.
pub fn eta_evaluate(alpha: &FormalSum, p: u64, len: usize) -> Result<GhostVector, RelationError> {
    let ctx = WittContext::new(p, len, alpha.ring.clone())?;
    let mut comps = vec![alpha.ring.zero(); len];
    for (level, elem, c) in alpha.iter() {
        let pk = BigInt::from(p).pow(level as u32);
        for (t, comp) in comps.iter_mut().enumerate().skip(level) {
            let e = p
                .checked_pow((t - level) as u32)
                .expect("sequence exponent fits in u64");
            *comp = comp.add(&elem.pow(e).scale(&(&pk * c)));
        }
    }
    Ok(ctx.ghost_from_comps(comps)?)
}

/// `φ(a) = V^1_{a^p} − p·V^0_a` as a formal sum.
#[cfg(test)]
fn phi_sum(p: u64, a: &RingElem) -> FormalSum {
    let mut sum = FormalSum { ring: a.ring().clone(), terms: BTreeMap::new() };
    sum.add_term(1, a.pow(p), &BigInt::one());
    sum.add_term(0, a.clone(), &-BigInt::from(p));
    sum
}

/// A generator combination whose expansions sum to `c·φ(a) − φ(c·a)`,
/// with `O(log |c|)` entries, built by binary splitting of `c` plus the
/// sign rule `φ(−b) = −φ(b) + (V^1_{b^p} + V^1_{−b^p}) − p·(V^0_b + V^0_{−b})`.
fn cert_scale(p: u64, c: &BigInt, a: &RingElem) -> Vec<(BigInt, HGenerator)> {
    if c.is_zero() || c.is_one() || a.is_zero() {
        return Vec::new();
    }
    let one = BigInt::one();
    if c.is_negative() {
        let d = -c;
        let da = a.scale(&d);
        let mut combo: Vec<(BigInt, HGenerator)> = cert_scale(p, &d, a)
            .into_iter()
            .map(|(cc, g)| (-cc, g))
            .collect();
        combo.push((-&one, HGenerator::Sign { level: 1, r: da.pow(p) }));
        combo.push((BigInt::from(p), HGenerator::Sign { level: 0, r: da }));
        combo
    } else if c.is_even() {
        let d = c / BigInt::from(2);
        let da = a.scale(&d);
        let mut combo: Vec<(BigInt, HGenerator)> = cert_scale(p, &d, a)
            .into_iter()
            .map(|(cc, g)| (cc * BigInt::from(2), g))
            .collect();
        combo.push((
            -&one,
            HGenerator::Additivity { level: 1, x: da.clone(), y: da },
        ));
        combo
    } else {
        let c1 = c - &one;
        let mut combo = cert_scale(p, &c1, a);
        combo.push((
            -&one,
            HGenerator::Additivity { level: 1, x: a.scale(&c1), y: a.clone() },
        ));
        combo
    }
}

/// For terms `(a_i, c_i)` with `Σ c_i·a_i = 0`, a generator combination
/// whose expansions sum to `Σ c_i·φ(a_i)`: each term is rewritten to
/// `φ(c_i·a_i)` by [`cert_scale`], and the partial sums are folded together
/// with one additivity generator per step; the vanishing total makes the
/// final `φ` term disappear.
fn phi_combination_cert(p: u64, terms: &[(RingElem, BigInt)]) -> Vec<(BigInt, HGenerator)> {
    let one = BigInt::one();
    let mut combo = Vec::new();
    let mut partial: Option<RingElem> = None;
    for (a, c) in terms {
        combo.extend(cert_scale(p, c, a));
        let t = a.scale(c);
        debug_assert!(!t.is_zero(), "nonzero term scaled by nonzero coefficient");
        partial = Some(match partial {
            None => t,
            Some(s) if s.is_zero() => t,
            Some(s) => {
                combo.push((
                    -&one,
                    HGenerator::Additivity { level: 1, x: s.clone(), y: t.clone() },
                ));
                s.add(&t)
            }
        });
    }
    debug_assert!(
        partial.map_or(true, |s| s.is_zero()),
        "telescoped sum expected to vanish"
    );
    combo
}

/// Detects `α = c·expand(Additivity(n, x, y))` for some `c, n, x, y` and
/// returns the single-entry combination when it matches.  This recovers a
/// one-generator certificate with `k = 0` where the general descent would
/// produce an equivalent but larger one.
fn try_single_generator(alpha: &FormalSum, p: u64) -> Option<(BigInt, HGenerator)> {
    let min = alpha.min_level()?;
    let max = alpha.max_level()?;
    if max != min + 1 {
        return None;
    }
    let lower = alpha.level_terms(min);
    let upper = alpha.level_terms(max);
    if lower.len() != 3 || upper.len() != 3 {
        return None;
    }
    let pbig = BigInt::from(p);
    for idx in 0..3 {
        let (e_s, d_s) = &lower[idx];
        let (q, rem) = d_s.div_rem(&pbig);
        if !rem.is_zero() {
            continue;
        }
        let c = -q;
        if c.is_zero() {
            continue;
        }
        let mut others: Vec<&(RingElem, BigInt)> =
            lower.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, t)| t).collect();
        if others.iter().any(|(_, d)| d != &-d_s) {
            continue;
        }
        if others[0].0.add(&others[1].0) != *e_s {
            continue;
        }
        // Deterministic argument order: larger element first.
        others.sort_by(|a, b| b.0.cmp(&a.0));
        let gen = HGenerator::Additivity {
            level: max,
            x: others[0].0.clone(),
            y: others[1].0.clone(),
        };
        if let Ok(expansion) = gen.expand(p) {
            if expansion.scale(&c) == *alpha {
                return Some((c, gen));
            }
        }
    }
    None
}

enum CoreOutcome {
    In(usize, Vec<(BigInt, HGenerator)>),
    Out(usize, RingElem),
}

/// Decision core for a nonzero, sign-normalized sum with minimum level 0.
fn reduce_core(alpha: &FormalSum, p: u64) -> Result<CoreOutcome, RelationError> {
    debug_assert_eq!(alpha.min_level(), Some(0));
    let max = alpha.max_level().expect("nonzero sum");
    let level0 = alpha.level_terms(0);
    let mut sigma = alpha.ring.zero();
    for (a, c) in &level0 {
        sigma = sigma.add(&a.scale(c));
    }

    if max == 0 {
        // A normalized combination at one level with nonzero coefficients
        // never evaluates to the zero sequence: its distinct, pairwise
        // non-opposite elements make the p-power evaluation matrix
        // invertible at a suitable integer point.  Return the first
        // nonzero component as the witness.
        if !sigma.is_zero() {
            return Ok(CoreOutcome::Out(0, sigma));
        }
        let r = alpha.num_terms();
        let seq = eta_evaluate(alpha, p, r)?;
        for (t, comp) in seq.comps().iter().enumerate() {
            if !comp.is_zero() {
                return Ok(CoreOutcome::Out(t, comp.clone()));
            }
        }
        return Err(RelationError::Internal(
            "level-zero combination with a vanishing sequence".into(),
        ));
    }

    if !sigma.is_zero() {
        return Ok(CoreOutcome::Out(0, sigma));
    }

    // Level-0 coefficients sum to zero against their elements, so
    // Φ = Σ c_i·φ(a_i) lies in the relation subgroup with an explicit
    // combination.  γ = p·α + Φ cancels every level-0 term, dropping the
    // level spread by at least one; recurse and stitch the certificates:
    // p^{k+1}·α = p^k·γ − p^k·Φ.
    let combo_phi = phi_combination_cert(p, &level0);
    let mut gamma = alpha.scale(&BigInt::from(p));
    for (a, c) in &level0 {
        gamma.add_term(1, a.pow(p), c);
        gamma.add_term(0, a.clone(), &(-(c * BigInt::from(p))));
    }
    debug_assert!(gamma.min_level().map_or(true, |m| m >= 1));
    if gamma.is_zero() {
        let combo = combo_phi.into_iter().map(|(c, g)| (-c, g)).collect();
        return Ok(CoreOutcome::In(1, combo));
    }
    let m = gamma.min_level().expect("nonzero gamma");
    let inner = gamma.shift_down(m);
    match reduce_core(&inner, p)? {
        CoreOutcome::In(k, combo) => {
            let pk = BigInt::from(p).pow(k as u32);
            let mut full: Vec<(BigInt, HGenerator)> =
                combo.into_iter().map(|(c, g)| (c, g.shift_up(m))).collect();
            full.extend(combo_phi.into_iter().map(|(c, g)| (-(c * &pk), g)));
            Ok(CoreOutcome::In(k + 1, full))
        }
        CoreOutcome::Out(t, v) => {
            // sequence(inner)_t = v lifts to sequence(γ)_{t+m} = p^m·v, and
            // γ = p·α + Φ with Φ evaluating to zero, so
            // sequence(α)_{t+m} = p^{m−1}·v.
            let scale = BigInt::from(p).pow((m - 1) as u32);
            Ok(CoreOutcome::Out(t + m, v.scale(&scale)))
        }
    }
}

/// Decides membership of `α` in the p-saturation of the relation subgroup.
///
/// Returns either a [`RelationCertificate`] expressing `p^k·α` as an
/// explicit generator combination, or a `NotIn` witness `(level, value)`
/// with `value ≠ 0` equal to component `level` of the evaluated sequence of
/// `α` — which each relation generator evaluates to zero, so no
/// combination of them can equal `α`.
pub fn reduce(alpha: &FormalSum, p: u64) -> Result<Reduction, RelationError> {
    require_odd_prime(p)?;
    if let Some((c, gen)) = try_single_generator(alpha, p) {
        return Ok(Reduction::InSaturation(RelationCertificate::new(0, vec![(c, gen)])));
    }
    let (norm, sign_combo) = normalize_signs_with_cert(alpha);
    if norm.is_zero() {
        return Ok(Reduction::InSaturation(RelationCertificate::new(0, sign_combo)));
    }
    let m = norm.min_level().expect("nonzero sum");
    let core = norm.shift_down(m);
    match reduce_core(&core, p)? {
        CoreOutcome::In(k, combo) => {
            let pk = BigInt::from(p).pow(k as u32);
            let mut full: Vec<(BigInt, HGenerator)> =
                combo.into_iter().map(|(c, g)| (c, g.shift_up(m))).collect();
            full.extend(sign_combo.into_iter().map(|(c, g)| (c * &pk, g)));
            Ok(Reduction::InSaturation(RelationCertificate::new(k, full)))
        }
        CoreOutcome::Out(t, v) => {
            let scale = BigInt::from(p).pow(m as u32);
            Ok(Reduction::NotIn { level: t + m, witness: v.scale(&scale) })
        }
    }
}

/// Checks a certificate against its element: true exactly when
/// `Σ coeff·expand(gen) = p^k·α` as formal sums.
pub fn verify_certificate(alpha: &FormalSum, cert: &RelationCertificate, p: u64) -> bool {
    let mut acc = match FormalSum::new(alpha.ring.clone()) {
        Ok(s) => s,
        Err(_) => return false,
    };
    for (c, gen) in cert.combo() {
        let expansion = match gen.expand(p) {
            Ok(e) => e,
            Err(_) => return false,
        };
        acc = match acc.add(&expansion.scale(c)) {
            Ok(s) => s,
            Err(_) => return false,
        };
    }
    let pk = BigInt::from(p).pow(cert.k() as u32);
    acc == alpha.scale(&pk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn zt() -> RingDescriptor {
        RingDescriptor::polynomials(vec!["t".into()], RingDescriptor::Integers).unwrap()
    }

    fn zxy() -> RingDescriptor {
        RingDescriptor::polynomials(vec!["x".into(), "y".into()], RingDescriptor::Integers)
            .unwrap()
    }

    fn el(ring: &RingDescriptor, text: &str) -> RingElem {
        RingElem::parse(ring, text).unwrap()
    }

    fn combo_sum(ring: &RingDescriptor, p: u64, combo: &[(BigInt, HGenerator)]) -> FormalSum {
        let mut acc = FormalSum::new(ring.clone()).unwrap();
        for (c, g) in combo {
            acc = acc.add(&g.expand(p).unwrap().scale(c)).unwrap();
        }
        acc
    }

    #[test]
    fn construction_and_ring_gate() {
        let ring = zt();
        let mut s = FormalSum::new(ring.clone()).unwrap();
        assert!(s.is_zero());
        s.add_term(0, el(&ring, "t"), &BigInt::from(3));
        s.add_term(0, el(&ring, "t"), &BigInt::from(-3));
        assert!(s.is_zero());
        s.add_term(2, ring.zero(), &BigInt::from(5));
        assert!(s.is_zero()); // V^2_0 is identified with zero

        assert!(matches!(
            FormalSum::new(RingDescriptor::Integers),
            Err(RelationError::UnsupportedRing(_))
        ));
        let torsion_poly = RingDescriptor::polynomials(
            vec!["t".into()],
            RingDescriptor::integers_mod(BigUint::from(9u32)).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            FormalSum::new(torsion_poly),
            Err(RelationError::UnsupportedRing(_))
        ));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let ring = zt();
        let s = FormalSum::from_terms(
            ring.clone(),
            vec![
                (0, el(&ring, "2*t"), BigInt::from(3)),
                (0, el(&ring, "t"), BigInt::from(-6)),
            ],
        )
        .unwrap();
        assert_eq!(s.to_string(), "3*V[0]{2*t} - 6*V[0]{t}");
        assert_eq!(FormalSum::parse(&ring, "3*V[0]{2*t} - 6*V[0]{t}").unwrap(), s);
        assert_eq!(FormalSum::parse(&ring, "3*V[0]{2*t}-6*V[0]{t}").unwrap(), s);

        let two = FormalSum::parse(&ring, "V[0]{t} + V[0]{-t}").unwrap();
        assert_eq!(two.num_terms(), 2);

        let zero = FormalSum::parse(&ring, "0").unwrap();
        assert!(zero.is_zero());
        assert_eq!(zero.to_string(), "0");

        let neg = FormalSum::parse(&ring, "-V[2]{t^2 + 1}").unwrap();
        assert_eq!(neg.coeff(2, &el(&ring, "t^2 + 1")), BigInt::from(-1));
        assert_eq!(neg.to_string(), "-V[2]{1 + t^2}");

        assert!(FormalSum::parse(&ring, "3V[0]{t}").is_err());
        assert!(FormalSum::parse(&ring, "V[0]{z}").is_err());
        assert!(FormalSum::parse(&ring, "V[0]{t").is_err());
        assert!(FormalSum::parse(&ring, "V[]{t}").is_err());
    }

    #[test]
    fn json_round_trip() {
        let ring = zt();
        let s = FormalSum::from_terms(
            ring.clone(),
            vec![
                (0, el(&ring, "2*t"), BigInt::from(3)),
                (1, el(&ring, "t^2 - 1"), BigInt::from(-2)),
            ],
        )
        .unwrap();
        let j = s.to_json();
        assert_eq!(j[0]["elem"], Value::String("2*t".into()));
        assert_eq!(FormalSum::from_json(&ring, &j).unwrap(), s);
    }

    #[test]
    fn shift_examples() {
        let ring = zxy();
        let a = el(&ring, "x");
        let b = el(&ring, "y");
        let s = FormalSum::from_terms(ring.clone(), vec![(0, a.clone(), BigInt::one())]).unwrap();
        let shifted = v_shift(&s, 1);
        assert_eq!(shifted.coeff(1, &a), BigInt::one());
        assert_eq!(shifted.num_terms(), 1);

        let zero = FormalSum::new(ring.clone()).unwrap();
        assert!(v_shift(&zero, 5).is_zero());

        let mixed = FormalSum::from_terms(
            ring.clone(),
            vec![(1, a.clone(), BigInt::from(2)), (3, b.clone(), BigInt::from(-1))],
        )
        .unwrap();
        let up = v_shift(&mixed, 2);
        assert_eq!(up.coeff(3, &a), BigInt::from(2));
        assert_eq!(up.coeff(5, &b), BigInt::from(-1));
        assert_eq!(up.num_terms(), 2);
    }

    #[test]
    fn expansion_shapes() {
        let ring = zt();
        let t = el(&ring, "t");
        let sign = HGenerator::Sign { level: 0, r: t.clone() };
        let e = sign.expand(3).unwrap();
        assert_eq!(e, FormalSum::parse(&ring, "V[0]{t} + V[0]{-t}").unwrap());
        assert_eq!(e.num_terms(), 2); // no premature sign merging

        let ring2 = zxy();
        let x = el(&ring2, "x");
        let y = el(&ring2, "y");
        let add = HGenerator::Additivity { level: 1, x: x.clone(), y: y.clone() };
        let e = add.expand(3).unwrap();
        assert_eq!(e.num_terms(), 6);
        assert_eq!(e.coeff(1, &x.add(&y).pow(3)), BigInt::one());
        assert_eq!(e.coeff(0, &el(&ring2, "x + y")), BigInt::from(-3));
        assert_eq!(e.coeff(1, &el(&ring2, "x^3")), BigInt::from(-1));
        assert_eq!(e.coeff(0, &x), BigInt::from(3));
        assert_eq!(e.coeff(1, &el(&ring2, "y^3")), BigInt::from(-1));
        assert_eq!(e.coeff(0, &y), BigInt::from(3));

        let merged = HGenerator::Additivity { level: 1, x: x.clone(), y: x.clone() };
        assert_eq!(merged.expand(3).unwrap().num_terms(), 4);

        let bad = HGenerator::Additivity { level: 0, x, y };
        assert!(matches!(bad.expand(3), Err(RelationError::InvalidGenerator(_))));
        let sign2 = HGenerator::Sign { level: 0, r: t };
        assert!(sign2.expand(4).is_err());
    }

    #[test]
    fn normalization_examples() {
        let ring = zt();
        let t = el(&ring, "t");
        let neg_t = el(&ring, "-t");

        let s = FormalSum::from_terms(ring.clone(), vec![(0, neg_t.clone(), BigInt::one())])
            .unwrap();
        let n = normalize_signs(&s);
        assert_eq!(n.coeff(0, &t), BigInt::from(-1));
        assert_eq!(n.num_terms(), 1);

        let s = FormalSum::from_terms(
            ring.clone(),
            vec![(0, t.clone(), BigInt::one()), (0, neg_t.clone(), BigInt::one())],
        )
        .unwrap();
        let (n, combo) = normalize_signs_with_cert(&s);
        assert!(n.is_zero());
        assert_eq!(combo, vec![(BigInt::one(), HGenerator::Sign { level: 0, r: t.clone() })]);

        let two_t = el(&ring, "2*t");
        let s = FormalSum::from_terms(
            ring.clone(),
            vec![
                (0, two_t.clone(), BigInt::from(3)),
                (0, el(&ring, "-2*t"), BigInt::from(2)),
            ],
        )
        .unwrap();
        let (n, combo) = normalize_signs_with_cert(&s);
        assert_eq!(n.to_string(), "V[0]{2*t}");
        assert_eq!(combo, vec![(BigInt::from(2), HGenerator::Sign { level: 0, r: two_t })]);

        // The rewrite is exact: original = normalized + Σ combo.
        let recon = n.add(&combo_sum(&ring, 3, &combo)).unwrap();
        assert_eq!(recon, s);

        // Idempotent.
        assert_eq!(normalize_signs(&n), n);
    }

    #[test]
    fn sequence_evaluation() {
        let ring = zt();
        let t = el(&ring, "t");
        let s = FormalSum::from_terms(ring.clone(), vec![(0, t.clone(), BigInt::one())]).unwrap();
        let g = eta_evaluate(&s, 3, 3).unwrap();
        assert_eq!(g.comps()[0], t);
        assert_eq!(g.comps()[1], el(&ring, "t^3"));
        assert_eq!(g.comps()[2], el(&ring, "t^9"));

        // Shifted symbol: V^1_t evaluates to (0, 3t, 3t^3).
        let s1 = v_shift(&s, 1);
        let g1 = eta_evaluate(&s1, 3, 3).unwrap();
        assert!(g1.comps()[0].is_zero());
        assert_eq!(g1.comps()[1], el(&ring, "3*t"));
        assert_eq!(g1.comps()[2], el(&ring, "3*t^3"));

        // Every additivity generator evaluates to the zero sequence,
        // symbolically.
        let ring2 = zxy();
        let add = HGenerator::Additivity {
            level: 1,
            x: el(&ring2, "x"),
            y: el(&ring2, "y"),
        };
        let g = eta_evaluate(&add.expand(3).unwrap(), 3, 4).unwrap();
        assert!(g.is_zero());
        let sign = HGenerator::Sign { level: 2, r: el(&ring2, "x*y - 1") };
        let g = eta_evaluate(&sign.expand(3).unwrap(), 3, 5).unwrap();
        assert!(g.is_zero());

        // A combination with vanishing weighted element sum but unequal
        // higher powers: components past the first pick up the difference.
        let s = FormalSum::from_terms(
            ring.clone(),
            vec![
                (0, el(&ring, "2*t"), BigInt::from(3)),
                (0, t, BigInt::from(-6)),
            ],
        )
        .unwrap();
        let g = eta_evaluate(&s, 3, 3).unwrap();
        assert!(g.comps()[0].is_zero());
        assert_eq!(g.comps()[1], el(&ring, "18*t^3"));
        assert_eq!(g.comps()[2], el(&ring, "1530*t^9"));
    }

    #[test]
    fn scaling_certificate_identity() {
        let ring = zt();
        for a_text in ["t", "2*t - 1"] {
            let a = el(&ring, a_text);
            for c in [-12i64, -7, -2, -1, 0, 1, 2, 3, 6, 13] {
                let c = BigInt::from(c);
                let combo = cert_scale(3, &c, &a);
                let got = combo_sum(&ring, 3, &combo);
                let want = phi_sum(3, &a)
                    .scale(&c)
                    .add(&phi_sum(3, &a.scale(&c)).neg())
                    .unwrap();
                assert_eq!(got, want, "c = {c}, a = {a_text}");
            }
        }
    }

    #[test]
    fn telescoping_certificate_identity() {
        let ring = zt();
        let cases: Vec<Vec<(&str, i64)>> = vec![
            vec![("t", 2), ("2*t", -1)],
            vec![("t", 1), ("t^2", 1), ("t^2 + t", -1)],
            vec![("t", 3), ("t - 1", -3), ("1", -3)],
            vec![("2*t", 1), ("t", -2)],
        ];
        for case in cases {
            let terms: Vec<(RingElem, BigInt)> = case
                .iter()
                .map(|(s, c)| (el(&ring, s), BigInt::from(*c)))
                .collect();
            let mut sigma = ring.zero();
            let mut phi_total = FormalSum::new(ring.clone()).unwrap();
            for (a, c) in &terms {
                sigma = sigma.add(&a.scale(c));
                phi_total = phi_total.add(&phi_sum(3, a).scale(c)).unwrap();
            }
            assert!(sigma.is_zero(), "test case must have vanishing sum");
            let combo = phi_combination_cert(3, &terms);
            assert_eq!(combo_sum(&ring, 3, &combo), phi_total, "case {case:?}");
        }
    }

    #[test]
    fn reduce_sign_pair() {
        let ring = zt();
        let t = el(&ring, "t");
        let alpha = HGenerator::Sign { level: 0, r: t.clone() }.expand(3).unwrap();
        match reduce(&alpha, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert_eq!(cert.k(), 0);
                assert_eq!(
                    cert.combo(),
                    &[(BigInt::one(), HGenerator::Sign { level: 0, r: t })]
                );
                assert!(verify_certificate(&alpha, &cert, 3));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn reduce_single_additivity() {
        let ring = zxy();
        let x = el(&ring, "x");
        let y = el(&ring, "y");
        let gen = HGenerator::Additivity { level: 1, x: x.clone(), y: y.clone() };
        let alpha = gen.expand(3).unwrap();
        match reduce(&alpha, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert_eq!(cert.k(), 0);
                assert_eq!(cert.combo(), &[(BigInt::one(), gen.clone())]);
                assert!(verify_certificate(&alpha, &cert, 3));
            }
            other => panic!("expected certificate, got {other:?}"),
        }

        // A p-multiple of one expansion is still a single scaled generator.
        let tripled = alpha.scale(&BigInt::from(3));
        match reduce(&tripled, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert_eq!(cert.k(), 0);
                assert_eq!(cert.combo(), &[(BigInt::from(3), gen)]);
            }
            other => panic!("expected certificate, got {other:?}"),
        }

        // Shifted to higher levels the fast path still applies.
        let shifted = v_shift(&alpha, 2);
        match reduce(&shifted, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert_eq!(cert.k(), 0);
                assert_eq!(cert.combo().len(), 1);
                assert!(matches!(
                    cert.combo()[0].1,
                    HGenerator::Additivity { level: 3, .. }
                ));
                assert!(verify_certificate(&shifted, &cert, 3));
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn reduce_non_members() {
        let ring = zxy();
        let x = el(&ring, "x");
        let y = el(&ring, "y");
        let alpha = FormalSum::from_terms(
            ring.clone(),
            vec![(0, x.clone(), BigInt::one()), (0, y.clone(), BigInt::from(-1))],
        )
        .unwrap();
        assert_eq!(
            reduce(&alpha, 3).unwrap(),
            Reduction::NotIn { level: 0, witness: el(&ring, "x - y") }
        );

        let ring = zt();
        let alpha = FormalSum::from_terms(
            ring.clone(),
            vec![
                (0, el(&ring, "2*t"), BigInt::from(3)),
                (0, el(&ring, "t"), BigInt::from(-6)),
            ],
        )
        .unwrap();
        assert_eq!(
            reduce(&alpha, 3).unwrap(),
            Reduction::NotIn { level: 1, witness: el(&ring, "18*t^3") }
        );

        // The witness names an actual nonzero sequence component.
        let g = eta_evaluate(&alpha, 3, 2).unwrap();
        assert_eq!(g.comps()[1], el(&ring, "18*t^3"));

        // A lone shifted symbol is never a relation combination.
        let single = FormalSum::from_terms(
            ring.clone(),
            vec![(2, el(&ring, "t"), BigInt::from(5))],
        )
        .unwrap();
        match reduce(&single, 3).unwrap() {
            Reduction::NotIn { level, witness } => {
                let g = eta_evaluate(&single, 3, level + 1).unwrap();
                assert_eq!(g.comps()[level], witness);
                assert!(!witness.is_zero());
            }
            other => panic!("expected non-membership, got {other:?}"),
        }
    }

    #[test]
    fn reduce_descent_combinations() {
        let ring = zxy();
        let x = el(&ring, "x");
        let y = el(&ring, "y");
        let g1 = HGenerator::Additivity { level: 1, x: x.clone(), y: y.clone() };
        let g2 = HGenerator::Additivity { level: 2, x: x.clone(), y: el(&ring, "x*y") };
        let g3 = HGenerator::Sign { level: 2, r: el(&ring, "x - y") };

        let alpha = g1
            .expand(3)
            .unwrap()
            .add(&g2.expand(3).unwrap())
            .unwrap()
            .add(&g3.expand(3).unwrap().scale(&BigInt::from(-2)))
            .unwrap();
        match reduce(&alpha, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert!(verify_certificate(&alpha, &cert, 3));
                // The evaluated sequence vanishes well past the top level.
                let g = eta_evaluate(&alpha, 3, 6).unwrap();
                assert!(g.is_zero());
            }
            other => panic!("expected certificate, got {other:?}"),
        }

        // Perturbing one coefficient breaks membership, and the witness
        // pinpoints a nonzero component.
        let mut perturbed = alpha.clone();
        perturbed.add_term(1, el(&ring, "x^3"), &BigInt::from(1));
        match reduce(&perturbed, 3).unwrap() {
            Reduction::NotIn { level, witness } => {
                assert!(!witness.is_zero());
                let g = eta_evaluate(&perturbed, 3, level + 1).unwrap();
                assert_eq!(g.comps()[level], witness);
            }
            other => panic!("expected non-membership, got {other:?}"),
        }
    }

    #[test]
    fn reduce_handles_division_by_p() {
        // When every coefficient of a relation combination is divisible by
        // p, the divided-out element still belongs to the saturation and
        // must be certified.
        let ring = zxy();
        let x = el(&ring, "x");
        let y = el(&ring, "y");
        let combo = FormalSum::new(ring.clone())
            .unwrap()
            .add(
                &HGenerator::Additivity { level: 1, x: x.clone(), y: y.clone() }
                    .expand(3)
                    .unwrap()
                    .scale(&BigInt::from(3)),
            )
            .unwrap()
            .add(
                &HGenerator::Sign { level: 2, r: el(&ring, "x + y") }
                    .expand(3)
                    .unwrap()
                    .scale(&BigInt::from(6)),
            )
            .unwrap();
        assert!(combo.iter().all(|(_, _, c)| (c % BigInt::from(3)).is_zero()));
        let divided = FormalSum::from_terms(
            ring.clone(),
            combo
                .iter()
                .map(|(l, e, c)| (l, e.clone(), c / BigInt::from(3)))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        match reduce(&divided, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert!(verify_certificate(&divided, &cert, 3))
            }
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn verify_rejects_tampering() {
        let ring = zxy();
        let x = el(&ring, "x");
        let y = el(&ring, "y");
        let gen = HGenerator::Additivity { level: 1, x, y };
        let alpha = gen.expand(3).unwrap();
        let cert = match reduce(&alpha, 3).unwrap() {
            Reduction::InSaturation(c) => c,
            other => panic!("expected certificate, got {other:?}"),
        };
        assert!(verify_certificate(&alpha, &cert, 3));

        let mut combo = cert.combo().to_vec();
        combo[0].0 += BigInt::one();
        let tampered = RelationCertificate::new(cert.k(), combo);
        assert!(!verify_certificate(&alpha, &tampered, 3));

        let wrong_k = RelationCertificate::new(cert.k() + 1, cert.combo().to_vec());
        assert!(!verify_certificate(&alpha, &wrong_k, 3));

        // Empty combination certifies only zero.
        let empty = RelationCertificate::new(2, Vec::new());
        let zero = FormalSum::new(ring.clone()).unwrap();
        assert!(verify_certificate(&zero, &empty, 3));
        assert!(!verify_certificate(&alpha, &empty, 3));
    }

    #[test]
    fn certificate_json_round_trip() {
        let ring = zxy();
        let gen = HGenerator::Additivity {
            level: 1,
            x: el(&ring, "x"),
            y: el(&ring, "y"),
        };
        let alpha = gen
            .expand(3)
            .unwrap()
            .add(&HGenerator::Sign { level: 1, r: el(&ring, "x*y") }.expand(3).unwrap())
            .unwrap();
        let cert = match reduce(&alpha, 3).unwrap() {
            Reduction::InSaturation(c) => c,
            other => panic!("expected certificate, got {other:?}"),
        };
        let j = cert.to_json();
        let back = RelationCertificate::from_json(&ring, &j).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&alpha, &back, 3));
    }

    #[test]
    fn reduce_rejects_bad_prime() {
        let ring = zt();
        let s = FormalSum::from_terms(
            ring.clone(),
            vec![(0, el(&ring, "t"), BigInt::one())],
        )
        .unwrap();
        assert!(reduce(&s, 2).is_err());
        assert!(reduce(&s, 9).is_err());
    }

    #[test]
    fn reduce_zero_sum() {
        let ring = zt();
        let zero = FormalSum::new(ring).unwrap();
        match reduce(&zero, 3).unwrap() {
            Reduction::InSaturation(cert) => {
                assert_eq!(cert.k(), 0);
                assert!(cert.combo().is_empty());
            }
            other => panic!("expected empty certificate, got {other:?}"),
        }
    }
}
