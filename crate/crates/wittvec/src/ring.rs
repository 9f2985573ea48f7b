//! Exact base-ring arithmetic: arbitrary-precision integers, integers mod m,
//! and sparse multivariate polynomials over either.
//!
//! Elements are kept in canonical form at all times (residues reduced into
//! `[0, m)`, zero coefficients dropped, terms sorted), so `==` agrees with
//! mathematical equality in the ring and values can serve as map keys.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

/// Errors surfaced by ring construction, arithmetic, parsing, and encoding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingError {
    /// Two operands live in different rings.
    RingMismatch(String, String),
    /// `exact_div_int` found no exact quotient.
    NotDivisible(String),
    /// The operation is not defined over the given ring.
    UnsupportedRing(String),
    /// An evaluation point has the wrong number of coordinates.
    ArityMismatch { expected: usize, got: usize },
    /// A ring descriptor violates its invariants.
    InvalidDescriptor(String),
    /// Malformed element or descriptor text.
    Parse(String),
}

impl fmt::Display for RingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingError::RingMismatch(a, b) => write!(f, "ring mismatch: {a} vs {b}"),
            RingError::NotDivisible(what) => write!(f, "not exactly divisible: {what}"),
            RingError::UnsupportedRing(what) => write!(f, "unsupported ring: {what}"),
            RingError::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected} coordinates, got {got}")
            }
            RingError::InvalidDescriptor(what) => write!(f, "invalid ring descriptor: {what}"),
            RingError::Parse(what) => write!(f, "parse error: {what}"),
        }
    }
}

impl std::error::Error for RingError {}

/// Description of a supported coefficient ring.
///
/// Polynomial rings have a fixed ordered variable list and a scalar
/// coefficient ring; towers of polynomial rings are not allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingDescriptor {
    /// The ring of integers.
    Integers,
    /// Integers modulo `m`, `m ≥ 2`. Residues are stored in `[0, m)`.
    IntegersMod(BigUint),
    /// Sparse multivariate polynomials over a scalar coefficient ring.
    Polynomials {
        /// Ordered, distinct, nonempty variable names; the order fixes the
        /// canonical term order.
        vars: Vec<String>,
        /// Coefficient ring; never itself a polynomial ring.
        coeff: Box<RingDescriptor>,
    },
}

impl RingDescriptor {
    /// Integers mod `m`; fails unless `m ≥ 2`.
    pub fn integers_mod(m: BigUint) -> Result<Self, RingError> {
        if m < BigUint::from(2u32) {
            return Err(RingError::InvalidDescriptor(format!("modulus {m} < 2")));
        }
        Ok(RingDescriptor::IntegersMod(m))
    }

    /// Polynomial ring over a scalar coefficient ring; validates the
    /// variable list (nonempty names, distinct) and the single-nesting rule.
    pub fn polynomials(vars: Vec<String>, coeff: RingDescriptor) -> Result<Self, RingError> {
        if vars.is_empty() {
            return Err(RingError::InvalidDescriptor("empty variable list".into()));
        }
        for v in &vars {
            if v.is_empty() {
                return Err(RingError::InvalidDescriptor("empty variable name".into()));
            }
            if !v.chars().next().unwrap().is_ascii_alphabetic() {
                return Err(RingError::InvalidDescriptor(format!(
                    "variable `{v}` must start with a letter"
                )));
            }
            if !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(RingError::InvalidDescriptor(format!(
                    "variable `{v}` contains an invalid character"
                )));
            }
        }
        let mut seen = vars.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != vars.len() {
            return Err(RingError::InvalidDescriptor("repeated variable name".into()));
        }
        if matches!(coeff, RingDescriptor::Polynomials { .. }) {
            return Err(RingError::InvalidDescriptor(
                "polynomial coefficients over a polynomial ring".into(),
            ));
        }
        Ok(RingDescriptor::Polynomials { vars, coeff: Box::new(coeff) })
    }

    /// Number of polynomial variables (0 for scalar rings).
    pub fn nvars(&self) -> usize {
        match self {
            RingDescriptor::Polynomials { vars, .. } => vars.len(),
            _ => 0,
        }
    }

    /// Variable names (empty for scalar rings).
    pub fn vars(&self) -> &[String] {
        match self {
            RingDescriptor::Polynomials { vars, .. } => vars,
            _ => &[],
        }
    }

    /// The scalar ring the coefficients live in (`self` for scalar rings).
    pub fn coeff_ring(&self) -> &RingDescriptor {
        match self {
            RingDescriptor::Polynomials { coeff, .. } => coeff,
            other => other,
        }
    }

    /// Modulus of the scalar coefficient ring, if any.
    pub fn modulus(&self) -> Option<&BigUint> {
        match self.coeff_ring() {
            RingDescriptor::IntegersMod(m) => Some(m),
            _ => None,
        }
    }

    /// True when the additive group has no additive torsion (the ring embeds
    /// in a Q-algebra): integers, or polynomials over the integers.
    pub fn is_torsion_free(&self) -> bool {
        self.modulus().is_none()
    }

    /// The torsion-free ring this one is a quotient of: itself when already
    /// torsion-free, otherwise the same shape with integer coefficients.
    pub fn cover(&self) -> RingDescriptor {
        match self {
            RingDescriptor::Integers => RingDescriptor::Integers,
            RingDescriptor::IntegersMod(_) => RingDescriptor::Integers,
            RingDescriptor::Polynomials { vars, coeff } => RingDescriptor::Polynomials {
                vars: vars.clone(),
                coeff: Box::new(coeff.cover()),
            },
        }
    }

    /// Zero element.
    pub fn zero(&self) -> RingElem {
        match self {
            RingDescriptor::Polynomials { .. } => {
                RingElem { ring: self.clone(), repr: Repr::Poly(Vec::new()) }
            }
            _ => RingElem { ring: self.clone(), repr: Repr::Scalar(BigInt::zero()) },
        }
    }

    /// Multiplicative unit.
    pub fn one(&self) -> RingElem {
        self.from_int(BigInt::one())
    }

    /// Image of an integer under the canonical map `Z → R`.
    pub fn from_int(&self, v: BigInt) -> RingElem {
        match self {
            RingDescriptor::Polynomials { vars, .. } => {
                let nv = vars.len();
                RingElem::from_terms(self.clone(), vec![(vec![0; nv], v)])
            }
            _ => {
                let v = reduce_scalar(self, v);
                RingElem { ring: self.clone(), repr: Repr::Scalar(v) }
            }
        }
    }

    /// The `i`-th variable as an element; panics for scalar rings.
    pub fn var_elem(&self, i: usize) -> RingElem {
        let nv = self.nvars();
        assert!(i < nv, "variable index {i} out of range for {self}");
        let mut exps = vec![0u32; nv];
        exps[i] = 1;
        RingElem::from_terms(self.clone(), vec![(exps, BigInt::one())])
    }

    /// Parses a command-line ring spec: `int`, `mod:<m>`,
    /// `poly:<v1,v2,...>`, or `poly:<v1,...>:mod:<m>`.
    pub fn parse_spec(spec: &str) -> Result<Self, RingError> {
        let parts: Vec<&str> = spec.split(':').collect();
        match parts.as_slice() {
            ["int"] => Ok(RingDescriptor::Integers),
            ["mod", m] => {
                let m = BigUint::from_str(m)
                    .map_err(|_| RingError::Parse(format!("bad modulus `{m}`")))?;
                RingDescriptor::integers_mod(m)
            }
            ["poly", vars] => {
                let vars = vars.split(',').map(|s| s.trim().to_string()).collect();
                RingDescriptor::polynomials(vars, RingDescriptor::Integers)
            }
            ["poly", vars, "mod", m] => {
                let m = BigUint::from_str(m)
                    .map_err(|_| RingError::Parse(format!("bad modulus `{m}`")))?;
                let vars = vars.split(',').map(|s| s.trim().to_string()).collect();
                RingDescriptor::polynomials(vars, RingDescriptor::integers_mod(m)?)
            }
            _ => Err(RingError::Parse(format!(
                "bad ring spec `{spec}` (expected int, mod:<m>, poly:<vars>[:mod:<m>])"
            ))),
        }
    }

    /// JSON form of the descriptor.
    pub fn to_json(&self) -> Value {
        match self {
            RingDescriptor::Integers => serde_json::json!({"kind": "int"}),
            RingDescriptor::IntegersMod(m) => {
                serde_json::json!({"kind": "mod", "modulus": uint_to_json(m)})
            }
            RingDescriptor::Polynomials { vars, coeff } => {
                serde_json::json!({"kind": "poly", "vars": vars, "coeff": coeff.to_json()})
            }
        }
    }

    /// Inverse of [`RingDescriptor::to_json`].
    pub fn from_json(v: &Value) -> Result<Self, RingError> {
        let obj = v
            .as_object()
            .ok_or_else(|| RingError::Parse("ring descriptor must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| RingError::Parse("ring descriptor needs a `kind` string".into()))?;
        match kind {
            "int" => Ok(RingDescriptor::Integers),
            "mod" => {
                let m = obj
                    .get("modulus")
                    .ok_or_else(|| RingError::Parse("mod ring needs `modulus`".into()))?;
                RingDescriptor::integers_mod(json_to_uint(m)?)
            }
            "poly" => {
                let vars = obj
                    .get("vars")
                    .and_then(Value::as_array)
                    .ok_or_else(|| RingError::Parse("poly ring needs `vars` array".into()))?
                    .iter()
                    .map(|s| {
                        s.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| RingError::Parse("variable names must be strings".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let coeff = match obj.get("coeff") {
                    Some(c) => RingDescriptor::from_json(c)?,
                    None => RingDescriptor::Integers,
                };
                RingDescriptor::polynomials(vars, coeff)
            }
            other => Err(RingError::Parse(format!("unknown ring kind `{other}`"))),
        }
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::IntegersMod(m) => write!(f, "Z/{m}"),
            RingDescriptor::Polynomials { vars, coeff } => {
                match coeff.as_ref() {
                    RingDescriptor::Integers => write!(f, "Z")?,
                    other => write!(f, "({other})")?,
                }
                write!(f, "[{}]", vars.join(","))
            }
        }
    }
}

/// One sparse polynomial term: exponent vector (one entry per variable in
/// descriptor order) and a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Term {
    exps: Vec<u32>,
    coeff: BigInt,
}

fn term_degree(exps: &[u32]) -> u64 {
    exps.iter().map(|&e| e as u64).sum()
}

/// Canonical term order: ascending total degree, then descending
/// lexicographic on exponent vectors. This is the order elements are stored
/// and printed in, e.g. `X1 + Y1 - X0^2*Y0 - X0*Y0^2`.
fn term_cmp(a: &[u32], b: &[u32]) -> Ordering {
    term_degree(a).cmp(&term_degree(b)).then_with(|| b.cmp(a))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Scalar(BigInt),
    Poly(Vec<Term>),
}

/// An element of one of the supported rings, always in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    ring: RingDescriptor,
    repr: Repr,
}

fn reduce_scalar(ring: &RingDescriptor, v: BigInt) -> BigInt {
    match ring {
        RingDescriptor::IntegersMod(m) => {
            let m = BigInt::from(m.clone());
            v.mod_floor(&m)
        }
        _ => v,
    }
}

impl RingElem {
    /// Builds a polynomial from raw `(exponents, coefficient)` pairs,
    /// combining duplicates and normalizing. Panics if `ring` is scalar or
    /// an exponent vector has the wrong length.
    pub fn from_terms(ring: RingDescriptor, terms: Vec<(Vec<u32>, BigInt)>) -> RingElem {
        let nv = match &ring {
            RingDescriptor::Polynomials { vars, .. } => vars.len(),
            _ => panic!("from_terms on scalar ring {ring}"),
        };
        let coeff_ring = ring.coeff_ring().clone();
        let mut map: std::collections::HashMap<Vec<u32>, BigInt> = std::collections::HashMap::new();
        for (exps, c) in terms {
            assert_eq!(exps.len(), nv, "exponent vector length vs {nv} variables");
            *map.entry(exps).or_insert_with(BigInt::zero) += c;
        }
        let mut out: Vec<Term> = map
            .into_iter()
            .filter_map(|(exps, c)| {
                let c = reduce_scalar(&coeff_ring, c);
                if c.is_zero() {
                    None
                } else {
                    Some(Term { exps, coeff: c })
                }
            })
            .collect();
        out.sort_by(|a, b| term_cmp(&a.exps, &b.exps));
        RingElem { ring, repr: Repr::Poly(out) }
    }

    /// The ring this element lives in.
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    /// True for the additive identity.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Scalar(v) => v.is_zero(),
            Repr::Poly(t) => t.is_empty(),
        }
    }

    /// True for the multiplicative identity.
    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    /// Scalar value for elements of scalar rings (canonical residue for
    /// modular rings).
    pub fn as_scalar(&self) -> Option<&BigInt> {
        match &self.repr {
            Repr::Scalar(v) => Some(v),
            Repr::Poly(_) => None,
        }
    }

    /// Iterates the terms of a polynomial element in canonical order; a
    /// scalar element yields nothing.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        let slice: &[Term] = match &self.repr {
            Repr::Poly(t) => t,
            Repr::Scalar(_) => &[],
        };
        slice.iter().map(|t| (t.exps.as_slice(), &t.coeff))
    }

    /// Number of stored (nonzero) terms; 0 or 1 for scalar elements.
    pub fn term_count(&self) -> usize {
        match &self.repr {
            Repr::Poly(t) => t.len(),
            Repr::Scalar(v) => usize::from(!v.is_zero()),
        }
    }

    /// Total degree of a polynomial element (`None` for the zero
    /// polynomial and for scalars).
    pub fn degree(&self) -> Option<u64> {
        match &self.repr {
            Repr::Poly(t) => t.iter().map(|t| term_degree(&t.exps)).max(),
            Repr::Scalar(_) => None,
        }
    }

    fn check_same_ring(&self, other: &RingElem) -> Result<(), RingError> {
        if self.ring != other.ring {
            return Err(RingError::RingMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    fn binop<FS, FP>(&self, other: &RingElem, fs: FS, fp: FP) -> RingElem
    where
        FS: FnOnce(&BigInt, &BigInt) -> BigInt,
        FP: FnOnce(&RingElem, &RingElem) -> Vec<(Vec<u32>, BigInt)>,
    {
        self.check_same_ring(other)
            .unwrap_or_else(|e| panic!("{e}"));
        match (&self.repr, &other.repr) {
            (Repr::Scalar(a), Repr::Scalar(b)) => {
                let v = reduce_scalar(&self.ring, fs(a, b));
                RingElem { ring: self.ring.clone(), repr: Repr::Scalar(v) }
            }
            (Repr::Poly(_), Repr::Poly(_)) => {
                RingElem::from_terms(self.ring.clone(), fp(self, other))
            }
            _ => unreachable!("repr kind is determined by the ring"),
        }
    }

    /// Sum.
    pub fn add(&self, other: &RingElem) -> RingElem {
        self.binop(
            other,
            |a, b| a + b,
            |x, y| {
                x.terms()
                    .chain(y.terms())
                    .map(|(e, c)| (e.to_vec(), c.clone()))
                    .collect()
            },
        )
    }

    /// Difference.
    pub fn sub(&self, other: &RingElem) -> RingElem {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> RingElem {
        match &self.repr {
            Repr::Scalar(v) => {
                let v = reduce_scalar(&self.ring, -v);
                RingElem { ring: self.ring.clone(), repr: Repr::Scalar(v) }
            }
            Repr::Poly(_) => RingElem::from_terms(
                self.ring.clone(),
                self.terms().map(|(e, c)| (e.to_vec(), -c)).collect(),
            ),
        }
    }

    /// Product.
    pub fn mul(&self, other: &RingElem) -> RingElem {
        self.binop(
            other,
            |a, b| a * b,
            |x, y| {
                let mut out = Vec::new();
                for (ea, ca) in x.terms() {
                    for (eb, cb) in y.terms() {
                        let exps: Vec<u32> = ea
                            .iter()
                            .zip(eb)
                            .map(|(&a, &b)| a.checked_add(b).expect("exponent overflow"))
                            .collect();
                        out.push((exps, ca * cb));
                    }
                }
                out
            },
        )
    }

    /// Product with an integer.
    pub fn scale(&self, c: &BigInt) -> RingElem {
        self.mul(&self.ring.from_int(c.clone()))
    }

    /// `self^e`, exactly. Monomials and binomials take dedicated paths
    /// (direct exponent scaling resp. the binomial theorem with incremental
    /// binomial coefficients); everything else uses repeated squaring.
    pub fn pow(&self, e: u64) -> RingElem {
        if e == 0 {
            return self.ring.one();
        }
        if e == 1 {
            return self.clone();
        }
        match &self.repr {
            Repr::Scalar(v) => {
                let v = match &self.ring {
                    RingDescriptor::IntegersMod(m) => {
                        v.modpow(&BigInt::from(e), &BigInt::from(m.clone()))
                    }
                    _ => pow_bigint(v, e),
                };
                RingElem { ring: self.ring.clone(), repr: Repr::Scalar(v) }
            }
            Repr::Poly(terms) => match terms.as_slice() {
                [] => self.ring.zero(),
                [t] => {
                    let exps = scale_exps(&t.exps, e);
                    let coeff = pow_coeff(self.ring.coeff_ring(), &t.coeff, e);
                    RingElem::from_terms(self.ring.clone(), vec![(exps, coeff)])
                }
                [a, b] => {
                    // (A + B)^e expanded directly: e + 1 terms with
                    // C(e, k+1) = C(e, k)·(e − k)/(k + 1), updating the two
                    // power factors incrementally. Dividing the running power
                    // of A by A's coefficient is only faithful without
                    // torsion, so modular coefficients recompute it.
                    let modulus = self.ring.modulus().map(|m| BigInt::from(m.clone()));
                    let mut out = Vec::with_capacity(e as usize + 1);
                    let mut binom = BigInt::one();
                    let mut pow_b = BigInt::one();
                    let mut pow_a = pow_coeff(self.ring.coeff_ring(), &a.coeff, e);
                    for k in 0..=e {
                        let exps: Vec<u32> = scale_exps(&a.exps, e - k)
                            .iter()
                            .zip(&scale_exps(&b.exps, k))
                            .map(|(&x, &y)| x.checked_add(y).expect("exponent overflow"))
                            .collect();
                        out.push((exps, &binom * &pow_a * &pow_b));
                        if k < e {
                            binom = binom * BigInt::from(e - k) / BigInt::from(k + 1);
                            pow_b *= &b.coeff;
                            match &modulus {
                                None => {
                                    pow_a = exact_ratio(&pow_a, &a.coeff)
                                        .expect("nonzero integer coefficient divides its powers");
                                }
                                Some(m) => {
                                    pow_b = pow_b.mod_floor(m);
                                    pow_a = pow_coeff(self.ring.coeff_ring(), &a.coeff, e - k - 1);
                                }
                            }
                        }
                    }
                    RingElem::from_terms(self.ring.clone(), out)
                }
                _ => {
                    let mut base = self.clone();
                    let mut acc: Option<RingElem> = None;
                    let mut e = e;
                    while e > 0 {
                        if e & 1 == 1 {
                            acc = Some(match acc {
                                Some(a) => a.mul(&base),
                                None => base.clone(),
                            });
                        }
                        e >>= 1;
                        if e > 0 {
                            base = base.mul(&base);
                        }
                    }
                    acc.unwrap()
                }
            },
        }
    }
}

fn scale_exps(exps: &[u32], e: u64) -> Vec<u32> {
    exps.iter()
        .map(|&x| {
            u32::try_from(x as u64 * e).expect("exponent overflow")
        })
        .collect()
}

fn pow_bigint(v: &BigInt, e: u64) -> BigInt {
    num_traits::Pow::pow(v, e)
}

fn pow_coeff(coeff_ring: &RingDescriptor, c: &BigInt, e: u64) -> BigInt {
    match coeff_ring {
        RingDescriptor::IntegersMod(m) => c.modpow(&BigInt::from(e), &BigInt::from(m.clone())),
        _ => pow_bigint(c, e),
    }
}

/// `a / b` when the division is exact over the integers.
fn exact_ratio(a: &BigInt, b: &BigInt) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let (q, r) = a.div_rem(b);
    if r.is_zero() {
        Some(q)
    } else {
        None
    }
}

/// The checked arithmetic entry point: verifies operand compatibility before
/// computing. `Pow` takes a non-negative integer exponent instead of a
/// second element.
pub enum ArithOp<'a> {
    Add(&'a RingElem),
    Sub(&'a RingElem),
    Mul(&'a RingElem),
    Neg,
    Pow(u64),
}

/// Applies `op` to `x`, reporting [`RingError::RingMismatch`] instead of
/// panicking when a binary operand lives in a different ring.
pub fn ring_arith(x: &RingElem, op: ArithOp<'_>) -> Result<RingElem, RingError> {
    match op {
        ArithOp::Add(y) => {
            x.check_same_ring(y)?;
            Ok(x.add(y))
        }
        ArithOp::Sub(y) => {
            x.check_same_ring(y)?;
            Ok(x.sub(y))
        }
        ArithOp::Mul(y) => {
            x.check_same_ring(y)?;
            Ok(x.mul(y))
        }
        ArithOp::Neg => Ok(x.neg()),
        ArithOp::Pow(e) => Ok(x.pow(e)),
    }
}

/// Divides by a nonzero integer when every coefficient divides exactly;
/// defined only over torsion-free rings (integers, polynomials over the
/// integers), where "divide by d" has at most one answer.
pub fn exact_div_int(x: &RingElem, d: &BigInt) -> Result<RingElem, RingError> {
    assert!(!d.is_zero(), "division by zero");
    if !x.ring.is_torsion_free() {
        return Err(RingError::UnsupportedRing(format!(
            "exact integer division over {}",
            x.ring
        )));
    }
    match &x.repr {
        Repr::Scalar(v) => match exact_ratio(v, d) {
            Some(q) => Ok(RingElem { ring: x.ring.clone(), repr: Repr::Scalar(q) }),
            None => Err(RingError::NotDivisible(format!("{v} by {d}"))),
        },
        Repr::Poly(_) => {
            let mut out = Vec::with_capacity(x.term_count());
            for (e, c) in x.terms() {
                match exact_ratio(c, d) {
                    Some(q) => out.push((e.to_vec(), q)),
                    None => {
                        return Err(RingError::NotDivisible(format!(
                            "coefficient {c} of {x} by {d}"
                        )))
                    }
                }
            }
            Ok(RingElem::from_terms(x.ring.clone(), out))
        }
    }
}

/// Evaluates an integer polynomial at an integer point, exactly.
pub fn poly_eval_int(f: &RingElem, point: &[BigInt]) -> Result<BigInt, RingError> {
    match &f.ring {
        RingDescriptor::Polynomials { vars, coeff } if **coeff == RingDescriptor::Integers => {
            if vars.len() != point.len() {
                return Err(RingError::ArityMismatch { expected: vars.len(), got: point.len() });
            }
        }
        other => {
            return Err(RingError::UnsupportedRing(format!(
                "integer evaluation over {other}"
            )))
        }
    }
    let mut acc = BigInt::zero();
    for (exps, c) in f.terms() {
        let mut t = c.clone();
        for (x, &e) in point.iter().zip(exps) {
            if e > 0 {
                t *= pow_bigint(x, e as u64);
            }
        }
        acc += t;
    }
    Ok(acc)
}

/// Evaluates a polynomial with integer coefficients at a point in an
/// arbitrary ring, i.e. applies the unique ring map `Z[X…] → R` sending the
/// variables to `point`.
pub fn poly_eval_in(f: &RingElem, point: &[RingElem]) -> Result<RingElem, RingError> {
    match &f.ring {
        RingDescriptor::Polynomials { vars, coeff } if **coeff == RingDescriptor::Integers => {
            if vars.len() != point.len() {
                return Err(RingError::ArityMismatch { expected: vars.len(), got: point.len() });
            }
        }
        other => {
            return Err(RingError::UnsupportedRing(format!(
                "polynomial evaluation from {other}"
            )))
        }
    }
    let target = match point.first() {
        Some(x) => x.ring().clone(),
        None => return Err(RingError::ArityMismatch { expected: 1, got: 0 }),
    };
    for x in point {
        if *x.ring() != target {
            return Err(RingError::RingMismatch(target.to_string(), x.ring().to_string()));
        }
    }
    let mut acc = target.zero();
    for (exps, c) in f.terms() {
        let mut t = target.from_int(c.clone());
        for (x, &e) in point.iter().zip(exps) {
            if e > 0 {
                t = t.mul(&x.pow(e as u64));
            }
        }
        acc = acc.add(&t);
    }
    Ok(acc)
}

/// Lifts an element to its ring's torsion-free cover by taking canonical
/// integer representatives of residues (coefficientwise for polynomials).
pub fn lift_to_cover(x: &RingElem) -> RingElem {
    let cover = x.ring.cover();
    match &x.repr {
        Repr::Scalar(v) => RingElem { ring: cover, repr: Repr::Scalar(v.clone()) },
        Repr::Poly(_) => RingElem::from_terms(
            cover,
            x.terms().map(|(e, c)| (e.to_vec(), c.clone())).collect(),
        ),
    }
}

/// Applies the quotient map from `ring.cover()` back onto `ring`,
/// reducing coefficients mod m. Panics if `x` does not live in the cover.
pub fn project_from_cover(ring: &RingDescriptor, x: &RingElem) -> RingElem {
    assert_eq!(*x.ring(), ring.cover(), "element does not live in the cover of {ring}");
    match &x.repr {
        Repr::Scalar(v) => ring.from_int(v.clone()),
        Repr::Poly(_) => RingElem::from_terms(
            ring.clone(),
            x.terms().map(|(e, c)| (e.to_vec(), c.clone())).collect(),
        ),
    }
}

// ---------------------------------------------------------------------------
// Text grammar
// ---------------------------------------------------------------------------

impl RingElem {
    /// Parses the element text grammar: decimal integer literals, monomials
    /// `c*x1^e1*x2^e2`, sums with `+`/`-`. Whitespace is ignored.
    pub fn parse(ring: &RingDescriptor, input: &str) -> Result<RingElem, RingError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(RingError::Parse("empty element".into()));
        }
        // Split into signed monomials at top-level +/-.
        let mut acc = ring.zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let negative = match bytes[i] {
                b'+' => {
                    i += 1;
                    false
                }
                b'-' => {
                    i += 1;
                    true
                }
                _ if i == 0 => false,
                other => {
                    return Err(RingError::Parse(format!(
                        "expected `+` or `-` before `{}`",
                        other as char
                    )))
                }
            };
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            if start == i {
                return Err(RingError::Parse(format!("empty monomial in `{input}`")));
            }
            let mono = parse_monomial(ring, &s[start..i])?;
            acc = if negative { acc.sub(&mono) } else { acc.add(&mono) };
        }
        Ok(acc)
    }
}

fn parse_monomial(ring: &RingDescriptor, s: &str) -> Result<RingElem, RingError> {
    let mut coeff = BigInt::one();
    let mut exps = vec![0u32; ring.nvars()];
    for factor in s.split('*') {
        if factor.is_empty() {
            return Err(RingError::Parse(format!("empty factor in `{s}`")));
        }
        if factor.chars().next().unwrap().is_ascii_digit() {
            let v = BigInt::from_str(factor)
                .map_err(|_| RingError::Parse(format!("bad integer literal `{factor}`")))?;
            coeff *= v;
            continue;
        }
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e = u32::from_str(e)
                    .map_err(|_| RingError::Parse(format!("bad exponent in `{factor}`")))?;
                (n, e)
            }
            None => (factor, 1),
        };
        let idx = ring
            .vars()
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| RingError::Parse(format!("unknown variable `{name}` in {ring}")))?;
        exps[idx] = exps[idx]
            .checked_add(exp)
            .ok_or_else(|| RingError::Parse(format!("exponent overflow in `{s}`")))?;
    }
    match ring {
        RingDescriptor::Polynomials { .. } => Ok(RingElem::from_terms(ring.clone(), vec![(exps, coeff)])),
        _ => Ok(ring.from_int(coeff)),
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Scalar(v) => write!(f, "{v}"),
            Repr::Poly(terms) => {
                if terms.is_empty() {
                    return write!(f, "0");
                }
                let vars = self.ring.vars();
                for (i, t) in terms.iter().enumerate() {
                    let mag = t.coeff.abs();
                    if i == 0 {
                        if t.coeff.sign() == Sign::Minus {
                            write!(f, "-")?;
                        }
                    } else if t.coeff.sign() == Sign::Minus {
                        write!(f, " - ")?;
                    } else {
                        write!(f, " + ")?;
                    }
                    let mut factors: Vec<String> = Vec::new();
                    let constant = t.exps.iter().all(|&e| e == 0);
                    if !mag.is_one() || constant {
                        factors.push(mag.to_string());
                    }
                    for (v, &e) in vars.iter().zip(&t.exps) {
                        match e {
                            0 => {}
                            1 => factors.push(v.clone()),
                            _ => factors.push(format!("{v}^{e}")),
                        }
                    }
                    write!(f, "{}", factors.join("*"))?;
                }
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// JSON encoding
// ---------------------------------------------------------------------------

/// Arbitrary-precision integer as a JSON number.
pub fn int_to_json(v: &BigInt) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal integer is valid JSON")
}

fn uint_to_json(v: &BigUint) -> Value {
    serde_json::from_str(&v.to_string()).expect("decimal integer is valid JSON")
}

/// Reads an arbitrary-precision integer from a JSON number (or a decimal
/// string, accepted for convenience).
pub fn json_to_int(v: &Value) -> Result<BigInt, RingError> {
    let s = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(RingError::Parse(format!("expected integer, got {other}"))),
    };
    BigInt::from_str(&s).map_err(|_| RingError::Parse(format!("bad integer `{s}`")))
}

fn json_to_uint(v: &Value) -> Result<BigUint, RingError> {
    let s = json_to_int(v)?;
    s.to_biguint()
        .ok_or_else(|| RingError::Parse(format!("expected non-negative integer, got {s}")))
}

impl RingElem {
    /// Full JSON encoding `{"ring": …, "terms": [{"coeffs": …, "exps": […]}]}`.
    /// Scalar elements use a single term with an empty exponent vector.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = match &self.repr {
            Repr::Scalar(v) => {
                if v.is_zero() {
                    Vec::new()
                } else {
                    vec![serde_json::json!({"coeffs": int_to_json(v), "exps": []})]
                }
            }
            Repr::Poly(_) => self
                .terms()
                .map(|(e, c)| serde_json::json!({"coeffs": int_to_json(c), "exps": e}))
                .collect(),
        };
        serde_json::json!({"ring": self.ring.to_json(), "terms": terms})
    }

    /// Inverse of [`RingElem::to_json`].
    pub fn from_json(v: &Value) -> Result<RingElem, RingError> {
        let obj = v
            .as_object()
            .ok_or_else(|| RingError::Parse("element must be a JSON object".into()))?;
        let ring = RingDescriptor::from_json(
            obj.get("ring")
                .ok_or_else(|| RingError::Parse("element needs a `ring`".into()))?,
        )?;
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| RingError::Parse("element needs a `terms` array".into()))?;
        let mut acc = ring.zero();
        for t in terms {
            let t = t
                .as_object()
                .ok_or_else(|| RingError::Parse("term must be an object".into()))?;
            let coeff = json_to_int(
                t.get("coeffs")
                    .ok_or_else(|| RingError::Parse("term needs `coeffs`".into()))?,
            )?;
            let exps: Vec<u32> = t
                .get("exps")
                .and_then(Value::as_array)
                .ok_or_else(|| RingError::Parse("term needs `exps` array".into()))?
                .iter()
                .map(|e| {
                    json_to_int(e)?
                        .to_u32()
                        .ok_or_else(|| RingError::Parse("exponent out of range".into()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let term = match &ring {
                RingDescriptor::Polynomials { .. } => RingElem::from_terms(
                    ring.clone(),
                    vec![(exps, coeff)],
                ),
                _ => {
                    if !exps.is_empty() {
                        return Err(RingError::Parse(
                            "scalar ring term must have empty `exps`".into(),
                        ));
                    }
                    ring.from_int(coeff)
                }
            };
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Parses either grammar: a JSON object (full encoding) or element text.
    pub fn parse_flexible(ring: &RingDescriptor, input: &str) -> Result<RingElem, RingError> {
        let trimmed = input.trim();
        if trimmed.starts_with('{') {
            let v: Value = serde_json::from_str(trimmed)
                .map_err(|e| RingError::Parse(format!("bad JSON element: {e}")))?;
            let elem = RingElem::from_json(&v)?;
            if elem.ring() != ring {
                return Err(RingError::RingMismatch(ring.to_string(), elem.ring().to_string()));
            }
            Ok(elem)
        } else {
            RingElem::parse(ring, trimmed)
        }
    }
}
