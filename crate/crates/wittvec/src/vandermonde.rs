//! Exact p-power Vandermonde matrices, fraction-free determinants, and the
//! integer point search used to reduce polynomial independence questions to
//! integer ones.
//!
//! For nonzero distinct integers `c_1, …, c_n`, the matrix `M(c_1, …, c_n)`
//! has entry `(j, i) = c_i^{p^j}` for `j = 0 … n−1`. Its columns are
//! Z-linearly independent exactly when `det M ≠ 0`, which holds whenever the
//! `c_i` are all positive, or `p` is odd and the `|c_i|` are distinct.

use crate::ring::{poly_eval_int, RingDescriptor, RingElem};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Errors from matrix construction, determinants, and the point search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VdmError {
    /// `det_exact` was handed a non-square matrix.
    NotSquare { rows: usize, cols: usize },
    /// Inputs violate a precondition (zero/repeated entries, opposite
    /// polynomials, wrong ring, non-prime p, …).
    InvalidInput(String),
}

impl fmt::Display for VdmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VdmError::NotSquare { rows, cols } => {
                write!(f, "matrix is not square: {rows} rows, widest row {cols}")
            }
            VdmError::InvalidInput(what) => write!(f, "invalid input: {what}"),
        }
    }
}

impl std::error::Error for VdmError {}

fn check_prime(p: u64) -> Result<(), VdmError> {
    if p < 2 {
        return Err(VdmError::InvalidInput(format!("{p} is not prime")));
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return Err(VdmError::InvalidInput(format!("{p} is not prime")));
        }
        d += 1;
    }
    Ok(())
}

/// The matrix `M(c_1, …, c_n)` with rows `(c_1^{p^j}, …, c_n^{p^j})`,
/// `j = 0 … n−1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PVandermonde {
    p: u64,
    c: Vec<BigInt>,
    matrix: Vec<Vec<BigInt>>,
}

impl PVandermonde {
    /// Builds `M(c)`; requires `p` prime and the `c_i` nonzero and distinct.
    pub fn new(p: u64, c: &[BigInt]) -> Result<Self, VdmError> {
        check_prime(p)?;
        validate_entries(c)?;
        let n = c.len();
        let mut matrix = Vec::with_capacity(n);
        for j in 0..n {
            let e = p
                .checked_pow(j as u32)
                .ok_or_else(|| VdmError::InvalidInput(format!("p^{j} overflows for p = {p}")))?;
            matrix.push(c.iter().map(|ci| num_traits::Pow::pow(ci, e)).collect());
        }
        Ok(PVandermonde { p, c: c.to_vec(), matrix })
    }

    /// The prime the powers are taken at.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The column generators `c_1, …, c_n`.
    pub fn c(&self) -> &[BigInt] {
        &self.c
    }

    /// The rows `(c_i^{p^j})_i`, `j` ascending.
    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    /// Exact determinant.
    pub fn det(&self) -> BigInt {
        det_exact(&self.matrix).expect("constructed square")
    }
}

impl fmt::Display for PVandermonde {
    /// Aligned decimal rendering, one row per line.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.c.len();
        let widths: Vec<usize> = (0..n)
            .map(|i| self.matrix.iter().map(|row| row[i].to_string().len()).max().unwrap_or(1))
            .collect();
        for (j, row) in self.matrix.iter().enumerate() {
            if j > 0 {
                writeln!(f)?;
            }
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, "  ")?;
                }
                write!(f, "{:>width$}", v.to_string(), width = widths[i])?;
            }
        }
        Ok(())
    }
}

fn validate_entries(c: &[BigInt]) -> Result<(), VdmError> {
    if c.is_empty() {
        return Err(VdmError::InvalidInput("empty entry list".into()));
    }
    for (i, ci) in c.iter().enumerate() {
        if ci.is_zero() {
            return Err(VdmError::InvalidInput(format!("entry {} is zero", i + 1)));
        }
        for cj in &c[i + 1..] {
            if ci == cj {
                return Err(VdmError::InvalidInput(format!("repeated entry {ci}")));
            }
        }
    }
    Ok(())
}

/// Exact determinant of an integer matrix by fraction-free (Bareiss)
/// elimination: every interior division is exact, so intermediate entries
/// stay polynomially sized minors instead of exploding like naive expansion.
pub fn det_exact(m: &[Vec<BigInt>]) -> Result<BigInt, VdmError> {
    let n = m.len();
    let widest = m.iter().map(Vec::len).max().unwrap_or(0);
    if m.iter().any(|row| row.len() != n) {
        return Err(VdmError::NotSquare { rows: n, cols: widest });
    }
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut negated = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negated = !negated;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                let (q, r) = num_integer::Integer::div_rem(&num, &prev);
                debug_assert!(r.is_zero(), "fraction-free elimination divides exactly");
                a[i][j] = q;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let det = std::mem::take(&mut a[n - 1][n - 1]);
    Ok(if negated { -det } else { det })
}

/// Outcome of the column-independence test for `M(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Independence {
    /// A covered hypothesis holds and the determinant is verified nonzero:
    /// the columns are Z-linearly independent.
    Independent { det: BigInt },
    /// A covered hypothesis holds yet the determinant vanished. No such
    /// input is known; the variant keeps the check total.
    Dependent { det: BigInt },
    /// Neither hypothesis applies; the determinant is still reported.
    HypothesisViolated { reason: String, det: BigInt },
}

impl Independence {
    /// The determinant computed along the way.
    pub fn det(&self) -> &BigInt {
        match self {
            Independence::Independent { det }
            | Independence::Dependent { det }
            | Independence::HypothesisViolated { det, .. } => det,
        }
    }

    /// True for [`Independence::Independent`].
    pub fn is_independent(&self) -> bool {
        matches!(self, Independence::Independent { .. })
    }
}

impl fmt::Display for Independence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Independence::Independent { det } => write!(f, "Independent (det = {det})"),
            Independence::Dependent { det } => write!(f, "Dependent (det = {det})"),
            Independence::HypothesisViolated { reason, det } => {
                write!(f, "HypothesisViolated: {reason} (det = {det})")
            }
        }
    }
}

/// Decides Z-linear independence of the columns of `M(c)` under the two
/// covered hypotheses: (1) all `c_i` positive, or (2) `p ≠ 2` and the
/// `|c_i|` distinct. When either holds the determinant is computed and
/// verified nonzero; otherwise the hypotheses' failure is reported together
/// with the determinant.
pub fn independence_check(p: u64, c: &[BigInt]) -> Result<Independence, VdmError> {
    let m = PVandermonde::new(p, c)?;
    let det = m.det();
    let all_positive = c.iter().all(|ci| ci.is_positive());
    let abs_distinct = {
        let mut abs: Vec<BigInt> = c.iter().map(BigInt::abs).collect();
        abs.sort();
        abs.windows(2).all(|w| w[0] != w[1])
    };
    if all_positive || (p != 2 && abs_distinct) {
        if det.is_zero() {
            return Ok(Independence::Dependent { det });
        }
        return Ok(Independence::Independent { det });
    }
    let reason = if p == 2 {
        "p = 2 and the entries are not all positive".to_string()
    } else {
        "entries are not all positive and the absolute values are not distinct".to_string()
    };
    Ok(Independence::HypothesisViolated { reason, det })
}

/// Finds an integer point where none of the `f_i`, `f_i − f_j`, `f_i + f_j`
/// vanish — equivalently a point `a` with `g(a) ≠ 0` for the product `g` of
/// those factors. Requires the `f_i` to be nonzero, pairwise distinct, and
/// pairwise non-opposite polynomials over the integers, which makes every
/// factor a nonzero polynomial, so the search terminates.
///
/// Points are enumerated over concentric ℓ∞ shells of radius 0, 1, 2, …
/// with lexicographic order inside a shell, making the output deterministic.
pub fn find_nonvanishing_point(f: &[RingElem]) -> Result<Vec<BigInt>, VdmError> {
    if f.is_empty() {
        return Err(VdmError::InvalidInput("empty polynomial list".into()));
    }
    let ring = f[0].ring().clone();
    match &ring {
        RingDescriptor::Polynomials { coeff, .. } if **coeff == RingDescriptor::Integers => {}
        other => {
            return Err(VdmError::InvalidInput(format!(
                "expected polynomials over Z, got elements of {other}"
            )))
        }
    }
    for (i, fi) in f.iter().enumerate() {
        if *fi.ring() != ring {
            return Err(VdmError::InvalidInput(format!(
                "polynomial {} lives in {}, not {}",
                i + 1,
                fi.ring(),
                ring
            )));
        }
        if fi.is_zero() {
            return Err(VdmError::InvalidInput(format!("polynomial {} is zero", i + 1)));
        }
    }
    let mut factors: Vec<RingElem> = f.to_vec();
    for i in 0..f.len() {
        for j in i + 1..f.len() {
            let diff = f[i].sub(&f[j]);
            let sum = f[i].add(&f[j]);
            if diff.is_zero() {
                return Err(VdmError::InvalidInput(format!(
                    "polynomials {} and {} are equal",
                    i + 1,
                    j + 1
                )));
            }
            if sum.is_zero() {
                return Err(VdmError::InvalidInput(format!(
                    "polynomials {} and {} are opposite",
                    i + 1,
                    j + 1
                )));
            }
            factors.push(diff);
            factors.push(sum);
        }
    }
    let nv = ring.nvars();
    let mut radius: i64 = 0;
    loop {
        let mut point = vec![0i64; nv];
        if let Some(found) = search_shell(&factors, &mut point, 0, radius, false) {
            return Ok(found);
        }
        radius += 1;
    }
}

/// Depth-first lexicographic walk over the points of the ℓ∞ shell of the
/// given radius (`on_boundary` tracks whether an earlier coordinate already
/// attained ±radius), returning the first point where every factor is
/// nonzero.
fn search_shell(
    factors: &[RingElem],
    point: &mut Vec<i64>,
    depth: usize,
    radius: i64,
    on_boundary: bool,
) -> Option<Vec<BigInt>> {
    if depth == point.len() {
        if !on_boundary && radius > 0 {
            return None; // interior point, already visited at a smaller radius
        }
        let coords: Vec<BigInt> = point.iter().map(|&v| BigInt::from(v)).collect();
        let hit = factors
            .iter()
            .all(|g| !poly_eval_int(g, &coords).expect("validated arity").is_zero());
        return hit.then_some(coords);
    }
    for v in -radius..=radius {
        point[depth] = v;
        let boundary = on_boundary || v.abs() == radius;
        if let Some(found) = search_shell(factors, point, depth + 1, radius, boundary) {
            return Some(found);
        }
    }
    None
}
