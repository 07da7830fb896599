//! Exact sparse multivariate polynomial arithmetic over the integers.
//!
//! Polynomials are maps from exponent vectors to nonzero `BigInt`
//! coefficients, kept in graded-lexicographic order so that equal
//! polynomials always serialize identically. On top of the ring operations
//! this module provides a fraction-free determinant (Bareiss elimination
//! with exact intermediate divisions) and truncated power-series inversion,
//! which together turn a directed edge matrix into a zeta Taylor series.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent vector `(p_1, ..., p_n)` of a monomial `u_1^{p_1} ... u_n^{p_n}`.
///
/// Ordered graded-lexicographically: first by total degree, then
/// lexicographically with `u_1` most significant. This ordering is the
/// canonical term order used everywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn zeros(num_vars: usize) -> Self {
        ExponentVector(vec![0; num_vars])
    }

    /// `u_var` as an exponent vector.
    pub fn unit(num_vars: usize, var: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn total_degree(&self) -> u32 {
        let sum: u64 = self.0.iter().map(|&p| u64::from(p)).sum();
        u32::try_from(sum).expect("total degree overflow")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&p| p == 0)
    }

    fn checked_add(&self, other: &Self) -> Self {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }

    /// Componentwise difference, `None` if any component would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Componentwise `<=`.
    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse polynomial with integer coefficients in `num_vars` variables.
///
/// Zero coefficients are never stored; the zero polynomial has an empty
/// term map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePolynomial {
    num_vars: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl SparsePolynomial {
    pub fn zero(num_vars: usize) -> Self {
        SparsePolynomial {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, value: impl Into<BigInt>) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(ExponentVector::zeros(num_vars), value.into());
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, 1)
    }

    /// The variable `u_var` (0-based).
    pub fn variable(num_vars: usize, var: usize) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(ExponentVector::unit(num_vars, var), BigInt::one());
        p
    }

    pub fn monomial(num_vars: usize, exponents: &[u32], coeff: impl Into<BigInt>) -> Self {
        assert_eq!(exponents.len(), num_vars);
        let mut p = Self::zero(num_vars);
        p.add_term(ExponentVector(exponents.to_vec()), coeff.into());
        p
    }

    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = Self::zero(num_vars);
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), num_vars);
            p.add_term(ExponentVector(exps), coeff);
        }
        p
    }

    fn add_term(&mut self, exps: ExponentVector, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &ExponentVector) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&ExponentVector::zeros(self.num_vars))
    }

    /// Total degree, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .next_back()
            .map(ExponentVector::total_degree)
    }

    /// Smallest total degree among the terms, `None` for zero.
    pub fn min_total_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(ExponentVector::total_degree)
    }

    /// Leading term under graded-lex (the largest key).
    fn leading_term(&self) -> Option<(&ExponentVector, &BigInt)> {
        self.terms.iter().next_back()
    }

    fn require_same_vars(&self, other: &Self) -> Result<()> {
        if self.num_vars == other.num_vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch {
                left: self.num_vars,
                right: other.num_vars,
            })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_vars(other)?;
        Ok(self.add_raw(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_vars(other)?;
        Ok(self.add_raw(&other.neg()))
    }

    pub fn neg(&self) -> Self {
        SparsePolynomial {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    fn add_raw(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Exact product; with `truncation = Some(d)` every product term of
    /// total degree above `d` is discarded.
    pub fn mul(&self, other: &Self, truncation: Option<u32>) -> Result<Self> {
        self.require_same_vars(other)?;
        Ok(self.mul_raw(other, truncation))
    }

    fn mul_raw(&self, other: &Self, truncation: Option<u32>) -> Self {
        if let Some(fast) = packed::mul(self, other, truncation) {
            return fast;
        }
        let mut out = Self::zero(self.num_vars);
        for (ea, ca) in &self.terms {
            let da = ea.total_degree();
            if let Some(bound) = truncation {
                if da > bound {
                    continue;
                }
            }
            for (eb, cb) in &other.terms {
                if let Some(bound) = truncation {
                    // term keys ascend by degree, so later ones only get larger
                    if da + eb.total_degree() > bound {
                        break;
                    }
                }
                out.add_term(ea.checked_add(eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        if factor.is_zero() {
            return Self::zero(self.num_vars);
        }
        SparsePolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), c * factor))
                .collect(),
        }
    }

    /// Drops every term of total degree above `bound`.
    pub fn truncate(&self, bound: u32) -> Self {
        SparsePolynomial {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .take_while(|(e, _)| e.total_degree() <= bound)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact division, for quotients that are known to be polynomial.
    ///
    /// Runs graded-lex long division and returns `None` as soon as a leading
    /// term fails to divide (either in the exponents or in the coefficient).
    /// Bareiss elimination relies on this never happening; `poly_det` treats
    /// a `None` as an internal arithmetic bug.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.num_vars, divisor.num_vars, "variable count mismatch");
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (dlt_e, dlt_c) = divisor.leading_term().unwrap();
        let (dlt_e, dlt_c) = (dlt_e.clone(), dlt_c.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.num_vars);
        while let Some((rlt_e, rlt_c)) = rem.leading_term() {
            let qe = rlt_e.checked_sub(&dlt_e)?;
            let (qc, carry) = num_integer_div_rem(rlt_c, &dlt_c);
            if !carry.is_zero() {
                return None;
            }
            let step = Self::monomial(self.num_vars, &qe.0, qc);
            rem = rem.add_raw(&step.mul_raw(divisor, None).neg());
            quot = quot.add_raw(&step);
        }
        Some(quot)
    }
}

fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (a / b, a % b)
}

impl fmt::Display for SparsePolynomial {
    /// Canonical text form: terms in graded-lex order joined by ` + `, each
    /// term as `coeff*u1^p1*...` with zero exponents omitted and `^1`
    /// shortened away. Negative coefficients keep their sign attached, so a
    /// term renders e.g. as `-2*u1*u2*u3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut s = c.to_string();
                for (var, &p) in e.0.iter().enumerate() {
                    match p {
                        0 => {}
                        1 => s.push_str(&format!("*u{}", var + 1)),
                        _ => s.push_str(&format!("*u{}^{}", var + 1, p)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", rendered.join(" + "))
    }
}

/// One polynomial term in the JSON wire form:
/// `{"exp": [p1, ..., pn], "coeff": "decimal-string"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

impl Serialize for SparsePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(e, c)| TermJson {
                exp: e.0.clone(),
                coeff: c.to_string(),
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SparsePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermJson>::deserialize(deserializer)?;
        let num_vars = terms
            .first()
            .map(|t| t.exp.len())
            .ok_or_else(|| D::Error::custom("cannot infer variable count from zero terms"))?;
        let mut p = SparsePolynomial::zero(num_vars);
        for t in terms {
            if t.exp.len() != num_vars {
                return Err(D::Error::custom("inconsistent exponent vector lengths"));
            }
            let coeff: BigInt = t
                .coeff
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.coeff)))?;
            p.add_term(ExponentVector(t.exp), coeff);
        }
        Ok(p)
    }
}

/// A power series known only up to a total-degree bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    max_total_degree: u32,
    terms: SparsePolynomial,
}

impl TruncatedSeries {
    pub fn new(poly: SparsePolynomial, max_total_degree: u32) -> Self {
        TruncatedSeries {
            terms: poly.truncate(max_total_degree),
            max_total_degree,
        }
    }

    pub fn max_total_degree(&self) -> u32 {
        self.max_total_degree
    }

    pub fn num_vars(&self) -> usize {
        self.terms.num_vars()
    }

    pub fn as_poly(&self) -> &SparsePolynomial {
        &self.terms
    }

    pub fn coefficient(&self, exps: &ExponentVector) -> BigInt {
        self.terms.coefficient(exps)
    }

    /// Degree bound of a combined series is the weaker of the two bounds.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let bound = self.max_total_degree.min(other.max_total_degree);
        Ok(TruncatedSeries::new(
            self.terms.mul(&other.terms, Some(bound))?,
            bound,
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let bound = self.max_total_degree.min(other.max_total_degree);
        Ok(TruncatedSeries::new(self.terms.add(&other.terms)?, bound))
    }
}

/// Packed-term kernel for the Bareiss inner loop.
///
/// A term is a `u128` key (total degree in the top byte, then one byte per
/// variable, most significant first, so numeric order on keys is exactly
/// ascending graded-lex) with an `i128` coefficient. Anything that does not
/// fit (more than 15 variables, exponents or degrees beyond 255, or
/// coefficient overflow) makes the kernel return `None` and the caller
/// falls back to the exact `BigInt` path, so results never depend on which
/// path ran.
mod packed {
    use super::SparsePolynomial;
    use num_bigint::BigInt;
    use std::collections::BTreeMap;
    use std::hash::{BuildHasherDefault, Hasher};

    pub const MAX_VARS: usize = 15;

    #[derive(Default)]
    pub struct KeyHasher(u64);

    impl Hasher for KeyHasher {
        fn finish(&self) -> u64 {
            self.0
        }
        fn write(&mut self, bytes: &[u8]) {
            for &b in bytes {
                self.0 = (self.0 ^ u64::from(b)).wrapping_mul(0x100000001b3);
            }
        }
        fn write_u128(&mut self, v: u128) {
            let mixed = (v as u64) ^ ((v >> 64) as u64);
            self.0 = mixed.wrapping_mul(0x9e3779b97f4a7c15);
        }
    }

    type KeyMap = std::collections::HashMap<u128, i128, BuildHasherDefault<KeyHasher>>;

    /// Terms sorted by key, plus the largest single byte seen in any key
    /// (used to prove that key addition cannot carry between bytes).
    pub struct Packed {
        pub terms: Vec<(u128, i128)>,
        pub max_byte: u32,
    }

    fn key_of(num_vars: usize, exps: &[u32]) -> Option<(u128, u32)> {
        let mut degree: u64 = 0;
        for &e in exps {
            if e > 255 {
                return None;
            }
            degree += u64::from(e);
        }
        if degree > 255 {
            return None;
        }
        let degree = degree as u32;
        let mut key = (degree as u128) << 120;
        let mut max_byte = degree;
        for (i, &e) in exps.iter().enumerate() {
            max_byte = max_byte.max(e);
            key |= (e as u128) << (112 - 8 * i);
        }
        debug_assert!(num_vars <= MAX_VARS);
        Some((key, max_byte))
    }

    pub fn degree_of(key: u128) -> u32 {
        (key >> 120) as u32
    }

    fn unpack_exps(num_vars: usize, key: u128) -> Vec<u32> {
        (0..num_vars)
            .map(|i| ((key >> (112 - 8 * i)) & 0xff) as u32)
            .collect()
    }

    pub fn pack(p: &SparsePolynomial) -> Option<Packed> {
        if p.num_vars() > MAX_VARS {
            return None;
        }
        let mut terms = Vec::with_capacity(p.num_terms());
        let mut max_byte = 0;
        for (e, c) in p.terms() {
            let (key, mb) = key_of(p.num_vars(), &e.0)?;
            let coeff = i128::try_from(c).ok()?;
            max_byte = max_byte.max(mb);
            terms.push((key, coeff));
        }
        // BTreeMap iteration is already ascending graded-lex
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        Some(Packed { terms, max_byte })
    }

    pub fn unpack(
        num_vars: usize,
        terms: impl IntoIterator<Item = (u128, i128)>,
    ) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            num_vars,
            terms
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (unpack_exps(num_vars, k), BigInt::from(c))),
        )
    }

    /// `acc += sign * a * b`; `None` on coefficient overflow. Key addition
    /// is carry-free because the callers check `max_byte` sums first.
    fn accumulate(acc: &mut KeyMap, a: &Packed, b: &Packed, negate: bool) -> Option<()> {
        for &(ka, ca) in &a.terms {
            for &(kb, cb) in &b.terms {
                let mut prod = ca.checked_mul(cb)?;
                if negate {
                    prod = prod.checked_neg()?;
                }
                let slot = acc.entry(ka + kb).or_insert(0);
                *slot = slot.checked_add(prod)?;
            }
        }
        Some(())
    }

    /// One Bareiss update `(pivot * a - b * c) / prev`, entirely in packed
    /// arithmetic. `None` means "retry with BigInt"; an inexact division
    /// still panics here because exactness does not depend on the
    /// representation.
    pub fn bareiss_update(
        pivot: &SparsePolynomial,
        a: &SparsePolynomial,
        b: &SparsePolynomial,
        c: &SparsePolynomial,
        prev: &SparsePolynomial,
    ) -> Option<SparsePolynomial> {
        let num_vars = pivot.num_vars();
        let (pivot, a, b, c, prev) = (pack(pivot)?, pack(a)?, pack(b)?, pack(c)?, pack(prev)?);
        if pivot.max_byte + a.max_byte > 255 || b.max_byte + c.max_byte > 255 {
            return None;
        }
        let mut acc = KeyMap::default();
        accumulate(&mut acc, &pivot, &a, false)?;
        accumulate(&mut acc, &b, &c, true)?;
        let mut remainder: BTreeMap<u128, i128> =
            acc.into_iter().filter(|&(_, c)| c != 0).collect();

        // exact long division by `prev` in packed form
        if prev.terms.is_empty() {
            panic!("division by zero polynomial");
        }
        let &(dkey, dcoeff) = prev.terms.last().unwrap();
        let mut quotient: Vec<(u128, i128)> = Vec::new();
        while let Some((&rkey, &rcoeff)) = remainder.last_key_value() {
            let (qkey, qmax) = checked_key_sub(num_vars, rkey, dkey)
                .expect("Bareiss elimination produced an inexact division");
            assert!(
                rcoeff % dcoeff == 0,
                "Bareiss elimination produced an inexact division"
            );
            // cross terms of the quotient and divisor may exceed the byte
            // range even when the numerator fits; retry slowly if so
            if qmax + prev.max_byte > 255 {
                return None;
            }
            let qcoeff = rcoeff / dcoeff;
            // subtract qterm * prev from the remainder
            for &(k, c) in &prev.terms {
                let prod = c.checked_mul(qcoeff)?;
                let key = k + qkey;
                let slot = remainder.entry(key).or_insert(0);
                *slot = slot.checked_sub(prod)?;
                if *slot == 0 {
                    remainder.remove(&key);
                }
            }
            quotient.push((qkey, qcoeff));
        }
        Some(unpack(num_vars, quotient))
    }

    /// Byte-wise key subtraction, also reporting the largest result byte;
    /// `None` if any byte (degree included) would go negative, which
    /// signals an inexact monomial division.
    fn checked_key_sub(num_vars: usize, r: u128, d: u128) -> Option<(u128, u32)> {
        let mut out = 0u128;
        let mut max_byte = 0;
        for byte in (0..=num_vars).map(|i| 120 - 8 * i) {
            let rb = (r >> byte) & 0xff;
            let db = (d >> byte) & 0xff;
            if db > rb {
                return None;
            }
            max_byte = max_byte.max((rb - db) as u32);
            out |= (rb - db) << byte;
        }
        Some((out, max_byte))
    }

    /// Fast truncated product used by the series machinery; `None` falls
    /// back to the map-based product.
    pub fn mul(
        a: &SparsePolynomial,
        b: &SparsePolynomial,
        truncation: Option<u32>,
    ) -> Option<SparsePolynomial> {
        let num_vars = a.num_vars();
        let (a, b) = (pack(a)?, pack(b)?);
        if a.max_byte + b.max_byte > 255 {
            return None;
        }
        let mut acc = KeyMap::default();
        for &(ka, ca) in &a.terms {
            if let Some(bound) = truncation {
                if degree_of(ka) > bound {
                    continue;
                }
            }
            for &(kb, cb) in &b.terms {
                if let Some(bound) = truncation {
                    // b's terms ascend by degree
                    if degree_of(ka) + degree_of(kb) > bound {
                        break;
                    }
                }
                let prod = ca.checked_mul(cb)?;
                let slot = acc.entry(ka + kb).or_insert(0);
                *slot = slot.checked_add(prod)?;
            }
        }
        let mut terms: Vec<(u128, i128)> = acc.into_iter().collect();
        terms.sort_unstable_by_key(|&(k, _)| k);
        Some(unpack(num_vars, terms))
    }

}

/// Determinant of a square matrix of polynomials, by fraction-free Bareiss
/// elimination.
///
/// Pivots are chosen to minimize Markowitz fill (then term count) so the
/// `I - UM` matrices coming out of the zeta construction keep their
/// constant-1 diagonal pivots and the minors stay sparse. Every
/// intermediate division is exact by the Bareiss identity; an inexact
/// division can only mean corrupted arithmetic, so it panics.
pub fn poly_det(matrix: &[Vec<SparsePolynomial>]) -> Result<SparsePolynomial> {
    let n = matrix.len();
    for row in matrix {
        if row.len() != n {
            return Err(Error::NonSquareMatrix {
                rows: n,
                cols: row.len(),
            });
        }
    }
    if n == 0 {
        return Ok(SparsePolynomial::one(0));
    }
    let num_vars = matrix[0][0].num_vars();
    for row in matrix {
        for entry in row {
            if entry.num_vars() != num_vars {
                return Err(Error::VariableMismatch {
                    left: num_vars,
                    right: entry.num_vars(),
                });
            }
        }
    }

    let mut m: Vec<Vec<SparsePolynomial>> = matrix.to_vec();
    let mut sign = false;
    let mut prev_pivot = SparsePolynomial::one(num_vars);
    for k in 0..n {
        // pivot from the sparsest column, breaking ties by Markowitz fill
        // (nnz_row - 1)(nnz_col - 1) and then by term count, to keep the
        // minors small
        let col_nnz: Vec<usize> = (k..n)
            .map(|col| (k..n).filter(|&r| !m[r][col].is_zero()).count())
            .collect();
        let row_nnz: Vec<usize> = (k..n)
            .map(|row| (k..n).filter(|&c| !m[row][c].is_zero()).count())
            .collect();
        if col_nnz.contains(&0) {
            return Ok(SparsePolynomial::zero(num_vars));
        }
        let mut best: Option<(usize, usize, usize, usize, usize)> = None;
        for col in k..n {
            for row in k..n {
                if m[row][col].is_zero() {
                    continue;
                }
                let fill = (row_nnz[row - k] - 1) * (col_nnz[col - k] - 1);
                let key = (fill, m[row][col].num_terms(), col_nnz[col - k], row, col);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        let (_, _, _, prow, pcol) = best.unwrap();
        if prow != k {
            m.swap(prow, k);
            sign = !sign;
        }
        if pcol != k {
            for row in m.iter_mut() {
                row.swap(pcol, k);
            }
            sign = !sign;
        }
        let pivot = m[k][k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = packed::bareiss_update(&pivot, &m[i][j], &m[i][k], &m[k][j], &prev_pivot)
                    .unwrap_or_else(|| {
                        let num = pivot
                            .mul_raw(&m[i][j], None)
                            .add_raw(&m[i][k].mul_raw(&m[k][j], None).neg());
                        num.div_exact(&prev_pivot)
                            .expect("Bareiss elimination produced an inexact division")
                    });
            }
            m[i][k] = SparsePolynomial::zero(num_vars);
        }
        prev_pivot = pivot;
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if sign { det.neg() } else { det })
}

/// Inverts `p` as a power series up to total degree `bound`.
///
/// Requires constant term exactly 1. Writes `p = 1 - q` and sums the
/// Neumann series `1 + q + q^2 + ...`; each extra factor of `q` raises the
/// minimum total degree, so at most `bound / mindeg(q) + 1` products are
/// taken (for a zeta inverse `mindeg(q)` is the girth).
pub fn series_inverse(p: &SparsePolynomial, bound: u32) -> Result<TruncatedSeries> {
    if !p.constant_term().is_one() {
        return Err(Error::NonUnitConstant {
            found: p.constant_term().to_string(),
        });
    }
    let n = p.num_vars();
    let q = SparsePolynomial::one(n).add_raw(&p.neg()).truncate(bound);
    let mut acc = SparsePolynomial::one(n);
    let mut power = SparsePolynomial::one(n);
    while !power.is_zero() {
        power = power.mul_raw(&q, Some(bound));
        acc = acc.add_raw(&power);
    }
    Ok(TruncatedSeries::new(acc, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(num_vars: usize, terms: &[(&[u32], i64)]) -> SparsePolynomial {
        SparsePolynomial::from_terms(
            num_vars,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
    }

    #[test]
    fn graded_lex_orders_by_degree_then_lex() {
        let a = ExponentVector(vec![0, 0, 0]);
        let b = ExponentVector(vec![0, 0, 2]);
        let c = ExponentVector(vec![1, 1, 0]);
        let d = ExponentVector(vec![2, 0, 0]);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn add_cancels_inverse_terms() {
        let m = poly(3, &[(&[1, 1, 1], 1)]);
        let sum = m.add(&m.neg()).unwrap();
        assert!(sum.is_zero());
    }

    #[test]
    fn add_recovers_constant() {
        let a = poly(3, &[(&[0, 0, 0], 1), (&[1, 1, 1], -2)]);
        let b = poly(3, &[(&[1, 1, 1], 2)]);
        assert_eq!(a.add(&b).unwrap(), SparsePolynomial::one(3));
    }

    #[test]
    fn add_mismatched_vars_fails() {
        let a = SparsePolynomial::one(2);
        let b = SparsePolynomial::one(3);
        assert!(matches!(
            a.add(&b),
            Err(Error::VariableMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn mul_difference_of_squares() {
        let a = poly(1, &[(&[0], 1), (&[1], -1)]);
        let b = poly(1, &[(&[0], 1), (&[1], 1)]);
        assert_eq!(a.mul(&b, None).unwrap(), poly(1, &[(&[0], 1), (&[2], -1)]));
    }

    #[test]
    fn mul_monomials_concatenates_exponents() {
        let a = poly(7, &[(&[1, 1, 1, 0, 0, 0, 0], 1)]);
        let b = poly(7, &[(&[0, 0, 0, 0, 1, 1, 1], 1)]);
        assert_eq!(
            a.mul(&b, None).unwrap(),
            poly(7, &[(&[1, 1, 1, 0, 1, 1, 1], 1)])
        );
    }

    // independent schoolbook product used as the multiplication oracle
    fn naive_mul(a: &SparsePolynomial, b: &SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero(a.num_vars());
        for (ea, ca) in a.terms() {
            for (eb, cb) in b.terms() {
                let exps: Vec<u32> = ea.0.iter().zip(&eb.0).map(|(x, y)| x + y).collect();
                out = out
                    .add(&SparsePolynomial::monomial(a.num_vars(), &exps, ca * cb))
                    .unwrap();
            }
        }
        out
    }

    #[test]
    fn mul_matches_naive_oracle_on_zeta_style_terms() {
        // pairwise products of the 13 terms of a Code-B-like polynomial
        let terms: Vec<SparsePolynomial> = code_b_zeta_inverse_terms()
            .into_iter()
            .map(|(e, c)| SparsePolynomial::monomial(7, &e, c))
            .collect();
        for a in &terms {
            for b in &terms {
                assert_eq!(a.mul(b, None).unwrap(), naive_mul(a, b));
            }
        }
        // and the full polynomial squared
        let full = terms
            .iter()
            .fold(SparsePolynomial::zero(7), |acc, t| acc.add(t).unwrap());
        assert_eq!(full.mul(&full, None).unwrap(), naive_mul(&full, &full));
    }

    fn code_b_zeta_inverse_terms() -> Vec<(Vec<u32>, i64)> {
        vec![
            (vec![0, 0, 0, 0, 0, 0, 0], 1),
            (vec![1, 1, 1, 0, 0, 0, 0], -2),
            (vec![2, 2, 2, 0, 0, 0, 0], 1),
            (vec![0, 0, 0, 0, 1, 1, 1], -2),
            (vec![1, 1, 1, 0, 1, 1, 1], 4),
            (vec![2, 2, 2, 0, 1, 1, 1], -2),
            (vec![1, 1, 1, 2, 1, 1, 1], -4),
            (vec![2, 2, 2, 2, 1, 1, 1], 4),
            (vec![0, 0, 0, 0, 2, 2, 2], 1),
            (vec![1, 1, 1, 0, 2, 2, 2], -2),
            (vec![2, 2, 2, 0, 2, 2, 2], 1),
            (vec![1, 1, 1, 2, 2, 2, 2], 4),
            (vec![2, 2, 2, 2, 2, 2, 2], -4),
        ]
    }

    #[test]
    fn det_two_by_two() {
        let u1 = SparsePolynomial::variable(2, 0);
        let u2 = SparsePolynomial::variable(2, 1);
        let one = SparsePolynomial::one(2);
        let det = poly_det(&[vec![one.clone(), u1], vec![u2, one]]).unwrap();
        assert_eq!(det, poly(2, &[(&[0, 0], 1), (&[1, 1], -1)]));
    }

    #[test]
    fn det_identity_14() {
        let n = 14;
        let m: Vec<Vec<SparsePolynomial>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            SparsePolynomial::one(3)
                        } else {
                            SparsePolynomial::zero(3)
                        }
                    })
                    .collect()
            })
            .collect();
        assert_eq!(poly_det(&m).unwrap(), SparsePolynomial::one(3));
    }

    #[test]
    fn det_singular_matrix_is_zero() {
        let u = SparsePolynomial::variable(1, 0);
        let m = vec![vec![u.clone(), u.clone()], vec![u.clone(), u]];
        assert!(poly_det(&m).unwrap().is_zero());
    }

    // Leibniz expansion over all permutations, the determinant oracle
    fn leibniz_det(m: &[Vec<SparsePolynomial>]) -> SparsePolynomial {
        let n = m.len();
        let num_vars = m[0][0].num_vars();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = SparsePolynomial::zero(num_vars);
        permute(&mut perm, 0, &mut |p, odd| {
            let mut prod = SparsePolynomial::one(num_vars);
            for (i, &j) in p.iter().enumerate() {
                prod = prod.mul(&m[i][j], None).unwrap();
            }
            acc = acc.add(&if odd { prod.neg() } else { prod }).unwrap();
        });
        acc
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], bool)) {
        let n = p.len();
        if k == n {
            let mut odd = false;
            let mut seen = vec![false; n];
            for s in 0..n {
                if seen[s] {
                    continue;
                }
                let mut len = 0;
                let mut t = s;
                while !seen[t] {
                    seen[t] = true;
                    t = p[t];
                    len += 1;
                }
                if len % 2 == 0 {
                    odd = !odd;
                }
            }
            f(p, odd);
            return;
        }
        for i in k..n {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn det_matches_leibniz_on_monomial_matrices() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..20 {
            let m: Vec<Vec<SparsePolynomial>> = (0..4)
                .map(|_| {
                    (0..4)
                        .map(|_| {
                            let coeff = (next() % 7) as i64 - 3;
                            let exps: Vec<u32> = (0..3).map(|_| (next() % 3) as u32).collect();
                            SparsePolynomial::monomial(3, &exps, coeff)
                        })
                        .collect()
                })
                .collect();
            assert_eq!(poly_det(&m).unwrap(), leibniz_det(&m));
        }
    }

    #[test]
    fn series_inverse_geometric() {
        let p = poly(1, &[(&[0], 1), (&[1], -1)]);
        let s = series_inverse(&p, 3).unwrap();
        assert_eq!(
            s.as_poly(),
            &poly(1, &[(&[0], 1), (&[1], 1), (&[2], 1), (&[3], 1)])
        );
    }

    #[test]
    fn series_inverse_requires_unit_constant() {
        let p = poly(1, &[(&[0], 2)]);
        assert!(matches!(
            series_inverse(&p, 4),
            Err(Error::NonUnitConstant { .. })
        ));
        let q = poly(1, &[(&[1], 1)]);
        assert!(series_inverse(&q, 4).is_err());
    }

    #[test]
    fn series_inverse_is_right_inverse() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..30 {
            let nv = 1 + (next() % 4) as usize;
            let mut p = SparsePolynomial::one(nv);
            for _ in 0..(next() % 6) {
                let coeff = (next() % 9) as i64 - 4;
                let exps: Vec<u32> = (0..nv).map(|_| (next() % 3) as u32).collect();
                if exps.iter().all(|&e| e == 0) {
                    continue;
                }
                p = p
                    .add(&SparsePolynomial::monomial(nv, &exps, coeff))
                    .unwrap();
            }
            let bound = 6;
            let inv = series_inverse(&p, bound).unwrap();
            let product = p.mul(inv.as_poly(), Some(bound)).unwrap();
            assert_eq!(product, SparsePolynomial::one(nv), "p = {p}");
        }
    }

    #[test]
    fn products_beyond_the_packed_range_still_multiply_exactly() {
        // exponent sum 400 exceeds the packed byte range, forcing the
        // fallback path; the result must be the same either way
        let a = poly(1, &[(&[200], 1), (&[0], 1)]);
        let product = a.mul(&a, None).unwrap();
        assert_eq!(product, poly(1, &[(&[400], 1), (&[200], 2), (&[0], 1)]));

        // coefficients beyond i128 take the BigInt path
        let big: BigInt = BigInt::from(1) << 100;
        let b =
            SparsePolynomial::from_terms(1, [(vec![1], big.clone()), (vec![0], BigInt::from(1))]);
        let square = b.mul(&b, None).unwrap();
        assert_eq!(square.coefficient(&ExponentVector(vec![2])), &big * &big);
        assert_eq!(square.coefficient(&ExponentVector(vec![1])), &big * 2);

        // more than 15 variables cannot pack at all
        let wide = SparsePolynomial::monomial(16, &[1; 16], 3);
        let sq = wide.mul(&wide, None).unwrap();
        assert_eq!(sq, SparsePolynomial::monomial(16, &[2; 16], 9));
    }

    #[test]
    fn determinant_survives_unpackable_entries() {
        // 2x2 with an exponent too large for the packed kernel
        let a = poly(1, &[(&[300], 1)]);
        let one = SparsePolynomial::one(1);
        let det = poly_det(&[vec![one.clone(), a.clone()], vec![a, one]]).unwrap();
        assert_eq!(det, poly(1, &[(&[0], 1), (&[600], -1)]));
    }

    #[test]
    fn series_arithmetic_takes_weaker_bound() {
        let a = TruncatedSeries::new(poly(2, &[(&[0, 0], 1), (&[1, 0], 1)]), 5);
        let b = TruncatedSeries::new(poly(2, &[(&[0, 0], 1), (&[0, 1], 1)]), 3);
        assert_eq!(a.mul(&b).unwrap().max_total_degree(), 3);
        assert_eq!(a.add(&b).unwrap().max_total_degree(), 3);
    }

    #[test]
    fn display_canonical_form() {
        let p = poly(
            7,
            &[(&[0, 0, 0, 0, 0, 0, 0], 1), (&[1, 1, 1, 0, 0, 0, 0], -2)],
        );
        assert_eq!(p.to_string(), "1 + -2*u1*u2*u3");
        assert_eq!(SparsePolynomial::zero(2).to_string(), "0");
        let sq = poly(2, &[(&[2, 1], 3)]);
        assert_eq!(sq.to_string(), "3*u1^2*u2");
    }

    #[test]
    fn serde_round_trip() {
        let p = poly(3, &[(&[0, 0, 0], 1), (&[2, 0, 1], -12)]);
        let json = serde_json::to_string(&p).unwrap();
        let back: SparsePolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(p, back);
    }
}
