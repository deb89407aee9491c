//! Sparse arithmetic in the n-th Weyl algebra.
//!
//! Elements are finite sums of normal-ordered monomials `x^a ∂^b` with every
//! `x` to the left of every `∂`. The commutation rule is
//! `∂^j x_i = x_i ∂^j + δ^j_i`, which makes the Fock action (x multiplies,
//! ∂ differentiates) a representation on `ℚ[x_1, ..., x_n]`.
//!
//! Completed elements (power series in ∂) are handled through explicit
//! truncation orders: [`WeylElement::truncate`] drops every term whose
//! ∂-degree exceeds the order.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Exponent vector of length n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    /// The unit vector `e_i` (zero-based).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn from_vec(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// Exponent vector counting the occurrences of each letter in `letters`.
    pub fn from_letters(n: usize, letters: &[usize]) -> Self {
        let mut v = vec![0; n];
        for &l in letters {
            v[l] += 1;
        }
        MultiIndex(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn divides(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; caller guarantees `other.divides(self)`.
    pub fn sub(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Letters `0..n` repeated by multiplicity, in increasing order.
    pub fn letters(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    /// All multi-indices of length `n` and total degree exactly `degree`,
    /// in lexicographic order.
    pub fn all_of_degree(n: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if pos + 1 == n {
                cur[pos] = left;
                out.push(MultiIndex(cur.clone()));
                cur[pos] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[pos] = e;
                rec(n, pos + 1, left - e, cur, out);
            }
            cur[pos] = 0;
        }
        let mut out = Vec::new();
        if n == 0 {
            if degree == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(n, 0, degree, &mut vec![0; n], &mut out);
        out.sort();
        out
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, var: &str, first: &mut bool) -> fmt::Result {
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !*first {
                f.write_str("*")?;
            }
            *first = false;
            if e == 1 {
                write!(f, "{var}{}", i + 1)?;
            } else {
                write!(f, "{var}{}^{e}", i + 1)?;
            }
        }
        Ok(())
    }
}

/// Normal-ordered monomial `x^x ∂^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: MultiIndex,
    pub d: MultiIndex,
}

impl Monomial {
    pub fn new(x: MultiIndex, d: MultiIndex) -> Self {
        Monomial { x, d }
    }

    pub fn one(n: usize) -> Self {
        Monomial { x: MultiIndex::zero(n), d: MultiIndex::zero(n) }
    }
}

/// Lexicographic on `(x, d)`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.d.cmp(&other.d))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        self.x.fmt_with(f, "x", &mut first)?;
        self.d.fmt_with(f, "d", &mut first)?;
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Maximum retained ∂-degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncationOrder(pub u32);

impl TruncationOrder {
    pub fn get(self) -> u32 {
        self.0
    }
}

/// An element of the Weyl algebra `A_n` in canonical normal-ordered form.
///
/// No stored coefficient is zero, so the zero element is the empty map and
/// equality is structural.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    n: usize,
    terms: HashMap<Monomial, Rational>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement { n, terms: HashMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Rational::one())
    }

    pub fn scalar(n: usize, c: Rational) -> Self {
        let mut e = Self::zero(n);
        e.add_term(Monomial::one(n), c);
        e
    }

    /// The generator `x_i` (zero-based `i`).
    pub fn x(n: usize, i: usize) -> Result<Self> {
        check_index(n, i)?;
        Ok(Self::monomial(Monomial::new(MultiIndex::unit(n, i), MultiIndex::zero(n)), Rational::one()))
    }

    /// The generator `∂^j` (zero-based `j`).
    pub fn d(n: usize, j: usize) -> Result<Self> {
        check_index(n, j)?;
        Ok(Self::monomial(Monomial::new(MultiIndex::zero(n), MultiIndex::unit(n, j)), Rational::one()))
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut e = Self::zero(m.x.len());
        e.add_term(m, c);
        e
    }

    /// Builds an element from `(monomial, coefficient)` pairs, merging
    /// duplicates and dropping zeros.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut e = Self::zero(n);
        for (m, c) in terms {
            if m.x.len() != n {
                return Err(Error::BadMultiIndex { expected: n, got: m.x.len() });
            }
            if m.d.len() != n {
                return Err(Error::BadMultiIndex { expected: n, got: m.d.len() });
            }
            e.add_term(m, c);
        }
        Ok(e)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Terms in lexicographic `(x, d)` order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Rational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    fn same_dim(&self, other: &WeylElement) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn add(&self, other: &WeylElement) -> Result<WeylElement> {
        self.same_dim(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &WeylElement) -> Result<WeylElement> {
        self.same_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &WeylElement) {
        debug_assert_eq!(self.n, other.n);
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub(crate) fn add_scaled_unchecked(&mut self, c: &Rational, other: &WeylElement) {
        debug_assert_eq!(self.n, other.n);
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), c * v);
        }
    }

    pub fn scale(&self, c: &Rational) -> WeylElement {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        WeylElement {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> WeylElement {
        self.scale(&-Rational::one())
    }

    /// Product in `A_n`, normal ordered.
    pub fn mul(&self, other: &WeylElement) -> Result<WeylElement> {
        self.same_dim(other)?;
        Ok(self.mul_bounded(other, None))
    }

    /// `truncate(self * other, order)`, skipping every contraction whose
    /// result would exceed the order.
    pub fn mul_truncated(&self, other: &WeylElement, order: TruncationOrder) -> Result<WeylElement> {
        self.same_dim(other)?;
        Ok(self.mul_bounded(other, Some(order.0)))
    }

    pub(crate) fn mul_bounded(&self, other: &WeylElement, max_d: Option<u32>) -> WeylElement {
        let mut out = WeylElement::zero(self.n);
        for (ma, ca) in &self.terms {
            let da = ma.d.total_degree();
            for (mb, cb) in &other.terms {
                let coeff = ca * cb;
                mul_monomials(ma, da, mb, &coeff, max_d, &mut out);
            }
        }
        out
    }

    /// Drops every term whose ∂-degree exceeds `order`.
    pub fn truncate(&self, order: TruncationOrder) -> WeylElement {
        WeylElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.d.total_degree() <= order.0)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Largest total x-degree, `-1` for zero.
    pub fn x_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.x.total_degree() as i64).max().unwrap_or(-1)
    }

    /// Largest total ∂-degree, `-1` for zero.
    pub fn d_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.d.total_degree() as i64).max().unwrap_or(-1)
    }

    /// The ∂-free part, read off directly.
    pub fn d_free_part(&self) -> Polynomial {
        Polynomial(WeylElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.d.is_zero())
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        })
    }

    /// Fock action `self ▷ p`: x multiplies, ∂ differentiates.
    pub fn fock_apply(&self, p: &Polynomial) -> Result<Polynomial> {
        self.same_dim(&p.0)?;
        let mut out = WeylElement::zero(self.n);
        for (mp, cp) in &p.0.terms {
            for (m, c) in &self.terms {
                if !m.d.divides(&mp.x) {
                    continue;
                }
                let mut factor = BigInt::one();
                for (&have, &take) in mp.x.0.iter().zip(&m.d.0) {
                    factor *= falling_factorial(have, take);
                }
                let x = m.x.add(&mp.x.sub(&m.d));
                let coeff = c * cp * Rational::from_integer(factor);
                out.add_term(Monomial::new(x, MultiIndex::zero(self.n)), coeff);
            }
        }
        Ok(Polynomial(out))
    }

    /// Checks the canonical-form invariant; used by tests.
    pub fn is_canonical(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| !c.is_zero() && m.x.len() == self.n && m.d.len() == self.n)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.sorted_terms())
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: Vec<(&Monomial, &Rational)>) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (idx, (m, c)) in terms.into_iter().enumerate() {
        let neg = c < &Rational::zero();
        let abs = if neg { -c } else { c.clone() };
        match (idx, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let is_unit = m.x.is_zero() && m.d.is_zero();
        if abs.is_one() {
            write!(f, "{m}")?;
        } else if is_unit {
            f.write_str(&rational::to_string(&abs))?;
        } else {
            write!(f, "{}*{m}", rational::to_string(&abs))?;
        }
    }
    Ok(())
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    Ok(())
}

fn falling_factorial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// Per-coordinate contraction weight `C(b,t)·C(c,t)·t!`.
fn contraction_weight(b: u32, c: u32, t: u32) -> BigInt {
    rational::binomial(b, t) * rational::binomial(c, t) * rational::factorial(t)
}

/// Accumulates `coeff · (x^a ∂^b)(x^c ∂^d)` into `out` using
/// `∂^b x^c = Σ_t C(b,t) C(c,t) t! x^{c-t} ∂^{b-t}`.
fn mul_monomials(
    left: &Monomial,
    left_d: u32,
    right: &Monomial,
    coeff: &Rational,
    max_d: Option<u32>,
    out: &mut WeylElement,
) {
    let n = left.x.len();
    let right_d = right.d.total_degree();
    // Contractions needed to bring the ∂-degree within bounds.
    let min_t = match max_d {
        Some(cap) => (left_d + right_d).saturating_sub(cap),
        None => 0,
    };
    let bounds: Vec<u32> = (0..n).map(|i| left.d.0[i].min(right.x.0[i])).collect();
    let max_t: u32 = bounds.iter().sum();
    if max_t < min_t {
        return;
    }
    if max_t == 0 {
        let m = Monomial::new(left.x.add(&right.x), left.d.add(&right.d));
        out.add_term(m, coeff.clone());
        return;
    }
    let mut t = vec![0u32; n];
    loop {
        let total: u32 = t.iter().sum();
        if total >= min_t {
            let mut weight = BigInt::one();
            for i in 0..n {
                if t[i] > 0 {
                    weight *= contraction_weight(left.d.0[i], right.x.0[i], t[i]);
                }
            }
            let x: Vec<u32> = (0..n).map(|i| left.x.0[i] + right.x.0[i] - t[i]).collect();
            let d: Vec<u32> = (0..n).map(|i| left.d.0[i] - t[i] + right.d.0[i]).collect();
            out.add_term(
                Monomial::new(MultiIndex(x), MultiIndex(d)),
                coeff * Rational::from_integer(weight),
            );
        }
        // odometer over 0..=bounds
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            if t[i] < bounds[i] {
                t[i] += 1;
                break;
            }
            t[i] = 0;
            i += 1;
        }
    }
}

/// A commutative polynomial in `x_1, ..., x_n`: a Weyl element free of ∂.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial(WeylElement);

impl Polynomial {
    pub fn new(e: WeylElement) -> Result<Self> {
        if let Some((m, _)) = e.terms.iter().find(|(m, _)| !m.d.is_zero()) {
            return Err(Error::NotAPolynomial(m.to_string()));
        }
        Ok(Polynomial(e))
    }

    pub fn zero(n: usize) -> Self {
        Polynomial(WeylElement::zero(n))
    }

    /// The vacuum `1`.
    pub fn one(n: usize) -> Self {
        Polynomial(WeylElement::one(n))
    }

    pub fn var(n: usize, i: usize) -> Result<Self> {
        Ok(Polynomial(WeylElement::x(n, i)?))
    }

    pub fn monomial(exponents: MultiIndex, c: Rational) -> Self {
        let n = exponents.len();
        Polynomial(WeylElement::monomial(Monomial::new(exponents, MultiIndex::zero(n)), c))
    }

    /// The commutative product `x_{w_1} ··· x_{w_k}` scaled by `c`.
    pub fn word(n: usize, letters: &[usize], c: Rational) -> Self {
        Self::monomial(MultiIndex::from_letters(n, letters), c)
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiIndex, Rational)>,
    {
        let e = WeylElement::from_terms(
            n,
            terms.into_iter().map(|(x, c)| (Monomial::new(x, MultiIndex::zero(n)), c)),
        )?;
        Ok(Polynomial(e))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_element(&self) -> &WeylElement {
        &self.0
    }

    pub fn into_element(self) -> WeylElement {
        self.0
    }

    /// Total degree, `-1` for zero.
    pub fn degree(&self) -> i64 {
        self.0.x_degree()
    }

    pub fn coeff(&self, exponents: &MultiIndex) -> Rational {
        self.0.coeff(&Monomial::new(exponents.clone(), MultiIndex::zero(self.n())))
    }

    /// `(exponents, coefficient)` in lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&MultiIndex, &Rational)> {
        self.0.sorted_terms().into_iter().map(|(m, c)| (&m.x, c)).collect()
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        Ok(Polynomial(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        Ok(Polynomial(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        Polynomial(self.0.scale(c))
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        Ok(Polynomial(self.0.mul(&other.0)?))
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_components(&self) -> std::collections::BTreeMap<u32, Polynomial> {
        let mut out: std::collections::BTreeMap<u32, Polynomial> = Default::default();
        for (m, c) in &self.0.terms {
            out.entry(m.x.total_degree())
                .or_insert_with(|| Polynomial::zero(self.n()))
                .0
                .add_term(m.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
