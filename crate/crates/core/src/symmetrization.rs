//! Generalized generators and symmetric orderings.
//!
//! A [`CoefficientFamily`] holds homogeneous polynomials `p^{N-1,l}_{ij}(∂)`
//! antisymmetric in `(i, j)`. The generators they define are
//!
//! ```text
//! X_i = x_i + Σ_{l,N,j} x_l p^{N-1,l}_{ij}(∂) ∂^j
//! ```
//!
//! and for every word `α` the symmetrized product satisfies
//! `Σ_σ X_{α_σ(1)} ··· X_{α_σ(k)} ▷ 1 = k! x_{α_1} ··· x_{α_k}`.
//! [`theorem_check`] evaluates both sides exactly for one instance.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg;
use crate::random::{self, small_rational, Density};
use crate::rational::{self, Rational};
use crate::weyl::{Monomial, MultiIndex, Polynomial, TruncationOrder, WeylElement};

/// Address of one coefficient: the `∂^m` coefficient of `p^{order-1,l}_{ij}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyKey {
    /// `N ≥ 1`; the polynomial has degree `N - 1`.
    pub order: u32,
    pub l: usize,
    pub i: usize,
    pub j: usize,
    pub m: MultiIndex,
}

impl FamilyKey {
    pub fn mirrored(&self) -> FamilyKey {
        FamilyKey { i: self.j, j: self.i, ..self.clone() }
    }
}

impl fmt::Display for FamilyKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = Monomial::new(MultiIndex::zero(self.m.len()), self.m.clone());
        write!(
            f,
            "p^({},{})_({},{})[{}]",
            self.order - 1,
            self.l + 1,
            self.i + 1,
            self.j + 1,
            m
        )
    }
}

/// Finitely supported family of coefficient polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientFamily {
    n: usize,
    n_max: u32,
    entries: BTreeMap<FamilyKey, Rational>,
}

impl CoefficientFamily {
    pub fn zero(n: usize, n_max: u32) -> Result<Self> {
        Self::from_entries(n, n_max, std::iter::empty())
    }

    /// Builds a family and checks every invariant, antisymmetry included.
    pub fn from_entries<I>(n: usize, n_max: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FamilyKey, Rational)>,
    {
        let fam = Self::from_raw_entries(n, n_max, entries)?;
        if let Some(key) = fam.antisymmetry_violations().first() {
            return Err(Error::InvalidFamily(format!(
                "{key} = {} but its mirror is {}",
                rational::to_string(&fam.get(key)),
                rational::to_string(&fam.get(&key.mirrored()))
            )));
        }
        Ok(fam)
    }

    /// Structural checks only (ranges, homogeneity, support). Antisymmetry
    /// is not enforced, which is what necessity controls need.
    pub fn from_raw_entries<I>(n: usize, n_max: u32, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (FamilyKey, Rational)>,
    {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        if n_max == 0 {
            return Err(Error::InvalidFamily("n_max must be at least 1".into()));
        }
        let mut map = BTreeMap::new();
        for (key, value) in entries {
            for v in [key.l, key.i, key.j] {
                if v >= n {
                    return Err(Error::IndexOutOfRange { index: v, n });
                }
            }
            if key.m.len() != n {
                return Err(Error::BadMultiIndex { expected: n, got: key.m.len() });
            }
            if key.order == 0 || key.order > n_max {
                return Err(Error::InvalidFamily(format!("order {} outside 1..={n_max}", key.order)));
            }
            if key.m.total_degree() + 1 != key.order {
                return Err(Error::InvalidFamily(format!("{key} is not homogeneous of degree {}", key.order - 1)));
            }
            if !value.is_zero() {
                map.insert(key, value);
            }
        }
        Ok(CoefficientFamily { n, n_max, entries: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn get(&self, key: &FamilyKey) -> Rational {
        self.entries.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&FamilyKey, &Rational)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Keys whose value differs from minus the mirrored value.
    pub fn antisymmetry_violations(&self) -> Vec<FamilyKey> {
        self.entries
            .iter()
            .filter(|(k, v)| self.get(&k.mirrored()) != -(*v).clone())
            .map(|(k, _)| k.clone())
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.antisymmetry_violations().is_empty()
    }

    /// `p^{order-1,l}_{ij}(∂)` as a pure-∂ element.
    pub fn polynomial(&self, order: u32, l: usize, i: usize, j: usize) -> WeylElement {
        let n = self.n;
        let lo = FamilyKey { order, l, i, j, m: MultiIndex::zero(n) };
        let terms = self
            .entries
            .range(lo..)
            .take_while(|(k, _)| k.order == order && k.l == l && k.i == i && k.j == j)
            .map(|(k, v)| (Monomial::new(MultiIndex::zero(n), k.m.clone()), v.clone()));
        WeylElement::from_terms(n, terms).expect("dimensions agree")
    }
}

/// Seeded random antisymmetric family.
///
/// Entries for `i < j` are drawn with probability `density`, values are
/// small rationals, and the `i > j` entries are their negatives.
pub fn random_family(n: usize, n_max: u32, density: &Rational, seed: u64) -> Result<CoefficientFamily> {
    let density = Density::new(density)?;
    let mut rng = random::rng(seed);
    let mut entries = Vec::new();
    for order in 1..=n_max {
        let monomials = MultiIndex::all_of_degree(n, order - 1);
        for l in 0..n {
            for i in 0..n {
                for j in i + 1..n {
                    for m in &monomials {
                        if density.sample(&mut rng) {
                            let v = small_rational(&mut rng);
                            let key = FamilyKey { order, l, i, j, m: m.clone() };
                            entries.push((key.mirrored(), -v.clone()));
                            entries.push((key, v));
                        }
                    }
                }
            }
        }
    }
    CoefficientFamily::from_entries(n, n_max, entries)
}

/// The generators `X_1, ..., X_n` of a family at a truncation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    family: CoefficientFamily,
    order: TruncationOrder,
    generators: Vec<WeylElement>,
}

impl GeneratorSet {
    pub fn n(&self) -> usize {
        self.family.n()
    }

    pub fn order(&self) -> TruncationOrder {
        self.order
    }

    pub fn family(&self) -> &CoefficientFamily {
        &self.family
    }

    pub fn generators(&self) -> &[WeylElement] {
        &self.generators
    }

    pub fn get(&self, i: usize) -> &WeylElement {
        &self.generators[i]
    }
}

/// `X_i = x_i + Σ entry(N,l,i,j,m) x_l ∂^m ∂^j` over `N ≤ min(n_max, order)`.
pub fn build_generators(family: &CoefficientFamily, order: TruncationOrder) -> GeneratorSet {
    let n = family.n();
    let mut generators: Vec<WeylElement> = (0..n).map(|i| WeylElement::x(n, i).expect("n > 0")).collect();
    for (key, value) in family.entries() {
        if key.order > order.0 {
            continue;
        }
        let m = Monomial::new(MultiIndex::unit(n, key.l), key.m.add(&MultiIndex::unit(n, key.j)));
        generators[key.i].add_term(m, value.clone());
    }
    debug_assert!(generators.iter().enumerate().all(|(i, g)| {
        g.terms().all(|(m, _)| m.x.total_degree() == 1)
            && g.d_free_part() == Polynomial::var(n, i).expect("in range")
    }));
    GeneratorSet { family: family.clone(), order, generators }
}

/// A word `α: {1..k} → {1..n}`, stored zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordSpec {
    n: usize,
    letters: Vec<usize>,
}

impl WordSpec {
    pub fn new(n: usize, letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = letters.iter().find(|&&l| l >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        Ok(WordSpec { n, letters })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn multiplicities(&self) -> MultiIndex {
        MultiIndex::from_letters(self.n, &self.letters)
    }

    /// The commutative monomial `x_{α_1} ··· x_{α_k}`.
    pub fn monomial(&self) -> Polynomial {
        Polynomial::word(self.n, &self.letters, Rational::one())
    }

    /// One-based letters, e.g. `(1,3,3,2)`.
    pub fn to_one_based(&self) -> Vec<usize> {
        self.letters.iter().map(|l| l + 1).collect()
    }
}

impl fmt::Display for WordSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_one_based().iter().join(","))
    }
}

/// The generator truncation is below `k - 1`, so terms that reach the
/// vacuum may be missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationWarning {
    pub order: u32,
    pub required: u32,
}

impl fmt::Display for TruncationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "generator truncation order {} is below {}; vacuum images may be inexact",
            self.order, self.required
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedProduct {
    pub element: WeylElement,
    pub warning: Option<TruncationWarning>,
}

fn prepare(g: &GeneratorSet, w: &WordSpec) -> Result<Option<TruncationWarning>> {
    if g.n() != w.n() {
        return Err(Error::DimensionMismatch { left: g.n(), right: w.n() });
    }
    let required = (w.k() - 1) as u32;
    Ok((g.order().0 < required).then_some(TruncationWarning { order: g.order().0, required }))
}

/// `Σ_σ X_{α_σ(1)} ··· X_{α_σ(k)}`, truncated at the generator order.
///
/// Products are formed right to left; a left factor never lowers the
/// ∂-degree of what stands to its right, so truncating every partial product
/// yields exactly the truncation of the full sum.
pub fn symmetrized_product(g: &GeneratorSet, w: &WordSpec) -> Result<SymmetrizedProduct> {
    symmetrized_product_to(g, w, g.order())
}

/// As [`symmetrized_product`], keeping only ∂-degree `≤ out`.
///
/// Repeated letters are grouped: the sum over all `k!` orderings equals
/// `Π m_a!` times the sum over distinct arrangements, and the latter obeys
/// `S(M) = Σ_{a ∈ M} X_a · S(M - a)`, evaluated with memoization over
/// sub-multisets.
pub fn symmetrized_product_to(g: &GeneratorSet, w: &WordSpec, out: TruncationOrder) -> Result<SymmetrizedProduct> {
    let warning = prepare(g, w)?;
    let counts: Vec<u32> = w.multiplicities().as_slice().to_vec();
    let mut memo: HashMap<Vec<u32>, WeylElement> = HashMap::new();
    let mut arrangements = arrangement_sum(g, &counts, out.0, &mut memo);
    let weight = counts
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, &c| acc * rational::factorial(c));
    if !weight.is_one() {
        arrangements = arrangements.scale(&Rational::from_integer(weight));
    }
    Ok(SymmetrizedProduct { element: arrangements, warning })
}

fn arrangement_sum(
    g: &GeneratorSet,
    counts: &[u32],
    out: u32,
    memo: &mut HashMap<Vec<u32>, WeylElement>,
) -> WeylElement {
    if counts.iter().all(|&c| c == 0) {
        return WeylElement::one(g.n());
    }
    if let Some(v) = memo.get(counts) {
        return v.clone();
    }
    let mut acc = WeylElement::zero(g.n());
    let mut rest = counts.to_vec();
    for a in 0..counts.len() {
        if counts[a] == 0 {
            continue;
        }
        rest[a] -= 1;
        let tail = arrangement_sum(g, &rest, out, memo);
        acc.add_assign_unchecked(&g.get(a).mul_bounded(&tail, Some(out)));
        rest[a] += 1;
    }
    memo.insert(counts.to_vec(), acc.clone());
    acc
}

/// Reference evaluation over all `k!` orderings, one product per permutation.
pub fn symmetrized_product_naive(g: &GeneratorSet, w: &WordSpec) -> Result<SymmetrizedProduct> {
    let warning = prepare(g, w)?;
    let out = g.order().0;
    let mut acc = WeylElement::zero(g.n());
    for perm in (0..w.k()).permutations(w.k()) {
        let mut prod = WeylElement::one(g.n());
        for &pos in perm.iter().rev() {
            prod = g.get(w.letters()[pos]).mul_bounded(&prod, Some(out));
        }
        acc.add_assign_unchecked(&prod);
    }
    Ok(SymmetrizedProduct { element: acc, warning })
}

/// Outcome of one exact symmetric-ordering check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremReport {
    pub word: WordSpec,
    /// `Σ_σ X_{α_σ(1)} ··· X_{α_σ(k)} ▷ 1`.
    pub lhs: Polynomial,
    /// `k! x_{α_1} ··· x_{α_k}`.
    pub expected: Polynomial,
    /// `lhs - expected`; zero iff the check passed.
    pub residual: Polynomial,
    pub warning: Option<TruncationWarning>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    /// Lexicographically first monomial of the residual.
    pub fn first_offending(&self) -> Option<(MultiIndex, Rational)> {
        self.residual.sorted_terms().first().map(|(m, c)| ((*m).clone(), (*c).clone()))
    }
}

/// Evaluates `Σ_σ X_{α_σ(1)} ··· X_{α_σ(k)} ▷ 1` and compares it exactly with
/// `k! x_{α_1} ··· x_{α_k}`.
///
/// Only the ∂-free part of an operator survives on the vacuum, so the
/// symmetrized product is formed at output order zero before acting.
pub fn theorem_check(g: &GeneratorSet, w: &WordSpec) -> Result<TheoremReport> {
    let product = symmetrized_product_to(g, w, TruncationOrder(0))?;
    let lhs = product.element.fock_apply(&Polynomial::one(g.n()))?;
    let k_fact = Rational::from_integer(rational::factorial(w.k() as u32));
    let expected = w.monomial().scale(&k_fact);
    let residual = lhs.sub(&expected)?;
    Ok(TheoremReport { word: w.clone(), lhs, expected, residual, warning: product.warning })
}

fn deleted_monomial(w: &WordSpec, skip: usize) -> Polynomial {
    let letters: Vec<usize> = w
        .letters()
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != skip)
        .map(|(_, &a)| a)
        .collect();
    Polynomial::word(w.n(), &letters, Rational::one())
}

/// Per-position contributions to the cancellation sum with `p` kept
/// symbolic: entry `i` maps `(α(i), s)` to `∂^s(Π_{r≠i} x_{α(r)})`, omitting
/// zero derivatives.
pub fn cancellation_contributions(w: &WordSpec) -> Vec<BTreeMap<(usize, usize), Polynomial>> {
    let n = w.n();
    (0..w.k())
        .map(|i| {
            let deleted = deleted_monomial(w, i);
            let mut map = BTreeMap::new();
            for s in 0..n {
                let ds = WeylElement::d(n, s).expect("in range").fock_apply(&deleted).expect("same n");
                if !ds.is_zero() {
                    map.insert((w.letters()[i], s), ds);
                }
            }
            map
        })
        .collect()
}

/// `Σ_i Σ_s p^{N-1,l}_{α(i)s}(∂) ▷ ∂^s(Π_{r≠i} x_{α(r)})` for one `(l, N)`.
///
/// Zero for every antisymmetric family.
pub fn cancellation_check(fam: &CoefficientFamily, w: &WordSpec, l: usize, order: u32) -> Result<Polynomial> {
    let n = fam.n();
    if w.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: w.n() });
    }
    if l >= n {
        return Err(Error::IndexOutOfRange { index: l, n });
    }
    if order == 0 || order > fam.n_max() {
        return Err(Error::InvalidFamily(format!("order {order} outside 1..={}", fam.n_max())));
    }
    let mut acc = Polynomial::zero(n);
    for (i, contributions) in cancellation_contributions(w).into_iter().enumerate() {
        let a = w.letters()[i];
        for ((_, s), derivative) in contributions {
            let p = fam.polynomial(order, l, a, s);
            if p.is_zero() {
                continue;
            }
            acc = acc.add(&p.fock_apply(&derivative)?)?;
        }
    }
    Ok(acc)
}

/// `ẽ`: each monomial `x_{α_1} ··· x_{α_k}` (α monotone) goes to the full
/// permutation sum of generators, truncated at the generator order.
pub fn e_tilde(p: &Polynomial, g: &GeneratorSet) -> Result<WeylElement> {
    image_by_degree(p, g, |_| Rational::one())
}

/// `e`: as [`e_tilde`] with each `k`-homogeneous component divided by `k!`.
pub fn e_map(p: &Polynomial, g: &GeneratorSet) -> Result<WeylElement> {
    image_by_degree(p, g, |k| Rational::from_integer(rational::factorial(k)).recip())
}

fn image_by_degree(p: &Polynomial, g: &GeneratorSet, weight: impl Fn(u32) -> Rational) -> Result<WeylElement> {
    let n = g.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { left: n, right: p.n() });
    }
    let mut out = WeylElement::zero(n);
    for (exponents, c) in p.sorted_terms() {
        let k = exponents.total_degree();
        let scale = c * weight(k);
        if k == 0 {
            out.add_scaled_unchecked(&scale, &WeylElement::one(n));
            continue;
        }
        let w = WordSpec::new(n, exponents.letters())?;
        let image = symmetrized_product(g, &w)?.element;
        out.add_scaled_unchecked(&scale, &image);
    }
    Ok(out)
}

/// `π(a) = a ▷ 1`. Computed through the Fock action and checked against the
/// ∂-free part of `a`.
pub fn pi_project(a: &WeylElement) -> Polynomial {
    let acted = a.fock_apply(&Polynomial::one(a.n())).expect("same n");
    let direct = a.d_free_part();
    assert_eq!(acted, direct, "vacuum image disagrees with the ∂-free part");
    acted
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanDimension {
    /// Rank of the `n^k` word products.
    pub dim_words: usize,
    /// `C(n + k - 1, k)`.
    pub dim_symmetric: usize,
}

/// Rank over ℚ of all products `X_{w_1} ··· X_{w_k}`, compared at ∂-degree
/// `≤ compare`.
///
/// The comparison is exact for the completed generators when
/// `g.order() ≥ compare + k - 1`; otherwise `OrderTooSmall` is returned.
pub fn span_dimension(g: &GeneratorSet, k: usize, compare: TruncationOrder) -> Result<SpanDimension> {
    if k == 0 {
        return Err(Error::EmptyWord);
    }
    let required = compare.0 + (k as u32 - 1);
    if g.order().0 < required {
        return Err(Error::OrderTooSmall { order: g.order().0, required });
    }
    let n = g.n();
    let mut level: Vec<WeylElement> = vec![WeylElement::one(n)];
    for _ in 0..k {
        level = (0..n)
            .flat_map(|a| level.iter().map(move |tail| (a, tail)))
            .map(|(a, tail)| g.get(a).mul_bounded(tail, Some(compare.0)))
            .collect();
    }
    let mut columns: Vec<Monomial> = level.iter().flat_map(|e| e.terms().map(|(m, _)| m.clone())).collect();
    columns.sort();
    columns.dedup();
    let index: HashMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows: Vec<Vec<Rational>> = level
        .iter()
        .map(|e| {
            let mut row = vec![Rational::zero(); columns.len()];
            for (m, c) in e.terms() {
                row[index[m]] = c.clone();
            }
            row
        })
        .collect();
    let dim_symmetric = rational::binomial((n + k - 1) as u32, k as u32);
    Ok(SpanDimension {
        dim_words: linalg::rank(&rows),
        dim_symmetric: usize::try_from(dim_symmetric).expect("small"),
    })
}

/// [`span_dimension`] with generators built at order `2k` and compared at
/// `k + 1`, the largest exact comparison order for that build.
pub fn span_probe(fam: &CoefficientFamily, k: usize) -> Result<SpanDimension> {
    let g = build_generators(fam, TruncationOrder(2 * k as u32));
    span_dimension(&g, k, TruncationOrder(k as u32 + 1))
}
