//! Structure constants, Bernoulli numbers and the universal embedding.
//!
//! For a Lie algebra with basis `X_1, ..., X_n` and
//! `[X_i, X_j] = Σ_k C^k_{ij} X_k`, the embedding into the completed Weyl
//! algebra is
//!
//! ```text
//! ι(X_i) = Σ_l x_l Σ_N (-1)^N B_N / N! · (𝒞^N)^l_i,   𝒞^i_j = Σ_k C^i_{jk} ∂^k
//! ```
//!
//! truncated here at a finite ∂-degree.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::random::{self, small_rational};
use crate::rational::{self, Rational};
use crate::symmetrization::{CoefficientFamily, FamilyKey};
use crate::weyl::{Monomial, MultiIndex, TruncationOrder, WeylElement};

/// `C^k_{ij}` stored densely, zero-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    n: usize,
    table: Vec<Rational>,
}

/// A failed validity identity, with zero-based indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `C^k_{ij} + C^k_{ji} ≠ 0`.
    Antisymmetry { k: usize, i: usize, j: usize, residual: Rational },
    /// The cyclic Jacobi sum for `(i, j, l)` has nonzero `X_m` component.
    Jacobi { i: usize, j: usize, l: usize, m: usize, residual: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Antisymmetry { k, i, j, residual } => write!(
                f,
                "antisymmetry violation at (k,i,j)=({},{},{}): C[k][i][j]+C[k][j][i] = {}",
                k + 1,
                i + 1,
                j + 1,
                rational::to_string(residual)
            ),
            Violation::Jacobi { i, j, l, m, residual } => write!(
                f,
                "Jacobi violation at (i,j,l,m)=({},{},{},{}): residual {}",
                i + 1,
                j + 1,
                l + 1,
                m + 1,
                rational::to_string(residual)
            ),
        }
    }
}

impl StructureConstants {
    /// The abelian algebra of dimension `n`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(StructureConstants { n, table: vec![Rational::zero(); n * n * n] })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, k: usize, i: usize, j: usize) -> usize {
        (k * self.n + i) * self.n + j
    }

    fn check(&self, k: usize, i: usize, j: usize) -> Result<()> {
        for v in [k, i, j] {
            if v >= self.n {
                return Err(Error::IndexOutOfRange { index: v, n: self.n });
            }
        }
        Ok(())
    }

    /// `C^k_{ij}`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> &Rational {
        &self.table[self.idx(k, i, j)]
    }

    /// Sets `C^k_{ij}` only; the mirror entry is left untouched.
    pub fn set(&mut self, k: usize, i: usize, j: usize, value: Rational) -> Result<()> {
        self.check(k, i, j)?;
        let at = self.idx(k, i, j);
        self.table[at] = value;
        Ok(())
    }

    /// Sets `C^k_{ij} = value` and `C^k_{ji} = -value`.
    pub fn set_antisymmetric(&mut self, k: usize, i: usize, j: usize, value: Rational) -> Result<()> {
        self.set(k, j, i, -value.clone())?;
        self.set(k, i, j, value)
    }

    /// Nonzero entries `(k, i, j, value)` in index order.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, usize, Rational)> {
        let n = self.n;
        let mut out = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = self.get(k, i, j);
                    if !v.is_zero() {
                        out.push((k, i, j, v.clone()));
                    }
                }
            }
        }
        out
    }

    /// Heisenberg algebra: `[X_1, X_2] = X_3`.
    pub fn heisenberg() -> Self {
        let mut sc = Self::zero(3).unwrap();
        sc.set_antisymmetric(2, 0, 1, Rational::one()).unwrap();
        sc
    }

    /// `sl(2)` in the basis `(h, e, f)`: `[h,e] = 2e`, `[h,f] = -2f`, `[e,f] = h`.
    pub fn sl2() -> Self {
        let mut sc = Self::zero(3).unwrap();
        sc.set_antisymmetric(1, 0, 1, rational::int(2)).unwrap();
        sc.set_antisymmetric(2, 0, 2, rational::int(-2)).unwrap();
        sc.set_antisymmetric(0, 1, 2, Rational::one()).unwrap();
        sc
    }

    /// `so(3)`: `C^k_{ij} = ε_{ijk}`.
    pub fn so3() -> Self {
        let mut sc = Self::zero(3).unwrap();
        sc.set_antisymmetric(2, 0, 1, Rational::one()).unwrap();
        sc.set_antisymmetric(0, 1, 2, Rational::one()).unwrap();
        sc.set_antisymmetric(1, 2, 0, Rational::one()).unwrap();
        sc
    }

    /// Every antisymmetry and Jacobi failure; empty iff the table is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.n;
        let mut out = Vec::new();
        for k in 0..n {
            for i in 0..n {
                for j in i..n {
                    let r = self.get(k, i, j) + self.get(k, j, i);
                    if !r.is_zero() {
                        out.push(Violation::Antisymmetry { k, i, j, residual: r });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let mut r = Rational::zero();
                        for s in 0..n {
                            r += self.get(s, i, j) * self.get(m, s, l);
                            r += self.get(s, j, l) * self.get(m, s, i);
                            r += self.get(s, l, i) * self.get(m, s, j);
                        }
                        if !r.is_zero() {
                            out.push(Violation::Jacobi { i, j, l, m, residual: r });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `Ok(())` or the full violation list as an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidStructureConstants(v))
        }
    }

    /// Constants of the same algebra in the basis `Y_i = Σ_a P[a][i] X_a`.
    ///
    /// Returns `None` when `P` is singular.
    pub fn change_basis(&self, p: &[Vec<Rational>]) -> Option<StructureConstants> {
        let n = self.n;
        let inv = invert(p)?;
        let mut out = StructureConstants::zero(n).ok()?;
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut acc = Rational::zero();
                    for a in 0..n {
                        if p[a][i].is_zero() {
                            continue;
                        }
                        for b in 0..n {
                            if p[b][j].is_zero() {
                                continue;
                            }
                            for c in 0..n {
                                let cabc = self.get(c, a, b);
                                if cabc.is_zero() || inv[k][c].is_zero() {
                                    continue;
                                }
                                acc += &p[a][i] * &p[b][j] * cabc * &inv[k][c];
                            }
                        }
                    }
                    out.table[(k * n + i) * n + j] = acc;
                }
            }
        }
        Some(out)
    }

    /// A seeded Jacobi-valid table drawn from structured families: abelian
    /// ideals extended by an arbitrary derivation, filiform-type nilpotent
    /// algebras, scaled Heisenberg plus abelian summands, and random basis
    /// changes of `sl(2)` and `so(3)`. The result always passes `validate`.
    pub fn structured_random(seed: u64) -> Self {
        let mut rng = random::rng(seed);
        loop {
            let sc = match rng.gen_range(0..5u32) {
                0 => {
                    // [X_n, X_i] = Σ_k A_{ki} X_k on the abelian ideal span(X_1..X_{n-1})
                    let n = rng.gen_range(2..=4usize);
                    let mut sc = Self::zero(n).unwrap();
                    for i in 0..n - 1 {
                        for k in 0..n - 1 {
                            if rng.gen_bool(0.5) {
                                let v = small_rational(&mut rng);
                                sc.set_antisymmetric(k, n - 1, i, v).unwrap();
                            }
                        }
                    }
                    sc
                }
                1 => {
                    // [X_1, X_i] = c_i X_{i+1}
                    let n = rng.gen_range(3..=4usize);
                    let mut sc = Self::zero(n).unwrap();
                    for i in 1..n - 1 {
                        let v = small_rational(&mut rng);
                        sc.set_antisymmetric(i + 1, 0, i, v).unwrap();
                    }
                    sc
                }
                2 => {
                    let n = rng.gen_range(3..=4usize);
                    let mut sc = Self::zero(n).unwrap();
                    let v = small_rational(&mut rng);
                    sc.set_antisymmetric(2, 0, 1, v).unwrap();
                    sc
                }
                3 | 4 => {
                    let base = if rng.gen_bool(0.5) { Self::sl2() } else { Self::so3() };
                    let p: Vec<Vec<Rational>> = (0..3)
                        .map(|_| (0..3).map(|_| rational::int(rng.gen_range(-2..=2))).collect())
                        .collect();
                    match base.change_basis(&p) {
                        Some(sc) => sc,
                        None => continue,
                    }
                }
                _ => unreachable!(),
            };
            if sc.is_valid() {
                return sc;
            }
        }
    }
}

/// Gauss-Jordan inverse over ℚ.
fn invert(p: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = p.len();
    let mut a: Vec<Vec<Rational>> = p
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let mut v = row.clone();
            v.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
            v
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `n × n` matrix of pure-∂ linear forms, row index first: `entry(i, j) = 𝒞^i_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMatrix {
    n: usize,
    entries: Vec<WeylElement>,
}

impl CMatrix {
    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|idx| if idx / n == idx % n { WeylElement::one(n) } else { WeylElement::zero(n) })
            .collect();
        CMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &WeylElement {
        &self.entries[i * self.n + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(WeylElement::is_zero)
    }

    /// Matrix product; entries are pure-∂ and therefore commute.
    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = WeylElement::zero(n);
                for s in 0..n {
                    let (a, b) = (self.entry(i, s), other.entry(s, j));
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    debug_assert!(a.x_degree() <= 0 && b.x_degree() <= 0, "𝒞 entries must be pure ∂");
                    acc.add_assign_unchecked(&a.mul_bounded(b, None));
                }
                entries.push(acc);
            }
        }
        CMatrix { n, entries }
    }
}

/// `𝒞^i_j = Σ_k C^i_{jk} ∂^k`.
pub fn cmatrix(sc: &StructureConstants) -> CMatrix {
    let n = sc.n();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let terms = (0..n).map(|k| {
                (Monomial::new(MultiIndex::zero(n), MultiIndex::unit(n, k)), sc.get(i, j, k).clone())
            });
            entries.push(WeylElement::from_terms(n, terms).expect("dimensions agree"));
        }
    }
    CMatrix { n, entries }
}

pub fn cmatrix_power(m: &CMatrix, power: u32) -> CMatrix {
    let mut acc = CMatrix::identity(m.n());
    for _ in 0..power {
        acc = acc.mul(m);
    }
    acc
}

/// Successive powers `𝒞^0, ..., 𝒞^max`.
fn cmatrix_powers(m: &CMatrix, max: u32) -> Vec<CMatrix> {
    let mut out = vec![CMatrix::identity(m.n())];
    for _ in 0..max {
        let next = out.last().unwrap().mul(m);
        out.push(next);
    }
    out
}

fn bernoulli_table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// Bernoulli number `B_N` with `B_1 = -1/2`, from
/// `Σ_{k=0}^{N} C(N+1, k) B_k = 0`. Memoized.
pub fn bernoulli(index: u32) -> Rational {
    let mut table = bernoulli_table().lock().unwrap_or_else(|e| e.into_inner());
    while table.len() <= index as usize {
        let m = table.len() as u32;
        let mut acc = Rational::zero();
        for (k, b) in table.iter().enumerate() {
            acc += Rational::from_integer(rational::binomial(m + 1, k as u32)) * b;
        }
        let next = -acc / Rational::from_integer(BigInt::from(m + 1));
        table.push(next);
    }
    table[index as usize].clone()
}

/// `(-1)^N B_N / N!`, the coefficient of `t^N` in `t / (1 - e^{-t})`.
pub fn series_coefficient(order: u32) -> Rational {
    let b = bernoulli(order) / Rational::from_integer(rational::factorial(order));
    if order % 2 == 1 {
        -b
    } else {
        b
    }
}

/// `ι(X_i)` truncated at ∂-degree `order` (terms with `N ≤ order`).
pub fn iota(sc: &StructureConstants, i: usize, order: TruncationOrder) -> Result<WeylElement> {
    if i >= sc.n() {
        return Err(Error::IndexOutOfRange { index: i, n: sc.n() });
    }
    Ok(iota_all(sc, order).swap_remove(i))
}

/// `ι(X_1), ..., ι(X_n)` truncated at ∂-degree `order`.
pub fn iota_all(sc: &StructureConstants, order: TruncationOrder) -> Vec<WeylElement> {
    let n = sc.n();
    let powers = cmatrix_powers(&cmatrix(sc), order.0);
    let x: Vec<WeylElement> = (0..n).map(|l| WeylElement::x(n, l).expect("n > 0")).collect();
    (0..n)
        .map(|i| {
            let mut out = WeylElement::zero(n);
            for (power, cn) in powers.iter().enumerate() {
                let a = series_coefficient(power as u32);
                if a.is_zero() {
                    continue;
                }
                for (l, xl) in x.iter().enumerate() {
                    let entry = cn.entry(l, i);
                    if entry.is_zero() {
                        continue;
                    }
                    out.add_scaled_unchecked(&a, &xl.mul_bounded(entry, None));
                }
            }
            out
        })
        .collect()
}

/// `[ι(X_i), ι(X_j)] - Σ_k C^k_{ij} ι(X_k)`, exact up to ∂-degree `order`.
///
/// Every `ι` term has x-degree one, so one contraction lowers the ∂-degree by
/// at most one; the operands are expanded to `order + 1` and the result is
/// truncated back to `order`.
pub fn homomorphism_defect(
    sc: &StructureConstants,
    i: usize,
    j: usize,
    order: TruncationOrder,
) -> Result<WeylElement> {
    let n = sc.n();
    for v in [i, j] {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, n });
        }
    }
    let images = iota_all(sc, TruncationOrder(order.0 + 1));
    let mut out = images[i].mul_bounded(&images[j], Some(order.0));
    let swapped = images[j].mul_bounded(&images[i], Some(order.0));
    out.add_scaled_unchecked(&-Rational::one(), &swapped);
    for (k, image) in images.iter().enumerate() {
        let c = sc.get(k, i, j);
        if !c.is_zero() {
            out.add_scaled_unchecked(&-c, &image.truncate(order));
        }
    }
    Ok(out)
}

/// `p^{N-1,l}_{ij} = (-1)^N B_N / N! · Σ_s (𝒞^{N-1})^l_s C^s_{ij}` for
/// `N = 1..=n_max`.
pub fn derived_family(sc: &StructureConstants, n_max: u32) -> Result<CoefficientFamily> {
    let n = sc.n();
    if n_max == 0 {
        return Err(Error::InvalidFamily("n_max must be at least 1".into()));
    }
    let powers = cmatrix_powers(&cmatrix(sc), n_max - 1);
    let mut entries: BTreeMap<FamilyKey, Rational> = BTreeMap::new();
    for order in 1..=n_max {
        let a = series_coefficient(order);
        if a.is_zero() {
            continue;
        }
        let cn = &powers[(order - 1) as usize];
        for l in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let mut poly = WeylElement::zero(n);
                    for s in 0..n {
                        let c = sc.get(s, i, j);
                        if !c.is_zero() {
                            poly.add_scaled_unchecked(c, cn.entry(l, s));
                        }
                    }
                    for (m, v) in poly.terms() {
                        let key = FamilyKey { order, l, i, j, m: m.d.clone() };
                        entries.insert(key, &a * v);
                    }
                }
            }
        }
    }
    CoefficientFamily::from_entries(n, n_max, entries)
}
