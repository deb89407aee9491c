use std::collections::BTreeMap;

use itertools::Itertools;
use symord_core::random::{self, random_polynomial, random_word};
use symord_core::rational::{frac, int};
use symord_core::{
    build_generators, cancellation_check, cancellation_contributions, e_map, e_tilde, pi_project,
    random_family, span_probe, symmetrized_product, symmetrized_product_naive, theorem_check,
    CoefficientFamily, FamilyKey, MultiIndex, Polynomial, TruncationOrder, WeylElement, WordSpec,
};

fn half() -> symord_core::Rational {
    frac(1, 2)
}

fn word(n: usize, letters: &[usize]) -> WordSpec {
    WordSpec::new(n, letters.to_vec()).unwrap()
}

fn poly(n: usize, letters: &[usize], c: i64) -> Polynomial {
    Polynomial::word(n, letters, int(c))
}

/// Sum over all `k!` orderings by brute force, each product acting on the
/// vacuum one factor at a time.
fn vacuum_oracle(g: &symord_core::GeneratorSet, w: &WordSpec) -> Polynomial {
    let n = g.n();
    let mut acc = Polynomial::zero(n);
    for perm in (0..w.k()).permutations(w.k()) {
        let mut state = Polynomial::one(n);
        for &pos in perm.iter().rev() {
            state = g.get(w.letters()[pos]).fock_apply(&state).unwrap();
        }
        acc = acc.add(&state).unwrap();
    }
    acc
}

#[test]
fn theorem_holds_on_small_grid_against_brute_force() {
    for n in 1..=3 {
        for k in 1..=4 {
            for n_max in 1..=3 {
                for seed in 0..4u64 {
                    let fam = random_family(n, n_max, &half(), seed).unwrap();
                    let g = build_generators(&fam, TruncationOrder(k as u32 - 1));
                    let w = random_word(&mut random::rng(seed ^ 0xabcd), n, k).unwrap();
                    let r = theorem_check(&g, &w).unwrap();
                    assert!(r.passed(), "n={n} k={k} n_max={n_max} seed={seed}: {}", r.residual);
                    assert_eq!(r.lhs, vacuum_oracle(&g, &w));
                }
            }
        }
    }
}

#[test]
fn symmetric_family_fails_at_k2() {
    let key = FamilyKey { order: 1, l: 0, i: 0, j: 1, m: MultiIndex::zero(2) };
    let fam = CoefficientFamily::from_raw_entries(2, 1, [(key.mirrored(), int(1)), (key, int(1))]).unwrap();
    let g = build_generators(&fam, TruncationOrder(1));
    let w = word(2, &[0, 1]);
    let r = theorem_check(&g, &w).unwrap();
    assert!(!r.passed());
    assert_eq!(r.lhs, vacuum_oracle(&g, &w));
    assert_eq!(r.residual, poly(2, &[0], 2));
}

#[test]
fn product_is_invariant_under_letter_permutations() {
    for seed in 0..4 {
        let fam = random_family(3, 2, &half(), seed).unwrap();
        let g = build_generators(&fam, TruncationOrder(3));
        let letters = [0usize, 2, 2, 1];
        let reference = symmetrized_product(&g, &word(3, &letters)).unwrap().element;
        for perm in letters.iter().copied().permutations(4).unique() {
            assert_eq!(symmetrized_product(&g, &word(3, &perm)).unwrap().element, reference);
        }
        assert_eq!(symmetrized_product_naive(&g, &word(3, &letters)).unwrap().element, reference);
    }
}

#[test]
fn products_have_positive_x_degree() {
    let fam = random_family(3, 3, &half(), 17).unwrap();
    let g = build_generators(&fam, TruncationOrder(3));
    for letters in [vec![0], vec![1, 1], vec![2, 0, 1]] {
        let p = symmetrized_product(&g, &word(3, &letters)).unwrap().element;
        assert!(p.terms().all(|(m, _)| m.x.total_degree() >= 1));
        assert_eq!(pi_project(&p), p.d_free_part());
    }
}

/// Reduces a symbolic contribution table under `p_ab = -p_ba`, `p_aa = 0`.
fn reduce_antisymmetric(total: &BTreeMap<(usize, usize), Polynomial>, n: usize) -> Vec<Polynomial> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let pab = total.get(&(a, b)).cloned().unwrap_or_else(|| Polynomial::zero(n));
            let pba = total.get(&(b, a)).cloned().unwrap_or_else(|| Polynomial::zero(n));
            out.push(pab.sub(&pba).unwrap());
        }
    }
    out
}

#[test]
fn worked_cancellation_example() {
    let n = 3;
    let w = word(n, &[0, 2, 2, 1]);
    let contributions = cancellation_contributions(&w);
    let expect = |entries: &[((usize, usize), Polynomial)]| -> BTreeMap<(usize, usize), Polynomial> {
        entries.iter().cloned().collect()
    };
    // i = 1: p_12 x3 x3 + 2 p_13 x3 x2
    assert_eq!(contributions[0], expect(&[((0, 1), poly(n, &[2, 2], 1)), ((0, 2), poly(n, &[2, 1], 2))]));
    // i = 2, 3: p_31 x3 x2 + p_32 x1 x3 + p_33 x1 x2
    let middle = expect(&[
        ((2, 0), poly(n, &[2, 1], 1)),
        ((2, 1), poly(n, &[0, 2], 1)),
        ((2, 2), poly(n, &[0, 1], 1)),
    ]);
    assert_eq!(contributions[1], middle);
    assert_eq!(contributions[2], middle);
    // i = 4: p_21 x3 x3 + 2 p_23 x1 x3
    assert_eq!(contributions[3], expect(&[((1, 0), poly(n, &[2, 2], 1)), ((1, 2), poly(n, &[0, 2], 2))]));

    let mut total: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
    for c in &contributions {
        for (key, p) in c {
            let slot = total.entry(*key).or_insert_with(|| Polynomial::zero(n));
            *slot = slot.add(p).unwrap();
        }
    }
    assert!(reduce_antisymmetric(&total, n).iter().all(Polynomial::is_zero));
}

/// `Σ_{i≠j} p_{α(i)α(j)}(∂) ▷ Π_{r∉{i,j}} x_{α(r)}`: the contraction of `p`
/// with the symmetric tensor, by brute force.
fn contraction_oracle(fam: &CoefficientFamily, w: &WordSpec, l: usize, order: u32) -> Polynomial {
    let n = w.n();
    let k = w.k();
    let mut acc = Polynomial::zero(n);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let rest: Vec<usize> = (0..k).filter(|&r| r != i && r != j).map(|r| w.letters()[r]).collect();
            let p = fam.polynomial(order, l, w.letters()[i], w.letters()[j]);
            let term = p.fock_apply(&Polynomial::word(n, &rest, int(1))).unwrap();
            acc = acc.add(&term).unwrap();
        }
    }
    acc
}

#[test]
fn cancellation_on_random_instances() {
    for seed in 0..40u64 {
        let n = 2 + (seed % 3) as usize;
        let n_max = 1 + (seed % 4) as u32;
        let fam = random_family(n, n_max, &half(), seed).unwrap();
        let mut rng = random::rng(seed + 1000);
        let w = random_word(&mut rng, n, 2 + (seed % 4) as usize).unwrap();
        for l in 0..n {
            for order in 1..=n_max {
                let got = cancellation_check(&fam, &w, l, order).unwrap();
                assert!(got.is_zero());
                assert!(contraction_oracle(&fam, &w, l, order).is_zero());
            }
        }
    }
}

#[test]
fn cancellation_matches_oracle_without_antisymmetry() {
    let key = FamilyKey { order: 1, l: 0, i: 0, j: 1, m: MultiIndex::zero(2) };
    let fam = CoefficientFamily::from_raw_entries(2, 1, [(key.mirrored(), int(1)), (key, int(1))]).unwrap();
    let w = word(2, &[0, 1, 1]);
    let got = cancellation_check(&fam, &w, 0, 1).unwrap();
    assert!(!got.is_zero());
    assert_eq!(got, contraction_oracle(&fam, &w, 0, 1));
}

#[test]
fn section_identity_on_random_polynomials() {
    for seed in 0..25u64 {
        let n = 1 + (seed % 3) as usize;
        let fam = random_family(n, 3, &half(), seed).unwrap();
        let g = build_generators(&fam, TruncationOrder(4));
        let p = random_polynomial(&mut random::rng(seed), n, 5, 4);
        assert_eq!(pi_project(&e_map(&p, &g).unwrap()), p, "seed {seed}");
        for (k, component) in p.homogeneous_components() {
            let scaled = component.scale(&symord_core::Rational::from_integer(symord_core::rational::factorial(k)));
            assert_eq!(pi_project(&e_tilde(&component, &g).unwrap()), scaled);
        }
    }
}

#[test]
fn e_tilde_constant_and_symmetry() {
    let fam = random_family(3, 2, &half(), 2).unwrap();
    let g = build_generators(&fam, TruncationOrder(2));
    assert_eq!(e_tilde(&Polynomial::one(3), &g).unwrap(), WeylElement::one(3));
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        assert_eq!(e_tilde(&poly(3, &[i, j], 1), &g).unwrap(), e_tilde(&poly(3, &[j, i], 1), &g).unwrap());
    }
}

#[test]
fn span_dimension_excess() {
    let zero = CoefficientFamily::zero(3, 2).unwrap();
    for k in 1..=3 {
        let s = span_probe(&zero, k).unwrap();
        assert_eq!(s.dim_words, s.dim_symmetric);
    }
    let fam = random_family(2, 2, &half(), 1).unwrap();
    assert!(!fam.is_zero());
    let s = span_probe(&fam, 2).unwrap();
    assert_eq!(s.dim_symmetric, 3);
    assert!(s.dim_words >= s.dim_symmetric);
    // observed: X1X2 and X2X1 are independent for this family
    assert_eq!(s.dim_words, 4);
    assert_eq!(span_probe(&fam, 1).unwrap().dim_words, 2);
}
