use proptest::prelude::*;
use symord_core::random::{self, random_element, random_polynomial};
use symord_core::rational::{frac, int};
use symord_core::{Polynomial, TruncationOrder, WeylElement};

fn x(n: usize, i: usize) -> WeylElement {
    WeylElement::x(n, i).unwrap()
}

fn d(n: usize, j: usize) -> WeylElement {
    WeylElement::d(n, j).unwrap()
}

#[test]
fn generator_relations_exhaustive() {
    for n in 1..=4 {
        for i in 0..n {
            for j in 0..n {
                assert_eq!(x(n, i).mul(&x(n, j)).unwrap(), x(n, j).mul(&x(n, i)).unwrap());
                assert_eq!(d(n, i).mul(&d(n, j)).unwrap(), d(n, j).mul(&d(n, i)).unwrap());
                let bracket = d(n, j).mul(&x(n, i)).unwrap().sub(&x(n, i).mul(&d(n, j)).unwrap()).unwrap();
                let delta = if i == j { WeylElement::one(n) } else { WeylElement::zero(n) };
                assert_eq!(bracket, delta, "[d{j}, x{i}] in n={n}");
            }
        }
    }
}

/// Fock oracle for `(∂^1)^2 x_1 = x_1 (∂^1)^2 + 2 ∂^1`: compare actions on `x_1^m`.
#[test]
fn second_order_reordering_by_action() {
    let lhs = d(1, 0).mul(&d(1, 0)).unwrap().mul(&x(1, 0)).unwrap();
    let rhs = x(1, 0)
        .mul(&d(1, 0).mul(&d(1, 0)).unwrap())
        .unwrap()
        .add(&d(1, 0).scale(&int(2)))
        .unwrap();
    assert_eq!(lhs, rhs);
    for m in 0..=4 {
        let p = Polynomial::word(1, &vec![0; m], int(1));
        // d^2 (x * x^m) = (m+1) m x^{m-1}
        let by_hand = if m == 0 {
            Polynomial::zero(1)
        } else {
            Polynomial::word(1, &vec![0; m - 1], int(((m + 1) * m) as i64))
        };
        assert_eq!(lhs.fock_apply(&p).unwrap(), by_hand);
        assert_eq!(rhs.fock_apply(&p).unwrap(), by_hand);
    }
}

fn triple(seed: u64) -> (WeylElement, WeylElement, WeylElement, Polynomial) {
    let mut rng = random::rng(seed);
    let n = 1 + (seed % 3) as usize;
    let a = random_element(&mut rng, n, 3, 3, 4);
    let b = random_element(&mut rng, n, 3, 3, 4);
    let c = random_element(&mut rng, n, 3, 3, 4);
    let p = random_polynomial(&mut rng, n, 4, 4);
    (a, b, c, p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn associativity(seed in any::<u64>()) {
        let (a, b, c, _) = triple(seed);
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(left.is_canonical());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn action_compatibility(seed in any::<u64>()) {
        let (a, b, _, p) = triple(seed);
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.fock_apply(&p).unwrap(), a.fock_apply(&b.fock_apply(&p).unwrap()).unwrap());
    }

    #[test]
    fn truncation_exactness(seed in any::<u64>()) {
        let (a, b, _, p) = triple(seed);
        let deg = TruncationOrder(p.degree().max(0) as u32);
        prop_assert_eq!(a.truncate(deg).fock_apply(&p).unwrap(), a.fock_apply(&p).unwrap());
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.truncate(deg).fock_apply(&p).unwrap(), ab.fock_apply(&p).unwrap());
    }

    #[test]
    fn truncation_idempotent(seed in any::<u64>(), cap in 0u32..5) {
        let (a, _, _, _) = triple(seed);
        let once = a.truncate(TruncationOrder(cap));
        prop_assert!(once.d_degree() <= cap as i64);
        prop_assert_eq!(once.truncate(TruncationOrder(cap)), once);
    }

    #[test]
    fn bilinearity(seed in any::<u64>(), num in -5i64..=5, den in 1i64..=4) {
        let (a, b, c, p) = triple(seed);
        let s = frac(num, den);
        let sum = a.add(&b.scale(&s)).unwrap();
        prop_assert_eq!(
            sum.mul(&c).unwrap(),
            a.mul(&c).unwrap().add(&b.mul(&c).unwrap().scale(&s)).unwrap()
        );
        prop_assert_eq!(
            c.mul(&sum).unwrap(),
            c.mul(&a).unwrap().add(&c.mul(&b).unwrap().scale(&s)).unwrap()
        );
        prop_assert_eq!(
            sum.fock_apply(&p).unwrap(),
            a.fock_apply(&p).unwrap().add(&b.fock_apply(&p).unwrap().scale(&s)).unwrap()
        );
        let q = p.add(&p.scale(&s)).unwrap();
        prop_assert_eq!(
            a.fock_apply(&q).unwrap(),
            a.fock_apply(&p).unwrap().add(&a.fock_apply(&p).unwrap().scale(&s)).unwrap()
        );
    }

    #[test]
    fn canonical_form_preserved(seed in any::<u64>()) {
        let (a, b, _, p) = triple(seed);
        for e in [
            a.add(&b).unwrap(),
            a.sub(&a).unwrap(),
            a.mul(&b).unwrap(),
            a.scale(&int(0)),
            a.truncate(TruncationOrder(1)),
            a.fock_apply(&p).unwrap().into_element(),
        ] {
            prop_assert!(e.is_canonical());
        }
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }
}
