//! Property tests for the algebraic layers.

use std::sync::Arc;

use colmez_core::{ClassFunction, CycSum, GaloisCMField};
use num::{BigInt, BigRational};
use proptest::prelude::*;

fn arb_field() -> impl Strategy<Value = Arc<GaloisCMField>> {
    prop_oneof![
        Just((4u64, vec![])),
        Just((5u64, vec![])),
        Just((7u64, vec![])),
        Just((20u64, vec![9u64])),
        Just((20u64, vec![3u64])),
        Just((12u64, vec![])),
    ]
    .prop_map(|(n, gens)| Arc::new(GaloisCMField::new(n, &gens).unwrap()))
}

proptest! {
    #[test]
    fn group_closure_and_inverses(field in arb_field(), a in 0usize..8, b in 0usize..8) {
        let elems: Vec<_> = field.elements().collect();
        let x = elems[a % elems.len()];
        let y = elems[b % elems.len()];
        let p = field.mul(x, y);
        prop_assert!(elems.contains(&p));
        // canonicalization is idempotent
        prop_assert_eq!(field.element(p.rep()).unwrap(), p);
        // inverse round-trips
        prop_assert_eq!(field.mul(p, field.mul(field.inv(y), field.inv(x))), field.identity());
    }

    #[test]
    fn norm_is_multiplicative(
        n in prop_oneof![Just(4u64), Just(5u64), Just(7u64), Just(12u64)],
        coeffs_a in proptest::collection::vec(-4i64..=4, 12),
        coeffs_b in proptest::collection::vec(-4i64..=4, 12),
    ) {
        let ring = colmez_core::CyclotomicRing::new(n);
        let take = ring.degree();
        let a = ring.from_coeffs(coeffs_a[..take].iter().map(|&c| BigInt::from(c)).collect());
        let b = ring.from_coeffs(coeffs_b[..take].iter().map(|&c| BigInt::from(c)).collect());
        prop_assert_eq!(ring.norm(&ring.mul(&a, &b)), ring.norm(&a) * ring.norm(&b));
    }

    #[test]
    fn dual_is_an_involution_and_preserves_cm(
        field in arb_field(),
        nums in proptest::collection::vec(-20i64..=20, 16),
        dens in proptest::collection::vec(1i64..=7, 16),
    ) {
        let elems: Vec<_> = field.elements().collect();
        let mut i = 0;
        let f = ClassFunction::from_fn(field.clone(), |_| {
            let v = BigRational::new(BigInt::from(nums[i % nums.len()]), BigInt::from(dens[i % dens.len()]));
            i += 1;
            v
        });
        prop_assert_eq!(f.dual().dual(), f.clone());
        // conjugation averaging is the identity on an abelian group
        prop_assert_eq!(f.conj_average(), f.clone());
        // decomposition round-trips exactly
        prop_assert_eq!(f.decompose().reconstruct(), f);
        let _ = elems;
    }
}

proptest! {
    #[test]
    fn cycsum_algebra(
        order in prop_oneof![Just(2u64), Just(4u64), Just(6u64), Just(12u64)],
        coeffs in proptest::collection::vec((-9i64..=9, 1i64..=4), 12),
        a in 0u64..12,
        b in 0u64..12,
    ) {
        let mut s = CycSum::zero(order);
        for (k, (n, d)) in coeffs.iter().enumerate() {
            s.add_term(k as u64 % order, &BigRational::new(BigInt::from(*n), BigInt::from(*d)));
        }
        // rotation is an action of Z/d
        prop_assert_eq!(
            s.rotate(a).rotate(b).to_complex(),
            s.rotate((a + b) % order).to_complex()
        );
        // a full rotation is the identity
        let mut full_turn = s.rotate(order);
        full_turn.add_assign(&s.scale(&BigRational::new(BigInt::from(-1), BigInt::from(1))));
        prop_assert!(full_turn.is_zero());
        // conjugation is an involution and matches the complex conjugate
        prop_assert_eq!(s.conj().conj(), s.clone());
        let z = s.to_complex();
        let zc = s.conj().to_complex();
        prop_assert!((z.conj() - zc).norm() < 1e-12);
        // x + conj(x) reduces to something real
        let mut sym = s.clone();
        sym.add_assign(&s.conj());
        let v = sym.to_complex();
        prop_assert!(v.im.abs() < 1e-12);
    }
}
