use modinv_core::monoalg::{epsilon, hilbert_enumeration_check, preset, xy, MonoAlgebra, PRESET_NAMES};
use proptest::prelude::*;

fn algebras() -> Vec<MonoAlgebra> {
    PRESET_NAMES.iter().map(|n| preset(n).unwrap().algebra).collect()
}

#[test]
fn membership_agrees_with_enumeration() {
    for alg in algebras() {
        let members = alg.elements_up_to(16);
        for d in 0..=16u32 {
            for i in 0..=d {
                let m = xy(i, d - i);
                assert_eq!(alg.is_member(&m), members.contains(&m), "{i},{}", d - i);
            }
        }
    }
}

#[test]
fn epsilon_is_additive() {
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                for d in 0..8 {
                    let (m, n) = (xy(a, b), xy(c, d));
                    let (e, f) = (epsilon(&m), epsilon(&n));
                    assert_eq!(epsilon(&m.mul(&n)), (e.0 + f.0, e.1 + f.1));
                }
            }
        }
    }
}

#[test]
fn hilbert_identity_to_degree_24() {
    for name in PRESET_NAMES {
        let p = preset(name).unwrap();
        for (label, dec, gens) in &p.decompositions {
            let r = hilbert_enumeration_check(&p.algebra, dec, gens, 24);
            assert!(r.pass, "{name} {label}: {r:?}");
        }
    }
}

#[test]
fn stated_relations() {
    let e1 = preset("example-1").unwrap();
    assert_eq!(xy(1, 1).pow(2), xy(0, 2).mul(&xy(2, 0)));
    assert_eq!(xy(2, 0).mul(&xy(0, 2)), xy(1, 1).mul(&xy(1, 1)));
    assert!(e1.algebra.is_member(&xy(0, 2)));
    let e2 = preset("example-2").unwrap();
    assert_eq!(xy(3, 1).pow(4), xy(0, 4).mul(&xy(8, 0)).mul(&xy(4, 0)));
    assert_eq!(xy(4, 0).mul(&xy(0, 4)), xy(3, 1).mul(&xy(1, 3)));
    assert!(e2.algebra.is_member(&xy(8, 4)));
}

proptest! {
    #[test]
    fn membership_is_multiplicative(a in 0u32..10, b in 0u32..10, c in 0u32..10, d in 0u32..10) {
        for alg in algebras() {
            let (m, n) = (xy(a, b), xy(c, d));
            if alg.is_member(&m) && alg.is_member(&n) {
                prop_assert!(alg.is_member(&m.mul(&n)));
            }
        }
    }

    #[test]
    fn factorization_reconstructs(i in 0u32..20, j in 0u32..20) {
        for alg in algebras() {
            let m = xy(i, j);
            if let Some(mult) = alg.factor(&m) {
                let prod = alg
                    .generators()
                    .iter()
                    .zip(&mult)
                    .fold(xy(0, 0), |acc, (g, &k)| acc.mul(&g.pow(k)));
                prop_assert_eq!(prod, m);
            }
        }
    }
}
