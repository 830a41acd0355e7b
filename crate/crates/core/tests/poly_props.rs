use modinv_core::poly::{monomials_of_degree, parse, render, Mono, Poly, PrimeP, VarLayout};
use proptest::prelude::*;

const NVARS: usize = 3;

fn layout() -> VarLayout {
    VarLayout::new(vec![(1, 1), (2, 1), (1, 2)])
}

fn poly(p: u64) -> impl Strategy<Value = Poly> {
    let field = PrimeP::new(p).unwrap();
    prop::collection::vec((prop::collection::vec(0u32..4, NVARS), 1u32..field.get()), 0..7)
        .prop_map(move |terms| {
            Poly::from_terms(field, NVARS, terms.into_iter().map(|(e, c)| (Mono::new(e), c)))
        })
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn ring_axioms_f3(a in poly(3), b in poly(3), c in poly(3)) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &(-&a), Poly::zero(a.field(), NVARS));
        prop_assert_eq!(&a * &Poly::one(a.field(), NVARS), a.clone());
    }

    #[test]
    fn frobenius(a in poly(2), b in poly(2), c in poly(5), d in poly(5)) {
        prop_assert_eq!((&a + &b).pow(2), &a.pow(2) + &b.pow(2));
        prop_assert_eq!((&c + &d).pow(5), &c.pow(5) + &d.pow(5));
    }

    #[test]
    fn parse_render_round_trip(a in poly(5), b in poly(2)) {
        let l = layout();
        for f in [a, b] {
            let text = render(&f, &l);
            prop_assert_eq!(parse(&text, &l, f.field()).unwrap(), f);
        }
    }

    #[test]
    fn degree_of_product(a in poly(3), b in poly(3)) {
        let prod = &a * &b;
        match (a.total_degree(), b.total_degree()) {
            (Some(x), Some(y)) => prop_assert_eq!(prod.total_degree(), Some(x + y)),
            _ => prop_assert!(prod.is_zero()),
        }
    }
}

#[test]
fn monomial_counts_match_binomials() {
    assert_eq!(monomials_of_degree(6, 10).len(), 3003);
    for n in 1..5usize {
        for d in 0..7u32 {
            let ms = monomials_of_degree(n, d);
            assert_eq!(ms.len() as u64, binomial(n as u64 + d as u64 - 1, d as u64));
            assert!(ms.windows(2).all(|w| w[0] < w[1]));
            assert!(ms.iter().all(|m| m.degree() == d));
        }
    }
}

#[test]
fn mismatched_moduli_are_errors() {
    let a = Poly::one(PrimeP::new(2).unwrap(), 1);
    let b = Poly::one(PrimeP::new(3).unwrap(), 1);
    assert!(a.checked_add(&b).is_err());
    assert!(a.checked_mul(&b).is_err());
}
