mod common;

use ffma_core::gf::{build_field, FieldSpec, ZERO_POWER};
use proptest::prelude::*;
use std::collections::HashSet;

fn small_fields() -> Vec<FieldSpec> {
    [(2, 4), (2, 8), (5, 4), (17, 2), (3, 5), (5, 1), (17, 1), (7, 3)]
        .iter()
        .map(|&(p, m)| build_field(p, m, None).unwrap())
        .collect()
}

#[test]
fn multiplication_matches_schoolbook_oracle() {
    for f in small_fields() {
        if f.m() == 1 {
            continue;
        }
        let g = f.primitive_poly().unwrap().to_vec();
        let els = f.elements().unwrap();
        let step = (els.len() / 40).max(1);
        for a in els.iter().step_by(step) {
            for b in els.iter().step_by(step) {
                let got = f.mul(a, b).unwrap();
                assert_eq!(got.tuple(), &common::naive_mul(f.p(), &g, a.tuple(), b.tuple())[..], "{f}");
            }
        }
    }
}

#[test]
fn orbit_and_round_trip_exhaustive() {
    for (p, m) in [(2u32, 16usize), (5, 4), (17, 3), (2, 10)] {
        let f = build_field(p, m, None).unwrap();
        let q = (p as u64).pow(m as u32);
        let mut seen = HashSet::new();
        for l in 0..q as i64 - 1 {
            let t = f.power_to_tuple(l).unwrap();
            assert_eq!(f.tuple_to_power(&t).unwrap(), l);
            assert!(seen.insert(t));
        }
        assert_eq!(seen.len() as u64, q - 1);
        assert_eq!(f.tuple_to_power(&vec![0; m]).unwrap(), ZERO_POWER);
    }
}

#[test]
fn tuple_only_fields_add_without_tables() {
    let f = build_field(2, 300, None).unwrap();
    assert!(!f.has_tables());
    let a = f.basis(299);
    let b = f.basis(0);
    let s = f.add(&a, &b).unwrap();
    assert_eq!(s.tuple()[0], 1);
    assert_eq!(s.tuple()[299], 1);
    assert!(f.add(&s, &s).unwrap().is_zero());
    assert!(f.mul(&a, &b).is_err());
}

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(small_fields())
}

proptest! {
    #[test]
    fn additive_group(f in field_strategy(), x in any::<u64>(), y in any::<u64>()) {
        let q = f.order().unwrap() as u64;
        let a = f.from_packed(x % q).unwrap();
        let b = f.from_packed(y % q).unwrap();
        prop_assert_eq!(f.add(&a, &b).unwrap(), f.add(&b, &a).unwrap());
        prop_assert!(f.add(&a, &f.additive_inverse(&a).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn distributive(f in field_strategy(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let q = f.order().unwrap() as u64;
        let (a, b, c) = (f.from_packed(x % q).unwrap(), f.from_packed(y % q).unwrap(), f.from_packed(z % q).unwrap());
        let left = f.mul(&a, &f.add(&b, &c).unwrap()).unwrap();
        let right = f.add(&f.mul(&a, &b).unwrap(), &f.mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn descriptor_parses_back(f in field_strategy()) {
        let back: FieldSpec = f.to_string().parse().unwrap();
        prop_assert_eq!(back, f);
    }
}
