mod common;

use proptest::prelude::*;

use cubeiso::antipodal::{extremal_family, theorem_rhs};
use cubeiso::binary_order::f_closed_form;
use cubeiso::certificate::{trace_induction, verify_certificate};
use cubeiso::verify::CrossTerms;
use cubeiso::{Family, Sign, Vertex};

fn family(max_n: u32) -> impl Strategy<Value = Family> {
    (0..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), 1usize << n).prop_map(move |bits| {
            Family::from_codes(n, (0..bits.len() as u32).filter(|&v| bits[v as usize])).unwrap()
        })
    })
}

fn family_pair(max_n: u32) -> impl Strategy<Value = (Family, Family)> {
    (0..=max_n).prop_flat_map(|n| {
        let side = || proptest::collection::vec(any::<bool>(), 1usize << n);
        (side(), side()).prop_map(move |(a, b)| {
            let build = |bits: Vec<bool>| Family::from_codes(n, (0..bits.len() as u32).filter(|&v| bits[v as usize])).unwrap();
            (build(a), build(b))
        })
    })
}

fn automorphism(n: u32) -> impl Strategy<Value = (Vec<u32>, u32)> {
    (Just((1..=n).collect::<Vec<u32>>()).prop_shuffle(), 0..(1u32 << n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn counts_match_naive(a in family(8)) {
        let set = common::to_set(&a);
        prop_assert_eq!(a.size(), common::size(&set));
        prop_assert_eq!(a.internal_edges(), common::edges(&set));
        prop_assert_eq!(a.edge_boundary(), common::boundary(&set));
        prop_assert_eq!(a.edge_boundary_direct(), common::boundary(&set));
        prop_assert_eq!(a.self_antipodal_count(), common::self_antipodal(&set));
        prop_assert_eq!(a.potential(), common::potential(&set));
    }

    #[test]
    fn text_form_round_trips(a in family(10)) {
        let text = a.to_string();
        let back: Family = text.parse().unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn sections_match_naive(a in family(9), pick in any::<u32>()) {
        prop_assume!(a.dimension() >= 1);
        let coord = pick % a.dimension() + 1;
        let set = common::to_set(&a);
        for (sign, upper) in [(Sign::Upper, true), (Sign::Lower, false)] {
            let s = a.section(coord, sign).unwrap();
            prop_assert_eq!(common::to_set(&s), common::section(&set, coord, upper));
            prop_assert_eq!(a.section_size(coord, sign).unwrap(), s.size());
        }
    }

    #[test]
    fn antipodal_and_complement_maps(a in family(9)) {
        let image = a.antipodal_image();
        prop_assert_eq!(image.antipodal_image(), a.clone());
        prop_assert_eq!(image.size(), a.size());
        prop_assert_eq!(image.edge_boundary(), a.edge_boundary());
        prop_assert!(a.union(&image).unwrap().is_antipodal());
        let c = a.complement();
        prop_assert_eq!(c.edge_boundary(), a.edge_boundary());
        if a.dimension() >= 1 {
            let n = a.dimension() as i64;
            let correction = 2 * (n + 1) * ((1i64 << (n - 1)) - a.size() as i64);
            prop_assert_eq!(c.potential() as i64, a.potential() as i64 + correction);
        }
    }

    #[test]
    fn automorphisms_preserve_potential(
        (a, (perm, t)) in family(7).prop_flat_map(|a| { let n = a.dimension(); (Just(a), automorphism(n)) })
    ) {
        let n = a.dimension();
        let b = a.apply_automorphism(&perm, Vertex::from_code(t as u64, n).unwrap()).unwrap();
        prop_assert_eq!(b.size(), a.size());
        prop_assert_eq!(b.internal_edges(), a.internal_edges());
        prop_assert_eq!(b.potential(), a.potential());
        prop_assert_eq!(b.is_antipodal(), a.is_antipodal());
    }

    #[test]
    fn cross_terms_never_negative((c, d) in family_pair(7)) {
        let terms = CrossTerms::of(&c, &d).unwrap();
        let (cs, ds) = (common::to_set(&c), common::to_set(&d));
        prop_assert_eq!(terms.c_and_dbar, common::with_antipodal(&cs, &ds));
        prop_assert_eq!(terms.c_and_d, common::intersection(&cs, &ds));
        prop_assert!(terms.slack() >= 0);
    }

    #[test]
    fn potential_bound_holds(a in family(8)) {
        prop_assume!(a.dimension() >= 1);
        let (n, s) = (a.dimension(), a.size());
        let mut bound = 2 * f_closed_form(s) as i64;
        if s > 1 << (n - 1) {
            bound += 2 * s as i64 - (1i64 << n);
        }
        prop_assert!(a.potential() as i64 <= bound);
    }

    #[test]
    fn antipodal_closure_meets_boundary_bound(a in family(9)) {
        prop_assume!(a.dimension() >= 1);
        let closure = a.union(&a.antipodal_image()).unwrap();
        let rhs = theorem_rhs(closure.dimension(), closure.size()).unwrap();
        prop_assert!(closure.edge_boundary() >= rhs);
        let extremal = extremal_family(closure.dimension(), closure.size()).unwrap();
        prop_assert_eq!(extremal.edge_boundary(), rhs);
    }

    #[test]
    fn certificates_verify(a in family(6)) {
        prop_assume!(a.dimension() >= 1);
        let cert = trace_induction(&a).unwrap();
        prop_assert!(verify_certificate(&cert, &a).is_ok());
        prop_assert!(cert.slacks().all(|s| s.value() >= 0));
    }
}
