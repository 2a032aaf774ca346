use dioph_core::bestapprox::{best_poly, SearchClass, Strategy as Search};
use dioph_core::bounds::{gelfond_lower, gelfond_upper};
use dioph_core::exponents::local_exponents;
use dioph_core::intpoly::{factor, gelfond_ratio, real_roots};
use dioph_core::realnum::{normalize_unit, Constant, Growth};
use dioph_core::{CertifiedReal, IntPoly, NumberSpec, Tolerances};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;

fn target() -> impl Strategy<Value = NumberSpec> {
    prop_oneof![
        Just(NumberSpec::e_minus_2()),
        Just(NumberSpec::classical(Constant::Ln2)),
        Just(NumberSpec::liouville(2, Growth::Factorial, 1, None)),
        (2u32..=3, 2.0f64..5.0, 1u64..=3).prop_map(|(b, l, a)| NumberSpec::liouville(b, Growth::Geometric(l), a, None)),
        (1i64..60, 61i64..120).prop_map(|(p, q)| NumberSpec::rational(p, q)),
        (prop::collection::vec(1u64..5, 0..3), prop::collection::vec(1u64..4, 1..3))
            .prop_map(|(a, b)| NumberSpec::continued_fraction(a, b)),
    ]
}

fn class() -> impl Strategy<Value = SearchClass> {
    prop_oneof![Just(SearchClass::All), Just(SearchClass::Separable), Just(SearchClass::Irreducible)]
}

fn poly(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-h..=h, 1..=max_deg + 1)
        .prop_map(|c| IntPoly::from_i64(&c))
        .prop_filter("non-zero", |p| !p.is_zero())
}

fn nonconstant(max_deg: usize, h: i64) -> impl Strategy<Value = IntPoly> {
    poly(max_deg, h).prop_filter("non-constant", |p| p.deg() >= 1)
}

fn xi(spec: NumberSpec) -> CertifiedReal {
    CertifiedReal::new(spec).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn offset_sweep_matches_full_sweep(spec in target(), n in 1usize..=2, x in 2.0f64..12.0, cls in class()) {
        let t = xi(spec);
        let tol = Tolerances::default();
        let full = best_poly(n, x, &t, cls, Search::FullSweep, &tol);
        let off = best_poly(n, x, &t, cls, Search::OffsetSweep, &tol);
        match (full, off) {
            (Ok(f), Ok(o)) => {
                prop_assert!(f.value.abs_interval().intersects(&o.value.abs_interval()));
                prop_assert!(f.poly == o.poly || (f.tie && o.tie));
                prop_assert!(f.poly.height() <= BigInt::from(x.floor() as i64));
                prop_assert!(f.poly.leading().unwrap().is_positive());
            }
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.map(|p| p.poly), b.map(|p| p.poly)),
        }
    }

    #[test]
    fn heuristic_never_beats_exact(spec in target(), n in 1usize..=3, x in 2.0f64..10.0) {
        let t = xi(spec);
        let tol = Tolerances::default();
        let exact = best_poly(n, x, &t, SearchClass::All, Search::Auto, &tol);
        let heur = best_poly(n, x, &t, SearchClass::All, Search::Heuristic, &tol);
        if let (Ok(e), Ok(h)) = (exact, heur) {
            prop_assert!(!h.exact);
            prop_assert!(!h.value.abs_interval().certainly_lt(&e.value.abs_interval()));
        }
    }

    #[test]
    fn best_value_is_monotone_and_classes_are_ordered(spec in target(), x in 2.0f64..16.0, ratio in 1.0f64..2.0, n in 1usize..=2) {
        let t = xi(spec);
        let tol = Tolerances::default();
        let lower = local_exponents(n, x, &t, &[SearchClass::Separable, SearchClass::Irreducible], Search::Auto, &tol);
        let Ok(r) = lower else { return Ok(()) };
        let slack = 1e-9;
        let sep = r.w_sep.unwrap_or(f64::NEG_INFINITY);
        let irr = r.w_irr.unwrap_or(f64::NEG_INFINITY);
        prop_assert!(irr <= sep + slack && sep <= r.w + slack, "w={} sep={} irr={}", r.w, sep, irr);
        let v = |n, x| best_poly(n, x, &t, SearchClass::All, Search::Auto, &tol).map(|b| b.value.abs_interval());
        if let (Ok(a), Ok(b)) = (v(n, x), v(n, x * ratio)) {
            prop_assert!(!a.certainly_lt(&b));
        }
        if let (Ok(a), Ok(b)) = (v(n, x), v(n + 1, x)) {
            prop_assert!(!a.certainly_lt(&b));
        }
    }

    #[test]
    fn integer_shift_moves_the_height_scale_only(spec in target(), shift in -2i64..=2, n in 1usize..=2, x in 2.0f64..6.0) {
        // H(P(T - t)) <= (1 + |t|)^n H(P)
        let k = ((1 + shift.abs()) as f64).powi(n as i32);
        let tol = Tolerances::default();
        let base = xi(spec.clone());
        let moved = xi(spec.shifted(shift));
        let v = |t: &CertifiedReal, x: f64| best_poly(n, x, t, SearchClass::All, Search::Auto, &tol).map(|b| b.value.abs_interval());
        if let (Ok(mid), Ok(wide)) = (v(&base, x), v(&moved, x * k)) {
            prop_assert!(!mid.certainly_lt(&wide));
        }
        if x / k >= 1.0 {
            if let (Ok(mid), Ok(narrow)) = (v(&base, x), v(&moved, x / k)) {
                prop_assert!(!narrow.certainly_lt(&mid));
            }
        }
    }

    #[test]
    fn enclosures_are_nested_and_narrow(spec in target(), p in 8u32..200) {
        let t = xi(spec);
        let coarse = t.interval(p).unwrap();
        let fine = t.interval(2 * p).unwrap();
        prop_assert!(coarse.width_within(p));
        prop_assert!(fine.width_within(2 * p));
        prop_assert!(fine.is_subset_of(&coarse));
    }

    #[test]
    fn normalization_lands_in_the_unit_interval(spec in target(), shift in -5i64..=5) {
        let moved = spec.clone().shifted(shift);
        let (unit, m) = normalize_unit(&moved, 4096).unwrap();
        let v = xi(unit).interval(64).unwrap();
        prop_assert!(v.lo_f64() >= 0.0 && v.hi_f64() < 1.0);
        let (_, m0) = normalize_unit(&spec, 4096).unwrap();
        prop_assert_eq!(m, m0 + shift);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn factorization_expands_back(p in poly(6, 20)) {
        let f = factor(&p);
        prop_assert_eq!(f.expand(), p.clone());
        let mut degree = 0;
        for (q, m) in &f.factors {
            prop_assert!(q.is_primitive());
            prop_assert!(q.leading().unwrap().is_positive());
            prop_assert!(q.is_irreducible());
            degree += q.deg() * *m as usize;
        }
        prop_assert_eq!(degree, p.deg());
    }

    #[test]
    fn factorization_recovers_products(a in nonconstant(3, 6), b in nonconstant(3, 6), k in 1u32..=2) {
        let p = a.pow(k).mul(&b);
        let f = factor(&p);
        prop_assert_eq!(f.expand(), p);
        let (fa, fb) = (factor(&a), factor(&b));
        let count = |fs: &[(IntPoly, u32)]| fs.iter().map(|(_, m)| *m as usize).sum::<usize>();
        let expected = k as usize * count(&fa.factors) + count(&fb.factors);
        prop_assert_eq!(count(&f.factors), expected);
    }

    #[test]
    fn separable_means_simple_factors(a in nonconstant(3, 6), b in nonconstant(3, 6), square in any::<bool>()) {
        let p = if square { a.pow(2).mul(&b) } else { a.mul(&b) };
        let simple = factor(&p).factors.iter().all(|(_, m)| *m == 1);
        prop_assert_eq!(p.is_separable(), simple);
        if square {
            prop_assert!(!p.is_separable());
        }
    }

    #[test]
    fn height_of_a_product_is_bounded_both_ways(a in nonconstant(4, 15), b in nonconstant(4, 15)) {
        let d = a.deg() + b.deg();
        let r = gelfond_ratio(&a, &b).unwrap();
        let r = r.to_f64().unwrap();
        prop_assert!(r >= gelfond_lower(d) * (1.0 - 1e-12), "ratio {} below {}", r, gelfond_lower(d));
        prop_assert!(r <= gelfond_upper(d) * (1.0 + 1e-12), "ratio {} above {}", r, gelfond_upper(d));
    }

    #[test]
    fn root_boxes_refine_inside_themselves(p in nonconstant(5, 10), bits in 10u32..120) {
        for root in real_roots(&p) {
            let r = root.refine(bits);
            prop_assert!(r.interval.is_subset_of(&root.interval));
            prop_assert!(r.interval.width_within(bits) || r.is_exact());
            prop_assert!(p.coeffs().len() > 1);
            let lo = r.interval.lo_f64();
            let hi = r.interval.hi_f64();
            let q = &r.poly;
            prop_assert!(q.eval_f64(lo) * q.eval_f64(hi) <= 0.0 || r.is_exact() || hi - lo < 1e-12);
        }
    }
}
