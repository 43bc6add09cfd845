use proptest::collection::vec;
use proptest::prelude::*;

use smoothlab::generators::{gen_m3_lower, gen_pp_lower, gen_scan_lower, GeneratorSpec};
use smoothlab::oracles::{kth_smallest_oracle, ltr_maxima_count, rtl_maxima_count, scan_maxima_naive};
use smoothlab::perturbation::perturb_partial;
use smoothlab::{
    derive_stream, hoare_find, quicksort_count, scan_maxima, GeneratorFamily, PivotRule, Rational,
    Seq,
};

/// Small value range so duplicates are common.
fn seq() -> impl Strategy<Value = Seq> {
    vec(0u8..20, 1..80).prop_map(|v| Seq::new(v.into_iter().map(f64::from).collect()).unwrap())
}

fn seq_and_rank() -> impl Strategy<Value = (Seq, usize)> {
    seq().prop_flat_map(|s| {
        let n = s.len();
        (Just(s), 1..=n)
    })
}

fn rule() -> impl Strategy<Value = PivotRule> {
    prop::sample::select(PivotRule::ALL.to_vec())
}

proptest! {
    #[test]
    fn find_matches_oracle((s, k) in seq_and_rank(), rule in rule()) {
        let run = hoare_find(&s, k, rule).unwrap();
        prop_assert_eq!(run.selected(), Some(kth_smallest_oracle(&s, k).unwrap()));
        prop_assert_eq!(run.depth, run.pivots);
    }

    #[test]
    fn quicksort_sorts(s in seq(), rule in rule()) {
        let run = quicksort_count(&s, rule);
        prop_assert!(run.certifies_sorted(&s));
        prop_assert_eq!(run.pivots as usize, s.len());
    }

    #[test]
    fn find_is_cheaper_than_quicksort((s, k) in seq_and_rank()) {
        let find = hoare_find(&s, k, PivotRule::Classic).unwrap();
        prop_assert!(find.comparisons <= quicksort_count(&s, PivotRule::Classic).comparisons);
    }

    #[test]
    fn scan_rule_ordering(s in seq()) {
        let max2 = scan_maxima(&s, PivotRule::MaxOfTwo);
        let m3 = scan_maxima(&s, PivotRule::MedianOfThree);
        let min2 = scan_maxima(&s, PivotRule::MinOfTwo);
        prop_assert!(max2 <= m3 && m3 <= min2, "{} {} {}", max2, m3, min2);
        prop_assert!(min2 <= ltr_maxima_count(&s) + rtl_maxima_count(&s));
    }

    #[test]
    fn fast_scan_matches_naive(s in seq(), rule in rule()) {
        prop_assert_eq!(scan_maxima(&s, rule), scan_maxima_naive(&s, rule));
    }

    #[test]
    fn classic_scan_counts_left_to_right_maxima(s in seq()) {
        prop_assert_eq!(scan_maxima(&s, PivotRule::Classic), ltr_maxima_count(&s));
    }

    #[test]
    fn partial_perturbation_keeps_the_multiset(s in seq(), p in 0.0f64..=1.0, seed: u64) {
        let out = perturb_partial(&s, p, &mut derive_stream(seed, 0)).unwrap();
        let mut a = s.values().to_vec();
        let mut b = out.values().to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn generators_have_requested_length(n in 4usize..300, seed: u64) {
        for family in GeneratorFamily::ALL {
            let mut spec = GeneratorSpec::new(family, n);
            spec.d = Some(1.0);
            spec.p = Some(0.5);
            let mut rng = derive_stream(seed, n as u64);
            match spec.generate::<f64, _>(&mut rng) {
                Ok(s) => prop_assert_eq!(s.len(), n, "{}", family),
                // Parity preconditions only.
                Err(_) => prop_assert!(matches!(family, GeneratorFamily::ScanLower | GeneratorFamily::PpLower)),
            }
        }
    }

    #[test]
    fn m3_lower_is_reversal_symmetric(n in 3usize..200) {
        let s = gen_m3_lower::<Rational>(n).unwrap();
        prop_assert_eq!(&s.reversed(), &s);
    }

    #[test]
    fn scan_lower_is_a_palindrome(half in 2usize..100) {
        let s = gen_scan_lower::<Rational>(2 * half).unwrap();
        prop_assert_eq!(&s.reversed(), &s);
        prop_assert_eq!(s.values()[half - 1], Rational::new(1, 2));
    }

    #[test]
    fn pp_lower_is_a_permutation_of_the_centred_range(m in 1usize..300, p in 0.01f64..=1.0) {
        let n = 2 * m + 1;
        let s = gen_pp_lower::<Rational>(n, p).unwrap();
        let mut v: Vec<i64> = s.values().iter().map(|r| r.to_integer()).collect();
        prop_assert_eq!(*v.last().unwrap(), 0);
        v.sort();
        prop_assert_eq!(v, (-(m as i64)..=m as i64).collect::<Vec<_>>());
    }
}
