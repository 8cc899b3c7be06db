use std::collections::BTreeSet;

use dirac_core::sieve::{
    default_bound, enumerate_candidates, enumerate_candidates_with, lambda_in_lambda_s, sieve_all, validate_candidate,
    PencilCache, SieveOptions, SieveReport,
};
use dirac_core::spinnorm::pencil_min;
use dirac_core::weylgroup::enumerate_involutions;
use dirac_core::{InvolutionRecord, Rational, RootDatum, RootType, Weight};

const EX41_WORD: [usize; 11] = [1, 4, 2, 3, 1, 5, 6, 7, 6, 5, 4];
const EX42_WORD: [usize; 32] = [
    1, 2, 3, 4, 2, 3, 4, 5, 4, 2, 3, 4, 5, 6, 5, 4, 2, 3, 4, 5, 6, 7, 6, 5, 4, 2, 3, 1, 4, 5, 6, 7,
];

fn e7() -> RootDatum {
    RootDatum::new(RootType::E7)
}

fn run(d: &RootDatum, s: &InvolutionRecord) -> SieveReport {
    enumerate_candidates(d, s, default_bound(d)).unwrap()
}

fn lambdas(rep: &SieveReport) -> BTreeSet<Vec<i32>> {
    rep.candidates.iter().map(|p| p.lambda.doubled().to_vec()).collect()
}

fn check_report(d: &RootDatum, rep: &SieveReport) {
    assert!(!rep.truncated);
    assert!(rep.candidates.windows(2).all(|w| w[0].lambda < w[1].lambda));
    for p in &rep.candidates {
        validate_candidate(d, &rep.s, &p.lambda, rep.bound_b).unwrap();
        assert!(lambda_in_lambda_s(d, &rep.s, &p.lambda));
        let two = 2 * p.lambda;
        assert_eq!(d.norm_sq(&two), d.norm_sq(&p.lambda_plus) + d.norm_sq(&p.lambda_minus));
        assert_eq!(
            d.inner_product(&p.lambda_plus, &p.lambda_minus).unwrap(),
            Rational::from_integer(0)
        );
        assert_eq!(p.lkt, d.make_dominant(&p.lambda_plus).0);
    }
}

#[test]
fn first_scattered_involution() {
    let d = e7();
    let s = InvolutionRecord::from_word(&d, &EX41_WORD).unwrap();
    let rep = run(&d, &s);
    check_report(&d, &rep);
    let expected: BTreeSet<Vec<i32>> = [
        [1, 1, 2, 1, 1, 1, 1],
        [2, 1, 1, 1, 1, 1, 1],
        [2, 1, 1, 1, 1, 1, 3],
        [2, 1, 1, 1, 2, 1, 2],
        [2, 3, 1, 1, 1, 1, 1],
        [3, 1, 2, 1, 1, 1, 1],
    ]
    .iter()
    .map(|v| v.to_vec())
    .collect();
    assert_eq!(lambdas(&rep), expected);
}

#[test]
fn second_example_involution() {
    let d = e7();
    let s = InvolutionRecord::from_word(&d, &EX42_WORD).unwrap();
    assert_eq!(s.s_rho, Weight::from_integral(&[-17, -1, 15, -1, -1, -1, -1]));
    let rep = run(&d, &s);
    check_report(&d, &rep);
    assert_eq!(rep.candidates.len(), 241);
    let lambda = Weight::from_doubled(&[1, 2, 1, 2, 2, 2, 2]);
    let p = rep.candidates.iter().find(|p| p.lambda == lambda).unwrap();
    assert_eq!(p.lambda_plus, Weight::from_integral(&[-14, 0, 14, 0, 0, 0, 0]));
    assert_eq!(p.lambda_minus, Weight::from_integral(&[15, 2, -13, 2, 2, 2, 2]));
}

#[test]
fn longest_element() {
    let d = e7();
    let w0 = InvolutionRecord::from_srho(&d, &-d.rho()).unwrap();
    let rep = run(&d, &w0);
    check_report(&d, &rep);
    assert_eq!(rep.candidates.len(), 116);
    let set = lambdas(&rep);
    assert!(set.contains(&vec![1, 1, 1, 1, 1, 1, 2]));
    assert!(!set.contains(&vec![2; 7]));
    assert!(d.norm_sq(&(2 * d.rho())) > Rational::from_integer(464));
}

#[test]
fn cheap_prune_never_rejects_an_exact_candidate() {
    let d = e7();
    for s in [
        InvolutionRecord::from_word(&d, &EX41_WORD).unwrap(),
        InvolutionRecord::from_word(&d, &EX42_WORD).unwrap(),
        InvolutionRecord::from_srho(&d, &-d.rho()).unwrap(),
    ] {
        let cache = PencilCache::new();
        let pruned =
            enumerate_candidates_with(&d, &s, default_bound(&d), &cache, SieveOptions { cheap_prune: true }).unwrap();
        let exact =
            enumerate_candidates_with(&d, &s, default_bound(&d), &cache, SieveOptions { cheap_prune: false }).unwrap();
        assert_eq!(lambdas(&pruned), lambdas(&exact));
    }
}

/// Plain box scan with rational arithmetic, for small rank.
fn brute_force(d: &RootDatum, s: &InvolutionRecord, bound: Rational, cap: i32) -> BTreeSet<Vec<i32>> {
    let r = d.rank();
    let mut out = BTreeSet::new();
    let mut m = vec![1i32; r];
    loop {
        let lambda = Weight::from_doubled(&m);
        if lambda_in_lambda_s(d, s, &lambda) {
            let minus = lambda - s.apply(&lambda);
            if d.norm_sq(&minus) <= bound {
                let plus = lambda + s.apply(&lambda);
                let delta = d.make_dominant(&plus).0;
                if d.norm_sq(&(2 * lambda)) <= pencil_min(d, &delta).unwrap().result_min_norm_sq {
                    out.insert(m.clone());
                }
            }
        }
        let mut k = 0;
        loop {
            if k == r {
                return out;
            }
            m[k] += 1;
            if m[k] <= cap {
                break;
            }
            m[k] = 1;
            k += 1;
        }
    }
}

#[test]
fn matches_box_brute_force_at_small_rank() {
    for (t, cap) in [(RootType::A(2), 24), (RootType::A(3), 16), (RootType::D(4), 10)] {
        let d = RootDatum::new(t);
        let bound = default_bound(&d);
        for s in enumerate_involutions(&d, 0)
            .into_iter()
            .filter(|s| s.fixed_set.is_empty())
        {
            let rep = enumerate_candidates(&d, &s, bound).unwrap();
            assert!(
                rep.enumeration_box.iter().all(|&b| b < cap),
                "{t}: box {:?}",
                rep.enumeration_box
            );
            check_report(&d, &rep);
            assert_eq!(lambdas(&rep), brute_force(&d, &s, bound, cap), "{t} {}", s.s_rho);
        }
    }
}

#[test]
fn all_reports_are_deterministic_across_workers() {
    let d = RootDatum::new(RootType::D(5));
    let bound = default_bound(&d);
    let render = |w| {
        sieve_all(&d, bound, w)
            .unwrap()
            .iter()
            .map(|r| r.to_json_line())
            .collect::<Vec<_>>()
            .join("\n")
    };
    let one = render(1);
    assert_eq!(one, render(4));
    for rep in sieve_all(&d, bound, 2).unwrap() {
        check_report(&d, &rep);
    }
}

#[test]
fn trivial_row_fails_the_pencil_test_even_at_the_old_bound() {
    let d = e7();
    let w0 = InvolutionRecord::from_srho(&d, &-d.rho()).unwrap();
    let p0 = pencil_min(&d, &d.zero()).unwrap();
    assert_eq!(p0.result_min_norm_sq, Rational::from_integer(464));
    assert_eq!(p0.achieved_at_n, 8);
    let rep = enumerate_candidates(&d, &w0, Rational::from_integer(798)).unwrap();
    assert!(!lambdas(&rep).contains(&vec![2; 7]));
    assert!(rep.candidates.len() >= 116);
}
