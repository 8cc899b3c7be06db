//! One pass/fail line per acceptance criterion; exits nonzero on failure.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dirac_core::sieve::{default_bound, enumerate_candidates, sieve_all};
use dirac_core::strings::{
    classify_levi_subsets, count_strings, levi_subset, match_table_row, string_limit, type_label, CoefficientTable,
    LeviMember, StringConstants, StringFamily,
};
use dirac_core::tables::{load_dataset, unfold, verify_all};
use dirac_core::weylgroup::{enumerate_group, enumerate_involutions};
use dirac_core::{InvolutionRecord, Rational, RootDatum, RootType, Weight, WeylElement};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const WORD_A: [usize; 11] = [1, 4, 2, 3, 1, 5, 6, 7, 6, 5, 4];
const WORD_B: [usize; 32] = [
    1, 2, 3, 4, 2, 3, 4, 5, 4, 2, 3, 4, 5, 6, 5, 4, 2, 3, 4, 5, 6, 7, 6, 5, 4, 2, 3, 1, 4, 5, 6, 7,
];

fn e7() -> RootDatum {
    RootDatum::new(RootType::E7)
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn within(start: Instant, limit: Duration, what: &str) -> Outcome {
    let t = start.elapsed();
    ensure!(t <= limit, "{what} took {t:?}, limit {limit:?}");
    Ok(())
}

fn census() -> Outcome {
    let start = Instant::now();
    let inv = enumerate_involutions(&e7(), 0);
    let scattered = inv.iter().filter(|r| r.fixed_set.is_empty()).count();
    ensure!(inv.len() == 10208, "{} involutions", inv.len());
    ensure!(scattered == 8479, "{scattered} with empty I(s)");
    within(start, Duration::from_secs(300), "census")
}

fn words() -> Outcome {
    let d = e7();
    let image = |w: &[usize]| WeylElement::from_word(&d, w).unwrap().apply(&d.rho());
    ensure!(
        image(&WORD_A) == Weight::from_integral(&[-2, 6, 7, -8, 6, 1, -3]),
        "first word"
    );
    ensure!(
        image(&WORD_B) == Weight::from_integral(&[-17, -1, 15, -1, -1, -1, -1]),
        "second word"
    );
    ensure!(
        image(&[7, 6, 4, 5, 6, 7, 2, 3, 4]) == Weight::from_integral(&[3, 5, 5, -7, 5, 1, -3]),
        "embedded D6 word"
    );
    Ok(())
}

fn sieve_counts() -> Outcome {
    let d = e7();
    let bound = default_bound(&d);
    ensure!(bound == int(464), "default bound {bound}");
    let cases = [
        (InvolutionRecord::from_word(&d, &WORD_A).unwrap(), 6),
        (InvolutionRecord::from_word(&d, &WORD_B).unwrap(), 241),
        (InvolutionRecord::from_srho(&d, &-d.rho()).unwrap(), 116),
    ];
    for (k, (s, want)) in cases.iter().enumerate() {
        let start = Instant::now();
        let rep = enumerate_candidates(&d, s, bound).map_err(|e| e.to_string())?;
        within(start, Duration::from_secs(60), "sieve")?;
        ensure!(!rep.truncated, "case {k} truncated");
        ensure!(
            rep.candidates.len() == *want,
            "case {k}: {} candidates, want {want}",
            rep.candidates.len()
        );
        let set: BTreeSet<Vec<i32>> = rep.candidates.iter().map(|p| p.lambda.doubled().to_vec()).collect();
        if k == 0 {
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
            ensure!(set == expected, "six candidates differ: {set:?}");
        }
        if k == 2 {
            ensure!(!set.contains(&vec![2; 7]), "λ = ρ listed for w0");
        }
    }
    Ok(())
}

fn norms() -> Outcome {
    let d = e7();
    ensure!(
        d.norm_sq(&(2 * d.rho())) == int(798),
        "‖2ρ‖² = {}",
        d.norm_sq(&(2 * d.rho()))
    );
    for row in load_dataset(RootType::E7).map_err(|e| e.to_string())? {
        if row.lambda == d.rho() {
            continue;
        }
        let s = InvolutionRecord::from_srho(&d, &row.s_rho).map_err(|e| e.to_string())?;
        let q = d.norm_sq(&(row.lambda - s.apply(&row.lambda)));
        ensure!(q <= int(464), "row {}: ‖λ−sλ‖² = {q}", row.index);
    }
    Ok(())
}

fn tables() -> Outcome {
    let start = Instant::now();
    let summary = verify_all(None, 0).map_err(|e| e.to_string())?;
    within(start, Duration::from_secs(60), "verification")?;
    ensure!(summary.reports.len() == 112, "{} rows", summary.reports.len());
    for r in &summary.reports {
        ensure!(r.passed(), "{}: {:?}", r.row_id, r.failures());
    }
    ensure!(summary.passed(), "duals or sieve inclusion failed");
    for (g, n) in [(RootType::A(6), 32), (RootType::D(6), 34), (RootType::E7, 66)] {
        let u = unfold(&load_dataset(g).unwrap()).map_err(|e| e.to_string())?;
        ensure!(u.len() == n, "{g} unfolds to {}", u.len());
    }
    Ok(())
}

fn strings() -> Outcome {
    let d = e7();
    let n = count_strings(&d, &StringConstants::shipped()).map_err(|e| e.to_string())?;
    ensure!(n.per_size == vec![1, 7, 27, 71, 135, 181, 156], "{:?}", n.per_size);
    ensure!(n.total == 578, "total {}", n.total);
    let table = CoefficientTable::new(&classify_levi_subsets(&d), 7);
    let closed_forms: [&[(&str, u64)]; 7] = [
        &[("empty", 1)],
        &[("A1", 7)],
        &[("A2", 6), ("A1A1", 15)],
        &[("A3", 6), ("A2A1", 18), ("A1^3", 11)],
        &[
            ("D4", 1),
            ("A4", 5),
            ("A3A1", 11),
            ("A2A1A1", 12),
            ("A2A2", 4),
            ("A1^4", 2),
        ],
        &[
            ("D5", 2),
            ("A5", 3),
            ("D4A1", 1),
            ("A4A1", 5),
            ("A3A2", 3),
            ("A3A1A1", 3),
            ("A2A2A1", 3),
            ("A2A1^3", 1),
        ],
        &[
            ("E6", 1),
            ("D6", 1),
            ("A6", 1),
            ("D5A1", 1),
            ("A5A1", 1),
            ("A4A2", 1),
            ("A3A2A1", 1),
        ],
    ];
    let binom = [1, 7, 21, 35, 35, 21, 7];
    for (k, want) in closed_forms.iter().enumerate() {
        let got: BTreeSet<(String, u64)> = table.by_size[k].iter().map(|(t, c)| (type_label(t), *c)).collect();
        let want: BTreeSet<(String, u64)> = want.iter().map(|(l, c)| (l.to_string(), *c)).collect();
        ensure!(got == want, "size {k}: {got:?}");
        ensure!(table.total(k) == binom[k], "size {k} has {} subsets", table.total(k));
    }
    Ok(())
}

fn numerics() -> Outcome {
    let d = e7();
    let w = Weight::from_integral;
    ensure!(!d.in_root_lattice(&d.rho()), "ρ in root lattice");
    ensure!(
        !d.in_root_lattice(&w(&[2, 1, 2, 1, 1, 1, 1])),
        "[2,1,2,1,1,1,1] in root lattice"
    );
    ensure!(!d.is_regular(&w(&[1, 1, 1, 0, 1, 0, 1])), "[1,1,1,0,1,0,1] regular");
    ensure!(!d.is_regular(&w(&[1, 1, 1, 0, 1, 1, 1])), "[1,1,1,0,1,1,1] regular");
    let dim = d
        .weyl_dimension(&w(&[1, 0, 1, 2, 0, 2, 0]))
        .map_err(|e| e.to_string())?;
    ensure!(dim.to_string() == "2399133156669849600", "dimension {dim}");
    ensure!(d.height(&Weight::fundamental(7, 7)) == int(27), "height of ϖ7");
    ensure!(d.height(&w(&[4, 0, 0, 0, 0, 4, 1])) == int(371), "height 371");
    Ok(())
}

fn limit_row(f: &StringFamily, x: i32) -> Option<usize> {
    let d = e7();
    let p = string_limit(&d, f, &[x]).ok()?.limit()?.clone();
    if !p.in_lambda_s(&d) {
        return None;
    }
    match_table_row(&p, &load_dataset(RootType::E7).ok()?)
}

fn limits() -> Outcome {
    let d = e7();
    let family = |nodes: &[usize], members: &[LeviMember]| {
        StringFamily::new(&d, levi_subset(&d, nodes).unwrap(), members).map_err(|e| e.to_string())
    };
    let e6 = RootDatum::new(RootType::E6);
    let s = WeylElement::from_word(&e6, &[4, 5, 6, 5, 1, 3, 2, 4, 1]).unwrap();
    let first = family(
        &[1, 2, 3, 4, 5, 6],
        &[LeviMember {
            s_rho: s.apply(&e6.rho()),
            lambda: Weight::from_doubled(&[2, 1, 1, 1, 1, 2]),
        }],
    )?;
    ensure!(limit_row(&first, -1) == Some(1), "first E6 string at g=-1");

    let trivial = family(&[1, 2, 3, 4, 5, 6], &[LeviMember::trivial(6)])?;
    let mut rows = Vec::new();
    for g in (-31..0).rev().step_by(2) {
        if let Some(r) = limit_row(&trivial, g) {
            rows.push((g, r));
        }
    }
    let want: Vec<(i32, usize)> = [8, 9, 11, 13, 14, 16, 17, 20]
        .iter()
        .enumerate()
        .map(|(k, e)| (-1 - 2 * k as i32, 44 + e))
        .collect();
    ensure!(rows[..8] == want[..], "trivial E6 string limits {rows:?}");
    let distinct: BTreeSet<usize> = rows.iter().map(|&(_, r)| r).collect();
    ensure!(distinct.len() == 8, "{} distinct limits", distinct.len());

    let a6 = family(
        &[1, 3, 4, 5, 6, 7],
        &[LeviMember::new(&[-2, -1, -1, -1, 4, -5], &[2, 2, 2, 2, 1, 1])],
    )?;
    let a6_dual = family(
        &[1, 3, 4, 5, 6, 7],
        &[LeviMember::new(&[-5, 4, -1, -1, -1, -2], &[1, 1, 2, 2, 2, 2])],
    )?;
    let (a, b, c) = (limit_row(&a6, -1), limit_row(&a6, -3), limit_row(&a6, -20));
    ensure!(
        (a, b, c) == (Some(17), Some(24), Some(18)),
        "A6 string limits {a:?} {b:?} {c:?}"
    );
    let dual = (
        limit_row(&a6_dual, -1),
        limit_row(&a6_dual, -18),
        limit_row(&a6_dual, -20),
    );
    ensure!(dual == (c, b, a), "dual A6 string limits {dual:?}");
    Ok(())
}

/// `w ∈ S_{n+1}` acting on `ε`-coordinates, converted to `ϖ`-coordinates.
fn type_a_oracle(n: usize) -> (BTreeSet<Vec<i32>>, BTreeSet<Vec<i32>>) {
    let rho: Vec<i32> = (0..=n as i32).rev().collect();
    let mut perm: Vec<usize> = (0..=n).collect();
    let (mut orbit, mut inv) = (BTreeSet::new(), BTreeSet::new());
    loop {
        let x: Vec<i32> = (0..=n).map(|i| rho[perm[i]]).collect();
        let w: Vec<i32> = (0..n).map(|i| x[i] - x[i + 1]).collect();
        if (0..=n).all(|i| perm[perm[i]] == i) {
            inv.insert(w.clone());
        }
        orbit.insert(w);
        // next permutation
        let Some(i) = (0..n).rev().find(|&i| perm[i] < perm[i + 1]) else {
            return (orbit, inv);
        };
        let j = (i + 1..=n).rev().find(|&j| perm[j] > perm[i]).unwrap();
        perm.swap(i, j);
        perm[i + 1..].reverse();
    }
}

fn properties() -> Outcome {
    let mut rng = StdRng::seed_from_u64(7);
    for t in [
        RootType::A(2),
        RootType::A(6),
        RootType::D(4),
        RootType::D(6),
        RootType::E6,
        RootType::E7,
    ] {
        let d = RootDatum::new(t);
        let r = d.rank();
        for _ in 0..1000 {
            let word: Vec<usize> = (0..rng.gen_range(0..40)).map(|_| rng.gen_range(1..=r)).collect();
            let w = WeylElement::from_word(&d, &word).unwrap();
            let mu = Weight::from_doubled(&(0..r).map(|_| rng.gen_range(-12..=12)).collect::<Vec<_>>());
            let nu = Weight::from_doubled(&(0..r).map(|_| rng.gen_range(-12..=12)).collect::<Vec<_>>());
            let before = d.inner_product(&mu, &nu).unwrap();
            ensure!(
                d.inner_product(&w.apply(&mu), &w.apply(&nu)).unwrap() == before,
                "{t}: form not invariant"
            );
        }
    }

    for n in [2, 3] {
        let d = RootDatum::new(RootType::A(n));
        let (orbit, inv) = type_a_oracle(n);
        let mut got = BTreeSet::new();
        let count = enumerate_group(&d, 1, |v| {
            got.insert(v.integral_coords().unwrap());
        });
        ensure!(count as usize == orbit.len() && got == orbit, "A{n} group enumeration");
        let got: BTreeSet<Vec<i32>> = enumerate_involutions(&d, 2)
            .iter()
            .map(|r| r.s_rho.integral_coords().unwrap())
            .collect();
        ensure!(got == inv, "A{n} involutions");
    }

    let d = e7();
    let reports = sieve_all(&d, default_bound(&d), 0).map_err(|e| e.to_string())?;
    ensure!(reports.len() == 8479, "{} sieve reports", reports.len());
    let mut candidates = 0;
    for rep in &reports {
        ensure!(!rep.truncated, "{} truncated", rep.s.s_rho);
        for p in &rep.candidates {
            candidates += 1;
            let lhs = d.norm_sq(&(2 * p.lambda));
            ensure!(
                lhs == d.norm_sq(&p.lambda_plus) + d.norm_sq(&p.lambda_minus),
                "Pythagoras at {}",
                p.lambda
            );
            ensure!(
                d.inner_product(&p.lambda_plus, &p.lambda_minus).unwrap() == int(0),
                "orthogonality"
            );
        }
    }
    ensure!(candidates == 31575, "{candidates} candidates in total");

    let d6 = RootDatum::new(RootType::D(6));
    let render = |w| {
        sieve_all(&d6, default_bound(&d6), w)
            .unwrap()
            .iter()
            .map(|r| r.to_json_line())
            .collect::<Vec<_>>()
    };
    ensure!(render(1) == render(4), "D6 sieve depends on workers");
    ensure!(
        enumerate_involutions(&d, 1) == enumerate_involutions(&d, 3),
        "census depends on workers"
    );
    let v1 = verify_all(None, 1).unwrap().to_json();
    ensure!(
        v1 == verify_all(None, 3).unwrap().to_json(),
        "verification depends on workers"
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("involution census", census),
        ("word evaluation", words),
        ("sieve replication", sieve_counts),
        ("norm calibration", norms),
        ("table verification", tables),
        ("string counting", strings),
        ("root-lattice, regularity, dimension and height numerics", numerics),
        ("string limits", limits),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("[PASS] {}. {name} ({secs:.1}s)", k + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
