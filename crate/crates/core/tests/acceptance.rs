//! One PASS/FAIL line per published claim. Comparisons are exact unless a
//! tolerance is named next to the check. Set `SCHUBERT_EXTENDED=1` to add the
//! long-running cases.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use schubert_core::exactalg::smith_normal_form_rows;
use schubert_core::operators::{build_D, build_D_tilde, theta_power_matrix};
use schubert_core::perm::max_length;
use schubert_core::schubert::{
    nu_divided_difference, nu_pipe_dream_oracle, nu_transition, NuCache, NuTable, DEFAULT_PIPE_DREAM_BOUND,
};
use schubert_core::verify::{Bounds, Matched, VerificationReport, Verifier};
use schubert_core::{Permutation, SparsePolynomial};

const SEED: u64 = 20_240_601;
const K1_BUDGET: Duration = Duration::from_secs(5);
const DET_BUDGET: Duration = Duration::from_secs(30 * 60);
const E_BUDGET: Duration = Duration::from_secs(10 * 60);
const RATIO_INTERVAL: (f64, f64) = (0.25, 0.5);

const SNF_DEFAULT: &[(usize, usize)] = &[
    (4, 1), (4, 2),
    (5, 1), (5, 2), (5, 3), (5, 4),
    (6, 1), (6, 2), (6, 3), (6, 4), (6, 5), (6, 6), (6, 7),
    (7, 1), (7, 2), (7, 3),
    (8, 1), (8, 2),
    (9, 1),
    (10, 1), (10, 2),
];
const SNF_EXTENDED: &[(usize, usize)] = &[(7, 4), (7, 5), (8, 3), (8, 4), (9, 2), (9, 3)];

struct Harness {
    verifier: Verifier,
    failures: usize,
}

impl Harness {
    fn line(&mut self, id: &str, what: &str, ok: bool, elapsed: Duration, note: String) {
        if !ok {
            self.failures += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        let note = if note.is_empty() { String::new() } else { format!("  [{note}]") };
        println!("{tag} {id:<14} {what} ({:.2}s){note}", elapsed.as_secs_f64());
    }

    fn reports<F>(&self, f: F) -> (Vec<VerificationReport>, Duration)
    where
        F: FnOnce(&Verifier) -> Vec<VerificationReport>,
    {
        let t = Instant::now();
        let r = f(&self.verifier);
        (r, t.elapsed())
    }
}

fn all_match(reports: &[VerificationReport]) -> bool {
    reports.iter().all(|r| r.matched == Matched::Yes)
}

fn describe_failures(reports: &[VerificationReport]) -> String {
    reports
        .iter()
        .filter(|r| r.matched != Matched::Yes)
        .map(|r| {
            format!(
                "{} n={}{}: got {} want {}",
                r.claim_id,
                r.parameters.n,
                r.parameters.k.map(|k| format!(" k={k}")).unwrap_or_default(),
                r.computed,
                r.expected
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn detail<'a>(r: &'a VerificationReport, key: &str) -> &'a Value {
    r.detail.get(key).unwrap_or(&Value::Null)
}

fn extended() -> bool {
    std::env::var("SCHUBERT_EXTENDED").is_ok_and(|v| v == "1")
}

fn random_poly(rng: &mut StdRng, nvars: usize) -> SparsePolynomial {
    let terms = (0..rng.gen_range(1..8))
        .map(|_| {
            let e = (0..nvars).map(|_| rng.gen_range(0..4)).collect();
            (e, BigInt::from(rng.gen_range(-5i64..=5)))
        })
        .collect::<Vec<_>>();
    SparsePolynomial::from_terms(nvars, terms)
}

/// Scaling, θ-power, ν paths, ∂ relations and SNF shuffles; returns the
/// names of the checks that failed.
fn oracle_suite() -> Vec<&'static str> {
    let mut failed = Vec::new();
    let mut rng = StdRng::seed_from_u64(SEED);

    let mut scaling = true;
    let mut theta = true;
    for n in 2..=5 {
        let cache = NuCache::new(n);
        for k in (0..).take_while(|k| 2 * k < max_length(n)) {
            let d = build_D(n, k).expect("D");
            let dt = build_D_tilde(n, k, &cache).expect("D tilde");
            let fact: BigInt = (1..=(max_length(n) - 2 * k) as u64).map(BigInt::from).product();
            scaling &= d.entries == dt.map(|x| x * &fact).entries;
            if n <= 4 {
                theta &= theta_power_matrix(n, k).expect("theta").entries == d.entries;
            }
        }
    }
    if !scaling {
        failed.push("scaling");
    }
    if !theta {
        failed.push("theta-power");
    }

    let table = NuTable::compute(6);
    let nu_ok = Permutation::all(6).all(|w| {
        let a = nu_divided_difference(&w);
        nu_transition(&w) == a
            && *table.get(&w) == a
            && nu_pipe_dream_oracle(&w, DEFAULT_PIPE_DREAM_BOUND).ok() == Some(a)
    });
    if !nu_ok {
        failed.push("nu-paths");
    }

    let nvars = 5;
    let dd = |f: &SparsePolynomial, i| f.divided_difference(i).expect("index");
    let dd_ok = (0..100).all(|_| {
        let f = random_poly(&mut rng, nvars);
        let i = rng.gen_range(1..nvars - 1);
        dd(&dd(&f, i), i).is_zero() && dd(&dd(&dd(&f, i), i + 1), i) == dd(&dd(&dd(&f, i + 1), i), i + 1)
    });
    if !dd_ok {
        failed.push("divided-difference");
    }

    let cache = NuCache::new(5);
    let mut snf_ok = true;
    for k in 1..=4 {
        let dt = build_D_tilde(5, k, &cache).expect("D tilde");
        let base = smith_normal_form_rows(&dt.entries);
        for _ in 0..20 {
            let mut rows: Vec<usize> = (0..dt.nrows()).collect();
            let mut cols: Vec<usize> = (0..dt.ncols()).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            snf_ok &= smith_normal_form_rows(&dt.permuted(&rows, &cols).entries) == base;
        }
    }
    if !snf_ok {
        failed.push("snf-shuffle");
    }
    failed
}

fn main() -> ExitCode {
    let ext = extended();
    let mut h = Harness {
        verifier: Verifier::new(Bounds::default()),
        failures: 0,
    };
    println!("acceptance (extended={ext}, seed={SEED})");

    let (r, t) = h.reports(|v| (3..=10).map(|n| v.verify_k1_sign(n).expect("k1sign")).collect());
    let ok = all_match(&r) && t <= K1_BUDGET;
    let note = if ok {
        r.iter().map(|x| format!("n={}:{}", x.parameters.n, x.computed)).collect::<Vec<_>>().join(" ")
    } else {
        describe_failures(&r)
    };
    h.line("det-k1", "|det D~(n,1)| = C(n,2)-1 with displayed-order sign, 3<=n<=10, budget 5s", ok, t, note);

    let (r, t) = h.reports(|v| {
        let mut pairs: Vec<(usize, usize)> = (2..=6)
            .flat_map(|n| (0..).take_while(move |k| 2 * k < max_length(n)).map(move |k| (n, k)))
            .collect();
        pairs.extend((0..=5).map(|k| (7, k)));
        pairs.into_iter().map(|(n, k)| v.verify_det_conjecture(n, k).expect("det")).collect()
    });
    let ok = all_match(&r) && t <= DET_BUDGET;
    h.line(
        "det-formula",
        "|det D~(n,k)| = product formula, n<=6 all k and n=7 k<=5, budget 30min",
        ok,
        t,
        format!("{} cases {}", r.len(), describe_failures(&r)),
    );

    let mut pairs = SNF_DEFAULT.to_vec();
    if ext {
        pairs.extend_from_slice(SNF_EXTENDED);
    }
    let (r, t) = h.reports(|v| pairs.iter().map(|&(n, k)| v.verify_snf(n, k).expect("snf")).collect());
    let what = if ext { "SNF of D~(n,k) equals the table, all listed pairs" } else { "SNF of D~(n,k) equals the table, default pairs" };
    h.line("snf-table", what, all_match(&r), t, format!("{} pairs {}", r.len(), describe_failures(&r)));

    let (r, t) = h.reports(|v| (3..=10).map(|n| v.verify_f_n1(n).expect("fn1")).collect());
    h.line(
        "snf-k1",
        "SNF of D~(n,1) = (1^(n-2), C(n,2)-1) and leading minor unimodular, 3<=n<=10",
        all_match(&r),
        t,
        describe_failures(&r),
    );
    let signs: Vec<String> = r.iter().map(|x| format!("n={}:{}", x.parameters.n, detail(x, "minor_det"))).collect();
    let literal = r.iter().all(|x| detail(x, "minor_det_is_plus_one") == &Value::Bool(true));
    h.line(
        "snf-k1-minor",
        "first-row-first-column minor of the displayed D~(n,1) has det exactly +1, 3<=n<=10",
        literal,
        Duration::ZERO,
        signs.join(" "),
    );

    let (r, t) = h.reports(|v| [(4, 1), (4, 2), (5, 1)].iter().map(|&(n, k)| v.verify_e(n, k).expect("e")).collect());
    let ok = all_match(&r) && t <= E_BUDGET;
    h.line("bruhat-det", "|det E(n,k)| equals the factored table, (4,1) (4,2) (5,1), budget 10min", ok, t, describe_failures(&r));

    let (r, t) = h.reports(|v| (1..=5).map(|n| v.verify_chevalley(n).expect("chevalley")).collect());
    h.line("chevalley", "V^C(n,2)(id) = C(n,2)! w0, n<=5", all_match(&r), t, describe_failures(&r));

    let top = if ext { 10 } else { 8 };
    let (r, t) = h.reports(|v| (3..=top).map(|n| v.verify_max_nu(n).expect("maxnu")).collect());
    h.line(
        "max-nu",
        &format!("max nu_w and every maximizer match the table, 3<=n<={top}"),
        all_match(&r),
        t,
        describe_failures(&r),
    );

    let (r, t) = h.reports(|v| (1..=8).map(|n| v.verify_two_term(n).expect("twoterm")).collect());
    let equal = r.iter().all(|x| detail(x, "sets_equal") == &Value::Bool(true));
    h.line(
        "two-term",
        "{one 132} within {nu=2} with count C(2n-3,n-3), n<=8",
        all_match(&r),
        t,
        format!("sets equal for all n: {equal} {}", describe_failures(&r)),
    );

    let (r, t) = h.reports(|v| (1..=6).map(|n| v.verify_cauchy(n).expect("cauchy")).collect());
    h.line("cauchy-sum", "sum nu_w nu_(w^-1 w0) = 2^C(n,2), n<=6", all_match(&r), t, describe_failures(&r));

    let (r, t) = h.reports(|v| (5..=8).map(|n| v.verify_cauchy(n).expect("cauchy")).collect());
    let ratios: Vec<(usize, f64)> = r
        .iter()
        .map(|x| (x.parameters.n, detail(x, "log2_u_over_n2").as_f64().unwrap_or(f64::NAN)))
        .collect();
    let in_range = ratios.iter().all(|&(_, q)| (RATIO_INTERVAL.0..=RATIO_INTERVAL.1).contains(&q));
    let finite = r.iter().all(|x| detail(x, "finite_bounds_hold") == &Value::Bool(true));
    let note = ratios.iter().map(|(n, q)| format!("n={n}:{q:.4}")).collect::<Vec<_>>().join(" ");
    h.line(
        "growth-ratio",
        "log2 u(n)/n^2 in [0.25, 0.5], 5<=n<=8",
        in_range,
        t,
        format!("{note}; finite bounds hold: {finite}"),
    );

    let (r, t) = h.reports(|v| [(5, 2), (5, 3)].iter().map(|&(n, k)| v.verify_qdet(n, k).expect("qdet")).collect());
    let note = r.iter().map(|x| format!("({},{}) {}", x.parameters.n, x.parameters.k.unwrap_or(0), x.computed)).collect::<Vec<_>>().join("; ");
    h.line("q-det", "det D~_q(5,2) and (5,3) valuation, degree, q=1 value, divisibility", all_match(&r), t, note);

    let t = Instant::now();
    let failed = oracle_suite();
    h.line(
        "oracles",
        "scaling n<=5, theta-power n<=4, nu paths on S6, 100 random d-relations, 20 SNF shuffles",
        failed.is_empty(),
        t.elapsed(),
        failed.join(" "),
    );

    println!("{} failed", h.failures);
    if h.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
