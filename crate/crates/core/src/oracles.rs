//! Property and exhaustive cross-checks between independent code paths.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::exactalg::{det_bareiss, det_multimodular, det_q_rows, smith_normal_form_rows};
use crate::operators::{
    build_D, build_D_tilde, build_D_tilde_q, build_E, build_E_via_expansion, theta_power_matrix,
};
use crate::perm::{level, max_length, rank_sizes};
use crate::schubert::{
    ascent_word_to_longest, nu_divided_difference, nu_pipe_dream_oracle, nu_transition, q_nu, schubert,
    schubert_along, NuCache, NuTable, DEFAULT_PIPE_DREAM_BOUND,
};
use crate::{Permutation, SparsePolynomial};

const NVARS: usize = 5;

fn small_poly() -> impl Strategy<Value = SparsePolynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, NVARS), -5i64..=5), 0..8).prop_map(|terms| {
        SparsePolynomial::from_terms(NVARS, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
    })
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n as u8).collect::<Vec<u8>>())
        .prop_shuffle()
        .prop_map(|w| Permutation::new(w).unwrap())
}

fn dd(f: &SparsePolynomial, i: usize) -> SparsePolynomial {
    f.divided_difference(i).unwrap()
}

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for (j, a) in m[0].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = a * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn divided_difference_squares_to_zero(f in small_poly(), i in 1usize..NVARS) {
        prop_assert!(dd(&dd(&f, i), i).is_zero());
    }

    #[test]
    fn divided_difference_braid(f in small_poly(), i in 1usize..NVARS - 1) {
        let left = dd(&dd(&dd(&f, i), i + 1), i);
        let right = dd(&dd(&dd(&f, i + 1), i), i + 1);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn divided_differences_commute_when_far(f in small_poly(), i in 1usize..NVARS, j in 1usize..NVARS) {
        prop_assume!(i.abs_diff(j) >= 2);
        prop_assert_eq!(dd(&dd(&f, i), j), dd(&dd(&f, j), i));
    }

    #[test]
    fn divided_difference_leibniz_on_symmetric_factor(f in small_poly(), i in 1usize..NVARS) {
        // ∂_i (g f) = g ∂_i f when g is symmetric in x_i, x_{i+1}
        let g = &SparsePolynomial::variable(NVARS, i).unwrap() * &SparsePolynomial::variable(NVARS, i + 1).unwrap();
        prop_assert_eq!(dd(&(&g * &f), i), &g * &dd(&f, i));
    }

    #[test]
    fn permutation_invariants(w in perm(7), v in perm(7), u in perm(7)) {
        prop_assert_eq!(w.length(), w.lehmer_code().sum());
        prop_assert_eq!(w.lehmer_code().to_permutation(), w.clone());
        prop_assert_eq!(w.inverse().inverse(), w.clone());
        prop_assert_eq!(w.inverse().length(), w.length());
        prop_assert!(w.compose(&w.inverse()).unwrap().is_identity());
        prop_assert_eq!(
            w.compose(&v).unwrap().compose(&u).unwrap(),
            w.compose(&v.compose(&u).unwrap()).unwrap()
        );
        prop_assert_eq!(Permutation::from_lex_rank(7, w.lex_rank()), w.clone());
        prop_assert_eq!(w.to_string().parse::<Permutation>().unwrap(), w.clone());
        for (i, c) in w.weak_covers() {
            prop_assert_eq!(c.length(), w.length() + 1);
            prop_assert_eq!(w.right_multiply_s(i).unwrap(), c.clone());
            prop_assert!(w.weak_leq(&c).unwrap());
        }
        for (_, c) in w.bruhat_covers() {
            prop_assert_eq!(c.length(), w.length() + 1);
        }
        prop_assert_eq!(w.is_dominant(), w.count_132() == 0);
        prop_assert!(Permutation::identity(7).weak_leq(&w).unwrap());
        prop_assert!(w.weak_leq(&Permutation::longest(7)).unwrap());
    }

    #[test]
    fn random_reduced_words_give_the_same_polynomial(w in perm(5), seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let word = ascent_word_to_longest(&w, |a| *a.choose(&mut rng).unwrap());
        prop_assert_eq!(schubert_along(&w, &word).unwrap(), schubert(&w));
    }

    #[test]
    fn determinant_matches_cofactor_expansion(entries in prop::collection::vec(-9i64..=9, 25)) {
        let m: Vec<Vec<BigInt>> = entries.chunks(5).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let d = det_bareiss(&m).unwrap();
        prop_assert_eq!(&d, &cofactor_det(&m));
        prop_assert_eq!(&d, &det_multimodular(&m).unwrap());
        let snf = smith_normal_form_rows(&m);
        prop_assert!(snf.is_divisibility_chain());
        if d.is_zero() {
            prop_assert!(snf.rank() < 5);
        } else {
            prop_assert_eq!(BigInt::from(snf.product()), d.abs());
        }
    }
}

#[test]
fn nu_paths_agree_on_s6() {
    for w in Permutation::all(6) {
        let a = nu_divided_difference(&w);
        assert_eq!(nu_transition(&w), a, "{w}");
        assert_eq!(nu_pipe_dream_oracle(&w, DEFAULT_PIPE_DREAM_BOUND).unwrap(), a, "{w}");
    }
}

#[test]
fn nu_is_inverse_invariant_on_s6() {
    let t = NuTable::compute(6);
    for (w, v) in t.iter() {
        assert_eq!(t.get(&w.inverse()), v, "{w}");
    }
}

#[test]
fn nu_one_iff_dominant() {
    for n in 1..=7 {
        let t = NuTable::compute(n);
        for (w, v) in t.iter() {
            assert_eq!(v.is_one(), w.is_dominant(), "{w}");
        }
    }
}

#[test]
fn q_specialization_at_one() {
    for w in Permutation::all(5) {
        assert_eq!(
            BigUint::try_from(q_nu(&w, 4).unwrap().evaluate_at_one()).unwrap(),
            nu_divided_difference(&w)
        );
    }
}

#[test]
fn scaling_identity_and_theta() {
    for n in 2..=5 {
        let cache = NuCache::new(n);
        for k in (0..).take_while(|k| 2 * k < max_length(n)) {
            let d = build_D(n, k).unwrap();
            let dt = build_D_tilde(n, k, &cache).unwrap();
            let j = max_length(n) - 2 * k;
            let fact: BigInt = (1..=j as u64).map(BigInt::from).product();
            assert_eq!(d.entries, dt.map(|x| x * &fact).entries, "D({n},{k})");
            for (u, row) in dt.row_labels.iter().zip(&dt.entries) {
                for (v, x) in dt.col_labels.iter().zip(row) {
                    assert_eq!(!x.is_zero(), u.weak_leq(v).unwrap(), "({u},{v})");
                }
            }
            let dq = build_D_tilde_q(n, k).unwrap();
            assert_eq!(dq.map(|p| p.evaluate_at_one()).entries, dt.entries);
            let q1 = det_q_rows(&dq.entries).unwrap().evaluate_at_one();
            assert_eq!(q1, det_bareiss(&dt.entries).unwrap(), "det_q({n},{k})");
            if n <= 4 {
                assert_eq!(theta_power_matrix(n, k).unwrap().entries, d.entries, "theta({n},{k})");
            }
        }
    }
}

#[test]
fn monk_expansion_matches_bruhat_operator() {
    for k in 0..3 {
        assert_eq!(build_E_via_expansion(4, k).unwrap().entries, build_E(4, k).unwrap().entries);
    }
}

#[test]
fn snf_is_order_invariant() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let cache = NuCache::new(5);
    for k in 1..=4 {
        let dt = build_D_tilde(5, k, &cache).unwrap();
        let base = smith_normal_form_rows(&dt.entries);
        for _ in 0..20 {
            let mut rows: Vec<usize> = (0..dt.nrows()).collect();
            let mut cols: Vec<usize> = (0..dt.ncols()).collect();
            rows.shuffle(&mut rng);
            cols.shuffle(&mut rng);
            let shuffled = dt.permuted(&rows, &cols);
            assert_eq!(smith_normal_form_rows(&shuffled.entries), base);
        }
        assert_eq!(BigInt::from(base.product()), det_bareiss(&dt.entries).unwrap().abs());
    }
    // a unimodular change of basis leaves the invariant factors alone
    let dt = build_D_tilde(5, 2, &cache).unwrap();
    let mut m = dt.entries.clone();
    for _ in 0..30 {
        let (a, b) = (rng.gen_range(0..m.len()), rng.gen_range(0..m.len()));
        if a != b {
            let c = BigInt::from(rng.gen_range(-3i64..=3));
            let src = m[b].clone();
            for (x, y) in m[a].iter_mut().zip(src) {
                *x += &c * y;
            }
        }
    }
    assert_eq!(smith_normal_form_rows(&m), smith_normal_form_rows(&dt.entries));
}

#[test]
fn level_sizes_follow_the_rank_generating_function() {
    for n in 1..=7 {
        let sizes = rank_sizes(n);
        assert_eq!(sizes.iter().sum::<u64>(), (1..=n as u64).product::<u64>());
        for (k, &s) in sizes.iter().enumerate() {
            assert_eq!(level(n, k).unwrap().len() as u64, s);
            assert_eq!(s, sizes[max_length(n) - k]);
        }
    }
}
