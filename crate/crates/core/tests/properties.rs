//! Property tests over randomly generated matrices, tables and instances.

use frechet_core::cumulative::{
    cum_array, cum_vector, d_matrix, d_order_le, diff_array, diff_vector, is_monge, lemma1_check,
    second_differences,
};
use frechet_core::frechet::{
    check_membership_classical, check_membership_tropical, compute_bounds, lower_bound_closed,
    lower_bound_greedy, upper_bound_closed, upper_bound_residuated,
};
use frechet_core::gen;
use frechet_core::{
    Array2, ContingencyTable, ExtendedTropical, FrechetInstance, Rational, Scalar, Tolerance,
    TropicalMatrix,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type M = TropicalMatrix<Rational>;
type E = ExtendedTropical<Rational>;

fn arb_entry() -> impl Strategy<Value = E> {
    prop_oneof![
        1 => Just(E::Bottom),
        1 => Just(E::Top),
        6 => (-12i64..12, 1i64..4).prop_map(|(n, d)| E::Finite(Rational::from_ratio(n, d))),
    ]
}

fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = M> {
    proptest::collection::vec(arb_entry(), rows * cols)
        .prop_map(move |e| M::new(rows, cols, e).unwrap())
}

fn arb_finite_matrix(rows: usize, cols: usize) -> impl Strategy<Value = M> {
    proptest::collection::vec((-12i64..12).prop_map(|n| E::Finite(Rational::from_ratio(n, 1))), rows * cols)
        .prop_map(move |e| M::new(rows, cols, e).unwrap())
}

fn arb_dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..5, 1usize..5, 1usize..5)
}

fn arb_table() -> impl Strategy<Value = ContingencyTable<Rational>> {
    (1usize..7, 1usize..7).prop_flat_map(|(n, m)| {
        proptest::collection::vec(0i64..20, n * m).prop_map(move |c| {
            ContingencyTable::new(
                Array2::new(n, m, c.into_iter().map(|x| Rational::from_ratio(x, 10)).collect())
                    .unwrap(),
            )
            .unwrap()
        })
    })
}

fn arb_instance() -> impl Strategy<Value = FrechetInstance<Rational>> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        gen::random_instance(&mut rng, 12, Tolerance::EXACT)
    })
}

proptest! {
    #[test]
    fn left_galois((k, n, m) in arb_dims(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: M = gen::random_tropical(&mut rng, k, n, 0.15);
        let b: M = gen::random_tropical(&mut rng, k, m, 0.15);
        let x: M = gen::random_tropical(&mut rng, n, m, 0.15);
        let lhs = a.odot(&x).unwrap().le(&b).unwrap();
        let rhs = x.le(&a.ldiv(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // the residual itself is a subsolution
        prop_assert!(a.odot(&a.ldiv(&b).unwrap()).unwrap().le(&b).unwrap());
    }

    #[test]
    fn right_galois((k, n, m) in arb_dims(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: M = gen::random_tropical(&mut rng, m, k, 0.15);
        let d: M = gen::random_tropical(&mut rng, n, k, 0.15);
        let x: M = gen::random_tropical(&mut rng, n, m, 0.15);
        let lhs = x.odot(&c).unwrap().le(&d).unwrap();
        let rhs = x.le(&d.rdiv(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(d.rdiv(&c).unwrap().odot(&c).unwrap().le(&d).unwrap());
    }

    #[test]
    fn odot_is_associative(a in arb_matrix(2, 3), b in arb_matrix(3, 4), c in arb_matrix(4, 2)) {
        let left = a.odot(&b).unwrap().odot(&c).unwrap();
        let right = a.odot(&b.odot(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn transpose_reverses_products(a in arb_matrix(3, 3), b in arb_matrix(3, 3)) {
        let lhs = a.odot(&b).unwrap().transpose();
        let rhs = b.transpose().odot(&a.transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn odot_is_monotone(a in arb_finite_matrix(2, 3), b in arb_finite_matrix(3, 2),
                        da in arb_finite_matrix(2, 3), db in arb_finite_matrix(3, 2)) {
        // A ≤ A ⊕ dA and B ≤ B ⊕ dB
        let a2 = a.oplus(&da).unwrap();
        let b2 = b.oplus(&db).unwrap();
        prop_assert!(a.odot(&b).unwrap().le(&a2.odot(&b2).unwrap()).unwrap());
    }

    #[test]
    fn cumulative_round_trip(t in arb_table()) {
        let c = cum_array(&t);
        prop_assert_eq!(diff_array(c.values(), Tolerance::EXACT).unwrap(), t.clone());
        prop_assert!(is_monge(c.values()));
        let (n, m) = t.shape();
        let total = t.row_sums().iter().fold(Rational::from_ratio(0, 1), |a, b| a + b);
        prop_assert_eq!(c.get(n - 1, m - 1), &total);
    }

    #[test]
    fn vector_round_trip(xs in proptest::collection::vec(0i64..50, 1..20)) {
        let p = frechet_core::MassVector::new_allow_zero(
            xs.iter().map(|&x| Rational::from_ratio(x, 7)).collect()).unwrap();
        let c = cum_vector(&p);
        prop_assert_eq!(c.last(), p.sigma());
        prop_assert_eq!(diff_vector(c.values()).unwrap(), p.clone());
        // D p by explicit product
        let d = d_matrix::<Rational>(xs.len()).unwrap();
        for i in 0..xs.len() {
            let oracle = (0..xs.len()).fold(Rational::from_ratio(0, 1), |s, l| s + d.get(i, l) * &p.masses()[l]);
            prop_assert_eq!(&c.values()[i], &oracle);
        }
    }

    #[test]
    fn monge_characterization(seed in any::<u64>(), n in 1usize..7, m in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: Array2<Rational> = gen::random_signed_cumulative(&mut rng, n, m);
        let nonneg_cells = second_differences(&c).data().iter().all(|v| !v.is_negative());
        prop_assert_eq!(is_monge(&c), nonneg_cells);
        prop_assert_eq!(is_monge(&c), diff_array(&c, Tolerance::EXACT).is_ok());
    }

    #[test]
    fn d_order_is_partial_order(a in arb_table(), seed in any::<u64>()) {
        // build b, c of the same shape
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, m) = a.shape();
        let b = ContingencyTable::new(gen::random_nonneg_array(&mut rng, n, m)).unwrap();
        let c = ContingencyTable::new(gen::random_nonneg_array(&mut rng, n, m)).unwrap();
        let le = |x: &ContingencyTable<Rational>, y: &ContingencyTable<Rational>| d_order_le(x, y, Tolerance::EXACT).unwrap();
        prop_assert!(le(&a, &a));
        if le(&a, &b) && le(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if le(&a, &b) && le(&b, &c) {
            prop_assert!(le(&a, &c));
        }
    }

    #[test]
    fn row_sums_on_nonnegative(seed in any::<u64>(), n in 1usize..21, m in 1usize..21) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Array2<Rational> = gen::random_nonneg_array(&mut rng, n, m);
        prop_assert!(lemma1_check(&u, Tolerance::EXACT));
    }

    #[test]
    fn bounds_match_closed_forms(inst in arb_instance()) {
        prop_assert_eq!(upper_bound_residuated(&inst), upper_bound_closed(&inst));
        prop_assert_eq!(lower_bound_greedy(&inst), lower_bound_closed(&inst));
        let b = compute_bounds(&inst).unwrap();
        prop_assert!(b.lower_cumulative.values().data().iter()
            .zip(b.upper_cumulative.values().data()).all(|(l, u)| l <= u));
        prop_assert_eq!(cum_array(&b.upper_table), b.upper_cumulative.clone());
        prop_assert_eq!(cum_array(&b.lower_table), b.lower_cumulative.clone());
        prop_assert!(check_membership_classical(&b.upper_table, &inst).unwrap());
        prop_assert!(check_membership_tropical(&b.lower_table, &inst).unwrap());
    }

    #[test]
    fn bounds_scale_with_mass(inst in arb_instance(), k in 0usize..3) {
        let lambda = [Rational::from_ratio(2, 1), Rational::from_ratio(1, 3), Rational::from_ratio(10, 1)][k].clone();
        let scaled = inst.scaled(&lambda).unwrap();
        let up = upper_bound_residuated(&inst).values().map(|v| v * &lambda);
        let low = lower_bound_greedy(&inst).values().map(|v| v * &lambda);
        let scaled_up = upper_bound_residuated(&scaled);
        let scaled_low = lower_bound_greedy(&scaled);
        prop_assert_eq!(scaled_up.values(), &up);
        prop_assert_eq!(scaled_low.values(), &low);
    }

    #[test]
    fn upper_is_greatest_subsolution(inst in arb_instance(), seed in any::<u64>()) {
        // G ⊙ 𝟙 ≤ α and 𝟙ᵀ ⊙ G ≤ βᵀ  ⇔  G ≤ F̄_max
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, m) = (inst.n(), inst.m());
        let upper = upper_bound_residuated(&inst).to_tropical();
        let alpha = inst.alpha().to_column();
        let beta_row = inst.beta().to_column().transpose();
        let ones_col = M::filled(m, 1, E::one()).unwrap();
        let ones_row = M::filled(1, n, E::one()).unwrap();
        let sigma = inst.sigma().clone();
        for _ in 0..8 {
            // entries of G are uniform multiples of σ/8 in [0, σ], nudged downwards
            let g_entries: Vec<E> = (0..n * m)
                .map(|_| {
                    let k = rng.gen_range(0..=8);
                    E::Finite(&sigma * Rational::from_ratio(k, 8))
                })
                .collect();
            let g = M::new(n, m, g_entries).unwrap();
            let sub = g.odot(&ones_col).unwrap().le(&alpha).unwrap()
                && ones_row.odot(&g).unwrap().le(&beta_row).unwrap();
            prop_assert_eq!(sub, g.le(&upper).unwrap());
        }
        // and the bound itself solves the system with equality
        prop_assert_eq!(upper.odot(&ones_col).unwrap(), alpha);
        prop_assert_eq!(ones_row.odot(&upper).unwrap(), beta_row);
    }
}

#[test]
fn float_bounds_track_exact_bounds() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tol = Tolerance::new(1e-9).unwrap();
    for _ in 0..100 {
        let n = rng.gen_range(1..15);
        let m = rng.gen_range(1..15);
        let p = gen::random_counts(&mut rng, n, 100);
        let total: i64 = p.iter().sum();
        let q = gen::random_composition(&mut rng, total, m);
        let exact: FrechetInstance<Rational> = gen::instance_from_counts(&p, &q, 100, Tolerance::EXACT).unwrap();
        let float: FrechetInstance<f64> = gen::instance_from_counts(&p, &q, 100, tol).unwrap();
        let be = compute_bounds(&exact).unwrap();
        let bf = compute_bounds(&float).unwrap();
        let to_f = |a: &Array2<Rational>| a.map(|v| v.to_f64());
        assert!(bf.upper_table.cells().eq_within(&to_f(be.upper_table.cells()), tol));
        assert!(bf.lower_table.cells().eq_within(&to_f(be.lower_table.cells()), tol));
        assert!(check_membership_classical(&bf.lower_table, &float).unwrap());
        assert!(check_membership_tropical(&bf.upper_table, &float).unwrap());
    }
}
