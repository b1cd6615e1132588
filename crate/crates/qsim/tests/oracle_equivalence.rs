use proptest::prelude::*;
use qsim::dense::{dense_distribution, dense_reference, walsh_hadamard};
use qsim::{
    bits, BitString, Complex64, DMatrix, DetRng, Measurement, OutcomeDistribution, RegisterLayout,
    SparseState, SubspaceUnitary,
};
use rand::Rng;

fn random_state(rng: &mut DetRng, n: usize, k: usize) -> SparseState {
    let a = rng.gen_range(1..n);
    let layout = RegisterLayout::new(&[("A", a), ("B", n - a)]).unwrap();
    let terms: Vec<(BitString, Complex64)> = (0..k)
        .map(|_| {
            (
                BitString::random(n, rng),
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    SparseState::superpose(layout, terms).unwrap()
}

#[test]
fn sparse_distributions_match_dense_brute_force() {
    let mut rng = DetRng::from_seed(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let n = rng.gen_range(2..=10);
        let k = rng.gen_range(1..=4);
        let s = random_state(&mut rng, n, k);
        for m in [Measurement::Computational, Measurement::Hadamard] {
            for regs in [&["A", "B"][..], &["A"][..], &["B"][..]] {
                let sparse = s.exact_distribution(m, regs).unwrap();
                let dense = dense_distribution(&s, m, regs).unwrap();
                worst = worst.max(sparse.max_abs_diff(&dense));
                assert!((sparse.total() - 1.0).abs() < 1e-9);
            }
        }
    }
    assert!(worst <= 1e-9, "max abs error {worst}");
}

#[test]
fn walsh_hadamard_reproduces_exact_distribution() {
    let s = SparseState::superpose(
        RegisterLayout::new(&[("A", 1), ("B", 4)]).unwrap(),
        [
            (bits("00110"), Complex64::new(0.6, 0.0)),
            (bits("11011"), Complex64::new(0.0, 0.8)),
        ],
    )
    .unwrap();
    let mut v = dense_reference(&s).unwrap();
    walsh_hadamard(&mut v, 5, &[0, 1, 2, 3, 4]);
    let exact = s.exact_distribution(Measurement::Hadamard, &["A", "B"]).unwrap();
    for (i, a) in v.iter().enumerate() {
        let d = BitString::from_index(i as u64, 5);
        assert!((a.norm_sqr() - exact.prob(&d)).abs() < 1e-12);
    }
}

#[test]
fn two_branch_sampling_is_uniform_on_affine_subspace() {
    let x0 = bits("010110");
    let x1 = bits("100011");
    let diff = x0.xor(&x1).unwrap();
    let mut rng = DetRng::from_seed(99);
    for b in [false, true] {
        let s = SparseState::superpose(
            RegisterLayout::new(&[("A", 1), ("B", 5)]).unwrap(),
            [
                (x0.clone(), Complex64::new(1.0, 0.0)),
                (x1.clone(), Complex64::new(if b { -1.0 } else { 1.0 }, 0.0)),
            ],
        )
        .unwrap();
        let exact = s.exact_distribution(Measurement::Hadamard, &["A", "B"]).unwrap();
        assert_eq!(exact.len(), 32);
        for (d, p) in exact.iter() {
            assert_eq!(d.dot(&diff).unwrap(), b);
            assert!((p - 1.0 / 32.0).abs() < 1e-12);
        }
        let samples: Vec<BitString> = (0..100_000)
            .map(|_| s.measure_hadamard(&["A", "B"], &mut rng).unwrap().0)
            .collect();
        assert!(samples.iter().all(|d| d.dot(&diff).unwrap() == b));
        let tv = OutcomeDistribution::empirical(&samples).tv_distance(&exact);
        assert!(tv <= 0.02, "tv {tv}");
    }
}

#[test]
fn distinguisher_swap_operator_has_unit_cross_element() {
    // V maps (|x0⟩ ± |x1⟩)/√2 to |x0⟩, |x1⟩; W = V†(Z⊗I)V then swaps x0 and x1.
    let x0 = bits("0011");
    let x1 = bits("1101");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |r: f64| Complex64::new(r, 0.0);
    let v = SubspaceUnitary::new(
        vec![x0.clone(), x1.clone()],
        DMatrix::from_row_slice(2, 2, &[c(h), c(h), c(h), c(-h)]),
    )
    .unwrap();
    let z = SubspaceUnitary::new(
        vec![x0.clone(), x1.clone()],
        DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]),
    )
    .unwrap();
    let w = v.adjoint().compose(&z).unwrap().compose(&v).unwrap();
    assert!((w.element(&x1, &x0).unwrap().norm() - 1.0).abs() < 1e-12);
}

fn arb_state() -> impl Strategy<Value = SparseState> {
    (2usize..9, 1usize..5, any::<u64>()).prop_map(|(n, k, seed)| {
        let mut rng = DetRng::from_seed(seed);
        random_state(&mut rng, n, k)
    })
}

proptest! {
    #[test]
    fn operations_preserve_norm(s in arb_state(), seed in any::<u64>()) {
        let mut rng = DetRng::from_seed(seed);
        let with_d = s.add_register("D", 2).unwrap();
        let e = with_d.coherent_eval(&["A"], "D", |x| BitString::from_bits([x.get(0), x.count_ones() % 2 == 1])).unwrap();
        prop_assert!((e.norm_sqr() - 1.0).abs() < 1e-9);
        let (_, m) = e.measure_computational("D", &mut rng).unwrap();
        prop_assert!((m.norm_sqr() - 1.0).abs() < 1e-9);
        let (_, r) = s.measure_hadamard(&["A"], &mut rng).unwrap();
        prop_assert!((r.norm_sqr() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn coherent_eval_twice_is_identity(s in arb_state()) {
        let with_d = s.add_register("D", 3).unwrap();
        let f = |x: &BitString| BitString::from_bits([x.get(0), true, x.count_ones() % 2 == 0]);
        let back = with_d
            .coherent_eval(&["A", "B"], "D", f).unwrap()
            .coherent_eval(&["A", "B"], "D", f).unwrap();
        prop_assert!(back.approx_eq(&with_d, 1e-12));
    }

    #[test]
    fn subspace_unitary_preserves_inner_products(seed in any::<u64>()) {
        let mut rng = DetRng::from_seed(seed);
        let layout = RegisterLayout::new(&[("A", 1), ("B", 5)]).unwrap();
        let basis: Vec<BitString> = {
            let mut v: Vec<BitString> = (0..4).map(|_| BitString::random(6, &mut rng)).collect();
            v.sort();
            v.dedup();
            v
        };
        let n = basis.len();
        let raw = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let q = raw.qr().q();
        let u = SubspaceUnitary::new(basis.clone(), q).unwrap();
        let mk = |rng: &mut DetRng| SparseState::superpose(
            layout.clone(),
            basis.iter().map(|b| (b.clone(), Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))),
        ).unwrap();
        let s1 = mk(&mut rng);
        let s2 = mk(&mut rng);
        let before = s1.inner(&s2).unwrap();
        let after = s1.apply_subspace_unitary(&u).unwrap().inner(&s2.apply_subspace_unitary(&u).unwrap()).unwrap();
        prop_assert!((before - after).norm() < 1e-9);
    }
}
