mod common;

use common::*;
use everett_sim::measurement::{heisenberg_evolve, InteractionSequence};
use everett_sim::tensor::{conjugate_by, embed, kron, partial_trace};
use everett_sim::Layout;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use proptest::prelude::*;

fn single(label: &str, dim: usize) -> Layout {
    Layout::single(label, dim).unwrap()
}

fn eigenvalues(op: &everett_sim::Operator) -> Vec<f64> {
    let n = op.dim();
    let m = DMatrix::from_row_slice(n, n, op.as_slice());
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(seed in arb_seed(), da in 2usize..4, db in 2usize..4, dc in 2usize..4) {
        let mut r = rng(seed);
        let a = random_operator(&mut r, &single("a", da));
        let b = random_operator(&mut r, &single("b", db));
        let c = random_operator(&mut r, &single("c", dc));
        let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
        let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.layout(), right.layout());
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn kron_mixed_product(seed in arb_seed()) {
        let mut r = rng(seed);
        let (la, lb) = (single("a", 2), single("b", 3));
        let (a1, a2) = (random_operator(&mut r, &la), random_operator(&mut r, &la));
        let (b1, b2) = (random_operator(&mut r, &lb), random_operator(&mut r, &lb));
        let lhs = kron(&a1, &b1).unwrap().matmul(&kron(&a2, &b2).unwrap()).unwrap();
        let rhs = kron(&a1.matmul(&a2).unwrap(), &b1.matmul(&b2).unwrap()).unwrap();
        prop_assert!(lhs.approx_eq(&rhs, 1e-12));
    }

    #[test]
    fn embedded_operators_on_disjoint_factors_commute(seed in arb_seed(), p in 0usize..4, q in 0usize..4) {
        prop_assume!(p != q);
        let layout = Layout::new([("w", 2), ("x", 3), ("y", 2), ("z", 2)]).unwrap();
        let labels = ["w", "x", "y", "z"];
        let mut r = rng(seed);
        let a = random_operator(&mut r, &single(labels[p], layout.dim_of(labels[p]).unwrap()));
        let b = random_operator(&mut r, &single(labels[q], layout.dim_of(labels[q]).unwrap()));
        let ea = embed(&a, &layout).unwrap();
        let eb = embed(&b, &layout).unwrap();
        prop_assert!(ea.commutator_norm(&eb).unwrap() < 1e-12);
    }

    #[test]
    fn embed_matches_kron_with_identities(seed in arb_seed()) {
        let layout = Layout::new([("x", 2), ("y", 3), ("z", 2)]).unwrap();
        let mut r = rng(seed);
        let sub = Layout::new([("z", 2), ("x", 2)]).unwrap();
        let op = random_operator(&mut r, &sub);
        // reorder by hand: conjugate the [z,x] operator into [x,z] order
        let swapped = {
            let n = 4;
            let mut data = vec![Complex64::new(0.0, 0.0); 16];
            for i in 0..n {
                for j in 0..n {
                    let (iz, ix) = (i / 2, i % 2);
                    let (jz, jx) = (j / 2, j % 2);
                    data[(ix * 2 + iz) * n + (jx * 2 + jz)] = op.get(i, j);
                }
            }
            everett_sim::Operator::from_rows(&Layout::new([("x", 2), ("z", 2)]).unwrap(), data).unwrap()
        };
        let expected = embed(&swapped, &layout).unwrap();
        prop_assert!(embed(&op, &layout).unwrap().approx_eq(&expected, 1e-14));
        // and partial trace undoes embedding up to the traced dimension
        let back = partial_trace(&embed(&op, &layout).unwrap(), &["y"]).unwrap();
        let want = embed(&swapped, back.layout()).unwrap().scale(Complex64::new(3.0, 0.0));
        prop_assert!(back.approx_eq(&want, 1e-12));
    }

    #[test]
    fn conjugation_preserves_hermiticity_and_spectrum(seed in arb_seed()) {
        let layout = Layout::new([("a", 2), ("b", 3)]).unwrap();
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, &layout);
        let u = random_unitary(&mut r, &layout);
        let c = conjugate_by(&h, &u).unwrap();
        prop_assert!(c.is_hermitian(1e-12));
        let (e0, e1) = (eigenvalues(&h), eigenvalues(&c));
        for (x, y) in e0.iter().zip(&e1) {
            prop_assert!((x - y).abs() < 1e-10, "{:?} vs {:?}", e0, e1);
        }
    }

    #[test]
    fn evolution_is_a_homomorphism(seed in arb_seed()) {
        let layout = Layout::new([("a", 2), ("b", 2)]).unwrap();
        let mut r = rng(seed);
        let op = random_operator(&mut r, &layout);
        let u1 = random_unitary(&mut r, &layout);
        let u2 = random_unitary(&mut r, &layout);
        let s1 = InteractionSequence::new().then("u1", u1.clone()).unwrap();
        let s2 = InteractionSequence::new().then("u2", u2.clone()).unwrap();
        let both = InteractionSequence::new().then("u1", u1).unwrap().then("u2", u2).unwrap();
        let stepwise = heisenberg_evolve(&heisenberg_evolve(&op, &s2).unwrap(), &s1).unwrap();
        let combined = heisenberg_evolve(&op, &both).unwrap();
        prop_assert!(stepwise.approx_eq(&combined, 1e-12));
        let u = both.composite().unwrap().unwrap();
        let direct = u.adjoint().matmul(&op).unwrap().matmul(&u).unwrap();
        prop_assert!(combined.approx_eq(&direct, 1e-12));
    }

    #[test]
    fn unitarity_defect_detects_scaling(seed in arb_seed(), eps in 1e-6f64..1e-2) {
        let layout = Layout::new([("a", 3), ("b", 2)]).unwrap();
        let mut r = rng(seed);
        let u = random_unitary(&mut r, &layout);
        prop_assert!(u.unitarity_defect() < 1e-12);
        let bad = u.scale(Complex64::new(1.0 + eps, 0.0));
        prop_assert!(bad.unitarity_defect() > 1e-7);
        prop_assert!(conjugate_by(&u, &bad).is_err());
    }
}
