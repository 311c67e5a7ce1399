use kronadapt::adapters::{
    adapter_forward, build_adapter, enumerate_factor_pairs, merge_adapter, AdapterSpec, DownInit,
    InitScheme, UpInit,
};
use kronadapt::kron::{kron_materialize, kron_matvec, numerical_rank, unvec, vec};
use kronadapt::metrics::{image_alignment_score, text_alignment_score, EmbeddingRole, EmbeddingSet};
use kronadapt::{DenseMatrix, DenseVector};
use proptest::prelude::*;

fn matrix(max: usize) -> impl Strategy<Value = DenseMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(-2.0f64..2.0, r * c)
            .prop_map(move |data| DenseMatrix::new(r, c, data).unwrap())
    })
}

fn close(a: &DenseMatrix, b: &DenseMatrix, tol: f64) -> bool {
    a.shape() == b.shape() && a.sub(b).unwrap().max_abs() <= tol * (1.0 + b.max_abs())
}

fn embeddings(n: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(
        prop::collection::vec(-1.0f64..1.0, dim)
            .prop_filter("nonzero", |v| v.iter().any(|x| x.abs() > 1e-3)),
        n,
    )
}

proptest! {
    #[test]
    fn structured_matvec_matches_materialized(a in matrix(6), b in matrix(6), seed in any::<u64>()) {
        let n = a.cols() * b.cols();
        let x = DenseVector::new((0..n).map(|i| ((seed.wrapping_add(i as u64) % 17) as f64) - 8.0).collect()).unwrap();
        let fast = kron_matvec(&a, &b, &x).unwrap();
        let slow = kron_materialize(&a, &b).unwrap().matvec(&x).unwrap();
        prop_assert!(fast.sub(&slow).unwrap().max_abs() <= 1e-10 * (1.0 + slow.max_abs()));
    }

    #[test]
    fn unvec_inverts_vec(m in matrix(8)) {
        prop_assert_eq!(unvec(&vec(&m), m.rows(), m.cols()).unwrap(), m);
    }

    #[test]
    fn mixed_product(a in matrix(3), b in matrix(3), c_cols in 1usize..4, d_cols in 1usize..4) {
        let c = DenseMatrix::from_fn(a.cols(), c_cols, |i, j| (i as f64 - j as f64) * 0.5);
        let d = DenseMatrix::from_fn(b.cols(), d_cols, |i, j| (i * j) as f64 * 0.25 - 0.5);
        let lhs = kron_materialize(&a, &b).unwrap().matmul(&kron_materialize(&c, &d).unwrap()).unwrap();
        let rhs = kron_materialize(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn transpose_distributes(a in matrix(4), b in matrix(4)) {
        let lhs = kron_materialize(&a, &b).unwrap().transpose();
        let rhs = kron_materialize(&a.transpose(), &b.transpose()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_is_multiplicative(a in matrix(4), b in matrix(4)) {
        let k = kron_materialize(&a, &b).unwrap();
        prop_assert_eq!(numerical_rank(&k, 1e-9), numerical_rank(&a, 1e-9) * numerical_rank(&b, 1e-9));
    }

    #[test]
    fn merged_forward_matches_adapter_forward(
        d in 1usize..10, h in 1usize..10, pick in any::<prop::sample::Index>(), seed in any::<u64>(), scale in 0.1f64..3.0,
    ) {
        let pairs = enumerate_factor_pairs(d, h);
        let (a1, a2) = pairs[pick.index(pairs.len())];
        let init = InitScheme::new(DownInit::KaimingUniform, UpInit::Same);
        let state = build_adapter(&AdapterSpec::krona(d, h, a1, a2).with_init(init).with_seed(seed).with_scale(scale)).unwrap();
        let w0 = DenseMatrix::from_fn(d, h, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
        let b0 = DenseVector::new((0..d).map(|i| i as f64 * 0.1).collect()).unwrap();
        let x = DenseVector::new((0..h).map(|j| 1.0 - j as f64 * 0.3).collect()).unwrap();
        let adapted = adapter_forward(&state, &w0, &b0, &x).unwrap();
        let merged = merge_adapter(&state, &w0).unwrap().matvec(&x).unwrap().add(&b0).unwrap();
        prop_assert!(adapted.sub(&merged).unwrap().max_abs() <= 1e-10 * (1.0 + merged.max_abs()));
    }

    #[test]
    fn delta_weight_is_linear_in_scale(seed in any::<u64>(), s in 0.1f64..5.0) {
        let init = InitScheme::new(DownInit::NormalS1, UpInit::Same);
        let spec = AdapterSpec::loha(6, 4, 2).with_init(init).with_seed(seed);
        let one = build_adapter(&spec.clone().with_scale(1.0)).unwrap().delta_weight();
        let scaled = build_adapter(&spec.with_scale(s)).unwrap().delta_weight();
        prop_assert!(close(&scaled, &one.scaled(s), 1e-12));
    }

    #[test]
    fn image_score_ignores_order_and_scale(real in embeddings(4, 5), gen in embeddings(3, 5), k in 0.01f64..100.0) {
        let set = |v: Vec<Vec<f64>>, role| EmbeddingSet::new("x", role, v).unwrap();
        let base = image_alignment_score(&set(real.clone(), EmbeddingRole::ReferenceImages), &set(gen.clone(), EmbeddingRole::GeneratedImages)).unwrap();
        let mut shuffled: Vec<_> = real.iter().rev().map(|v| v.iter().map(|x| x * k).collect()).collect();
        shuffled.rotate_left(1);
        let other = image_alignment_score(&set(shuffled, EmbeddingRole::ReferenceImages), &set(gen, EmbeddingRole::GeneratedImages)).unwrap();
        prop_assert!((base - other).abs() <= 1e-12);
    }

    #[test]
    fn text_score_is_invariant_to_joint_permutation(gen in embeddings(5, 4), prompts in embeddings(5, 4)) {
        let set = |v: Vec<Vec<f64>>, role| EmbeddingSet::new("x", role, v).unwrap();
        let base = text_alignment_score(&set(gen.clone(), EmbeddingRole::GeneratedImages), &set(prompts.clone(), EmbeddingRole::Prompts)).unwrap();
        let (mut g, mut p) = (gen, prompts);
        g.reverse();
        p.reverse();
        let other = text_alignment_score(&set(g, EmbeddingRole::GeneratedImages), &set(p, EmbeddingRole::Prompts)).unwrap();
        prop_assert!((base - other).abs() <= 1e-12);
        prop_assert!((-1.0..=1.0).contains(&base));
    }
}
