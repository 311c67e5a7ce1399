//! Toy fine-tuning: an attention block with adapted Q/K/V/O projections, the
//! weighted denoising objective on synthetic data, analytic gradients for every
//! adapter family, and a seeded training loop.

mod data;
mod grad;
mod model;
mod train;

pub use data::{
    denoiser_tokens, predict_noise, timestep_embedding, DataGenerator, DenoiseBatch, TaskConfig,
    TeacherKind, TeacherStudentTask,
};
pub use grad::{
    adapter_gradients, adapter_gradients_fd, finite_diff_gradient, flatten_factors,
    load_flat_params, relative_error, FactorGrads,
};
pub use model::{attention_forward, Projection, ToyAttentionModel};
pub use train::{
    denoise_loss, loss_and_gradients, run_teacher_student, train, OptimizerKind,
    TeacherStudentReport, TrainConfig, TrainHistory, DIVERGENCE_THRESHOLD, EVAL_BATCH_SIZE,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adapters::{AdapterSpec, DownInit, InitScheme, UpInit};
    use crate::error::Error;
    use crate::matrix::{DenseMatrix, DenseVector};

    fn v(data: &[f64]) -> DenseVector {
        DenseVector::new(data.to_vec()).unwrap()
    }

    #[test]
    fn loss_is_zero_when_targets_come_from_model() {
        let (student, mut task) = TeacherStudentTask::setup(&TaskConfig::default(), 1).unwrap();
        let mut batch = task.next_batch(4).unwrap();
        for i in 0..batch.len() {
            batch.eps[i] = predict_noise(&student, &batch.z_t[i], &batch.c[i], batch.t[i]).unwrap();
        }
        assert_eq!(denoise_loss(&student, &batch).unwrap(), 0.0);
    }

    #[test]
    fn loss_of_known_residual_and_weight_linearity() {
        let i2 = DenseMatrix::identity(2);
        let zero = DenseMatrix::zeros(2, 2);
        // output projection zero => prediction is the zero vector
        let model = ToyAttentionModel::new([i2.clone(), i2.clone(), i2, zero]).unwrap();
        let z = v(&[0.1, 0.2]);
        let c = v(&[0.3, -0.4]);
        let batch = DenoiseBatch::new(vec![z.clone()], vec![v(&[3.0, 4.0])], vec![c.clone()], vec![5], vec![1.0]).unwrap();
        assert_eq!(denoise_loss(&model, &batch).unwrap(), 25.0);
        let doubled = DenoiseBatch { w_t: vec![2.0], ..batch };
        assert_eq!(denoise_loss(&model, &doubled).unwrap(), 50.0);
    }

    #[test]
    fn zero_init_loss_equals_unadapted_loss() {
        let (student, mut task) = TeacherStudentTask::setup(&TaskConfig::default(), 2).unwrap();
        let batch = task.next_batch(8).unwrap();
        assert_eq!(
            denoise_loss(&student, &batch).unwrap().to_bits(),
            denoise_loss(&student.without_adapters(), &batch).unwrap().to_bits()
        );
    }

    #[test]
    fn model_gradients_match_finite_differences() {
        let init = InitScheme::new(DownInit::NormalS1, UpInit::Same);
        for template in [
            AdapterSpec::krona(0, 0, 2, 4),
            AdapterSpec::lora(0, 0, 2),
            AdapterSpec::lokr(0, 0, -1, 1),
            AdapterSpec::loha(0, 0, 2),
        ] {
            let cfg = TaskConfig {
                dim: 8,
                student: template.with_init(init).with_scale(0.9),
                teacher: TeacherKind::Independent {
                    spec: AdapterSpec::krona(8, 8, 2, 2).with_init(init),
                },
                ..TaskConfig::default()
            };
            let (model, mut task) = TeacherStudentTask::setup(&cfg, 3).unwrap();
            let batch = task.next_batch(3).unwrap();
            let (_, grads) = loss_and_gradients(&model, &batch).unwrap();
            for (proj, state) in model.adapters() {
                let analytic = flatten_factors(&grads[proj].iter().collect::<Vec<_>>());
                let params = flatten_factors(&state.factors());
                let fd = finite_diff_gradient(
                    |p| {
                        let mut m = model.clone();
                        let mut s = state.clone();
                        load_flat_params(&mut s, p);
                        m.set_adapter(*proj, s).unwrap();
                        denoise_loss(&m, &batch).unwrap()
                    },
                    &params,
                    1e-6,
                );
                let err = relative_error(&analytic, &fd);
                assert!(err < 1e-5, "{:?} {proj:?}: {err}", state.family());
            }
        }
    }

    #[test]
    fn zero_steps_leaves_model_unchanged() {
        let (mut student, mut task) = TeacherStudentTask::setup(&TaskConfig::default(), 4).unwrap();
        let before = student.clone();
        let cfg = TrainConfig { steps: 0, ..TrainConfig::default() };
        let h = train(&mut student, &mut task, &cfg).unwrap();
        assert!(h.losses.is_empty());
        assert_eq!(student, before);
    }

    #[test]
    fn huge_learning_rate_diverges() {
        let (mut student, mut task) = TeacherStudentTask::setup(&TaskConfig::default(), 4).unwrap();
        let cfg = TrainConfig { learning_rate: 1e9, steps: 50, ..TrainConfig::default() };
        assert!(matches!(
            train(&mut student, &mut task, &cfg),
            Err(Error::DivergenceDetected { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = TrainConfig { learning_rate: 0.0, ..TrainConfig::default() };
        assert!(matches!(bad.validate(), Err(Error::InvalidConfig(_))));
        let parsed: TrainConfig = serde_json::from_str(r#"{"optimizer":{"kind":"sgd"}}"#).unwrap();
        assert_eq!(parsed.optimizer, OptimizerKind::Sgd);
        assert_eq!(parsed.learning_rate, 5e-4);
    }
}
