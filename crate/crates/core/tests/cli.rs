use std::path::Path;

use kronadapt::cli::{run_from_args, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["kronadapt"];
    argv.extend_from_slice(args);
    let code = run_from_args(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const TWO_8X8: &str = r#"{"name":"m","layers":[
  {"layer_name":"a","d":8,"h":8,"group":"Q"},
  {"layer_name":"b","d":8,"h":8,"group":"V"}]}"#;

#[test]
fn plan_counts() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.json", TWO_8X8);
    let (code, out, _) = run(&["plan", "--manifest", &m, "--a1", "2", "--a2", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "a1,a2,total_params,a,b\n2,4,32,16,16\n");
    let (_, out, _) = run(&["plan", "--manifest", &m, "--family", "lora", "--rank", "2"]);
    assert_eq!(out.lines().nth(1), Some("2,64,32,32"));
}

#[test]
fn plan_rejects_bad_factorization_and_sweep_skips() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        r#"{"name":"m","layers":[{"layer_name":"layer_x","d":6,"h":8,"group":"other"}]}"#,
    );
    let (code, _, err) = run(&["plan", "--manifest", &m, "--a1", "4", "--a2", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("layer_x"));

    let m2 = write(
        dir.path(),
        "m2.json",
        r#"{"name":"m","layers":[{"layer_name":"p","d":4,"h":4,"group":"Q"},{"layer_name":"r","d":2,"h":4,"group":"K"}]}"#,
    );
    let (code, out, err) = run(&["plan", "--manifest", &m2, "--sweep"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("skipped 4,"));
    let totals: Vec<usize> = out.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert!(totals.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn factorize_prints_pair() {
    assert_eq!(run(&["factorize", "--dim", "640", "--factor", "-1"]).1, "(20, 32)\n");
    assert_eq!(run(&["factorize", "--dim", "640", "--factor", "8"]).1, "(8, 80)\n");
    assert_eq!(run(&["factorize", "--dim", "640", "--factor", "0"]).0, EXIT_USAGE);
}

#[test]
fn bench_reports_both_methods() {
    let (code, out, _) = run(&["bench", "--a1", "4", "--a2", "4", "--b1", "4", "--b2", "4", "--reps", "3"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<_> = out.lines().collect();
    assert_eq!(lines[0], "method,shape,median_ns,allocations_estimate,multiply_adds");
    assert!(lines[1].starts_with("structured,4x4x4x4,") && lines[1].ends_with(",128"));
    assert!(lines[2].starts_with("materialized,4x4x4x4,") && lines[2].ends_with(",256"));
    assert_eq!(run(&["bench", "--a1", "2", "--a2", "2", "--b1", "2", "--b2", "2", "--reps", "0"]).0, EXIT_USAGE);
}

#[test]
fn bench_refuses_materialization_over_budget() {
    let (code, out, err) = run(&[
        "bench", "--a1", "8", "--a2", "8", "--b1", "8", "--b2", "8", "--reps", "1", "--budget", "100",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("materialized,8x8x8x8,size_overflow"));
    assert!(err.contains("materialized"));
}

#[test]
fn grad_check_passes_and_negative_control_fails() {
    for family in ["krona", "lora", "lokr", "loha"] {
        assert_eq!(run(&["grad-check", "--family", family]).0, EXIT_OK, "{family}");
    }
    let (code, out, _) = run(&["grad-check", "--trials", "2", "--corrupt-gradient"]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(out.contains("worst_instance"));
}

#[test]
fn train_writes_outputs_and_flags_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"steps": 20, "seed": 3}"#);
    let csv = dir.path().join("h.csv");
    let ckpt = dir.path().join("c.ckpt.json");
    let (code, out, _) = run(&[
        "train", "--config", &cfg, "--out", csv.to_str().unwrap(), "--ckpt", ckpt.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("loss_ratio,"));
    let history = kronadapt::io::history_from_csv(&std::fs::read_to_string(&csv).unwrap()).unwrap();
    assert_eq!(history.len(), 20);
    assert_eq!(kronadapt::io::load_checkpoint(&ckpt).unwrap().len(), 4);

    let zero = write(dir.path(), "z.json", r#"{"steps": 0}"#);
    assert_eq!(run(&["train", "--config", &zero, "--out", csv.to_str().unwrap()]).0, EXIT_OK);

    let hot = write(dir.path(), "hot.json", r#"{"learning_rate": 1e9, "steps": 50}"#);
    let (code, _, err) = run(&["train", "--config", &hot, "--out", csv.to_str().unwrap()]);
    assert_eq!(code, EXIT_NUMERIC);
    assert!(err.contains("diverged"));
}

#[test]
fn eval_metrics_scores_and_length_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let set = |role: &str, v: &str| format!(r#"{{"label":"x","role":"{role}","dim":2,"vectors":{v}}}"#);
    let real = write(dir.path(), "real.json", &set("reference_images", "[[1,0],[0,1]]"));
    let gen = write(dir.path(), "gen.json", &set("generated_images", "[[1,0],[0,1]]"));
    let prompts = write(dir.path(), "p.json", &set("prompts", "[[0,1],[1,0]]"));
    let (code, out, _) = run(&["eval-metrics", "--real", &real, "--gen", &gen, "--prompts", &prompts]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "metric,value\nclip_i,0.5000\nclip_t,0.0000\n");
    let short = write(dir.path(), "s.json", &set("prompts", "[[0,1]]"));
    assert_eq!(run(&["eval-metrics", "--real", &real, "--gen", &gen, "--prompts", &short]).0, EXIT_USAGE);
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(run(&["plan"]).0, EXIT_USAGE);
    assert_eq!(run(&["nope"]).0, EXIT_USAGE);
}
