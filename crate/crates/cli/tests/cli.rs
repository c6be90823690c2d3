use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn toy(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/toy").join(name)
}

fn mksent<I, S>(args: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    Command::new(env!("CARGO_BIN_EXE_mksent")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_exits_zero_and_lists_commands() {
    let out = mksent(["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["stats", "langid-train", "langid-filter", "preprocess", "bootstrap-lexicon", "train", "predict", "evaluate", "ablate"] {
        assert!(text.contains(cmd), "{cmd}");
    }
    let sub = mksent(["ablate", "--help"]);
    assert_eq!(sub.status.code(), Some(0));
    let text = String::from_utf8(sub.stdout).unwrap();
    for flag in ["--train", "--test", "--config", "--components", "--table", "--out", "--threads"] {
        assert!(text.contains(flag), "{flag}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(mksent(["no-such-command"]).status.code(), Some(1));
    assert_eq!(mksent(["evaluate", "--gold"]).status.code(), Some(1));
}

#[test]
fn missing_file_is_a_data_error() {
    let out = mksent(["stats", "/nonexistent/file.tsv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evaluate_identical_files_scores_one() {
    let gold = toy("test.tsv");
    let out = mksent(["evaluate", "--gold", p(&gold), "--pred", p(&gold)]);
    assert_eq!(out.status.code(), Some(0));
    let report = String::from_utf8(out.stdout).unwrap();
    let last = report.lines().last().unwrap();
    assert!(last.starts_with("f1_pn\tall\t"), "{last}");
    let value: f64 = last.rsplit('\t').next().unwrap().parse().unwrap();
    assert_eq!(value, 1.0);
}

#[test]
fn training_without_a_class_names_it() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("two_class.tsv");
    let text = fs::read_to_string(toy("train.tsv")).unwrap();
    let kept: String = text.lines().filter(|l| !l.contains("\tneutral\t")).map(|l| format!("{l}\n")).collect();
    fs::write(&data, kept).unwrap();
    let out = mksent(["train", p(&data), "--config", p(&toy("toy.conf")), "--out", p(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("neutral"), "{err}");
}

#[test]
fn langid_filter_passes_records_through() {
    let dir = tempfile::tempdir().unwrap();
    let mk = dir.path().join("mk.txt");
    let en = dir.path().join("en.txt");
    fs::write(&mk, "ова е многу добро\nденес врне дожд\nубаво утро на сите\n").unwrap();
    fs::write(&en, "this is very good\nit rains today\ngood morning everyone\n").unwrap();
    let model = dir.path().join("langid.tsv");
    let out = mksent([
        "langid-train", "--corpus", &format!("mk={}", p(&mk)), "--corpus", &format!("en={}", p(&en)),
        "--out", p(&model),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let input = dir.path().join("in.jsonl");
    let mk_line = r#"{"id":"a","text":"многу добро утро","extra":1}"#;
    fs::write(&input, format!("{mk_line}\n{{\"id\":\"b\",\"text\":\"good morning\"}}\n")).unwrap();
    let out = mksent(["langid-filter", "--model", p(&model), "--target", "mk", "--margin", "1.0", "--input", p(&input)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), format!("{mk_line}\n"));

    let out = mksent(["langid-filter", "--model", p(&model), "--target", "mk", "--margin", "-1", "--input", p(&input)]);
    assert_eq!(out.status.code(), Some(1));
}

fn toy_workflow(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let conf = toy("toy.conf");
    let run = |args: Vec<&str>| {
        let out = mksent(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let model_dir = dir.join("model");
    fs::create_dir_all(&model_dir).unwrap();
    let mut outputs = vec![
        ("stats".to_string(), run(vec!["stats", p(&toy("train.tsv"))])),
        ("preprocess".to_string(), run(vec!["preprocess", p(&toy("train.tsv")), "--config", p(&conf)])),
    ];
    run(vec!["train", p(&toy("train.tsv")), "--config", p(&conf), "--out", p(&model_dir)]);
    let pred = dir.join("pred.tsv");
    run(vec![
        "predict", p(&toy("test.tsv")), "--model", p(&model_dir.join("model.tsv")), "--config", p(&conf),
        "--out", p(&pred),
    ]);
    outputs.push(("evaluate".to_string(), run(vec!["evaluate", "--gold", p(&toy("test.tsv")), "--pred", p(&pred)])));
    outputs.push(("predictions".to_string(), fs::read(&pred).unwrap()));
    let mut files: Vec<_> = fs::read_dir(&model_dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    for f in files {
        outputs.push((f.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&f).unwrap()));
    }
    outputs
}

#[test]
fn toy_workflow_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = toy_workflow(a.path());
    let second = toy_workflow(b.path());
    assert_eq!(first.len(), second.len());
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        assert!(x == y, "{name} differs between runs");
    }
    assert!(first.iter().any(|(n, _)| n == "model.tsv"));
}
