use std::process::{Command, Output};

fn numera(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_numera")).args(args).env_remove("NUMERA_ORACLE_LEN").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn analyze_reports() {
    let out = numera(&["analyze", "fibonacci", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["total_states"], 18);
    assert_eq!(report["oracle_length"], 12);

    assert_eq!(json(&numera(&["analyze", "fibonacci", "2"]))["total_states"], 8);

    let report = json(&numera(&["analyze", "sqrt2plus1", "4"]));
    assert_eq!((report["k"].as_u64(), report["S"].as_u64()), (Some(2), Some(8)));
}

#[test]
fn analyze_key_order_is_fixed() {
    let text = stdout(&numera(&["analyze", "fibonacci", "4", "--oracle-length", "6"]));
    let keys = [
        "m", "k", "smith", "S", "period", "predicted_infinite", "total_states", "infinite_states",
        "finite_states", "lower_bound", "h1", "h2", "purely_periodic", "cross_equivalent", "oracle_length",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(positions.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn oracle_length_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_numera"))
        .args(["analyze", "fibonacci", "2"])
        .env("NUMERA_ORACLE_LEN", "5")
        .output()
        .unwrap();
    assert_eq!(json(&out)["oracle_length"], 5);
}

#[test]
fn input_errors_exit_one() {
    for args in [&["analyze", "no-such-system", "3"][..], &["analyze", "fibonacci", "1"], &["dot", "fibonacci", "x"]] {
        let out = numera(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(numera(&["analyze", path.to_str().unwrap(), "3"]).status.code(), Some(1));
}

#[test]
fn definition_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trib.json");
    std::fs::write(
        &path,
        r#"{"name": "tribonacci", "coefficients": [1, 1, 1], "initial_terms": [1, 2, 4],
            "bertrand_directive": {"period": [1, 1, 0]}}"#,
    )
    .unwrap();
    let report = json(&numera(&["analyze", path.to_str().unwrap(), "2"]));
    assert_eq!(report["system"], "tribonacci");
    assert_eq!(report["total_states"], 3 * 8);
}

#[test]
fn dot_output() {
    let fib = stdout(&numera(&["dot", "fibonacci", "numlang"]));
    assert_eq!(
        fib,
        "digraph automaton {\n  rankdir=LR;\n  __start [shape=point, style=invis];\n  q0 [shape=doublecircle];\n  \
         q1 [shape=doublecircle];\n  __start -> q0;\n  q0 -> q0 [label=\"0\"];\n  q0 -> q1 [label=\"1\"];\n  \
         q1 -> q0 [label=\"0\"];\n}\n"
    );
    let tetra = stdout(&numera(&["dot", "lbonacci:4", "numlang"]));
    assert_eq!(tetra.matches("shape=doublecircle").count(), 4);
    assert!(tetra.contains("q3 -> q0 [label=\"0\"];"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib3.dot");
    let out = numera(&["dot", "fibonacci", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.matches(" [shape=").count(), 19);
    assert_eq!(text.matches("shape=doublecircle").count(), 6);
}

#[test]
fn table_output() {
    let text = stdout(&numera(&["table", "fibonacci", "3"]));
    assert_eq!(text.lines().count(), 18);
    assert_eq!(text.lines().next(), Some("r0 r0 r1 F"));
}

#[test]
fn sweep_fibonacci() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fib.csv");
    let out = numera(&["sweep", "--systems", "fibonacci", "--m-min", "2", "--m-max", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    for (row, m) in rows.iter().zip(2u64..) {
        assert_eq!(row[col("m")].parse::<u64>().unwrap(), m);
        assert_eq!(row[col("infinite_states")].parse::<u64>().unwrap(), 2 * m * m);
        assert_eq!(&row[col("error")], "");
    }
}

#[test]
fn sweep_lbonacci_is_deterministic() {
    let args = ["sweep", "--systems", "lbonacci:2,lbonacci:3", "--m-min", "2", "--m-max", "4"];
    let first = numera(&args);
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    let expected: Vec<(String, u64, u64)> =
        [2u32, 3].iter().flat_map(|&l| (2u64..=4).map(move |m| (format!("lbonacci:{l}"), m, l as u64 * m.pow(l)))).collect();
    for (row, (system, m, states)) in rows.iter().zip(&expected) {
        assert_eq!(&row[0], system);
        assert_eq!(row[1].parse::<u64>().unwrap(), *m);
        assert_eq!(row[8].parse::<u64>().unwrap(), *states);
    }
    assert_eq!(rows.len(), expected.len());
    assert_eq!(stdout(&numera(&args)), text);
}

#[test]
fn sweep_edge_cases() {
    let empty = numera(&["sweep", "--systems", "fibonacci", "--m-min", "6", "--m-max", "3"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty).lines().count(), 1);

    let partial = numera(&["sweep", "--systems", "fibonacci,unknown", "--m-min", "2", "--m-max", "2"]);
    assert_eq!(partial.status.code(), Some(2));
    let text = stdout(&partial);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("unknown,2,") && last.len() > "unknown,2,".len() + 15, "{last}");

    assert_eq!(numera(&["sweep", "--systems", "fibonacci", "--m-min", "1", "--m-max", "3"]).status.code(), Some(1));

    let as_json = numera(&["sweep", "--systems", "fibonacci", "--m-min", "2", "--m-max", "3", "--format", "json"]);
    let rows = json(&as_json);
    assert_eq!(rows.as_array().unwrap().len(), 2);
    assert_eq!(rows[1]["total_states"], 18);
}

#[test]
fn hypotheses_command() {
    let report = json(&numera(&["hypotheses", "sqrt2plus1"]));
    assert_eq!(report["h1"], true);
    assert_eq!(report["h2"], true);
}
