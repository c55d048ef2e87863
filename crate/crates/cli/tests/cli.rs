use std::path::Path;
use std::process::{Command, Output};

fn galph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_galph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn plan_reproduces_the_256_letter_tables() {
    let o = galph(&["plan", "-N", "256", "-d", "0.08", "--pow2", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["groups"], 41);
    assert_eq!(v["coverage"], 278);
    assert!(v["worst_case_redundancy"].as_f64().unwrap() <= 0.08);

    let v = json(&galph(&["plan", "-N", "256", "-d", "0.08", "--json"]));
    assert_eq!(v["groups"], 35);
    let last: Vec<u64> = v["sizes"].as_array().unwrap()[28..]
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(last, vec![16, 19, 22, 25, 29, 34, 39]);
}

#[test]
fn plan_text_output() {
    let o = galph(&["plan", "-N", "1", "-d", "0.5"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("s = 1"), "{text}");
    assert!(text.contains("worst-case redundancy = 0.000000"), "{text}");
    let o = galph(&[
        "plan",
        "-N",
        "65536",
        "-d",
        "0.16",
        "--closed-form",
        "--json",
    ]);
    assert!(json(&o)["worst_case_redundancy"].as_f64().unwrap() <= 0.16);
}

#[test]
fn usage_errors_exit_with_1() {
    for args in [
        vec!["plan", "--bogus"],
        vec!["plan", "-d", "-1"],
        vec!["plan", "-N", "0"],
        vec!["plan", "-d", "0.6", "--closed-form"],
        vec!["encode", "a"],
        vec!["bench", "--source", "pareto:2"],
        vec!["bench", "-c", "0/1"],
        vec!["bench", "--mode", "lz"],
    ] {
        let o = galph(&args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    assert_eq!(galph(&["--help"]).status.code(), Some(0));
}

fn round_trip(dir: &Path, data: &[u8], extra: &[&str]) -> u64 {
    let input = dir.join("in.bin");
    let packed = dir.join("in.galf");
    let output = dir.join("out.bin");
    std::fs::write(&input, data).unwrap();
    let mut args = vec!["encode", input.to_str().unwrap(), packed.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = galph(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = galph(&["decode", packed.to_str().unwrap(), output.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&output).unwrap(), data, "{extra:?}");
    std::fs::metadata(&packed).unwrap().len()
}

#[test]
fn files_round_trip_in_every_mode() {
    let dir = tempfile::tempdir().unwrap();
    let text = include_bytes!("cli.rs").repeat(3);
    let sets: [&[&str]; 6] = [
        &["--mode", "plain"],
        &["--mode", "grouped"],
        &["--mode", "grouped", "--pow2", "-d", "0.02"],
        &["--mode", "grouped", "-c", "1/2", "--max-count", "64"],
        &["--mode", "huffman"],
        &["--mode", "grouped", "-N", "1000", "-d", "0.3"],
    ];
    for extra in sets {
        round_trip(dir.path(), &[], extra);
        let size = round_trip(dir.path(), &text, extra);
        assert!(size < text.len() as u64, "{extra:?}");
    }
}

#[test]
fn random_bytes_do_not_compress() {
    let dir = tempfile::tempdir().unwrap();
    let mut state = 0x9e3779b97f4a7c15u64;
    let data: Vec<u8> = (0..1 << 20)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 24) as u8
        })
        .collect();
    let size = round_trip(dir.path(), &data, &["--mode", "grouped"]);
    assert!(size as f64 >= data.len() as f64 * 0.999, "{size}");
}

#[test]
fn corrupt_containers_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk");
    std::fs::write(&junk, b"definitely not a container").unwrap();
    let out = dir.path().join("out");
    let o = galph(&["decode", junk.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.path().join("missing");
    let o = galph(&["encode", missing.to_str().unwrap(), out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_is_deterministic() {
    let args = [
        "bench",
        "--source",
        "geom:0.99",
        "-N",
        "4096",
        "-d",
        "0.08,0.16",
        "--len",
        "20000",
        "--seed",
        "9",
        "--no-timing",
        "--json",
    ];
    let a = galph(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, galph(&args).stdout);
    let v = json(&a);
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 5);
    assert!(runs
        .iter()
        .all(|r| r["round_trip"] == true && r.get("timing").is_none()));
}

#[test]
fn bench_shows_the_op_count_gap() {
    let v = json(&galph(&[
        "bench",
        "--source",
        "zipf:1.0",
        "-N",
        "65536",
        "-d",
        "0.16",
        "--mode",
        "plain,grouped",
        "--len",
        "100000",
        "--json",
    ]));
    let runs = v["runs"].as_array().unwrap();
    let plain = &runs[0];
    let grouped = &runs[1];
    assert_eq!(grouped["groups"], 39);
    let ratio = grouped["tree_ops_per_symbol"].as_f64().unwrap()
        / plain["tree_ops_per_symbol"].as_f64().unwrap();
    assert!(ratio < 0.45, "{ratio}");
    let gap =
        grouped["bits_per_symbol"].as_f64().unwrap() - plain["bits_per_symbol"].as_f64().unwrap();
    assert!(gap <= 0.16 + 0.02, "{gap}");
    assert!(grouped["timing"]["encode_seconds"].is_number());
}

#[test]
fn bench_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f");
    std::fs::write(&path, b"abracadabra ".repeat(500)).unwrap();
    let spec = format!("file:{}", path.display());
    let o = galph(&["bench", "--source", &spec]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.contains("grouped") && text.contains("wall clock"),
        "{text}"
    );
    let o = galph(&["bench", "--source", "file:/nonexistent/x"]);
    assert_eq!(o.status.code(), Some(2));
}
