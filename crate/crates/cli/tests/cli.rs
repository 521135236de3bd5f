use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn itr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_itr"))
        .args(args)
        .env("ITR_LOG", "off")
        .output()
        .expect("run itr")
}

fn ok(args: &[&str]) -> String {
    let out = itr(args);
    assert!(
        out.status.success(),
        "itr {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn sorted_lines(text: &str) -> Vec<String> {
    let mut v: Vec<String> = text.lines().map(str::to_owned).collect();
    v.sort();
    v
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

/// A small N-Triples graph with a repeated pattern, a duplicate triple, a
/// loop, blank nodes and literals.
fn sample_nt() -> String {
    let mut s = String::new();
    for i in 0..40 {
        s += &format!("<http://ex.org/p{i}> <http://ex.org/knows> <http://ex.org/p{}> .\n", i + 1);
        s += &format!("<http://ex.org/p{}> <http://ex.org/name> \"person {i}\"@en .\n", i + 1);
    }
    s += "<http://ex.org/p0> <http://ex.org/knows> <http://ex.org/p1> .\n";
    s += "<http://ex.org/p3> <http://ex.org/knows> <http://ex.org/p3> .\n";
    s += "_:b0 <http://ex.org/name> \"with \\\"quotes\\\"\" .\n";
    s
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = path(dir, name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn ntriples_round_trip_preserves_triple_multiset() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.nt", &sample_nt());
    let itr_file = path(&dir, "g.itr");
    let back = path(&dir, "back.nt");
    let report = ok(&["compress", "-i", &input, "-f", "nt", "-o", &itr_file]);
    assert!(report.contains("ratio"));
    ok(&["decompress", "-i", &itr_file, "-o", &back, "-f", "nt"]);
    assert_eq!(sorted_lines(&fs::read_to_string(back).unwrap()), sorted_lines(&sample_nt()));
}

#[test]
fn unbound_query_equals_decompression() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.nt", &sample_nt());
    let itr_file = path(&dir, "g.itr");
    let back = path(&dir, "back.nt");
    ok(&["compress", "-i", &input, "-f", "nt", "-o", &itr_file]);
    ok(&["decompress", "-i", &itr_file, "-o", &back]);
    let all = ok(&["query", "-i", &itr_file, "-q", "? ? ?"]);
    assert_eq!(sorted_lines(&all), sorted_lines(&fs::read_to_string(back).unwrap()));

    let knows = ok(&["query", "-i", &itr_file, "-q", "<http://ex.org/p0> <http://ex.org/knows> ?"]);
    assert_eq!(
        knows.lines().collect::<Vec<_>>(),
        vec!["<http://ex.org/p0> <http://ex.org/knows> <http://ex.org/p1> ."; 2]
    );
    let quoted = ok(&["query", "-i", &itr_file, "-q", "? ? \"with \\\"quotes\\\"\""]);
    assert_eq!(quoted.lines().count(), 1);
    assert_eq!(ok(&["query", "-i", &itr_file, "-q", "<http://ex.org/nobody> ? ?"]), "");
}

#[test]
fn compression_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.nt", &sample_nt());
    let (a, b) = (path(&dir, "a.itr"), path(&dir, "b.itr"));
    ok(&["compress", "-i", &input, "-f", "nt", "-o", &a]);
    ok(&["compress", "-i", &input, "-f", "nt", "-o", &b]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let q = ["query", "-i", a.as_str(), "-q", "? <http://ex.org/knows> ?"];
    assert_eq!(ok(&q), ok(&q));
}

#[test]
fn edge_list_with_node_labels() {
    let dir = TempDir::new().unwrap();
    let mut el = String::new();
    let mut labels = String::new();
    for b in 0..30u32 {
        let n = 4 * b;
        el += &format!("{n}\th\t{}\n{}\tv\t{}\n", n + 1, n + 1, n + 2);
        labels += &format!("{n}\tx\n{}\to\n{}\tx\n", n + 1, n + 2);
    }
    let input = write(&dir, "g.el", &el);
    let label_file = write(&dir, "labels.tsv", &labels);
    for plus in [false, true] {
        let itr_file = path(&dir, "g.itr");
        let mut args = vec!["compress", "-i", &input, "-f", "el", "-o", &itr_file, "--node-labels", &label_file];
        if plus {
            args.push("--plus");
        }
        ok(&args);
        let (back, back_labels) = (path(&dir, "back.el"), path(&dir, "back.tsv"));
        ok(&["decompress", "-i", &itr_file, "-o", &back, "--node-labels", &back_labels]);
        assert_eq!(sorted_lines(&fs::read_to_string(&back).unwrap()), sorted_lines(&el));
        assert_eq!(sorted_lines(&fs::read_to_string(&back_labels).unwrap()), sorted_lines(&labels));
        let stats = ok(&["stats", "-i", &itr_file]);
        assert!(stats.contains(&format!("plus mode      {plus}")));
        let entries = if plus { "label entries  2" } else { "label entries  90" };
        assert!(stats.contains(entries), "{stats}");
    }
}

#[test]
fn bench_reports_each_shape() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.nt", &sample_nt());
    let itr_file = path(&dir, "g.itr");
    ok(&["compress", "-i", &input, "-f", "nt", "-o", &itr_file]);
    let generated = ok(&["bench", "-i", &itr_file, "--generate", "500", "-n", "2"]);
    let row = generated.lines().find(|l| l.starts_with("S??")).expect("S?? row");
    assert_eq!(row.split_whitespace().nth(1), Some("500"));

    let queries = write(
        &dir,
        "q.txt",
        "<http://ex.org/p1> ? ?\n? <http://ex.org/name> ?\n\n#0 #0 #1\n<http://ex.org/missing> ? ?\n",
    );
    let report = ok(&["bench", "-i", &itr_file, "-Q", &queries, "-n", "3"]);
    for shape in ["S??", "?P?", "SPO"] {
        assert!(report.lines().any(|l| l.starts_with(shape)), "{shape} missing:\n{report}");
    }
    assert!(report.contains("1 patterns name terms missing"));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.nt", &sample_nt());
    let itr_file = path(&dir, "g.itr");
    ok(&["compress", "-i", &input, "-f", "nt", "-o", &itr_file]);

    let code = |args: &[&str]| itr(args).status.code();
    // usage
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["compress", "-i", &input, "-f", "xml", "-o", &itr_file]), Some(1));
    assert_eq!(code(&["query", "-i", &itr_file, "-q", "only two"]), Some(1));
    assert_eq!(code(&["decompress", "-i", &itr_file, "-o", &path(&dir, "x"), "-f", "el"]), Some(1));
    assert_eq!(code(&["bench", "-i", &itr_file]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
    // I/O
    let missing = path(&dir, "missing.nt");
    assert_eq!(code(&["compress", "-i", &missing, "-f", "nt", "-o", &itr_file]), Some(2));
    assert_eq!(code(&["stats", "-i", &missing]), Some(2));
    let no_dir = dir.path().join("no/such/dir/out.itr");
    assert_eq!(
        code(&["compress", "-i", &input, "-f", "nt", "-o", no_dir.to_str().unwrap()]),
        Some(2)
    );
    // format and corruption
    let bad_nt = write(&dir, "bad.nt", "<a> <p> .\n");
    let out = itr(&["compress", "-i", &bad_nt, "-f", "nt", "-o", &itr_file]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let bytes = fs::read(&itr_file).unwrap();
    let truncated = path(&dir, "truncated.itr");
    fs::write(&truncated, &bytes[..bytes.len() / 2]).unwrap();
    assert_eq!(code(&["stats", "-i", &truncated]), Some(3));
    let not_itr = write(&dir, "not.itr", "hello, this is not a container at all........................");
    assert_eq!(code(&["query", "-i", &not_itr, "-q", "? ? ?"]), Some(3));
}
