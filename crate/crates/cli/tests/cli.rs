use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pmeanfair::format::{load_instance, InstanceFile};
use pmeanfair::solve::SolveReport;
use pmeanfair::verify::{verify, VerifyOptions};
use pmeanfair_core::{GoodSet, Instance, Valuation, WelfareParam};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pmeanfair"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn pmeanfair")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const DIAGONAL: &str = r#"{"n": 2, "m": 2, "agents": [
    {"kind": "additive", "values": [3, 1]},
    {"kind": "additive", "values": [1, 3]}
]}"#;

fn solve_report(args: &[&str]) -> SolveReport {
    let out = run(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn solve_exact_on_the_diagonal() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "diag.json", DIAGONAL);
    let r = solve_report(&["solve", s(&inst), "--p", "0", "--algorithm", "exact"]);
    assert!((r.welfare - 3.0).abs() < 1e-12);
    assert_eq!(r.allocation, [vec![0], vec![1]]);
}

#[test]
fn solve_single_agent_gets_everything() {
    let dir = TempDir::new().unwrap();
    let inst = write(&dir, "one.json", r#"{"n": 1, "m": 3, "agents": [{"kind": "additive", "values": [1.5, 2, 4]}]}"#);
    for p in ["0", "1", "-inf", "-3"] {
        let r = solve_report(&["solve", s(&inst), "--p", p, "--algorithm", "alg"]);
        assert_eq!(r.welfare, 7.5, "p = {p}");
        assert_eq!(r.allocation, [vec![0, 1, 2]]);
        assert!(r.iterations.unwrap() >= 1);
    }
}

#[test]
fn solve_matching_without_leftovers() {
    let dir = TempDir::new().unwrap();
    let inst = write(
        &dir,
        "sq.json",
        r#"{"n": 3, "m": 3, "agents": [
            {"kind": "additive", "values": [1, 5, 2]},
            {"kind": "additive", "values": [4, 1, 1]},
            {"kind": "additive", "values": [1, 1, 3]}]}"#,
    );
    let r = solve_report(&["solve", s(&inst), "--p", "0", "--algorithm", "matching"]);
    assert_eq!(r.values, [5.0, 4.0, 3.0]);
    assert!((r.welfare - 60f64.cbrt()).abs() < 1e-12);
}

#[test]
fn report_welfare_matches_recomputation() {
    let dir = TempDir::new().unwrap();
    let inst_path = dir.path().join("r.json");
    let out = run(&["generate", "random", "--kind", "xos", "--n", "3", "--m", "7", "--seed", "5", "--out", s(&inst_path)]);
    assert_eq!(code(&out), 0);
    let eta = write(&dir, "eta.json", "[1, 2, 0.5]");
    let inst = load_instance(&inst_path).unwrap();
    for alg in ["alg", "matching", "combined", "exact"] {
        for p in ["0", "-0.5", "-inf"] {
            if alg == "combined" && p != "0" {
                continue;
            }
            let r = solve_report(&["solve", s(&inst_path), "--p", p, "--algorithm", alg, "--eta", s(&eta)]);
            let bundles: Vec<GoodSet> = r.allocation.iter().map(|b| GoodSet::from_indices(7, b.iter().copied()).unwrap()).collect();
            let values: Vec<f64> = bundles.iter().enumerate().map(|(i, b)| inst.oracle(i).value(b)).collect();
            // independent weighted mean
            let w = [1.0, 2.0, 0.5];
            let total: f64 = w.iter().sum();
            let expected = match p {
                "0" => values.iter().zip(&w).map(|(v, w)| w / total * v.ln()).sum::<f64>().exp(),
                "-inf" => values.iter().copied().fold(f64::INFINITY, f64::min),
                _ => values.iter().zip(&w).map(|(v, w)| w / total * v.powf(-0.5)).sum::<f64>().powf(-2.0),
            };
            assert!((r.welfare - expected).abs() <= 1e-9 * expected.max(1.0), "{alg} p={p}: {} vs {expected}", r.welfare);
            assert_eq!(r.values, values);
        }
    }
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let short = write(&dir, "short.json", r#"{"n": 2, "m": 1, "agents": [{"kind": "additive", "values": [1]}, {"kind": "additive", "values": [2]}]}"#);
    assert_eq!(code(&run(&["solve", s(&short), "--p", "0"])), 3);
    assert_eq!(code(&run(&["solve", s(&short), "--p", "0", "--algorithm", "matching"])), 3);

    let bad = write(&dir, "bad.json", r#"{"n": 2, "m": 1, "agents": []}"#);
    assert_eq!(code(&run(&["solve", s(&bad), "--p", "0"])), 2);
    let junk = write(&dir, "junk.json", "not json");
    assert_eq!(code(&run(&["solve", s(&junk), "--p", "0"])), 2);
    assert_eq!(code(&run(&["solve", "/nonexistent/file.json", "--p", "0"])), 2);
    let diag = write(&dir, "diag.json", DIAGONAL);
    assert_eq!(code(&run(&["solve", s(&diag), "--p", "2"])), 2);
    assert_eq!(code(&run(&["solve", s(&diag), "--p", "0", "--algorithm", "greedy"])), 2);
    assert_eq!(code(&run(&["solve", s(&diag), "--p", "1", "--algorithm", "matching"])), 2);
    let eta = write(&dir, "eta.json", "[1]");
    assert_eq!(code(&run(&["solve", s(&diag), "--p", "0", "--eta", s(&eta)])), 2);

    let big = dir.path().join("big.json");
    assert_eq!(code(&run(&["generate", "random", "--n", "3", "--m", "12", "--out", s(&big)])), 0);
    assert_eq!(code(&run(&["solve", s(&big), "--p", "0", "--algorithm", "exact", "--budget", "1000"])), 4);
    assert_eq!(code(&run(&["verify", s(&big), "--p", "0", "--budget", "1000"])), 4);
}

#[test]
fn verify_passes_on_small_additive_instances() {
    let dir = TempDir::new().unwrap();
    for seed in 0..12 {
        let n = 1 + seed % 3;
        let m = n + (seed as usize * 5) % (8 - n);
        let path = dir.path().join(format!("v{seed}.json"));
        let out = run(&["generate", "random", "--n", &n.to_string(), "--m", &m.to_string(), "--seed", &seed.to_string(), "--out", s(&path)]);
        assert_eq!(code(&out), 0);
        for p in ["0", "0.5", "-2", "-inf"] {
            let out = run(&["verify", s(&path), "--p", p]);
            let text = String::from_utf8_lossy(&out.stdout);
            assert_eq!(code(&out), 0, "n={n} m={m} p={p}\n{text}");
            assert!(!text.contains("FAIL"));
            assert!(text.contains("PASS round-bundle-floor"));
        }
    }
}

#[test]
fn verify_empty_instance_is_vacuous() {
    let dir = TempDir::new().unwrap();
    let empty = write(&dir, "empty.json", r#"{"n": 1, "m": 0, "agents": [{"kind": "additive", "values": []}]}"#);
    let out = run(&["verify", s(&empty), "--p", "0"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("vacuous"));
}

/// `v(S) = 3` for singletons, 1 otherwise: not monotone.
struct Dips(usize);

impl Valuation for Dips {
    fn num_goods(&self) -> usize {
        self.0
    }

    fn value(&self, goods: &GoodSet) -> f64 {
        match goods.len() {
            0 => 0.0,
            1 => 3.0,
            _ => 1.0,
        }
    }
}

#[test]
fn verify_reports_a_monotonicity_witness() {
    let inst = Instance::new(4, vec![Dips(4), Dips(4)]).unwrap();
    let report = verify(&inst, &WelfareParam::nash(), &VerifyOptions::default()).unwrap();
    let axioms = report.check("valuation-axioms").unwrap();
    assert!(!axioms.passed);
    assert!(axioms.detail.contains("not monotone"), "{}", axioms.detail);
    assert!(axioms.detail.contains("v(A) = 3"), "{}", axioms.detail);
}

#[test]
fn generate_families() {
    let dir = TempDir::new().unwrap();
    let out = run(&["generate", "partition", "--s", "1,1"]);
    assert_eq!(code(&out), 0);
    let file = InstanceFile::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!((file.n, file.m), (2, 2));

    let out = run(&["generate", "xos_hard", "--n", "3", "--delta", "0.1", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kind\": \"xos_hard\""));
    let file = InstanceFile::parse(&text).unwrap();
    assert_eq!((file.n, file.m), (3, 9));
    assert_eq!(file.to_instance().unwrap().m(), 9);

    for args in [
        &["xos_hard", "--n", "3", "--seed", "4"][..],
        &["xos_hard", "--n", "4", "--identical", "--seed", "1"][..],
        &["random", "--kind", "coverage", "--n", "3", "--m", "6", "--seed", "9"][..],
        &["random", "--kind", "budget_additive", "--n", "2", "--m", "5", "--cap-fraction", "0.3"][..],
        &["partition", "--s", "3,1,2"][..],
    ] {
        let a = dir.path().join("a.json");
        let b = dir.path().join("b.json");
        assert_eq!(code(&run(&[&["generate"], args, &["--out", s(&a)]].concat())), 0);
        assert_eq!(code(&run(&[&["generate"], args, &["--out", s(&b)]].concat())), 0);
        let first = std::fs::read(&a).unwrap();
        assert_eq!(first, std::fs::read(&b).unwrap(), "{args:?}");
        // load and serialize again
        let again = InstanceFile::from_instance(&load_instance(&a).unwrap()).to_json();
        assert_eq!(again.as_bytes(), &first[..], "{args:?}");
    }

    for bad in [
        &["generate", "random", "--n", "2"][..],
        &["generate", "random", "--n", "2", "--m", "3", "--kind", "matroid"][..],
        &["generate", "random", "--n", "2", "--m", "3", "--clauses", "2"][..],
        &["generate", "xos_hard", "--n", "3", "--delta", "0.3"][..],
        &["generate", "xos_hard", "--n", "1"][..],
        &["generate", "partition", "--s", "5"][..],
        &["generate", "partition", "--s", "1,0"][..],
        &["generate", "lattice"][..],
    ] {
        assert_eq!(code(&run(bad)), 2, "{bad:?}");
    }
}

fn parse_csv(bytes: &[u8]) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(bytes).records().map(|r| r.unwrap()).collect()
}

#[test]
fn benchmark_random_additive_within_bound() {
    let dir = TempDir::new().unwrap();
    let mut families = Vec::new();
    for n in 2..=3 {
        for m in n..=7 {
            families.push(format!(r#"{{"family": "random", "kind": "additive", "n": {n}, "m": {m}}}"#));
        }
    }
    // 11 size classes × 19 seeds = 209 instances
    let config = format!(
        r#"{{"families": [{}], "p": ["0"], "seeds": {{"start": 0, "count": 19}}, "algorithms": ["alg", "exact"]}}"#,
        families.join(",")
    );
    let cfg = write(&dir, "bench.json", &config);
    let out = run(&["benchmark", s(&cfg), "--no-timing"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_csv(&out.stdout);
    assert_eq!(rows.len(), families.len() * 19 * 2);
    let mut checked = 0;
    for row in &rows {
        let n: f64 = row[1].parse().unwrap();
        let m: f64 = row[2].parse().unwrap();
        let welfare: f64 = row[6].parse().unwrap();
        let opt: f64 = row[7].parse().unwrap();
        let ratio: f64 = if &row[8] == "inf" { f64::INFINITY } else { row[8].parse().unwrap() };
        if welfare > 0.0 {
            assert_eq!(ratio, opt / welfare);
        }
        assert!(ratio <= 8.0 * n / (1.0 - 1.0 / m), "{row:?}");
        assert_eq!(&row[11], "");
        checked += (&row[5] == "alg") as usize;
    }
    assert_eq!(checked, 209);

    let again = run(&["benchmark", s(&cfg), "--no-timing", "--threads", "2"]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn benchmark_blanks() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "b.json",
        r#"{"families": [{"family": "random", "kind": "xos", "n": 3, "m": 16}, {"family": "partition", "s": [2, 2, 4]}],
            "p": [0.5, "-inf"], "seeds": [1, 2], "algorithms": ["alg", "matching", "combined", "exact"],
            "exact_budget": 100000}"#,
    );
    let path = dir.path().join("out.csv");
    let out = run(&["benchmark", s(&cfg), "--out", s(&path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let rows = parse_csv(&std::fs::read(&path).unwrap());
    assert_eq!(rows.len(), 2 * 2 * 2 * 4);
    for row in &rows {
        let big = &row[0] == "random:xos";
        // 3^16 allocations exceed the budget
        assert_eq!(row[7].is_empty(), big, "{row:?}");
        assert_eq!(row[8].is_empty(), big || row[6].is_empty(), "{row:?}");
        let inapplicable = (&row[5] == "matching" && &row[3] == "0.5") || &row[5] == "combined" || (&row[5] == "exact" && big);
        assert_eq!(row[6].is_empty(), inapplicable, "{row:?}");
        if !row[6].is_empty() {
            assert!(!row[11].is_empty());
        }
    }

    let bad = write(&dir, "bad.json", r#"{"families": [], "p": [0], "seeds": [0], "algorithms": ["alg"]}"#);
    assert_eq!(code(&run(&["benchmark", s(&bad)])), 2);
}
