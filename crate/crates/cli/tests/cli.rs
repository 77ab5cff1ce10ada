use std::process::{Command, Output};

fn relcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcomp")).args(args).output().expect("spawn relcomp")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compose_relmat_verifies() {
    let o = relcomp(&["compose", "--p", "998244353", "--n", "16", "--seed", "1", "--algo", "relmat"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verified=true"), "{out}");
    assert!(out.contains("generic=true"));
    assert!(stderr(&o).is_empty());
}

#[test]
fn compose_algorithms_print_the_same_result() {
    let mut results = Vec::new();
    for algo in ["horner", "brent-kung", "relmat", "charpoly"] {
        let o = relcomp(&["compose", "--n", "12", "--seed", "7", "--algo", algo, "--print"]);
        assert_eq!(o.status.code(), Some(0));
        let out = stdout(&o);
        results.push(out.lines().find(|l| l.starts_with("result=")).unwrap().to_string());
    }
    assert!(results.windows(2).all(|w| w[0] == w[1]), "{results:?}");
}

#[test]
fn reports_are_reproducible() {
    let strip = |s: String| s.lines().filter(|l| !l.starts_with("phase=")).collect::<Vec<_>>().join("\n");
    let a = strip(stdout(&relcomp(&["compose", "--n", "20", "--seed", "3"])));
    let b = strip(stdout(&relcomp(&["compose", "--n", "20", "--seed", "3"])));
    let c = strip(stdout(&relcomp(&["compose", "--n", "20", "--seed", "4"])));
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn basis_example() {
    let o = relcomp(&["basis", "--module", "N", "--n", "2", "--mu", "2", "--p", "7", "--f", "1,0,1", "--a", "0,1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("degree=1 expected=1 generic=true"), "{out}");
    assert!(stderr(&o).contains("4n^2"));
    let o = relcomp(&["basis", "--module", "M", "--n", "30", "--mu", "3"]);
    assert!(stdout(&o).contains("degree=10 expected=10 generic=true"), "{}", stdout(&o));
}

#[test]
fn basis_refuses_non_generic_m_basis() {
    let o = relcomp(&["basis", "--module", "M", "--f", "1,0,0,0,1", "--a", "3", "--mu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("generic=false certified=false"), "{}", stdout(&o));
}

#[test]
fn non_generic_falls_back_with_warning() {
    let o = relcomp(&["compose", "--f", "1,0,0,0,1", "--a", "5", "--algo", "relmat"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("falling back to brent-kung"), "{}", stderr(&o));
    assert!(stdout(&o).contains("generic=false verified=true"));
}

#[test]
fn instance_files() {
    let dir = std::env::temp_dir().join(format!("relcomp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(&good, "p=998244353\nf=1,2,3,1\na=0,1,1\ng=4,5,6\n").unwrap();
    let o = relcomp(&["compose", "--instance", good.to_str().unwrap(), "--print"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    // 6(x^2+x)^2 + 5(x^2+x) + 4 rem x^3+3x^2+2x+1, computed independently
    assert!(stdout(&o).contains("result=10,11,17"), "{}", stdout(&o));
    let bad = dir.join("bad.txt");
    std::fs::write(&bad, "p=998244353\nf=1,2,3,1\na=0,1\nb=1\n").unwrap();
    let o = relcomp(&["compose", "--instance", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown key"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(relcomp(&["compose", "--algo", "fast"]).status.code(), Some(2));
    assert_eq!(relcomp(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(relcomp(&["compose", "--p", "12"]).status.code(), Some(2));
    assert_eq!(relcomp(&["bench"]).status.code(), Some(2));
}

#[test]
fn bench_writes_one_row_per_size_and_algo() {
    let dir = std::env::temp_dir().join(format!("relcomp-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("out.csv");
    let json = dir.join("out.json");
    let o = relcomp(&[
        "bench",
        "--sizes",
        "64,256,1024",
        "--algo",
        "brent-kung,relmat",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algo,n,m,d,mu,delta,phase,millis,verified,generic");
    assert_eq!(lines.len(), 7);
    let keys: Vec<(String, String)> = lines[1..]
        .iter()
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f[8], "true");
            (f[1].to_string(), f[0].to_string())
        })
        .collect();
    let want: Vec<(String, String)> = ["64", "256", "1024"]
        .iter()
        .flat_map(|n| ["brent-kung", "relmat"].map(|a| (n.to_string(), a.to_string())))
        .collect();
    assert_eq!(keys, want);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
    assert_eq!(v[5]["algo"], "relmat");
    assert_eq!(v[5]["n"], 1024);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bench_order_is_independent_of_threads() {
    let run = |threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_relcomp"))
            .args(["bench", "--sizes", "32,8,16", "--algo", "relmat,horner,nz,kronecker", "--phases"])
            .env("RELCOMP_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        stdout(&o).lines().map(|l| l.split(',').take(7).collect::<Vec<_>>().join(",")).collect::<Vec<_>>()
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    assert_eq!(one[1].split(',').nth(1), Some("8"));
}

#[test]
fn bench_aborts_on_failed_verification() {
    let o = relcomp(&["bench", "--sizes", "8,16,32", "--algo", "horner,relmat", "--corrupt", "relmat"]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.len(), 2, "{out}");
    assert!(rows.iter().all(|r| r.contains(",8,")));
    assert!(rows[1].starts_with("relmat") && rows[1].contains(",false,"));
    assert!(stderr(&o).contains("sweep aborted"));
}

#[test]
fn check_suite_passes() {
    let o = relcomp(&["check", "--sizes", "8,20", "--count", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 18);
    assert!(stdout(&o).lines().all(|l| l.ends_with("fail=0")));
}

#[test]
fn bivariate_and_mpe_verify() {
    for algo in ["nz", "kronecker"] {
        let o = relcomp(&["bivcompose", "--n", "40", "--d", "20", "--algo", algo]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("verified=true"));
    }
    let o = relcomp(&["mpe", "--n", "50", "--d", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verified=true"));
    let o = relcomp(&["mpe", "--p", "7", "--n", "8"]);
    assert_eq!(o.status.code(), Some(2));
}
