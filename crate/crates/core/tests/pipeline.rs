//! End-to-end runs through the library entry point and the binary.

use std::collections::HashMap;
use std::process::Command;

use clap::Parser;
use steinweil::cli::{cache, run, Args, RunConfig};
use steinweil::error::Error;
use steinweil::ffield::FieldDescriptor;
use steinweil::outcome::Status;
use steinweil::spgroup::SymplecticSpace;
use steinweil::steinberg::SteinbergModule;

fn config(extra: &[&str]) -> RunConfig {
    let mut v = vec!["steinweil"];
    v.extend_from_slice(extra);
    RunConfig::from_args(&Args::parse_from(v)).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steinweil"))
}

#[test]
fn core_tier_passes() {
    let r = run(&config(&[])).unwrap();
    assert_eq!(r.exit_code(), 0, "{}", r.to_text());
    assert_eq!(r.summary.fail, 0);
    assert!(r.summary.pass > 40);
    assert!(r.results.iter().all(|x| x.params.starts_with("n=1 q=3 l=2 m=2")));
    let main = r.find("main_theorem", "n=1 q=3 l=2 m=2").unwrap();
    assert_eq!(main.status, Status::Pass);
}

#[test]
fn invalid_configs_are_rejected_before_running() {
    let parse = |extra: &[&str]| {
        let mut v = vec!["steinweil"];
        v.extend_from_slice(extra);
        RunConfig::from_args(&Args::parse_from(v))
    };
    assert!(matches!(parse(&["--n", "1", "--q", "3", "--l", "3"]), Err(Error::Config(_))));
    assert!(matches!(parse(&["--n", "1", "--q", "5", "--m", "2"]), Err(Error::Config(_))));
    assert!(matches!(parse(&["--n", "0", "--q", "3"]), Err(Error::Config(_))));
    assert!(matches!(parse(&["--n", "1", "--q", "6"]), Err(Error::Config(_))));
    assert!(matches!(parse(&["--q", "3"]), Err(Error::Config(_))));
    let out = bin().args(["--n", "1", "--q", "3", "--l", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty(), "no checks may run");
    let out = bin().args(["--tier", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_reports_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = bin().args(["--report", "json", "--out"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["params", "version", "seed", "results", "summary"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["summary"]["fail"], 0);
    let first = &v["results"][0];
    for key in ["name", "params", "status", "detail"] {
        assert!(first.get(key).is_some(), "result missing {key}");
    }
    assert!(first.get("wall_ms").is_none());
}

/// Every check appears exactly once per parameter set (and twist), none fail,
/// and the toon2/pius entries are present at (2,3).
#[test]
fn full_tier_is_complete() {
    let r = run(&config(&["--tier", "full"])).unwrap();
    assert_eq!(r.summary.fail, 0, "{}", r.to_text());
    let mut seen: HashMap<(String, String), usize> = HashMap::new();
    for x in &r.results {
        *seen.entry((x.name.clone(), x.params.clone())).or_default() += 1;
    }
    assert!(seen.values().all(|&c| c == 1));
    let names_at = |p: &str| -> Vec<String> {
        let mut v: Vec<String> = r.results.iter().filter(|x| x.params.starts_with(p)).map(|x| x.name.clone()).collect();
        v.sort();
        v.dedup();
        v
    };
    let reference = names_at("n=2 q=3 ");
    for p in ["n=1 q=3 ", "n=1 q=5 ", "n=1 q=7 "] {
        assert_eq!(names_at(p), reference, "{p}");
    }
    let p23 = "n=2 q=3 l=2 m=2";
    for name in ["toon2", "pius", "op", "great", "mejor", "refo", "steinberg_16", "toon1", "relation_catalogue", "main_theorem"] {
        assert_eq!(r.find(name, p23).map(|x| x.status), Some(Status::Pass), "{name}");
    }
    for k in [1, 2] {
        for name in ["impo1", "cuatro", "main_theorem.weil", "main_theorem.socle"] {
            let x = r.find(name, &format!("{p23} κ={k}")).unwrap();
            assert_eq!(x.status, Status::Pass, "{name} κ={k}");
        }
    }
}

#[test]
fn reports_are_byte_identical() {
    let cfg = config(&["--seed", "7"]);
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a.to_text(), b.to_text());
    assert_eq!(a.to_json(), b.to_json());
    let one = bin().args(["--seed", "7", "--report", "json"]).output().unwrap();
    let two = bin().args(["--seed", "7", "--report", "json"]).output().unwrap();
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(String::from_utf8(one.stdout).unwrap(), a.to_json());
}

/// A writing run and a reading run produce the same report; stale and damaged
/// files are replaced with a warning and the run still passes.
#[test]
fn cache_directory_behaviour() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let cold = bin().args(["--cache-dir", d]).output().unwrap();
    let warm = bin().args(["--cache-dir", d]).output().unwrap();
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    assert!(warm.stderr.is_empty());

    let fq = FieldDescriptor::create(3, 1, None).unwrap();
    let f = FieldDescriptor::create(2, 2, None).unwrap();
    let s = SymplecticSpace::new(1, &fq).unwrap();
    let sm = SteinbergModule::build(&s, &f, 1 << 20).unwrap();
    let key = cache::CacheKey::for_algebra(sm.algebra(), "e");
    let path = cache::path(dir.path(), &key);
    let good = std::fs::read_to_string(&path).unwrap();
    assert_eq!(cache::read(dir.path(), &key, sm.algebra()).unwrap(), cache::CacheRead::Hit(sm.e().clone()));

    std::fs::write(&path, good.replacen("q=3", "q=5", 1)).unwrap();
    let stale = bin().args(["--cache-dir", d]).output().unwrap();
    assert_eq!(stale.status.code(), Some(0));
    assert_eq!(stale.stdout, cold.stdout);
    assert!(String::from_utf8_lossy(&stale.stderr).contains("warning"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), good);

    std::fs::write(&path, &good[..good.len() - 20]).unwrap();
    let truncated = bin().args(["--cache-dir", d]).output().unwrap();
    assert_eq!(truncated.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&truncated.stderr).contains("warning"));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), good);

    let envrun = bin().env("STEINWEIL_CACHE", d).output().unwrap();
    assert_eq!(envrun.stdout, cold.stdout);
    assert!(envrun.stderr.is_empty());
}

#[test]
fn scope_restricts_checks() {
    let r = run(&config(&["--n", "2", "--q", "3", "--scope", "matrix"])).unwrap();
    assert_eq!(r.summary.fail, 0);
    let skipped = |name: &str| r.results.iter().find(|x| x.name == name).unwrap().status == Status::Skipped;
    assert!(skipped("e_build") && skipped("toon1") && skipped("main_theorem"));
    assert!(!skipped("irru") && !skipped("foundations"));
}

#[test]
fn explicit_twists() {
    let r = run(&config(&["--n", "1", "--q", "5", "--twists", "2"])).unwrap();
    assert_eq!(r.summary.fail, 0, "{}", r.to_text());
    assert!(r.find("impo1", "n=1 q=5 l=2 m=4 κ=2").is_some());
    assert!(r.find("impo1", "n=1 q=5 l=2 m=4 κ=1").is_none());
}
