//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.
//!
//! Run with `cargo test -p contrast-core --test acceptance -- --nocapture` to see the lines.

mod common;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::Parser;
use common::*;
use contrast_core::cli::{self, Cli};
use contrast_core::contrast::{contrast_objective, extract, extract_symmetric, AlphaSpec};
use contrast_core::graph::{GraphGroup, Label, ObservationGraph};
use contrast_core::oracle::{brute_force, fixture_f2, planted_dataset, PlantedSpec};
use contrast_core::solver::{
    inclusion_probabilities, round_with_direction, rounding_scale, sdp_solve, stream_rng,
};
use contrast_core::summary::{build_difference, build_summary, DifferenceMode, SummaryMode};
use contrast_core::{solve, GoqcInstance, Method, SolverConfig};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

fn report(id: u32, name: &str, pass: bool, elapsed: Duration, detail: &str) {
    println!(
        "criterion {id} ({name}): {} [{:.2}s] {detail}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn zero_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|v| v - 1).collect()
}

#[test]
fn criterion_1_fixture_golden_values() {
    let start = Instant::now();
    let mut failures = Vec::new();
    fn check(failures: &mut Vec<String>, what: &str, got: f64, want: f64) {
        if (got - want).abs() > 1e-9 {
            failures.push(format!("{what}: got {got}, want {want}"));
        }
    }

    let (a, b) = fixture_f2();
    let sum_a = build_summary(&a, SummaryMode::Fraction).unwrap();
    let sum_b = build_summary(&b, SummaryMode::Fraction).unwrap();
    let d_ab = build_difference(&sum_a, &sum_b, DifferenceMode::Signed).unwrap();
    let d_ba = build_difference(&sum_b, &sum_a, DifferenceMode::Signed).unwrap();
    let d_abs = build_difference(&sum_a, &sum_b, DifferenceMode::Absolute).unwrap();

    for (set, alpha, want) in [
        (&[1, 2, 4][..], 0.8, 0.6),
        (&[1, 2, 4, 5][..], 0.8, 0.2),
        (&[1, 2, 4, 5, 6][..], 0.5, 2.0),
        (&[1, 2, 4, 5][..], 0.5, 2.0),
    ] {
        let oracle = pair_sum(set, alpha, |u, v| f2_weight("A-B", u, v));
        check(&mut failures, &format!("oracle A-B {set:?} @ {alpha}"), oracle, want);
        let lib = contrast_objective(&d_ab, alpha, &zero_based(set)).unwrap();
        check(&mut failures, &format!("library A-B {set:?} @ {alpha}"), lib, want);
    }

    let all: Vec<usize> = (1..=8).collect();
    let (value, optima) = naive_optima(&all, 0.8, |u, v| f2_weight("B-A", u, v));
    check(&mut failures, "oracle B-A optimum @ 0.8", value, 0.2);
    if optima != vec![vec![1, 3], vec![1, 8], vec![2, 3]] {
        failures.push(format!("oracle B-A optima {optima:?}"));
    }
    let inst = GoqcInstance::with_constant_alpha(d_ba.d.clone(), 0.8).unwrap();
    let bf = brute_force(&inst).unwrap();
    check(&mut failures, "brute force B-A optimum @ 0.8", bf.value, 0.2);
    let expected: Vec<Vec<usize>> = vec![zero_based(&[1, 3]), zero_based(&[1, 8]), zero_based(&[2, 3])];
    if bf.optima != expected {
        failures.push(format!("brute force B-A optima {:?}", bf.optima));
    }

    let (value, optima) = naive_optima(&all, 0.5, |u, v| f2_weight("abs", u, v));
    check(&mut failures, "oracle symmetric optimum @ 0.5", value, 3.0);
    if !optima.contains(&vec![1, 2, 3, 5]) {
        failures.push("oracle symmetric optima lack {1,2,3,5}".into());
    }
    let inst = GoqcInstance::with_constant_alpha(d_abs.d.clone(), 0.5).unwrap();
    let bf = brute_force(&inst).unwrap();
    check(&mut failures, "brute force symmetric optimum @ 0.5", bf.value, 3.0);
    if !bf.optima.contains(&zero_based(&[1, 2, 3, 5])) {
        failures.push("brute force symmetric optima lack {1,2,3,5}".into());
    }

    let cfg = SolverConfig::default();
    let r = extract(&a, &b, &AlphaSpec::raw(0.8), &cfg).unwrap();
    check(&mut failures, "extract A-B @ 0.8", r.objective, 0.6);
    let r = extract(&a, &b, &AlphaSpec::raw(0.5), &cfg).unwrap();
    check(&mut failures, "extract A-B @ 0.5", r.objective, 2.0);
    let r = extract(&b, &a, &AlphaSpec::raw(0.8), &cfg).unwrap();
    check(&mut failures, "extract B-A @ 0.8", r.objective, 0.2);
    if r.vertices.len() != 2 {
        failures.push(format!("extract B-A set {:?}", r.vertices));
    }
    let r = extract_symmetric(&a, &b, &AlphaSpec::raw(0.5), &cfg).unwrap();
    check(&mut failures, "extract symmetric @ 0.5", r.objective, 3.0);

    let elapsed = start.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(1);
    report(1, "fixture golden values", pass, elapsed, &failures.join("; "));
    assert!(pass, "{failures:?} in {elapsed:?}");
}

#[test]
fn criterion_2_oracle_equivalence() {
    let start = Instant::now();
    let (mut ls, mut sdp) = (0, 0);
    for seed in 0..100u64 {
        let inst = random_instance(12, seed);
        let optimum = brute_force(&inst).unwrap().value;
        for method in [Method::LocalSearch, Method::SdpLocalSearch] {
            let cfg = SolverConfig {
                method,
                restarts: 20,
                rng_seed: seed,
                ..SolverConfig::default()
            };
            let (_, value, _) = solve(&inst, &cfg).unwrap();
            if (value - optimum).abs() <= 1e-9 {
                match method {
                    Method::LocalSearch => ls += 1,
                    _ => sdp += 1,
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let pass = ls >= 90 && sdp >= 90 && elapsed < Duration::from_secs(60);
    report(
        2,
        "oracle equivalence",
        pass,
        elapsed,
        &format!("local-search {ls}/100, sdp+local-search {sdp}/100"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_planted_recovery() {
    let start = Instant::now();
    let mut recovered = 0;
    let mut scores = Vec::new();
    for seed in 0..20u64 {
        let spec = PlantedSpec {
            rng_seed: seed,
            ..PlantedSpec::default()
        };
        let (a, b) = planted_dataset(&spec).unwrap();
        let cfg = SolverConfig {
            rng_seed: seed,
            ..SolverConfig::default()
        };
        let r = extract(&a, &b, &AlphaSpec::raw(0.4), &cfg).unwrap();
        let j = jaccard(&r.vertices, &spec.planted_set());
        scores.push(format!("{j:.2}"));
        if j >= 0.9 {
            recovered += 1;
        }
    }
    let elapsed = start.elapsed();
    let pass = recovered >= 18 && elapsed < Duration::from_secs(120);
    report(
        3,
        "planted recovery",
        pass,
        elapsed,
        &format!("{recovered}/20 seeds with Jaccard >= 0.9 [{}]", scores.join(" ")),
    );
    assert!(pass);
}

fn run_cli(args: &[&str]) {
    let mut argv = vec!["contrast"];
    argv.extend_from_slice(args);
    cli::run(Cli::try_parse_from(argv).unwrap()).unwrap();
}

fn mean_accuracy(dir: &Path) -> f64 {
    let text = std::fs::read_to_string(dir.join("eval.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["mean"].as_f64().unwrap()
}

/// Writes manifests for a random relabelling of the cohort in `src` (class sizes kept).
fn permuted_manifests(src: &Path, dst: &Path, seed: u64) {
    let mut rows: Vec<(String, PathBuf)> = Vec::new();
    for g in ["A", "B"] {
        let text = std::fs::read_to_string(src.join(format!("group_{g}.tsv"))).unwrap();
        for line in text.lines().skip(1) {
            let f: Vec<&str> = line.split('\t').collect();
            rows.push((f[0].to_string(), src.join(f[1])));
        }
    }
    let mut labels: Vec<&str> = rows
        .iter()
        .enumerate()
        .map(|(i, _)| if i < rows.len() / 2 { "A" } else { "B" })
        .collect();
    labels.shuffle(&mut stream_rng(seed, 0));
    std::fs::create_dir_all(dst).unwrap();
    for g in ["A", "B"] {
        let mut out = String::from("subject_id\tpath\tlabel\n");
        for ((id, path), l) in rows.iter().zip(&labels) {
            if *l == g {
                out.push_str(&format!("{id}\t{}\t{g}\n", path.display()));
            }
        }
        std::fs::write(dst.join(format!("group_{g}.tsv")), out).unwrap();
    }
}

#[test]
fn criterion_4_classification_at_desk_scale() {
    let start = Instant::now();
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let (cohort, real, shuffled, perm) = (
        root.join("cohort"),
        root.join("real"),
        root.join("shuffled"),
        root.join("perm"),
    );
    run_cli(&["synth", "--out", &s(&cohort)]);

    let classify = |manifests: &Path, out: &Path| {
        run_cli(&[
            "classify",
            "--group-a",
            &s(&manifests.join("group_A.tsv")),
            "--group-b",
            &s(&manifests.join("group_B.tsv")),
            "--alpha",
            "p90",
            "--scheme",
            "p1",
            "--out",
            &s(out),
        ])
    };
    classify(&cohort, &real);
    permuted_manifests(&cohort, &perm, 0);
    classify(&perm, &shuffled);

    let rows = std::fs::read_to_string(real.join("features.csv")).unwrap().lines().count() - 1;
    let (acc, null_acc) = (mean_accuracy(&real), mean_accuracy(&shuffled));
    let elapsed = start.elapsed();
    let pass = acc >= 0.95
        && (0.35..=0.65).contains(&null_acc)
        && rows == 80
        && elapsed < Duration::from_secs(60);
    report(
        4,
        "classification at desk scale",
        pass,
        elapsed,
        &format!("mean accuracy {acc:.4}, permuted labels {null_acc:.4}"),
    );
    assert!(pass);
}

fn random_groups(n: usize, sizes: (usize, usize), seed: u64) -> (GraphGroup, GraphGroup) {
    let mut rng = stream_rng(seed, 3);
    let mut group = |label: Label, size: usize| {
        let p: f64 = rng.random_range(0.2..0.8);
        let members = (0..size)
            .map(|i| {
                let edges: Vec<(usize, usize)> = (0..n)
                    .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
                    .filter(|_| rng.random::<f64>() < p)
                    .collect();
                ObservationGraph::new(n, edges, format!("{label}{i}"), label).unwrap()
            })
            .collect();
        GraphGroup::new(label, members).unwrap()
    };
    let a = group(Label::A, sizes.0);
    let b = group(Label::B, sizes.1);
    (a, b)
}

fn structural_checks() -> Vec<String> {
    let mut failures = Vec::new();

    // summary recount
    for seed in 0..10 {
        let (a, _) = random_groups(9, (7, 1), seed);
        let s = build_summary(&a, SummaryMode::Fraction).unwrap();
        for u in 0..9 {
            for v in (u + 1)..9 {
                let count = a.members().iter().filter(|g| g.edges().contains(&(u, v))).count();
                if s.w.get(u, v) != count as f64 / 7.0 {
                    failures.push(format!("summary recount seed {seed} pair ({u},{v})"));
                }
            }
        }
    }

    // directional and symmetric objective relations
    let mut rng = stream_rng(99, 0);
    for draw in 0..200u64 {
        let (a, b) = random_groups(10, (4, 5), 1000 + draw / 20);
        let sa = build_summary(&a, SummaryMode::Fraction).unwrap();
        let sb = build_summary(&b, SummaryMode::Fraction).unwrap();
        let ab = build_difference(&sa, &sb, DifferenceMode::Signed).unwrap();
        let ba = build_difference(&sb, &sa, DifferenceMode::Signed).unwrap();
        let abs = build_difference(&sa, &sb, DifferenceMode::Absolute).unwrap();
        let alpha: f64 = rng.random_range(0.01..1.0);
        let s: Vec<usize> = (0..10).filter(|_| rng.random::<bool>()).collect();
        let k = s.len() as f64;
        let d1 = contrast_objective(&ab, alpha, &s).unwrap();
        let d2 = contrast_objective(&ba, alpha, &s).unwrap();
        let sigma = contrast_objective(&abs, alpha, &s).unwrap();
        if (d1 + d2 + 2.0 * alpha * k * (k - 1.0) / 2.0).abs() > 1e-9 {
            failures.push(format!("directional identity draw {draw}"));
        }
        if sigma < d1.max(d2) - 1e-12 {
            failures.push(format!("symmetric dominance draw {draw}"));
        }
    }

    // optimum is non-increasing in alpha
    for seed in 0..5 {
        let (a, b) = random_groups(10, (5, 5), 2000 + seed);
        let sa = build_summary(&a, SummaryMode::Fraction).unwrap();
        let sb = build_summary(&b, SummaryMode::Fraction).unwrap();
        let d = build_difference(&sa, &sb, DifferenceMode::Signed).unwrap();
        let mut previous = f64::INFINITY;
        for step in 1..20 {
            let alpha = step as f64 * 0.05;
            let inst = GoqcInstance::with_constant_alpha(d.d.clone(), alpha).unwrap();
            let value = brute_force(&inst).unwrap().value;
            if value > previous + 1e-12 {
                failures.push(format!("alpha monotonicity seed {seed} at {alpha}"));
            }
            previous = value;
        }
    }

    // rounding inclusion frequencies at a fixed direction
    let inst = random_instance(10, 5);
    let sol = sdp_solve(&inst, &SolverConfig::default()).unwrap();
    let mut rng = stream_rng(5, 1);
    let r: Vec<f64> = (0..sol.rank).map(|_| rng.sample(StandardNormal)).collect();
    let scale = rounding_scale(10);
    let p = inclusion_probabilities(&sol, &r, scale);
    let draws = 100_000;
    let mut counts = [0usize; 10];
    for _ in 0..draws {
        for u in round_with_direction(&sol, &r, scale, &mut rng) {
            counts[u] += 1;
        }
    }
    for u in 0..10 {
        let sd = (p[u] * (1.0 - p[u]) / draws as f64).sqrt();
        let freq = counts[u] as f64 / draws as f64;
        if (freq - p[u]).abs() > 3.0 * sd + 1e-12 {
            failures.push(format!("rounding vertex {u}: {freq} vs {}", p[u]));
        }
    }

    failures
}

fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_path_buf();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn replay_checks() -> Vec<String> {
    let tmp = tempfile::tempdir().unwrap();
    let root = tmp.path();
    let s = |p: PathBuf| p.to_str().unwrap().to_string();
    let cohort = root.join("cohort");
    let synth = ["synth", "--n", "20", "--k", "5", "--group-size-a", "12", "--group-size-b", "12"];
    let mut failures = Vec::new();

    let mut args: Vec<String> = synth.iter().map(|x| x.to_string()).collect();
    args.extend(["--out".into(), s(cohort.clone())]);
    let argv: Vec<&str> = args.iter().map(String::as_str).collect();
    run_cli(&argv);
    let group = |g: &str| s(cohort.join(format!("group_{g}.tsv")));

    let commands: Vec<(&str, Vec<String>)> = vec![
        ("synth", args[1..args.len() - 2].to_vec()),
        ("summarize", vec!["--group-a".into(), group("A"), "--group-b".into(), group("B")]),
        (
            "extract",
            vec!["--group-a".into(), group("A"), "--group-b".into(), group("B"), "--alpha".into(), "p80".into()],
        ),
        (
            "classify",
            vec!["--group-a".into(), group("A"), "--group-b".into(), group("B"), "--alpha".into(), "p80".into()],
        ),
    ];
    for (name, rest) in commands {
        let first = root.join(format!("{name}-1"));
        let second = root.join(format!("{name}-2"));
        for out in [&first, &second] {
            let mut argv = vec![name.to_string()];
            argv.extend(rest.iter().cloned());
            argv.extend(["--out".into(), s(out.clone())]);
            let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
            run_cli(&argv);
        }
        let (a, b) = (snapshot(&first), snapshot(&second));
        let strip = |m: &BTreeMap<PathBuf, Vec<u8>>| {
            let mut m = m.clone();
            m.remove(Path::new("run.json"));
            m
        };
        if strip(&a) != strip(&b) {
            failures.push(format!("{name}: repeated runs differ"));
        }
        let run = s(first.join("run.json"));
        run_cli(&["replay", &run]);
        if snapshot(&first) != a {
            failures.push(format!("{name}: replay from run.json differs"));
        }
    }
    failures
}

#[test]
fn criterion_5_structural_and_property_suites() {
    let start = Instant::now();
    let mut failures = structural_checks();
    failures.extend(replay_checks());
    let elapsed = start.elapsed();
    let pass = failures.is_empty();
    report(5, "structural and property suites", pass, elapsed, &failures.join("; "));
    assert!(pass, "{failures:?}");
}
