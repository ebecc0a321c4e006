//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) so the report is printed on
//! every `cargo test`. Exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{all_parts_connected, p3, r, random_alpha, random_tree, star, Ranges, SMALL};
use isotree::affinity::KernelForm;
use isotree::eval::misclassification;
use isotree::oracle::{brute_force_min_residue, brute_force_miso};
use isotree::outlier::{outlier_profile, outlier_set};
use isotree::pipeline::{cluster, PipelineConfig};
use isotree::postprocess::reduce_residue;
use isotree::solver::{decide_iso, ff_functional, indicator_functions, search_bounds, solve_miso, Decision};
use isotree::subpartition::subpartition_cost;
use isotree::{DataSet, Rational};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut g = rng(1);
    let mut mismatches = Vec::new();
    let cases = 500;
    for case in 0..cases {
        let n = g.gen_range(3..=10);
        let k = g.gen_range(2..=n.min(4));
        let alpha = random_alpha(&mut g);
        let tree = random_tree(&mut g, n, &SMALL);
        let fast = solve_miso(&tree, k, &alpha).unwrap().value;
        let slow = brute_force_miso(&tree, k, &alpha).unwrap().value;
        if fast != slow {
            mismatches.push(format!("case {case}: {fast} vs {slow}"));
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < Duration::from_secs(60),
        format!("{cases} trees, {} mismatches {:?}, {:.1?}", mismatches.len(), mismatches.first(), elapsed),
    )
}

fn star_fixture() -> Outcome {
    let t = star();
    let one = r(1, 1);
    let value = solve_miso(&t, 9, &one).unwrap().value;
    let oracle = brute_force_miso(&t, 9, &one).unwrap().value;
    let residue = brute_force_min_residue(&t, 9, &one).unwrap();
    outcome(
        value == r(1, 14) && oracle == r(1, 14) && residue == 1,
        format!("solver {value}, oracle {oracle}, min residue {residue}"),
    )
}

fn decision_soundness() -> Outcome {
    let mut g = rng(3);
    let mut failures = 0;
    let mut yes = 0;
    let cases = 1000;
    for _ in 0..cases {
        let n = g.gen_range(2..=30);
        let k = g.gen_range(2..=n.min(6));
        let alpha = random_alpha(&mut g);
        let tree = random_tree(&mut g, n, &SMALL);
        let b = search_bounds(&tree, &alpha).unwrap();
        let frac = r(g.gen_range(0..=64), 64);
        let threshold = &b.lower + (&b.upper - &b.lower) * frac;
        if let Decision::Yes(cert) = decide_iso(&tree, k, &threshold, &alpha).unwrap() {
            yes += 1;
            let cost = subpartition_cost(&tree, &cert, &alpha).unwrap();
            if cert.k() != k || cost > threshold || !all_parts_connected(&tree, &cert) {
                failures += 1;
            }
        }
    }
    outcome(failures == 0, format!("{cases} instances, {yes} YES, {failures} unsound"))
}

fn monotonicity() -> Outcome {
    let mut g = rng(4);
    let mut k_violations = 0;
    for _ in 0..500 {
        let n = g.gen_range(3..=40);
        let k = g.gen_range(2..n);
        let alpha = random_alpha(&mut g);
        let tree = random_tree(&mut g, n, &SMALL);
        if solve_miso(&tree, k, &alpha).unwrap().value > solve_miso(&tree, k + 1, &alpha).unwrap().value {
            k_violations += 1;
        }
    }
    let mut a_violations = 0;
    for _ in 0..500 {
        let n = g.gen_range(3..=40);
        let k = g.gen_range(2..=n);
        let tree = random_tree(&mut g, n, &SMALL);
        let a = r(g.gen_range(0..=40), 8);
        let b = &a + r(g.gen_range(1..=40), 8);
        if solve_miso(&tree, k, &a).unwrap().value > solve_miso(&tree, k, &b).unwrap().value {
            a_violations += 1;
        }
    }
    outcome(
        k_violations == 0 && a_violations == 0,
        format!("500 in k: {k_violations} violations; 500 in alpha: {a_violations} violations"),
    )
}

fn postprocess_safety() -> Outcome {
    let mut g = rng(5);
    let mut violations = 0;
    let mut absorbed = 0;
    for _ in 0..500 {
        let n = g.gen_range(3..=40);
        let k = g.gen_range(2..=n.min(8));
        let alpha = random_alpha(&mut g);
        let tree = random_tree(&mut g, n, &SMALL);
        let sol = solve_miso(&tree, k, &alpha).unwrap();
        let out = reduce_residue(&tree, &sol.minimizer, &sol.value, &alpha).unwrap();
        let again = reduce_residue(&tree, &out, &sol.value, &alpha).unwrap();
        let cost = subpartition_cost(&tree, &out, &alpha).unwrap();
        absorbed += sol.minimizer.residue_number() - out.residue_number().min(sol.minimizer.residue_number());
        if cost > sol.value
            || out.residue_number() > sol.minimizer.residue_number()
            || !all_parts_connected(&tree, &out)
            || again != out
        {
            violations += 1;
        }
    }
    outcome(violations == 0, format!("500 instances, {violations} violations, {absorbed} residue vertices absorbed"))
}

fn ff_indicator() -> Outcome {
    let mut g = rng(6);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = g.gen_range(3..=9);
        let k = g.gen_range(2..=n.min(4));
        let alpha = random_alpha(&mut g);
        let tree = random_tree(&mut g, n, &SMALL);
        let oracle = brute_force_miso(&tree, k, &alpha).unwrap();
        let f = indicator_functions(&oracle.minimizers[0]);
        if ff_functional(&tree, &f, &alpha).unwrap() != oracle.value {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("200 instances, {mismatches} mismatches"))
}

fn profile_breakpoint() -> Outcome {
    let prof = outlier_profile(&p3(), 2, &r(1, 1), &r(1, 100), 0.5).unwrap();
    let breaks: Vec<&Rational> =
        prof.intervals.windows(2).filter(|w| w[0].residue_count == 0 && w[1].residue_count == 1).map(|w| &w[1].low).collect();
    let located = breaks.len() == 1 && (breaks[0] - r(3, 10)).abs() <= r(1, 100);
    let at_half = outlier_set(&prof, &r(1, 2));
    let at_tenth = outlier_set(&prof, &r(1, 10));
    outcome(
        located && at_half == vec![2] && at_tenth.is_empty(),
        format!(
            "breakpoint {:?}, outliers(0.5) = {at_half:?}, outliers(0.1) = {at_tenth:?}",
            breaks.first().map(|b| isotree::quantity::rational_to_f64(b))
        ),
    )
}

fn median_solve_time(n: usize, runs: usize, g: &mut ChaCha8Rng) -> Duration {
    let ranges = Ranges { omega: (1, 1 << 20), flow: (1, 1 << 20), potential: (0, 1 << 10) };
    let mut times: Vec<Duration> = (0..runs)
        .map(|_| {
            let tree = random_tree(g, n, &ranges);
            let start = Instant::now();
            std::hint::black_box(solve_miso(&tree, 16, &r(1, 2)).unwrap());
            start.elapsed()
        })
        .collect();
    times.sort();
    times[runs / 2]
}

fn scaling() -> Outcome {
    let mut g = rng(8);
    median_solve_time(1 << 14, 3, &mut g);
    let times: Vec<Duration> = (12..=16).map(|e| median_solve_time(1 << e, 9, &mut g)).collect();
    let ratios: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64()).collect();
    let worst = ratios.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 2.6,
        format!(
            "medians {:?}, ratios {:?}",
            times.iter().map(|t| format!("{:.1?}", t)).collect::<Vec<_>>(),
            ratios.iter().map(|x| format!("{x:.2}")).collect::<Vec<_>>()
        ),
    )
}

fn load_iris() -> (DataSet, Vec<String>) {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/iris.csv");
    let mut reader = csv::Reader::from_path(path).unwrap();
    let mut points = Vec::new();
    let mut labels = Vec::new();
    for row in reader.records() {
        let row = row.unwrap();
        points.push((0..4).map(|i| row[i].parse().unwrap()).collect());
        labels.push(row[4].to_string());
    }
    (DataSet::new(points).unwrap(), labels)
}

fn iris_rate(data: &DataSet, truth: &[String], form: KernelForm, sigma: f64, normalize: bool) -> (f64, usize, Duration) {
    let mut config = PipelineConfig::new(3, sigma);
    config.kernel = form;
    config.complete_labels = true;
    config.normalize = normalize;
    let start = Instant::now();
    let out = cluster(data, &config).unwrap();
    let elapsed = start.elapsed();
    (misclassification(&out.labels, truth).unwrap().rate, out.residue_number(), elapsed)
}

fn iris() -> Outcome {
    let (data, truth) = load_iris();
    let (rate, residue, elapsed) = iris_rate(&data, &truth, KernelForm::Exponential, 0.09, false);
    println!("    iris deviation report (k = 3, global scaling, completion on; reported 0.040):");
    for (form, name) in [(KernelForm::Exponential, "exp(-d/s)"), (KernelForm::HalfSquareWidth, "exp(-d/2s^2)")] {
        for normalize in [false, true] {
            let (rate, res, t) = iris_rate(&data, &truth, form, 0.09, normalize);
            println!(
                "      {name:<13} sigma 0.09 {:<10} error {rate:.3} (delta {:+.3}), residue before completion {res}, {t:.1?}",
                if normalize { "min-max" } else { "raw" },
                rate - 0.040
            );
        }
    }
    outcome(
        rate <= 0.10 && elapsed < Duration::from_secs(10),
        format!("error {rate:.3}, residue before completion {residue}, {elapsed:.1?}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("star fixture", star_fixture),
        ("decision soundness", decision_soundness),
        ("monotonicity in k and alpha", monotonicity),
        ("post-process safety", postprocess_safety),
        ("indicator functional", ff_indicator),
        ("profile breakpoint", profile_breakpoint),
        ("near-linear scaling", scaling),
        ("iris benchmark", iris),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} criterion {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
