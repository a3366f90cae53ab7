//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines are always printed. A failing criterion is reported,
//! not hidden; set `SIDSP_ACCEPTANCE_STRICT=1` to turn any FAIL into a
//! non-zero exit. Criterion names given as arguments select a subset.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, DiscreteCDF};

use sidsp::adaptive::OperatorStats;
use sidsp::cli::{bench, run_with, Algo, BenchPlan, Study};
use sidsp::construct::{random_order, rhga_state, RulePolicy, WindowState};
use sidsp::evolve::{fast_nondominated_sort, run, RunParams};
use sidsp::instances::{generate, generate_tiny, Family};
use sidsp::metrics::{hypervolume_hso, hypervolume_mc, pareto_filter};
use sidsp::model::{validate_schedule, Instance, Millis, ObjectivePoint, SolveMode};
use sidsp::neighborhood::{destroy, repair, DestroyOp, Guidance, RepairOp, TabooPolicy};
use sidsp::oracle::exact_front;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn p(a: f64, b: f64) -> ObjectivePoint<f64> {
    ObjectivePoint::new(a, b)
}

/// One-sided sign test of "a > b" over paired samples, ties dropped.
fn sign_test(pairs: &[(f64, f64)]) -> (usize, usize, f64) {
    let wins = pairs.iter().filter(|(a, b)| a > b).count();
    let losses = pairs.iter().filter(|(a, b)| a < b).count();
    let n = wins + losses;
    if n == 0 || wins == 0 {
        return (wins, losses, 1.0);
    }
    let dist = Binomial::new(0.5, n as u64).expect("valid binomial");
    (wins, losses, dist.sf(wins as u64 - 1))
}

fn feasibility() -> Verdict {
    let start = Instant::now();
    let instances: Vec<Instance> =
        Family::ALL.iter().flat_map(|&f| [20, 50].map(|n| generate(f, n, 101 + n as u64))).collect();
    let guidance: Vec<Guidance> = instances.iter().map(Guidance::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut states: Vec<Vec<WindowState>> = instances
        .iter()
        .map(|inst| {
            SolveMode::ALL
                .iter()
                .map(|&m| {
                    let order = random_order(inst, &mut rng);
                    rhga_state(inst, m, &order, RulePolicy::Mixed, &mut rng)
                })
                .collect()
        })
        .collect();
    let cycles = 10_000;
    let mut violations = 0usize;
    let mut pairs = BTreeSet::new();
    for c in 0..cycles {
        let k = c % instances.len();
        let pair = (c / instances.len()) % 32;
        let m = (c / (instances.len() * 32)) % 4;
        let (d, r) = (DestroyOp::ALL[pair / 4], RepairOp::ALL[pair % 4]);
        pairs.insert((pair, m));
        let (inst, mode) = (&instances[k], SolveMode::ALL[m]);
        let state = &mut states[k][m];
        let bank = destroy(inst, &guidance[k], state, mode, d, TabooPolicy::default(), &mut rng);
        violations += validate_schedule(inst, &state.to_schedule(inst), mode).expect("structural").len();
        repair(inst, &guidance[k], state, mode, r, &bank, RulePolicy::Mixed, &mut rng);
        violations += validate_schedule(inst, &state.to_schedule(inst), mode).expect("structural").len();
    }
    let elapsed = start.elapsed();
    verdict(
        violations == 0 && pairs.len() == 128 && elapsed < Duration::from_secs(120),
        format!("{cycles} cycles, {} operator-pair x mode combinations, {violations} violations, {elapsed:.1?} (< 120 s)", pairs.len()),
    )
}

fn oracle_equivalence() -> Verdict {
    let start = Instant::now();
    let mut dominated = 0usize;
    let mut min_f1_mismatch = 0usize;
    let mut contended = 0usize;
    for k in 0..50u64 {
        let inst = generate_tiny(1000 + k, 5, 3);
        let grid = (0..inst.data().len()).map(|i| inst.datum_d0(i)).max().unwrap_or(Millis::from_secs_int(30));
        let total: i64 = inst.data().iter().map(|d| d.duration.ms()).sum();
        for mode in SolveMode::ALL {
            let oracle = exact_front(&inst, mode, grid).expect("within limits");
            if oracle.len() > 1 || oracle[0].f1 > 0.0 {
                contended += 1;
            }
            let mut points = Vec::new();
            for seed in 0..10 {
                points.extend(run(&inst, mode, &RunParams { max_iter: 200, seed, ..Default::default() }).points());
            }
            let front = pareto_filter(&points);
            let (s1, s2) =
                if mode.segmented() { (grid.ms() as f64 / total.max(1) as f64, 0.02) } else { (0.0, 0.0) };
            for h in &front {
                if oracle.iter().any(|q| p(q.f1 + s1, q.f2 + s2).dominates(h)) {
                    dominated += 1;
                }
            }
            if mode == SolveMode::UNSEGMENT_REARRANGE {
                let best = |f: &[ObjectivePoint<f64>]| f.iter().map(|q| q.f1).fold(f64::INFINITY, f64::min);
                if (best(&front) - best(&oracle)).abs() > 1e-12 {
                    min_f1_mismatch += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        dominated == 0 && min_f1_mismatch == 0 && elapsed < Duration::from_secs(300),
        format!(
            "50 instances x 4 modes ({contended} with a nontrivial front): {dominated} heuristic points dominated beyond slack, \
             {min_f1_mismatch} min-f1 mismatches under unsegment:rearrange, {elapsed:.1?} (< 300 s)"
        ),
    )
}

fn hso() -> Verdict {
    let r = p(1.0, 1.0);
    let hand = [
        (vec![p(0.0, 0.0)], 1.0f64),
        (vec![p(0.5, 0.5)], 0.25),
        (vec![p(0.2, 0.6), p(0.6, 0.2)], 0.48),
    ];
    // 0.2, 0.6 and 0.48 are not dyadic, so f64 can only land within rounding
    let ulps: Vec<u64> =
        hand.iter().map(|(f, v)| hypervolume_hso(f, &r).unwrap().to_bits().abs_diff(v.to_bits())).collect();
    let float_close = ulps.iter().all(|&u| u <= 2);
    let q = |a: i64, b: i64| ObjectivePoint::new(Ratio::new(a, 10), Ratio::new(b, 10));
    let one = ObjectivePoint::new(Ratio::from_integer(1), Ratio::from_integer(1));
    let rational_exact = hypervolume_hso(&[q(0, 0)], &one).unwrap() == Ratio::from_integer(1)
        && hypervolume_hso(&[q(5, 5)], &one).unwrap() == Ratio::new(1, 4)
        && hypervolume_hso(&[q(2, 6), q(6, 2)], &one).unwrap() == Ratio::new(12, 25);

    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut agree = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=20);
        let front: Vec<_> = (0..n).map(|_| p(rng.random(), rng.random())).collect();
        let exact = hypervolume_hso(&front, &r).unwrap();
        let mc = hypervolume_mc(&front, &r, 1_000_000, &mut rng).unwrap();
        if (mc.value - exact).abs() <= 3.0 * mc.std_error {
            agree += 1;
        }
    }
    verdict(
        rational_exact && float_close && agree >= 99,
        format!(
            "hand values exact over rationals: {rational_exact}; f64 distance in ulps {ulps:?} (<= 2); \
             MC (1e6 samples) within 3 SE on {agree}/100 fronts (>= 99)"
        ),
    )
}

fn sorting() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let n = rng.random_range(0..=200);
        // a coarse grid forces ties and duplicates
        let points: Vec<_> =
            (0..n).map(|_| p(rng.random_range(0..25) as f64 / 24.0, rng.random_range(0..25) as f64 / 24.0)).collect();
        let fronts = fast_nondominated_sort(&points);
        let mut rank = vec![usize::MAX; n];
        for (k, f) in fronts.iter().enumerate() {
            for &i in f {
                rank[i] = k;
            }
        }
        let mut brute = vec![usize::MAX; n];
        let mut left: Vec<usize> = (0..n).collect();
        let mut k = 0;
        while !left.is_empty() {
            let front: Vec<usize> =
                left.iter().copied().filter(|&i| !left.iter().any(|&j| points[j].dominates(&points[i]))).collect();
            for &i in &front {
                brute[i] = k;
            }
            left.retain(|i| !front.contains(i));
            k += 1;
        }
        if rank != brute {
            mismatches += 1;
        }
    }
    verdict(mismatches == 0, format!("{mismatches}/1000 point sets (n <= 200) differ from the brute-force ranks"))
}

fn adaptive() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut frozen_ok = true;
    let mut follow_ok = true;
    for _ in 0..200 {
        let w: Vec<f64> = (0..8).map(|_| rng.random_range(0.01..1.0)).collect();
        let scores: Vec<f64> = (0..8).map(|_| [0.0, 1.0, 10.0, 20.0, 30.0][rng.random_range(0..5)]).collect();
        let total: f64 = scores.iter().sum();
        let mut frozen = OperatorStats::from_weights(w.clone(), 0.0);
        let mut follow = OperatorStats::from_weights(w.clone(), 1.0);
        for (k, &s) in scores.iter().enumerate() {
            frozen.add_score(k, s);
            follow.add_score(k, s);
        }
        frozen.update();
        follow.update();
        frozen_ok &= frozen.weights().iter().zip(&w).all(|(a, b)| a.to_bits() == b.to_bits());
        if total > 0.0 {
            follow_ok &= follow.weights().iter().zip(&scores).all(|(a, s)| *a == s / total);
        }
    }
    let weights = vec![1.0, 2.0, 3.0, 4.0, 0.5, 0.5, 2.0, 3.0];
    let stats = OperatorStats::from_weights(weights.clone(), 0.5);
    let draws = 100_000;
    let mut counts = [0usize; 8];
    for _ in 0..draws {
        counts[stats.select(&mut rng).unwrap()] += 1;
    }
    let total: f64 = weights.iter().sum();
    let chi2: f64 = counts
        .iter()
        .zip(&weights)
        .map(|(&c, w)| {
            let e = draws as f64 * w / total;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    let critical = ChiSquared::new(7.0).unwrap().inverse_cdf(0.999);
    verdict(
        frozen_ok && follow_ok && chi2 < critical,
        format!(
            "lambda=0 bit-identical: {frozen_ok}; lambda=1 equals normalised scores: {follow_ok}; \
             roulette chi2 = {chi2:.2} < {critical:.2} (df 7, alpha 0.001, 1e5 draws)"
        ),
    )
}

fn ablation() -> Verdict {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut means_ok = true;
    let mut pairs: Vec<Vec<(f64, f64)>> = vec![Vec::new(); 3];
    for (family, size) in [(Family::Nd, 50), (Family::Nd, 200), (Family::Pd, 100), (Family::Md, 200)] {
        let plan = BenchPlan {
            family,
            sizes: vec![size],
            modes: SolveMode::ALL.to_vec(),
            algos: vec![Algo::AlnsNsga2],
            restarts: 10,
            base_seed: 0,
            params: RunParams { max_iter: 50, ..Default::default() },
            study: Study::None,
        };
        let out = bench(&plan, 1);
        let hv: Vec<f64> = out.summary.iter().map(|s| s.hv).collect();
        means_ok &= hv[1..].iter().all(|&c| hv[0] >= c);
        lines.push(format!("{family}-{size} [{:.2} {:.2} {:.2} {:.2}]", hv[0], hv[1], hv[2], hv[3]));
        let runs: Vec<Vec<f64>> = (0..4).map(|m| out.runs[m * 10..(m + 1) * 10].iter().map(|r| r.hv).collect()).collect();
        for c in 1..4 {
            pairs[c - 1].extend(runs[0].iter().copied().zip(runs[c].iter().copied()));
        }
    }
    let tests: Vec<(usize, usize, f64)> = pairs.iter().map(|p| sign_test(p)).collect();
    let signs_ok = tests.iter().all(|t| t.2 < 0.05);
    let elapsed = start.elapsed();
    let names = ["segment:fofd", "unsegment:rearrange", "unsegment:fofd"];
    let report: Vec<String> =
        tests.iter().zip(names).map(|(t, n)| format!("vs {n}: {}+/{}- p={:.2e}", t.0, t.1, t.2)).collect();
    verdict(
        means_ok && signs_ok && elapsed < Duration::from_secs(1200),
        format!(
            "mean HV x1000 (S&R, S&F, U&R, U&F) {}; S&R >= controls: {means_ok}; sign tests {}; {elapsed:.1?} (< 1200 s)",
            lines.join(", "),
            report.join(", ")
        ),
    )
}

fn crem() -> Verdict {
    let plan = BenchPlan {
        family: Family::Nd,
        sizes: vec![100],
        modes: vec![SolveMode::SEGMENT_REARRANGE],
        algos: vec![Algo::AlnsNsga2, Algo::Crem],
        restarts: 30,
        base_seed: 0,
        params: RunParams { max_iter: 50, ..Default::default() },
        study: Study::None,
    };
    let out = bench(&plan, 1);
    let (a, c) = (out.summary[0].hv, out.summary[1].hv);
    let pairs: Vec<(f64, f64)> = out.runs[..30].iter().zip(&out.runs[30..]).map(|(x, y)| (x.hv, y.hv)).collect();
    let (wins, losses, pv) = sign_test(&pairs);
    verdict(
        a > c && pv < 0.05,
        format!("ND-100 mean HV x1000: ALNS+NSGA-II {a:.3} vs CREM {c:.3}; sign test {wins}+/{losses}- p={pv:.2e}"),
    )
}

fn convergence() -> Verdict {
    let inst = generate(Family::Nd, 100, 0);
    let mut ratios = Vec::new();
    for seed in 0..10 {
        let r = run(&inst, SolveMode::SEGMENT_REARRANGE, &RunParams { max_iter: 200, seed, ..Default::default() });
        ratios.push(r.trace[20].hv / r.trace[200].hv);
    }
    let good = ratios.iter().filter(|&&x| x >= 0.9).count();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    verdict(good >= 8, format!("HV(20)/HV(200) >= 0.9 in {good}/10 runs (>= 8), smallest ratio {min:.4}"))
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let mut sink = Vec::new();
    let args = |v: &[&str]| std::iter::once("sidsp").chain(v.iter().copied()).map(String::from).collect::<Vec<_>>();
    let inst_s = inst.to_str().unwrap().to_string();
    run_with(args(&["gen", "--family", "MD", "--n", "60", "--seed", "3", "--out", &inst_s]), &mut sink);
    let mut outputs = Vec::new();
    for k in 0..2 {
        let solve = dir.path().join(format!("solve{k}"));
        let bench = dir.path().join(format!("bench{k}"));
        let codes = [
            run_with(
                args(&["solve", "--instance", &inst_s, "--seed", "8", "--iters", "20", "--out", solve.to_str().unwrap()]),
                &mut sink,
            ),
            run_with(
                args(&[
                    "bench", "--family", "PD", "--sizes", "30", "--restarts", "2", "--seeds", "4", "--iters", "5",
                    "--study", "lambda", "--ns", "10", "--na", "10", "--out", bench.to_str().unwrap(),
                ]),
                &mut sink,
            ),
        ];
        assert_eq!(codes, [0, 0]);
        let mut files = Vec::new();
        for f in ["front.csv", "trace.csv", "weights.csv", "schedules.json"] {
            files.push(std::fs::read(solve.join(f)).unwrap());
        }
        for f in ["summary.csv", "runs.csv", "weights.csv"] {
            files.push(std::fs::read(bench.join(f)).unwrap());
        }
        outputs.push(files);
    }
    let same = outputs[0] == outputs[1];
    verdict(same, format!("solve and bench repeated with identical flags: {} files byte-identical: {same}", outputs[0].len()))
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 9] = [
        ("feasibility suite", feasibility),
        ("oracle equivalence", oracle_equivalence),
        ("HSO correctness", hso),
        ("sorting correctness", sorting),
        ("adaptive-layer algebra", adaptive),
        ("ablation direction", ablation),
        ("CREM comparison", crem),
        ("convergence shape", convergence),
        ("determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let (mut run, mut failed) = (0, 0);
    for (name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        run += 1;
        let v = check();
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", run - failed, run);
    if failed > 0 && std::env::var("SIDSP_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1") {
        std::process::exit(1);
    }
}
