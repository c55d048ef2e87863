//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::time::{Duration, Instant};

use galph::container::compress_with_stats;
use galph::grouping::exact_min_groups_upto;
use galph::{
    compress, decompress, optimal_grouping, theorem3_grouping, worst_case_redundancy, CodecConfig,
    FrequencyOrder, GroupedHuffmanCode, GroupingPlan, ModelConfig, OrderedDistribution, Smoothing,
    Source,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Redundancy of the extreme point `(1/l, ..., 1/l, 0, ...)` under `sizes`,
/// computed straight from the divergence sum.
fn extreme_point_redundancy(sizes: &[u64], l: u64) -> f64 {
    let mut start = 0u64;
    let mut r = 0.0;
    for &m in sizes {
        let inside = l.saturating_sub(start).min(m);
        if inside > 0 {
            r += inside as f64 / l as f64 * (m as f64 / inside as f64).log2();
        }
        start += m;
    }
    r
}

fn brute_force_worst_case(sizes: &[u64]) -> f64 {
    let n: u64 = sizes.iter().sum();
    (1..=n)
        .map(|l| extreme_point_redundancy(sizes, l))
        .fold(0.0, f64::max)
}

/// Non-decreasing compositions of `n`.
fn partitions(n: u64, min_part: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for m in min_part..=n {
        prefix.push(m);
        partitions(n - m, m, prefix, out);
        prefix.pop();
    }
}

fn criterion_1() -> Outcome {
    let mut plans = Vec::new();
    for n in 1..=8 {
        partitions(n, 1, &mut Vec::new(), &mut plans);
    }
    let exhaustive = plans.len();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    while plans.len() < exhaustive + 500 {
        let cover = rng.random_range(1..=64u64);
        let mut sizes = Vec::new();
        let mut left = cover;
        while left > 0 {
            let m = rng.random_range(1..=left.min(16));
            sizes.push(m);
            left -= m;
        }
        sizes.sort_unstable();
        plans.push(sizes);
    }
    let mut worst_gap = 0.0f64;
    for sizes in &plans {
        let plan = GroupingPlan::new(sizes.clone()).unwrap();
        worst_gap =
            worst_gap.max((worst_case_redundancy(&plan) - brute_force_worst_case(sizes)).abs());
    }
    outcome(
        worst_gap <= 1e-9,
        format!(
            "{} plans ({exhaustive} exhaustive), max |R - oracle| = {worst_gap:.2e}",
            plans.len()
        ),
    )
}

fn size_multiset(sizes: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &m in sizes {
        match out.last_mut() {
            Some((v, c)) if *v == m => *c += 1,
            _ => out.push((m, 1)),
        }
    }
    out
}

fn table_check(
    label: &str,
    n: u64,
    delta: f64,
    pow2: bool,
    expect_s: usize,
    expect_sizes: Option<&[u64]>,
) -> (bool, String) {
    let plan = optimal_grouping(n, delta, pow2).unwrap();
    let s = plan.num_groups();
    let r = worst_case_redundancy(&plan);
    let exact = s == expect_s && expect_sizes.is_none_or(|e| plan.sizes() == e);
    let near = s.abs_diff(expect_s) <= 1 && r <= delta;
    (
        exact || near,
        format!(
            "{label}: s={s} (expected {expect_s}), R={r:.5}, {}",
            if exact {
                "exact"
            } else if near {
                "within 1"
            } else {
                "mismatch"
            }
        ),
    )
}

fn criterion_2() -> Outcome {
    let pow2_sizes: Vec<u64> = [(1, 12), (2, 7), (4, 7), (8, 6), (16, 7), (32, 2)]
        .iter()
        .flat_map(|&(m, c)| std::iter::repeat_n(m, c))
        .collect();
    let free_sizes: Vec<u64> = [1; 12]
        .into_iter()
        .chain([
            2, 2, 2, 2, 3, 3, 4, 4, 5, 6, 7, 8, 9, 11, 12, 14, 16, 19, 22, 25, 29, 34, 39,
        ])
        .collect();
    let checks = [
        table_check("N=256 d=0.08 pow2", 256, 0.08, true, 41, Some(&pow2_sizes)),
        table_check("N=256 d=0.08 free", 256, 0.08, false, 35, Some(&free_sizes)),
        table_check("N=2^16 d=0.16", 65536, 0.16, false, 39, None),
        table_check("N=2^20 d=0.16", 1 << 20, 0.16, false, 40, None),
    ];
    let pow2 = optimal_grouping(256, 0.08, true).unwrap();
    let multiset_ok =
        size_multiset(pow2.sizes()) == vec![(1, 12), (2, 7), (4, 7), (8, 6), (16, 7), (32, 2)];
    let per_bit = optimal_grouping(1 << 20, 0.20, false).unwrap().num_groups();
    let mut detail: Vec<String> = checks.iter().map(|(_, d)| d.clone()).collect();
    detail.push(format!(
        "note: N=2^20 at 0.01 per bit (d=0.20) gives s={per_bit}"
    ));
    outcome(
        checks.iter().all(|(ok, _)| *ok) && multiset_ok,
        detail.join("; "),
    )
}

fn criterion_3() -> Outcome {
    // Reach Fr=[0,1,2,1] with a4 placed before a2 in the ascending layout.
    let mut f = FrequencyOrder::new(4, 16).unwrap();
    for a in [3, 1, 2, 2] {
        f.increment(a).unwrap();
    }
    let before = f.dump();
    let pre_ok = before == "0 1 2 1\n1 4 2 3\n1 3 4 2\n1 2 4\n1 3 4\n";
    f.increment(3).unwrap();
    let after = f.dump();
    let post_ok = after == "0 1 2 2\n1 2 4 3\n1 2 4 3\n1 2 3\n1 2 4\n";
    f.decrement(3).unwrap();
    let mirror_ok = f.counts() == [0, 1, 2, 1] && f.validate().is_ok();
    outcome(
        pre_ok && post_ok && mirror_ok,
        format!(
            "post-state {:?}, decrement mirror valid: {mirror_ok}",
            after.trim().replace('\n', " | ")
        ),
    )
}

/// Constant bound on primitive array accesses per increment or decrement.
const ORDER_OP_BOUND: u64 = 32;

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0u64;
    let mut checkpoints = 0;
    let mut failure = None;
    for n in [1usize, 4, 256] {
        let mut f = FrequencyOrder::new(n, 1 << 20).unwrap();
        let mut naive = vec![0u32; n];
        for step in 0..1_000_000u32 {
            let a = rng.random_range(0..n);
            let before = f.op_count();
            if naive[a] > 0 && rng.random_bool(0.4) {
                f.decrement(a).unwrap();
                naive[a] -= 1;
            } else {
                f.increment(a).unwrap();
                naive[a] += 1;
            }
            worst = worst.max(f.op_count() - before);
            if step % 50_000 == 0 || step == 999_999 {
                checkpoints += 1;
                if let Err(e) = f.validate() {
                    failure.get_or_insert(format!("N={n} step {step}: {e}"));
                }
                if f.counts() != naive.as_slice() {
                    failure.get_or_insert(format!("N={n} step {step}: counts differ"));
                }
            }
        }
    }
    match failure {
        Some(e) => outcome(false, e),
        None => outcome(
            worst <= ORDER_OP_BOUND,
            format!("3x10^6 ops, {checkpoints} checkpoints valid, max ops/update {worst} (C={ORDER_OP_BOUND})"),
        ),
    }
}

fn random_message(rng: &mut ChaCha8Rng, n: u32) -> Vec<u32> {
    let len = rng.random_range(0..=10_000);
    let seed = rng.random();
    let source = match rng.random_range(0..3) {
        0 => Source::Uniform,
        1 => Source::Zipf {
            alpha: rng.random_range(0.5..1.6),
        },
        _ => Source::Geometric {
            q: rng.random_range(0.5..1.0),
        },
    };
    source.generate(n as usize, len, seed).unwrap()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut configs_run = 0;
    let mut messages = 0;
    for n in [2u32, 5, 256, 65536] {
        for smoothing in [Smoothing::ONE, Smoothing::HALF] {
            let model = ModelConfig {
                smoothing,
                ..ModelConfig::default()
            };
            let mut configs = vec![CodecConfig::plain(n).with_model(model)];
            for delta in [0.02, 0.08, 0.16] {
                for pow2 in [true, false] {
                    let plan = optimal_grouping(n as u64, delta, pow2).unwrap();
                    configs.push(CodecConfig::grouped(n, plan.clone()).with_model(model));
                    if plan.is_pow2() {
                        configs.push(CodecConfig::huffman(n, plan).with_model(model));
                    }
                }
            }
            for config in configs {
                configs_run += 1;
                for _ in 0..200 {
                    let msg = random_message(&mut rng, n);
                    messages += 1;
                    let packed = compress(&msg, &config).unwrap();
                    if decompress(&packed).ok().as_ref() != Some(&msg) {
                        return outcome(false, format!("mismatch for N={n} {:?}", config.mode));
                    }
                }
            }
        }
    }
    let golden = golden_containers_match();
    outcome(
        golden.is_ok(),
        format!(
            "{messages} messages over {configs_run} configurations round-trip; golden files: {}",
            golden.unwrap_or_else(|e| e)
        ),
    )
}

fn golden_containers_match() -> Result<String, String> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let msg = Source::Zipf { alpha: 1.0 }.generate(256, 3000, 42).unwrap();
    let plan = optimal_grouping(256, 0.08, true).unwrap();
    let cases = [
        ("plain_n256_seed42.galf", CodecConfig::plain(256)),
        (
            "grouped_pow2_n256_seed42.galf",
            CodecConfig::grouped(256, plan.clone()),
        ),
        ("huffman_n256_seed42.galf", CodecConfig::huffman(256, plan)),
    ];
    for (name, config) in &cases {
        let expected = std::fs::read(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        if compress(&msg, config).unwrap() != expected {
            return Err(format!("{name} differs"));
        }
        if decompress(&expected).map_err(|e| e.to_string())? != msg {
            return Err(format!("{name} decodes wrongly"));
        }
    }
    Ok(format!("{} byte-exact", cases.len()))
}

fn criterion_6() -> Outcome {
    let msg = Source::Zipf { alpha: 1.0 }
        .generate(256, 1_000_000, 6)
        .unwrap();
    let plan = optimal_grouping(256, 0.08, false).unwrap();
    let (_, plain) = compress_with_stats(&msg, &CodecConfig::plain(256)).unwrap();
    let (_, grouped) = compress_with_stats(&msg, &CodecConfig::grouped(256, plan)).unwrap();
    let gap = grouped.payload_bits_per_symbol() - plain.payload_bits_per_symbol();
    outcome(
        gap <= 0.08 + 0.02,
        format!(
            "plain {:.4} b/s, grouped {:.4} b/s, gap {gap:.4} (limit 0.10)",
            plain.payload_bits_per_symbol(),
            grouped.payload_bits_per_symbol()
        ),
    )
}

fn criterion_7() -> Outcome {
    let n = 65536u32;
    let msg = Source::Zipf { alpha: 1.0 }
        .generate(n as usize, 500_000, 7)
        .unwrap();
    let plan = optimal_grouping(n as u64, 0.16, false).unwrap();
    let s = plan.num_groups();
    let (_, plain) = compress_with_stats(&msg, &CodecConfig::plain(n)).unwrap();
    let (_, grouped) = compress_with_stats(&msg, &CodecConfig::grouped(n, plan)).unwrap();
    let ratio = grouped.tree_ops_per_symbol() / plain.tree_ops_per_symbol();
    let bound = ((s as f64).log2() + 2.0) / (n as f64).log2() + 0.1;
    outcome(
        ratio <= bound,
        format!(
            "tree ops/symbol plain {:.2}, grouped {:.2} (+{:.2} order ops), ratio {ratio:.3} <= {bound:.3}; wall {:.3}s vs {:.3}s",
            plain.tree_ops_per_symbol(),
            grouped.tree_ops_per_symbol(),
            grouped.order_ops as f64 / grouped.symbols as f64,
            plain.seconds,
            grouped.seconds
        ),
    )
}

fn criterion_8() -> Outcome {
    let p = OrderedDistribution::new(vec![0.5, 0.25, 0.125, 0.0625, 0.0625]).unwrap();
    let code = GroupedHuffmanCode::build(&p, &GroupingPlan::new(vec![1, 4]).unwrap()).unwrap();
    let lens: Vec<u32> = (0..5).map(|a| code.codeword_len(a).unwrap()).collect();
    let avg = code.average_length(&p).unwrap();
    let example_ok = lens == [1, 3, 3, 3, 3] && (avg - 2.0).abs() < 1e-12;

    let plan = optimal_grouping(256, 0.08, true).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = f64::NEG_INFINITY;
    for i in 0..100 {
        let weights: Vec<f64> = match i % 3 {
            0 => (0..256).map(|_| rng.random::<f64>()).collect(),
            1 => {
                let alpha = rng.random_range(0.3..2.0);
                (1..=256).map(|k| (k as f64).powf(-alpha)).collect()
            }
            _ => (0..256).map(|_| rng.random::<f64>().powi(8)).collect(),
        };
        let p = OrderedDistribution::from_weights(weights).unwrap();
        let code = GroupedHuffmanCode::build(&p, &plan).unwrap();
        worst = worst.max(code.average_length(&p).unwrap() - p.entropy());
    }
    outcome(
        example_ok && worst <= 1.0 + 0.08 + 1e-9,
        format!(
            "example lengths {lens:?} avg {avg}; max(L - H) over 100 = {worst:.4} (limit 1.08)"
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut ratios = Vec::new();
    for delta in [0.05, 0.1, 0.2] {
        let mut counts = Vec::new();
        for n in [1u64 << 8, 1 << 12, 1 << 16] {
            let plan = theorem3_grouping(n, delta).unwrap();
            ok &= plan.coverage() >= n && worst_case_redundancy(&plan) <= delta;
            counts.push(plan.num_groups());
        }
        let ratio = counts[2] as f64 / counts[0] as f64;
        ok &= ratio <= 2.5;
        ratios.push(format!("d={delta}: s={counts:?} ratio {ratio:.2}"));
    }
    outcome(ok, ratios.join("; "))
}

fn criterion_10() -> Outcome {
    let mut checked = 0;
    for delta in [0.02, 0.08, 0.3] {
        for pow2 in [true, false] {
            let exact = exact_min_groups_upto(512, delta, pow2).unwrap();
            for n in 1..=512u64 {
                let greedy = optimal_grouping(n, delta, pow2).unwrap().num_groups();
                if greedy != exact[n as usize] {
                    return outcome(
                        false,
                        format!(
                            "N={n} d={delta} pow2={pow2}: greedy {greedy}, exact {}",
                            exact[n as usize]
                        ),
                    );
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} (N, d, pow2) cases agree"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        (
            "1 worst-case redundancy vs extreme-point oracle",
            criterion_1,
            Duration::from_secs(10),
        ),
        ("2 grouping tables", criterion_2, Duration::from_secs(5)),
        (
            "3 frequency-order golden vector",
            criterion_3,
            Duration::from_secs(1),
        ),
        (
            "4 frequency-order invariants and op bound",
            criterion_4,
            Duration::from_secs(30),
        ),
        (
            "5 round trips and golden containers",
            criterion_5,
            Duration::from_secs(120),
        ),
        (
            "6 grouped vs plain compression gap",
            criterion_6,
            Duration::from_secs(60),
        ),
        (
            "7 cumulative-structure op ratio",
            criterion_7,
            Duration::from_secs(60),
        ),
        ("8 grouped Huffman", criterion_8, Duration::from_secs(10)),
        (
            "9 constructive grouping",
            criterion_9,
            Duration::from_secs(5),
        ),
        (
            "10 greedy vs exact minimum",
            criterion_10,
            Duration::from_secs(60),
        ),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let started = Instant::now();
        let result = run();
        let took = started.elapsed();
        let pass = result.pass && took <= budget;
        failed += usize::from(!pass);
        println!(
            "{} criterion {name}: {} [{:.2}s, budget {}s]",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
