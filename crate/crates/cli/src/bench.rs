use std::fmt::Write as _;
use std::time::Instant;

use galph::container::{compress_with_stats, decompress_with_stats};
use galph::{Mode, Source};
use serde::Serialize;

use crate::commands::{build_plan, codec_config, data, emit, model_config, usage};
use crate::{BenchArgs, Failure};

#[derive(Serialize)]
struct SourceInfo {
    descriptor: String,
    alphabet: u32,
    symbols: usize,
    seed: Option<u64>,
    /// Entropy of the source in bits per symbol (empirical for files).
    entropy: f64,
}

#[derive(Serialize)]
struct ModeRun {
    mode: &'static str,
    delta: Option<f64>,
    groups: Option<usize>,
    smoothing: String,
    max_count: u32,
    header_bytes: u64,
    payload_bytes: u64,
    bits_per_symbol: f64,
    tree_ops: u64,
    tree_ops_per_symbol: f64,
    order_ops_per_symbol: f64,
    rescales: u64,
    round_trip: bool,
    /// Wall-clock figures; machine dependent and not comparable across hosts.
    #[serde(skip_serializing_if = "Option::is_none")]
    timing: Option<Timing>,
}

#[derive(Serialize)]
struct Timing {
    encode_seconds: f64,
    decode_seconds: f64,
    encode_symbols_per_second: f64,
}

#[derive(Serialize)]
struct BenchReport {
    source: SourceInfo,
    runs: Vec<ModeRun>,
}

fn empirical_entropy(symbols: &[u32], n: usize) -> f64 {
    let mut counts = vec![0u64; n];
    for &s in symbols {
        counts[s as usize] += 1;
    }
    let t = symbols.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / t;
            -p * p.log2()
        })
        .sum()
}

fn load_source(a: &BenchArgs) -> Result<(Vec<u32>, SourceInfo), Failure> {
    let n = a.grouping.alphabet;
    if let Some(path) = a.source.strip_prefix("file:") {
        if n < 256 {
            return Err(usage(
                "byte input needs an alphabet of at least 256 letters",
            ));
        }
        let bytes = std::fs::read(path).map_err(|e| data(format!("{path}: {e}")))?;
        let symbols: Vec<u32> = bytes.iter().map(|&b| b as u32).collect();
        let entropy = empirical_entropy(&symbols, n as usize);
        let info = SourceInfo {
            descriptor: a.source.clone(),
            alphabet: n,
            symbols: symbols.len(),
            seed: None,
            entropy,
        };
        return Ok((symbols, info));
    }
    let source: Source = a.source.parse().map_err(usage)?;
    let entropy = source.entropy(n as usize).map_err(usage)?;
    let symbols = source.generate(n as usize, a.len, a.seed).map_err(usage)?;
    let info = SourceInfo {
        descriptor: a.source.clone(),
        alphabet: n,
        symbols: symbols.len(),
        seed: Some(a.seed),
        entropy,
    };
    Ok((symbols, info))
}

fn run_one(
    symbols: &[u32],
    a: &BenchArgs,
    mode: Mode,
    delta: Option<f64>,
) -> Result<ModeRun, Failure> {
    let plan = build_plan(&a.grouping, delta.unwrap_or(0.0), mode)?;
    let groups = plan.as_ref().map(|p| p.num_groups());
    let model = model_config(&a.model);
    let config = codec_config(mode, a.grouping.alphabet, plan, model);
    let started = Instant::now();
    let (packed, stats) = compress_with_stats(symbols, &config).map_err(usage)?;
    let encode_seconds = started.elapsed().as_secs_f64();
    let started = Instant::now();
    let (decoded, _) = decompress_with_stats(&packed).map_err(data)?;
    let decode_seconds = started.elapsed().as_secs_f64();
    let round_trip = decoded == symbols;
    if !round_trip {
        return Err(data(format!(
            "{} coder did not reproduce its input",
            mode.name()
        )));
    }
    let per_symbol = |v: u64| {
        if symbols.is_empty() {
            0.0
        } else {
            v as f64 / symbols.len() as f64
        }
    };
    Ok(ModeRun {
        mode: mode.name(),
        delta,
        groups,
        smoothing: model.smoothing.to_string(),
        max_count: model.max_count,
        header_bytes: stats.header_bytes,
        payload_bytes: stats.payload_bytes,
        bits_per_symbol: stats.payload_bits_per_symbol(),
        tree_ops: stats.tree_ops,
        tree_ops_per_symbol: stats.tree_ops_per_symbol(),
        order_ops_per_symbol: per_symbol(stats.order_ops),
        rescales: stats.rescales,
        round_trip,
        timing: (!a.no_timing).then(|| Timing {
            encode_seconds,
            decode_seconds,
            encode_symbols_per_second: if encode_seconds > 0.0 {
                symbols.len() as f64 / encode_seconds
            } else {
                0.0
            },
        }),
    })
}

pub(crate) fn run(a: &BenchArgs) -> Result<(), Failure> {
    if a.deltas.is_empty() {
        return Err(usage("at least one budget is needed"));
    }
    let (symbols, source) = load_source(a)?;
    let mut runs = Vec::new();
    for name in &a.modes {
        let mode: Mode = name.parse().map_err(usage)?;
        if mode == Mode::Plain {
            runs.push(run_one(&symbols, a, mode, None)?);
        } else {
            for &d in &a.deltas {
                runs.push(run_one(&symbols, a, mode, Some(d))?);
            }
        }
    }
    let report = BenchReport { source, runs };
    if a.json {
        emit(&(serde_json::to_string_pretty(&report).map_err(data)? + "\n"))
    } else {
        emit(&render(&report))
    }
}

fn render(r: &BenchReport) -> String {
    let s = &r.source;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "source {} N={} symbols={}{} entropy={:.4} bits/symbol",
        s.descriptor,
        s.alphabet,
        s.symbols,
        s.seed.map(|v| format!(" seed={v}")).unwrap_or_default(),
        s.entropy
    );
    let _ = writeln!(
        out,
        "{:<8} {:>6} {:>6} {:>10} {:>10} {:>12} {:>10} {:>10} {:>8}",
        "mode", "delta", "s", "bits/sym", "header", "payload", "tree/sym", "order/sym", "rescale"
    );
    for run in &r.runs {
        let _ = writeln!(
            out,
            "{:<8} {:>6} {:>6} {:>10.4} {:>10} {:>12} {:>10.2} {:>10.2} {:>8}",
            run.mode,
            run.delta
                .map(|d| d.to_string())
                .unwrap_or_else(|| "-".into()),
            run.groups
                .map(|g| g.to_string())
                .unwrap_or_else(|| "-".into()),
            run.bits_per_symbol,
            run.header_bytes,
            run.payload_bytes,
            run.tree_ops_per_symbol,
            run.order_ops_per_symbol,
            run.rescales
        );
    }
    let timed: Vec<_> = r
        .runs
        .iter()
        .filter_map(|run| run.timing.as_ref().map(|t| (run, t)))
        .collect();
    if !timed.is_empty() {
        let _ = writeln!(out, "wall clock (informational, machine dependent):");
        for (run, t) in timed {
            let _ = writeln!(
                out,
                "  {:<8} {:>6}  encode {:.3}s  decode {:.3}s  {:.2} Msym/s",
                run.mode,
                run.delta
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "-".into()),
                t.encode_seconds,
                t.decode_seconds,
                t.encode_symbols_per_second / 1e6
            );
        }
    }
    out
}
