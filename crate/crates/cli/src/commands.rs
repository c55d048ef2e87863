use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use galph::container::{compress_with_stats, decompress_with_stats};
use galph::{
    composed_redundancy_bound, optimal_grouping, theorem3_grouping, worst_case_redundancy,
    CodecConfig, GroupingPlan, Mode, ModelConfig,
};
use serde::Serialize;

use crate::{DecodeArgs, EncodeArgs, Failure, GroupingArgs, ModelArgs, PlanArgs};

pub(crate) fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

pub(crate) fn data(e: impl ToString) -> Failure {
    Failure::Data(e.to_string())
}

/// Writes `text` to standard output. A closed pipe is not an error.
pub(crate) fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(data(e)),
        _ => Ok(()),
    }
}

pub(crate) fn build_plan(
    g: &GroupingArgs,
    delta: f64,
    mode: Mode,
) -> Result<Option<GroupingPlan>, Failure> {
    if mode == Mode::Plain {
        return Ok(None);
    }
    // Huffman codes need whole-bit ordinals.
    let pow2 = g.pow2 || mode == Mode::Huffman;
    optimal_grouping(g.alphabet as u64, delta, pow2)
        .map(Some)
        .map_err(usage)
}

pub(crate) fn model_config(m: &ModelArgs) -> ModelConfig {
    ModelConfig {
        smoothing: m.smoothing,
        max_count: m.max_count,
        full_width: false,
    }
}

pub(crate) fn codec_config(
    mode: Mode,
    alphabet: u32,
    plan: Option<GroupingPlan>,
    model: ModelConfig,
) -> CodecConfig {
    CodecConfig {
        mode,
        alphabet,
        model,
        plan,
    }
}

#[derive(Serialize)]
struct PlanReport {
    alphabet: u32,
    delta: f64,
    pow2: bool,
    closed_form: bool,
    groups: usize,
    coverage: u64,
    sizes: Vec<u64>,
    worst_case_redundancy: f64,
    /// Redundancy guarantee when each group symbol gets a Huffman codeword.
    huffman_bound: f64,
}

pub(crate) fn plan(a: &PlanArgs) -> Result<(), Failure> {
    let n = a.grouping.alphabet as u64;
    let plan = if a.closed_form {
        theorem3_grouping(n, a.delta)
    } else {
        optimal_grouping(n, a.delta, a.grouping.pow2)
    }
    .map_err(usage)?;
    let r = worst_case_redundancy(&plan);
    let report = PlanReport {
        alphabet: a.grouping.alphabet,
        delta: a.delta,
        pow2: plan.is_pow2(),
        closed_form: a.closed_form,
        groups: plan.num_groups(),
        coverage: plan.coverage(),
        sizes: plan.sizes().to_vec(),
        worst_case_redundancy: r,
        huffman_bound: composed_redundancy_bound(1.0, r),
    };
    if a.json {
        return emit(&(serde_json::to_string_pretty(&report).map_err(data)? + "\n"));
    }
    let mut out = format!(
        "N = {}, delta = {}, s = {}\n",
        report.alphabet, report.delta, report.groups
    );
    out += &format!(
        "{:>5} {:>8} {:>10} {:>10}\n",
        "group", "size", "first", "last"
    );
    for (k, (&start, &m)) in plan.prefixes().iter().zip(plan.sizes()).enumerate() {
        out += &format!(
            "{:>5} {:>8} {:>10} {:>10}\n",
            k + 1,
            m,
            start + 1,
            start + m
        );
    }
    out += &format!("coverage = {}\n", report.coverage);
    out += &format!("worst-case redundancy = {r:.6} bits/letter\n");
    out += &format!(
        "with a Huffman group code: redundancy <= {:.6}\n",
        report.huffman_bound
    );
    emit(&out)
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    if path == Path::new("-") {
        std::io::stdin().read_to_end(&mut buf).map_err(data)?;
    } else {
        buf = fs::read(path).map_err(|e| data(format!("{}: {e}", path.display())))?;
    }
    Ok(buf)
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes).and_then(|_| out.flush()).map_err(data)
    } else {
        fs::write(path, bytes).map_err(|e| data(format!("{}: {e}", path.display())))
    }
}

#[derive(Serialize)]
struct CodingReport {
    mode: &'static str,
    alphabet: u32,
    groups: Option<usize>,
    symbols: u64,
    input_bytes: u64,
    output_bytes: u64,
    header_bytes: u64,
    payload_bytes: u64,
}

fn report_coding(report: &CodingReport, json: bool) -> Result<(), Failure> {
    let line = if json {
        serde_json::to_string(report).map_err(data)?
    } else {
        format!(
            "{}: {} symbols, {} -> {} bytes (header {}, payload {})",
            report.mode,
            report.symbols,
            report.input_bytes,
            report.output_bytes,
            report.header_bytes,
            report.payload_bytes
        )
    };
    eprintln!("{line}");
    Ok(())
}

pub(crate) fn encode(a: &EncodeArgs) -> Result<(), Failure> {
    let mode: Mode = a.mode.parse().map_err(usage)?;
    if a.grouping.alphabet < 256 {
        return Err(usage(
            "byte input needs an alphabet of at least 256 letters",
        ));
    }
    let plan = build_plan(&a.grouping, a.delta, mode)?;
    let groups = plan.as_ref().map(|p| p.num_groups());
    let config = codec_config(mode, a.grouping.alphabet, plan, model_config(&a.model));
    let input = read_input(&a.input)?;
    let symbols: Vec<u32> = input.iter().map(|&b| b as u32).collect();
    let (packed, stats) = compress_with_stats(&symbols, &config).map_err(usage)?;
    write_output(&a.output, &packed)?;
    report_coding(
        &CodingReport {
            mode: mode.name(),
            alphabet: a.grouping.alphabet,
            groups,
            symbols: stats.symbols,
            input_bytes: input.len() as u64,
            output_bytes: packed.len() as u64,
            header_bytes: stats.header_bytes,
            payload_bytes: stats.payload_bytes,
        },
        a.json,
    )
}

pub(crate) fn decode(a: &DecodeArgs) -> Result<(), Failure> {
    let packed = read_input(&a.input)?;
    let header = galph::StreamHeader::read(&packed).map_err(data)?.0;
    let (symbols, stats) = decompress_with_stats(&packed).map_err(data)?;
    let bytes = symbols
        .into_iter()
        .map(|s| u8::try_from(s).map_err(|_| data(format!("decoded symbol {s} is not a byte"))))
        .collect::<Result<Vec<u8>, _>>()?;
    write_output(&a.output, &bytes)?;
    report_coding(
        &CodingReport {
            mode: header.mode.name(),
            alphabet: header.alphabet,
            groups: header.plan.as_ref().map(|p| p.num_groups()),
            symbols: stats.symbols,
            input_bytes: packed.len() as u64,
            output_bytes: bytes.len() as u64,
            header_bytes: stats.header_bytes,
            payload_bytes: stats.payload_bytes,
        },
        a.json,
    )
}
