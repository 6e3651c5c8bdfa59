//! The benchmark protocol on random Erdős–Rényi Potts instances:
//! `cargo run --release --example benchmark_protocol -- [iters] [n]`.
//! Writes the per-iteration metrics, per-iteration summary and the
//! log-competitive ratios to `target/bench-*.csv`.

use std::fs::File;

use mapmp::bench::{run_bench, write_csv, BenchConfig, InstanceSource};
use mapmp::default_edge_prob;

fn main() -> mapmp::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("integer argument"));
    let iters = args.next().unwrap_or(2_000);
    let n = args.next().unwrap_or(100);

    let mut config = BenchConfig::reference_protocol(iters, 0);
    config.stride = (iters / 50).max(1);
    config.instance = InstanceSource::Generated { n, edge_prob: default_edge_prob(n), d: 3 };
    let report = run_bench(&config)?;

    write_csv(&report.rows, File::create("target/bench-metrics.csv")?)?;
    write_csv(&report.summary, File::create("target/bench-summary.csv")?)?;
    write_csv(&report.ratio_summary, File::create("target/bench-ratio.csv")?)?;

    println!("LP values per trial: {:?}", report.lp_values);
    for row in report.summary.iter().filter(|r| r.iter == iters) {
        println!(
            "{:>10}  dual {:.4} ± {:.4}  primal gap {:?}",
            row.algorithm, row.dual_mean, row.dual_std, row.gap_mean
        );
    }
    for row in report.ratio_summary.iter().filter(|r| r.iter == iters) {
        println!("log ratio {} / {}: {:?}", row.standard, row.accelerated, row.mean);
    }
    Ok(())
}
