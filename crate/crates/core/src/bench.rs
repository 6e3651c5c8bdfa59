//! Benchmark protocol: repeated seeded solves on random or fixed instances,
//! per-iteration metrics, summaries across trials, and log-competitive
//! ratios between standard and accelerated variants.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{default_edge_prob, erdos_renyi_potts, Model};
use crate::objective::{primal_objective, recover_primal};
use crate::oracle::lp_solve_l2;
use crate::projection::proj_local;
use crate::schedulers::{solve_observed, Algorithm, SolverOptions};

/// Gaps at or below this are treated as fully converged; the log-ratio is
/// left empty instead of becoming infinite.
pub const RATIO_GAP_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    /// A fresh Erdős–Rényi Potts instance per trial.
    Generated { n: usize, edge_prob: f64, d: usize },
    /// The same instance in every trial; only the algorithm streams change.
    Fixed(Model),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub algorithms: Vec<Algorithm>,
    pub eta: f64,
    pub iters: usize,
    pub trials: usize,
    pub seed: u64,
    pub stride: usize,
    pub instance: InstanceSource,
    /// Known optimal LP value `⟨C, μ*⟩`. When absent the LP oracle is tried
    /// and gap columns stay empty if it refuses.
    pub lp_value: Option<f64>,
    pub timing: bool,
}

impl BenchConfig {
    /// n = 100, p = 1.1 ln n / n, d = 3, η = 1000, 10 trials, all six
    /// algorithms. The iteration count has no canonical value and must be
    /// chosen by the caller.
    pub fn reference_protocol(iters: usize, seed: u64) -> Self {
        BenchConfig {
            algorithms: Algorithm::ALL.to_vec(),
            eta: 1000.0,
            iters,
            trials: 10,
            seed,
            stride: 1,
            instance: InstanceSource::Generated {
                n: 100,
                edge_prob: default_edge_prob(100),
                d: 3,
            },
            lp_value: None,
            timing: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::InvalidArgument(format!("eta must be positive and finite, got {}", self.eta)));
        }
        if self.stride == 0 {
            return Err(Error::InvalidArgument("stride must be at least 1".into()));
        }
        if self.algorithms.is_empty() {
            return Err(Error::InvalidArgument("no algorithms selected".into()));
        }
        if let Some(v) = self.lp_value {
            if !v.is_finite() {
                return Err(Error::InvalidArgument(format!("LP value {v} is not finite")));
            }
        }
        if let InstanceSource::Generated { n, edge_prob, d } = self.instance {
            if n < 2 || d < 2 || !(edge_prob > 0.0 && edge_prob <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "bad generator parameters n={n}, p={edge_prob}, d={d}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub trial: usize,
    pub iter: usize,
    pub algorithm: String,
    pub dual_value: f64,
    pub primal_value: f64,
    pub primal_gap: Option<f64>,
    pub slack_score: f64,
    pub elapsed_ms: Option<f64>,
}

pub const METRIC_HEADER: &str = "trial,iter,algorithm,dual_value,primal_value,primal_gap,slack_score,elapsed_ms";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: String,
    pub iter: usize,
    pub trials: usize,
    pub dual_mean: f64,
    pub dual_std: f64,
    pub primal_mean: f64,
    pub primal_std: f64,
    pub gap_mean: Option<f64>,
    pub gap_std: Option<f64>,
    pub slack_mean: f64,
    pub slack_std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub trial: usize,
    pub iter: usize,
    pub standard: String,
    pub accelerated: String,
    pub log_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioSummaryRow {
    pub iter: usize,
    pub standard: String,
    pub accelerated: String,
    /// Trials with a defined ratio at this iteration.
    pub trials: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<MetricRow>,
    pub summary: Vec<SummaryRow>,
    pub ratios: Vec<RatioRow>,
    pub ratio_summary: Vec<RatioSummaryRow>,
    /// LP value per trial, when known.
    pub lp_values: Vec<Option<f64>>,
}

/// `log(a / b)`, empty when either gap is at the convergence floor.
pub fn log_competitive_ratio(gap_standard: f64, gap_accelerated: f64) -> Option<f64> {
    (gap_standard > RATIO_GAP_FLOOR && gap_accelerated > RATIO_GAP_FLOOR)
        .then(|| (gap_standard / gap_accelerated).ln())
}

/// SplitMix64 finalizer over `(seed, a, b)`; gives each trial and each
/// algorithm its own stream.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    let mut z = seed
        .wrapping_add(a.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(b.wrapping_mul(0xD1B5_4A32_D192_ED03));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn algo_stream(a: Algorithm) -> u64 {
    1 + Algorithm::ALL.iter().position(|&x| x == a).unwrap_or(0) as u64
}

fn trial_instance(config: &BenchConfig, trial: usize) -> Result<Model> {
    match &config.instance {
        InstanceSource::Generated { n, edge_prob, d } => {
            erdos_renyi_potts(*n, *edge_prob, *d, derive_seed(config.seed, trial as u64, 0))
        }
        InstanceSource::Fixed(m) => Ok(m.clone()),
    }
}

fn lp_value_for(config: &BenchConfig, model: &Model) -> Result<Option<f64>> {
    if config.lp_value.is_some() {
        return Ok(config.lp_value);
    }
    match lp_solve_l2(model) {
        Ok((_, v)) => Ok(Some(v)),
        Err(Error::TooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_trial(config: &BenchConfig, trial: usize, lp_fixed: Option<Option<f64>>) -> Result<(Vec<MetricRow>, Option<f64>)> {
    let model = trial_instance(config, trial)?;
    let lp = match lp_fixed {
        Some(v) => v,
        None => lp_value_for(config, &model)?,
    };
    let opts = SolverOptions {
        stride: config.stride,
        timing: config.timing,
        ..SolverOptions::default()
    };
    let mut rows = Vec::new();
    for &algo in &config.algorithms {
        let seed = derive_seed(config.seed, trial as u64, algo_stream(algo));
        let mut failure = None;
        solve_observed(&model, algo, config.eta, config.iters, seed, &opts, &mut |cp| {
            if failure.is_some() {
                return;
            }
            let primal = proj_local(&model, &recover_primal(&model, cp.lambda, config.eta))
                .and_then(|mu| primal_objective(&model, &mu));
            match primal {
                Ok(primal_value) => rows.push(MetricRow {
                    trial,
                    iter: cp.record.iter,
                    algorithm: algo.name().to_string(),
                    dual_value: cp.record.dual_value,
                    primal_value,
                    primal_gap: lp.map(|v| primal_value - v),
                    slack_score: cp.record.slack_score,
                    elapsed_ms: config.timing.then_some(cp.record.elapsed_ms),
                }),
                Err(e) => failure = Some(e),
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok((rows, lp))
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Mean and sample standard deviation across trials per (algorithm, iter).
pub fn summarize(rows: &[MetricRow], algorithms: &[Algorithm]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    for algo in algorithms {
        let mut by_iter: BTreeMap<usize, Vec<&MetricRow>> = BTreeMap::new();
        for r in rows.iter().filter(|r| r.algorithm == algo.name()) {
            by_iter.entry(r.iter).or_default().push(r);
        }
        for (iter, group) in by_iter {
            let col = |f: fn(&MetricRow) -> f64| group.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let (dual_mean, dual_std) = mean_std(&col(|r| r.dual_value));
            let (primal_mean, primal_std) = mean_std(&col(|r| r.primal_value));
            let (slack_mean, slack_std) = mean_std(&col(|r| r.slack_score));
            let gaps: Option<Vec<f64>> = group.iter().map(|r| r.primal_gap).collect();
            let (gap_mean, gap_std) = match gaps {
                Some(g) => {
                    let (m, s) = mean_std(&g);
                    (Some(m), Some(s))
                }
                None => (None, None),
            };
            out.push(SummaryRow {
                algorithm: algo.name().to_string(),
                iter,
                trials: group.len(),
                dual_mean,
                dual_std,
                primal_mean,
                primal_std,
                gap_mean,
                gap_std,
                slack_mean,
                slack_std,
            });
        }
    }
    out
}

/// Log-competitive ratios for every standard/accelerated pair present in
/// `algorithms`, matched by trial and iteration.
pub fn competitive_ratios(rows: &[MetricRow], algorithms: &[Algorithm]) -> Vec<RatioRow> {
    let index: BTreeMap<(&str, usize, usize), Option<f64>> = rows
        .iter()
        .map(|r| ((r.algorithm.as_str(), r.trial, r.iter), r.primal_gap))
        .collect();
    let mut out = Vec::new();
    for &std_algo in algorithms {
        let Some(acc) = std_algo.accelerated() else { continue };
        if !algorithms.contains(&acc) {
            continue;
        }
        for r in rows.iter().filter(|r| r.algorithm == std_algo.name()) {
            let Some(Some(acc_gap)) = index.get(&(acc.name(), r.trial, r.iter)) else { continue };
            let Some(std_gap) = r.primal_gap else { continue };
            out.push(RatioRow {
                trial: r.trial,
                iter: r.iter,
                standard: std_algo.name().to_string(),
                accelerated: acc.name().to_string(),
                log_ratio: log_competitive_ratio(std_gap, *acc_gap),
            });
        }
    }
    out
}

pub fn summarize_ratios(ratios: &[RatioRow]) -> Vec<RatioSummaryRow> {
    let mut groups: BTreeMap<(&str, &str, usize), Vec<Option<f64>>> = BTreeMap::new();
    for r in ratios {
        groups
            .entry((r.standard.as_str(), r.accelerated.as_str(), r.iter))
            .or_default()
            .push(r.log_ratio);
    }
    groups
        .into_iter()
        .map(|((standard, accelerated, iter), vals)| {
            let defined: Vec<f64> = vals.into_iter().flatten().collect();
            let stats = (!defined.is_empty()).then(|| mean_std(&defined));
            RatioSummaryRow {
                iter,
                standard: standard.to_string(),
                accelerated: accelerated.to_string(),
                trials: defined.len(),
                mean: stats.map(|s| s.0),
                std: stats.map(|s| s.1),
            }
        })
        .collect()
}

/// Runs every trial (in parallel) and assembles rows in trial order.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    config.validate()?;
    // A fixed instance needs its LP solved once, not per trial.
    let lp_fixed = match &config.instance {
        InstanceSource::Fixed(m) => Some(lp_value_for(config, m)?),
        InstanceSource::Generated { .. } => None,
    };
    let per_trial: Vec<(Vec<MetricRow>, Option<f64>)> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(config, t, lp_fixed))
        .collect::<Result<_>>()?;
    let lp_values = per_trial.iter().map(|p| p.1).collect();
    let rows: Vec<MetricRow> = per_trial.into_iter().flat_map(|p| p.0).collect();
    let summary = summarize(&rows, &config.algorithms);
    let ratios = competitive_ratios(&rows, &config.algorithms);
    let ratio_summary = summarize_ratios(&ratios);
    Ok(BenchReport {
        rows,
        summary,
        ratios,
        ratio_summary,
        lp_values,
    })
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes any serializable rows as CSV with a header row.
pub fn write_csv<T: Serialize, W: Write>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_metrics_csv<R: Read>(input: R) -> Result<Vec<MetricRow>> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers().map_err(csv_err)?.iter().collect::<Vec<_>>().join(",");
    if header != METRIC_HEADER {
        return Err(Error::parse(1, format!("unexpected header '{header}'")));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| Error::parse(k + 2, e.to_string())))
        .collect()
}

pub fn metrics_csv_string(rows: &[MetricRow]) -> Result<String> {
    let mut buf = Vec::new();
    if rows.is_empty() {
        writeln!(buf, "{METRIC_HEADER}")?;
    } else {
        write_csv(rows, &mut buf)?;
    }
    String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::random_tree_potts;
    use crate::objective::{dual_objective, DualVector};

    fn small_config() -> BenchConfig {
        BenchConfig {
            algorithms: vec![Algorithm::Emp, Algorithm::AccelEmp],
            eta: 5.0,
            iters: 20,
            trials: 3,
            seed: 9,
            stride: 5,
            instance: InstanceSource::Generated { n: 6, edge_prob: 0.5, d: 2 },
            lp_value: None,
            timing: false,
        }
    }

    #[test]
    fn header_is_stable() {
        let text = metrics_csv_string(&[]).unwrap();
        assert_eq!(text.trim_end(), METRIC_HEADER);
        let report = run_bench(&small_config()).unwrap();
        let text = metrics_csv_string(&report.rows).unwrap();
        assert_eq!(text.lines().next().unwrap(), METRIC_HEADER);
        assert_eq!(read_metrics_csv(text.as_bytes()).unwrap(), report.rows);
    }

    #[test]
    fn zero_iterations_single_row() {
        let model = random_tree_potts(5, 3, 1).unwrap();
        let config = BenchConfig {
            algorithms: Algorithm::ALL.to_vec(),
            iters: 0,
            trials: 1,
            instance: InstanceSource::Fixed(model.clone()),
            ..small_config()
        };
        let report = run_bench(&config).unwrap();
        assert_eq!(report.rows.len(), Algorithm::ALL.len());
        let l0 = dual_objective(&model, &DualVector::zeros(&model), config.eta);
        for r in &report.rows {
            assert_eq!(r.iter, 0);
            assert_eq!(r.dual_value, l0);
            assert!(r.primal_gap.unwrap() >= -1e-9);
        }
    }

    #[test]
    fn deterministic_and_ordered() {
        let a = metrics_csv_string(&run_bench(&small_config()).unwrap().rows).unwrap();
        let b = metrics_csv_string(&run_bench(&small_config()).unwrap().rows).unwrap();
        assert_eq!(a, b);
        let rows = read_metrics_csv(a.as_bytes()).unwrap();
        assert!(rows.windows(2).all(|w| w[0].trial <= w[1].trial));
        assert_eq!(rows.iter().filter(|r| r.trial == 0 && r.algorithm == "emp").map(|r| r.iter).collect::<Vec<_>>(), vec![0, 5, 10, 15, 20]);
    }

    #[test]
    fn ratio_of_equal_errors_is_zero() {
        assert_eq!(log_competitive_ratio(0.3, 0.3), Some(0.0));
        assert_eq!(log_competitive_ratio(0.3, 0.0), None);
        assert_eq!(log_competitive_ratio(1e-12, 0.2), None);
        assert!((log_competitive_ratio(2.0, 1.0).unwrap() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn summary_statistics() {
        let rows: Vec<MetricRow> = [1.0, 2.0, 3.0]
            .iter()
            .enumerate()
            .map(|(t, &v)| MetricRow {
                trial: t,
                iter: 0,
                algorithm: "emp".into(),
                dual_value: v,
                primal_value: v,
                primal_gap: Some(v),
                slack_score: v,
                elapsed_ms: None,
            })
            .collect();
        let s = summarize(&rows, &[Algorithm::Emp]);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].dual_mean, 2.0);
        assert!((s[0].dual_std - 1.0).abs() < 1e-15);
        assert_eq!(s[0].gap_mean, Some(2.0));
    }

    #[test]
    fn ratio_rows_pair_algorithms() {
        let report = run_bench(&small_config()).unwrap();
        assert_eq!(report.ratios.len(), 3 * 5);
        assert!(report.ratios.iter().all(|r| r.standard == "emp" && r.accelerated == "accel-emp"));
        assert_eq!(report.ratio_summary.len(), 5);
    }

    #[test]
    fn validation() {
        assert!(run_bench(&BenchConfig { trials: 0, ..small_config() }).is_err());
        assert!(run_bench(&BenchConfig { eta: 0.0, ..small_config() }).is_err());
        assert!(run_bench(&BenchConfig { stride: 0, ..small_config() }).is_err());
        assert!(run_bench(&BenchConfig { algorithms: vec![], ..small_config() }).is_err());
    }

    #[test]
    fn reference_protocol_preset() {
        let c = BenchConfig::reference_protocol(100, 0);
        assert_eq!((c.eta, c.trials), (1000.0, 10));
        assert_eq!(c.instance, InstanceSource::Generated { n: 100, edge_prob: 1.1 * 100f64.ln() / 100.0, d: 3 });
        c.validate().unwrap();
    }
}
