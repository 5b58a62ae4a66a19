//! Config-file driven experiment runner.
//!
//! A plain-text config (key=value lines, `#` comments) names a dataset,
//! a counting task, a privacy setting, and optionally a one-dimensional
//! sweep. The runner executes the fine-grained protocol and the
//! strict-uniform baseline side by side over repeated seeded runs and
//! emits one CSV row per (grid point, method) pair. Output is
//! byte-stable for a fixed config: every random choice derives from the
//! master seed through named streams.

use std::fmt::Write as _;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::baseline::{run_kstar_uniform, run_triangle_uniform};
use crate::error::{Error, Result};
use crate::generate::{barabasi_albert, gnp};
use crate::graph::{
    exact_kstar_count, exact_triangle_count, load_edge_list, sample_induced_subgraph, Graph,
};
use crate::kstar::{run_kstar, KStarConfig};
use crate::privacy::{assign_edge_levels, PrivacyPolicy};
use crate::rng::derive_seed;
use crate::triangle::{run_triangle, TriangleConfig};

/// Environment variable consulted to resolve relative `file:` dataset
/// paths, so configs can be checked in without absolute paths.
pub const DATA_DIR_ENV: &str = "FGRDP_DATA_DIR";

/// Fixed column set; `raw_mse` is appended when `emit_raw` is on.
pub const CSV_HEADER: &str =
    "task,dataset,n,k,eps1,eps2,alpha,frac1,method,true_count,mean_est,mse,mre,repeats,seed,wall_ms";

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSpec {
    File(PathBuf),
    Gnp { n: usize, p: f64 },
    Ba { n: usize, m: usize },
}

impl DatasetSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("dataset {s:?} is not kind:args")))?;
        match kind {
            "file" => {
                if rest.is_empty() {
                    return Err(Error::Config("file dataset needs a path".into()));
                }
                Ok(DatasetSpec::File(PathBuf::from(rest)))
            }
            "gnp" => {
                let (n, p) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("gnp dataset {rest:?} is not n:p")))?;
                let n = parse_usize("gnp node count", n)?;
                let p = parse_f64("gnp edge probability", p)?;
                Ok(DatasetSpec::Gnp { n, p })
            }
            "ba" => {
                let (n, m) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Config(format!("ba dataset {rest:?} is not n:m")))?;
                let n = parse_usize("ba node count", n)?;
                let m = parse_usize("ba attachment count", m)?;
                Ok(DatasetSpec::Ba { n, m })
            }
            other => Err(Error::Config(format!("unknown dataset kind {other:?}"))),
        }
    }

    /// Short name used in the CSV `dataset` column.
    pub fn label(&self) -> String {
        match self {
            DatasetSpec::File(path) => path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| path.to_string_lossy().into_owned()),
            DatasetSpec::Gnp { n, p } => format!("gnp:{n}:{p}"),
            DatasetSpec::Ba { n, m } => format!("ba:{n}:{m}"),
        }
    }

    /// Builds the graph. `seed` feeds the synthetic generators and is
    /// ignored for files.
    pub fn materialize(&self, seed: u64) -> Result<Graph> {
        match self {
            DatasetSpec::File(path) => {
                let resolved = resolve_data_path(path);
                let file = File::open(&resolved).map_err(Error::Io)?;
                Ok(load_edge_list(BufReader::new(file))?.graph)
            }
            DatasetSpec::Gnp { n, p } => gnp(*n, *p, seed),
            DatasetSpec::Ba { n, m } => barabasi_albert(*n, *m, seed),
        }
    }
}

fn resolve_data_path(path: &Path) -> PathBuf {
    if path.is_relative() {
        if let Ok(dir) = std::env::var(DATA_DIR_ENV) {
            return Path::new(&dir).join(path);
        }
    }
    path.to_path_buf()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TaskSpec {
    Triangle,
    KStar { k: u64 },
}

impl TaskSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "triangle" => Ok(TaskSpec::Triangle),
            _ => match s.split_once(':') {
                Some(("kstar", k)) => Ok(TaskSpec::KStar {
                    k: parse_u64("kstar k", k)?,
                }),
                _ => Err(Error::Config(format!(
                    "unknown task {s:?}, expected triangle or kstar:<k>"
                ))),
            },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TaskSpec::Triangle => "triangle",
            TaskSpec::KStar { .. } => "kstar",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DTildeSpec {
    /// Use the maximum degree of the graph at hand.
    MaxDegree,
    Fixed(usize),
}

impl DTildeSpec {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(DTildeSpec::MaxDegree),
            _ => match s.split_once(':') {
                Some(("fixed", v)) => Ok(DTildeSpec::Fixed(parse_usize("d_tilde", v)?)),
                _ => Err(Error::Config(format!(
                    "unknown d_tilde {s:?}, expected exact or fixed:<n>"
                ))),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SweepSpec {
    None,
    /// Scale all budgets so the strictest level takes each value.
    Eps1(Vec<f64>),
    /// Sample induced subgraphs of each size from the base graph.
    SampleN(Vec<usize>),
    /// Reweight a two-level policy to each strict-level fraction.
    Frac1(Vec<f64>),
}

impl SweepSpec {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "none" {
            return Ok(SweepSpec::None);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("sweep {s:?} is not kind:values")))?;
        match kind {
            "eps1" => Ok(SweepSpec::Eps1(parse_f64_list("eps1 sweep", rest)?)),
            "n" => Ok(SweepSpec::SampleN(parse_usize_list("n sweep", rest)?)),
            "frac1" => Ok(SweepSpec::Frac1(parse_f64_list("frac1 sweep", rest)?)),
            other => Err(Error::Config(format!("unknown sweep kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    /// Induced-subgraph size applied to the base graph, if any.
    pub sample_n: Option<usize>,
    pub task: TaskSpec,
    pub budgets: Vec<f64>,
    pub fractions: Vec<f64>,
    pub alpha: f64,
    pub d_tilde: DTildeSpec,
    pub repeats: usize,
    pub seed: u64,
    pub sweep: SweepSpec,
    /// Draw a fresh synthetic graph every repeat instead of reusing one.
    pub resample_graph: bool,
    /// Report wall-clock milliseconds instead of zeros.
    pub timing: bool,
    /// Append the unnormalized `raw_mse` column.
    pub emit_raw: bool,
}

impl ExperimentConfig {
    /// Parses `key=value` lines. Blank lines and `#` comments are
    /// skipped; unknown or repeated keys are errors.
    pub fn parse(text: &str) -> Result<Self> {
        let mut dataset = None;
        let mut sample_n = None;
        let mut task = None;
        let mut budgets = vec![0.5, 1.0];
        let mut fractions = vec![0.2, 0.8];
        let mut alpha = 0.5;
        let mut d_tilde = DTildeSpec::MaxDegree;
        let mut repeats = 100usize;
        let mut seed = 42u64;
        let mut sweep = SweepSpec::None;
        let mut resample_graph = false;
        let mut timing = false;
        let mut emit_raw = false;
        let mut seen = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: {raw:?} is not key=value", idx + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            if seen.contains(&key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key {key}", idx + 1)));
            }
            seen.push(key.to_string());
            match key {
                "dataset" => dataset = Some(DatasetSpec::parse(value)?),
                "sample_n" => sample_n = Some(parse_usize("sample_n", value)?),
                "task" => task = Some(TaskSpec::parse(value)?),
                "budgets" => budgets = parse_f64_list("budgets", value)?,
                "fractions" => fractions = parse_f64_list("fractions", value)?,
                "alpha" => alpha = parse_f64("alpha", value)?,
                "d_tilde" => d_tilde = DTildeSpec::parse(value)?,
                "repeats" => repeats = parse_usize("repeats", value)?,
                "seed" => seed = parse_u64("seed", value)?,
                "sweep" => sweep = SweepSpec::parse(value)?,
                "resample_graph" => resample_graph = parse_bool("resample_graph", value)?,
                "timing" => timing = parse_bool("timing", value)?,
                "emit_raw" => emit_raw = parse_bool("emit_raw", value)?,
                other => {
                    return Err(Error::Config(format!("line {}: unknown key {other:?}", idx + 1)))
                }
            }
        }

        let cfg = ExperimentConfig {
            dataset: dataset.ok_or_else(|| Error::Config("missing required key dataset".into()))?,
            sample_n,
            task: task.ok_or_else(|| Error::Config("missing required key task".into()))?,
            budgets,
            fractions,
            alpha,
            d_tilde,
            repeats,
            seed,
            sweep,
            resample_graph,
            timing,
            emit_raw,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.budgets.is_empty() {
            return Err(Error::Config("budgets must not be empty".into()));
        }
        if self.fractions.len() != self.budgets.len() {
            return Err(Error::Config(format!(
                "{} fractions for {} budgets",
                self.fractions.len(),
                self.budgets.len()
            )));
        }
        if let SweepSpec::Frac1(_) = self.sweep {
            if self.budgets.len() != 2 {
                return Err(Error::Config(
                    "frac1 sweep requires exactly two budget levels".into(),
                ));
            }
        }
        if let SweepSpec::Eps1(vals) = &self.sweep {
            if vals.iter().any(|&v| !v.is_finite() || v <= 0.0) {
                return Err(Error::Config("eps1 sweep values must be positive".into()));
            }
        }
        if let SweepSpec::SampleN(vals) = &self.sweep {
            if vals.contains(&0) {
                return Err(Error::Config("n sweep values must be positive".into()));
            }
        }
        if self.resample_graph && matches!(self.dataset, DatasetSpec::File(_)) {
            return Err(Error::Config(
                "resample_graph requires a synthetic dataset".into(),
            ));
        }
        Ok(())
    }
}

pub struct ExperimentOutput {
    pub csv: String,
    pub warnings: Vec<String>,
}

struct GridPoint {
    budgets: Vec<f64>,
    fractions: Vec<f64>,
    sample_n: Option<usize>,
}

fn grid(cfg: &ExperimentConfig) -> Vec<GridPoint> {
    let base = |budgets, fractions, sample_n| GridPoint {
        budgets,
        fractions,
        sample_n,
    };
    match &cfg.sweep {
        SweepSpec::None => vec![base(cfg.budgets.clone(), cfg.fractions.clone(), cfg.sample_n)],
        SweepSpec::Eps1(vals) => vals
            .iter()
            .map(|&eps1| {
                let scaled = cfg.budgets.iter().map(|b| eps1 * b / cfg.budgets[0]).collect();
                base(scaled, cfg.fractions.clone(), cfg.sample_n)
            })
            .collect(),
        SweepSpec::SampleN(vals) => vals
            .iter()
            .map(|&n| base(cfg.budgets.clone(), cfg.fractions.clone(), Some(n)))
            .collect(),
        SweepSpec::Frac1(vals) => vals
            .iter()
            .map(|&f| base(cfg.budgets.clone(), vec![f, 1.0 - f], cfg.sample_n))
            .collect(),
    }
}

struct Setting {
    graph: Graph,
    policy: PrivacyPolicy,
    truth: f64,
    d_tilde: usize,
}

fn build_setting(
    cfg: &ExperimentConfig,
    point: &GridPoint,
    graph_idx: u64,
    derive_idx: u64,
) -> Result<Setting> {
    let mut graph = cfg
        .dataset
        .materialize(derive_seed(cfg.seed, "dataset", graph_idx))?;
    if let Some(n) = point.sample_n {
        graph = sample_induced_subgraph(&graph, n, derive_seed(cfg.seed, "sample", derive_idx))?;
    }
    let policy = assign_edge_levels(
        &graph,
        &point.budgets,
        &point.fractions,
        derive_seed(cfg.seed, "levels", derive_idx),
    )?;
    let truth = match cfg.task {
        TaskSpec::Triangle => exact_triangle_count(&graph) as f64,
        TaskSpec::KStar { k } => exact_kstar_count(&graph, k)? as f64,
    };
    let d_tilde = match cfg.d_tilde {
        DTildeSpec::MaxDegree => graph.max_degree(),
        DTildeSpec::Fixed(v) => v,
    };
    Ok(Setting {
        graph,
        policy,
        truth,
        d_tilde,
    })
}

fn run_pair(cfg: &ExperimentConfig, setting: &Setting, fine_seed: u64, unif_seed: u64) -> Result<(f64, f64, Duration, Duration)> {
    let strict = setting.policy.budgets()[0];
    match cfg.task {
        TaskSpec::Triangle => {
            let mut fine_cfg = TriangleConfig::new(cfg.alpha, setting.d_tilde, fine_seed);
            fine_cfg.record_ledger = false;
            let t0 = Instant::now();
            let fine = run_triangle(&setting.graph, &setting.policy, &fine_cfg)?;
            let fine_wall = t0.elapsed();
            let mut unif_cfg = fine_cfg.clone();
            unif_cfg.seed = unif_seed;
            let t1 = Instant::now();
            let unif = run_triangle_uniform(&setting.graph, strict, &unif_cfg)?;
            Ok((fine.estimate, unif.estimate, fine_wall, t1.elapsed()))
        }
        TaskSpec::KStar { k } => {
            let mut fine_cfg = KStarConfig::new(k, setting.d_tilde, fine_seed);
            fine_cfg.record_ledger = false;
            let t0 = Instant::now();
            let fine = run_kstar(&setting.graph, &setting.policy, &fine_cfg)?;
            let fine_wall = t0.elapsed();
            let mut unif_cfg = fine_cfg.clone();
            unif_cfg.seed = unif_seed;
            let t1 = Instant::now();
            let unif = run_kstar_uniform(&setting.graph, strict, &unif_cfg)?;
            Ok((fine.estimate, unif.estimate, fine_wall, t1.elapsed()))
        }
    }
}

/// Runs the full grid and renders the CSV. Deterministic per config:
/// two invocations produce byte-identical output (when `timing` is off).
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let points = grid(cfg);
    let repeats = cfg.repeats;

    let mut csv = String::from(CSV_HEADER);
    if cfg.emit_raw {
        csv.push_str(",raw_mse");
    }
    csv.push('\n');
    let mut warnings = Vec::new();

    for (gi, point) in points.iter().enumerate() {
        let shared = if cfg.resample_graph {
            None
        } else {
            Some(build_setting(cfg, point, 0, gi as u64)?)
        };

        let mut fine_estimates = Vec::with_capacity(repeats);
        let mut unif_estimates = Vec::with_capacity(repeats);
        let mut truths = Vec::with_capacity(repeats);
        let mut node_count = 0usize;
        let mut fine_wall = Duration::ZERO;
        let mut unif_wall = Duration::ZERO;

        for rep in 0..repeats {
            let run_idx = (gi * repeats + rep) as u64;
            let fresh;
            let setting = match &shared {
                Some(s) => s,
                None => {
                    fresh = build_setting(cfg, point, 1 + run_idx, 1 + run_idx)?;
                    &fresh
                }
            };
            if rep == 0 {
                node_count = setting.graph.node_count();
            }
            let fine_seed = derive_seed(cfg.seed, "exp-fine", run_idx);
            let unif_seed = derive_seed(cfg.seed, "exp-uniform", run_idx);
            let (fine, unif, fw, uw) = run_pair(cfg, setting, fine_seed, unif_seed)?;
            fine_estimates.push(fine);
            unif_estimates.push(unif);
            truths.push(setting.truth);
            fine_wall += fw;
            unif_wall += uw;
        }

        let zero_truth = truths.contains(&0.0);
        if zero_truth {
            warnings.push(format!(
                "grid point {gi}: true count is zero, mse/mre are NaN; use raw_mse"
            ));
        }

        for (method, estimates, wall) in [
            ("fine", &fine_estimates, fine_wall),
            ("uniform", &unif_estimates, unif_wall),
        ] {
            let row = render_row(cfg, point, RowData {
                method,
                node_count,
                estimates,
                truths: &truths,
                zero_truth,
                wall,
            });
            csv.push_str(&row);
            csv.push('\n');
        }
    }

    Ok(ExperimentOutput { csv, warnings })
}

struct RowData<'a> {
    method: &'static str,
    node_count: usize,
    estimates: &'a [f64],
    truths: &'a [f64],
    zero_truth: bool,
    wall: Duration,
}

fn render_row(cfg: &ExperimentConfig, point: &GridPoint, data: RowData<'_>) -> String {
    let n = data.estimates.len() as f64;
    let mean_est = data.estimates.iter().sum::<f64>() / n;
    let (mse, mre) = if data.zero_truth {
        (f64::NAN, f64::NAN)
    } else {
        let mut mse = 0.0;
        let mut mre = 0.0;
        for (&e, &t) in data.estimates.iter().zip(data.truths) {
            mse += (e - t) * (e - t) / t;
            mre += (e - t).abs() / t;
        }
        (mse / n, mre / n)
    };

    let k_col = match cfg.task {
        TaskSpec::KStar { k } => k.to_string(),
        TaskSpec::Triangle => String::new(),
    };
    let alpha_col = match cfg.task {
        TaskSpec::Triangle => format!("{}", cfg.alpha),
        TaskSpec::KStar { .. } => String::new(),
    };
    let eps2_col = if point.budgets.len() > 1 {
        format!("{}", point.budgets[1])
    } else {
        String::new()
    };
    let wall_ms = if cfg.timing { data.wall.as_millis() } else { 0 };

    let mut row = String::new();
    write!(
        row,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        cfg.task.label(),
        cfg.dataset.label(),
        data.node_count,
        k_col,
        point.budgets[0],
        eps2_col,
        alpha_col,
        point.fractions[0],
        data.method,
        data.truths[0],
        mean_est,
        mse,
        mre,
        data.estimates.len(),
        cfg.seed,
        wall_ms,
    )
    .expect("writing to a String cannot fail");
    if cfg.emit_raw {
        let raw = data
            .estimates
            .iter()
            .zip(data.truths)
            .map(|(&e, &t)| (e - t) * (e - t))
            .sum::<f64>()
            / n;
        write!(row, ",{raw}").expect("writing to a String cannot fail");
    }
    row
}

fn parse_f64(what: &str, s: &str) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Config(format!("{what}: {s:?} is not a number")))
}

fn parse_usize(what: &str, s: &str) -> Result<usize> {
    s.parse::<usize>()
        .map_err(|_| Error::Config(format!("{what}: {s:?} is not a non-negative integer")))
}

fn parse_u64(what: &str, s: &str) -> Result<u64> {
    s.parse::<u64>()
        .map_err(|_| Error::Config(format!("{what}: {s:?} is not a non-negative integer")))
}

fn parse_bool(what: &str, s: &str) -> Result<bool> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::Config(format!("{what}: {s:?} is not true or false"))),
    }
}

fn parse_f64_list(what: &str, s: &str) -> Result<Vec<f64>> {
    let vals: Result<Vec<f64>> = s.split(',').map(|part| parse_f64(what, part.trim())).collect();
    let vals = vals?;
    if vals.is_empty() {
        return Err(Error::Config(format!("{what}: empty list")));
    }
    Ok(vals)
}

fn parse_usize_list(what: &str, s: &str) -> Result<Vec<usize>> {
    let vals: Result<Vec<usize>> = s
        .split(',')
        .map(|part| parse_usize(what, part.trim()))
        .collect();
    let vals = vals?;
    if vals.is_empty() {
        return Err(Error::Config(format!("{what}: empty list")));
    }
    Ok(vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# comment line
dataset = gnp:200:0.05
task = kstar:2
budgets = 0.4, 0.9
fractions = 0.3, 0.7
alpha = 0.4   # inline comment
d_tilde = fixed:12
repeats = 7
seed = 99
sweep = eps1:0.5,1,2
timing = true
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.dataset, DatasetSpec::Gnp { n: 200, p: 0.05 });
        assert_eq!(cfg.task, TaskSpec::KStar { k: 2 });
        assert_eq!(cfg.budgets, vec![0.4, 0.9]);
        assert_eq!(cfg.fractions, vec![0.3, 0.7]);
        assert_eq!(cfg.alpha, 0.4);
        assert_eq!(cfg.d_tilde, DTildeSpec::Fixed(12));
        assert_eq!(cfg.repeats, 7);
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.sweep, SweepSpec::Eps1(vec![0.5, 1.0, 2.0]));
        assert!(cfg.timing);
        assert!(!cfg.resample_graph);
        assert!(!cfg.emit_raw);
    }

    #[test]
    fn defaults_fill_optional_keys() {
        let cfg = ExperimentConfig::parse("dataset=gnp:50:0.1\ntask=triangle\n").unwrap();
        assert_eq!(cfg.budgets, vec![0.5, 1.0]);
        assert_eq!(cfg.fractions, vec![0.2, 0.8]);
        assert_eq!(cfg.alpha, 0.5);
        assert_eq!(cfg.d_tilde, DTildeSpec::MaxDegree);
        assert_eq!(cfg.repeats, 100);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.sweep, SweepSpec::None);
    }

    #[test]
    fn rejects_malformed_configs() {
        assert!(ExperimentConfig::parse("task=triangle").is_err());
        assert!(ExperimentConfig::parse("dataset=gnp:50:0.1").is_err());
        assert!(ExperimentConfig::parse("dataset=gnp:50:0.1\ntask=triangle\nbogus=1").is_err());
        assert!(
            ExperimentConfig::parse("dataset=gnp:50:0.1\ntask=triangle\nseed=1\nseed=2").is_err()
        );
        assert!(ExperimentConfig::parse("dataset=gnp:50:0.1\ntask=triangle\nrepeats=0").is_err());
        assert!(ExperimentConfig::parse("dataset=gnp:50\ntask=triangle").is_err());
        assert!(ExperimentConfig::parse("dataset=gnp:50:0.1\ntask=kstar").is_err());
        assert!(ExperimentConfig::parse(
            "dataset=gnp:50:0.1\ntask=triangle\nbudgets=0.5,1,2\nsweep=frac1:0.2,0.5"
        )
        .is_err());
        assert!(ExperimentConfig::parse(
            "dataset=file:x.txt\ntask=triangle\nresample_graph=true"
        )
        .is_err());
        assert!(ExperimentConfig::parse("dataset=gnp:50:0.1\ntask=triangle\nno equals").is_err());
    }

    #[test]
    fn dataset_labels() {
        assert_eq!(DatasetSpec::parse("gnp:500:0.008").unwrap().label(), "gnp:500:0.008");
        assert_eq!(DatasetSpec::parse("ba:300:4").unwrap().label(), "ba:300:4");
        assert_eq!(
            DatasetSpec::parse("file:/data/facebook.txt").unwrap().label(),
            "facebook"
        );
    }

    #[test]
    fn eps_sweep_preserves_budget_ratios() {
        let cfg = ExperimentConfig::parse(
            "dataset=gnp:50:0.1\ntask=triangle\nbudgets=0.5,1.5\nsweep=eps1:0.25,1",
        )
        .unwrap();
        let points = grid(&cfg);
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].budgets, vec![0.25, 0.75]);
        assert_eq!(points[1].budgets, vec![1.0, 3.0]);
    }

    #[test]
    fn output_is_byte_stable() {
        let text = "dataset=gnp:60:0.1\ntask=kstar:2\nrepeats=5\nseed=7\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.csv, b.csv);
        assert!(a.warnings.is_empty());
    }

    #[test]
    fn header_and_row_shape_are_pinned() {
        let cfg =
            ExperimentConfig::parse("dataset=gnp:40:0.15\ntask=triangle\nrepeats=3\n").unwrap();
        let out = run_experiment(&cfg).unwrap();
        let mut lines = out.csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "task,dataset,n,k,eps1,eps2,alpha,frac1,method,true_count,mean_est,mse,mre,repeats,seed,wall_ms"
        );
        let fine = lines.next().unwrap();
        let unif = lines.next().unwrap();
        assert!(lines.next().is_none());
        let cols: Vec<&str> = fine.split(',').collect();
        assert_eq!(cols.len(), 16);
        assert_eq!(cols[0], "triangle");
        assert_eq!(cols[1], "gnp:40:0.15");
        assert_eq!(cols[2], "40");
        assert_eq!(cols[3], "");
        assert_eq!(cols[4], "0.5");
        assert_eq!(cols[5], "1");
        assert_eq!(cols[6], "0.5");
        assert_eq!(cols[7], "0.2");
        assert_eq!(cols[8], "fine");
        assert_eq!(cols[13], "3");
        assert_eq!(cols[14], "42");
        assert_eq!(cols[15], "0");
        assert_eq!(unif.split(',').nth(8).unwrap(), "uniform");
    }

    #[test]
    fn zero_truth_yields_nan_metrics_and_a_warning() {
        let cfg = ExperimentConfig::parse(
            "dataset=gnp:30:0\ntask=triangle\nrepeats=2\nemit_raw=true\n",
        )
        .unwrap();
        let out = run_experiment(&cfg).unwrap();
        assert_eq!(out.warnings.len(), 1);
        let row = out.csv.lines().nth(1).unwrap();
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[11], "NaN");
        assert_eq!(cols[12], "NaN");
        assert_eq!(cols.len(), 17);
        let raw: f64 = cols[16].parse().unwrap();
        assert!(raw.is_finite());
    }

    #[test]
    fn kstar_rows_leave_alpha_blank() {
        let cfg =
            ExperimentConfig::parse("dataset=gnp:40:0.1\ntask=kstar:3\nrepeats=2\n").unwrap();
        let out = run_experiment(&cfg).unwrap();
        let cols: Vec<&str> = out.csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(cols[3], "3");
        assert_eq!(cols[6], "");
    }

    #[test]
    fn sample_sweep_reports_each_size() {
        let cfg = ExperimentConfig::parse(
            "dataset=gnp:80:0.1\ntask=kstar:2\nrepeats=2\nsweep=n:20,40\n",
        )
        .unwrap();
        let out = run_experiment(&cfg).unwrap();
        let sizes: Vec<&str> = out
            .csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(2).unwrap())
            .collect();
        assert_eq!(sizes, vec!["20", "20", "40", "40"]);
    }

    #[test]
    fn frac_sweep_varies_the_strict_share() {
        let cfg = ExperimentConfig::parse(
            "dataset=gnp:60:0.1\ntask=triangle\nrepeats=2\nsweep=frac1:0.1,0.9\n",
        )
        .unwrap();
        let out = run_experiment(&cfg).unwrap();
        let fracs: Vec<&str> = out
            .csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(7).unwrap())
            .collect();
        assert_eq!(fracs, vec!["0.1", "0.1", "0.9", "0.9"]);
    }

    #[test]
    fn resampling_changes_the_graph_but_stays_deterministic() {
        let text = "dataset=gnp:50:0.1\ntask=kstar:2\nrepeats=4\nresample_graph=true\nemit_raw=true\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(a.csv, b.csv);
    }

    #[test]
    fn file_dataset_round_trips_through_the_loader() {
        let dir = std::env::temp_dir().join("fgrdp-exp-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("toy.txt");
        std::fs::write(&path, "0 1\n1 2\n2 0\n").unwrap();
        let spec = DatasetSpec::File(path.clone());
        let g = spec.materialize(0).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(exact_triangle_count(&g), 1);
        assert_eq!(spec.label(), "toy");
        std::fs::remove_file(path).ok();
    }
}
