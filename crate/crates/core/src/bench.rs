//! Seeded synthetic experiments.
//!
//! Each trial draws a fresh data set from its own random stream, runs every
//! configured method on every (k, demand) cell and records the achieved
//! diversity (S-Model) or exact window probability (T-Model) together with
//! wall time. Trials run in parallel; the report is assembled in trial order
//! and is identical across runs apart from the wall-time column.

use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pbd::DemandWindow;
use crate::seed;
use crate::smodel::{self, SimilarityMatrix};
use crate::tmodel::{self, CandidatePool, Method, SaObjective, SaParams, Worker};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 9] =
    ["trial", "method", "k", "theta1", "theta0", "objective", "tau_or_div", "wall_time_s", "status"];

const SIMILARITY_NORMAL: (f64, f64) = (-0.5, 0.15);
const OPINION_NORMAL: (f64, f64) = (0.5, 0.1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Smodel,
    Tmodel,
}

/// Sampling law for synthetic similarities or opinions. Normal draws are
/// clamped to the valid range; omitted parameters take model-specific defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DistributionSpec {
    #[default]
    Uniform,
    Normal {
        #[serde(default)]
        mean: Option<f64>,
        #[serde(default)]
        stddev: Option<f64>,
    },
}

impl DistributionSpec {
    fn normal(&self, defaults: (f64, f64)) -> Result<Option<Normal<f64>>> {
        match *self {
            DistributionSpec::Uniform => Ok(None),
            DistributionSpec::Normal { mean, stddev } => {
                let (m, s) = (mean.unwrap_or(defaults.0), stddev.unwrap_or(defaults.1));
                Normal::new(m, s).map(Some).map_err(|e| Error::param(format!("normal({m}, {s}): {e}")))
            }
        }
    }
}

/// A demand cell: fixed thresholds, or fractions of k rounded down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DemandRule {
    Fixed { theta1: usize, theta0: usize },
    Ratio { theta1_ratio: [usize; 2], theta0_ratio: [usize; 2] },
}

impl DemandRule {
    pub fn resolve(&self, k: usize) -> Result<(usize, usize)> {
        match *self {
            DemandRule::Fixed { theta1, theta0 } => Ok((theta1, theta0)),
            DemandRule::Ratio { theta1_ratio: [a, b], theta0_ratio: [c, d] } => {
                if b == 0 || d == 0 {
                    return Err(Error::param("demand ratio has a zero denominator"));
                }
                Ok((k * a / b, k * c / d))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaSchedule {
    pub t_ini: f64,
    pub t_end: f64,
    pub r: u32,
    pub c: f64,
}

impl Default for SaSchedule {
    fn default() -> Self {
        let d = SaParams::default();
        SaSchedule { t_ini: d.t_ini, t_end: d.t_end, r: d.r, c: d.c }
    }
}

impl SaSchedule {
    pub fn params(&self, seed: u64) -> SaParams {
        SaParams { t_ini: self.t_ini, t_end: self.t_end, r: self.r, c: self.c, seed }
    }
}

fn default_budget() -> f64 {
    500.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelKind,
    pub n: usize,
    pub trials: usize,
    #[serde(default)]
    pub distribution: DistributionSpec,
    pub k: Vec<usize>,
    /// Ignored by the S-Model.
    #[serde(default)]
    pub demands: Vec<DemandRule>,
    pub methods: Vec<String>,
    pub seed: u64,
    #[serde(default)]
    pub sa: SaSchedule,
    /// Per-cell wall-time budget of the exact method, in seconds.
    #[serde(default = "default_budget")]
    pub exact_time_budget_s: f64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.n == 0 || (self.model == ModelKind::Smodel && self.n < 2) {
            return Err(Error::param(format!("pool size {} is too small", self.n)));
        }
        if self.k.is_empty() {
            return Err(Error::param("at least one k value is required"));
        }
        if self.model == ModelKind::Tmodel && self.demands.is_empty() {
            return Err(Error::param("T-Model experiments need at least one demand"));
        }
        if self.exact_time_budget_s.is_nan() || self.exact_time_budget_s <= 0.0 {
            return Err(Error::param("exact_time_budget_s must be positive"));
        }
        self.sa.params(0).validate()?;
        for m in &self.methods {
            parse_method(self.model, m)?;
        }
        let probe = match self.distribution {
            DistributionSpec::Uniform => Ok(None),
            d => d.normal((0.0, 1.0)),
        };
        probe.map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AnyMethod {
    Greedy,
    SExact,
    SRandom,
    T(Method),
}

fn parse_method(model: ModelKind, tag: &str) -> Result<AnyMethod> {
    match model {
        ModelKind::Smodel => match tag {
            "exact" => Ok(AnyMethod::SExact),
            "greedy" => Ok(AnyMethod::Greedy),
            "random" => Ok(AnyMethod::SRandom),
            _ => Err(Error::param(format!("unknown S-Model method {tag:?}"))),
        },
        ModelKind::Tmodel => Method::from_str(tag).map(AnyMethod::T),
    }
}

/// Symmetric matrix with off-diagonal entries in `[-1, 0]`.
pub fn gen_similarity_matrix(n: usize, dist: &DistributionSpec, seed: u64) -> Result<SimilarityMatrix> {
    if n < 2 {
        return Err(Error::param(format!("need at least 2 workers, got {n}")));
    }
    let normal = dist.normal(SIMILARITY_NORMAL)?;
    let mut rng = seed::rng(seed);
    SimilarityMatrix::from_fn(n, |_, _| match &normal {
        None => -rng.random::<f64>(),
        Some(d) => d.sample(&mut rng).clamp(-1.0, 0.0),
    })
}

/// Pool of `n` workers with ids `0..n`.
pub fn gen_opinions(n: usize, dist: &DistributionSpec, seed: u64) -> Result<CandidatePool> {
    if n == 0 {
        return Err(Error::Empty("candidate pool"));
    }
    let normal = dist.normal(OPINION_NORMAL)?;
    let mut rng = seed::rng(seed);
    let workers = (0..n)
        .map(|i| {
            let p = match &normal {
                None => rng.random::<f64>(),
                Some(d) => d.sample(&mut rng).clamp(0.0, 1.0),
            };
            Worker { id: i.to_string(), p }
        })
        .collect();
    CandidatePool::new(workers)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRow {
    pub trial: usize,
    pub method: String,
    pub k: usize,
    pub theta1: Option<usize>,
    pub theta0: Option<usize>,
    pub objective: Option<f64>,
    pub tau_or_div: Option<f64>,
    pub wall_time_s: Option<f64>,
    pub status: String,
}

impl TrialRow {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct TrialReport {
    pub rows: Vec<TrialRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub method: String,
    pub k: usize,
    pub theta1: Option<usize>,
    pub theta0: Option<usize>,
    pub n_ok: usize,
    pub n_failed: usize,
    pub mean_tau_or_div: Option<f64>,
    pub std_tau_or_div: Option<f64>,
    pub mean_wall_time_s: Option<f64>,
    pub std_wall_time_s: Option<f64>,
}

fn mean_std(xs: &[f64]) -> (Option<f64>, Option<f64>) {
    if xs.is_empty() {
        return (None, None);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (Some(mean), Some(var.sqrt()))
}

impl TrialReport {
    pub fn to_csv(&self) -> String {
        let opt_usize = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let opt_f64 = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(CSV_HEADER).expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.trial.to_string(),
                r.method.clone(),
                r.k.to_string(),
                opt_usize(r.theta1),
                opt_usize(r.theta0),
                opt_f64(r.objective),
                opt_f64(r.tau_or_div),
                opt_f64(r.wall_time_s),
                r.status.clone(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }

    /// Per (method, k, theta1, theta0) means and sample standard deviations
    /// over successful rows, in order of first appearance.
    pub fn summary(&self) -> Vec<SummaryRow> {
        type Key = (String, usize, Option<usize>, Option<usize>);
        let mut groups: Vec<(Key, Vec<&TrialRow>)> = Vec::new();
        for r in &self.rows {
            let key = (r.method.clone(), r.k, r.theta1, r.theta0);
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, v)) => v.push(r),
                None => groups.push((key, vec![r])),
            }
        }
        groups
            .into_iter()
            .map(|((method, k, theta1, theta0), rows)| {
                let ok: Vec<&TrialRow> = rows.iter().copied().filter(|r| r.is_ok()).collect();
                let vals: Vec<f64> = ok.iter().filter_map(|r| r.tau_or_div).collect();
                let times: Vec<f64> = ok.iter().filter_map(|r| r.wall_time_s).collect();
                let (mean_v, std_v) = mean_std(&vals);
                let (mean_t, std_t) = mean_std(&times);
                SummaryRow {
                    method,
                    k,
                    theta1,
                    theta0,
                    n_ok: ok.len(),
                    n_failed: rows.len() - ok.len(),
                    mean_tau_or_div: mean_v,
                    std_tau_or_div: std_v,
                    mean_wall_time_s: mean_t,
                    std_wall_time_s: std_t,
                }
            })
            .collect()
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes")
    }

    /// Mean achieved value of one method across all successful rows.
    pub fn mean_of(&self, method: &str) -> Option<f64> {
        let vals: Vec<f64> =
            self.rows.iter().filter(|r| r.method == method && r.is_ok()).filter_map(|r| r.tau_or_div).collect();
        mean_std(&vals).0
    }
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrialReport> {
    cfg.validate()?;
    let methods: Vec<(String, AnyMethod)> =
        cfg.methods.iter().map(|m| parse_method(cfg.model, m).map(|a| (m.clone(), a))).collect::<Result<_>>()?;
    if methods.is_empty() {
        return Ok(TrialReport::default());
    }
    let per_trial: Vec<Result<Vec<TrialRow>>> =
        (0..cfg.trials).into_par_iter().map(|trial| run_trial(cfg, &methods, trial)).collect();
    let mut rows = Vec::new();
    for r in per_trial {
        rows.extend(r?);
    }
    Ok(TrialReport { rows })
}

fn run_trial(cfg: &ExperimentConfig, methods: &[(String, AnyMethod)], trial: usize) -> Result<Vec<TrialRow>> {
    let data_seed = seed::derive(cfg.seed, trial as u64);
    let budget = Duration::from_secs_f64(cfg.exact_time_budget_s);
    let mut rows = Vec::new();
    let mut cell: u64 = 0;
    match cfg.model {
        ModelKind::Smodel => {
            let m = gen_similarity_matrix(cfg.n, &cfg.distribution, data_seed)?;
            for &k in &cfg.k {
                for (tag, method) in methods {
                    cell += 1;
                    let run_seed = seed::derive(data_seed, cell);
                    let started = Instant::now();
                    let outcome = match method {
                        AnyMethod::SExact => smodel::exact_select_until(&m, k, Some(started + budget)),
                        AnyMethod::Greedy => smodel::greedy_select(&m, k),
                        AnyMethod::SRandom => smodel::random_select(&m, k, run_seed),
                        AnyMethod::T(_) => unreachable!("validated against the model"),
                    };
                    let elapsed = started.elapsed().as_secs_f64();
                    let row = |objective, value, wall, status: String| TrialRow {
                        trial,
                        method: tag.clone(),
                        k,
                        theta1: None,
                        theta0: None,
                        objective,
                        tau_or_div: value,
                        wall_time_s: wall,
                        status,
                    };
                    rows.push(match outcome.and_then(|c| smodel::diversity(&c, &m)) {
                        Ok(div) => row(Some(div), Some(div), Some(elapsed), "ok".into()),
                        Err(e) => row(None, None, None, status_of(&e)),
                    });
                }
            }
        }
        ModelKind::Tmodel => {
            let pool = gen_opinions(cfg.n, &cfg.distribution, data_seed)?;
            for &k in &cfg.k {
                for rule in &cfg.demands {
                    let (theta1, theta0) = rule.resolve(k)?;
                    let window = DemandWindow::new(k, theta1, theta0);
                    for (tag, method) in methods {
                        cell += 1;
                        let run_seed = seed::derive(data_seed, cell);
                        let row = |objective, value, wall, status: String| TrialRow {
                            trial,
                            method: tag.clone(),
                            k,
                            theta1: Some(theta1),
                            theta0: Some(theta0),
                            objective,
                            tau_or_div: value,
                            wall_time_s: wall,
                            status,
                        };
                        let w = match &window {
                            Ok(w) => w,
                            Err(e) => {
                                rows.push(row(None, None, None, status_of(e)));
                                continue;
                            }
                        };
                        let AnyMethod::T(method) = *method else { unreachable!("validated against the model") };
                        let started = Instant::now();
                        let outcome = run_tmodel(&pool, w, method, &cfg.sa, run_seed, started + budget);
                        rows.push(match outcome {
                            Ok(r) => row(Some(r.objective), Some(r.tau), Some(r.wall_time), "ok".into()),
                            Err(e) => row(None, None, None, status_of(&e)),
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn run_tmodel(
    pool: &CandidatePool,
    w: &DemandWindow,
    method: Method,
    sa: &SaSchedule,
    seed: u64,
    deadline: Instant,
) -> Result<tmodel::SelectionResult> {
    match method {
        Method::Exact => tmodel::exact_select_until(pool, w, Some(deadline)),
        Method::Poisson => tmodel::select_poisson(pool, w),
        Method::Binomial => tmodel::select_binomial(pool, w),
        Method::NormalSa => tmodel::sa_select(pool, w, SaObjective::Normal, &sa.params(seed)),
        Method::DftcfSa => tmodel::sa_select(pool, w, SaObjective::Dftcf, &sa.params(seed)),
        Method::Random => tmodel::random_select(pool, w, seed),
    }
}

fn status_of(e: &Error) -> String {
    match e {
        Error::Timeout => "timeout".into(),
        Error::EnumerationGuard { .. } => "skipped: enumeration guard".into(),
        Error::InfeasibleDemand { .. } => "skipped: theta1 + theta0 > k".into(),
        other => format!("error: {other}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tcfg(methods: &[&str]) -> ExperimentConfig {
        ExperimentConfig {
            model: ModelKind::Tmodel,
            n: 12,
            trials: 3,
            distribution: DistributionSpec::Uniform,
            k: vec![4],
            demands: vec![DemandRule::Fixed { theta1: 1, theta0: 1 }],
            methods: methods.iter().map(|s| s.to_string()).collect(),
            seed: 5,
            sa: SaSchedule { r: 50, ..SaSchedule::default() },
            exact_time_budget_s: 500.0,
        }
    }

    #[test]
    fn generators_are_seeded_and_in_range() {
        let a = gen_similarity_matrix(20, &DistributionSpec::Uniform, 1).unwrap();
        assert_eq!(a, gen_similarity_matrix(20, &DistributionSpec::Uniform, 1).unwrap());
        assert!(a.upper_triangle().all(|x| (-1.0..=0.0).contains(&x)));
        let normal = DistributionSpec::Normal { mean: None, stddev: None };
        let b = gen_similarity_matrix(20, &normal, 1).unwrap();
        assert!(b.upper_triangle().all(|x| (-1.0..=0.0).contains(&x)));
        assert!(gen_similarity_matrix(1, &normal, 1).is_err());

        let p = gen_opinions(50, &normal, 4).unwrap();
        assert_eq!(p, gen_opinions(50, &normal, 4).unwrap());
        assert!(p.workers().iter().all(|w| (0.0..=1.0).contains(&w.p)));
        assert!(gen_opinions(0, &normal, 4).is_err());
    }

    #[test]
    fn generator_moments() {
        let m = gen_similarity_matrix(1000, &DistributionSpec::Uniform, 2).unwrap();
        let vals: Vec<f64> = m.upper_triangle().collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        assert!((-0.52..=-0.48).contains(&mean), "{mean}");

        let p = gen_opinions(10_000, &DistributionSpec::Uniform, 3).unwrap().probs();
        let mean = p.iter().sum::<f64>() / p.len() as f64;
        assert!((0.49..=0.51).contains(&mean), "{mean}");

        let normal = DistributionSpec::Normal { mean: Some(0.5), stddev: Some(0.1) };
        let p = gen_opinions(10_000, &normal, 3).unwrap().probs();
        let inside = p.iter().filter(|x| (0.2..=0.8).contains(*x)).count();
        assert!(inside as f64 >= 0.99 * p.len() as f64);
    }

    #[test]
    fn ratio_demands_round_down() {
        let third = DemandRule::Ratio { theta1_ratio: [1, 3], theta0_ratio: [1, 3] };
        assert_eq!(third.resolve(10).unwrap(), (3, 3));
        assert_eq!(third.resolve(2).unwrap(), (0, 0));
        let bad = DemandRule::Ratio { theta1_ratio: [4, 5], theta0_ratio: [3, 5] };
        assert_eq!(bad.resolve(10).unwrap(), (8, 6));
    }

    #[test]
    fn infeasible_cells_are_reported_and_skipped() {
        let mut cfg = tcfg(&["random", "poisson"]);
        cfg.demands.push(DemandRule::Ratio { theta1_ratio: [4, 5], theta0_ratio: [3, 5] });
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.rows.len(), 3 * 2 * 2);
        let skipped: Vec<_> = report.rows.iter().filter(|r| !r.is_ok()).collect();
        assert_eq!(skipped.len(), 3 * 2);
        assert!(skipped.iter().all(|r| r.status.starts_with("skipped") && r.tau_or_div.is_none()));
    }

    #[test]
    fn empty_method_list() {
        let report = run_experiment(&tcfg(&[])).unwrap();
        assert!(report.rows.is_empty());
        assert_eq!(report.to_csv().lines().count(), 1);
        assert!(report.summary().is_empty());
    }

    #[test]
    fn reports_are_reproducible() {
        let cfg = tcfg(&["exact", "poisson", "binomial", "normal-sa", "dftcf-sa", "random"]);
        let strip =
            |r: TrialReport| r.rows.into_iter().map(|row| TrialRow { wall_time_s: None, ..row }).collect::<Vec<_>>();
        let a = run_experiment(&cfg).unwrap();
        assert!(a.rows.iter().all(|r| r.is_ok() && r.wall_time_s.unwrap() >= 0.0));
        let exact = a.mean_of("exact").unwrap();
        for m in ["poisson", "binomial", "normal-sa", "dftcf-sa", "random"] {
            assert!(a.mean_of(m).unwrap() <= exact + 1e-9, "{m}");
        }
        assert_eq!(strip(a), strip(run_experiment(&cfg).unwrap()));
    }

    #[test]
    fn smodel_greedy_beats_random() {
        let cfg = ExperimentConfig {
            model: ModelKind::Smodel,
            n: 10,
            trials: 5,
            distribution: DistributionSpec::Uniform,
            k: vec![3],
            demands: vec![],
            methods: vec!["exact".into(), "greedy".into(), "random".into()],
            seed: 17,
            sa: SaSchedule::default(),
            exact_time_budget_s: 500.0,
        };
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.rows.len(), 15);
        let (exact, greedy, random) =
            (report.mean_of("exact").unwrap(), report.mean_of("greedy").unwrap(), report.mean_of("random").unwrap());
        assert!(exact >= greedy - 1e-12);
        assert!(greedy >= random);
        assert!(report.rows.iter().all(|r| r.theta1.is_none()));
    }

    #[test]
    fn dftcf_sa_beats_random() {
        let cfg = ExperimentConfig {
            n: 20,
            trials: 20,
            k: vec![8],
            demands: vec![DemandRule::Fixed { theta1: 2, theta0: 2 }],
            sa: SaSchedule::default(),
            ..tcfg(&["dftcf-sa", "random"])
        };
        let report = run_experiment(&cfg).unwrap();
        assert!(report.mean_of("dftcf-sa").unwrap() >= report.mean_of("random").unwrap());
    }

    #[test]
    fn exact_time_budget_marks_timeouts() {
        let cfg = ExperimentConfig { n: 24, k: vec![12], trials: 1, exact_time_budget_s: 1e-6, ..tcfg(&["exact"]) };
        let report = run_experiment(&cfg).unwrap();
        assert_eq!(report.rows[0].status, "timeout");
    }

    #[test]
    fn config_parsing() {
        let text = r#"{
            "model": "tmodel", "n": 30, "trials": 100, "k": [10],
            "distribution": {"kind": "normal", "mean": 0.5, "stddev": 0.2},
            "demands": [{"theta1": 3, "theta0": 3}, {"theta1_ratio": [1, 3], "theta0_ratio": [1, 3]}],
            "methods": ["exact", "poisson", "random"], "seed": 1
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.exact_time_budget_s, 500.0);
        assert_eq!(cfg.sa, SaSchedule::default());
        assert_eq!(cfg.demands.len(), 2);

        let bad_method = text.replace("\"poisson\"", "\"greedy\"");
        assert!(ExperimentConfig::from_json(&bad_method).is_err());
        let zero_trials = text.replace("\"trials\": 100", "\"trials\": 0");
        assert!(ExperimentConfig::from_json(&zero_trials).is_err());
        assert!(matches!(ExperimentConfig::from_json("{"), Err(Error::Parse { .. })));
    }

    #[test]
    fn summary_statistics() {
        let report = run_experiment(&tcfg(&["random"])).unwrap();
        let s = report.summary();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].n_ok, 3);
        let vals: Vec<f64> = report.rows.iter().map(|r| r.tau_or_div.unwrap()).collect();
        let mean = vals.iter().sum::<f64>() / 3.0;
        assert!((s[0].mean_tau_or_div.unwrap() - mean).abs() < 1e-12);
        let json: serde_json::Value = serde_json::from_str(&report.summary_json()).unwrap();
        assert_eq!(json[0]["method"], "random");
        let csv = report.to_csv();
        assert!(csv.starts_with("trial,method,k,theta1,theta0,objective,tau_or_div,wall_time_s,status\n"));
    }
}
