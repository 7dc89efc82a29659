//! Benchmark harness: runs instance/configuration pairs over several seeds
//! and aggregates times with the shifted geometric mean.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::bnb::{solve, PrehandleChoice, ShcFlags, SolveConfig, SolveStatus};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::instances::builtin;
use crate::io::read_instance;
use crate::prehandle::Placement;

/// `(∏ (t_i + 1))^{1/n} − 1`, computed in log space; `0` for no values.
pub fn shifted_geomean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mean = values.iter().map(|t| (t + 1.0).ln()).sum::<f64>() / values.len() as f64;
    mean.exp() - 1.0
}

/// A built-in instance name or a path to an instance file.
pub fn load_instance(name: &str, base: Option<&Path>) -> Result<Instance> {
    if let Some(inst) = builtin(name) {
        return Ok(inst);
    }
    let path = match base {
        Some(b) if Path::new(name).is_relative() => b.join(name),
        _ => PathBuf::from(name),
    };
    if !path.exists() {
        return Err(Error::InvalidInstance(format!("no built-in instance or file named {name:?}")));
    }
    read_instance(&path)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigSpec {
    pub name: String,
    #[serde(default = "default_shc")]
    pub shc: String,
    #[serde(default = "default_prehandle")]
    pub prehandle: String,
    #[serde(default = "default_placement")]
    pub placement: String,
    #[serde(default)]
    pub isoprune: bool,
}

fn default_shc() -> String {
    "none".into()
}

fn default_prehandle() -> String {
    "branching".into()
}

fn default_placement() -> String {
    "first".into()
}

pub fn parse_placement(s: &str) -> Result<Placement> {
    match s {
        "first" => Ok(Placement::First),
        "median" => Ok(Placement::Median),
        other => Err(Error::InvalidConfig(format!("unknown placement {other:?}"))),
    }
}

impl ConfigSpec {
    pub fn to_config(&self) -> Result<SolveConfig> {
        let mut shc = ShcFlags::parse(&self.shc)?;
        shc.isoprune |= self.isoprune;
        let mut cfg = SolveConfig::with_shc(shc);
        cfg.prehandle = PrehandleChoice::parse(&self.prehandle)?;
        cfg.placement = parse_placement(&self.placement)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub instances: Vec<String>,
    pub configs: Vec<ConfigSpec>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// Seconds per solve.
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
}

fn default_seeds() -> Vec<u64> {
    vec![0, 1, 2]
}

fn default_time_limit() -> f64 {
    60.0
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// One solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Run {
    pub instance: String,
    pub config: String,
    pub seed: u64,
    pub status: String,
    pub objective: Option<f64>,
    pub nodes: u64,
    /// Seconds, capped at the time limit for unsolved runs.
    pub time: f64,
    pub sym_time: f64,
}

/// Averages over seeds of one instance/configuration pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairResult {
    pub instance: String,
    pub config: String,
    pub solved: bool,
    pub time: f64,
    pub sym_time: f64,
    pub nodes: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub subset: &'static str,
    pub config: String,
    pub instances: usize,
    pub solved: usize,
    pub time: f64,
    pub sym_time: f64,
    pub nodes: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub runs: Vec<Run>,
    pub pairs: Vec<PairResult>,
    pub rows: Vec<BenchRow>,
}

pub fn run_bench(manifest: &Manifest, base: Option<&Path>) -> Result<BenchResult> {
    let instances: Vec<Instance> = manifest.instances.iter().map(|n| load_instance(n, base)).collect::<Result<_>>()?;
    let configs: Vec<(String, SolveConfig)> =
        manifest.configs.iter().map(|c| Ok((c.name.clone(), c.to_config()?))).collect::<Result<_>>()?;
    let limit = manifest.time_limit;
    let mut runs = Vec::new();
    let mut pairs = Vec::new();
    for (label, inst) in manifest.instances.iter().zip(&instances) {
        for (cname, base_cfg) in &configs {
            let mut group = Vec::new();
            for &seed in &manifest.seeds {
                let mut cfg = base_cfg.clone();
                cfg.seed = seed;
                cfg.time_limit = Some(Duration::from_secs_f64(limit));
                let res = solve(inst, &cfg)?;
                let solved = res.status != SolveStatus::LimitReached;
                let time = if solved { res.wall_time.as_secs_f64().min(limit) } else { limit };
                group.push(Run {
                    instance: label.clone(),
                    config: cname.clone(),
                    seed,
                    status: res.status.label().into(),
                    objective: res.objective,
                    nodes: res.stats.nodes,
                    time,
                    sym_time: res.sym_time.as_secs_f64(),
                });
            }
            let k = group.len().max(1) as f64;
            pairs.push(PairResult {
                instance: label.clone(),
                config: cname.clone(),
                solved: group.iter().all(|r| r.status != SolveStatus::LimitReached.label()),
                time: group.iter().map(|r| r.time).sum::<f64>() / k,
                sym_time: group.iter().map(|r| r.sym_time).sum::<f64>() / k,
                nodes: group.iter().map(|r| r.nodes as f64).sum::<f64>() / k,
            });
            runs.extend(group);
        }
    }
    let names: Vec<String> = configs.iter().map(|c| c.0.clone()).collect();
    let rows = aggregate(&pairs, &manifest.instances, &names);
    Ok(BenchResult { runs, pairs, rows })
}

/// Rows for the subsets "all", "solved by some configuration" and "solved by all".
pub fn aggregate(pairs: &[PairResult], instances: &[String], configs: &[String]) -> Vec<BenchRow> {
    let mut solved_by: BTreeMap<&str, usize> = BTreeMap::new();
    for p in pairs.iter().filter(|p| p.solved) {
        *solved_by.entry(p.instance.as_str()).or_default() += 1;
    }
    let count = |i: &str| solved_by.get(i).copied().unwrap_or(0);
    let mut rows = Vec::new();
    for subset in ["all", "some", "all-solved"] {
        let keep = |i: &str| match subset {
            "some" => count(i) > 0,
            "all-solved" => count(i) == configs.len(),
            _ => true,
        };
        let members: Vec<&String> = instances.iter().filter(|i| keep(i)).collect();
        for c in configs {
            let sel: Vec<&PairResult> =
                pairs.iter().filter(|p| &p.config == c && members.contains(&&p.instance)).collect();
            let col = |f: fn(&PairResult) -> f64| shifted_geomean(&sel.iter().map(|p| f(p)).collect::<Vec<_>>());
            rows.push(BenchRow {
                subset,
                config: c.clone(),
                instances: sel.len(),
                solved: sel.iter().filter(|p| p.solved).count(),
                time: col(|p| p.time),
                sym_time: col(|p| p.sym_time),
                nodes: col(|p| p.nodes),
            });
        }
    }
    rows
}

pub fn format_table(rows: &[BenchRow]) -> String {
    let width = rows.iter().map(|r| r.config.len()).max().unwrap_or(6).max(6);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<10} {:<width$} {:>5} {:>6} {:>12} {:>12} {:>12}",
        "subset", "config", "#", "solved", "time", "sym-time", "nodes"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<10} {:<width$} {:>5} {:>6} {:>12.4} {:>12.4} {:>12.1}",
            r.subset, r.config, r.instances, r.solved, r.time, r.sym_time, r.nodes
        );
    }
    s
}

pub fn write_csv(runs: &[Run], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in runs {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geomean_closed_forms() {
        assert!((shifted_geomean(&[1.0, 1.0, 1.0]) - 1.0).abs() < 1e-12);
        assert!((shifted_geomean(&[0.0, 3.0]) - 1.0).abs() < 1e-12);
        assert_eq!(shifted_geomean(&[]), 0.0);
    }

    #[test]
    fn subsets_follow_solved_status() {
        let pair = |i: &str, c: &str, solved: bool, time: f64| PairResult {
            instance: i.into(),
            config: c.into(),
            solved,
            time,
            sym_time: 0.0,
            nodes: 1.0,
        };
        let pairs = vec![
            pair("a", "x", true, 1.0),
            pair("a", "y", true, 3.0),
            pair("b", "x", false, 10.0),
            pair("b", "y", true, 2.0),
            pair("c", "x", false, 10.0),
            pair("c", "y", false, 10.0),
        ];
        let inst: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
        let cfgs: Vec<String> = ["x", "y"].map(String::from).to_vec();
        let rows = aggregate(&pairs, &inst, &cfgs);
        let get = |s: &str, c: &str| rows.iter().find(|r| r.subset == s && r.config == c).unwrap();
        assert_eq!(get("all", "x").instances, 3);
        assert_eq!(get("some", "x").instances, 2);
        assert_eq!(get("all-solved", "y").instances, 1);
        assert!((get("all-solved", "y").time - 3.0).abs() < 1e-12);
    }
}
