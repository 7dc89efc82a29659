use std::fmt::Write;

use crate::instance::Instance;

use super::{SolveConfig, SolveResult, Source};

fn num(v: f64) -> String {
    let r = (v * 1e6).round() / 1e6;
    format!("{}", r + 0.0)
}

/// Human-readable solve summary. Only the first line carries timings; the
/// remainder is identical across runs with the same input and configuration.
pub fn format_report(inst: &Instance, cfg: &SolveConfig, res: &SolveResult) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# symmkit solve report wall_time={:.6} sym_time={:.6}",
        res.wall_time.as_secs_f64(),
        res.sym_time.as_secs_f64()
    );
    let _ = writeln!(s, "instance: {}", inst.name);
    let _ = writeln!(s, "variables: {}", inst.n());
    let _ = writeln!(s, "constraints: {}", inst.cons.len());
    let _ = writeln!(s, "symmetry: {}", cfg.shc.label());
    let _ = writeln!(s, "prehandling: {}", cfg.prehandle.label());
    for (k, c) in res.components.iter().enumerate() {
        let _ = writeln!(s, "component {}: {} vars, {}", k + 1, c.support.len(), c.label);
    }
    for note in &res.notices {
        let _ = writeln!(s, "notice: {note}");
    }
    let _ = writeln!(s, "status: {}", res.status.label());
    match res.objective {
        Some(v) => {
            let _ = writeln!(s, "objective: {}", num(v));
        }
        None => {
            let _ = writeln!(s, "objective: none");
        }
    }
    let st = &res.stats;
    let _ = writeln!(s, "nodes: {}", st.nodes);
    let _ = writeln!(s, "leaves: {}", st.leaves);
    let _ = writeln!(
        s,
        "pruned: infeasible={} bound={} symmetry={}",
        st.pruned_infeasible, st.pruned_bound, st.pruned_symmetry
    );
    if st.open > 0 {
        let _ = writeln!(s, "open: {}", st.open);
    }
    let red: Vec<String> = Source::ALL
        .iter()
        .map(|src| format!("{}={}", src.label(), st.reductions.get(src).copied().unwrap_or(0)))
        .collect();
    let _ = writeln!(s, "reductions: {}", red.join(" "));
    if let Some(x) = &res.solution {
        let vals: Vec<String> = x.iter().map(|&v| num(v)).collect();
        let _ = writeln!(s, "solution: {}", vals.join(" "));
    }
    s
}
