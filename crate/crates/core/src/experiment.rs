//! Side-by-side comparisons: commutation on/off, c-arch vs t-arch, smart vs
//! naive placement.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arch::ArchKind;
use crate::circuit::{build_qodg, Circuit};
use crate::pipeline::{run_pipeline, PipelineError, PlacementMode, RunConfig};
use crate::schedule::schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompareMode {
    Commutation,
    Arch,
    Placement,
}

impl FromStr for CompareMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "commutation" => Ok(CompareMode::Commutation),
            "arch" => Ok(CompareMode::Arch),
            "placement" => Ok(CompareMode::Placement),
            other => Err(format!("unknown comparison mode `{other}`")),
        }
    }
}

impl fmt::Display for CompareMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CompareMode::Commutation => "commutation",
            CompareMode::Arch => "arch",
            CompareMode::Placement => "placement",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub benchmark: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub mode: CompareMode,
    pub columns: Vec<String>,
    pub rows: Vec<ComparisonRow>,
}

/// `(before - after) / before` in percent; zero when `before` is zero.
pub fn reduction_pct(before: f64, after: f64) -> f64 {
    if before == 0.0 {
        0.0
    } else {
        100.0 * (before - after) / before
    }
}

impl ComparisonTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }

    pub fn mean(&self, name: &str) -> Option<f64> {
        let col = self.column(name)?;
        if col.is_empty() {
            return None;
        }
        Some(col.iter().sum::<f64>() / col.len() as f64)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["benchmark".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).expect("in-memory write");
        for r in &self.rows {
            let mut rec = vec![r.benchmark.clone()];
            rec.extend(r.values.iter().map(|v| format_value(*v)));
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 records")
    }

    pub fn to_text(&self) -> String {
        let mut cells = vec![{
            let mut h = vec!["benchmark".to_string()];
            h.extend(self.columns.iter().cloned());
            h
        }];
        for r in &self.rows {
            let mut line = vec![r.benchmark.clone()];
            line.extend(r.values.iter().map(|v| format_value(*v)));
            cells.push(line);
        }
        if !self.rows.is_empty() {
            let mut line = vec!["mean".to_string()];
            for c in &self.columns {
                line.push(format!("{:.2}", self.mean(c).unwrap_or(0.0)));
            }
            cells.push(line);
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|k| cells.iter().map(|l| l[k].len()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in cells {
            let parts: Vec<String> = line
                .iter()
                .zip(&widths)
                .enumerate()
                .map(|(k, (s, w))| if k == 0 { format!("{s:<w$}") } else { format!("{s:>w$}") })
                .collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        }
        out
    }
}

fn format_value(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        format!("{v:.2}")
    }
}

fn columns(mode: CompareMode) -> Vec<String> {
    let names: &[&str] = match mode {
        CompareMode::Commutation => &["latency_off", "latency_on", "gain_pct"],
        CompareMode::Arch => &[
            "op_overhead_c",
            "op_overhead_t",
            "op_reduction_pct",
            "lat_overhead_c",
            "lat_overhead_t",
            "lat_reduction_pct",
        ],
        CompareMode::Placement => &[
            "swaps_naive",
            "swaps_smart",
            "swap_reduction_pct",
            "latency_naive",
            "latency_smart",
            "latency_reduction_pct",
        ],
    };
    names.iter().map(|s| s.to_string()).collect()
}

/// Runs `mode` over every circuit with `cfg` as the base setting. Overheads
/// are reported in percent.
pub fn compare_experiment(
    mode: CompareMode,
    circuits: &[(String, Circuit)],
    cfg: &RunConfig,
) -> Result<ComparisonTable, PipelineError> {
    let mut rows = Vec::with_capacity(circuits.len());
    for (name, c) in circuits {
        let values = match mode {
            CompareMode::Commutation => {
                let tm = cfg.timing()?;
                let g = build_qodg(c);
                let mut p = cfg.policy();
                p.commutation = false;
                let off = schedule(&g, &tm, &p)?.makespan as f64;
                p.commutation = true;
                let on = schedule(&g, &tm, &p)?.makespan as f64;
                vec![off, on, reduction_pct(off, on)]
            }
            CompareMode::Arch => {
                let run = |arch| {
                    let mut k = cfg.clone();
                    k.arch = arch;
                    run_pipeline(name, c, &k).map(|o| o.report)
                };
                let rc = run(ArchKind::Checkerboard)?;
                let rt = run(ArchKind::TileBased)?;
                let (oc, ot) = (100.0 * rc.operation_overhead, 100.0 * rt.operation_overhead);
                let (lc, lt) = (100.0 * rc.latency_overhead, 100.0 * rt.latency_overhead);
                vec![oc, ot, reduction_pct(oc, ot), lc, lt, reduction_pct(lc, lt)]
            }
            CompareMode::Placement => {
                let run = |placement| {
                    let mut k = cfg.clone();
                    k.placement = placement;
                    run_pipeline(name, c, &k).map(|o| o.report)
                };
                let rn = run(PlacementMode::Naive)?;
                let rs = run(PlacementMode::Smart)?;
                let (sn, ss) = (rn.n_swaps as f64, rs.n_swaps as f64);
                let (ln, ls) = (rn.l_r as f64, rs.l_r as f64);
                vec![sn, ss, reduction_pct(sn, ss), ln, ls, reduction_pct(ln, ls)]
            }
        };
        log::info!("{mode} {name}: {values:?}");
        rows.push(ComparisonRow {
            benchmark: name.clone(),
            values,
        });
    }
    Ok(ComparisonTable {
        mode,
        columns: columns(mode),
        rows,
    })
}
