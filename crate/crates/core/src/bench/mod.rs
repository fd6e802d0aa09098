//! Published reference values, Table I reproduction, parameter heatmaps and
//! inverse discrepancy.

mod reference;

pub use reference::{reference_table, tuned_params, ReferenceTable, I_1500, I_200, I_2500};

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::star_discrepancy_exact;
use crate::optimize::{kronecker_objective, optimize_kronecker, OptimizerConfig};
use crate::pointset::sobol_set_from;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    PaperReference,
    Computed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRecord {
    pub method: String,
    pub n: usize,
    pub d: usize,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub citation: Option<String>,
}

/// First sequence index of the Sobol' points behind the published column.
pub const SOBOL_TABLE_START: usize = 3;

/// Columns of the d = 3 table that can be recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Column {
    Sobol,
    CmaEs,
    I200,
    I1500,
    I2500,
}

impl Column {
    pub const ALL: [Column; 5] = [
        Column::Sobol,
        Column::CmaEs,
        Column::I200,
        Column::I1500,
        Column::I2500,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Sobol => "Sobol'",
            Column::CmaEs => "CMA-ES",
            Column::I200 => "I_200",
            Column::I1500 => "I_1500",
            Column::I2500 => "I_2500",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "sobol" => Ok(Column::Sobol),
            "cmaes" => Ok(Column::CmaEs),
            "i200" => Ok(Column::I200),
            "i1500" => Ok(Column::I1500),
            "i2500" => Ok(Column::I2500),
            _ => Err(Error::InvalidInput(format!(
                "unknown column {s:?}; expected one of Sobol, CMA-ES, I_200, I_1500, I_2500"
            ))),
        }
    }

    pub fn tolerance(self) -> Tolerance {
        match self {
            Column::I2500 => Tolerance::Absolute(1e-4),
            Column::I200 | Column::I1500 => Tolerance::Absolute(2e-3),
            Column::Sobol | Column::CmaEs => Tolerance::Relative(0.3),
        }
    }

    /// Informational columns are reported but never fail a reproduction.
    pub fn informational(self) -> bool {
        matches!(self, Column::Sobol | Column::CmaEs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

impl Tolerance {
    pub fn accepts(self, computed: f64, reference: f64) -> bool {
        let delta = (computed - reference).abs();
        match self {
            Tolerance::Absolute(t) => delta <= t,
            Tolerance::Relative(t) => delta <= t * reference.abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Cell {
    pub method: String,
    pub n: usize,
    pub computed: f64,
    pub params: Option<Vec<f64>>,
    pub reference: Option<f64>,
    pub delta: Option<f64>,
    pub tolerance: Tolerance,
    pub informational: bool,
    /// `None` when there is no published cell to compare with.
    pub within_tolerance: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub cells: Vec<Table1Cell>,
}

impl Table1Report {
    /// Gating cells outside their tolerance.
    pub fn failures(&self) -> Vec<&Table1Cell> {
        self.cells
            .iter()
            .filter(|c| !c.informational && c.within_tolerance == Some(false))
            .collect()
    }

    pub fn records(&self) -> Vec<BenchmarkRecord> {
        self.cells
            .iter()
            .map(|c| BenchmarkRecord {
                method: c.method.clone(),
                n: c.n,
                d: 3,
                value: c.computed,
                params: c.params.clone(),
                provenance: Provenance::Computed,
                citation: None,
            })
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "method",
            "n",
            "computed",
            "reference",
            "delta",
            "tolerance",
            "status",
        ])?;
        for c in &self.cells {
            let tol = match c.tolerance {
                Tolerance::Absolute(t) => format!("abs {t}"),
                Tolerance::Relative(t) => format!("rel {t}"),
            };
            let status = match (c.within_tolerance, c.informational) {
                (None, _) => "no reference",
                (Some(true), _) => "ok",
                (Some(false), true) => "outside (informational)",
                (Some(false), false) => "FAIL",
            };
            w.write_record([
                c.method.clone(),
                c.n.to_string(),
                format!("{:.5}", c.computed),
                c.reference.map(|r| format!("{r:.5}")).unwrap_or_default(),
                c.delta.map(|d| format!("{d:.2e}")).unwrap_or_default(),
                tol,
                status.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io("<table1>", e))?;
        Ok(())
    }
}

/// Recomputes Table I cells for the given columns and sizes. The CMA-ES
/// column runs [`optimize_kronecker`] with `cma` (required for that column).
pub fn reproduce_table1(
    columns: &[Column],
    ns: &[usize],
    cma: Option<&OptimizerConfig>,
) -> Result<Table1Report> {
    if let Some(&n) = ns.iter().find(|&&n| n == 0) {
        return Err(Error::InvalidInput(format!(
            "set size must be at least 1, got {n}"
        )));
    }
    if columns.contains(&Column::CmaEs) && cma.is_none() {
        return Err(Error::Config(
            "the CMA-ES column needs an optimizer configuration".into(),
        ));
    }
    let reference = reference_table(ReferenceTable::Table1);
    let lookup: BTreeMap<(&str, usize), f64> = reference
        .iter()
        .map(|r| ((r.method.as_str(), r.n), r.value))
        .collect();
    let jobs: Vec<(Column, usize)> = columns
        .iter()
        .flat_map(|&c| ns.iter().map(move |&n| (c, n)))
        .collect();
    let computed: Vec<(f64, Option<Vec<f64>>)> = jobs
        .par_iter()
        .map(|&(column, n)| -> Result<(f64, Option<Vec<f64>>)> {
            match column {
                Column::Sobol => {
                    let set = sobol_set_from(SOBOL_TABLE_START, n, 3)?;
                    Ok((star_discrepancy_exact(&set)?.value, None))
                }
                Column::CmaEs => {
                    let r = optimize_kronecker(n, 3, cma.expect("checked above"))?;
                    Ok((r.best_value, Some(r.best_params)))
                }
                Column::I200 | Column::I1500 | Column::I2500 => {
                    let p = tuned_params(column.name()).expect("tuned column");
                    Ok((kronecker_objective(n, p)?, Some(p.to_vec())))
                }
            }
        })
        .collect::<Result<_>>()?;
    let cells = jobs
        .iter()
        .zip(computed)
        .map(|(&(column, n), (value, params))| {
            let reference = lookup.get(&(column.name(), n)).copied();
            let tolerance = column.tolerance();
            Table1Cell {
                method: column.name().to_string(),
                n,
                computed: value,
                params,
                reference,
                delta: reference.map(|r| (value - r).abs()),
                tolerance,
                informational: column.informational(),
                within_tolerance: reference.map(|r| tolerance.accepts(value, r)),
            }
        })
        .collect();
    Ok(Table1Report { cells })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapCell {
    pub p2: f64,
    pub p3: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdCount {
    pub threshold: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatmapReport {
    pub n: usize,
    pub resolution: usize,
    /// Row-major: `p2` index outer, `p3` index inner.
    pub cells: Vec<HeatmapCell>,
    pub counts: Vec<ThresholdCount>,
    pub minimum: HeatmapCell,
}

/// Grid coordinate `(i + 1) / (R + 1)` for `i = 0..R`.
pub fn heatmap_axis(resolution: usize) -> Vec<f64> {
    (0..resolution)
        .map(|i| (i + 1) as f64 / (resolution + 1) as f64)
        .collect()
}

/// Exact discrepancy of the shifted set `(1/n, p_2, p_3)` over a
/// `resolution × resolution` grid inside `(0, 1)²`.
pub fn heatmap_scan(n: usize, resolution: usize, thresholds: &[f64]) -> Result<HeatmapReport> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if resolution < 2 {
        return Err(Error::InvalidInput(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    let axis = heatmap_axis(resolution);
    let values: Vec<f64> = (0..resolution * resolution)
        .into_par_iter()
        .map(|k| kronecker_objective(n, &[axis[k / resolution], axis[k % resolution]]))
        .collect::<Result<_>>()?;
    let cells: Vec<HeatmapCell> = values
        .iter()
        .enumerate()
        .map(|(k, &value)| HeatmapCell {
            p2: axis[k / resolution],
            p3: axis[k % resolution],
            value,
        })
        .collect();
    let counts = thresholds
        .iter()
        .map(|&threshold| ThresholdCount {
            threshold,
            count: values.iter().filter(|&&v| v <= threshold).count(),
        })
        .collect();
    let minimum = cells
        .iter()
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .cloned()
        .expect("nonempty grid");
    Ok(HeatmapReport {
        n,
        resolution,
        cells,
        counts,
        minimum,
    })
}

impl HeatmapReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["p2", "p3", "value"])?;
        for c in &self.cells {
            w.write_record([c.p2.to_string(), c.p3.to_string(), c.value.to_string()])?;
        }
        w.flush().map_err(|e| Error::io("<heatmap>", e))?;
        Ok(())
    }

    /// Cell whose grid point is closest to `(p2, p3)`.
    pub fn nearest(&self, p2: f64, p3: f64) -> &HeatmapCell {
        self.cells
            .iter()
            .min_by(|a, b| {
                let da = (a.p2 - p2).powi(2) + (a.p3 - p3).powi(2);
                let db = (b.p2 - p2).powi(2) + (b.p3 - p3).powi(2);
                da.total_cmp(&db)
            })
            .expect("nonempty grid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseEntry {
    pub method: String,
    pub target: f64,
    /// Smallest `n` whose value is at most `target`; `None` when unreached.
    pub n: Option<usize>,
}

/// For each method (in order of first appearance) and target, the smallest
/// `n` among the records with value at most the target.
pub fn inverse_discrepancy(records: &[BenchmarkRecord], targets: &[f64]) -> Vec<InverseEntry> {
    let mut methods: Vec<&str> = Vec::new();
    for r in records {
        if !methods.contains(&r.method.as_str()) {
            methods.push(&r.method);
        }
    }
    let mut out = Vec::with_capacity(methods.len() * targets.len());
    for method in methods {
        for &target in targets {
            let n = records
                .iter()
                .filter(|r| r.method == method && r.value <= target)
                .map(|r| r.n)
                .min();
            out.push(InverseEntry {
                method: method.to_string(),
                target,
                n,
            });
        }
    }
    out
}

pub fn write_inverse_csv<W: Write>(entries: &[InverseEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["method", "target", "n"])?;
    for e in entries {
        w.write_record([
            e.method.clone(),
            e.target.to_string(),
            e.n.map_or_else(|| "unreached".to_string(), |n| n.to_string()),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<inverse>", e))?;
    Ok(())
}
