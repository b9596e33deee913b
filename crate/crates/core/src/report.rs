// SPDX-License-Identifier: Apache-2.0

//! Serializable run reports and CSV export of sweeps.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobian::{MatrixHull, MvtReport, ProbeReport};
use crate::monotonicity::{HierarchyReport, PropertyClass};
use crate::translation::{CounterexampleReport, Prop1Report, ProofTraceReport, SweepReport, Theorem1Report};
use crate::types::{PropertyVerdict, TolerancePolicy};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobianReport {
    pub hull: MatrixHull,
    pub probe: ProbeReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSummary {
    pub name: String,
    pub dimension: usize,
    pub known_class: Vec<PropertyClass>,
    pub domain: String,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operation", content = "result", rename_all = "snake_case")]
pub enum Payload {
    Check(PropertyVerdict),
    Sweep(SweepReport),
    Theorem1(Theorem1Report),
    Prop1(Prop1Report),
    Trace(ProofTraceReport),
    Jacobian(JacobianReport),
    Mvt(MvtReport),
    Counterexample(CounterexampleReport),
    Hierarchy(HierarchyReport),
    Maps(Vec<MapSummary>),
}

/// Everything needed to reproduce a run. Only `wall_time_ms` varies between
/// runs with the same inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: Vec<String>,
    pub seed: u64,
    pub tolerances: TolerancePolicy,
    pub payload: Payload,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn new(command: Vec<String>, seed: u64, tolerances: TolerancePolicy, payload: Payload, wall_time_ms: u64) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command,
            seed,
            tolerances,
            payload,
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Unsupported(format!("report serialization: {e}")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec { token: "report".into(), reason: e.to_string() })
    }
}

/// Writes one row per λ: `lambda, status, x…, y…, lhs, rhs, margin`.
/// Witness columns are empty for rows without a violation.
pub fn write_sweep_csv<W: Write>(sweep: &SweepReport, out: W) -> Result<()> {
    let csv_err = |e: csv::Error| Error::Unsupported(format!("csv export: {e}"));
    let dim = sweep.rows.first().map_or(0, |r| r.omega.len());
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["lambda".to_string(), "status".to_string()];
    header.extend((1..=dim).map(|i| format!("x{i}")));
    header.extend((1..=dim).map(|i| format!("y{i}")));
    header.extend(["lhs", "rhs", "margin"].map(String::from));
    w.write_record(&header).map_err(csv_err)?;
    for row in &sweep.rows {
        let mut rec = vec![format!("{:?}", row.lambda), row.verdict.status.to_string()];
        match &row.verdict.witness {
            Some(wit) => {
                rec.extend(wit.x.coords().iter().chain(wit.y.coords()).map(|c| format!("{c:?}")));
                rec.extend([wit.lhs, wit.rhs, wit.margin].map(|c| format!("{c:?}")));
            }
            None => rec.extend(std::iter::repeat_n(String::new(), 2 * dim + 3)),
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Unsupported(format!("csv export: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monotonicity::{falsify, SearchConfig};
    use crate::registry::lookup;
    use crate::translation::{default_lambda_grid, sweep, DualLine};
    use crate::types::Property;

    #[test]
    fn round_trip() {
        let e = lookup("square-1d").unwrap();
        let v = falsify(&e.map, &e.domain, Property::Pseudo, &SearchConfig::new(500, 1)).unwrap();
        let r = RunReport::new(vec!["check".into()], 1, TolerancePolicy::default(), Payload::Check(v), 3);
        let back = RunReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn sweep_csv_has_header_and_rows() {
        let e = lookup("saddle-2d").unwrap();
        let l = DualLine::through_origin(vec![1.0, 0.0], default_lambda_grid()).unwrap();
        let s = sweep(&e.map, &e.domain, &l, Property::Quasi, &SearchConfig::new(500, 2)).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lambda,status,x1,x2,y1,y2,lhs,rhs,margin");
        assert_eq!(lines.len(), 18);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 9));
    }
}
