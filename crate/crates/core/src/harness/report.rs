//! The comparison report and its JSON, CSV and plot-data files.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::body::{BodyReport, RowKind};
use super::config::Config;
use super::extra::{DnReport, LiouvilleReport, ProfileReport, ScalingReport};
use crate::check::Inequality;
use crate::error::{Error, Result};
use crate::special::{alt_simplicity_threshold, constants, eps_k, kroger_bound};

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsSummary {
    pub c2: f64,
    pub inverse_c2: f64,
    /// `ε_k`, `k = 1..=kmax`.
    pub eps_k: Vec<f64>,
    /// Collapsing-segment simplicity thresholds, `k = 1..=kmax`.
    pub alt_threshold: Vec<f64>,
    /// Planar Kröger bounds, `k = 1..=kmax`.
    pub kroger: Vec<f64>,
}

/// Bodies whose first nonzero eigenvalue is multiple, against the conjectured
/// threshold `W/D ≥ 1/√2` for such bodies.
#[derive(Debug, Clone, Serialize)]
pub struct ConjectureRow {
    pub body: String,
    pub width: f64,
    pub cluster: Vec<usize>,
    pub consistent: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub bodies: usize,
    pub assertions: usize,
    pub failures: usize,
    pub findings: usize,
    /// Findings whose inequality does not hold.
    pub findings_violated: usize,
    /// `subject/check/k` of every failed assertion.
    pub failed: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ComparisonReport {
    pub config: Config,
    pub constants: ConstantsSummary,
    pub bodies: Vec<BodyReport>,
    pub concave_profiles: Vec<ProfileReport>,
    pub liouville: Vec<LiouvilleReport>,
    pub dirichlet_neumann: DnReport,
    pub scaling: Vec<ScalingReport>,
    pub conjecture: Vec<ConjectureRow>,
    pub summary: Summary,
}

/// One inequality of the report, flattened for CSV.
#[derive(Debug, Clone, Serialize)]
pub struct FlatRow {
    pub section: &'static str,
    pub subject: String,
    pub check: String,
    pub k: Option<usize>,
    pub kind: RowKind,
    pub label: String,
    pub lhs: f64,
    pub relation: &'static str,
    pub rhs: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub holds: bool,
    pub deviation: Option<&'static str>,
}

fn flat(section: &'static str, subject: &str, check: &str, k: Option<usize>, q: &Inequality) -> FlatRow {
    FlatRow {
        section,
        subject: subject.to_string(),
        check: check.to_string(),
        k,
        kind: RowKind::Assertion,
        label: q.label.clone(),
        lhs: q.lhs,
        relation: q.relation,
        rhs: q.rhs,
        margin: q.margin,
        tolerance: q.tolerance,
        holds: q.holds,
        deviation: None,
    }
}

/// Conjectured lower bound on `W/D` for bodies with a multiple first eigenvalue.
const CONJECTURE_WIDTH: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl ComparisonReport {
    pub fn new(
        config: Config,
        bodies: Vec<BodyReport>,
        concave_profiles: Vec<ProfileReport>,
        liouville: Vec<LiouvilleReport>,
        dirichlet_neumann: DnReport,
        scaling: Vec<ScalingReport>,
    ) -> Self {
        let ks = 1..=config.kmax;
        let c2 = constants(2, 1).expect("planar constants").c_n.value;
        let consts = ConstantsSummary {
            c2,
            inverse_c2: 1.0 / c2,
            eps_k: ks.clone().map(|k| eps_k(k).value).collect(),
            alt_threshold: ks.clone().map(|k| alt_simplicity_threshold(k).value).collect(),
            kroger: ks.map(|k| kroger_bound(2, k).expect("planar Kröger bound").value).collect(),
        };
        let conjecture = bodies
            .iter()
            .filter_map(|b| {
                let c = b.omega.clusters.iter().find(|c| c.contains(&1))?;
                Some(ConjectureRow {
                    body: b.name.clone(),
                    width: b.width,
                    cluster: c.clone(),
                    consistent: b.width >= CONJECTURE_WIDTH - 1e-12,
                })
            })
            .collect();
        let mut report = Self {
            config,
            constants: consts,
            bodies,
            concave_profiles,
            liouville,
            dirichlet_neumann,
            scaling,
            conjecture,
            summary: Summary {
                bodies: 0,
                assertions: 0,
                failures: 0,
                findings: 0,
                findings_violated: 0,
                failed: Vec::new(),
                pass: true,
            },
        };
        report.summary = report.summarize();
        report
    }

    /// Every inequality in the report.
    pub fn rows(&self) -> Vec<FlatRow> {
        let mut out = Vec::new();
        for b in &self.bodies {
            for r in &b.rows {
                let mut f = flat("body", &b.name, r.check, r.k, &r.inequality);
                f.kind = r.kind;
                f.deviation = r.deviation;
                out.push(f);
            }
        }
        for p in &self.concave_profiles {
            for (i, q) in p.bound.rows.iter().enumerate() {
                out.push(flat("profile", &format!("concave-seed{}", p.seed), "pi_squared", Some(i + 1), q));
            }
        }
        for l in &self.liouville {
            for (i, q) in l.rows.iter().enumerate() {
                out.push(flat("liouville", &l.profile, "liouville", Some(i + 1), q));
            }
        }
        let dn = &self.dirichlet_neumann;
        let rect = &dn.rectangle;
        out.push(flat("dn", &rect.name, "dn_bound", Some(1), &rect.inequality));
        out.push(flat(
            "dn",
            &rect.name,
            "dn_rectangle_equality",
            Some(1),
            &Inequality::at_most("|relative excess|", rect.relative_excess.abs(), dn.rectangle_tolerance, 0.0),
        ));
        for d in &dn.subdomains {
            out.push(flat("dn", &d.name, "dn_bound", Some(1), &d.inequality));
        }
        for s in &self.scaling {
            if let Some(q) = &s.row {
                out.push(flat("scaling", s.family.name(), "mu1_gap_exponent", None, q));
            }
        }
        out
    }

    fn summarize(&self) -> Summary {
        let rows = self.rows();
        let is = |r: &&FlatRow, k| r.kind == k;
        let failed: Vec<String> = rows
            .iter()
            .filter(|r| is(r, RowKind::Assertion) && !r.holds)
            .map(|r| match r.k {
                Some(k) => format!("{}/{}/k={k}", r.subject, r.check),
                None => format!("{}/{}", r.subject, r.check),
            })
            .collect();
        Summary {
            bodies: self.bodies.len(),
            assertions: rows.iter().filter(|r| is(r, RowKind::Assertion)).count(),
            failures: failed.len(),
            findings: rows.iter().filter(|r| is(r, RowKind::Finding)).count(),
            findings_violated: rows.iter().filter(|r| is(r, RowKind::Finding) && !r.holds).count(),
            pass: failed.is_empty(),
            failed,
        }
    }

    /// 0 when every assertion holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.summary.pass {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Writes `report.json`, `rows.csv` and `plots/*.dat` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let plots = dir.join("plots");
        std::fs::create_dir_all(&plots).map_err(|e| Error::io(&plots, e))?;
        write_file(&dir.join("report.json"), &self.to_json())?;
        let csv_path = dir.join("rows.csv");
        let mut w = csv::Writer::from_path(&csv_path).map_err(|e| csv_error(&csv_path, e))?;
        for r in self.rows() {
            w.serialize(r).map_err(|e| csv_error(&csv_path, e))?;
        }
        w.flush().map_err(|e| Error::io(&csv_path, e))?;
        for b in &self.bodies {
            let mut text = String::from("# k mu_k(Omega) mu_k(N)\n");
            for k in 0..b.omega.eigenvalues.len().min(b.segment.eigenvalues.len()) {
                let _ = writeln!(text, "{k} {} {}", b.omega.eigenvalues[k], b.segment.eigenvalues[k]);
            }
            write_file(&plots.join(format!("spectrum_{}.dat", b.name)), &text)?;
        }
        for s in &self.scaling {
            let mut text = String::from("# width gap\n");
            for p in &s.points {
                let _ = writeln!(text, "{} {}", p.width, p.gap);
            }
            write_file(&plots.join(format!("mu1_gap_{}.dat", s.family.name())), &text)?;
        }
        let mut text = String::from("# width/diameter mu_1(Omega)\n");
        for b in &self.bodies {
            let _ = writeln!(text, "{} {}", b.width, b.omega.eigenvalues[1]);
        }
        write_file(&plots.join("mu1_vs_width.dat"), &text)?;
        Ok(())
    }

    /// Short human-readable summary.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<34} {:>9} {:>12} {:>12} {:>6}", "body", "W/D", "mu1(Omega)", "mu1(N)", "fail");
        for b in &self.bodies {
            let _ = writeln!(
                s,
                "{:<34} {:>9.5} {:>12.6} {:>12.6} {:>6}",
                b.name,
                b.width,
                b.omega.eigenvalues[1],
                b.segment.eigenvalues[1],
                b.failures()
            );
        }
        for sc in &self.scaling {
            match (sc.exponent, &sc.skipped) {
                (Some(p), _) => {
                    let _ = writeln!(s, "mu1 gap exponent {:<18} p = {p:.3}", sc.family.name());
                }
                (None, Some(why)) => {
                    let _ = writeln!(s, "mu1 gap exponent {:<18} skipped: {why}", sc.family.name());
                }
                _ => {}
            }
        }
        let m = &self.summary;
        let _ = writeln!(
            s,
            "{} bodies, {} assertions, {} failed, {} findings ({} violated): {}",
            m.bodies,
            m.assertions,
            m.failures,
            m.findings,
            m.findings_violated,
            if m.pass { "PASS" } else { "FAIL" }
        );
        for f in &m.failed {
            let _ = writeln!(s, "  failed: {f}");
        }
        s
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        message: format!("csv: {e}"),
    }
}

pub(crate) fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
