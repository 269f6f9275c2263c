use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use qbound_core::channel::ZERO_PROB;
use qbound_core::info::{csv_float, BoundReport};

use crate::config::{OutputFormat, SuiteConfig};
use crate::error::CliError;
use crate::suites::{Check, Record, Row, SuiteOutcome, SuiteResult};

fn f(x: f64) -> String {
    csv_float(x)
}

fn pass_cell(row: &Row) -> String {
    row.passed().to_string()
}

/// Header and records of one suite's table. Wall time is deliberately absent
/// so reruns produce identical bytes.
pub fn suite_table(outcome: &SuiteOutcome) -> (Vec<String>, Vec<Vec<String>>) {
    let header: Vec<&str> = match outcome.rows.first().map(|r| &r.record) {
        Some(Record::Bounds(_)) | None => BoundReport::CSV_HEADER.to_vec(),
        Some(Record::Concavity(_)) => vec![
            "instance_id", "dim", "n_states", "n_groups", "efficient", "dS_mixture", "dS_average",
            "M_mixture", "M_average", "pass",
        ],
        Some(Record::Classical(_)) => vec!["instance_id", "dim", "n_outcomes", "M", "dS", "pass"],
        Some(Record::Schur(_)) => vec![
            "instance_id", "dim", "n_operators", "pairs", "violations_dS", "worst_dS", "violations_M",
            "worst_M", "rotation_drift", "pass",
        ],
        Some(Record::Dilation(_)) => vec![
            "instance_id", "dim", "n_states", "n_groups", "n_operators", "chi_Q", "chi_QA", "chi_QM", "M",
            "sum_pj_chi_j", "identity_residual", "joint_dims", "joint_chi", "joint_chi_traced_0",
            "joint_chi_traced_1", "pass",
        ],
    };
    let rows = outcome
        .rows
        .iter()
        .map(|row| {
            let id = row.instance_id.to_string();
            match &row.record {
                Record::Bounds(r) => r.csv_record(row.instance_id),
                Record::Concavity(c) => vec![
                    id,
                    c.dim.to_string(),
                    c.n_states.to_string(),
                    c.n_groups.to_string(),
                    c.efficient.to_string(),
                    f(c.ds_mixture),
                    f(c.ds_average),
                    f(c.mi_mixture),
                    f(c.mi_average),
                    pass_cell(row),
                ],
                Record::Classical(c) => vec![
                    id,
                    c.dim.to_string(),
                    c.n_outcomes.to_string(),
                    f(c.mutual_info),
                    f(c.avg_entropy_reduction),
                    pass_cell(row),
                ],
                Record::Schur(s) => vec![
                    id,
                    s.dim.to_string(),
                    s.n_operators.to_string(),
                    s.entropy_reduction.pairs_tested.to_string(),
                    s.entropy_reduction.violations.to_string(),
                    f(s.entropy_reduction.worst_violation),
                    s.mutual_info.violations.to_string(),
                    f(s.mutual_info.worst_violation),
                    s.rotation_drift.map(f).unwrap_or_default(),
                    pass_cell(row),
                ],
                Record::Dilation(d) => {
                    let c = &d.certificate;
                    vec![
                        id,
                        d.dim.to_string(),
                        d.n_states.to_string(),
                        d.n_groups.to_string(),
                        d.n_operators.to_string(),
                        f(c.chi_q),
                        f(c.chi_qa_prime),
                        f(c.chi_qm_doubleprime),
                        f(c.mutual_info),
                        f(c.sum_pj_chi_j),
                        f(c.identity_residual),
                        d.joint_dims.iter().map(usize::to_string).collect::<Vec<_>>().join("x"),
                        f(d.joint_chi),
                        f(d.joint_chi_traced[0]),
                        f(d.joint_chi_traced[1]),
                        pass_cell(row),
                    ]
                }
            }
        })
        .collect();
    (header.into_iter().map(String::from).collect(), rows)
}

pub fn csv_bytes(header: &[String], rows: &[Vec<String>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    // Writing to memory cannot fail.
    w.write_record(header).expect("in-memory csv");
    for r in rows {
        w.write_record(r).expect("in-memory csv");
    }
    w.into_inner().expect("in-memory csv")
}

pub fn suite_csv(outcome: &SuiteOutcome) -> Vec<u8> {
    let (header, rows) = suite_table(outcome);
    csv_bytes(&header, &rows)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes the configured outputs and returns the paths written.
///
/// CSV for a single suite goes to `out` itself; for several suites `out` is
/// a directory holding `<suite>.csv`. JSON is always one file.
pub fn write_outputs(result: &SuiteResult, cfg: &SuiteConfig) -> Result<Vec<PathBuf>, CliError> {
    let Some(out) = &cfg.out else {
        return Ok(Vec::new());
    };
    match cfg.format {
        OutputFormat::Json => {
            let text = serde_json::to_string_pretty(result).expect("suite results serialize");
            write_file(out, text.as_bytes())?;
            Ok(vec![out.clone()])
        }
        OutputFormat::Csv if result.suites.len() == 1 => {
            write_file(out, &suite_csv(&result.suites[0]))?;
            Ok(vec![out.clone()])
        }
        OutputFormat::Csv => {
            fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
            let mut written = Vec::new();
            for s in &result.suites {
                let path = out.join(format!("{}.csv", s.suite));
                write_file(&path, &suite_csv(s))?;
                written.push(path);
            }
            Ok(written)
        }
    }
}

pub fn suite_summary(result: &SuiteResult) -> String {
    let mut s = String::new();
    for o in &result.suites {
        let verdict = if o.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{:<20} {verdict}  {} instances, {} checks, {} failed, dims {:?}, {:.2} s",
            o.suite.name(),
            o.rows.len(),
            o.n_checks(),
            o.failures(),
            o.dims,
            o.wall_time_s,
        );
        for (name, g) in &o.gaps {
            let _ = writeln!(
                s,
                "    {name:<30} min gap {:>12.4e}  (instance {}, tol {:.0e}, {} failed)",
                g.min_gap, g.worst_instance, g.tolerance, g.failures
            );
        }
    }
    let skipped: Vec<usize> = result
        .config
        .dims
        .iter()
        .copied()
        .filter(|d| result.suites.iter().any(|o| !o.dims.contains(d)))
        .collect();
    if !skipped.is_empty() {
        let _ = writeln!(s, "note: dims {skipped:?} skipped where no calibrated tolerance exists");
    }
    let _ = writeln!(s, "overall: {}", if result.passed() { "PASS" } else { "FAIL" });
    s
}

/// Human-readable rendering of a single report and its checks.
pub fn report_text(r: &BoundReport, checks: &[Check]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "dim {}, {} states, {} outcomes from {} operators ({})",
        r.dim,
        r.n_states,
        r.n_groups,
        r.n_operators,
        if r.efficient { "efficient" } else { "inefficient" }
    );
    let line = |s: &mut String, name: &str, v: f64| {
        let _ = writeln!(s, "  {name:<22} {v:>18.12}");
    };
    line(&mut s, "M", r.mutual_info);
    line(&mut s, "chi", r.chi);
    line(&mut s, "sum_j P(j) chi_j", r.sum_pj_chi_j);
    line(&mut s, "sum_kj P(k,j) chi_kj", r.sum_pkj_chi_kj);
    line(&mut s, "<dS(rho)>", r.avg_entropy_reduction);
    let _ = writeln!(s, "  chi_j per observed outcome:");
    for (j, (&p, &c)) in r.p_j.iter().zip(&r.chi_j).enumerate() {
        if p > ZERO_PROB {
            let _ = writeln!(s, "    j={j:<4} P(j) = {p:.12}  chi_j = {c:.12}");
        }
    }
    let _ = writeln!(s, "  checks (gap = bound - quantity):");
    for c in checks {
        let _ = writeln!(
            s,
            "    {:<18} {:>18.12}  {}",
            c.name,
            c.gap,
            if c.pass { "ok" } else { "VIOLATED" }
        );
    }
    s
}

pub fn report_csv(r: &BoundReport) -> Vec<u8> {
    let header: Vec<String> = BoundReport::CSV_HEADER.iter().map(|h| h.to_string()).collect();
    csv_bytes(&header, &[r.csv_record(0)])
}
