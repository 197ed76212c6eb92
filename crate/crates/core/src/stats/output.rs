//! JSON/CSV report files and console tables.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::report::{CollisionReport, DiffusionReport, Evaluation, UniformReport};
use crate::stats::sweep::StabilityGrid;

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn opt_fixed(v: Option<f64>, digits: usize) -> String {
    match v {
        Some(x) => format!("{x:.digits$}"),
        None => "undefined".to_string(),
    }
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(BufWriter::new(file))
}

/// One row per trial.
pub fn write_trials_csv<W: Write>(out: W, e: &Evaluation) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["trial", "hamming", "hits", "mean_abs_byte_diff"];
    if e.sensitivity.is_some() {
        header.extend(["js_flip", "js_insert", "js_delete"]);
    }
    w.write_record(&header)?;
    for i in 0..e.trials {
        let mut row = vec![
            i.to_string(),
            e.diffusion.hamming[i].to_string(),
            e.collision.per_trial_hits[i].to_string(),
            e.collision.per_trial_byte_diff[i].to_string(),
        ];
        if let Some(s) = &e.sensitivity {
            row.extend(s.js_per_trial[i].iter().map(|v| v.to_string()));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// Plot data: one row per digest bit position.
pub fn write_positions_csv<W: Write>(out: W, e: &Evaluation) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["position", "flips"];
    if e.sensitivity.is_some() {
        header.extend(["changed_flip", "changed_insert", "changed_delete"]);
    }
    w.write_record(&header)?;
    for (j, t) in e.uniform.flip_counts.iter().enumerate() {
        let mut row = vec![(j + 1).to_string(), t.to_string()];
        if let Some(s) = &e.sensitivity {
            row.extend(s.position_counts[j].iter().map(|v| v.to_string()));
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// One row per grid cell.
pub fn write_grid_csv<W: Write>(out: W, grid: &StabilityGrid) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "k0",
        "k1",
        "theta0",
        "theta1",
        "trials",
        "js_flip",
        "js_insert",
        "js_delete",
        "P",
        "dP",
        "T_mean",
        "dT",
        "D_KL",
        "d_byte",
        "d_byte_gap",
    ])?;
    for c in &grid.cells {
        w.write_record([
            c.k0.to_string(),
            c.k1.to_string(),
            c.theta0.to_string(),
            c.theta1.to_string(),
            c.trials.to_string(),
            c.js_means[0].to_string(),
            c.js_means[1].to_string(),
            c.js_means[2].to_string(),
            c.mean_changed_prob.to_string(),
            opt(c.std_changed_prob),
            c.uniform_mean.to_string(),
            opt(c.uniform_std),
            c.kl.to_string(),
            c.mean_abs_byte_diff.to_string(),
            c.byte_diff_gap.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

/// Writes `<stem>.json`, `<stem>.trials.csv` and `<stem>.positions.csv`.
pub fn write_evaluation_files(dir: &Path, stem: &str, e: &Evaluation) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir).map_err(|err| Error::io(dir, err))?;
    let json = dir.join(format!("{stem}.json"));
    write_json(&json, e)?;
    let trials = dir.join(format!("{stem}.trials.csv"));
    write_trials_csv(create(&trials)?, e)?;
    let positions = dir.join(format!("{stem}.positions.csv"));
    write_positions_csv(create(&positions)?, e)?;
    Ok([json, trials, positions]
        .iter()
        .map(|p| p.display().to_string())
        .collect())
}

/// Writes `<stem>.json` and `<stem>.csv` for a sweep.
pub fn write_grid_files(dir: &Path, stem: &str, grid: &StabilityGrid) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir).map_err(|err| Error::io(dir, err))?;
    let json = dir.join(format!("{stem}.json"));
    write_json(&json, grid)?;
    let csv = dir.join(format!("{stem}.csv"));
    write_grid_csv(create(&csv)?, grid)?;
    Ok([json, csv]
        .iter()
        .map(|p| p.display().to_string())
        .collect())
}

pub fn diffusion_table(label: &str, r: &DiffusionReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{:<28}{:>12}{:>10}{:>10}{:>10}{:>10}",
        "Hash Instances or Schemes", "B\u{304}", "P(%)", "\u{394}B", "\u{394}P(%)", "I_DC(%)"
    )
    .unwrap();
    writeln!(
        s,
        "{:<28}{:>11.4}{:>10.4}{:>10}{:>10}{:>10}",
        label,
        r.mean_changed_bits,
        r.mean_changed_prob,
        opt_fixed(r.std_changed_bits, 4),
        opt_fixed(r.std_changed_prob, 4),
        opt_fixed(r.idc, 4),
    )
    .unwrap();
    s
}

pub fn uniform_table(label: &str, r: &UniformReport) -> String {
    let half = r.trials as f64 / 2.0;
    let mut s = String::new();
    writeln!(
        s,
        "{:<28}{:>12}{:>16}{:>12}",
        "Hash Instances or Schemes",
        "T\u{304}",
        format!("|T\u{304}-{half}|"),
        "\u{394}T"
    )
    .unwrap();
    writeln!(
        s,
        "{:<28}{:>11.2}{:>15.2}{:>12}",
        label,
        r.mean,
        (r.mean - half).abs(),
        opt_fixed(r.std, 4)
    )
    .unwrap();
    s
}

pub fn collision_table(label: &str, r: &CollisionReport) -> String {
    let joined = |v: Vec<u64>| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let mut s = String::new();
    writeln!(
        s,
        "{:<28}{:<34}{:>14}{:>10}{:>14}",
        "Hash Instances or Schemes",
        "{W_N^e(\u{3c9})|\u{3c9}=0,1,2,3,4+}",
        "D_KL(P^e||P^t)",
        "d_byte^e",
        "|d^e-d^t|"
    )
    .unwrap();
    writeln!(
        s,
        "{:<28}{:<34}{:>14.7}{:>10.2}{:>14.2}",
        label,
        joined(r.grouped_hits(4)),
        r.kl,
        r.mean_abs_byte_diff,
        r.byte_diff_gap
    )
    .unwrap();
    writeln!(
        s,
        "{:<28}{:<34}",
        "(binomial W_N^t)",
        joined(r.grouped_expected(4))
    )
    .unwrap();
    s
}
