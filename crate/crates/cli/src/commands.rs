use std::io::Write;

use homgrow_core::chain::{homology, HomologySummary};
use homgrow_core::group_ring::base_change;
use homgrow_core::growth::{compute_level, run_tower, LevelReport, TowerConfig, TowerReport};
use serde::Serialize;

use crate::input::ComplexFile;
use crate::{emit, load_source, CliError, ExperimentConfig, Format, SourceArgs};

/// Output of `homology`: the full homology of one level plus its torsions
/// and α data.
#[derive(Debug, Serialize)]
pub struct HomologyReport {
    pub homology: HomologySummary,
    pub level: LevelReport,
}

fn tower_config(config: &ExperimentConfig) -> TowerConfig {
    TowerConfig {
        primes: config.primes.clone(),
        max_degree: config.max_degree,
        jobs: config.jobs,
        exact_det_max_dim: config.exact_det_max_dim,
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::Input(format!("serialization: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_csv(header: Vec<String>, records: Vec<Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for r in &records {
        w.write_record(r).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))
}

/// One quotient level, the single entry of `--levels`.
pub fn cmd_homology(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let q = match config.levels.as_slice() {
        [q] => q.clone(),
        _ => {
            return Err(CliError::Input(format!(
                "homology takes a single level, got {}",
                config.levels.len()
            )))
        }
    };
    let tc = tower_config(config);
    let level = compute_level(&config.complex, &q, 0, &tc).map_err(CliError::Core)?;
    let mut summary = homology(&base_change(&config.complex, &q).map_err(CliError::Core)?.complex, &config.primes);
    summary.degrees.truncate(config.max_degree.saturating_add(1));
    let report = HomologyReport { homology: summary, level };
    let bytes = match config.format {
        Format::Json => to_json(&report)?,
        Format::Csv => homology_csv(&report, &config.primes)?,
    };
    emit(&config.out, &bytes, stdout)
}

fn homology_csv(r: &HomologyReport, primes: &[u64]) -> Result<Vec<u8>, CliError> {
    let mut header: Vec<String> = ["moduli", "index", "degree", "betti_q"].map(String::from).to_vec();
    header.extend(primes.iter().map(|p| format!("betti_p_{p}")));
    header.extend(
        ["d_hn", "invariant_factors", "ln_tors", "ln_det_c", "ln_det_alpha", "rho_z", "rho_2", "flag"].map(String::from),
    );
    let l = &r.level;
    let moduli = l.moduli.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
    let records = r
        .homology
        .degrees
        .iter()
        .zip(&l.degrees)
        .map(|(g, d)| {
            let mut row = vec![moduli.clone(), l.index.to_string(), g.degree.to_string(), g.betti_q.to_string()];
            row.extend(primes.iter().map(|p| g.betti_mod_p[p].to_string()));
            row.push(g.d_hn.to_string());
            row.push(g.invariant_factors.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" "));
            for v in [d.ln_tors, d.ln_det_c, d.ln_det_alpha, l.rho_z, l.rho_2] {
                row.push(v.to_string());
            }
            row.push(if l.degenerate { "degenerate".into() } else { String::new() });
            row
        })
        .collect();
    write_csv(header, records)
}

pub fn tower_report(config: &ExperimentConfig) -> Result<TowerReport, CliError> {
    run_tower(&config.complex, &config.levels, &tower_config(config)).map_err(CliError::Core)
}

/// Normalized invariants along the tower. Degenerate levels are flagged in
/// the `flag` column rather than aborting the run.
pub fn cmd_tower(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<(), CliError> {
    let report = tower_report(config)?;
    let bytes = match config.format {
        Format::Json => to_json(&report)?,
        Format::Csv => write_csv(report.csv_header(), report.csv_records())?,
    };
    emit(&config.out, &bytes, stdout)
}

pub fn cmd_export(src: &SourceArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let c = load_source(src)?;
    emit(&src.out, &to_json(&ComplexFile::from_complex(&c))?, stdout)
}
