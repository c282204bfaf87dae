use std::collections::HashMap;
use std::path::Path;

use crate::error::{CliError, Result};
use crate::simulate::{write_records, SIM_HEADER};

pub const DEFAULT_KEY: [&str; 12] = [
    "m", "n", "p", "pi_r", "pi_c", "pi_rc", "pi_dot", "pi", "rho_r", "rho_c", "rho_p", "alpha",
];

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn column(name: &str) -> Result<usize> {
    SIM_HEADER
        .iter()
        .position(|h| *h == name)
        .ok_or_else(|| invalid(format!("unknown group-by column {name:?}")))
}

/// Pivot of simulate records: one row per key, an `fdr`/`power` pair per procedure.
pub fn pivot(records: &[Vec<String>], key: &[&str]) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    if records.is_empty() {
        return Err(invalid("result file has no data rows"));
    }
    let key_cols = key.iter().map(|k| column(k)).collect::<Result<Vec<_>>>()?;
    for reserved in ["procedure", "fdr_hat", "power_hat"] {
        if key.contains(&reserved) {
            return Err(invalid(format!("{reserved} cannot be a group-by column")));
        }
    }
    let (proc_col, fdr_col, power_col) = (column("procedure")?, column("fdr_hat")?, column("power_hat")?);

    let mut procs: Vec<&str> = Vec::new();
    let mut keys: Vec<Vec<&str>> = Vec::new();
    let mut key_index: HashMap<Vec<&str>, usize> = HashMap::new();
    let mut cells: HashMap<(usize, &str), (&str, &str)> = HashMap::new();
    for (i, rec) in records.iter().enumerate() {
        let proc = rec[proc_col].as_str();
        if !procs.contains(&proc) {
            procs.push(proc);
        }
        let k: Vec<&str> = key_cols.iter().map(|&c| rec[c].as_str()).collect();
        let next = keys.len();
        let ki = *key_index.entry(k.clone()).or_insert_with(|| {
            keys.push(k);
            next
        });
        let value = (rec[fdr_col].as_str(), rec[power_col].as_str());
        if cells.insert((ki, proc), value).is_some() {
            return Err(invalid(format!(
                "data row {}: procedure {proc:?} repeats a parameter point",
                i + 1
            )));
        }
    }

    let mut header: Vec<String> = key.iter().map(|k| k.to_string()).collect();
    for p in &procs {
        header.push(format!("{p}_fdr"));
        header.push(format!("{p}_power"));
    }
    let rows = keys
        .iter()
        .enumerate()
        .map(|(ki, k)| {
            let mut row: Vec<String> = k.iter().map(|s| s.to_string()).collect();
            for p in &procs {
                let (f, w) = cells.get(&(ki, *p)).copied().unwrap_or(("", ""));
                row.push(f.to_string());
                row.push(w.to_string());
            }
            row
        })
        .collect();
    Ok((header, rows))
}

pub fn read_results(path: &Path) -> Result<Vec<Vec<String>>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::csv(path, e))?;
    let headers = rdr.headers().map_err(|e| CliError::csv(path, e))?;
    if !headers.iter().eq(SIM_HEADER.iter().copied()) {
        return Err(invalid(format!(
            "{}: header does not match the simulate schema ({})",
            path.display(),
            SIM_HEADER.join(",")
        )));
    }
    rdr.records()
        .map(|r| {
            r.map(|rec| rec.iter().map(str::to_string).collect())
                .map_err(|e| CliError::csv(path, e))
        })
        .collect()
}

/// `gbh report`. Returns the number of pivot rows written.
pub fn cmd_report(input: &Path, out: &Path, group_by: Option<&[String]>) -> Result<usize> {
    let records = read_results(input)?;
    let key: Vec<&str> = match group_by {
        Some(cols) => cols.iter().map(String::as_str).collect(),
        None => DEFAULT_KEY.to_vec(),
    };
    let (header, rows) = pivot(&records, &key)?;
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_records(out, &header, &rows)?;
    Ok(rows.len())
}
