use std::collections::{HashMap, HashSet};
use std::path::Path;

use gbh_core::stepup::weighted_pvalue;
use gbh_core::{
    weighted_bh, AdaptiveVariant, Layout, LayoutKind, PValueSet, Procedure, StepUpConfig,
};

use crate::error::{CliError, Result};
use crate::simulate::write_records;

pub const ANALYZE_HEADER: [&str; 7] = [
    "row_id", "col_id", "member_id", "p_value", "weight", "weighted_p", "rejected",
];

#[derive(Debug, Clone)]
pub struct AnalyzeOptions {
    pub procedure: String,
    pub alpha: f64,
    pub lambda: f64,
    pub variant: Option<String>,
    pub one_way: bool,
}

/// One input row, with its 1-based line number in the file.
#[derive(Debug, Clone)]
pub struct InputRow {
    pub line: u64,
    pub row_id: String,
    pub col_id: String,
    pub member_id: String,
    pub p_value: f64,
}

#[derive(Debug)]
pub struct Analysis {
    pub layout: Layout,
    /// Output records in input order.
    pub records: Vec<Vec<String>>,
    pub rejections: usize,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn read_input(path: &Path, one_way: bool) -> Result<Vec<InputRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::csv(path, e))?;
    let headers = rdr.headers().map_err(|e| CliError::csv(path, e))?.clone();
    let find = |name: &str| headers.iter().position(|h| h == name);
    let row_col = find("row_id").ok_or_else(|| invalid("input is missing the row_id column"))?;
    let p_col = find("p_value").ok_or_else(|| invalid("input is missing the p_value column"))?;
    let col_col = find("col_id");
    if col_col.is_none() && !one_way {
        return Err(invalid("input is missing the col_id column (use --one-way to group on row_id)"));
    }
    let member_col = find("member_id");

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::csv(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: Option<usize>| i.and_then(|i| record.get(i)).unwrap_or("").to_string();
        let raw = field(Some(p_col));
        let p_value: f64 = raw
            .parse()
            .map_err(|_| invalid(format!("line {line}: p_value {raw:?} is not a number")))?;
        if !(0.0..=1.0).contains(&p_value) {
            return Err(invalid(format!("line {line}: p_value {raw} is outside [0, 1]")));
        }
        let row_id = field(Some(row_col));
        if row_id.is_empty() {
            return Err(invalid(format!("line {line}: row_id is empty")));
        }
        let col_id = field(col_col);
        if !one_way && col_id.is_empty() {
            return Err(invalid(format!("line {line}: col_id is empty")));
        }
        rows.push(InputRow {
            line,
            row_id,
            col_id,
            member_id: field(member_col),
            p_value,
        });
    }
    if rows.is_empty() {
        return Err(invalid(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// Index of each label in order of first appearance.
fn label_index<'a>(labels: impl Iterator<Item = &'a str>) -> (HashMap<&'a str, usize>, usize) {
    let mut map = HashMap::new();
    for l in labels {
        let next = map.len();
        map.entry(l).or_insert(next);
    }
    let len = map.len();
    (map, len)
}

/// Infers the layout and maps each input row to its flat index.
pub fn infer_layout(rows: &[InputRow], one_way: bool) -> Result<(Layout, Vec<usize>)> {
    let (row_ix, m) = label_index(rows.iter().map(|r| r.row_id.as_str()));
    let units: Vec<usize>;
    let layout = if one_way {
        units = rows.iter().map(|r| row_ix[r.row_id.as_str()]).collect();
        let mut sizes = vec![0; m];
        for &u in &units {
            sizes[u] += 1;
        }
        Layout::one_way(sizes)?
    } else {
        let (col_ix, n) = label_index(rows.iter().map(|r| r.col_id.as_str()));
        units = rows
            .iter()
            .map(|r| row_ix[r.row_id.as_str()] * n + col_ix[r.col_id.as_str()])
            .collect();
        let mut sizes = vec![0; m * n];
        for &u in &units {
            sizes[u] += 1;
        }
        if let Some(u) = sizes.iter().position(|&s| s == 0) {
            let row = row_ix.iter().find(|(_, &i)| i == u / n).map(|(l, _)| *l).unwrap_or("");
            let col = col_ix.iter().find(|(_, &i)| i == u % n).map(|(l, _)| *l).unwrap_or("");
            return Err(invalid(format!(
                "cell (row_id {row:?}, col_id {col:?}) has no p-values"
            )));
        }
        if sizes.iter().all(|&s| s == 1) {
            Layout::two_way(m, n)?
        } else {
            Layout::two_way_cells(m, n, sizes)?
        }
    };

    let mut seen = HashSet::new();
    for r in rows.iter().filter(|r| !r.member_id.is_empty()) {
        let key = (r.row_id.as_str(), if one_way { "" } else { r.col_id.as_str() }, r.member_id.as_str());
        if !seen.insert(key) {
            return Err(invalid(format!("line {}: duplicate member_id {:?}", r.line, r.member_id)));
        }
    }

    let mut fill = vec![0; layout.unit_count()];
    let flat = units
        .iter()
        .map(|&u| {
            let i = layout.unit_range(u).start + fill[u];
            fill[u] += 1;
            i
        })
        .collect();
    Ok((layout, flat))
}

pub fn build_procedure(opts: &AnalyzeOptions, kind: LayoutKind) -> Result<Procedure> {
    if opts.variant.is_some() && opts.procedure != "adaptive_gbh" {
        return Err(invalid(format!("--variant does not apply to {}", opts.procedure)));
    }
    match opts.procedure.as_str() {
        "bh" => Ok(Procedure::PlainBh),
        "naive_adaptive_bh" => Ok(Procedure::NaiveAdaptiveBh {
            lambda: opts.lambda,
            cap_at_one: false,
        }),
        "adaptive_gbh" => {
            let variant = match &opts.variant {
                None => AdaptiveVariant::default_for(kind),
                Some(v) => AdaptiveVariant::from_name(v)
                    .ok_or_else(|| invalid(format!("unknown variant {v:?}")))?,
            };
            Ok(Procedure::AdaptiveGbh {
                variant,
                lambda: opts.lambda,
            })
        }
        "lsl_gbh" => Ok(Procedure::LslGbh),
        "tst_gbh" => Ok(Procedure::TstGbh),
        "oracle_gbh" => Err(invalid(
            "oracle_gbh needs the true null proportions and cannot run on observed data",
        )),
        other => Err(invalid(format!("unknown procedure {other:?}"))),
    }
}

pub fn analyze_rows(rows: &[InputRow], opts: &AnalyzeOptions) -> Result<Analysis> {
    let cfg = StepUpConfig::new(opts.alpha)?;
    if !(opts.lambda > 0.0 && opts.lambda < 1.0) {
        return Err(invalid(format!("lambda must lie in (0, 1), got {}", opts.lambda)));
    }
    let (layout, flat) = infer_layout(rows, opts.one_way)?;
    let procedure = build_procedure(opts, layout.kind())?;
    let mut values = vec![0.0; layout.total()];
    for (r, &i) in rows.iter().zip(&flat) {
        values[i] = r.p_value;
    }
    let p = PValueSet::new(layout.clone(), values)?;
    let w = procedure.weights(&p, opts.alpha, None)?;
    let rej = weighted_bh(&p, &w, &cfg)?;
    let records = rows
        .iter()
        .zip(&flat)
        .map(|(r, &i)| {
            let weight = w.weights()[i];
            vec![
                r.row_id.clone(),
                r.col_id.clone(),
                r.member_id.clone(),
                r.p_value.to_string(),
                weight.to_string(),
                weighted_pvalue(weight, r.p_value).to_string(),
                rej.rejected()[i].to_string(),
            ]
        })
        .collect();
    Ok(Analysis {
        layout,
        records,
        rejections: rej.count(),
    })
}

/// `gbh analyze`. Returns the summary line.
pub fn cmd_analyze(input: &Path, out: &Path, opts: &AnalyzeOptions) -> Result<String> {
    let rows = read_input(input, opts.one_way)?;
    let analysis = analyze_rows(&rows, opts)?;
    write_records(out, &ANALYZE_HEADER, &analysis.records)?;
    Ok(format!(
        "{} rejections out of N = {} ({}); procedure {}, alpha {}",
        analysis.rejections,
        analysis.layout.total(),
        analysis.layout.describe(),
        opts.procedure,
        opts.alpha
    ))
}
