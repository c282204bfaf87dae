//! Error and performance metrics, and null proportions per structural unit.

use crate::data::{RejectionSet, TruthMask};
use crate::error::{GbhError, Result};
use crate::layout::{Layout, LayoutKind};

const IDENTITY_TOL: f64 = 1e-9;

/// False discovery proportion `V / max(R, 1)`.
pub fn fdp(rej: &RejectionSet, truth: &TruthMask) -> Result<f64> {
    if rej.layout() != truth.layout() {
        return Err(GbhError::LayoutMismatch);
    }
    let false_rejections = rej
        .rejected()
        .iter()
        .zip(truth.is_null())
        .filter(|(&r, &null)| r && null)
        .count();
    Ok(false_rejections as f64 / rej.count().max(1) as f64)
}

/// Fraction of non-nulls that were rejected; 0 when every hypothesis is null.
pub fn power(rej: &RejectionSet, truth: &TruthMask) -> Result<f64> {
    if rej.layout() != truth.layout() {
        return Err(GbhError::LayoutMismatch);
    }
    let (mut hits, mut signals) = (0usize, 0usize);
    for (&r, &null) in rej.rejected().iter().zip(truth.is_null()) {
        if !null {
            signals += 1;
            hits += r as usize;
        }
    }
    if signals == 0 {
        Ok(0.0)
    } else {
        Ok(hits as f64 / signals as f64)
    }
}

/// Proportions of true nulls at every structural level of a layout.
///
/// `rows` holds per-group (one-way) or per-row proportions, `cols` the
/// per-column proportions (empty for one-way), and `cells` the per-cell
/// proportions (only for multi-per-cell grids).
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionTable {
    overall: f64,
    rows: Vec<f64>,
    cols: Vec<f64>,
    cells: Vec<f64>,
}

impl ProportionTable {
    /// Validates ranges, shapes, and the aggregation identities against `layout`.
    pub fn new(
        layout: &Layout,
        overall: f64,
        rows: Vec<f64>,
        cols: Vec<f64>,
        cells: Vec<f64>,
    ) -> Result<Self> {
        let (want_cols, want_cells) = match layout.kind() {
            LayoutKind::OneWay => (0, 0),
            LayoutKind::TwoWayOnePerCell => (layout.cols(), 0),
            LayoutKind::TwoWayCells => (layout.cols(), layout.unit_count()),
        };
        if rows.len() != layout.rows() || cols.len() != want_cols || cells.len() != want_cells {
            return Err(GbhError::InvalidProportions(format!(
                "expected {} row, {want_cols} column and {want_cells} cell proportions",
                layout.rows()
            )));
        }
        let in_unit = |x: &f64| (0.0..=1.0).contains(x);
        if !in_unit(&overall)
            || !rows.iter().all(in_unit)
            || !cols.iter().all(in_unit)
            || !cells.iter().all(in_unit)
        {
            return Err(GbhError::InvalidProportions(
                "every proportion must lie in [0, 1]".into(),
            ));
        }
        let table = ProportionTable {
            overall,
            rows,
            cols,
            cells,
        };
        table.check_identities(layout)?;
        Ok(table)
    }

    /// Every unit at every level has null proportion `pi0`.
    pub fn uniform(layout: &Layout, pi0: f64) -> Result<Self> {
        let (cols, cells) = match layout.kind() {
            LayoutKind::OneWay => (0, 0),
            LayoutKind::TwoWayOnePerCell => (layout.cols(), 0),
            LayoutKind::TwoWayCells => (layout.cols(), layout.unit_count()),
        };
        Self::new(
            layout,
            pi0,
            vec![pi0; layout.rows()],
            vec![pi0; cols],
            vec![pi0; cells],
        )
    }

    fn check_identities(&self, layout: &Layout) -> Result<()> {
        let n = layout.total() as f64;
        let weighted = |props: &[f64], sizes: &[usize]| -> f64 {
            props
                .iter()
                .zip(sizes)
                .map(|(p, &s)| p * s as f64)
                .sum::<f64>()
        };
        let mismatch = |what: &str| {
            Err(GbhError::InvalidProportions(format!(
                "{what} disagree with the overall proportion"
            )))
        };
        if (weighted(&self.rows, layout.row_sizes()) - n * self.overall).abs() > IDENTITY_TOL * n {
            return mismatch("row proportions");
        }
        if !self.cols.is_empty()
            && (weighted(&self.cols, layout.col_sizes()) - n * self.overall).abs()
                > IDENTITY_TOL * n
        {
            return mismatch("column proportions");
        }
        if !self.cells.is_empty() {
            let cols = layout.cols();
            for (g, &row) in self.rows.iter().enumerate() {
                let cells = &self.cells[g * cols..(g + 1) * cols];
                let sizes = &layout.unit_sizes()[g * cols..(g + 1) * cols];
                let ng = layout.row_size(g) as f64;
                if (weighted(cells, sizes) - ng * row).abs() > IDENTITY_TOL * ng {
                    return mismatch("cell proportions");
                }
            }
            for (h, &col) in self.cols.iter().enumerate() {
                let (mut acc, nh) = (0.0, layout.col_size(h) as f64);
                for g in 0..layout.rows() {
                    let u = g * cols + h;
                    acc += self.cells[u] * layout.unit_sizes()[u] as f64;
                }
                if (acc - nh * col).abs() > IDENTITY_TOL * nh {
                    return mismatch("cell proportions");
                }
            }
        }
        Ok(())
    }

    /// `pi_0`.
    pub fn overall(&self) -> f64 {
        self.overall
    }

    /// `pi_g0` (one-way, one-per-cell rows) or `pi_g00` (multi-per-cell rows).
    pub fn rows(&self) -> &[f64] {
        &self.rows
    }

    /// `pi_0h` or `pi_0h0`.
    pub fn cols(&self) -> &[f64] {
        &self.cols
    }

    /// `pi_gh0`, row-major.
    pub fn cells(&self) -> &[f64] {
        &self.cells
    }
}

/// Exact null proportions implied by a truth mask.
pub fn null_proportions(truth: &TruthMask) -> ProportionTable {
    let layout = truth.layout();
    let mut row_nulls = vec![0usize; layout.rows()];
    let mut col_nulls = vec![0usize; layout.cols()];
    let mut cell_nulls = vec![0usize; layout.unit_count()];
    for (unit, cell) in cell_nulls.iter_mut().enumerate() {
        let nulls = truth.is_null()[layout.unit_range(unit)]
            .iter()
            .filter(|&&b| b)
            .count();
        *cell = nulls;
        row_nulls[layout.row_of_unit(unit)] += nulls;
        col_nulls[layout.col_of_unit(unit)] += nulls;
    }
    let ratio = |a: &[usize], b: &[usize]| -> Vec<f64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| x as f64 / y as f64)
            .collect()
    };
    let overall = truth.null_count() as f64 / layout.total() as f64;
    let rows = ratio(&row_nulls, layout.row_sizes());
    let (cols, cells) = match layout.kind() {
        LayoutKind::OneWay => (Vec::new(), Vec::new()),
        LayoutKind::TwoWayOnePerCell => (ratio(&col_nulls, layout.col_sizes()), Vec::new()),
        LayoutKind::TwoWayCells => (
            ratio(&col_nulls, layout.col_sizes()),
            ratio(&cell_nulls, layout.unit_sizes()),
        ),
    };
    ProportionTable {
        overall,
        rows,
        cols,
        cells,
    }
}
