//! Data-adaptive weights driven by counts of p-values at or below `lambda`.
//!
//! Each component estimate has the form
//!
//! ```text
//! (size - R + 1) / (scale * (1 - lambda)) * (R + others) / R
//! ```
//!
//! where `R` counts sub-threshold p-values in the unit and `others` is the
//! augmented count of the sibling units at the same level (their counts plus
//! one each). With `R = 0` the ratio is `+inf`, except when there are no
//! siblings at all, where it is identically 1.

use serde::{Deserialize, Serialize};

use crate::data::{PValueSet, WeightAssignment};
use crate::error::{check_lambda, GbhError, Result};
use crate::layout::{Layout, LayoutKind};
use crate::oracle::harmonic;

/// Threshold counts `R(lambda)` at every structural level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    lambda_bits: u64,
    units: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    total: usize,
}

impl CountTable {
    pub fn lambda(&self) -> f64 {
        f64::from_bits(self.lambda_bits)
    }

    /// Per group (one-way) or per cell (two-way), flat unit order.
    pub fn units(&self) -> &[usize] {
        &self.units
    }

    /// `R_{n_g.}` per group or row.
    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    /// `R_{m_h}` / `R_{n_.h}` per column; empty for one-way layouts.
    pub fn cols(&self) -> &[usize] {
        &self.cols
    }

    /// `R_N`.
    pub fn total(&self) -> usize {
        self.total
    }
}

/// Counts `I(P <= lambda)`; a p-value equal to `lambda` is counted.
pub fn threshold_counts(p: &PValueSet, lambda: f64) -> Result<CountTable> {
    check_lambda(lambda)?;
    let layout = p.layout();
    let mut units = vec![0; layout.unit_count()];
    let mut rows = vec![0; layout.rows()];
    let mut cols = vec![0; layout.cols()];
    for (unit, count) in units.iter_mut().enumerate() {
        *count = p.unit(unit).iter().filter(|&&v| v <= lambda).count();
        rows[layout.row_of_unit(unit)] += *count;
        cols[layout.col_of_unit(unit)] += *count;
    }
    if layout.kind() == LayoutKind::OneWay {
        cols.clear();
    }
    let total = rows.iter().sum();
    Ok(CountTable {
        lambda_bits: lambda.to_bits(),
        units,
        rows,
        cols,
        total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdaptiveVariant {
    OneWay,
    TwoWayOnePer,
    TwoWayOnePerSizeAdjusted,
    TwoWayCellsFourTerm,
    TwoWayCellsTwoTerm,
    /// Four-term estimate for a common cell size, with the row factor
    /// `p(m-1)` on both the row and the column term.
    TwoWayCellsEqualSizeFour,
    /// Same as [`AdaptiveVariant::TwoWayCellsEqualSizeFour`] but with
    /// `p(n-1)` on the column term.
    TwoWayCellsEqualSizeFourSymmetric,
    TwoWayCellsEqualSizeTwo,
}

impl AdaptiveVariant {
    pub const ALL: [AdaptiveVariant; 8] = [
        AdaptiveVariant::OneWay,
        AdaptiveVariant::TwoWayOnePer,
        AdaptiveVariant::TwoWayOnePerSizeAdjusted,
        AdaptiveVariant::TwoWayCellsFourTerm,
        AdaptiveVariant::TwoWayCellsTwoTerm,
        AdaptiveVariant::TwoWayCellsEqualSizeFour,
        AdaptiveVariant::TwoWayCellsEqualSizeFourSymmetric,
        AdaptiveVariant::TwoWayCellsEqualSizeTwo,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AdaptiveVariant::OneWay => "one_way",
            AdaptiveVariant::TwoWayOnePer => "two_way_one_per",
            AdaptiveVariant::TwoWayOnePerSizeAdjusted => "two_way_one_per_size_adjusted",
            AdaptiveVariant::TwoWayCellsFourTerm => "two_way_cells_four_term",
            AdaptiveVariant::TwoWayCellsTwoTerm => "two_way_cells_two_term",
            AdaptiveVariant::TwoWayCellsEqualSizeFour => "two_way_cells_equal_size_four",
            AdaptiveVariant::TwoWayCellsEqualSizeFourSymmetric => {
                "two_way_cells_equal_size_four_symmetric"
            }
            AdaptiveVariant::TwoWayCellsEqualSizeTwo => "two_way_cells_equal_size_two",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn layout_kind(self) -> LayoutKind {
        match self {
            AdaptiveVariant::OneWay => LayoutKind::OneWay,
            AdaptiveVariant::TwoWayOnePer | AdaptiveVariant::TwoWayOnePerSizeAdjusted => {
                LayoutKind::TwoWayOnePerCell
            }
            _ => LayoutKind::TwoWayCells,
        }
    }

    pub fn default_for(kind: LayoutKind) -> Self {
        match kind {
            LayoutKind::OneWay => AdaptiveVariant::OneWay,
            LayoutKind::TwoWayOnePerCell => AdaptiveVariant::TwoWayOnePer,
            LayoutKind::TwoWayCells => AdaptiveVariant::TwoWayCellsFourTerm,
        }
    }

    fn needs_equal_cells(self) -> bool {
        matches!(
            self,
            AdaptiveVariant::TwoWayCellsEqualSizeFour
                | AdaptiveVariant::TwoWayCellsEqualSizeFourSymmetric
                | AdaptiveVariant::TwoWayCellsEqualSizeTwo
        )
    }

    fn check(self, layout: &Layout) -> Result<()> {
        if self.layout_kind() != layout.kind() {
            return Err(GbhError::VariantMismatch {
                variant: self.name(),
                layout: layout.kind().name(),
            });
        }
        if self.needs_equal_cells() && layout.common_cell_size().is_none() {
            return Err(GbhError::UnequalCells);
        }
        Ok(())
    }
}

/// `(size - count + 1) / (scale (1 - lambda)) * augmented / count`.
///
/// `augmented` is `count` plus the augmented sibling counts.
pub fn component_estimate(
    size: usize,
    count: usize,
    scale: usize,
    augmented: usize,
    lambda: f64,
) -> f64 {
    debug_assert!(augmented >= count);
    let ratio = match (count, augmented) {
        (0, 0) => 1.0,
        (0, _) => f64::INFINITY,
        _ => augmented as f64 / count as f64,
    };
    (size - count + 1) as f64 / (scale as f64 * (1.0 - lambda)) * ratio
}

/// Row and column components shared by the two-way estimates.
struct Margins {
    rows: Vec<f64>,
    cols: Vec<f64>,
}

fn margins(layout: &Layout, counts: &CountTable, lambda: f64) -> Margins {
    let (m, n, total) = (layout.rows(), layout.cols(), layout.total());
    let r = counts.total();
    let rows = (0..m)
        .map(|g| component_estimate(layout.row_size(g), counts.rows()[g], total, r + m - 1, lambda))
        .collect();
    let cols = (0..n)
        .map(|h| component_estimate(layout.col_size(h), counts.cols()[h], total, r + n - 1, lambda))
        .collect();
    Margins { rows, cols }
}

/// One-way estimate per group.
pub fn oneway_adaptive_weights(p: &PValueSet, lambda: f64) -> Result<WeightAssignment> {
    let layout = p.layout();
    AdaptiveVariant::OneWay.check(layout)?;
    let counts = threshold_counts(p, lambda)?;
    let (m, total) = (layout.rows(), layout.total());
    let groups: Vec<f64> = (0..m)
        .map(|g| {
            component_estimate(
                layout.row_size(g),
                counts.rows()[g],
                total,
                counts.total() + m - 1,
                lambda,
            )
        })
        .collect();
    WeightAssignment::from_units(layout.clone(), &groups)
}

pub fn twoway_oneper_adaptive_weights(
    p: &PValueSet,
    lambda: f64,
    variant: AdaptiveVariant,
) -> Result<WeightAssignment> {
    let layout = p.layout();
    variant.check(layout)?;
    let counts = threshold_counts(p, lambda)?;
    let (m, n) = (layout.rows(), layout.cols());
    let margins = margins(layout, &counts, lambda);
    let (cr, cc) = match variant {
        AdaptiveVariant::TwoWayOnePer => (0.5, 0.5),
        _ => (m as f64 / (m + n) as f64, n as f64 / (m + n) as f64),
    };
    let mut cells = Vec::with_capacity(m * n);
    for wg in &margins.rows {
        for wh in &margins.cols {
            cells.push(harmonic(&[(cr, *wg), (cc, *wh)]));
        }
    }
    WeightAssignment::from_units(layout.clone(), &cells)
}

/// The four component estimates of one cell: cell-within-row,
/// cell-within-column, row, column.
pub fn cell_components(
    layout: &Layout,
    counts: &CountTable,
    g: usize,
    h: usize,
    lambda: f64,
) -> [f64; 4] {
    let (m, n, total) = (layout.rows(), layout.cols(), layout.total());
    let u = g * n + h;
    let size = layout.unit_sizes()[u];
    let r_cell = counts.units()[u];
    let (r_row, r_col, r_all) = (counts.rows()[g], counts.cols()[h], counts.total());
    [
        component_estimate(size, r_cell, layout.row_size(g), r_row + n - 1, lambda),
        component_estimate(size, r_cell, layout.col_size(h), r_col + m - 1, lambda),
        component_estimate(layout.row_size(g), r_row, total, r_all + m - 1, lambda),
        component_estimate(layout.col_size(h), r_col, total, r_all + n - 1, lambda),
    ]
}

pub fn twoway_cells_adaptive_weights(
    p: &PValueSet,
    lambda: f64,
    variant: AdaptiveVariant,
) -> Result<WeightAssignment> {
    let layout = p.layout();
    variant.check(layout)?;
    let counts = threshold_counts(p, lambda)?;
    let (m, n) = (layout.rows(), layout.cols());
    let cell_size = layout.common_cell_size().unwrap_or(1) as f64;
    let d = cell_size * (m + n) as f64;
    let mut cells = Vec::with_capacity(m * n);
    for g in 0..m {
        for h in 0..n {
            let [w1, w2, wg, wh] = cell_components(layout, &counts, g, h, lambda);
            let w = match variant {
                AdaptiveVariant::TwoWayCellsFourTerm => {
                    harmonic(&[(0.25, w1), (0.25, w2), (0.25, wg), (0.25, wh)])
                }
                AdaptiveVariant::TwoWayCellsTwoTerm => harmonic(&[(0.5, wg), (0.5, wh)]),
                AdaptiveVariant::TwoWayCellsEqualSizeFour => {
                    let side = cell_size * (m - 1) as f64 / d;
                    harmonic(&[
                        (cell_size / d, w1),
                        (cell_size / d, w2),
                        (side, wg),
                        (side, wh),
                    ])
                }
                AdaptiveVariant::TwoWayCellsEqualSizeFourSymmetric => harmonic(&[
                    (cell_size / d, w1),
                    (cell_size / d, w2),
                    (cell_size * (m - 1) as f64 / d, wg),
                    (cell_size * (n - 1) as f64 / d, wh),
                ]),
                AdaptiveVariant::TwoWayCellsEqualSizeTwo => harmonic(&[
                    (m as f64 * cell_size / d, wg),
                    (n as f64 * cell_size / d, wh),
                ]),
                _ => unreachable!("variant checked against layout"),
            };
            cells.push(w);
        }
    }
    WeightAssignment::from_units(layout.clone(), &cells)
}

/// Dispatches on the variant.
pub fn adaptive_weights(
    p: &PValueSet,
    lambda: f64,
    variant: AdaptiveVariant,
) -> Result<WeightAssignment> {
    match variant {
        AdaptiveVariant::OneWay => oneway_adaptive_weights(p, lambda),
        AdaptiveVariant::TwoWayOnePer | AdaptiveVariant::TwoWayOnePerSizeAdjusted => {
            twoway_oneper_adaptive_weights(p, lambda, variant)
        }
        _ => twoway_cells_adaptive_weights(p, lambda, variant),
    }
}
