//! Closed-form weights built from known null proportions.
//!
//! Every variant is a harmonic combination of one-way style component
//! weights `pi_u (1 - pi_ref) / (1 - pi_u)`, where `pi_u` is the null
//! proportion of a unit (group, row, column, cell) and `pi_ref` that of the
//! enclosing level. A unit with no signals (`pi_u = 1`) gets an infinite
//! component weight; a unit with no nulls gets weight 0.

use serde::{Deserialize, Serialize};

use crate::data::{TruthMask, WeightAssignment};
use crate::error::{GbhError, Result};
use crate::layout::{Layout, LayoutKind};
use crate::metrics::ProportionTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleVariant {
    /// Group weights for one-way layouts.
    OneWay,
    /// Equal-share row/column combination, one hypothesis per cell.
    TwoWayOnePerEqual,
    /// Row/column combination weighted by the number of rows and columns.
    TwoWayOnePerSizeAdjusted,
    /// Cell-within-row, cell-within-column, row and column terms.
    TwoWayCellsFourTerm,
    /// Row and column terms only.
    TwoWayCellsTwoTerm,
    /// Two-term weights refined for a common cell size.
    TwoWayCellsEqualSizeA,
    /// Four-term weights refined for a common cell size.
    TwoWayCellsEqualSizeB,
}

impl OracleVariant {
    pub const ALL: [OracleVariant; 7] = [
        OracleVariant::OneWay,
        OracleVariant::TwoWayOnePerEqual,
        OracleVariant::TwoWayOnePerSizeAdjusted,
        OracleVariant::TwoWayCellsFourTerm,
        OracleVariant::TwoWayCellsTwoTerm,
        OracleVariant::TwoWayCellsEqualSizeA,
        OracleVariant::TwoWayCellsEqualSizeB,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OracleVariant::OneWay => "one_way",
            OracleVariant::TwoWayOnePerEqual => "two_way_one_per_equal",
            OracleVariant::TwoWayOnePerSizeAdjusted => "two_way_one_per_size_adjusted",
            OracleVariant::TwoWayCellsFourTerm => "two_way_cells_four_term",
            OracleVariant::TwoWayCellsTwoTerm => "two_way_cells_two_term",
            OracleVariant::TwoWayCellsEqualSizeA => "two_way_cells_equal_size_a",
            OracleVariant::TwoWayCellsEqualSizeB => "two_way_cells_equal_size_b",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|v| v.name() == name)
    }

    pub fn layout_kind(self) -> LayoutKind {
        match self {
            OracleVariant::OneWay => LayoutKind::OneWay,
            OracleVariant::TwoWayOnePerEqual | OracleVariant::TwoWayOnePerSizeAdjusted => {
                LayoutKind::TwoWayOnePerCell
            }
            _ => LayoutKind::TwoWayCells,
        }
    }

    /// Default variant for a layout kind.
    pub fn default_for(kind: LayoutKind) -> Self {
        match kind {
            LayoutKind::OneWay => OracleVariant::OneWay,
            LayoutKind::TwoWayOnePerCell => OracleVariant::TwoWayOnePerEqual,
            LayoutKind::TwoWayCells => OracleVariant::TwoWayCellsFourTerm,
        }
    }

    fn check(self, layout: &Layout) -> Result<()> {
        if self.layout_kind() == layout.kind() {
            Ok(())
        } else {
            Err(GbhError::VariantMismatch {
                variant: self.name(),
                layout: layout.kind().name(),
            })
        }
    }
}

/// `pi_u (1 - pi_ref) / (1 - pi_u)`, `+inf` when the unit is all null.
pub fn component_weight(pi_unit: f64, pi_ref: f64) -> f64 {
    if pi_unit >= 1.0 {
        f64::INFINITY
    } else {
        pi_unit * (1.0 - pi_ref) / (1.0 - pi_unit)
    }
}

/// `1 / sum(c_k / w_k)` over terms with positive coefficient.
///
/// Extended-real: `c / inf = 0`, `c / 0 = inf`, and a zero or infinite sum
/// maps to `inf` or `0` respectively.
pub(crate) fn harmonic(terms: &[(f64, f64)]) -> f64 {
    let inverse: f64 = terms
        .iter()
        .filter(|(c, _)| *c > 0.0)
        .map(|&(c, w)| c / w)
        .sum();
    1.0 / inverse
}

fn check_shape(props: &ProportionTable, layout: &Layout) -> Result<()> {
    let cols_ok = match layout.kind() {
        LayoutKind::OneWay => props.cols().is_empty(),
        _ => props.cols().len() == layout.cols(),
    };
    let cells_ok = layout.kind() != LayoutKind::TwoWayCells
        || props.cells().len() == layout.unit_count();
    if props.rows().len() == layout.rows() && cols_ok && cells_ok {
        Ok(())
    } else {
        Err(GbhError::InvalidProportions(format!(
            "proportion table does not fit a {} layout",
            layout.describe()
        )))
    }
}

/// Group weights `pi_g0 (1 - pi_0) / (1 - pi_g0)`.
pub fn oneway_oracle_weights(props: &ProportionTable, layout: &Layout) -> Result<WeightAssignment> {
    OracleVariant::OneWay.check(layout)?;
    check_shape(props, layout)?;
    let pi0 = props.overall();
    let groups: Vec<f64> = props
        .rows()
        .iter()
        .map(|&pg| component_weight(pg, pi0))
        .collect();
    WeightAssignment::from_units(layout.clone(), &groups)
}

pub fn twoway_oneper_oracle_weights(
    props: &ProportionTable,
    layout: &Layout,
    variant: OracleVariant,
) -> Result<WeightAssignment> {
    variant.check(layout)?;
    check_shape(props, layout)?;
    let (m, n) = (layout.rows(), layout.cols());
    let pi0 = props.overall();
    let row_w: Vec<f64> = props.rows().iter().map(|&p| component_weight(p, pi0)).collect();
    let col_w: Vec<f64> = props.cols().iter().map(|&p| component_weight(p, pi0)).collect();
    let (cr, cc) = match variant {
        OracleVariant::TwoWayOnePerEqual => (0.5, 0.5),
        _ => (m as f64 / (m + n) as f64, n as f64 / (m + n) as f64),
    };
    let mut cells = Vec::with_capacity(m * n);
    for wg in &row_w {
        for wh in &col_w {
            cells.push(harmonic(&[(cr, *wg), (cc, *wh)]));
        }
    }
    WeightAssignment::from_units(layout.clone(), &cells)
}

pub fn twoway_cells_oracle_weights(
    props: &ProportionTable,
    layout: &Layout,
    variant: OracleVariant,
) -> Result<WeightAssignment> {
    variant.check(layout)?;
    check_shape(props, layout)?;
    let (m, n) = (layout.rows(), layout.cols());
    let equal = matches!(
        variant,
        OracleVariant::TwoWayCellsEqualSizeA | OracleVariant::TwoWayCellsEqualSizeB
    );
    let p = match layout.common_cell_size() {
        Some(p) => p as f64,
        None if equal => return Err(GbhError::UnequalCells),
        None => 0.0,
    };
    let pi0 = props.overall();
    let mut cells = Vec::with_capacity(m * n);
    for g in 0..m {
        let pi_row = props.rows()[g];
        let w_row = component_weight(pi_row, pi0);
        for h in 0..n {
            let pi_col = props.cols()[h];
            let w_col = component_weight(pi_col, pi0);
            let pi_cell = props.cells()[g * n + h];
            let w_cell_row = component_weight(pi_cell, pi_row);
            let w_cell_col = component_weight(pi_cell, pi_col);
            let w = match variant {
                OracleVariant::TwoWayCellsFourTerm => harmonic(&[
                    (0.25, w_cell_row),
                    (0.25, w_cell_col),
                    (0.25, w_row),
                    (0.25, w_col),
                ]),
                OracleVariant::TwoWayCellsTwoTerm => harmonic(&[(0.5, w_row), (0.5, w_col)]),
                OracleVariant::TwoWayCellsEqualSizeA => {
                    let d = p * (m + n) as f64;
                    harmonic(&[(m as f64 * p / d, w_row), (n as f64 * p / d, w_col)])
                }
                OracleVariant::TwoWayCellsEqualSizeB => {
                    let d = p * (m + n) as f64;
                    harmonic(&[
                        (p / d, w_cell_row),
                        (p / d, w_cell_col),
                        (p * (m - 1) as f64 / d, w_row),
                        (p * (n - 1) as f64 / d, w_col),
                    ])
                }
                _ => unreachable!("variant checked against layout"),
            };
            cells.push(w);
        }
    }
    WeightAssignment::from_units(layout.clone(), &cells)
}

/// Dispatches on the variant.
pub fn oracle_weights(
    props: &ProportionTable,
    layout: &Layout,
    variant: OracleVariant,
) -> Result<WeightAssignment> {
    match variant {
        OracleVariant::OneWay => oneway_oracle_weights(props, layout),
        OracleVariant::TwoWayOnePerEqual | OracleVariant::TwoWayOnePerSizeAdjusted => {
            twoway_oneper_oracle_weights(props, layout, variant)
        }
        _ => twoway_cells_oracle_weights(props, layout, variant),
    }
}

/// `sum over true nulls of 1 / w_i` minus `N`. Infinite weights contribute 0.
pub fn verify_weight_identity(w: &WeightAssignment, truth: &TruthMask) -> Result<f64> {
    if w.layout() != truth.layout() {
        return Err(GbhError::LayoutMismatch);
    }
    let sum: f64 = w
        .weights()
        .iter()
        .zip(truth.is_null())
        .filter(|(_, &null)| null)
        .map(|(&wi, _)| 1.0 / wi)
        .sum();
    Ok(sum - w.layout().total() as f64)
}
