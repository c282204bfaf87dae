//! Validated per-hypothesis vectors bound to a [`Layout`].

use crate::error::{GbhError, Result};
use crate::layout::Layout;

fn check_len(layout: &Layout, got: usize) -> Result<()> {
    let expected = layout.total();
    if got == expected {
        Ok(())
    } else {
        Err(GbhError::LengthMismatch { expected, got })
    }
}

/// P-values in flat layout order, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PValueSet {
    layout: Layout,
    values: Vec<f64>,
}

impl PValueSet {
    pub fn new(layout: Layout, values: Vec<f64>) -> Result<Self> {
        check_len(&layout, values.len())?;
        // NaN fails both comparisons and is reported as out of range
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v >= 0.0 && **v <= 1.0))
        {
            return Err(GbhError::OutOfRange { index, value });
        }
        Ok(PValueSet { layout, values })
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// P-values of one unit (group or cell).
    pub fn unit(&self, unit: usize) -> &[f64] {
        &self.values[self.layout.unit_range(unit)]
    }
}

/// Which hypotheses are true nulls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthMask {
    layout: Layout,
    is_null: Vec<bool>,
}

impl TruthMask {
    pub fn new(layout: Layout, is_null: Vec<bool>) -> Result<Self> {
        check_len(&layout, is_null.len())?;
        Ok(TruthMask { layout, is_null })
    }

    pub fn all_null(layout: Layout) -> Self {
        let n = layout.total();
        TruthMask {
            layout,
            is_null: vec![true; n],
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn is_null(&self) -> &[bool] {
        &self.is_null
    }

    pub fn null_count(&self) -> usize {
        self.is_null.iter().filter(|&&b| b).count()
    }
}

/// Non-negative extended-real weights, one per hypothesis. `+inf` is allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment {
    layout: Layout,
    weights: Vec<f64>,
}

impl WeightAssignment {
    pub fn new(layout: Layout, weights: Vec<f64>) -> Result<Self> {
        check_len(&layout, weights.len())?;
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| w.is_nan() || **w < 0.0)
        {
            return Err(GbhError::InvalidWeight { index, value });
        }
        Ok(WeightAssignment { layout, weights })
    }

    pub fn uniform(layout: Layout, weight: f64) -> Result<Self> {
        let n = layout.total();
        Self::new(layout, vec![weight; n])
    }

    /// Expands one weight per unit (group or cell) to every member.
    pub fn from_units(layout: Layout, unit_weights: &[f64]) -> Result<Self> {
        if unit_weights.len() != layout.unit_count() {
            return Err(GbhError::LengthMismatch {
                expected: layout.unit_count(),
                got: unit_weights.len(),
            });
        }
        let mut weights = Vec::with_capacity(layout.total());
        for (unit, &w) in unit_weights.iter().enumerate() {
            weights.extend(std::iter::repeat_n(w, layout.unit_sizes()[unit]));
        }
        Self::new(layout, weights)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Outcome of a step-up run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectionSet {
    layout: Layout,
    rejected: Vec<bool>,
    threshold_index: usize,
}

impl RejectionSet {
    pub(crate) fn new(layout: Layout, rejected: Vec<bool>, threshold_index: usize) -> Self {
        debug_assert_eq!(rejected.iter().filter(|&&r| r).count(), threshold_index);
        RejectionSet {
            layout,
            rejected,
            threshold_index,
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn rejected(&self) -> &[bool] {
        &self.rejected
    }

    /// `R`, the number of rejections.
    pub fn threshold_index(&self) -> usize {
        self.threshold_index
    }

    pub fn count(&self) -> usize {
        self.threshold_index
    }

    pub fn is_subset_of(&self, other: &RejectionSet) -> bool {
        self.rejected
            .iter()
            .zip(&other.rejected)
            .all(|(&a, &b)| !a || b)
    }
}
