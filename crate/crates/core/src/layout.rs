//! Classification structure of a family of hypotheses.
//!
//! Every layout is stored as a sequence of *units* (groups for one-way
//! layouts, cells for two-way layouts), each holding a contiguous run of
//! hypotheses in the flat order. Two-way units are row-major, so the flat
//! order is `(g, h, k)` with `k` innermost.

use std::ops::Range;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{GbhError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutKind {
    /// `m` groups with `n_g` hypotheses each.
    OneWay,
    /// `m x n` grid, one hypothesis per cell.
    TwoWayOnePerCell,
    /// `m x n` grid of cells with `n_gh >= 1` hypotheses each.
    TwoWayCells,
}

impl LayoutKind {
    pub fn name(self) -> &'static str {
        match self {
            LayoutKind::OneWay => "one-way",
            LayoutKind::TwoWayOnePerCell => "two-way one-per-cell",
            LayoutKind::TwoWayCells => "two-way multi-per-cell",
        }
    }
}

/// Structured position of a hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Index {
    Group { group: usize, member: usize },
    Cell { row: usize, col: usize },
    Member { row: usize, col: usize, member: usize },
}

#[derive(Debug, PartialEq, Eq)]
struct Inner {
    kind: LayoutKind,
    rows: usize,
    cols: usize,
    unit_sizes: Vec<usize>,
    offsets: Vec<usize>,
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
}

/// Immutable, cheaply clonable description of how hypotheses are classified.
#[derive(Debug, Clone)]
pub struct Layout {
    inner: Arc<Inner>,
}

impl PartialEq for Layout {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner == other.inner
    }
}

impl Eq for Layout {}

impl Layout {
    pub fn one_way(group_sizes: Vec<usize>) -> Result<Self> {
        if group_sizes.is_empty() {
            return Err(GbhError::InvalidLayout("at least one group is required".into()));
        }
        if let Some(g) = group_sizes.iter().position(|&s| s == 0) {
            return Err(GbhError::InvalidLayout(format!("group {g} is empty")));
        }
        let rows = group_sizes.len();
        let row_sizes = group_sizes.clone();
        let total = group_sizes.iter().sum();
        Ok(Self::build(
            LayoutKind::OneWay,
            rows,
            1,
            group_sizes,
            row_sizes,
            vec![total],
        ))
    }

    pub fn two_way(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GbhError::InvalidLayout(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        Ok(Self::build(
            LayoutKind::TwoWayOnePerCell,
            rows,
            cols,
            vec![1; rows * cols],
            vec![cols; rows],
            vec![rows; cols],
        ))
    }

    /// Two-way grid of cells; `cell_sizes` is row-major with `rows * cols` entries.
    pub fn two_way_cells(rows: usize, cols: usize, cell_sizes: Vec<usize>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(GbhError::InvalidLayout(format!(
                "grid dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if cell_sizes.len() != rows * cols {
            return Err(GbhError::InvalidLayout(format!(
                "expected {} cell sizes for a {rows}x{cols} grid, got {}",
                rows * cols,
                cell_sizes.len()
            )));
        }
        if let Some(u) = cell_sizes.iter().position(|&s| s == 0) {
            return Err(GbhError::InvalidLayout(format!(
                "cell ({}, {}) is empty",
                u / cols,
                u % cols
            )));
        }
        let mut row_sizes = vec![0; rows];
        let mut col_sizes = vec![0; cols];
        for (u, &s) in cell_sizes.iter().enumerate() {
            row_sizes[u / cols] += s;
            col_sizes[u % cols] += s;
        }
        Ok(Self::build(
            LayoutKind::TwoWayCells,
            rows,
            cols,
            cell_sizes,
            row_sizes,
            col_sizes,
        ))
    }

    pub fn equal_cells(rows: usize, cols: usize, cell_size: usize) -> Result<Self> {
        Self::two_way_cells(rows, cols, vec![cell_size; rows * cols])
    }

    fn build(
        kind: LayoutKind,
        rows: usize,
        cols: usize,
        unit_sizes: Vec<usize>,
        row_sizes: Vec<usize>,
        col_sizes: Vec<usize>,
    ) -> Self {
        let mut offsets = Vec::with_capacity(unit_sizes.len() + 1);
        offsets.push(0);
        let mut acc = 0;
        for &s in &unit_sizes {
            acc += s;
            offsets.push(acc);
        }
        Layout {
            inner: Arc::new(Inner {
                kind,
                rows,
                cols,
                unit_sizes,
                offsets,
                row_sizes,
                col_sizes,
            }),
        }
    }

    pub fn kind(&self) -> LayoutKind {
        self.inner.kind
    }

    /// Total number of hypotheses `N`.
    pub fn total(&self) -> usize {
        *self.inner.offsets.last().expect("offsets never empty")
    }

    /// Number of groups (one-way) or rows (two-way), `m`.
    pub fn rows(&self) -> usize {
        self.inner.rows
    }

    /// Number of columns `n`; 1 for one-way layouts.
    pub fn cols(&self) -> usize {
        self.inner.cols
    }

    pub fn unit_count(&self) -> usize {
        self.inner.unit_sizes.len()
    }

    pub fn unit_sizes(&self) -> &[usize] {
        &self.inner.unit_sizes
    }

    pub fn unit_range(&self, unit: usize) -> Range<usize> {
        self.inner.offsets[unit]..self.inner.offsets[unit + 1]
    }

    /// Unit containing the flat index `i`.
    pub fn unit_of(&self, i: usize) -> usize {
        // offsets is strictly increasing, so the partition point is unique
        self.inner.offsets.partition_point(|&o| o <= i) - 1
    }

    pub fn row_of_unit(&self, unit: usize) -> usize {
        unit / self.inner.cols
    }

    pub fn col_of_unit(&self, unit: usize) -> usize {
        unit % self.inner.cols
    }

    /// `n_g.`: hypotheses in group / row `g`.
    pub fn row_size(&self, g: usize) -> usize {
        self.inner.row_sizes[g]
    }

    /// `n_.h`: hypotheses in column `h`.
    pub fn col_size(&self, h: usize) -> usize {
        self.inner.col_sizes[h]
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.inner.row_sizes
    }

    pub fn col_sizes(&self) -> &[usize] {
        &self.inner.col_sizes
    }

    /// The shared cell size when every cell holds the same number of hypotheses.
    pub fn common_cell_size(&self) -> Option<usize> {
        let first = self.inner.unit_sizes[0];
        self.inner
            .unit_sizes
            .iter()
            .all(|&s| s == first)
            .then_some(first)
    }

    pub fn flat(&self, index: Index) -> Option<usize> {
        let (unit, member) = match (self.kind(), index) {
            (LayoutKind::OneWay, Index::Group { group, member }) if group < self.rows() => {
                (group, member)
            }
            (LayoutKind::TwoWayOnePerCell, Index::Cell { row, col })
                if row < self.rows() && col < self.cols() =>
            {
                (row * self.cols() + col, 0)
            }
            (LayoutKind::TwoWayCells, Index::Member { row, col, member })
                if row < self.rows() && col < self.cols() =>
            {
                (row * self.cols() + col, member)
            }
            _ => return None,
        };
        (member < self.inner.unit_sizes[unit]).then(|| self.inner.offsets[unit] + member)
    }

    pub fn index(&self, i: usize) -> Option<Index> {
        if i >= self.total() {
            return None;
        }
        let unit = self.unit_of(i);
        let member = i - self.inner.offsets[unit];
        let (row, col) = (self.row_of_unit(unit), self.col_of_unit(unit));
        Some(match self.kind() {
            LayoutKind::OneWay => Index::Group {
                group: unit,
                member,
            },
            LayoutKind::TwoWayOnePerCell => Index::Cell { row, col },
            LayoutKind::TwoWayCells => Index::Member { row, col, member },
        })
    }

    /// Short human description, e.g. `two_way_cells 3x4`.
    pub fn describe(&self) -> String {
        match self.kind() {
            LayoutKind::OneWay => format!("one_way {} groups", self.rows()),
            LayoutKind::TwoWayOnePerCell => {
                format!("two_way_one_per_cell {}x{}", self.rows(), self.cols())
            }
            LayoutKind::TwoWayCells => format!("two_way_cells {}x{}", self.rows(), self.cols()),
        }
    }
}
