//! Shared fixtures and independent transcriptions of the weight formulas.
//!
//! The `direct` functions evaluate each printed bracket expression as written,
//! without going through the component weights the library uses.
#![allow(dead_code)]

use gbh_core::{Layout, LayoutKind, PValueSet, TruthMask};
use rand::Rng;

pub fn random_layout<R: Rng>(rng: &mut R, kind: LayoutKind) -> Layout {
    match kind {
        LayoutKind::OneWay => {
            let m = rng.random_range(1..8);
            Layout::one_way((0..m).map(|_| rng.random_range(2..12)).collect()).unwrap()
        }
        LayoutKind::TwoWayOnePerCell => {
            Layout::two_way(rng.random_range(2..7), rng.random_range(2..7)).unwrap()
        }
        LayoutKind::TwoWayCells => {
            let (m, n) = (rng.random_range(2..6), rng.random_range(2..6));
            if rng.random_bool(0.5) {
                Layout::equal_cells(m, n, rng.random_range(2..6)).unwrap()
            } else {
                let sizes = (0..m * n).map(|_| rng.random_range(2..6)).collect();
                Layout::two_way_cells(m, n, sizes).unwrap()
            }
        }
    }
}

/// Truth mask for which every proportion entering the weights lies strictly
/// inside (0, 1), drawn by rejection.
pub fn interior_mask<R: Rng>(rng: &mut R, layout: &Layout) -> TruthMask {
    let pi = rng.random_range(0.2..0.8);
    loop {
        let mut mask: Vec<bool> = (0..layout.total()).map(|_| rng.random_bool(pi)).collect();
        // multi-member units get one null and one non-null at random positions
        for u in 0..layout.unit_count() {
            let range = layout.unit_range(u);
            if range.len() >= 2 {
                let a = rng.random_range(range.clone());
                let b = loop {
                    let b = rng.random_range(range.clone());
                    if b != a {
                        break b;
                    }
                };
                mask[a] = true;
                mask[b] = false;
            }
        }
        if is_interior(layout, &mask) {
            return TruthMask::new(layout.clone(), mask).unwrap();
        }
    }
}

fn mixed(values: impl Iterator<Item = bool>) -> bool {
    let (mut t, mut f) = (false, false);
    for v in values {
        t |= v;
        f |= !v;
    }
    t && f
}

pub fn is_interior(layout: &Layout, mask: &[bool]) -> bool {
    let rows_ok = (0..layout.rows()).all(|g| {
        mixed(
            (0..layout.total())
                .filter(|&i| layout.row_of_unit(layout.unit_of(i)) == g)
                .map(|i| mask[i]),
        )
    });
    let cols_ok = layout.kind() == LayoutKind::OneWay
        || (0..layout.cols()).all(|h| {
            mixed(
                (0..layout.total())
                    .filter(|&i| layout.col_of_unit(layout.unit_of(i)) == h)
                    .map(|i| mask[i]),
            )
        });
    let cells_ok = layout.kind() != LayoutKind::TwoWayCells
        || (0..layout.unit_count()).all(|u| mixed(layout.unit_range(u).map(|i| mask[i])));
    rows_ok && cols_ok && cells_ok
}

pub fn random_pvalues<R: Rng>(rng: &mut R, layout: &Layout) -> PValueSet {
    // a mix of small and uniform values so counts vary on both sides of lambda
    let values = (0..layout.total())
        .map(|_| {
            if rng.random_bool(0.3) {
                rng.random::<f64>() * 0.01
            } else {
                rng.random::<f64>()
            }
        })
        .collect();
    PValueSet::new(layout.clone(), values).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Null proportions computed by direct counting, independent of the library.
pub struct Props {
    pub pi0: f64,
    pub rows: Vec<f64>,
    pub cols: Vec<f64>,
    pub cells: Vec<f64>,
}

pub fn count_props(layout: &Layout, mask: &[bool]) -> Props {
    let frac = |idx: Vec<usize>| idx.iter().filter(|&&i| mask[i]).count() as f64 / idx.len() as f64;
    let all: Vec<usize> = (0..layout.total()).collect();
    let rows = (0..layout.rows())
        .map(|g| frac(all.iter().copied().filter(|&i| layout.row_of_unit(layout.unit_of(i)) == g).collect()))
        .collect();
    let cols = if layout.kind() == LayoutKind::OneWay {
        vec![]
    } else {
        (0..layout.cols())
            .map(|h| frac(all.iter().copied().filter(|&i| layout.col_of_unit(layout.unit_of(i)) == h).collect()))
            .collect()
    };
    let cells = (0..layout.unit_count()).map(|u| frac(layout.unit_range(u).collect())).collect();
    Props {
        pi0: frac(all),
        rows,
        cols,
        cells,
    }
}

pub mod direct {
    /// `pi_g (1 - pi_0) / (1 - pi_g)`.
    pub fn eq4(pg: f64, pi0: f64) -> f64 {
        pg * (1.0 - pi0) / (1.0 - pg)
    }

    pub fn eq8(pg: f64, ph: f64, pi0: f64) -> f64 {
        1.0 / (0.5 * ((1.0 / pg) * (1.0 - pg) / (1.0 - pi0) + (1.0 / ph) * (1.0 - ph) / (1.0 - pi0)))
    }

    pub fn eq10(m: f64, n: f64, pg: f64, ph: f64, pi0: f64) -> f64 {
        1.0 / ((1.0 / (m + n))
            * ((m / pg) * (1.0 - pg) / (1.0 - pi0) + (n / ph) * (1.0 - ph) / (1.0 - pi0)))
    }

    pub fn eq13(pc: f64, pg: f64, ph: f64, pi0: f64) -> f64 {
        1.0 / (0.25
            * ((1.0 / pc) * ((1.0 - pc) / (1.0 - pg) + (1.0 - pc) / (1.0 - ph))
                + ((1.0 / pg) * (1.0 - pg) / (1.0 - pi0) + (1.0 / ph) * (1.0 - ph) / (1.0 - pi0))))
    }

    pub fn eq14(pg: f64, ph: f64, pi0: f64) -> f64 {
        eq8(pg, ph, pi0)
    }

    pub fn eq15a(m: f64, n: f64, p: f64, pg: f64, ph: f64, pi0: f64) -> f64 {
        1.0 / ((1.0 / (p * (m + n)))
            * ((m * p / pg) * (1.0 - pg) / (1.0 - pi0) + (n * p / ph) * (1.0 - ph) / (1.0 - pi0)))
    }

    #[allow(clippy::too_many_arguments)]
    pub fn eq15b(m: f64, n: f64, p: f64, pc: f64, pg: f64, ph: f64, pi0: f64) -> f64 {
        1.0 / ((1.0 / (p * (m + n)))
            * ((p / pc) * ((1.0 - pc) / (1.0 - pg) + (1.0 - pc) / (1.0 - ph))
                + ((p * (m - 1.0) / pg) * (1.0 - pg) / (1.0 - pi0)
                    + (p * (n - 1.0) / ph) * (1.0 - ph) / (1.0 - pi0))))
    }

    /// One-way adaptive weight of a group with `ng` hypotheses and count `rg`.
    pub fn eq6(ng: f64, rg: f64, big_n: f64, rn: f64, m: f64, lambda: f64) -> f64 {
        (ng - rg + 1.0) / (big_n * (1.0 - lambda)) * ((rn + m - 1.0) / rg)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn eq11(m: f64, n: f64, rg: f64, rh: f64, rn: f64, lambda: f64) -> f64 {
        let big_n = m * n;
        1.0 / ((big_n * (1.0 - lambda) / 2.0)
            * ((1.0 / (n - rg + 1.0)) * (rg / (rn + m - 1.0))
                + (1.0 / (m - rh + 1.0)) * (rh / (rn + n - 1.0))))
    }

    pub fn eq12(m: f64, n: f64, rg: f64, rh: f64, rn: f64, lambda: f64) -> f64 {
        let big_n = m * n;
        1.0 / ((big_n * (1.0 - lambda) / (m + n))
            * ((1.0 / (n - rg + 1.0)) * (m * rg / (rn + m - 1.0))
                + (1.0 / (m - rh + 1.0)) * (n * rh / (rn + n - 1.0))))
    }

    /// Counts and sizes of one cell and its margins.
    #[derive(Clone, Copy)]
    pub struct Cell {
        pub m: f64,
        pub n: f64,
        pub big_n: f64,
        pub n_gh: f64,
        pub n_g: f64,
        pub n_h: f64,
        pub r_gh: f64,
        pub r_g: f64,
        pub r_h: f64,
        pub r_n: f64,
    }

    pub fn e3_8(c: Cell, lambda: f64) -> f64 {
        let Cell {
            m,
            n,
            big_n,
            n_gh,
            n_g,
            n_h,
            r_gh,
            r_g,
            r_h,
            r_n,
        } = c;
        1.0 / (0.25
            * ((1.0 - lambda) / (n_gh - r_gh + 1.0)
                * (n_g * r_gh / (r_g + n - 1.0) + n_h * r_gh / (r_h + m - 1.0))
                + big_n
                    * (1.0 - lambda)
                    * (r_g / ((n_g - r_g + 1.0) * (r_n + m - 1.0))
                        + r_h / ((n_h - r_h + 1.0) * (r_n + n - 1.0)))))
    }

    pub fn eq18(c: Cell, lambda: f64) -> f64 {
        let Cell {
            m,
            n,
            big_n,
            n_g,
            n_h,
            r_g,
            r_h,
            r_n,
            ..
        } = c;
        1.0 / ((big_n * (1.0 - lambda) / 2.0)
            * ((1.0 / (n_g - r_g + 1.0)) * (r_g / (r_n + m - 1.0))
                + (1.0 / (n_h - r_h + 1.0)) * (r_h / (r_n + n - 1.0))))
    }

    /// Four-term equal-size estimate; `col_factor` is `m - 1` as printed or
    /// `n - 1` for the symmetric reading.
    pub fn e3_11(c: Cell, p: f64, lambda: f64, col_factor: f64) -> f64 {
        let Cell {
            m,
            n,
            big_n,
            n_gh,
            n_g,
            n_h,
            r_gh,
            r_g,
            r_h,
            r_n,
        } = c;
        1.0 / ((1.0 / ((m + n) * p))
            * ((p * (1.0 - lambda)) / (n_gh - r_gh + 1.0)
                * (n_g * r_gh / (r_g + n - 1.0) + n_h * r_gh / (r_h + m - 1.0))
                + big_n
                    * (1.0 - lambda)
                    * (p * (m - 1.0) * r_g / ((n_g - r_g + 1.0) * (r_n + m - 1.0))
                        + p * col_factor * r_h / ((n_h - r_h + 1.0) * (r_n + n - 1.0)))))
    }

    pub fn eq20(c: Cell, p: f64, lambda: f64) -> f64 {
        let Cell {
            m,
            n,
            big_n,
            n_g,
            n_h,
            r_g,
            r_h,
            r_n,
            ..
        } = c;
        1.0 / ((big_n * (1.0 - lambda) / ((m + n) * p))
            * ((m * p / (n_g - r_g + 1.0)) * (r_g / (r_n + m - 1.0))
                + (n * p / (n_h - r_h + 1.0)) * (r_h / (r_n + n - 1.0))))
    }
}

/// Counts `I(P <= lambda)` for one cell and its margins, by direct scanning.
pub fn cell_counts(p: &PValueSet, g: usize, h: usize, lambda: f64) -> direct::Cell {
    let layout = p.layout();
    let (m, n) = (layout.rows(), layout.cols());
    let mut c = direct::Cell {
        m: m as f64,
        n: n as f64,
        big_n: layout.total() as f64,
        n_gh: 0.0,
        n_g: 0.0,
        n_h: 0.0,
        r_gh: 0.0,
        r_g: 0.0,
        r_h: 0.0,
        r_n: 0.0,
    };
    for (i, &v) in p.values().iter().enumerate() {
        let u = layout.unit_of(i);
        let (gi, hi) = (u / n, u % n);
        let hit = if v <= lambda { 1.0 } else { 0.0 };
        c.r_n += hit;
        if gi == g {
            c.n_g += 1.0;
            c.r_g += hit;
        }
        if hi == h {
            c.n_h += 1.0;
            c.r_h += hit;
        }
        if gi == g && hi == h {
            c.n_gh += 1.0;
            c.r_gh += hit;
        }
    }
    c
}
