//! Permutation-indexed dimension vectors on the grid: the rank vector
//! `r^w`, the smooth vector `e^w`, free vertices and inclusion conditions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridquiver::DimensionVector;
use crate::perm::Permutation;

/// A grid position whose rank entry is a nontrivial subspace that is not
/// forced to coincide with its left or upper neighbour.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreeVertex {
    pub row: usize,
    pub col: usize,
    pub value: usize,
}

/// Bounds `F_lower ⊆ V_q ⊆ F_upper` on one column of a flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnBounds {
    pub q: usize,
    pub lower: usize,
    pub upper: usize,
}

/// Per-column inclusion bounds. `lower = 0` and `upper = n + 1` mean no bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InclusionConditions {
    pub columns: Vec<ColumnBounds>,
}

impl InclusionConditions {
    pub fn n(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, q: usize) -> ColumnBounds {
        self.columns[q - 1]
    }

    /// An upper bound at `q` is redundant when `V_{q+1}` already sits in the
    /// same `F_p`.
    pub fn is_essential_upper(&self, q: usize) -> bool {
        let ambient = self.n() + 1;
        let upper = self.column(q).upper;
        let next = if q == self.n() {
            ambient
        } else {
            self.column(q + 1).upper
        };
        upper < ambient && upper < next
    }

    /// A lower bound at `q` is redundant when `V_{q-1}` already contains the
    /// same `F_p`.
    pub fn is_essential_lower(&self, q: usize) -> bool {
        let lower = self.column(q).lower;
        let prev = if q == 1 { 0 } else { self.column(q - 1).lower };
        lower > 0 && lower > prev
    }
}

fn check_window(w: &Permutation) -> Result<usize> {
    if w.window() < 3 {
        return Err(Error::WindowTooSmall(w.window()));
    }
    Ok(w.window() - 1)
}

/// `r^w(i, j) = #{k <= j : w(k) <= i}` on the `(n+1) x n` grid.
pub fn rank_vector(w: &Permutation) -> Result<DimensionVector> {
    let n = check_window(w)?;
    Ok(DimensionVector::from_fn(n, |i, j| w.rank(i, j)))
}

/// Updates `r^w` to `r^{s_i w}` for a length-increasing `s_i`: row `i`
/// drops by one on columns `w^{-1}(i) <= q < w^{-1}(i+1)`.
pub fn apply_simple_update(
    rv: &DimensionVector,
    w: &Permutation,
    i: usize,
) -> Result<DimensionVector> {
    let n = check_window(w)?;
    if rv.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "rank vector for n = {} with permutation of window {}",
            rv.n(),
            w.window()
        )));
    }
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange {
            index: i,
            window: w.window(),
        });
    }
    let (from, to) = (w.position_of(i), w.position_of(i + 1));
    if from > to {
        return Err(Error::LengthDecrease(i));
    }
    let mut out = rv.clone();
    for q in from..to.min(n + 1) {
        out.set(i, q, rv.get(i, q) - 1);
    }
    Ok(out)
}

/// Free vertices of a rank vector, sorted by `(row, col)`, using the
/// boundary convention `r(0, q) = r(p, 0) = 0`.
pub fn free_vertices(rv: &DimensionVector) -> Vec<FreeVertex> {
    rv.vertices()
        .filter_map(|(p, q)| {
            let value = rv.get(p, q);
            let free =
                value < p && value > rv.get_or_zero(p - 1, q) && value > rv.get_or_zero(p, q - 1);
            free.then_some(FreeVertex {
                row: p,
                col: q,
                value,
            })
        })
        .collect()
}

fn require_smooth(w: &Permutation) -> Result<()> {
    if !w.is_smooth() {
        return Err(Error::NotSmooth(w.to_string()));
    }
    Ok(())
}

/// `e^w`: keeps `r^w` where it is `0` or `min(i, j)`, otherwise copies the
/// larger of the upper and left neighbours. Filled row by row.
pub fn smooth_vector(w: &Permutation) -> Result<DimensionVector> {
    let n = check_window(w)?;
    require_smooth(w)?;
    let rv = rank_vector(w)?;
    let mut e = DimensionVector::zero(n);
    for i in 1..=n + 1 {
        for j in 1..=n {
            let r = rv.get(i, j);
            let value = if r == 0 || r == i.min(j) {
                r
            } else {
                e.get_or_zero(i - 1, j).max(e.get_or_zero(i, j - 1))
            };
            e.set(i, j, value);
        }
    }
    Ok(e)
}

/// Inclusion bounds defining `X_w` for smooth `w`. Redundant bounds are kept.
pub fn extract_inclusions(w: &Permutation) -> Result<InclusionConditions> {
    require_smooth(w)?;
    inclusion_bounds(w)
}

/// Per-column bounds read off `r^w`: the smallest `F_p` containing `V_q` and
/// the largest `F_p` contained in it. For singular `w` these are implied by,
/// but need not define, the Schubert conditions.
pub fn inclusion_bounds(w: &Permutation) -> Result<InclusionConditions> {
    let n = check_window(w)?;
    let columns = (1..=n)
        .map(|q| {
            let upper = (1..=n + 1)
                .find(|&i| w.rank(i, q) == q)
                .expect("r(n+1, q) = q");
            let lower = (1..=n + 1)
                .filter(|&i| w.rank(i, q) == i)
                .max()
                .unwrap_or(0);
            ColumnBounds { q, lower, upper }
        })
        .collect();
    Ok(InclusionConditions { columns })
}

/// Crossing pairs `(q, q')`: `q < q'`, an essential `V_q ⊆ F_p` and an
/// essential `F_{p'} ⊆ V_{q'}` with `p > p'`.
pub fn crossing_pairs(inc: &InclusionConditions) -> Vec<(usize, usize)> {
    let n = inc.n();
    let mut out = Vec::new();
    for q in 1..=n {
        if !inc.is_essential_upper(q) {
            continue;
        }
        for q2 in q + 1..=n {
            if inc.is_essential_lower(q2) && inc.column(q).upper > inc.column(q2).lower {
                out.push((q, q2));
            }
        }
    }
    out
}
