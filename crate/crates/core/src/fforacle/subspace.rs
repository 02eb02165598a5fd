//! Subspaces of `F_q^m` in reduced row-echelon form, and enumeration of all
//! subspaces squeezed between two given ones.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::PrimeField;

/// A subspace of `F_q^ambient` held by its reduced row-echelon basis, so
/// equal subspaces have identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    q: u32,
    basis: Vec<Vec<u8>>,
}

impl Subspace {
    pub fn zero(field: &PrimeField, ambient: usize) -> Self {
        Self {
            ambient,
            q: field.order(),
            basis: Vec::new(),
        }
    }

    /// `F_k = span(e_1, ..., e_k)`.
    pub fn coordinate(field: &PrimeField, ambient: usize, k: usize) -> Self {
        assert!(k <= ambient);
        let basis = (0..k)
            .map(|r| {
                let mut v = vec![0u8; ambient];
                v[r] = 1;
                v
            })
            .collect();
        Self {
            ambient,
            q: field.order(),
            basis,
        }
    }

    pub fn span(field: &PrimeField, ambient: usize, mut vectors: Vec<Vec<u8>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        field.rref(&mut vectors);
        Self {
            ambient,
            q: field.order(),
            basis: vectors,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<u8>] {
        &self.basis
    }

    pub fn sum(&self, field: &PrimeField, other: &Subspace) -> Subspace {
        let vectors = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(field, self.ambient, vectors)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, field: &PrimeField, other: &Subspace) -> bool {
        other.dim() <= self.dim() && self.sum(field, other).dim() == self.dim()
    }

    pub fn contains_vector(&self, field: &PrimeField, v: &[u8]) -> bool {
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        field.rank(&rows) == self.dim()
    }

    pub fn intersection_dim(&self, field: &PrimeField, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.sum(field, other).dim()
    }

    /// `dim(F_k ∩ self)`: the kernel of the projection onto the coordinates
    /// past `k`.
    pub fn coordinate_intersection_dim(&self, field: &PrimeField, k: usize) -> usize {
        let tails: Vec<Vec<u8>> = self.basis.iter().map(|row| row[k..].to_vec()).collect();
        self.dim() - field.rank(&tails)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<String>())
            .collect();
        write!(f, "<{}>", rows.join(","))
    }
}

/// Extends a basis of `lower` to one of `upper`, returning the added vectors.
fn complement_in(field: &PrimeField, lower: &Subspace, upper: &Subspace) -> Vec<Vec<u8>> {
    let mut current = lower.clone();
    let mut extra = Vec::new();
    for v in upper.basis() {
        if !current.contains_vector(field, v) {
            extra.push(v.clone());
            let mut rows = current.basis.clone();
            rows.push(v.clone());
            current = Subspace::span(field, lower.ambient, rows);
        }
    }
    extra
}

/// All `k`-subsets of `0..c`, in lexicographic order.
fn combinations(c: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, c: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..c {
            if c - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, c, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, c, k, &mut Vec::new(), &mut out);
    out
}

/// Every subspace `S` with `lower ⊆ S ⊆ upper` and `dim S = dim`, each once,
/// sorted by canonical basis.
///
/// Works in the quotient `upper / lower`: each candidate is the row space of
/// a reduced echelon matrix over a fixed complement of `lower`, so no two
/// candidates coincide.
pub fn enumerate_subspaces(
    field: &PrimeField,
    dim: usize,
    lower: &Subspace,
    upper: &Subspace,
) -> Result<Vec<Subspace>> {
    if lower.ambient != upper.ambient || !upper.contains(field, lower) {
        return Err(Error::BadSandwich("lower is not contained in upper".into()));
    }
    if dim < lower.dim() || dim > upper.dim() {
        return Err(Error::BadSandwich(format!(
            "dimension {dim} outside [{}, {}]",
            lower.dim(),
            upper.dim()
        )));
    }
    let complement = complement_in(field, lower, upper);
    let c = complement.len();
    let k = dim - lower.dim();
    let q = field.order() as u8;
    let ambient = lower.ambient;
    let mut out = Vec::new();
    for pivots in combinations(c, k) {
        // free slots: (row, col) right of the row's pivot, outside pivot columns
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = &pivots;
                (pc + 1..c)
                    .filter(move |col| !pivots.contains(col))
                    .map(move |col| (r, col))
            })
            .collect();
        let mut fill = vec![0u8; free.len()];
        loop {
            let mut coeffs = vec![vec![0u8; c]; k];
            for (r, &pc) in pivots.iter().enumerate() {
                coeffs[r][pc] = 1;
            }
            for (&(r, col), &x) in free.iter().zip(&fill) {
                coeffs[r][col] = x;
            }
            let mut vectors: Vec<Vec<u8>> = lower.basis.clone();
            for row in &coeffs {
                let mut v = vec![0u8; ambient];
                for (a, cv) in row.iter().zip(&complement) {
                    if *a != 0 {
                        for (x, y) in v.iter_mut().zip(cv) {
                            *x = field.add(*x, field.mul(*a, *y));
                        }
                    }
                }
                vectors.push(v);
            }
            out.push(Subspace::span(field, ambient, vectors));
            // odometer increment over the free slots
            let mut idx = 0;
            loop {
                if idx == fill.len() {
                    break;
                }
                fill[idx] += 1;
                if fill[idx] < q {
                    break;
                }
                fill[idx] = 0;
                idx += 1;
            }
            if idx == fill.len() {
                break;
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_binomial(m: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for t in 0..k {
            num *= q.pow(m - t) - 1;
            den *= q.pow(t + 1) - 1;
        }
        num / den
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for q in [2u32, 3, 5] {
            let f = PrimeField::new(q).unwrap();
            for m in 0..=4usize {
                if q == 5 && m > 3 {
                    continue;
                }
                let zero = Subspace::zero(&f, m);
                let full = Subspace::coordinate(&f, m, m);
                for k in 0..=m {
                    let all = enumerate_subspaces(&f, k, &zero, &full).unwrap();
                    assert_eq!(
                        all.len() as u64,
                        gaussian_binomial(m as u32, k as u32, q as u64),
                        "q={q} m={m} k={k}"
                    );
                    let mut dedup = all.clone();
                    dedup.dedup();
                    assert_eq!(dedup.len(), all.len());
                    assert!(all.iter().all(|s| s.dim() == k));
                }
            }
        }
    }

    #[test]
    fn small_examples() {
        let f = PrimeField::new(2).unwrap();
        let lines2 = enumerate_subspaces(
            &f,
            1,
            &Subspace::zero(&f, 2),
            &Subspace::coordinate(&f, 2, 2),
        )
        .unwrap();
        assert_eq!(lines2.len(), 3);
        let lines3 = enumerate_subspaces(
            &f,
            1,
            &Subspace::zero(&f, 3),
            &Subspace::coordinate(&f, 3, 3),
        )
        .unwrap();
        assert_eq!(lines3.len(), 7);
    }

    #[test]
    fn sandwiches() {
        let f = PrimeField::new(3).unwrap();
        let lower = Subspace::span(&f, 4, vec![vec![1, 1, 0, 0]]);
        let upper = Subspace::span(
            &f,
            4,
            vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 1]],
        );
        let only = enumerate_subspaces(&f, 1, &lower, &upper).unwrap();
        assert_eq!(only, vec![lower.clone()]);
        let planes = enumerate_subspaces(&f, 2, &lower, &upper).unwrap();
        assert_eq!(planes.len(), 4);
        assert!(planes
            .iter()
            .all(|s| s.contains(&f, &lower) && upper.contains(&f, s)));
        let off = Subspace::span(&f, 4, vec![vec![0, 0, 0, 1]]);
        assert!(matches!(
            enumerate_subspaces(&f, 2, &off, &upper),
            Err(Error::BadSandwich(_))
        ));
        assert!(matches!(
            enumerate_subspaces(&f, 0, &lower, &upper),
            Err(Error::BadSandwich(_))
        ));
    }

    #[test]
    fn coordinate_intersections() {
        let f = PrimeField::new(2).unwrap();
        let all = enumerate_subspaces(
            &f,
            2,
            &Subspace::zero(&f, 4),
            &Subspace::coordinate(&f, 4, 4),
        )
        .unwrap();
        for s in &all {
            for k in 0..=4 {
                let fk = Subspace::coordinate(&f, 4, k);
                assert_eq!(
                    s.coordinate_intersection_dim(&f, k),
                    s.intersection_dim(&f, &fk)
                );
            }
        }
    }
}
