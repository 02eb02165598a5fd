//! The commutative grid quiver on rows `1..=n+1` and columns `1..=n`, its
//! canonical representation `M` (space of dimension `i` in row `i`, identity
//! maps along rows, coordinate inclusions down columns), the Euler form with
//! relations, and morphism-space dimensions.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{sparse_rank, FieldSpec};

/// A grid vertex `(row, col)`, 1-based.
pub type Vertex = (usize, usize);

/// An `(n+1) x n` grid of naturals, indexed by 1-based `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DimensionVectorRepr", into = "DimensionVectorRepr")]
pub struct DimensionVector {
    n: usize,
    entries: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DimensionVectorRepr {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl DimensionVector {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            entries: vec![0; (n + 1) * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> usize) -> Self {
        let mut entries = Vec::with_capacity((n + 1) * n);
        for row in 1..=n + 1 {
            for col in 1..=n {
                entries.push(f(row, col));
            }
        }
        Self { n, entries }
    }

    /// Builds from `n + 1` rows of `n` entries each, top row first.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.len());
        if rows.len() != n + 1 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch(format!(
                "expected {} rows of {} entries",
                n + 1,
                n
            )));
        }
        Ok(Self {
            n,
            entries: rows.concat(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        assert!((1..=self.n + 1).contains(&row) && (1..=self.n).contains(&col));
        self.entries[(row - 1) * self.n + (col - 1)]
    }

    /// Like [`get`](Self::get), but `0` on the boundary row 0 and column 0.
    pub fn get_or_zero(&self, row: usize, col: usize) -> usize {
        if row == 0 || col == 0 {
            0
        } else {
            self.get(row, col)
        }
    }

    pub fn set(&mut self, row: usize, col: usize, value: usize) {
        let n = self.n;
        self.entries[(row - 1) * n + (col - 1)] = value;
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.entries
            .chunks(self.n.max(1))
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn total(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        let n = self.n;
        (1..=n + 1).flat_map(move |row| (1..=n).map(move |col| (row, col)))
    }

    /// Entrywise difference, or `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.n != other.n {
            return None;
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()?;
        Some(Self { n: self.n, entries })
    }
}

impl Add for &DimensionVector {
    type Output = DimensionVector;

    fn add(self, rhs: Self) -> DimensionVector {
        assert_eq!(self.n, rhs.n);
        DimensionVector {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &DimensionVector {
    type Output = DimensionVector;

    fn sub(self, rhs: Self) -> DimensionVector {
        self.checked_sub(rhs)
            .expect("entrywise nonnegative difference")
    }
}

impl fmt::Display for DimensionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for (k, row) in self.rows().iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl TryFrom<DimensionVectorRepr> for DimensionVector {
    type Error = Error;

    fn try_from(repr: DimensionVectorRepr) -> Result<Self> {
        let dv = Self::from_rows(&repr.rows)?;
        if dv.n != repr.n {
            return Err(Error::ShapeMismatch(format!(
                "declared n = {} but rows have {} entries",
                repr.n, dv.n
            )));
        }
        Ok(dv)
    }
}

impl From<DimensionVector> for DimensionVectorRepr {
    fn from(dv: DimensionVector) -> Self {
        Self {
            n: dv.n,
            rows: dv.rows(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub source: Vertex,
    pub target: Vertex,
    pub kind: ArrowKind,
}

/// The grid quiver with one commutativity relation per unit square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridQuiver {
    n: usize,
}

impl GridQuiver {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::NTooSmall(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        DimensionVector::zero(self.n).vertices().collect()
    }

    pub fn arrows(&self) -> Vec<Arrow> {
        let n = self.n;
        let mut out = Vec::new();
        for row in 1..=n + 1 {
            for col in 1..n {
                out.push(Arrow {
                    source: (row, col),
                    target: (row, col + 1),
                    kind: ArrowKind::Horizontal,
                });
            }
        }
        for row in 1..=n {
            for col in 1..=n {
                out.push(Arrow {
                    source: (row, col),
                    target: (row + 1, col),
                    kind: ArrowKind::Vertical,
                });
            }
        }
        out
    }

    /// Number of minimal relations between each pair of vertices; only unit
    /// squares carry one.
    pub fn relations(&self) -> BTreeMap<(Vertex, Vertex), usize> {
        let n = self.n;
        let mut out = BTreeMap::new();
        for row in 1..=n {
            for col in 1..n {
                out.insert(((row, col), (row + 1, col + 1)), 1);
            }
        }
        out
    }

    /// `dim M`: entry `i` in every column of row `i`.
    pub fn dim_m(&self) -> DimensionVector {
        DimensionVector::from_fn(self.n, |row, _| row)
    }

    fn check_shape(&self, d: &DimensionVector) -> Result<()> {
        if d.n() != self.n {
            return Err(Error::ShapeMismatch(format!(
                "dimension vector for n = {} used with quiver n = {}",
                d.n(),
                self.n
            )));
        }
        Ok(())
    }

    /// Euler form with relations: vertex term minus arrow term plus relation term.
    pub fn euler_form(&self, d1: &DimensionVector, d2: &DimensionVector) -> Result<i64> {
        self.check_shape(d1)?;
        self.check_shape(d2)?;
        let at = |d: &DimensionVector, v: Vertex| d.get(v.0, v.1) as i64;
        let vertex_term: i64 = self
            .vertices()
            .into_iter()
            .map(|v| at(d1, v) * at(d2, v))
            .sum();
        let arrow_term: i64 = self
            .arrows()
            .into_iter()
            .map(|a| at(d1, a.source) * at(d2, a.target))
            .sum();
        let relation_term: i64 = self
            .relations()
            .into_iter()
            .map(|((s, t), count)| count as i64 * at(d1, s) * at(d2, t))
            .sum();
        Ok(vertex_term - arrow_term + relation_term)
    }

    /// `<e, dim M - e>`, the expected dimension of the quiver Grassmannian of `M`.
    pub fn expected_grassmannian_dim(&self, e: &DimensionVector) -> Result<i64> {
        self.check_shape(e)?;
        let dim_m = self.dim_m();
        for (row, col) in e.vertices() {
            let value = e.get(row, col);
            if value > row {
                return Err(Error::EntryExceedsAmbient { row, col, value });
            }
        }
        self.euler_form(e, &(&dim_m - e))
    }
}

/// A dense matrix with integer entries, read in whichever field a
/// computation asks for. `rows = dim(target)`, `cols = dim(source)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// The `rows x cols` matrix with ones on the main diagonal.
    pub fn unit_diagonal(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for k in 0..rows.min(cols) {
            m.data[k * cols + k] = 1;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for m in 0..self.cols {
                let a = self.get(r, m);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(m, c);
                }
            }
        }
        out
    }
}

/// A representation of the grid quiver over the rationals or a prime field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridRep {
    n: usize,
    field: FieldSpec,
    dims: DimensionVector,
    maps: BTreeMap<Arrow, IntMatrix>,
}

impl GridRep {
    /// Checks map shapes against the vertex dimensions.
    pub fn new(
        quiver: &GridQuiver,
        field: FieldSpec,
        dims: DimensionVector,
        maps: BTreeMap<Arrow, IntMatrix>,
    ) -> Result<Self> {
        quiver.check_shape(&dims)?;
        for arrow in quiver.arrows() {
            let m = maps
                .get(&arrow)
                .ok_or_else(|| Error::ShapeMismatch(format!("missing map for {arrow:?}")))?;
            let (s, t) = (arrow.source, arrow.target);
            if m.rows != dims.get(t.0, t.1) || m.cols != dims.get(s.0, s.1) {
                return Err(Error::ShapeMismatch(format!("bad map shape on {arrow:?}")));
            }
        }
        Ok(Self {
            n: quiver.n(),
            field,
            dims,
            maps,
        })
    }

    /// The canonical representation `M`.
    pub fn canonical(quiver: &GridQuiver, field: FieldSpec) -> Self {
        let dims = quiver.dim_m();
        let maps = quiver
            .arrows()
            .into_iter()
            .map(|a| {
                let (s, t) = (a.source.0, a.target.0);
                (a, IntMatrix::unit_diagonal(t, s))
            })
            .collect();
        Self::new(quiver, field, dims, maps).expect("canonical shapes")
    }

    /// The zero representation.
    pub fn zero(quiver: &GridQuiver, field: FieldSpec) -> Self {
        let maps = quiver
            .arrows()
            .into_iter()
            .map(|a| (a, IntMatrix::zeros(0, 0)))
            .collect();
        Self::new(quiver, field, DimensionVector::zero(quiver.n()), maps).expect("zero shapes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dims(&self) -> &DimensionVector {
        &self.dims
    }

    pub fn map(&self, arrow: &Arrow) -> &IntMatrix {
        &self.maps[arrow]
    }

    fn map_between(&self, source: Vertex, target: Vertex) -> &IntMatrix {
        self.maps
            .iter()
            .find(|(a, _)| a.source == source && a.target == target)
            .map(|(_, m)| m)
            .expect("arrow exists")
    }

    /// Every unit square commutes, as an identity of matrices in the field.
    pub fn satisfies_relations(&self) -> bool {
        let n = self.n;
        (1..=n).all(|row| {
            (1..n).all(|col| {
                let right_then_down = self
                    .map_between((row, col + 1), (row + 1, col + 1))
                    .mul(self.map_between((row, col), (row, col + 1)));
                let down_then_right = self
                    .map_between((row + 1, col), (row + 1, col + 1))
                    .mul(self.map_between((row, col), (row + 1, col)));
                right_then_down
                    .data
                    .iter()
                    .zip(&down_then_right.data)
                    .all(|(a, b)| self.field.is_zero(a - b))
            })
        })
    }
}

/// Dimension of `Hom(r1, r2)`: one matrix per vertex commuting with every
/// arrow, solved as a single linear system.
pub fn hom_dimension(r1: &GridRep, r2: &GridRep) -> Result<usize> {
    if r1.n != r2.n || r1.field != r2.field {
        return Err(Error::ShapeMismatch(
            "representations of different quivers or fields".into(),
        ));
    }
    let quiver = GridQuiver::new(r1.n)?;
    // unknown (v, a, b) is entry (a, b) of the dim r2(v) x dim r1(v) block
    let mut offset = BTreeMap::new();
    let mut unknowns = 0;
    for v in quiver.vertices() {
        offset.insert(v, unknowns);
        unknowns += r2.dims.get(v.0, v.1) * r1.dims.get(v.0, v.1);
    }
    let var = |v: Vertex, a: usize, b: usize| offset[&v] + a * r1.dims.get(v.0, v.1) + b;

    let mut equations: Vec<Vec<(usize, i64)>> = Vec::new();
    for arrow in quiver.arrows() {
        let (s, t) = (arrow.source, arrow.target);
        let a1 = r1.map(&arrow);
        let a2 = r2.map(&arrow);
        let (d2t, d1s) = (r2.dims.get(t.0, t.1), r1.dims.get(s.0, s.1));
        let (d1t, d2s) = (r1.dims.get(t.0, t.1), r2.dims.get(s.0, s.1));
        // (phi_t * A1 - A2 * phi_s)[r][c] = 0
        for r in 0..d2t {
            for c in 0..d1s {
                let mut eq = Vec::new();
                for m in 0..d1t {
                    let coeff = a1.get(m, c);
                    if coeff != 0 {
                        eq.push((var(t, r, m), coeff));
                    }
                }
                for m in 0..d2s {
                    let coeff = a2.get(r, m);
                    if coeff != 0 {
                        eq.push((var(s, m, c), -coeff));
                    }
                }
                if !eq.is_empty() {
                    equations.push(eq);
                }
            }
        }
    }
    let rank = sparse_rank(r1.field, unknowns, equations);
    Ok(unknowns - rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_and_relation_counts() {
        let q2 = GridQuiver::new(2).unwrap();
        assert_eq!(q2.vertices().len(), 6);
        assert_eq!(q2.arrows().len(), 7);
        assert_eq!(
            q2.arrows()
                .iter()
                .filter(|a| a.kind == ArrowKind::Horizontal)
                .count(),
            3
        );
        assert_eq!(q2.relations().len(), 2);
        let q3 = GridQuiver::new(3).unwrap();
        assert_eq!(q3.arrows().len(), 17);
        assert_eq!(q3.relations().len(), 6);
        for n in 2..=6 {
            let q = GridQuiver::new(n).unwrap();
            assert_eq!(q.arrows().len(), (n + 1) * (n - 1) + n * n);
            assert_eq!(q.relations().len(), n * (n - 1));
        }
        assert_eq!(GridQuiver::new(1), Err(Error::NTooSmall(1)));
    }

    #[test]
    fn canonical_representation() {
        let q = GridQuiver::new(3).unwrap();
        let m = GridRep::canonical(&q, FieldSpec::Rationals);
        assert_eq!(
            m.dims().rows(),
            vec![vec![1, 1, 1], vec![2, 2, 2], vec![3, 3, 3], vec![4, 4, 4]]
        );
        for n in 2..=5 {
            let q = GridQuiver::new(n).unwrap();
            for field in [
                FieldSpec::Rationals,
                FieldSpec::Prime(2),
                FieldSpec::Prime(3),
                FieldSpec::Prime(5),
            ] {
                assert!(GridRep::canonical(&q, field).satisfies_relations());
            }
        }
        let q2 = GridQuiver::new(2).unwrap();
        assert_eq!(
            GridRep::canonical(&q2, FieldSpec::Prime(2)).dims().total(),
            12
        );
    }

    #[test]
    fn broken_square_is_detected() {
        let q = GridQuiver::new(2).unwrap();
        let m = GridRep::canonical(&q, FieldSpec::Rationals);
        let mut maps = m.maps.clone();
        let arrow = q.arrows()[0];
        maps.insert(arrow, IntMatrix::zeros(1, 1));
        let broken = GridRep::new(&q, FieldSpec::Rationals, m.dims.clone(), maps).unwrap();
        assert!(!broken.satisfies_relations());
    }

    #[test]
    fn euler_form_values() {
        let q = GridQuiver::new(2).unwrap();
        let dim_m = q.dim_m();
        assert_eq!(q.euler_form(&dim_m, &dim_m).unwrap(), 6);
        assert_eq!(q.euler_form(&dim_m, &DimensionVector::zero(2)).unwrap(), 0);
        assert_eq!(q.expected_grassmannian_dim(&dim_m).unwrap(), 0);
        let mut too_big = DimensionVector::zero(2);
        too_big.set(1, 1, 2);
        assert!(matches!(
            q.expected_grassmannian_dim(&too_big),
            Err(Error::EntryExceedsAmbient {
                row: 1,
                col: 1,
                value: 2
            })
        ));
        assert!(matches!(
            q.euler_form(&dim_m, &DimensionVector::zero(3)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn hom_dimensions() {
        for (n, expected) in [(2, 6), (3, 10)] {
            let q = GridQuiver::new(n).unwrap();
            for field in [
                FieldSpec::Rationals,
                FieldSpec::Prime(2),
                FieldSpec::Prime(3),
            ] {
                let m = GridRep::canonical(&q, field);
                assert_eq!(hom_dimension(&m, &m).unwrap(), expected);
                let zero = GridRep::zero(&q, field);
                assert_eq!(hom_dimension(&zero, &m).unwrap(), 0);
                assert_eq!(hom_dimension(&m, &zero).unwrap(), 0);
            }
        }
        let q = GridQuiver::new(2).unwrap();
        let a = GridRep::canonical(&q, FieldSpec::Rationals);
        let b = GridRep::canonical(&q, FieldSpec::Prime(2));
        assert!(hom_dimension(&a, &b).is_err());
    }

    #[test]
    fn json_layout() {
        let dv = DimensionVector::from_rows(&[vec![0, 1], vec![1, 2], vec![1, 2]]).unwrap();
        let json = serde_json::to_string(&dv).unwrap();
        assert_eq!(json, r#"{"n":2,"rows":[[0,1],[1,2],[1,2]]}"#);
        let back: DimensionVector = serde_json::from_str(&json).unwrap();
        assert_eq!(back, dv);
        assert!(
            serde_json::from_str::<DimensionVector>(r#"{"n":3,"rows":[[0,1],[1,2],[1,2]]}"#)
                .is_err()
        );
    }
}
