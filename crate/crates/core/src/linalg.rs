//! Exact linear algebra over the rationals and small prime fields.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The field a representation is read over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Rationals,
    Prime(u32),
}

impl FieldSpec {
    pub fn is_zero(self, value: i64) -> bool {
        match self {
            FieldSpec::Rationals => value == 0,
            FieldSpec::Prime(p) => value.rem_euclid(p as i64) == 0,
        }
    }
}

/// Arithmetic on `u8` residues modulo a prime `p < 256`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u32,
    inverses: Vec<u8>,
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..p)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) || p > 251 {
            return Err(Error::UnsupportedField(p));
        }
        let mut inverses = vec![0u8; p as usize];
        for a in 1..p {
            let inv = (1..p).find(|b| a * b % p == 1).expect("prime modulus");
            inverses[a as usize] = inv as u8;
        }
        Ok(Self { p, inverses })
    }

    pub fn order(&self) -> u32 {
        self.p
    }

    pub fn add(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + b as u32) % self.p) as u8
    }

    pub fn sub(&self, a: u8, b: u8) -> u8 {
        ((a as u32 + self.p - b as u32) % self.p) as u8
    }

    pub fn mul(&self, a: u8, b: u8) -> u8 {
        ((a as u32 * b as u32) % self.p) as u8
    }

    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inverses[a as usize]
    }

    /// Reduces `rows` to reduced row-echelon form in place, dropping zero
    /// rows. Returns the pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..width {
            let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
                continue;
            };
            rows.swap(rank, found);
            let scale = self.inv(rows[rank][col]);
            for x in rows[rank].iter_mut() {
                *x = self.mul(*x, scale);
            }
            let pivot_row = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r == rank || row[col] == 0 {
                    continue;
                }
                let factor = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = self.sub(*x, self.mul(factor, y));
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rows.truncate(rank);
        pivots
    }

    pub fn rank(&self, rows: &[Vec<u8>]) -> usize {
        let mut copy = rows.to_vec();
        self.rref(&mut copy).len()
    }
}

/// Field operations used by the sparse eliminator.
trait Scalar: Clone {
    fn lift(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
}

impl Scalar for BigRational {
    fn lift(&self, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        self - factor * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
}

#[derive(Clone, Copy)]
struct ModP {
    v: u64,
    p: u64,
}

impl Scalar for ModP {
    fn lift(&self, v: i64) -> Self {
        ModP {
            v: v.rem_euclid(self.p as i64) as u64,
            p: self.p,
        }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn sub_mul(&self, factor: &Self, other: &Self) -> Self {
        let prod = factor.v * other.v % self.p;
        ModP {
            v: (self.v + self.p - prod) % self.p,
            p: self.p,
        }
    }
    fn div(&self, other: &Self) -> Self {
        // Fermat inverse
        let (mut base, mut exp, mut inv) = (other.v, self.p - 2, 1u64);
        while exp > 0 {
            if exp & 1 == 1 {
                inv = inv * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        ModP {
            v: self.v * inv % self.p,
            p: self.p,
        }
    }
}

fn eliminate<S: Scalar>(proto: S, rows: Vec<Vec<(usize, i64)>>) -> usize {
    let mut pending: Vec<BTreeMap<usize, S>> = rows
        .into_iter()
        .map(|row| {
            let mut map: BTreeMap<usize, S> = BTreeMap::new();
            for (col, v) in row {
                let entry = map.entry(col).or_insert_with(|| proto.lift(0));
                *entry = entry.sub_mul(&proto.lift(-1), &proto.lift(v));
            }
            map.retain(|_, v| !v.is_zero());
            map
        })
        .collect();
    // pivot column -> normalised pivot row
    let mut basis: BTreeMap<usize, BTreeMap<usize, S>> = BTreeMap::new();
    for mut row in pending.drain(..) {
        while let Some((&lead, lead_val)) = row.iter().next() {
            match basis.get(&lead) {
                Some(pivot_row) => {
                    let factor = lead_val.clone();
                    for (&col, pv) in pivot_row {
                        let entry = row.entry(col).or_insert_with(|| proto.lift(0));
                        *entry = entry.sub_mul(&factor, pv);
                        if entry.is_zero() {
                            row.remove(&col);
                        }
                    }
                }
                None => {
                    let lead_val = lead_val.clone();
                    for v in row.values_mut() {
                        *v = v.div(&lead_val);
                    }
                    basis.insert(lead, row);
                    break;
                }
            }
        }
    }
    basis.len()
}

/// Rank of a sparse integer matrix (rows of `(column, value)` pairs) read in
/// the given field.
pub fn sparse_rank(field: FieldSpec, columns: usize, rows: Vec<Vec<(usize, i64)>>) -> usize {
    debug_assert!(rows.iter().flatten().all(|&(c, _)| c < columns));
    match field {
        FieldSpec::Rationals => eliminate(BigRational::one(), rows),
        FieldSpec::Prime(p) => eliminate(ModP { v: 1, p: p as u64 }, rows),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_validation() {
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(5).is_ok());
        assert_eq!(PrimeField::new(4), Err(Error::UnsupportedField(4)));
        assert_eq!(PrimeField::new(1), Err(Error::UnsupportedField(1)));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        // det = 2: singular mod 2, regular over Q and mod 3
        let rows = vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, -1)]];
        assert_eq!(sparse_rank(FieldSpec::Rationals, 2, rows.clone()), 2);
        assert_eq!(sparse_rank(FieldSpec::Prime(3), 2, rows.clone()), 2);
        assert_eq!(sparse_rank(FieldSpec::Prime(2), 2, rows), 1);
    }

    #[test]
    fn dense_rref() {
        let f = PrimeField::new(3).unwrap();
        let mut rows = vec![vec![0, 2, 1], vec![1, 1, 1], vec![1, 0, 0]];
        let pivots = f.rref(&mut rows);
        assert_eq!(pivots.len(), 3);
        assert_eq!(rows, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(f.rank(&[vec![1, 2], vec![2, 1]]), 1);
    }
}
