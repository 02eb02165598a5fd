//! Brute-force point counts over prime fields: subrepresentations of the
//! grid module, Schubert varieties, Bott-Samelson towers and Bruhat cells.

mod subspace;

use std::collections::HashMap;
use std::rc::Rc;
use std::time::{Duration, Instant};

pub use subspace::{enumerate_subspaces, Subspace};

use crate::error::{Error, Result};
use crate::gridquiver::DimensionVector;
use crate::linalg::PrimeField;
use crate::perm::Permutation;
use crate::words::ReducedWord;

/// Exact point counts.
pub type PointCount = u128;

pub const BUDGET_ENV: &str = "SQ_BUDGET_MS";
pub const DEFAULT_BUDGET_MS: u64 = 120_000;

/// Wall-clock cap on an enumeration. Running out is an error, never a
/// truncated count.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    deadline: Option<Instant>,
    millis: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self {
            deadline: None,
            millis: None,
        }
    }

    pub fn from_millis(ms: u64) -> Self {
        Self {
            deadline: Some(Instant::now() + Duration::from_millis(ms)),
            millis: Some(ms),
        }
    }

    /// Reads `SQ_BUDGET_MS`, falling back to two minutes.
    pub fn from_env() -> Self {
        let ms = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_BUDGET_MS);
        Self::from_millis(ms)
    }

    fn check(&self, what: &str) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(Error::BudgetExceeded(format!(
                "{what} exceeded {} ms",
                self.millis.unwrap_or(0)
            ))),
            _ => Ok(()),
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::from_env()
    }
}

/// A full flag `V_1 ⊂ ... ⊂ V_n` in `F_q^{n+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagPoint {
    pub chain: Vec<Subspace>,
}

impl FlagPoint {
    pub fn standard(field: &PrimeField, window: usize) -> Self {
        Self {
            chain: (1..window)
                .map(|k| Subspace::coordinate(field, window, k))
                .collect(),
        }
    }

    pub fn window(&self) -> usize {
        self.chain.len() + 1
    }

    /// `V_i`, with `V_0 = 0` and `V_window` the whole space.
    pub fn get(&self, field: &PrimeField, i: usize) -> Subspace {
        let window = self.window();
        if i == 0 {
            Subspace::zero(field, window)
        } else if i == window {
            Subspace::coordinate(field, window, window)
        } else {
            self.chain[i - 1].clone()
        }
    }
}

fn check_q(q: u32, allowed: &[u32]) -> Result<PrimeField> {
    let field = PrimeField::new(q)?;
    if !allowed.contains(&q) {
        return Err(Error::UnsupportedField(q));
    }
    Ok(field)
}

type SandwichKey = (Subspace, usize, usize);

struct SubrepSearch<'a> {
    field: PrimeField,
    e: &'a DimensionVector,
    n: usize,
    order: Vec<(usize, usize)>,
    ambient: Vec<Subspace>,
    cache: HashMap<SandwichKey, Rc<Vec<Subspace>>>,
    budget: Budget,
    steps: u64,
}

impl SubrepSearch<'_> {
    fn choices(&mut self, lower: Subspace, row: usize, dim: usize) -> Result<Rc<Vec<Subspace>>> {
        let key = (lower, row, dim);
        if let Some(hit) = self.cache.get(&key) {
            return Ok(Rc::clone(hit));
        }
        let list = if key.0.dim() > dim {
            Vec::new()
        } else {
            enumerate_subspaces(&self.field, dim, &key.0, &self.ambient[row])?
        };
        let list = Rc::new(list);
        self.cache.insert(key, Rc::clone(&list));
        Ok(list)
    }

    fn run(
        &mut self,
        idx: usize,
        grid: &mut HashMap<(usize, usize), Subspace>,
    ) -> Result<PointCount> {
        self.steps += 1;
        if self.steps.is_multiple_of(4096) {
            self.budget.check("subrepresentation count")?;
        }
        let (i, j) = self.order[idx];
        let zero = || Subspace::zero(&self.field, self.n + 1);
        let above = if i > 1 {
            grid[&(i - 1, j)].clone()
        } else {
            zero()
        };
        let left = if j > 1 {
            grid[&(i, j - 1)].clone()
        } else {
            zero()
        };
        let lower = above.sum(&self.field, &left);
        let options = self.choices(lower, i, self.e.get(i, j))?;
        if idx + 1 == self.order.len() {
            return Ok(options.len() as PointCount);
        }
        let mut total = 0;
        for s in options.iter() {
            grid.insert((i, j), s.clone());
            total += self.run(idx + 1, grid)?;
        }
        grid.remove(&(i, j));
        Ok(total)
    }
}

/// Number of subrepresentations of the grid module with dimension vector `e`
/// over `F_q`: tuples `N_{i,j} ⊆ F_q^i` of the prescribed dimensions with
/// `N_{i,j} ⊆ N_{i,j+1}` and `N_{i,j} ⊆ N_{i+1,j}`.
///
/// Vertices are filled column by column, each one ranging over the
/// subspaces of `F_i` containing its upper and left neighbours.
pub fn count_subrepresentations(
    n: usize,
    q: u32,
    e: &DimensionVector,
    budget: Budget,
) -> Result<PointCount> {
    if e.n() != n {
        return Err(Error::ShapeMismatch(format!(
            "dimension vector has n = {}, expected {n}",
            e.n()
        )));
    }
    for (row, col) in e.vertices() {
        let value = e.get(row, col);
        if value > row {
            return Err(Error::EntryExceedsAmbient { row, col, value });
        }
    }
    if n > 4 {
        return Err(Error::BudgetExceeded(format!(
            "subrepresentation enumeration supports n <= 4, got {n}"
        )));
    }
    if n == 0 {
        return Ok(1);
    }
    let field = check_q(q, &[2, 3, 5])?;
    let ambient = (0..=n + 1)
        .map(|k| Subspace::coordinate(&field, n + 1, k))
        .collect();
    let order = (1..=n)
        .flat_map(|j| (1..=n + 1).map(move |i| (i, j)))
        .collect();
    let mut search = SubrepSearch {
        field,
        e,
        n,
        order,
        ambient,
        cache: HashMap::new(),
        budget,
        steps: 0,
    };
    search.run(0, &mut HashMap::new())
}

/// Number of flags over `F_q` in the Schubert variety of `w`: those with
/// `dim(F_p ∩ V_q) >= #{k <= q : w(k) <= p}` for the standard flag `F`.
pub fn count_schubert_points(w: &Permutation, q: u32, budget: Budget) -> Result<PointCount> {
    let window = w.window();
    if window > 5 {
        return Err(Error::BudgetExceeded(format!(
            "flag enumeration supports window <= 5, got {window}"
        )));
    }
    let field = check_q(q, &[2, 3])?;
    if window <= 1 {
        return Ok(1);
    }
    let mut search = SchubertSearch {
        full: Subspace::coordinate(&field, window, window),
        field,
        w,
        budget,
        steps: 0,
    };
    let zero = Subspace::zero(&search.field, window);
    search.run(&zero, 1)
}

struct SchubertSearch<'a> {
    field: PrimeField,
    full: Subspace,
    w: &'a Permutation,
    budget: Budget,
    steps: u64,
}

impl SchubertSearch<'_> {
    fn run(&mut self, prev: &Subspace, col: usize) -> Result<PointCount> {
        self.steps += 1;
        if self.steps.is_multiple_of(1024) {
            self.budget.check("Schubert point count")?;
        }
        let window = self.w.window();
        if col == window {
            return Ok(1);
        }
        let mut total = 0;
        for v in enumerate_subspaces(&self.field, col, prev, &self.full)? {
            let ok = (1..window)
                .all(|p| v.coordinate_intersection_dim(&self.field, p) >= self.w.rank(p, col));
            if ok {
                total += self.run(&v, col + 1)?;
            }
        }
        Ok(total)
    }
}

/// Number of `F_q` points of the Bott-Samelson tower of `word`: sequences of
/// flags `V^0, ..., V^N` with `V^0` standard and `V^k` differing from
/// `V^{k-1}` only in position `i_k`. Letters act right to left.
pub fn count_bott_samelson_points(
    word: &ReducedWord,
    q: u32,
    budget: Budget,
) -> Result<PointCount> {
    if !word.is_reduced() {
        return Err(Error::NotReduced);
    }
    let window = word.window();
    if window > 5 {
        return Err(Error::BudgetExceeded(format!(
            "Bott-Samelson enumeration supports window <= 5, got {window}"
        )));
    }
    let field = check_q(q, &[2, 3])?;
    let start: Vec<Subspace> = (0..=window)
        .map(|k| Subspace::coordinate(&field, window, k))
        .collect();
    let letters: Vec<usize> = (1..=word.len()).map(|k| word.letter(k)).collect();

    fn walk(
        field: &PrimeField,
        letters: &[usize],
        flag: &mut Vec<Subspace>,
        budget: &Budget,
        steps: &mut u64,
    ) -> Result<PointCount> {
        *steps += 1;
        if steps.is_multiple_of(1024) {
            budget.check("Bott-Samelson point count")?;
        }
        let Some((&i, rest)) = letters.split_first() else {
            return Ok(1);
        };
        let options = enumerate_subspaces(field, i, &flag[i - 1], &flag[i + 1])?;
        let saved = flag[i].clone();
        let mut total = 0;
        for v in options {
            flag[i] = v;
            total += walk(field, rest, flag, budget, steps)?;
        }
        flag[i] = saved;
        Ok(total)
    }

    let mut flag = start;
    walk(&field, &letters, &mut flag, &budget, &mut 0)
}

/// `Σ_{u <= w} q^{ℓ(u)}`, the count through the Bruhat cell decomposition.
pub fn bruhat_interval_point_count(w: &Permutation, q: u32) -> Result<PointCount> {
    PrimeField::new(q)?;
    let mut total: PointCount = 0;
    for u in Permutation::all(w.window()) {
        if u.bruhat_leq(w)? {
            total += (q as PointCount).pow(u.length() as u32);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimvec::{rank_vector, smooth_vector};
    use crate::words::geometrically_compatible_word;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn b() -> Budget {
        Budget::unlimited()
    }

    #[test]
    fn subrep_examples() {
        assert_eq!(
            count_subrepresentations(2, 2, &DimensionVector::zero(2), b()).unwrap(),
            1
        );
        let r = rank_vector(&p("321")).unwrap();
        assert_eq!(count_subrepresentations(2, 2, &r, b()).unwrap(), 27);
        let e = smooth_vector(&p("321")).unwrap();
        assert_eq!(e.rows(), vec![vec![0, 0], vec![0, 0], vec![1, 2]]);
        assert_eq!(count_subrepresentations(2, 2, &e, b()).unwrap(), 21);
    }

    #[test]
    fn subrep_errors() {
        let r = rank_vector(&p("321")).unwrap();
        assert!(matches!(
            count_subrepresentations(3, 2, &r, b()),
            Err(Error::ShapeMismatch(_))
        ));
        let mut bad = DimensionVector::zero(2);
        bad.set(1, 1, 2);
        assert!(matches!(
            count_subrepresentations(2, 2, &bad, b()),
            Err(Error::EntryExceedsAmbient { .. })
        ));
        assert!(matches!(
            count_subrepresentations(5, 2, &DimensionVector::zero(5), b()),
            Err(Error::BudgetExceeded(_))
        ));
        let big = rank_vector(&p("54321")).unwrap();
        assert!(matches!(
            count_subrepresentations(4, 3, &big, Budget::from_millis(0)),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn schubert_examples() {
        assert_eq!(count_schubert_points(&p("123"), 2, b()).unwrap(), 1);
        assert_eq!(count_schubert_points(&p("1234"), 3, b()).unwrap(), 1);
        assert_eq!(count_schubert_points(&p("321"), 2, b()).unwrap(), 21);
        assert_eq!(count_schubert_points(&p("213"), 2, b()).unwrap(), 3);
        assert!(matches!(
            count_schubert_points(&p("123456"), 2, b()),
            Err(Error::BudgetExceeded(_))
        ));
        assert!(matches!(
            count_schubert_points(&p("123"), 5, b()),
            Err(Error::UnsupportedField(5))
        ));
    }

    #[test]
    fn bott_samelson_examples() {
        assert_eq!(
            count_bott_samelson_points(&ReducedWord::empty(4), 2, b()).unwrap(),
            1
        );
        let w = ReducedWord::parse(3, "1 2 1").unwrap();
        assert_eq!(count_bott_samelson_points(&w, 2, b()).unwrap(), 27);
        let w = ReducedWord::parse(4, "2 1 3 2").unwrap();
        assert_eq!(count_bott_samelson_points(&w, 3, b()).unwrap(), 256);
        let nr = ReducedWord::parse(3, "1 1").unwrap();
        assert_eq!(
            count_bott_samelson_points(&nr, 2, b()),
            Err(Error::NotReduced)
        );
    }

    #[test]
    fn bruhat_examples() {
        assert_eq!(bruhat_interval_point_count(&p("1234"), 2).unwrap(), 1);
        assert_eq!(bruhat_interval_point_count(&p("321"), 2).unwrap(), 21);
        assert_eq!(bruhat_interval_point_count(&p("213"), 2).unwrap(), 3);
    }

    #[test]
    fn oracles_agree_on_s3() {
        for w in Permutation::all(3) {
            for q in [2u32, 3] {
                let expected = (q as PointCount + 1).pow(w.length() as u32);
                let r = rank_vector(&w).unwrap();
                assert_eq!(
                    count_subrepresentations(2, q, &r, b()).unwrap(),
                    expected,
                    "{w}"
                );
                let word = geometrically_compatible_word(&w);
                assert_eq!(count_bott_samelson_points(&word, q, b()).unwrap(), expected);
                let e = smooth_vector(&w).unwrap();
                let schubert = count_schubert_points(&w, q, b()).unwrap();
                assert_eq!(
                    count_subrepresentations(2, q, &e, b()).unwrap(),
                    schubert,
                    "{w}"
                );
                assert_eq!(bruhat_interval_point_count(&w, q).unwrap(), schubert);
            }
        }
    }

    #[test]
    fn standard_flag() {
        let f = PrimeField::new(2).unwrap();
        let flag = FlagPoint::standard(&f, 4);
        assert_eq!(flag.window(), 4);
        assert_eq!(flag.get(&f, 0).dim(), 0);
        assert_eq!(flag.get(&f, 2), Subspace::coordinate(&f, 4, 2));
        assert_eq!(flag.get(&f, 4).dim(), 4);
    }
}
