//! The dictionary between letters of a geometrically compatible word and
//! free vertices of the rank vector, and the step table of the matching
//! Bott-Samelson tower.

use serde::{Deserialize, Serialize};

use crate::dimvec::{free_vertices, rank_vector, FreeVertex};
use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::words::{is_geometrically_compatible, ReducedWord};

/// Letter `k` (counted from the right) sent to grid vertex `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub k: usize,
    pub letter: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexAssignment {
    pub word: Vec<usize>,
    pub targets: Vec<Target>,
}

impl VertexAssignment {
    pub fn target(&self, k: usize) -> Target {
        self.targets[k - 1]
    }
}

/// `n_k`: earlier occurrences (smaller `k`) of the letter `i_k`.
pub fn repeat_index(word: &ReducedWord, k: usize) -> usize {
    let letter = word.letter(k);
    (1..k).filter(|&j| word.letter(j) == letter).count()
}

/// Sends the `(n_k + 1)`-th occurrence of letter `i` (counting from the
/// right) to the free vertex of value `i` in the `(n_k + 1)`-th lowest row
/// that carries one. Within a row free-vertex values strictly increase, so
/// each row holds at most one vertex of a given value.
pub fn bs_vertex_assignment(word: &ReducedWord, w: &Permutation) -> Result<VertexAssignment> {
    if !is_geometrically_compatible(word, w)? {
        return Err(Error::NotCompatible(w.to_string()));
    }
    let free = free_vertices(&rank_vector(w)?);
    let mut targets = Vec::with_capacity(word.len());
    for k in 1..=word.len() {
        let letter = word.letter(k);
        let nk = repeat_index(word, k);
        let mut same_value: Vec<&FreeVertex> = free.iter().filter(|f| f.value == letter).collect();
        same_value.sort_by_key(|f| f.row);
        let fv = same_value
            .get(nk)
            .ok_or(Error::NoSuchFreeVertex { k, value: letter })?;
        targets.push(Target {
            k,
            letter,
            row: fv.row,
            col: fv.col,
        });
    }
    Ok(VertexAssignment {
        word: word.letters().to_vec(),
        targets,
    })
}

/// The closed-form row `i_k + 1 + n_k`. It agrees with the assignment
/// exactly when the free vertices of each value occupy consecutive rows
/// starting right below that value.
pub fn closed_form_row(word: &ReducedWord, k: usize) -> usize {
    word.letter(k) + 1 + repeat_index(word, k)
}

/// One step of the Bott-Samelson tower: flag `V^k` agrees with `V^{k-1}`
/// except in position `position`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlagStep {
    pub k: usize,
    pub position: usize,
}

/// Which subspace sits in each position of `V^k`: `None` for the standard
/// `F_i`, `Some(j)` for the subspace introduced at step `j`.
pub type FlagChain = Vec<Option<usize>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintTable {
    pub window: usize,
    pub steps: Vec<FlagStep>,
}

impl ConstraintTable {
    /// The chain of `V^k`, positions `1..window-1`. `k = 0` is the standard flag.
    pub fn chain(&self, k: usize) -> FlagChain {
        let mut chain = vec![None; self.window - 1];
        for step in &self.steps[..k] {
            chain[step.position - 1] = Some(step.k);
        }
        chain
    }

    /// Renders `V^k` as e.g. `F1 ⊆ V2_1 ⊆ F3 ⊆ V1_4`.
    pub fn render_chain(&self, k: usize) -> String {
        self.chain(k)
            .iter()
            .enumerate()
            .map(|(idx, slot)| match slot {
                None => format!("F{}", idx + 1),
                Some(step) => format!("V{}_{}", step, idx + 1),
            })
            .collect::<Vec<_>>()
            .join(" ⊆ ")
    }
}

/// Step `k` frees position `i_k` only.
pub fn bs_flag_constraints(word: &ReducedWord) -> ConstraintTable {
    let steps = (1..=word.len())
        .map(|k| FlagStep {
            k,
            position: word.letter(k),
        })
        .collect();
    ConstraintTable {
        window: word.window(),
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::geometrically_compatible_word;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn example_assignment() {
        let word = ReducedWord::parse(5, "1 2 3 1 2 1 4").unwrap();
        let a = bs_vertex_assignment(&word, &p("43251")).unwrap();
        let rc = |k: usize| (a.target(k).row, a.target(k).col);
        assert_eq!(rc(2), (2, 3));
        assert_eq!(rc(4), (3, 2));
        assert_eq!(rc(7), (4, 1));
        for k in 1..=7 {
            assert_eq!(a.target(k).row, closed_form_row(&word, k));
        }
        let mut hit: Vec<_> = a.targets.iter().map(|t| (t.row, t.col, t.letter)).collect();
        hit.sort();
        let free: Vec<_> = free_vertices(&rank_vector(&p("43251")).unwrap())
            .iter()
            .map(|f| (f.row, f.col, f.value))
            .collect();
        assert_eq!(hit, free);
    }

    #[test]
    fn single_letter_targets() {
        for window in 3..=6 {
            for i in 1..window {
                let word = ReducedWord::new(window, vec![i]).unwrap();
                let a = bs_vertex_assignment(&word, &word.evaluate()).unwrap();
                assert_eq!((a.targets[0].row, a.targets[0].col), (i + 1, i));
            }
        }
    }

    #[test]
    fn rejects_incompatible_words() {
        let word = ReducedWord::parse(5, "3 1 2 1 3 2 4").unwrap();
        assert!(matches!(
            bs_vertex_assignment(&word, &p("43251")),
            Err(Error::NotCompatible(_))
        ));
    }

    #[test]
    fn closed_form_row_can_miss() {
        // the only reduced word of 312 is s_2 s_1; the s_1 vertex sits in row 3
        let word = ReducedWord::parse(3, "2 1").unwrap();
        let a = bs_vertex_assignment(&word, &p("312")).unwrap();
        assert_eq!((a.target(1).row, a.target(1).col), (3, 1));
        assert_eq!(closed_form_row(&word, 1), 2);
    }

    #[test]
    fn bijection_over_s4_and_s5() {
        for window in 3..=5 {
            for w in Permutation::all(window) {
                let word = geometrically_compatible_word(&w);
                let a = bs_vertex_assignment(&word, &w).unwrap();
                let rv = rank_vector(&w).unwrap();
                let mut hit: Vec<_> = a.targets.iter().map(|t| (t.row, t.col, t.letter)).collect();
                hit.sort();
                let free: Vec<_> = free_vertices(&rv)
                    .iter()
                    .map(|f| (f.row, f.col, f.value))
                    .collect();
                assert_eq!(hit, free, "{w}");
                for t in &a.targets {
                    assert_eq!(rv.get(t.row, t.col), t.letter);
                    assert!(t.col >= t.letter, "column offset is nonnegative");
                }
            }
        }
    }

    #[test]
    fn constraint_table() {
        let word = ReducedWord::parse(5, "1 2 3 1 2 1 4").unwrap();
        let table = bs_flag_constraints(&word);
        assert_eq!(table.steps.len(), 7);
        assert_eq!(table.steps[0], FlagStep { k: 1, position: 4 });
        let rendered: Vec<_> = (1..=7).map(|k| table.render_chain(k)).collect();
        assert_eq!(
            rendered,
            vec![
                "F1 ⊆ F2 ⊆ F3 ⊆ V1_4",
                "V2_1 ⊆ F2 ⊆ F3 ⊆ V1_4",
                "V2_1 ⊆ V3_2 ⊆ F3 ⊆ V1_4",
                "V4_1 ⊆ V3_2 ⊆ F3 ⊆ V1_4",
                "V4_1 ⊆ V3_2 ⊆ V5_3 ⊆ V1_4",
                "V4_1 ⊆ V6_2 ⊆ V5_3 ⊆ V1_4",
                "V7_1 ⊆ V6_2 ⊆ V5_3 ⊆ V1_4",
            ]
        );
        assert!(bs_flag_constraints(&ReducedWord::empty(4)).steps.is_empty());
        let single = bs_flag_constraints(&ReducedWord::new(4, vec![2]).unwrap());
        assert_eq!(single.steps, vec![FlagStep { k: 1, position: 2 }]);
        assert_eq!(single.chain(1), vec![None, Some(1), None]);
    }
}
