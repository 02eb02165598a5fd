//! Words in the simple transpositions, rewriting by commutation and braid
//! moves, and the search for geometrically compatible reduced words.
//!
//! A word is stored left to right as written, `s_{i_N} ... s_{i_1}`. The
//! rightmost letter acts first, so the letter with index `k` (counting from
//! the right, starting at 1) is `letters[len - k]`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dimvec::{free_vertices, rank_vector};
use crate::error::{Error, Result};
use crate::perm::{Permutation, SimpleTransposition};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ReducedWord {
    window: usize,
    letters: Vec<usize>,
}

/// One rewriting step. Positions are 1-based and refer to the leftmost
/// letter touched by the move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", content = "pos", rename_all = "snake_case")]
pub enum Move {
    Commute(usize),
    Braid(usize),
}

impl ReducedWord {
    pub fn new(window: usize, letters: Vec<usize>) -> Result<Self> {
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l >= window) {
            return Err(Error::LetterOutOfRange { letter, window });
        }
        Ok(Self { window, letters })
    }

    pub fn empty(window: usize) -> Self {
        Self {
            window,
            letters: Vec::new(),
        }
    }

    /// Parses space separated letters, e.g. `"1 2 3 1 2 1 4"`.
    pub fn parse(window: usize, text: &str) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::MalformedInput(format!("bad letter {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(window, letters)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The letter `i_k`, counting `k = 1..=len` from the right end.
    pub fn letter(&self, k: usize) -> usize {
        self.letters[self.letters.len() - k]
    }

    /// `s_{i_N} ... s_{i_1}` applied to the identity.
    pub fn evaluate(&self) -> Permutation {
        self.partial_products()
            .pop()
            .expect("at least the identity")
    }

    /// The products `s_{i_k} ... s_{i_1}` for `k = 0..=len`.
    pub fn partial_products(&self) -> Vec<Permutation> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut current = Permutation::identity(self.window);
        out.push(current.clone());
        for &l in self.letters.iter().rev() {
            current = current
                .left_multiply_simple(SimpleTransposition::new(l).expect("nonzero letter"))
                .expect("letter in range");
            out.push(current.clone());
        }
        out
    }

    pub fn is_reduced(&self) -> bool {
        self.evaluate().length() == self.len()
    }

    /// Multiplicity of each letter, indexed by letter (entry 0 unused).
    pub fn letter_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.window.max(1)];
        for &l in &self.letters {
            counts[l] += 1;
        }
        counts
    }

    /// Swaps the commuting letters at `pos` and `pos + 1`.
    pub fn commutation_move(&self, pos: usize) -> Result<ReducedWord> {
        if pos == 0 || pos >= self.len() {
            return Err(Error::NotCommuting(pos));
        }
        let (a, b) = (self.letters[pos - 1], self.letters[pos]);
        if a.abs_diff(b) < 2 {
            return Err(Error::NotCommuting(pos));
        }
        let mut letters = self.letters.clone();
        letters.swap(pos - 1, pos);
        Ok(ReducedWord {
            window: self.window,
            letters,
        })
    }

    /// Rewrites `a b a` at `pos..pos + 3` into `b a b` when `|a - b| = 1`.
    pub fn braid_move(&self, pos: usize) -> Result<ReducedWord> {
        if pos == 0 || pos + 2 > self.len() {
            return Err(Error::NotABraid(pos));
        }
        let (a, b, c) = (
            self.letters[pos - 1],
            self.letters[pos],
            self.letters[pos + 1],
        );
        if a != c || a.abs_diff(b) != 1 {
            return Err(Error::NotABraid(pos));
        }
        let mut letters = self.letters.clone();
        letters[pos - 1] = b;
        letters[pos] = a;
        letters[pos + 1] = b;
        Ok(ReducedWord {
            window: self.window,
            letters,
        })
    }

    pub fn apply(&self, mv: Move) -> Result<ReducedWord> {
        match mv {
            Move::Commute(pos) => self.commutation_move(pos),
            Move::Braid(pos) => self.braid_move(pos),
        }
    }

    /// Every word reachable by a single move, with the move that reaches it.
    pub fn neighbours(&self) -> Vec<(Move, ReducedWord)> {
        let mut out = Vec::new();
        for pos in 1..=self.len() {
            for mv in [Move::Commute(pos), Move::Braid(pos)] {
                if let Ok(next) = self.apply(mv) {
                    out.push((mv, next));
                }
            }
        }
        out
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Free-vertex value multiplicities of `r^w`, indexed like [`ReducedWord::letter_counts`].
pub fn free_value_counts(w: &Permutation) -> Result<Vec<usize>> {
    let rv = rank_vector(w)?;
    let mut counts = vec![0; w.window()];
    for fv in free_vertices(&rv) {
        counts[fv.value] += 1;
    }
    Ok(counts)
}

/// The letter multiset of `word` equals the multiset of free-vertex values of `r^w`.
pub fn is_geometrically_compatible(word: &ReducedWord, w: &Permutation) -> Result<bool> {
    if word.window() != w.window() || &word.evaluate() != w {
        return Err(Error::WordDoesNotEvaluateToW(w.to_string()));
    }
    if !word.is_reduced() {
        return Err(Error::NotReduced);
    }
    Ok(word.letter_counts() == free_value_counts(w)?)
}

/// A reduced word for `w` whose letters match the free vertices of `r^w`.
pub fn geometrically_compatible_word(w: &Permutation) -> ReducedWord {
    compatible_word_with_transcript(w).0
}

/// Like [`geometrically_compatible_word`], also returning the rewriting moves
/// that lead from [`Permutation::some_reduced_word`] to the result.
pub fn compatible_word_with_transcript(w: &Permutation) -> (ReducedWord, Vec<Move>) {
    repair_word(&w.some_reduced_word()).expect("reduced word of a permutation")
}

/// Rewrites a reduced word into a geometrically compatible one for the
/// permutation it evaluates to, returning the move sequence used.
///
/// Directed braid repair runs first; if it stalls, breadth-first search over
/// the commutation/braid graph takes over from wherever it stopped.
pub fn repair_word(start: &ReducedWord) -> Result<(ReducedWord, Vec<Move>)> {
    if !start.is_reduced() {
        return Err(Error::NotReduced);
    }
    let w = start.evaluate();
    if w.window() < 3 {
        // one letter at most; a single s_1 is always compatible
        return Ok((start.clone(), Vec::new()));
    }
    let target = free_value_counts(&w)?;
    let (word, mut moves) = directed_repair(start, &target);
    if word.letter_counts() == target {
        return Ok((word, moves));
    }
    let (found, tail) = bfs_repair(&word, &target);
    moves.extend(tail);
    Ok((found, moves))
}

/// Signed cumulative mismatch `D_i = sum_{l <= i} (count_l - target_l)`.
fn cumulative_mismatch(counts: &[usize], target: &[usize]) -> Vec<i64> {
    let mut acc = 0i64;
    counts
        .iter()
        .zip(target)
        .map(|(&c, &t)| {
            acc += c as i64 - t as i64;
            acc
        })
        .collect()
}

fn mismatch_potential(counts: &[usize], target: &[usize]) -> i64 {
    cumulative_mismatch(counts, target)
        .iter()
        .map(|d| d.abs())
        .sum()
}

/// Greedy repair: repeatedly slide two copies of an over-represented letter
/// together around a neighbouring letter using commutations, then braid, as
/// long as the braid lowers the mismatch potential.
fn directed_repair(start: &ReducedWord, target: &[usize]) -> (ReducedWord, Vec<Move>) {
    let mut word = start.clone();
    let mut moves = Vec::new();
    loop {
        let counts = word.letter_counts();
        if counts == target {
            break;
        }
        let before = mismatch_potential(&counts, target);
        let Some(plan) = find_braid_plan(&word, target, before) else {
            break;
        };
        for mv in plan {
            word = word.apply(mv).expect("planned move is valid");
            moves.push(mv);
        }
    }
    (word, moves)
}

/// Looks for occurrences `a ... b ... a` (0-based `x < z < y`) where every
/// letter strictly between commutes with `a`, so that both copies of `a`
/// can slide next to `b`. Returns the moves, leftmost candidate first.
fn find_braid_plan(word: &ReducedWord, target: &[usize], before: i64) -> Option<Vec<Move>> {
    let letters = word.letters();
    for x in 0..letters.len() {
        let a = letters[x];
        let Some(y) = (x + 1..letters.len()).find(|&y| letters[y] == a) else {
            continue;
        };
        let blockers: Vec<usize> = (x + 1..y).filter(|&t| letters[t].abs_diff(a) < 2).collect();
        let [z] = blockers[..] else {
            continue;
        };
        let b = letters[z];
        if b == a {
            continue;
        }
        let mut counts = word.letter_counts();
        counts[a] -= 1;
        counts[b] += 1;
        if mismatch_potential(&counts, target) >= before {
            continue;
        }
        let mut plan = Vec::new();
        // slide the left copy rightwards up to z - 1
        for pos in x + 1..z {
            plan.push(Move::Commute(pos));
        }
        // slide the right copy leftwards down to z + 1
        for pos in (z + 2..=y).rev() {
            plan.push(Move::Commute(pos));
        }
        plan.push(Move::Braid(z));
        return Some(plan);
    }
    None
}

/// Breadth-first search over all reduced words of the same permutation,
/// visiting neighbours in lexicographic order.
fn bfs_repair(start: &ReducedWord, target: &[usize]) -> (ReducedWord, Vec<Move>) {
    let mut parent: HashMap<ReducedWord, Option<(ReducedWord, Move)>> = HashMap::new();
    let mut queue = VecDeque::new();
    parent.insert(start.clone(), None);
    queue.push_back(start.clone());
    while let Some(word) = queue.pop_front() {
        if word.letter_counts() == target {
            let mut moves = Vec::new();
            let mut cursor = word.clone();
            while let Some(Some((prev, mv))) = parent.get(&cursor) {
                moves.push(*mv);
                cursor = prev.clone();
            }
            moves.reverse();
            return (word, moves);
        }
        let mut next = word.neighbours();
        next.sort_by(|a, b| a.1.cmp(&b.1));
        for (mv, nb) in next {
            if !parent.contains_key(&nb) {
                parent.insert(nb.clone(), Some((word.clone(), mv)));
                queue.push_back(nb);
            }
        }
    }
    unreachable!("every permutation admits a geometrically compatible reduced word")
}

/// All reduced words of `w`, found by closing one reduced word under moves.
pub fn all_reduced_words(w: &Permutation) -> Vec<ReducedWord> {
    let start = w.some_reduced_word();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(word) = queue.pop_front() {
        for (_, nb) in word.neighbours() {
            if seen.insert(nb.clone()) {
                queue.push_back(nb);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}
