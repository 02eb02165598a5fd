//! Permutations of `{1, ..., window}` in one-line notation.
//!
//! Left multiplication by a simple transposition `s_i` acts on values: it
//! swaps the entries `i` and `i + 1` wherever they sit in the one-line
//! notation.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::ReducedWord;

/// A permutation `w` of `{1, ..., window}` stored by its images `w(1), ..., w(window)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

/// The simple transposition `s_i` swapping `i` and `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimpleTransposition(usize);

impl SimpleTransposition {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 {
            return Err(Error::IndexOutOfRange { index, window: 0 });
        }
        Ok(Self(index))
    }

    pub fn index(self) -> usize {
        self.0
    }
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let window = images.len();
        if window == 0 {
            return Err(Error::NotABijection {
                window,
                detail: "empty permutation".into(),
            });
        }
        let mut seen = vec![false; window + 1];
        for &v in &images {
            if v == 0 || v > window {
                return Err(Error::NotABijection {
                    window,
                    detail: format!("value {v} out of range"),
                });
            }
            if seen[v] {
                return Err(Error::NotABijection {
                    window,
                    detail: format!("value {v} repeated"),
                });
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(window: usize) -> Self {
        Self {
            images: (1..=window).collect(),
        }
    }

    /// The longest element `[window, ..., 2, 1]`.
    pub fn longest(window: usize) -> Self {
        Self {
            images: (1..=window).rev().collect(),
        }
    }

    /// Parses a digit string (`"43251"`) or a comma separated list (`"4,3,2,5,1"`).
    pub fn from_one_line(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::MalformedInput("empty permutation".into()));
        }
        let images = if text.contains(',') {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::MalformedInput(format!("bad token {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::MalformedInput(format!("bad character {c:?}")))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(images)
    }

    pub fn window(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `w(pos)` for a 1-based position.
    pub fn image(&self, pos: usize) -> usize {
        self.images[pos - 1]
    }

    /// `w^{-1}(value)`, a 1-based position.
    pub fn position_of(&self, value: usize) -> usize {
        self.images
            .iter()
            .position(|&v| v == value)
            .expect("value in range")
            + 1
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.window()];
        for (pos, &v) in self.images.iter().enumerate() {
            inv[v - 1] = pos + 1;
        }
        Permutation { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.images;
        (0..w.len())
            .map(|i| (i + 1..w.len()).filter(|&j| w[i] > w[j]).count())
            .sum()
    }

    /// `s · w`: swaps the values `s` and `s + 1`.
    pub fn left_multiply_simple(&self, s: SimpleTransposition) -> Result<Permutation> {
        let i = s.index();
        if i >= self.window() {
            return Err(Error::IndexOutOfRange {
                index: i,
                window: self.window(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|&v| match v {
                v if v == i => i + 1,
                v if v == i + 1 => i,
                v => v,
            })
            .collect();
        Ok(Permutation { images })
    }

    /// Whether `s_i · w` is longer than `w`, i.e. `w^{-1}(i) < w^{-1}(i + 1)`.
    pub fn is_left_ascent(&self, i: usize) -> bool {
        self.position_of(i) < self.position_of(i + 1)
    }

    /// True iff some subsequence of the images has the relative order of `pattern`.
    pub fn contains_pattern(&self, pattern: &Permutation) -> Result<bool> {
        let k = pattern.window();
        if k > self.window() {
            return Err(Error::PatternTooLong {
                pattern: k,
                window: self.window(),
            });
        }
        let mut chosen = Vec::with_capacity(k);
        Ok(self.pattern_search(&pattern.images, 0, &mut chosen))
    }

    fn pattern_search(&self, pattern: &[usize], start: usize, chosen: &mut Vec<usize>) -> bool {
        let depth = chosen.len();
        if depth == pattern.len() {
            return true;
        }
        let remaining = pattern.len() - depth;
        for idx in start..=self.window() - remaining {
            let v = self.images[idx];
            // relative order against every earlier pick must agree with the pattern
            let consistent = chosen
                .iter()
                .zip(pattern)
                .all(|(&u, &pu)| (u < v) == (pu < pattern[depth]));
            if consistent {
                chosen.push(v);
                if self.pattern_search(pattern, idx + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// Avoids both 4231 and 3412.
    pub fn is_smooth(&self) -> bool {
        if self.window() < 4 {
            return true;
        }
        let p4231 = Permutation {
            images: vec![4, 2, 3, 1],
        };
        let p3412 = Permutation {
            images: vec![3, 4, 1, 2],
        };
        !self.contains_pattern(&p4231).unwrap() && !self.contains_pattern(&p3412).unwrap()
    }

    /// `#{k <= col : w(k) <= row}` for `0 <= row, col <= window`.
    pub fn rank(&self, row: usize, col: usize) -> usize {
        self.images[..col].iter().filter(|&&v| v <= row).count()
    }

    /// Chevalley-Bruhat order via the rank-matrix criterion: `u <= w` iff
    /// `r^u(p, q) >= r^w(p, q)` for every `p, q`.
    pub fn bruhat_leq(&self, other: &Permutation) -> Result<bool> {
        if self.window() != other.window() {
            return Err(Error::WindowMismatch {
                left: self.window(),
                right: other.window(),
            });
        }
        let n = self.window();
        for col in 1..n {
            for row in 1..n {
                if self.rank(row, col) < other.rank(row, col) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// A reduced word obtained by repeatedly stripping the largest left descent.
    pub fn some_reduced_word(&self) -> ReducedWord {
        let mut current = self.clone();
        let mut letters = Vec::with_capacity(self.length());
        loop {
            let descent = (1..self.window())
                .rev()
                .find(|&i| !current.is_left_ascent(i));
            match descent {
                Some(i) => {
                    letters.push(i);
                    current = current
                        .left_multiply_simple(SimpleTransposition(i))
                        .expect("descent index in range");
                }
                None => break,
            }
        }
        ReducedWord::new(self.window(), letters).expect("letters in range")
    }

    /// Every permutation of the given window, in lexicographic order of images.
    pub fn all(window: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(window);
        let mut used = vec![false; window + 1];
        fn rec(
            window: usize,
            current: &mut Vec<usize>,
            used: &mut [bool],
            out: &mut Vec<Permutation>,
        ) {
            if current.len() == window {
                out.push(Permutation {
                    images: current.clone(),
                });
                return;
            }
            for v in 1..=window {
                if !used[v] {
                    used[v] = true;
                    current.push(v);
                    rec(window, current, used, out);
                    current.pop();
                    used[v] = false;
                }
            }
        }
        rec(window, &mut current, &mut used, &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.window() <= 9 {
            for v in &self.images {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.images.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_one_line(s)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(images: Vec<usize>) -> Result<Self> {
        Self::new(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.images
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parses_both_formats() {
        assert_eq!(p("43251").images(), &[4, 3, 2, 5, 1]);
        assert_eq!(p("4,3,2,5,1"), p("43251"));
        assert!(p("12345").is_identity());
        assert_eq!(p("10,9,8,7,6,5,4,3,2,1").window(), 10);
        assert_eq!(
            p("10,9,8,7,6,5,4,3,2,1").to_string(),
            "10,9,8,7,6,5,4,3,2,1"
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            Permutation::from_one_line("43a51"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Permutation::from_one_line("4,x"),
            Err(Error::MalformedInput(_))
        ));
        assert!(matches!(
            Permutation::from_one_line("4325"),
            Err(Error::NotABijection { .. })
        ));
        assert!(matches!(
            Permutation::from_one_line("1123"),
            Err(Error::NotABijection { .. })
        ));
    }

    #[test]
    fn lengths() {
        assert_eq!(p("12345").length(), 0);
        assert_eq!(p("43251").length(), 7);
        assert_eq!(p("4231").length(), 5);
    }

    #[test]
    fn left_multiplication_swaps_values() {
        let s3 = SimpleTransposition::new(3).unwrap();
        assert_eq!(p("34251").left_multiply_simple(s3).unwrap(), p("43251"));
        assert_eq!(p("43251").left_multiply_simple(s3).unwrap(), p("34251"));
        let s1 = SimpleTransposition::new(1).unwrap();
        assert_eq!(p("12").left_multiply_simple(s1).unwrap(), p("21"));
        let s5 = SimpleTransposition::new(5).unwrap();
        assert!(matches!(
            p("12345").left_multiply_simple(s5),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn length_changes_by_one() {
        for window in 1..=5 {
            for w in Permutation::all(window) {
                for i in 1..window {
                    let sw = w.left_multiply_simple(SimpleTransposition(i)).unwrap();
                    assert_eq!(sw.length().abs_diff(w.length()), 1);
                    assert_eq!(sw.length() > w.length(), w.is_left_ascent(i));
                }
            }
        }
    }

    #[test]
    fn patterns() {
        assert!(p("45312").contains_pattern(&p("3412")).unwrap());
        assert!(p("53421").contains_pattern(&p("4231")).unwrap());
        assert!(!p("31542").contains_pattern(&p("4231")).unwrap());
        assert!(!p("31542").contains_pattern(&p("3412")).unwrap());
        assert!(matches!(
            p("123").contains_pattern(&p("1234")),
            Err(Error::PatternTooLong { .. })
        ));
        for w in Permutation::all(4) {
            assert!(w.contains_pattern(&p("1")).unwrap());
        }
    }

    #[test]
    fn smoothness() {
        assert!(p("31542").is_smooth());
        assert!(p("65124837").is_smooth());
        assert!(!p("4231").is_smooth());
        let singular: Vec<_> = Permutation::all(4)
            .into_iter()
            .filter(|w| !w.is_smooth())
            .collect();
        assert_eq!(singular, vec![p("3412"), p("4231")]);
    }

    /// Bruhat order from the subword property: the interval below `w` is the
    /// set of products of subwords of one reduced word of `w`.
    fn subword_interval(w: &Permutation) -> Vec<Permutation> {
        let word = w.some_reduced_word();
        let letters = word.letters().to_vec();
        let mut out = Vec::new();
        for mask in 0u32..(1 << letters.len()) {
            let mut u = Permutation::identity(w.window());
            for (pos, &l) in letters.iter().enumerate().rev() {
                if mask & (1 << pos) != 0 {
                    u = u.left_multiply_simple(SimpleTransposition(l)).unwrap();
                }
            }
            if !out.contains(&u) {
                out.push(u);
            }
        }
        out
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        assert!(!p("321").bruhat_leq(&p("312")).unwrap());
        for window in 3..=4 {
            let all = Permutation::all(window);
            for w in &all {
                let below = subword_interval(w);
                for u in &all {
                    assert_eq!(u.bruhat_leq(w).unwrap(), below.contains(u), "{u} <= {w}");
                }
                assert!(Permutation::identity(window).bruhat_leq(w).unwrap());
                assert!(w.bruhat_leq(w).unwrap());
            }
        }
        assert!(matches!(
            p("12").bruhat_leq(&p("123")),
            Err(Error::WindowMismatch { .. })
        ));
    }

    #[test]
    fn reduced_words_evaluate_back() {
        assert!(p("12345").some_reduced_word().letters().is_empty());
        assert_eq!(p("21").some_reduced_word().letters(), &[1]);
        for window in 1..=5 {
            for w in Permutation::all(window) {
                let word = w.some_reduced_word();
                assert_eq!(word.len(), w.length());
                assert_eq!(word.evaluate(), w);
            }
        }
    }

    #[test]
    fn inverse_roundtrip() {
        for w in Permutation::all(4) {
            let inv = w.inverse();
            for k in 1..=4 {
                assert_eq!(inv.image(w.image(k)), k);
                assert_eq!(w.position_of(k), inv.image(k));
            }
        }
    }
}
