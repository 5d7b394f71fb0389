//! Permutations of `S_n` in one-line notation.
//!
//! Composition follows `(u∘v)(i) = u(v(i))`, so right multiplication by the
//! adjacent transposition `s_i` swaps word positions `i` and `i+1`, and right
//! multiplication by `t_{ij}` swaps positions `i` and `j`. Positions and values
//! are 1-based throughout the public API.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A permutation of `{1,…,n}` stored as its one-line word.
///
/// `Ord` is lexicographic on the word, which is the canonical level order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<u8>);

impl Permutation {
    pub fn new(word: Vec<u8>) -> Result<Self> {
        let n = word.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::InvalidPermutation(format!("bad size {n}")));
        }
        let mut seen = vec![false; n];
        for &a in &word {
            let a = a as usize;
            if a == 0 || a > n || seen[a - 1] {
                return Err(Error::InvalidPermutation(format!("{word:?}")));
            }
            seen[a - 1] = true;
        }
        Ok(Self(word))
    }

    pub fn from_slice(word: &[usize]) -> Result<Self> {
        if word.iter().any(|&a| a > u8::MAX as usize) {
            return Err(Error::InvalidPermutation(format!("{word:?}")));
        }
        Self::new(word.iter().map(|&a| a as u8).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self((1..=n as u8).collect())
    }

    /// The longest element `w₀ = n,n−1,…,1`.
    pub fn longest(n: usize) -> Self {
        Self((1..=n as u8).rev().collect())
    }

    /// The adjacent transposition `s_i` as an element of `S_n`.
    pub fn simple(n: usize, i: usize) -> Result<Self> {
        Self::identity(n).right_multiply_s(i)
    }

    /// The transposition `t_{ij}` as an element of `S_n`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        Self::identity(n).right_multiply_t(i, j)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn word(&self) -> &[u8] {
        &self.0
    }

    /// Value at 1-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i - 1] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| a as usize == i + 1)
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let w = &self.0;
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    /// `(self∘other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self(
            other.0.iter().map(|&b| self.0[b as usize - 1]).collect(),
        ))
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u8; self.n()];
        for (i, &a) in self.0.iter().enumerate() {
            inv[a as usize - 1] = (i + 1) as u8;
        }
        Self(inv)
    }

    /// `self·s_i`: swaps positions `i` and `i+1`.
    pub fn right_multiply_s(&self, i: usize) -> Result<Self> {
        let n = self.n();
        if i == 0 || i >= n {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: n.saturating_sub(1),
            });
        }
        Ok(self.swapped(i, i + 1))
    }

    /// `self·t_{ij}`: swaps positions `i < j`.
    pub fn right_multiply_t(&self, i: usize, j: usize) -> Result<Self> {
        let n = self.n();
        if i == 0 || j > n || i >= j {
            return Err(Error::IndexOutOfRange {
                index: if i == 0 || i >= j { i } else { j },
                max: n,
            });
        }
        Ok(self.swapped(i, j))
    }

    pub(crate) fn swapped(&self, i: usize, j: usize) -> Self {
        let mut w = self.0.clone();
        w.swap(i - 1, j - 1);
        Self(w)
    }

    /// Positions `i` with `w_i > w_{i+1}`.
    pub fn descents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.0[i - 1] > self.0[i]).collect()
    }

    /// Positions `i` with `w_i < w_{i+1}`.
    pub fn ascents(&self) -> Vec<usize> {
        (1..self.n()).filter(|&i| self.0[i - 1] < self.0[i]).collect()
    }

    /// Upper covers in the right weak order, one per ascent.
    pub fn weak_covers(&self) -> Vec<(usize, Self)> {
        self.ascents()
            .into_iter()
            .map(|i| (i, self.swapped(i, i + 1)))
            .collect()
    }

    /// Upper covers in Bruhat order: `self·t_{ij}` with length rising by one.
    pub fn bruhat_covers(&self) -> Vec<((usize, usize), Self)> {
        let w = &self.0;
        let n = w.len();
        let mut out = Vec::new();
        for i in 0..n {
            // Scanning right, a cover exists at j exactly when w_j is the
            // smallest value above w_i seen so far.
            let mut ceiling = u8::MAX;
            for j in i + 1..n {
                if w[j] > w[i] && w[j] < ceiling {
                    out.push(((i + 1, j + 1), self.swapped(i + 1, j + 1)));
                    ceiling = w[j];
                }
            }
        }
        out
    }

    /// Right weak order: `u ≤ v` iff `ℓ(u) + ℓ(u⁻¹v) = ℓ(v)`.
    pub fn weak_leq(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        let connecting = self.inverse().compose(other)?;
        Ok(self.length() + connecting.length() == other.length())
    }

    pub fn lehmer_code(&self) -> LehmerCode {
        let w = &self.0;
        let entries = (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&b| b < w[i]).count())
            .collect();
        LehmerCode { entries }
    }

    /// Index triples `i<j<k` with `a_i < a_k < a_j`.
    pub fn count_132(&self) -> u64 {
        let w = &self.0;
        let n = w.len();
        let mut count = 0u64;
        for j in 1..n {
            for k in j + 1..n {
                if w[k] < w[j] {
                    count += w[..j].iter().filter(|&&a| a < w[k]).count() as u64;
                }
            }
        }
        count
    }

    /// 132-avoiding, checked through the Lehmer code being weakly decreasing.
    pub fn is_dominant(&self) -> bool {
        self.lehmer_code().is_weakly_decreasing()
    }

    /// Position of this permutation in the lexicographic order of `S_n`.
    pub fn lex_rank(&self) -> usize {
        let code = self.lehmer_code();
        let n = self.n();
        code.entries
            .iter()
            .enumerate()
            .fold(0usize, |acc, (i, &c)| acc * (n - i) + c)
    }

    pub fn from_lex_rank(n: usize, mut rank: usize) -> Self {
        let mut code = vec![0usize; n];
        for i in (0..n).rev() {
            let radix = n - i;
            code[i] = rank % radix;
            rank /= radix;
        }
        LehmerCode { entries: code }.to_permutation()
    }

    /// All of `S_n` in lexicographic order.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        let total: usize = (1..=n).product();
        (0..total).map(move |r| Permutation::from_lex_rank(n, r))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::SizeMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    /// Accepts `1,4,3,2` and, for `n ≤ 9`, the compact form `1432`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let word: Vec<usize> = if s.contains(',') {
            s.split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad permutation entry {t:?}")))
                })
                .collect::<Result<_>>()?
        } else {
            if s.len() > 9 {
                return Err(Error::Parse(format!(
                    "compact permutation {s:?} is ambiguous; use commas"
                )));
            }
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad permutation digit {c:?}")))
                })
                .collect::<Result<_>>()?
        };
        Self::from_slice(&word)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Inversion table `λ_i = #{j>i : w_j < w_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LehmerCode {
    pub entries: Vec<usize>,
}

impl LehmerCode {
    pub fn sum(&self) -> usize {
        self.entries.iter().sum()
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.entries.windows(2).all(|p| p[0] >= p[1])
    }

    pub fn to_permutation(&self) -> Permutation {
        let n = self.entries.len();
        let mut unused: Vec<u8> = (1..=n as u8).collect();
        let word = self
            .entries
            .iter()
            .map(|&c| unused.remove(c))
            .collect();
        Permutation(word)
    }
}

/// The permutations of a fixed length, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankLevel {
    pub n: usize,
    pub k: usize,
    pub members: Vec<Permutation>,
}

impl RankLevel {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, w: &Permutation) -> Option<usize> {
        self.members.binary_search(w).ok()
    }
}

pub fn max_length(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// `(W_n)_k` in lexicographic order, enumerated through Lehmer codes.
pub fn level(n: usize, k: usize) -> Result<RankLevel> {
    if n == 0 || k > max_length(n) {
        return Err(Error::RankOutOfRange { n, k });
    }
    let mut members = Vec::new();
    let mut code = vec![0usize; n];
    fill_codes(n, 0, k, &mut code, &mut members);
    Ok(RankLevel { n, k, members })
}

fn fill_codes(n: usize, i: usize, remaining: usize, code: &mut [usize], out: &mut Vec<Permutation>) {
    if i == n {
        if remaining == 0 {
            out.push(
                LehmerCode {
                    entries: code.to_vec(),
                }
                .to_permutation(),
            );
        }
        return;
    }
    // later positions absorb at most C(n-i-1, 2) inversions
    let rest = max_length(n - i - 1);
    let hi = (n - 1 - i).min(remaining);
    let lo = remaining.saturating_sub(rest);
    for c in lo..=hi {
        code[i] = c;
        fill_codes(n, i + 1, remaining - c, code, out);
    }
    code[i] = 0;
}

/// Coefficients of `(1+q)(1+q+q²)⋯(1+q+⋯+q^{n−1})`.
pub fn rank_sizes(n: usize) -> Vec<u64> {
    let mut coeffs = vec![1u64];
    for m in 2..=n {
        let mut next = vec![0u64; coeffs.len() + m - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..i + m] {
                *slot += c;
            }
        }
        coeffs = next;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(Permutation::identity(5).length(), 0);
        assert_eq!(p("4321").length(), 6);
        assert_eq!(p("132").length(), 1);
    }

    #[test]
    fn composition_and_inverse() {
        let w = p("2413");
        assert_eq!(Permutation::identity(4).compose(&w).unwrap(), w);
        assert_eq!(p("213").compose(&p("213")).unwrap(), p("123"));
        assert_eq!(p("231").compose(&p("213")).unwrap(), p("321"));
        assert_eq!(p("231").inverse(), p("312"));
        assert_eq!(p("2143").inverse(), p("2143"));
        assert_eq!(w.compose(&w.inverse()).unwrap(), Permutation::identity(4));
        assert!(matches!(
            p("12").compose(&p("123")),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn right_multiplication() {
        assert_eq!(p("123").right_multiply_s(1).unwrap(), p("213"));
        assert_eq!(p("213").right_multiply_s(2).unwrap(), p("231"));
        assert_eq!(p("132").right_multiply_s(1).unwrap(), p("312"));
        assert!(p("123").right_multiply_s(3).is_err());
        assert!(p("123").right_multiply_s(0).is_err());
        assert_eq!(p("1234").right_multiply_t(1, 4).unwrap(), p("4231"));
        assert_eq!(p("2143").right_multiply_t(2, 3).unwrap(), p("2413"));
        assert_eq!(
            Permutation::identity(4).right_multiply_t(2, 3).unwrap(),
            Permutation::identity(4).right_multiply_s(2).unwrap()
        );
        assert!(p("1234").right_multiply_t(3, 3).is_err());
        assert!(p("1234").right_multiply_t(1, 5).is_err());
    }

    #[test]
    fn covers() {
        assert_eq!(
            Permutation::identity(3).weak_covers(),
            vec![(1, p("213")), (2, p("132"))]
        );
        assert!(Permutation::longest(4).weak_covers().is_empty());
        assert_eq!(p("213").weak_covers(), vec![(2, p("231"))]);

        assert_eq!(
            Permutation::identity(3).bruhat_covers(),
            vec![((1, 2), p("213")), ((2, 3), p("132"))]
        );
        assert!(Permutation::longest(4).bruhat_covers().is_empty());
        assert_eq!(
            p("132").bruhat_covers(),
            vec![((1, 2), p("312")), ((1, 3), p("231"))]
        );
    }

    #[test]
    fn bruhat_covers_raise_length_by_one() {
        for w in Permutation::all(5) {
            let l = w.length();
            let covers = w.bruhat_covers();
            for ((i, j), v) in &covers {
                assert_eq!(v.length(), l + 1);
                assert_eq!(*v, w.right_multiply_t(*i, *j).unwrap());
            }
            let brute = (1..=5)
                .flat_map(|i| (i + 1..=5).map(move |j| (i, j)))
                .filter(|&(i, j)| w.right_multiply_t(i, j).unwrap().length() == l + 1)
                .count();
            assert_eq!(covers.len(), brute);
        }
    }

    #[test]
    fn weak_order() {
        let u = p("2314");
        assert!(u.weak_leq(&u).unwrap());
        for w in Permutation::all(4) {
            assert!(Permutation::identity(4).weak_leq(&w).unwrap());
            assert!(w.weak_leq(&Permutation::longest(4)).unwrap());
        }
        assert!(!p("213").weak_leq(&p("312")).unwrap());
    }

    #[test]
    fn levels() {
        assert_eq!(level(3, 1).unwrap().members, vec![p("132"), p("213")]);
        assert_eq!(level(5, 0).unwrap().members, vec![Permutation::identity(5)]);
        assert_eq!(level(4, 2).unwrap().len(), 5);
        assert!(level(3, 4).is_err());
        for n in 1..=6 {
            let sizes = rank_sizes(n);
            for (k, &size) in sizes.iter().enumerate() {
                let lvl = level(n, k).unwrap();
                assert_eq!(lvl.len() as u64, size);
                assert!(lvl.members.windows(2).all(|w| w[0] < w[1]));
                assert!(lvl.members.iter().all(|w| w.length() == k));
            }
        }
    }

    #[test]
    fn rank_size_vectors() {
        assert_eq!(rank_sizes(3), vec![1, 2, 2, 1]);
        assert_eq!(rank_sizes(2), vec![1, 1]);
        assert_eq!(rank_sizes(4), vec![1, 3, 5, 6, 5, 3, 1]);
        for n in 1..=8 {
            let s = rank_sizes(n);
            let total: u64 = s.iter().sum();
            assert_eq!(total, (1..=n as u64).product::<u64>());
            let mut rev = s.clone();
            rev.reverse();
            assert_eq!(s, rev);
        }
    }

    #[test]
    fn lehmer_codes() {
        assert_eq!(Permutation::identity(4).lehmer_code().entries, vec![0; 4]);
        assert_eq!(p("321").lehmer_code().entries, vec![2, 1, 0]);
        assert_eq!(p("1432").lehmer_code().entries, vec![0, 2, 1, 0]);
        for w in Permutation::all(5) {
            let code = w.lehmer_code();
            assert_eq!(code.sum(), w.length());
            assert_eq!(*code.entries.last().unwrap(), 0);
            assert_eq!(code.to_permutation(), w);
        }
    }

    #[test]
    fn lex_rank_round_trip() {
        for (r, w) in Permutation::all(5).enumerate() {
            assert_eq!(w.lex_rank(), r);
        }
        let all: Vec<_> = Permutation::all(4).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn pattern_132() {
        assert_eq!(p("132").count_132(), 1);
        assert_eq!(p("321").count_132(), 0);
        assert!(Permutation::identity(4).is_dominant());
        assert!(Permutation::longest(4).is_dominant());
        assert!(!p("132").is_dominant());
        let exactly_one = Permutation::all(5).filter(|w| w.count_132() == 1).count();
        assert_eq!(exactly_one, 21);
    }

    #[test]
    fn parse_and_display() {
        let w: Permutation = "1,4,3,2,10,9,8,7,6,5".parse().unwrap();
        assert_eq!(w.n(), 10);
        assert_eq!(w.to_string(), "1,4,3,2,10,9,8,7,6,5");
        assert_eq!(p("1432"), "1,4,3,2".parse().unwrap());
        assert!("1223".parse::<Permutation>().is_err());
        assert!("1,2,4".parse::<Permutation>().is_err());
        assert!("1234567890".parse::<Permutation>().is_err());
        assert!("".parse::<Permutation>().is_err());
    }
}
