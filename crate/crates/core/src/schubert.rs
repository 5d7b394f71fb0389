//! Schubert polynomials and their principal specializations.
//!
//! `𝔖_w` is computed top-down: starting from the staircase monomial
//! `x_1^{n−1}x_2^{n−2}⋯x_{n−1}` of `w₀` and applying `∂_i` along a chain of
//! ascents from `w` up to `w₀`. The specialization `ν_w = 𝔖_w(1,…,1)` has a
//! faster integer-only route through the transition recursion
//!
//! ```text
//! 𝔖_w = x_r 𝔖_v + Σ_{q<r, ℓ(v t_{qr}) = ℓ(w)} 𝔖_{v t_{qr}},   v = w t_{rs},
//! ```
//!
//! where `r` is the last descent of `w` and `s > r` is the last position with
//! `w_s < w_r`. Every term on the right is either shorter than `w` or of the
//! same length and lexicographically larger, so the recursion is well founded.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::perm::{level, max_length, Permutation};
use crate::poly::{SparsePolynomial, UnivariatePolynomial};

/// `x_1^{n−1} x_2^{n−2} ⋯ x_{n−1}` in `nvars ≥ n−1` variables.
fn staircase_in(n: usize, nvars: usize) -> SparsePolynomial {
    let mut e = vec![0u32; nvars];
    for (i, slot) in e.iter_mut().enumerate().take(n.saturating_sub(1)) {
        *slot = (n - 1 - i) as u32;
    }
    SparsePolynomial::monomial(nvars, e, BigInt::one())
}

/// The Schubert polynomial of `w₀ ∈ S_n`, in `n−1` variables.
pub fn staircase(n: usize) -> SparsePolynomial {
    staircase_in(n, n.saturating_sub(1))
}

/// A reduced word `a_1⋯a_p` with `w s_{a_1}⋯s_{a_p} = w₀`, built by taking
/// the ascent picked by `choose` at each step.
pub fn ascent_word_to_longest<F>(w: &Permutation, mut choose: F) -> Vec<usize>
where
    F: FnMut(&[usize]) -> usize,
{
    let mut cur = w.clone();
    let mut word = Vec::new();
    loop {
        let ascents = cur.ascents();
        if ascents.is_empty() {
            return word;
        }
        let i = choose(&ascents);
        debug_assert!(ascents.contains(&i));
        cur = cur.swapped(i, i + 1);
        word.push(i);
    }
}

/// `𝔖_w` via the chain of first ascents.
pub fn schubert(w: &Permutation) -> SparsePolynomial {
    let word = ascent_word_to_longest(w, |a| a[0]);
    schubert_along(w, &word).expect("first-ascent word is reduced")
}

/// `𝔖_w = ∂_{a_1}⋯∂_{a_p} x^δ` for a reduced word `a` of `w⁻¹w₀`, given as
/// the ascents taken on the way from `w` up to `w₀`.
pub fn schubert_along(w: &Permutation, word: &[usize]) -> Result<SparsePolynomial> {
    let n = w.n();
    let mut cur = w.clone();
    for &i in word {
        if i == 0 || i >= n || cur.at(i) > cur.at(i + 1) {
            return Err(Error::InvalidPermutation(format!(
                "{word:?} is not an ascent word from {w} to w0"
            )));
        }
        cur = cur.swapped(i, i + 1);
    }
    if cur != Permutation::longest(n) {
        return Err(Error::InvalidPermutation(format!(
            "{word:?} does not reach w0 from {w}"
        )));
    }
    // x_n may appear in intermediate steps before cancelling
    let mut f = staircase_in(n, n);
    for &i in word.iter().rev() {
        f = f.divided_difference(i)?;
    }
    f.with_nvars(n.saturating_sub(1))
}

/// `∂_v f`: descends from `v` to the identity through first descents,
/// applying `∂_i` at each step.
pub fn divided_difference_chain(f: &SparsePolynomial, v: &Permutation) -> Result<SparsePolynomial> {
    let nvars = f.nvars().max(v.n());
    let mut g = f.with_nvars(nvars)?;
    let mut cur = v.clone();
    while let Some(&i) = cur.descents().first() {
        g = g.divided_difference(i)?;
        cur = cur.swapped(i, i + 1);
    }
    Ok(g)
}

/// The coefficient `[𝔖_v] f` for homogeneous `f` of degree `ℓ(v)`.
///
/// Valid for any polynomial, since Schubert polynomials of `S_∞` form a basis:
/// components outside `S_n` do not interfere.
pub fn schubert_coefficient(f: &SparsePolynomial, v: &Permutation) -> Result<BigInt> {
    Ok(divided_difference_chain(f, v)?.constant_term())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchubertExpansion {
    pub degree: usize,
    pub coefficients: BTreeMap<Permutation, BigInt>,
}

/// Writes a homogeneous `f` of degree `d` in the basis `{𝔖_v : v ∈ S_n, ℓ(v) = d}`.
pub fn expand_in_schuberts(f: &SparsePolynomial, d: usize, n: usize) -> Result<SchubertExpansion> {
    if !f.is_homogeneous() || f.degree().is_some_and(|deg| deg as usize != d) {
        return Err(Error::ReconstructionMismatch { n });
    }
    let mut coefficients = BTreeMap::new();
    if d <= max_length(n) {
        for v in level(n, d)?.members {
            let c = schubert_coefficient(f, &v)?;
            if !c.is_zero() {
                coefficients.insert(v, c);
            }
        }
    }
    let nvars = f.nvars().max(n.saturating_sub(1));
    let mut rebuilt = SparsePolynomial::zero(nvars);
    for (v, c) in &coefficients {
        rebuilt = &rebuilt + &schubert(v).with_nvars(nvars)?.scale(c);
    }
    if rebuilt != f.with_nvars(nvars)? {
        return Err(Error::ReconstructionMismatch { n });
    }
    Ok(SchubertExpansion {
        degree: d,
        coefficients,
    })
}

/// `𝔖_w(1, q, q², …, q^{m−1})`.
pub fn q_nu(w: &Permutation, m: usize) -> Result<UnivariatePolynomial> {
    let s = schubert(w);
    if s.support_width() > m {
        return Err(Error::VariableMismatch {
            left: s.support_width(),
            right: m,
        });
    }
    Ok(s.evaluate_q_powers())
}

/// One step of the transition recursion: `(v, [v t_{qr}, …])`, or `None` for
/// the identity.
pub fn transition(w: &Permutation) -> Option<(Permutation, Vec<Permutation>)> {
    let word = w.word();
    let n = word.len();
    let r = (1..n).rev().find(|&i| word[i - 1] > word[i])?;
    let wr = word[r - 1];
    let s = (r + 1..=n).rev().find(|&j| word[j - 1] < wr)?;
    let v = w.swapped(r, s);
    let vw = v.word();
    let vr = vw[r - 1];
    let mut others = Vec::new();
    for q in 1..r {
        let vq = vw[q - 1];
        if vq < vr && !vw[q..r - 1].iter().any(|&x| vq < x && x < vr) {
            others.push(v.swapped(q, r));
        }
    }
    Some((v, others))
}

/// `ν_w` by the transition recursion alone, without a cache.
pub fn nu_transition(w: &Permutation) -> BigUint {
    let mut memo = HashMap::new();
    transition_into(w, &mut memo, |_| None);
    memo.remove(w).expect("computed")
}

fn transition_into<F>(w: &Permutation, memo: &mut HashMap<Permutation, BigUint>, lookup: F)
where
    F: Fn(&Permutation) -> Option<BigUint>,
{
    let mut stack = vec![w.clone()];
    while let Some(top) = stack.last() {
        if memo.contains_key(top) {
            stack.pop();
            continue;
        }
        if let Some(v) = lookup(top) {
            let top = stack.pop().expect("nonempty");
            memo.insert(top, v);
            continue;
        }
        let Some((v, others)) = transition(top) else {
            let top = stack.pop().expect("nonempty");
            memo.insert(top, BigUint::one());
            continue;
        };
        let mut sum = BigUint::zero();
        let mut missing = Vec::new();
        for dep in std::iter::once(v).chain(others) {
            match memo.get(&dep) {
                Some(x) => sum += x,
                None => match lookup(&dep) {
                    Some(x) => {
                        sum += &x;
                        memo.insert(dep, x);
                    }
                    None => missing.push(dep),
                },
            }
        }
        if missing.is_empty() {
            let top = stack.pop().expect("nonempty");
            memo.insert(top, sum);
        } else {
            stack.extend(missing);
        }
    }
}

/// `ν_w` through the polynomial: `evaluate_ones(schubert(w))`.
pub fn nu_divided_difference(w: &Permutation) -> BigUint {
    schubert(w)
        .evaluate_ones()
        .to_biguint()
        .expect("Schubert coefficients are nonnegative")
}

pub const DEFAULT_PIPE_DREAM_BOUND: usize = 7;

/// Counts reduced pipe dreams of `w`: subsets of the staircase cells
/// `(i, j)`, `i + j ≤ n`, whose reading word (rows top to bottom, each row
/// right to left, cell `(i, j)` reading `s_{i+j−1}`) is a reduced word of `w`.
pub fn nu_pipe_dream_oracle(w: &Permutation, bound: usize) -> Result<BigUint> {
    let n = w.n();
    if n > bound {
        return Err(Error::BoundExceeded(format!(
            "pipe dream enumeration limited to n <= {bound}, got {n}"
        )));
    }
    let mut cells = Vec::new();
    for i in 1..n {
        for j in (1..=n - i).rev() {
            cells.push(i + j - 1);
        }
    }
    let target = w.length();
    let mut count = BigUint::zero();
    pipe_dream_search(w, target, &cells, 0, Permutation::identity(n), 0, &mut count);
    Ok(count)
}

fn pipe_dream_search(
    w: &Permutation,
    target: usize,
    cells: &[usize],
    pos: usize,
    prefix: Permutation,
    len: usize,
    count: &mut BigUint,
) {
    if len == target {
        if prefix == *w {
            *count += 1u32;
        }
        return;
    }
    if cells.len() - pos < target - len {
        return;
    }
    let a = cells[pos];
    if prefix.at(a) < prefix.at(a + 1) {
        let next = prefix.swapped(a, a + 1);
        if next.weak_leq(w).expect("same size") {
            pipe_dream_search(w, target, cells, pos + 1, next, len + 1, count);
        }
    }
    pipe_dream_search(w, target, cells, pos + 1, prefix, len, count);
}

/// Memoized `ν_w` for a fixed `n`.
///
/// Elements in the upper half of the weak order go through the polynomial
/// (few divided differences from the staircase), the rest through the
/// transition recursion. Concurrent readers share the map; writers merge
/// whole computed batches.
#[derive(Debug)]
pub struct NuCache {
    n: usize,
    entries: RwLock<HashMap<Permutation, BigUint>>,
}

pub const CACHE_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheLoad {
    Missing,
    Loaded,
    /// Header did not match this version or `n`; the cache starts empty.
    Rebuilt,
}

impl NuCache {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            entries: RwLock::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, w: &Permutation) -> Option<BigUint> {
        self.entries.read().expect("lock").get(w).cloned()
    }

    pub fn nu(&self, w: &Permutation) -> Result<BigUint> {
        if w.n() != self.n {
            return Err(Error::SizeMismatch {
                left: w.n(),
                right: self.n,
            });
        }
        if let Some(v) = self.get(w) {
            return Ok(v);
        }
        let l = w.length();
        if max_length(self.n) - l <= l {
            let v = nu_divided_difference(w);
            self.entries
                .write()
                .expect("lock")
                .insert(w.clone(), v.clone());
            return Ok(v);
        }
        let mut memo = HashMap::new();
        {
            let map = self.entries.read().expect("lock");
            transition_into(w, &mut memo, |p| map.get(p).cloned());
        }
        let v = memo[w].clone();
        self.entries.write().expect("lock").extend(memo);
        Ok(v)
    }

    /// Recomputes up to `sample` stored entries through the polynomial route
    /// and returns the ones that disagree.
    pub fn spot_check(&self, sample: usize) -> Vec<Permutation> {
        let mut keys: Vec<Permutation> = self.entries.read().expect("lock").keys().cloned().collect();
        keys.sort();
        let step = (keys.len() / sample.max(1)).max(1);
        keys.into_iter()
            .step_by(step)
            .take(sample)
            .filter(|w| self.get(w) != Some(nu_divided_difference(w)))
            .collect()
    }

    fn header(&self) -> String {
        format!("# schubert-nu-cache version={CACHE_FORMAT_VERSION} n={}", self.n)
    }

    /// Writes `<permutation>\t<ν>` lines, sorted, after a header line.
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let map = self.entries.read().expect("lock");
        let mut rows: Vec<_> = map.iter().collect();
        rows.sort();
        let tmp = path.with_extension("tmp");
        {
            let mut out = BufWriter::new(fs::File::create(&tmp)?);
            writeln!(out, "{}", self.header())?;
            for (w, v) in rows {
                writeln!(out, "{w}\t{v}")?;
            }
            out.flush()?;
        }
        fs::rename(tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path, n: usize) -> Result<(Self, CacheLoad)> {
        let cache = Self::new(n);
        let file = match fs::File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok((cache, CacheLoad::Missing)),
            Err(e) => return Err(e.into()),
        };
        let mut lines = BufReader::new(file).lines();
        let header = lines.next().transpose()?.unwrap_or_default();
        if header != cache.header() {
            return Ok((cache, CacheLoad::Rebuilt));
        }
        {
            let mut map = cache.entries.write().expect("lock");
            for (lineno, line) in lines.enumerate() {
                let line = line?;
                let (p, v) = line
                    .split_once('\t')
                    .ok_or_else(|| Error::CacheFormat(format!("line {}: missing tab", lineno + 2)))?;
                let w: Permutation = p.parse()?;
                let v: BigUint = v
                    .parse()
                    .map_err(|_| Error::CacheFormat(format!("line {}: bad value", lineno + 2)))?;
                if w.n() != n || v.is_zero() {
                    return Err(Error::CacheFormat(format!("line {}: bad entry", lineno + 2)));
                }
                map.insert(w, v);
            }
        }
        Ok((cache, CacheLoad::Loaded))
    }
}

/// `ν_w` for every `w ∈ S_n`, indexed by lexicographic rank.
#[derive(Clone, Debug)]
pub struct NuTable {
    n: usize,
    values: Vec<BigUint>,
}

impl NuTable {
    /// Fills the table by the transition recursion, visiting permutations by
    /// increasing length and, within a length, in decreasing lexicographic
    /// order so that every dependency is already present.
    pub fn compute(n: usize) -> Self {
        let total: usize = (1..=n).product();
        let mut order: Vec<(u16, usize)> = Vec::with_capacity(total);
        for (rank, w) in Permutation::all(n).enumerate() {
            order.push((w.length() as u16, rank));
        }
        order.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut values = vec![BigUint::zero(); total];
        for &(_, rank) in &order {
            let w = Permutation::from_lex_rank(n, rank);
            values[rank] = match transition(&w) {
                None => BigUint::one(),
                Some((v, others)) => {
                    let mut sum = values[v.lex_rank()].clone();
                    for o in others {
                        sum += &values[o.lex_rank()];
                    }
                    sum
                }
            };
        }
        Self { n, values }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, w: &Permutation) -> &BigUint {
        &self.values[w.lex_rank()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Permutation, &BigUint)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(r, v)| (Permutation::from_lex_rank(self.n, r), v))
    }

    /// The maximum value and every permutation attaining it, in lex order.
    pub fn max(&self) -> (BigUint, Vec<Permutation>) {
        let best = self.values.iter().max().cloned().unwrap_or_default();
        let argmax = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == best)
            .map(|(r, _)| Permutation::from_lex_rank(self.n, r))
            .collect();
        (best, argmax)
    }
}

/// `∏_{i+j≤n} (x_i + y_j)` with `x_i` as variable `i` and `y_j` as variable
/// `n−1+j` of `2(n−1)` variables.
pub fn cauchy_product(n: usize) -> SparsePolynomial {
    let m = n.saturating_sub(1);
    let mut acc = SparsePolynomial::one(2 * m);
    for i in 1..n {
        for j in 1..=n - i {
            let x = SparsePolynomial::variable(2 * m, i).expect("in range");
            let y = SparsePolynomial::variable(2 * m, m + j).expect("in range");
            acc = &acc * &(&x + &y);
        }
    }
    acc
}

/// `Σ_{w ∈ S_n} 𝔖_w(x) 𝔖_{w∘w₀}(y)` in the variables of [`cauchy_product`].
///
/// Under the `(u∘v)(i) = u(v(i))` convention the partner of `w` is `w∘w₀`;
/// `w⁻¹∘w₀` gives the same numeric sum but not the same polynomial.
pub fn cauchy_schubert_sum(n: usize) -> SparsePolynomial {
    let m = n.saturating_sub(1);
    let w0 = Permutation::longest(n);
    let mut acc = SparsePolynomial::zero(2 * m);
    for w in Permutation::all(n) {
        let partner = w.compose(&w0).expect("same size");
        let x = schubert(&w).with_nvars(2 * m).expect("fits");
        let y = schubert(&partner).shifted(m, 2 * m).expect("fits");
        acc = &acc + &(&x * &y);
    }
    acc
}

/// `Σ_{w ∈ S_n} ν_w ν_{w⁻¹w₀}`.
pub fn cauchy_nu_sum(table: &NuTable) -> BigUint {
    let w0 = Permutation::longest(table.n());
    table
        .iter()
        .map(|(w, v)| v * table.get(&w.inverse().compose(&w0).expect("same size")))
        .sum()
}

pub fn biguint_to_f64_log2(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 64 {
        return v.to_u64().map(|x| (x as f64).log2()).unwrap_or(0.0);
    }
    let shift = bits - 53;
    let top = (v >> shift).to_u64().unwrap_or(0) as f64;
    top.log2() + shift as f64
}
