//! Raising operators on the weak and Bruhat orders and the level-to-level
//! matrices built from them.
//!
//! * `U(u) = Σ_{i ascent} i · u s_i` raises along weak-order covers.
//! * `V(u) = Σ (j−i) · u t_{ij}` raises along Bruhat covers.
//!
//! `U^j(u) = j! Σ_v ν_{u⁻¹v} v` over `v ≥ u` with `ℓ(v) = ℓ(u) + j`, which is
//! what ties `D(n,k)` to `D̃(n,k)`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{LabeledMatrix, MatrixKind};
use crate::perm::{level, max_length, Permutation, RankLevel};
use crate::poly::{SparsePolynomial, UnivariatePolynomial};
use crate::schubert::{q_nu, schubert, schubert_coefficient, NuCache};

/// An integer combination of permutations of a single length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelVector {
    pub n: usize,
    pub k: usize,
    coords: BTreeMap<Permutation, BigInt>,
}

impl LevelVector {
    pub fn zero(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            coords: BTreeMap::new(),
        }
    }

    pub fn basis(w: &Permutation) -> Self {
        let mut v = Self::zero(w.n(), w.length());
        v.coords.insert(w.clone(), BigInt::one());
        v
    }

    pub fn add_term(&mut self, w: Permutation, c: BigInt) -> Result<()> {
        if w.n() != self.n {
            return Err(Error::SizeMismatch {
                left: w.n(),
                right: self.n,
            });
        }
        if w.length() != self.k {
            return Err(Error::RankOutOfRange { n: self.n, k: w.length() });
        }
        self.accumulate(w, c);
        Ok(())
    }

    fn accumulate(&mut self, w: Permutation, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coords.entry(w).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coords.retain(|_, c| !c.is_zero());
        }
    }

    pub fn coefficient(&self, w: &Permutation) -> BigInt {
        self.coords.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Permutation, &BigInt)> {
        self.coords.iter()
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_empty()
    }

    fn check_raisable(&self) -> Result<()> {
        if self.k >= max_length(self.n) {
            return Err(Error::RankOutOfRange {
                n: self.n,
                k: self.k + 1,
            });
        }
        Ok(())
    }
}

#[allow(non_snake_case)]
pub fn apply_U(x: &LevelVector) -> Result<LevelVector> {
    x.check_raisable()?;
    let mut out = LevelVector::zero(x.n, x.k + 1);
    for (u, c) in x.iter() {
        for (i, v) in u.weak_covers() {
            out.accumulate(v, c * BigInt::from(i));
        }
    }
    Ok(out)
}

#[allow(non_snake_case)]
pub fn apply_V(x: &LevelVector) -> Result<LevelVector> {
    x.check_raisable()?;
    let mut out = LevelVector::zero(x.n, x.k + 1);
    for (u, c) in x.iter() {
        for ((i, j), v) in u.bruhat_covers() {
            out.accumulate(v, c * BigInt::from(j - i));
        }
    }
    Ok(out)
}

fn apply_power(
    x: &LevelVector,
    times: usize,
    op: fn(&LevelVector) -> Result<LevelVector>,
) -> Result<LevelVector> {
    (0..times).try_fold(x.clone(), |acc, _| op(&acc))
}

#[allow(non_snake_case)]
pub fn apply_U_power(x: &LevelVector, times: usize) -> Result<LevelVector> {
    apply_power(x, times, apply_U)
}

#[allow(non_snake_case)]
pub fn apply_V_power(x: &LevelVector, times: usize) -> Result<LevelVector> {
    apply_power(x, times, apply_V)
}

/// Lower and upper levels for `(n, k)` with `0 ≤ k < C(n,2)/2`.
pub fn matrix_levels(n: usize, k: usize) -> Result<(RankLevel, RankLevel)> {
    let top = max_length(n);
    if n == 0 || 2 * k >= top {
        return Err(Error::RankOutOfRange { n, k });
    }
    Ok((level(n, k)?, level(n, top - k)?))
}

/// Side length of the `(n, k)` matrices without enumerating the level.
pub fn matrix_side(n: usize, k: usize) -> Result<u64> {
    if n == 0 || 2 * k >= max_length(n) {
        return Err(Error::RankOutOfRange { n, k });
    }
    Ok(crate::perm::rank_sizes(n)[k])
}

fn assemble<T, F>(
    n: usize,
    k: usize,
    kind: MatrixKind,
    lower: RankLevel,
    upper: RankLevel,
    row: F,
) -> Result<LabeledMatrix<T>>
where
    T: Send,
    F: Fn(&Permutation, &[Permutation]) -> Result<Vec<T>> + Sync,
{
    let entries = lower
        .members
        .par_iter()
        .map(|u| row(u, &upper.members))
        .collect::<Result<Vec<_>>>()?;
    Ok(LabeledMatrix {
        n,
        k,
        kind,
        row_labels: lower.members,
        col_labels: upper.members,
        entries,
    })
}

fn row_from_vector(x: &LevelVector, cols: &[Permutation]) -> Vec<BigInt> {
    cols.iter().map(|v| x.coefficient(v)).collect()
}

/// `D(n,k)`: row `u` is `U^{C(n,2)−2k}(u)` in the basis of the upper level.
#[allow(non_snake_case)]
pub fn build_D(n: usize, k: usize) -> Result<LabeledMatrix<BigInt>> {
    let (lower, upper) = matrix_levels(n, k)?;
    let power = max_length(n) - 2 * k;
    assemble(n, k, MatrixKind::D, lower, upper, |u, cols| {
        Ok(row_from_vector(&apply_U_power(&LevelVector::basis(u), power)?, cols))
    })
}

/// `D̃(n,k)`: entry `(u, v)` is `ν_{u⁻¹∘v}` when `u ≤ v` in weak order,
/// otherwise 0.
#[allow(non_snake_case)]
pub fn build_D_tilde(n: usize, k: usize, cache: &NuCache) -> Result<LabeledMatrix<BigInt>> {
    let (lower, upper) = matrix_levels(n, k)?;
    assemble(n, k, MatrixKind::DTilde, lower, upper, |u, cols| {
        let uinv = u.inverse();
        cols.iter()
            .map(|v| {
                let connecting = uinv.compose(v)?;
                if connecting.length() + u.length() != v.length() {
                    return Ok(BigInt::zero());
                }
                Ok(BigInt::from(cache.nu(&connecting)?))
            })
            .collect()
    })
}

/// `D̃(n,k)` with each `ν_w` replaced by `𝔖_w(1, q, …, q^{n−2})`.
#[allow(non_snake_case)]
pub fn build_D_tilde_q(n: usize, k: usize) -> Result<LabeledMatrix<UnivariatePolynomial>> {
    let (lower, upper) = matrix_levels(n, k)?;
    let mut connecting: Vec<Permutation> = Vec::new();
    for u in &lower.members {
        let uinv = u.inverse();
        for v in &upper.members {
            let c = uinv.compose(v)?;
            if c.length() + u.length() == v.length() {
                connecting.push(c);
            }
        }
    }
    connecting.sort();
    connecting.dedup();
    let m = n.saturating_sub(1);
    let values: HashMap<Permutation, UnivariatePolynomial> = connecting
        .into_par_iter()
        .map(|c| q_nu(&c, m).map(|q| (c, q)))
        .collect::<Result<_>>()?;
    assemble(n, k, MatrixKind::DTildeQ, lower, upper, |u, cols| {
        let uinv = u.inverse();
        cols.iter()
            .map(|v| {
                let c = uinv.compose(v)?;
                Ok(values.get(&c).cloned().unwrap_or_else(UnivariatePolynomial::zero))
            })
            .collect()
    })
}

/// `E(n,k)`: row `u` is `V^{C(n,2)−2k}(u)` in the basis of the upper level.
#[allow(non_snake_case)]
pub fn build_E(n: usize, k: usize) -> Result<LabeledMatrix<BigInt>> {
    let (lower, upper) = matrix_levels(n, k)?;
    let power = max_length(n) - 2 * k;
    assemble(n, k, MatrixKind::E, lower, upper, |u, cols| {
        Ok(row_from_vector(&apply_V_power(&LevelVector::basis(u), power)?, cols))
    })
}

/// `𝔖_{s_1} + ⋯ + 𝔖_{s_{n−1}} = Σ_i (n−i) x_i`, in `n−1` variables.
pub fn monk_sum(n: usize) -> SparsePolynomial {
    let m = n.saturating_sub(1);
    (1..n).fold(SparsePolynomial::zero(m), |acc, i| {
        let s = Permutation::simple(n, i).expect("in range");
        &acc + &schubert(&s)
    })
}

/// `E(n,k)` from its Schubert-coefficient description
/// `[𝔖_v] 𝔖_u (𝔖_{s_1}+⋯+𝔖_{s_{n−1}})^{C(n,2)−2k}`. Exponentially slower
/// than [`build_E`]; intended for small `n`.
#[allow(non_snake_case)]
pub fn build_E_via_expansion(n: usize, k: usize) -> Result<LabeledMatrix<BigInt>> {
    let (lower, upper) = matrix_levels(n, k)?;
    let power = (max_length(n) - 2 * k) as u32;
    let raised = monk_sum(n).pow(power);
    assemble(n, k, MatrixKind::E, lower, upper, |u, cols| {
        let f = &schubert(u) * &raised;
        cols.iter().map(|v| schubert_coefficient(&f, v)).collect()
    })
}

/// An element `Σ c_w σ_w` of the nilCoxeter algebra of `S_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilCoxeterElement {
    pub n: usize,
    terms: BTreeMap<Permutation, BigInt>,
}

impl NilCoxeterElement {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn sigma(w: &Permutation) -> Self {
        let mut e = Self::zero(w.n());
        e.terms.insert(w.clone(), BigInt::one());
        e
    }

    /// `θ = Σ_i i σ_{s_i}`.
    pub fn theta(n: usize) -> Self {
        let mut e = Self::zero(n);
        for i in 1..n {
            e.terms
                .insert(Permutation::simple(n, i).expect("in range"), BigInt::from(i));
        }
        e
    }

    pub fn coefficient(&self, w: &Permutation) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Permutation, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms grouped by length.
    pub fn graded_components(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            out.entry(w.length())
                .or_insert_with(|| Self::zero(self.n))
                .terms
                .insert(w.clone(), c.clone());
        }
        out
    }
}

/// Bilinear extension of `σ_u σ_v = σ_{u∘v}` when lengths add, `0` otherwise.
pub fn nilcoxeter_multiply(a: &NilCoxeterElement, b: &NilCoxeterElement) -> Result<NilCoxeterElement> {
    if a.n != b.n {
        return Err(Error::SizeMismatch { left: a.n, right: b.n });
    }
    let mut out = NilCoxeterElement::zero(a.n);
    for (u, cu) in &a.terms {
        let lu = u.length();
        for (v, cv) in &b.terms {
            let uv = u.compose(v)?;
            if uv.length() == lu + v.length() {
                let slot = out.terms.entry(uv).or_default();
                *slot += cu * cv;
            }
        }
    }
    out.terms.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// Matrix of right multiplication by `θ^{C(n,2)−2k}` from `(N_n)_k` to
/// `(N_n)_{C(n,2)−k}`, oriented like [`build_D`].
pub fn theta_power_matrix(n: usize, k: usize) -> Result<LabeledMatrix<BigInt>> {
    let (lower, upper) = matrix_levels(n, k)?;
    let power = max_length(n) - 2 * k;
    let theta = NilCoxeterElement::theta(n);
    assemble(n, k, MatrixKind::D, lower, upper, |u, cols| {
        let mut x = NilCoxeterElement::sigma(u);
        for _ in 0..power {
            x = nilcoxeter_multiply(&x, &theta)?;
        }
        Ok(cols.iter().map(|v| x.coefficient(v)).collect())
    })
}
