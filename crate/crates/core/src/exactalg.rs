//! Exact determinants over ℤ and ℤ[q], and Smith normal form over ℤ.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::LabeledMatrix;
use crate::poly::UnivariatePolynomial;

fn check_square<T>(rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                cols: r.len(),
            });
        }
    }
    Ok(n)
}

/// Fraction-free Gaussian elimination. Every intermediate is an exact
/// integer minor of the input.
pub fn det_bareiss(rows: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = check_square(rows)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = rows.to_vec();
    let mut negate = false;
    let mut prev = BigInt::one();
    for t in 0..n {
        let Some(p) = (t..n)
            .filter(|&i| !a[i][t].is_zero())
            .min_by_key(|&i| a[i][t].bits())
        else {
            return Ok(BigInt::zero());
        };
        if p != t {
            a.swap(p, t);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(t + 1);
        let pivot_row = &head[t];
        tail.par_iter_mut().for_each(|row| {
            let factor = row[t].clone();
            for j in t + 1..n {
                let v = &row[j] * &pivot_row[t] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[t] = BigInt::zero();
        });
        prev = a[t][t].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -det } else { det })
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The `count` largest primes below `2^62`.
fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

fn det_mod(rows: &[Vec<BigInt>], p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.mod_floor(&pb).to_u64().expect("reduced"))
                .collect()
        })
        .collect();
    let n = a.len();
    let mut det = 1u64;
    for t in 0..n {
        let Some(piv) = (t..n).find(|&i| a[i][t] != 0) else {
            return 0;
        };
        if piv != t {
            a.swap(piv, t);
            det = (p - det) % p;
        }
        det = mul_mod(det, a[t][t], p);
        let inv = pow_mod(a[t][t], p - 2, p);
        let (head, tail) = a.split_at_mut(t + 1);
        let pivot = &head[t];
        for row in tail {
            if row[t] == 0 {
                continue;
            }
            let f = mul_mod(row[t], inv, p);
            for (x, &y) in row[t..].iter_mut().zip(&pivot[t..]) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
    }
    det
}

/// Bits of an upper bound on `|det|` from Hadamard's inequality.
pub fn hadamard_bound_bits(rows: &[Vec<BigInt>]) -> u64 {
    rows.iter()
        .map(|r| {
            let sq: BigInt = r.iter().map(|x| x * x).sum();
            sq.bits().div_ceil(2)
        })
        .sum()
}

/// Determinant from residues modulo enough 62-bit primes to exceed twice the
/// Hadamard bound, reconstructed by the Chinese remainder theorem.
pub fn det_multimodular(rows: &[Vec<BigInt>]) -> Result<BigInt> {
    let n = check_square(rows)?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let bits = hadamard_bound_bits(rows) + 1;
    let primes = large_primes((bits as usize).div_ceil(61) + 1);
    let residues: Vec<u64> = primes.par_iter().map(|&p| det_mod(rows, p)).collect();
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&p, &r) in primes.iter().zip(&residues) {
        let pb = BigInt::from(p);
        let vm = value.mod_floor(&pb).to_u64().expect("reduced");
        let mm = modulus.mod_floor(&pb).to_u64().expect("reduced");
        let delta = (r + p - vm) % p;
        let t = mul_mod(delta, pow_mod(mm, p - 2, p), p);
        value += &modulus * BigInt::from(t);
        modulus *= pb;
    }
    let half = &modulus >> 1u32;
    if value > half {
        value -= &modulus;
    }
    Ok(value)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DetMethod {
    #[default]
    Bareiss,
    Multimodular,
}

pub fn det_integer(m: &LabeledMatrix<BigInt>) -> Result<BigInt> {
    det_integer_with(m, DetMethod::Bareiss)
}

pub fn det_integer_with(m: &LabeledMatrix<BigInt>, method: DetMethod) -> Result<BigInt> {
    m.check_square()?;
    match method {
        DetMethod::Bareiss => det_bareiss(&m.entries),
        DetMethod::Multimodular => det_multimodular(&m.entries),
    }
}

/// Upper bound on the degree of the determinant: the smaller of the sums of
/// row-wise and column-wise maximal entry degrees.
pub fn q_degree_bound(rows: &[Vec<UnivariatePolynomial>]) -> usize {
    let deg = |p: &UnivariatePolynomial| p.degree().unwrap_or(0);
    let by_rows: usize = rows
        .iter()
        .map(|r| r.iter().map(deg).max().unwrap_or(0))
        .sum();
    let ncols = rows.first().map_or(0, Vec::len);
    let by_cols: usize = (0..ncols)
        .map(|j| rows.iter().map(|r| deg(&r[j])).max().unwrap_or(0))
        .sum();
    by_rows.min(by_cols)
}

/// Newton interpolation through `(x_i, y_i)`, returned in the monomial basis.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Vec<BigRational> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs ← coeffs·(q − x_i) + dd_i
        let mut next = vec![BigRational::zero(); n];
        for d in 0..n - 1 {
            if coeffs[d].is_zero() {
                continue;
            }
            next[d + 1] += &coeffs[d];
            next[d] -= &coeffs[d] * BigRational::from_integer(xs[i].clone());
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

pub fn det_q_rows(rows: &[Vec<UnivariatePolynomial>]) -> Result<UnivariatePolynomial> {
    let n = check_square(rows)?;
    if n == 0 {
        return Ok(UnivariatePolynomial::one());
    }
    let bound = q_degree_bound(rows);
    let xs: Vec<BigInt> = (2..=bound as u64 + 2).map(BigInt::from).collect();
    let ys = xs
        .par_iter()
        .map(|x| {
            let at: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|p| p.evaluate(x)).collect())
                .collect();
            det_bareiss(&at)
        })
        .collect::<Result<Vec<_>>>()?;
    let coeffs = interpolate(&xs, &ys)
        .into_iter()
        .map(|c| {
            if c.is_integer() {
                Ok(c.to_integer())
            } else {
                Err(Error::BoundExceeded(
                    "non-integral interpolated determinant coefficient".into(),
                ))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UnivariatePolynomial::new(coeffs))
}

/// Determinant of a q-polynomial matrix by evaluation at `q = 2, 3, …` past
/// the degree bound and exact interpolation.
pub fn det_q(m: &LabeledMatrix<UnivariatePolynomial>) -> Result<UnivariatePolynomial> {
    m.check_square()?;
    det_q_rows(&m.entries)
}

/// Invariant factors `d_1 | d_2 | ⋯`, padded with zeros to `min(rows, cols)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SnfDiagonal {
    pub entries: Vec<BigUint>,
}

impl SnfDiagonal {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.entries.iter().filter(|d| !d.is_zero()).count()
    }

    /// Product of the nonzero entries.
    pub fn product(&self) -> BigUint {
        self.entries.iter().filter(|d| !d.is_zero()).product()
    }

    pub fn is_divisibility_chain(&self) -> bool {
        let nz: Vec<&BigUint> = self.entries.iter().filter(|d| !d.is_zero()).collect();
        let zeros_trail = self
            .entries
            .iter()
            .skip_while(|d| !d.is_zero())
            .all(Zero::is_zero);
        zeros_trail && nz.windows(2).all(|w| (w[1] % w[0]).is_zero())
    }

    /// Runs of equal entries as `(value, multiplicity)`.
    pub fn runs(&self) -> Vec<(BigUint, usize)> {
        let mut out: Vec<(BigUint, usize)> = Vec::new();
        for d in &self.entries {
            match out.last_mut() {
                Some((v, c)) if v == d => *c += 1,
                _ => out.push((d.clone(), 1)),
            }
        }
        out
    }
}

/// Exponent notation for repetition, e.g. `(1^5,7^3,28)`.
impl fmt::Display for SnfDiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, (v, c)) in self.runs().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if *c == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{c}")?;
            }
        }
        f.write_str(")")
    }
}

impl FromStr for SnfDiagonal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid invariant-factor list {s:?}"));
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let mut entries = Vec::new();
        if inner.trim().is_empty() {
            return Ok(Self { entries });
        }
        for part in inner.split(',') {
            let (v, c) = match part.trim().split_once('^') {
                Some((v, c)) => (v, c.trim().parse::<usize>().map_err(|_| bad())?),
                None => (part, 1),
            };
            let v: BigUint = v.trim().parse().map_err(|_| bad())?;
            entries.extend(std::iter::repeat_n(v, c));
        }
        Ok(Self { entries })
    }
}

fn min_abs_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let mag = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                let one = mag.is_one();
                best = Some((i, j, mag));
                if one {
                    let (i, j, _) = best.expect("set");
                    return Some((i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

fn sub_scaled_row(a: &mut [Vec<BigInt>], target: usize, src: usize, q: &BigInt, from: usize) {
    let (lo, hi) = (target.min(src), target.max(src));
    let (head, tail) = a.split_at_mut(hi);
    let (tr, sr) = if target < src {
        (&mut head[lo], &tail[0])
    } else {
        (&mut tail[0], &head[lo])
    };
    for (x, y) in tr.iter_mut().zip(sr.iter()).skip(from) {
        if !y.is_zero() {
            *x -= q * y;
        }
    }
}

pub fn smith_normal_form_rows(rows: &[Vec<BigInt>]) -> SnfDiagonal {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut a = rows.to_vec();
    let size = nrows.min(ncols);
    let mut diag = Vec::with_capacity(size);
    for t in 0..size {
        let Some((pi, pj)) = min_abs_nonzero(&a, t) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            // clear column t below the pivot
            let mut dirty = false;
            for i in t + 1..nrows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = &a[i][t] / &a[t][t];
                sub_scaled_row(&mut a, i, t, &q, t);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            // clear row t right of the pivot
            for j in t + 1..ncols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = &a[t][j] / &a[t][t];
                for row in a.iter_mut().skip(t) {
                    if !row[t].is_zero() {
                        let s = &q * &row[t];
                        row[j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (i, j) = smallest_in_cross(&a, t);
                a.swap(t, i);
                for row in a.iter_mut() {
                    row.swap(t, j);
                }
                continue;
            }
            // pivot must divide the remaining block
            let p = a[t][t].clone();
            let offender = (t + 1..nrows).find(|&i| {
                a[i].iter().skip(t + 1).any(|x| !(x % &p).is_zero())
            });
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    sub_scaled_row(&mut a, t, i, &minus_one, t);
                }
                None => break,
            }
        }
        diag.push(a[t][t].magnitude().clone());
    }
    diag.resize(size, BigUint::zero());
    SnfDiagonal { entries: diag }
}

/// Position of the smallest nonzero entry in row `t` and column `t` (from `t` on).
fn smallest_in_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut mag = a[t][t].abs();
    for (i, row) in a.iter().enumerate().skip(t + 1) {
        if !row[t].is_zero() && row[t].abs() < mag {
            mag = row[t].abs();
            best = (i, t);
        }
    }
    for (j, x) in a[t].iter().enumerate().skip(t + 1) {
        if !x.is_zero() && x.abs() < mag {
            mag = x.abs();
            best = (t, j);
        }
    }
    if mag.is_zero() {
        // pivot itself was reduced to zero; fall back to any nonzero entry
        return min_abs_nonzero(a, t).unwrap_or((t, t));
    }
    best
}

pub fn smith_normal_form(m: &LabeledMatrix<BigInt>) -> SnfDiagonal {
    smith_normal_form_rows(&m.entries)
}

/// Factorization by trial division, as `(prime, exponent)` in increasing order.
/// Gives up (returning the cofactor as a final "prime" with exponent 1) once
/// the trial divisor passes `limit`.
pub fn trial_factor(value: &BigInt, limit: u64) -> (Sign, Vec<(BigUint, u32)>) {
    let sign = value.sign();
    let mut rest = value.magnitude().clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while rest > BigUint::one() && d <= limit {
        let db = BigUint::from(d);
        if &db * &db > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &db).is_zero() {
            rest /= &db;
            e += 1;
        }
        if e > 0 {
            out.push((db, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest > BigUint::one() {
        out.push((rest, 1));
    }
    (sign, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn small_determinants() {
        let id: Vec<Vec<BigInt>> = (0..5)
            .map(|i| (0..5).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        assert_eq!(det_bareiss(&id).unwrap(), BigInt::one());
        assert_eq!(det_bareiss(&ints(&[&[1, 0], &[0, 2]])).unwrap(), BigInt::from(2));
        assert_eq!(det_bareiss(&ints(&[&[0, 1], &[2, 0]])).unwrap(), BigInt::from(-2));
        assert_eq!(det_bareiss(&ints(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::zero());
        assert!(det_bareiss(&ints(&[&[1, 2]])).is_err());
        assert_eq!(det_multimodular(&ints(&[&[0, 1], &[2, 0]])).unwrap(), BigInt::from(-2));
        assert_eq!(det_multimodular(&ints(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::zero());
    }

    #[test]
    fn multimodular_handles_large_values() {
        let big = BigInt::from(10).pow(40);
        let m = vec![
            vec![&big + 1, big.clone(), BigInt::from(3)],
            vec![BigInt::from(-7), &big * 3 - 1, BigInt::from(5)],
            vec![big.clone(), BigInt::from(2), -&big],
        ];
        assert_eq!(det_multimodular(&m).unwrap(), det_bareiss(&m).unwrap());
    }

    #[test]
    fn primes() {
        assert!(is_prime_u64(2_147_483_647));
        assert!(!is_prime_u64(3_215_031_751));
        let ps = large_primes(3);
        assert!(ps.iter().all(|&p| p > 1 << 61 && is_prime_u64(p)));
    }

    #[test]
    fn q_determinants() {
        let m = vec![
            vec![UnivariatePolynomial::from_i64(&[1, 1]), UnivariatePolynomial::zero()],
            vec![UnivariatePolynomial::zero(), UnivariatePolynomial::one()],
        ];
        assert_eq!(det_q_rows(&m).unwrap(), UnivariatePolynomial::from_i64(&[1, 1]));
        let m = vec![
            vec![UnivariatePolynomial::from_i64(&[0, 0, 1]), UnivariatePolynomial::from_i64(&[1, -1])],
            vec![UnivariatePolynomial::from_i64(&[2]), UnivariatePolynomial::from_i64(&[0, 3])],
        ];
        // 3q^3 − 2 + 2q
        assert_eq!(det_q_rows(&m).unwrap(), UnivariatePolynomial::from_i64(&[-2, 2, 0, 3]));
        assert_eq!(
            det_q_rows(&[vec![UnivariatePolynomial::monomial(4, BigInt::from(-3))]]).unwrap(),
            UnivariatePolynomial::monomial(4, BigInt::from(-3))
        );
    }

    #[test]
    fn smith_forms() {
        let snf = smith_normal_form_rows(&ints(&[&[0, 1], &[2, 0]]));
        assert_eq!(snf.to_string(), "(1,2)");
        let snf = smith_normal_form_rows(&ints(&[&[2, 0], &[0, 3]]));
        assert_eq!(snf.to_string(), "(1,6)");
        let snf = smith_normal_form_rows(&ints(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(snf.to_string(), "(2,6,12)");
        let snf = smith_normal_form_rows(&ints(&[&[1, 2], &[2, 4], &[3, 6]]));
        assert_eq!(snf.entries, vec![BigUint::one(), BigUint::zero()]);
        assert_eq!(snf.to_string(), "(1,0)");
        assert!(snf.is_divisibility_chain());
        assert_eq!(smith_normal_form_rows(&[]).entries, Vec::<BigUint>::new());
    }

    #[test]
    fn exponent_notation() {
        let s: SnfDiagonal = "(1^5,7^3,28)".parse().unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.product(), BigUint::from(7u32 * 7 * 7 * 28));
        assert_eq!(s.to_string(), "(1^5,7^3,28)");
        assert!(s.is_divisibility_chain());
        assert!(!"(2,3)".parse::<SnfDiagonal>().unwrap().is_divisibility_chain());
        assert!("1,2".parse::<SnfDiagonal>().is_err());
        assert!("(1^x)".parse::<SnfDiagonal>().is_err());
    }

    #[test]
    fn factoring() {
        let v = BigInt::from(-(2i64.pow(7) * 3 * 25 * 19));
        let (sign, f) = trial_factor(&v, 1000);
        assert_eq!(sign, Sign::Minus);
        let f: Vec<(u64, u32)> = f.iter().map(|(p, e)| (p.to_u64().unwrap(), *e)).collect();
        assert_eq!(f, vec![(2, 7), (3, 1), (5, 2), (19, 1)]);
    }
}
