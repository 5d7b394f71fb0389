use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::UnivariatePolynomial;
use crate::error::{Error, Result};

pub type Exponents = Vec<u32>;

/// A polynomial in `x_1,…,x_m` with big-integer coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePolynomial {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl SparsePolynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, vec![0; nvars], BigInt::one())
    }

    pub fn monomial(nvars: usize, exponents: Exponents, coeff: BigInt) -> Self {
        assert_eq!(exponents.len(), nvars, "exponent vector length");
        let mut p = Self::zero(nvars);
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    /// The variable `x_i`, 1-based.
    pub fn variable(nvars: usize, i: usize) -> Result<Self> {
        if i == 0 || i > nvars {
            return Err(Error::IndexOutOfRange { index: i, max: nvars });
        }
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        Ok(Self::monomial(nvars, e, BigInt::one()))
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponents, BigInt)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.nvars])
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Highest variable index (1-based) with a nonzero exponent, 0 if constant.
    pub fn support_width(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e.iter().rposition(|&a| a > 0))
            .map(|i| i + 1)
            .max()
            .unwrap_or(0)
    }

    pub(crate) fn add_term(&mut self, exponents: Exponents, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(exponents.len(), self.nvars);
        use std::collections::btree_map::Entry;
        match self.terms.entry(exponents) {
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Reinterprets the polynomial in `nvars` variables. Fails if a variable
    /// that would be dropped actually occurs.
    pub fn with_nvars(&self, nvars: usize) -> Result<Self> {
        if self.support_width() > nvars {
            return Err(Error::VariableMismatch {
                left: self.support_width(),
                right: nvars,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2.resize(nvars, 0);
                (e2, c.clone())
            })
            .collect();
        Ok(Self { nvars, terms })
    }

    /// Moves every variable `x_i` to `x_{i+offset}` inside `nvars` variables.
    pub fn shifted(&self, offset: usize, nvars: usize) -> Result<Self> {
        if self.support_width() + offset > nvars {
            return Err(Error::VariableMismatch {
                left: self.support_width() + offset,
                right: nvars,
            });
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e2 = vec![0; nvars];
                for (i, &a) in e.iter().enumerate() {
                    if a > 0 {
                        e2[i + offset] = a;
                    }
                }
                (e2, c.clone())
            })
            .collect();
        Ok(Self { nvars, terms })
    }

    /// Swaps `x_i` and `x_{i+1}` (1-based).
    pub fn swap_variables(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        Ok(Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                e2.swap(i - 1, i);
                (e2, c.clone())
            }),
        ))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                max: self.nvars.saturating_sub(1),
            });
        }
        Ok(())
    }

    /// The divided difference `∂_i f = (f − s_i f)/(x_i − x_{i+1})`.
    ///
    /// Each monomial `x_i^a x_{i+1}^b` is divided exactly: for `a > b` it
    /// contributes `Σ_{t<a−b} x_i^{a−1−t} x_{i+1}^{b+t}`, for `a < b` the
    /// negated mirror sum, and nothing when `a = b`.
    pub fn divided_difference(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let (p, q) = (i - 1, i);
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let (a, b) = (e[p], e[q]);
            if a == b {
                continue;
            }
            let (hi, lo, coeff) = if a > b {
                (a, b, c.clone())
            } else {
                (b, a, -c)
            };
            for t in 0..hi - lo {
                let mut e2 = e.clone();
                e2[p] = hi - 1 - t;
                e2[q] = lo + t;
                out.add_term(e2, coeff.clone());
            }
        }
        Ok(out)
    }

    /// `f(1,1,…,1)`: the sum of all coefficients.
    pub fn evaluate_ones(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Substitutes `x_i ↦ q^{i−1}`.
    pub fn evaluate_q_powers(&self) -> UnivariatePolynomial {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for (e, c) in &self.terms {
            let d: usize = e.iter().enumerate().map(|(i, &a)| i * a as usize).sum();
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigInt::zero());
            }
            coeffs[d] += c;
        }
        UnivariatePolynomial::new(coeffs)
    }

    /// Terms sorted in descending graded-lexicographic order.
    pub fn terms_grlex(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }

    /// Parses the canonical rendering, e.g. `x1^2*x2 - 3*x3 + 1`.
    pub fn parse(s: &str, nvars: usize) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("{msg} in polynomial {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty input"));
        }
        let mut out = Self::zero(nvars);
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let negative = match rest.as_bytes()[0] {
                b'+' => {
                    rest = &rest[1..];
                    false
                }
                b'-' => {
                    rest = &rest[1..];
                    true
                }
                _ if first => false,
                _ => return Err(bad("expected sign")),
            };
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let term = &rest[..end];
            rest = &rest[end..];
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let mut coeff = BigInt::one();
            let mut exps = vec![0u32; nvars];
            for factor in term.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u32>().map_err(|_| bad("bad exponent"))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                    if idx == 0 || idx > nvars {
                        return Err(bad("variable index out of range"));
                    }
                    exps[idx - 1] += pow;
                } else {
                    let c: BigInt = factor.parse().map_err(|_| bad("bad coefficient"))?;
                    coeff *= c;
                }
            }
            if negative {
                coeff = -coeff;
            }
            out.add_term(exps, coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms_grlex().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("x{}", i + 1)
                    } else {
                        format!("x{}^{}", i + 1, a)
                    }
                })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => write!(f, "{mag}")?,
                (false, true) => f.write_str(&mono.join("*"))?,
                (false, false) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePolynomial[{}]({self})", self.nvars)
    }
}

impl Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        SparsePolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

// The operator impls panic on variable-count mismatch; the `try_*`
// methods report it instead.
impl Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: Self) -> SparsePolynomial {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: Self) -> SparsePolynomial {
        self.try_sub(rhs).expect("variable count mismatch")
    }
}

impl Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: Self) -> SparsePolynomial {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str, m: usize) -> SparsePolynomial {
        SparsePolynomial::parse(s, m).unwrap()
    }

    #[test]
    fn ring_operations() {
        let f = parse("x1 + x2", 2);
        let g = parse("x1 - x2", 2);
        assert_eq!(&f + &SparsePolynomial::zero(2), f);
        assert_eq!(&f * &g, parse("x1^2 - x2^2", 2));
        assert_eq!(&f - &f, SparsePolynomial::zero(2));
        assert!(f.try_add(&SparsePolynomial::zero(3)).is_err());
        assert!(f.try_mul(&SparsePolynomial::zero(3)).is_err());
        // a single factor x1 + y1, with y1 stored as the second variable
        let single = parse("x1 + x2", 2);
        assert_eq!(single.pow(1), single);
        assert_eq!(f.pow(2), parse("x1^2 + 2*x1*x2 + x2^2", 2));
    }

    #[test]
    fn divided_differences() {
        assert_eq!(
            parse("x1", 2).divided_difference(1).unwrap(),
            SparsePolynomial::one(2)
        );
        let sym = parse("x1^3 + x1*x2 + x2^3 + 7*x3", 3);
        assert!(sym.divided_difference(1).unwrap().is_zero());
        assert_eq!(
            parse("x1^2*x2", 2).divided_difference(1).unwrap(),
            parse("x1*x2", 2)
        );
        assert_eq!(
            parse("x2", 2).divided_difference(1).unwrap(),
            parse("-1", 2)
        );
        assert!(parse("x1", 2).divided_difference(2).is_err());
        assert!(parse("x1", 2).divided_difference(0).is_err());
    }

    #[test]
    fn divided_difference_matches_definition() {
        let f = parse("3*x1^4*x2 - x1*x2^3*x3 + 5*x2^2 + x3", 3);
        for i in 1..3 {
            let d = f.divided_difference(i).unwrap();
            let lhs = &d * &parse(&format!("x{} - x{}", i, i + 1), 3);
            let rhs = &f - &f.swap_variables(i).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn evaluations() {
        assert_eq!(SparsePolynomial::zero(3).evaluate_ones(), BigInt::zero());
        assert_eq!(parse("x1 + x2", 2).evaluate_ones(), BigInt::from(2));
        assert_eq!(
            SparsePolynomial::one(2).evaluate_q_powers(),
            UnivariatePolynomial::one()
        );
        assert_eq!(
            parse("x1 + x2", 2).evaluate_q_powers(),
            UnivariatePolynomial::from_i64(&[1, 1])
        );
        assert_eq!(
            parse("x1^2*x2", 2).evaluate_q_powers(),
            UnivariatePolynomial::from_i64(&[0, 1])
        );
    }

    #[test]
    fn canonical_rendering() {
        let f = parse("x1*x2^2 + x1^2*x2", 2);
        assert_eq!(f.to_string(), "x1^2*x2 + x1*x2^2");
        let g = parse("-2*x3 + x1^3 + 1 - x2", 3);
        assert_eq!(g.to_string(), "x1^3 - x2 - 2*x3 + 1");
        assert_eq!(parse(&g.to_string(), 3), g);
        assert_eq!(SparsePolynomial::zero(2).to_string(), "0");
        assert!(SparsePolynomial::parse("x4", 3).is_err());
        assert!(SparsePolynomial::parse("x1 +", 3).is_err());
    }
}
