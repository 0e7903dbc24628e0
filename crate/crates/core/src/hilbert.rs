//! Hilbert series as `numerator / (1 - t)^k` with integer numerators.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub struct HilbertSeries {
    numerator: Vec<i64>,
    denominator_power: u32,
}

fn trim(v: &mut Vec<i64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as i128 / (i + 1) as i128;
    }
    acc as i64
}

/// `1 - t^k`
pub fn one_minus_t_pow(k: u32) -> Vec<i64> {
    let mut v = vec![0; k as usize + 1];
    v[0] += 1;
    v[k as usize] -= 1;
    v
}

/// Coefficients of a product of polynomials.
pub fn product(factors: impl IntoIterator<Item = Vec<i64>>) -> Vec<i64> {
    factors.into_iter().fold(vec![1], |acc, f| poly_mul(&acc, &f))
}

impl HilbertSeries {
    /// Builds the series and cancels as many `(1 - t)` factors as divide
    /// the numerator.
    pub fn from_rational(numerator: Vec<i64>, denominator_power: u32) -> Self {
        let mut num = numerator;
        trim(&mut num);
        let mut k = denominator_power;
        while k > 0 && !num.is_empty() && num.iter().sum::<i64>() == 0 {
            // synthetic division by (1 - t): q_i = sum_{j <= i} a_j
            let mut q = Vec::with_capacity(num.len() - 1);
            let mut acc = 0;
            for &a in &num[..num.len() - 1] {
                acc += a;
                q.push(acc);
            }
            num = q;
            trim(&mut num);
            k -= 1;
        }
        if num.is_empty() {
            k = 0;
        }
        HilbertSeries {
            numerator: num,
            denominator_power: k,
        }
    }

    pub fn from_h_vector(h: &[i64]) -> Self {
        Self::from_rational(h.to_vec(), 0)
    }

    pub fn numerator(&self) -> &[i64] {
        &self.numerator
    }

    pub fn denominator_power(&self) -> u32 {
        self.denominator_power
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// Coefficient of `t^j` in the expansion.
    pub fn coefficient(&self, j: u32) -> i64 {
        let k = self.denominator_power as i64;
        let j = j as i64;
        if k == 0 {
            return self.numerator.get(j as usize).copied().unwrap_or(0);
        }
        self.numerator
            .iter()
            .enumerate()
            .take_while(|(i, _)| *i as i64 <= j)
            .map(|(i, a)| a * binom(j - i as i64 + k - 1, k - 1))
            .sum()
    }

    /// Leading coefficients `H(0), .., H(len - 1)`.
    pub fn expand(&self, len: u32) -> Vec<i64> {
        (0..len).map(|j| self.coefficient(j)).collect()
    }

    /// Finite h-vector when the series is a polynomial.
    pub fn h_vector(&self) -> Option<&[i64]> {
        (self.denominator_power == 0).then_some(self.numerator.as_slice())
    }

    /// Value of the numerator at `t = 1` (the multiplicity).
    pub fn numerator_at_one(&self) -> i64 {
        self.numerator.iter().sum()
    }

    /// Top degree of a finite series.
    pub fn top_degree(&self) -> Option<u32> {
        if self.denominator_power != 0 || self.numerator.is_empty() {
            return None;
        }
        Some(self.numerator.len() as u32 - 1)
    }

    pub fn is_symmetric(&self) -> bool {
        self.h_vector()
            .map(|h| h.iter().eq(h.iter().rev()))
            .unwrap_or(false)
    }

    pub fn is_unimodal(&self) -> bool {
        let Some(h) = self.h_vector() else { return false };
        let peak = h.iter().enumerate().max_by_key(|(i, v)| (**v, std::cmp::Reverse(*i))).map(|(i, _)| i);
        let Some(p) = peak else { return true };
        h[..=p].windows(2).all(|w| w[0] <= w[1]) && h[p..].windows(2).all(|w| w[0] >= w[1])
    }

    fn lifted(&self, k: u32) -> Vec<i64> {
        let extra = k - self.denominator_power;
        product(std::iter::once(self.numerator.clone()).chain((0..extra).map(|_| vec![1, -1])))
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let k = self.denominator_power.max(other.denominator_power);
        let a = self.lifted(k);
        let b = other.lifted(k);
        let mut out = vec![0; a.len().max(b.len())];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in b.iter().enumerate() {
            out[i] += sign * x;
        }
        Self::from_rational(out, k)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, -1)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: u32) -> Self {
        let mut num = vec![0; k as usize];
        num.extend_from_slice(&self.numerator);
        Self::from_rational(num, self.denominator_power)
    }

    /// Requires the series to be a polynomial.
    pub fn expect_finite(&self) -> Result<&[i64]> {
        self.h_vector()
            .ok_or_else(|| Error::Precondition(format!("series {self} is not a polynomial")))
    }
}

impl fmt::Display for HilbertSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.numerator.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))?;
        if self.denominator_power > 0 {
            write!(f, "/(1-t)^{}", self.denominator_power)?;
        }
        Ok(())
    }
}
