//! Sparse polynomials with exact rational coefficients.
//!
//! The same types serve the polynomial ring `R = K[x_1..x_n]` and the dual
//! ring `R'` on which `R` acts by contraction. Which ring a value lives in is
//! a matter of how it is used, not of its type.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector. The derived `Ord` is the canonical order used for
/// printing and for indexing bases: graded reverse lexicographic with
/// `x_1 > x_2 > ... > x_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u32; 4]>,
    degree: u32,
}

impl Monomial {
    pub fn new(exps: &[u32]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree: exps.iter().sum(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::var_pow(nvars, i, 1)
    }

    pub fn var_pow(nvars: usize, i: usize, k: u32) -> Self {
        let mut m = Self::one(nvars);
        m.exps[i] = k;
        m.degree = k;
        m
    }

    #[inline]
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            degree: self.degree + other.degree,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`; this is also the
    /// contraction of a monomial of `R` on a monomial of `R'`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(b, a)| b - a).collect(),
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.max(b)).collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u32; 4]> = self.exps.iter().zip(&other.exps).map(|(a, b)| *a.min(b)).collect();
        let degree = exps.iter().sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// `prod_i exps[i]!`, the weight relating contraction to differentiation.
    pub fn factorial_weight(&self) -> BigInt {
        let mut w = BigInt::one();
        for &e in self.exps.iter() {
            for k in 2..=e {
                w *= k;
            }
        }
        w
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| {
            for (a, b) in self.exps.iter().zip(&other.exps).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m{:?}", self.exps.as_slice())
    }
}

/// All monomials of a given degree, in descending canonical order.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, idx: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if idx + 1 == nvars {
            cur[idx] = left;
            out.push(Monomial::new(cur));
            return;
        }
        for e in (0..=left).rev() {
            cur[idx] = e;
            rec(nvars, idx + 1, left - e, cur, out);
        }
        cur[idx] = 0;
    }
    if nvars == 0 {
        return if degree == 0 { vec![Monomial::one(0)] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(nvars, 0, degree, &mut vec![0; nvars], &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Number of monomials of degree `degree` in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    let (n, k) = (degree as usize + nvars - 1, nvars - 1);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::term(Monomial::one(nvars), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero(m.nvars());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut p = Poly::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.nvars(), nvars, "monomial width mismatch");
            p.add_term(m, c);
        }
        p
    }

    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (Monomial::new(e), rat(*c))))
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn contains_monomial(&self, m: &Monomial) -> bool {
        self.terms.contains_key(m)
    }

    /// Largest term in the canonical order.
    pub fn canonical_lead(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * m * other`
    pub fn add_scaled_shifted(&mut self, c: &Rational, m: &Monomial, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(m.mul(om), c * oc);
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Rational, other: &Poly) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.clone(), c * oc);
        }
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !self.is_homogeneous() {
            return Err(Error::NotHomogeneous);
        }
        Ok(self.terms.keys().next().map(Monomial::degree).unwrap_or(0))
    }

    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Reinterprets a divided-power polynomial as an ordinary one, dividing
    /// each coefficient by the factorial weight of its monomial. Under this
    /// map contraction becomes differentiation.
    pub fn divided_power_to_ordinary(&self) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c / Rational::from_integer(m.factorial_weight())))
                .collect(),
        }
    }

    /// Multiplies through by a positive integer so all coefficients are
    /// integers with content 1.
    pub fn primitive_integer_part(&self) -> Vec<(Monomial, BigInt)> {
        use num_integer::Integer;
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<(Monomial, BigInt)> =
            self.terms.iter().map(|(m, c)| (m.clone(), (c * &den).to_integer())).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for (_, c) in ints.iter_mut() {
                *c /= &g;
            }
        }
        ints
    }

    /// Scales so the canonical leading coefficient is 1.
    pub fn monic(&self) -> Poly {
        match self.canonical_lead() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    fn check_width(&self, other: &Poly) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    /// Embeds into a ring with more variables; `map[i]` is the new index of
    /// variable `i`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut p = Poly::zero(nvars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &x) in m.exps().iter().enumerate() {
                e[map[i]] = x;
            }
            p.add_term(Monomial::new(&e), c.clone());
        }
        p
    }

    /// Whether the canonical leading coefficient is negative.
    pub fn lead_is_negative(&self) -> bool {
        self.canonical_lead().map(|(_, c)| c.is_negative()).unwrap_or(false)
    }
}

/// Contraction `f ∘ F` of `f ∈ R` on `F ∈ R'`, bilinear extension of
/// `x^A ∘ X^B = X^{B-A}` with terms carrying a negative exponent dropped.
pub fn contract(f: &Poly, dual: &Poly) -> Result<Poly> {
    f.check_width(dual)?;
    Ok(contract_unchecked(f, dual))
}

pub(crate) fn contract_unchecked(f: &Poly, dual: &Poly) -> Poly {
    let mut out = Poly::zero(dual.nvars);
    for (u, cu) in &f.terms {
        for (v, cv) in &dual.terms {
            if let Some(w) = u.quotient_of(v) {
                out.add_term(w, cu * cv);
            }
        }
    }
    out
}

/// Contraction of a single monomial, the workhorse of catalecticant maps.
pub fn contract_monomial(u: &Monomial, dual: &Poly) -> Poly {
    let mut out = Poly::zero(dual.nvars);
    for (v, cv) in &dual.terms {
        if let Some(w) = u.quotient_of(v) {
            out.add_term(w, cv.clone());
        }
    }
    out
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = crate::parse::VarNames::default_for(self.nvars);
        write!(f, "{}", names.format(self))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial width mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial width mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial width mismatch");
        let mut out = Poly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.add_scaled_shifted(c, m, rhs);
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// A linear form `sum c_i x_i`, used as a Lefschetz candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coefficients: Vec<Rational>,
}

impl LinearForm {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        LinearForm { coefficients }
    }

    pub fn from_ints(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| rat(c)).collect())
    }

    /// `x_1 + ... + x_n`
    pub fn sum_of_variables(nvars: usize) -> Self {
        Self::new(vec![Rational::one(); nvars])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn nvars(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_nonzero(&self) -> bool {
        self.coefficients.iter().any(|c| !c.is_zero())
    }

    pub fn to_poly(&self) -> Poly {
        let n = self.nvars();
        Poly::from_terms(
            n,
            self.coefficients
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }
}
