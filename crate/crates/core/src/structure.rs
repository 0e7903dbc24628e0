//! Hilbert series identities for binomial dual generators and the
//! doubling certificate for the codimension-three presentation matrices.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::apolar::ApolarAlgebra;
use crate::binomial::{ann_generators, dual_generator, is_complete_intersection, pfaffian_matrix, Binomial3Params};
use crate::error::{Error, Result};
use crate::groebner::{monomial_quotient_hilbert_of, GradedIdeal};
use crate::hilbert::{one_minus_t_pow, product, HilbertSeries};
use crate::pfaffian::{poly_determinant, SkewPolyMatrix};
use crate::poly::{Monomial, Poly, Rational};

/// `F = g (m1 - m2)` with `gcd(m1, m2) = 1`, `m1` and `m2` not dividing `g`,
/// and `deg m1 = deg m2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectedSumSpec {
    g: Monomial,
    m1: Monomial,
    m2: Monomial,
}

impl ConnectedSumSpec {
    pub fn new(g: Monomial, m1: Monomial, m2: Monomial) -> Result<Self> {
        let n = g.nvars();
        if m1.nvars() != n || m2.nvars() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if m1.nvars() != n { m1.nvars() } else { m2.nvars() },
            });
        }
        if !m1.is_coprime(&m2) {
            return Err(Error::Precondition("m1 and m2 share a variable".into()));
        }
        if m1.divides(&g) || m2.divides(&g) {
            return Err(Error::Precondition("m1 or m2 divides g".into()));
        }
        if m1.degree() != m2.degree() {
            return Err(Error::Precondition("m1 and m2 have different degrees".into()));
        }
        Ok(ConnectedSumSpec { g, m1, m2 })
    }

    /// The splitting `g = X^a Y^b Z^c`, `m1 = Z^n`, `m2 = X^e Y^m`.
    pub fn from_binomial(p: &Binomial3Params) -> Result<Self> {
        Self::new(
            Monomial::new(&[p.a, p.b, p.c]),
            Monomial::new(&[0, 0, p.n()]),
            Monomial::new(&[p.e, p.m, 0]),
        )
    }

    pub fn nvars(&self) -> usize {
        self.g.nvars()
    }

    pub fn socle_degree(&self) -> u32 {
        self.g.degree() + self.m1.degree()
    }

    pub fn dual_generator(&self) -> Poly {
        let g = Poly::monomial(self.g.clone());
        &g * &(&Poly::monomial(self.m1.clone()) - &Poly::monomial(self.m2.clone()))
    }
}

fn monomial_algebra_numerator(m: &Monomial) -> Vec<i64> {
    product(m.exps().iter().map(|&a| one_minus_t_pow(a + 1)))
}

/// `[prod(1 - t^{a_i+1}) + prod(1 - t^{b_i+1}) - (1 + t^{d-k}) prod(1 - t^{c_i+1})] / (1 - t)^n`
/// where `a`, `b`, `c` are the exponents of `g m1`, `g m2`, `g`.
pub fn connected_sum_hilbert(spec: &ConnectedSumSpec) -> HilbertSeries {
    let d = spec.socle_degree();
    let k = spec.g.degree();
    let n = spec.nvars() as u32;
    let first = HilbertSeries::from_rational(monomial_algebra_numerator(&spec.g.mul(&spec.m1)), n);
    let second = HilbertSeries::from_rational(monomial_algebra_numerator(&spec.g.mul(&spec.m2)), n);
    let mut shift = vec![0i64; (d - k) as usize + 1];
    shift[0] += 1;
    shift[(d - k) as usize] += 1;
    let core = HilbertSeries::from_rational(product([shift, monomial_algebra_numerator(&spec.g)]), n);
    first.add(&second).sub(&core)
}

/// `1 + t + ... + t^k`
fn s(k: u32) -> Vec<i64> {
    vec![1; k as usize + 1]
}

fn check_u_hypotheses(a: u32, b: u32, c: u32, e: u32, m: u32) -> Result<(u32, u32, u32)> {
    let n = e + m;
    if n == 0 {
        return Err(Error::Precondition("n = e + m must be positive".into()));
    }
    let (q, r) = ((c + 1) / n, (c + 1) % n);
    if a < q * e || b < q * m {
        return Err(Error::Precondition(format!("need a >= qe and b >= qm with q = {q}")));
    }
    Ok((n, q, r))
}

/// `s(a+e) s(b+m) s(c) + s(a-qe) s(b-qm) s(n-r-1) t^{c+1}` with `s(k) = 1 + ... + t^k`.
pub fn hf_of_u(a: u32, b: u32, c: u32, e: u32, m: u32) -> Result<HilbertSeries> {
    let (n, q, r) = check_u_hypotheses(a, b, c, e, m)?;
    let lower = product([s(a + e), s(b + m), s(c)]);
    let mut upper = vec![0; c as usize + 1];
    upper.extend(product([s(a - q * e), s(b - q * m), s(n - r - 1)]));
    let len = lower.len().max(upper.len());
    let h: Vec<i64> = (0..len)
        .map(|i| lower.get(i).copied().unwrap_or(0) + upper.get(i).copied().unwrap_or(0))
        .collect();
    Ok(HilbertSeries::from_h_vector(&h))
}

/// `<x^{a+e+1}, y^{b+m+1}, z^{(q+1)n}, x^{a-qe+1} z^{c+1}, y^{b-qm+1} z^{c+1}>`
pub fn u_ideal(a: u32, b: u32, c: u32, e: u32, m: u32) -> Result<Vec<Monomial>> {
    let (n, q, _) = check_u_hypotheses(a, b, c, e, m)?;
    Ok(vec![
        Monomial::new(&[a + e + 1, 0, 0]),
        Monomial::new(&[0, b + m + 1, 0]),
        Monomial::new(&[0, 0, (q + 1) * n]),
        Monomial::new(&[a - q * e + 1, 0, c + 1]),
        Monomial::new(&[0, b - q * m + 1, c + 1]),
    ])
}

/// Hilbert series of `R/U` by counting standard monomials.
pub fn u_quotient_hilbert(a: u32, b: u32, c: u32, e: u32, m: u32) -> Result<HilbertSeries> {
    monomial_quotient_hilbert_of(&u_ideal(a, b, c, e, m)?, 3)
}

/// Result of rescaling one variable in `alpha m1 - beta m2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalizedBinomial {
    /// `x_var -> lambda x_var` turns the input into `unit * (m1 - m2)`.
    Scaled {
        poly: Poly,
        var: usize,
        lambda: Rational,
    },
    /// No variable admits a rational `lambda`.
    IrrationalScaling,
}

fn exact_root(x: &BigInt, k: u32) -> Option<BigInt> {
    if x.is_negative() && k % 2 == 0 {
        return None;
    }
    let r = x.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *x).then_some(r)
}

fn rational_root(x: &Rational, k: u32) -> Option<Rational> {
    Some(Rational::new(exact_root(x.numer(), k)?, exact_root(x.denom(), k)?))
}

fn substitute_scale(f: &Poly, var: usize, lambda: &Rational) -> Poly {
    Poly::from_terms(
        f.nvars(),
        f.terms().map(|(m, c)| (m.clone(), c * num_traits::pow(lambda.clone(), m.exps()[var] as usize))),
    )
}

/// Looks for a variable with exponents `u != v` in the two terms and a
/// rational `lambda` with `lambda^{v-u} = alpha / beta`; the substitution
/// makes both coefficients equal.
pub fn normalize_binomial(g: &Poly) -> Result<NormalizedBinomial> {
    if g.len() != 2 {
        return Err(Error::Precondition(format!("expected two terms, found {}", g.len())));
    }
    let terms: Vec<(&Monomial, &Rational)> = g.terms().rev().collect();
    let (m1, alpha) = terms[0];
    let (m2, beta) = (terms[1].0, -terms[1].1);
    let target = alpha / &beta;
    for var in 0..g.nvars() {
        let (u, v) = (m1.exps()[var], m2.exps()[var]);
        if u == v {
            continue;
        }
        let lambda = if v > u {
            rational_root(&target, v - u)
        } else {
            rational_root(&target.recip(), u - v)
        };
        let Some(lambda) = lambda else { continue };
        let scaled = substitute_scale(g, var, &lambda);
        let unit = scaled.coeff(m1);
        if unit.is_zero() || scaled.coeff(m2) != -&unit {
            continue;
        }
        let poly = scaled.scale(&unit.recip());
        debug_assert!(poly.coeff(m1).is_one());
        return Ok(NormalizedBinomial::Scaled { poly, var, lambda });
    }
    Ok(NormalizedBinomial::IrrationalScaling)
}

/// Hilbert series of `ω_{R/J}(-e+3)` for a Hilbert-Burch resolution
/// `0 -> ⊕R(-q_i) -> ⊕R(-p_j) -> J -> 0` in three variables: the dual
/// complex twisted by `-e` has terms `R(-e)`, `R(-(e-p_j))`, `R(-(e-q_i))`.
pub fn canonical_module_hilbert(p_twists: &[u32], q_twists: &[u32], e: u32) -> Result<HilbertSeries> {
    if q_twists.is_empty() || p_twists.len() != q_twists.len() + 1 {
        return Err(Error::Precondition(format!(
            "expected n+1 generator twists and n relation twists, found {} and {}",
            p_twists.len(),
            q_twists.len()
        )));
    }
    if let Some(&t) = p_twists.iter().chain(q_twists).find(|&&t| t > e) {
        return Err(Error::Precondition(format!("twist {t} exceeds e = {e}")));
    }
    let mut num = vec![0i64; e as usize + 1];
    for &q in q_twists {
        num[(e - q) as usize] += 1;
    }
    for &p in p_twists {
        num[(e - p) as usize] -= 1;
    }
    num[e as usize] += 1;
    Ok(HilbertSeries::from_rational(num, 3))
}

/// Hilbert series of `R/J` from a Hilbert-Burch resolution.
pub fn hilbert_burch_series(p_twists: &[u32], q_twists: &[u32]) -> HilbertSeries {
    let top = p_twists.iter().chain(q_twists).copied().max().unwrap_or(0);
    let mut num = vec![0i64; top as usize + 1];
    num[0] = 1;
    for &p in p_twists {
        num[p as usize] -= 1;
    }
    for &q in q_twists {
        num[q as usize] += 1;
    }
    HilbertSeries::from_rational(num, 3)
}

/// Evidence that `R/I` is a doubling of the codimension-two `R/J` cut out
/// by the maximal minors of the off-diagonal block `A`.
#[derive(Clone, Debug, Serialize)]
pub struct DoublingCertificate {
    /// Row and column order putting the zero block in the top-left corner.
    pub permutation: Vec<usize>,
    #[serde(skip)]
    pub a_block: Vec<Vec<Poly>>,
    #[serde(skip)]
    pub j_generators: Vec<Poly>,
    pub generator_twists: Vec<u32>,
    pub relation_twists: Vec<u32>,
    pub quotient_j: HilbertSeries,
    pub omega: HilbertSeries,
    pub quotient_i: HilbertSeries,
    pub residual: HilbertSeries,
    /// `dim (R/J)_j` by linear algebra agrees with the Hilbert-Burch series.
    pub resolution_checked: bool,
    pub codim_two: bool,
}

impl DoublingCertificate {
    pub fn validates(&self) -> bool {
        self.codim_two && self.resolution_checked && self.residual.is_zero()
    }
}

/// The Koszul presentation of a three-generator ideal as a 3x3 skew matrix
/// whose sub-Pfaffians are `f1, f2, f3`.
pub fn koszul_skew_matrix(gens: &[Poly]) -> Result<SkewPolyMatrix> {
    let [f1, f2, f3] = gens else {
        return Err(Error::Precondition(format!("expected three generators, found {}", gens.len())));
    };
    let nvars = f1.nvars();
    SkewPolyMatrix::from_upper(3, nvars, |i, j| match (i, j) {
        (0, 1) => f3.clone(),
        (0, 2) => -f2,
        _ => f1.clone(),
    })
}

fn zero_block_subsets(m: &SkewPolyMatrix, n: usize) -> Vec<Vec<usize>> {
    let size = m.size();
    let mut out = Vec::new();
    let mut pick = Vec::with_capacity(n);
    fn rec(m: &SkewPolyMatrix, size: usize, n: usize, start: usize, pick: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pick.len() == n {
            out.push(pick.clone());
            return;
        }
        for i in start..size {
            if pick.iter().all(|&j| m.entry(i, j).is_zero()) {
                pick.push(i);
                rec(m, size, n, i + 1, pick, out);
                pick.pop();
            }
        }
    }
    rec(m, size, n, 0, &mut pick, &mut out);
    out
}

fn maximal_minors(a: &[Vec<Poly>], nvars: usize) -> Vec<Poly> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|skip| {
            let sub: Vec<Vec<Poly>> = a
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != skip).map(|(_, p)| p.clone()).collect())
                .collect();
            let det = poly_determinant(&sub, nvars);
            if skip % 2 == 0 {
                det
            } else {
                -det
            }
        })
        .collect()
}

/// Degrees of the generators and relations of `J` read off `A` and its minors.
fn hilbert_burch_twists(a: &[Vec<Poly>], minors: &[Poly]) -> Option<(Vec<u32>, Vec<u32>)> {
    let p: Vec<u32> = minors.iter().map(Poly::degree).collect::<Option<_>>()?;
    let q = a
        .iter()
        .map(|row| {
            row.iter()
                .zip(&p)
                .find_map(|(entry, &deg)| entry.degree().map(|e| e + deg))
        })
        .collect::<Option<_>>()?;
    Some((p, q))
}

fn certify_block(
    m: &SkewPolyMatrix,
    block: &[usize],
    quotient_i: &HilbertSeries,
    e: u32,
) -> Result<DoublingCertificate> {
    let size = m.size();
    let rest: Vec<usize> = (0..size).filter(|i| !block.contains(i)).collect();
    let a_block: Vec<Vec<Poly>> = block
        .iter()
        .map(|&i| rest.iter().map(|&j| m.entry(i, j).clone()).collect())
        .collect();
    let j_generators = maximal_minors(&a_block, m.nvars());
    let mut permutation = block.to_vec();
    permutation.extend(&rest);

    let twists = hilbert_burch_twists(&a_block, &j_generators);
    let (generator_twists, relation_twists) = twists.clone().unwrap_or_default();
    let quotient_j = hilbert_burch_series(&generator_twists, &relation_twists);
    let omega = canonical_module_hilbert(&generator_twists, &relation_twists, e)
        .unwrap_or_else(|_| HilbertSeries::from_h_vector(&[]));
    let residual = quotient_j.sub(&omega).sub(quotient_i);

    let nonzero: Vec<Poly> = j_generators.iter().filter(|p| !p.is_zero()).cloned().collect();
    let resolution_checked = twists.is_some() && !nonzero.is_empty() && {
        let ideal = GradedIdeal::new(m.nvars(), nonzero)?;
        let dims = ideal.quotient_dims(e);
        dims.iter()
            .enumerate()
            .all(|(j, &d)| quotient_j.coefficient(j as u32) == d as i64)
    };
    let codim_two = quotient_j.denominator_power() == 1 && quotient_j.numerator_at_one() > 0;
    Ok(DoublingCertificate {
        permutation,
        a_block,
        j_generators,
        generator_twists,
        relation_twists,
        quotient_j,
        omega,
        quotient_i: quotient_i.clone(),
        residual,
        resolution_checked,
        codim_two,
    })
}

/// Searches the zero `n x n` principal blocks of a `(2n+1)`-square skew
/// matrix and returns the first block whose certificate validates, or the
/// last one tried when none does.
pub fn doubling_certificate(m: &SkewPolyMatrix, quotient_i: &HilbertSeries, socle_degree: u32) -> Result<DoublingCertificate> {
    let n = m.size() / 2;
    let e = socle_degree + 3;
    let mut last = None;
    for block in zero_block_subsets(m, n) {
        let cert = certify_block(m, &block, quotient_i, e)?;
        if cert.validates() {
            return Ok(cert);
        }
        last = Some(cert);
    }
    last.ok_or(Error::NotBlockCertified(n))
}

/// Doubling certificate for a binomial parameter point: the presentation
/// matrix for the five- and seven-generator cases, the Koszul matrix for
/// complete intersections. `R/I` is measured by the apolar oracle.
pub fn doubling_verify(p: &Binomial3Params) -> Result<DoublingCertificate> {
    let matrix = if is_complete_intersection(p) {
        koszul_skew_matrix(&ann_generators(p)?)?
    } else {
        pfaffian_matrix(p)?
    };
    let alg = ApolarAlgebra::new(dual_generator(p))?;
    let h: Vec<i64> = alg.h_vector().iter().map(|&x| x as i64).collect();
    doubling_certificate(&matrix, &HilbertSeries::from_h_vector(&h), p.socle_degree())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apolar::oracle_h_vector;
    use crate::binomial::sweep_grid;
    use crate::parse::parse_poly;
    use crate::poly::ratio;
    use proptest::prelude::*;

    fn mono(e: &[u32]) -> Monomial {
        Monomial::new(e)
    }

    fn h_of(f: &Poly) -> HilbertSeries {
        let h: Vec<i64> = oracle_h_vector(f).unwrap().iter().map(|&x| x as i64).collect();
        HilbertSeries::from_h_vector(&h)
    }

    #[test]
    fn connected_sum_matches_oracle() {
        let spec = ConnectedSumSpec::new(mono(&[0, 0, 1]), mono(&[0, 0, 2]), mono(&[1, 1, 0])).unwrap();
        assert_eq!(connected_sum_hilbert(&spec), h_of(&parse_poly("z^3 - x*y*z", 3).unwrap()));

        let spec = ConnectedSumSpec::new(mono(&[1, 1, 0, 0]), mono(&[2, 0, 1, 0]), mono(&[0, 2, 0, 1])).unwrap();
        let hs = connected_sum_hilbert(&spec);
        assert_eq!(hs.h_vector().unwrap(), &[1, 4, 7, 7, 4, 1]);
        assert_eq!(hs, h_of(&spec.dual_generator()));

        let spec = ConnectedSumSpec::new(mono(&[0, 0, 0]), mono(&[2, 1, 0]), mono(&[0, 0, 3])).unwrap();
        let h = connected_sum_hilbert(&spec);
        assert_eq!(h.coefficient(0), 1);
        assert_eq!(h.coefficient(3), 1);
        assert!(h.is_symmetric());
    }

    #[test]
    fn connected_sum_rejects_bad_specs() {
        let g = mono(&[0, 0, 2]);
        assert!(ConnectedSumSpec::new(g.clone(), mono(&[0, 0, 2]), mono(&[1, 1, 0])).is_err());
        assert!(ConnectedSumSpec::new(g.clone(), mono(&[1, 0, 1]), mono(&[1, 1, 0])).is_err());
        assert!(ConnectedSumSpec::new(g, mono(&[3, 0, 0]), mono(&[1, 1, 0])).is_err());
    }

    #[test]
    fn u_closed_form() {
        let h = hf_of_u(2, 2, 3, 1, 1).unwrap();
        let v = h.h_vector().unwrap();
        assert_eq!(v.len(), 10);
        assert!(h.is_symmetric() && h.is_unimodal());
        assert_eq!(h, u_quotient_hilbert(2, 2, 3, 1, 1).unwrap());
        assert!(hf_of_u(0, 0, 2, 1, 1).is_err());
        for p in sweep_grid(3, 2) {
            if let Ok(h) = hf_of_u(p.a, p.b, p.c, p.e, p.m) {
                assert_eq!(h, u_quotient_hilbert(p.a, p.b, p.c, p.e, p.m).unwrap(), "{p}");
                assert_eq!(h.top_degree(), Some(p.socle_degree()), "{p}");
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let g = parse_poly("4*x^3*y - x*y^3", 3).unwrap();
        match normalize_binomial(&g).unwrap() {
            NormalizedBinomial::Scaled { poly, var, lambda } => {
                assert_eq!(var, 0);
                assert_eq!(lambda, ratio(1, 2));
                assert_eq!(poly, parse_poly("x^3*y - x*y^3", 3).unwrap());
            }
            other => panic!("{other:?}"),
        }
        let g = parse_poly("x^3*y - 2*x*y^3", 3).unwrap();
        assert_eq!(normalize_binomial(&g).unwrap(), NormalizedBinomial::IrrationalScaling);
        assert!(normalize_binomial(&parse_poly("x + y + z", 3).unwrap()).is_err());
    }

    #[test]
    fn canonical_module_shapes() {
        assert!(canonical_module_hilbert(&[2], &[], 5).is_err());
        assert!(canonical_module_hilbert(&[2, 2], &[3, 3], 5).is_err());
        // J = (x, y): R/J has series 1/(1-t), ω(-e+3) = t^{e-2}/(1-t)
        let w = canonical_module_hilbert(&[1, 1], &[2], 5).unwrap();
        assert_eq!(w.denominator_power(), 1);
        assert_eq!(w.numerator(), &[0, 0, 0, 1]);
    }

    #[test]
    fn doubling_other_case() {
        let p = Binomial3Params::new(1, 1, 1, 1, 1).unwrap();
        let cert = doubling_verify(&p).unwrap();
        assert!(cert.validates(), "{cert:?}");
        assert_eq!(cert.a_block.len(), 2);
        assert_eq!(cert.a_block[0].len(), 3);
        assert_eq!(&cert.permutation[..2], &[0, 1]);
    }

    #[test]
    fn doubling_complete_intersection() {
        let p = Binomial3Params::new(0, 0, 2, 1, 1).unwrap();
        let cert = doubling_verify(&p).unwrap();
        assert!(cert.validates(), "{cert:?}");
        assert_eq!(cert.j_generators.len(), 2);
    }

    #[test]
    fn block_search_reports_missing_block() {
        let x = parse_poly("x", 3).unwrap();
        let m = SkewPolyMatrix::from_upper(5, 3, |_, _| x.clone()).unwrap();
        let h = HilbertSeries::from_h_vector(&[1]);
        assert_eq!(doubling_certificate(&m, &h, 0).unwrap_err(), Error::NotBlockCertified(2));
    }

    proptest! {
        #[test]
        fn normalization_preserves_h_vector(alpha in 1i64..6, beta in 1i64..6, sq in proptest::bool::ANY) {
            // alpha x^3 y - beta x y^3 rescales iff alpha/beta is a rational square
            let a = if sq { alpha * alpha } else { alpha };
            let g = Poly::from_terms(3, [(mono(&[3, 1, 0]), Rational::from_integer(a.into())), (mono(&[1, 3, 0]), Rational::from_integer((-beta).into()))]);
            let plain = parse_poly("x^3*y - x*y^3", 3).unwrap();
            prop_assert_eq!(h_of(&g), h_of(&plain));
            if let NormalizedBinomial::Scaled { poly, .. } = normalize_binomial(&g).unwrap() {
                prop_assert_eq!(poly, plain);
            }
        }
    }
}
