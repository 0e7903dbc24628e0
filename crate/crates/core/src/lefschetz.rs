//! Weak and strong Lefschetz verdicts from exact ranks, with Hessian and
//! quotient certificates for failures.

use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::apolar::ApolarAlgebra;
use crate::error::{Error, Result};
use crate::groebner::GradedIdeal;
use crate::linalg::{rank_of_rows, Matrix};
use crate::pfaffian::poly_determinant;
use crate::poly::{contract_unchecked, monomials_of_degree, rat, LinearForm, Monomial, Poly, Rational};
use crate::span::Span;

/// A standard graded Artinian algebra on which multiplication maps can be
/// measured.
pub trait GradedArtinian: Sync {
    fn nvars(&self) -> usize;
    /// Largest degree with a nonzero piece.
    fn top_degree(&self) -> u32;
    fn dim(&self, j: u32) -> usize;
    /// Rank of `×ℓ^k : A_i -> A_{i+k}`.
    fn mult_rank(&self, l: &LinearForm, i: u32, k: u32) -> usize;
    fn is_gorenstein(&self) -> bool;
    /// Dimension of the image in `A_j` of the monomials accepted by
    /// `in_ideal`, which must describe a monomial ideal.
    fn monomial_ideal_dim(&self, j: u32, in_ideal: &dyn Fn(&Monomial) -> bool) -> usize;
    /// A proof that `×ℓ^k : A_i -> A_{i+k}` never has maximal rank, if one
    /// specific to this algebra is available.
    fn hessian_certificate(&self, _i: u32, _k: u32) -> Option<Certificate> {
        None
    }

    fn h_vector(&self) -> Vec<usize> {
        (0..=self.top_degree()).map(|j| self.dim(j)).collect()
    }
}

impl GradedArtinian for ApolarAlgebra {
    fn nvars(&self) -> usize {
        ApolarAlgebra::nvars(self)
    }

    fn top_degree(&self) -> u32 {
        self.socle_degree()
    }

    fn dim(&self, j: u32) -> usize {
        ApolarAlgebra::dim(self, j)
    }

    fn mult_rank(&self, l: &LinearForm, i: u32, k: u32) -> usize {
        ApolarAlgebra::mult_rank(self, l, i, k)
    }

    fn is_gorenstein(&self) -> bool {
        true
    }

    fn monomial_ideal_dim(&self, j: u32, in_ideal: &dyn Fn(&Monomial) -> bool) -> usize {
        self.ideal_piece_dim(j, in_ideal)
    }

    fn hessian_certificate(&self, i: u32, k: u32) -> Option<Certificate> {
        // ×ℓ^{d-2t} : A_t -> A_{d-t} is bijective iff hess^t(F)(ℓ) != 0
        if 2 * i + k != self.socle_degree() {
            return None;
        }
        let h = hessian(self, i).ok()?;
        match hessian_det_vanishes(&h, 4, 0x4e55) {
            HessianDet::Vanishes => Some(Certificate::HessianVanishes {
                order: i,
                size: h.size(),
            }),
            _ => None,
        }
    }
}

/// `R / I` for a homogeneous ideal `I` containing a power of the maximal
/// ideal, with standard monomials under the canonical order as bases.
#[derive(Debug)]
pub struct QuotientAlgebra {
    ideal: GradedIdeal,
    standard: Vec<Vec<Monomial>>,
}

impl QuotientAlgebra {
    /// Fails unless `I_j = R_j` for some `j <= cap`.
    pub fn new(ideal: GradedIdeal, cap: u32) -> Result<Self> {
        let n = ideal.nvars();
        let mut standard = Vec::new();
        for j in 0..=cap {
            let s = ideal.piece(j).standard_monomials(&monomials_of_degree(n, j));
            if s.is_empty() {
                return Ok(QuotientAlgebra { ideal, standard });
            }
            standard.push(s);
        }
        Err(Error::NotArtinian(cap))
    }

    pub fn ideal(&self) -> &GradedIdeal {
        &self.ideal
    }

    pub fn standard_basis(&self, j: u32) -> &[Monomial] {
        self.standard.get(j as usize).map_or(&[], Vec::as_slice)
    }
}

impl GradedArtinian for QuotientAlgebra {
    fn nvars(&self) -> usize {
        self.ideal.nvars()
    }

    fn top_degree(&self) -> u32 {
        self.standard.len().saturating_sub(1) as u32
    }

    fn dim(&self, j: u32) -> usize {
        self.standard_basis(j).len()
    }

    fn mult_rank(&self, l: &LinearForm, i: u32, k: u32) -> usize {
        let target = self.standard_basis(i + k);
        if target.is_empty() {
            return 0;
        }
        let lk = l.to_poly().pow(k);
        let piece = self.ideal.piece(i + k);
        let rows: Vec<Vec<Rational>> = self
            .standard_basis(i)
            .iter()
            .map(|u| {
                let r = piece.reduce(&lk.mul_monomial(u));
                target.iter().map(|m| r.coeff(m)).collect()
            })
            .collect();
        rank_of_rows(&rows)
    }

    fn is_gorenstein(&self) -> bool {
        false
    }

    fn monomial_ideal_dim(&self, j: u32, in_ideal: &dyn Fn(&Monomial) -> bool) -> usize {
        let mut span: Span = (*self.ideal.piece(j)).clone();
        let base = span.dim();
        for u in self.standard_basis(j) {
            if in_ideal(u) {
                span.insert(Poly::monomial(u.clone()));
            }
        }
        span.dim() - base
    }
}

/// How Lefschetz candidates are chosen and which failure certificates are
/// attempted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub seed: u64,
    pub random_forms: usize,
    pub hessian: bool,
    pub obstruction: bool,
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy {
            seed: 20_240_601,
            random_forms: 5,
            hessian: true,
            obstruction: true,
        }
    }
}

impl Strategy {
    /// `x_1 + ... + x_n` first, then random forms with coefficients in
    /// `[1, 997]`.
    pub fn forms(&self, nvars: usize) -> Vec<LinearForm> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = vec![LinearForm::sum_of_variables(nvars)];
        for _ in 0..self.random_forms {
            out.push(LinearForm::new((0..nvars).map(|_| rat(rng.gen_range(1..=997))).collect()));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Property {
    Wlp,
    Slp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Holds {
    True,
    False,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    RankSampling,
    Hessian,
    ChaseCriterion,
    QuotientObstruction,
}

/// A map `A_from -> A_to` whose best sampled rank fell short.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankDeficit {
    pub from: u32,
    pub to: u32,
    pub achieved: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Certificate {
    /// The order-`t` Hessian determinant is identically zero, so
    /// `×ℓ^{d-2t} : A_t -> A_{d-t}` is singular for every `ℓ`.
    HessianVanishes { order: u32, size: usize },
    /// `K` is the ideal generated by `variables`. Since `ℓK ⊆ K`, a map of
    /// maximal rank on `A` would give one on `K` (injective case) or on
    /// `A/K` (surjective case); the dimensions below forbid that.
    QuotientObstruction {
        variables: Vec<usize>,
        from: u32,
        to: u32,
        /// `(dim source, dim target)` of the restricted or induced map.
        ideal_dims: (usize, usize),
        quotient_dims: (usize, usize),
        injective_needed: bool,
    },
}

impl Certificate {
    pub fn method(&self) -> Method {
        match self {
            Certificate::HessianVanishes { .. } => Method::Hessian,
            Certificate::QuotientObstruction { .. } => Method::QuotientObstruction,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LefschetzVerdict {
    pub property: Property,
    pub holds: Holds,
    pub method: Method,
    pub witness: Option<Vec<String>>,
    pub deficit: Option<RankDeficit>,
    pub certificate: Option<Certificate>,
}

impl fmt::Display for LefschetzVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {:?} via {:?}", self.property, self.holds, self.method)?;
        if let Some(w) = &self.witness {
            write!(f, ", witness ({})", w.join(","))?;
        }
        if let Some(d) = &self.deficit {
            write!(f, ", rank {} < {} on degree {} -> {}", d.achieved, d.required, d.from, d.to)?;
        }
        if let Some(c) = &self.certificate {
            write!(f, ", certificate {c:?}")?;
        }
        Ok(())
    }
}

fn form_label(l: &LinearForm) -> Vec<String> {
    l.coefficients().iter().map(|c| c.to_string()).collect()
}

/// The `(i, k)` pairs whose maps must have maximal rank.
pub fn required_maps(alg: &dyn GradedArtinian, property: Property) -> Vec<(u32, u32)> {
    let d = alg.top_degree();
    match property {
        Property::Wlp if alg.is_gorenstein() => {
            if d == 0 {
                Vec::new()
            } else {
                vec![((d - 1) / 2, 1)]
            }
        }
        Property::Wlp => (0..d).map(|i| (i, 1)).collect(),
        Property::Slp => (0..d).flat_map(|i| (1..=d - i).map(move |k| (i, k))).collect(),
    }
}

fn expected(alg: &dyn GradedArtinian, i: u32, k: u32) -> usize {
    alg.dim(i).min(alg.dim(i + k))
}

/// Ranks of the given maps for one form.
pub fn map_ranks(alg: &dyn GradedArtinian, l: &LinearForm, maps: &[(u32, u32)]) -> Vec<usize> {
    maps.par_iter().map(|&(i, k)| alg.mult_rank(l, i, k)).collect()
}

pub fn mult_rank(alg: &dyn GradedArtinian, l: &LinearForm, i: u32, k: u32) -> usize {
    alg.mult_rank(l, i, k)
}

pub fn wlp_verdict(alg: &dyn GradedArtinian, strategy: &Strategy) -> LefschetzVerdict {
    verdict(alg, Property::Wlp, strategy)
}

pub fn slp_verdict(alg: &dyn GradedArtinian, strategy: &Strategy) -> LefschetzVerdict {
    verdict(alg, Property::Slp, strategy)
}

pub fn verdict(alg: &dyn GradedArtinian, property: Property, strategy: &Strategy) -> LefschetzVerdict {
    let maps = required_maps(alg, property);
    let required: Vec<usize> = maps.iter().map(|&(i, k)| expected(alg, i, k)).collect();
    let mut best = vec![0usize; maps.len()];
    for l in strategy.forms(alg.nvars()) {
        let ranks = map_ranks(alg, &l, &maps);
        if ranks == required {
            return LefschetzVerdict {
                property,
                holds: Holds::True,
                method: Method::RankSampling,
                witness: Some(form_label(&l)),
                deficit: None,
                certificate: None,
            };
        }
        for (b, r) in best.iter_mut().zip(ranks) {
            *b = (*b).max(r);
        }
    }
    let deficit = maps
        .iter()
        .zip(best.iter().zip(&required))
        .find(|(_, (b, r))| b < r)
        .map(|(&(i, k), (&b, &r))| RankDeficit {
            from: i,
            to: i + k,
            achieved: b,
            required: r,
        });
    let certificate = deficit.as_ref().and_then(|d| {
        let k = d.to - d.from;
        let hess = if strategy.hessian { alg.hessian_certificate(d.from, k) } else { None };
        hess.or_else(|| {
            if strategy.obstruction {
                quotient_obstruction(alg, d.from, k)
            } else {
                None
            }
        })
    });
    LefschetzVerdict {
        property,
        holds: if certificate.is_some() { Holds::False } else { Holds::Inconclusive },
        method: certificate.as_ref().map_or(Method::RankSampling, Certificate::method),
        witness: None,
        deficit,
        certificate,
    }
}

/// Searches ideals generated by proper subsets of the variables for a
/// dimension count that rules out maximal rank of `×ℓ^k : A_i -> A_{i+k}`
/// for every `ℓ`.
pub fn quotient_obstruction(alg: &dyn GradedArtinian, i: u32, k: u32) -> Option<Certificate> {
    let n = alg.nvars();
    let (hi, hj) = (alg.dim(i), alg.dim(i + k));
    let mut subsets: Vec<Vec<usize>> = (1u32..(1 << n) - 1)
        .map(|mask| (0..n).filter(|b| mask & (1 << b) != 0).collect())
        .collect();
    subsets.sort_by_key(|s: &Vec<usize>| (s.len(), s.clone()));
    for vars in subsets {
        let in_k = |u: &Monomial| vars.iter().any(|&v| u.exps()[v] > 0);
        let ki = alg.monomial_ideal_dim(i, &in_k);
        let kj = alg.monomial_ideal_dim(i + k, &in_k);
        let injective_needed = hi <= hj;
        let surjective_needed = hi >= hj;
        let blocked = (injective_needed && ki > kj) || (surjective_needed && hi - ki < hj - kj);
        if blocked {
            return Some(Certificate::QuotientObstruction {
                variables: vars,
                from: i,
                to: i + k,
                ideal_dims: (ki, kj),
                quotient_dims: (hi - ki, hj - kj),
                injective_needed: injective_needed && ki > kj,
            });
        }
    }
    None
}

/// For Gorenstein `A` with socle degree `d`: whether `×ℓ` is injective on
/// `A_{⌊(d-1)/2⌋}` and whether it is surjective onto `A_{⌊d/2⌋+1}`.
pub fn mid_map_behaviour(alg: &ApolarAlgebra, l: &LinearForm) -> Option<(bool, bool)> {
    let d = alg.socle_degree();
    if d == 0 {
        return None;
    }
    let lo = (d - 1) / 2;
    let hi = d / 2;
    let injective = alg.mult_rank(l, lo, 1) == alg.dim(lo);
    let surjective = alg.mult_rank(l, hi, 1) == alg.dim(hi + 1);
    Some((injective, surjective))
}

/// The order-`t` Hessian `(w_i w_j ∘ F)` over the standard monomial basis
/// of `A_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HessianMatrix {
    pub order: u32,
    pub basis: Vec<Monomial>,
    pub entries: Vec<Vec<Poly>>,
}

impl HessianMatrix {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.entries[i][j] == self.entries[j][i]))
    }

    /// Entries read as ordinary polynomials, so that the matrix is the
    /// classical Hessian of the ordinary form of `F`.
    pub fn ordinary_entries(&self) -> Vec<Vec<Poly>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(Poly::divided_power_to_ordinary).collect())
            .collect()
    }
}

pub fn hessian(alg: &ApolarAlgebra, t: u32) -> Result<HessianMatrix> {
    let d = alg.socle_degree();
    if 2 * t > d {
        return Err(Error::DegreeOutOfRange {
            degree: 2 * t,
            max: d,
        });
    }
    let basis = alg.standard_basis(t);
    let f = alg.dual_generator();
    let entries = basis
        .iter()
        .map(|wi| {
            basis
                .iter()
                .map(|wj| contract_unchecked(&Poly::monomial(wi.mul(wj)), f))
                .collect()
        })
        .collect();
    Ok(HessianMatrix { order: t, basis, entries })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HessianDet {
    /// Proven nonzero; the point is one where the determinant does not vanish.
    NonVanishing { point: Option<Vec<Rational>> },
    /// Identically zero, by symbolic expansion.
    Vanishes,
    /// Zero at every sampled point and too large to expand.
    ZeroAtSamples { trials: usize },
}

/// Largest Hessian expanded symbolically.
pub const SYMBOLIC_HESSIAN_LIMIT: usize = 8;

/// Evaluates the determinant at random points; if all vanish and the
/// matrix is small, expands it symbolically.
pub fn hessian_det_vanishes(h: &HessianMatrix, trials: usize, seed: u64) -> HessianDet {
    let ord = h.ordinary_entries();
    let n = h.basis.first().map_or(0, Monomial::nvars);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let point: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(1..=997))).collect();
        let m = Matrix::from_rows_with_width(
            ord.iter().map(|r| r.iter().map(|p| p.eval(&point)).collect()).collect(),
            h.size(),
        );
        if !m.determinant().is_zero() {
            return HessianDet::NonVanishing { point: Some(point) };
        }
    }
    if h.size() <= SYMBOLIC_HESSIAN_LIMIT {
        if poly_determinant(&ord, n).is_zero() {
            HessianDet::Vanishes
        } else {
            HessianDet::NonVanishing { point: None }
        }
    } else {
        HessianDet::ZeroAtSamples { trials }
    }
}

/// Determinant of the ordinary Hessian at `point`.
pub fn hessian_at(h: &HessianMatrix, point: &[Rational]) -> Rational {
    let rows = h
        .ordinary_entries()
        .iter()
        .map(|r| r.iter().map(|p| p.eval(point)).collect())
        .collect();
    Matrix::from_rows_with_width(rows, h.size()).determinant()
}

/// Orders `t <= d/2` whose Hessian determinant vanishes at the
/// coefficients of `l`. Empty exactly when every
/// `×ℓ^{d-2t} : A_t -> A_{d-t}` is bijective.
pub fn hessian_zero_orders(alg: &ApolarAlgebra, l: &LinearForm) -> Vec<u32> {
    (0..=alg.socle_degree() / 2)
        .filter(|&t| {
            let h = hessian(alg, t).expect("t <= d/2");
            hessian_at(&h, l.coefficients()).is_zero()
        })
        .collect()
}

/// Symbolic determinant of the ordinary Hessian.
pub fn hessian_determinant(h: &HessianMatrix) -> Poly {
    let n = h.basis.first().map_or(0, Monomial::nvars);
    poly_determinant(&h.ordinary_entries(), n)
}

/// Sufficient conditions for SLP of
/// `K[x,y,z] / <x^a, y^b, z^c, x^α z^γ, y^β z^γ>`, requiring `0 < α < a`
/// and `0 < γ < c`.
pub fn chase_criterion(a: i64, b: i64, c: i64, alpha: i64, beta: i64, gamma: i64) -> Result<bool> {
    if !(0 < alpha && alpha < a && 0 < gamma && gamma < c) {
        return Err(Error::Precondition(format!(
            "need 0 < α < a and 0 < γ < c, got a={a}, c={c}, α={alpha}, γ={gamma}"
        )));
    }
    let s = a + b - c;
    let lo = alpha.min(beta);
    let hi = alpha.max(beta);
    let one = alpha + beta - 1 <= s && s <= alpha + beta + 1;
    let two = lo != hi && hi == (alpha + beta).min(a).min(b) && hi - gamma - 1 <= s && s <= hi - gamma + 1;
    let three = lo < hi && hi <= 2 && a + b + gamma <= c + 2;
    Ok(one || two || three)
}
