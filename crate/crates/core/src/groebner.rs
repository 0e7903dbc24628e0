//! Division, S-polynomials, Buchberger completion and graded ideals.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_traits::One;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSeries;
use crate::order::MonomialOrder;
use crate::poly::{monomial_count, monomials_of_degree, Monomial, Poly, Rational};
use crate::span::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<Poly>,
    pub remainder: Poly,
}

fn check_widths(polys: &[Poly], ord: &MonomialOrder) -> Result<()> {
    for p in polys {
        if p.nvars() != ord.nvars() {
            return Err(Error::DimensionMismatch {
                expected: ord.nvars(),
                found: p.nvars(),
            });
        }
    }
    Ok(())
}

/// Multivariate division. The first divisor in list order whose leading
/// monomial divides the current leading monomial is used.
pub fn divide(f: &Poly, divisors: &[Poly], ord: &MonomialOrder) -> Result<Division> {
    if divisors.is_empty() {
        return Err(Error::Precondition("empty divisor list".into()));
    }
    if divisors.iter().any(Poly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    check_widths(std::slice::from_ref(f), ord)?;
    check_widths(divisors, ord)?;
    let leads: Vec<(Monomial, Rational)> = divisors
        .iter()
        .map(|g| ord.leading_term(g))
        .collect::<Result<_>>()?;
    let n = f.nvars();
    let mut quotients = vec![Poly::zero(n); divisors.len()];
    let mut remainder = Poly::zero(n);
    let mut p = f.clone();
    while let Some((m, c)) = ord.lead(&p).map(|(m, c)| (m.clone(), c.clone())) {
        match leads.iter().position(|(lm, _)| lm.divides(&m)) {
            Some(i) => {
                let (lm, lc) = &leads[i];
                let shift = lm.quotient_of(&m).expect("divides");
                let coef = &c / lc;
                quotients[i].add_term(shift.clone(), coef.clone());
                p.add_scaled_shifted(&-coef, &shift, &divisors[i]);
            }
            None => {
                p.add_term(m.clone(), -c.clone());
                remainder.add_term(m, c);
            }
        }
    }
    Ok(Division { quotients, remainder })
}

/// Remainder of `f` on division by `divisors`, with precomputed leads.
fn reduce_with(f: &Poly, basis: &[(Monomial, Rational, Poly)], ord: &MonomialOrder) -> Poly {
    let mut remainder = Poly::zero(f.nvars());
    let mut p = f.clone();
    while let Some((m, c)) = ord.lead(&p).map(|(m, c)| (m.clone(), c.clone())) {
        match basis.iter().find(|(lm, _, _)| lm.divides(&m)) {
            Some((lm, lc, g)) => {
                let shift = lm.quotient_of(&m).expect("divides");
                p.add_scaled_shifted(&-(&c / lc), &shift, g);
            }
            None => {
                p.add_term(m.clone(), -c.clone());
                remainder.add_term(m, c);
            }
        }
    }
    remainder
}

/// `lcm/lt(f) · f - lcm/lt(g) · g`, where `lt` includes the coefficient.
pub fn s_poly(f: &Poly, g: &Poly, ord: &MonomialOrder) -> Result<Poly> {
    let (mf, cf) = ord.leading_term(f)?;
    let (mg, cg) = ord.leading_term(g)?;
    let l = mf.lcm(&mg);
    let mut out = Poly::zero(f.nvars());
    out.add_scaled_shifted(&cf.recip(), &mf.quotient_of(&l).expect("lcm"), f);
    out.add_scaled_shifted(&-cg.recip(), &mg.quotient_of(&l).expect("lcm"), g);
    Ok(out)
}

fn require_homogeneous(polys: &[Poly]) -> Result<()> {
    for p in polys {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !p.is_homogeneous() {
            return Err(Error::Precondition(format!("generator {p:?} is not homogeneous")));
        }
    }
    Ok(())
}

fn with_leads(polys: &[Poly], ord: &MonomialOrder) -> Vec<(Monomial, Rational, Poly)> {
    polys
        .iter()
        .map(|g| {
            let (m, c) = ord.lead(g).expect("nonzero");
            (m.clone(), c.clone(), g.clone())
        })
        .collect()
}

/// Buchberger criterion: every S-polynomial reduces to zero. Pairs with
/// coprime leading monomials are skipped.
pub fn is_groebner(gens: &[Poly], ord: &MonomialOrder) -> Result<bool> {
    require_homogeneous(gens)?;
    check_widths(gens, ord)?;
    let basis = with_leads(gens, ord);
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            if basis[i].0.is_coprime(&basis[j].0) {
                continue;
            }
            let s = s_poly(&basis[i].2, &basis[j].2, ord)?;
            if !reduce_with(&s, &basis, ord).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct BuchbergerOutput {
    /// Reduced, monic, sorted by leading monomial under the order.
    pub basis: Vec<Poly>,
    /// Set when pairs above the cap were left unprocessed and the leading
    /// ideal does not yet contain every monomial of the cap degree.
    pub truncated: bool,
}

/// Homogeneous Buchberger completion processing S-pairs by degree up to
/// `degree_cap`. For an Artinian ideal the result is complete once the
/// leading ideal contains all monomials of degree `degree_cap`, since every
/// S-polynomial of larger degree then reduces to zero.
pub fn buchberger(gens: &[Poly], ord: &MonomialOrder, degree_cap: u32) -> Result<BuchbergerOutput> {
    require_homogeneous(gens)?;
    check_widths(gens, ord)?;
    let n = ord.nvars();
    let mut basis: Vec<(Monomial, Rational, Poly)> = Vec::new();
    let mut pairs: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    let mut skipped = false;

    let add = |basis: &mut Vec<(Monomial, Rational, Poly)>, pairs: &mut BTreeMap<u32, Vec<(usize, usize)>>, p: Poly| {
        let p = p.scale(&ord.lead(&p).expect("nonzero").1.recip());
        let (m, _) = ord.lead(&p).map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
        let k = basis.len();
        for (i, (mi, _, _)) in basis.iter().enumerate() {
            if !mi.is_coprime(&m) {
                pairs.entry(mi.lcm(&m).degree()).or_default().push((i, k));
            }
        }
        basis.push((m, Rational::one(), p));
    };

    let mut sorted: Vec<Poly> = gens.to_vec();
    sorted.sort_by_key(|g| g.degree());
    for g in sorted {
        let r = reduce_with(&g, &basis, ord);
        if !r.is_zero() {
            add(&mut basis, &mut pairs, r);
        }
    }
    while let Some((&deg, _)) = pairs.iter().next() {
        let batch = pairs.remove(&deg).unwrap_or_default();
        if deg > degree_cap {
            skipped = true;
            pairs.clear();
            break;
        }
        for (i, j) in batch {
            let s = s_poly(&basis[i].2, &basis[j].2, ord)?;
            let r = reduce_with(&s, &basis, ord);
            if !r.is_zero() {
                add(&mut basis, &mut pairs, r);
            }
        }
    }
    let leads: Vec<Monomial> = basis.iter().map(|b| b.0.clone()).collect();
    let truncated = skipped
        && !monomials_of_degree(n, degree_cap)
            .iter()
            .all(|u| leads.iter().any(|l| l.divides(u)));
    Ok(BuchbergerOutput {
        basis: interreduce(basis, ord),
        truncated,
    })
}

fn interreduce(basis: Vec<(Monomial, Rational, Poly)>, ord: &MonomialOrder) -> Vec<Poly> {
    // drop elements whose leading monomial is a multiple of another's
    let mut keep: Vec<(Monomial, Rational, Poly)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, o)| {
            j != i && o.0.divides(&b.0) && (o.0 != b.0 || j < i)
        });
        if !redundant {
            keep.push(b.clone());
        }
    }
    let mut out: Vec<(Monomial, Rational, Poly)> = Vec::new();
    for i in 0..keep.len() {
        let (m, c, p) = &keep[i];
        let others: Vec<(Monomial, Rational, Poly)> =
            keep.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, b)| b.clone()).collect();
        let tail = reduce_with(&(p - &Poly::term(m.clone(), c.clone())), &others, ord);
        out.push((m.clone(), c.clone(), &tail + &Poly::term(m.clone(), c.clone())));
    }
    out.sort_by(|a, b| ord.cmp(&b.0, &a.0));
    out.into_iter().map(|b| b.2).collect()
}

/// Minimal generators of a monomial ideal, sorted descending canonically.
pub fn minimalize(mut monos: Vec<Monomial>) -> Vec<Monomial> {
    monos.sort();
    monos.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in monos {
        if !out.iter().any(|o| o.divides(&m)) {
            out.push(m);
        }
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Minimal generators of the leading-term ideal of a Groebner basis.
pub fn initial_ideal(gb: &[Poly], ord: &MonomialOrder) -> Result<Vec<Monomial>> {
    if !is_groebner(gb, ord)? {
        return Err(Error::NotGroebner);
    }
    Ok(minimalize(gb.iter().map(|g| ord.lead_monomial(g).expect("nonzero").clone()).collect()))
}

fn as_monomials(gens: &[Poly]) -> Result<Vec<Monomial>> {
    gens.iter()
        .map(|g| g.as_monomial().cloned().ok_or_else(|| Error::NotMonomial(format!("{g:?}"))))
        .collect()
}

/// h-vector of `R / <gens>` for monomial generators, by counting standard
/// monomials degree by degree.
pub fn monomial_quotient_hilbert(gens: &[Poly], nvars: usize) -> Result<HilbertSeries> {
    let monos = as_monomials(gens)?;
    monomial_quotient_hilbert_of(&monos, nvars)
}

pub fn monomial_quotient_hilbert_of(monos: &[Monomial], nvars: usize) -> Result<HilbertSeries> {
    let mut bound = 0u32;
    for i in 0..nvars {
        let pure = monos
            .iter()
            .filter(|m| m.exps()[i] == m.degree() && m.degree() > 0)
            .map(Monomial::degree)
            .min();
        match pure {
            Some(p) => bound += p - 1,
            None => return Err(Error::NotArtinian(bound)),
        }
    }
    if monos.iter().any(Monomial::is_one) {
        return Ok(HilbertSeries::from_h_vector(&[]));
    }
    let h: Vec<i64> = (0..=bound)
        .map(|j| {
            monomials_of_degree(nvars, j)
                .iter()
                .filter(|u| !monos.iter().any(|g| g.divides(u)))
                .count() as i64
        })
        .collect();
    Ok(HilbertSeries::from_h_vector(&h))
}

/// A homogeneous ideal with cached graded pieces.
#[derive(Debug)]
pub struct GradedIdeal {
    nvars: usize,
    generators: Vec<Poly>,
    pieces: RwLock<BTreeMap<u32, Arc<Span>>>,
}

impl Clone for GradedIdeal {
    fn clone(&self) -> Self {
        GradedIdeal {
            nvars: self.nvars,
            generators: self.generators.clone(),
            pieces: RwLock::new(self.pieces.read().expect("lock").clone()),
        }
    }
}

impl GradedIdeal {
    pub fn new(nvars: usize, generators: Vec<Poly>) -> Result<Self> {
        require_homogeneous(&generators)?;
        for g in &generators {
            if g.nvars() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    found: g.nvars(),
                });
            }
        }
        Ok(GradedIdeal {
            nvars,
            generators,
            pieces: RwLock::new(BTreeMap::new()),
        })
    }

    pub fn from_monomials(nvars: usize, monos: &[Monomial]) -> Result<Self> {
        Self::new(nvars, monos.iter().cloned().map(Poly::monomial).collect())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// Echelon basis of `I_j`, the span of `{m · g : deg(m · g) = j}`.
    pub fn piece(&self, j: u32) -> Arc<Span> {
        if let Some(s) = self.pieces.read().expect("lock").get(&j) {
            return s.clone();
        }
        let mut span = Span::new();
        for g in &self.generators {
            let dg = g.degree().expect("nonzero");
            if dg > j {
                continue;
            }
            for m in monomials_of_degree(self.nvars, j - dg) {
                span.insert(g.mul_monomial(&m));
            }
        }
        let span = Arc::new(span);
        self.pieces.write().expect("lock").entry(j).or_insert(span).clone()
    }

    pub fn membership(&self, f: &Poly) -> Result<bool> {
        if f.nvars() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: f.nvars(),
            });
        }
        if f.is_zero() {
            return Ok(true);
        }
        let d = f.homogeneous_degree()?;
        Ok(self.piece(d).contains(f))
    }

    /// The generators of `other` that are not in `self`.
    pub fn missing_from(&self, other: &GradedIdeal) -> Result<Vec<Poly>> {
        let mut out = Vec::new();
        for g in &other.generators {
            if !self.membership(g)? {
                out.push(g.clone());
            }
        }
        Ok(out)
    }

    pub fn contains_ideal(&self, other: &GradedIdeal) -> Result<bool> {
        Ok(self.missing_from(other)?.is_empty())
    }

    /// `dim (R/I)_j` for `j = 0..=up_to`.
    pub fn quotient_dims(&self, up_to: u32) -> Vec<usize> {
        (0..=up_to)
            .map(|j| monomial_count(self.nvars, j) - self.piece(j).dim())
            .collect()
    }

    /// Finite h-vector when `I_j = R_j` for some `j <= cap`.
    pub fn artinian_h_vector(&self, cap: u32) -> Result<Vec<usize>> {
        let mut h = Vec::new();
        for j in 0..=cap {
            let q = monomial_count(self.nvars, j) - self.piece(j).dim();
            if q == 0 {
                return Ok(h);
            }
            h.push(q);
        }
        Err(Error::NotArtinian(cap))
    }
}

pub fn membership(f: &Poly, ideal: &GradedIdeal) -> Result<bool> {
    ideal.membership(f)
}

/// Equality by mutual generator membership.
pub fn ideals_equal(a: &GradedIdeal, b: &GradedIdeal) -> Result<bool> {
    Ok(a.contains_ideal(b)? && b.contains_ideal(a)?)
}
