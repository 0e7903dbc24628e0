//! Macaulay duality: catalecticant maps, annihilators, Hilbert functions.

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hilbert::HilbertSeries;
use crate::linalg::{rank_of_rows, Matrix};
use crate::poly::{contract_monomial, contract_unchecked, monomial_count, monomials_of_degree, LinearForm, Monomial, Poly, Rational};
use crate::span::Span;

/// The Artinian Gorenstein algebra `A_F = R / Ann(F)`.
#[derive(Debug)]
pub struct ApolarAlgebra {
    dual: Poly,
    degree: u32,
    ann: Vec<OnceLock<Span>>,
    hvec: OnceLock<Vec<usize>>,
}

/// Column index of each monomial of a degree, in descending canonical order.
fn index_of_degree(nvars: usize, degree: u32) -> HashMap<Monomial, usize> {
    monomials_of_degree(nvars, degree)
        .into_iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect()
}

/// Coefficient vector of a homogeneous polynomial in the given column index.
fn coordinates(p: &Poly, cols: &HashMap<Monomial, usize>) -> Vec<Rational> {
    let mut row = vec![Rational::default(); cols.len()];
    for (m, c) in p.terms() {
        row[cols[m]] = c.clone();
    }
    row
}

/// Rank of `{u ∘ G : u in rows}` for a homogeneous `G`.
pub(crate) fn contraction_rank<'a>(rows: impl IntoIterator<Item = &'a Monomial>, dual: &Poly, target_degree: u32) -> usize {
    let cols = index_of_degree(dual.nvars(), target_degree);
    let rows: Vec<Vec<Rational>> = rows
        .into_iter()
        .map(|u| coordinates(&contract_monomial(u, dual), &cols))
        .filter(|r| r.iter().any(|x| *x != Rational::default()))
        .collect();
    rank_of_rows(&rows)
}

impl ApolarAlgebra {
    pub fn new(dual: Poly) -> Result<Self> {
        let degree = dual.homogeneous_degree()?;
        Ok(ApolarAlgebra {
            dual,
            degree,
            ann: (0..=degree).map(|_| OnceLock::new()).collect(),
            hvec: OnceLock::new(),
        })
    }

    pub fn dual_generator(&self) -> &Poly {
        &self.dual
    }

    pub fn socle_degree(&self) -> u32 {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.dual.nvars()
    }

    fn check_degree(&self, i: u32) -> Result<()> {
        if i > self.degree {
            return Err(Error::DegreeOutOfRange {
                degree: i,
                max: self.degree,
            });
        }
        Ok(())
    }

    /// Matrix of `R_i -> R'_{d-i}`, `f -> f ∘ F`. Rows and columns follow
    /// the descending canonical order of monomials.
    pub fn cat_map(&self, i: u32) -> Result<Matrix> {
        self.check_degree(i)?;
        let cols = index_of_degree(self.nvars(), self.degree - i);
        let rows = monomials_of_degree(self.nvars(), i)
            .iter()
            .map(|u| coordinates(&contract_monomial(u, &self.dual), &cols))
            .collect();
        Ok(Matrix::from_rows_with_width(rows, cols.len()))
    }

    /// `Ann(F)_j` as a reduced echelon span, for `j <= d`.
    pub fn ann_span(&self, j: u32) -> Result<&Span> {
        self.check_degree(j)?;
        Ok(self.ann[j as usize].get_or_init(|| self.compute_ann(j)))
    }

    fn compute_ann(&self, j: u32) -> Span {
        let n = self.nvars();
        let monos = monomials_of_degree(n, j);
        let cat = self.cat_map(j).expect("degree checked");
        let mut span = Span::new();
        for v in cat.transpose().kernel() {
            let p = Poly::from_terms(n, monos.iter().cloned().zip(v));
            span.insert(p);
        }
        span
    }

    /// Basis of `Ann(F)_j`; all of `R_j` once `j > d`.
    pub fn ann_graded(&self, j: u32) -> Vec<Poly> {
        if j > self.degree {
            return monomials_of_degree(self.nvars(), j).into_iter().map(Poly::monomial).collect();
        }
        self.ann_span(j).expect("degree checked").basis().cloned().collect()
    }

    fn ann_span_any(&self, j: u32) -> Span {
        if j > self.degree {
            Span::from_polys(&self.ann_graded(j))
        } else {
            self.ann_span(j).expect("degree checked").clone()
        }
    }

    /// Minimal generators of `Ann(F)` in increasing degree. In each degree
    /// the new generators are the echelon basis elements of `Ann(F)_j` not
    /// already in `R_1 · Ann(F)_{j-1}`.
    pub fn ann_min_gens(&self) -> Vec<(u32, Poly)> {
        let n = self.nvars();
        let vars: Vec<Monomial> = (0..n).map(|i| Monomial::var(n, i)).collect();
        let mut gens = Vec::new();
        let mut prev: Option<Span> = None;
        for j in 1..=self.degree + 1 {
            let mut generated = Span::new();
            if let Some(p) = &prev {
                for g in p.basis() {
                    for v in &vars {
                        generated.insert(g.mul_monomial(v));
                    }
                }
            }
            let here = self.ann_span_any(j);
            for f in here.basis() {
                if generated.insert(f.clone()) {
                    gens.push((j, f.clone()));
                }
            }
            prev = Some(here);
        }
        gens
    }

    /// `h_j = rank cat_map(F, j)` for `0 <= j <= d`.
    pub fn h_vector(&self) -> &[usize] {
        self.hvec.get_or_init(|| {
            (0..=self.degree)
                .into_par_iter()
                .map(|j| contraction_rank(&monomials_of_degree(self.nvars(), j), &self.dual, self.degree - j))
                .collect()
        })
    }

    pub fn dim(&self, j: u32) -> usize {
        self.h_vector().get(j as usize).copied().unwrap_or(0)
    }

    pub fn hilbert_fn(&self) -> HilbertSeries {
        let h: Vec<i64> = self.h_vector().iter().map(|&x| x as i64).collect();
        HilbertSeries::from_h_vector(&h)
    }

    /// Standard monomials of degree `t`: a basis of `A_t`.
    pub fn standard_basis(&self, t: u32) -> Vec<Monomial> {
        if t > self.degree {
            return Vec::new();
        }
        let span = self.ann_span(t).expect("degree checked");
        span.standard_monomials(&monomials_of_degree(self.nvars(), t))
    }

    /// `dim (0 :_A m)_j` for every `j <= d`.
    pub fn socle_dims(&self) -> Vec<usize> {
        let n = self.nvars();
        (0..=self.degree)
            .map(|j| {
                let basis = self.standard_basis(j);
                if j == self.degree {
                    return basis.len();
                }
                let cols = index_of_degree(n, self.degree - j - 1);
                let rows: Vec<Vec<Rational>> = basis
                    .iter()
                    .map(|u| {
                        let g = contract_monomial(u, &self.dual);
                        (0..n)
                            .flat_map(|i| coordinates(&contract_monomial(&Monomial::var(n, i), &g), &cols))
                            .collect()
                    })
                    .collect();
                basis.len() - rank_of_rows(&rows)
            })
            .collect()
    }

    /// Rank of `×ℓ^k : A_i -> A_{i+k}`, computed as the rank of
    /// `{u ∘ (ℓ^k ∘ F) : u in R_i}` since `g -> g ∘ F` embeds `A` into `R'`.
    pub fn mult_rank(&self, l: &LinearForm, i: u32, k: u32) -> usize {
        if i + k > self.degree {
            return 0;
        }
        let g = self.lk_dual(l, k);
        contraction_rank(&monomials_of_degree(self.nvars(), i), &g, self.degree - i - k)
    }

    /// `ℓ^k ∘ F`
    pub fn lk_dual(&self, l: &LinearForm, k: u32) -> Poly {
        assert_eq!(l.nvars(), self.nvars(), "linear form width mismatch");
        let lp = l.to_poly();
        let mut g = self.dual.clone();
        for _ in 0..k {
            g = contract_unchecked(&lp, &g);
        }
        g
    }

    /// `dim K_j` for the ideal `K` of `A` generated by monomials in
    /// `R_j` accepted by `in_ideal`.
    pub fn ideal_piece_dim(&self, j: u32, in_ideal: impl Fn(&Monomial) -> bool) -> usize {
        if j > self.degree {
            return 0;
        }
        let rows: Vec<Monomial> = monomials_of_degree(self.nvars(), j).into_iter().filter(|u| in_ideal(u)).collect();
        contraction_rank(&rows, &self.dual, self.degree - j)
    }
}

/// Dimension of `R_j` minus `Ann(F)_j`, by the oracle, without building
/// an algebra.
pub fn oracle_h_vector(dual: &Poly) -> Result<Vec<usize>> {
    Ok(ApolarAlgebra::new(dual.clone())?.h_vector().to_vec())
}

/// `dim R_j` for convenience in callers that compare against `Ann(F)_j`.
pub fn ring_dim(nvars: usize, j: u32) -> usize {
    monomial_count(nvars, j)
}
