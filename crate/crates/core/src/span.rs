//! Linear spans of polynomials kept in fully reduced echelon form.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::poly::{Monomial, Poly};

/// Echelon basis keyed by the canonical leading monomial of each element.
/// Every element is monic and no pivot monomial appears in any other
/// element, so the basis is unique for a given span.
#[derive(Clone, Debug, Default)]
pub struct Span {
    rows: BTreeMap<Monomial, Poly>,
}

impl Span {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_polys<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let mut s = Span::new();
        for p in polys {
            s.insert(p.clone());
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Basis in descending order of pivots.
    pub fn basis(&self) -> impl Iterator<Item = &Poly> {
        self.rows.values().rev()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.keys().rev()
    }

    pub fn is_pivot(&self, m: &Monomial) -> bool {
        self.rows.contains_key(m)
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        let hits: Vec<(Monomial, _)> = p
            .terms()
            .filter(|(m, _)| self.rows.contains_key(*m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        let mut out = p.clone();
        for (m, c) in hits {
            out.add_scaled(&-c, &self.rows[&m]);
        }
        out
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.reduce(p).is_zero()
    }

    /// Adds `p` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, p: Poly) -> bool {
        let r = self.reduce(&p);
        let Some((lead, _)) = r.canonical_lead() else {
            return false;
        };
        let lead = lead.clone();
        let r = r.monic();
        for row in self.rows.values_mut() {
            let c = row.coeff(&lead);
            if !c.is_zero() {
                row.add_scaled(&-c, &r);
            }
        }
        self.rows.insert(lead, r);
        true
    }

    /// Monomials of `candidates` that are not pivots, i.e. a basis of the
    /// quotient of their span by this span when the candidates span the
    /// ambient space.
    pub fn standard_monomials(&self, candidates: &[Monomial]) -> Vec<Monomial> {
        candidates.iter().filter(|m| !self.rows.contains_key(*m)).cloned().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echelon_is_canonical() {
        let a = Poly::from_int_terms(2, &[(&[2, 0], 1), (&[1, 1], 1)]);
        let b = Poly::from_int_terms(2, &[(&[1, 1], 1), (&[0, 2], 1)]);
        let c = &a + &b;
        let s1 = Span::from_polys([&a, &b]);
        let s2 = Span::from_polys([&c, &b, &a]);
        assert_eq!(s1.dim(), 2);
        let v1: Vec<_> = s1.basis().cloned().collect();
        let v2: Vec<_> = s2.basis().cloned().collect();
        assert_eq!(v1, v2);
        assert!(s1.contains(&(&a - &b)));
        assert!(!s1.contains(&Poly::from_int_terms(2, &[(&[0, 2], 1)])));
    }
}
