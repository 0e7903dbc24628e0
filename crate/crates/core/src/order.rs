//! Monomial orders with an explicit variable priority.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Monomial, Poly, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Grevlex,
    Lex,
}

/// A term order on monomials. `priority[0]` is the largest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    priority: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, priority: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; priority.len()];
        for &i in &priority {
            if i >= priority.len() || seen[i] {
                return Err(Error::Precondition(format!(
                    "variable priority {priority:?} is not a permutation"
                )));
            }
            seen[i] = true;
        }
        Ok(MonomialOrder { kind, priority })
    }

    /// Order with `x_1 > x_2 > ... > x_n`.
    pub fn natural(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            priority: (0..nvars).collect(),
        }
    }

    pub fn grevlex(priority: &[usize]) -> Result<Self> {
        Self::new(OrderKind::Grevlex, priority.to_vec())
    }

    pub fn lex(priority: &[usize]) -> Result<Self> {
        Self::new(OrderKind::Lex, priority.to_vec())
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    pub fn nvars(&self) -> usize {
        self.priority.len()
    }

    /// Whether variable `big` ranks above variable `small`.
    pub fn var_greater(&self, big: usize, small: usize) -> bool {
        let pos = |v| self.priority.iter().position(|&p| p == v);
        matches!((pos(big), pos(small)), (Some(a), Some(b)) if a < b)
    }

    /// Checks a list of `(big, small)` constraints, e.g. `z > x` and `z > y`.
    pub fn require(&self, constraints: &[(usize, usize)]) -> Result<()> {
        for &(big, small) in constraints {
            if !self.var_greater(big, small) {
                return Err(Error::Precondition(format!(
                    "order {self} does not rank variable {big} above variable {small}"
                )));
            }
        }
        Ok(())
    }

    pub fn compare(&self, u: &Monomial, v: &Monomial) -> Result<Ordering> {
        if u.nvars() != self.nvars() || v.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: if u.nvars() != self.nvars() { u.nvars() } else { v.nvars() },
            });
        }
        Ok(self.cmp(u, v))
    }

    /// Comparison without width checks.
    pub fn cmp(&self, u: &Monomial, v: &Monomial) -> Ordering {
        let (a, b) = (u.exps(), v.exps());
        match self.kind {
            OrderKind::Lex => {
                for &i in &self.priority {
                    if a[i] != b[i] {
                        return a[i].cmp(&b[i]);
                    }
                }
                Ordering::Equal
            }
            OrderKind::Grevlex => u.degree().cmp(&v.degree()).then_with(|| {
                for &i in self.priority.iter().rev() {
                    if a[i] != b[i] {
                        return b[i].cmp(&a[i]);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    pub fn leading_term(&self, f: &Poly) -> Result<(Monomial, Rational)> {
        if f.nvars() != self.nvars() {
            return Err(Error::DimensionMismatch {
                expected: self.nvars(),
                found: f.nvars(),
            });
        }
        self.lead(f).map(|(m, c)| (m.clone(), c.clone())).ok_or(Error::ZeroPolynomial)
    }

    pub(crate) fn lead<'a>(&self, f: &'a Poly) -> Option<(&'a Monomial, &'a Rational)> {
        f.terms().max_by(|a, b| self.cmp(a.0, b.0))
    }

    pub(crate) fn lead_monomial<'a>(&self, f: &'a Poly) -> Option<&'a Monomial> {
        self.lead(f).map(|(m, _)| m)
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            OrderKind::Grevlex => "grevlex",
            OrderKind::Lex => "lex",
        };
        let pr: Vec<String> = self.priority.iter().map(|i| i.to_string()).collect();
        write!(f, "{kind}:{}", pr.join(","))
    }
}

impl MonomialOrder {
    /// Parses `grevlex`, `lex`, or either followed by `:` and a comma
    /// separated priority such as `grevlex:2,0,1`. Without a priority the
    /// natural order on `nvars` variables is used.
    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
        let kind = match kind.trim() {
            "grevlex" => OrderKind::Grevlex,
            "lex" => OrderKind::Lex,
            other => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown order `{other}`, expected grevlex or lex"),
                })
            }
        };
        if rest.trim().is_empty() {
            return Ok(Self::natural(kind, nvars));
        }
        let priority = rest
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                pos: kind_len(text) + 1,
                msg: format!("bad variable index: {e}"),
            })?;
        if priority.len() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: priority.len(),
            });
        }
        Self::new(kind, priority)
    }
}

fn kind_len(text: &str) -> usize {
    text.find(':').unwrap_or(text.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: usize = 0;
    const Y: usize = 1;
    const Z: usize = 2;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e)
    }

    #[test]
    fn grevlex_z_first_breaks_degree_ties() {
        let ord = MonomialOrder::grevlex(&[Z, X, Y]).unwrap();
        assert_eq!(ord.compare(&m(&[0, 0, 2]), &m(&[1, 1, 0])).unwrap(), Ordering::Greater);
    }

    #[test]
    fn one_is_smallest() {
        for ord in [
            MonomialOrder::grevlex(&[Z, X, Y]).unwrap(),
            MonomialOrder::lex(&[Y, Z, X]).unwrap(),
        ] {
            assert_eq!(ord.cmp(&Monomial::one(3), &m(&[1, 0, 0])), Ordering::Less);
        }
    }

    #[test]
    fn lex_ignores_degree() {
        // variables x, y, z, t with z > t > x > y
        let ord = MonomialOrder::lex(&[2, 3, 0, 1]).unwrap();
        assert_eq!(ord.cmp(&m(&[0, 0, 1, 1]), &m(&[4, 0, 0, 0])), Ordering::Greater);
    }

    #[test]
    fn leading_terms() {
        let ord = MonomialOrder::grevlex(&[Z, X, Y]).unwrap();
        let f = Poly::from_int_terms(3, &[(&[0, 0, 2], 1), (&[1, 1, 0], 1)]);
        assert_eq!(ord.leading_term(&f).unwrap(), (m(&[0, 0, 2]), crate::poly::rat(1)));
        let g = Poly::from_int_terms(3, &[(&[1, 0, 0], 5)]);
        assert_eq!(ord.leading_term(&g).unwrap(), (m(&[1, 0, 0]), crate::poly::rat(5)));
        assert_eq!(ord.leading_term(&Poly::zero(3)), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn constraint_check() {
        let ord = MonomialOrder::lex(&[Z, Y, X]).unwrap();
        assert!(ord.require(&[(Z, X), (Z, Y)]).is_ok());
        assert!(ord.require(&[(X, Z)]).is_err());
        assert!(MonomialOrder::grevlex(&[0, 0, 1]).is_err());
    }

    #[test]
    fn parses_display_form() {
        let ord = MonomialOrder::parse("grevlex:2,0,1", 3).unwrap();
        assert_eq!(ord, MonomialOrder::grevlex(&[Z, X, Y]).unwrap());
        assert_eq!(MonomialOrder::parse(&ord.to_string(), 3).unwrap(), ord);
        assert_eq!(MonomialOrder::parse("lex", 2).unwrap(), MonomialOrder::natural(OrderKind::Lex, 2));
        assert!(MonomialOrder::parse("deglex", 3).is_err());
        assert!(MonomialOrder::parse("lex:0,1", 3).is_err());
        assert!(MonomialOrder::parse("lex:0,x,1", 3).is_err());
    }

    #[test]
    fn mismatched_width() {
        let ord = MonomialOrder::natural(OrderKind::Grevlex, 3);
        assert!(ord.compare(&m(&[1, 0]), &m(&[1, 0, 0])).is_err());
    }
}
