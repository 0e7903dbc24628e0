//! Skew-symmetric polynomial matrices and their Pfaffians.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::poly::Poly;

fn is_skew(m: &[Vec<Poly>]) -> bool {
    let n = m.len();
    m.iter().all(|r| r.len() == n)
        && (0..n).all(|i| m[i][i].is_zero() && (0..i).all(|j| m[i][j] == -&m[j][i]))
}

fn width(m: &[Vec<Poly>]) -> usize {
    m.first().and_then(|r| r.first()).map_or(0, Poly::nvars)
}

/// Pfaffian of an even skew matrix by expansion along the first row, with
/// `Pf([[0, a], [-a, 0]]) = a`.
pub fn pfaffian(m: &[Vec<Poly>]) -> Result<Poly> {
    if m.len() % 2 == 1 || !is_skew(m) {
        return Err(Error::Precondition("Pfaffian needs an even skew-symmetric matrix".into()));
    }
    let idx: Vec<usize> = (0..m.len()).collect();
    Ok(pf_rec(m, &idx, width(m)))
}

fn pf_rec(m: &[Vec<Poly>], idx: &[usize], nvars: usize) -> Poly {
    if idx.is_empty() {
        return Poly::one(nvars);
    }
    let first = idx[0];
    let mut acc = Poly::zero(nvars);
    for k in 1..idx.len() {
        let entry = &m[first][idx[k]];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = idx[1..].iter().copied().filter(|&j| j != idx[k]).collect();
        let sub = pf_rec(m, &rest, nvars);
        let term = entry * &sub;
        acc = if k % 2 == 1 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Determinant of a square polynomial matrix by expansion over column
/// subsets; intended for sizes up to about a dozen.
pub fn poly_determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    assert!(n < 24, "matrix too large for subset expansion");
    // det of the top-|S| rows restricted to the columns in S
    let mut dp: HashMap<u32, Poly> = HashMap::new();
    dp.insert(0, Poly::one(nvars));
    for r in m {
        let mut next: HashMap<u32, Poly> = HashMap::new();
        for (mask, val) in &dp {
            if val.is_zero() {
                continue;
            }
            for (c, entry) in r.iter().enumerate() {
                if mask & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                // sign of inserting column c after the columns already used
                let above = (mask >> c).count_ones();
                let term = entry * val;
                let slot = next.entry(mask | (1 << c)).or_insert_with(|| Poly::zero(nvars));
                *slot = if above % 2 == 0 { &*slot + &term } else { &*slot - &term };
            }
        }
        dp = next;
    }
    dp.remove(&((1u32 << n) - 1)).unwrap_or_else(|| Poly::zero(nvars))
}

/// Odd-size skew-symmetric matrix of homogeneous polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewPolyMatrix {
    nvars: usize,
    entries: Vec<Vec<Poly>>,
}

impl SkewPolyMatrix {
    pub fn new(entries: Vec<Vec<Poly>>) -> Result<Self> {
        if entries.len() % 2 == 0 || !is_skew(&entries) {
            return Err(Error::NotSkewOdd);
        }
        let nvars = width(&entries);
        if entries.iter().flatten().any(|p| p.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: entries.iter().flatten().find(|p| p.nvars() != nvars).map_or(0, Poly::nvars),
            });
        }
        if entries.iter().flatten().any(|p| !p.is_homogeneous()) {
            return Err(Error::NotHomogeneous);
        }
        Ok(SkewPolyMatrix { nvars, entries })
    }

    /// Builds a matrix from its strict upper triangle, row by row.
    pub fn from_upper(size: usize, nvars: usize, upper: impl Fn(usize, usize) -> Poly) -> Result<Self> {
        let mut m = vec![vec![Poly::zero(nvars); size]; size];
        for i in 0..size {
            for j in i + 1..size {
                let p = upper(i, j);
                m[j][i] = -&p;
                m[i][j] = p;
            }
        }
        Self::new(m)
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<Poly>] {
        &self.entries
    }

    /// Degree labels `p, q` with `deg m_ij = q_j - p_i` for every nonzero
    /// entry, normalised so the smallest label of each connected block is
    /// zero in `p`.
    pub fn graded_labels(&self) -> Option<(Vec<i64>, Vec<i64>)> {
        let n = self.size();
        let mut p: Vec<Option<i64>> = vec![None; n];
        let mut q: Vec<Option<i64>> = vec![None; n];
        for start in 0..n {
            if p[start].is_some() {
                continue;
            }
            p[start] = Some(0);
            // nodes: (is_row, index)
            let mut queue = VecDeque::from([(true, start)]);
            while let Some((is_row, i)) = queue.pop_front() {
                for j in 0..n {
                    let e = if is_row { &self.entries[i][j] } else { &self.entries[j][i] };
                    let Some(deg) = e.degree() else { continue };
                    let deg = deg as i64;
                    if is_row {
                        let want = p[i].expect("visited") + deg;
                        match q[j] {
                            None => {
                                q[j] = Some(want);
                                queue.push_back((false, j));
                            }
                            Some(v) if v != want => return None,
                            _ => {}
                        }
                    } else {
                        let want = q[i].expect("visited") - deg;
                        match p[j] {
                            None => {
                                p[j] = Some(want);
                                queue.push_back((true, j));
                            }
                            Some(v) if v != want => return None,
                            _ => {}
                        }
                    }
                }
            }
        }
        Some((
            p.into_iter().map(|x| x.unwrap_or(0)).collect(),
            q.into_iter().map(|x| x.unwrap_or(0)).collect(),
        ))
    }

    /// The `2n+1` Pfaffians of the matrices with row and column `i` removed,
    /// the `i`-th carrying the sign `(-1)^i`.
    pub fn sub_pfaffians(&self) -> Vec<Poly> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let idx: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                let pf = pf_rec(&self.entries, &idx, self.nvars);
                if i % 2 == 0 {
                    pf
                } else {
                    -pf
                }
            })
            .collect()
    }

    /// Same simultaneous permutation applied to rows and columns.
    pub fn permuted(&self, perm: &[usize]) -> SkewPolyMatrix {
        let entries = perm
            .iter()
            .map(|&i| perm.iter().map(|&j| self.entries[i][j].clone()).collect())
            .collect();
        SkewPolyMatrix {
            nvars: self.nvars,
            entries,
        }
    }
}

pub fn sub_pfaffians(m: &SkewPolyMatrix) -> Vec<Poly> {
    m.sub_pfaffians()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::poly::{rat, Monomial};
    use proptest::prelude::*;

    fn p(s: &str) -> Poly {
        parse_poly(s, 3).unwrap()
    }

    #[test]
    fn three_by_three_base_case() {
        let (f, g, h) = (p("x"), p("y^2"), p("z^3"));
        let m = SkewPolyMatrix::from_upper(3, 3, |i, j| match (i, j) {
            (0, 1) => f.clone(),
            (0, 2) => g.clone(),
            _ => h.clone(),
        })
        .unwrap();
        assert_eq!(m.sub_pfaffians(), vec![h.clone(), -&g, f.clone()]);
        let two = vec![vec![Poly::zero(3), f.clone()], vec![-&f, Poly::zero(3)]];
        assert_eq!(pfaffian(&two).unwrap(), f);
    }

    #[test]
    fn rejects_bad_shapes() {
        let two = vec![vec![Poly::zero(3), p("x")], vec![p("-x"), Poly::zero(3)]];
        assert_eq!(SkewPolyMatrix::new(two), Err(Error::NotSkewOdd));
        let mut three = vec![vec![Poly::zero(3); 3]; 3];
        three[0][1] = p("x");
        three[1][0] = p("x");
        assert_eq!(SkewPolyMatrix::new(three), Err(Error::NotSkewOdd));
    }

    #[test]
    fn graded_labels_found() {
        let m = SkewPolyMatrix::from_upper(3, 3, |i, j| match (i, j) {
            (0, 1) => p("x^2"),
            (0, 2) => p("y^3"),
            _ => p("z"),
        })
        .unwrap();
        let (pl, ql) = m.graded_labels().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if let Some(d) = m.entry(i, j).degree() {
                    assert_eq!(ql[j] - pl[i], d as i64);
                }
            }
        }
        // an even cycle of entries whose degrees do not balance
        let bad = SkewPolyMatrix::from_upper(5, 3, |i, j| match (i, j) {
            (0, 1) | (1, 2) | (2, 3) => p("x"),
            (0, 3) => p("x^2"),
            _ => Poly::zero(3),
        })
        .unwrap();
        assert!(bad.graded_labels().is_none());
    }

    #[test]
    fn determinant_by_subsets() {
        let m = vec![vec![p("x"), p("y")], vec![p("z"), p("x")]];
        assert_eq!(poly_determinant(&m, 3), p("x^2 - y*z"));
        let id: Vec<Vec<Poly>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { Poly::one(3) } else { Poly::zero(3) }).collect())
            .collect();
        assert_eq!(poly_determinant(&id, 3), Poly::one(3));
    }

    fn skew_matrix() -> impl Strategy<Value = Vec<Vec<Poly>>> {
        (1usize..4).prop_flat_map(|half| {
            let size = 2 * half;
            proptest::collection::vec(
                proptest::collection::vec(((0u32..2, 0u32..2), -3i64..4), 0..3),
                size * (size - 1) / 2,
            )
            .prop_map(move |entries| {
                let mut m = vec![vec![Poly::zero(2); size]; size];
                let mut it = entries.into_iter();
                for i in 0..size {
                    for j in i + 1..size {
                        let terms = it.next().expect("enough entries");
                        let e = Poly::from_terms(2, terms.into_iter().map(|((a, b), c)| (Monomial::new(&[a, b]), rat(c))));
                        m[j][i] = -&e;
                        m[i][j] = e;
                    }
                }
                m
            })
        })
    }

    proptest! {
        #[test]
        fn pfaffian_squared_is_determinant(m in skew_matrix()) {
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, poly_determinant(&m, 2));
        }
    }
}
