//! Closed forms for `F = X^a Y^b Z^c (Z^n - X^e Y^m)` with `n = e + m > 0`
//! in three variables.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::apolar::ApolarAlgebra;
use crate::error::{Error, Result};
use crate::groebner::minimalize;
use crate::hilbert::{product, HilbertSeries};
use crate::pfaffian::SkewPolyMatrix;
use crate::poly::{rat, Monomial, Poly};

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    /// `e = 0` or `m = 0`: the algebra splits as a tensor product.
    VarSplit,
    /// `a < qe` or `b < qm`: complete intersection `<x^{a+e+1}, y^{b+m+1}, P>`.
    CiP,
    /// `a >= (q+1)e`, `b >= (q+1)m`, `r > 0`: seven generators.
    Type3,
    /// `a >= (q+1)e`, `b >= (q+1)m`, `r = 0`: five generators.
    R0,
    /// All remaining parameters: five generators.
    Other,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::VarSplit => "VARSPLIT",
            CaseTag::CiP => "CI_P",
            CaseTag::Type3 => "TYPE3",
            CaseTag::R0 => "R0",
            CaseTag::Other => "OTHER",
        };
        f.write_str(s)
    }
}

impl CaseTag {
    /// Number of minimal generators of `Ann(F)`.
    pub fn generator_count(self) -> usize {
        match self {
            CaseTag::VarSplit | CaseTag::CiP => 3,
            CaseTag::Type3 => 7,
            CaseTag::R0 | CaseTag::Other => 5,
        }
    }
}

/// `(a, b, c, e, m)` with the derived `n = e + m`, `c + 1 = nq + r`
/// (`0 <= r < n`) and socle degree `d = a + b + c + n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Binomial3Params {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub e: u32,
    pub m: u32,
}

impl fmt::Display for Binomial3Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a, self.b, self.c, self.e, self.m)
    }
}

impl Binomial3Params {
    pub fn new(a: u32, b: u32, c: u32, e: u32, m: u32) -> Result<Self> {
        if e + m == 0 {
            return Err(Error::Precondition("n = e + m must be positive".into()));
        }
        Ok(Binomial3Params { a, b, c, e, m })
    }

    /// Parses `a,b,c,e,m`.
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<u32> = text
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse {
                pos: 0,
                msg: format!("parameters must be five non-negative integers a,b,c,e,m: {e}"),
            })?;
        match parts.as_slice() {
            &[a, b, c, e, m] => Self::new(a, b, c, e, m),
            _ => Err(Error::Parse {
                pos: 0,
                msg: "expected exactly five parameters a,b,c,e,m".into(),
            }),
        }
    }

    pub fn n(&self) -> u32 {
        self.e + self.m
    }

    pub fn q(&self) -> u32 {
        (self.c + 1) / self.n()
    }

    pub fn r(&self) -> u32 {
        (self.c + 1) % self.n()
    }

    pub fn socle_degree(&self) -> u32 {
        self.a + self.b + self.c + self.n()
    }

    pub fn case(&self) -> CaseTag {
        classify(self)
    }

    /// The parameters with the roles of `x` and `y` exchanged.
    pub fn swapped(&self) -> Self {
        Binomial3Params {
            a: self.b,
            b: self.a,
            c: self.c,
            e: self.m,
            m: self.e,
        }
    }
}

pub fn classify(p: &Binomial3Params) -> CaseTag {
    let (q, r) = (p.q(), p.r());
    if p.e == 0 || p.m == 0 {
        CaseTag::VarSplit
    } else if p.a < q * p.e || p.b < q * p.m {
        CaseTag::CiP
    } else if p.a >= (q + 1) * p.e && p.b >= (q + 1) * p.m {
        if r > 0 {
            CaseTag::Type3
        } else {
            CaseTag::R0
        }
    } else {
        CaseTag::Other
    }
}

pub fn is_complete_intersection(p: &Binomial3Params) -> bool {
    let q = p.q();
    p.e == 0 || p.m == 0 || p.a < q * p.e || p.b < q * p.m
}

/// All parameter points with `a, b, c <= max_abc`, `e, m <= max_em`,
/// `n > 0`, keeping one representative of each `x <-> y` pair: the one
/// with `(a, e) <= (b, m)`.
pub fn sweep_grid(max_abc: u32, max_em: u32) -> Vec<Binomial3Params> {
    let mut out = Vec::new();
    for a in 0..=max_abc {
        for b in 0..=max_abc {
            for c in 0..=max_abc {
                for e in 0..=max_em {
                    for m in 0..=max_em {
                        if e + m > 0 && (a, e) <= (b, m) {
                            out.push(Binomial3Params { a, b, c, e, m });
                        }
                    }
                }
            }
        }
    }
    out
}

fn mono(x: u32, y: u32, z: u32) -> Poly {
    Poly::monomial(Monomial::new(&[x, y, z]))
}

/// `X^a Y^b Z^c (Z^n - X^e Y^m)`
pub fn dual_generator(p: &Binomial3Params) -> Poly {
    Poly::from_terms(
        3,
        [
            (Monomial::new(&[p.a, p.b, p.c + p.n()]), rat(1)),
            (Monomial::new(&[p.a + p.e, p.b + p.m, p.c]), rat(-1)),
        ],
    )
}

fn em_nonzero(p: &Binomial3Params) -> Result<()> {
    if p.e == 0 || p.m == 0 {
        return Err(Error::NotApplicable(format!("{p}: e = 0 or m = 0")));
    }
    Ok(())
}

/// `P = sum_{i=0}^q x^{ei} y^{mi} z^{c+1-ni}`
pub fn p_poly(p: &Binomial3Params) -> Result<Poly> {
    em_nonzero(p)?;
    let mut out = Poly::zero(3);
    for i in 0..=p.q() {
        out.add_term(Monomial::new(&[p.e * i, p.m * i, p.c + 1 - p.n() * i]), rat(1));
    }
    Ok(out)
}

/// `T = z^{n-r} P + x^{(q+1)e} y^{(q+1)m}`
pub fn t_poly(p: &Binomial3Params) -> Result<Poly> {
    let big_p = p_poly(p)?;
    let (q, r) = (p.q(), p.r());
    Ok(&big_p.mul_monomial(&Monomial::new(&[0, 0, p.n() - r])) + &mono((q + 1) * p.e, (q + 1) * p.m, 0))
}

fn split_generators(p: &Binomial3Params) -> Result<Vec<Poly>> {
    // F = X^a · Y^b Z^c (Z^n - Y^n) when e = 0; symmetric when m = 0
    let (solo, solo_exp, other, other_exp) = if p.e == 0 { (X, p.a, Y, p.b) } else { (Y, p.b, X, p.a) };
    let n = p.n();
    let factor = Poly::from_terms(
        2,
        [
            (Monomial::new(&[other_exp, p.c + n]), rat(1)),
            (Monomial::new(&[other_exp + n, p.c]), rat(-1)),
        ],
    );
    let mut gens = vec![Poly::monomial(Monomial::var_pow(3, solo, solo_exp + 1))];
    let alg = ApolarAlgebra::new(factor)?;
    for (_, g) in alg.ann_min_gens() {
        gens.push(g.embed(3, &[other, Z]));
    }
    if gens.len() != 3 {
        return Err(Error::Precondition(format!(
            "{p}: expected a complete intersection, found {} generators",
            gens.len()
        )));
    }
    Ok(gens)
}

/// The generators of `Ann(F)` for each case.
pub fn ann_generators(p: &Binomial3Params) -> Result<Vec<Poly>> {
    let (a, b, c, e, m) = (p.a, p.b, p.c, p.e, p.m);
    let case = classify(p);
    if case == CaseTag::VarSplit {
        return split_generators(p);
    }
    let (n, q) = (p.n(), p.q());
    let big_p = p_poly(p)?;
    let xa = mono(a + e + 1, 0, 0);
    let yb = mono(0, b + m + 1, 0);
    let gens = match case {
        CaseTag::CiP => vec![xa, yb, big_p],
        CaseTag::Type3 => {
            let t = t_poly(p)?;
            vec![
                xa,
                yb,
                mono(0, 0, n + c + 1),
                t.mul_monomial(&Monomial::new(&[a - (q + 1) * e + 1, 0, 0])),
                t.mul_monomial(&Monomial::new(&[0, b - (q + 1) * m + 1, 0])),
                big_p.mul_monomial(&Monomial::new(&[a - q * e + 1, 0, 0])),
                big_p.mul_monomial(&Monomial::new(&[0, b - q * m + 1, 0])),
            ]
        }
        CaseTag::R0 => vec![
            xa,
            yb,
            big_p.mul_monomial(&Monomial::new(&[a - q * e + 1, 0, 0])),
            big_p.mul_monomial(&Monomial::new(&[0, b - q * m + 1, 0])),
            mono(0, 0, n + c + 1),
        ],
        CaseTag::Other => vec![
            xa,
            yb,
            big_p.mul_monomial(&Monomial::new(&[a - q * e + 1, 0, 0])),
            big_p.mul_monomial(&Monomial::new(&[0, b - q * m + 1, 0])),
            t_poly(p)?,
        ],
        CaseTag::VarSplit => unreachable!(),
    };
    Ok(gens)
}

/// Presentation matrix whose sub-maximal Pfaffians generate `Ann(F)`.
pub fn pfaffian_matrix(p: &Binomial3Params) -> Result<SkewPolyMatrix> {
    let case = classify(p);
    let (a, b, e, m) = (p.a, p.b, p.e, p.m);
    let (n, q, r) = (p.n(), p.q(), p.r());
    let zero = Poly::zero(3);
    match case {
        CaseTag::VarSplit | CaseTag::CiP => Err(Error::NotApplicable(format!(
            "{p}: complete intersection, presented by the Koszul complex"
        ))),
        CaseTag::Type3 => {
            let big_p = p_poly(p)?;
            let ent = |i: usize, j: usize| -> Poly {
                match (i, j) {
                    (0, 4) => -mono(0, 0, r),
                    (0, 5) => -mono(e, 0, 0),
                    (0, 6) => -mono(0, b - (q + 1) * m + 1, 0),
                    (1, 3) => -&big_p,
                    (1, 5) => mono(0, (q + 1) * m, 0),
                    (2, 3) => mono((q + 1) * e, 0, 0),
                    (2, 4) => mono(0, m, 0),
                    (2, 5) => mono(0, 0, n - r),
                    (4, 6) => mono(a - (q + 1) * e + 1, 0, 0),
                    _ => zero.clone(),
                }
            };
            SkewPolyMatrix::from_upper(7, 3, ent)
        }
        CaseTag::R0 => {
            let big_p = p_poly(p)?;
            let big_q = &mono(0, 0, n) - &mono(e, m, 0);
            let ent = |i: usize, j: usize| -> Poly {
                match (i, j) {
                    (0, 3) => mono(0, (q + 1) * m, 0),
                    (0, 4) => -&big_p,
                    (1, 2) => mono(0, b - q * m + 1, 0),
                    (1, 3) => -mono(a - q * e + 1, 0, 0),
                    (2, 3) => big_q.clone(),
                    (2, 4) => mono((q + 1) * e, 0, 0),
                    _ => zero.clone(),
                }
            };
            SkewPolyMatrix::from_upper(5, 3, ent)
        }
        CaseTag::Other => {
            let big_p = p_poly(p)?;
            let ent = |i: usize, j: usize| -> Poly {
                match (i, j) {
                    (0, 2) => -mono((q + 1) * e, 0, 0),
                    (0, 4) => big_p.clone(),
                    (1, 2) => -mono(0, 0, n - r),
                    (1, 3) => mono(a - q * e + 1, 0, 0),
                    (1, 4) => -mono(0, (q + 1) * m, 0),
                    (2, 3) => -mono(0, b - q * m + 1, 0),
                    _ => zero.clone(),
                }
            };
            SkewPolyMatrix::from_upper(5, 3, ent)
        }
    }
}

/// Leading-term ideal of the generators under an order with `z > x` and
/// `z > y`, minimalised.
pub fn initial_ideal_formula(p: &Binomial3Params) -> Result<Vec<Monomial>> {
    let (a, b, c, e, m) = (p.a, p.b, p.c, p.e, p.m);
    let (n, q) = (p.n(), p.q());
    let mo = |x, y, z| Monomial::new(&[x, y, z]);
    let list = match classify(p) {
        CaseTag::VarSplit => {
            return Err(Error::NotApplicable(format!("{p}: e = 0 or m = 0")));
        }
        CaseTag::CiP => vec![mo(a + e + 1, 0, 0), mo(0, b + m + 1, 0), mo(0, 0, c + 1)],
        CaseTag::Type3 => vec![
            mo(a + e + 1, 0, 0),
            mo(0, b + m + 1, 0),
            mo(0, 0, c + n + 1),
            mo(a - (q + 1) * e + 1, 0, (q + 1) * n),
            mo(0, b - (q + 1) * m + 1, (q + 1) * n),
            mo(a - q * e + 1, 0, c + 1),
            mo(0, b - q * m + 1, c + 1),
        ],
        CaseTag::R0 => vec![
            mo(a + e + 1, 0, 0),
            mo(0, b + m + 1, 0),
            mo(0, 0, n + c + 1),
            mo(a - q * e + 1, 0, c + 1),
            mo(0, b - q * m + 1, c + 1),
        ],
        CaseTag::Other => vec![
            mo(a + e + 1, 0, 0),
            mo(0, b + m + 1, 0),
            mo(0, 0, n * (q + 1)),
            mo(a - q * e + 1, 0, c + 1),
            mo(0, b - q * m + 1, c + 1),
        ],
    };
    Ok(minimalize(list))
}

/// Graded Betti numbers of a codimension-three quotient `R/I`, with
/// `β_{0,0} = 1` implicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiTable {
    entries: BTreeMap<(u32, u32), usize>,
}

impl BettiTable {
    /// Builds the table from twist lists of the first and second syzygy
    /// modules and the top twist.
    pub fn from_twists(first: &[u32], second: &[u32], top: u32) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((0, 0), 1);
        for &t in first {
            *entries.entry((1, t)).or_insert(0) += 1;
        }
        for &t in second {
            *entries.entry((2, t)).or_insert(0) += 1;
        }
        entries.insert((3, top), 1);
        BettiTable { entries }
    }

    /// Koszul complex of a complete intersection with the given degrees.
    pub fn koszul(degrees: &[u32; 3]) -> Self {
        let [x, y, z] = *degrees;
        Self::from_twists(&[x, y, z], &[x + y, x + z, y + z], x + y + z)
    }

    pub fn beta(&self, i: u32, j: u32) -> usize {
        self.entries.get(&(i, j)).copied().unwrap_or(0)
    }

    /// Sorted multiset of twists in homological degree `i`.
    pub fn degrees(&self, i: u32) -> Vec<u32> {
        self.entries
            .iter()
            .filter(|((h, _), _)| *h == i)
            .flat_map(|((_, j), &k)| std::iter::repeat(*j).take(k))
            .collect()
    }

    pub fn total(&self, i: u32) -> usize {
        self.degrees(i).len()
    }

    pub fn entries(&self) -> &BTreeMap<(u32, u32), usize> {
        &self.entries
    }

    /// `β_{1,j} = β_{2,D-j}` where `D` is the top twist.
    pub fn is_self_dual(&self) -> bool {
        let top = self.degrees(3);
        if top.len() != 1 {
            return false;
        }
        let mut dual: Vec<u32> = self.degrees(1).iter().map(|j| top[0] - j).collect();
        dual.sort();
        dual == self.degrees(2)
    }

    /// `sum_i (-1)^i sum_j β_{ij} t^j / (1 - t)^3`.
    pub fn hilbert_series(&self) -> HilbertSeries {
        let top = self.entries.keys().map(|(_, j)| *j).max().unwrap_or(0) as usize;
        let mut num = vec![0i64; top + 1];
        for (&(i, j), &k) in &self.entries {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            num[j as usize] += sign * k as i64;
        }
        HilbertSeries::from_rational(num, 3)
    }
}

/// Betti table read off the resolutions of each case.
pub fn betti_table(p: &Binomial3Params) -> Result<BettiTable> {
    let (a, b, c, e, m) = (p.a, p.b, p.c, p.e, p.m);
    let (n, q, r) = (p.n(), p.q(), p.r());
    let top = p.socle_degree() + 3;
    let table = match classify(p) {
        CaseTag::VarSplit => {
            let mut degs: Vec<u32> = ann_generators(p)?.iter().map(|g| g.degree().expect("nonzero")).collect();
            degs.sort();
            BettiTable::koszul(&[degs[0], degs[1], degs[2]])
        }
        CaseTag::CiP => BettiTable::from_twists(
            &[a + e + 1, b + m + 1, c + 1],
            &[a + b + e + m + 2, a + c + e + 2, b + c + m + 2],
            top,
        ),
        CaseTag::Type3 => BettiTable::from_twists(
            &[
                a + e + 1,
                b + m + 1,
                n + c + 1,
                b + (q + 1) * e + 1,
                a + (q + 1) * m + 1,
                a + q * m + r + 1,
                b + q * e + r + 1,
            ],
            &[
                b + c + m + 2,
                a + c + e + 2,
                a + b + 2,
                a + (q + 1) * m + r + 1,
                b + (q + 1) * e + r + 1,
                b + (q + 1) * e + m + 1,
                a + (q + 1) * m + e + 1,
            ],
            top,
        ),
        CaseTag::R0 => BettiTable::from_twists(
            &[a + e + 1, b + m + 1, a + q * m + 1, b + q * e + 1, c + n + 1],
            &[b + c + m + 2, a + c + e + 2, b + (q + 1) * e + m + 1, a + (q + 1) * m + e + 1, a + b + 2],
            top,
        ),
        CaseTag::Other => BettiTable::from_twists(
            &[a + e + 1, b + m + 1, a + q * m + r + 1, b + q * e + r + 1, c + n - r + 1],
            &[b + c + m + 2, a + c + e + 2, b + (q + 1) * e + m + 1, a + (q + 1) * m + e + 1, a + b + r + 2],
            top,
        ),
    };
    Ok(table)
}

/// Koszul twists `(first, second)` of a three-generator ideal.
pub fn koszul_twists(degrees: [u32; 3]) -> (Vec<u32>, Vec<u32>) {
    let [x, y, z] = degrees;
    (vec![x, y, z], vec![y + z, x + z, x + y])
}

/// Numerator of the Hilbert series of a complete intersection.
pub fn complete_intersection_numerator(degrees: &[u32]) -> Vec<i64> {
    product(degrees.iter().map(|&d| crate::hilbert::one_minus_t_pow(d)))
}
