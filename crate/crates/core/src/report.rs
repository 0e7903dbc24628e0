//! Per-instance verification checks for the binomial family and the
//! sweep driver behind the command line.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::apolar::ApolarAlgebra;
use crate::binomial::{
    ann_generators, betti_table, dual_generator, initial_ideal_formula, is_complete_intersection, pfaffian_matrix,
    sweep_grid, Binomial3Params,
};
use crate::error::{Error, Result};
use crate::groebner::{buchberger, ideals_equal, initial_ideal, is_groebner, GradedIdeal};
use crate::hilbert::HilbertSeries;
use crate::lefschetz::{hessian_zero_orders, slp_verdict, Holds, Strategy};
use crate::order::MonomialOrder;
use crate::parse::VarNames;
use crate::poly::{LinearForm, Monomial, Poly, Rational};
use crate::structure::{
    connected_sum_hilbert, doubling_verify, hf_of_u, koszul_skew_matrix, u_quotient_hilbert, ConnectedSumSpec,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Indeterminate,
    /// The check has no content for this instance.
    Skip,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub status: Status,
    pub detail: String,
}

impl CheckResult {
    fn pass(detail: impl Into<String>) -> Self {
        CheckResult {
            status: Status::Pass,
            detail: detail.into(),
        }
    }

    fn fail(detail: impl Into<String>) -> Self {
        CheckResult {
            status: Status::Fail,
            detail: detail.into(),
        }
    }

    fn skip(detail: impl Into<String>) -> Self {
        CheckResult {
            status: Status::Skip,
            detail: detail.into(),
        }
    }

    fn indeterminate(detail: impl Into<String>) -> Self {
        CheckResult {
            status: Status::Indeterminate,
            detail: detail.into(),
        }
    }

    fn from_error(e: Error) -> Self {
        CheckResult::fail(format!("error: {e}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Ann,
    Gb,
    Pfaffian,
    Betti,
    Slp,
    Doubling,
    Hilbert,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Ann,
        Check::Gb,
        Check::Pfaffian,
        Check::Betti,
        Check::Slp,
        Check::Doubling,
        Check::Hilbert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Ann => "ann",
            Check::Gb => "gb",
            Check::Pfaffian => "pfaffian",
            Check::Betti => "betti",
            Check::Slp => "slp",
            Check::Doubling => "doubling",
            Check::Hilbert => "hilbert",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s.trim())
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unknown check `{s}`"),
            })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub id: String,
    pub params: Binomial3Params,
    pub case: String,
    pub checks: BTreeMap<&'static str, CheckResult>,
    pub ms: u64,
}

impl Report {
    pub fn failed(&self) -> bool {
        self.checks.values().any(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub max_abc: u32,
    pub max_em: u32,
    pub checks: Vec<Check>,
    pub strategy: Strategy,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    /// Per-instance budget; checks not started in time are reported as
    /// indeterminate.
    pub max_seconds: Option<f64>,
    /// Instance whose closed-form generator list is deliberately damaged,
    /// to exercise the failure path.
    pub corrupt: Option<Binomial3Params>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_abc: 3,
            max_em: 2,
            checks: Check::ALL.to_vec(),
            strategy: Strategy::default(),
            jobs: 0,
            max_seconds: None,
            corrupt: None,
        }
    }
}

/// The four monomial orders with `z` largest used for the Groebner checks.
pub fn z_first_orders() -> Vec<MonomialOrder> {
    [[2, 0, 1], [2, 1, 0]]
        .iter()
        .flat_map(|p| [MonomialOrder::grevlex(p), MonomialOrder::lex(p)])
        .map(|o| o.expect("valid priority"))
        .collect()
}

fn names() -> VarNames {
    VarNames::default_for(3)
}

fn fmt_monos(ms: &[Monomial]) -> String {
    let n = names();
    ms.iter().map(|m| n.format_monomial(m)).collect::<Vec<_>>().join(", ")
}

fn i64_h(h: &[usize]) -> Vec<i64> {
    h.iter().map(|&x| x as i64).collect()
}

/// Shared per-instance data.
struct Instance {
    params: Binomial3Params,
    oracle: ApolarAlgebra,
    generators: Vec<Poly>,
}

impl Instance {
    fn new(params: Binomial3Params, corrupt: bool) -> Result<Self> {
        let oracle = ApolarAlgebra::new(dual_generator(&params))?;
        let mut generators = ann_generators(&params)?;
        if corrupt {
            // multiplying the last generator by x drops it from the ideal
            let last = generators.pop().expect("at least three generators");
            generators.push(last.mul_monomial(&Monomial::var(3, 0)));
        }
        Ok(Instance {
            params,
            oracle,
            generators,
        })
    }

    fn oracle_generators(&self) -> Vec<(u32, Poly)> {
        self.oracle.ann_min_gens()
    }

    fn oracle_series(&self) -> HilbertSeries {
        HilbertSeries::from_h_vector(&i64_h(self.oracle.h_vector()))
    }
}

fn check_ann(inst: &Instance) -> Result<CheckResult> {
    let p = &inst.params;
    let oracle = inst.oracle_generators();
    let expected = p.case().generator_count();
    if oracle.len() != expected {
        return Ok(CheckResult::fail(format!(
            "minimal generator count: expected {expected} for {}, oracle found {}",
            p.case(),
            oracle.len()
        )));
    }
    if is_complete_intersection(p) != (oracle.len() == 3) {
        return Ok(CheckResult::fail(format!(
            "complete intersection predicate {} but oracle has {} generators",
            is_complete_intersection(p),
            oracle.len()
        )));
    }
    if inst.oracle.socle_degree() != p.socle_degree() {
        return Ok(CheckResult::fail(format!(
            "socle degree: expected {}, got {}",
            p.socle_degree(),
            inst.oracle.socle_degree()
        )));
    }
    let formula = GradedIdeal::new(3, inst.generators.clone())?;
    let oracle_ideal = GradedIdeal::new(3, oracle.into_iter().map(|(_, g)| g).collect())?;
    let n = names();
    if let Some(g) = oracle_ideal.missing_from(&formula)?.first() {
        return Ok(CheckResult::fail(format!(
            "formula generator {} (degree {}) not in the annihilator",
            n.format(g),
            g.degree().unwrap_or(0)
        )));
    }
    if let Some(g) = formula.missing_from(&oracle_ideal)?.first() {
        return Ok(CheckResult::fail(format!(
            "annihilator generator {} (degree {}) not in the formula ideal",
            n.format(g),
            g.degree().unwrap_or(0)
        )));
    }
    Ok(CheckResult::pass(format!("{expected} generators, socle degree {}", p.socle_degree())))
}

fn check_gb(inst: &Instance) -> Result<CheckResult> {
    let p = &inst.params;
    let formula = match initial_ideal_formula(p) {
        Ok(f) => f,
        Err(Error::NotApplicable(why)) => return Ok(CheckResult::skip(why)),
        Err(e) => return Err(e),
    };
    for ord in z_first_orders() {
        if !is_groebner(&inst.generators, &ord)? {
            return Ok(CheckResult::fail(format!("generators are not a Groebner basis under {ord}")));
        }
        let gb = buchberger(&inst.generators, &ord, p.socle_degree() + 1)?;
        let computed = initial_ideal(&gb.basis, &ord)?;
        if computed != formula {
            return Ok(CheckResult::fail(format!(
                "initial ideal under {ord}: expected [{}], got [{}]",
                fmt_monos(&formula),
                fmt_monos(&computed)
            )));
        }
    }
    Ok(CheckResult::pass(format!("4 orders, initial ideal [{}]", fmt_monos(&formula))))
}

fn check_pfaffian(inst: &Instance) -> Result<CheckResult> {
    let p = &inst.params;
    let (matrix, label) = if is_complete_intersection(p) {
        (koszul_skew_matrix(&inst.generators)?, "Koszul")
    } else {
        (pfaffian_matrix(p)?, "presentation")
    };
    if matrix.graded_labels().is_none() {
        return Ok(CheckResult::fail("matrix admits no degree labels"));
    }
    let pf = GradedIdeal::new(3, matrix.sub_pfaffians().into_iter().filter(|f| !f.is_zero()).collect())?;
    let gens = GradedIdeal::new(3, inst.generators.clone())?;
    if !ideals_equal(&pf, &gens)? {
        return Ok(CheckResult::fail(format!(
            "sub-Pfaffians of the {}x{} {label} matrix differ from the generators",
            matrix.size(),
            matrix.size()
        )));
    }
    Ok(CheckResult::pass(format!("{}x{} {label} matrix", matrix.size(), matrix.size())))
}

fn check_betti(inst: &Instance) -> Result<CheckResult> {
    let table = betti_table(&inst.params)?;
    let mut degs: Vec<u32> = inst.oracle_generators().iter().map(|(d, _)| *d).collect();
    degs.sort();
    if table.degrees(1) != degs {
        return Ok(CheckResult::fail(format!(
            "first syzygy twists: table {:?}, oracle generator degrees {degs:?}",
            table.degrees(1)
        )));
    }
    if !table.is_self_dual() {
        return Ok(CheckResult::fail(format!(
            "not self-dual: β1 {:?}, β2 {:?}",
            table.degrees(1),
            table.degrees(2)
        )));
    }
    let euler = table.hilbert_series();
    let oracle = inst.oracle_series();
    if euler != oracle {
        return Ok(CheckResult::fail(format!("Euler characteristic {euler} but oracle {oracle}")));
    }
    Ok(CheckResult::pass(format!("β1 {:?}", table.degrees(1))))
}

fn check_slp(inst: &Instance, strategy: &Strategy) -> Result<CheckResult> {
    let v = slp_verdict(&inst.oracle, strategy);
    match v.holds {
        Holds::True => {}
        Holds::False => return Ok(CheckResult::fail(v.to_string())),
        Holds::Inconclusive => return Ok(CheckResult::indeterminate(v.to_string())),
    }
    let coeffs: Vec<Rational> = v
        .witness
        .as_ref()
        .expect("holding verdicts carry a witness")
        .iter()
        .map(|s| Rational::from_str(s).expect("witness prints rationals"))
        .collect();
    let l = LinearForm::new(coeffs);
    let zeros = hessian_zero_orders(&inst.oracle, &l);
    if !zeros.is_empty() {
        return Ok(CheckResult::fail(format!(
            "rank witness holds but Hessians of orders {zeros:?} vanish at it"
        )));
    }
    Ok(CheckResult::pass(format!(
        "witness ({}), Hessians nonzero",
        v.witness.unwrap_or_default().join(",")
    )))
}

fn check_doubling(inst: &Instance) -> Result<CheckResult> {
    match doubling_verify(&inst.params) {
        Ok(cert) if cert.validates() => Ok(CheckResult::pass(format!(
            "zero block on {:?}, J twists {:?} / {:?}",
            &cert.permutation[..cert.relation_twists.len()],
            cert.generator_twists,
            cert.relation_twists
        ))),
        Ok(cert) => Ok(CheckResult::fail(format!(
            "codim two {}, resolution {}, residual {}",
            cert.codim_two, cert.resolution_checked, cert.residual
        ))),
        Err(e @ Error::NotBlockCertified(_)) => Ok(CheckResult::indeterminate(e.to_string())),
        Err(e) => Err(e),
    }
}

fn check_hilbert(inst: &Instance) -> Result<CheckResult> {
    let p = &inst.params;
    let oracle = inst.oracle_series();
    if !oracle.is_symmetric() || !oracle.is_unimodal() {
        return Ok(CheckResult::fail(format!("oracle series {oracle} not symmetric unimodal")));
    }
    let mut notes = Vec::new();
    if let Ok(spec) = ConnectedSumSpec::from_binomial(p) {
        let cs = connected_sum_hilbert(&spec);
        if cs != oracle {
            return Ok(CheckResult::fail(format!("connected sum formula {cs}, oracle {oracle}")));
        }
        notes.push("connected sum");
    }
    if let Ok(u) = hf_of_u(p.a, p.b, p.c, p.e, p.m) {
        let counted = u_quotient_hilbert(p.a, p.b, p.c, p.e, p.m)?;
        if u != counted {
            return Ok(CheckResult::fail(format!("U closed form {u}, standard monomials {counted}")));
        }
        if u.top_degree() != Some(p.socle_degree()) || !u.is_symmetric() || !u.is_unimodal() {
            return Ok(CheckResult::fail(format!("U series {u} not symmetric unimodal of top degree {}", p.socle_degree())));
        }
        notes.push("U");
    }
    Ok(CheckResult::pass(format!("{oracle}; {}", if notes.is_empty() { "oracle only".to_string() } else { notes.join(", ") })))
}

fn run_check(inst: &Instance, check: Check, strategy: &Strategy) -> CheckResult {
    let r = match check {
        Check::Ann => check_ann(inst),
        Check::Gb => check_gb(inst),
        Check::Pfaffian => check_pfaffian(inst),
        Check::Betti => check_betti(inst),
        Check::Slp => check_slp(inst, strategy),
        Check::Doubling => check_doubling(inst),
        Check::Hilbert => check_hilbert(inst),
    };
    r.unwrap_or_else(CheckResult::from_error)
}

/// Runs the selected checks on one parameter point.
pub fn check_instance(
    params: &Binomial3Params,
    checks: &[Check],
    strategy: &Strategy,
    budget: Option<Duration>,
    corrupt: bool,
) -> Report {
    let start = Instant::now();
    let mut results = BTreeMap::new();
    match Instance::new(*params, corrupt) {
        Ok(inst) => {
            for &c in checks {
                let over = budget.is_some_and(|b| start.elapsed() > b);
                let r = if over {
                    CheckResult::indeterminate("budget")
                } else {
                    run_check(&inst, c, strategy)
                };
                results.insert(c.name(), r);
            }
        }
        Err(e) => {
            for &c in checks {
                results.insert(c.name(), CheckResult::from_error(e.clone()));
            }
        }
    }
    Report {
        id: params.to_string(),
        params: *params,
        case: params.case().to_string(),
        checks: results,
        ms: start.elapsed().as_millis() as u64,
    }
}

/// Reports for every grid point, in grid order.
pub fn sweep(config: &SweepConfig) -> Result<Vec<Report>> {
    let grid = sweep_grid(config.max_abc, config.max_em);
    let budget = config.max_seconds.map(Duration::from_secs_f64);
    let run = || -> Vec<Report> {
        grid.par_iter()
            .map(|p| check_instance(p, &config.checks, &config.strategy, budget, config.corrupt == Some(*p)))
            .collect()
    };
    if config.jobs == 0 {
        Ok(run())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        Ok(pool.install(run))
    }
}

/// Counts of each status per check.
pub fn summarize(reports: &[Report]) -> BTreeMap<&'static str, BTreeMap<&'static str, usize>> {
    let mut out: BTreeMap<&'static str, BTreeMap<&'static str, usize>> = BTreeMap::new();
    for r in reports {
        for (name, c) in &r.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "fail",
                Status::Indeterminate => "indeterminate",
                Status::Skip => "skip",
            };
            *out.entry(name).or_default().entry(status).or_default() += 1;
        }
    }
    out
}

/// `X_1 X_2 X_5 ⋯ X_n (X_1^{n-2} X_3 - X_2^{n-2} X_4)` in `n >= 4` variables.
pub fn codim_n_dual(n: usize) -> Result<Poly> {
    if n < 4 {
        return Err(Error::Precondition(format!("the family starts at n = 4, got {n}")));
    }
    let mut common = vec![1u32; n];
    common[2] = 0;
    common[3] = 0;
    let mut first = common.clone();
    first[0] += n as u32 - 2;
    first[2] = 1;
    let mut second = common;
    second[1] += n as u32 - 2;
    second[3] = 1;
    Ok(&Poly::monomial(Monomial::new(&first)) - &Poly::monomial(Monomial::new(&second)))
}
