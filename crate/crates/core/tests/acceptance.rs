//! Acceptance suite. Each test prints one `PASS`/`FAIL` line with its
//! evidence and then asserts; all comparisons are exact.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::{Duration, Instant};

use ::apolar::apolar::oracle_h_vector;
use ::apolar::binomial::{
    ann_generators, betti_table, dual_generator, initial_ideal_formula, is_complete_intersection, sweep_grid,
    Binomial3Params, CaseTag,
};
use ::apolar::groebner::{buchberger, ideals_equal, initial_ideal, is_groebner};
use ::apolar::lefschetz::{
    hessian, hessian_determinant, hessian_zero_orders, mid_map_behaviour, slp_verdict, wlp_verdict, Holds, Method,
    QuotientAlgebra, Strategy,
};
use ::apolar::pfaffian::{pfaffian, poly_determinant};
use ::apolar::report::{codim_n_dual, z_first_orders};
use ::apolar::structure::{connected_sum_hilbert, doubling_verify, hf_of_u, u_quotient_hilbert, ConnectedSumSpec};
use ::apolar::{contract, parse_poly, ApolarAlgebra, GradedIdeal, HilbertSeries, LinearForm, Monomial, Poly, Rational};
use proptest::prelude::{prop_assert_eq, Strategy as _};
use proptest::test_runner::{Config, TestRunner};
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn report(id: u32, name: &str, outcome: Outcome) {
    match &outcome {
        Ok(detail) => println!("acceptance {id:02} {name}: PASS ({detail})"),
        Err(why) => println!("acceptance {id:02} {name}: FAIL ({why})"),
    }
    if let Err(why) = outcome {
        panic!("{name}: {why}");
    }
}

fn ensure(cond: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(why())
    }
}

fn grid() -> Vec<Binomial3Params> {
    sweep_grid(3, 2)
}

fn oracle(p: &Binomial3Params) -> ApolarAlgebra {
    ApolarAlgebra::new(dual_generator(p)).expect("homogeneous")
}

fn series(h: &[usize]) -> HilbertSeries {
    HilbertSeries::from_h_vector(&h.iter().map(|&x| x as i64).collect::<Vec<_>>())
}

/// Collects per-point failures in grid order.
fn over_grid(f: impl Fn(&Binomial3Params) -> Result<(), String> + Sync) -> Result<usize, String> {
    let g = grid();
    let bad: Vec<String> = g.par_iter().filter_map(|p| f(p).err().map(|e| format!("{p}: {e}"))).collect();
    match bad.first() {
        None => Ok(g.len()),
        Some(first) => Err(format!("{} of {} points fail, first {first}", bad.len(), g.len())),
    }
}

fn p4(s: &str) -> Poly {
    parse_poly(s, 4).unwrap()
}

/// Looks for a simultaneous row/column permutation and one scalar taking
/// `a` to `b`.
fn equal_up_to_permutation_and_scalar(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Option<(Vec<usize>, Rational)> {
    let n = a.len();
    if b.len() != n {
        return None;
    }
    let mut perm: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut scalar: Option<Rational> = None;
    fn rec(
        a: &[Vec<Poly>],
        b: &[Vec<Poly>],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        scalar: &mut Option<Rational>,
    ) -> bool {
        let i = perm.len();
        if i == a.len() {
            return true;
        }
        for cand in 0..a.len() {
            if used[cand] {
                continue;
            }
            perm.push(cand);
            let saved = scalar.clone();
            let ok = (0..=i).all(|j| {
                let x = &a[perm[i]][perm[j]];
                let y = &b[i][j];
                if x.is_zero() || y.is_zero() {
                    return x.is_zero() && y.is_zero();
                }
                let (m, c) = y.terms().next().expect("nonzero");
                let ratio = x.coeff(m) / c;
                if y.scale(&ratio) != *x {
                    return false;
                }
                match scalar {
                    Some(s) => *s == ratio,
                    None => {
                        *scalar = Some(ratio);
                        true
                    }
                }
            });
            if ok {
                used[cand] = true;
                if rec(a, b, perm, used, scalar) {
                    return true;
                }
                used[cand] = false;
            }
            *scalar = saved;
            perm.pop();
        }
        false
    }
    rec(a, b, &mut perm, &mut used, &mut scalar).then(|| (perm, scalar.unwrap_or_else(|| Rational::from_integer(1.into()))))
}

fn failure_example() -> Outcome {
    let start = Instant::now();
    let f = p4("x^3*y*z - x*y^3*t");
    let alg = ApolarAlgebra::new(f).map_err(|e| e.to_string())?;
    ensure(alg.h_vector() == [1, 4, 7, 7, 4, 1], || format!("h-vector {:?}", alg.h_vector()))?;

    let gens = alg.ann_min_gens();
    let listed: Vec<Poly> = ["z^2", "t^2", "t*z", "x^2*t", "y^2*z", "x^2*z + y^2*t", "y^4", "x^2*y^2", "x^4"]
        .iter()
        .map(|s| p4(s))
        .collect();
    ensure(gens.len() == 9, || format!("{} minimal generators", gens.len()))?;
    let mut got_degs: Vec<u32> = gens.iter().map(|(d, _)| *d).collect();
    let mut want_degs: Vec<u32> = listed.iter().map(|g| g.degree().unwrap()).collect();
    got_degs.sort();
    want_degs.sort();
    ensure(got_degs == want_degs, || format!("generator degrees {got_degs:?}"))?;
    let same = ideals_equal(
        &GradedIdeal::new(4, gens.into_iter().map(|(_, g)| g).collect()).unwrap(),
        &GradedIdeal::new(4, listed).unwrap(),
    )
    .map_err(|e| e.to_string())?;
    ensure(same, || "annihilator differs from the listed generators".into())?;

    let h = hessian(&alg, 2).map_err(|e| e.to_string())?;
    ensure(h.size() == 7 && h.is_symmetric(), || format!("Hessian size {}", h.size()))?;
    ensure(hessian_determinant(&h).is_zero(), || "Hessian determinant is not identically zero".into())?;
    let displayed: Vec<Vec<Poly>> = [
        ["0", "y", "x", "z", "0", "0", "0"],
        ["y", "0", "0", "x", "0", "0", "0"],
        ["x", "0", "0", "0", "0", "0", "0"],
        ["z", "x", "0", "0", "0", "-y", "-t"],
        ["0", "0", "0", "0", "0", "0", "-y"],
        ["0", "0", "0", "-y", "0", "0", "-x"],
        ["0", "0", "0", "-t", "-y", "-x", "0"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| p4(s).scale(&Rational::from_integer(6.into()))).collect())
    .collect();
    let (perm, scalar) = equal_up_to_permutation_and_scalar(&h.ordinary_entries(), &displayed)
        .ok_or("computed Hessian is not the displayed one up to order and scale")?;

    let v = wlp_verdict(&alg, &Strategy::default());
    ensure(v.holds == Holds::False && v.method == Method::Hessian, || format!("verdict {v}"))?;
    let forms = Strategy::default().forms(4);
    let ranks: Vec<usize> = forms.iter().map(|l| alg.mult_rank(l, 2, 1)).collect();
    ensure(ranks.iter().all(|&r| r <= 6), || format!("ranks A2 -> A3 {ranks:?}"))?;
    ensure(forms.len() == 6, || "expected the sum of variables and 5 random forms".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "h (1,4,7,7,4,1), 9 generators, det Hess^2 = 0, displayed Hessian via order {perm:?} times {scalar}, WLP fails via Hessian, ranks {ranks:?}, {:.2}s",
        elapsed.as_secs_f64()
    ))
}

#[test]
fn a01_failure_example() {
    report(1, "failure example", failure_example());
}

fn closed_form_generators() -> Outcome {
    let mut per_case: BTreeMap<CaseTag, usize> = BTreeMap::new();
    for p in grid() {
        *per_case.entry(p.case()).or_default() += 1;
    }
    let n = over_grid(|p| {
        let alg = oracle(p);
        let o: Vec<Poly> = alg.ann_min_gens().into_iter().map(|(_, g)| g).collect();
        let want = p.case().generator_count();
        ensure(o.len() == want, || format!("oracle {} generators, case {} expects {want}", o.len(), p.case()))?;
        let formula = ann_generators(p).map_err(|e| e.to_string())?;
        ensure(formula.len() == want, || format!("formula lists {} generators", formula.len()))?;
        let eq = ideals_equal(&GradedIdeal::new(3, formula).unwrap(), &GradedIdeal::new(3, o).unwrap())
            .map_err(|e| e.to_string())?;
        ensure(eq, || "formula ideal differs from the annihilator".into())?;
        ensure(alg.socle_degree() == p.a + p.b + p.c + p.n(), || format!("socle degree {}", alg.socle_degree()))
    })?;
    ensure(n == 272, || format!("grid has {n} points"))?;
    ensure(per_case.len() == 5, || format!("cases present {per_case:?}"))?;
    Ok(format!("{n} points, cases {per_case:?}"))
}

#[test]
fn a02_closed_form_generators() {
    report(2, "closed-form generators on the grid", closed_form_generators());
}

fn groebner_bases() -> Outcome {
    let orders = z_first_orders();
    let applicable = grid().iter().filter(|p| initial_ideal_formula(p).is_ok()).count();
    let split_gb = std::sync::atomic::AtomicUsize::new(0);
    let n = over_grid(|p| {
        let gens = ann_generators(p).map_err(|e| e.to_string())?;
        let formula = initial_ideal_formula(p);
        for ord in &orders {
            let gb = is_groebner(&gens, ord).map_err(|e| e.to_string())?;
            if formula.is_err() {
                // split points: generators come from the two-variable factor
                if gb {
                    split_gb.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                }
                continue;
            }
            ensure(gb, || format!("not a Groebner basis under {ord}"))?;
            let computed = initial_ideal(&buchberger(&gens, ord, p.socle_degree() + 1).unwrap().basis, ord).unwrap();
            let want = formula.as_ref().unwrap();
            ensure(&computed == want, || format!("initial ideal under {ord}: {computed:?} vs {want:?}"))?;
        }
        Ok(())
    })?;
    let split = n - applicable;
    Ok(format!(
        "{applicable} points with e,m > 0 under {} z-first orders; {split} split points have no closed form, {} of {} (point, order) pairs there are Groebner bases",
        orders.len(),
        split_gb.into_inner(),
        split * orders.len()
    ))
}

#[test]
fn a03_groebner_bases() {
    report(3, "Groebner bases and initial ideals", groebner_bases());
}

fn complete_intersections() -> Outcome {
    let ci = grid().iter().filter(|p| is_complete_intersection(p)).count();
    let n = over_grid(|p| {
        let pred = is_complete_intersection(p);
        let formula = ann_generators(p).map_err(|e| e.to_string())?.len() == 3;
        let oracle_three = oracle(p).ann_min_gens().len() == 3;
        ensure(pred == formula && formula == oracle_three, || {
            format!("predicate {pred}, formula count 3: {formula}, oracle count 3: {oracle_three}")
        })
    })?;
    Ok(format!("{n} points, {ci} complete intersections, three-way agreement"))
}

#[test]
fn a04_complete_intersections() {
    report(4, "complete intersection criterion", complete_intersections());
}

fn betti_tables() -> Outcome {
    let n = over_grid(|p| {
        let alg = oracle(p);
        let t = betti_table(p).map_err(|e| e.to_string())?;
        let mut degs: Vec<u32> = alg.ann_min_gens().iter().map(|(d, _)| *d).collect();
        degs.sort();
        ensure(t.degrees(1) == degs, || format!("β1 {:?} vs oracle {degs:?}", t.degrees(1)))?;
        let top = p.socle_degree() + 3;
        ensure(t.degrees(3) == [top], || format!("β3 {:?}", t.degrees(3)))?;
        let mut dual: Vec<u32> = t.degrees(1).iter().map(|j| top - j).collect();
        dual.sort();
        ensure(dual == t.degrees(2), || format!("β2 {:?} is not dual to β1", t.degrees(2)))?;
        let euler = t.hilbert_series();
        let h = series(alg.h_vector());
        ensure(euler == h, || format!("Euler characteristic {euler} vs {h}"))
    })?;
    Ok(format!("{n} points: β1 = generator degrees, β2 dual, Euler sum = h-vector"))
}

#[test]
fn a05_betti_tables() {
    report(5, "Betti tables", betti_tables());
}

fn strong_lefschetz() -> Outcome {
    let strategy = Strategy::default();
    let n = over_grid(|p| {
        let alg = oracle(p);
        let v = slp_verdict(&alg, &strategy);
        ensure(v.holds == Holds::True, || format!("verdict {v}"))?;
        let coeffs: Vec<Rational> = v.witness.as_ref().unwrap().iter().map(|s| Rational::from_str(s).unwrap()).collect();
        let zeros = hessian_zero_orders(&alg, &LinearForm::new(coeffs));
        ensure(zeros.is_empty(), || format!("Hessians of orders {zeros:?} vanish at the witness"))
    })?;
    Ok(format!("{n} points hold with a witness form; every Hessian is nonzero at it"))
}

#[test]
fn a06_strong_lefschetz() {
    report(6, "strong Lefschetz on the grid", strong_lefschetz());
}

fn connected_sums() -> Outcome {
    let strategy = Strategy::default();
    let small_g: Vec<Binomial3Params> = grid()
        .into_iter()
        .filter(|p| p.a + p.b + p.c < (p.socle_degree() - 1) / 2)
        .collect();
    let bad: Vec<String> = small_g
        .par_iter()
        .filter(|p| wlp_verdict(&oracle(p), &strategy).holds != Holds::True)
        .map(|p| p.to_string())
        .collect();
    ensure(bad.is_empty(), || format!("WLP not confirmed at {bad:?}"))?;
    ensure(!small_g.is_empty(), || "no instance with deg g < ⌊(d-1)/2⌋".into())?;

    let applicable = std::sync::atomic::AtomicUsize::new(0);
    over_grid(|p| {
        let Ok(spec) = ConnectedSumSpec::from_binomial(p) else { return Ok(()) };
        applicable.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let cs = connected_sum_hilbert(&spec);
        let h = series(oracle(p).h_vector());
        ensure(cs == h, || format!("connected sum series {cs} vs {h}"))
    })?;
    let spec = ConnectedSumSpec::new(
        Monomial::new(&[1, 1, 0, 0]),
        Monomial::new(&[2, 0, 1, 0]),
        Monomial::new(&[0, 2, 0, 1]),
    )
    .map_err(|e| e.to_string())?;
    let four = connected_sum_hilbert(&spec);
    ensure(four.h_vector() == Some(&[1, 4, 7, 7, 4, 1][..]), || format!("four-variable series {four}"))?;
    let direct = oracle_h_vector(&spec.dual_generator()).unwrap();
    ensure(series(&direct) == four, || format!("oracle {direct:?}"))?;
    Ok(format!(
        "WLP holds on all {} points with deg g < ⌊(d-1)/2⌋; series identity on {} applicable points and XY(X^2Z - Y^2T) -> {four}",
        small_g.len(),
        applicable.into_inner()
    ))
}

#[test]
fn a07_connected_sums() {
    report(7, "connected sums and weak Lefschetz", connected_sums());
}

fn u_series() -> Outcome {
    let valid = std::sync::atomic::AtomicUsize::new(0);
    over_grid(|p| {
        let Ok(h) = hf_of_u(p.a, p.b, p.c, p.e, p.m) else { return Ok(()) };
        valid.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let counted = u_quotient_hilbert(p.a, p.b, p.c, p.e, p.m).unwrap();
        ensure(h == counted, || format!("closed form {h} vs standard monomials {counted}"))?;
        ensure(h.is_symmetric() && h.is_unimodal(), || format!("{h} not symmetric unimodal"))?;
        ensure(h.top_degree() == Some(p.a + p.b + p.c + p.e + p.m), || format!("top degree of {h}"))
    })?;
    let valid = valid.into_inner();
    ensure(valid > 0, || "no valid parameters".into())?;
    Ok(format!("{valid} valid grid parameters: closed form = monomial count, symmetric, unimodal"))
}

#[test]
fn a08_u_series() {
    report(8, "Hilbert function of U", u_series());
}

fn doublings() -> Outcome {
    let ci = std::sync::atomic::AtomicUsize::new(0);
    let n = over_grid(|p| {
        let cert = doubling_verify(p).map_err(|e| e.to_string())?;
        let block = cert.relation_twists.len();
        if is_complete_intersection(p) {
            ci.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            ensure(block == 1, || format!("complete intersection with block size {block}"))?;
        } else {
            ensure(block >= 2, || format!("presentation matrix block size {block}"))?;
        }
        ensure(cert.codim_two, || format!("R/J series {}", cert.quotient_j))?;
        ensure(cert.resolution_checked, || "Hilbert-Burch series disagrees with R/J".into())?;
        ensure(cert.residual.is_zero(), || format!("residual {}", cert.residual))
    })?;
    let ci = ci.into_inner();
    Ok(format!("{} presentation-matrix certificates, {ci} complete intersections via Koszul, all residuals 0", n - ci))
}

#[test]
fn a09_doublings() {
    report(9, "doubling certificates", doublings());
}

fn codim_n_family() -> Outcome {
    let mut notes = Vec::new();
    for n in 4..=6 {
        let start = Instant::now();
        let alg = ApolarAlgebra::new(codim_n_dual(n).unwrap()).map_err(|e| e.to_string())?;
        let v = wlp_verdict(&alg, &Strategy::default());
        let elapsed = start.elapsed();
        ensure(v.holds == Holds::False && v.certificate.is_some(), || format!("n = {n}: {v}"))?;
        ensure(elapsed < Duration::from_secs(300), || format!("n = {n} took {elapsed:?}"))?;
        notes.push(format!("n={n} {:?} {:.2}s", v.method, elapsed.as_secs_f64()));
    }
    Ok(notes.join(", "))
}

#[test]
fn a10_codim_n_family() {
    report(10, "weak Lefschetz failure for n = 4, 5, 6", codim_n_family());
}

fn poly3() -> impl proptest::strategy::Strategy<Value = Poly> {
    proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), -3i64..4), 0..5).prop_map(|terms| {
        Poly::from_terms(3, terms.into_iter().map(|((a, b, c), k)| (Monomial::new(&[a, b, c]), Rational::from_integer(k.into()))))
    })
}

fn form3(deg: std::ops::Range<u32>) -> impl proptest::strategy::Strategy<Value = Poly> {
    deg.prop_flat_map(|d| {
        proptest::collection::vec(((0..=d, 0..=d), 1i64..5), 1..5).prop_map(move |terms| {
            Poly::from_terms(
                3,
                terms
                    .into_iter()
                    .filter(|((a, b), _)| a + b <= d)
                    .map(|((a, b), k)| (Monomial::new(&[a, b, d - a - b]), Rational::from_integer(k.into()))),
            )
        })
    })
    .prop_filter("nonzero", |p| !p.is_zero())
}

fn skew(size: usize) -> impl proptest::strategy::Strategy<Value = Vec<Vec<Poly>>> {
    proptest::collection::vec(poly3(), size * (size - 1) / 2).prop_map(move |upper| {
        let mut m = vec![vec![Poly::zero(3); size]; size];
        let mut it = upper.into_iter();
        for i in 0..size {
            for j in i + 1..size {
                let e = it.next().unwrap();
                m[j][i] = -&e;
                m[i][j] = e;
            }
        }
        m
    })
}

fn run(name: &str, cases: u32, f: impl FnOnce(&mut TestRunner) -> Result<(), String>) -> Result<String, String> {
    let mut runner = TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    f(&mut runner).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name} x{cases}"))
}

fn invariants() -> Outcome {
    let start = Instant::now();
    let mut done = Vec::new();
    done.push(run("contraction laws", 128, |r| {
        r.run(&(poly3(), poly3(), form3(0..6)), |(f, g, big)| {
            prop_assert_eq!(contract(&(&f * &g), &big).unwrap(), contract(&f, &contract(&g, &big).unwrap()).unwrap());
            prop_assert_eq!(
                contract(&(&f + &g), &big).unwrap(),
                &contract(&f, &big).unwrap() + &contract(&g, &big).unwrap()
            );
            prop_assert_eq!(contract(&Poly::one(3), &big).unwrap(), big.clone());
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);
    done.push(run("h-vector symmetry", 64, |r| {
        r.run(&form3(1..6), |big| {
            let h = oracle_h_vector(&big).unwrap();
            let rev: Vec<usize> = h.iter().rev().copied().collect();
            prop_assert_eq!(h, rev);
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);
    done.push(run("Pf^2 = det", 64, |r| {
        r.run(&(1usize..4).prop_flat_map(|h| skew(2 * h)), |m| {
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, poly_determinant(&m, 3));
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);
    done.push(run("mid-map injective iff surjective", 64, |r| {
        r.run(&(form3(1..7), proptest::collection::vec(-3i64..4, 3)), |(big, l)| {
            let alg = ApolarAlgebra::new(big).unwrap();
            let l = LinearForm::from_ints(&l);
            if let Some((inj, surj)) = mid_map_behaviour(&alg, &l) {
                prop_assert_eq!(inj, surj);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
    })?);

    // if R/in(I) has the SLP then so does R/I
    let strategy = Strategy::default();
    let tested: Vec<(bool, bool)> = grid()
        .par_iter()
        .filter_map(|p| {
            let init = initial_ideal_formula(p).ok()?;
            let quotient = QuotientAlgebra::new(GradedIdeal::from_monomials(3, &init).unwrap(), p.socle_degree() + 1).ok()?;
            let initial_slp = slp_verdict(&quotient, &strategy).holds == Holds::True;
            Some((initial_slp, slp_verdict(&oracle(p), &strategy).holds == Holds::True))
        })
        .collect();
    let violations = tested.iter().filter(|(i, a)| *i && !*a).count();
    ensure(violations == 0, || format!("{violations} instances with SLP initial ideal but no SLP"))?;
    let antecedents = tested.iter().filter(|(i, _)| *i).count();
    done.push(format!("initial-ideal implication on {} instances ({antecedents} with SLP initial ideal)", tested.len()));

    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{}; {:.1}s", done.join(", "), elapsed.as_secs_f64()))
}

#[test]
fn a11_invariants() {
    report(11, "property suites", invariants());
}
