use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;
use std::sync::mpsc;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use apolar::binomial::{ann_generators, dual_generator, Binomial3Params};
use apolar::groebner::{buchberger, ideals_equal, initial_ideal, is_groebner};
use apolar::lefschetz::{verdict, Holds, LefschetzVerdict, Property, Strategy};
use apolar::report::{codim_n_dual, summarize, sweep, Check, SweepConfig};
use apolar::structure::doubling_verify;
use apolar::{ApolarAlgebra, Error, GradedIdeal, MonomialOrder, Poly, VarNames};

#[derive(Parser)]
#[command(name = "apolar", version, about = "Annihilators, Groebner bases and Lefschetz verdicts for Macaulay dual generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Dual generator, e.g. "x^3*y*z - x*y^3*t"
    #[arg(long, conflicts_with = "params")]
    dual: Option<String>,
    /// Binomial parameters a,b,c,e,m for X^aY^bZ^c(Z^n - X^eY^m)
    #[arg(long)]
    params: Option<String>,
    /// Number of variables; inferred from the text when omitted
    #[arg(long)]
    nvars: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Hilbert function and minimal generators of the annihilator
    Ann {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
    /// Weak or strong Lefschetz verdict; exit 0 holds, 2 fails, 3 undecided
    Lefschetz {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = PropertyArg::Wlp)]
        property: PropertyArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, default_value_t = Strategy::default().seed)]
        seed: u64,
        /// Random linear forms tried after x_1 + ... + x_n
        #[arg(long, default_value_t = Strategy::default().random_forms)]
        forms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Verify the closed forms on a parameter grid, one JSON line per point
    Sweep {
        #[arg(long, default_value_t = 3)]
        max_abc: u32,
        #[arg(long, default_value_t = 2)]
        max_em: u32,
        /// Comma separated subset of ann,gb,pfaffian,betti,slp,doubling,hilbert
        #[arg(long)]
        checks: Option<String>,
        #[arg(long, default_value_t = Strategy::default().seed)]
        seed: u64,
        /// Worker threads (0: one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Per-instance budget; later checks become indeterminate
        #[arg(long)]
        max_seconds: Option<f64>,
        /// Damage the closed-form generators of this point (harness self-test)
        #[arg(long)]
        corrupt: Option<String>,
        /// Write JSON lines here instead of standard output
        #[arg(long)]
        output: Option<String>,
    },
    /// Weak Lefschetz failure for X_1X_2X_5...X_n(X_1^{n-2}X_3 - X_2^{n-2}X_4)
    Codimn {
        #[arg(long, default_value_t = 4)]
        from: usize,
        #[arg(long, default_value_t = 6)]
        to: usize,
        /// Largest n run without --extended
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long)]
        extended: bool,
        /// Budget per n
        #[arg(long, default_value_t = 300.0)]
        max_seconds: f64,
        #[arg(long, default_value_t = Strategy::default().seed)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Doubling certificate for a binomial parameter point
    Doubling {
        #[arg(long)]
        params: String,
        #[arg(long)]
        json: bool,
    },
    /// Groebner basis and initial ideal of generators or of a parameter point
    Gb {
        /// Generators
        gens: Vec<String>,
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        nvars: Option<usize>,
        /// Order as kind or kind:priority, e.g. grevlex:2,0,1
        #[arg(long, default_value = "grevlex:2,0,1")]
        order: String,
        /// Degree cap for S-pairs
        #[arg(long)]
        cap: Option<u32>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Wlp,
    Slp,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Rank,
    Hessian,
    Both,
}

type CliResult<T> = Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

/// Tries 3 variables, then 4, then `x1..xn` for growing `n`.
fn parse_any(text: &str, nvars: Option<usize>) -> CliResult<(Poly, VarNames)> {
    if let Some(n) = nvars {
        let names = VarNames::default_for(n);
        return names.parse(text).map(|p| (p, names)).map_err(err);
    }
    let mut first = None;
    for n in [3, 4].into_iter().chain(5..=16) {
        let names = VarNames::default_for(n);
        match names.parse(text) {
            Ok(p) => return Ok((p, names)),
            Err(e) => {
                first.get_or_insert(e);
            }
        }
    }
    Err(err(first.expect("tried at least once")))
}

struct Resolved {
    dual: Poly,
    names: VarNames,
    params: Option<Binomial3Params>,
}

fn resolve(input: &Input) -> CliResult<Resolved> {
    match (&input.dual, &input.params) {
        (Some(text), None) => {
            let (dual, names) = parse_any(text, input.nvars)?;
            Ok(Resolved { dual, names, params: None })
        }
        (None, Some(p)) => {
            let params = Binomial3Params::parse(p).map_err(err)?;
            Ok(Resolved {
                dual: dual_generator(&params),
                names: VarNames::default_for(3),
                params: Some(params),
            })
        }
        _ => Err("give exactly one of --dual or --params".into()),
    }
}

fn h_string(h: &[usize]) -> String {
    let v: Vec<String> = h.iter().map(|x| x.to_string()).collect();
    format!("({})", v.join(","))
}

fn cmd_ann(input: &Input, as_json: bool) -> CliResult<ExitCode> {
    let r = resolve(input)?;
    let alg = ApolarAlgebra::new(r.dual.clone()).map_err(err)?;
    let gens = alg.ann_min_gens();
    let ci = gens.len() == alg.nvars();
    let upper = r.names.uppercase();
    let agree = match r.params {
        Some(p) => {
            let formula = GradedIdeal::new(3, ann_generators(&p).map_err(err)?).map_err(err)?;
            let oracle = GradedIdeal::new(3, gens.iter().map(|(_, g)| g.clone()).collect()).map_err(err)?;
            Some(ideals_equal(&formula, &oracle).map_err(err)?)
        }
        None => None,
    };
    if as_json {
        let out = json!({
            "dual": upper.format(&r.dual),
            "h_vector": alg.h_vector(),
            "socle_degree": alg.socle_degree(),
            "generators": gens.iter().map(|(d, g)| json!({"degree": d, "poly": r.names.format(g)})).collect::<Vec<_>>(),
            "complete_intersection": ci,
            "case": r.params.map(|p| p.case().to_string()),
            "formula_agrees": agree,
        });
        println!("{out}");
    } else {
        println!("dual generator: {}", upper.format(&r.dual));
        println!("h-vector: {}", h_string(alg.h_vector()));
        println!("minimal generators ({}):", gens.len());
        for (d, g) in &gens {
            println!("  [{d}] {}", r.names.format(g));
        }
        println!("complete intersection: {ci}");
        if let Some(p) = r.params {
            println!("case: {}", p.case());
        }
        if let Some(a) = agree {
            println!("formula agrees: {}", if a { "pass" } else { "fail" });
        }
    }
    Ok(if agree == Some(false) { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn verdict_code(v: &LefschetzVerdict) -> ExitCode {
    match v.holds {
        Holds::True => ExitCode::SUCCESS,
        Holds::False => ExitCode::from(2),
        Holds::Inconclusive => ExitCode::from(3),
    }
}

fn cmd_lefschetz(input: &Input, property: PropertyArg, method: MethodArg, strategy: Strategy, as_json: bool) -> CliResult<ExitCode> {
    let r = resolve(input)?;
    let alg = ApolarAlgebra::new(r.dual.clone()).map_err(err)?;
    let strategy = Strategy {
        hessian: !matches!(method, MethodArg::Rank),
        obstruction: matches!(method, MethodArg::Both),
        ..strategy
    };
    let property = match property {
        PropertyArg::Wlp => Property::Wlp,
        PropertyArg::Slp => Property::Slp,
    };
    let v = verdict(&alg, property, &strategy);
    if as_json {
        println!("{}", serde_json::to_string(&v).map_err(|e| e.to_string())?);
    } else {
        println!("h-vector: {}", h_string(alg.h_vector()));
        println!("{v}");
    }
    Ok(verdict_code(&v))
}

fn cmd_sweep(mut config: SweepConfig, checks: Option<String>, corrupt: Option<String>, output: Option<String>) -> CliResult<ExitCode> {
    if let Some(list) = checks {
        config.checks = list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| s.parse::<Check>().map_err(err))
            .collect::<CliResult<_>>()?;
    }
    if let Some(p) = corrupt {
        config.corrupt = Some(Binomial3Params::parse(&p).map_err(err)?);
    }
    let start = Instant::now();
    let reports = sweep(&config).map_err(err)?;
    let mut out: Box<dyn Write> = match output {
        Some(path) => Box::new(BufWriter::new(File::create(&path).map_err(|e| format!("{path}: {e}"))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    for r in &reports {
        writeln!(out, "{}", serde_json::to_string(r).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    }
    out.flush().map_err(|e| e.to_string())?;
    let failed: Vec<&str> = reports.iter().filter(|r| r.failed()).map(|r| r.id.as_str()).collect();
    eprintln!("{} instances in {:.1}s", reports.len(), start.elapsed().as_secs_f64());
    for (check, counts) in summarize(&reports) {
        let parts: Vec<String> = counts.iter().map(|(s, n)| format!("{s} {n}")).collect();
        eprintln!("  {check:<9} {}", parts.join(", "));
    }
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failing instances: {}", failed.join(" "));
        Ok(ExitCode::from(1))
    }
}

fn cmd_codimn(from: usize, to: usize, max_n: usize, extended: bool, budget: f64, seed: u64, as_json: bool) -> CliResult<ExitCode> {
    if from < 4 {
        return Err(format!("the family starts at n = 4, got {from}"));
    }
    if to > max_n && !extended {
        return Err(format!("n = {to} exceeds --max-n {max_n}; pass --extended to allow it"));
    }
    let strategy = Strategy { seed, ..Strategy::default() };
    let mut code = ExitCode::SUCCESS;
    for n in from..=to {
        let start = Instant::now();
        let (tx, rx) = mpsc::channel();
        let s = strategy.clone();
        std::thread::spawn(move || {
            let result = codim_n_dual(n).and_then(ApolarAlgebra::new).map(|alg| {
                let v = verdict(&alg, Property::Wlp, &s);
                (alg.h_vector().to_vec(), v)
            });
            let _ = tx.send(result);
        });
        let names = VarNames::default_for(n).uppercase();
        let dual = names.format(&codim_n_dual(n).map_err(err)?);
        match rx.recv_timeout(Duration::from_secs_f64(budget)) {
            Ok(Ok((h, v))) => {
                let status = match v.holds {
                    Holds::False => "fail",
                    Holds::True => "pass",
                    Holds::Inconclusive => "indeterminate",
                };
                if as_json {
                    let line = json!({"n": n, "dual": dual, "h_vector": h, "wlp": status, "verdict": v, "ms": start.elapsed().as_millis() as u64});
                    println!("{line}");
                } else {
                    println!("n = {n}: {dual}");
                    println!("  h-vector {}", h_string(&h));
                    println!("  {v} ({:.1}s)", start.elapsed().as_secs_f64());
                }
                match v.holds {
                    Holds::False => {}
                    Holds::True => code = ExitCode::from(2),
                    Holds::Inconclusive => code = ExitCode::from(3),
                }
            }
            Ok(Err(e)) => return Err(err(e)),
            Err(_) => {
                if as_json {
                    println!("{}", json!({"n": n, "dual": dual, "wlp": "indeterminate", "detail": "budget"}));
                } else {
                    println!("n = {n}: indeterminate, budget of {budget}s exhausted");
                }
                return Ok(ExitCode::from(3));
            }
        }
    }
    Ok(code)
}

fn cmd_doubling(params: &str, as_json: bool) -> CliResult<ExitCode> {
    let p = Binomial3Params::parse(params).map_err(err)?;
    match doubling_verify(&p) {
        Ok(cert) => {
            let names = VarNames::default_for(3);
            if as_json {
                let mut v = serde_json::to_value(&cert).map_err(|e| e.to_string())?;
                v["validates"] = json!(cert.validates());
                v["j_generators"] = json!(cert.j_generators.iter().map(|g| names.format(g)).collect::<Vec<_>>());
                println!("{v}");
            } else {
                println!("case: {}", p.case());
                println!("zero block rows: {:?}", &cert.permutation[..cert.relation_twists.len()]);
                println!("A:");
                for row in &cert.a_block {
                    let cells: Vec<String> = row.iter().map(|e| names.format(e)).collect();
                    println!("  [{}]", cells.join(", "));
                }
                println!("J: {}", cert.j_generators.iter().map(|g| names.format(g)).collect::<Vec<_>>().join(", "));
                println!("R/J: {}", cert.quotient_j);
                println!("omega: {}", cert.omega);
                println!("R/I: {}", cert.quotient_i);
                println!("residual: {}", cert.residual);
                println!("validates: {}", cert.validates());
            }
            Ok(if cert.validates() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Err(e @ Error::NotBlockCertified(_)) => {
            println!("indeterminate: {e}");
            Ok(ExitCode::from(3))
        }
        Err(e) => Err(err(e)),
    }
}

fn cmd_gb(gens: &[String], params: Option<String>, nvars: Option<usize>, order: &str, cap: Option<u32>, as_json: bool) -> CliResult<ExitCode> {
    let (polys, names, default_cap) = match params {
        Some(p) => {
            let p = Binomial3Params::parse(&p).map_err(err)?;
            (ann_generators(&p).map_err(err)?, VarNames::default_for(3), p.socle_degree() + 1)
        }
        None => {
            if gens.is_empty() {
                return Err("give generators or --params".into());
            }
            let n = match nvars {
                Some(n) => n,
                None => {
                    let joined = gens.join(" + ");
                    parse_any(&joined, None)?.1.len()
                }
            };
            let names = VarNames::default_for(n);
            let polys = gens.iter().map(|g| names.parse(g)).collect::<Result<Vec<_>, _>>().map_err(err)?;
            let top = polys.iter().filter_map(Poly::degree).max().unwrap_or(0);
            (polys, names, 2 * top + 2)
        }
    };
    let ord = MonomialOrder::parse(order, names.len()).map_err(err)?;
    let input_is_gb = is_groebner(&polys, &ord).map_err(err)?;
    let out = buchberger(&polys, &ord, cap.unwrap_or(default_cap)).map_err(err)?;
    let init = initial_ideal(&out.basis, &ord).map_err(err)?;
    if as_json {
        println!(
            "{}",
            json!({
                "order": ord.to_string(),
                "input_is_groebner": input_is_gb,
                "basis": out.basis.iter().map(|g| names.format(g)).collect::<Vec<_>>(),
                "initial_ideal": init.iter().map(|m| names.format_monomial(m)).collect::<Vec<_>>(),
                "truncated": out.truncated,
            })
        );
    } else {
        println!("order: {ord}");
        println!("input is a Groebner basis: {input_is_gb}");
        println!("reduced basis ({}):", out.basis.len());
        for g in &out.basis {
            println!("  {}", names.format(g));
        }
        let init: Vec<String> = init.iter().map(|m| names.format_monomial(m)).collect();
        println!("initial ideal: <{}>", init.join(", "));
        if out.truncated {
            println!("warning: truncated at the degree cap");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ann { input, json } => cmd_ann(&input, json),
        Command::Lefschetz {
            input,
            property,
            method,
            seed,
            forms,
            json,
        } => {
            let strategy = Strategy {
                seed,
                random_forms: forms,
                ..Strategy::default()
            };
            cmd_lefschetz(&input, property, method, strategy, json)
        }
        Command::Sweep {
            max_abc,
            max_em,
            checks,
            seed,
            jobs,
            max_seconds,
            corrupt,
            output,
        } => {
            let config = SweepConfig {
                max_abc,
                max_em,
                strategy: Strategy { seed, ..Strategy::default() },
                jobs,
                max_seconds,
                ..SweepConfig::default()
            };
            cmd_sweep(config, checks, corrupt, output)
        }
        Command::Codimn {
            from,
            to,
            max_n,
            extended,
            max_seconds,
            seed,
            json,
        } => cmd_codimn(from, to, max_n, extended, max_seconds, seed, json),
        Command::Doubling { params, json } => cmd_doubling(&params, json),
        Command::Gb {
            gens,
            params,
            nvars,
            order,
            cap,
            json,
        } => cmd_gb(&gens, params, nvars, &order, cap, json),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
