//! Command-line front end: compute homology tables, run verification checks
//! and dump cubes of resolutions. Output is deterministic so it can be used
//! for golden tests.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use chrono_kh::complex::build_complex;
use chrono_kh::coeff::Specialization;
use chrono_kh::cube::ResolutionCube;
use chrono_kh::diagram::LinkDiagram;
use chrono_kh::frobenius::covering_system;
use chrono_kh::homology::{compare_tables, homology, mod2_homology, TableTransform};
use chrono_kh::oracle::state_sum;
use chrono_kh::{khovanov_homology, Theory};

const DEFAULT_SEED: u64 = 20260810;

#[derive(Parser)]
#[command(name = "chrono-kh", version, about = "Generalized Khovanov homology of links")]
struct Cli {
    /// Seed for the randomized independence checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct DiagramArgs {
    /// PD code: KnotTheory form `PD[X[1,4,2,5],...]`, the JSON form, or a
    /// path to a UTF-8 file containing either.
    #[arg(long)]
    pd: String,
    /// Bitmask of crossings whose saddle arrow is flipped.
    #[arg(long)]
    arrows: Option<u64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute a homology table.
    Compute {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// even | odd | mod2 | dotted-even:h=<int>,t=<int>
        #[arg(long)]
        theory: String,
        #[arg(long)]
        json: bool,
    },
    /// Run verification checks: cocycle, d2, euler, mod2, independence,
    /// invariance-pair (needs --pd2).
    Verify {
        #[command(flatten)]
        diagram: DiagramArgs,
        /// Comma-separated list of checks.
        #[arg(long)]
        checks: String,
        /// Second diagram for invariance-pair.
        #[arg(long)]
        pd2: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Dump the cube of resolutions, faces, ψ and ε as JSON.
    Cube {
        #[command(flatten)]
        diagram: DiagramArgs,
    },
    /// Independent Kauffman-style state sum, as sorted (exponent, coefficient) pairs.
    Statesum {
        #[command(flatten)]
        diagram: DiagramArgs,
        #[arg(long)]
        json: bool,
    },
}

fn load_diagram(args: &DiagramArgs) -> Result<LinkDiagram, String> {
    let text = if std::path::Path::new(&args.pd).is_file() {
        std::fs::read_to_string(&args.pd).map_err(|e| e.to_string())?
    } else {
        args.pd.clone()
    };
    let mut d = LinkDiagram::from_text(&text).map_err(|e| e.to_string())?;
    if let Some(mask) = args.arrows {
        for c in 0..d.n() {
            if mask >> c & 1 == 1 {
                d = d.with_arrow_flipped(c);
            }
        }
    }
    Ok(d)
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("CHRONO_KH_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    match run(cli.cmd, seed) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd, seed: u64) -> Result<ExitCode, String> {
    match cmd {
        Cmd::Compute { diagram, theory, json } => {
            let theory = Theory::parse(&theory).ok_or(
                "unknown theory: use even, odd, mod2 or dotted-even:h=<int>,t=<int>",
            )?;
            let d = load_diagram(&diagram)?;
            let table = match khovanov_homology(d, theory) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("internal invariant violation: {e}");
                    return Ok(ExitCode::from(3));
                }
            };
            if json {
                println!("{}", table.to_json());
            } else {
                println!("theory: {}", table.theory);
                print!("{}", table.render_grid());
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Statesum { diagram, json } => {
            let d = load_diagram(&diagram)?;
            let p = state_sum(&d);
            if json {
                let pairs: Vec<_> =
                    p.pairs().iter().map(|(e, c)| json!([e, c.to_string()])).collect();
                println!("{}", json!({"schema": "chrono-kh/1", "pairs": pairs}));
            } else {
                for (e, c) in p.pairs() {
                    println!("{e} {c}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Cube { diagram } => {
            let d = load_diagram(&diagram)?;
            let cube = ResolutionCube::build(d);
            let eps = match cube.sign_assignment() {
                Ok(e) => e,
                Err(e) => {
                    eprintln!("internal invariant violation: {e}");
                    return Ok(ExitCode::from(3));
                }
            };
            println!("{}", cube.to_json(&eps));
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { diagram, checks, pd2, json } => {
            let d = load_diagram(&diagram)?;
            let mut results: Vec<(String, bool, String)> = Vec::new();
            for check in checks.split(',') {
                let check = check.trim();
                let (pass, detail) = run_check(check, &d, pd2.as_deref(), seed)?;
                results.push((check.to_string(), pass, detail));
            }
            let all_pass = results.iter().all(|(_, p, _)| *p);
            if json {
                let entries: Vec<_> = results
                    .iter()
                    .map(|(name, pass, detail)| json!({"check": name, "pass": pass, "detail": detail}))
                    .collect();
                println!("{}", json!({"schema": "chrono-kh/1", "checks": entries}));
            } else {
                for (name, pass, detail) in &results {
                    if detail.is_empty() {
                        println!("{name}: {}", if *pass { "pass" } else { "FAIL" });
                    } else {
                        println!("{name}: {} ({detail})", if *pass { "pass" } else { "FAIL" });
                    }
                }
            }
            Ok(if all_pass { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}

fn run_check(
    name: &str,
    d: &LinkDiagram,
    pd2: Option<&str>,
    seed: u64,
) -> Result<(bool, String), String> {
    let sys = covering_system();
    match name {
        "cocycle" => {
            let cube = ResolutionCube::build(d.clone());
            let bad = cube.verify_cocycle();
            Ok((bad.is_empty(), if bad.is_empty() { String::new() } else { format!("{} violations", bad.len()) }))
        }
        "d2" => {
            let cube = ResolutionCube::build(d.clone());
            let eps = cube.sign_assignment().map_err(|e| e.to_string())?;
            let master = build_complex(&cube, &eps, &sys);
            let mut bad = master.verify_d_squared().len();
            for spec in [Specialization::even(), Specialization::odd()] {
                bad += master.specialize(&spec).verify_d_squared().len();
            }
            bad += master.mod2_complex().verify_d_squared().len();
            Ok((bad == 0, if bad == 0 { String::new() } else { format!("{bad} nonzero entries in d²") }))
        }
        "euler" => {
            let oracle = state_sum(d);
            let cube = ResolutionCube::build(d.clone());
            let eps = cube.sign_assignment().map_err(|e| e.to_string())?;
            let master = build_complex(&cube, &eps, &sys);
            let chains_ok = master.euler_characteristic() == oracle;
            let even = homology(&master.specialize(&Specialization::even()), "even");
            let odd = homology(&master.specialize(&Specialization::odd()), "odd");
            let pass = chains_ok
                && even.euler_characteristic() == oracle
                && odd.euler_characteristic() == oracle;
            Ok((pass, format!("state sum {oracle}")))
        }
        "mod2" => {
            let cube = ResolutionCube::build(d.clone());
            let eps = cube.sign_assignment().map_err(|e| e.to_string())?;
            let master = build_complex(&cube, &eps, &sys);
            let ints = master.specialize(&Specialization::even());
            let even = homology(&ints, "even");
            let odd = homology(&master.specialize(&Specialization::odd()), "odd");
            let pass = even.mod2_dimensions() == odd.mod2_dimensions()
                && even.mod2_dimensions() == mod2_homology(&ints);
            Ok((pass, String::new()))
        }
        "independence" => {
            let cube = ResolutionCube::build(d.clone());
            let eps = cube.sign_assignment().map_err(|e| e.to_string())?;
            let master = build_complex(&cube, &eps, &sys);
            let base_even = homology(&master.specialize(&Specialization::even()), "even");
            let base_odd = homology(&master.specialize(&Specialization::odd()), "odd");
            let mut pass = true;
            for trial in 0..5u64 {
                let eps2 = cube.perturb_sign_assignment(&eps, seed.wrapping_add(trial));
                pass &= cube.check_faces(&eps2).is_none();
                let m2 = build_complex(&cube, &eps2, &sys);
                pass &= homology(&m2.specialize(&Specialization::even()), "even").entries
                    == base_even.entries;
                pass &= homology(&m2.specialize(&Specialization::odd()), "odd").entries
                    == base_odd.entries;
            }
            for c in 0..d.n() {
                let flipped = d.with_arrow_flipped(c);
                let even = khovanov_homology(flipped.clone(), Theory::Even).map_err(|e| e.to_string())?;
                let odd = khovanov_homology(flipped, Theory::Odd).map_err(|e| e.to_string())?;
                pass &= even.entries == base_even.entries && odd.entries == base_odd.entries;
            }
            Ok((pass, String::new()))
        }
        "invariance-pair" => {
            let text = pd2.ok_or("invariance-pair needs --pd2")?;
            let text = if std::path::Path::new(text).is_file() {
                std::fs::read_to_string(text).map_err(|e| e.to_string())?
            } else {
                text.to_string()
            };
            let d2 = LinkDiagram::from_text(&text).map_err(|e| e.to_string())?;
            let mut pass = true;
            for theory in [Theory::Even, Theory::Odd] {
                let a = khovanov_homology(d.clone(), theory).map_err(|e| e.to_string())?;
                let b = khovanov_homology(d2.clone(), theory).map_err(|e| e.to_string())?;
                pass &= compare_tables(&a, &b, TableTransform::Identity).is_empty();
            }
            Ok((pass, String::new()))
        }
        other => Err(format!("unknown check: {other}")),
    }
}
