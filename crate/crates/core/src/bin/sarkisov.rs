use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use sarkisov::discrepancy;
use sarkisov::dot;
use sarkisov::factor::{self, LinkSequence, MarkedResolution};
use sarkisov::fixtures;
use sarkisov::hj;
use sarkisov::pair::{self, SurfacePair};
use sarkisov::problem::{load_problem, Problem, ResolveError};
use sarkisov::rational::fmt_rat;

/// Factorizes birational maps between surface compactifications into
/// elementary links, with exact discrepancy data on dual graphs.
#[derive(Parser)]
#[command(name = "sarkisov", version)]
struct Args {
    /// Problem file (JSON)
    #[arg(long)]
    input: Option<PathBuf>,
    /// One of: validate, ledger, factorize, hj, dot, concat
    #[arg(long)]
    command: String,
    /// Write DOT output to this file instead of stdout
    #[arg(long)]
    dot_out: Option<PathBuf>,
    /// Suppress reports; communicate through the exit status only
    #[arg(long)]
    quiet: bool,
    /// Built-in fixture: quadric, reversion-sigma, reversion-h2,
    /// reversion-sigma-inv, reversion-h0, or jung-d=N
    #[arg(long)]
    fixture: Option<String>,
}

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;

fn main() -> ExitCode {
    let args = Args::parse();
    ExitCode::from(run(&args))
}

macro_rules! say {
    ($args:expr, $($t:tt)*) => {
        if !$args.quiet {
            println!($($t)*);
        }
    };
}

fn run(args: &Args) -> u8 {
    let problem = match load(args) {
        Ok(p) => p,
        Err(code) => return code,
    };
    match args.command.as_str() {
        "validate" => cmd_validate(args, &problem),
        "ledger" => cmd_ledger(args, &problem),
        "factorize" | "concat" => cmd_factorize(args, &problem),
        "hj" => cmd_hj(args, &problem),
        "dot" => cmd_dot(args, &problem),
        other => {
            eprintln!("unknown command `{other}`");
            EXIT_PARSE
        }
    }
}

fn load(args: &Args) -> Result<Problem, u8> {
    match (&args.input, &args.fixture) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| {
                eprintln!("cannot read {}: {e}", path.display());
                EXIT_PARSE
            })?;
            load_problem(&text).map_err(|e| {
                eprintln!("{e}");
                EXIT_PARSE
            })
        }
        (None, Some(name)) => fixtures::by_name(name).ok_or_else(|| {
            eprintln!("unknown fixture `{name}`");
            EXIT_PARSE
        }),
        _ => {
            eprintln!("exactly one of --input or --fixture required");
            Err(EXIT_PARSE)
        }
    }
}

fn resolve(problem: &Problem) -> Result<MarkedResolution, (u8, String)> {
    problem.resolution().map_err(|e| (code_for_resolve(&e), e.to_string()))
}

fn code_for_resolve(e: &ResolveError) -> u8 {
    match e {
        ResolveError::Problem(_) => EXIT_PARSE,
        ResolveError::Factor(f) => code_for_factor(f),
    }
}

fn code_for_factor(e: &factor::FactorError) -> u8 {
    use discrepancy::DiscrepancyError as D;
    match e {
        factor::FactorError::Discrepancy(D::NotNegativeDefinite) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn cmd_validate(args: &Args, problem: &Problem) -> u8 {
    let mut status = EXIT_OK;
    let parts = if problem.is_concat() {
        problem.concat_parts().expect("validated on load")
    } else {
        vec![problem.clone()]
    };
    for (i, part) in parts.iter().enumerate() {
        let tag = if parts.len() > 1 { format!("part {}: ", i + 1) } else { String::new() };
        let origin = match part.pair() {
            Ok(p) => p,
            Err(e) => {
                say!(args, "{tag}{e}");
                return EXIT_PARSE;
            }
        };
        let report = pair::admissibility_check(&origin);
        for v in &report.violations {
            say!(args, "{tag}pair: {v}");
            status = EXIT_INVALID;
        }
        if part.script().is_empty() {
            say!(args, "{tag}no target divisor (script is empty)");
            status = EXIT_INVALID;
            continue;
        }
        match MarkedResolution::resolve(origin, part.script(), part.landing_label()) {
            Ok(r) => {
                let res = factor::validate_resolution(&r);
                for v in &res.violations {
                    say!(args, "{tag}resolution: {v}");
                    status = EXIT_INVALID;
                }
                for w in &res.warnings {
                    say!(args, "{tag}warning: {w}");
                }
            }
            Err(e) => {
                say!(args, "{tag}resolution: {e}");
                status = EXIT_INVALID;
            }
        }
    }
    if status == EXIT_OK {
        say!(args, "valid");
    }
    status
}

fn cmd_ledger(args: &Args, problem: &Problem) -> u8 {
    let r = match resolve(problem) {
        Ok(r) => r,
        Err((code, msg)) => {
            eprintln!("{msg}");
            return code;
        }
    };
    say!(args, "divisor  c  b  m  lambda");
    for row in &r.ledger.rows {
        let lambda = row.lambda().map(|l| fmt_rat(&l)).unwrap_or_else(|| "-".into());
        say!(args, "{:<8} {:<2} {:<2} {:<2} {}", row.id.as_str(), row.c, row.b(), row.m, lambda);
    }
    match discrepancy::maximal_multiplicity(&r.ledger) {
        Ok((lambda, argmax)) => {
            let names: Vec<&str> = argmax.iter().map(|c| c.as_str()).collect();
            say!(args, "lambda* = {} at {{{}}}", fmt_rat(&lambda), names.join(", "));
            EXIT_OK
        }
        Err(e) => {
            say!(args, "{e}");
            EXIT_INVALID
        }
    }
}

fn describe_pair(p: &SurfacePair, blowups: usize) -> String {
    let b = p.strict_boundary.iter().next().expect("nonempty boundary");
    let b2 = pair::pair_self_intersection(p, b)
        .map(|x| fmt_rat(&x))
        .unwrap_or_else(|_| "?".into());
    let sings = if p.chains.is_empty() {
        "smooth".to_owned()
    } else {
        p.singularity_types()
            .iter()
            .map(|t| t.to_string())
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let index = pair::pair_index(p).map(|i| i.to_string()).unwrap_or_else(|_| "-".into());
    let rank = pair::picard_rank(p, blowups)
        .map(|r| r.to_string())
        .unwrap_or_else(|_| "?".into());
    format!("boundary {b}, B^2 = {b2}, {sings}, index {index}, rank {rank}")
}

fn cmd_factorize(args: &Args, problem: &Problem) -> u8 {
    let r = match resolve(problem) {
        Ok(r) => r,
        Err((code, msg)) => {
            eprintln!("{msg}");
            return code;
        }
    };
    let seq = match factor::factorize(&r) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return code_for_factor(&e);
        }
    };
    let mut status = EXIT_OK;
    say!(args, "links: {}", seq.link_count());
    let chain: Vec<&str> = seq.chain_ids.iter().map(|c| c.as_str()).collect();
    say!(args, "chain: {}", chain.join(" - "));
    for (i, p) in seq.pairs.iter().enumerate() {
        say!(args, "S_{i}: {}", describe_pair(p, r.blowup_count()));
    }

    match factor::index_sequence(&seq) {
        Ok((indices, report)) => {
            let rendered: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
            say!(args, "index sequence: [{}]", rendered.join(", "));
            for note in &report.notes {
                say!(args, "note: {note}");
            }
            if report.applicable && (!report.unit_steps || !report.monotone_descent) {
                say!(args, "index sequence violates the unit-step/descent law");
                status = EXIT_INVALID;
            }
            if report.applicable {
                for s in factor::triangular_segments(&indices) {
                    say!(
                        args,
                        "segment S_{}..S_{}: degree {}, {} links{}",
                        s.start,
                        s.end,
                        s.degree,
                        s.link_count,
                        if s.length_matches { "" } else { " (length anomaly)" }
                    );
                }
            }
        }
        Err(e) => say!(args, "index sequence unavailable: {e}"),
    }

    match factor::maximal_extraction_check(&seq, &r.ledger) {
        Ok(rep) if rep.vacuous => {
            say!(args, "maximal extraction: vacuous (all multiplicities zero)");
        }
        Ok(rep) => {
            let names: Vec<&str> = rep.argmax.iter().map(|c| c.as_str()).collect();
            say!(
                args,
                "maximal extraction: E_1 = {}, lambda* = {} at {{{}}}: {}",
                rep.e1,
                fmt_rat(&rep.lambda_star),
                names.join(", "),
                if rep.attained { "attained" } else { "NOT attained" }
            );
            if !rep.attained {
                status = EXIT_INVALID;
            }
        }
        Err(e) => say!(args, "maximal extraction unavailable: {e}"),
    }

    if let Err(code) = print_degrees(args, &r, &seq) {
        status = status.max(code);
    }

    if let Some(path) = &args.dot_out {
        if fs::write(path, dot::emit_dot(&r.graph)).is_err() {
            eprintln!("cannot write {}", path.display());
            return EXIT_INTERNAL;
        }
    }
    status
}

fn print_degrees(args: &Args, r: &MarkedResolution, seq: &LinkSequence) -> Result<(), u8> {
    match factor::sarkisov_degree_sequence(r, seq) {
        Ok(mu) => {
            let rendered: Vec<String> = mu.iter().map(fmt_rat).collect();
            say!(args, "degree sequence: [{}]", rendered.join(", "));
            Ok(())
        }
        Err(e) => {
            say!(args, "degree sequence unavailable: {e}");
            Ok(())
        }
    }
}

fn cmd_hj(args: &Args, problem: &Problem) -> u8 {
    let parts = if problem.is_concat() {
        problem.concat_parts().expect("validated on load")
    } else {
        vec![problem.clone()]
    };
    for part in &parts {
        let origin = match part.pair() {
            Ok(p) => p,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_PARSE;
            }
        };
        if origin.chains.is_empty() {
            say!(args, "no singularities");
        }
        for chain in &origin.chains {
            let hc = match chain.hj_chain(&origin.resolution) {
                Ok(hc) => hc,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_INVALID;
                }
            };
            let t = hj::chain_to_type(&hc);
            let a = match hj::chain_log_discrepancies(&hc) {
                Ok(a) => a,
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_INTERNAL;
                }
            };
            let weights: Vec<String> = hc.weights().iter().map(|w| w.to_string()).collect();
            let discs: Vec<String> = a.iter().map(fmt_rat).collect();
            say!(
                args,
                "chain [{}] on {} = {t}; log discrepancies: {}; determinant {}",
                weights.join(", "),
                chain.attached_to,
                discs.join(", "),
                fmt_rat(&hj::chain_determinant(&hc)),
            );
        }
    }
    EXIT_OK
}

fn cmd_dot(args: &Args, problem: &Problem) -> u8 {
    let text = if !problem.is_concat() && problem.script().is_empty() {
        match problem.pair() {
            Ok(p) => dot::emit_dot_pair(&p),
            Err(e) => {
                eprintln!("{e}");
                return EXIT_PARSE;
            }
        }
    } else {
        match resolve(problem) {
            Ok(r) => dot::emit_dot(&r.graph),
            Err((code, msg)) => {
                eprintln!("{msg}");
                return code;
            }
        }
    };
    match &args.dot_out {
        Some(path) => {
            if fs::write(path, text).is_err() {
                eprintln!("cannot write {}", path.display());
                return EXIT_INTERNAL;
            }
        }
        None => {
            if !args.quiet {
                print!("{text}");
            }
        }
    }
    EXIT_OK
}
