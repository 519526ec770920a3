//! Command-line surface over the report builders in `nlops::report`.
//!
//! Identical invocations (subcommand, seed, trials) produce byte-identical
//! reports; see `nlops help` for the subcommand list.

use nlops::report::{self, Report};
use nlops::storage::{AlphaMax, Locality};
use std::f64::consts::PI;
use std::io::Write;
use std::process::ExitCode;

const USAGE: &str = "\
nlops — non-local operation protocols as reproducible reports

USAGE: nlops <subcommand> [flags]

SUBCOMMANDS
  duality        channel↔state round-trip residuals and post-selection odds
  phase-gate     Monte Carlo statistics of the deterministic gate cascade
  purify         purification thresholds for depolarised gates
  tomography     process tomography coefficients of a two-qubit channel
  photonic       gate success rates under incomplete Bell measurements
  storage        storage/compression rates for phase-gate ensembles
  measure        non-local measurement costs and the one-ebit parity demo
  multiparty     three-or-more-party cascade and post-selection statistics
  compress       local compression of entangled-state sequences
  paper-numbers  every reproduced constant with pass/fail at printed precision

COMMON FLAGS
  --seed <u64>      random stream seed (default 1)
  --trials <u64>    Monte Carlo trials where applicable
  --format <csv|json>   output format (default csv)
  --out <path>      write the report to a file instead of stdout

Run `nlops <subcommand> --help` for subcommand flags.
";

struct Args {
    positional: Vec<String>,
    flags: Vec<(String, Option<String>)>,
}

impl Args {
    fn parse(argv: &[String]) -> Result<Self, String> {
        let mut positional = Vec::new();
        let mut flags = Vec::new();
        let mut iter = argv.iter().peekable();
        while let Some(arg) = iter.next() {
            if let Some(name) = arg.strip_prefix("--") {
                let value = match iter.peek() {
                    Some(next) if !next.starts_with("--") => Some(iter.next().unwrap().clone()),
                    _ => None,
                };
                // Flags are case-insensitive: --N and --n are the same.
                flags.push((name.to_ascii_lowercase(), value));
            } else {
                positional.push(arg.clone());
            }
        }
        Ok(Self { positional, flags })
    }

    fn has(&self, name: &str) -> bool {
        self.flags.iter().any(|(n, _)| n == name)
    }

    fn get(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .and_then(|(_, v)| v.as_deref())
    }

    fn get_u64(&self, name: &str, default: u64) -> Result<u64, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| format!("--{name} expects an integer, got `{v}`")),
        }
    }

    fn get_usize(&self, name: &str, default: usize) -> Result<usize, String> {
        Ok(self.get_u64(name, default as u64)? as usize)
    }

    fn get_f64(&self, name: &str, default: f64) -> Result<f64, String> {
        match self.get(name) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| format!("--{name} expects a number, got `{v}`")),
        }
    }
}

fn parse_alpha_max(s: &str) -> Result<AlphaMax, String> {
    match s {
        "pi" => Ok(AlphaMax::Pi),
        "pi8" => Ok(AlphaMax::PiOver8),
        "pi32" => Ok(AlphaMax::PiOver32),
        other => Err(format!("--alpha-max expects pi|pi8|pi32, got `{other}`")),
    }
}

fn parse_locality(s: &str) -> Result<Locality, String> {
    match s {
        "local" => Ok(Locality::Local),
        "nonlocal" => Ok(Locality::Nonlocal),
        other => Err(format!("--locality expects local|nonlocal, got `{other}`")),
    }
}

fn subcommand_help(name: &str) -> &'static str {
    match name {
        "duality" => "nlops duality [--trials <random channels, default 20>] [--seed]\nRound-trip residuals for named and random channels, and the exact\npost-selection probabilities of duality-based gate application.\n",
        "phase-gate" => "nlops phase-gate [--n <depth, default 4>] [--trials <default 10000>] [--seed]\nMonte Carlo cost statistics of the doubling cascade for U(pi/2^n).\n",
        "purify" => "nlops purify [--gate <cnot|swap|phase|all>] [--alpha <rad>] [--grid <points>]\nPurification thresholds: closed form vs bisection of the partial-transpose\nboundary of the depolarised gate dual.\n",
        "tomography" => "nlops tomography [--gate <cnot|swap|phase|identity>] [--alpha <rad>]\n                 [--q <1.0>] [--shots <n> | --exact] [--seed]\nLocal-observable coefficients of the gate dual and the reconstruction\nresidual of the estimated channel.\n",
        "photonic" => "nlops photonic [--gate <cnot|swap|phase>] [--alpha <rad>]\n               [--trials <default 100000>] [--seed]\nSuccess statistics of gate application under the three-outcome incomplete\nBell measurement.\n",
        "storage" => "nlops storage [--mode <infinite|finite|qcomm>] [--alpha-max <pi|pi8|pi32>]\n              [--m <default 100>] [--locality <local|nonlocal>]\nPer-slot storage-rate breakdown for phase-gate ensembles.\n",
        "measure" => "nlops measure\nEntanglement costs of non-local measurements and the parity measurement\nthat creates one ebit from a separable input.\n",
        "multiparty" => "nlops multiparty [--parties <default 3>] [--n <depth, default 3>]\n                 [--trials <default 100000>] [--seed]\nMultiparty cascade exactness and all-parties post-selection frequency.\n",
        "compress" => "nlops compress [--sweep <N1,N2,...>] [--n <default 100>] [--alpha <rad>]\n               [--mu <default 2>] [--beta <default 0.6>]\nTypical-window rates, exact average fidelity and the Gaussian bound for\nsequence compression.\n",
        "paper-numbers" => "nlops paper-numbers\nOne row per reproduced constant: published value, computed value, absolute\nerror, pass/fail at the printed precision. Exits non-zero on any failure.\n",
        _ => USAGE,
    }
}

fn build(name: &str, args: &Args) -> Result<Report, String> {
    let seed = args.get_u64("seed", 1)?;
    let wrap = |e: report::ReportError| e.to_string();
    match name {
        "duality" => {
            let channels = args.get_u64("trials", 20)?;
            report::duality_report(channels, seed).map_err(wrap)
        }
        "phase-gate" => {
            let depth = args.get_u64("n", 4)? as u32;
            let trials = args.get_u64("trials", 10_000)?;
            report::phase_gate_report(depth, trials, seed).map_err(wrap)
        }
        "purify" => {
            let gate = args.get("gate").unwrap_or("all");
            let alpha = args.get_f64("alpha", PI / 8.0)?;
            let grid = args.get_usize("grid", 10)?;
            report::purify_report(gate, alpha, grid).map_err(wrap)
        }
        "tomography" => {
            let gate = args.get("gate").unwrap_or("cnot");
            let alpha = args.get_f64("alpha", PI / 8.0)?;
            let q = args.get_f64("q", 1.0)?;
            let shots = if args.has("exact") {
                None
            } else {
                match args.get("shots") {
                    Some(v) => Some(
                        v.parse::<u64>()
                            .map_err(|_| format!("--shots expects an integer, got `{v}`"))?,
                    ),
                    None => None,
                }
            };
            report::tomography_report(gate, alpha, q, shots, seed).map_err(wrap)
        }
        "photonic" => {
            let gate = args.get("gate").unwrap_or("cnot");
            let alpha = args.get_f64("alpha", PI / 8.0)?;
            let trials = args.get_u64("trials", 100_000)?;
            report::photonic_report(gate, alpha, trials, seed).map_err(wrap)
        }
        "storage" => {
            let mode = args.get("mode").unwrap_or("infinite");
            if mode == "qcomm" {
                return report::qcomm_report().map_err(wrap);
            }
            let alpha_max = parse_alpha_max(args.get("alpha-max").unwrap_or("pi"))?;
            let m = args.get_usize("m", 100)?;
            let locality = parse_locality(args.get("locality").unwrap_or("local"))?;
            report::storage_report(mode, alpha_max, m, locality).map_err(wrap)
        }
        "measure" => report::measure_report().map_err(wrap),
        "multiparty" => {
            let parties = args.get_usize("parties", 3)?;
            let depth = args.get_u64("n", 3)? as u32;
            let trials = args.get_u64("trials", 100_000)?;
            report::multiparty_report(parties, depth, trials, seed).map_err(wrap)
        }
        "compress" => {
            let alpha = args.get_f64("alpha", PI / 4.0)?;
            let mu = args.get_f64("mu", 2.0)?;
            let beta = args.get_f64("beta", 0.6)?;
            let ns: Vec<usize> = match args.get("sweep") {
                Some(list) => list
                    .split(',')
                    .map(|s| {
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| format!("--sweep expects integers, got `{s}`"))
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![args.get_usize("n", 100)?],
            };
            report::compress_report(&ns, alpha, mu, beta).map_err(wrap)
        }
        "paper-numbers" => report::paper_numbers_report().map_err(wrap),
        other => Err(format!("unknown subcommand `{other}`\n\n{USAGE}")),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    if argv.is_empty() || argv[0] == "help" || argv[0] == "--help" {
        print!("{USAGE}");
        return ExitCode::SUCCESS;
    }
    let name = argv[0].clone();
    let args = match Args::parse(&argv[1..]) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if args.has("help") {
        print!("{}", subcommand_help(&name));
        return ExitCode::SUCCESS;
    }
    if !args.positional.is_empty() {
        eprintln!("error: unexpected argument `{}`", args.positional[0]);
        return ExitCode::from(2);
    }
    let report = match build(&name, &args) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let body = match args.get("format").unwrap_or("csv") {
        "csv" => report.to_csv(),
        "json" => report.to_json(),
        other => {
            eprintln!("error: --format expects csv|json, got `{other}`");
            return ExitCode::from(2);
        }
    };
    match args.get("out") {
        Some(path) => {
            if let Err(e) = std::fs::File::create(path).and_then(|mut f| f.write_all(body.as_bytes()))
            {
                eprintln!("error: cannot write `{path}`: {e}");
                return ExitCode::FAILURE;
            }
        }
        None => print!("{body}"),
    }
    if report.failed {
        eprintln!("one or more checks failed; see the report");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
