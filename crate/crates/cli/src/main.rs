//! Command-line front end: exact degree computations, certified rational
//! error brackets, witness emission and checking, certificate pipelines, and
//! the acceptance suite. All machine-readable numbers are exact rational
//! strings; decimal hints in text output are explicitly approximate.

mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use signdeg::acceptance;
use signdeg::boolfun::{family_from_name, make_named, BooleanFunction, DomainCap};
use signdeg::certificates::{halfspace_criterion_cert, maj_error_table, maj_error_table_with_bits, MajTableRow};
use signdeg::composition::{brs_conjunction, compose_witness_threshold};
use signdeg::degrees::{
    approx_error, eps_approx_degree, gordan_witness, threshold_degree, DualWitness,
};
use signdeg::density::density_exact;
use signdeg::rat::{approx_decimal, format_rat, parse_rat, ratio};
use signdeg::rational::{rational_error_bracket, RationalApproximant};
use signdeg::{Error, Result};

#[derive(Parser)]
#[command(name = "signdeg", version, about = "Exact sign-representation and rational-approximation measures of Boolean functions")]
struct Cli {
    /// Domain size cap (points) for materialized functions
    #[arg(long, global = true, default_value_t = 1 << 20)]
    cap: usize,

    /// Fractional bits for dyadic surrogates of irrational constants
    #[arg(long, global = true, default_value_t = 64)]
    frac_bits: u32,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct FunctionArgs {
    /// Named family: maj, or, and, parity, hs, omb, andor, mp, rtlhs, id
    #[arg(long)]
    family: Option<String>,

    /// Family parameters, comma separated (e.g. --params 2,3)
    #[arg(long, value_delimiter = ',')]
    params: Vec<usize>,

    /// Shorthand for a single parameter n
    #[arg(long)]
    n: Option<usize>,

    /// Function definition file (JSON)
    #[arg(long)]
    file: Option<PathBuf>,
}

impl FunctionArgs {
    fn materialize(&self, cap: DomainCap) -> Result<BooleanFunction> {
        match (&self.family, &self.file) {
            (Some(name), None) => {
                let params = if let Some(n) = self.n {
                    vec![n]
                } else {
                    self.params.clone()
                };
                let fam = family_from_name(name, &params)?;
                make_named(&fam, cap)
            }
            (None, Some(path)) => spec::load_function(path, cap),
            _ => Err(Error::Parse(
                "give exactly one of --family or --file".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact threshold degree with primal and dual certificates
    Degthr {
        #[command(flatten)]
        function: FunctionArgs,
        /// Write the sign-representing polynomial here
        #[arg(long)]
        primal_out: Option<PathBuf>,
        /// Write the dual witness here
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Approximate degree: least degree within --eps, or the exact best
    /// error at --degree
    Adeg {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        eps: Option<String>,
        #[arg(long)]
        degree: Option<i64>,
    },
    /// Certified bracket of the least rational approximation error R+(f, d)
    Rbracket {
        #[command(flatten)]
        function: FunctionArgs,
        #[arg(long)]
        degree: i64,
        #[arg(long, default_value = "1/64")]
        precision: String,
    },
    /// Emit or check a dual witness
    Witness {
        #[command(flatten)]
        function: FunctionArgs,
        /// Orthogonality degree of the emitted witness
        #[arg(long)]
        degree: Option<i64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Verify a previously emitted witness file against the function
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Composed dual witness for F(f,...,f)
    ComposeWitness {
        /// Outer family name (on the cube)
        #[arg(long)]
        outer: String,
        #[arg(long, value_delimiter = ',')]
        outer_params: Vec<usize>,
        /// Inner family name
        #[arg(long)]
        inner: String,
        #[arg(long, value_delimiter = ',')]
        inner_params: Vec<usize>,
    },
    /// Conjunction sign representation from exact rational approximants
    Brs {
        #[command(flatten)]
        function: FunctionArgs,
        /// Number of conjuncts
        #[arg(long, default_value_t = 2)]
        copies: usize,
        /// Approximation degree for each conjunct
        #[arg(long)]
        degree: i64,
        #[arg(long, default_value = "1/16")]
        precision: String,
    },
    /// Bracket table for the sign function on ±{1..n}
    MajTable {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',')]
        d: Vec<i64>,
        #[arg(long, default_value = "1/64")]
        precision: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Halfspace criterion certificate pipeline
    HsCert {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact threshold density
    Density {
        #[command(flatten)]
        function: FunctionArgs,
        /// Search cap on the support size
        #[arg(long)]
        max_k: Option<usize>,
    },
    /// Named experiment bundles; `suite acceptance` runs every criterion
    Suite {
        /// Bundle name (acceptance)
        name: String,
        /// Run a single criterion by id
        #[arg(long)]
        only: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Execute an experiment config file
    RunConfig { path: PathBuf },
    /// Print a sample experiment config
    ConfigTemplate,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn write_or_print(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cap = DomainCap(cli.cap.min(signdeg::boolfun::MAX_DOMAIN_CAP));
    let frac_bits = cli.frac_bits.clamp(8, 4096);
    match cli.command {
        Command::Degthr {
            function,
            primal_out,
            witness_out,
        } => {
            let f = function.materialize(cap)?;
            let report = threshold_degree(&f)?;
            println!("{}", report.value);
            if let Some(path) = primal_out {
                std::fs::write(path, format!("{:?}\n", report.primal_certificate))?;
            }
            if let Some(path) = witness_out {
                match &report.dual_certificate {
                    Some(w) => std::fs::write(path, w.to_text())?,
                    None => std::fs::write(path, "none\n")?,
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Adeg {
            function,
            eps,
            degree,
        } => {
            let f = function.materialize(cap)?;
            match (eps, degree) {
                (Some(e), None) => {
                    let eps = parse_rat(&e)?;
                    println!("{}", eps_approx_degree(&f, &eps)?);
                }
                (None, Some(d)) => {
                    let r = approx_error(&f, d)?;
                    println!(
                        "{}  (~{})",
                        format_rat(&r.eps),
                        approx_decimal(&r.eps)
                    );
                }
                _ => {
                    return Err(Error::Parse(
                        "give exactly one of --eps or --degree".into(),
                    ))
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rbracket {
            function,
            degree,
            precision,
        } => {
            let f = function.materialize(cap)?;
            let prec = parse_rat(&precision)?;
            let b = rational_error_bracket(&f, degree, &prec)?;
            signdeg::rational::verify_bracket(&f, &b)?;
            println!(
                "d={} lower={} upper={}  (~{} .. ~{})",
                b.d,
                format_rat(&b.lower),
                format_rat(&b.upper),
                approx_decimal(&b.lower),
                approx_decimal(&b.upper)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Witness {
            function,
            degree,
            out,
            check,
        } => {
            let f = function.materialize(cap)?;
            if let Some(path) = check {
                let text = std::fs::read_to_string(&path)?;
                let w = DualWitness::from_text(&text)?;
                w.verify(&f)?;
                println!("witness verified");
                return Ok(ExitCode::SUCCESS);
            }
            let d = degree.ok_or_else(|| Error::Parse("--degree required".into()))?;
            match gordan_witness(&f, d)? {
                Some(w) => {
                    let text = w.to_text();
                    write_or_print(&out, &text)?;
                }
                None => println!("none"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ComposeWitness {
            outer,
            outer_params,
            inner,
            inner_params,
        } => {
            let outer_f = make_named(&family_from_name(&outer, &outer_params)?, cap)?;
            let inner_f = make_named(&family_from_name(&inner, &inner_params)?, cap)?;
            let d_inner = threshold_degree(&inner_f)?.value;
            if d_inner == 0 {
                return Err(Error::Precondition("inner function is constant".into()));
            }
            // outer dual one level below its exact-representation degree
            let mut d_outer = 0;
            while approx_error(&outer_f, d_outer)?.eps != signdeg::rat::rat(0) {
                d_outer += 1;
            }
            let psi_level = if d_outer > 0 { d_outer - 1 } else { 0 };
            let psi = approx_error(&outer_f, psi_level)?
                .dual
                .ok_or_else(|| Error::Inconsistency("outer dual missing".into()))?;
            let mu = gordan_witness(&inner_f, d_inner - 1)?
                .ok_or_else(|| Error::Inconsistency("inner witness missing".into()))?;
            let w = compose_witness_threshold(&psi, &outer_f, &mu, &inner_f, cap)?;
            println!(
                "orthogonal below degree {}, l1 mass {}, correlation bound {}",
                w.claimed_orthogonality,
                format_rat(&w.l1_mass),
                format_rat(&w.claimed_correlation_bound)
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Brs {
            function,
            copies,
            degree,
            precision,
        } => {
            let f = function.materialize(cap)?;
            let prec = parse_rat(&precision)?;
            let b = rational_error_bracket(&f, degree, &prec)?;
            let appr = b
                .upper_certificate
                .clone()
                .ok_or_else(|| Error::Inconsistency("no approximant".into()))?;
            let total: signdeg::Rat =
                (0..copies).map(|_| appr.verified_error.clone()).sum();
            if total >= signdeg::rat::rat(1) {
                return Err(Error::Precondition(format!(
                    "errors sum to {} >= 1; raise the degree",
                    format_rat(&total)
                )));
            }
            let fs = vec![f.clone(); copies];
            let approx: Vec<RationalApproximant> = vec![appr; copies];
            let poly = brs_conjunction(&fs, &approx, cap)?;
            println!(
                "sign representation of the {copies}-fold conjunction, degree {}",
                poly.total_degree()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::MajTable {
            n,
            d,
            precision,
            out,
        } => {
            let prec = parse_rat(&precision)?;
            let rows = maj_error_table_with_bits(n, &d, &prec, frac_bits)?;
            let mut csv = String::from(MajTableRow::csv_header());
            csv.push('\n');
            for row in &rows {
                csv.push_str(&row.to_csv());
                csv.push('\n');
            }
            write_or_print(&out, &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::HsCert { n, out } => {
            let cert = halfspace_criterion_cert(n, frac_bits)?;
            cert.verify()?;
            let mut text = format!(
                "degree {} delta {} implied_bound {}\n",
                cert.degree,
                format_rat(&cert.delta),
                format_rat(&cert.implied_bound)
            );
            for (p, w) in cert.psi_points.iter().zip(cert.psi_weights.iter()) {
                let coords: Vec<String> = p.iter().map(format_rat).collect();
                text.push_str(&format!("{} : {}\n", coords.join(" "), format_rat(w)));
            }
            write_or_print(&out, &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Density { function, max_k } => {
            let f = function.materialize(cap)?;
            let r = density_exact(&f, max_k)?;
            let masks: Vec<String> = r
                .support_witness
                .iter()
                .map(|m| format!("{m:b}"))
                .collect();
            println!("{}  support {{{}}}", r.value, masks.join(", "));
            Ok(ExitCode::SUCCESS)
        }
        Command::Suite { name, only, out } => {
            if name != "acceptance" {
                return Err(Error::Parse(format!("unknown suite {name}")));
            }
            let results = match only {
                Some(id) => vec![acceptance::run_criterion(id)?],
                None => acceptance::run_all(),
            };
            let text = acceptance::format_results(&results);
            write_or_print(&out, &text)?;
            if results.iter().all(|r| r.passed) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::FAILURE)
            }
        }
        Command::RunConfig { path } => {
            let text = std::fs::read_to_string(&path)?;
            let cfg = spec::ExperimentConfig::from_json(&text)?;
            run_config(cfg, cap)
        }
        Command::ConfigTemplate => {
            let cfg = spec::ExperimentConfig {
                schema: 1,
                command: "maj-table".into(),
                functions: vec![],
                degrees: vec![1, 2, 3, 4, 5, 6],
                sizes: vec![8, 16],
                precision: Some("1/64".into()),
                output: Some("table.csv".into()),
                format: spec::OutputFormat::Csv,
            };
            println!("{}", cfg.to_json());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_config(cfg: spec::ExperimentConfig, cap: DomainCap) -> Result<ExitCode> {
    let precision = cfg
        .precision
        .as_deref()
        .map(parse_rat)
        .transpose()?
        .unwrap_or_else(|| ratio(1, 64));
    let out = cfg.output.clone().map(PathBuf::from);
    match cfg.command.as_str() {
        "degthr" => {
            let mut lines = String::new();
            for fs in &cfg.functions {
                let f = fs.materialize(cap)?;
                lines.push_str(&format!("{} {}\n", f.name, threshold_degree(&f)?.value));
            }
            write_or_print(&out, &lines)?;
        }
        "rbracket" => {
            let mut lines = String::new();
            for fs in &cfg.functions {
                let f = fs.materialize(cap)?;
                for &d in &cfg.degrees {
                    let b = rational_error_bracket(&f, d, &precision)?;
                    lines.push_str(&format!(
                        "{},{},{},{}\n",
                        f.name,
                        d,
                        format_rat(&b.lower),
                        format_rat(&b.upper)
                    ));
                }
            }
            write_or_print(&out, &lines)?;
        }
        "maj-table" => {
            let mut csv = String::from(MajTableRow::csv_header());
            csv.push('\n');
            for &n in &cfg.sizes {
                for row in maj_error_table(n, &cfg.degrees, &precision)? {
                    csv.push_str(&row.to_csv());
                    csv.push('\n');
                }
            }
            write_or_print(&out, &csv)?;
        }
        other => return Err(Error::Parse(format!("unknown config command {other}"))),
    }
    Ok(ExitCode::SUCCESS)
}
