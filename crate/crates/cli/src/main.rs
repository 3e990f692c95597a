use std::path::PathBuf;
use std::process::ExitCode;

use algcochain::heat::{GradedLatex, HeatSign};
use algcochain::scenarios::{bott_pairing, bott_psi, mq_supertrace, todd_det_series, ThomScenario};
use algcochain::verify::{run_suite, Suite, VerifyOptions, SCHEMA_VERSION};
use algcochain_cli::expr::eval_source;
use algcochain_cli::render::{bott_text, report_text, thom_text, BottOutput, Emit, ThomOutput};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "algcochain", version, about = "Exact algebra-cochain computations and identity suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignConvention {
    Minus,
    Plus,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Run an identity suite: forms, bar, cochains, clifford, heat, jlo, mq or all.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// The Bott cochain over R^{2n} and its pairing.
    Bott {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=4))]
        n: u32,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// The Thom form supertrace of a rank m bundle.
    Thom {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=3))]
        rank: u32,
        #[arg(long)]
        curved: bool,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SignConvention::Auto)]
        sign_convention: SignConvention,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Evaluate an expression file, one expression per line.
    Expr {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse::<Suite>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { suite, max_degree, seed, emit } => {
            let r = run_suite(suite, &VerifyOptions { max_degree, seed });
            match emit {
                Emit::Json => println!("{}", serde_json::to_string_pretty(&r).expect("serializable")),
                _ => print!("{}", report_text(&r)),
            }
            if r.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Bott { n, emit } => {
            let (_, _, psi) = bott_psi(n as usize);
            let (pairing, raw) = bott_pairing(n as usize);
            let ok = psi.matches_closed_form && pairing == algcochain::Scalar::one();
            let out = BottOutput { schema: SCHEMA_VERSION, psi, pairing, unnormalized_pairing: raw };
            println!("{}", bott_text(&out, emit).trim_end());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Thom { rank, curved, order, sign_convention, emit } => {
            let m = rank as usize;
            let sign = match sign_convention {
                SignConvention::Minus => Some(HeatSign::Minus),
                SignConvention::Plus => Some(HeatSign::Plus),
                SignConvention::Auto => None,
            };
            let s = ThomScenario { m, curved, order: if curved { order } else { 0 }, sign };
            let requested = ThomScenario { order, ..s.clone() };
            let (_, warning) = requested.capped();
            if let Some(w) = &warning {
                eprintln!("warning: {}", w);
            }
            let (s, _) = ThomScenario { order: s.order, ..s }.capped();
            let series_order = order.min(ThomScenario::order_bound(m));
            match mq_supertrace(&s) {
                Ok((_, _, result)) => {
                    let series = todd_det_series(m, series_order);
                    let out = ThomOutput {
                        schema: SCHEMA_VERSION,
                        result,
                        todd_series: series.to_string(),
                        todd_series_latex: GradedLatex(&series).to_string(),
                        warning,
                    };
                    println!("{}", thom_text(&out, emit).trim_end());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(1)
                }
            }
        }
        Command::Expr { file, emit } => {
            let src = match std::fs::read_to_string(&file) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {}: {}", file.display(), e);
                    return ExitCode::from(2);
                }
            };
            match eval_source(&src) {
                Ok(values) => {
                    for (_, v) in values {
                        match emit {
                            Emit::Text => println!("{}", v),
                            Emit::Latex => println!("{}", v.to_latex()),
                            Emit::Json => println!("{}", serde_json::to_string(&v).expect("serializable")),
                        }
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}", e);
                    ExitCode::from(2)
                }
            }
        }
    }
}
