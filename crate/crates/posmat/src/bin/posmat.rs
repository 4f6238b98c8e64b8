//! Command-line front end: property suites, oracle decomposition,
//! monomial factoring, and seeded generation of words and oracle
//! descriptions. Exit codes: 0 pass, 1 mathematical failure or rejection,
//! 2 usage or parse error.

use clap::{Parser, Subcommand, ValueEnum};
use posmat::automorphism::oracle_from_parts;
use posmat::decompose::{decompose, PipelineConfig, Verdict};
use posmat::json;
use posmat::suites::{run_suite, SuiteConfig, SuiteError};
use posmat::words::{factor_monomial, random_word, GeneratorWord};
use posmat::RingId;
use rand::SeedableRng;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "posmat",
    about = "Nonnegative invertible matrices over exact ordered rings: \
             structure suites, automorphism decomposition, monomial factoring"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one property suite; ids: 1 2 3 4 5 7 8 9 10 11 12 13 theorem-identities
    Verify {
        /// Suite id
        suite: String,
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, env = "POSMAT_SEED", default_value_t = 0)]
        seed: u64,
        /// Write the JSON report here instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decompose an automorphism description (JSON file, or - for stdin)
    /// into standard form
    Decompose {
        input: PathBuf,
        /// Residual words compared against the oracle
        #[arg(long, default_value_t = 50)]
        words: usize,
        #[arg(long, env = "POSMAT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Factor a matrix (JSON file, or - for stdin) into a diagonal and a
    /// permutation generator
    Factor {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a seeded random artifact
    Gen {
        kind: GenKind,
        #[arg(long, default_value = "Q")]
        ring: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Word length (gen word)
        #[arg(long, default_value_t = 6)]
        length: usize,
        /// Composition parts (gen oracle)
        #[arg(long, default_value_t = 3)]
        parts: usize,
        #[arg(long, env = "POSMAT_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Word,
    Oracle,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(2)
}

fn parse_ring(s: &str) -> Result<RingId, String> {
    RingId::from_str(s).map_err(|e| e.to_string())
}

fn read_input(path: &Path) -> std::io::Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
    }
}

fn emit(text: &str, output: Option<&Path>) -> std::io::Result<()> {
    match output {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify {
            suite,
            ring,
            n,
            trials,
            seed,
            output,
        } => {
            let ring = match parse_ring(&ring) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            let cfg = SuiteConfig {
                ring,
                n,
                trials,
                seed,
            };
            match run_suite(&suite, &cfg) {
                Ok(report) => {
                    let text = json::to_json(&json::suite_report_to_dto(&report));
                    if let Err(e) = emit(&text, output.as_deref()) {
                        return usage_error(e);
                    }
                    if report.passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e @ SuiteError::UnknownSuite(_))
                | Err(e @ SuiteError::BadConfig(_))
                | Err(e @ SuiteError::UnsupportedRing { .. }) => usage_error(e),
            }
        }
        Cmd::Decompose {
            input,
            words,
            seed,
            output,
        } => {
            let text = match read_input(&input) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("{}: {}", input.display(), e)),
            };
            let dto: json::OracleDescriptionDto = match json::from_json(&text) {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            let (n, ring, parts) = match json::description_to_parts(&dto) {
                Ok(v) => v,
                Err(e) => return usage_error(e),
            };
            let oracle = match oracle_from_parts(n, ring, parts) {
                Ok(o) => o,
                Err(e) => return usage_error(e),
            };
            let config = PipelineConfig {
                word_count: words,
                seed,
                ..PipelineConfig::default()
            };
            let report = decompose(&oracle, &config);
            let ok = matches!(report.verdict, Verdict::Ok);
            let text = json::to_json(&json::report_to_dto(&report));
            if let Err(e) = emit(&text, output.as_deref()) {
                return usage_error(e);
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Factor { input, output } => {
            let text = match read_input(&input) {
                Ok(t) => t,
                Err(e) => return usage_error(format!("{}: {}", input.display(), e)),
            };
            let dto: json::MatrixDto = match json::from_json(&text) {
                Ok(d) => d,
                Err(e) => return usage_error(e),
            };
            let m = match json::matrix_from_dto(&dto) {
                Ok(m) => m,
                Err(e) => return usage_error(e),
            };
            match m.monomial_recognize() {
                Ok(mono) => {
                    let word = factor_monomial(&mono);
                    let text = json::to_json(&json::word_to_dto(&word));
                    if let Err(e) = emit(&text, output.as_deref()) {
                        return usage_error(e);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("{}", e);
                    ExitCode::from(1)
                }
            }
        }
        Cmd::Gen {
            kind,
            ring,
            n,
            length,
            parts,
            seed,
            output,
        } => {
            let ring = match parse_ring(&ring) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if n < 3 {
                return usage_error("n must be >= 3");
            }
            let text = match kind {
                GenKind::Word => {
                    let word = if length == 0 {
                        match GeneratorWord::new(n, ring, Vec::new()) {
                            Ok(w) => w,
                            Err(e) => return usage_error(e),
                        }
                    } else {
                        random_word(n, ring, length, seed)
                    };
                    json::to_json(&json::word_to_dto(&word))
                }
                GenKind::Oracle => {
                    if parts == 0 {
                        return usage_error("parts must be >= 1");
                    }
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    let list = posmat::automorphism::random_parts(&mut rng, n, ring, parts);
                    json::to_json(&json::parts_to_description(n, ring, &list))
                }
            };
            if let Err(e) = emit(&text, output.as_deref()) {
                return usage_error(e);
            }
            ExitCode::SUCCESS
        }
    }
}
