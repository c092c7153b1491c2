use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rmwd::boolfn::{parse_anf, rm_dimension, truth_table_from_anf};
use rmwd::classify::{classify_quotient_with_cap, ingest_classification, DEFAULT_SCHREIER_CAP};
use rmwd::cosetenum::coset_enumerator_with_cap;
use rmwd::dataio::{distribution_text, parse_partition_sizes, parse_transitions, write_atomic, TABLE1, TABLE2};
use rmwd::gf2group::{find_equivalence, top_image, DEFAULT_EQUIVALENCE_BUDGET};
use rmwd::oracle::{brute_force_distribution, validate_reference};
use rmwd::pipeline::{run_pipeline, PipelineConfig, Strategy};
use rmwd::{Error, Result};

#[derive(Parser)]
#[command(name = "rmwd", version, about = "Weight distributions of Reed-Muller codes and their cosets")]
struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Code {
    #[arg(long)]
    r: usize,
    #[arg(long)]
    m: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate every codeword of R(r,m).
    Brute {
        #[command(flatten)]
        code: Code,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write weight pairs i, n-i on one line.
        #[arg(long)]
        folded: bool,
    },
    /// Weight enumerator of the coset f + R(r,m).
    Coset {
        #[arg(long)]
        anf: String,
        #[command(flatten)]
        code: Code,
        /// Largest code dimension to enumerate.
        #[arg(long, default_value_t = rmwd::cosetenum::DEFAULT_CAP_LOG2)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify degree-d forms on m variables under GL(m,2).
    Classify {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stabilizer generators kept per class.
        #[arg(long, default_value_t = DEFAULT_SCHREIER_CAP)]
        schreier_cap: usize,
    },
    /// W[R(r,m)] as a class-weighted sum of squared coset enumerators.
    Pipeline {
        #[command(flatten)]
        code: Code,
        /// Classification of H^(r)(m-1); computed on the fly when omitted.
        #[arg(long)]
        classes: Option<PathBuf>,
        #[arg(long, default_value = "blocks")]
        strategy: Strategy,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random matrices tried per equivalence search.
        #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_BUDGET)]
        budget: u64,
        #[arg(long)]
        folded: bool,
    },
    /// Check a distribution file against the identities R(r,m) must satisfy.
    Verify {
        #[arg(long)]
        dist: PathBuf,
        #[command(flatten)]
        code: Code,
    },
    /// Search for A in GL(m,2) taking e1 to e2 modulo lower degree.
    Equiv {
        #[arg(long)]
        e1: String,
        #[arg(long)]
        e2: String,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = DEFAULT_EQUIVALENCE_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the shipped partition-size and transition tables.
    Fixtures,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn power_of_two(x: &BigUint) -> String {
    if x.count_ones() == 1 {
        format!("2^{}", x.bits() - 1)
    } else {
        x.to_string()
    }
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Brute { code, out, folded } => {
            let w = brute_force_distribution(code.r, code.m)?;
            let header = [format!("weight distribution of R({},{})", code.r, code.m)];
            emit(out.as_ref(), &distribution_text(&header, &w, folded))?;
            let expected = BigUint::one() << rm_dimension(code.r, code.m);
            eprintln!(
                "sum of coefficients {} (expected {})",
                power_of_two(&w.total()),
                power_of_two(&expected)
            );
            Ok(w.total() == expected)
        }
        Command::Coset { anf, code, cap, out } => {
            let f = parse_anf(&anf, code.m)?;
            let w = coset_enumerator_with_cap(&truth_table_from_anf(&f), code.r, code.m, cap)?;
            match out {
                Some(path) => {
                    let header = [format!("weight distribution of {anf} + R({},{})", code.r, code.m)];
                    write_atomic(&path, &distribution_text(&header, &w, false))?;
                }
                None => println!("{w}"),
            }
            Ok(true)
        }
        Command::Classify { d, m, out, seed, schreier_cap } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut c = classify_quotient_with_cap(d, m, schreier_cap, &mut rng)?;
            c.seed = Some(seed);
            write_atomic(&out, &c.to_text())?;
            eprintln!(
                "{} classes, orbit sizes sum to {}",
                c.len(),
                power_of_two(&c.total_size())
            );
            Ok(true)
        }
        Command::Pipeline {
            code,
            classes,
            strategy,
            jobs,
            checkpoint,
            out,
            seed,
            budget,
            folded,
        } => {
            let classification = match &classes {
                Some(path) => ingest_classification(&fs::read_to_string(path)?)?,
                None => {
                    if code.m == 0 {
                        return Err(Error::InvalidArgument("m must be positive".into()));
                    }
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    classify_quotient_with_cap(code.r, code.m - 1, DEFAULT_SCHREIER_CAP, &mut rng)?
                }
            };
            let cfg = PipelineConfig {
                r: code.r,
                m: code.m,
                strategy,
                seed,
                budget,
                jobs,
                checkpoint,
            };
            let result = run_pipeline(&classification, &cfg)?;
            for b in &result.buckets {
                log::info!(
                    "e = {}: n(e) = {}, |Δ(e)| = {}, s(e) = {}",
                    b.e,
                    b.classes,
                    b.raw_blocks,
                    b.merged_blocks
                );
            }
            let header = [
                format!("weight distribution of R({},{})", code.r, code.m),
                format!("strategy {strategy}"),
                format!("seed {seed}"),
            ];
            write_atomic(&out, &distribution_text(&header, &result.enumerator, folded))?;
            eprintln!(
                "{} classes ({} resumed), {} polynomial multiplications, sum {}",
                classification.len(),
                result.resumed,
                result.multiplications,
                power_of_two(&result.enumerator.total())
            );
            Ok(true)
        }
        Command::Verify { dist, code } => {
            let report = validate_reference(&fs::read_to_string(&dist)?, code.r, code.m)?;
            print!("{report}");
            match report.first_failure() {
                None => {
                    println!("PASS");
                    Ok(true)
                }
                Some(c) => {
                    println!("FAIL: {}", c.name);
                    Ok(false)
                }
            }
        }
        Command::Equiv { e1, e2, m, budget, seed } => {
            let a1 = parse_anf(&e1, m)?;
            let a2 = parse_anf(&e2, m)?;
            let d = a1.degree().max(a2.degree());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            match find_equivalence(&a1, &a2, d.saturating_sub(1), budget, &mut rng)? {
                Some(matrix) => {
                    println!("{matrix}");
                    let ok = top_image(&a1, &matrix)? == a2;
                    println!("{}", if ok { "verified" } else { "verification FAILED" });
                    Ok(ok)
                }
                None => {
                    println!("no equivalence found within {budget} attempts");
                    Ok(false)
                }
            }
        }
        Command::Fixtures => {
            let sizes = parse_partition_sizes(TABLE1, 7)?;
            let transitions = parse_transitions(TABLE2, 7)?;
            let raw: u64 = sizes.iter().map(|s| s.raw_blocks).sum();
            println!("sum of |Delta(e)| = {raw}");
            let mut ok = true;
            let mut weighted = 0u64;
            for t in &transitions {
                let holds = t.holds()?;
                ok &= holds;
                let target = t.target();
                let s = sizes.iter().find(|s| s.e == target).map(|s| s.merged_blocks);
                ok &= s.is_some();
                weighted += s.unwrap_or(0) * t.count;
                println!(
                    "{} n={} {} -> {}: {}",
                    if holds { "PASS" } else { "FAIL" },
                    t.count,
                    t.source(),
                    target,
                    t.matrix
                );
            }
            let n: u64 = transitions.iter().map(|t| t.count).sum();
            println!("sum of n(e) = {n}");
            println!("sum of n(e) s(e) = {weighted}");
            Ok(ok)
        }
    }
}
