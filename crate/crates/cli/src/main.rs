use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gdr_core::{
    enumerate_bamboos, enumerate_omegas, psi_lambda_g_integral, Correlators, TestClass, Verifier,
};

#[derive(Parser)]
#[command(name = "gdr", version, about = "Exact checks of B^g against the lambda_g DR cycle on M_{g,2}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pair both sides with every test class of degree g-1 and compare.
    Verify {
        #[arg(long)]
        genus: u32,
        /// Include kappa classes in the monomial test classes.
        #[arg(long)]
        kappa: bool,
        /// Add decorated two-vertex boundary test classes.
        #[arg(long)]
        boundary: bool,
        #[command(flatten)]
        cache: CacheArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Integral of B^g times a test class.
    Bside {
        #[arg(long)]
        genus: u32,
        /// e.g. "psi1^2 kappa1", or a chain "[1|psi2]-[2|1]".
        #[arg(long)]
        omega: String,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Coefficient of a^{2g} in the integral of DR_g(a,-a) lambda_g times a test class.
    Drside {
        #[arg(long)]
        genus: u32,
        #[arg(long)]
        omega: String,
    },
    /// Witten-Kontsevich correlator <tau_k1 ... tau_kn>_g.
    Witten {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        exps: Vec<u32>,
        #[command(flatten)]
        cache: CacheArgs,
    },
    /// Integral of psi_1^k1 ... psi_n^kn lambda_g.
    Hodge {
        #[arg(long)]
        genus: u32,
        #[arg(long, value_delimiter = ',', required = true)]
        exps: Vec<u32>,
    },
    /// List the terms of B^g as (genus, psi power) per vertex.
    Bamboos {
        #[arg(long)]
        genus: u32,
    },
}

#[derive(Args)]
struct CacheArgs {
    /// Correlator cache file [default: $GDR_CACHE, else a file in the temp dir].
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Neither read nor write a correlator cache.
    #[arg(long, conflicts_with = "cache")]
    no_cache: bool,
}

impl CacheArgs {
    fn path(&self) -> Option<PathBuf> {
        if self.no_cache {
            return None;
        }
        self.cache
            .clone()
            .or_else(|| std::env::var_os("GDR_CACHE").map(PathBuf::from))
            .or_else(|| Some(std::env::temp_dir().join("gdr-correlators.txt")))
    }

    fn open(&self) -> Correlators {
        let Some(path) = self.path() else {
            return Correlators::new();
        };
        let (wk, err) = Correlators::with_cache(&path);
        if let Some(e) = err {
            eprintln!("warning: {e}; starting from an empty cache");
        }
        wk
    }

    fn save(&self, wk: &Correlators) {
        if let Some(path) = self.path() {
            if let Err(e) = wk.store(&path) {
                eprintln!("warning: could not write cache: {e}");
            }
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_omega(genus: u32, spec: &str) -> Result<TestClass> {
    let omega: TestClass = spec
        .parse()
        .with_context(|| format!("cannot parse test class {spec:?}"))?;
    omega.check_complementary(genus)?;
    Ok(omega)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Verify {
            genus,
            kappa,
            boundary,
            cache,
            out,
            format,
        } => {
            let wk = cache.open();
            let verifier = Verifier::new(genus, &wk)?;
            let report = verifier.run(&enumerate_omegas(genus, kappa, boundary));
            cache.save(&wk);
            let text = match format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv(),
            };
            match out {
                Some(path) => fs::write(&path, text)
                    .with_context(|| format!("cannot write {}", path.display()))?,
                None => print!("{text}"),
            }
            for r in report.records.iter().filter(|r| !r.equal) {
                match &r.error {
                    Some(e) => eprintln!("FAIL {}: {e}", r.omega),
                    None => eprintln!(
                        "FAIL {}: bamboo {} != dr {}",
                        r.omega,
                        r.bamboo.as_ref().unwrap(),
                        r.dr.as_ref().unwrap()
                    ),
                }
            }
            eprintln!(
                "genus {genus}: {} passed, {} failed",
                report.passed(),
                report.failed()
            );
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Bside {
            genus,
            omega,
            cache,
        } => {
            let omega = parse_omega(genus, &omega)?;
            let wk = cache.open();
            let value = Verifier::new(genus, &wk)?.bamboo_side(&omega)?;
            cache.save(&wk);
            println!("{value}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Drside { genus, omega } => {
            let omega = parse_omega(genus, &omega)?;
            println!("{}", gdr_core::pair_dr_side(genus, &omega)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Witten { genus, exps, cache } => {
            let wk = cache.open();
            println!("{}", wk.eval(genus, &exps));
            cache.save(&wk);
            Ok(ExitCode::SUCCESS)
        }
        Command::Hodge { genus, exps } => {
            if genus == 0 && exps.len() < 3 {
                bail!("genus 0 needs at least three markings");
            }
            println!("{}", psi_lambda_g_integral(genus, &exps));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bamboos { genus } => {
            for b in enumerate_bamboos(genus)? {
                println!("{b}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
