use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minbcov::campaign::{self, CampaignConfig, OutputFormat, Suite};
use minbcov::complexes::Variant;

/// Exact verification campaigns for minimal BCOV brackets and SHO(d|d).
#[derive(Parser)]
#[command(name = "minbcov", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected suites and report every check.
    Verify(CommonArgs),
    /// Write structure-constant and sample tables.
    Export(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Mbcov,
    Potential,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long, value_enum, default_value_t = VariantArg::Mbcov)]
    variant: VariantArg,
    /// Potential degree, required with `--variant potential`.
    #[arg(long)]
    k: Option<usize>,
    /// Bound on the total degree of sampled polynomials.
    #[arg(long, default_value_t = 4)]
    deg: u32,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    arity_cap: usize,
    /// Suite to run; repeat for several. `all` (default) or `none`.
    #[arg(long = "check")]
    checks: Vec<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[arg(long, env = "MINBCOV_OUT_DIR")]
    out: Option<PathBuf>,
}

/// Failures that are the caller's fault.
struct UsageError(String);

impl CommonArgs {
    fn config(&self) -> Result<CampaignConfig, UsageError> {
        let variant = match (self.variant, self.k) {
            (VariantArg::Mbcov, None) => Variant::Mbcov,
            (VariantArg::Mbcov, Some(_)) => return Err(UsageError("--k only applies to --variant potential".into())),
            (VariantArg::Potential, Some(k)) => Variant::Potential(k),
            (VariantArg::Potential, None) => return Err(UsageError("--variant potential needs --k".into())),
        };
        let mut suites = Vec::new();
        if self.checks.is_empty() {
            suites = Suite::ALL.to_vec();
        }
        for c in &self.checks {
            match c.as_str() {
                "all" => suites.extend(Suite::ALL),
                "none" => {}
                s => suites.push(s.parse().map_err(|e: minbcov::CoreError| UsageError(e.to_string()))?),
            }
        }
        suites.sort();
        suites.dedup();
        let config = CampaignConfig {
            d: self.d,
            variant,
            max_degree: self.deg,
            trials: self.trials,
            seed: self.seed,
            arity_cap: self.arity_cap,
            suites,
            format: match self.format {
                FormatArg::Text => OutputFormat::Text,
                FormatArg::Json => OutputFormat::Json,
            },
        };
        config.validate().map_err(|e| UsageError(e.to_string()))?;
        Ok(config)
    }
}

fn write_files(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for (name, contents) in files {
        fs::write(dir.join(name), contents)?;
    }
    Ok(())
}

fn verify(args: &CommonArgs, config: &CampaignConfig) -> Result<bool, String> {
    let report = campaign::run(config).map_err(|e| e.to_string())?;
    match config.format {
        OutputFormat::Text => print!("{}", report.to_text()),
        OutputFormat::Json => print!("{}", report.to_jsonl()),
    }
    if let Some(dir) = &args.out {
        let files = [
            ("report.jsonl".to_string(), report.to_jsonl()),
            ("summary.json".to_string(), report.summary_json()),
            ("timings.jsonl".to_string(), report.timings_jsonl()),
        ];
        write_files(dir, &files).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    Ok(report.passed())
}

fn export(args: &CommonArgs, config: &CampaignConfig) -> Result<bool, String> {
    let tables = campaign::export_tables(config).map_err(|e| e.to_string())?;
    let files: Vec<(String, String)> = tables.into_iter().map(|t| (t.name, t.contents)).collect();
    match &args.out {
        Some(dir) => {
            write_files(dir, &files).map_err(|e| format!("{}: {e}", dir.display()))?;
            for (name, _) in &files {
                println!("{}", dir.join(name).display());
            }
        }
        None => {
            for (name, contents) in &files {
                println!("== {name}");
                print!("{contents}");
            }
        }
    }
    Ok(true)
}

type Action = fn(&CommonArgs, &CampaignConfig) -> Result<bool, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run): (&CommonArgs, Action) = match &cli.command {
        Command::Verify(a) => (a, verify),
        Command::Export(a) => (a, export),
    };
    let config = match args.config() {
        Ok(c) => c,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    match run(args, &config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
