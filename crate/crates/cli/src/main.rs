use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use multirot::Exec;
use multirot_cli::config::{BasisSpec, EmbedSpec, ExperimentConfig, IfsSpec, Kind, MapSpec, ScaleRange, StrategySpec, VerifyParams};
use multirot_cli::{run_config, CliError, CliResult};

#[derive(Parser)]
#[command(name = "multirot", version, about = "Run multi-rotation orbit and self-similar embedding experiments")]
struct Cli {
    /// Seed for random strategies and random test sets.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Fixed-point precision of orbit points (64..=128).
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Output directory for results.csv, summary.json and plot.svg.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for the data-parallel paths.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run every data-parallel path sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run { config: PathBuf },
    /// Run a named verification recipe.
    Verify {
        /// lemma2.2, thm1.5i, thm1.5ii, bounds-eq:EFub-EFlb or threshold-c.
        theorem: String,
        /// Recipe parameters as a JSON object.
        #[arg(long)]
        params: Option<String>,
        #[command(flatten)]
        steps: StepArgs,
        #[arg(long)]
        strategy: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Generate an orbit.
    Orbit {
        #[command(flatten)]
        steps: StepArgs,
        #[arg(long, default_value = "random")]
        strategy: String,
        #[arg(long)]
        n: usize,
    },
    /// Covering profile and box-dimension estimate of an orbit.
    Boxdim {
        #[command(flatten)]
        steps: StepArgs,
        #[arg(long, default_value = "random")]
        strategy: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 6)]
        k_min: u32,
        #[arg(long, default_value_t = 14)]
        k_max: u32,
    },
    /// Rank of the rational span of the given reals.
    Rank {
        #[command(flatten)]
        steps: StepArgs,
        #[arg(long)]
        include_one: bool,
    },
    /// Embedding trace for line IFSs; defaults to the middle-third pair.
    Embed {
        /// Maps of E as `ratio:sign:shift`, comma separated.
        #[arg(long)]
        e: Option<String>,
        /// Maps of F, same format.
        #[arg(long)]
        f: Option<String>,
        #[arg(long, default_value = "1")]
        m: String,
        #[arg(long, default_value = "0")]
        b: String,
        #[arg(long, default_value_t = 40)]
        n_max: usize,
    },
}

#[derive(Args, Default)]
struct StepArgs {
    /// Basis entry `sqrt<n>` for a square-free `n`.
    #[arg(long = "sqrt")]
    sqrts: Vec<u64>,
    /// Basis entry `label=decimal` (declared irrational).
    #[arg(long = "basis")]
    basis: Vec<String>,
    /// Step (or real) expression over the basis, e.g. `1/2 + 3*sqrt2`.
    #[arg(long = "step")]
    steps: Vec<String>,
}

impl StepArgs {
    fn apply(self, cfg: &mut ExperimentConfig) -> CliResult<()> {
        cfg.basis.extend(self.sqrts.into_iter().map(BasisSpec::sqrt));
        for b in self.basis {
            let Some((label, value)) = b.split_once('=') else {
                return Err(CliError::Validation(format!("--basis expects label=value, got {b:?}")));
            };
            cfg.basis.push(BasisSpec { label: label.into(), value: Some(value.into()), sqrt: None, declared_irrational: None });
        }
        cfg.steps = self.steps;
        Ok(())
    }
}

fn parse_strategy(s: &str) -> CliResult<StrategySpec> {
    let (name, arg) = s.split_once(':').unwrap_or((s, ""));
    let word = || -> CliResult<Vec<usize>> {
        arg.split(',').map(|t| t.trim().parse().map_err(|_| CliError::Validation(format!("bad symbol in {s:?}")))).collect()
    };
    match name {
        "random" if arg.is_empty() => Ok(StrategySpec::Random { seed: None }),
        "random" => Ok(StrategySpec::Random { seed: Some(arg.parse().map_err(|_| CliError::Validation(format!("bad seed in {s:?}")))?) }),
        "explicit" => Ok(StrategySpec::Explicit { word: word()? }),
        "periodic" => Ok(StrategySpec::Periodic { word: word()? }),
        "greedy-avoid" => {
            let v: Vec<f64> = arg.split(',').filter_map(|t| t.trim().parse().ok()).collect();
            match v[..] {
                [a, b] => Ok(StrategySpec::GreedyAvoid { forbidden: [a, b] }),
                _ => Err(CliError::Validation(format!("greedy-avoid expects two endpoints, got {s:?}"))),
            }
        }
        _ => Err(CliError::Validation(format!("unknown strategy {s:?}"))),
    }
}

fn parse_ifs(s: &str) -> CliResult<IfsSpec> {
    let maps = s
        .split(',')
        .map(|m| {
            let parts: Vec<&str> = m.split(':').map(str::trim).collect();
            let [ratio, sign, shift] = parts[..] else {
                return Err(CliError::Validation(format!("map {m:?} is not ratio:sign:shift")));
            };
            let sign: i8 = sign.parse().map_err(|_| CliError::Validation(format!("bad sign in {m:?}")))?;
            Ok(MapSpec { ratio: ratio.into(), shift: vec![shift.into()], sign: Some(sign), turn: None, irrational_turn: None })
        })
        .collect::<CliResult<_>>()?;
    Ok(IfsSpec { maps, depth: None })
}

fn config_from(command: Command) -> CliResult<ExperimentConfig> {
    let cfg = match command {
        Command::Run { config } => ExperimentConfig::load(&config)?,
        Command::Verify { theorem, params, steps, strategy, n } => {
            let mut c = ExperimentConfig::new(Kind::VerifyTheorem);
            c.theorem = Some(theorem);
            if let Some(p) = params {
                let p: VerifyParams = serde_json::from_str(&p).map_err(|e| CliError::Validation(format!("--params: {e}")))?;
                c.params = Some(p);
            }
            steps.apply(&mut c)?;
            c.strategy = strategy.as_deref().map(parse_strategy).transpose()?;
            c.n = n;
            c
        }
        Command::Orbit { steps, strategy, n } => {
            let mut c = ExperimentConfig::new(Kind::Orbit);
            steps.apply(&mut c)?;
            c.strategy = Some(parse_strategy(&strategy)?);
            c.n = Some(n);
            c
        }
        Command::Boxdim { steps, strategy, n, k_min, k_max } => {
            let mut c = ExperimentConfig::new(Kind::Boxdim);
            steps.apply(&mut c)?;
            c.strategy = Some(parse_strategy(&strategy)?);
            c.n = Some(n);
            c.scales = Some(ScaleRange { k_min, k_max });
            c
        }
        Command::Rank { steps, include_one } => {
            let mut c = ExperimentConfig::new(Kind::Rank);
            steps.apply(&mut c)?;
            c.include_one = Some(include_one);
            c
        }
        Command::Embed { e, f, m, b, n_max } => {
            let mut c = ExperimentConfig::new(Kind::Embed);
            let mut spec = EmbedSpec::cantor_pair(n_max);
            if let Some(e) = e {
                spec.e = parse_ifs(&e)?;
            }
            if let Some(f) = f {
                spec.f = parse_ifs(&f)?;
            }
            spec.m = m;
            spec.b = b;
            c.embed = Some(spec);
            c
        }
    };
    Ok(cfg)
}

fn execute(cli: Cli) -> CliResult<()> {
    #[cfg(feature = "parallel")]
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Validation(format!("--threads: {e}")))?;
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let mut cfg = config_from(cli.command)?;
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.bits.is_some() {
        cfg.bits = cli.bits;
    }
    let out = cli.out.or_else(|| cfg.output_dir.as_ref().map(PathBuf::from)).unwrap_or_else(|| PathBuf::from("multirot-out"));
    let artifacts = run_config(&cfg, exec)?;
    artifacts.write_to(&out)?;
    print!("{}", artifacts.summary_text());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("multirot: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
