use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::comparators::TacticProfile;
use crate::game::PayoffMatrix;
use crate::mixed::{Integration, StrategyDensity, DEFAULT_RESOLUTION};
use crate::tolerance;
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "qbos",
    version,
    about = "Mixed quantum strategies for the Battle of the Sexes",
    after_help = "Strategies: point:<theta>,<phi>,<psi> (radians) | haar-uniform | euler-uniform\n\
                  Exit codes: 0 success/equilibrium, 1 runtime error, 2 usage or domain error,\n\
                  3 not-equilibrium (verify), 4 inconclusive (verify)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Payoff of a pair of pure strategies.
    Pure {
        #[command(flatten)]
        payoffs: PayoffArgs,
        #[command(flatten)]
        strategies: StrategyArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Expected payoffs of a pair of mixed strategies.
    Mixed {
        #[command(flatten)]
        payoffs: PayoffArgs,
        #[command(flatten)]
        strategies: StrategyArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check whether a pair of mixed strategies is a Nash equilibrium.
    Verify {
        #[command(flatten)]
        payoffs: PayoffArgs,
        #[command(flatten)]
        strategies: StrategyArgs,
        #[command(flatten)]
        method: MethodArgs,
        /// Gap tolerance (payoff units); the effective threshold also
        /// covers four standard errors under Monte Carlo.
        #[arg(long, default_value_t = tolerance::EQUILIBRIUM_GAP)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Best pure response to one player's strategy; give exactly one of
    /// --a / --b and the other player responds.
    BestResponse {
        #[command(flatten)]
        payoffs: PayoffArgs,
        #[command(flatten)]
        strategies: StrategyArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The classical payoff table and its pure equilibria.
    Classical {
        #[command(flatten)]
        payoffs: PayoffArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The identity / bit-flip tactic game.
    Mw {
        #[command(flatten)]
        payoffs: PayoffArgs,
        /// Probability that Alice flips.
        #[arg(long, requires = "q")]
        p: Option<f64>,
        /// Probability that Bob flips.
        #[arg(long, requires = "p")]
        q: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Verify the four uniform-family equilibrium profiles.
    Table {
        #[command(flatten)]
        payoffs: PayoffArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = tolerance::EQUILIBRIUM_GAP)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct PayoffArgs {
    /// Payoff to the player whose preferred venue is chosen (default 3).
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Payoff to the other player in that case (default 2).
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Payoff on a mismatch (default 1).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StrategyArgs {
    /// Alice's strategy.
    #[arg(long = "a", allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Bob's strategy.
    #[arg(long = "b", allow_hyphen_values = true)]
    pub b: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MethodArgs {
    /// Monte Carlo with this many samples per player (needs --seed).
    #[arg(long, conflicts_with = "quad")]
    pub mc: Option<usize>,
    /// Product quadrature with this many points per axis (default 48).
    #[arg(long)]
    pub quad: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Pure,
    Mixed,
    Verify,
    BestResponse,
    Classical,
    Mw,
    Table,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Pure => "pure",
            Mode::Mixed => "mixed",
            Mode::Verify => "verify",
            Mode::BestResponse => "best-response",
            Mode::Classical => "classical",
            Mode::Mw => "mw",
            Mode::Table => "table",
        })
    }
}

/// A fully validated run description.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub mode: Mode,
    pub payoffs: PayoffMatrix,
    /// True when no payoff flag was given and `(3, 2, 1)` is in use.
    pub example_instance: bool,
    pub strategy_a: Option<StrategyDensity>,
    pub strategy_b: Option<StrategyDensity>,
    pub method: Integration,
    pub tactics: Option<TacticProfile>,
    pub tolerance: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Parses an argument vector (including the program name).
pub fn parse_args<I, T>(argv: I) -> Result<ScenarioConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| Error::Usage(e.to_string()))?;
    ScenarioConfig::from_cli(cli)
}

impl PayoffArgs {
    fn resolve(&self) -> Result<(PayoffMatrix, bool)> {
        let d = PayoffMatrix::default();
        let example = self.alpha.is_none() && self.beta.is_none() && self.gamma.is_none();
        let pm = PayoffMatrix::new(
            self.alpha.unwrap_or(d.alpha()),
            self.beta.unwrap_or(d.beta()),
            self.gamma.unwrap_or(d.gamma()),
        )?;
        Ok((pm, example))
    }
}

impl MethodArgs {
    fn resolve(&self) -> Result<Integration> {
        let method = match (self.mc, self.quad) {
            (Some(samples), None) => {
                let seed = self.seed.ok_or_else(|| {
                    Error::Usage("--mc requires --seed so the run can be reproduced".into())
                })?;
                Integration::MonteCarlo { samples, seed }
            }
            (None, Some(resolution)) => Integration::Quadrature { resolution },
            (None, None) => Integration::Quadrature {
                resolution: DEFAULT_RESOLUTION,
            },
            (Some(_), Some(_)) => {
                return Err(Error::Usage(
                    "--mc and --quad are mutually exclusive".into(),
                ))
            }
        };
        if self.seed.is_some() && self.mc.is_none() {
            return Err(Error::Usage("--seed only applies to --mc runs".into()));
        }
        method.validate()?;
        Ok(method)
    }
}

fn parse_strategy(flag: &str, spec: Option<&String>) -> Result<Option<StrategyDensity>> {
    spec.map(|s| {
        s.parse::<StrategyDensity>().map_err(|e| match e {
            Error::Usage(m) => Error::Usage(format!("--{flag}: {m}")),
            other => other,
        })
    })
    .transpose()
}

fn require(flag: &str, mode: Mode, v: Option<StrategyDensity>) -> Result<StrategyDensity> {
    v.ok_or_else(|| Error::Usage(format!("{mode} mode requires --{flag}")))
}

fn check_tolerance(tol: f64) -> Result<f64> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(tol)
    } else {
        Err(Error::Usage(format!(
            "--tol must be finite and non-negative, got {tol}"
        )))
    }
}

impl ScenarioConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let base = |mode, payoffs: &PayoffArgs, output: OutputArgs| -> Result<ScenarioConfig> {
            let (pm, example) = payoffs.resolve()?;
            Ok(ScenarioConfig {
                mode,
                payoffs: pm,
                example_instance: example,
                strategy_a: None,
                strategy_b: None,
                method: Integration::default(),
                tactics: None,
                tolerance: tolerance::EQUILIBRIUM_GAP,
                format: output.format,
                out: output.out,
            })
        };
        match cli.command {
            Command::Pure {
                payoffs,
                strategies,
                output,
            } => {
                let mut cfg = base(Mode::Pure, &payoffs, output)?;
                let a = require("a", Mode::Pure, parse_strategy("a", strategies.a.as_ref())?)?;
                let b = require("b", Mode::Pure, parse_strategy("b", strategies.b.as_ref())?)?;
                for (flag, d) in [("a", &a), ("b", &b)] {
                    if !matches!(d, StrategyDensity::PointMass(_)) {
                        return Err(Error::Usage(format!(
                            "pure mode needs point strategies, got --{flag} {d}"
                        )));
                    }
                }
                cfg.strategy_a = Some(a);
                cfg.strategy_b = Some(b);
                Ok(cfg)
            }
            Command::Mixed {
                payoffs,
                strategies,
                method,
                output,
            } => {
                let mut cfg = base(Mode::Mixed, &payoffs, output)?;
                cfg.strategy_a = Some(require(
                    "a",
                    Mode::Mixed,
                    parse_strategy("a", strategies.a.as_ref())?,
                )?);
                cfg.strategy_b = Some(require(
                    "b",
                    Mode::Mixed,
                    parse_strategy("b", strategies.b.as_ref())?,
                )?);
                cfg.method = method.resolve()?;
                Ok(cfg)
            }
            Command::Verify {
                payoffs,
                strategies,
                method,
                tol,
                output,
            } => {
                let mut cfg = base(Mode::Verify, &payoffs, output)?;
                cfg.strategy_a = Some(require(
                    "a",
                    Mode::Verify,
                    parse_strategy("a", strategies.a.as_ref())?,
                )?);
                cfg.strategy_b = Some(require(
                    "b",
                    Mode::Verify,
                    parse_strategy("b", strategies.b.as_ref())?,
                )?);
                cfg.method = method.resolve()?;
                cfg.tolerance = check_tolerance(tol)?;
                Ok(cfg)
            }
            Command::BestResponse {
                payoffs,
                strategies,
                method,
                output,
            } => {
                let mut cfg = base(Mode::BestResponse, &payoffs, output)?;
                cfg.strategy_a = parse_strategy("a", strategies.a.as_ref())?;
                cfg.strategy_b = parse_strategy("b", strategies.b.as_ref())?;
                if cfg.strategy_a.is_some() == cfg.strategy_b.is_some() {
                    return Err(Error::Usage(
                        "best-response needs exactly one of --a / --b (the fixed opponent)".into(),
                    ));
                }
                cfg.method = method.resolve()?;
                Ok(cfg)
            }
            Command::Classical { payoffs, output } => base(Mode::Classical, &payoffs, output),
            Command::Mw {
                payoffs,
                p,
                q,
                output,
            } => {
                let mut cfg = base(Mode::Mw, &payoffs, output)?;
                if let (Some(p), Some(q)) = (p, q) {
                    cfg.tactics = Some(TacticProfile::new(p, q)?);
                }
                Ok(cfg)
            }
            Command::Table {
                payoffs,
                method,
                tol,
                output,
            } => {
                let mut cfg = base(Mode::Table, &payoffs, output)?;
                cfg.method = method.resolve()?;
                cfg.tolerance = check_tolerance(tol)?;
                Ok(cfg)
            }
        }
    }
}
