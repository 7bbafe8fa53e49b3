use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crkit_core::series::DEFAULT_RANK_SEED;

use crate::Failure;

#[derive(Parser)]
#[command(name = "crkit", version, about = "Formal CR geometry of real-analytic hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Reality, normality, minimality and degeneracy of a hypersurface.
    Analyze(AnalyzeArgs),
    /// Move a hypersurface to normal coordinates.
    Normalize(NormalizeArgs),
    /// Check that a formal map sends one hypersurface into another.
    CheckMap(MapArgs),
    /// Reflection function, Segre coefficients and partial convergence of a map.
    Reflect(ReflectArgs),
    /// Write the bundled example hypersurfaces and maps.
    Corpus(CorpusArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Doc,
}

#[derive(Args)]
pub struct Common {
    /// Truncation order; inputs of lower order cap it.
    #[arg(long, default_value_t = 8)]
    pub order: u32,
    /// Degeneracy cutoff for |alpha|; defaults to the order.
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Treat probable (uncertified) ranks as failures.
    #[arg(long, overrides_with = "no_strict")]
    strict: bool,
    #[arg(long = "no-strict", overrides_with = "strict")]
    no_strict: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the rank sampling points.
    #[arg(long, default_value_t = DEFAULT_RANK_SEED)]
    pub seed: u64,
}

/// Validated settings shared by all analysis commands.
#[derive(Clone, Copy)]
pub struct RunConfig {
    pub order: u32,
    pub cutoff: Option<u32>,
    pub strict: bool,
    pub format: Format,
    pub seed: u64,
}

impl Common {
    pub fn config(&self) -> Result<RunConfig, Failure> {
        if self.order < 2 {
            return Err(Failure::Input(format!("--order must be at least 2, got {}", self.order)));
        }
        match self.cutoff {
            Some(0) => return Err(Failure::Input("--cutoff must be at least 1".into())),
            Some(c) if c > self.order => {
                return Err(Failure::Input(format!("--cutoff {c} exceeds --order {}", self.order)))
            }
            _ => {}
        }
        Ok(RunConfig {
            order: self.order,
            cutoff: self.cutoff,
            strict: self.strict || !self.no_strict,
            format: self.format,
            seed: self.seed,
        })
    }
}

impl RunConfig {
    /// The cutoff at an effective order, which may be below the requested one.
    pub fn cutoff_at(&self, order: u32) -> Result<u32, Failure> {
        match self.cutoff {
            Some(c) if c > order => Err(Failure::Input(format!("--cutoff {c} exceeds the effective order {order}"))),
            Some(c) => Ok(c),
            None => Ok(order),
        }
    }
}

#[derive(Args)]
pub struct AnalyzeArgs {
    pub hypersurface: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct NormalizeArgs {
    pub hypersurface: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct MapArgs {
    #[arg(short = 's', long = "source")]
    pub source: PathBuf,
    #[arg(short = 't', long = "target")]
    pub target: PathBuf,
    #[arg(short = 'f', long = "map")]
    pub map: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args)]
pub struct ReflectArgs {
    #[command(flatten)]
    pub map: MapArgs,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    /// Run even if the map check fails.
    #[arg(long)]
    pub force: bool,
    /// Polydisc radius for the growth estimate of the Segre coefficients.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
}

#[derive(Args)]
pub struct CorpusArgs {
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
    #[arg(long, default_value_t = 12)]
    pub order: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common(args: &[&str]) -> Result<RunConfig, Failure> {
        let argv = ["crkit", "analyze", "m.crk"].iter().chain(args);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Analyze(a) => a.common.config(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn defaults() {
        let c = common(&[]).unwrap();
        assert_eq!((c.order, c.cutoff, c.strict, c.seed), (8, None, true, DEFAULT_RANK_SEED));
        assert_eq!(c.cutoff_at(5).unwrap(), 5);
    }

    #[test]
    fn strictness_last_flag_wins() {
        assert!(!common(&["--strict", "--no-strict"]).unwrap().strict);
        assert!(common(&["--no-strict", "--strict"]).unwrap().strict);
    }

    #[test]
    fn rejects_bad_orders() {
        assert!(matches!(common(&["--order", "1"]), Err(Failure::Input(_))));
        assert!(matches!(common(&["--cutoff", "0"]), Err(Failure::Input(_))));
        assert!(matches!(common(&["--order", "4", "--cutoff", "5"]), Err(Failure::Input(_))));
        let c = common(&["--cutoff", "6"]).unwrap();
        assert!(matches!(c.cutoff_at(4), Err(Failure::Input(_))));
    }
}
