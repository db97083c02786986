use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pepsavg_core::reduction::Variant;

#[derive(Parser, Debug)]
#[command(name = "pepsavg", version, about = "Exact PEPS contraction and worst-to-average-case reductions")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Master seed; every random draw derives from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for independent trials.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallel: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact norm <psi|psi> of a PEPS instance.
    Contract {
        instance: PathBuf,
    },
    /// Unnormalized expectation value <psi|O|psi>.
    Uev(ExpectationArgs),
    /// Normalized expectation value <psi|O|psi> / <psi|psi>.
    Nev(ExpectationArgs),
    /// Run a reduction experiment against a simulated faulty oracle.
    Reduce(ReduceArgs),
    /// Lipton's reduction for the permanent over F_q.
    Permanent(PermanentArgs),
    /// Numerically check one of the analytic ingredients.
    VerifyLemma {
        #[arg(value_enum)]
        lemma: Lemma,
        /// Constant for the r + 1 node family of the interpolation bound.
        #[arg(long, default_value_t = 1.0)]
        rakhmanov_c: f64,
        /// Constant for the general family.
        #[arg(long, default_value_t = 1.5)]
        rakhmanov_c_general: f64,
    },
    /// Time the contraction engine and one reduction.
    Bench {
        /// Repetitions per case.
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

#[derive(Args, Debug)]
pub struct ExpectationArgs {
    pub instance: PathBuf,
    /// Observable JSON; defaults to diag(1, -1, 0, ...) on vertex 0.
    #[arg(long)]
    pub observable: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// Full experiment configuration; replaces every other reduce option.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_variant, default_value = "exact")]
    pub variant: Variant,
    /// Target PEPS JSON; defaults to the cluster state.
    #[arg(long, conflicts_with = "cluster")]
    pub instance: Option<PathBuf>,
    /// Cluster-state lattice, `WIDTHxHEIGHT`.
    #[arg(long, value_parser = parse_lattice, default_value = "2x2")]
    pub cluster: (usize, usize),
    #[arg(long)]
    pub observable: Option<PathBuf>,
    /// I.i.d. probability that an oracle answer is wrong.
    #[arg(long, default_value_t = 0.0)]
    pub failure_rate: f64,
    /// Corrupt an evenly spread fixed fraction of queries instead.
    #[arg(long)]
    pub adversarial: bool,
    /// Queries per repeat.
    #[arg(long)]
    pub k: Option<usize>,
    /// Repeats in the majority vote.
    #[arg(long, default_value_t = 25)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Oracle noise 2^-B per component (noisy variant).
    #[arg(long, default_value_t = 64)]
    pub noise_bits: u32,
    /// Blend window, as a rational like `1/1000`.
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub translation_invariant: bool,
    #[arg(long)]
    pub no_early_stop: bool,
}

#[derive(Args, Debug)]
pub struct PermanentArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 101)]
    pub q: u64,
    #[arg(long, default_value_t = 0.0)]
    pub failure_rate: f64,
    /// Queries per repeat; defaults to 4n.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 15)]
    pub repeats: usize,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Reduce this matrix instead of random ones.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    GaussianTv,
    DegreeBound,
    Paturi,
    Rakhmanov,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse::<Variant>().map_err(|e| e.to_string())
}

fn parse_lattice(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WIDTHxHEIGHT, got '{s}'"))?;
    let w: usize = w.trim().parse().map_err(|_| format!("bad width in '{s}'"))?;
    let h: usize = h.trim().parse().map_err(|_| format!("bad height in '{s}'"))?;
    if w == 0 || h == 0 {
        return Err("lattice sides must be positive".into());
    }
    Ok((w, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_parsing() {
        assert_eq!(parse_lattice("2x3"), Ok((2, 3)));
        assert!(parse_lattice("0x3").is_err());
        assert!(parse_lattice("23").is_err());
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["pepsavg", "reduce", "--variant", "nev", "--seed", "7", "--format", "csv"]).unwrap();
        assert_eq!(cli.global.seed, 7);
        assert_eq!(cli.global.format, Format::Csv);
        assert!(matches!(cli.command, Command::Reduce(ReduceArgs { variant: Variant::Nev, .. })));
    }
}
