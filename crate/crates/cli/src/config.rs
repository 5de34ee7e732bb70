use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use colposet::linalg::CoeffRing;

#[derive(Parser, Debug)]
#[command(name = "colposet", version, about = "Coloured posets, bundles, spectral sequences and Khovanov homology")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Flags {
    /// Coefficients: q, f2, fp:<p> or z. Defaults to the input's `ring` field, then q.
    #[arg(long, global = true)]
    pub ring: Option<String>,
    /// Highest total degree to compute.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_degree: usize,
    /// Last page to print.
    #[arg(long, global = true, default_value_t = 4)]
    pub max_page: usize,
    /// Fixed crossings, numbered from 1.
    #[arg(long, global = true, value_delimiter = ',')]
    pub fixed: Vec<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    /// Run the comparison even when the base is not specially admissible.
    #[arg(long, global = true)]
    pub force_unsupported_base: bool,
    /// Seed for selftest.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Posets and coloured posets.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Bundles of coloured posets.
    #[command(subcommand)]
    Bundle(BundleCommand),
    /// Khovanov homology of a PD code.
    #[command(subcommand)]
    Khovanov(KhovanovCommand),
    /// Runs the property suite on a seeded random corpus.
    Selftest {
        /// Bundles per property.
        #[arg(long, default_value_t = 12)]
        cases: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PosetCommand {
    /// Admissibility and special admissibility of a poset.
    CheckAdmissible { path: PathBuf },
    /// Homology of a coloured poset.
    Homology { path: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum BundleCommand {
    /// The total coloured poset and its homology.
    Total { path: PathBuf },
    /// Pages of the spectral sequence, checked against the direct E2 and the total homology.
    Specseq { path: PathBuf },
    /// Long exact sequences for the coatoms of the base.
    LesCheck {
        path: PathBuf,
        /// Only this coatom.
        #[arg(long)]
        coatom: Option<String>,
        #[arg(long, value_enum, default_value_t = LesKind::Total)]
        complex: LesKind,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum LesKind {
    Total,
    Sequences,
}

#[derive(Subcommand, Debug)]
pub enum KhovanovCommand {
    /// Normalised and unnormalised Khovanov homology.
    Homology { path: PathBuf },
    /// Homology relative to the `--fixed` crossings, graded by (p, h, j).
    Fixed { path: PathBuf },
    /// The spectral sequence of the `--fixed` crossings in every quantum degree.
    Specseq { path: PathBuf },
}

/// Validated settings shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub ring: Option<CoeffRing>,
    pub max_degree: usize,
    pub max_page: usize,
    pub fixed: Vec<usize>,
    pub output: Format,
    pub force_unsupported_base: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_flags(f: &Flags) -> Result<RunConfig> {
        let ring = f
            .ring
            .as_deref()
            .map(|r| r.parse::<CoeffRing>().with_context(|| format!("unknown ring `{r}`")))
            .transpose()?;
        if f.max_degree == 0 || f.max_page == 0 {
            bail!("--max-degree and --max-page must be at least 1");
        }
        if f.fixed.contains(&0) {
            bail!("crossings are numbered from 1");
        }
        Ok(RunConfig {
            ring,
            max_degree: f.max_degree,
            max_page: f.max_page,
            fixed: f.fixed.iter().map(|c| c - 1).collect(),
            output: f.output,
            force_unsupported_base: f.force_unsupported_base,
            seed: f.seed,
        })
    }

    /// The `--ring` flag, else the input's own `ring` field, else `q`.
    pub fn ring_for(&self, json: &serde_json::Value) -> Result<CoeffRing> {
        if let Some(r) = self.ring {
            return Ok(r);
        }
        match json.get("ring").and_then(|r| r.as_str()) {
            Some(r) => r.parse().with_context(|| format!("unknown ring `{r}` in input")),
            None => Ok(CoeffRing::Rationals),
        }
    }
}
