//! Experiment configuration. Parsing is strict (unknown fields are rejected)
//! and mirrors the published schema in `config.schema.json`.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use graphrep::estimators::{Event, Observable, RunShape, DEFAULT_BATCHES};
use graphrep::lattice::{
    build_box, build_cut_lattice, build_hexagonal_patch, build_hexagonal_torus, build_slab_sheet, build_torus, CutBase,
    SlabKind,
};
use graphrep::models::{Backend, Model, Param};
use graphrep::{BoundaryCondition, ModelParams, MultiGraph};
use schemars::JsonSchema;
use serde::Deserialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Subcommand {
    EnumerateCheck,
    TorusScan,
    MixingScan,
    Sample,
}

impl Subcommand {
    pub fn name(&self) -> &'static str {
        match self {
            Subcommand::EnumerateCheck => "enumerate-check",
            Subcommand::TorusScan => "torus-scan",
            Subcommand::MixingScan => "mixing-scan",
            Subcommand::Sample => "sample",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case", tag = "kind", deny_unknown_fields)]
pub enum HostSpec {
    Box { d: usize, n: usize },
    Torus { d: usize, n: usize },
    HexPatch { width: usize, height: usize },
    HexTorus { k: usize },
    Cycle { k: usize },
    Path { k: usize },
    /// Lattice with the cut hyperplane removed except the edge whose lower
    /// endpoint is `kept`.
    Cut { base: CutBase, n: usize, kept: Option<Vec<i64>> },
    /// The box hosting a sheet or slab.
    Slab { slab: SlabKind, d: usize, n: usize },
    /// A graph in the lattice JSON format.
    File { path: PathBuf },
}

impl HostSpec {
    pub fn build(&self) -> Result<MultiGraph> {
        Ok(match self {
            HostSpec::Box { d, n } => build_box(*d, *n)?,
            HostSpec::Torus { d, n } => build_torus(*d, *n)?,
            HostSpec::HexPatch { width, height } => build_hexagonal_patch(*width, *height)?,
            HostSpec::HexTorus { k } => build_hexagonal_torus(*k)?,
            HostSpec::Cycle { k } => MultiGraph::cycle(*k)?,
            HostSpec::Path { k } => MultiGraph::path(*k)?,
            HostSpec::Cut { base, n, kept } => build_cut_lattice(*base, *n, kept.as_deref())?,
            HostSpec::Slab { slab, d, n } => build_slab_sheet(*slab, *d, *n)?.0,
            HostSpec::File { path } => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                MultiGraph::from_json(&text)?
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            HostSpec::Box { .. } => "box",
            HostSpec::Torus { .. } => "torus",
            HostSpec::HexPatch { .. } => "hex-patch",
            HostSpec::HexTorus { .. } => "hex-torus",
            HostSpec::Cycle { .. } => "cycle",
            HostSpec::Path { .. } => "path",
            HostSpec::Cut { .. } => "cut",
            HostSpec::Slab { .. } => "slab",
            HostSpec::File { .. } => "file",
        }
    }

    /// `(d, n)` for CSV rows; the size parameter of the builder.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            HostSpec::Box { d, n } | HostSpec::Torus { d, n } | HostSpec::Slab { d, n, .. } => (d, n),
            HostSpec::HexPatch { width, .. } => (2, width),
            HostSpec::HexTorus { k } => (2, k),
            HostSpec::Cycle { k } | HostSpec::Path { k } => (1, k),
            HostSpec::Cut { base, n, .. } => match base {
                CutBase::Box { d } => (d, n),
                CutBase::Hexagonal => (2, n),
            },
            HostSpec::File { .. } => (0, 0),
        }
    }

    /// The same family at size `n`.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Ok(match self {
            HostSpec::Box { d, .. } => HostSpec::Box { d: *d, n },
            HostSpec::Torus { d, .. } => HostSpec::Torus { d: *d, n },
            HostSpec::HexTorus { .. } => HostSpec::HexTorus { k: n },
            HostSpec::Cycle { .. } => HostSpec::Cycle { k: n },
            HostSpec::Path { .. } => HostSpec::Path { k: n },
            other => bail!("host kind {} cannot be scanned over n", other.name()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum ModelName {
    Bernoulli,
    RandomCluster,
    Loop,
    Current,
    DoubleCurrent,
}

/// A model and exactly one of its parameters; the others are derived.
/// Bernoulli percolation takes its edge density as `p`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: ModelName,
    pub beta: Option<f64>,
    pub p: Option<f64>,
    pub x: Option<f64>,
}

impl ModelSpec {
    pub fn params(&self) -> Result<ModelParams> {
        let param = match (self.beta, self.p, self.x) {
            (Some(b), None, None) => Param::Beta(b),
            (None, Some(p), None) => Param::P(p),
            (None, None, Some(x)) => Param::X(x),
            _ => bail!("model needs exactly one of beta, p, x"),
        };
        Ok(ModelParams::convert(param)?)
    }

    pub fn model(&self) -> Result<Model> {
        if self.name == ModelName::Bernoulli {
            let Some(q) = self.p.filter(|_| self.beta.is_none() && self.x.is_none()) else {
                bail!("bernoulli takes its density as p and nothing else");
            };
            if !(0.0..=1.0).contains(&q) {
                bail!("bernoulli density {q} outside [0, 1]");
            }
            return Ok(Model::Bernoulli { q });
        }
        let m = self.params()?;
        Ok(match self.name {
            ModelName::RandomCluster => Model::RandomCluster { p: m.p },
            ModelName::Loop => Model::Loop { x: m.x },
            ModelName::Current => Model::Current { beta: m.beta },
            ModelName::DoubleCurrent => Model::DoubleCurrent { beta: m.beta },
            ModelName::Bernoulli => unreachable!(),
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum BcSpec {
    #[default]
    Free,
    Wired,
}

impl BcSpec {
    pub fn build(&self, g: &MultiGraph) -> Option<BoundaryCondition> {
        match self {
            BcSpec::Free => None,
            BcSpec::Wired => Some(BoundaryCondition::wired(g)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BcSpec::Free => "free",
            BcSpec::Wired => "wired",
        }
    }
}

fn default_batches() -> usize {
    DEFAULT_BATCHES
}

#[derive(Clone, Debug, PartialEq, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub subcommand: Subcommand,
    pub host: HostSpec,
    pub model: ModelSpec,
    #[serde(default)]
    pub bc: BcSpec,
    #[serde(default)]
    pub backend: Backend,
    /// Sizes for the scanning subcommands.
    #[serde(default)]
    pub n_values: Vec<usize>,
    #[serde(default)]
    pub observables: Vec<Observable>,
    /// Event on the edges of the window box for mixing scans.
    pub event: Option<Event>,
    pub window_n: Option<usize>,
    pub samples: Option<usize>,
    #[serde(default = "default_batches")]
    pub batches: usize,
    pub seed: u64,
    /// Output file; standard output when absent.
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    /// Parses and checks a config for `expected`.
    pub fn parse(text: &str, expected: Subcommand) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).context("invalid config")?;
        if cfg.subcommand != expected {
            bail!("config is for {}, not {}", cfg.subcommand.name(), expected.name());
        }
        cfg.model.model()?;
        let needs_samples = !matches!(expected, Subcommand::EnumerateCheck);
        if needs_samples && cfg.samples.is_none() {
            bail!("{} needs samples", expected.name());
        }
        if matches!(expected, Subcommand::TorusScan | Subcommand::MixingScan) {
            if cfg.n_values.is_empty() {
                bail!("{} needs n_values", expected.name());
            }
            cfg.host.with_n(1)?;
        }
        Ok(cfg)
    }

    pub fn shape(&self) -> RunShape {
        RunShape::new(self.samples.unwrap_or(0), self.seed).with_batches(self.batches)
    }
}

pub fn schema_json() -> String {
    serde_json::to_string_pretty(&schemars::schema_for!(ExperimentConfig)).unwrap() + "\n"
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
