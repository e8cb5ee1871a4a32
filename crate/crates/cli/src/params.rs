use std::fs;
use std::path::PathBuf;

use clap::Args;
use hyperec::model::{parse_delta, ParamOverrides};
use hyperec::ModelParams;
use num_rational::Ratio;

use crate::CliError;

/// Model flags shared by commands that sample.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// key=value file with n, d, c, delta, seed; flags override it
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    /// Scale c in p = c·n^(δ−d+1) [default: 1]
    #[arg(long)]
    pub c: Option<f64>,
    /// δ as num/den or decimal
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ParamArgs {
    /// Config file values with flags laid over them.
    pub fn overrides(&self) -> Result<ParamOverrides, CliError> {
        let base = match &self.config {
            Some(path) => ParamOverrides::parse(&read(path)?)?,
            None => ParamOverrides::default(),
        };
        let flags = ParamOverrides {
            n: self.n,
            d: self.d,
            c: self.c,
            delta: self.delta.as_deref().map(parse_delta).transpose()?,
            seed: self.seed,
        };
        Ok(base.overlay(&flags))
    }

    pub fn resolve(&self) -> Result<ModelParams, CliError> {
        let o = self.overrides()?;
        let delta = o.delta.ok_or_else(|| missing("delta"))?;
        build(&o, delta)
    }
}

/// Builds params from resolved overrides at a given δ.
pub fn build(o: &ParamOverrides, delta: Ratio<i64>) -> Result<ModelParams, CliError> {
    let n = o.n.ok_or_else(|| missing("n"))?;
    let d = o.d.ok_or_else(|| missing("d"))?;
    Ok(ModelParams::new(
        n,
        d,
        o.c.unwrap_or(1.0),
        delta,
        o.seed.unwrap_or(0),
    )?)
}

fn missing(key: &str) -> CliError {
    CliError::Usage(format!("missing --{key} (flag or config key)"))
}

pub fn read(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}
