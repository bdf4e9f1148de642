use areal_heights::pairings::{DEFAULT_NODES, DEFAULT_SERIES_TERMS};
use areal_heights::{Error, DEFAULT_ROOT_TOL};
use clap::ValueEnum;

pub const NODES_ENV: &str = "AREAL_HEIGHTS_NODES";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub quadrature_nodes: usize,
    pub root_tol: f64,
    pub series_terms: usize,
    pub output: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quadrature_nodes: DEFAULT_NODES,
            root_tol: DEFAULT_ROOT_TOL,
            series_terms: DEFAULT_SERIES_TERMS,
            output: Format::Json,
        }
    }
}

impl Config {
    /// Command-line values win over `AREAL_HEIGHTS_NODES`, which wins over the defaults.
    pub fn resolve(
        nodes: Option<usize>,
        env_nodes: Option<String>,
        root_tol: Option<f64>,
        output: Format,
    ) -> Result<Config, Error> {
        let mut cfg = Config {
            output,
            ..Config::default()
        };
        if let Some(raw) = env_nodes {
            cfg.quadrature_nodes = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("{NODES_ENV}={raw:?} is not an integer")))?;
        }
        if let Some(n) = nodes {
            cfg.quadrature_nodes = n;
        }
        if let Some(t) = root_tol {
            cfg.root_tol = t;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.quadrature_nodes;
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "quadrature nodes must be a power of two >= 16, got {n}"
            )));
        }
        if !(self.root_tol > 0.0 && self.root_tol < 1e-3) {
            return Err(Error::InvalidInput(format!(
                "root tolerance must lie in (0, 1e-3), got {}",
                self.root_tol
            )));
        }
        if self.series_terms == 0 {
            return Err(Error::InvalidInput("series terms must be positive".into()));
        }
        Ok(())
    }
}
