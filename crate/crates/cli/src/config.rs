use std::path::PathBuf;

use clap::Args;
use pzcl_core::erosion::GhConfig;
use pzcl_core::{Convention, Error, Invariant, Prime, Result, VrOptions};

/// Flags shared by the computing subcommands. Each can also be set through
/// a `PZCL_*` environment variable.
#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Field characteristic (2, 3, 5 or 7).
    #[arg(long, env = "PZCL_FIELD", default_value_t = 2)]
    pub field: u32,
    /// Largest simplex dimension built by the Vietoris–Rips expansion.
    #[arg(long, env = "PZCL_MAX_DIM", default_value_t = 3)]
    pub max_dim: usize,
    /// Largest cohomological degree computed; at most max-dim − 1.
    #[arg(long, env = "PZCL_MAX_DEG", default_value_t = 2)]
    pub max_deg: usize,
    /// Only simplices of diameter below this scale are built.
    #[arg(long, env = "PZCL_CAP", default_value_t = f64::INFINITY)]
    pub cap: f64,
    /// Abort when the filtration would hold more simplices than this.
    #[arg(long, env = "PZCL_SIMPLEX_LIMIT", default_value_t = 5_000_000)]
    pub simplex_limit: usize,
    /// Use `diam ≤ t` instead of `diam < t`.
    #[arg(long, env = "PZCL_CLOSED")]
    pub closed: bool,
    /// Invariant to tabulate: zcl, cuplength or betti_K. Repeatable.
    #[arg(long = "invariant", env = "PZCL_INVARIANT", value_delimiter = ',', default_value = "zcl")]
    pub invariants: Vec<String>,
    /// Cross-check results against the slow reference implementations.
    #[arg(long, env = "PZCL_ORACLE")]
    pub oracle: bool,
    /// Worker threads (default: available cores).
    #[arg(long, env = "PZCL_JOBS")]
    pub jobs: Option<usize>,
    /// Output file or directory; stdout if absent.
    #[arg(long, env = "PZCL_OUT")]
    pub out: Option<PathBuf>,
    /// Leave the generation timestamp out of the output.
    #[arg(long, env = "PZCL_NO_TIMESTAMP")]
    pub no_timestamp: bool,
}

/// Validated run settings.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub field: Prime,
    pub max_dim: usize,
    pub max_deg: usize,
    pub scale_cap: f64,
    pub simplex_limit: usize,
    pub convention: Convention,
    pub invariants: Vec<Invariant>,
    pub oracle: bool,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub timestamp: bool,
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self> {
        let field = Prime::new(args.field)?;
        if args.max_deg + 1 > args.max_dim {
            return Err(Error::Dimension(format!(
                "max-deg {} needs max-dim at least {}, got {}",
                args.max_deg,
                args.max_deg + 1,
                args.max_dim
            )));
        }
        if !(args.cap > 0.0) {
            return Err(Error::Dimension(format!("cap must be positive, got {}", args.cap)));
        }
        let jobs = match args.jobs {
            Some(0) => return Err(Error::Dimension("jobs must be at least 1".into())),
            Some(j) => j,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let mut invariants = Vec::new();
        for s in &args.invariants {
            let inv: Invariant = s.parse()?;
            if let Invariant::Betti(k) = inv {
                if k + 1 > args.max_dim {
                    return Err(Error::Dimension(format!("{inv} needs max-dim at least {}", k + 1)));
                }
            }
            if !invariants.contains(&inv) {
                invariants.push(inv);
            }
        }
        Ok(Self {
            field,
            max_dim: args.max_dim,
            max_deg: args.max_deg,
            scale_cap: args.cap,
            simplex_limit: args.simplex_limit,
            convention: if args.closed { Convention::Closed } else { Convention::Open },
            invariants,
            oracle: args.oracle,
            out: args.out.clone(),
            jobs,
            timestamp: !args.no_timestamp,
        })
    }

    pub fn vr_options(&self) -> VrOptions {
        VrOptions {
            max_dim: self.max_dim,
            scale_cap: self.scale_cap,
            convention: self.convention,
            simplex_limit: self.simplex_limit,
        }
    }

    pub fn gh_config(&self) -> GhConfig {
        GhConfig {
            field: self.field,
            max_deg: self.max_deg,
            vr: self.vr_options(),
            invariants: self.invariants.clone(),
        }
    }
}
