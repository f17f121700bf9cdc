use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use pzcl_core::erosion::{erosion_distance, gh_lower_bound_report};
use pzcl_core::persistence::persistent_table;
use pzcl_core::{Error, FilteredComplex, FiniteMetricSpace, PersistentInvariantTable, Result};
use serde_json::{Map, Value};

use crate::config::RunConfig;
use crate::oracle_check;

/// Where a command's JSON goes.
#[derive(Debug)]
pub enum Output {
    Stdout(String),
    Files(Vec<(PathBuf, String)>),
}

impl Output {
    /// Writes everything; called only once every result is in hand.
    pub fn emit(self) -> Result<()> {
        match self {
            Output::Stdout(s) => println!("{s}"),
            Output::Files(files) => {
                for (path, text) in files {
                    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                        fs::create_dir_all(dir)?;
                    }
                    fs::write(&path, text + "\n")?;
                }
            }
        }
        Ok(())
    }
}

fn stamp(mut v: Value, timestamp: bool) -> Value {
    if timestamp {
        if let Value::Object(map) = &mut v {
            let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
            map.insert("generated_at".into(), Value::from(secs));
        }
    }
    v
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

pub fn read_metric(path: &Path) -> Result<FiniteMetricSpace> {
    FiniteMetricSpace::read_csv(BufReader::new(fs::File::open(path)?))
}

/// A metric CSV becomes a Vietoris–Rips filtration; anything else is read
/// as a simplicial-complex file.
pub fn read_filtration(path: &Path, cfg: &RunConfig) -> Result<FilteredComplex> {
    if is_csv(path) {
        let x = read_metric(path)?;
        FilteredComplex::build_vr_with(&x, cfg.vr_options())
    } else {
        FilteredComplex::read_complex(BufReader::new(fs::File::open(path)?), cfg.convention)
    }
}

pub fn invariants(input: &Path, cfg: &RunConfig) -> Result<Output> {
    let fc = read_filtration(input, cfg)?;
    let mut tables: Vec<(PersistentInvariantTable, Option<oracle_check::OracleSummary>)> = Vec::new();
    for &inv in &cfg.invariants {
        let table = persistent_table(&fc, cfg.field, cfg.max_deg, inv)?;
        let summary = if cfg.oracle {
            Some(oracle_check::check_table(&fc, &table, cfg.max_deg)?)
        } else {
            None
        };
        tables.push((table, summary));
    }
    let values: Vec<(String, Value)> = tables
        .iter()
        .map(|(t, summary)| {
            let mut v = serde_json::to_value(t)?;
            if let (Some(s), Value::Object(map)) = (summary, &mut v) {
                map.insert("oracle".into(), serde_json::to_value(s)?);
            }
            Ok((t.invariant.to_string(), stamp(v, cfg.timestamp)))
        })
        .collect::<Result<_>>()?;
    Ok(match &cfg.out {
        None if values.len() == 1 => Output::Stdout(pretty(&values[0].1)),
        None => Output::Stdout(pretty(&Value::Array(values.into_iter().map(|(_, v)| v).collect()))),
        Some(dir) => {
            let stem = input.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
            Output::Files(
                values
                    .into_iter()
                    .map(|(name, v)| (dir.join(format!("{stem}.{name}.json")), pretty(&v)))
                    .collect(),
            )
        }
    })
}

pub fn read_table(path: &Path) -> Result<PersistentInvariantTable> {
    PersistentInvariantTable::from_json(&fs::read_to_string(path)?)
}

fn single(v: Value, out: Option<&Path>) -> Output {
    match out {
        None => Output::Stdout(pretty(&v)),
        Some(p) => Output::Files(vec![(p.to_path_buf(), pretty(&v))]),
    }
}

pub fn erode(a: &Path, b: &Path, out: Option<&Path>, timestamp: bool) -> Result<Output> {
    let (ta, tb) = (read_table(a)?, read_table(b)?);
    if ta.invariant != tb.invariant {
        return Err(Error::InvalidTable(format!(
            "tables hold different invariants ({} vs {})",
            ta.invariant, tb.invariant
        )));
    }
    let report = erosion_distance(&ta, &tb)?;
    Ok(single(stamp(serde_json::to_value(&report)?, timestamp), out))
}

pub fn ghbound(a: &Path, b: &Path, cfg: &RunConfig) -> Result<Output> {
    let (x, y) = (read_metric(a)?, read_metric(b)?);
    let report = gh_lower_bound_report(&x, &y, &cfg.gh_config())?;
    Ok(single(stamp(serde_json::to_value(&report)?, cfg.timestamp), cfg.out.as_deref()))
}

/// Machine-readable error body for stderr.
pub fn error_json(e: &Error) -> String {
    let mut map = Map::new();
    map.insert("error".into(), Value::from(e.kind()));
    map.insert("message".into(), Value::from(e.to_string()));
    serde_json::to_string(&Value::Object(map)).expect("error serializes")
}

/// 2 for bad input, 3 for resource guards, 1 for internal failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if e.is_resource() => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}
