use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use serde_json::Value;
use shiftframe::{GeneratorSpec, VERSION};

/// Everything needed to reproduce a run. The thread count is omitted so that
/// outputs are identical across thread counts.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub generator: Option<PathBuf>,
    pub points: Option<String>,
    pub params: BTreeMap<&'static str, Value>,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    pub fn new(subcommand: &'static str, seed: u64, out: Option<PathBuf>) -> Self {
        Self {
            subcommand,
            generator: None,
            points: None,
            params: BTreeMap::new(),
            out,
            seed,
        }
    }

    pub fn param(&mut self, name: &'static str, value: impl Serialize) -> &mut Self {
        self.params
            .insert(name, serde_json::to_value(value).expect("plain data serialises"));
        self
    }
}

pub fn read_generator(path: &Path) -> Result<GeneratorSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading generator {}", path.display()))?;
    let spec: GeneratorSpec =
        serde_json::from_str(&text).with_context(|| format!("parsing generator {}", path.display()))?;
    spec.validate()?;
    Ok(spec)
}

/// One real per line; blank lines and `#` comments are skipped.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line
            .parse()
            .with_context(|| format!("{}:{}: not a number: {line:?}", path.display(), i + 1))?;
        if !v.is_finite() {
            bail!("{}:{}: value must be finite", path.display(), i + 1);
        }
        out.push(v);
    }
    Ok(out)
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number {t:?} in {s:?}"))
        })
        .collect()
}

/// `start:stop:step`, inclusive of `start`, stopping before `stop + step/2`.
pub fn parse_range(s: &str) -> Result<Vec<f64>> {
    let parts = parse_list(&s.replace(':', ","))?;
    let [start, stop, step] = parts[..] else {
        bail!("range must be start:stop:step, got {s:?}");
    };
    if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite()) {
        bail!("range step must be positive in {s:?}");
    }
    let end = stop + 0.5 * step;
    let mut out = Vec::new();
    let mut i = 0u32;
    loop {
        let v = start + f64::from(i) * step;
        if v >= end {
            break;
        }
        out.push(v);
        i += 1;
    }
    Ok(out)
}

pub fn positive(name: &str, v: f64) -> Result<f64> {
    if !(v.is_finite() && v > 0.0) {
        bail!("--{name} must be positive, got {v}");
    }
    Ok(v)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    config: &'a RunConfig,
    result: T,
}

pub fn write_json(config: &RunConfig, result: impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(&Envelope {
        version: VERSION,
        config,
        result,
    })?;
    text.push('\n');
    emit(config.out.as_deref(), &text)
}

/// CSV preceded by `#` lines carrying the version and the run config.
pub fn write_csv(config: &RunConfig, body: &str) -> Result<()> {
    let text = format!(
        "# shiftframe {VERSION}\n# config {}\n{body}",
        serde_json::to_string(config)?
    );
    emit(config.out.as_deref(), &text)
}
