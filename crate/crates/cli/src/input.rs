use std::path::Path;

use anyhow::{bail, Context, Result};
use ddbar::{load_raw_complex, parse_manifold, Assignment, DoubleComplex, Scalar, Structure, StructureEquations, ValidationReport};
use sha2::{Digest, Sha256};

pub enum Source {
    Equations(StructureEquations),
    Raw(DoubleComplex),
}

pub struct Loaded {
    /// File name without directories, so reports do not depend on the cwd.
    pub name: String,
    /// Hex SHA-256 of the file bytes.
    pub digest: String,
    pub source: Source,
}

/// A complex evaluated at one assignment.
pub struct Instance {
    pub structure: Option<Structure>,
    pub validation: Option<ValidationReport>,
    pub complex: DoubleComplex,
}

pub fn load(path: &Path) -> Result<Loaded> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).context("input is not UTF-8")?;
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let source = if path.extension().is_some_and(|e| e == "dcplx") {
        Source::Raw(load_raw_complex(&text).with_context(|| format!("in {name}"))?)
    } else {
        Source::Equations(parse_manifold(&text).with_context(|| format!("in {name}"))?)
    };
    Ok(Loaded { name, digest: hex::encode(Sha256::digest(&bytes)), source })
}

impl Loaded {
    /// Structure and validation flags only; the complex is not built, so
    /// invalid structures can still be reported.
    pub fn validate(&self, assignment: &Assignment) -> Result<Option<ValidationReport>> {
        match &self.source {
            Source::Equations(eq) => Ok(Some(eq.instantiate(assignment)?.validate())),
            Source::Raw(_) => Ok(None),
        }
    }

    pub fn instance(&self, assignment: &Assignment) -> Result<Instance> {
        match &self.source {
            Source::Equations(eq) => {
                let s = eq.instantiate(assignment)?;
                let report = s.validate();
                if !report.d_squared_zero {
                    bail!("structure equations do not satisfy d^2 = 0: {}", report.issues.join("; "));
                }
                let name = if eq.name.is_empty() { self.name.clone() } else { eq.name.clone() };
                let complex = DoubleComplex::from_structure(&name, &s)?;
                Ok(Instance { structure: Some(s), validation: Some(report), complex })
            }
            Source::Raw(dc) => Ok(Instance { structure: None, validation: None, complex: dc.clone() }),
        }
    }
}

/// `name=v1,v2,...` or `name=start:step:count`.
pub fn parse_sweep(spec: &str) -> Result<(String, Vec<Scalar>)> {
    let Some((name, values)) = spec.split_once('=') else {
        bail!("sweep must look like name=values");
    };
    let name = name.trim().to_string();
    if name.is_empty() {
        bail!("sweep parameter name is empty");
    }
    let values = values.trim();
    let samples: Vec<Scalar> = if values.contains(':') {
        let parts: Vec<&str> = values.split(':').collect();
        let [start, step, count] = parts[..] else {
            bail!("grid sweep must be start:step:count");
        };
        let start: Scalar = start.trim().parse().context("grid start")?;
        let step: Scalar = step.trim().parse().context("grid step")?;
        let count: usize = count.trim().parse().context("grid count")?;
        (0..count).map(|k| &start + &(&step * &Scalar::from(k as i64))).collect()
    } else {
        ddbar::expr::split_top_level(values)
            .into_iter()
            .map(|v| v.trim().parse::<Scalar>().with_context(|| format!("sweep value '{}'", v.trim())))
            .collect::<Result<_>>()?
    };
    if samples.is_empty() {
        bail!("sweep has no samples");
    }
    for (i, a) in samples.iter().enumerate() {
        if samples[..i].contains(a) {
            bail!("sweep sample {a} appears twice");
        }
    }
    Ok((name, samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_list_and_grid() {
        let (name, v) = parse_sweep("t=0, 1/4, i/3").unwrap();
        assert_eq!(name, "t");
        assert_eq!(v, vec![Scalar::int(0), Scalar::ratio(1, 4), Scalar::from_ratios(0, 1, 1, 3)]);
        let (_, g) = parse_sweep("t=0:1/4+i/4:3").unwrap();
        assert_eq!(g.len(), 3);
        assert_eq!(g[2].to_string(), "1/2+1/2*i");
        assert!(parse_sweep("t=1,1").is_err());
        assert!(parse_sweep("t=0:1:0").is_err());
    }
}
