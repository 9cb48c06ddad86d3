use std::collections::BTreeSet;
use std::path::Path;

use sha2::{Digest, Sha256};
use tlcga::cgm::{Cgm, RawModel};
use tlcga::corpus;
use tlcga::syntax::*;
use tlcga::{Error, Result};

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// A loaded model with the state queries default to.
pub struct LoadedModel {
    pub model: Cgm,
    pub start: usize,
}

/// `spec` is a JSON file or `corpus:NAME[:PARAM...]`.
pub fn load_model(spec: &str) -> Result<LoadedModel> {
    if let Some(rest) = spec.strip_prefix("corpus:") {
        let mut parts = rest.split(':');
        let name = parts.next().unwrap_or_default();
        let params: Vec<String> = parts.map(String::from).collect();
        let entry = corpus::build(name, &params)?;
        let start = entry.model.state(&entry.start)?;
        return Ok(LoadedModel { model: entry.model, start });
    }
    let raw = RawModel::from_json(&read_file(Path::new(spec))?)?;
    Ok(LoadedModel { model: Cgm::from_raw(&raw)?, start: 0 })
}

pub fn state_index(m: &LoadedModel, state: Option<&str>) -> Result<usize> {
    match state {
        Some(s) => m.model.state(s),
        None => Ok(m.start),
    }
}

/// First 16 hex digits of the SHA-256 of the canonical model JSON.
pub fn model_hash(m: &Cgm) -> String {
    let digest = Sha256::digest(m.to_raw().to_json().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Formula text with `#` comment lines removed and lines joined.
pub fn strip_comments(text: &str) -> String {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect::<Vec<_>>().join(" ")
}

pub fn formula_text(inline: Option<&str>, file: Option<&Path>) -> Result<String> {
    match (inline, file) {
        (Some(t), None) => Ok(t.to_string()),
        (None, Some(p)) => Ok(strip_comments(&read_file(p)?)),
        _ => Err(Error::Precondition("give exactly one of --formula and --formula-file".into())),
    }
}

pub fn goal_assignment(f: &Formula) -> Result<GoalAssignment> {
    match &**f {
        StateFormula::Brak(g) => Ok(g.clone()),
        StateFormula::True => Ok(GoalAssignment::top()),
        _ => Err(Error::Precondition(format!("{f} is not a goal-assignment formula"))),
    }
}

/// Constraint file: one member per line as `{p,q}` or `p,q`; `{}` is the
/// empty member; an optional `vars: p,q,r` line declares the variables.
pub fn parse_constraint(text: &str) -> Result<(Option<BTreeSet<String>>, Vec<BTreeSet<String>>)> {
    let mut vars = None;
    let mut family = Vec::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        if let Some(rest) = line.strip_prefix("vars:") {
            vars = Some(names(rest));
            continue;
        }
        let inner = line.strip_prefix('{').and_then(|l| l.strip_suffix('}')).unwrap_or(line);
        family.push(names(inner));
    }
    Ok((vars, family))
}

pub fn names(text: &str) -> BTreeSet<String> {
    text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_file() {
        let (vars, fam) = parse_constraint("# c\nvars: p, q, r\n{p,q}\n{}\nr\n").unwrap();
        assert_eq!(vars.unwrap().len(), 3);
        assert_eq!(fam.len(), 3);
        assert!(fam[1].is_empty());
        assert!(fam[2].contains("r"));
    }

    #[test]
    fn formula_sources_are_exclusive() {
        assert!(formula_text(None, None).is_err());
        assert_eq!(formula_text(Some("p"), None).unwrap(), "p");
        assert_eq!(strip_comments("# x\n p &\n q\n"), "p & q");
    }

    #[test]
    fn corpus_spec_and_hash() {
        let m = load_model("corpus:exampleA").unwrap();
        assert_eq!(m.model.state_id(m.start), "s");
        let h = model_hash(&m.model);
        assert_eq!(h.len(), 16);
        assert_eq!(h, model_hash(&load_model("corpus:exampleA").unwrap().model));
        assert!(load_model("corpus:sheep-wolves:2:2:simultaneous").is_ok());
    }

    #[test]
    fn goal_assignment_shapes() {
        let f = parse_state_formula("<<{a} -> X p>>", Dialect::Tlcga).unwrap();
        assert!(goal_assignment(&f).is_ok());
        let f = parse_state_formula("p & q", Dialect::Tlcga).unwrap();
        assert!(goal_assignment(&f).is_err());
    }
}
