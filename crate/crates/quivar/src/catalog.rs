//! Bundled registry of gates, groups, invariants, series forms, point sets
//! and auditable claims, parsed from a versioned text data file.

use std::collections::BTreeMap;

use crate::cyclo::CycNum;
use crate::matrix::CycMatrix;
use crate::molien::{parse_closed_form, ClosedForm};
use crate::poly::{msym, parse_poly, parse_relation, MultiPoly};
use crate::{Error, Result};

pub const CATALOG_TEXT: &str = include_str!("../data/catalog.txt");
pub const REFERENCES_TEXT: &str = include_str!("../data/references.txt");

/// Claim ids allowed (and required) to disagree with their source value.
pub const KNOWN_DISCREPANCIES: [&str; 4] = [
    "HOPF-ZETA-PRINTED",
    "MS-OCTA",
    "REL-KAPPA-PRINTED",
    "S-NORMALIZATION",
];

#[derive(Debug, Clone)]
pub struct Gate {
    pub id: String,
    pub anchor: String,
    pub matrix: CycMatrix,
}

#[derive(Debug, Clone)]
pub struct GroupDef {
    pub id: String,
    pub anchor: String,
    pub generator_ids: Vec<String>,
    pub generators: Vec<CycMatrix>,
}

#[derive(Debug, Clone)]
pub struct Invariant {
    pub id: String,
    pub anchor: String,
    pub nvars: usize,
    pub poly: MultiPoly,
}

#[derive(Debug, Clone)]
pub struct FormDef {
    pub id: String,
    pub anchor: String,
    pub text: String,
    pub form: ClosedForm,
}

#[derive(Debug, Clone)]
pub struct PointSet {
    pub id: String,
    pub anchor: String,
    pub points: Vec<(CycNum, CycNum)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedStatus {
    Pass,
    KnownDiscrepancy,
}

#[derive(Debug, Clone)]
pub struct ClaimDef {
    pub id: String,
    pub anchor: String,
    pub checker: String,
    pub args: Vec<String>,
    pub expect: ExpectedStatus,
    pub expected: String,
    pub description: String,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    pub gates: BTreeMap<String, Gate>,
    pub groups: BTreeMap<String, GroupDef>,
    pub invariants: BTreeMap<String, Invariant>,
    pub forms: BTreeMap<String, FormDef>,
    pub pointsets: BTreeMap<String, PointSet>,
    pub claims: BTreeMap<String, ClaimDef>,
}

impl Catalog {
    /// Parse and validate the bundled data file, pinning the frozen
    /// known-discrepancy list.
    pub fn load() -> Result<Catalog> {
        let cat = Catalog::parse(CATALOG_TEXT, REFERENCES_TEXT)?;
        let known: Vec<&str> = cat
            .claims
            .values()
            .filter(|c| c.expect == ExpectedStatus::KnownDiscrepancy)
            .map(|c| c.id.as_str())
            .collect();
        if known != KNOWN_DISCREPANCIES {
            return Err(Error::Invalid(format!(
                "known-discrepancy set {known:?} differs from the frozen list"
            )));
        }
        Ok(cat)
    }

    pub fn parse(text: &str, references: &str) -> Result<Catalog> {
        let mut cat = Catalog {
            gates: BTreeMap::new(),
            groups: BTreeMap::new(),
            invariants: BTreeMap::new(),
            forms: BTreeMap::new(),
            pointsets: BTreeMap::new(),
            claims: BTreeMap::new(),
        };
        let mut version_seen = false;
        for section in split_sections(text)? {
            match section {
                Item::Version(v) => {
                    if v != 1 {
                        return Err(Error::Parse(format!("unsupported catalog version {v}")));
                    }
                    version_seen = true;
                }
                Item::Section { kind, id, fields } => {
                    if !version_seen {
                        return Err(Error::Parse("catalog must declare a version first".into()));
                    }
                    cat.add_section(&kind, id, fields)?;
                }
            }
        }
        if !version_seen {
            return Err(Error::Parse("catalog missing version line".into()));
        }
        cat.validate(references)?;
        Ok(cat)
    }

    fn add_section(&mut self, kind: &str, id: String, fields: Fields) -> Result<()> {
        match kind {
            "gate" => {
                let gate = build_gate(&id, &fields, &self.gates)?;
                insert_unique(&mut self.gates, id, gate)
            }
            "group" => {
                let anchor = fields.required("anchor")?;
                let generator_ids: Vec<String> = fields
                    .required("generators")?
                    .split_whitespace()
                    .map(str::to_string)
                    .collect();
                if generator_ids.is_empty() {
                    return Err(Error::Parse(format!("group {id} has no generators")));
                }
                let mut generators = Vec::new();
                for gid in &generator_ids {
                    let gate = self
                        .gates
                        .get(gid)
                        .ok_or_else(|| Error::UnknownId(format!("gate {gid} in group {id}")))?;
                    generators.push(gate.matrix.clone());
                }
                let dim = generators[0].nrows();
                if generators.iter().any(|g| g.nrows() != dim) {
                    return Err(Error::DimensionMismatch(format!(
                        "group {id} mixes generator dimensions"
                    )));
                }
                let def = GroupDef { id: id.clone(), anchor, generator_ids, generators };
                insert_unique(&mut self.groups, id, def)
            }
            "invariant" => {
                let anchor = fields.required("anchor")?;
                let nvars: usize = fields
                    .required("vars")?
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad vars count in invariant {id}")))?;
                let poly = parse_invariant_poly(&fields.required("poly")?, nvars)?;
                if poly.is_zero() || poly.homogeneous_degree().is_none() {
                    return Err(Error::Parse(format!("invariant {id} is not homogeneous")));
                }
                let inv = Invariant { id: id.clone(), anchor, nvars, poly };
                insert_unique(&mut self.invariants, id, inv)
            }
            "form" => {
                let anchor = fields.required("anchor")?;
                let text = fields.required("series")?;
                let form = parse_closed_form(&text)?;
                let def = FormDef { id: id.clone(), anchor, text, form };
                insert_unique(&mut self.forms, id, def)
            }
            "pointset" => {
                let anchor = fields.required("anchor")?;
                let mut points = Vec::new();
                for part in fields.required("points")?.split(',') {
                    let (p, q) = part
                        .trim()
                        .split_once(':')
                        .ok_or_else(|| Error::Parse(format!("bad point in set {id}: {part}")))?;
                    let p = parse_scalar(p)?;
                    let q = parse_scalar(q)?;
                    if p.is_zero() && q.is_zero() {
                        return Err(Error::Parse(format!("zero point in set {id}")));
                    }
                    points.push((p, q));
                }
                if points.is_empty() {
                    return Err(Error::Parse(format!("point set {id} is empty")));
                }
                let set = PointSet { id: id.clone(), anchor, points };
                insert_unique(&mut self.pointsets, id, set)
            }
            "claim" => {
                let anchor = fields.required("anchor")?;
                let checker = fields.required("checker")?;
                let args: Vec<String> = fields
                    .optional("args")
                    .map(|s| s.split_whitespace().map(str::to_string).collect())
                    .unwrap_or_default();
                let expect = match fields.required("expect")?.as_str() {
                    "pass" => ExpectedStatus::Pass,
                    "known_discrepancy" => ExpectedStatus::KnownDiscrepancy,
                    other => {
                        return Err(Error::Parse(format!(
                            "claim {id}: unknown expect value {other}"
                        )))
                    }
                };
                let expected = fields.required("expected")?;
                let description = fields.optional("description").unwrap_or_default();
                let def = ClaimDef { id: id.clone(), anchor, checker, args, expect, expected, description };
                insert_unique(&mut self.claims, id, def)
            }
            other => Err(Error::Parse(format!("unknown section kind [{other} {id}]"))),
        }
    }

    fn validate(&self, references: &str) -> Result<()> {
        for anchor in self.anchors() {
            if !references.contains(&anchor) {
                return Err(Error::Invalid(format!(
                    "anchor {anchor} missing from references file"
                )));
            }
        }
        Ok(())
    }

    fn anchors(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        out.extend(self.gates.values().map(|g| g.anchor.clone()));
        out.extend(self.groups.values().map(|g| g.anchor.clone()));
        out.extend(self.invariants.values().map(|g| g.anchor.clone()));
        out.extend(self.forms.values().map(|g| g.anchor.clone()));
        out.extend(self.pointsets.values().map(|g| g.anchor.clone()));
        out.extend(self.claims.values().map(|g| g.anchor.clone()));
        out.sort();
        out.dedup();
        out
    }

    pub fn gate(&self, id: &str) -> Result<&Gate> {
        self.gates.get(id).ok_or_else(|| Error::UnknownId(format!("gate {id}")))
    }

    pub fn group(&self, id: &str) -> Result<&GroupDef> {
        self.groups.get(id).ok_or_else(|| Error::UnknownId(format!("group {id}")))
    }

    pub fn invariant(&self, id: &str) -> Result<&Invariant> {
        self.invariants.get(id).ok_or_else(|| Error::UnknownId(format!("invariant {id}")))
    }

    pub fn form(&self, id: &str) -> Result<&FormDef> {
        self.forms.get(id).ok_or_else(|| Error::UnknownId(format!("form {id}")))
    }

    pub fn pointset(&self, id: &str) -> Result<&PointSet> {
        self.pointsets.get(id).ok_or_else(|| Error::UnknownId(format!("point set {id}")))
    }

    pub fn claim(&self, id: &str) -> Result<&ClaimDef> {
        self.claims.get(id).ok_or_else(|| Error::UnknownId(format!("claim {id}")))
    }

    /// (kind, id, anchor) rows for every entity and claim, sorted by kind
    /// then id.
    pub fn summary_rows(&self) -> Vec<(String, String, String)> {
        let mut rows = Vec::new();
        for g in self.gates.values() {
            rows.push(("gate".into(), g.id.clone(), g.anchor.clone()));
        }
        for g in self.groups.values() {
            rows.push(("group".into(), g.id.clone(), g.anchor.clone()));
        }
        for g in self.invariants.values() {
            rows.push(("invariant".into(), g.id.clone(), g.anchor.clone()));
        }
        for g in self.forms.values() {
            rows.push(("form".into(), g.id.clone(), g.anchor.clone()));
        }
        for g in self.pointsets.values() {
            rows.push(("pointset".into(), g.id.clone(), g.anchor.clone()));
        }
        for c in self.claims.values() {
            rows.push(("claim".into(), c.id.clone(), c.anchor.clone()));
        }
        rows
    }
}

// --- section parsing ---------------------------------------------------

struct Fields {
    entries: Vec<(String, String)>,
    section: String,
}

impl Fields {
    fn required(&self, key: &str) -> Result<String> {
        self.optional(key)
            .ok_or_else(|| Error::Parse(format!("{}: missing key {key}", self.section)))
    }

    fn optional(&self, key: &str) -> Option<String> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
    }
}

enum Item {
    Version(u32),
    Section { kind: String, id: String, fields: Fields },
}

fn split_sections(text: &str) -> Result<Vec<Item>> {
    let mut items: Vec<Item> = Vec::new();
    for raw in text.lines() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(rest) = line.trim().strip_prefix("version ") {
            let v = rest
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad version line: {line}")))?;
            items.push(Item::Version(v));
            continue;
        }
        if let Some(header) = line.trim().strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated section header: {line}")))?;
            let (kind, id) = header
                .trim()
                .split_once(' ')
                .ok_or_else(|| Error::Parse(format!("section header needs kind and id: {line}")))?;
            items.push(Item::Section {
                kind: kind.trim().to_string(),
                id: id.trim().to_string(),
                fields: Fields { entries: Vec::new(), section: format!("[{kind} {id}]") },
            });
            continue;
        }
        let Some(Item::Section { fields, .. }) = items.last_mut() else {
            return Err(Error::Parse(format!("stray line outside any section: {line}")));
        };
        match line.trim_start().split_once(' ') {
            Some((k, v)) => fields.entries.push((k.to_string(), v.trim().to_string())),
            // A bare word starts a block key (e.g. `matrix`); its rows are
            // collected as repeated `row` entries below it.
            None => fields.entries.push((line.trim().to_string(), String::new())),
        }
    }
    Ok(items)
}

fn insert_unique<T>(map: &mut BTreeMap<String, T>, id: String, value: T) -> Result<()> {
    if map.contains_key(&id) {
        return Err(Error::Parse(format!("duplicate id {id}")));
    }
    map.insert(id, value);
    Ok(())
}

// --- gate construction -------------------------------------------------

fn build_gate(id: &str, fields: &Fields, gates: &BTreeMap<String, Gate>) -> Result<Gate> {
    let anchor = fields.required("anchor")?;
    let mut matrix = if let Some(rows) = collect_matrix_rows(fields) {
        parse_matrix_rows(id, &rows)?
    } else if let Some(d) = fields.optional("identity") {
        let d: usize = d
            .parse()
            .map_err(|_| Error::Parse(format!("gate {id}: bad identity size")))?;
        CycMatrix::identity(d)
    } else if let Some(d) = fields.optional("shift") {
        let d: usize = d
            .parse()
            .map_err(|_| Error::Parse(format!("gate {id}: bad shift size")))?;
        CycMatrix::shift(d)
    } else if let Some(entries) = fields.optional("diag") {
        let diag: Vec<CycNum> = entries
            .split_whitespace()
            .map(parse_scalar)
            .collect::<Result<_>>()?;
        CycMatrix::diagonal(diag)
    } else if let Some(pair) = fields.optional("kron") {
        let (a, b) = pair
            .trim()
            .split_once(' ')
            .ok_or_else(|| Error::Parse(format!("gate {id}: kron needs two gate ids")))?;
        let ga = gates
            .get(a.trim())
            .ok_or_else(|| Error::UnknownId(format!("gate {a} in kron for {id}")))?;
        let gb = gates
            .get(b.trim())
            .ok_or_else(|| Error::UnknownId(format!("gate {b} in kron for {id}")))?;
        ga.matrix.kron(&gb.matrix)
    } else {
        return Err(Error::Parse(format!("gate {id}: no matrix definition")));
    };
    if let Some(s) = fields.optional("scale") {
        matrix = matrix.scalar_mul(&parse_scalar(&s)?);
    }
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::DimensionMismatch(format!("gate {id} is not square")));
    }
    Ok(Gate { id: id.to_string(), anchor, matrix })
}

/// A `matrix` block is the bare key followed by one `row ...` line per row.
fn collect_matrix_rows(fields: &Fields) -> Option<Vec<String>> {
    fields.entries.iter().any(|(k, _)| k == "matrix").then(|| {
        fields
            .entries
            .iter()
            .filter(|(k, _)| k == "row")
            .map(|(_, v)| v.clone())
            .collect()
    })
}

fn parse_matrix_rows(id: &str, rows: &[String]) -> Result<CycMatrix> {
    let mut parsed: Vec<Vec<CycNum>> = Vec::new();
    for row in rows {
        let entries: Vec<CycNum> = row
            .split_whitespace()
            .map(parse_scalar)
            .collect::<Result<_>>()?;
        parsed.push(entries);
    }
    if parsed.is_empty() || parsed.iter().any(|r| r.len() != parsed.len()) {
        return Err(Error::DimensionMismatch(format!("gate {id}: ragged matrix rows")));
    }
    CycMatrix::from_rows(parsed)
}

/// Parse one scalar literal (`-1+i`, `1/2*sqrt2`, `z^20`, ...).
pub fn parse_scalar(text: &str) -> Result<CycNum> {
    let p = parse_poly(text.trim(), 1)?;
    let mut value = CycNum::zero();
    for (&key, c) in p.terms() {
        if key != 0 {
            return Err(Error::Parse(format!("expected a scalar, got {text}")));
        }
        value = &value + c;
    }
    Ok(value)
}

// --- invariant polynomials ---------------------------------------------

/// Invariant bodies are either plain polynomial literals or integer
/// combinations of `Sigma(...)` monomial symmetric functions.
fn parse_invariant_poly(text: &str, nvars: usize) -> Result<MultiPoly> {
    if !text.contains("Sigma(") {
        return parse_poly(text, nvars);
    }
    let (expanded, table) = expand_sigma(text, nvars)?;
    parse_relation(&expanded, &|name| table.get(name).cloned())
}

/// Replace each `Sigma(a,b,..; n=k)` call with a fresh name bound to the
/// corresponding monomial symmetric polynomial.
fn expand_sigma(text: &str, nvars: usize) -> Result<(String, BTreeMap<String, MultiPoly>)> {
    let mut out = String::new();
    let mut table = BTreeMap::new();
    let mut rest = text;
    let mut counter = 0usize;
    while let Some(start) = rest.find("Sigma(") {
        out.push_str(&rest[..start]);
        let after = &rest[start + 6..];
        let close = after
            .find(')')
            .ok_or_else(|| Error::Parse(format!("unclosed Sigma in {text}")))?;
        let inside = &after[..close];
        let (parts, declared_n) = match inside.split_once(';') {
            Some((lam, ntext)) => {
                let ntext = ntext.trim();
                let n: usize = ntext
                    .strip_prefix("n=")
                    .and_then(|v| v.trim().parse().ok())
                    .ok_or_else(|| Error::Parse(format!("bad Sigma variable count: {inside}")))?;
                (lam, Some(n))
            }
            None => (inside, None),
        };
        if let Some(n) = declared_n {
            if n != nvars {
                return Err(Error::DimensionMismatch(format!(
                    "Sigma declares n={n} but invariant has {nvars} variables"
                )));
            }
        }
        let lambda: Vec<usize> = parts
            .split(',')
            .map(|p| {
                p.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad Sigma partition: {inside}")))
            })
            .collect::<Result<_>>()?;
        let name = format!("sig_{counter}");
        counter += 1;
        table.insert(name.clone(), msym(&lambda, nvars)?);
        out.push_str(&name);
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok((out, table))
}
