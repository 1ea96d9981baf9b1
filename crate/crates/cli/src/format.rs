//! Instance files.
//!
//! ```text
//! rule=plurality
//! c=b
//! delta=1,0,2
//! l=1
//!
//! a b c
//! b c a
//! c a b
//! ```
//!
//! The header is optional for commands that only need a profile. Lines
//! starting with `#` are ignored. Alternative ids follow the sorted order of
//! the labels.

use std::fmt::{self, Write as _};

use stablemanip::{Alternative, AlternativeSet, Instance, Profile, Ranking, Rule};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaSpec {
    Uniform(usize),
    PerVoter(Vec<usize>),
}

impl DeltaSpec {
    pub fn budgets(&self, n: usize) -> Vec<usize> {
        match self {
            DeltaSpec::Uniform(d) => vec![*d; n],
            DeltaSpec::PerVoter(v) => v.clone(),
        }
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaSpec::Uniform(d) => write!(f, "{d}"),
            DeltaSpec::PerVoter(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                f.write_str(&parts.join(","))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub rule: Option<Rule>,
    pub c: Option<String>,
    pub delta: Option<DeltaSpec>,
    pub l: Option<usize>,
    pub labels: AlternativeSet,
    pub profile: Profile,
}

impl InstanceFile {
    /// Builds the instance; `rule` overrides the header. A missing `delta`
    /// means 0 and a missing `l` means one manipulator.
    pub fn to_instance(&self, rule: Option<&Rule>) -> anyhow::Result<Instance> {
        let rule = rule
            .or(self.rule.as_ref())
            .ok_or_else(|| anyhow::anyhow!("no rule given (header `rule=` or --rule)"))?
            .clone();
        let label = self
            .c
            .as_deref()
            .ok_or_else(|| anyhow::anyhow!("header has no `c=` line"))?;
        let c = self
            .labels
            .lookup(label)
            .ok_or_else(|| anyhow::anyhow!("c = `{label}` is not one of the alternatives"))?;
        let n = self.profile.n();
        let deltas = self.delta.as_ref().map_or_else(|| vec![0; n], |d| d.budgets(n));
        Ok(Instance::new(
            self.profile.clone(),
            c,
            deltas,
            self.l.unwrap_or(1),
            rule,
        )?)
    }

    pub fn format_ranking(&self, r: &Ranking) -> String {
        self.labels.format_ranking(r)
    }

    pub fn format_set(&self, set: &[Alternative]) -> String {
        let mut labels: Vec<&str> = set.iter().map(|&a| self.labels.label(a)).collect();
        labels.sort_unstable();
        labels.join(" ")
    }
}

fn parse_usize(line: usize, key: &str, v: &str) -> Result<usize, ParseError> {
    v.trim()
        .parse()
        .map_err(|_| err(line, format!("`{key}` expects a non-negative integer, got `{v}`")))
}

pub fn parse(text: &str) -> Result<InstanceFile, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
        .collect();
    let first = lines.iter().position(|(_, l)| !l.is_empty()).unwrap_or(lines.len());
    let has_header = lines.get(first).is_some_and(|(_, l)| l.contains('='));

    let mut file_rule = None;
    let mut c = None;
    let mut delta = None;
    let mut l = None;
    let mut body = first;
    if has_header {
        body = lines.len();
        for (i, &(no, line)) in lines.iter().enumerate().skip(first) {
            if line.is_empty() {
                body = i + 1;
                break;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(no, format!("expected `key=value` in the header, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let dup = || err(no, format!("`{key}` given twice"));
            match key {
                "rule" => {
                    let r: Rule = value.parse().map_err(|e| err(no, format!("{e}")))?;
                    file_rule.replace(r).map_or(Ok(()), |_| Err(dup()))?;
                }
                "c" => {
                    if value.is_empty() {
                        return Err(err(no, "`c` is empty"));
                    }
                    c.replace(value.to_string()).map_or(Ok(()), |_| Err(dup()))?;
                }
                "delta" => {
                    let d = if value.contains(',') {
                        DeltaSpec::PerVoter(
                            value
                                .split(',')
                                .map(|v| parse_usize(no, key, v))
                                .collect::<Result<_, _>>()?,
                        )
                    } else {
                        DeltaSpec::Uniform(parse_usize(no, key, value)?)
                    };
                    delta.replace(d).map_or(Ok(()), |_| Err(dup()))?;
                }
                "l" => {
                    l.replace(parse_usize(no, key, value)?)
                        .map_or(Ok(()), |_| Err(dup()))?;
                }
                _ => return Err(err(no, format!("unknown header key `{key}`"))),
            }
        }
    }

    let rows: Vec<(usize, Vec<&str>)> = lines[body..]
        .iter()
        .filter(|(_, l)| !l.is_empty())
        .map(|&(no, l)| (no, l.split_whitespace().collect()))
        .collect();
    let Some((first_no, first_row)) = rows.first() else {
        let no = lines.last().map_or(1, |&(n, _)| n);
        return Err(err(no, "no rankings"));
    };
    let mut sorted = first_row.clone();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(err(*first_no, format!("label `{}` appears twice", w[0])));
    }
    let labels = AlternativeSet::new(sorted.iter().copied()).map_err(|e| err(*first_no, e.to_string()))?;

    let mut rankings = Vec::with_capacity(rows.len());
    for (no, row) in &rows {
        if row.len() != labels.len() {
            return Err(err(
                *no,
                format!("ranking has {} labels, expected {}", row.len(), labels.len()),
            ));
        }
        let order = row
            .iter()
            .map(|&s| labels.lookup(s).ok_or_else(|| err(*no, format!("unknown label `{s}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        rankings.push(Ranking::new(order).map_err(|e| err(*no, e.to_string()))?);
    }
    if let Some(DeltaSpec::PerVoter(v)) = &delta {
        if v.len() != rankings.len() {
            let no = lines[first..].iter().find(|(_, l)| l.starts_with("delta")).map_or(1, |x| x.0);
            return Err(err(
                no,
                format!("{} budgets given for {} rankings", v.len(), rankings.len()),
            ));
        }
    }
    let profile = Profile::new(rankings).map_err(|e| err(*first_no, e.to_string()))?;
    Ok(InstanceFile {
        rule: file_rule,
        c,
        delta,
        l,
        labels,
        profile,
    })
}

/// Canonical text: header keys in the order `rule, c, delta, l` (only those
/// present), a blank line, then one ranking per line.
pub fn format(file: &InstanceFile) -> String {
    let mut out = String::new();
    if let Some(r) = &file.rule {
        let _ = writeln!(out, "rule={r}");
    }
    if let Some(c) = &file.c {
        let _ = writeln!(out, "c={c}");
    }
    if let Some(d) = &file.delta {
        let _ = writeln!(out, "delta={d}");
    }
    if let Some(l) = file.l {
        let _ = writeln!(out, "l={l}");
    }
    if !out.is_empty() {
        out.push('\n');
    }
    for r in file.profile.rankings() {
        out.push_str(&file.format_ranking(r));
        out.push('\n');
    }
    out
}
