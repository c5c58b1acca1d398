//! Text formats for instances and solutions.
//!
//! Instance:
//!
//! ```text
//! c optional comments
//! p tap <n> <m>
//! b <count> <blue ids...>
//! e <weight> <feature ids...>     (m lines)
//! ```
//!
//! Solution: a single line `s <margin> <count> <exemplar ids...>`, ids 1-based
//! and ascending. Everything is whitespace separated and ids are 1-based.

use std::fmt::Write as _;
use std::str::FromStr;

use tap_core::{Instance, Solution};

use crate::error::{CliError, Result};

/// Upper bound on any declared count, so hostile headers cannot trigger huge
/// allocations.
pub const MAX_DECLARED: usize = 1 << 22;

/// A non-comment line split into tokens, with its 1-based line number.
pub(crate) struct Record<'a> {
    pub line: usize,
    pub tokens: Vec<&'a str>,
}

impl<'a> Record<'a> {
    pub fn tag(&self) -> &'a str {
        self.tokens[0]
    }

    pub fn args(&self) -> &[&'a str] {
        &self.tokens[1..]
    }

    pub fn number<T: FromStr>(&self, token: &str, what: &str) -> Result<T> {
        token
            .parse()
            .map_err(|_| CliError::syntax(self.line, format!("{what} must be a number, found `{token}`")))
    }

    pub fn count(&self, token: &str, what: &str) -> Result<usize> {
        let n: usize = self.number(token, what)?;
        if n > MAX_DECLARED {
            return Err(CliError::syntax(self.line, format!("{what} {n} exceeds the limit of {MAX_DECLARED}")));
        }
        Ok(n)
    }

    pub fn expect_args(&self, n: usize, shape: &str) -> Result<()> {
        if self.args().len() != n {
            return Err(CliError::syntax(self.line, format!("expected `{shape}`")));
        }
        Ok(())
    }

    /// Parses `<count> <ids...>` starting at argument `from`, checking the
    /// count, the range `1..=max` and that no id repeats.
    pub fn counted_ids(&self, from: usize, max: usize, what: &str) -> Result<Vec<usize>> {
        let args = self.args();
        let Some(count_token) = args.get(from) else {
            return Err(CliError::syntax(self.line, format!("missing {what} count")));
        };
        let count = self.count(count_token, &format!("{what} count"))?;
        let tokens = &args[from + 1..];
        if tokens.len() != count {
            return Err(CliError::syntax(
                self.line,
                format!("declared {count} {what} ids but found {}", tokens.len()),
            ));
        }
        let mut ids = Vec::with_capacity(count);
        for token in tokens {
            let id: usize = self.number(token, &format!("{what} id"))?;
            if id == 0 || id > max {
                return Err(CliError::syntax(self.line, format!("{what} id {id} is outside 1..={max}")));
            }
            ids.push(id);
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(CliError::syntax(self.line, format!("{what} id {} repeats", w[0])));
        }
        Ok(ids)
    }
}

fn is_comment(line: &str) -> bool {
    line == "c" || line.starts_with("c ") || line.starts_with("c\t")
}

/// Non-blank, non-comment lines.
pub(crate) fn records(text: &str) -> impl Iterator<Item = Record<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || is_comment(line) {
            return None;
        }
        Some(Record {
            line: i + 1,
            tokens: line.split_whitespace().collect(),
        })
    })
}

pub(crate) fn last_line(text: &str) -> usize {
    text.lines().count().max(1)
}

/// Parses and validates an instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut records = records(text);
    let header = records
        .next()
        .ok_or_else(|| CliError::syntax(last_line(text), "missing `p tap <n> <m>` header"))?;
    if header.tag() != "p" || header.args().first() != Some(&"tap") || header.args().len() != 3 {
        return Err(CliError::syntax(header.line, "expected `p tap <n> <m>`"));
    }
    let n = header.count(header.args()[1], "feature count")?;
    let m = header.count(header.args()[2], "exemplar count")?;

    let blue_line = records
        .next()
        .ok_or_else(|| CliError::syntax(last_line(text), "missing `b <count> <ids...>` line"))?;
    if blue_line.tag() != "b" {
        return Err(CliError::syntax(blue_line.line, "expected `b <count> <ids...>`"));
    }
    let blue = blue_line.counted_ids(0, n, "feature")?;

    let mut exemplars = Vec::with_capacity(m);
    for record in records {
        if record.tag() != "e" {
            return Err(CliError::syntax(record.line, format!("unexpected `{}` line", record.tag())));
        }
        if exemplars.len() == m {
            return Err(CliError::syntax(record.line, format!("more than the declared {m} exemplars")));
        }
        exemplars.push(record.counted_ids(0, n, "feature")?);
    }
    if exemplars.len() != m {
        return Err(CliError::syntax(
            last_line(text),
            format!("declared {m} exemplars but found {}", exemplars.len()),
        ));
    }

    let instance = Instance::new(n, blue, exemplars)?;
    let violations = instance.validate();
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(CliError::Invalid(text.join("; ")));
    }
    Ok(instance)
}

fn push_ids(out: &mut String, ids: impl IntoIterator<Item = usize>) {
    for id in ids {
        let _ = write!(out, " {id}");
    }
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = format!("p tap {} {}\nb {}", instance.n_features(), instance.n_exemplars(), instance.n_blue());
    push_ids(&mut out, instance.blue());
    out.push('\n');
    for exemplar in instance.exemplars() {
        let _ = write!(out, "e {}", exemplar.len());
        push_ids(&mut out, exemplar.iter().copied());
        out.push('\n');
    }
    out
}

/// Parses a solution line and checks it against `instance`: ids must be
/// ascending and in range, and the stated margin must match.
pub fn parse_solution(text: &str, instance: &Instance) -> Result<Solution> {
    let mut records = records(text);
    let record = records
        .next()
        .ok_or_else(|| CliError::syntax(last_line(text), "missing `s <margin> <count> <ids...>` line"))?;
    if record.tag() != "s" || record.args().is_empty() {
        return Err(CliError::syntax(record.line, "expected `s <margin> <count> <ids...>`"));
    }
    if let Some(extra) = records.next() {
        return Err(CliError::syntax(extra.line, "a solution holds a single `s` line"));
    }
    let stated: i64 = record.number(record.args()[0], "margin")?;
    let ids = record.counted_ids(1, instance.n_exemplars(), "exemplar")?;
    if ids.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::syntax(record.line, "exemplar ids must be ascending"));
    }
    let selected: Vec<usize> = ids.iter().map(|id| id - 1).collect();
    let solution = Solution::evaluate(instance, selected, false)?;
    if solution.margin != stated {
        return Err(CliError::Verification(format!(
            "stated margin {stated} but the selection has margin {}",
            solution.margin
        )));
    }
    Ok(solution)
}

pub fn write_solution(solution: &Solution) -> String {
    let mut out = format!("s {} {}", solution.margin, solution.selected.len());
    push_ids(&mut out, solution.selected.iter().map(|j| j + 1));
    out.push('\n');
    out
}
