//! Source-problem formats: DIMACS CNF, set systems, k-dimensional matching
//! and DIMACS graphs.
//!
//! ```text
//! p cnf <vars> <clauses>      literals, each clause terminated by 0
//! p sc <elements> <sets>      then `s <count> <ids...>` per set
//! p kdm <k>                   then `d <size_1> ... <size_k>` and `t <ids...>` per tuple
//! p edge <nodes> <edges>      then `e <u> <v>` per edge
//! ```

use std::fmt::Write as _;

use tap_core::reductions::{CnfSource, KdmSource, SetCoverSource};

use crate::error::{CliError, Result};
use crate::format::{last_line, records, Record};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub n_nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

fn header<'a>(
    records: &mut impl Iterator<Item = Record<'a>>,
    text: &str,
    kind: &str,
    shape: &str,
) -> Result<Record<'a>> {
    let record = records
        .next()
        .ok_or_else(|| CliError::syntax(last_line(text), format!("missing `{shape}` header")))?;
    if record.tag() != "p" || record.args().first() != Some(&kind) {
        return Err(CliError::syntax(record.line, format!("expected `{shape}`")));
    }
    Ok(record)
}

fn source_error(line: usize, err: tap_core::TapError) -> CliError {
    CliError::syntax(line, err.to_string())
}

/// DIMACS CNF. Clauses may span lines; a `%` line ends the clause list.
pub fn parse_cnf(text: &str) -> Result<CnfSource> {
    let mut records = records(text);
    let head = header(&mut records, text, "cnf", "p cnf <vars> <clauses>")?;
    head.expect_args(3, "p cnf <vars> <clauses>")?;
    let n_vars = head.count(head.args()[1], "variable count")?;
    let n_clauses = head.count(head.args()[2], "clause count")?;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut line = head.line;
    for record in records {
        line = record.line;
        if record.tag() == "%" {
            break;
        }
        for token in &record.tokens {
            let lit: i64 = record.number(token, "literal")?;
            if lit == 0 {
                if clauses.len() == n_clauses {
                    return Err(CliError::syntax(line, format!("more than the declared {n_clauses} clauses")));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit.unsigned_abs() > n_vars as u64 {
                    return Err(CliError::syntax(line, format!("literal {lit} names a variable above {n_vars}")));
                }
                current.push(lit);
            }
        }
    }
    if !current.is_empty() {
        return Err(CliError::syntax(line, "last clause is not terminated by 0"));
    }
    if clauses.len() != n_clauses {
        return Err(CliError::syntax(
            last_line(text),
            format!("declared {n_clauses} clauses but found {}", clauses.len()),
        ));
    }
    CnfSource::new(n_vars, clauses).map_err(|e| source_error(line, e))
}

pub fn write_cnf(source: &CnfSource) -> String {
    let mut out = format!("p cnf {} {}\n", source.n_vars, source.clauses.len());
    for clause in &source.clauses {
        for lit in clause {
            let _ = write!(out, "{lit} ");
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_set_system(text: &str) -> Result<SetCoverSource> {
    let mut records = records(text);
    let head = header(&mut records, text, "sc", "p sc <elements> <sets>")?;
    head.expect_args(3, "p sc <elements> <sets>")?;
    let universe = head.count(head.args()[1], "element count")?;
    let n_sets = head.count(head.args()[2], "set count")?;
    let mut sets = Vec::new();
    for record in records {
        if record.tag() != "s" {
            return Err(CliError::syntax(record.line, format!("unexpected `{}` line", record.tag())));
        }
        if sets.len() == n_sets {
            return Err(CliError::syntax(record.line, format!("more than the declared {n_sets} sets")));
        }
        sets.push(record.counted_ids(0, universe, "element")?);
    }
    if sets.len() != n_sets {
        return Err(CliError::syntax(
            last_line(text),
            format!("declared {n_sets} sets but found {}", sets.len()),
        ));
    }
    SetCoverSource::new(universe, sets).map_err(|e| source_error(last_line(text), e))
}

pub fn write_set_system(source: &SetCoverSource) -> String {
    let mut out = format!("p sc {} {}\n", source.universe_size, source.sets.len());
    for set in &source.sets {
        let _ = write!(out, "s {}", set.len());
        for e in set {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_kdm(text: &str) -> Result<KdmSource> {
    let mut records = records(text);
    let head = header(&mut records, text, "kdm", "p kdm <k>")?;
    head.expect_args(2, "p kdm <k>")?;
    let k = head.count(head.args()[1], "dimension count")?;
    if k == 0 {
        return Err(CliError::syntax(head.line, "k must be positive"));
    }
    let dims = records
        .next()
        .ok_or_else(|| CliError::syntax(last_line(text), "missing `d <sizes...>` line"))?;
    if dims.tag() != "d" || dims.args().len() != k {
        return Err(CliError::syntax(dims.line, format!("expected `d` followed by {k} dimension sizes")));
    }
    let sizes = dims
        .args()
        .iter()
        .map(|t| dims.count(t, "dimension size"))
        .collect::<Result<Vec<_>>>()?;
    if sizes.iter().sum::<usize>() > crate::format::MAX_DECLARED {
        return Err(CliError::syntax(dims.line, "dimension sizes exceed the limit"));
    }
    let mut tuples = Vec::new();
    for record in records {
        if record.tag() != "t" || record.args().len() != k {
            return Err(CliError::syntax(record.line, format!("expected `t` followed by {k} element ids")));
        }
        let tuple = record
            .args()
            .iter()
            .map(|t| record.number(t, "element id"))
            .collect::<Result<Vec<usize>>>()?;
        tuples.push((record.line, tuple));
    }
    let lines: Vec<usize> = tuples.iter().map(|(l, _)| *l).collect();
    let tuples: Vec<Vec<usize>> = tuples.into_iter().map(|(_, t)| t).collect();
    KdmSource::new(sizes, tuples).map_err(|e| {
        // Point at the offending tuple when the message names one.
        let line = match &e {
            tap_core::TapError::InvalidSource(msg) => msg
                .strip_prefix("tuple ")
                .and_then(|rest| rest.split_whitespace().next())
                .and_then(|t| t.parse::<usize>().ok())
                .and_then(|t| lines.get(t.wrapping_sub(1)).copied())
                .unwrap_or(dims.line),
            _ => dims.line,
        };
        source_error(line, e)
    })
}

pub fn write_kdm(source: &KdmSource) -> String {
    let mut out = format!("p kdm {}\nd", source.k());
    for size in &source.dim_sizes {
        let _ = write!(out, " {size}");
    }
    out.push('\n');
    for tuple in &source.tuples {
        out.push('t');
        for e in tuple {
            let _ = write!(out, " {e}");
        }
        out.push('\n');
    }
    out
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut records = records(text);
    let head = header(&mut records, text, "edge", "p edge <nodes> <edges>")?;
    head.expect_args(3, "p edge <nodes> <edges>")?;
    let n_nodes = head.count(head.args()[1], "node count")?;
    let n_edges = head.count(head.args()[2], "edge count")?;
    let mut edges = Vec::new();
    for record in records {
        if record.tag() != "e" {
            return Err(CliError::syntax(record.line, format!("unexpected `{}` line", record.tag())));
        }
        record.expect_args(2, "e <u> <v>")?;
        if edges.len() == n_edges {
            return Err(CliError::syntax(record.line, format!("more than the declared {n_edges} edges")));
        }
        let mut ends = [0usize; 2];
        for (slot, token) in ends.iter_mut().zip(record.args()) {
            *slot = record.number(token, "node id")?;
            if *slot == 0 || *slot > n_nodes {
                return Err(CliError::syntax(record.line, format!("node {slot} is outside 1..={n_nodes}")));
            }
        }
        edges.push((ends[0], ends[1]));
    }
    if edges.len() != n_edges {
        return Err(CliError::syntax(
            last_line(text),
            format!("declared {n_edges} edges but found {}", edges.len()),
        ));
    }
    Ok(Graph { n_nodes, edges })
}

pub fn write_graph(graph: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", graph.n_nodes, graph.edges.len());
    for (u, v) in &graph.edges {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use tap_core::fixtures::three_dm_example;

    #[test]
    fn cnf_round_trip_and_errors() {
        let text = "c example\np cnf 2 2\n1 2 0\n-1\n 2 0\n";
        let cnf = parse_cnf(text).unwrap();
        assert_eq!(cnf.clauses, vec![vec![1, 2], vec![-1, 2]]);
        assert_eq!(parse_cnf(&write_cnf(&cnf)).unwrap(), cnf);
        assert!(matches!(parse_cnf("p cnf 1 1\n2 0\n"), Err(CliError::Syntax { line: 2, .. })));
        assert!(matches!(parse_cnf("p cnf 1 1\n1\n"), Err(CliError::Syntax { line: 2, .. })));
        assert!(matches!(parse_cnf("p cnf 1 2\n1 0\n"), Err(CliError::Syntax { .. })));
        assert!(parse_cnf("p cnf 1 1\n1 0\n%\n0\n").is_ok());
    }

    #[test]
    fn set_system_round_trip() {
        let sc = parse_set_system("p sc 3 2\ns 2 1 2\ns 2 2 3\n").unwrap();
        assert_eq!(parse_set_system(&write_set_system(&sc)).unwrap(), sc);
        assert!(matches!(
            parse_set_system("p sc 3 2\ns 2 1 2\ns 1 4\n"),
            Err(CliError::Syntax { line: 3, .. })
        ));
        assert!(parse_set_system("p sc 3 1\ns 2 1 2\n").is_err());
    }

    #[test]
    fn kdm_round_trip() {
        let source = three_dm_example();
        let text = write_kdm(&source);
        assert_eq!(parse_kdm(&text).unwrap(), source);
        assert!(matches!(
            parse_kdm("p kdm 2\nd 2 2\nt 1 3\nt 3 1\n"),
            Err(CliError::Syntax { line: 4, .. })
        ));
    }

    #[test]
    fn graph_round_trip() {
        let g = parse_graph("p edge 3 2\ne 1 2\ne 2 3\n").unwrap();
        assert_eq!(g.edges, vec![(1, 2), (2, 3)]);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        assert!(matches!(parse_graph("p edge 2 1\ne 1 3\n"), Err(CliError::Syntax { line: 2, .. })));
    }
}
