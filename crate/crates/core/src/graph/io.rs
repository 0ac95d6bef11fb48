//! Edge-list files: a header line `n m`, then `m` lines `i j w` with
//! 1-based endpoints.

use std::fmt::Write as _;
use std::path::Path;

use super::GraphInstance;
use crate::error::{Error, Result};

pub fn parse_edge_list(text: &str, name: &str) -> Result<GraphInstance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#') && !l.starts_with('%'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header \"n m\"".into(),
    })?;
    let mut tok = header.split_whitespace();
    let n: usize = parse_tok(tok.next(), hline, "vertex count")?;
    let m: usize = parse_tok(tok.next(), hline, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = 0;
    for (line, body) in lines {
        let mut tok = body.split_whitespace();
        let i: usize = parse_tok(tok.next(), line, "first endpoint")?;
        let j: usize = parse_tok(tok.next(), line, "second endpoint")?;
        let w: f64 = parse_tok(tok.next(), line, "weight")?;
        if tok.next().is_some() {
            return Err(Error::Parse {
                line,
                message: "trailing tokens after weight".into(),
            });
        }
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::Parse {
                line,
                message: format!("endpoint outside 1..={n}"),
            });
        }
        edges.push((i - 1, j - 1, w));
        seen += 1;
    }
    if seen != m {
        return Err(Error::Parse {
            line: hline,
            message: format!("header announces {m} edges but {seen} were found"),
        });
    }
    GraphInstance::new(n, edges, name)
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| Error::Parse {
        line,
        message: format!("invalid {what} {tok:?}"),
    })
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<GraphInstance> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path.file_stem().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    parse_edge_list(&text, &name)
}

/// Weights are written with Rust's shortest round-trip formatting.
pub fn format_edge_list(g: &GraphInstance) -> String {
    let mut s = format!("{} {}\n", g.n(), g.edges().len());
    for e in g.edges() {
        writeln!(s, "{} {} {}", e.u + 1, e.v + 1, e.w).expect("writing to a String");
    }
    s
}

pub fn write_edge_list(g: &GraphInstance, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_edge_list(g))?;
    Ok(())
}
