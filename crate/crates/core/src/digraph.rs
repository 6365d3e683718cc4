//! Flow digraphs: vertices are the generators `x1..xd`, and the edge `xi -> xj`
//! carries the commutator `[xi, xj]` as an exponent vector over `z1..zr`.
//! Commuting pairs have no edge.
//!
//! Text form (`.fdg`), one directive per line, `#` starts a comment:
//!
//! ```text
//! group E3
//! p 3
//! derived 1
//! gens 2
//! edge 1 2 1
//! ```
//!
//! An edge written `edge j i f` with `j > i` is stored as `edge i j -f`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::ff::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("vertex x{index} is outside x1..x{d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("self-loop on x{0}")]
    SelfLoop(usize),
    #[error("more than one edge between x{0} and x{1}")]
    DuplicateEdge(usize, usize),
    #[error("zero flow on x{0} -> x{1}; commuting pairs have no edge")]
    ZeroFlow(usize, usize),
    #[error("flow has {found} exponents but the derived rank is {expected}")]
    FlowLength { found: usize, expected: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("duplicate edge between x{0} and x{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("zero flow; omit the edge instead")]
    ZeroFlow,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("the modulus must be odd")]
    EvenPrime,
    #[error("prime {0} is above the supported maximum")]
    PrimeOutOfRange(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowDigraph {
    name: String,
    p: Prime,
    r: usize,
    d: usize,
    /// keyed by 1-based `(i, j)` with `i < j`; flows are nonzero and reduced
    edges: BTreeMap<(usize, usize), Vec<u8>>,
}

impl FlowDigraph {
    pub fn new(name: impl Into<String>, p: Prime, r: usize, d: usize) -> FlowDigraph {
        FlowDigraph {
            name: name.into(),
            p,
            r,
            d,
            edges: BTreeMap::new(),
        }
    }

    /// Adds `xi -> xj` (1-based). Reversed edges are stored with the negated flow.
    pub fn add_edge(&mut self, i: usize, j: usize, flow: &[i64]) -> Result<(), DigraphError> {
        for index in [i, j] {
            if index == 0 || index > self.d {
                return Err(DigraphError::IndexOutOfRange { index, d: self.d });
            }
        }
        if i == j {
            return Err(DigraphError::SelfLoop(i));
        }
        if flow.len() != self.r {
            return Err(DigraphError::FlowLength {
                found: flow.len(),
                expected: self.r,
            });
        }
        let (lo, hi, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let reduced: Vec<u8> = flow.iter().map(|&e| self.p.reduce(sign * e)).collect();
        if reduced.iter().all(|&e| e == 0) {
            return Err(DigraphError::ZeroFlow(i, j));
        }
        if self.edges.contains_key(&(lo, hi)) {
            return Err(DigraphError::DuplicateEdge(lo, hi));
        }
        self.edges.insert((lo, hi), reduced);
        Ok(())
    }

    pub fn with_edge(mut self, i: usize, j: usize, flow: &[i64]) -> Result<FlowDigraph, DigraphError> {
        self.add_edge(i, j, flow)?;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn derived_rank(&self) -> usize {
        self.r
    }

    pub fn gens(&self) -> usize {
        self.d
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order, 1-based with `i < j`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &[u8])> {
        self.edges.iter().map(|(&(i, j), f)| (i, j, f.as_slice()))
    }

    /// Flow on `xi -> xj` in either direction; `None` when the pair commutes.
    pub fn flow(&self, i: usize, j: usize) -> Option<Vec<u8>> {
        if i < j {
            self.edges.get(&(i, j)).cloned()
        } else {
            self.edges
                .get(&(j, i))
                .map(|f| f.iter().map(|&e| self.p.neg(e)).collect())
        }
    }
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || "_.-".contains(c))
}

pub fn parse(text: &str) -> Result<FlowDigraph, ParseError> {
    let syntax = |line: usize, msg: String| ParseError {
        line,
        kind: ParseErrorKind::Syntax(msg),
    };
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(n, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            (n + 1, body.trim())
        })
        .filter(|(_, body)| !body.is_empty());
    let last_line = text.lines().count().max(1);

    let mut header = |keyword: &str| -> Result<(usize, String), ParseError> {
        let Some((n, body)) = lines.next() else {
            return Err(syntax(last_line, format!("missing `{keyword}` line")));
        };
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] != keyword || toks.len() != 2 {
            return Err(syntax(n, format!("expected `{keyword} <value>`, found `{body}`")));
        }
        Ok((n, toks[1].to_string()))
    };
    let number = |n: usize, s: &str| -> Result<usize, ParseError> {
        s.parse::<usize>().map_err(|_| syntax(n, format!("`{s}` is not a non-negative integer")))
    };

    let (n, name) = header("group")?;
    if !is_identifier(&name) {
        return Err(syntax(n, format!("`{name}` is not an identifier")));
    }
    let (n, p_text) = header("p")?;
    let p_value = p_text
        .parse::<u32>()
        .map_err(|_| syntax(n, format!("`{p_text}` is not a prime")))?;
    let p = Prime::new(p_value).map_err(|e| ParseError {
        line: n,
        kind: match e {
            crate::Error::EvenPrime => ParseErrorKind::EvenPrime,
            crate::Error::PrimeOutOfRange(q) => ParseErrorKind::PrimeOutOfRange(q),
            _ => ParseErrorKind::NotPrime(p_value),
        },
    })?;
    let (n, r_text) = header("derived")?;
    let r = number(n, &r_text)?;
    let (n, d_text) = header("gens")?;
    let d = number(n, &d_text)?;

    let mut g = FlowDigraph::new(name, p, r, d);
    for (n, body) in lines {
        let toks: Vec<&str> = body.split_whitespace().collect();
        if toks[0] != "edge" {
            return Err(syntax(n, format!("unknown directive `{}`", toks[0])));
        }
        if toks.len() != 3 + r {
            return Err(syntax(n, format!("`edge i j` needs {r} exponents, found {}", toks.len().saturating_sub(3))));
        }
        let i = number(n, toks[1])?;
        let j = number(n, toks[2])?;
        let flow = toks[3..]
            .iter()
            .map(|t| t.parse::<i64>().map_err(|_| syntax(n, format!("`{t}` is not an integer"))))
            .collect::<Result<Vec<_>, _>>()?;
        g.add_edge(i, j, &flow).map_err(|e| ParseError {
            line: n,
            kind: match e {
                DigraphError::IndexOutOfRange { index, .. } => ParseErrorKind::IndexOutOfRange(index),
                DigraphError::DuplicateEdge(a, b) => ParseErrorKind::DuplicateEdge(a, b),
                DigraphError::ZeroFlow(..) => ParseErrorKind::ZeroFlow,
                other => ParseErrorKind::Syntax(other.to_string()),
            },
        })?;
    }
    Ok(g)
}

/// Canonical text: header, then edges sorted by `(i, j)` with exponents in `[0, p)`.
pub fn emit(g: &FlowDigraph) -> String {
    let mut out = String::new();
    writeln!(out, "group {}", g.name).unwrap();
    writeln!(out, "p {}", g.p).unwrap();
    writeln!(out, "derived {}", g.r).unwrap();
    writeln!(out, "gens {}", g.d).unwrap();
    for (i, j, flow) in g.edges() {
        write!(out, "edge {i} {j}").unwrap();
        for e in flow {
            write!(out, " {e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// `z1 z2^2` style product; unit exponents and absent generators are suppressed.
pub fn flow_label(flow: &[u8]) -> String {
    flow.iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(k, &e)| if e == 1 { format!("z{}", k + 1) } else { format!("z{}^{e}", k + 1) })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn to_dot(g: &FlowDigraph) -> String {
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", g.name.replace('"', "\\\"")).unwrap();
    for v in 1..=g.d {
        writeln!(out, "  x{v};").unwrap();
    }
    for (i, j, flow) in g.edges() {
        writeln!(out, "  x{i} -> x{j} [label=\"{}\"];", flow_label(flow)).unwrap();
    }
    out.push_str("}\n");
    out
}
