use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::Model;

const MAGIC: &str = "mapmp";
const VERSION: &str = "v1";

fn fmt_f64(out: &mut String, v: f64) {
    // 17 significant digits round-trip every finite f64.
    let _ = write!(out, " {v:.16e}");
}

/// Serializes a model:
///
/// ```text
/// mapmp v1 <n> <m> <d>
/// v <i> <c_0> ... <c_{d-1}>
/// e <i> <j> <c_00> <c_01> ... <c_{d-1,d-1}>
/// ```
///
/// with `i < j` on every edge line and tables row-major.
pub fn emit_model(model: &Model) -> String {
    let mut out = format!("{MAGIC} {VERSION} {} {} {}\n", model.n(), model.m(), model.d());
    for i in 0..model.n() {
        let _ = write!(out, "v {i}");
        for &c in model.vertex_cost(i) {
            fmt_f64(&mut out, c);
        }
        out.push('\n');
    }
    for (e, &(i, j)) in model.edges().iter().enumerate() {
        let _ = write!(out, "e {i} {j}");
        for &c in model.edge_cost(e) {
            fmt_f64(&mut out, c);
        }
        out.push('\n');
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
}

pub fn load_model(text: &str) -> Result<Model> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.first() != Some(&MAGIC) {
        return Err(Error::parse(hline, format!("expected '{MAGIC}' header")));
    }
    if h.get(1) != Some(&VERSION) {
        return Err(Error::parse(
            hline,
            format!("unsupported version '{}'", h.get(1).copied().unwrap_or("")),
        ));
    }
    if h.len() != 5 {
        return Err(Error::parse(hline, "header must be 'mapmp v1 n m d'"));
    }
    let n: usize = parse_num(h[2], hline, "vertex count")?;
    let m: usize = parse_num(h[3], hline, "edge count")?;
    let d: usize = parse_num(h[4], hline, "label count")?;

    let mut vertex_costs = Vec::with_capacity(n);
    for i in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(hline, format!("missing vertex line {i}")))?;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t[0] != "v" || t.len() != d + 2 {
            return Err(Error::parse(ln, format!("expected 'v {i}' followed by {d} costs")));
        }
        if parse_num::<usize>(t[1], ln, "vertex index")? != i {
            return Err(Error::parse(ln, format!("vertex lines out of order, expected {i}")));
        }
        let costs = t[2..]
            .iter()
            .map(|s| parse_num::<f64>(s, ln, "cost"))
            .collect::<Result<Vec<_>>>()?;
        vertex_costs.push(costs);
    }

    let mut edges = Vec::with_capacity(m);
    let mut edge_costs = Vec::with_capacity(m);
    for k in 0..m {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::parse(hline, format!("missing edge line {k}")))?;
        let t: Vec<&str> = line.split_whitespace().collect();
        if t[0] != "e" || t.len() != d * d + 3 {
            return Err(Error::parse(ln, format!("expected 'e i j' followed by {} costs", d * d)));
        }
        let i: usize = parse_num(t[1], ln, "endpoint")?;
        let j: usize = parse_num(t[2], ln, "endpoint")?;
        if i >= j {
            return Err(Error::parse(ln, format!("edge ({i},{j}) must satisfy i < j")));
        }
        let costs = t[3..]
            .iter()
            .map(|s| parse_num::<f64>(s, ln, "cost"))
            .collect::<Result<Vec<_>>>()?;
        edges.push((i, j));
        edge_costs.push(costs);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::parse(ln, "trailing content after last edge"));
    }
    Model::new(n, &edges, d, vertex_costs, edge_costs)
}
