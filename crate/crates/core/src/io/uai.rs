use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::tokens;
use crate::error::{Error, Result};
use crate::model::{transpose, Model};

struct Cursor<'a> {
    toks: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn line(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.0)
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let t = self
            .toks
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::parse(self.line(), format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn usize(&mut self, what: &str) -> Result<(usize, usize)> {
        let (line, tok) = self.next(what)?;
        tok.parse()
            .map(|v| (line, v))
            .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
    }

    fn f64(&mut self, what: &str) -> Result<(usize, f64)> {
        let (line, tok) = self.next(what)?;
        tok.parse()
            .map(|v| (line, v))
            .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
    }
}

/// Parses a UAI `MARKOV` network with uniform cardinality and factors of
/// arity one or two. Costs are `-log φ`; several tables on one scope add.
pub fn parse_uai(text: &str) -> Result<Model> {
    let mut cur = Cursor { toks: tokens(text), pos: 0 };
    let (line, kind) = cur.next("preamble")?;
    if kind != "MARKOV" {
        return Err(Error::parse(line, format!("expected MARKOV preamble, found '{kind}'")));
    }
    let (_, n) = cur.usize("variable count")?;
    let mut d = None;
    for v in 0..n {
        let (line, card) = cur.usize("cardinality")?;
        match d {
            None => d = Some(card),
            Some(d0) if d0 != card => {
                return Err(Error::parse(
                    line,
                    format!("mixed cardinalities: variable {v} has {card}, expected {d0}"),
                ))
            }
            _ => {}
        }
    }
    let d = d.ok_or_else(|| Error::parse(line, "network has no variables"))?;
    let (_, nf) = cur.usize("function count")?;
    let mut scopes = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (line, arity) = cur.usize("scope arity")?;
        if arity == 0 || arity > 2 {
            return Err(Error::parse(line, format!("unsupported arity {arity}")));
        }
        let mut scope = Vec::with_capacity(arity);
        for _ in 0..arity {
            let (line, v) = cur.usize("variable index")?;
            if v >= n {
                return Err(Error::parse(line, format!("variable {v} out of range 0..{n}")));
            }
            scope.push(v);
        }
        if arity == 2 && scope[0] == scope[1] {
            return Err(Error::parse(line, format!("scope repeats variable {}", scope[0])));
        }
        scopes.push(scope);
    }

    let mut vertex = vec![vec![0.0; d]; n];
    let mut pair: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
    for (f, scope) in scopes.iter().enumerate() {
        let (line, count) = cur.usize("table size")?;
        let want = d.pow(scope.len() as u32);
        if count != want {
            return Err(Error::parse(
                line,
                format!("function {f} declares {count} entries, scope needs {want}"),
            ));
        }
        let mut costs = Vec::with_capacity(count);
        for _ in 0..count {
            let (line, phi) = cur.f64("potential")?;
            if !(phi > 0.0) || !phi.is_finite() {
                return Err(Error::parse(line, format!("potential {phi} must be positive and finite")));
            }
            costs.push(-phi.ln());
        }
        match scope[..] {
            [v] => vertex[v].iter_mut().zip(&costs).for_each(|(a, c)| *a += c),
            [a, b] => {
                let (key, table) = if a < b { ((a, b), costs) } else { ((b, a), transpose(&costs, d)) };
                let acc = pair.entry(key).or_insert_with(|| vec![0.0; d * d]);
                acc.iter_mut().zip(&table).for_each(|(x, c)| *x += c);
            }
            _ => unreachable!("arity checked above"),
        }
    }
    if cur.pos < cur.toks.len() {
        return Err(Error::parse(cur.line(), "trailing tokens after the last table"));
    }
    let edges: Vec<(usize, usize)> = pair.keys().copied().collect();
    let tables: Vec<Vec<f64>> = pair.into_values().collect();
    Model::new(n, &edges, d, vertex, tables)
}

/// Writes a model as a UAI `MARKOV` network with one unary table per
/// vertex and one pairwise table per edge, `φ = exp(-C)`.
pub fn emit_uai(model: &Model) -> String {
    let (n, d) = (model.n(), model.d());
    let mut out = String::from("MARKOV\n");
    let _ = writeln!(out, "{n}");
    let _ = writeln!(out, "{}", vec![d.to_string(); n].join(" "));
    let _ = writeln!(out, "{}", n + model.m());
    for i in 0..n {
        let _ = writeln!(out, "1 {i}");
    }
    for &(i, j) in model.edges() {
        let _ = writeln!(out, "2 {i} {j}");
    }
    let mut table = |costs: &[f64]| {
        let _ = writeln!(out, "\n{}", costs.len());
        let line: Vec<String> = costs.iter().map(|c| format!("{:.16e}", (-c).exp())).collect();
        let _ = writeln!(out, " {}", line.join(" "));
    };
    for i in 0..n {
        table(model.vertex_cost(i));
    }
    for e in 0..model.m() {
        table(model.edge_cost(e));
    }
    out
}
