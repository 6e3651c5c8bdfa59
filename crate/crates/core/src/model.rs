//! Pairwise MRF instances and random instance generators.
//!
//! Edges are stored with the smaller endpoint first and every edge cost
//! table is indexed `(label of smaller endpoint, label of larger endpoint)`,
//! row-major. Dual blocks are addressed by `(edge, Side)`, with
//! [`Side::Low`] standing for the smaller endpoint.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Seeded generator used everywhere in the crate: ChaCha8 keyed by
/// `seed_from_u64`, which is platform independent.
pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which endpoint of an edge a dual block belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Low = 0,
    High = 1,
}

impl Side {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn other(self) -> Side {
        match self {
            Side::Low => Side::High,
            Side::High => Side::Low,
        }
    }
}

/// An (edge, endpoint) pair as seen from the endpoint vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Incidence {
    pub edge: usize,
    pub side: Side,
}

impl Incidence {
    /// Position of this block among the `2m` dual blocks.
    pub fn block(self) -> usize {
        2 * self.edge + self.side.index()
    }

    pub fn from_block(block: usize) -> Self {
        Incidence {
            edge: block / 2,
            side: if block % 2 == 0 { Side::Low } else { Side::High },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    n: usize,
    d: usize,
    edges: Vec<(usize, usize)>,
    vertex_costs: Vec<f64>,
    edge_costs: Vec<f64>,
    incidence: Vec<Vec<Incidence>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    pub max_degree: usize,
    pub min_degree: usize,
    /// Sum of all neighbourhood sizes; always `2m`.
    pub total: usize,
}

impl Model {
    /// Validates and builds a model. Edges given as `(j, i)` with `j > i` are
    /// flipped and their cost table transposed. Each edge table is a
    /// row-major `d * d` vector indexed by the labels of the endpoints in the
    /// order the edge was supplied.
    pub fn new(
        n: usize,
        edges: &[(usize, usize)],
        d: usize,
        vertex_costs: Vec<Vec<f64>>,
        edge_costs: Vec<Vec<f64>>,
    ) -> Result<Model> {
        if d < 2 {
            return Err(Error::InvalidModel(format!("label count d={d} must be at least 2")));
        }
        if vertex_costs.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "expected {n} vertex cost vectors, got {}",
                vertex_costs.len()
            )));
        }
        if edge_costs.len() != edges.len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} edge cost tables, got {}",
                edges.len(),
                edge_costs.len()
            )));
        }
        let mut flat_vertex = Vec::with_capacity(n * d);
        for (i, c) in vertex_costs.iter().enumerate() {
            if c.len() != d {
                return Err(Error::ShapeMismatch(format!(
                    "vertex {i} has {} costs, expected {d}",
                    c.len()
                )));
            }
            if let Some(x) = c.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidModel(format!("non-finite cost at vertex {i} label {x}")));
            }
            flat_vertex.extend_from_slice(c);
        }

        let mut canonical: Vec<((usize, usize), Vec<f64>)> = Vec::with_capacity(edges.len());
        let mut seen = HashSet::new();
        for (k, (&(a, b), table)) in edges.iter().zip(edge_costs).enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidModel(format!(
                    "edge {k} = ({a},{b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidModel(format!("self-loop at vertex {a}")));
            }
            if table.len() != d * d {
                return Err(Error::ShapeMismatch(format!(
                    "edge ({a},{b}) has {} costs, expected {}",
                    table.len(),
                    d * d
                )));
            }
            if table.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidModel(format!("non-finite cost on edge ({a},{b})")));
            }
            let (i, j, table) = if a < b {
                (a, b, table)
            } else {
                (b, a, transpose(&table, d))
            };
            if !seen.insert((i, j)) {
                return Err(Error::InvalidModel(format!("duplicate edge ({i},{j})")));
            }
            canonical.push(((i, j), table));
        }

        let mut incidence = vec![Vec::new(); n];
        let mut flat_edges = Vec::with_capacity(canonical.len() * d * d);
        let mut edge_list = Vec::with_capacity(canonical.len());
        for (e, ((i, j), table)) in canonical.into_iter().enumerate() {
            incidence[i].push(Incidence { edge: e, side: Side::Low });
            incidence[j].push(Incidence { edge: e, side: Side::High });
            edge_list.push((i, j));
            flat_edges.extend(table);
        }
        if let Some(v) = incidence.iter().position(|inc| inc.is_empty()) {
            return Err(Error::InvalidModel(format!("isolated vertex {v}")));
        }

        Ok(Model {
            n,
            d,
            edges: edge_list,
            vertex_costs: flat_vertex,
            edge_costs: flat_edges,
            incidence,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Vertex at the given side of edge `e`.
    pub fn endpoint(&self, e: usize, side: Side) -> usize {
        let (i, j) = self.edges[e];
        match side {
            Side::Low => i,
            Side::High => j,
        }
    }

    pub fn vertex_cost(&self, i: usize) -> &[f64] {
        &self.vertex_costs[i * self.d..(i + 1) * self.d]
    }

    /// Row-major `d * d` table for edge `e`.
    pub fn edge_cost(&self, e: usize) -> &[f64] {
        let dd = self.d * self.d;
        &self.edge_costs[e * dd..(e + 1) * dd]
    }

    pub fn incident(&self, i: usize) -> &[Incidence] {
        &self.incidence[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.incidence[i].len()
    }

    /// Primal dimension `nd + md^2`.
    pub fn primal_dim(&self) -> usize {
        self.n * self.d + self.m() * self.d * self.d
    }

    /// Dual dimension `2md`.
    pub fn dual_dim(&self) -> usize {
        2 * self.m() * self.d
    }

    pub fn num_blocks(&self) -> usize {
        2 * self.m()
    }

    /// Largest absolute cost over all vertex and edge tables.
    pub fn cost_inf_norm(&self) -> f64 {
        self.vertex_costs
            .iter()
            .chain(&self.edge_costs)
            .fold(0.0, |acc, c| acc.max(c.abs()))
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let degrees: Vec<usize> = self.incidence.iter().map(Vec::len).collect();
        DegreeStats {
            max_degree: degrees.iter().copied().max().unwrap_or(0),
            min_degree: degrees.iter().copied().min().unwrap_or(0),
            total: degrees.iter().sum(),
            degrees,
        }
    }

    /// True when the graph has no cycle.
    pub fn is_forest(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(i, j) in &self.edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a == b {
                return false;
            }
            parent[a] = b;
        }
        true
    }

    /// Returns a copy with every cost multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Model {
        let mut out = self.clone();
        out.vertex_costs.iter_mut().for_each(|c| *c *= factor);
        out.edge_costs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// MAP objective of an integral labelling.
    pub fn map_value(&self, assignment: &Assignment) -> Result<f64> {
        assignment.check(self)?;
        let x = assignment.labels();
        let d = self.d;
        let vertex: f64 = (0..self.n).map(|i| self.vertex_cost(i)[x[i]]).sum();
        let edge: f64 = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, &(i, j))| self.edge_cost(e)[x[i] * d + x[j]])
            .sum();
        Ok(vertex + edge)
    }
}

pub(crate) fn transpose(table: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            out[b * d + a] = table[a * d + b];
        }
    }
    out
}

/// One label per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(labels: Vec<usize>) -> Self {
        Assignment(labels)
    }

    /// Builds an assignment and validates it against `model`.
    pub fn for_model(model: &Model, labels: Vec<usize>) -> Result<Self> {
        let a = Assignment(labels);
        a.check(model)?;
        Ok(a)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, model: &Model) -> Result<()> {
        if self.0.len() != model.n() {
            return Err(Error::ShapeMismatch(format!(
                "assignment has {} labels, model has {} vertices",
                self.0.len(),
                model.n()
            )));
        }
        if let Some(i) = self.0.iter().position(|&x| x >= model.d()) {
            return Err(Error::InvalidArgument(format!(
                "label {} at vertex {i} out of range 0..{}",
                self.0[i],
                model.d()
            )));
        }
        Ok(())
    }
}

/// Edge probability used by the benchmark family: `1.1 log(n) / n`.
pub fn default_edge_prob(n: usize) -> f64 {
    1.1 * (n as f64).ln() / n as f64
}

fn potts_costs(
    rng: &mut SeededRng,
    n: usize,
    m: usize,
    d: usize,
) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let vertex = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-0.01..=0.01)).collect())
        .collect();
    let edge = (0..m)
        .map(|_| {
            (0..d * d)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    (vertex, edge)
}

/// Erdős–Rényi graph with random Potts-style costs: unary costs uniform in
/// `[-0.01, 0.01]`, pairwise entries uniform in `{-1, +1}`.
///
/// Pairs are drawn in lexicographic order. A vertex left isolated is then
/// joined to a uniformly chosen other vertex, scanning vertices in
/// increasing order; this repair draws from the same stream.
pub fn erdos_renyi_potts(n: usize, edge_prob: f64, d: usize, seed: u64) -> Result<Model> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n={n} must be at least 2")));
    }
    if !(edge_prob > 0.0 && edge_prob <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "edge probability {edge_prob} must lie in (0, 1]"
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut edges = Vec::new();
    let mut degree = vec![0usize; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < edge_prob {
                edges.push((i, j));
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    for v in 0..n {
        if degree[v] == 0 {
            let mut u = rng.gen_range(0..n - 1);
            if u >= v {
                u += 1;
            }
            edges.push((v.min(u), v.max(u)));
            degree[v] += 1;
            degree[u] += 1;
        }
    }
    edges.sort_unstable();
    let (vertex, edge) = potts_costs(&mut rng, n, edges.len(), d);
    Model::new(n, &edges, d, vertex, edge)
}

/// Random recursive tree (vertex `k` attaches to a uniform earlier vertex)
/// with the same cost distribution as [`erdos_renyi_potts`].
pub fn random_tree_potts(n: usize, d: usize, seed: u64) -> Result<Model> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n={n} must be at least 2")));
    }
    let mut rng = seeded_rng(seed);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|k| (rng.gen_range(0..k), k)).collect();
    edges.sort_unstable();
    let (vertex, edge) = potts_costs(&mut rng, n, edges.len(), d);
    Model::new(n, &edges, d, vertex, edge)
}

/// Random costs on a caller-supplied graph, uniform in `[-scale, scale]`.
pub fn random_costs_on(
    n: usize,
    edges: &[(usize, usize)],
    d: usize,
    scale: f64,
    seed: u64,
) -> Result<Model> {
    let mut rng = seeded_rng(seed);
    let vertex = (0..n)
        .map(|_| (0..d).map(|_| rng.gen_range(-scale..=scale)).collect())
        .collect();
    let edge = edges
        .iter()
        .map(|_| (0..d * d).map(|_| rng.gen_range(-scale..=scale)).collect())
        .collect();
    Model::new(n, edges, d, vertex, edge)
}
