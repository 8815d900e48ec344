//! Random walks on graphs and their regularization to at most two visits
//! per edge.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::error::{parse_err, Error, Result};
use crate::graph::Graph;
use crate::seed;

/// A walk `v_0 e_0 v_1 e_1 ... v_t`, where edge `e_i` joins `v_i` and `v_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    vertices: Vec<usize>,
    edge_trace: Vec<usize>,
}

impl Walk {
    /// Resolve a vertex sequence into a walk on `g`.
    pub fn from_vertices(g: &Graph, vertices: Vec<usize>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidWalk("empty vertex sequence".into()));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= g.num_vertices()) {
            return Err(Error::InvalidWalk(format!("vertex {v} not in graph")));
        }
        let edge_trace = vertices
            .windows(2)
            .map(|p| {
                g.edge_between(p[0], p[1])
                    .ok_or_else(|| Error::InvalidWalk(format!("{} and {} are not adjacent", p[0], p[1])))
            })
            .collect::<Result<_>>()?;
        Ok(Self { vertices, edge_trace })
    }

    /// Assemble a walk from raw parts, checking path validity.
    pub fn from_parts(g: &Graph, vertices: Vec<usize>, edge_trace: Vec<usize>) -> Result<Self> {
        let w = Self { vertices, edge_trace };
        w.validate(g)?;
        Ok(w)
    }

    /// Check that every recorded edge joins the consecutive vertices.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.vertices.len() != self.edge_trace.len() + 1 {
            return Err(Error::InvalidWalk(format!(
                "{} vertices for {} edges",
                self.vertices.len(),
                self.edge_trace.len()
            )));
        }
        for (i, &e) in self.edge_trace.iter().enumerate() {
            if e >= g.num_edges() {
                return Err(Error::InvalidWalk(format!("step {i}: edge {e} not in graph")));
            }
            let (a, b) = g.endpoints(e);
            let (u, v) = (self.vertices[i], self.vertices[i + 1]);
            if !((a == u && b == v) || (a == v && b == u)) {
                return Err(Error::InvalidWalk(format!("step {i}: edge {e} does not join {u} and {v}")));
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edge_trace(&self) -> &[usize] {
        &self.edge_trace
    }

    pub fn len(&self) -> usize {
        self.edge_trace.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edge_trace.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn edge_set(&self) -> BTreeSet<usize> {
        self.edge_trace.iter().copied().collect()
    }

    /// Traversal count per edge, keyed by edge index.
    pub fn multiplicities(&self) -> HashMap<usize, usize> {
        let mut m = HashMap::new();
        for &e in &self.edge_trace {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }

    pub fn max_multiplicity(&self) -> usize {
        self.multiplicities().into_values().max().unwrap_or(0)
    }

    pub fn to_line(&self) -> String {
        self.vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
    }
}

/// Walks as text: one line of space-separated vertex indices per walk.
pub fn walks_to_text(walks: &[Walk]) -> String {
    walks.iter().map(|w| w.to_line() + "\n").collect()
}

pub fn walks_from_text(g: &Graph, text: &str) -> Result<Vec<Walk>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, line)| {
            let verts = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| parse_err(i + 1, e.to_string())))
                .collect::<Result<Vec<_>>>()?;
            Walk::from_vertices(g, verts).map_err(|e| parse_err(i + 1, e.to_string()))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartMode {
    /// Every vertex with probability `1/n`.
    Uniform,
    /// Vertex `v` with probability `degree(v) / 2|E|` ("good start").
    DegreeProportional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub length: usize,
    pub start_mode: StartMode,
    pub seed: u64,
}

/// Draw a start vertex per `mode`.
pub fn draw_start<R: Rng + ?Sized>(g: &Graph, mode: StartMode, rng: &mut R) -> usize {
    match mode {
        StartMode::Uniform => rng.random_range(0..g.num_vertices()),
        StartMode::DegreeProportional => {
            // a uniform half-edge lands on v with probability degree(v)/2|E|
            let e = rng.random_range(0..g.num_edges());
            let (u, v) = g.endpoints(e);
            if rng.random::<bool>() {
                u
            } else {
                v
            }
        }
    }
}

/// Simple random walk of `cfg.length` steps; each step moves to a uniformly
/// chosen neighbour.
pub fn random_walk(g: &Graph, cfg: &WalkConfig) -> Result<Walk> {
    if cfg.length == 0 {
        return Err(Error::InvalidParameter("walk length must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::GraphNotConnected);
    }
    let mut rng = seed::rng(cfg.seed);
    let mut v = draw_start(g, cfg.start_mode, &mut rng);
    let mut vertices = Vec::with_capacity(cfg.length + 1);
    let mut edge_trace = Vec::with_capacity(cfg.length);
    vertices.push(v);
    for _ in 0..cfg.length {
        let nbrs = g.neighbors(v);
        let (u, e) = nbrs[rng.random_range(0..nbrs.len())];
        edge_trace.push(e);
        vertices.push(u);
        v = u;
    }
    Ok(Walk { vertices, edge_trace })
}

/// `count` independent walks with seeds derived from `cfg.seed` and the walk index.
pub fn random_walks(g: &Graph, cfg: &WalkConfig, count: usize) -> Result<Vec<Walk>> {
    (0..count).map(|i| random_walk(g, &WalkConfig { seed: seed::derive(cfg.seed, &[i as u64]), ..*cfg })).collect()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RegularizeOptions {
    /// Drop single edge copies while an Eulerian trail still exists.
    pub shorten: bool,
}

/// Regularize with default options.
pub fn regularize(w: &Walk, g: &Graph) -> Result<Walk> {
    regularize_with(w, g, RegularizeOptions::default())
}

/// Return a walk over exactly the edge set of `w` that traverses every edge
/// at most twice.
///
/// Walks already within the bound are returned unchanged. Otherwise every
/// visited edge is doubled; the doubled edge set is connected with all
/// degrees even, so it has an Eulerian circuit from the original start
/// vertex, which crosses each edge exactly twice.
pub fn regularize_with(w: &Walk, g: &Graph, opts: RegularizeOptions) -> Result<Walk> {
    w.validate(g)?;
    if w.max_multiplicity() <= 2 {
        return Ok(w.clone());
    }

    // distinct edges in order of first visit
    let mut order = Vec::new();
    let mut seen = BTreeSet::new();
    for &e in &w.edge_trace {
        if seen.insert(e) {
            order.push(e);
        }
    }
    let mut copies: Vec<(usize, usize)> = order.iter().map(|&e| (e, 2)).collect();

    if opts.shorten {
        let mut parity = vec![false; g.num_vertices()];
        for (i, c) in copies.iter_mut().enumerate() {
            let (a, b) = g.endpoints(order[i]);
            parity[a] ^= true;
            parity[b] ^= true;
            let odd = parity.iter().filter(|&&p| p).count();
            if odd > 2 {
                parity[a] ^= true;
                parity[b] ^= true;
            } else {
                c.1 = 1;
            }
        }
    }

    let mut degree_parity = vec![false; g.num_vertices()];
    for &(e, c) in &copies {
        if c % 2 == 1 {
            let (a, b) = g.endpoints(e);
            degree_parity[a] ^= true;
            degree_parity[b] ^= true;
        }
    }
    let start = if degree_parity[w.start()] || !degree_parity.iter().any(|&p| p) {
        w.start()
    } else {
        degree_parity.iter().position(|&p| p).unwrap()
    };

    let (vertices, edge_trace) = euler_trail(g, &copies, start);
    let out = Walk { vertices, edge_trace };
    debug_assert!(out.validate(g).is_ok());
    Ok(out)
}

/// Hierholzer's algorithm over a multigraph given as `(edge, copies)` pairs.
/// `start` must be a valid trail start (any vertex if all degrees are even,
/// otherwise one of the two odd vertices).
fn euler_trail(g: &Graph, copies: &[(usize, usize)], start: usize) -> (Vec<usize>, Vec<usize>) {
    let mut slots: Vec<usize> = Vec::new();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.num_vertices()];
    for &(e, c) in copies {
        let (a, b) = g.endpoints(e);
        for _ in 0..c {
            let id = slots.len();
            slots.push(e);
            incident[a].push((b, id));
            incident[b].push((a, id));
        }
    }
    let mut used = vec![false; slots.len()];
    let mut cursor = vec![0usize; g.num_vertices()];
    let mut stack: Vec<(usize, Option<usize>)> = vec![(start, None)];
    let mut popped: Vec<(usize, Option<usize>)> = Vec::with_capacity(slots.len() + 1);
    while let Some(&(v, _)) = stack.last() {
        let list = &incident[v];
        while cursor[v] < list.len() && used[list[cursor[v]].1] {
            cursor[v] += 1;
        }
        if cursor[v] < list.len() {
            let (u, id) = list[cursor[v]];
            used[id] = true;
            stack.push((u, Some(slots[id])));
        } else {
            popped.push(stack.pop().unwrap());
        }
    }
    // the edge between consecutive popped vertices is the arrival edge of the earlier one
    let vertices: Vec<usize> = popped.iter().rev().map(|&(v, _)| v).collect();
    let edge_trace: Vec<usize> = popped.iter().rev().skip(1).map(|&(_, e)| e.unwrap()).collect();
    (vertices, edge_trace)
}
