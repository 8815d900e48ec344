//! Simple undirected graphs, generators, and random-walk mixing diagnostics.

use std::collections::HashMap;
use std::fmt::Write as _;

use rand::Rng;

use crate::error::{parse_err, Error, Result};
use crate::seed;

/// Undirected simple graph with indexed edges.
///
/// Edge `e` joins `edges[e].0` and `edges[e].1`. The adjacency list of every
/// vertex holds `(neighbor, edge index)` pairs in edge-index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
    lookup: HashMap<(usize, usize), usize>,
}

impl Graph {
    /// Build a graph from an edge list. Self-loops, out-of-range endpoints
    /// and parallel edges are rejected.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        let mut lookup = HashMap::with_capacity(edges.len());
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!("edge {e} ({u},{v}) has an endpoint outside 0..{n}")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("edge {e} is a self-loop at {u}")));
            }
            if lookup.insert(key(u, v), e).is_some() {
                return Err(Error::InvalidParameter(format!("edge {e} ({u},{v}) is a parallel edge")));
            }
            adjacency[u].push((v, e));
            adjacency[v].push((u, e));
        }
        Ok(Self { n, edges, adjacency, lookup })
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    /// Index of the edge joining `u` and `v`, if any.
    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        self.lookup.get(&key(u, v)).copied()
    }

    /// True iff the graph has at least one vertex, no isolated vertices, and
    /// a single connected component.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 || (self.n > 1 && self.adjacency.iter().any(Vec::is_empty)) {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Two-colouring check over the whole graph.
    pub fn is_bipartite(&self) -> bool {
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for &(v, _) in &self.adjacency[u] {
                    match color[v] {
                        None => {
                            color[v] = Some(!cu);
                            stack.push(v);
                        }
                        Some(cv) if cv == cu => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }

    /// Stationary law of the simple random walk: `degree(v) / 2|E|`.
    pub fn stationary(&self) -> Vec<f64> {
        let total = 2.0 * self.num_edges() as f64;
        self.adjacency.iter().map(|a| a.len() as f64 / total).collect()
    }

    /// One step of the walk applied to a vertex distribution.
    pub fn step_distribution(&self, dist: &[f64]) -> Vec<f64> {
        let mut next = vec![0.0; self.n];
        for (u, &mass) in dist.iter().enumerate() {
            if mass == 0.0 {
                continue;
            }
            let share = mass / self.adjacency[u].len() as f64;
            for &(v, _) in &self.adjacency[u] {
                next[v] += share;
            }
        }
        next
    }

    /// Worst-case (over start vertices) infinity-norm distance to the
    /// stationary law after `1..=t_max` steps. Entry `i` is the distance
    /// after `i + 1` steps.
    pub fn distance_trace(&self, t_max: usize) -> Result<Vec<f64>> {
        if !self.is_connected() {
            return Err(Error::GraphNotConnected);
        }
        let mu = self.stationary();
        let mut rows: Vec<Vec<f64>> = (0..self.n)
            .map(|s| {
                let mut r = vec![0.0; self.n];
                r[s] = 1.0;
                r
            })
            .collect();
        let mut trace = Vec::with_capacity(t_max);
        for _ in 0..t_max {
            for r in rows.iter_mut() {
                *r = self.step_distribution(r);
            }
            let dist = rows.iter().flat_map(|r| r.iter().zip(&mu).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max);
            trace.push(dist);
        }
        Ok(trace)
    }

    /// Serialize as the edge-list text format: `n m` then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.num_edges());
        for &(u, v) in &self.edges {
            writeln!(out, "{u} {v}").unwrap();
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
        let (n, m) = parse_pair(header, hl + 1)?;
        let mut edges = Vec::with_capacity(m);
        for (i, line) in lines {
            edges.push(parse_pair(line, i + 1)?);
        }
        if edges.len() != m {
            return Err(parse_err(hl + 1, format!("header declares {m} edges, found {}", edges.len())));
        }
        Graph::new(n, edges)
    }
}

fn key(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| parse_err(lineno, "expected two integers"))?
            .parse()
            .map_err(|e| parse_err(lineno, format!("{e}")))
    };
    let pair = (next()?, next()?);
    if it.next().is_some() {
        return Err(parse_err(lineno, "trailing tokens"));
    }
    Ok(pair)
}

/// Complete graph on `n` vertices, edges in lexicographic pair order.
pub fn make_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("complete graph needs n >= 2, got {n}")));
    }
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    Graph::new(n, edges)
}

/// Octahedron K_{2,2,2}: 6 vertices, 12 edges, 4-regular, not bipartite.
pub fn make_octahedron() -> Graph {
    let edges = (0..6usize).flat_map(|i| (i + 1..6).map(move |j| (i, j))).filter(|&(i, j)| i + j != 5).collect();
    Graph::new(6, edges).unwrap()
}

/// Erdős–Rényi G(n, p): every unordered pair kept independently with
/// probability `p`, visited in lexicographic order from a seeded stream.
pub fn make_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = seed::rng(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

/// Draw G(n, p) samples from derived seeds until one is connected.
pub fn make_connected_gnp(n: usize, p: f64, seed: u64, max_attempts: usize) -> Result<Graph> {
    for attempt in 0..max_attempts {
        let g = make_gnp(n, p, seed::derive(seed, &[attempt as u64]))?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GraphNotConnected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixingTime {
    Steps(usize),
    NotReached,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphProfile {
    /// Minimum vertex degree.
    pub d_min_vertex: usize,
    pub d_max_vertex: usize,
    /// `ceil(d_max / d_min)`, so every degree lies in `[D, cD]`.
    pub c: usize,
    /// `1 / (2 c n)^2`.
    pub delta: f64,
    pub mixing_time: MixingTime,
}

/// Degree extremes and exact δ-mixing time with δ = 1/(2cn)².
pub fn profile(g: &Graph, t_max: usize) -> Result<GraphProfile> {
    if t_max == 0 {
        return Err(Error::InvalidParameter("t_max must be at least 1".into()));
    }
    if !g.is_connected() {
        return Err(Error::GraphNotConnected);
    }
    let degrees = g.degrees();
    let d_min = *degrees.iter().min().unwrap();
    let d_max = *degrees.iter().max().unwrap();
    let c = d_max.div_ceil(d_min);
    let delta = 1.0 / (2.0 * c as f64 * g.num_vertices() as f64).powi(2);
    let mixing_time = if g.is_bipartite() {
        MixingTime::NotReached
    } else {
        g.distance_trace(t_max)?
            .iter()
            .position(|&d| d <= delta)
            .map_or(MixingTime::NotReached, |i| MixingTime::Steps(i + 1))
    };
    Ok(GraphProfile { d_min_vertex: d_min, d_max_vertex: d_max, c, delta, mixing_time })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Union-find connectivity, independent of the BFS in `is_connected`.
    fn uf_connected(g: &Graph) -> bool {
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        let n = g.num_vertices();
        let mut p: Vec<usize> = (0..n).collect();
        for &(u, v) in g.edges() {
            let (a, b) = (find(&mut p, u), find(&mut p, v));
            p[a] = b;
        }
        let r = find(&mut p, 0);
        (0..n).all(|v| find(&mut p, v) == r)
    }

    #[test]
    fn complete_graph_sizes() {
        let g = make_complete(50).unwrap();
        assert_eq!(g.num_edges(), 1225);
        let g = make_complete(2).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.degrees(), vec![1, 1]);
        let g = make_complete(6).unwrap();
        assert_eq!(g.num_edges(), 15);
        assert!(g.degrees().iter().all(|&d| d == 5));
        assert!(matches!(make_complete(1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn gnp_extremes_and_reproducibility() {
        assert_eq!(make_gnp(12, 1.0, 3).unwrap().edges(), make_complete(12).unwrap().edges());
        assert_eq!(make_gnp(12, 0.0, 3).unwrap().num_edges(), 0);
        assert_eq!(make_gnp(30, 0.5, 9).unwrap(), make_gnp(30, 0.5, 9).unwrap());
        assert!(make_gnp(5, 1.5, 0).is_err());
        assert!(make_gnp(5, -0.1, 0).is_err());
    }

    #[test]
    fn gnp_50_half_has_about_612_edges() {
        let mean = (0..200).map(|s| make_gnp(50, 0.5, s).unwrap().num_edges() as f64).sum::<f64>() / 200.0;
        // sd of a single sample is sqrt(1225/4) = 17.5; of the mean, ~1.24
        assert!((mean - 612.5).abs() < 5.0, "mean edge count {mean}");
    }

    #[test]
    fn connectivity_matches_union_find() {
        assert!(make_complete(4).unwrap().is_connected());
        let two = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert!(!two.is_connected());
        for s in 0..50 {
            let g = make_gnp(50, 0.5, s).unwrap();
            assert_eq!(g.is_connected(), uf_connected(&g));
            let sparse = make_gnp(20, 0.1, s).unwrap();
            assert_eq!(sparse.is_connected(), uf_connected(&sparse), "seed {s}");
        }
    }

    #[test]
    fn octahedron_shape() {
        let g = make_octahedron();
        assert_eq!(g.num_edges(), 12);
        assert!(g.degrees().iter().all(|&d| d == 4));
        assert!(!g.is_bipartite());
        assert!(g.edge_between(0, 5).is_none());
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::new(3, vec![(0, 0)]).is_err());
        assert!(Graph::new(3, vec![(0, 3)]).is_err());
        assert!(Graph::new(3, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn stationary_law_is_invariant() {
        for s in 0..5 {
            let g = make_connected_gnp(30, 0.3, s, 100).unwrap();
            let mu = g.stationary();
            assert!((mu.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let next = g.step_distribution(&mu);
            let resid = next.iter().zip(&mu).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(resid <= 1e-12);
            assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.num_edges());
        }
        let mu = make_complete(7).unwrap().stationary();
        assert!(mu.iter().all(|&p| (p - 1.0 / 7.0).abs() < 1e-15));
    }

    #[test]
    fn k6_mixing_time_matches_closed_form() {
        // For K_n the worst deviation after t steps is (1/n)(n-1)^(1-t).
        let g = make_complete(6).unwrap();
        let trace = g.distance_trace(6).unwrap();
        for (i, d) in trace.iter().enumerate() {
            let t = (i + 1) as i32;
            assert!((d - 5f64.powi(1 - t) / 6.0).abs() < 1e-14);
        }
        let p = profile(&g, 50).unwrap();
        assert_eq!(p.c, 1);
        assert_eq!(p.d_min_vertex, 5);
        assert!((p.delta - 1.0 / 144.0).abs() < 1e-18);
        // smallest t with 5^(t-1) >= 24
        assert_eq!(p.mixing_time, MixingTime::Steps(3));
    }

    #[test]
    fn periodic_walks_never_mix() {
        let p2 = make_complete(2).unwrap();
        assert_eq!(profile(&p2, 1000).unwrap().mixing_time, MixingTime::NotReached);
        let c4 = Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(profile(&c4, 100).unwrap().mixing_time, MixingTime::NotReached);
        let two = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        assert_eq!(profile(&two, 10), Err(Error::GraphNotConnected));
    }

    #[test]
    fn distance_is_monotone_on_non_bipartite_graphs() {
        for s in 0..5 {
            let g = make_connected_gnp(25, 0.3, s, 100).unwrap();
            let trace = g.distance_trace(40).unwrap();
            for w in trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "seed {s}: {} then {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn profile_degree_ratio_is_ceiled() {
        // star with 3 leaves plus an edge between two leaves: degrees 3,2,2,1
        let g = Graph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2)]).unwrap();
        let p = profile(&g, 10).unwrap();
        assert_eq!((p.d_min_vertex, p.d_max_vertex, p.c), (1, 3, 3));
        assert!((p.delta - 1.0 / (24.0f64).powi(2)).abs() < 1e-18);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = make_gnp(15, 0.4, 11).unwrap();
        let text = g.to_edge_list();
        let back = Graph::from_edge_list(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_edge_list(), text);
        let err = Graph::from_edge_list("3 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
