//! Direct particle simulation of the frog model on a finite connected graph.
//!
//! One sleeping particle per vertex, the root's particle awake. An awake
//! particle first survives with probability `p` (otherwise it dies), then
//! jumps to a uniform neighbour; landing on a never-visited vertex wakes the
//! particle there. Each surviving step consumes two draws from the stream.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::aux::{Trajectory, DEFAULT_ROUND_CAP};
use crate::error::{Error, Result};
use crate::model::{validate_params, RngStream};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
enum Adjacency {
    /// `K_N` without materialized lists.
    Complete(usize),
    Lists(Vec<Vec<usize>>),
}

/// Undirected, connected, loop-free rooted graph with at least two vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Adjacency,
    root: usize,
}

impl Graph {
    /// Builds a graph from neighbour lists, rejecting self-loops, duplicate or
    /// one-directional edges, and disconnected inputs.
    pub fn from_adjacency(lists: Vec<Vec<usize>>, root: usize) -> Result<Self> {
        let count = lists.len();
        if count < 2 {
            return Err(Error::GraphInvalid(format!("{count} vertices, need at least 2")));
        }
        if root >= count {
            return Err(Error::GraphInvalid(format!("root {root} out of range")));
        }
        let mut sorted = lists.clone();
        for (v, neighbours) in sorted.iter_mut().enumerate() {
            neighbours.sort_unstable();
            if neighbours.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::GraphInvalid(format!("duplicate edge at vertex {v}")));
            }
            if let Some(&w) = neighbours.iter().find(|&&w| w >= count || w == v) {
                return Err(Error::GraphInvalid(format!("bad neighbour {w} of vertex {v}")));
            }
        }
        for (v, neighbours) in sorted.iter().enumerate() {
            for &w in neighbours {
                if sorted[w].binary_search(&v).is_err() {
                    return Err(Error::GraphInvalid(format!("edge {v}-{w} not symmetric")));
                }
            }
        }
        let graph = Graph {
            adjacency: Adjacency::Lists(lists),
            root,
        };
        if !graph.is_connected() {
            return Err(Error::GraphInvalid("graph is disconnected".into()));
        }
        Ok(graph)
    }

    pub fn vertex_count(&self) -> usize {
        match &self.adjacency {
            Adjacency::Complete(n) => *n,
            Adjacency::Lists(lists) => lists.len(),
        }
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn degree(&self, v: usize) -> usize {
        match &self.adjacency {
            Adjacency::Complete(n) => n - 1,
            Adjacency::Lists(lists) => lists[v].len(),
        }
    }

    pub fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        match &self.adjacency {
            Adjacency::Complete(n) => (0..*n).filter(|&w| w != v).collect(),
            Adjacency::Lists(lists) => lists[v].clone(),
        }
    }

    #[inline]
    fn random_neighbour(&self, v: usize, stream: &mut RngStream) -> usize {
        match &self.adjacency {
            Adjacency::Complete(n) => {
                let w = stream.below(n - 1);
                if w >= v {
                    w + 1
                } else {
                    w
                }
            }
            Adjacency::Lists(lists) => lists[v][stream.below(lists[v].len())],
        }
    }

    fn is_connected(&self) -> bool {
        let count = self.vertex_count();
        let mut seen = vec![false; count];
        let mut stack = vec![self.root];
        seen[self.root] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == count
    }

    /// Parses the edge-list format: a header `N M root`, then `M` lines `u v`
    /// with 0-indexed endpoints. Tokens are whitespace-separated.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|line| !line.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::GraphInvalid("empty edge list".into()))?;
        let [count, edges, root] = parse_fields::<3>(header)?;
        let mut lists = vec![Vec::new(); count];
        let mut seen = 0;
        for line in lines {
            let [u, v] = parse_fields::<2>(line)?;
            if u >= count || v >= count {
                return Err(Error::GraphInvalid(format!("edge {u} {v} out of range")));
            }
            lists[u].push(v);
            lists[v].push(u);
            seen += 1;
        }
        if seen != edges {
            return Err(Error::GraphInvalid(format!("header promises {edges} edges, found {seen}")));
        }
        Graph::from_adjacency(lists, root)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {} {}\n", self.vertex_count(), self.edge_count(), self.root);
        for v in 0..self.vertex_count() {
            for w in self.neighbours(v) {
                if v < w {
                    let _ = writeln!(out, "{v} {w}");
                }
            }
        }
        out
    }
}

fn parse_fields<const K: usize>(line: &str) -> Result<[usize; K]> {
    let fields: Vec<usize> = line
        .split_whitespace()
        .map(|tok| tok.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::GraphInvalid(format!("line {line:?}: {e}")))?;
    fields
        .try_into()
        .map_err(|_| Error::GraphInvalid(format!("line {line:?}: expected {K} fields")))
}

/// `K_N` rooted at vertex 0.
pub fn make_complete(n_vertices: usize) -> Result<Graph> {
    if n_vertices < 2 {
        return Err(Error::NInvalid(n_vertices));
    }
    Ok(Graph {
        adjacency: Adjacency::Complete(n_vertices),
        root: 0,
    })
}

pub fn make_cycle(n_vertices: usize) -> Result<Graph> {
    if n_vertices < 3 {
        return Err(Error::NInvalid(n_vertices));
    }
    let lists = (0..n_vertices)
        .map(|v| vec![(v + n_vertices - 1) % n_vertices, (v + 1) % n_vertices])
        .collect();
    Graph::from_adjacency(lists, 0)
}

pub fn make_path(n_vertices: usize) -> Result<Graph> {
    if n_vertices < 2 {
        return Err(Error::NInvalid(n_vertices));
    }
    let lists = (0..n_vertices)
        .map(|v| {
            let mut neighbours = Vec::with_capacity(2);
            if v > 0 {
                neighbours.push(v - 1);
            }
            if v + 1 < n_vertices {
                neighbours.push(v + 1);
            }
            neighbours
        })
        .collect();
    Graph::from_adjacency(lists, 0)
}

/// A particle: where it sits and whether it is awake.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParticleState {
    pub position: usize,
    pub active: bool,
}

/// Initial configuration: one particle per vertex, only the root's awake.
pub fn initial_particles(graph: &Graph) -> Vec<ParticleState> {
    (0..graph.vertex_count())
        .map(|v| ParticleState {
            position: v,
            active: v == graph.root(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Scheduling {
    /// One particle acts per step, taken from a FIFO queue.
    #[default]
    Queue,
    /// All particles awake at time `t` act at time `t`; particles woken at
    /// time `t` start at `t + 1`.
    Simultaneous,
}

#[derive(Debug, Clone, Copy)]
pub struct FrogOptions {
    pub scheduling: Scheduling,
    /// Cap on particle steps (queue) or time steps (simultaneous).
    pub step_cap: u64,
}

impl Default for FrogOptions {
    fn default() -> Self {
        FrogOptions {
            scheduling: Scheduling::Queue,
            step_cap: DEFAULT_ROUND_CAP,
        }
    }
}

/// Runs the frog model until no particle is awake. `r_rounds` counts
/// particle steps in queue mode and time steps in simultaneous mode.
pub fn run_frog(graph: &Graph, p: f64, stream: &mut RngStream) -> Result<Trajectory> {
    run_frog_with(graph, p, stream, FrogOptions::default())
}

pub fn run_frog_with(
    graph: &Graph,
    p: f64,
    stream: &mut RngStream,
    options: FrogOptions,
) -> Result<Trajectory> {
    let mut params = validate_params(p, graph.vertex_count())?;
    params.seed = stream.seed();
    let death = 1.0 - p;
    let mut visited = vec![false; graph.vertex_count()];
    visited[graph.root()] = true;
    let mut visited_count = 1usize;
    // Positions of awake particles; identities are irrelevant.
    let mut awake: VecDeque<usize> = VecDeque::from([graph.root()]);
    let mut peak = 1usize;
    let mut steps = 0u64;
    match options.scheduling {
        Scheduling::Queue => {
            while let Some(position) = awake.pop_front() {
                if steps >= options.step_cap {
                    return Err(Error::RoundCapExceeded {
                        cap: options.step_cap,
                    });
                }
                steps += 1;
                if stream.uniform() < death {
                    continue;
                }
                let target = graph.random_neighbour(position, stream);
                awake.push_back(target);
                if !visited[target] {
                    visited[target] = true;
                    visited_count += 1;
                    awake.push_back(target);
                }
                peak = peak.max(awake.len());
            }
        }
        Scheduling::Simultaneous => {
            let mut next = VecDeque::new();
            while !awake.is_empty() {
                if steps >= options.step_cap {
                    return Err(Error::RoundCapExceeded {
                        cap: options.step_cap,
                    });
                }
                steps += 1;
                for position in awake.drain(..) {
                    if stream.uniform() < death {
                        continue;
                    }
                    let target = graph.random_neighbour(position, stream);
                    next.push_back(target);
                    if !visited[target] {
                        visited[target] = true;
                        visited_count += 1;
                        next.push_back(target);
                    }
                }
                std::mem::swap(&mut awake, &mut next);
                peak = peak.max(awake.len());
            }
        }
    }
    Ok(Trajectory {
        v_infinity: visited_count,
        r_rounds: steps,
        peak_active: peak as u64,
        params,
        history: None,
    })
}
