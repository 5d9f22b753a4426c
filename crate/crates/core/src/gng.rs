//! Growing Neural Gas.
//!
//! An unconstrained graph whose edges come from competitive Hebbian learning:
//! every step connects (or refreshes) the two units nearest to the input. Edges
//! that go unrefreshed for more than `max_age` steps expire, and units that lose
//! their last edge disappear. Every `insert_every` steps a unit is added between
//! the unit with the largest accumulated error and its worst neighbor.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::common::{check_same_dim, squared_distance_unchecked, Dataset, RandomStream, Vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GngNode {
    pub id: usize,
    pub w: Vector,
    /// Accumulated squared quantization error.
    pub error: f64,
}

/// Undirected graph of units. Edges are keyed `(low id, high id)` and map to their age.
#[derive(Debug, Clone, PartialEq)]
pub struct GngGraph {
    nodes: BTreeMap<usize, GngNode>,
    edges: BTreeMap<(usize, usize), u32>,
    next_id: usize,
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl GngGraph {
    /// Graph of unconnected units with zero error, ids `0..n`.
    pub fn from_vectors(vectors: Vec<Vector>) -> Result<Self> {
        let nodes = vectors
            .into_iter()
            .enumerate()
            .map(|(id, w)| (id, GngNode { id, w, error: 0.0 }))
            .collect();
        Self::from_parts(nodes, Vec::new())
    }

    /// Builds a graph from explicit parts. Rejects self-loops, duplicate
    /// edges, unknown endpoints and mixed dimensions.
    pub fn from_parts(nodes: BTreeMap<usize, GngNode>, edges: Vec<(usize, usize, u32)>) -> Result<Self> {
        if let Some(first) = nodes.values().next() {
            let dim = first.w.dim();
            for (&id, n) in &nodes {
                check_same_dim(dim, n.w.dim())?;
                if n.id != id {
                    return Err(Error::param("gng graph", format!("node keyed {id} carries id {}", n.id)));
                }
                if !(n.error.is_finite() && n.error >= 0.0) {
                    return Err(Error::param("gng graph", format!("node {id} has error {}", n.error)));
                }
            }
        }
        let mut map = BTreeMap::new();
        for (a, b, age) in edges {
            if a == b {
                return Err(Error::param("gng graph", format!("self-loop on {a}")));
            }
            for id in [a, b] {
                if !nodes.contains_key(&id) {
                    return Err(Error::UnknownNode(id));
                }
            }
            if map.insert(key(a, b), age).is_some() {
                return Err(Error::param("gng graph", format!("duplicate edge {a}-{b}")));
            }
        }
        let next_id = nodes.keys().next_back().map_or(0, |&id| id + 1);
        Ok(GngGraph {
            nodes,
            edges: map,
            next_id,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes.values().next().map_or(0, |n| n.w.dim())
    }

    pub fn nodes(&self) -> impl Iterator<Item = &GngNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: usize) -> Option<&GngNode> {
        self.nodes.get(&id)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(low id, high id, age)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(a, b), &age)| (a, b, age))
    }

    pub fn edge_age(&self, a: usize, b: usize) -> Option<u32> {
        self.edges.get(&key(a, b)).copied()
    }

    pub fn neighbors(&self, id: usize) -> BTreeSet<usize> {
        self.edges
            .keys()
            .filter_map(|&(a, b)| match (a == id, b == id) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }

    pub fn codebook(&self) -> Vec<Vector> {
        self.nodes.values().map(|n| n.w.clone()).collect()
    }

    /// Nearest and second-nearest unit ids; ties go to the lowest id.
    pub fn winners(&self, x: &[f64]) -> Result<(usize, usize)> {
        if self.nodes.len() < 2 {
            return Err(Error::NotEnoughUnits {
                required: 2,
                found: self.nodes.len(),
            });
        }
        check_same_dim(self.dim(), x.len())?;
        let ids: Vec<usize> = self.nodes.keys().copied().collect();
        let codebook: Vec<&[f64]> = self.nodes.values().map(|n| n.w.as_slice()).collect();
        let (a, b) = crate::common::find_winners(&codebook, x)?;
        Ok((ids[a], ids[b]))
    }

    fn node_mut(&mut self, id: usize) -> &mut GngNode {
        self.nodes.get_mut(&id).expect("node id present")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GngParams {
    pub eps_b: f64,
    pub eps_n: f64,
    /// Edges older than this are removed.
    pub max_age: u32,
    /// Steps between insertions (0 disables growth).
    pub insert_every: usize,
    /// Factor applied to the errors of `q` and `f` on insertion.
    pub alpha_split: f64,
    /// Fraction of every error removed per step.
    pub beta_decay: f64,
    pub max_nodes: usize,
}

impl Default for GngParams {
    fn default() -> Self {
        GngParams {
            eps_b: 0.2,
            eps_n: 0.006,
            max_age: 50,
            insert_every: 100,
            alpha_split: 0.5,
            beta_decay: 0.0005,
            max_nodes: 100,
        }
    }
}

impl GngParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.eps_b > 0.0 && self.eps_b <= 1.0) {
            return Err(Error::param("gng.eps_b", "must lie in (0, 1]"));
        }
        if !(self.eps_n > 0.0 && self.eps_n < self.eps_b) {
            return Err(Error::param("gng.eps_n", "must lie in (0, eps_b)"));
        }
        if self.max_age == 0 {
            return Err(Error::param("gng.max_age", "must be >= 1"));
        }
        if !(self.alpha_split > 0.0 && self.alpha_split < 1.0) {
            return Err(Error::param("gng.alpha_split", "must lie in (0, 1)"));
        }
        if !(self.beta_decay > 0.0 && self.beta_decay < 1.0) {
            return Err(Error::param("gng.beta_decay", "must lie in (0, 1)"));
        }
        if self.max_nodes < 2 {
            return Err(Error::param("gng.max_nodes", "must be >= 2"));
        }
        Ok(())
    }
}

/// One adaptation step. Returns the first and second winner ids.
///
/// Order: accumulate the winner's squared error, move the winner and its
/// current neighbors, refresh the winner/runner-up edge, age the winner's
/// other edges, expire old edges, drop isolated units, decay all errors.
pub fn gng_adapt_step(g: &mut GngGraph, params: &GngParams, x: &[f64]) -> Result<(usize, usize)> {
    let (s1, s2) = g.winners(x)?;

    let winner = g.node_mut(s1);
    winner.error += squared_distance_unchecked(&winner.w, x);
    winner.w.move_toward(x, params.eps_b);
    for j in g.neighbors(s1) {
        g.node_mut(j).w.move_toward(x, params.eps_n);
    }

    let refreshed = key(s1, s2);
    g.edges.insert(refreshed, 0);
    for (&(a, b), age) in g.edges.iter_mut() {
        if (a == s1 || b == s1) && (a, b) != refreshed {
            *age += 1;
        }
    }
    g.edges.retain(|_, age| *age <= params.max_age);

    let connected: BTreeSet<usize> = g.edges.keys().flat_map(|&(a, b)| [a, b]).collect();
    g.nodes.retain(|id, _| connected.contains(id));

    let keep = 1.0 - params.beta_decay;
    for node in g.nodes.values_mut() {
        node.error *= keep;
    }
    Ok((s1, s2))
}

/// Inserts a unit halfway between the maximum-error unit `q` and its
/// maximum-error neighbor `f`, rewiring `q-f` into `q-r-f`. Returns the new id.
pub fn gng_insert(g: &mut GngGraph, params: &GngParams) -> Result<usize> {
    if g.edges.is_empty() {
        return Err(Error::NoEdges);
    }
    let argmax = |ids: &mut dyn Iterator<Item = usize>, g: &GngGraph| {
        let mut best: Option<(usize, f64)> = None;
        for id in ids {
            let e = g.nodes[&id].error;
            if best.is_none_or(|(_, be)| e > be) {
                best = Some((id, e));
            }
        }
        best.map(|(id, _)| id)
    };
    let q = argmax(&mut g.nodes.keys().copied(), g).ok_or(Error::NoEdges)?;
    let f = argmax(&mut g.neighbors(q).into_iter(), g).ok_or(Error::Isolated(q))?;

    let r = g.next_id;
    g.next_id += 1;
    let w = Vector::midpoint(&g.nodes[&q].w, &g.nodes[&f].w);
    g.node_mut(q).error *= params.alpha_split;
    g.node_mut(f).error *= params.alpha_split;
    let error = g.nodes[&q].error;
    g.nodes.insert(r, GngNode { id: r, w, error });

    g.edges.remove(&key(q, f));
    g.edges.insert(key(q, r), 0);
    g.edges.insert(key(r, f), 0);
    Ok(r)
}

/// Number of connected components among the current units.
pub fn gng_components(g: &GngGraph) -> usize {
    let mut unseen: BTreeSet<usize> = g.nodes.keys().copied().collect();
    let mut adjacency: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(a, b) in g.edges.keys() {
        adjacency.entry(a).or_default().push(b);
        adjacency.entry(b).or_default().push(a);
    }
    let mut components = 0;
    while let Some(start) = unseen.pop_first() {
        components += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(id) = queue.pop_front() {
            for next in adjacency.get(&id).into_iter().flatten() {
                if unseen.remove(next) {
                    queue.push_back(*next);
                }
            }
        }
    }
    components
}

#[derive(Debug, Clone, PartialEq)]
pub enum GngEvent {
    Adapt { winner: usize, runner_up: usize },
    Insert { node: usize },
}

/// Two unconnected units drawn inside the data bounding box.
pub fn gng_init(data: &Dataset, rng: &mut RandomStream) -> Result<GngGraph> {
    let a = data.sample_in_bounds(rng);
    let b = data.sample_in_bounds(rng);
    GngGraph::from_vectors(vec![a, b])
}

pub fn gng_train(
    data: &Dataset,
    params: &GngParams,
    rng: &mut RandomStream,
    presentations: usize,
) -> Result<GngGraph> {
    gng_train_traced(data, params, rng, presentations, |_, _| {})
}

/// Like [`gng_train`], calling `observe` after every mutation.
pub fn gng_train_traced(
    data: &Dataset,
    params: &GngParams,
    rng: &mut RandomStream,
    presentations: usize,
    mut observe: impl FnMut(&GngEvent, &GngGraph),
) -> Result<GngGraph> {
    params.validate()?;
    let mut g = gng_init(data, rng)?;
    for step in 1..=presentations {
        let x = data.draw_sample(rng);
        let (winner, runner_up) = gng_adapt_step(&mut g, params, x)?;
        observe(&GngEvent::Adapt { winner, runner_up }, &g);
        if params.insert_every > 0 && step % params.insert_every == 0 && g.len() < params.max_nodes {
            let node = gng_insert(&mut g, params)?;
            observe(&GngEvent::Insert { node }, &g);
        }
    }
    Ok(g)
}
