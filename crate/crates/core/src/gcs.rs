//! Growing Cell Structures.
//!
//! The network is a set of k-simplices over reference vectors. Two nodes are
//! neighbors iff they share a simplex; no separate edge set is stored. Each
//! node carries a signal counter that grows when the node wins and decays on
//! every presentation. New nodes are inserted halfway along the longest edge
//! leaving the busiest node; the least busy node is removed when its counter
//! drops below a threshold, together with any node left outside every simplex.

use std::collections::{BTreeMap, BTreeSet};

use crate::common::{check_same_dim, squared_distance_unchecked, Dataset, RandomStream, Vector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GcsNode {
    pub id: usize,
    pub w: Vector,
    pub counter: f64,
}

/// A k-dimensional simplicial complex with signal counters.
#[derive(Debug, Clone, PartialEq)]
pub struct GcsNetwork {
    k: usize,
    nodes: BTreeMap<usize, GcsNode>,
    // Each simplex is a sorted list of k + 1 distinct node ids.
    simplices: BTreeSet<Vec<usize>>,
    next_id: usize,
}

impl GcsNetwork {
    /// A network made of a single simplex over `vertices` (which must number `k + 1`).
    pub fn from_simplex(k: usize, vertices: Vec<Vector>) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("gcs.k", "must be >= 1"));
        }
        if vertices.len() != k + 1 {
            return Err(Error::param(
                "vertices",
                format!("a {k}-simplex needs {} vertices, got {}", k + 1, vertices.len()),
            ));
        }
        let ids: Vec<usize> = (0..=k).collect();
        let nodes = vertices
            .into_iter()
            .enumerate()
            .map(|(id, w)| (id, GcsNode { id, w, counter: 0.0 }))
            .collect();
        Self::from_parts(k, nodes, vec![ids])
    }

    /// Builds a network from explicit nodes and simplices, validating every invariant.
    pub fn from_parts(
        k: usize,
        nodes: BTreeMap<usize, GcsNode>,
        simplices: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let next_id = nodes.keys().next_back().map_or(0, |&id| id + 1);
        let simplices = simplices
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s
            })
            .collect();
        let net = GcsNetwork {
            k,
            nodes,
            simplices,
            next_id,
        };
        net.validate()?;
        Ok(net)
    }

    /// Checks the structural invariants: ids consistent, every simplex has
    /// `k + 1` distinct existing nodes, every node lies in some simplex, counters
    /// finite and non-negative, a single dimension throughout.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Err(Error::param("gcs network", reason));
        if self.k == 0 {
            return invalid("k must be >= 1".into());
        }
        if self.simplices.is_empty() {
            return invalid("no simplices".into());
        }
        let dim = match self.nodes.values().next() {
            Some(n) => n.w.dim(),
            None => return invalid("no nodes".into()),
        };
        for (&id, node) in &self.nodes {
            if node.id != id {
                return invalid(format!("node keyed {id} carries id {}", node.id));
            }
            check_same_dim(dim, node.w.dim())?;
            if !(node.counter.is_finite() && node.counter >= 0.0) {
                return invalid(format!("node {id} has counter {}", node.counter));
            }
        }
        let mut covered = BTreeSet::new();
        for s in &self.simplices {
            if s.len() != self.k + 1 {
                return invalid(format!("simplex {s:?} does not have {} vertices", self.k + 1));
            }
            if s.windows(2).any(|p| p[0] == p[1]) {
                return invalid(format!("simplex {s:?} repeats a vertex"));
            }
            for id in s {
                if !self.nodes.contains_key(id) {
                    return Err(Error::UnknownNode(*id));
                }
                covered.insert(*id);
            }
        }
        if let Some(id) = self.nodes.keys().find(|id| !covered.contains(id)) {
            return invalid(format!("node {id} is dangling"));
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.nodes.values().next().map_or(0, |n| n.w.dim())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in id order.
    pub fn nodes(&self) -> impl Iterator<Item = &GcsNode> {
        self.nodes.values()
    }

    pub fn node(&self, id: usize) -> Option<&GcsNode> {
        self.nodes.get(&id)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &[usize]> {
        self.simplices.iter().map(Vec::as_slice)
    }

    pub fn simplex_count(&self) -> usize {
        self.simplices.len()
    }

    pub fn total_counter(&self) -> f64 {
        self.nodes.values().map(|n| n.counter).sum()
    }

    /// Ids sharing at least one simplex with `id`.
    pub fn neighbors(&self, id: usize) -> BTreeSet<usize> {
        self.simplices
            .iter()
            .filter(|s| s.contains(&id))
            .flatten()
            .copied()
            .filter(|&j| j != id)
            .collect()
    }

    /// Derived edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for s in &self.simplices {
            for (i, &a) in s.iter().enumerate() {
                for &b in &s[i + 1..] {
                    edges.insert((a, b));
                }
            }
        }
        edges.into_iter().collect()
    }

    /// Reference vectors in id order.
    pub fn codebook(&self) -> Vec<Vector> {
        self.nodes.values().map(|n| n.w.clone()).collect()
    }

    /// Closest node id to `x`; ties go to the lowest id.
    pub fn winner(&self, x: &[f64]) -> Result<usize> {
        check_same_dim(self.dim(), x.len())?;
        let mut best = (usize::MAX, f64::INFINITY);
        for node in self.nodes.values() {
            let d = squared_distance_unchecked(&node.w, x);
            if d < best.1 || best.0 == usize::MAX {
                best = (node.id, d);
            }
        }
        Ok(best.0)
    }

    fn node_mut(&mut self, id: usize) -> &mut GcsNode {
        self.nodes.get_mut(&id).expect("node id present")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcsParams {
    /// Simplex dimension.
    pub k: usize,
    /// Winner adaptation rate.
    pub eps_b: f64,
    /// Neighbor adaptation rate.
    pub eps_n: f64,
    /// Fraction of every counter removed per presentation.
    pub counter_decay: f64,
    /// Presentations between insertions (0 disables growth).
    pub insert_every: usize,
    /// Presentations between deletion attempts (0 disables pruning).
    pub delete_every: usize,
    /// Nodes with a counter below this are eligible for removal.
    pub delete_threshold: f64,
    pub max_nodes: usize,
}

impl Default for GcsParams {
    fn default() -> Self {
        GcsParams {
            k: 2,
            eps_b: 0.06,
            eps_n: 0.002,
            counter_decay: 0.005,
            insert_every: 100,
            delete_every: 0,
            delete_threshold: 0.5,
            max_nodes: 100,
        }
    }
}

impl GcsParams {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::param("gcs.k", "must be >= 1"));
        }
        if !(self.eps_b > 0.0 && self.eps_b <= 1.0) {
            return Err(Error::param("gcs.eps_b", "must lie in (0, 1]"));
        }
        if !(self.eps_n > 0.0 && self.eps_n < self.eps_b) {
            return Err(Error::param("gcs.eps_n", "must lie in (0, eps_b)"));
        }
        if !(self.counter_decay > 0.0 && self.counter_decay < 1.0) {
            return Err(Error::param("gcs.counter_decay", "must lie in (0, 1)"));
        }
        if !(self.delete_threshold.is_finite() && self.delete_threshold >= 0.0) {
            return Err(Error::param("gcs.delete_threshold", "must be finite and >= 0"));
        }
        if self.max_nodes < self.k + 1 {
            return Err(Error::param("gcs.max_nodes", "must hold at least one simplex"));
        }
        Ok(())
    }
}

/// Moves the winner by `eps_b` and its neighbors by `eps_n`, then increments
/// the winner's counter and decays all counters. Returns the winner id.
///
/// Rates are not validated here so that zero rates can be exercised directly.
pub fn gcs_adapt(net: &mut GcsNetwork, params: &GcsParams, x: &[f64]) -> Result<usize> {
    let s1 = net.winner(x)?;
    for j in net.neighbors(s1) {
        net.node_mut(j).w.move_toward(x, params.eps_n);
    }
    let winner = net.node_mut(s1);
    winner.w.move_toward(x, params.eps_b);
    winner.counter += 1.0;
    let keep = 1.0 - params.counter_decay;
    for node in net.nodes.values_mut() {
        node.counter *= keep;
    }
    Ok(s1)
}

/// Splits the longest edge leaving the node with the highest counter.
///
/// Every simplex containing both endpoints `q` and `f` is replaced by two copies,
/// one with the new node in place of `f` and one with it in place of `q`.
/// The counters of `q` and `f` are halved and the new node receives the
/// average of their old counters, so the total counter mass is unchanged.
/// Returns the new node id.
pub fn gcs_insert(net: &mut GcsNetwork) -> Result<usize> {
    let q = net
        .nodes
        .values()
        .fold(None::<&GcsNode>, |best, n| match best {
            Some(b) if b.counter >= n.counter => Some(b),
            _ => Some(n),
        })
        .map(|n| n.id)
        .ok_or(Error::NotEnoughUnits {
            required: 1,
            found: 0,
        })?;
    let wq = net.nodes[&q].w.clone();
    let mut f = None;
    let mut far = f64::NEG_INFINITY;
    for j in net.neighbors(q) {
        let d = squared_distance_unchecked(&wq, &net.nodes[&j].w);
        if d > far {
            far = d;
            f = Some(j);
        }
    }
    let f = f.ok_or(Error::Isolated(q))?;

    let r = net.next_id;
    net.next_id += 1;
    let (cq, cf) = (net.nodes[&q].counter, net.nodes[&f].counter);
    let w = Vector::midpoint(&wq, &net.nodes[&f].w);
    net.nodes.insert(
        r,
        GcsNode {
            id: r,
            w,
            counter: (cq + cf) / 2.0,
        },
    );
    net.node_mut(q).counter = cq / 2.0;
    net.node_mut(f).counter = cf / 2.0;

    let split: Vec<Vec<usize>> = net
        .simplices
        .iter()
        .filter(|s| s.contains(&q) && s.contains(&f))
        .cloned()
        .collect();
    for s in split {
        net.simplices.remove(&s);
        for replaced in [f, q] {
            let mut copy: Vec<usize> = s.iter().map(|&v| if v == replaced { r } else { v }).collect();
            copy.sort_unstable();
            net.simplices.insert(copy);
        }
    }
    Ok(r)
}

/// Removes the node with the lowest counter if it is below the threshold,
/// along with every simplex containing it and every node left outside all
/// simplices. Nothing happens when removal would leave no simplex.
/// Returns the removed ids in ascending order.
pub fn gcs_delete(net: &mut GcsNetwork, params: &GcsParams) -> Vec<usize> {
    let Some(victim) = net.nodes.values().fold(None::<&GcsNode>, |best, n| match best {
        Some(b) if b.counter <= n.counter => Some(b),
        _ => Some(n),
    }) else {
        return Vec::new();
    };
    if victim.counter >= params.delete_threshold || net.nodes.len() <= net.k + 1 {
        return Vec::new();
    }
    let victim = victim.id;
    if net.simplices.iter().all(|s| s.contains(&victim)) {
        return Vec::new();
    }
    net.simplices.retain(|s| !s.contains(&victim));
    let covered: BTreeSet<usize> = net.simplices.iter().flatten().copied().collect();
    let removed: Vec<usize> = net
        .nodes
        .keys()
        .copied()
        .filter(|id| !covered.contains(id))
        .collect();
    for id in &removed {
        net.nodes.remove(id);
    }
    removed
}

/// What happened during one training mutation, for trace inspection.
#[derive(Debug, Clone, PartialEq)]
pub enum GcsEvent {
    Adapt { winner: usize },
    Insert { node: usize, mass_before: f64 },
    Delete { removed: Vec<usize> },
}

/// The initial simplex: `k + 1` vertices drawn inside the data bounding box.
pub fn gcs_init(data: &Dataset, params: &GcsParams, rng: &mut RandomStream) -> Result<GcsNetwork> {
    let vertices = (0..=params.k).map(|_| data.sample_in_bounds(rng)).collect();
    GcsNetwork::from_simplex(params.k, vertices)
}

pub fn gcs_train(
    data: &Dataset,
    params: &GcsParams,
    rng: &mut RandomStream,
    presentations: usize,
) -> Result<GcsNetwork> {
    gcs_train_traced(data, params, rng, presentations, |_, _| {})
}

/// Like [`gcs_train`], calling `observe` after every mutation.
pub fn gcs_train_traced(
    data: &Dataset,
    params: &GcsParams,
    rng: &mut RandomStream,
    presentations: usize,
    mut observe: impl FnMut(&GcsEvent, &GcsNetwork),
) -> Result<GcsNetwork> {
    params.validate()?;
    let mut net = gcs_init(data, params, rng)?;
    for step in 1..=presentations {
        let x = data.draw_sample(rng);
        let winner = gcs_adapt(&mut net, params, x)?;
        observe(&GcsEvent::Adapt { winner }, &net);
        if params.insert_every > 0 && step % params.insert_every == 0 && net.len() < params.max_nodes {
            let mass_before = net.total_counter();
            let node = gcs_insert(&mut net)?;
            observe(&GcsEvent::Insert { node, mass_before }, &net);
        }
        if params.delete_every > 0 && step % params.delete_every == 0 {
            let removed = gcs_delete(&mut net, params);
            if !removed.is_empty() {
                observe(&GcsEvent::Delete { removed }, &net);
            }
        }
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::common::euclidean_distance;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn node(id: usize, w: &[f64], counter: f64) -> (usize, GcsNode) {
        (id, GcsNode { id, w: v(w), counter })
    }

    fn triangle() -> GcsNetwork {
        GcsNetwork::from_simplex(2, vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.0, 1.0])]).unwrap()
    }

    fn params(eps_b: f64, eps_n: f64, decay: f64) -> GcsParams {
        GcsParams {
            eps_b,
            eps_n,
            counter_decay: decay,
            ..GcsParams::default()
        }
    }

    #[test]
    fn zero_rates_still_count() {
        let mut net = triangle();
        let before = net.codebook();
        let winner = gcs_adapt(&mut net, &params(0.0, 0.0, 0.05), &[0.9, 0.1]).unwrap();
        assert_eq!(winner, 1);
        assert_eq!(net.codebook(), before);
        assert_eq!(net.node(1).unwrap().counter, 0.95);
        assert_eq!(net.node(0).unwrap().counter, 0.0);
    }

    #[test]
    fn winner_at_input_stays_put() {
        let mut net = triangle();
        gcs_adapt(&mut net, &params(0.5, 0.1, 0.05), &[0.0, 0.0]).unwrap();
        assert_eq!(net.node(0).unwrap().w.as_slice(), &[0.0, 0.0]);
        assert_eq!(net.node(1).unwrap().w.as_slice(), &[0.9, 0.0]);
        assert_eq!(net.node(2).unwrap().w.as_slice(), &[0.0, 0.9]);
        assert_eq!(net.node(0).unwrap().counter, 0.95);
    }

    #[test]
    fn adapt_rejects_wrong_dimension() {
        let mut net = triangle();
        assert!(gcs_adapt(&mut net, &GcsParams::default(), &[0.0]).is_err());
    }

    #[test]
    fn insert_on_chain() {
        let nodes = [node(0, &[0.0, 0.0], 3.0), node(1, &[2.0, 0.0], 1.0)].into_iter().collect();
        let mut net = GcsNetwork::from_parts(1, nodes, vec![vec![0, 1]]).unwrap();
        let r = gcs_insert(&mut net).unwrap();
        assert_eq!(net.node(r).unwrap().w.as_slice(), &[1.0, 0.0]);
        let simplices: Vec<&[usize]> = net.simplices().collect();
        assert_eq!(simplices, vec![&[0, 2][..], &[1, 2][..]]);
        net.validate().unwrap();
    }

    #[test]
    fn insert_splits_triangle() {
        // A busiest, B farthest from A.
        let nodes = [
            node(0, &[0.0, 0.0], 4.0),
            node(1, &[3.0, 0.0], 2.0),
            node(2, &[0.0, 1.0], 1.0),
        ]
        .into_iter()
        .collect();
        let mut net = GcsNetwork::from_parts(2, nodes, vec![vec![0, 1, 2]]).unwrap();
        let r = gcs_insert(&mut net).unwrap();
        assert_eq!(r, 3);
        assert_eq!(net.len(), 4);
        assert_eq!(net.simplex_count(), 2);
        let simplices: Vec<&[usize]> = net.simplices().collect();
        // ArC and rBC
        assert_eq!(simplices, vec![&[0, 2, 3][..], &[1, 2, 3][..]]);
        assert_eq!(net.node(0).unwrap().counter, 2.0);
        assert_eq!(net.node(1).unwrap().counter, 1.0);
        assert_eq!(net.node(3).unwrap().counter, 3.0);
        assert_eq!(net.total_counter(), 7.0);
        let (wq, wf, wr) = (&net.node(0).unwrap().w, &net.node(1).unwrap().w, &net.node(3).unwrap().w);
        assert_eq!(
            euclidean_distance(wr, wq).unwrap(),
            euclidean_distance(wr, wf).unwrap()
        );
        net.validate().unwrap();
    }

    #[test]
    fn insert_splits_every_simplex_on_the_edge() {
        // Two triangles sharing the long edge 0-1.
        let nodes = [
            node(0, &[0.0, 0.0], 5.0),
            node(1, &[4.0, 0.0], 1.0),
            node(2, &[2.0, 1.0], 1.0),
            node(3, &[2.0, -1.0], 1.0),
        ]
        .into_iter()
        .collect();
        let mut net = GcsNetwork::from_parts(2, nodes, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap();
        gcs_insert(&mut net).unwrap();
        assert_eq!(net.simplex_count(), 4);
        assert!(!net.neighbors(0).contains(&1));
        net.validate().unwrap();
    }

    #[test]
    fn delete_nothing_above_threshold() {
        let mut net = triangle();
        let mut net2 = net.clone();
        gcs_insert(&mut net2).unwrap();
        for n in net2.nodes.values_mut() {
            n.counter = 10.0;
        }
        let before = net2.clone();
        assert!(gcs_delete(&mut net2, &GcsParams::default()).is_empty());
        assert_eq!(net2, before);
        // A single simplex is never destroyed.
        let before = net.clone();
        let p = GcsParams {
            delete_threshold: f64::INFINITY,
            ..GcsParams::default()
        };
        assert!(gcs_delete(&mut net, &p).is_empty());
        assert_eq!(net, before);
    }

    #[test]
    fn delete_apex_keeps_shared_triangle() {
        // ABC and BCD share BC; A has the lowest counter.
        let nodes = [
            node(0, &[-1.0, 0.0], 0.1),
            node(1, &[0.0, 1.0], 2.0),
            node(2, &[0.0, -1.0], 2.0),
            node(3, &[1.0, 0.0], 2.0),
        ]
        .into_iter()
        .collect();
        let mut net = GcsNetwork::from_parts(2, nodes, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap();
        let removed = gcs_delete(&mut net, &GcsParams::default());
        assert_eq!(removed, vec![0]);
        assert_eq!(net.simplices().collect::<Vec<_>>(), vec![&[1, 2, 3][..]]);
        net.validate().unwrap();
    }

    #[test]
    fn delete_cascades_dangling_nodes() {
        // Strip 012, 123, 234: deleting 1 leaves only 234 and node 0 dangles.
        let nodes = (0..5).map(|i| node(i, &[i as f64, (i % 2) as f64], if i == 1 { 0.0 } else { 3.0 })).collect();
        let mut net = GcsNetwork::from_parts(2, nodes, vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]]).unwrap();
        let removed = gcs_delete(&mut net, &GcsParams::default());
        assert_eq!(removed, vec![0, 1]);
        assert_eq!(net.len(), 3);
        net.validate().unwrap();
    }

    #[test]
    fn validate_catches_dangling_and_bad_simplices() {
        let nodes: BTreeMap<_, _> = [node(0, &[0.0], 0.0), node(1, &[1.0], 0.0), node(2, &[2.0], 0.0)].into_iter().collect();
        assert!(GcsNetwork::from_parts(1, nodes.clone(), vec![vec![0, 1]]).is_err());
        assert!(GcsNetwork::from_parts(1, nodes.clone(), vec![vec![0, 1, 2]]).is_err());
        assert!(GcsNetwork::from_parts(1, nodes.clone(), vec![vec![0, 0], vec![1, 2]]).is_err());
        assert!(GcsNetwork::from_parts(1, nodes.clone(), vec![vec![0, 1], vec![2, 7]]).is_err());
        assert!(GcsNetwork::from_parts(1, nodes, vec![vec![0, 1], vec![1, 2]]).is_ok());
    }

    #[test]
    fn scheduled_insertions() {
        let d = Dataset::from_rows((0..40).map(|i| vec![(i % 8) as f64, (i / 8) as f64]).collect()).unwrap();
        let p = GcsParams {
            insert_every: 10,
            ..GcsParams::default()
        };
        let mut rng = RandomStream::new(9);
        let net = gcs_train(&d, &p, &mut rng, 100).unwrap();
        assert_eq!(net.len(), 13);
        net.validate().unwrap();

        let mut rng = RandomStream::new(9);
        let init = gcs_train(&d, &p, &mut rng, 0).unwrap();
        assert_eq!(init.len(), 3);
        assert_eq!(init.simplex_count(), 1);
    }

    #[test]
    fn training_is_deterministic() {
        let d = Dataset::from_rows((0..60).map(|i| vec![(i % 6) as f64 * 0.3, (i % 10) as f64]).collect()).unwrap();
        let p = GcsParams {
            insert_every: 20,
            delete_every: 20,
            delete_threshold: 1.0,
            ..GcsParams::default()
        };
        let a = gcs_train(&d, &p, &mut RandomStream::new(4), 2000).unwrap();
        let b = gcs_train(&d, &p, &mut RandomStream::new(4), 2000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn params_validation() {
        assert!(GcsParams { eps_n: 0.1, eps_b: 0.05, ..GcsParams::default() }.validate().is_err());
        assert!(GcsParams { counter_decay: 1.0, ..GcsParams::default() }.validate().is_err());
        assert!(GcsParams { k: 0, ..GcsParams::default() }.validate().is_err());
        GcsParams::default().validate().unwrap();
    }
}
