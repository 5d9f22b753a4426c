//! Self-Organising Tree Algorithm.
//!
//! Units form a binary tree. Only leaves compete for inputs. A presentation
//! moves the winning leaf, its sibling (when that sibling is a leaf) and its
//! parent (when the parent is not yet frozen) toward the input with three
//! separate rates. After each cycle over the data the leaf with the largest
//! resource, the mean distance to the inputs it wins, splits into two copies of
//! itself and is frozen. Training stops once every resource is below the
//! threshold or the leaf budget is spent.
//!
//! Inputs are either plain feature vectors compared with Euclidean distance or
//! aligned sequence profiles (see [`SequenceProfile`]) compared with
//! [`sota_sequence_distance`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::common::{check_same_dim, euclidean_distance, Dataset, Vector};
use crate::error::{Error, Result};

const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Position-by-symbol distribution for an aligned sequence: `len` positions,
/// `symbols` entries per position, each row summing to one.
///
/// Stored row-major, so position `l`, symbol `r` is at `l * symbols + r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SequenceProfile {
    len: usize,
    symbols: usize,
    values: Vec<f64>,
}

impl SequenceProfile {
    pub fn new(len: usize, symbols: usize, values: Vec<f64>) -> Result<Self> {
        if len == 0 || symbols == 0 {
            return Err(Error::InvalidProfile("profile needs at least one position and one symbol".into()));
        }
        if values.len() != len * symbols {
            return Err(Error::InvalidProfile(format!(
                "{len}x{symbols} profile needs {} values, got {}",
                len * symbols,
                values.len()
            )));
        }
        validate_rows(&values, symbols)?;
        Ok(SequenceProfile { len, symbols, values })
    }

    /// One-hot profile for a sequence of symbol indices.
    pub fn one_hot(sequence: &[usize], symbols: usize) -> Result<Self> {
        let mut values = vec![0.0; sequence.len() * symbols];
        for (l, &r) in sequence.iter().enumerate() {
            if r >= symbols {
                return Err(Error::InvalidProfile(format!("symbol {r} at position {l} out of range")));
            }
            values[l * symbols + r] = 1.0;
        }
        Self::new(sequence.len(), symbols, values)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, l: usize) -> &[f64] {
        &self.values[l * self.symbols..(l + 1) * self.symbols]
    }
}

fn validate_rows(values: &[f64], symbols: usize) -> Result<()> {
    for (l, row) in values.chunks(symbols).enumerate() {
        if let Some(v) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidProfile(format!("entry {v} at position {l} outside [0, 1]")));
        }
        let sum: f64 = row.iter().sum();
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(Error::InvalidProfile(format!("position {l} sums to {sum}")));
        }
    }
    Ok(())
}

/// Mean over positions of one minus the per-position inner product.
pub fn sota_sequence_distance(s: &SequenceProfile, c: &SequenceProfile) -> Result<f64> {
    if s.len != c.len || s.symbols != c.symbols {
        return Err(Error::ProfileShape {
            expected_len: s.len,
            expected_symbols: s.symbols,
            found_len: c.len,
            found_symbols: c.symbols,
        });
    }
    Ok(profile_distance(&s.values, &c.values, s.symbols))
}

fn profile_distance(s: &[f64], c: &[f64], symbols: usize) -> f64 {
    let len = s.len() / symbols;
    let total: f64 = s
        .chunks(symbols)
        .zip(c.chunks(symbols))
        .map(|(sr, cr)| 1.0 - sr.iter().zip(cr).map(|(a, b)| a * b).sum::<f64>())
        .sum();
    total / len as f64
}

/// How leaves and inputs are compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SotaMetric {
    #[default]
    Euclidean,
    /// Inputs are flattened profiles with `symbols` entries per position.
    Profile { symbols: usize },
}

impl fmt::Display for SotaMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SotaMetric::Euclidean => f.write_str("euclidean"),
            SotaMetric::Profile { .. } => f.write_str("profile"),
        }
    }
}

impl FromStr for SotaMetric {
    type Err = Error;

    /// Parses `euclidean` or `profile`; a profile's alphabet size is set separately.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(SotaMetric::Euclidean),
            "profile" => Ok(SotaMetric::Profile { symbols: 1 }),
            other => Err(Error::param("sota.metric", format!("unknown metric `{other}`"))),
        }
    }
}

impl SotaMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        match *self {
            SotaMetric::Euclidean => euclidean_distance(a, b),
            SotaMetric::Profile { symbols } => {
                check_same_dim(a.len(), b.len())?;
                if symbols == 0 || !a.len().is_multiple_of(symbols) {
                    return Err(Error::ProfileShape {
                        expected_len: a.len() / symbols.max(1),
                        expected_symbols: symbols,
                        found_len: b.len() / symbols.max(1),
                        found_symbols: symbols,
                    });
                }
                Ok(profile_distance(a, b, symbols))
            }
        }
    }

    /// Checks that every row of `data` is a valid input for this metric.
    pub fn check_dataset(&self, data: &Dataset) -> Result<()> {
        if let SotaMetric::Profile { symbols } = *self {
            if symbols == 0 || !data.dim().is_multiple_of(symbols) {
                return Err(Error::InvalidProfile(format!(
                    "dimension {} is not a multiple of the alphabet size {symbols}",
                    data.dim()
                )));
            }
            for row in data {
                validate_rows(row, symbols)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SotaNode {
    pub id: usize,
    pub profile: Vector,
    pub parent: Option<usize>,
    pub children: Option<[usize; 2]>,
    pub resource: f64,
    /// Set once the node has split; frozen nodes never move again.
    pub frozen: bool,
}

impl SotaNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }
}

/// Binary tree of units. Node ids are indices and nodes are never removed.
#[derive(Debug, Clone, PartialEq)]
pub struct SotaTree {
    nodes: Vec<SotaNode>,
    metric: SotaMetric,
}

impl SotaTree {
    pub fn new(root: Vector, metric: SotaMetric) -> Self {
        SotaTree {
            nodes: vec![SotaNode {
                id: 0,
                profile: root,
                parent: None,
                children: None,
                resource: 0.0,
                frozen: false,
            }],
            metric,
        }
    }

    /// Rebuilds a tree from stored nodes, checking that it is a proper binary tree.
    pub fn from_nodes(nodes: Vec<SotaNode>, metric: SotaMetric) -> Result<Self> {
        let tree = SotaTree { nodes, metric };
        tree.validate()?;
        Ok(tree)
    }

    /// Exactly one root, ids equal indices, parent/child links agree, every
    /// internal node has two children and is frozen.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Err(Error::param("sota tree", reason));
        if self.nodes.is_empty() {
            return invalid("no nodes".into());
        }
        let dim = self.nodes[0].profile.dim();
        let mut roots = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.id != i {
                return invalid(format!("node at index {i} carries id {}", n.id));
            }
            check_same_dim(dim, n.profile.dim())?;
            match n.parent {
                None => roots += 1,
                Some(p) => {
                    let parent = self.nodes.get(p).ok_or(Error::UnknownNode(p))?;
                    if !parent.children.is_some_and(|c| c.contains(&i)) {
                        return invalid(format!("node {i} is not a child of its parent {p}"));
                    }
                }
            }
            if let Some([a, b]) = n.children {
                if a == b {
                    return invalid(format!("node {i} lists child {a} twice"));
                }
                for c in [a, b] {
                    let child = self.nodes.get(c).ok_or(Error::UnknownNode(c))?;
                    if child.parent != Some(i) {
                        return invalid(format!("child {c} does not point back to {i}"));
                    }
                }
                if !n.frozen {
                    return invalid(format!("internal node {i} is not frozen"));
                }
            } else if n.frozen {
                return invalid(format!("leaf {i} is frozen"));
            }
        }
        if roots != 1 {
            return invalid(format!("{roots} roots"));
        }
        Ok(())
    }

    pub fn metric(&self) -> SotaMetric {
        self.metric
    }

    pub fn nodes(&self) -> &[SotaNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Option<&SotaNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.nodes[0].profile.dim()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &SotaNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().count()
    }

    /// Parent-to-child edges `(parent, child)` in id order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes
            .iter()
            .filter_map(|n| n.parent.map(|p| (p, n.id)))
            .collect()
    }

    /// Closest leaf to `x`; ties go to the lowest id.
    pub fn winner(&self, x: &[f64]) -> Result<usize> {
        let mut best: Option<(usize, f64)> = None;
        for leaf in self.leaves() {
            let d = self.metric.distance(x, &leaf.profile)?;
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((leaf.id, d));
            }
        }
        Ok(best.expect("a tree always has a leaf").0)
    }

    fn sibling(&self, id: usize) -> Option<usize> {
        let parent = self.nodes[id].parent?;
        let [a, b] = self.nodes[parent].children?;
        Some(if a == id { b } else { a })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SotaParams {
    pub eta_winner: f64,
    pub eta_sister: f64,
    pub eta_mother: f64,
    /// Presentations per cycle, taken in dataset order (wrapping). `None` is one pass.
    pub cycle_presentations: Option<usize>,
    pub resource_threshold: f64,
    pub max_leaves: usize,
}

impl Default for SotaParams {
    fn default() -> Self {
        SotaParams {
            eta_winner: 0.1,
            eta_sister: 0.01,
            eta_mother: 0.005,
            cycle_presentations: None,
            resource_threshold: 0.1,
            max_leaves: 32,
        }
    }
}

impl SotaParams {
    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64| (0.0..1.0).contains(&v);
        if !(in_range(self.eta_winner) && in_range(self.eta_sister) && in_range(self.eta_mother)) {
            return Err(Error::param("sota.eta", "rates must lie in [0, 1)"));
        }
        if !(self.eta_winner >= self.eta_sister && self.eta_sister >= self.eta_mother) {
            return Err(Error::param("sota.eta", "need eta_winner >= eta_sister >= eta_mother"));
        }
        if !(self.resource_threshold.is_finite() && self.resource_threshold > 0.0) {
            return Err(Error::param("sota.resource_threshold", "must be finite and > 0"));
        }
        if self.max_leaves == 0 {
            return Err(Error::param("sota.max_leaves", "must be >= 1"));
        }
        if self.cycle_presentations == Some(0) {
            return Err(Error::param("sota.cycle_presentations", "must be >= 1"));
        }
        Ok(())
    }
}

/// Presents one input. Returns the winning leaf id.
///
/// Rates are applied as given; [`SotaParams::validate`] is left to callers so
/// that boundary rates can be exercised directly.
pub fn sota_present(tree: &mut SotaTree, params: &SotaParams, x: &[f64]) -> Result<usize> {
    check_same_dim(tree.dim(), x.len())?;
    let winner = tree.winner(x)?;
    tree.nodes[winner].profile.move_toward(x, params.eta_winner);
    if let Some(sister) = tree.sibling(winner) {
        if tree.nodes[sister].is_leaf() {
            tree.nodes[sister].profile.move_toward(x, params.eta_sister);
        }
    }
    if let Some(mother) = tree.nodes[winner].parent {
        if !tree.nodes[mother].frozen {
            tree.nodes[mother].profile.move_toward(x, params.eta_mother);
        }
    }
    Ok(winner)
}

/// Nearest leaf id for every input.
pub fn sota_assign(tree: &SotaTree, data: &Dataset) -> Result<Vec<usize>> {
    data.check_dim(tree.dim())?;
    data.iter().map(|x| tree.winner(x)).collect()
}

/// Mean distance from each leaf to the inputs it wins. Leaves winning nothing get 0.
pub fn sota_resources(tree: &SotaTree, data: &Dataset) -> Result<BTreeMap<usize, f64>> {
    data.check_dim(tree.dim())?;
    let mut sums: BTreeMap<usize, (f64, usize)> = tree.leaves().map(|l| (l.id, (0.0, 0))).collect();
    for x in data {
        let leaf = tree.winner(x)?;
        let d = tree.metric.distance(x, &tree.nodes[leaf].profile)?;
        let entry = sums.get_mut(&leaf).expect("winner is a leaf");
        entry.0 += d;
        entry.1 += 1;
    }
    Ok(sums
        .into_iter()
        .map(|(id, (sum, count))| (id, if count == 0 { 0.0 } else { sum / count as f64 }))
        .collect())
}

/// Splits a leaf into two children that copy its profile, freezing it. Returns the child ids.
pub fn sota_split(tree: &mut SotaTree, leaf: usize) -> Result<[usize; 2]> {
    let node = tree.nodes.get(leaf).ok_or(Error::UnknownNode(leaf))?;
    if !node.is_leaf() {
        return Err(Error::NotALeaf(leaf));
    }
    let profile = node.profile.clone();
    let children = [tree.nodes.len(), tree.nodes.len() + 1];
    for id in children {
        tree.nodes.push(SotaNode {
            id,
            profile: profile.clone(),
            parent: Some(leaf),
            children: None,
            resource: 0.0,
            frozen: false,
        });
    }
    let mother = &mut tree.nodes[leaf];
    mother.children = Some(children);
    mother.frozen = true;
    mother.resource = 0.0;
    Ok(children)
}

#[derive(Debug, Clone, PartialEq)]
pub enum SotaEvent {
    Present { winner: usize },
    CycleEnd { cycle: usize, max_resource: f64 },
    Split { mother: usize, children: [usize; 2] },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SotaOutcome {
    pub tree: SotaTree,
    /// Leaf id per input row.
    pub assignments: Vec<usize>,
    pub cycles: usize,
}

pub fn sota_train(data: &Dataset, params: &SotaParams, metric: SotaMetric) -> Result<SotaOutcome> {
    sota_train_traced(data, params, metric, |_, _| {})
}

/// Grows the tree from a root at the data mean, calling `observe` after every mutation.
///
/// Each cycle presents inputs in dataset order, then computes resources. If the
/// largest resource reaches the threshold and the leaf budget allows, that leaf
/// splits (ties go to the lowest id); otherwise training stops.
pub fn sota_train_traced(
    data: &Dataset,
    params: &SotaParams,
    metric: SotaMetric,
    mut observe: impl FnMut(&SotaEvent, &SotaTree),
) -> Result<SotaOutcome> {
    params.validate()?;
    metric.check_dataset(data)?;
    let mut tree = SotaTree::new(data.mean(), metric);
    let per_cycle = params.cycle_presentations.unwrap_or(data.len());
    let mut cycles = 0;
    loop {
        for i in 0..per_cycle {
            let winner = sota_present(&mut tree, params, &data[i % data.len()])?;
            observe(&SotaEvent::Present { winner }, &tree);
        }
        cycles += 1;
        let resources = sota_resources(&tree, data)?;
        let mut worst: Option<(usize, f64)> = None;
        for (&id, &r) in &resources {
            tree.nodes[id].resource = r;
            if worst.is_none_or(|(_, wr)| r > wr) {
                worst = Some((id, r));
            }
        }
        let (leaf, max_resource) = worst.expect("a tree always has a leaf");
        observe(&SotaEvent::CycleEnd { cycle: cycles, max_resource }, &tree);
        if max_resource < params.resource_threshold || tree.leaf_count() >= params.max_leaves {
            break;
        }
        let children = sota_split(&mut tree, leaf)?;
        observe(&SotaEvent::Split { mother: leaf, children }, &tree);
    }
    let assignments = sota_assign(&tree, data)?;
    Ok(SotaOutcome {
        tree,
        assignments,
        cycles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let a = SequenceProfile::one_hot(&[0, 1, 2, 1], 3).unwrap();
        assert_eq!(sota_sequence_distance(&a, &a).unwrap(), 0.0);
        let b = SequenceProfile::one_hot(&[1, 2, 0, 0], 3).unwrap();
        assert_eq!(sota_sequence_distance(&a, &b).unwrap(), 1.0);
        let s = SequenceProfile::new(2, 2, vec![1.0, 0.0, 1.0, 0.0]).unwrap();
        let c = SequenceProfile::new(2, 2, vec![0.5, 0.5, 1.0, 0.0]).unwrap();
        assert_eq!(sota_sequence_distance(&s, &c).unwrap(), 0.25);
    }

    #[test]
    fn distance_rejects_shape_mismatch() {
        let a = SequenceProfile::one_hot(&[0, 1], 2).unwrap();
        let b = SequenceProfile::one_hot(&[0, 1, 1], 2).unwrap();
        assert!(matches!(sota_sequence_distance(&a, &b), Err(Error::ProfileShape { .. })));
        let c = SequenceProfile::one_hot(&[0, 1], 3).unwrap();
        assert!(sota_sequence_distance(&a, &c).is_err());
    }

    #[test]
    fn profile_validation() {
        assert!(SequenceProfile::new(1, 2, vec![0.6, 0.6]).is_err());
        assert!(SequenceProfile::new(1, 2, vec![1.5, -0.5]).is_err());
        assert!(SequenceProfile::new(2, 2, vec![1.0, 0.0]).is_err());
        assert!(SequenceProfile::one_hot(&[3], 3).is_err());
        SequenceProfile::new(1, 3, vec![0.2, 0.3, 0.5]).unwrap();
    }

    fn two_leaf_tree() -> SotaTree {
        let mut t = SotaTree::new(v(&[0.0, 0.0]), SotaMetric::Euclidean);
        sota_split(&mut t, 0).unwrap();
        t.nodes[1].profile = v(&[-1.0, 0.0]);
        t.nodes[2].profile = v(&[1.0, 0.0]);
        t
    }

    #[test]
    fn zero_rates_leave_tree_unchanged() {
        let mut t = two_leaf_tree();
        let before = t.clone();
        let p = SotaParams {
            eta_winner: 0.0,
            eta_sister: 0.0,
            eta_mother: 0.0,
            ..SotaParams::default()
        };
        sota_present(&mut t, &p, &[3.0, 3.0]).unwrap();
        assert_eq!(t, before);
    }

    #[test]
    fn single_leaf_full_step() {
        let mut t = SotaTree::new(v(&[0.0, 0.0]), SotaMetric::Euclidean);
        let p = SotaParams {
            eta_winner: 1.0,
            ..SotaParams::default()
        };
        sota_present(&mut t, &p, &[2.5, -1.0]).unwrap();
        assert_eq!(t.nodes[0].profile.as_slice(), &[2.5, -1.0]);
    }

    #[test]
    fn neighborhood_rule() {
        let mut t = two_leaf_tree();
        let p = SotaParams {
            eta_winner: 0.5,
            eta_sister: 0.25,
            eta_mother: 0.1,
            ..SotaParams::default()
        };
        let winner = sota_present(&mut t, &p, &[-3.0, 2.0]).unwrap();
        assert_eq!(winner, 1);
        // A: (-1,0) + 0.5 * ((-3,2) - (-1,0)) = (-2, 1)
        assert_eq!(t.nodes[1].profile.as_slice(), &[-2.0, 1.0]);
        // B: (1,0) + 0.25 * ((-3,2) - (1,0)) = (0, 0.5)
        assert_eq!(t.nodes[2].profile.as_slice(), &[0.0, 0.5]);
        assert_eq!(t.nodes[0].profile.as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn internal_sibling_is_not_updated() {
        let mut t = two_leaf_tree();
        sota_split(&mut t, 2).unwrap();
        let before = t.clone();
        let winner = sota_present(&mut t, &SotaParams::default(), &[-1.5, 0.0]).unwrap();
        assert_eq!(winner, 1);
        for id in [0, 2, 3, 4] {
            assert_eq!(t.nodes[id].profile, before.nodes[id].profile);
        }
    }

    #[test]
    fn unfrozen_mother_moves() {
        let mut t = two_leaf_tree();
        t.nodes[0].frozen = false;
        let p = SotaParams {
            eta_winner: 0.5,
            eta_sister: 0.25,
            eta_mother: 0.1,
            ..SotaParams::default()
        };
        sota_present(&mut t, &p, &[1.0, 10.0]).unwrap();
        assert_eq!(t.nodes[0].profile.as_slice(), &[0.1, 1.0]);
    }

    #[test]
    fn resources_examples() {
        let t = two_leaf_tree();
        let d = Dataset::from_rows(vec![vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let r = sota_resources(&t, &d).unwrap();
        assert_eq!(r, BTreeMap::from([(1, 0.0), (2, 0.0)]));

        let one = SotaTree::new(v(&[0.0, 0.0]), SotaMetric::Euclidean);
        let d = Dataset::from_rows(vec![vec![0.2, 0.0], vec![0.0, 0.4]]).unwrap();
        let r = sota_resources(&one, &d).unwrap();
        assert!((r[&0] - 0.3).abs() < 1e-15);

        // A leaf winning nothing has zero resource.
        let d = Dataset::from_rows(vec![vec![-2.0, 0.0], vec![-1.0, 1.0]]).unwrap();
        assert_eq!(sota_resources(&t, &d).unwrap()[&2], 0.0);
        assert!(sota_resources(&t, &Dataset::from_rows(vec![vec![0.0]]).unwrap()).is_err());
    }

    #[test]
    fn split_rules() {
        let mut t = SotaTree::new(v(&[0.5, 0.5]), SotaMetric::Euclidean);
        let [a, b] = sota_split(&mut t, 0).unwrap();
        assert_eq!((t.len(), t.leaf_count()), (3, 2));
        assert!(t.nodes[0].frozen);
        assert_eq!(t.nodes[a].profile, t.nodes[0].profile);
        assert_eq!(t.nodes[b].profile, t.nodes[0].profile);
        assert!(matches!(sota_split(&mut t, 0), Err(Error::NotALeaf(0))));
        assert!(matches!(sota_split(&mut t, 9), Err(Error::UnknownNode(9))));
        for n in 1..20 {
            let leaf = t.leaves().last().unwrap().id;
            sota_split(&mut t, leaf).unwrap();
            let internal = t.nodes.iter().filter(|n| !n.is_leaf()).count();
            assert_eq!(t.leaf_count(), n + 2);
            assert_eq!(internal, n + 1);
            t.validate().unwrap();
        }
    }

    #[test]
    fn identical_rows_converge_immediately() {
        let d = Dataset::from_rows(vec![vec![0.3, 0.7]; 12]).unwrap();
        let out = sota_train(&d, &SotaParams::default(), SotaMetric::Euclidean).unwrap();
        assert!(out.tree.leaf_count() <= 2);
        assert!(out.tree.leaves().all(|l| l.resource == 0.0));
        assert_eq!(out.cycles, 1);
    }

    #[test]
    fn huge_threshold_stops_after_one_cycle() {
        let d = Dataset::from_rows((0..30).map(|i| vec![i as f64, (i * i % 7) as f64]).collect()).unwrap();
        let p = SotaParams {
            resource_threshold: 1e9,
            ..SotaParams::default()
        };
        let out = sota_train(&d, &p, SotaMetric::Euclidean).unwrap();
        assert_eq!((out.cycles, out.tree.len()), (1, 1));
        assert_eq!(out.assignments, vec![0; 30]);
    }

    #[test]
    fn leaf_budget_bounds_growth() {
        let d = Dataset::from_rows((0..30).map(|i| vec![i as f64]).collect()).unwrap();
        let p = SotaParams {
            resource_threshold: 1e-6,
            max_leaves: 5,
            ..SotaParams::default()
        };
        let out = sota_train(&d, &p, SotaMetric::Euclidean).unwrap();
        assert_eq!(out.tree.leaf_count(), 5);
        out.tree.validate().unwrap();
        assert_eq!(out, sota_train(&d, &p, SotaMetric::Euclidean).unwrap());
    }

    #[test]
    fn profile_mode_training() {
        let seqs = [[0, 0, 1, 1], [0, 0, 1, 0], [2, 2, 0, 0], [2, 2, 0, 1], [0, 0, 1, 1], [2, 2, 0, 0]];
        let rows = seqs
            .iter()
            .map(|s| SequenceProfile::one_hot(s, 3).unwrap().as_slice().to_vec())
            .collect();
        let d = Dataset::from_rows(rows).unwrap();
        let p = SotaParams {
            eta_winner: 0.5,
            eta_sister: 0.05,
            eta_mother: 0.0,
            resource_threshold: 0.3,
            cycle_presentations: Some(60),
            ..SotaParams::default()
        };
        let out = sota_train(&d, &p, SotaMetric::Profile { symbols: 3 }).unwrap();
        let a = &out.assignments;
        assert_eq!(a[0], a[1]);
        assert_eq!(a[2], a[3]);
        assert_ne!(a[0], a[2]);
        // Profiles stay distributions under convex updates.
        for n in out.tree.nodes() {
            for row in n.profile.chunks(3) {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            }
        }
        let bad = Dataset::from_rows(vec![vec![0.5, 0.6, 0.0]]).unwrap();
        assert!(sota_train(&bad, &p, SotaMetric::Profile { symbols: 3 }).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(SotaParams { eta_sister: 0.2, ..SotaParams::default() }.validate().is_err());
        assert!(SotaParams { eta_winner: 1.0, ..SotaParams::default() }.validate().is_err());
        assert!(SotaParams { resource_threshold: 0.0, ..SotaParams::default() }.validate().is_err());
        SotaParams::default().validate().unwrap();
    }

    fn profile(len: usize, symbols: usize) -> impl Strategy<Value = SequenceProfile> {
        prop::collection::vec(prop::collection::vec(0.01f64..1.0, symbols), len).prop_map(move |rows| {
            let values = rows
                .into_iter()
                .flat_map(|r| {
                    let s: f64 = r.iter().sum();
                    r.into_iter().map(move |v| v / s)
                })
                .collect();
            SequenceProfile::new(len, symbols, values).unwrap()
        })
    }

    proptest! {
        #[test]
        fn distance_bounded_and_symmetric(
            (a, b) in (1usize..6, 1usize..5).prop_flat_map(|(l, s)| (profile(l, s), profile(l, s)))
        ) {
            let ab = sota_sequence_distance(&a, &b).unwrap();
            let ba = sota_sequence_distance(&b, &a).unwrap();
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
            prop_assert_eq!(ab, ba);
        }

        #[test]
        fn update_contracts_winner(
            leaf in prop::collection::vec(-5f64..5.0, 3),
            x in prop::collection::vec(-5f64..5.0, 3),
            eta in 1e-3f64..1.0,
        ) {
            let mut t = SotaTree::new(v(&leaf), SotaMetric::Euclidean);
            let before = euclidean_distance(&leaf, &x).unwrap();
            let p = SotaParams { eta_winner: eta, eta_sister: 0.0, eta_mother: 0.0, ..SotaParams::default() };
            sota_present(&mut t, &p, &x).unwrap();
            let after = euclidean_distance(&t.nodes[0].profile, &x).unwrap();
            prop_assert!(after < before || before == 0.0);
        }
    }
}
