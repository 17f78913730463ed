//! Initial conditions and immunization plans.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;

use super::state::{JointState, JointStateDistribution, Mode};
use super::EngineError;
use crate::network::MultiplexNetwork;
use crate::seeding;

/// Nodes infected on layer B at t = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialCondition {
    pub seed_nodes: Vec<usize>,
    /// Seeds start in II instead of SI.
    pub seed_aware: bool,
}

impl InitialCondition {
    pub fn single(node: usize) -> Self {
        Self {
            seed_nodes: vec![node],
            seed_aware: false,
        }
    }

    pub fn validate(
        &self,
        n: usize,
        plan: Option<&ImmunizationPlan>,
    ) -> Result<(), EngineError> {
        if self.seed_nodes.is_empty() {
            return Err(EngineError::InvalidInitial("no seed nodes".into()));
        }
        let mut seen = vec![false; n];
        for &s in &self.seed_nodes {
            if s >= n {
                return Err(EngineError::InvalidInitial(format!(
                    "seed node {s} out of range for {n} nodes"
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(EngineError::InvalidInitial(format!("seed node {s} repeated")));
            }
            if plan.is_some_and(|p| p.contains(s)) {
                return Err(EngineError::InvalidInitial(format!(
                    "seed node {s} is immunized"
                )));
            }
        }
        Ok(())
    }

    /// Point-mass distribution at t = 0. Without a plan the nine-state mode
    /// is used; with one, immunized nodes start in SI'.
    pub fn distribution(
        &self,
        n: usize,
        plan: Option<&ImmunizationPlan>,
    ) -> Result<JointStateDistribution, EngineError> {
        self.validate(n, plan)?;
        if let Some(p) = plan {
            if p.node_count != n {
                return Err(EngineError::InvalidInitial(format!(
                    "immunization plan built for {} nodes, network has {n}",
                    p.node_count
                )));
            }
        }
        let mode = if plan.is_some() {
            Mode::Immunized
        } else {
            Mode::Base
        };
        let mut dist = JointStateDistribution::uniform_state(n, mode, JointState::SS);
        if let Some(p) = plan {
            for &v in &p.nodes {
                dist.set_point_mass(v, JointState::SV);
            }
        }
        let seed_state = if self.seed_aware {
            JointState::II
        } else {
            JointState::SI
        };
        for &s in &self.seed_nodes {
            dist.set_point_mass(s, seed_state);
        }
        Ok(dist)
    }
}

/// Rule for drawing infection seeds when none are given explicitly.
///
/// Candidates are the non-immunized nodes, visited in the order of a
/// permutation drawn from `seed`. Nodes in the largest connected component
/// of layer B restricted to candidates are taken first (ties between
/// equally large components go to the one holding the smallest node index),
/// then the remaining candidates in permutation order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedRule {
    pub count: usize,
    pub aware: bool,
    pub seed: u64,
}

impl SeedRule {
    pub fn single(seed: u64) -> Self {
        Self {
            count: 1,
            aware: false,
            seed,
        }
    }

    pub fn choose(
        &self,
        net: &MultiplexNetwork,
        plan: Option<&ImmunizationPlan>,
    ) -> Result<InitialCondition, EngineError> {
        let n = net.node_count();
        let active: Vec<bool> = (0..n).map(|i| !plan.is_some_and(|p| p.contains(i))).collect();
        let available = active.iter().filter(|a| **a).count();
        if self.count == 0 || self.count > available {
            return Err(EngineError::InvalidInitial(format!(
                "cannot seed {} nodes with {available} infectable nodes",
                self.count
            )));
        }
        let labels = net.layer_b().component_labels(&active);
        let mut sizes = Vec::new();
        for l in labels.iter().flatten() {
            if *l >= sizes.len() {
                sizes.resize(l + 1, 0usize);
            }
            sizes[*l] += 1;
        }
        let largest = sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(l, _)| l);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seeding::rng(self.seed));
        let in_largest = |v: &usize| labels[*v].is_some() && labels[*v] == largest;
        let seed_nodes = order
            .iter()
            .filter(|v| in_largest(v))
            .chain(order.iter().filter(|v| active[**v] && !in_largest(v)))
            .take(self.count)
            .copied()
            .collect();
        Ok(InitialCondition {
            seed_nodes,
            seed_aware: self.aware,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    Random,
    Targeted,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Random => "random",
            Strategy::Targeted => "targeted",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Strategy::Random),
            "targeted" => Ok(Strategy::Targeted),
            other => Err(format!("unknown strategy {other:?} (random|targeted)")),
        }
    }
}

/// Set of nodes immunized on layer B before the dynamics start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImmunizationPlan {
    pub strategy: Strategy,
    /// Sorted ascending.
    pub nodes: Vec<usize>,
    mask: Vec<bool>,
    node_count: usize,
}

impl ImmunizationPlan {
    pub fn empty(n: usize, strategy: Strategy) -> Self {
        Self {
            strategy,
            nodes: Vec::new(),
            mask: vec![false; n],
            node_count: n,
        }
    }

    /// Immunize exactly `count` nodes.
    ///
    /// Random plans are the first `count` entries of a permutation drawn
    /// from `seed`, so plans with the same seed are nested in `count`.
    /// Targeted plans take nodes by descending layer-B degree, ties broken
    /// by ascending index.
    pub fn with_count(
        net: &MultiplexNetwork,
        strategy: Strategy,
        count: usize,
        seed: u64,
    ) -> Result<Self, EngineError> {
        let n = net.node_count();
        if count >= n {
            return Err(EngineError::InvalidImmunization(format!(
                "immunizing {count} of {n} nodes leaves no infectable node"
            )));
        }
        let mut order: Vec<usize> = (0..n).collect();
        match strategy {
            Strategy::Random => order.shuffle(&mut seeding::rng(seed)),
            Strategy::Targeted => {
                let degree = net.layer_b().degree_sequence();
                order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
            }
        }
        let mut nodes = order[..count].to_vec();
        nodes.sort_unstable();
        let mut mask = vec![false; n];
        for &v in &nodes {
            mask[v] = true;
        }
        Ok(Self {
            strategy,
            nodes,
            mask,
            node_count: n,
        })
    }

    pub fn contains(&self, node: usize) -> bool {
        self.mask.get(node).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn fraction(&self) -> f64 {
        self.nodes.len() as f64 / self.node_count as f64
    }
}

/// Immunize `round(v * N)` nodes with the given strategy.
pub fn apply_immunization(
    net: &MultiplexNetwork,
    strategy: Strategy,
    v: f64,
    seed: u64,
) -> Result<ImmunizationPlan, EngineError> {
    if !(0.0..=1.0).contains(&v) {
        return Err(EngineError::InvalidImmunization(format!(
            "fraction {v} outside [0, 1]"
        )));
    }
    let count = (v * net.node_count() as f64).round() as usize;
    ImmunizationPlan::with_count(net, strategy, count, seed)
}
