//! Transition kernel and synchronous stepper.

use arrayvec::ArrayVec;
use rayon::prelude::*;

use super::initial::{ImmunizationPlan, InitialCondition};
use super::state::{aware_spreading_mass, infected_mass, JointState, JointStateDistribution};
use super::{EngineError, ModelParams};
use crate::network::MultiplexNetwork;

/// Tolerance on the complement (self-transition) of a transition row.
pub const CLOSURE_TOL: f64 = 1e-12;
/// Entries drifting outside [0, 1] by more than this are clamped.
pub const CLAMP_TOL: f64 = 1e-12;
/// Entries drifting outside [0, 1] by more than this are a kernel bug.
pub const DRIFT_LIMIT: f64 = 1e-8;
/// Maximum tolerated deviation of a node's row sum from one after a step.
pub const NORMALIZATION_LIMIT: f64 = 1e-8;

/// Below this node count the stepper stays on the calling thread.
const PARALLEL_MIN_NODES: usize = 4096;

/// Probabilities of *not* being reached by any neighbor during one step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exposure {
    /// Not informed through layer A.
    pub q: f64,
    /// Not infected through layer B while unaware.
    pub q_sa: f64,
    /// Not infected through layer B while aware.
    pub q_ia: f64,
}

impl Exposure {
    pub const NONE: Exposure = Exposure {
        q: 1.0,
        q_sa: 1.0,
        q_ia: 1.0,
    };
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExposureProbabilities {
    pub q: Vec<f64>,
    pub q_sa: Vec<f64>,
    pub q_ia: Vec<f64>,
}

impl ExposureProbabilities {
    pub fn get(&self, i: usize) -> Exposure {
        Exposure {
            q: self.q[i],
            q_sa: self.q_sa[i],
            q_ia: self.q_ia[i],
        }
    }
}

/// Categorical distribution over the successors of one state. The
/// self-transition is always the last entry.
pub type Successors = ArrayVec<(JointState, f64), 4>;

/// Successor distribution of `state` given the node's exposure.
///
/// Outgoing rows follow the model's transition table; the self-transition
/// is the complement of the listed rows.
pub fn transition_row(
    state: JointState,
    exposure: Exposure,
    params: &ModelParams,
) -> Result<Successors, EngineError> {
    use JointState::*;
    let Exposure { q, q_sa, q_ia } = exposure;
    let (da, db, k) = (params.delta_a, params.delta_b, params.kappa);
    let mut row = Successors::new();
    match state {
        SS => {
            row.push((SI, q * (1.0 - q_sa) * (1.0 - k)));
            row.push((IS, (1.0 - q) * q_ia));
            row.push((II, q * (1.0 - q_sa) * k + (1.0 - q) * (1.0 - q_ia)));
        }
        SI => {
            let stays_unaware = q * (1.0 - k);
            row.push((SR, stays_unaware * db));
            row.push((II, (1.0 - stays_unaware) * (1.0 - db)));
            row.push((IR, (1.0 - stays_unaware) * db));
        }
        SR => row.push((IR, 1.0 - q)),
        IS => {
            row.push((II, (1.0 - da) * (1.0 - q_ia) + da * (1.0 - q_ia) * k));
            row.push((RS, da * q_ia));
            row.push((RI, da * (1.0 - q_ia) * (1.0 - k)));
        }
        II => {
            row.push((IR, (1.0 - da) * db));
            row.push((RI, da * (1.0 - db) * (1.0 - k)));
            row.push((RR, da * db));
        }
        IR => row.push((RR, da)),
        RS => {
            row.push((II, (1.0 - q_ia) * k));
            row.push((RI, (1.0 - q_ia) * (1.0 - k)));
        }
        RI => {
            row.push((II, (1.0 - db) * k));
            row.push((RR, db));
        }
        RR => {}
        SV => row.push((IV, 1.0 - q)),
        IV => row.push((RV, da)),
        RV => {}
    }
    let leaving: f64 = row.iter().map(|(_, p)| p).sum();
    let stay = 1.0 - leaving;
    if !(-CLOSURE_TOL..=1.0 + CLOSURE_TOL).contains(&stay) {
        return Err(EngineError::Closure { state, stay });
    }
    row.push((state, stay));
    Ok(row)
}

/// Marginals p^{I_A} and p^{I_B} of every node.
fn fill_marginals(dist: &JointStateDistribution, aware: &mut Vec<f64>, infected: &mut Vec<f64>) {
    let k = dist.stride();
    aware.clear();
    infected.clear();
    for row in dist.raw().chunks_exact(k) {
        aware.push(aware_spreading_mass(row));
        infected.push(infected_mass(row));
    }
}

#[inline]
fn node_exposure(
    net: &MultiplexNetwork,
    i: usize,
    aware: &[f64],
    infected: &[f64],
    params: &ModelParams,
) -> Exposure {
    let protected_beta = params.gamma * params.beta_b;
    let q = net
        .layer_a()
        .neighbors(i)
        .iter()
        .fold(1.0, |acc, &j| acc * (1.0 - aware[j] * params.beta_a));
    let (q_sa, q_ia) = net
        .layer_b()
        .neighbors(i)
        .iter()
        .fold((1.0, 1.0), |(sa, ia), &j| {
            (
                sa * (1.0 - infected[j] * params.beta_b),
                ia * (1.0 - infected[j] * protected_beta),
            )
        });
    Exposure { q, q_sa, q_ia }
}

fn fill_exposures(
    net: &MultiplexNetwork,
    aware: &[f64],
    infected: &[f64],
    params: &ModelParams,
    out: &mut ExposureProbabilities,
) {
    let n = net.node_count();
    out.q.resize(n, 1.0);
    out.q_sa.resize(n, 1.0);
    out.q_ia.resize(n, 1.0);
    for i in 0..n {
        let e = node_exposure(net, i, aware, infected, params);
        out.q[i] = e.q;
        out.q_sa[i] = e.q_sa;
        out.q_ia[i] = e.q_ia;
    }
}

/// Per-node probabilities of escaping awareness and infection this step.
pub fn compute_exposures(
    net: &MultiplexNetwork,
    dist: &JointStateDistribution,
    params: &ModelParams,
) -> ExposureProbabilities {
    let mut aware = Vec::with_capacity(dist.node_count());
    let mut infected = Vec::with_capacity(dist.node_count());
    fill_marginals(dist, &mut aware, &mut infected);
    let mut out = ExposureProbabilities::default();
    fill_exposures(net, &aware, &infected, params, &mut out);
    out
}

/// Push one node's row through the kernel, then apply the drift policy.
fn update_node(
    node: usize,
    states: &[JointState],
    current: &[f64],
    exposure: Exposure,
    params: &ModelParams,
    next: &mut [f64],
) -> Result<(), EngineError> {
    next.fill(0.0);
    for (&state, &mass) in states.iter().zip(current) {
        if mass == 0.0 {
            continue;
        }
        for (succ, p) in transition_row(state, exposure, params)? {
            next[succ.index()] += mass * p;
        }
    }
    for (s, x) in states.iter().zip(next.iter_mut()) {
        let drift = if *x < 0.0 {
            -*x
        } else if *x > 1.0 {
            *x - 1.0
        } else {
            continue;
        };
        if drift > DRIFT_LIMIT {
            return Err(EngineError::OutOfRange {
                node,
                state: *s,
                value: *x,
            });
        }
        if drift > CLAMP_TOL {
            *x = x.clamp(0.0, 1.0);
        }
    }
    let sum: f64 = next.iter().sum();
    if (sum - 1.0).abs() > NORMALIZATION_LIMIT {
        return Err(EngineError::Normalization { node, sum });
    }
    Ok(())
}

/// One synchronous MMCA step: every row at t + 1 is computed from the rows
/// at t only.
pub fn mmca_step(
    net: &MultiplexNetwork,
    dist: &JointStateDistribution,
    params: &ModelParams,
) -> Result<JointStateDistribution, EngineError> {
    let mut engine = Engine::new(net, params.clone(), dist.clone())?;
    engine.step()?;
    Ok(engine.into_distribution())
}

/// Summary of a run to the absorbing state.
#[derive(Clone, Debug, PartialEq)]
pub struct SteadyStateSummary {
    /// Final epidemic size: mean recovered-B mass.
    pub s_b: f64,
    /// Final awareness size: one minus mean unaware mass.
    pub s_a: f64,
    pub steps_taken: usize,
    pub converged: bool,
    /// Total infectious mass when the iteration stopped.
    pub residual_at_stop: f64,
}

impl SteadyStateSummary {
    pub fn from_distribution(
        dist: &JointStateDistribution,
        steps_taken: usize,
        converged: bool,
        residual_at_stop: f64,
    ) -> Self {
        let n = dist.node_count() as f64;
        let mut recovered = 0.0;
        let mut unaware = 0.0;
        for i in 0..dist.node_count() {
            recovered += dist.recovered(i);
            unaware += dist.mass(i, JointState::is_unaware);
        }
        Self {
            s_b: (recovered / n).clamp(0.0, 1.0),
            s_a: (1.0 - unaware / n).clamp(0.0, 1.0),
            steps_taken,
            converged,
            residual_at_stop,
        }
    }
}

/// Stateful stepper with reusable buffers.
pub struct Engine<'a> {
    net: &'a MultiplexNetwork,
    params: ModelParams,
    current: JointStateDistribution,
    next: Vec<f64>,
    aware: Vec<f64>,
    infected: Vec<f64>,
    exposures: ExposureProbabilities,
    steps: usize,
}

impl<'a> Engine<'a> {
    pub fn new(
        net: &'a MultiplexNetwork,
        params: ModelParams,
        initial: JointStateDistribution,
    ) -> Result<Self, EngineError> {
        params.validate()?;
        if initial.node_count() != net.node_count() {
            return Err(EngineError::InvalidInitial(format!(
                "distribution has {} nodes, network has {}",
                initial.node_count(),
                net.node_count()
            )));
        }
        let len = initial.raw().len();
        let mut engine = Self {
            net,
            params,
            current: initial,
            next: vec![0.0; len],
            aware: Vec::new(),
            infected: Vec::new(),
            exposures: ExposureProbabilities::default(),
            steps: 0,
        };
        engine.refresh_marginals();
        Ok(engine)
    }

    fn refresh_marginals(&mut self) {
        fill_marginals(&self.current, &mut self.aware, &mut self.infected);
    }

    pub fn distribution(&self) -> &JointStateDistribution {
        &self.current
    }

    pub fn into_distribution(self) -> JointStateDistribution {
        self.current
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// p^{I_A} for every node at the current step.
    pub fn aware_marginals(&self) -> &[f64] {
        &self.aware
    }

    /// p^{I_B} for every node at the current step.
    pub fn infected_marginals(&self) -> &[f64] {
        &self.infected
    }

    /// Σ_i (p_i^{I_A} + p_i^{I_B}).
    pub fn infectious_mass(&self) -> f64 {
        self.aware.iter().zip(&self.infected).map(|(a, b)| a + b).sum()
    }

    pub fn step(&mut self) -> Result<(), EngineError> {
        fill_exposures(
            self.net,
            &self.aware,
            &self.infected,
            &self.params,
            &mut self.exposures,
        );
        let k = self.current.stride();
        let states = self.current.mode().states();
        let current = self.current.raw();
        let exposures = &self.exposures;
        let params = &self.params;
        let kernel = |(i, next_row): (usize, &mut [f64])| {
            update_node(
                i,
                states,
                &current[i * k..(i + 1) * k],
                exposures.get(i),
                params,
                next_row,
            )
        };
        if self.net.node_count() >= PARALLEL_MIN_NODES {
            self.next
                .par_chunks_mut(k)
                .enumerate()
                .with_min_len(256)
                .try_for_each(kernel)?;
        } else {
            self.next.chunks_mut(k).enumerate().try_for_each(kernel)?;
        }
        std::mem::swap(self.current.raw_mut(), &mut self.next);
        self.steps += 1;
        self.refresh_marginals();
        Ok(())
    }

    /// Iterate until the infectious mass falls below the tolerance or the
    /// step cap is hit.
    pub fn run(mut self) -> Result<(SteadyStateSummary, JointStateDistribution), EngineError> {
        let mut residual = self.infectious_mass();
        while residual >= self.params.convergence_tol && self.steps < self.params.max_steps {
            self.step()?;
            residual = self.infectious_mass();
        }
        let converged = residual < self.params.convergence_tol;
        let summary =
            SteadyStateSummary::from_distribution(&self.current, self.steps, converged, residual);
        Ok((summary, self.current))
    }
}

/// Run the dynamics from `init` (and optional immunization) to steady
/// state. Non-convergence is reported through `converged`, not as an error.
pub fn run_to_steady_state(
    net: &MultiplexNetwork,
    params: &ModelParams,
    init: &InitialCondition,
    plan: Option<&ImmunizationPlan>,
) -> Result<(SteadyStateSummary, JointStateDistribution), EngineError> {
    let initial = init.distribution(net.node_count(), plan)?;
    Engine::new(net, params.clone(), initial)?.run()
}
