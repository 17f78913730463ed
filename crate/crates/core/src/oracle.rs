//! Stochastic simulation of the same joint-state machine, used to
//! cross-check the probability-level dynamics.
//!
//! Each node holds one hard state. At every step the exposure of a node is
//! computed from the *realized* states of its neighbors, and the node's
//! successor is drawn from the full categorical row returned by
//! [`transition_row`]. All nodes update synchronously.
//!
//! Run `r` of an ensemble uses seed `seeding::derive(base_seed, r)`.

use rand::Rng as _;
use rayon::prelude::*;

use crate::engine::{
    transition_row, EngineError, Exposure, ImmunizationPlan, InitialCondition, JointState,
    ModelParams,
};
use crate::network::MultiplexNetwork;
use crate::seeding;

#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub node_states: Vec<JointState>,
    pub rng_seed: u64,
    pub steps: usize,
    /// Number of nodes infected on layer B after each step (index 0 is the
    /// initial state).
    pub infected_counts: Vec<usize>,
    /// Number of nodes spreading awareness after each step.
    pub aware_counts: Vec<usize>,
    /// False when the step cap stopped the run with infectious nodes left.
    pub finished: bool,
}

impl Realization {
    pub fn s_b(&self) -> f64 {
        let r = self.node_states.iter().filter(|s| s.is_recovered()).count();
        r as f64 / self.node_states.len() as f64
    }

    pub fn s_a(&self) -> f64 {
        let u = self.node_states.iter().filter(|s| s.is_unaware()).count();
        1.0 - u as f64 / self.node_states.len() as f64
    }
}

/// Hard initial states: seeds in SI (or II), immunized nodes in SI', the
/// rest in SS.
pub fn initial_states(
    n: usize,
    init: &InitialCondition,
    plan: Option<&ImmunizationPlan>,
) -> Result<Vec<JointState>, EngineError> {
    init.validate(n, plan)?;
    let mut states = vec![JointState::SS; n];
    if let Some(p) = plan {
        for &v in &p.nodes {
            states[v] = JointState::SV;
        }
    }
    let seed_state = if init.seed_aware {
        JointState::II
    } else {
        JointState::SI
    };
    for &s in &init.seed_nodes {
        states[s] = seed_state;
    }
    Ok(states)
}

fn realized_exposure(
    net: &MultiplexNetwork,
    i: usize,
    states: &[JointState],
    params: &ModelParams,
) -> Exposure {
    let aware = net
        .layer_a()
        .neighbors(i)
        .iter()
        .filter(|&&j| states[j].is_spreading_awareness())
        .count() as i32;
    let infected = net
        .layer_b()
        .neighbors(i)
        .iter()
        .filter(|&&j| states[j].is_infected())
        .count() as i32;
    Exposure {
        q: (1.0 - params.beta_a).powi(aware),
        q_sa: (1.0 - params.beta_b).powi(infected),
        q_ia: (1.0 - params.gamma * params.beta_b).powi(infected),
    }
}

/// Advance every node by one synchronous step.
pub fn step_states(
    net: &MultiplexNetwork,
    params: &ModelParams,
    states: &[JointState],
    rng: &mut seeding::Rng,
) -> Result<Vec<JointState>, EngineError> {
    let mut next = Vec::with_capacity(states.len());
    for (i, &s) in states.iter().enumerate() {
        let row = transition_row(s, realized_exposure(net, i, states, params), params)?;
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = None;
        for &(t, p) in &row {
            if p <= 0.0 {
                continue;
            }
            acc += p;
            chosen = Some(t);
            if u < acc {
                break;
            }
        }
        let t = chosen.expect("transition row has no positive entry");
        debug_assert!(row.iter().any(|&(x, p)| x == t && p > 0.0));
        next.push(t);
    }
    Ok(next)
}

fn count(states: &[JointState], pred: fn(JointState) -> bool) -> usize {
    states.iter().filter(|s| pred(**s)).count()
}

/// Run one realization until no node is infected or spreading awareness
/// (or `params.max_steps` is reached).
pub fn simulate_realization(
    net: &MultiplexNetwork,
    params: &ModelParams,
    init: &InitialCondition,
    plan: Option<&ImmunizationPlan>,
    seed: u64,
) -> Result<Realization, EngineError> {
    params.validate()?;
    let mut states = initial_states(net.node_count(), init, plan)?;
    let mut rng = seeding::rng(seed);
    let mut infected_counts = vec![count(&states, JointState::is_infected)];
    let mut aware_counts = vec![count(&states, JointState::is_spreading_awareness)];
    let mut steps = 0;
    while infected_counts[steps] + aware_counts[steps] > 0 && steps < params.max_steps {
        states = step_states(net, params, &states, &mut rng)?;
        steps += 1;
        infected_counts.push(count(&states, JointState::is_infected));
        aware_counts.push(count(&states, JointState::is_spreading_awareness));
    }
    let finished = infected_counts[steps] + aware_counts[steps] == 0;
    Ok(Realization {
        node_states: states,
        rng_seed: seed,
        steps,
        infected_counts,
        aware_counts,
        finished,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub s_a: f64,
    pub s_b: f64,
    pub steps: usize,
    pub finished: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSummary {
    pub runs: usize,
    pub s_b_mean: f64,
    pub s_b_std: f64,
    pub s_a_mean: f64,
    pub s_a_std: f64,
    /// Share of runs with `s_b <= extinction_cutoff`.
    pub fraction_extinct: f64,
    pub extinction_cutoff: f64,
    /// Mean `s_b` over runs above the extinction cutoff (NaN if none).
    pub s_b_mean_outbreaks: f64,
    pub unfinished_runs: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    pub summary: EnsembleSummary,
    pub records: Vec<RunRecord>,
}

impl Ensemble {
    /// Per-run CSV with header `run,s_a,s_b,steps`.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "run,s_a,s_b,steps")?;
        for r in &self.records {
            writeln!(out, "{},{},{},{}", r.run, r.s_a, r.s_b, r.steps)?;
        }
        Ok(())
    }
}

fn mean_std(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Independent realizations, summarized in run-index order.
pub fn run_ensemble(
    net: &MultiplexNetwork,
    params: &ModelParams,
    init: &InitialCondition,
    plan: Option<&ImmunizationPlan>,
    runs: usize,
    base_seed: u64,
) -> Result<Ensemble, EngineError> {
    if runs == 0 {
        return Err(EngineError::InvalidParameter {
            field: "runs",
            reason: "must be at least 1".into(),
        });
    }
    let records = (0..runs)
        .into_par_iter()
        .map(|r| {
            let real =
                simulate_realization(net, params, init, plan, seeding::derive(base_seed, r as u64))?;
            Ok(RunRecord {
                run: r,
                s_a: real.s_a(),
                s_b: real.s_b(),
                steps: real.steps,
                finished: real.finished,
            })
        })
        .collect::<Result<Vec<_>, EngineError>>()?;
    let cutoff = 5.0 / net.node_count() as f64;
    let (s_b_mean, s_b_std) = mean_std(records.iter().map(|r| r.s_b));
    let (s_a_mean, s_a_std) = mean_std(records.iter().map(|r| r.s_a));
    let (s_b_mean_outbreaks, _) =
        mean_std(records.iter().map(|r| r.s_b).filter(move |s| *s > cutoff));
    let extinct = records.iter().filter(|r| r.s_b <= cutoff).count();
    let summary = EnsembleSummary {
        runs,
        s_b_mean,
        s_b_std,
        s_a_mean,
        s_a_std,
        fraction_extinct: extinct as f64 / runs as f64,
        extinction_cutoff: cutoff,
        s_b_mean_outbreaks,
        unfinished_runs: records.iter().filter(|r| !r.finished).count(),
    };
    Ok(Ensemble { summary, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Strategy;
    use crate::network::{parse_edge_list, Layer};

    fn params(beta_a: f64, beta_b: f64, delta_b: f64, kappa: f64) -> ModelParams {
        ModelParams {
            beta_a,
            beta_b,
            delta_a: 1.0,
            delta_b,
            gamma: 0.5,
            kappa,
            ..Default::default()
        }
    }

    fn path(n: usize) -> Layer {
        Layer::from_edges(n, (1..n).map(|j| (j - 1, j))).unwrap()
    }

    #[test]
    fn lone_seed_recovers_in_one_step() {
        let net = MultiplexNetwork::new(path(5), path(5)).unwrap();
        let p = params(0.5, 0.0, 1.0, 0.0);
        for seed in 0..20 {
            let r = simulate_realization(&net, &p, &InitialCondition::single(2), None, seed).unwrap();
            assert_eq!(r.s_b(), 0.2);
            assert_eq!(r.steps, 1);
            assert_eq!(r.infected_counts, vec![1, 0]);
            assert!(r.finished);
        }
    }

    #[test]
    fn certain_transmission_covers_component() {
        let b = parse_edge_list("7\n0 1\n1 2\n2 3\n4 5\n".as_bytes()).unwrap();
        let net = MultiplexNetwork::new(Layer::empty(7), b).unwrap();
        let p = params(0.0, 1.0, 1.0, 0.0);
        for seed in 0..10 {
            let r = simulate_realization(&net, &p, &InitialCondition::single(1), None, seed).unwrap();
            assert_eq!(r.s_b(), 4.0 / 7.0);
            assert_eq!(r.s_a(), 0.0);
        }
    }

    #[test]
    fn path_of_three_matches_enumeration() {
        // Middle seed infects each end independently with probability 1/2,
        // and the ends cannot reinfect anyone: E[infected] = 1 + 2 * 0.5.
        let net = MultiplexNetwork::new(Layer::empty(3), path(3)).unwrap();
        let p = params(0.0, 0.5, 1.0, 0.0);
        let ens = run_ensemble(&net, &p, &InitialCondition::single(1), None, 200_000, 11).unwrap();
        let expected = 2.0 / 3.0;
        // per-run s_b is (1 + X) / 3 with X ~ Bin(2, 1/2): variance 0.5 / 9
        let sigma = (0.5f64 / 9.0 / 200_000.0).sqrt();
        assert!(
            (ens.summary.s_b_mean - expected).abs() < 3.0 * sigma,
            "mean {} vs {expected}",
            ens.summary.s_b_mean
        );
    }

    #[test]
    fn single_run_has_zero_std() {
        let net = MultiplexNetwork::new(path(6), path(6)).unwrap();
        let p = params(0.5, 0.6, 1.0, 0.5);
        let ens = run_ensemble(&net, &p, &InitialCondition::single(0), None, 1, 5).unwrap();
        let real = simulate_realization(&net, &p, &InitialCondition::single(0), None, seeding::derive(5, 0))
            .unwrap();
        assert_eq!(ens.summary.s_b_mean, real.s_b());
        assert_eq!(ens.summary.s_b_std, 0.0);
        assert_eq!(ens.summary.s_a_std, 0.0);
    }

    #[test]
    fn ensembles_are_reproducible() {
        let net = MultiplexNetwork::new(path(30), path(30)).unwrap();
        let p = params(0.5, 0.7, 0.5, 0.5);
        let init = InitialCondition::single(10);
        let a = run_ensemble(&net, &p, &init, None, 200, 99).unwrap();
        let b = run_ensemble(&net, &p, &init, None, 200, 99).unwrap();
        assert_eq!(a, b);
        let c = run_ensemble(&net, &p, &init, None, 200, 100).unwrap();
        assert_ne!(a.records, c.records);
        assert!(run_ensemble(&net, &p, &init, None, 0, 1).is_err());
    }

    #[test]
    fn immunized_nodes_stay_immunized() {
        let net = MultiplexNetwork::new(path(20), path(20)).unwrap();
        let p = params(0.9, 0.9, 0.5, 0.5);
        let plan = ImmunizationPlan::with_count(&net, Strategy::Random, 6, 1).unwrap();
        let init = crate::engine::SeedRule::single(2).choose(&net, Some(&plan)).unwrap();
        for seed in 0..50 {
            let r = simulate_realization(&net, &p, &init, Some(&plan), seed).unwrap();
            for (i, s) in r.node_states.iter().enumerate() {
                assert_eq!(plan.contains(i), s.is_immunized());
            }
        }
    }

    #[test]
    fn step_cap_reports_unfinished() {
        let net = MultiplexNetwork::new(path(3), path(3)).unwrap();
        let p = ModelParams {
            delta_b: 0.0,
            max_steps: 25,
            ..Default::default()
        };
        let r = simulate_realization(&net, &p, &InitialCondition::single(0), None, 0).unwrap();
        assert!(!r.finished);
        assert_eq!(r.steps, 25);
    }

    #[test]
    fn per_run_csv() {
        let net = MultiplexNetwork::new(path(4), path(4)).unwrap();
        let ens = run_ensemble(&net, &params(0.0, 0.0, 1.0, 0.0), &InitialCondition::single(0), None, 2, 0)
            .unwrap();
        let mut buf = Vec::new();
        ens.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "run,s_a,s_b,steps\n0,0,0.25,1\n1,0,0.25,1\n");
    }
}
