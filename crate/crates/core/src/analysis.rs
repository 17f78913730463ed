//! Epidemic thresholds, immunization thresholds and outbreak-size phase
//! diagrams built on steady-state runs.
//!
//! An *outbreak* is a final epidemic size `s_b` at or above the criterion
//! θ (default 0.01). Thresholds are located by bisection, assuming `s_b` is
//! monotone in the swept quantity; every probe is checked against the
//! current bracket endpoints and a violation aborts the search.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::{
    run_to_steady_state, EngineError, ImmunizationPlan, InitialCondition, ModelParams, SeedRule,
    Strategy,
};
use crate::network::MultiplexNetwork;
use crate::seeding;

/// Slack allowed when comparing a probe against its bracket endpoints.
const MONOTONE_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error(
        "outbreak size not monotone in {parameter}: s({at}) = {s_at} outside [s({lo}) = {s_lo}, s({hi}) = {s_hi}]"
    )]
    NonMonotone {
        parameter: &'static str,
        at: f64,
        s_at: f64,
        lo: f64,
        s_lo: f64,
        hi: f64,
        s_hi: f64,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdQuery {
    /// Outbreak criterion θ on `s_b`.
    pub criterion: f64,
    pub bisection_tol: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for ThresholdQuery {
    fn default() -> Self {
        Self {
            criterion: 0.01,
            bisection_tol: 1e-3,
            lo: 0.0,
            hi: 1.0,
        }
    }
}

impl ThresholdQuery {
    pub fn validate(&self) -> Result<(), AnalysisError> {
        if !(self.criterion > 0.0 && self.criterion < 1.0) {
            return Err(AnalysisError::InvalidQuery(format!(
                "criterion {} outside (0, 1)",
                self.criterion
            )));
        }
        if !(self.bisection_tol > 0.0) {
            return Err(AnalysisError::InvalidQuery(format!(
                "bisection tolerance {} must be positive",
                self.bisection_tol
            )));
        }
        if !(0.0 <= self.lo && self.lo < self.hi && self.hi <= 1.0) {
            return Err(AnalysisError::InvalidQuery(format!(
                "bracket [{}, {}] must satisfy 0 <= lo < hi <= 1",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

/// How the search range related to the criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bracketing {
    Bracketed,
    /// Outbreak at every point of the range; the boundary on the
    /// suppressing side is returned.
    OutbreakEverywhere,
    /// No outbreak anywhere in the range; the boundary on the spreading
    /// side is returned.
    NoOutbreakAnywhere,
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bracketing::Bracketed => "bracketed",
            Bracketing::OutbreakEverywhere => "outbreak-everywhere",
            Bracketing::NoOutbreakAnywhere => "no-outbreak-anywhere",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdEstimate {
    pub value: f64,
    /// Final bracket: no outbreak at `lo` side / outbreak at `hi` side for
    /// epidemic thresholds, the reverse for immunization thresholds.
    pub lo: f64,
    pub hi: f64,
    pub s_lo: f64,
    pub s_hi: f64,
    pub bracketing: Bracketing,
    pub probes: usize,
    /// Every steady-state run behind the estimate converged.
    pub all_converged: bool,
    /// Probes whose outbreak size fell outside the values at the current
    /// bracket endpoints. Always zero for epidemic thresholds, where such a
    /// probe is an error.
    pub monotonicity_violations: usize,
}

struct Probe {
    s_b: f64,
    converged: bool,
}

/// Bisection on a scalar parameter with `s_b` non-decreasing in it.
/// Returns the midpoint of the final bracket.
fn bisect_increasing(
    parameter: &'static str,
    query: &ThresholdQuery,
    mut eval: impl FnMut(f64) -> Result<Probe, AnalysisError>,
) -> Result<ThresholdEstimate, AnalysisError> {
    let theta = query.criterion;
    let (mut lo, mut hi) = (query.lo, query.hi);
    let p_lo = eval(lo)?;
    let p_hi = eval(hi)?;
    let mut probes = 2;
    let mut all_converged = p_lo.converged && p_hi.converged;
    let (mut s_lo, mut s_hi) = (p_lo.s_b, p_hi.s_b);
    if s_lo > s_hi + MONOTONE_TOL && s_lo >= theta && s_hi < theta {
        return Err(AnalysisError::NonMonotone {
            parameter,
            at: hi,
            s_at: s_hi,
            lo,
            s_lo,
            hi,
            s_hi,
        });
    }
    let done = |bracketing, value| ThresholdEstimate {
        value,
        lo,
        hi,
        s_lo,
        s_hi,
        bracketing,
        probes,
        all_converged,
        monotonicity_violations: 0,
    };
    if s_lo >= theta {
        return Ok(done(Bracketing::OutbreakEverywhere, lo));
    }
    if s_hi < theta {
        return Ok(done(Bracketing::NoOutbreakAnywhere, hi));
    }
    while hi - lo > query.bisection_tol {
        let mid = 0.5 * (lo + hi);
        let p = eval(mid)?;
        probes += 1;
        all_converged &= p.converged;
        if p.s_b < s_lo - MONOTONE_TOL || p.s_b > s_hi + MONOTONE_TOL {
            return Err(AnalysisError::NonMonotone {
                parameter,
                at: mid,
                s_at: p.s_b,
                lo,
                s_lo,
                hi,
                s_hi,
            });
        }
        if p.s_b >= theta {
            hi = mid;
            s_hi = p.s_b;
        } else {
            lo = mid;
            s_lo = p.s_b;
        }
    }
    Ok(ThresholdEstimate {
        value: 0.5 * (lo + hi),
        lo,
        hi,
        s_lo,
        s_hi,
        bracketing: Bracketing::Bracketed,
        probes,
        all_converged,
        monotonicity_violations: 0,
    })
}

/// Estimate the epidemic threshold β_Bc: the transmissibility at which the
/// final epidemic size crosses the criterion. `params.beta_b` is ignored.
pub fn epidemic_threshold(
    net: &MultiplexNetwork,
    params: &ModelParams,
    init: &InitialCondition,
    query: &ThresholdQuery,
) -> Result<ThresholdEstimate, AnalysisError> {
    query.validate()?;
    bisect_increasing("beta_b", query, |beta_b| {
        let p = ModelParams {
            beta_b,
            ..params.clone()
        };
        let (summary, _) = run_to_steady_state(net, &p, init, None)?;
        Ok(Probe {
            s_b: summary.s_b,
            converged: summary.converged,
        })
    })
}

/// How immunization plans and infection seeds are drawn while searching
/// for the immunization threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct ImmunizationSearch {
    pub strategy: Strategy,
    /// Number of random plans averaged per probe (targeted plans are
    /// deterministic and use one).
    pub draws: usize,
    /// Plan `d` is drawn with `seeding::derive(plan_seed, d)`.
    pub plan_seed: u64,
    pub seeds: SeedRule,
}

impl ImmunizationSearch {
    pub fn new(strategy: Strategy, plan_seed: u64, seeds: SeedRule) -> Self {
        Self {
            strategy,
            draws: 10,
            plan_seed,
            seeds,
        }
    }

    fn effective_draws(&self) -> usize {
        match self.strategy {
            Strategy::Random => self.draws.max(1),
            Strategy::Targeted => 1,
        }
    }
}

/// Mean final epidemic size with `count` immunized nodes.
pub fn immunized_outbreak_size(
    net: &MultiplexNetwork,
    params: &ModelParams,
    search: &ImmunizationSearch,
    count: usize,
) -> Result<(f64, bool), EngineError> {
    let draws = search.effective_draws();
    let mut total = 0.0;
    let mut converged = true;
    for d in 0..draws {
        let plan = ImmunizationPlan::with_count(
            net,
            search.strategy,
            count,
            seeding::derive(search.plan_seed, d as u64),
        )?;
        let init = search.seeds.choose(net, Some(&plan))?;
        let (summary, _) = run_to_steady_state(net, params, &init, Some(&plan))?;
        total += summary.s_b;
        converged &= summary.converged;
    }
    Ok((total / draws as f64, converged))
}

/// Estimate the immunization threshold v_c: the smallest immunized
/// fraction with final epidemic size below the criterion.
///
/// The search runs over immunized node counts, so the resolution is
/// `max(1/N, bisection_tol)`. If even the largest admissible fraction
/// `1 - 1/N` leaves an outbreak, 1 is returned with
/// [`Bracketing::OutbreakEverywhere`].
///
/// Averaged random plans are noisy near the criterion, so only the initial
/// endpoints are checked for monotonicity; inconsistent midpoints are
/// counted in [`ThresholdEstimate::monotonicity_violations`].
pub fn immunization_threshold(
    net: &MultiplexNetwork,
    params: &ModelParams,
    search: &ImmunizationSearch,
    query: &ThresholdQuery,
) -> Result<ThresholdEstimate, AnalysisError> {
    query.validate()?;
    let n = net.node_count();
    let nf = n as f64;
    let k_lo = (query.lo * nf).ceil() as usize;
    let k_hi = ((query.hi * nf).floor() as usize).min(n - 1);
    if k_lo >= k_hi {
        return Err(AnalysisError::InvalidQuery(format!(
            "bracket [{}, {}] holds no immunized counts for {n} nodes",
            query.lo, query.hi
        )));
    }
    let step = ((query.bisection_tol * nf).floor() as usize).max(1);
    let theta = query.criterion;
    let eval = |k: usize| immunized_outbreak_size(net, params, search, k);

    let (mut lo, mut hi) = (k_lo, k_hi);
    let (mut s_lo, c_lo) = eval(lo)?;
    let (mut s_hi, c_hi) = eval(hi)?;
    if s_hi > s_lo + MONOTONE_TOL && s_lo < theta && s_hi >= theta {
        return Err(AnalysisError::NonMonotone {
            parameter: "v",
            at: hi as f64 / nf,
            s_at: s_hi,
            lo: lo as f64 / nf,
            s_lo,
            hi: hi as f64 / nf,
            s_hi,
        });
    }
    let mut est = ThresholdEstimate {
        value: 0.0,
        lo: 0.0,
        hi: 0.0,
        s_lo,
        s_hi,
        bracketing: Bracketing::Bracketed,
        probes: 2,
        all_converged: c_lo && c_hi,
        monotonicity_violations: 0,
    };
    if s_lo < theta {
        est.bracketing = Bracketing::NoOutbreakAnywhere;
    } else if s_hi >= theta {
        est.bracketing = Bracketing::OutbreakEverywhere;
    } else {
        while hi - lo > step {
            let mid = lo + (hi - lo) / 2;
            let (s, c) = eval(mid)?;
            est.probes += 1;
            est.all_converged &= c;
            if s > s_lo + MONOTONE_TOL || s < s_hi - MONOTONE_TOL {
                est.monotonicity_violations += 1;
            }
            if s >= theta {
                lo = mid;
                s_lo = s;
            } else {
                hi = mid;
                s_hi = s;
            }
        }
    }
    est.lo = lo as f64 / nf;
    est.hi = hi as f64 / nf;
    est.s_lo = s_lo;
    est.s_hi = s_hi;
    est.value = match est.bracketing {
        Bracketing::NoOutbreakAnywhere => est.lo,
        Bracketing::OutbreakEverywhere => 1.0,
        Bracketing::Bracketed => est.hi,
    };
    Ok(est)
}

/// A model parameter that can label a phase-diagram axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Param {
    BetaA,
    BetaB,
    DeltaA,
    DeltaB,
    /// Both recovery rates at once.
    Delta,
    Gamma,
    Kappa,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::BetaA => "beta_a",
            Param::BetaB => "beta_b",
            Param::DeltaA => "delta_a",
            Param::DeltaB => "delta_b",
            Param::Delta => "delta",
            Param::Gamma => "gamma",
            Param::Kappa => "kappa",
        }
    }

    pub fn apply(self, params: &mut ModelParams, x: f64) {
        match self {
            Param::BetaA => params.beta_a = x,
            Param::BetaB => params.beta_b = x,
            Param::DeltaA => params.delta_a = x,
            Param::DeltaB => params.delta_b = x,
            Param::Delta => {
                params.delta_a = x;
                params.delta_b = x;
            }
            Param::Gamma => params.gamma = x,
            Param::Kappa => params.kappa = x,
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "beta_a" => Param::BetaA,
            "beta_b" => Param::BetaB,
            "delta_a" => Param::DeltaA,
            "delta_b" => Param::DeltaB,
            "delta" => Param::Delta,
            "gamma" => Param::Gamma,
            "kappa" => Param::Kappa,
            other => return Err(format!("unknown parameter {other:?}")),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(param: Param, values: Vec<f64>) -> Self {
        Self { param, values }
    }

    /// `points` evenly spaced values from `lo` to `hi` inclusive.
    pub fn linspace(param: Param, lo: f64, hi: f64, points: usize) -> Self {
        let values = match points {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..points)
                .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
                .collect(),
        };
        Self { param, values }
    }
}

/// What each phase-diagram cell holds.
#[derive(Clone, Debug, PartialEq)]
pub enum CellQuantity {
    OutbreakSize,
    EpidemicThreshold(ThresholdQuery),
    ImmunizationThreshold {
        search: ImmunizationSearch,
        query: ThresholdQuery,
    },
}

impl CellQuantity {
    pub fn name(&self) -> &'static str {
        match self {
            CellQuantity::OutbreakSize => "outbreak-size",
            CellQuantity::EpidemicThreshold(_) => "epidemic-threshold",
            CellQuantity::ImmunizationThreshold { .. } => "immunization-threshold",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cell {
    pub value: f64,
    pub converged: bool,
    /// Only set for threshold cells.
    pub bracketing: Option<Bracketing>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseDiagram {
    pub axis1: Axis,
    pub axis2: Axis,
    pub quantity: CellQuantity,
    /// Row-major: `cells[i * axis2.values.len() + j]`.
    pub cells: Vec<Cell>,
}

impl PhaseDiagram {
    pub fn cell(&self, i: usize, j: usize) -> &Cell {
        &self.cells[i * self.axis2.values.len() + j]
    }

    pub fn unconverged(&self) -> usize {
        self.cells.iter().filter(|c| !c.converged).count()
    }

    /// CSV with header `axis1,axis2,value,converged`, one row per cell.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "axis1,axis2,value,converged")?;
        for (i, x) in self.axis1.values.iter().enumerate() {
            for (j, y) in self.axis2.values.iter().enumerate() {
                let c = self.cell(i, j);
                writeln!(out, "{x},{y},{},{}", c.value, c.converged)?;
            }
        }
        Ok(())
    }
}

/// Evaluate `quantity` at every grid point. All cells share `net` and the
/// infection seed rule; cells are independent and may run in parallel.
pub fn sweep_phase_diagram(
    net: &MultiplexNetwork,
    axis1: &Axis,
    axis2: &Axis,
    params: &ModelParams,
    seeds: &SeedRule,
    quantity: &CellQuantity,
) -> Result<PhaseDiagram, AnalysisError> {
    if axis1.values.is_empty() || axis2.values.is_empty() {
        return Err(AnalysisError::InvalidQuery("empty axis".into()));
    }
    if axis1.param == axis2.param {
        return Err(AnalysisError::InvalidQuery(format!(
            "both axes sweep {}",
            axis1.param
        )));
    }
    if matches!(quantity, CellQuantity::EpidemicThreshold(_))
        && (axis1.param == Param::BetaB || axis2.param == Param::BetaB)
    {
        return Err(AnalysisError::InvalidQuery(
            "epidemic-threshold cells cannot sweep beta_b".into(),
        ));
    }
    for axis in [axis1, axis2] {
        for &x in &axis.values {
            let mut p = params.clone();
            axis.param.apply(&mut p, x);
            p.validate()?;
        }
    }
    let init = seeds.choose(net, None)?;
    let width = axis2.values.len();
    let cells = (0..axis1.values.len() * width)
        .into_par_iter()
        .map(|idx| {
            let mut p = params.clone();
            axis1.param.apply(&mut p, axis1.values[idx / width]);
            axis2.param.apply(&mut p, axis2.values[idx % width]);
            match quantity {
                CellQuantity::OutbreakSize => {
                    let (summary, _) = run_to_steady_state(net, &p, &init, None)?;
                    Ok(Cell {
                        value: summary.s_b,
                        converged: summary.converged,
                        bracketing: None,
                    })
                }
                CellQuantity::EpidemicThreshold(query) => {
                    let est = epidemic_threshold(net, &p, &init, query)?;
                    Ok(Cell {
                        value: est.value,
                        converged: est.all_converged,
                        bracketing: Some(est.bracketing),
                    })
                }
                CellQuantity::ImmunizationThreshold { search, query } => {
                    let est = immunization_threshold(net, &p, search, query)?;
                    Ok(Cell {
                        value: est.value,
                        converged: est.all_converged,
                        bracketing: Some(est.bracketing),
                    })
                }
            }
        })
        .collect::<Result<Vec<_>, AnalysisError>>()?;
    Ok(PhaseDiagram {
        axis1: axis1.clone(),
        axis2: axis2.clone(),
        quantity: quantity.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{build_multiplex, GraphSpec, Layer};

    fn er_net(n: usize, seed: u64) -> MultiplexNetwork {
        build_multiplex(
            &GraphSpec::erdos_renyi(n, 4.0, seeding::derive(seed, 1)),
            &GraphSpec::erdos_renyi(n, 4.0, seeding::derive(seed, 2)),
        )
        .unwrap()
    }

    fn star(n: usize) -> Layer {
        Layer::from_edges(n, (1..n).map(|j| (0, j))).unwrap()
    }

    fn base() -> ModelParams {
        ModelParams::default()
    }

    #[test]
    fn query_validation() {
        assert!(ThresholdQuery::default().validate().is_ok());
        for q in [
            ThresholdQuery { criterion: 0.0, ..Default::default() },
            ThresholdQuery { criterion: 1.0, ..Default::default() },
            ThresholdQuery { bisection_tol: 0.0, ..Default::default() },
            ThresholdQuery { lo: 0.5, hi: 0.5, ..Default::default() },
            ThresholdQuery { lo: -0.1, ..Default::default() },
        ] {
            assert!(q.validate().is_err(), "{q:?}");
        }
    }

    #[test]
    fn bisection_on_step_function() {
        let q = ThresholdQuery::default();
        let est = bisect_increasing("x", &q, |x| {
            Ok(Probe {
                s_b: if x >= 0.3 { 0.5 } else { 0.001 },
                converged: true,
            })
        })
        .unwrap();
        assert_eq!(est.bracketing, Bracketing::Bracketed);
        assert!(est.hi - est.lo <= q.bisection_tol);
        assert!(est.lo < 0.3 && est.hi >= 0.3);
        assert!((est.value - 0.3).abs() <= q.bisection_tol);
        assert!(est.s_lo < q.criterion && est.s_hi >= q.criterion);
    }

    #[test]
    fn bisection_flags_and_errors() {
        let q = ThresholdQuery::default();
        let always = bisect_increasing("x", &q, |_| Ok(Probe { s_b: 0.5, converged: true })).unwrap();
        assert_eq!(always.bracketing, Bracketing::OutbreakEverywhere);
        assert_eq!(always.value, 0.0);
        let never = bisect_increasing("x", &q, |_| Ok(Probe { s_b: 0.0, converged: false })).unwrap();
        assert_eq!(never.bracketing, Bracketing::NoOutbreakAnywhere);
        assert_eq!(never.value, 1.0);
        assert!(!never.all_converged);
        let reversed = bisect_increasing("x", &q, |x| {
            Ok(Probe { s_b: 1.0 - x, converged: true })
        });
        assert!(matches!(reversed, Err(AnalysisError::NonMonotone { .. })));
        let bumpy = bisect_increasing("x", &q, |x| {
            Ok(Probe {
                s_b: if x == 0.5 { 2.0 } else { x },
                converged: true,
            })
        });
        assert!(matches!(bumpy, Err(AnalysisError::NonMonotone { .. })));
    }

    #[test]
    fn threshold_is_deterministic_and_brackets() {
        let net = er_net(300, 3);
        let init = SeedRule::single(1).choose(&net, None).unwrap();
        let q = ThresholdQuery::default();
        let a = epidemic_threshold(&net, &base(), &init, &q).unwrap();
        let b = epidemic_threshold(&net, &base(), &init, &q).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.bracketing, Bracketing::Bracketed);
        assert!(a.s_lo < 0.01 && a.s_hi >= 0.01);
        assert!(a.all_converged);
    }

    #[test]
    fn decoupled_threshold_ignores_awareness_rate() {
        let net = er_net(300, 5);
        let init = SeedRule::single(2).choose(&net, None).unwrap();
        let q = ThresholdQuery::default();
        let with = |beta_a| ModelParams {
            beta_a,
            gamma: 1.0,
            ..base()
        };
        let t0 = epidemic_threshold(&net, &with(0.0), &init, &q).unwrap().value;
        let t8 = epidemic_threshold(&net, &with(0.8), &init, &q).unwrap().value;
        assert!((t0 - t8).abs() <= 2.0 * q.bisection_tol, "{t0} vs {t8}");
    }

    #[test]
    fn no_transmission_needs_no_immunization() {
        let net = er_net(200, 1);
        let p = ModelParams { beta_b: 0.0, ..base() };
        let search = ImmunizationSearch::new(Strategy::Random, 4, SeedRule::single(4));
        let est = immunization_threshold(&net, &p, &search, &ThresholdQuery::default()).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.bracketing, Bracketing::NoOutbreakAnywhere);
    }

    #[test]
    fn star_hub_immunization_is_enough() {
        let n = 200;
        let net = MultiplexNetwork::new(star(n), star(n)).unwrap();
        let p = ModelParams {
            beta_b: 1.0,
            delta_b: 1.0,
            ..base()
        };
        let search = ImmunizationSearch::new(Strategy::Targeted, 0, SeedRule::single(0));
        let est = immunization_threshold(&net, &p, &search, &ThresholdQuery::default()).unwrap();
        assert_eq!(est.value, 1.0 / n as f64);
        assert_eq!(est.bracketing, Bracketing::Bracketed);
        // direct check
        let (s, _) = immunized_outbreak_size(&net, &p, &search, 1).unwrap();
        assert_eq!(s, 1.0 / n as f64);
    }

    #[test]
    fn unsuppressible_outbreak_reports_one() {
        let n = 50;
        let net = MultiplexNetwork::new(star(n), star(n)).unwrap();
        let p = ModelParams {
            beta_b: 1.0,
            ..base()
        };
        let search = ImmunizationSearch::new(Strategy::Targeted, 0, SeedRule::single(0));
        // with θ below 1/N even the lone seed counts as an outbreak
        let q = ThresholdQuery {
            criterion: 0.5 / n as f64,
            ..Default::default()
        };
        let est = immunization_threshold(&net, &p, &search, &q).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.bracketing, Bracketing::OutbreakEverywhere);
    }

    #[test]
    fn small_phase_diagram() {
        let net = er_net(200, 8);
        let d = sweep_phase_diagram(
            &net,
            &Axis::new(Param::BetaA, vec![0.0, 1.0]),
            &Axis::new(Param::BetaB, vec![0.0, 1.0]),
            &base(),
            &SeedRule::single(0),
            &CellQuantity::OutbreakSize,
        )
        .unwrap();
        assert_eq!(d.cells.len(), 4);
        for i in 0..2 {
            assert!((d.cell(i, 0).value - 1.0 / 200.0).abs() < 1e-15);
            assert!(d.cell(i, 1).value > d.cell(i, 0).value);
            assert!(d.cell(i, 1).converged);
        }
        assert_eq!(d.unconverged(), 0);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("axis1,axis2,value,converged\n0,0,0.005"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn sweep_rejects_bad_axes() {
        let net = er_net(50, 8);
        let seeds = SeedRule::single(0);
        let a = Axis::new(Param::BetaA, vec![0.0]);
        let bad = Axis::new(Param::Gamma, vec![1.5]);
        assert!(sweep_phase_diagram(&net, &a, &bad, &base(), &seeds, &CellQuantity::OutbreakSize).is_err());
        assert!(sweep_phase_diagram(&net, &a, &a, &base(), &seeds, &CellQuantity::OutbreakSize).is_err());
        let b = Axis::new(Param::BetaB, vec![0.5]);
        let q = CellQuantity::EpidemicThreshold(ThresholdQuery::default());
        assert!(sweep_phase_diagram(&net, &a, &b, &base(), &seeds, &q).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let a = Axis::linspace(Param::Gamma, 0.0, 1.0, 21);
        assert_eq!(a.values.len(), 21);
        assert_eq!(a.values[0], 0.0);
        assert_eq!(a.values[20], 1.0);
        assert_eq!(a.values[10], 0.5);
        assert_eq!("kappa".parse::<Param>().unwrap(), Param::Kappa);
        assert!("zeta".parse::<Param>().is_err());
    }
}
