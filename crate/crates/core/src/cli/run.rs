//! Experiment orchestration: build networks, run the requested analysis,
//! render CSV outputs and the metadata sidecar, write them atomically.

use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::analysis::{
    epidemic_threshold, immunization_threshold, sweep_phase_diagram, AnalysisError, Axis, Cell,
    CellQuantity, ImmunizationSearch, Param, ThresholdEstimate,
};
use crate::engine::{
    apply_immunization, run_to_steady_state, EngineError, ImmunizationPlan, InitialCondition,
    ModelParams, SeedRule,
};
use crate::network::{build_multiplex, GraphSpec, MultiplexNetwork, NetworkError, Topology};
use crate::oracle::{run_ensemble, Ensemble};
use crate::seeding::{derive, stream};

use super::config::{
    AxisParam, ConfigError, ExperimentConfig, ExperimentKind, LayerConfig, LayerSource,
    QuantityKind,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        fn engine(e: &EngineError) -> i32 {
            match e {
                EngineError::InvalidParameter { .. }
                | EngineError::InvalidInitial(_)
                | EngineError::InvalidImmunization(_) => EXIT_VALIDATION,
                _ => EXIT_RUNTIME,
            }
        }
        match self {
            RunError::Config(_) => EXIT_VALIDATION,
            RunError::Network(NetworkError::Config(_)) => EXIT_VALIDATION,
            RunError::Network(_) => EXIT_RUNTIME,
            RunError::Engine(e) => engine(e),
            RunError::Analysis(AnalysisError::Engine(e)) => engine(e),
            RunError::Analysis(AnalysisError::InvalidQuery(_)) => EXIT_VALIDATION,
            RunError::Analysis(AnalysisError::NonMonotone { .. }) => EXIT_RUNTIME,
            RunError::Io { .. } => EXIT_RUNTIME,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputFile {
    pub name: String,
    pub bytes: Vec<u8>,
}

/// Everything an experiment produced, before it touches the disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    /// Data files followed by the `.meta` sidecar.
    pub outputs: Vec<OutputFile>,
    pub warnings: Vec<String>,
    /// Runs, ensemble members or grid cells that hit `max_steps`.
    pub unconverged: usize,
}

/// Sub-seeds derived from the master seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedSeeds {
    pub layer_a: u64,
    pub layer_b: u64,
    pub infection: u64,
    pub immunization: u64,
    pub monte_carlo: u64,
}

impl DerivedSeeds {
    pub fn of(cfg: &ExperimentConfig) -> Self {
        let m = cfg.master_seed;
        Self {
            layer_a: cfg.layer_a.seed.unwrap_or_else(|| derive(m, stream::LAYER_A)),
            layer_b: cfg.layer_b.seed.unwrap_or_else(|| derive(m, stream::LAYER_B)),
            infection: derive(m, stream::INFECTION_SEEDS),
            immunization: derive(m, stream::IMMUNIZATION),
            monte_carlo: derive(m, stream::MONTE_CARLO),
        }
    }
}

fn layer_spec(cfg: &ExperimentConfig, layer: &LayerConfig, seed: u64, degree: Option<f64>) -> GraphSpec {
    let topology = match &layer.source {
        LayerSource::ErdosRenyi => Topology::ErdosRenyi,
        LayerSource::BarabasiAlbert => Topology::BarabasiAlbert,
        LayerSource::EdgeList(p) => Topology::EdgeListFile(p.clone()),
    };
    GraphSpec {
        topology,
        n: cfg.n,
        mean_degree: degree.unwrap_or(layer.mean_degree),
        seed,
    }
}

/// Build the multiplex network of `cfg`, optionally forcing the mean degree
/// of both layers.
pub fn build_network(cfg: &ExperimentConfig, degree: Option<f64>) -> Result<MultiplexNetwork, NetworkError> {
    let seeds = DerivedSeeds::of(cfg);
    build_multiplex(
        &layer_spec(cfg, &cfg.layer_a, seeds.layer_a, degree),
        &layer_spec(cfg, &cfg.layer_b, seeds.layer_b, degree),
    )
}

fn seed_rule(cfg: &ExperimentConfig) -> SeedRule {
    SeedRule {
        count: cfg.effective_seed_count(),
        aware: cfg.seed_aware,
        seed: DerivedSeeds::of(cfg).infection,
    }
}

fn plan_for(cfg: &ExperimentConfig, net: &MultiplexNetwork) -> Result<Option<ImmunizationPlan>, EngineError> {
    if cfg.v <= 0.0 {
        return Ok(None);
    }
    let seed = derive(DerivedSeeds::of(cfg).immunization, 0);
    apply_immunization(net, cfg.strategy, cfg.v, seed).map(Some)
}

fn initial_for(
    cfg: &ExperimentConfig,
    net: &MultiplexNetwork,
    plan: Option<&ImmunizationPlan>,
) -> Result<InitialCondition, EngineError> {
    match &cfg.seed_nodes {
        Some(nodes) => Ok(InitialCondition {
            seed_nodes: nodes.clone(),
            seed_aware: cfg.seed_aware,
        }),
        None => seed_rule(cfg).choose(net, plan),
    }
}

fn search_for(cfg: &ExperimentConfig) -> ImmunizationSearch {
    ImmunizationSearch {
        strategy: cfg.strategy,
        draws: cfg.plan_draws,
        plan_seed: DerivedSeeds::of(cfg).immunization,
        seeds: seed_rule(cfg),
    }
}

struct Outputs {
    files: Vec<OutputFile>,
    warnings: Vec<String>,
    unconverged: usize,
    networks: Vec<(String, MultiplexNetwork)>,
}

impl Outputs {
    fn file(&mut self, name: String, bytes: Vec<u8>) {
        self.files.push(OutputFile { name, bytes });
    }
}

fn csv(header: &str, rows: &[String]) -> Vec<u8> {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(header);
    out.push('\n');
    for r in rows {
        out.push_str(r);
        out.push('\n');
    }
    out.into_bytes()
}

fn threshold_row(est: &ThresholdEstimate) -> String {
    format!(
        "{},{},{},{},{},{},{},{}",
        est.value, est.lo, est.hi, est.s_lo, est.s_hi, est.bracketing, est.probes, est.all_converged
    )
}

fn ensemble_summary_row(e: &Ensemble) -> String {
    let s = &e.summary;
    format!(
        "{},{},{},{},{},{},{},{},{}",
        s.runs,
        s.s_b_mean,
        s.s_b_std,
        s.s_a_mean,
        s.s_a_std,
        s.fraction_extinct,
        s.extinction_cutoff,
        s.s_b_mean_outbreaks,
        s.unfinished_runs
    )
}

fn ensemble_runs_csv(e: &Ensemble) -> Vec<u8> {
    let mut buf = Vec::new();
    e.write_csv(&mut buf).expect("writing to memory");
    buf
}

fn note_ensemble(out: &mut Outputs, e: &Ensemble) {
    if e.summary.unfinished_runs > 0 {
        out.unconverged += e.summary.unfinished_runs;
        out.warnings.push(format!(
            "{} of {} Monte Carlo runs stopped at max_steps with infectious nodes left",
            e.summary.unfinished_runs, e.summary.runs
        ));
    }
}

fn note_unconverged_run(out: &mut Outputs, what: &str, steps: usize) {
    out.unconverged += 1;
    out.warnings.push(format!("{what} did not converge within {steps} steps"));
}

/// Run `cfg` and render all outputs in memory.
pub fn compute(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    cfg.validate().map_err(|(key, message)| ConfigError {
        origin: super::config::Origin::Default,
        key: key.to_string(),
        message,
    })?;
    let mut out = Outputs {
        files: Vec::new(),
        warnings: Vec::new(),
        unconverged: 0,
        networks: Vec::new(),
    };
    let name = &cfg.name;
    let params = &cfg.params;
    match cfg.kind {
        ExperimentKind::SingleRun => {
            let net = build_network(cfg, None)?;
            let plan = plan_for(cfg, &net)?;
            let init = initial_for(cfg, &net, plan.as_ref())?;
            let (summary, dist) = run_to_steady_state(&net, params, &init, plan.as_ref())?;
            if !summary.converged {
                note_unconverged_run(&mut out, "steady-state run", summary.steps_taken);
            }
            out.file(
                format!("{name}.csv"),
                csv(
                    "s_a,s_b,steps,converged,residual",
                    &[format!(
                        "{},{},{},{},{}",
                        summary.s_a,
                        summary.s_b,
                        summary.steps_taken,
                        summary.converged,
                        summary.residual_at_stop
                    )],
                ),
            );
            if cfg.snapshot {
                let mut buf = Vec::new();
                dist.write_csv(&mut buf).expect("writing to memory");
                out.file(format!("{name}.distribution.csv"), buf);
            }
            out.networks.push((String::new(), net));
        }
        ExperimentKind::Ensemble => {
            let net = build_network(cfg, None)?;
            let plan = plan_for(cfg, &net)?;
            let init = initial_for(cfg, &net, plan.as_ref())?;
            let seeds = DerivedSeeds::of(cfg);
            let e = run_ensemble(&net, params, &init, plan.as_ref(), cfg.runs, seeds.monte_carlo)?;
            note_ensemble(&mut out, &e);
            out.file(format!("{name}.csv"), ensemble_runs_csv(&e));
            out.file(
                format!("{name}.summary.csv"),
                csv(
                    "runs,s_b_mean,s_b_std,s_a_mean,s_a_std,fraction_extinct,extinction_cutoff,s_b_mean_outbreaks,unfinished_runs",
                    &[ensemble_summary_row(&e)],
                ),
            );
            out.networks.push((String::new(), net));
        }
        ExperimentKind::CrossValidate => {
            let net = build_network(cfg, None)?;
            let plan = plan_for(cfg, &net)?;
            let init = initial_for(cfg, &net, plan.as_ref())?;
            let (mmca, _) = run_to_steady_state(&net, params, &init, plan.as_ref())?;
            if !mmca.converged {
                note_unconverged_run(&mut out, "steady-state run", mmca.steps_taken);
            }
            let seeds = DerivedSeeds::of(cfg);
            let e = run_ensemble(&net, params, &init, plan.as_ref(), cfg.runs, seeds.monte_carlo)?;
            note_ensemble(&mut out, &e);
            let s = &e.summary;
            out.file(
                format!("{name}.csv"),
                csv(
                    "s_b_mmca,s_a_mmca,s_b_mc_mean,s_b_mc_std,s_a_mc_mean,s_a_mc_std,fraction_extinct,s_b_mc_mean_outbreaks,gap",
                    &[format!(
                        "{},{},{},{},{},{},{},{},{}",
                        mmca.s_b,
                        mmca.s_a,
                        s.s_b_mean,
                        s.s_b_std,
                        s.s_a_mean,
                        s.s_a_std,
                        s.fraction_extinct,
                        s.s_b_mean_outbreaks,
                        mmca.s_b - s.s_b_mean
                    )],
                ),
            );
            out.file(format!("{name}.runs.csv"), ensemble_runs_csv(&e));
            out.networks.push((String::new(), net));
        }
        ExperimentKind::Threshold => {
            let net = build_network(cfg, None)?;
            let init = initial_for(cfg, &net, None)?;
            let est = epidemic_threshold(&net, params, &init, &cfg.query)?;
            if !est.all_converged {
                note_unconverged_run(&mut out, "a threshold probe", params.max_steps);
            }
            out.file(
                format!("{name}.csv"),
                csv(
                    "beta_bc,lo,hi,s_lo,s_hi,bracketing,probes,converged",
                    &[threshold_row(&est)],
                ),
            );
            out.networks.push((String::new(), net));
        }
        ExperimentKind::ImmunizationThreshold => {
            let net = build_network(cfg, None)?;
            let est = immunization_threshold(&net, params, &search_for(cfg), &cfg.query)?;
            if !est.all_converged {
                note_unconverged_run(&mut out, "an immunization probe", params.max_steps);
            }
            if est.monotonicity_violations > 0 {
                out.warnings.push(format!(
                    "{} probes inconsistent with a monotone outbreak size",
                    est.monotonicity_violations
                ));
            }
            out.file(
                format!("{name}.csv"),
                csv(
                    "v_c,lo,hi,s_lo,s_hi,bracketing,probes,converged,monotonicity_violations",
                    &[format!("{},{}", threshold_row(&est), est.monotonicity_violations)],
                ),
            );
            out.networks.push((String::new(), net));
        }
        ExperimentKind::PhaseDiagram => phase_diagram(cfg, &mut out)?,
    }
    let meta = sidecar(cfg, &out);
    out.file(format!("{name}.meta"), meta.into_bytes());
    Ok(Report {
        outputs: out.files,
        warnings: out.warnings,
        unconverged: out.unconverged,
    })
}

fn cell_quantity(cfg: &ExperimentConfig) -> CellQuantity {
    match cfg.quantity {
        QuantityKind::OutbreakSize => CellQuantity::OutbreakSize,
        QuantityKind::EpidemicThreshold => CellQuantity::EpidemicThreshold(cfg.query.clone()),
        QuantityKind::ImmunizationThreshold => CellQuantity::ImmunizationThreshold {
            search: search_for(cfg),
            query: cfg.query.clone(),
        },
    }
}

fn param_value(params: &ModelParams, p: Param) -> f64 {
    match p {
        Param::BetaA => params.beta_a,
        Param::BetaB => params.beta_b,
        Param::DeltaA | Param::Delta => params.delta_a,
        Param::DeltaB => params.delta_b,
        Param::Gamma => params.gamma,
        Param::Kappa => params.kappa,
    }
}

fn phase_diagram(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<(), RunError> {
    let xs = cfg.axis1.values.values();
    let ys = cfg.axis2.values.values();
    let quantity = cell_quantity(cfg);
    let rule = seed_rule(cfg);
    // Row-major over (axis1, axis2).
    let cells: Vec<Cell> = match (cfg.axis1.param, cfg.axis2.param) {
        (AxisParam::Model(p1), AxisParam::Model(p2)) => {
            let net = build_network(cfg, None)?;
            let pd = sweep_phase_diagram(
                &net,
                &Axis::new(p1, xs.clone()),
                &Axis::new(p2, ys.clone()),
                &cfg.params,
                &rule,
                &quantity,
            )?;
            out.networks.push((String::new(), net));
            pd.cells
        }
        (AxisParam::MeanDegree, AxisParam::MeanDegree) => unreachable!("rejected by validation"),
        (a1, a2) => {
            let degree_first = a1 == AxisParam::MeanDegree;
            let (degrees, model, model_values) = match (a1, a2) {
                (AxisParam::MeanDegree, AxisParam::Model(p)) => (&xs, p, &ys),
                (AxisParam::Model(p), _) => (&ys, p, &xs),
                _ => unreachable!(),
            };
            // A one-point axis at the current value keeps the sweep 2-D
            // without changing any parameter.
            let fixed = if model == Param::Kappa { Param::Gamma } else { Param::Kappa };
            let fixed_axis = Axis::new(fixed, vec![param_value(&cfg.params, fixed)]);
            let model_axis = Axis::new(model, model_values.clone());
            let mut columns = Vec::with_capacity(degrees.len());
            for &k in degrees {
                let net = build_network(cfg, Some(k))?;
                let pd =
                    sweep_phase_diagram(&net, &model_axis, &fixed_axis, &cfg.params, &rule, &quantity)?;
                out.networks.push((format!("mean_degree {k}"), net));
                columns.push(pd.cells);
            }
            let mut cells = Vec::with_capacity(xs.len() * ys.len());
            for i in 0..xs.len() {
                for j in 0..ys.len() {
                    let (d, m) = if degree_first { (i, j) } else { (j, i) };
                    cells.push(columns[d][m].clone());
                }
            }
            cells
        }
    };
    let mut rows = Vec::with_capacity(cells.len());
    for (i, x) in xs.iter().enumerate() {
        for (j, y) in ys.iter().enumerate() {
            let c = &cells[i * ys.len() + j];
            if !c.converged {
                out.unconverged += 1;
                out.warnings.push(format!(
                    "cell {}={x}, {}={y} did not converge",
                    cfg.axis1.param, cfg.axis2.param
                ));
            }
            rows.push(format!("{x},{y},{},{}", c.value, c.converged));
        }
    }
    out.file(format!("{}.csv", cfg.name), csv("axis1,axis2,value,converged", &rows));
    Ok(())
}

/// The sidecar is a complete configuration minus `output_dir`, so running
/// it regenerates the data files; comment lines record derived seeds and
/// network statistics.
fn sidecar(cfg: &ExperimentConfig, out: &Outputs) -> String {
    let seeds = DerivedSeeds::of(cfg);
    let mut s = String::new();
    s.push_str(&format!(
        "# {} {} experiment record\n",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    ));
    s.push_str("# rerun with: competing-sir run --config <this file>\n");
    let files: Vec<&str> = out.files.iter().map(|f| f.name.as_str()).collect();
    s.push_str(&format!("# outputs: {}\n", files.join(" ")));
    s.push_str(&format!(
        "# seeds: layer_a {} layer_b {} infection {} immunization {} monte_carlo {}\n",
        seeds.layer_a, seeds.layer_b, seeds.infection, seeds.immunization, seeds.monte_carlo
    ));
    s.push_str("# seed rule: derive(base, stream) = splitmix64(base + (stream + 1) * 0x9E3779B97F4A7C15)\n");
    if cfg.kind == ExperimentKind::PhaseDiagram {
        s.push_str(&format!(
            "# grid: {} = [{}]\n",
            cfg.axis1.param,
            join(&cfg.axis1.values.values())
        ));
        s.push_str(&format!(
            "# grid: {} = [{}]\n",
            cfg.axis2.param,
            join(&cfg.axis2.values.values())
        ));
    }
    for (label, net) in &out.networks {
        let prefix = if label.is_empty() {
            String::new()
        } else {
            format!("{label}: ")
        };
        s.push_str(&format!(
            "# network {prefix}layer_a {} edges (mean degree {}), layer_b {} edges (mean degree {})\n",
            net.layer_a().edge_count(),
            net.layer_a().mean_degree(),
            net.layer_b().edge_count(),
            net.layer_b().mean_degree()
        ));
    }
    // The output location is not part of the result.
    for line in cfg.to_text().lines().filter(|l| !l.starts_with("output_dir ")) {
        s.push_str(line);
        s.push('\n');
    }
    s
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// Write every output into `dir` through a temporary file and a rename.
pub fn write_outputs(dir: &Path, outputs: &[OutputFile]) -> Result<Vec<PathBuf>, RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut written = Vec::with_capacity(outputs.len());
    for f in outputs {
        let target = dir.join(&f.name);
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(dir))?;
        tmp.write_all(&f.bytes).map_err(io(&target))?;
        tmp.as_file().sync_all().map_err(io(&target))?;
        tmp.persist(&target).map_err(|e| RunError::Io {
            path: target.clone(),
            source: e.error,
        })?;
        written.push(target);
    }
    Ok(written)
}

/// Compute `cfg` and write its outputs to `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Report, Vec<PathBuf>), RunError> {
    let report = compute(cfg)?;
    let written = write_outputs(&cfg.output_dir, &report.outputs)?;
    Ok((report, written))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::config::{AxisConfig, AxisValues};

    fn small(kind: ExperimentKind) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(kind);
        cfg.n = 120;
        cfg.runs = 20;
        cfg.plan_draws = 2;
        cfg.query.bisection_tol = 0.02;
        cfg.axis1 = AxisConfig {
            param: AxisParam::Model(Param::BetaA),
            values: AxisValues::List(vec![0.0, 1.0]),
        };
        cfg.axis2 = AxisConfig {
            param: AxisParam::Model(Param::BetaB),
            values: AxisValues::List(vec![0.0, 1.0]),
        };
        cfg
    }

    fn text(report: &Report, name: &str) -> String {
        let f = report.outputs.iter().find(|f| f.name == name).expect(name);
        String::from_utf8(f.bytes.clone()).unwrap()
    }

    #[test]
    fn every_kind_produces_csv_and_sidecar() {
        for kind in ExperimentKind::ALL {
            let cfg = small(kind);
            let report = compute(&cfg).unwrap_or_else(|e| panic!("{}: {e}", kind.name()));
            let last = report.outputs.last().unwrap();
            assert_eq!(last.name, format!("{}.meta", kind.name()));
            let data = text(&report, &format!("{}.csv", kind.name()));
            assert!(data.ends_with('\n') && !data.contains('\r'));
            assert!(data.lines().count() >= 2, "{}", kind.name());
        }
    }

    #[test]
    fn sidecar_reproduces_outputs() {
        let cfg = small(ExperimentKind::PhaseDiagram);
        let report = compute(&cfg).unwrap();
        let meta = text(&report, "phase-diagram.meta");
        let again = ExperimentConfig::parse(&meta).unwrap();
        assert_eq!(again, cfg);
        assert_eq!(compute(&again).unwrap(), report);
    }

    #[test]
    fn phase_diagram_zero_beta_b_column_is_seed_mass() {
        let report = compute(&small(ExperimentKind::PhaseDiagram)).unwrap();
        let data = text(&report, "phase-diagram.csv");
        let rows: Vec<Vec<&str>> = data.lines().skip(1).map(|l| l.split(',').collect()).collect();
        assert_eq!(rows.len(), 4);
        for r in rows.iter().filter(|r| r[1] == "0") {
            assert!((r[2].parse::<f64>().unwrap() - 1.0 / 120.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mean_degree_axis_matches_direct_networks() {
        let mut cfg = small(ExperimentKind::PhaseDiagram);
        cfg.quantity = QuantityKind::EpidemicThreshold;
        cfg.axis1 = AxisConfig {
            param: AxisParam::MeanDegree,
            values: AxisValues::List(vec![3.0, 5.0]),
        };
        cfg.axis2 = AxisConfig {
            param: AxisParam::Model(Param::Gamma),
            values: AxisValues::List(vec![0.0, 1.0]),
        };
        let report = compute(&cfg).unwrap();
        let data = text(&report, "phase-diagram.csv");
        let rows: Vec<Vec<String>> = data
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect();
        assert_eq!(rows.len(), 4);
        for r in &rows {
            let k: f64 = r[0].parse().unwrap();
            let g: f64 = r[1].parse().unwrap();
            let net = build_network(&cfg, Some(k)).unwrap();
            let init = seed_rule(&cfg).choose(&net, None).unwrap();
            let p = ModelParams {
                gamma: g,
                ..cfg.params.clone()
            };
            let est = epidemic_threshold(&net, &p, &init, &cfg.query).unwrap();
            assert_eq!(r[2], est.value.to_string());
        }
    }

    #[test]
    fn validation_errors_map_to_exit_one() {
        let mut cfg = small(ExperimentKind::SingleRun);
        cfg.params.beta_a = 1.5;
        let err = compute(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_VALIDATION);
        assert!(err.to_string().contains("beta_a"));
    }

    #[test]
    fn missing_edge_list_is_a_runtime_error() {
        let mut cfg = small(ExperimentKind::SingleRun);
        cfg.layer_a.source = LayerSource::EdgeList("/nonexistent/graph.txt".into());
        let err = compute(&cfg).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_RUNTIME);
    }

    #[test]
    fn unconverged_runs_are_reported() {
        let mut cfg = small(ExperimentKind::SingleRun);
        cfg.params.delta_b = 0.0;
        cfg.params.max_steps = 5;
        let report = compute(&cfg).unwrap();
        assert_eq!(report.unconverged, 1);
        assert_eq!(report.warnings.len(), 1);
        assert!(text(&report, "single-run.csv").contains(",5,false,"));
    }

    #[test]
    fn snapshot_is_optional() {
        let mut cfg = small(ExperimentKind::SingleRun);
        cfg.snapshot = true;
        let report = compute(&cfg).unwrap();
        let snap = text(&report, "single-run.distribution.csv");
        assert_eq!(snap.lines().count(), 1 + 120 * 9);
    }

    #[test]
    fn atomic_write_replaces_files() {
        let dir = tempfile::tempdir().unwrap();
        let files = vec![OutputFile {
            name: "a.csv".into(),
            bytes: b"x\n1\n".to_vec(),
        }];
        write_outputs(dir.path(), &files).unwrap();
        let files2 = vec![OutputFile {
            name: "a.csv".into(),
            bytes: b"x\n2\n".to_vec(),
        }];
        let written = write_outputs(dir.path(), &files2).unwrap();
        assert_eq!(std::fs::read(&written[0]).unwrap(), b"x\n2\n");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
