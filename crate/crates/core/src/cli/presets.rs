//! Named configurations reproducing the published figure designs.
//!
//! All presets share ER layers with N = 1000, ⟨k⟩ = 4, δ_A = δ_B = 1,
//! γ = κ = β_A = 0.5 and master seed 2024 unless the design varies the
//! quantity. Axes over rates use 21 points on [0, 1].

use crate::analysis::Param;
use crate::engine::Strategy;

use super::config::{AxisConfig, AxisParam, AxisValues, ExperimentConfig, ExperimentKind, QuantityKind};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: ExperimentConfig,
}

fn unit_axis(param: Param) -> AxisConfig {
    AxisConfig {
        param: AxisParam::Model(param),
        values: AxisValues::Range {
            lo: 0.0,
            hi: 1.0,
            points: 21,
        },
    }
}

fn list_axis(param: AxisParam, values: &[f64]) -> AxisConfig {
    AxisConfig {
        param,
        values: AxisValues::List(values.to_vec()),
    }
}

fn sweep(name: &str, quantity: QuantityKind, axis1: AxisConfig, axis2: AxisConfig) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(ExperimentKind::PhaseDiagram);
    cfg.name = name.to_string();
    cfg.output_dir = "out".into();
    cfg.quantity = quantity;
    cfg.axis1 = axis1;
    cfg.axis2 = axis2;
    cfg
}

const DEGREES: [f64; 3] = [4.0, 6.0, 8.0];

/// Every preset, in a fixed order.
pub fn preset_experiments() -> Vec<Preset> {
    use QuantityKind::*;
    let degrees = || list_axis(AxisParam::MeanDegree, &DEGREES);
    let mut fig9b = sweep(
        "fig9b",
        ImmunizationThreshold,
        unit_axis(Param::BetaA),
        unit_axis(Param::BetaB),
    );
    fig9b.strategy = Strategy::Targeted;
    vec![
        Preset {
            name: "fig3a",
            description: "epidemic threshold vs beta_a for mean degrees 4, 6, 8",
            config: sweep("fig3a", EpidemicThreshold, unit_axis(Param::BetaA), degrees()),
        },
        Preset {
            name: "fig3b",
            description: "epidemic threshold vs beta_a for recovery rates delta_a = delta_b in {0.5, 0.75, 1}",
            config: sweep(
                "fig3b",
                EpidemicThreshold,
                unit_axis(Param::BetaA),
                list_axis(AxisParam::Model(Param::Delta), &[0.5, 0.75, 1.0]),
            ),
        },
        Preset {
            name: "fig4",
            description: "outbreak size over (beta_a, beta_b)",
            config: sweep("fig4", OutbreakSize, unit_axis(Param::BetaA), unit_axis(Param::BetaB)),
        },
        Preset {
            name: "fig5a",
            description: "epidemic threshold vs gamma for mean degrees 4, 6, 8",
            config: sweep("fig5a", EpidemicThreshold, unit_axis(Param::Gamma), degrees()),
        },
        Preset {
            name: "fig5b",
            description: "epidemic threshold vs gamma for beta_a in {0.2, 0.5, 0.8}",
            config: sweep(
                "fig5b",
                EpidemicThreshold,
                unit_axis(Param::Gamma),
                list_axis(AxisParam::Model(Param::BetaA), &[0.2, 0.5, 0.8]),
            ),
        },
        Preset {
            name: "fig6",
            description: "outbreak size over (gamma, beta_b)",
            config: sweep("fig6", OutbreakSize, unit_axis(Param::Gamma), unit_axis(Param::BetaB)),
        },
        Preset {
            name: "fig7",
            description: "epidemic threshold vs kappa for mean degrees 4, 6, 8",
            config: sweep("fig7", EpidemicThreshold, unit_axis(Param::Kappa), degrees()),
        },
        Preset {
            name: "fig8",
            description: "outbreak size over (kappa, beta_b)",
            config: sweep("fig8", OutbreakSize, unit_axis(Param::Kappa), unit_axis(Param::BetaB)),
        },
        Preset {
            name: "fig9a",
            description: "random-immunization threshold over (beta_a, beta_b)",
            config: sweep(
                "fig9a",
                ImmunizationThreshold,
                unit_axis(Param::BetaA),
                unit_axis(Param::BetaB),
            ),
        },
        Preset {
            name: "fig9b",
            description: "targeted-immunization threshold over (beta_a, beta_b)",
            config: fig9b,
        },
    ]
}

pub fn preset(name: &str) -> Option<Preset> {
    preset_experiments().into_iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_stable() {
        let names: Vec<_> = preset_experiments().iter().map(|p| p.name).collect();
        assert_eq!(
            names,
            [
                "fig3a", "fig3b", "fig4", "fig5a", "fig5b", "fig6", "fig7", "fig8", "fig9a",
                "fig9b"
            ]
        );
    }

    #[test]
    fn presets_validate_and_round_trip() {
        for p in preset_experiments() {
            p.config.validate().unwrap_or_else(|e| panic!("{}: {e:?}", p.name));
            assert_eq!(p.config.name, p.name);
            let again = ExperimentConfig::parse(&p.config.to_text()).unwrap();
            assert_eq!(again, p.config, "{}", p.name);
        }
    }

    #[test]
    fn fig4_uses_caption_parameters() {
        let c = preset("fig4").unwrap().config;
        assert_eq!((c.layer_a.mean_degree, c.layer_b.mean_degree), (4.0, 4.0));
        assert_eq!((c.params.delta_a, c.params.delta_b), (1.0, 1.0));
        assert_eq!((c.params.gamma, c.params.kappa), (0.5, 0.5));
        assert_eq!(c.axis1.param, AxisParam::Model(Param::BetaA));
        assert_eq!(c.axis2.param, AxisParam::Model(Param::BetaB));
    }

    #[test]
    fn fig9_strategies() {
        let a = preset("fig9a").unwrap().config;
        let b = preset("fig9b").unwrap().config;
        assert_eq!(a.quantity, QuantityKind::ImmunizationThreshold);
        assert_eq!((a.strategy, b.strategy), (Strategy::Random, Strategy::Targeted));
        assert_eq!((a.params.gamma, a.params.kappa), (0.5, 0.5));
    }

    #[test]
    fn fig7_sweeps_kappa() {
        let c = preset("fig7").unwrap().config;
        assert_eq!(c.quantity, QuantityKind::EpidemicThreshold);
        assert_eq!(c.axis1.param, AxisParam::Model(Param::Kappa));
    }
}
