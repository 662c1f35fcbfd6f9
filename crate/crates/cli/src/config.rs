//! The run configuration: one flat TOML document. Every field has a default
//! and the resolved document is written next to the outputs.

use std::path::{Path, PathBuf};

use graphon_core::cut::{Alignment, CutMode, DistanceOptions};
use graphon_core::spectral::{EdgeScale, EigenOptions};
use graphon_core::GraphonSpec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    Exact,
    Heuristic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlignmentName {
    Identity,
    Exact,
    DegreeSort,
    LocalSearch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphonName {
    ConstantBox,
    RankOneExp,
    CelebrityLimit,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub out: PathBuf,

    // Graphon for `sample`. `p`, `side` apply to constant_box; `amplitude`,
    // `decay` to rank_one_exp.
    pub graphon: GraphonName,
    pub p: f64,
    pub side: f64,
    pub amplitude: f64,
    pub decay: f64,
    pub t_schedule: Vec<f64>,
    pub n_schedule: Vec<usize>,
    /// Tolerance per row of the subsequence search; empty means 1 / (m + 1).
    pub tolerances: Vec<f64>,
    pub restrict_k: usize,

    pub cut_mode: ModeName,
    pub cut_restarts: usize,
    pub alignment: AlignmentName,
    pub local_search_passes: usize,
    /// Grid used to compare graphons without a finite step form.
    pub discretize_k: usize,
    pub discretize_extent: f64,

    /// Edge-list path or generator (`complete:N`, `path:N`, `star:L`,
    /// `empty:N`, `celebrity:N:ALPHA`); cutdist also takes graphon names.
    pub input: String,
    pub second: String,
    /// Drops the last `epsilon` fraction of vertices before growth.
    pub epsilon: f64,

    pub growth_batch: usize,
    pub growth_steps: usize,
    pub drop_isolated: bool,
    pub t_set: Vec<i64>,
    pub tail_from: usize,
    pub average_window: usize,
    pub edge_scale: EdgeScale,
    pub eig_tol: f64,
    pub dense_threshold: usize,
    pub lanczos_basis: usize,
    pub lanczos_max_restarts: usize,

    pub filter_degree: usize,
    pub top_fraction: f64,
    /// Diffusion filter coefficients; empty draws them uniformly from [0, 1].
    pub coefficients: Vec<f64>,
    pub subgraph_count: usize,
    pub ratio_tail_from: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let eig = EigenOptions::default();
        Self {
            seed: 0,
            out: PathBuf::from("out"),
            graphon: GraphonName::RankOneExp,
            p: 1.0,
            side: 1.0,
            amplitude: 1.0,
            decay: 1.0,
            t_schedule: vec![2.0, 4.0, 8.0],
            n_schedule: vec![500, 2000],
            tolerances: vec![],
            restrict_k: 128,
            cut_mode: ModeName::Heuristic,
            cut_restarts: 32,
            alignment: AlignmentName::DegreeSort,
            local_search_passes: 4,
            discretize_k: 256,
            discretize_extent: 16.0,
            input: String::new(),
            second: String::new(),
            epsilon: 0.0,
            growth_batch: 200,
            growth_steps: 10,
            drop_isolated: true,
            t_set: vec![1, 2, 3, -1, -2, -3],
            tail_from: 5,
            average_window: 5,
            edge_scale: EdgeScale::TwoE,
            eig_tol: eig.tol,
            dense_threshold: eig.dense_threshold,
            lanczos_basis: eig.basis,
            lanczos_max_restarts: eig.max_restarts,
            filter_degree: 3,
            top_fraction: 0.10,
            coefficients: vec![],
            subgraph_count: 100,
            ratio_tail_from: 84,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn graphon_spec(&self) -> Result<GraphonSpec<f64>> {
        Ok(match self.graphon {
            GraphonName::ConstantBox => GraphonSpec::constant_box(self.p, self.side)?,
            GraphonName::RankOneExp => GraphonSpec::rank_one_exp(self.amplitude, self.decay)?,
            GraphonName::CelebrityLimit => GraphonSpec::CelebrityLimit,
            GraphonName::Zero => GraphonSpec::Step(graphon_core::StepGraphon::zero(1, 1.0)?),
        })
    }

    pub fn cut(&self) -> CutMode {
        match self.cut_mode {
            ModeName::Exact => CutMode::Exact,
            ModeName::Heuristic => CutMode::Heuristic {
                restarts: self.cut_restarts,
                seed: self.seed,
            },
        }
    }

    pub fn distance_options(&self) -> DistanceOptions {
        let alignment = match self.alignment {
            AlignmentName::Identity => Alignment::Identity,
            AlignmentName::Exact => Alignment::Exact,
            AlignmentName::DegreeSort => Alignment::DegreeSort,
            AlignmentName::LocalSearch => Alignment::LocalSearch {
                passes: self.local_search_passes,
            },
        };
        DistanceOptions {
            alignment,
            cut: self.cut(),
        }
    }

    pub fn eigen(&self) -> EigenOptions {
        EigenOptions {
            tol: self.eig_tol,
            dense_threshold: self.dense_threshold,
            basis: self.lanczos_basis,
            max_restarts: self.lanczos_max_restarts,
            ..EigenOptions::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_toml() {
        let mut c = RunConfig::default();
        c.coefficients = vec![0.1, 0.25, 1.0 / 3.0];
        c.tolerances = vec![0.5];
        c.edge_scale = EdgeScale::E;
        c.cut_mode = ModeName::Exact;
        c.eig_tol = 1e-11;
        assert_eq!(RunConfig::parse(&c.to_toml()).unwrap(), c);
        assert_eq!(RunConfig::parse("").unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(matches!(RunConfig::parse("sed = 3"), Err(CliError::Config(_))));
        assert!(RunConfig::parse("edge_scale = \"3E\"").is_err());
    }
}
