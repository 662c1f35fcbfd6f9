//! One function per subcommand. Each reads a resolved [`RunConfig`], runs
//! its pipeline and writes a [`ResultBundle`] under `config.out`.

use graphon_core::edgelist::format_edge_list;
use graphon_core::filterfit::{
    coefficient_trajectory, convergence_ratios, signed_sqrt, synthesize_diffusion, DiffusionSpec, Ratios,
};
use graphon_core::sampling::{
    extract_sparse_subsequence, grow_subgraphs, sample_double_sequence, trim_tail, GrowthSchedule,
    SubsequenceOptions,
};
use graphon_core::spectral::{fit_models, moving_scaled_averages, trajectory, trajectory_rows, FitReport};
use graphon_core::cut::stretched_cut_distance;
use graphon_core::{Graph, GraphonError};
use serde::Serialize;
use serde_json::json;

use crate::bundle::{BundleWriter, ResultBundle};
use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::input::{parse_graph, parse_input};

fn bundle(config: &RunConfig, command: &str) -> Result<BundleWriter> {
    BundleWriter::create(&config.out, command, &config.to_toml())
}

#[derive(Serialize)]
struct DensityRow {
    m: usize,
    t: f64,
    j: usize,
    n: usize,
    edges: usize,
    density: f64,
    limit: f64,
}

#[derive(Serialize)]
struct PhiRow {
    m: usize,
    t: f64,
    tolerance: f64,
    target_density: f64,
    phi_index: Option<usize>,
    phi_n: Option<usize>,
}

/// Samples `G_{m,n}` on the `(t, n)` grid, then runs the subsequence search.
/// `density` is `2|E| / n^2`; `limit` is the mean of `W` over `[0, t]^2`.
pub fn cmd_sample(config: &RunConfig) -> Result<ResultBundle> {
    let w = config.graphon_spec()?;
    let grid = sample_double_sequence(&w, &config.t_schedule, &config.n_schedule, config.seed)?;
    let options = SubsequenceOptions {
        restrict_k: config.restrict_k,
        cut: config.cut(),
        tolerances: (!config.tolerances.is_empty()).then(|| config.tolerances.clone()),
    };
    let sub = extract_sparse_subsequence(&grid, &w, &options)?;

    let mut out = bundle(config, "sample")?;
    let mut densities = vec![];
    for (m, row) in grid.cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            out.write(&format!("edges/m{m}_n{j}.txt"), format_edge_list(&cell.graph).as_bytes())?;
            densities.push(DensityRow {
                m,
                t: grid.t_schedule[m],
                j,
                n: grid.n_schedule[j],
                edges: cell.graph.edge_count(),
                density: cell.canonical_l1(),
                limit: sub.rows[m].target_density,
            });
        }
    }
    out.write_csv("densities.csv", &densities, &["m", "t", "j", "n", "edges", "density", "limit"])?;
    let phi: Vec<PhiRow> = sub
        .rows
        .iter()
        .map(|r| PhiRow {
            m: r.m,
            t: r.t_m,
            tolerance: r.tolerance,
            target_density: r.target_density,
            phi_index: r.phi,
            phi_n: r.phi.map(|j| grid.n_schedule[j]),
        })
        .collect();
    out.write_csv(
        "phi.csv",
        &phi,
        &["m", "t", "tolerance", "target_density", "phi_index", "phi_n"],
    )?;
    out.write_json("subsequence.json", &sub)?;
    out.finish()
}

/// Growth sequence, tracked eigenvalues, scaling-model fits and windowed
/// averages of one input graph.
pub fn cmd_spectra(config: &RunConfig) -> Result<ResultBundle> {
    let g = trim_tail(&parse_graph(&config.input)?, config.epsilon)?;
    let schedule = GrowthSchedule::new(config.growth_batch, config.growth_steps, config.drop_isolated)?;
    let seq: Vec<Graph> = grow_subgraphs(&g, schedule, config.seed)?
        .into_iter()
        .map(|s| s.graph)
        .collect();
    let traj = trajectory(&seq, &config.t_set, &config.eigen())?;
    let mut fits: Vec<FitReport> = vec![];
    for &t in &config.t_set {
        fits.extend(fit_models(&traj, config.tail_from, t, config.edge_scale)?);
    }
    let averages = moving_scaled_averages(&traj, config.average_window, &config.t_set)?;

    let mut out = bundle(config, "spectra")?;
    out.write_csv(
        "trajectory.csv",
        &trajectory_rows(&traj, config.edge_scale),
        &["n_index", "V", "E", "t", "lambda", "scaled_classical", "scaled_generalized"],
    )?;
    out.write_json(
        "fits.json",
        &json!({ "tail_from": config.tail_from, "edge_scale": config.edge_scale, "fits": fits }),
    )?;
    out.write_csv("averages.csv", &averages, &["index", "t", "a", "b"])?;
    out.finish()
}

/// `ceil(k n / count)` for `k = 1..=count`, deduplicated; ends at `n`.
pub fn subgraph_sizes(n: usize, count: usize) -> Vec<usize> {
    let count = count.max(1);
    let mut sizes: Vec<usize> = (1..=count).map(|k| (k * n).div_ceil(count)).filter(|&m| m > 0).collect();
    sizes.dedup();
    sizes
}

#[derive(Serialize)]
struct CoefficientRow {
    k: usize,
    m_k: usize,
    #[serde(rename = "E_k")]
    edges: usize,
    c_classical: Option<f64>,
    c_generalized: Option<f64>,
    r_classical: Option<f64>,
    r_generalized: Option<f64>,
    sqrt_classical: Option<f64>,
    sqrt_generalized: Option<f64>,
}

/// Ratios over the entries where a fit succeeded, placed back by index.
fn ratios_by_entry(values: &[Option<f64>], tail_from: usize) -> (Result<Ratios, GraphonError>, Vec<Option<f64>>) {
    let idx: Vec<usize> = (0..values.len()).filter(|&i| values[i].is_some()).collect();
    let valid: Vec<f64> = idx.iter().map(|&i| values[i].unwrap()).collect();
    let tail = tail_from.min(valid.len());
    let ratios = convergence_ratios(&valid, tail);
    let mut per = vec![None; values.len()];
    if let Ok(Ratios::Values(r)) = &ratios {
        for (w, &v) in r.iter().enumerate() {
            per[idx[w + 1]] = Some(v);
        }
    }
    (ratios, per)
}

fn ratios_json(r: &Result<Ratios, GraphonError>) -> serde_json::Value {
    match r {
        Ok(Ratios::Values(v)) => json!(v),
        Ok(Ratios::ExactConvergence) => json!("exact"),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

/// Diffusion on the input graph, leading-coefficient trajectories over nested
/// subgraphs under both scalings, and their convergence ratios.
pub fn cmd_fit_filter(config: &RunConfig) -> Result<ResultBundle> {
    let g = parse_graph(&config.input)?;
    let spec = DiffusionSpec {
        top_fraction: config.top_fraction,
        degree: config.filter_degree,
        coefficients: (!config.coefficients.is_empty()).then(|| config.coefficients.clone()),
    };
    let diffusion = synthesize_diffusion::<f64>(&g, &spec, config.seed)?;
    let sizes = subgraph_sizes(g.n(), config.subgraph_count);
    let traj = coefficient_trajectory(&g, &sizes, &diffusion, config.filter_degree, config.seed)?;
    let (rc, per_c) = ratios_by_entry(&traj.classical(), config.ratio_tail_from);
    let (rg, per_g) = ratios_by_entry(&traj.generalized(), config.ratio_tail_from);

    let rows: Vec<CoefficientRow> = traj
        .entries
        .iter()
        .enumerate()
        .map(|(i, e)| CoefficientRow {
            k: e.k,
            m_k: e.m_k,
            edges: e.edges,
            c_classical: e.classical,
            c_generalized: e.generalized,
            r_classical: per_c[i],
            r_generalized: per_g[i],
            sqrt_classical: e.classical.map(signed_sqrt),
            sqrt_generalized: e.generalized.map(signed_sqrt),
        })
        .collect();
    let failures: Vec<_> = traj
        .entries
        .iter()
        .filter_map(|e| e.error.as_ref().map(|m| json!({ "k": e.k, "error": m })))
        .collect();

    let mut out = bundle(config, "fit-filter")?;
    out.write_csv(
        "coefficients.csv",
        &rows,
        &[
            "k",
            "m_k",
            "E_k",
            "c_classical",
            "c_generalized",
            "r_classical",
            "r_generalized",
            "sqrt_classical",
            "sqrt_generalized",
        ],
    )?;
    out.write_json(
        "ratios.json",
        &json!({
            "tail_from": config.ratio_tail_from,
            "classical": ratios_json(&rc),
            "generalized": ratios_json(&rg),
        }),
    )?;
    out.write_json(
        "filter.json",
        &json!({
            "degree": config.filter_degree,
            "coefficients": diffusion.coefficients,
            "sources": diffusion.sources.len(),
            "sizes": sizes,
            "failures": failures,
        }),
    )?;
    out.finish()
}

/// Stretched cut distance between two graphs or graphons.
pub fn cmd_cutdist(config: &RunConfig) -> Result<ResultBundle> {
    if config.input.is_empty() || config.second.is_empty() {
        return Err(CliError::Usage("cutdist needs two inputs".into()));
    }
    let a = parse_input(&config.input)?.to_spec()?;
    let b = parse_input(&config.second)?.to_spec()?;
    let result = stretched_cut_distance(
        &a,
        &b,
        config.distance_options(),
        Some((config.discretize_k, config.discretize_extent)),
    )?;
    let mut out = bundle(config, "cutdist")?;
    out.write_json(
        "cutdist.json",
        &json!({
            "first": config.input,
            "second": config.second,
            "options": config.distance_options(),
            "result": result,
        }),
    )?;
    out.finish()
}
