//! `polymetric` command-line front end.
//!
//! Exit codes: 0 on success, 1 when verification or recovery fails, 2 on
//! bad input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polymetric::formats::{
    format_real, parse_edge_values, read_text, write_correspondence, write_dense_matrix,
    write_edge_values, write_matrix_market, write_text,
};
use polymetric::laplace::{
    cotangent_weights, heat_kernel, laplace_matrix, spectral_decomposition, EdgeWeights,
};
use polymetric::mesh::{
    double_cover, induced_metric, load_obj, write_obj, MeshConnectivity, VertexPositions,
};
use polymetric::metric::PolyhedralMetric;
use polymetric::recover::{recover_metric, verify_scaling, Method, SolverOptions};

#[derive(Parser)]
#[command(
    name = "polymetric",
    version,
    about = "Cotangent weights, heat kernels and metric recovery"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write cotangent edge weights.
    Weights {
        #[command(flatten)]
        input: MeshInput,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Write the Laplace matrix in Matrix Market format.
    Laplacian {
        #[command(flatten)]
        input: MeshInput,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Write the dense heat kernel K(t).
    HeatKernel {
        #[command(flatten)]
        input: MeshInput,
        #[arg(long)]
        t: f64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Recover a metric from edge weights.
    Recover {
        mesh: PathBuf,
        weights: PathBuf,
        /// Recovered metric file.
        #[arg(long, short)]
        out: PathBuf,
        /// JSON report; printed to stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Metric to compare against in the report. Defaults to the metric
        /// induced by the OBJ positions.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Starting metric instead of the constant one.
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        /// Use gradient descent instead of Newton steps.
        #[arg(long)]
        gd: bool,
    },
    /// Compare two metric files up to a global scale.
    Verify {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
    },
    /// Write the closed double of an open mesh.
    DoubleCover {
        mesh: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Edge correspondence file.
        #[arg(long)]
        correspondence: PathBuf,
    },
}

#[derive(Args)]
struct MeshInput {
    mesh: PathBuf,
    /// Edge-length file overriding the OBJ positions.
    #[arg(long)]
    metric: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Check(String),
}

impl From<polymetric::Error> for Failure {
    fn from(e: polymetric::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("polymetric: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("polymetric: error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Weights { input, out } => cmd_weights(&input, &out),
        Command::Laplacian { input, out } => cmd_laplacian(&input, &out),
        Command::HeatKernel { input, t, out } => cmd_heat_kernel(&input, t, &out),
        Command::Recover {
            mesh,
            weights,
            out,
            report,
            reference,
            init,
            tol,
            max_iters,
            gd,
        } => {
            let (mesh, positions) = load_obj(&mesh)?;
            let target = EdgeWeights(parse_edge_values(&mesh, &read_text(&weights)?)?);
            let reference = match reference {
                Some(path) => Some(read_metric(&mesh, &path)?),
                None if !positions.is_empty() => induced_metric(&mesh, &positions).ok(),
                None => None,
            };
            let initial = match init {
                Some(path) => Some(read_metric(&mesh, &path)?.to_u()),
                None => None,
            };
            let options = SolverOptions {
                tolerance: tol,
                max_iterations: max_iters,
                initial,
                method: if gd {
                    Method::GradientDescent
                } else {
                    Method::Newton
                },
                ..Default::default()
            };
            cmd_recover(
                &mesh,
                &target,
                &options,
                reference.as_ref(),
                &out,
                report.as_deref(),
            )
        }
        Command::Verify { a, b, threshold } => cmd_verify(&a, &b, threshold),
        Command::DoubleCover {
            mesh,
            out,
            correspondence,
        } => cmd_double_cover(&mesh, &out, &correspondence),
    }
}

fn read_metric(mesh: &MeshConnectivity, path: &Path) -> Result<PolyhedralMetric, Failure> {
    let metric = PolyhedralMetric::new(parse_edge_values(mesh, &read_text(path)?)?)?;
    metric.validate(mesh)?;
    Ok(metric)
}

fn load_metric(input: &MeshInput) -> Result<(MeshConnectivity, PolyhedralMetric), Failure> {
    let (mesh, positions) = load_obj(&input.mesh)?;
    let metric = match &input.metric {
        Some(path) => read_metric(&mesh, path)?,
        None => metric_from_positions(&mesh, &positions)?,
    };
    Ok((mesh, metric))
}

fn metric_from_positions(
    mesh: &MeshConnectivity,
    positions: &VertexPositions,
) -> Result<PolyhedralMetric, Failure> {
    if positions.is_empty() {
        return Err(polymetric::Error::MissingPositions.into());
    }
    Ok(induced_metric(mesh, positions)?)
}

fn cmd_weights(input: &MeshInput, out: &Path) -> CmdResult {
    let (mesh, metric) = load_metric(input)?;
    let weights = cotangent_weights(&mesh, &metric)?;
    write_text(out, &write_edge_values(&mesh, weights.values())?)?;
    print_weight_summary(&mesh, &weights);
    Ok(())
}

fn print_weight_summary(mesh: &MeshConnectivity, weights: &EdgeWeights) {
    let w = weights.values();
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);
    let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    println!("edges: {}", mesh.edge_count());
    println!("min weight: {}", format_real(min));
    println!("max weight: {}", format_real(max));
}

fn cmd_laplacian(input: &MeshInput, out: &Path) -> CmdResult {
    let (mesh, metric) = load_metric(input)?;
    let weights = cotangent_weights(&mesh, &metric)?;
    let components = mesh.connected_components();
    if components > 1 {
        eprintln!(
            "warning: mesh has {components} connected components; the zero eigenvalue is repeated"
        );
    }
    let laplacian = laplace_matrix(&mesh, &weights)?;
    write_text(out, &write_matrix_market(laplacian.csr()))?;
    print_weight_summary(&mesh, &weights);
    Ok(())
}

fn cmd_heat_kernel(input: &MeshInput, t: f64, out: &Path) -> CmdResult {
    if t.is_nan() || t < 0.0 {
        return Err(polymetric::Error::NegativeTime(t).into());
    }
    let (mesh, metric) = load_metric(input)?;
    let laplacian = laplace_matrix(&mesh, &cotangent_weights(&mesh, &metric)?)?;
    let spectrum = spectral_decomposition(&laplacian)?;
    let kernel = heat_kernel(&spectrum, t)?;
    write_text(out, &write_dense_matrix(t, &kernel.matrix))?;
    println!("vertices: {}", mesh.vertex_count());
    println!("t: {}", format_real(t));
    Ok(())
}

#[derive(Serialize)]
struct RecoverReport {
    converged: bool,
    iterations: usize,
    gradient_norm: f64,
    residual_norm: f64,
    multiplier: f64,
    diagnostic: Option<String>,
    scale: Option<f64>,
    max_deviation: Option<f64>,
}

fn cmd_recover(
    mesh: &MeshConnectivity,
    target: &EdgeWeights,
    options: &SolverOptions,
    reference: Option<&PolyhedralMetric>,
    out: &Path,
    report_path: Option<&Path>,
) -> CmdResult {
    let result = recover_metric(mesh, target, options)?;
    let metric = result.metric();
    write_text(out, &write_edge_values(mesh, metric.lengths())?)?;

    let scaling = reference.map(|r| verify_scaling(&metric, r)).transpose()?;
    let report = RecoverReport {
        converged: result.converged,
        iterations: result.iterations,
        gradient_norm: result.gradient_norm,
        residual_norm: result.residual_norm,
        multiplier: result.multiplier,
        diagnostic: result.diagnostic.clone(),
        scale: scaling.map(|s| s.scale),
        max_deviation: scaling.map(|s| s.max_deviation),
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match report_path {
        Some(path) => write_text(path, &json)?,
        None => print!("{json}"),
    }
    if result.converged {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "recovery did not converge: {}",
            result
                .diagnostic
                .as_deref()
                .unwrap_or("target weights are not realizable")
        )))
    }
}

fn cmd_verify(a: &Path, b: &Path, threshold: f64) -> CmdResult {
    let parse = |path: &Path| -> Result<PolyhedralMetric, Failure> {
        let records = polymetric::formats::parse_edge_file(&read_text(path)?)?;
        Ok(PolyhedralMetric::new(
            records.into_iter().map(|(_, v)| v).collect(),
        )?)
    };
    let (ma, mb) = (parse(a)?, parse(b)?);
    let report = verify_scaling(&ma, &mb)?;
    println!("scale: {}", format_real(report.scale));
    println!("max deviation: {}", format_real(report.max_deviation));
    if report.max_deviation <= threshold {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "metrics differ by more than a scaling (deviation {:e} > {threshold:e})",
            report.max_deviation
        )))
    }
}

fn cmd_double_cover(mesh_path: &Path, out: &Path, correspondence: &Path) -> CmdResult {
    let (mesh, positions) = load_obj(mesh_path)?;
    let cover = double_cover(&mesh)?;
    let doubled_positions = VertexPositions(
        cover
            .vertex_origin
            .iter()
            .map(|&v| positions.as_slice().get(v).copied().unwrap_or([0.0; 3]))
            .collect(),
    );
    write_text(out, &write_obj(&cover.mesh, &doubled_positions)?)?;
    write_text(correspondence, &write_correspondence(&cover))?;
    println!("vertices: {}", cover.mesh.vertex_count());
    println!("edges: {}", cover.mesh.edge_count());
    println!("faces: {}", cover.mesh.face_count());
    println!(
        "euler characteristic: {}",
        cover.mesh.euler_characteristic()
    );
    Ok(())
}
