use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use knotdraw::Algorithm;

#[derive(Debug, Parser)]
#[command(
    name = "knotdraw",
    version,
    about = "Beautify knot diagrams drawn as closed Bezier paths"
)]
pub struct Cli {
    /// Project file with default paths and option tables; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print node count, vector dimension, crossings and badness components.
    Inspect(InspectArgs),
    /// Minimize badness and write the optimized knot with an SVG preview.
    Optimize(OptimizeArgs),
    /// Draw a knot, with understrand breaks when an over/under table is given.
    Render(RenderArgs),
    /// Project a knot onto a symmetry spec and write the symmetric path.
    Symmetrize(SymmetrizeArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Knot as an SVG drawing or a knot-vector text file.
    pub input: PathBuf,

    /// Id of the path element to read from a multi-path SVG.
    #[arg(long)]
    pub id: Option<String>,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Badness weights file (TOML).
    #[arg(long)]
    pub weights: Option<PathBuf>,

    /// Override one weight, e.g. `--weight w_bend=0.5`; repeatable.
    #[arg(long = "weight", value_name = "KEY=VALUE")]
    pub weight: Vec<String>,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub weights: WeightArgs,

    /// Also report the symmetry error against this spec.
    #[arg(long)]
    pub symmetry: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub weights: WeightArgs,

    /// Symmetry spec (TOML); the search runs over its free parameters.
    #[arg(long)]
    pub symmetry: Option<PathBuf>,

    #[arg(long)]
    pub algorithm: Option<Algorithm>,

    #[arg(long)]
    pub max_evals: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub ftol: Option<f64>,

    #[arg(long)]
    pub xtol: Option<f64>,

    #[arg(long)]
    pub restarts: Option<usize>,

    /// Write the best knot so far to this file every `--checkpoint-every` evaluations.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    #[arg(long)]
    pub checkpoint_every: Option<usize>,

    /// Continue from the knot and evaluation count stored in `--checkpoint`.
    #[arg(long, requires = "checkpoint")]
    pub resume: bool,

    /// Optimized knot-vector file [default: <input>.opt.knotvec]
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// SVG preview of the result [default: <input>.opt.svg]
    #[arg(long)]
    pub preview: Option<PathBuf>,

    /// Write the optimization report as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Over/under table: one `over under` row of segment labels per crossing.
    #[arg(long)]
    pub overunder: Option<PathBuf>,

    /// Half-length of each understrand break, in drawing units.
    #[arg(long)]
    pub gap: Option<f64>,

    #[arg(long)]
    pub show_handles: bool,

    #[arg(long)]
    pub show_curvature: bool,

    #[arg(long)]
    pub show_labels: bool,

    #[arg(long)]
    pub show_nodes: bool,

    /// Color each segment by its position along the path.
    #[arg(long)]
    pub rainbow: bool,

    /// Output SVG [default: <input>.svg next to a knot-vector input, <input>.render.svg otherwise]
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SymmetrizeArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long)]
    pub symmetry: Option<PathBuf>,

    /// Output SVG [default: <input>.sym.svg]
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    /// Also write the symmetric knot as a knot-vector file.
    #[arg(long)]
    pub knot_out: Option<PathBuf>,
}
