use std::path::{Path, PathBuf};

use knotdraw::badness::{evaluate, fingerprint, normalize};
use knotdraw::format::g7;
use knotdraw::optimize::{self, read_checkpoint, write_checkpoint, CheckpointMeta, Hooks};
use knotdraw::render::{knotplot, knotplot2};
use knotdraw::svg::{parse_svg, write_svg};
use knotdraw::symmetry::center;
use knotdraw::{
    Breakdown, ControlPoints, KnotVec, MinObj, OverUnderSpec, RenderDoc, RenderOptions,
    SymmetryGroup, SymmetrySpec, TopologyFingerprint,
};

use crate::args::{InspectArgs, OptimizeArgs, RenderArgs, SymmetrizeArgs};
use crate::config::Project;
use crate::error::{CliError, EXIT_TOPOLOGY};

type CliResult<T> = Result<T, CliError>;

fn at<T>(r: knotdraw::Result<T>, path: &Path) -> CliResult<T> {
    r.map_err(|e| CliError::from(e).context(path.display()))
}

/// Reads a knot from a knot-vector text file or an SVG drawing.
pub fn load_knot(path: &Path, id: Option<&str>) -> CliResult<MinObj> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with("knotvec") {
        at(
            KnotVec::parse(&text).and_then(|v| MinObj::from_knotvec(&v)),
            path,
        )
    } else {
        at(parse_svg(&text, id).and_then(|p| p.to_minobj()), path)
    }
}

fn load_spec(path: Option<&Path>) -> CliResult<Option<SymmetrySpec>> {
    path.map(|p| at(SymmetrySpec::load(p), p)).transpose()
}

fn load_overunder(path: Option<&Path>) -> CliResult<Option<OverUnderSpec>> {
    path.map(|p| at(OverUnderSpec::load(p), p)).transpose()
}

/// `dir/stem<suffix>` for an input `dir/stem.ext`.
fn sibling(input: &Path, suffix: &str) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "knot".into());
    input.with_file_name(format!("{stem}{suffix}"))
}

fn reference(m: &MinObj) -> CliResult<TopologyFingerprint> {
    Ok(fingerprint(&normalize(&m.to_controlpoints())?.0)?)
}

/// Badness components of `m`, with topology counted against `reference`.
fn breakdown(
    m: &MinObj,
    w: &knotdraw::BadnessWeights,
    reference: &TopologyFingerprint,
) -> CliResult<Breakdown> {
    Ok(evaluate(&m.to_controlpoints(), w, reference)?)
}

fn breakdown_line(b: &Breakdown) -> String {
    let mut parts: Vec<String> = b
        .components()
        .iter()
        .map(|(k, v)| format!("{k}={}", g7(*v)))
        .collect();
    parts.push(format!("badness={}", g7(b.total)));
    parts.join(" ")
}

fn draw(
    c: &ControlPoints,
    ou: Option<&OverUnderSpec>,
    opts: &RenderOptions,
) -> CliResult<RenderDoc> {
    match ou {
        Some(ou) => Ok(knotplot(c, ou, opts)?),
        None => {
            opts.validate()?;
            Ok(knotplot2(c, opts))
        }
    }
}

fn save_svg(doc: &RenderDoc, path: &Path) -> CliResult<()> {
    at(write_svg(doc, path), path)
}

pub fn inspect(cli_config: Option<&Path>, a: &InspectArgs) -> CliResult<()> {
    let project = Project::load(cli_config)?;
    let w = project.weights(a.weights.weights.as_deref(), &a.weights.weight)?;
    let m = load_knot(&a.input.input, a.input.id.as_deref())?;
    let b = breakdown(&m, &w, &reference(&m)?)?;
    println!(
        "nodes={} dim={} crossings={}",
        m.nodes().len(),
        4 * m.nodes().len(),
        b.crossings
    );
    for (k, v) in b.components() {
        println!("{k}={}", g7(v));
    }
    println!("badness={}", g7(b.total));
    if let Some(spec) = load_spec(project.symmetry(a.symmetry.as_deref()))? {
        let centered = center(&m).0;
        let g = SymmetryGroup::new(&spec, m.nodes().len())?;
        println!("symmetry_error={}", g7(g.symmetry_error(&centered)?));
        println!("symmetry_dim={}", g.dimension());
    }
    Ok(())
}

pub fn optimize(cli_config: Option<&Path>, a: &OptimizeArgs) -> CliResult<()> {
    let project = Project::load(cli_config)?;
    let w = project.weights(a.weights.weights.as_deref(), &a.weights.weight)?;
    let mut opts = project.optimize.clone().unwrap_or_default();
    if let Some(v) = a.algorithm {
        opts.algorithm = v;
    }
    if let Some(v) = a.max_evals {
        opts.max_evals = v;
    }
    if let Some(v) = a.seed {
        opts.seed = v;
    }
    if let Some(v) = a.ftol {
        opts.ftol = v;
    }
    if let Some(v) = a.xtol {
        opts.xtol = v;
    }
    if let Some(v) = a.restarts {
        opts.restart_count = v;
    }
    if let Some(v) = a.checkpoint_every {
        opts.checkpoint_every = v;
    }
    opts.validate()?;

    let spec = load_spec(project.symmetry(a.symmetry.as_deref()))?;
    let mut start = load_knot(&a.input.input, a.input.id.as_deref())?;
    if spec.is_some() {
        start = center(&start).0;
    }
    let reference_start = start.clone();
    let mut done = 0;
    if a.resume {
        let cp = a
            .checkpoint
            .as_deref()
            .expect("clap enforces --checkpoint with --resume");
        let (knot, meta) = at(read_checkpoint(cp), cp)?;
        if knot.len() != start.len() {
            return Err(CliError::input(format!(
                "{}: checkpoint has {} nodes, input has {}",
                cp.display(),
                knot.nodes().len(),
                start.nodes().len()
            )));
        }
        start = knot;
        done = meta.evals;
        opts.seed = meta.seed;
        opts.algorithm = meta.algorithm;
        if done >= opts.max_evals {
            return Err(CliError::input(format!(
                "{}: checkpoint already used {done} of {} evaluations",
                cp.display(),
                opts.max_evals
            )));
        }
        opts.max_evals -= done;
        log::info!("resuming at eval {done}");
    }

    let fp = reference(&reference_start)?;
    let before = breakdown(&reference_start, &w, &fp)?;
    let (algorithm, seed) = (opts.algorithm, opts.seed);
    let checkpoint = a.checkpoint.clone();
    let mut failure: Option<CliError> = None;
    let mut progress = |evals: usize, best: &MinObj, f: f64| {
        let evals = done + evals;
        eprintln!("eval={evals} badness={}", g7(f));
        if let Some(cp) = &checkpoint {
            let meta = CheckpointMeta {
                evals,
                badness: f,
                seed,
                algorithm,
            };
            if let Err(e) = write_checkpoint(cp, best, &meta) {
                failure.get_or_insert(CliError::from(e).context(cp.display()));
            }
        }
    };
    let hooks = Hooks {
        observer: None,
        progress: Some(&mut progress),
    };
    let (best, mut report) = optimize::minimize(&start, &w, spec.as_ref(), &opts, hooks)?;
    if let Some(e) = failure {
        return Err(e);
    }
    report.evals += done;
    let after = breakdown(&best, &w, &fp)?;

    let output = a
        .output
        .clone()
        .unwrap_or_else(|| sibling(&a.input.input, ".opt.knotvec"));
    at(best.to_knotvec().write(&output), &output)?;
    let preview = a
        .preview
        .clone()
        .unwrap_or_else(|| sibling(&a.input.input, ".opt.svg"));
    let ou = load_overunder(project.overunder(None))?;
    let render_opts = project.render.clone().unwrap_or_default();
    save_svg(
        &draw(&best.to_controlpoints(), ou.as_ref(), &render_opts)?,
        &preview,
    )?;
    if let Some(path) = &a.report {
        let json =
            serde_json::to_string_pretty(&report).map_err(|e| CliError::input(e.to_string()))?;
        std::fs::write(path, json)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    }

    println!(
        "before: crossings={} {}",
        before.crossings,
        breakdown_line(&before)
    );
    println!(
        "after:  crossings={} {}",
        after.crossings,
        breakdown_line(&after)
    );
    println!(
        "evals={} converged={} algorithm={} seed={}",
        report.evals, report.converged, report.algorithm, report.seed
    );
    if let Some(e) = report.max_symmetry_error {
        println!("symmetry_error={}", g7(e));
    }
    println!("wrote {} and {}", output.display(), preview.display());
    if report.topology_rejected {
        return Err(CliError {
            code: EXIT_TOPOLOGY,
            message:
                "optimized knot changed the crossing structure or did not improve; kept the input"
                    .into(),
        });
    }
    Ok(())
}

pub fn render(cli_config: Option<&Path>, a: &RenderArgs) -> CliResult<()> {
    let project = Project::load(cli_config)?;
    let m = load_knot(&a.input.input, a.input.id.as_deref())?;
    let ou = load_overunder(project.overunder(a.overunder.as_deref()))?;
    let mut opts = project.render.clone().unwrap_or_default();
    if let Some(g) = a.gap {
        opts.gap = g;
    }
    opts.show_handles |= a.show_handles;
    opts.show_curvature |= a.show_curvature;
    opts.show_labels |= a.show_labels;
    opts.show_nodes |= a.show_nodes;
    opts.rainbow |= a.rainbow;
    let doc = draw(&m.to_controlpoints(), ou.as_ref(), &opts)?;
    let output = a.output.clone().unwrap_or_else(|| {
        let is_svg = a
            .input
            .input
            .extension()
            .is_some_and(|e| e.eq_ignore_ascii_case("svg"));
        sibling(&a.input.input, if is_svg { ".render.svg" } else { ".svg" })
    });
    save_svg(&doc, &output)?;
    println!("wrote {} breaks={}", output.display(), doc.breaks.len());
    Ok(())
}

pub fn symmetrize(cli_config: Option<&Path>, a: &SymmetrizeArgs) -> CliResult<()> {
    let project = Project::load(cli_config)?;
    let spec = load_spec(project.symmetry(a.symmetry.as_deref()))?
        .ok_or_else(|| CliError::input("symmetrize needs --symmetry or a project symmetry file"))?;
    let m = center(&load_knot(&a.input.input, a.input.id.as_deref())?).0;
    let g = SymmetryGroup::new(&spec, m.nodes().len())?;
    let before = g.symmetry_error(&m)?;
    let s = g.symmetrize(&m)?;
    let after = g.symmetry_error(&s)?;
    println!("symmetry_error before={} after={}", g7(before), g7(after));
    println!("order={} dim={}", g.order(), g.dimension());
    let output = a
        .output
        .clone()
        .unwrap_or_else(|| sibling(&a.input.input, ".sym.svg"));
    save_svg(
        &knotplot2(
            &s.to_controlpoints(),
            &project.render.clone().unwrap_or_default(),
        ),
        &output,
    )?;
    if let Some(k) = &a.knot_out {
        at(s.to_knotvec().write(k), k)?;
    }
    println!("wrote {}", output.display());
    Ok(())
}
