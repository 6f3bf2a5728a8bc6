//! ggs: run a construction script and export its views.
//!
//! Exit codes: 0 success, 1 script diagnostics (parse/definition errors,
//! unknown sliders), 2 I/O or flag errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;

use ggs_core::export::{csv_string, export_obj, export_svg};
use ggs_core::kernel::geom::Window2;
use ggs_core::scene::{build_scenes, csv_table_for};
use ggs_core::value::EvalConfig;
use ggs_core::{parser, Construction};

#[derive(Parser, Debug)]
#[command(
    name = "ggs",
    version,
    about = "Headless interpreter for GeoGebra-style construction scripts",
    after_help = "Views export to <out>/<stem>.2d.svg, <stem>.2d2.svg and <stem>.3d.obj; \
                  only views that contain objects are written."
)]
struct Args {
    /// Script file (.ggs, UTF-8, one statement per line)
    script: PathBuf,

    /// Set a slider before exporting, e.g. --set t=1 (repeatable)
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,

    /// Sweep a slider over a:b:step and export numbered frames
    #[arg(long, value_name = "NAME=A:B:STEP")]
    sweep: Option<String>,

    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// World window of the 2D views
    #[arg(long, value_name = "XMIN:XMAX:YMIN:YMAX", default_value = "-5:5:-5:5")]
    window: String,

    /// Grid resolution for surface tessellation and contour extraction
    /// (defaults: 64x64 surfaces, 200x200 contours)
    #[arg(long, value_name = "NxM")]
    grid: Option<String>,

    /// Sample count for function graphs, curves and loci (default 512)
    #[arg(long, value_name = "N")]
    samples: Option<usize>,

    /// SVG pixel size
    #[arg(long, value_name = "WxH", default_value = "800x800")]
    size: String,

    /// Also export a named object's samples as CSV (repeatable)
    #[arg(long = "csv", value_name = "NAME")]
    csv: Vec<String>,
}

enum Failure {
    /// Script-level problems: diagnostics, bad slider names.
    Script(Vec<String>),
    /// Flag or I/O problems.
    Usage(String),
}

fn main() -> ExitCode {
    let args = Args::parse(); // clap exits with 2 on flag errors
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Script(msgs)) => {
            for m in msgs {
                eprintln!("{m}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("ggs: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args) -> Result<(), Failure> {
    let config = build_config(args)?;
    let size = parse_size(&args.size)?;

    let source = std::fs::read_to_string(&args.script)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.script.display())))?;
    let file_label = args.script.display().to_string();
    let script = parser::parse_script(&source)
        .map_err(|ds| Failure::Script(ds.iter().map(|d| d.render(&file_label)).collect()))?;

    let mut graph = Construction::new(config);
    graph
        .run_script(&script)
        .map_err(|d| Failure::Script(vec![d.render(&file_label)]))?;

    for spec in &args.set {
        let (name, value) = split_once(spec, '=')
            .ok_or_else(|| Failure::Usage(format!("bad --set `{spec}`, expected NAME=VALUE")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Failure::Usage(format!("bad --set value in `{spec}`")))?;
        graph
            .set_slider(name, value)
            .map_err(|e| Failure::Script(vec![format!("{file_label}: {e}")]))?;
    }

    std::fs::create_dir_all(&args.out)
        .map_err(|e| Failure::Usage(format!("cannot create {}: {e}", args.out.display())))?;
    let stem = args
        .script
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "out".to_string());

    match &args.sweep {
        None => export_all(&graph, args, &args.out, &stem, size),
        Some(spec) => {
            let (name, a, b, step) = parse_sweep(spec)?;
            let count = frame_count(a, b, step);
            if count == 0 {
                return Err(Failure::Usage(format!("empty sweep range `{spec}`")));
            }
            for frame in 0..count {
                let value = a + frame as f64 * step;
                graph
                    .set_slider(&name, value)
                    .map_err(|e| Failure::Script(vec![format!("{file_label}: {e}")]))?;
                let frame_stem = format!("{stem}.{frame:03}");
                export_all(&graph, args, &args.out, &frame_stem, size)?;
            }
            Ok(())
        }
    }
}

/// Frame count of a sweep a:b:step, tolerant of float drift at the top end.
fn frame_count(a: f64, b: f64, step: f64) -> usize {
    if step == 0.0 {
        return 0;
    }
    let ratio = (b - a) / step + 1e-12;
    if ratio < 0.0 {
        0
    } else {
        ratio.floor() as usize + 1
    }
}

fn export_all(
    graph: &Construction,
    args: &Args,
    out: &Path,
    stem: &str,
    size: (u32, u32),
) -> Result<(), Failure> {
    let scenes = build_scenes(graph);
    let io = |e: std::io::Error| Failure::Usage(format!("write failed: {e}"));
    if !scenes.d2.items.is_empty() {
        export_svg(&scenes.d2, size, &out.join(format!("{stem}.2d.svg"))).map_err(io)?;
    }
    if !scenes.d2_second.items.is_empty() {
        export_svg(&scenes.d2_second, size, &out.join(format!("{stem}.2d2.svg"))).map_err(io)?;
    }
    if !scenes.d3.items.is_empty() {
        export_obj(&scenes.d3, &out.join(format!("{stem}.3d.obj"))).map_err(io)?;
    }
    for name in &args.csv {
        let Some(id) = graph.lookup(name) else {
            return Err(Failure::Script(vec![format!("unknown object `{name}` for --csv")]));
        };
        let Some(table) = csv_table_for(graph, graph.value(id)) else {
            return Err(Failure::Script(vec![format!(
                "object `{name}` has no samples to export"
            )]));
        };
        std::fs::write(out.join(format!("{stem}.{name}.csv")), csv_string(&table))
            .map_err(io)?;
    }
    Ok(())
}

fn build_config(args: &Args) -> Result<EvalConfig, Failure> {
    let mut config = EvalConfig::default();
    let w: Vec<f64> = args
        .window
        .split(':')
        .map(|s| s.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("bad --window `{}`", args.window)))?;
    if w.len() != 4 || w[0] >= w[1] || w[2] >= w[3] {
        return Err(Failure::Usage(format!(
            "bad --window `{}`, expected XMIN:XMAX:YMIN:YMAX with nonempty ranges",
            args.window
        )));
    }
    config.window = Window2::new(w[0], w[1], w[2], w[3]);
    if let Some(grid) = &args.grid {
        let (n, m) = parse_pair(grid, 'x')
            .ok_or_else(|| Failure::Usage(format!("bad --grid `{grid}`, expected NxM")))?;
        if n < 2 || m < 2 {
            return Err(Failure::Usage("grid must be at least 2x2".into()));
        }
        config.tessellation = (n, m);
        config.contour_grid = (n, m);
    }
    if let Some(samples) = args.samples {
        if samples < 2 {
            return Err(Failure::Usage("--samples must be at least 2".into()));
        }
        config.curve_samples = samples;
        config.locus_samples = samples;
    }
    Ok(config)
}

fn parse_size(spec: &str) -> Result<(u32, u32), Failure> {
    let (w, h) = parse_pair(spec, 'x')
        .ok_or_else(|| Failure::Usage(format!("bad --size `{spec}`, expected WxH")))?;
    if w < 16 || h < 16 {
        return Err(Failure::Usage("--size must be at least 16x16".into()));
    }
    Ok((w as u32, h as u32))
}

fn parse_pair(spec: &str, sep: char) -> Option<(usize, usize)> {
    let (a, b) = split_once(spec, sep)?;
    Some((a.parse().ok()?, b.parse().ok()?))
}

fn parse_sweep(spec: &str) -> Result<(String, f64, f64, f64), Failure> {
    let bad = || Failure::Usage(format!("bad --sweep `{spec}`, expected NAME=A:B:STEP"));
    let (name, range) = split_once(spec, '=').ok_or_else(bad)?;
    let parts: Vec<f64> = range
        .split(':')
        .map(|s| s.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    if parts.len() != 3 || parts[2] == 0.0 {
        return Err(bad());
    }
    Ok((name.to_string(), parts[0], parts[1], parts[2]))
}

fn split_once(s: &str, sep: char) -> Option<(&str, &str)> {
    let mut it = s.splitn(2, sep);
    Some((it.next()?, it.next()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_frame_counts() {
        assert_eq!(frame_count(0.0, 1.0, 0.1), 11);
        assert_eq!(frame_count(0.0, 1.0, 0.5), 3);
        assert_eq!(frame_count(1.0, 0.0, -0.25), 5);
        assert_eq!(frame_count(0.0, 1.0, -0.1), 0);
    }

    #[test]
    fn sweep_spec_parsing() {
        let (name, a, b, s) = parse_sweep("t=0:1:0.1").unwrap();
        assert_eq!(name, "t");
        assert_eq!((a, b, s), (0.0, 1.0, 0.1));
        assert!(parse_sweep("t=0:1").is_err());
        assert!(parse_sweep("t=0:1:0").is_err());
    }
}
