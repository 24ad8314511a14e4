//! Command line front end: classify an element, print its embedded
//! window, emit an scl lower-bound certificate, or run the seeded
//! verification suites. All output is deterministic for a fixed
//! configuration and seed.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use cubescl::axis::{self, Window};
use cubescl::cert::{self, SclOptions};
use cubescl::embed::Embedding;
use cubescl::quasi::{defect_bounds, CountingQuasimorphism};
use cubescl::segment::maximal_g_nested;
use cubescl::verify;
use cubescl::{CubeComplex, DefiningGraph, Error, EuclideanComplex, RaagComplex, Result};

#[derive(Parser)]
#[command(
    name = "cubescl",
    version,
    about = "Counting quasimorphisms and scl lower bounds on cube complexes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify an element and report its window data as JSON
    Analyze(AnalyzeArgs),
    /// Print embedded window coordinates as TSV, optionally with a schematic SVG
    Embed(EmbedArgs),
    /// Emit a machine-checkable scl lower-bound certificate as JSON
    Scl(SclArgs),
    /// Run the seeded verification suites and report pass/fail per suite
    Verify(VerifyArgs),
}

#[derive(Args)]
struct TargetArgs {
    /// Defining graph: a builtin name (free2, complete3, path3, cycle5,
    /// pentagon) or a path to a JSON file
    #[arg(long, conflicts_with = "fixture")]
    graph: Option<String>,
    /// Euclidean fixture: staircase, glide-plane, or subdivided
    #[arg(long)]
    fixture: Option<String>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Word in the generators, uppercase for inverses; for a fixture, an
    /// integer power of its automorphism (default 1)
    word: Option<String>,
    /// Cap on the certified window radius
    #[arg(long, default_value_t = axis::MAX_WINDOW_RADIUS)]
    window: usize,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Word in the generators, uppercase for inverses; for a fixture, an
    /// integer power of its automorphism (default 1)
    word: Option<String>,
    /// Cap on the certified window radius
    #[arg(long, default_value_t = axis::MAX_WINDOW_RADIUS)]
    window: usize,
    /// Write a schematic SVG of the projected window to this file
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Coordinate pair for the SVG projection, as i,j
    #[arg(long, value_parser = parse_projection)]
    projection: Option<(usize, usize)>,
    /// Write the TSV to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SclArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Word in the generators, uppercase for inverses; for a fixture, an
    /// integer power of its automorphism (default 1)
    word: Option<String>,
    /// Cap on the certified window radius
    #[arg(long, default_value_t = axis::MAX_WINDOW_RADIUS)]
    window: usize,
    /// Search radius for copy witnesses (default: twice the window span)
    #[arg(long)]
    radius: Option<usize>,
    /// Highest power of the element whose counts enter the certificate
    #[arg(long, default_value_t = 8)]
    max_power: usize,
    /// Exit nonzero unless the certificate is fully certified
    #[arg(long)]
    strict: bool,
    /// Write the certificate to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    target: TargetArgs,
    /// Seed for every sampled suite
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Exit nonzero on inconclusive outcomes as well as failures
    #[arg(long)]
    strict: bool,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_projection(text: &str) -> std::result::Result<(usize, usize), String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err("expected two comma-separated indices, like 0,1".into());
    }
    let i = parts[0].trim().parse().map_err(|_| "bad first index".to_string())?;
    let j = parts[1].trim().parse().map_err(|_| "bad second index".to_string())?;
    Ok((i, j))
}

/// Either backend, resolved from the command line.
enum Target {
    Raag { name: String, complex: RaagComplex },
    Euclid { name: String, complex: EuclideanComplex },
}

fn resolve_target(args: &TargetArgs) -> Result<Target> {
    match (&args.graph, &args.fixture) {
        (Some(arg), None) => {
            let (name, graph) = resolve_graph(arg)?;
            Ok(Target::Raag { name, complex: RaagComplex::new(graph) })
        }
        (None, Some(name)) => Ok(Target::Euclid {
            name: name.clone(),
            complex: EuclideanComplex::fixture(name)?,
        }),
        _ => Err(Error::BadGraph(
            "pass exactly one of --graph or --fixture".into(),
        )),
    }
}

fn resolve_graph(arg: &str) -> Result<(String, DefiningGraph)> {
    if arg.ends_with(".json") || arg.contains('/') {
        let text = fs::read_to_string(arg)
            .map_err(|e| Error::BadGraph(format!("cannot read {arg}: {e}")))?;
        let graph = DefiningGraph::from_json(&text)?;
        return Ok((arg.to_string(), graph));
    }
    if arg == "pentagon" {
        return Ok((arg.to_string(), DefiningGraph::cycle(5)));
    }
    for (prefix, build) in [
        ("free", DefiningGraph::free as fn(usize) -> DefiningGraph),
        ("complete", DefiningGraph::complete),
        ("cycle", DefiningGraph::cycle),
    ] {
        if let Some(rest) = arg.strip_prefix(prefix) {
            if let Ok(n) = rest.parse::<usize>() {
                if n == 0 || (prefix == "cycle" && n < 4) || n > 26 {
                    return Err(Error::BadGraph(format!("{arg} is out of range")));
                }
                return Ok((arg.to_string(), build(n)));
            }
        }
    }
    if let Some(rest) = arg.strip_prefix("path") {
        if let Ok(n) = rest.parse::<usize>() {
            if n == 0 || n > 26 {
                return Err(Error::BadGraph(format!("{arg} is out of range")));
            }
            let names: Vec<String> =
                (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
            let name_refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            let edges: Vec<(&str, &str)> =
                (1..n).map(|i| (name_refs[i - 1], name_refs[i])).collect();
            return Ok((arg.to_string(), DefiningGraph::new(&name_refs, &edges)?));
        }
    }
    Err(Error::BadGraph(format!(
        "unknown graph {arg}; use freeN, completeN, cycleN, pathN, pentagon, or a JSON file"
    )))
}

fn raag_element(c: &RaagComplex, word: &Option<String>) -> Result<cubescl::NormalForm> {
    let w = word
        .as_deref()
        .ok_or_else(|| Error::BadWord("a word is required for a graph target".into()))?;
    c.element(w)
}

fn euclid_element(c: &EuclideanComplex, word: &Option<String>) -> Result<cubescl::euclid::PermShift> {
    let n: i64 = match word.as_deref() {
        None | Some("") => 1,
        Some(text) => text
            .parse()
            .map_err(|_| Error::BadWord(format!("fixture power must be an integer, got {text}")))?,
    };
    Ok(c.power(c.automorphism(), n))
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------
// analyze

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixture: Option<String>,
    element: String,
    window: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_power: Option<usize>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct AnalyzeReport {
    classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sigma: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_certified: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    window_radius: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    antichain: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fundamental_segment: Option<Vec<String>>,
    config: ConfigEcho,
}

/// Everything the window pipeline reports about one element.
struct PipelineData {
    ell: usize,
    k: i64,
    d: usize,
    sigma: Vec<usize>,
    window_certified: bool,
    window_radius: usize,
    antichain: Vec<String>,
    run_labels: Vec<String>,
}

fn window_pipeline<C: CubeComplex>(c: &C, g: &C::G, window_cap: usize) -> Result<PipelineData> {
    let axis0 = axis::classify(c, g)?;
    let ell = axis0.ell;
    let k = axis::non_transverse_power(c, &axis0, axis::DEFAULT_POWER_CAP)? as i64;
    let gk = c.power(g, k);
    let axis_k = if k == 1 { axis0 } else { axis::classify(c, &gk)? };
    let wa = axis::analyze_window(c, &axis_k, window_cap)?;
    let family: Vec<C::H> = wa
        .antichain
        .iter()
        .map(|&i| wa.window.halfspace(i).clone())
        .collect();
    let antichain = family.iter().map(|h| c.label(h)).collect();
    let certified = wa.certified;
    let radius = wa.window.radius();
    let axis2 = axis::recenter(c, &axis_k, &wa)?;
    let win = Window::build(c, &axis2, radius)?;
    let emb = Embedding::build(&win, &family)?;
    let run = maximal_g_nested(&emb)?;
    Ok(PipelineData {
        ell,
        k,
        d: emb.dim(),
        sigma: emb.sigma().to_vec(),
        window_certified: certified,
        window_radius: radius,
        antichain,
        run_labels: run.segment.labels(c),
    })
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<ExitCode> {
    let config = |element: String| ConfigEcho {
        graph: args.target.graph.clone(),
        fixture: args.target.fixture.clone(),
        element,
        window: args.window,
        radius: None,
        max_power: None,
    };
    let (element, outcome) = match resolve_target(&args.target)? {
        Target::Raag { complex, .. } => {
            let g = raag_element(&complex, &args.word)?;
            (complex.describe_g(&g), window_pipeline(&complex, &g, args.window))
        }
        Target::Euclid { complex, .. } => {
            let g = euclid_element(&complex, &args.word)?;
            (complex.describe_g(&g), window_pipeline(&complex, &g, args.window))
        }
    };
    let report = match outcome {
        Ok(data) => AnalyzeReport {
            classification: "hyperbolic".into(),
            ell: Some(data.ell),
            k: Some(data.k),
            d: Some(data.d),
            sigma: Some(data.sigma),
            window_certified: Some(data.window_certified),
            window_radius: Some(data.window_radius),
            antichain: Some(data.antichain),
            fundamental_segment: Some(data.run_labels),
            config: config(element),
        },
        Err(Error::Elliptic) => AnalyzeReport {
            classification: "elliptic".into(),
            ell: None,
            k: None,
            d: None,
            sigma: None,
            window_certified: None,
            window_radius: None,
            antichain: None,
            fundamental_segment: None,
            config: config(element),
        },
        Err(e) => return Err(e),
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    write_out(&args.out, &text)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// embed

fn cmd_embed(args: &EmbedArgs) -> Result<ExitCode> {
    match resolve_target(&args.target)? {
        Target::Raag { name, complex } => {
            let g = raag_element(&complex, &args.word)?;
            run_embed(&complex, &g, &name, args)
        }
        Target::Euclid { name, complex } => {
            let g = euclid_element(&complex, &args.word)?;
            run_embed(&complex, &g, &name, args)
        }
    }
}

fn run_embed<C: CubeComplex>(c: &C, g: &C::G, name: &str, args: &EmbedArgs) -> Result<ExitCode> {
    let axis0 = axis::classify(c, g)?;
    let k = axis::non_transverse_power(c, &axis0, axis::DEFAULT_POWER_CAP)? as i64;
    let gk = c.power(g, k);
    let axis_k = if k == 1 { axis0 } else { axis::classify(c, &gk)? };
    let wa = axis::analyze_window(c, &axis_k, args.window)?;
    let family: Vec<C::H> = wa
        .antichain
        .iter()
        .map(|&i| wa.window.halfspace(i).clone())
        .collect();
    let radius = wa.window.radius();
    let axis2 = axis::recenter(c, &axis_k, &wa)?;
    let win = Window::build(c, &axis2, radius)?;
    let emb = Embedding::build(&win, &family)?;
    let d = emb.dim();

    let mut rows: Vec<Vec<i64>> = Vec::new();
    for vi in 0..win.scope().verts().len() {
        if let Some(coords) = emb.hull_coordinates(vi) {
            rows.push(coords.to_vec());
        }
    }
    rows.sort();
    rows.dedup();

    let mut tsv = String::new();
    let _ = writeln!(tsv, "# cubescl embed");
    let kind = if args.target.fixture.is_some() { "fixture" } else { "graph" };
    let _ = writeln!(tsv, "# {kind}: {name}");
    let _ = writeln!(tsv, "# element: {}", c.describe_g(g));
    let _ = writeln!(tsv, "# power normalization k: {k}");
    let _ = writeln!(tsv, "# dimensions: {d}");
    let _ = writeln!(tsv, "# window radius: {radius}");
    if let Some(path) = &args.svg {
        let _ = writeln!(tsv, "# svg: {}", path.display());
    }
    for row in &rows {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(tsv, "{}", cells.join("\t"));
    }
    write_out(&args.out, &tsv)?;

    if let Some(path) = &args.svg {
        let proj = match args.projection {
            Some((i, j)) => {
                if i >= d || j >= d || i == j {
                    return Err(Error::BadRule(format!(
                        "projection {i},{j} is not a pair of distinct axes below {d}"
                    )));
                }
                (i, j)
            }
            None => {
                if d >= 2 {
                    (0, 1)
                } else {
                    (0, 0)
                }
            }
        };
        let svg = schematic_svg(c, &win, &emb, &rows, proj)?;
        fs::write(path, svg)
            .map_err(|e| Error::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Shaded unit squares of the projected window, hyperplane lines, and
/// the axis polyline, as a standalone SVG document.
fn schematic_svg<C: CubeComplex>(
    c: &C,
    win: &Window<'_, C>,
    emb: &Embedding<'_, '_, C>,
    rows: &[Vec<i64>],
    proj: (usize, usize),
) -> Result<String> {
    let flat = proj.0 == proj.1;
    let pts: Vec<(i64, i64)> = rows
        .iter()
        .map(|r| (r[proj.0], if flat { 0 } else { r[proj.1] }))
        .collect();
    let pset: std::collections::HashSet<(i64, i64)> = pts.iter().copied().collect();
    let squares: Vec<(i64, i64)> = if flat {
        Vec::new()
    } else {
        let mut sq: Vec<(i64, i64)> = pset
            .iter()
            .filter(|&&(x, y)| {
                pset.contains(&(x + 1, y))
                    && pset.contains(&(x, y + 1))
                    && pset.contains(&(x + 1, y + 1))
            })
            .copied()
            .collect();
        sq.sort();
        sq
    };

    let min_x = pts.iter().map(|p| p.0).min().unwrap_or(0);
    let max_x = pts.iter().map(|p| p.0).max().unwrap_or(0);
    let min_y = pts.iter().map(|p| p.1).min().unwrap_or(0);
    let max_y = pts.iter().map(|p| p.1).max().unwrap_or(0);

    let scale = 40.0;
    let margin = 30.0;
    let sx = |x: f64| margin + (x - min_x as f64) * scale;
    let sy = |y: f64| margin + (max_y as f64 - y) * scale;
    let width = sx(max_x as f64) + margin;
    let height = sy(min_y as f64) + margin;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(svg, "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>");

    for (a, b) in &squares {
        let _ = writeln!(
            svg,
            "  <rect x=\"{:.1}\" y=\"{:.1}\" width=\"{scale:.1}\" height=\"{scale:.1}\" \
             fill=\"#dce8f5\" stroke=\"#9bb7d4\" stroke-width=\"1\"/>",
            sx(*a as f64),
            sy(*b as f64 + 1.0)
        );
    }

    // one line per hyperplane of each projected chain, drawn between
    // the two coordinate values it separates
    if !flat {
        for (dir, chain) in [(0usize, proj.0), (1usize, proj.1)] {
            let (lo, hi) = emb.level_range(chain);
            for level in lo..=hi {
                if emb.index_at_level(chain, level).is_none() {
                    continue;
                }
                let at = level as f64 + 0.5;
                let (x1, y1, x2, y2) = if dir == 0 {
                    (sx(at), sy(min_y as f64 - 0.3), sx(at), sy(max_y as f64 + 0.3))
                } else {
                    (sx(min_x as f64 - 0.3), sy(at), sx(max_x as f64 + 0.3), sy(at))
                };
                let _ = writeln!(
                    svg,
                    "  <line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" \
                     stroke=\"#c0564f\" stroke-width=\"1\" stroke-dasharray=\"5 3\"/>"
                );
            }
        }
    }

    for &(x, y) in &pts {
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"2.5\" fill=\"#6b7f94\"/>",
            sx(x as f64),
            sy(y as f64)
        );
    }

    let mut axis_pts: Vec<(f64, f64)> = Vec::new();
    let r = win.radius() as i64;
    for m in -(r + 1)..=(r + 1) {
        let v = c.act(&c.power(win.g(), m), win.base());
        if let Ok(coords) = emb.coordinates(&v) {
            let x = coords[proj.0] as f64;
            let y = if flat { 0.0 } else { coords[proj.1] as f64 };
            axis_pts.push((sx(x), sy(y)));
        }
    }
    if axis_pts.len() >= 2 {
        let path: Vec<String> = axis_pts.iter().map(|(x, y)| format!("{x:.1},{y:.1}")).collect();
        let _ = writeln!(
            svg,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"#2d2d2d\" stroke-width=\"2.5\"/>",
            path.join(" ")
        );
    }
    if let Ok(base) = emb.coordinates(win.base()) {
        let x = base[proj.0] as f64;
        let y = if flat { 0.0 } else { base[proj.1] as f64 };
        let _ = writeln!(
            svg,
            "  <circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"5\" fill=\"#d9962e\"/>",
            sx(x),
            sy(y)
        );
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

// ---------------------------------------------------------------------
// scl

fn cmd_scl(args: &SclArgs) -> Result<ExitCode> {
    let opt = SclOptions {
        window_cap: args.window,
        max_power: args.max_power as i64,
        radius: args.radius,
        ..SclOptions::default()
    };
    let certificate = match resolve_target(&args.target)? {
        Target::Raag { name, complex } => {
            let g = raag_element(&complex, &args.word)?;
            cert::scl_bound(&complex, &g, &name, &opt)?
        }
        Target::Euclid { name, complex } => {
            let g = euclid_element(&complex, &args.word)?;
            cert::scl_bound(&complex, &g, &name, &opt)?
        }
    };
    let mut text = serde_json::to_string_pretty(&certificate).expect("certificate serializes");
    text.push('\n');
    write_out(&args.out, &text)?;
    if args.strict && certificate.rigor != "Certified" {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------
// verify

struct SuiteLine {
    name: String,
    outcome: Result<String>,
}

fn suite<F: FnOnce() -> Result<String>>(lines: &mut Vec<SuiteLine>, name: &str, f: F) {
    lines.push(SuiteLine { name: name.to_string(), outcome: f() });
}

fn graph_suites(prefix: &str, graph: &DefiningGraph, seed: u64, lines: &mut Vec<SuiteLine>) {
    let c = RaagComplex::new(graph.clone());
    let base = c.base_vertex();
    suite(lines, &format!("{prefix}/median-oracle"), || {
        let n = verify::median_oracle_suite(&c, &base, 120, 3, seed)?;
        Ok(format!("{n} random triples agree with the interval oracle"))
    });
    suite(lines, &format!("{prefix}/relation-oracle"), || {
        let n = verify::relation_oracle_suite(&c, &base, 160, 3, seed + 1)?;
        Ok(format!("{n} wall pairs agree with the projection oracle"))
    });
    suite(lines, &format!("{prefix}/chain-cover"), || {
        let n = verify::dilworth_suite(250, 10, seed + 2)?;
        Ok(format!("{n} random posets match subset enumeration"))
    });
    suite(lines, &format!("{prefix}/embedding"), || {
        let words = verify::corpus_words(graph, 2);
        for w in &words {
            let g = c.element(w)?;
            verify::check_element(&c, &g, seed + 3)?;
        }
        Ok(format!("{} elements pass every window and sweep check", words.len()))
    });
    suite(lines, &format!("{prefix}/defect"), || {
        let word: String = graph.gens().map(|g| graph.name(g)).collect();
        let g = c.element(&word)?;
        let ax = axis::classify(&c, &g)?;
        let wa = axis::analyze_window(&c, &ax, axis::MAX_WINDOW_RADIUS)?;
        let family: Vec<_> = wa
            .antichain
            .iter()
            .map(|&i| wa.window.halfspace(i).clone())
            .collect();
        let ax2 = axis::recenter(&c, &ax, &wa)?;
        let win = Window::build(&c, &ax2, wa.window.radius())?;
        let emb = Embedding::build(&win, &family)?;
        let run = maximal_g_nested(&emb)?;
        let radius = 2 * win.ell() * win.radius();
        let quasi = CountingQuasimorphism::new(&c, run.segment, radius);
        let bounds = defect_bounds(c.is_tree_like());
        let report = quasi.sample_defect(win.base(), 3, 80, &bounds, seed + 4)?;
        if !report.clean() {
            return Err(Error::PropertyViolation(format!(
                "defect bounds exceeded: max delta {} against {}, max split gap {} against {}",
                report.max_abs_delta, report.delta_bound, report.max_split_gap, report.split_bound
            )));
        }
        let mode = if c.is_tree_like() { "tree" } else { "general" };
        Ok(format!(
            "word {word}: max delta {} within {}, split gap {} within {} ({mode} bounds)",
            report.max_abs_delta, report.delta_bound, report.max_split_gap, report.split_bound
        ))
    });
    suite(lines, &format!("{prefix}/wall-properties"), || {
        let elements: Vec<_> = verify::corpus_words(graph, 2)
            .iter()
            .map(|w| c.element(w))
            .collect::<Result<_>>()?;
        let report = verify::raaglike_check(&c, &base, &elements, 3, 500, seed + 5)?;
        Ok(format!(
            "{} samples: walls never cross, osculate, or self-osculate over their translates",
            report.samples
        ))
    });
}

fn staircase_suites(seed: u64, lines: &mut Vec<SuiteLine>) {
    let c = EuclideanComplex::fixture("staircase").expect("builtin fixture");
    let base = c.base_vertex();
    suite(lines, "staircase/median-oracle", || {
        let n = verify::median_oracle_suite(&c, &base, 120, 3, seed)?;
        Ok(format!("{n} random triples agree with the interval oracle"))
    });
    suite(lines, "staircase/relation-oracle", || {
        let n = verify::relation_oracle_suite(&c, &base, 160, 3, seed + 1)?;
        Ok(format!("{n} wall pairs agree with the projection oracle"))
    });
    suite(lines, "staircase/window", || {
        let g = c.automorphism().clone();
        let check = verify::check_element(&c, &g, seed + 2)?;
        Ok(format!(
            "window of the shift passes every sweep (d = {}, {} quadrant pairs)",
            check.dim, check.quadrant_pairs
        ))
    });
    suite(lines, "staircase/counting", || {
        let n = verify::staircase_counting_suite(6)?;
        Ok(format!(
            "{n} counts confirm the aligned run grows as n while the mixed pair stays at 1"
        ))
    });
}

fn glide_suites(seed: u64, lines: &mut Vec<SuiteLine>) {
    let c = EuclideanComplex::fixture("glide-plane").expect("builtin fixture");
    let base = c.base_vertex();
    suite(lines, "glide-plane/median-oracle", || {
        let n = verify::median_oracle_suite(&c, &base, 120, 3, seed)?;
        Ok(format!("{n} random triples agree with the interval oracle"))
    });
    suite(lines, "glide-plane/relation-oracle", || {
        let n = verify::relation_oracle_suite(&c, &base, 160, 3, seed + 1)?;
        Ok(format!("{n} wall pairs agree with the projection oracle"))
    });
    suite(lines, "glide-plane/power", || {
        let g = c.automorphism().clone();
        let ax = axis::classify(&c, &g)?;
        let k = axis::non_transverse_power(&c, &ax, axis::DEFAULT_POWER_CAP)?;
        if k != 2 {
            return Err(Error::PropertyViolation(format!(
                "expected the square to clear transverse crossings, got k = {k}"
            )));
        }
        Ok("the glide crosses its own walls; its square does not (k = 2)".into())
    });
    suite(lines, "glide-plane/window", || {
        let g2 = c.power(c.automorphism(), 2);
        let check = verify::check_element(&c, &g2, seed + 2)?;
        if check.dim != 2 {
            return Err(Error::PropertyViolation(format!(
                "expected a 2-dimensional window for the square, got {}",
                check.dim
            )));
        }
        Ok(format!("window of the square passes every sweep (d = {})", check.dim))
    });
    suite(lines, "glide-plane/minimal-set", || {
        let g = c.automorphism().clone();
        let probe = verify::minimal_set_probe(&c, &g, &base, 4);
        if probe.min_displacement != 1 || probe.max_minimal_degree > 2 {
            return Err(Error::PropertyViolation(format!(
                "expected a displacement-1 line, got displacement {} with degree {}",
                probe.min_displacement, probe.max_minimal_degree
            )));
        }
        Ok(format!(
            "minimal set is a line: displacement {}, at most {} minimal neighbors per vertex",
            probe.min_displacement, probe.max_minimal_degree
        ))
    });
}

fn subdivided_suites(seed: u64, lines: &mut Vec<SuiteLine>) {
    let c = EuclideanComplex::fixture("subdivided").expect("builtin fixture");
    let base = c.base_vertex();
    suite(lines, "subdivided/elliptic", || {
        match axis::classify(&c, c.automorphism()) {
            Err(Error::Elliptic) => Ok("the involution fixes a vertex, as expected".into()),
            Ok(_) => Err(Error::PropertyViolation(
                "the involution classified as hyperbolic".into(),
            )),
            Err(e) => Err(e),
        }
    });
    suite(lines, "subdivided/negative-control", || {
        let g = c.automorphism().clone();
        match verify::find_self_osculation(&c, &g, &base, 4) {
            Some(witness) => Ok(format!("found the predicted defect: {witness}")),
            None => Err(Error::PropertyViolation(
                "expected a self-osculating wall, found none in the ball".into(),
            )),
        }
    });
    suite(lines, "subdivided/sampled-control", || {
        let g = c.automorphism().clone();
        match verify::raaglike_check(&c, &base, &[g], 4, 800, seed) {
            Err(Error::PropertyViolation(msg)) => {
                Ok(format!("sampling rejects the action: {msg}"))
            }
            Err(e) => Err(e),
            Ok(_) => Err(Error::PropertyViolation(
                "sampling accepted an action known to break the wall properties".into(),
            )),
        }
    });
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    let mut lines = Vec::new();
    match (&args.target.graph, &args.target.fixture) {
        (Some(arg), None) => {
            let (name, graph) = resolve_graph(arg)?;
            graph_suites(&name, &graph, args.seed, &mut lines);
        }
        (None, Some(name)) => match name.as_str() {
            "staircase" => staircase_suites(args.seed, &mut lines),
            "glide-plane" => glide_suites(args.seed, &mut lines),
            "subdivided" => subdivided_suites(args.seed, &mut lines),
            other => return Err(Error::UnknownFixture(other.to_string())),
        },
        (None, None) => {
            for (i, builtin) in ["free2", "pentagon"].iter().enumerate() {
                let (name, graph) = resolve_graph(builtin)?;
                graph_suites(&name, &graph, args.seed + 100 * i as u64, &mut lines);
            }
            staircase_suites(args.seed + 300, &mut lines);
            glide_suites(args.seed + 400, &mut lines);
            subdivided_suites(args.seed + 500, &mut lines);
        }
        _ => unreachable!("clap rejects graph together with fixture"),
    }

    let mut text = String::new();
    let mut failed = 0usize;
    for line in &lines {
        match &line.outcome {
            Ok(detail) => {
                let _ = writeln!(text, "[pass] {}: {detail}", line.name);
            }
            Err(e) => {
                failed += 1;
                let _ = writeln!(text, "[FAIL] {}: {e}", line.name);
            }
        }
    }
    let _ = writeln!(
        text,
        "{} suites: {} passed, {} failed (seed {})",
        lines.len(),
        lines.len() - failed,
        failed,
        args.seed
    );
    write_out(&args.out, &text)?;
    let _ = args.strict;
    if failed > 0 {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Embed(args) => cmd_embed(args),
        Cmd::Scl(args) => cmd_scl(args),
        Cmd::Verify(args) => cmd_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
