//! Command-line front end. [`run`] takes the argument vector and output
//! streams and returns the exit status: 0 on success, 1 when an input file
//! is unreadable or malformed, 2 on a usage error or a violated
//! precondition (a non-aligned graph for `resolve`, a base that is not
//! normal-crossings for `strata`, and so on).

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use aligning::alignment::{e_strong_level, is_aligned, is_irregularly_aligned};
use aligning::atlas::{
    build_atlas, closed_fibre, enumerate_thickness, is_thickness_function, separatedness_violation,
    trait_factorisation, AtlasError, ThicknessFunction,
};
use aligning::format::{
    atlas_index, chart_file_name, chart_to_json, chart_to_text, graph_to_dot, graph_to_json, graph_to_value,
    parse_graph, strata_to_dot, strata_to_json, subset_name, trace_to_dot, trace_to_json,
};
use aligning::graph::circuit_partition;
use aligning::resolution::resolve;
use aligning::strata::{stratify, verify_controlling};
use aligning::{LabelledGraph, Valuation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(
    name = "aligning",
    version,
    about = "Alignment, thickness functions and chart atlases for labelled dual graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Partition, alignment report and strong-alignment level
    Analyze(Common),
    /// Enumerate thickness functions up to --max, or check one with --validate
    Thickness {
        #[command(flatten)]
        common: Common,
        #[arg(long, required_unless_present = "validate")]
        max: Option<u32>,
        /// Values in edge-id order
        #[arg(long, value_delimiter = ',')]
        validate: Option<Vec<u32>>,
    },
    /// Write the chart atlas with values up to --max into --out
    Atlas {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max: u32,
        #[arg(long)]
        out: PathBuf,
        /// Report closed fibres over the point where these generators vanish
        #[arg(long, value_delimiter = ',')]
        vanishing: Option<Vec<String>>,
    },
    /// Blow up until every label has valuation at most 1
    Resolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_valuation)]
        valuation: Valuation,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Strata over a normal-crossings base and the controlling check
    Strata {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Factor a trait through the atlas
    Trait {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_valuation)]
        valuation: Valuation,
        /// Defaults to the largest canonical value
        #[arg(long)]
        max: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct Common {
    graph: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Dot,
}

fn parse_valuation(s: &str) -> Result<Valuation, String> {
    let mut pairs = Vec::new();
    for item in s.split(',').filter(|i| !i.trim().is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected generator=value, got `{item}`"))?;
        let v: u64 = v.trim().parse().map_err(|_| format!("`{v}` is not a non-negative integer"))?;
        pairs.push((k.trim().to_owned(), v));
    }
    Ok(Valuation::new(pairs))
}

enum Failure {
    Input(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Precondition(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) => m,
        }
    }
}

fn precondition(e: impl std::fmt::Display) -> Failure {
    Failure::Precondition(e.to_string())
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let mut warnings = Vec::new();
    let result = dispatch(cli.command, &mut warnings);
    for w in warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                1
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load(path: &Path) -> Result<LabelledGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json value serialises");
    s.push('\n');
    s
}

fn check_generators<'a>(g: &LabelledGraph, names: impl IntoIterator<Item = &'a String>) -> Result<(), Failure> {
    match names.into_iter().find(|x| !g.generators().contains(x)) {
        Some(x) => Err(Failure::Precondition(format!("`{x}` is not a generator of the graph"))),
        None => Ok(()),
    }
}

fn dispatch(command: Command, warnings: &mut Vec<String>) -> Result<String, Failure> {
    match command {
        Command::Analyze(c) => analyze(&load(&c.graph)?, c.format),
        Command::Thickness { common, max, validate } => thickness(&load(&common.graph)?, common.format, max, validate),
        Command::Atlas { common, max, out, vanishing } => {
            let g = load(&common.graph)?;
            if !g.generators().is_nc() {
                warnings.push("base is not normal-crossings: each chart presents an algebra that may be larger than the closure of the open locus".into());
            }
            atlas(&g, common.format, max, &out, vanishing)
        }
        Command::Resolve { common, valuation, out } => {
            let g = load(&common.graph)?;
            check_generators(&g, valuation.values().keys())?;
            resolve_cmd(&g, common.format, &valuation, out.as_deref())
        }
        Command::Strata { common, out } => strata(&load(&common.graph)?, common.format, out.as_deref()),
        Command::Trait { common, valuation, max } => {
            let g = load(&common.graph)?;
            check_generators(&g, valuation.values().keys())?;
            trait_cmd(&g, common.format, &valuation, max)
        }
    }
}

fn set_name<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    format!("{{{}}}", items.into_iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
}

fn analyze(g: &LabelledGraph, format: Format) -> Result<String, Failure> {
    let partition = circuit_partition(g);
    let report = is_aligned(g);
    let irregular = is_irregularly_aligned(g);
    let level = e_strong_level(g);
    match format {
        Format::Dot => Ok(graph_to_dot(g, "graph")),
        Format::Json => Ok(pretty(&json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "betti_number": g.betti_number(),
            "partition": partition,
            "alignment": report,
            "irregularly_aligned": irregular,
            "e_strong_level": level,
        }))),
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "graph: {} vertices, {} edges, first Betti number {}",
                g.vertex_count(),
                g.edge_count(),
                g.betti_number()
            );
            s.push_str("classes:\n");
            for class in &report.classes {
                let verdict = match (&class.root, class.aligned) {
                    (Some(root), _) => {
                        let mult: Vec<String> = root.multiplicities.values().map(u32::to_string).collect();
                        format!("aligned, primitive {}, multiplicities ({})", root.primitive, mult.join(","))
                    }
                    (None, true) => "aligned, unit labels".to_owned(),
                    (None, false) => format!("not aligned ({})", class.reason.as_deref().unwrap_or("no common root")),
                };
                let _ = writeln!(s, "  {}: {verdict}", set_name(&class.edges));
            }
            let _ = writeln!(s, "aligned: {}", report.aligned);
            let _ = writeln!(s, "irregularly aligned: {irregular}");
            let _ = writeln!(s, "e-strong level: {}", level.map_or("none".to_owned(), |l| l.to_string()));
            Ok(s)
        }
    }
}

fn thickness(
    g: &LabelledGraph,
    format: Format,
    max: Option<u32>,
    validate: Option<Vec<u32>>,
) -> Result<String, Failure> {
    if let Some(values) = validate {
        let m = ThicknessFunction::from_values(g, &values).map_err(precondition)?;
        let valid = is_thickness_function(g, &m);
        return Ok(match format {
            Format::Json => pretty(&json!({ "thickness": m, "valid": valid })),
            _ => format!("{m}: {}\n", if valid { "valid" } else { "invalid" }),
        });
    }
    let max = max.expect("clap requires --max without --validate");
    let all = enumerate_thickness(g, max);
    Ok(match format {
        Format::Json => pretty(&json!({ "bound": max, "count": all.len(), "thickness_functions": all })),
        _ => {
            let mut s = format!("{} thickness functions with values at most {max}\n", all.len());
            for m in &all {
                let _ = writeln!(s, "{m}");
            }
            s
        }
    })
}

/// Writes `files` into a fresh directory next to `out`, then renames it into
/// place, so a failure never leaves a partial directory behind.
fn write_directory(out: &Path, files: Vec<(String, String)>) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Input(format!("{}: {e}", out.display()));
    if out.exists() {
        let occupied = !out.is_dir() || fs::read_dir(out).map_err(io)?.next().is_some();
        if occupied {
            return Err(Failure::Precondition(format!("{} exists and is not an empty directory", out.display())));
        }
    }
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(io)?;
    let staging = tempfile::Builder::new().prefix(".aligning-").tempdir_in(&parent).map_err(io)?;
    for (name, contents) in files {
        fs::write(staging.path().join(name), contents).map_err(io)?;
    }
    if out.exists() {
        fs::remove_dir(out).map_err(io)?;
    }
    let staged = staging.keep();
    fs::rename(&staged, out).map_err(|e| {
        let _ = fs::remove_dir_all(&staged);
        io(e)
    })
}

fn atlas(
    g: &LabelledGraph,
    format: Format,
    max: u32,
    out: &Path,
    vanishing: Option<Vec<String>>,
) -> Result<String, Failure> {
    let atlas = build_atlas(g, max).map_err(precondition)?;
    let mut fibres = Vec::new();
    if let Some(names) = &vanishing {
        check_generators(g, names)?;
        let point: BTreeSet<String> = names.iter().cloned().collect();
        for c in &atlas.charts {
            let report = closed_fibre(c, &point).map_err(|e| match e {
                AtlasError::NonNcChart(_) => precondition(format!("fibre summary: {e}")),
                other => precondition(other),
            })?;
            fibres.push((c.thickness.clone(), report));
        }
    }
    let mut files = vec![("atlas.index".to_owned(), atlas_index(&atlas))];
    for (i, c) in atlas.charts.iter().enumerate() {
        files.push((format!("{}.json", chart_file_name(i)), chart_to_json(c)));
        files.push((format!("{}.txt", chart_file_name(i)), chart_to_text(c)));
    }
    write_directory(out, files)?;
    let point_name = vanishing.as_ref().map(set_name);
    let nonempty: Vec<&(ThicknessFunction, _)> = fibres.iter().filter(|(_, r)| r.nonempty).collect();
    Ok(match format {
        Format::Json => {
            let summary = point_name.as_ref().map(|p| {
                let charts: Vec<_> = nonempty.iter().map(|(m, r)| json!({ "thickness": m, "fibre": r })).collect();
                json!({ "point": p, "nonempty_charts": charts })
            });
            pretty(&json!({
                "charts": atlas.charts.len(),
                "overlaps": atlas.overlaps.len(),
                "bound": max,
                "fibres": summary,
            }))
        }
        _ => {
            let mut s =
                format!("{} charts, {} overlaps, values at most {max}\n", atlas.charts.len(), atlas.overlaps.len());
            if let Some(p) = point_name {
                let _ = writeln!(s, "closed fibre at {p}: {} charts with non-empty fibre", nonempty.len());
                for (m, r) in nonempty {
                    let _ = writeln!(
                        s,
                        "  {m}: torus rank {}, {}",
                        r.torus_rank,
                        if r.connected { "connected" } else { "disconnected" }
                    );
                }
            }
            s
        }
    })
}

fn resolve_cmd(g: &LabelledGraph, format: Format, v: &Valuation, out: Option<&Path>) -> Result<String, Failure> {
    let trace = resolve(g, v).map_err(precondition)?;
    if let Some(dir) = out {
        let mut files = vec![("trace.json".to_owned(), trace_to_json(&trace))];
        for (i, s) in trace.steps.iter().enumerate() {
            files.push((format!("step_{i:03}.graph"), graph_to_json(&s.graph)));
            files.push((format!("step_{i:03}.dot"), graph_to_dot(&s.graph, &format!("step {i}"))));
        }
        write_directory(dir, files)?;
    }
    Ok(match format {
        Format::Json => trace_to_json(&trace),
        Format::Dot => trace_to_dot(&trace),
        Format::Text => {
            let mut s = format!("{} steps\n", trace.step_count());
            for (i, step) in trace.steps.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "step {i}: delta {}, {} vertices, {} edges",
                    step.delta,
                    step.graph.vertex_count(),
                    step.graph.edge_count()
                );
            }
            s
        }
    })
}

fn strata(g: &LabelledGraph, format: Format, out: Option<&Path>) -> Result<String, Failure> {
    let family = stratify(g).map_err(precondition)?;
    let report = verify_controlling(&family).map_err(precondition)?;
    if let Some(dir) = out {
        let mut files = vec![
            ("strata.json".to_owned(), strata_to_json(&family)),
            ("strata.dot".to_owned(), strata_to_dot(&family)),
        ];
        for (k, s) in family.strata.values().enumerate() {
            files.push((format!("stratum_{k:04}.graph"), graph_to_json(&s.graph)));
        }
        write_directory(dir, files)?;
    }
    Ok(match format {
        Format::Dot => strata_to_dot(&family),
        Format::Json => {
            let strata: Vec<_> = family
                .strata
                .iter()
                .map(|(j, s)| json!({ "vanishing": j, "graph": graph_to_value(&s.graph) }))
                .collect();
            pretty(&json!({ "strata": strata, "controlling": report }))
        }
        Format::Text => {
            let mut s = format!("{} strata\n", family.strata.len());
            for (j, stratum) in &family.strata {
                let edges: Vec<String> = stratum.graph.edges().map(|e| format!("{}: {}", e.id, e.label)).collect();
                let _ = writeln!(
                    s,
                    "  {}: {} vertices, {} edges [{}]",
                    subset_name(j),
                    stratum.graph.vertex_count(),
                    stratum.graph.edge_count(),
                    edges.join(", ")
                );
            }
            let _ = writeln!(s, "controlling: {}", if report.passed { "passed" } else { "failed" });
            for entry in report.entries.iter().filter(|e| e.witness.is_none()) {
                let _ = writeln!(s, "  no witness for {}", subset_name(&entry.stratum));
            }
            s
        }
    })
}

fn trait_cmd(g: &LabelledGraph, format: Format, v: &Valuation, max: Option<u32>) -> Result<String, Failure> {
    let probe = trait_factorisation(g, v, 0).map_err(precondition)?;
    let bound = max.unwrap_or_else(|| probe.canonical.values().values().copied().max().unwrap_or(0));
    let t = trait_factorisation(g, v, bound).map_err(precondition)?;
    let violation = separatedness_violation(g, v, &t.all_valid).map_err(precondition)?;
    Ok(match format {
        Format::Json => pretty(&json!({
            "canonical": t.canonical,
            "scales": t.scales,
            "bound": bound,
            "all_valid": t.all_valid,
            "separated": violation.is_none(),
        })),
        _ => {
            let mut s = format!("canonical: {}\n", t.canonical);
            for scale in &t.scales {
                let _ = writeln!(s, "  t = {} on {}", scale.t, set_name(&scale.edges));
            }
            let _ = writeln!(s, "valid with values at most {bound}: {}", t.all_valid.len());
            for m in &t.all_valid {
                let _ = writeln!(s, "  {m}");
            }
            match violation {
                None => s.push_str("separatedness: ok\n"),
                Some((m, n, e)) => {
                    let _ = writeln!(s, "separatedness: violated by {m} and {n} at {e}");
                }
            }
            s
        }
    })
}
