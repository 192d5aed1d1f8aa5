//! Command-line front end: parse instance files, solve, verify completions,
//! generate instance families, export DOT.
//!
//! Exit codes: 0 success (including a NO answer), 1 failed verification,
//! 2 parse or parameter errors, 3 precheck rejection, 4 oracle disagreement.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::digraph::{classify_switches, is_acyclic, Digraph, EdgeId, RejectReason, Vertex};
use crate::dp::{solve, SolveOptions};
use crate::generate::{alt_cycle, random_planar_dag};
use crate::oracle::{brute_force_min_completion, BRUTE_FORCE_MAX_N};
use crate::planarity::{is_planar, is_st_planar};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("reject: {0}")]
    Reject(RejectReason),
    #[error("oracle-check failed: {0}")]
    Oracle(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Reject(_) => 3,
            CliError::Oracle(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(name = "stpec", about = "Exact edge completion to an st-planar digraph")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether at most k added edges make the input st-planar.
    Solve {
        /// Instance file (text edge list, or JSON with a .json extension).
        #[arg(long)]
        input: PathBuf,
        /// Completion budget.
        #[arg(short, long)]
        k: usize,
        /// Print the witness edges on a YES answer.
        #[arg(long)]
        witness: bool,
        /// Cross-check the answer against brute force on small inputs.
        #[arg(long)]
        oracle_check: bool,
        /// Root the search at the edge U V instead of trying all edges.
        #[arg(long, num_args = 2, value_names = ["U", "V"])]
        ref_edge: Option<Vec<Vertex>>,
        /// Solve over the embedding computed by the planarity test
        /// (rotation system and outer face) instead of all embeddings.
        #[arg(long)]
        fixed_embedding: bool,
        /// Print per-reference-edge table statistics.
        #[arg(long)]
        trace: bool,
        /// Worker threads fanned out over reference edges.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Write an instance from a named family.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Sources (and sinks) of the alternating cycle; requires alt-cycle.
        #[arg(long)]
        m: Option<usize>,
        /// Vertex count; requires random-planar.
        #[arg(long)]
        n: Option<usize>,
        /// RNG seed; falls back to STPEC_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Check that the instance plus the added edges is st-planar.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Added edges, one "u v" per line (or a JSON array of pairs).
        #[arg(long)]
        edges: PathBuf,
    },
    /// Render the instance (and optional added edges) as DOT.
    ExportDot {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        edges: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    AltCycle,
    RandomPlanar,
}

pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<ExitCode, CliError> {
    match cmd {
        Cmd::Solve {
            input,
            k,
            witness,
            oracle_check,
            ref_edge,
            fixed_embedding,
            trace,
            jobs,
        } => cmd_solve(
            &input,
            k,
            witness,
            oracle_check,
            ref_edge,
            fixed_embedding,
            trace,
            jobs,
        ),
        Cmd::Generate { family, m, n, seed, output } => cmd_generate(family, m, n, seed, &output),
        Cmd::Verify { input, edges } => cmd_verify(&input, &edges),
        Cmd::ExportDot { input, edges } => cmd_export_dot(&input, edges.as_deref()),
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_solve(
    input: &Path,
    k: usize,
    witness: bool,
    oracle_check: bool,
    ref_edge: Option<Vec<Vertex>>,
    fixed_embedding: bool,
    trace: bool,
    jobs: usize,
) -> Result<ExitCode, CliError> {
    let g = load_instance(input)?;
    let reference_edge = match ref_edge {
        Some(pair) => Some(find_edge(&g, pair[0], pair[1])?),
        None => None,
    };
    let opts = SolveOptions { reference_edge, fixed_embedding, jobs };
    let sol = solve(&g, k, &opts);
    if let Some(reason) = sol.reject {
        return Err(CliError::Reject(reason));
    }
    let mut out = String::new();
    if sol.answer {
        writeln!(out, "YES {}", sol.min_edges.unwrap()).unwrap();
        if witness {
            for (u, v) in sol.witness.as_deref().unwrap() {
                writeln!(out, "witness {u} {v}").unwrap();
            }
        }
    } else {
        writeln!(out, "NO").unwrap();
    }
    if trace {
        for (e, t) in &sol.ref_traces {
            let (u, v) = g.edge(*e);
            writeln!(
                out,
                "trace ref {u} {v} entries {} max-sig {}",
                t.table_entries, t.max_signature_len
            )
            .unwrap();
        }
    }
    print!("{out}");
    if oracle_check {
        if g.vertex_count() <= BRUTE_FORCE_MAX_N {
            let oracle = brute_force_min_completion(&g, k);
            let oracle_min = oracle.map(|(c, _)| c);
            if sol.answer != oracle_min.is_some()
                || (sol.answer && sol.min_edges != oracle_min)
            {
                return Err(CliError::Oracle(format!(
                    "solver min {:?}, oracle min {:?} (k={k})",
                    sol.min_edges, oracle_min
                )));
            }
            println!("oracle-check ok");
        } else {
            println!(
                "oracle-check skipped: {} vertices exceed the exhaustive limit {}",
                g.vertex_count(),
                BRUTE_FORCE_MAX_N
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(
    family: Family,
    m: Option<usize>,
    n: Option<usize>,
    seed: Option<u64>,
    output: &Path,
) -> Result<ExitCode, CliError> {
    let seed = seed
        .or_else(|| std::env::var("STPEC_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0);
    let (g, comment) = match family {
        Family::AltCycle => {
            let m = m.ok_or_else(|| CliError::Parse("--m is required for alt-cycle".into()))?;
            if m < 2 {
                return Err(CliError::Parse("--m must be at least 2".into()));
            }
            (alt_cycle(m), format!("family alt-cycle m={m}"))
        }
        Family::RandomPlanar => {
            let n = n.ok_or_else(|| CliError::Parse("--n is required for random-planar".into()))?;
            if n < 3 {
                return Err(CliError::Parse("--n must be at least 3".into()));
            }
            (random_planar_dag(n, seed), format!("family random-planar n={n} seed={seed}"))
        }
    };
    let text = if is_json(output) {
        instance_json(&g)
    } else {
        instance_text(&g, &comment)
    };
    fs::write(output, text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", output.display())))?;
    println!(
        "wrote {} ({} vertices, {} edges, seed {seed})",
        output.display(),
        g.vertex_count(),
        g.edge_count()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(input: &Path, edges: &Path) -> Result<ExitCode, CliError> {
    let g = load_instance(input)?;
    let added = load_edges(edges, g.vertex_count())?;
    let aug = match g.with_edges(&added) {
        Ok(aug) => aug,
        Err(e) => {
            println!("invalid completion: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let mut failures = Vec::new();
    if !is_acyclic(&aug) {
        failures.push("violated (1): the graph has a directed cycle".to_string());
    }
    let sw = classify_switches(&aug);
    if sw.n_sources != 1 || sw.n_sinks != 1 {
        let sources: Vec<Vertex> = sw.sources().collect();
        let sinks: Vec<Vertex> = sw.sinks().collect();
        failures.push(format!("violated (2): sources {sources:?}, sinks {sinks:?}"));
    }
    if failures.is_empty() && is_st_planar(&aug).is_none() {
        failures.push(if is_planar(&aug) {
            "violated (3): no planar drawing puts the source and sink on a common face".to_string()
        } else {
            "violated (3): the graph is not planar".to_string()
        });
    }
    if failures.is_empty() {
        println!("ok");
        Ok(ExitCode::SUCCESS)
    } else {
        for f in &failures {
            println!("{f}");
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_export_dot(input: &Path, edges: Option<&Path>) -> Result<ExitCode, CliError> {
    let g = load_instance(input)?;
    let added = match edges {
        Some(p) => load_edges(p, g.vertex_count())?,
        None => Vec::new(),
    };
    print!("{}", dot_text(&g, &added));
    Ok(ExitCode::SUCCESS)
}

pub fn dot_text(g: &Digraph, added: &[(Vertex, Vertex)]) -> String {
    let mut s = String::from("digraph stpec {\n");
    for v in 0..g.vertex_count() {
        writeln!(s, "  {v};").unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(s, "  {u} -> {v};").unwrap();
    }
    let mut added = added.to_vec();
    added.sort_unstable();
    for (u, v) in added {
        writeln!(s, "  {u} -> {v} [style=dashed];").unwrap();
    }
    s.push_str("}\n");
    s
}

fn find_edge(g: &Digraph, u: Vertex, v: Vertex) -> Result<EdgeId, CliError> {
    g.edges()
        .iter()
        .position(|&e| e == (u, v))
        .ok_or_else(|| CliError::Parse(format!("no edge {u} -> {v} in the input")))
}

fn is_json(path: &Path) -> bool {
    path.extension().is_some_and(|x| x == "json")
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    n: usize,
    m: usize,
    edges: Vec<(Vertex, Vertex)>,
}

pub fn instance_text(g: &Digraph, comment: &str) -> String {
    let mut s = String::new();
    if !comment.is_empty() {
        writeln!(s, "# {comment}").unwrap();
    }
    writeln!(s, "{} {}", g.vertex_count(), g.edge_count()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn instance_json(g: &Digraph) -> String {
    let inst = InstanceJson {
        n: g.vertex_count(),
        m: g.edge_count(),
        edges: g.edges().to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&inst).unwrap();
    s.push('\n');
    s
}

pub fn load_instance(path: &Path) -> Result<Digraph, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if is_json(path) {
        parse_instance_json(path, &text)
    } else {
        parse_instance_text(path, &text)
    }
}

fn parse_instance_text(path: &Path, text: &str) -> Result<Digraph, CliError> {
    let loc = |line: usize, msg: &str| {
        CliError::Parse(format!("{}:{line}: {msg}", path.display()))
    };
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            let what = if header.is_none() { "header `n m`" } else { "edge `u v`" };
            return Err(loc(line_no, &format!("expected {what}")));
        }
        let a: usize = fields[0]
            .parse()
            .map_err(|_| loc(line_no, &format!("bad number `{}`", fields[0])))?;
        let b: usize = fields[1]
            .parse()
            .map_err(|_| loc(line_no, &format!("bad number `{}`", fields[1])))?;
        match header {
            None => header = Some((a, b)),
            Some((n, m)) => {
                if edges.len() == m {
                    return Err(loc(line_no, &format!("more than {m} edge lines")));
                }
                if a >= n || b >= n {
                    return Err(loc(line_no, &format!("vertex id out of range 0..{n}")));
                }
                if a == b {
                    return Err(loc(line_no, "self-loop"));
                }
                let e = (a as Vertex, b as Vertex);
                if edges.contains(&e) {
                    return Err(loc(line_no, &format!("duplicate edge {a} {b}")));
                }
                edges.push(e);
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(loc(1, "missing header `n m`"));
    };
    if edges.len() != m {
        return Err(loc(
            last_line.max(1),
            &format!("expected {m} edges, found {}", edges.len()),
        ));
    }
    Digraph::new(n, edges).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn parse_instance_json(path: &Path, text: &str) -> Result<Digraph, CliError> {
    let err = |msg: String| CliError::Parse(format!("{}: {msg}", path.display()));
    let inst: InstanceJson = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    if inst.edges.len() != inst.m {
        return Err(err(format!("m is {} but {} edges given", inst.m, inst.edges.len())));
    }
    for (i, &(u, v)) in inst.edges.iter().enumerate() {
        if u as usize >= inst.n || v as usize >= inst.n {
            return Err(err(format!("edge {i}: vertex id out of range 0..{}", inst.n)));
        }
        if u == v {
            return Err(err(format!("edge {i}: self-loop")));
        }
        if inst.edges[..i].contains(&(u, v)) {
            return Err(err(format!("edge {i}: duplicate edge {u} {v}")));
        }
    }
    Digraph::new(inst.n, inst.edges).map_err(|e| err(e.to_string()))
}

pub fn load_edges(path: &Path, n: usize) -> Result<Vec<(Vertex, Vertex)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    if is_json(path) {
        let err = |msg: String| CliError::Parse(format!("{}: {msg}", path.display()));
        let edges: Vec<(Vertex, Vertex)> =
            serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(err(format!("vertex id out of range 0..{n}")));
            }
        }
        return Ok(edges);
    }
    let loc = |line: usize, msg: &str| {
        CliError::Parse(format!("{}:{line}: {msg}", path.display()))
    };
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(loc(line_no, "expected edge `u v`"));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| loc(line_no, &format!("bad number `{}`", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| loc(line_no, &format!("bad number `{}`", fields[1])))?;
        if u >= n || v >= n {
            return Err(loc(line_no, &format!("vertex id out of range 0..{n}")));
        }
        edges.push((u as Vertex, v as Vertex));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write as _;

    fn tmp(content: &str, ext: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::Builder::new().suffix(ext).tempfile().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn text_round_trip() {
        let g = alt_cycle(2);
        let f = tmp(&instance_text(&g, "round trip"), ".txt");
        let parsed = load_instance(f.path()).unwrap();
        assert_eq!(parsed.vertex_count(), g.vertex_count());
        assert_eq!(parsed.edges(), g.edges());
    }

    #[test]
    fn json_round_trip() {
        let g = random_planar_dag(6, 1);
        let f = tmp(&instance_json(&g), ".json");
        let parsed = load_instance(f.path()).unwrap();
        assert_eq!(parsed.edges(), g.edges());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("2 1\n0 0\n", "self-loop"),
            ("2 2\n0 1\n0 1\n", "duplicate"),
            ("2 1\n0 5\n", "out of range"),
            ("2 1\n", "expected 1 edges"),
            ("2 1\n0 1\n1 0\n", "more than"),
            ("x y\n", "bad number"),
        ];
        for (content, needle) in cases {
            let f = tmp(content, ".txt");
            let err = load_instance(f.path()).unwrap_err().to_string();
            assert!(err.contains(needle), "{content:?} -> {err}");
            assert!(err.contains(':'), "location missing in {err}");
        }
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let f = tmp("# header\n\n4 4 # counts\n0 1\n0 3\n2 1\n2 3\n", ".txt");
        let g = load_instance(f.path()).unwrap();
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn dot_is_stable_and_marks_added_edges() {
        let g = alt_cycle(2);
        let a = dot_text(&g, &[(3, 1)]);
        let b = dot_text(&g, &[(3, 1)]);
        assert_eq!(a, b);
        assert!(a.contains("0 -> 1;"));
        assert!(a.contains("3 -> 1 [style=dashed];"));
    }
}
