//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `--nocapture` to see the lines on success.

use std::collections::BTreeSet;
use std::io::Write as _;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use stpec::digraph::{classify_switches, RejectReason, Vertex};
use stpec::dp::{solve, Solution, SolveOptions};
use stpec::generate::{alt_cycle, random_planar_cyclic, random_planar_dag};
use stpec::oracle::{brute_force_min_completion, exhaustive_st_check};
use stpec::planarity::is_st_planar;
use stpec::Digraph;

const K_MAX: usize = 3;

struct Eval {
    n: usize,
    seed: u64,
    g: Digraph,
    /// solve(g, k) for k = 0..=3, free embedding.
    solutions: Vec<Solution>,
    /// Exhaustive minimum within K_MAX added edges.
    brute: Option<usize>,
}

struct Corpus {
    evals: Vec<Eval>,
    build_time: std::time::Duration,
}

static CORPUS: OnceLock<Corpus> = OnceLock::new();

fn jobs() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get().min(8))
        .unwrap_or(1)
}

fn corpus() -> &'static Corpus {
    CORPUS.get_or_init(|| {
        let start = Instant::now();
        let mut evals = Vec::new();
        for n in 5..=8 {
            for seed in 0..50 {
                let g = random_planar_dag(n, seed);
                let solutions: Vec<Solution> = (0..=K_MAX)
                    .map(|k| {
                        solve(&g, k, &SolveOptions { jobs: jobs(), ..SolveOptions::default() })
                    })
                    .collect();
                let brute = brute_force_min_completion(&g, K_MAX).map(|(c, _)| c);
                evals.push(Eval { n, seed, g, solutions, brute });
            }
        }
        Corpus { evals, build_time: start.elapsed() }
    })
}

fn line(criterion: u32, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion}: {detail}");
}

#[test]
fn criterion_01_oracle_equivalence_decision() {
    let c = corpus();
    let mut disagreements = Vec::new();
    for e in &c.evals {
        for k in 0..=K_MAX {
            let want = e.brute.map(|m| m <= k).unwrap_or(false);
            if e.solutions[k].answer != want {
                disagreements.push(format!(
                    "n={} seed={} k={k}: solver {} oracle {}",
                    e.n, e.seed, e.solutions[k].answer, want
                ));
            }
        }
    }
    line(
        1,
        disagreements.is_empty(),
        &format!(
            "{} instances x 4 budgets, {} disagreements, corpus built in {:.1}s{}",
            c.evals.len(),
            disagreements.len(),
            c.build_time.as_secs_f64(),
            if disagreements.is_empty() {
                String::new()
            } else {
                format!("; first: {}", disagreements[0])
            }
        ),
    );
}

#[test]
fn criterion_02_oracle_equivalence_optimum() {
    let c = corpus();
    let mut mismatches = 0;
    let mut checked = 0;
    for e in &c.evals {
        for k in 0..=K_MAX {
            let oracle_yes = e.brute.map(|m| m <= k).unwrap_or(false);
            if e.solutions[k].answer && oracle_yes {
                checked += 1;
                if e.solutions[k].min_edges != e.brute {
                    mismatches += 1;
                }
            }
        }
    }
    line(
        2,
        mismatches == 0 && checked > 0,
        &format!("{checked} YES answers compared, {mismatches} optimum mismatches"),
    );
}

fn run_cmd_verify(g: &Digraph, witness: &[(Vertex, Vertex)]) -> bool {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("g.txt");
    let edges = dir.path().join("w.txt");
    std::fs::write(&input, stpec::cli::instance_text(g, "")).unwrap();
    let mut wf = std::fs::File::create(&edges).unwrap();
    for (u, v) in witness {
        writeln!(wf, "{u} {v}").unwrap();
    }
    drop(wf);
    Command::new(env!("CARGO_BIN_EXE_stpec"))
        .args(["verify", "--input"])
        .arg(&input)
        .arg("--edges")
        .arg(&edges)
        .stdout(std::process::Stdio::null())
        .stderr(std::process::Stdio::null())
        .status()
        .unwrap()
        .success()
}

#[test]
fn criterion_03_witness_soundness() {
    let c = corpus();
    let mut yes = 0;
    let mut bad = Vec::new();
    let mut verified: BTreeSet<(usize, Vec<(Vertex, Vertex)>)> = BTreeSet::new();
    for (i, e) in c.evals.iter().enumerate() {
        for k in 0..=K_MAX {
            let s = &e.solutions[k];
            if !s.answer {
                continue;
            }
            yes += 1;
            let min = s.min_edges.unwrap();
            let w = s.witness.clone().unwrap();
            if w.len() != min || min > k {
                bad.push(format!("n={} seed={} k={k}: size {} min {min}", e.n, e.seed, w.len()));
                continue;
            }
            if verified.insert((i, w.clone())) && !run_cmd_verify(&e.g, &w) {
                bad.push(format!("n={} seed={} k={k}: verify rejected", e.n, e.seed));
            }
        }
    }
    line(
        3,
        bad.is_empty() && yes > 0,
        &format!(
            "{yes} YES answers, {} distinct witnesses verified, {} failures{}",
            verified.len(),
            bad.len(),
            if bad.is_empty() { String::new() } else { format!("; first: {}", bad[0]) }
        ),
    );
}

#[test]
fn criterion_04_alternating_cycle_family() {
    let mut ok = true;
    let mut detail = String::new();
    for m in 2..=3usize {
        let g = alt_cycle(m);
        let oracle = brute_force_min_completion(&g, K_MAX).map(|(c, _)| c);
        let at_min = solve(&g, m, &SolveOptions::default());
        let below = solve(&g, m - 1, &SolveOptions::default());
        let good = oracle == Some(m)
            && at_min.answer
            && at_min.min_edges == Some(m)
            && !below.answer;
        ok &= good;
        detail.push_str(&format!("m={m}: oracle min {oracle:?}, solver min {:?}; ", at_min.min_edges));
    }
    detail.push_str("minima frozen from brute force");
    line(4, ok, &detail);
}

#[test]
fn criterion_05_embedding_sensitivity() {
    let c = corpus();
    let mut found = None;
    for e in &c.evals {
        let free = &e.solutions[K_MAX];
        if !free.answer {
            continue;
        }
        let fixed = solve(
            &e.g,
            K_MAX,
            &SolveOptions { fixed_embedding: true, ..SolveOptions::default() },
        );
        let strict = match (fixed.answer, fixed.min_edges) {
            (true, Some(fm)) => fm > free.min_edges.unwrap(),
            _ => true,
        };
        if strict {
            found = Some(format!(
                "n={} seed={}: free min {:?}, fixed min {:?}",
                e.n,
                e.seed,
                free.min_edges,
                fixed.min_edges
            ));
            break;
        }
    }
    let detail = found.clone().unwrap_or_else(|| "no instance found in corpus".to_string());
    line(5, found.is_some(), &detail);
}

#[test]
fn criterion_06_short_signatures() {
    let c = corpus();
    let mut worst = vec![0usize; K_MAX + 1];
    let mut violations = 0;
    for e in &c.evals {
        for k in 0..=K_MAX {
            let len = e.solutions[k].trace.max_signature_len;
            worst[k] = worst[k].max(len);
            if len > 4 * k + 2 {
                violations += 1;
            }
        }
    }
    line(
        6,
        violations == 0,
        &format!("longest stored signature per budget {worst:?}, bounds [2, 6, 10, 14], {violations} violations"),
    );
}

#[test]
fn criterion_07_lower_bound() {
    let c = corpus();
    let mut violations = 0;
    let mut yes = 0;
    for e in &c.evals {
        let sw = classify_switches(&e.g);
        let bound = sw.n_sources.max(sw.n_sinks).saturating_sub(1);
        for k in 0..=K_MAX {
            if e.solutions[k].answer {
                yes += 1;
                if e.solutions[k].min_edges.unwrap() < bound {
                    violations += 1;
                }
            }
        }
    }
    line(
        7,
        violations == 0 && yes > 0,
        &format!("{yes} YES answers against max(#sources-1, #sinks-1), {violations} violations"),
    );
}

#[test]
fn criterion_08_checker_soundness() {
    // Fixed enumeration corpus, all with at most 6 vertices.
    let mut graphs: Vec<Digraph> = Vec::new();
    graphs.push(Digraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap());
    graphs.push(alt_cycle(2));
    graphs.push(alt_cycle(3));
    for n in 3..=6u32 {
        // Oriented cycle.
        let cyc: Vec<(Vertex, Vertex)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        graphs.push(Digraph::new(n as usize, cyc).unwrap());
    }
    for n in 3..=5u32 {
        // Transitive tournament; K5 is nonplanar, the checkers must agree
        // on that too. K6 would blow the rotation enumeration up.
        let mut tt = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                tt.push((a, b));
            }
        }
        graphs.push(Digraph::new(n as usize, tt).unwrap());
    }
    for n in 4..=6 {
        for seed in 0..8 {
            graphs.push(random_planar_dag(n, seed));
            if seed < 4 {
                graphs.push(random_planar_cyclic(n, seed));
            }
        }
    }
    let mut disagreements = 0;
    for g in &graphs {
        let slow = exhaustive_st_check(g);
        let fast = is_st_planar(g).is_some();
        if slow != fast {
            disagreements += 1;
        }
    }
    line(
        8,
        disagreements == 0,
        &format!("{} graphs enumerated, {disagreements} disagreements", graphs.len()),
    );
}

fn report(g: &Digraph, s: &Solution) -> String {
    let mut out = String::new();
    if s.answer {
        out.push_str(&format!("YES {}\n", s.min_edges.unwrap()));
        for (u, v) in s.witness.as_deref().unwrap() {
            out.push_str(&format!("witness {u} {v}\n"));
        }
    } else {
        out.push_str("NO\n");
    }
    for (e, t) in &s.ref_traces {
        let (u, v) = g.edge(*e);
        out.push_str(&format!(
            "trace ref {u} {v} entries {} max-sig {}\n",
            t.table_entries, t.max_signature_len
        ));
    }
    out
}

#[test]
fn criterion_09_monotonicity_and_determinism() {
    let c = corpus();
    let mut monotone_violations = 0;
    for e in &c.evals {
        for k in 0..K_MAX {
            let (a, b) = (&e.solutions[k], &e.solutions[k + 1]);
            if a.answer && (!b.answer || b.min_edges > a.min_edges) {
                monotone_violations += 1;
            }
        }
    }
    // Re-solve a sample and require byte-identical reports.
    let mut determinism_violations = 0;
    let mut compared = 0;
    for (i, e) in c.evals.iter().enumerate().step_by(7) {
        for k in [1, K_MAX] {
            let again = solve(
                &e.g,
                k,
                &SolveOptions { jobs: jobs(), ..SolveOptions::default() },
            );
            compared += 1;
            if report(&e.g, &again) != report(&e.g, &e.solutions[k]) {
                determinism_violations += 1;
            }
        }
        // Same-seed regeneration is byte-identical too.
        let regen = random_planar_dag(e.n, e.seed);
        if stpec::cli::instance_text(&regen, "") != stpec::cli::instance_text(&e.g, "") {
            determinism_violations += 1;
        }
        let _ = i;
    }
    line(
        9,
        monotone_violations == 0 && determinism_violations == 0,
        &format!(
            "{monotone_violations} monotonicity violations, {determinism_violations} nondeterministic reports over {compared} re-solves"
        ),
    );
}

#[test]
fn criterion_10_precheck_completeness() {
    let mut bad = 0;
    let mut total = 0;
    for n in 4..=8 {
        for seed in 0..10 {
            let g = random_planar_cyclic(n, seed);
            total += 1;
            for k in 0..=5 {
                let s = solve(&g, k, &SolveOptions::default());
                if s.answer || s.reject != Some(RejectReason::DirectedCycle) {
                    bad += 1;
                }
            }
        }
    }
    line(
        10,
        bad == 0 && total == 50,
        &format!("{total} cyclic instances x budgets 0..=5, {bad} not rejected by precheck"),
    );
}
