//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Bounds are recomputed here rather than taken from the library.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use critlen::constructions::{build_tree, count_short_lengths, staircase_values, sumset_uv, SequenceSpec};
use critlen::critical::{apex_from_13_tree, check_critical, critical_ordering};
use critlen::cycles::{cycle_length_oracle, many_cycle_lengths, CycleRun};
use critlen::generators;
use critlen::treelen::{
    enumerate_one_three_trees, leaf_lengths, many_lengths, monotone_subsequence, shifted_values, short_lengths,
    witnessed_lengths,
};
use critlen::verify::{cycle_records, Fault};
use critlen::{Graph, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Leaf-to-leaf distances from `leaf`, by plain BFS.
fn leaf_distances(t: &Tree, leaf: usize) -> BTreeSet<usize> {
    let d = t.distances_from(leaf);
    (0..t.n()).filter(|&v| t.degree(v) <= 1).map(|v| d[v]).collect()
}

fn is_cycle(g: &Graph, c: &[usize]) -> bool {
    let distinct: BTreeSet<usize> = c.iter().copied().collect();
    c.len() >= 3 && distinct.len() == c.len() && (0..c.len()).all(|i| g.has_edge(c[i], c[(i + 1) % c.len()]))
}

/// Smallest `c` with `2^{c+1} ≥ n + 2`, i.e. `⌈log₂(n+2) − 1⌉`.
fn log_bound(n: usize) -> usize {
    (0..).find(|&c| 1usize << (c + 1) >= n + 2).unwrap()
}

fn c1_exhaustive() -> Outcome {
    let mut worst_margin = i64::MAX;
    let mut classes = 0;
    for n in (2..=22).step_by(2) {
        let trees = enumerate_one_three_trees(n).map_err(|e| e.to_string())?;
        classes += trees.len();
        let min = trees.par_iter().map(|t| leaf_lengths(t, None).len()).min().unwrap();
        let bound = log_bound(n);
        ensure(min >= bound, || format!("n={n}: minimum {min} < {bound}"))?;
        worst_margin = worst_margin.min(min as i64 - bound as i64);
    }
    for d in [2usize, 3] {
        let t = generators::perfect_distance_tree(3, d);
        ensure(t.n() == 3 * (1 << d) - 2 && t.is_one_three(), || format!("d={d}: not a 1–3 tree on 3·2^d−2"))?;
        let got = leaf_lengths(&t, None).len();
        ensure(got == d + 1, || format!("d={d}: {got} lengths, expected {}", d + 1))?;
    }
    Ok(format!("{classes} classes, n ≤ 22, worst margin {worst_margin}; tight at n = 10, 22"))
}

fn c2_random_trees() -> Outcome {
    let results: Vec<Result<(), String>> = (0..10_000u64)
        .into_par_iter()
        .map(|i| {
            let mut r = rng(20_000 + i);
            let cap = r.gen_range(3..=6);
            let n = r.gen_range(4..=400);
            let t = generators::random_tree(n, cap, &mut r);
            let delta = t.max_degree();
            if delta < 3 {
                return Ok(());
            }
            let l = t.leaf_count() as f64;
            let bound = ((delta - 2) as f64 * l).ln() / ((delta - 1) as f64).ln();
            let all = leaf_lengths(&t, None).len() as f64;
            let found = many_lengths(&t).len() as f64;
            ensure(all >= bound - 1e-9 && found >= bound - 1e-9, || {
                format!("tree {i}: n={n} Δ={delta} ℓ={l}: {all}/{found} < {bound:.3}")
            })
        })
        .collect();
    results.into_iter().collect::<Result<Vec<()>, String>>()?;
    Ok("10000 random trees, Δ ∈ [3,6], leaf_lengths and many_lengths ≥ log_{Δ−1}((Δ−2)ℓ)".into())
}

fn c3_sumset() -> Outcome {
    for k in 1..=3u32 {
        let pair = sumset_uv(k).map_err(|e| e.to_string())?;
        let m = 13i64.pow(k);
        let diff: BTreeSet<i64> = pair.u.iter().flat_map(|&a| pair.v.iter().map(move |&b| a - b)).collect();
        let sum: BTreeSet<i64> = pair.u.iter().flat_map(|&a| pair.v.iter().map(move |&b| a + b)).collect();
        ensure(diff == (1..=m).collect(), || format!("k={k}: U − V ≠ [13^k]"))?;
        ensure(sum.len() as i64 == 10i64.pow(k), || format!("k={k}: |U+V| = {}", sum.len()))?;
    }
    let mut counts = Vec::new();
    for k in 1..=2u32 {
        let m = 13f64.powi(k as i32);
        let beta = 10f64.ln() / 13f64.ln();
        let big_m = (m.powf(2.0 - beta) + 1e-9).floor() as usize;
        let n = 2 * big_m;
        let c = count_short_lengths(&SequenceSpec::Sumset(k), n, big_m).map_err(|e| e.to_string())?;
        let (tree, _) = build_tree(&SequenceSpec::Sumset(k), n).map_err(|e| e.to_string())?;
        let direct: BTreeSet<usize> =
            tree.leaves().iter().flat_map(|&x| leaf_distances(&tree, x)).filter(|&d| d <= big_m).collect();
        ensure(c.brute == direct.len(), || format!("k={k}: brute {} vs BFS {}", c.brute, direct.len()))?;
        ensure(c.brute <= 13 * 13usize.pow(k), || format!("k={k}: {} lengths > 13m", c.brute))?;
        counts.push(format!("k={k}: M={big_m} lengths={}", c.brute));
    }
    Ok(format!("U−V = [13^k], |U+V| = 10^k for k ≤ 3; {}", counts.join(", ")))
}

fn c4_staircase() -> Outcome {
    let mut parts = Vec::new();
    for horizon in [512usize, 1000] {
        let m = (1..).take_while(|&r: &usize| r * r * r <= horizon).last().unwrap();
        let a = staircase_values(m as u32);
        let s: usize = 2 + a[..m].iter().map(|&x| 1usize << x).sum::<usize>();
        let n = 2 * (s + 1);
        let (tree, trace) = build_tree(&SequenceSpec::Staircase(m as u32), n).map_err(|e| e.to_string())?;
        let prefix = trace.prefix_sum as usize;
        ensure(n >= 2 * (prefix + 1), || format!("N={horizon}: n = {n} < 2(S − 2^a't + 1)"))?;
        let per_leaf: Vec<(usize, usize)> = tree
            .leaves()
            .par_iter()
            .map(|&leaf| {
                let lib = witnessed_lengths(&tree, leaf, horizon).unwrap().lengths.len();
                let bfs = leaf_distances(&tree, leaf).into_iter().filter(|&d| d <= horizon).count();
                (lib, bfs)
            })
            .collect();
        ensure(per_leaf.iter().all(|(a, b)| a == b), || format!("N={horizon}: per-leaf counts disagree with BFS"))?;
        let most = per_leaf.iter().map(|p| p.0).max().unwrap();
        // most ≤ 20 N^{2/3}  ⟺  most³ ≤ 8000 N²
        ensure((most as u128).pow(3) <= 8000 * (horizon as u128).pow(2), || {
            format!("N={horizon}: a leaf witnesses {most} lengths")
        })?;
        parts.push(format!("N={horizon}: m={m} n={n} max={most}"));
    }
    Ok(parts.join(", "))
}

fn c5_short_lengths() -> Outcome {
    let mut parts = Vec::new();
    for horizon in [256usize, 1024] {
        let sizes: Vec<Result<usize, String>> = (0..50u64)
            .into_par_iter()
            .map(|i| {
                let mut r = rng(50_000 + horizon as u64 * 100 + i);
                let inner = r.gen_range(0..=40);
                let t = generators::random_spined_one_three_tree(horizon / 2 + r.gen_range(0..8), inner, &mut r);
                ensure((0..t.n()).all(|v| t.degree(v) != 2), || "degree-2 vertex".into())?;
                ensure(t.diameter() >= horizon / 2, || "diameter too short".into())?;
                let rep = short_lengths(&t, horizon).map_err(|e| e.to_string())?;
                ensure(t.degree(rep.leaf) == 1, || "witness is not a leaf".into())?;
                let real = leaf_distances(&t, rep.leaf);
                ensure(rep.lengths.iter().all(|l| l <= horizon && real.contains(&l)), || {
                    format!("tree {i}: a reported length is not witnessed")
                })?;
                Ok(rep.lengths.len())
            })
            .collect();
        let sizes = sizes.into_iter().collect::<Result<Vec<usize>, String>>()?;
        let min = *sizes.iter().min().unwrap();
        let bound = (horizon as f64).powf(2.0 / 3.0) / 6.0;
        ensure(min as f64 >= bound - 1e-9, || format!("N={horizon}: {min} < {bound:.2}"))?;
        parts.push(format!("N={horizon}: min {min} ≥ {bound:.2}"));
    }
    Ok(format!("50 trees per N; {}", parts.join(", ")))
}

fn c6_sequences() -> Outcome {
    let bad = (0..10_000u64)
        .into_par_iter()
        .filter(|&i| {
            let mut r = rng(60_000 + i);
            let n = r.gen_range(1..=500);
            let m = r.gen_range(1..=100) as f64;
            let seq: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..=m)).collect();
            let w = shifted_values(&seq, m).unwrap();
            let distinct: BTreeSet<u64> = w
                .indices
                .iter()
                .map(|&j| {
                    let x = seq[j - 1];
                    match w.mode {
                        critlen::treelen::ShiftMode::Sum => x + j as f64,
                        critlen::treelen::ShiftMode::Difference => x - j as f64,
                    }
                    .to_bits()
                })
                .collect();
            distinct.len() != w.len() || (w.len() as f64) < n as f64 / (4.0 * m.sqrt()) - 1e-9
        })
        .count();
    ensure(bad == 0, || format!("{bad} sequences violate the shifted-value bound"))?;
    let mut checked = 0;
    for len in 0..=9u32 {
        for code in 0..3u32.pow(len) {
            let seq: Vec<u32> = (0..len).map(|p| code / 3u32.pow(p) % 3).collect();
            let run = monotone_subsequence(&seq);
            let vals: Vec<u32> = run.indices.iter().map(|&i| seq[i]).collect();
            let idx_ok = run.indices.windows(2).all(|w| w[0] < w[1]);
            let up = vals.windows(2).all(|w| w[0] <= w[1]);
            let down = vals.windows(2).all(|w| w[0] > w[1]);
            let need = (1..).find(|&r: &usize| r * r >= len as usize).unwrap_or(0);
            ensure(idx_ok && (up || down) && vals.len() >= need.min(len as usize), || {
                format!("sequence {seq:?}: run {:?}", run.indices)
            })?;
            checked += 1;
        }
    }
    Ok(format!("10000 bounded sequences; {checked} ternary sequences of length ≤ 9"))
}

/// Criticality straight from the definition.
fn critical_by_definition(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if g.edge_count() as i64 != (k as i64 - 1) * n as i64 - (k * (k - 1) / 2) as i64 + 1 {
        return false;
    }
    (1u32..(1 << n) - 1).all(|mask| {
        let inside = |v: usize| mask >> v & 1 == 1;
        (0..n)
            .filter(|&v| inside(v))
            .any(|v| g.neighbors(v).iter().filter(|&&w| inside(w)).count() < k)
    })
}

fn small_corpus() -> Vec<Graph> {
    let mut r = rng(70_000);
    let mut out = Vec::new();
    for _ in 0..1000 {
        let n = r.gen_range(4..=9);
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = if r.gen_bool(0.5) { 2 * n - 2 } else { r.gen_range(0..=pairs.len()) };
        for i in 0..m {
            let j = r.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        pairs.truncate(m);
        out.push(Graph::from_edges(n, &pairs).unwrap());
    }
    out
}

fn c7_criticality() -> Outcome {
    let mut graphs = small_corpus();
    for n in [2usize, 4, 6] {
        for t in enumerate_one_three_trees(n).unwrap() {
            graphs.push(apex_from_13_tree(&t).unwrap());
        }
    }
    let mut critical = 0;
    for (i, g) in graphs.iter().enumerate() {
        let want = critical_by_definition(g, 3);
        let got = check_critical(g, 3).unwrap().verdict;
        ensure(want == got, || format!("graph {i}: check_critical {got}, definition {want}"))?;
        critical += usize::from(want);
    }
    let mut apex = 0;
    for n in (2..=24).step_by(2) {
        for t in enumerate_one_three_trees(n).unwrap() {
            let g = apex_from_13_tree(&t).unwrap();
            ensure(check_critical(&g, 3).unwrap().verdict, || format!("apex over an n={n} tree rejected"))?;
            apex += 1;
        }
    }
    Ok(format!("{} small graphs agree ({critical} critical); {apex} apex graphs accepted", graphs.len()))
}

fn c8_ordering() -> Outcome {
    let k = 3;
    let mut inputs: Vec<Graph> = small_corpus().into_iter().filter(|g| check_critical(g, k).unwrap().verdict).collect();
    for n in (2..=20).step_by(2) {
        inputs.extend(enumerate_one_three_trees(n).unwrap().iter().map(|t| apex_from_13_tree(t).unwrap()));
    }
    let mut r = rng(80_000);
    for _ in 0..50 {
        let n = 2 * r.gen_range(1..=500);
        inputs.push(apex_from_13_tree(&generators::random_one_three_tree(n, &mut r)).unwrap());
    }
    // K_{k+1} is degree k-critical
    inputs.extend((5..=7).map(generators::complete));
    let mut accepted = 0;
    for g in &inputs {
        let k = if g.n() >= 5 && g.edge_count() == g.n() * (g.n() - 1) / 2 { g.n() - 1 } else { k };
        if !check_critical(g, k).unwrap().verdict {
            continue;
        }
        accepted += 1;
        let n = g.n();
        let ord = critical_ordering(g, k).map_err(|e| e.to_string())?;
        let pos: Vec<usize> = {
            let mut p = vec![0; n];
            for (i, &v) in ord.order.iter().enumerate() {
                p[v] = i;
            }
            p
        };
        let dplus: Vec<usize> = ord
            .order
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count())
            .collect();
        let want: Vec<usize> = (1..=n).map(|i| if i == 1 { k } else { (k - 1).min(n - i) }).collect();
        ensure(dplus == want && ord.dplus == want, || format!("n={n}: profile {dplus:?}"))?;
        let total: i64 = dplus.iter().map(|&d| d as i64).sum();
        let expected = (k as i64 - 1) * n as i64 - (k * (k - 1) / 2) as i64 + 1;
        ensure(total == expected, || format!("n={n}: Σd+ = {total} ≠ {expected}"))?;
    }
    Ok(format!("{accepted} accepted inputs, exact profile and Σd⁺"))
}

fn apex_inputs() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for e in [10u32, 12, 15] {
        let n = 1usize << e;
        let (cat, _) = build_tree(&SequenceSpec::Constant(1), n - 2).unwrap();
        out.push((format!("caterpillar n={n}"), apex_from_13_tree(&cat).unwrap()));
        let t = generators::random_one_three_tree(n - 2, &mut rng(90_000 + e as u64));
        out.push((format!("random n={n}"), apex_from_13_tree(&t).unwrap()));
    }
    out
}

fn run_checked(label: &str, g: &Graph) -> Result<CycleRun, String> {
    let run = many_cycle_lengths(g, 3).map_err(|e| format!("{label}: {e}"))?;
    for c in run.cycles.certificates() {
        ensure(c.length == c.vertices.len() && is_cycle(g, &c.vertices), || {
            format!("{label}: certificate of length {} is not a cycle", c.length)
        })?;
    }
    Ok(run)
}

fn c9_cycles(runs: &[(String, CycleRun)]) -> Outcome {
    let mut parts = Vec::new();
    for (label, run) in runs {
        let n = run.n as f64;
        let bound = (n.log2() / (3.0 + 3f64.log2()) - 2.0 - 1e-9).ceil().max(0.0) as usize;
        ensure(run.cycles.len() >= bound, || format!("{label}: {} lengths < {bound}", run.cycles.len()))?;
        parts.push(format!("{label}: {} ≥ {bound}", run.cycles.len()));
    }
    let mut small = 0;
    let mut r = rng(91_000);
    for n in (2..=14).step_by(2) {
        for _ in 0..10 {
            let g = apex_from_13_tree(&generators::random_one_three_tree(n, &mut r)).unwrap();
            let run = run_checked("small", &g)?;
            let oracle = cycle_length_oracle(&g).unwrap();
            ensure(run.cycles.lengths().iter().all(|&l| oracle.contains(l)), || {
                format!("n={}: output not inside the oracle", g.n())
            })?;
            small += 1;
        }
    }
    Ok(format!("{}; {small} graphs with n ≤ 16 inside the oracle", parts.join(", ")))
}

fn c10_structure(runs: &[(String, CycleRun)]) -> Outcome {
    for (label, run) in runs {
        if let Some(c) = run.checks.iter().find(|c| !c.pass) {
            return Err(format!("{label}: {} failed ({})", c.name, c.detail));
        }
    }
    let (cat, _) = build_tree(&SequenceSpec::Constant(1), 510).unwrap();
    let t = generators::random_one_three_tree(510, &mut rng(92_000));
    let mut caught = 0;
    for g in [apex_from_13_tree(&cat).unwrap(), apex_from_13_tree(&t).unwrap()] {
        ensure(cycle_records("clean", &g, 3, Fault::None).iter().all(|r| r.pass), || {
            "clean run reports a failure".into()
        })?;
        for fault in [Fault::CorruptVine, Fault::CorruptAntichain, Fault::CorruptFairTree] {
            ensure(cycle_records("fault", &g, 3, fault).iter().any(|r| !r.pass), || {
                format!("{fault:?} went undetected")
            })?;
            caught += 1;
        }
    }
    let g = apex_from_13_tree(&t).unwrap();
    ensure(cycle_records("fault", &g, 3, Fault::DropGoodCycle).iter().any(|r| !r.pass), || {
        "DropGoodCycle went undetected".into()
    })?;
    caught += 1;
    Ok(format!("{} pipeline runs clean; {caught} injected faults caught", runs.len()))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: usize, name: &str, f: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS criterion {id:>2} ({name}, {secs:.1}s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {id:>2} ({name}, {secs:.1}s): {why}");
            }
        }
    };
    report(1, "exhaustive 1–3 trees", &c1_exhaustive);
    report(2, "random trees", &c2_random_trees);
    report(3, "sumset construction", &c3_sumset);
    report(4, "staircase per-leaf bound", &c4_staircase);
    report(5, "short lengths", &c5_short_lengths);
    report(6, "sequence bounds", &c6_sequences);
    report(7, "degree-criticality", &c7_criticality);
    report(8, "critical ordering", &c8_ordering);
    let runs: Result<Vec<(String, CycleRun)>, String> =
        apex_inputs().into_iter().map(|(l, g)| run_checked(&l, &g).map(|r| (l, r))).collect();
    report(9, "cycle lengths", &|| c9_cycles(runs.as_ref().map_err(Clone::clone)?));
    report(10, "structural checks", &|| c10_structure(runs.as_ref().map_err(Clone::clone)?));
    if failed == 0 {
        println!("acceptance: all 10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
