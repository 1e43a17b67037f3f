//! Verification suites behind `critlen verify`.
//!
//! Every suite returns flat [`CheckRecord`]s; a failing check is a record
//! with `pass = false`, never an error. Reports carry no timings so they are
//! byte-identical for a fixed seed.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    build_tree, count_short_lengths, staircase_congruence_violation, staircase_values, sumset_uv, SequenceSpec,
};
use crate::critical::{apex_from_13_tree, check_critical, critical_ordering, expected_profile, is_k_ordered};
use crate::cycles::{
    build_vine, cycle_bound, cycle_length_oracle, cycle_lengths_from_paths, good_cycles, is_good_cycle,
    large_antichain, many_cycle_lengths_with, refine_to_fair, two_trees, ForwardDigraph,
};
use crate::generators;
use crate::graphs::{Graph, Tree};
use crate::treelen::{
    enumerate_one_three_trees, leaf_lengths, many_lengths, many_lengths_bound, monotone_subsequence, shifted_values,
    shifted_values_bound, short_lengths, short_lengths_bound, witnessed_lengths, LengthSet,
};
use crate::util::{icbrt, required_count, BOUND_SLACK};

/// One named check: `observed` against `bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub bound: f64,
    pub observed: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn at_least(name: impl Into<String>, bound: f64, observed: f64) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            bound,
            observed,
            pass: observed >= bound,
        }
    }

    pub fn at_most(name: impl Into<String>, bound: f64, observed: f64) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            bound,
            observed,
            pass: observed <= bound,
        }
    }

    pub fn exact(name: impl Into<String>, expected: f64, observed: f64) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            bound: expected,
            observed,
            pass: observed == expected,
        }
    }

    /// A yes/no check: bound 1, observed 1 or 0.
    pub fn flag(name: impl Into<String>, ok: bool) -> CheckRecord {
        CheckRecord::exact(name, 1.0, if ok { 1.0 } else { 0.0 })
    }
}

/// What a CLI invocation did and whether every check passed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub seed: u64,
    pub records: Vec<CheckRecord>,
    pub artifacts: Vec<String>,
    /// Command-specific output.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(command: impl Into<String>, seed: u64) -> RunReport {
        RunReport {
            command: command.into(),
            input_digest: None,
            seed,
            records: Vec::new(),
            artifacts: Vec::new(),
            data: None,
            pass: true,
        }
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.pass &= r.pass;
        self.records.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckRecord>) {
        for r in rs {
            self.push(r);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.pass)
    }
}

/// Scale of a verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    Full,
}

impl FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Profile, String> {
        match s {
            "quick" => Ok(Profile::Quick),
            "full" => Ok(Profile::Full),
            _ => Err(format!("unknown profile {s:?} (expected quick or full)")),
        }
    }
}

/// Deliberate corruption used to confirm that checks can fail.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    #[default]
    None,
    /// Drop the largest length from every computed length set.
    DropLength,
    /// Re-route the first vine detour through a base vertex.
    CorruptVine,
    /// Add a comparable vertex to the antichain.
    CorruptAntichain,
    /// Claim a wrong common depth for the fair trees.
    CorruptFairTree,
    /// Discard all but one good cycle.
    DropGoodCycle,
}

impl FromStr for Fault {
    type Err = String;
    fn from_str(s: &str) -> Result<Fault, String> {
        Ok(match s {
            "none" => Fault::None,
            "drop-length" => Fault::DropLength,
            "corrupt-vine" => Fault::CorruptVine,
            "corrupt-antichain" => Fault::CorruptAntichain,
            "corrupt-fair-tree" => Fault::CorruptFairTree,
            "drop-good-cycle" => Fault::DropGoodCycle,
            _ => return Err(format!("unknown fault {s:?}")),
        })
    }
}

fn faulted(mut set: LengthSet, fault: Fault) -> LengthSet {
    if fault == Fault::DropLength {
        if let Some(m) = set.max() {
            set.remove(m);
        }
    }
    set
}

/// Parameters of a suite run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub profile: Profile,
    pub seed: u64,
    pub fault: Fault,
}

impl SuiteConfig {
    pub fn new(profile: Profile, seed: u64) -> SuiteConfig {
        SuiteConfig {
            profile,
            seed,
            fault: Fault::None,
        }
    }

    fn full(&self) -> bool {
        self.profile == Profile::Full
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

/// `⌈log(n+2) − 1⌉`, the fewest lengths an `n`-vertex 1–3 tree can have.
pub fn one_three_bound(n: usize) -> usize {
    required_count(((n + 2) as f64).log2() - 1.0)
}

/// Exhaustive sweep: for each even `n ≤ max_n`, the minimum of
/// `|leaf_lengths|` over all 1–3 trees against `⌈log(n+2) − 1⌉`.
pub fn exhaustive_one_three(max_n: usize, fault: Fault) -> Vec<CheckRecord> {
    (2..=max_n)
        .step_by(2)
        .map(|n| {
            let trees = enumerate_one_three_trees(n).unwrap_or_default();
            let min = trees
                .par_iter()
                .map(|t| faulted(leaf_lengths(t, None), fault).len())
                .min()
                .unwrap_or(0);
            CheckRecord::at_least(format!("one-three/n={n}"), one_three_bound(n) as f64, min as f64)
        })
        .collect()
}

/// Tree-length suites: exhaustive sweep, tightness, random trees, sequence
/// bounds and short lengths.
pub fn verify_treelen(cfg: &SuiteConfig, max_n: usize) -> Vec<CheckRecord> {
    let mut out = exhaustive_one_three(max_n, cfg.fault);
    for d in [2usize, 3] {
        let t = generators::perfect_distance_tree(3, d);
        let got = faulted(leaf_lengths(&t, None), cfg.fault).len();
        out.push(CheckRecord::exact(format!("tight/n={}", t.n()), (d + 1) as f64, got as f64));
    }

    let count = if cfg.full() { 10_000 } else { 2_000 };
    let failures = (0..count as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = cfg.rng(1_000_000 + i);
            let delta = rng.gen_range(3..=6);
            let n = rng.gen_range(2..=120);
            let t = generators::random_tree(n, delta, &mut rng);
            !many_lengths_sound(&t, cfg.fault)
        })
        .count();
    out.push(CheckRecord::at_most(format!("random-trees/{count}/failures"), 0.0, failures as f64));

    out.extend(verify_sequences(cfg));

    let per_n = if cfg.full() { 50 } else { 10 };
    let horizons: &[usize] = if cfg.full() { &[256, 1024] } else { &[256] };
    for &horizon in horizons {
        let worst = (0..per_n as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = cfg.rng(2_000_000 + horizon as u64 * 1000 + i);
                let t = generators::random_spined_one_three_tree(horizon / 2 + 1, 6, &mut rng);
                match short_lengths(&t, horizon) {
                    Ok(r) if r.validate_in(&t).is_ok() => faulted(r.lengths, cfg.fault).len(),
                    _ => 0,
                }
            })
            .min()
            .unwrap_or(0);
        out.push(CheckRecord::at_least(
            format!("short-lengths/N={horizon}/min"),
            short_lengths_bound(horizon) - BOUND_SLACK,
            worst as f64,
        ));
    }
    out
}

/// `many_lengths` is inside `leaf_lengths` and meets `log_{Δ−1}((Δ−2)ℓ)`.
fn many_lengths_sound(t: &Tree, fault: Fault) -> bool {
    let all = leaf_lengths(t, None);
    let got = faulted(many_lengths(t), fault);
    let delta = t.max_degree().max(3);
    let bound = many_lengths_bound(delta, t.leaf_count());
    got.is_subset(&all) && got.len() as f64 >= bound - BOUND_SLACK && all.len() as f64 >= bound - BOUND_SLACK
}

/// Shifted-value witness bound on random sequences and the monotone
/// subsequence length on every `{0,1,2}` sequence of length at most 9.
pub fn verify_sequences(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let count = if cfg.full() { 10_000 } else { 2_000 };
    let failures = (0..count as u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = cfg.rng(3_000_000 + i);
            let n = rng.gen_range(1..=300);
            let m = rng.gen_range(1..=50) as f64;
            let seq: Vec<f64> = (0..n).map(|_| rng.gen_range(0..=m as u32) as f64).collect();
            match shifted_values(&seq, m) {
                Ok(w) => !(w.check(&seq) && w.len() as f64 >= shifted_values_bound(n, m) - BOUND_SLACK),
                Err(_) => true,
            }
        })
        .count();
    let mut checked = 0usize;
    let mut bad = 0usize;
    for len in 0..=9u32 {
        for code in 0..3usize.pow(len) {
            let mut c = code;
            let seq: Vec<u8> = (0..len)
                .map(|_| {
                    let d = (c % 3) as u8;
                    c /= 3;
                    d
                })
                .collect();
            let run = monotone_subsequence(&seq);
            let need = (len as f64).sqrt().ceil() as usize;
            if !run.is_valid(&seq) || run.indices.len() < need {
                bad += 1;
            }
            checked += 1;
        }
    }
    vec![
        CheckRecord::at_most(format!("shifted-values/{count}/failures"), 0.0, failures as f64),
        CheckRecord::at_most(format!("monotone/{checked}/failures"), 0.0, bad as f64),
    ]
}

/// Sumset identities, short-length counts, the staircase congruence and the
/// per-leaf staircase bound.
pub fn verify_constructions(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let ks: &[u32] = if cfg.full() { &[1, 2, 3] } else { &[1, 2] };
    for &k in ks {
        let pair = sumset_uv(k).expect("k in range");
        out.push(CheckRecord::flag(format!("sumset/k={k}/difference-interval"), pair.difference_is_interval()));
        out.push(CheckRecord::exact(
            format!("sumset/k={k}/sum-size"),
            10f64.powi(k as i32),
            pair.sum_set().len() as f64,
        ));
    }
    let ks: &[u32] = if cfg.full() { &[1, 2] } else { &[1] };
    for &k in ks {
        let (m_total, n) = sumset_scale(k);
        let count = count_short_lengths(&SequenceSpec::Sumset(k), n, m_total).expect("buildable");
        out.push(CheckRecord::at_most(
            format!("sumset/k={k}/short-lengths"),
            13.0 * 13f64.powi(k as i32),
            count.brute as f64,
        ));
        out.push(CheckRecord::flag(format!("sumset/k={k}/brute-within-analytic"), count.brute_within_analytic));
    }
    let bad = (1..=20).filter(|&m| staircase_congruence_violation(m).is_some()).count();
    out.push(CheckRecord::at_most("staircase/congruence/violations", 0.0, bad as f64));
    let horizons: &[usize] = if cfg.full() { &[512, 1000] } else { &[512] };
    for &horizon in horizons {
        let (most, bound) = staircase_per_leaf(horizon, cfg.fault);
        out.push(CheckRecord::at_most(format!("staircase/N={horizon}/max-per-leaf"), bound as f64, most as f64));
    }
    out
}

/// `M = ⌊(13^k)^{2−β}⌋ = ⌊(169/10)^k⌋` and `n = 2M`.
pub fn sumset_scale(k: u32) -> (usize, usize) {
    let m = 169u128.pow(k) / 10u128.pow(k);
    (m as usize, 2 * m as usize)
}

/// `n = 2(S_m + 1)` where `S_m = 2 + Σ_{i≤m} 2^{a_i}` covers the first block
/// of the staircase sequence.
pub fn staircase_order(m: u32) -> usize {
    let a = staircase_values(m);
    let s: usize = 2 + a[..m as usize].iter().map(|&x| 1usize << x).sum::<usize>();
    2 * (s + 1)
}

/// Largest number of lengths in `[0, N]` witnessed by one leaf of the
/// staircase tree, and `⌊20 N^{2/3}⌋`.
pub fn staircase_per_leaf(horizon: usize, fault: Fault) -> (usize, usize) {
    let m = icbrt(horizon as u64) as u32;
    let n = staircase_order(m);
    let (tree, _) = build_tree(&SequenceSpec::Staircase(m), n).expect("buildable");
    let most = tree
        .leaves()
        .par_iter()
        .map(|&leaf| {
            let r = witnessed_lengths(&tree, leaf, horizon).expect("leaf");
            let mut len = r.lengths.len();
            if fault == Fault::DropLength {
                // pretend an extra length showed up
                len += 20 * horizon;
            }
            len
        })
        .max()
        .unwrap_or(0);
    // 20 N^{2/3} ≥ x  ⟺  8000 N² ≥ x³ for integers
    let bound = (0..)
        .take_while(|&x: &usize| (x as u128).pow(3) <= 8000 * (horizon as u128).pow(2))
        .last()
        .unwrap_or(0);
    (most, bound)
}

/// Brute-force degree-k-criticality: edge count plus no proper non-empty
/// induced subgraph of minimum degree at least `k`. Only for `n ≤ 20`.
pub fn naive_is_critical(g: &Graph, k: usize) -> bool {
    let n = g.n();
    assert!(n <= 20, "naive criticality oracle is exponential");
    if g.edge_count() as i64 != crate::critical::critical_edge_count(n, k) {
        return false;
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let full = (1u32 << n) - 1;
    (1..full).all(|mask| {
        (0..n)
            .filter(|&v| mask >> v & 1 == 1)
            .any(|v| ((nbr[v] & mask).count_ones() as usize) < k)
    })
}

/// A random graph on at most 9 vertices; half of them have exactly the
/// critical edge count for `k = 3`.
pub fn random_small_graph<R: Rng>(rng: &mut R) -> Graph {
    let n = rng.gen_range(4..=9);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let m = if rng.gen_bool(0.5) {
        2 * n - 2
    } else {
        rng.gen_range(0..=pairs.len())
    };
    for i in 0..m.min(pairs.len()) {
        let j = rng.gen_range(i..pairs.len());
        pairs.swap(i, j);
    }
    pairs.truncate(m);
    Graph::from_edges(n, &pairs).expect("simple")
}

/// Criticality checks against the naive oracle, apex constructions and
/// ordering profiles.
pub fn verify_critical(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let corpus = if cfg.full() { 1_000 } else { 300 };
    let disagreements = (0..corpus as u64)
        .into_par_iter()
        .filter(|&i| {
            let g = random_small_graph(&mut cfg.rng(4_000_000 + i));
            check_critical(&g, 3).unwrap().verdict != naive_is_critical(&g, 3)
        })
        .count();
    let mut out = vec![CheckRecord::at_most(
        format!("critical/random-{corpus}/disagreements"),
        0.0,
        disagreements as f64,
    )];
    let max_tree = if cfg.full() { 22 } else { 18 };
    let mut apex_total = 0usize;
    let mut apex_bad = 0usize;
    let mut oracle_bad = 0usize;
    let mut profile_bad = 0usize;
    for n in (2..=max_tree).step_by(2) {
        for t in enumerate_one_three_trees(n).unwrap_or_default() {
            let g = apex_from_13_tree(&t).unwrap();
            apex_total += 1;
            if !check_critical(&g, 3).unwrap().verdict {
                apex_bad += 1;
            }
            if g.n() <= 9 && !naive_is_critical(&g, 3) {
                oracle_bad += 1;
            }
            if !ordering_profile_ok(&g, 3) {
                profile_bad += 1;
            }
        }
    }
    out.push(CheckRecord::at_most(format!("critical/apex-{apex_total}/rejected"), 0.0, apex_bad as f64));
    out.push(CheckRecord::at_most("critical/apex-small/oracle-disagreements", 0.0, oracle_bad as f64));
    out.push(CheckRecord::at_most("ordering/profile-mismatches", 0.0, profile_bad as f64));
    let complete: Vec<bool> = (3..=8).map(|k| ordering_profile_ok(&generators::complete(k + 1), k)).collect();
    out.push(CheckRecord::flag("ordering/complete-graphs", complete.iter().all(|&b| b)));
    out
}

/// The greedy ordering has the exact expected forward-degree profile, the
/// right forward-degree total and is k-ordered.
pub fn ordering_profile_ok(g: &Graph, k: usize) -> bool {
    let Ok(ord) = critical_ordering(g, k) else {
        return false;
    };
    let n = g.n();
    let total: i64 = ord.dplus.iter().map(|&d| d as i64).sum();
    let expected_total = (k as i64 - 1) * n as i64 - (k * (k - 1) / 2) as i64 + 1;
    ord.dplus == expected_profile(n, k) && total == expected_total && is_k_ordered(g, &ord, k)
}

/// Cycle pipeline on apex graphs, oracle agreement for small graphs and
/// independently recomputed structural checks (with optional faults).
pub fn verify_cycles(cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let exps: &[u32] = if cfg.full() { &[10, 12, 15] } else { &[10] };
    for &e in exps {
        let n = 1usize << e;
        let (caterpillar, _) = build_tree(&SequenceSpec::Constant(1), n - 2).expect("buildable");
        let random = generators::random_one_three_tree(n - 2, &mut cfg.rng(5_000_000 + e as u64));
        for (label, t) in [("caterpillar", caterpillar), ("random", random)] {
            let g = apex_from_13_tree(&t).unwrap();
            out.extend(cycle_records(&format!("cycles/{label}/n={n}"), &g, 3, cfg.fault));
        }
    }
    let mut subset_bad = 0usize;
    let mut rng = cfg.rng(6_000_000);
    let mut graphs = vec![generators::complete(4)];
    for n in (2..=14).step_by(2) {
        for _ in 0..5 {
            graphs.push(apex_from_13_tree(&generators::random_one_three_tree(n, &mut rng)).unwrap());
        }
    }
    for g in &graphs {
        let ord = critical_ordering(g, 3).unwrap();
        let ok = many_cycle_lengths_with(g, &ord, 3)
            .map(|run| run.cycles.to_length_set().is_subset(&cycle_length_oracle(g).unwrap()))
            .unwrap_or(false);
        subset_bad += usize::from(!ok);
    }
    out.push(CheckRecord::at_most(
        format!("cycles/oracle-{}/violations", graphs.len()),
        0.0,
        subset_bad as f64,
    ));
    out
}

/// Pipeline output plus structural checks recomputed from scratch.
pub fn cycle_records(prefix: &str, g: &Graph, k: usize, fault: Fault) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let ord = match critical_ordering(g, k) {
        Ok(o) => o,
        Err(_) => return vec![CheckRecord::flag(format!("{prefix}/ordering"), false)],
    };
    let run = match many_cycle_lengths_with(g, &ord, k) {
        Ok(r) => r,
        Err(_) => return vec![CheckRecord::flag(format!("{prefix}/pipeline"), false)],
    };
    let mut lengths = run.cycles.to_length_set();
    if fault == Fault::DropLength {
        lengths = faulted(lengths, fault);
    }
    out.push(CheckRecord::at_least(
        format!("{prefix}/lengths"),
        cycle_bound(g.n(), k) as f64,
        lengths.len() as f64,
    ));
    out.push(CheckRecord::flag(format!("{prefix}/certificates"), run.cycles.validate(g).is_ok()));
    out.push(CheckRecord::flag(format!("{prefix}/pipeline-checks"), run.checks_pass()));

    let fd = ForwardDigraph::new(g, &ord).expect("size checked by the pipeline");
    let vines_ok = cycle_lengths_from_paths(&fd).is_ok_and(|(_, vines)| {
        vines.iter().enumerate().all(|(i, v)| {
            let mut v = v.clone();
            if i == 0 && fault == Fault::CorruptVine {
                let link = &mut v.links[0];
                link.path.insert(1, v.base[1]);
            }
            let t = v.t();
            v.validate(&fd).is_ok()
                && crate::cycles::vine_cycle(&v).is_ok_and(|c| (t..=2 * t - 2).contains(&c.length))
        })
    });
    out.push(CheckRecord::flag(format!("{prefix}/vines"), vines_ok));
    // rebuilding one vine from scratch exercises the builder independently
    let base = crate::cycles::longest_forward_path(&fd, None);
    if base.len() >= 2 {
        out.push(CheckRecord::flag(format!("{prefix}/vine-rebuild"), build_vine(&fd, &base).is_ok()));
    }

    let mut l = large_antichain(&fd);
    if fault == Fault::CorruptAntichain {
        let extra = fd.forward_neighbors(l[0]).first().copied().unwrap_or(l[0]);
        if !l.contains(&extra) {
            l.push(extra);
        }
    }
    let c = fd.longest_path_len() + 1;
    let incomparable = fd.antichain_violation(&l).is_none();
    out.push(CheckRecord::flag(format!("{prefix}/antichain-incomparable"), incomparable));
    out.push(CheckRecord::at_least(
        format!("{prefix}/antichain-size"),
        g.n() as f64 / c as f64,
        l.len() as f64,
    ));
    if !incomparable {
        return out;
    }
    let Ok((s, t)) = two_trees(&fd, &l) else {
        out.push(CheckRecord::flag(format!("{prefix}/two-trees"), false));
        return out;
    };
    out.push(CheckRecord::flag(
        format!("{prefix}/two-trees"),
        s.validate(&fd, &l).is_ok() && t.validate(&fd, &l).is_ok(),
    ));
    let (l0, mut s0, t0) = refine_to_fair(&s, &t);
    if fault == Fault::CorruptFairTree {
        s0.fair_depth = s0.fair_depth.map(|d| d + 1).or(Some(1));
    }
    let fair_ok = s0.validate(&fd, &l0).is_ok()
        && t0.validate(&fd, &l0).is_ok()
        && (l0.len() < 2 || (s0.fair_depth.is_some() && t0.fair_depth.is_some()));
    out.push(CheckRecord::flag(format!("{prefix}/fair-trees"), fair_ok));
    if l0.len() >= 2 {
        let mut good = good_cycles(&fd, &s0, &t0, k).unwrap_or_default();
        if fault == Fault::DropGoodCycle {
            good.truncate(1);
            if good.len() as f64 >= ((l0.len() as f64).ln() / (k as f64).ln()).ceil() {
                good.clear();
            }
        }
        let distinct: BTreeSet<usize> = good.iter().map(|c| c.length).collect();
        let sound = good.iter().all(|c| c.validate(g).is_ok() && is_good_cycle(&fd, c));
        out.push(CheckRecord::flag(format!("{prefix}/good-cycles-sound"), sound && distinct.len() == good.len()));
        out.push(CheckRecord::at_least(
            format!("{prefix}/good-cycles"),
            required_count((l0.len() as f64).ln() / (k as f64).ln()) as f64,
            good.len() as f64,
        ));
    }
    out
}

/// Every suite at the profile's scale.
pub fn verify_all(cfg: &SuiteConfig) -> RunReport {
    let mut report = RunReport::new(
        format!("verify all --profile {}", if cfg.full() { "full" } else { "quick" }),
        cfg.seed,
    );
    let max_n = if cfg.full() { 22 } else { 18 };
    report.extend(verify_treelen(cfg, max_n));
    report.extend(verify_constructions(cfg));
    report.extend(verify_critical(cfg));
    report.extend(verify_cycles(cfg));
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert_eq!(one_three_bound(2), 1);
        assert_eq!(one_three_bound(10), 3);
        assert_eq!(one_three_bound(22), 4);
        assert_eq!(sumset_scale(1), (16, 32));
        assert_eq!(sumset_scale(2), (285, 570));
    }

    #[test]
    fn naive_oracle_small_cases() {
        assert!(naive_is_critical(&generators::complete(4), 3));
        assert!(!naive_is_critical(&generators::complete(5), 3));
        assert!(!naive_is_critical(&generators::cycle(6), 3));
    }

    #[test]
    fn dropping_a_length_fails_the_sweep() {
        assert!(exhaustive_one_three(12, Fault::None).iter().all(|r| r.pass));
        assert!(exhaustive_one_three(12, Fault::DropLength).iter().any(|r| !r.pass));
    }

    #[test]
    fn report_pass_tracks_records() {
        let mut r = RunReport::new("x", 0);
        r.push(CheckRecord::at_least("a", 1.0, 2.0));
        assert!(r.pass);
        r.push(CheckRecord::at_most("b", 1.0, 2.0));
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn structural_faults_are_detected() {
        let (t, _) = build_tree(&SequenceSpec::Constant(1), 254).unwrap();
        let g = apex_from_13_tree(&t).unwrap();
        assert!(cycle_records("c", &g, 3, Fault::None).iter().all(|r| r.pass));
        for fault in [Fault::CorruptVine, Fault::CorruptAntichain, Fault::CorruptFairTree] {
            let recs = cycle_records("c", &g, 3, fault);
            assert!(recs.iter().any(|r| !r.pass), "{fault:?} went unnoticed");
        }
    }
}
