//! Synchronous t-resilient round model: failure patterns, full-information
//! executions, protocol complexes, and min-flooding.
//!
//! A crashing process p is described by (p, F_p, f_p): in round f_p it
//! delivers only to the receivers in F_p and is gone afterwards. Processes
//! outside the input assignment never send anything; restricting the
//! assignment is how initially-dead runs are modeled.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{budget, usage, Result};
use crate::graph::{
    graph_from_json, Bound, DirectedGraph, GraphJson, Network, NodeSet, ProcessId,
};
use crate::label::Label;
use crate::par;
use crate::topology::{pseudosphere_uniform, Complex, Simplex, Vertex};

/// One crash: `process` delivers round-`round` messages only to
/// `forwarded` and sends nothing in later rounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FailureEntry {
    pub process: ProcessId,
    pub forwarded: NodeSet,
    pub round: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FailurePattern {
    entries: Vec<FailureEntry>,
}

impl FailurePattern {
    pub fn empty() -> Self {
        FailurePattern { entries: Vec::new() }
    }

    pub fn new(mut entries: Vec<FailureEntry>) -> Result<Self> {
        entries.sort();
        for w in entries.windows(2) {
            if w[0].process == w[1].process {
                return Err(usage(format!("process {} crashes twice", w[0].process.0)));
            }
        }
        if let Some(e) = entries.iter().find(|e| e.round == 0) {
            return Err(usage(format!("process {} crashes in round 0", e.process.0)));
        }
        Ok(FailurePattern { entries })
    }

    pub fn entries(&self) -> &[FailureEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, p: ProcessId) -> Option<&FailureEntry> {
        self.entries.iter().find(|e| e.process == p)
    }

    pub fn crash_round(&self, p: ProcessId) -> Option<usize> {
        self.entry(p).map(|e| e.round)
    }

    /// Structural validity against a network and a resilience bound:
    /// at most t crashes, and each F_p lies within p's proper
    /// out-neighborhood in the graph of the crash round.
    pub fn validate(&self, net: &Network, t: usize) -> Result<()> {
        if self.entries.len() > t {
            return Err(usage(format!("{} crashes exceed resilience t={t}", self.entries.len())));
        }
        for e in &self.entries {
            let g = net.round_graph(e.round).ok_or_else(|| {
                usage(format!("crash round {} beyond the graph sequence", e.round))
            })?;
            let proper = g.out_set(e.process).minus(NodeSet::singleton(e.process));
            if !e.forwarded.is_subset(proper) {
                return Err(usage(format!(
                    "process {} forwards outside its round-{} out-neighborhood",
                    e.process.0, e.round
                )));
            }
        }
        Ok(())
    }
}

/// Initial view per participating process. Processes absent from the
/// map take no part in the execution at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputAssignment {
    map: BTreeMap<ProcessId, Label>,
}

impl InputAssignment {
    pub fn from_values(values: &[(usize, i64)]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for &(p, v) in values {
            if p == 0 {
                return Err(usage("process ids are 1-based".to_string()));
            }
            if map.insert(ProcessId(p), Label::int(v)).is_some() {
                return Err(usage(format!("duplicate input for process {p}")));
            }
        }
        Ok(InputAssignment { map })
    }

    /// Initial views from a simplex: each vertex label becomes the
    /// starting state of its color.
    pub fn from_facet(facet: &Simplex) -> Self {
        let map = facet
            .vertices()
            .iter()
            .map(|v| (v.color, v.label.clone()))
            .collect();
        InputAssignment { map }
    }

    pub fn participants(&self) -> NodeSet {
        self.map.keys().copied().collect()
    }

    pub fn get(&self, p: ProcessId) -> Option<&Label> {
        self.map.get(&p)
    }

    pub fn iter(&self) -> impl Iterator<Item = (ProcessId, &Label)> {
        self.map.iter().map(|(p, l)| (*p, l))
    }

    /// Inputs as plain integers; errors when any initial view is
    /// structured (only round-0 assignments qualify).
    pub fn int_values(&self) -> Result<BTreeMap<ProcessId, i64>> {
        let mut out = BTreeMap::new();
        for (p, l) in &self.map {
            match l.as_int() {
                Some(v) => {
                    out.insert(*p, v);
                }
                None => {
                    return Err(usage(format!("input of process {} is not a plain value", p.0)))
                }
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug)]
pub struct ExecutionSpec {
    pub net: Network,
    pub inputs: InputAssignment,
    pub failures: FailurePattern,
    pub rounds: usize,
}

/// One delivered message; the payload is a digest of the sender's
/// state at the start of the round.
#[derive(Clone, Debug, Serialize)]
pub struct TranscriptRecord {
    pub round: usize,
    pub sender: ProcessId,
    pub receiver: ProcessId,
    pub payload: String,
}

fn payload_digest(view: &Label) -> String {
    let hash = Sha256::digest(view.canon().as_bytes());
    let mut s = String::with_capacity(64);
    for b in hash {
        use std::fmt::Write;
        let _ = write!(s, "{b:02x}");
    }
    s
}

fn simulate(
    net: &Network,
    inputs: &InputAssignment,
    failures: &FailurePattern,
    rounds: usize,
    mut transcript: Option<&mut Vec<TranscriptRecord>>,
) -> Result<Simplex> {
    let n = net.n();
    failures.validate(net, n)?;
    let mut views: Vec<Option<Label>> = (1..=n)
        .map(|p| inputs.get(ProcessId(p)).cloned())
        .collect();
    for r in 1..=rounds {
        let g = net
            .round_graph(r)
            .ok_or_else(|| usage(format!("graph sequence ends before round {r}")))?;
        let mut next: Vec<Option<Label>> = vec![None; n];
        for qi in 1..=n {
            let q = ProcessId(qi);
            if views[qi - 1].is_none() {
                continue; // never participated or already crashed
            }
            if failures.crash_round(q).is_some_and(|f| f <= r) {
                continue; // crashes during round r or earlier
            }
            let mut received: Vec<(ProcessId, Label)> = Vec::new();
            for p in g.in_set(q).iter() {
                let Some(pv) = views[p.0 - 1].as_ref() else { continue };
                let delivered = match failures.entry(p) {
                    Some(e) if e.round < r => false,
                    Some(e) if e.round == r => e.forwarded.contains(q),
                    _ => true,
                };
                if delivered {
                    if let Some(t) = transcript.as_deref_mut() {
                        t.push(TranscriptRecord {
                            round: r,
                            sender: p,
                            receiver: q,
                            payload: payload_digest(pv),
                        });
                    }
                    received.push((p, pv.clone()));
                }
            }
            // self-loops are mandatory and q is alive, so q heard itself
            debug_assert!(received.iter().any(|(p, _)| *p == q));
            next[qi - 1] = Some(Label::pairs(received)?);
        }
        views = next;
    }
    let verts: Vec<Vertex> = views
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.as_ref().map(|l| Vertex::new(ProcessId(i + 1), l.clone())))
        .collect();
    Simplex::new(verts)
}

/// Runs one execution to the end of `rounds` and returns the global
/// state: one vertex per process still alive.
pub fn run_full_information(spec: &ExecutionSpec) -> Result<Simplex> {
    simulate(&spec.net, &spec.inputs, &spec.failures, spec.rounds, None)
}

/// Same as [`run_full_information`] but also records every delivered
/// message, in (round, receiver, sender) order.
pub fn run_with_transcript(spec: &ExecutionSpec) -> Result<(Simplex, Vec<TranscriptRecord>)> {
    let mut t = Vec::new();
    let facet = simulate(&spec.net, &spec.inputs, &spec.failures, spec.rounds, Some(&mut t))?;
    Ok((facet, t))
}

/// Adversary classes for pattern enumeration. The resilience bound t
/// is passed alongside; `InitiallyDead` kills exactly t processes in
/// round 1 with nothing forwarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureMode {
    All,
    ExactlyKPerRound(usize),
    CleanOnly,
    InitiallyDead,
}

/// Default cap on enumerated patterns/executions, overridable via the
/// KSETLAB_BUDGET environment variable.
pub const DEFAULT_BUDGET: usize = 2_000_000;

pub fn enumeration_budget() -> usize {
    std::env::var("KSETLAB_BUDGET")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

fn submasks(m: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(1 << m.count_ones());
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    out.reverse(); // ascending
    out
}

fn proper_out(g: &DirectedGraph, p: ProcessId) -> NodeSet {
    g.out_set(p).minus(NodeSet::singleton(p))
}

/// Crash-round/forwarded-set options for one process, ascending.
fn crash_options(net: &Network, p: ProcessId, rounds: usize, clean_only: bool) -> Vec<(usize, NodeSet)> {
    let mut opts = Vec::new();
    for f in 1..=rounds {
        let g = net.round_graph(f).expect("round within sequence");
        let proper = proper_out(g, p);
        if clean_only {
            opts.push((f, NodeSet::empty()));
            if !proper.is_empty() {
                opts.push((f, proper));
            }
        } else {
            for m in submasks(proper.0) {
                opts.push((f, NodeSet(m)));
            }
        }
    }
    opts
}

/// Exact pattern count for a mode, without materializing anything.
pub fn count_failure_patterns(
    net: &Network,
    t: usize,
    rounds: usize,
    mode: &FailureMode,
) -> Result<u128> {
    let n = net.n();
    for r in 1..=rounds {
        if net.round_graph(r).is_none() {
            return Err(usage(format!("graph sequence ends before round {r}")));
        }
    }
    match mode {
        FailureMode::All | FailureMode::CleanOnly => {
            let clean = *mode == FailureMode::CleanOnly;
            // per-process option counts, then symmetric sums e_0..e_t
            let c: Vec<u128> = (1..=n)
                .map(|p| crash_options(net, ProcessId(p), rounds, clean).len() as u128)
                .collect();
            let mut e = vec![0u128; t + 1];
            e[0] = 1;
            for &cp in &c {
                for j in (1..=t.min(n)).rev() {
                    e[j] = e[j].saturating_add(e[j - 1].saturating_mul(cp));
                }
            }
            Ok(e.iter().fold(0u128, |a, &b| a.saturating_add(b)))
        }
        FailureMode::ExactlyKPerRound(k) => {
            let k = *k;
            if k == 0 || t % k != 0 {
                return Err(usage(format!("exactly-k mode needs k ≥ 1 dividing t (k={k}, t={t})")));
            }
            let last = (t / k).min(rounds);
            fn count(net: &Network, n: usize, k: usize, r: usize, last: usize, dead: NodeSet) -> u128 {
                if r > last {
                    return 1;
                }
                let g = net.round_graph(r).expect("round within sequence");
                let alive = NodeSet::full(n).minus(dead);
                let mut total = 0u128;
                for mask in crate::graph::subsets_exact(alive.0, k) {
                    let mut per = 1u128;
                    for p in NodeSet(mask).iter() {
                        per = per.saturating_mul(1u128 << proper_out(g, p).len());
                    }
                    total = total.saturating_add(
                        per.saturating_mul(count(net, n, k, r + 1, last, dead.union(NodeSet(mask)))),
                    );
                }
                total
            }
            Ok(count(net, n, k, 1, last, NodeSet::empty()))
        }
        FailureMode::InitiallyDead => {
            if t > n {
                return Err(usage(format!("cannot kill {t} of {n} processes")));
            }
            let mut c = 1u128;
            for i in 0..t {
                c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
            }
            Ok(c)
        }
    }
}

/// Exhaustive, duplicate-free pattern list for the mode, in a fixed
/// deterministic order. Errors with the exact count when it exceeds
/// the budget (`None` → KSETLAB_BUDGET or the default).
pub fn enumerate_failure_patterns(
    net: &Network,
    t: usize,
    rounds: usize,
    mode: &FailureMode,
    cap: Option<usize>,
) -> Result<Vec<FailurePattern>> {
    let n = net.n();
    let cap = cap.unwrap_or_else(enumeration_budget);
    let total = count_failure_patterns(net, t, rounds, mode)?;
    if total > cap as u128 {
        return Err(budget(format!("{total} failure patterns exceed the budget of {cap}")));
    }
    let mut out = Vec::with_capacity(total as usize);
    match mode {
        FailureMode::All | FailureMode::CleanOnly => {
            let clean = *mode == FailureMode::CleanOnly;
            fn dfs(
                net: &Network,
                n: usize,
                t: usize,
                rounds: usize,
                clean: bool,
                first: usize,
                acc: &mut Vec<FailureEntry>,
                out: &mut Vec<FailurePattern>,
            ) {
                out.push(FailurePattern { entries: acc.clone() });
                if acc.len() == t {
                    return;
                }
                for p in first..=n {
                    for (f, fwd) in crash_options(net, ProcessId(p), rounds, clean) {
                        acc.push(FailureEntry { process: ProcessId(p), forwarded: fwd, round: f });
                        dfs(net, n, t, rounds, clean, p + 1, acc, out);
                        acc.pop();
                    }
                }
            }
            dfs(net, n, t, rounds, clean, 1, &mut Vec::new(), &mut out);
        }
        FailureMode::ExactlyKPerRound(k) => {
            let last = (t / k).min(rounds);
            fn per_round(
                net: &Network,
                n: usize,
                k: usize,
                r: usize,
                last: usize,
                dead: NodeSet,
                acc: &mut Vec<FailureEntry>,
                out: &mut Vec<FailurePattern>,
            ) {
                if r > last {
                    let mut entries = acc.clone();
                    entries.sort();
                    out.push(FailurePattern { entries });
                    return;
                }
                let g = net.round_graph(r).expect("round within sequence");
                let alive = NodeSet::full(n).minus(dead);
                for mask in crate::graph::subsets_exact(alive.0, k) {
                    let crashers: Vec<ProcessId> = NodeSet(mask).iter().collect();
                    forward_sets(net, g, n, k, r, last, dead.union(NodeSet(mask)), &crashers, acc, out);
                }
            }
            // choose a forwarded set for each of this round's crashers,
            // then descend into the next round
            #[allow(clippy::too_many_arguments)]
            fn forward_sets(
                net: &Network,
                g: &DirectedGraph,
                n: usize,
                k: usize,
                r: usize,
                last: usize,
                dead: NodeSet,
                crashers: &[ProcessId],
                acc: &mut Vec<FailureEntry>,
                out: &mut Vec<FailurePattern>,
            ) {
                let Some((&p, rest)) = crashers.split_first() else {
                    per_round(net, n, k, r + 1, last, dead, acc, out);
                    return;
                };
                for m in submasks(proper_out(g, p).0) {
                    acc.push(FailureEntry { process: p, forwarded: NodeSet(m), round: r });
                    forward_sets(net, g, n, k, r, last, dead, rest, acc, out);
                    acc.pop();
                }
            }
            per_round(net, n, *k, 1, last, NodeSet::empty(), &mut Vec::new(), &mut out);
        }
        FailureMode::InitiallyDead => {
            for mask in crate::graph::subsets_exact(NodeSet::full(n).0, t) {
                let entries = NodeSet(mask)
                    .iter()
                    .map(|p| FailureEntry { process: p, forwarded: NodeSet::empty(), round: 1 })
                    .collect();
                out.push(FailurePattern { entries });
            }
        }
    }
    Ok(out)
}

/// Pruned adversary for large instances: every crash is clean except
/// at most one. For t = 1 this coincides with mode All.
pub fn enumerate_clean_plus_one_unclean(
    net: &Network,
    t: usize,
    rounds: usize,
    cap: Option<usize>,
) -> Result<Vec<FailurePattern>> {
    let all_clean = enumerate_failure_patterns(net, t, rounds, &FailureMode::CleanOnly, cap)?;
    let cap = cap.unwrap_or_else(enumeration_budget);
    let mut seen = std::collections::BTreeSet::new();
    for pat in all_clean {
        seen.insert(pat);
    }
    // upgrade one clean entry to an arbitrary forwarded set
    let base: Vec<FailurePattern> = seen.iter().cloned().collect();
    for pat in base {
        for (i, e) in pat.entries.iter().enumerate() {
            let g = net.round_graph(e.round).expect("validated");
            for m in submasks(proper_out(g, e.process).0) {
                let mut entries = pat.entries.clone();
                entries[i].forwarded = NodeSet(m);
                seen.insert(FailurePattern { entries });
                if seen.len() > cap {
                    return Err(budget(format!(
                        "more than {cap} pruned failure patterns"
                    )));
                }
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// All end-of-round-`rounds` global states over every input facet and
/// every failure pattern of the mode. Vertex merging is structural:
/// identical (process, view) pairs coincide across executions.
pub fn protocol_complex(
    net: &Network,
    input_complex: &Complex,
    t: usize,
    rounds: usize,
    mode: &FailureMode,
    cap: Option<usize>,
) -> Result<Complex> {
    let patterns = enumerate_failure_patterns(net, t, rounds, mode, cap)?;
    let facets = input_complex.facets();
    let cap = cap.unwrap_or_else(enumeration_budget);
    let runs = facets.len().saturating_mul(patterns.len());
    if runs > cap {
        return Err(budget(format!("{runs} executions exceed the budget of {cap}")));
    }
    let jobs: Vec<(usize, usize)> = (0..facets.len())
        .flat_map(|f| (0..patterns.len()).map(move |p| (f, p)))
        .collect();
    let results = par::par_map(&jobs, |&(f, p)| {
        simulate(net, &InputAssignment::from_facet(&facets[f]), &patterns[p], rounds, None)
    });
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        out.push(r?);
    }
    Ok(Complex::from_facets(out))
}

/// Rounds a min-flooding run needs before deciding: ⌊t/k⌋ + D(G,t).
pub fn flooding_horizon(g: &DirectedGraph, t: usize, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(usage("k must be at least 1".to_string()));
    }
    match crate::graph::d_of_g_t(g, t)?.value {
        Bound::Finite(d) => Ok(t / k + d),
        Bound::Infinite => Err(usage("graph not t-connected".to_string())),
    }
}

/// Forward-the-minimum for ⌊t/k⌋ + D(G,t) rounds; every survivor
/// decides the smallest value it has seen.
pub fn min_flooding(
    g: &DirectedGraph,
    inputs: &InputAssignment,
    failures: &FailurePattern,
    t: usize,
    k: usize,
) -> Result<BTreeMap<ProcessId, i64>> {
    let n = g.n();
    if inputs.participants() != NodeSet::full(n) {
        return Err(usage("min-flooding needs an input for every process".to_string()));
    }
    let vals = inputs.int_values()?;
    let net = Network::Static(g.clone());
    failures.validate(&net, t)?;
    let horizon = flooding_horizon(g, t, k)?;
    let mut val: Vec<Option<i64>> = (1..=n).map(|p| vals.get(&ProcessId(p)).copied()).collect();
    for r in 1..=horizon {
        let mut next: Vec<Option<i64>> = vec![None; n];
        for qi in 1..=n {
            let q = ProcessId(qi);
            if val[qi - 1].is_none() || failures.crash_round(q).is_some_and(|f| f <= r) {
                continue;
            }
            let mut m = val[qi - 1].expect("alive");
            for p in g.in_set(q).iter() {
                let Some(pv) = val[p.0 - 1] else { continue };
                let delivered = match failures.entry(p) {
                    Some(e) if e.round < r => false,
                    Some(e) if e.round == r => e.forwarded.contains(q),
                    _ => true,
                };
                if delivered {
                    m = m.min(pv);
                }
            }
            next[qi - 1] = Some(m);
        }
        val = next;
    }
    Ok((1..=n)
        .filter_map(|p| val[p - 1].map(|v| (ProcessId(p), v)))
        .collect())
}

/// k-agreement and validity of a finished run: at most k distinct
/// decisions, each equal to some participant's input. The decision map
/// is taken to cover exactly the surviving processes.
pub fn verify_kset_run(
    decisions: &BTreeMap<ProcessId, i64>,
    inputs: &InputAssignment,
    k: usize,
) -> bool {
    let distinct: std::collections::BTreeSet<i64> = decisions.values().copied().collect();
    if distinct.len() > k {
        return false;
    }
    let valid: std::collections::BTreeSet<i64> = inputs
        .iter()
        .flat_map(|(_, l)| l.leaf_values())
        .collect();
    distinct.iter().all(|v| valid.contains(v))
}

/// Scenario file: graph, parameters, adversary mode, and either a
/// concrete input assignment or "all_inputs" over the values 0..=k.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub graph: DirectedGraph,
    pub graph_notes: Vec<String>,
    pub t: usize,
    pub k: usize,
    pub rounds: usize,
    pub mode: FailureMode,
    pub inputs: ScenarioInputs,
}

#[derive(Debug, Clone)]
pub enum ScenarioInputs {
    Given(InputAssignment),
    AllInputs,
}

impl Scenario {
    /// Input complex for the scenario: the given assignment as a single
    /// facet, or the full pseudosphere over 0..=k.
    pub fn input_complex(&self) -> Result<Complex> {
        match &self.inputs {
            ScenarioInputs::Given(a) => {
                let verts: Vec<Vertex> = a
                    .iter()
                    .map(|(p, l)| Vertex::new(p, l.clone()))
                    .collect();
                Ok(Complex::from_facets(vec![Simplex::new(verts)?]))
            }
            ScenarioInputs::AllInputs => {
                let values: Vec<Label> = (0..=self.k as i64).map(Label::int).collect();
                pseudosphere_uniform(NodeSet::full(self.graph.n()), &values)
            }
        }
    }
}

#[derive(Deserialize)]
struct ScenarioJson {
    graph: GraphJson,
    t: usize,
    k: usize,
    rounds: usize,
    mode: String,
    #[serde(default)]
    inputs: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    all_inputs: Option<bool>,
}

pub fn scenario_from_json(text: &str) -> Result<Scenario> {
    let j: ScenarioJson =
        serde_json::from_str(text).map_err(|e| usage(format!("bad scenario JSON: {e}")))?;
    let (graph, graph_notes) = graph_from_json(&j.graph)?;
    let mode = match j.mode.replace('-', "_").as_str() {
        "all" => FailureMode::All,
        "exactly_k_per_round" => FailureMode::ExactlyKPerRound(j.k),
        "clean_only" => FailureMode::CleanOnly,
        "initially_dead" => FailureMode::InitiallyDead,
        other => return Err(usage(format!("unknown mode {other:?}"))),
    };
    if let FailureMode::ExactlyKPerRound(k) = mode {
        if k == 0 || j.t % k != 0 {
            return Err(usage(format!(
                "exactly-k mode needs k ≥ 1 dividing t (k={k}, t={})",
                j.t
            )));
        }
    }
    let inputs = match (&j.inputs, j.all_inputs.unwrap_or(false)) {
        (Some(map), false) => {
            let mut pairs = Vec::new();
            for (key, v) in map {
                let p: usize = key
                    .parse()
                    .map_err(|_| usage(format!("bad process id {key:?} in inputs")))?;
                if p == 0 || p > graph.n() {
                    return Err(usage(format!("process id {p} out of range")));
                }
                pairs.push((p, *v));
            }
            let a = InputAssignment::from_values(&pairs)?;
            if a.participants() != NodeSet::full(graph.n()) {
                return Err(usage("inputs must cover every process".to_string()));
            }
            ScenarioInputs::Given(a)
        }
        (None, true) => ScenarioInputs::AllInputs,
        (Some(_), true) => {
            return Err(usage("give either inputs or all_inputs, not both".to_string()))
        }
        (None, false) => {
            return Err(usage("scenario needs inputs or all_inputs: true".to_string()))
        }
    };
    Ok(Scenario { graph, graph_notes, t: j.t, k: j.k, rounds: j.rounds, mode, inputs })
}
