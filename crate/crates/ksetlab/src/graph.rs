//! Directed communication graphs and the distance-like quantities the
//! round bounds are built from.
//!
//! Graphs live on the universe `{1..n}` and always carry every self-loop:
//! a process hears itself, and in a temporal product a self-loop is what
//! lets information wait at a node. Node sets and adjacency rows are
//! bitmasks, so `n` is capped at [`MAX_NODES`].
//!
//! The quantities:
//! * `eccentricity(D, G)` — rounds until `D` collectively reaches every
//!   node, along temporal paths when `G` is a sequence.
//! * `diameter(G)` — max over ordered pairs of hop distance.
//! * `d_of_g_t(G, t)` — worst induced diameter after deleting up to `t`
//!   nodes. Drives the flooding horizon.
//! * `big_rad(G, m)` — best eccentricity over broadcaster sets of size `m`.
//! * `rad_tk(G, t, k)` — radius against `t` adversarial deletions inside
//!   a `(t+k)`-set of broadcasters. Drives the lower bound.
//! * `domination_number_out(G)` — smallest set with an out-edge into
//!   every other node.
//! * `p_caused_edges`, `union_graph` — the scissors-cut bookkeeping for
//!   the dominance route: which product edges exist only because of one
//!   process, and the pruned union of petal products.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{invariant, usage, Result};
use crate::par;

/// Bitmask node sets keep every quantity here allocation-free.
pub const MAX_NODES: usize = 32;

/// 1-based process identifier, matching the on-disk JSON convention.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProcessId(pub usize);

impl ProcessId {
    #[must_use]
    pub fn bit(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for ProcessId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Set of processes as a bitmask; bit `i` holds process `i+1`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct NodeSet(pub u64);

impl NodeSet {
    #[must_use]
    pub fn empty() -> Self {
        NodeSet(0)
    }

    #[must_use]
    pub fn full(n: usize) -> Self {
        NodeSet(if n == 64 { u64::MAX } else { (1u64 << n) - 1 })
    }

    #[must_use]
    pub fn singleton(p: ProcessId) -> Self {
        NodeSet(p.bit())
    }

    pub fn insert(&mut self, p: ProcessId) {
        self.0 |= p.bit();
    }

    pub fn remove(&mut self, p: ProcessId) {
        self.0 &= !p.bit();
    }

    #[must_use]
    pub fn contains(self, p: ProcessId) -> bool {
        self.0 & p.bit() != 0
    }

    #[must_use]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[must_use]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[must_use]
    pub fn union(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 | other.0)
    }

    #[must_use]
    pub fn intersect(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & other.0)
    }

    #[must_use]
    pub fn minus(self, other: NodeSet) -> NodeSet {
        NodeSet(self.0 & !other.0)
    }

    #[must_use]
    pub fn is_subset(self, other: NodeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = ProcessId> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(ProcessId(i + 1))
            }
        })
    }

    #[must_use]
    pub fn to_vec(self) -> Vec<usize> {
        self.iter().map(|p| p.0).collect()
    }
}

impl FromIterator<ProcessId> for NodeSet {
    fn from_iter<I: IntoIterator<Item = ProcessId>>(iter: I) -> Self {
        let mut s = NodeSet::empty();
        for p in iter {
            s.insert(p);
        }
        s
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// A round count that may be unreachable.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Hash)]
pub enum Bound {
    Finite(usize),
    Infinite,
}

impl Bound {
    #[must_use]
    pub fn finite(self) -> Option<usize> {
        match self {
            Bound::Finite(v) => Some(v),
            Bound::Infinite => None,
        }
    }
}

impl PartialOrd for Bound {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Bound {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use Bound::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Infinite) => std::cmp::Ordering::Less,
            (Infinite, Finite(_)) => std::cmp::Ordering::Greater,
            (Infinite, Infinite) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(v) => write!(f, "{v}"),
            Bound::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Bound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Bound::Finite(v) => s.serialize_u64(*v as u64),
            Bound::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Bound {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        match v {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(|x| Bound::Finite(x as usize))
                .ok_or_else(|| D::Error::custom("bound must be a non-negative integer")),
            serde_json::Value::String(s) if s == "inf" => Ok(Bound::Infinite),
            _ => Err(D::Error::custom("bound must be an integer or \"inf\"")),
        }
    }
}

/// Directed graph on `{1..n}` with mandatory self-loops.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    n: usize,
    out: Vec<u64>,
}

impl fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DirectedGraph(n={}, edges={:?})", self.n, self.proper_edges())
    }
}

impl DirectedGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(usage(format!("graph size {n} outside 1..={MAX_NODES}")));
        }
        let out = (0..n).map(|i| 1u64 << i).collect();
        Ok(DirectedGraph { n, out })
    }

    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = DirectedGraph::new(n)?;
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(usage(format!("edge ({u},{v}) outside universe 1..={n}")));
            }
            g.add_edge(ProcessId(u), ProcessId(v));
        }
        Ok(g)
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub fn add_edge(&mut self, u: ProcessId, v: ProcessId) {
        self.out[u.0 - 1] |= v.bit();
    }

    pub fn remove_edge(&mut self, u: ProcessId, v: ProcessId) {
        if u != v {
            self.out[u.0 - 1] &= !v.bit();
        }
    }

    #[must_use]
    pub fn has_edge(&self, u: ProcessId, v: ProcessId) -> bool {
        self.out[u.0 - 1] & v.bit() != 0
    }

    #[must_use]
    pub fn out_set(&self, p: ProcessId) -> NodeSet {
        NodeSet(self.out[p.0 - 1])
    }

    #[must_use]
    pub fn in_set(&self, p: ProcessId) -> NodeSet {
        let mut s = NodeSet::empty();
        for u in 0..self.n {
            if self.out[u] & p.bit() != 0 {
                s.insert(ProcessId(u + 1));
            }
        }
        s
    }

    /// All edges including self-loops, sorted.
    #[must_use]
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for u in 0..self.n {
            for v in NodeSet(self.out[u]).iter() {
                e.push((u + 1, v.0));
            }
        }
        e
    }

    /// Edges without self-loops, sorted.
    #[must_use]
    pub fn proper_edges(&self) -> Vec<(usize, usize)> {
        self.edges().into_iter().filter(|&(u, v)| u != v).collect()
    }

    pub fn symmetrize(&mut self) {
        for u in 0..self.n {
            for v in NodeSet(self.out[u]).iter() {
                self.out[v.0 - 1] |= 1u64 << u;
            }
        }
    }

    /// Same universe, but only edges inside `keep` survive (self-loops
    /// elsewhere remain, which keeps the representation legal while
    /// making outside nodes inert in products and reachability).
    #[must_use]
    pub fn induced_embedded(&self, keep: NodeSet) -> DirectedGraph {
        let mut out = vec![0u64; self.n];
        for u in 0..self.n {
            let bit = 1u64 << u;
            out[u] = if keep.0 & bit != 0 { self.out[u] & keep.0 } else { 0 };
            out[u] |= bit;
        }
        DirectedGraph { n: self.n, out }
    }

    /// Re-indexed induced subgraph: node `i+1` of the result is
    /// `members[i]` of `self`, with `members` the sorted elements of `s`.
    pub fn induced_subgraph(&self, s: NodeSet) -> Result<(DirectedGraph, Vec<ProcessId>)> {
        if s.is_empty() || !s.is_subset(self.nodes()) {
            return Err(usage("induced subgraph needs a non-empty subset of the universe".to_string()));
        }
        let members: Vec<ProcessId> = s.iter().collect();
        let mut g = DirectedGraph::new(members.len())?;
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate() {
                if self.has_edge(u, v) {
                    g.add_edge(ProcessId(i + 1), ProcessId(j + 1));
                }
            }
        }
        Ok((g, members))
    }

    // Stock instances used across tests and docs.

    #[must_use]
    pub fn complete(n: usize) -> DirectedGraph {
        let mut g = DirectedGraph::new(n).expect("desk scale");
        for u in 1..=n {
            for v in 1..=n {
                g.add_edge(ProcessId(u), ProcessId(v));
            }
        }
        g
    }

    /// Undirected cycle 1-2-...-n-1.
    #[must_use]
    pub fn cycle(n: usize) -> DirectedGraph {
        let mut g = DirectedGraph::new(n).expect("desk scale");
        for u in 1..=n {
            let v = u % n + 1;
            g.add_edge(ProcessId(u), ProcessId(v));
            g.add_edge(ProcessId(v), ProcessId(u));
        }
        g
    }

    /// Directed ring 1 -> 2 -> ... -> n -> 1.
    #[must_use]
    pub fn ring_directed(n: usize) -> DirectedGraph {
        let mut g = DirectedGraph::new(n).expect("desk scale");
        for u in 1..=n {
            g.add_edge(ProcessId(u), ProcessId(u % n + 1));
        }
        g
    }

    /// Undirected path 1-2-...-n.
    #[must_use]
    pub fn path(n: usize) -> DirectedGraph {
        let mut g = DirectedGraph::new(n).expect("desk scale");
        for u in 1..n {
            g.add_edge(ProcessId(u), ProcessId(u + 1));
            g.add_edge(ProcessId(u + 1), ProcessId(u));
        }
        g
    }

    /// d-dimensional hypercube on 2^d nodes; node i+1 is the bit string i.
    #[must_use]
    pub fn hypercube(d: usize) -> DirectedGraph {
        let n = 1usize << d;
        let mut g = DirectedGraph::new(n).expect("desk scale");
        for u in 0..n {
            for b in 0..d {
                let v = u ^ (1 << b);
                g.add_edge(ProcessId(u + 1), ProcessId(v + 1));
            }
        }
        g
    }

    #[must_use]
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph g {\n");
        for u in 1..=self.n {
            s.push_str(&format!("  {u};\n"));
        }
        for (u, v) in self.proper_edges() {
            s.push_str(&format!("  {u} -> {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Non-empty list of same-universe round graphs; index r is round r+1.
#[derive(Clone, Debug)]
pub struct GraphSequence {
    rounds: Vec<DirectedGraph>,
}

impl GraphSequence {
    pub fn new(rounds: Vec<DirectedGraph>) -> Result<Self> {
        let n = match rounds.first() {
            Some(g) => g.n(),
            None => return Err(usage("graph sequence must be non-empty".to_string())),
        };
        if rounds.iter().any(|g| g.n() != n) {
            return Err(usage("graph sequence mixes universes".to_string()));
        }
        Ok(GraphSequence { rounds })
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.rounds[0].n()
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[must_use]
    pub fn rounds(&self) -> &[DirectedGraph] {
        &self.rounds
    }
}

/// A network is either one graph repeated forever or a finite sequence.
#[derive(Clone, Debug)]
pub enum Network {
    Static(DirectedGraph),
    Dynamic(GraphSequence),
}

impl Network {
    #[must_use]
    pub fn n(&self) -> usize {
        match self {
            Network::Static(g) => g.n(),
            Network::Dynamic(s) => s.n(),
        }
    }

    /// Graph of 1-based round `r`, or None past the end of a finite sequence.
    #[must_use]
    pub fn round_graph(&self, r: usize) -> Option<&DirectedGraph> {
        match self {
            Network::Static(g) => Some(g),
            Network::Dynamic(s) => s.rounds().get(r - 1),
        }
    }
}

fn reach_step(g: &DirectedGraph, covered: u64, active: u64) -> u64 {
    let mut next = covered;
    let mut rest = covered & active;
    while rest != 0 {
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        next |= g.out[i] & active;
    }
    next
}

/// Rounds until `sources` collectively covers `active`, moving only
/// inside `active`. Self-loops make coverage monotone, so a static
/// graph that stalls before covering never covers.
fn ecc_masked(net: &Network, sources: u64, active: u64) -> Bound {
    let target = active;
    let mut covered = sources & active;
    if covered & target == target {
        return Bound::Finite(0);
    }
    let mut r = 0usize;
    loop {
        r += 1;
        let Some(g) = net.round_graph(r) else {
            return Bound::Infinite;
        };
        let next = reach_step(g, covered, active);
        if next == covered {
            if matches!(net, Network::Static(_)) {
                return Bound::Infinite;
            }
        }
        covered = next;
        if covered & target == target {
            return Bound::Finite(r);
        }
        if r > 64 * net.n() {
            // Unreachable for legal inputs; guards against a cyclic
            // dynamic schedule sneaking in through future refactors.
            return Bound::Infinite;
        }
    }
}

/// Least r such that every node of the universe is reached from `d`
/// along temporal paths of length at most r.
pub fn eccentricity(net: &Network, d: NodeSet) -> Result<Bound> {
    let n = net.n();
    if d.is_empty() || !d.is_subset(NodeSet::full(n)) {
        return Err(usage("eccentricity needs a non-empty source set inside the universe".to_string()));
    }
    Ok(ecc_masked(net, d.0, NodeSet::full(n).0))
}

fn diameter_masked(g: &DirectedGraph, active: u64) -> (Bound, Option<(usize, usize)>) {
    let net = Network::Static(g.clone());
    let mut best = (Bound::Finite(0), None);
    let mut bits = active;
    while bits != 0 {
        let i = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let e = ecc_masked(&net, 1u64 << i, active);
        let witness = match e {
            Bound::Infinite => {
                // Some node is unreachable from i; report the least one.
                let mut covered = 1u64 << i;
                loop {
                    let next = reach_step(g, covered, active);
                    if next == covered {
                        break;
                    }
                    covered = next;
                }
                let missing = active & !covered;
                Some((i + 1, missing.trailing_zeros() as usize + 1))
            }
            Bound::Finite(r) => {
                // Least node at the final distance r.
                let mut covered = 1u64 << i;
                for _ in 0..r.saturating_sub(1) {
                    covered = reach_step(g, covered, active);
                }
                let last = reach_step(g, covered, active) & !covered;
                if last == 0 {
                    None
                } else {
                    Some((i + 1, last.trailing_zeros() as usize + 1))
                }
            }
        };
        if e > best.0 {
            best = (e, witness);
        }
        if matches!(best.0, Bound::Infinite) {
            return best;
        }
    }
    best
}

/// Max over ordered pairs of shortest-path length; infinite when not
/// strongly connected.
pub fn diameter(g: &DirectedGraph) -> (Bound, Option<(usize, usize)>) {
    diameter_masked(g, NodeSet::full(g.n()).0)
}

/// All subsets of `mask` with exactly `k` bits, ascending as integers.
pub(crate) fn subsets_exact(mask: u64, k: usize) -> Vec<u64> {
    let bits: Vec<u64> = NodeSet(mask).iter().map(|p| p.bit()).collect();
    if k > bits.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| bits[i]).fold(0u64, |a, b| a | b));
        // next combination in lexicographic index order
        let mut i = k;
        loop {
            if i == 0 {
                out.sort_unstable();
                return out;
            }
            i -= 1;
            if idx[i] != i + bits.len() - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All subsets of `mask` with at most `k` bits, ascending as integers.
pub(crate) fn subsets_up_to(mask: u64, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for s in 0..=k.min(NodeSet(mask).len()) {
        out.extend(subsets_exact(mask, s));
    }
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct DgtResult {
    pub value: Bound,
    /// Deleted set achieving the max, and a pair at the resulting diameter.
    pub removed: Vec<usize>,
    pub pair: Option<(usize, usize)>,
}

/// D(G,t): worst diameter over deletions of at most `t` nodes.
pub fn d_of_g_t(g: &DirectedGraph, t: usize) -> Result<DgtResult> {
    let n = g.n();
    if t >= n {
        return Err(usage(format!("deletion budget t={t} must leave at least one node of {n}")));
    }
    let full = NodeSet::full(n).0;
    let subsets = subsets_up_to(full, t);
    let evals = par::par_map(&subsets, |&s| {
        let (d, pair) = diameter_masked(g, full & !s);
        (d, s, pair)
    });
    let best = evals
        .into_iter()
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)))
        .expect("non-empty subset family");
    Ok(DgtResult { value: best.0, removed: NodeSet(best.1).to_vec(), pair: best.2 })
}

#[derive(Debug, Clone, Serialize)]
pub struct RadResult {
    pub value: Bound,
    pub broadcasters: Vec<usize>,
}

/// Rad(G,m): best collective eccentricity over broadcaster sets of size m.
pub fn big_rad(net: &Network, m: usize) -> Result<RadResult> {
    let n = net.n();
    if m == 0 || m > n {
        return Err(usage(format!("broadcaster count m={m} outside 1..={n}")));
    }
    let full = NodeSet::full(n).0;
    let subsets = subsets_exact(full, m);
    let evals = par::par_map(&subsets, |&d| (ecc_masked(net, d, full), d));
    let best = evals
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("non-empty subset family");
    Ok(RadResult { value: best.0, broadcasters: NodeSet(best.1).to_vec() })
}

#[derive(Debug, Clone, Serialize)]
pub struct RadTkResult {
    pub value: Bound,
    pub broadcasters: Vec<usize>,
    /// The adversarial deletion inside the best broadcaster set.
    pub removed: Vec<usize>,
}

/// rad(G,t,k): pick t+k broadcasters, the adversary deletes t of them
/// (and their nodes), the survivors must cover what is left.
pub fn rad_tk(net: &Network, t: usize, k: usize) -> Result<RadTkResult> {
    let n = net.n();
    if k == 0 || t + k > n {
        return Err(usage(format!("rad needs k >= 1 and t+k <= n (got t={t}, k={k}, n={n})")));
    }
    let full = NodeSet::full(n).0;
    let dsets = subsets_exact(full, t + k);
    let evals = par::par_map(&dsets, |&d| {
        let mut worst = (Bound::Finite(0), 0u64);
        for dp in subsets_exact(d, t) {
            let active = full & !dp;
            let e = ecc_masked(net, d & !dp, active);
            if e > worst.0 {
                worst = (e, dp);
            }
        }
        (worst.0, d, worst.1)
    });
    let best = evals
        .into_iter()
        .min_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("non-empty subset family");
    Ok(RadTkResult {
        value: best.0,
        broadcasters: NodeSet(best.1).to_vec(),
        removed: NodeSet(best.2).to_vec(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DomResult {
    pub value: usize,
    pub set: Vec<usize>,
}

/// Outgoing domination number: smallest S where every node outside S
/// has an in-edge from S. A self-loop never dominates anything else.
pub fn domination_number_out(g: &DirectedGraph) -> DomResult {
    domination_number_out_masked(g, NodeSet::full(g.n()))
}

/// Same, restricted to the sub-universe `active`.
pub fn domination_number_out_masked(g: &DirectedGraph, active: NodeSet) -> DomResult {
    let cover: Vec<u64> = active
        .iter()
        .map(|p| (g.out[p.0 - 1] | p.bit()) & active.0)
        .collect();
    let target = active.0;
    // Iterative deepening in lexicographic order: the first dominating
    // set found is the canonical witness.
    for size in 0..=active.len() {
        for s in subsets_exact(active.0, size) {
            let mut covered = s;
            let mut rest = s;
            while rest != 0 {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let p = ProcessId(i + 1);
                let pos = active.iter().position(|q| q == p).expect("member");
                covered |= cover[pos];
            }
            if covered & target == target {
                return DomResult { value: size, set: NodeSet(s).to_vec() };
            }
        }
    }
    unreachable!("the full set always dominates");
}

/// Relational product of the rounds restricted to `active`: an edge
/// (p,q) means q hears p along a temporal path inside `active`.
pub fn product_masked(rounds: &[DirectedGraph], active: NodeSet) -> Result<DirectedGraph> {
    let n = match rounds.first() {
        Some(g) => g.n(),
        None => return Err(usage("product of an empty sequence".to_string())),
    };
    if rounds.iter().any(|g| g.n() != n) {
        return Err(usage("product mixes universes".to_string()));
    }
    // Every node starts reaching itself; inactive nodes stay that way.
    let mut out: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for g in rounds {
        for i in 0..n {
            if active.0 & (1u64 << i) == 0 {
                continue;
            }
            let mut next = 1u64 << i;
            let mut rest = out[i] & active.0;
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                next |= g.out[q] & active.0;
            }
            out[i] = next;
        }
    }
    Ok(DirectedGraph { n, out })
}

/// Product over the full universe.
pub fn product(rounds: &[DirectedGraph]) -> Result<DirectedGraph> {
    let n = rounds.first().map(|g| g.n()).unwrap_or(0);
    product_masked(rounds, NodeSet::full(n))
}

/// Edges of the product that vanish when `p` is deleted from every
/// round: both endpoints differ from `p`, and every realizing temporal
/// path runs through `p`.
pub fn p_caused_edges(seq: &GraphSequence, p: ProcessId) -> Result<Vec<(usize, usize)>> {
    let n = seq.n();
    if p.0 == 0 || p.0 > n {
        return Err(usage(format!("process {p} outside universe 1..={n}")));
    }
    let full = product(seq.rounds())?;
    let without = product_masked(seq.rounds(), NodeSet::full(n).minus(NodeSet::singleton(p)))?;
    let mut caused = Vec::new();
    for (u, v) in full.proper_edges() {
        if u != p.0 && v != p.0 && !without.has_edge(ProcessId(u), ProcessId(v)) {
            caused.push((u, v));
        }
    }
    Ok(caused)
}

/// One entry of a pruned union: either a plain product graph, or a
/// petal given by its round sequence and its present process.
#[derive(Clone, Debug)]
pub enum UnionEntry {
    Plain(DirectedGraph),
    Petal { rounds: GraphSequence, present: ProcessId },
}

/// Union of pruned petal products. A petal entry contributes its round
/// product minus (a) incoming edges of the present process (self-loop
/// kept) and (b) every edge caused only by paths through the present
/// process. Entry 0 must be plain.
pub fn union_graph(entries: &[UnionEntry]) -> Result<DirectedGraph> {
    let first = match entries.first() {
        Some(UnionEntry::Plain(g)) => g,
        Some(UnionEntry::Petal { .. }) => {
            return Err(usage("union entry 0 must not name a present process".to_string()))
        }
        None => return Err(usage("union of no entries".to_string())),
    };
    let n = first.n();
    let mut out = first.out.clone();
    for entry in &entries[1..] {
        let pruned = match entry {
            UnionEntry::Plain(g) => {
                if g.n() != n {
                    return Err(usage("union mixes universes".to_string()));
                }
                g.clone()
            }
            UnionEntry::Petal { rounds, present } => {
                if rounds.n() != n {
                    return Err(usage("union mixes universes".to_string()));
                }
                let mut g = product(rounds.rounds())?;
                for u in (1..=n).map(ProcessId) {
                    if u != *present {
                        g.remove_edge(u, *present);
                    }
                }
                for (u, v) in p_caused_edges(rounds, *present)? {
                    g.remove_edge(ProcessId(u), ProcessId(v));
                }
                g
            }
        };
        for i in 0..n {
            out[i] |= pruned.out[i];
        }
    }
    let g = DirectedGraph { n, out };
    for i in 0..n {
        if g.out[i] & (1u64 << i) == 0 {
            return Err(invariant(format!("self-loop of {} lost in union", i + 1)));
        }
    }
    Ok(g)
}

/// On-disk graph form. Undirected inputs are symmetrized and missing
/// self-loops are added; both normalizations are reported as notes.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    #[serde(default = "default_directed")]
    pub directed: bool,
}

fn default_directed() -> bool {
    true
}

pub fn graph_from_json(j: &GraphJson) -> Result<(DirectedGraph, Vec<String>)> {
    let mut g = DirectedGraph::with_edges(j.n, &j.edges)?;
    let mut notes = Vec::new();
    if !j.directed {
        let before = g.clone();
        g.symmetrize();
        if g != before {
            notes.push("symmetrized undirected input".to_string());
        }
    }
    let had_loops = (1..=j.n).all(|u| j.edges.contains(&(u, u)));
    if !had_loops {
        notes.push("added missing self-loops".to_string());
    }
    Ok((g, notes))
}

pub fn graph_to_json(g: &DirectedGraph) -> GraphJson {
    GraphJson { n: g.n(), edges: g.edges(), directed: true }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_is_sorted_and_complete() {
        let s = subsets_exact(0b10111, 2);
        assert_eq!(s.len(), 6);
        let mut sorted = s.clone();
        sorted.sort_unstable();
        assert_eq!(s, sorted);
        assert!(subsets_up_to(0b111, 3).len() == 8);
    }

    #[test]
    fn product_of_line_accumulates_reach() {
        let g = DirectedGraph::with_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let p = product(&[g.clone(), g.clone()]).unwrap();
        assert!(p.has_edge(ProcessId(1), ProcessId(3)));
        assert!(!p.has_edge(ProcessId(3), ProcessId(1)));
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = DirectedGraph::cycle(4);
        let (h, members) = g.induced_subgraph(NodeSet(0b1101)).unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(members, vec![ProcessId(1), ProcessId(3), ProcessId(4)]);
        // 1 and 3 are not adjacent in C_4; 3-4 and 4-1 are edges.
        assert!(!h.has_edge(ProcessId(1), ProcessId(2)));
        assert!(h.has_edge(ProcessId(2), ProcessId(3)));
        assert!(h.has_edge(ProcessId(3), ProcessId(1)));
    }
}
