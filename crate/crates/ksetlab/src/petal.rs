//! Petal-style union instances and the domination inequality they obey.
//!
//! An instance starts from a base survivor set of size n-t and attaches
//! petals. Each petal either reuses the base survivors (same induced
//! product, a no-op in the union) or swaps exactly one absent process in
//! for one base survivor. The union of the pruned petal products then
//! satisfies γ⁺(G₀) ≤ γ⁺(Ŭ) ≤ γ⁺(G₀) + |A|, with A the set of distinct
//! swapped-in processes; every member of A has in-degree 0 in the union.

use rand::Rng;
use serde::Serialize;

use crate::error::{usage, Result};
use crate::graph::{
    domination_number_out_masked, product_masked, union_graph, DirectedGraph, GraphSequence,
    NodeSet, ProcessId, UnionEntry,
};

/// One petal: None reuses the base survivors, Some((p, q)) swaps the
/// outside process p in for the base survivor q.
pub type Swap = Option<(ProcessId, ProcessId)>;

#[derive(Debug, Clone)]
pub struct PetalInstance {
    pub rounds: GraphSequence,
    /// Base survivor set V[G₀].
    pub base: NodeSet,
    pub swaps: Vec<Swap>,
    /// Entry 0 is the base product; one entry per petal follows.
    pub entries: Vec<UnionEntry>,
    /// Distinct swapped-in processes.
    pub a_set: NodeSet,
}

/// Builds the union entries for a base survivor set and a list of
/// petal swaps over a common round sequence.
pub fn petal_instance(
    rounds: GraphSequence,
    base: NodeSet,
    swaps: Vec<Swap>,
) -> Result<PetalInstance> {
    let n = rounds.n();
    let universe = NodeSet::full(n);
    if base.is_empty() || !base.is_subset(universe) {
        return Err(usage("base survivors must be a non-empty subset".to_string()));
    }
    let base_rounds: Vec<DirectedGraph> =
        rounds.rounds().iter().map(|g| g.induced_embedded(base)).collect();
    let base_product = product_masked(rounds.rounds(), base)?;
    let mut entries = vec![UnionEntry::Plain(base_product)];
    let mut a_set = NodeSet::empty();
    for swap in &swaps {
        match swap {
            None => {
                // same survivors, possibly different values: the induced
                // product repeats and the union gains nothing
                entries.push(UnionEntry::Petal {
                    rounds: GraphSequence::new(base_rounds.clone())?,
                    present: choose_base_member(base),
                });
            }
            Some((present, absent)) => {
                if base.contains(*present) || !base.contains(*absent) {
                    return Err(usage(format!(
                        "swap must bring {} in from outside for base member {}",
                        present.0, absent.0
                    )));
                }
                let members = base.minus(NodeSet::singleton(*absent)).union(NodeSet::singleton(*present));
                let petal_rounds: Vec<DirectedGraph> =
                    rounds.rounds().iter().map(|g| g.induced_embedded(members)).collect();
                entries.push(UnionEntry::Petal {
                    rounds: GraphSequence::new(petal_rounds)?,
                    present: *present,
                });
                a_set = a_set.union(NodeSet::singleton(*present));
            }
        }
    }
    Ok(PetalInstance { rounds, base, swaps, entries, a_set })
}

// For a no-swap petal the lemma treats the surviving facet itself as
// present; pruning around any base member keeps the entry inert only if
// the pruned product stays inside the base product, which pruning
// guarantees. The smallest member is the canonical pick.
fn choose_base_member(base: NodeSet) -> ProcessId {
    base.iter().next().expect("non-empty base")
}

#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub n: usize,
    pub petals: usize,
    pub a_size: usize,
    pub gamma_base: usize,
    pub gamma_union: usize,
    /// Every swapped-in process lacks proper in-edges in the union.
    pub a_in_degree_zero: bool,
    /// γ⁺(G₀) ≤ γ⁺(Ŭ) ≤ γ⁺(G₀) + |A|.
    pub holds: bool,
}

/// Evaluates the domination inequality on one instance.
pub fn check_sandwich(inst: &PetalInstance) -> Result<SandwichReport> {
    let union = union_graph(&inst.entries)?;
    let base_product = match &inst.entries[0] {
        UnionEntry::Plain(g) => g,
        UnionEntry::Petal { .. } => unreachable!("entry 0 is plain by construction"),
    };
    let active = inst.base.union(inst.a_set);
    let gamma_base = domination_number_out_masked(base_product, inst.base).value;
    let gamma_union = domination_number_out_masked(&union, active).value;
    let a_in_degree_zero = inst.a_set.iter().all(|p| {
        active
            .iter()
            .filter(|&u| u != p)
            .all(|u| !union.has_edge(u, p))
    });
    let holds = gamma_base <= gamma_union && gamma_union <= gamma_base + inst.a_set.len();
    Ok(SandwichReport {
        n: inst.rounds.n(),
        petals: inst.swaps.len(),
        a_size: inst.a_set.len(),
        gamma_base,
        gamma_union,
        a_in_degree_zero,
        holds,
    })
}

/// Random instance: an r-round sequence of density-`density` digraphs
/// on n nodes, a base of n-t survivors, and up to `petals` swaps. Every
/// draw comes from the caller's RNG, so a fixed seed fixes the battery.
pub fn random_petal_instance(
    rng: &mut impl Rng,
    n: usize,
    t: usize,
    r: usize,
    petals: usize,
    density: f64,
) -> Result<PetalInstance> {
    if t >= n {
        return Err(usage(format!("t={t} must leave a survivor among {n}")));
    }
    if r == 0 {
        return Err(usage("at least one round".to_string()));
    }
    let mut rounds = Vec::with_capacity(r);
    for _ in 0..r {
        let mut g = DirectedGraph::new(n)?;
        for u in 1..=n {
            for v in 1..=n {
                if u != v && rng.gen_bool(density) {
                    g.add_edge(ProcessId(u), ProcessId(v));
                }
            }
        }
        rounds.push(g);
    }
    let mut names: Vec<usize> = (1..=n).collect();
    for i in (1..names.len()).rev() {
        names.swap(i, rng.gen_range(0..=i));
    }
    let base: NodeSet = names[..n - t].iter().map(|&p| ProcessId(p)).collect();
    let outside: Vec<ProcessId> = names[n - t..].iter().map(|&p| ProcessId(p)).collect();
    let base_members: Vec<ProcessId> = base.iter().collect();
    let mut swaps = Vec::with_capacity(petals);
    for _ in 0..petals {
        if outside.is_empty() || rng.gen_bool(0.25) {
            swaps.push(None);
        } else {
            let p = outside[rng.gen_range(0..outside.len())];
            let q = base_members[rng.gen_range(0..base_members.len())];
            swaps.push(Some((p, q)));
        }
    }
    petal_instance(GraphSequence::new(rounds)?, base, swaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn seq(graphs: Vec<DirectedGraph>) -> GraphSequence {
        GraphSequence::new(graphs).unwrap()
    }

    #[test]
    fn single_plain_entry_is_the_base_product() {
        let g = DirectedGraph::cycle(5);
        let base = NodeSet::full(5).minus(NodeSet::singleton(ProcessId(5)));
        let inst = petal_instance(seq(vec![g]), base, vec![]).unwrap();
        let rep = check_sandwich(&inst).unwrap();
        assert_eq!(rep.a_size, 0);
        assert_eq!(rep.gamma_base, rep.gamma_union);
        assert!(rep.holds);
    }

    #[test]
    fn one_swap_adds_at_most_one_to_the_domination_number() {
        // path 1-2-3-4, base {1,2,3}, petal swaps 4 in for 1
        let g = DirectedGraph::path(4);
        let base: NodeSet = [1, 2, 3].iter().map(|&p| ProcessId(p)).collect();
        let inst = petal_instance(
            seq(vec![g]),
            base,
            vec![Some((ProcessId(4), ProcessId(1)))],
        )
        .unwrap();
        let rep = check_sandwich(&inst).unwrap();
        assert_eq!(rep.a_size, 1);
        assert!(rep.a_in_degree_zero);
        assert!(rep.holds);
        assert!(rep.gamma_union <= rep.gamma_base + 1);
    }

    #[test]
    fn no_swap_petals_change_nothing() {
        let g = DirectedGraph::cycle(6);
        let base: NodeSet = (1..=5).map(ProcessId).collect();
        let plain = petal_instance(seq(vec![g.clone()]), base, vec![]).unwrap();
        let padded = petal_instance(seq(vec![g]), base, vec![None, None]).unwrap();
        let a = check_sandwich(&plain).unwrap();
        let b = check_sandwich(&padded).unwrap();
        assert_eq!(a.gamma_union, b.gamma_union);
        assert_eq!(b.a_size, 0);
    }

    #[test]
    fn swapped_in_processes_are_silent_in_the_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..25 {
            let inst = random_petal_instance(&mut rng, 5, 2, 2, 3, 0.5).unwrap();
            let rep = check_sandwich(&inst).unwrap();
            assert!(rep.a_in_degree_zero, "swapped-in process grew an in-edge");
            assert!(rep.holds, "inequality failed: {rep:?}");
        }
    }

    #[test]
    fn seeded_battery_upholds_the_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut nontrivial = 0;
        for i in 0..100 {
            let n = 3 + (i % 3); // 3, 4, 5
            let t = 1 + (i % 2).min(n - 2);
            let petals = 1 + i % 3;
            let inst = random_petal_instance(&mut rng, n, t, 1 + i % 2, petals, 0.5).unwrap();
            let rep = check_sandwich(&inst).unwrap();
            assert!(rep.holds, "instance {i}: {rep:?}");
            if rep.a_size > 0 {
                nontrivial += 1;
            }
        }
        assert!(nontrivial >= 30, "battery too tame: {nontrivial} swaps in 100");
    }
}
