//! Shelling-order verification and exhaustive shellability search.
//!
//! A shelling order glues facets so that each new facet meets the
//! already-built part in a pure (d−1)-dimensional boundary. Two
//! equivalent characterizations exist: the prefix-union form (the
//! intersection with the built part is a union of (d−1)-faces) and
//! the pairwise form (for every a < b some earlier c covers the
//! intersection and differs from b in one vertex). The verifier runs
//! both and treats disagreement as an internal error, since it would
//! mean one of the two checkers is buggy.

use serde::Serialize;
use std::collections::HashSet;

use crate::error::{invariant, usage, Result};
use crate::par;

use super::{Complex, Simplex};

pub const DEFAULT_EXHAUSTIVE_CAP: usize = 10;

/// Offending pair in the pairwise characterization: no earlier facet
/// covers `order[a] ∩ order[b]` while differing from `order[b]` in
/// exactly one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShellingViolation {
    pub a: usize,
    pub b: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ShellingReport {
    pub ok: bool,
    pub witness: Option<ShellingViolation>,
}

fn is_permutation_of_facets(k: &Complex, order: &[Simplex]) -> bool {
    let mut sorted: Vec<&Simplex> = order.iter().collect();
    sorted.sort();
    sorted.dedup();
    sorted.len() == order.len()
        && sorted.len() == k.facets().len()
        && sorted.iter().zip(k.facets()) .all(|(a, b)| *a == b)
}

/// Pairwise condition for position b; returns the smallest failing a.
fn pairwise_violation_at(order: &[Simplex], b: usize) -> Option<usize> {
    (0..b).find(|&a| {
        let ab = order[a].intersect(&order[b]);
        !(0..b).any(|c| {
            order[b].minus(&order[c]).len() == 1 && ab.is_face_of(&order[c].intersect(&order[b]))
        })
    })
}

/// Prefix-union condition for position b: the intersections with the
/// prefix must all sit inside (d−1)-faces of b that are themselves
/// realized as intersections.
fn prefix_union_holds_at(order: &[Simplex], b: usize, d: isize) -> bool {
    if b == 0 || d == 0 {
        return true;
    }
    let parts: Vec<Simplex> = (0..b)
        .map(|i| order[i].intersect(&order[b]))
        .filter(|s| !s.is_empty())
        .collect();
    let walls: Vec<&Simplex> = parts.iter().filter(|s| s.dim() == d - 1).collect();
    !walls.is_empty() && parts.iter().all(|p| walls.iter().any(|w| p.is_face_of(w)))
}

/// Checks a proposed facet order against both characterizations.
pub fn verify_shelling_order(k: &Complex, order: &[Simplex]) -> Result<ShellingReport> {
    if !k.is_pure() {
        return Err(invariant("not pure".to_string()));
    }
    if !is_permutation_of_facets(k, order) {
        return Err(usage("order is not a permutation of the facets".to_string()));
    }
    let d = k.dim().unwrap_or(0);
    let pairwise = par::par_map_range(order.len(), |b| {
        pairwise_violation_at(order, b).map(|a| ShellingViolation { a, b })
    })
    .into_iter()
    .flatten()
    .next();
    let prefix_ok = par::par_map_range(order.len(), |b| prefix_union_holds_at(order, b, d))
        .into_iter()
        .all(|ok| ok);
    if pairwise.is_none() != prefix_ok {
        return Err(invariant(
            "shelling characterizations disagree; checker bug".to_string(),
        ));
    }
    Ok(ShellingReport { ok: pairwise.is_none(), witness: pairwise })
}

/// Incremental prefix-union condition: may facet j follow the set S?
fn may_extend(facets: &[Simplex], d: isize, s: &[usize], j: usize) -> bool {
    if s.is_empty() || d == 0 {
        return true;
    }
    let parts: Vec<Simplex> = s
        .iter()
        .map(|&i| facets[i].intersect(&facets[j]))
        .filter(|x| !x.is_empty())
        .collect();
    let walls: Vec<&Simplex> = parts.iter().filter(|x| x.dim() == d - 1).collect();
    !walls.is_empty() && parts.iter().all(|p| walls.iter().any(|w| p.is_face_of(w)))
}

/// Searches every facet order for a shelling, memoizing failed prefix
/// sets (the extension test depends only on the set, not its order).
/// Returns None when the complex is impure or has no shelling order.
pub fn is_shellable_exhaustive(k: &Complex, cap: Option<usize>) -> Result<Option<Vec<Simplex>>> {
    let cap = cap.unwrap_or(DEFAULT_EXHAUSTIVE_CAP);
    let n = k.facets().len();
    if n > cap {
        return Err(usage(format!("exhaustive shellability capped at {cap} facets, got {n}")));
    }
    if k.is_void() || !k.is_pure() {
        return Ok(None);
    }
    let d = k.dim().expect("non-void");
    let facets = k.facets();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut failed: HashSet<u64> = HashSet::new();

    fn dfs(
        facets: &[Simplex],
        d: isize,
        order: &mut Vec<usize>,
        used: u64,
        failed: &mut HashSet<u64>,
    ) -> bool {
        if order.len() == facets.len() {
            return true;
        }
        if failed.contains(&used) {
            return false;
        }
        for j in 0..facets.len() {
            if used & (1 << j) != 0 {
                continue;
            }
            if may_extend(facets, d, order, j) {
                order.push(j);
                if dfs(facets, d, order, used | (1 << j), failed) {
                    return true;
                }
                order.pop();
            }
        }
        failed.insert(used);
        false
    }

    if dfs(facets, d, &mut order, 0, &mut failed) {
        Ok(Some(order.into_iter().map(|i| facets[i].clone()).collect()))
    } else {
        Ok(None)
    }
}
