//! The comparators the shelling proofs run on.
//!
//! Face order: a face of an ambient vertex set gets a presence string
//! over the universe (present = BOT, absent = TOP) compared
//! lexicographically with BOT < TOP. Fuller faces therefore come
//! first: the full simplex is minimal and the empty face maximal.
//! (Some prose descriptions state the opposite; the shelling
//! construction only works with this orientation, so the formal
//! definition wins.)
//!
//! Pseudosphere order: facets on one color set compare by their labels
//! along ascending process id.
//!
//! Combined order: face order on signatures, ties broken by
//! pseudosphere order. This is the order under which skeletons of
//! pseudospheres shell.
//!
//! Tuple order: plain lexicographic on threshold tuples.

use std::cmp::Ordering;

use crate::error::{usage, Result};
use crate::graph::NodeSet;

use super::{KuhnIndex, Simplex};

/// BOT marks a present color, TOP an absent one; BOT < TOP.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum SigEntry {
    Bot,
    Top,
}

/// Presence string of a face over an ordered universe of colors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Signature(pub Vec<SigEntry>);

#[must_use]
pub fn signature(s: &Simplex, universe: NodeSet) -> Signature {
    Signature(
        universe
            .iter()
            .map(|p| if s.names().contains(p) { SigEntry::Bot } else { SigEntry::Top })
            .collect(),
    )
}

/// Signature-lexicographic order of two faces over a common universe.
#[must_use]
pub fn face_order_cmp(a: &Simplex, b: &Simplex, universe: NodeSet) -> Ordering {
    signature(a, universe).cmp(&signature(b, universe))
}

/// Label-lexicographic order of two facets on the same color set.
pub fn pseudosphere_order_cmp(a: &Simplex, b: &Simplex) -> Result<Ordering> {
    if a.names() != b.names() {
        return Err(usage("pseudosphere order compares facets on one color set".to_string()));
    }
    for (va, vb) in a.vertices().iter().zip(b.vertices()) {
        let c = va.label.cmp(&vb.label);
        if c != Ordering::Equal {
            return Ok(c);
        }
    }
    Ok(Ordering::Equal)
}

/// Face order first; equal signatures (same color set) fall through to
/// the pseudosphere order.
#[must_use]
pub fn combined_order_cmp(a: &Simplex, b: &Simplex, universe: NodeSet) -> Ordering {
    match face_order_cmp(a, b, universe) {
        Ordering::Equal => {
            pseudosphere_order_cmp(a, b).expect("equal signatures share a color set")
        }
        c => c,
    }
}

/// Lexicographic order on threshold tuples of equal length.
#[must_use]
pub fn kuhn_order_cmp(a: &KuhnIndex, b: &KuhnIndex) -> Ordering {
    a.0.cmp(&b.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ProcessId;
    use crate::label::Label;
    use crate::topology::Vertex;

    fn v(p: usize, x: i64) -> Vertex {
        Vertex::new(ProcessId(p), Label::int(x))
    }

    fn s(verts: Vec<Vertex>) -> Simplex {
        Simplex::new(verts).unwrap()
    }

    #[test]
    fn fuller_faces_come_first() {
        let u = NodeSet::full(3);
        let full = s(vec![v(1, 1), v(2, 1), v(3, 1)]);
        let missing_first = s(vec![v(2, 1), v(3, 1)]);
        let missing_last = s(vec![v(1, 1), v(2, 1)]);
        assert_eq!(face_order_cmp(&full, &missing_first, u), Ordering::Less);
        assert_eq!(face_order_cmp(&full, &missing_last, u), Ordering::Less);
        assert_eq!(face_order_cmp(&missing_last, &missing_first, u), Ordering::Less);
        assert_eq!(face_order_cmp(&full, &full, u), Ordering::Equal);
        // The empty face is all-TOP, hence maximal.
        assert_eq!(face_order_cmp(&Simplex::empty(), &missing_first, u), Ordering::Greater);
    }

    #[test]
    fn label_order_breaks_signature_ties() {
        let u = NodeSet::full(2);
        let a = s(vec![v(1, 1), v(2, 1)]);
        let b = s(vec![v(1, 1), v(2, 2)]);
        let c = s(vec![v(1, 2), v(2, 1)]);
        let d = s(vec![v(1, 1), v(2, 9)]);
        assert_eq!(pseudosphere_order_cmp(&a, &b).unwrap(), Ordering::Less);
        assert_eq!(pseudosphere_order_cmp(&c, &d).unwrap(), Ordering::Greater);
        assert_eq!(combined_order_cmp(&a, &b, u), Ordering::Less);
        assert!(pseudosphere_order_cmp(&a, &s(vec![v(1, 1)])).is_err());
        // Signature dominates: a 2-vertex facet precedes any 1-vertex face.
        assert_eq!(combined_order_cmp(&b, &s(vec![v(1, 0)]), u), Ordering::Less);
    }

    #[test]
    fn tuple_order_is_lexicographic() {
        let a = KuhnIndex(vec![0, 0]);
        let b = KuhnIndex(vec![1, 0]);
        let c = KuhnIndex(vec![1, 1]);
        assert_eq!(kuhn_order_cmp(&a, &b), Ordering::Less);
        assert_eq!(kuhn_order_cmp(&b, &c), Ordering::Less);
        assert_eq!(kuhn_order_cmp(&c, &c), Ordering::Equal);
        assert_eq!(kuhn_order_cmp(&KuhnIndex(vec![2, 0]), &KuhnIndex(vec![2, 1])), Ordering::Less);
    }
}
