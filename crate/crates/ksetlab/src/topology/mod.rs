//! Chromatic simplicial complexes at desk scale.
//!
//! Vertices pair a process color with an interned label; simplexes
//! carry distinct colors; complexes store their maximal facets and
//! answer face queries by containment. Faces are non-empty; the empty
//! simplex exists as a value only where the face order needs it.

mod betti;
mod order;
mod shelling;

pub use betti::betti_mod2;
pub use order::{
    combined_order_cmp, face_order_cmp, kuhn_order_cmp, pseudosphere_order_cmp, signature,
    SigEntry, Signature,
};
pub use shelling::{
    is_shellable_exhaustive, verify_shelling_order, ShellingReport, ShellingViolation,
    DEFAULT_EXHAUSTIVE_CAP,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::error::{budget, usage, Result};
use crate::graph::{NodeSet, ProcessId};
use crate::label::Label;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub color: ProcessId,
    pub label: Label,
}

impl Vertex {
    #[must_use]
    pub fn new(color: ProcessId, label: Label) -> Vertex {
        Vertex { color, label }
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.color, self.label)
    }
}

/// Set of vertices with pairwise distinct colors, sorted by color.
/// May be empty; `dim` of the empty simplex is −1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Simplex {
    verts: Vec<Vertex>,
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, "}}")
    }
}

impl Simplex {
    #[must_use]
    pub fn empty() -> Simplex {
        Simplex { verts: Vec::new() }
    }

    pub fn new(mut verts: Vec<Vertex>) -> Result<Simplex> {
        verts.sort();
        verts.dedup();
        if verts.windows(2).any(|w| w[0].color == w[1].color) {
            return Err(usage("simplex with repeated color".to_string()));
        }
        Ok(Simplex { verts })
    }

    #[must_use]
    pub fn vertices(&self) -> &[Vertex] {
        &self.verts
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    /// Dimension; −1 for the empty simplex.
    #[must_use]
    pub fn dim(&self) -> isize {
        self.verts.len() as isize - 1
    }

    #[must_use]
    pub fn names(&self) -> NodeSet {
        self.verts.iter().map(|v| v.color).collect()
    }

    #[must_use]
    pub fn contains(&self, v: &Vertex) -> bool {
        self.vertex_of(v.color).is_some_and(|w| w == v)
    }

    #[must_use]
    pub fn vertex_of(&self, color: ProcessId) -> Option<&Vertex> {
        self.verts
            .binary_search_by(|w| w.color.cmp(&color))
            .ok()
            .map(|i| &self.verts[i])
    }

    #[must_use]
    pub fn label_of(&self, color: ProcessId) -> Option<&Label> {
        self.vertex_of(color).map(|v| &v.label)
    }

    #[must_use]
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.verts.iter().all(|v| other.contains(v))
    }

    #[must_use]
    pub fn intersect(&self, other: &Simplex) -> Simplex {
        Simplex {
            verts: self.verts.iter().filter(|v| other.contains(v)).cloned().collect(),
        }
    }

    /// Union; errors when the two assign different labels to one color.
    pub fn union(&self, other: &Simplex) -> Result<Simplex> {
        let mut verts = self.verts.clone();
        for v in &other.verts {
            match self.vertex_of(v.color) {
                None => verts.push(v.clone()),
                Some(w) if w == v => {}
                Some(_) => {
                    return Err(usage(format!(
                        "union joins conflicting labels for process {}",
                        v.color
                    )))
                }
            }
        }
        verts.sort();
        Ok(Simplex { verts })
    }

    #[must_use]
    pub fn minus(&self, other: &Simplex) -> Simplex {
        Simplex {
            verts: self.verts.iter().filter(|v| !other.contains(v)).cloned().collect(),
        }
    }

    /// Vertices whose colors lie in `keep`.
    #[must_use]
    pub fn restrict_colors(&self, keep: NodeSet) -> Simplex {
        Simplex {
            verts: self.verts.iter().filter(|v| keep.contains(v.color)).cloned().collect(),
        }
    }

    /// All non-empty subsets.
    #[must_use]
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.verts.len();
        let mut out = Vec::with_capacity((1usize << n).saturating_sub(1));
        for mask in 1u32..(1u32 << n) {
            let verts = self
                .verts
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| v.clone())
                .collect();
            out.push(Simplex { verts });
        }
        out.sort();
        out
    }

    /// All faces with exactly `d + 1` vertices.
    #[must_use]
    pub fn faces_of_dim(&self, d: isize) -> Vec<Simplex> {
        if d < 0 || d > self.dim() {
            return Vec::new();
        }
        self.faces().into_iter().filter(|f| f.dim() == d).collect()
    }
}

/// Complex as its set of maximal facets; faces are implicit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Complex {
    facets: Vec<Simplex>,
}

impl Complex {
    #[must_use]
    pub fn empty() -> Complex {
        Complex { facets: Vec::new() }
    }

    /// Keeps the maximal simplexes of the input; empty ones are dropped.
    #[must_use]
    pub fn from_facets(simplexes: Vec<Simplex>) -> Complex {
        let mut uniq: Vec<Simplex> = simplexes.into_iter().filter(|s| !s.is_empty()).collect();
        uniq.sort();
        uniq.dedup();
        let facets: Vec<Simplex> = uniq
            .iter()
            .filter(|s| !uniq.iter().any(|t| *s != t && s.is_face_of(t)))
            .cloned()
            .collect();
        Complex { facets }
    }

    #[must_use]
    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    #[must_use]
    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// Max facet dimension; None for the complex with no facets.
    #[must_use]
    pub fn dim(&self) -> Option<isize> {
        self.facets.iter().map(Simplex::dim).max()
    }

    #[must_use]
    pub fn is_pure(&self) -> bool {
        match self.dim() {
            None => true,
            Some(d) => self.facets.iter().all(|f| f.dim() == d),
        }
    }

    /// Face membership: contained in some facet. The empty simplex is
    /// a face of every non-void complex.
    #[must_use]
    pub fn contains(&self, s: &Simplex) -> bool {
        if self.facets.is_empty() {
            return false;
        }
        self.facets.iter().any(|f| s.is_face_of(f))
    }

    /// All distinct non-empty faces, sorted.
    #[must_use]
    pub fn all_faces(&self) -> Vec<Simplex> {
        let mut set = BTreeSet::new();
        for f in &self.facets {
            for face in f.faces() {
                set.insert(face);
            }
        }
        set.into_iter().collect()
    }

    #[must_use]
    pub fn faces_of_dim(&self, d: isize) -> Vec<Simplex> {
        let mut set = BTreeSet::new();
        for f in &self.facets {
            for face in f.faces_of_dim(d) {
                set.insert(face);
            }
        }
        set.into_iter().collect()
    }

    #[must_use]
    pub fn vertex_set(&self) -> Vec<Vertex> {
        let mut set = BTreeSet::new();
        for f in &self.facets {
            for v in f.vertices() {
                set.insert(v.clone());
            }
        }
        set.into_iter().collect()
    }

    /// codim of a face in a pure complex.
    pub fn codim(&self, s: &Simplex) -> Result<usize> {
        if !self.is_pure() {
            return Err(usage("codim needs a pure complex".to_string()));
        }
        let Some(d) = self.dim() else {
            return Err(usage("codim on a complex with no facets".to_string()));
        };
        if !self.contains(s) {
            return Err(usage("codim of a non-face".to_string()));
        }
        Ok((d - s.dim()) as usize)
    }

    #[must_use]
    pub fn union(&self, other: &Complex) -> Complex {
        let mut all = self.facets.clone();
        all.extend(other.facets.iter().cloned());
        Complex::from_facets(all)
    }

    /// Common faces of the two complexes; facets are the maximal
    /// pairwise facet intersections.
    #[must_use]
    pub fn intersection(&self, other: &Complex) -> Complex {
        let mut parts = Vec::new();
        for a in &self.facets {
            for b in &other.facets {
                let i = a.intersect(b);
                if !i.is_empty() {
                    parts.push(i);
                }
            }
        }
        Complex::from_facets(parts)
    }

    #[must_use]
    pub fn is_subcomplex_of(&self, other: &Complex) -> bool {
        self.facets.iter().all(|f| other.contains(f))
    }
}

/// All simplexes with at most `d + 1` vertices: facets are the d-faces
/// of larger facets, while smaller facets stay as they are.
pub fn skeleton(k: &Complex, d: isize) -> Result<Complex> {
    if d < 0 {
        return Err(usage("skeleton dimension must be non-negative".to_string()));
    }
    if k.is_void() {
        return Err(usage("skeleton of a complex with no facets".to_string()));
    }
    let mut parts = Vec::new();
    for f in k.facets() {
        if f.dim() <= d {
            parts.push(f.clone());
        } else {
            parts.extend(f.faces_of_dim(d));
        }
    }
    Ok(Complex::from_facets(parts))
}

/// Facets are all full choice functions over the per-process value
/// sets; faces are the partial ones.
pub fn pseudosphere(assignments: &[(ProcessId, Vec<Label>)]) -> Result<Complex> {
    let mut seen = NodeSet::empty();
    let mut count = 1usize;
    for (p, values) in assignments {
        if seen.contains(*p) {
            return Err(usage(format!("pseudosphere repeats process {p}")));
        }
        seen.insert(*p);
        if values.is_empty() {
            return Err(usage(format!("pseudosphere with empty value set for {p}")));
        }
        count = count.saturating_mul(values.len());
    }
    if count > 1_000_000 {
        return Err(budget(format!("pseudosphere would have {count} facets")));
    }
    let mut facets = Vec::with_capacity(count);
    let mut choice = vec![0usize; assignments.len()];
    loop {
        let mut verts: Vec<Vertex> = assignments
            .iter()
            .zip(&choice)
            .map(|((p, values), &c)| Vertex::new(*p, values[c].clone()))
            .collect();
        verts.sort();
        facets.push(Simplex { verts });
        let mut i = assignments.len();
        loop {
            if i == 0 {
                return Ok(Complex::from_facets(facets));
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < assignments[i].1.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Pseudosphere where every process in `names` may hold any value of
/// `values`.
pub fn pseudosphere_uniform(names: NodeSet, values: &[Label]) -> Result<Complex> {
    let assignments: Vec<(ProcessId, Vec<Label>)> =
        names.iter().map(|p| (p, values.to_vec())).collect();
    pseudosphere(&assignments)
}

/// Monotone threshold tuple indexing one facet of the staircase input
/// complex: n ≥ x_1 ≥ … ≥ x_k ≥ 0.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KuhnIndex(pub Vec<usize>);

/// Process i's input under tuple x: the number of thresholds at or
/// above i. Nodes 1..x_k get k, nodes x_k+1..x_{k−1} get k−1, and so
/// on down to input 0 above x_1.
fn kuhn_input(x: &[usize], i: usize) -> usize {
    x.iter().filter(|&&xj| xj >= i).count()
}

fn kuhn_tuples(n: usize, k: usize) -> Vec<KuhnIndex> {
    // Ascending inner loops emit the tuples already in tuple order.
    let mut out = Vec::new();
    let mut cur = vec![0usize; k];
    fn rec(k: usize, depth: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<KuhnIndex>) {
        if depth == k {
            out.push(KuhnIndex(cur.clone()));
            return;
        }
        for v in 0..=max {
            cur[depth] = v;
            rec(k, depth + 1, v, cur, out);
        }
    }
    rec(k, 0, n, &mut cur, &mut out);
    out
}

/// The staircase facets in tuple order, each with its index.
pub fn kuhn_facets_in_order(n: usize, k: usize) -> Result<Vec<(KuhnIndex, Simplex)>> {
    if n == 0 || k == 0 {
        return Err(usage("staircase complex needs n >= 1 and k >= 1".to_string()));
    }
    let mut out = Vec::new();
    for x in kuhn_tuples(n, k) {
        let verts = (1..=n)
            .map(|i| Vertex::new(ProcessId(i), Label::int(kuhn_input(&x.0, i) as i64)))
            .collect();
        out.push((x, Simplex::new(verts)?));
    }
    Ok(out)
}

pub fn kuhn_input_complex(n: usize, k: usize) -> Result<Complex> {
    Ok(Complex::from_facets(
        kuhn_facets_in_order(n, k)?.into_iter().map(|(_, s)| s).collect(),
    ))
}

/// On-disk complex form: {"facets": [[{"p", "label"}, ...], ...]}.
pub fn complex_to_json(k: &Complex) -> serde_json::Value {
    let facets: Vec<Vec<serde_json::Value>> = k
        .facets()
        .iter()
        .map(|f| {
            f.vertices()
                .iter()
                .map(|v| {
                    serde_json::json!({"p": v.color.0, "label": v.label.canon()})
                })
                .collect()
        })
        .collect();
    serde_json::json!({ "facets": facets })
}

pub fn complex_from_json(value: &serde_json::Value) -> Result<Complex> {
    let facets = value
        .get("facets")
        .and_then(|f| f.as_array())
        .ok_or_else(|| usage("complex JSON needs a \"facets\" array".to_string()))?;
    let mut out = Vec::new();
    for facet in facets {
        let verts = facet
            .as_array()
            .ok_or_else(|| usage("facet must be an array of vertices".to_string()))?;
        let mut vs = Vec::new();
        for v in verts {
            let p = v
                .get("p")
                .and_then(|p| p.as_u64())
                .ok_or_else(|| usage("vertex needs an integer \"p\"".to_string()))?;
            if p < 1 {
                return Err(usage("process ids start at 1".to_string()));
            }
            let label = v
                .get("label")
                .and_then(|l| l.as_str())
                .ok_or_else(|| usage("vertex needs a string \"label\"".to_string()))?;
            vs.push(Vertex::new(ProcessId(p as usize), crate::label::parse_label(label)?));
        }
        out.push(Simplex::new(vs)?);
    }
    Ok(Complex::from_facets(out))
}
