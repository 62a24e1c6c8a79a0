//! Round operators on protocol complexes and the cross-round overhead map.
//!
//! A crashing round sends each face of the current complex to the
//! subcomplex of end-of-round states reachable while the crash quota
//! for that round is spent. `f_complete` is the clique form, `h_general`
//! the naive per-view generalization (kept because it demonstrably
//! loses strictness on sparse directed graphs), and `f_general` the
//! repaired operator that adds covering pseudospheres for the dangerous
//! faces. `g_map` covers the crash-free tail: it runs the remaining
//! rounds and discards every vertex whose history touches a witness of
//! an unclean crash in the source facet.
//!
//! All operators work face-by-face, so the property checkers at the
//! bottom can exhaustively audit monotonicity, strictness, codimension
//! and non-emptiness on desk-scale instances and report the first
//! counterexample in canonical face order.

use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{budget, invariant, usage, Result};
use crate::exec::{enumeration_budget, run_full_information, ExecutionSpec, FailurePattern, InputAssignment};
use crate::graph::{subsets_exact, DirectedGraph, Network, NodeSet, ProcessId};
use crate::label::{Label, LabelNode};
use crate::par;
use crate::topology::{
    combined_order_cmp, pseudosphere, skeleton, verify_shelling_order, Complex, Simplex, Vertex,
};

/// Packs a face into one label: the (process, state) entries become the
/// map entries, so an image vertex carries the face it decided on.
pub fn simplex_label(rho: &Simplex) -> Result<Label> {
    if rho.is_empty() {
        return Err(usage("cannot encode the empty face as a label".to_string()));
    }
    Label::pairs(rho.vertices().iter().map(|v| (v.color, v.label.clone())).collect())
}

/// Inverse of [`simplex_label`]: unpacks a map label back into the face
/// it encodes.
pub fn label_simplex(l: &Label) -> Result<Simplex> {
    match l.node() {
        LabelNode::Int(_) => Err(usage("integer label does not encode a face".to_string())),
        LabelNode::Pairs(entries) => {
            Simplex::new(entries.iter().map(|(p, sub)| Vertex::new(*p, sub.clone())).collect())
        }
    }
}

/// All faces between `lo` and `hi` inclusive; `lo` must be a face of
/// `hi`.
fn interval_faces(lo: &Simplex, hi: &Simplex) -> Result<Vec<Simplex>> {
    if !lo.is_face_of(hi) {
        return Err(usage("interval bounds are not nested".to_string()));
    }
    let extra: Vec<Vertex> = hi.minus(lo).vertices().to_vec();
    let mut out = Vec::with_capacity(1 << extra.len());
    for mask in 0u32..(1u32 << extra.len()) {
        let mut verts: Vec<Vertex> = lo.vertices().to_vec();
        for (i, v) in extra.iter().enumerate() {
            if mask & (1 << i) != 0 {
                verts.push(v.clone());
            }
        }
        out.push(Simplex::new(verts)?);
    }
    out.sort();
    Ok(out)
}

/// Which processes may witness that a face extension is unreachable.
///
/// The danger test asks for a process q that hears from no member of
/// the extension θ. `Sigma` draws q from the common face, `Tau` from
/// the extended face τ = σ ∪ θ, and `Xi` from the whole carrier face.
/// Since every process hears itself, a q inside θ can never qualify, so
/// `Sigma` and `Tau` coincide; `Xi` is genuinely wider. Checkers stamp
/// the active scope into their reports as an assumption flag.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum QScope {
    #[default]
    Sigma,
    Tau,
    Xi,
}

impl QScope {
    #[must_use]
    pub fn flag(self) -> &'static str {
        match self {
            QScope::Sigma => "qscope=sigma",
            QScope::Tau => "qscope=tau",
            QScope::Xi => "qscope=xi",
        }
    }
}

/// One crashing round: the operator index, model parameters, the round
/// graph, and the restricted domain the operator may be applied to,
/// together with a shelling order of that domain's facets.
#[derive(Clone, Debug)]
pub struct RoundContext {
    i: usize,
    n: usize,
    k: usize,
    t: usize,
    g: DirectedGraph,
    k_bar: Complex,
    shelling: Vec<Simplex>,
    qscope: QScope,
}

impl RoundContext {
    pub fn new(
        i: usize,
        n: usize,
        k: usize,
        t: usize,
        g: DirectedGraph,
        k_bar: Complex,
        shelling: Vec<Simplex>,
    ) -> Result<RoundContext> {
        if n == 0 || k == 0 {
            return Err(usage("round context needs n >= 1 and k >= 1".to_string()));
        }
        if g.n() != n {
            return Err(usage(format!("round graph has {} nodes, expected {n}", g.n())));
        }
        if k * (i + 1) >= n {
            return Err(usage(format!(
                "round {i} with quota {k} would leave no process alive among {n}"
            )));
        }
        let expected = n as isize - 1 - (k * i) as isize;
        if k_bar.is_void() || !k_bar.is_pure() || k_bar.dim() != Some(expected) {
            return Err(usage(format!(
                "domain of round {i} must be pure of dimension {expected}"
            )));
        }
        let universe = NodeSet::full(n);
        if !k_bar.facets().iter().all(|f| f.names().is_subset(universe)) {
            return Err(usage(format!("domain mentions processes outside 1..={n}")));
        }
        let mut sorted: Vec<&Simplex> = shelling.iter().collect();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != k_bar.facets().len()
            || !sorted.iter().zip(k_bar.facets()).all(|(a, b)| *a == b)
        {
            return Err(usage("shelling order is not a permutation of the domain facets".to_string()));
        }
        Ok(RoundContext { i, n, k, t, g, k_bar, shelling, qscope: QScope::Sigma })
    }

    #[must_use]
    pub fn with_qscope(mut self, q: QScope) -> RoundContext {
        self.qscope = q;
        self
    }

    #[must_use]
    pub fn i(&self) -> usize {
        self.i
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }

    #[must_use]
    pub fn t(&self) -> usize {
        self.t
    }

    #[must_use]
    pub fn graph(&self) -> &DirectedGraph {
        &self.g
    }

    #[must_use]
    pub fn domain(&self) -> &Complex {
        &self.k_bar
    }

    #[must_use]
    pub fn shelling(&self) -> &[Simplex] {
        &self.shelling
    }

    #[must_use]
    pub fn qscope(&self) -> QScope {
        self.qscope
    }

    /// Dimension of every image facet: one crash quota below the domain.
    #[must_use]
    pub fn target_dim(&self) -> isize {
        self.n as isize - 1 - (self.k * (self.i + 1)) as isize
    }
}

/// The face of `rho` that process `q` can hear: vertices whose colors
/// are in-neighbors of `q`. Always contains q's own vertex.
pub fn view_of(rho: &Simplex, q: ProcessId, g: &DirectedGraph) -> Result<Simplex> {
    if !rho.names().contains(q) {
        return Err(usage(format!("process {q} has no vertex in the face")));
    }
    Ok(rho.restrict_colors(g.in_set(q)))
}

fn is_complete(g: &DirectedGraph) -> bool {
    let all = g.nodes();
    (1..=g.n()).all(|p| g.out_set(ProcessId(p)) == all)
}

/// Clique-round operator: the union, over the faces τ of σ at the
/// target dimension, of the pseudospheres where each survivor in τ
/// independently adopts a face between τ and σ. Empty when σ has fewer
/// vertices than the target dimension requires.
pub fn f_complete(sigma: &Simplex, ctx: &RoundContext) -> Result<Complex> {
    if !is_complete(ctx.graph()) {
        return Err(usage("clique operator needs the complete round graph".to_string()));
    }
    let d = ctx.target_dim();
    let mut parts: Vec<Simplex> = Vec::new();
    for tau in sigma.faces_of_dim(d) {
        let labels: Vec<Label> =
            interval_faces(&tau, sigma)?.iter().map(simplex_label).collect::<Result<_>>()?;
        let assignments: Vec<(ProcessId, Vec<Label>)> =
            tau.names().iter().map(|p| (p, labels.clone())).collect();
        parts.extend(pseudosphere(&assignments)?.facets().iter().cloned());
    }
    Ok(Complex::from_facets(parts))
}

/// Pseudosphere where each survivor of `tau` adopts a face between its
/// view of `tau` and its view of `upper`.
fn view_interval_psi(tau: &Simplex, upper: &Simplex, g: &DirectedGraph) -> Result<Complex> {
    let mut assignments: Vec<(ProcessId, Vec<Label>)> = Vec::new();
    for p in tau.names().iter() {
        let lo = view_of(tau, p, g)?;
        let hi = view_of(upper, p, g)?;
        let labels: Vec<Label> =
            interval_faces(&lo, &hi)?.iter().map(simplex_label).collect::<Result<_>>()?;
        assignments.push((p, labels));
    }
    pseudosphere(&assignments)
}

/// Per-view round operator: like [`f_complete`] but every survivor only
/// sees its in-neighborhood. Not strict on sparse directed graphs;
/// kept as the baseline the checkers exhibit a counterexample for.
pub fn h_general(sigma: &Simplex, ctx: &RoundContext) -> Result<Complex> {
    let d = ctx.target_dim();
    let mut parts: Vec<Simplex> = Vec::new();
    for tau in sigma.faces_of_dim(d) {
        parts.extend(view_interval_psi(&tau, sigma, ctx.graph())?.facets().iter().cloned());
    }
    Ok(Complex::from_facets(parts))
}

/// A dangerous extension record: the witnesses are the target-dimension
/// faces τ = σ ∪ θ of ξ whose extension θ stays invisible to some
/// process of the active scope.
#[derive(Clone, Debug)]
pub struct DangerousPairRecord {
    pub xi: Simplex,
    pub sigma: Simplex,
    pub witnesses: Vec<Simplex>,
}

impl DangerousPairRecord {
    #[must_use]
    pub fn is_dangerous(&self) -> bool {
        !self.witnesses.is_empty()
    }
}

/// Faces τ = σ ∪ θ of ξ at the target dimension, with θ non-empty,
/// such that some process of the active scope hears from no member of
/// θ in the round graph. Both faces must lie in the round domain.
pub fn dangerous_faces(sigma: &Simplex, xi: &Simplex, ctx: &RoundContext) -> Result<Vec<Simplex>> {
    if !sigma.is_face_of(xi) {
        return Err(usage("dangerous-face test needs nested faces".to_string()));
    }
    if !ctx.domain().contains(xi) {
        return Err(usage("dangerous-face test outside the round domain".to_string()));
    }
    let d = ctx.target_dim();
    let mut out = Vec::new();
    for tau in xi.faces_of_dim(d) {
        if !sigma.is_face_of(&tau) {
            continue;
        }
        let theta = tau.minus(sigma);
        if theta.is_empty() {
            continue;
        }
        let scope = match ctx.qscope() {
            QScope::Sigma => sigma.names(),
            QScope::Tau => tau.names(),
            QScope::Xi => xi.names(),
        };
        let theta_names = theta.names();
        let blind = scope
            .iter()
            .any(|q| theta_names.iter().all(|p| !ctx.graph().in_set(q).contains(p)));
        if blind {
            out.push(tau);
        }
    }
    Ok(out)
}

/// [`dangerous_faces`] packaged with its inputs for reporting.
pub fn dangerous_pair_record(
    sigma: &Simplex,
    xi: &Simplex,
    ctx: &RoundContext,
) -> Result<DangerousPairRecord> {
    Ok(DangerousPairRecord {
        xi: xi.clone(),
        sigma: sigma.clone(),
        witnesses: dangerous_faces(sigma, xi, ctx)?,
    })
}

/// Repaired round operator for arbitrary graphs: the per-view operator
/// plus, for every non-empty subface σ' and every domain facet φ
/// containing it, the covering pseudospheres of the dangerous faces of
/// (σ', φ). Coincides with [`f_complete`] on the complete graph.
pub fn f_general(sigma: &Simplex, ctx: &RoundContext) -> Result<Complex> {
    if !ctx.domain().contains(sigma) {
        return Err(usage("operator applied outside the round domain".to_string()));
    }
    let mut parts: Vec<Simplex> = h_general(sigma, ctx)?.facets().to_vec();
    for sigma_p in sigma.faces() {
        for phi in ctx.domain().facets() {
            if !sigma_p.is_face_of(phi) {
                continue;
            }
            for tau in dangerous_faces(&sigma_p, phi, ctx)? {
                parts.extend(view_interval_psi(&tau, phi, ctx.graph())?.facets().iter().cloned());
            }
        }
    }
    Ok(Complex::from_facets(parts))
}

/// Signature of an image facet, anchored at the mapped face: per
/// process, whether its adopted face is exactly its view of the mapped
/// face (such entries sort first), then the set of processes the
/// adopted face mentions; None when the process is absent.
type FacetSig = Vec<Option<(bool, NodeSet)>>;

/// The view each process has of the mapped face, as a label; None for
/// processes outside it. Image entries equal to their anchor are the
/// minimum of the per-process entry order, which is what lets foreign
/// blocks (pulled in through dangerous faces of other domain facets)
/// glue onto the part of the image they share with the mapped face.
fn sig_anchors(sigma: &Simplex, ctx: &RoundContext) -> Result<Vec<Option<Label>>> {
    (1..=ctx.n())
        .map(|q| {
            let q = ProcessId(q);
            if sigma.names().contains(q) {
                Ok(Some(simplex_label(&view_of(sigma, q, ctx.graph())?)?))
            } else {
                Ok(None)
            }
        })
        .collect()
}

fn facet_signature(phi: &Simplex, n: usize, anchors: &[Option<Label>]) -> FacetSig {
    (1..=n)
        .map(|q| {
            phi.label_of(ProcessId(q)).map(|l| {
                let anchored = anchors[q - 1].as_ref() == Some(l);
                (!anchored, l.names())
            })
        })
        .collect()
}

/// Heard-of order on name sets: fuller sets first, the lowest process
/// in the symmetric difference decides.
fn heard_of_cmp(x: NodeSet, y: NodeSet) -> Ordering {
    if x == y {
        return Ordering::Equal;
    }
    let diff = x.0 ^ y.0;
    let low = diff & diff.wrapping_neg();
    if x.0 & low != 0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Entry order: anchored views first, then fuller heard-of sets,
/// absence last.
fn sig_entry_cmp(a: Option<(bool, NodeSet)>, b: Option<(bool, NodeSet)>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some((af, an)), Some((bf, bn))) => af.cmp(&bf).then_with(|| heard_of_cmp(an, bn)),
    }
}

fn sig_cmp(a: &FacetSig, b: &FacetSig) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match sig_entry_cmp(*x, *y) {
            Ordering::Equal => {}
            c => return c,
        }
    }
    Ordering::Equal
}

/// Facets of `f_general(sigma)` in shelling order: anchored heard-of
/// signatures lexicographically (per process, its view of `sigma`
/// first, then fuller heard-of sets, absence last), signature ties by
/// the earliest domain facet whose image contains the facet (in the
/// domain's shelling order), remaining ties by the structural facet
/// order. The result is what `verify_shelling_order` is expected to
/// accept.
pub fn f_general_shelling_order(sigma: &Simplex, ctx: &RoundContext) -> Result<Vec<Simplex>> {
    let image = f_general(sigma, ctx)?;
    let facets: Vec<Simplex> = image.facets().to_vec();
    let anchors = sig_anchors(sigma, ctx)?;
    let sigs: Vec<FacetSig> =
        facets.iter().map(|f| facet_signature(f, ctx.n(), &anchors)).collect();
    let tied = (0..facets.len()).any(|i| {
        (i + 1..facets.len()).any(|j| sig_cmp(&sigs[i], &sigs[j]) == Ordering::Equal)
    });
    // Attribution is only needed to split signature ties, which occur
    // when facets of different domain facets share all heard-of sets.
    let attr: Vec<usize> = if tied {
        let images: Vec<Complex> = ctx
            .shelling()
            .iter()
            .map(|kap| f_general(kap, ctx))
            .collect::<Result<_>>()?;
        facets
            .iter()
            .map(|phi| {
                images
                    .iter()
                    .position(|img| img.contains(phi))
                    .ok_or_else(|| invariant("image facet missing from every domain facet image".to_string()))
            })
            .collect::<Result<_>>()?
    } else {
        vec![0; facets.len()]
    };
    let mut idx: Vec<usize> = (0..facets.len()).collect();
    idx.sort_by(|&a, &b| {
        sig_cmp(&sigs[a], &sigs[b])
            .then_with(|| attr[a].cmp(&attr[b]))
            .then_with(|| facets[a].cmp(&facets[b]))
    });
    Ok(idx.into_iter().map(|i| facets[i].clone()).collect())
}

/// Facets sorted by the combined order (signature, then labels), the
/// order under which pseudospheres and their skeletons shell.
#[must_use]
pub fn pseudosphere_shelling_order(k: &Complex, n: usize) -> Vec<Simplex> {
    let mut facets: Vec<Simplex> = k.facets().to_vec();
    facets.sort_by(|a, b| combined_order_cmp(a, b, NodeSet::full(n)));
    facets
}

/// The crashing-round pipeline. Grounded at an input complex whose
/// facets shell in the combined order; each `advance` applies the round
/// operator to one chosen facet, carries the image's canonical facet
/// order forward, and steps the round index. After t/k rounds the
/// complex is the source for the crash-free tail.
///
/// The carried order is checked against the shelling verifier on every
/// step, and the outcome is exposed by [`CrashingChain::order_is_shelling`]
/// rather than enforced: on sparse graphs the round image can fail to
/// be shellable in any order (its low homology is non-trivial), and
/// the chain then still grounds the next round at the order's first
/// facet.
#[derive(Clone, Debug)]
pub struct CrashingChain {
    net: Network,
    n: usize,
    t: usize,
    k: usize,
    round: usize,
    complex: Complex,
    shelling: Vec<Simplex>,
    order_shelled: bool,
}

impl CrashingChain {
    pub fn new(net: Network, t: usize, k: usize, input: Complex) -> Result<CrashingChain> {
        let n = net.n();
        if k == 0 || t == 0 {
            return Err(usage("pipeline needs t >= 1 and k >= 1".to_string()));
        }
        if t % k != 0 {
            return Err(usage(format!("crash quota {k} must divide the resilience bound {t}")));
        }
        if t >= n {
            return Err(usage(format!("resilience bound {t} must leave a survivor among {n}")));
        }
        if input.is_void() || !input.is_pure() || input.dim() != Some(n as isize - 1) {
            return Err(usage(format!("input complex must be pure of dimension {}", n - 1)));
        }
        let shelling = pseudosphere_shelling_order(&input, n);
        let report = verify_shelling_order(&input, &shelling)?;
        if !report.ok {
            return Err(usage("input complex does not shell in the combined order".to_string()));
        }
        Ok(CrashingChain { net, n, t, k, round: 0, complex: input, shelling, order_shelled: true })
    }

    #[must_use]
    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    #[must_use]
    pub fn shelling(&self) -> &[Simplex] {
        &self.shelling
    }

    #[must_use]
    pub fn rounds_applied(&self) -> usize {
        self.round
    }

    /// Crashing rounds still to run before the complex becomes the
    /// crash-free source.
    #[must_use]
    pub fn remaining(&self) -> usize {
        self.t / self.k - self.round
    }

    /// Context for the next crashing round.
    pub fn context(&self) -> Result<RoundContext> {
        if self.remaining() == 0 {
            return Err(usage("crash budget exhausted; the chain is complete".to_string()));
        }
        let g = self
            .net
            .round_graph(self.round + 1)
            .ok_or_else(|| usage(format!("graph sequence ends before round {}", self.round + 1)))?
            .clone();
        RoundContext::new(
            self.round,
            self.n,
            self.k,
            self.t,
            g,
            self.complex.clone(),
            self.shelling.clone(),
        )
    }

    /// Whether the carried facet order passed the shelling verifier.
    /// True at the input complex (grounding requires it); after an
    /// advance it records the verdict for the image's order.
    #[must_use]
    pub fn order_is_shelling(&self) -> bool {
        self.order_shelled
    }

    /// Applies the round operator to `kappa` and steps to the image,
    /// carrying its canonical facet order along. The order is verified
    /// as a shelling and the verdict recorded, not enforced.
    pub fn advance(&self, kappa: &Simplex) -> Result<CrashingChain> {
        let ctx = self.context()?;
        let order = f_general_shelling_order(kappa, &ctx)?;
        if order.is_empty() {
            return Err(usage("chosen face is too small to survive the round".to_string()));
        }
        let image = Complex::from_facets(order.clone());
        let report = verify_shelling_order(&image, &order)?;
        Ok(CrashingChain {
            net: self.net.clone(),
            n: self.n,
            t: self.t,
            k: self.k,
            round: self.round + 1,
            complex: image,
            shelling: order,
            order_shelled: report.ok,
        })
    }
}

/// A carrier assignment materialized over every face of a source
/// complex (the empty face included), so property checks touch each
/// image once.
#[derive(Clone, Debug)]
pub struct CarrierImage {
    source: Complex,
    assignments: BTreeMap<Simplex, Complex>,
}

impl CarrierImage {
    /// Evaluates `map` on the empty face and every non-empty face of
    /// `source`, in parallel.
    pub fn build<F>(source: &Complex, map: F) -> Result<CarrierImage>
    where
        F: Fn(&Simplex) -> Result<Complex> + Sync + Send,
    {
        let mut faces = vec![Simplex::empty()];
        faces.extend(source.all_faces());
        let images = par::par_map(&faces, |f| map(f));
        let mut assignments = BTreeMap::new();
        for (face, image) in faces.into_iter().zip(images) {
            assignments.insert(face, image?);
        }
        Ok(CarrierImage { source: source.clone(), assignments })
    }

    #[must_use]
    pub fn source(&self) -> &Complex {
        &self.source
    }

    pub fn image(&self, face: &Simplex) -> Result<&Complex> {
        self.assignments
            .get(face)
            .ok_or_else(|| usage("image requested for a non-face".to_string()))
    }

    /// Union of all assigned images.
    #[must_use]
    pub fn target(&self) -> Complex {
        let mut parts = Vec::new();
        for c in self.assignments.values() {
            parts.extend(c.facets().iter().cloned());
        }
        Complex::from_facets(parts)
    }
}

/// The properties the exhaustive checker can audit.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum CarrierProperty {
    /// Images of nested faces nest.
    Monotone,
    /// The image of a meet is the meet of the images, over face pairs
    /// that share at least one vertex. Disjoint faces are exempt: round
    /// operators may route different faces through a common covering
    /// pseudosphere, so their images can legitimately overlap.
    Strict,
    /// Faces within `0..=k` of the top keep their codimension bound in
    /// the image (which must be non-void and pure there).
    CodimLeq(usize),
    /// Faces within `0..=k` of the top have non-void images.
    NonemptyCodimLeq(usize),
}

impl CarrierProperty {
    #[must_use]
    pub fn name(self) -> String {
        match self {
            CarrierProperty::Monotone => "MONOTONE".to_string(),
            CarrierProperty::Strict => "STRICT".to_string(),
            CarrierProperty::CodimLeq(k) => format!("CODIM_LEQ({k})"),
            CarrierProperty::NonemptyCodimLeq(k) => format!("NONEMPTY_CODIM_LEQ({k})"),
        }
    }
}

/// Outcome of one property audit. `witness_faces` holds the offending
/// faces (and a short note) for a FAIL, in canonical face order.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub status: String,
    pub witness_faces: Vec<String>,
    pub assumption_flags: Vec<String>,
}

impl PropertyReport {
    #[must_use]
    pub fn passed(&self) -> bool {
        self.status == "PASS"
    }

    fn pass(property: String, flags: &[String]) -> PropertyReport {
        PropertyReport {
            property,
            status: "PASS".to_string(),
            witness_faces: Vec::new(),
            assumption_flags: flags.to_vec(),
        }
    }

    fn fail(property: String, witnesses: Vec<String>, flags: &[String]) -> PropertyReport {
        PropertyReport {
            property,
            status: "FAIL".to_string(),
            witness_faces: witnesses,
            assumption_flags: flags.to_vec(),
        }
    }
}

fn face_text(s: &Simplex) -> String {
    format!("{s:?}")
}

/// Exhaustively audits the requested properties of `map` over every
/// face (pair) of `domain`. The first counterexample in canonical face
/// order is reported; `flags` are stamped into every report.
pub fn check_carrier_properties<F>(
    map: F,
    domain: &Complex,
    which: &[CarrierProperty],
    flags: &[String],
) -> Result<Vec<PropertyReport>>
where
    F: Fn(&Simplex) -> Result<Complex> + Sync + Send,
{
    let img = CarrierImage::build(domain, map)?;
    let mut faces = vec![Simplex::empty()];
    faces.extend(domain.all_faces());
    let pair_count = faces.len().saturating_mul(faces.len());
    if pair_count > enumeration_budget() {
        return Err(budget(format!(
            "{pair_count} face pairs exceed the budget of {}",
            enumeration_budget()
        )));
    }
    let target_dim = img.target().dim();
    let mut out = Vec::with_capacity(which.len());
    for &prop in which {
        let name = prop.name();
        let report = match prop {
            CarrierProperty::Monotone => audit_monotone(&img, &faces, name, flags),
            CarrierProperty::Strict => audit_strict(&img, &faces, name, flags),
            CarrierProperty::CodimLeq(kk) => {
                audit_codim(&img, domain, &faces, kk, target_dim, true, name, flags)
            }
            CarrierProperty::NonemptyCodimLeq(kk) => {
                audit_codim(&img, domain, &faces, kk, target_dim, false, name, flags)
            }
        }?;
        out.push(report);
    }
    Ok(out)
}

fn audit_monotone(
    img: &CarrierImage,
    faces: &[Simplex],
    name: String,
    flags: &[String],
) -> Result<PropertyReport> {
    let f = faces.len();
    let hits = par::par_map_range(f * f, |p| {
        let (i, j) = (p / f, p % f);
        if i == j || !faces[i].is_face_of(&faces[j]) {
            return false;
        }
        let small = img.image(&faces[i]).expect("face is in the map");
        let big = img.image(&faces[j]).expect("face is in the map");
        !small.is_subcomplex_of(big)
    });
    match hits.iter().position(|&bad| bad) {
        None => Ok(PropertyReport::pass(name, flags)),
        Some(p) => {
            let (i, j) = (p / f, p % f);
            Ok(PropertyReport::fail(
                name,
                vec![
                    face_text(&faces[i]),
                    face_text(&faces[j]),
                    "image of the smaller face leaves the image of the larger".to_string(),
                ],
                flags,
            ))
        }
    }
}

fn audit_strict(
    img: &CarrierImage,
    faces: &[Simplex],
    name: String,
    flags: &[String],
) -> Result<PropertyReport> {
    let f = faces.len();
    let hits = par::par_map_range(f * f, |p| {
        let (i, j) = (p / f, p % f);
        if i > j {
            return false;
        }
        let meet = faces[i].intersect(&faces[j]);
        if meet.is_empty() {
            return false;
        }
        let lhs = img.image(&meet).expect("meets of faces are faces");
        let rhs = img
            .image(&faces[i])
            .expect("face is in the map")
            .intersection(img.image(&faces[j]).expect("face is in the map"));
        *lhs != rhs
    });
    match hits.iter().position(|&bad| bad) {
        None => Ok(PropertyReport::pass(name, flags)),
        Some(p) => {
            let (i, j) = (p / f, p % f);
            let meet = faces[i].intersect(&faces[j]);
            Ok(PropertyReport::fail(
                name,
                vec![
                    face_text(&faces[i]),
                    face_text(&faces[j]),
                    format!("image of the meet {} differs from the met images", face_text(&meet)),
                ],
                flags,
            ))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn audit_codim(
    img: &CarrierImage,
    domain: &Complex,
    faces: &[Simplex],
    kk: usize,
    target_dim: Option<isize>,
    check_dim: bool,
    name: String,
    flags: &[String],
) -> Result<PropertyReport> {
    for face in faces {
        if face.is_empty() || domain.codim(face)? > kk {
            continue;
        }
        let image = img.image(face)?;
        if image.is_void() {
            return Ok(PropertyReport::fail(
                name,
                vec![face_text(face), "image is void".to_string()],
                flags,
            ));
        }
        if !check_dim {
            continue;
        }
        if !image.is_pure() {
            return Ok(PropertyReport::fail(
                name,
                vec![face_text(face), "image is not pure".to_string()],
                flags,
            ));
        }
        let td = target_dim.ok_or_else(|| invariant("non-void image under a void target".to_string()))?;
        let image_codim = td - image.dim().expect("non-void image has a dimension");
        if image_codim < 0 {
            return Err(invariant("image exceeds the target dimension".to_string()));
        }
        if image_codim as usize > domain.codim(face)? {
            return Ok(PropertyReport::fail(
                name,
                vec![
                    face_text(face),
                    format!("image codimension {image_codim} exceeds the face codimension"),
                ],
                flags,
            ));
        }
    }
    Ok(PropertyReport::pass(name, flags))
}

/// Skeleton source for runs whose crashed processes are dead from the
/// start: all faces of the full value pseudosphere with at most n−t
/// vertices, every process choosing among k+1 values.
pub fn initially_dead_source(n: usize, t: usize, k: usize) -> Result<Complex> {
    if k == 0 {
        return Err(usage("need k >= 1".to_string()));
    }
    if t == 0 || t >= n {
        return Err(usage(format!("dead-process count {t} must be in 1..{n}")));
    }
    let values: Vec<Label> = (0..=k as i64).map(Label::int).collect();
    let psi = crate::topology::pseudosphere_uniform(NodeSet::full(n), &values)?;
    skeleton(&psi, (n - t) as isize - 1)
}

/// The crash-free tail: a source complex whose facets carry the states
/// at the end of round `n_start`, and the graphs of rounds
/// `n_start+1..=m_end` it still has to run through.
#[derive(Clone, Debug)]
pub struct OverheadContext {
    source: Complex,
    net: Network,
    n: usize,
    t: usize,
    k: usize,
    n_start: usize,
    m_end: usize,
}

impl OverheadContext {
    /// `net` is indexed relative to the source: its round 1 is global
    /// round `n_start + 1`.
    pub fn new(
        source: Complex,
        net: Network,
        t: usize,
        k: usize,
        n_start: usize,
        m_end: usize,
    ) -> Result<OverheadContext> {
        let n = net.n();
        if k == 0 {
            return Err(usage("need k >= 1".to_string()));
        }
        if m_end <= n_start {
            return Err(usage("the tail must span at least one round".to_string()));
        }
        if t >= n {
            return Err(usage(format!("resilience bound {t} must leave a survivor among {n}")));
        }
        if source.is_void() {
            return Err(usage("source complex has no facets".to_string()));
        }
        let expected = (n - t) as isize - 1;
        if !source.is_pure() || source.dim() != Some(expected) {
            return Err(usage(format!(
                "source facets must have exactly {} vertices",
                n - t
            )));
        }
        let universe = NodeSet::full(n);
        if !source.facets().iter().all(|f| f.names().is_subset(universe)) {
            return Err(usage(format!("source mentions processes outside 1..={n}")));
        }
        if net.round_graph(m_end - n_start).is_none() {
            return Err(usage(format!(
                "graph sequence ends before round {}",
                m_end - n_start
            )));
        }
        Ok(OverheadContext { source, net, n, t, k, n_start, m_end })
    }

    /// Source where the t crashed processes were never alive: the
    /// skeleton pseudosphere over k+1 values, starting at round 0.
    pub fn initially_dead(net: Network, t: usize, k: usize, m_end: usize) -> Result<OverheadContext> {
        let source = initially_dead_source(net.n(), t, k)?;
        OverheadContext::new(source, net, t, k, 0, m_end)
    }

    #[must_use]
    pub fn source(&self) -> &Complex {
        &self.source
    }

    #[must_use]
    pub fn net(&self) -> &Network {
        &self.net
    }

    #[must_use]
    pub fn n(&self) -> usize {
        self.n
    }

    #[must_use]
    pub fn t(&self) -> usize {
        self.t
    }

    #[must_use]
    pub fn k(&self) -> usize {
        self.k
    }

    #[must_use]
    pub fn n_start(&self) -> usize {
        self.n_start
    }

    #[must_use]
    pub fn m_end(&self) -> usize {
        self.m_end
    }

    /// Rounds the tail runs: m_end − n_start.
    #[must_use]
    pub fn rounds(&self) -> usize {
        self.m_end - self.n_start
    }
}

/// Vertices of a source facet whose state mentions a process outside
/// the facet: their owners heard from someone who crashed while
/// sending, and anything built on them is discarded by [`g_map`].
pub fn dirty_vertices(phi: &Simplex, octx: &OverheadContext) -> Result<Vec<Vertex>> {
    if !octx.source().facets().contains(phi) {
        return Err(usage("dirty-vertex scan needs a source facet".to_string()));
    }
    let inside = phi.names();
    Ok(phi
        .vertices()
        .iter()
        .filter(|v| !v.label.names().minus(inside).is_empty())
        .cloned()
        .collect())
}

/// All (process, state) entries exactly `depth` levels below `label`:
/// the source-round vertices its owner heard of, directly or not.
fn hist_collect(
    label: &Label,
    depth: usize,
    out: &mut BTreeSet<(ProcessId, Label)>,
) -> Result<()> {
    match label.node() {
        LabelNode::Pairs(entries) => {
            for (p, sub) in entries {
                if depth == 1 {
                    out.insert((*p, sub.clone()));
                } else {
                    hist_collect(sub, depth - 1, out)?;
                }
            }
            Ok(())
        }
        LabelNode::Int(_) => {
            Err(invariant("history is shallower than the round count".to_string()))
        }
    }
}

/// Crash-free image of one source facet: run the tail rounds with the
/// absent processes silent, then keep only the vertices whose history
/// avoids every dirty vertex of the facet.
fn g_facet(phi: &Simplex, octx: &OverheadContext) -> Result<Simplex> {
    let spec = ExecutionSpec {
        net: octx.net().clone(),
        inputs: InputAssignment::from_facet(phi),
        failures: FailurePattern::empty(),
        rounds: octx.rounds(),
    };
    let end = run_full_information(&spec)?;
    let dirty: BTreeSet<(ProcessId, Label)> = dirty_vertices(phi, octx)?
        .into_iter()
        .map(|v| (v.color, v.label))
        .collect();
    let mut keep: Vec<Vertex> = Vec::new();
    for v in end.vertices() {
        let mut hist = BTreeSet::new();
        hist_collect(&v.label, octx.rounds(), &mut hist)?;
        if hist.is_disjoint(&dirty) {
            keep.push(v.clone());
        }
    }
    Simplex::new(keep)
}

/// The overhead map. A facet maps to its crash-free image minus the
/// dirty-tainted vertices; a general face maps to the intersection of
/// the images of all facets containing it, restricted to its own
/// colors. The image is one simplex or void; the maximal simplex with
/// the required colors is unique because intersections of simplices
/// are simplices.
pub fn g_map(sigma: &Simplex, octx: &OverheadContext) -> Result<Complex> {
    if !octx.source().contains(sigma) {
        return Err(usage("overhead map applied outside the source complex".to_string()));
    }
    let mut inter: Option<Simplex> = None;
    for phi in octx.source().facets() {
        if !sigma.is_face_of(phi) {
            continue;
        }
        let image = g_facet(phi, octx)?;
        inter = Some(match inter {
            None => image,
            Some(acc) => acc.intersect(&image),
        });
    }
    let acc = inter.ok_or_else(|| invariant("face of a non-void complex has a facet".to_string()))?;
    let rho = acc.restrict_colors(sigma.names());
    Ok(Complex::from_facets(vec![rho]))
}

/// Source-complex admissibility: every allowed t-set of absentees is
/// realized by some facet (C1), and every face is the intersection of
/// the facets containing it (C2).
pub fn verify_c1_c2(octx: &OverheadContext) -> Vec<PropertyReport> {
    vec![verify_c1(octx), verify_c2(octx)]
}

fn verify_c1(octx: &OverheadContext) -> PropertyReport {
    let n = octx.n();
    let t = octx.t();
    let mut seen = NodeSet::empty();
    for f in octx.source().facets() {
        seen = seen.union(f.names());
    }
    let crashed = NodeSet::full(n).minus(seen);
    if crashed.len() > t {
        return PropertyReport::fail(
            "C1".to_string(),
            vec![format!("more than {t} processes appear in no facet: {:?}", crashed.to_vec())],
            &[],
        );
    }
    let extra = t - crashed.len();
    for add in subsets_exact(seen.0, extra) {
        let s = NodeSet(crashed.0 | add);
        let alive = NodeSet::full(n).minus(s);
        if !octx.source().facets().iter().any(|f| f.names() == alive) {
            return PropertyReport::fail(
                "C1".to_string(),
                vec![format!("no facet avoids exactly {:?}", s.to_vec())],
                &[],
            );
        }
    }
    PropertyReport::pass("C1".to_string(), &[])
}

fn verify_c2(octx: &OverheadContext) -> PropertyReport {
    for sigma in octx.source().all_faces() {
        let mut inter: Option<Simplex> = None;
        for phi in octx.source().facets() {
            if !sigma.is_face_of(phi) {
                continue;
            }
            inter = Some(match inter {
                None => phi.clone(),
                Some(acc) => acc.intersect(phi),
            });
        }
        let meet = inter.expect("every face sits in a facet");
        if meet != sigma {
            return PropertyReport::fail(
                "C2".to_string(),
                vec![
                    face_text(&sigma),
                    format!("facet intersection adds vertices: {}", face_text(&meet)),
                ],
                &[],
            );
        }
    }
    PropertyReport::pass("C2".to_string(), &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Bound;
    use crate::topology::pseudosphere_uniform;

    fn v(p: usize, x: i64) -> Vertex {
        Vertex::new(ProcessId(p), Label::int(x))
    }

    fn s(verts: Vec<Vertex>) -> Simplex {
        Simplex::new(verts).unwrap()
    }

    fn binary_inputs(n: usize) -> Complex {
        pseudosphere_uniform(NodeSet::full(n), &[Label::int(0), Label::int(1)]).unwrap()
    }

    fn ctx_for(n: usize, k: usize, t: usize, g: DirectedGraph, input: &Complex) -> RoundContext {
        let shelling = pseudosphere_shelling_order(input, n);
        RoundContext::new(0, n, k, t, g, input.clone(), shelling).unwrap()
    }

    #[test]
    fn labels_round_trip_through_faces() {
        let face = s(vec![v(1, 4), v(3, 7)]);
        let l = simplex_label(&face).unwrap();
        assert_eq!(label_simplex(&l).unwrap(), face);
        assert!(simplex_label(&Simplex::empty()).is_err());
        assert!(label_simplex(&Label::int(3)).is_err());
    }

    #[test]
    fn interval_faces_spans_the_cube() {
        let lo = s(vec![v(1, 0)]);
        let hi = s(vec![v(1, 0), v(2, 0), v(3, 1)]);
        let faces = interval_faces(&lo, &hi).unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.contains(&lo) && faces.contains(&hi));
        assert!(interval_faces(&hi, &lo).is_err());
    }

    #[test]
    fn views_follow_the_in_neighborhood() {
        let rho = s(vec![v(1, 0), v(2, 0), v(3, 0)]);
        let complete = DirectedGraph::complete(3);
        assert_eq!(view_of(&rho, ProcessId(2), &complete).unwrap(), rho);
        let loops_only = DirectedGraph::new(3).unwrap();
        assert_eq!(view_of(&rho, ProcessId(2), &loops_only).unwrap(), s(vec![v(2, 0)]));
        // 1 -> 2 -> 3 plus the mandatory self-loops
        let chain = DirectedGraph::with_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(view_of(&rho, ProcessId(2), &chain).unwrap(), s(vec![v(1, 0), v(2, 0)]));
        assert!(view_of(&s(vec![v(1, 0)]), ProcessId(2), &complete).is_err());
    }

    #[test]
    fn clique_round_at_maximal_quota_leaves_single_vertices() {
        // k = n−1 = 2: image facets are single vertices carrying a face
        // between their own vertex and the whole input facet.
        let input = pseudosphere_uniform(NodeSet::full(3), &[Label::int(0)]).unwrap();
        let sigma = input.facets()[0].clone();
        let ctx = ctx_for(3, 2, 2, DirectedGraph::complete(3), &input);
        let image = f_complete(&sigma, &ctx).unwrap();
        assert_eq!(image.dim(), Some(0));
        // three survivors x four faces between vertex and facet each
        assert_eq!(image.facets().len(), 12);
    }

    #[test]
    fn clique_round_boundary_sizes() {
        let input = binary_inputs(3);
        let ctx = ctx_for(3, 1, 1, DirectedGraph::complete(3), &input);
        // at the target dimension the image is the single full-view facet
        let edge = s(vec![v(1, 0), v(2, 1)]);
        let image = f_complete(&edge, &ctx).unwrap();
        assert_eq!(image.facets().len(), 1);
        assert_eq!(image.facets()[0].names(), edge.names());
        // below it the image is void
        assert!(f_complete(&s(vec![v(1, 0)]), &ctx).unwrap().is_void());
        assert!(f_complete(&Simplex::empty(), &ctx).unwrap().is_void());
        // non-clique graphs are rejected
        let ring = ctx_for(3, 1, 1, DirectedGraph::ring_directed(3), &input);
        assert!(f_complete(&edge, &ring).is_err());
    }

    #[test]
    fn complete_graph_collapses_the_three_operators() {
        let input = binary_inputs(3);
        let ctx = ctx_for(3, 1, 1, DirectedGraph::complete(3), &input);
        for face in input.all_faces() {
            let fc = f_complete(&face, &ctx).unwrap();
            let h = h_general(&face, &ctx).unwrap();
            let fg = f_general(&face, &ctx).unwrap();
            assert_eq!(fc, h, "clique views see everything");
            assert_eq!(fc, fg, "no dangerous faces on the clique");
        }
    }

    #[test]
    fn dangerous_faces_obey_the_claimed_laws() {
        let input = binary_inputs(4);
        let ctx = ctx_for(4, 1, 1, DirectedGraph::ring_directed(4), &input);
        let clique_ctx = ctx_for(4, 1, 1, DirectedGraph::complete(4), &input);
        for xi in input.facets().iter().take(4) {
            for sigma in xi.faces() {
                // never dangerous against itself
                assert!(dangerous_faces(&sigma, &sigma, &ctx).unwrap().is_empty());
                // no dangerous faces on the clique
                assert!(dangerous_faces(&sigma, xi, &clique_ctx).unwrap().is_empty());
                let outer: BTreeSet<Simplex> =
                    dangerous_faces(&sigma, xi, &ctx).unwrap().into_iter().collect();
                let rec = dangerous_pair_record(&sigma, xi, &ctx).unwrap();
                assert_eq!(rec.is_dangerous(), !outer.is_empty());
                for tau in &outer {
                    assert_eq!(tau.dim(), ctx.target_dim());
                    assert!(sigma.is_face_of(tau) && *tau != sigma);
                }
                // monotone in the carrier face
                for xi_p in xi.faces() {
                    if !sigma.is_face_of(&xi_p) {
                        continue;
                    }
                    for tau in dangerous_faces(&sigma, &xi_p, &ctx).unwrap() {
                        assert!(outer.contains(&tau), "shrinking the carrier added a witness");
                    }
                }
            }
        }
    }

    #[test]
    fn scope_switch_changes_only_the_wide_scope() {
        let input = binary_inputs(4);
        let base = ctx_for(4, 1, 1, DirectedGraph::ring_directed(4), &input);
        let tau_ctx = base.clone().with_qscope(QScope::Tau);
        let xi_ctx = base.clone().with_qscope(QScope::Xi);
        let mut xi_differs = false;
        for xi in input.facets().iter().take(4) {
            for sigma in xi.faces() {
                let a = dangerous_faces(&sigma, xi, &base).unwrap();
                let b = dangerous_faces(&sigma, xi, &tau_ctx).unwrap();
                assert_eq!(a, b, "self-loops make the two narrow scopes agree");
                if dangerous_faces(&sigma, xi, &xi_ctx).unwrap() != a {
                    xi_differs = true;
                }
            }
        }
        assert!(xi_differs, "the wide scope should flag extra faces on the ring");
    }

    #[test]
    fn ring_repair_covers_the_naive_overlaps_but_is_not_strict() {
        let input = binary_inputs(3);
        let ctx = ctx_for(3, 1, 1, DirectedGraph::ring_directed(3), &input);
        let flags = vec![ctx.qscope().flag().to_string()];
        let h_reports = check_carrier_properties(
            |sig| h_general(sig, &ctx),
            &input,
            &[CarrierProperty::Monotone, CarrierProperty::Strict],
            &flags,
        )
        .unwrap();
        assert!(h_reports[0].passed(), "naive operator is still monotone");
        assert!(!h_reports[1].passed(), "naive operator must lose strictness on the ring");
        // the dangerous blocks recover everything the naive operator
        // leaks between facets: its image overlaps land in the meet
        // image of the repaired map, for every facet pair
        let facets = input.facets().to_vec();
        for a in &facets {
            for b in &facets {
                let meet = a.intersect(b);
                if meet.is_empty() {
                    continue;
                }
                let meet_image = f_general(&meet, &ctx).unwrap();
                let naive = h_general(a, &ctx)
                    .unwrap()
                    .intersection(&h_general(b, &ctx).unwrap());
                assert!(naive.is_subcomplex_of(&meet_image), "naive overlap escaped the repair");
            }
        }
        let f_reports = check_carrier_properties(
            |sig| f_general(sig, &ctx),
            &input,
            &[
                CarrierProperty::Monotone,
                CarrierProperty::CodimLeq(1),
                CarrierProperty::Strict,
            ],
            &flags,
        )
        .unwrap();
        assert!(f_reports[0].passed(), "monotone: {:?}", f_reports[0].witness_faces);
        assert!(f_reports[1].passed(), "codim: {:?}", f_reports[1].witness_faces);
        // But the repaired map is not strict itself. Its blocks are
        // built over every domain facet containing the chosen subface,
        // however small, so an image can pick up vertices whose labels
        // contradict the mapped face; two images overlap in such a
        // vertex while the meet, whose blind spots decide which colors
        // its blocks may use, cannot color that process at all. Two
        // pinned leaks, one per shape.
        assert!(!f_reports[2].passed(), "expected the strictness gap");
        // Facet against proper face: both keep process 3 seeing {2,3}
        // with values (0,0). In sigma, 2 cannot hear 3; in kappa, 3
        // cannot hear 1. The meet {(1,0)} can only flag 2 as unheard
        // (1's in-set is {1,3}), so its blocks stay on colors {1,2}.
        let sigma = s(vec![v(1, 0), v(2, 0)]);
        let kappa = s(vec![v(1, 0), v(2, 1), v(3, 0)]);
        let met = f_general(&sigma, &ctx)
            .unwrap()
            .intersection(&f_general(&kappa, &ctx).unwrap());
        let meet_image = f_general(&sigma.intersect(&kappa), &ctx).unwrap();
        assert!(meet_image.is_subcomplex_of(&met));
        let leaked = Simplex::new(vec![Vertex::new(
            ProcessId(3),
            Label::pairs(vec![
                (ProcessId(2), Label::int(0)),
                (ProcessId(3), Label::int(0)),
            ])
            .unwrap(),
        )])
        .unwrap();
        assert!(met.contains(&leaked));
        assert!(!meet_image.contains(&leaked));
        // Facet against facet: the label (2,0),(3,1) contradicts both
        // facets (a0 has 3 at 0, b1 has 2 at 1), yet each image builds
        // the vertex through a block of a foreign domain facet that
        // holds the other's value. The meet is again {(1,0)}.
        let a0 = s(vec![v(1, 0), v(2, 0), v(3, 0)]);
        let b1 = s(vec![v(1, 0), v(2, 1), v(3, 1)]);
        let chimera = Simplex::new(vec![Vertex::new(
            ProcessId(3),
            Label::pairs(vec![
                (ProcessId(2), Label::int(0)),
                (ProcessId(3), Label::int(1)),
            ])
            .unwrap(),
        )])
        .unwrap();
        assert!(f_general(&a0, &ctx).unwrap().contains(&chimera));
        assert!(f_general(&b1, &ctx).unwrap().contains(&chimera));
        assert!(!f_general(&a0.intersect(&b1), &ctx).unwrap().contains(&chimera));
    }

    #[test]
    fn image_orders_pass_the_shelling_verifier() {
        for g in [DirectedGraph::complete(3), DirectedGraph::ring_directed(3)] {
            let input = binary_inputs(3);
            let ctx = ctx_for(3, 1, 1, g, &input);
            let mut checked = 0usize;
            for face in input.all_faces() {
                let order = f_general_shelling_order(&face, &ctx).unwrap();
                if order.is_empty() {
                    continue;
                }
                let image = Complex::from_facets(order.clone());
                assert!(verify_shelling_order(&image, &order).unwrap().ok);
                checked += 1;
            }
            assert!(checked > 8);
        }
    }

    #[test]
    fn chain_grounds_advances_and_exhausts() {
        let net = Network::Static(DirectedGraph::complete(3));
        let chain = CrashingChain::new(net, 1, 1, binary_inputs(3)).unwrap();
        assert_eq!(chain.remaining(), 1);
        assert!(chain.order_is_shelling());
        let kappa = chain.complex().facets()[0].clone();
        let next = chain.advance(&kappa).unwrap();
        assert_eq!(next.rounds_applied(), 1);
        assert_eq!(next.remaining(), 0);
        assert_eq!(next.complex().dim(), Some(1));
        assert!(next.context().is_err(), "budget is spent");
        // the carried order is exactly the image's verified shelling
        assert_eq!(next.shelling().len(), next.complex().facets().len());
        assert!(next.order_is_shelling());
        assert!(CrashingChain::new(
            Network::Static(DirectedGraph::complete(3)),
            1,
            2,
            binary_inputs(3)
        )
        .is_err());
    }

    #[test]
    fn sparse_round_images_are_not_shellable_at_all() {
        // The repaired operator unions covering blocks over every
        // domain facet that contains the chosen subface, however small.
        // On sparse graphs with four or more processes those blocks
        // attach along low-dimensional faces and close one-dimensional
        // cycles, so no facet order can shell the image: nonzero first
        // homology certifies that, independently of any chosen order.
        for (g, n, expected_b1) in [
            (DirectedGraph::ring_directed(4), 4, 6),
            (DirectedGraph::cycle(4), 4, 12),
        ] {
            let input = binary_inputs(n);
            let ctx = ctx_for(n, 1, 1, g, &input);
            let kappa = input.facets()[0].clone();
            let order = f_general_shelling_order(&kappa, &ctx).unwrap();
            let image = Complex::from_facets(order.clone());
            let betti =
                crate::topology::betti_mod2(&image, image.dim().unwrap()).unwrap();
            assert_eq!(betti[1], expected_b1, "unexpected low homology");
            assert!(!verify_shelling_order(&image, &order).unwrap().ok);
        }
        // on the complete graph the blocks collapse into the clique
        // operator and the image shells in the canonical order
        let input = binary_inputs(4);
        let ctx = ctx_for(4, 1, 1, DirectedGraph::complete(4), &input);
        let kappa = input.facets()[0].clone();
        let order = f_general_shelling_order(&kappa, &ctx).unwrap();
        let image = Complex::from_facets(order.clone());
        let betti = crate::topology::betti_mod2(&image, image.dim().unwrap()).unwrap();
        assert_eq!(betti[1], 0);
        assert!(verify_shelling_order(&image, &order).unwrap().ok);
    }

    #[test]
    fn skeleton_source_passes_both_admissibility_checks() {
        let net = Network::Static(DirectedGraph::complete(4));
        let octx = OverheadContext::initially_dead(net.clone(), 2, 1, 1).unwrap();
        assert_eq!(octx.source().facets().len(), 24);
        let reports = verify_c1_c2(&octx);
        assert!(reports.iter().all(PropertyReport::passed));
        // with one facet per name pair, dropping any facet makes one
        // absentee set unrealizable
        let single = pseudosphere_uniform(NodeSet::full(4), &[Label::int(0)]).unwrap();
        let sparse = crate::topology::skeleton(&single, 1).unwrap();
        let mut facets = sparse.facets().to_vec();
        assert_eq!(facets.len(), 6);
        facets.remove(0);
        let broken =
            OverheadContext::new(Complex::from_facets(facets), net, 2, 1, 0, 1).unwrap();
        let broken_reports = verify_c1_c2(&broken);
        assert!(!broken_reports[0].passed());
        assert!(broken_reports[0].witness_faces[0].contains("no facet avoids"));
    }

    #[test]
    fn pipeline_source_passes_both_admissibility_checks() {
        let net = Network::Static(DirectedGraph::complete(4));
        let chain = CrashingChain::new(net.clone(), 1, 1, binary_inputs(4)).unwrap();
        let kappa = chain.complex().facets()[0].clone();
        let source = chain.advance(&kappa).unwrap();
        let octx =
            OverheadContext::new(source.complex().clone(), net, 1, 1, 1, 2).unwrap();
        let reports = verify_c1_c2(&octx);
        assert!(reports.iter().all(PropertyReport::passed), "{reports:?}");
    }

    #[test]
    fn clean_facets_keep_their_full_image() {
        let net = Network::Static(DirectedGraph::cycle(4));
        let octx = OverheadContext::initially_dead(net, 1, 1, 2).unwrap();
        for phi in octx.source().facets().iter().take(6) {
            assert!(dirty_vertices(phi, &octx).unwrap().is_empty());
            let image = g_map(phi, &octx).unwrap();
            assert_eq!(image.facets().len(), 1);
            assert_eq!(image.facets()[0].names(), phi.names());
        }
    }

    #[test]
    fn dirty_histories_are_discarded() {
        // process 2's state mentions process 3, which is outside the
        // facet: everyone who hears process 2 is dropped.
        let dirty_label = Label::pairs(vec![
            (ProcessId(2), Label::int(0)),
            (ProcessId(3), Label::int(7)),
        ])
        .unwrap();
        let clean_label = Label::pairs(vec![(ProcessId(2), Label::int(0))]).unwrap();
        let phi_dirty = s(vec![v(1, 0), Vertex::new(ProcessId(2), dirty_label)]);
        let phi_clean = s(vec![v(1, 0), Vertex::new(ProcessId(2), clean_label)]);
        let source = Complex::from_facets(vec![phi_dirty.clone(), phi_clean.clone()]);
        let net = Network::Static(DirectedGraph::complete(3));
        let octx = OverheadContext::new(source, net, 1, 1, 1, 2).unwrap();
        assert_eq!(dirty_vertices(&phi_dirty, &octx).unwrap().len(), 1);
        assert!(g_map(&phi_dirty, &octx).unwrap().is_void());
        let clean_image = g_map(&phi_clean, &octx).unwrap();
        assert_eq!(clean_image.facets()[0].names(), phi_clean.names());
        // the shared face inherits the void image through intersection
        let shared = s(vec![v(1, 0)]);
        assert!(g_map(&shared, &octx).unwrap().is_void());
    }

    #[test]
    fn histories_match_graph_reachability() {
        let g = DirectedGraph::ring_directed(4);
        let net = Network::Static(g.clone());
        let octx = OverheadContext::initially_dead(net, 1, 1, 2).unwrap();
        let phi = octx
            .source()
            .facets()
            .iter()
            .find(|f| f.names() == NodeSet::full(4).minus(NodeSet::singleton(ProcessId(4))))
            .unwrap();
        let image = g_map(phi, &octx).unwrap();
        let power =
            crate::graph::product_masked(&[g.clone(), g.clone()], phi.names()).unwrap();
        for vtx in image.facets()[0].vertices() {
            let mut hist = BTreeSet::new();
            hist_collect(&vtx.label, 2, &mut hist).unwrap();
            let heard: NodeSet = hist.iter().map(|(p, _)| *p).collect();
            assert_eq!(heard, power.in_set(vtx.color).intersect(phi.names()));
        }
    }

    #[test]
    fn sparse_pipeline_tails_lose_the_radius_guarantees() {
        // C_5 with one dead process and quota 1 has radius 2, so after
        // one crashing round a one-round tail sits below the radius.
        // The crashing round arms the discard step: its labels record
        // who was heard, so a history straying outside a facet's
        // survivor set is visibly dirty. On a cycle the same records
        // cut the other way, and only the facet-to-facet half of the
        // guarantees survives.
        let g = DirectedGraph::cycle(5);
        let net = Network::Static(g);
        let rad = crate::graph::rad_tk(&net, 1, 1).unwrap();
        assert_eq!(rad.value, Bound::Finite(2));
        let chain = CrashingChain::new(net.clone(), 1, 1, binary_inputs(5)).unwrap();
        let kappa = chain.shelling()[0].clone();
        let advanced = chain.advance(&kappa).unwrap();
        // the C_5 round image is one of the non-shellable ones; the
        // chain records that and carries on
        assert!(!advanced.order_is_shelling());
        let source = advanced.complex().clone();
        let octx = OverheadContext::new(source.clone(), net, 1, 1, 1, 2).unwrap();

        let lbl = |qs: &[usize]| {
            Label::pairs(qs.iter().map(|q| (ProcessId(*q), Label::int(0))).collect())
                .unwrap()
        };
        let heard = |p: usize, qs: &[usize]| Vertex::new(ProcessId(p), lbl(qs));

        // Every survivor set is realized, so C1 holds. C2 does not: in
        // the face below, 1 and 4 both missed process 5, whose only
        // targets they are, so process 5 is the silent crasher behind
        // every facet over the face. In all of them process 3 heard
        // exactly {2,3,4}, and its vertex joins the meet uninvited.
        let admissible = verify_c1_c2(&octx);
        assert!(admissible[0].passed(), "{:?}", admissible[0].witness_faces);
        assert!(!admissible[1].passed(), "expected the facet meet to outgrow a face");
        let pinning = Simplex::new(vec![
            heard(1, &[1, 2]),
            heard(2, &[1, 2, 3]),
            heard(4, &[3, 4]),
        ])
        .unwrap();
        let forced = heard(3, &[2, 3, 4]);
        assert!(!pinning.contains(&forced));
        let covering: Vec<&Simplex> =
            source.facets().iter().filter(|f| pinning.is_face_of(f)).collect();
        assert!(!covering.is_empty());
        assert!(covering.iter().all(|f| f.contains(&forced)));

        // A crasher that delivered to both neighbors leaves two dirty
        // vertices, and on the induced path 1-2-3-4 one round of gossip
        // hands a dirty history to every survivor. The facet maps to
        // the void complex, sinking nonemptiness at codimension 0.
        let voided = Simplex::new(vec![
            heard(1, &[1, 2, 5]),
            heard(2, &[1, 2, 3]),
            heard(3, &[2, 3, 4]),
            heard(4, &[3, 4, 5]),
        ])
        .unwrap();
        assert!(source.facets().contains(&voided));
        assert_eq!(dirty_vertices(&voided, &octx).unwrap().len(), 2);
        assert!(g_map(&voided, &octx).unwrap().is_void());

        let reports = check_carrier_properties(
            |sig| g_map(sig, &octx),
            &source,
            &[
                CarrierProperty::Monotone,
                CarrierProperty::Strict,
                CarrierProperty::NonemptyCodimLeq(1),
            ],
            &[],
        )
        .unwrap();
        assert!(reports[0].passed(), "monotone: {:?}", reports[0].witness_faces);
        assert!(!reports[1].passed(), "expected a face-level strictness gap");
        assert!(!reports[2].passed(), "expected the void facet to be reported");

        // Facet to facet the map is exactly strict: a facet meet keeps
        // every value pin both facets impose, so the covering sets and
        // the kept survivors line up.
        let facets = source.facets().to_vec();
        let images: Vec<Complex> =
            facets.iter().map(|f| g_map(f, &octx).unwrap()).collect();
        for (i, a) in facets.iter().enumerate() {
            for (j, b) in facets.iter().enumerate().skip(i + 1) {
                let meet = a.intersect(b);
                if meet.is_empty() {
                    continue;
                }
                let met = images[i].intersection(&images[j]);
                assert!(
                    met.is_subcomplex_of(&g_map(&meet, &octx).unwrap()),
                    "facet pair leaked: {} and {}",
                    face_text(a),
                    face_text(b)
                );
            }
        }

        // The recorded strictness failure lives strictly below the
        // facets: the meet of the two faces here frees the value that
        // process 2 heard from process 3, so its covering facets
        // include runs where that value is 1 and process 1's tail
        // vertex no longer survives them all. The met images share it.
        let sigma1 = Simplex::new(vec![heard(1, &[1, 2]), heard(2, &[1, 2, 3])]).unwrap();
        let sigma2 = Simplex::new(vec![heard(1, &[1, 2]), heard(3, &[2, 3, 4])]).unwrap();
        let meet = sigma1.intersect(&sigma2);
        assert_eq!(meet, Simplex::new(vec![heard(1, &[1, 2])]).unwrap());
        let met =
            g_map(&sigma1, &octx).unwrap().intersection(&g_map(&sigma2, &octx).unwrap());
        let survivor = Vertex::new(
            ProcessId(1),
            Label::pairs(vec![
                (ProcessId(1), lbl(&[1, 2])),
                (ProcessId(2), lbl(&[1, 2, 3])),
            ])
            .unwrap(),
        );
        assert_eq!(met.facets().len(), 1);
        assert_eq!(met.facets()[0], Simplex::new(vec![survivor]).unwrap());
        assert!(g_map(&meet, &octx).unwrap().is_void());
    }

    #[test]
    fn bare_sources_lose_the_radius_guarantees() {
        // A bare-input label carries no record of who was absent, so
        // the runs over facets with different survivor sets happen on
        // different induced subgraphs and nothing is ever dirty. Below
        // the radius of C_5 two guarantees collapse at once; grounding
        // the tail in a crashing round, as the preceding test does,
        // recovers them facet to facet and no further.
        let g = DirectedGraph::cycle(5);
        let octx = OverheadContext::initially_dead(Network::Static(g), 1, 1, 1).unwrap();
        // {1,2,4} sits under the facets surviving on {1,2,3,4} and on
        // {1,2,4,5}; in one round every one of 1, 2, 4 hears the
        // leftover neighbor (3 or 5), so the two runs share no vertex
        // and the codimension-1 face maps to the void complex.
        let sigma = s(vec![v(1, 0), v(2, 0), v(4, 0)]);
        assert!(g_map(&sigma, &octx).unwrap().is_void());
        // phi1, phi2 agree on processes 1..3 and differ in process 4's
        // value; process 1 hears only {1,2} when 4 or 5 is absent, so
        // the vertex (1, [(1,0),(2,0)]) lies in both facet images. The
        // meet face {1,2,3} is also covered by facets naming process 5,
        // where process 1 hears {1,2,5}; the meet image loses color 1.
        let all0: Vec<Vertex> = (1..=4).map(|p| v(p, 0)).collect();
        let phi1 = Simplex::new(all0).unwrap();
        let mut verts = phi1.vertices().to_vec();
        verts[3] = v(4, 1);
        let phi2 = Simplex::new(verts).unwrap();
        let meet = phi1.intersect(&phi2);
        assert_eq!(meet.names(), NodeSet::full(3));
        let met_images = g_map(&phi1, &octx)
            .unwrap()
            .intersection(&g_map(&phi2, &octx).unwrap());
        let meet_image = g_map(&meet, &octx).unwrap();
        assert_eq!(met_images.facets()[0].names().len(), 2);
        assert_eq!(meet_image.facets()[0].names().len(), 1);
        assert!(meet_image.is_subcomplex_of(&met_images));
        // the auditor reports the same two failures; monotonicity is
        // structural (more facets intersected, then restricted) and
        // survives even here
        let reports = check_carrier_properties(
            |sig| g_map(sig, &octx),
            &octx.source().clone(),
            &[
                CarrierProperty::Monotone,
                CarrierProperty::Strict,
                CarrierProperty::NonemptyCodimLeq(1),
            ],
            &[],
        )
        .unwrap();
        assert!(reports[0].passed(), "monotone: {:?}", reports[0].witness_faces);
        assert!(!reports[1].passed(), "expected the bare-source strictness gap");
        assert!(!reports[2].passed(), "expected a void near-top face");
    }


    #[test]
    fn property_reports_serialize_with_flags() {
        let input = binary_inputs(3);
        let ctx = ctx_for(3, 1, 1, DirectedGraph::complete(3), &input);
        let reports = check_carrier_properties(
            |sig| f_general(sig, &ctx),
            &input,
            &[CarrierProperty::NonemptyCodimLeq(1)],
            &[ctx.qscope().flag().to_string()],
        )
        .unwrap();
        let json = serde_json::to_value(&reports[0]).unwrap();
        assert_eq!(json["property"], "NONEMPTY_CODIM_LEQ(1)");
        assert_eq!(json["status"], "PASS");
        assert_eq!(json["assumption_flags"][0], "qscope=sigma");
    }
}
