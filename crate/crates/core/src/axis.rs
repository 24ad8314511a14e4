//! Axis data for hyperbolic elements and windowed views of the
//! half-space family crossed by the axis.
//!
//! For a hyperbolic g the half-spaces crossed by its axis form a
//! g-invariant family. We materialize the finite slice between
//! g^-K.o and g^K.o, compute all pairwise relations inside one
//! scope, and extract the dimension (the largest pairwise
//! transverse subset). The window is grown until the dimension
//! stabilizes, which is the certification condition for every
//! downstream result.

use std::collections::HashMap;

use crate::complex::CubeComplex;
use crate::error::Error;
use crate::median::{self, Relation, Scope};
use crate::Result;

/// Largest power tried when looking for a non-transversely acting power.
pub const DEFAULT_POWER_CAP: usize = 12;

/// Window radii grow geometrically from max(2, ell) up to this bound.
pub const MAX_WINDOW_RADIUS: usize = 64;

/// A hyperbolic element together with a vertex on its axis.
///
/// `fundamental` holds the half-spaces separating `base` from
/// g.base, oriented toward g.base, in crossing order of one
/// geodesic. Every half-space crossed by the axis is a g-power
/// translate of exactly one of them.
pub struct Axis<C: CubeComplex> {
    pub g: C::G,
    pub base: C::V,
    pub ell: usize,
    pub fundamental: Vec<C::H>,
}

impl<C: CubeComplex> Clone for Axis<C> {
    fn clone(&self) -> Self {
        Axis {
            g: self.g.clone(),
            base: self.base.clone(),
            ell: self.ell,
            fundamental: self.fundamental.clone(),
        }
    }
}

/// Classifies g, returning axis data when it is hyperbolic.
///
/// Fails with `Error::Elliptic` when g fixes a vertex. Also rejects
/// elements that invert one of the fundamental walls, since none of
/// the later analysis is meaningful in that case.
pub fn classify<C: CubeComplex>(c: &C, g: &C::G) -> Result<Axis<C>> {
    let (base, ell) = c.axis(g)?;
    if ell == 0 {
        return Err(Error::Elliptic);
    }
    let to = c.act(g, &base);
    if c.distance(&base, &to) != ell {
        return Err(Error::Internal(format!(
            "axis base {} does not realize the translation length {ell}",
            c.describe_vertex(&base)
        )));
    }
    let fundamental = median::interval(c, &base, &to);
    if fundamental.len() != ell {
        return Err(Error::Internal(
            "fundamental interval does not match translation length".into(),
        ));
    }
    for h in &fundamental {
        if c.act_h(g, h) == c.complement(h) {
            return Err(Error::InversionDetected);
        }
    }
    Ok(Axis {
        g: g.clone(),
        base,
        ell,
        fundamental,
    })
}

/// Whether v realizes the translation length of the axis element.
pub fn is_minimal<C: CubeComplex>(c: &C, axis: &Axis<C>, v: &C::V) -> bool {
    c.distance(v, &c.act(&axis.g, v)) == axis.ell
}

/// Smallest k >= 1 such that no fundamental half-space is transverse
/// to its g^k translate.
///
/// Checking the fundamental family at exponent one per k suffices:
/// every axis half-space is a g-power translate of a fundamental one,
/// so by equivariance the relation between H and g^k.H is constant on
/// each orbit, and non-transversality propagates to higher multiples
/// of k along the containment chain H > g^k.H > g^2k.H > ...
pub fn non_transverse_power<C: CubeComplex>(
    c: &C,
    axis: &Axis<C>,
    cap: usize,
) -> Result<usize> {
    'powers: for k in 1..=cap {
        let hi = c.act(&c.power(&axis.g, k as i64 + 1), &axis.base);
        let scope = Scope::new(c, &axis.base, &hi)?;
        let gk = c.power(&axis.g, k as i64);
        for h in &axis.fundamental {
            let th = c.act_h(&gk, h);
            match scope.relation(h, &th)? {
                Relation::Transverse => continue 'powers,
                Relation::Equal => {
                    return Err(Error::Internal(
                        "power translate equals the original half-space".into(),
                    ))
                }
                _ => {}
            }
        }
        return Ok(k);
    }
    Err(Error::NoNonTransversePower { cap })
}

/// The half-spaces crossed by the axis between g^-K.base and
/// g^K.base, all sharing one relation scope.
///
/// Element n*ell + j (for n in -K..K, j in 0..ell) is the g^n
/// translate of fundamental[j]; its grade is n. The scope hull spans
/// one extra period on each side so that the g-translate of any
/// window element is still a scope wall.
pub struct Window<'c, C: CubeComplex> {
    g: C::G,
    base: C::V,
    ell: usize,
    radius: usize,
    scope: Scope<'c, C>,
    elements: Vec<C::H>,
    grades: Vec<i64>,
    offsets: Vec<usize>,
    by_pos: HashMap<(i64, usize), usize>,
    index: HashMap<C::H, usize>,
}

impl<'c, C: CubeComplex> Window<'c, C> {
    pub fn build(c: &'c C, axis: &Axis<C>, radius: usize) -> Result<Self> {
        assert!(radius >= 1);
        let k = radius as i64;
        let lo = c.act(&c.power(&axis.g, -k - 1), &axis.base);
        let hi = c.act(&c.power(&axis.g, k + 1), &axis.base);
        let scope = Scope::new(c, &lo, &hi)?;
        let mut elements = Vec::new();
        let mut grades = Vec::new();
        let mut offsets = Vec::new();
        let mut by_pos = HashMap::new();
        let mut index: HashMap<C::H, usize> = HashMap::new();
        for n in -k..k {
            let t = c.power(&axis.g, n);
            for (j, h) in axis.fundamental.iter().enumerate() {
                let w = c.act_h(&t, h);
                match scope.lookup(&w) {
                    Some((_, false)) => {}
                    Some((_, true)) => {
                        return Err(Error::Internal(
                            "window element oriented against the axis".into(),
                        ))
                    }
                    None => {
                        return Err(Error::Internal(
                            "window element is not a scope wall".into(),
                        ))
                    }
                }
                if let Some(prev) = index.insert(w.clone(), elements.len()) {
                    return Err(Error::Internal(format!(
                        "half-space repeats in the window at grades {} and {n}",
                        grades[prev]
                    )));
                }
                by_pos.insert((n, j), elements.len());
                elements.push(w);
                grades.push(n);
                offsets.push(j);
            }
        }
        Ok(Window {
            g: axis.g.clone(),
            base: axis.base.clone(),
            ell: axis.ell,
            radius,
            scope,
            elements,
            grades,
            offsets,
            by_pos,
            index,
        })
    }

    pub fn complex(&self) -> &'c C {
        self.scope.complex()
    }

    pub fn g(&self) -> &C::G {
        &self.g
    }

    pub fn base(&self) -> &C::V {
        &self.base
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn scope(&self) -> &Scope<'c, C> {
        &self.scope
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn halfspace(&self, i: usize) -> &C::H {
        &self.elements[i]
    }

    pub fn grade(&self, i: usize) -> i64 {
        self.grades[i]
    }

    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    pub fn index_of(&self, h: &C::H) -> Option<usize> {
        self.index.get(h).copied()
    }

    pub fn index_at(&self, grade: i64, offset: usize) -> Option<usize> {
        self.by_pos.get(&(grade, offset)).copied()
    }

    /// Index of the g^by translate of element i, when it is still in
    /// the window.
    pub fn translate_index(&self, i: usize, by: i64) -> Option<usize> {
        self.index_at(self.grades[i] + by, self.offsets[i])
    }

    pub fn relation_idx(&self, i: usize, j: usize) -> Result<Relation> {
        self.scope.relation(&self.elements[i], &self.elements[j])
    }

    pub fn tightly_nested_idx(&self, i: usize, j: usize) -> Result<bool> {
        self.scope
            .tightly_nested(&self.elements[i], &self.elements[j])
    }
}

/// A window together with the dimension found in it.
pub struct WindowAnalysis<'c, C: CubeComplex> {
    pub window: Window<'c, C>,
    pub dim: usize,
    /// Window indices of one largest pairwise transverse subset.
    pub antichain: Vec<usize>,
    /// True when the dimension agreed across two consecutive radii
    /// and does not exceed the translation length.
    pub certified: bool,
}

/// Largest pairwise transverse subset of the window elements.
///
/// Exact branch and bound. Vertices are explored sorted by grade
/// magnitude so the reported subset sits near grade zero, which keeps
/// its dual cube inside the hull and away from the window boundary.
pub fn dimension<C: CubeComplex>(w: &Window<'_, C>) -> Result<(usize, Vec<usize>)> {
    let n = w.len();
    if n == 0 {
        return Err(Error::Internal("empty window".into()));
    }
    let mut ord: Vec<usize> = (0..n).collect();
    ord.sort_by_key(|&i| (w.grade(i).abs(), w.grade(i), w.offset(i)));
    let words = n.div_ceil(64);
    let mut adj = vec![vec![0u64; words]; n];
    for p in 0..n {
        for q in p + 1..n {
            match w.relation_idx(ord[p], ord[q])? {
                Relation::Transverse => {
                    adj[p][q / 64] |= 1 << (q % 64);
                    adj[q][p / 64] |= 1 << (p % 64);
                }
                Relation::Equal => {
                    return Err(Error::Internal(
                        "distinct window elements compare equal".into(),
                    ))
                }
                _ => {}
            }
        }
    }

    fn extend(
        adj: &[Vec<u64>],
        cur: &mut Vec<usize>,
        cand: Vec<u64>,
        start: usize,
        best: &mut Vec<usize>,
    ) {
        let live: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if cur.len() + live <= best.len() {
            return;
        }
        if cur.len() > best.len() {
            *best = cur.clone();
        }
        for p in start..adj.len() {
            if cand[p / 64] >> (p % 64) & 1 == 0 {
                continue;
            }
            let mut next = cand.clone();
            for (wi, word) in next.iter_mut().enumerate() {
                *word &= adj[p][wi];
            }
            for word in next.iter_mut().take(p / 64) {
                *word = 0;
            }
            let low = p % 64 + 1;
            next[p / 64] &= if low == 64 { 0 } else { !((1u64 << low) - 1) };
            cur.push(p);
            extend(adj, cur, next, p + 1, best);
            cur.pop();
        }
    }

    let mut all = vec![u64::MAX; words];
    if n % 64 != 0 {
        all[words - 1] = (1u64 << (n % 64)) - 1;
    }
    let mut best = Vec::new();
    let mut cur = Vec::new();
    extend(&adj, &mut cur, all, 0, &mut best);
    let mut picked: Vec<usize> = best.into_iter().map(|p| ord[p]).collect();
    picked.sort_unstable();
    Ok((picked.len(), picked))
}

/// Builds windows of growing radius until the dimension stabilizes.
///
/// Starts at max(2, ell) and doubles. Certification requires the same
/// dimension at two consecutive radii; the smaller window of the
/// stable pair is returned. A dimension exceeding ell is impossible
/// for a genuine axis family, so it turns into a hard error.
pub fn analyze_window<'c, C: CubeComplex>(
    c: &'c C,
    axis: &Axis<C>,
    radius_cap: usize,
) -> Result<WindowAnalysis<'c, C>> {
    let mut radius = axis.ell.max(2);
    let mut prev: Option<(Window<'c, C>, usize, Vec<usize>)> = None;
    loop {
        let window = Window::build(c, axis, radius)?;
        let (dim, antichain) = dimension(&window)?;
        if dim > axis.ell {
            return Err(Error::TheoremContradiction(format!(
                "window dimension {dim} exceeds translation length {}",
                axis.ell
            )));
        }
        if let Some((pw, pd, pa)) = prev.take() {
            if pd == dim {
                return Ok(WindowAnalysis {
                    window: pw,
                    dim: pd,
                    antichain: pa,
                    certified: true,
                });
            }
        }
        if radius >= radius_cap {
            return Ok(WindowAnalysis {
                window,
                dim,
                antichain,
                certified: false,
            });
        }
        prev = Some((window, dim, antichain));
        radius *= 2;
    }
}

/// Moves the axis base to the minimal corner of the cube dual to a
/// largest antichain.
///
/// The corner is the hull vertex lying outside every antichain member
/// while touching an edge dual to each. The result is verified: the
/// corner must realize the translation length, and the walls of
/// [corner, g.corner] must be exactly the window elements K admitting
/// antichain members a, a' with a >= K > g.a' under inclusion.
pub fn recenter<C: CubeComplex>(
    c: &C,
    axis: &Axis<C>,
    analysis: &WindowAnalysis<'_, C>,
) -> Result<Axis<C>> {
    let w = &analysis.window;
    let scope = w.scope();
    let mut wall_ids = Vec::with_capacity(analysis.antichain.len());
    for &ai in &analysis.antichain {
        let (idx, flipped) = scope
            .lookup(w.halfspace(ai))
            .ok_or_else(|| Error::Internal("antichain member left the scope".into()))?;
        if flipped {
            return Err(Error::Internal("antichain member flipped in scope".into()));
        }
        wall_ids.push(idx);
    }
    let mut incident = vec![Vec::new(); scope.verts().len()];
    for &(a, b, wall) in scope.edges() {
        incident[a].push(wall);
        incident[b].push(wall);
    }
    let mut corner = None;
    'verts: for vi in 0..scope.verts().len() {
        for &wall in &wall_ids {
            if scope.vertex_in(wall, false, vi) || !incident[vi].contains(&wall) {
                continue 'verts;
            }
        }
        corner = Some(vi);
        break;
    }
    let vi = corner.ok_or_else(|| {
        Error::EmbeddingVerification("no corner vertex for the antichain cube".into())
    })?;
    let o = scope.verts()[vi].clone();
    let go = c.act(&axis.g, &o);
    if c.distance(&o, &go) != axis.ell {
        return Err(Error::EmbeddingVerification(format!(
            "recentered vertex {} does not realize the translation length",
            c.describe_vertex(&o)
        )));
    }
    let fundamental = median::interval(c, &o, &go);
    let from_interval: std::collections::HashSet<&C::H> = fundamental.iter().collect();

    let mut from_poset = std::collections::HashSet::new();
    for i in 0..w.len() {
        let mut below_a = false;
        for &ai in &analysis.antichain {
            match w.relation_idx(ai, i)? {
                Relation::Equal | Relation::FirstContainsSecond => {
                    below_a = true;
                    break;
                }
                _ => {}
            }
        }
        if !below_a {
            continue;
        }
        let mut above_ga = false;
        for &ai in &analysis.antichain {
            let gai = w.translate_index(ai, 1).ok_or_else(|| {
                Error::Internal("antichain translate left the window".into())
            })?;
            if w.relation_idx(i, gai)? == Relation::FirstContainsSecond {
                above_ga = true;
                break;
            }
        }
        if above_ga {
            from_poset.insert(w.halfspace(i));
        }
    }
    if from_poset.len() != from_interval.len() || !from_poset.iter().all(|h| from_interval.contains(*h))
    {
        return Err(Error::EmbeddingVerification(
            "antichain interval does not match the walls of [corner, g.corner]".into(),
        ));
    }
    for h in &fundamental {
        if c.act_h(&axis.g, h) == c.complement(h) {
            return Err(Error::InversionDetected);
        }
    }
    Ok(Axis {
        g: axis.g.clone(),
        base: o,
        ell: axis.ell,
        fundamental,
    })
}
