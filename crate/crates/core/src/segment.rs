//! Descending tightly nested chains and copy counting inside intervals.
//!
//! Copies of a chain between two vertices are translates whose links all
//! separate the endpoints, oriented toward the far one. The count of
//! pairwise non-overlapping copies is bracketed from two sides: chains
//! that merely match the orbit labels bound it from above, transporter
//! verified translates bound it from below, and the flag on the report
//! records whether the two met.

use std::collections::HashMap;

use crate::complex::CubeComplex;
use crate::embed::Embedding;
use crate::error::Error;
use crate::median::{Relation, Scope};
use crate::Result;

/// A descending chain of half-spaces with consecutive links tightly
/// nested, the combinatorial form of a straight run of hyperplanes.
pub struct Segment<C: CubeComplex> {
    halfspaces: Vec<C::H>,
}

impl<C: CubeComplex> Clone for Segment<C> {
    fn clone(&self) -> Self {
        Segment { halfspaces: self.halfspaces.clone() }
    }
}

impl<C: CubeComplex> Segment<C> {
    /// Validate a chain inside a scope containing every link.
    pub fn from_halfspaces(scope: &Scope<'_, C>, halfspaces: Vec<C::H>) -> Result<Self> {
        if halfspaces.is_empty() {
            return Err(Error::EmbeddingVerification("a segment needs at least one link".into()));
        }
        for t in 1..halfspaces.len() {
            let r = scope.relation(&halfspaces[t - 1], &halfspaces[t])?;
            if r != Relation::FirstContainsSecond {
                return Err(Error::EmbeddingVerification(format!(
                    "segment links {} and {} are in relation {:?}, not descending",
                    t - 1,
                    t,
                    r
                )));
            }
            if !scope.tightly_nested(&halfspaces[t - 1], &halfspaces[t])? {
                return Err(Error::EmbeddingVerification(format!(
                    "segment links {} and {} are nested but not tightly",
                    t - 1,
                    t
                )));
            }
        }
        Ok(Segment { halfspaces })
    }

    /// The reverse traversal: complements in the opposite order. The
    /// relation between complements mirrors the original, so the result
    /// is again a valid chain.
    pub fn reversed(&self, c: &C) -> Segment<C> {
        Segment {
            halfspaces: self.halfspaces.iter().rev().map(|h| c.complement(h)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.halfspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn halfspaces(&self) -> &[C::H] {
        &self.halfspaces
    }

    pub fn labels(&self, c: &C) -> Vec<String> {
        self.halfspaces.iter().map(|h| c.label(h)).collect()
    }

    pub fn describe(&self, c: &C) -> String {
        self.halfspaces
            .iter()
            .map(|h| c.describe_halfspace(h))
            .collect::<Vec<_>>()
            .join(" > ")
    }
}

/// Two chains overlap when they share a link or any cross pair crosses.
pub fn overlapping<C: CubeComplex>(
    scope: &Scope<'_, C>,
    a: &Segment<C>,
    b: &Segment<C>,
) -> Result<bool> {
    for ha in a.halfspaces() {
        for hb in b.halfspaces() {
            if ha == hb {
                return Ok(true);
            }
            if scope.relation(ha, hb)? == Relation::Transverse {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Copy count between two vertices, bracketed from both sides.
#[derive(Clone, Debug)]
pub struct CountReport<G> {
    /// Size of the largest family of transporter-verified copies.
    pub lower: usize,
    /// Size of the largest family of label-matching chains.
    pub upper: usize,
    pub exact: bool,
    /// Transporters realizing the lower bound, outermost copy first.
    pub witnesses: Vec<G>,
    /// Label-matching chains found before any witnessing.
    pub candidates: usize,
    /// Every candidate was either witnessed or ruled out by a complete
    /// transporter search, so the lower bound is the true count even
    /// when the label bound above it is larger.
    pub searches_complete: bool,
}

struct RelCache {
    rel: HashMap<(usize, usize), Relation>,
    tight: HashMap<(usize, usize), bool>,
}

impl RelCache {
    fn new() -> Self {
        RelCache { rel: HashMap::new(), tight: HashMap::new() }
    }

    fn get<C: CubeComplex>(
        &mut self,
        scope: &Scope<'_, C>,
        a: usize,
        b: usize,
    ) -> Result<Relation> {
        if let Some(&r) = self.rel.get(&(a, b)) {
            return Ok(r);
        }
        let r = scope.relation(&scope.walls()[a], &scope.walls()[b])?;
        self.rel.insert((a, b), r);
        let mirrored = match r {
            Relation::FirstContainsSecond => Relation::SecondContainsFirst,
            Relation::SecondContainsFirst => Relation::FirstContainsSecond,
            other => other,
        };
        self.rel.insert((b, a), mirrored);
        Ok(r)
    }

    fn tight<C: CubeComplex>(
        &mut self,
        scope: &Scope<'_, C>,
        outer: usize,
        inner: usize,
    ) -> Result<bool> {
        if let Some(&t) = self.tight.get(&(outer, inner)) {
            return Ok(t);
        }
        let t = scope.tightly_nested(&scope.walls()[outer], &scope.walls()[inner])?;
        self.tight.insert((outer, inner), t);
        Ok(t)
    }
}

const CANDIDATE_CAP: usize = 100_000;

fn label_chains<C: CubeComplex>(
    scope: &Scope<'_, C>,
    labels: &[String],
    wall_labels: &[String],
    cache: &mut RelCache,
    chain: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    let depth = chain.len();
    if depth == labels.len() {
        if out.len() >= CANDIDATE_CAP {
            return Err(Error::Internal("label chain enumeration exploded".into()));
        }
        out.push(chain.clone());
        return Ok(());
    }
    for w in 0..wall_labels.len() {
        if wall_labels[w] != labels[depth] {
            continue;
        }
        if depth > 0 {
            let prev = chain[depth - 1];
            if cache.get(scope, prev, w)? != Relation::FirstContainsSecond {
                continue;
            }
            if !cache.tight(scope, prev, w)? {
                continue;
            }
        }
        chain.push(w);
        label_chains(scope, labels, wall_labels, cache, chain, out)?;
        chain.pop();
    }
    Ok(())
}

fn longest_path(m: usize, inside: &[bool], allowed: &[bool]) -> (usize, Vec<usize>) {
    fn go(
        i: usize,
        m: usize,
        inside: &[bool],
        allowed: &[bool],
        memo: &mut [Option<usize>],
        nxt: &mut [Option<usize>],
    ) -> usize {
        if let Some(v) = memo[i] {
            return v;
        }
        let mut best = 1;
        let mut pick = None;
        for j in 0..m {
            if allowed[j] && inside[i * m + j] {
                let v = 1 + go(j, m, inside, allowed, memo, nxt);
                if v > best {
                    best = v;
                    pick = Some(j);
                }
            }
        }
        memo[i] = Some(best);
        nxt[i] = pick;
        best
    }
    let mut memo = vec![None; m];
    let mut nxt = vec![None; m];
    let mut best = 0;
    let mut start = None;
    for i in 0..m {
        if allowed[i] {
            let v = go(i, m, inside, allowed, &mut memo, &mut nxt);
            if v > best {
                best = v;
                start = Some(i);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = start;
    while let Some(i) = cur {
        path.push(i);
        cur = nxt[i];
    }
    (best, path)
}

/// Count pairwise non-overlapping copies of a chain between two
/// vertices. `radius` bounds the transporter search used to witness
/// candidates as genuine translates.
pub fn count_copies<C: CubeComplex>(
    c: &C,
    x: &C::V,
    y: &C::V,
    gamma: &Segment<C>,
    radius: usize,
) -> Result<CountReport<C::G>> {
    let scope = Scope::new(c, x, y)?;
    count_in_scope(&scope, gamma, radius)
}

/// Same count over an already built interval scope.
pub fn count_in_scope<C: CubeComplex>(
    scope: &Scope<'_, C>,
    gamma: &Segment<C>,
    radius: usize,
) -> Result<CountReport<C::G>> {
    let c = scope.complex();
    let labels = gamma.labels(c);
    let walls = scope.walls();
    let wall_labels: Vec<String> = walls.iter().map(|h| c.label(h)).collect();
    let mut cache = RelCache::new();
    let mut cands: Vec<Vec<usize>> = Vec::new();
    label_chains(scope, &labels, &wall_labels, &mut cache, &mut Vec::new(), &mut cands)?;
    if cands.is_empty() {
        return Ok(CountReport {
            lower: 0,
            upper: 0,
            exact: true,
            witnesses: Vec::new(),
            candidates: 0,
            searches_complete: true,
        });
    }

    let mut witness: Vec<Option<C::G>> = Vec::with_capacity(cands.len());
    let mut searches_complete = true;
    for chain in &cands {
        let (hs, complete) = c.transporters(&gamma.halfspaces()[0], &walls[chain[0]], radius);
        let mut found = None;
        'h: for h in hs {
            for (t, &w) in chain.iter().enumerate() {
                if c.act_h(&h, &gamma.halfspaces()[t]) != walls[w] {
                    continue 'h;
                }
            }
            found = Some(h);
            break;
        }
        if found.is_none() && !complete {
            searches_complete = false;
        }
        witness.push(found);
    }

    // copy j fits strictly inside copy i when nothing is shared, nothing
    // crosses, and the outermost link of j sits inside the innermost of i
    let m = cands.len();
    let mut inside = vec![false; m * m];
    for i in 0..m {
        'next: for j in 0..m {
            if i == j {
                continue;
            }
            for &a in &cands[i] {
                for &b in &cands[j] {
                    if a == b || cache.get(scope, a, b)? == Relation::Transverse {
                        continue 'next;
                    }
                }
            }
            let last_i = *cands[i].last().expect("chains are nonempty");
            let first_j = cands[j][0];
            if cache.get(scope, last_i, first_j)? == Relation::FirstContainsSecond {
                inside[i * m + j] = true;
            }
        }
    }

    let all = vec![true; m];
    let (upper, _) = longest_path(m, &inside, &all);
    let witnessed: Vec<bool> = witness.iter().map(|w| w.is_some()).collect();
    let (lower, path) = longest_path(m, &inside, &witnessed);
    let witnesses = path
        .iter()
        .map(|&i| witness[i].clone().expect("path is restricted to witnessed copies"))
        .collect();
    Ok(CountReport {
        lower,
        upper,
        exact: lower == upper,
        witnesses,
        candidates: m,
        searches_complete,
    })
}

/// A run of consecutive levels on the leading chain, kept with the
/// levels it occupies there.
pub struct GNestedSegment<C: CubeComplex> {
    pub segment: Segment<C>,
    pub start: i64,
    pub end: i64,
}

/// Whether the chain-0 run from level l through r strictly dominates its
/// own g-translate, link against translated link.
pub fn is_g_nested<C: CubeComplex>(
    emb: &Embedding<'_, '_, C>,
    l: i64,
    r: i64,
) -> Result<bool> {
    let wl = emb.index_at_level(0, l).ok_or(Error::NotInScope)?;
    let wr = emb.index_at_level(0, r).ok_or(Error::NotInScope)?;
    let gwl = emb.window().translate_index(wl, 1).ok_or(Error::NotInScope)?;
    Ok(emb.relation_of(wr, gwl) == Relation::FirstContainsSecond)
}

/// The longest self-dominating run inside the one-period piece of the
/// leading chain, leftmost on ties. Single levels always qualify, and a
/// run that cannot be extended must be blocked by a crossing, which is
/// checked on both ends.
pub fn maximal_g_nested<C: CubeComplex>(
    emb: &Embedding<'_, '_, C>,
) -> Result<GNestedSegment<C>> {
    let n1 = emb.shifts()[0];
    if n1 == 0 {
        return Err(Error::EmbeddingVerification(
            "leading chain contributes no levels inside one period".into(),
        ));
    }
    let mut best: Option<(i64, i64)> = None;
    for l in 0..n1 {
        for r in l..n1 {
            if !is_g_nested(emb, l, r)? {
                continue;
            }
            let left_stuck = l == 0 || !is_g_nested(emb, l - 1, r)?;
            let right_stuck = r == n1 - 1 || !is_g_nested(emb, l, r + 1)?;
            if !(left_stuck && right_stuck) {
                continue;
            }
            let better = match best {
                None => true,
                Some((bl, br)) => {
                    (r - l > br - bl) || (r - l == br - bl && l < bl)
                }
            };
            if better {
                best = Some((l, r));
            }
        }
    }
    let (l, r) = best.ok_or_else(|| {
        Error::TheoremContradiction(
            "no maximal run found although single levels always qualify".into(),
        )
    })?;
    if l > 0 {
        let wprev = emb.index_at_level(0, l - 1).expect("level inside the period");
        let wr = emb.index_at_level(0, r).expect("level inside the period");
        let back = emb
            .window()
            .translate_index(wr, -1)
            .ok_or(Error::NotInScope)?;
        if emb.relation_of(wprev, back) != Relation::Transverse {
            return Err(Error::TheoremContradiction(format!(
                "run cannot grow left of level {l} yet nothing crosses there"
            )));
        }
    }
    if r < n1 - 1 {
        let wl = emb.index_at_level(0, l).expect("level inside the period");
        let wnext = emb.index_at_level(0, r + 1).expect("level inside the period");
        let fwd = emb
            .window()
            .translate_index(wl, 1)
            .ok_or(Error::NotInScope)?;
        if emb.relation_of(fwd, wnext) != Relation::Transverse {
            return Err(Error::TheoremContradiction(format!(
                "run cannot grow right of level {r} yet nothing crosses there"
            )));
        }
    }
    let hs: Vec<C::H> = (l..=r)
        .map(|lvl| emb.halfspace_at(0, lvl).expect("level inside the period").clone())
        .collect();
    let segment = Segment::from_halfspaces(emb.window().scope(), hs)?;
    Ok(GNestedSegment { segment, start: l, end: r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::{self, Window};
    use crate::euclid::{EuclideanComplex, GridHalfSpace};
    use crate::graph::DefiningGraph;
    use crate::raag::RaagComplex;

    fn family_of<C: CubeComplex>(wa: &axis::WindowAnalysis<'_, C>) -> Vec<C::H> {
        wa.antichain
            .iter()
            .map(|&i| wa.window.halfspace(i).clone())
            .collect()
    }

    #[test]
    fn pentagon_run_spans_two_levels() {
        let c = RaagComplex::new(DefiningGraph::cycle(5));
        let g = c.element("abcde").unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();

        assert!(is_g_nested(&emb, 0, 0).unwrap());
        assert!(is_g_nested(&emb, 1, 1).unwrap());
        let run = maximal_g_nested(&emb).unwrap();
        assert_eq!((run.start, run.end), (0, 1));
        assert_eq!(run.segment.labels(&c), ["b", "d"]);
        assert_eq!(run.segment.reversed(&c).labels(&c), ["D", "B"]);
    }

    #[test]
    fn pentagon_counts_follow_the_power() {
        let c = RaagComplex::new(DefiningGraph::cycle(5));
        let g = c.element("abcde").unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();
        let run = maximal_g_nested(&emb).unwrap();
        let gamma = run.segment;
        let rev = gamma.reversed(&c);

        let o = win.base().clone();
        let radius = 2 * win.ell() * win.radius();
        for n in 1..=3i64 {
            let gn = c.power(win.g(), n);
            let y = c.act(&gn, &o);
            let report = count_copies(&c, &o, &y, &gamma, radius).unwrap();
            assert_eq!(report.lower, n as usize);
            assert_eq!(report.upper, n as usize);
            assert!(report.exact);
            assert_eq!(report.witnesses.len(), n as usize);
            for (k, h) in report.witnesses.iter().enumerate() {
                assert_eq!(*h, c.power(win.g(), k as i64));
            }
            let rev_report = count_copies(&c, &o, &y, &rev, radius).unwrap();
            assert_eq!((rev_report.lower, rev_report.upper), (0, 0));
            assert!(rev_report.exact);
        }
    }

    #[test]
    fn staircase_direction_decides_the_count() {
        let c = EuclideanComplex::fixture("staircase").unwrap();
        let g = c.automorphism().clone();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();
        let run = maximal_g_nested(&emb).unwrap();
        assert_eq!((run.start, run.end), (0, 1));
        let good = run.segment;
        assert_eq!(good.labels(&c), ["x+", "x+"]);

        let o = win.base().clone();
        let radius = 2 * win.ell() * win.radius();
        for n in 1..=4i64 {
            let y = c.act(&c.power(&g, n), &o);
            let report = count_copies(&c, &o, &y, &good, radius).unwrap();
            assert_eq!(report.lower, n as usize);
            assert_eq!(report.upper, n as usize);
            assert!(report.exact);
            let rev = count_copies(&c, &o, &y, &good.reversed(&c), radius).unwrap();
            assert_eq!((rev.lower, rev.upper), (0, 0));
        }

        // the mixed-direction pair crosses its own translates, so one
        // copy blocks all the others
        let span = Scope::new(&c, &o, &c.act(&c.power(&g, 4), &o)).unwrap();
        let bad = Segment::from_halfspaces(
            &span,
            vec![
                GridHalfSpace { coord: 1, level: 0, toward: true },
                GridHalfSpace { coord: 0, level: 1, toward: true },
            ],
        )
        .unwrap();
        for n in 1..=4i64 {
            let y = c.act(&c.power(&g, n), &o);
            let report = count_copies(&c, &o, &y, &bad, radius).unwrap();
            assert_eq!(report.lower, 1);
            assert_eq!(report.upper, 1);
            assert!(report.exact);
        }
    }

    #[test]
    fn translates_of_the_mixed_pair_overlap() {
        let c = EuclideanComplex::fixture("staircase").unwrap();
        let g = c.automorphism().clone();
        let o: Vec<i64> = vec![0, 0];
        let far = c.act(&c.power(&g, 3), &o);
        let span = Scope::new(&c, &o, &far).unwrap();
        let bad = Segment::from_halfspaces(
            &span,
            vec![
                GridHalfSpace { coord: 1, level: 0, toward: true },
                GridHalfSpace { coord: 0, level: 1, toward: true },
            ],
        )
        .unwrap();
        let moved = Segment::from_halfspaces(
            &span,
            bad.halfspaces().iter().map(|h| c.act_h(&g, h)).collect(),
        )
        .unwrap();
        assert!(overlapping(&span, &bad, &moved).unwrap());

        let good = Segment::from_halfspaces(
            &span,
            vec![
                GridHalfSpace { coord: 0, level: 0, toward: true },
                GridHalfSpace { coord: 0, level: 1, toward: true },
            ],
        )
        .unwrap();
        let good_moved = Segment::from_halfspaces(
            &span,
            good.halfspaces().iter().map(|h| c.act_h(&g, h)).collect(),
        )
        .unwrap();
        assert!(!overlapping(&span, &good, &good_moved).unwrap());
    }

    #[test]
    fn free_group_counts_are_complete() {
        let c = RaagComplex::new(DefiningGraph::free(2));
        let g = c.element("ab").unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();
        let run = maximal_g_nested(&emb).unwrap();
        assert_eq!((run.start, run.end), (0, 1));
        assert_eq!(run.segment.labels(&c), ["a", "b"]);

        let o = win.base().clone();
        for n in 1..=5i64 {
            let y = c.act(&c.power(win.g(), n), &o);
            let report = count_copies(&c, &o, &y, &run.segment, 4).unwrap();
            assert_eq!((report.lower, report.upper), (n as usize, n as usize));
            assert!(report.exact);
        }
    }
}
