//! Integer coordinates on the axis window of a hyperbolic element.
//!
//! Starting from a maximal transverse family A of axis half-spaces dual
//! to a cube at the base vertex, the window elements are partitioned into
//! d chains that the deck transformation permutes: g carries chain
//! sigma(i) onto chain i, shifted down by n_i levels. Levels increase as
//! half-spaces shrink, the member of A on chain i sits at level 0, and
//! the chain whose closed one-period piece is longest is always chain 0.
//!
//! A vertex v gets the coordinate vector phi with phi(v)_i the level of
//! the largest chain-i half-space not containing v. On the minimal set
//! of g this is an isometric embedding into Z^d, phi(base) = 0, and
//! phi(g v)_i = phi(v)_{sigma(i)} + n_i.
//!
//! Everything the construction promises is rechecked against the hull
//! after the fact: cube corners, membership coherence, equivariance,
//! distances, and the quadrant occupancy facts used downstream.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axis::Window;
use crate::complex::CubeComplex;
use crate::error::Error;
use crate::median::{self, Relation, Scope};
use crate::poset::FinitePoset;
use crate::Result;

/// How a cross-chain pair sits in the coordinate plane spanned by its two
/// chains, with the lower-numbered chain drawn horizontally.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuadrantCase {
    Transverse,
    Northwest,
    Southeast,
}

/// Outcome of one quadrant occupancy check for half-spaces at chain
/// levels (i, n) and (j, m).
#[derive(Clone, Debug)]
pub struct QuadrantResult {
    pub case: QuadrantCase,
    pub corner: (usize, i64, usize, i64),
    /// No minimal vertex of the hull projects into the open quadrant.
    pub avoided: bool,
}

/// The chain decomposition of a window plus the coordinates it induces.
pub struct Embedding<'w, 'c, C: CubeComplex> {
    window: &'w Window<'c, C>,
    dim: usize,
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    shifts: Vec<i64>,
    /// Window index of the family member opening chain i.
    antichain: Vec<usize>,
    /// Window indices of the closed interval from A to gA, ascending.
    interval: Vec<usize>,
    /// Per chain, level to window index. Levels are contiguous.
    chain_maps: Vec<BTreeMap<i64, usize>>,
    /// Window index to (chain, level).
    place: HashMap<usize, (usize, i64)>,
    /// Window index to scope wall index, and the partial inverse.
    wall_of: Vec<usize>,
    window_of_wall: Vec<Option<usize>>,
    /// Pairwise relations between window elements, row-major.
    rels: Vec<Relation>,
    /// Per hull vertex, coordinates when every chain determines one.
    hull_phi: Vec<Option<Vec<i64>>>,
    /// Per hull vertex, whether g displaces it by exactly ell.
    minimal: Vec<bool>,
}

fn place_slot(
    maps: &mut [BTreeMap<i64, usize>],
    place: &mut HashMap<usize, (usize, i64)>,
    chain: usize,
    level: i64,
    w: usize,
) -> Result<()> {
    if let Some(&(pc, pl)) = place.get(&w) {
        if (pc, pl) == (chain, level) {
            return Ok(());
        }
        return Err(Error::EmbeddingVerification(format!(
            "window element claimed at ({chain}, {level}) and ({pc}, {pl})"
        )));
    }
    if let Some(&other) = maps[chain].get(&level) {
        if other != w {
            return Err(Error::EmbeddingVerification(format!(
                "two window elements at chain {chain} level {level}"
            )));
        }
        return Ok(());
    }
    maps[chain].insert(level, w);
    place.insert(w, (chain, level));
    Ok(())
}

fn phi_from_bits<C: CubeComplex>(
    scope: &Scope<'_, C>,
    chain_maps: &[BTreeMap<i64, usize>],
    wall_of: &[usize],
    vi: usize,
) -> Option<Vec<i64>> {
    let mut out = Vec::with_capacity(chain_maps.len());
    for map in chain_maps {
        let mut val = None;
        let mut inside_some = false;
        for (&lvl, &w) in map.iter() {
            if scope.vertex_in(wall_of[w], false, vi) {
                inside_some = true;
            } else {
                if !inside_some {
                    // the true coordinate lies below the visible range
                    return None;
                }
                val = Some(lvl);
                break;
            }
        }
        // val is None when the vertex lies inside every visible
        // half-space of the chain, so the coordinate is off the top
        out.push(val?);
    }
    Some(out)
}

impl<'w, 'c, C: CubeComplex> Embedding<'w, 'c, C> {
    /// Decompose the window along a maximal transverse family of
    /// base-grade elements and derive coordinates. Every structural
    /// property is verified as it is established.
    pub fn build(window: &'w Window<'c, C>, family: &[C::H]) -> Result<Self> {
        let c = window.complex();
        let scope = window.scope();
        let n = window.len();
        let d = family.len();
        let ell = window.ell() as i64;
        if d == 0 || n == 0 {
            return Err(Error::EmbeddingVerification(
                "cannot embed an empty window".into(),
            ));
        }

        let mut fam = Vec::with_capacity(d);
        for h in family {
            let i = window.index_of(h).ok_or_else(|| {
                Error::EmbeddingVerification(format!(
                    "family member {} is not a window element",
                    c.describe_halfspace(h)
                ))
            })?;
            if window.grade(i) != 0 {
                return Err(Error::EmbeddingVerification(format!(
                    "family member {} is not at the base grade",
                    c.describe_halfspace(h)
                )));
            }
            if fam.contains(&i) {
                return Err(Error::EmbeddingVerification(format!(
                    "family member {} repeats",
                    c.describe_halfspace(h)
                )));
            }
            fam.push(i);
        }
        let gfam: Vec<usize> = fam
            .iter()
            .map(|&a| {
                window.translate_index(a, 1).ok_or_else(|| {
                    Error::Internal(
                        "window too narrow to hold the g-image of the family".into(),
                    )
                })
            })
            .collect::<Result<_>>()?;

        let mut rels = vec![Relation::Equal; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    rels[i * n + j] = window.relation_idx(i, j)?;
                }
            }
        }

        for a in 0..d {
            for b in a + 1..d {
                if rels[fam[a] * n + fam[b]] != Relation::Transverse {
                    return Err(Error::EmbeddingVerification(format!(
                        "family members {} and {} are not transverse",
                        c.describe_halfspace(&family[a]),
                        c.describe_halfspace(&family[b])
                    )));
                }
            }
        }
        for e in 0..n {
            if fam.contains(&e) {
                continue;
            }
            if fam.iter().all(|&a| rels[a * n + e] == Relation::Transverse) {
                return Err(Error::EmbeddingVerification(format!(
                    "{} extends the transverse family, so the family is not maximal",
                    c.describe_halfspace(window.halfspace(e))
                )));
            }
        }
        for &a in &fam {
            for &gb in &gfam {
                match rels[a * n + gb] {
                    Relation::Transverse | Relation::FirstContainsSecond => {}
                    r => {
                        return Err(Error::EmbeddingVerification(format!(
                            "family member {} sits {:?} its g-translate partner {}",
                            c.describe_halfspace(window.halfspace(a)),
                            r,
                            c.describe_halfspace(window.halfspace(gb))
                        )))
                    }
                }
            }
        }

        // closed interval from A down to gA
        let mut interval = Vec::new();
        for e in 0..n {
            let below_a = fam
                .iter()
                .any(|&a| e == a || rels[a * n + e] == Relation::FirstContainsSecond);
            let above_ga = gfam
                .iter()
                .any(|&b| e == b || rels[e * n + b] == Relation::FirstContainsSecond);
            if below_a && above_ga {
                interval.push(e);
            }
        }
        let expected: HashSet<usize> = (0..n)
            .filter(|&e| window.grade(e) == 0)
            .chain(gfam.iter().copied())
            .collect();
        if interval.len() != (ell as usize) + d
            || interval.iter().any(|e| !expected.contains(e))
            || interval.len() != expected.len()
        {
            return Err(Error::EmbeddingVerification(format!(
                "interval from A to gA has {} elements, expected one axis period plus gA ({})",
                interval.len(),
                ell as usize + d
            )));
        }

        // chain partition with the longest interval piece first
        let poset = FinitePoset::from_relation(interval.len(), |p, q| {
            rels[interval[q] * n + interval[p]] == Relation::FirstContainsSecond
        })?;
        let part = poset.cover_with_maximal_chain()?;
        if part.chains.len() != d {
            return Err(Error::EmbeddingVerification(format!(
                "interval splits into {} chains but the family has size {}",
                part.chains.len(),
                d
            )));
        }

        let mut chains_q: Vec<Vec<usize>> = Vec::with_capacity(d);
        for ch in &part.chains {
            let mut loc = ch.clone();
            loc.sort_by(|&p, &q| {
                use std::cmp::Ordering;
                if p == q {
                    Ordering::Equal
                } else if poset.lt(p, q) {
                    // p is the smaller half-space, so it comes later
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            });
            chains_q.push(loc.into_iter().map(|l| interval[l]).collect());
        }

        let mut antichain = vec![usize::MAX; d];
        let mut bottoms = vec![usize::MAX; d];
        for (i, q) in chains_q.iter().enumerate() {
            let in_fam = q.iter().filter(|w| fam.contains(w)).count();
            let in_gfam = q.iter().filter(|w| gfam.contains(w)).count();
            if in_fam != 1 || in_gfam != 1 {
                return Err(Error::EmbeddingVerification(format!(
                    "chain {i} meets the family {in_fam} times and its g-image {in_gfam} times"
                )));
            }
            let top = q[0];
            let bot = *q.last().expect("chains are nonempty");
            if !fam.contains(&top) {
                return Err(Error::EmbeddingVerification(format!(
                    "chain {i} does not open with its family member"
                )));
            }
            if !gfam.contains(&bot) {
                return Err(Error::EmbeddingVerification(format!(
                    "chain {i} does not close with a g-translate of the family"
                )));
            }
            antichain[i] = top;
            bottoms[i] = bot;
        }
        let owner: HashMap<usize, usize> =
            antichain.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut sigma = vec![usize::MAX; d];
        for i in 0..d {
            let fpos = gfam
                .iter()
                .position(|&b| b == bottoms[i])
                .expect("bottom is a g-translate");
            sigma[i] = owner[&fam[fpos]];
        }
        let mut sigma_inv = vec![usize::MAX; d];
        for i in 0..d {
            if sigma_inv[sigma[i]] != usize::MAX {
                return Err(Error::EmbeddingVerification(
                    "chain gluing map is not a permutation".into(),
                ));
            }
            sigma_inv[sigma[i]] = i;
        }

        let shifts: Vec<i64> = chains_q.iter().map(|q| q.len() as i64 - 1).collect();
        if shifts.iter().sum::<i64>() != ell {
            return Err(Error::EmbeddingVerification(format!(
                "chain shifts sum to {} but the translation length is {}",
                shifts.iter().sum::<i64>(),
                ell
            )));
        }

        // spread each one-period piece across the window by translation
        let radius = window.radius() as i64;
        let mut chain_maps: Vec<BTreeMap<i64, usize>> = vec![BTreeMap::new(); d];
        let mut place: HashMap<usize, (usize, i64)> = HashMap::new();
        for i in 0..d {
            for (t, &w) in chains_q[i].iter().enumerate() {
                place_slot(&mut chain_maps, &mut place, i, t as i64, w)?;
            }
            let (mut j, mut off) = (i, 0i64);
            for k in 1..=2 * radius {
                off += shifts[j];
                j = sigma[j];
                let mut hit = false;
                for (t, &w) in chains_q[j].iter().enumerate() {
                    if let Some(tw) = window.translate_index(w, k) {
                        place_slot(&mut chain_maps, &mut place, i, off + t as i64, tw)?;
                        hit = true;
                    }
                }
                if !hit {
                    break;
                }
            }
            let (mut j, mut off) = (i, 0i64);
            for k in 1..=2 * radius {
                j = sigma_inv[j];
                off -= shifts[j];
                let mut hit = false;
                for (t, &w) in chains_q[j].iter().enumerate() {
                    if let Some(tw) = window.translate_index(w, -k) {
                        place_slot(&mut chain_maps, &mut place, i, off + t as i64, tw)?;
                        hit = true;
                    }
                }
                if !hit {
                    break;
                }
            }
        }
        if place.len() != n {
            return Err(Error::EmbeddingVerification(format!(
                "chains place {} of {} window elements",
                place.len(),
                n
            )));
        }
        for (i, map) in chain_maps.iter().enumerate() {
            let mut expect = *map.keys().next().expect("chains are nonempty");
            for &lvl in map.keys() {
                if lvl != expect {
                    return Err(Error::EmbeddingVerification(format!(
                        "chain {i} skips level {expect}"
                    )));
                }
                expect += 1;
            }
            let levels: Vec<i64> = map.keys().copied().collect();
            for t in 1..levels.len() {
                let hi = map[&levels[t - 1]];
                let lo = map[&levels[t]];
                if rels[hi * n + lo] != Relation::FirstContainsSecond {
                    return Err(Error::EmbeddingVerification(format!(
                        "chain {i} is not descending between levels {} and {}",
                        levels[t - 1],
                        levels[t]
                    )));
                }
            }
        }

        // g carries chain sigma(i) onto chain i shifted by n_i
        for i in 0..d {
            let s = sigma[i];
            for (&lvl, &w) in &chain_maps[s] {
                if let Some(tw) = window.translate_index(w, 1) {
                    match place.get(&tw) {
                        Some(&(ci, cl)) if ci == i && cl == lvl + shifts[i] => {}
                        _ => {
                            return Err(Error::EmbeddingVerification(format!(
                                "g-translate of chain {s} level {lvl} is not at chain {i} level {}",
                                lvl + shifts[i]
                            )))
                        }
                    }
                }
            }
        }

        let mut wall_of = vec![0usize; n];
        let mut window_of_wall = vec![None; scope.wall_count()];
        for w in 0..n {
            let (wi, flipped) = scope.oriented(window.halfspace(w))?;
            if flipped {
                return Err(Error::Internal(
                    "window element stored against the scope orientation".into(),
                ));
            }
            wall_of[w] = wi;
            window_of_wall[wi] = Some(w);
        }

        let nv = scope.verts().len();
        let mut hull_phi = Vec::with_capacity(nv);
        for vi in 0..nv {
            hull_phi.push(phi_from_bits(scope, &chain_maps, &wall_of, vi));
        }
        let mut minimal = vec![false; nv];
        for (vi, v) in scope.verts().iter().enumerate() {
            let gv = c.act(window.g(), v);
            minimal[vi] = median::distance(c, v, &gv) == window.ell();
        }

        let emb = Embedding {
            window,
            dim: d,
            sigma,
            sigma_inv,
            shifts,
            antichain,
            interval,
            chain_maps,
            place,
            wall_of,
            window_of_wall,
            rels,
            hull_phi,
            minimal,
        };

        // the base vertex is the origin and g moves it by the shifts
        let o_vi = scope
            .vertex_index(window.base())
            .ok_or_else(|| Error::Internal("base vertex left the hull".into()))?;
        match &emb.hull_phi[o_vi] {
            Some(phi) if phi.iter().all(|&x| x == 0) => {}
            other => {
                return Err(Error::EmbeddingVerification(format!(
                    "base vertex has coordinates {:?}, expected the origin",
                    other
                )))
            }
        }
        let go = c.act(window.g(), window.base());
        let go_vi = scope
            .vertex_index(&go)
            .ok_or_else(|| Error::Internal("translated base left the hull".into()))?;
        match &emb.hull_phi[go_vi] {
            Some(phi) if *phi == emb.shifts => {}
            other => {
                return Err(Error::EmbeddingVerification(format!(
                    "translated base has coordinates {:?}, expected the shifts {:?}",
                    other, emb.shifts
                )))
            }
        }
        let direct = emb.coordinates(window.base())?;
        if direct.iter().any(|&x| x != 0) {
            return Err(Error::EmbeddingVerification(
                "direct membership route disagrees at the base vertex".into(),
            ));
        }

        Ok(emb)
    }

    pub fn window(&self) -> &'w Window<'c, C> {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn sigma_inv(&self) -> &[usize] {
        &self.sigma_inv
    }

    pub fn shifts(&self) -> &[i64] {
        &self.shifts
    }

    /// Window indices of the family members, chain by chain.
    pub fn antichain_indices(&self) -> &[usize] {
        &self.antichain
    }

    /// Window indices of the closed interval from A to gA.
    pub fn interval_indices(&self) -> &[usize] {
        &self.interval
    }

    /// Window index of the chain-i element at a level, if visible.
    pub fn index_at_level(&self, chain: usize, level: i64) -> Option<usize> {
        self.chain_maps[chain].get(&level).copied()
    }

    pub fn halfspace_at(&self, chain: usize, level: i64) -> Option<&C::H> {
        self.index_at_level(chain, level).map(|w| self.window.halfspace(w))
    }

    /// Chain and level of a window element.
    pub fn place_of(&self, w: usize) -> Option<(usize, i64)> {
        self.place.get(&w).copied()
    }

    /// Visible level span of a chain, inclusive.
    pub fn level_range(&self, chain: usize) -> (i64, i64) {
        let map = &self.chain_maps[chain];
        (
            *map.keys().next().expect("chains are nonempty"),
            *map.keys().next_back().expect("chains are nonempty"),
        )
    }

    /// The half-open chain-0 piece of the interval, levels 0 through
    /// n_0 - 1, as window indices in level order.
    pub fn taut_segment(&self) -> Vec<usize> {
        (0..self.shifts[0])
            .map(|lvl| self.chain_maps[0][&lvl])
            .collect()
    }

    /// The closed chain-0 piece, levels 0 through n_0.
    pub fn extended_taut(&self) -> Vec<usize> {
        (0..=self.shifts[0])
            .map(|lvl| self.chain_maps[0][&lvl])
            .collect()
    }

    pub fn relation_of(&self, a: usize, b: usize) -> Relation {
        self.rels[a * self.window.len() + b]
    }

    pub fn is_minimal_vertex(&self, vi: usize) -> bool {
        self.minimal[vi]
    }

    pub fn hull_coordinates(&self, vi: usize) -> Option<&[i64]> {
        self.hull_phi[vi].as_deref()
    }

    /// Coordinates of an arbitrary vertex, read from half-space
    /// membership alone. Fails when a coordinate falls outside the
    /// visible level range of its chain.
    pub fn coordinates(&self, v: &C::V) -> Result<Vec<i64>> {
        let c = self.window.complex();
        let mut out = Vec::with_capacity(self.dim);
        for map in &self.chain_maps {
            let mut val = None;
            let mut inside_some = false;
            for (&lvl, &w) in map.iter() {
                if c.contains(self.window.halfspace(w), v) {
                    inside_some = true;
                } else {
                    if !inside_some {
                        return Err(Error::NotInScope);
                    }
                    val = Some(lvl);
                    break;
                }
            }
            match val {
                Some(x) => out.push(x),
                None => return Err(Error::NotInScope),
            }
        }
        Ok(out)
    }

    /// Grades at least one period away from the window edge, where
    /// hull truncation cannot hide a required witness.
    pub fn well_inside(&self, w: usize) -> bool {
        let r = self.window.radius() as i64;
        let grade = self.window.grade(w);
        grade >= -r + 1 && grade <= r - 2
    }

    /// The 2^d corners of the cube dual to the family at the base all
    /// carry their indicator coordinates.
    pub fn verify_unit_cube(&self) -> Result<()> {
        if self.dim > 16 {
            return Err(Error::Internal(
                "refusing to enumerate corners above dimension 16".into(),
            ));
        }
        let scope = self.window.scope();
        let mut step: HashMap<(usize, usize), usize> = HashMap::new();
        for &(a, b, wall) in scope.edges() {
            step.insert((a, wall), b);
            step.insert((b, wall), a);
        }
        let o_vi = scope
            .vertex_index(self.window.base())
            .ok_or_else(|| Error::Internal("base vertex left the hull".into()))?;
        for mask in 0u32..(1 << self.dim) {
            let mut cur = o_vi;
            for i in 0..self.dim {
                if mask >> i & 1 == 1 {
                    cur = *step.get(&(cur, self.wall_of[self.antichain[i]])).ok_or_else(
                        || {
                            Error::EmbeddingVerification(
                                "family is not dual to a cube at the base".into(),
                            )
                        },
                    )?;
                }
            }
            let phi = self.hull_phi[cur].as_ref().ok_or_else(|| {
                Error::EmbeddingVerification("cube corner has no coordinates".into())
            })?;
            for i in 0..self.dim {
                let want = (mask >> i & 1) as i64;
                if phi[i] != want {
                    return Err(Error::EmbeddingVerification(format!(
                        "cube corner {mask:b} has coordinates {phi:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Membership in the chain-i half-space at level m must agree with
    /// the coordinate comparison phi_i >= m + 1, for every hull vertex
    /// with coordinates and every visible half-space. A random sample is
    /// recomputed through the complex itself rather than the stored
    /// hull bits.
    pub fn verify_coherence(&self, seed: u64, samples: usize) -> Result<()> {
        let scope = self.window.scope();
        let c = self.window.complex();
        let nv = scope.verts().len();
        for vi in 0..nv {
            let Some(phi) = &self.hull_phi[vi] else { continue };
            for (i, map) in self.chain_maps.iter().enumerate() {
                for (&lvl, &w) in map.iter() {
                    let stored = scope.vertex_in(self.wall_of[w], false, vi);
                    if stored != (phi[i] >= lvl + 1) {
                        return Err(Error::EmbeddingVerification(format!(
                            "membership of {} in {} disagrees with coordinates {:?}",
                            c.describe_vertex(&scope.verts()[vi]),
                            c.describe_halfspace(self.window.halfspace(w)),
                            phi
                        )));
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.window.len();
        for _ in 0..samples {
            let vi = rng.gen_range(0..nv);
            let w = rng.gen_range(0..n);
            let direct = c.contains(self.window.halfspace(w), &scope.verts()[vi]);
            if direct != scope.vertex_in(self.wall_of[w], false, vi) {
                return Err(Error::Internal(format!(
                    "hull bit for {} in {} disagrees with the complex",
                    c.describe_vertex(&scope.verts()[vi]),
                    c.describe_halfspace(self.window.halfspace(w))
                )));
            }
        }
        Ok(())
    }

    /// phi(g v)_i = phi(v)_{sigma(i)} + n_i on every hull vertex whose
    /// translate stays in the hull.
    pub fn verify_equivariance(&self) -> Result<()> {
        let scope = self.window.scope();
        let c = self.window.complex();
        let mut checked = 0usize;
        for (vi, v) in scope.verts().iter().enumerate() {
            let Some(phi) = &self.hull_phi[vi] else { continue };
            let gv = c.act(self.window.g(), v);
            let Some(gvi) = scope.vertex_index(&gv) else { continue };
            let Some(gphi) = &self.hull_phi[gvi] else { continue };
            for i in 0..self.dim {
                if gphi[i] != phi[self.sigma[i]] + self.shifts[i] {
                    return Err(Error::EmbeddingVerification(format!(
                        "translate of {} has coordinates {:?}, expected the permuted shift of {:?}",
                        c.describe_vertex(v),
                        gphi,
                        phi
                    )));
                }
            }
            checked += 1;
        }
        if checked == 0 {
            return Err(Error::Internal(
                "no hull vertex admitted an equivariance check".into(),
            ));
        }
        Ok(())
    }

    /// Hull distance equals the l1 coordinate distance for vertex pairs
    /// separated only by placed walls.
    pub fn verify_isometry(&self, seed: u64, pair_budget: usize) -> Result<()> {
        let scope = self.window.scope();
        let words = scope.wall_count().div_ceil(64);
        let mut unplaced = vec![0u64; words];
        for (wall, w) in self.window_of_wall.iter().enumerate() {
            if w.is_none() {
                unplaced[wall / 64] |= 1 << (wall % 64);
            }
        }
        let eligible: Vec<usize> = (0..scope.verts().len())
            .filter(|&vi| self.hull_phi[vi].is_some())
            .collect();
        let check = |vi: usize, vj: usize| -> Result<bool> {
            let (bi, bj) = (scope.member_bits(vi), scope.member_bits(vj));
            if bi
                .iter()
                .zip(bj)
                .zip(&unplaced)
                .any(|((x, y), m)| (x ^ y) & m != 0)
            {
                return Ok(false);
            }
            let phi_i = self.hull_phi[vi].as_ref().expect("eligible vertex");
            let phi_j = self.hull_phi[vj].as_ref().expect("eligible vertex");
            let l1: u64 = phi_i
                .iter()
                .zip(phi_j)
                .map(|(a, b)| a.abs_diff(*b))
                .sum();
            if l1 != scope.hull_distance(vi, vj) as u64 {
                let c = self.window.complex();
                return Err(Error::EmbeddingVerification(format!(
                    "distance between {} and {} is {} but coordinates differ by {}",
                    c.describe_vertex(&scope.verts()[vi]),
                    c.describe_vertex(&scope.verts()[vj]),
                    scope.hull_distance(vi, vj),
                    l1
                )));
            }
            Ok(true)
        };
        let mut checked = 0usize;
        if eligible.len() * eligible.len() <= 4 * pair_budget {
            for (a, &vi) in eligible.iter().enumerate() {
                for &vj in &eligible[a + 1..] {
                    if check(vi, vj)? {
                        checked += 1;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..pair_budget {
                let vi = eligible[rng.gen_range(0..eligible.len())];
                let vj = eligible[rng.gen_range(0..eligible.len())];
                if vi != vj && check(vi, vj)? {
                    checked += 1;
                }
            }
        }
        if checked == 0 {
            return Err(Error::Internal(
                "no vertex pair admitted a distance check".into(),
            ));
        }
        Ok(())
    }

    /// The closed chain-0 interval piece is tightly nested link to link.
    pub fn verify_taut_chain(&self) -> Result<()> {
        let scope = self.window.scope();
        let ext = self.extended_taut();
        for t in 1..ext.len() {
            let big = self.window.halfspace(ext[t - 1]);
            let small = self.window.halfspace(ext[t]);
            if !scope.tightly_nested(big, small)? {
                let c = self.window.complex();
                return Err(Error::EmbeddingVerification(format!(
                    "{} and {} are nested but not tightly",
                    c.describe_halfspace(big),
                    c.describe_halfspace(small)
                )));
            }
        }
        Ok(())
    }

    /// Every post-construction check in one call.
    pub fn verify(&self, seed: u64) -> Result<()> {
        self.verify_unit_cube()?;
        self.verify_coherence(seed, 500)?;
        self.verify_equivariance()?;
        self.verify_isometry(seed, 20_000)?;
        self.verify_taut_chain()?;
        Ok(())
    }

    /// Occupancy of the quadrant cut off by the half-spaces at chain
    /// levels (i, n) and (j, m). Minimal hull vertices are the witness
    /// pool; a nested pair whose forbidden quadrant holds one comes
    /// back with `avoided: false`.
    pub fn quadrant_check(
        &self,
        i: usize,
        level_n: i64,
        j: usize,
        level_m: i64,
    ) -> Result<QuadrantResult> {
        if i == j {
            return Err(Error::Internal(
                "quadrants are cut by half-spaces on distinct chains".into(),
            ));
        }
        let n = self.window.len();
        let wh = self.chain_maps[i].get(&level_n).copied().ok_or(Error::NotInScope)?;
        let wk = self.chain_maps[j].get(&level_m).copied().ok_or(Error::NotInScope)?;
        let corner = (i, level_n, j, level_m);
        let case = match self.rels[wh * n + wk] {
            Relation::Transverse => {
                return Ok(QuadrantResult { case: QuadrantCase::Transverse, corner, avoided: true })
            }
            Relation::FirstContainsSecond => QuadrantCase::Northwest,
            Relation::SecondContainsFirst => QuadrantCase::Southeast,
            Relation::Equal => {
                return Err(Error::Internal(
                    "distinct window elements compare equal".into(),
                ))
            }
        };
        let mut avoided = true;
        for (vi, phi) in self.hull_phi.iter().enumerate() {
            if !self.minimal[vi] {
                continue;
            }
            let Some(phi) = phi else { continue };
            let hit = match case {
                QuadrantCase::Northwest => phi[i] <= level_n && phi[j] >= level_m + 1,
                QuadrantCase::Southeast => phi[i] >= level_n + 1 && phi[j] <= level_m,
                QuadrantCase::Transverse => unreachable!(),
            };
            if hit {
                avoided = false;
                break;
            }
        }
        Ok(QuadrantResult { case, corner, avoided })
    }

    /// Quadrant occupancy for every cross-chain pair of visible levels.
    pub fn quadrant_sweep(&self) -> Result<Vec<QuadrantResult>> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let levels_i: Vec<i64> = self.chain_maps[i].keys().copied().collect();
                let levels_j: Vec<i64> = self.chain_maps[j].keys().copied().collect();
                for &a in &levels_i {
                    for &b in &levels_j {
                        out.push(self.quadrant_check(i, a, j, b)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// For every tightly nested cross-chain pair well inside the window,
    /// the quotient must contain the two corner edges hugging the inner
    /// vertex of the nesting. Returns the number of pairs checked.
    pub fn elbow_sweep(&self) -> Result<usize> {
        let scope = self.window.scope();
        let c = self.window.complex();
        let n = self.window.len();
        // edges of the minimal part, bucketed by the slot of their wall
        let mut by_slot: HashMap<(usize, i64), Vec<&Vec<i64>>> = HashMap::new();
        for &(a, b, wall) in scope.edges() {
            let Some(w) = self.window_of_wall[wall] else { continue };
            if !(self.minimal[a] && self.minimal[b]) {
                continue;
            }
            let (Some(pa), Some(_)) = (&self.hull_phi[a], &self.hull_phi[b]) else {
                continue;
            };
            by_slot.entry(self.place[&w]).or_default().push(pa);
        }
        let mut checked = 0usize;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i == j {
                    continue;
                }
                for (&level_n, &wh) in &self.chain_maps[i] {
                    if !self.well_inside(wh) {
                        continue;
                    }
                    for (&level_m, &wk) in &self.chain_maps[j] {
                        if !self.well_inside(wk) {
                            continue;
                        }
                        if self.rels[wh * n + wk] != Relation::SecondContainsFirst {
                            continue;
                        }
                        let big = self.window.halfspace(wk);
                        let small = self.window.halfspace(wh);
                        if !scope.tightly_nested(big, small)? {
                            continue;
                        }
                        let vert = by_slot
                            .get(&(j, level_m))
                            .map_or(false, |es| es.iter().any(|p| p[i] == level_n));
                        let horiz = by_slot
                            .get(&(i, level_n))
                            .map_or(false, |es| es.iter().any(|p| p[j] == level_m + 1));
                        if !(vert && horiz) {
                            return Err(Error::EmbeddingVerification(format!(
                                "missing corner edges where {} sits tightly inside {}",
                                c.describe_halfspace(small),
                                c.describe_halfspace(big)
                            )));
                        }
                        checked += 1;
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Two tightly nested half-spaces off chain i that are both nested
    /// with a common chain-i half-space must point the same way around
    /// it. Returns the number of triples checked.
    pub fn sameway_sweep(&self) -> Result<usize> {
        let scope = self.window.scope();
        let n = self.window.len();
        let mut tight: Vec<(usize, usize)> = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && self.rels[a * n + b] == Relation::SecondContainsFirst {
                    let big = self.window.halfspace(b);
                    let small = self.window.halfspace(a);
                    if scope.tightly_nested(big, small)? {
                        tight.push((a, b));
                    }
                }
            }
        }
        let mut checked = 0usize;
        for &(ka, kb) in &tight {
            let (ca, _) = self.place[&ka];
            let (cb, _) = self.place[&kb];
            for i in 0..self.dim {
                if i == ca || i == cb {
                    continue;
                }
                for (_, &h) in &self.chain_maps[i] {
                    let da = match self.rels[h * n + ka] {
                        Relation::FirstContainsSecond => 1i8,
                        Relation::SecondContainsFirst => -1,
                        _ => 0,
                    };
                    let db = match self.rels[h * n + kb] {
                        Relation::FirstContainsSecond => 1i8,
                        Relation::SecondContainsFirst => -1,
                        _ => 0,
                    };
                    if da != 0 && db != 0 {
                        if da != db {
                            let c = self.window.complex();
                            return Err(Error::EmbeddingVerification(format!(
                                "nested pair through {} points both ways around {}",
                                c.describe_halfspace(self.window.halfspace(h)),
                                c.describe_halfspace(self.window.halfspace(ka))
                            )));
                        }
                        checked += 1;
                    }
                }
            }
        }
        Ok(checked)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::axis::{self, Window};
    use crate::euclid::EuclideanComplex;
    use crate::graph::DefiningGraph;
    use crate::raag::RaagComplex;

    fn family_of<C: CubeComplex>(wa: &axis::WindowAnalysis<'_, C>) -> Vec<C::H> {
        wa.antichain
            .iter()
            .map(|&i| wa.window.halfspace(i).clone())
            .collect()
    }

    #[test]
    fn pentagon_chain_structure() {
        let c = RaagComplex::new(DefiningGraph::cycle(5));
        let g = c.element("abcde").unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        assert!(wa.certified);
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let fam = family_of(&wa);
        let emb = Embedding::build(&win, &fam).unwrap();

        assert_eq!(emb.dim(), 2);
        assert_eq!(emb.sigma(), &[1, 0]);
        assert_eq!(emb.shifts(), &[2, 3]);
        let taut: Vec<String> = emb
            .taut_segment()
            .iter()
            .map(|&w| c.label(win.halfspace(w)))
            .collect();
        assert_eq!(taut, ["b", "d"]);
        let ext = emb.extended_taut();
        assert_eq!(ext.len(), 3);
        assert_eq!(c.label(win.halfspace(ext[2])), "a");
        assert_eq!(win.grade(ext[2]), 1);

        emb.verify(7).unwrap();
        let sweep = emb.quadrant_sweep().unwrap();
        assert!(!sweep.is_empty());
        assert!(sweep.iter().all(|q| q.avoided));
        assert!(sweep.iter().any(|q| q.case != QuadrantCase::Transverse));
        assert!(emb.sameway_sweep().unwrap() > 0);
    }

    #[test]
    fn staircase_chains_follow_one_direction() {
        let c = EuclideanComplex::fixture("staircase").unwrap();
        let g = c.automorphism().clone();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        assert!(wa.certified);
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();

        assert_eq!(emb.dim(), 2);
        assert_eq!(emb.sigma(), &[0, 1]);
        assert_eq!(emb.shifts(), &[2, 2]);
        // the leading chain holds parallel half-spaces, so one label
        let labels: Vec<String> = emb
            .taut_segment()
            .iter()
            .map(|&w| c.label(win.halfspace(w)))
            .collect();
        assert_eq!(labels.len(), 2);
        assert_eq!(labels[0], labels[1]);

        emb.verify(11).unwrap();
        let sweep = emb.quadrant_sweep().unwrap();
        assert!(sweep.iter().all(|q| q.avoided));
        assert!(sweep
            .iter()
            .any(|q| q.case == QuadrantCase::Southeast || q.case == QuadrantCase::Northwest));
        assert!(emb.elbow_sweep().unwrap() > 0);
    }

    #[test]
    fn free_group_has_one_chain() {
        let c = RaagComplex::new(DefiningGraph::free(2));
        let g = c.element("ab").unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        assert!(wa.certified);
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();

        assert_eq!(emb.dim(), 1);
        assert_eq!(emb.sigma(), &[0]);
        assert_eq!(emb.shifts(), &[2]);
        assert_eq!(emb.taut_segment().len(), 2);
        emb.verify(3).unwrap();
        assert!(emb.quadrant_sweep().unwrap().is_empty());
    }

    #[test]
    fn plane_translation_is_the_identity_grid() {
        let c = EuclideanComplex::fixture("glide-plane").unwrap();
        let a = c.automorphism().clone();
        let g = c.compose(&a, &a);
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        assert!(wa.certified);
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();

        assert_eq!(emb.dim(), 2);
        assert_eq!(emb.sigma(), &[0, 1]);
        assert_eq!(emb.shifts(), &[1, 1]);
        emb.verify(5).unwrap();
        // a full grid never nests distinct-direction walls
        let sweep = emb.quadrant_sweep().unwrap();
        assert!(sweep.iter().all(|q| q.case == QuadrantCase::Transverse));
        assert_eq!(emb.elbow_sweep().unwrap(), 0);
        assert_eq!(emb.sameway_sweep().unwrap(), 0);
    }

    #[test]
    fn coordinates_match_hull_values() {
        let c = EuclideanComplex::fixture("staircase").unwrap();
        let g = c.automorphism().clone();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();

        let scope = win.scope();
        let mut compared = 0;
        for (vi, v) in scope.verts().iter().enumerate() {
            if let Some(phi) = emb.hull_coordinates(vi) {
                let direct = emb.coordinates(v).unwrap();
                assert_eq!(direct.as_slice(), phi);
                compared += 1;
            }
        }
        assert!(compared > 0);
    }

    #[test]
    fn interval_relations_match_distance_oracle() {
        // every pair of interval half-spaces, compared against corner
        // witnesses found by raw distance comparisons over hull vertices
        let c = RaagComplex::new(DefiningGraph::cycle(5));
        let g = c.element("abcde").unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family_of(&wa)).unwrap();

        let scope = win.scope();
        let iv = emb.interval_indices().to_vec();
        let mut transverse = 0;
        for (p, &wi) in iv.iter().enumerate() {
            for &wj in &iv[p + 1..] {
                let (oi, ii) = scope.dual_edge(scope.oriented(win.halfspace(wi)).unwrap().0);
                let (oj, ij) = scope.dual_edge(scope.oriented(win.halfspace(wj)).unwrap().0);
                let mut corners = [false; 4];
                for v in scope.verts() {
                    let in_i = c.distance(v, ii) < c.distance(v, oi);
                    let in_j = c.distance(v, ij) < c.distance(v, oj);
                    corners[(in_i as usize) << 1 | in_j as usize] = true;
                }
                let oracle = match corners {
                    [true, true, true, true] => Relation::Transverse,
                    [true, false, true, true] => Relation::FirstContainsSecond,
                    [true, true, false, true] => Relation::SecondContainsFirst,
                    other => panic!("odd corner pattern {:?}", other),
                };
                assert_eq!(oracle, emb.relation_of(wi, wj));
                if oracle == Relation::Transverse {
                    transverse += 1;
                }
            }
        }
        // consecutive walls cross, everything further apart nests
        assert_eq!(transverse, 6);
    }

    #[test]
    fn level_grid_rejects_a_foreign_family() {
        let c = EuclideanComplex::fixture("staircase").unwrap();
        let g = c.automorphism().clone();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, 64).unwrap();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        // a single wall is not maximal in a two-dimensional window
        let fam = vec![wa.window.halfspace(wa.antichain[0]).clone()];
        assert!(matches!(
            Embedding::build(&win, &fam),
            Err(Error::EmbeddingVerification(_))
        ));
    }
}
