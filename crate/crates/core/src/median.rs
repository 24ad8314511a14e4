use crate::complex::CubeComplex;
use crate::error::Error;
use crate::Result;
use std::collections::HashMap;

/// How two half-spaces sit relative to each other, both taken with the
/// orientation in which they were passed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Equal,
    FirstContainsSecond,
    SecondContainsFirst,
    Transverse,
}

const DEFAULT_HULL_CAP: usize = 1_000_000;

pub fn distance<C: CubeComplex>(c: &C, x: &C::V, y: &C::V) -> usize {
    c.distance(x, y)
}

/// One geodesic from x to y as a list of (from, to, crossed half-space)
/// steps, the half-space containing `to` and everything after it.
pub fn geodesic<C: CubeComplex>(c: &C, x: &C::V, y: &C::V) -> Vec<(C::V, C::V, C::H)> {
    let mut out = Vec::new();
    let mut v = x.clone();
    let mut remaining = c.distance(&v, y);
    while remaining > 0 {
        let step = c
            .neighbors(&v)
            .into_iter()
            .find(|(u, _)| c.distance(u, y) < remaining)
            .expect("positive distance admits a closer neighbor");
        out.push((v.clone(), step.0.clone(), step.1));
        v = step.0;
        remaining -= 1;
    }
    out
}

/// The half-spaces separating x from y, oriented with y inside, in
/// crossing order along one geodesic.
pub fn interval<C: CubeComplex>(c: &C, x: &C::V, y: &C::V) -> Vec<C::H> {
    geodesic(c, x, y).into_iter().map(|(_, _, h)| h).collect()
}

/// The median vertex: walk from x while strictly approaching both y and z.
pub fn median<C: CubeComplex>(c: &C, x: &C::V, y: &C::V, z: &C::V) -> C::V {
    let mut v = x.clone();
    let mut dy = c.distance(&v, y);
    let mut dz = c.distance(&v, z);
    loop {
        let step = c
            .neighbors(&v)
            .into_iter()
            .find(|(u, _)| c.distance(u, y) < dy && c.distance(u, z) < dz);
        match step {
            Some((u, _)) => {
                v = u;
                dy -= 1;
                dz -= 1;
            }
            None => return v,
        }
    }
}

pub fn in_hull<C: CubeComplex>(c: &C, z: &C::V, x: &C::V, y: &C::V) -> bool {
    c.is_vertex(z) && c.distance(x, z) + c.distance(z, y) == c.distance(x, y)
}

/// Whether v lies on the `inn` side of the wall dual to the edge
/// (out, inn). The two distances always differ by exactly one.
pub fn on_side<C: CubeComplex>(c: &C, v: &C::V, out: &C::V, inn: &C::V) -> bool {
    c.distance(v, inn) < c.distance(v, out)
}

/// Nearest vertex to v inside the half-space containing `inn`, found by
/// convex descent from `inn`. Half-spaces are convex, so a greedy step
/// toward v that stays inside always exists until the projection is
/// reached.
pub fn gate<C: CubeComplex>(c: &C, v: &C::V, out: &C::V, inn: &C::V) -> C::V {
    if on_side(c, v, out, inn) {
        return v.clone();
    }
    let mut cur = inn.clone();
    let mut dist = c.distance(v, &cur);
    loop {
        let step = c
            .neighbors(&cur)
            .into_iter()
            .find(|(u, _)| on_side(c, u, out, inn) && c.distance(v, u) < dist);
        match step {
            Some((u, _)) => {
                cur = u;
                dist -= 1;
            }
            None => return cur,
        }
    }
}

/// Whether the half-spaces given by two dual edges intersect. The
/// projection of a point of the first onto the second crosses only
/// walls separating the point from the whole target, so it stays inside
/// the first exactly when the two sides meet.
pub fn sides_meet<C: CubeComplex>(c: &C, a: (&C::V, &C::V), b: (&C::V, &C::V)) -> bool {
    let gb = gate(c, a.1, b.0, b.1);
    on_side(c, &gb, a.0, a.1)
}

/// Relation of the half-spaces named by two dual edges, decided purely
/// from distance comparisons and convex projections. Covers the two
/// configurations a common scope never produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideRelation {
    Equal,
    Opposite,
    FirstContainsSecond,
    SecondContainsFirst,
    /// The sides are disjoint; each lies in the complement of the other.
    Disjoint,
    /// The sides jointly cover everything; the complements are disjoint.
    Codisjoint,
    Transverse,
}

pub fn edge_relation<C: CubeComplex>(
    c: &C,
    a: (&C::V, &C::V),
    b: (&C::V, &C::V),
) -> Result<SideRelation> {
    let pp = sides_meet(c, a, b);
    let pn = sides_meet(c, a, (b.1, b.0));
    let np = sides_meet(c, (a.1, a.0), b);
    let nn = sides_meet(c, (a.1, a.0), (b.1, b.0));
    Ok(match (pp, pn, np, nn) {
        (true, true, true, true) => SideRelation::Transverse,
        (true, false, false, true) => SideRelation::Equal,
        (false, true, true, false) => SideRelation::Opposite,
        (true, true, false, true) => SideRelation::FirstContainsSecond,
        (true, false, true, true) => SideRelation::SecondContainsFirst,
        (false, true, true, true) => SideRelation::Disjoint,
        (true, true, true, false) => SideRelation::Codisjoint,
        other => {
            return Err(Error::Internal(format!(
                "impossible side pattern {other:?}: an edge witnesses each side"
            )))
        }
    })
}

/// The interval hull of [x, y] with all membership data precomputed.
///
/// Every vertex carries a bitset over the scope's walls; every wall
/// carries a bitset over the hull's vertices. Relations between walls are
/// decided by corner scans over the hull, which agree with the relations
/// in the whole complex because a witness anywhere projects to one in the
/// hull through the gate map.
pub struct Scope<'c, C: CubeComplex> {
    complex: &'c C,
    x: C::V,
    y: C::V,
    walls: Vec<C::H>,
    wall_idx: HashMap<C::H, usize>,
    dual_edges: Vec<(C::V, C::V)>,
    verts: Vec<C::V>,
    vert_idx: HashMap<C::V, usize>,
    vert_bits: Vec<Vec<u64>>,
    cols: Vec<Vec<u64>>,
    edges: Vec<(usize, usize, usize)>,
}

fn get_bit(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

fn set_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1 << (i % 64);
}

fn clear_bit(bits: &mut [u64], i: usize) {
    bits[i / 64] &= !(1 << (i % 64));
}

impl<'c, C: CubeComplex> Scope<'c, C> {
    pub fn new(complex: &'c C, x: &C::V, y: &C::V) -> Result<Self> {
        Scope::with_cap(complex, x, y, DEFAULT_HULL_CAP)
    }

    pub fn with_cap(complex: &'c C, x: &C::V, y: &C::V, cap: usize) -> Result<Self> {
        let steps = geodesic(complex, x, y);
        let mut walls = Vec::with_capacity(steps.len());
        let mut dual_edges = Vec::with_capacity(steps.len());
        let mut wall_idx = HashMap::new();
        for (from, to, h) in steps {
            if wall_idx.insert(h.clone(), walls.len()).is_some() {
                return Err(Error::Internal(format!(
                    "geodesic crossed wall {h:?} twice"
                )));
            }
            walls.push(h);
            dual_edges.push((from, to));
        }
        let n = walls.len();
        let words = n.div_ceil(64);

        let mut verts = vec![x.clone()];
        let mut vert_idx = HashMap::new();
        vert_idx.insert(x.clone(), 0);
        let mut vert_bits = vec![vec![0u64; words]];
        let mut edges = Vec::new();
        let mut head = 0;
        while head < verts.len() {
            let v = verts[head].clone();
            let bits = vert_bits[head].clone();
            for (u, h) in complex.neighbors(&v) {
                let (wall, entering) = match wall_idx.get(&h) {
                    Some(&i) => (i, true),
                    None => match wall_idx.get(&complex.complement(&h)) {
                        Some(&i) => (i, false),
                        None => continue,
                    },
                };
                if get_bit(&bits, wall) == entering {
                    return Err(Error::Internal(format!(
                        "membership bit disagrees with edge crossing at wall {wall}"
                    )));
                }
                let mut via = bits.clone();
                if entering {
                    set_bit(&mut via, wall);
                } else {
                    clear_bit(&mut via, wall);
                }
                let ui = match vert_idx.get(&u) {
                    Some(&i) => i,
                    None => {
                        if verts.len() >= cap {
                            return Err(Error::HullCapExceeded { cap });
                        }
                        let i = verts.len();
                        verts.push(u.clone());
                        vert_idx.insert(u, i);
                        vert_bits.push(via);
                        i
                    }
                };
                if entering {
                    edges.push((head, ui, wall));
                }
            }
            head += 1;
        }

        let yi = *vert_idx
            .get(y)
            .ok_or_else(|| Error::Internal("hull walk never reached endpoint".into()))?;
        if (0..n).any(|i| !get_bit(&vert_bits[yi], i)) {
            return Err(Error::Internal("endpoint outside some scope wall".into()));
        }

        let vwords = verts.len().div_ceil(64);
        let mut cols = vec![vec![0u64; vwords]; n];
        for (vi, bits) in vert_bits.iter().enumerate() {
            for (w, col) in cols.iter_mut().enumerate() {
                if get_bit(bits, w) {
                    set_bit(col, vi);
                }
            }
        }

        Ok(Scope {
            complex,
            x: x.clone(),
            y: y.clone(),
            walls,
            wall_idx,
            dual_edges,
            verts,
            vert_idx,
            vert_bits,
            cols,
            edges,
        })
    }

    pub fn complex(&self) -> &'c C {
        self.complex
    }

    pub fn endpoints(&self) -> (&C::V, &C::V) {
        (&self.x, &self.y)
    }

    pub fn walls(&self) -> &[C::H] {
        &self.walls
    }

    pub fn wall_count(&self) -> usize {
        self.walls.len()
    }

    pub fn verts(&self) -> &[C::V] {
        &self.verts
    }

    /// Hull edges as (outside vertex, inside vertex, wall index).
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    /// The geodesic edge recorded for a wall, (outside, inside).
    pub fn dual_edge(&self, wall: usize) -> &(C::V, C::V) {
        &self.dual_edges[wall]
    }

    pub fn vertex_index(&self, v: &C::V) -> Option<usize> {
        self.vert_idx.get(v).copied()
    }

    /// Wall index plus whether the passed value is the complement of the
    /// stored (endpoint-inside) orientation.
    pub fn lookup(&self, h: &C::H) -> Option<(usize, bool)> {
        if let Some(&i) = self.wall_idx.get(h) {
            return Some((i, false));
        }
        self.wall_idx.get(&self.complex.complement(h)).map(|&i| (i, true))
    }

    pub fn oriented(&self, h: &C::H) -> Result<(usize, bool)> {
        self.lookup(h).ok_or(Error::NotInScope)
    }

    pub fn vertex_in(&self, wall: usize, flipped: bool, vi: usize) -> bool {
        get_bit(&self.vert_bits[vi], wall) != flipped
    }

    pub fn member_bits(&self, vi: usize) -> &[u64] {
        &self.vert_bits[vi]
    }

    pub fn hull_distance(&self, vi: usize, vj: usize) -> usize {
        self.vert_bits[vi]
            .iter()
            .zip(&self.vert_bits[vj])
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// True when some hull vertex lies on side `side_a` of wall a and side
    /// `side_b` of wall b, sides taken after unflipping.
    fn corner_nonempty(
        &self,
        a: (usize, bool),
        side_a: bool,
        b: (usize, bool),
        side_b: bool,
    ) -> bool {
        let pos_a = side_a != a.1;
        let pos_b = side_b != b.1;
        let ca = &self.cols[a.0];
        let cb = &self.cols[b.0];
        let nverts = self.verts.len();
        for w in 0..ca.len() {
            let wa = if pos_a { ca[w] } else { !ca[w] };
            let wb = if pos_b { cb[w] } else { !cb[w] };
            let mut hit = wa & wb;
            if (w + 1) * 64 > nverts {
                let valid = nverts - w * 64;
                if valid < 64 {
                    hit &= (1u64 << valid) - 1;
                }
            }
            if hit != 0 {
                return true;
            }
        }
        false
    }

    fn relation_oriented(&self, a: (usize, bool), b: (usize, bool)) -> Result<Relation> {
        let first_minus_second = self.corner_nonempty(a, true, b, false);
        let second_minus_first = self.corner_nonempty(a, false, b, true);
        match (first_minus_second, second_minus_first) {
            (false, false) => Ok(Relation::Equal),
            (true, false) => Ok(Relation::FirstContainsSecond),
            (false, true) => Ok(Relation::SecondContainsFirst),
            (true, true) => {
                if self.corner_nonempty(a, true, b, true)
                    && self.corner_nonempty(a, false, b, false)
                {
                    Ok(Relation::Transverse)
                } else {
                    Err(Error::Internal(
                        "complementary-oriented pair has no relation".into(),
                    ))
                }
            }
        }
    }

    /// Relation between two scope walls (either orientation), answered for
    /// the orientations as passed. Exact for the whole complex.
    pub fn relation(&self, h: &C::H, k: &C::H) -> Result<Relation> {
        let a = self.oriented(h)?;
        let b = self.oriented(k)?;
        self.relation_oriented(a, b)
    }

    /// h ⊃ k with no third scope wall strictly between them.
    pub fn tightly_nested(&self, h: &C::H, k: &C::H) -> Result<bool> {
        let a = self.oriented(h)?;
        let b = self.oriented(k)?;
        if self.relation_oriented(a, b)? != Relation::FirstContainsSecond {
            return Err(Error::Internal(
                "tight nesting queried on a non-nested pair".into(),
            ));
        }
        for m in 0..self.walls.len() {
            for flip in [false, true] {
                let mid = (m, flip);
                if mid == a || mid == b {
                    continue;
                }
                let under_h = !self.corner_nonempty(mid, true, a, false);
                let over_k = !self.corner_nonempty(b, true, mid, false);
                if under_h && over_k {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}
