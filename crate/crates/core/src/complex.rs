use crate::Result;
use std::fmt::Debug;
use std::hash::Hash;

/// Uniform contract over cube-complex backends.
///
/// Vertices and half-spaces are canonical values: two dual oriented edges
/// of one half-space must produce equal `H` values, and
/// `complement(complement(h)) = h`.  All queries are pure; backends are
/// immutable after construction.
pub trait CubeComplex {
    type V: Clone + Eq + Ord + Hash + Debug;
    type H: Clone + Eq + Ord + Hash + Debug;
    type G: Clone + Eq + Debug;

    /// A distinguished vertex, used as the default basepoint.
    fn base_vertex(&self) -> Self::V;

    /// Whether the value denotes a vertex of this complex. Relevant for
    /// subcomplex backends whose coordinate space is larger than the
    /// retained vertex set.
    fn is_vertex(&self, v: &Self::V) -> bool;

    /// Incident edges as (far endpoint, half-space containing the far
    /// endpoint).
    fn neighbors(&self, v: &Self::V) -> Vec<(Self::V, Self::H)>;

    fn contains(&self, h: &Self::H, v: &Self::V) -> bool;

    fn complement(&self, h: &Self::H) -> Self::H;

    /// Orbit label of the underlying hyperplane plus orientation.
    /// Invariant under `act_h`; used for pruning and display only.
    fn label(&self, h: &Self::H) -> String;

    fn act(&self, g: &Self::G, v: &Self::V) -> Self::V;

    fn act_h(&self, g: &Self::G, h: &Self::H) -> Self::H;

    fn identity(&self) -> Self::G;

    fn compose(&self, a: &Self::G, b: &Self::G) -> Self::G;

    fn invert(&self, g: &Self::G) -> Self::G;

    fn power(&self, g: &Self::G, n: i64) -> Self::G {
        let base = if n < 0 { self.invert(g) } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.compose(&acc, &base);
        }
        acc
    }

    fn distance(&self, x: &Self::V, y: &Self::V) -> usize;

    /// Minimal displacement data: a vertex realizing min d(v, gv) together
    /// with that minimum. Errors on elliptic or identity input when a
    /// positive translation length is required downstream.
    fn axis(&self, g: &Self::G) -> Result<(Self::V, usize)>;

    /// Candidate automorphisms h with act_h(h, from) = to, plus a flag for
    /// whether the enumeration is provably complete. `radius` bounds the
    /// search where the stabilizer of `from` is infinite.
    fn transporters(
        &self,
        from: &Self::H,
        to: &Self::H,
        radius: usize,
    ) -> (Vec<Self::G>, bool);

    /// Defining graph has no edges (or the complex is a tree); tighter
    /// defect constants apply.
    fn is_tree_like(&self) -> bool;

    /// Universal cover of a right-angled Artin group; the gap theorem's
    /// conclusions are unconditional here.
    fn is_raag(&self) -> bool;

    fn describe_vertex(&self, v: &Self::V) -> String;

    fn describe_halfspace(&self, h: &Self::H) -> String;

    fn describe_g(&self, g: &Self::G) -> String;
}
