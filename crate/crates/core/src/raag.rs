use crate::complex::CubeComplex;
use crate::error::Error;
use crate::graph::{DefiningGraph, Gen, Letter};
use crate::word::NormalForm;
use crate::Result;
use std::collections::BTreeSet;

/// Half-space of the universal cover of a right-angled Artin group.
///
/// The underlying hyperplane is dual to the edge (w, w·u) where w is the
/// minimal-length representative of its coset w·⟨lk(u)⟩; this makes the
/// value canonical across all dual edges. `toward` selects the side
/// containing w·u.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RaagHalfSpace {
    witness: NormalForm,
    gen: Gen,
    toward: bool,
}

impl RaagHalfSpace {
    pub fn gen(&self) -> Gen {
        self.gen
    }

    pub fn witness(&self) -> &NormalForm {
        &self.witness
    }

    pub fn toward(&self) -> bool {
        self.toward
    }
}

/// The universal cover of the Salvetti complex of a defining graph, with
/// the group acting by left multiplication.
pub struct RaagComplex {
    graph: DefiningGraph,
}

impl RaagComplex {
    pub fn new(graph: DefiningGraph) -> Self {
        RaagComplex { graph }
    }

    pub fn graph(&self) -> &DefiningGraph {
        &self.graph
    }

    pub fn element(&self, text: &str) -> Result<NormalForm> {
        NormalForm::parse(&self.graph, text)
    }

    /// Canonical half-space dual to the edge (x, x·l), on the side of the
    /// far endpoint x·l.
    pub fn halfspace_of_edge(&self, x: &NormalForm, l: Letter) -> RaagHalfSpace {
        let (near, toward) = if l.inverse {
            (x.mul_letter(&self.graph, l), false)
        } else {
            (x.clone(), true)
        };
        let witness = near.coset_min_rep(&self.graph, self.graph.link(l.gen));
        RaagHalfSpace { witness, gen: l.gen, toward }
    }

    fn signed_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for g in self.graph.gens() {
            out.push(Letter { gen: g, inverse: false });
            out.push(Letter { gen: g, inverse: true });
        }
        out
    }

    /// Ball of the special subgroup on the generators of `mask`, by word
    /// length, capped by element count.
    fn subgroup_ball(&self, mask: u64, radius: usize, cap: usize) -> (Vec<NormalForm>, bool) {
        let letters: Vec<Letter> = self
            .graph
            .gens()
            .filter(|g| mask & 1 << g.index() != 0)
            .flat_map(|g| {
                [Letter { gen: g, inverse: false }, Letter { gen: g, inverse: true }]
            })
            .collect();
        let mut seen = BTreeSet::new();
        seen.insert(NormalForm::identity());
        let mut layer = vec![NormalForm::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in &layer {
                for &l in &letters {
                    let u = v.mul_letter(&self.graph, l);
                    if u.len() > v.len() && seen.insert(u.clone()) {
                        next.push(u);
                        if seen.len() >= cap {
                            return (seen.into_iter().collect(), false);
                        }
                    }
                }
            }
            if next.is_empty() {
                return (seen.into_iter().collect(), true);
            }
            layer = next;
        }
        let complete = letters.is_empty();
        (seen.into_iter().collect(), complete)
    }
}

impl CubeComplex for RaagComplex {
    type V = NormalForm;
    type H = RaagHalfSpace;
    type G = NormalForm;

    fn base_vertex(&self) -> NormalForm {
        NormalForm::identity()
    }

    fn is_vertex(&self, _v: &NormalForm) -> bool {
        true
    }

    fn neighbors(&self, v: &NormalForm) -> Vec<(NormalForm, RaagHalfSpace)> {
        self.signed_letters()
            .into_iter()
            .map(|l| (v.mul_letter(&self.graph, l), self.halfspace_of_edge(v, l)))
            .collect()
    }

    fn contains(&self, h: &RaagHalfSpace, v: &NormalForm) -> bool {
        let rel = h.witness.inverse(&self.graph).mul(&self.graph, v);
        let on_far_side = rel.has_first_letter(&self.graph, Letter::positive(h.gen));
        on_far_side == h.toward
    }

    fn complement(&self, h: &RaagHalfSpace) -> RaagHalfSpace {
        RaagHalfSpace { witness: h.witness.clone(), gen: h.gen, toward: !h.toward }
    }

    fn label(&self, h: &RaagHalfSpace) -> String {
        let c = self.graph.name(h.gen);
        if h.toward {
            c.to_string()
        } else {
            c.to_ascii_uppercase().to_string()
        }
    }

    fn act(&self, g: &NormalForm, v: &NormalForm) -> NormalForm {
        g.mul(&self.graph, v)
    }

    fn act_h(&self, g: &NormalForm, h: &RaagHalfSpace) -> RaagHalfSpace {
        let moved = g.mul(&self.graph, &h.witness);
        let witness = moved.coset_min_rep(&self.graph, self.graph.link(h.gen));
        RaagHalfSpace { witness, gen: h.gen, toward: h.toward }
    }

    fn identity(&self) -> NormalForm {
        NormalForm::identity()
    }

    fn compose(&self, a: &NormalForm, b: &NormalForm) -> NormalForm {
        a.mul(&self.graph, b)
    }

    fn invert(&self, g: &NormalForm) -> NormalForm {
        g.inverse(&self.graph)
    }

    fn power(&self, g: &NormalForm, n: i64) -> NormalForm {
        g.pow(&self.graph, n)
    }

    fn distance(&self, x: &NormalForm, y: &NormalForm) -> usize {
        x.inverse(&self.graph).mul(&self.graph, y).len()
    }

    fn axis(&self, g: &NormalForm) -> Result<(NormalForm, usize)> {
        if g.is_identity() {
            return Err(Error::Elliptic);
        }
        let (core, conj) = g.cyclically_reduce(&self.graph);
        Ok((conj, core.len()))
    }

    fn transporters(
        &self,
        from: &RaagHalfSpace,
        to: &RaagHalfSpace,
        radius: usize,
    ) -> (Vec<NormalForm>, bool) {
        if from.gen != to.gen || from.toward != to.toward {
            return (Vec::new(), true);
        }
        let mask = self.graph.link(from.gen);
        let (ball, complete) = self.subgroup_ball(mask, radius, 20_000);
        let from_inv = from.witness.inverse(&self.graph);
        let out = ball
            .into_iter()
            .map(|z| to.witness.mul(&self.graph, &z).mul(&self.graph, &from_inv))
            .collect();
        (out, complete)
    }

    fn is_tree_like(&self) -> bool {
        self.graph.is_tree_free()
    }

    fn is_raag(&self) -> bool {
        true
    }

    fn describe_vertex(&self, v: &NormalForm) -> String {
        v.format(&self.graph)
    }

    fn describe_halfspace(&self, h: &RaagHalfSpace) -> String {
        let sign = if h.toward { '+' } else { '-' };
        format!("{}{}@{}", self.graph.name(h.gen), sign, h.witness.format(&self.graph))
    }

    fn describe_g(&self, g: &NormalForm) -> String {
        g.format(&self.graph)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ball(x: &RaagComplex, radius: usize) -> Vec<NormalForm> {
        let mut seen = BTreeSet::new();
        seen.insert(NormalForm::identity());
        let mut layer = vec![NormalForm::identity()];
        for _ in 0..radius {
            let mut next = Vec::new();
            for v in &layer {
                for (u, _) in x.neighbors(v) {
                    if seen.insert(u.clone()) {
                        next.push(u);
                    }
                }
            }
            layer = next;
        }
        seen.into_iter().collect()
    }

    #[test]
    fn neighbor_counts() {
        let f2 = RaagComplex::new(DefiningGraph::free(2));
        assert_eq!(f2.neighbors(&f2.base_vertex()).len(), 4);
        let pent = RaagComplex::new(DefiningGraph::cycle(5));
        let v = pent.element("caB").unwrap();
        assert_eq!(pent.neighbors(&v).len(), 10);
    }

    #[test]
    fn edge_sides() {
        let pent = RaagComplex::new(DefiningGraph::cycle(5));
        for v in ball(&pent, 2) {
            for (u, h) in pent.neighbors(&v) {
                assert!(pent.contains(&h, &u));
                assert!(!pent.contains(&h, &v));
                assert!(pent.contains(&pent.complement(&h), &v));
                assert_eq!(pent.complement(&pent.complement(&h)), h);
            }
        }
    }

    #[test]
    fn squares_glue_to_one_halfspace() {
        let pent = RaagComplex::new(DefiningGraph::cycle(5));
        let graph = pent.graph().clone();
        let letters: Vec<Letter> = graph
            .gens()
            .flat_map(|g| [Letter { gen: g, inverse: false }, Letter { gen: g, inverse: true }])
            .collect();
        let mut squares = 0;
        for v in ball(&pent, 2) {
            for &l1 in &letters {
                for &l2 in &letters {
                    if l1.gen == l2.gen || !graph.adjacent(l1.gen, l2.gen) {
                        continue;
                    }
                    let across = v.mul_letter(&graph, l2);
                    assert_eq!(
                        pent.halfspace_of_edge(&v, l1),
                        pent.halfspace_of_edge(&across, l1)
                    );
                    squares += 1;
                }
            }
        }
        assert!(squares > 100);
    }

    #[test]
    fn membership_flips_only_at_dual_wall() {
        let x = RaagComplex::new(DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap());
        let vertices = ball(&x, 2);
        let mut walls = BTreeSet::new();
        for v in &vertices {
            for (_, h) in x.neighbors(v) {
                walls.insert(h);
            }
        }
        for v in &vertices {
            for (u, h) in x.neighbors(v) {
                for k in &walls {
                    let flips = x.contains(k, v) != x.contains(k, &u);
                    let dual = *k == h || *k == x.complement(&h);
                    assert_eq!(flips, dual, "wall {k:?} across edge {v:?}-{u:?}");
                }
            }
        }
    }

    #[test]
    fn action_commutes_with_membership() {
        let pent = RaagComplex::new(DefiningGraph::cycle(5));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let vertices = ball(&pent, 2);
        for _ in 0..100 {
            let g = &vertices[rng.gen_range(0..vertices.len())];
            let v = &vertices[rng.gen_range(0..vertices.len())];
            let w = &vertices[rng.gen_range(0..vertices.len())];
            let (_, h) = &pent.neighbors(w)[rng.gen_range(0..10)];
            assert_eq!(
                pent.contains(&pent.act_h(g, h), &pent.act(g, v)),
                pent.contains(h, v)
            );
        }
    }

    #[test]
    fn axis_data() {
        let pent = RaagComplex::new(DefiningGraph::cycle(5));
        let g = pent.element("cabcdeC").unwrap();
        let (base, ell) = pent.axis(&g).unwrap();
        assert_eq!(ell, 5);
        assert_eq!(pent.distance(&base, &pent.act(&g, &base)), 5);
        assert!(matches!(pent.axis(&pent.identity()), Err(Error::Elliptic)));
    }

    #[test]
    fn transporters_move_halfspaces() {
        let f2 = RaagComplex::new(DefiningGraph::free(2));
        let a = f2.graph().parse_letters("a").unwrap()[0];
        let h0 = f2.halfspace_of_edge(&f2.base_vertex(), a);
        let g = f2.element("ab").unwrap();
        let h1 = f2.act_h(&g, &h0);
        let (cands, complete) = f2.transporters(&h0, &h1, 4);
        assert!(complete);
        assert_eq!(cands.len(), 1);
        assert_eq!(f2.act_h(&cands[0], &h0), h1);

        let pent = RaagComplex::new(DefiningGraph::cycle(5));
        let ha = pent.halfspace_of_edge(&pent.base_vertex(), a);
        let g5 = pent.element("abcde").unwrap();
        let target = pent.act_h(&g5, &ha);
        let (cands, complete) = pent.transporters(&ha, &target, 6);
        assert!(!complete);
        assert!(cands.iter().any(|h| *h == g5 || pent.act_h(h, &ha) == target));
        let (none, sure) = pent.transporters(&ha, &pent.complement(&ha), 6);
        assert!(none.is_empty() && sure);
    }
}
