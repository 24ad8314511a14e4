use crate::graph::{DefiningGraph, Letter};
use crate::Result;
use std::cmp::Ordering;

/// Shortlex-minimal reduced word for a group element, under the fixed
/// generator order with positive letters before negative ones.
///
/// Normalization first removes every cancelling pair reachable by
/// commutations (a single stack pass suffices), then repeatedly extracts
/// the least available first letter.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct NormalForm {
    letters: Vec<Letter>,
}

/// Reduce by a left-to-right stack pass. Invariant: the stack holds a
/// reduced word after every push.
fn reduce_push(graph: &DefiningGraph, letters: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::with_capacity(letters.len());
    'next: for &l in letters {
        let mut k = stack.len();
        while k > 0 {
            let t = stack[k - 1];
            if t.gen == l.gen {
                if t.inverse != l.inverse {
                    stack.remove(k - 1);
                    continue 'next;
                }
                break;
            }
            if !graph.adjacent(t.gen, l.gen) {
                break;
            }
            k -= 1;
        }
        stack.push(l);
    }
    stack
}

/// Greedy shortlex extraction from a reduced word. Removing a first-letter
/// occurrence keeps the rest reduced, so the loop is sound.
fn shortlex(graph: &DefiningGraph, mut v: Vec<Letter>) -> Vec<Letter> {
    let mut out = Vec::with_capacity(v.len());
    while !v.is_empty() {
        let mut best: Option<(usize, Letter)> = None;
        let mut seen = 0u64;
        for (i, &l) in v.iter().enumerate() {
            if graph.mask_in_link(seen, l.gen) && best.map_or(true, |(_, b)| l < b) {
                best = Some((i, l));
            }
            seen |= 1 << l.gen.index();
        }
        let (i, l) = best.expect("nonempty reduced word has a first letter");
        v.remove(i);
        out.push(l);
    }
    out
}

impl NormalForm {
    pub fn identity() -> Self {
        NormalForm { letters: Vec::new() }
    }

    pub fn new(graph: &DefiningGraph, letters: &[Letter]) -> Self {
        NormalForm { letters: shortlex(graph, reduce_push(graph, letters)) }
    }

    pub fn parse(graph: &DefiningGraph, text: &str) -> Result<Self> {
        Ok(NormalForm::new(graph, &graph.parse_letters(text)?))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, graph: &DefiningGraph, rhs: &NormalForm) -> NormalForm {
        let mut joined = Vec::with_capacity(self.len() + rhs.len());
        joined.extend_from_slice(&self.letters);
        joined.extend_from_slice(&rhs.letters);
        NormalForm::new(graph, &joined)
    }

    pub fn mul_letter(&self, graph: &DefiningGraph, l: Letter) -> NormalForm {
        let mut joined = Vec::with_capacity(self.len() + 1);
        joined.extend_from_slice(&self.letters);
        joined.push(l);
        NormalForm::new(graph, &joined)
    }

    pub fn inverse(&self, graph: &DefiningGraph) -> NormalForm {
        let flipped: Vec<Letter> =
            self.letters.iter().rev().map(|l| l.inverted()).collect();
        NormalForm { letters: shortlex(graph, flipped) }
    }

    pub fn pow(&self, graph: &DefiningGraph, n: i64) -> NormalForm {
        let base = if n < 0 { self.inverse(graph) } else { self.clone() };
        let mut acc = NormalForm::identity();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(graph, &base);
        }
        acc
    }

    /// Generators occurring in the word, as a bitmask.
    pub fn support(&self) -> u64 {
        self.letters.iter().fold(0, |m, l| m | 1 << l.gen.index())
    }

    /// Letters that can start some reduced word for this element.
    pub fn first_letters(&self, graph: &DefiningGraph) -> Vec<Letter> {
        let mut out = Vec::new();
        let mut seen = 0u64;
        for &l in &self.letters {
            if graph.mask_in_link(seen, l.gen) {
                out.push(l);
            }
            seen |= 1 << l.gen.index();
        }
        out.sort();
        out
    }

    pub fn has_first_letter(&self, graph: &DefiningGraph, want: Letter) -> bool {
        let mut seen = 0u64;
        for &l in &self.letters {
            if l == want && graph.mask_in_link(seen, l.gen) {
                return true;
            }
            seen |= 1 << l.gen.index();
        }
        false
    }

    /// Remove the maximal prefix lying in the subgroup generated by the
    /// generators of `mask`.
    pub fn strip_leading_in(&self, graph: &DefiningGraph, mask: u64) -> NormalForm {
        let mut v = self.letters.clone();
        loop {
            let mut seen = 0u64;
            let mut hit = None;
            for (i, &l) in v.iter().enumerate() {
                if mask & 1 << l.gen.index() != 0 && graph.mask_in_link(seen, l.gen) {
                    hit = Some(i);
                    break;
                }
                seen |= 1 << l.gen.index();
            }
            match hit {
                Some(i) => {
                    v.remove(i);
                }
                None => return NormalForm { letters: shortlex(graph, v) },
            }
        }
    }

    /// Minimal-length representative of the right coset self·⟨mask⟩.
    pub fn coset_min_rep(&self, graph: &DefiningGraph, mask: u64) -> NormalForm {
        self.inverse(graph).strip_leading_in(graph, mask).inverse(graph)
    }

    /// Decompose as conj · core · conj⁻¹ with core of minimal length,
    /// peeling the least cancelling first letter at each step.
    pub fn cyclically_reduce(&self, graph: &DefiningGraph) -> (NormalForm, NormalForm) {
        let mut core = self.clone();
        let mut conj = NormalForm::identity();
        loop {
            if core.len() < 2 {
                return (core, conj);
            }
            let lasts: Vec<Letter> = core
                .inverse(graph)
                .first_letters(graph)
                .into_iter()
                .map(|l| l.inverted())
                .collect();
            let peel = core
                .first_letters(graph)
                .into_iter()
                .find(|&l| lasts.contains(&l.inverted()));
            match peel {
                Some(l) => {
                    let single = NormalForm { letters: vec![l] };
                    core = single
                        .inverse(graph)
                        .mul(graph, &core)
                        .mul(graph, &single);
                    conj = conj.mul_letter(graph, l);
                }
                None => return (core, conj),
            }
        }
    }

    /// Length of the cyclically reduced core; the translation length of
    /// the element on the universal cover.
    pub fn translation_length(&self, graph: &DefiningGraph) -> usize {
        self.cyclically_reduce(graph).0.len()
    }

    pub fn format(&self, graph: &DefiningGraph) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        graph.format_letters(&self.letters)
    }
}

impl PartialOrd for NormalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for NormalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.letters.cmp(&other.letters))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> DefiningGraph {
        DefiningGraph::new(&["a", "b", "c"], &[("b", "c")]).unwrap()
    }

    fn parse(g: &DefiningGraph, s: &str) -> NormalForm {
        NormalForm::parse(g, s).unwrap()
    }

    #[test]
    fn commuting_cancellation() {
        let g = path3();
        assert_eq!(parse(&g, "acbC").format(&g), "ab");
        assert_eq!(parse(&g, "aA").format(&g), "1");
        assert_eq!(parse(&g, "cb").format(&g), "bc");
        assert_eq!(parse(&g, "bCBc").format(&g), "1");
    }

    #[test]
    fn normalize_is_idempotent() {
        let g = DefiningGraph::cycle(5);
        for text in ["abcde", "eaEBd", "cabcdeC", "aBBe", "dAdA"] {
            let w = parse(&g, text);
            assert_eq!(NormalForm::new(&g, w.letters()), w);
        }
    }

    #[test]
    fn mul_and_inverse() {
        let g = path3();
        let w = parse(&g, "abcB");
        assert!(w.mul(&g, &w.inverse(&g)).is_identity());
        assert_eq!(w.inverse(&g).inverse(&g), w);
        let x = parse(&g, "ab");
        let y = parse(&g, "Ba");
        assert_eq!(x.mul(&g, &y), parse(&g, "aa"));
        assert_eq!(x.pow(&g, 0), NormalForm::identity());
        assert_eq!(x.pow(&g, -1), x.inverse(&g));
    }

    #[test]
    fn first_letters_pentagon() {
        let g = DefiningGraph::cycle(5);
        let w = parse(&g, "bad");
        let firsts = w.first_letters(&g);
        let shown: Vec<String> =
            firsts.iter().map(|&l| g.format_letters(&[l])).collect();
        assert_eq!(shown, ["a", "b"]);
        assert!(w.has_first_letter(&g, g.parse_letters("a").unwrap()[0]));
        assert!(!w.has_first_letter(&g, g.parse_letters("d").unwrap()[0]));
    }

    #[test]
    fn strip_and_coset_rep() {
        let g = DefiningGraph::cycle(5);
        let lk_c = g.link(g.gen_by_name('c').unwrap());
        let w = parse(&g, "bdaC");
        let stripped = w.strip_leading_in(&g, lk_c);
        assert_eq!(stripped.format(&g), "aC");
        let rep = parse(&g, "abd").coset_min_rep(&g, lk_c);
        assert_eq!(rep.format(&g), "a");
    }

    #[test]
    fn cyclic_reduction() {
        let g = DefiningGraph::cycle(5);
        let w = parse(&g, "cabcdeC");
        let (core, conj) = w.cyclically_reduce(&g);
        assert_eq!(core.format(&g), "abcde");
        assert_eq!(conj.format(&g), "c");
        let recomposed = conj.mul(&g, &core).mul(&g, &conj.inverse(&g));
        assert_eq!(recomposed, w);
        assert_eq!(w.translation_length(&g), 5);
        assert_eq!(NormalForm::identity().translation_length(&g), 0);
        let free = DefiningGraph::free(2);
        assert_eq!(parse(&free, "ab").translation_length(&free), 2);
    }

    #[test]
    fn power_lengths_scale() {
        let g = DefiningGraph::cycle(5);
        let w = parse(&g, "abcde");
        for n in 1..=5 {
            assert_eq!(w.pow(&g, n).translation_length(&g), 5 * n as usize);
        }
        let free = DefiningGraph::free(2);
        let v = parse(&free, "aB");
        for n in 1..=5 {
            assert_eq!(v.pow(&free, n).translation_length(&free), 2 * n as usize);
        }
    }

    #[test]
    fn shortlex_order() {
        let g = path3();
        assert!(parse(&g, "a") < parse(&g, "ab"));
        assert!(parse(&g, "ab") < parse(&g, "aB"));
        assert!(parse(&g, "aB") < parse(&g, "ba"));
    }
}
