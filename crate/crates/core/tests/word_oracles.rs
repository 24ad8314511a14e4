//! Cross-checks of the normal form against brute-force rewriting.
//!
//! The oracle knows nothing about the production algorithm: it closes a
//! word under adjacent commuting swaps and cancellation of adjacent
//! inverse pairs, then reads answers off the reachable set.

use cubescl::graph::{DefiningGraph, Letter};
use cubescl::word::NormalForm;
use std::collections::BTreeSet;

fn all_letters(graph: &DefiningGraph) -> Vec<Letter> {
    let mut out = Vec::new();
    for g in graph.gens() {
        out.push(Letter { gen: g, inverse: false });
        out.push(Letter { gen: g, inverse: true });
    }
    out
}

fn one_step(graph: &DefiningGraph, w: &[Letter]) -> Vec<Vec<Letter>> {
    let mut out = Vec::new();
    for i in 0..w.len().saturating_sub(1) {
        if w[i].is_inverse_of(w[i + 1]) {
            let mut v = w.to_vec();
            v.drain(i..=i + 1);
            out.push(v);
        }
        if w[i].gen != w[i + 1].gen && graph.adjacent(w[i].gen, w[i + 1].gen) {
            let mut v = w.to_vec();
            v.swap(i, i + 1);
            out.push(v);
        }
    }
    out
}

fn reachable(graph: &DefiningGraph, w: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut seen = BTreeSet::new();
    let mut todo = vec![w.to_vec()];
    while let Some(v) = todo.pop() {
        if seen.insert(v.clone()) {
            todo.extend(one_step(graph, &v));
        }
    }
    seen
}

fn oracle_canonical(graph: &DefiningGraph, w: &[Letter]) -> Vec<Letter> {
    reachable(graph, w)
        .into_iter()
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .unwrap()
}

fn oracle_first_letters(graph: &DefiningGraph, w: &[Letter]) -> BTreeSet<Letter> {
    let set = reachable(graph, w);
    let min = set.iter().map(|v| v.len()).min().unwrap();
    set.iter().filter(|v| v.len() == min && min > 0).map(|v| v[0]).collect()
}

fn words_up_to(graph: &DefiningGraph, max_len: usize) -> Vec<Vec<Letter>> {
    let alphabet = all_letters(graph);
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &alphabet {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn path3() -> DefiningGraph {
    DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap()
}

#[test]
fn normal_form_matches_rewriting_oracle() {
    let graphs = [path3(), DefiningGraph::cycle(5)];
    let depths = [4, 3];
    for (graph, depth) in graphs.iter().zip(depths) {
        for w in words_up_to(graph, depth) {
            let nf = NormalForm::new(graph, &w);
            assert_eq!(nf.letters(), oracle_canonical(graph, &w).as_slice());
            assert_eq!(NormalForm::new(graph, nf.letters()), nf);
        }
    }
}

#[test]
fn first_letters_match_reduced_word_enumeration() {
    let graph = path3();
    for w in words_up_to(&graph, 4) {
        let nf = NormalForm::new(&graph, &w);
        let got: BTreeSet<Letter> = nf.first_letters(&graph).into_iter().collect();
        assert_eq!(got, oracle_first_letters(&graph, &w));
    }
}

#[test]
fn equality_partition_matches_oracle() {
    let graph = path3();
    let words = words_up_to(&graph, 3);
    for w in &words {
        for v in &words {
            let same_nf = NormalForm::new(&graph, w) == NormalForm::new(&graph, v);
            let same_oracle = oracle_canonical(&graph, w) == oracle_canonical(&graph, v);
            assert_eq!(same_nf, same_oracle);
        }
    }
}

fn cayley_ball(graph: &DefiningGraph, radius: usize) -> Vec<NormalForm> {
    let alphabet = all_letters(graph);
    let mut seen = BTreeSet::new();
    let mut layer = vec![NormalForm::identity()];
    seen.insert(NormalForm::identity());
    for _ in 0..radius {
        let mut next = Vec::new();
        for v in &layer {
            for &l in &alphabet {
                let u = v.mul_letter(graph, l);
                if seen.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    seen.into_iter().collect()
}

fn bfs_translation_length(graph: &DefiningGraph, g: &NormalForm, radius: usize) -> usize {
    cayley_ball(graph, radius)
        .iter()
        .map(|v| v.inverse(graph).mul(graph, g).mul(graph, v).len())
        .min()
        .unwrap()
}

#[test]
fn translation_length_matches_bfs() {
    let free = DefiningGraph::free(2);
    let ab = NormalForm::parse(&free, "ab").unwrap();
    assert_eq!(bfs_translation_length(&free, &ab, 3), 2);
    assert_eq!(ab.translation_length(&free), 2);

    let pent = DefiningGraph::cycle(5);
    for text in ["abcde", "cabcdeC"] {
        let g = NormalForm::parse(&pent, text).unwrap();
        assert_eq!(bfs_translation_length(&pent, &g, 3), 5);
        assert_eq!(g.translation_length(&pent), 5);
    }
}
