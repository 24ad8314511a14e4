//! End-to-end battery. Each test exercises one advertised behavior of
//! the library against fixed seeds, so a run prints one line per
//! claim. Expect this binary to take several minutes: two of the
//! tests walk every nontrivial word of length at most four over the
//! whole graph corpus.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use cubescl::axis::{self, Window};
use cubescl::cert::{self, SclOptions};
use cubescl::embed::Embedding;
use cubescl::quasi::{defect_bounds, CountingQuasimorphism};
use cubescl::segment::maximal_g_nested;
use cubescl::verify::{self, ElementCheck};
use cubescl::{CubeComplex, DefiningGraph, Error, EuclideanComplex, RaagComplex};

const SEED: u64 = 0xC0FFEE;

struct CorpusEntry {
    graph_name: String,
    word: String,
    check: ElementCheck,
}

/// Every nontrivial element spelled by a word of length at most four
/// over every corpus graph with at most four generators, run once
/// through the full window pipeline. Shared between the tests that
/// need per-element results so the expensive sweep happens once.
fn corpus() -> &'static [CorpusEntry] {
    static CORPUS: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let mut entries = Vec::new();
        for (name, graph) in verify::corpus_graphs(4) {
            let c = RaagComplex::new(graph);
            for word in verify::corpus_words(c.graph(), 4) {
                let g = c.element(&word).expect("corpus word parses");
                let check = verify::check_element(&c, &g, SEED).unwrap_or_else(|e| {
                    panic!("window checks failed for {word:?} over {name}: {e}")
                });
                entries.push(CorpusEntry { graph_name: name.clone(), word, check });
            }
        }
        entries
    })
}

fn parse_ratio(text: &str) -> (i64, i64) {
    match text.split_once('/') {
        Some((p, q)) => (p.parse().expect("numerator"), q.parse().expect("denominator")),
        None => (text.parse().expect("integer ratio"), 1),
    }
}

#[test]
fn c01_pentagon_window_and_certificate() {
    let t0 = Instant::now();
    let c = RaagComplex::new(DefiningGraph::cycle(5));
    let g = c.element("abcde").unwrap();

    let check = verify::check_element(&c, &g, SEED).unwrap();
    assert_eq!(check.ell, 5);
    assert_eq!(check.dim, 2);
    assert_eq!(check.sigma, vec![1, 0], "the two chains must trade places");
    assert_eq!(check.run_len, 2);
    let labels = &check.run_labels;
    assert_eq!(labels.len(), 2);
    let a = c.graph().gen_by_name(labels[0].chars().next().unwrap()).unwrap();
    let b = c.graph().gen_by_name(labels[1].chars().next().unwrap()).unwrap();
    assert_ne!(a, b);
    assert!(
        !c.graph().adjacent(a, b),
        "run labels {labels:?} should name non-adjacent generators"
    );

    let record = cert::scl_bound(&c, &g, "cycle5", &SclOptions::default()).unwrap();
    assert_eq!(record.k, 1);
    assert_eq!(record.counts.len(), 8);
    for line in &record.counts {
        assert!(line.exact, "count for power {} must be exact", line.n);
        assert_eq!(line.c as i64, line.n, "forward count at power {}", line.n);
        assert_eq!(line.cbar, 0, "reversed count at power {}", line.n);
    }
    assert_eq!(record.phi_hat_lower_bound, "1");
    assert_eq!(record.scl_lower_bound, "1/24");
    assert_eq!(record.rigor, "Certified");
    assert!(
        t0.elapsed().as_secs() < 60,
        "pentagon pipeline took {:?}",
        t0.elapsed()
    );
}

#[test]
fn c02_staircase_counts_one_against_n() {
    assert_eq!(verify::staircase_counting_suite(6).unwrap(), 12);
}

#[test]
fn c03_glide_square_flattens_and_its_minimal_set_is_a_line() {
    let c = EuclideanComplex::fixture("glide-plane").unwrap();
    let g = c.automorphism().clone();
    let ax = axis::classify(&c, &g).unwrap();
    let k = axis::non_transverse_power(&c, &ax, axis::DEFAULT_POWER_CAP).unwrap();
    assert_eq!(k, 2, "the glide itself crosses its own translate");

    let g2 = c.power(&g, 2);
    let check = verify::check_element(&c, &g2, SEED).unwrap();
    assert_eq!(check.ell, 2);
    assert_eq!(check.dim, 2);

    let probe = verify::minimal_set_probe(&c, &g, &c.base_vertex(), 4);
    assert_eq!(probe.min_displacement, 1);
    assert!(probe.minimal_vertices > 0);
    assert!(
        probe.max_minimal_degree <= 2,
        "minimal vertices should line up, max degree {}",
        probe.max_minimal_degree
    );
}

#[test]
fn c04_defect_sampling_stays_within_bounds() {
    let t0 = Instant::now();
    let mut sampled = 0usize;
    for (edges, word, tree) in [
        (true, "abcde", false),
        (false, "ab", true),
    ] {
        let graph = if edges { DefiningGraph::cycle(5) } else { DefiningGraph::free(2) };
        let c = RaagComplex::new(graph);
        let g = c.element(word).unwrap();
        let ax = axis::classify(&c, &g).unwrap();
        let wa = axis::analyze_window(&c, &ax, axis::MAX_WINDOW_RADIUS).unwrap();
        let family: Vec<_> = wa
            .antichain
            .iter()
            .map(|&i| wa.window.halfspace(i).clone())
            .collect();
        let ax2 = axis::recenter(&c, &ax, &wa).unwrap();
        let win = Window::build(&c, &ax2, wa.window.radius()).unwrap();
        let emb = Embedding::build(&win, &family).unwrap();
        let run = maximal_g_nested(&emb).unwrap();
        let omega = CountingQuasimorphism::new(&c, run.segment, 2 * win.ell() * win.radius());
        let bounds = defect_bounds(tree);
        assert_eq!(c.is_tree_like(), tree, "bounds must match the complex for {word}");
        let report = omega
            .sample_defect(win.base(), 4, 240, &bounds, SEED + 4)
            .unwrap();
        assert_eq!(report.triples, 240);
        assert!(
            report.evaluated >= 200,
            "want at least 200 exact triples for {word}, got {}",
            report.evaluated
        );
        assert!(report.clean(), "defect bound exceeded for {word}");
        assert!(report.antisymmetry_checked > 0);
        if tree {
            assert!(report.max_abs_delta <= 3 && report.max_split_gap <= 1);
        } else {
            assert!(report.max_abs_delta <= 6 && report.max_split_gap <= 2);
        }
        sampled += report.evaluated;
    }
    assert!(sampled >= 400);
    assert!(
        t0.elapsed().as_secs() < 300,
        "defect sampling took {:?}",
        t0.elapsed()
    );
}

#[test]
fn c05_median_and_relation_oracles_agree_with_production() {
    let mut medians = 0usize;
    let mut relations = 0usize;
    for (i, (name, graph)) in verify::corpus_graphs(5).into_iter().enumerate() {
        let c = RaagComplex::new(graph);
        let base = c.base_vertex();
        medians += verify::median_oracle_suite(&c, &base, 50, 4, SEED + i as u64)
            .unwrap_or_else(|e| panic!("median oracle disagreed on {name}: {e}"));
        relations += verify::relation_oracle_suite(&c, &base, 50, 4, SEED + 1000 + i as u64)
            .unwrap_or_else(|e| panic!("relation oracle disagreed on {name}: {e}"));
    }
    assert!(medians >= 500, "only {medians} median instances ran");
    assert!(relations >= 500, "only {relations} relation pairs ran");
}

#[test]
fn c06_chain_covers_match_brute_force_width() {
    assert_eq!(verify::dilworth_suite(1000, 12, SEED).unwrap(), 1000);
}

#[test]
fn c07_every_corpus_element_embeds_cleanly() {
    let entries = corpus();
    assert!(
        entries.len() >= 1000,
        "corpus unexpectedly small: {} elements",
        entries.len()
    );
    let mut per_graph: BTreeMap<&str, usize> = BTreeMap::new();
    for e in entries {
        *per_graph.entry(e.graph_name.as_str()).or_default() += 1;
        assert!(e.check.ell >= 1, "{}: zero length for {:?}", e.graph_name, e.word);
        assert!(e.check.dim >= 1);
        assert_eq!(e.check.sigma.len(), e.check.dim);
        assert!(e.check.run_len >= 1, "{}: empty run for {:?}", e.graph_name, e.word);
    }
    assert_eq!(per_graph.len(), 10, "ten corpus graphs expected");
}

#[test]
fn c08_crossing_sweeps_pass_on_the_corpus_and_the_fixtures() {
    let entries = corpus();
    let quadrants: usize = entries.iter().map(|e| e.check.quadrant_pairs).sum();
    let elbows: usize = entries.iter().map(|e| e.check.elbow_edges).sum();
    let sameway: usize = entries.iter().map(|e| e.check.sameway_pairs).sum();
    assert!(quadrants > 0, "no quadrant pair was ever examined");
    assert!(elbows > 0, "no elbow edge was ever examined");
    assert!(sameway > 0, "no same-direction pair was ever examined");

    let stairs = EuclideanComplex::fixture("staircase").unwrap();
    let sg = stairs.automorphism().clone();
    let sc = verify::check_element(&stairs, &sg, SEED).unwrap();
    assert!(sc.quadrant_pairs + sc.elbow_edges + sc.sameway_pairs > 0);

    let glide = EuclideanComplex::fixture("glide-plane").unwrap();
    let gg = glide.automorphism().clone();
    let g2 = glide.power(&gg, 2);
    let gc = verify::check_element(&glide, &g2, SEED).unwrap();
    assert!(gc.quadrant_pairs + gc.elbow_edges + gc.sameway_pairs > 0);
}

#[test]
fn c09_wall_properties_hold_on_graphs_and_fail_on_the_subdivided_strip() {
    for (i, (name, graph)) in verify::corpus_graphs(4).into_iter().enumerate() {
        let c = RaagComplex::new(graph);
        let base = c.base_vertex();
        let elements: Vec<_> = verify::corpus_words(c.graph(), 2)
            .iter()
            .map(|w| c.element(w).unwrap())
            .collect();
        let report = verify::raaglike_check(&c, &base, &elements, 3, 500, SEED + i as u64)
            .unwrap_or_else(|e| panic!("wall property failed on {name}: {e}"));
        assert_eq!(report.samples, 500);
        assert!(report.crossing_checks > 0);
    }

    let strip = EuclideanComplex::fixture("subdivided").unwrap();
    let auto = strip.automorphism().clone();
    let base = strip.base_vertex();
    let witness = verify::find_self_osculation(&strip, &auto, &base, 4)
        .expect("the subdivided strip should exhibit a self-osculating wall");
    assert!(witness.contains("self-osculates"), "{witness}");
    match verify::raaglike_check(&strip, &base, &[auto], 3, 800, SEED) {
        Err(Error::PropertyViolation(_)) => {}
        other => panic!("sampling should flag the strip, got {other:?}"),
    }
}

#[test]
fn c10_lower_bounds_hold_across_the_corpus() {
    let complexes: BTreeMap<String, RaagComplex> = verify::corpus_graphs(4)
        .into_iter()
        .map(|(name, graph)| (name, RaagComplex::new(graph)))
        .collect();
    let opts = SclOptions {
        max_power: 3,
        radius: Some(8),
        ..SclOptions::default()
    };
    let mut certified = 0usize;
    let mut window_limited = 0usize;
    for e in corpus() {
        let c = &complexes[&e.graph_name];
        let g = c.element(&e.word).unwrap();
        let record = cert::scl_bound(c, &g, &e.graph_name, &opts).unwrap_or_else(|err| {
            panic!("no certificate for {:?} over {}: {err}", e.word, e.graph_name)
        });
        assert_eq!(record.k, 1, "{:?} over {}", e.word, e.graph_name);
        let (p, q) = parse_ratio(&record.scl_lower_bound);
        assert!(
            p >= 1 && q >= 1 && 24 * record.k * p >= q,
            "bound {} below the floor for {:?} over {}",
            record.scl_lower_bound,
            e.word,
            e.graph_name
        );
        match record.rigor.as_str() {
            "Certified" => certified += 1,
            "WindowLimited" => window_limited += 1,
            other => panic!("unexpected rigor {other} for {:?}", e.word),
        }
    }
    assert!(certified > 0);
    let _ = window_limited;
}
