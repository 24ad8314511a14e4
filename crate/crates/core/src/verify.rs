//! Seeded verification suites shared by the command line tool and the
//! acceptance tests.
//!
//! Every suite pits a production computation against an independent
//! oracle, or sweeps an invariant across a corpus, and fails loudly
//! with a witness instead of tallying soft scores. All randomness is
//! seeded, so identical configurations reproduce identical runs.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axis::{self, Window};
use crate::complex::CubeComplex;
use crate::embed::Embedding;
use crate::error::Error;
use crate::graph::DefiningGraph;
use crate::median::{self, Relation, Scope, SideRelation};
use crate::poset::FinitePoset;
use crate::quasi::random_vertex;
use crate::segment::{self, maximal_g_nested, Segment};
use crate::Result;

/// All vertices within the given edge distance of a base vertex.
pub fn ball_vertices<C: CubeComplex>(c: &C, base: &C::V, radius: usize) -> Vec<C::V> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(base.clone());
    queue.push_back((base.clone(), 0usize));
    while let Some((v, d)) = queue.pop_front() {
        out.push(v.clone());
        if d == radius {
            continue;
        }
        for (u, _) in c.neighbors(&v) {
            if seen.insert(u.clone()) {
                queue.push_back((u, d + 1));
            }
        }
    }
    out
}

/// All vertices on geodesics between two vertices, by breadth-first
/// search pruned to the distance-sum equality.
pub fn interval_vertices<C: CubeComplex>(c: &C, a: &C::V, b: &C::V) -> Vec<C::V> {
    let total = c.distance(a, b);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    let mut out = Vec::new();
    seen.insert(a.clone());
    queue.push_back(a.clone());
    while let Some(v) = queue.pop_front() {
        out.push(v.clone());
        for (u, _) in c.neighbors(&v) {
            if c.distance(a, &u) + c.distance(&u, b) == total && seen.insert(u.clone()) {
                queue.push_back(u);
            }
        }
    }
    out
}

/// Production median against the nearest-interval-point oracle on
/// seeded random triples. Returns the number of triples checked.
pub fn median_oracle_suite<C: CubeComplex>(
    c: &C,
    base: &C::V,
    instances: usize,
    walk: usize,
    seed: u64,
) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..instances {
        let a = random_vertex(c, base, walk, &mut rng);
        let b = random_vertex(c, base, walk, &mut rng);
        let z = random_vertex(c, base, walk, &mut rng);
        let interval = interval_vertices(c, &a, &b);
        let mut best: Vec<&C::V> = Vec::new();
        let mut best_d = usize::MAX;
        for v in &interval {
            let d = c.distance(v, &z);
            if d < best_d {
                best_d = d;
                best = vec![v];
            } else if d == best_d {
                best.push(v);
            }
        }
        if best.len() != 1 {
            return Err(Error::PropertyViolation(format!(
                "interval between {} and {} has {} nearest points to {}",
                c.describe_vertex(&a),
                c.describe_vertex(&b),
                best.len(),
                c.describe_vertex(&z)
            )));
        }
        let m = median::median(c, &a, &b, &z);
        if &m != best[0] {
            return Err(Error::PropertyViolation(format!(
                "median mismatch at instance {i}: walk gave {}, oracle gave {}",
                c.describe_vertex(&m),
                c.describe_vertex(best[0])
            )));
        }
        for (p, q) in [(&a, &b), (&a, &z), (&b, &z)] {
            if c.distance(p, &m) + c.distance(&m, q) != c.distance(p, q) {
                return Err(Error::PropertyViolation(
                    "median misses one of the three geodesics".into(),
                ));
            }
        }
    }
    Ok(instances)
}

/// Production scope relations against the convex-projection oracle on
/// dual edges recomputed from a geodesic. Returns the number of wall
/// pairs compared.
pub fn relation_oracle_suite<C: CubeComplex>(
    c: &C,
    base: &C::V,
    instances: usize,
    walk: usize,
    seed: u64,
) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    let mut attempts = 0usize;
    while checked < instances {
        attempts += 1;
        if attempts > instances * 50 {
            return Err(Error::Internal(
                "relation sampling failed to find enough nontrivial scopes".into(),
            ));
        }
        let x = random_vertex(c, base, walk, &mut rng);
        let y = random_vertex(c, base, walk, &mut rng);
        if x == y {
            continue;
        }
        let scope = Scope::new(c, &x, &y)?;
        let n = scope.wall_count();
        if n < 2 {
            continue;
        }
        let mut edge_of: HashMap<usize, (C::V, C::V)> = HashMap::new();
        for (from, to, h) in median::geodesic(c, &x, &y) {
            let (idx, flipped) = scope.lookup(&h).ok_or(Error::NotInScope)?;
            if flipped {
                return Err(Error::Internal(
                    "geodesic half-space oriented against its scope".into(),
                ));
            }
            edge_of.insert(idx, (from, to));
        }
        if edge_of.len() != n {
            return Err(Error::PropertyViolation(
                "one geodesic did not cross every scope wall exactly once".into(),
            ));
        }
        for _ in 0..8 {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let produced = scope.relation(&scope.walls()[i], &scope.walls()[j])?;
            let (oi, ii) = &edge_of[&i];
            let (oj, ij) = &edge_of[&j];
            let oracle = median::edge_relation(c, (oi, ii), (oj, ij))?;
            let agree = matches!(
                (produced, oracle),
                (Relation::Equal, SideRelation::Equal)
                    | (Relation::Transverse, SideRelation::Transverse)
                    | (Relation::FirstContainsSecond, SideRelation::FirstContainsSecond)
                    | (Relation::SecondContainsFirst, SideRelation::SecondContainsFirst)
            );
            if !agree {
                return Err(Error::PropertyViolation(format!(
                    "relation mismatch: scope says {:?}, projection oracle says {:?} for {} vs {}",
                    produced,
                    oracle,
                    c.describe_halfspace(&scope.walls()[i]),
                    c.describe_halfspace(&scope.walls()[j])
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// Random finite posets: the production chain cover against subset
/// enumeration, plus an independent maximality check of the flagged
/// chain. Returns the number of posets checked.
pub fn dilworth_suite(instances: usize, max_n: usize, seed: u64) -> Result<usize> {
    assert!(max_n <= 16, "subset enumeration is sized for small posets");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for inst in 0..instances {
        let n = rng.gen_range(1..=max_n);
        let density = rng.gen_range(0..=60);
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if rng.gen_range(0..100) < density {
                    pairs.push((a, b));
                }
            }
        }
        let poset = FinitePoset::from_pairs(n, &pairs)?;
        let part = poset.cover_with_maximal_chain()?;
        let mut covered = vec![false; n];
        for chain in &part.chains {
            if !poset.is_chain(chain) {
                return Err(Error::PropertyViolation(format!(
                    "cover of instance {inst} contains a non-chain"
                )));
            }
            for &e in chain {
                if covered[e] {
                    return Err(Error::PropertyViolation(format!(
                        "element {e} covered twice in instance {inst}"
                    )));
                }
                covered[e] = true;
            }
        }
        if covered.iter().any(|&b| !b) {
            return Err(Error::PropertyViolation(format!(
                "cover of instance {inst} misses an element"
            )));
        }
        let width = brute_width(&poset);
        if part.chains.len() != width {
            return Err(Error::PropertyViolation(format!(
                "instance {inst}: cover uses {} chains but the width is {width}",
                part.chains.len()
            )));
        }
        let flagged = part.maximal_chain.ok_or_else(|| {
            Error::PropertyViolation(format!("instance {inst} has no flagged chain"))
        })?;
        let q = &part.chains[flagged];
        if !poset.is_maximal_chain(q) {
            return Err(Error::PropertyViolation(format!(
                "instance {inst}: flagged chain is not maximal by the poset's own test"
            )));
        }
        for x in 0..n {
            if q.contains(&x) {
                continue;
            }
            if q.iter().all(|&e| poset.comparable(e, x)) {
                return Err(Error::PropertyViolation(format!(
                    "instance {inst}: element {x} extends the flagged chain"
                )));
            }
        }
    }
    Ok(instances)
}

fn brute_width(p: &FinitePoset) -> usize {
    let n = p.len();
    let comp: Vec<u32> = (0..n)
        .map(|i| {
            let mut m = 0u32;
            for j in 0..n {
                if j != i && p.comparable(i, j) {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();
    let mut best = 0;
    'mask: for mask in 1u32..(1u32 << n) {
        if (mask.count_ones() as usize) <= best {
            continue;
        }
        let mut rest = mask;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if mask & comp[i] != 0 {
                continue 'mask;
            }
        }
        best = mask.count_ones() as usize;
    }
    best
}

/// What the per-element window check observed.
#[derive(Clone, Debug)]
pub struct ElementCheck {
    pub ell: usize,
    pub dim: usize,
    pub sigma: Vec<usize>,
    pub quadrant_pairs: usize,
    pub elbow_edges: usize,
    pub sameway_pairs: usize,
    pub run_len: usize,
    pub run_labels: Vec<String>,
}

/// Build the whole window pipeline for one hyperbolic element, run
/// every embedding invariant, the three geometric sweeps, and the
/// translate non-overlap property of the extracted run.
pub fn check_element<C: CubeComplex>(c: &C, g: &C::G, seed: u64) -> Result<ElementCheck> {
    let ax = axis::classify(c, g)?;
    let wa = axis::analyze_window(c, &ax, axis::MAX_WINDOW_RADIUS)?;
    let family: Vec<C::H> = wa
        .antichain
        .iter()
        .map(|&i| wa.window.halfspace(i).clone())
        .collect();
    let ax2 = axis::recenter(c, &ax, &wa)?;
    let win = Window::build(c, &ax2, wa.window.radius())?;
    let emb = Embedding::build(&win, &family)?;
    emb.verify(seed)?;
    let quadrants = emb.quadrant_sweep()?;
    for q in &quadrants {
        if !q.avoided {
            return Err(Error::PropertyViolation(format!(
                "forbidden quadrant corner {:?} is occupied",
                q.corner
            )));
        }
    }
    let elbow_edges = emb.elbow_sweep()?;
    let sameway_pairs = emb.sameway_sweep()?;
    let run = maximal_g_nested(&emb)?;

    // a maximal run never overlaps its own translates; decided through
    // the projection oracle so no large hull is built
    let scope = win.scope();
    let mut duals: Vec<(C::V, C::V)> = Vec::new();
    for h in run.segment.halfspaces() {
        let (i, flipped) = scope.lookup(h).ok_or(Error::NotInScope)?;
        let (u, v) = scope.dual_edge(i).clone();
        duals.push(if flipped { (v, u) } else { (u, v) });
    }
    for n in 1..=6i64 {
        let t = c.power(win.g(), n);
        for (h2, (o2, i2)) in run.segment.halfspaces().iter().zip(&duals) {
            let moved = c.act_h(&t, h2);
            let (mo, mi) = (c.act(&t, o2), c.act(&t, i2));
            for (h1, (o1, i1)) in run.segment.halfspaces().iter().zip(&duals) {
                if *h1 == moved {
                    return Err(Error::PropertyViolation(format!(
                        "the maximal run shares the wall {} with its translate by power {n}",
                        c.describe_halfspace(h1)
                    )));
                }
                let rel = median::edge_relation(c, (o1, i1), (&mo, &mi))?;
                if matches!(
                    rel,
                    SideRelation::Transverse | SideRelation::Equal | SideRelation::Opposite
                ) {
                    return Err(Error::PropertyViolation(format!(
                        "the maximal run overlaps its translate by power {n}: {} against {}",
                        c.describe_halfspace(h1),
                        c.describe_halfspace(&moved)
                    )));
                }
            }
        }
    }

    Ok(ElementCheck {
        ell: win.ell(),
        dim: emb.dim(),
        sigma: emb.sigma().to_vec(),
        quadrant_pairs: quadrants.len(),
        elbow_edges,
        sameway_pairs,
        run_len: run.segment.len(),
        run_labels: run.segment.labels(c),
    })
}

/// The graph corpus backing the sweep-style criteria.
pub fn corpus_graphs(max_gens: usize) -> Vec<(String, DefiningGraph)> {
    let mut out = Vec::new();
    for n in 1..=max_gens {
        out.push((format!("free{n}"), DefiningGraph::free(n)));
    }
    for n in 2..=max_gens.min(4) {
        out.push((format!("complete{n}"), DefiningGraph::complete(n)));
    }
    if max_gens >= 3 {
        let g = DefiningGraph::new(&["a", "b", "c"], &[("a", "b"), ("b", "c")])
            .expect("path graph is well formed");
        out.push(("path3".to_string(), g));
    }
    if max_gens >= 4 {
        let g = DefiningGraph::new(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d")],
        )
        .expect("path graph is well formed");
        out.push(("path4".to_string(), g));
        out.push(("cycle4".to_string(), DefiningGraph::cycle(4)));
    }
    if max_gens >= 5 {
        out.push(("cycle5".to_string(), DefiningGraph::cycle(5)));
    }
    out
}

/// Every distinct nontrivial element spelled by a word of at most
/// `max_len` letters, one spelling per element.
pub fn corpus_words(graph: &DefiningGraph, max_len: usize) -> Vec<String> {
    let letters: Vec<char> = graph
        .gens()
        .flat_map(|g| {
            let lower = graph.name(g);
            [lower, lower.to_ascii_uppercase()]
        })
        .collect();
    let c = crate::raag::RaagComplex::new(graph.clone());
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut layer: Vec<String> = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut s = w.clone();
                s.push(l);
                let elem = c.element(&s).expect("letters come from the graph");
                if elem == c.identity() {
                    continue;
                }
                let key = c.describe_g(&elem);
                if seen.insert(key) {
                    out.push(s.clone());
                }
                next.push(s);
            }
        }
        layer = next;
    }
    out
}

/// Outcome counts of the sampled complex-property check.
#[derive(Clone, Debug, Default)]
pub struct ComplexPropertyReport {
    pub samples: usize,
    pub crossing_checks: usize,
    pub osculation_checks: usize,
    pub self_osculation_checks: usize,
}

/// Sample wall and translate configurations in a ball and assert the
/// three labeling properties the main construction relies on: a wall
/// never crosses its own translate, a tightly nested pair never crosses
/// under a translate, and no wall self-osculates under a translate.
/// The first violation aborts with a witness.
pub fn raaglike_check<C: CubeComplex>(
    c: &C,
    base: &C::V,
    elements: &[C::G],
    ball_radius: usize,
    samples: usize,
    seed: u64,
) -> Result<ComplexPropertyReport> {
    if elements.is_empty() {
        return Err(Error::Internal("property sampling needs group elements".into()));
    }
    let ball = ball_vertices(c, base, ball_radius);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ComplexPropertyReport::default();
    for _ in 0..samples {
        report.samples += 1;
        let v = ball[rng.gen_range(0..ball.len())].clone();
        let nbs = c.neighbors(&v);
        if nbs.is_empty() {
            continue;
        }
        let (far1, _) = nbs[rng.gen_range(0..nbs.len())].clone();
        let g = &elements[rng.gen_range(0..elements.len())];
        let gv = c.act(g, &v);
        let gfar1 = c.act(g, &far1);

        // a wall and its translate never cross
        let rel = median::edge_relation(c, (&v, &far1), (&gv, &gfar1))?;
        report.crossing_checks += 1;
        if rel == SideRelation::Transverse {
            return Err(Error::PropertyViolation(format!(
                "the wall at edge {} -> {} crosses its translate under {}",
                c.describe_vertex(&v),
                c.describe_vertex(&far1),
                c.describe_g(g)
            )));
        }

        if nbs.len() < 2 {
            continue;
        }
        let (far2, _) = loop {
            let pick = nbs[rng.gen_range(0..nbs.len())].clone();
            if pick.0 != far1 {
                break pick;
            }
        };

        // tightly nested pair: the side holding v behind wall 1 strictly
        // above the far side of wall 2, osculating at v
        let nested = !median::sides_meet(c, (&v, &far2), (&v, &far1));
        if nested {
            let gfar2 = c.act(g, &far2);
            report.osculation_checks += 1;
            let r = median::edge_relation(c, (&far1, &v), (&gv, &gfar2))?;
            if r == SideRelation::Transverse {
                return Err(Error::PropertyViolation(format!(
                    "a tightly nested pair at {} crosses under the translate {}",
                    c.describe_vertex(&v),
                    c.describe_g(g)
                )));
            }
        }

        // both far sides disjoint means the two walls osculate at v
        // facing away from each other; no translate may map one far
        // side onto the other
        let facing_away = !median::sides_meet(c, (&v, &far1), (&v, &far2));
        if facing_away {
            report.self_osculation_checks += 1;
            let h1 = nbs.iter().find(|(u, _)| *u == far1).expect("edge exists").1.clone();
            let h2 = nbs.iter().find(|(u, _)| *u == far2).expect("edge exists").1.clone();
            if c.act_h(g, &h1) == h2 || c.act_h(g, &h2) == h1 {
                return Err(Error::PropertyViolation(format!(
                    "the wall at {} self-osculates under the translate {}",
                    c.describe_vertex(&v),
                    c.describe_g(g)
                )));
            }
        }
    }
    Ok(report)
}

/// Deterministic scan of a ball for a wall whose complement side is
/// carried onto a wall osculating it: two edges leaving one vertex with
/// disjoint far sides, one the image of the other under the element.
/// Returns a witness description when the configuration exists.
pub fn find_self_osculation<C: CubeComplex>(
    c: &C,
    g: &C::G,
    base: &C::V,
    radius: usize,
) -> Option<String> {
    for v in ball_vertices(c, base, radius) {
        let nbs = c.neighbors(&v);
        for (i, (far1, h1)) in nbs.iter().enumerate() {
            for (far2, h2) in nbs.iter().skip(i + 1) {
                if median::sides_meet(c, (&v, far1), (&v, far2)) {
                    continue;
                }
                if c.act_h(g, h1) == *h2 || c.act_h(g, h2) == *h1 {
                    return Some(format!(
                        "the wall at {} self-osculates under {}: its sides toward {} and {} are disjoint and one is the image of the other",
                        c.describe_vertex(&v),
                        c.describe_g(g),
                        c.describe_vertex(far1),
                        c.describe_vertex(far2)
                    ));
                }
            }
        }
    }
    None
}

/// The staircase's two-step runs, counted both ways: the run pointing
/// along the climb admits n disjoint copies between o and g^n o, while
/// the mixed-direction pair blocks its own translates after one copy.
/// Returns the number of counts checked.
pub fn staircase_counting_suite(max_n: i64) -> Result<usize> {
    use crate::euclid::{EuclideanComplex, GridHalfSpace};
    let c = EuclideanComplex::fixture("staircase")?;
    let g = c.automorphism().clone();
    let ax = axis::classify(&c, &g)?;
    let wa = axis::analyze_window(&c, &ax, axis::MAX_WINDOW_RADIUS)?;
    let family: Vec<GridHalfSpace> = wa
        .antichain
        .iter()
        .map(|&i| wa.window.halfspace(i).clone())
        .collect();
    let ax2 = axis::recenter(&c, &ax, &wa)?;
    let win = Window::build(&c, &ax2, wa.window.radius())?;
    let emb = Embedding::build(&win, &family)?;
    let good = maximal_g_nested(&emb)?.segment;
    let o = win.base().clone();
    let radius = 2 * win.ell() * win.radius();
    let mut checks = 0;
    for n in 1..=max_n {
        let y = c.act(&c.power(&g, n), &o);
        let fwd = segment::count_copies(&c, &o, &y, &good, radius)?;
        if !(fwd.exact && fwd.lower == n as usize) {
            return Err(Error::PropertyViolation(format!(
                "aligned run at power {n}: expected {n} copies, got {}..{}",
                fwd.lower, fwd.upper
            )));
        }
        checks += 1;
    }
    let span = Scope::new(&c, &o, &c.act(&c.power(&g, max_n), &o))?;
    let bad = Segment::from_halfspaces(
        &span,
        vec![
            GridHalfSpace { coord: 1, level: 0, toward: true },
            GridHalfSpace { coord: 0, level: 1, toward: true },
        ],
    )?;
    for n in 1..=max_n {
        let y = c.act(&c.power(&g, n), &o);
        let report = segment::count_copies(&c, &o, &y, &bad, radius)?;
        if !(report.exact && report.lower == 1) {
            return Err(Error::PropertyViolation(format!(
                "mixed pair at power {n}: expected 1 copy, got {}..{}",
                report.lower, report.upper
            )));
        }
        checks += 1;
    }
    Ok(checks)
}

/// Displacement survey of a ball: the minimum displacement observed and
/// the largest number of minimal-displacement neighbors any minimal
/// vertex has. A hyperbolic element whose minimal set is a line shows
/// at most two.
#[derive(Clone, Debug)]
pub struct MinimalSetProbe {
    pub min_displacement: usize,
    pub max_minimal_degree: usize,
    pub minimal_vertices: usize,
}

pub fn minimal_set_probe<C: CubeComplex>(
    c: &C,
    g: &C::G,
    base: &C::V,
    radius: usize,
) -> MinimalSetProbe {
    let ball = ball_vertices(c, base, radius);
    let displacement = |v: &C::V| c.distance(v, &c.act(g, v));
    let min = ball.iter().map(&displacement).min().expect("ball is nonempty");
    let minimal: Vec<&C::V> = ball.iter().filter(|v| displacement(v) == min).collect();
    let max_degree = minimal
        .iter()
        .map(|v| {
            c.neighbors(v)
                .into_iter()
                .filter(|(u, _)| displacement(u) == min)
                .count()
        })
        .max()
        .unwrap_or(0);
    MinimalSetProbe {
        min_displacement: min,
        max_minimal_degree: max_degree,
        minimal_vertices: minimal.len(),
    }
}
