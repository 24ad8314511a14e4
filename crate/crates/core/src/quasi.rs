//! The counting pair function, its defect, and window homogenization.
//!
//! For a fixed chain the pair function is the number of its copies
//! between two vertices minus the number of reversed copies. Its defect
//! over vertex triples is bounded by a constant that depends only on
//! whether the complex is a tree, and its growth rate along an axis is
//! what feeds the stable commutator length bound.

use std::cell::RefCell;
use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::CubeComplex;
use crate::error::Error;
use crate::median;
use crate::segment::{count_copies, Segment};
use crate::Result;

/// One evaluation of the pair function, with both raw counts and their
/// exactness kept separate.
#[derive(Clone, Debug)]
pub struct OmegaValue {
    pub value: i64,
    pub forward: usize,
    pub reversed: usize,
    pub forward_exact: bool,
    pub reversed_exact: bool,
}

impl OmegaValue {
    pub fn exact(&self) -> bool {
        self.forward_exact && self.reversed_exact
    }
}

/// Defect constants. `homogenized` is the bound carried by the
/// homogenized function and is the denominator constant of the final
/// lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DefectBounds {
    pub split: i64,
    pub delta: i64,
    pub homogenized: i64,
}

/// Trees allow at most one copy to straddle a median, general complexes
/// two, and everything downstream scales accordingly.
pub fn defect_bounds(tree: bool) -> DefectBounds {
    if tree {
        DefectBounds { split: 1, delta: 3, homogenized: 6 }
    } else {
        DefectBounds { split: 2, delta: 6, homogenized: 12 }
    }
}

/// The pair function of one chain, with memoized evaluations.
pub struct CountingQuasimorphism<'c, C: CubeComplex> {
    complex: &'c C,
    gamma: Segment<C>,
    backward: Segment<C>,
    radius: usize,
    cache: RefCell<HashMap<(C::V, C::V), OmegaValue>>,
}

impl<'c, C: CubeComplex> CountingQuasimorphism<'c, C> {
    pub fn new(complex: &'c C, gamma: Segment<C>, radius: usize) -> Self {
        let backward = gamma.reversed(complex);
        CountingQuasimorphism {
            complex,
            gamma,
            backward,
            radius,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn gamma(&self) -> &Segment<C> {
        &self.gamma
    }

    pub fn reversed_gamma(&self) -> &Segment<C> {
        &self.backward
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Forward copies minus reversed copies from x to y. A count whose
    /// transporter searches all finished is exact even when the label
    /// bound sits above it, because every surviving candidate was
    /// settled one way or the other.
    pub fn evaluate(&self, x: &C::V, y: &C::V) -> Result<OmegaValue> {
        if let Some(v) = self.cache.borrow().get(&(x.clone(), y.clone())) {
            return Ok(v.clone());
        }
        let fwd = count_copies(self.complex, x, y, &self.gamma, self.radius)?;
        let rev = count_copies(self.complex, x, y, &self.backward, self.radius)?;
        let v = OmegaValue {
            value: fwd.lower as i64 - rev.lower as i64,
            forward: fwd.lower,
            reversed: rev.lower,
            forward_exact: fwd.exact || fwd.searches_complete,
            reversed_exact: rev.exact || rev.searches_complete,
        };
        self.cache.borrow_mut().insert((x.clone(), y.clone()), v.clone());
        Ok(v)
    }

    pub fn omega(&self, x: &C::V, y: &C::V) -> Result<i64> {
        Ok(self.evaluate(x, y)?.value)
    }

    /// Defect of one ordered triple, with an exactness flag covering all
    /// six counts involved.
    pub fn triple_defect(&self, x: &C::V, y: &C::V, z: &C::V) -> Result<(i64, bool)> {
        let a = self.evaluate(x, y)?;
        let b = self.evaluate(y, z)?;
        let whole = self.evaluate(x, z)?;
        Ok((
            a.value + b.value - whole.value,
            a.exact() && b.exact() && whole.exact(),
        ))
    }

    /// Copies translate along the deck action, so the pair function is
    /// invariant under it. Exact evaluations on both sides must agree.
    pub fn equivariant_at(&self, h: &C::G, x: &C::V, y: &C::V) -> Result<bool> {
        let a = self.evaluate(x, y)?;
        let b = self.evaluate(
            &self.complex.act(h, x),
            &self.complex.act(h, y),
        )?;
        Ok(!(a.exact() && b.exact()) || a.value == b.value)
    }

    /// Sample vertex triples from random walks out of `base` and check
    /// the defect and median split bounds on every triple whose counts
    /// all came out exact. Antisymmetry is checked on the way and a
    /// failure there aborts, since it cannot be a sampling artifact.
    pub fn sample_defect(
        &self,
        base: &C::V,
        walk: usize,
        triples: usize,
        bounds: &DefectBounds,
        seed: u64,
    ) -> Result<DefectReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = self.complex;
        let mut report = DefectReport {
            triples: 0,
            evaluated: 0,
            skipped: 0,
            max_abs_delta: 0,
            delta_bound: bounds.delta,
            delta_violations: 0,
            max_split_gap: 0,
            split_bound: bounds.split,
            split_violations: 0,
            antisymmetry_checked: 0,
        };
        for _ in 0..triples {
            let x = random_vertex(c, base, walk, &mut rng);
            let y = random_vertex(c, base, walk, &mut rng);
            let z = random_vertex(c, base, walk, &mut rng);
            report.triples += 1;
            let (delta, exact) = self.triple_defect(&x, &y, &z)?;
            if !exact {
                report.skipped += 1;
                continue;
            }
            report.evaluated += 1;
            report.max_abs_delta = report.max_abs_delta.max(delta.abs());
            if delta.abs() > bounds.delta {
                report.delta_violations += 1;
            }
            let m = median::median(c, &x, &y, &z);
            let whole = self.evaluate(&x, &z)?;
            let left = self.evaluate(&x, &m)?;
            let right = self.evaluate(&m, &z)?;
            if whole.exact() && left.exact() && right.exact() {
                let gap = (whole.value - left.value - right.value).abs();
                report.max_split_gap = report.max_split_gap.max(gap);
                if gap > bounds.split {
                    report.split_violations += 1;
                }
            }
            let fore = self.evaluate(&x, &y)?;
            let back = self.evaluate(&y, &x)?;
            if fore.exact() && back.exact() {
                report.antisymmetry_checked += 1;
                if fore.value + back.value != 0 {
                    return Err(Error::TheoremContradiction(format!(
                        "pair function is not antisymmetric between {} and {}",
                        c.describe_vertex(&x),
                        c.describe_vertex(&y)
                    )));
                }
            }
        }
        Ok(report)
    }
}

/// Outcome of a defect sampling run.
#[derive(Clone, Debug)]
pub struct DefectReport {
    pub triples: usize,
    /// Triples whose three pair values were all exact.
    pub evaluated: usize,
    pub skipped: usize,
    pub max_abs_delta: i64,
    pub delta_bound: i64,
    pub delta_violations: usize,
    pub max_split_gap: i64,
    pub split_bound: i64,
    pub split_violations: usize,
    pub antisymmetry_checked: usize,
}

impl DefectReport {
    pub fn clean(&self) -> bool {
        self.delta_violations == 0 && self.split_violations == 0
    }
}

/// A vertex drawn by a uniform random walk of bounded length.
pub(crate) fn random_vertex<C: CubeComplex, R: Rng>(
    c: &C,
    base: &C::V,
    walk: usize,
    rng: &mut R,
) -> C::V {
    let mut v = base.clone();
    let steps = rng.gen_range(0..=walk);
    for _ in 0..steps {
        let nb = c.neighbors(&v);
        if nb.is_empty() {
            break;
        }
        let pick = rng.gen_range(0..nb.len());
        v = nb.into_iter().nth(pick).expect("index in range").0;
    }
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rigor {
    /// The window checks pinned the counting argument, which then
    /// covers every power beyond the window.
    Certified,
    /// Only the raw ratio at the largest checked power is claimed.
    WindowLimited,
}

/// How the absence of reversed copies was settled: no wall in any
/// window even carried a reversed label, or candidates existed and a
/// complete transporter search ruled every one out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReversedAbsence {
    Label,
    Exhaustion,
}

#[derive(Clone, Debug)]
pub struct PowerCount {
    pub n: i64,
    pub forward: usize,
    pub reversed: usize,
    pub exact: bool,
}

/// Growth data of the pair function along an axis.
#[derive(Clone, Debug)]
pub struct Homogenization<G> {
    pub rate_num: i64,
    pub rate_den: i64,
    pub rigor: Rigor,
    pub counts: Vec<PowerCount>,
    /// Forward copy witnesses per power, outermost first.
    pub witnesses: Vec<(i64, Vec<G>)>,
    pub reversed_absence: Option<ReversedAbsence>,
}

/// Check the pair function on the powers of g up to `max_power` and
/// homogenize.
///
/// A chain that dominates its own translate admits exactly one copy per
/// power period and no reversed copies at all, so when the window shows
/// that pattern with everything settled, the rate is exactly one and
/// certified. A verified reversed copy inside such a window contradicts
/// the domination and aborts rather than degrading the answer.
pub fn homogenize<C: CubeComplex>(
    c: &C,
    o: &C::V,
    g: &C::G,
    gamma: &Segment<C>,
    max_power: i64,
    radius: usize,
) -> Result<Homogenization<C::G>> {
    if max_power < 1 {
        return Err(Error::Internal("homogenization needs at least one power".into()));
    }
    let backward = gamma.reversed(c);
    let mut counts = Vec::new();
    let mut witnesses = Vec::new();
    let mut all_perfect = true;
    let mut rev_candidates_seen = false;
    let mut rev_all_settled = true;
    let mut last_value = 0i64;
    for n in 1..=max_power {
        let y = c.act(&c.power(g, n), o);
        let fwd = count_copies(c, o, &y, gamma, radius)?;
        let rev = count_copies(c, o, &y, &backward, radius)?;
        if rev.lower > 0 {
            return Err(Error::TheoremContradiction(format!(
                "a reversed copy was verified between the basepoint and power {n}"
            )));
        }
        if rev.candidates > 0 {
            rev_candidates_seen = true;
        }
        let rev_settled = rev.candidates == 0 || rev.searches_complete;
        if !rev_settled {
            rev_all_settled = false;
        }
        let fwd_exact = fwd.exact || fwd.searches_complete;
        counts.push(PowerCount {
            n,
            forward: fwd.lower,
            reversed: rev.lower,
            exact: fwd_exact && (rev.exact || rev_settled),
        });
        if !(fwd_exact && fwd.lower == n as usize && rev_settled) {
            all_perfect = false;
        }
        last_value = fwd.lower as i64 - rev.lower as i64;
        witnesses.push((n, fwd.witnesses));
    }
    let reversed_absence = if !rev_all_settled {
        None
    } else if rev_candidates_seen {
        Some(ReversedAbsence::Exhaustion)
    } else {
        Some(ReversedAbsence::Label)
    };
    if all_perfect && reversed_absence.is_some() {
        return Ok(Homogenization {
            rate_num: 1,
            rate_den: 1,
            rigor: Rigor::Certified,
            counts,
            witnesses,
            reversed_absence,
        });
    }
    let d = gcd(last_value.abs(), max_power).max(1);
    Ok(Homogenization {
        rate_num: last_value / d,
        rate_den: max_power / d,
        rigor: Rigor::WindowLimited,
        counts,
        witnesses,
        reversed_absence,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
