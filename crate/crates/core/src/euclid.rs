use crate::complex::CubeComplex;
use crate::error::Error;
use crate::Result;
use serde::Deserialize;

/// Vertex of a subcomplex of Z^d.
pub type Point = Vec<i64>;

/// The half-space {x_coord ≥ level + 1/2} when `toward`, else its
/// complement {x_coord ≤ level}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GridHalfSpace {
    pub coord: usize,
    pub level: i64,
    pub toward: bool,
}

/// Cubical automorphism of Z^d of the form v ↦ (v_{perm[0]}+shift_0, …).
/// Coordinate sign flips are not representable, so no automorphism here
/// can invert a hyperplane.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PermShift {
    pub perm: Vec<usize>,
    pub shift: Vec<i64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Op {
    Lt,
    Le,
    Gt,
    Ge,
}

/// A vertex-removal rule: v is removed when Σ coeff·v_coord OP bound.
#[derive(Clone, Debug)]
struct Rule {
    terms: Vec<(usize, i64)>,
    op: Op,
    bound: i64,
    source: String,
}

impl Rule {
    fn removes(&self, v: &[i64]) -> bool {
        let total: i64 = self.terms.iter().map(|&(i, c)| c * v[i]).sum();
        match self.op {
            Op::Lt => total < self.bound,
            Op::Le => total <= self.bound,
            Op::Gt => total > self.bound,
            Op::Ge => total >= self.bound,
        }
    }
}

fn coord_index(name: &str, d: usize) -> Result<usize> {
    let idx = match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        "w" => Some(3),
        _ => name
            .strip_prefix('x')
            .and_then(|digits| digits.parse::<usize>().ok()),
    };
    match idx {
        Some(i) if i < d => Ok(i),
        _ => Err(Error::BadRule(format!("coordinate `{name}` out of range"))),
    }
}

/// Grammar: `coord OP rhs` with rhs = [±]coord [± integer] | integer.
/// Only difference and sum rules arise this way, which keeps the retained
/// set closed under coordinatewise medians.
fn parse_rule(text: &str, d: usize) -> Result<Rule> {
    let bad = || Error::BadRule(text.to_string());
    let (op_str, op) = ["<=", ">=", "<", ">"]
        .into_iter()
        .zip([Op::Le, Op::Ge, Op::Lt, Op::Gt])
        .find(|(s, _)| text.contains(s))
        .ok_or_else(bad)?;
    let (lhs, rhs) = text.split_once(op_str).ok_or_else(bad)?;
    let lhs_coord = coord_index(lhs.trim(), d)?;

    let compact: String = rhs.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = vec![(lhs_coord, 1i64)];
    let mut bound = 0i64;
    let mut rest = compact.as_str();
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    if rest.is_empty() {
        return Err(bad());
    }
    if rest.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
        let split = rest
            .find(['+', '-'])
            .unwrap_or(rest.len());
        let (name, tail) = rest.split_at(split);
        let rc = coord_index(name, d)?;
        if rc == lhs_coord {
            return Err(bad());
        }
        terms.push((rc, -sign));
        if !tail.is_empty() {
            bound = tail.parse::<i64>().map_err(|_| bad())?;
        }
    } else {
        bound = sign * rest.parse::<i64>().map_err(|_| bad())?;
    }
    Ok(Rule { terms, op, bound, source: text.to_string() })
}

#[derive(Deserialize)]
struct ForbiddenJson {
    rule: String,
}

#[derive(Deserialize)]
struct AutoJson {
    perm: Vec<usize>,
    shift: Vec<i64>,
}

#[derive(Deserialize)]
struct FixtureJson {
    d: usize,
    #[serde(default)]
    forbidden: Vec<ForbiddenJson>,
    automorphism: AutoJson,
}

/// A full subcomplex of Z^d on the vertices surviving the rules, carrying
/// one distinguished permutation-plus-shift automorphism.
pub struct EuclideanComplex {
    d: usize,
    rules: Vec<Rule>,
    auto: PermShift,
    orbit_rep: Vec<usize>,
}

const CHECK_RADIUS: i64 = 12;
const AXIS_RADIUS: i64 = 16;

impl EuclideanComplex {
    pub fn new(d: usize, rule_texts: &[&str], auto: PermShift) -> Result<Self> {
        if d == 0 || d > 8 {
            return Err(Error::BadRule(format!("dimension {d} unsupported")));
        }
        let mut sorted = auto.perm.clone();
        sorted.sort_unstable();
        if sorted != (0..d).collect::<Vec<_>>() || auto.shift.len() != d {
            return Err(Error::AutomorphismDoesNotPreserve(
                "perm/shift must have length d with perm a permutation".into(),
            ));
        }
        let rules = rule_texts
            .iter()
            .map(|t| parse_rule(t, d))
            .collect::<Result<Vec<_>>>()?;

        let mut orbit_rep = (0..d).collect::<Vec<usize>>();
        for i in 0..d {
            let mut j = auto.perm[i];
            while j != i {
                orbit_rep[i] = orbit_rep[i].min(j);
                j = auto.perm[j];
            }
        }

        let complex = EuclideanComplex { d, rules, auto, orbit_rep };
        complex.check_preserved()?;
        Ok(complex)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: FixtureJson =
            serde_json::from_str(text).map_err(|e| Error::BadRule(e.to_string()))?;
        let rules: Vec<&str> = parsed.forbidden.iter().map(|f| f.rule.as_str()).collect();
        EuclideanComplex::new(
            parsed.d,
            &rules,
            PermShift { perm: parsed.automorphism.perm, shift: parsed.automorphism.shift },
        )
    }

    /// Quarter-plane staircase: remove y < x−1, glide by (+2,+2).
    /// Swap glide on the full plane: g(x,y) = (y+1, x).
    /// Corner-glued square chain: keep −x−2 ≤ y ≤ −x, g(x,y) = (y+1, x−1).
    pub fn fixture(name: &str) -> Result<Self> {
        match name {
            "staircase" => EuclideanComplex::new(
                2,
                &["y < x - 1"],
                PermShift { perm: vec![0, 1], shift: vec![2, 2] },
            ),
            "glide-plane" => EuclideanComplex::new(
                2,
                &[],
                PermShift { perm: vec![1, 0], shift: vec![1, 0] },
            ),
            "subdivided" => EuclideanComplex::new(
                2,
                &["y > -x", "y < -x - 2"],
                PermShift { perm: vec![1, 0], shift: vec![1, -1] },
            ),
            other => Err(Error::UnknownFixture(other.to_string())),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn automorphism(&self) -> &PermShift {
        &self.auto
    }

    pub fn retained(&self, v: &[i64]) -> bool {
        self.rules.iter().all(|r| !r.removes(v))
    }

    pub fn rule_sources(&self) -> Vec<&str> {
        self.rules.iter().map(|r| r.source.as_str()).collect()
    }

    fn coord_name(&self, i: usize) -> String {
        if self.d <= 4 {
            ["x", "y", "z", "w"][i].to_string()
        } else {
            format!("x{i}")
        }
    }

    fn box_points(&self, radius: i64) -> Vec<Point> {
        let mut out = vec![Vec::new()];
        for _ in 0..self.d {
            let mut next = Vec::new();
            for p in &out {
                for c in -radius..=radius {
                    let mut q = p.clone();
                    q.push(c);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    fn check_preserved(&self) -> Result<()> {
        let inv = self.invert(&self.auto);
        for v in self.box_points(CHECK_RADIUS) {
            if !self.retained(&v) {
                continue;
            }
            for image in [self.act(&self.auto, &v), self.act(&inv, &v)] {
                if !self.retained(&image) {
                    return Err(Error::AutomorphismDoesNotPreserve(format!(
                        "{:?} maps to removed vertex {:?}",
                        v, image
                    )));
                }
            }
        }
        Ok(())
    }

    /// Smallest m > 0 with act_h(g^m, h) = h for some h in the coord's
    /// perm cycle, or the cycle length when levels drift.
    fn cycle_len(&self, coord: usize) -> usize {
        let mut len = 1;
        let mut j = self.auto.perm[coord];
        while j != coord {
            len += 1;
            j = self.auto.perm[j];
        }
        len
    }
}

impl CubeComplex for EuclideanComplex {
    type V = Point;
    type H = GridHalfSpace;
    type G = PermShift;

    fn base_vertex(&self) -> Point {
        match self.axis(&self.auto) {
            Ok((v, _)) => v,
            Err(_) => vec![0; self.d],
        }
    }

    fn is_vertex(&self, v: &Point) -> bool {
        v.len() == self.d && self.retained(v)
    }

    fn neighbors(&self, v: &Point) -> Vec<(Point, GridHalfSpace)> {
        let mut out = Vec::new();
        for i in 0..self.d {
            for step in [1i64, -1] {
                let mut u = v.clone();
                u[i] += step;
                if self.retained(&u) {
                    let h = if step == 1 {
                        GridHalfSpace { coord: i, level: v[i], toward: true }
                    } else {
                        GridHalfSpace { coord: i, level: v[i] - 1, toward: false }
                    };
                    out.push((u, h));
                }
            }
        }
        out
    }

    fn contains(&self, h: &GridHalfSpace, v: &Point) -> bool {
        if h.toward {
            v[h.coord] >= h.level + 1
        } else {
            v[h.coord] <= h.level
        }
    }

    fn complement(&self, h: &GridHalfSpace) -> GridHalfSpace {
        GridHalfSpace { coord: h.coord, level: h.level, toward: !h.toward }
    }

    fn label(&self, h: &GridHalfSpace) -> String {
        let sign = if h.toward { '+' } else { '-' };
        format!("{}{}", self.coord_name(self.orbit_rep[h.coord]), sign)
    }

    fn act(&self, g: &PermShift, v: &Point) -> Point {
        (0..self.d).map(|j| v[g.perm[j]] + g.shift[j]).collect()
    }

    fn act_h(&self, g: &PermShift, h: &GridHalfSpace) -> GridHalfSpace {
        let j = g.perm.iter().position(|&p| p == h.coord).expect("perm is total");
        GridHalfSpace { coord: j, level: h.level + g.shift[j], toward: h.toward }
    }

    fn identity(&self) -> PermShift {
        PermShift { perm: (0..self.d).collect(), shift: vec![0; self.d] }
    }

    fn compose(&self, a: &PermShift, b: &PermShift) -> PermShift {
        let perm = (0..self.d).map(|j| b.perm[a.perm[j]]).collect();
        let shift = (0..self.d).map(|j| b.shift[a.perm[j]] + a.shift[j]).collect();
        PermShift { perm, shift }
    }

    fn invert(&self, g: &PermShift) -> PermShift {
        let mut perm = vec![0; self.d];
        let mut shift = vec![0; self.d];
        for j in 0..self.d {
            perm[g.perm[j]] = j;
            shift[g.perm[j]] = -g.shift[j];
        }
        PermShift { perm, shift }
    }

    fn distance(&self, x: &Point, y: &Point) -> usize {
        x.iter().zip(y).map(|(a, b)| (a - b).unsigned_abs() as usize).sum()
    }

    fn axis(&self, g: &PermShift) -> Result<(Point, usize)> {
        let mut best: Option<(usize, usize, Point)> = None;
        for v in self.box_points(AXIS_RADIUS) {
            if !self.retained(&v) {
                continue;
            }
            let disp = self.distance(&v, &self.act(g, &v));
            let l1 = v.iter().map(|c| c.unsigned_abs() as usize).sum();
            let key = (disp, l1, v);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        match best {
            Some((0, _, _)) | None => Err(Error::Elliptic),
            Some((disp, _, v)) => Ok((v, disp)),
        }
    }

    fn transporters(
        &self,
        from: &GridHalfSpace,
        to: &GridHalfSpace,
        _radius: usize,
    ) -> (Vec<PermShift>, bool) {
        if from.toward != to.toward {
            return (Vec::new(), true);
        }
        let cycle = self.cycle_len(from.coord) as i64;
        let span = (from.level.abs() + to.level.abs() + 4) * cycle + cycle;
        let mut out = Vec::new();
        let mut images = std::collections::BTreeSet::new();
        for m in -span..=span {
            let gm = self.power(&self.auto, m);
            if self.act_h(&gm, from) == *to && images.insert(self.act_h(&gm, from)) {
                out.push(gm);
            }
        }
        (out, true)
    }

    fn is_tree_like(&self) -> bool {
        self.d == 1
    }

    fn is_raag(&self) -> bool {
        false
    }

    fn describe_vertex(&self, v: &Point) -> String {
        let coords: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        format!("({})", coords.join(","))
    }

    fn describe_halfspace(&self, h: &GridHalfSpace) -> String {
        let name = self.coord_name(h.coord);
        let cut = h.level as f64 + 0.5;
        if h.toward {
            format!("{name}>{cut}")
        } else {
            format!("{name}<{cut}")
        }
    }

    fn describe_g(&self, g: &PermShift) -> String {
        let inputs: Vec<String> = (0..self.d).map(|i| self.coord_name(i)).collect();
        let outputs: Vec<String> = (0..self.d)
            .map(|j| {
                let base = self.coord_name(g.perm[j]);
                match g.shift[j] {
                    0 => base,
                    s if s > 0 => format!("{base}+{s}"),
                    s => format!("{base}{s}"),
                }
            })
            .collect();
        format!("({})->({})", inputs.join(","), outputs.join(","))
    }
}
