use crate::error::Error;
use crate::Result;
use serde::Deserialize;
use std::fmt;

/// Adjacency is stored as one `u64` bitmask per generator.
pub const MAX_GENERATORS: usize = 64;

/// Index of a generator in a defining graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Gen(pub u8);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A signed generator occurrence. Ordering is by generator index first,
/// positive before negative; this fixes the shortlex order on words.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub gen: Gen,
    pub inverse: bool,
}

impl Letter {
    pub fn positive(gen: Gen) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

#[derive(Deserialize)]
struct GraphJson {
    generators: Vec<String>,
    #[serde(default)]
    edges: Vec<(String, String)>,
}

/// A finite simplicial graph on named generators. Commutation of two
/// distinct generators corresponds to an edge between them.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DefiningGraph {
    names: Vec<char>,
    adj: Vec<u64>,
}

impl DefiningGraph {
    pub fn new(names: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let mut chars = Vec::with_capacity(names.len());
        for name in names {
            let mut it = name.chars();
            match (it.next(), it.next()) {
                (Some(c), None) if c.is_ascii_lowercase() => chars.push(c),
                _ => return Err(Error::BadGeneratorName(name.to_string())),
            }
        }
        if chars.len() > MAX_GENERATORS {
            return Err(Error::TooManyGenerators { max: MAX_GENERATORS, got: chars.len() });
        }
        for (i, c) in chars.iter().enumerate() {
            if chars[..i].contains(c) {
                return Err(Error::BadGraph(format!("duplicate generator `{c}`")));
            }
        }
        let mut adj = vec![0u64; chars.len()];
        let lookup = |name: &str| -> Result<usize> {
            let c = name
                .chars()
                .next()
                .filter(|_| name.chars().count() == 1)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            chars
                .iter()
                .position(|&k| k == c)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        };
        for (a, b) in edges {
            let (i, j) = (lookup(a)?, lookup(b)?);
            if i == j {
                return Err(Error::BadGraph(format!("self-loop at `{a}`")));
            }
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
        }
        Ok(DefiningGraph { names: chars, adj })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::BadGraph(e.to_string()))?;
        let names: Vec<&str> = parsed.generators.iter().map(|s| s.as_str()).collect();
        let edges: Vec<(&str, &str)> =
            parsed.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        DefiningGraph::new(&names, &edges)
    }

    /// Free group on n generators (no edges).
    pub fn free(n: usize) -> Self {
        let names: Vec<String> =
            (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        DefiningGraph::new(&refs, &[]).expect("free graph is well formed")
    }

    /// Z^n: complete graph, all generators commute.
    pub fn complete(n: usize) -> Self {
        let names: Vec<String> =
            (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        let named: Vec<(&str, &str)> =
            edges.iter().map(|&(i, j)| (refs[i], refs[j])).collect();
        DefiningGraph::new(&refs, &named).expect("complete graph is well formed")
    }

    /// Cycle a-b-c-...-a of length n (n ≥ 3).
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let names: Vec<String> =
            (0..n).map(|i| char::from(b'a' + i as u8).to_string()).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            edges.push((refs[i], refs[(i + 1) % n]));
        }
        DefiningGraph::new(&refs, &edges).expect("cycle graph is well formed")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> + '_ {
        (0..self.names.len()).map(|i| Gen(i as u8))
    }

    pub fn name(&self, g: Gen) -> char {
        self.names[g.index()]
    }

    pub fn gen_by_name(&self, c: char) -> Result<Gen> {
        self.names
            .iter()
            .position(|&k| k == c)
            .map(|i| Gen(i as u8))
            .ok_or_else(|| Error::UnknownGenerator(c.to_string()))
    }

    /// Link of a generator as a bitmask over generator indices.
    pub fn link(&self, g: Gen) -> u64 {
        self.adj[g.index()]
    }

    pub fn adjacent(&self, a: Gen, b: Gen) -> bool {
        self.adj[a.index()] & (1 << b.index()) != 0
    }

    /// True when the set of generators in `mask` is contained in lk(g).
    pub fn mask_in_link(&self, mask: u64, g: Gen) -> bool {
        mask & !self.adj[g.index()] == 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// No edges at all; quasimorphism defect bounds tighten in this case.
    pub fn is_tree_free(&self) -> bool {
        self.adj.iter().all(|&m| m == 0)
    }

    /// Parse a word: optional whitespace, lowercase = generator,
    /// uppercase = inverse of the lowercase generator.
    pub fn parse_letters(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            }
            let (base, inverse) = if c.is_ascii_uppercase() {
                (c.to_ascii_lowercase(), true)
            } else {
                (c, false)
            };
            let gen = self
                .gen_by_name(base)
                .map_err(|_| Error::BadWord(format!("unknown letter `{c}` in `{text}`")))?;
            out.push(Letter { gen, inverse });
        }
        Ok(out)
    }

    pub fn format_letters(&self, letters: &[Letter]) -> String {
        letters
            .iter()
            .map(|l| {
                let c = self.name(l.gen);
                if l.inverse {
                    c.to_ascii_uppercase()
                } else {
                    c
                }
            })
            .collect()
    }
}

impl fmt::Display for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "graph[")?;
        for (i, c) in self.names.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ";")?;
        let mut first = true;
        for i in 0..self.names.len() {
            for j in i + 1..self.names.len() {
                if self.adj[i] & (1 << j) != 0 {
                    if !first {
                        write!(f, ",")?;
                    }
                    write!(f, " {}{}", self.names[i], self.names[j])?;
                    first = false;
                }
            }
        }
        write!(f, "]")
    }
}
