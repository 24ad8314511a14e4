use crate::error::Error;
use crate::Result;

/// Finite strict partial order on elements 0..n, stored as bitset rows.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    n: usize,
    lt: Vec<Vec<u64>>,
}

/// Disjoint chains (each ascending) covering a poset, with the number of
/// chains equal to the width. `maximal_chain` flags a chain that is
/// maximal in the poset, when one was requested.
#[derive(Clone, Debug)]
pub struct ChainPartition {
    pub chains: Vec<Vec<usize>>,
    pub maximal_chain: Option<usize>,
}

fn get(row: &[u64], i: usize) -> bool {
    row[i / 64] >> (i % 64) & 1 == 1
}

fn set(row: &mut [u64], i: usize) {
    row[i / 64] |= 1 << (i % 64);
}

impl FinitePoset {
    /// Build from generating pairs a < b; the transitive closure is taken.
    /// A cycle makes the relation non-antisymmetric and is rejected.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let words = n.div_ceil(64).max(1);
        let mut lt = vec![vec![0u64; words]; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::Internal(format!("pair ({a},{b}) out of range")));
            }
            set(&mut lt[a], b);
        }
        for k in 0..n {
            for a in 0..n {
                if a != k && get(&lt[a], k) {
                    let (row_k, row_a) = if a < k {
                        let (lo, hi) = lt.split_at_mut(k);
                        (&hi[0], &mut lo[a])
                    } else {
                        let (lo, hi) = lt.split_at_mut(a);
                        (&lo[k], &mut hi[0])
                    };
                    for w in 0..words {
                        row_a[w] |= row_k[w];
                    }
                }
            }
        }
        for (a, row) in lt.iter().enumerate() {
            if get(row, a) {
                return Err(Error::Internal(format!("cycle through element {a}")));
            }
        }
        Ok(FinitePoset { n, lt })
    }

    pub fn from_relation(n: usize, rel: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && rel(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        FinitePoset::from_pairs(n, &pairs)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        get(&self.lt[a], b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        a == b || self.lt(a, b) || self.lt(b, a)
    }

    /// a < b with nothing strictly between.
    pub fn covers(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.n).any(|c| self.lt(a, c) && self.lt(c, b))
    }

    fn kuhn_augment(
        &self,
        a: usize,
        seen: &mut [bool],
        match_left: &mut [Option<usize>],
        match_right: &mut [Option<usize>],
    ) -> bool {
        for b in 0..self.n {
            if self.lt(a, b) && !seen[b] {
                seen[b] = true;
                let free = match match_right[b] {
                    None => true,
                    Some(prev) => self.kuhn_augment(prev, seen, match_left, match_right),
                };
                if free {
                    match_right[b] = Some(a);
                    match_left[a] = Some(b);
                    return true;
                }
            }
        }
        false
    }

    fn matching(&self) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut match_left = vec![None; self.n];
        let mut match_right = vec![None; self.n];
        for a in 0..self.n {
            let mut seen = vec![false; self.n];
            self.kuhn_augment(a, &mut seen, &mut match_left, &mut match_right);
        }
        (match_left, match_right)
    }

    /// Minimum chain cover; the number of chains equals the width.
    pub fn min_chain_cover(&self) -> ChainPartition {
        let (match_left, match_right) = self.matching();
        let mut chains = Vec::new();
        for head in 0..self.n {
            if match_right[head].is_some() {
                continue;
            }
            let mut chain = vec![head];
            let mut cur = head;
            while let Some(next) = match_left[cur] {
                chain.push(next);
                cur = next;
            }
            chains.push(chain);
        }
        ChainPartition { chains, maximal_chain: None }
    }

    /// A maximum antichain, one element per chain of the minimum cover.
    pub fn max_antichain(&self) -> Vec<usize> {
        let (match_left, match_right) = self.matching();
        let mut in_z_left = vec![false; self.n];
        let mut in_z_right = vec![false; self.n];
        let mut queue: Vec<usize> =
            (0..self.n).filter(|&a| match_left[a].is_none()).collect();
        for &a in &queue {
            in_z_left[a] = true;
        }
        while let Some(a) = queue.pop() {
            for b in 0..self.n {
                if self.lt(a, b) && match_left[a] != Some(b) && !in_z_right[b] {
                    in_z_right[b] = true;
                    if let Some(a2) = match_right[b] {
                        if !in_z_left[a2] {
                            in_z_left[a2] = true;
                            queue.push(a2);
                        }
                    }
                }
            }
        }
        let antichain: Vec<usize> =
            (0..self.n).filter(|&v| in_z_left[v] && !in_z_right[v]).collect();
        antichain
    }

    pub fn width(&self) -> usize {
        let cover = self.min_chain_cover();
        let antichain = self.max_antichain();
        assert_eq!(
            cover.chains.len(),
            antichain.len(),
            "chain cover and antichain certificates disagree"
        );
        cover.chains.len()
    }

    pub fn is_chain(&self, elems: &[usize]) -> bool {
        elems.windows(2).all(|w| self.lt(w[0], w[1]))
    }

    /// A chain is maximal when every outside element is incomparable to
    /// some member.
    pub fn is_maximal_chain(&self, chain: &[usize]) -> bool {
        if !self.is_chain(chain) {
            return false;
        }
        (0..self.n)
            .filter(|v| !chain.contains(v))
            .all(|z| chain.iter().any(|&m| !self.comparable(z, m)))
    }

    fn maximal_chains_lex(&self) -> MaximalChains<'_> {
        let minimals: Vec<usize> = (0..self.n)
            .filter(|&v| !(0..self.n).any(|u| self.lt(u, v)))
            .collect();
        MaximalChains { poset: self, stack: vec![(minimals, 0)], chain: Vec::new() }
    }

    fn subposet(&self, keep: &[usize]) -> FinitePoset {
        FinitePoset::from_relation(keep.len(), |a, b| self.lt(keep[a], keep[b]))
            .expect("restriction of a partial order")
    }

    /// Minimum chain cover in which the first chain is maximal in the
    /// whole poset. Maximal chains are tried in lexicographic order of
    /// element ids; one with width-(d−1) complement always exists.
    pub fn cover_with_maximal_chain(&self) -> Result<ChainPartition> {
        if self.n == 0 {
            return Ok(ChainPartition { chains: Vec::new(), maximal_chain: None });
        }
        let d = self.width();
        let mut tried = 0usize;
        for chain in self.maximal_chains_lex() {
            tried += 1;
            if tried > 1_000_000 {
                break;
            }
            let rest: Vec<usize> =
                (0..self.n).filter(|v| !chain.contains(v)).collect();
            let sub = self.subposet(&rest);
            let sub_cover = sub.min_chain_cover();
            if sub_cover.chains.len() == d - 1 {
                let mut chains = vec![chain];
                for c in sub_cover.chains {
                    chains.push(c.into_iter().map(|i| rest[i]).collect());
                }
                return Ok(ChainPartition { chains, maximal_chain: Some(0) });
            }
        }
        Err(Error::TheoremContradiction(
            "no maximal chain has a width-reducing complement".into(),
        ))
    }
}

/// Depth-first enumeration of maximal chains, branching over covers in
/// ascending id order.
struct MaximalChains<'p> {
    poset: &'p FinitePoset,
    stack: Vec<(Vec<usize>, usize)>,
    chain: Vec<usize>,
}

impl Iterator for MaximalChains<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        loop {
            let (options, cursor) = self.stack.last_mut()?;
            if *cursor >= options.len() {
                self.stack.pop();
                self.chain.pop();
                continue;
            }
            let v = options[*cursor];
            *cursor += 1;
            self.chain.push(v);
            let nexts: Vec<usize> =
                (0..self.poset.n).filter(|&u| self.poset.covers(v, u)).collect();
            if nexts.is_empty() {
                let done = self.chain.clone();
                self.chain.pop();
                return Some(done);
            }
            self.stack.push((nexts, 0));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_width(p: &FinitePoset) -> usize {
        assert!(p.len() <= 20);
        let mut best = 0;
        for mask in 0u32..1 << p.len() {
            let elems: Vec<usize> =
                (0..p.len()).filter(|&i| mask >> i & 1 == 1).collect();
            let anti = elems
                .iter()
                .all(|&a| elems.iter().all(|&b| a == b || !p.comparable(a, b)));
            if anti {
                best = best.max(elems.len());
            }
        }
        best
    }

    #[test]
    fn antichain_and_total_order() {
        let anti = FinitePoset::from_pairs(3, &[]).unwrap();
        let cover = anti.min_chain_cover();
        assert_eq!(cover.chains.len(), 3);
        assert!(cover.chains.iter().all(|c| c.len() == 1));
        let flagged = anti.cover_with_maximal_chain().unwrap();
        assert!(anti.is_maximal_chain(&flagged.chains[0]));

        let total =
            FinitePoset::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(total.width(), 1);
        let flagged = total.cover_with_maximal_chain().unwrap();
        assert_eq!(flagged.chains.len(), 1);
        assert_eq!(flagged.chains[0], vec![0, 1, 2, 3, 4]);
        assert_eq!(flagged.maximal_chain, Some(0));
    }

    #[test]
    fn rejects_cycles() {
        assert!(FinitePoset::from_pairs(2, &[(0, 1), (1, 0)]).is_err());
        assert!(FinitePoset::from_pairs(3, &[(0, 1), (1, 2), (2, 0)]).is_err());
    }

    /// Seven elements along an axis where only index-adjacent pairs are
    /// incomparable: the shape of a pentagon's [A, gA] poset.
    fn fence7() -> FinitePoset {
        let mut pairs = Vec::new();
        for i in 0..7usize {
            for j in i + 2..7 {
                pairs.push((i, j));
            }
        }
        FinitePoset::from_pairs(7, &pairs).unwrap()
    }

    #[test]
    fn fence_poset_partition() {
        let p = fence7();
        assert_eq!(p.width(), 2);
        let flagged = p.cover_with_maximal_chain().unwrap();
        assert_eq!(flagged.chains.len(), 2);
        assert_eq!(flagged.chains[0], vec![0, 2, 4, 6]);
        assert!(p.is_maximal_chain(&flagged.chains[0]));
        assert_eq!(flagged.chains[1], vec![1, 3, 5]);
    }

    #[test]
    fn random_posets_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let n = rng.gen_range(1..=10);
            let mut pairs = Vec::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.3) {
                        pairs.push((a, b));
                    }
                }
            }
            let p = FinitePoset::from_pairs(n, &pairs).unwrap();
            let w = brute_width(&p);
            assert_eq!(p.width(), w);
            let cover = p.min_chain_cover();
            assert_eq!(cover.chains.len(), w);
            let mut all: Vec<usize> = cover.chains.iter().flatten().copied().collect();
            all.sort_unstable();
            assert_eq!(all, (0..n).collect::<Vec<_>>());
            for chain in &cover.chains {
                assert!(p.is_chain(chain));
            }
            let anti = p.max_antichain();
            for &a in &anti {
                for &b in &anti {
                    assert!(a == b || !p.comparable(a, b));
                }
            }
            let flagged = p.cover_with_maximal_chain().unwrap();
            assert_eq!(flagged.chains.len(), w);
            assert!(p.is_maximal_chain(&flagged.chains[0]));
        }
    }
}
