//! Permutations of a finite index set, their orbit structure, and the graph
//! defect of a pair.
//!
//! The index set is always `{0, .., n-1}` internally; cycle notation at the
//! text boundary is 1-based, so `"(1 2 3)(4 5)"` over domain size 5 maps
//! index 0 to 1, 1 to 2, 2 to 0, 3 to 4, and 4 to 3. Composition applies the
//! right factor first: `(σ·τ)(i) = σ(τ(i))`.

use std::fmt;

use crate::error::Error;

/// A permutation of `{0, .., n-1}`, stored as its image sequence.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { images: (0..n).collect() }
    }

    /// Builds from the image sequence, rejecting non-bijections.
    pub fn from_images(images: Vec<usize>) -> Result<Perm, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!(
                    "images {images:?} are not a bijection of 0..{n}"
                )));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Parses 1-based cycle notation over a declared domain size.
    ///
    /// The identity is written `"()"`. Points left unmentioned are fixed.
    pub fn parse(text: &str, n: usize) -> Result<Perm, Error> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        let s = text.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty permutation text".into()));
        }
        let mut rest = s;
        while !rest.is_empty() {
            let Some(open) = rest.find('(') else {
                return Err(Error::Parse(format!("expected `(` in `{text}`")));
            };
            if !rest[..open].trim().is_empty() {
                return Err(Error::Parse(format!("stray text in `{text}`")));
            }
            let Some(close) = rest.find(')') else {
                return Err(Error::Parse(format!("unclosed cycle in `{text}`")));
            };
            let body = &rest[open + 1..close];
            rest = &rest[close + 1..];
            let points: Vec<usize> = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad index `{t}` in `{text}`")))
                })
                .collect::<Result<_, _>>()?;
            if points.len() == 1 {
                return Err(Error::Parse(format!("singleton cycle in `{text}`")));
            }
            for &p in &points {
                if p == 0 || p > n {
                    return Err(Error::Parse(format!(
                        "index {p} out of range 1..={n} in `{text}`"
                    )));
                }
                if touched[p - 1] {
                    return Err(Error::Parse(format!("index {p} repeated in `{text}`")));
                }
                touched[p - 1] = true;
            }
            for w in 0..points.len() {
                let from = points[w] - 1;
                let to = points[(w + 1) % points.len()] - 1;
                images[from] = to;
            }
        }
        let trailing = rest.trim();
        if !trailing.is_empty() {
            return Err(Error::Parse(format!("stray text `{trailing}` in `{text}`")));
        }
        Perm::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `(self·other)(i) = self(other(i))`: `other` acts first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "composing permutations of different domains");
        Perm {
            images: (0..self.n()).map(|i| self.apply(other.apply(i))).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.n()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self^k(i)` for `k >= 0`.
    pub fn apply_pow(&self, i: usize, k: usize) -> usize {
        let mut j = i;
        for _ in 0..k {
            j = self.apply(j);
        }
        j
    }

    /// Conjugate `other^{-1} · self · other`.
    pub fn conjugate_by(&self, other: &Perm) -> Perm {
        other.inverse().compose(self).compose(other)
    }
}

impl fmt::Display for Perm {
    /// Cycle notation, 1-based, cycles ordered by smallest member.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut cycles = Vec::new();
        let mut seen = vec![false; self.n()];
        for start in 0..self.n() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            cycles.push(cycle);
        }
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            let inner: Vec<String> = cycle.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", inner.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

/// All permutations of `{0, .., n-1}` in lexicographic image order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    use itertools::Itertools;
    (0..n)
        .permutations(n)
        .map(|images| Perm { images })
        .collect()
}

/// Disjoint orbits covering the index set, each block sorted, blocks ordered
/// by smallest member. The representative of a block is its smallest index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl OrbitPartition {
    fn from_block_of(mut ids: Vec<usize>) -> OrbitPartition {
        // renumber block ids by order of smallest member
        let n = ids.len();
        let mut remap = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let id = ids[i];
            if remap[id] == usize::MAX {
                remap[id] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[remap[id]].push(i);
        }
        for id in ids.iter_mut() {
            *id = remap[*id];
        }
        OrbitPartition { blocks, block_of: ids }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_index(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b[0]).collect()
    }

    pub fn domain_size(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_transitive(&self) -> bool {
        self.blocks.len() == 1
    }

    /// True when every block is contained in some block of `coarser`.
    pub fn refines(&self, coarser: &OrbitPartition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&i| coarser.block_index(i) == coarser.block_index(b[0])))
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Orbits of the cyclic group generated by `p`.
pub fn orbits(p: &Perm) -> OrbitPartition {
    joint_orbits(&[p])
}

/// Orbits of the subgroup generated by all the given permutations, computed
/// by union-find over the edges `(i, p(i))`.
pub fn joint_orbits(ps: &[&Perm]) -> OrbitPartition {
    assert!(!ps.is_empty(), "joint_orbits needs at least one permutation");
    let n = ps[0].n();
    for p in ps {
        assert_eq!(p.n(), n, "joint_orbits over mismatched domains");
    }
    let mut dsu = Dsu::new(n);
    for p in ps {
        for i in 0..n {
            dsu.union(i, p.apply(i));
        }
    }
    let ids: Vec<usize> = (0..n).map(|i| dsu.find(i)).collect();
    OrbitPartition::from_block_of(ids)
}

/// Length `l_σ = n - |o(σ)|`, the minimal number of transpositions.
pub fn length(p: &Perm) -> usize {
    p.n() - orbits(p).len()
}

/// Graph defect of a pair, one value per joint orbit.
#[derive(Clone, Debug)]
pub struct GraphDefect {
    pub joint: OrbitPartition,
    /// `values[i]` belongs to `joint.blocks()[i]`.
    pub values: Vec<u64>,
}

/// Evaluates `gd(σ,τ)_c = (|c| + 2 - |c/<σ>| - |c/<τ>| - |c/<στ>|) / 2` on
/// every joint orbit `c`. The result must be a non-negative integer; anything
/// else is reported as an internal invariant violation.
pub fn graph_defect(sigma: &Perm, tau: &Perm) -> Result<GraphDefect, Error> {
    assert_eq!(sigma.n(), tau.n(), "graph_defect over mismatched domains");
    let joint = joint_orbits(&[sigma, tau]);
    let o_sigma = orbits(sigma);
    let o_tau = orbits(tau);
    let o_prod = orbits(&sigma.compose(tau));
    let mut values = Vec::with_capacity(joint.len());
    for c in joint.blocks() {
        let count_in = |part: &OrbitPartition| {
            let mut ids: Vec<usize> = c.iter().map(|&i| part.block_index(i)).collect();
            ids.sort_unstable();
            ids.dedup();
            ids.len() as i64
        };
        let numer = c.len() as i64 + 2 - count_in(&o_sigma) - count_in(&o_tau) - count_in(&o_prod);
        if numer < 0 || numer % 2 != 0 {
            return Err(Error::InternalInvariant(format!(
                "graph defect of sigma={sigma} tau={tau} on orbit {:?} evaluates to {numer}/2",
                c
            )));
        }
        values.push((numer / 2) as u64);
    }
    Ok(GraphDefect { joint, values })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str, n: usize) -> Perm {
        Perm::parse(text, n).unwrap()
    }

    #[test]
    fn orbits_of_a_mixed_permutation() {
        // sigma(1)=3, sigma(2)=1, sigma(3)=2, sigma(4)=5, sigma(5)=4 (1-based)
        let sigma = Perm::from_images(vec![2, 0, 1, 4, 3]).unwrap();
        let o = orbits(&sigma);
        assert_eq!(o.blocks(), &[vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(o.representatives(), vec![0, 3]);
    }

    #[test]
    fn orbits_identity_and_double_transposition() {
        let o = orbits(&Perm::identity(4));
        assert_eq!(o.len(), 4);
        let o = orbits(&p("(1 2)(3 4)", 4));
        assert_eq!(o.blocks(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn joint_orbit_examples() {
        let s = p("(1 2)", 3);
        let t = p("(2 3)", 3);
        assert!(joint_orbits(&[&s, &t]).is_transitive());

        let id = Perm::identity(2);
        assert_eq!(joint_orbits(&[&id, &id]).len(), 2);

        let s = p("(1 2)", 4);
        let t = p("(3 4)", 4);
        assert_eq!(joint_orbits(&[&s, &t]).blocks(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn length_examples() {
        assert_eq!(length(&Perm::identity(5)), 0);
        assert_eq!(length(&p("(1 2 3 4 5)", 5)), 4);
        assert_eq!(length(&p("(1 2)(3 4)", 4)), 2);
    }

    #[test]
    fn graph_defect_examples() {
        // equal 3-cycles: one joint orbit with defect 1
        let s = p("(1 2 3)", 3);
        let gd = graph_defect(&s, &s).unwrap();
        assert_eq!(gd.values, vec![1]);

        let gd = graph_defect(&p("(1 2)", 2), &Perm::identity(2)).unwrap();
        assert_eq!(gd.values, vec![0]);

        let gd = graph_defect(&p("(1 2)", 3), &p("(2 3)", 3)).unwrap();
        assert_eq!(gd.values, vec![0]);
    }

    #[test]
    fn compose_applies_right_factor_first() {
        let s = p("(1 2)", 3);
        let t = p("(2 3)", 3);
        // (s·t)(2) = s(t(2)) = s(3) = 3  (1-based)
        assert_eq!(s.compose(&t).apply(1), 2);
        assert_eq!(format!("{}", s.compose(&t)), "(1 2 3)");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Perm::parse("(1 2", 3).is_err());
        assert!(Perm::parse("(0 1)", 3).is_err());
        assert!(Perm::parse("(1 4)", 3).is_err());
        assert!(Perm::parse("(1 2)(2 3)", 3).is_err());
        assert!(Perm::parse("(1)", 3).is_err());
        assert!(Perm::parse("", 3).is_err());
    }

    #[test]
    fn display_round_trip() {
        for text in ["()", "(1 2)", "(1 2 3)(4 5)", "(1 3)(2 5 4)"] {
            let q = p(text, 5);
            assert_eq!(Perm::parse(&q.to_string(), 5).unwrap(), q);
        }
        assert_eq!(p("(2 1)", 2).to_string(), "(1 2)");
    }
}
