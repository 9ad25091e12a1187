//! Finite groups: table-free structural constructions (cyclic, symmetric,
//! direct products, wreath products), conjugacy machinery, and the wreath
//! combinatorics used by the rest of the crate: cycle products, the `nu` and
//! `epsilon` elements, conjugation orbits inside cosets, centralizers, and
//! fiber profiles of the orbit multiplication map.

use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;

use crate::error::{guard_cap, Error};
use crate::perm::{all_perms, joint_orbits, orbits, Perm};

/// An element of one of the structural groups.
///
/// Elements are plain data; the group they belong to supplies the operations.
/// The derived order — lexicographic on components, then on permutation
/// images — is the canonical element order used in every report.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElt {
    /// Residue in a cyclic group.
    Cyc(u32),
    /// Element of a symmetric group.
    Perm(Perm),
    /// Element of a direct product.
    Pair(Box<GroupElt>, Box<GroupElt>),
    /// Element `g·σ` of a wreath product: components in `G^I` and a permutation.
    Wreath(Vec<GroupElt>, Perm),
}

impl fmt::Display for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElt::Cyc(k) => write!(f, "{k}"),
            GroupElt::Perm(p) => write!(f, "{p}"),
            GroupElt::Pair(a, b) => write!(f, "({a},{b})"),
            GroupElt::Wreath(comps, sigma) => {
                let inner: Vec<String> = comps.iter().map(|c| c.to_string()).collect();
                write!(f, "({}){}", inner.join(","), sigma)
            }
        }
    }
}

impl fmt::Debug for GroupElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finite group given structurally. Elements are never table rows; wreath
/// products in particular are handled through `GroupElt::Wreath` so that
/// `|G|^n · n!` never has to be materialized as a multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiniteGroup {
    Cyclic(u32),
    Symmetric(usize),
    Product(Box<FiniteGroup>, Box<FiniteGroup>),
    Wreath(Box<FiniteGroup>, usize),
}

pub fn make_cyclic(n: u32) -> FiniteGroup {
    assert!(n >= 1, "cyclic group needs n >= 1");
    FiniteGroup::Cyclic(n)
}

pub fn make_symmetric(n: usize) -> FiniteGroup {
    assert!(n >= 1, "symmetric group needs a non-empty index set");
    FiniteGroup::Symmetric(n)
}

pub fn direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup {
    FiniteGroup::Product(Box::new(g), Box::new(h))
}

pub fn wreath_product(g: FiniteGroup, n: usize) -> FiniteGroup {
    assert!(n >= 1, "wreath product needs a non-empty index set");
    FiniteGroup::Wreath(Box::new(g), n)
}

impl FiniteGroup {
    pub fn order(&self) -> u128 {
        match self {
            FiniteGroup::Cyclic(n) => *n as u128,
            FiniteGroup::Symmetric(n) => (1..=*n as u128).product(),
            FiniteGroup::Product(g, h) => g.order() * h.order(),
            FiniteGroup::Wreath(g, n) => {
                g.order().pow(*n as u32) * FiniteGroup::Symmetric(*n).order()
            }
        }
    }

    pub fn identity(&self) -> GroupElt {
        match self {
            FiniteGroup::Cyclic(_) => GroupElt::Cyc(0),
            FiniteGroup::Symmetric(n) => GroupElt::Perm(Perm::identity(*n)),
            FiniteGroup::Product(g, h) => {
                GroupElt::Pair(Box::new(g.identity()), Box::new(h.identity()))
            }
            FiniteGroup::Wreath(g, n) => {
                GroupElt::Wreath(vec![g.identity(); *n], Perm::identity(*n))
            }
        }
    }

    pub fn mul(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        match (self, a, b) {
            (FiniteGroup::Cyclic(n), GroupElt::Cyc(x), GroupElt::Cyc(y)) => {
                GroupElt::Cyc((x + y) % n)
            }
            (FiniteGroup::Symmetric(_), GroupElt::Perm(p), GroupElt::Perm(q)) => {
                GroupElt::Perm(p.compose(q))
            }
            (FiniteGroup::Product(g, h), GroupElt::Pair(a1, a2), GroupElt::Pair(b1, b2)) => {
                GroupElt::Pair(Box::new(g.mul(a1, b1)), Box::new(h.mul(a2, b2)))
            }
            (FiniteGroup::Wreath(g, _), GroupElt::Wreath(ga, sa), GroupElt::Wreath(gb, sb)) => {
                // gσ·hτ = (g · h^{σ^{-1}}) στ with (h^σ)_i = h_{σ(i)}
                let sa_inv = sa.inverse();
                let comps = (0..ga.len())
                    .map(|i| g.mul(&ga[i], &gb[sa_inv.apply(i)]))
                    .collect();
                GroupElt::Wreath(comps, sa.compose(sb))
            }
            _ => panic!("element shape does not match group {self:?}"),
        }
    }

    pub fn inv(&self, a: &GroupElt) -> GroupElt {
        match (self, a) {
            (FiniteGroup::Cyclic(n), GroupElt::Cyc(x)) => GroupElt::Cyc((n - x) % n),
            (FiniteGroup::Symmetric(_), GroupElt::Perm(p)) => GroupElt::Perm(p.inverse()),
            (FiniteGroup::Product(g, h), GroupElt::Pair(a1, a2)) => {
                GroupElt::Pair(Box::new(g.inv(a1)), Box::new(h.inv(a2)))
            }
            (FiniteGroup::Wreath(g, _), GroupElt::Wreath(comps, sigma)) => {
                // (gσ)^{-1} = (h, σ^{-1}) with h_j = g_{σ(j)}^{-1}
                let inv_comps = (0..comps.len())
                    .map(|j| g.inv(&comps[sigma.apply(j)]))
                    .collect();
                GroupElt::Wreath(inv_comps, sigma.inverse())
            }
            _ => panic!("element shape does not match group {self:?}"),
        }
    }

    pub fn conjugate(&self, x: &GroupElt, by: &GroupElt) -> GroupElt {
        self.mul(&self.mul(&self.inv(by), x), by)
    }

    pub fn commutator(&self, a: &GroupElt, b: &GroupElt) -> GroupElt {
        self.mul(&self.mul(a, b), &self.mul(&self.inv(a), &self.inv(b)))
    }

    /// All elements in canonical order.
    pub fn elements(&self, cap: u64) -> Result<Vec<GroupElt>, Error> {
        guard_cap(self.order(), cap)?;
        let mut out = match self {
            FiniteGroup::Cyclic(n) => (0..*n).map(GroupElt::Cyc).collect::<Vec<_>>(),
            FiniteGroup::Symmetric(n) => all_perms(*n).into_iter().map(GroupElt::Perm).collect(),
            FiniteGroup::Product(g, h) => {
                let (gs, hs) = (g.elements(cap)?, h.elements(cap)?);
                gs.iter()
                    .cartesian_product(hs.iter())
                    .map(|(a, b)| GroupElt::Pair(Box::new(a.clone()), Box::new(b.clone())))
                    .collect()
            }
            FiniteGroup::Wreath(g, n) => {
                let tuples = component_tuples(g, *n, cap)?;
                let perms = all_perms(*n);
                let mut out = Vec::with_capacity(tuples.len() * perms.len());
                for t in &tuples {
                    for p in &perms {
                        out.push(GroupElt::Wreath(t.clone(), p.clone()));
                    }
                }
                out
            }
        };
        out.sort();
        Ok(out)
    }

    /// Structural abelianness; the test suite checks it against pairwise
    /// commutation.
    pub fn is_abelian(&self) -> bool {
        match self {
            FiniteGroup::Cyclic(_) => true,
            FiniteGroup::Symmetric(n) => *n <= 2,
            FiniteGroup::Product(g, h) => g.is_abelian() && h.is_abelian(),
            FiniteGroup::Wreath(g, n) => {
                if *n == 1 {
                    g.is_abelian()
                } else {
                    g.order() == 1 && *n <= 2
                }
            }
        }
    }

    /// Conjugacy classes by brute-force orbit closure, classes ordered by
    /// their smallest element.
    pub fn conjugacy_classes(&self, cap: u64) -> Result<Vec<Vec<GroupElt>>, Error> {
        let elems = self.elements(cap)?;
        let mut seen: HashMap<&GroupElt, bool> = elems.iter().map(|e| (e, false)).collect();
        let mut classes = Vec::new();
        for e in &elems {
            if seen[e] {
                continue;
            }
            let mut class: Vec<GroupElt> =
                elems.iter().map(|x| self.conjugate(e, x)).collect();
            class.sort();
            class.dedup();
            for c in &class {
                if let Some(flag) = seen.get_mut(c) {
                    *flag = true;
                }
            }
            classes.push(class);
        }
        Ok(classes)
    }

    /// Canonical spec text, `"wreath:cyclic:2,n=3"` style.
    pub fn spec_string(&self) -> String {
        match self {
            FiniteGroup::Cyclic(n) => format!("cyclic:{n}"),
            FiniteGroup::Symmetric(n) => format!("sym:{n}"),
            FiniteGroup::Product(g, h) => {
                format!("prod:{},{}", g.spec_string(), h.spec_string())
            }
            FiniteGroup::Wreath(g, n) => format!("wreath:{},n={}", g.spec_string(), n),
        }
    }

    /// Parses the group-spec mini-language: `cyclic:4`, `sym:3`,
    /// `prod:cyclic:2,cyclic:2`, `wreath:cyclic:3,n=2`. Case-sensitive, no
    /// whitespace.
    pub fn parse_spec(text: &str) -> Result<FiniteGroup, Error> {
        let (group, rest) = parse_spec_prefix(text)?;
        if !rest.is_empty() {
            return Err(Error::Parse(format!("trailing `{rest}` in group spec `{text}`")));
        }
        Ok(group)
    }
}

fn parse_spec_prefix(text: &str) -> Result<(FiniteGroup, &str), Error> {
    fn parse_number(s: &str) -> Result<(u64, &str), Error> {
        let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
        if end == 0 {
            return Err(Error::Parse(format!("expected a number at `{s}`")));
        }
        let n: u64 = s[..end]
            .parse()
            .map_err(|_| Error::Parse(format!("bad number in `{s}`")))?;
        Ok((n, &s[end..]))
    }

    if let Some(rest) = text.strip_prefix("cyclic:") {
        let (n, rest) = parse_number(rest)?;
        if n == 0 {
            return Err(Error::Parse("cyclic:0 is not a group".into()));
        }
        Ok((FiniteGroup::Cyclic(n as u32), rest))
    } else if let Some(rest) = text.strip_prefix("sym:") {
        let (n, rest) = parse_number(rest)?;
        if n == 0 {
            return Err(Error::Parse("sym:0 is not supported; use sym:1".into()));
        }
        Ok((FiniteGroup::Symmetric(n as usize), rest))
    } else if let Some(rest) = text.strip_prefix("prod:") {
        let (g, rest) = parse_spec_prefix(rest)?;
        let rest = rest
            .strip_prefix(',')
            .ok_or_else(|| Error::Parse(format!("expected `,` in product spec `{text}`")))?;
        let (h, rest) = parse_spec_prefix(rest)?;
        Ok((direct_product(g, h), rest))
    } else if let Some(rest) = text.strip_prefix("wreath:") {
        let (g, rest) = parse_spec_prefix(rest)?;
        let rest = rest
            .strip_prefix(",n=")
            .ok_or_else(|| Error::Parse(format!("expected `,n=` in wreath spec `{text}`")))?;
        let (n, rest) = parse_number(rest)?;
        if n == 0 {
            return Err(Error::Parse("wreath needs n >= 1".into()));
        }
        Ok((wreath_product(g, n as usize), rest))
    } else {
        Err(Error::Parse(format!("unknown group spec `{text}`")))
    }
}

/// All tuples in `G^n` in lexicographic order.
pub fn component_tuples(g: &FiniteGroup, n: usize, cap: u64) -> Result<Vec<Vec<GroupElt>>, Error> {
    guard_cap(g.order().pow(n as u32), cap)?;
    let base = g.elements(cap)?;
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * base.len());
        for t in &out {
            for b in &base {
                let mut t2 = t.clone();
                t2.push(b.clone());
                next.push(t2);
            }
        }
        out = next;
    }
    Ok(out)
}

pub fn wreath_elt(comps: Vec<GroupElt>, sigma: Perm) -> GroupElt {
    assert_eq!(comps.len(), sigma.n(), "component count must match the permutation domain");
    GroupElt::Wreath(comps, sigma)
}

/// Splits a wreath element into its components and permutation.
pub fn wreath_parts(e: &GroupElt) -> (&[GroupElt], &Perm) {
    match e {
        GroupElt::Wreath(comps, sigma) => (comps, sigma),
        _ => panic!("not a wreath element: {e}"),
    }
}

fn check_reps(sigma: &Perm, reps: &[usize]) -> Result<(), Error> {
    let o = orbits(sigma);
    if reps.len() != o.len() {
        return Err(Error::BadRepresentative { rep: usize::MAX });
    }
    for (k, block) in o.blocks().iter().enumerate() {
        if !block.contains(&reps[k]) {
            return Err(Error::BadRepresentative { rep: reps[k] });
        }
    }
    Ok(())
}

/// Cycle product `ψ^σ(g)`: one value per σ-orbit, the components of `g`
/// multiplied backwards along the cycle starting at the chosen
/// representative, `g_{σ^{|a|-1}(i_a)} ··· g_{σ(i_a)} g_{i_a}`.
///
/// `reps[k]` is the chosen representative of the k-th orbit (orbits ordered
/// by smallest member). The componentwise conjugacy class of the result does
/// not depend on that choice.
pub fn cycle_product(
    g: &FiniteGroup,
    comps: &[GroupElt],
    sigma: &Perm,
    reps: &[usize],
) -> Result<Vec<GroupElt>, Error> {
    check_reps(sigma, reps)?;
    let o = orbits(sigma);
    let mut out = Vec::with_capacity(o.len());
    for (k, block) in o.blocks().iter().enumerate() {
        let mut acc = g.identity();
        let mut i = reps[k];
        for _ in 0..block.len() {
            acc = g.mul(&comps[i], &acc);
            i = sigma.apply(i);
        }
        out.push(acc);
    }
    Ok(out)
}

/// `ν^σ(g)`: at `σ^m(i_a)` the partial product
/// `g_{σ^m(i_a)} g_{σ^{m-1}(i_a)} ··· g_{i_a}`.
pub fn nu(
    g: &FiniteGroup,
    comps: &[GroupElt],
    sigma: &Perm,
    reps: &[usize],
) -> Result<Vec<GroupElt>, Error> {
    check_reps(sigma, reps)?;
    let o = orbits(sigma);
    let mut out = vec![g.identity(); comps.len()];
    for (k, block) in o.blocks().iter().enumerate() {
        let mut acc = g.identity();
        let mut i = reps[k];
        for _ in 0..block.len() {
            acc = g.mul(&comps[i], &acc);
            out[i] = acc.clone();
            i = sigma.apply(i);
        }
    }
    Ok(out)
}

/// `ε_𝔤`: the element of `G^I` equal to `𝔤_a` at each representative `i_a`
/// and the identity elsewhere.
pub fn epsilon(
    g: &FiniteGroup,
    gfrak: &[GroupElt],
    sigma: &Perm,
    reps: &[usize],
) -> Result<Vec<GroupElt>, Error> {
    check_reps(sigma, reps)?;
    let mut out = vec![g.identity(); sigma.n()];
    for (k, &i) in reps.iter().enumerate() {
        out[i] = gfrak[k].clone();
    }
    Ok(out)
}

/// Conjugacy class lookup for a base group.
#[derive(Clone, Debug)]
pub struct ClassTable {
    pub classes: Vec<Vec<GroupElt>>,
    pub index: HashMap<GroupElt, usize>,
}

impl ClassTable {
    pub fn new(g: &FiniteGroup, cap: u64) -> Result<ClassTable, Error> {
        let classes = g.conjugacy_classes(cap)?;
        let mut index = HashMap::new();
        for (k, class) in classes.iter().enumerate() {
            for e in class {
                index.insert(e.clone(), k);
            }
        }
        Ok(ClassTable { classes, index })
    }

    pub fn class_of(&self, e: &GroupElt) -> usize {
        self.index[e]
    }

    /// Representative (smallest element) of class `k`.
    pub fn rep(&self, k: usize) -> &GroupElt {
        &self.classes[k][0]
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// Class-vector signature of `gσ`: the conjugacy class of each cycle-product
/// component, indexed by the σ-orbits. Classifies the `G^I`-conjugation
/// orbit of `gσ` inside the coset `G^I σ`.
pub fn orbit_signature(
    g: &FiniteGroup,
    table: &ClassTable,
    comps: &[GroupElt],
    sigma: &Perm,
) -> Vec<usize> {
    let reps = orbits(sigma).representatives();
    let psi = cycle_product(g, comps, sigma, &reps).expect("default representatives are valid");
    psi.iter().map(|e| table.class_of(e)).collect()
}

/// The orbit `O_𝔤 σ`: all `gσ` in the coset whose cycle-product class vector
/// matches that of `𝔤`, enumerated over all of `G^I`.
pub fn orbit_o(
    g: &FiniteGroup,
    table: &ClassTable,
    gfrak: &[GroupElt],
    sigma: &Perm,
    cap: u64,
) -> Result<Vec<GroupElt>, Error> {
    let want: Vec<usize> = gfrak.iter().map(|e| table.class_of(e)).collect();
    let tuples = component_tuples(g, sigma.n(), cap)?;
    let mut out = Vec::new();
    for t in tuples {
        if orbit_signature(g, table, &t, sigma) == want {
            out.push(GroupElt::Wreath(t, sigma.clone()));
        }
    }
    Ok(out)
}

/// Brute-force centralizer of a subset inside `g`.
pub fn centralizer(g: &FiniteGroup, subset: &[GroupElt], cap: u64) -> Result<Vec<GroupElt>, Error> {
    Ok(g
        .elements(cap)?
        .into_iter()
        .filter(|x| subset.iter().all(|s| g.mul(x, s) == g.mul(s, x)))
        .collect())
}

/// Checks the centralizer factorization: `Z_{G^I}(ε_𝔤 σ)` taken inside the
/// wreath product equals the product of diagonal centralizers
/// `∏_a Δ^a_{Z_G(𝔤_a)}`.
pub fn centralizer_formula_check(
    g: &FiniteGroup,
    gfrak: &[GroupElt],
    sigma: &Perm,
    cap: u64,
) -> Result<bool, Error> {
    let n = sigma.n();
    let wreath = wreath_product(g.clone(), n);
    let o = orbits(sigma);
    let reps = o.representatives();
    let eps = epsilon(g, gfrak, sigma, &reps)?;
    let eps_sigma = GroupElt::Wreath(eps, sigma.clone());

    // left side: brute force over G^I embedded as (f, id)
    let mut brute = Vec::new();
    for t in component_tuples(g, n, cap)? {
        let f = GroupElt::Wreath(t, Perm::identity(n));
        if wreath.mul(&f, &eps_sigma) == wreath.mul(&eps_sigma, &f) {
            brute.push(f);
        }
    }

    // right side: choose one centralizer element per orbit, constant on it
    let centralizers: Vec<Vec<GroupElt>> = gfrak
        .iter()
        .map(|ga| centralizer(g, std::slice::from_ref(ga), cap))
        .collect::<Result<_, _>>()?;
    let mut built = Vec::new();
    for choice in centralizers.iter().multi_cartesian_product() {
        let mut comps = vec![g.identity(); n];
        for (k, block) in o.blocks().iter().enumerate() {
            for &i in block {
                comps[i] = choice[k].clone();
            }
        }
        built.push(GroupElt::Wreath(comps, Perm::identity(n)));
    }
    built.sort();
    Ok(brute == built)
}

/// One target orbit of the multiplication map together with its fiber sizes.
#[derive(Clone, Debug)]
pub struct FiberTarget {
    /// Cycle-product value vector over the orbits of `στ` (G abelian, so
    /// classes are single elements).
    pub w: Vec<GroupElt>,
    /// Number of distinct elements of the coset hit with this signature.
    pub orbit_size: usize,
    /// Preimage count for each hit element, sorted.
    pub fiber_sizes: Vec<usize>,
}

/// Fiber statistics of `O_𝔤σ × O_𝔥τ → ⊔_𝔴 O_𝔴 στ` under coset
/// multiplication.
#[derive(Clone, Debug)]
pub struct FiberProfile {
    /// Closed-form prediction `|G|^{n + 1 - |o(σ)| - |o(τ)|}`.
    pub expected_fiber: u128,
    pub targets: Vec<FiberTarget>,
}

impl FiberProfile {
    pub fn all_fibers_match(&self) -> bool {
        self.targets
            .iter()
            .all(|t| t.fiber_sizes.iter().all(|&s| s as u128 == self.expected_fiber))
    }
}

/// Computes the full multiplication map between two conjugation orbits and
/// groups the targets by their cycle-product signature. Requires an abelian
/// base group and `<σ,τ>` transitive on the index set.
pub fn fiber_profile(
    g: &FiniteGroup,
    gfrak: &[GroupElt],
    sigma: &Perm,
    hfrak: &[GroupElt],
    tau: &Perm,
    cap: u64,
) -> Result<FiberProfile, Error> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if !joint_orbits(&[sigma, tau]).is_transitive() {
        return Err(Error::NotTransitive);
    }
    let n = sigma.n();
    let table = ClassTable::new(g, cap)?;
    let wreath = wreath_product(g.clone(), n);
    let left = orbit_o(g, &table, gfrak, sigma, cap)?;
    let right = orbit_o(g, &table, hfrak, tau, cap)?;
    guard_cap((left.len() as u128) * (right.len() as u128), cap)?;

    let sigma_tau = sigma.compose(tau);
    let st_reps = orbits(&sigma_tau).representatives();
    // target element -> preimage count, bucketed by signature
    let mut buckets: HashMap<Vec<GroupElt>, HashMap<GroupElt, usize>> = HashMap::new();
    for x in &left {
        for y in &right {
            let z = wreath.mul(x, y);
            let (zc, zs) = wreath_parts(&z);
            debug_assert_eq!(zs, &sigma_tau);
            let w = cycle_product(g, zc, &sigma_tau, &st_reps)?;
            *buckets.entry(w).or_default().entry(z).or_insert(0) += 1;
        }
    }

    let sigma_orbits = orbits(sigma).len() as u32;
    let tau_orbits = orbits(tau).len() as u32;
    let expected_fiber = g.order().pow((n as u32 + 1).saturating_sub(sigma_orbits + tau_orbits));

    let mut targets: Vec<FiberTarget> = buckets
        .into_iter()
        .map(|(w, fibers)| {
            let mut fiber_sizes: Vec<usize> = fibers.values().copied().collect();
            fiber_sizes.sort_unstable();
            FiberTarget { w, orbit_size: fibers.len(), fiber_sizes }
        })
        .collect();
    targets.sort_by(|a, b| a.w.cmp(&b.w));
    Ok(FiberProfile { expected_fiber, targets })
}

/// Spot check of the group axioms: closure, identity, inverses, and
/// associativity (exhaustive for orders up to 64, sampled above).
pub fn check_group_axioms(g: &FiniteGroup, cap: u64) -> Result<(), Error> {
    let elems = g.elements(cap)?;
    let index: HashMap<&GroupElt, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let id = g.identity();
    if !index.contains_key(&id) {
        return Err(Error::InternalInvariant("identity not in element list".into()));
    }
    for e in &elems {
        if g.mul(&id, e) != *e || g.mul(e, &id) != *e {
            return Err(Error::InternalInvariant(format!("identity law fails at {e}")));
        }
        if g.mul(e, &g.inv(e)) != id {
            return Err(Error::InternalInvariant(format!("inverse law fails at {e}")));
        }
    }
    let n = elems.len();
    let check_triple = |a: &GroupElt, b: &GroupElt, c: &GroupElt| -> Result<(), Error> {
        let ab = g.mul(a, b);
        if !index.contains_key(&ab) {
            return Err(Error::InternalInvariant(format!("product {a}·{b} leaves the group")));
        }
        if g.mul(&ab, c) != g.mul(a, &g.mul(b, c)) {
            return Err(Error::InternalInvariant(format!(
                "associativity fails at ({a}, {b}, {c})"
            )));
        }
        Ok(())
    };
    if n <= 64 {
        for a in &elems {
            for b in &elems {
                for c in &elems {
                    check_triple(a, b, c)?;
                }
            }
        }
    } else {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(0x0AF1_0B5E);
        for _ in 0..20_000 {
            let a = &elems[rng.gen_range(0..n)];
            let b = &elems[rng.gen_range(0..n)];
            let c = &elems[rng.gen_range(0..n)];
            check_triple(a, b, c)?;
        }
    }
    Ok(())
}

/// A finite group flattened to an indexed element list with dense product
/// and inverse tables. This is the representation algebra code works with:
/// sectors, actions, and report schemas all refer to element indices.
#[derive(Clone, Debug)]
pub struct GroupTable {
    pub elements: Vec<GroupElt>,
    index: HashMap<GroupElt, usize>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    pub identity: usize,
    /// Spec text of the originating construction, when there is one.
    pub spec: Option<String>,
}

/// Hard ceiling for dense tables; `order^2` entries are materialized.
pub const TABLE_CAP: u64 = 4096;

impl GroupTable {
    pub fn from_group(g: &FiniteGroup, cap: u64) -> Result<GroupTable, Error> {
        let table_cap = cap.min(TABLE_CAP);
        guard_cap(g.order(), table_cap)?;
        let elements = g.elements(cap)?;
        Self::build(g, elements, Some(g.spec_string()))
    }

    /// Builds a subgroup table from an explicit element list inside an
    /// ambient group. The list must be closed under products and inverses.
    pub fn from_elements(
        ambient: &FiniteGroup,
        mut elements: Vec<GroupElt>,
        spec: Option<String>,
    ) -> Result<GroupTable, Error> {
        elements.sort();
        elements.dedup();
        guard_cap(elements.len() as u128, TABLE_CAP)?;
        Self::build(ambient, elements, spec)
    }

    fn build(
        g: &FiniteGroup,
        elements: Vec<GroupElt>,
        spec: Option<String>,
    ) -> Result<GroupTable, Error> {
        let n = elements.len();
        let index: HashMap<GroupElt, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let lookup = |e: &GroupElt| -> Result<u32, Error> {
            index
                .get(e)
                .map(|&i| i as u32)
                .ok_or_else(|| Error::InternalInvariant(format!("element list not closed: {e}")))
        };
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = lookup(&g.mul(&elements[i], &elements[j]))?;
            }
        }
        let mut inv = vec![0u32; n];
        for i in 0..n {
            inv[i] = lookup(&g.inv(&elements[i]))?;
        }
        let identity = lookup(&g.identity()).map(|i| i as usize).or_else(|_| {
            // subgroup of something else: find the idempotent
            (0..n)
                .find(|&i| mul[i * n + i] == i as u32)
                .ok_or_else(|| Error::InternalInvariant("no identity in element list".into()))
        })?;
        Ok(GroupTable { elements, index, mul, inv, identity, spec })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mul_idx(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.len() + j] as usize
    }

    pub fn inv_idx(&self, i: usize) -> usize {
        self.inv[i] as usize
    }

    /// `j^{-1} · i · j`.
    pub fn conj_idx(&self, i: usize, j: usize) -> usize {
        self.mul_idx(self.mul_idx(self.inv_idx(j), i), j)
    }

    /// `i · j · i^{-1} · j^{-1}`.
    pub fn commutator_idx(&self, i: usize, j: usize) -> usize {
        self.mul_idx(self.mul_idx(i, j), self.mul_idx(self.inv_idx(i), self.inv_idx(j)))
    }

    pub fn index_of(&self, e: &GroupElt) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| self.mul_idx(i, j) == self.mul_idx(j, i)))
    }

    /// Table of the subgroup spanned by the given element indices, which
    /// must already be closed under products and inverses.
    pub fn subgroup(&self, indices: &[usize], spec: Option<String>) -> Result<GroupTable, Error> {
        let mut sorted: Vec<usize> = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let elements: Vec<GroupElt> = sorted.iter().map(|&i| self.elements[i].clone()).collect();
        let index: HashMap<GroupElt, usize> =
            elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let n = sorted.len();
        let pos_of_ambient: HashMap<usize, usize> =
            sorted.iter().enumerate().map(|(pos, &amb)| (amb, pos)).collect();
        let lookup = |amb: usize| -> Result<u32, Error> {
            pos_of_ambient.get(&amb).map(|&p| p as u32).ok_or_else(|| {
                Error::InternalInvariant(format!(
                    "subgroup not closed: {}",
                    self.elements[amb]
                ))
            })
        };
        let mut mul = vec![0u32; n * n];
        let mut inv = vec![0u32; n];
        for (pi, &a) in sorted.iter().enumerate() {
            for (pj, &b) in sorted.iter().enumerate() {
                mul[pi * n + pj] = lookup(self.mul_idx(a, b))?;
            }
            inv[pi] = lookup(self.inv_idx(a))?;
        }
        let identity = lookup(self.identity).map(|i| i as usize)?;
        Ok(GroupTable { elements, index, mul, inv, identity, spec })
    }
}

/// A semidirect decomposition `Γ = K ⋊ L` of a table group: `K` normal, `L` a
/// complement, every element factoring uniquely as `k·l`.
#[derive(Clone, Debug)]
pub struct SemidirectPresentation {
    pub ambient: GroupTable,
    /// Ambient indices of the normal factor, sorted.
    pub k: Vec<usize>,
    /// Ambient indices of the complement, sorted.
    pub l: Vec<usize>,
    /// Per ambient element: (position in `k`, position in `l`).
    decomp: Vec<(u32, u32)>,
}

impl SemidirectPresentation {
    pub fn new(ambient: GroupTable, k: Vec<usize>, l: Vec<usize>) -> Result<Self, Error> {
        let n = ambient.len();
        if k.len() * l.len() != n {
            return Err(Error::PresentationMismatch);
        }
        let bad = |msg: &str| Error::InternalInvariant(format!("bad semidirect presentation: {msg}"));
        // closure of both factors
        let k_set: std::collections::HashSet<usize> = k.iter().copied().collect();
        let l_set: std::collections::HashSet<usize> = l.iter().copied().collect();
        for &a in &k {
            for &b in &k {
                if !k_set.contains(&ambient.mul_idx(a, b)) {
                    return Err(bad("K not closed"));
                }
            }
        }
        for &a in &l {
            for &b in &l {
                if !l_set.contains(&ambient.mul_idx(a, b)) {
                    return Err(bad("L not closed"));
                }
            }
        }
        // K normal in the ambient group
        for &a in &k {
            for g in 0..n {
                if !k_set.contains(&ambient.conj_idx(a, g)) {
                    return Err(bad("K not normal"));
                }
            }
        }
        // unique factorization gamma = k·l
        let mut decomp = vec![None; n];
        for (ki, &a) in k.iter().enumerate() {
            for (li, &b) in l.iter().enumerate() {
                let prod = ambient.mul_idx(a, b);
                if decomp[prod].is_some() {
                    return Err(bad("factorization not unique"));
                }
                decomp[prod] = Some((ki as u32, li as u32));
            }
        }
        let decomp: Vec<(u32, u32)> = decomp
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("factorization not onto"))?;
        Ok(SemidirectPresentation { ambient, k, l, decomp })
    }

    /// The wreath product `G^I ⋊ Σ_I` with its canonical factors.
    pub fn wreath(base: &FiniteGroup, n: usize, cap: u64) -> Result<Self, Error> {
        let group = wreath_product(base.clone(), n);
        let table = GroupTable::from_group(&group, cap)?;
        let mut k = Vec::new();
        let mut l = Vec::new();
        for (i, e) in table.elements.iter().enumerate() {
            let (comps, sigma) = wreath_parts(e);
            if sigma.is_identity() {
                k.push(i);
            }
            if comps.iter().all(|c| *c == base.identity()) {
                l.push(i);
            }
        }
        Self::new(table, k, l)
    }

    /// The degenerate presentation `Γ = K ⋊ 1` (full coinvariants).
    pub fn full(table: GroupTable) -> Result<Self, Error> {
        let k: Vec<usize> = (0..table.len()).collect();
        let l = vec![table.identity];
        Self::new(table, k, l)
    }

    /// The degenerate presentation `Γ = 1 ⋊ Γ` (trivial coinvariants).
    pub fn trivial_k(table: GroupTable) -> Result<Self, Error> {
        let k = vec![table.identity];
        let l: Vec<usize> = (0..table.len()).collect();
        Self::new(table, k, l)
    }

    /// Factorization `γ = k·l`, returning ambient indices `(k, l)`.
    pub fn decompose(&self, gamma: usize) -> (usize, usize) {
        let (ki, li) = self.decomp[gamma];
        (self.k[ki as usize], self.l[li as usize])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_CAP;
    use rand::{Rng, SeedableRng};

    #[test]
    fn constructed_group_orders() {
        assert_eq!(wreath_product(make_cyclic(2), 2).order(), 8);
        assert_eq!(wreath_product(make_cyclic(3), 3).order(), 162);
        assert_eq!(make_symmetric(1).order(), 1);
        assert_eq!(direct_product(make_cyclic(2), make_cyclic(2)).order(), 4);
    }

    #[test]
    fn group_axioms_hold_for_constructions() {
        for g in [
            make_cyclic(6),
            make_symmetric(3),
            direct_product(make_cyclic(2), make_cyclic(2)),
            wreath_product(make_cyclic(2), 2),
            wreath_product(make_symmetric(3), 2),
            wreath_product(make_cyclic(3), 3),
        ] {
            check_group_axioms(&g, DEFAULT_CAP).unwrap();
        }
    }

    #[test]
    fn is_abelian_agrees_with_pairwise_commutation() {
        for g in [
            make_cyclic(4),
            make_symmetric(2),
            make_symmetric(3),
            direct_product(make_cyclic(2), make_cyclic(3)),
            wreath_product(make_cyclic(2), 2),
            wreath_product(make_cyclic(1), 2),
            wreath_product(make_cyclic(3), 1),
        ] {
            let elems = g.elements(DEFAULT_CAP).unwrap();
            let brute = elems
                .iter()
                .all(|a| elems.iter().all(|b| g.mul(a, b) == g.mul(b, a)));
            assert_eq!(g.is_abelian(), brute, "mismatch for {}", g.spec_string());
        }
    }

    #[test]
    fn wreath_associativity_random_triples() {
        for g in [wreath_product(make_cyclic(2), 3), wreath_product(make_symmetric(3), 2)] {
            let elems = g.elements(DEFAULT_CAP).unwrap();
            let mut rng = rand::rngs::StdRng::seed_from_u64(7);
            for _ in 0..1000 {
                let a = &elems[rng.gen_range(0..elems.len())];
                let b = &elems[rng.gen_range(0..elems.len())];
                let c = &elems[rng.gen_range(0..elems.len())];
                assert_eq!(g.mul(&g.mul(a, b), c), g.mul(a, &g.mul(b, c)));
            }
        }
    }

    #[test]
    fn wreath_inverse_law() {
        let g = wreath_product(make_symmetric(3), 2);
        let id = g.identity();
        for e in g.elements(DEFAULT_CAP).unwrap() {
            assert_eq!(g.mul(&e, &g.inv(&e)), id);
            assert_eq!(g.mul(&g.inv(&e), &e), id);
        }
    }

    #[test]
    fn cycle_product_matches_worked_example() {
        // sigma: 1->3, 2->1, 3->2, 4->5, 5->4; orbits {1,2,3}, {4,5}
        let g = make_symmetric(3);
        let sigma = Perm::from_images(vec![2, 0, 1, 4, 3]).unwrap();
        let gs = g.elements(DEFAULT_CAP).unwrap();
        // distinct non-commuting components to pin the order of the product
        let comps: Vec<GroupElt> =
            vec![gs[1].clone(), gs[2].clone(), gs[3].clone(), gs[4].clone(), gs[5].clone()];
        let by_hand = |ix: &[usize]| {
            ix.iter()
                .map(|&i| comps[i].clone())
                .reduce(|a, b| g.mul(&a, &b))
                .unwrap()
        };
        // representatives 2 and 4 (1-based): psi_{a1} = g3 g1 g2, psi_{a2} = g5 g4
        let psi = cycle_product(&g, &comps, &sigma, &[1, 3]).unwrap();
        assert_eq!(psi[0], by_hand(&[2, 0, 1]));
        assert_eq!(psi[1], by_hand(&[4, 3]));
        // representatives 3 and 5: psi_{a1} = g1 g2 g3, psi_{a2} = g4 g5
        let psi = cycle_product(&g, &comps, &sigma, &[2, 4]).unwrap();
        assert_eq!(psi[0], by_hand(&[0, 1, 2]));
        assert_eq!(psi[1], by_hand(&[3, 4]));
    }

    #[test]
    fn cycle_product_identity_permutation() {
        let g = make_cyclic(5);
        let comps: Vec<GroupElt> = (0..4).map(GroupElt::Cyc).collect();
        let psi = cycle_product(&g, &comps, &Perm::identity(4), &[0, 1, 2, 3]).unwrap();
        assert_eq!(psi, comps);
    }

    #[test]
    fn cycle_product_rejects_bad_representative() {
        let g = make_cyclic(2);
        let comps = vec![GroupElt::Cyc(1), GroupElt::Cyc(0)];
        let sigma = Perm::parse("(1 2)", 2).unwrap();
        assert!(matches!(
            cycle_product(&g, &comps, &sigma, &[5]),
            Err(Error::BadRepresentative { .. })
        ));
    }

    #[test]
    fn nu_endpoint_equals_cycle_product() {
        let g = make_symmetric(3);
        let elems = g.elements(DEFAULT_CAP).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for sigma in all_perms(4) {
            let o = orbits(&sigma);
            for _ in 0..20 {
                let comps: Vec<GroupElt> =
                    (0..4).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
                let reps = o.representatives();
                let psi = cycle_product(&g, &comps, &sigma, &reps).unwrap();
                let nu_v = nu(&g, &comps, &sigma, &reps).unwrap();
                for (k, _block) in o.blocks().iter().enumerate() {
                    // σ^{|a|-1}(i_a) = σ^{-1}(i_a) on the orbit of i_a
                    let last = sigma.inverse().apply(reps[k]);
                    assert_eq!(nu_v[last], psi[k]);
                }
            }
        }
    }

    #[test]
    fn conjugation_identity_moves_g_sigma_to_epsilon_sigma() {
        // nu^{-1} · gσ · nu = ε_ψ σ, 200 random (g, σ) per group
        for base in [make_cyclic(3), make_symmetric(3)] {
            let n = 4;
            let wreath = wreath_product(base.clone(), n);
            let elems = base.elements(DEFAULT_CAP).unwrap();
            let mut rng = rand::rngs::StdRng::seed_from_u64(23);
            let perms = all_perms(n);
            for _ in 0..200 {
                let sigma = perms[rng.gen_range(0..perms.len())].clone();
                let comps: Vec<GroupElt> =
                    (0..n).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
                let reps = orbits(&sigma).representatives();
                let psi = cycle_product(&base, &comps, &sigma, &reps).unwrap();
                let nu_v = nu(&base, &comps, &sigma, &reps).unwrap();
                let eps = epsilon(&base, &psi, &sigma, &reps).unwrap();

                let g_sigma = GroupElt::Wreath(comps, sigma.clone());
                let nu_elt = GroupElt::Wreath(nu_v, Perm::identity(n));
                let lhs = wreath.conjugate(&g_sigma, &nu_elt);
                assert_eq!(lhs, GroupElt::Wreath(eps, sigma));
            }
        }
    }

    #[test]
    fn signature_is_independent_of_representatives() {
        use itertools::Itertools;
        for base in [make_cyclic(2), make_symmetric(3)] {
            let table = ClassTable::new(&base, DEFAULT_CAP).unwrap();
            for n in 1..=4usize {
                for sigma in all_perms(n) {
                    let o = orbits(&sigma);
                    let rep_choices: Vec<Vec<usize>> = o
                        .blocks()
                        .iter()
                        .map(|b| b.clone())
                        .multi_cartesian_product()
                        .collect();
                    for comps in component_tuples(&base, n, DEFAULT_CAP).unwrap().iter().take(40) {
                        let mut sigs = Vec::new();
                        for reps in &rep_choices {
                            let psi = cycle_product(&base, comps, &sigma, reps).unwrap();
                            sigs.push(
                                psi.iter().map(|e| table.class_of(e)).collect::<Vec<_>>(),
                            );
                        }
                        sigs.dedup();
                        assert_eq!(sigs.len(), 1, "signature varies with representatives");
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_o_z2_transposition() {
        let g = make_cyclic(2);
        let table = ClassTable::new(&g, DEFAULT_CAP).unwrap();
        let sigma = Perm::parse("(1 2)", 2).unwrap();
        let o = orbit_o(&g, &table, &[GroupElt::Cyc(1)], &sigma, DEFAULT_CAP).unwrap();
        assert_eq!(o.len(), 2);
        assert_eq!(
            o,
            vec![
                GroupElt::Wreath(vec![GroupElt::Cyc(0), GroupElt::Cyc(1)], sigma.clone()),
                GroupElt::Wreath(vec![GroupElt::Cyc(1), GroupElt::Cyc(0)], sigma.clone()),
            ]
        );
    }

    #[test]
    fn orbit_o_identity_singleton() {
        let g = make_cyclic(3);
        let table = ClassTable::new(&g, DEFAULT_CAP).unwrap();
        let id2 = Perm::identity(2);
        let o = orbit_o(&g, &table, &[GroupElt::Cyc(0), GroupElt::Cyc(0)], &id2, DEFAULT_CAP)
            .unwrap();
        assert_eq!(o.len(), 1);
    }

    #[test]
    fn orbit_o_equals_brute_force_conjugation_orbit() {
        use itertools::Itertools;
        for base in [make_cyclic(2), make_cyclic(4), make_symmetric(3)] {
            let table = ClassTable::new(&base, DEFAULT_CAP).unwrap();
            for n in 1..=3usize {
                if base.order().pow(n as u32) > 256 {
                    continue;
                }
                let wreath = wreath_product(base.clone(), n);
                let conjugators: Vec<GroupElt> = component_tuples(&base, n, DEFAULT_CAP)
                    .unwrap()
                    .into_iter()
                    .map(|t| GroupElt::Wreath(t, Perm::identity(n)))
                    .collect();
                for sigma in all_perms(n) {
                    let o = orbits(&sigma);
                    let class_vectors: Vec<Vec<&GroupElt>> = (0..o.len())
                        .map(|_| table.classes.iter().map(|c| &c[0]).collect::<Vec<_>>())
                        .multi_cartesian_product()
                        .collect();
                    for gfrak in class_vectors {
                        let gfrak: Vec<GroupElt> = gfrak.into_iter().cloned().collect();
                        let fast =
                            orbit_o(&base, &table, &gfrak, &sigma, DEFAULT_CAP).unwrap();
                        let eps =
                            epsilon(&base, &gfrak, &sigma, &o.representatives()).unwrap();
                        let eps_sigma = GroupElt::Wreath(eps, sigma.clone());
                        let mut brute: Vec<GroupElt> = conjugators
                            .iter()
                            .map(|f| wreath.conjugate(&eps_sigma, f))
                            .collect();
                        brute.sort();
                        brute.dedup();
                        assert_eq!(fast, brute);
                    }
                }
            }
        }
    }

    #[test]
    fn orbits_partition_the_coset() {
        use itertools::Itertools;
        let base = make_symmetric(3);
        let table = ClassTable::new(&base, DEFAULT_CAP).unwrap();
        let n = 2;
        for sigma in all_perms(n) {
            let o = orbits(&sigma);
            let mut seen = Vec::new();
            let mut total = 0;
            for gfrak in (0..o.len())
                .map(|_| table.classes.iter().map(|c| c[0].clone()).collect::<Vec<_>>())
                .multi_cartesian_product()
            {
                let orb = orbit_o(&base, &table, &gfrak, &sigma, DEFAULT_CAP).unwrap();
                total += orb.len();
                seen.extend(orb);
            }
            seen.sort();
            seen.dedup();
            assert_eq!(total, seen.len(), "orbits overlap");
            assert_eq!(total as u128, base.order().pow(n as u32), "orbits do not cover");
        }
    }

    #[test]
    fn centralizer_examples() {
        // abelian base, full cycle: centralizer of ε_𝔤σ in G^I is the diagonal
        let g = make_cyclic(4);
        let sigma = Perm::parse("(1 2 3)", 3).unwrap();
        assert!(centralizer_formula_check(&g, &[GroupElt::Cyc(1)], &sigma, DEFAULT_CAP).unwrap());

        // σ = id: componentwise centralizers
        let s3 = make_symmetric(3);
        let id = Perm::identity(2);
        let t = GroupElt::Perm(Perm::parse("(1 2)", 3).unwrap());
        let c = GroupElt::Perm(Perm::parse("(1 2 3)", 3).unwrap());
        assert!(centralizer_formula_check(&s3, &[t.clone(), c], &id, DEFAULT_CAP).unwrap());

        // |Z_{S3}(transposition)| = 2
        assert_eq!(centralizer(&s3, std::slice::from_ref(&t), DEFAULT_CAP).unwrap().len(), 2);
        let sigma = Perm::parse("(1 2)", 2).unwrap();
        assert!(centralizer_formula_check(&s3, &[t], &sigma, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn fiber_profile_z2_transpositions() {
        let g = make_cyclic(2);
        let sigma = Perm::parse("(1 2)", 2).unwrap();
        let alpha = GroupElt::Cyc(1);
        let profile =
            fiber_profile(&g, &[alpha.clone()], &sigma, &[alpha], &sigma, DEFAULT_CAP).unwrap();
        assert_eq!(profile.expected_fiber, 2);
        assert!(profile.all_fibers_match());
        let total: usize =
            profile.targets.iter().map(|t| t.fiber_sizes.iter().sum::<usize>()).sum();
        assert_eq!(total, 4);
        assert_eq!(profile.targets.iter().map(|t| t.orbit_size).sum::<usize>(), 2);
    }

    #[test]
    fn fiber_profile_z3_example() {
        let g = make_cyclic(3);
        let sigma = Perm::parse("(1 2 3)", 3).unwrap();
        let tau = Perm::parse("(1 2)", 3).unwrap();
        let profile = fiber_profile(
            &g,
            &[GroupElt::Cyc(1)],
            &sigma,
            &[GroupElt::Cyc(2), GroupElt::Cyc(1)],
            &tau,
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(profile.expected_fiber, 3);
        assert!(profile.all_fibers_match());
    }

    #[test]
    fn fiber_profile_trivial_group() {
        let g = make_cyclic(1);
        let sigma = Perm::parse("(1 2)", 2).unwrap();
        let id = GroupElt::Cyc(0);
        let profile =
            fiber_profile(&g, &[id.clone()], &sigma, &[id], &sigma, DEFAULT_CAP).unwrap();
        assert_eq!(profile.expected_fiber, 1);
        assert_eq!(profile.targets.len(), 1);
        assert!(profile.all_fibers_match());
    }

    #[test]
    fn fiber_profile_rejects_bad_inputs() {
        let s3 = make_symmetric(3);
        let sigma = Perm::parse("(1 2)", 2).unwrap();
        let t = GroupElt::Perm(Perm::parse("(1 2)", 3).unwrap());
        assert!(matches!(
            fiber_profile(&s3, &[t.clone()], &sigma, &[t], &sigma, DEFAULT_CAP),
            Err(Error::NotAbelian)
        ));
        let g = make_cyclic(2);
        let id = Perm::identity(2);
        let a = GroupElt::Cyc(0);
        assert!(matches!(
            fiber_profile(&g, &[a.clone(), a.clone()], &id, &[a.clone(), a], &id, DEFAULT_CAP),
            Err(Error::NotTransitive)
        ));
    }

    #[test]
    fn fiber_map_equivariance_spot_check() {
        // (f1^{-1} x f1) · (f2^{-1} y f2) lands in the same signature bucket
        // as x·y, via the induced two-sided action on the target coset.
        let base = make_cyclic(3);
        let n = 3;
        let wreath = wreath_product(base.clone(), n);
        let table = ClassTable::new(&base, DEFAULT_CAP).unwrap();
        let sigma = Perm::parse("(1 2 3)", 3).unwrap();
        let tau = Perm::parse("(1 2)", 3).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(99);
        let tuples = component_tuples(&base, n, DEFAULT_CAP).unwrap();
        let st_reps = orbits(&sigma.compose(&tau)).representatives();
        for _ in 0..200 {
            let pick = |rng: &mut rand::rngs::StdRng| tuples[rng.gen_range(0..tuples.len())].clone();
            let x = GroupElt::Wreath(pick(&mut rng), sigma.clone());
            let y = GroupElt::Wreath(pick(&mut rng), tau.clone());
            let f1 = GroupElt::Wreath(pick(&mut rng), Perm::identity(n));
            let f2 = GroupElt::Wreath(pick(&mut rng), Perm::identity(n));
            let moved = wreath.mul(&wreath.conjugate(&x, &f1), &wreath.conjugate(&y, &f2));
            let plain = wreath.mul(&x, &y);
            let sig = |z: &GroupElt| {
                let (zc, zs) = wreath_parts(z);
                cycle_product(&base, zc, zs, &st_reps)
                    .unwrap()
                    .iter()
                    .map(|e| table.class_of(e))
                    .collect::<Vec<_>>()
            };
            assert_eq!(sig(&moved), sig(&plain));
        }
    }

    #[test]
    fn spec_language_round_trip() {
        for text in [
            "cyclic:4",
            "sym:3",
            "prod:cyclic:2,cyclic:2",
            "wreath:cyclic:3,n=2",
            "prod:prod:cyclic:2,cyclic:3,sym:2",
            "wreath:prod:cyclic:2,cyclic:2,n=3",
        ] {
            let g = FiniteGroup::parse_spec(text).unwrap();
            assert_eq!(g.spec_string(), text);
        }
        assert!(FiniteGroup::parse_spec("Cyclic:4").is_err());
        assert!(FiniteGroup::parse_spec("cyclic:4 ").is_err());
        assert!(FiniteGroup::parse_spec("cyclic:0").is_err());
        assert!(FiniteGroup::parse_spec("prod:cyclic:2").is_err());
    }

    #[test]
    fn elements_respect_cap() {
        let g = wreath_product(make_cyclic(10), 6);
        assert!(matches!(g.elements(DEFAULT_CAP), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn semidirect_wreath_presentation() {
        let base = make_cyclic(2);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        assert_eq!(pres.ambient.len(), 8);
        assert_eq!(pres.k.len(), 4);
        assert_eq!(pres.l.len(), 2);
        for gamma in 0..8 {
            let (k, l) = pres.decompose(gamma);
            assert_eq!(pres.ambient.mul_idx(k, l), gamma);
        }
    }

    #[test]
    fn group_table_matches_structural_ops() {
        let g = wreath_product(make_cyclic(2), 2);
        let table = GroupTable::from_group(&g, DEFAULT_CAP).unwrap();
        for i in 0..table.len() {
            for j in 0..table.len() {
                let prod = g.mul(&table.elements[i], &table.elements[j]);
                assert_eq!(table.elements[table.mul_idx(i, j)], prod);
            }
            assert_eq!(table.elements[table.inv_idx(i)], g.inv(&table.elements[i]));
        }
        assert_eq!(table.elements[table.identity], g.identity());
    }
}
