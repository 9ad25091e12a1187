//! Verification pipeline for the wreath-product point case: build the group
//! algebra of `G^n ⋊ Σ_n` as an equivariant Frobenius algebra, take
//! `G^n`-coinvariants, build the Lehn-Sorger algebra over the center of
//! `Q[G]`, and compare the two across the canonical basis map — products,
//! metrics, and symmetric-group actions, all in exact arithmetic.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, DEFAULT_CAP};
use crate::frobenius::{FrobeniusAlgebra, FrobeniusData};
use crate::gfrob::{Coinvariants, GFrobeniusAlgebra};
use crate::groups::{
    wreath_parts, ClassTable, FiniteGroup, GroupElt, SemidirectPresentation,
};
use crate::lehnsorger::{LsAlgebra, LsElt, LsKey};
use crate::perm::{all_perms, orbits};
use crate::rat::{format_rat, rat, Rat};
use crate::sparse::SparseVec;

/// The center of the group algebra `Q[G]` as a Frobenius algebra: class sums
/// with brute-force convolution structure constants and the metric
/// `eta(x, y) = coeff_1(x·y) / |G|`.
pub fn center_algebra(group: &FiniteGroup, cap: u64) -> Result<FrobeniusAlgebra, Error> {
    let table = ClassTable::new(group, cap)?;
    let k = table.len();
    let labels: Vec<String> = (0..k).map(|i| format!("[{}]", table.rep(i))).collect();
    let identity_class = table.class_of(&group.identity());

    let mut structure = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for x in &table.classes[i] {
                for y in &table.classes[j] {
                    *counts.entry(table.class_of(&group.mul(x, y))).or_insert(0) += 1;
                }
            }
            let mut v = SparseVec::new();
            for (target, count) in counts {
                debug_assert_eq!(count % table.classes[target].len(), 0);
                v.add_term(target, rat((count / table.classes[target].len()) as i64));
            }
            if !v.is_zero() {
                structure.insert((i, j), v);
            }
        }
    }

    let order = rat(group.order() as i64);
    let mut metric = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            let pairs = table.classes[i]
                .iter()
                .filter(|x| table.class_of(&group.inv(x)) == j)
                .count();
            if pairs > 0 {
                metric.insert((i, j), rat(pairs as i64) / &order);
            }
        }
    }

    FrobeniusData {
        name: format!("Z(Q[{}])", group.spec_string()),
        labels,
        degrees: vec![Rat::zero(); k],
        d: Rat::zero(),
        unit: SparseVec::single(identity_class),
        metric,
        structure,
    }
    .build()
}

/// The primitive idempotents of the center of `Q[G]` for an elementary
/// abelian 2-group: one per sign character, `(1/|G|) Σ_g χ(g) g` in the
/// class-sum basis (classes are singletons here). Verifies orthogonality and
/// the metric values before returning.
pub fn idempotent_basis(group: &FiniteGroup, cap: u64) -> Result<Vec<SparseVec>, Error> {
    let elems = group.elements(cap)?;
    let id = group.identity();
    for e in &elems {
        if group.mul(e, e) != id {
            return Err(Error::NotElementaryAbelian2);
        }
    }
    if !group.is_abelian() {
        return Err(Error::NotElementaryAbelian2);
    }

    // greedy F2-basis with coordinates built along the way
    let mut coords: HashMap<GroupElt, u64> = HashMap::new();
    coords.insert(id.clone(), 0);
    let mut rank = 0u32;
    for e in &elems {
        if coords.contains_key(e) {
            continue;
        }
        let bit = 1u64 << rank;
        rank += 1;
        let existing: Vec<(GroupElt, u64)> =
            coords.iter().map(|(g, &c)| (g.clone(), c)).collect();
        for (g, c) in existing {
            coords.insert(group.mul(&g, e), c | bit);
        }
    }
    debug_assert_eq!(coords.len(), elems.len());

    let center = center_algebra(group, cap)?;
    // class index of each element, in element order
    let elem_class: Vec<usize> = elems
        .iter()
        .map(|e| center.index_of(&format!("[{e}]")))
        .collect::<Result<_, _>>()?;

    let order = rat(elems.len() as i64);
    let mut idempotents = Vec::with_capacity(elems.len());
    for chi in 0..elems.len() as u64 {
        let mut v = SparseVec::new();
        for (pos, e) in elems.iter().enumerate() {
            let sign = if (coords[e] & chi).count_ones() % 2 == 0 { 1 } else { -1 };
            v.add_term(elem_class[pos], rat(sign) / &order);
        }
        idempotents.push(v);
    }

    // orthogonality and metric values
    let expected_metric = rat(1) / (&order * &order);
    for (a, ua) in idempotents.iter().enumerate() {
        for (b, ub) in idempotents.iter().enumerate() {
            let prod = center.multiply(ua, ub);
            let want = if a == b { ua.clone() } else { SparseVec::new() };
            if prod != want {
                return Err(Error::InternalInvariant(format!(
                    "idempotent product failed at ({a}, {b})"
                )));
            }
            let pairing = center.pairing(ua, ub);
            let want = if a == b { expected_metric.clone() } else { Rat::zero() };
            if pairing != want {
                return Err(Error::InternalInvariant(format!(
                    "idempotent metric failed at ({a}, {b})"
                )));
            }
        }
    }
    Ok(idempotents)
}

/// The two sides of the point-case comparison plus the canonical basis map
/// between them.
pub struct WreathSetup {
    pub base: FiniteGroup,
    pub n: usize,
    pub classes: ClassTable,
    pub center: FrobeniusAlgebra,
    pub ls: LsAlgebra,
    pub pres: SemidirectPresentation,
    pub algebra: GFrobeniusAlgebra,
    pub coinv: Coinvariants,
    /// Basis term of the Lehn-Sorger side -> coinvariant basis row.
    forward: HashMap<LsKey, usize>,
}

impl WreathSetup {
    pub fn new(base: FiniteGroup, n: usize, cap: u64) -> Result<WreathSetup, Error> {
        let classes = ClassTable::new(&base, cap)?;
        let center = center_algebra(&base, cap)?;
        let ls = LsAlgebra::new(center.clone(), n, cap)?;
        let pres = SemidirectPresentation::wreath(&base, n, cap)?;
        let algebra = GFrobeniusAlgebra::group_algebra(pres.ambient.clone());
        let coinv = algebra.coinvariants(&pres)?;

        // identify each orbit-sum row by the class-vector signature of its
        // pivot element
        let mut forward = HashMap::new();
        for (r, row) in coinv.rows.iter().enumerate() {
            let pivot = *row.leading().expect("coinvariant rows are nonzero").0;
            let (comps, sigma) = wreath_parts(&pres.ambient.elements[pivot]);
            let reps = orbits(sigma).representatives();
            let psi = crate::groups::cycle_product(&base, comps, sigma, &reps)?;
            let assign: Vec<usize> = psi.iter().map(|e| classes.class_of(e)).collect();
            let key = LsKey::new(sigma.clone(), assign);
            if forward.insert(key, r).is_some() {
                return Err(Error::InternalInvariant(
                    "two coinvariant rows share a signature".into(),
                ));
            }
        }
        let expected = ls.basis_keys()?.len();
        if forward.len() != expected {
            return Err(Error::InternalInvariant(format!(
                "basis map is not bijective: {} rows vs {} terms",
                forward.len(),
                expected
            )));
        }
        Ok(WreathSetup { base, n, classes, center, ls, pres, algebra, coinv, forward })
    }

    /// Row index of the orbit sum matched with a Lehn-Sorger basis term.
    pub fn row_of(&self, key: &LsKey) -> Result<usize, Error> {
        self.forward.get(key).copied().ok_or_else(|| {
            Error::InternalInvariant(format!("no orbit sum for term {}", self.key_display(key)))
        })
    }

    /// Image of a Lehn-Sorger element in the ambient group-algebra basis.
    pub fn map_to_ambient(&self, v: &LsElt) -> Result<SparseVec, Error> {
        let mut out = SparseVec::new();
        for (key, c) in v.iter() {
            out.add_scaled(&self.coinv.rows[self.row_of(key)?], c);
        }
        Ok(out)
    }

    pub fn key_display(&self, key: &LsKey) -> String {
        let labels: Vec<&str> =
            key.assign.iter().map(|&i| self.center.label(i)).collect();
        format!("({}){}", labels.join(","), key.sigma)
    }

    fn vec_display(&self, v: &SparseVec) -> String {
        if v.is_zero() {
            return "0".into();
        }
        v.iter()
            .map(|(i, c)| format!("{}*{}", format_rat(c), self.pres.ambient.elements[*i]))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Options for `verify_ring_iso`.
#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cap: u64,
    /// Include wall-clock timing in the report. Off by default so that
    /// reports are byte-identical across runs and worker counts.
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { cap: DEFAULT_CAP, timing: false }
    }
}

/// Outcome of the ring-isomorphism verification.
#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub group: String,
    pub n: usize,
    pub pairs_checked: usize,
    pub product_mismatches: Vec<String>,
    pub metric_mismatches: Vec<String>,
    pub action_mismatches: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerifyReport {
    pub fn clean(&self) -> bool {
        self.product_mismatches.is_empty()
            && self.metric_mismatches.is_empty()
            && self.action_mismatches.is_empty()
    }
}

/// Compares the Lehn-Sorger algebra over the center of `Q[G]` against the
/// `G^n`-coinvariants of `Q[G^n ⋊ Σ_n]` across the canonical basis map: every
/// ordered pair of basis terms is multiplied on both sides (the wreath side
/// by direct group-algebra convolution of orbit sums), metrics are compared
/// with the `1/|K|` scaling, and the symmetric-group actions are intertwined.
pub fn verify_ring_iso(
    base: FiniteGroup,
    n: usize,
    options: &VerifyOptions,
) -> Result<VerifyReport, Error> {
    let started = std::time::Instant::now();
    let setup = WreathSetup::new(base, n, options.cap)?;
    let keys = setup.ls.basis_keys()?;
    let k_order = rat(setup.pres.k.len() as i64);

    let pairs: Vec<(usize, usize)> = (0..keys.len())
        .flat_map(|i| (0..keys.len()).map(move |j| (i, j)))
        .collect();

    struct PairOutcome {
        product: Option<String>,
        metric: Option<String>,
    }

    let outcomes: Vec<Result<PairOutcome, Error>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let u = &keys[i];
            let v = &keys[j];
            let ls_product = setup.ls.ls_product_keys(u, v)?;
            let mapped = setup.map_to_ambient(&ls_product)?;
            let convolved = setup.algebra.multiply(
                &setup.coinv.rows[setup.row_of(u)?],
                &setup.coinv.rows[setup.row_of(v)?],
            );
            let product = (mapped != convolved).then(|| {
                format!(
                    "u={}; v={}; ls={}; wreath={}",
                    setup.key_display(u),
                    setup.key_display(v),
                    setup.vec_display(&mapped),
                    setup.vec_display(&convolved),
                )
            });
            let ls_metric = setup
                .ls
                .ls_metric(&LsElt::single(u.clone()), &LsElt::single(v.clone()))?;
            let wreath_metric =
                convolved.coeff(&setup.pres.ambient.identity) / &k_order;
            let metric = (ls_metric != wreath_metric).then(|| {
                format!(
                    "u={}; v={}; ls={}; wreath={}",
                    setup.key_display(u),
                    setup.key_display(v),
                    format_rat(&ls_metric),
                    format_rat(&wreath_metric),
                )
            });
            Ok(PairOutcome { product, metric })
        })
        .collect();

    let mut product_mismatches = Vec::new();
    let mut metric_mismatches = Vec::new();
    for outcome in outcomes {
        let outcome = outcome?;
        if let Some(m) = outcome.product {
            product_mismatches.push(m);
        }
        if let Some(m) = outcome.metric {
            metric_mismatches.push(m);
        }
    }

    // the actions intertwine: φ(ρ(τ) u) = conjugation by (1, τ)
    let mut action_mismatches = Vec::new();
    for tau in all_perms(n) {
        let tau_elt = GroupElt::Wreath(vec![setup.base.identity(); n], tau.clone());
        let tau_idx = setup
            .pres
            .ambient
            .index_of(&tau_elt)
            .ok_or_else(|| Error::InternalInvariant("complement element missing".into()))?;
        for key in &keys {
            let moved = setup.ls.sigma_action_key(&tau, key);
            let lhs = setup.map_to_ambient(&LsElt::single(moved))?;
            let rhs = setup
                .algebra
                .apply_action(tau_idx, &setup.coinv.rows[setup.row_of(key)?]);
            if lhs != rhs {
                action_mismatches.push(format!(
                    "tau={}; u={}; ls={}; wreath={}",
                    tau,
                    setup.key_display(key),
                    setup.vec_display(&lhs),
                    setup.vec_display(&rhs),
                ));
            }
        }
    }

    Ok(VerifyReport {
        group: setup.base.spec_string(),
        n,
        pairs_checked: pairs.len(),
        product_mismatches,
        metric_mismatches,
        action_mismatches,
        elapsed_ms: options.timing.then(|| started.elapsed().as_millis()),
    })
}
