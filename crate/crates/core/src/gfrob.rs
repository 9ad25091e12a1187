//! Group-equivariant Frobenius algebras: sector grading over a finite group,
//! a compatible right action, the full eleven-axiom checker, and the
//! coinvariant construction along a semidirect decomposition.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};

use crate::error::{Error, DEFAULT_CAP};
use crate::frobenius::{CheckBudget, FrobeniusAlgebra};
use crate::groups::{GroupTable, SemidirectPresentation};
use crate::linalg::{coordinates_in_rref, rank, rref};
use crate::rat::{rat, Rat};
use crate::report::{CheckReport, Verdict};
use crate::sparse::SparseVec;

/// One linear map per group element, in the algebra basis.
#[derive(Clone, Debug)]
pub enum ActionRep {
    /// Basis permutation: `rows[i]` is the image label of basis label `i`.
    Permutation(Vec<usize>),
    /// General exact matrix: `rows[i]` is the image of basis vector `i`.
    Sparse(Vec<SparseVec>),
}

#[derive(Clone, Debug)]
enum Backing {
    /// The basis is the group itself: products, metric, and action are all
    /// derived from the multiplication table. Keeps `Q[Γ]` light even when
    /// `Γ` is a four-digit-order wreath product.
    GroupAlgebra,
    Explicit {
        structure: BTreeMap<(usize, usize), SparseVec>,
        metric: Vec<Vec<Rat>>,
        /// Indexed by group element.
        action: Vec<ActionRep>,
    },
}

/// A sector-graded algebra with a right group action.
///
/// Sectors are single group elements per basis label; the action convention
/// is `apply_action(γ1·γ2, v) = apply_action(γ2, apply_action(γ1, v))`.
#[derive(Clone, Debug)]
pub struct GFrobeniusAlgebra {
    pub name: String,
    pub group: GroupTable,
    pub labels: Vec<String>,
    pub degrees: Vec<Rat>,
    pub d: Rat,
    /// Label index -> group element index.
    pub sector: Vec<usize>,
    pub unit: SparseVec,
    backing: Backing,
}

impl GFrobeniusAlgebra {
    /// The group algebra `Q[Γ]`: basis indexed by the group, sector of an
    /// element is itself, product is the group product, the action is
    /// conjugation, and the metric pairs mutually inverse elements.
    pub fn group_algebra(group: GroupTable) -> GFrobeniusAlgebra {
        let labels: Vec<String> = group.elements.iter().map(|e| e.to_string()).collect();
        let dim = labels.len();
        let name = match &group.spec {
            Some(s) => format!("Q[{s}]"),
            None => "Q[group]".to_string(),
        };
        GFrobeniusAlgebra {
            name,
            unit: SparseVec::single(group.identity),
            sector: (0..dim).collect(),
            degrees: vec![Rat::zero(); dim],
            d: Rat::zero(),
            labels,
            group,
            backing: Backing::GroupAlgebra,
        }
    }

    /// Wraps a plain Frobenius algebra as an algebra over the trivial group.
    pub fn from_frobenius_trivial_group(a: &FrobeniusAlgebra) -> Result<GFrobeniusAlgebra, Error> {
        let group = GroupTable::from_group(&crate::groups::make_cyclic(1), DEFAULT_CAP)?;
        let dim = a.dim();
        let structure: BTreeMap<(usize, usize), SparseVec> = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), a.product_of_basis(i, j)))
            .collect();
        let metric: Vec<Vec<Rat>> = (0..dim)
            .map(|i| (0..dim).map(|j| a.metric_entry(i, j).clone()).collect())
            .collect();
        Ok(GFrobeniusAlgebra {
            name: a.name().to_string(),
            group,
            labels: a.labels().to_vec(),
            degrees: (0..dim).map(|i| a.degree(i).clone()).collect(),
            d: a.half_top_degree().clone(),
            sector: vec![0; dim],
            unit: a.unit().clone(),
            backing: Backing::Explicit {
                structure,
                metric,
                action: vec![ActionRep::Permutation((0..dim).collect())],
            },
        })
    }

    /// Builds from explicit tables (the JSON instance route).
    #[allow(clippy::too_many_arguments)]
    pub fn new_explicit(
        name: String,
        group: GroupTable,
        labels: Vec<String>,
        degrees: Vec<Rat>,
        d: Rat,
        sector: Vec<usize>,
        unit: SparseVec,
        structure: BTreeMap<(usize, usize), SparseVec>,
        metric: Vec<Vec<Rat>>,
        action: Vec<ActionRep>,
    ) -> Result<GFrobeniusAlgebra, Error> {
        let dim = labels.len();
        if degrees.len() != dim || sector.len() != dim || metric.len() != dim {
            return Err(Error::Parse("inconsistent instance dimensions".into()));
        }
        if action.len() != group.len() {
            return Err(Error::Parse("action must list one matrix per group element".into()));
        }
        if sector.iter().any(|&s| s >= group.len()) {
            return Err(Error::Parse("sector element index out of range".into()));
        }
        Ok(GFrobeniusAlgebra {
            name,
            group,
            labels,
            degrees,
            d,
            sector,
            unit,
            backing: Backing::Explicit { structure, metric, action },
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of_label(&self, label: &str) -> Result<usize, Error> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `b_i · b_j` in the basis.
    pub fn product_of_basis(&self, i: usize, j: usize) -> SparseVec {
        match &self.backing {
            Backing::GroupAlgebra => SparseVec::single(self.group.mul_idx(i, j)),
            Backing::Explicit { structure, .. } => {
                structure.get(&(i, j)).cloned().unwrap_or_default()
            }
        }
    }

    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        match &self.backing {
            Backing::GroupAlgebra => {
                for (i, ci) in x.iter() {
                    for (j, cj) in y.iter() {
                        out.add_term(self.group.mul_idx(*i, *j), ci * cj);
                    }
                }
            }
            Backing::Explicit { structure, .. } => {
                for (i, ci) in x.iter() {
                    for (j, cj) in y.iter() {
                        if let Some(s) = structure.get(&(*i, *j)) {
                            out.add_scaled(s, &(ci * cj));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn metric_entry(&self, i: usize, j: usize) -> Rat {
        match &self.backing {
            Backing::GroupAlgebra => {
                if self.group.mul_idx(i, j) == self.group.identity {
                    rat(1)
                } else {
                    Rat::zero()
                }
            }
            Backing::Explicit { metric, .. } => metric[i][j].clone(),
        }
    }

    pub fn pairing(&self, x: &SparseVec, y: &SparseVec) -> Rat {
        let mut out = Rat::zero();
        for (i, ci) in x.iter() {
            for (j, cj) in y.iter() {
                let m = self.metric_entry(*i, *j);
                if !m.is_zero() {
                    out += ci * cj * m;
                }
            }
        }
        out
    }

    /// Image of basis vector `i` under `ρ(γ)`.
    pub fn action_row(&self, gamma: usize, i: usize) -> SparseVec {
        match &self.backing {
            Backing::GroupAlgebra => SparseVec::single(self.group.conj_idx(i, gamma)),
            Backing::Explicit { action, .. } => match &action[gamma] {
                ActionRep::Permutation(rows) => SparseVec::single(rows[i]),
                ActionRep::Sparse(rows) => rows[i].clone(),
            },
        }
    }

    pub fn apply_action(&self, gamma: usize, v: &SparseVec) -> SparseVec {
        match &self.backing {
            Backing::GroupAlgebra => v.map_keys(|&i| self.group.conj_idx(i, gamma)),
            Backing::Explicit { action, .. } => match &action[gamma] {
                ActionRep::Permutation(rows) => v.map_keys(|&i| rows[i]),
                ActionRep::Sparse(rows) => {
                    let mut out = SparseVec::new();
                    for (i, c) in v.iter() {
                        out.add_scaled(&rows[*i], c);
                    }
                    out
                }
            },
        }
    }

    /// Labels graded by each group element.
    pub fn sector_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.group.len()];
        for (i, &s) in self.sector.iter().enumerate() {
            out[s].push(i);
        }
        out
    }

    /// Copy with one structure constant shifted by `delta`, converting to an
    /// explicit backing if needed. Used to demonstrate that the checker
    /// rejects perturbed instances.
    pub fn with_perturbed_structure(
        &self,
        i: usize,
        j: usize,
        target: usize,
        delta: Rat,
    ) -> GFrobeniusAlgebra {
        let mut out = self.materialize();
        if let Backing::Explicit { structure, .. } = &mut out.backing {
            let entry = structure.entry((i, j)).or_default();
            entry.add_term(target, delta);
        }
        out.name = format!("{} (perturbed)", self.name);
        out
    }

    /// Expands a derived backing into explicit tables.
    pub fn materialize(&self) -> GFrobeniusAlgebra {
        match &self.backing {
            Backing::Explicit { .. } => self.clone(),
            Backing::GroupAlgebra => {
                let dim = self.dim();
                let mut structure = BTreeMap::new();
                for i in 0..dim {
                    for j in 0..dim {
                        structure.insert((i, j), self.product_of_basis(i, j));
                    }
                }
                let metric: Vec<Vec<Rat>> = (0..dim)
                    .map(|i| (0..dim).map(|j| self.metric_entry(i, j)).collect())
                    .collect();
                let action: Vec<ActionRep> = (0..self.group.len())
                    .map(|g| {
                        ActionRep::Permutation(
                            (0..dim).map(|i| self.group.conj_idx(i, g)).collect(),
                        )
                    })
                    .collect();
                GFrobeniusAlgebra {
                    name: self.name.clone(),
                    group: self.group.clone(),
                    labels: self.labels.clone(),
                    degrees: self.degrees.clone(),
                    d: self.d.clone(),
                    sector: self.sector.clone(),
                    unit: self.unit.clone(),
                    backing: Backing::Explicit { structure, metric, action },
                }
            }
        }
    }

    /// Averaging map over the normal factor of the presentation.
    pub fn pi_k(&self, pres: &SemidirectPresentation, v: &SparseVec) -> Result<SparseVec, Error> {
        if pres.ambient.elements != self.group.elements {
            return Err(Error::PresentationMismatch);
        }
        let mut out = SparseVec::new();
        for &k in &pres.k {
            out.add_assign(&self.apply_action(k, v));
        }
        Ok(out.scale(&(rat(1) / rat(pres.k.len() as i64))))
    }

    /// The coinvariant algebra along `Γ = K ⋊ L`: the image of the averaging
    /// map, graded over `L`, with the inherited product and action and the
    /// metric scaled by `1/|K|`.
    pub fn coinvariants(&self, pres: &SemidirectPresentation) -> Result<Coinvariants, Error> {
        if pres.ambient.elements != self.group.elements {
            return Err(Error::PresentationMismatch);
        }
        // image basis: row-reduce the averaged basis vectors
        let mut averaged: Vec<SparseVec> = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            averaged.push(self.pi_k(pres, &SparseVec::single(i))?);
        }
        averaged.sort();
        averaged.dedup();
        let rows = rref(averaged);

        let l_table = self.group.subgroup(&pres.l, None)?;
        let internal = |msg: String| Error::InternalInvariant(msg);

        let mut labels = Vec::with_capacity(rows.len());
        let mut sector = Vec::with_capacity(rows.len());
        let mut degrees = Vec::with_capacity(rows.len());
        for row in &rows {
            let pivot = *row.leading().expect("rref rows are nonzero").0;
            labels.push(format!("[{}]", self.labels[pivot]));
            let (_, l_amb) = pres.decompose(self.sector[pivot]);
            for t in row.keys() {
                let (_, l_other) = pres.decompose(self.sector[*t]);
                if l_other != l_amb {
                    return Err(internal(format!(
                        "averaged vector mixes complement sectors at {}",
                        self.labels[*t]
                    )));
                }
            }
            let l_new = l_table
                .index_of(&pres.ambient.elements[l_amb])
                .ok_or_else(|| internal("complement element missing from subgroup".into()))?;
            sector.push(l_new);
            let deg = self
                .vector_degree(row)
                .ok_or_else(|| internal("averaged vector is not homogeneous".into()))?;
            degrees.push(deg);
        }

        let in_image = |v: &SparseVec| -> Result<SparseVec, Error> {
            let coords = coordinates_in_rref(&rows, v)
                .ok_or_else(|| internal("vector escapes the coinvariant image".into()))?;
            Ok(SparseVec::from_terms(coords.into_iter().enumerate()))
        };

        let mut structure = BTreeMap::new();
        for (r, vr) in rows.iter().enumerate() {
            for (s, vs) in rows.iter().enumerate() {
                let prod = in_image(&self.multiply(vr, vs))?;
                if !prod.is_zero() {
                    structure.insert((r, s), prod);
                }
            }
        }

        let k_scale = rat(1) / rat(pres.k.len() as i64);
        let metric: Vec<Vec<Rat>> = rows
            .iter()
            .map(|vr| rows.iter().map(|vs| self.pairing(vr, vs) * &k_scale).collect())
            .collect();

        let mut action = Vec::with_capacity(l_table.len());
        for l_elt in &l_table.elements {
            let l_amb = pres
                .ambient
                .index_of(l_elt)
                .ok_or_else(|| internal("complement element missing from ambient".into()))?;
            let rows_of_l: Vec<SparseVec> = rows
                .iter()
                .map(|vr| in_image(&self.apply_action(l_amb, vr)))
                .collect::<Result<_, _>>()?;
            action.push(ActionRep::Sparse(rows_of_l));
        }

        let unit = in_image(&self.pi_k(pres, &self.unit)?)?;

        let algebra = GFrobeniusAlgebra {
            name: format!("coinv({})", self.name),
            group: l_table,
            labels,
            degrees,
            d: self.d.clone(),
            sector,
            unit,
            backing: Backing::Explicit { structure, metric, action },
        };
        Ok(Coinvariants { algebra, rows })
    }

    fn vector_degree(&self, v: &SparseVec) -> Option<Rat> {
        let mut terms = v.keys();
        let first = self.degrees[*terms.next()?].clone();
        for t in terms {
            if self.degrees[*t] != first {
                return None;
            }
        }
        Some(first)
    }

    /// Runs the eleven axioms, returning one verdict per axiom. Checks are
    /// exhaustive for small instances and seeded-sampled above the budget.
    pub fn check_axioms(&self) -> CheckReport {
        self.check_axioms_with(&CheckBudget::default())
    }

    pub fn check_axioms_with(&self, budget: &CheckBudget) -> CheckReport {
        let mut report = CheckReport::new();
        let dim = self.dim();
        let ng = self.group.len();
        let members = self.sector_members();
        let mut rng = rand::rngs::StdRng::seed_from_u64(budget.seed);

        // (i) graded module: identity action, right-action law, sector moves,
        // invertibility
        let mut v1 = Verdict::Pass;
        for i in 0..dim {
            if self.apply_action(self.group.identity, &SparseVec::single(i))
                != SparseVec::single(i)
            {
                v1 = Verdict::fail(format!("rho(1) moves {}", self.labels[i]));
                break;
            }
        }
        if v1.passed() {
            'outer: for g in 0..ng {
                for i in 0..dim {
                    let image = self.action_row(g, i);
                    let want = self.group.conj_idx(self.sector[i], g);
                    for t in image.keys() {
                        if self.sector[*t] != want {
                            v1 = Verdict::fail(format!(
                                "rho({}) sends {} outside sector {}",
                                self.group.elements[g],
                                self.labels[i],
                                self.group.elements[want]
                            ));
                            break 'outer;
                        }
                    }
                }
            }
        }
        if v1.passed() {
            let pairs = pair_schedule(ng, ng, budget, &mut rng);
            'pairs: for (g1, g2) in pairs {
                let g12 = self.group.mul_idx(g1, g2);
                for i in sample_indices(dim, 8, &mut rng) {
                    let b = SparseVec::single(i);
                    let two_step = self.apply_action(g2, &self.apply_action(g1, &b));
                    if two_step != self.apply_action(g12, &b) {
                        v1 = Verdict::fail(format!(
                            "rho is not a right action at ({}, {})",
                            self.group.elements[g1], self.group.elements[g2]
                        ));
                        break 'pairs;
                    }
                }
            }
        }
        if v1.passed() {
            if let Backing::Explicit { action, .. } = &self.backing {
                for (g, rep) in action.iter().enumerate() {
                    let ok = match rep {
                        ActionRep::Permutation(rows) => {
                            let mut seen = vec![false; dim];
                            rows.iter().all(|&r| {
                                r < dim && !std::mem::replace(&mut seen[r], true)
                            })
                        }
                        ActionRep::Sparse(rows) => {
                            let dense: Vec<Vec<Rat>> = rows
                                .iter()
                                .map(|r| (0..dim).map(|j| r.coeff(&j)).collect())
                                .collect();
                            rank(&dense) == dim
                        }
                    };
                    if !ok {
                        v1 = Verdict::fail(format!(
                            "rho({}) is not invertible",
                            self.group.elements[g]
                        ));
                        break;
                    }
                }
            }
        }
        report.push("i", v1);

        // (ii) self-invariance: rho(m) is the identity on sector m
        let mut v2 = Verdict::Pass;
        'two: for (m, labels) in members.iter().enumerate() {
            for &i in labels {
                if self.apply_action(m, &SparseVec::single(i)) != SparseVec::single(i) {
                    v2 = Verdict::fail(format!(
                        "rho({}) moves {} in its own sector",
                        self.group.elements[m], self.labels[i]
                    ));
                    break 'two;
                }
            }
        }
        report.push("ii", v2);

        // (iii) metric: symmetric, sector-paired, non-degenerate
        let mut v3 = Verdict::Pass;
        'three: for i in 0..dim {
            for j in 0..dim {
                let e = self.metric_entry(i, j);
                if e != self.metric_entry(j, i) {
                    v3 = Verdict::fail(format!(
                        "eta({}, {}) is asymmetric",
                        self.labels[i], self.labels[j]
                    ));
                    break 'three;
                }
                if !e.is_zero()
                    && self.group.mul_idx(self.sector[i], self.sector[j]) != self.group.identity
                {
                    v3 = Verdict::fail(format!(
                        "eta({}, {}) nonzero across non-inverse sectors",
                        self.labels[i], self.labels[j]
                    ));
                    break 'three;
                }
            }
        }
        if v3.passed() {
            for (m, labels) in members.iter().enumerate() {
                if labels.is_empty() {
                    continue;
                }
                let minv = self.group.inv_idx(m);
                let partner = &members[minv];
                let block: Vec<Vec<Rat>> = labels
                    .iter()
                    .map(|&i| partner.iter().map(|&j| self.metric_entry(i, j)).collect())
                    .collect();
                if partner.len() != labels.len() || rank(&block) != labels.len() {
                    v3 = Verdict::fail(format!(
                        "metric degenerate on sector {}",
                        self.group.elements[m]
                    ));
                    break;
                }
            }
        }
        report.push("iii", v3);

        // (iv) graded multiplication: sectors multiply, Q-degrees add
        let mut v4 = Verdict::Pass;
        'four: for (i, j) in pair_schedule(dim, dim, budget, &mut rng) {
            let want = self.group.mul_idx(self.sector[i], self.sector[j]);
            let want_deg = &self.degrees[i] + &self.degrees[j];
            for t in self.product_of_basis(i, j).keys() {
                if self.sector[*t] != want || self.degrees[*t] != want_deg {
                    v4 = Verdict::fail(format!(
                        "{}*{} has a component at {} outside its graded piece",
                        self.labels[i], self.labels[j], self.labels[*t]
                    ));
                    break 'four;
                }
            }
        }
        report.push("iv", v4);

        // (v) associativity
        let mut v5 = Verdict::Pass;
        for (i, j, k) in triple_schedule(dim, budget, &mut rng) {
            let left = self.multiply(&self.product_of_basis(i, j), &SparseVec::single(k));
            let right = self.multiply(&SparseVec::single(i), &self.product_of_basis(j, k));
            if left != right {
                v5 = Verdict::fail(format!(
                    "({}*{})*{} != {}*({}*{})",
                    self.labels[i],
                    self.labels[j],
                    self.labels[k],
                    self.labels[i],
                    self.labels[j],
                    self.labels[k]
                ));
                break;
            }
        }
        report.push("v", v5);

        // (vi) braided commutativity
        let mut v6 = Verdict::Pass;
        for (i, j) in pair_schedule(dim, dim, budget, &mut rng) {
            let braided = self.multiply(
                &self.apply_action(
                    self.group.inv_idx(self.sector[i]),
                    &SparseVec::single(j),
                ),
                &SparseVec::single(i),
            );
            if self.product_of_basis(i, j) != braided {
                v6 = Verdict::fail(format!(
                    "{}*{} != (rho(m^-1) {})*{}",
                    self.labels[i], self.labels[j], self.labels[j], self.labels[i]
                ));
                break;
            }
        }
        report.push("vi", v6);

        // (vii) equivariance of the multiplication
        let mut v7 = Verdict::Pass;
        for (g, i, j) in mixed_schedule(ng, dim, budget, &mut rng) {
            let lhs = self.multiply(&self.action_row(g, i), &self.action_row(g, j));
            let rhs = self.apply_action(g, &self.product_of_basis(i, j));
            if lhs != rhs {
                v7 = Verdict::fail(format!(
                    "rho({}) is not multiplicative at ({}, {})",
                    self.group.elements[g], self.labels[i], self.labels[j]
                ));
                break;
            }
        }
        report.push("vii", v7);

        // (viii) G-invariance of the metric
        let mut v8 = Verdict::Pass;
        for (g, i, j) in mixed_schedule(ng, dim, budget, &mut rng) {
            let lhs = self.pairing(&self.action_row(g, i), &self.action_row(g, j));
            if lhs != self.metric_entry(i, j) {
                v8 = Verdict::fail(format!(
                    "eta not invariant under rho({}) at ({}, {})",
                    self.group.elements[g], self.labels[i], self.labels[j]
                ));
                break;
            }
        }
        report.push("viii", v8);

        // (ix) invariance of the metric
        let mut v9 = Verdict::Pass;
        for (i, j, k) in triple_schedule(dim, budget, &mut rng) {
            let lhs = self.pairing(&self.product_of_basis(i, j), &SparseVec::single(k));
            let rhs = self.pairing(&SparseVec::single(i), &self.product_of_basis(j, k));
            if lhs != rhs {
                v9 = Verdict::fail(format!(
                    "eta({}*{}, {}) != eta({}, {}*{})",
                    self.labels[i],
                    self.labels[j],
                    self.labels[k],
                    self.labels[i],
                    self.labels[j],
                    self.labels[k]
                ));
                break;
            }
        }
        report.push("ix", v9);

        // (x) G-invariant identity
        let mut v10 = Verdict::Pass;
        for t in self.unit.keys() {
            if self.sector[*t] != self.group.identity {
                v10 = Verdict::fail("unit has components outside the identity sector".to_string());
            }
        }
        if v10.passed() {
            for i in 0..dim {
                let b = SparseVec::single(i);
                if self.multiply(&self.unit, &b) != b || self.multiply(&b, &self.unit) != b {
                    v10 = Verdict::fail(format!("unit fails on {}", self.labels[i]));
                    break;
                }
            }
        }
        if v10.passed() {
            for g in 0..ng {
                if self.apply_action(g, &self.unit) != self.unit {
                    v10 =
                        Verdict::fail(format!("rho({}) moves the unit", self.group.elements[g]));
                    break;
                }
            }
        }
        report.push("x", v10);

        // (xi) trace axiom over the commutator sectors
        let mut v11 = Verdict::Pass;
        'eleven: for (a, b) in pair_schedule(ng, ng, budget, &mut rng) {
            let c = self.group.commutator_idx(a, b);
            let binv = self.group.inv_idx(b);
            for &vi in &members[c] {
                let v = SparseVec::single(vi);
                let mut lhs = Rat::zero();
                for &x in &members[a] {
                    let moved = self.apply_action(binv, &SparseVec::single(x));
                    lhs += self.multiply(&v, &moved).coeff(&x);
                }
                let mut rhs = Rat::zero();
                for &y in &members[b] {
                    let product = self.multiply(&v, &SparseVec::single(y));
                    rhs += self.apply_action(a, &product).coeff(&y);
                }
                if lhs != rhs {
                    v11 = Verdict::fail(format!(
                        "trace mismatch at a={}, b={}, v={}",
                        self.group.elements[a], self.group.elements[b], self.labels[vi]
                    ));
                    break 'eleven;
                }
            }
        }
        report.push("xi", v11);

        report
    }
}

/// The coinvariant algebra together with its image basis in the parent's
/// coordinates (for group algebras: the plain 0/1 orbit sums).
#[derive(Clone, Debug)]
pub struct Coinvariants {
    pub algebra: GFrobeniusAlgebra,
    pub rows: Vec<SparseVec>,
}

fn sample_indices(n: usize, want: usize, rng: &mut rand::rngs::StdRng) -> Vec<usize> {
    if n <= want {
        (0..n).collect()
    } else {
        (0..want).map(|_| rng.gen_range(0..n)).collect()
    }
}

fn pair_schedule(
    a: usize,
    b: usize,
    budget: &CheckBudget,
    rng: &mut rand::rngs::StdRng,
) -> Vec<(usize, usize)> {
    let total = (a as u128) * (b as u128);
    if total <= 2_000_000 {
        (0..a).flat_map(|i| (0..b).map(move |j| (i, j))).collect()
    } else {
        (0..budget.samples)
            .map(|_| (rng.gen_range(0..a), rng.gen_range(0..b)))
            .collect()
    }
}

fn triple_schedule(
    dim: usize,
    budget: &CheckBudget,
    rng: &mut rand::rngs::StdRng,
) -> Vec<(usize, usize, usize)> {
    if dim <= budget.exhaustive_dim {
        (0..dim)
            .flat_map(|i| (0..dim).flat_map(move |j| (0..dim).map(move |k| (i, j, k))))
            .collect()
    } else {
        (0..budget.samples)
            .map(|_| {
                (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim))
            })
            .collect()
    }
}

fn mixed_schedule(
    ng: usize,
    dim: usize,
    budget: &CheckBudget,
    rng: &mut rand::rngs::StdRng,
) -> Vec<(usize, usize, usize)> {
    let total = (ng as u128) * (dim as u128) * (dim as u128);
    if total <= 2_000_000 {
        (0..ng)
            .flat_map(|g| (0..dim).flat_map(move |i| (0..dim).map(move |j| (g, i, j))))
            .collect()
    } else {
        (0..budget.samples)
            .map(|_| (rng.gen_range(0..ng), rng.gen_range(0..dim), rng.gen_range(0..dim)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{
        make_cyclic, make_symmetric, wreath_product, FiniteGroup, GroupTable,
        SemidirectPresentation,
    };
    use crate::rat::ratio;

    fn table(g: &FiniteGroup) -> GroupTable {
        GroupTable::from_group(g, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn group_algebra_of_s3_passes_all_axioms() {
        let h = GFrobeniusAlgebra::group_algebra(table(&make_symmetric(3)));
        let report = h.check_axioms();
        assert!(report.all_pass(), "{:?}", report.first_failure());
        assert_eq!(report.entries().len(), 11);
    }

    #[test]
    fn group_algebra_of_small_wreath_passes() {
        let h = GFrobeniusAlgebra::group_algebra(table(&wreath_product(make_cyclic(2), 2)));
        assert!(h.check_axioms().all_pass());
    }

    #[test]
    fn trivial_group_reduces_to_frobenius_axioms() {
        let a = crate::fixtures::torus_z2().unwrap();
        let h = GFrobeniusAlgebra::from_frobenius_trivial_group(&a).unwrap();
        let report = h.check_axioms();
        assert!(report.all_pass(), "{:?}", report.first_failure());
    }

    #[test]
    fn perturbed_group_algebra_fails_with_witness() {
        let h = GFrobeniusAlgebra::group_algebra(table(&make_cyclic(4)));
        let mutant = h.with_perturbed_structure(1, 2, 0, rat(1));
        let report = mutant.check_axioms();
        assert!(!report.all_pass());
        let (_, witness) = report.first_failure().unwrap();
        assert!(!witness.is_empty());
    }

    #[test]
    fn group_algebra_self_invariance_is_conjugation_fixing_the_grading() {
        let h = GFrobeniusAlgebra::group_algebra(table(&make_symmetric(3)));
        for i in 0..h.dim() {
            assert_eq!(h.apply_action(i, &SparseVec::single(i)), SparseVec::single(i));
        }
    }

    #[test]
    fn z2_group_algebra_metric_and_square() {
        let h = GFrobeniusAlgebra::group_algebra(table(&make_cyclic(2)));
        assert_eq!(h.metric_entry(1, 1), rat(1));
        assert_eq!(h.metric_entry(0, 1), rat(0));
        assert_eq!(h.product_of_basis(1, 1), SparseVec::single(0));
    }

    #[test]
    fn pi_k_is_idempotent_and_lands_on_orbit_averages() {
        let base = make_cyclic(2);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        let h = GFrobeniusAlgebra::group_algebra(pres.ambient.clone());
        for i in 0..h.dim() {
            let once = h.pi_k(&pres, &SparseVec::single(i)).unwrap();
            let twice = h.pi_k(&pres, &once).unwrap();
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn coinvariants_of_z2_wreath_2_has_dimension_6() {
        let base = make_cyclic(2);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        let h = GFrobeniusAlgebra::group_algebra(pres.ambient.clone());
        let coinv = h.coinvariants(&pres).unwrap();
        assert_eq!(coinv.algebra.dim(), 6);
        // 4 singleton orbits over the identity coset, 2 two-element orbits
        let sizes: Vec<usize> = coinv.rows.iter().map(|r| r.len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 1).count(), 4);
        assert_eq!(sizes.iter().filter(|&&s| s == 2).count(), 2);
        let report = coinv.algebra.check_axioms();
        assert!(report.all_pass(), "{:?}", report.first_failure());
    }

    #[test]
    fn coinvariants_with_trivial_k_is_the_identity() {
        let g = table(&make_symmetric(3));
        let h = GFrobeniusAlgebra::group_algebra(g.clone());
        let pres = SemidirectPresentation::trivial_k(g).unwrap();
        let coinv = h.coinvariants(&pres).unwrap();
        assert_eq!(coinv.algebra.dim(), h.dim());
        for (r, row) in coinv.rows.iter().enumerate() {
            assert_eq!(*row, SparseVec::single(r));
        }
        // metric unchanged: |K| = 1
        for i in 0..h.dim() {
            for j in 0..h.dim() {
                assert_eq!(coinv.algebra.metric_entry(i, j), h.metric_entry(i, j));
            }
        }
    }

    #[test]
    fn self_invariance_correction_on_coset_sectors() {
        // rho(l) fixes pi_K(v) for v graded by k0·l
        let base = make_cyclic(2);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        let h = GFrobeniusAlgebra::group_algebra(pres.ambient.clone());
        for i in 0..h.dim() {
            let (_, l_amb) = pres.decompose(i);
            let avg = h.pi_k(&pres, &SparseVec::single(i)).unwrap();
            assert_eq!(h.apply_action(l_amb, &avg), avg);
        }
    }

    #[test]
    fn iterated_coinvariants_match_full_coinvariants() {
        let base = make_cyclic(2);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        let ambient = pres.ambient.clone();
        let h = GFrobeniusAlgebra::group_algebra(ambient.clone());

        // route 1: average over K = G^I, then over the remaining L
        let step1 = h.coinvariants(&pres).unwrap();
        let l_full = SemidirectPresentation::full(step1.algebra.group.clone()).unwrap();
        let step2 = step1.algebra.coinvariants(&l_full).unwrap();

        // route 2: average over the whole group at once
        let full = SemidirectPresentation::full(ambient).unwrap();
        let direct = h.coinvariants(&full).unwrap();

        assert_eq!(step2.algebra.dim(), direct.algebra.dim());
        // express route-1 rows in ambient coordinates and compare spans
        let lifted: Vec<SparseVec> = step2
            .rows
            .iter()
            .map(|r| {
                let mut v = SparseVec::new();
                for (idx, c) in r.iter() {
                    v.add_scaled(&step1.rows[*idx], c);
                }
                v
            })
            .collect();
        assert_eq!(rref(lifted), direct.rows);
        // structure constants agree in the matched bases
        for i in 0..direct.algebra.dim() {
            for j in 0..direct.algebra.dim() {
                assert_eq!(
                    step2.algebra.product_of_basis(i, j),
                    direct.algebra.product_of_basis(i, j)
                );
            }
        }
    }

    #[test]
    fn coinvariant_products_have_nonnegative_coefficients() {
        let base = make_symmetric(3);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        let h = GFrobeniusAlgebra::group_algebra(pres.ambient.clone());
        let coinv = h.coinvariants(&pres).unwrap();
        for i in 0..coinv.algebra.dim() {
            for j in 0..coinv.algebra.dim() {
                for (_, c) in coinv.algebra.product_of_basis(i, j).iter() {
                    assert!(c >= &Rat::zero());
                }
            }
        }
    }

    #[test]
    fn presentation_mismatch_is_rejected() {
        let pres = SemidirectPresentation::wreath(&make_cyclic(2), 2, DEFAULT_CAP).unwrap();
        let other = GFrobeniusAlgebra::group_algebra(table(&make_cyclic(8)));
        assert!(matches!(
            other.coinvariants(&pres),
            Err(Error::PresentationMismatch)
        ));
    }

    #[test]
    fn coinvariant_metric_is_scaled_by_k_order() {
        let base = make_cyclic(2);
        let pres = SemidirectPresentation::wreath(&base, 2, DEFAULT_CAP).unwrap();
        let h = GFrobeniusAlgebra::group_algebra(pres.ambient.clone());
        let coinv = h.coinvariants(&pres).unwrap();
        // the two-element orbit sums over the transposition coset pair to
        // 2/|K| = 1/2 against themselves
        for (r, row) in coinv.rows.iter().enumerate() {
            if row.len() == 2 {
                assert_eq!(coinv.algebra.metric_entry(r, r), ratio(1, 2));
            }
        }
    }
}
