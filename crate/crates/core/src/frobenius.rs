//! Exact sparse engine for ℚ-graded commutative Frobenius algebras given by
//! structure constants: products, multi-products, the metric and its dual
//! basis, comultiplication, pullback/pushforward along surjections of index
//! sets, and the Euler class.
//!
//! Instances are validated on load: associativity, commutativity, identity,
//! metric symmetry, non-degeneracy, invariance, and grading are all checked
//! exactly (exhaustively up to dimension 64, by seeded sampling above), and
//! the first failing triple is named in the report.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};

use crate::error::{guard_cap, Error};
use crate::linalg::{invert_matrix, rank};
use crate::rat::{format_rat, rat, Rat};
use crate::report::{CheckReport, Verdict};
use crate::sparse::{tensor_of_factors, SparseVec, Tensor};

/// Raw instance data, prior to validation.
#[derive(Clone, Debug)]
pub struct FrobeniusData {
    pub name: String,
    pub labels: Vec<String>,
    pub degrees: Vec<Rat>,
    /// Half of the top degree.
    pub d: Rat,
    pub unit: SparseVec,
    /// Directional metric entries; missing transposes are filled in, and
    /// conflicting ones are reported by the checker.
    pub metric: BTreeMap<(usize, usize), Rat>,
    /// Directional structure entries `(i, j) -> b_i · b_j`.
    pub structure: BTreeMap<(usize, usize), SparseVec>,
}

impl FrobeniusData {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    /// Symmetric/commutative closure: fills in missing transposed entries
    /// without touching entries present in both orientations.
    fn closed(&self) -> FrobeniusData {
        let mut out = self.clone();
        for (&(i, j), v) in &self.metric {
            out.metric.entry((j, i)).or_insert_with(|| v.clone());
        }
        for (&(i, j), v) in &self.structure {
            out.structure.entry((j, i)).or_insert_with(|| v.clone());
        }
        out
    }

    fn dense_metric(&self) -> Vec<Vec<Rat>> {
        let n = self.dim();
        let mut m = vec![vec![Rat::zero(); n]; n];
        for (&(i, j), v) in &self.metric {
            m[i][j] = v.clone();
        }
        m
    }

    fn product(&self, i: usize, j: usize) -> SparseVec {
        self.structure.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Runs every load-time axiom, reporting one verdict per axiom with a
    /// witness for the first failure found.
    pub fn check(&self) -> CheckReport {
        self.check_with(&CheckBudget::default())
    }

    pub fn check_with(&self, budget: &CheckBudget) -> CheckReport {
        let data = self.closed();
        let n = data.dim();
        let mut report = CheckReport::new();

        // metric symmetry
        let mut verdict = Verdict::Pass;
        'sym: for (&(i, j), v) in &data.metric {
            if data.metric.get(&(j, i)).map(|w| w != v).unwrap_or(true) {
                verdict = Verdict::fail(format!(
                    "eta({}, {}) != eta({}, {})",
                    data.label(i),
                    data.label(j),
                    data.label(j),
                    data.label(i)
                ));
                break 'sym;
            }
        }
        report.push("metric-symmetric", verdict);

        // non-degeneracy (exact rank)
        let metric = data.dense_metric();
        report.push(
            "metric-nondegenerate",
            if rank(&metric) == n {
                Verdict::Pass
            } else {
                Verdict::fail(format!("metric rank below dimension {n}"))
            },
        );

        // unit is a two-sided identity
        let mut verdict = Verdict::Pass;
        for i in 0..n {
            let b = SparseVec::single(i);
            if data.multiply_raw(&data.unit, &b) != b || data.multiply_raw(&b, &data.unit) != b {
                verdict = Verdict::fail(format!("unit fails on {}", data.label(i)));
                break;
            }
        }
        report.push("unit-identity", verdict);

        // commutativity over basis pairs
        let mut verdict = Verdict::Pass;
        'comm: for i in 0..n {
            for j in 0..n {
                if data.product(i, j) != data.product(j, i) {
                    verdict = Verdict::fail(format!(
                        "{}*{} != {}*{}",
                        data.label(i),
                        data.label(j),
                        data.label(j),
                        data.label(i)
                    ));
                    break 'comm;
                }
            }
        }
        report.push("commutative", verdict);

        // associativity and metric invariance over basis triples
        let mut assoc = Verdict::Pass;
        let mut invar = Verdict::Pass;
        let run_triple = |i: usize, j: usize, k: usize, assoc: &mut Verdict, invar: &mut Verdict| {
            let ij = data.product(i, j);
            let jk = data.product(j, k);
            if matches!(assoc, Verdict::Pass) {
                let left = data.multiply_raw(&ij, &SparseVec::single(k));
                let right = data.multiply_raw(&SparseVec::single(i), &jk);
                if left != right {
                    *assoc = Verdict::fail(format!(
                        "({}*{})*{} != {}*({}*{})",
                        data.label(i),
                        data.label(j),
                        data.label(k),
                        data.label(i),
                        data.label(j),
                        data.label(k)
                    ));
                }
            }
            if matches!(invar, Verdict::Pass) {
                let left = data.pairing_raw(&metric, &ij, &SparseVec::single(k));
                let right = data.pairing_raw(&metric, &SparseVec::single(i), &jk);
                if left != right {
                    *invar = Verdict::fail(format!(
                        "eta({}*{}, {}) != eta({}, {}*{})",
                        data.label(i),
                        data.label(j),
                        data.label(k),
                        data.label(i),
                        data.label(j),
                        data.label(k)
                    ));
                }
            }
        };
        if n <= budget.exhaustive_dim {
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        run_triple(i, j, k, &mut assoc, &mut invar);
                    }
                }
            }
        } else {
            let mut rng = rand::rngs::StdRng::seed_from_u64(budget.seed);
            for _ in 0..budget.samples {
                let (i, j, k) =
                    (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                run_triple(i, j, k, &mut assoc, &mut invar);
            }
        }
        report.push("associative", assoc);
        report.push("metric-invariant", invar);

        // grading: degrees within [0, 2d]; products add degrees; metric
        // pairs only complementary degrees
        let two_d = &data.d * rat(2);
        let mut verdict = Verdict::Pass;
        for i in 0..n {
            if data.degrees[i] < Rat::zero() || data.degrees[i] > two_d {
                verdict =
                    Verdict::fail(format!("degree of {} outside [0, 2d]", data.label(i)));
                break;
            }
        }
        if matches!(verdict, Verdict::Pass) {
            'grade: for i in 0..n {
                for j in 0..n {
                    let want = &data.degrees[i] + &data.degrees[j];
                    for (t, _) in data.product(i, j).iter() {
                        if data.degrees[*t] != want {
                            verdict = Verdict::fail(format!(
                                "deg({}*{}) has component {} of degree {}",
                                data.label(i),
                                data.label(j),
                                data.label(*t),
                                format_rat(&data.degrees[*t])
                            ));
                            break 'grade;
                        }
                    }
                }
            }
        }
        report.push("grading-product", verdict);

        let mut verdict = Verdict::Pass;
        for (&(i, j), v) in &data.metric {
            if !v.is_zero() && &data.degrees[i] + &data.degrees[j] != two_d {
                verdict = Verdict::fail(format!(
                    "eta({}, {}) nonzero but degrees do not sum to 2d",
                    data.label(i),
                    data.label(j)
                ));
                break;
            }
        }
        report.push("grading-metric", verdict);

        report
    }

    fn multiply_raw(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, ci) in x.iter() {
            for (j, cj) in y.iter() {
                if let Some(s) = self.structure.get(&(*i, *j)) {
                    out.add_scaled(s, &(ci * cj));
                }
            }
        }
        out
    }

    fn pairing_raw(&self, metric: &[Vec<Rat>], x: &SparseVec, y: &SparseVec) -> Rat {
        let mut out = Rat::zero();
        for (i, ci) in x.iter() {
            for (j, cj) in y.iter() {
                out += ci * cj * &metric[*i][*j];
            }
        }
        out
    }

    /// Validates and seals the instance. The first failing axiom is
    /// reported as an error naming its witness.
    pub fn build(self) -> Result<FrobeniusAlgebra, Error> {
        self.build_with(&CheckBudget::default())
    }

    pub fn build_with(self, budget: &CheckBudget) -> Result<FrobeniusAlgebra, Error> {
        let report = self.check_with(budget);
        if let Some((axiom, witness)) = report.first_failure() {
            return Err(Error::AxiomViolation {
                axiom: axiom.to_string(),
                witness: witness.to_string(),
            });
        }
        let data = self.closed();
        let metric = data.dense_metric();
        let mut label_index = std::collections::HashMap::new();
        for (i, l) in data.labels.iter().enumerate() {
            if label_index.insert(l.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate basis label `{l}`")));
            }
        }
        Ok(FrobeniusAlgebra {
            name: data.name,
            labels: data.labels,
            label_index,
            degrees: data.degrees,
            d: data.d,
            unit: data.unit,
            structure: data.structure,
            metric,
        })
    }
}

/// Sampling policy for the load-time checker.
#[derive(Clone, Debug)]
pub struct CheckBudget {
    /// Exhaustive triple/pair checks up to this dimension.
    pub exhaustive_dim: usize,
    /// Number of seeded random triples above it.
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget { exhaustive_dim: 64, samples: 20_000, seed: 0x5EED_CAFE }
    }
}

/// A validated graded commutative Frobenius algebra.
#[derive(Clone, Debug)]
pub struct FrobeniusAlgebra {
    name: String,
    labels: Vec<String>,
    label_index: std::collections::HashMap<String, usize>,
    degrees: Vec<Rat>,
    d: Rat,
    unit: SparseVec,
    structure: BTreeMap<(usize, usize), SparseVec>,
    metric: Vec<Vec<Rat>>,
}

impl FrobeniusAlgebra {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, Error> {
        self.label_index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn degree(&self, i: usize) -> &Rat {
        &self.degrees[i]
    }

    pub fn half_top_degree(&self) -> &Rat {
        &self.d
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    pub fn metric_entry(&self, i: usize, j: usize) -> &Rat {
        &self.metric[i][j]
    }

    /// Degree of the tensor assignment `labels`, the sum of factor degrees.
    pub fn tensor_degree(&self, labels: &[usize]) -> Rat {
        labels.iter().fold(Rat::zero(), |acc, &i| acc + &self.degrees[i])
    }

    /// If every term of `v` has the same degree, that degree.
    pub fn homogeneous_degree(&self, v: &SparseVec) -> Option<Rat> {
        let mut terms = v.keys();
        let first = self.degrees[*terms.next()?].clone();
        for t in terms {
            if self.degrees[*t] != first {
                return None;
            }
        }
        Some(first)
    }

    pub fn product_of_basis(&self, i: usize, j: usize) -> SparseVec {
        self.structure.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Bilinear extension of the structure constants.
    pub fn multiply(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, ci) in x.iter() {
            for (j, cj) in y.iter() {
                if let Some(s) = self.structure.get(&(*i, *j)) {
                    out.add_scaled(s, &(ci * cj));
                }
            }
        }
        out
    }

    /// Left fold of `multiply`; the empty product is the unit.
    pub fn multi_product<'a, I: IntoIterator<Item = &'a SparseVec>>(&self, xs: I) -> SparseVec {
        let mut acc = self.unit.clone();
        for x in xs {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    /// Metric pairing extended bilinearly.
    pub fn pairing(&self, x: &SparseVec, y: &SparseVec) -> Rat {
        let mut out = Rat::zero();
        for (i, ci) in x.iter() {
            for (j, cj) in y.iter() {
                let m = &self.metric[*i][*j];
                if !m.is_zero() {
                    out += ci * cj * m;
                }
            }
        }
        out
    }

    /// Pairing of two tensors of equal arity, factorwise.
    pub fn tensor_pairing(&self, x: &Tensor, y: &Tensor) -> Rat {
        let mut out = Rat::zero();
        for (kx, cx) in x.iter() {
            for (ky, cy) in y.iter() {
                debug_assert_eq!(kx.len(), ky.len());
                let mut m = Rat::from_integer(1.into());
                for (a, b) in kx.iter().zip(ky.iter()) {
                    let e = &self.metric[*a][*b];
                    if e.is_zero() {
                        m = Rat::zero();
                        break;
                    }
                    m *= e;
                }
                if !m.is_zero() {
                    out += cx * cy * m;
                }
            }
        }
        out
    }

    /// The dual basis `{b^i}` with `eta(b_i, b^j) = δ_ij`, by exact solve.
    pub fn dual_basis(&self) -> Result<Vec<SparseVec>, Error> {
        let inv = invert_matrix(&self.metric)?;
        let n = self.dim();
        Ok((0..n)
            .map(|j| {
                SparseVec::from_terms((0..n).map(|k| (k, inv[j][k].clone())))
            })
            .collect())
    }

    /// Comultiplication into `r` factors: the metric dual of the
    /// `r`-fold multi-product,
    /// `m_*(x) = Σ eta(x, b_{i_1}···b_{i_r}) b^{i_1} ⊗ ··· ⊗ b^{i_r}`.
    pub fn comultiply(&self, x: &SparseVec, r: usize, cap: u64) -> Result<Tensor, Error> {
        assert!(r >= 1, "comultiplication needs r >= 1");
        let n = self.dim();
        guard_cap((n as u128).pow(r as u32), cap)?;
        let dual = self.dual_basis()?;
        let mut out = Tensor::new();
        let mut tuple = vec![0usize; r];
        self.comultiply_rec(x, r, 0, &self.unit.clone(), &mut tuple, &dual, &mut out);
        Ok(out)
    }

    fn comultiply_rec(
        &self,
        x: &SparseVec,
        r: usize,
        depth: usize,
        partial: &SparseVec,
        tuple: &mut Vec<usize>,
        dual: &[SparseVec],
        out: &mut Tensor,
    ) {
        if depth == r {
            let c = self.pairing(x, partial);
            if !c.is_zero() {
                let factors: Vec<SparseVec> = tuple.iter().map(|&i| dual[i].clone()).collect();
                out.add_assign(&tensor_of_factors(&factors).scale(&c));
            }
            return;
        }
        for i in 0..self.dim() {
            let next = self.multiply(partial, &SparseVec::single(i));
            if next.is_zero() {
                continue;
            }
            tuple[depth] = i;
            self.comultiply_rec(x, r, depth + 1, &next, tuple, dual, out);
        }
    }

    /// Pullback along a surjection: multiplies the factors within each
    /// preimage block.
    pub fn phi_star(&self, phi: &Surjection, x: &Tensor) -> Tensor {
        let mut out = Tensor::new();
        for (key, c) in x.iter() {
            assert_eq!(key.len(), phi.source_len(), "tensor arity does not match the map");
            let factors: Vec<SparseVec> = (0..phi.target_len())
                .map(|t| {
                    let vecs: Vec<SparseVec> =
                        phi.preimage(t).iter().map(|&s| SparseVec::single(key[s])).collect();
                    self.multi_product(vecs.iter())
                })
                .collect();
            out.add_assign(&tensor_of_factors(&factors).scale(c));
        }
        out
    }

    /// Pushforward along a surjection: the metric adjoint of `phi_star`,
    /// comultiplying each target factor over its preimage block.
    pub fn phi_lower(&self, phi: &Surjection, y: &Tensor, cap: u64) -> Result<Tensor, Error> {
        let mut out = Tensor::new();
        for (key, c) in y.iter() {
            assert_eq!(key.len(), phi.target_len(), "tensor arity does not match the map");
            // comultiply per block, then distribute into source positions
            let mut partial: Vec<(Vec<usize>, Rat)> = vec![(vec![0; phi.source_len()], c.clone())];
            for t in 0..phi.target_len() {
                let block = phi.preimage(t);
                let split = self.comultiply(&SparseVec::single(key[t]), block.len(), cap)?;
                let mut next = Vec::with_capacity(partial.len() * split.len());
                for (prefix, cp) in &partial {
                    for (bk, cb) in split.iter() {
                        let mut full = prefix.clone();
                        for (slot, &s) in block.iter().enumerate() {
                            full[s] = bk[slot];
                        }
                        next.push((full, cp * cb));
                    }
                }
                partial = next;
            }
            for (key, c) in partial {
                out.add_term(key, c);
            }
        }
        Ok(out)
    }

    /// Euler class: multiply the two legs of the comultiplied unit.
    pub fn euler_class(&self, cap: u64) -> Result<SparseVec, Error> {
        let m = self.comultiply(&self.unit, 2, cap)?;
        let mut out = SparseVec::new();
        for (key, c) in m.iter() {
            out.add_scaled(&self.product_of_basis(key[0], key[1]), c);
        }
        Ok(out)
    }

    /// Vector from `(label, coefficient)` pairs.
    pub fn vector_from_labels(&self, terms: &[(String, Rat)]) -> Result<SparseVec, Error> {
        let mut v = SparseVec::new();
        for (l, c) in terms {
            v.add_term(self.index_of(l)?, c.clone());
        }
        Ok(v)
    }
}

/// A surjection between index positions `0..source_len -> 0..target_len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surjection {
    map: Vec<usize>,
    preimages: Vec<Vec<usize>>,
}

impl Surjection {
    pub fn new(map: Vec<usize>, target_len: usize) -> Result<Surjection, Error> {
        let mut preimages = vec![Vec::new(); target_len];
        for (s, &t) in map.iter().enumerate() {
            if t >= target_len {
                return Err(Error::NotSurjective);
            }
            preimages[t].push(s);
        }
        if preimages.iter().any(|p| p.is_empty()) {
            return Err(Error::NotSurjective);
        }
        Ok(Surjection { map, preimages })
    }

    pub fn source_len(&self) -> usize {
        self.map.len()
    }

    pub fn target_len(&self) -> usize {
        self.preimages.len()
    }

    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    /// Source positions of a target, in increasing order.
    pub fn preimage(&self, t: usize) -> &[usize] {
        &self.preimages[t]
    }
}

/// The one-dimensional algebra ℚ with `eta(1,1) = 1`.
pub fn rationals_algebra() -> FrobeniusAlgebra {
    let mut metric = BTreeMap::new();
    metric.insert((0, 0), rat(1));
    let mut structure = BTreeMap::new();
    structure.insert((0, 0), SparseVec::single(0));
    FrobeniusData {
        name: "Q".into(),
        labels: vec!["1".into()],
        degrees: vec![Rat::zero()],
        d: Rat::zero(),
        unit: SparseVec::single(0),
        metric,
        structure,
    }
    .build()
    .expect("the rationals are a Frobenius algebra")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_CAP;
    use crate::fixtures;
    use crate::rat::ratio;

    fn torus() -> FrobeniusAlgebra {
        fixtures::torus_z2().expect("bundled torus instance is valid")
    }

    #[test]
    fn torus_products_match_published_table() {
        let a = torus();
        let phi = |k: usize| SparseVec::single(k - 1);
        assert_eq!(a.multiply(&phi(3), &phi(4)), phi(2));
        assert_eq!(a.multiply(&phi(4), &phi(3)), phi(2));
        assert_eq!(a.multiply(&phi(9), &phi(9)), phi(2));
        assert!(a.multiply(&phi(9), &phi(10)).is_zero());
        assert!(a.multiply(&phi(3), &phi(5)).is_zero());
        assert!(a.multiply(&phi(2), &phi(2)).is_zero());
    }

    #[test]
    fn unit_is_identity_on_random_vectors() {
        let a = torus();
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let x = SparseVec::from_terms(
                (0..a.dim()).map(|i| (i, rat(rng.gen_range(-4..=4)))),
            );
            assert_eq!(a.multiply(&x, a.unit()), x);
            assert_eq!(a.multiply(a.unit(), &x), x);
        }
    }

    #[test]
    fn dual_basis_of_center_of_z2() {
        let a = fixtures::center_algebra_of_spec("cyclic:2").unwrap();
        let duals = a.dual_basis().unwrap();
        assert_eq!(duals[0], SparseVec::term(0, rat(2)));
        assert_eq!(duals[1], SparseVec::term(1, rat(2)));
        for i in 0..2 {
            for j in 0..2 {
                let want = if i == j { rat(1) } else { rat(0) };
                assert_eq!(a.pairing(&SparseVec::single(i), &duals[j]), want);
            }
        }
    }

    #[test]
    fn dual_basis_orthonormal_metric_is_self_dual() {
        let mut metric = BTreeMap::new();
        metric.insert((0, 0), rat(1));
        metric.insert((1, 1), rat(1));
        let mut structure = BTreeMap::new();
        structure.insert((0, 0), SparseVec::single(0));
        structure.insert((0, 1), SparseVec::single(1));
        structure.insert((1, 0), SparseVec::single(1));
        structure.insert((1, 1), SparseVec::single(0));
        let a = FrobeniusData {
            name: "orthonormal".into(),
            labels: vec!["e".into(), "s".into()],
            degrees: vec![Rat::zero(), Rat::zero()],
            d: Rat::zero(),
            unit: SparseVec::single(0),
            metric,
            structure,
        }
        .build()
        .unwrap();
        let duals = a.dual_basis().unwrap();
        assert_eq!(duals[0], SparseVec::single(0));
        assert_eq!(duals[1], SparseVec::single(1));
    }

    #[test]
    fn torus_dual_of_unit() {
        let a = torus();
        let duals = a.dual_basis().unwrap();
        assert_eq!(duals[0], SparseVec::term(1, rat(2)), "dual of phi1 is 2*phi2");
    }

    #[test]
    fn comultiply_r1_is_identity() {
        let a = torus();
        let mut rng = rand::rngs::StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let x = SparseVec::from_terms(
                (0..a.dim()).map(|i| (i, rat(rng.gen_range(-3..=3)))),
            );
            let t = a.comultiply(&x, 1, DEFAULT_CAP).unwrap();
            assert_eq!(t, x.map_keys(|&i| vec![i]));
        }
    }

    #[test]
    fn torus_comultiplied_top_class() {
        let a = torus();
        let t = a.comultiply(&SparseVec::single(1), 2, DEFAULT_CAP).unwrap();
        assert_eq!(t, Tensor::term(vec![1, 1], rat(2)), "m_*(phi2) = 2 phi2⊗phi2");
    }

    #[test]
    fn center_z2_comultiplied_unit() {
        let a = fixtures::center_algebra_of_spec("cyclic:2").unwrap();
        let t = a.comultiply(a.unit(), 2, DEFAULT_CAP).unwrap();
        let want =
            Tensor::from_terms([(vec![0, 0], rat(2)), (vec![1, 1], rat(2))]);
        assert_eq!(t, want);
    }

    #[test]
    fn phi_star_torus_example() {
        // {1,2,3} -> {1,2} with 1,2 -> 1 and 3 -> 2 sends phi3⊗phi4⊗phi9 to phi2⊗phi9
        let a = torus();
        let phi = Surjection::new(vec![0, 0, 1], 2).unwrap();
        let x = Tensor::single(vec![2, 3, 8]);
        assert_eq!(a.phi_star(&phi, &x), Tensor::single(vec![1, 8]));
    }

    #[test]
    fn phi_star_bijection_relabels() {
        let a = torus();
        let phi = Surjection::new(vec![1, 0], 2).unwrap();
        let x = Tensor::single(vec![2, 8]);
        assert_eq!(a.phi_star(&phi, &x), Tensor::single(vec![8, 2]));
    }

    #[test]
    fn phi_adjointness_random() {
        let a = fixtures::center_algebra_of_spec("sym:3").unwrap();
        let phi = Surjection::new(vec![0, 0, 1], 2).unwrap();
        let mut rng = rand::rngs::StdRng::seed_from_u64(29);
        let mut random_tensor = |arity: usize, rng: &mut rand::rngs::StdRng| {
            let mut t = Tensor::new();
            for _ in 0..4 {
                let key: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..a.dim())).collect();
                t.add_term(key, rat(rng.gen_range(-3..=3)));
            }
            t
        };
        for _ in 0..100 {
            let x = random_tensor(3, &mut rng);
            let y = random_tensor(2, &mut rng);
            let lhs = a.tensor_pairing(&a.phi_lower(&phi, &y, DEFAULT_CAP).unwrap(), &x);
            let rhs = a.tensor_pairing(&y, &a.phi_star(&phi, &x));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn euler_class_values() {
        let torus = torus();
        assert_eq!(
            torus.euler_class(DEFAULT_CAP).unwrap(),
            SparseVec::term(1, rat(48)),
            "torus Euler class is 48 phi2"
        );
        let z2 = fixtures::center_algebra_of_spec("cyclic:2").unwrap();
        assert_eq!(z2.euler_class(DEFAULT_CAP).unwrap(), SparseVec::term(0, rat(4)));
        let s3 = fixtures::center_algebra_of_spec("sym:3").unwrap();
        let e = s3.euler_class(DEFAULT_CAP).unwrap();
        assert_eq!(e.coeff(&0), rat(18), "coefficient of the identity class is sum of |Z(g)|");
    }

    #[test]
    fn checker_names_failing_pair() {
        let mut data = fixtures::torus_z2_data().unwrap();
        data.metric.insert((2, 3), ratio(1, 3)); // conflicts with (3,2) = 1/2
        let report = data.check();
        let (axiom, witness) = report.first_failure().expect("must fail");
        assert_eq!(axiom, "metric-symmetric");
        assert!(witness.contains("phi3") && witness.contains("phi4"), "witness: {witness}");
    }

    #[test]
    fn checker_rejects_broken_associativity() {
        let mut data = fixtures::torus_z2_data().unwrap();
        data.structure.insert((2, 3), SparseVec::single(0)); // phi3*phi4 = phi1
        data.structure.insert((3, 2), SparseVec::single(0));
        let report = data.check();
        assert!(!report.all_pass());
    }

    #[test]
    fn surjection_validation() {
        assert!(Surjection::new(vec![0, 0], 2).is_err());
        assert!(Surjection::new(vec![0, 2], 2).is_err());
        assert!(Surjection::new(vec![0, 1, 0], 2).is_ok());
    }

    #[test]
    fn unknown_label_is_reported() {
        let a = torus();
        assert!(matches!(a.index_of("phi99"), Err(Error::UnknownLabel(_))));
    }
}
