//! JSON instance schemas and report serialization.
//!
//! Rationals travel as text (`"p/q"` or `"p"`) so values are exact on the
//! wire. Omitted metric/structure entries are zero; transposed entries may
//! be omitted and are filled in symmetrically, while entries present in both
//! orientations must agree (the checker reports the pair otherwise).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, DEFAULT_CAP};
use crate::frobenius::{FrobeniusAlgebra, FrobeniusData};
use crate::gfrob::{ActionRep, GFrobeniusAlgebra};
use crate::groups::{FiniteGroup, GroupTable};
use crate::lehnsorger::{LsAlgebra, LsElt, LsKey};
use crate::perm::{orbits, Perm};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::sparse::SparseVec;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    #[serde(default = "zero_text")]
    pub degree: String,
}

fn zero_text() -> String {
    "0".to_string()
}

/// Frobenius instance file.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusFile {
    pub name: String,
    #[serde(default = "zero_text")]
    pub d: String,
    pub basis: Vec<BasisEntry>,
    pub unit: Vec<(String, String)>,
    #[serde(default)]
    pub metric: Vec<(String, String, String)>,
    #[serde(default)]
    pub structure: Vec<(String, String, String, String)>,
}

/// Equivariant instance file: the Frobenius fields plus the group, the
/// sector grading, and the action matrices (sparse, per element index).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GFrobeniusFile {
    pub name: String,
    #[serde(default = "zero_text")]
    pub d: String,
    pub group: String,
    pub basis: Vec<BasisEntry>,
    pub unit: Vec<(String, String)>,
    #[serde(default)]
    pub metric: Vec<(String, String, String)>,
    #[serde(default)]
    pub structure: Vec<(String, String, String, String)>,
    pub sector: Vec<(String, usize)>,
    #[serde(default)]
    pub action: BTreeMap<String, Vec<(String, String, String)>>,
}

fn label_map(basis: &[BasisEntry]) -> Result<BTreeMap<&str, usize>, Error> {
    let mut map = BTreeMap::new();
    for (i, entry) in basis.iter().enumerate() {
        if map.insert(entry.label.as_str(), i).is_some() {
            return Err(Error::Parse(format!("duplicate basis label `{}`", entry.label)));
        }
    }
    Ok(map)
}

fn lookup(map: &BTreeMap<&str, usize>, label: &str) -> Result<usize, Error> {
    map.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Converts a parsed file into checkable instance data.
pub fn frobenius_data_from_file(file: &FrobeniusFile) -> Result<FrobeniusData, Error> {
    if file.basis.is_empty() {
        return Err(Error::Parse("instance has an empty basis".into()));
    }
    let map = label_map(&file.basis)?;
    let degrees = file
        .basis
        .iter()
        .map(|e| parse_rat(&e.degree))
        .collect::<Result<Vec<_>, _>>()?;
    let mut unit = SparseVec::new();
    for (label, coeff) in &file.unit {
        unit.add_term(lookup(&map, label)?, parse_rat(coeff)?);
    }
    if unit.is_zero() {
        return Err(Error::Parse("instance unit is zero".into()));
    }
    let mut metric = BTreeMap::new();
    for (a, b, v) in &file.metric {
        let key = (lookup(&map, a)?, lookup(&map, b)?);
        if metric.insert(key, parse_rat(v)?).is_some() {
            return Err(Error::Parse(format!("duplicate metric entry ({a}, {b})")));
        }
    }
    let mut structure: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (a, b, t, v) in &file.structure {
        let key = (lookup(&map, a)?, lookup(&map, b)?);
        structure
            .entry(key)
            .or_default()
            .add_term(lookup(&map, t)?, parse_rat(v)?);
    }
    Ok(FrobeniusData {
        name: file.name.clone(),
        labels: file.basis.iter().map(|e| e.label.clone()).collect(),
        degrees,
        d: parse_rat(&file.d)?,
        unit,
        metric,
        structure,
    })
}

pub fn frobenius_data_from_json(text: &str) -> Result<FrobeniusData, Error> {
    let file: FrobeniusFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    frobenius_data_from_file(&file)
}

pub fn frobenius_file_from_algebra(a: &FrobeniusAlgebra) -> FrobeniusFile {
    let basis = (0..a.dim())
        .map(|i| BasisEntry { label: a.label(i).to_string(), degree: format_rat(a.degree(i)) })
        .collect();
    let unit = a.unit().iter().map(|(i, c)| (a.label(*i).to_string(), format_rat(c))).collect();
    let mut metric = Vec::new();
    for i in 0..a.dim() {
        for j in i..a.dim() {
            let v = a.metric_entry(i, j);
            if !num_traits::Zero::is_zero(v) {
                metric.push((a.label(i).to_string(), a.label(j).to_string(), format_rat(v)));
            }
        }
    }
    let mut structure = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            for (t, c) in a.product_of_basis(i, j).iter() {
                structure.push((
                    a.label(i).to_string(),
                    a.label(j).to_string(),
                    a.label(*t).to_string(),
                    format_rat(c),
                ));
            }
        }
    }
    FrobeniusFile {
        name: a.name().to_string(),
        d: format_rat(a.half_top_degree()),
        basis,
        unit,
        metric,
        structure,
    }
}

pub fn gfrobenius_from_file(file: &GFrobeniusFile) -> Result<GFrobeniusAlgebra, Error> {
    let group = FiniteGroup::parse_spec(&file.group)?;
    let table = GroupTable::from_group(&group, DEFAULT_CAP)?;
    let map = label_map(&file.basis)?;
    let dim = file.basis.len();
    let degrees = file
        .basis
        .iter()
        .map(|e| parse_rat(&e.degree))
        .collect::<Result<Vec<_>, _>>()?;
    let mut unit = SparseVec::new();
    for (label, coeff) in &file.unit {
        unit.add_term(lookup(&map, label)?, parse_rat(coeff)?);
    }
    let mut sector = vec![usize::MAX; dim];
    for (label, elt) in &file.sector {
        sector[lookup(&map, label)?] = *elt;
    }
    if sector.iter().any(|&s| s == usize::MAX) {
        return Err(Error::Parse("every basis label needs a sector entry".into()));
    }
    let mut metric = vec![vec![Rat::from_integer(0.into()); dim]; dim];
    let mut seen = std::collections::HashSet::new();
    for (a, b, v) in &file.metric {
        let key = (lookup(&map, a)?, lookup(&map, b)?);
        if !seen.insert(key) {
            return Err(Error::Parse(format!("duplicate metric entry ({a}, {b})")));
        }
        metric[key.0][key.1] = parse_rat(v)?;
    }
    // fill omitted transposes
    for i in 0..dim {
        for j in 0..dim {
            if seen.contains(&(i, j)) && !seen.contains(&(j, i)) {
                metric[j][i] = metric[i][j].clone();
            }
        }
    }
    let mut structure: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for (a, b, t, v) in &file.structure {
        let key = (lookup(&map, a)?, lookup(&map, b)?);
        structure
            .entry(key)
            .or_default()
            .add_term(lookup(&map, t)?, parse_rat(v)?);
    }
    let mut action = Vec::with_capacity(table.len());
    for g in 0..table.len() {
        let rows = match file.action.get(&g.to_string()) {
            None => {
                return Err(Error::Parse(format!(
                    "action matrix missing for element index {g}"
                )))
            }
            Some(entries) => {
                let mut rows = vec![SparseVec::new(); dim];
                for (from, to, v) in entries {
                    rows[lookup(&map, from)?].add_term(lookup(&map, to)?, parse_rat(v)?);
                }
                rows
            }
        };
        action.push(ActionRep::Sparse(rows));
    }
    GFrobeniusAlgebra::new_explicit(
        file.name.clone(),
        table,
        file.basis.iter().map(|e| e.label.clone()).collect(),
        degrees,
        parse_rat(&file.d)?,
        sector,
        unit,
        structure,
        metric,
        action,
    )
}

pub fn gfrobenius_from_json(text: &str) -> Result<GFrobeniusAlgebra, Error> {
    let file: GFrobeniusFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    gfrobenius_from_file(&file)
}

pub fn gfrobenius_file_from_algebra(a: &GFrobeniusAlgebra) -> Result<GFrobeniusFile, Error> {
    let group = a
        .group
        .spec
        .clone()
        .ok_or_else(|| Error::Parse("algebra's group has no spec text".into()))?;
    let dim = a.dim();
    let basis = (0..dim)
        .map(|i| BasisEntry {
            label: a.labels[i].clone(),
            degree: format_rat(&a.degrees[i]),
        })
        .collect();
    let unit = a
        .unit
        .iter()
        .map(|(i, c)| (a.labels[*i].clone(), format_rat(c)))
        .collect();
    let mut metric = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let v = a.metric_entry(i, j);
            if !num_traits::Zero::is_zero(&v) {
                metric.push((a.labels[i].clone(), a.labels[j].clone(), format_rat(&v)));
            }
        }
    }
    let mut structure = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            for (t, c) in a.product_of_basis(i, j).iter() {
                structure.push((
                    a.labels[i].clone(),
                    a.labels[j].clone(),
                    a.labels[*t].clone(),
                    format_rat(c),
                ));
            }
        }
    }
    let sector = (0..dim).map(|i| (a.labels[i].clone(), a.sector[i])).collect();
    let mut action = BTreeMap::new();
    for g in 0..a.group.len() {
        let mut entries = Vec::new();
        for i in 0..dim {
            for (t, c) in a.action_row(g, i).iter() {
                entries.push((a.labels[i].clone(), a.labels[*t].clone(), format_rat(c)));
            }
        }
        action.insert(g.to_string(), entries);
    }
    Ok(GFrobeniusFile {
        name: a.name.clone(),
        d: format_rat(&a.d),
        group,
        basis,
        unit,
        metric,
        structure,
        sector,
        action,
    })
}

/// One term of a Lehn-Sorger element on the wire.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LsTermFile {
    pub sigma: String,
    /// `[orbit representative (1-based smallest member), base label]` pairs.
    pub assign: Vec<(usize, String)>,
    #[serde(default = "one_text")]
    pub coeff: String,
}

fn one_text() -> String {
    "1".to_string()
}

pub fn ls_elt_from_json(text: &str, ls: &LsAlgebra) -> Result<LsElt, Error> {
    let terms: Vec<LsTermFile> =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = LsElt::new();
    for term in &terms {
        let sigma = Perm::parse(&term.sigma, ls.n())?;
        let o = orbits(&sigma);
        let mut assign = vec![usize::MAX; o.len()];
        for (rep, label) in &term.assign {
            if *rep == 0 || *rep > ls.n() {
                return Err(Error::Parse(format!("orbit representative {rep} out of range")));
            }
            let idx = rep - 1;
            let block = o.block_index(idx);
            if o.blocks()[block][0] != idx {
                return Err(Error::Parse(format!(
                    "index {rep} is not the smallest member of its orbit"
                )));
            }
            assign[block] = ls.base().index_of(label)?;
        }
        if assign.iter().any(|&a| a == usize::MAX) {
            return Err(Error::Parse(format!(
                "assignment misses an orbit of {}",
                term.sigma
            )));
        }
        out.add_term(LsKey::new(sigma, assign), parse_rat(&term.coeff)?);
    }
    Ok(out)
}

pub fn ls_elt_to_terms(elt: &LsElt, ls: &LsAlgebra) -> Vec<LsTermFile> {
    elt.iter()
        .map(|(key, c)| {
            let o = orbits(&key.sigma);
            LsTermFile {
                sigma: key.sigma.to_string(),
                assign: o
                    .blocks()
                    .iter()
                    .zip(key.assign.iter())
                    .map(|(block, &label)| (block[0] + 1, ls.base().label(label).to_string()))
                    .collect(),
                coeff: format_rat(c),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rat::{rat, ratio};

    #[test]
    fn torus_fixture_loads_and_validates() {
        let a = fixtures::torus_z2().unwrap();
        assert_eq!(a.dim(), 24);
        assert_eq!(*a.half_top_degree(), rat(2));
        assert_eq!(*a.metric_entry(0, 1), ratio(1, 2));
        assert_eq!(*a.metric_entry(1, 0), ratio(1, 2), "symmetric closure fills transposes");
    }

    #[test]
    fn frobenius_file_round_trip() {
        let a = fixtures::center_algebra_of_spec("sym:3").unwrap();
        let file = frobenius_file_from_algebra(&a);
        let text = serde_json::to_string(&file).unwrap();
        let b = frobenius_data_from_json(&text).unwrap().build().unwrap();
        assert_eq!(b.dim(), a.dim());
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                assert_eq!(a.product_of_basis(i, j), b.product_of_basis(i, j));
                assert_eq!(a.metric_entry(i, j), b.metric_entry(i, j));
            }
        }
    }

    #[test]
    fn gfrobenius_file_round_trip() {
        let table = GroupTable::from_group(&crate::groups::make_symmetric(3), DEFAULT_CAP).unwrap();
        let h = GFrobeniusAlgebra::group_algebra(table);
        let file = gfrobenius_file_from_algebra(&h).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        let g = gfrobenius_from_json(&text).unwrap();
        assert!(g.check_axioms().all_pass());
        assert_eq!(g.dim(), h.dim());
    }

    #[test]
    fn ls_elt_round_trip() {
        let ls = LsAlgebra::new(
            fixtures::torus_z2().unwrap(),
            3,
            crate::error::DEFAULT_CAP,
        )
        .unwrap();
        let text = r#"[{"sigma": "(1 2)", "assign": [[1, "phi9"], [3, "phi2"]], "coeff": "3/2"}]"#;
        let elt = ls_elt_from_json(text, &ls).unwrap();
        assert_eq!(elt.len(), 1);
        let (key, c) = elt.leading().unwrap();
        assert_eq!(*c, ratio(3, 2));
        assert_eq!(key.assign, vec![8, 1]);
        let back = ls_elt_to_terms(&elt, &ls);
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].sigma, "(1 2)");
        assert_eq!(back[0].assign, vec![(1, "phi9".to_string()), (3, "phi2".to_string())]);
    }

    #[test]
    fn ls_elt_rejects_bad_assignments() {
        let ls = LsAlgebra::new(
            fixtures::torus_z2().unwrap(),
            2,
            crate::error::DEFAULT_CAP,
        )
        .unwrap();
        // representative must be the smallest orbit member
        let text = r#"[{"sigma": "(1 2)", "assign": [[2, "phi1"]], "coeff": "1"}]"#;
        assert!(ls_elt_from_json(text, &ls).is_err());
        // missing orbit
        let text = r#"[{"sigma": "()", "assign": [[1, "phi1"]], "coeff": "1"}]"#;
        assert!(ls_elt_from_json(text, &ls).is_err());
        // unknown label
        let text = r#"[{"sigma": "(1 2)", "assign": [[1, "phiX"]], "coeff": "1"}]"#;
        assert!(ls_elt_from_json(text, &ls).is_err());
    }

    #[test]
    fn empty_basis_is_a_parse_error() {
        let text = r#"{"name": "empty", "d": "0", "basis": [], "unit": []}"#;
        assert!(matches!(frobenius_data_from_json(text), Err(Error::Parse(_))));
    }
}
