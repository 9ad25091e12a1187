//! Bundled instances: the torus-with-involution orbifold algebra and
//! generated centers of small group algebras.

use crate::error::{Error, DEFAULT_CAP};
use crate::frobenius::{FrobeniusAlgebra, FrobeniusData};
use crate::groups::FiniteGroup;
use crate::io::frobenius_data_from_json;
use crate::wreathpt::center_algebra;

/// The 24-dimensional orbifold cohomology of a complex 2-torus modulo the
/// sign involution: `phi1` the unit, `phi2` the top class, `phi3..phi8` the
/// middle classes pairing in consecutive couples, and `phi9..phi24` the
/// sixteen self-paired twisted-sector classes of degree 2.
pub const TORUS_Z2_JSON: &str = include_str!("../fixtures/torus_z2.json");

pub fn torus_z2_data() -> Result<FrobeniusData, Error> {
    frobenius_data_from_json(TORUS_Z2_JSON)
}

pub fn torus_z2() -> Result<FrobeniusAlgebra, Error> {
    torus_z2_data()?.build()
}

/// Center of `Q[G]` for a group given in spec syntax, e.g. `"sym:3"`.
pub fn center_algebra_of_spec(spec: &str) -> Result<FrobeniusAlgebra, Error> {
    let group = FiniteGroup::parse_spec(spec)?;
    center_algebra(&group, DEFAULT_CAP)
}
