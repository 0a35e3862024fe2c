//! Chern-class bounds for Ulrich bundles and the rank-2 classification by `c₂ = u`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::dec;
use crate::error::{Error, Result};
use crate::k3::ChernData;

fn require_a(a: &BigInt) -> Result<()> {
    if a < &BigInt::from(2) {
        return Err(Error::ParameterDomain(format!("a = {a}, need a >= 2")));
    }
    Ok(())
}

/// Admissible range of `c₁²` for a rank-`r` Ulrich bundle on a degree-`2a` K3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(with = "dec")]
    pub a: BigInt,
    #[serde(with = "dec")]
    pub r: BigInt,
    /// Bogomolov: `4(a−1)r²`.
    #[serde(with = "dec")]
    pub lower: BigInt,
    /// Hodge index: `(9/2)ar²`.
    #[serde(with = "rational")]
    pub upper: BigRational,
    pub upper_is_integer: bool,
    /// For simple bundles: `(4a−2)r² − 2`.
    #[serde(with = "dec")]
    pub simple_lower: BigInt,
    #[serde(with = "dec::vec")]
    pub excluded: Vec<BigInt>,
    /// `c₁²` is always even.
    pub even_only: bool,
    pub equality_condition: String,
}

mod rational {
    use num_rational::BigRational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub(super) fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub(super) fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(|_| D::Error::custom(format!("not a rational: {text:?}")))
    }
}

impl BoundReport {
    /// Even values in `[lower, ⌊upper⌋]` minus the excluded ones.
    pub fn admissible(&self) -> Vec<BigInt> {
        let top = self.upper.floor().to_integer();
        let excluded = &self.excluded;
        let mut v = self.lower.clone();
        if v.is_odd() {
            v += 1;
        }
        let mut out = Vec::new();
        while v <= top {
            if !excluded.contains(&v) {
                out.push(v.clone());
            }
            v += 2;
        }
        out
    }
}

pub fn chern_bounds(a: &BigInt, r: &BigInt) -> Result<BoundReport> {
    require_a(a)?;
    if r < &BigInt::from(1) {
        return Err(Error::ParameterDomain(format!("r = {r}, need r >= 1")));
    }
    let r2 = r * r;
    let upper = BigRational::new(a * &r2 * 9, 2.into());
    let mut excluded = Vec::new();
    if r.is_even() {
        // r even makes (9/2)ar² an even integer.
        excluded.push(upper.to_integer() - 2);
    }
    Ok(BoundReport {
        a: a.clone(),
        r: r.clone(),
        lower: (a - 1) * &r2 * 4,
        upper_is_integer: upper.is_integer(),
        upper,
        simple_lower: (a * 4 - 2) * &r2 - 2,
        excluded,
        even_only: true,
        equality_condition: "c1^2 = (9/2)ar^2 iff c1 = 3rh/2".into(),
    })
}

/// `c₁² ≥ 4(a−1)r²`.
pub fn bogomolov_check(c: &ChernData, a: &BigInt) -> bool {
    c.c1sq >= (a - 1) * &c.r * &c.r * 4
}

/// `c₁²·h² ≤ (c₁·h)²` with `h² = 2a`.
pub fn hodge_index_check(c: &ChernData, a: &BigInt) -> bool {
    &c.c1sq * a * 2 <= &c.c1h * &c.c1h
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Impossible,
    DecomposableOnly,
    StrictlySemistableGeneral,
    StableExists,
    Special,
    Excluded,
}

impl Classification {
    pub const ALL: [Classification; 6] = [
        Classification::Impossible,
        Classification::DecomposableOnly,
        Classification::StrictlySemistableGeneral,
        Classification::StableExists,
        Classification::Special,
        Classification::Excluded,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Impossible => "IMPOSSIBLE",
            Classification::DecomposableOnly => "DECOMPOSABLE_ONLY",
            Classification::StrictlySemistableGeneral => "STRICTLY_SEMISTABLE_GENERAL",
            Classification::StableExists => "STABLE_EXISTS",
            Classification::Special => "SPECIAL",
            Classification::Excluded => "EXCLUDED",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliDimensions {
    /// `4c₂ − c₁² − 6 = 2u − 8a + 2`.
    #[serde(with = "dec")]
    pub moduli_dim: BigInt,
    /// Strictly semistable stratum: `u − 4a + 1`.
    #[serde(with = "dec")]
    pub strict_ss_stratum_dim: BigInt,
    /// `h¹(O(A − B)) = u − 4a + 2`.
    #[serde(with = "dec")]
    pub ext_dim: BigInt,
    /// Set when `u < 4a − 1`, where these formulas say nothing.
    pub vacuous: bool,
}

pub fn moduli_dimensions(a: &BigInt, u: &BigInt) -> ModuliDimensions {
    ModuliDimensions {
        moduli_dim: u * 2 - a * 8 + 2,
        strict_ss_stratum_dim: u - a * 4 + 1,
        ext_dim: u - a * 4 + 2,
        vacuous: u < &(a * 4 - 1),
    }
}

/// One row of the rank-2 table: the Ulrich Chern data with `c₂ = u`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rank2Row {
    #[serde(with = "dec")]
    pub a: BigInt,
    #[serde(with = "dec")]
    pub u: BigInt,
    #[serde(with = "dec")]
    pub c1sq: BigInt,
    #[serde(with = "dec")]
    pub c2: BigInt,
    #[serde(with = "dec")]
    pub ext_dim: BigInt,
    #[serde(with = "dec")]
    pub moduli_dim: BigInt,
    #[serde(with = "dec")]
    pub strict_ss_stratum_dim: BigInt,
    pub moduli_vacuous: bool,
    pub classification: Classification,
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
}

impl Rank2Row {
    pub fn chern_data(&self) -> ChernData {
        ChernData {
            r: 2.into(),
            c1h: &self.a * 6,
            c1sq: self.c1sq.clone(),
            c2: self.c2.clone(),
        }
    }

    pub fn certificate_ref(&self) -> String {
        if self.certificate.is_some() {
            format!("k3-a{}-u{}", self.a, self.u)
        } else {
            String::new()
        }
    }
}

pub fn classify_u(a: &BigInt, u: &BigInt) -> Result<Rank2Row> {
    require_a(a)?;
    let c1sq: BigInt = a * 8 - 8 + u * 2;
    let dims = moduli_dimensions(a, u);
    let four_a = a * 4;
    let five_a = a * 5;
    let offset_low = u - &four_a;
    let (classification, reason) = if u < &(&four_a - 3) {
        let reason = if c1sq < (a - 1) * 16 {
            format!("c1^2 = {c1sq} is below the Bogomolov bound 16(a-1)")
        } else {
            format!("c1^2 = {c1sq} is below the simple-bundle bound 16a-10, so E splits")
        };
        (Classification::Impossible, reason)
    } else if u > &(&five_a + 4) {
        (
            Classification::Impossible,
            format!("c1^2 = {c1sq} exceeds the Hodge index bound 18a"),
        )
    } else if offset_low == BigInt::from(-3) {
        (
            Classification::Impossible,
            "A.B = 4a-3 gives (A-B)^2 = -2 with (A-B)h = 0, contradicting ampleness".into(),
        )
    } else if offset_low == BigInt::from(-2) {
        (
            Classification::DecomposableOnly,
            "h1(O(A-B)) = 0, so E = O(A) + O(B)".into(),
        )
    } else if offset_low == BigInt::from(-1) {
        (
            Classification::StrictlySemistableGeneral,
            "moduli space is finite; some point is strictly semistable".into(),
        )
    } else if u <= &(&five_a + 2) {
        (
            Classification::StableExists,
            "moduli space smooth of dimension 2u-8a+2 > strictly semistable stratum".into(),
        )
    } else if u == &(&five_a + 3) {
        (
            Classification::Excluded,
            "c1^2 = 18a-2 is excluded for even rank".into(),
        )
    } else {
        (
            Classification::Special,
            "c1 = 3h; formula-backed, realized on Picard rank 1 or 2".into(),
        )
    };
    Ok(Rank2Row {
        a: a.clone(),
        u: u.clone(),
        c1sq,
        c2: u.clone(),
        ext_dim: dims.ext_dim,
        moduli_dim: dims.moduli_dim,
        strict_ss_stratum_dim: dims.strict_ss_stratum_dim,
        moduli_vacuous: dims.vacuous,
        classification,
        reason,
        certificate: None,
    })
}

/// `c₁²` values of rank-2 extensions built from the Ulrich classes of `M(a, u)`:
/// `18a`, `8a−8+2u`, `26a−8−2u`.
pub fn triple_c1sq(a: &BigInt, u: &BigInt) -> [BigInt; 3] {
    [a * 18, a * 8 - 8 + u * 2, a * 26 - 8 - u * 2]
}

/// `⌊9a/2⌋`, the top of the range where the triple applies.
pub fn triple_upper(a: &BigInt) -> BigInt {
    (a * 9u32).div_floor(&BigInt::from(2))
}

impl ModuliDimensions {
    pub fn stable_exceeds_stratum(&self) -> bool {
        self.moduli_dim > self.strict_ss_stratum_dim
    }
}
