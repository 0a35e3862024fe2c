//! Rank-3 integral lattices with the distinguished basis (h, A, B).
//!
//! Classes are stored in the coordinate order (z, x, y), meaning the class
//! `z·h + x·A + y·B`. The polarization `h` is always basis vector 0.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dec::{self, Dec};
use crate::error::{Error, Result};

pub const BASIS_LABELS: [&str; 3] = ["h", "A", "B"];

/// An integer class `z·h + x·A + y·B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coords: [BigInt; 3],
}

impl DivisorClass {
    pub fn new(z: impl Into<BigInt>, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self {
            coords: [z.into(), x.into(), y.into()],
        }
    }

    pub fn from_coords(coords: [BigInt; 3]) -> Self {
        Self { coords }
    }

    pub fn zero() -> Self {
        Self::new(0, 0, 0)
    }

    /// The polarization `h`.
    pub fn h() -> Self {
        Self::new(1, 0, 0)
    }

    /// The basis class `A`.
    pub fn a() -> Self {
        Self::new(0, 1, 0)
    }

    /// The basis class `B`.
    pub fn b() -> Self {
        Self::new(0, 0, 1)
    }

    pub fn coords(&self) -> &[BigInt; 3] {
        &self.coords
    }

    pub fn z(&self) -> &BigInt {
        &self.coords[0]
    }

    pub fn x(&self) -> &BigInt {
        &self.coords[1]
    }

    pub fn y(&self) -> &BigInt {
        &self.coords[2]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// True iff the gcd of the coordinates is 1.
    pub fn is_primitive(&self) -> bool {
        let g = self.coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        g.is_one()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::from_coords([&self.coords[0] * k, &self.coords[1] * k, &self.coords[2] * k])
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, label) in self.coords.iter().zip(BASIS_LABELS) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (wrote, c.is_negative()) {
                (false, false) => {}
                (false, true) => write!(f, "-")?,
                (true, _) => write!(f, " {sign} ")?,
            }
            if mag.is_one() {
                write!(f, "{label}")?;
            } else {
                write!(f, "{mag}{label}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass::from_coords([
            &self.coords[0] + &rhs.coords[0],
            &self.coords[1] + &rhs.coords[1],
            &self.coords[2] + &rhs.coords[2],
        ])
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        DivisorClass::from_coords([
            &self.coords[0] - &rhs.coords[0],
            &self.coords[1] - &rhs.coords[1],
            &self.coords[2] - &rhs.coords[2],
        ])
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::from_coords([-&self.coords[0], -&self.coords[1], -&self.coords[2]])
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let [z, x, y] = self.coords.clone();
        [Dec(z), Dec(x), Dec(y)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [z, x, y] = <[Dec; 3]>::deserialize(d)?;
        Ok(Self::from_coords([z.0, x.0, y.0]))
    }
}

/// Counts of positive, negative and zero directions of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct InertiaSignature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl InertiaSignature {
    pub const HYPERBOLIC: Self = Self {
        positive: 1,
        negative: 2,
        zero: 0,
    };

    pub fn is_hyperbolic(&self) -> bool {
        *self == Self::HYPERBOLIC
    }
}

impl fmt::Display for InertiaSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.positive, self.negative, self.zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct K3Params {
    pub a: BigInt,
    pub u: BigInt,
}

/// A symmetric integral pairing on `Z h ⊕ Z A ⊕ Z B`. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GramLattice {
    gram: [[BigInt; 3]; 3],
    params: Option<K3Params>,
}

/// Gram matrix of the K3 lattice: rows (2a, 3a, 3a), (3a, 4(a−1), u), (3a, u, 4(a−1)).
fn k3_gram(a: &BigInt, u: &BigInt) -> [[BigInt; 3]; 3] {
    let two_a: BigInt = a * 2;
    let three_a: BigInt = a * 3;
    let diag: BigInt = (a - 1) * 4;
    [
        [two_a, three_a.clone(), three_a.clone()],
        [three_a.clone(), diag.clone(), u.clone()],
        [three_a, u.clone(), diag],
    ]
}

impl GramLattice {
    pub fn new(gram: [[BigInt; 3]; 3]) -> Result<Self> {
        let symmetric = (0..3).all(|i| (0..i).all(|j| gram[i][j] == gram[j][i]));
        if !symmetric {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { gram, params: None })
    }

    pub fn from_i64(gram: [[i64; 3]; 3]) -> Result<Self> {
        Self::new(gram.map(|row| row.map(BigInt::from)))
    }

    /// The K3 lattice `M(a, u)` with `h² = 2a`, `A² = B² = 4(a−1)`, `A·B = u`.
    pub fn k3(a: impl Into<BigInt>, u: impl Into<BigInt>) -> Result<Self> {
        let (a, u) = (a.into(), u.into());
        if a < BigInt::from(2) {
            return Err(Error::ParameterDomain(format!("a = {a}, need a >= 2")));
        }
        Ok(Self {
            gram: k3_gram(&a, &u),
            params: Some(K3Params { a, u }),
        })
    }

    pub fn gram(&self) -> &[[BigInt; 3]; 3] {
        &self.gram
    }

    pub fn params(&self) -> Option<&K3Params> {
        self.params.as_ref()
    }

    pub fn basis_labels(&self) -> [&'static str; 3] {
        BASIS_LABELS
    }

    /// `G·d`: the pairings of `d` with h, A, B.
    pub fn pairing_row(&self, d: &DivisorClass) -> [BigInt; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(BigInt::zero(), |acc, j| acc + &self.gram[i][j] * &d.coords[j])
        })
    }

    pub fn pairing(&self, d: &DivisorClass, e: &DivisorClass) -> BigInt {
        self.pairing_row(e)
            .iter()
            .zip(d.coords.iter())
            .fold(BigInt::zero(), |acc, (g, c)| acc + g * c)
    }

    pub fn self_intersection(&self, d: &DivisorClass) -> BigInt {
        self.pairing(d, d)
    }

    /// `d·h`.
    pub fn degree(&self, d: &DivisorClass) -> BigInt {
        (0..3).fold(BigInt::zero(), |acc, j| acc + &self.gram[0][j] * &d.coords[j])
    }

    pub fn h_squared(&self) -> &BigInt {
        &self.gram[0][0]
    }

    pub fn is_even(&self) -> bool {
        (0..3).all(|i| self.gram[i][i].is_even())
    }

    pub fn determinant(&self) -> BigInt {
        let g = &self.gram;
        &g[0][0] * (&g[1][1] * &g[2][2] - &g[1][2] * &g[2][1])
            - &g[0][1] * (&g[1][0] * &g[2][2] - &g[1][2] * &g[2][0])
            + &g[0][2] * (&g[1][0] * &g[2][1] - &g[1][1] * &g[2][0])
    }

    /// Exact signature by congruence diagonalization over the rationals.
    pub fn inertia(&self) -> InertiaSignature {
        let rows = self
            .gram
            .iter()
            .map(|row| row.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        inertia_of(rows)
    }

    /// Picard–Lefschetz reflection `d ↦ d + (d·root)·root`.
    pub fn reflect(&self, d: &DivisorClass, root: &DivisorClass) -> Result<DivisorClass> {
        let sq = self.self_intersection(root);
        if sq != BigInt::from(-2) {
            return Err(Error::NotARoot(sq));
        }
        Ok(d + &root.scale(&self.pairing(d, root)))
    }
}

/// Signature of a symmetric rational matrix.
///
/// Nonzero diagonal pivots are eliminated one at a time. When the remaining
/// block has zero diagonal but a nonzero off-diagonal entry `b`, the 2×2 block
/// `[[0, b], [b, 0]]` contributes (1, 1) and is split off by its Schur complement.
pub fn inertia_of(mut m: Vec<Vec<BigRational>>) -> InertiaSignature {
    let mut sig = InertiaSignature {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    while !m.is_empty() {
        let n = m.len();
        if let Some(p) = (0..n).find(|&i| !m[i][i].is_zero()) {
            let pivot = m[p][p].clone();
            if pivot.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            let keep: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            m = keep
                .iter()
                .map(|&i| {
                    keep.iter()
                        .map(|&j| &m[i][j] - &m[i][p] * &m[p][j] / &pivot)
                        .collect()
                })
                .collect();
            continue;
        }
        let Some((p, q)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !m[i][j].is_zero())
        else {
            sig.zero += n;
            break;
        };
        sig.positive += 1;
        sig.negative += 1;
        // Inverse of [[0, b], [b, 0]] is [[0, 1/b], [1/b, 0]].
        let inv_b = m[p][q].recip();
        let keep: Vec<usize> = (0..n).filter(|&i| i != p && i != q).collect();
        m = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| {
                        let cross = &m[i][p] * &m[q][j] + &m[i][q] * &m[p][j];
                        &m[i][j] - cross * &inv_b
                    })
                    .collect()
            })
            .collect();
    }
    sig
}

#[derive(Serialize, Deserialize)]
struct GramLatticeRepr {
    #[serde(with = "dec::opt")]
    a: Option<BigInt>,
    #[serde(with = "dec::opt")]
    u: Option<BigInt>,
    gram: [[Dec; 3]; 3],
}

impl Serialize for GramLattice {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GramLatticeRepr {
            a: self.params.as_ref().map(|p| p.a.clone()),
            u: self.params.as_ref().map(|p| p.u.clone()),
            gram: self.gram.clone().map(|row| row.map(Dec)),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GramLattice {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = GramLatticeRepr::deserialize(d)?;
        let gram = repr.gram.map(|row| row.map(|v| v.0));
        match (repr.a, repr.u) {
            (Some(a), Some(u)) => {
                let lattice = GramLattice::k3(a, u).map_err(D::Error::custom)?;
                if lattice.gram != gram {
                    return Err(D::Error::custom(Error::Malformed(
                        "gram does not match M(a, u)".into(),
                    )));
                }
                Ok(lattice)
            }
            (None, None) => GramLattice::new(gram).map_err(D::Error::custom),
            _ => Err(D::Error::custom(Error::Malformed(
                "a and u must be given together".into(),
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cofactor_det(g: [[i64; 3]; 3]) -> i64 {
        g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1])
            - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0])
            + g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0])
    }

    #[test]
    fn k3_gram_for_a2_u6() {
        let l = GramLattice::k3(2, 6).unwrap();
        assert_eq!(
            *l.gram(),
            [[4, 6, 6], [6, 4, 6], [6, 6, 4]].map(|r| r.map(BigInt::from))
        );
        assert_eq!(cofactor_det([[4, 6, 6], [6, 4, 6], [6, 6, 4]]), 64);
        assert_eq!(l.determinant(), BigInt::from(64));
        assert_eq!(l.inertia(), InertiaSignature::HYPERBOLIC);
    }

    #[test]
    fn rejects_a_below_two() {
        assert!(matches!(GramLattice::k3(1, 0), Err(Error::ParameterDomain(_))));
    }

    #[test]
    fn rejects_asymmetric_gram() {
        assert_eq!(
            GramLattice::from_i64([[1, 2, 0], [0, 1, 0], [0, 0, 1]]),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn basic_pairings() {
        for (a, u) in [(2, 6), (3, 11), (7, 30)] {
            let l = GramLattice::k3(a, u).unwrap();
            let h = DivisorClass::h();
            let (ca, cb) = (DivisorClass::a(), DivisorClass::b());
            assert_eq!(l.pairing(&h, &h), BigInt::from(2 * a));
            assert_eq!(l.pairing(&ca, &cb), BigInt::from(u));
            assert_eq!(l.pairing(&ca, &DivisorClass::zero()), BigInt::zero());
            assert_eq!(l.self_intersection(&ca), BigInt::from(4 * (a - 1)));
            assert_eq!(l.degree(&ca), BigInt::from(3 * a));
            let dual = &h.scale(&3.into()) - &ca;
            assert_eq!(l.self_intersection(&dual), BigInt::from(4 * (a - 1)));
            assert_eq!(l.degree(&dual), BigInt::from(3 * a));
            let zero = DivisorClass::zero();
            assert!(l.self_intersection(&zero).is_zero() && l.degree(&zero).is_zero());
            // deg(zh + xA + yB) = 3ax + 3ay + 2az
            let e = DivisorClass::new(-4, 7, 5);
            assert_eq!(l.degree(&e), BigInt::from(3 * a * 7 + 3 * a * 5 + 2 * a * -4));
        }
    }

    #[test]
    fn inertia_edge_cases() {
        let id = GramLattice::from_i64([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert_eq!(
            id.inertia(),
            InertiaSignature { positive: 3, negative: 0, zero: 0 }
        );
        let hyperbolic = GramLattice::from_i64([[0, 1, 0], [1, 0, 0], [0, 0, -2]]).unwrap();
        assert_eq!(hyperbolic.inertia(), InertiaSignature::HYPERBOLIC);
        let degenerate = GramLattice::from_i64([[0, 0, 0], [0, 0, 3], [0, 3, 0]]).unwrap();
        assert_eq!(
            degenerate.inertia(),
            InertiaSignature { positive: 1, negative: 1, zero: 1 }
        );
        let zero = GramLattice::from_i64([[0; 3]; 3]).unwrap();
        assert_eq!(zero.inertia().zero, 3);
        assert_eq!(GramLattice::k3(3, 9).unwrap().inertia(), InertiaSignature::HYPERBOLIC);
    }

    #[test]
    fn evenness_and_primitivity() {
        assert!(GramLattice::k3(5, 22).unwrap().is_even());
        assert!(!GramLattice::from_i64([[1, 0, 0], [0, 2, 0], [0, 0, 2]]).unwrap().is_even());
        assert!(DivisorClass::h().is_primitive());
        assert!(!DivisorClass::new(0, 2, 0).is_primitive());
        assert!(!DivisorClass::zero().is_primitive());
        assert!(DivisorClass::new(6, -10, 15).is_primitive());
    }

    #[test]
    fn reflection_basics() {
        let l = GramLattice::k3(3, 9).unwrap();
        // u = 4a − 3 makes A − B a root
        let root = &DivisorClass::a() - &DivisorClass::b();
        assert_eq!(l.self_intersection(&root), BigInt::from(-2));
        assert_eq!(l.reflect(&root, &root).unwrap(), -&root);
        let h = DivisorClass::h();
        assert!(l.pairing(&h, &root).is_zero());
        assert_eq!(l.reflect(&h, &root).unwrap(), h);
        assert_eq!(
            l.reflect(&h, &DivisorClass::a()),
            Err(Error::NotARoot(BigInt::from(8)))
        );
    }

    #[test]
    fn display_classes() {
        assert_eq!(DivisorClass::new(3, -1, 0).to_string(), "3h - A");
        assert_eq!(DivisorClass::new(-1, 1, 1).to_string(), "-h + A + B");
        assert_eq!(DivisorClass::zero().to_string(), "0");
    }

    #[test]
    fn json_shape() {
        let l = GramLattice::k3(2, 6).unwrap();
        let v = serde_json::to_value(&l).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"a": "2", "u": "6",
                "gram": [["4","6","6"],["6","4","6"],["6","6","4"]]})
        );
        let back: GramLattice = serde_json::from_value(v).unwrap();
        assert_eq!(back, l);
        let bad = serde_json::json!({"a": "2", "u": "7",
            "gram": [["4","6","6"],["6","4","6"],["6","6","4"]]});
        assert!(serde_json::from_value::<GramLattice>(bad).is_err());
    }

    fn class() -> impl Strategy<Value = DivisorClass> {
        (-10i64..=10, -10i64..=10, -10i64..=10).prop_map(|(z, x, y)| DivisorClass::new(z, x, y))
    }

    proptest! {
        #[test]
        fn pairing_is_symmetric_and_bilinear(
            a in 2i64..20, du in -3i64..12,
            d in class(), e in class(), f in class(), k in -10i64..=10,
        ) {
            let l = GramLattice::k3(a, 4 * a - 3 + du).unwrap();
            prop_assert_eq!(l.pairing(&d, &e), l.pairing(&e, &d));
            prop_assert_eq!(l.pairing(&(&d + &f), &e), l.pairing(&d, &e) + l.pairing(&f, &e));
            prop_assert_eq!(l.pairing(&d.scale(&k.into()), &e), l.pairing(&d, &e) * k);
            prop_assert!(l.self_intersection(&d).is_even());
            prop_assert!((l.degree(&d) % a).is_zero());
        }

        #[test]
        fn class_json_round_trip(d in class()) {
            let text = serde_json::to_string(&d).unwrap();
            prop_assert_eq!(serde_json::from_str::<DivisorClass>(&text).unwrap(), d);
        }
    }
}
