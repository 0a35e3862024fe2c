//! Exhaustive enumeration of classes with prescribed degree and square.
//!
//! On a hyperbolic lattice with `h² > 0` the orthogonal complement `h^⊥` is
//! negative definite, so `{E : E·h = d, E² = s}` is a finite set of lattice
//! points on an ellipse. We eliminate `z` from `E·h = d` (keeping the
//! divisibility condition as a congruence on `(x, y)`), complete the square on
//! the restricted form, and scan the resulting box.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::certificate::{Certificate, Verdict};
use crate::dec::{self, Dec};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, GramLattice};

/// Closed integer interval; `lo > hi` means empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigInt,
    pub hi: BigInt,
}

impl Interval {
    pub fn new(lo: BigInt, hi: BigInt) -> Self {
        Self { lo, hi }
    }

    pub fn symmetric(radius: BigInt) -> Self {
        Self::new(-&radius, radius)
    }

    pub fn empty() -> Self {
        Self::new(BigInt::zero(), -BigInt::one())
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, v: &BigInt) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    /// Largest absolute value in the interval (0 when empty).
    pub fn magnitude(&self) -> BigInt {
        if self.is_empty() {
            BigInt::zero()
        } else {
            self.lo.abs().max(self.hi.abs())
        }
    }

    fn iter(&self) -> impl Iterator<Item = BigInt> + '_ {
        let mut next = self.lo.clone();
        std::iter::from_fn(move || {
            if next > self.hi {
                return None;
            }
            let out = next.clone();
            next += 1;
            Some(out)
        })
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [Dec(self.lo.clone()), Dec(self.hi.clone())].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[Dec; 2]>::deserialize(d)?;
        Ok(Self::new(lo.0, hi.0))
    }
}

/// Result of an enumeration query.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSet {
    #[serde(rename = "d", with = "dec")]
    pub degree: BigInt,
    #[serde(rename = "s", with = "dec")]
    pub norm: BigInt,
    /// Sorted lexicographically by (z, x, y).
    pub witnesses: Vec<DivisorClass>,
    /// Per-coordinate search box in (z, x, y) order.
    #[serde(rename = "box")]
    pub search_box: [Interval; 3],
    pub exhaustive: bool,
    /// The inequality that confines every solution to `search_box`.
    pub bound: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub empty_reason: Option<String>,
    /// Degrees were measured against this class instead of `h`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<DivisorClass>,
}

impl WitnessSet {
    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn contains(&self, class: &DivisorClass) -> bool {
        self.witnesses.binary_search(class).is_ok()
    }

    /// The radius of the smallest cube centred at 0 containing the search box.
    pub fn box_radius(&self) -> BigInt {
        self.search_box
            .iter()
            .map(Interval::magnitude)
            .max()
            .unwrap_or_default()
    }

    fn empty(degree: &BigInt, norm: &BigInt, bound: String, reason: String) -> Self {
        Self {
            degree: degree.clone(),
            norm: norm.clone(),
            witnesses: Vec::new(),
            search_box: [Interval::empty(), Interval::empty(), Interval::empty()],
            exhaustive: true,
            bound,
            empty_reason: Some(reason),
            polarization: None,
        }
    }
}

/// A `(degree, square)` query against a lattice.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationQuery<'a> {
    pub lattice: &'a GramLattice,
    pub degree: &'a BigInt,
    pub norm: &'a BigInt,
}

impl EnumerationQuery<'_> {
    pub fn run(&self) -> Result<WitnessSet> {
        enumerate(self.lattice, self.degree, self.norm)
    }
}

/// `coeff_x·x + coeff_y·y ≡ rhs (mod modulus)`, the condition for `z` to be integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub coeff_x: BigInt,
    pub coeff_y: BigInt,
    pub rhs: BigInt,
    pub modulus: BigInt,
}

impl Congruence {
    pub fn holds(&self, x: &BigInt, y: &BigInt) -> bool {
        (&self.coeff_x * x + &self.coeff_y * y - &self.rhs).is_multiple_of(&self.modulus)
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x + {}y ≡ {} (mod {})",
            self.coeff_x, self.coeff_y, self.rhs, self.modulus
        )
    }
}

/// `E²` on the slice `E·h = d`, written in the free coordinates `(x, y)`:
/// `E² = xx·x² + xy·x·y + yy·y² + constant`, with `z = z0 + zx·x + zy·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedForm {
    pub xx: BigRational,
    pub xy: BigRational,
    pub yy: BigRational,
    pub constant: BigRational,
    pub z0: BigRational,
    pub zx: BigRational,
    pub zy: BigRational,
    pub congruence: Congruence,
}

impl RestrictedForm {
    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigRational {
        let (x, y) = (
            BigRational::from_integer(x.clone()),
            BigRational::from_integer(y.clone()),
        );
        &self.xx * &x * &x + &self.xy * &x * &y + &self.yy * &y * &y + &self.constant
    }

    /// The integral `z` completing `(x, y)` to a class on the slice, if any.
    pub fn z_for(&self, x: &BigInt, y: &BigInt) -> Option<BigInt> {
        if !self.congruence.holds(x, y) {
            return None;
        }
        let z = &self.z0
            + &self.zx * BigRational::from_integer(x.clone())
            + &self.zy * BigRational::from_integer(y.clone());
        debug_assert!(z.is_integer());
        Some(z.to_integer())
    }

    /// `4·xx·yy − xy²`; positive together with `xx < 0` means negative definite.
    pub fn discriminant(&self) -> BigRational {
        BigRational::from_integer(4.into()) * &self.xx * &self.yy - &self.xy * &self.xy
    }

    pub fn is_negative_definite(&self) -> bool {
        self.xx.is_negative() && self.discriminant().is_positive()
    }
}

impl fmt::Display for RestrictedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({})x^2 + ({})xy + ({})y^2 + ({})  where {}",
            self.xx, self.xy, self.yy, self.constant, self.congruence
        )
    }
}

/// The slice `{E·h = d}` either carries a conic or has no integral points at all.
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum DegreeSlice {
    Conic(RestrictedForm),
    Empty { reason: String },
}

fn rat(v: &BigInt) -> BigRational {
    BigRational::from_integer(v.clone())
}

/// Eliminate `z` from `E·h = d` and express `E²` in `(x, y)`.
pub fn restricted_form_coefficients(lattice: &GramLattice, d: &BigInt) -> Result<DegreeSlice> {
    let g = lattice.gram();
    let hh = &g[0][0];
    if hh.is_zero() {
        return Err(Error::IllPosedQuery("h² = 0, cannot solve E·h = d for z".into()));
    }
    let content = g[0][0].gcd(&g[0][1]).gcd(&g[0][2]);
    if !d.is_multiple_of(&content) {
        return Ok(DegreeSlice::Empty {
            reason: format!("every degree is a multiple of {content}, and {d} is not"),
        });
    }
    let modulus = (hh / &content).abs();
    let congruence = Congruence {
        coeff_x: (&g[0][1] / &content).mod_floor(&modulus),
        coeff_y: (&g[0][2] / &content).mod_floor(&modulus),
        rhs: (d / &content).mod_floor(&modulus),
        modulus,
    };
    let hh_r = rat(hh);
    let two = BigRational::from_integer(2.into());
    Ok(DegreeSlice::Conic(RestrictedForm {
        xx: rat(&g[1][1]) - rat(&g[0][1]) * rat(&g[0][1]) / &hh_r,
        xy: two * (rat(&g[1][2]) - rat(&g[0][1]) * rat(&g[0][2]) / &hh_r),
        yy: rat(&g[2][2]) - rat(&g[0][2]) * rat(&g[0][2]) / &hh_r,
        constant: rat(d) * rat(d) / &hh_r,
        z0: rat(d) / &hh_r,
        zx: -rat(&g[0][1]) / &hh_r,
        zy: -rat(&g[0][2]) / &hh_r,
        congruence,
    }))
}

fn floor_sqrt(r: &BigRational) -> BigInt {
    if r.is_negative() {
        return BigInt::zero();
    }
    // ⌊√r⌋ = ⌊√⌊r⌋⌋ for r ≥ 0.
    r.floor().to_integer().sqrt()
}

fn require_well_posed(lattice: &GramLattice, polarization: &DivisorClass) -> Result<BigInt> {
    let sig = lattice.inertia();
    if !sig.is_hyperbolic() {
        return Err(Error::IllPosedQuery(format!(
            "signature {sig} is not (1, 2, 0); the solution set may be infinite"
        )));
    }
    let p2 = lattice.self_intersection(polarization);
    if !p2.is_positive() {
        return Err(Error::IllPosedQuery(format!(
            "polarization square {p2} is not positive"
        )));
    }
    Ok(p2)
}

/// All classes `E` with `E·h = d` and `E² = s`.
pub fn enumerate(lattice: &GramLattice, d: &BigInt, s: &BigInt) -> Result<WitnessSet> {
    require_well_posed(lattice, &DivisorClass::h())?;
    let form = match restricted_form_coefficients(lattice, d)? {
        DegreeSlice::Empty { reason } => {
            return Ok(WitnessSet::empty(d, s, "slice has no integral points".into(), reason));
        }
        DegreeSlice::Conic(form) => form,
    };
    if !form.is_negative_definite() {
        return Err(Error::IllPosedQuery(
            "restricted form on h^⊥ is not negative definite".into(),
        ));
    }
    // Positive definite N = −(quadratic part) = A x² + B xy + C y², and N(x, y) = T.
    let (qa, qb, qc) = (-&form.xx, -&form.xy, -&form.yy);
    let target = &form.constant - rat(s);
    let disc = BigRational::from_integer(4.into()) * &qa * &qc - &qb * &qb;
    let bound = format!(
        "N(x,y) = ({qa})x^2 + ({qb})xy + ({qc})y^2 = d^2/h^2 - s = {target}; \
         4AC - B^2 = {disc} > 0, so x^2 <= 4C*T/(4AC-B^2) and y^2 <= 4A*T/(4AC-B^2)"
    );
    if target.is_negative() {
        let reason = format!("s = {s} exceeds the maximum {} of E^2 on the slice", form.constant);
        return Ok(WitnessSet::empty(d, s, bound, reason));
    }
    let four = BigRational::from_integer(4.into());
    let x_max = floor_sqrt(&(&four * &qc * &target / &disc));
    let y_max = floor_sqrt(&(&four * &qa * &target / &disc));
    let z_spread = form.zx.abs() * rat(&x_max) + form.zy.abs() * rat(&y_max);
    let z_box = Interval::new(
        (&form.z0 - &z_spread).ceil().to_integer(),
        (&form.z0 + &z_spread).floor().to_integer(),
    );
    let x_box = Interval::symmetric(x_max);
    let y_box = Interval::symmetric(y_max);

    let mut witnesses = Vec::new();
    for x in x_box.iter() {
        for y in y_box.iter() {
            let Some(z) = form.z_for(&x, &y) else {
                continue;
            };
            let e = DivisorClass::from_coords([z, x.clone(), y]);
            if &lattice.degree(&e) == d && &lattice.self_intersection(&e) == s {
                witnesses.push(e);
            }
        }
    }
    witnesses.sort();
    Ok(WitnessSet {
        degree: d.clone(),
        norm: s.clone(),
        witnesses,
        search_box: [z_box, x_box, y_box],
        exhaustive: true,
        bound,
        empty_reason: None,
        polarization: None,
    })
}

/// All classes `E` with `E·P = d` and `E² = s` for an arbitrary class `P`
/// with `P² > 0`.
///
/// Uses the positive definite majorant `H(E) = 2(E·P)²/P² − E²`, which takes
/// the constant value `2d²/P² − s` on the solution set; the coordinate bounds
/// are `E_i² ≤ T·(H⁻¹)_ii`.
pub fn enumerate_polarized(
    lattice: &GramLattice,
    polarization: &DivisorClass,
    d: &BigInt,
    s: &BigInt,
) -> Result<WitnessSet> {
    let p2 = require_well_posed(lattice, polarization)?;
    let w = lattice.pairing_row(polarization);
    let g = lattice.gram();
    let p2r = rat(&p2);
    let two = BigRational::from_integer(2.into());
    let h: [[BigRational; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| &two * rat(&w[i]) * rat(&w[j]) / &p2r - rat(&g[i][j]))
    });
    let target = &two * rat(d) * rat(d) / &p2r - rat(s);
    let bound = format!(
        "H(E) = 2(E.P)^2/P^2 - E^2 is positive definite and equals {target}; \
         E_i^2 <= T*(H^-1)_ii"
    );
    if target.is_negative() {
        let reason = format!("s = {s} exceeds the maximum d^2/P^2 of E^2 on the slice");
        let mut set = WitnessSet::empty(d, s, bound, reason);
        set.polarization = Some(polarization.clone());
        return Ok(set);
    }
    let det = det3(&h);
    let radii: [BigInt; 3] = std::array::from_fn(|i| {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let cofactor = &h[j][j] * &h[k][k] - &h[j][k] * &h[k][j];
        floor_sqrt(&(&target * cofactor / &det))
    });
    let search_box = radii.clone().map(Interval::symmetric);

    // Solve for the coordinate whose box is widest among those with w_j ≠ 0.
    let pivot = (0..3)
        .filter(|&j| !w[j].is_zero())
        .max_by(|&i, &j| radii[i].cmp(&radii[j]).then(j.cmp(&i)))
        .expect("P² > 0 forces G·P ≠ 0");
    let (f1, f2) = ((pivot + 1) % 3, (pivot + 2) % 3);
    let mut witnesses = Vec::new();
    for c1 in search_box[f1].iter() {
        for c2 in search_box[f2].iter() {
            let rest = d - &w[f1] * &c1 - &w[f2] * &c2;
            if !rest.is_multiple_of(&w[pivot]) {
                continue;
            }
            let cp = rest / &w[pivot];
            if !search_box[pivot].contains(&cp) {
                continue;
            }
            let mut coords = [BigInt::zero(), BigInt::zero(), BigInt::zero()];
            coords[pivot] = cp;
            coords[f1] = c1.clone();
            coords[f2] = c2;
            let e = DivisorClass::from_coords(coords);
            if &lattice.pairing(&e, polarization) == d && &lattice.self_intersection(&e) == s {
                witnesses.push(e);
            }
        }
    }
    witnesses.sort();
    Ok(WitnessSet {
        degree: d.clone(),
        norm: s.clone(),
        witnesses,
        search_box,
        exhaustive: true,
        bound,
        empty_reason: None,
        polarization: Some(polarization.clone()),
    })
}

fn det3(m: &[[BigRational; 3]; 3]) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1])
        - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

/// Naive scan of the cube `[−radius, radius]³`. Test oracle only.
pub fn brute_force_oracle(
    lattice: &GramLattice,
    d: &BigInt,
    s: &BigInt,
    box_radius: i64,
) -> Vec<DivisorClass> {
    let r = box_radius.max(0);
    let mut out = Vec::new();
    for z in -r..=r {
        for x in -r..=r {
            for y in -r..=r {
                let e = DivisorClass::new(z, x, y);
                if &lattice.degree(&e) == d && &lattice.self_intersection(&e) == s {
                    out.push(e);
                }
            }
        }
    }
    out.sort();
    out
}

/// `u² − 18u + 61`: discriminant governing the `E² = 0, E·h = 2` case at `a = 2`.
pub fn delta_degree_two(u: &BigInt) -> BigInt {
    u * u - u * 18 + 61
}

/// `4u² − 36au + 80a² − 12a − 32`: discriminant governing the roots orthogonal to `h`.
pub fn delta_roots(a: &BigInt, u: &BigInt) -> BigInt {
    u * u * 4 - a * u * 36 + a * a * 80 - a * 12 - 32
}

/// Discriminant of `Q(x, 1) = s` for the restricted form of the `(d, s)` query.
fn conic_discriminant_at_unit_y(lattice: &GramLattice, d: i64, s: i64) -> Result<BigRational> {
    match restricted_form_coefficients(lattice, &d.into())? {
        DegreeSlice::Conic(f) => {
            let c = &f.yy + &f.constant - rat(&s.into());
            Ok(&f.xy * &f.xy - BigRational::from_integer(4.into()) * &f.xx * c)
        }
        DegreeSlice::Empty { reason } => Err(Error::IllPosedQuery(reason)),
    }
}

fn negativity_check(
    name: &str,
    us: &[BigInt],
    f: impl Fn(&BigInt) -> BigInt,
) -> Certificate {
    let values: Vec<(BigInt, BigInt)> = us.iter().map(|u| (u.clone(), f(u))).collect();
    let offenders: Vec<_> = values.iter().filter(|(_, v)| !v.is_negative()).collect();
    let mut cert = Certificate::new(name, Verdict::from_bool(offenders.is_empty()));
    if let Some((u, v)) = values.iter().max_by(|l, r| l.1.cmp(&r.1).then(r.0.cmp(&l.0))) {
        cert = cert.int_param("max_value", v).int_param("argmax_u", u);
    }
    for (u, v) in offenders {
        cert = cert.witness(serde_json::json!({ "u": dec::value(u), "value": dec::value(v) }));
    }
    cert
}

/// Sign, symmetry and closed-form checks for both discriminants over `u_lo..=u_hi`.
pub fn discriminant_certificate(a: &BigInt, u_lo: &BigInt, u_hi: &BigInt) -> Result<Certificate> {
    if a < &BigInt::from(2) {
        return Err(Error::ParameterDomain(format!("a = {a}, need a >= 2")));
    }
    let mut us = Vec::new();
    let mut u = u_lo.clone();
    while &u <= u_hi {
        us.push(u.clone());
        u += 1;
    }

    let mut cert = Certificate::new("discriminants", Verdict::Pass)
        .int_param("a", a)
        .int_param("u_min", u_lo)
        .int_param("u_max", u_hi);

    cert = cert.subcheck(negativity_check("delta_a-negative", &us, |u| delta_roots(a, u)));
    let top: BigInt = a * 5 + 2;
    cert = cert.subcheck(
        Certificate::equality("delta_a(5a+2) = -4(a+4)", &(-(a + 4u32) * 4u32), &delta_roots(a, &top))
            .int_param("u", &top),
    );
    // Symmetry about u = 9a/2, checked in the doubled variable w = 2u.
    let f_doubled = |w: &BigInt| w * w - a * w * 18 + a * a * 80 - a * 12 - 32;
    let centre: BigInt = a * 9;
    let reach = us
        .iter()
        .map(|u| (u * 2u32 - &centre).abs())
        .max()
        .unwrap_or_default();
    let symmetric = num_iter_inclusive(&reach)
        .all(|t| f_doubled(&(&centre + &t)) == f_doubled(&(&centre - &t)));
    let doubled_agrees = us.iter().all(|u| f_doubled(&(u * 2)) == delta_roots(a, u));
    cert = cert.subcheck(
        Certificate::new(
            "delta_a-symmetric-about-9a/2",
            Verdict::from_bool(symmetric && doubled_agrees),
        )
        .int_param("doubled_centre", &centre)
        .int_param("reach", &reach),
    );
    let conic_agrees = us.iter().try_fold(true, |ok, u| -> Result<bool> {
        let lattice = GramLattice::k3(a.clone(), u.clone())?;
        Ok(ok && conic_discriminant_at_unit_y(&lattice, 0, -2)? == rat(&delta_roots(a, u)))
    })?;
    cert = cert.subcheck(Certificate::new(
        "delta_a-matches-restricted-form",
        Verdict::from_bool(conic_agrees),
    ));

    if a == &BigInt::from(2) {
        cert = cert.subcheck(negativity_check("delta-negative", &us, delta_degree_two));
        let twelve = BigInt::from(12);
        cert = cert.subcheck(
            Certificate::equality("delta(12) = -11", &BigInt::from(-11), &delta_degree_two(&twelve))
                .int_param("u", &twelve),
        );
        let nine = BigInt::from(9);
        let reach = us.iter().map(|u| (u - &nine).abs()).max().unwrap_or_default();
        let symmetric = num_iter_inclusive(&reach)
            .all(|t| delta_degree_two(&(&nine + &t)) == delta_degree_two(&(&nine - &t)));
        cert = cert.subcheck(
            Certificate::new("delta-symmetric-about-9", Verdict::from_bool(symmetric))
                .int_param("delta(9)", &delta_degree_two(&nine)),
        );
        let four = BigRational::from_integer(4.into());
        let conic_agrees = us.iter().try_fold(true, |ok, u| -> Result<bool> {
            let lattice = GramLattice::k3(2, u.clone())?;
            Ok(ok
                && conic_discriminant_at_unit_y(&lattice, 2, 0)?
                    == &four * rat(&delta_degree_two(u)))
        })?;
        cert = cert.subcheck(Certificate::new(
            "delta-matches-restricted-form",
            Verdict::from_bool(conic_agrees),
        ));
    }
    Ok(cert)
}

fn num_iter_inclusive(hi: &BigInt) -> impl Iterator<Item = BigInt> {
    Interval::new(BigInt::zero(), hi.clone()).iter().collect::<Vec<_>>().into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn restricted_form_degree_zero() {
        for a in 2..=9i64 {
            for u in [4 * a - 2, 4 * a + 1, 5 * a + 2] {
                let l = GramLattice::k3(a, u).unwrap();
                let DegreeSlice::Conic(f) = restricted_form_coefficients(&l, &big(0)).unwrap()
                else {
                    panic!("degree 0 slice is never empty");
                };
                assert_eq!(f.xx, q(-(a + 8), 2));
                assert_eq!(f.yy, q(-(a + 8), 2));
                assert_eq!(f.xy, q(-(9 * a - 2 * u), 1));
                assert!(f.constant.is_zero());
                // parity: 3(x + y) even
                assert_eq!(f.congruence.modulus, big(2));
                assert!(f.congruence.holds(&big(1), &big(1)));
                assert!(!f.congruence.holds(&big(1), &big(0)));
                assert_eq!(f.z_for(&big(1), &big(3)), Some(big(-6)));
            }
        }
    }

    #[test]
    fn restricted_form_degree_two_at_a2() {
        for u in 6..=12i64 {
            let l = GramLattice::k3(2, u).unwrap();
            let DegreeSlice::Conic(f) = restricted_form_coefficients(&l, &big(2)).unwrap() else {
                panic!("a = 2 admits degree 2");
            };
            assert_eq!(f.xx, q(-5, 1));
            assert_eq!(f.xy, q(-(18 - 2 * u), 1));
            assert_eq!(f.yy, q(-5, 1));
            assert_eq!(f.constant, q(1, 1));
            // parity: 1 − 3x − 3y even
            assert!(f.congruence.holds(&big(1), &big(0)));
            assert!(!f.congruence.holds(&big(1), &big(1)));
        }
    }

    #[test]
    fn restricted_form_matches_pairing() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..50 {
            let a: i64 = rng.gen_range(2..=10);
            let u: i64 = rng.gen_range(4 * a - 3..=5 * a + 3);
            let l = GramLattice::k3(a, u).unwrap();
            let e = DivisorClass::new(
                rng.gen_range(-20..=20),
                rng.gen_range(-20..=20),
                rng.gen_range(-20..=20),
            );
            let d = l.degree(&e);
            let DegreeSlice::Conic(f) = restricted_form_coefficients(&l, &d).unwrap() else {
                panic!("slice through an actual class is nonempty");
            };
            assert_eq!(f.z_for(e.x(), e.y()).as_ref(), Some(e.z()));
            assert_eq!(f.eval(e.x(), e.y()), rat(&l.self_intersection(&e)));
        }
    }

    #[test]
    fn indivisible_degree_gives_empty_slice() {
        let l = GramLattice::k3(3, 11).unwrap();
        assert!(matches!(
            restricted_form_coefficients(&l, &big(1)).unwrap(),
            DegreeSlice::Empty { .. }
        ));
        let set = enumerate(&l, &big(1), &big(0)).unwrap();
        assert!(set.is_empty() && set.exhaustive && set.empty_reason.is_some());
    }

    #[test]
    fn degree_zero_square_zero_is_only_origin() {
        let l = GramLattice::k3(2, 6).unwrap();
        let set = enumerate(&l, &big(0), &big(0)).unwrap();
        assert_eq!(set.witnesses, vec![DivisorClass::zero()]);
    }

    #[test]
    fn degree_two_conic_is_empty_at_a2() {
        for u in 6..=12 {
            let l = GramLattice::k3(2, u).unwrap();
            assert!(enumerate(&l, &big(2), &big(0)).unwrap().is_empty());
            assert!(brute_force_oracle(&l, &big(2), &big(0), 20).is_empty());
        }
    }

    #[test]
    fn large_norm_short_circuits() {
        let l = GramLattice::k3(4, 18).unwrap();
        let set = enumerate(&l, &big(0), &big(2)).unwrap();
        assert!(set.is_empty());
        assert!(set.search_box.iter().all(Interval::is_empty));
        assert!(set.empty_reason.unwrap().contains("exceeds"));
    }

    #[test]
    fn ulrich_classes_present() {
        for a in 2..=10i64 {
            for u in 4 * a - 2..=5 * a + 2 {
                let l = GramLattice::k3(a, u).unwrap();
                let set = enumerate(&l, &big(3 * a), &big(4 * (a - 1))).unwrap();
                for c in [DivisorClass::a(), DivisorClass::b(), DivisorClass::new(3, -1, 0)] {
                    assert!(set.contains(&c), "a={a} u={u} missing {c}");
                }
            }
        }
    }

    #[test]
    fn agrees_with_oracle_on_named_queries() {
        let l = GramLattice::k3(3, 11).unwrap();
        let set = enumerate(&l, &big(9), &big(8)).unwrap();
        assert_eq!(set.witnesses, brute_force_oracle(&l, &big(9), &big(8), 20));
        assert!(!set.is_empty());
        let l = GramLattice::k3(2, 6).unwrap();
        assert!(brute_force_oracle(&l, &big(0), &big(0), 3).contains(&DivisorClass::zero()));
    }

    #[test]
    fn polarized_route_agrees_with_h_slice() {
        for a in 2..=6i64 {
            for u in 4 * a - 3..=5 * a + 3 {
                let l = GramLattice::k3(a, u).unwrap();
                for (d, s) in [(0, -2), (a, -2), (3 * a, 4 * (a - 1)), (2 * a, -4), (a, -4)] {
                    let by_slice = enumerate(&l, &big(d), &big(s)).unwrap();
                    let by_majorant =
                        enumerate_polarized(&l, &DivisorClass::h(), &big(d), &big(s)).unwrap();
                    assert_eq!(by_slice.witnesses, by_majorant.witnesses, "a={a} u={u} d={d}");
                }
            }
        }
    }

    #[test]
    fn polarized_against_other_class() {
        let l = GramLattice::k3(3, 12).unwrap();
        let p = DivisorClass::new(2, 1, -1);
        assert!(l.self_intersection(&p).is_positive());
        for d in -6..=6i64 {
            let set = enumerate_polarized(&l, &p, &big(d), &big(-2)).unwrap();
            let radius = i64::try_from(set.box_radius()).unwrap() * 2 + 1;
            let oracle: Vec<_> = brute_force_oracle_polarized(&l, &p, d, -2, radius);
            assert_eq!(set.witnesses, oracle, "d={d}");
        }
    }

    fn brute_force_oracle_polarized(
        l: &GramLattice,
        p: &DivisorClass,
        d: i64,
        s: i64,
        r: i64,
    ) -> Vec<DivisorClass> {
        let mut out = Vec::new();
        for z in -r..=r {
            for x in -r..=r {
                for y in -r..=r {
                    let e = DivisorClass::new(z, x, y);
                    if l.pairing(&e, p) == big(d) && l.self_intersection(&e) == big(s) {
                        out.push(e);
                    }
                }
            }
        }
        out
    }

    #[test]
    fn guard_rejects_non_hyperbolic() {
        let l = GramLattice::k3(2, 20).unwrap();
        assert!(!l.inertia().is_hyperbolic());
        assert!(matches!(enumerate(&l, &big(0), &big(-2)), Err(Error::IllPosedQuery(_))));
        let neg_h = GramLattice::from_i64([[-2, 0, 0], [0, 2, 0], [0, 0, -2]]).unwrap();
        assert!(matches!(enumerate(&neg_h, &big(0), &big(-2)), Err(Error::IllPosedQuery(_))));
    }

    #[test]
    fn discriminant_values() {
        assert_eq!(delta_degree_two(&big(12)), big(-11));
        assert_eq!(delta_degree_two(&big(9)), big(-20));
        for a in 2..=100i64 {
            assert_eq!(delta_roots(&big(a), &big(5 * a + 2)), big(-4 * (a + 4)));
        }
    }

    #[test]
    fn discriminant_certificate_passes_on_range() {
        for a in 2..=12i64 {
            let cert =
                discriminant_certificate(&big(a), &big(4 * a - 2), &big(5 * a + 2)).unwrap();
            assert!(cert.passed(), "{}", cert.to_json());
        }
        let cert = discriminant_certificate(&big(2), &big(6), &big(12)).unwrap();
        assert!(cert.find("delta(12) = -11").unwrap().passed());
        assert!(cert.find("delta-negative").unwrap().passed());
    }

    #[test]
    fn discriminant_certificate_fails_outside_range() {
        // Δ_a(5a+3) = 4 > 0.
        let a = big(3);
        let cert = discriminant_certificate(&a, &big(10), &big(18)).unwrap();
        assert!(!cert.passed());
        let neg = cert.find("delta_a-negative").unwrap();
        assert!(!neg.witnesses.is_empty());
    }
}
