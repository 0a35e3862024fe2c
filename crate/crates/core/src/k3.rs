//! Numerical geometry of a polarized K3 surface with Picard lattice `M(a, u)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Verdict};
use crate::dec;
use crate::enumeration::{enumerate, enumerate_polarized, WitnessSet};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, GramLattice};

/// Numerical invariants of a sheaf: rank, `c₁·h`, `c₁²`, `c₂`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernData {
    #[serde(with = "dec")]
    pub r: BigInt,
    #[serde(with = "dec")]
    pub c1h: BigInt,
    #[serde(with = "dec")]
    pub c1sq: BigInt,
    #[serde(with = "dec")]
    pub c2: BigInt,
}

impl ChernData {
    pub fn new(
        r: impl Into<BigInt>,
        c1h: impl Into<BigInt>,
        c1sq: impl Into<BigInt>,
        c2: impl Into<BigInt>,
    ) -> Self {
        Self {
            r: r.into(),
            c1h: c1h.into(),
            c1sq: c1sq.into(),
            c2: c2.into(),
        }
    }

    /// Chern data of the line bundle `O(D)`.
    pub fn line_bundle(lattice: &GramLattice, d: &DivisorClass) -> Self {
        Self::new(1, lattice.degree(d), lattice.self_intersection(d), 0)
    }

    /// Chern data of `E(t·h)` on a surface with `h² = hsq`.
    pub fn twist(&self, t: &BigInt, hsq: &BigInt) -> Self {
        let r = &self.r;
        let binom = r * (r - 1) / 2;
        Self {
            r: r.clone(),
            c1h: &self.c1h + r * t * hsq,
            c1sq: &self.c1sq + r * t * &self.c1h * 2 + r * r * t * t * hsq,
            c2: &self.c2 + (r - 1) * t * &self.c1h + binom * t * t * hsq,
        }
    }
}

/// `χ = 2r + c₁²/2 − c₂`.
pub fn riemann_roch_chi(c: &ChernData) -> Result<BigInt> {
    if c.c1sq.is_odd() {
        return Err(Error::OddSelfIntersection(c.c1sq.clone()));
    }
    Ok(&c.r * 2 + &c.c1sq / 2 - &c.c2)
}

/// `χ(E(t·h))`.
pub fn hilbert_polynomial(c: &ChernData, hsq: &BigInt, t: &BigInt) -> Result<BigInt> {
    riemann_roch_chi(&c.twist(t, hsq))
}

/// `μ = c₁·h / r`.
pub fn slope(c: &ChernData) -> Result<BigRational> {
    if !c.r.is_positive() {
        return Err(Error::ParameterDomain(format!("rank {} must be positive", c.r)));
    }
    Ok(BigRational::new(c.c1h.clone(), c.r.clone()))
}

/// `c₁·h = 3ar` and `c₂ = c₁²/2 − 2(a−1)r`.
pub fn ulrich_numerical_conditions(c: &ChernData, a: &BigInt) -> bool {
    let degree_ok = c.c1h == a * &c.r * 3;
    // 2c₂ = c₁² − 4(a−1)r avoids halving an odd c₁².
    let c2_ok = &c.c2 * 2 == &c.c1sq - (a - 1) * &c.r * 4;
    degree_ok && c2_ok
}

/// Chern data of `E^∨(3h)` on a surface with `h² = 2a`.
pub fn ulrich_dual_transform(c: &ChernData, a: &BigInt) -> ChernData {
    let hsq = a * 2;
    let r = &c.r;
    let binom = r * (r - 1) / 2;
    ChernData {
        r: r.clone(),
        c1h: r * 3 * &hsq - &c.c1h,
        c1sq: r * r * 9 * &hsq - r * 6 * &c.c1h + &c.c1sq,
        c2: &c.c2 - (r - 1) * 3 * &c.c1h + binom * 9 * &hsq,
    }
}

/// Outcome of the numerical very-ampleness test for `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VeryAmpleCertificate {
    #[serde(with = "dec::opt")]
    pub a: Option<BigInt>,
    #[serde(with = "dec::opt")]
    pub u: Option<BigInt>,
    /// Classes with `E² = 0`, `E·h = 1`.
    pub elliptic_degree_one: WitnessSet,
    /// Classes with `E² = 0`, `E·h = 2`.
    pub elliptic_degree_two: WitnessSet,
    /// Classes with `E² = −2`, `E·h = 0`.
    pub contracted_roots: WitnessSet,
    /// `h` primitive rules out `h = 2E`.
    pub h_primitive: bool,
    pub verdict: Verdict,
}

impl VeryAmpleCertificate {
    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn to_certificate(&self) -> Certificate {
        let condition = |name: &str, set: &WitnessSet| {
            let mut cert = Certificate::new(name, Verdict::from_bool(set.is_empty()))
                .int_param("d", &set.degree)
                .int_param("s", &set.norm)
                .param("box", &set.search_box)
                .param("exhaustive", set.exhaustive)
                .param("bound", &set.bound);
            for w in &set.witnesses {
                cert = cert.witness(w);
            }
            cert
        };
        let mut cert = Certificate::new("very-ample", self.verdict)
            .param("a", self.a.as_ref().map(dec::value))
            .param("u", self.u.as_ref().map(dec::value));
        cert.subchecks = vec![
            condition("no E^2=0, Eh=1", &self.elliptic_degree_one),
            condition("no E^2=0, Eh=2", &self.elliptic_degree_two),
            condition("no E^2=-2, Eh=0", &self.contracted_roots),
            Certificate::new("h primitive (no h=2E)", Verdict::from_bool(self.h_primitive)),
        ];
        cert.witnesses = self
            .contracted_roots
            .witnesses
            .iter()
            .chain(&self.elliptic_degree_one.witnesses)
            .chain(&self.elliptic_degree_two.witnesses)
            .map(|w| serde_json::to_value(w).expect("class serializes"))
            .collect();
        cert
    }
}

/// Checks that no class satisfies any of the numerical obstructions to very
/// ampleness of `h`. Emptiness is tested over all classes, not only effective ones.
pub fn certify_very_ample(lattice: &GramLattice) -> Result<VeryAmpleCertificate> {
    let hsq = lattice.h_squared();
    if hsq < &BigInt::from(4) {
        return Err(Error::ParameterDomain(format!("h^2 = {hsq}, need h^2 >= 4")));
    }
    let zero = BigInt::zero();
    let elliptic_degree_one = enumerate(lattice, &1.into(), &zero)?;
    let elliptic_degree_two = enumerate(lattice, &2.into(), &zero)?;
    let contracted_roots = enumerate(lattice, &zero, &(-2).into())?;
    let h_primitive = DivisorClass::h().is_primitive();
    let ok = elliptic_degree_one.is_empty()
        && elliptic_degree_two.is_empty()
        && contracted_roots.is_empty()
        && h_primitive;
    Ok(VeryAmpleCertificate {
        a: lattice.params().map(|p| p.a.clone()),
        u: lattice.params().map(|p| p.u.clone()),
        elliptic_degree_one,
        elliptic_degree_two,
        contracted_roots,
        h_primitive,
        verdict: Verdict::from_bool(ok),
    })
}

/// Numerical record for one of `D − h`, `2h − D`: a class of degree `a` and
/// square `−4` on a surface where every degree is a multiple of `a` carries no
/// effective divisor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VanishingCheck {
    pub class: DivisorClass,
    #[serde(with = "dec")]
    pub self_intersection: BigInt,
    #[serde(with = "dec")]
    pub degree: BigInt,
    pub degrees_divisible_by_a: bool,
    pub passed: bool,
}

impl VanishingCheck {
    fn new(lattice: &GramLattice, class: DivisorClass, a: &BigInt) -> Self {
        let self_intersection = lattice.self_intersection(&class);
        let degree = lattice.degree(&class);
        let degrees_divisible_by_a = lattice.gram()[0].iter().all(|g| g.is_multiple_of(a));
        let passed = self_intersection == BigInt::from(-4) && &degree == a && degrees_divisible_by_a;
        Self {
            class,
            self_intersection,
            degree,
            degrees_divisible_by_a,
            passed,
        }
    }

    fn to_certificate(&self, name: &str) -> Certificate {
        Certificate::new(name, Verdict::from_bool(self.passed))
            .param("class", &self.class)
            .int_param("self_intersection", &self.self_intersection)
            .int_param("degree", &self.degree)
            .param("degrees_divisible_by_a", self.degrees_divisible_by_a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UlrichLineBundleCertificate {
    pub class: DivisorClass,
    #[serde(with = "dec")]
    pub self_intersection: BigInt,
    #[serde(with = "dec")]
    pub degree: BigInt,
    pub square_ok: bool,
    pub degree_ok: bool,
    pub very_ample_premise: bool,
    /// `h⁰(D − h) = 0`.
    pub minus_h: VanishingCheck,
    /// `h⁰(2h − D) = 0`.
    pub two_h_minus: VanishingCheck,
    pub verdict: Verdict,
}

impl UlrichLineBundleCertificate {
    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }

    pub fn chern_data(&self) -> ChernData {
        ChernData::new(1, self.degree.clone(), self.self_intersection.clone(), 0)
    }

    pub fn to_certificate(&self) -> Certificate {
        Certificate::new("ulrich-line-bundle", self.verdict)
            .param("class", &self.class)
            .param("label", self.class.to_string())
            .witness(&self.class)
            .subcheck(Certificate::new("D^2 = 4(a-1)", Verdict::from_bool(self.square_ok)))
            .subcheck(Certificate::new("Dh = 3a", Verdict::from_bool(self.degree_ok)))
            .subcheck(Certificate::new(
                "h very ample",
                Verdict::from_bool(self.very_ample_premise),
            ))
            .subcheck(self.minus_h.to_certificate("h0(D-h) = 0"))
            .subcheck(self.two_h_minus.to_certificate("h0(2h-D) = 0"))
    }
}

/// Every class with `D² = 4(a−1)` and `D·h = 3a`, each with its vanishing record.
pub fn find_ulrich_line_bundles(lattice: &GramLattice) -> Result<Vec<UlrichLineBundleCertificate>> {
    let params = lattice.params().ok_or(Error::MissingParams)?;
    let a = &params.a;
    let very_ample = certify_very_ample(lattice)?.passed();
    let target_sq = (a - 1) * 4;
    let target_deg = a * 3;
    let candidates = enumerate(lattice, &target_deg, &target_sq)?;
    let h = DivisorClass::h();
    let two_h = h.scale(&2.into());
    Ok(candidates
        .witnesses
        .into_iter()
        .map(|d| {
            let self_intersection = lattice.self_intersection(&d);
            let degree = lattice.degree(&d);
            let square_ok = self_intersection == target_sq;
            let degree_ok = degree == target_deg;
            let minus_h = VanishingCheck::new(lattice, &d - &h, a);
            let two_h_minus = VanishingCheck::new(lattice, &two_h - &d, a);
            let ok = square_ok && degree_ok && very_ample && minus_h.passed && two_h_minus.passed;
            UlrichLineBundleCertificate {
                class: d,
                self_intersection,
                degree,
                square_ok,
                degree_ok,
                very_ample_premise: very_ample,
                minus_h,
                two_h_minus,
                verdict: Verdict::from_bool(ok),
            }
        })
        .collect())
}

/// Bundle all line-bundle certificates under one parent.
pub fn ulrich_lines_certificate(lattice: &GramLattice) -> Result<Certificate> {
    let certs = find_ulrich_line_bundles(lattice)?;
    let params = lattice.params().ok_or(Error::MissingParams)?;
    let mut parent = Certificate::all_of(
        "ulrich-lines",
        certs.iter().map(UlrichLineBundleCertificate::to_certificate).collect(),
    )
    .int_param("a", &params.a)
    .int_param("u", &params.u);
    if certs.is_empty() {
        parent.verdict = Verdict::Fail;
    }
    parent.witnesses = certs
        .iter()
        .filter(|c| c.passed())
        .map(|c| serde_json::to_value(&c.class).expect("class serializes"))
        .collect();
    Ok(parent)
}

pub const NEF_WALK_CAP: usize = 1000;

/// Result of [`nefify`]. `class` is nef against every positive root whose
/// pairing with it lies in `[−radius, −1]`, not necessarily against all roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NefWalk {
    pub class: DivisorClass,
    pub trace: Vec<DivisorClass>,
    #[serde(with = "dec")]
    pub radius: BigInt,
    pub bounded: bool,
}

pub fn default_nef_radius(lattice: &GramLattice) -> BigInt {
    lattice.h_squared() * 6
}

/// Reflect `d` across walls of positive roots (`Γ·h > 0`) with `Γ·d < 0` until
/// none remains within the search radius.
pub fn nefify(lattice: &GramLattice, d: &DivisorClass, radius: &BigInt) -> Result<NefWalk> {
    if !lattice.self_intersection(d).is_positive() {
        return Err(Error::ParameterDomain(format!("{d} has non-positive square")));
    }
    if radius < &BigInt::from(1) {
        return Err(Error::ParameterDomain(format!("radius {radius} must be >= 1")));
    }
    let minus_two = BigInt::from(-2);
    let h = DivisorClass::h();
    let mut current = d.clone();
    let mut trace = Vec::new();
    loop {
        let mut found = None;
        let mut level = BigInt::from(-1);
        while level >= -radius {
            let roots = enumerate_polarized(lattice, &current, &level, &minus_two)?;
            found = roots
                .witnesses
                .into_iter()
                .find(|g| lattice.pairing(g, &h).is_positive());
            if found.is_some() {
                break;
            }
            level -= 1;
        }
        let Some(root) = found else {
            break;
        };
        if trace.len() >= NEF_WALK_CAP {
            return Err(Error::IterationCapExceeded(NEF_WALK_CAP));
        }
        current = lattice.reflect(&current, &root)?;
        trace.push(root);
    }
    Ok(NefWalk {
        class: current,
        trace,
        radius: radius.clone(),
        bounded: true,
    })
}
