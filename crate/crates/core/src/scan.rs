//! Rank-2 table over a rectangle of `(a, u)` cells, optionally backed by the
//! lattice construction for every cell where it applies.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{to_sorted_json, Certificate, Verdict};
use crate::dec;
use crate::error::{Error, Result};
use crate::k3::{certify_very_ample, find_ulrich_line_bundles, UlrichLineBundleCertificate};
use crate::lattice::{DivisorClass, GramLattice};
use crate::rank2::{classify_u, triple_c1sq, triple_upper, Classification, Rank2Row};

pub const CSV_COLUMNS: [&str; 9] = [
    "a",
    "u",
    "c1sq",
    "c2",
    "ext_dim",
    "moduli_dim",
    "stratum_dim",
    "classification",
    "certificate_ref",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanGrid {
    #[serde(with = "dec")]
    pub a_min: BigInt,
    #[serde(with = "dec")]
    pub a_max: BigInt,
    pub verify: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanFailure {
    #[serde(with = "dec")]
    pub a: BigInt,
    #[serde(with = "dec")]
    pub u: BigInt,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub tool_version: String,
    pub grid: ScanGrid,
    pub rows: Vec<Rank2Row>,
    pub summary: BTreeMap<Classification, usize>,
    pub failures: Vec<ScanFailure>,
}

impl ScanReport {
    pub fn to_json(&self) -> String {
        to_sorted_json(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// RFC 4180 CSV with a header row; columns as in [`CSV_COLUMNS`].
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(Vec::new());
        w.write_record(CSV_COLUMNS).expect("in-memory write");
        for row in &self.rows {
            w.write_record([
                row.a.to_string(),
                row.u.to_string(),
                row.c1sq.to_string(),
                row.c2.to_string(),
                row.ext_dim.to_string(),
                row.moduli_dim.to_string(),
                row.strict_ss_stratum_dim.to_string(),
                row.classification.to_string(),
                row.certificate_ref(),
            ])
            .expect("in-memory write");
        }
        let bytes = w.into_inner().expect("in-memory flush");
        String::from_utf8(bytes).expect("CSV fields are ASCII")
    }

    pub fn count(&self, class: Classification) -> usize {
        self.summary.get(&class).copied().unwrap_or(0)
    }
}

/// Lattice-side evidence for the row `(a, u)`, `4a−2 ≤ u ≤ 5a+2`.
pub fn construct_row_certificate(a: &BigInt, u: &BigInt) -> Result<Certificate> {
    let lattice = GramLattice::k3(a.clone(), u.clone())?;
    let sig = lattice.inertia();
    let mut cert = Certificate::new("rank2-construction", Verdict::Pass)
        .int_param("a", a)
        .int_param("u", u)
        .param("lattice", &lattice);
    cert = cert.subcheck(
        Certificate::new("even, signature (1,2,0)", Verdict::from_bool(lattice.is_even() && sig.is_hyperbolic()))
            .param("signature", sig),
    );
    cert = cert.subcheck(certify_very_ample(&lattice)?.to_certificate());

    let lines = find_ulrich_line_bundles(&lattice)?;
    let certified: Vec<&UlrichLineBundleCertificate> = lines.iter().filter(|c| c.passed()).collect();
    let is_certified = |d: &DivisorClass| certified.iter().any(|c| &c.class == d);
    let mut lines_cert = Certificate::all_of(
        "ulrich-lines",
        lines.iter().map(UlrichLineBundleCertificate::to_certificate).collect(),
    );
    for c in &certified {
        lines_cert = lines_cert.witness(&c.class);
    }
    let (class_a, class_b) = (DivisorClass::a(), DivisorClass::b());
    lines_cert = lines_cert.subcheck(Certificate::new(
        "A and B certified",
        Verdict::from_bool(is_certified(&class_a) && is_certified(&class_b)),
    ));
    cert = cert.subcheck(lines_cert);
    cert = cert.subcheck(Certificate::equality("A.B = u", u, &lattice.pairing(&class_a, &class_b)));

    // h¹(O(A−B)) = −2 − (A−B)²/2 since h⁰ and h² vanish.
    let diff = &class_a - &class_b;
    let ext = -lattice.self_intersection(&diff) / 2 - 2;
    let four_a = a * 4;
    let expected_ext = u - &four_a + 2;
    let mut ext_cert = Certificate::equality("h1(O(A-B)) = u-4a+2", &expected_ext, &ext);
    if u >= &(&four_a - 1) && ext < BigInt::from(1) {
        ext_cert.verdict = Verdict::Fail;
    }
    if u == &(&four_a - 2) && !ext.is_zero() {
        ext_cert.verdict = Verdict::Fail;
    }
    cert = cert.subcheck(ext_cert);

    if u >= &(&four_a - 1) && u <= &triple_upper(a) {
        // Non-split extensions of certified line bundles D1, D2 need D1·D2 ≥ 4a − 1.
        let mut reachable = Vec::new();
        for (i, c1) in certified.iter().enumerate() {
            for c2 in &certified[i + 1..] {
                let p = lattice.pairing(&c1.class, &c2.class);
                if p >= &four_a - 1 {
                    reachable.push((&a.clone() - 1) * 8 + p * 2);
                }
            }
        }
        reachable.sort();
        reachable.dedup();
        let triple = triple_c1sq(a, u);
        let ok = triple.iter().all(|v| reachable.contains(v));
        let mut t = Certificate::new("c1^2 triple on one surface", Verdict::from_bool(ok))
            .param("expected", triple.iter().map(dec::value).collect::<Vec<_>>());
        for v in &reachable {
            t = t.witness(dec::value(v));
        }
        cert = cert.subcheck(t);
    }
    Ok(cert)
}

fn failed_leaves(cert: &Certificate, out: &mut Vec<String>) {
    if cert.passed() {
        return;
    }
    if cert.subchecks.iter().all(Certificate::passed) {
        out.push(cert.check.clone());
    }
    for sub in &cert.subchecks {
        failed_leaves(sub, out);
    }
}

fn scan_cell(a: &BigInt, u: &BigInt, verify: bool) -> Result<(Rank2Row, Option<ScanFailure>)> {
    let mut row = classify_u(a, u)?;
    let constructive = u >= &(a * 4 - 2) && u <= &(a * 5 + 2);
    if !(verify && constructive) {
        return Ok((row, None));
    }
    let failure = |message: String| ScanFailure {
        a: a.clone(),
        u: u.clone(),
        message,
    };
    match construct_row_certificate(a, u) {
        Ok(cert) => {
            let mut failed = Vec::new();
            failed_leaves(&cert, &mut failed);
            let fail = (!failed.is_empty())
                .then(|| failure(format!("failed checks: {}", failed.join("; "))));
            row.certificate = Some(cert);
            Ok((row, fail))
        }
        Err(e) => Ok((row, Some(failure(e.to_string())))),
    }
}

fn cells(a_min: &BigInt, a_max: &BigInt) -> Vec<(BigInt, BigInt)> {
    let mut out = Vec::new();
    let mut a = a_min.clone();
    while &a <= a_max {
        let mut u: BigInt = &a * 4 - 3;
        let top: BigInt = &a * 5 + 4;
        while u <= top {
            out.push((a.clone(), u.clone()));
            u += 1;
        }
        a += 1;
    }
    out
}

/// Rows for every `a` in `a_min..=a_max` and `u` in `[4a−3, 5a+4]`, sorted by `(a, u)`.
///
/// `jobs` sets the worker count (0 picks rayon's default); the output does not
/// depend on it.
pub fn scan_rank2(a_min: &BigInt, a_max: &BigInt, verify: bool, jobs: usize) -> Result<ScanReport> {
    if a_min < &BigInt::from(2) || a_min > a_max {
        return Err(Error::ParameterDomain(format!(
            "need 2 <= a_min <= a_max, got {a_min}..{a_max}"
        )));
    }
    let work = cells(a_min, a_max);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::ParameterDomain(format!("cannot start {jobs} workers: {e}")))?;
    let mut results: Vec<(Rank2Row, Option<ScanFailure>)> = pool.install(|| {
        work.par_iter()
            .map(|(a, u)| scan_cell(a, u, verify))
            .collect::<Result<_>>()
    })?;
    results.sort_by(|l, r| (&l.0.a, &l.0.u).cmp(&(&r.0.a, &r.0.u)));

    let mut summary: BTreeMap<Classification, usize> =
        Classification::ALL.iter().map(|c| (*c, 0)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (row, failure) in results {
        *summary.entry(row.classification).or_default() += 1;
        failures.extend(failure);
        rows.push(row);
    }
    Ok(ScanReport {
        tool_version: env!("CARGO_PKG_VERSION").to_owned(),
        grid: ScanGrid {
            a_min: a_min.clone(),
            a_max: a_max.clone(),
            verify,
        },
        rows,
        summary,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn a2_rows() {
        let report = scan_rank2(&big(2), &big(2), true, 1).unwrap();
        let us: Vec<_> = report.rows.iter().map(|r| r.u.clone()).collect();
        assert_eq!(us, (5..=14).map(big).collect::<Vec<_>>());
        assert_eq!(report.count(Classification::Excluded), 1);
        assert_eq!(report.count(Classification::Special), 1);
        assert_eq!(report.count(Classification::Impossible), 1);
        assert_eq!(report.count(Classification::DecomposableOnly), 1);
        assert_eq!(report.count(Classification::StrictlySemistableGeneral), 1);
        assert_eq!(report.count(Classification::StableExists), 5);
        let ss = &report.rows[2];
        assert_eq!((ss.u.clone(), ss.c1sq.clone()), (big(7), big(22)));
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert_eq!(report.summary.values().sum::<usize>(), report.rows.len());
    }

    #[test]
    fn verified_rows_carry_certificates() {
        let report = scan_rank2(&big(5), &big(5), true, 2).unwrap();
        for row in &report.rows {
            let constructive = row.u >= big(18) && row.u <= big(27);
            assert_eq!(row.certificate.is_some(), constructive);
            if let Some(cert) = &row.certificate {
                assert!(cert.passed(), "{}", cert.to_json());
                assert!(cert.find("A.B = u").unwrap().passed());
            }
        }
        let row = report.rows.iter().find(|r| r.u == big(20)).unwrap();
        let lattice: GramLattice = serde_json::from_value(
            row.certificate.as_ref().unwrap().params["lattice"].clone(),
        )
        .unwrap();
        assert_eq!(lattice.pairing(&DivisorClass::a(), &DivisorClass::b()), big(20));
    }

    #[test]
    fn triple_subcheck_present_in_range() {
        let a = big(4);
        for u in 15..=18 {
            let cert = construct_row_certificate(&a, &big(u)).unwrap();
            let triple = cert.find("c1^2 triple on one surface").unwrap();
            assert!(triple.passed(), "u={u}");
        }
        assert!(construct_row_certificate(&a, &big(19))
            .unwrap()
            .find("c1^2 triple on one surface")
            .is_none());
    }

    #[test]
    fn csv_and_json_shapes() {
        let report = scan_rank2(&big(2), &big(3), true, 0).unwrap();
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "a,u,c1sq,c2,ext_dim,moduli_dim,stratum_dim,classification,certificate_ref"
        );
        assert_eq!(lines.count(), report.rows.len());
        assert!(csv.contains("2,7,22,7,1,0,0,STRICTLY_SEMISTABLE_GENERAL,k3-a2-u7"));
        let back = ScanReport::from_json(&report.to_json()).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn rejects_bad_range() {
        assert!(scan_rank2(&big(1), &big(3), false, 1).is_err());
        assert!(scan_rank2(&big(4), &big(3), false, 1).is_err());
    }
}
