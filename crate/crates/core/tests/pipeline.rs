use k3ulrich::rank2::triple_c1sq;
use k3ulrich::scan::{construct_row_certificate, CSV_COLUMNS};
use k3ulrich::{
    chern_bounds, classify_u, find_ulrich_line_bundles, nefify, ChernData, Classification,
    DivisorClass, GramLattice, ScanReport, WitnessSet,
};
use num_bigint::BigInt;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn scan_report_round_trips() {
    let report = k3ulrich::scan_rank2(&big(2), &big(4), true, 2).unwrap();
    let text = report.to_json();
    let back = ScanReport::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    assert_eq!(back.rows.len(), report.rows.len());
    let total: usize = report.summary.values().sum();
    assert_eq!(total, report.rows.len());
}

#[test]
fn csv_has_fixed_header_and_crlf() {
    let report = k3ulrich::scan_rank2(&big(3), &big(3), false, 1).unwrap();
    let csv = report.to_csv();
    let header = csv.split("\r\n").next().unwrap();
    assert_eq!(header, CSV_COLUMNS.join(","));
    assert_eq!(csv.matches("\r\n").count(), report.rows.len() + 1);
}

#[test]
fn witness_set_json_round_trip() {
    let l = GramLattice::k3(3, 9).unwrap();
    let set = k3ulrich::enumerate(&l, &big(0), &big(-2)).unwrap();
    let text = serde_json::to_string(&set).unwrap();
    let back: WitnessSet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, set);
    assert!(back.contains(&DivisorClass::new(0, 1, -1)));
}

#[test]
fn exclusion_matches_chern_bound() {
    for a in 2..=30 {
        let row = classify_u(&big(a), &big(5 * a + 3)).unwrap();
        assert_eq!(row.classification, Classification::Excluded);
        let bounds = chern_bounds(&big(a), &big(2)).unwrap();
        assert_eq!(bounds.excluded, vec![row.c1sq.clone()]);
    }
}

#[test]
fn simple_bound_separates_decomposable_rows() {
    // 8a-8+2u >= 16a-10 exactly when u >= 4a-1.
    for a in 2..=30 {
        let simple = chern_bounds(&big(a), &big(2)).unwrap().simple_lower;
        for u in 4 * a - 3..=5 * a + 4 {
            let row = classify_u(&big(a), &big(u)).unwrap();
            assert_eq!(row.c1sq >= simple, u >= 4 * a - 1, "a={a} u={u}");
        }
    }
}

#[test]
fn constructive_rows_have_two_lines_with_pairing_u() {
    for a in 2..=6 {
        for u in 4 * a - 2..=5 * a + 2 {
            let cert = construct_row_certificate(&big(a), &big(u)).unwrap();
            assert!(cert.passed(), "a={a} u={u}");
            let l = GramLattice::k3(a, u).unwrap();
            let lines = find_ulrich_line_bundles(&l).unwrap();
            let certified: Vec<_> = lines.iter().filter(|c| c.passed()).collect();
            assert!(certified.len() >= 2);
            assert!(certified
                .iter()
                .any(|c| certified.iter().any(|d| l.pairing(&c.class, &d.class) == big(u))));
        }
    }
}

#[test]
fn triple_values_realised_by_certified_pairs() {
    // For 4a-1 <= u <= 9a/2, sums of two certified lines hit all three c1^2 values.
    for a in 2..=8i64 {
        for u in 4 * a - 1..=(9 * a) / 2 {
            let l = GramLattice::k3(a, u).unwrap();
            let lines: Vec<_> = find_ulrich_line_bundles(&l)
                .unwrap()
                .into_iter()
                .filter(|c| c.passed())
                .collect();
            let mut seen = Vec::new();
            for x in &lines {
                for y in &lines {
                    let sum = &x.class + &y.class;
                    seen.push(l.self_intersection(&sum));
                }
            }
            for target in triple_c1sq(&big(a), &big(u)) {
                assert!(seen.contains(&target), "a={a} u={u}: {target} missing");
            }
        }
    }
}

#[test]
fn nefify_fixes_h() {
    let l = GramLattice::k3(2, 8).unwrap();
    let h = DivisorClass::h();
    let walk = nefify(&l, &h, &big(24)).unwrap();
    assert_eq!(walk.class, h);
    assert!(walk.trace.is_empty());
}

#[test]
fn line_bundle_chern_data_is_ulrich() {
    let l = GramLattice::k3(4, 18).unwrap();
    for c in find_ulrich_line_bundles(&l).unwrap().iter().filter(|c| c.passed()) {
        let data: ChernData = c.chern_data();
        assert!(k3ulrich::ulrich_numerical_conditions(&data, &big(4)));
    }
}
