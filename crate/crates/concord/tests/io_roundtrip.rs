use concord::io::{emit_matrix, parse_matrix, Format, MatrixDocument, DEFAULT_PRECISION};
use proptest::prelude::*;

fn document() -> impl Strategy<Value = MatrixDocument> {
    (1usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(prop::collection::vec(-20.0f64..20.0, n), n),
            prop::bool::ANY,
        )
            .prop_map(move |(logs, labelled)| {
                let entries = logs.iter().map(|r| r.iter().map(|v| v.exp()).collect()).collect();
                let labels = labelled.then(|| (0..n).map(|i| format!("item {i}")).collect());
                MatrixDocument::new(entries, labels, Format::Csv)
            })
    })
}

fn assert_close(a: &MatrixDocument, b: &MatrixDocument, precision: usize) {
    let bound = 10f64.powi(1 - precision as i32);
    assert_eq!(a.n, b.n);
    assert_eq!(a.labels, b.labels);
    for (x, y) in a.entries.iter().flatten().zip(b.entries.iter().flatten()) {
        assert!((x - y).abs() / y <= bound, "{x} vs {y}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn round_trip_at_default_precision(doc in document(), json in prop::bool::ANY) {
        let format = if json { Format::Json } else { Format::Csv };
        let text = emit_matrix(&doc, format, DEFAULT_PRECISION);
        let back = parse_matrix(&text, format).unwrap();
        prop_assert_eq!(back.source_format, format);
        assert_close(&back, &doc, DEFAULT_PRECISION);
    }

    #[test]
    fn round_trip_at_any_precision(doc in document(), precision in 1usize..=17) {
        let back = parse_matrix(&emit_matrix(&doc, Format::Csv, precision), Format::Csv).unwrap();
        assert_close(&back, &doc, precision);
    }
}

#[test]
fn exact_at_seventeen_digits() {
    let doc = parse_matrix("1,1/3,7/9\n3,1,1/7\n9/7,7,1", Format::Csv).unwrap();
    let back = parse_matrix(&emit_matrix(&doc, Format::Json, 17), Format::Json).unwrap();
    assert_eq!(back.entries, doc.entries);
}
