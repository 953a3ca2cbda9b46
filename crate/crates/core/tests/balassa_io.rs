use proptest::prelude::*;

use linbench::balassa::{
    balassa_matrix, build_trade_matrix, export_matrix_csv, ingest_trade_csv, read_matrix_csv, synthetic_trade_matrix,
    TradeMatrix,
};
use linbench::{oracle, Error, Matrix, RngStream};

fn labelled(x: Matrix) -> TradeMatrix<f64> {
    let (c, p) = x.shape();
    TradeMatrix {
        x,
        countries: (0..c).map(|i| format!("c{i}")).collect(),
        products: (0..p).map(|i| format!("p{i}")).collect(),
    }
}

#[test]
fn export_then_read_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let t = synthetic_trade_matrix(&mut RngStream::new(11), 9, 14).unwrap();
    let b = balassa_matrix(&t).unwrap().b;
    let path = dir.path().join("b.csv");
    export_matrix_csv(&b, &t.countries, &t.products, &path).unwrap();
    let back = read_matrix_csv(&path).unwrap();
    assert_eq!(back.countries, t.countries);
    assert_eq!(back.products, t.products);
    assert_eq!(back.x, b);
}

#[test]
fn ingest_long_format_and_compute() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flows.csv");
    std::fs::write(
        &path,
        "country,product,value\nFR,wine,30\nFR,cars,10\nDE,cars,50\nDE,wine,5\nFR,wine,10\n",
    )
    .unwrap();
    let table = ingest_trade_csv(&path).unwrap();
    assert_eq!(table.len(), 5);
    let m = build_trade_matrix(&table).unwrap();
    assert_eq!(m.countries, ["DE", "FR"]);
    assert_eq!(m.products, ["cars", "wine"]);
    // duplicate FR/wine rows are summed
    assert_eq!(m.x[(1, 1)], 40.0);
    let r = balassa_matrix(&m).unwrap();
    assert!(r.b.max_abs_diff(&oracle::balassa_scalar(&m.x)).unwrap() <= 1e-12);
    assert_eq!(r.s.as_slice(), &[1.0, 0.0, 0.0, 1.0]);
}

#[test]
fn zero_margin_names_the_label() {
    let x = Matrix::from_rows(&[[1.0, 0.0], [2.0, 0.0]]).unwrap();
    match balassa_matrix(&labelled(x)) {
        Err(Error::DegenerateMargin { axis, label }) => assert_eq!((axis, label.as_str()), ("product", "p1")),
        other => panic!("expected a degenerate margin, got {other:?}"),
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(ingest_trade_csv(dir.path().join("absent.csv")), Err(Error::Io(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn matrix_form_matches_cellwise_and_is_scale_free(seed in any::<u64>(), c in 1usize..25, p in 1usize..35, k in 1e-3f64..1e3) {
        let mut rng = RngStream::new(seed);
        let x = Matrix::from_fn(c, p, |_, _| 0.01 + 100.0 * rng.uniform());
        let b = balassa_matrix(&labelled(x.clone())).unwrap().b;
        prop_assert!(b.max_abs_diff(&oracle::balassa_scalar(&x)).unwrap() <= 1e-12);
        let bk = balassa_matrix(&labelled(x.map(|v| v * k))).unwrap().b;
        prop_assert!(b.max_abs_diff(&bk).unwrap() <= 1e-12);
    }

    #[test]
    fn csv_round_trip_any_values(seed in any::<u64>(), c in 1usize..8, p in 1usize..8) {
        let mut rng = RngStream::new(seed);
        let x = Matrix::from_fn(c, p, |_, _| rng.normal() * 10f64.powi(rng.uniform_int(0, 40) as i32 - 20));
        let t = labelled(x);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        export_matrix_csv(&t.x, &t.countries, &t.products, &path).unwrap();
        prop_assert_eq!(read_matrix_csv(&path).unwrap().x, t.x);
    }
}
