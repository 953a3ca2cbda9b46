//! Revealed comparative advantage (Balassa index) over country × product
//! export matrices, with CSV ingestion and export.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::rng::RngStream;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct TradeFlow {
    pub country: String,
    pub product: String,
    pub value: f64,
}

/// Export flows in long form. All values share one currency unit.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeFlowTable {
    pub records: Vec<TradeFlow>,
    pub units: String,
}

impl Default for TradeFlowTable {
    fn default() -> Self {
        Self {
            records: Vec::new(),
            units: "USD".to_owned(),
        }
    }
}

impl TradeFlowTable {
    pub fn push(&mut self, country: impl Into<String>, product: impl Into<String>, value: f64) -> Result<()> {
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::invalid(format!("trade value must be finite and >= 0, got {value}")));
        }
        self.records.push(TradeFlow {
            country: country.into(),
            product: product.into(),
            value,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Reads a `country,product,value` CSV.
pub fn ingest_trade_csv(path: impl AsRef<Path>) -> Result<TradeFlowTable> {
    let file = File::open(path.as_ref())?;
    read_trade_csv(file)
}

pub fn read_trade_csv<R: std::io::Read>(reader: R) -> Result<TradeFlowTable> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != ["country", "product", "value"] {
        return Err(Error::Parse {
            line: 1,
            message: format!("expected header `country,product,value`, found `{}`", header.join(",")),
        });
    }
    let mut table = TradeFlowTable::default();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        let parse_err = |message: String| Error::Parse { line, message };
        let (country, product, raw) = (&rec[0], &rec[1], &rec[2]);
        if country.is_empty() || product.is_empty() {
            return Err(parse_err("empty country or product".to_owned()));
        }
        let value: f64 = raw
            .parse()
            .map_err(|_| parse_err(format!("value `{raw}` is not numeric")))?;
        if !value.is_finite() {
            return Err(parse_err(format!("value `{raw}` is not finite")));
        }
        if value < 0.0 {
            return Err(parse_err(format!("negative value {value}")));
        }
        table.records.push(TradeFlow {
            country: country.to_owned(),
            product: product.to_owned(),
            value,
        });
    }
    Ok(table)
}

/// Wide export matrix: `x(c, p)` for `countries[c]`, `products[p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeMatrix<T> {
    pub x: DenseMatrix<T>,
    pub countries: Vec<String>,
    pub products: Vec<String>,
}

/// Pivots flows into a matrix with lexicographically ordered labels,
/// summing duplicate `(country, product)` cells.
pub fn build_trade_matrix(t: &TradeFlowTable) -> Result<TradeMatrix<f64>> {
    if t.is_empty() {
        return Err(Error::invalid("trade table has no records"));
    }
    let mut cells: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut countries: BTreeMap<&str, usize> = BTreeMap::new();
    let mut products: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &t.records {
        *cells.entry((&r.country, &r.product)).or_insert(0.0) += r.value;
        countries.insert(&r.country, 0);
        products.insert(&r.product, 0);
    }
    for (i, v) in countries.values_mut().enumerate() {
        *v = i;
    }
    for (i, v) in products.values_mut().enumerate() {
        *v = i;
    }
    let mut x = DenseMatrix::zeros(countries.len(), products.len());
    for ((c, p), v) in cells {
        x[(countries[c], products[p])] = v;
    }
    Ok(TradeMatrix {
        x,
        countries: countries.into_keys().map(str::to_owned).collect(),
        products: products.into_keys().map(str::to_owned).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalassaResult<T> {
    /// Balassa indices.
    pub b: DenseMatrix<T>,
    /// 1 where the country has a revealed comparative advantage, else 0.
    pub s: DenseMatrix<T>,
}

/// Row shares divided by column shares of the grand total:
/// `B = (X ⊘ rowsums) ⊘ (colsums / total)`, then `S = [B ≥ 1]`.
pub fn balassa_matrix<T: Real>(m: &TradeMatrix<T>) -> Result<BalassaResult<T>> {
    let x = &m.x;
    let (c_n, p_n) = x.shape();
    if m.countries.len() != c_n || m.products.len() != p_n {
        return Err(Error::invalid("label counts do not match the matrix"));
    }
    let mut row_sums = vec![T::zero(); c_n];
    let mut col_sums = vec![T::zero(); p_n];
    for (p, cs) in col_sums.iter_mut().enumerate() {
        for (c, &v) in x.col(p).iter().enumerate() {
            if v < T::zero() {
                return Err(Error::invalid(format!(
                    "negative export for `{}` / `{}`",
                    m.countries[c], m.products[p]
                )));
            }
            row_sums[c] += v;
            *cs += v;
        }
    }
    if let Some(c) = row_sums.iter().position(|&s| !(s > T::zero())) {
        return Err(Error::DegenerateMargin {
            axis: "country",
            label: m.countries[c].clone(),
        });
    }
    if let Some(p) = col_sums.iter().position(|&s| !(s > T::zero())) {
        return Err(Error::DegenerateMargin {
            axis: "product",
            label: m.products[p].clone(),
        });
    }
    let total: T = row_sums.iter().copied().sum();

    let mut b = x.clone();
    for (p, &cs) in col_sums.iter().enumerate() {
        let world_share = cs / total;
        for (v, &rs) in b.col_mut(p).iter_mut().zip(&row_sums) {
            *v = (*v / rs) / world_share;
        }
    }
    let s = rca_indicator(&b);
    Ok(BalassaResult { b, s })
}

/// `S(c,p) = 1` iff `B(c,p) ≥ 1`.
pub fn rca_indicator<T: Real>(b: &DenseMatrix<T>) -> DenseMatrix<T> {
    b.map(|v| if v >= T::one() { T::one() } else { T::zero() })
}

/// Random positive export matrix for benchmarking: log-normal magnitudes
/// with roughly a third of the cells zeroed, while every row and column keeps
/// at least one positive entry.
pub fn synthetic_trade_matrix(rng: &mut RngStream, countries: usize, products: usize) -> Result<TradeMatrix<f64>> {
    if countries == 0 || products == 0 {
        return Err(Error::invalid("synthetic trade matrix needs positive dimensions"));
    }
    let mut x = DenseMatrix::from_fn(countries, products, |_, _| {
        let v = (3.0 * rng.normal()).exp() * 1000.0;
        if rng.uniform() < 0.33 {
            0.0
        } else {
            v
        }
    });
    for c in 0..countries {
        let p = c % products;
        if x[(c, p)] == 0.0 {
            x[(c, p)] = 1.0;
        }
    }
    for p in 0..products {
        let c = p % countries;
        if x[(c, p)] == 0.0 {
            x[(c, p)] = 1.0;
        }
    }
    Ok(TradeMatrix {
        x,
        countries: (0..countries).map(|i| format!("C{i:04}")).collect(),
        products: (0..products).map(|i| format!("P{i:05}")).collect(),
    })
}

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros trimmed.
pub fn format_sig17(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_owned());
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    }
}

/// Wide CSV: header `country,<products...>`, then one row per country.
pub fn export_matrix_csv(
    m: &DenseMatrix<f64>,
    row_labels: &[String],
    col_labels: &[String],
    path: impl AsRef<Path>,
) -> Result<()> {
    let text = matrix_csv_string(m, row_labels, col_labels)?;
    let mut f = File::create(path.as_ref())?;
    f.write_all(text.as_bytes())?;
    Ok(())
}

pub fn matrix_csv_string(m: &DenseMatrix<f64>, row_labels: &[String], col_labels: &[String]) -> Result<String> {
    if row_labels.len() != m.rows() || col_labels.len() != m.cols() {
        return Err(Error::invalid(format!(
            "{} row / {} column labels for a {}x{} matrix",
            row_labels.len(),
            col_labels.len(),
            m.rows(),
            m.cols()
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(std::iter::once("country").chain(col_labels.iter().map(String::as_str)))?;
    for (i, label) in row_labels.iter().enumerate() {
        let mut rec = vec![label.clone()];
        rec.extend((0..m.cols()).map(|j| format_sig17(m[(i, j)])));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits UTF-8"))
}

/// Reads a wide CSV written by [`export_matrix_csv`].
pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<TradeMatrix<f64>> {
    let mut rdr = csv::Reader::from_path(path.as_ref())?;
    let header = rdr.headers()?.clone();
    let products: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let mut countries = Vec::new();
    let mut values = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        countries.push(rec[0].to_owned());
        for raw in rec.iter().skip(1) {
            values.push(raw.parse::<f64>().map_err(|_| Error::Parse {
                line,
                message: format!("value `{raw}` is not numeric"),
            })?);
        }
    }
    if countries.is_empty() || products.is_empty() {
        return Err(Error::invalid("matrix CSV has no data"));
    }
    let (r, c) = (countries.len(), products.len());
    let x = DenseMatrix::from_fn(r, c, |i, j| values[i * c + j]);
    Ok(TradeMatrix { x, countries, products })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn labelled(x: DenseMatrix<f64>) -> TradeMatrix<f64> {
        TradeMatrix {
            countries: (0..x.rows()).map(|i| format!("c{i}")).collect(),
            products: (0..x.cols()).map(|i| format!("p{i}")).collect(),
            x,
        }
    }

    #[test]
    fn duplicates_sum_and_labels_sort() {
        let csv = "country,product,value\nBBB,p2,1\nAAA,p1,10\nAAA,p1,5\n";
        let t = read_trade_csv(csv.as_bytes()).unwrap();
        let m = build_trade_matrix(&t).unwrap();
        assert_eq!(m.countries, ["AAA", "BBB"]);
        assert_eq!(m.products, ["p1", "p2"]);
        assert_eq!(m.x, DenseMatrix::from_rows(&[[15.0, 0.0], [0.0, 1.0]]).unwrap());
    }

    #[test]
    fn header_only_then_build_fails() {
        let t = read_trade_csv("country,product,value\n".as_bytes()).unwrap();
        assert!(t.is_empty());
        assert!(build_trade_matrix(&t).is_err());
    }

    #[test]
    fn bad_rows_report_their_line() {
        let err = read_trade_csv("country,product,value\nAAA,p1,4\nAAA,p1,-3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = read_trade_csv("country,product,value\nAAA,p1,abc\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = read_trade_csv("country,item,value\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn single_record() {
        let mut t = TradeFlowTable::default();
        t.push("X", "y", 3.0).unwrap();
        assert_eq!(build_trade_matrix(&t).unwrap().x.shape(), (1, 1));
        assert!(t.push("X", "y", -1.0).is_err());
    }

    #[test]
    fn uniform_exports_give_unit_indices() {
        let r = balassa_matrix(&labelled(DenseMatrix::from_fn(3, 4, |_, _| 7.0))).unwrap();
        assert!(r.b.as_slice().iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert!(r.s.as_slice().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn block_diagonal_exports() {
        let r = balassa_matrix(&labelled(DenseMatrix::from_rows(&[[10.0, 0.0], [0.0, 10.0]]).unwrap())).unwrap();
        assert_eq!(r.b, DenseMatrix::from_rows(&[[2.0, 0.0], [0.0, 2.0]]).unwrap());
        assert_eq!(r.s, DenseMatrix::identity(2));
    }

    #[test]
    fn matches_scalar_formula() {
        let mut rng = RngStream::new(20);
        let x = DenseMatrix::from_fn(20, 30, |_, _| rng.uniform() * 100.0 + 0.01);
        let r = balassa_matrix(&labelled(x.clone())).unwrap();
        assert!(r.b.max_abs_diff(&oracle::balassa_scalar(&x)).unwrap() <= 1e-12);
    }

    #[test]
    fn zero_margin_names_the_culprit() {
        let x = DenseMatrix::from_rows(&[[1.0, 0.0], [2.0, 0.0]]).unwrap();
        match balassa_matrix(&labelled(x)) {
            Err(Error::DegenerateMargin { axis, label }) => {
                assert_eq!(axis, "product");
                assert_eq!(label, "p1");
            }
            other => panic!("unexpected {other:?}"),
        }
        let x = DenseMatrix::from_rows(&[[0.0, 0.0], [2.0, 1.0]]).unwrap();
        assert!(matches!(
            balassa_matrix(&labelled(x)),
            Err(Error::DegenerateMargin { axis: "country", .. })
        ));
    }

    #[test]
    fn sig17_formatting() {
        assert_eq!(format_sig17(1.0), "1");
        assert_eq!(format_sig17(0.0), "0");
        assert_eq!(format_sig17(0.1), "0.10000000000000001");
        assert_eq!(format_sig17(2.5e-7), "2.4999999999999999e-07");
        assert_eq!(format_sig17(1e20), "1e+20");
        for v in [std::f64::consts::PI, 1.0 / 3.0, 123456.789, 4.6e-6, 1e300] {
            assert_eq!(format_sig17(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn export_shapes_and_label_check() {
        let one = DenseMatrix::from_rows(&[[1.0]]).unwrap();
        let text = matrix_csv_string(&one, &["A".into()], &["p".into()]).unwrap();
        assert_eq!(text, "country,p\nA,1\n");
        assert!(matrix_csv_string(&one, &[], &["p".into()]).is_err());
    }

    #[test]
    fn synthetic_matrix_has_positive_margins() {
        let m = synthetic_trade_matrix(&mut RngStream::new(1), 12, 269).unwrap();
        assert!(balassa_matrix(&m).is_ok());
    }
}
