use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use nalgebra::{DMatrix, DVector};

use super::LinearModelData;
use crate::error::{Error, Result};

/// How a user-facing penalty maps to the `λ` of `½‖y - Xβ‖² + λ‖β‖₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaScale {
    /// Use the value as is.
    Objective,
    /// glmnet's convention: `(1/2n)‖y - Xβ‖² + λ‖β‖₁` on predictors with unit
    /// variance and a response scaled by its standard deviation. On
    /// unit-norm columns this is `λ·√n·sd(y)`.
    #[default]
    Glmnet,
}

impl LambdaScale {
    pub fn to_objective(&self, lambda: f64, data: &LinearModelData) -> f64 {
        match self {
            LambdaScale::Objective => lambda,
            LambdaScale::Glmnet => {
                let y = data.y();
                let n = y.len() as f64;
                let mean = y.mean();
                let sd = (y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
                lambda * n.sqrt() * sd
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadOptions {
    /// Header name of the response column; every other column is a predictor.
    pub response: String,
    /// Scale centred predictor columns to unit Euclidean norm.
    pub standardize: bool,
    /// Known noise variance. When absent it is estimated from the full
    /// least-squares fit with an intercept, `RSS/(n - m - 1)`.
    pub sigma2: Option<f64>,
}

impl LoadOptions {
    pub fn new(response: impl Into<String>) -> Self {
        LoadOptions {
            response: response.into(),
            standardize: true,
            sigma2: None,
        }
    }
}

fn input(row: Option<usize>, column: Option<&str>, message: impl Into<String>) -> Error {
    Error::Input {
        row,
        column: column.map(str::to_owned),
        message: message.into(),
    }
}

fn sniff_delimiter(path: &Path) -> Result<u8> {
    let mut first = String::new();
    BufReader::new(File::open(path)?).read_line(&mut first)?;
    if first.trim().is_empty() {
        return Err(input(None, None, "file is empty or has a blank header row"));
    }
    Ok(if first.contains('\t') { b'\t' } else { b',' })
}

/// Reads a delimited table with a header row into a regression problem.
///
/// The response is centred; predictors are centred and, if requested, scaled
/// to unit norm. Rows are numbered from 1, not counting the header.
pub fn load_regression_data(path: impl AsRef<Path>, options: &LoadOptions) -> Result<LinearModelData> {
    let path = path.as_ref();
    let delimiter = sniff_delimiter(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    let response = headers.iter().position(|h| *h == options.response).ok_or_else(|| {
        input(
            None,
            Some(&options.response),
            format!("response column not found; header has {}", headers.join(", ")),
        )
    })?;
    let predictors: Vec<usize> = (0..headers.len()).filter(|&c| c != response).collect();
    if predictors.is_empty() {
        return Err(input(None, None, "no predictor columns"));
    }

    let mut x_rows: Vec<f64> = Vec::new();
    let mut y: Vec<f64> = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 1;
        let record = record.map_err(|e| input(Some(row), None, e.to_string()))?;
        if record.len() != headers.len() {
            return Err(input(
                Some(row),
                None,
                format!("expected {} fields, found {}", headers.len(), record.len()),
            ));
        }
        let cell = |c: usize| -> Result<f64> {
            let raw = &record[c];
            match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(input(
                    Some(row),
                    Some(&headers[c]),
                    format!("'{raw}' is not a finite number"),
                )),
            }
        };
        y.push(cell(response)?);
        for &c in &predictors {
            x_rows.push(cell(c)?);
        }
    }

    let (n, m) = (y.len(), predictors.len());
    if n <= m + 1 {
        return Err(input(
            None,
            None,
            format!("need more rows than predictors plus one, got {n} rows and {m} predictors"),
        ));
    }
    let mut x = DMatrix::from_row_slice(n, m, &x_rows);
    let mut y = DVector::from_vec(y);
    y.add_scalar_mut(-y.mean());
    for (j, &c) in predictors.iter().enumerate() {
        let mut col = x.column_mut(j);
        let mean = col.mean();
        col.add_scalar_mut(-mean);
        let norm = col.norm();
        if norm == 0.0 {
            return Err(input(None, Some(&headers[c]), "predictor is constant"));
        }
        if options.standardize {
            col /= norm;
        }
    }

    let sigma2 = match options.sigma2 {
        Some(s) => s,
        None => {
            let chol = x
                .tr_mul(&x)
                .cholesky()
                .ok_or_else(|| input(None, None, "predictors are linearly dependent"))?;
            let beta = chol.solve(&x.tr_mul(&y));
            let rss = (&y - &x * beta).norm_squared();
            rss / (n - m - 1) as f64
        }
    };
    let names = predictors.iter().map(|&c| headers[c].clone()).collect();
    LinearModelData::with_names(x, y, sigma2, names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    const SMALL: &str = "a,b,y\n1,2,3\n2,1,5\n3,5,4\n4,3,9\n5,4,7\n";

    #[test]
    fn loads_and_standardizes() {
        let f = write(SMALL);
        let d = load_regression_data(f.path(), &LoadOptions::new("y")).unwrap();
        assert_eq!((d.n(), d.m()), (5, 2));
        assert_eq!(d.names(), &["a".to_string(), "b".to_string()]);
        for col in d.x().column_iter() {
            assert!((col.norm() - 1.0).abs() < 1e-14);
            assert!(col.sum().abs() < 1e-14);
        }
        assert!(d.y().sum().abs() < 1e-12);
        assert!(d.sigma2() > 0.0);
    }

    #[test]
    fn tab_separated_input() {
        let f = write(&SMALL.replace(',', "\t"));
        let d = load_regression_data(f.path(), &LoadOptions::new("y")).unwrap();
        assert_eq!(d.m(), 2);
    }

    #[test]
    fn sigma_override_is_verbatim() {
        let f = write(SMALL);
        let opts = LoadOptions {
            sigma2: Some(0.123),
            ..LoadOptions::new("y")
        };
        assert_eq!(load_regression_data(f.path(), &opts).unwrap().sigma2(), 0.123);
    }

    #[test]
    fn bad_cell_names_row_and_column() {
        let f = write("a,b,y\n1,2,3\n2,x,5\n3,5,4\n4,3,9\n5,4,7\n");
        match load_regression_data(f.path(), &LoadOptions::new("y")) {
            Err(Error::Input { row, column, .. }) => {
                assert_eq!(row, Some(2));
                assert_eq!(column.as_deref(), Some("b"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_response_and_short_files() {
        let f = write(SMALL);
        assert!(matches!(
            load_regression_data(f.path(), &LoadOptions::new("nope")),
            Err(Error::Input { .. })
        ));
        let f = write("a,b,y\n1,2,3\n2,1,5\n");
        assert!(matches!(
            load_regression_data(f.path(), &LoadOptions::new("y")),
            Err(Error::Input { .. })
        ));
    }

    #[test]
    fn glmnet_scale() {
        let f = write(SMALL);
        let d = load_regression_data(f.path(), &LoadOptions::new("y")).unwrap();
        // centred y = (-2.6, -0.6, -1.6, 3.4, 1.4): sd = √(23.2/4)
        let want = 0.1 * 5f64.sqrt() * (23.2f64 / 4.0).sqrt();
        assert!((LambdaScale::Glmnet.to_objective(0.1, &d) - want).abs() < 1e-14);
        assert_eq!(LambdaScale::Objective.to_objective(0.1, &d), 0.1);
    }
}
