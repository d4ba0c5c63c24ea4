//! Matrix Market I/O for [`DenseSymMatrix`].
//!
//! Reads `matrix array real symmetric` (lower triangle, column-major) and
//! `matrix coordinate real symmetric` (1-based triplets, either triangle).
//! Writes the array form with 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::linalg::DenseSymMatrix;

#[derive(Clone, Copy, PartialEq)]
enum Layout {
    Array,
    Coordinate,
}

pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<DenseSymMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_with_path(&text, path)
}

pub fn parse_matrix_market(text: &str) -> Result<DenseSymMatrix> {
    parse_with_path(text, Path::new("<input>"))
}

fn parse_with_path(text: &str, path: &Path) -> Result<DenseSymMatrix> {
    let err = |line: usize, msg: String| Error::Parse {
        path: PathBuf::from(path),
        line,
        msg,
    };

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines
        .next()
        .ok_or_else(|| err(1, "empty file".to_string()))?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(err(1, format!("not a Matrix Market header: {header:?}")));
    }
    let layout = match tokens[2].as_str() {
        "array" => Layout::Array,
        "coordinate" => Layout::Coordinate,
        other => return Err(err(1, format!("unsupported layout {other:?}"))),
    };
    if tokens[3] != "real" {
        return Err(err(1, format!("unsupported field {:?}, expected real", tokens[3])));
    }
    if tokens[4] != "symmetric" {
        return Err(err(1, format!("unsupported symmetry {:?}, expected symmetric", tokens[4])));
    }

    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| err(1, "missing size line".to_string()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| err(size_line, format!("bad size line: {e}")))?;
    let expected_len = if layout == Layout::Array { 2 } else { 3 };
    if dims.len() != expected_len || dims[0] != dims[1] {
        return Err(err(size_line, format!("expected square size line, got {size:?}")));
    }
    let n = dims[0];
    if n == 0 {
        return Err(err(size_line, "matrix dimension must be at least 1".to_string()));
    }
    let mut data = vec![0.0; n * n];

    let parse_value = |line: usize, t: &str| -> Result<f64> {
        let v: f64 = t
            .parse()
            .map_err(|e| err(line, format!("bad value {t:?}: {e}")))?;
        if !v.is_finite() {
            return Err(err(line, format!("non-finite value {t:?}")));
        }
        Ok(v)
    };

    match layout {
        Layout::Array => {
            let mut slots = (0..n).flat_map(|j| (j..n).map(move |i| (i, j)));
            let mut last_line = size_line;
            for (line, content) in body {
                last_line = line;
                for t in content.split_whitespace() {
                    let (i, j) = slots
                        .next()
                        .ok_or_else(|| err(line, "too many entries".to_string()))?;
                    let v = parse_value(line, t)?;
                    data[i * n + j] = v;
                    data[j * n + i] = v;
                }
            }
            if slots.next().is_some() {
                return Err(err(last_line, format!("expected {} entries", n * (n + 1) / 2)));
            }
        }
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut seen = 0;
            for (line, content) in body {
                let t: Vec<&str> = content.split_whitespace().collect();
                if t.len() != 3 {
                    return Err(err(line, format!("expected 'row col value', got {content:?}")));
                }
                let index = |s: &str| -> Result<usize> {
                    let k: usize = s
                        .parse()
                        .map_err(|e| err(line, format!("bad index {s:?}: {e}")))?;
                    if k == 0 || k > n {
                        return Err(err(line, format!("index {k} out of range 1..={n}")));
                    }
                    Ok(k - 1)
                };
                let (i, j) = (index(t[0])?, index(t[1])?);
                let v = parse_value(line, t[2])?;
                data[i * n + j] = v;
                data[j * n + i] = v;
                seen += 1;
                if seen > nnz {
                    return Err(err(line, format!("more than the declared {nnz} entries")));
                }
            }
            if seen != nnz {
                return Err(err(size_line, format!("declared {nnz} entries, found {seen}")));
            }
        }
    }
    DenseSymMatrix::from_row_major(n, data)
}

pub fn to_matrix_market_string(a: &DenseSymMatrix) -> String {
    let n = a.dim();
    let mut out = String::new();
    out.push_str("%%MatrixMarket matrix array real symmetric\n");
    let _ = writeln!(out, "{n} {n}");
    for j in 0..n {
        for i in j..n {
            let _ = writeln!(out, "{:.16e}", a.get(i, j));
        }
    }
    out
}

pub fn write_matrix_market(path: impl AsRef<Path>, a: &DenseSymMatrix) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_matrix_market_string(a)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_lower_triangle_column_major() {
        let text = "%%MatrixMarket matrix array real symmetric\n% comment\n3 3\n1\n2\n3\n4\n5\n6\n";
        let a = parse_matrix_market(text).unwrap();
        // column 0: a00=1 a10=2 a20=3; column 1: a11=4 a21=5; column 2: a22=6
        assert_eq!(a.row(0), &[1.0, 2.0, 3.0]);
        assert_eq!(a.row(1), &[2.0, 4.0, 5.0]);
        assert_eq!(a.row(2), &[3.0, 5.0, 6.0]);
    }

    #[test]
    fn coordinate_symmetric() {
        let text = "%%MatrixMarket matrix coordinate real symmetric\n2 2 3\n1 1 2.0\n2 1 -1\n2 2 2\n";
        let a = parse_matrix_market(text).unwrap();
        assert_eq!(a.row(0), &[2.0, -1.0]);
        assert_eq!(a.row(1), &[-1.0, 2.0]);
    }

    #[test]
    fn rejects_general_and_short_files() {
        assert!(parse_matrix_market("%%MatrixMarket matrix array real general\n1 1\n1\n").is_err());
        let err = parse_matrix_market("%%MatrixMarket matrix array real symmetric\n2 2\n1\n2\n")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        assert!(parse_matrix_market(
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1.0\n"
        )
        .is_err());
    }

    #[test]
    fn writer_round_trips_exactly() {
        let a = DenseSymMatrix::from_rows(&[
            vec![0.1, 1.0 / 3.0, -2.5e-300],
            vec![1.0 / 3.0, 2.01, 7.0],
            vec![-2.5e-300, 7.0, 1e20],
        ])
        .unwrap();
        let text = to_matrix_market_string(&a);
        assert!(text.starts_with("%%MatrixMarket matrix array real symmetric\n3 3\n"));
        assert_eq!(parse_matrix_market(&text).unwrap(), a);
    }
}
