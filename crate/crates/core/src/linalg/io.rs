//! JSON matrix files: `{"rows": r, "cols": c, "entries": [[re, im], ...]}`
//! in row-major order. Vectors are stored with `cols = 1`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ComplexMatrix, C64};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl From<&ComplexMatrix> for MatrixFile {
    fn from(m: &ComplexMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let z = m[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        MatrixFile {
            rows: m.nrows(),
            cols: m.ncols(),
            entries,
        }
    }
}

impl TryFrom<MatrixFile> for ComplexMatrix {
    type Error = Error;

    fn try_from(f: MatrixFile) -> Result<Self> {
        if f.rows == 0 || f.cols == 0 {
            return Err(Error::Format("rows and cols must be positive".into()));
        }
        if f.entries.len() != f.rows * f.cols {
            return Err(Error::Format(format!(
                "expected {} entries, found {}",
                f.rows * f.cols,
                f.entries.len()
            )));
        }
        if f.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Format("entries must be finite".into()));
        }
        Ok(ComplexMatrix::from_row_iterator(
            f.rows,
            f.cols,
            f.entries.iter().map(|&[re, im]| C64::new(re, im)),
        ))
    }
}

pub fn matrix_to_json(m: &ComplexMatrix) -> Result<String> {
    Ok(serde_json::to_string(&MatrixFile::from(m))?)
}

pub fn matrix_from_json(s: &str) -> Result<ComplexMatrix> {
    let file: MatrixFile = serde_json::from_str(s)?;
    file.try_into()
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<ComplexMatrix> {
    matrix_from_json(&fs::read_to_string(path)?)
}

pub fn write_matrix(path: impl AsRef<Path>, m: &ComplexMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use proptest::prelude::*;

    #[test]
    fn row_major_layout() {
        let m = ComplexMatrix::from_row_slice(
            2,
            2,
            &[c64(1.0, 0.0), c64(2.0, 0.5), c64(3.0, 0.0), c64(4.0, -1.0)],
        );
        let json = matrix_to_json(&m).unwrap();
        assert_eq!(
            json,
            r#"{"rows":2,"cols":2,"entries":[[1.0,0.0],[2.0,0.5],[3.0,0.0],[4.0,-1.0]]}"#
        );
    }

    #[test]
    fn rejects_wrong_entry_count() {
        let bad = r#"{"rows":2,"cols":2,"entries":[[1.0,0.0]]}"#;
        assert!(matches!(matrix_from_json(bad), Err(Error::Format(_))));
        assert!(matrix_from_json("{").is_err());
    }

    proptest! {
        #[test]
        fn json_round_trip(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let mut rng = crate::rng::substream(seed, 0, 0);
            let m = crate::linalg::gaussian_matrix(rows, cols, &mut rng);
            let back = matrix_from_json(&matrix_to_json(&m).unwrap()).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
