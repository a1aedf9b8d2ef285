use std::fmt::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::EvalError;

/// A dense `2^out × 2^in` complex matrix, row-major. Wire 0 is the most
/// significant bit of a row or column index.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<ComplexMatrix, EvalError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(EvalError::Shape("ragged rows".into()));
        }
        Ok(ComplexMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Real entries, row by row.
    pub fn from_real(rows: &[&[f64]]) -> ComplexMatrix {
        let v = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        ComplexMatrix::from_rows(v).expect("rectangular literal")
    }

    pub(crate) fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> ComplexMatrix {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn scale(&self, c: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut t = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `other`. Panics on shape mismatch.
    pub fn max_diff(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc {
            shape: [usize; 2],
            entries: Vec<[f64; 2]>,
        }
        let doc = Doc {
            shape: [self.rows, self.cols],
            entries: self.data.iter().map(|z| [clean(z.re), clean(z.im)]).collect(),
        };
        serde_json::to_string(&doc).expect("finite entries serialize")
    }

    /// One row per line, entries as `a+bi` with 6 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format_complex(self.get(r, c))).collect();
            let _ = writeln!(s, "{}", row.join("  "));
        }
        s
    }
}

fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
    let mut m = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let x = a.get(ar, ac);
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    m.data[(ar * b.rows + br) * cols + ac * b.cols + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    m
}

/// `a · b`.
pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, EvalError> {
    if a.cols != b.rows {
        return Err(EvalError::Shape(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut m = ComplexMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..b.cols {
                m.data[i * b.cols + j] += x * b.get(k, j);
            }
        }
    }
    Ok(m)
}

/// `%g`-style rendering with 6 significant digits.
fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let exp = x.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        let s = trim(format!("{x:.decimals$}"));
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("scientific format has an exponent");
        format!("{}e{}", trim(mantissa.to_string()), e)
    }
}

pub fn format_complex(z: Complex64) -> String {
    let re = format_real(z.re);
    let im = format_real(z.im.abs());
    let sign = if z.im < 0.0 && im != "0" { '-' } else { '+' };
    format!("{re}{sign}{im}i")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    #[test]
    fn kron_and_matmul() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        assert_eq!(matmul(&pauli_x(), &pauli_x()).unwrap(), i2);
        let one = ComplexMatrix::identity(1);
        assert_eq!(kron(&one, &pauli_x()), pauli_x());
        assert!(matmul(&i2, &ComplexMatrix::identity(4)).is_err());
    }

    #[test]
    fn kron_puts_first_factor_on_high_bits() {
        let e1 = ComplexMatrix::from_real(&[&[0.0], &[1.0]]);
        let e0 = ComplexMatrix::from_real(&[&[1.0], &[0.0]]);
        let v = kron(&e1, &e0);
        assert_eq!(v.get(2, 0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn json_format() {
        let m = ComplexMatrix::from_rows(vec![vec![Complex64::new(1.0, -0.0), Complex64::new(0.5, 2.0)]]).unwrap();
        assert_eq!(m.to_json(), r#"{"shape":[1,2],"entries":[[1.0,0.0],[0.5,2.0]]}"#);
    }

    #[test]
    fn text_format() {
        assert_eq!(format_complex(Complex64::new(1.0, 0.0)), "1+0i");
        assert_eq!(format_complex(Complex64::new(0.5, -0.5)), "0.5-0.5i");
        assert_eq!(format_complex(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)), "0.707107+0i");
        assert_eq!(format_complex(Complex64::new(-1.0e-7, 123456789.0)), "-1e-7+1.23457e8i");
        assert_eq!(format_complex(Complex64::new(0.0, -1e-300)), "0-1e-300i");
    }
}
