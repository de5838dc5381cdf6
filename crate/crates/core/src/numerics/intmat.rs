use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::Vec2;

/// Small dense square integer matrix, row-major.
///
/// Serializes as a JSON array of rows.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMat {
    n: usize,
    data: Vec<i64>,
}

impl IntMat {
    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        IntMat { n, data: vec![0; n * n] }
    }

    /// Panics if `rows` is not square.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        IntMat::try_from_rows(rows).expect("matrix rows must form a square")
    }

    pub fn try_from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, String> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(format!("row of length {} in a {n}×{n} matrix", row.len()));
            }
            data.extend_from_slice(row);
        }
        Ok(IntMat { n, data })
    }

    /// Matrix sending basis vector `j` to `perm[j]`, i.e. entry `(perm[j], j)` is 1.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = IntMat::zeros(n);
        for (j, &i) in perm.iter().enumerate() {
            m.data[i * n + j] = 1;
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.data[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: i64) {
        self.data[row * self.n + col] = value;
    }

    pub fn add_to(&mut self, row: usize, col: usize, delta: i64) {
        self.data[row * self.n + col] += delta;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= 0)
    }

    /// First entry where the two matrices differ, as `(row, col, self, other)`.
    pub fn first_difference(&self, other: &IntMat) -> Option<(usize, usize, i64, i64)> {
        assert_eq!(self.n, other.n);
        (0..self.n * self.n)
            .find(|&k| self.data[k] != other.data[k])
            .map(|k| (k / self.n, k % self.n, self.data[k], other.data[k]))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k * n + k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| m[i * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    m.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i * n + j] = (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
                }
            }
            prev = m[k * n + k];
        }
        sign * m[n * n - 1]
    }

    /// Rows act on a tuple of planar vectors: `out[i] = Σ_j m[i][j]·v[j]`.
    pub fn apply_vecs(&self, v: &[Vec2]) -> Vec<Vec2> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(Vec2::zero(), |acc, j| match self.get(i, j) {
                    0 => acc,
                    1 => &acc + &v[j],
                    k => &acc + &v[j].scale_int(k),
                })
            })
            .collect()
    }
}

impl Mul<&IntMat> for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.n, rhs.n, "size mismatch");
        let n = self.n;
        let mut out = IntMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let prod = a.checked_mul(rhs.data[k * n + j]).expect("integer matrix overflow");
                    out.data[i * n + j] = out.data[i * n + j].checked_add(prod).expect("integer matrix overflow");
                }
            }
        }
        out
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMat {
    type Error = String;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, String> {
        IntMat::try_from_rows(&rows)
    }
}

impl From<IntMat> for Vec<Vec<i64>> {
    fn from(m: IntMat) -> Self {
        m.rows()
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}×{}", self.n, self.n)?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
