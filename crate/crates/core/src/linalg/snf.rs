//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{CoeffRing, ExactMatrix, LinalgError, Scalar};

/// Result of [`smith_normal_form`]: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub d: ExactMatrix,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
}

impl SmithForm {
    /// The nonzero diagonal entries, each dividing the next.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i).to_bigint().expect("integral"))
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

struct Dense {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Dense {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src = m[j].clone();
            for (x, s) in m[i].iter_mut().zip(src) {
                *x += c * s;
            }
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                let s = row[j].clone();
                row[i] += c * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn to_matrix(rows: &[Vec<BigInt>], cols: usize) -> ExactMatrix {
    let scalars: Vec<Vec<Scalar>> =
        rows.iter().map(|r| r.iter().cloned().map(Scalar::from_bigint).collect()).collect();
    ExactMatrix::from_scalar_rows(CoeffRing::Integers, &scalars, cols).expect("shape")
}

/// Computes `d = u * m * v` with `d` diagonal, each diagonal entry dividing
/// the next, and `u`, `v` unimodular.
pub fn smith_normal_form(m: &ExactMatrix) -> Result<SmithForm, LinalgError> {
    let (rows, cols) = m.shape();
    let mut a = vec![vec![BigInt::zero(); cols]; rows];
    for (i, row) in m.to_dense().into_iter().enumerate() {
        for (j, s) in row.into_iter().enumerate() {
            a[i][j] = s.to_bigint().ok_or(LinalgError::RequiresIntegers)?;
        }
    }
    let mut st = Dense { a, u: identity(rows), v: identity(cols) };

    for t in 0..rows.min(cols) {
        loop {
            // smallest nonzero entry of the remaining block, first in row-major order
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let x = &st.a[i][j];
                    if !x.is_zero() && best.map_or(true, |(bi, bj)| x.abs() < st.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Ok(finish(st, rows, cols));
            };
            st.swap_rows(t, pi);
            st.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if !st.a[i][t].is_zero() {
                    let q = st.a[i][t].div_floor(&st.a[t][t]);
                    st.add_row(i, t, &-q);
                    clean &= st.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !st.a[t][j].is_zero() {
                    let q = st.a[t][j].div_floor(&st.a[t][t]);
                    st.add_col(j, t, &-q);
                    clean &= st.a[t][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the remaining block by the pivot
            let pivot = st.a[t][t].clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !st.a[i][j].is_multiple_of(&pivot)));
            match bad {
                Some(i) => st.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if st.a[t][t].is_negative() {
            st.negate_row(t);
        }
    }
    Ok(finish(st, rows, cols))
}

fn finish(st: Dense, rows: usize, cols: usize) -> SmithForm {
    SmithForm { d: to_matrix(&st.a, cols), u: to_matrix(&st.u, rows), v: to_matrix(&st.v, cols) }
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn integer_determinant(m: &ExactMatrix) -> Result<BigInt, LinalgError> {
    let n = m.rows();
    if n != m.cols() {
        return Err(LinalgError::Shape("determinant of a non-square matrix".into()));
    }
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(|s| s.to_bigint().ok_or(LinalgError::RequiresIntegers)).collect())
        .collect::<Result<_, _>>()?;
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(BigInt::zero());
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = val / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>], cols: usize) -> ExactMatrix {
        ExactMatrix::from_rows(CoeffRing::Integers, rows, cols).unwrap()
    }

    fn check(m: &ExactMatrix) -> SmithForm {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m).unwrap().mul(&s.v).unwrap(), s.d);
        assert_eq!(integer_determinant(&s.u).unwrap().abs(), BigInt::one());
        assert_eq!(integer_determinant(&s.v).unwrap().abs(), BigInt::one());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn diag_two_three() {
        // gcd(2,3)=1, lcm=6
        let s = check(&z(&[vec![2, 0], vec![0, 3]], 2));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn identity_and_zero() {
        let s = check(&ExactMatrix::identity(CoeffRing::Integers, 3));
        assert_eq!(s.d, ExactMatrix::identity(CoeffRing::Integers, 3));
        let s = check(&ExactMatrix::zeros(CoeffRing::Integers, 2, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn rectangular() {
        let s = check(&z(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }
}
