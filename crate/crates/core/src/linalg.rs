//! Exact determinants by Bareiss fraction-free elimination, and the
//! maximal minors of almost-square integer matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Determinant of a square big-integer matrix. Fraction-free elimination:
/// every division below is exact by the Sylvester identity.
pub fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = t / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Determinant of a square rational matrix: rows are cleared to integers
/// by their denominator lcm, the integer determinant is divided back.
pub fn det_rational(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut cleared = Vec::with_capacity(n);
    let mut scale = BigInt::one();
    for row in m {
        assert_eq!(row.len(), n, "matrix must be square");
        let mut l = BigInt::one();
        for x in row {
            l = l.lcm(x.denom());
        }
        let lr = BigRational::from(l.clone());
        cleared.push(row.iter().map(|x| (x * &lr).to_integer()).collect::<Vec<_>>());
        scale *= l;
    }
    BigRational::new(det_bigint(&cleared), scale)
}

/// The n maximal minors of an (n-1) x n matrix: entry c is the determinant
/// of the matrix with column c deleted (no cofactor sign applied).
pub fn minors_drop_column(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = rows + 1;
    for row in m {
        assert_eq!(row.len(), cols, "matrix must be (n-1) x n");
    }
    (0..cols)
        .map(|c| {
            let sub: Vec<Vec<BigInt>> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter_map(|(j, x)| (j != c).then(|| x.clone()))
                        .collect()
                })
                .collect();
            det_bigint(&sub)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    /// oracle: naive Laplace expansion along the first row
    fn det_laplace(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for c in 0..n {
            if m[0][c].is_zero() {
                continue;
            }
            let sub: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter_map(|(j, x)| (j != c).then(|| x.clone()))
                        .collect()
                })
                .collect();
            let term = &m[0][c] * det_laplace(&sub);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn small_frozen_determinants() {
        assert_eq!(det_bigint(&[vec![bi(7)]]), bi(7));
        assert_eq!(det_bigint(&[vec![bi(1), bi(2)], vec![bi(3), bi(4)]]), bi(-2));
        let id3: Vec<Vec<BigInt>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { bi(1) } else { bi(0) }).collect())
            .collect();
        assert_eq!(det_bigint(&id3), bi(1));
    }

    #[test]
    fn zero_pivot_needs_row_swap() {
        let m = vec![
            vec![bi(0), bi(1), bi(2)],
            vec![bi(1), bi(0), bi(3)],
            vec![bi(4), bi(5), bi(0)],
        ];
        assert_eq!(det_bigint(&m), det_laplace(&m));
    }

    #[test]
    fn singular_matrices_give_zero() {
        let m = vec![
            vec![bi(1), bi(2), bi(3)],
            vec![bi(2), bi(4), bi(6)],
            vec![bi(7), bi(8), bi(9)],
        ];
        assert_eq!(det_bigint(&m), bi(0));
        let z = vec![vec![bi(0), bi(0)], vec![bi(0), bi(0)]];
        assert_eq!(det_bigint(&z), bi(0));
    }

    #[test]
    fn matches_laplace_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for n in 1..=6usize {
            for _ in 0..20 {
                let m: Vec<Vec<BigInt>> = (0..n)
                    .map(|_| (0..n).map(|_| bi(rng.gen_range(-9..=9))).collect())
                    .collect();
                assert_eq!(det_bigint(&m), det_laplace(&m));
            }
        }
    }

    #[test]
    fn transpose_preserves_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = 4;
            let m: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| bi(rng.gen_range(-9..=9))).collect())
                .collect();
            let t: Vec<Vec<BigInt>> = (0..n)
                .map(|i| (0..n).map(|j| m[j][i].clone()).collect())
                .collect();
            assert_eq!(det_bigint(&m), det_bigint(&t));
        }
    }

    #[test]
    fn rational_determinant_scales_back() {
        let half = BigRational::new(bi(1), bi(2));
        let third = BigRational::new(bi(1), bi(3));
        let m = vec![
            vec![half.clone(), third.clone()],
            vec![third.clone(), half.clone()],
        ];
        // det = 1/4 - 1/9 = 5/36
        assert_eq!(det_rational(&m), BigRational::new(bi(5), bi(36)));
    }

    #[test]
    fn rational_matches_integer_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let n = 4;
            let mi: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| bi(rng.gen_range(-9..=9))).collect())
                .collect();
            let mr: Vec<Vec<BigRational>> = mi
                .iter()
                .map(|row| row.iter().map(|x| BigRational::from(x.clone())).collect())
                .collect();
            assert_eq!(det_rational(&mr), BigRational::from(det_bigint(&mi)));
        }
    }

    #[test]
    fn minors_match_laplace_submatrices() {
        let m = vec![
            vec![bi(1), bi(2), bi(3), bi(4)],
            vec![bi(0), bi(1), bi(0), bi(2)],
            vec![bi(5), bi(0), bi(1), bi(1)],
        ];
        let minors = minors_drop_column(&m);
        assert_eq!(minors.len(), 4);
        for (c, minor) in minors.iter().enumerate() {
            let sub: Vec<Vec<BigInt>> = m
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter_map(|(j, x)| (j != c).then(|| x.clone()))
                        .collect()
                })
                .collect();
            assert_eq!(minor, &det_laplace(&sub), "column {c}");
        }
    }

    #[test]
    fn minors_give_kernel_vector() {
        // signed minors (-1)^c * minor_c form a kernel vector of the 2x3 map
        let m = vec![vec![bi(1), bi(2), bi(3)], vec![bi(4), bi(5), bi(6)]];
        let minors = minors_drop_column(&m);
        for row in &m {
            let mut acc = BigInt::zero();
            for (c, x) in row.iter().enumerate() {
                let signed = if c % 2 == 0 { minors[c].clone() } else { -minors[c].clone() };
                acc += x * signed;
            }
            assert_eq!(acc, bi(0));
        }
    }
}
