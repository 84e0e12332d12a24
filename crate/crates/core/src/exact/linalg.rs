//! Exact linear algebra over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigRational>>;

/// Scales each row by the lcm of its denominators to get integer rows.
pub fn integer_rows(rows: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect()
}

/// Rank via Bareiss fraction-free elimination on integer rows.
pub fn rank(rows: &[Vec<BigRational>]) -> usize {
    let mut a = integer_rows(rows);
    if a.is_empty() {
        return 0;
    }
    let ncols = a[0].len();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form. Returns the nonzero rows and pivot columns.
pub fn rref(rows: &[Vec<BigRational>]) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = rows.to_vec();
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of the right kernel `{x : A x = 0}` where `A` has `ncols` columns.
pub fn kernel(rows: &[Vec<BigRational>], ncols: usize) -> Matrix {
    let (red, pivots) = rref(rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `A x = b` exactly. Returns the unique solution, or `None` when the
/// system is inconsistent or underdetermined.
pub fn solve_unique(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let ncols = a.first().map_or(0, Vec::len);
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.contains(&ncols) || pivots.len() != ncols {
        return None;
    }
    Some(red.iter().map(|row| row[ncols].clone()).collect())
}

/// Scales a nonzero rational vector to the primitive integer vector with the
/// same direction.
pub fn primitive_integer(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

pub fn transpose(a: &[Vec<BigRational>]) -> Matrix {
    let ncols = a.first().map_or(0, Vec::len);
    (0..ncols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).fold(BigRational::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_nonnegative(v: &[BigRational]) -> bool {
    v.iter().all(|x| !x.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&m(&[&[0, 1], &[1, 2]])), 2);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[2, 4, 6]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(&m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5], &[1, 1, 1]])), 3);
    }

    #[test]
    fn rank_agrees_with_rref() {
        let a = m(&[&[3, -1, 4, 1], &[5, 9, -2, 6], &[8, 8, 2, 7], &[-2, -10, 6, -5]]);
        assert_eq!(rank(&a), rref(&a).1.len());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[1, -1, 0], &[0, 1, -1]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 1);
        for row in &a {
            assert!(dot(row, &k[0]).is_zero());
        }
        assert_eq!(primitive_integer(&k[0]), vec![BigInt::from(1); 3]);
    }

    #[test]
    fn solve_unique_cases() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let x = solve_unique(&a, &[BigRational::from_integer(1.into()), BigRational::from_integer(1.into())]).unwrap();
        assert_eq!(x[1], BigRational::new(1.into(), 4.into()));
        let sing = m(&[&[1, 1], &[2, 2]]);
        assert!(solve_unique(&sing, &[BigRational::one(), BigRational::one()]).is_none());
    }
}
